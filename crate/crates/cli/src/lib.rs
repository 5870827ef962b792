//! Batch front end: verifications, kernels, expressions and relation checks,
//! reported as JSON certificates or a plain table.

pub mod elements;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use nowicki_core::assoc::{self, uv};
use nowicki_core::commutative::{self, GenVar, GeneratorExpression, PolyElement, WeitzenboeckDerivation};
use nowicki_core::graded::{compositions, kernel_of, ComponentCertificate, Key};
use nowicki_core::grassmann::{self, GrassOptions, RaiseReading, SeedRange};
use nowicki_core::linalg::format_scalar;
use nowicki_core::{lie, poisson, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use elements::{load_element, poly_json, Element};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("input: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Subcommand {
    Kernel,
    Verify,
    Express,
    Relations,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algebra {
    Poly,
    Lie,
    Assoc,
    Grassmann,
    Poisson,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Claim {
    Nowicki,
    Principal,
    GList,
    Grass,
    Kb3,
    Kb4,
    B2,
    UvRelations,
    STypo,
    Kb3Range,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Reading {
    Printed,
    FullZ,
    Full,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "nowicki", version, about = "Exact constants of Weitzenböck derivations on relatively free algebras")]
pub struct Cli {
    pub subcommand: Subcommand,
    pub algebra: Algebra,
    /// Rank: d for poly/assoc/grassmann, n for lie/poisson.
    #[arg(long = "n", visible_alias = "d")]
    pub n: Option<usize>,
    #[arg(long)]
    pub maxdeg: Option<u32>,
    /// Comma-separated component key.
    #[arg(long, value_delimiter = ',')]
    pub multidegree: Option<Vec<u32>>,
    #[arg(long, value_enum)]
    pub claim: Option<Claim>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Random samples drawn when `--seed` is given.
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
    /// Worker threads for per-component work.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub json: bool,
    /// Exponents m_i for Δ(y_i) = x_i^{m_i} (poly).
    #[arg(long, value_delimiter = ',')]
    pub powers: Option<Vec<u32>>,
    /// Seed ranges for the Grassmann families.
    #[arg(long, value_enum)]
    pub reading: Option<Reading>,
    /// Report `elapsed_ms` as null.
    #[arg(long)]
    pub no_timing: bool,
}

/// One certificate row: JSON payload plus the table cells.
#[derive(Clone, Debug)]
pub struct Cert {
    pub label: String,
    pub key: Key,
    pub ok: bool,
    pub detail: String,
    pub json: Value,
}

impl Cert {
    fn component(c: &ComponentCertificate) -> Self {
        Cert {
            label: c.label.clone(),
            key: c.key.clone(),
            ok: c.ok(),
            detail: format!(
                "dim {:>4}  kernel {:>4}  claimed {:>4}  {}",
                c.dim_component,
                c.dim_kernel,
                c.claimed,
                c.span.verdict.as_str()
            ),
            json: c.to_json(),
        }
    }

    fn relation(r: &uv::RelationCheck) -> Self {
        let label = match &r.reading {
            Some(rd) => format!("{} [{rd}]", r.name),
            None => r.name.clone(),
        };
        Cert {
            label,
            key: vec![],
            ok: r.vanishes(),
            detail: format!(
                "instances {:>5}  {}",
                r.instances,
                if r.vanishes() { "zero".to_string() } else { format!("{} nonzero", r.nonzero.len()) }
            ),
            json: r.to_json(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: Value,
    pub certificates: Vec<Cert>,
    pub findings: Vec<String>,
    pub notes: Vec<String>,
    pub elapsed_ms: Option<u128>,
}

impl Report {
    fn new(command: Value) -> Self {
        Report { command, certificates: vec![], findings: vec![], notes: vec![], elapsed_ms: None }
    }

    pub fn all_equal(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_equal() {
            0
        } else {
            1
        }
    }

    /// Adds component certificates; each failing one becomes a finding.
    fn components(&mut self, what: &str, certs: &[ComponentCertificate]) {
        for c in certs {
            if !c.ok() {
                self.findings.push(format!(
                    "{what}: {} at {:?}: {} (claimed rank {}, kernel rank {})",
                    c.label,
                    c.key,
                    c.span.verdict.as_str(),
                    c.span.rank_a,
                    c.span.rank_b
                ));
            }
        }
        self.certificates.extend(certs.iter().map(Cert::component));
    }

    fn finish(&mut self) {
        self.certificates.sort_by(|a, b| a.key.cmp(&b.key).then_with(|| a.label.cmp(&b.label)));
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "version": VERSION,
            "certificates": self.certificates.iter().map(|c| {
                let mut v = c.json.clone();
                if let Value::Object(m) = &mut v {
                    m.entry("label").or_insert_with(|| json!(c.label));
                    m.entry("key").or_insert_with(|| json!(c.key));
                    m.insert("ok".into(), json!(c.ok));
                }
                v
            }).collect::<Vec<_>>(),
            "summary": {
                "all_equal": self.all_equal(),
                "findings": self.findings,
                "notes": self.notes,
            },
            "elapsed_ms": self.elapsed_ms,
        })
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let c = &self.command;
        let _ = writeln!(s, "nowicki {} — {} {}", VERSION, c["subcommand"].as_str().unwrap_or(""), c["algebra"].as_str().unwrap_or(""));
        let w = self.certificates.iter().map(|c| c.label.chars().count()).max().unwrap_or(5).max(5);
        let kw = self.certificates.iter().map(|c| format!("{:?}", c.key).len()).max().unwrap_or(3).max(3);
        let _ = writeln!(s, "{:<w$}  {:<kw$}  {:<4}  detail", "label", "key", "ok");
        for cert in &self.certificates {
            let _ = writeln!(
                s,
                "{:<w$}  {:<kw$}  {:<4}  {}",
                cert.label,
                format!("{:?}", cert.key),
                if cert.ok { "yes" } else { "NO" },
                cert.detail
            );
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        for f in &self.findings {
            let _ = writeln!(s, "finding: {f}");
        }
        let _ = writeln!(s, "all equal: {}", self.all_equal());
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(s, "elapsed: {ms} ms");
        }
        s
    }
}

fn name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

fn echo(cli: &Cli) -> Value {
    json!({
        "subcommand": name(cli.subcommand),
        "algebra": name(cli.algebra),
        "rank": cli.n,
        "maxdeg": cli.maxdeg,
        "multidegree": cli.multidegree,
        "claim": cli.claim.map(name),
        "input": cli.input.as_ref().map(|p| p.display().to_string()),
        "seed": cli.seed,
        "samples": cli.samples,
        "powers": cli.powers,
        "reading": cli.reading.map(name),
    })
}

/// Size limits enforced before dispatch.
struct Caps {
    rank: usize,
    maxdeg: u32,
}

fn caps(sub: Subcommand, alg: Algebra, claim: Option<Claim>) -> Caps {
    match (sub, alg) {
        (Subcommand::Relations, Algebra::Assoc) => Caps { rank: 5, maxdeg: 0 },
        (Subcommand::Relations, Algebra::Poisson) => Caps { rank: 6, maxdeg: 0 },
        (_, Algebra::Poly) => Caps { rank: 3, maxdeg: 6 },
        (_, Algebra::Lie) => Caps { rank: 3, maxdeg: 6 },
        (_, Algebra::Assoc) => Caps { rank: 2, maxdeg: 5 },
        (_, Algebra::Grassmann) => Caps { rank: 3, maxdeg: 5 },
        (Subcommand::Kernel, Algebra::Poisson) => Caps { rank: 4, maxdeg: 6 },
        (_, Algebra::Poisson) => match claim {
            Some(Claim::Kb4) => Caps { rank: 3, maxdeg: 4 },
            _ => Caps { rank: 4, maxdeg: 4 },
        },
    }
}

fn default_maxdeg(alg: Algebra) -> u32 {
    match alg {
        Algebra::Poly => 6,
        Algebra::Lie | Algebra::Assoc | Algebra::Grassmann => 5,
        Algebra::Poisson => 4,
    }
}

fn check_caps(cli: &Cli, rank: usize, maxdeg: u32) -> Result<(), CliError> {
    let c = caps(cli.subcommand, cli.algebra, cli.claim);
    let rank_name = match cli.algebra {
        Algebra::Lie | Algebra::Poisson => "n",
        _ => "d",
    };
    if rank == 0 {
        return Err(CliError::Usage(format!("{rank_name} must be at least 1")));
    }
    if rank > c.rank {
        return Err(CliError::Usage(format!(
            "{rank_name} = {rank} exceeds the cap {rank_name} <= {} for {} {}",
            c.rank,
            name(cli.subcommand),
            name(cli.algebra)
        )));
    }
    if c.maxdeg > 0 && maxdeg > c.maxdeg {
        return Err(CliError::Usage(format!(
            "maxdeg = {maxdeg} exceeds the cap maxdeg <= {} for {} {}",
            c.maxdeg,
            name(cli.subcommand),
            name(cli.algebra)
        )));
    }
    Ok(())
}

fn bad_claim(cli: &Cli, claim: Claim) -> CliError {
    CliError::Usage(format!("claim {} does not apply to {} {}", name(claim), name(cli.subcommand), name(cli.algebra)))
}

/// Runs a command, honouring `--jobs`.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    match cli.jobs {
        Some(0) => Err(CliError::Usage("jobs must be at least 1".into())),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot start {j} workers: {e}")))?;
            pool.install(|| run_inner(cli))
        }
        None => run_inner(cli),
    }
}

fn run_inner(cli: &Cli) -> Result<Report, CliError> {
    let start = Instant::now();
    let input = cli.input.as_deref().map(load_element).transpose()?;
    if let Some(e) = &input {
        if e.algebra() != cli.algebra {
            return Err(CliError::Input(format!(
                "file holds a {} element but the command targets {}",
                name(e.algebra()),
                name(cli.algebra)
            )));
        }
    }
    let rank = match (&input, cli.n) {
        (Some(e), Some(n)) if e.rank() != n => {
            return Err(CliError::Input(format!("file has rank {} but --n/--d is {n}", e.rank())))
        }
        (Some(e), _) => e.rank(),
        (None, Some(n)) => n,
        (None, None) => 2,
    };
    let maxdeg = cli.maxdeg.unwrap_or_else(|| default_maxdeg(cli.algebra).min(caps(cli.subcommand, cli.algebra, cli.claim).maxdeg.max(1)));
    check_caps(cli, rank, maxdeg)?;
    let mut report = Report::new(echo(cli));
    match cli.subcommand {
        Subcommand::Verify => match input {
            Some(e) => verify_constancy(&mut report, &e),
            None => verify(cli, &mut report, rank, maxdeg)?,
        },
        Subcommand::Kernel => kernel(cli, &mut report, rank, maxdeg)?,
        Subcommand::Express => express(cli, &mut report, rank, maxdeg, input)?,
        Subcommand::Relations => relations(cli, &mut report, rank)?,
    }
    report.finish();
    if !cli.no_timing {
        report.elapsed_ms = Some(start.elapsed().as_millis());
    }
    Ok(report)
}

fn verify(cli: &Cli, r: &mut Report, rank: usize, maxdeg: u32) -> Result<(), CliError> {
    match cli.algebra {
        Algebra::Poly => match (cli.claim.unwrap_or(Claim::Nowicki), &cli.powers) {
            (Claim::Nowicki, None) => r.components("nowicki", &commutative::verify_nowicki(rank, maxdeg)),
            (Claim::Nowicki, Some(p)) => {
                if p.is_empty() || p.len() > 3 || p.iter().any(|&m| m == 0 || m > 3) {
                    return Err(CliError::Usage("powers: 1 to 3 exponents, each in 1..=3 (cap)".into()));
                }
                r.notes.push(format!("Δ(y_i) = x_i^m_i with m = {p:?}; degrees weighted by m_i on y_i"));
                r.components("generalized nowicki", &commutative::verify_generalized_nowicki(p, maxdeg)?);
            }
            (c, _) => return Err(bad_claim(cli, c)),
        },
        Algebra::Lie => match cli.claim.unwrap_or(Claim::Principal) {
            Claim::Principal => r.components("principal", &lie::verify_lie_module_generation(rank, maxdeg)),
            c => return Err(bad_claim(cli, c)),
        },
        Algebra::Assoc => match cli.claim.unwrap_or(Claim::GList) {
            Claim::GList => r.components("g-list", &assoc::verify_assoc_constants(rank, maxdeg)),
            c => return Err(bad_claim(cli, c)),
        },
        Algebra::Grassmann => match cli.claim.unwrap_or(Claim::Grass) {
            Claim::Grass => {
                let seeds = match cli.reading.unwrap_or(Reading::Printed) {
                    Reading::Printed => SeedRange::Printed,
                    Reading::FullZ => SeedRange::FullZ,
                    Reading::Full => SeedRange::Full,
                };
                let opts = GrassOptions { seeds, raise: RaiseReading::Literal };
                r.notes.push(format!("seed ranges: {seeds:?}"));
                r.components("grass", &grassmann::verify_grass_theorem_with(rank, maxdeg, opts));
            }
            c => return Err(bad_claim(cli, c)),
        },
        Algebra::Poisson => verify_poisson(cli, r, rank)?,
    }
    Ok(())
}

fn kb_report(r: &mut Report, n: usize, rep: &poisson::KbReport, findings: bool) {
    let reading = rep.reading.map(|x| x.as_str()).unwrap_or("-");
    let mut certs: Vec<Cert> = rep.certificates.iter().map(Cert::component).collect();
    for c in &mut certs {
        c.label = format!("{} [{}]", c.label, reading);
    }
    r.certificates.extend(certs);
    let summary = format!(
        "{} reading {}: claimed {}, kernel dim {}, non-constant {}, zero {}, {}",
        rep.block.as_str(),
        reading,
        rep.claimed,
        rep.dim_kernel(),
        rep.non_constant.len(),
        rep.zero.len(),
        if rep.ok() { "equal in every component" } else { "not equal" }
    );
    if rep.ok() || !findings {
        r.notes.push(summary);
    } else {
        r.findings.push(summary);
        for c in rep.non_constant.iter().take(8) {
            r.findings.push(format!("family {} {:?} is not a constant: {}", c.family, c.indices, poisson::Rendered(&c.element, n)));
        }
    }
}

fn verify_poisson(cli: &Cli, r: &mut Report, n: usize) -> Result<(), CliError> {
    use poisson::{Block, Kb3Reading};
    match cli.claim.unwrap_or(Claim::Kb3) {
        Claim::Kb3 => {
            let reps: Vec<_> = [Kb3Reading::Strict, Kb3Reading::Proof]
                .into_iter()
                .map(|rd| poisson::verify_kb(n, Block::B3, rd))
                .collect();
            let passing: Vec<&str> = reps.iter().filter(|x| x.ok()).map(|x| x.reading.unwrap().as_str()).collect();
            for rep in &reps {
                kb_report(r, n, rep, false);
            }
            if passing.is_empty() {
                r.findings.push("KB3: no index-range reading gives an equal certificate".into());
            } else {
                r.notes.push(format!("KB3 verified under reading {}", passing.join(", ")));
            }
        }
        Claim::Kb3Range => {
            let rep = poisson::verify_kb(n, Block::B3, Kb3Reading::Strict);
            kb_report(r, n, &rep, true);
        }
        Claim::Kb4 => {
            let rep = poisson::verify_kb(n, Block::B4, Kb3Reading::Proof);
            kb_report(r, n, &rep, true);
            r.components("b2", &poisson::verify_b2(n));
            let zeros = poisson::verify_zero_subblocks(n);
            for c in zeros.iter().filter(|c| c.dim_kernel > 0) {
                r.findings.push(format!("sub-block {} at {:?} has {} nonzero constants", c.label, c.key, c.dim_kernel));
            }
            r.certificates.extend(zeros.iter().map(|c| {
                let mut x = Cert::component(c);
                x.ok = c.dim_kernel == 0;
                x
            }));
        }
        Claim::B2 => r.components("b2", &poisson::verify_b2(n)),
        c => return Err(bad_claim(cli, c)),
    }
    Ok(())
}

/// δ of a loaded element.
fn delta_of(e: &Element) -> Result<Element, CliError> {
    Ok(match e {
        Element::Poly { d, f } => Element::Poly { d: *d, f: WeitzenboeckDerivation::paired(*d).apply(f)? },
        Element::Lie { n, e } => Element::Lie { n: *n, e: lie::delta_lie(e, *n) },
        Element::Assoc { d, e } => Element::Assoc { d: *d, e: assoc::delta_assoc(e) },
        Element::Grassmann { d, e } => Element::Grassmann { d: *d, e: grassmann::grass_delta(e) },
        Element::Poisson { n, e } => Element::Poisson { n: *n, e: poisson::poisson_delta(e, *n) },
    })
}

fn is_zero(e: &Element) -> bool {
    match e {
        Element::Poly { f, .. } => f.is_zero(),
        Element::Lie { e, .. } => e.is_zero(),
        Element::Assoc { e, .. } => e.is_zero(),
        Element::Grassmann { e, .. } => e.is_zero(),
        Element::Poisson { e, .. } => e.is_zero(),
    }
}

fn verify_constancy(r: &mut Report, e: &Element) {
    let de = match delta_of(e) {
        Ok(de) => de,
        Err(err) => {
            r.findings.push(err.to_string());
            return;
        }
    };
    let ok = is_zero(&de);
    if !ok {
        r.findings.push(format!("not a constant: δ = {}", de.render()));
    }
    r.certificates.push(Cert {
        label: "constancy".into(),
        key: vec![],
        ok,
        detail: format!("f = {}", e.render()),
        json: json!({"element": e.to_json(), "normal_form": e.render(), "delta": de.to_json(), "constant": ok}),
    });
}

fn kernel_keys(cli: &Cli, len: usize, lo: u32, maxdeg: u32) -> Result<Vec<Key>, CliError> {
    match &cli.multidegree {
        Some(k) => {
            if k.len() != len && !(cli.algebra == Algebra::Poisson && k.len() == 2 * len) {
                return Err(CliError::Usage(format!("multidegree needs {len} entries, got {}", k.len())));
            }
            let total: u32 = k.iter().sum();
            if total > caps(cli.subcommand, cli.algebra, cli.claim).maxdeg {
                return Err(CliError::Usage(format!(
                    "multidegree total {total} exceeds the cap maxdeg <= {}",
                    caps(cli.subcommand, cli.algebra, cli.claim).maxdeg
                )));
            }
            Ok(vec![k.clone()])
        }
        None => Ok((lo..=maxdeg).flat_map(|t| compositions(len, t)).collect()),
    }
}

fn kernel_cert(label: &str, key: Key, dim: usize, basis: Vec<String>) -> Cert {
    Cert {
        label: label.into(),
        key: key.clone(),
        ok: true,
        detail: format!("dim {:>4}  kernel {:>4}", dim, basis.len()),
        json: json!({"label": label, "key": key, "dim_component": dim, "dim_kernel": basis.len(), "basis": basis}),
    }
}

fn kernel(cli: &Cli, r: &mut Report, rank: usize, maxdeg: u32) -> Result<(), CliError> {
    use rayon::prelude::*;
    if let Some(c) = cli.claim {
        return Err(bad_claim(cli, c));
    }
    let certs: Vec<Result<Cert, CliError>> = match cli.algebra {
        Algebra::Poly => {
            let der = match &cli.powers {
                Some(p) => WeitzenboeckDerivation::elementary(&commutative::power_images(p))?,
                None => WeitzenboeckDerivation::paired(rank),
            };
            let len = der.grading()?.groups.len();
            kernel_keys(cli, len, 0, maxdeg)?
                .into_par_iter()
                .map(|k| {
                    let ker = der.kernel_component(&k)?;
                    let dim = der.grading()?.component(der.nvars(), &k).len();
                    Ok(kernel_cert("poly", k, dim, ker.iter().map(|f| f.to_string()).collect()))
                })
                .collect()
        }
        Algebra::Lie => kernel_keys(cli, rank, 2, maxdeg)?
            .into_par_iter()
            .map(|k| {
                let ker = lie::kernel_commutator_component(rank, &k);
                let dim = lie::commutator_basis(rank, &k).len();
                Ok(kernel_cert("L'", k, dim, ker.iter().map(|e| lie::Rendered(e, rank).to_string()).collect()))
            })
            .collect(),
        Algebra::Assoc => kernel_keys(cli, rank, 0, maxdeg)?
            .into_par_iter()
            .map(|k| {
                let basis = assoc::full_basis(rank, &k);
                let ker = kernel_of(&basis, |w| assoc::delta_assoc(&assoc::AssocElement::word(w.clone())));
                Ok(kernel_cert("F", k, basis.len(), ker.iter().map(|e| assoc::Rendered(e).to_string()).collect()))
            })
            .collect(),
        Algebra::Grassmann => kernel_keys(cli, rank, 0, maxdeg)?
            .into_par_iter()
            .map(|k| {
                let basis = grassmann::component_basis(rank, &k);
                let ker =
                    kernel_of(&basis, |w| grassmann::grass_delta(&grassmann::GrassElement::word(w.clone())));
                Ok(kernel_cert("G", k, basis.len(), ker.iter().map(|e| grassmann::Rendered(e).to_string()).collect()))
            })
            .collect(),
        Algebra::Poisson => kernel_keys(cli, rank, 1, maxdeg)?
            .into_par_iter()
            .map(|k| {
                let ker = poisson::poisson_kernel_component(rank, &k)?;
                let pair: Key = if k.len() == rank { k.clone() } else { (0..rank).map(|i| k[i] + k[rank + i]).collect() };
                let dim = poisson::component_basis(rank, &pair).len();
                Ok(kernel_cert("P", k, dim, ker.iter().map(|e| poisson::Rendered(e, rank).to_string()).collect()))
            })
            .collect(),
    };
    for c in certs {
        r.certificates.push(c?);
    }
    Ok(())
}

fn expression_json(g: &GeneratorExpression) -> Value {
    let terms: Vec<Value> = g
        .terms
        .iter()
        .map(|(m, c)| {
            let factors: Vec<Value> = m
                .iter()
                .map(|(v, e)| match v {
                    GenVar::X(i) => json!({"gen": "x", "i": i + 1, "exp": e}),
                    GenVar::U(i, j) => json!({"gen": "u", "i": i + 1, "j": j + 1, "exp": e}),
                })
                .collect();
            json!({"c": format_scalar(c), "factors": factors})
        })
        .collect();
    json!({"d": g.d, "text": g.to_string(), "terms": terms})
}

/// A random product of x_i and u_{i,j} of degree at most `maxdeg`.
pub fn random_generator_product(rng: &mut impl Rng, d: usize, maxdeg: u32) -> PolyElement {
    let gens = commutative::nowicki_generators(d);
    let mut f = PolyElement::one(2 * d);
    let mut deg = 0;
    for _ in 0..rng.gen_range(1..=4) {
        let i = rng.gen_range(0..gens.len());
        let gd = if i < d { 1 } else { 2 };
        if deg + gd <= maxdeg {
            f = f.mul(&gens[i]);
            deg += gd;
        }
    }
    f
}

fn express_one(r: &mut Report, d: usize, f: &PolyElement, label: String) {
    match commutative::express_constant(f, d) {
        Ok(g) => {
            let round_trip = g.expand() == *f;
            if !round_trip {
                r.findings.push(format!("{label}: expansion differs from the input"));
            }
            r.certificates.push(Cert {
                label,
                key: vec![],
                ok: round_trip,
                detail: format!("{} = {}", f, g),
                json: json!({"input": poly_json(d, f), "expression": expression_json(&g), "round_trip": round_trip}),
            });
        }
        Err(e) => {
            r.findings.push(format!("{label}: {e}"));
            r.certificates.push(Cert {
                label,
                key: vec![],
                ok: false,
                detail: e.to_string(),
                json: json!({"input": poly_json(d, f), "error": e.to_string()}),
            });
        }
    }
}

fn express(cli: &Cli, r: &mut Report, rank: usize, maxdeg: u32, input: Option<Element>) -> Result<(), CliError> {
    if cli.algebra != Algebra::Poly {
        return Err(CliError::Usage(format!("express applies to poly, not {}", name(cli.algebra))));
    }
    if let Some(c) = cli.claim.filter(|c| *c != Claim::Nowicki) {
        return Err(bad_claim(cli, c));
    }
    match (input, cli.seed) {
        (Some(Element::Poly { d, f }), _) => express_one(r, d, &f, "express".into()),
        (Some(_), _) => unreachable!("algebra checked on load"),
        (None, Some(seed)) => {
            if cli.samples == 0 || cli.samples > 1000 {
                return Err(CliError::Usage("samples must lie in 1..=1000 (cap)".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for s in 0..cli.samples {
                let f = random_generator_product(&mut rng, rank, maxdeg);
                express_one(r, rank, &f, format!("sample {s:04}"));
            }
        }
        (None, None) => return Err(CliError::Usage("express needs --input <path> or --seed <u64>".into())),
    }
    Ok(())
}

fn relations(cli: &Cli, r: &mut Report, rank: usize) -> Result<(), CliError> {
    let checks = match (cli.algebra, cli.claim) {
        (Algebra::Assoc, None | Some(Claim::UvRelations)) => uv::uv_relations(rank),
        (Algebra::Assoc, Some(Claim::STypo)) => {
            let checks = uv::module_relations(rank);
            let vanish: Vec<String> =
                checks.iter().filter(|c| c.name == "S" && c.vanishes()).filter_map(|c| c.reading.clone()).collect();
            let fail: Vec<String> =
                checks.iter().filter(|c| c.name == "S" && !c.vanishes()).filter_map(|c| c.reading.clone()).collect();
            r.notes.push(format!("S vanishes under: {}", if vanish.is_empty() { "none".into() } else { vanish.join("; ") }));
            r.notes.push(format!("S is nonzero under: {}", if fail.is_empty() { "none".into() } else { fail.join("; ") }));
            checks
        }
        (Algebra::Poisson, None | Some(Claim::B2)) => {
            let mut nonzero = Vec::new();
            let mut instances = 0;
            for i in 1..=rank {
                for j in i + 1..=rank {
                    for k in j + 1..=rank {
                        instances += 1;
                        if !poisson::b2_relation(rank, i, j, k).is_zero() {
                            nonzero.push(vec![i, j, k]);
                        }
                    }
                }
            }
            vec![uv::RelationCheck { name: "x_i u_jk - x_j u_ik + x_k u_ij".into(), reading: None, instances, nonzero }]
        }
        (_, Some(c)) => return Err(bad_claim(cli, c)),
        (a, None) => return Err(CliError::Usage(format!("relations are available for assoc and poisson, not {}", name(a)))),
    };
    for c in &checks {
        if !c.vanishes() {
            let rd = c.reading.as_deref().map(|s| format!(" [{s}]")).unwrap_or_default();
            r.findings.push(format!("{}{rd}: {} of {} instances nonzero", c.name, c.nonzero.len(), c.instances));
        }
    }
    r.certificates.extend(checks.iter().map(Cert::relation));
    Ok(())
}

/// Parses arguments, runs, prints; returns the process exit code.
pub fn main_with<I, T>(args: I, out: &mut impl std::io::Write, err: &mut impl std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
        }
    };
    match run(&cli) {
        Ok(rep) => {
            let text = if cli.json {
                serde_json::to_string_pretty(&rep.to_json()).expect("serializable") + "\n"
            } else {
                rep.to_table()
            };
            let _ = out.write_all(text.as_bytes());
            rep.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
