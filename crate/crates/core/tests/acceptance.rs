//! End-to-end acceptance run: one PASS/FAIL line per criterion. Runs
//! without the test harness so the lines are always printed.
//!
//! Criteria that are known findings (7 and 8) print FAIL together with the
//! reason; every other criterion must pass.

use std::time::Instant;

use nowicki_core::assoc::{self, uv, wreath, AssocElement};
use nowicki_core::commutative::{self, PolyElement};
use nowicki_core::graded::{all_ok, compare_in_component, kernel_of, keys_between, ComponentCertificate};
use nowicki_core::grassmann::{self, GrassOptions, RaiseReading, SeedRange};
use nowicki_core::linalg::int;
use nowicki_core::poisson::{self, Block, Kb3Reading, PoissonElement, PoissonTree, RewriteOrder};
use nowicki_core::lie;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn first_failure(certs: &[ComponentCertificate]) -> String {
    match certs.iter().find(|c| !c.ok()) {
        Some(c) => format!(
            "{} at {:?}: {} (claimed rank {}, kernel rank {})",
            c.label,
            c.key,
            c.span.verdict.as_str(),
            c.span.rank_a,
            c.span.rank_b
        ),
        None => "all components equal".into(),
    }
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let mut comps = 0;
    for d in 1..=3 {
        let certs = commutative::verify_nowicki(d, 6);
        comps += certs.len();
        if !all_ok(&certs) {
            return outcome(false, format!("d={d}: {}", first_failure(&certs)));
        }
    }
    let secs = t.elapsed().as_secs_f64();
    outcome(secs < 60.0, format!("{comps} components equal for d=1..3, degree <= 6, {secs:.1}s"))
}

fn random_product(rng: &mut ChaCha8Rng, d: usize, maxdeg: u32) -> PolyElement {
    let gens = commutative::nowicki_generators(d);
    let mut f = PolyElement::one(2 * d);
    let mut deg = 0;
    for _ in 0..rng.gen_range(1..=5) {
        let i = rng.gen_range(0..gens.len());
        let gd = if i < d { 1 } else { 2 };
        if deg + gd <= maxdeg {
            f = f.mul(&gens[i]);
            deg += gd;
        }
    }
    f
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut good = 0;
    for _ in 0..100 {
        let d = rng.gen_range(1..=3);
        let mut f = random_product(&mut rng, d, 6);
        if rng.gen_bool(0.5) {
            f = f.add(&random_product(&mut rng, d, 6).scale(&int(rng.gen_range(-3..=3))));
        }
        if commutative::express_constant(&f, d).map(|g| g.expand() == f).unwrap_or(false) {
            good += 1;
        }
    }
    outcome(good == 100, format!("{good}/100 round trips"))
}

fn criterion_3() -> Outcome {
    match commutative::verify_generalized_nowicki(&[1, 2, 3], 5) {
        Ok(certs) => outcome(
            all_ok(&certs),
            format!("m=(1,2,3), {} weighted components: {}", certs.len(), first_failure(&certs)),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn criterion_4() -> Outcome {
    let mut comps = 0;
    for n in 1..=3 {
        let certs = lie::verify_lie_module_generation(n, 5);
        comps += certs.len();
        if !all_ok(&certs) {
            return outcome(false, format!("n={n}: {}", first_failure(&certs)));
        }
    }
    outcome(true, format!("{comps} components equal for n=1..3, degree <= 5"))
}

fn criterion_5() -> Outcome {
    let mut pass = true;
    let mut vanishing = Vec::new();
    let mut nonzero = Vec::new();
    for d in 1..=5 {
        for r in uv::uv_relations(d) {
            if !r.vanishes() {
                pass = false;
                nonzero.push(format!("{} (d={d})", r.name));
            }
        }
        for r in uv::module_relations(d) {
            let label = format!("{} [{}]", r.name, r.reading.clone().unwrap_or_default());
            let expected_zero = r.reading.as_deref().is_some_and(|s| s.contains("w-constant") && !s.contains("S-as-printed"));
            if r.vanishes() != expected_zero && r.instances > 0 {
                pass = false;
            }
            if r.instances > 0 {
                let list = if r.vanishes() { &mut vanishing } else { &mut nonzero };
                if !list.contains(&label) {
                    list.push(label);
                }
            }
        }
    }
    outcome(
        pass,
        format!(
            "S1-S4, R1-R5 zero for d<=5; vanishing: {}; nonzero: {}",
            vanishing.join(", "),
            nonzero.join(", ")
        ),
    )
}

fn random_assoc(rng: &mut ChaCha8Rng, d: usize, maxdeg: usize) -> AssocElement {
    let mut e = AssocElement::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let len = rng.gen_range(1..=maxdeg);
        let letters: Vec<u32> = (0..len).map(|_| rng.gen_range(0..2 * d as u32)).collect();
        e.add_scaled(&int(rng.gen_range(-2..=2)), &assoc::from_letters(d, &letters));
    }
    e
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut mult = 0;
    for _ in 0..200 {
        let d = rng.gen_range(1..=2);
        let (a, b) = (random_assoc(&mut rng, d, 4), random_assoc(&mut rng, d, 4));
        if wreath::epsilon(d, &assoc::mul(&a, &b)) == wreath::epsilon(d, &a).mul(&wreath::epsilon(d, &b)) {
            mult += 1;
        }
    }
    let mut words = 0;
    let mut closed = true;
    for d in 1..=2 {
        for key in keys_between(d, 2, 5) {
            for w in assoc::commutator_basis(d, &key) {
                let e = AssocElement::word(w);
                words += 1;
                closed &= wreath::epsilon(d, &e) == wreath::epsilon_by_products(d, &e);
            }
        }
    }
    let mut members = 0;
    for _ in 0..100 {
        let d = rng.gen_range(1..=2);
        let (a, b, c) = (random_assoc(&mut rng, d, 2), random_assoc(&mut rng, d, 2), random_assoc(&mut rng, d, 2));
        let e = assoc::mul(&a, &assoc::commutator(&b, &c));
        if wreath::epsilon(d, &e).is_commutator_image() {
            members += 1;
        }
    }
    let x1 = !wreath::epsilon(1, &assoc::letter(1, 0)).is_commutator_image();
    outcome(
        mult == 200 && closed && members == 100 && x1,
        format!(
            "multiplicative {mult}/200; closed form on {words} commutator words: {closed}; ideal members {members}/100; ε(x_1) rejected: {x1}"
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for d in 1..=2 {
        let certs = assoc::verify_assoc_constants(d, 5);
        if !all_ok(&certs) {
            pass = false;
            let bad: Vec<String> =
                certs.iter().filter(|c| !c.ok()).map(|c| format!("{}{:?} {}/{}", c.label, c.key, c.span.rank_a, c.span.rank_b)).collect();
            lines.push(format!("d={d}: {} components short ({})", bad.len(), bad.join(", ")));
        } else {
            lines.push(format!("d={d}: equal"));
        }
    }
    outcome(pass, lines.join("; "))
}

fn criterion_8() -> Outcome {
    // d = 1: ker δ in degree m is spanned by x^m and x^{m-2}[x,y]
    let mut base = true;
    for m in 0..=6u32 {
        let basis = grassmann::component_basis(1, &[m]);
        let ker = kernel_of(&basis, |w| grassmann::grass_delta(&grassmann::GrassElement::word(w.clone())));
        let x = grassmann::letter(1, grassmann::x_letter(1));
        let y = grassmann::letter(1, grassmann::y_letter(1));
        let xs = |k: u32| (0..k).fold(grassmann::one(1), |acc, _| grassmann::mul(&acc, &x));
        let mut claimed = vec![xs(m)];
        if m >= 2 {
            claimed.push(grassmann::mul(&xs(m - 2), &grassmann::commutator(&x, &y)));
        }
        let c = compare_in_component(&vec![m], "G", &basis, &ker, &claimed, true, true);
        base &= c.ok() && ker.len() == if m >= 2 { 2 } else { 1 };
    }
    let mut vanish = true;
    for d in 1..=3 {
        let f = grassmann::grass_constant_families(d, None);
        vanish &= f.w.len() <= d && f.z.len() <= d;
    }
    let mut printed = true;
    let mut full_z = true;
    let mut lines = Vec::new();
    for d in 2..=3 {
        let p = grassmann::verify_grass_theorem(d, 5);
        let short: Vec<String> = p.iter().filter(|c| !c.ok()).map(|c| format!("{:?}", c.key)).collect();
        printed &= short.is_empty();
        if !short.is_empty() {
            lines.push(format!("d={d} printed ranges short at {}", short.join(" ")));
        }
        let opts = GrassOptions { seeds: SeedRange::FullZ, raise: RaiseReading::Literal };
        full_z &= all_ok(&grassmann::verify_grass_theorem_with(d, 5, opts));
    }
    outcome(
        base && vanish && printed,
        format!(
            "d=1 base case: {base}; W_s, Z_s vanish for s>=d: {vanish}; {}; with z over all index tuples: {}",
            if lines.is_empty() { "printed ranges equal".into() } else { lines.join("; ") },
            if full_z { "equal" } else { "not equal" }
        ),
    )
}

fn criterion_9() -> Outcome {
    let t = Instant::now();
    let mut pass = true;
    let mut lines = Vec::new();
    for n in 1..=4 {
        let mut ok_readings = Vec::new();
        for rd in [Kb3Reading::Strict, Kb3Reading::Proof] {
            let rep = poisson::verify_kb(n, Block::B3, rd);
            if rep.ok() {
                ok_readings.push(rd.as_str());
            }
            if n == 4 && !rep.ok() {
                lines.push(format!("n=4 reading {}: claimed {} vs kernel {}", rd.as_str(), rep.claimed, rep.dim_kernel()));
            }
        }
        pass &= !ok_readings.is_empty();
        lines.push(format!("n={n} equal under {}", if ok_readings.is_empty() { "none".into() } else { ok_readings.join(" and ") }));
    }
    let secs = t.elapsed().as_secs_f64();
    outcome(pass && secs < 30.0, format!("{}; {secs:.1}s", lines.join("; ")))
}

fn criterion_10() -> Outcome {
    let mut pass = true;
    let mut lines = Vec::new();
    for n in 1..=3 {
        let rep = poisson::verify_kb(n, Block::B4, Kb3Reading::Proof);
        let b2 = poisson::verify_b2(n);
        let zero = poisson::verify_zero_subblocks(n);
        let zero_ok = zero.iter().all(|c| c.dim_kernel == 0);
        pass &= rep.ok() && all_ok(&b2) && zero_ok;
        lines.push(format!(
            "n={n}: KB4 {} ({} claimed, kernel {}), KB2 {}, zero sub-blocks {}",
            if rep.ok() { "equal" } else { "not equal" },
            rep.claimed,
            rep.dim_kernel(),
            if all_ok(&b2) { "equal" } else { "not equal" },
            if zero_ok { "ok" } else { "nonzero" }
        ));
    }
    outcome(pass, lines.join("; "))
}

/// A random tree with exactly `leaves` leaves and depth at most `depth`.
fn random_tree(rng: &mut ChaCha8Rng, letters: u32, leaves: usize, depth: u32) -> PoissonTree {
    if leaves == 1 {
        return PoissonTree::Gen(rng.gen_range(0..letters));
    }
    let cap = 1usize << (depth - 1);
    let lo = leaves.saturating_sub(cap).max(1);
    let hi = (leaves - 1).min(cap);
    let k = rng.gen_range(lo..=hi);
    let (a, b) = (random_tree(rng, letters, k, depth - 1), random_tree(rng, letters, leaves - k, depth - 1));
    if rng.gen_bool(0.5) {
        PoissonTree::mul(a, b)
    } else {
        PoissonTree::br(a, b)
    }
}

fn renormalized(e: &PoissonElement) -> PoissonElement {
    let mut out = PoissonElement::zero();
    for (w, c) in e.iter() {
        out.add_scaled(c, &poisson::poisson_normalize(&PoissonTree::of_word(w)));
    }
    out
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut good = 0;
    for _ in 0..1000 {
        let letters = 2 * rng.gen_range(1..=3);
        let leaves = rng.gen_range(1..=6);
        let t = random_tree(&mut rng, letters, leaves, 4);
        let e = poisson::poisson_normalize(&t);
        let idem = renormalized(&e) == e;
        let agree = poisson::poisson_normalize_with(&t, RewriteOrder::Expand) == e;
        // Leibniz on three small subtrees, six leaves at most, depth at most 4
        let sizes = [rng.gen_range(1..=2), rng.gen_range(1..=2), rng.gen_range(1..=2)];
        let [a, b, c] = sizes.map(|s| random_tree(&mut rng, letters, s, 2));
        let lhs = PoissonTree::br(a.clone(), PoissonTree::mul(b.clone(), c.clone()));
        let r1 = PoissonTree::mul(PoissonTree::br(a.clone(), b.clone()), c.clone());
        let r2 = PoissonTree::mul(b, PoissonTree::br(a, c));
        let residual = poisson::poisson_normalize(&lhs) - poisson::poisson_normalize(&r1) - poisson::poisson_normalize(&r2);
        if idem && agree && residual.is_zero() {
            good += 1;
        }
    }
    outcome(good == 1000, format!("{good}/1000 trees"))
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 11] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
    ];
    // criteria whose failure is a recorded finding rather than a defect
    let findings = [7, 8];
    let mut regressions = Vec::new();
    for (k, f) in criteria {
        let o = f();
        println!("criterion {k:>2}: {} — {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass && !findings.contains(&k) {
            regressions.push(k);
        }
    }
    if !regressions.is_empty() {
        eprintln!("unexpected failures: {regressions:?}");
        std::process::exit(1);
    }
}
