//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::time::{Duration, Instant};

use motzkin::cli::{run_with_engine, EXIT_OK};
use motzkin::density::{count_matches, count_matches_parallel};
use motzkin::{
    classifier_specs, classify_div5, classify_mod8, closed_density_s, closed_density_sprime,
    count_set_exact, count_t01_upto, density_table, empirical_density,
    empirical_residue_distribution, is_in_set, ClassSelector, ExactRational, Mod8Kind,
    MotzkinEngine,
};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SOUNDNESS_HORIZON: u64 = 50_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn timed(f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let o = f();
    (o, start.elapsed())
}

fn c1_oracle_agreement() -> Outcome {
    let e = MotzkinEngine::default();
    let (mut o, took) = timed(|| {
        let holo = e.exact_stream(2000).unwrap();
        for (n, v) in holo.iter().enumerate() {
            if e.exact(n as u64).unwrap() != *v {
                return outcome(false, format!("sum vs holonomic differ at n = {n}"));
            }
        }
        // the convolution engine is modular: compare it against both exact
        // engines under several moduli, including near-word-size ones
        for m in [2u64, 3, 5, 8, 120, 1_000_000_007, (1 << 61) - 1, u64::MAX] {
            let conv = e.mod_stream(m, 2000).unwrap();
            let big_m = BigUint::from(m);
            for (n, v) in holo.iter().enumerate() {
                if BigUint::from(conv.values()[n]) != v % &big_m {
                    return outcome(false, format!("convolution differs at n = {n}, m = {m}"));
                }
            }
        }
        let m9 = e.exact(9).unwrap();
        let m13 = e.exact(13).unwrap();
        let ok = m9 == BigUint::from(835u32) && m13 == BigUint::from(41835u32);
        outcome(ok, format!("M_9 = {m9}, M_13 = {m13}"))
    });
    o.pass &= took < Duration::from_secs(10);
    o.detail = format!("{}; {:.2?} (limit 10 s)", o.detail, took);
    o
}

fn c2_characterization_soundness() -> Outcome {
    let engine = MotzkinEngine::default();
    let mut details = Vec::new();
    let mut pass = true;
    for m in [2u64, 4, 8, 3, 5] {
        let mut stdout = Vec::new();
        let mut stderr = Vec::new();
        let args = [
            "motzkin".to_string(),
            "verify".into(),
            "--mod".into(),
            m.to_string(),
            SOUNDNESS_HORIZON.to_string(),
        ];
        let code = run_with_engine(args, &engine, &mut stdout, &mut stderr);
        let text = String::from_utf8_lossy(&stdout);
        let mismatches = text
            .lines()
            .nth(1)
            .and_then(|row| row.split(',').nth(3))
            .unwrap_or("?")
            .to_string();
        pass &= code == EXIT_OK && mismatches == "0";
        details.push(format!("mod {m}: exit {code}, {mismatches} mismatches"));
    }
    outcome(pass, details.join("; "))
}

fn c3_forbidden_residue() -> Outcome {
    let s = MotzkinEngine::default()
        .mod_stream(8, SOUNDNESS_HORIZON)
        .unwrap();
    let zeros: Vec<usize> = s
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == 0)
        .map(|(n, _)| n)
        .collect();
    outcome(
        zeros.is_empty(),
        format!("{} of n < {SOUNDNESS_HORIZON} with M_n ≡ 0 mod 8", zeros.len()),
    )
}

fn rational(label: &str) -> ExactRational {
    density_table()
        .into_iter()
        .find(|(l, _)| l == label)
        .unwrap_or_else(|| panic!("missing table row {label}"))
        .1
}

fn c4_closed_forms() -> Outcome {
    let r = ExactRational::new;
    let mut checks: Vec<(String, ExactRational, ExactRational)> = vec![
        ("S(4,·,1,1)".into(), closed_density_s(4, 1, 1), r(1, 12)),
        ("S(5,·,2,1)".into(), closed_density_s(5, 2, 1), r(1, 24)),
        ("S'(5,·,2,0)".into(), closed_density_sprime(5, 2, 0), r(1, 120)),
        ("even".into(), rational("even"), r(1, 3)),
        ("mod8≡4".into(), rational("mod8≡4"), r(1, 6)),
        ("mod8≡2".into(), rational("mod8≡2"), r(1, 12)),
        ("mod8≡6".into(), rational("mod8≡6"), r(1, 12)),
        ("mod4≡2".into(), rational("mod4≡2"), r(1, 6)),
        ("div5".into(), rational("div5"), r(1, 10)),
        ("div5 form 1".into(), rational("div5 form 1"), r(1, 120)),
        ("div5 form 2".into(), rational("div5 form 2"), r(1, 24)),
        ("div5 form 3".into(), rational("div5 form 3"), r(1, 24)),
        ("div5 form 4".into(), rational("div5 form 4"), r(1, 120)),
        ("mod3≡0".into(), rational("mod3≡0"), r(1, 1)),
    ];
    for (e, d) in [(1, 1), (1, 2), (3, 1), (3, 2)] {
        let label = format!("eps{e}_delta{d}");
        checks.push((label.clone(), rational(&label), r(1, 12)));
    }
    // identities between rows
    let sum_classes: ExactRational = ["eps1_delta1", "eps1_delta2", "eps3_delta1", "eps3_delta2"]
        .iter()
        .map(|l| rational(l))
        .sum();
    checks.push(("even = Σ classes".into(), rational("even"), sum_classes));
    checks.push((
        "mod4≡2 = mod8≡2 + mod8≡6".into(),
        rational("mod4≡2"),
        rational("mod8≡2") + rational("mod8≡6"),
    ));
    let forms: ExactRational = (1..=4).map(|k| rational(&format!("div5 form {k}"))).sum();
    checks.push(("div5 = Σ forms".into(), rational("div5"), forms));

    let failed: Vec<String> = checks
        .iter()
        .filter(|(_, got, want)| got != want)
        .map(|(l, got, want)| format!("{l}: {got} != {want}"))
        .collect();
    if failed.is_empty() {
        outcome(true, format!("{} exact identities", checks.len()))
    } else {
        outcome(false, failed.join("; "))
    }
}

fn c5_finite_n_convergence() -> Outcome {
    const N: u64 = 10_000_000;
    const TOL: f64 = 1e-4;
    let (mut o, took) = timed(|| {
        let mut pass = true;
        let mut parts = Vec::new();
        for sel in [
            ClassSelector::Even,
            ClassSelector::Mod8Eq4,
            ClassSelector::Mod8Eq2,
            ClassSelector::Mod8Eq6,
            ClassSelector::Mod4Eq2,
            ClassSelector::Div5,
        ] {
            let r = empirical_density(&sel, N).unwrap();
            pass &= r.abs_discrepancy <= TOL;
            parts.push(format!("{} {:.2e}", r.label, r.abs_discrepancy));
        }
        outcome(pass, parts.join(", "))
    });
    o.detail = format!("{} (tol {TOL:e}); {:.2?}", o.detail, took);
    o
}

fn c6_exact_counting() -> Outcome {
    let mut checked = 0;
    for (label, spec) in classifier_specs() {
        let mut running = 0u128;
        let mut next = [1_000u64, 10_000, 100_000].into_iter().peekable();
        for n in 0..=100_000u64 {
            if is_in_set(&n, &spec).is_some() {
                running += 1;
            }
            if next.peek() == Some(&n) {
                next.next();
                let exact = count_set_exact(n, &spec);
                if exact != running {
                    return outcome(false, format!("{label} N={n}: {exact} != {running}"));
                }
                checked += 1;
            }
        }
    }
    outcome(checked == 24, format!("{checked} (spec, N) pairs agree"))
}

fn c7_t01() -> Outcome {
    for k in 1..=12u32 {
        let got = count_t01_upto(3u64.pow(k) - 1);
        if got != 1u128 << k {
            return outcome(false, format!("k={k}: {got} != 2^{k}"));
        }
    }
    let horizon = 3u64.pow(12);
    let ratio = count_t01_upto(horizon - 1) as f64 / horizon as f64;
    let mod3 = empirical_density(&ClassSelector::Mod3Eq0, horizon).unwrap();
    let pass = ratio <= 8e-3 && mod3.observed_ratio >= 0.97;
    outcome(
        pass,
        format!(
            "2^k counts for k=1..12; T01 ratio at 3^12 = {ratio:.4e} (≤ 8e-3); mod3≡0 ratio = {:.5} (≥ 0.97)",
            mod3.observed_ratio
        ),
    )
}

fn c8_mod5_distribution() -> Outcome {
    let (mut o, took) = timed(|| {
        let dist = empirical_residue_distribution(&MotzkinEngine::default(), 5, 30_000).unwrap();
        let mut pass = (0.09..=0.11).contains(&dist[0].ratio);
        for r in &dist[1..] {
            pass &= (0.205..=0.245).contains(&r.ratio);
        }
        let shown: Vec<String> = dist
            .iter()
            .map(|r| format!("{}: {:.2}%", r.residue, 100.0 * r.ratio))
            .collect();
        outcome(pass, shown.join(", "))
    });
    o.detail = format!("{}; {:.2?}", o.detail, took);
    o
}

fn c9_property_suite() -> Outcome {
    const SAMPLES: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(0x4d6f747a6b696e);
    let specs: Vec<_> = classifier_specs().into_iter().map(|(_, s)| s).collect();
    for _ in 0..SAMPLES {
        let n: u64 = rng.random_range(0..=1_000_000_000_000_000_000);
        let hits: Vec<_> = specs.iter().map(|s| is_in_set(&n, s)).collect();
        for (spec, hit) in specs.iter().zip(&hits) {
            if let Some(w) = hit {
                if spec.recompose(w) != n {
                    return outcome(false, format!("round trip failed for {spec} at {n}"));
                }
            }
        }
        let even = hits[..4].iter().filter(|h| h.is_some()).count();
        let div5 = hits[4..].iter().filter(|h| h.is_some()).count();
        if even > 1 || div5 > 1 {
            return outcome(false, format!("overlapping classes at {n}"));
        }
        let c = classify_mod8(&n);
        if (c.kind != Mod8Kind::Odd) != (even == 1) || classify_div5(&n).is_divisible() != (div5 == 1)
        {
            return outcome(false, format!("classifier disagrees with specs at {n}"));
        }
    }

    for _ in 0..100 {
        let hi: u64 = rng.random();
        let lo: u64 = rng.random();
        let n = (BigUint::from(hi) << 64u32) + BigUint::from(lo);
        for spec in &specs {
            if let Some(w) = is_in_set(&n, spec) {
                if spec.recompose(&w) != n {
                    return outcome(false, format!("big round trip failed at {n}"));
                }
            }
        }
    }

    let total = 1_000_000;
    for sel in [ClassSelector::Even, ClassSelector::Div5, ClassSelector::Mod3Eq1] {
        let whole = count_matches(&sel, 0..total);
        if count_matches_parallel(&sel, total) != whole {
            return outcome(false, format!("parallel count differs for {sel}"));
        }
        for _ in 0..8 {
            let split = rng.random_range(0..=total);
            if count_matches(&sel, 0..split) + count_matches(&sel, split..total) != whole {
                return outcome(false, format!("split at {split} differs for {sel}"));
            }
        }
    }

    if let Err(e) = MotzkinEngine::default().exact_stream(5000) {
        return outcome(false, format!("holonomic recurrence: {e}"));
    }
    outcome(
        true,
        format!("{SAMPLES} random n ≤ 1e18, 100 n ≈ 2^128, partition splits, exact divisions to n = 5000"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 oracle agreement", c1_oracle_agreement),
        ("2 characterization soundness", c2_characterization_soundness),
        ("3 forbidden residue 0 mod 8", c3_forbidden_residue),
        ("4 closed-form densities", c4_closed_forms),
        ("5 finite-N convergence", c5_finite_n_convergence),
        ("6 exact counting", c6_exact_counting),
        ("7 T(01) density zero", c7_t01),
        ("8 mod-5 distribution", c8_mod5_distribution),
        ("9 property suite", c9_property_suite),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        let o = check();
        if !o.pass {
            failures += 1;
        }
        println!("[{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
