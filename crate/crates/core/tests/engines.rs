use motzkin::verify::{verify_classifier, SUPPORTED_MODULI};
use motzkin::{
    classify_div5, classify_mod3, classify_mod8, Mod8Kind, MotzkinEngine, MotzkinError, Ceilings,
};

const HORIZON: u64 = 50_001;

#[test]
fn defining_sum_matches_holonomic_stream() {
    let e = MotzkinEngine::default();
    let stream = e.exact_stream(2001).unwrap();
    for (n, value) in stream.iter().enumerate() {
        assert_eq!(&e.exact(n as u64).unwrap(), value, "n = {n}");
    }
}

#[test]
fn modular_engine_matches_holonomic_residues() {
    let e = MotzkinEngine::default();
    for m in [2, 3, 4, 5, 8] {
        let conv = e.mod_stream(m, HORIZON).unwrap();
        let holo = e.exact_residues(m, HORIZON).unwrap();
        assert_eq!(conv, holo, "m = {m}");
    }
}

#[test]
fn classifiers_match_residues() {
    let e = MotzkinEngine::default();
    let mod8 = e.mod_stream(8, HORIZON).unwrap();
    let mod3 = e.mod_stream(3, HORIZON).unwrap();
    let mod5 = e.mod_stream(5, HORIZON).unwrap();
    for n in 0..HORIZON {
        let r8 = mod8.get(n).unwrap();
        assert_ne!(r8, 0, "M_{n} divisible by 8");
        let c = classify_mod8(&n);
        assert_eq!(c.kind == Mod8Kind::Odd, r8 % 2 == 1, "parity at {n}");
        if let Some(r) = c.kind.residue() {
            assert_eq!(u64::from(r), r8, "mod 8 at {n}");
        }
        assert_eq!(u64::from(classify_mod3(&n).value()), mod3.get(n).unwrap(), "mod 3 at {n}");
        assert_eq!(classify_div5(&n).is_divisible(), mod5.get(n).unwrap() == 0, "mod 5 at {n}");
    }
}

#[test]
fn verify_reports_zero_mismatches() {
    let e = MotzkinEngine::default();
    for m in SUPPORTED_MODULI {
        let v = verify_classifier(&e, m, 20_000).unwrap();
        assert_eq!(v.checked, 20_000);
        assert!(v.passed(), "{v:?}");
    }
}

#[test]
fn ceilings_are_enforced_everywhere() {
    let e = MotzkinEngine::new(Ceilings { exact: 100, modular: 50 });
    assert!(matches!(e.exact(101), Err(MotzkinError::ResourceLimit { .. })));
    assert!(matches!(e.exact_residues(2, 101), Err(MotzkinError::ResourceLimit { .. })));
    assert!(matches!(e.mod_stream(2, 51), Err(MotzkinError::ResourceLimit { .. })));
    assert!(matches!(e.cross_validate(2, 60), Err(MotzkinError::ResourceLimit { .. })));
    assert!(matches!(verify_classifier(&e, 8, 51), Err(MotzkinError::ResourceLimit { .. })));
}
