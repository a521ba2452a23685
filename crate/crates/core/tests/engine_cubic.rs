use num_complex::Complex64;
use toprec_core::curve::{builtin_cubic, builtin_cubic_linear};
use toprec_core::engine::{build, compute_fg, omega_eval, tr_table, tr_table_for_fg, EngineError, EngineOptions, Slot, TermGroup};
use toprec_core::oracle::audit_coefficient;
use toprec_core::{Exact, Float, FloatCtx, Scalar};

#[test]
fn free_energy_is_nonzero_and_stable_under_truncation() {
    let m = 6 * 3 + 8;
    let c = builtin_cubic::<Exact>(&(), m);
    let t = tr_table_for_fg(&c, 3).unwrap();
    let f2 = compute_fg(&c, 2, &t).unwrap();
    assert!(!f2.is_zero());
    let c4 = builtin_cubic::<Exact>(&(), m + 4);
    let t4 = tr_table_for_fg(&c4, 3).unwrap();
    assert_eq!(compute_fg(&c4, 2, &t4).unwrap(), f2);
    assert_eq!(compute_fg(&c4, 3, &t4).unwrap(), compute_fg(&c, 3, &t).unwrap());
    assert_eq!(f2, Exact::ratio(-7, 5760));
}

#[test]
fn linear_y_has_vanishing_free_energies() {
    let c = builtin_cubic_linear::<Exact>(&(), 26);
    let t = tr_table_for_fg(&c, 3).unwrap();
    assert!(compute_fg(&c, 2, &t).unwrap().is_zero());
    assert!(compute_fg(&c, 3, &t).unwrap().is_zero());
}

#[test]
fn symmetry_audit_with_other_first_slot() {
    let c = builtin_cubic::<Exact>(&(), 20);
    let t = tr_table(&c, 3).unwrap();
    for (g, n) in [(0, 4), (1, 2), (1, 3), (0, 5)] {
        let form = t.get(g, n).unwrap();
        // Keys whose smallest slot differs from some other slot.
        let keys: Vec<&Vec<Slot>> = form.iter().map(|(k, _)| k).filter(|k| k.iter().any(|s| *s != k[0])).step_by(7).take(4).collect();
        assert!(!keys.is_empty());
        for key in keys {
            for first in 1..key.len() {
                let (table, audited) = audit_coefficient(&c, g, n, key, first).unwrap();
                assert!(!table.is_zero());
                assert_eq!(table, audited, "g = {g}, n = {n}, key = {key:?}, first = {first}");
            }
        }
    }
}

#[test]
fn degree_filter_drops_only_zeros() {
    let c = builtin_cubic::<Exact>(&(), 20);
    let targets = [(0, 3), (1, 1), (0, 4), (1, 2), (0, 5), (1, 3), (2, 1)];
    let fast = build(&c, &targets, EngineOptions::default()).unwrap();
    let full = build(&c, &targets, EngineOptions { degree_filter: false }).unwrap();
    assert_eq!(fast, full);
}

#[test]
fn pole_depth_bound_and_float_agreement() {
    let c = builtin_cubic::<Exact>(&(), 20);
    let t = tr_table(&c, 3).unwrap();
    let ctx = FloatCtx::new(192).unwrap();
    let cf = builtin_cubic::<Float>(&ctx, 20);
    let tf = tr_table(&cf, 3).unwrap();
    for form in t.iter() {
        assert!(form.deepest_exponent().unwrap() >= form.polar_floor());
        assert_eq!(form.deepest_exponent(), Some(form.polar_floor()));
        let other = tf.get(form.g, form.n).unwrap();
        assert_eq!(form.len(), other.len());
        for (key, v) in form.iter() {
            let w = other.coeff(key).unwrap().to_c64();
            assert!((v.to_c64() - w).norm() <= 1e-40 * v.to_c64().norm().max(1.0));
        }
    }
}

#[test]
fn truncation_budget_is_reported() {
    let c = builtin_cubic::<Exact>(&(), 3);
    match tr_table(&c, 3) {
        Err(EngineError::Truncation { g, n, term, .. }) => {
            assert!(2 * g + n >= 3);
            assert_ne!(term, TermGroup::Base);
        }
        other => panic!("expected a truncation error, got {other:?}"),
    }
}

#[test]
fn evaluation_is_symmetric_across_discs() {
    let c = builtin_cubic::<Complex64>(&(), 20);
    let t = tr_table(&c, 2).unwrap();
    let w = t.get(0, 4).unwrap();
    let p = [(0, Complex64::new(0.1, 0.05)), (1, Complex64::new(-0.08, 0.12)), (0, Complex64::new(0.02, -0.11)), (1, Complex64::new(0.13, 0.0))];
    let q = [p[3], p[1], p[0], p[2]];
    let (x, y) = (omega_eval(&c, w, &p).unwrap(), omega_eval(&c, w, &q).unwrap());
    assert!((x - y).norm() < 1e-12 * x.norm());
}
