use std::time::Instant;

use num_complex::Complex64;
use num_rational::BigRational;
use toprec_core::bounds::*;
use toprec_core::curve::{builtin_airy, builtin_cubic, BRegularPart};
use toprec_core::engine::{compute_fg, tr_table, tr_table_for_fg};
use toprec_core::{Exact, Scalar, SpectralCurveLocal};

fn airy_constants() -> BoundConstants {
    estimate_constants(&builtin_airy::<Exact>(&()), &SamplingConfig::default()).unwrap()
}

#[test]
fn airy_constants_are_analytic() {
    let k = airy_constants();
    assert!((k.b_sup - 1.0).abs() < 1e-6, "{}", k.b_sup);
    assert!((k.c_sup - 0.25).abs() < 1e-6, "{}", k.c_sup);
    assert!((k.ctilde - 1.0 / 6.0).abs() < 1e-6, "{}", k.ctilde);
    assert!(k.b_meta.converged && k.c_meta.converged && k.phi_meta.converged);
}

#[test]
fn cubic_constants_settle() {
    let cfg = SamplingConfig::default();
    let k = estimate_constants(&builtin_cubic::<Exact>(&(), 30), &cfg).unwrap();
    for v in [k.b_sup, k.c_sup, k.ctilde] {
        assert!(v.is_finite() && v > 0.0);
    }
    let finer = SamplingConfig { angles: 2 * cfg.angles, radii: cfg.radii + 1, ..cfg };
    let k2 = estimate_constants(&builtin_cubic::<Exact>(&(), 38), &finer).unwrap();
    for (a, b) in [(k.b_sup, k2.b_sup), (k.c_sup, k2.c_sup), (k.ctilde, k2.ctilde)] {
        assert!((a - b).abs() <= 1e-6 * a, "{a} vs {b}");
    }
}

#[test]
fn perturbing_b_moves_the_sup_continuously() {
    let airy = builtin_airy::<Complex64>(&());
    let cfg = SamplingConfig::default();
    let base = estimate_sup_b(&airy, &cfg).unwrap().value;
    let eps = Complex64::new(1e-4, 0.0);
    let part = BRegularPart::from_sparse(&(), (0, 0), &[(0, 0, eps), (1, 1, eps), (0, 2, eps), (2, 0, eps)], None);
    let bumped = SpectralCurveLocal::new(&(), "airy+", airy.points().to_vec(), vec![part], *airy.radius()).unwrap();
    let moved = estimate_sup_b(&bumped, &cfg).unwrap().value;
    assert!((moved - base).abs() < 1e-3, "{base} -> {moved}");
}

#[test]
fn airy_one_point_and_three_point_margins() {
    let curve = builtin_airy::<Exact>(&());
    let t = tr_table(&curve, 1).unwrap();
    let k = airy_constants();
    let mut table = CgnTable::new();
    let r = check_omega_bound(&curve, t.get(1, 1).unwrap(), &k, &mut table, &[(0, Complex64::new(0.1, 0.2))]).unwrap();
    let rho4 = Complex64::new(0.1, 0.2).norm().powi(4);
    assert!((r.lhs - 1.0 / 16.0 / rho4).abs() < 1e-9 * r.lhs);
    assert!((r.rhs - 0.25 / rho4).abs() < 1e-6 * r.rhs);
    assert!(r.margin > 0.0);
    // Equal radii make the three-point bound an equality.
    let p = [(0, Complex64::from_polar(0.3, 0.1)), (0, Complex64::from_polar(0.3, 2.0)), (0, Complex64::from_polar(0.3, -1.3))];
    let r = check_omega_bound(&curve, t.get(0, 3).unwrap(), &k, &mut table, &p).unwrap();
    assert!((r.lhs - 0.5 / 0.3f64.powi(6)).abs() < 1e-9 * r.lhs);
    assert!(r.margin.abs() < 1e-5 * r.rhs);
}

#[test]
fn cubic_margins_on_random_tuples() {
    let start = Instant::now();
    let curve = builtin_cubic::<Complex64>(&(), 44);
    let k = estimate_constants(&curve, &SamplingConfig::default()).unwrap();
    let t = tr_table(&curve, 6).unwrap();
    let mut table = CgnTable::new();
    let mut worst = f64::INFINITY;
    for (i, form) in t.iter().enumerate() {
        let checker = OmegaBoundChecker::new(&curve, form, &k, &mut table).unwrap();
        for pts in sample_tuples(curve.num_points(), k.radius, form.n, 100, 17 + i as u64) {
            let r = checker.check(&pts).unwrap();
            assert!(r.holds(), "{r:?}");
            worst = worst.min(r.rhs / r.lhs);
        }
    }
    assert!(worst > 1.0);
    assert!(start.elapsed().as_secs() < 300);
}

#[test]
fn free_energy_bounds() {
    let p = FactorialBoundParams::default();
    let mut table = CgnTable::new();
    let airy = builtin_airy::<Exact>(&());
    let ka = airy_constants();
    let ta = tr_table_for_fg(&airy, 2).unwrap();
    let r = check_fg_bound(2, &compute_fg(&airy, 2, &ta).unwrap(), &ka, &mut table, &p).unwrap();
    assert_eq!(r.lhs, 0.0);
    assert!(r.margin > 0.0);

    let cubic = builtin_cubic::<Complex64>(&(), 6 * 6 + 8);
    let kc = estimate_constants(&cubic, &SamplingConfig::default()).unwrap();
    let tc = tr_table_for_fg(&cubic, 6).unwrap();
    for g in 2..=6 {
        let fg = compute_fg(&cubic, g, &tc).unwrap();
        let r = check_fg_bound(g, &fg, &kc, &mut table, &p).unwrap();
        assert!(r.lhs > 0.0 && r.holds(), "{r:?}");
        // The factorial form dominates exactly when the factorial bound on C_{g,1} holds.
        let fb = factorial_bound_check(g, 1, &mut table, &p);
        assert_eq!(r.rhs <= r.rhs_factorial * (1.0 + 1e-12), fb.holds);
    }
}

#[test]
fn factorial_bound_holds_on_the_desk_range() {
    let p = FactorialBoundParams::default();
    let mut table = CgnTable::new();
    for g in 0..=8usize {
        for n in 1..=16 - 2 * g {
            if 2 * g + n >= 3 {
                let r = factorial_bound_check(g, n, &mut table, &p);
                assert!(r.holds && r.ratio <= 1.0, "({g}, {n}): {}", r.ratio);
            }
        }
    }
}

#[test]
fn tampered_table_breaks_the_bound() {
    let p = FactorialBoundParams::default();
    let huge = BigRational::from_integer(10.into()).pow(40);
    let mut table = CgnTable::new().with_override(1, 1, huge);
    assert!(!factorial_bound_check(1, 1, &mut table, &p).holds);
}

#[test]
fn eta_infimum_matches_grid() {
    for k in 1..=20 {
        for d in 1..=20 {
            let r = inf_eta(k, d);
            let exact = ratio_f64(&r.value, &BigRational::from_integer(1.into()));
            let grid = grid_min_eta(k, d, 1_000_000);
            assert!((grid - exact).abs() <= 1e-9 * exact, "k = {k}, d = {d}: {grid} vs {exact}");
            assert!(r.value <= r.upper);
        }
    }
}

#[test]
fn samples_are_reproducible_and_in_range() {
    let a = sample_tuples(2, 0.5, 3, 50, 9);
    assert_eq!(a, sample_tuples(2, 0.5, 3, 50, 9));
    assert!(a.iter().flatten().all(|(d, r)| *d < 2 && r.norm() >= 0.05 && r.norm() <= 0.5));
    let _ = Exact::int(0).to_c64();
}
