use num_complex::Complex64;
use proptest::prelude::*;
use toprec_core::analysis::{borel_coeffs, fit_growth, DEFAULT_BETA_GRID};
use toprec_core::bounds::{big_d, CgnTable};
use toprec_core::curve::builtin_cubic;
use toprec_core::engine::{tr_table, FormEvaluator};
use toprec_core::{Exact, LaurentSeries, Scalar, VarTag};

fn series(lo: i64, cs: &[i64]) -> LaurentSeries<Exact> {
    LaurentSeries::from_terms(&(), VarTag(0), cs.iter().enumerate().map(|(i, &c)| (lo + i as i64, Exact::int(c))), None)
}

fn coeffs() -> impl Strategy<Value = (i64, Vec<i64>)> {
    (-4i64..4, prop::collection::vec(-9i64..10, 1..6))
}

proptest! {
    #[test]
    fn product_is_commutative_and_associative(a in coeffs(), b in coeffs(), c in coeffs()) {
        let (x, y, z) = (series(a.0, &a.1), series(b.0, &b.1), series(c.0, &c.1));
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
    }

    #[test]
    fn parity_parts_and_reflection(a in coeffs()) {
        let x = series(a.0, &a.1);
        prop_assert_eq!(x.even_part().add(&x.odd_part()).unwrap(), x.clone());
        prop_assert_eq!(x.reflect().reflect(), x.clone());
        prop_assert_eq!(x.reflect(), x.even_part().sub(&x.odd_part()).unwrap());
        prop_assert!(x.derivative().residue().unwrap().is_zero());
    }

    #[test]
    fn inverse_is_inverse(mut a in coeffs(), order in 0i64..6) {
        if a.1[0] == 0 {
            a.1[0] = 1;
        }
        let x = series(a.0, &a.1);
        let inv = x.invert(order).unwrap();
        let one = x.mul(&inv).unwrap();
        for e in 0..=order + a.0 {
            let expect = if e == 0 { Exact::int(1) } else { Exact::int(0) };
            prop_assert_eq!(one.coeff(e).unwrap(), expect);
        }
    }

    #[test]
    fn fit_is_scale_equivariant(beta_i in 0usize..7, r in 0.5f64..8.0, noise in prop::collection::vec(-0.2f64..0.2, 10), lambda in 1e-3f64..1e3) {
        let beta = DEFAULT_BETA_GRID[beta_i];
        let seq: Vec<(usize, f64)> = (2..12)
            .zip(&noise)
            .map(|(g, n)| (g, (libm::lgamma(beta * g as f64 + 1.0) - g as f64 * r.ln() + n).exp()))
            .collect();
        let scaled: Vec<(usize, f64)> = seq.iter().map(|&(g, v)| (g, v * lambda)).collect();
        let (a, b) = (fit_growth(&seq, &DEFAULT_BETA_GRID).unwrap(), fit_growth(&scaled, &DEFAULT_BETA_GRID).unwrap());
        prop_assert_eq!(a.beta, b.beta);
        prop_assert!((a.r_est - b.r_est).abs() <= 1e-9 * a.r_est);
        prop_assert!((b.offset - a.offset - lambda.ln()).abs() <= 1e-8);
    }

    #[test]
    fn fit_is_exact_on_its_model(beta_i in 0usize..7, r in 0.5f64..8.0, offset in -5.0f64..5.0) {
        let beta = DEFAULT_BETA_GRID[beta_i];
        let seq: Vec<(usize, f64)> = (2..14)
            .map(|g| (g, (libm::lgamma(beta * g as f64 + 1.0) - g as f64 * r.ln() + offset).exp()))
            .collect();
        let fit = fit_growth(&seq, &DEFAULT_BETA_GRID).unwrap();
        prop_assert_eq!(fit.beta, beta);
        prop_assert!(fit.residual < 1e-9 * (1.0 + offset.abs()));
        prop_assert!((fit.r_est - r).abs() < 1e-9 * r);
    }

    #[test]
    fn borel_weighting_round_trips(vals in prop::collection::vec(-1e6f64..1e6, 1..12), beta in 0.5f64..5.0) {
        let seq: Vec<(usize, f64)> = vals.iter().enumerate().map(|(g, &v)| (g + 2, v)).collect();
        let back = borel_coeffs(&seq, beta).unwrap().original();
        for ((g, v), (h, w)) in seq.iter().zip(&back) {
            prop_assert_eq!(g, h);
            prop_assert!((v - w).abs() <= 1e-9 * v.abs().max(1e-300));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn evaluation_is_symmetric(raw in prop::collection::vec((0usize..2, 0.05f64..0.3, 0.0f64..std::f64::consts::TAU), 4), perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle()) {
        thread_local! {
            static FORMS: (toprec_core::SpectralCurveLocal<Complex64>, Vec<toprec_core::engine::OmegaForm<Complex64>>) = {
                let c = builtin_cubic::<Complex64>(&(), 20);
                let t = tr_table(&c, 2).unwrap();
                let forms = vec![t.get(0, 4).unwrap().clone(), t.get(1, 2).unwrap().clone()];
                (c, forms)
            };
        }
        FORMS.with(|(c, forms)| {
            for form in forms {
                let ev = FormEvaluator::new(c, form).unwrap();
                let pts: Vec<(usize, Complex64)> = raw[..form.n].iter().map(|&(a, r, t)| (a, Complex64::from_polar(r, t))).collect();
                let sub: Vec<usize> = perm.iter().copied().filter(|&i| i < form.n).collect();
                let shuffled: Vec<(usize, Complex64)> = sub.iter().map(|&i| pts[i]).collect();
                let (x, y) = (ev.eval(&pts).unwrap(), ev.eval(&shuffled).unwrap());
                assert!((x - y).norm() <= 1e-10 * x.norm().max(1.0), "{x} vs {y}");
            }
        });
    }
}

#[test]
fn cgn_table_is_monotone() {
    let mut t = CgnTable::new();
    for g in 0..=4usize {
        for n in 1..=10usize {
            let lower = t.get(g, n);
            if lower == num_rational::BigRational::from_integer(0.into()) {
                continue;
            }
            let d = big_d(g, n + 1);
            let factor = num_rational::BigRational::new(
                num_traits::pow(num_bigint::BigInt::from(2 * d + 1), (2 * d + 1) as usize),
                num_bigint::BigInt::from(27) * num_traits::pow(num_bigint::BigInt::from(2 * d - 2), (2 * d - 2) as usize),
            );
            assert!(t.get(g, n + 1) >= lower * factor * num_rational::BigRational::from_integer(2.into()));
        }
    }
}
