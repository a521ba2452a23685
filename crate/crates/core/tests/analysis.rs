use toprec_core::analysis::{borel_coeffs, fit_growth, DEFAULT_BETA_GRID};
use toprec_core::curve::builtin_cubic;
use toprec_core::engine::{compute_fg, tr_table_for_fg};
use toprec_core::{Float, FloatCtx, Scalar};

#[test]
fn cubic_borel_radius_is_stable() {
    let ctx = FloatCtx::new(128).unwrap();
    let curve = builtin_cubic::<Float>(&ctx, 6 * 8 + 8);
    let t = tr_table_for_fg(&curve, 8).unwrap();
    let seq: Vec<(usize, f64)> = (2..=8).map(|g| (g, compute_fg(&curve, g, &t).unwrap().to_c64().re)).collect();
    assert!(seq.iter().all(|(_, v)| *v != 0.0));
    let fit = fit_growth(&seq, &DEFAULT_BETA_GRID).unwrap();
    assert!(fit.beta <= 5.0);
    let full = borel_coeffs(&seq, fit.beta).unwrap().radius_est;
    let short = borel_coeffs(&seq[..seq.len() - 1], fit.beta).unwrap().radius_est;
    assert!(full.is_finite() && full > 0.0);
    assert!((full - short).abs() <= 0.2 * full, "{full} vs {short}");
}
