use num_complex::Complex64;
use toprec_core::analysis::{borel_coeffs, fit_growth, DEFAULT_BETA_GRID};
use toprec_core::curve::builtin_cubic;
use toprec_core::engine::{compute_fg, tr_table_for_fg};

fn main() {
    let g_max = 8;
    let c = builtin_cubic::<Complex64>(&(), 6 * g_max + 8);
    let t = tr_table_for_fg(&c, g_max).unwrap();
    let seq: Vec<(usize, f64)> = (2..=g_max).map(|g| (g, compute_fg(&c, g, &t).unwrap().re)).collect();
    println!("{seq:?}");
    let fit = fit_growth(&seq, &DEFAULT_BETA_GRID).unwrap();
    println!("{fit:?}");
    for beta in [fit.beta, 2.0] {
        let b = borel_coeffs(&seq, beta).unwrap();
        let b2 = borel_coeffs(&seq[..seq.len() - 1], beta).unwrap();
        println!("beta {beta}: radius {} vs {}", b.radius_est, b2.radius_est);
    }
}
