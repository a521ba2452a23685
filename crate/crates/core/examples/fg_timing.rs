use std::time::Instant;

use num_complex::Complex64;
use toprec_core::curve::builtin_cubic;
use toprec_core::engine::{compute_fg, tr_table_for_fg};
use toprec_core::{Exact, Float, FloatCtx};

fn main() {
    let g_max: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let mode = std::env::args().nth(2).unwrap_or_else(|| "c64".into());
    let m = 6 * g_max + 8;
    let t0 = Instant::now();
    match mode.as_str() {
        "exact" => {
            let c = builtin_cubic::<Exact>(&(), m);
            println!("lowered {:?}", t0.elapsed());
            let t = tr_table_for_fg(&c, g_max).unwrap();
            println!("table {:?}", t0.elapsed());
            for g in 2..=g_max {
                println!("F_{g} = {}", compute_fg(&c, g, &t).unwrap().to_string().chars().take(120).collect::<String>());
            }
        }
        "float" => {
            let ctx = FloatCtx::default();
            let c = builtin_cubic::<Float>(&ctx, m);
            let t = tr_table_for_fg(&c, g_max).unwrap();
            println!("table {:?}", t0.elapsed());
            for g in 2..=g_max {
                println!("F_{g} = {}", compute_fg(&c, g, &t).unwrap().to_string().chars().take(80).collect::<String>());
            }
        }
        _ => {
            let c = builtin_cubic::<Complex64>(&(), m);
            let t = tr_table_for_fg(&c, g_max).unwrap();
            println!("table {:?}", t0.elapsed());
            for g in 2..=g_max {
                println!("F_{g} = {}", compute_fg(&c, g, &t).unwrap());
            }
        }
    }
    println!("total {:?}", t0.elapsed());
}
