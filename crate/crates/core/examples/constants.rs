use std::time::Instant;

use toprec_core::bounds::{estimate_constants, SamplingConfig};
use toprec_core::curve::{builtin_airy, builtin_cubic};
use toprec_core::Exact;

fn main() {
    let cfg = SamplingConfig::default();
    for (name, curve) in [("airy", builtin_airy::<Exact>(&())), ("cubic", builtin_cubic::<Exact>(&(), 30))] {
        let t = Instant::now();
        let k = estimate_constants(&curve, &cfg).unwrap();
        println!("{name}: {k:#?} in {:?}", t.elapsed());
    }
}
