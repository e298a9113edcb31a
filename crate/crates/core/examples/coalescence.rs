//! Geodesic coalescence in strip rectangles, and the monochromatic
//! anti-diagonal it forces.

use strip_cgm::competition::coalescence_probe;
use strip_cgm::lpp::{coalescence_check, rectangle, EnvironmentSpec, WeightField};
use strip_cgm::rng::derive_seed;

fn main() {
    let w = 16usize;
    let spec = EnvironmentSpec::strip(0.5, 0.5, w).expect("spec");
    for m in [0.5, 1.0, 2.0, 4.0] {
        let k = (m * (w as f64).powf(1.5)).round() as i64;
        let rect = rectangle(w, w as i64, k).expect("rectangle");
        let hits = (0..400u64)
            .filter(|&s| {
                let f = WeightField::sample(spec, rect.region(), derive_seed(1, s, 0));
                coalescence_check(&f, &rect).expect("check")
            })
            .count();
        println!("m={m:<4} k={k:<4} P(coalesce) {:.3}", hits as f64 / 400.0);
    }
    let mut bad = 0;
    for s in 0..200 {
        bad += coalescence_probe(8, 8, 45, s).expect("probe").counterexample() as usize;
    }
    println!("coalesced but not monochromatic: {bad} of 200");
}
