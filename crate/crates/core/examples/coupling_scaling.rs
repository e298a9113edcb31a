//! Coupling upper bounds on the mixing time at the triple point and their
//! log-log slope in the segment length.

use strip_cgm::mixing::{coupling_mixing_upper, scaling_fit};
use strip_cgm::tasep::Params;

fn main() {
    let mut pts = Vec::new();
    for n in [8usize, 16, 32, 64] {
        let r = coupling_mixing_upper(&Params::triple_point(n), 0.25, 300, 5).expect("coupling");
        println!("N={n:>3}  t={:>9.2}  band [{:.2}, {:.2}]", r.t, r.lo, r.hi);
        pts.push((n as f64, r.t));
    }
    let fit = scaling_fit(&pts).expect("fit");
    println!("slope {:.3} +- {:.3}", fit.slope, fit.stderr);
}
