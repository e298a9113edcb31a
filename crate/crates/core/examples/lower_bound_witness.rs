//! Distance-to-stationarity witness from the particle count at times well
//! below N^{3/2}.

use strip_cgm::mixing::{lower_bound_witness, theta_for_band};
use strip_cgm::tasep::Params;

fn main() {
    for n in [16usize, 32, 64] {
        let (theta, mu) = theta_for_band(n, 0.85, 0.95).expect("theta");
        for c in [0.05, 0.2, 1.0] {
            let t = c * (n as f64).powf(1.5);
            let w = lower_bound_witness(&Params::triple_point(n), t, theta, 1000, 1).expect("witness");
            println!(
                "N={n:>3} theta={theta:.3} mu={mu:.3} t={t:>7.1}: hit {:.3}  witness {:.3} +- {:.3}",
                w.hit, w.witness, w.stderr
            );
        }
    }
}
