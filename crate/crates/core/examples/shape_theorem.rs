//! Corner passage time G((n, n)) in the homogeneous quadrant: mean near 4n,
//! fluctuations of order n^{1/3}.

use strip_cgm::lpp::corner_time_samples;
use strip_cgm::mixing::scaling_fit;

fn main() {
    let mut pts = Vec::new();
    for n in [50usize, 100, 200, 400] {
        let s = corner_time_samples(n, 400, 8);
        let mean = s.iter().sum::<f64>() / s.len() as f64;
        let sd = (s.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (s.len() - 1) as f64).sqrt();
        println!("n={n:>4}  mean/n {:.4}  sd {sd:.3}", mean / n as f64);
        pts.push((n as f64, sd));
    }
    let fit = scaling_fit(&pts).expect("fit");
    println!("fluctuation exponent {:.3} +- {:.3}", fit.slope, fit.stderr);
}
