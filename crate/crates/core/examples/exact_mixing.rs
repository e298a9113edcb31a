//! Exact mixing times of short segments by uniformization, compared with
//! the coupling upper bound from the all-one and all-zero starts.

use strip_cgm::mixing::{coupling_mixing_upper, exact_mixing_time};
use strip_cgm::tasep::{Configuration, Params};

fn main() {
    println!("{:>3} {:>10} {:>10} {:>10}  worst start", "n", "exact", "coupling", "band hi");
    for n in [2usize, 4, 6, 8] {
        let p = Params::triple_point(n);
        let exact = exact_mixing_time(&p, 0.25, 1e-6).expect("exact");
        let coup = coupling_mixing_upper(&p, 0.25, 2000, 11).expect("coupling");
        let worst = Configuration::from_index(n, exact.maximizer.unwrap());
        let bits: String = worst.bits().iter().map(|b| char::from(b'0' + b)).collect();
        println!("{n:>3} {:>10.6} {:>10.4} {:>10.4}  {bits}", exact.hi, coup.t, coup.hi);
    }
}
