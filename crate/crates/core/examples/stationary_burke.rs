//! Burke's property of the stationary strip along three down-right paths,
//! and the reversal identity with its negative control.

use strip_cgm::stationary::{
    burke_test, increments, reversal_identity_error, reversed_environment, standard_paths, stationary_passage,
};

fn main() {
    let n = 4;
    let rows = n as i64 + 4;
    for path in standard_paths(n) {
        let r = burke_test(n, rows, path, 2024, 10_000).expect("burke test");
        println!(
            "{:<12} KS Exp(1/2) p={:.3}  KS Y~Exp(1) p={:.3}  control p={:.2e}  max|rho|={:.4}",
            path.name(),
            r.increments.p_value,
            r.minimum.p_value,
            r.wrong_rate.p_value,
            r.max_abs_correlation()
        );
    }
    let m = 16;
    let (field, pf) = stationary_passage(n, m, 7).expect("field");
    let inc = increments(&field, &pf).expect("increments");
    let rev = reversed_environment(&inc, m).expect("reversed environment");
    println!("reversal identity error  {:.2e}", reversal_identity_error(&inc, &rev).unwrap());
    println!("shifted control error    {:.2e}", reversal_identity_error(&inc, &rev.shifted()).unwrap());
}
