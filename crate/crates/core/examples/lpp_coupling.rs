//! TASEP driven by last passage weights: every jump time is a passage time
//! from the initial growth interface.

use strip_cgm::lpp::{
    check_label_identity, passage_times, tasep_from_weights, EnvironmentSpec, GrowthInterface, Region, Source,
    WeightField,
};
use strip_cgm::tasep::{Configuration, Params};

fn main() {
    let eta0: Configuration = "011010".parse().expect("config");
    let (alpha, beta) = (0.8, 0.55);
    let n = eta0.len();
    let params = Params::new(n, alpha, beta).expect("params");
    let spec = EnvironmentSpec::strip(alpha, beta, n).expect("spec");
    let region = Region::support_rows(&spec, -(eta0.particles() as i64), 200).expect("region");
    let field = WeightField::sample(spec, region, 42);

    let horizon = 40.0;
    let (traj, labels) = tasep_from_weights(&field, &eta0, &params, horizon).expect("coupled run");
    let gamma = GrowthInterface::from_config(&eta0);
    println!("initial interface {:?}", gamma.points());
    let pf = passage_times(&field, Source::interface(gamma)).expect("passage times");
    let cells = check_label_identity(&labels, &pf, horizon).expect("identity");
    println!("{} events, {cells} jump cells equal their passage times", traj.events.len());
    for t in [5.0, 20.0, 40.0] {
        let front = pf.growth_interface_at(t).expect("interface");
        println!("t={t:>4}: state {}  interface has {} sites", traj.state_at(t), front.len());
    }
}
