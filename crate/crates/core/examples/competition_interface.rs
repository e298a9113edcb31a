//! Competition interface of a corner, its second class particle, and a site
//! map of the two clusters.

use strip_cgm::competition::{competition_interface, second_class_vs_interface, Coloring};
use strip_cgm::experiments::site_map_svg;
use strip_cgm::lpp::{EnvironmentSpec, Region, WeightField};
use strip_cgm::tasep::{Configuration, DisagreementConfig, Params};

fn main() {
    let eta: Configuration = "010110".parse().expect("config");
    let spec = EnvironmentSpec::strip(0.5, 0.5, eta.len()).expect("spec");
    let region = Region::support_rows(&spec, -(eta.particles() as i64), 30).expect("region");
    let field = WeightField::sample(spec, region, 9);
    let coloring = Coloring::new(&field, &eta, 1).expect("coloring");
    let (plus, minus) = coloring.counts();
    println!("plus {plus} sites, minus {minus} sites");
    let phi = competition_interface(&coloring, 200).expect("interface");
    println!("interface {} steps, absorbed {}: {:?}", phi.sites.len() - 1, phi.absorbed, phi.sites);

    let svg = site_map_svg(&coloring, "competition");
    let path = std::env::temp_dir().join("competition.svg");
    std::fs::write(&path, svg).expect("write svg");
    println!("site map written to {}", path.display());

    let xi = DisagreementConfig { vals: vec![1, 0, 2, 0, 1] };
    for seed in 0..5 {
        let r = second_class_vs_interface(&xi, &Params::triple_point(5), 100.0, seed).expect("pair run");
        println!(
            "seed {seed}: identity {} over {} steps, exit {:?}",
            r.identity_holds, r.steps_checked, r.exit_time
        );
    }
}
