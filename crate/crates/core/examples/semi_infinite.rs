//! Semi-infinite geodesics on the strip and Busemann differences.

use strip_cgm::lpp::{busemann, semi_infinite_geodesic, EnvironmentSpec};

fn main() {
    let spec = EnvironmentSpec::strip(0.5, 0.5, 6).expect("spec");
    let seed = 3;
    let g = semi_infinite_geodesic(&spec, (1, 0), seed, 40).expect("geodesic");
    println!("certified at depth {}; first sites {:?}", g.depth, &g.path.points()[..8]);
    let a = semi_infinite_geodesic(&spec, (4, 0), seed, 40).expect("geodesic");
    let meet = g.path.points().iter().find(|x| a.path.contains(**x));
    println!("geodesics from (1,0) and (4,0) meet at {meet:?}");
    for x in [(1, 0), (2, 1), (3, 3)] {
        let b = busemann(&spec, x, (x.0 + 1, x.1), seed).expect("busemann");
        println!("B({x:?}, +e1) = {b:.4}");
    }
}
