//! Event-driven open TASEP: a trajectory, its text form and the current.

use strip_cgm::tasep::{current, label_particles, simulate, Configuration, Params, Trajectory};

fn main() {
    let params = Params::new(8, 0.7, 0.6).expect("params");
    let eta0: Configuration = "10110010".parse().expect("config");
    let traj = simulate(&eta0, &params, 50.0, 1).expect("simulate");
    traj.validate().expect("valid trajectory");
    for t in [0.0, 10.0, 25.0, 50.0] {
        println!("t={t:>5.1}  {}  entries so far {}", traj.state_at(t), current(&traj, t));
    }
    println!("events {}  long-run current {:.3}", traj.events.len(), current(&traj, 50.0) as f64 / 50.0);

    let text = traj.to_text();
    let back = Trajectory::from_text(&text).expect("parse");
    assert_eq!(back.events.len(), traj.events.len());
    println!("text form: {} lines", text.lines().count());

    let labels = label_particles(&traj);
    for u in [0i64, 1, 2] {
        println!("label {u} at t=50: {:?}", labels.position_at(u, 50.0));
    }
}
