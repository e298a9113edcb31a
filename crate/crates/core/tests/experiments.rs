use std::path::PathBuf;

use strip_cgm::competition::Coloring;
use strip_cgm::experiments::*;
use strip_cgm::lpp::{EnvironmentSpec, Region, WeightField};
use strip_cgm::tasep::Configuration;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("strip-cgm-test-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn config(text: &str, out: &str, workers: usize) -> ExperimentConfig {
    let over = Overrides { out: Some(scratch(out)), workers: Some(workers), ..Default::default() };
    ExperimentConfig::from_toml(text, &over).unwrap()
}

const COAL: &str = "[run]\nexperiment = \"coalescence\"\nseed = 3\nreplicas = 120\nplot = true\n\n[params]\nwidth = 8\nmultipliers = [0.5, 2.0]\n";

fn bytes(cfg: &ExperimentConfig, m: &RunManifest) -> Vec<Vec<u8>> {
    m.outputs.iter().map(|d| std::fs::read(cfg.out.join(&d.file)).unwrap()).collect()
}

#[test]
fn same_config_twice_is_byte_identical() {
    let a = config(COAL, "twice-a", 2);
    let b = config(COAL, "twice-b", 2);
    let (ma, mb) = (run(&a).unwrap(), run(&b).unwrap());
    assert_eq!(ma.outputs, mb.outputs);
    assert_eq!(bytes(&a, &ma), bytes(&b, &mb));
    assert_eq!(ma.config_hash, mb.config_hash);
    assert!(ma.verify(&a.out).is_empty());
}

#[test]
fn worker_count_does_not_change_output() {
    for text in [
        COAL,
        "[run]\nexperiment = \"reversal\"\nseed = 8\nreplicas = 12\n[params]\nsizes = [2, 4]\nheights = [8]\n",
        "[run]\nexperiment = \"current\"\nseed = 8\nreplicas = 100\n[params]\nsizes = [8, 16]\nc = 0.5\n",
    ] {
        let one = config(text, "w1", 1);
        let eight = config(text, "w8", 8);
        let (m1, m8) = (run(&one).unwrap(), run(&eight).unwrap());
        assert_eq!(m1.outputs, m8.outputs);
        assert_eq!(m1.config_hash, m8.config_hash);
    }
}

#[test]
fn manifest_round_trips_and_detects_tampering() {
    let cfg = config(COAL, "manifest", 1);
    let m = run(&cfg).unwrap();
    let back = RunManifest::load(&cfg.out).unwrap();
    assert_eq!(back, m);
    assert_eq!(m.seed_groups[0].seed(0), strip_cgm::rng::derive_seed(3, 0, COALESCENCE_STREAM));
    std::fs::write(cfg.out.join("coalescence.csv"), "x\n").unwrap();
    assert_eq!(m.verify(&cfg.out), vec!["coalescence.csv".to_string()]);
}

#[test]
fn config_errors_exit_with_two() {
    let cases = [
        "[run]\nexperiment = \"nope\"\nseed = 1\n",
        "[run]\nexperiment = \"shape\"\n[params]\nsizes = [10, 20, 30]\n",
        "[run]\nexperiment = \"shape\"\nseed = 1\n[params]\nsizes = [10]\n",
        "[run]\nexperiment = \"coalescence\"\nseed = 1\nreplicas = 0\n[params]\nwidth = 4\nmultipliers = [1.0]\n",
        "[run]\nexperiment = \"scaling\"\nseed = 1\n[params]\nsizes = [4, 8, 16]\nbogus = 1\n",
        "[run]\nexperiment = \"current\"\nseed = 1\n[params]\nsizes = [4]\n",
    ];
    for text in cases {
        let e = ExperimentConfig::from_toml(text, &Overrides::default()).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_CONFIG, "{text}");
    }
    assert_eq!("lower-bound".parse::<Experiment>().unwrap(), Experiment::LowerBound);
}

#[test]
fn cap_violations_exit_with_three() {
    let text = "[run]\nexperiment = \"mixing-exact\"\nseed = 1\n[params]\nsizes = [15]\n";
    let cfg = config(text, "cap", 1);
    assert_eq!(run(&cfg).unwrap_err().exit_code(), EXIT_CAP);
}

#[test]
fn scaling_emits_fit_row() {
    let text = "[run]\nexperiment = \"scaling\"\nseed = 2\nreplicas = 200\n[params]\nsizes = [4, 8, 16]\n";
    let cfg = config(text, "scaling", 4);
    run(&cfg).unwrap();
    let fit = read_table(&cfg.out, "scaling_fit.csv").unwrap();
    assert_eq!(fit.header, ["slope", "intercept", "stderr", "points"]);
    assert_eq!(fit.rows.len(), 1);
    let slope = fit.numbers("slope").unwrap()[0];
    assert!(slope > 1.0 && slope < 2.5, "{slope}");
    assert_eq!(read_table(&cfg.out, "scaling.csv").unwrap().rows.len(), 3);
}

#[test]
fn exact_csv_matches_golden_time() {
    let text = "[run]\nexperiment = \"mixing-exact\"\nseed = 1\n[params]\nsizes = [2]\n";
    let cfg = config(text, "exact", 1);
    run(&cfg).unwrap();
    let t = read_table(&cfg.out, "mixing_exact.csv").unwrap();
    assert!((t.numbers("t_hi").unwrap()[0] - 1.730775).abs() < 1e-5);
}

#[test]
fn fixture_plot_is_byte_stable() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let csv = std::fs::read_to_string(dir.join("loglog.csv")).unwrap();
    let svg = plot_csv(&csv, &PlotKind::LogLog { x: "n".into(), y: "t".into() }, "fixture").unwrap();
    assert_eq!(svg, std::fs::read_to_string(dir.join("loglog.svg")).unwrap());
    assert_eq!(svg, plot_csv(&csv, &PlotKind::LogLog { x: "n".into(), y: "t".into() }, "fixture").unwrap());
}

#[test]
fn site_map_draws_one_rect_per_site() {
    let spec = EnvironmentSpec::strip(0.5, 0.5, 4).unwrap();
    let region = Region::support_rows(&spec, -2, 10).unwrap();
    let f = WeightField::sample(spec, region, 5);
    let eta: Configuration = "0101".parse().unwrap();
    let c = Coloring::new(&f, &eta, 1).unwrap();
    let (plus, minus) = c.counts();
    let svg = site_map_svg(&c, "coloring");
    assert_eq!(svg.matches("<rect").count(), plus + minus);
    assert_eq!(svg.matches("#c0392b").count(), plus);
}
