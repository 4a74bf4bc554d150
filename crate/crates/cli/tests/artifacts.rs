use orbitlab_cli::config::ExperimentConfig;
use orbitlab_cli::{run, RunOptions};

#[test]
fn kirillov_dimension_writes_sorted_csv() {
    let cfg = ExperimentConfig::from_toml("experiment = \"kirillov\"\nmode = \"dimension\"\nj_list = [3, 1, 2]\n").unwrap();
    let rep = run(&cfg, &RunOptions::default()).unwrap();
    assert!(rep.pass());
    let dir = std::env::temp_dir().join(format!("orbitlab-art-{}", std::process::id()));
    rep.write(&dir, false).unwrap();
    let csv = std::fs::read_to_string(dir.join("results.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "experiment,cell,quantity,value,tolerance");
    let mut sorted = lines[1..].to_vec();
    sorted.sort();
    assert_eq!(sorted, lines[1..]);
    assert!(dir.join("report.json").exists());
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn same_seed_same_records() {
    let src = "experiment = \"stability\"\nmode = \"agreement\"\nsamples = 20\n";
    let cfg = ExperimentConfig::from_toml(src).unwrap();
    let a = run(&cfg, &RunOptions { seed: Some(5), jobs: 1 }).unwrap();
    let b = run(&cfg, &RunOptions { seed: Some(5), jobs: 4 }).unwrap();
    assert_eq!(a.records, b.records);
    assert_eq!(a.records.len(), 80);
}

#[test]
fn unknown_key_is_rejected_with_path() {
    let err = ExperimentConfig::from_toml("experiment = \"nilcone\"\nspinn = 3\n").unwrap_err();
    assert!(err.message.contains("spinn"), "{err}");
}

#[test]
fn bad_mode_is_a_config_error() {
    let cfg = ExperimentConfig::from_toml("experiment = \"relchar\"\nmode = \"bogus\"\n").unwrap();
    let err = run(&cfg, &RunOptions::default()).unwrap_err();
    assert!(err.to_string().contains("mode"));
}
