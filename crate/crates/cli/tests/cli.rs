use std::path::PathBuf;
use std::process::{Command, Output};

fn cawf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cawf")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cawf-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(name: &str, text: &str) -> String {
    let path = scratch(name).join("scenario.ini");
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn validate_passes_on_defaults() {
    let o = cawf(&["validate"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("wealth.fd = PASS") && text.contains("wealth.mc = PASS"), "{text}");
    assert!(text.contains("overall = PASS"));
}

#[test]
fn validation_failure_exits_two() {
    // a coarse grid and tiny sample cannot meet the tolerances
    let cfg = write_config("coarse", "[wealth]\nfd_points = 101\nmc_samples = 1000\nlambda = 50\n");
    let o = cawf(&["validate", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn exit_codes() {
    let cfg = write_config("deg", "[wealth]\ntheta = 0.01\n");
    assert_eq!(cawf(&["validate", "--config", &cfg]).status.code(), Some(3));
    let cfg = write_config("alpha", "[equilibrium]\nalpha = 0.3\n");
    let o = cawf(&["equilibrium", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha"));
    let cfg = write_config("gamma", "[wealth]\ngamma = -1\n");
    let o = cawf(&["wealth", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("wealth.gamma (line 2)"));
    assert_eq!(cawf(&["reproduce", "--figure", "0"]).status.code(), Some(1));
    assert_eq!(cawf(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(cawf(&["wealth", "--config", "/nonexistent/cawf.ini"]).status.code(), Some(1));
    let cfg = write_config("mismatch", "[wealth]\nagent_type = one\n");
    assert_eq!(cawf(&["reproduce", "--figure", "9", "--config", &cfg]).status.code(), Some(1));
    let cfg = write_config("inactive", "[wealth]\nz = 4\n");
    assert_eq!(cawf(&["wealth", "--config", &cfg]).status.code(), Some(1));
}

#[test]
fn out_dir_and_explain() {
    let dir = scratch("out");
    let o = cawf(&["reproduce", "--figure", "7", "--out", dir.to_str().unwrap(), "--explain"]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("lambda = 5    # collateral multiple; default"), "{err}");
    let csv = std::fs::read_to_string(dir.join("figure_07.csv")).unwrap();
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "x,lambda_L,lambda_M,lambda_H");
}

#[test]
fn seed_changes_only_random_figures() {
    let a = cawf(&["reproduce", "--figure", "6", "--seed", "1"]);
    let b = cawf(&["reproduce", "--figure", "6", "--seed", "2"]);
    let data = |o: &Output| stdout(o).lines().filter(|l| !l.starts_with('#')).map(String::from).collect::<Vec<_>>();
    assert_ne!(data(&a), data(&b));
    let c = cawf(&["reproduce", "--figure", "5", "--seed", "1"]);
    let d = cawf(&["reproduce", "--figure", "5", "--seed", "2"]);
    assert_eq!(data(&c), data(&d));
}

#[test]
fn provenance_regenerates_the_csv() {
    let cfg = write_config("prov", "[wealth]\nagent_type = two\nf_sigma = 0.5\n[cawf]\npaths = 300\n");
    let first = stdout(&cawf(&["reproduce", "--figure", "6", "--config", &cfg, "--seed", "9"]));
    let embedded: String = first
        .lines()
        .skip_while(|l| *l != "# config:")
        .skip(1)
        .take_while(|l| l.starts_with('#'))
        .map(|l| format!("{}\n", &l[2..]))
        .collect();
    let again_cfg = write_config("prov2", &embedded);
    let second = stdout(&cawf(&["reproduce", "--figure", "6", "--config", &again_cfg]));
    assert_eq!(first, second);
}

#[test]
fn module_reports() {
    for verb in ["cognition", "datavalue", "tax", "wealth", "equilibrium"] {
        let o = cawf(&[verb]);
        assert!(o.status.success(), "{verb}");
        assert!(stdout(&o).lines().all(|l| l.contains(" = ")), "{verb}");
    }
    let cfg = write_config("hot", "[equilibrium]\nlambda = 25\ntheta = 0.5\nsigma = 0.5\n");
    let o = cawf(&["equilibrium", "--config", &cfg]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("valid = false") && stdout(&o).contains("w_star = none"));
}
