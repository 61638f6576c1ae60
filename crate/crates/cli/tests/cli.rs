use std::fs;
use std::path::Path;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qdent").chain(args.iter().copied());
    let code = qdent_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn value(stdout: &str, key: &str) -> f64 {
    let prefix = format!("{key}=");
    let line = stdout.lines().find(|l| l.starts_with(&prefix)).unwrap_or_else(|| panic!("no {key} in {stdout}"));
    line[prefix.len()..].parse().unwrap()
}

fn path_arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn plateau_solve_reports_half_entanglement() {
    let (code, out, _) = run(&["solve", "--R", "3.6", "--p", "200"]);
    assert_eq!(code, 0);
    assert!((value(&out, "L") - 0.5).abs() <= 0.005, "{out}");
    for key in ["E", "gap", "U", "origin_density"] {
        assert!(value(&out, key).is_finite());
    }
}

#[test]
fn minimum_solve_is_nearly_unentangled() {
    let (code, out, _) = run(&["solve", "--R", "8.35", "--p", "200"]);
    assert_eq!(code, 0);
    assert!(value(&out, "L") <= 0.01, "{out}");
}

#[test]
fn classify_prints_table_label() {
    assert_eq!(run(&["classify", "--R", "12", "--p", "7"]).1.trim(), "core_shell");
    assert_eq!(run(&["classify", "--R", "4", "--p", "200"]).1.trim(), "double_dot");
}

#[test]
fn exit_codes() {
    let (code, _, err) = run(&["solve", "--nonsense"]);
    assert_eq!(code, 1);
    assert!(err.contains("Usage"), "{err}");
    assert_eq!(run(&["frobnicate"]).0, 1);
    assert_eq!(run(&["solve", "--R", "-1"]).0, 1);
    assert_eq!(run(&["solve", "--interaction", "yukawa"]).0, 1);
    assert_eq!(run(&["solve", "--config", "/nonexistent/qdent.conf"]).0, 1);
    // basis far too narrow for the quadrature grid
    assert_eq!(run(&["solve", "--R", "4", "--p", "2", "--omega", "100", "--n-basis", "20"]).0, 2);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("qpt-scan"));
}

#[test]
fn dumped_config_round_trips_and_flags_override_file() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(&conf, "# sweep setup\nR = 5\np = 7\nn_basis = 24   # small\np_values = 2, 7\n").unwrap();
    let (code, dump, _) = run(&["sweep", "--config", path_arg(&conf), "--p", "200", "--dump-config"]);
    assert_eq!(code, 0);
    assert!(dump.contains("R = 5\n") && dump.contains("p = 200\n") && dump.contains("n_basis = 24\n"));

    let again = dir.path().join("dumped.conf");
    fs::write(&again, &dump).unwrap();
    let (code, redump, _) = run(&["sweep", "--config", path_arg(&again), "--dump-config"]);
    assert_eq!(code, 0);
    assert_eq!(redump, dump);
}

#[test]
fn one_point_sweep_writes_two_lines_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |out: &Path| {
        vec!["sweep", "--r-min", "4", "--r-max", "4", "--p-values", "200", "--n-basis", "20", "--out"]
            .into_iter()
            .map(String::from)
            .chain([out.to_str().unwrap().to_string()])
            .collect::<Vec<_>>()
    };
    for out in [&a, &b] {
        let argv: Vec<String> = args(out);
        let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
        assert_eq!(run(&argv).0, 0);
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.starts_with("R,p,E,gap,U,L,origin_density,dE_dR,dL_dR,structure"));
    assert!(!text.contains('\r') && text.ends_with('\n'));
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let meta = fs::read_to_string(dir.path().join("a.meta")).unwrap();
    assert!(meta.contains("engine_version") && meta.contains("wall_time_seconds") && meta.contains("n_basis = 20"));
}

#[test]
fn sweep_reports_crossing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cross.csv");
    let (code, stdout, _) = run(&[
        "sweep", "--r-min", "16", "--r-max", "19", "--r-step", "0.5", "--p-values", "2,7", "--n-basis", "30",
        "--out", path_arg(&out),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("linear_entropy curves p=2 and p=7 cross"), "{stdout}");
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 7);
    // interior points carry derivatives, end points do not
    let second: Vec<&str> = text.lines().nth(2).unwrap().split(',').collect();
    let first: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert!(!second[7].is_empty() && first[7].is_empty());
}

#[test]
fn cuts_wavefunction_converge_and_scan_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cuts = dir.path().join("cuts.csv");
    let (code, out, _) =
        run(&["cuts", "--R", "3.6", "--p", "200", "--n-basis", "30", "--axis-points", "41", "--out", path_arg(&cuts)]);
    assert_eq!(code, 0, "{out}");
    let text = fs::read_to_string(&cuts).unwrap();
    assert_eq!(text.lines().next(), Some("x,diag_density,antidiag_density"));
    assert_eq!(text.lines().count(), 1 + 21);

    let wf = dir.path().join("wf.csv");
    let (code, out, _) =
        run(&["wavefunction", "--n-basis", "20", "--axis-points", "11", "--axis-half-width", "10", "--out", path_arg(&wf)]);
    assert_eq!(code, 0);
    assert_eq!(fs::read_to_string(&wf).unwrap().lines().count(), 1 + 121);
    assert!(out.contains("norm="));

    let conv = dir.path().join("conv.csv");
    let (code, _, _) = run(&["converge", "--n-values", "10,20", "--omega-values", "0.25,0.35", "--out", path_arg(&conv)]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(&conv).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().nth(1).unwrap().ends_with(",,,"), "{text}");

    let scan = dir.path().join("scan.csv");
    let (code, out, _) = run(&[
        "qpt-scan", "--n-basis", "20", "--r-min", "8", "--r-max", "8.2", "--r-step", "0.05", "--p-values", "7,200",
        "--out", path_arg(&scan),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("strictly increasing"));
    assert_eq!(fs::read_to_string(&scan).unwrap().lines().count(), 3);
}

#[test]
fn binary_uses_cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    fs::create_dir(&cache).unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_qdent"))
        .args(["solve", "--n-basis", "12"])
        .env("QDENT_CACHE_DIR", &cache)
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    assert_eq!(fs::read_dir(&cache).unwrap().count(), 1);

    let bad = Command::new(env!("CARGO_BIN_EXE_qdent")).args(["solve", "--bogus"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
