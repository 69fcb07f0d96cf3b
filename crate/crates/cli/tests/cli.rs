use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_floqcool"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("floqcool-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str], out: &Path) -> Output {
    bin().args(args).arg("--out").arg(out).output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("run.toml");
    fs::write(&p, text).unwrap();
    p
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

/// Header row and data rows of a CSV, skipping `#` comments.
fn table(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let head = lines.next().unwrap().split(',').map(String::from).collect();
    (head, lines.map(|l| l.split(',').map(String::from).collect()).collect())
}

fn assert_finite_tables(dir: &Path) {
    for f in manifest(dir)["files"].as_array().unwrap() {
        let (head, rows) = table(&dir.join(f.as_str().unwrap()));
        assert!(!rows.is_empty(), "{f} is empty");
        for r in &rows {
            assert_eq!(r.len(), head.len());
            for cell in r {
                if let Ok(v) = cell.parse::<f64>() {
                    assert!(v.is_finite(), "{f}: {cell}");
                }
            }
        }
    }
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

#[test]
fn shipped_configs_run_and_write_finite_tables() {
    let cases: &[(&str, &[&str])] = &[
        ("cool_noisy", &["cool"]),
        ("cool_grid", &["cool"]),
        ("secular_afm", &["secular"]),
        ("rdm_noisy", &["rdm"]),
        ("xxz_isotropic", &["xxz"]),
        ("compare_prep", &["compare-prep"]),
        ("stabilize", &["stabilize-1q"]),
        ("sweep_cooling", &["sweep", "cooling"]),
        ("sweep_xxz", &["sweep", "xxz"]),
        ("validate", &["validate"]),
    ];
    for (name, cmd) in cases {
        let out = scratch(name);
        let cfg = configs_dir().join(format!("{name}.toml"));
        let mut args: Vec<&str> = cmd.to_vec();
        args.extend(["--config", cfg.to_str().unwrap()]);
        let res = run(&args, &out);
        assert!(res.status.success(), "{name}: {}", String::from_utf8_lossy(&res.stderr));
        assert_finite_tables(&out);
        let m = manifest(&out);
        assert!(m["wall_time_s"].as_f64().unwrap() >= 0.0);
        assert_eq!(m["version"], env!("CARGO_PKG_VERSION"));
        fs::remove_dir_all(out).unwrap();
    }
}

#[test]
fn outputs_are_byte_identical_for_a_seed() {
    let dir = scratch("determinism");
    let cfg = write_config(
        &dir,
        "[cool]\ndephasing = \"trajectory\"\n[cool.circuit]\nL = 6\nM = 2\ng = 0.2\nJ = 0.2\ntheta = 0.3\nh = 1.6\ncycles = 40\nnoise = { gamma_dephase = 0.05 }\n",
    );
    let cfg = cfg.to_str().unwrap();
    let runs: Vec<PathBuf> = (0..2)
        .map(|k| {
            let out = dir.join(format!("run{k}"));
            let res = run(&["cool", "--config", cfg, "--seed", "11", "--trajectories", "6"], &out);
            assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
            out
        })
        .collect();
    for f in ["energy.csv", "local.csv"] {
        assert_eq!(
            fs::read(runs[0].join(f)).unwrap(),
            fs::read(runs[1].join(f)).unwrap(),
            "{f}"
        );
    }
    let other = dir.join("other");
    assert!(run(
        &["cool", "--config", cfg, "--seed", "12", "--trajectories", "6"],
        &other
    )
    .status
    .success());
    assert_ne!(
        fs::read(runs[0].join("energy.csv")).unwrap(),
        fs::read(other.join("energy.csv")).unwrap()
    );
    let header = fs::read_to_string(runs[0].join("energy.csv")).unwrap();
    assert!(header.starts_with("# floqcool"));
    assert!(
        header.contains("# seed = 11") && header.contains("# trajectories = 6") && header.contains("# theta = 0.3")
    );
    assert!(header.contains("energy_stderr"));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn schema_violations_report_the_field_path() {
    let dir = scratch("schema");
    let cfg = write_config(
        &dir,
        "[xxz.circuit]\nN = 6\ntheta = 0.7\nphi = 1.5\ncycles = 4\nwobble = 1\n",
    );
    let res = run(&["xxz", "--config", cfg.to_str().unwrap()], &dir.join("out"));
    assert_eq!(res.status.code(), Some(2));
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains("xxz.circuit"), "{err}");
    let cfg = write_config(
        &dir,
        "[cool.circuit]\nL = 6\nM = 2\ng = 0.2\nJ = 0.2\ntheta = 3.0\nh = 1\ncycles = 4\n",
    );
    let res = run(&["cool", "--config", cfg.to_str().unwrap()], &dir.join("out"));
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("theta"));
    assert!(!dir.join("out").join("manifest.json").exists());
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn explicit_gaussian_engine_rejects_non_gaussian_experiments() {
    let dir = scratch("capability");
    let out = dir.join("out");
    assert_eq!(run(&["xxz", "--engine", "gaussian"], &out).status.code(), Some(3));
    assert_eq!(
        run(&["stabilize-1q", "--engine", "gaussian"], &out).status.code(),
        Some(3)
    );
    let decay = write_config(&dir, "[compare_prep]\nlengths = [4]\nnoise = { gamma_decay = 0.01 }\n[compare_prep.protocol]\ng = 0.2\nJ = 0.2\ntheta = 0.35\nh = 1.65\nreset_period = 4\ncycles_per_site = 10.0\nseed = 0\n");
    let decay = decay.to_str().unwrap();
    assert_eq!(
        run(&["compare-prep", "--config", decay, "--engine", "gaussian"], &out)
            .status
            .code(),
        Some(3)
    );
    let res = run(&["compare-prep", "--config", decay], &out);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    assert_eq!(manifest(&out)["engine"], "dense");
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn auto_engine_uses_dense_for_interior_auxiliaries() {
    let dir = scratch("interior");
    let cfg = write_config(
        &dir,
        "[cool.circuit]\nL = 5\nM = 1\nplacement = [3]\ng = 0.2\nJ = 0.2\ntheta = 0.3\nh = 1.6\ncycles = 8\n",
    );
    let cfg = cfg.to_str().unwrap();
    let out = dir.join("out");
    assert_eq!(
        run(&["cool", "--config", cfg, "--engine", "gaussian"], &out)
            .status
            .code(),
        Some(3)
    );
    assert!(run(&["cool", "--config", cfg], &out).status.success());
    assert_eq!(manifest(&out)["engine"], "dense");
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn engines_agree_on_a_noiseless_cooling_curve() {
    let dir = scratch("engines");
    let cfg = write_config(&dir, "[cool.circuit]\nL = 4\nM = 2\ng = 0.3\nJ = 0.2\ntheta = 0.4\nh = 1.5\ncycles = 12\ninit = { kind = \"vacuum\" }\n");
    let cfg = cfg.to_str().unwrap();
    let energy = |engine: &str| -> Vec<f64> {
        let out = dir.join(engine);
        assert!(run(&["cool", "--config", cfg, "--engine", engine], &out)
            .status
            .success());
        table(&out.join("energy.csv"))
            .1
            .iter()
            .map(|r| r[1].parse().unwrap())
            .collect()
    };
    let (a, b) = (energy("gaussian"), energy("dense"));
    assert_eq!(a.len(), 13);
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-10, "{x} vs {y}");
    }
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn defaults_run_without_a_config() {
    let dir = scratch("defaults");
    for cmd in ["eigenmodes", "secular", "rdm"] {
        let out = dir.join(cmd);
        let res = run(&[cmd], &out);
        assert!(res.status.success(), "{cmd}: {}", String::from_utf8_lossy(&res.stderr));
        assert_finite_tables(&out);
    }
    let (head, rows) = table(&dir.join("eigenmodes").join("modes.csv"));
    assert_eq!(head, ["alpha", "q", "phi", "delta", "mu", "xi", "residual"]);
    assert_eq!(rows.len(), 6);
    assert_eq!(
        run(&["eigenmodes", "--trajectories", "3"], &dir.join("x"))
            .status
            .code(),
        Some(1)
    );
    fs::remove_dir_all(dir).unwrap();
}
