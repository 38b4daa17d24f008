use std::fs;
use std::path::Path;
use std::process::Command;

use catlight_cli::config::{parse_config, ExperimentKind};
use catlight_cli::{load_spec, run, write_artifacts, ExperimentSpec};

const SMALL: &str = r#"
[physics]
cutoff = 16
t_max = 5.0
gamma = 0.01
"#;

fn spec(kind: ExperimentKind, extra: &str) -> ExperimentSpec {
    parse_config(&format!("{SMALL}{extra}")).unwrap().resolve(Some(kind)).unwrap().0
}

fn write_with_threads(spec: &ExperimentSpec, threads: usize, dir: &Path) -> Vec<(String, Vec<u8>)> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    let artifacts = pool.install(|| run(spec)).unwrap();
    write_artifacts(spec, &artifacts, dir)
        .unwrap()
        .into_iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect()
}

#[test]
fn output_is_identical_across_thread_counts() {
    let cases = [
        spec(ExperimentKind::InterferenceDynamics, ""),
        spec(ExperimentKind::NegativitySweep, "[light]\nalphas = [0.0, 0.4, 0.8]\n"),
        spec(ExperimentKind::GammaScaling, "gammas = [0.001, 0.002, 0.004]\n"),
        spec(ExperimentKind::Custom, "gammas = [0.001, 0.01]\n[light]\nalphas = [0.3, 0.6]\n"),
    ];
    for s in &cases {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        assert_eq!(write_with_threads(s, 1, a.path()), write_with_threads(s, 4, b.path()), "{}", s.kind);
    }
}

#[test]
fn csv_layout() {
    let s = spec(ExperimentKind::InterferenceDynamics, "[experiment]\nsample_every = 7\n");
    let dir = tempfile::tempdir().unwrap();
    let files = write_with_threads(&s, 2, dir.path());
    assert_eq!(files.len(), 1);
    let text = String::from_utf8(files[0].1.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), format!("# resolved-config: {}", s.canonical()));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header[0], "t");
    for col in ["full_rho_uudd_re", "full_rho_uudd_im", "full_itf_rho_udud", "xfa_sg_trace_distance"] {
        assert!(header.contains(&col), "missing {col}");
    }
    let rows: Vec<&str> = lines.collect();
    // 500 steps sampled every 7, plus the final step.
    assert_eq!(rows.len(), 500 / 7 + 2);
    assert!(rows.iter().all(|r| r.split(',').count() == header.len()));
    assert!(rows.last().unwrap().starts_with("5,"));
}

#[test]
fn vacuum_drive_leaves_no_entanglement_under_rwa() {
    let s = spec(
        ExperimentKind::NegativitySweep,
        "rwa = true\n[light]\nalphas = [0.0]\ninset_alpha = 0.0\n[experiment]\nmodes = [\"full\", \"xfa_sg\"]\nsample_every = 1\n",
    );
    let artifacts = run(&s).unwrap();
    assert_eq!(artifacts[0].series.real("full_negativity").unwrap(), [0.0]);
    let inset = &artifacts[1].series;
    for col in ["full_negativity", "xfa_sg_negativity", "xfa_sg_delta_negativity"] {
        assert!(inset.real(col).unwrap().iter().all(|&n| n == 0.0), "{col}");
    }
}

#[test]
fn config_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    fs::write(
        &path,
        "[experiment]\nkind = \"custom\"\n[physics]\ngammas = [0.001, 0.002]\n[light]\nalpha = 0.4\nalpha_im = -0.2\n",
    )
    .unwrap();
    let (s, warnings) = load_spec(Some(&path), ExperimentKind::Custom).unwrap();
    assert!(warnings.is_empty());
    assert_eq!(s.gammas, [0.001, 0.002]);
    assert_eq!(s.light.alphas[0], catlight::C64::new(0.4, -0.2));
    assert!(load_spec(Some(&path), ExperimentKind::GammaScaling).is_err());
    assert!(load_spec(Some(&dir.path().join("missing.toml")), ExperimentKind::Custom).is_err());
}

fn binary(args: &[&str], config: Option<&str>) -> (i32, String) {
    let dir = tempfile::tempdir().unwrap();
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_catlight"));
    cmd.args(args).arg("--out").arg(dir.path());
    if let Some(text) = config {
        let path = dir.path().join("c.toml");
        fs::write(&path, text).unwrap();
        cmd.arg("--config").arg(path);
    }
    let out = cmd.output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn exit_codes() {
    let (ok, _) = binary(&["custom", "--threads", "2"], Some(SMALL));
    assert_eq!(ok, 0);

    let (bad, err) = binary(&["custom"], Some("[physics]\ndt = -0.1\n"));
    assert_eq!(bad, 2, "{err}");
    assert!(err.contains("dt"));

    // A step far beyond the stability limit of RK4 trips the norm guard.
    let (guard, err) = binary(&["custom"], Some("[physics]\ncutoff = 8\ndt = 3.0\nt_max = 30.0\ngamma = 1.0\n"));
    assert_eq!(guard, 3, "{err}");
    assert!(err.contains("gamma = 1"), "{err}");
}
