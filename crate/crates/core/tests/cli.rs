//! End-to-end runs of the `rdpg` binary.

use std::path::Path;
use std::process::{Command, Output};

use faer::Mat;
use rdpg_ase::generators::{sample_sbm, SbmSpec};
use rdpg_ase::matrix_io::{load_matrix, save_matrix};

fn rdpg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rdpg"))
        .args(args)
        .env_remove("RDPG_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn generate_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for out in [&a, &b] {
        let o = rdpg(&[
            "generate",
            "--model",
            "sbm",
            "--n",
            "50",
            "--r",
            "2",
            "--seed",
            "7",
            "--out",
            p(out),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());

    let file = load_matrix(&a).unwrap();
    assert_eq!(file.kind, "binary");
    let expected = sample_sbm(&SbmSpec::planted(50, vec![1.0, 1.0], 0.9, 0.1), 7).unwrap();
    assert_eq!(file.matrix, expected.network.adjacency);

    let c = dir.path().join("c.txt");
    save_matrix(&c, &file.matrix, &file.kind).unwrap();
    assert_eq!(std::fs::read(&c).unwrap(), bytes);
}

#[test]
fn generate_rejects_out_of_range_rho() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.txt");
    let o = rdpg(&["generate", "--model", "binary", "--rho", "1.5", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("rho out of range"), "{}", stderr(&o));
    assert!(!out.exists());
}

#[test]
fn generate_writes_latents() {
    let dir = tempfile::tempdir().unwrap();
    let adj = dir.path().join("a.txt");
    let lat = dir.path().join("x.txt");
    let o = rdpg(&[
        "generate",
        "--model",
        "weighted",
        "--n",
        "30",
        "--noise",
        "laplace",
        "--seed",
        "3",
        "--out",
        p(&adj),
        "--latents-out",
        p(&lat),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let x = load_matrix(&lat).unwrap();
    assert_eq!((x.matrix.nrows(), x.matrix.ncols()), (30, 5));
    assert_eq!(load_matrix(&adj).unwrap().kind, "weighted");
}

#[test]
fn embed_writes_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let adj = dir.path().join("a.txt");
    let emb = dir.path().join("e.txt");
    rdpg(&[
        "generate",
        "--model",
        "sbm",
        "--n",
        "40",
        "--r",
        "3",
        "--seed",
        "1",
        "--out",
        p(&adj),
    ]);
    let o = rdpg(&["embed", "--input", p(&adj), "--d", "3", "--out", p(&emb)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("eigenvalue")).count(), 3);
    let m = load_matrix(&emb).unwrap();
    assert_eq!(
        (m.matrix.nrows(), m.matrix.ncols(), m.kind.as_str()),
        (40, 3, "embedding")
    );

    let o = rdpg(&["embed", "--input", p(&adj), "--d", "41", "--out", p(&emb)]);
    assert_eq!(o.status.code(), Some(2));
}

const MINIMAL: &str = "model = weighted_dirichlet\nn_grid = 100\ndims = 5\nreplicates = 2\nbase_seed = 3\n";

#[test]
fn experiment_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    std::fs::write(&cfg, MINIMAL).unwrap();
    let out1 = dir.path().join("one.csv");
    let out2 = dir.path().join("two.csv");
    let o1 = rdpg(&["experiment", "--config", p(&cfg), "--out", p(&out1)]);
    let o2 = rdpg(&["experiment", "--config", p(&cfg), "--out", p(&out2), "--workers", "3"]);
    assert_eq!(o1.status.code(), Some(0), "{}", stderr(&o1));
    let csv = std::fs::read_to_string(&out1).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.starts_with(
        "model,n,d,r,k,noise,gamma,rho,replicate,seed,err_2inf,err_frob,lower_bound,deloc_scaled_max,runtime_ms,status\n"
    ));
    assert_eq!(csv, std::fs::read_to_string(&out2).unwrap());

    let text = stdout(&o1);
    assert_eq!(text, stdout(&o2).replace("two.csv", "one.csv"));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "# model=weighted_dirichlet noise=normal r=5 replicates=2 label=theorem-setting"
    );
    assert_eq!(
        lines[1].split_whitespace().collect::<Vec<_>>(),
        [
            "model",
            "gamma",
            "d",
            "n",
            "ok",
            "failed",
            "mean_err_2inf",
            "errbar_2sem",
            "lower_bound"
        ]
    );
    assert!(lines[2].starts_with("weighted_dirichlet"));
}

#[test]
fn experiment_reports_config_errors_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "model = sbm_binary\nreplicates = two\n").unwrap();
    let o = rdpg(&["experiment", "--config", p(&cfg), "--out", p(&dir.path().join("o.csv"))]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line 2") && err.contains("replicates"), "{err}");
}

#[test]
fn experiment_diagnostics_side_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    std::fs::write(
        &cfg,
        "model = sbm_binary\nn_grid = 80\ndims = 5\nreplicates = 2\ndiagnostics = deloc\n",
    )
    .unwrap();
    let diag = dir.path().join("diag.csv");
    let o = rdpg(&[
        "experiment",
        "--config",
        p(&cfg),
        "--out",
        p(&dir.path().join("o.csv")),
        "--diagnostics-out",
        p(&diag),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&diag).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().skip(1).all(|l| l.contains("conjecture-support")));
    assert!(stdout(&o).contains("label=conjecture-support"));
}

#[test]
fn rate_reads_experiment_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    std::fs::write(
        &cfg,
        "model = weighted_dirichlet\nn_grid = 40, 80, 160\ndims = 5\nreplicates = 2\n",
    )
    .unwrap();
    let csv = dir.path().join("o.csv");
    rdpg(&["experiment", "--config", p(&cfg), "--out", p(&csv)]);
    let o = rdpg(&["rate", "--input", p(&csv)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("rate model=weighted_dirichlet noise=normal gamma=- d=5 slope="));

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "model,n,d\nx,1,2\n").unwrap();
    let o = rdpg(&["rate", "--input", p(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("err_2inf"));
}

#[test]
fn semicircle_on_wigner() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("curve.csv");
    let o = rdpg(&[
        "semicircle",
        "--model",
        "wigner",
        "--n",
        "500",
        "--eta",
        "1.0",
        "--out",
        p(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let line = stdout(&o);
    let sup: f64 = line
        .split_whitespace()
        .find_map(|t| t.strip_prefix("sup_error="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(sup < 0.05, "{line}");
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 122);
}

#[test]
fn semicircle_rejects_nonpositive_eta() {
    for eta in ["0", "-0.5"] {
        let o = rdpg(&["semicircle", "--eta", eta]);
        assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
        assert!(stderr(&o).contains("eta"));
    }
}

#[test]
fn deloc_refuses_low_rank_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    let x = Mat::from_fn(30, 2, |i, j| ((i + 2 * j) % 5) as f64 / 5.0 + 0.1);
    save_matrix(&path, &(&x * x.transpose()), "dense").unwrap();
    let o = rdpg(&["deloc", "--input", p(&path), "--skip", "2", "--window", "3"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("degenerate eigengap"));
}

#[test]
fn deloc_profile_on_sampled_network() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("deloc.csv");
    let o = rdpg(&[
        "deloc",
        "--model",
        "weighted",
        "--n",
        "200",
        "--seed",
        "4",
        "--out",
        p(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "index,eigenvalue,max_abs_entry,scaled_max_abs_entry"
    );
    assert_eq!(csv.lines().count(), 11);
    assert!(csv.lines().nth(1).unwrap().starts_with("6,"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(rdpg(&[]).status.code(), Some(2));
    assert_eq!(rdpg(&["generate"]).status.code(), Some(2));
    assert_eq!(rdpg(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(rdpg(&["--help"]).status.code(), Some(0));
}
