use std::process::{Command, Output};

use polydisc::{resultant, IntPolynomial};

fn polydisc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polydisc")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn disc_prints_exact_integer() {
    let o = polydisc(&["disc", "--coeffs", "-1,0,1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "4\n");
    let big = polydisc(&["disc", "--check", "--coeffs", "123456789012345678901234567890,7,-99999999999999999999"]);
    assert!(big.status.success());
    let a: num_bigint::BigInt = "-99999999999999999999".parse().unwrap();
    let c: num_bigint::BigInt = "123456789012345678901234567890".parse().unwrap();
    let want: num_bigint::BigInt = num_bigint::BigInt::from(49) - a * c * 4;
    assert_eq!(stdout(&big).trim(), want.to_string());
}

#[test]
fn res_matches_library() {
    let o = polydisc(&["res", "--p", "1,1", "--q", "-1,1"]);
    let lib = resultant(&IntPolynomial::from_i64(&[1, 1]), &IntPolynomial::from_i64(&[-1, 1])).unwrap();
    assert_eq!(stdout(&o).trim(), lib.to_string());
}

#[test]
fn delta_reports_certificate() {
    let o = polydisc(&["delta", "--coeffs", "-8,14,-7,1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "coeffs,delta,mahler_bound,converged,residual_bound,iterations");
    let row = lines.next().unwrap();
    let delta: f64 = row.split(',').nth(4).unwrap().parse().unwrap();
    assert!((delta - 1.0).abs() < 1e-9);
    assert!(row.contains(",true,"));
}

#[test]
fn tail_exhaustive_row_carries_exact_probability() {
    let o = polydisc(&["tail", "--n", "2", "--Q", "100", "--nu", "0.25", "--mode", "exhaustive"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# spec={"));
    assert_eq!(lines[1], "n,Q,nu,threshold,mode,hits,positive_hits,total,exact,probability,std_error");
    assert!(lines[2].starts_with("2,100,0.25,1000,exhaustive,"));
    // brute-force count of |b^2 - 4ac| < 1000 over the box
    let mut hits = 0u64;
    for a in -100i64..=100 {
        for b in -100i64..=100 {
            for c in -100i64..=100 {
                hits += u64::from((b * b - 4 * a * c).abs() < 1000);
            }
        }
    }
    assert_eq!(lines[2].split(',').nth(5).unwrap(), hits.to_string());
}

#[test]
fn json_is_one_document_with_csv_fields() {
    let args = ["irr", "--n", "3", "--Q", "4", "--N", "5000", "--seed", "3"];
    let csv = stdout(&polydisc(&args));
    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&polydisc(&json_args))).unwrap();
    assert_eq!(json["command"], "irr");
    assert_eq!(json["spec"]["seed"], 3);
    let header = csv.lines().nth(1).unwrap();
    let values = csv.lines().nth(2).unwrap();
    let row = json["rows"][0].as_object().unwrap();
    assert_eq!(row.keys().cloned().collect::<Vec<_>>().join(","), header);
    for (key, value) in header.split(',').zip(values.split(',')) {
        let j = &row[key];
        let rendered = j.as_str().map(str::to_string).unwrap_or_else(|| j.to_string());
        assert_eq!(rendered, value, "{key}");
    }
}

#[test]
fn usage_and_error_exit_codes() {
    let o = polydisc(&["nonsense"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert!(o.stdout.is_empty());
    assert_eq!(polydisc(&["disc", "--coeffs", ""]).status.code(), Some(1));
    assert_eq!(polydisc(&["disc", "--coeffs", "1,2.5"]).status.code(), Some(1));
    assert_eq!(polydisc(&["tail", "--n", "2", "--Q", "5", "--nu", "1", "--mode", "exhaustive"]).status.code(), Some(1));
    let budget = polydisc(&["--budget", "1000", "tail", "--n", "2", "--Q", "100", "--nu", "0.5", "--mode", "exhaustive"]);
    assert_eq!(budget.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&budget.stderr).contains("budget"));
}

#[test]
fn partial_scan_keeps_completed_rows() {
    let o = polydisc(&["--budget", "2000", "scan", "--n", "2", "--Q", "2,5,20"]);
    assert_eq!(o.status.code(), Some(3));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("2,")).count(), 2);
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# bounded run\nn = 3\nQ = 50\nN = 2000\nseed = 11\n").unwrap();
    let out = dir.path().join("out.csv");
    let cfg_s = cfg.to_str().unwrap();
    let out_s = out.to_str().unwrap();
    let o = polydisc(&["--config", cfg_s, "--out", out_s, "bounded", "--Q", "70"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("\"Q\":70"));
    assert!(text.contains("\"seed\":11"));
    assert_eq!(text.lines().filter(|l| l.starts_with("3,70,montecarlo,2000,")).count(), 3);

    let json_cfg = dir.path().join("run.json");
    std::fs::write(&json_cfg, r#"{"model":"discrete","n":2,"Q":9,"N":"exhaustive","nu_grid":["0.5"],"seed":1}"#).unwrap();
    let o = polydisc(&["--config", json_cfg.to_str().unwrap(), "tail"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("2,9,0.5,9,exhaustive,"));
}

#[test]
fn converge_writes_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("plot.tsv");
    let o = polydisc(&["converge", "--n", "2", "--Q", "2,10", "--NG", "20000", "--plot", plot.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().nth(1).unwrap() == "n,m,Q,mode,N,distance_ks,distance_interval,seed");
    assert!(text.lines().last().unwrap().starts_with("# fitted_constant="));
    let tsv = std::fs::read_to_string(plot).unwrap();
    assert_eq!(tsv.lines().count(), 3);
    assert!(tsv.starts_with("inv_log_q\tdistance\n"));
}

#[test]
fn moments_and_selftest_pass() {
    let m = polydisc(&["moments"]);
    assert!(m.status.success());
    assert!(stdout(&m).contains("# failures=0"));
    let s = polydisc(&["selftest", "--seed", "5"]);
    assert!(s.status.success());
    assert_eq!(stdout(&s).lines().filter(|l| l.ends_with(",pass")).count(), 4);
}

#[test]
fn same_seed_same_bytes_across_threads() {
    let run = |threads: &str| {
        stdout(&polydisc(&["--threads", threads, "--seed", "8", "tail", "--n", "3", "--Q", "20", "--nu", "0.5", "--N", "100000"]))
    };
    assert_eq!(run("1"), run("3"));
    let other = stdout(&polydisc(&["--seed", "9", "tail", "--n", "3", "--Q", "20", "--nu", "0.5", "--N", "100000"]));
    assert_ne!(run("1"), other);
}
