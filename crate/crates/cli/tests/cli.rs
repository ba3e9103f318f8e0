use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ec2part")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn info_reports_model_and_value() {
    let o = run(&["info", "11a1"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("-161051") && s.contains("1/5 (ord2 0)"), "{s}");
    let o = run(&["--json", "info", "37b1", "--an", "5"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["lalg"]["value"], "2/3");
    assert_eq!(v["lattice_type"], 1);
    // a_2 = 0, a_3 = 1 by direct point count
    assert_eq!(v["an"][1], serde_json::json!([2, 0]));
    assert_eq!(v["an"][2], serde_json::json!([3, 1]));
}

#[test]
fn bad_curves_exit_one() {
    let o = run(&["info", "0,0,0,0,0"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("singular"));
    assert_eq!(code(&run(&["info", "99z9"])), 1);
}

#[test]
fn prime_lists() {
    let o = run(&["primes", "11a", "inert-f", "200"]);
    assert_eq!(stdout(&o).trim(), "3, 5, 23, 31, 37, 59, 67, 71, 89, 97, 113, 137, 157, 179, 181, 191");
    let o = run(&["primes", "17a", "3mod4,inert:17", "200"]);
    assert_eq!(stdout(&o).trim(), "3, 7, 11, 23, 31, 71, 79, 107, 131, 139, 163, 167, 199");
    let o = run(&["--csv", "primes", "73a1", "3mod4,inert:73", "50"]);
    assert_eq!(stdout(&o), "q\n7\n11\n31\n43\n47\n");
    assert_eq!(code(&run(&["primes", "73a1", "inert-f", "50"])), 1);
}

#[test]
fn scans() {
    let o = run(&["scan", "11a1", "-t", "T1", "--filter", "inert-f", "--bound", "50", "--tol", "1e-6"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.ends_with("twists 15, hypotheses met 15, conclusions held 15, failed 0, numeric failed 0, errors 0\n"), "{s}");

    let o = run(&[
        "--json", "scan", "37b", "-t", "T1-1", "--filter", "inert-f", "--bound", "200", "--max-r", "1", "--sign", "positive",
    ]);
    assert_eq!(code(&o), 0);
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let (summary, reports) = lines.split_last().unwrap();
    assert!(!reports.is_empty());
    for r in reports {
        assert_eq!(r["lalg"]["ord2"], 1, "{r}");
        assert_eq!(r["verdicts"]["T1-1"]["conclusion_holds"], true);
    }
    assert_eq!(summary["summary"]["twists"], reports.len());

    let o = run(&["scan", "11a1", "--filter", "inert:-1,split:-1", "--bound", "100"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("twists 0,"));
}

#[test]
fn unmet_hypotheses_exit_two() {
    // 7 is not inert in the cubic field of 11a1, so M = -7 is skipped
    let o = run(&["scan", "11a1", "-t", "T1", "--filter", "3mod4", "--bound", "7", "--max-r", "1"]);
    assert_eq!(code(&o), 2, "{}", stdout(&o));
}

#[test]
fn scans_are_deterministic() {
    let args = ["--json", "scan", "19a1", "--filter", "inert-f", "--bound", "60", "--sums"];
    let a = stdout(&run(&args));
    let b = stdout(&run(&[&args[..], &["--threads", "1"]].concat()));
    let c = stdout(&run(&args));
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn neumann_setzer_commands() {
    let o = run(&["ns", "u=-3", "bsd", "q=7"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("M=-7 ord2(lalg)=0 Sel2/tors=1"));
    assert_eq!(code(&run(&["ns", "u=-3", "bsd", "q=3"])), 2);

    let o = run(&["ns", "u=-3", "descent", "M=-7"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("Sel2(A^(M))/tors   1 ") && s.contains("0 mismatches"), "{s}");

    let o = run(&["--json", "ns", "u=-3", "conjecture", "r=1", "bound=300"]);
    assert_eq!(code(&o), 0);
    let rows: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r["hypothesis"] == true && r["conclusion"] == true));

    assert_eq!(code(&run(&["ns", "u=13", "aq", "bound=200"])), 0);
    let o = run(&["ns", "u=5", "denominator"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&run(&["ns", "u=3", "descent", "M=5"])), 1);
}

#[test]
fn grid_csv() {
    let o = run(&["ns", "--grid", "u=-3..5", "M=-20..20"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    let rows: Vec<&str> = s.lines().collect();
    assert!(rows[0].starts_with("u,p,m,root_number"));
    // u = -3 and u = 5 are the valid parameters in range
    assert!(rows.iter().any(|r| r.starts_with("-3,73,-7,")));
    assert!(rows.iter().any(|r| r.starts_with("5,89,")));
    assert!(rows[1..].iter().all(|r| r.split(',').nth(9) == Some("true")));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("ec2part.toml");
    std::fs::write(&cfg, format!("tol = 1e-6\ncache-dir = {:?}\n", dir.path().join("cache"))).unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "lalg", "11a1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("numeric="));
    // --terms too small for the requested tolerance
    let o = run(&["--config", cfg.to_str().unwrap(), "--terms", "3", "lalg", "11a1"]);
    assert_eq!(code(&o), 1);
    std::fs::write(&cfg, "colour = 1\n").unwrap();
    assert_eq!(code(&run(&["--config", cfg.to_str().unwrap(), "lalg", "11a1"])), 1);
}
