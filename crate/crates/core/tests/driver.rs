use std::process::{Command, Stdio};

use escolor::driver::catalog::fixture;
use escolor::driver::{decide, find_threshold, verify_points, Engine, ThresholdOptions, Verdict};
use escolor::encoder::{emit_smt2, AbscissaGrid};
use escolor::geometry::{verify, Violation};
use escolor::io::PointFile;
use escolor::satcore::Status;
use escolor::spec::{ColoringRef, ProblemSpec};
use escolor::Error;

fn spec(params: &str) -> ProblemSpec {
    let args: Vec<&str> = params.split_whitespace().collect();
    ProblemSpec::parse_params(&args).unwrap().0
}

fn z3() -> Option<Engine> {
    let ok = Command::new("z3").arg("-version").stdout(Stdio::null()).status().is_ok_and(|s| s.success());
    ok.then(|| Engine::External { command: vec!["z3".into(), "-dimacs".into(), "-in".into()], timeout: None })
}

#[test]
fn exact_threshold_carries_a_certificate() {
    let r = find_threshold(&spec("n=3 tr1=0 tr2=0"), 3..=12, &ThresholdOptions::default()).unwrap();
    assert_eq!(r.tilde_value, 9);
    assert_eq!(r.verdict, Verdict::Exact);
    let cert = r.realization.unwrap();
    assert_eq!(cert.points.len(), 8);
    // Re-check from the raw coordinates alone.
    let col = cert.points.coloring().unwrap();
    assert!(verify(&cert.points, ColoringRef::Points(&col), &spec("n=8 tr1=0 tr2=0")).valid);
    assert!(r.scan.iter().all(|&(n, st, _)| (st == Status::Sat) == (n < 9)));
}

#[test]
fn threshold_without_grids_is_an_interval() {
    let opts = ThresholdOptions { grids: vec![], ..ThresholdOptions::default() };
    let r = find_threshold(&spec("n=3 tr1=1 tr2=1"), 3..=10, &opts).unwrap();
    assert_eq!(r.tilde_value, 6);
    assert_eq!(r.verdict, Verdict::Interval { lower: None, upper: 6 });
}

#[test]
fn boundary_outside_range_is_an_error() {
    let opts = ThresholdOptions { grids: vec![], ..ThresholdOptions::default() };
    let t = spec("n=3 tr1=0 tr2=0");
    assert!(matches!(find_threshold(&t, 3..=7, &opts), Err(Error::BoundaryNotInRange(3, 7))));
    assert!(matches!(find_threshold(&t, 10..=12, &opts), Err(Error::BoundaryNotInRange(10, 12))));
}

#[test]
fn engines_agree_on_small_thresholds() {
    let Some(ext) = z3() else {
        eprintln!("z3 not found; skipping");
        return;
    };
    for (params, n) in [("tr1=1 tr2=1", 6), ("nc1=2 nc2=2", 9), ("etr1=1 etr2=1", 8), ("nc1=3 nc2=3", 7)] {
        for m in [n - 1, n] {
            let s = spec(&format!("n={m} {params}"));
            let a = decide(&s, &Engine::default()).unwrap();
            let b = decide(&s, &ext).unwrap();
            assert_eq!(a.status, b.status, "{params} n={m}");
        }
    }
}

#[test]
fn smt2_script_agrees_with_realization() {
    let Some(_) = z3() else {
        eprintln!("z3 not found; skipping");
        return;
    };
    let run = |s: &ProblemSpec, base: u32| {
        let text = emit_smt2(s, &AbscissaGrid::new(s.n, base).unwrap()).unwrap();
        let mut child =
            Command::new("z3").args(["-smt2", "-in"]).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
        use std::io::Write;
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
        let out = child.wait_with_output().unwrap();
        String::from_utf8(out.stdout).unwrap().lines().next().unwrap_or_default().to_string()
    };
    assert_eq!(run(&spec("n=6 tr1=0 tr2=0"), 1), "sat");
    assert_eq!(run(&spec("n=9 tr1=0 tr2=0"), 1), "unsat");
    assert_eq!(run(&spec("n=8 pent1=inf colors=1"), 2), "sat");
    assert_eq!(run(&spec("n=9 pent1=inf colors=1"), 1), "unsat");
}

#[test]
fn published_witness_with_collinear_points_is_rejected() {
    let f = fixture("hex-unique0-17").unwrap();
    let (report, _) = f.check().unwrap();
    assert!(!report.valid);
    assert!(report
        .violations
        .iter()
        .any(|v| matches!(v, Violation::GeneralPosition { triple } if *triple == [6, 7, 9])));
}

#[test]
fn published_sets_verify() {
    for name in ["hex-only-12-18", "rc-44-22", "rec-33-20-sym5", "cv40-tr30-25-sym3"] {
        let f = fixture(name).unwrap();
        let (report, census_ok) = f.check().unwrap();
        assert!(report.valid && census_ok, "{name}: {:?}", report.violations.first());
    }
    let c = fixture("hex-only-12-18").unwrap().check().unwrap().0.census.unwrap();
    assert!(c.keys().all(|k| [1, 2].contains(k)));
}

#[test]
fn edge_spec_needs_edges_in_the_file() {
    let pts = fixture("rc-34-10").unwrap().load().unwrap();
    let bare = PointFile::new(pts.points.clone());
    assert!(matches!(verify_points(&bare, &spec("n=10 etr1=inf ecv2=inf")), Err(Error::SpecMismatch(_))));
    assert!(verify_points(&pts, &spec("n=10 etr1=inf ecv2=inf")).unwrap().valid);
}

#[test]
fn empty_point_file_is_a_parse_error() {
    assert!(matches!(PointFile::parse(""), Err(Error::Parse(_))));
}
