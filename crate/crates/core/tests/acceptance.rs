//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the report is always printed. The
//! process exits non-zero when a criterion fails that is not listed in
//! `KNOWN_FAILURES`. `ESCOLOR_RC34_SECS` bounds the one threshold that the
//! embedded solver cannot currently close (default 900 s).

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use escolor::driver::catalog::{fixture, FIXTURES};
use escolor::driver::{decide, Engine};
use escolor::encoder::{decompose, AbscissaGrid, Counted, RunRule};
use escolor::geometry::{find_forbidden, random_canonical, verify, Point, PointSet, Violation};
use escolor::minimize::{brute_force_minimum, compare_minimizers, grid_census, minimize_count};
use escolor::realize::{lp_feasible, scale_to_integers, subreduce, Budget, SearchMode, SubreduceOutcome};
use escolor::satcore::{SolverConfig, Status};
use escolor::signotope::{axioms_ok, find_forbidden_abstract, from_points};
use escolor::spec::{Coloring, ColoringRef, Constraint, EdgeColoring, Kind, ProblemSpec};
use escolor::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria expected to fail; each is explained in the README.
const KNOWN_FAILURES: &[&str] = &["1", "8a"];

struct Report {
    unexpected: Vec<String>,
}

impl Report {
    fn line(&mut self, id: &str, ok: bool, wall: Duration, detail: impl AsRef<str>) {
        let tag = match (ok, KNOWN_FAILURES.contains(&id)) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!("[{tag}] criterion {id} ({:.1}s): {}", wall.as_secs_f64(), detail.as_ref());
        if !ok && !KNOWN_FAILURES.contains(&id) {
            self.unexpected.push(id.to_string());
        }
    }
}

fn spec(params: &str) -> ProblemSpec {
    let args: Vec<&str> = params.split_whitespace().collect();
    let (spec, rest) = ProblemSpec::parse_params(&args).expect("valid parameters");
    assert!(rest.is_empty(), "unknown keys in {params}");
    spec
}

const THRESHOLDS: &[(&str, &str, usize)] = &[
    ("h(3,1;3,1)", "tr1=1 tr2=1", 6),
    ("h_nc(4,2;4,2)", "nc1=2 nc2=2", 9),
    ("h_nc(4,1;4,1)", "nc1=1 nc2=1", 11),
    ("h_nc(4,3;4,3)", "nc1=3 nc2=3", 7),
    ("h(3,1;3,1;3,1)", "colors=3 tr1=1 tr2=1 tr3=1", 13),
    ("h_nc(4,0;3,0)", "nc1=0 tr2=0", 14),
    ("h_isl(4,1;4,1)", "is1=1 is2=1", 13),
    ("R_EC(3,2;3,2)", "etr1=2 etr2=2", 6),
    ("R_EC(3,1;3,1)", "etr1=1 etr2=1", 8),
    ("R_C(3,4)", "etr1=inf ecv2=inf", 11),
];

fn criterion_1(r: &mut Report) {
    let start = Instant::now();
    let rc_budget = std::env::var("ESCOLOR_RC34_SECS").ok().and_then(|s| s.parse().ok()).unwrap_or(900);
    let mut misses = Vec::new();
    let mut parts = Vec::new();
    for &(name, params, value) in THRESHOLDS {
        let engine = Engine::Embedded(SolverConfig {
            max_time: Some(Duration::from_secs(if name == "R_C(3,4)" { rc_budget } else { 1800 })),
            ..SolverConfig::default()
        });
        let run = |n: usize| decide(&spec(&format!("n={n} {params}")), &engine).map(|d| d.status);
        let t = Instant::now();
        let below = run(value - 1);
        let at = run(value);
        let ok = matches!((&below, &at), (Ok(Status::Sat), Ok(Status::Unsat)));
        let show = |x: &Result<Status, Error>| match x {
            Ok(s) => format!("{s:?}"),
            Err(Error::ResourceLimit(_)) => "timeout".to_string(),
            Err(e) => format!("error {e}"),
        };
        parts.push(format!("{name}={value} {:.1}s", t.elapsed().as_secs_f64()));
        if !ok {
            misses.push(format!("{name}: n={} {}, n={value} {}", value - 1, show(&below), show(&at)));
        }
    }
    let total_ok = start.elapsed() <= Duration::from_secs(1800);
    let detail = if misses.is_empty() {
        parts.join(", ")
    } else {
        format!("{}; missed: {}", parts.join(", "), misses.join("; "))
    };
    r.line("1", misses.is_empty() && total_ok, start.elapsed(), detail);
}

fn criterion_2(r: &mut Report) {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut check = |kind: Counted, n: usize, want: usize| {
        let got = minimize_count(n, kind).unwrap();
        if got != want {
            bad.push(format!("{}({n})={got}, want {want}", kind.tag()));
        }
        if n <= 7 {
            let brute = brute_force_minimum(n, kind).unwrap();
            if brute != got {
                bad.push(format!("{}({n}) enumeration gives {brute}", kind.tag()));
            }
        }
    };
    for (n, want) in (3..=8).zip([1, 3, 7, 13, 21, 31]) {
        check(Counted::EmptyTriangle, n, want);
    }
    for (n, want) in (3..=8).zip([0, 0, 1, 3, 6, 10]) {
        check(Counted::EmptyConvex4, n, want);
    }
    check(Counted::EmptyConvex5, 9, 0);
    check(Counted::EmptyConvex5, 10, 1);
    let ok = bad.is_empty() && start.elapsed() <= Duration::from_secs(1200);
    r.line(
        "2",
        ok,
        start.elapsed(),
        if bad.is_empty() { "X3, X4 for n=3..8, X5(9), X5(10) match".into() } else { bad.join("; ") },
    );
}

fn criterion_3(r: &mut Report) {
    let start = Instant::now();
    let mut bad = Vec::new();
    for n in 5..=8 {
        let c = compare_minimizers(n, Counted::EmptyTriangle, Counted::EmptyConvex4, None).unwrap();
        if (c.a_minus_b, c.b_minus_a) != (0, 0) || c.truncated {
            bad.push(format!("S3/S4 at n={n}: {c:?}"));
        }
    }
    let c9 = compare_minimizers(9, Counted::EmptyConvex4, Counted::EmptyConvex5, None).unwrap();
    if (c9.a_minus_b, c9.b_minus_a) != (0, 0) || c9.truncated {
        bad.push(format!("S4/S5 at n=9: {c9:?}"));
    }
    let c10 = compare_minimizers(10, Counted::EmptyConvex5, Counted::EmptyConvex4, Some(1)).unwrap();
    if c10.a_minus_b == 0 {
        bad.push("S5 minus S4 empty at n=10".into());
    }
    let ok = bad.is_empty() && start.elapsed() <= Duration::from_secs(3600);
    r.line(
        "3",
        ok,
        start.elapsed(),
        if bad.is_empty() { "S3=S4 for n=5..8, S4=S5 at 9, S5\\S4 nonempty at 10".into() } else { bad.join("; ") },
    );
}

fn criterion_4(r: &mut Report) {
    let start = Instant::now();
    let mut bad = Vec::new();
    let census = |n: usize, base: Option<u32>| {
        let grid = base.map(|b| AbscissaGrid::new(n, b).unwrap());
        grid_census(n, Counted::EmptyConvex4, grid.as_ref()).unwrap()
    };
    for (n, want) in [(4, 4), (5, 22)] {
        for base in [1, 2, 4] {
            let (ok, _) = census(n, Some(base));
            if ok != want {
                bad.push(format!("n={n} base {base}: {ok}, want {want}"));
            }
        }
    }
    let (_, total) = census(6, None);
    let (b1, _) = census(6, Some(1));
    let (b4, _) = census(6, Some(4));
    if (total, b1, b4) != (224, 212, 220) {
        bad.push(format!("n=6: total {total}, base 1 {b1}, base 4 {b4}; want 224, 212, 220"));
    }
    let ok = bad.is_empty() && start.elapsed() <= Duration::from_secs(3600);
    r.line(
        "4",
        ok,
        start.elapsed(),
        if bad.is_empty() { "n=4: 4, n=5: 22 on bases 1,2,4; n=6: 224 / 212 / 220".into() } else { bad.join("; ") },
    );
}

const PUBLISHED: &[&str] = &[
    "hex-avoid-01-17",
    "nc-40-40-25",
    "hex-only-12-18",
    "hex-only-123-19",
    "hex-only-1234-20",
    "hexsub-3-19",
    "hexsub-4-20",
    "rec-33-20-sym5",
    "rc-44-22",
    "rc-35-24",
    "rc-34-10",
];

fn criterion_5(r: &mut Report) {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut slowest = (Duration::ZERO, "");
    for &name in PUBLISHED {
        let f = fixture(name).expect("bundled fixture");
        let t = Instant::now();
        let (report, census_ok) = f.check().unwrap();
        let wall = t.elapsed();
        if wall > slowest.0 {
            slowest = (wall, name);
        }
        if !report.valid || !census_ok || wall > Duration::from_secs(10) {
            bad.push(format!("{name}: valid={} census_ok={census_ok} {:.1}s", report.valid, wall.as_secs_f64()));
        }
    }
    let detail = if bad.is_empty() {
        format!("{} sets valid, slowest {} at {:.2}s", PUBLISHED.len(), slowest.1, slowest.0.as_secs_f64())
    } else {
        bad.join("; ")
    };
    r.line("5", bad.is_empty(), start.elapsed(), detail);
}

fn criterion_6(r: &mut Report) {
    let start = Instant::now();
    let mut bad = Vec::new();
    let spec = spec("n=13 nc1=0 tr2=0");
    let grid = AbscissaGrid::new(13, 1).unwrap();
    let budget = Budget { max_time: Some(Duration::from_secs(600)), ..Budget::default() };
    match subreduce(&spec, &grid, SearchMode::Integrated, &budget) {
        Ok((SubreduceOutcome::Realized(cert), _)) => {
            let col = cert.points.coloring().unwrap_or_else(|| Coloring::monochrome(13));
            if !verify(&cert.points, ColoringRef::Points(&col), &spec).valid {
                bad.push("certificate fails verification".into());
            }
        }
        Ok((SubreduceOutcome::ExhaustedUnrealizable, _)) => bad.push("no realization on base 1".into()),
        Err(e) => bad.push(format!("subreduce: {e}")),
    }
    let sub = start.elapsed();
    if sub > Duration::from_secs(600) {
        bad.push(format!("subreduce took {:.0}s", sub.as_secs_f64()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut failures = 0;
    for _ in 0..10_000 {
        let n = rng.gen_range(3..=10);
        let ps = random_canonical(n, 60, &mut rng);
        let s = from_points(&ps).unwrap();
        let grid = AbscissaGrid::from_xs(ps.xs()).unwrap();
        let back = lp_feasible(&s, &grid).unwrap().map(|sol| {
            let pts = grid.xs.iter().zip(scale_to_integers(&sol)).map(|(x, y)| Point::new(x.clone(), y)).collect();
            from_points(&PointSet::new(pts)).unwrap()
        });
        if back.as_ref() != Some(&s) {
            failures += 1;
        }
    }
    if failures > 0 {
        bad.push(format!("{failures} of 10000 round trips failed"));
    }
    let detail = if bad.is_empty() {
        format!("subreduce certificate verified in {:.1}s; 10000 round trips", sub.as_secs_f64())
    } else {
        bad.join("; ")
    };
    r.line("6", bad.is_empty(), start.elapsed(), detail);
}

fn point_kinds() -> Vec<Kind> {
    let mut kinds = vec![Kind::Pair];
    for limit in [Some(0), Some(1), Some(2), None] {
        kinds.push(Kind::Triangle { limit });
        for size in 4..=6 {
            kinds.push(Kind::Convex { size, limit });
        }
        kinds.push(Kind::NonConvex4 { limit });
        kinds.push(Kind::Island4 { limit });
    }
    kinds.push(Kind::HexEx { interior: [0, 1].into_iter().collect() });
    kinds.push(Kind::HexEx { interior: [2, 3].into_iter().collect() });
    kinds.push(Kind::HexSub { q: 1 });
    kinds.push(Kind::HexSub { q: 3 });
    kinds
}

fn edge_kinds() -> Vec<Kind> {
    let mut kinds = Vec::new();
    for limit in [Some(0), Some(1), None] {
        kinds.push(Kind::RamseyTriangle { limit });
        kinds.push(Kind::RamseyConvex { size: 4, limit });
        kinds.push(Kind::RamseyConvex { size: 5, limit });
    }
    kinds
}

fn criterion_7(r: &mut Report) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (pk, ek) = (point_kinds(), edge_kinds());
    let mut bad = Vec::new();
    let mut checks = 0u64;
    for n in 5..=9 {
        for _ in 0..1000 {
            let ps = random_canonical(n, 50, &mut rng);
            let s = from_points(&ps).unwrap();
            if !axioms_ok(&s) {
                bad.push(format!("axioms fail on {ps:?}"));
            }
            let col = Coloring((0..n).map(|_| rng.gen_range(0..2)).collect());
            let mut ec = EdgeColoring::new(n, 0);
            for a in 0..n {
                for b in a + 1..n {
                    ec.set(a, b, rng.gen_range(0..2));
                }
            }
            let cases =
                pk.iter()
                    .map(|k| (ProblemSpec::points(n, vec![Constraint::new(1, k.clone())]), ColoringRef::Points(&col)))
                    .chain(ek.iter().map(|k| {
                        (ProblemSpec::edges(n, vec![Constraint::new(1, k.clone())]), ColoringRef::Edges(&ec))
                    }));
            for (spec, coloring) in cases {
                let g: BTreeSet<_> = find_forbidden(&ps, coloring, &spec).unwrap().into_iter().collect();
                let a: BTreeSet<_> = find_forbidden_abstract(&s, coloring, &spec).unwrap().into_iter().collect();
                checks += 1;
                if g != a && bad.len() < 3 {
                    bad.push(format!("{} on n={n}", spec.constraints[0].kind));
                }
            }
        }
    }
    let detail = if bad.is_empty() {
        format!("{checks} geometric/abstract comparisons over 5000 sets agree")
    } else {
        format!("mismatches: {}", bad.join("; "))
    };
    r.line("7", bad.is_empty(), start.elapsed(), detail);
}

fn criterion_8(r: &mut Report) {
    let start = Instant::now();
    let spec = spec("n=26 nc1=0 nc2=0");
    let subs = decompose(&spec, 13, &RunRule::defaults(&spec)).unwrap();
    r.line(
        "8a",
        subs.len() == 1706,
        start.elapsed(),
        format!("h_nc(4,0;4,0) prefix 13: {} subproblems, want 1706", subs.len()),
    );

    // Remaining published witnesses not already covered by criterion 5.
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for f in FIXTURES.iter().filter(|f| !PUBLISHED.contains(&f.name)) {
        let (report, census_ok) = f.check().unwrap();
        if f.name == "hex-unique0-17" {
            // The printed coordinates contain three collinear points.
            let degenerate = report.violations.iter().any(|v| matches!(v, Violation::GeneralPosition { .. }));
            ok &= degenerate;
            notes.push(format!("{} rejected as degenerate (as published)", f.name));
        } else {
            ok &= report.valid && census_ok;
            notes.push(format!("{} valid={}", f.name, report.valid && census_ok));
        }
    }
    r.line("8b", ok, start.elapsed(), notes.join(", "));
}

fn main() -> ExitCode {
    let mut r = Report { unexpected: Vec::new() };
    criterion_1(&mut r);
    criterion_2(&mut r);
    criterion_3(&mut r);
    criterion_4(&mut r);
    criterion_5(&mut r);
    criterion_6(&mut r);
    criterion_7(&mut r);
    criterion_8(&mut r);
    if r.unexpected.is_empty() {
        println!("acceptance: no unexpected failures");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected failures in {}", r.unexpected.join(", "));
        ExitCode::FAILURE
    }
}
