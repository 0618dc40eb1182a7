//! The CNF encoding accepts exactly the (signotope, coloring) pairs that the
//! abstract structure finder accepts.

use escolor::cnf::Lit;
use escolor::encoder::{build_cnf, build_cnf_with, EncoderOptions, Encoding};
use escolor::satcore::{Solver, SolverConfig, Status};
use escolor::signotope::{enumerate, find_forbidden_abstract, triples_lex, Signotope};
use escolor::spec::{Coloring, ColoringRef, Constraint, EdgeColoring, HexagonRelaxation, Kind, ProblemSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn orient_lits(enc: &Encoding, s: &Signotope) -> Vec<Lit> {
    triples_lex(s.n()).into_iter().map(|(a, b, c)| Lit::new(enc.orient_var(a, b, c), s.sign(a, b, c) > 0)).collect()
}

fn edge_lits(enc: &Encoding, ec: &EdgeColoring) -> Vec<Lit> {
    let f = &enc.formula;
    let mut out = Vec::new();
    for a in 0..ec.n() {
        for b in a + 1..ec.n() {
            let sem = escolor::cnf::SemVar::EdgeColor { color: ec.get(a, b), a, b };
            out.push(Lit::neg(f.lookup(&sem).unwrap()));
        }
    }
    out
}

/// Check every SB signotope on n points against `samples` colorings each
/// (all colorings when `samples` is None).
fn check_points(spec: &ProblemSpec, samples: Option<usize>, opts: &EncoderOptions, rng: &mut ChaCha8Rng) -> [usize; 2] {
    let mut seen = [0, 0];
    let n = spec.n;
    let enc = build_cnf_with(spec, opts).unwrap();
    let mut solver = Solver::from_formula(&enc.formula, SolverConfig::default());
    let total = spec.colors.pow(n as u32);
    for s in enumerate(n, true, |_| true).unwrap() {
        let colorings: Vec<Coloring> = match samples {
            None => (0..total)
                .map(|mut code| {
                    Coloring(
                        (0..n)
                            .map(|_| {
                                let c = code % spec.colors;
                                code /= spec.colors;
                                c
                            })
                            .collect(),
                    )
                })
                .collect(),
            Some(k) => (0..k).map(|_| Coloring((0..n).map(|_| rng.gen_range(0..spec.colors)).collect())).collect(),
        };
        let base = orient_lits(&enc, &s);
        for col in colorings {
            let mut assume = base.clone();
            assume.extend(enc.fix_point_colors(&col.0));
            let clean = find_forbidden_abstract(&s, ColoringRef::Points(&col), spec).unwrap().is_empty();
            let sat = solver.solve(&assume).unwrap() == Status::Sat;
            assert_eq!(sat, clean, "spec {:?}\n{s}coloring {:?}", spec.constraints, col.0);
            seen[sat as usize] += 1;
        }
    }
    seen
}

fn kinds() -> Vec<Kind> {
    let mut out = vec![Kind::Pair];
    for limit in [Some(0), Some(1), Some(2), None] {
        out.push(Kind::Triangle { limit });
        out.push(Kind::Convex { size: 4, limit });
        out.push(Kind::Convex { size: 5, limit });
        out.push(Kind::NonConvex4 { limit });
        out.push(Kind::Island4 { limit });
    }
    out
}

#[test]
fn point_kinds_exhaustive_up_to_six() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut seen = [0usize; 2];
    for kind in kinds() {
        for n in 4..=6 {
            let mono = ProblemSpec::points(n, vec![Constraint::new(0, kind.clone())]);
            let a = check_points(&mono, None, &EncoderOptions::default(), &mut rng);
            let two = ProblemSpec::points(
                n,
                vec![Constraint::new(0, kind.clone()), Constraint::new(1, Kind::Triangle { limit: Some(1) })],
            );
            let b = check_points(&two, None, &EncoderOptions::default(), &mut rng);
            for i in 0..2 {
                seen[i] += a[i] + b[i];
            }
        }
    }
    assert!(seen[0] > 1000 && seen[1] > 1000, "{seen:?}");
}

#[test]
fn counter_fallback_matches_subset_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let opts = EncoderOptions { literal_budget: 0, ..EncoderOptions::default() };
    for kind in kinds() {
        let spec = ProblemSpec::points(6, vec![Constraint::new(0, kind.clone()), Constraint::new(1, kind.clone())]);
        let enc = build_cnf_with(&spec, &opts).unwrap();
        let limited = !matches!(
            kind,
            Kind::Pair
                | Kind::Triangle { limit: None }
                | Kind::Convex { limit: None, .. }
                | Kind::NonConvex4 { limit: None }
                | Kind::Island4 { limit: None }
        );
        if limited {
            assert!(enc.used_counters, "{kind}");
        }
        let seen = check_points(&spec, Some(8), &opts, &mut rng);
        assert!(seen[0] + seen[1] > 0);
    }
}

#[test]
fn strict_budget_reports_overflow() {
    let spec = ProblemSpec::points(8, vec![Constraint::new(0, Kind::Triangle { limit: Some(1) })]);
    let opts = EncoderOptions { literal_budget: 10, strict_budget: true, ..EncoderOptions::default() };
    assert!(matches!(build_cnf_with(&spec, &opts), Err(escolor::Error::SizeOverflow(_))));
}

#[test]
fn hexagon_kinds_sampled_at_seven() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut hex = vec![
        Kind::HexEx { interior: [0].into_iter().collect() },
        Kind::HexEx { interior: [0, 1].into_iter().collect() },
        Kind::HexSub { q: 1 },
    ];
    for limit in [Some(0), Some(1), None] {
        hex.push(Kind::Convex { size: 6, limit });
    }
    for kind in hex {
        for relax in [HexagonRelaxation::Exact, HexagonRelaxation::BaseTriangle] {
            let spec = ProblemSpec::points(7, vec![Constraint::new(0, kind.clone())]).with_relaxation(relax);
            let enc = build_cnf(&spec).unwrap();
            let mut solver = Solver::from_formula(&enc.formula, SolverConfig::default());
            for s in enumerate(7, true, |_| true).unwrap().filter(|_| rng.gen_bool(0.15)) {
                let col = Coloring::monochrome(7);
                let clean = find_forbidden_abstract(&s, ColoringRef::Points(&col), &spec).unwrap().is_empty();
                let sat = solver.solve(&orient_lits(&enc, &s)).unwrap() == Status::Sat;
                assert_eq!(sat, clean, "{kind} {relax:?}\n{s}");
            }
        }
    }
}

#[test]
fn edge_kinds_exhaustive_at_five() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let kinds = [
        Kind::RamseyTriangle { limit: Some(0) },
        Kind::RamseyTriangle { limit: Some(1) },
        Kind::RamseyTriangle { limit: None },
        Kind::RamseyConvex { size: 4, limit: None },
        Kind::RamseyConvex { size: 4, limit: Some(0) },
    ];
    for kind in kinds {
        for n in [5, 6] {
            let spec = ProblemSpec::edges(n, vec![Constraint::new(0, kind.clone()), Constraint::new(1, kind.clone())]);
            let enc = build_cnf(&spec).unwrap();
            let mut solver = Solver::from_formula(&enc.formula, SolverConfig::default());
            for s in enumerate(n, true, |_| true).unwrap() {
                for _ in 0..6 {
                    let mut ec = EdgeColoring::new(n, 0);
                    for a in 0..n {
                        for b in a + 1..n {
                            ec.set(a, b, rng.gen_range(0..2));
                        }
                    }
                    let mut assume = orient_lits(&enc, &s);
                    assume.extend(edge_lits(&enc, &ec));
                    let clean = find_forbidden_abstract(&s, ColoringRef::Edges(&ec), &spec).unwrap().is_empty();
                    let sat = solver.solve(&assume).unwrap() == Status::Sat;
                    assert_eq!(sat, clean, "{kind}\n{s}");
                }
            }
        }
    }
}
