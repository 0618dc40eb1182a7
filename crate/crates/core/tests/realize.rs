use std::time::Duration;

use escolor::driver::catalog::lpx_13_ordinates;
use escolor::driver::{color_fixed_geometry, Engine, FoundColoring};
use escolor::encoder::AbscissaGrid;
use escolor::geometry::{random_canonical, verify, Point, PointSet};
use escolor::realize::{
    lp_feasible, scale_to_integers, subreduce, Budget, RationalSolution, SearchMode, SubreduceOutcome,
};
use escolor::signotope::from_points;
use escolor::spec::{ColoringRef, ProblemSpec};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn spec(params: &str) -> ProblemSpec {
    let args: Vec<&str> = params.split_whitespace().collect();
    ProblemSpec::parse_params(&args).unwrap().0
}

proptest! {
    #[test]
    fn random_sets_are_feasible_on_their_own_abscissae(seed in any::<u64>(), n in 3usize..=10) {
        let ps = random_canonical(n, 60, &mut ChaCha8Rng::seed_from_u64(seed));
        let s = from_points(&ps).unwrap();
        let grid = AbscissaGrid::from_xs(ps.xs()).unwrap();
        let sol = lp_feasible(&s, &grid).unwrap();
        prop_assert!(sol.is_some());
        let ys = scale_to_integers(&sol.unwrap());
        let back = PointSet::new(grid.xs.iter().zip(ys).map(|(x, y)| Point::new(x.clone(), y)).collect());
        prop_assert_eq!(from_points(&back).unwrap(), s);
    }
}

#[test]
fn published_rational_solution_scales_to_a_valid_set() {
    let spec = spec("n=13 nc1=0 tr2=0");
    let ys = scale_to_integers(&RationalSolution { ys: lpx_13_ordinates() });
    let ps = PointSet::new(ys.into_iter().enumerate().map(|(i, y)| Point::new(i as i64, y)).collect());
    // The published log omits the colors; recover some that fit.
    let found = color_fixed_geometry(&ps, &spec, &Engine::default()).unwrap();
    let Some(FoundColoring::Points(col)) = found else { panic!("no coloring fits the published ordinates") };
    assert!(verify(&ps, ColoringRef::Points(&col), &spec).valid);
}

#[test]
fn subreduce_finds_a_certificate_on_the_unit_grid() {
    let spec = spec("n=13 nc1=0 tr2=0");
    let grid = AbscissaGrid::new(13, 1).unwrap();
    let budget = Budget { max_time: Some(Duration::from_secs(600)), ..Budget::default() };
    let (out, _) = subreduce(&spec, &grid, SearchMode::Integrated, &budget).unwrap();
    let SubreduceOutcome::Realized(cert) = out else { panic!("no realization") };
    assert_eq!(cert.points.len(), 13);
    assert!(cert.report.valid);
    assert_eq!(from_points(&cert.points).unwrap(), cert.signotope);
    let col = cert.points.coloring().unwrap();
    assert!(verify(&cert.points, ColoringRef::Points(&col), &spec).valid);
}

#[test]
fn unsatisfiable_formula_is_exhausted_immediately() {
    let spec = spec("n=3 tr1=0");
    let grid = AbscissaGrid::new(3, 1).unwrap();
    for mode in [SearchMode::Integrated, SearchMode::BlockFull, SearchMode::BlockCore] {
        let (out, stats) = subreduce(&spec, &grid, mode, &Budget::default()).unwrap();
        assert!(matches!(out, SubreduceOutcome::ExhaustedUnrealizable));
        assert!(stats.proposals <= 1);
    }
}

#[test]
fn search_modes_agree_and_never_repropose() {
    for (params, base) in [("n=10 nc1=1 nc2=1", 1), ("n=8 nc1=1 nc2=1", 2), ("n=5 tr1=1 tr2=1", 4)] {
        let spec = spec(params);
        let grid = AbscissaGrid::new(spec.n, base).unwrap();
        let mut kinds = Vec::new();
        for mode in [SearchMode::Integrated, SearchMode::BlockFull, SearchMode::BlockCore] {
            let (out, stats) = subreduce(&spec, &grid, mode, &Budget::default()).unwrap();
            assert_eq!(stats.reproposals, 0, "{params} {mode:?}");
            if let SubreduceOutcome::Realized(c) = &out {
                assert!(c.report.valid);
                assert_eq!(from_points(&c.points).unwrap(), c.signotope);
            }
            kinds.push(matches!(out, SubreduceOutcome::Realized(_)));
        }
        assert!(kinds.iter().all(|&k| k == kinds[0]), "{params}: {kinds:?}");
    }
}

#[test]
fn exhausted_budget_is_an_error_not_a_verdict() {
    let spec = spec("n=5 tr1=1 tr2=1");
    let grid = AbscissaGrid::new(5, 1).unwrap();
    let budget = Budget { max_proposals: Some(0), ..Budget::default() };
    let err = subreduce(&spec, &grid, SearchMode::BlockFull, &budget).unwrap_err();
    assert!(matches!(err, escolor::Error::ResourceLimit(_)));
}
