//! Minimal numbers of empty structures over all signotopes, the sets of
//! signotopes attaining them, and how many of those are realizable on a grid.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::encoder::{cardinality_encoding, AbscissaGrid, Cond, CountDirection, Counted};
use crate::error::{Error, Result};
use crate::geometry::random_canonical;
use crate::realize::lp_feasible;
use crate::satcore::{solve_all, Solver, SolverConfig, Status};
use crate::signotope::{enumerate, from_points};

/// Upper bound from a few random point sets.
fn random_upper_bound(n: usize, kind: Counted) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    let mut best = usize::MAX;
    for _ in 0..8 {
        let ps = random_canonical(n, 4 * n as i64, &mut rng);
        best = best.min(kind.count(&from_points(&ps)?));
    }
    Ok(best)
}

fn lit_of(c: Cond) -> Option<crate::cnf::Lit> {
    match c {
        Cond::Lit(l) => Some(l),
        _ => None,
    }
}

/// Minimum over all signotopes on `n` elements of the number of empty
/// structures of `kind` (cardinality encoding plus binary search).
pub fn minimize_count(n: usize, kind: Counted) -> Result<usize> {
    if n < kind.size() {
        return Ok(0);
    }
    let ub = random_upper_bound(n, kind)?;
    // Relabelings preserve the count, so symmetry breaking is harmless here.
    let (enc, counts) = cardinality_encoding(n, true, &[(kind, ub + 1)])?;
    let mut solver = Solver::from_formula(&enc.formula, SolverConfig::default());
    let (mut lo, mut hi) = (0, ub);
    while lo < hi {
        let mid = (lo + hi) / 2;
        let assumptions: Vec<_> = lit_of(counts[0].bound(mid, CountDirection::AtMost)?).into_iter().collect();
        match solver.solve(&assumptions)? {
            Status::Sat => {
                let s = enc.signotope(solver.model());
                hi = kind.count(&s);
                if hi > mid {
                    return Err(Error::Internal(format!("counter admits {hi} > {mid} {}", kind.tag())));
                }
            }
            Status::Unsat => lo = mid + 1,
        }
    }
    Ok(lo)
}

/// Exhaustive minimum, for cross-checks at small n.
pub fn brute_force_minimum(n: usize, kind: Counted) -> Result<usize> {
    Ok(enumerate(n, false, |_| true)?.map(|s| kind.count(&s)).min().unwrap_or(0))
}

/// Numbers of signotopes in the difference of two minimizer sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimizerComparison {
    pub a_minus_b: u64,
    pub b_minus_a: u64,
    /// True when either count stopped at the limit.
    pub truncated: bool,
}

/// Count signotopes minimizing `a` but not `b` and vice versa. Counts are
/// taken under symmetry breaking, so they count normalized representatives;
/// emptiness of either difference is unaffected. `limit` caps each count.
pub fn compare_minimizers(n: usize, a: Counted, b: Counted, limit: Option<u64>) -> Result<MinimizerComparison> {
    let (xa, xb) = (minimize_count(n, a)?, minimize_count(n, b)?);
    let mut out = MinimizerComparison { a_minus_b: 0, b_minus_a: 0, truncated: false };
    let bounds = [xa, xb];
    let (enc, counts) = cardinality_encoding(n, true, &[(a, xa + 1), (b, xb + 1)])?;
    for (first, second) in [(0, 1), (1, 0)] {
        let mut f = enc.formula.clone();
        for (i, dir) in [(first, CountDirection::AtMost), (second, CountDirection::MoreThan)] {
            match counts[i].bound(bounds[i], dir)? {
                Cond::True => {}
                Cond::False => f.add_clause(vec![]),
                Cond::Lit(l) => f.add_clause(vec![l]),
            }
        }
        let mut seen = 0u64;
        let total = solve_all(&f, &enc.orient_vars(), SolverConfig::default(), |_| {
            seen += 1;
            limit.map_or(true, |l| seen < l)
        })?;
        if limit.is_some_and(|l| total >= l) {
            out.truncated = true;
        }
        if first == 0 {
            out.a_minus_b = total;
        } else {
            out.b_minus_a = total;
        }
    }
    Ok(out)
}

/// How many signotopes minimizing `kind` (no symmetry breaking) are realizable
/// on `grid`; `grid = None` counts all of them.
pub fn grid_census(n: usize, kind: Counted, grid: Option<&AbscissaGrid>) -> Result<(u64, u64)> {
    if let Some(g) = grid {
        g.check_len(n)?;
    }
    let x = minimize_count(n, kind)?;
    let (enc, counts) = cardinality_encoding(n, false, &[(kind, x + 1)])?;
    let mut f = enc.formula.clone();
    if let Cond::Lit(l) = counts[0].bound(x, CountDirection::AtMost)? {
        f.add_clause(vec![l]);
    }
    let mut realizable = 0u64;
    let mut err = None;
    let total = solve_all(&f, &enc.orient_vars(), SolverConfig::default(), |m| {
        let s = enc.signotope(m);
        match grid.map_or(Ok(Some(())), |g| lp_feasible(&s, g).map(|o| o.map(|_| ()))) {
            Ok(Some(())) => realizable += 1,
            Ok(None) => {}
            Err(e) => {
                err = Some(e);
                return false;
            }
        }
        true
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok((realizable, total))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_minima_match_enumeration() {
        for n in 3..=6 {
            for kind in [Counted::EmptyTriangle, Counted::EmptyConvex4] {
                assert_eq!(minimize_count(n, kind).unwrap(), brute_force_minimum(n, kind).unwrap(), "n={n} {kind:?}");
            }
        }
    }

    #[test]
    fn census_counts_all_minimizers_without_grid() {
        assert_eq!(grid_census(4, Counted::EmptyConvex4, None).unwrap(), (4, 4));
    }
}
