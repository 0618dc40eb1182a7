//! Satisfiability back ends: the embedded CDCL solver, model enumeration and
//! a bridge to external DIMACS solvers.

mod external;
mod solver;

pub use external::{external_solve, parse_solver_output};
pub use solver::{NoTheory, RestartPolicy, Solver, SolverConfig, Stats, Status, Theory};

use serde::{Deserialize, Serialize};

use crate::cnf::{CnfFormula, Lit};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SatResult {
    pub status: Status,
    /// Assignment indexed by DIMACS variable (entry 0 unused); present iff Sat.
    pub model: Option<Vec<bool>>,
    pub stats: Stats,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        self.status == Status::Sat
    }

    /// Truth value of a literal in the model.
    pub fn value(&self, l: Lit) -> Option<bool> {
        let m = self.model.as_ref()?;
        m.get(l.var() as usize).map(|&v| v == l.is_positive())
    }
}

/// Reject models that do not satisfy every clause of `f`.
pub(crate) fn check_model(f: &CnfFormula, model: &[bool]) -> Result<()> {
    match f.first_falsified(model) {
        None => Ok(()),
        Some(i) => Err(Error::Internal(format!("model falsifies clause {i}: {:?}", f.clauses[i]))),
    }
}

/// Decide `f` under `assumptions` with the embedded solver.
pub fn solve(f: &CnfFormula, assumptions: &[Lit]) -> Result<SatResult> {
    solve_with(f, assumptions, SolverConfig::default())
}

pub fn solve_with(f: &CnfFormula, assumptions: &[Lit], config: SolverConfig) -> Result<SatResult> {
    let mut s = Solver::from_formula(f, config);
    let status = s.solve(assumptions)?;
    let model = match status {
        Status::Sat => {
            let mut m = s.model().to_vec();
            m.resize(f.var_count as usize + 1, false);
            check_model(f, &m)?;
            for a in assumptions {
                if m[a.var() as usize] != a.is_positive() {
                    return Err(Error::Internal(format!("model violates assumption {a}")));
                }
            }
            Some(m)
        }
        Status::Unsat => None,
    };
    Ok(SatResult { status, model, stats: s.stats() })
}

/// Enumerate models that differ on `projection`, calling `on_model` for each
/// (with the full verified model). Returns the number of projected models.
/// `on_model` may return false to stop early.
pub fn solve_all(
    f: &CnfFormula,
    projection: &[u32],
    config: SolverConfig,
    mut on_model: impl FnMut(&[bool]) -> bool,
) -> Result<u64> {
    let mut s = Solver::from_formula(f, config);
    let mut count = 0;
    while s.solve(&[])? == Status::Sat {
        let mut m = s.model().to_vec();
        m.resize(f.var_count as usize + 1, false);
        check_model(f, &m)?;
        count += 1;
        if !on_model(&m) {
            break;
        }
        if projection.is_empty() {
            break;
        }
        let block: Vec<Lit> = projection.iter().map(|&v| Lit::new(v, !m[v as usize])).collect();
        if !s.add_clause(&block) {
            break;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_all_counts_projected_models() {
        // (x1 or x2) with free x3: 3 models on {x1,x2}, 6 on all three.
        let mut f = CnfFormula::new();
        for _ in 0..3 {
            f.fresh();
        }
        f.add_clause(vec![Lit::pos(1), Lit::pos(2)]);
        assert_eq!(solve_all(&f, &[1, 2], SolverConfig::default(), |_| true).unwrap(), 3);
        assert_eq!(solve_all(&f, &[1, 2, 3], SolverConfig::default(), |_| true).unwrap(), 6);
    }
}
