//! Orchestration: single decisions, threshold scans with realization
//! attempts, decomposed runs and fixed-geometry coloring.

mod artifacts;
pub mod catalog;
mod decomposed;

pub use artifacts::{color_fixed_geometry, emit_svg, verify_points, FoundColoring, SvgOptions};
pub use decomposed::{run_decomposed, Aggregate, RunManifest, SubproblemRecord, SubproblemStatus};

use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::cnf::{CnfFormula, Lit};
use crate::encoder::{build_cnf, AbscissaGrid, Encoding};
use crate::error::{Error, Result};
use crate::realize::{subreduce, Budget, RealizationCertificate, SearchMode, SubreduceOutcome};
use crate::satcore::{external_solve, solve_with, SatResult, SolverConfig, Status};
use crate::signotope::{axioms_ok, find_forbidden_abstract, Signotope};
use crate::spec::{Coloring, ColoringMode, ColoringRef, EdgeColoring, ProblemSpec};

/// Which SAT back end decides formulas.
#[derive(Clone, Debug)]
pub enum Engine {
    Embedded(SolverConfig),
    /// A DIMACS solver command line, e.g. `["kissat", "-q"]`.
    External {
        command: Vec<String>,
        timeout: Option<Duration>,
    },
}

impl Default for Engine {
    fn default() -> Self {
        Engine::Embedded(SolverConfig::default())
    }
}

impl Engine {
    pub fn solve(&self, f: &CnfFormula, assumptions: &[Lit]) -> Result<SatResult> {
        match self {
            Engine::Embedded(config) => solve_with(f, assumptions, config.clone()),
            Engine::External { command, timeout } => {
                if assumptions.is_empty() {
                    return external_solve(f, command, *timeout);
                }
                let mut g = f.clone();
                for &a in assumptions {
                    g.add_clause(vec![a]);
                }
                external_solve(&g, command, *timeout)
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            Engine::Embedded(_) => "embedded".into(),
            Engine::External { command, .. } => command.join(" "),
        }
    }
}

/// A model of the formula, decoded.
#[derive(Clone, Debug)]
pub struct Witness {
    pub signotope: Signotope,
    pub coloring: Option<Coloring>,
    pub edges: Option<EdgeColoring>,
}

impl Witness {
    fn decode(enc: &Encoding, model: &[bool]) -> Self {
        let signotope = enc.signotope(model);
        match enc.spec.mode {
            ColoringMode::Points => Witness { signotope, coloring: Some(enc.coloring(model)), edges: None },
            ColoringMode::Edges => Witness { signotope, coloring: None, edges: Some(enc.edge_coloring(model)) },
        }
    }

    fn coloring_ref(&self) -> ColoringRef<'_> {
        match (&self.coloring, &self.edges) {
            (_, Some(e)) => ColoringRef::Edges(e),
            (Some(c), None) => ColoringRef::Points(c),
            (None, None) => unreachable!("witnesses always carry a coloring"),
        }
    }

    /// Independent check with the abstract structure finder.
    pub fn check(&self, spec: &ProblemSpec) -> Result<()> {
        if !axioms_ok(&self.signotope) {
            return Err(Error::Internal("witness violates the signotope axioms".into()));
        }
        let found = find_forbidden_abstract(&self.signotope, self.coloring_ref(), spec)?;
        match found.first() {
            None => Ok(()),
            Some(f) => Err(Error::Internal(format!("witness contains a forbidden {} at {:?}", f.kind, f.vertices))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Decision {
    pub n: usize,
    pub status: Status,
    pub witness: Option<Witness>,
    pub wall: Duration,
}

/// Decide satisfiability of `spec`; Sat answers are re-checked geometrically
/// on the abstract level before being returned.
pub fn decide(spec: &ProblemSpec, engine: &Engine) -> Result<Decision> {
    let start = Instant::now();
    let enc = build_cnf(spec)?;
    let res = engine.solve(&enc.formula, &[])?;
    let witness = match &res.model {
        Some(m) => {
            let w = Witness::decode(&enc, m);
            w.check(spec)?;
            Some(w)
        }
        None => None,
    };
    Ok(Decision { n: spec.n, status: res.status, witness, wall: start.elapsed() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// A realization with `tilde - 1` points exists, so the geometric value
    /// equals the signotope value.
    Exact,
    /// Geometric value lies in `lower..=upper`; `lower` is unknown when no
    /// realization was found.
    Interval { lower: Option<usize>, upper: usize },
}

#[derive(Clone, Debug)]
pub struct ThresholdOptions {
    pub engine: Engine,
    /// Abscissa grid bases tried in order for the realization attempt; empty
    /// skips realization.
    pub grids: Vec<u32>,
    pub realize_budget: Budget,
    pub realize_mode: SearchMode,
    /// Decide the Unsat instance a second time with another seed.
    pub recheck_unsat: bool,
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        ThresholdOptions {
            engine: Engine::default(),
            grids: vec![1, 4, 2, 8],
            realize_budget: Budget { max_time: Some(Duration::from_secs(600)), ..Budget::default() },
            realize_mode: SearchMode::default(),
            recheck_unsat: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ThresholdResult {
    pub template: ProblemSpec,
    /// Smallest n in the scan whose formula is unsatisfiable.
    pub tilde_value: usize,
    /// Verdict and time for every scanned n.
    pub scan: Vec<(usize, Status, Duration)>,
    pub sat_witness: Witness,
    pub realization: Option<RealizationCertificate>,
    pub verdict: Verdict,
}

/// Ascending scan for the first unsatisfiable n, then an attempt to realize
/// a model at n - 1 on each configured grid.
pub fn find_threshold(
    template: &ProblemSpec,
    range: RangeInclusive<usize>,
    opts: &ThresholdOptions,
) -> Result<ThresholdResult> {
    let (lo, hi) = (*range.start(), *range.end());
    let mut scan = Vec::new();
    let mut last_sat: Option<Witness> = None;
    for n in range {
        let spec = template.with_n(n);
        let d = decide(&spec, &opts.engine)?;
        scan.push((n, d.status, d.wall));
        match d.status {
            Status::Sat => last_sat = d.witness,
            Status::Unsat => {
                let Some(sat_witness) = last_sat else {
                    return Err(Error::BoundaryNotInRange(lo, hi));
                };
                if opts.recheck_unsat {
                    let engine = match &opts.engine {
                        Engine::Embedded(c) => {
                            Engine::Embedded(SolverConfig { seed: c.seed.wrapping_add(1), ..c.clone() })
                        }
                        other => other.clone(),
                    };
                    if decide(&spec, &engine)?.status != Status::Unsat {
                        return Err(Error::Internal(format!("n = {n}: Unsat not reproduced")));
                    }
                }
                let realization = realize_at(&template.with_n(n - 1), opts)?;
                let verdict = match &realization {
                    Some(c) if c.points.len() == n - 1 && c.report.valid => Verdict::Exact,
                    _ => Verdict::Interval { lower: None, upper: n },
                };
                return Ok(ThresholdResult {
                    template: template.clone(),
                    tilde_value: n,
                    scan,
                    sat_witness,
                    realization,
                    verdict,
                });
            }
        }
    }
    Err(Error::BoundaryNotInRange(lo, hi))
}

/// Try each grid in turn; budget exhaustion on one grid moves on to the next.
pub fn realize_at(spec: &ProblemSpec, opts: &ThresholdOptions) -> Result<Option<RealizationCertificate>> {
    for &base in &opts.grids {
        let grid = AbscissaGrid::new(spec.n, base)?;
        match subreduce(spec, &grid, opts.realize_mode, &opts.realize_budget) {
            Ok((SubreduceOutcome::Realized(c), _)) => return Ok(Some(*c)),
            Ok((SubreduceOutcome::ExhaustedUnrealizable, _)) | Err(Error::ResourceLimit(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}
