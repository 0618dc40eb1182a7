//! Realization of signotopes on a fixed abscissa grid: exact linear
//! feasibility and a combined Boolean/linear search.

mod simplex;

pub use simplex::Simplex;

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cnf::Lit;
use crate::encoder::{build_linear, AbscissaGrid, HybridFormula, Relation};
use crate::error::{Error, Result};
use crate::geometry::{verify, Point, PointSet, VerificationReport};
use crate::satcore::{Solver, SolverConfig, Stats, Status, Theory};
use crate::signotope::{from_points, triple_index, triples_lex, Signotope};
use crate::spec::{Coloring, ColoringMode, ColoringRef, EdgeColoring, ProblemSpec};

/// Exact ordinates solving a linear realization system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSolution {
    pub ys: Vec<BigRational>,
}

type Tri = (usize, usize, usize);

/// Rows of the orientation system: one per triple, in colex order.
fn rows(grid: &AbscissaGrid) -> Vec<Vec<(usize, BigRational)>> {
    let n = grid.len();
    let mut t = triples_lex(n);
    t.sort_by_key(|&(a, b, c)| triple_index(a, b, c));
    t.into_iter()
        .map(|(a, b, c)| {
            let k = grid.coefficients(a, b, c);
            [a, b, c].into_iter().zip(k).map(|(v, k)| (v, BigRational::from_integer(k))).collect()
        })
        .collect()
}

/// Adding `alpha * x + beta` to every ordinate preserves all orientations,
/// so the first and last ordinates can be pinned to zero.
fn pin(s: &mut Simplex, n: usize) {
    for v in [0, n.saturating_sub(1)] {
        if v < n {
            s.assert_lower(v, BigRational::zero(), None);
            s.assert_upper(v, BigRational::zero(), None);
        }
    }
}

/// Synthetic reason literal for a triple's bound in offline checks.
fn reason(t: Tri, sign: i8) -> Lit {
    Lit::new(triple_index(t.0, t.1, t.2) as u32 + 1, sign > 0)
}

fn assert_sign(s: &mut Simplex, row: usize, sign: i8, why: Option<Lit>) -> Option<Vec<Lit>> {
    let v = s.row_var(row);
    if sign > 0 {
        s.assert_lower(v, BigRational::one(), why)
    } else {
        s.assert_upper(v, -BigRational::one(), why)
    }
}

/// Feasibility of the given signs (subset of triples) on the grid. On
/// infeasibility returns the triples of a Farkas certificate.
fn check_signs(grid: &AbscissaGrid, signs: &[(Tri, i8)]) -> std::result::Result<RationalSolution, Vec<Tri>> {
    let n = grid.len();
    let mut s = Simplex::new(n, &rows(grid));
    pin(&mut s, n);
    let decode = |l: Lit| -> Tri {
        let idx = l.var() as usize - 1;
        signs.iter().map(|&(t, _)| t).find(|&(a, b, c)| triple_index(a, b, c) == idx).unwrap()
    };
    for &(t, sign) in signs {
        if let Some(c) = assert_sign(&mut s, triple_index(t.0, t.1, t.2), sign, Some(reason(t, sign))) {
            return Err(c.into_iter().map(decode).collect());
        }
    }
    match s.check() {
        Ok(()) => Ok(RationalSolution { ys: (0..n).map(|v| s.value(v).clone()).collect() }),
        Err(c) => Err(c.into_iter().map(decode).collect()),
    }
}

/// Exact feasibility of the signotope's orientation system on the grid.
pub fn lp_feasible(s: &Signotope, grid: &AbscissaGrid) -> Result<Option<RationalSolution>> {
    grid.check_len(s.n())?;
    let signs: Vec<(Tri, i8)> = triples_lex(s.n()).into_iter().map(|t| (t, s.sign(t.0, t.1, t.2))).collect();
    Ok(check_signs(grid, &signs).ok())
}

/// A minimal set of triples whose signs are already infeasible on the grid
/// (None when the signotope is feasible).
pub fn infeasible_core(s: &Signotope, grid: &AbscissaGrid) -> Result<Option<Vec<Tri>>> {
    grid.check_len(s.n())?;
    let signs: Vec<(Tri, i8)> = triples_lex(s.n()).into_iter().map(|t| (t, s.sign(t.0, t.1, t.2))).collect();
    let Err(core) = check_signs(grid, &signs) else { return Ok(None) };
    let mut core: Vec<(Tri, i8)> = core.into_iter().map(|t| (t, s.sign(t.0, t.1, t.2))).collect();
    // Deletion filter down to an irreducible subsystem.
    let mut i = 0;
    while i < core.len() {
        let mut trial = core.clone();
        trial.remove(i);
        if check_signs(grid, &trial).is_err() {
            core = trial;
        } else {
            i += 1;
        }
    }
    Ok(Some(core.into_iter().map(|(t, _)| t).collect()))
}

/// Multiply by the least common multiple of the denominators.
pub fn scale_to_integers(sol: &RationalSolution) -> Vec<BigInt> {
    let l = sol.ys.iter().fold(BigInt::one(), |acc, y| acc.lcm(y.denom()));
    sol.ys.iter().map(|y| (y * BigRational::from_integer(l.clone())).to_integer()).collect()
}

/// Integer points realizing `s` on `grid`, if any.
pub fn realize_signotope(s: &Signotope, grid: &AbscissaGrid) -> Result<Option<PointSet>> {
    let Some(sol) = lp_feasible(s, grid)? else { return Ok(None) };
    let ys = scale_to_integers(&sol);
    let ps = PointSet::new(grid.xs.iter().zip(ys).map(|(x, y)| Point::new(x.clone(), y)).collect());
    if from_points(&ps)? != *s {
        return Err(Error::Internal("scaled ordinates changed an orientation".into()));
    }
    Ok(Some(ps))
}

/// Points plus everything needed to re-check them.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RealizationCertificate {
    pub points: PointSet,
    pub edge_coloring: Option<EdgeColoring>,
    #[serde(with = "signotope_text")]
    pub signotope: Signotope,
    pub grid: AbscissaGrid,
    pub report: VerificationReport,
}

mod signotope_text {
    use super::Signotope;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: &Signotope, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&s.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Signotope, D::Error> {
        let text = String::deserialize(de)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl RealizationCertificate {
    /// Build and check a certificate; fails if the points do not reproduce
    /// the signotope or violate the spec.
    pub fn new(
        s: &Signotope,
        grid: &AbscissaGrid,
        coloring: Option<&Coloring>,
        edge_coloring: Option<&EdgeColoring>,
        spec: &ProblemSpec,
    ) -> Result<Option<Self>> {
        let Some(mut ps) = realize_signotope(s, grid)? else { return Ok(None) };
        if let Some(col) = coloring {
            for (p, &c) in ps.points.iter_mut().zip(&col.0) {
                p.color = Some(c);
            }
        }
        let mono;
        let cref = match (coloring, edge_coloring) {
            (_, Some(ec)) => ColoringRef::Edges(ec),
            (Some(col), None) => ColoringRef::Points(col),
            (None, None) => {
                mono = Coloring::monochrome(s.n());
                ColoringRef::Points(&mono)
            }
        };
        let report = verify(&ps, cref, spec);
        if !report.valid {
            return Err(Error::Internal(format!("realization fails verification: {:?}", report.violations.first())));
        }
        Ok(Some(RealizationCertificate {
            points: ps,
            edge_coloring: edge_coloring.cloned(),
            signotope: s.clone(),
            grid: grid.clone(),
            report,
        }))
    }
}

/// How the combined search reacts to a grid-infeasible proposal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum SearchMode {
    /// Linear checks inside the SAT search on partial assignments, learning
    /// Farkas explanations.
    #[default]
    Integrated,
    /// Total models only; block the whole orientation assignment.
    BlockFull,
    /// Total models only; block an irreducible infeasible subsystem.
    BlockCore,
}

#[derive(Clone, Debug, Default)]
pub struct Budget {
    pub max_proposals: Option<u64>,
    pub max_time: Option<Duration>,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub enum SubreduceOutcome {
    Realized(Box<RealizationCertificate>),
    /// No model of the formula is realizable on this grid (says nothing
    /// about other abscissae).
    ExhaustedUnrealizable,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SubreduceStats {
    pub proposals: u64,
    pub reproposals: u64,
    pub theory_conflicts: u64,
    pub pivots: u64,
    pub sat: Stats,
}

/// Search for a model of `spec` whose signotope is realizable on `grid`.
pub fn subreduce(
    spec: &ProblemSpec,
    grid: &AbscissaGrid,
    mode: SearchMode,
    budget: &Budget,
) -> Result<(SubreduceOutcome, SubreduceStats)> {
    let h = build_linear(spec, grid)?;
    let start = Instant::now();
    let config = SolverConfig { seed: budget.seed, max_time: budget.max_time, ..SolverConfig::default() };
    let mut solver = Solver::from_formula(&h.encoding.formula, config);
    let mut stats = SubreduceStats::default();
    let spec = &h.encoding.spec;
    match mode {
        SearchMode::Integrated => {
            let mut theory = LinearTheory::new(&h);
            let status = solver.solve_with_theory(&[], &mut theory)?;
            stats.theory_conflicts = solver.stats().theory_conflicts;
            stats.pivots = theory.simplex.pivots;
            stats.sat = solver.stats();
            stats.proposals = 1;
            match status {
                Status::Unsat => Ok((SubreduceOutcome::ExhaustedUnrealizable, stats)),
                Status::Sat => {
                    let cert = certificate(&h, solver.model(), spec)?
                        .ok_or_else(|| Error::Internal("theory accepted an infeasible model".into()))?;
                    Ok((SubreduceOutcome::Realized(Box::new(cert)), stats))
                }
            }
        }
        SearchMode::BlockFull | SearchMode::BlockCore => {
            let mut seen: HashSet<Signotope> = HashSet::new();
            loop {
                if let Some(t) = budget.max_time {
                    if start.elapsed() >= t {
                        return Err(Error::ResourceLimit(format!(
                            "{} proposals in {:.1}s",
                            stats.proposals,
                            t.as_secs_f64()
                        )));
                    }
                }
                if budget.max_proposals.is_some_and(|m| stats.proposals >= m) {
                    return Err(Error::ResourceLimit(format!("{} proposals", stats.proposals)));
                }
                let status = solver.solve(&[])?;
                stats.sat = solver.stats();
                if status == Status::Unsat {
                    return Ok((SubreduceOutcome::ExhaustedUnrealizable, stats));
                }
                stats.proposals += 1;
                let model = solver.model().to_vec();
                let s = h.encoding.signotope(&model);
                if !seen.insert(s.clone()) {
                    stats.reproposals += 1;
                }
                if let Some(cert) = certificate(&h, &model, spec)? {
                    return Ok((SubreduceOutcome::Realized(Box::new(cert)), stats));
                }
                let triples = match mode {
                    SearchMode::BlockCore => infeasible_core(&s, grid)?.expect("infeasible"),
                    _ => triples_lex(s.n()),
                };
                let clause: Vec<Lit> = triples
                    .into_iter()
                    .map(|(a, b, c)| Lit::new(h.encoding.orient_var(a, b, c), s.sign(a, b, c) < 0))
                    .collect();
                if !solver.add_clause(&clause) {
                    return Ok((SubreduceOutcome::ExhaustedUnrealizable, stats));
                }
            }
        }
    }
}

fn certificate(h: &HybridFormula, model: &[bool], spec: &ProblemSpec) -> Result<Option<RealizationCertificate>> {
    let s = h.encoding.signotope(model);
    match spec.mode {
        ColoringMode::Points => {
            let col = h.encoding.coloring(model);
            RealizationCertificate::new(&s, &h.grid, Some(&col), None, spec)
        }
        ColoringMode::Edges => {
            let ec = h.encoding.edge_coloring(model);
            RealizationCertificate::new(&s, &h.grid, None, Some(&ec), spec)
        }
    }
}

/// The grid's orientation system as a theory of the SAT search.
pub struct LinearTheory {
    simplex: Simplex,
    /// Orientation variable -> (row, sign of the row bound when true).
    rows_of: HashMap<u32, usize>,
    /// Simplex trail length before each Boolean trail literal.
    marks: Vec<usize>,
    pending: Option<(usize, Vec<Lit>)>,
}

impl LinearTheory {
    pub fn new(h: &HybridFormula) -> Self {
        let n = h.grid.len();
        let mut simplex = Simplex::new(n, &rows(&h.grid));
        pin(&mut simplex, n);
        let mut rows_of = HashMap::new();
        for (a, b, c) in triples_lex(n) {
            let (pos, _) = h.links_of(a, b, c);
            debug_assert_eq!(pos.relation, Relation::AtLeastOne);
            rows_of.insert(pos.guard.var(), triple_index(a, b, c));
        }
        LinearTheory { simplex, rows_of, marks: Vec::new(), pending: None }
    }
}

impl Theory for LinearTheory {
    fn assert_lits(&mut self, lits: &[Lit]) {
        for &l in lits {
            self.marks.push(self.simplex.trail_len());
            if self.pending.is_some() {
                continue;
            }
            if let Some(&row) = self.rows_of.get(&l.var()) {
                let sign = if l.is_positive() { 1 } else { -1 };
                if let Some(c) = assert_sign(&mut self.simplex, row, sign, Some(l)) {
                    self.pending = Some((self.marks.len() - 1, c));
                }
            }
        }
    }

    fn check(&mut self, _complete: bool) -> Option<Vec<Lit>> {
        if let Some((_, c)) = &self.pending {
            return Some(c.iter().map(|&l| !l).collect());
        }
        self.simplex.check().err().map(|c| c.into_iter().map(|l| !l).collect())
    }

    fn backtrack(&mut self, len: usize) {
        if len < self.marks.len() {
            self.simplex.backtrack(self.marks[len]);
            self.marks.truncate(len);
        }
        if self.pending.as_ref().is_some_and(|(i, _)| *i >= len) {
            self.pending = None;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_points_feasible() {
        let s = Signotope::all_plus(3);
        let g = AbscissaGrid::new(3, 1).unwrap();
        let sol = lp_feasible(&s, &g).unwrap().unwrap();
        let y = &sol.ys;
        assert!(&y[0] - BigRational::from_integer(2.into()) * &y[1] + &y[2] >= BigRational::one());
    }

    #[test]
    fn scaling_examples() {
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        let sol = RationalSolution { ys: vec![q(2023, 3), q(1, 1)] };
        assert_eq!(scale_to_integers(&sol), vec![BigInt::from(2023), BigInt::from(3)]);
        let sol = RationalSolution { ys: vec![q(4, 1), q(-7, 1)] };
        assert_eq!(scale_to_integers(&sol), vec![BigInt::from(4), BigInt::from(-7)]);
    }
}
