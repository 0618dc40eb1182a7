//! Translation of problem specs into CNF (and into CNF plus linear
//! constraints over a fixed abscissa grid).

mod cardinality;
mod decompose;
mod grid;
mod smt2;
mod totalizer;

pub use cardinality::{
    build_cardinality, cardinality_encoding, CountDirection, Counted, StructureCount, CARDINALITY_CAP,
};
pub use decompose::{canonical_prefixes, decompose, RunRule, Subproblem};
pub use grid::{build_linear, AbscissaGrid, HybridFormula, LinearConstraint, Relation};
pub use smt2::emit_smt2;
pub use totalizer::Totalizer;

use std::collections::{HashMap, HashSet};

use itertools::Itertools;

use crate::cnf::{CnfFormula, Lit, SemVar};
use crate::error::{Error, Result};
use crate::signotope::{triples_lex, Signotope};
use crate::spec::{Coloring, ColoringMode, EdgeColoring, HexagonRelaxation, Kind, ProblemSpec};

/// Literal budget for the subset expansion of TR clauses before switching to
/// a counter encoding.
pub const DEFAULT_LITERAL_BUDGET: usize = 5_000_000;

#[derive(Clone, Debug)]
pub struct EncoderOptions {
    pub literal_budget: usize,
    /// Refuse to fall back to counters and fail with `SizeOverflow` instead.
    pub strict_budget: bool,
    /// Emit the orientation constraints of linear mode (sb is then ignored).
    pub linear: bool,
}

impl Default for EncoderOptions {
    fn default() -> Self {
        EncoderOptions { literal_budget: DEFAULT_LITERAL_BUDGET, strict_budget: false, linear: false }
    }
}

/// A truth value that may be known at encoding time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cond {
    True,
    False,
    Lit(Lit),
}

impl Cond {
    fn and_lits(conds: &[Cond]) -> Option<Vec<Lit>> {
        let mut out = Vec::with_capacity(conds.len());
        for c in conds {
            match c {
                Cond::True => {}
                Cond::False => return None,
                Cond::Lit(l) => out.push(*l),
            }
        }
        Some(out)
    }
}

type Tri = (usize, usize, usize);

/// A built formula together with the variable layout needed to decode models.
#[derive(Clone, Debug)]
pub struct Encoding {
    pub formula: CnfFormula,
    pub spec: ProblemSpec,
    /// True when some TR group fell back to counters because of the budget.
    pub used_counters: bool,
}

impl Encoding {
    pub fn orient_var(&self, a: usize, b: usize, c: usize) -> u32 {
        self.formula.lookup(&SemVar::Orient(a, b, c)).expect("orientation variables are always registered")
    }

    pub fn orient_vars(&self) -> Vec<u32> {
        triples_lex(self.spec.n).into_iter().map(|(a, b, c)| self.orient_var(a, b, c)).collect()
    }

    /// Color variables (present only with two or more colors).
    pub fn color_vars(&self) -> Vec<u32> {
        self.formula
            .registry
            .entries()
            .into_iter()
            .filter(|(_, n)| matches!(n, SemVar::Color { .. } | SemVar::EdgeColor { .. }))
            .map(|(v, _)| v)
            .collect()
    }

    /// Literal that is true iff point `a` has color `i` (None: single color).
    pub fn point_color_lit(&self, i: usize, a: usize) -> Option<Lit> {
        self.formula.lookup(&SemVar::Color { color: i, point: a }).map(Lit::neg)
    }

    pub fn signotope(&self, model: &[bool]) -> Signotope {
        Signotope::from_fn(self.spec.n, |a, b, c| if model[self.orient_var(a, b, c) as usize] { 1 } else { -1 })
    }

    pub fn coloring(&self, model: &[bool]) -> Coloring {
        let n = self.spec.n;
        if self.spec.colors <= 1 {
            return Coloring::monochrome(n);
        }
        Coloring(
            (0..n)
                .map(|a| {
                    (0..self.spec.colors)
                        .find(|&i| !model[self.formula.lookup(&SemVar::Color { color: i, point: a }).unwrap() as usize])
                        .expect("existence clause")
                })
                .collect(),
        )
    }

    pub fn edge_coloring(&self, model: &[bool]) -> EdgeColoring {
        let n = self.spec.n;
        let mut ec = EdgeColoring::new(n, 0);
        for a in 0..n {
            for b in a + 1..n {
                let c = (0..self.spec.colors)
                    .find(|&i| {
                        let v = self.formula.lookup(&SemVar::EdgeColor { color: i, a, b }).unwrap();
                        !model[v as usize]
                    })
                    .expect("existence clause");
                ec.set(a, b, c);
            }
        }
        ec
    }

    /// Literals fixing point colors (inverse logic: `C_i(a)` false).
    pub fn fix_point_colors(&self, prefix: &[usize]) -> Vec<Lit> {
        prefix.iter().enumerate().filter_map(|(a, &i)| self.point_color_lit(i, a)).collect()
    }

    /// Literals fixing every orientation to that of `s`.
    pub fn fix_signotope(&self, s: &Signotope) -> Vec<Lit> {
        triples_lex(self.spec.n)
            .into_iter()
            .map(|(a, b, c)| Lit::new(self.orient_var(a, b, c), s.sign(a, b, c) > 0))
            .collect()
    }
}

/// Encode `spec` with default options.
pub fn build_cnf(spec: &ProblemSpec) -> Result<Encoding> {
    build_cnf_with(spec, &EncoderOptions::default())
}

pub fn build_cnf_with(spec: &ProblemSpec, opts: &EncoderOptions) -> Result<Encoding> {
    spec.validate()?;
    let mut b = Builder::new(spec, opts.clone());
    b.base();
    for c in &spec.constraints {
        b.constraint(c.color, &c.kind)?;
    }
    Ok(Encoding { formula: b.f, spec: spec.clone(), used_counters: b.used_counters })
}

pub(crate) struct Builder<'a> {
    pub(crate) spec: &'a ProblemSpec,
    pub(crate) f: CnfFormula,
    opts: EncoderOptions,
    ext_fwd: HashSet<(Tri, usize)>,
    ext_rev: HashSet<(Tri, usize)>,
    tr_memo: HashMap<(Tri, usize), Cond>,
    /// Exact counters: outputs[j-1] is true iff at least j interior points.
    counters: HashMap<Tri, Vec<Lit>>,
    /// Lower-bound-only counters used by the TR fallback.
    lazy_counters: HashMap<Tri, Vec<Lit>>,
    counter_cap: usize,
    literals_spent: usize,
    used_counters: bool,
}

impl<'a> Builder<'a> {
    pub(crate) fn new(spec: &'a ProblemSpec, opts: EncoderOptions) -> Self {
        Builder {
            spec,
            f: CnfFormula::new(),
            opts,
            ext_fwd: HashSet::new(),
            ext_rev: HashSet::new(),
            tr_memo: HashMap::new(),
            counters: HashMap::new(),
            lazy_counters: HashMap::new(),
            counter_cap: exact_cap(spec),
            literals_spent: 0,
            used_counters: false,
        }
    }

    pub(crate) fn n(&self) -> usize {
        self.spec.n
    }

    /// Orientation literal of the sorted triple.
    pub(crate) fn l(&mut self, a: usize, b: usize, c: usize) -> Lit {
        debug_assert!(a < b && b < c);
        Lit::pos(self.f.var(SemVar::Orient(a, b, c)))
    }

    /// Condition "sorted triple has sign `s`".
    pub(crate) fn sign_cond(&mut self, t: Tri, s: i8) -> Cond {
        Cond::Lit(self.l(t.0, t.1, t.2).with(s > 0))
    }

    pub(crate) fn clause(&mut self, c: Vec<Lit>) {
        self.f.add_clause(c);
    }

    /// Forbid the conjunction of `conds`.
    pub(crate) fn forbid(&mut self, conds: &[Cond]) {
        if let Some(lits) = Cond::and_lits(conds) {
            let clause: Vec<Lit> = lits.into_iter().map(|l| !l).unique().collect();
            self.clause(clause);
        }
    }

    /// Orientation variables, color variables, axioms, symmetry constraints.
    pub(crate) fn base(&mut self) {
        let n = self.n();
        for (a, b, c) in triples_lex(n) {
            self.l(a, b, c);
        }
        self.colors();
        for q in (0..n).combinations(4) {
            let (a, b, c, d) = (q[0], q[1], q[2], q[3]);
            let abc = self.l(a, b, c);
            let abd = self.l(a, b, d);
            let acd = self.l(a, c, d);
            let bcd = self.l(b, c, d);
            // At most one sign change along (abc, abd, acd, bcd): no pattern
            // x, !x, x on any three of them in order.
            for (p, q, r) in [(abc, acd, bcd), (abc, abd, acd), (abc, abd, bcd), (abd, acd, bcd)] {
                self.clause(vec![!p, q, !r]);
                self.clause(vec![p, !q, r]);
            }
        }
        if self.spec.sb && !self.opts.linear {
            for b in 1..n {
                for c in b + 1..n {
                    let l = self.l(0, b, c);
                    self.clause(vec![l]);
                }
            }
        }
        if self.spec.axial {
            for (a, b, c) in triples_lex(n) {
                let m = (n - 1 - c, n - 1 - b, n - 1 - a);
                if (a, b, c) < m {
                    let x = self.l(a, b, c);
                    let y = self.l(m.0, m.1, m.2);
                    self.clause(vec![!x, y]);
                    self.clause(vec![x, !y]);
                }
            }
        }
    }

    fn colors(&mut self) {
        let n = self.n();
        let k = self.spec.colors;
        match self.spec.mode {
            ColoringMode::Points if k >= 2 => {
                for a in 0..n {
                    let vars: Vec<u32> = (0..k).map(|i| self.f.var(SemVar::Color { color: i, point: a })).collect();
                    self.one_of(&vars);
                }
            }
            ColoringMode::Edges if k >= 2 => {
                for a in 0..n {
                    for b in a + 1..n {
                        let vars: Vec<u32> = (0..k).map(|i| self.f.var(SemVar::EdgeColor { color: i, a, b })).collect();
                        self.one_of(&vars);
                    }
                }
            }
            _ => {}
        }
    }

    /// Exactly one variable false (inverse logic).
    fn one_of(&mut self, vars: &[u32]) {
        self.clause(vars.iter().map(|&v| Lit::neg(v)).collect());
        for (i, &x) in vars.iter().enumerate() {
            for &y in &vars[i + 1..] {
                self.clause(vec![Lit::pos(x), Lit::pos(y)]);
            }
        }
    }

    pub(crate) fn point_color(&mut self, i: usize, a: usize) -> Cond {
        if self.spec.colors <= 1 {
            Cond::True
        } else {
            Cond::Lit(Lit::neg(self.f.var(SemVar::Color { color: i, point: a })))
        }
    }

    pub(crate) fn edge_color(&mut self, i: usize, a: usize, b: usize) -> Cond {
        let (a, b) = (a.min(b), a.max(b));
        Cond::Lit(Lit::neg(self.f.var(SemVar::EdgeColor { color: i, a, b })))
    }

    /// Candidates for the interior of the sorted triangle.
    pub(crate) fn candidates(t: Tri) -> Vec<usize> {
        (t.0 + 1..t.2).filter(|&z| z != t.1).collect()
    }

    /// The two orientation literals whose equality means "z is exterior".
    fn ext_pair(&mut self, t: Tri, z: usize) -> (Lit, Lit) {
        let (a, b, c) = t;
        if z < b {
            (self.l(a, z, b), self.l(a, z, c))
        } else {
            (self.l(b, z, c), self.l(a, z, c))
        }
    }

    /// EXT variable with at least the forward implication (exterior => EXT);
    /// with `exact` also EXT => exterior.
    pub(crate) fn ext(&mut self, t: Tri, z: usize, exact: bool) -> Lit {
        let e = Lit::pos(self.f.var(SemVar::Ext { tri: t, z }));
        if self.ext_fwd.insert((t, z)) {
            let (p, q) = self.ext_pair(t, z);
            self.clause(vec![!p, !q, e]);
            self.clause(vec![p, q, e]);
        }
        if exact && self.ext_rev.insert((t, z)) {
            let (p, q) = self.ext_pair(t, z);
            self.clause(vec![!e, !p, q]);
            self.clause(vec![!e, p, !q]);
        }
        e
    }

    /// TR(t, q): forced true whenever t has at most q interior points
    /// (one-directional). Subset expansion within budget, counters beyond it.
    pub(crate) fn tr(&mut self, t: Tri, q: usize) -> Result<Cond> {
        let cand = Self::candidates(t);
        if q >= cand.len() {
            return Ok(Cond::True);
        }
        if let Some(c) = self.tr_memo.get(&(t, q)) {
            return Ok(*c);
        }
        let m = cand.len();
        let size = m - q;
        let cost = binomial(m, size).saturating_mul(size + 1);
        let cond = if self.literals_spent.saturating_add(cost) <= self.opts.literal_budget {
            self.literals_spent += cost;
            let v = Lit::pos(self.f.var(SemVar::Tr { tri: t, q }));
            let exts: Vec<Lit> = cand.iter().map(|&z| self.ext(t, z, false)).collect();
            for z in exts.iter().copied().combinations(size) {
                let mut clause: Vec<Lit> = z.into_iter().map(|e| !e).collect();
                clause.push(v);
                self.clause(clause);
            }
            Cond::Lit(v)
        } else if self.opts.strict_budget {
            return Err(Error::SizeOverflow(self.opts.literal_budget));
        } else {
            self.used_counters = true;
            let outs = self.lazy_counter(t);
            // count <= q  <=>  not (count >= q+1)
            Cond::Lit(!outs[q])
        };
        self.tr_memo.insert((t, q), cond);
        Ok(cond)
    }

    /// Counter whose outputs imply lower bounds on the interior count.
    fn lazy_counter(&mut self, t: Tri) -> Vec<Lit> {
        if let Some(o) = self.lazy_counters.get(&t) {
            return o.clone();
        }
        let cand = Self::candidates(t);
        let inputs: Vec<Lit> = cand.iter().map(|&z| !self.ext(t, z, false)).collect();
        let tot = Totalizer::build(&mut self.f, &inputs, inputs.len(), false, true);
        self.lazy_counters.insert(t, tot.outputs.clone());
        tot.outputs
    }

    /// Exact counter outputs for the interior of `t` (index j-1: at least j).
    pub(crate) fn exact_counter(&mut self, t: Tri) -> Vec<Lit> {
        if let Some(o) = self.counters.get(&t) {
            return o.clone();
        }
        let cand = Self::candidates(t);
        let inputs: Vec<Lit> = cand.iter().map(|&z| !self.ext(t, z, true)).collect();
        let cap = self.counter_cap.min(inputs.len());
        let tot = Totalizer::build(&mut self.f, &inputs, cap, true, true);
        self.counters.insert(t, tot.outputs.clone());
        tot.outputs
    }

    /// Exactly `q` interior points, as a conjunction of conditions.
    pub(crate) fn eq(&mut self, t: Tri, q: usize) -> Vec<Cond> {
        let m = Self::candidates(t).len();
        if q > m {
            return vec![Cond::False];
        }
        if q + 1 > self.counter_cap.max(1) && q < m {
            // Caller asked beyond the precomputed cap; widen for this triangle.
            self.counter_cap = q + 1;
            self.counters.remove(&t);
        }
        let outs = self.exact_counter(t);
        let mut conds = Vec::new();
        if q >= 1 {
            conds.push(Cond::Lit(outs[q - 1]));
        }
        if q < m {
            conds.push(Cond::Lit(!outs[q]));
        }
        conds
    }

    fn constraint(&mut self, color: usize, kind: &Kind) -> Result<()> {
        let n = self.n();
        match kind {
            Kind::Pair => {
                for (a, b) in (0..n).tuple_combinations() {
                    let conds = [self.point_color(color, a), self.point_color(color, b)];
                    self.forbid(&conds);
                }
            }
            Kind::Triangle { limit } => {
                for (a, b, c) in triples_lex(n) {
                    let mut conds: Vec<Cond> = [a, b, c].iter().map(|&p| self.point_color(color, p)).collect();
                    if let Some(k) = limit {
                        conds.push(self.tr((a, b, c), *k)?);
                    }
                    self.forbid(&conds);
                }
            }
            Kind::RamseyTriangle { limit } => {
                for (a, b, c) in triples_lex(n) {
                    let mut conds =
                        vec![self.edge_color(color, a, b), self.edge_color(color, a, c), self.edge_color(color, b, c)];
                    if let Some(k) = limit {
                        conds.push(self.tr((a, b, c), *k)?);
                    }
                    self.forbid(&conds);
                }
            }
            Kind::Convex { size: 4, limit } => {
                for q in (0..n).combinations(4) {
                    let cols: Vec<Cond> = q.iter().map(|&p| self.point_color(color, p)).collect();
                    self.convex4(&cols, [q[0], q[1], q[2], q[3]], *limit)?;
                }
            }
            Kind::NonConvex4 { limit } => {
                for q in (0..n).combinations(4) {
                    let cols: Vec<Cond> = q.iter().map(|&p| self.point_color(color, p)).collect();
                    let v = [q[0], q[1], q[2], q[3]];
                    self.convex4(&cols, v, *limit)?;
                    self.nonconvex4(&cols, v, *limit)?;
                }
            }
            Kind::Island4 { limit } => {
                for q in (0..n).combinations(4) {
                    let cols: Vec<Cond> = q.iter().map(|&p| self.point_color(color, p)).collect();
                    let v = [q[0], q[1], q[2], q[3]];
                    self.convex4(&cols, v, *limit)?;
                    self.island4(&cols, v, *limit)?;
                }
            }
            Kind::Convex { size, limit } => {
                for v in (0..n).combinations(*size) {
                    let cols: Vec<Cond> = v.iter().map(|&p| self.point_color(color, p)).collect();
                    for case in convex_cases(&v) {
                        let mut conds = cols.clone();
                        for &(t, s) in &case.signs {
                            conds.push(self.sign_cond(t, s));
                        }
                        match limit {
                            None => self.forbid(&conds),
                            Some(k)
                                if *size == 6 && self.spec.hexagon_relaxation == HexagonRelaxation::BaseTriangle =>
                            {
                                let base = crate::signotope::hexagon_base_triangle(&v, &case.cycle);
                                conds.push(self.tr(base, *k)?);
                                self.forbid(&conds);
                            }
                            Some(k) => self.forbid_split(&conds, &fan(&case.cycle), *k)?,
                        }
                    }
                }
            }
            Kind::RamseyConvex { size, limit } => {
                for v in (0..n).combinations(*size) {
                    for case in convex_cases(&v) {
                        let cyc = &case.cycle;
                        let mut conds: Vec<Cond> =
                            (0..cyc.len()).map(|i| self.edge_color(color, cyc[i], cyc[(i + 1) % cyc.len()])).collect();
                        for &(t, s) in &case.signs {
                            conds.push(self.sign_cond(t, s));
                        }
                        match limit {
                            None => self.forbid(&conds),
                            Some(k) => self.forbid_split(&conds, &fan(cyc), *k)?,
                        }
                    }
                }
            }
            Kind::HexEx { interior } => {
                for v in (0..n).combinations(6) {
                    let cols: Vec<Cond> = v.iter().map(|&p| self.point_color(color, p)).collect();
                    for case in convex_cases(&v) {
                        let mut conds = cols.clone();
                        for &(t, s) in &case.signs {
                            conds.push(self.sign_cond(t, s));
                        }
                        if self.spec.hexagon_relaxation == HexagonRelaxation::BaseTriangle {
                            let base = crate::signotope::hexagon_base_triangle(&v, &case.cycle);
                            for &q in interior {
                                let mut c = conds.clone();
                                c.extend(self.eq(base, q));
                                self.forbid(&c);
                            }
                        } else {
                            let tris = fan(&case.cycle);
                            for &q in interior {
                                self.forbid_exact_split(&conds, &tris, q);
                            }
                        }
                    }
                }
            }
            Kind::HexSub { q } => {
                for v in (0..n).combinations(6) {
                    let cols: Vec<Cond> = v.iter().map(|&p| self.point_color(color, p)).collect();
                    for case in convex_cases(&v) {
                        let mut conds = cols.clone();
                        for &(t, s) in &case.signs {
                            conds.push(self.sign_cond(t, s));
                        }
                        let cyc = &case.cycle;
                        for i in 0..3 {
                            let quad: Vec<usize> = (0..6).filter(|&j| j != i && j != i + 3).map(|j| cyc[j]).collect();
                            let tris = fan(&quad);
                            // Exactly 0 is the same as at most 0.
                            let mut zero = conds.clone();
                            for &t in &tris {
                                zero.push(self.tr(t, 0)?);
                            }
                            self.forbid(&zero);
                            self.forbid_exact_split(&conds, &tris, *q);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Forbid `conds` together with "the triangles hold at most k points in total".
    pub(crate) fn forbid_split(&mut self, conds: &[Cond], tris: &[Tri], k: usize) -> Result<()> {
        let caps: Vec<usize> = tris.iter().map(|&t| Self::candidates(t).len()).collect();
        let total = k.min(caps.iter().sum());
        for split in splits(total, &caps) {
            let mut c = conds.to_vec();
            for (&t, &q) in tris.iter().zip(&split) {
                c.push(self.tr(t, q)?);
            }
            self.forbid(&c);
        }
        Ok(())
    }

    /// Forbid `conds` together with "the triangles hold exactly k points in total".
    pub(crate) fn forbid_exact_split(&mut self, conds: &[Cond], tris: &[Tri], k: usize) {
        let caps: Vec<usize> = tris.iter().map(|&t| Self::candidates(t).len()).collect();
        if caps.iter().sum::<usize>() < k {
            return;
        }
        for split in splits(k, &caps) {
            let mut c = conds.to_vec();
            for (&t, &q) in tris.iter().zip(&split) {
                c.extend(self.eq(t, q));
            }
            self.forbid(&c);
        }
    }

    /// The four convex cases of 4 sorted points with their fan triangulations.
    fn convex4(&mut self, cols: &[Cond], v: [usize; 4], limit: Option<usize>) -> Result<()> {
        let [a, b, c, d] = v;
        for r in [1i8, -1] {
            // 4-cup / 4-cap.
            let mut conds = cols.to_vec();
            conds.push(self.sign_cond((a, b, c), r));
            conds.push(self.sign_cond((b, c, d), r));
            match limit {
                None => self.forbid(&conds),
                Some(k) => self.forbid_split(&conds, &[(a, b, c), (a, c, d)], k)?,
            }
            // 3-cup + 3-cap.
            let mut conds = cols.to_vec();
            conds.push(self.sign_cond((a, b, d), r));
            conds.push(self.sign_cond((a, c, d), -r));
            match limit {
                None => self.forbid(&conds),
                Some(k) => self.forbid_split(&conds, &[(a, b, c), (b, c, d)], k)?,
            }
        }
        Ok(())
    }

    /// Non-convex 4-sets: the inner point splits the hull triangle into three
    /// parts and any two of them form a simple quadrilateral.
    fn nonconvex4(&mut self, cols: &[Cond], v: [usize; 4], limit: Option<usize>) -> Result<()> {
        let [a, b, c, d] = v;
        for r in [1i8, -1] {
            // b inside acd.
            let mut conds = cols.to_vec();
            conds.push(self.sign_cond((a, b, d), r));
            conds.push(self.sign_cond((a, b, c), -r));
            self.forbid_pairs(&conds, [(a, b, c), (a, b, d), (b, c, d)], limit)?;
            // c inside abd.
            let mut conds = cols.to_vec();
            conds.push(self.sign_cond((a, c, d), r));
            conds.push(self.sign_cond((b, c, d), -r));
            self.forbid_pairs(&conds, [(a, b, c), (a, c, d), (b, c, d)], limit)?;
        }
        Ok(())
    }

    fn forbid_pairs(&mut self, conds: &[Cond], parts: [Tri; 3], limit: Option<usize>) -> Result<()> {
        match limit {
            None => self.forbid(conds),
            Some(k) => {
                for (x, y) in [(0, 1), (0, 2), (1, 2)] {
                    self.forbid_split(conds, &[parts[x], parts[y]], k)?;
                }
            }
        }
        Ok(())
    }

    /// Non-convex islands: the hull triangle holds the inner point plus at most k others.
    fn island4(&mut self, cols: &[Cond], v: [usize; 4], limit: Option<usize>) -> Result<()> {
        let [a, b, c, d] = v;
        for r in [1i8, -1] {
            let mut conds = cols.to_vec();
            conds.push(self.sign_cond((a, b, d), r));
            conds.push(self.sign_cond((a, b, c), -r));
            if let Some(k) = limit {
                conds.push(self.tr((a, c, d), k + 1)?);
            }
            self.forbid(&conds);
            let mut conds = cols.to_vec();
            conds.push(self.sign_cond((a, c, d), r));
            conds.push(self.sign_cond((b, c, d), -r));
            if let Some(k) = limit {
                conds.push(self.tr((a, b, d), k + 1)?);
            }
            self.forbid(&conds);
        }
        Ok(())
    }
}

/// Largest exact count any constraint asks for (plus one for the "more than" output).
fn exact_cap(spec: &ProblemSpec) -> usize {
    spec.constraints
        .iter()
        .map(|c| match &c.kind {
            Kind::HexEx { interior } => interior.iter().max().copied().unwrap_or(0) + 1,
            Kind::HexSub { q } => q + 1,
            _ => 1,
        })
        .max()
        .unwrap_or(1)
}

/// A convex-position case of a sorted vertex set: the sign constraints that
/// make the points below the extreme chord a cup and the rest a cap, and the
/// resulting counter-clockwise cycle.
pub(crate) struct ConvexCase {
    pub signs: Vec<(Tri, i8)>,
    pub cycle: Vec<usize>,
}

pub(crate) fn convex_cases(v: &[usize]) -> Vec<ConvexCase> {
    let k = v.len();
    let (first, last) = (v[0], v[k - 1]);
    let middle = &v[1..k - 1];
    let mut out = Vec::with_capacity(1 << middle.len());
    for mask in 0..(1u32 << middle.len()) {
        let mut lower = vec![first];
        let mut upper = vec![first];
        for (i, &x) in middle.iter().enumerate() {
            if mask >> i & 1 == 1 {
                lower.push(x);
            } else {
                upper.push(x);
            }
        }
        lower.push(last);
        upper.push(last);
        let mut signs: Vec<(Tri, i8)> = lower.windows(3).map(|w| ((w[0], w[1], w[2]), 1)).collect();
        signs.extend(upper.windows(3).map(|w| ((w[0], w[1], w[2]), -1)));
        // A chain with one middle point gives a single triple whose sign alone
        // determines the side; with an empty lower chain the cap needs at
        // least one triple, which the loop above already provides.
        let mut cycle = lower.clone();
        cycle.extend(upper[1..upper.len() - 1].iter().rev());
        out.push(ConvexCase { signs, cycle });
    }
    out
}

fn sorted3(a: usize, b: usize, c: usize) -> Tri {
    let mut t = [a, b, c];
    t.sort_unstable();
    (t[0], t[1], t[2])
}

/// Fan triangulation from the first vertex of a convex cycle.
pub(crate) fn fan(cycle: &[usize]) -> Vec<Tri> {
    (1..cycle.len() - 1).map(|i| sorted3(cycle[0], cycle[i], cycle[i + 1])).collect()
}

/// All vectors q with 0 <= q_i <= caps_i summing to `total`.
pub(crate) fn splits(total: usize, caps: &[usize]) -> Vec<Vec<usize>> {
    fn go(i: usize, left: usize, caps: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == caps.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let rest: usize = caps[i + 1..].iter().sum();
        let lo = left.saturating_sub(rest);
        for q in lo..=caps[i].min(left) {
            cur.push(q);
            go(i + 1, left - q, caps, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, total, caps, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: usize = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_points_without_constraints() {
        let spec = ProblemSpec::points(4, vec![]);
        let e = build_cnf(&spec).unwrap();
        assert_eq!(e.formula.clauses.len(), 8 + 3);
        assert_eq!(e.formula.clauses.iter().filter(|c| c.len() == 1).count(), 3);
        let e = build_cnf(&spec.clone().with_sb(false)).unwrap();
        assert_eq!(e.formula.clauses.len(), 8);
    }

    #[test]
    fn splits_respect_caps() {
        assert_eq!(splits(2, &[1, 5]), vec![vec![0, 2], vec![1, 1]]);
        assert_eq!(splits(3, &[1, 1]), Vec::<Vec<usize>>::new());
        assert_eq!(splits(0, &[0, 0, 0]), vec![vec![0, 0, 0]]);
    }

    #[test]
    fn convex_cases_of_four_points_match_cup_cap_split() {
        let cases = convex_cases(&[0, 1, 2, 3]);
        assert_eq!(cases.len(), 4);
        let cyc: Vec<Vec<usize>> = cases.iter().map(|c| c.cycle.clone()).collect();
        assert!(cyc.contains(&vec![0, 1, 2, 3]));
        assert!(cyc.contains(&vec![0, 3, 2, 1]));
        assert!(cyc.contains(&vec![0, 1, 3, 2]));
        assert!(cyc.contains(&vec![0, 2, 3, 1]));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(20, 3), 1140);
        assert_eq!(binomial(3, 5), 0);
    }
}
