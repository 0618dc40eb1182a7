use std::collections::HashMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::{convex_cases, fan, Builder, Cond, EncoderOptions, Encoding, Totalizer, Tri};
use crate::cnf::{Lit, SemVar};
use crate::error::{Error, Result};
use crate::signotope::{convex_order, count_inside_polygon, Signotope};
use crate::spec::ProblemSpec;

/// Largest n accepted by the cardinality encodings.
pub const CARDINALITY_CAP: usize = 16;

/// Structures whose number can be bounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Counted {
    EmptyTriangle,
    EmptyConvex4,
    EmptyConvex5,
}

impl Counted {
    pub fn size(self) -> usize {
        match self {
            Counted::EmptyTriangle => 3,
            Counted::EmptyConvex4 => 4,
            Counted::EmptyConvex5 => 5,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Counted::EmptyTriangle => "p3",
            Counted::EmptyConvex4 => "p4",
            Counted::EmptyConvex5 => "p5",
        }
    }

    /// Number of such structures in a signotope.
    pub fn count(self, s: &Signotope) -> usize {
        (0..s.n())
            .combinations(self.size())
            .filter(|v| convex_order(s, v).is_some_and(|cyc| count_inside_polygon(s, &cyc) == 0))
            .count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CountDirection {
    AtMost,
    MoreThan,
}

/// Exact counter over the indicators of one structure kind.
#[derive(Clone, Debug)]
pub struct StructureCount {
    pub kind: Counted,
    pub indicators: Vec<Lit>,
    pub counter: Totalizer,
}

impl StructureCount {
    /// Condition expressing the bound. Fails when the counter was built with
    /// too small a cap to express it.
    pub fn bound(&self, m: usize, dir: CountDirection) -> Result<Cond> {
        let total = self.indicators.len();
        let cap = self.counter.outputs.len();
        let need = |j: usize| -> Result<Lit> { self.counter.at_least(j).ok_or(Error::CapExceeded { n: j, cap }) };
        match dir {
            CountDirection::AtMost if m >= total => Ok(Cond::True),
            CountDirection::AtMost => Ok(Cond::Lit(!need(m + 1)?)),
            CountDirection::MoreThan if m >= total => Ok(Cond::False),
            CountDirection::MoreThan => Ok(Cond::Lit(need(m + 1)?)),
        }
    }
}

/// Base formula on `n` points (no coloring constraints) with an exact counter
/// for every requested kind, each holding outputs up to `caps[i]`.
pub fn cardinality_encoding(n: usize, sb: bool, kinds: &[(Counted, usize)]) -> Result<(Encoding, Vec<StructureCount>)> {
    if n > CARDINALITY_CAP {
        return Err(Error::CapExceeded { n, cap: CARDINALITY_CAP });
    }
    let spec = ProblemSpec::points(n, vec![]).with_sb(sb);
    let mut b = Builder::new(&spec, EncoderOptions::default());
    b.base();
    let mut empty: HashMap<Tri, Lit> = HashMap::new();
    let mut counts = Vec::new();
    for &(kind, cap) in kinds {
        let mut indicators = Vec::new();
        for v in (0..n).combinations(kind.size()) {
            let cases = if kind.size() == 3 {
                vec![(vec![], vec![(v[0], v[1], v[2])])]
            } else {
                convex_cases(&v).into_iter().map(|c| (c.signs, fan(&c.cycle))).collect()
            };
            for (case, (signs, tris)) in cases.into_iter().enumerate() {
                let mut parts: Vec<Lit> = signs.iter().map(|&((a, bb, c), s)| b.l(a, bb, c).with(s > 0)).collect();
                for t in tris {
                    parts.push(empty_triangle(&mut b, &mut empty, t));
                }
                let ind = Lit::pos(
                    b.f.var(SemVar::Indicator { kind: format!("{}#{case}", kind.tag()), vertices: v.clone() }),
                );
                define_and(&mut b, ind, &parts);
                indicators.push(ind);
            }
        }
        let counter = Totalizer::build(&mut b.f, &indicators, cap, true, true);
        counts.push(StructureCount { kind, indicators, counter });
    }
    Ok((Encoding { formula: b.f, spec: spec.clone(), used_counters: true }, counts))
}

/// Formula on `n` points asserting `count(kind) <= m` or `> m`.
pub fn build_cardinality(n: usize, kind: Counted, m: usize, dir: CountDirection) -> Result<Encoding> {
    let (mut enc, counts) = cardinality_encoding(n, false, &[(kind, m + 1)])?;
    match counts[0].bound(m, dir)? {
        Cond::True => {}
        Cond::False => enc.formula.add_clause(vec![]),
        Cond::Lit(l) => enc.formula.add_clause(vec![l]),
    }
    Ok(enc)
}

fn empty_triangle(b: &mut Builder<'_>, cache: &mut HashMap<Tri, Lit>, t: Tri) -> Lit {
    if let Some(&l) = cache.get(&t) {
        return l;
    }
    let cand = Builder::candidates(t);
    let exts: Vec<Lit> = cand.iter().map(|&z| b.ext(t, z, true)).collect();
    let e = Lit::pos(b.f.var(SemVar::Indicator { kind: "empty".into(), vertices: vec![t.0, t.1, t.2] }));
    define_and(b, e, &exts);
    cache.insert(t, e);
    e
}

/// `out <=> AND(parts)`.
fn define_and(b: &mut Builder<'_>, out: Lit, parts: &[Lit]) {
    for &p in parts {
        b.clause(vec![!out, p]);
    }
    let mut c: Vec<Lit> = parts.iter().map(|&p| !p).collect();
    c.push(out);
    b.clause(c);
}
