//! Monotone rank-3 signotopes: the abstract counterpart of x-sorted point sets.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::geometry::{orient, within, ForbiddenStructure, PointSet};
use crate::spec::{ColoringRef, HexagonRelaxation, Kind, ProblemSpec};

/// Default largest n accepted by [`enumerate`].
pub const ENUMERATION_CAP: usize = 9;

/// Colexicographic rank of the triple a < b < c.
#[inline]
pub fn triple_index(a: usize, b: usize, c: usize) -> usize {
    debug_assert!(a < b && b < c);
    c * (c - 1) * (c - 2) / 6 + b * (b - 1) / 2 + a
}

pub fn triple_count(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

/// All triples a < b < c < n in lexicographic order.
pub fn triples_lex(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::with_capacity(triple_count(n));
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push((a, b, c));
            }
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Signotope {
    n: usize,
    signs: Vec<i8>,
}

impl fmt::Debug for Signotope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String =
            triples_lex(self.n).into_iter().map(|(a, b, c)| if self.sign(a, b, c) > 0 { '+' } else { '-' }).collect();
        write!(f, "Signotope(n={}, {})", self.n, s)
    }
}

impl Signotope {
    /// Sign map with every triple set to `+1`.
    pub fn all_plus(n: usize) -> Self {
        Signotope { n, signs: vec![1; triple_count(n)] }
    }

    /// Build from a closure over sorted triples. Does not check the axioms.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> i8) -> Self {
        let mut s = Signotope::all_plus(n);
        for (a, b, c) in triples_lex(n) {
            s.set(a, b, c, f(a, b, c));
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sign of the sorted triple a < b < c.
    #[inline]
    pub fn sign(&self, a: usize, b: usize, c: usize) -> i8 {
        self.signs[triple_index(a, b, c)]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, s: i8) {
        debug_assert!(s == 1 || s == -1);
        self.signs[triple_index(a, b, c)] = s;
    }

    /// Orientation of an arbitrary ordered triple of distinct indices.
    pub fn orient(&self, a: usize, b: usize, c: usize) -> i8 {
        let mut t = [a, b, c];
        let mut parity = 1;
        for i in 0..3 {
            for j in 0..2 - i {
                if t[j] > t[j + 1] {
                    t.swap(j, j + 1);
                    parity = -parity;
                }
            }
        }
        parity * self.sign(t[0], t[1], t[2])
    }

    /// Mirror image under x -> -x (reverses the order and all orientations
    /// of reversed triples), used for axial symmetry.
    pub fn mirrored_index(n: usize, a: usize, b: usize, c: usize) -> (usize, usize, usize) {
        (n - 1 - c, n - 1 - b, n - 1 - a)
    }
}

/// Whether the sign sequence of each 4-tuple changes sign at most once.
pub fn axioms_ok(s: &Signotope) -> bool {
    (0..s.n).combinations(4).all(|q| {
        let (a, b, c, d) = (q[0], q[1], q[2], q[3]);
        quad_ok(s.sign(a, b, c), s.sign(a, b, d), s.sign(a, c, d), s.sign(b, c, d))
    })
}

#[inline]
fn quad_ok(s1: i8, s2: i8, s3: i8, s4: i8) -> bool {
    let changes = (s1 != s2) as u8 + (s2 != s3) as u8 + (s3 != s4) as u8;
    changes <= 1
}

/// Order type of a canonical point set.
pub fn from_points(ps: &PointSet) -> Result<Signotope> {
    if !ps.is_canonical() {
        return Err(Error::NotCanonical);
    }
    let mut s = Signotope::all_plus(ps.len());
    for (a, b, c) in triples_lex(ps.len()) {
        let o = orient(&ps.points[a], &ps.points[b], &ps.points[c]);
        if o == 0 {
            return Err(Error::CollinearInput(a, b, c));
        }
        s.set(a, b, c, o);
    }
    Ok(s)
}

/// Whether `x` lies inside triangle {a, b, c} (indices in any order).
pub fn interior(s: &Signotope, a: usize, b: usize, c: usize, x: usize) -> Result<bool> {
    for i in [a, b, c, x] {
        if i >= s.n {
            return Err(Error::IndexOutOfRange(i, s.n));
        }
    }
    let mut t = [a, b, c];
    t.sort_unstable();
    Ok(inside(s, t[0], t[1], t[2], x))
}

/// Interior test for sorted a < b < c. Only points strictly between a and c
/// in x-order can be inside; such a point is inside iff it sits on the other
/// side of the middle edge than of the long edge.
#[inline]
pub(crate) fn inside(s: &Signotope, a: usize, b: usize, c: usize, x: usize) -> bool {
    if x <= a || x >= c || x == b {
        false
    } else if x < b {
        s.sign(a, x, b) != s.sign(a, x, c)
    } else {
        s.sign(b, x, c) != s.sign(a, x, c)
    }
}

/// Points inside the sorted triangle a < b < c.
pub fn count_interior(s: &Signotope, a: usize, b: usize, c: usize) -> usize {
    (a + 1..c).filter(|&x| inside(s, a, b, c, x)).count()
}

/// Counter-clockwise cyclic order of a sorted subset if it is in convex
/// position: the points below the line through the extremes must form a cup
/// and the rest a cap.
pub fn convex_order(s: &Signotope, sorted: &[usize]) -> Option<Vec<usize>> {
    let k = sorted.len();
    if k < 3 {
        return Some(sorted.to_vec());
    }
    let (first, last) = (sorted[0], sorted[k - 1]);
    let mut lower = vec![first];
    let mut upper = vec![first];
    for &v in &sorted[1..k - 1] {
        if s.sign(first, v, last) > 0 {
            lower.push(v);
        } else {
            upper.push(v);
        }
    }
    lower.push(last);
    upper.push(last);
    let cup = lower.windows(3).all(|w| s.sign(w[0], w[1], w[2]) > 0);
    let cap = upper.windows(3).all(|w| s.sign(w[0], w[1], w[2]) < 0);
    if !(cup && cap) {
        return None;
    }
    let mut order = lower;
    order.extend(upper[1..upper.len() - 1].iter().rev());
    Some(order)
}

fn sorted3(a: usize, b: usize, c: usize) -> (usize, usize, usize) {
    let mut t = [a, b, c];
    t.sort_unstable();
    (t[0], t[1], t[2])
}

/// Points inside a convex polygon in cyclic order, via the fan from its first vertex.
pub fn count_inside_polygon(s: &Signotope, cyc: &[usize]) -> usize {
    (1..cyc.len() - 1)
        .map(|i| {
            let (a, b, c) = sorted3(cyc[0], cyc[i], cyc[i + 1]);
            count_interior(s, a, b, c)
        })
        .sum()
}

/// Base triangle used by the hexagon relaxation. `chain` is the cyclic order
/// produced by [`convex_order`] of the sorted hexagon `v`; the case is
/// identified by which middle vertices lie on the lower chain.
pub fn hexagon_base_triangle(v: &[usize], cyc: &[usize]) -> (usize, usize, usize) {
    debug_assert_eq!(v.len(), 6);
    let lower: Vec<usize> =
        cyc.iter().take_while(|&&x| x != v[5]).skip(1).map(|&x| v.iter().position(|&y| y == x).unwrap()).collect();
    // Middle vertices B..E are positions 1..4. The table is keyed by the
    // side that holds B; the complement side is handled by symmetry.
    let holds_b: Vec<usize> = if lower.contains(&1) { lower } else { (1..5).filter(|i| !lower.contains(i)).collect() };
    let t = match holds_b.as_slice() {
        [1, 2, 3, 4] | [1, 2] => (0, 2, 4),
        [1, 2, 3] | [1, 2, 4] => (1, 3, 4),
        [1, 3, 4] | [1] => (1, 2, 4),
        [1, 3] | [1, 4] => (0, 3, 4),
        other => unreachable!("unexpected hexagon case {other:?}"),
    };
    (v[t.0], v[t.1], v[t.2])
}

/// Abstract analogue of [`crate::geometry::find_forbidden`].
pub fn find_forbidden_abstract(
    s: &Signotope,
    coloring: ColoringRef<'_>,
    spec: &ProblemSpec,
) -> Result<Vec<ForbiddenStructure>> {
    crate::geometry::check_coloring(s.n, coloring, spec)?;
    let mut out = Vec::new();
    for c in &spec.constraints {
        let members: Vec<usize> = match coloring {
            ColoringRef::Points(col) => (0..s.n).filter(|&a| col.of(a) == c.color).collect(),
            ColoringRef::Edges(_) => (0..s.n).collect(),
        };
        for sub in members.iter().copied().combinations(c.kind.arity()) {
            if let ColoringRef::Edges(ec) = coloring {
                let mono = match c.kind {
                    Kind::RamseyTriangle { .. } => {
                        sub.iter().tuple_combinations().all(|(&x, &y)| ec.get(x, y) == c.color)
                    }
                    _ => match convex_order(s, &sub) {
                        Some(cyc) => (0..cyc.len()).all(|i| ec.get(cyc[i], cyc[(i + 1) % cyc.len()]) == c.color),
                        None => false,
                    },
                };
                if !mono {
                    continue;
                }
            }
            if let Some(count) = abstract_count(s, &sub, &c.kind, spec.hexagon_relaxation) {
                out.push(ForbiddenStructure {
                    kind: c.kind.tag(),
                    vertices: sub,
                    color: c.color,
                    interior_count: count,
                });
            }
        }
    }
    Ok(out)
}

/// Interior count of the violation formed by the sorted subset, if any.
fn abstract_count(s: &Signotope, v: &[usize], kind: &Kind, relax: HexagonRelaxation) -> Option<usize> {
    let keep = |limit: &Option<usize>, k: usize| within(limit, k).then_some(k);
    match kind {
        Kind::Pair => Some(0),
        Kind::Triangle { limit } | Kind::RamseyTriangle { limit } => keep(limit, count_interior(s, v[0], v[1], v[2])),
        Kind::Convex { size: 6, limit } if relax == HexagonRelaxation::BaseTriangle && limit.is_some() => {
            let cyc = convex_order(s, v)?;
            let (a, b, c) = hexagon_base_triangle(v, &cyc);
            keep(limit, count_interior(s, a, b, c))
        }
        Kind::Convex { limit, .. } | Kind::RamseyConvex { limit, .. } => {
            let cyc = convex_order(s, v)?;
            keep(limit, count_inside_polygon(s, &cyc))
        }
        Kind::NonConvex4 { limit } => {
            let (a, b, c, d) = (v[0], v[1], v[2], v[3]);
            match convex_order(s, v) {
                Some(cyc) => keep(limit, count_inside_polygon(s, &cyc)),
                None => {
                    // The inner point splits the hull triangle into three;
                    // the best simple quadrilateral drops the fullest one.
                    let parts = if s.sign(a, b, d) != s.sign(a, b, c) {
                        [(a, b, c), (a, b, d), (b, c, d)]
                    } else {
                        [(a, b, c), (a, c, d), (b, c, d)]
                    };
                    let counts = parts.map(|(x, y, z)| count_interior(s, x, y, z));
                    let total: usize = counts.iter().sum();
                    keep(limit, total - counts.iter().max().unwrap())
                }
            }
        }
        Kind::Island4 { limit } => {
            let (a, b, c, d) = (v[0], v[1], v[2], v[3]);
            match convex_order(s, v) {
                Some(cyc) => keep(limit, count_inside_polygon(s, &cyc)),
                // Non-convex: the hull is a triangle that also holds the inner chosen point.
                None if s.sign(a, b, d) != s.sign(a, b, c) => keep(limit, count_interior(s, a, c, d) - 1),
                None => keep(limit, count_interior(s, a, b, d) - 1),
            }
        }
        Kind::HexEx { interior } => {
            let cyc = convex_order(s, v)?;
            let k = if relax == HexagonRelaxation::BaseTriangle {
                let (a, b, c) = hexagon_base_triangle(v, &cyc);
                count_interior(s, a, b, c)
            } else {
                count_inside_polygon(s, &cyc)
            };
            interior.contains(&k).then_some(k)
        }
        Kind::HexSub { q } => {
            let cyc = convex_order(s, v)?;
            (0..3)
                .filter_map(|i| {
                    let quad: Vec<usize> = (0..6).filter(|&j| j != i && j != i + 3).map(|j| cyc[j]).collect();
                    let k = count_inside_polygon(s, &quad);
                    (k == 0 || k == *q).then_some(k)
                })
                .min()
        }
    }
}

/// Depth-first enumeration of all signotopes on `n` elements, triples in
/// lexicographic order with `+1` tried before `-1`.
pub struct Enumerator {
    order: Vec<(usize, usize, usize)>,
    current: Signotope,
    /// Next sign to try at each depth: 1 = try +1, -1 = try -1, 0 = exhausted.
    next: Vec<i8>,
    depth: usize,
    sb: bool,
    started: bool,
}

impl Enumerator {
    fn new(n: usize, sb: bool) -> Self {
        let order = triples_lex(n);
        let m = order.len();
        Enumerator { order, current: Signotope::all_plus(n), next: vec![1; m + 1], depth: 0, sb, started: false }
    }

    fn consistent(&self, depth: usize) -> bool {
        let (b, c, d) = self.order[depth];
        let s = &self.current;
        if self.sb && b == 0 && s.sign(b, c, d) < 0 {
            return false;
        }
        // (b,c,d) is the last triple of every quadruple (a,b,c,d) with a < b.
        (0..b).all(|a| quad_ok(s.sign(a, b, c), s.sign(a, b, d), s.sign(a, c, d), s.sign(b, c, d)))
    }
}

impl Iterator for Enumerator {
    type Item = Signotope;

    fn next(&mut self) -> Option<Signotope> {
        let m = self.order.len();
        if !self.started {
            self.started = true;
            if m == 0 {
                self.depth = 0;
                self.next[0] = 0;
                return Some(self.current.clone());
            }
        } else if m == 0 {
            return None;
        } else {
            // Resume from the last leaf.
            self.depth = m - 1;
        }
        loop {
            let d = self.depth;
            let choice = self.next[d];
            if choice == 0 {
                // Exhausted at this depth: backtrack.
                self.next[d] = 1;
                if d == 0 {
                    self.next[0] = 0;
                    self.depth = 0;
                    // Leave a marker so that further calls return None.
                    self.order.clear();
                    self.order.shrink_to_fit();
                    return None;
                }
                self.depth -= 1;
                continue;
            }
            self.next[d] = if choice > 0 { -1 } else { 0 };
            let (a, b, c) = self.order[d];
            self.current.set(a, b, c, choice);
            if !self.consistent(d) {
                continue;
            }
            if d + 1 == m {
                return Some(self.current.clone());
            }
            self.depth += 1;
        }
    }
}

/// Every signotope on `n` elements (with σ(0,b,c)=+1 when `sb`), filtered.
pub fn enumerate(
    n: usize,
    sb: bool,
    predicate: impl FnMut(&Signotope) -> bool,
) -> Result<impl Iterator<Item = Signotope>> {
    enumerate_with_cap(n, sb, ENUMERATION_CAP, predicate)
}

pub fn enumerate_with_cap(
    n: usize,
    sb: bool,
    cap: usize,
    mut predicate: impl FnMut(&Signotope) -> bool,
) -> Result<impl Iterator<Item = Signotope>> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    Ok(Enumerator::new(n, sb).filter(move |s| predicate(s)))
}

impl fmt::Display for Signotope {
    /// Text format: `n=<n>` then one `a b c ±1` line per triple, lexicographic.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        for (a, b, c) in triples_lex(self.n) {
            let s = if self.sign(a, b, c) > 0 { "+1" } else { "-1" };
            writeln!(f, "{a} {b} {c} {s}")?;
        }
        Ok(())
    }
}

impl FromStr for Signotope {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty signotope text".into()))?;
        let n: usize = header
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad header '{header}'")))?;
        let mut s = Signotope::all_plus(n);
        let mut seen = vec![false; triple_count(n)];
        for line in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Parse(format!("bad triple line '{line}'"));
            if f.len() != 4 {
                return Err(bad());
            }
            let idx: Vec<usize> = f[..3].iter().map(|x| x.parse().map_err(|_| bad())).collect::<Result<_>>()?;
            let (a, b, c) = (idx[0], idx[1], idx[2]);
            if !(a < b && b < c && c < n) {
                return Err(bad());
            }
            let sign = match f[3] {
                "+1" | "1" | "+" => 1,
                "-1" | "-" => -1,
                _ => return Err(bad()),
            };
            s.set(a, b, c, sign);
            seen[triple_index(a, b, c)] = true;
        }
        if seen.iter().any(|x| !x) {
            return Err(Error::Parse("signotope text does not cover every triple".into()));
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triple_index_is_a_bijection() {
        let n = 9;
        let mut seen = vec![false; triple_count(n)];
        for (a, b, c) in triples_lex(n) {
            let i = triple_index(a, b, c);
            assert!(!seen[i]);
            seen[i] = true;
        }
        assert!(seen.into_iter().all(|x| x));
    }

    #[test]
    fn axioms_on_four_elements() {
        assert!(axioms_ok(&Signotope::all_plus(4)));
        // Sequence (+,-,+,+) over (012, 013, 023, 123).
        let signs = [1, -1, 1, 1];
        let s = Signotope::from_fn(4, |a, b, c| {
            let pos = triples_lex(4).iter().position(|&t| t == (a, b, c)).unwrap();
            signs[pos]
        });
        assert!(!axioms_ok(&s));
        let passing = (0..16u32)
            .filter(|mask| {
                let s = Signotope::from_fn(4, |a, b, c| {
                    let pos = triples_lex(4).iter().position(|&t| t == (a, b, c)).unwrap();
                    if mask >> pos & 1 == 1 {
                        1
                    } else {
                        -1
                    }
                });
                axioms_ok(&s)
            })
            .count();
        assert_eq!(passing, 8);
    }

    #[test]
    fn four_cap_from_points() {
        let ps = PointSet::from_xy(&[(0, 0), (1, 2), (2, 2), (3, 0)]);
        let s = from_points(&ps).unwrap();
        assert!(triples_lex(4).into_iter().all(|(a, b, c)| s.sign(a, b, c) == -1));
        let ps = PointSet::from_xy(&[(0, 0), (1, 1), (2, 3)]);
        assert_eq!(from_points(&ps).unwrap().sign(0, 1, 2), 1);
        let ps = PointSet::from_xy(&[(1, 0), (0, 1), (2, 3)]);
        assert_eq!(from_points(&ps), Err(Error::NotCanonical));
    }

    #[test]
    fn interior_examples() {
        let ps = PointSet::from_xy(&[(0, 0), (1, 1), (2, 5), (3, 0)]);
        let s = from_points(&ps).unwrap();
        assert!(interior(&s, 0, 2, 3, 1).unwrap());
        assert!(!interior(&s, 1, 2, 3, 0).unwrap());
        assert_eq!(count_interior(&s, 0, 2, 3), 1);
        assert!(matches!(interior(&s, 0, 2, 3, 7), Err(Error::IndexOutOfRange(7, 4))));
    }

    #[test]
    fn enumeration_counts() {
        let counts: Vec<usize> = (3..=7).map(|n| enumerate(n, false, |_| true).unwrap().count()).collect();
        assert_eq!(counts, vec![2, 8, 62, 908, 24698]);
        assert_eq!(enumerate(0, false, |_| true).unwrap().count(), 1);
        assert!(matches!(enumerate(10, false, |_| true), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn enumeration_order_starts_with_all_plus() {
        let mut it = enumerate(5, false, |_| true).unwrap();
        assert_eq!(it.next().unwrap(), Signotope::all_plus(5));
    }

    #[test]
    fn symmetry_broken_enumeration_is_a_subset() {
        let all: std::collections::HashSet<Signotope> = enumerate(6, false, |_| true).unwrap().collect();
        let sb: Vec<Signotope> = enumerate(6, true, |_| true).unwrap().collect();
        assert!(!sb.is_empty());
        for s in &sb {
            assert!(all.contains(s));
            assert!((1..6).tuple_combinations().all(|(b, c)| s.sign(0, b, c) == 1));
        }
    }

    #[test]
    fn text_round_trip() {
        for s in enumerate(5, false, |_| true).unwrap().step_by(7) {
            let back: Signotope = s.to_string().parse().unwrap();
            assert_eq!(back, s);
        }
        assert!("n=3\n0 1 2 +1\n".parse::<Signotope>().is_ok());
        assert!("n=4\n0 1 2 +1\n".parse::<Signotope>().is_err());
    }
}
