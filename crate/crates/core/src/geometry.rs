//! Exact geometric kernel on integer point sets.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spec::{ColoringMode, ColoringRef, Kind, ProblemSpec};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: BigInt,
    pub y: BigInt,
    pub color: Option<usize>,
}

impl Point {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        Point { x: x.into(), y: y.into(), color: None }
    }

    pub fn colored(x: impl Into<BigInt>, y: impl Into<BigInt>, color: usize) -> Self {
        Point { x: x.into(), y: y.into(), color: Some(color) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PointSet {
    pub points: Vec<Point>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Self {
        PointSet { points }
    }

    pub fn from_xy(coords: &[(i64, i64)]) -> Self {
        PointSet::new(coords.iter().map(|&(x, y)| Point::new(x, y)).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        self.points.windows(2).all(|w| w[0].x < w[1].x)
    }

    pub fn xs(&self) -> Vec<BigInt> {
        self.points.iter().map(|p| p.x.clone()).collect()
    }

    /// Point colors, if every point carries one.
    pub fn coloring(&self) -> Option<crate::spec::Coloring> {
        self.points.iter().map(|p| p.color).collect::<Option<Vec<_>>>().map(crate::spec::Coloring)
    }

    /// First collinear triple in lexicographic order, if any.
    pub fn collinear_triple(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if orient(&self.points[a], &self.points[b], &self.points[c]) == 0 {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }
}

/// Random canonical point set in general position: distinct x drawn from
/// `-half_width..=half_width`, arbitrary y in the same range.
pub fn random_canonical<R: rand::Rng + ?Sized>(n: usize, half_width: i64, rng: &mut R) -> PointSet {
    assert!(2 * half_width + 1 >= n as i64, "box too small for {n} distinct abscissae");
    loop {
        let mut xs = rand::seq::index::sample(rng, (2 * half_width + 1) as usize, n).into_vec();
        xs.sort_unstable();
        let ps = PointSet::new(
            xs.into_iter()
                .map(|x| Point::new(x as i64 - half_width, rng.gen_range(-half_width..=half_width)))
                .collect(),
        );
        if ps.collinear_triple().is_none() {
            return ps;
        }
    }
}

/// Sign of the determinant |q-p, r-p|: +1 for a counter-clockwise turn.
pub fn orient(p: &Point, q: &Point, r: &Point) -> i8 {
    if let Some(s) = orient_small(p, q, r) {
        return s;
    }
    let d = (&q.x - &p.x) * (&r.y - &p.y) - (&q.y - &p.y) * (&r.x - &p.x);
    sign(&d)
}

fn orient_small(p: &Point, q: &Point, r: &Point) -> Option<i8> {
    let px = p.x.to_i64()? as i128;
    let py = p.y.to_i64()? as i128;
    let qx = q.x.to_i64()? as i128;
    let qy = q.y.to_i64()? as i128;
    let rx = r.x.to_i64()? as i128;
    let ry = r.y.to_i64()? as i128;
    let l = (qx - px).checked_mul(ry - py)?;
    let m = (qy - py).checked_mul(rx - px)?;
    Some(match l.cmp(&m) {
        std::cmp::Ordering::Greater => 1,
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
    })
}

fn sign(d: &BigInt) -> i8 {
    if d.is_zero() {
        0
    } else if d.is_positive() {
        1
    } else {
        -1
    }
}

/// Order-type-equivalent copy with strictly increasing x-coordinates.
///
/// Returns the new set and the permutation (`perm[i]` = original index of new point `i`).
/// An already canonical set is returned unchanged.
pub fn relabel(ps: &PointSet) -> Result<(PointSet, Vec<usize>)> {
    if let Some((a, b, c)) = ps.collinear_triple() {
        return Err(Error::CollinearInput(a, b, c));
    }
    if ps.is_canonical() {
        return Ok((ps.clone(), (0..ps.len()).collect()));
    }
    // Shear (x, y) -> (Kx + y, y) with K larger than every y-difference; the
    // determinant is K > 0 and points sharing an x get distinct new x.
    let (ymin, ymax) = match ps.points.iter().map(|p| &p.y).minmax().into_option() {
        Some((lo, hi)) => (lo.clone(), hi.clone()),
        None => return Ok((ps.clone(), vec![])),
    };
    let k = ymax - ymin + 1;
    let mut sheared: Vec<(usize, Point)> = ps
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let x = &k * &p.x + &p.y;
            (i, Point { x, y: p.y.clone(), color: p.color })
        })
        .collect();
    sheared.sort_by(|a, b| a.1.x.cmp(&b.1.x));
    let perm = sheared.iter().map(|(i, _)| *i).collect();
    let out = PointSet::new(sheared.into_iter().map(|(_, p)| p).collect());
    debug_assert!(out.is_canonical());
    Ok((out, perm))
}

/// Point set with a memoized orientation table. Construction fails on
/// collinear triples.
pub struct Prepared<'a> {
    ps: &'a PointSet,
    n: usize,
    table: Vec<i8>,
    lex: Vec<usize>,
}

impl<'a> Prepared<'a> {
    pub fn new(ps: &'a PointSet) -> Result<Self> {
        let n = ps.len();
        let mut table = vec![0i8; n * n * n];
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let s = orient(&ps.points[a], &ps.points[b], &ps.points[c]);
                    if s == 0 {
                        return Err(Error::CollinearInput(a, b, c));
                    }
                    for (i, j, k, t) in
                        [(a, b, c, s), (b, c, a, s), (c, a, b, s), (b, a, c, -s), (a, c, b, -s), (c, b, a, -s)]
                    {
                        table[(i * n + j) * n + k] = t;
                    }
                }
            }
        }
        let mut lex: Vec<usize> = (0..n).collect();
        lex.sort_by(|&i, &j| {
            let (p, q) = (&ps.points[i], &ps.points[j]);
            (&p.x, &p.y).cmp(&(&q.x, &q.y))
        });
        let mut rank = vec![0; n];
        for (r, &i) in lex.iter().enumerate() {
            rank[i] = r;
        }
        Ok(Prepared { ps, n, table, lex: rank })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn point_set(&self) -> &PointSet {
        self.ps
    }

    #[inline]
    pub fn orient(&self, a: usize, b: usize, c: usize) -> i8 {
        self.table[(a * self.n + b) * self.n + c]
    }

    /// Counter-clockwise cyclic order of `subset` if it is in convex position.
    ///
    /// The subset is sorted by (x, y); the points below the line through the
    /// extreme points must form a cup and those above a cap.
    pub fn convex_order(&self, subset: &[usize]) -> Option<Vec<usize>> {
        if subset.len() < 3 {
            return Some(subset.to_vec());
        }
        let mut s = subset.to_vec();
        s.sort_by_key(|&i| self.lex[i]);
        let (first, last) = (s[0], s[s.len() - 1]);
        let mut lower = vec![first];
        let mut upper = vec![first];
        for &v in &s[1..s.len() - 1] {
            if self.orient(first, v, last) > 0 {
                lower.push(v);
            } else {
                upper.push(v);
            }
        }
        lower.push(last);
        upper.push(last);
        let cup = lower.windows(3).all(|w| self.orient(w[0], w[1], w[2]) > 0);
        let cap = upper.windows(3).all(|w| self.orient(w[0], w[1], w[2]) < 0);
        if !(cup && cap) {
            return None;
        }
        let mut order = lower;
        order.extend(upper[1..upper.len() - 1].iter().rev());
        Some(order)
    }

    /// Strictly inside a convex polygon given in counter-clockwise order.
    pub fn inside_convex(&self, ccw: &[usize], p: usize) -> bool {
        (0..ccw.len()).all(|i| self.orient(ccw[i], ccw[(i + 1) % ccw.len()], p) > 0)
    }

    /// Points strictly inside a convex polygon given in counter-clockwise order.
    pub fn count_inside_convex(&self, ccw: &[usize]) -> usize {
        (0..self.n).filter(|p| !ccw.contains(p) && self.inside_convex(ccw, *p)).count()
    }

    /// Even-odd test for a simple polygon, exact on integer coordinates.
    pub fn inside_polygon(&self, poly: &[usize], p: usize) -> bool {
        let pts = &self.ps.points;
        let py = &pts[p].y;
        let mut inside = false;
        for i in 0..poly.len() {
            let (u, v) = (poly[i], poly[(i + 1) % poly.len()]);
            let (uy, vy) = (&pts[u].y, &pts[v].y);
            if (uy > py) != (vy > py) {
                // The edge straddles the horizontal through p; it crosses the
                // rightward ray iff p lies on the inner side of the edge.
                let s = self.orient(u, v, p);
                if (vy > uy && s > 0) || (vy < uy && s < 0) {
                    inside = !inside;
                }
            }
        }
        inside
    }

    fn segments_cross(&self, a: usize, b: usize, c: usize, d: usize) -> bool {
        self.orient(a, b, c) != self.orient(a, b, d) && self.orient(c, d, a) != self.orient(c, d, b)
    }

    /// The simple polygons (as vertex cycles) spanned by 4 points.
    pub fn simple_quadrilaterals(&self, q: [usize; 4]) -> Vec<[usize; 4]> {
        let [a, b, c, d] = q;
        [[a, b, c, d], [a, b, d, c], [a, c, b, d]]
            .into_iter()
            .filter(|&[w, x, y, z]| !self.segments_cross(w, x, y, z) && !self.segments_cross(x, y, z, w))
            .collect()
    }
}

/// Count of points strictly inside the convex hull of `hull_vertices`.
pub fn count_interior(ps: &PointSet, hull_vertices: &[usize]) -> Result<usize> {
    for &v in hull_vertices {
        if v >= ps.len() {
            return Err(Error::IndexOutOfRange(v, ps.len()));
        }
    }
    let prep = Prepared::new(ps)?;
    let ccw = prep.convex_order(hull_vertices).ok_or(Error::NotConvexPosition)?;
    Ok(prep.count_inside_convex(&ccw))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ForbiddenStructure {
    /// Constraint tag (see [`Kind::tag`]).
    pub kind: String,
    pub vertices: Vec<usize>,
    pub color: usize,
    pub interior_count: usize,
}

/// Limits shared by both the geometric and the abstract finders.
pub(crate) fn within(limit: &Option<usize>, count: usize) -> bool {
    limit.map_or(true, |k| count <= k)
}

/// All violations of `spec` in the point set.
pub fn find_forbidden(ps: &PointSet, coloring: ColoringRef<'_>, spec: &ProblemSpec) -> Result<Vec<ForbiddenStructure>> {
    check_coloring(ps.len(), coloring, spec)?;
    let prep = Prepared::new(ps)?;
    let mut out = Vec::new();
    for c in &spec.constraints {
        let members: Vec<usize> = match coloring {
            ColoringRef::Points(col) => (0..ps.len()).filter(|&a| col.of(a) == c.color).collect(),
            ColoringRef::Edges(_) => (0..ps.len()).collect(),
        };
        for sub in members.iter().copied().combinations(c.kind.arity()) {
            if let ColoringRef::Edges(ec) = coloring {
                if !edges_mono(&prep, &sub, ec, c.color, &c.kind) {
                    continue;
                }
            }
            for count in structure_counts(&prep, &sub, &c.kind) {
                out.push(ForbiddenStructure {
                    kind: c.kind.tag(),
                    vertices: sub.clone(),
                    color: c.color,
                    interior_count: count,
                });
            }
        }
    }
    Ok(out)
}

fn edges_mono(prep: &Prepared<'_>, sub: &[usize], ec: &crate::spec::EdgeColoring, color: usize, kind: &Kind) -> bool {
    match kind {
        Kind::RamseyTriangle { .. } => {
            ec.get(sub[0], sub[1]) == color && ec.get(sub[0], sub[2]) == color && ec.get(sub[1], sub[2]) == color
        }
        _ => match prep.convex_order(sub) {
            Some(cyc) => (0..cyc.len()).all(|i| ec.get(cyc[i], cyc[(i + 1) % cyc.len()]) == color),
            None => false,
        },
    }
}

/// Interior counts of the violations formed by `sub` (empty if it is fine).
/// Only hex-sub can report more than one (one per offending quadrilateral).
fn structure_counts(prep: &Prepared<'_>, sub: &[usize], kind: &Kind) -> Vec<usize> {
    let convex_count = || prep.convex_order(sub).map(|ccw| prep.count_inside_convex(&ccw));
    match kind {
        Kind::Pair => vec![0],
        Kind::Triangle { limit } | Kind::RamseyTriangle { limit } => {
            let ccw = prep.convex_order(sub).expect("triangles are convex");
            let k = prep.count_inside_convex(&ccw);
            if within(limit, k) {
                vec![k]
            } else {
                vec![]
            }
        }
        Kind::Convex { limit, .. } | Kind::RamseyConvex { limit, .. } => match convex_count() {
            Some(k) if within(limit, k) => vec![k],
            _ => vec![],
        },
        Kind::NonConvex4 { limit } => {
            let q = [sub[0], sub[1], sub[2], sub[3]];
            let best = prep
                .simple_quadrilaterals(q)
                .into_iter()
                .map(|poly| (0..prep.n()).filter(|p| !q.contains(p) && prep.inside_polygon(&poly, *p)).count())
                .min()
                .expect("4 points in general position span a simple quadrilateral");
            if within(limit, best) {
                vec![best]
            } else {
                vec![]
            }
        }
        Kind::Island4 { limit } => {
            let hull = hull_of(prep, sub);
            let k = (0..prep.n()).filter(|p| !sub.contains(p) && prep.inside_convex(&hull, *p)).count();
            if within(limit, k) {
                vec![k]
            } else {
                vec![]
            }
        }
        Kind::HexEx { interior } => match convex_count() {
            Some(k) if interior.contains(&k) => vec![k],
            _ => vec![],
        },
        Kind::HexSub { q } => {
            let Some(ccw) = prep.convex_order(sub) else {
                return vec![];
            };
            let mut hits = Vec::new();
            for i in 0..3 {
                // Drop the opposite vertices i and i+3.
                let quad: Vec<usize> = (0..6).filter(|&j| j != i && j != i + 3).map(|j| ccw[j]).collect();
                let k = prep.count_inside_convex(&quad);
                if k == 0 || k == *q {
                    hits.push(k);
                }
            }
            if hits.is_empty() {
                vec![]
            } else {
                vec![*hits.iter().min().unwrap()]
            }
        }
    }
}

/// Counter-clockwise convex hull (Andrew's monotone chain).
fn hull_of(prep: &Prepared<'_>, sub: &[usize]) -> Vec<usize> {
    let mut s = sub.to_vec();
    s.sort_by_key(|&i| prep.lex[i]);
    let mut lower: Vec<usize> = Vec::new();
    for &p in &s {
        while lower.len() >= 2 && prep.orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &p in s.iter().rev() {
        while upper.len() >= 2 && prep.orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

pub(crate) fn check_coloring(n: usize, coloring: ColoringRef<'_>, spec: &ProblemSpec) -> Result<()> {
    match (coloring, spec.mode) {
        (ColoringRef::Points(c), ColoringMode::Points) => {
            if c.len() != n {
                return Err(Error::SpecMismatch(format!("{} colors for {n} points", c.len())));
            }
            if let Some(bad) = c.0.iter().find(|&&x| x >= spec.colors.max(1)) {
                return Err(Error::SpecMismatch(format!("color {} out of range", bad + 1)));
            }
            Ok(())
        }
        (ColoringRef::Edges(e), ColoringMode::Edges) => {
            if e.n() != n {
                return Err(Error::SpecMismatch(format!("edge coloring for {} points, set has {n}", e.n())));
            }
            Ok(())
        }
        (ColoringRef::Points(_), ColoringMode::Edges) => {
            Err(Error::SpecMismatch("point coloring given for an edge-colored spec".into()))
        }
        (ColoringRef::Edges(_), ColoringMode::Points) => {
            Err(Error::SpecMismatch("edge coloring given for a point-colored spec".into()))
        }
    }
}

/// Interior count -> number of convex hexagons with that count.
pub fn hexagon_census(ps: &PointSet) -> Result<BTreeMap<usize, usize>> {
    let prep = Prepared::new(ps)?;
    let mut census = BTreeMap::new();
    for sub in (0..ps.len()).combinations(6) {
        if let Some(ccw) = prep.convex_order(&sub) {
            *census.entry(prep.count_inside_convex(&ccw)).or_insert(0) += 1;
        }
    }
    Ok(census)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Violation {
    GeneralPosition { triple: [usize; 3] },
    Coloring { message: String },
    Forbidden(ForbiddenStructure),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub valid: bool,
    pub n: usize,
    pub violations: Vec<Violation>,
    /// Hexagon census (interior count -> number of hexagons); absent for invalid sets.
    pub census: Option<BTreeMap<usize, usize>>,
}

/// Check a point set against a spec. Failures are reported, never raised.
pub fn verify(ps: &PointSet, coloring: ColoringRef<'_>, spec: &ProblemSpec) -> VerificationReport {
    let fail = |v: Violation| VerificationReport { valid: false, n: ps.len(), violations: vec![v], census: None };
    if let Some((a, b, c)) = ps.collinear_triple() {
        return fail(Violation::GeneralPosition { triple: [a, b, c] });
    }
    if spec.n != ps.len() {
        return fail(Violation::Coloring { message: format!("spec expects {} points, set has {}", spec.n, ps.len()) });
    }
    match find_forbidden(ps, coloring, spec) {
        Ok(found) => VerificationReport {
            valid: found.is_empty(),
            n: ps.len(),
            violations: found.into_iter().map(Violation::Forbidden).collect(),
            census: hexagon_census(ps).ok(),
        },
        Err(Error::CollinearInput(a, b, c)) => fail(Violation::GeneralPosition { triple: [a, b, c] }),
        Err(e) => fail(Violation::Coloring { message: e.to_string() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{Coloring, Constraint};

    fn p(x: i64, y: i64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(orient(&p(0, 0), &p(1, 0), &p(0, 1)), 1);
        assert_eq!(orient(&p(0, 0), &p(1, 0), &p(2, 0)), 0);
        assert_eq!(orient(&p(0, 0), &p(1, 2), &p(2, 2)), -1);
    }

    #[test]
    fn orientation_big_path_matches_small_path() {
        let big = BigInt::from(1u64 << 62) * BigInt::from(1u64 << 40);
        let a = Point::new(big.clone(), BigInt::from(1));
        let b = Point::new(-big.clone(), BigInt::from(2));
        let c = Point::new(BigInt::from(0), big.clone());
        assert_eq!(orient(&a, &b, &c), -orient(&b, &a, &c));
        assert_eq!(orient(&p(3, 1), &p(-7, 2), &p(0, 9)), orient(&a, &b, &c));
    }

    #[test]
    fn count_interior_examples() {
        let ps = PointSet::from_xy(&[(0, 0), (4, 0), (0, 4), (1, 1), (5, 6)]);
        assert_eq!(count_interior(&ps, &[0, 1, 2]).unwrap(), 1);
        let ps = PointSet::from_xy(&[(0, 0), (4, 0), (0, 4)]);
        assert_eq!(count_interior(&ps, &[2, 0, 1]).unwrap(), 0);
        let ps = PointSet::from_xy(&[(0, 0), (4, 0), (0, 4), (1, 1)]);
        assert_eq!(count_interior(&ps, &[0, 1, 2, 3]), Err(Error::NotConvexPosition));
    }

    #[test]
    fn relabel_preserves_orientation() {
        let ps = PointSet::from_xy(&[(0, 0), (0, 3), (2, 1), (-1, 5)]);
        let (out, perm) = relabel(&ps).unwrap();
        assert!(out.is_canonical());
        for t in (0..4).combinations(3) {
            let (a, b, c) = (t[0], t[1], t[2]);
            assert_eq!(
                orient(&out.points[a], &out.points[b], &out.points[c]),
                orient(&ps.points[perm[a]], &ps.points[perm[b]], &ps.points[perm[c]])
            );
        }
        let sorted = PointSet::from_xy(&[(0, 0), (1, 1), (2, 0)]);
        assert_eq!(relabel(&sorted).unwrap(), (sorted.clone(), vec![0, 1, 2]));
    }

    #[test]
    fn hexagon_census_examples() {
        let hex = [(10, 0), (5, 9), (-5, 9), (-10, 0), (-5, -9), (5, -9)];
        let ps = PointSet::from_xy(&hex);
        assert_eq!(hexagon_census(&ps).unwrap(), BTreeMap::from([(0, 1)]));
        let mut with_center = hex.to_vec();
        with_center.push((1, 2));
        let ps = PointSet::from_xy(&with_center);
        assert_eq!(hexagon_census(&ps).unwrap(), BTreeMap::from([(1, 1)]));
    }

    #[test]
    fn nonconvex_quadrilateral_takes_best_polygon() {
        // (2,1) is inside triangle (0,0),(4,0),(2,4); the extra point (1,1)
        // lies in the left sub-triangle, so cutting that one off leaves an
        // empty quadrilateral.
        let ps = PointSet::from_xy(&[(0, 0), (2, 1), (2, 4), (4, 0), (1, 1)]);
        let prep = Prepared::new(&ps).unwrap();
        assert_eq!(prep.simple_quadrilaterals([0, 1, 2, 3]).len(), 3);
        let spec = ProblemSpec::points(5, vec![Constraint::new(0, Kind::NonConvex4 { limit: Some(0) })]);
        let col = Coloring(vec![0, 0, 0, 0, 1]);
        let found = find_forbidden(&ps, ColoringRef::Points(&col), &spec.with_colors(2)).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].vertices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn two_per_color_has_no_quadruple() {
        let ps = PointSet::from_xy(&[(0, 0), (1, 3), (2, 1), (3, 4)]);
        let spec = ProblemSpec::points(
            4,
            vec![
                Constraint::new(0, Kind::NonConvex4 { limit: Some(0) }),
                Constraint::new(1, Kind::NonConvex4 { limit: Some(0) }),
            ],
        );
        let col = Coloring(vec![0, 1, 1, 0]);
        assert!(find_forbidden(&ps, ColoringRef::Points(&col), &spec).unwrap().is_empty());
    }

    #[test]
    fn verify_reports_collinearity() {
        let ps = PointSet::from_xy(&[(0, 0), (1, 1), (2, 2)]);
        let spec = ProblemSpec::points(3, vec![]);
        let col = Coloring::monochrome(3);
        let r = verify(&ps, ColoringRef::Points(&col), &spec);
        assert!(!r.valid);
        assert_eq!(r.violations, vec![Violation::GeneralPosition { triple: [0, 1, 2] }]);
    }

    #[test]
    fn mismatched_coloring_is_rejected() {
        let ps = PointSet::from_xy(&[(0, 0), (1, 3), (2, 1)]);
        let spec = ProblemSpec::edges(3, vec![Constraint::new(0, Kind::RamseyTriangle { limit: None })]).with_colors(2);
        let col = Coloring::monochrome(3);
        assert!(matches!(find_forbidden(&ps, ColoringRef::Points(&col), &spec), Err(Error::SpecMismatch(_))));
    }
}
