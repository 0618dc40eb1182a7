use std::fmt::Write as _;

use num_traits::ToPrimitive;

use super::Engine;
use crate::encoder::build_cnf;
use crate::error::{Error, Result};
use crate::geometry::{relabel, verify, PointSet, Prepared, VerificationReport};
use crate::io::PointFile;
use crate::satcore::Status;
use crate::signotope::from_points;
use crate::spec::{Coloring, ColoringMode, ColoringRef, EdgeColoring, ProblemSpec};

/// Check a point file against `spec` (whose n is taken from the file).
pub fn verify_points(file: &PointFile, spec: &ProblemSpec) -> Result<VerificationReport> {
    let spec = spec.with_n(file.points.len());
    match spec.mode {
        ColoringMode::Points => {
            if spec.colors > 1 && file.points.coloring().is_none() {
                return Err(Error::SpecMismatch(format!(
                    "spec has {} colors but the points are uncolored",
                    spec.colors
                )));
            }
            let col = file.coloring();
            Ok(verify(&file.points, ColoringRef::Points(&col), &spec))
        }
        ColoringMode::Edges => {
            let ec = file
                .edges
                .as_ref()
                .ok_or_else(|| Error::SpecMismatch("edge-colored spec needs an edge coloring in the file".into()))?;
            Ok(verify(&file.points, ColoringRef::Edges(ec), &spec))
        }
    }
}

/// A coloring found for fixed coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FoundColoring {
    Points(Coloring),
    Edges(EdgeColoring),
}

/// Search for a point or edge coloring making the given coordinates valid
/// for `spec`: the orientation variables are fixed to the set's order type
/// and only colors remain free. Indices refer to the input order.
pub fn color_fixed_geometry(ps: &PointSet, spec: &ProblemSpec, engine: &Engine) -> Result<Option<FoundColoring>> {
    let (canon, perm) = relabel(ps)?;
    let s = from_points(&canon)?;
    let enc = build_cnf(&spec.with_n(ps.len()).with_sb(false))?;
    let res = engine.solve(&enc.formula, &enc.fix_signotope(&s))?;
    if res.status == Status::Unsat {
        return Ok(None);
    }
    let model = res.model.as_ref().expect("sat results carry a model");
    let n = ps.len();
    let found = match spec.mode {
        ColoringMode::Points => {
            let c = enc.coloring(model);
            let mut out = vec![0; n];
            for (i, &orig) in perm.iter().enumerate() {
                out[orig] = c.of(i);
            }
            FoundColoring::Points(Coloring(out))
        }
        ColoringMode::Edges => {
            let c = enc.edge_coloring(model);
            let mut out = EdgeColoring::new(n, 0);
            for a in 0..n {
                for b in a + 1..n {
                    out.set(perm[a], perm[b], c.get(a, b));
                }
            }
            FoundColoring::Edges(out)
        }
    };
    // The coloring must survive the exact verifier on the original input.
    let spec = spec.with_n(n);
    let report = match &found {
        FoundColoring::Points(c) => verify(ps, ColoringRef::Points(c), &spec),
        FoundColoring::Edges(e) => verify(ps, ColoringRef::Edges(e), &spec),
    };
    if !report.valid {
        return Err(Error::Internal(format!(
            "fixed-geometry coloring fails verification: {:?}",
            report.violations.first()
        )));
    }
    Ok(Some(found))
}

#[derive(Clone, Debug)]
pub struct SvgOptions {
    pub size: u32,
    /// Draw the convex hull.
    pub hull: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions { size: 600, hull: true }
    }
}

const PALETTE: [&str; 6] = ["#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

/// Render a point file. Coordinates are scaled into a square viewport with
/// the y axis pointing up; edges of an edge coloring are drawn underneath.
pub fn emit_svg(file: &PointFile, opts: &SvgOptions) -> Result<String> {
    let ps = &file.points;
    if ps.is_empty() {
        return Err(Error::Parse("no points to draw".into()));
    }
    let coords: Vec<(f64, f64)> =
        ps.points.iter().map(|p| (p.x.to_f64().unwrap_or(f64::NAN), p.y.to_f64().unwrap_or(f64::NAN))).collect();
    let fold = |f: fn(f64, f64) -> f64, init: f64, pick: fn(&(f64, f64)) -> f64| coords.iter().map(pick).fold(init, f);
    let (xmin, xmax) = (fold(f64::min, f64::INFINITY, |c| c.0), fold(f64::max, f64::NEG_INFINITY, |c| c.0));
    let (ymin, ymax) = (fold(f64::min, f64::INFINITY, |c| c.1), fold(f64::max, f64::NEG_INFINITY, |c| c.1));
    let size = opts.size as f64;
    let margin = 20.0;
    let span = (xmax - xmin).max(ymax - ymin).max(1.0);
    let scale = (size - 2.0 * margin) / span;
    let map = |(x, y): (f64, f64)| (margin + (x - xmin) * scale, size - margin - (y - ymin) * scale);

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{0}" viewBox="0 0 {0} {0}">"#,
        opts.size
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    if let Some(ec) = &file.edges {
        for (a, b, c) in ec.triples() {
            let (p, q) = (map(coords[a]), map(coords[b]));
            writeln!(
                out,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{}" stroke-width="0.6" opacity="0.6"/>"#,
                p.0,
                p.1,
                q.0,
                q.1,
                PALETTE[c % PALETTE.len()]
            )
            .unwrap();
        }
    }
    if opts.hull && ps.len() >= 3 && ps.collinear_triple().is_none() {
        let prep = Prepared::new(ps)?;
        let all: Vec<usize> = (0..ps.len()).collect();
        let hull = hull_order(&prep, &all);
        let pts: Vec<String> = hull.iter().map(|&i| map(coords[i])).map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        writeln!(out, r##"<polygon points="{}" fill="none" stroke="#999" stroke-dasharray="4 3"/>"##, pts.join(" "))
            .unwrap();
    }
    for (i, p) in ps.points.iter().enumerate() {
        let (x, y) = map(coords[i]);
        let fill = p.color.map_or("black", |c| PALETTE[c % PALETTE.len()]);
        writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="{fill}"><title>{i}: ({}, {})</title></circle>"#,
            p.x, p.y
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Counter-clockwise hull by gift wrapping on the exact orientation table.
fn hull_order(prep: &Prepared<'_>, pts: &[usize]) -> Vec<usize> {
    let ps = prep.point_set();
    let start = *pts
        .iter()
        .min_by(|&&a, &&b| (&ps.points[a].x, &ps.points[a].y).cmp(&(&ps.points[b].x, &ps.points[b].y)))
        .unwrap();
    let mut hull = vec![start];
    let mut cur = start;
    loop {
        let mut next = if pts[0] == cur { pts[1] } else { pts[0] };
        for &c in pts {
            if c != cur && c != next && prep.orient(cur, next, c) < 0 {
                next = c;
            }
        }
        if next == start {
            return hull;
        }
        hull.push(next);
        cur = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{Constraint, Kind};

    #[test]
    fn hull_of_square_with_center() {
        let ps = PointSet::from_xy(&[(0, 0), (10, 1), (11, 9), (1, 10), (5, 4)]);
        let prep = Prepared::new(&ps).unwrap();
        assert_eq!(hull_order(&prep, &[0, 1, 2, 3, 4]), vec![0, 1, 2, 3]);
    }

    #[test]
    fn svg_is_deterministic() {
        let f = PointFile::new(PointSet::from_xy(&[(0, 0), (10, 1), (4, 7)]));
        let a = emit_svg(&f, &SvgOptions::default()).unwrap();
        assert_eq!(a, emit_svg(&f, &SvgOptions::default()).unwrap());
        assert_eq!(a.matches("<circle").count(), 3);
    }

    #[test]
    fn convex_position_colorings() {
        let tr0 = |n| {
            ProblemSpec::points(
                n,
                vec![
                    Constraint::new(0, Kind::Triangle { limit: Some(0) }),
                    Constraint::new(1, Kind::Triangle { limit: Some(0) }),
                ],
            )
        };
        // Every triangle on points in convex position is empty.
        let hex = PointSet::from_xy(&[(0, 0), (4, -1), (8, 0), (8, 5), (4, 6), (0, 5)]);
        assert_eq!(color_fixed_geometry(&hex, &tr0(6), &Engine::default()).unwrap(), None);
        let quad = PointSet::from_xy(&[(0, 0), (8, 0), (8, 5), (0, 6)]);
        let Some(FoundColoring::Points(c)) = color_fixed_geometry(&quad, &tr0(4), &Engine::default()).unwrap() else {
            panic!("four points split two and two");
        };
        assert_eq!(c.0.iter().filter(|&&x| x == 0).count(), 2);
    }
}
