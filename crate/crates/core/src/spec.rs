//! Problem specifications: which monochromatic structures are forbidden, for
//! which colors, and with which interior-point limits.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on interior points. `None` means unbounded (any structure of
/// the shape is forbidden regardless of what it contains).
pub type Limit = Option<usize>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ColoringMode {
    Points,
    Edges,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum HexagonRelaxation {
    /// Exact hull-interior counting through a fan triangulation.
    #[default]
    Exact,
    /// Count only the case-specific base triangle (upper bound on structures).
    BaseTriangle,
}

/// A forbidden-structure kind together with its limit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Kind {
    /// Two points of the color.
    Pair,
    /// Triangle with at most `limit` interior points.
    Triangle { limit: Limit },
    /// Convex polygon with `size` vertices (4, 5 or 6) and at most `limit` interior points.
    Convex { size: usize, limit: Limit },
    /// Any 4 points whose best simple quadrilateral has at most `limit` interior points.
    NonConvex4 { limit: Limit },
    /// 4 points whose convex hull contains at most `limit` other points.
    Island4 { limit: Limit },
    /// Convex hexagon whose exact interior count lies in `interior`.
    HexEx { interior: BTreeSet<usize> },
    /// Convex hexagon in which one of the three diagonal quadrilaterals has
    /// exactly 0 or exactly `q` interior points.
    HexSub { q: usize },
    /// Edge-monochromatic triangle with at most `limit` interior points.
    RamseyTriangle { limit: Limit },
    /// Convex polygon whose boundary edges share one color, at most `limit` interior points.
    RamseyConvex { size: usize, limit: Limit },
}

impl Kind {
    pub fn is_edge_kind(&self) -> bool {
        matches!(self, Kind::RamseyTriangle { .. } | Kind::RamseyConvex { .. })
    }

    /// Number of vertices of the structure.
    pub fn arity(&self) -> usize {
        match self {
            Kind::Pair => 2,
            Kind::Triangle { .. } | Kind::RamseyTriangle { .. } => 3,
            Kind::NonConvex4 { .. } | Kind::Island4 { .. } => 4,
            Kind::Convex { size, .. } | Kind::RamseyConvex { size, .. } => *size,
            Kind::HexEx { .. } | Kind::HexSub { .. } => 6,
        }
    }

    /// Tag used to enforce the one-constraint-per-(tag, color) rule.
    pub fn tag(&self) -> String {
        match self {
            Kind::Pair => "pr".into(),
            Kind::Triangle { .. } => "tr".into(),
            Kind::Convex { size, .. } => format!("cv{size}"),
            Kind::NonConvex4 { .. } => "nc".into(),
            Kind::Island4 { .. } => "is".into(),
            Kind::HexEx { .. } => "hexex".into(),
            Kind::HexSub { .. } => "hexsub".into(),
            Kind::RamseyTriangle { .. } => "etr".into(),
            Kind::RamseyConvex { size, .. } => format!("ecv{size}"),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn lim(l: &Limit) -> String {
            l.map_or_else(|| "inf".to_string(), |k| k.to_string())
        }
        match self {
            Kind::Pair => write!(f, "pair"),
            Kind::Triangle { limit } => write!(f, "triangle(<={})", lim(limit)),
            Kind::Convex { size, limit } => write!(f, "convex{size}(<={})", lim(limit)),
            Kind::NonConvex4 { limit } => write!(f, "nonconvex4(<={})", lim(limit)),
            Kind::Island4 { limit } => write!(f, "island4(<={})", lim(limit)),
            Kind::HexEx { interior } => {
                let v: Vec<String> = interior.iter().map(|q| q.to_string()).collect();
                write!(f, "hexagon(in {{{}}})", v.join(","))
            }
            Kind::HexSub { q } => write!(f, "hexsub({q})"),
            Kind::RamseyTriangle { limit } => write!(f, "edge-triangle(<={})", lim(limit)),
            Kind::RamseyConvex { size, limit } => {
                write!(f, "edge-convex{size}(<={})", lim(limit))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Constraint {
    pub color: usize,
    #[serde(flatten)]
    pub kind: Kind,
}

impl Constraint {
    pub fn new(color: usize, kind: Kind) -> Self {
        Constraint { color, kind }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub n: usize,
    pub mode: ColoringMode,
    /// Number of colors. Colors without constraints are allowed (free colors).
    pub colors: usize,
    pub constraints: Vec<Constraint>,
    pub sb: bool,
    #[serde(default)]
    pub hexagon_relaxation: HexagonRelaxation,
    /// Mirror constraint L(a,b,c) = L(n-1-c, n-1-b, n-1-a).
    #[serde(default)]
    pub axial: bool,
}

impl ProblemSpec {
    /// A point-colored spec whose color count is inferred from the constraints.
    pub fn points(n: usize, constraints: Vec<Constraint>) -> Self {
        let colors = constraints.iter().map(|c| c.color + 1).max().unwrap_or(0);
        ProblemSpec {
            n,
            mode: ColoringMode::Points,
            colors,
            constraints,
            sb: true,
            hexagon_relaxation: HexagonRelaxation::Exact,
            axial: false,
        }
    }

    /// An edge-colored spec whose color count is inferred from the constraints.
    pub fn edges(n: usize, constraints: Vec<Constraint>) -> Self {
        ProblemSpec { mode: ColoringMode::Edges, ..ProblemSpec::points(n, constraints) }
    }

    pub fn with_n(&self, n: usize) -> Self {
        ProblemSpec { n, ..self.clone() }
    }

    pub fn with_colors(mut self, colors: usize) -> Self {
        self.colors = colors;
        self
    }

    pub fn with_sb(mut self, sb: bool) -> Self {
        self.sb = sb;
        self
    }

    pub fn with_relaxation(mut self, r: HexagonRelaxation) -> Self {
        self.hexagon_relaxation = r;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for c in &self.constraints {
            if c.color >= self.colors {
                return Err(Error::SpecInvalid(format!(
                    "color {} out of range (colors = {})",
                    c.color + 1,
                    self.colors
                )));
            }
            if !seen.insert((c.kind.tag(), c.color)) {
                return Err(Error::SpecInvalid(format!(
                    "duplicate constraint {} for color {}",
                    c.kind.tag(),
                    c.color + 1
                )));
            }
            let edge = c.kind.is_edge_kind();
            if edge != (self.mode == ColoringMode::Edges) {
                return Err(Error::SpecInvalid(format!("constraint {} does not fit {:?} mode", c.kind, self.mode)));
            }
            match &c.kind {
                Kind::Convex { size, .. } if !(4..=6).contains(size) => {
                    return Err(Error::SpecInvalid(format!("unsupported polygon size {size}")));
                }
                Kind::RamseyConvex { size, .. } if !(4..=6).contains(size) => {
                    return Err(Error::SpecInvalid(format!("unsupported polygon size {size}")));
                }
                Kind::HexEx { interior } if interior.is_empty() => {
                    return Err(Error::SpecInvalid("empty interior set".into()));
                }
                Kind::HexSub { q } if *q == 0 => {
                    return Err(Error::SpecInvalid("hexsub needs q >= 1".into()));
                }
                _ => {}
            }
        }
        if self.mode == ColoringMode::Edges && self.colors < 2 && !self.constraints.is_empty() {
            return Err(Error::SpecInvalid("edge mode needs at least 2 colors".into()));
        }
        Ok(())
    }

    /// Colors are interchangeable when their constraint lists are identical.
    /// Returns, for each color, the smallest color equivalent to it.
    pub fn color_classes(&self) -> Vec<usize> {
        let sig = |i: usize| -> Vec<Kind> {
            let mut v: Vec<Kind> = self.constraints.iter().filter(|c| c.color == i).map(|c| c.kind.clone()).collect();
            v.sort_by_key(|k| k.to_string());
            v
        };
        let sigs: Vec<Vec<Kind>> = (0..self.colors).map(sig).collect();
        (0..self.colors).map(|i| (0..=i).find(|&j| sigs[j] == sigs[i]).unwrap()).collect()
    }

    pub fn constraints_for(&self, color: usize) -> impl Iterator<Item = &Kind> {
        self.constraints.iter().filter(move |c| c.color == color).map(|c| &c.kind)
    }

    /// Parse command-line parameters such as `n=13 nc1=0 tr2=0 sb=off`.
    ///
    /// Recognised keys: `n`, `pr<i>`, `tr<i>`, `cv<i>`, `nc<i>`, `is<i>`,
    /// `pent<i>`, `hex<i>` (or `hex`), `hexex<i>=0,3,4`, `hexsub<i>=q`,
    /// `etr<i>`, `ecv<i>`, `epent<i>`, `colors`, `sb=on|off`,
    /// `relax=exact|base`, `axial=on|off`. Limits accept `inf`.
    /// Unknown keys are returned to the caller untouched.
    pub fn parse_params<'a>(args: &[&'a str]) -> Result<(ProblemSpec, Vec<(&'a str, &'a str)>)> {
        let mut n = None;
        let mut constraints = Vec::new();
        let mut sb = true;
        let mut relax = None;
        let mut axial = false;
        let mut colors_override = None;
        let mut rest = Vec::new();
        for arg in args {
            let (key, value) =
                arg.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got '{arg}'")))?;
            let key = key.trim_start_matches('-');
            match key {
                "n" => n = Some(parse_usize(value)?),
                "sb" => sb = parse_switch(value)?,
                "axial" => axial = parse_switch(value)?,
                "colors" => colors_override = Some(parse_usize(value)?),
                "relax" => {
                    relax = Some(match value {
                        "exact" => HexagonRelaxation::Exact,
                        "base" | "base-triangle" => HexagonRelaxation::BaseTriangle,
                        _ => return Err(Error::Parse(format!("unknown relaxation '{value}'"))),
                    })
                }
                _ => match parse_constraint_key(key, value)? {
                    Some(c) => constraints.push(c),
                    None => rest.push((key, value)),
                },
            }
        }
        let n = n.ok_or_else(|| Error::Parse("missing n=".into()))?;
        let edge = constraints.iter().any(|c: &Constraint| c.kind.is_edge_kind());
        let mut spec = if edge { ProblemSpec::edges(n, constraints) } else { ProblemSpec::points(n, constraints) };
        if let Some(c) = colors_override {
            spec.colors = spec.colors.max(c);
        }
        spec.sb = sb;
        spec.axial = axial;
        spec.hexagon_relaxation = relax.unwrap_or_else(|| default_relaxation(&spec));
        spec.validate()?;
        Ok((spec, rest))
    }
}

/// Exact counting unless the spec only has single-limit hexagon constraints,
/// for which the base-triangle trick is sound and much smaller.
fn default_relaxation(spec: &ProblemSpec) -> HexagonRelaxation {
    let hex_limit = spec.constraints.iter().any(|c| matches!(c.kind, Kind::Convex { size: 6, limit: Some(_) }));
    let needs_exact = spec.constraints.iter().any(|c| matches!(c.kind, Kind::HexEx { .. } | Kind::HexSub { .. }));
    if hex_limit && !needs_exact {
        HexagonRelaxation::BaseTriangle
    } else {
        HexagonRelaxation::Exact
    }
}

fn parse_usize(s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::Parse(format!("expected a non-negative integer, got '{s}'")))
}

fn parse_limit(s: &str) -> Result<Limit> {
    match s {
        "inf" | "any" | "oo" => Ok(None),
        _ => parse_usize(s).map(Some),
    }
}

fn parse_switch(s: &str) -> Result<bool> {
    match s {
        "on" | "true" | "1" | "yes" => Ok(true),
        "off" | "false" | "0" | "no" => Ok(false),
        _ => Err(Error::Parse(format!("expected on/off, got '{s}'"))),
    }
}

fn parse_constraint_key(key: &str, value: &str) -> Result<Option<Constraint>> {
    // Longest prefixes first so that "hexex" is not read as "hex" + "ex".
    const PREFIXES: [&str; 12] =
        ["hexsub", "hexex", "epent", "ecv", "etr", "pent", "hex", "pr", "tr", "cv", "nc", "is"];
    let Some(prefix) = PREFIXES.iter().find(|p| key.starts_with(**p)) else {
        return Ok(None);
    };
    let suffix = key[prefix.len()..].trim_start_matches('_');
    let color = if suffix.is_empty() {
        0
    } else {
        match suffix.parse::<usize>() {
            Ok(i) if i >= 1 => i - 1,
            _ => return Ok(None),
        }
    };
    let kind = match *prefix {
        "pr" => Kind::Pair,
        "tr" => Kind::Triangle { limit: parse_limit(value)? },
        "cv" => Kind::Convex { size: 4, limit: parse_limit(value)? },
        "pent" => Kind::Convex { size: 5, limit: parse_limit(value)? },
        "hex" => Kind::Convex { size: 6, limit: parse_limit(value)? },
        "nc" => Kind::NonConvex4 { limit: parse_limit(value)? },
        "is" => Kind::Island4 { limit: parse_limit(value)? },
        "hexsub" => Kind::HexSub { q: parse_usize(value)? },
        "hexex" => {
            let interior =
                value.split(',').filter(|s| !s.is_empty()).map(parse_usize).collect::<Result<BTreeSet<usize>>>()?;
            Kind::HexEx { interior }
        }
        "etr" => Kind::RamseyTriangle { limit: parse_limit(value)? },
        "ecv" => Kind::RamseyConvex { size: 4, limit: parse_limit(value)? },
        "epent" => Kind::RamseyConvex { size: 5, limit: parse_limit(value)? },
        _ => unreachable!(),
    };
    Ok(Some(Constraint::new(color, kind)))
}

/// A point coloring: `colors[a]` is the color of point `a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coloring(pub Vec<usize>);

impl Coloring {
    pub fn monochrome(n: usize) -> Self {
        Coloring(vec![0; n])
    }

    pub fn of(&self, a: usize) -> usize {
        self.0[a]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A total coloring of the unordered pairs of `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeColoring {
    n: usize,
    colors: Vec<usize>,
}

impl EdgeColoring {
    pub fn new(n: usize, default: usize) -> Self {
        EdgeColoring { n, colors: vec![default; n * n.saturating_sub(1) / 2] }
    }

    pub fn from_triples(n: usize, triples: &[(usize, usize, usize)]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for &(a, b, c) in triples {
            if a >= n || b >= n || a == b {
                return Err(Error::Parse(format!("bad edge ({a}, {b})")));
            }
            if map.insert((a.min(b), a.max(b)), c).is_some() {
                return Err(Error::Parse(format!("edge ({a}, {b}) colored twice")));
            }
        }
        let mut ec = EdgeColoring::new(n, 0);
        for a in 0..n {
            for b in a + 1..n {
                let c = map.get(&(a, b)).ok_or_else(|| Error::Parse(format!("edge ({a}, {b}) has no color")))?;
                ec.set(a, b, *c);
            }
        }
        Ok(ec)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn index(&self, a: usize, b: usize) -> usize {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        debug_assert!(b < self.n && a != b);
        b * (b - 1) / 2 + a
    }

    pub fn get(&self, a: usize, b: usize) -> usize {
        self.colors[self.index(a, b)]
    }

    pub fn set(&mut self, a: usize, b: usize, color: usize) {
        let i = self.index(a, b);
        self.colors[i] = color;
    }

    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                out.push((a, b, self.get(a, b)));
            }
        }
        out
    }

    /// Relabel points: new index `i` is old index `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> EdgeColoring {
        let mut out = EdgeColoring::new(self.n, 0);
        for a in 0..self.n {
            for b in a + 1..self.n {
                out.set(a, b, self.get(perm[a], perm[b]));
            }
        }
        out
    }
}

/// Either kind of coloring, as consumed by the structure finders.
#[derive(Clone, Copy, Debug)]
pub enum ColoringRef<'a> {
    Points(&'a Coloring),
    Edges(&'a EdgeColoring),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_cli_parameters() {
        let (spec, rest) = ProblemSpec::parse_params(&["n=13", "nc1=0", "tr2=0", "sb=off", "xgrid=4"]).unwrap();
        assert_eq!(spec.n, 13);
        assert_eq!(spec.colors, 2);
        assert!(!spec.sb);
        assert_eq!(
            spec.constraints,
            vec![
                Constraint::new(0, Kind::NonConvex4 { limit: Some(0) }),
                Constraint::new(1, Kind::Triangle { limit: Some(0) }),
            ]
        );
        assert_eq!(rest, vec![("xgrid", "4")]);
    }

    #[test]
    fn parses_hexagon_parameters() {
        let (spec, _) = ProblemSpec::parse_params(&["n=17", "hex=1"]).unwrap();
        assert_eq!(spec.hexagon_relaxation, HexagonRelaxation::BaseTriangle);
        let (spec, _) = ProblemSpec::parse_params(&["n=20", "hexex=0,5,6"]).unwrap();
        assert_eq!(spec.hexagon_relaxation, HexagonRelaxation::Exact);
        assert_eq!(spec.constraints[0].kind, Kind::HexEx { interior: [0, 5, 6].into_iter().collect() });
        let (spec, _) = ProblemSpec::parse_params(&["n=10", "etr1=inf", "epent2=inf"]).unwrap();
        assert_eq!(spec.mode, ColoringMode::Edges);
        assert_eq!(spec.constraints[1].kind, Kind::RamseyConvex { size: 5, limit: None });
    }

    #[test]
    fn rejects_mixed_modes_and_duplicates() {
        assert!(ProblemSpec::parse_params(&["n=5", "etr1=0", "tr2=0"]).is_err());
        assert!(ProblemSpec::parse_params(&["n=5", "tr1=0", "tr1=1"]).is_err());
        assert!(ProblemSpec::parse_params(&["nc1=0"]).is_err());
    }

    #[test]
    fn color_classes_detect_symmetric_colors() {
        let (spec, _) = ProblemSpec::parse_params(&["n=8", "nc1=0", "tr2=0", "nc3=0"]).unwrap();
        assert_eq!(spec.color_classes(), vec![0, 1, 0]);
    }

    #[test]
    fn edge_coloring_indexing() {
        let ec = EdgeColoring::from_triples(3, &[(0, 1, 1), (2, 0, 0), (1, 2, 1)]).unwrap();
        assert_eq!(ec.get(1, 0), 1);
        assert_eq!(ec.get(0, 2), 0);
        assert!(EdgeColoring::from_triples(3, &[(0, 1, 1)]).is_err());
    }
}
