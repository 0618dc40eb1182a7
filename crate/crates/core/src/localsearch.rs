//! Stochastic coordinate search: move one point (or one symmetry orbit) at a
//! time and keep the move unless it increases the number of forbidden
//! structures, optionally with annealing.

use std::f64::consts::TAU;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{find_forbidden, verify, Point, PointSet};
use crate::spec::{Coloring, ColoringMode, ColoringRef, ProblemSpec};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum MoveKind {
    /// Jump to a uniformly random position in the box.
    Uniform,
    /// Gaussian step rounded to integers, clamped to the box.
    Gaussian { sigma: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Acceptance {
    /// Accept moves that do not increase the energy.
    Monotone,
    /// Also accept worse moves with probability exp(-delta / T); T starts at
    /// `t0` and is multiplied by `cooling` every `steps_per_level` moves.
    Anneal { t0: f64, cooling: f64, steps_per_level: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symmetry {
    None,
    /// Points move in orbits of the rotation by 2π/m about the origin; one
    /// extra point may sit at the origin.
    Rotational(u32),
    /// Points move in mirror pairs about the y axis; one extra point may sit
    /// on the axis.
    Axial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColoringPolicy {
    /// Colors never change (indexed by point; must be constant on orbits).
    Fixed(Coloring),
    /// Colors are part of the search; some moves recolor an orbit.
    Free,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchParams {
    pub half_width: i64,
    pub moves: MoveKind,
    pub acceptance: Acceptance,
    pub symmetry: Symmetry,
    pub seed: u64,
    pub max_iters: u64,
    /// Report the best state every this many iterations.
    pub snapshot_every: Option<u64>,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            half_width: 1000,
            moves: MoveKind::Uniform,
            acceptance: Acceptance::Monotone,
            symmetry: Symmetry::None,
            seed: 0,
            max_iters: 100_000,
            snapshot_every: None,
        }
    }
}

impl SearchParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::SpecInvalid(m.to_string()));
        if self.half_width < 1 {
            return bad("half-width must be positive");
        }
        if let MoveKind::Gaussian { sigma } = self.moves {
            if !(sigma > 0.0) {
                return bad("gaussian step needs sigma > 0");
            }
        }
        if let Acceptance::Anneal { t0, cooling, steps_per_level } = self.acceptance {
            if !(t0 > 0.0) || !(cooling > 0.0 && cooling < 1.0) || steps_per_level == 0 {
                return bad("annealing needs t0 > 0, cooling in (0,1) and steps per level >= 1");
            }
        }
        if self.symmetry == Symmetry::Rotational(0) {
            return bad("rotation order must be at least 1");
        }
        Ok(())
    }
}

/// Number of forbidden structures; `u64::MAX` for sets not in general
/// position.
pub fn energy(ps: &PointSet, coloring: ColoringRef<'_>, spec: &ProblemSpec) -> u64 {
    if ps.collinear_triple().is_some() {
        return u64::MAX;
    }
    match find_forbidden(ps, coloring, spec) {
        Ok(v) => v.len() as u64,
        Err(_) => u64::MAX,
    }
}

/// Best state seen, as reported to snapshot callbacks.
#[derive(Clone, Debug)]
pub struct Snapshot {
    pub points: PointSet,
    pub energy: u64,
    pub iteration: u64,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// A verified energy-0 set, if found.
    pub found: Option<PointSet>,
    pub best: Snapshot,
    pub iterations: u64,
}

/// Orbit layout: `free` orbits of size `size`, then `fixed_center` points
/// that only move along the symmetry axis (or stay at the origin).
#[derive(Clone, Copy, Debug)]
struct Layout {
    size: usize,
    free: usize,
    center: usize,
}

fn layout(n: usize, sym: Symmetry) -> Result<Layout> {
    let size = match sym {
        Symmetry::None => 1,
        Symmetry::Rotational(m) => m as usize,
        Symmetry::Axial => 2,
    };
    let (free, center) = (n / size, n % size);
    if center > 1 {
        return Err(Error::SpecInvalid(format!("{n} points do not split into orbits of size {size} plus one")));
    }
    Ok(Layout { size, free, center })
}

/// Image of (x, y) under the j-th group element.
fn image(sym: Symmetry, j: usize, x: i64, y: i64) -> (i64, i64) {
    match sym {
        Symmetry::None => (x, y),
        Symmetry::Axial => {
            if j == 0 {
                (x, y)
            } else {
                (-x, y)
            }
        }
        Symmetry::Rotational(m) if 4 % m == 0 => {
            let (mut x, mut y) = (x, y);
            for _ in 0..j * (4 / m as usize) {
                (x, y) = (-y, x);
            }
            (x, y)
        }
        Symmetry::Rotational(m) => {
            let t = TAU * j as f64 / m as f64;
            let (s, c) = t.sin_cos();
            let (fx, fy) = (x as f64, y as f64);
            ((fx * c - fy * s).round() as i64, (fx * s + fy * c).round() as i64)
        }
    }
}

struct State {
    /// Base position of every orbit, then of the central point.
    base: Vec<(i64, i64)>,
    /// Color per orbit.
    colors: Vec<usize>,
}

impl State {
    fn expand(&self, sym: Symmetry, lay: Layout) -> (PointSet, Coloring) {
        let mut pts = Vec::new();
        let mut col = Vec::new();
        for (o, &(x, y)) in self.base.iter().enumerate() {
            let copies = if o < lay.free { lay.size } else { 1 };
            for j in 0..copies {
                let (px, py) = image(sym, j, x, y);
                pts.push(Point::colored(px, py, self.colors[o]));
                col.push(self.colors[o]);
            }
        }
        (PointSet::new(pts), Coloring(col))
    }
}

/// Orbit index of every point in expansion order.
fn orbit_of(lay: Layout) -> Vec<usize> {
    let mut v = Vec::new();
    for o in 0..lay.free {
        v.extend(std::iter::repeat(o).take(lay.size));
    }
    v.extend(std::iter::repeat(lay.free).take(lay.center));
    v
}

fn center_position(sym: Symmetry, y: i64) -> (i64, i64) {
    match sym {
        Symmetry::Axial => (0, y),
        _ => (0, 0),
    }
}

/// Search for an `n`-point set with no forbidden structure.
pub fn anneal(
    spec: &ProblemSpec,
    n: usize,
    policy: &ColoringPolicy,
    params: &SearchParams,
) -> Result<Option<PointSet>> {
    Ok(search(spec, n, policy, params, None, |_| {})?.found)
}

/// Full search interface: optional starting set (e.g. a saved snapshot) and
/// a callback receiving best-so-far snapshots.
pub fn search(
    spec: &ProblemSpec,
    n: usize,
    policy: &ColoringPolicy,
    params: &SearchParams,
    initial: Option<&PointSet>,
    mut on_snapshot: impl FnMut(&Snapshot),
) -> Result<SearchOutcome> {
    params.validate()?;
    if spec.mode != ColoringMode::Points {
        return Err(Error::SpecMismatch("local search handles point colorings only".into()));
    }
    let spec = spec.with_n(n);
    let sym = params.symmetry;
    let lay = layout(n, sym)?;
    let orbits = orbit_of(lay);
    let colors = spec.colors.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let hw = params.half_width;

    let orbit_colors = |c: &Coloring| -> Result<Vec<usize>> {
        if c.len() != n {
            return Err(Error::SpecMismatch(format!("{} colors for {n} points", c.len())));
        }
        let mut out = vec![usize::MAX; lay.free + lay.center];
        for (i, &o) in orbits.iter().enumerate() {
            if out[o] != usize::MAX && out[o] != c.of(i) {
                return Err(Error::SpecMismatch("coloring is not constant on symmetry orbits".into()));
            }
            out[o] = c.of(i);
        }
        Ok(out)
    };

    let mut state = match initial {
        Some(ps) => {
            if ps.len() != n {
                return Err(Error::SpecMismatch(format!("snapshot has {} points, expected {n}", ps.len())));
            }
            let col = match (policy, ps.coloring()) {
                (ColoringPolicy::Fixed(c), _) => c.clone(),
                (ColoringPolicy::Free, Some(c)) => c,
                (ColoringPolicy::Free, None) => Coloring::monochrome(n),
            };
            let mut base = Vec::new();
            let mut seen = vec![false; lay.free + lay.center];
            for (i, &o) in orbits.iter().enumerate() {
                if !seen[o] {
                    seen[o] = true;
                    let p = &ps.points[i];
                    let coord = |v: &num_bigint::BigInt| {
                        i64::try_from(v).map_err(|_| Error::SpecInvalid("snapshot coordinate exceeds i64".into()))
                    };
                    base.push((coord(&p.x)?, coord(&p.y)?));
                }
            }
            State { base, colors: orbit_colors(&col)? }
        }
        None => {
            let cols = match policy {
                ColoringPolicy::Fixed(c) => orbit_colors(c)?,
                ColoringPolicy::Free => (0..lay.free + lay.center).map(|_| rng.gen_range(0..colors)).collect(),
            };
            let mut base: Vec<(i64, i64)> =
                (0..lay.free).map(|_| (rng.gen_range(-hw..=hw), rng.gen_range(-hw..=hw))).collect();
            if lay.center == 1 {
                base.push(center_position(sym, rng.gen_range(-hw..=hw)));
            }
            State { base, colors: cols }
        }
    };

    let eval = |s: &State| {
        let (ps, col) = s.expand(sym, lay);
        energy(&ps, ColoringRef::Points(&col), &spec)
    };
    let mut e = eval(&state);
    let mut best = Snapshot { points: state.expand(sym, lay).0, energy: e, iteration: 0 };
    let recolor = matches!(policy, ColoringPolicy::Free) && colors > 1;
    let gauss = match params.moves {
        MoveKind::Gaussian { sigma } => Some(Normal::new(0.0, sigma).map_err(|e| Error::SpecInvalid(e.to_string()))?),
        MoveKind::Uniform => None,
    };
    let movable = lay.free + usize::from(lay.center == 1 && sym == Symmetry::Axial);

    let mut iter = 0;
    while iter < params.max_iters {
        if e == 0 {
            let (ps, col) = state.expand(sym, lay);
            if verify(&ps, ColoringRef::Points(&col), &spec).valid {
                return Ok(SearchOutcome { found: Some(ps), best, iterations: iter });
            }
            return Err(Error::Internal("energy 0 but verification failed".into()));
        }
        iter += 1;
        if movable == 0 {
            break;
        }
        let o = rng.gen_range(0..movable);
        let old = (state.base[o], state.colors[o]);
        if recolor && rng.gen_bool(0.2) {
            state.colors[o] = (old.1 + rng.gen_range(1..colors)) % colors;
        } else {
            let (x, y) = old.0;
            let (nx, ny) = match gauss {
                None => (rng.gen_range(-hw..=hw), rng.gen_range(-hw..=hw)),
                Some(g) => {
                    let dx = g.sample(&mut rng).round() as i64;
                    let dy = g.sample(&mut rng).round() as i64;
                    ((x + dx).clamp(-hw, hw), (y + dy).clamp(-hw, hw))
                }
            };
            state.base[o] = if o < lay.free { (nx, ny) } else { center_position(sym, ny) };
        }
        let ne = eval(&state);
        let accept = ne != u64::MAX
            && match params.acceptance {
                Acceptance::Monotone => ne <= e,
                Acceptance::Anneal { t0, cooling, steps_per_level } => {
                    ne <= e || {
                        let t = t0 * cooling.powf((iter / steps_per_level) as f64);
                        rng.gen::<f64>() < (-((ne - e) as f64) / t).exp()
                    }
                }
            };
        if accept {
            e = ne;
            if e < best.energy {
                best = Snapshot { points: state.expand(sym, lay).0, energy: e, iteration: iter };
            }
        } else {
            state.base[o] = old.0;
            state.colors[o] = old.1;
        }
        if params.snapshot_every.is_some_and(|k| iter % k == 0) {
            on_snapshot(&best);
        }
    }
    Ok(SearchOutcome { found: None, best, iterations: iter })
}

/// Exact check that the set, colors included, is mapped onto itself by the
/// rotation by 2π/m (m ∈ {1, 2, 4}) or by the mirror x -> -x.
pub fn is_symmetric(ps: &PointSet, sym: Symmetry) -> Option<bool> {
    use std::collections::HashSet;
    let key = |p: &Point| (p.x.clone(), p.y.clone(), p.color);
    let set: HashSet<_> = ps.points.iter().map(key).collect();
    let map = |p: &Point| -> Option<Point> {
        match sym {
            Symmetry::None => Some(p.clone()),
            Symmetry::Axial => Some(Point { x: -p.x.clone(), y: p.y.clone(), color: p.color }),
            Symmetry::Rotational(m) if 4 % m == 0 => {
                let mut q = p.clone();
                for _ in 0..4 / m {
                    q = Point { x: -q.y.clone(), y: q.x.clone(), color: q.color };
                }
                Some(q)
            }
            Symmetry::Rotational(_) => None,
        }
    };
    let mut ok = true;
    for p in &ps.points {
        ok &= set.contains(&key(&map(p)?));
    }
    Some(ok)
}
