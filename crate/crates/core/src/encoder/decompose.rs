use serde::{Deserialize, Serialize};

use super::Encoding;
use crate::cnf::Lit;
use crate::error::{Error, Result};
use crate::spec::{ColoringMode, Kind, ProblemSpec};

/// Prefixes in which `run` consecutive points have color `color` are pruned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRule {
    pub color: usize,
    pub run: usize,
}

impl RunRule {
    /// Rules implied by the constraints alone. Points that are consecutive in
    /// x-order span a region containing no other point, so a long enough run
    /// of one color always contains a violation.
    pub fn defaults(spec: &ProblemSpec) -> Vec<RunRule> {
        let mut out = Vec::new();
        for color in 0..spec.colors {
            let run = spec
                .constraints_for(color)
                .filter_map(|k| match k {
                    Kind::Pair => Some(2),
                    Kind::Triangle { .. } => Some(3),
                    Kind::NonConvex4 { .. } | Kind::Island4 { .. } => Some(4),
                    Kind::Convex { size: 4, .. } => Some(5),
                    Kind::Convex { size: 5, limit: None } => Some(9),
                    Kind::Convex { size: 5, .. } => Some(10),
                    Kind::Convex { size: 6, limit: None } => Some(17),
                    _ => None,
                })
                .min();
            if let Some(run) = run {
                out.push(RunRule { color, run });
            }
        }
        out
    }

    fn violated_by(&self, prefix: &[usize]) -> bool {
        let mut len = 0;
        for &c in prefix {
            len = if c == self.color { len + 1 } else { 0 };
            if len >= self.run {
                return true;
            }
        }
        false
    }
}

/// A subproblem: the original formula with the first points' colors fixed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subproblem {
    pub id: usize,
    pub prefix: Vec<usize>,
}

impl Subproblem {
    pub fn assumptions(&self, enc: &Encoding) -> Vec<Lit> {
        enc.fix_point_colors(&self.prefix)
    }

    pub fn label(&self) -> String {
        self.prefix.iter().map(|c| (c + 1).to_string()).collect::<Vec<_>>().join("")
    }
}

/// Prefix colorings up to permutations of interchangeable colors: within each
/// class of equivalent colors, members first appear in increasing order.
pub fn canonical_prefixes(spec: &ProblemSpec, len: usize) -> Vec<Vec<usize>> {
    let classes = spec.color_classes();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    extend(&classes, len, &mut cur, &mut out);
    out
}

fn extend(classes: &[usize], len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == len {
        out.push(cur.clone());
        return;
    }
    for c in 0..classes.len() {
        // The smallest unused member of a class stands for all unused ones.
        let unused_before = (0..c).any(|d| classes[d] == classes[c] && !cur.contains(&d));
        if unused_before {
            continue;
        }
        cur.push(c);
        extend(classes, len, cur, out);
        cur.pop();
    }
}

/// Split a point-colored problem on the colors of its first `prefix_len`
/// points. Prefixes violating any run rule are dropped.
pub fn decompose(spec: &ProblemSpec, prefix_len: usize, rules: &[RunRule]) -> Result<Vec<Subproblem>> {
    if spec.mode != ColoringMode::Points {
        return Err(Error::SpecInvalid("decomposition needs a point-colored spec".into()));
    }
    if prefix_len > spec.n {
        return Err(Error::SpecInvalid(format!("prefix length {prefix_len} exceeds n = {}", spec.n)));
    }
    if let Some(r) = rules.iter().find(|r| r.color >= spec.colors || r.run == 0) {
        return Err(Error::SpecInvalid(format!("bad run rule {r:?}")));
    }
    Ok(canonical_prefixes(spec, prefix_len)
        .into_iter()
        .filter(|p| !rules.iter().any(|r| r.violated_by(p)))
        .enumerate()
        .map(|(id, prefix)| Subproblem { id, prefix })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::Constraint;

    fn symmetric(colors: usize, kind: Kind, n: usize) -> ProblemSpec {
        ProblemSpec::points(n, (0..colors).map(|i| Constraint::new(i, kind.clone())).collect())
    }

    #[test]
    fn two_symmetric_colors_single_point() {
        let spec = symmetric(2, Kind::Triangle { limit: Some(0) }, 6);
        assert_eq!(decompose(&spec, 1, &[]).unwrap().len(), 1);
    }

    #[test]
    fn four_colors_three_points() {
        let spec = symmetric(4, Kind::Triangle { limit: Some(2) }, 10);
        let labels: Vec<String> = decompose(&spec, 3, &[]).unwrap().iter().map(Subproblem::label).collect();
        assert_eq!(labels, ["111", "112", "121", "122", "123"]);
        let pruned: Vec<String> =
            decompose(&spec, 3, &RunRule::defaults(&spec)).unwrap().iter().map(Subproblem::label).collect();
        assert_eq!(pruned, ["112", "121", "122", "123"]);
    }

    #[test]
    fn asymmetric_colors_are_not_merged() {
        let spec = ProblemSpec::points(
            8,
            vec![Constraint::new(0, Kind::Triangle { limit: Some(0) }), Constraint::new(1, Kind::Pair)],
        );
        assert_eq!(decompose(&spec, 2, &[]).unwrap().len(), 4);
    }
}
