use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use super::{build_cnf_with, EncoderOptions, Encoding};
use crate::cnf::Lit;
use crate::error::{Error, Result};
use crate::signotope::triples_lex;
use crate::spec::ProblemSpec;

/// Fixed abscissae for linear realization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbscissaGrid {
    pub xs: Vec<BigInt>,
    /// 1 for the linear grid, C > 1 for the exponential one, 0 for custom.
    pub base: u32,
}

impl AbscissaGrid {
    /// Base 1: `0, 1, ..., n-1`. Base C > 1: `-C^(m-1), ..., -C, -1, [0], 1,
    /// C, ..., C^(m-1)` with the central 0 present only for odd n.
    pub fn new(n: usize, base: u32) -> Result<Self> {
        if base == 0 {
            return Err(Error::SpecInvalid("grid base must be at least 1".into()));
        }
        let xs = if base == 1 {
            (0..n).map(BigInt::from).collect()
        } else {
            let c = BigInt::from(base);
            let half = n / 2;
            (0..n)
                .map(|i| {
                    if n % 2 == 1 && i == half {
                        BigInt::zero()
                    } else if i < half {
                        -Pow::pow(&c, (half - i - 1) as u32)
                    } else {
                        // i > (n-1)/2
                        Pow::pow(&c, (i - (n - 1) / 2 - 1) as u32)
                    }
                })
                .collect()
        };
        Ok(AbscissaGrid { xs, base })
    }

    /// Grid from explicit strictly increasing abscissae.
    pub fn from_xs(xs: Vec<BigInt>) -> Result<Self> {
        if xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::SpecInvalid("abscissae must be strictly increasing".into()));
        }
        Ok(AbscissaGrid { xs, base: 0 })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Coefficients of `y_a, y_b, y_c` in the orientation determinant of the
    /// triple; with fixed abscissae the determinant is linear in the ordinates.
    pub fn coefficients(&self, a: usize, b: usize, c: usize) -> [BigInt; 3] {
        let x = &self.xs;
        [&x[c] - &x[b], &x[a] - &x[c], &x[b] - &x[a]]
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.xs.len() == n {
            Ok(())
        } else {
            Err(Error::GridMismatch { grid: self.xs.len(), n })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// `sum >= 1`
    AtLeastOne,
    /// `sum <= -1`
    AtMostMinusOne,
}

/// `guard => sum_i coeffs[i] * y[vars[i]] (relation)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub guard: Lit,
    pub vars: [usize; 3],
    pub coeffs: [BigInt; 3],
    pub relation: Relation,
}

impl LinearConstraint {
    pub fn holds(&self, ys: &[num_rational::BigRational]) -> bool {
        let sum: num_rational::BigRational = self
            .vars
            .iter()
            .zip(&self.coeffs)
            .map(|(&v, k)| &ys[v] * num_rational::BigRational::from_integer(k.clone()))
            .sum();
        match self.relation {
            Relation::AtLeastOne => sum >= num_rational::BigRational::one(),
            Relation::AtMostMinusOne => sum <= -num_rational::BigRational::one(),
        }
    }
}

/// Boolean formula plus orientation-guarded linear constraints.
#[derive(Clone, Debug)]
pub struct HybridFormula {
    pub encoding: Encoding,
    pub grid: AbscissaGrid,
    pub links: Vec<LinearConstraint>,
}

impl HybridFormula {
    /// The two guarded constraints of the sorted triple (positive first).
    pub fn links_of(&self, a: usize, b: usize, c: usize) -> (&LinearConstraint, &LinearConstraint) {
        let i = 2 * crate::signotope::triple_index(a, b, c);
        (&self.links[i], &self.links[i + 1])
    }
}

/// Encode `spec` for realization over `grid`. Symmetry breaking is turned off
/// because it is incompatible with fixed abscissae.
pub fn build_linear(spec: &ProblemSpec, grid: &AbscissaGrid) -> Result<HybridFormula> {
    grid.check_len(spec.n)?;
    let spec = spec.clone().with_sb(false);
    let enc = build_cnf_with(&spec, &EncoderOptions { linear: true, ..EncoderOptions::default() })?;
    let mut triples = triples_lex(spec.n);
    triples.sort_by_key(|&(a, b, c)| crate::signotope::triple_index(a, b, c));
    let mut links = Vec::with_capacity(2 * triples.len());
    for (a, b, c) in triples {
        let l = Lit::pos(enc.orient_var(a, b, c));
        let coeffs = grid.coefficients(a, b, c);
        links.push(LinearConstraint {
            guard: l,
            vars: [a, b, c],
            coeffs: coeffs.clone(),
            relation: Relation::AtLeastOne,
        });
        links.push(LinearConstraint { guard: !l, vars: [a, b, c], coeffs, relation: Relation::AtMostMinusOne });
    }
    Ok(HybridFormula { encoding: enc, grid: grid.clone(), links })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn grid_shapes() {
        assert_eq!(AbscissaGrid::new(4, 1).unwrap().xs, ints(&[0, 1, 2, 3]));
        assert_eq!(AbscissaGrid::new(5, 2).unwrap().xs, ints(&[-2, -1, 0, 1, 2]));
        assert_eq!(AbscissaGrid::new(4, 2).unwrap().xs, ints(&[-2, -1, 1, 2]));
        assert_eq!(AbscissaGrid::new(7, 3).unwrap().xs, ints(&[-9, -3, -1, 0, 1, 3, 9]));
        assert_eq!(AbscissaGrid::new(6, 4).unwrap().xs, ints(&[-16, -4, -1, 1, 4, 16]));
    }

    #[test]
    fn three_point_link() {
        let spec = ProblemSpec::points(3, vec![]);
        let h = build_linear(&spec, &AbscissaGrid::new(3, 1).unwrap()).unwrap();
        let (pos, neg) = h.links_of(0, 1, 2);
        assert_eq!(pos.coeffs, [BigInt::from(1), BigInt::from(-2), BigInt::from(1)]);
        assert_eq!(pos.relation, Relation::AtLeastOne);
        assert_eq!(neg.guard, !pos.guard);
        assert!(h.encoding.formula.clauses.iter().all(|c| c.len() > 1), "no symmetry-breaking units");
    }

    #[test]
    fn grid_length_must_match() {
        let spec = ProblemSpec::points(4, vec![]);
        let e = build_linear(&spec, &AbscissaGrid::new(5, 1).unwrap()).unwrap_err();
        assert_eq!(e, Error::GridMismatch { grid: 5, n: 4 });
    }
}
