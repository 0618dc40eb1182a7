//! Exact general simplex over the rationals (bounded rows, Bland's rule),
//! usable both as a one-shot feasibility check and as a backtrackable theory.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cnf::Lit;

/// Bound together with the literal that asserted it (None: permanent).
#[derive(Clone, Debug)]
struct Bound {
    value: BigRational,
    reason: Option<Lit>,
}

/// A system `s_r = sum_j a_rj y_j` over free structural variables `y_j` and
/// bounded row variables `s_r`. Variables are numbered `0..cols` for `y` and
/// `cols..cols+rows` for the row variables.
#[derive(Clone, Debug)]
pub struct Simplex {
    vars: usize,
    /// Tableau: one row per basic variable, one column per nonbasic variable.
    tab: Vec<Vec<BigRational>>,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    /// For each variable: Ok(row) if basic, Err(col) if nonbasic.
    pos: Vec<std::result::Result<usize, usize>>,
    value: Vec<BigRational>,
    lower: Vec<Option<Bound>>,
    upper: Vec<Option<Bound>>,
    /// (variable, previous lower, previous upper) for backtracking.
    trail: Vec<(usize, Option<Bound>, Option<Bound>)>,
    pub pivots: u64,
}

impl Simplex {
    /// `rows[r]` lists (structural variable, coefficient) pairs of row `r`.
    pub fn new(cols: usize, rows: &[Vec<(usize, BigRational)>]) -> Self {
        let vars = cols + rows.len();
        let tab: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| {
                let mut dense = vec![BigRational::zero(); cols];
                for (j, a) in r {
                    dense[*j] += a;
                }
                dense
            })
            .collect();
        let mut pos: Vec<std::result::Result<usize, usize>> = (0..cols).map(Err).collect();
        pos.extend((0..rows.len()).map(Ok));
        Simplex {
            vars,
            tab,
            basic: (cols..vars).collect(),
            nonbasic: (0..cols).collect(),
            pos,
            value: vec![BigRational::zero(); vars],
            lower: vec![None; vars],
            upper: vec![None; vars],
            trail: Vec::new(),
            pivots: 0,
        }
    }

    pub fn num_structural(&self) -> usize {
        self.nonbasic.len()
    }

    /// Row variable of row `r`.
    pub fn row_var(&self, r: usize) -> usize {
        self.nonbasic.len() + r
    }

    pub fn trail_len(&self) -> usize {
        self.trail.len()
    }

    /// Undo bound changes back to trail length `len`.
    pub fn backtrack(&mut self, len: usize) {
        while self.trail.len() > len {
            let (v, lo, up) = self.trail.pop().unwrap();
            self.lower[v] = lo;
            self.upper[v] = up;
        }
    }

    /// Tighten the lower bound of `v`. Returns a conflict (literals that
    /// cannot all hold) if the bounds cross.
    pub fn assert_lower(&mut self, v: usize, value: BigRational, reason: Option<Lit>) -> Option<Vec<Lit>> {
        if self.lower[v].as_ref().is_some_and(|b| b.value >= value) {
            return None;
        }
        if let Some(u) = &self.upper[v] {
            if u.value < value {
                return Some(u.reason.into_iter().chain(reason).collect());
            }
        }
        self.trail.push((v, self.lower[v].clone(), self.upper[v].clone()));
        self.lower[v] = Some(Bound { value: value.clone(), reason });
        if let Err(_) = self.pos[v] {
            if self.value[v] < value {
                self.update(v, value);
            }
        }
        None
    }

    pub fn assert_upper(&mut self, v: usize, value: BigRational, reason: Option<Lit>) -> Option<Vec<Lit>> {
        if self.upper[v].as_ref().is_some_and(|b| b.value <= value) {
            return None;
        }
        if let Some(l) = &self.lower[v] {
            if l.value > value {
                return Some(l.reason.into_iter().chain(reason).collect());
            }
        }
        self.trail.push((v, self.lower[v].clone(), self.upper[v].clone()));
        self.upper[v] = Some(Bound { value: value.clone(), reason });
        if let Err(_) = self.pos[v] {
            if self.value[v] > value {
                self.update(v, value);
            }
        }
        None
    }

    /// Set nonbasic `v` to `x`, moving basic variables along.
    fn update(&mut self, v: usize, x: BigRational) {
        let c = self.pos[v].unwrap_err();
        let delta = &x - &self.value[v];
        for (r, row) in self.tab.iter().enumerate() {
            if !row[c].is_zero() {
                let b = self.basic[r];
                self.value[b] += &row[c] * &delta;
            }
        }
        self.value[v] = x;
    }

    fn below(&self, v: usize) -> bool {
        self.lower[v].as_ref().is_some_and(|b| self.value[v] < b.value)
    }

    fn above(&self, v: usize) -> bool {
        self.upper[v].as_ref().is_some_and(|b| self.value[v] > b.value)
    }

    fn can_increase(&self, v: usize) -> bool {
        self.upper[v].as_ref().map_or(true, |b| self.value[v] < b.value)
    }

    fn can_decrease(&self, v: usize) -> bool {
        self.lower[v].as_ref().map_or(true, |b| self.value[v] > b.value)
    }

    /// Restore feasibility. On infeasibility returns the literals of the
    /// bounds in the Farkas certificate (permanent bounds are omitted).
    pub fn check(&mut self) -> Result<(), Vec<Lit>> {
        loop {
            // Bland: smallest violating basic variable.
            let Some((r, xi)) = self
                .basic
                .iter()
                .enumerate()
                .filter(|&(_, &b)| self.below(b) || self.above(b))
                .min_by_key(|&(_, &b)| b)
                .map(|(r, &b)| (r, b))
            else {
                return Ok(());
            };
            let raise = self.below(xi);
            let row = &self.tab[r];
            let entering = (0..self.nonbasic.len())
                .filter(|&c| {
                    let a = &row[c];
                    let xj = self.nonbasic[c];
                    if a.is_zero() {
                        return false;
                    }
                    let up = if raise { a.is_positive() } else { a.is_negative() };
                    if up {
                        self.can_increase(xj)
                    } else {
                        self.can_decrease(xj)
                    }
                })
                .min_by_key(|&c| self.nonbasic[c]);
            match entering {
                Some(c) => {
                    let target = if raise {
                        self.lower[xi].as_ref().unwrap().value.clone()
                    } else {
                        self.upper[xi].as_ref().unwrap().value.clone()
                    };
                    self.pivot_and_update(r, c, target);
                }
                None => return Err(self.explain(r, raise)),
            }
        }
    }

    fn explain(&self, r: usize, raise: bool) -> Vec<Lit> {
        let xi = self.basic[r];
        let own = if raise { &self.lower[xi] } else { &self.upper[xi] };
        let mut out: Vec<Lit> = own.as_ref().and_then(|b| b.reason).into_iter().collect();
        for (c, a) in self.tab[r].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let xj = self.nonbasic[c];
            let use_upper = a.is_positive() == raise;
            let b = if use_upper { &self.upper[xj] } else { &self.lower[xj] };
            if let Some(l) = b.as_ref().and_then(|b| b.reason) {
                out.push(l);
            }
        }
        out
    }

    fn pivot_and_update(&mut self, r: usize, c: usize, target: BigRational) {
        self.pivots += 1;
        let xi = self.basic[r];
        let xj = self.nonbasic[c];
        let a = self.tab[r][c].clone();
        let theta = (&target - &self.value[xi]) / &a;
        self.value[xi] = target;
        self.value[xj] += &theta;
        for (k, row) in self.tab.iter().enumerate() {
            if k != r && !row[c].is_zero() {
                self.value[self.basic[k]] += &row[c] * &theta;
            }
        }
        // Solve row r for xj; xi takes column c.
        let inv = BigRational::one() / &a;
        let mut new_row: Vec<BigRational> = self.tab[r].iter().map(|x| -(x * &inv)).collect();
        new_row[c] = inv;
        for (k, row) in self.tab.iter_mut().enumerate() {
            if k == r {
                continue;
            }
            let f = std::mem::take(&mut row[c]);
            if f.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&new_row) {
                if !y.is_zero() {
                    *x += &f * y;
                }
            }
            row[c] = &f * &new_row[c];
        }
        self.tab[r] = new_row;
        self.basic[r] = xj;
        self.nonbasic[c] = xi;
        self.pos[xj] = Ok(r);
        self.pos[xi] = Err(c);
    }

    pub fn value(&self, v: usize) -> &BigRational {
        &self.value[v]
    }

    pub fn num_vars(&self) -> usize {
        self.vars
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    #[test]
    fn feasible_and_infeasible_systems() {
        // s0 = y0 + y1, s1 = y0 - y1.
        let rows = vec![vec![(0, q(1)), (1, q(1))], vec![(0, q(1)), (1, q(-1))]];
        let mut s = Simplex::new(2, &rows);
        let (a, b, c) = (Lit::pos(1), Lit::pos(2), Lit::pos(3));
        assert!(s.assert_lower(2, q(4), Some(a)).is_none());
        assert!(s.assert_lower(3, q(2), Some(b)).is_none());
        assert!(s.check().is_ok());
        let y0 = s.value(0).clone();
        let y1 = s.value(1).clone();
        assert!(&y0 + &y1 >= q(4) && &y0 - &y1 >= q(2));
        let mark = s.trail_len();
        // y0 <= 1 contradicts y0 >= 3.
        assert!(s.assert_upper(0, q(1), Some(c)).is_none());
        let mut conflict = s.check().unwrap_err();
        conflict.sort();
        assert_eq!(conflict, vec![a, b, c]);
        s.backtrack(mark);
        assert!(s.check().is_ok());
    }

    #[test]
    fn crossing_bounds_conflict_immediately() {
        let rows = vec![vec![(0, q(2))]];
        let mut s = Simplex::new(1, &rows);
        assert!(s.assert_lower(1, q(1), Some(Lit::pos(5))).is_none());
        assert_eq!(s.assert_upper(1, q(-1), Some(Lit::neg(6))), Some(vec![Lit::pos(5), Lit::neg(6)]));
    }
}
