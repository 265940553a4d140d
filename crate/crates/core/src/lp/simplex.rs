//! Dense two-phase primal simplex over exact rationals with Bland's rule.
//!
//! Works on the standard form `min c·x  s.t.  A x = b, x >= 0, b >= 0`.

use log::trace;
use num_traits::{One, Signed, Zero};

use super::rational::Rational;

pub(crate) struct StandardForm {
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
}

#[derive(Debug)]
pub(crate) enum StandardOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, j: usize, reduced: &mut [Rational], value: &mut Rational) {
        let p = self.rows[r][j].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
            self.rhs[r] /= &p;
        }
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][j].clone();
            if f.is_zero() {
                continue;
            }
            for (k, pv) in pivot_row.iter().enumerate() {
                if !pv.is_zero() {
                    self.rows[i][k] -= &f * pv;
                }
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        let f = reduced[j].clone();
        if !f.is_zero() {
            for (k, pv) in pivot_row.iter().enumerate() {
                if !pv.is_zero() {
                    reduced[k] -= &f * pv;
                }
            }
            // objective value tracks c_B · rhs
            *value += &f * &pivot_rhs;
        }
        self.basis[r] = j;
    }

    fn reduced_costs(&self, c: &[Rational]) -> (Vec<Rational>, Rational) {
        let mut d: Vec<Rational> = c[..self.cols].to_vec();
        let mut value = Rational::zero();
        for (i, &bi) in self.basis.iter().enumerate() {
            let cb = &c[bi];
            if cb.is_zero() {
                continue;
            }
            for (k, v) in self.rows[i].iter().enumerate() {
                if !v.is_zero() {
                    d[k] -= cb * v;
                }
            }
            value += cb * &self.rhs[i];
        }
        (d, value)
    }

    /// Runs Bland-rule iterations for cost `c` restricted to the first
    /// `allowed` columns. Returns `false` on unboundedness.
    fn optimize(&mut self, c: &[Rational], allowed: usize) -> (bool, Rational) {
        let (mut d, mut value) = self.reduced_costs(c);
        loop {
            self.dump(&d, &value);
            let Some(j) = (0..allowed).find(|&j| d[j].is_negative()) else {
                return (true, value);
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br || (ratio == br && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            let Some((r, _)) = best else {
                return (false, value);
            };
            self.pivot(r, j, &mut d, &mut value);
        }
    }

    fn dump(&self, d: &[Rational], value: &Rational) {
        if !log::log_enabled!(log::Level::Trace) {
            return;
        }
        trace!("tableau: basis {:?}, objective {value}", self.basis);
        for (row, rhs) in self.rows.iter().zip(&self.rhs) {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            trace!("  [{}] | {rhs}", cells.join(" "));
        }
        let cells: Vec<String> = d.iter().map(|v| v.to_string()).collect();
        trace!("  reduced [{}]", cells.join(" "));
    }
}

pub(crate) fn solve_standard(sf: StandardForm) -> StandardOutcome {
    let m = sf.a.len();
    let n = sf.c.len();
    debug_assert!(sf.b.iter().all(|b| !b.is_negative()));

    // phase 1: one artificial per row, columns n..n+m
    let cols = n + m;
    let rows: Vec<Vec<Rational>> = sf
        .a
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.resize(cols, Rational::zero());
            row[n + i] = Rational::one();
            row
        })
        .collect();
    let mut t = Tableau {
        rows,
        rhs: sf.b,
        basis: (n..n + m).collect(),
        cols,
    };
    let mut phase1 = vec![Rational::zero(); cols];
    for v in &mut phase1[n..] {
        *v = Rational::one();
    }
    let (_, infeas) = t.optimize(&phase1, cols);
    if infeas.is_positive() {
        return StandardOutcome::Infeasible;
    }

    // drive zero-level artificials out of the basis; drop redundant rows
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => {
                    let mut scratch = vec![Rational::zero(); cols];
                    let mut v = Rational::zero();
                    t.pivot(i, j, &mut scratch, &mut v);
                }
                None => {
                    t.rows.remove(i);
                    t.rhs.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    for row in &mut t.rows {
        row.truncate(n);
    }
    t.cols = n;

    let (bounded, value) = t.optimize(&sf.c, n);
    if !bounded {
        return StandardOutcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &bi) in t.basis.iter().enumerate() {
        x[bi] = t.rhs[i].clone();
    }
    StandardOutcome::Optimal { x, value }
}
