//! Exact linear programming.
//!
//! [`LinearSystem`] collects weak (`<=`, `>=`, `=`) and strict (`<`, `>`)
//! constraints over named variables. Strict constraints are decided with a
//! single shared margin `eps`: each `a·x < b` becomes `a·x + eps <= b`, the
//! margin is maximized subject to `eps <= 1`, and the strict system is
//! feasible exactly when the optimum is positive.

pub mod rational;
mod simplex;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
pub use rational::{int, parse_rational, rat, Rational};
use simplex::{solve_standard, StandardForm, StandardOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
    Lt,
    Gt,
}

impl Relation {
    pub fn is_strict(self) -> bool {
        matches!(self, Relation::Lt | Relation::Gt)
    }

    fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Lt => lhs < rhs,
            Relation::Gt => lhs > rhs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone)]
pub struct Variable {
    pub name: String,
    pub nonneg: bool,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rel: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn lhs(&self, point: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(point)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, x)| c * x)
            .sum()
    }

    pub fn holds_at(&self, point: &[Rational]) -> bool {
        self.rel.holds(&self.lhs(point), &self.rhs)
    }
}

#[derive(Debug, Clone)]
pub struct Objective {
    pub coeffs: Vec<Rational>,
    pub sense: Sense,
}

#[derive(Debug, Clone, Default)]
pub struct LinearSystem {
    vars: Vec<Variable>,
    constraints: Vec<Constraint>,
    objective: Option<Objective>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    /// `optimum` is `None` when no objective was given.
    Feasible {
        point: Vec<Rational>,
        optimum: Option<Rational>,
    },
    /// The strict region is nonempty but its supremum lies on an open face.
    NotAttained {
        point: Vec<Rational>,
        supremum: Rational,
    },
    Infeasible,
    Unbounded,
}

impl Outcome {
    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            Outcome::Feasible { point, .. } | Outcome::NotAttained { point, .. } => Some(point),
            _ => None,
        }
    }
}

impl LinearSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, nonneg: bool) -> usize {
        self.vars.push(Variable {
            name: name.into(),
            nonneg,
        });
        self.vars.len() - 1
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> Option<&Objective> {
        self.objective.as_ref()
    }

    pub fn push(&mut self, c: Constraint) {
        self.constraints.push(c);
    }

    /// Adds `Σ coeff·x_var  rel  rhs` from sparse `(var, coeff)` terms.
    pub fn constrain(&mut self, terms: &[(usize, Rational)], rel: Relation, rhs: Rational) {
        let mut coeffs = vec![Rational::zero(); self.vars.len()];
        for (v, c) in terms {
            coeffs[*v] += c;
        }
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    pub fn set_objective(&mut self, terms: &[(usize, Rational)], sense: Sense) {
        let mut coeffs = vec![Rational::zero(); self.vars.len()];
        for (v, c) in terms {
            coeffs[*v] += c;
        }
        self.objective = Some(Objective { coeffs, sense });
    }

    pub fn has_strict(&self) -> bool {
        self.constraints.iter().any(|c| c.rel.is_strict())
    }

    /// Exact check that `point` satisfies every constraint, strict ones strictly.
    pub fn satisfied_by(&self, point: &[Rational]) -> bool {
        point.len() == self.vars.len()
            && self.vars.iter().zip(point).all(|(v, x)| !v.nonneg || !x.is_negative())
            && self.constraints.iter().all(|c| c.holds_at(point))
    }

    fn validate(&self) -> Result<()> {
        let n = self.vars.len();
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(Error::MalformedSystem(format!(
                    "constraint {i} has {} coefficients for {n} variables",
                    c.coeffs.len()
                )));
            }
        }
        if let Some(o) = &self.objective {
            if o.coeffs.len() != n {
                return Err(Error::MalformedSystem(format!(
                    "objective has {} coefficients for {n} variables",
                    o.coeffs.len()
                )));
            }
        }
        Ok(())
    }

    /// The system with every strict relation replaced by its weak closure.
    fn closure(&self) -> LinearSystem {
        let mut s = self.clone();
        for c in &mut s.constraints {
            c.rel = match c.rel {
                Relation::Lt => Relation::Le,
                Relation::Gt => Relation::Ge,
                r => r,
            };
        }
        s
    }
}

/// Solves a system with weak constraints only.
fn solve_weak(sys: &LinearSystem) -> Outcome {
    debug_assert!(!sys.has_strict());
    // column layout: nonneg vars take one column, free vars a (+, -) pair
    let mut col_of = Vec::with_capacity(sys.vars.len());
    let mut ncols = 0;
    for v in &sys.vars {
        col_of.push(ncols);
        ncols += if v.nonneg { 1 } else { 2 };
    }
    let structural = ncols;
    let slacks = sys.constraints.iter().filter(|c| c.rel != Relation::Eq).count();
    let total = structural + slacks;

    let mut a = Vec::with_capacity(sys.constraints.len());
    let mut b = Vec::with_capacity(sys.constraints.len());
    let mut slack = structural;
    for c in &sys.constraints {
        let mut row = vec![Rational::zero(); total];
        for (j, v) in sys.vars.iter().enumerate() {
            let coef = &c.coeffs[j];
            if coef.is_zero() {
                continue;
            }
            row[col_of[j]] = coef.clone();
            if !v.nonneg {
                row[col_of[j] + 1] = -coef;
            }
        }
        match c.rel {
            Relation::Le => {
                row[slack] = Rational::one();
                slack += 1;
            }
            Relation::Ge => {
                row[slack] = -Rational::one();
                slack += 1;
            }
            _ => {}
        }
        let mut rhs = c.rhs.clone();
        if rhs.is_negative() {
            for v in &mut row {
                *v = -&*v;
            }
            rhs = -rhs;
        }
        a.push(row);
        b.push(rhs);
    }

    let mut cost = vec![Rational::zero(); total];
    let maximize = matches!(sys.objective, Some(Objective { sense: Sense::Maximize, .. }));
    if let Some(o) = &sys.objective {
        for (j, v) in sys.vars.iter().enumerate() {
            let coef = if maximize { -&o.coeffs[j] } else { o.coeffs[j].clone() };
            if !v.nonneg {
                cost[col_of[j] + 1] = -&coef;
            }
            cost[col_of[j]] = coef;
        }
    }

    match solve_standard(StandardForm { a, b, c: cost }) {
        StandardOutcome::Infeasible => Outcome::Infeasible,
        StandardOutcome::Unbounded => Outcome::Unbounded,
        StandardOutcome::Optimal { x, value } => {
            let point: Vec<Rational> = sys
                .vars
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    if v.nonneg {
                        x[col_of[j]].clone()
                    } else {
                        &x[col_of[j]] - &x[col_of[j] + 1]
                    }
                })
                .collect();
            let optimum = sys.objective.as_ref().map(|_| if maximize { -value } else { value });
            Outcome::Feasible { point, optimum }
        }
    }
}

/// Exact verdict for any system; strict constraints hold strictly at the
/// returned point.
pub fn solve(sys: &LinearSystem) -> Result<Outcome> {
    sys.validate()?;
    if !sys.has_strict() {
        let out = solve_weak(sys);
        debug_assert!(out.point().is_none_or(|p| sys.satisfied_by(p)));
        return Ok(out);
    }
    let Some(point) = strictly_feasible(sys)? else {
        return Ok(Outcome::Infeasible);
    };
    if sys.objective.is_none() {
        return Ok(Outcome::Feasible { point, optimum: None });
    }
    match solve_weak(&sys.closure()) {
        Outcome::Unbounded => Ok(Outcome::Unbounded),
        Outcome::Feasible { optimum: Some(best), .. } => {
            let o = sys.objective.as_ref().unwrap();
            let mut pinned = sys.clone();
            pinned.objective = None;
            pinned.push(Constraint {
                coeffs: o.coeffs.clone(),
                rel: Relation::Eq,
                rhs: best.clone(),
            });
            Ok(match strictly_feasible(&pinned)? {
                Some(p) => Outcome::Feasible {
                    point: p,
                    optimum: Some(best),
                },
                None => Outcome::NotAttained { point, supremum: best },
            })
        }
        // a strictly feasible point exists, so the closure is feasible
        other => unreachable!("closure of a feasible system reported {other:?}"),
    }
}

/// A point meeting all weak constraints and all strict ones strictly, if any.
/// The objective, if present, is ignored.
pub fn strictly_feasible(sys: &LinearSystem) -> Result<Option<Vec<Rational>>> {
    sys.validate()?;
    let mut base = sys.clone();
    base.objective = None;
    if !base.has_strict() {
        return Ok(solve_weak(&base).point().map(<[Rational]>::to_vec));
    }
    let mut lifted = LinearSystem::new();
    for v in &base.vars {
        lifted.add_var(v.name.clone(), v.nonneg);
    }
    let eps = lifted.add_var("eps", false);
    for c in &base.constraints {
        let mut coeffs = c.coeffs.clone();
        let (rel, margin) = match c.rel {
            Relation::Lt => (Relation::Le, Rational::one()),
            Relation::Gt => (Relation::Ge, -Rational::one()),
            r => (r, Rational::zero()),
        };
        coeffs.push(margin);
        lifted.push(Constraint {
            coeffs,
            rel,
            rhs: c.rhs.clone(),
        });
    }
    lifted.constrain(&[(eps, Rational::one())], Relation::Le, Rational::one());
    lifted.set_objective(&[(eps, Rational::one())], Sense::Maximize);
    match solve_weak(&lifted) {
        Outcome::Feasible { point, optimum: Some(m) } if m.is_positive() => {
            let mut p = point;
            p.truncate(eps);
            debug_assert!(sys.satisfied_by(&p));
            Ok(Some(p))
        }
        _ => Ok(None),
    }
}

/// Largest shared margin by which the strict constraints can hold, with the
/// point attaining it; `None` when the weak part is infeasible.
pub fn max_margin(sys: &LinearSystem) -> Result<Option<(Vec<Rational>, Rational)>> {
    sys.validate()?;
    let mut lifted = LinearSystem::new();
    for v in &sys.vars {
        lifted.add_var(v.name.clone(), v.nonneg);
    }
    let eps = lifted.add_var("eps", false);
    for c in &sys.constraints {
        let mut coeffs = c.coeffs.clone();
        let (rel, margin) = match c.rel {
            Relation::Lt => (Relation::Le, Rational::one()),
            Relation::Gt => (Relation::Ge, -Rational::one()),
            r => (r, Rational::zero()),
        };
        coeffs.push(margin);
        lifted.push(Constraint {
            coeffs,
            rel,
            rhs: c.rhs.clone(),
        });
    }
    lifted.constrain(&[(eps, Rational::one())], Relation::Le, Rational::one());
    lifted.set_objective(&[(eps, Rational::one())], Sense::Maximize);
    Ok(match solve_weak(&lifted) {
        Outcome::Feasible { mut point, optimum: Some(m) } => {
            point.truncate(eps);
            Some((point, m))
        }
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximize_margin_example() {
        let mut s = LinearSystem::new();
        let x = s.add_var("x", false);
        let e = s.add_var("eps", false);
        s.constrain(&[(x, int(1)), (e, int(-1))], Relation::Ge, int(0));
        s.constrain(&[(x, int(1))], Relation::Le, int(1));
        s.constrain(&[(e, int(1))], Relation::Le, int(1));
        s.set_objective(&[(e, int(1))], Sense::Maximize);
        assert_eq!(
            solve(&s).unwrap(),
            Outcome::Feasible { point: vec![int(1), int(1)], optimum: Some(int(1)) }
        );
    }

    #[test]
    fn contradictory_strict_pair() {
        let mut s = LinearSystem::new();
        let x = s.add_var("x", false);
        s.constrain(&[(x, int(1))], Relation::Lt, int(0));
        s.constrain(&[(x, int(1))], Relation::Gt, int(0));
        assert_eq!(solve(&s).unwrap(), Outcome::Infeasible);
        assert_eq!(strictly_feasible(&s).unwrap(), None);
    }

    #[test]
    fn strict_simplex_interior() {
        let mut s = LinearSystem::new();
        let w: Vec<usize> = (1..=3).map(|i| s.add_var(format!("w{i}"), true)).collect();
        s.constrain(&[(w[2], int(1)), (w[1], int(-1))], Relation::Gt, int(0));
        s.constrain(&[(w[1], int(1)), (w[0], int(-1))], Relation::Gt, int(0));
        s.constrain(&[(w[0], int(1))], Relation::Gt, int(0));
        s.constrain(&[(w[0], int(1)), (w[1], int(1)), (w[2], int(1))], Relation::Eq, int(1));
        let p = strictly_feasible(&s).unwrap().unwrap();
        assert!(p[2] > p[1] && p[1] > p[0] && p[0] > int(0));
        assert!(s.satisfied_by(&p));
    }

    #[test]
    fn no_strict_constraints_reduces_to_feasibility() {
        let mut s = LinearSystem::new();
        let x = s.add_var("x", true);
        s.constrain(&[(x, int(1))], Relation::Le, int(3));
        let p = strictly_feasible(&s).unwrap().unwrap();
        assert!(s.satisfied_by(&p));
        s.constrain(&[(x, int(1))], Relation::Ge, int(4));
        assert_eq!(strictly_feasible(&s).unwrap(), None);
    }

    #[test]
    fn unbounded_and_not_attained() {
        let mut s = LinearSystem::new();
        let x = s.add_var("x", false);
        s.constrain(&[(x, int(1))], Relation::Ge, int(0));
        s.set_objective(&[(x, int(1))], Sense::Maximize);
        assert_eq!(solve(&s).unwrap(), Outcome::Unbounded);

        let mut s = LinearSystem::new();
        let x = s.add_var("x", false);
        s.constrain(&[(x, int(1))], Relation::Lt, int(2));
        s.constrain(&[(x, int(1))], Relation::Ge, int(0));
        s.set_objective(&[(x, int(1))], Sense::Maximize);
        match solve(&s).unwrap() {
            Outcome::NotAttained { point, supremum } => {
                assert_eq!(supremum, int(2));
                assert!(point[0] < int(2));
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let mut s = LinearSystem::new();
        s.add_var("x", false);
        s.push(Constraint { coeffs: vec![int(1), int(2)], rel: Relation::Le, rhs: int(0) });
        assert!(matches!(solve(&s), Err(Error::MalformedSystem(_))));
    }

    #[test]
    fn redundant_equalities() {
        let mut s = LinearSystem::new();
        let x = s.add_var("x", false);
        let y = s.add_var("y", false);
        s.constrain(&[(x, int(1)), (y, int(1))], Relation::Eq, int(2));
        s.constrain(&[(x, int(2)), (y, int(2))], Relation::Eq, int(4));
        s.constrain(&[(x, int(1)), (y, int(-1))], Relation::Eq, int(0));
        s.set_objective(&[(x, int(1))], Sense::Minimize);
        assert_eq!(
            solve(&s).unwrap(),
            Outcome::Feasible { point: vec![int(1), int(1)], optimum: Some(int(1)) }
        );
    }
}
