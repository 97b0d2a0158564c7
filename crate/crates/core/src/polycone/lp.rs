//! Two-phase dense simplex over exact rationals with Bland's rule.
//!
//! Variables are free; each is split into a difference of two nonnegative
//! columns internally. Infeasibility comes with a Farkas certificate,
//! unboundedness with a recession ray.

use num_traits::{One, Signed, Zero};

use super::PolyconeError;
use crate::rational::{Rat, RatVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

/// `<coeffs, x>  (>= | <= | =)  rhs`
#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint {
    pub coeffs: RatVec,
    pub relation: Relation,
    pub rhs: Rat,
}

impl LinearConstraint {
    pub fn ge(coeffs: RatVec, rhs: Rat) -> Self {
        Self { coeffs, relation: Relation::Ge, rhs }
    }

    pub fn le(coeffs: RatVec, rhs: Rat) -> Self {
        Self { coeffs, relation: Relation::Le, rhs }
    }

    pub fn eq(coeffs: RatVec, rhs: Rat) -> Self {
        Self { coeffs, relation: Relation::Eq, rhs }
    }

    pub fn is_satisfied(&self, x: &RatVec) -> bool {
        let lhs = self.coeffs.dot(x);
        match self.relation {
            Relation::Ge => lhs >= self.rhs,
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

/// Multipliers `y` with `sum y_i a_i = 0`, `sum y_i b_i > 0`, `y_i >= 0` on
/// `>=` rows and `y_i <= 0` on `<=` rows.
#[derive(Debug, Clone, PartialEq)]
pub struct FarkasCertificate {
    pub multipliers: Vec<Rat>,
}

impl FarkasCertificate {
    pub fn verify(&self, constraints: &[LinearConstraint]) -> bool {
        if self.multipliers.len() != constraints.len() || constraints.is_empty() {
            return false;
        }
        let dim = constraints[0].coeffs.dim();
        let mut combo = RatVec::zeros(dim);
        let mut rhs = Rat::zero();
        for (y, c) in self.multipliers.iter().zip(constraints) {
            let sign_ok = match c.relation {
                Relation::Ge => !y.is_negative(),
                Relation::Le => !y.is_positive(),
                Relation::Eq => true,
            };
            if !sign_ok {
                return false;
            }
            combo = &combo + &c.coeffs.scale(y);
            rhs += y * &c.rhs;
        }
        combo.is_zero() && rhs.is_positive()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Feasible(RatVec),
    Infeasible(FarkasCertificate),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }

    pub fn witness(&self) -> Option<&RatVec> {
        match self {
            Feasibility::Feasible(x) => Some(x),
            Feasibility::Infeasible(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { point: RatVec, value: Rat },
    /// `point` is feasible and `point + t * ray` stays feasible for all
    /// `t >= 0` while the objective decreases without bound.
    Unbounded { point: RatVec, ray: RatVec },
    Infeasible(FarkasCertificate),
}

pub fn lp_feasible(
    dim: usize,
    constraints: &[LinearConstraint],
) -> Result<Feasibility, PolyconeError> {
    match lp_minimize(&RatVec::zeros(dim), constraints)? {
        LpOutcome::Optimal { point, .. } => Ok(Feasibility::Feasible(point)),
        LpOutcome::Unbounded { point, .. } => Ok(Feasibility::Feasible(point)),
        LpOutcome::Infeasible(cert) => Ok(Feasibility::Infeasible(cert)),
    }
}

/// Minimizes `<objective, x>` over the constraint set.
pub fn lp_minimize(
    objective: &RatVec,
    constraints: &[LinearConstraint],
) -> Result<LpOutcome, PolyconeError> {
    let dim = objective.dim();
    for c in constraints {
        if c.coeffs.dim() != dim {
            return Err(PolyconeError::DimensionMismatch {
                expected: dim,
                found: c.coeffs.dim(),
            });
        }
    }
    if constraints.is_empty() {
        return Ok(if objective.is_zero() {
            LpOutcome::Optimal { point: RatVec::zeros(dim), value: Rat::zero() }
        } else {
            LpOutcome::Unbounded { point: RatVec::zeros(dim), ray: -objective }
        });
    }
    let mut tab = Tableau::new(dim, constraints);
    tab.run_phase_one();
    let phase_one_value = -tab.obj[tab.rhs_col()].clone();
    if phase_one_value.is_positive() {
        return Ok(LpOutcome::Infeasible(tab.farkas()));
    }
    tab.evict_artificials();
    tab.set_objective(objective);
    match tab.run(false) {
        Step::Optimal => {
            let point = tab.primal();
            let value = objective.dot(&point);
            Ok(LpOutcome::Optimal { point, value })
        }
        Step::Unbounded(col) => {
            let point = tab.primal();
            let ray = tab.ray(col);
            Ok(LpOutcome::Unbounded { point, ray })
        }
    }
}

/// Degenerate pivots in a row before switching to Bland's rule.
const DEGENERATE_LIMIT: usize = 20;

enum Step {
    Optimal,
    Unbounded(usize),
}

struct Tableau {
    dim: usize,
    n_slack: usize,
    m: usize,
    rows: Vec<Vec<Rat>>,
    obj: Vec<Rat>,
    basis: Vec<usize>,
    flips: Vec<bool>,
}

impl Tableau {
    fn new(dim: usize, constraints: &[LinearConstraint]) -> Self {
        let m = constraints.len();
        let n_slack = constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .count();
        let ncols = 2 * dim + n_slack + m + 1;
        let mut rows = Vec::with_capacity(m);
        let mut flips = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = 0;
        for (i, c) in constraints.iter().enumerate() {
            let mut row = vec![Rat::zero(); ncols];
            for j in 0..dim {
                row[j] = c.coeffs[j].clone();
                row[dim + j] = -c.coeffs[j].clone();
            }
            match c.relation {
                Relation::Ge => {
                    row[2 * dim + slack] = -Rat::one();
                    slack += 1;
                }
                Relation::Le => {
                    row[2 * dim + slack] = Rat::one();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            row[ncols - 1] = c.rhs.clone();
            let flip = c.rhs.is_negative();
            if flip {
                for x in row.iter_mut() {
                    *x = -&*x;
                }
            }
            row[2 * dim + n_slack + i] = Rat::one();
            // a slack with coefficient +1 can start in the basis
            let start = match c.relation {
                Relation::Eq => 2 * dim + n_slack + i,
                _ if row[2 * dim + slack - 1].is_one() => 2 * dim + slack - 1,
                _ => 2 * dim + n_slack + i,
            };
            rows.push(row);
            flips.push(flip);
            basis.push(start);
        }
        // phase-one reduced costs: artificial columns cost one
        let first_art = 2 * dim + n_slack;
        let mut obj = vec![Rat::zero(); ncols];
        for j in first_art..ncols - 1 {
            obj[j] = Rat::one();
        }
        for (row, &b) in rows.iter().zip(&basis) {
            if b < first_art {
                continue;
            }
            for (x, a) in obj.iter_mut().zip(row) {
                if !a.is_zero() {
                    *x -= a;
                }
            }
        }
        Tableau { dim, n_slack, m, rows, obj, basis, flips }
    }

    fn rhs_col(&self) -> usize {
        2 * self.dim + self.n_slack + self.m
    }

    fn first_art(&self) -> usize {
        2 * self.dim + self.n_slack
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = &*x - &f * p;
                }
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (x, p) in self.obj.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = &*x - &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    fn run_phase_one(&mut self) {
        // phase one is bounded below by zero
        let _ = self.run(true);
    }

    fn run(&mut self, allow_artificial: bool) -> Step {
        let rhs = self.rhs_col();
        let limit = if allow_artificial { rhs } else { self.first_art() };
        let mut degenerate = 0;
        loop {
            // most negative reduced cost; Bland's rule once pivots stall
            let enter = if degenerate > DEGENERATE_LIMIT {
                (0..limit).find(|&j| self.obj[j].is_negative())
            } else {
                (0..limit)
                    .filter(|&j| self.obj[j].is_negative())
                    .min_by(|&a, &b| self.obj[a].cmp(&self.obj[b]))
            };
            let Some(enter) = enter else {
                return Step::Optimal;
            };
            let mut best: Option<(usize, Rat)> = None;
            for i in 0..self.m {
                let a = &self.rows[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rows[i][rhs] / a;
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
            match best {
                None => return Step::Unbounded(enter),
                Some((r, ratio)) => {
                    if ratio.is_zero() {
                        degenerate += 1;
                    } else {
                        degenerate = 0;
                    }
                    self.pivot(r, enter)
                }
            }
        }
    }

    fn farkas(&self) -> FarkasCertificate {
        let first_art = self.first_art();
        let multipliers = (0..self.m)
            .map(|i| {
                let y = Rat::one() - &self.obj[first_art + i];
                if self.flips[i] {
                    -y
                } else {
                    y
                }
            })
            .collect();
        FarkasCertificate { multipliers }
    }

    fn evict_artificials(&mut self) {
        let first_art = self.first_art();
        for r in 0..self.m {
            if self.basis[r] < first_art {
                continue;
            }
            if let Some(c) = (0..first_art).find(|&c| !self.rows[r][c].is_zero()) {
                self.pivot(r, c);
            }
        }
    }

    fn set_objective(&mut self, objective: &RatVec) {
        let rhs = self.rhs_col();
        let mut cost = vec![Rat::zero(); rhs + 1];
        for j in 0..self.dim {
            cost[j] = objective[j].clone();
            cost[self.dim + j] = -objective[j].clone();
        }
        let mut obj = cost.clone();
        obj[rhs] = Rat::zero();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (x, a) in obj.iter_mut().zip(row) {
                *x = &*x - cb * a;
            }
        }
        self.obj = obj;
    }

    fn primal(&self) -> RatVec {
        let rhs = self.rhs_col();
        let mut x = RatVec::zeros(self.dim);
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.dim {
                x.0[b] += &self.rows[i][rhs];
            } else if b < 2 * self.dim {
                x.0[b - self.dim] -= &self.rows[i][rhs];
            }
        }
        x
    }

    fn ray(&self, enter: usize) -> RatVec {
        let mut full = vec![Rat::zero(); self.rhs_col()];
        full[enter] = Rat::one();
        for (i, &b) in self.basis.iter().enumerate() {
            full[b] = -self.rows[i][enter].clone();
        }
        RatVec((0..self.dim).map(|j| &full[j] - &full[self.dim + j]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn v(xs: &[i64]) -> RatVec {
        RatVec::from_ints(xs)
    }

    #[test]
    fn contradictory_bounds_are_infeasible_with_certificate() {
        let cs = vec![
            LinearConstraint::ge(v(&[1]), rat(1)),
            LinearConstraint::ge(v(&[-1]), rat(0)),
        ];
        match lp_feasible(1, &cs).unwrap() {
            Feasibility::Infeasible(cert) => assert!(cert.verify(&cs)),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn simplex_with_equality_is_feasible() {
        let cs = vec![
            LinearConstraint::ge(v(&[1, 0]), rat(0)),
            LinearConstraint::ge(v(&[0, 1]), rat(0)),
            LinearConstraint::eq(v(&[1, 1]), rat(1)),
        ];
        let f = lp_feasible(2, &cs).unwrap();
        let w = f.witness().expect("feasible");
        assert!(cs.iter().all(|c| c.is_satisfied(w)));
    }

    #[test]
    fn diagonal_ray_witness() {
        let cs = vec![
            LinearConstraint::ge(v(&[1, -1]), rat(0)),
            LinearConstraint::ge(v(&[-1, 1]), rat(0)),
            LinearConstraint::ge(v(&[1, 0]), rat(3)),
        ];
        let f = lp_feasible(2, &cs).unwrap();
        let w = f.witness().unwrap();
        assert_eq!(w[0], w[1]);
        assert!(w[0] >= rat(3));
    }

    #[test]
    fn minimization_optimal_and_unbounded() {
        let quadrant = vec![
            LinearConstraint::ge(v(&[1, 0]), rat(0)),
            LinearConstraint::ge(v(&[0, 1]), rat(0)),
        ];
        match lp_minimize(&v(&[1, 1]), &quadrant).unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(0)),
            o => panic!("{o:?}"),
        }
        match lp_minimize(&v(&[1, -1]), &quadrant).unwrap() {
            LpOutcome::Unbounded { point, ray } => {
                assert!(quadrant.iter().all(|c| c.is_satisfied(&point)));
                assert!(v(&[1, -1]).dot(&ray) < rat(0));
                assert!(quadrant.iter().all(|c| c.coeffs.dot(&ray) >= rat(0)));
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let cs = vec![LinearConstraint::ge(v(&[1, 0]), rat(0))];
        assert!(matches!(
            lp_feasible(3, &cs),
            Err(PolyconeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn degenerate_redundant_equalities() {
        let cs = vec![
            LinearConstraint::eq(v(&[1, 1]), rat(2)),
            LinearConstraint::eq(v(&[2, 2]), rat(4)),
            LinearConstraint::ge(v(&[1, 0]), rat(0)),
            LinearConstraint::ge(v(&[0, 1]), rat(0)),
        ];
        match lp_minimize(&v(&[1, 0]), &cs).unwrap() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat(0));
                assert!(cs.iter().all(|c| c.is_satisfied(&point)));
            }
            o => panic!("{o:?}"),
        }
    }
}
