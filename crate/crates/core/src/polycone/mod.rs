//! Polyhedral sets and polyhedral cones over exact rationals.
//!
//! A polyhedral set is a finite intersection of closed halfspaces
//! `K(xi, c) = {x : <xi, x> >= c}`. Predicates are decided by the exact
//! simplex in [`lp`] or by exact extreme rays, so results never depend on a
//! floating tolerance.

pub mod lp;
pub mod rays;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{self, rat, Rat, RatVec};
pub use lp::{
    lp_feasible, lp_minimize, FarkasCertificate, Feasibility, LinearConstraint, LpOutcome,
    Relation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyconeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("halfspace normal must be nonzero")]
    ZeroNormal,
    #[error("polyhedral set is empty")]
    Infeasible,
    #[error("cone is not full-dimensional")]
    NotFullDimensional,
    #[error("cone description requires both halfspaces and generators to agree")]
    InconsistentRepresentation,
    #[error("cone has neither halfspaces nor generators")]
    MissingRepresentation,
    #[error("enumeration too large ({0} subsets)")]
    TooLarge(usize),
    #[error("invalid JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpace {
    normal: RatVec,
    offset: Rat,
}

impl HalfSpace {
    pub fn new(normal: RatVec, offset: Rat) -> Result<Self, PolyconeError> {
        if normal.is_zero() {
            return Err(PolyconeError::ZeroNormal);
        }
        Ok(Self { normal, offset })
    }

    pub fn normal(&self) -> &RatVec {
        &self.normal
    }

    pub fn offset(&self) -> &Rat {
        &self.offset
    }

    pub fn contains(&self, x: &RatVec) -> bool {
        self.normal.dot(x) >= self.offset
    }

    fn constraint(&self) -> LinearConstraint {
        LinearConstraint::ge(self.normal.clone(), self.offset.clone())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedralSet {
    dim: usize,
    halfspaces: Vec<HalfSpace>,
}

impl PolyhedralSet {
    pub fn new(dim: usize, halfspaces: Vec<HalfSpace>) -> Result<Self, PolyconeError> {
        for h in &halfspaces {
            if h.normal.dim() != dim {
                return Err(PolyconeError::DimensionMismatch { expected: dim, found: h.normal.dim() });
            }
        }
        Ok(Self { dim, halfspaces })
    }

    /// Convenience constructor from `(normal, offset)` integer pairs.
    pub fn from_ints(dim: usize, data: &[(&[i64], i64)]) -> Result<Self, PolyconeError> {
        let hs = data
            .iter()
            .map(|(n, c)| HalfSpace::new(RatVec::from_ints(n), rat(*c)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(dim, hs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    pub fn contains(&self, x: &RatVec) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x))
    }

    pub fn normals(&self) -> Vec<RatVec> {
        self.halfspaces.iter().map(|h| h.normal.clone()).collect()
    }

    pub fn constraints(&self) -> Vec<LinearConstraint> {
        self.halfspaces.iter().map(HalfSpace::constraint).collect()
    }

    /// Intersection with extra halfspaces.
    pub fn intersect(&self, extra: &[HalfSpace]) -> Result<Self, PolyconeError> {
        let mut hs = self.halfspaces.clone();
        hs.extend(extra.iter().cloned());
        Self::new(self.dim, hs)
    }

    pub fn feasibility(&self) -> Result<Feasibility, PolyconeError> {
        lp_feasible(self.dim, &self.constraints())
    }

    pub fn is_empty(&self) -> Result<bool, PolyconeError> {
        Ok(!self.feasibility()?.is_feasible())
    }

    fn require_feasible(&self) -> Result<RatVec, PolyconeError> {
        match self.feasibility()? {
            Feasibility::Feasible(x) => Ok(x),
            Feasibility::Infeasible(_) => Err(PolyconeError::Infeasible),
        }
    }
}

/// A polyhedral cone kept in halfspace form `{x : <n_i, x> >= 0}`,
/// generator form `{sum s_j g_j : s_j >= 0}`, or both.
#[derive(Debug, Clone, PartialEq)]
pub struct Cone {
    dim: usize,
    halfspaces: Option<Vec<RatVec>>,
    generators: Option<Vec<RatVec>>,
}

impl Cone {
    pub fn from_halfspaces(dim: usize, normals: Vec<RatVec>) -> Result<Self, PolyconeError> {
        check_dims(dim, &normals)?;
        if normals.iter().any(RatVec::is_zero) {
            return Err(PolyconeError::ZeroNormal);
        }
        Ok(Self { dim, halfspaces: Some(normals), generators: None })
    }

    pub fn from_generators(dim: usize, generators: Vec<RatVec>) -> Result<Self, PolyconeError> {
        check_dims(dim, &generators)?;
        Ok(Self { dim, halfspaces: None, generators: Some(generators) })
    }

    /// Both descriptions; containment is checked in both directions.
    pub fn with_both(
        dim: usize,
        normals: Vec<RatVec>,
        generators: Vec<RatVec>,
    ) -> Result<Self, PolyconeError> {
        let h = Self::from_halfspaces(dim, normals)?;
        let g = Self::from_generators(dim, generators)?;
        if !h.contains_cone(&g)? || !g.contains_cone(&h)? {
            return Err(PolyconeError::InconsistentRepresentation);
        }
        Ok(Self { dim, halfspaces: h.halfspaces, generators: g.generators })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn stored_halfspaces(&self) -> Option<&[RatVec]> {
        self.halfspaces.as_deref()
    }

    pub fn stored_generators(&self) -> Option<&[RatVec]> {
        self.generators.as_deref()
    }

    pub fn halfspace_normals(&self) -> Result<Vec<RatVec>, PolyconeError> {
        match (&self.halfspaces, &self.generators) {
            (Some(h), _) => Ok(h.clone()),
            (None, Some(g)) => rays::generators_to_halfspaces(g, self.dim),
            (None, None) => Err(PolyconeError::MissingRepresentation),
        }
    }

    pub fn generator_list(&self) -> Result<Vec<RatVec>, PolyconeError> {
        match (&self.generators, &self.halfspaces) {
            (Some(g), _) => Ok(g.clone()),
            (None, Some(h)) => Ok(rays::halfspaces_to_generators(h, self.dim)?.as_list()),
            (None, None) => Err(PolyconeError::MissingRepresentation),
        }
    }

    /// Fills in whichever description is missing.
    pub fn completed(&self) -> Result<Self, PolyconeError> {
        Ok(Self {
            dim: self.dim,
            halfspaces: Some(self.halfspace_normals()?),
            generators: Some(self.generator_list()?),
        })
    }

    pub fn contains(&self, x: &RatVec) -> Result<bool, PolyconeError> {
        if let Some(h) = &self.halfspaces {
            return Ok(h.iter().all(|n| !n.dot(x).is_negative()));
        }
        let g = self.generators.as_ref().ok_or(PolyconeError::MissingRepresentation)?;
        generated_contains(self.dim, g, x)
    }

    pub fn contains_cone(&self, other: &Cone) -> Result<bool, PolyconeError> {
        for g in other.generator_list()? {
            if !self.contains(&g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True when the cone contains no line.
    pub fn is_pointed(&self) -> Result<bool, PolyconeError> {
        if let Some(h) = &self.halfspaces {
            return lineality_is_trivial(self.dim, h);
        }
        let g = self.generators.as_ref().ok_or(PolyconeError::MissingRepresentation)?;
        generated_is_pointed(self.dim, g)
    }

    pub fn is_zero(&self) -> Result<bool, PolyconeError> {
        Ok(self.generator_list()?.iter().all(RatVec::is_zero))
    }
}

fn check_dims(dim: usize, vs: &[RatVec]) -> Result<(), PolyconeError> {
    for v in vs {
        if v.dim() != dim {
            return Err(PolyconeError::DimensionMismatch { expected: dim, found: v.dim() });
        }
    }
    Ok(())
}

/// LP: `x = sum s_j g_j` with `s >= 0`.
fn generated_contains(dim: usize, gens: &[RatVec], x: &RatVec) -> Result<bool, PolyconeError> {
    let m = gens.len();
    if m == 0 {
        return Ok(x.is_zero());
    }
    let mut cs = Vec::with_capacity(dim + m);
    for i in 0..dim {
        let row = RatVec(gens.iter().map(|g| g[i].clone()).collect());
        cs.push(LinearConstraint::eq(row, x[i].clone()));
    }
    for j in 0..m {
        cs.push(LinearConstraint::ge(RatVec::unit(m, j), Rat::zero()));
    }
    Ok(lp_feasible(m, &cs)?.is_feasible())
}

/// LP: no nontrivial `s >= 0` with `sum s_j g_j = 0`.
fn generated_is_pointed(dim: usize, gens: &[RatVec]) -> Result<bool, PolyconeError> {
    let gens: Vec<&RatVec> = gens.iter().filter(|g| !g.is_zero()).collect();
    let m = gens.len();
    if m == 0 {
        return Ok(true);
    }
    let mut cs = Vec::with_capacity(dim + m + 1);
    for i in 0..dim {
        let row = RatVec(gens.iter().map(|g| g[i].clone()).collect());
        cs.push(LinearConstraint::eq(row, Rat::zero()));
    }
    for j in 0..m {
        cs.push(LinearConstraint::ge(RatVec::unit(m, j), Rat::zero()));
    }
    cs.push(LinearConstraint::eq(RatVec(vec![Rat::one(); m]), Rat::one()));
    Ok(!lp_feasible(m, &cs)?.is_feasible())
}

/// LP per coordinate: is there `a` with `N a = 0` and `a_j = 1`?
fn lineality_is_trivial(dim: usize, normals: &[RatVec]) -> Result<bool, PolyconeError> {
    for j in 0..dim {
        let mut cs: Vec<LinearConstraint> = normals
            .iter()
            .map(|n| LinearConstraint::eq(n.clone(), Rat::zero()))
            .collect();
        cs.push(LinearConstraint::eq(RatVec::unit(dim, j), Rat::one()));
        if lp_feasible(dim, &cs)?.is_feasible() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Recession cone: `C(P) = ∩ K(xi_i, 0)` for `P = ∩ K(xi_i, c_i)`.
pub fn asymptotic_cone(p: &PolyhedralSet) -> Cone {
    Cone {
        dim: p.dim,
        halfspaces: Some(p.halfspaces.iter().map(|h| h.normal.clone()).collect()),
        generators: None,
    }
}

/// Dual cone `C' = {xi : <xi, C> >= 0}`.
///
/// For a halfspace cone the dual is generated by the normals; for a
/// generated cone the dual is cut out by the generators.
pub fn dual_cone(c: &Cone) -> Result<Cone, PolyconeError> {
    let generators = c.halfspaces.as_ref().map(|h| rays::dedup_rays(h));
    let halfspaces = c
        .generators
        .as_ref()
        .map(|g| g.iter().filter(|v| !v.is_zero()).cloned().collect::<Vec<_>>());
    if generators.is_none() && halfspaces.is_none() {
        return Err(PolyconeError::MissingRepresentation);
    }
    let dual = Cone { dim: c.dim, halfspaces, generators };
    debug_assert!(dual_is_sound(c, &dual).unwrap_or(true));
    Ok(dual)
}

fn dual_is_sound(c: &Cone, dual: &Cone) -> Result<bool, PolyconeError> {
    let cg = c.generator_list()?;
    for g in dual.generator_list()? {
        if cg.iter().any(|x| g.dot(x).is_negative()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Proper means the asymptotic cone contains no line.
pub fn is_proper(p: &PolyhedralSet) -> Result<bool, PolyconeError> {
    p.require_feasible()?;
    let normals: Vec<RatVec> = p.halfspaces.iter().map(|h| h.normal.clone()).collect();
    lineality_is_trivial(p.dim, &normals)
}

/// Whether `<xi, .>` is bounded below on `p`, decided by LP minimization.
pub fn bounded_below(p: &PolyhedralSet, xi: &RatVec) -> Result<bool, PolyconeError> {
    if xi.dim() != p.dim {
        return Err(PolyconeError::DimensionMismatch { expected: p.dim, found: xi.dim() });
    }
    p.require_feasible()?;
    Ok(matches!(lp_minimize(xi, &p.constraints())?, LpOutcome::Optimal { .. }))
}

/// Compact iff the asymptotic cone is `{0}`.
pub fn is_compact(p: &PolyhedralSet) -> Result<bool, PolyconeError> {
    p.require_feasible()?;
    let gens = rays::halfspaces_to_generators(&p.normals(), p.dim)?;
    Ok(gens.rays.is_empty() && gens.lineality.is_empty())
}

/// Extremes of `<xi, a>` over `C(P) ∩ {|a|_1 = 1}`, computed orthant by
/// orthant so that the normalization stays linear. `None` when the slice is
/// empty, i.e. `C(P) = {0}`.
pub fn slice_range(p: &PolyhedralSet, xi: &RatVec) -> Result<Option<(Rat, Rat)>, PolyconeError> {
    let d = p.dim;
    let normals: Vec<RatVec> = p.halfspaces.iter().map(|h| h.normal.clone()).collect();
    let mut range: Option<(Rat, Rat)> = None;
    for mask in 0..(1u64 << d) {
        let signs: Vec<Rat> = (0..d)
            .map(|j| if mask >> j & 1 == 1 { -Rat::one() } else { Rat::one() })
            .collect();
        let mut cs: Vec<LinearConstraint> = normals
            .iter()
            .map(|n| LinearConstraint::ge(n.clone(), Rat::zero()))
            .collect();
        for (j, s) in signs.iter().enumerate() {
            cs.push(LinearConstraint::ge(RatVec::unit(d, j).scale(s), Rat::zero()));
        }
        cs.push(LinearConstraint::eq(RatVec(signs.clone()), Rat::one()));
        let lo = match lp_minimize(xi, &cs)? {
            LpOutcome::Optimal { value, .. } => value,
            LpOutcome::Infeasible(_) => continue,
            LpOutcome::Unbounded { .. } => unreachable!("slice is bounded"),
        };
        let hi = match lp_minimize(&-xi, &cs)? {
            LpOutcome::Optimal { value, .. } => -value,
            _ => unreachable!("slice is bounded and feasible"),
        };
        range = Some(match range {
            None => (lo, hi),
            Some((a, b)) => (a.min(lo), b.max(hi)),
        });
    }
    Ok(range)
}

/// `<xi, .>` restricted to `p` is a proper map iff `C(P) ∩ xi^perp = {0}`.
/// This is `xi ∈ ±Int C(P)'` (constant strict sign on `C(P) \ {0}`) except
/// when `C(P)` is a single line, where `±Int C(P)'` is empty.
pub fn proper_projection_directions(
    p: &PolyhedralSet,
    xi: &RatVec,
) -> Result<bool, PolyconeError> {
    if xi.dim() != p.dim {
        return Err(PolyconeError::DimensionMismatch { expected: p.dim, found: xi.dim() });
    }
    p.require_feasible()?;
    let gens = rays::halfspaces_to_generators(&p.normals(), p.dim)?;
    if !gens.lineality.is_empty() {
        // a cone that is exactly a line meets xi^perp only at 0 unless orthogonal
        return Ok(gens.rays.is_empty() && gens.lineality.len() == 1 && !gens.lineality[0].dot(xi).is_zero());
    }
    // pointed: a ray on xi^perp, or rays on both sides, give a nonzero
    // point of C(P) ∩ xi^perp
    let signs: Vec<std::cmp::Ordering> = gens.rays.iter().map(|g| g.dot(xi).cmp(&Rat::zero())).collect();
    Ok(signs.iter().all(|s| s.is_gt()) || signs.iter().all(|s| s.is_lt()))
}

/// A point with every defining inequality strict; slacks are at least one
/// for halfspace cones. Deterministic for a fixed input order.
pub fn interior_point(c: &Cone) -> Result<RatVec, PolyconeError> {
    let d = c.dim;
    if let Some(g) = &c.generators {
        if crate::rational::linalg::rank(g) < d {
            return Err(PolyconeError::NotFullDimensional);
        }
    }
    let normals = c.halfspace_normals()?;
    if normals.is_empty() {
        return Ok(RatVec::zeros(d));
    }
    // maximize t subject to <n_i, x> >= t, t <= 1
    let mut cs: Vec<LinearConstraint> = normals
        .iter()
        .map(|n| {
            let mut row = n.0.clone();
            row.push(-Rat::one());
            LinearConstraint::ge(RatVec(row), Rat::zero())
        })
        .collect();
    cs.push(LinearConstraint::le(RatVec::unit(d + 1, d), Rat::one()));
    let objective = -&RatVec::unit(d + 1, d);
    match lp_minimize(&objective, &cs)? {
        LpOutcome::Optimal { point, .. } => {
            let t = point[d].clone();
            if !t.is_positive() {
                return Err(PolyconeError::NotFullDimensional);
            }
            Ok(RatVec(point.0[..d].iter().map(|x| x / &t).collect()))
        }
        _ => Err(PolyconeError::NotFullDimensional),
    }
}

/// JSON form shared by polyhedral sets and cones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyhedralDoc {
    pub dim: usize,
    #[serde(default)]
    pub halfspaces: Vec<HalfSpaceDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<RatVec>>,
    /// Directions to test for boundedness/proper projection (CLI input).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directions: Option<Vec<RatVec>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSpaceDoc {
    pub normal: RatVec,
    #[serde(with = "rational::rat_string", default = "Rat::zero")]
    pub offset: Rat,
}

impl PolyhedralDoc {
    pub fn from_json(s: &str) -> Result<Self, PolyconeError> {
        serde_json::from_str(s).map_err(|e| PolyconeError::Json(e.to_string()))
    }

    pub fn to_polyhedral_set(&self) -> Result<PolyhedralSet, PolyconeError> {
        let hs = self
            .halfspaces
            .iter()
            .map(|h| HalfSpace::new(h.normal.clone(), h.offset.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        PolyhedralSet::new(self.dim, hs)
    }

    /// Cone from the document; offsets must be zero when halfspaces are given.
    pub fn to_cone(&self) -> Result<Cone, PolyconeError> {
        let normals: Vec<RatVec> = self.halfspaces.iter().map(|h| h.normal.clone()).collect();
        match (&self.generators, self.halfspaces.is_empty()) {
            (Some(g), true) => Cone::from_generators(self.dim, g.clone()),
            (Some(g), false) => Cone::with_both(self.dim, normals, g.clone()),
            (None, _) => Cone::from_halfspaces(self.dim, normals),
        }
    }

    pub fn from_set(p: &PolyhedralSet) -> Self {
        Self {
            dim: p.dim,
            halfspaces: p
                .halfspaces
                .iter()
                .map(|h| HalfSpaceDoc { normal: h.normal.clone(), offset: h.offset.clone() })
                .collect(),
            generators: None,
            directions: None,
        }
    }

    pub fn from_cone(c: &Cone) -> Self {
        Self {
            dim: c.dim,
            halfspaces: c
                .halfspaces
                .iter()
                .flatten()
                .map(|n| HalfSpaceDoc { normal: n.clone(), offset: Rat::zero() })
                .collect(),
            generators: c.generators.clone(),
            directions: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> RatVec {
        RatVec::from_ints(xs)
    }

    fn quadrant() -> PolyhedralSet {
        PolyhedralSet::from_ints(2, &[(&[1, 0], 0), (&[0, 1], 0)]).unwrap()
    }

    fn slab() -> PolyhedralSet {
        PolyhedralSet::from_ints(1, &[(&[1], 2), (&[-1], -2)]).unwrap()
    }

    #[test]
    fn asymptotic_cone_examples() {
        let p = PolyhedralSet::from_ints(1, &[(&[1], 1)]).unwrap();
        let c = asymptotic_cone(&p);
        assert_eq!(c.stored_halfspaces().unwrap(), &[v(&[1])]);
        assert_eq!(c.generator_list().unwrap(), vec![v(&[1])]);

        let p = PolyhedralSet::from_ints(2, &[(&[1, 0], 0), (&[0, 1], 0), (&[1, 1], 5)]).unwrap();
        let mut g = asymptotic_cone(&p).generator_list().unwrap();
        g.sort();
        assert_eq!(g, vec![v(&[0, 1]), v(&[1, 0])]);

        assert!(asymptotic_cone(&slab()).is_zero().unwrap());
    }

    #[test]
    fn dual_cone_examples() {
        let q = asymptotic_cone(&quadrant());
        let mut g = dual_cone(&q).unwrap().generator_list().unwrap();
        g.sort();
        assert_eq!(g, vec![v(&[0, 1]), v(&[1, 0])]);

        let half = Cone::from_halfspaces(2, vec![v(&[1, 0])]).unwrap();
        let dual = dual_cone(&half).unwrap();
        assert_eq!(dual.generator_list().unwrap(), vec![v(&[1, 0])]);
        // both inclusions: the ray is in the dual, (1,1) is not
        assert!(dual.contains(&v(&[3, 0])).unwrap());
        assert!(!dual.contains(&v(&[1, 1])).unwrap());

        let origin = Cone::from_halfspaces(2, vec![v(&[1, 0]), v(&[-1, 0]), v(&[0, 1]), v(&[0, -1])])
            .unwrap();
        let dual = dual_cone(&origin).unwrap();
        for x in [v(&[5, -7]), v(&[-1, 0]), v(&[0, 3])] {
            assert!(dual.contains(&x).unwrap());
        }
    }

    #[test]
    fn properness_examples() {
        assert!(is_proper(&quadrant()).unwrap());
        let half = PolyhedralSet::from_ints(2, &[(&[0, 1], 0)]).unwrap();
        assert!(!is_proper(&half).unwrap());
        let wedge =
            PolyhedralSet::from_ints(2, &[(&[1, 1], 0), (&[1, -1], 0), (&[1, 0], -1)]).unwrap();
        assert!(is_proper(&wedge).unwrap());
    }

    #[test]
    fn empty_set_is_an_error() {
        let empty = PolyhedralSet::from_ints(1, &[(&[1], 1), (&[-1], 0)]).unwrap();
        assert_eq!(is_proper(&empty), Err(PolyconeError::Infeasible));
        assert_eq!(bounded_below(&empty, &v(&[1])), Err(PolyconeError::Infeasible));
        assert_eq!(
            proper_projection_directions(&empty, &v(&[1])),
            Err(PolyconeError::Infeasible)
        );
    }

    #[test]
    fn boundedness_examples() {
        assert!(bounded_below(&quadrant(), &v(&[1, 1])).unwrap());
        assert!(!bounded_below(&quadrant(), &v(&[1, -1])).unwrap());
        for xi in [v(&[1]), v(&[-3]), v(&[0])] {
            assert!(bounded_below(&slab(), &xi).unwrap());
        }
        assert!(is_compact(&slab()).unwrap());
        assert!(!is_compact(&quadrant()).unwrap());
    }

    #[test]
    fn proper_projection_examples() {
        assert!(proper_projection_directions(&quadrant(), &v(&[1, 1])).unwrap());
        assert!(!proper_projection_directions(&quadrant(), &v(&[1, 0])).unwrap());
        let ray = PolyhedralSet::from_ints(1, &[(&[1], 1)]).unwrap();
        assert!(proper_projection_directions(&ray, &v(&[-1])).unwrap());
        assert!(proper_projection_directions(&slab(), &v(&[0])).unwrap());
        // strip around the x-axis: proper unless xi kills the axis
        let strip = PolyhedralSet::from_ints(2, &[(&[0, 1], -1), (&[0, -1], -1)]).unwrap();
        assert!(proper_projection_directions(&strip, &v(&[1, 0])).unwrap());
        assert!(proper_projection_directions(&strip, &v(&[-1, 3])).unwrap());
        assert!(!proper_projection_directions(&strip, &v(&[0, 1])).unwrap());
    }

    #[test]
    fn interior_point_examples() {
        let q = asymptotic_cone(&quadrant());
        let x = interior_point(&q).unwrap();
        assert!(q.stored_halfspaces().unwrap().iter().all(|n| n.dot(&x) >= rat(1)));

        let ray = Cone::from_generators(2, vec![v(&[1, 0])]).unwrap();
        assert_eq!(interior_point(&ray), Err(PolyconeError::NotFullDimensional));
        let origin = Cone::from_halfspaces(1, vec![v(&[1]), v(&[-1])]).unwrap();
        assert_eq!(interior_point(&origin), Err(PolyconeError::NotFullDimensional));

        let wedge = Cone::from_generators(2, vec![v(&[1, 0]), v(&[1, 1])]).unwrap();
        let x = interior_point(&wedge).unwrap();
        // strictly inside: 0 < y < x
        assert!(x[1].is_positive() && x[1] < x[0]);
    }

    #[test]
    fn both_representations_are_cross_checked() {
        assert!(Cone::with_both(2, vec![v(&[1, 0]), v(&[0, 1])], vec![v(&[1, 0]), v(&[0, 1])]).is_ok());
        assert_eq!(
            Cone::with_both(2, vec![v(&[1, 0]), v(&[0, 1])], vec![v(&[1, 0])]),
            Err(PolyconeError::InconsistentRepresentation)
        );
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"dim":2,"halfspaces":[{"normal":["1","-2/3"],"offset":"0.5"}]}"#;
        let doc = PolyhedralDoc::from_json(text).unwrap();
        let p = doc.to_polyhedral_set().unwrap();
        assert_eq!(p.halfspaces()[0].offset(), &crate::rational::ratio(1, 2));
        let back = serde_json::to_string(&PolyhedralDoc::from_set(&p)).unwrap();
        assert_eq!(PolyhedralDoc::from_json(&back).unwrap().to_polyhedral_set().unwrap(), p);
    }
}
