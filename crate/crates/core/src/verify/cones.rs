//! Appendix-A predicates against LP re-derivations from the definitions.

use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::gen::{int_vec, nonzero_int_vec, rng};
use super::Tally;
use crate::polycone::{
    asymptotic_cone, bounded_below, dual_cone, is_compact, is_proper, lp_minimize,
    proper_projection_directions, Cone, HalfSpace, LinearConstraint, LpOutcome, PolyconeError,
    PolyhedralSet,
};
use crate::rational::{rat, Rat, RatVec};

const SETS: usize = 100;
const DIRECTIONS: usize = 6;

struct Instance {
    set: PolyhedralSet,
    normals: Vec<RatVec>,
    x0: RatVec,
}

fn random_set(r: &mut rand_chacha::ChaCha8Rng) -> Instance {
    let d = r.gen_range(1..=4);
    let m = r.gen_range(1..=12);
    let x0 = RatVec::from_ints(&int_vec(r, d, -2, 2));
    let mut hs = Vec::with_capacity(m);
    let mut normals = Vec::with_capacity(m);
    for _ in 0..m {
        let n = RatVec::from_ints(&nonzero_int_vec(r, d, -3, 3));
        let c = n.dot(&x0) - rat(r.gen_range(0..=2));
        hs.push(HalfSpace::new(n.clone(), c).expect("nonzero normal"));
        normals.push(n);
    }
    Instance { set: PolyhedralSet::new(d, hs).expect("consistent dims"), normals, x0 }
}

fn box_constraints(d: usize, radius: i64) -> Vec<LinearConstraint> {
    (0..d)
        .flat_map(|j| {
            let e = RatVec::unit(d, j);
            [LinearConstraint::le(e.clone(), rat(radius)), LinearConstraint::ge(e, rat(-radius))]
        })
        .collect()
}

fn minimum(obj: &RatVec, cs: &[LinearConstraint]) -> Result<Option<Rat>, PolyconeError> {
    Ok(match lp_minimize(obj, cs)? {
        LpOutcome::Optimal { value, .. } => Some(value),
        _ => None,
    })
}

/// Far point along `v`: past every crossing of a wall that `v` points out of.
fn ray_test(inst: &Instance, v: &RatVec) -> bool {
    let mut t = Rat::one();
    for h in inst.set.halfspaces() {
        let s = h.normal().dot(v);
        if s.is_negative() {
            let slack = h.normal().dot(&inst.x0) - h.offset();
            t = t.max(Rat::one() + slack / -s);
        }
    }
    inst.set.contains(&(&inst.x0 + &v.scale(&t)))
}

/// `min <xi, x>` over `C ∩ [-1, 1]^d` is zero exactly for `xi ∈ C'`.
fn in_dual_by_lp(inst: &Instance, xi: &RatVec) -> Result<bool, PolyconeError> {
    let d = xi.dim();
    let mut cs: Vec<LinearConstraint> =
        inst.normals.iter().map(|n| LinearConstraint::ge(n.clone(), Rat::zero())).collect();
    cs.extend(box_constraints(d, 1));
    Ok(!minimum(xi, &cs)?.expect("bounded").is_negative())
}

/// The only point of `{Ax = 0} ∩ box` (resp. `{Ax >= 0} ∩ box`) is 0.
fn only_origin(inst: &Instance, equality: bool) -> Result<bool, PolyconeError> {
    let d = inst.x0.dim();
    let mut cs: Vec<LinearConstraint> = inst
        .normals
        .iter()
        .map(|n| {
            if equality {
                LinearConstraint::eq(n.clone(), Rat::zero())
            } else {
                LinearConstraint::ge(n.clone(), Rat::zero())
            }
        })
        .collect();
    cs.extend(box_constraints(d, 1));
    for j in 0..d {
        let e = RatVec::unit(d, j);
        for obj in [e.clone(), -&e] {
            if !minimum(&obj, &cs)?.expect("bounded").is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The preimage of a unit window around `<xi, x0>` is bounded.
fn slab_is_bounded(inst: &Instance, xi: &RatVec) -> Result<bool, PolyconeError> {
    let d = xi.dim();
    let level = xi.dot(&inst.x0);
    let mut cs = inst.set.constraints();
    cs.push(LinearConstraint::le(xi.clone(), &level + Rat::one()));
    cs.push(LinearConstraint::ge(xi.clone(), &level - Rat::one()));
    for j in 0..d {
        let e = RatVec::unit(d, j);
        for obj in [e.clone(), -&e] {
            if minimum(&obj, &cs)?.is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn check_instance(inst: &Instance, r: &mut rand_chacha::ChaCha8Rng) -> Result<Vec<String>, PolyconeError> {
    let d = inst.x0.dim();
    let mut bad = Vec::new();
    let cone = asymptotic_cone(&inst.set);
    let gens = cone.generator_list()?;
    let generated = Cone::from_generators(d, gens.clone())?;

    for g in &gens {
        if !ray_test(inst, g) {
            bad.push(format!("generator {g:?} fails the ray test"));
        }
    }
    let mut probes: Vec<RatVec> = (0..8).map(|_| RatVec::from_ints(&nonzero_int_vec(r, d, -2, 2))).collect();
    probes.extend(gens.iter().cloned());
    for v in &probes {
        let want = ray_test(inst, v);
        if cone.contains(v)? != want || generated.contains(v)? != want {
            bad.push(format!("asymptotic cone membership of {v:?} disagrees (ray test {want})"));
        }
    }

    let dual = dual_cone(&cone)?;
    let proper = only_origin(inst, true)?;
    if is_proper(&inst.set)? != proper {
        bad.push(format!("properness disagrees (lineality LP says {proper})"));
    }
    let compact = only_origin(inst, false)?;
    if is_compact(&inst.set)? != compact {
        bad.push(format!("compactness disagrees (cone LP says {compact})"));
    }

    let mut dirs: Vec<RatVec> = (0..DIRECTIONS - 1).map(|_| RatVec::from_ints(&int_vec(r, d, -2, 2))).collect();
    dirs.push(inst.normals.iter().fold(RatVec::zeros(d), |acc, n| &acc + n));
    for xi in dirs.iter().filter(|x| !x.is_zero()) {
        let in_dual = in_dual_by_lp(inst, xi)?;
        if dual.contains(xi)? != in_dual {
            bad.push(format!("dual membership of {xi:?} disagrees (LP says {in_dual})"));
        }
        if bounded_below(&inst.set, xi)? != in_dual {
            bad.push(format!("boundedness along {xi:?} disagrees (dual LP says {in_dual})"));
        }
        let slab = slab_is_bounded(inst, xi)?;
        if proper_projection_directions(&inst.set, xi)? != slab {
            bad.push(format!("proper projection along {xi:?} disagrees (slab LP says {slab})"));
        }
    }
    Ok(bad)
}

pub fn cone_suite(seed: u64) -> super::CriterionReport {
    let mut t = Tally::new(1, "cones", "polyhedral predicates vs LP re-derivations", seed, 0.0, 30.0);
    let mut r = rng(seed, 1);
    let (mut proper, mut compact) = (0, 0);
    for case in 0..SETS {
        let inst = random_set(&mut r);
        proper += is_proper(&inst.set).unwrap_or(false) as usize;
        compact += is_compact(&inst.set).unwrap_or(false) as usize;
        match check_instance(&inst, &mut r) {
            Ok(bad) => t.check(bad.is_empty(), || format!("set {case}: {}", bad.join("; "))),
            Err(e) => t.fail(format!("set {case}: {e}")),
        }
    }
    t.note(format!("{proper} proper and {compact} compact sets out of {SETS}"));
    t.finish()
}
