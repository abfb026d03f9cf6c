//! Subdivision pipelines: simplicialization, regularization, the full
//! resolution of a cone, and resolutions that avoid a prescribed ray.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cone::{parallelepiped, Cone};
use crate::error::{Error, Result};
use crate::lattice::{solve_integer_combination, LatticeVector};
use crate::order::{in_s, leq, minimal_elements};

use super::fan::{multiplicity_profile, star_subdivide, Fan};
use super::hj::plane_chain;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    TwoDimMinimal,
    StarN1,
    StarN2,
    Simplicialize,
    Regularize,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::TwoDimMinimal => "two-dim-minimal",
            Phase::StarN1 => "star-n1",
            Phase::StarN2 => "star-n2",
            Phase::Simplicialize => "simplicialize",
            Phase::Regularize => "regularize",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdivisionStep {
    pub center: LatticeVector,
    pub phase: Phase,
}

/// Ordered record of the star subdivisions applied.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubdivisionLog {
    pub steps: Vec<SubdivisionStep>,
}

impl SubdivisionLog {
    pub fn push(&mut self, center: LatticeVector, phase: Phase) {
        self.steps.push(SubdivisionStep { center, phase });
    }

    pub fn extend(&mut self, other: SubdivisionLog) {
        self.steps.extend(other.steps);
    }

    pub fn centers(&self) -> impl Iterator<Item = &LatticeVector> {
        self.steps.iter().map(|s| &s.center)
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

fn logged_star(f: &Fan, center: LatticeVector, phase: Phase, log: &mut SubdivisionLog) -> Result<Fan> {
    let before = f.cone_containing(&center)?;
    if before.dim() == 0 || before.parent().rays().contains(&center) {
        return Err(Error::Internal(format!("center {center} is not a new interior point")));
    }
    let out = star_subdivide(f, &center)?;
    log.push(center, phase);
    Ok(out)
}

/// Star-subdivides at the primitive barycenter of a minimal-dimensional
/// non-simplicial cone until every cone is simplicial.
pub fn simplicialize(f: &Fan) -> Result<(Fan, SubdivisionLog)> {
    let mut fan = f.clone();
    let mut log = SubdivisionLog::default();
    loop {
        // all_cones is sorted by (dim, rays): the first hit is the choice
        let Some(target) = fan.all_cones().into_iter().find(|c| !c.is_simplicial()) else {
            return Ok((fan, log));
        };
        let sum = target
            .rays
            .iter()
            .fold(LatticeVector::zero(fan.rank()), |acc, r| &acc + r);
        let center = sum.primitive_part()?;
        fan = logged_star(&fan, center, Phase::Simplicialize, &mut log)?;
    }
}

/// Repeatedly star-subdivides the cone of largest multiplicity at the
/// nonzero point of its half-open parallelepiped with the smallest
/// coefficient sum, until the fan is regular.
pub fn regularize(f: &Fan) -> Result<(Fan, SubdivisionLog)> {
    if !f.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    let mut fan = f.clone();
    let mut log = SubdivisionLog::default();
    let mut profile = multiplicity_profile(&fan)?;
    loop {
        let Some(worst) = profile.first().filter(|m| !m.is_one()).cloned() else {
            return Ok((fan, log));
        };
        let target = fan
            .maximal_cones()
            .iter()
            .find(|c| c.multiplicity().map(|m| m == worst).unwrap_or(false))
            .expect("profile lists an existing cone")
            .clone();
        let center = parallelepiped(target.rays(), false)
            .into_iter()
            .filter(|(p, _)| !p.is_zero())
            .map(|(p, c)| (c.into_iter().fold(BigRational::zero(), |a, b| a + b), p))
            .min()
            .map(|(_, p)| p)
            .ok_or_else(|| Error::Internal("empty parallelepiped for multiplicity > 1".into()))?;
        let center = center.primitive_part()?;
        fan = logged_star(&fan, center, Phase::Regularize, &mut log)?;
        let next = multiplicity_profile(&fan)?;
        if next >= profile {
            return Err(Error::Internal("multiplicity profile did not decrease".into()));
        }
        profile = next;
    }
}

/// Resolution of `c`: simplicialize, then regularize. Only singular cones
/// are subdivided.
pub fn resolve(c: &Cone) -> Result<(Fan, SubdivisionLog)> {
    let (fan, mut log) = simplicialize(&Fan::trivial(c))?;
    let (fan, reg) = regularize(&fan)?;
    log.extend(reg);
    Ok((fan, log))
}

/// How a non-minimal `v` was split as `n1 + n2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecompositionCase {
    /// Both summands lie in `S`.
    BothInS,
    /// `n2` lies on a one-dimensional face of the cone.
    OnRay,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub n1: LatticeVector,
    pub n2: LatticeVector,
    pub case: DecompositionCase,
    /// The regular two-dimensional cone `<v1, v2>` containing `v` in its
    /// relative interior; `v1` lies in `S`.
    pub v1: LatticeVector,
    pub v2: LatticeVector,
}

#[derive(Clone, Debug)]
pub struct Avoidance {
    pub fan: Fan,
    pub log: SubdivisionLog,
    pub decomposition: Decomposition,
}

/// Splits a non-minimal `v` in `S` into `n1 + n2` with `n1` in `S` and `n2`
/// either in `S` or on a ray of `c`.
fn decompose(c: &Cone, v: &LatticeVector, minimal: &[LatticeVector]) -> Result<(LatticeVector, LatticeVector, DecompositionCase)> {
    let mut n1 = None;
    for m in minimal {
        if m != v && leq(c, m, v)? {
            n1 = Some(m.clone());
            break;
        }
    }
    let Some(mut n1) = n1 else {
        return Err(Error::Internal(format!("no decomposition found for non-minimal {v}")));
    };
    let mut n2 = v - &n1;
    if in_s(c, &n2) {
        return Ok((n1, n2, DecompositionCase::BothInS));
    }
    // n2 sits in a regular face <e_1, ..., e_d>: keep one summand b_1 e_1
    // and fold the rest into n1
    let face = c.smallest_face_containing(&n2)?;
    let rays = face.rays();
    let b = solve_integer_combination(&rays, &n2)
        .ok_or_else(|| Error::Internal(format!("{n2} is not integral on its regular face")))?;
    let keep = b
        .iter()
        .position(|x| !x.is_zero())
        .ok_or_else(|| Error::Internal("n2 is zero".into()))?;
    for (i, (r, bi)) in rays.iter().zip(&b).enumerate() {
        if i != keep {
            n1 = &n1 + &r.scale(bi);
        }
    }
    n2 = rays[keep].scale(&b[keep]);
    if !in_s(c, &n1) {
        return Err(Error::Internal(format!("folded summand {n1} left S")));
    }
    Ok((n1, n2, DecompositionCase::OnRay))
}

/// Coefficients `(x, y)` with `v = x a + y b`, when `a`, `b` span a regular
/// two-dimensional cone containing `v`.
fn plane_coefficients(a: &LatticeVector, b: &LatticeVector, v: &LatticeVector) -> Option<(BigInt, BigInt)> {
    let coeffs = solve_integer_combination(&[a.clone(), b.clone()], v)?;
    Some((coeffs[0].clone(), coeffs[1].clone()))
}

/// A regular divisorial resolution of `c` in which the ray through the
/// non-minimal `v ∈ S` does not appear.
pub fn avoid_ray(c: &Cone, v: &LatticeVector) -> Result<Avoidance> {
    v.check_rank(c.rank())?;
    if !v.is_primitive() {
        return Err(Error::NotPrimitive(v.clone()));
    }
    if !in_s(c, v) {
        return Err(Error::NotInS(v.clone()));
    }
    let minimal = minimal_elements(c).minimal_elements;
    if minimal.binary_search(v).is_ok() {
        return Err(Error::EssentialRay(v.clone()));
    }
    let (n1, n2, case) = decompose(c, v, &minimal)?;

    let chain = plane_chain(&n1, &n2)?;
    let (a, b) = chain
        .windows(2)
        .find_map(|w| {
            let (x, y) = plane_coefficients(&w[0], &w[1], v)?;
            (x > BigInt::zero() && y > BigInt::zero()).then(|| (w[0].clone(), w[1].clone()))
        })
        .ok_or_else(|| Error::Internal(format!("{v} is not interior to a cone of the plane chain")))?;
    let (v1, v2) = if in_s(c, &a) { (a, b) } else { (b, a) };
    if !in_s(c, &v1) {
        return Err(Error::Internal("neither plane ray lies in S".into()));
    }

    let mut log = SubdivisionLog::default();
    let mut fan = logged_star(&Fan::trivial(c), v1.clone(), Phase::StarN1, &mut log)?;
    if !fan.has_ray(&v2) {
        fan = logged_star(&fan, v2.clone(), Phase::StarN2, &mut log)?;
    }
    let plane = {
        let mut p = vec![v1.clone(), v2.clone()];
        p.sort();
        p
    };
    let check = |fan: &Fan, stage: &str| -> Result<()> {
        if !fan.has_cone(&plane) {
            return Err(Error::Internal(format!("<{}, {}> lost after {stage}", plane[0], plane[1])));
        }
        if fan.has_ray(v) {
            return Err(Error::Internal(format!("ray {v} appeared after {stage}")));
        }
        Ok(())
    };
    check(&fan, "star subdivisions")?;
    let (fan, simp) = simplicialize(&fan)?;
    check(&fan, "simplicialize")?;
    let (fan, reg) = regularize(&fan)?;
    check(&fan, "regularize")?;
    log.extend(simp);
    log.extend(reg);
    Ok(Avoidance {
        fan,
        log,
        decomposition: Decomposition {
            n1,
            n2,
            case,
            v1,
            v2,
        },
    })
}

/// The minimal resolution of a rank-2 cone as a logged fan.
pub fn resolve_2d_minimal(c: &Cone) -> Result<(Fan, SubdivisionLog)> {
    let hj = super::hj::hj_minimal_resolution_2d(c)?;
    let mut log = SubdivisionLog::default();
    for r in &hj.new_rays {
        log.push(r.clone(), Phase::TwoDimMinimal);
    }
    Ok((hj.fan, log))
}
