//! Minimal resolution of two-dimensional cones via Hirzebruch–Jung
//! continued fractions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::lattice::{saturated_coordinates, LatticeVector};

use super::fan::Fan;

type Point = [BigInt; 2];

fn det(a: &Point, b: &Point) -> BigInt {
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

/// Chain of rays from `start` to `end` (both primitive, `det(start, end) > 0`)
/// whose consecutive pairs have determinant 1, together with the
/// continued-fraction entries `b_i` at the interior rays
/// (`u_{i-1} + u_{i+1} = b_i u_i`).
///
/// Works in the normal form `<(1,0), (a,b)>`, `0 <= a < b`, reached by a
/// unimodular change of basis.
fn chain(start: &Point, end: &Point) -> (Vec<Point>, Vec<BigInt>) {
    debug_assert!(det(start, end).is_positive());
    // complete `start` to a basis (start, w) with det = 1
    let eg = start[0].extended_gcd(&start[1]);
    debug_assert!(eg.gcd.is_one());
    let w0: Point = [-eg.y.clone(), eg.x.clone()];
    let b = det(start, end);
    let a_raw = det(end, &w0);
    let shift = a_raw.div_floor(&b);
    let a = &a_raw - &shift * &b;
    // w = w0 + shift * start, so that end = a * start + b * w
    let w: Point = [&w0[0] + &shift * &start[0], &w0[1] + &shift * &start[1]];
    let to_original = |p: &Point| -> Point {
        [
            &p[0] * &start[0] + &p[1] * &w[0],
            &p[0] * &start[1] + &p[1] * &w[1],
        ]
    };

    let target: Point = [a.clone(), b.clone()];
    let mut rays: Vec<Point> = vec![[BigInt::one(), BigInt::zero()]];
    let mut fraction = Vec::new();
    if !b.is_one() {
        // first lattice point of height 1 inside the cone
        rays.push([ceil_div(&a, &b), BigInt::one()]);
        while rays.last() != Some(&target) {
            let k = rays.len();
            let (prev, cur) = (&rays[k - 2], &rays[k - 1]);
            let coeff = ceil_div(&det(prev, &target), &det(cur, &target));
            let next = [&coeff * &cur[0] - &prev[0], &coeff * &cur[1] - &prev[1]];
            fraction.push(coeff);
            rays.push(next);
        }
    } else {
        rays.push(target);
    }
    (rays.iter().map(to_original).collect(), fraction)
}

fn to_point(v: &LatticeVector) -> Point {
    [v.coords()[0].clone(), v.coords()[1].clone()]
}

fn from_point(p: &Point) -> LatticeVector {
    LatticeVector::new(vec![p[0].clone(), p[1].clone()])
}

/// Result of [`hj_minimal_resolution_2d`].
#[derive(Clone, Debug)]
pub struct HjResolution {
    pub fan: Fan,
    /// Interior rays in order from the first to the second generator.
    pub new_rays: Vec<LatticeVector>,
    /// Continued-fraction entries, one per new ray.
    pub continued_fraction: Vec<BigInt>,
}

/// The minimal regular subdivision of a cone in a rank-2 lattice.
pub fn hj_minimal_resolution_2d(c: &Cone) -> Result<HjResolution> {
    if c.rank() != 2 {
        return Err(Error::NotRankTwo(c.rank()));
    }
    if c.is_regular() {
        return Ok(HjResolution {
            fan: Fan::trivial(c),
            new_rays: vec![],
            continued_fraction: vec![],
        });
    }
    let (mut p, mut q) = (to_point(&c.rays()[0]), to_point(&c.rays()[1]));
    if det(&p, &q).is_negative() {
        std::mem::swap(&mut p, &mut q);
    }
    let (rays, fraction) = chain(&p, &q);
    validate_chain(&rays, &fraction)?;
    let maximal = rays
        .windows(2)
        .map(|w| Cone::with_max_rank(&[from_point(&w[0]), from_point(&w[1])], 2))
        .collect::<Result<Vec<_>>>()?;
    Ok(HjResolution {
        fan: Fan::from_cones(c, maximal)?,
        new_rays: rays[1..rays.len() - 1].iter().map(from_point).collect(),
        continued_fraction: fraction,
    })
}

/// Adjacent rays form bases and no interior ray can be dropped.
fn validate_chain(rays: &[Point], fraction: &[BigInt]) -> Result<()> {
    for w in rays.windows(2) {
        if !det(&w[0], &w[1]).is_one() {
            return Err(Error::Internal(format!(
                "Hirzebruch-Jung chain has a non-unimodular step {:?}",
                w
            )));
        }
    }
    for w in rays.windows(3) {
        // dropping the middle ray leaves a cone of multiplicity b_i
        if det(&w[0], &w[2]) < BigInt::from(2) {
            return Err(Error::Internal("Hirzebruch-Jung chain is not minimal".into()));
        }
    }
    if fraction.len() + 2 != rays.len().max(2) {
        return Err(Error::Internal("continued fraction length mismatch".into()));
    }
    Ok(())
}

/// Minimal regular subdivision of the two-dimensional cone `<n1, n2>`
/// inside the saturated plane lattice `span(n1, n2) ∩ N`. Returns the ray
/// chain from the primitive vector of `n1` to that of `n2`.
pub(crate) fn plane_chain(n1: &LatticeVector, n2: &LatticeVector) -> Result<Vec<LatticeVector>> {
    let (coords, basis) = saturated_coordinates(&[n1.clone(), n2.clone()]);
    if basis.len() != 2 {
        return Err(Error::Internal(format!("{n1} and {n2} are parallel")));
    }
    let a = to_point(&coords[0].primitive_part()?);
    let b = to_point(&coords[1].primitive_part()?);
    let flip = det(&a, &b).is_negative();
    let (mut rays, fraction) = if flip { chain(&b, &a) } else { chain(&a, &b) };
    validate_chain(&rays, &fraction)?;
    if flip {
        rays.reverse();
    }
    Ok(rays
        .iter()
        .map(|p| &basis[0].scale(&p[0]) + &basis[1].scale(&p[1]))
        .collect())
}
