use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::cone::{Cone, Face};
use crate::error::{Error, Result};
use crate::lattice::{for_each_subset, integer_kernel, IntMatrix, LatticeVector};

/// A cone of a fan, identified by its (lex-sorted) rays.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FanCone {
    pub dim: usize,
    pub rays: Vec<LatticeVector>,
}

impl FanCone {
    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim
    }
}

/// A fan refining a fixed ambient cone, stored by its maximal
/// (full-dimensional) cones.
#[derive(Clone, Debug)]
pub struct Fan {
    ambient: Cone,
    maximal: Vec<Cone>,
}

impl Fan {
    /// The fan of all faces of `c`.
    pub fn trivial(c: &Cone) -> Fan {
        Fan {
            ambient: c.clone(),
            maximal: vec![c.clone()],
        }
    }

    /// Assembles a fan from maximal cones without validating it; use
    /// [`is_subdivision`] to check.
    pub fn from_cones(ambient: &Cone, mut maximal: Vec<Cone>) -> Result<Fan> {
        for m in &maximal {
            if m.rank() != ambient.rank() {
                return Err(Error::RankMismatch {
                    expected: ambient.rank(),
                    found: m.rank(),
                });
            }
        }
        maximal.sort();
        maximal.dedup();
        Ok(Fan {
            ambient: ambient.clone(),
            maximal,
        })
    }

    pub fn ambient(&self) -> &Cone {
        &self.ambient
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.maximal
    }

    pub fn rank(&self) -> usize {
        self.ambient.rank()
    }

    /// All rays of the fan, lex-sorted.
    pub fn rays(&self) -> Vec<LatticeVector> {
        let set: BTreeSet<&LatticeVector> = self.maximal.iter().flat_map(|c| c.rays()).collect();
        set.into_iter().cloned().collect()
    }

    pub fn has_ray(&self, v: &LatticeVector) -> bool {
        self.maximal.iter().any(|c| c.rays().binary_search(v).is_ok())
    }

    /// Every cone of the fan (faces of maximal cones), sorted by
    /// `(dim, rays)`.
    pub fn all_cones(&self) -> Vec<FanCone> {
        let set: BTreeSet<FanCone> = self
            .maximal
            .iter()
            .flat_map(|c| c.faces())
            .map(|f| FanCone {
                dim: f.dim(),
                rays: f.rays(),
            })
            .collect();
        set.into_iter().collect()
    }

    /// Whether the cone spanned by exactly these rays belongs to the fan.
    pub fn has_cone(&self, rays: &[LatticeVector]) -> bool {
        self.maximal
            .iter()
            .any(|c| c.face_with_ray_vectors(rays).is_some_and(|f| f.rays().len() == rays.len()))
    }

    /// The cone of the fan whose relative interior contains `v`, as a face
    /// of some maximal cone.
    pub fn cone_containing(&self, v: &LatticeVector) -> Result<Face> {
        for c in &self.maximal {
            if c.contains(v)? {
                return c.smallest_face_containing(v);
            }
        }
        Err(Error::NotInCone(v.clone()))
    }

    pub fn is_simplicial(&self) -> bool {
        self.maximal.iter().all(Cone::is_simplicial)
    }
}

/// Inserts the ray through `v`: every cone containing `v` is replaced by the
/// joins of `v` with its faces avoiding `v`.
pub fn star_subdivide(f: &Fan, v: &LatticeVector) -> Result<Fan> {
    v.check_rank(f.rank())?;
    if !f.ambient.contains(v)? {
        return Err(Error::NotInCone(v.clone()));
    }
    if !v.is_primitive() {
        return Err(Error::NotPrimitive(v.clone()));
    }
    if f.has_ray(v) {
        return Err(Error::AlreadyRay(v.clone()));
    }
    let n = f.rank();
    let mut out = Vec::with_capacity(f.maximal.len() + n);
    for c in &f.maximal {
        if !c.contains(v)? {
            out.push(c.clone());
            continue;
        }
        for facet in c.faces().iter().filter(|g| g.dim() + 1 == n) {
            if facet.contains(v) {
                continue;
            }
            let mut rays = facet.rays();
            rays.push(v.clone());
            out.push(Cone::with_max_rank(&rays, n)?);
        }
    }
    Fan::from_cones(&f.ambient, out)
}

fn check_ambient(f: &Fan, c: &Cone) -> Result<()> {
    if f.ambient() == c {
        Ok(())
    } else {
        Err(Error::AmbientMismatch)
    }
}

/// Extreme rays of `a ∩ b`, computed from the union of both inequality
/// systems.
fn intersection_rays(a: &Cone, b: &Cone) -> Vec<LatticeVector> {
    let n = a.rank();
    let normals: Vec<&LatticeVector> = {
        let set: BTreeSet<&LatticeVector> = a.facet_normals().iter().chain(b.facet_normals()).collect();
        set.into_iter().collect()
    };
    let mut out = BTreeSet::new();
    for_each_subset(normals.len(), n - 1, |idx| {
        let kernel = if idx.is_empty() {
            (0..n).map(|i| LatticeVector::unit(n, i)).collect()
        } else {
            integer_kernel(&IntMatrix::from_vectors(idx.iter().map(|&i| normals[i])))
        };
        if kernel.len() != 1 {
            return;
        }
        for k in [kernel[0].clone(), -&kernel[0]] {
            if normals.iter().all(|u| !k.dot(u).is_negative()) {
                out.insert(k);
            }
        }
    });
    out.into_iter().collect()
}

/// `|det| / prod <r_i, u>`: volume of the simplex cut from the simplicial
/// cone by `<x, u> <= 1`, up to the common factor `1/n!`.
fn simplex_volume(c: &Cone, u: &LatticeVector) -> BigRational {
    let det = IntMatrix::from_vectors(c.rays()).det().abs();
    let denom: BigInt = c.rays().iter().map(|r| r.dot(u)).product();
    BigRational::new(det, denom)
}

fn cone_volume(c: &Cone, u: &LatticeVector) -> BigRational {
    c.triangulate()
        .iter()
        .map(|s| simplex_volume(s, u))
        .fold(BigRational::zero(), |a, b| a + b)
}

/// Whether `f` is a fan subdividing `c`: maximal cones lie in `c`, meet
/// pairwise in common faces, and their volumes add up to that of `c`.
pub fn is_subdivision(f: &Fan, c: &Cone) -> Result<bool> {
    check_ambient(f, c)?;
    for m in f.maximal_cones() {
        for r in m.rays() {
            if !c.contains(r)? {
                return Ok(false);
            }
        }
    }
    let cones = f.maximal_cones();
    for i in 0..cones.len() {
        for j in i + 1..cones.len() {
            let (a, b) = (&cones[i], &cones[j]);
            let common: Vec<LatticeVector> = a
                .rays()
                .iter()
                .filter(|r| b.rays().binary_search(r).is_ok())
                .cloned()
                .collect();
            if intersection_rays(a, b) != common {
                return Ok(false);
            }
            if a.face_with_ray_vectors(&common).is_none() || b.face_with_ray_vectors(&common).is_none() {
                return Ok(false);
            }
        }
    }
    let u = c.interior_functional();
    let total = cones
        .iter()
        .map(|m| cone_volume(m, &u))
        .fold(BigRational::zero(), |a, b| a + b);
    Ok(total == cone_volume(c, &u))
}

pub fn is_regular_fan(f: &Fan) -> bool {
    f.maximal_cones().iter().all(|m| m.as_face().is_regular())
}

/// Every regular face of `c` is still a cone of `f`.
pub fn preserves_regular_faces(f: &Fan, c: &Cone) -> Result<bool> {
    check_ambient(f, c)?;
    Ok(c
        .faces()
        .iter()
        .filter(|face| face.is_regular())
        .all(|face| f.has_cone(&face.rays())))
}

/// Rays of `f` that are not rays of `c`.
pub fn exceptional_rays(f: &Fan, c: &Cone) -> Result<Vec<LatticeVector>> {
    check_ambient(f, c)?;
    Ok(f
        .rays()
        .into_iter()
        .filter(|r| c.rays().binary_search(r).is_err())
        .collect())
}

/// The exceptional set has pure codimension one iff every cone of `f`
/// spanned by rays of `c` alone is a face of `c`.
pub fn is_divisorial(f: &Fan, c: &Cone) -> Result<bool> {
    if !is_subdivision(f, c)? {
        return Err(Error::NotASubdivision);
    }
    Ok(f.all_cones().iter().all(|fc| {
        !fc.rays.iter().all(|r| c.rays().binary_search(r).is_ok())
            || c.face_with_ray_vectors(&fc.rays).is_some()
    }))
}

/// Multiplicities of the maximal cones, largest first.
pub(crate) fn multiplicity_profile(f: &Fan) -> Result<Vec<BigInt>> {
    let mut m = f
        .maximal_cones()
        .iter()
        .map(Cone::multiplicity)
        .collect::<Result<Vec<_>>>()?;
    m.sort_by(|a, b| b.cmp(a));
    Ok(m)
}
