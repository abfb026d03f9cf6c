//! Strongly convex rational polyhedral cones, their faces, regularity and
//! multiplicity.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{
    adjugate, contains_line, facet_normals, hermite_normal_form, invariant_factors, IntMatrix,
    LatticeVector, DEFAULT_MAX_RANK,
};

/// A full-dimensional strongly convex cone given by its primitive extremal
/// rays (lex-sorted) and its primitive inner facet normals.
#[derive(Clone)]
pub struct Cone {
    inner: Arc<ConeData>,
}

struct ConeData {
    rank: usize,
    rays: Vec<LatticeVector>,
    normals: Vec<LatticeVector>,
    faces: OnceLock<FaceLattice>,
}

struct FaceLattice {
    // sorted by (dim, ray indices)
    faces: Vec<FaceEntry>,
    index: HashMap<Vec<usize>, usize>,
}

struct FaceEntry {
    rays: Vec<usize>,
    dim: usize,
    regular: bool,
}

impl Cone {
    /// Builds a cone from arbitrary nonzero generators, using the default
    /// rank cap.
    pub fn new(raw_rays: &[LatticeVector]) -> Result<Cone> {
        Self::with_max_rank(raw_rays, DEFAULT_MAX_RANK)
    }

    pub fn with_max_rank(raw_rays: &[LatticeVector], max_rank: usize) -> Result<Cone> {
        let first = raw_rays.first().ok_or(Error::EmptyRayList)?;
        let rank = first.rank();
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        if rank > max_rank {
            return Err(Error::RankTooLarge {
                rank,
                max: max_rank,
            });
        }
        let mut rays = Vec::with_capacity(raw_rays.len());
        for r in raw_rays {
            r.check_rank(rank)?;
            if !r.is_zero() {
                rays.push(r.primitive_part()?);
            }
        }
        rays.sort();
        rays.dedup();
        if contains_line(&rays) {
            return Err(Error::NotStronglyConvex);
        }
        let normals = facet_normals(&rays).map_err(|e| match e {
            Error::EmptyRayList => Error::NotFullDimensional,
            e => e,
        })?;
        // drop generators that are not extremal
        rays.retain(|r| {
            let tight: Vec<_> = normals.iter().filter(|u| r.dot(u).is_zero()).collect();
            !tight.is_empty() && IntMatrix::from_vectors(tight).rank() == rank - 1
        });
        Ok(Cone {
            inner: Arc::new(ConeData {
                rank,
                rays,
                normals,
                faces: OnceLock::new(),
            }),
        })
    }

    pub fn rank(&self) -> usize {
        self.inner.rank
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.inner.rays
    }

    pub fn facet_normals(&self) -> &[LatticeVector] {
        &self.inner.normals
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays().len() == self.rank()
    }

    /// A functional that is strictly positive on `self \ {0}`.
    pub fn interior_functional(&self) -> LatticeVector {
        self.facet_normals()
            .iter()
            .fold(LatticeVector::zero(self.rank()), |acc, u| &acc + u)
    }

    pub fn contains(&self, v: &LatticeVector) -> Result<bool> {
        v.check_rank(self.rank())?;
        Ok(self
            .facet_normals()
            .iter()
            .all(|u| !v.dot(u).is_negative()))
    }

    fn lattice(&self) -> &FaceLattice {
        self.inner.faces.get_or_init(|| FaceLattice::build(self))
    }

    fn face_from_entry(&self, i: usize) -> Face {
        let e = &self.lattice().faces[i];
        Face {
            parent: self.clone(),
            rays: e.rays.clone(),
            dim: e.dim,
        }
    }

    /// The face cut out by the facet normals vanishing on `v`.
    pub fn smallest_face_containing(&self, v: &LatticeVector) -> Result<Face> {
        if !self.contains(v)? {
            return Err(Error::NotInCone(v.clone()));
        }
        let tight: Vec<&LatticeVector> = self
            .facet_normals()
            .iter()
            .filter(|u| v.dot(u).is_zero())
            .collect();
        let rays: Vec<usize> = (0..self.rays().len())
            .filter(|&i| tight.iter().all(|u| self.rays()[i].dot(u).is_zero()))
            .collect();
        let idx = self.lattice().index[&rays];
        Ok(self.face_from_entry(idx))
    }

    /// All faces, from the zero face to the cone itself, sorted by
    /// `(dim, rays)`.
    pub fn faces(&self) -> Vec<Face> {
        (0..self.lattice().faces.len())
            .map(|i| self.face_from_entry(i))
            .collect()
    }

    pub fn singular_faces(&self) -> Vec<Face> {
        let lat = self.lattice();
        (0..lat.faces.len())
            .filter(|&i| !lat.faces[i].regular)
            .map(|i| self.face_from_entry(i))
            .collect()
    }

    /// The face with exactly these ray indices, if it is one.
    pub fn face_with_rays(&self, ray_indices: &[usize]) -> Option<Face> {
        self.lattice()
            .index
            .get(ray_indices)
            .map(|&i| self.face_from_entry(i))
    }

    /// The face whose ray set is exactly `rays` (given as vectors).
    pub fn face_with_ray_vectors(&self, rays: &[LatticeVector]) -> Option<Face> {
        let mut idx = Vec::with_capacity(rays.len());
        for r in rays {
            idx.push(self.rays().binary_search(r).ok()?);
        }
        idx.sort_unstable();
        idx.dedup();
        self.face_with_rays(&idx)
    }

    /// The cone as a face of itself.
    pub fn as_face(&self) -> Face {
        self.face_from_entry(self.lattice().faces.len() - 1)
    }

    pub fn is_regular(&self) -> bool {
        self.singular_faces().is_empty()
    }

    pub fn multiplicity(&self) -> Result<BigInt> {
        self.as_face().multiplicity()
    }

    /// Pulling triangulation: simplicial cones on subsets of the rays,
    /// built by coning the lex-smallest ray over the triangulated facets
    /// that avoid it.
    pub fn triangulate(&self) -> Vec<Cone> {
        if self.is_simplicial() {
            return vec![self.clone()];
        }
        let all = self.faces();
        let mut out: Vec<Vec<usize>> = Vec::new();
        pull(&all, &self.as_face(), &mut out);
        let mut cones: Vec<Cone> = out
            .into_iter()
            .map(|idx| {
                let rays: Vec<_> = idx.iter().map(|&i| self.rays()[i].clone()).collect();
                Cone::with_max_rank(&rays, self.rank()).expect("simplex of a valid cone")
            })
            .collect();
        cones.sort();
        cones
    }
}

fn pull(all: &[Face], f: &Face, out: &mut Vec<Vec<usize>>) {
    if f.rays.len() == f.dim {
        out.push(f.rays.clone());
        return;
    }
    let apex = f.rays[0];
    for g in all {
        if g.dim + 1 == f.dim && is_subset(&g.rays, &f.rays) && !g.rays.contains(&apex) {
            let mut sub = Vec::new();
            pull(all, g, &mut sub);
            for mut s in sub {
                s.push(apex);
                s.sort_unstable();
                out.push(s);
            }
        }
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

impl FaceLattice {
    fn build(c: &Cone) -> FaceLattice {
        let rays = c.rays();
        let facets: Vec<Vec<usize>> = c
            .facet_normals()
            .iter()
            .map(|u| (0..rays.len()).filter(|&i| rays[i].dot(u).is_zero()).collect())
            .collect();
        let full: Vec<usize> = (0..rays.len()).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(full.clone());
        queue.push_back(full);
        while let Some(f) = queue.pop_front() {
            for z in &facets {
                let g: Vec<usize> = f.iter().copied().filter(|i| z.binary_search(i).is_ok()).collect();
                if seen.insert(g.clone()) {
                    queue.push_back(g);
                }
            }
        }
        let mut faces: Vec<FaceEntry> = seen
            .into_iter()
            .map(|idx| {
                let vs: Vec<&LatticeVector> = idx.iter().map(|&i| &rays[i]).collect();
                let dim = if vs.is_empty() {
                    0
                } else {
                    IntMatrix::from_vectors(vs.iter().copied()).rank()
                };
                let regular = regular_rays(&vs, dim);
                FaceEntry {
                    rays: idx,
                    dim,
                    regular,
                }
            })
            .collect();
        faces.sort_by(|a, b| (a.dim, &a.rays).cmp(&(b.dim, &b.rays)));
        let index = faces
            .iter()
            .enumerate()
            .map(|(i, f)| (f.rays.clone(), i))
            .collect();
        FaceLattice { faces, index }
    }
}

fn regular_rays(rays: &[&LatticeVector], dim: usize) -> bool {
    if rays.len() != dim {
        return false;
    }
    if rays.is_empty() {
        return true;
    }
    invariant_factors(&IntMatrix::from_vectors(rays.iter().copied()))
        .iter()
        .all(One::is_one)
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.rays() == other.rays()
    }
}

impl Eq for Cone {}

impl Hash for Cone {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rays().hash(state);
    }
}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cone {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rays().cmp(other.rays())
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cone<")?;
        for (i, r) in self.rays().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ">")
    }
}

/// A face of a cone, identified by the subset of the parent's rays it
/// contains.
#[derive(Clone)]
pub struct Face {
    parent: Cone,
    rays: Vec<usize>,
    dim: usize,
}

impl Face {
    pub fn parent(&self) -> &Cone {
        &self.parent
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ray_indices(&self) -> &[usize] {
        &self.rays
    }

    pub fn rays(&self) -> Vec<LatticeVector> {
        self.rays
            .iter()
            .map(|&i| self.parent.rays()[i].clone())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim
    }

    pub fn is_regular(&self) -> bool {
        self.parent.lattice().faces[self.parent.lattice().index[&self.rays]].regular
    }

    /// Index of the sublattice spanned by the rays in its saturation.
    pub fn multiplicity(&self) -> Result<BigInt> {
        if !self.is_simplicial() {
            return Err(Error::NotSimplicial);
        }
        if self.is_zero() {
            return Ok(BigInt::one());
        }
        Ok(invariant_factors(&IntMatrix::from_vectors(
            self.rays.iter().map(|&i| &self.parent.rays()[i]),
        ))
        .iter()
        .product())
    }

    /// Whether `v` lies in this face.
    pub fn contains(&self, v: &LatticeVector) -> bool {
        match self.parent.contains(v) {
            Ok(true) => {}
            _ => return false,
        }
        let rays = self.parent.rays();
        self.parent
            .facet_normals()
            .iter()
            .filter(|u| self.rays.iter().all(|&i| rays[i].dot(u).is_zero()))
            .all(|u| v.dot(u).is_zero())
    }

    pub fn in_relative_interior(&self, v: &LatticeVector) -> bool {
        match self.parent.smallest_face_containing(v) {
            Ok(f) => f == *self,
            Err(_) => false,
        }
    }
}

impl PartialEq for Face {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.rays == other.rays
    }
}

impl Eq for Face {}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Face<")?;
        for (k, &i) in self.rays.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.parent.rays()[i])?;
        }
        write!(f, ">")
    }
}

/// Lattice points `sum c_i r_i` of the fundamental parallelepiped of the
/// simplicial full-dimensional cone on `rays`, with their coefficient
/// vectors. `closed` selects `0 <= c_i <= 1` instead of `0 <= c_i < 1`.
///
/// Points come from coset representatives of `Z^n / <rays>` read off the
/// Hermite form, shifted into the parallelepiped.
pub(crate) fn parallelepiped(
    rays: &[LatticeVector],
    closed: bool,
) -> Vec<(LatticeVector, Vec<BigRational>)> {
    let n = rays.len();
    let r = IntMatrix::from_vectors(rays);
    let det = r.det();
    assert!(!det.is_zero(), "parallelepiped of a degenerate simplex");
    let adj = adjugate(&r);
    let (h, _) = hermite_normal_form(&r);
    let bounds: Vec<BigInt> = (0..n).map(|i| h[(i, i)].clone()).collect();

    let mut out = Vec::new();
    let mut a = vec![BigInt::zero(); n];
    loop {
        // c = a * adj / det
        let num: Vec<BigInt> = (0..n)
            .map(|j| (0..n).map(|i| &a[i] * &adj[(i, j)]).sum())
            .collect();
        let mut point = a.clone();
        let mut coeffs = Vec::with_capacity(n);
        for j in 0..n {
            let fl = num[j].div_floor(&det);
            if !fl.is_zero() {
                for (p, rj) in point.iter_mut().zip(rays[j].coords()) {
                    *p -= &fl * rj;
                }
            }
            coeffs.push(BigRational::new(num[j].clone() - &fl * &det, det.clone()));
        }
        let base = LatticeVector::new(point);
        if closed {
            let zeros: Vec<usize> = (0..n).filter(|&j| coeffs[j].is_zero()).collect();
            for mask in 0u64..(1u64 << zeros.len()) {
                let mut p = base.clone();
                let mut c = coeffs.clone();
                for (bit, &j) in zeros.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        p = &p + &rays[j];
                        c[j] = BigRational::one();
                    }
                }
                out.push((p, c));
            }
        } else {
            out.push((base, coeffs));
        }
        // next coset representative
        let mut i = 0;
        loop {
            if i == n {
                out.sort_by(|x, y| x.0.cmp(&y.0));
                out.dedup_by(|x, y| x.0 == y.0);
                return out;
            }
            a[i] += 1;
            if a[i] < bounds[i] {
                break;
            }
            a[i] = BigInt::zero();
            i += 1;
        }
    }
}
