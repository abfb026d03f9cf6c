//! The set `S` of lattice points in relative interiors of singular faces,
//! the cone-induced partial order, and the minimal elements of `S`.
//!
//! Minimal elements are searched in the closed fundamental parallelepipeds
//! of a triangulation. If `v = sum c_i g_i` over a simplex with some
//! `c_j > 1`, every `g_i` with `c_i > 0` lies in the smallest face `τ`
//! containing `v`, so `v - g_j` has the same support, stays in `τ°` and
//! is strictly below `v`. Hence minimal elements have all `c_i <= 1`.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::cone::{parallelepiped, Cone};
use crate::error::{Error, Result};
use crate::lattice::LatticeVector;

#[derive(Clone, Debug)]
pub struct MinimalElementReport {
    pub cone: Cone,
    /// Lex-sorted.
    pub minimal_elements: Vec<LatticeVector>,
    /// Distinct lattice points over all closed parallelepipeds.
    pub candidate_count: usize,
    /// Candidates lying in `S`.
    pub s_candidate_count: usize,
}

impl MinimalElementReport {
    pub fn essential_divisor_count(&self) -> usize {
        self.minimal_elements.len()
    }
}

/// Whether `v` lies in the relative interior of a singular face of `c`.
pub fn in_s(c: &Cone, v: &LatticeVector) -> bool {
    match c.smallest_face_containing(v) {
        Ok(face) => !face.is_regular(),
        Err(_) => false,
    }
}

/// `v <= w` iff `w - v` lies in `c`.
pub fn leq(c: &Cone, v: &LatticeVector, w: &LatticeVector) -> Result<bool> {
    for x in [v, w] {
        if !c.contains(x)? {
            return Err(Error::NotInCone(x.clone()));
        }
    }
    c.contains(&(w - v))
}

pub fn triangulate(c: &Cone) -> Vec<Cone> {
    c.triangulate()
}

/// Lattice points `sum c_i r_i` with `0 <= c_i <= 1`, lex-sorted.
pub fn parallelepiped_points(simplex: &Cone) -> Result<Vec<LatticeVector>> {
    if !simplex.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    Ok(parallelepiped(simplex.rays(), true)
        .into_iter()
        .map(|(p, _)| p)
        .collect())
}

pub fn minimal_elements(c: &Cone) -> MinimalElementReport {
    let mut candidates: Vec<LatticeVector> = c
        .triangulate()
        .iter()
        .flat_map(|s| parallelepiped(s.rays(), true))
        .map(|(p, _)| p)
        .collect();
    candidates.sort();
    candidates.dedup();
    let candidate_count = candidates.len();

    let functional = c.interior_functional();
    let mut in_set: Vec<(BigInt, LatticeVector)> = candidates
        .into_par_iter()
        .filter(|v| in_s(c, v))
        .map(|v| (v.dot(&functional), v))
        .collect();
    in_set.sort();
    let s_candidate_count = in_set.len();

    // w < v forces <w, functional> < <v, functional>
    let keep: Vec<bool> = (0..in_set.len())
        .into_par_iter()
        .map(|i| {
            let (level, v) = &in_set[i];
            !in_set[..i]
                .iter()
                .take_while(|(l, _)| l < level)
                .any(|(_, w)| c.contains(&(v - w)).expect("ranks agree"))
        })
        .collect();
    let mut minimal: Vec<LatticeVector> = in_set
        .into_iter()
        .zip(keep)
        .filter_map(|((_, v), k)| k.then_some(v))
        .collect();
    minimal.sort();
    debug_assert!(minimal.iter().all(LatticeVector::is_primitive));

    MinimalElementReport {
        cone: c.clone(),
        minimal_elements: minimal,
        candidate_count,
        s_candidate_count,
    }
}

pub fn essential_divisor_count(c: &Cone) -> usize {
    minimal_elements(c).minimal_elements.len()
}

/// Whether `v` is a minimal element of `S`. Errors when `v` is not in `S`.
pub fn is_minimal_in_s(c: &Cone, v: &LatticeVector) -> Result<bool> {
    if !in_s(c, v) {
        return Err(Error::NotInS(v.clone()));
    }
    Ok(minimal_elements(c).minimal_elements.binary_search(v).is_ok())
}
