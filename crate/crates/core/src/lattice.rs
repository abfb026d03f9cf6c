//! Exact integer linear algebra over `Z^n`: lattice vectors, integer
//! matrices, Hermite and Smith normal forms, and facet normals of cones.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Default cap on the ambient lattice rank.
pub const DEFAULT_MAX_RANK: usize = 6;

/// An element of the lattice `N = Z^n` (or of its dual `M`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector {
    coords: Vec<BigInt>,
}

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        debug_assert!(!coords.is_empty(), "lattice vectors have positive rank");
        LatticeVector { coords }
    }

    pub fn from_slice(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        Self::new(vec![BigInt::zero(); rank])
    }

    /// The `i`-th standard basis vector.
    pub fn unit(rank: usize, i: usize) -> Self {
        let mut coords = vec![BigInt::zero(); rank];
        coords[i] = BigInt::one();
        Self::new(coords)
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// The pairing `<self, other>`.
    pub fn dot(&self, other: &LatticeVector) -> BigInt {
        debug_assert_eq!(self.rank(), other.rank());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn scale(&self, k: &BigInt) -> LatticeVector {
        LatticeVector::new(self.coords.iter().map(|c| c * k).collect())
    }

    /// Gcd of the coordinates (zero for the zero vector).
    pub fn content(&self) -> BigInt {
        self.coords
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// `v / gcd(v)`.
    pub fn primitive_part(&self) -> Result<LatticeVector> {
        let g = self.content();
        if g.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(LatticeVector::new(
            self.coords.iter().map(|c| c / &g).collect(),
        ))
    }

    pub(crate) fn check_rank(&self, rank: usize) -> Result<()> {
        if self.rank() == rank {
            Ok(())
        } else {
            Err(Error::RankMismatch {
                expected: rank,
                found: self.rank(),
            })
        }
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(coords: Vec<i64>) -> Self {
        Self::from_slice(&coords)
    }
}

impl From<Vec<BigInt>> for LatticeVector {
    fn from(coords: Vec<BigInt>) -> Self {
        Self::new(coords)
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        debug_assert_eq!(self.rank(), rhs.rank());
        LatticeVector::new(
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        debug_assert_eq!(self.rank(), rhs.rank());
        LatticeVector::new(
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector::new(self.coords.iter().map(|c| -c).collect())
    }
}

/// A dense rectangular integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn from_vectors<'a>(vs: impl IntoIterator<Item = &'a LatticeVector>) -> Self {
        Self::from_rows(vs.into_iter().map(|v| v.coords().to_vec()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> LatticeVector {
        LatticeVector::new(self.row(i).to_vec())
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a * &rhs[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn rank(&self) -> usize {
        let (h, _) = hermite_normal_form(self);
        (0..h.rows).filter(|&i| h.row(i).iter().any(|x| !x.is_zero())).count()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[a] += k * row[b]
    fn add_row_multiple(&mut self, a: usize, b: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(b, j)] * k;
            self[(a, j)] += v;
        }
    }

    /// col[a] += k * col[b]
    fn add_col_multiple(&mut self, a: usize, b: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, b)] * k;
            self[(i, a)] += v;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -&self[(a, j)];
            self[(a, j)] = v;
        }
    }

    /// Replaces rows (a, b) by (x*a + y*b, p*a + q*b).
    fn combine_rows(&mut self, a: usize, b: usize, [x, y, p, q]: [&BigInt; 4]) {
        for j in 0..self.cols {
            let ra = self[(a, j)].clone();
            let rb = self[(b, j)].clone();
            self[(a, j)] = x * &ra + y * &rb;
            self[(b, j)] = p * &ra + q * &rb;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", LatticeVector::new(self.row(i).to_vec()))?;
        }
        write!(f, "]")
    }
}

/// Row-style Hermite normal form: returns `(h, u)` with `u` unimodular and
/// `u * m = h`, where `h` is in row echelon form with positive pivots and
/// the entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..m.cols {
        if pivot_row == m.rows {
            break;
        }
        for i in pivot_row + 1..m.rows {
            if h[(i, col)].is_zero() {
                continue;
            }
            let a = h[(pivot_row, col)].clone();
            let b = h[(i, col)].clone();
            let eg = a.extended_gcd(&b);
            // [x y; -b/g a/g] has determinant 1.
            let p = -(&b / &eg.gcd);
            let q = &a / &eg.gcd;
            h.combine_rows(pivot_row, i, [&eg.x, &eg.y, &p, &q]);
            u.combine_rows(pivot_row, i, [&eg.x, &eg.y, &p, &q]);
        }
        if h[(pivot_row, col)].is_zero() {
            continue;
        }
        if h[(pivot_row, col)].is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        let piv = h[(pivot_row, col)].clone();
        for i in 0..pivot_row {
            let q = h[(i, col)].div_floor(&piv);
            if !q.is_zero() {
                let k = -q;
                h.add_row_multiple(i, pivot_row, &k);
                u.add_row_multiple(i, pivot_row, &k);
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    (h, u)
}

/// Smith normal form: returns `(d, u, v)` with `u`, `v` unimodular,
/// `u * m * v = d` diagonal, nonnegative, and `d_1 | d_2 | ...`.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let n = m.rows.min(m.cols);
    let mut t = 0;
    while t < n {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m.rows {
            for j in t..m.cols {
                if d[(i, j)].is_zero() {
                    continue;
                }
                if best.map_or(true, |(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        d.swap_rows(t, bi);
        u.swap_rows(t, bi);
        d.swap_cols(t, bj);
        v.swap_cols(t, bj);

        let mut clean = true;
        for i in t + 1..m.rows {
            let q = d[(i, t)].div_floor(&d[(t, t)]);
            if !q.is_zero() {
                let k = -q;
                d.add_row_multiple(i, t, &k);
                u.add_row_multiple(i, t, &k);
            }
            if !d[(i, t)].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..m.cols {
            let q = d[(t, j)].div_floor(&d[(t, t)]);
            if !q.is_zero() {
                let k = -q;
                d.add_col_multiple(j, t, &k);
                v.add_col_multiple(j, t, &k);
            }
            if !d[(t, j)].is_zero() {
                clean = false;
            }
        }
        if !clean {
            // a smaller remainder now exists; pick it up on the next pass
            continue;
        }
        // divisibility: fold any offending row into row t and retry
        let piv = d[(t, t)].clone();
        let offending = (t + 1..m.rows)
            .find(|&i| (t + 1..m.cols).any(|j| !(&d[(i, j)] % &piv).is_zero()));
        if let Some(i) = offending {
            let one = BigInt::one();
            d.add_row_multiple(t, i, &one);
            u.add_row_multiple(t, i, &one);
            continue;
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    (d, u, v)
}

/// Invariant factors (the nonzero diagonal of the Smith form).
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let (d, _, _) = smith_normal_form(m);
    (0..d.rows.min(d.cols))
        .map(|i| d[(i, i)].clone())
        .filter(|x| !x.is_zero())
        .collect()
}

pub fn primitive_part(v: &LatticeVector) -> Result<LatticeVector> {
    v.primitive_part()
}

/// Basis of the integer kernel `{x : m x = 0}`; the basis vectors are
/// primitive and the basis is saturated.
pub fn integer_kernel(m: &IntMatrix) -> Vec<LatticeVector> {
    let (h, u) = hermite_normal_form(&m.transpose());
    (0..h.rows())
        .filter(|&i| h.row(i).iter().all(Zero::is_zero))
        .map(|i| u.row_vector(i))
        .collect()
}

/// Coordinates of the vectors `vs` in a basis of the saturated lattice
/// `span(vs) ∩ Z^n`, together with that basis.
pub fn saturated_coordinates(vs: &[LatticeVector]) -> (Vec<LatticeVector>, Vec<LatticeVector>) {
    let a = IntMatrix::from_vectors(vs);
    let (d, u, v) = smith_normal_form(&a);
    let k = invariant_factors(&a).len();
    // a = u^-1 d v^-1; the first k rows of v^-1 form the saturated basis
    let vinv = unimodular_inverse(&v);
    let uinv = unimodular_inverse(&u);
    let basis: Vec<_> = (0..k).map(|i| vinv.row_vector(i)).collect();
    let ud = uinv.mul(&d);
    let coords = (0..vs.len())
        .map(|i| LatticeVector::new((0..k).map(|j| ud[(i, j)].clone()).collect()))
        .collect();
    (coords, basis)
}

/// Inverse of a unimodular matrix via the adjugate.
pub fn unimodular_inverse(m: &IntMatrix) -> IntMatrix {
    let det = m.det();
    assert!(det.abs().is_one(), "matrix is not unimodular");
    let adj = adjugate(m);
    let mut inv = adj;
    if det.is_negative() {
        for x in inv.data.iter_mut() {
            *x = -&*x;
        }
    }
    inv
}

/// Adjugate matrix: `m * adj(m) = det(m) * I`.
pub fn adjugate(m: &IntMatrix) -> IntMatrix {
    let n = m.rows;
    assert_eq!(n, m.cols);
    let mut adj = IntMatrix::zeros(n, n);
    if n == 1 {
        adj[(0, 0)] = BigInt::one();
        return adj;
    }
    for i in 0..n {
        for j in 0..n {
            let minor = IntMatrix::from_rows(
                (0..n)
                    .filter(|&r| r != i)
                    .map(|r| {
                        (0..n)
                            .filter(|&c| c != j)
                            .map(|c| m[(r, c)].clone())
                            .collect()
                    })
                    .collect(),
            );
            let cof = minor.det();
            adj[(j, i)] = if (i + j) % 2 == 0 { cof } else { -cof };
        }
    }
    adj
}

/// Integer coefficients `b` with `sum b_i rows_i = target`, if they exist
/// and are unique.
pub fn solve_integer_combination(
    rows: &[LatticeVector],
    target: &LatticeVector,
) -> Option<Vec<BigInt>> {
    let a = IntMatrix::from_vectors(rows);
    let (h, u) = hermite_normal_form(&a);
    let mut rest = target.coords().to_vec();
    let mut coeffs = vec![BigInt::zero(); rows.len()];
    for i in 0..h.rows() {
        let Some(p) = h.row(i).iter().position(|x| !x.is_zero()) else {
            // zero row: the combination is not unique
            return None;
        };
        let (q, r) = rest[p].div_rem(&h[(i, p)]);
        if !r.is_zero() {
            return None;
        }
        for (x, hx) in rest.iter_mut().zip(h.row(i)) {
            *x -= &q * hx;
        }
        // b = b' u
        for (c, ux) in coeffs.iter_mut().zip(u.row(i)) {
            *c += &q * ux;
        }
    }
    rest.iter().all(Zero::is_zero).then_some(coeffs)
}

/// Calls `f` on every `k`-subset of `0..n`, in lexicographic order.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    'outer: loop {
        f(&idx);
        let mut i = k;
        while i > 0 {
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                continue 'outer;
            }
        }
        return;
    }
}

/// Primitive inner facet normals of the full-dimensional strongly convex
/// cone generated by `rays`, lex-sorted.
pub fn facet_normals(rays: &[LatticeVector]) -> Result<Vec<LatticeVector>> {
    let Some(first) = rays.first() else {
        return Err(Error::EmptyRayList);
    };
    let n = first.rank();
    for r in rays {
        r.check_rank(n)?;
    }
    if IntMatrix::from_vectors(rays).rank() < n {
        return Err(Error::NotFullDimensional);
    }
    let normals = supporting_normals(rays, n);
    if normals.is_empty() || IntMatrix::from_vectors(&normals).rank() < n {
        return Err(Error::NotStronglyConvex);
    }
    Ok(normals)
}

/// Candidate facet normals from all `(n-1)`-subsets of rays; for a cone
/// containing a line this yields a set of rank `< n`.
fn supporting_normals(rays: &[LatticeVector], n: usize) -> Vec<LatticeVector> {
    let mut out = Vec::new();
    for_each_subset(rays.len(), n - 1, |idx| {
        let sub = IntMatrix::from_rows(
            if idx.is_empty() {
                vec![]
            } else {
                idx.iter().map(|&i| rays[i].coords().to_vec()).collect()
            },
        );
        let kernel = if idx.is_empty() {
            (0..n).map(|i| LatticeVector::unit(n, i)).collect()
        } else {
            integer_kernel(&sub)
        };
        if kernel.len() != 1 {
            return;
        }
        let k = &kernel[0];
        let (mut pos, mut neg) = (false, false);
        for r in rays {
            match r.dot(k).sign() {
                num_bigint::Sign::Plus => pos = true,
                num_bigint::Sign::Minus => neg = true,
                num_bigint::Sign::NoSign => {}
            }
        }
        match (pos, neg) {
            (_, false) => out.push(k.clone()),
            (false, true) => out.push(-k),
            (true, true) => {}
        }
    });
    out.sort();
    out.dedup();
    out
}

/// Whether the cone generated by `rays` (of any dimension) contains a line.
pub fn contains_line(rays: &[LatticeVector]) -> bool {
    if rays.is_empty() {
        return false;
    }
    let (coords, basis) = saturated_coordinates(rays);
    let k = basis.len();
    if k == 0 {
        return false;
    }
    let nonzero: Vec<_> = coords.into_iter().filter(|c| !c.is_zero()).collect();
    let normals = supporting_normals(&nonzero, k);
    normals.is_empty() || IntMatrix::from_vectors(&normals).rank() < k
}
