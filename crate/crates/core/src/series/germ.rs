//! Formal curves and surface germs on a hypersurface through a line of its
//! projectivized tangent cone.

use std::fmt;

use crate::error::{Error, Result};

use super::field::{rank, solve, Field};
use super::series::{homogeneous_decomposition, residual_order, HomogeneousForm, ResidualOrder, TruncatedSeries};

fn st() -> Vec<String> {
    vec!["s".to_string(), "t".to_string()]
}

fn s_only() -> Vec<String> {
    vec!["s".to_string()]
}

/// A line through the origin of the tangent cone, parametrized as
/// `s * point + t * direction`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineSpec<K> {
    point: Vec<K>,
    direction: Vec<K>,
}

impl<K: Field> LineSpec<K> {
    pub fn new(point: Vec<K>, direction: Vec<K>) -> Result<Self> {
        if point.len() != direction.len() {
            return Err(Error::RankMismatch {
                expected: point.len(),
                found: direction.len(),
            });
        }
        if rank(&[point.clone(), direction.clone()]) != 2 {
            return Err(Error::DegenerateLine);
        }
        Ok(LineSpec { point, direction })
    }

    /// Parses comma-separated linear forms in `s` and `t`, e.g.
    /// `s,-s,t,-t,0`.
    pub fn parse(text: &str) -> Result<Self> {
        let (mut point, mut direction) = (Vec::new(), Vec::new());
        for (i, part) in text.split(',').enumerate() {
            let form = TruncatedSeries::<K>::parse_in(part, &st()).map_err(|e| match e {
                Error::VariableMismatch(v) => {
                    Error::InvalidArgument(format!("line component {}: unknown variable {v}", i + 1))
                }
                other => other,
            })?;
            if form.terms().keys().any(|e| e[0] + e[1] != 1) {
                return Err(Error::InvalidArgument(format!(
                    "line component {} is not a linear form in s, t",
                    i + 1
                )));
            }
            point.push(form.coefficient(&[1, 0]));
            direction.push(form.coefficient(&[0, 1]));
        }
        Self::new(point, direction)
    }

    pub fn rank(&self) -> usize {
        self.point.len()
    }

    /// First column: the tangent direction of the curve.
    pub fn point(&self) -> &[K] {
        &self.point
    }

    pub fn direction(&self) -> &[K] {
        &self.direction
    }

    /// The parametrization as linear series in `s, t`.
    pub fn as_series(&self) -> Vec<TruncatedSeries<K>> {
        self.point
            .iter()
            .zip(&self.direction)
            .map(|(a, b)| {
                TruncatedSeries::new(st(), [(vec![1, 0], a.clone()), (vec![0, 1], b.clone())], None)
                    .expect("linear terms")
            })
            .collect()
    }

    /// Standard basis vectors completing the two columns to a basis.
    fn completion(&self) -> Vec<Vec<K>> {
        let n = self.rank();
        let mut basis = vec![self.point.clone(), self.direction.clone()];
        let mut out = Vec::new();
        for j in 0..n {
            let mut e = vec![K::zero(); n];
            e[j] = K::one();
            basis.push(e.clone());
            if rank(&basis) == basis.len() {
                out.push(e);
            } else {
                basis.pop();
            }
        }
        out
    }
}

impl<K: Field> fmt::Display for LineSpec<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.as_series().iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

fn check_rank<K: Field>(fm: &TruncatedSeries<K>, n: usize) -> Result<()> {
    if fm.variables().len() != n {
        return Err(Error::RankMismatch {
            expected: fm.variables().len(),
            found: n,
        });
    }
    Ok(())
}

/// The line lies on the tangent cone `fm = 0`.
pub fn line_on_cone<K: Field>(fm: &HomogeneousForm<K>, l: &LineSpec<K>) -> Result<bool> {
    check_rank(fm.poly(), l.rank())?;
    Ok(fm.poly().substitute(&l.as_series(), None)?.is_zero())
}

/// `sum_j p_j dfm/dx_j (s * point + t * direction)` for each completing
/// vector `p`.
fn restricted_partials<K: Field>(fm: &HomogeneousForm<K>, l: &LineSpec<K>) -> Result<Vec<TruncatedSeries<K>>> {
    let line = l.as_series();
    let grads = (0..l.rank())
        .map(|j| fm.poly().derivative(j).substitute(&line, None))
        .collect::<Result<Vec<_>>>()?;
    Ok(l.completion()
        .iter()
        .map(|p| {
            let mut acc = TruncatedSeries::zero(st(), None);
            for (pj, g) in p.iter().zip(&grads) {
                if !pj.is_zero() {
                    acc = acc.add(&g.scale(pj)).expect("same variables");
                }
            }
            acc
        })
        .collect())
}

/// Coefficient of `s^(d-i) t^i` at index `i`.
fn binary_coeffs<K: Field>(form: &TruncatedSeries<K>, d: u32) -> Vec<K> {
    (0..=d).map(|i| form.coefficient(&[d - i, i])).collect()
}

/// Whether `(l_3, ..., l_n) -> sum l_i * dfm/dy_i` maps pairs of linear
/// forms onto all binary forms of degree `m`.
pub fn dfm_surjective<K: Field>(fm: &HomogeneousForm<K>, l: &LineSpec<K>) -> Result<bool> {
    if !line_on_cone(fm, l)? {
        return Err(Error::LineNotOnCone);
    }
    let m = fm.degree();
    let partials = restricted_partials(fm, l)?;
    let s = TruncatedSeries::variable(st(), 0);
    let t = TruncatedSeries::variable(st(), 1);
    let mut columns = Vec::new();
    for d in &partials {
        columns.push(binary_coeffs(&d.mul(&s)?, m));
        columns.push(binary_coeffs(&d.mul(&t)?, m));
    }
    Ok(!columns.is_empty() && rank(&columns) == m as usize + 1)
}

fn multiplicity_part<K: Field>(f: &TruncatedSeries<K>) -> Result<(u32, HomogeneousForm<K>)> {
    let (m, fm) = homogeneous_decomposition(f)?
        .into_iter()
        .next()
        .expect("nonzero series has a piece");
    if m == 0 {
        return Err(Error::NotAtOrigin);
    }
    Ok((m, fm))
}

fn check_precision<K: Field>(f: &TruncatedSeries<K>, needed: u32) -> Result<()> {
    match f.cap() {
        Some(c) if c < needed => Err(Error::InvalidArgument(format!(
            "equation known through degree {c}, degree {needed} needed"
        ))),
        _ => Ok(()),
    }
}

/// A formal curve `phi(s)` with linear part `z * s` and
/// `f(phi) = 0 mod s^(m + n_ord)`, obtained by correcting one coordinate
/// order by order. `tail` adds prescribed terms of degree 2..=n_ord.
pub fn curve_on_hypersurface<K: Field>(
    f: &TruncatedSeries<K>,
    z: &[K],
    n_ord: u32,
    tail: Option<&[TruncatedSeries<K>]>,
) -> Result<Vec<TruncatedSeries<K>>> {
    let n = f.variables().len();
    if z.len() != n {
        return Err(Error::RankMismatch { expected: n, found: z.len() });
    }
    if n_ord == 0 {
        return Err(Error::InvalidArgument("curve order must be positive".into()));
    }
    if z.iter().all(Field::is_zero) {
        return Err(Error::InvalidArgument("tangent direction is zero".into()));
    }
    let (m, fm) = multiplicity_part(f)?;
    check_precision(f, m + n_ord - 1)?;
    if !fm.poly().evaluate(z)?.is_zero() {
        return Err(Error::NotOnTangentCone);
    }
    let (j, g) = (0..n)
        .map(|j| Ok((j, fm.poly().derivative(j).evaluate(z)?)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .find(|(_, g)| !g.is_zero())
        .ok_or(Error::SingularTangentPoint)?;
    let g_inv = g.inv().expect("nonzero");

    let mut phi: Vec<TruncatedSeries<K>> = z
        .iter()
        .map(|zi| TruncatedSeries::monomial(s_only(), vec![1], zi.clone()))
        .collect();
    if let Some(tail) = tail {
        if tail.len() != n {
            return Err(Error::RankMismatch { expected: n, found: tail.len() });
        }
        for (i, x) in tail.iter().enumerate() {
            let x = x.renamed(s_only()).map_err(|_| Error::VariableMismatch(format!("curve tail {} must be a series in s", i + 1)))?;
            if x.order().is_some_and(|o| o < 2) || x.total_degree().is_some_and(|d| d > n_ord) {
                return Err(Error::InvalidArgument(format!(
                    "curve tail {} must have terms of degree 2..={n_ord}",
                    i + 1
                )));
            }
            phi[i] = phi[i].add(&TruncatedSeries::new(s_only(), x.terms().clone(), None)?)?;
        }
    }
    for k in 2..=n_ord {
        let target = m + k - 1;
        let r = f.substitute(&phi, Some(target))?;
        if r.order().is_some_and(|o| o < target) {
            return Err(Error::Internal(format!("curve residual dropped below {target}")));
        }
        let c = r.coefficient(&[target]);
        let step = TruncatedSeries::monomial(s_only(), vec![k], c.mul(&g_inv).neg());
        phi[j] = phi[j].add(&step)?;
    }
    let res = residual_order(f, &phi, Some(m + n_ord - 1))?;
    if !res.at_least(m + n_ord) {
        return Err(Error::Internal(format!("curve residual {res} below {}", m + n_ord)));
    }
    Ok(phi)
}

/// One solve of the linear system for the degree-`k` correction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepReport {
    pub degree: u32,
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
}

/// Output of [`extend_curve_to_surface`] with its checked contracts.
#[derive(Clone, Debug)]
pub struct SurfaceGerm<K> {
    /// Components in `s, t`, polynomials of total degree at most `n_ord`.
    pub components: Vec<TruncatedSeries<K>>,
    pub multiplicity: u32,
    pub n_ord: u32,
    pub residual: ResidualOrder,
    pub restriction_matches: bool,
    pub tangent_plane_matches: bool,
    pub steps: Vec<StepReport>,
}

/// Extends a curve on `f = 0` whose tangent is the first column of `l` to
/// a surface germ `Phi(s, t)` with tangent plane `l`, `Phi(s, 0) = phi` and
/// `f(Phi) = 0 mod (s, t)^(m + n_ord)`.
///
/// Requires `f(phi) = 0 mod s^(m + n_ord)`: the correction terms are
/// divisible by `t`, so the pure `s` part of the residual comes from `phi`
/// alone.
pub fn extend_curve_to_surface<K: Field>(
    f: &TruncatedSeries<K>,
    phi: &[TruncatedSeries<K>],
    l: &LineSpec<K>,
    n_ord: u32,
) -> Result<SurfaceGerm<K>> {
    let n = f.variables().len();
    if l.rank() != n {
        return Err(Error::RankMismatch { expected: n, found: l.rank() });
    }
    if phi.len() != n {
        return Err(Error::RankMismatch { expected: n, found: phi.len() });
    }
    if n_ord == 0 {
        return Err(Error::InvalidArgument("surface order must be positive".into()));
    }
    let (m, fm) = multiplicity_part(f)?;
    check_precision(f, m + n_ord - 1)?;
    if !line_on_cone(&fm, l)? {
        return Err(Error::LineNotOnCone);
    }
    if !dfm_surjective(&fm, l)? {
        return Err(Error::SurjectivityViolated);
    }

    let mut curve = Vec::with_capacity(n);
    for c in phi {
        let c = c
            .renamed(s_only())
            .map_err(|_| Error::VariableMismatch("the curve must be a series in s".into()))?;
        if c.coefficient(&[0]) != K::zero() {
            return Err(Error::NotAtOrigin);
        }
        let kept = c.terms().iter().filter(|(e, _)| e[0] <= n_ord).map(|(e, x)| (e.clone(), x.clone()));
        curve.push(TruncatedSeries::new(s_only(), kept, None)?);
    }
    let tangent: Vec<K> = curve.iter().map(|c| c.coefficient(&[1])).collect();
    if tangent.iter().all(Field::is_zero) || rank(&[tangent.clone(), l.point().to_vec()]) != 1 {
        return Err(Error::TangentMismatch);
    }
    let curve_res = residual_order(f, &curve, Some(m + n_ord - 1))?;
    if !curve_res.at_least(m + n_ord) {
        return Err(Error::CurveResidualTooLow {
            found: curve_res.to_string(),
            required: (m + n_ord) as usize,
        });
    }

    // the lowest-degree part of Phi is s * tangent + t * direction
    let plane = LineSpec::new(tangent, l.direction().to_vec())?;
    let partials = restricted_partials(&fm, &plane)?;
    let completion = plane.completion();
    let mut big_phi: Vec<TruncatedSeries<K>> = curve
        .iter()
        .zip(l.direction())
        .map(|(c, w)| {
            let lifted = c.terms().iter().map(|(e, x)| (vec![e[0], 0], x.clone()));
            let mut s = TruncatedSeries::new(st(), lifted, None).expect("valid terms");
            s.add_term(vec![0, 1], w.clone());
            s
        })
        .collect();

    let mut steps = Vec::new();
    for k in 2..=n_ord {
        let target = m + k - 1;
        let r = f.substitute(&big_phi, Some(target))?;
        if r.order().is_some_and(|o| o < target) {
            return Err(Error::Internal(format!("surface residual dropped below {target}")));
        }
        let g = r.homogeneous_part(target);
        if g.terms().keys().any(|e| e[1] == 0) {
            return Err(Error::Internal("residual is not divisible by t".into()));
        }
        // C = g / t has degree d; each B_i has degree k - 1
        let d = target - 1;
        let c: Vec<K> = (0..=d).map(|i| g.coefficient(&[d - i, i + 1])).collect();
        let cols = partials.len() * k as usize;
        let mut a = vec![vec![K::zero(); cols]; d as usize + 1];
        for (i, di) in partials.iter().enumerate() {
            for (e, x) in di.terms() {
                // D_i term s^e0 t^e1 times s^(k-1-b) t^b lands in row e1 + b
                for b in 0..k as usize {
                    a[e[1] as usize + b][i * k as usize + b] = x.clone();
                }
            }
        }
        let rhs: Vec<K> = c.iter().map(Field::neg).collect();
        let sol = solve(&a, &rhs).ok_or(Error::SurjectivityViolated)?;
        steps.push(StepReport {
            degree: k,
            unknowns: cols,
            equations: d as usize + 1,
            rank: rank(&a),
        });
        for (i, p) in completion.iter().enumerate() {
            let mut tb = TruncatedSeries::zero(st(), None);
            for b in 0..k {
                let coef = &sol[i * k as usize + b as usize];
                tb.add_term(vec![k - 1 - b, b + 1], coef.clone());
            }
            if tb.is_zero() {
                continue;
            }
            for (comp, pj) in big_phi.iter_mut().zip(p) {
                if !pj.is_zero() {
                    *comp = comp.add(&tb.scale(pj))?;
                }
            }
        }
    }

    let residual = residual_order(f, &big_phi, Some(m + n_ord))?;
    let restriction_matches = big_phi.iter().zip(&curve).all(|(big, c)| {
        let at_zero = big.terms().iter().filter(|(e, _)| e[1] == 0).map(|(e, x)| (vec![e[0]], x.clone()));
        TruncatedSeries::new(s_only(), at_zero, None).expect("valid terms") == *c
    });
    let lin_s: Vec<K> = big_phi.iter().map(|c| c.coefficient(&[1, 0])).collect();
    let lin_t: Vec<K> = big_phi.iter().map(|c| c.coefficient(&[0, 1])).collect();
    let tangent_plane_matches = rank(&[lin_s.clone(), lin_t.clone()]) == 2
        && rank(&[lin_s, lin_t, l.point().to_vec(), l.direction().to_vec()]) == 2;
    if !residual.at_least(m + n_ord) || !restriction_matches || !tangent_plane_matches {
        return Err(Error::Internal(format!(
            "surface contract failed: residual {residual}, restriction {restriction_matches}, tangent plane {tangent_plane_matches}"
        )));
    }
    Ok(SurfaceGerm {
        components: big_phi,
        multiplicity: m,
        n_ord,
        residual,
        restriction_matches,
        tangent_plane_matches,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::field::Fp;
    use num_rational::BigRational;

    type Q = BigRational;
    type S = TruncatedSeries<Q>;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn qs(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    fn fermat() -> S {
        S::parse("x1^3+x2^3+x3^3+x4^3+x5^3").unwrap()
    }

    fn form(text: &str) -> HomogeneousForm<Q> {
        HomogeneousForm::new(S::parse(text).unwrap()).unwrap()
    }

    fn s_series(text: &str) -> S {
        S::parse_in(text, &s_only()).unwrap()
    }

    #[test]
    fn lines_on_cones() {
        let fm = form("x1^3+x2^3+x3^3+x4^3+x5^3");
        let l = LineSpec::<Q>::parse("s,-s,t,-t,0").unwrap();
        assert!(line_on_cone(&fm, &l).unwrap());
        let l2 = LineSpec::<Q>::parse("s,t,0,0,0").unwrap();
        assert!(!line_on_cone(&fm, &l2).unwrap());
        assert_eq!(LineSpec::<Q>::parse("s,2*s,0").unwrap_err(), Error::DegenerateLine);
        assert!(LineSpec::<Q>::parse("s^2,t").is_err());
        assert_eq!(l.to_string(), "s,-s,t,-t,0");
    }

    #[test]
    fn surjectivity() {
        let fm = form("x1^3+x2^3+x3^3+x4^3+x5^3");
        let l = LineSpec::parse("s,-s,t,-t,0").unwrap();
        assert!(dfm_surjective(&fm, &l).unwrap());

        let five: Vec<String> = (1..=5).map(|i| format!("x{i}")).collect();
        let cube = HomogeneousForm::new(S::parse_in("x3^3", &five).unwrap()).unwrap();
        let l = LineSpec::parse("s,t,0,0,0").unwrap();
        assert!(!dfm_surjective(&cube, &l).unwrap());

        let quadric = form("x1*x2 + x3*x4");
        let l = LineSpec::parse("s,0,t,0").unwrap();
        assert!(dfm_surjective(&quadric, &l).unwrap());

        let fm = form("x1^3+x2^3+x3^3+x4^3+x5^3");
        let off = LineSpec::parse("s,t,0,0,0").unwrap();
        assert_eq!(dfm_surjective(&fm, &off).unwrap_err(), Error::LineNotOnCone);
    }

    #[test]
    fn curves() {
        let f = S::parse("x1*x2 + x3^2").unwrap();
        let phi = curve_on_hypersurface(&f, &qs(&[1, 0, 0]), 5, None).unwrap();
        assert_eq!(phi, vec![s_series("s"), s_series("0"), s_series("0")]);

        let tail = [s_series("0"), s_series("0"), s_series("s^2")];
        let phi = curve_on_hypersurface(&f, &qs(&[1, 0, 0]), 3, Some(&tail)).unwrap();
        assert_eq!(phi, vec![s_series("s"), s_series("-s^3"), s_series("s^2")]);

        assert_eq!(
            curve_on_hypersurface(&f, &qs(&[0, 0, 1]), 3, None).unwrap_err(),
            Error::NotOnTangentCone
        );
        let cusp = S::parse("x1*x2*x3 + x2^4 + x3^5").unwrap();
        assert_eq!(
            curve_on_hypersurface(&cusp, &qs(&[1, 0, 0]), 3, None).unwrap_err(),
            Error::SingularTangentPoint
        );
    }

    #[test]
    fn fermat_curve_residual() {
        let f = fermat();
        let phi = curve_on_hypersurface(&f, &qs(&[1, -1, 0, 0, 0]), 8, None).unwrap();
        assert!(residual_order(&f, &phi, Some(20)).unwrap().at_least(11));
    }

    #[test]
    fn quadric_plane_is_exact() {
        let f = S::parse("x1*x2 + x3*x4").unwrap();
        let phi = [s_series("s"), s_series("0"), s_series("0"), s_series("0")];
        let l = LineSpec::parse("s,0,t,0").unwrap();
        let germ = extend_curve_to_surface(&f, &phi, &l, 4).unwrap();
        let expect: Vec<S> = l.as_series();
        assert_eq!(germ.components, expect);
        assert_eq!(
            residual_order(&f, &germ.components, None).unwrap(),
            ResidualOrder::ExceedsCap(u32::MAX)
        );
    }

    #[test]
    fn fermat_surface() {
        let f = fermat();
        let tail = [s_series("s^2"), s_series("0"), s_series("s^3"), s_series("-s^2"), s_series("2*s^2 + s^4")];
        let phi = curve_on_hypersurface(&f, &qs(&[1, -1, 0, 0, 0]), 8, Some(&tail)).unwrap();
        let l = LineSpec::parse("s,-s,t,-t,0").unwrap();
        let germ = extend_curve_to_surface(&f, &phi, &l, 8).unwrap();
        assert!(germ.residual.at_least(11));
        assert!(germ.restriction_matches && germ.tangent_plane_matches);
        assert_eq!(germ.steps.len(), 7);
        assert!(germ.components.iter().all(|c| c.total_degree().unwrap_or(0) <= 8));

        // refining keeps the lower-order terms
        let small = extend_curve_to_surface(&f, &phi, &l, 5).unwrap();
        for (a, b) in germ.components.iter().zip(&small.components) {
            assert_eq!(a.truncate(5).terms(), b.terms());
        }
    }

    #[test]
    fn precondition_errors() {
        let f = fermat();
        let l = LineSpec::parse("s,-s,t,-t,0").unwrap();
        let off = [s_series("s"), s_series("0"), s_series("-s"), s_series("0"), s_series("0")];
        assert_eq!(extend_curve_to_surface(&f, &off, &l, 4).unwrap_err(), Error::TangentMismatch);

        let crude = [s_series("s"), s_series("-s + s^2"), s_series("0"), s_series("0"), s_series("0")];
        assert!(matches!(
            extend_curve_to_surface(&f, &crude, &l, 4),
            Err(Error::CurveResidualTooLow { required: 7, .. })
        ));

        let l_off = LineSpec::parse("s,t,0,0,0").unwrap();
        let phi = [s_series("s"), s_series("0"), s_series("0"), s_series("0"), s_series("0")];
        assert_eq!(extend_curve_to_surface(&f, &phi, &l_off, 4).unwrap_err(), Error::LineNotOnCone);
    }

    #[test]
    fn prime_field_surface() {
        type F = Fp<101>;
        let f = TruncatedSeries::<F>::parse("x1^3+x2^3+x3^3+x4^3+x5^6").unwrap();
        let l = LineSpec::<F>::parse("s,-s,t,-t,0").unwrap();
        let z: Vec<F> = [1, -1, 0, 0, 0].iter().map(|&x| F::new(x)).collect();
        let phi = curve_on_hypersurface(&f, &z, 6, None).unwrap();
        let germ = extend_curve_to_surface(&f, &phi, &l, 6).unwrap();
        assert!(germ.residual.at_least(9));
    }
}
