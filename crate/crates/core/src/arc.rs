//! Arcs through the torus, recorded by their coordinate components as
//! truncated Laurent series in `t`, and their valuation vectors.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::cone::{Cone, Face};
use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::parse::parse_polynomial;
use crate::resolution::Fan;

/// Laurent series in `t` known below a fixed exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    terms: BTreeMap<i64, BigRational>,
}

impl LaurentSeries {
    pub fn new(terms: impl IntoIterator<Item = (i64, BigRational)>) -> LaurentSeries {
        let mut out = BTreeMap::new();
        for (k, c) in terms {
            *out.entry(k).or_insert_with(BigRational::zero) += c;
        }
        out.retain(|_, c: &mut BigRational| !c.is_zero());
        LaurentSeries { terms: out }
    }

    pub fn monomial(k: i64) -> LaurentSeries {
        LaurentSeries::new([(k, BigRational::one())])
    }

    pub fn terms(&self) -> &BTreeMap<i64, BigRational> {
        &self.terms
    }

    pub fn order(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn coefficient(&self, k: i64) -> BigRational {
        self.terms.get(&k).cloned().unwrap_or_else(BigRational::zero)
    }

    fn mul_truncated(&self, other: &LaurentSeries, below: i64) -> LaurentSeries {
        let mut out = Vec::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if a + b < below {
                    out.push((a + b, ca * cb));
                }
            }
        }
        LaurentSeries::new(out)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let neg = c < &BigRational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let unit = abs.is_one();
            match (*k, unit) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => f.write_str("t")?,
                (1, false) => write!(f, "{abs}*t")?,
                (k, true) => write!(f, "t^{k}")?,
                (k, false) => write!(f, "{abs}*t^{k}")?,
            }
        }
        Ok(())
    }
}

/// An arc whose generic point lies in the torus, given by the pullbacks of
/// the coordinate characters. Coefficients of `t^k` with
/// `k >= truncation_order` are unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusArc {
    components: Vec<LaurentSeries>,
    truncation_order: i64,
}

impl TorusArc {
    pub fn new(components: Vec<LaurentSeries>, truncation_order: i64) -> Result<TorusArc> {
        if components.is_empty() {
            return Err(Error::ZeroRank);
        }
        for (i, c) in components.iter().enumerate() {
            if let Some(k) = c.terms.keys().next_back() {
                if *k >= truncation_order {
                    return Err(Error::InvalidArgument(format!(
                        "component {} has a term t^{k} at or beyond the truncation order {truncation_order}",
                        i + 1
                    )));
                }
            }
        }
        Ok(TorusArc {
            components,
            truncation_order,
        })
    }

    /// Parses one series per component, e.g. `["t+t^2", "t^2*(3-t)"]`.
    pub fn parse(components: &[&str], truncation_order: i64) -> Result<TorusArc> {
        let series = components
            .iter()
            .map(|s| parse_series(s, "t"))
            .collect::<Result<Vec<_>>>()?;
        TorusArc::new(series, truncation_order)
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[LaurentSeries] {
        &self.components
    }

    pub fn truncation_order(&self) -> i64 {
        self.truncation_order
    }

    /// Componentwise product; the result is known as far as both factors
    /// determine it.
    pub fn product(&self, other: &TorusArc) -> Result<TorusArc> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                found: other.rank(),
            });
        }
        let va = component_orders(self)?;
        let vb = component_orders(other)?;
        let below = (0..self.rank())
            .map(|i| (self.truncation_order + vb[i]).min(other.truncation_order + va[i]))
            .min()
            .expect("nonzero rank");
        let comps = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.mul_truncated(b, below))
            .collect();
        TorusArc::new(comps, below)
    }
}

fn component_orders(a: &TorusArc) -> Result<Vec<i64>> {
    a.components
        .iter()
        .enumerate()
        .map(|(i, c)| c.order().ok_or(Error::OrderUndetermined { component: i + 1 }))
        .collect()
}

fn parse_series(s: &str, var: &str) -> Result<LaurentSeries> {
    let p = parse_polynomial(s)?;
    let terms = p.align(&[var.to_string()])?;
    Ok(LaurentSeries::new(terms.into_iter().map(|(e, c)| (e[0], c))))
}

/// `v_alpha`: the orders of the coordinate components.
pub fn valuation_of_arc(a: &TorusArc) -> Result<LatticeVector> {
    Ok(LatticeVector::new(
        component_orders(a)?.into_iter().map(BigInt::from).collect(),
    ))
}

/// The arc `t -> (t^{v_1}, ..., t^{v_n})`.
pub fn monomial_arc(v: &LatticeVector) -> Result<TorusArc> {
    let exps = v
        .coords()
        .iter()
        .map(|x| {
            x.to_i64()
                .filter(|k| k.checked_add(1).is_some())
                .ok_or_else(|| Error::InvalidArgument(format!("exponent {x} out of range")))
        })
        .collect::<Result<Vec<_>>>()?;
    let top = exps.iter().copied().max().unwrap_or(0).max(0);
    TorusArc::new(exps.into_iter().map(LaurentSeries::monomial).collect(), top + 1)
}

/// The face whose orbit contains the special point of the arc.
pub fn orbit_of_arc(c: &Cone, a: &TorusArc) -> Result<Face> {
    let v = valuation_of_arc(a)?;
    if !c.contains(&v)? {
        return Err(Error::ArcDoesNotExtend(v));
    }
    c.smallest_face_containing(&v)
}

/// Whether the special point of the arc lies in the singular locus of
/// `X(c)`.
pub fn special_point_is_singular(c: &Cone, a: &TorusArc) -> Result<bool> {
    Ok(!orbit_of_arc(c, a)?.is_regular())
}

/// Orbit of the lifted arc on the toric variety of `f`: the maximal cone
/// used as chart and the face of it whose relative interior holds `v_alpha`.
pub fn lift_orbit(f: &Fan, a: &TorusArc) -> Result<(Cone, Face)> {
    let v = valuation_of_arc(a)?;
    if !f.ambient().contains(&v)? {
        return Err(Error::ArcDoesNotExtend(v));
    }
    let face = f.cone_containing(&v)?;
    Ok((face.parent().clone(), face))
}

/// Polynomial in the family parameter `c`, dense from degree 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamPoly {
    coeffs: Vec<BigRational>,
}

impl ParamPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> ParamPoly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ParamPoly { coeffs }
    }

    pub fn zero() -> ParamPoly {
        ParamPoly { coeffs: vec![] }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, c: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, a| acc * c + a)
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = LaurentSeries::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, a)| (k as i64, a.clone())),
        )
        .to_string();
        f.write_str(&s.replace('t', "c"))
    }
}

/// A one-parameter family of torus arcs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcFamily {
    components: Vec<BTreeMap<i64, ParamPoly>>,
    truncation_order: i64,
}

impl ArcFamily {
    pub fn new(components: Vec<BTreeMap<i64, ParamPoly>>, truncation_order: i64) -> Result<ArcFamily> {
        if components.is_empty() {
            return Err(Error::ZeroRank);
        }
        let mut cleaned = Vec::with_capacity(components.len());
        for (i, mut comp) in components.into_iter().enumerate() {
            comp.retain(|_, p| !p.is_zero());
            if comp.keys().next_back().is_some_and(|k| *k >= truncation_order) {
                return Err(Error::InvalidArgument(format!(
                    "component {} has a term at or beyond the truncation order",
                    i + 1
                )));
            }
            if comp.is_empty() {
                return Err(Error::OrderUndetermined { component: i + 1 });
            }
            cleaned.push(comp);
        }
        Ok(ArcFamily {
            components: cleaned,
            truncation_order,
        })
    }

    /// Parses series in `t` whose coefficients are polynomials in `c`.
    pub fn parse(components: &[&str], truncation_order: i64) -> Result<ArcFamily> {
        let vars = ["t".to_string(), "c".to_string()];
        let mut comps = Vec::new();
        for s in components {
            let p = parse_polynomial(s)?;
            let mut comp: BTreeMap<i64, Vec<BigRational>> = BTreeMap::new();
            for (e, a) in p.align(&vars)? {
                let dc = usize::try_from(e[1])
                    .map_err(|_| Error::InvalidArgument("negative power of the parameter c".into()))?;
                let entry = comp.entry(e[0]).or_default();
                if entry.len() <= dc {
                    entry.resize(dc + 1, BigRational::zero());
                }
                entry[dc] += a;
            }
            comps.push(comp.into_iter().map(|(k, v)| (k, ParamPoly::new(v))).collect());
        }
        ArcFamily::new(comps, truncation_order)
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn truncation_order(&self) -> i64 {
        self.truncation_order
    }

    /// The member of the family at parameter value `c`.
    pub fn specialize(&self, c: &BigRational) -> Result<TorusArc> {
        let comps = self
            .components
            .iter()
            .map(|comp| LaurentSeries::new(comp.iter().map(|(k, p)| (*k, p.eval(c)))))
            .collect();
        TorusArc::new(comps, self.truncation_order)
    }

    fn lowest_exponent(&self, j: usize) -> i64 {
        self.components[j].keys().next().copied().unwrap_or(0).min(0)
    }
}

/// Coefficient polynomials of `t^k`, `start <= k <= v_j`, for one
/// coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateWitness {
    pub start: i64,
    pub polynomials: Vec<ParamPoly>,
}

impl CoordinateWitness {
    /// The member at `c` has order at most `v_j` in this coordinate.
    pub fn holds_at(&self, c: &BigRational) -> bool {
        self.polynomials.iter().any(|p| !p.eval(c).is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.polynomials.iter().all(|p| p.coeffs().len() <= 1)
    }
}

/// For each coordinate `j`, the coefficients that decide whether the
/// order of the member is at most `v_j`; the locus `{c : v_{alpha_c} <= v}`
/// is where every coordinate has a nonvanishing witness.
pub fn semicontinuity_witness(fam: &ArcFamily, v: &LatticeVector) -> Result<Vec<CoordinateWitness>> {
    v.check_rank(fam.rank())?;
    let mut out = Vec::with_capacity(fam.rank());
    for (j, x) in v.coords().iter().enumerate() {
        let vj = x
            .to_i64()
            .ok_or_else(|| Error::InvalidArgument(format!("coordinate {x} out of range")))?;
        let start = fam.lowest_exponent(j);
        if vj >= fam.truncation_order {
            return Err(Error::OrderUndetermined { component: j + 1 });
        }
        let polynomials = (start..=vj)
            .map(|k| fam.components[j].get(&k).cloned().unwrap_or_else(ParamPoly::zero))
            .collect();
        out.push(CoordinateWitness { start, polynomials });
    }
    Ok(out)
}

/// Whether `v_{alpha_c} <= v` coordinatewise, as read off the witnesses.
pub fn in_semicontinuity_locus(witness: &[CoordinateWitness], c: &BigRational) -> bool {
    witness.iter().all(|w| w.holds_at(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::in_s;
    use crate::resolution::resolve;
    use proptest::prelude::*;

    fn v(c: &[i64]) -> LatticeVector {
        LatticeVector::from_slice(c)
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn cone(rays: &[&[i64]]) -> Cone {
        Cone::new(&rays.iter().map(|r| v(r)).collect::<Vec<_>>()).unwrap()
    }

    fn example(e: i64) -> Cone {
        cone(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, e]])
    }

    #[test]
    fn valuations() {
        let a = TorusArc::parse(&["t", "t^2", "t^3"], 10).unwrap();
        assert_eq!(valuation_of_arc(&a).unwrap(), v(&[1, 2, 3]));
        let a = TorusArc::parse(&["t*(1+t)", "t^2*(3-t)", "t^3"], 10).unwrap();
        assert_eq!(valuation_of_arc(&a).unwrap(), v(&[1, 2, 3]));
        let a = TorusArc::parse(&["t^-2 + 1", "5"], 4).unwrap();
        assert_eq!(valuation_of_arc(&a).unwrap(), v(&[-2, 0]));
    }

    #[test]
    fn undetermined_and_invalid() {
        let a = TorusArc::parse(&["t", "t - t"], 5).unwrap();
        assert_eq!(
            valuation_of_arc(&a).unwrap_err(),
            Error::OrderUndetermined { component: 2 }
        );
        assert!(matches!(
            TorusArc::parse(&["t^5"], 5),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(TorusArc::parse(&["x"], 5), Err(Error::VariableMismatch(_))));
    }

    #[test]
    fn monomial_arcs_and_orbits() {
        let zero = monomial_arc(&v(&[0, 0, 0])).unwrap();
        assert!(zero.components().iter().all(|c| c == &LaurentSeries::monomial(0)));
        let sigma = example(3);
        assert_eq!(orbit_of_arc(&sigma, &zero).unwrap().dim(), 0);

        let a = monomial_arc(&v(&[1, 1, 1])).unwrap();
        let face = orbit_of_arc(&sigma, &a).unwrap();
        assert_eq!(face.dim(), 3);
        assert!(special_point_is_singular(&sigma, &a).unwrap());

        let a = monomial_arc(&v(&[1, 0, 0])).unwrap();
        let face = orbit_of_arc(&sigma, &a).unwrap();
        assert_eq!(face.rays(), vec![v(&[1, 0, 0])]);
        assert!(!special_point_is_singular(&sigma, &a).unwrap());

        let a = monomial_arc(&v(&[1, 1, 2])).unwrap();
        assert_eq!(orbit_of_arc(&sigma, &a).unwrap().dim(), 3);

        let a = monomial_arc(&v(&[0, 0, 1])).unwrap();
        assert_eq!(
            orbit_of_arc(&sigma, &a).unwrap_err(),
            Error::ArcDoesNotExtend(v(&[0, 0, 1]))
        );
    }

    #[test]
    fn lifted_orbits() {
        let a1 = cone(&[&[1, 0], &[1, 2]]);
        let (f, _) = resolve(&a1).unwrap();
        let (_, face) = lift_orbit(&f, &monomial_arc(&v(&[1, 1])).unwrap()).unwrap();
        assert_eq!(face.rays(), vec![v(&[1, 1])]);

        let sigma = example(3);
        let (f, _) = resolve(&sigma).unwrap();
        let (_, face) = lift_orbit(&f, &monomial_arc(&v(&[1, 1, 1])).unwrap()).unwrap();
        assert_eq!(face.rays(), vec![v(&[1, 1, 1])]);

        let trivial = Fan::trivial(&sigma);
        for w in [v(&[1, 1, 2]), v(&[1, 0, 0]), v(&[2, 1, 1])] {
            let a = monomial_arc(&w).unwrap();
            let (chart, face) = lift_orbit(&trivial, &a).unwrap();
            assert_eq!(chart, sigma);
            assert_eq!(face.rays(), orbit_of_arc(&sigma, &a).unwrap().rays());
        }
    }

    #[test]
    fn witnesses() {
        let fam = ArcFamily::parse(&["t", "t^2", "c*t + t^3"], 6).unwrap();
        let w = semicontinuity_witness(&fam, &v(&[1, 2, 1])).unwrap();
        assert_eq!(w[2].polynomials, vec![ParamPoly::zero(), ParamPoly::new(vec![q(0), q(1)])]);
        assert!(in_semicontinuity_locus(&w, &q(3)));
        assert!(!in_semicontinuity_locus(&w, &q(0)));

        let fam = ArcFamily::parse(&["t", "t", "c + t"], 6).unwrap();
        let w = semicontinuity_witness(&fam, &v(&[1, 1, 0])).unwrap();
        assert_eq!(w[2].polynomials, vec![ParamPoly::new(vec![q(0), q(1)])]);
        let at_zero = valuation_of_arc(&fam.specialize(&q(0)).unwrap()).unwrap();
        assert_eq!(at_zero, v(&[1, 1, 1]));
        assert!(!in_semicontinuity_locus(&w, &q(0)));

        let fam = ArcFamily::parse(&["2*t", "t^2"], 6).unwrap();
        let w = semicontinuity_witness(&fam, &v(&[1, 1])).unwrap();
        assert!(w.iter().all(CoordinateWitness::is_constant));
        assert!(!in_semicontinuity_locus(&w, &q(5)));
        let w = semicontinuity_witness(&fam, &v(&[1, 2])).unwrap();
        assert!(in_semicontinuity_locus(&w, &q(5)));

        assert!(semicontinuity_witness(&fam, &v(&[1, 6])).is_err());
    }

    #[test]
    fn display() {
        let s = LaurentSeries::new([(1, q(1)), (2, q(-3)), (0, BigRational::new(1.into(), 2.into()))]);
        assert_eq!(s.to_string(), "1/2 + t - 3*t^2");
        assert_eq!(ParamPoly::new(vec![q(0), q(2)]).to_string(), "2*c");
    }

    fn arb_unit_series(max_order: i64) -> impl Strategy<Value = LaurentSeries> {
        (-max_order..=max_order, prop::collection::vec(-3i64..=3, 0..4), 1i64..=5)
            .prop_map(|(k, tail, lead)| {
                let mut terms = vec![(k, q(lead))];
                terms.extend(tail.into_iter().enumerate().map(|(i, c)| (k + 1 + i as i64, q(c))));
                LaurentSeries::new(terms)
            })
    }

    fn arb_arc() -> impl Strategy<Value = TorusArc> {
        prop::collection::vec(arb_unit_series(4), 3).prop_map(|c| TorusArc::new(c, 20).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn additivity(a in arb_arc(), b in arb_arc()) {
            let ab = a.product(&b).unwrap();
            let lhs = valuation_of_arc(&ab).unwrap();
            let rhs = &valuation_of_arc(&a).unwrap() + &valuation_of_arc(&b).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn round_trip(c in prop::collection::vec(-50i64..=50, 1..6)) {
            let w = v(&c);
            prop_assert_eq!(valuation_of_arc(&monomial_arc(&w).unwrap()).unwrap(), w);
        }

        #[test]
        fn key_consistency(e in 2i64..6, c in prop::collection::vec(0i64..6, 3)) {
            let sigma = example(e);
            let w = v(&c);
            let a = monomial_arc(&w).unwrap();
            if sigma.contains(&w).unwrap() {
                let face = orbit_of_arc(&sigma, &a).unwrap();
                prop_assert_eq!(face.rays(), sigma.smallest_face_containing(&w).unwrap().rays());
                prop_assert_eq!(special_point_is_singular(&sigma, &a).unwrap(), in_s(&sigma, &w));
            } else {
                prop_assert!(orbit_of_arc(&sigma, &a).is_err());
            }
        }
    }
}
