use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::parse::parse_polynomial;

use super::field::Field;

pub type Exponent = Vec<u32>;

/// A multivariate power series stored up to total degree `cap`. A cap of
/// `None` means the stored terms are the whole series (a polynomial).
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries<K> {
    variables: Vec<String>,
    terms: BTreeMap<Exponent, K>,
    cap: Option<u32>,
}

fn degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

fn min_cap(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Variables of a parsed expression: `x1..xN` when every name has that
/// shape, otherwise the names in natural order.
fn default_variables(found: &[String]) -> Vec<String> {
    let indices: Option<Vec<usize>> = found
        .iter()
        .map(|v| {
            v.strip_prefix('x')
                .filter(|d| !d.is_empty() && !d.starts_with('0'))
                .and_then(|d| d.parse().ok())
        })
        .collect();
    match indices {
        Some(ix) if !ix.is_empty() => {
            let n = *ix.iter().max().expect("nonempty");
            (1..=n).map(|i| format!("x{i}")).collect()
        }
        _ => found.to_vec(),
    }
}

impl<K: Field> TruncatedSeries<K> {
    pub fn new(variables: Vec<String>, terms: impl IntoIterator<Item = (Exponent, K)>, cap: Option<u32>) -> Result<Self> {
        let mut out = TruncatedSeries {
            variables,
            terms: BTreeMap::new(),
            cap,
        };
        for (e, c) in terms {
            if e.len() != out.variables.len() {
                return Err(Error::RankMismatch {
                    expected: out.variables.len(),
                    found: e.len(),
                });
            }
            if cap.is_some_and(|k| degree(&e) > k) {
                return Err(Error::InvalidArgument(format!(
                    "term of degree {} exceeds the truncation cap {}",
                    degree(&e),
                    cap.expect("checked")
                )));
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    /// Parses a polynomial, keeping it exact.
    pub fn parse(text: &str) -> Result<Self> {
        let p = parse_polynomial(text)?;
        let vars = default_variables(&p.variables);
        Self::from_parsed(&p, vars)
    }

    /// Parses against a fixed variable list.
    pub fn parse_in(text: &str, variables: &[String]) -> Result<Self> {
        let p = parse_polynomial(text)?;
        Self::from_parsed(&p, variables.to_vec())
    }

    fn from_parsed(p: &crate::parse::ParsedPolynomial, vars: Vec<String>) -> Result<Self> {
        let mut terms = Vec::new();
        for (e, c) in p.align(&vars)? {
            let e = e
                .into_iter()
                .map(|k| u32::try_from(k).map_err(|_| Error::InvalidArgument("negative exponent in a power series".into())))
                .collect::<Result<Vec<_>>>()?;
            terms.push((e, K::from_rational(&c)?));
        }
        Self::new(vars, terms, None)
    }

    pub fn zero(variables: Vec<String>, cap: Option<u32>) -> Self {
        TruncatedSeries {
            variables,
            terms: BTreeMap::new(),
            cap,
        }
    }

    pub fn constant(variables: Vec<String>, c: K) -> Self {
        let n = variables.len();
        let mut s = Self::zero(variables, None);
        s.add_term(vec![0; n], c);
        s
    }

    pub fn variable(variables: Vec<String>, i: usize) -> Self {
        let mut e = vec![0; variables.len()];
        e[i] = 1;
        let mut s = Self::zero(variables, None);
        s.add_term(e, K::one());
        s
    }

    pub fn monomial(variables: Vec<String>, e: Exponent, c: K) -> Self {
        let mut s = Self::zero(variables, None);
        s.add_term(e, c);
        s
    }

    pub(crate) fn add_term(&mut self, e: Exponent, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                *x = x.add(&c);
                if x.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, K> {
        &self.terms
    }

    pub fn cap(&self) -> Option<u32> {
        self.cap
    }

    pub fn is_polynomial(&self) -> bool {
        self.cap.is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &[u32]) -> K {
        self.terms.get(e).cloned().unwrap_or_else(K::zero)
    }

    /// Lowest total degree of a stored term.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| degree(e)).min()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| degree(e)).max()
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        TruncatedSeries {
            variables: self.variables.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| degree(e) == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
            cap: None,
        }
    }

    /// Drops terms above `cap` and records the cap.
    pub fn truncate(&self, cap: u32) -> Self {
        TruncatedSeries {
            variables: self.variables.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| degree(e) <= cap)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
            cap: Some(min_cap(self.cap, Some(cap)).expect("some")),
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.variables != other.variables {
            return Err(Error::VariableMismatch(format!(
                "{:?} vs {:?}",
                self.variables, other.variables
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let cap = min_cap(self.cap, other.cap);
        let mut out = Self::zero(self.variables.clone(), cap);
        for (e, c) in self.terms.iter().chain(&other.terms) {
            if cap.is_none_or(|k| degree(e) <= k) {
                out.add_term(e.clone(), c.clone());
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            variables: self.variables.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
            cap: self.cap,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &K) -> Self {
        let mut out = Self::zero(self.variables.clone(), self.cap);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.mul(k));
        }
        out
    }

    /// Product; with an explicit `cap` the result keeps only terms up to it.
    pub fn mul_capped(&self, other: &Self, cap: Option<u32>) -> Result<Self> {
        self.check_same(other)?;
        let cap = min_cap(min_cap(self.cap, other.cap), cap);
        let mut out = Self::zero(self.variables.clone(), cap);
        for (ea, ca) in &self.terms {
            let da = degree(ea);
            if cap.is_some_and(|k| da > k) {
                continue;
            }
            for (eb, cb) in &other.terms {
                if cap.is_some_and(|k| da + degree(eb) > k) {
                    continue;
                }
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca.mul(cb));
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_capped(other, None)
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.variables.clone(), self.cap.map(|k| k.saturating_sub(1)));
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, c.mul(&K::from_i64(e[i] as i64)));
            }
        }
        out
    }

    /// Value of a polynomial at a point.
    pub fn evaluate(&self, point: &[K]) -> Result<K> {
        if !self.is_polynomial() {
            return Err(Error::InvalidArgument("cannot evaluate a truncated series".into()));
        }
        if point.len() != self.variables.len() {
            return Err(Error::RankMismatch {
                expected: self.variables.len(),
                found: point.len(),
            });
        }
        let mut acc = K::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, k) in point.iter().zip(e) {
                for _ in 0..*k {
                    t = t.mul(x);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// `self(sub_1, ..., sub_n)`, computed up to `cap` when given. The
    /// substituted series must vanish at the origin unless `self` is a
    /// polynomial and every `sub_i` is too.
    pub fn substitute(&self, sub: &[TruncatedSeries<K>], cap: Option<u32>) -> Result<TruncatedSeries<K>> {
        if sub.len() != self.variables.len() {
            return Err(Error::RankMismatch {
                expected: self.variables.len(),
                found: sub.len(),
            });
        }
        let target = sub
            .first()
            .map(|s| s.variables.clone())
            .ok_or(Error::ZeroRank)?;
        for s in sub {
            s.check_same(&sub[0])?;
        }
        let all_vanish = sub.iter().all(|s| s.order().is_none_or(|o| o >= 1));
        // each substituted term has degree >= its degree in `self` when the
        // substitution vanishes at the origin, so `self.cap` bounds precision
        let mut out_cap = sub.iter().fold(cap, |acc, s| min_cap(acc, s.cap));
        if !all_vanish {
            if !self.is_polynomial() || sub.iter().any(|s| !s.is_polynomial()) {
                return Err(Error::NotAtOrigin);
            }
        } else {
            out_cap = min_cap(out_cap, self.cap);
        }
        let max_exp: Vec<u32> = (0..sub.len())
            .map(|i| self.terms.keys().map(|e| e[i]).max().unwrap_or(0))
            .collect();
        let one = TruncatedSeries::constant(target.clone(), K::one());
        let mut powers: Vec<Vec<TruncatedSeries<K>>> = Vec::with_capacity(sub.len());
        for (s, &k) in sub.iter().zip(&max_exp) {
            let mut p = vec![one.clone()];
            for _ in 0..k {
                let next = p.last().expect("nonempty").mul_capped(s, out_cap)?;
                p.push(next);
            }
            powers.push(p);
        }
        let mut out = TruncatedSeries::zero(target.clone(), out_cap);
        for (e, c) in &self.terms {
            if all_vanish && out_cap.is_some_and(|k| degree(e) > k) {
                continue;
            }
            let mut t = TruncatedSeries::constant(target.clone(), c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul_capped(&powers[i][k as usize], out_cap)?;
                }
            }
            for (e2, c2) in t.terms {
                out.add_term(e2, c2);
            }
        }
        Ok(out)
    }

    /// Same series over another list of variable names.
    pub fn renamed(&self, variables: Vec<String>) -> Result<Self> {
        if variables.len() != self.variables.len() {
            return Err(Error::RankMismatch {
                expected: self.variables.len(),
                found: variables.len(),
            });
        }
        Ok(TruncatedSeries {
            variables,
            terms: self.terms.clone(),
            cap: self.cap,
        })
    }

    /// Terms in print order: degree ascending, then exponent descending.
    pub fn sorted_terms(&self) -> Vec<(&Exponent, &K)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| degree(a.0).cmp(&degree(b.0)).then(b.0.cmp(a.0)));
        v
    }
}

impl<K: Field> fmt::Display for TruncatedSeries<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            f.write_str("0")?;
        }
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { c.neg() } else { c.clone() };
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let factors: Vec<String> = e
                .iter()
                .zip(&self.variables)
                .filter(|(k, _)| **k > 0)
                .map(|(k, v)| if *k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        if let Some(k) = self.cap {
            write!(f, " + O({})", k + 1)?;
        }
        Ok(())
    }
}

impl<K: fmt::Debug> fmt::Debug for TruncatedSeries<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TruncatedSeries")
            .field("variables", &self.variables)
            .field("terms", &self.terms)
            .field("cap", &self.cap)
            .finish()
    }
}

/// A homogeneous polynomial.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomogeneousForm<K> {
    degree: u32,
    poly: TruncatedSeries<K>,
}

impl<K: Field> HomogeneousForm<K> {
    pub fn new(poly: TruncatedSeries<K>) -> Result<Self> {
        let d = poly.order().ok_or(Error::ZeroSeries)?;
        if poly.total_degree() != Some(d) {
            return Err(Error::InvalidArgument(format!("{poly} is not homogeneous")));
        }
        Ok(HomogeneousForm {
            degree: d,
            poly: TruncatedSeries { cap: None, ..poly },
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn poly(&self) -> &TruncatedSeries<K> {
        &self.poly
    }
}

impl<K: Field> fmt::Display for HomogeneousForm<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

/// Pieces of each degree; the lowest key is the multiplicity.
pub fn homogeneous_decomposition<K: Field>(f: &TruncatedSeries<K>) -> Result<BTreeMap<u32, HomogeneousForm<K>>> {
    if f.is_zero() {
        return Err(Error::ZeroSeries);
    }
    let mut degrees: Vec<u32> = f.terms.keys().map(|e| degree(e)).collect();
    degrees.sort_unstable();
    degrees.dedup();
    degrees
        .into_iter()
        .map(|d| Ok((d, HomogeneousForm::new(f.homogeneous_part(d))?)))
        .collect()
}

/// Order of `f` after substitution, or the precision limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidualOrder {
    Exact(u32),
    /// Zero through this total degree.
    ExceedsCap(u32),
}

impl ResidualOrder {
    /// The residual is at least `d`.
    pub fn at_least(self, d: u32) -> bool {
        match self {
            ResidualOrder::Exact(k) => k >= d,
            ResidualOrder::ExceedsCap(k) => k + 1 >= d,
        }
    }
}

impl fmt::Display for ResidualOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidualOrder::Exact(k) => write!(f, "{k}"),
            ResidualOrder::ExceedsCap(k) => write!(f, "> {k}"),
        }
    }
}

pub fn residual_order<K: Field>(f: &TruncatedSeries<K>, sub: &[TruncatedSeries<K>], cap: Option<u32>) -> Result<ResidualOrder> {
    let r = f.substitute(sub, cap)?;
    match (r.order(), r.cap) {
        (Some(d), _) => Ok(ResidualOrder::Exact(d)),
        (None, Some(k)) => Ok(ResidualOrder::ExceedsCap(k)),
        (None, None) => Ok(ResidualOrder::ExceedsCap(u32::MAX)),
    }
}
