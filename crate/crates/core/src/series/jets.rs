//! Jet-scheme equations and blowup charts of polynomial hypersurfaces.

use crate::error::{Error, Result};

use super::field::Field;
use super::series::TruncatedSeries;

fn require_polynomial<K: Field>(f: &TruncatedSeries<K>) -> Result<()> {
    match (f.cap(), f.total_degree()) {
        (Some(c), Some(d)) if c < d => Err(Error::InvalidArgument("expected a polynomial".into())),
        (Some(c), None) if c == 0 => Err(Error::InvalidArgument("expected a polynomial".into())),
        _ => Ok(()),
    }
}

/// Jet variable for coordinate `var` at `t^j`, e.g. `x1_0`.
pub fn jet_variable(var: &str, j: u32) -> String {
    format!("{var}_{j}")
}

/// Coefficients of `t^0, ..., t^m` in `f(sum_j x_j t^j)`, as polynomials in
/// the jet variables (ordered by coordinate, then by `j`).
pub fn jet_equations<K: Field>(f: &TruncatedSeries<K>, m: u32) -> Result<Vec<TruncatedSeries<K>>> {
    require_polynomial(f)?;
    let jet_vars: Vec<String> = f
        .variables()
        .iter()
        .flat_map(|v| (0..=m).map(move |j| jet_variable(v, j)))
        .collect();
    let width = m as usize + 1;
    // a series in t is a vector of coefficients, each a polynomial in jet variables
    type TSeries<K> = Vec<TruncatedSeries<K>>;
    let zero = TruncatedSeries::<K>::zero(jet_vars.clone(), None);
    let mul = |a: &TSeries<K>, b: &TSeries<K>| -> Result<TSeries<K>> {
        let mut out = vec![zero.clone(); width];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(width - i) {
                if !y.is_zero() {
                    out[i + j] = out[i + j].add(&x.mul(y)?)?;
                }
            }
        }
        Ok(out)
    };
    let mut one = vec![zero.clone(); width];
    one[0] = TruncatedSeries::constant(jet_vars.clone(), K::one());
    let n = f.variables().len();
    let mut powers: Vec<Vec<TSeries<K>>> = Vec::with_capacity(n);
    for i in 0..n {
        let arc: TSeries<K> = (0..width)
            .map(|j| TruncatedSeries::variable(jet_vars.clone(), i * width + j))
            .collect();
        let top = f.terms().keys().map(|e| e[i]).max().unwrap_or(0);
        let mut p = vec![one.clone()];
        for _ in 0..top {
            let next = mul(p.last().expect("nonempty"), &arc)?;
            p.push(next);
        }
        powers.push(p);
    }
    let mut out = vec![zero.clone(); width];
    for (e, c) in f.terms() {
        let mut t = one.clone();
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                t = mul(&t, &powers[i][k as usize])?;
            }
        }
        for (o, x) in out.iter_mut().zip(&t) {
            *o = o.add(&x.scale(c))?;
        }
    }
    Ok(out)
}

/// Strict transform of `f = 0` in the chart where `x_chart` (1-based)
/// generates the exceptional divisor: `x_i -> x_chart * x_i` for
/// `i != chart`, then the largest power of `x_chart` is divided out.
pub fn blowup_chart_strict_transform<K: Field>(f: &TruncatedSeries<K>, chart: usize) -> Result<TruncatedSeries<K>> {
    require_polynomial(f)?;
    let n = f.variables().len();
    if chart == 0 || chart > n {
        return Err(Error::InvalidArgument(format!("chart {chart} outside 1..={n}")));
    }
    let c = chart - 1;
    let mult = f.order().ok_or(Error::ZeroSeries)?;
    if mult == 0 {
        return Err(Error::NotAtOrigin);
    }
    let terms = f.terms().iter().map(|(e, k)| {
        let mut e2 = e.clone();
        e2[c] = e.iter().sum::<u32>() - mult;
        (e2, k.clone())
    });
    TruncatedSeries::new(f.variables().to_vec(), terms, None)
}
