//! Text grammar for polynomials and Laurent series with rational
//! coefficients: `+ - * / ^`, parentheses, identifiers such as `x1` or `t`.
//!
//! Negative exponents are accepted on bare identifiers only.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

type Monomial = BTreeMap<String, i64>;
type Terms = BTreeMap<Monomial, BigRational>;

/// A parsed expression in expanded form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedPolynomial {
    /// Variable names in natural order (`x2` before `x10`).
    pub variables: Vec<String>,
    /// Exponent vectors aligned with `variables`.
    pub terms: BTreeMap<Vec<i64>, BigRational>,
}

impl ParsedPolynomial {
    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Re-indexes the terms against a superset of the variables.
    pub fn align(&self, variables: &[String]) -> Result<BTreeMap<Vec<i64>, BigRational>> {
        let mut pos = Vec::with_capacity(self.variables.len());
        for v in &self.variables {
            let p = variables
                .iter()
                .position(|w| w == v)
                .ok_or_else(|| Error::VariableMismatch(v.clone()))?;
            pos.push(p);
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut out = vec![0; variables.len()];
                for (i, k) in e.iter().enumerate() {
                    out[pos[i]] = *k;
                }
                (out, c.clone())
            })
            .collect())
    }
}

/// Compares identifiers by alphabetic prefix, then numeric suffix.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn split(s: &str) -> (&str, Option<u128>) {
        let cut = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        (&s[..cut], s[cut..].parse().ok())
    }
    let (pa, na) = split(a);
    let (pb, nb) = split(b);
    pa.cmp(pb).then(na.cmp(&nb)).then(a.cmp(b))
}

pub fn parse_polynomial(input: &str) -> Result<ParsedPolynomial> {
    let mut p = Parser {
        chars: input.chars().collect(),
        pos: 0,
    };
    p.skip_ws();
    if p.peek().is_none() {
        return Err(p.err("empty expression"));
    }
    let terms = p.expr()?;
    p.skip_ws();
    if p.peek().is_some() {
        return Err(p.err("unexpected character"));
    }
    let mut variables: Vec<String> = terms.keys().flat_map(|m| m.keys().cloned()).collect();
    variables.sort_by(|a, b| natural_cmp(a, b));
    variables.dedup();
    let terms = terms
        .into_iter()
        .map(|(m, c)| {
            let e = variables.iter().map(|v| m.get(v).copied().unwrap_or(0)).collect();
            (e, c)
        })
        .collect();
    Ok(ParsedPolynomial { variables, terms })
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

fn add_into(acc: &mut Terms, m: Monomial, c: BigRational) {
    let entry = acc.entry(m);
    match entry {
        std::collections::btree_map::Entry::Vacant(e) => {
            if !c.is_zero() {
                e.insert(c);
            }
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

fn mul(a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let mut m = ma.clone();
            for (v, k) in mb {
                let e = m.entry(v.clone()).or_insert(0);
                *e += k;
                if *e == 0 {
                    m.remove(v);
                }
            }
            add_into(&mut out, m, ca * cb);
        }
    }
    out
}

fn constant(c: BigRational) -> Terms {
    let mut t = Terms::new();
    add_into(&mut t, Monomial::new(), c);
    t
}

impl Parser {
    fn err(&self, message: &str) -> Error {
        Error::Parse {
            column: self.pos + 1,
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Terms> {
        let mut acc = Terms::new();
        let mut sign = if self.eat('-') {
            -1
        } else {
            self.eat('+');
            1
        };
        loop {
            let t = self.term()?;
            for (m, c) in t {
                add_into(&mut acc, m, if sign < 0 { -c } else { c });
            }
            if self.eat('+') {
                sign = 1;
            } else if self.eat('-') {
                sign = -1;
            } else {
                return Ok(acc);
            }
            if self.eat('-') {
                sign = -sign;
            }
        }
    }

    fn term(&mut self) -> Result<Terms> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                let rhs = self.power()?;
                acc = mul(&acc, &rhs);
            } else if self.eat('/') {
                self.skip_ws();
                let start = self.pos;
                let d = self.integer()?;
                if d.is_zero() {
                    self.pos = start;
                    return Err(self.err("division by zero"));
                }
                let inv = BigRational::new(BigInt::one(), d);
                acc = acc.into_iter().map(|(m, c)| (m, c * &inv)).collect();
            } else {
                self.skip_ws();
                // implicit product: `3x1`, `2(x+y)`
                match self.peek() {
                    Some(c) if c.is_ascii_alphabetic() || c == '(' => {
                        let rhs = self.power()?;
                        acc = mul(&acc, &rhs);
                    }
                    _ => return Ok(acc),
                }
            }
        }
    }

    fn power(&mut self) -> Result<Terms> {
        self.skip_ws();
        let start = self.pos;
        let (base, ident) = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        self.skip_ws();
        let neg = self.eat('-');
        self.skip_ws();
        let at = self.pos;
        let k = self.integer()?;
        let k = k.to_i64().ok_or_else(|| {
            self.pos = at;
            self.err("exponent too large")
        })?;
        if neg {
            let Some(name) = ident else {
                self.pos = start;
                return Err(self.err("negative exponent on a non-variable"));
            };
            let mut m = Monomial::new();
            if k != 0 {
                m.insert(name, -k);
            }
            let mut t = Terms::new();
            t.insert(m, BigRational::one());
            return Ok(t);
        }
        let mut out = constant(BigRational::one());
        for _ in 0..k {
            out = mul(&out, &base);
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<(Terms, Option<String>)> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok((inner, None))
            }
            Some(c) if c.is_ascii_digit() => Ok((constant(BigRational::from_integer(self.integer()?)), None)),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                let mut m = Monomial::new();
                m.insert(name.clone(), 1);
                let mut t = Terms::new();
                t.insert(m, BigRational::one());
                Ok((t, Some(name)))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        let n: BigInt = s.parse().expect("digits");
        debug_assert!(!n.is_negative());
        Ok(n)
    }
}
