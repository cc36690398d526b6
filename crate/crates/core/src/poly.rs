//! Dense univariate polynomials in `t` over a small finite field.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf::GaloisField;

/// Coefficients lowest-degree first, with no trailing zeros.
///
/// Coefficients are field element indices as defined by [`GaloisField`];
/// a `Poly` only has meaning together with its field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<u32>,
}

impl Ord for Poly {
    /// Degree first, then coefficients from the top down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    pub fn t() -> Self {
        Poly { coeffs: vec![0, 1] }
    }

    pub fn constant(c: u32) -> Self {
        Poly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has no degree.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    /// Monic polynomial of degree `d` whose lower coefficients are the
    /// base-q digits of `index`.
    pub fn monic_from_index(field: &GaloisField, d: usize, mut index: u64) -> Self {
        let q = field.q() as u64;
        let mut c = Vec::with_capacity(d + 1);
        for _ in 0..d {
            c.push((index % q) as u32);
            index /= q;
        }
        c.push(1);
        Poly { coeffs: c }
    }

    pub fn add(&self, other: &Poly, f: &GaloisField) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                f.add(a, b)
            })
            .collect();
        Poly::new(c)
    }

    pub fn neg(&self, f: &GaloisField) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn sub(&self, other: &Poly, f: &GaloisField) -> Poly {
        self.add(&other.neg(f), f)
    }

    pub fn mul(&self, other: &Poly, f: &GaloisField) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::new(c)
    }

    pub fn pow(&self, e: u32, f: &GaloisField) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(self, f))
    }

    /// Quotient and remainder; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &Poly, f: &GaloisField) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = f.inv(*divisor.coeffs.last().unwrap());
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![0u32; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = f.mul(rem[k], lead_inv);
            if c == 0 {
                continue;
            }
            quot[k - dd] = c;
            for (i, &g) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + i;
                rem[idx] = f.sub(rem[idx], f.mul(c, g));
            }
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Parse a polynomial expression in `t` over `field`.
    ///
    /// Accepts sums, differences, juxtaposed or `*` products, parentheses,
    /// and `^` powers, e.g. `t^3+t+1`, `t(t+1)`, `(t^2+1)^2`, `2t+1`.
    /// Integer literals denote field element indices and must be `< q`.
    pub fn parse(input: &str, field: &GaloisField) -> Result<Poly> {
        let tokens: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = PolyParser { s: &tokens, pos: 0, field, input };
        let poly = p.expr()?;
        if p.pos != tokens.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(poly)
    }
}

impl fmt::Display for Poly {
    /// Field element indices as coefficients, highest degree first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.coeffs;
        if c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &a) in c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{a}t")?,
                (_, 1) => write!(f, "t^{i}")?,
                _ => write!(f, "{a}t^{i}")?,
            }
        }
        Ok(())
    }
}

struct PolyParser<'a> {
    s: &'a [char],
    pos: usize,
    field: &'a GaloisField,
    input: &'a str,
}

impl PolyParser<'_> {
    fn err(&self, reason: &str) -> Error {
        Error::Parse { input: self.input.to_string(), reason: format!("{reason} at position {}", self.pos) }
    }

    fn peek(&self) -> Option<char> {
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let f = self.field;
        let mut negate = false;
        match self.peek() {
            Some('+') => self.pos += 1,
            Some('-') => {
                self.pos += 1;
                negate = true;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg(f);
        }
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t, f);
                }
                Some('-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t, f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    let x = self.factor()?;
                    acc = acc.mul(&x, self.field);
                }
                Some(c) if c == 't' || c == '(' || c.is_ascii_digit() => {
                    let x = self.factor()?;
                    acc = acc.mul(&x, self.field);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let text: String = self.s[start..self.pos].iter().collect();
        text.parse().map_err(|_| self.err("number out of range"))
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = match self.peek() {
            Some('t') => {
                self.pos += 1;
                Poly::t()
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                inner
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                if n >= self.field.q() as u64 {
                    return Err(self.err("coefficient must be a field element index below q"));
                }
                Poly::constant(n as u32)
            }
            _ => return Err(self.err("expected 't', a coefficient or '('")),
        };
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.number()?;
            if e > 64 {
                return Err(self.err("exponent too large"));
            }
            return Ok(base.pow(e as u32, self.field));
        }
        Ok(base)
    }
}

/// True iff `poly` has no monic factor of degree in `1..=deg/2`.
///
/// Rejects non-monic input and constants.
pub fn is_irreducible(field: &GaloisField, poly: &Poly) -> Result<bool> {
    if !poly.is_monic() {
        return Err(Error::NotMonic(poly.to_string()));
    }
    let d = poly.degree().unwrap();
    if d == 0 {
        return Ok(false);
    }
    Ok(smallest_monic_divisor(field, poly, d / 2).is_none())
}

/// Smallest (by degree, then index) monic divisor of degree in `1..=max_deg`.
fn smallest_monic_divisor(field: &GaloisField, poly: &Poly, max_deg: usize) -> Option<Poly> {
    let q = field.q() as u64;
    for d in 1..=max_deg {
        for idx in 0..q.pow(d as u32) {
            let g = Poly::monic_from_index(field, d, idx);
            if poly.div_rem(&g, field).1.is_zero() {
                return Some(g);
            }
        }
    }
    None
}

/// Factor a monic polynomial into monic irreducibles with multiplicities,
/// by trial division. Factors are returned in ascending [`Poly`] order.
pub fn factor_monic(field: &GaloisField, poly: &Poly) -> Result<Vec<(Poly, u32)>> {
    if !poly.is_monic() {
        return Err(Error::NotMonic(poly.to_string()));
    }
    let mut rest = poly.clone();
    let mut out: Vec<(Poly, u32)> = Vec::new();
    while rest.degree().unwrap() > 0 {
        let d = rest.degree().unwrap();
        let g = smallest_monic_divisor(field, &rest, d / 2).unwrap_or_else(|| rest.clone());
        let mut mult = 0;
        loop {
            let (quot, rem) = rest.div_rem(&g, field);
            if !rem.is_zero() {
                break;
            }
            rest = quot;
            mult += 1;
        }
        out.push((g, mult));
    }
    out.sort();
    Ok(out)
}

/// All monic irreducible polynomials of degree exactly `d`, ascending.
pub fn monic_irreducibles(field: &GaloisField, d: usize) -> Vec<Poly> {
    let q = field.q() as u64;
    (0..q.pow(d as u32))
        .map(|idx| Poly::monic_from_index(field, d, idx))
        .filter(|p| is_irreducible(field, p).unwrap())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> GaloisField {
        GaloisField::new(q).unwrap()
    }

    #[test]
    fn irreducibility_examples() {
        let f2 = gf(2);
        assert!(is_irreducible(&f2, &Poly::parse("t^2+t+1", &f2).unwrap()).unwrap());
        assert!(!is_irreducible(&f2, &Poly::parse("t^2+1", &f2).unwrap()).unwrap());
        let f3 = gf(3);
        assert!(is_irreducible(&f3, &Poly::t()).unwrap());
        assert!(matches!(
            is_irreducible(&f3, &Poly::parse("2t+1", &f3).unwrap()),
            Err(Error::NotMonic(_))
        ));
    }

    #[test]
    fn counts_match_necklace_formula() {
        // number of monic irreducibles of degree d over GF(q): (1/d) Σ_{k|d} μ(k) q^{d/k}
        let expected = |q: u64, d: u64| -> usize {
            let mu = |n: u64| -> i64 {
                let f = crate::arith::factor_u64(n);
                if f.iter().any(|&(_, e)| e > 1) {
                    0
                } else if f.len().is_multiple_of(2) {
                    1
                } else {
                    -1
                }
            };
            let s: i64 = (1..=d).filter(|k| d.is_multiple_of(*k)).map(|k| mu(k) * (q.pow((d / k) as u32) as i64)).sum();
            (s / d as i64) as usize
        };
        for q in [2u64, 3, 4, 5] {
            let f = gf(q);
            for d in 1..=4u64 {
                assert_eq!(monic_irreducibles(&f, d as usize).len(), expected(q, d), "q={q} d={d}");
            }
        }
    }

    #[test]
    fn parse_and_display() {
        let f = gf(3);
        let p = Poly::parse("t(t^2+1)", &f).unwrap();
        assert_eq!(p.to_string(), "t^3+t");
        let p = Poly::parse("(t+1)^2", &f).unwrap();
        assert_eq!(p.to_string(), "t^2+2t+1");
        let p = Poly::parse("-t+2", &f).unwrap();
        assert_eq!(p.to_string(), "2t+2");
        assert!(Poly::parse("3t", &f).is_err());
        assert!(Poly::parse("t+", &f).is_err());
    }

    #[test]
    fn factorization() {
        let f = gf(2);
        let p = Poly::parse("t^3+t", &f).unwrap(); // t(t+1)^2
        let fac = factor_monic(&f, &p).unwrap();
        assert_eq!(fac, vec![(Poly::t(), 1), (Poly::parse("t+1", &f).unwrap(), 2)]);
    }

    #[test]
    fn gf4_irreducible_quadratics() {
        let f = gf(4);
        // 6 monic irreducible quadratics over GF(4)
        assert_eq!(monic_irreducibles(&f, 2).len(), 6);
    }
}
