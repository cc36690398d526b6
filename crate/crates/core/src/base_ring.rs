//! The two arithmetic settings: A = Z (number field case) and A = F_q[t]
//! (function field case), with primes, norms and the level constants.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Pow;
use serde::{Deserialize, Serialize};

use crate::arith::{factor_u64, is_prime_u64, legendre_mod3, prime_divisors};
use crate::error::{Error, Result};
use crate::gf::GaloisField;
use crate::lattice::{Character, WElem, MAX_S};
use crate::poly::{factor_monic, is_irreducible, Poly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "lowercase")]
pub enum Setting {
    /// F = Q, A = Z
    Nf,
    /// F = F_q(t), A = F_q[t]
    Ff { q: u64 },
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Setting::Nf => write!(f, "NF"),
            Setting::Ff { q } => write!(f, "FF(q={q})"),
        }
    }
}

/// A prime of A: a rational prime, or a monic irreducible polynomial.
///
/// Only constructible through validating constructors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeElt(PrimeRepr);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum PrimeRepr {
    Int(u64),
    Poly(Poly),
}

impl PrimeElt {
    pub fn integer(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        Ok(PrimeElt(PrimeRepr::Int(p)))
    }

    pub fn polynomial(field: &GaloisField, p: Poly) -> Result<Self> {
        if !is_irreducible(field, &p)? {
            return Err(Error::NotIrreducible(p.to_string()));
        }
        Ok(PrimeElt(PrimeRepr::Poly(p)))
    }

    pub fn as_integer(&self) -> Option<u64> {
        match &self.0 {
            PrimeRepr::Int(p) => Some(*p),
            PrimeRepr::Poly(_) => None,
        }
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        match &self.0 {
            PrimeRepr::Int(_) => None,
            PrimeRepr::Poly(p) => Some(p),
        }
    }

    /// Degree in the function field case; 1 for rational primes.
    pub fn degree(&self) -> usize {
        match &self.0 {
            PrimeRepr::Int(_) => 1,
            PrimeRepr::Poly(p) => p.degree().unwrap(),
        }
    }
}

impl fmt::Display for PrimeElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            PrimeRepr::Int(p) => write!(f, "{p}"),
            PrimeRepr::Poly(p) => write!(f, "{p}"),
        }
    }
}

/// An element of A_+ (a positive integer or a monic polynomial).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RingElt {
    Int(BigInt),
    Poly(Poly),
}

impl fmt::Display for RingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingElt::Int(n) => write!(f, "{n}"),
            RingElt::Poly(p) => write!(f, "{p}"),
        }
    }
}

/// Level constants (k, b, a).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constants {
    /// weight of the discriminant: 12, or q^2 - 1
    pub k: BigInt,
    /// 3, or q + 1
    pub b: BigInt,
    /// torsion away from which the structure is determined: 6, or q(q^2 - 1)
    pub a: BigInt,
}

impl Setting {
    pub fn constants(&self) -> Constants {
        match *self {
            Setting::Nf => Constants { k: 12.into(), b: 3.into(), a: 6.into() },
            Setting::Ff { q } => {
                let q = BigInt::from(q);
                let k = &q * &q - 1;
                Constants { b: &q + 1, a: &q * &k, k }
            }
        }
    }

    /// |p|: p itself, or q^deg(p).
    pub fn norm(&self, p: &PrimeElt) -> BigInt {
        match (self, &p.0) {
            (Setting::Nf, PrimeRepr::Int(n)) => BigInt::from(*n),
            (Setting::Ff { q }, PrimeRepr::Poly(f)) => BigInt::from(*q).pow(f.degree().unwrap()),
            _ => panic!("prime {p} does not belong to setting {self}"),
        }
    }

    /// |μ_F|: 2 for Q, q - 1 for F_q(t).
    pub fn roots_of_unity(&self) -> u64 {
        match *self {
            Setting::Nf => 2,
            Setting::Ff { q } => q - 1,
        }
    }
}

/// Squarefree level N = p_1 ⋯ p_s in a fixed setting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Modulus {
    setting: Setting,
    field: Option<Arc<GaloisField>>,
    primes: Vec<PrimeElt>,
}

impl Modulus {
    fn build(setting: Setting, field: Option<Arc<GaloisField>>, primes: Vec<PrimeElt>) -> Result<Self> {
        if primes.is_empty() {
            return Err(Error::EmptyLevel);
        }
        if primes.len() > MAX_S {
            return Err(Error::Inconsistent(format!("at most {MAX_S} prime factors are supported")));
        }
        for (i, p) in primes.iter().enumerate() {
            if primes[..i].contains(p) {
                return Err(Error::RepeatedPrime(p.to_string()));
            }
        }
        Ok(Modulus { setting, field, primes })
    }

    /// Number field level from an explicit ordered prime list.
    pub fn nf(primes: &[u64]) -> Result<Self> {
        let ps = primes.iter().map(|&p| PrimeElt::integer(p)).collect::<Result<Vec<_>>>()?;
        Self::build(Setting::Nf, None, ps)
    }

    /// Number field level from a composite integer; primes ascending.
    pub fn nf_level(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::EmptyLevel);
        }
        let f = factor_u64(n);
        if f.iter().any(|&(_, e)| e > 1) {
            return Err(Error::NotSquarefree(n.to_string()));
        }
        Self::nf(&f.iter().map(|&(p, _)| p).collect::<Vec<_>>())
    }

    /// Function field level from an explicit ordered list of primes.
    pub fn ff(q: u64, primes: Vec<Poly>) -> Result<Self> {
        let field = Arc::new(GaloisField::new(q)?);
        let ps = primes.into_iter().map(|p| PrimeElt::polynomial(&field, p)).collect::<Result<Vec<_>>>()?;
        Self::build(Setting::Ff { q }, Some(field), ps)
    }

    /// Function field level from a monic polynomial; prime factors ascending.
    pub fn ff_level(q: u64, n: &Poly) -> Result<Self> {
        let field = GaloisField::new(q)?;
        let factors = factor_monic(&field, n)?;
        if factors.iter().any(|(_, e)| *e > 1) {
            return Err(Error::NotSquarefree(n.to_string()));
        }
        Self::ff(q, factors.into_iter().map(|(p, _)| p).collect())
    }

    /// Parse a level: an integer, a polynomial expression, or a comma list
    /// of primes (kept in the given order).
    pub fn parse(setting: Setting, text: &str) -> Result<Self> {
        let text = text.trim();
        let parse_int = |t: &str| -> Result<u64> {
            t.trim().parse::<u64>().map_err(|_| Error::Parse { input: t.into(), reason: "expected an integer".into() })
        };
        match setting {
            Setting::Nf if text.contains(',') => {
                let ps = text.split(',').map(parse_int).collect::<Result<Vec<_>>>()?;
                Self::nf(&ps)
            }
            Setting::Nf => Self::nf_level(parse_int(text)?),
            Setting::Ff { q } => {
                let field = GaloisField::new(q)?;
                if text.contains(',') {
                    let ps = text.split(',').map(|t| Poly::parse(t, &field)).collect::<Result<Vec<_>>>()?;
                    Self::ff(q, ps)
                } else {
                    Self::ff_level(q, &Poly::parse(text, &field)?)
                }
            }
        }
    }

    /// Parse a single prime element in this modulus' setting.
    pub fn parse_prime(&self, text: &str) -> Result<PrimeElt> {
        match (&self.setting, &self.field) {
            (Setting::Nf, _) => {
                let p = text
                    .trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse { input: text.into(), reason: "expected an integer".into() })?;
                PrimeElt::integer(p)
            }
            (Setting::Ff { .. }, Some(field)) => PrimeElt::polynomial(field, Poly::parse(text, field)?),
            _ => unreachable!(),
        }
    }

    pub fn setting(&self) -> Setting {
        self.setting
    }

    pub fn field(&self) -> Option<&GaloisField> {
        self.field.as_deref()
    }

    pub fn primes(&self) -> &[PrimeElt] {
        &self.primes
    }

    pub fn s(&self) -> usize {
        self.primes.len()
    }

    pub fn constants(&self) -> Constants {
        self.setting.constants()
    }

    pub fn norm(&self, p: &PrimeElt) -> BigInt {
        self.setting.norm(p)
    }

    /// |p_1|, …, |p_s|
    pub fn norms(&self) -> Vec<BigInt> {
        self.primes.iter().map(|p| self.norm(p)).collect()
    }

    /// |N| = ∏ |p_i|
    pub fn level_norm(&self) -> BigInt {
        self.norms().into_iter().product()
    }

    /// Prime divisors of a.
    pub fn a_primes(&self) -> std::collections::BTreeSet<u64> {
        prime_divisors(&self.constants().a)
    }

    /// N as an element of A_+.
    pub fn level(&self) -> RingElt {
        self.m_of_w(&WElem::all_ones(self.s()))
    }

    /// m(w) = ∏_{w_i = 1} p_i
    pub fn m_of_w(&self, w: &WElem) -> RingElt {
        assert_eq!(w.s(), self.s());
        let chosen = self.primes.iter().enumerate().filter(|(i, _)| w.bit(*i)).map(|(_, p)| p);
        match &self.field {
            None => RingElt::Int(chosen.map(|p| BigInt::from(p.as_integer().unwrap())).product()),
            Some(f) => RingElt::Poly(chosen.fold(Poly::one(), |acc, p| acc.mul(p.as_poly().unwrap(), f))),
        }
    }

    /// m(w) as a machine integer (number field case).
    pub fn m_of_w_u64(&self, w: &WElem) -> Option<u64> {
        if self.setting != Setting::Nf {
            return None;
        }
        self.primes.iter().enumerate().filter(|(i, _)| w.bit(*i)).try_fold(1u64, |acc, (_, p)| {
            acc.checked_mul(p.as_integer().unwrap())
        })
    }

    /// True iff p does not divide N.
    pub fn hecke_eligible_prime(&self, p: &PrimeElt) -> bool {
        !self.primes.contains(p)
    }

    /// e_H: Legendre symbols (p_i/3) in NF (requires 3 ∤ N), or the degree
    /// parities (-1)^{deg p_i} in FF.
    pub fn e_h(&self) -> Result<Character> {
        let signs = match self.setting {
            Setting::Nf => self
                .primes
                .iter()
                .map(|p| match legendre_mod3(p.as_integer().unwrap()) {
                    0 => Err(Error::EhUndefined),
                    x => Ok(x),
                })
                .collect::<Result<Vec<i8>>>()?,
            Setting::Ff { .. } => {
                self.primes.iter().map(|p| if p.degree() % 2 == 0 { 1 } else { -1 }).collect()
            }
        };
        Character::from_signs(&signs)
    }

    pub fn describe(&self) -> String {
        let ps: Vec<String> = self.primes.iter().map(|p| p.to_string()).collect();
        format!("{} N = {} = {}", self.setting, self.level(), ps.join(" · "))
    }
}

/// Squarefree levels 2 ≤ N ≤ `nmax` over Q, ascending.
pub fn nf_squarefree_levels(nmax: u64) -> Vec<Modulus> {
    (2..=nmax).filter_map(|n| Modulus::nf_level(n).ok()).collect()
}

/// Squarefree monic levels over F_q of degree 1..=`dmax`, each with its
/// primes ascending; listed by sorted prime tuple.
pub fn ff_squarefree_levels(q: u64, dmax: usize) -> Result<Vec<Modulus>> {
    let field = GaloisField::new(q)?;
    let mut irreducibles = Vec::new();
    for d in 1..=dmax {
        irreducibles.extend(crate::poly::monic_irreducibles(&field, d));
    }
    irreducibles.sort();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<Poly>, usize)> = vec![(0, Vec::new(), 0)];
    while let Some((start, chosen, deg)) = stack.pop() {
        if !chosen.is_empty() {
            out.push(chosen.clone());
        }
        for (j, f) in irreducibles.iter().enumerate().skip(start).rev() {
            let d = f.degree().unwrap();
            if deg + d <= dmax {
                let mut next = chosen.clone();
                next.push(f.clone());
                stack.push((j + 1, next, deg + d));
            }
        }
    }
    out.into_iter().map(|ps| Modulus::ff(q, ps)).collect()
}
