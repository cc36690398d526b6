//! Cusp combinatorics for squarefree level: the group W = (Z/2)^s labelling
//! the cusps, its sign characters, and integral divisors supported on cusps.
//!
//! Bit `i` of a [`WElem`] or [`Character`] refers to the prime `p_{i+1}`.
//! Text forms list the primes in order: `w = "10"` is the cusp `[1/p_1]`
//! when s = 2, `e = "-+"` is the character that is -1 at `p_1`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Upper bound on s for the dense 2^s representations.
pub const MAX_S: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WElem {
    bits: u32,
    s: u8,
}

fn cmp_bitstrings(a: u32, b: u32, s: u8) -> Ordering {
    for i in 0..s {
        let (x, y) = ((a >> i) & 1, (b >> i) & 1);
        if x != y {
            return x.cmp(&y);
        }
    }
    Ordering::Equal
}

impl Ord for WElem {
    /// Lexicographic on the bit string `w_1 w_2 … w_s`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.s.cmp(&other.s).then_with(|| cmp_bitstrings(self.bits, other.bits, self.s))
    }
}

impl PartialOrd for WElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl WElem {
    pub fn new(s: usize, bits: u32) -> Self {
        assert!(s <= MAX_S && bits < (1u32 << s), "bits out of range for s = {s}");
        WElem { bits, s: s as u8 }
    }

    pub fn zero(s: usize) -> Self {
        Self::new(s, 0)
    }

    /// The element (1, …, 1), i.e. the cusp at infinity `[1/N]`.
    pub fn all_ones(s: usize) -> Self {
        Self::new(s, (1u32 << s) - 1)
    }

    /// The element with a single 1 in position `i` (0-based).
    pub fn unit(s: usize, i: usize) -> Self {
        Self::new(s, 1 << i)
    }

    pub fn s(&self) -> usize {
        self.s as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn index(&self) -> usize {
        self.bits as usize
    }

    pub fn bit(&self, i: usize) -> bool {
        (self.bits >> i) & 1 == 1
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Group law of W.
    pub fn add(self, other: WElem) -> WElem {
        assert_eq!(self.s, other.s);
        WElem { bits: self.bits ^ other.bits, s: self.s }
    }

    /// All of W, by index.
    pub fn all(s: usize) -> impl Iterator<Item = WElem> {
        (0..1u32 << s).map(move |b| WElem::new(s, b))
    }

    /// All of W in lexicographic bit-string order.
    pub fn all_sorted(s: usize) -> Vec<WElem> {
        let mut v: Vec<WElem> = Self::all(s).collect();
        v.sort();
        v
    }
}

impl fmt::Display for WElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.s() {
            write!(f, "{}", if self.bit(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl FromStr for WElem {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        let parse_err = |reason: &str| Error::Parse { input: text.into(), reason: reason.into() };
        if text.len() > MAX_S {
            return Err(parse_err("too many positions"));
        }
        let mut bits = 0;
        for (i, ch) in text.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return Err(parse_err("expected only '0' and '1'")),
            }
        }
        Ok(WElem::new(text.len(), bits))
    }
}

/// A sign character e ∈ {±1}^s of W.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Character {
    /// bit i set iff e_{i+1} = -1
    neg: u32,
    s: u8,
}

impl Ord for Character {
    /// Lexicographic on the sign string with '+' before '-'.
    fn cmp(&self, other: &Self) -> Ordering {
        self.s.cmp(&other.s).then_with(|| cmp_bitstrings(self.neg, other.neg, self.s))
    }
}

impl PartialOrd for Character {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Character {
    pub fn from_neg_bits(s: usize, neg: u32) -> Self {
        assert!(s <= MAX_S && neg < (1u32 << s));
        Character { neg, s: s as u8 }
    }

    pub fn trivial(s: usize) -> Self {
        Self::from_neg_bits(s, 0)
    }

    /// e^{(i)}: -1 exactly at position `i` (0-based).
    pub fn single(s: usize, i: usize) -> Self {
        Self::from_neg_bits(s, 1 << i)
    }

    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        let mut neg = 0;
        for (i, &x) in signs.iter().enumerate() {
            match x {
                1 => {}
                -1 => neg |= 1 << i,
                _ => {
                    return Err(Error::Parse { input: format!("{signs:?}"), reason: "signs must be ±1".into() })
                }
            }
        }
        Ok(Self::from_neg_bits(signs.len(), neg))
    }

    pub fn s(&self) -> usize {
        self.s as usize
    }

    pub fn neg_bits(&self) -> u32 {
        self.neg
    }

    pub fn sign(&self, i: usize) -> i8 {
        if (self.neg >> i) & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn signs(&self) -> Vec<i8> {
        (0..self.s()).map(|i| self.sign(i)).collect()
    }

    /// |e^{-1}(-1)|
    pub fn num_minus(&self) -> u32 {
        self.neg.count_ones()
    }

    pub fn is_trivial(&self) -> bool {
        self.neg == 0
    }

    /// If this is e^{(i)} for some i, return that 0-based i.
    pub fn single_index(&self) -> Option<usize> {
        (self.num_minus() == 1).then(|| self.neg.trailing_zeros() as usize)
    }

    /// ⟨e, w⟩ = ∏_{i : w_i = 1} e_i
    pub fn pairing(&self, w: &WElem) -> Result<i8> {
        if self.s != w.s {
            return Err(Error::LengthMismatch { expected: self.s(), got: w.s() });
        }
        Ok(if (self.neg & w.bits).count_ones().is_multiple_of(2) { 1 } else { -1 })
    }

    pub(crate) fn pair(&self, w: &WElem) -> i8 {
        self.pairing(w).expect("matching s")
    }

    /// All characters in lexicographic sign-string order.
    pub fn all(s: usize) -> Vec<Character> {
        let mut v: Vec<Character> = (0..1u32 << s).map(|n| Character::from_neg_bits(s, n)).collect();
        v.sort();
        v
    }

    /// All nontrivial characters, lexicographic order.
    pub fn nontrivial(s: usize) -> Vec<Character> {
        Self::all(s).into_iter().filter(|e| !e.is_trivial()).collect()
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.s() {
            write!(f, "{}", if self.sign(i) < 0 { '-' } else { '+' })?;
        }
        Ok(())
    }
}

impl FromStr for Character {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        let signs: Vec<i8> = text
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                _ => Err(Error::Parse { input: text.into(), reason: "expected only '+' and '-'".into() }),
            })
            .collect::<Result<_>>()?;
        if signs.len() > MAX_S {
            return Err(Error::Parse { input: text.into(), reason: "too many positions".into() });
        }
        Character::from_signs(&signs)
    }
}

impl Serialize for Character {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Character {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(D::Error::custom)
    }
}

impl Serialize for WElem {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for WElem {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// An element of ⊕_{w ∈ W} R·[w], coefficients indexed by `WElem::index`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CuspDivisor<T> {
    s: usize,
    coeffs: Vec<T>,
}

impl<T: Clone + Num> CuspDivisor<T> {
    pub fn zero(s: usize) -> Self {
        assert!(s <= MAX_S);
        CuspDivisor { s, coeffs: vec![T::zero(); 1 << s] }
    }

    pub fn from_coeffs(s: usize, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != 1 << s {
            return Err(Error::LengthMismatch { expected: 1 << s, got: coeffs.len() });
        }
        Ok(CuspDivisor { s, coeffs })
    }

    /// The single cusp [w].
    pub fn cusp(w: WElem) -> Self {
        let mut d = Self::zero(w.s());
        d.coeffs[w.index()] = T::one();
        d
    }

    /// D^e = Σ_w ⟨e, w⟩ [w]
    pub fn eigen(e: &Character) -> Self {
        let s = e.s();
        let coeffs = WElem::all(s)
            .map(|w| if e.pair(&w) > 0 { T::one() } else { T::zero() - T::one() })
            .collect();
        CuspDivisor { s, coeffs }
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, w: WElem) -> &T {
        &self.coeffs[w.index()]
    }

    pub fn set(&mut self, w: WElem, value: T) {
        self.coeffs[w.index()] = value;
    }

    pub fn degree(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, c| acc + c.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.s, other.s, "divisors over different s");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect();
        CuspDivisor { s: self.s, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() - b.clone()).collect();
        CuspDivisor { s: self.s, coeffs }
    }

    pub fn scale(&self, k: &T) -> Self {
        CuspDivisor { s: self.s, coeffs: self.coeffs.iter().map(|c| c.clone() * k.clone()).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&(T::zero() - T::one()))
    }

    /// Atkin–Lehner involution W_w: [w'] ↦ [w + w'].
    pub fn atkin_lehner(&self, w: WElem) -> Self {
        assert_eq!(w.s(), self.s);
        let mut out = vec![T::zero(); self.coeffs.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i ^ w.index()] = c.clone();
        }
        CuspDivisor { s: self.s, coeffs: out }
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> CuspDivisor<U> {
        CuspDivisor { s: self.s, coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Nonzero coefficients in lexicographic cusp order.
    pub fn support(&self) -> Vec<(WElem, T)> {
        WElem::all_sorted(self.s)
            .into_iter()
            .filter(|w| !self.coeffs[w.index()].is_zero())
            .map(|w| (w, self.coeffs[w.index()].clone()))
            .collect()
    }
}

impl CuspDivisor<BigInt> {
    pub fn to_rational(&self) -> CuspDivisor<BigRational> {
        self.map(|c| BigRational::from_integer(c.clone()))
    }
}

impl<T: Clone + Num + fmt::Display> fmt::Display for CuspDivisor<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.support();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in terms.iter().enumerate() {
            let text = c.to_string();
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mag != "1" {
                write!(f, "{mag}")?;
            }
            write!(f, "[{w}]")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct DivisorJson {
    s: usize,
    coeffs: BTreeMap<String, crate::serde_int::JsonInt>,
}

impl Serialize for CuspDivisor<BigInt> {
    /// `{"s": s, "coeffs": {"bitstring": int, …}}`, listing every cusp.
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = WElem::all(self.s)
            .map(|w| (w.to_string(), crate::serde_int::JsonInt(self.coeffs[w.index()].clone())))
            .collect();
        DivisorJson { s: self.s, coeffs }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for CuspDivisor<BigInt> {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = DivisorJson::deserialize(de)?;
        if raw.s > MAX_S {
            return Err(D::Error::custom("s too large"));
        }
        let mut d = CuspDivisor::<BigInt>::zero(raw.s);
        for (k, v) in raw.coeffs {
            let w: WElem = k.parse().map_err(D::Error::custom)?;
            if w.s() != raw.s {
                return Err(D::Error::custom(format!("cusp label {k} has wrong length")));
            }
            d.coeffs[w.index()] = v.0;
        }
        Ok(d)
    }
}

/// The e-eigencomponent (1/2^s) Σ_w ⟨e,w⟩ W_w(D), over Z[1/2].
///
/// `inverted` is the set of primes inverted in the coefficient ring; it
/// must contain 2.
pub fn e_part(
    d: &CuspDivisor<BigRational>,
    e: &Character,
    inverted: &std::collections::BTreeSet<u64>,
) -> Result<CuspDivisor<BigRational>> {
    if !inverted.contains(&2) {
        return Err(Error::TwoNotInverted);
    }
    if d.s() != e.s() {
        return Err(Error::LengthMismatch { expected: e.s(), got: d.s() });
    }
    let s = d.s();
    let mut acc = CuspDivisor::<BigRational>::zero(s);
    for w in WElem::all(s) {
        let sign = BigRational::from_integer(BigInt::from(e.pair(&w)));
        acc = acc.add(&d.atkin_lehner(w).scale(&sign));
    }
    let scale = BigRational::new(BigInt::one(), BigInt::from(1u64 << s));
    Ok(acc.scale(&scale))
}
