//! Truncated Laurent series in q with exact integer coefficients.
//!
//! A series is stored as q^v · (c_0 + c_1 q + … + c_{n-1} q^{n-1} + O(q^n))
//! with c_0 ≠ 0, so `n` is the relative precision. Products and quotients
//! keep the smaller relative precision of their inputs.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries<T> {
    offset: i64,
    coeffs: Vec<T>,
}

impl<T: Scalar> QSeries<T> {
    /// Builds q^offset · Σ coeffs[i] q^i, shifting past leading zeros. Fails
    /// if every known coefficient is zero: the leading term is then invisible
    /// at this precision.
    pub fn new(offset: i64, coeffs: Vec<T>) -> Result<Self> {
        let lead = coeffs.iter().position(|c| !c.is_zero()).ok_or_else(|| {
            Error::TruncationInsufficient(format!("no nonzero coefficient below q^{}", offset + coeffs.len() as i64))
        })?;
        Ok(QSeries { offset: offset + lead as i64, coeffs: coeffs[lead..].to_vec() })
    }

    /// q^offset + O(q^(offset + precision))
    pub fn monomial(offset: i64, precision: usize) -> Self {
        assert!(precision > 0);
        let mut coeffs = vec![T::zero(); precision];
        coeffs[0] = T::one();
        QSeries { offset, coeffs }
    }

    pub fn one(precision: usize) -> Self {
        Self::monomial(0, precision)
    }

    /// Leading exponent v.
    pub fn valuation(&self) -> i64 {
        self.offset
    }

    pub fn leading_coefficient(&self) -> &T {
        &self.coeffs[0]
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    /// Exponent of the error term.
    pub fn absolute_precision(&self) -> i64 {
        self.offset + self.coeffs.len() as i64
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of q^n, or `None` past the precision.
    pub fn coeff(&self, n: i64) -> Option<T> {
        if n < self.offset {
            return Some(T::zero());
        }
        self.coeffs.get((n - self.offset) as usize).cloned()
    }

    pub fn truncate(&self, precision: usize) -> Self {
        let n = precision.min(self.coeffs.len());
        assert!(n > 0);
        QSeries { offset: self.offset, coeffs: self.coeffs[..n].to_vec() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut out = vec![T::zero(); n];
        // dilated series are mostly zeros; skip them
        for (i, a) in self.coeffs[..n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        QSeries { offset: self.offset + other.offset, coeffs: out }
    }

    /// Multiplicative inverse; the leading coefficient must be ±1.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if !c0.abs().is_one() {
            return Err(Error::NonUnitLeading);
        }
        let n = self.coeffs.len();
        let mut out: Vec<T> = Vec::with_capacity(n);
        out.push(c0.clone());
        for k in 1..n {
            let mut acc = T::zero();
            for j in 1..=k {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    acc = acc + a.clone() * out[k - j].clone();
                }
            }
            // c0 = ±1 is its own inverse
            out.push(-(acc * c0.clone()));
        }
        Ok(QSeries { offset: -self.offset, coeffs: out })
    }

    /// Substitution q → q^m.
    pub fn dilate(&self, m: usize) -> Self {
        assert!(m > 0);
        let mut coeffs = vec![T::zero(); self.coeffs.len() * m];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * m] = c.clone();
        }
        QSeries { offset: self.offset * m as i64, coeffs }
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one(self.coeffs.len());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }
}

/// ∏_{n ≥ 1} (1 - q^n) to relative precision `precision`, via the
/// pentagonal number theorem.
pub fn euler_product<T: Scalar>(precision: usize) -> QSeries<T> {
    assert!(precision > 0);
    let mut coeffs = vec![T::zero(); precision];
    let mut k: i64 = 0;
    loop {
        let sign = if k % 2 == 0 { T::one() } else { -T::one() };
        let mut any = false;
        for g in [k * (3 * k - 1) / 2, k * (3 * k + 1) / 2] {
            if (g as usize) < precision {
                coeffs[g as usize] = sign.clone();
                any = true;
            }
        }
        if !any {
            break;
        }
        k += 1;
    }
    QSeries { offset: 0, coeffs }
}

/// Δ = q ∏_{n ≥ 1} (1 - q^n)^24 to relative precision `precision`.
pub fn delta_qexp<T: Scalar>(precision: usize) -> QSeries<T> {
    let mut d = euler_product::<T>(precision).pow(24).expect("positive power");
    d.offset = 1;
    d
}

impl<T: Scalar> fmt::Display for QSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.offset + i as i64;
            let (neg, mag) = if c.is_negative() { (true, c.abs()) } else { (false, c.clone()) };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                _ => {}
            }
            first = false;
            let unit = mag.is_one();
            match e {
                0 => write!(f, "{mag}")?,
                1 if unit => write!(f, "q")?,
                1 => write!(f, "{mag}q")?,
                _ if unit => write!(f, "q^{e}")?,
                _ => write!(f, "{mag}q^{e}")?,
            }
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "O(q^{})", self.absolute_precision())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    /// ∏ (1 - q^n)^24 by repeated multiplication of binomials.
    fn naive_delta(n: usize) -> Vec<i64> {
        let mut c = vec![0i64; n];
        c[0] = 1;
        for m in 1..n {
            for _ in 0..24 {
                for i in (m..n).rev() {
                    c[i] -= c[i - m];
                }
            }
        }
        c
    }

    #[test]
    fn delta_matches_naive_product() {
        let d = delta_qexp::<i64>(30);
        assert_eq!(d.valuation(), 1);
        assert_eq!(d.coeffs(), &naive_delta(30)[..]);
        assert_eq!(d.coeff(1), Some(1));
        assert_eq!(d.coeff(2), Some(-24));
        assert_eq!(d.coeff(3), Some(252));
        assert_eq!(d.coeff(31), None);
    }

    #[test]
    fn ramanujan_tau_values() {
        let d = delta_qexp::<BigInt>(12);
        let tau: Vec<i64> = vec![1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944];
        let want: Vec<BigInt> = tau.into_iter().map(BigInt::from).collect();
        assert_eq!(d.coeffs(), &want[..]);
    }

    #[test]
    fn dilation_shifts_valuation() {
        let d = delta_qexp::<i64>(10);
        let d7 = d.dilate(7);
        assert_eq!(d7.valuation(), 7);
        assert_eq!(d7.precision(), 70);
        assert_eq!(d7.coeff(14), Some(-24));
        assert_eq!(d7.coeff(13), Some(0));
    }

    #[test]
    fn inverse_round_trip() {
        let d = delta_qexp::<i64>(20);
        let inv = d.inverse().unwrap();
        assert_eq!(inv.valuation(), -1);
        assert_eq!(d.mul(&inv), QSeries::one(20));
        let bad = QSeries::new(0, vec![2i64, 1]).unwrap();
        assert_eq!(bad.inverse(), Err(Error::NonUnitLeading));
    }

    #[test]
    fn leading_zeros_and_insufficient_truncation() {
        let s = QSeries::new(-2, vec![0i64, 0, 3, 1]).unwrap();
        assert_eq!((s.valuation(), s.precision()), (0, 2));
        assert!(matches!(QSeries::<i64>::new(0, vec![0, 0]), Err(Error::TruncationInsufficient(_))));
    }

    #[test]
    fn display() {
        let d = delta_qexp::<i64>(3);
        assert_eq!(d.to_string(), "q - 24q^2 + 252q^3 + O(q^4)");
    }

    fn series() -> impl Strategy<Value = QSeries<i64>> {
        (-3i64..3, prop::collection::vec(-5i64..5, 1..8), prop::bool::ANY).prop_map(|(v, mut c, neg)| {
            c[0] = if neg { -1 } else { 1 };
            QSeries::new(v, c).unwrap()
        })
    }

    proptest! {
        #[test]
        fn multiplication_is_associative(a in series(), b in series(), c in series()) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn multiplication_commutes(a in series(), b in series()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
        }

        #[test]
        fn dilation_is_multiplicative(a in series(), b in series(), m in 1usize..4) {
            prop_assert_eq!(a.mul(&b).dilate(m), a.dilate(m).mul(&b.dilate(m)));
        }

        #[test]
        fn negative_powers_invert(a in series(), n in 0i64..4) {
            let p = a.pow(n).unwrap().mul(&a.pow(-n).unwrap());
            prop_assert_eq!(p, QSeries::one(a.precision()));
        }
    }
}
