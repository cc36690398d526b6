//! Finite abelian groups in invariant-factor form, optionally localized by
//! inverting a finite set of primes.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{ell_part, strip_primes};
use crate::matrix::Matrix;
use crate::snf::smith_normal_form;

/// Invariant factors n_1 | n_2 | … (each ≥ 2) of ⊕ Z/n_i for arbitrary
/// positive cyclic orders, via Smith form of the diagonal matrix.
pub fn invariant_factors(orders: &[BigInt]) -> Vec<BigInt> {
    assert!(orders.iter().all(|n| n.is_positive()), "cyclic orders must be positive");
    let nontrivial: Vec<BigInt> = orders.iter().filter(|n| !n.is_one()).cloned().collect();
    if nontrivial.is_empty() {
        return Vec::new();
    }
    smith_normal_form(&Matrix::diagonal(&nontrivial)).invariants.into_iter().filter(|d| !d.is_one()).collect()
}

/// ⊕ Z/n_i ⊗ Z[1/S].
///
/// The integral invariant factors are kept as-is; the localized structure
/// is computed on demand by [`reduced`](Self::reduced). Isomorphism is
/// decided on reduced forms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LocalizedAbelianGroup {
    factors: Vec<BigInt>,
    inverted: BTreeSet<u64>,
}

impl LocalizedAbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn from_cyclic_orders(orders: &[BigInt], inverted: BTreeSet<u64>) -> Self {
        LocalizedAbelianGroup { factors: invariant_factors(orders), inverted }
    }

    pub fn integral(orders: &[BigInt]) -> Self {
        Self::from_cyclic_orders(orders, BTreeSet::new())
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn inverted(&self) -> &BTreeSet<u64> {
        &self.inverted
    }

    /// Same integral data, additionally inverting `primes`.
    pub fn localize(&self, primes: impl IntoIterator<Item = u64>) -> Self {
        let mut inverted = self.inverted.clone();
        inverted.extend(primes);
        LocalizedAbelianGroup { factors: self.factors.clone(), inverted }
    }

    /// Invariant factors after removing every inverted prime.
    pub fn reduced(&self) -> Vec<BigInt> {
        let stripped: Vec<BigInt> = self.factors.iter().map(|n| strip_primes(n, &self.inverted)).collect();
        invariant_factors(&stripped)
    }

    pub fn order(&self) -> BigInt {
        self.factors.iter().product()
    }

    pub fn reduced_order(&self) -> BigInt {
        self.reduced().iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.reduced().is_empty()
    }

    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self.reduced() == other.reduced()
    }

    /// The ℓ-primary component, as cyclic ℓ-power orders in chain order.
    pub fn ell_part(&self, ell: u64) -> Vec<BigInt> {
        self.reduced().iter().map(|n| ell_part(n, ell)).filter(|n| !n.is_one()).collect()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        assert_eq!(self.inverted, other.inverted, "direct sum of differently localized groups");
        let orders: Vec<BigInt> = self.factors.iter().chain(&other.factors).cloned().collect();
        Self::from_cyclic_orders(&orders, self.inverted.clone())
    }
}

fn render(factors: &[BigInt]) -> String {
    if factors.is_empty() {
        "0".to_string()
    } else {
        factors.iter().map(|n| format!("ℤ/{n}")).collect::<Vec<_>>().join(" ⊕ ")
    }
}

impl fmt::Display for LocalizedAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverted.is_empty() {
            write!(f, "{}", render(&self.factors))
        } else {
            let inv: Vec<String> = self.inverted.iter().map(|p| p.to_string()).collect();
            write!(f, "{} (away from {{{}}}: {})", render(&self.factors), inv.join(","), render(&self.reduced()))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GroupJson {
    #[serde(with = "crate::serde_int::big_vec")]
    group: Vec<BigInt>,
    inverted: Vec<u64>,
    #[serde(with = "crate::serde_int::big_vec")]
    reduced: Vec<BigInt>,
}

impl Serialize for LocalizedAbelianGroup {
    /// `{"group": [factors], "inverted": [primes], "reduced": [factors]}`
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        GroupJson {
            group: self.factors.clone(),
            inverted: self.inverted.iter().copied().collect(),
            reduced: self.reduced(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for LocalizedAbelianGroup {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = GroupJson::deserialize(de)?;
        if raw.group.iter().any(|n| !n.is_positive()) {
            return Err(D::Error::custom("group orders must be positive"));
        }
        let g = LocalizedAbelianGroup::from_cyclic_orders(&raw.group, raw.inverted.into_iter().collect());
        if g.reduced() != raw.reduced {
            return Err(D::Error::custom("\"reduced\" is inconsistent with \"group\" and \"inverted\""));
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn invariant_factor_form() {
        assert_eq!(invariant_factors(&big(&[6, 8, 3])), big(&[6, 24]));
        assert_eq!(invariant_factors(&big(&[1, 1])), big(&[]));
        assert_eq!(invariant_factors(&big(&[2, 2, 4])), big(&[2, 2, 4]));
    }

    #[test]
    fn localization() {
        let g = LocalizedAbelianGroup::integral(&big(&[10]));
        let away = g.localize([2, 3]);
        assert_eq!(away.invariant_factors(), &big(&[10])[..]);
        assert_eq!(away.reduced(), big(&[5]));
        let g = LocalizedAbelianGroup::from_cyclic_orders(&big(&[6, 8, 3]), [2, 3].into_iter().collect());
        assert!(g.is_trivial());
        assert_eq!(g.order(), BigInt::from(144));
    }

    #[test]
    fn ell_parts() {
        let g = LocalizedAbelianGroup::integral(&big(&[120, 45]));
        assert_eq!(g.ell_part(3), big(&[3, 9]));
        assert_eq!(g.ell_part(5), big(&[5, 5]));
        assert_eq!(g.ell_part(7), big(&[]));
    }

    #[test]
    fn json_form() {
        let g = LocalizedAbelianGroup::from_cyclic_orders(&big(&[10]), [2, 3].into_iter().collect());
        let j = serde_json::to_string(&g).unwrap();
        assert_eq!(j, r#"{"group":[10],"inverted":[2,3],"reduced":[5]}"#);
        let back: LocalizedAbelianGroup = serde_json::from_str(&j).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<LocalizedAbelianGroup>(r#"{"group":[10],"inverted":[],"reduced":[5]}"#).is_err());
    }
}
