//! Closed-form torsion structures: J(F)_Tor and J̃(F)_Tor away from a, their
//! character decompositions, and the ℓ-primary refinements.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime_u64, strip_primes, valuation};
use crate::base_ring::{Modulus, Setting};
use crate::error::{Error, Result};
use crate::group::LocalizedAbelianGroup;
use crate::lattice::Character;

/// d(e) = ∏_i (|p_i| + e_i)
pub fn d_of_char(modulus: &Modulus, e: &Character) -> BigInt {
    assert_eq!(e.s(), modulus.s());
    modulus.norms().iter().enumerate().map(|(i, n)| n + BigInt::from(e.sign(i))).product()
}

/// Characters with at least `j` entries equal to -1.
pub fn characters_at_least(s: usize, j: u32) -> Vec<Character> {
    Character::all(s).into_iter().filter(|e| e.num_minus() >= j).collect()
}

/// M_j = ⊕_{e ∈ E_j} Z/d(e), integral, in invariant-factor form.
pub fn m_j(modulus: &Modulus, j: u32) -> LocalizedAbelianGroup {
    let orders: Vec<BigInt> = characters_at_least(modulus.s(), j).iter().map(|e| d_of_char(modulus, e)).collect();
    LocalizedAbelianGroup::integral(&orders)
}

/// J(F)_Tor ⊗ Z[1/a] ≅ M_1 ⊗ Z[1/a]
pub fn jacobian_torsion(modulus: &Modulus) -> LocalizedAbelianGroup {
    m_j(modulus, 1).localize(modulus.a_primes())
}

/// J̃(F)_Tor ⊗ Z[1/a] ≅ M_2 ⊗ Z[1/a]
pub fn gen_jacobian_torsion(modulus: &Modulus) -> LocalizedAbelianGroup {
    m_j(modulus, 2).localize(modulus.a_primes())
}

/// Full order (|N| - 1)/(k, |N| - 1) of the cyclic group J(F)_Tor = C at
/// prime level.
pub fn prime_level_torsion_order(modulus: &Modulus) -> Result<BigInt> {
    if modulus.s() != 1 {
        return Err(Error::NotPrimeLevel(modulus.s()));
    }
    let n1: BigInt = modulus.level_norm() - 1;
    let k = modulus.constants().k;
    Ok(&n1 / n1.gcd(&k))
}

fn check_odd_prime(ell: u64) -> Result<()> {
    if ell == 2 || !is_prime_u64(ell) {
        return Err(Error::ExcludedCase(format!("ℓ = {ell} is not an odd prime")));
    }
    Ok(())
}

/// Order of the cyclic group C{ℓ}^e = J(F){ℓ}^e: the ℓ-part of 1, d(e) or
/// d(e)/b according to whether e is trivial, e = e_H, or neither.
///
/// Cases outside the known range (ℓ = 2, ℓ = 3 with 3 | N, ℓ | q(q - 1))
/// are reported as [`Error::ExcludedCase`].
pub fn cuspidal_ell_part(modulus: &Modulus, ell: u64, e: &Character) -> Result<BigInt> {
    check_odd_prime(ell)?;
    let excluded = match modulus.setting() {
        Setting::Nf => ell == 3 && modulus.e_h().is_err(),
        Setting::Ff { q } => (q * (q - 1)).gcd(&ell) != 1,
    };
    if excluded {
        return Err(Error::ExcludedCase(format!("ℓ = {ell} for {}", modulus.describe())));
    }
    if e.is_trivial() {
        return Ok(BigInt::one());
    }
    let d = d_of_char(modulus, e);
    // e_H is undefined only in NF with 3 | N; then ℓ ≠ 3 and b contributes nothing.
    let divide_by_b = modulus.e_h() != Ok(*e);
    let vd = valuation(&d, ell) as i64;
    let vb = if divide_by_b { valuation(&modulus.constants().b, ell) as i64 } else { 0 };
    if vd < vb {
        return Err(Error::Inconsistent(format!("b does not divide d({e}) = {d} at ℓ = {ell}")));
    }
    Ok(BigInt::from(ell).pow((vd - vb) as u32))
}

/// ℓ-part of M_2' = ⊕ Z/(d(e)/b) over e ∉ {1, e_H, e^{(1)}, …, e^{(s)}},
/// which is J̃(F){ℓ} for ℓ = 3 (NF, 3 ∤ N) or ℓ an odd prime divisor of
/// q + 1 (FF).
pub fn gen_jacobian_ell_part(modulus: &Modulus, ell: u64) -> Result<LocalizedAbelianGroup> {
    check_odd_prime(ell)?;
    match modulus.setting() {
        Setting::Nf if ell != 3 => {
            return Err(Error::ExcludedCase(format!("only ℓ = 3 is covered in NF, got {ell}")))
        }
        Setting::Nf => {}
        Setting::Ff { q } => {
            if (q + 1) % ell != 0 {
                return Err(Error::ExcludedCase(format!("ℓ = {ell} does not divide q + 1 = {}", q + 1)));
            }
        }
    }
    let eh = modulus.e_h().map_err(|_| Error::ExcludedCase("3 divides N".into()))?;
    let b = modulus.constants().b;
    let mut orders = Vec::new();
    for e in characters_at_least(modulus.s(), 2) {
        if e == eh {
            continue;
        }
        let d = d_of_char(modulus, &e);
        let (quot, rem) = d.div_rem(&b);
        if rem != BigInt::from(0) {
            return Err(Error::Inconsistent(format!("b = {b} does not divide d({e}) = {d}")));
        }
        orders.push(crate::arith::ell_part(&quot, ell));
    }
    Ok(LocalizedAbelianGroup::integral(&orders))
}

/// Orders of the cyclic e-parts M^e and M̃^e, both taken away from a.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EPartEntry {
    #[serde(with = "crate::serde_int::big")]
    pub d: BigInt,
    #[serde(with = "crate::serde_int::big")]
    pub jacobian: BigInt,
    #[serde(with = "crate::serde_int::big")]
    pub generalized: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EPartTable {
    pub inverted: BTreeSet<u64>,
    pub entries: BTreeMap<Character, EPartEntry>,
}

/// Character-by-character decomposition of J(F)_Tor and J̃(F)_Tor away
/// from a: trivial at 1; (d(e), 0) with one minus sign; (d(e), d(e)) with two
/// or more, all with the primes of a removed.
pub fn epart_table(modulus: &Modulus) -> EPartTable {
    let inverted = modulus.a_primes();
    let entries = Character::all(modulus.s())
        .into_iter()
        .map(|e| {
            let d = d_of_char(modulus, &e);
            let reduced = strip_primes(&d, &inverted);
            let (jacobian, generalized) = match e.num_minus() {
                0 => (BigInt::one(), BigInt::one()),
                1 => (reduced, BigInt::one()),
                _ => (reduced.clone(), reduced),
            };
            (e, EPartEntry { d, jacobian, generalized })
        })
        .collect();
    EPartTable { inverted, entries }
}

impl EPartTable {
    pub fn jacobian_group(&self) -> LocalizedAbelianGroup {
        let orders: Vec<BigInt> = self.entries.values().map(|x| x.jacobian.clone()).collect();
        LocalizedAbelianGroup::from_cyclic_orders(&orders, self.inverted.clone())
    }

    pub fn generalized_group(&self) -> LocalizedAbelianGroup {
        let orders: Vec<BigInt> = self.entries.values().map(|x| x.generalized.clone()).collect();
        LocalizedAbelianGroup::from_cyclic_orders(&orders, self.inverted.clone())
    }
}

/// Whether `small` can be a subgroup (or quotient) of `big`: aligning both
/// reduced invariant-factor chains at the top, each factor of `small`
/// divides the matching factor of `big`.
pub fn embeds_in(small: &LocalizedAbelianGroup, big: &LocalizedAbelianGroup) -> bool {
    let (a, b) = (small.reduced(), big.reduced());
    if a.len() > b.len() {
        return false;
    }
    a.iter().rev().zip(b.iter().rev()).all(|(x, y)| y.is_multiple_of(x))
}
