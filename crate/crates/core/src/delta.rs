//! The connecting map δ : J(F)_Tor → D_3 ⊗ F^× ⊗ Q/Z on cuspidal classes.
//!
//! Only the primes p_i | N ever occur as F^×-components of images, and they
//! are independent in F^× ⊗ Q/Z; roots of unity (including -1) die after
//! tensoring with Q/Z. An image is therefore a table of exponents in Q/Z
//! indexed by (prime p_i, cusp w), taken modulo the diagonal Σ_w [w].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::base_ring::{Modulus, PrimeElt, RingElt};
use crate::error::{Error, Result};
use crate::group::LocalizedAbelianGroup;
use crate::lattice::{Character, CuspDivisor, WElem};
use crate::matrix::Matrix;
use crate::snf::{cokernel, subquotient};
use crate::sublattice::{d2_coords, d2_standard_basis, expand_in_d2_basis};
use crate::torsion::d_of_char;
use crate::Divisor;

fn frac_part(x: &BigRational) -> BigRational {
    x - x.floor()
}

/// An element of D_3 ⊗ F^× ⊗ Q/Z, normalized so that the slot of the cusp
/// w = 0 is zero for every prime and all exponents lie in [0, 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaImage {
    s: usize,
    primes: Vec<PrimeElt>,
    exps: Vec<Vec<BigRational>>,
}

/// One nonzero term [w] ⊗ p ⊗ x of a [`DeltaImage`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaTerm {
    pub cusp: WElem,
    pub prime: String,
    /// reduced fraction in (0, 1)
    pub exponent: String,
}

impl DeltaImage {
    pub fn zero(modulus: &Modulus) -> Self {
        let s = modulus.s();
        DeltaImage {
            s,
            primes: modulus.primes().to_vec(),
            exps: vec![vec![BigRational::zero(); 1 << s]; s],
        }
    }

    /// Image of Σ_{i,w} [w] ⊗ p_i ⊗ raw[i][w].
    pub fn from_exponents(modulus: &Modulus, raw: Vec<Vec<BigRational>>) -> Self {
        let s = modulus.s();
        assert!(raw.len() == s && raw.iter().all(|r| r.len() == 1 << s));
        let exps = raw
            .into_iter()
            .map(|row| {
                let base = row[0].clone();
                row.iter().map(|x| frac_part(&(x - &base))).collect()
            })
            .collect();
        DeltaImage { s, primes: modulus.primes().to_vec(), exps }
    }

    fn modulus_shape(&self) -> (usize, usize) {
        (self.s, 1 << self.s)
    }

    pub fn exponent(&self, i: usize, w: WElem) -> &BigRational {
        &self.exps[i][w.index()]
    }

    pub fn is_zero(&self) -> bool {
        self.exps.iter().flatten().all(Zero::is_zero)
    }

    /// lcm of the exponent denominators.
    pub fn order(&self) -> BigInt {
        self.exps.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Self {
        assert_eq!(self.primes, other.primes);
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| frac_part(&f(x, y))).collect())
            .collect();
        DeltaImage { s: self.s, primes: self.primes.clone(), exps }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |x, y| x - y)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let k = BigRational::from_integer(k.clone());
        let exps = self.exps.iter().map(|r| r.iter().map(|x| frac_part(&(x * &k))).collect()).collect();
        DeltaImage { s: self.s, primes: self.primes.clone(), exps }
    }

    /// Translate by W_w: [w'] ⊗ x ↦ [w + w'] ⊗ x, then renormalize.
    pub fn atkin_lehner(&self, w: WElem) -> Self {
        let (_, n) = self.modulus_shape();
        let exps = self
            .exps
            .iter()
            .map(|row| {
                let mut out = vec![BigRational::zero(); n];
                for (j, x) in row.iter().enumerate() {
                    out[j ^ w.index()] = x.clone();
                }
                let base = out[0].clone();
                out.iter().map(|x| frac_part(&(x - &base))).collect()
            })
            .collect();
        DeltaImage { s: self.s, primes: self.primes.clone(), exps }
    }

    /// Nonzero terms, by cusp and then by prime index.
    pub fn terms(&self) -> Vec<DeltaTerm> {
        let mut out = Vec::new();
        for w in WElem::all_sorted(self.s) {
            for (i, p) in self.primes.iter().enumerate() {
                let x = &self.exps[i][w.index()];
                if !x.is_zero() {
                    out.push(DeltaTerm { cusp: w, prime: p.to_string(), exponent: x.to_string() });
                }
            }
        }
        out
    }
}

impl fmt::Display for DeltaImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            terms.iter().map(|t| format!("[{}] ⊗ {} ⊗ {}", t.cusp, t.prime, t.exponent)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A product of primes with integer exponents, e.g. 11^-12.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredUnit {
    pub factors: Vec<(PrimeElt, BigInt)>,
}

impl FactoredUnit {
    pub fn one() -> Self {
        FactoredUnit { factors: Vec::new() }
    }

    pub fn is_one(&self) -> bool {
        self.factors.iter().all(|(_, e)| e.is_zero())
    }
}

impl fmt::Display for FactoredUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .filter(|(_, e)| !e.is_zero())
            .map(|(p, e)| {
                let base = if p.to_string().contains('+') { format!("({p})") } else { p.to_string() };
                if e.is_one() { base } else { format!("{base}^{e}") }
            })
            .collect();
        if parts.is_empty() { write!(f, "1") } else { write!(f, "{}", parts.join(" · ")) }
    }
}

fn check_nontrivial(modulus: &Modulus, e: &Character) -> Result<()> {
    if e.s() != modulus.s() {
        return Err(Error::LengthMismatch { expected: modulus.s(), got: e.s() });
    }
    if e.is_trivial() {
        return Err(Error::TrivialCharacter);
    }
    Ok(())
}

/// 2^{s-1} k
fn twisted_k(modulus: &Modulus) -> BigInt {
    modulus.constants().k << (modulus.s() - 1)
}

/// c(e, w) = p_i^{-2^{s-1} k} if e = e^{(i)} and w_i = 1, else 1: the
/// constant in Δ^e(W_w z) = c(e, w) Δ^e(z)^{⟨e, w⟩}.
pub fn c_constant(modulus: &Modulus, e: &Character, w: WElem) -> Result<FactoredUnit> {
    check_nontrivial(modulus, e)?;
    Ok(match e.single_index() {
        Some(i) if w.bit(i) => FactoredUnit { factors: vec![(modulus.primes()[i].clone(), -twisted_k(modulus))] },
        _ => FactoredUnit::one(),
    })
}

/// Order of δ([D^e]): d/(d, 2^{s-1} k) with d = d(e^{(i)}) if e = e^{(i)},
/// and 1 otherwise.
pub fn delta_order_de(modulus: &Modulus, e: &Character) -> Result<BigInt> {
    check_nontrivial(modulus, e)?;
    Ok(match e.single_index() {
        Some(_) => {
            let d = d_of_char(modulus, e);
            &d / d.gcd(&twisted_k(modulus))
        }
        None => BigInt::one(),
    })
}

/// Σ_{w_i = 0} [w] ⊗ p_i ⊗ x
fn half_space_image(modulus: &Modulus, i: usize, x: BigRational) -> DeltaImage {
    let s = modulus.s();
    let mut raw = vec![vec![BigRational::zero(); 1 << s]; s];
    for w in WElem::all(s).filter(|w| !w.bit(i)) {
        raw[i][w.index()] = x.clone();
    }
    DeltaImage::from_exponents(modulus, raw)
}

/// δ(D^{e^{(i)}}) = Σ_{w_i = 0} [w] ⊗ p_i ⊗ (-2^{s-1} k / d(e^{(i)})), for
/// a 0-based prime index i.
pub fn delta_image_single(modulus: &Modulus, i: usize) -> DeltaImage {
    let d = d_of_char(modulus, &Character::single(modulus.s(), i));
    half_space_image(modulus, i, BigRational::new(-twisted_k(modulus), d))
}

/// δ(D^e): the closed form for e = e^{(i)}, zero for every other e ≠ 1.
pub fn delta_image_de(modulus: &Modulus, e: &Character) -> Result<DeltaImage> {
    check_nontrivial(modulus, e)?;
    Ok(match e.single_index() {
        Some(i) => delta_image_single(modulus, i),
        None => DeltaImage::zero(modulus),
    })
}

/// δ(D^e) evaluated from the function Δ^e with div(Δ^e) = d(e) D^e: the
/// leading value of Δ^e / t_{[w]}^{⟨e,w⟩ d(e)} at [w] is c(e, w̄), which
/// gives Σ_w [w] ⊗ c(e, w̄) ⊗ 1/d(e).
pub fn delta_image_from_units(modulus: &Modulus, e: &Character) -> Result<DeltaImage> {
    check_nontrivial(modulus, e)?;
    let s = modulus.s();
    let d = d_of_char(modulus, e);
    let mut raw = vec![vec![BigRational::zero(); 1 << s]; s];
    for w in WElem::all(s) {
        let c = c_constant(modulus, e, w.add(WElem::all_ones(s)))?;
        for (p, a) in &c.factors {
            let i = modulus.primes().iter().position(|q| q == p).expect("prime of N");
            raw[i][w.index()] += BigRational::new(a.clone(), d.clone());
        }
    }
    Ok(DeltaImage::from_exponents(modulus, raw))
}

/// δ([1] - [1/p_i]) = Σ_{w_i = 0} [w] ⊗ p_i ⊗ (-k / d(e^{(i)})).
fn basis_image(modulus: &Modulus, i: usize) -> DeltaImage {
    let d = d_of_char(modulus, &Character::single(modulus.s(), i));
    half_space_image(modulus, i, BigRational::new(-modulus.constants().k, d))
}

/// δ([1/m] - [1/(m p_i)]) for m | N/p_i, with its order
/// d(e^{(i)})/(d(e^{(i)}), k). The image does not depend on m.
pub fn delta_basis_element(modulus: &Modulus, i: usize, m: &RingElt) -> Result<(DeltaImage, BigInt)> {
    let s = modulus.s();
    if i >= s {
        return Err(Error::NotADivisor(format!("prime index {} out of range 1..={s}", i + 1)));
    }
    let found = WElem::all(s).any(|w| !w.bit(i) && modulus.m_of_w(&w) == *m);
    if !found {
        return Err(Error::NotADivisor(format!("{m} does not divide N/{}", modulus.primes()[i])));
    }
    let image = basis_image(modulus, i);
    let order = image.order();
    Ok((image, order))
}

/// δ(D) for D ∈ D_2, by linearity over the standard basis
/// {[1/m] - [1/(m p_i)]}.
pub fn delta_of(modulus: &Modulus, d: &Divisor) -> Result<DeltaImage> {
    let coeffs = expand_in_d2_basis(modulus, d)?;
    let basis = d2_standard_basis(modulus);
    let mut out = DeltaImage::zero(modulus);
    for (b, c) in basis.iter().zip(&coeffs) {
        if !c.is_zero() {
            out = out.add(&basis_image(modulus, b.i).scale(c));
        }
    }
    Ok(out)
}

/// Generators of C ∩ ker δ: [1] - [1/p_i] - [1/m] + [1/(m p_i)] for
/// m | N/(p_1⋯p_i), m ≠ 1, and (d(e^{(i)})/(d(e^{(i)}), k)) ([1] - [1/p_i]).
pub fn kernel_generators(modulus: &Modulus) -> Vec<Divisor> {
    let s = modulus.s();
    let k = modulus.constants().k;
    let zero = WElem::zero(s);
    let mut out = Vec::new();
    for i in 0..s {
        let ei = WElem::unit(s, i);
        let base = CuspDivisor::cusp(zero).sub(&CuspDivisor::cusp(ei));
        let mut first: Vec<(RingElt, Divisor)> = WElem::all(s)
            .filter(|w| *w != zero && (0..=i).all(|j| !w.bit(j)))
            .map(|w| {
                let shifted = CuspDivisor::cusp(w).sub(&CuspDivisor::cusp(w.add(ei)));
                (modulus.m_of_w(&w), base.sub(&shifted))
            })
            .collect();
        first.sort_by(|a, b| a.0.cmp(&b.0));
        out.extend(first.into_iter().map(|(_, d)| d));
    }
    for i in 0..s {
        let d = d_of_char(modulus, &Character::single(s, i));
        let n = &d / d.gcd(&k);
        let base = CuspDivisor::cusp(WElem::zero(s)).sub(&CuspDivisor::cusp(WElem::unit(s, i)));
        out.push(base.scale(&n));
    }
    out
}

/// div(Δ^e) = d(e) D^e for e ≠ 1: a lattice of principal cuspidal divisors
/// which agrees with the full principal lattice in D_2 away from a.
pub fn eta_principal_divisors(modulus: &Modulus) -> Vec<Divisor> {
    Character::nontrivial(modulus.s())
        .iter()
        .map(|e| CuspDivisor::eigen(e).scale(&d_of_char(modulus, e)))
        .collect()
}

fn d2_matrix(divisors: &[Divisor], s: usize) -> Matrix<BigInt> {
    let cols = (1 << s) - 1;
    let rows: Vec<Vec<BigInt>> = divisors.iter().map(|d| d2_coords(d).expect("degree zero")).collect();
    if rows.is_empty() {
        return Matrix::zeros(0, cols);
    }
    Matrix::from_rows(rows)
}

/// (C ∩ ker δ) ⊗ Z[1/a], computed as the image of the kernel generators in
/// D_2 modulo the principal lattice.
pub fn kernel_structure(modulus: &Modulus) -> LocalizedAbelianGroup {
    let s = modulus.s();
    let kmat = d2_matrix(&kernel_generators(modulus), s);
    let pmat = d2_matrix(&eta_principal_divisors(modulus), s);
    let (torsion, free) = subquotient(&kmat, &pmat);
    assert_eq!(free, 0, "principal lattice has full rank");
    LocalizedAbelianGroup::integral(&torsion).localize(modulus.a_primes())
}

/// D_2 modulo the kernel generators and the principal lattice, that is
/// δ(C) ⊗ Z[1/a].
pub fn delta_image_structure(modulus: &Modulus) -> LocalizedAbelianGroup {
    let s = modulus.s();
    let mut all = kernel_generators(modulus);
    all.extend(eta_principal_divisors(modulus));
    let (torsion, free) = cokernel(&d2_matrix(&all, s));
    assert_eq!(free, 0);
    LocalizedAbelianGroup::integral(&torsion).localize(modulus.a_primes())
}

/// ⊕_i Z/(d(e^{(i)})/(d(e^{(i)}), k)), the expected δ(C), away from a.
pub fn expected_delta_image(modulus: &Modulus) -> LocalizedAbelianGroup {
    let k = modulus.constants().k;
    let orders: Vec<BigInt> = (0..modulus.s())
        .map(|i| {
            let d = d_of_char(modulus, &Character::single(modulus.s(), i));
            &d / d.gcd(&k)
        })
        .collect();
    LocalizedAbelianGroup::integral(&orders).localize(modulus.a_primes())
}

/// Σ_{w_i = 1} D[w], negated: the total coefficient of the basis elements
/// for the prime p_i in the expansion of D.
pub fn basis_weight(d: &Divisor, i: usize) -> BigInt {
    -WElem::all(d.s()).filter(|w| w.bit(i)).map(|w| d.coeff(w).clone()).sum::<BigInt>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_ring::Setting;
    use crate::torsion::{gen_jacobian_torsion, m_j};
    use proptest::prelude::*;

    fn nf(n: u64) -> Modulus {
        Modulus::nf_level(n).unwrap()
    }

    fn ch(s: &str) -> Character {
        s.parse().unwrap()
    }

    fn w(s: &str) -> WElem {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn c_constant_examples() {
        assert_eq!(c_constant(&nf(11), &ch("-"), w("1")).unwrap().to_string(), "11^-12");
        assert!(c_constant(&nf(11), &ch("-"), w("0")).unwrap().is_one());
        assert_eq!(c_constant(&nf(14), &ch("+-"), w("01")).unwrap().to_string(), "7^-24");
        assert!(c_constant(&nf(14), &ch("--"), w("11")).unwrap().is_one());
        assert_eq!(c_constant(&nf(14), &ch("++"), w("11")), Err(Error::TrivialCharacter));
    }

    #[test]
    fn order_examples() {
        assert_eq!(delta_order_de(&nf(11), &ch("-")).unwrap(), BigInt::from(5));
        assert_eq!(delta_order_de(&nf(14), &ch("--")).unwrap(), BigInt::from(1));
        let m = Modulus::parse(Setting::Ff { q: 2 }, "t^3+t+1").unwrap();
        assert_eq!(delta_order_de(&m, &ch("-")).unwrap(), BigInt::from(7));
    }

    #[test]
    fn image_examples() {
        let img = delta_image_single(&nf(11), 0);
        assert_eq!(img.order(), BigInt::from(5));
        // normalized: the w = 0 slot is cleared, leaving [1] ⊗ 11 ⊗ 6/5 ≡ 1/5
        assert_eq!(img.exponent(0, w("1")), &q(1, 5));
        assert_eq!(img.to_string(), "[1] ⊗ 11 ⊗ 1/5");
        assert!(delta_image_single(&nf(14), 0).is_zero());
        assert!(delta_image_de(&nf(30), &ch("-+-")).unwrap().is_zero());
    }

    #[test]
    fn basis_element_examples() {
        let (img, ord) = delta_basis_element(&nf(11), 0, &RingElt::Int(1.into())).unwrap();
        assert_eq!(ord, BigInt::from(5));
        assert_eq!(img.order(), ord);
        let a = delta_basis_element(&nf(14), 1, &RingElt::Int(1.into())).unwrap();
        let b = delta_basis_element(&nf(14), 1, &RingElt::Int(2.into())).unwrap();
        assert_eq!(a, b);
        assert!(matches!(delta_basis_element(&nf(14), 1, &RingElt::Int(7.into())), Err(Error::NotADivisor(_))));
        let m = Modulus::parse(Setting::Ff { q: 3 }, "t").unwrap();
        let (_, ord) = delta_basis_element(&m, 0, &RingElt::Poly(crate::poly::Poly::one())).unwrap();
        assert_eq!(ord, BigInt::from(1));
    }

    #[test]
    fn images_agree_with_unit_route() {
        for n in [11u64, 14, 30, 77, 105, 210] {
            let m = nf(n);
            for e in Character::nontrivial(m.s()) {
                let a = delta_image_de(&m, &e).unwrap();
                assert_eq!(a, delta_image_from_units(&m, &e).unwrap(), "N = {n}, e = {e}");
                assert_eq!(a.order(), delta_order_de(&m, &e).unwrap());
            }
        }
    }

    #[test]
    fn delta_of_eigen_divisors() {
        for n in [11u64, 14, 30, 105] {
            let m = nf(n);
            for e in Character::nontrivial(m.s()) {
                let d = CuspDivisor::eigen(&e);
                assert_eq!(delta_of(&m, &d).unwrap(), delta_image_de(&m, &e).unwrap(), "N = {n}, e = {e}");
            }
        }
        assert!(delta_of(&nf(30), &Divisor::zero(3)).unwrap().is_zero());
        assert!(matches!(delta_of(&nf(11), &Divisor::cusp(w("1"))), Err(Error::NonzeroDegree(_))));
    }

    #[test]
    fn basis_scales_to_eigen_image() {
        for n in [11u64, 14, 30, 210] {
            let m = nf(n);
            let s = m.s();
            for i in 0..s {
                let doubled = basis_image(&m, i).scale(&(BigInt::one() << (s - 1)));
                assert_eq!(doubled, delta_image_single(&m, i));
            }
        }
    }

    #[test]
    fn kernel_generators_are_killed() {
        for n in [11u64, 14, 30, 105, 1155] {
            let m = nf(n);
            for d in kernel_generators(&m) {
                assert!(delta_of(&m, &d).unwrap().is_zero(), "N = {n}, D = {d}");
            }
        }
        let gens = kernel_generators(&nf(11));
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0].to_string(), "5[0] - 5[1]");
        let gens14: Vec<String> = kernel_generators(&nf(14)).iter().map(|d| d.to_string()).collect();
        assert!(gens14.contains(&"[00] - [01] - [10] + [11]".to_string()), "{gens14:?}");
    }

    #[test]
    fn kernel_matches_generalized_jacobian() {
        for n in [11u64, 14, 30, 77, 91, 105, 143, 210] {
            let m = nf(n);
            assert!(kernel_structure(&m).is_isomorphic(&gen_jacobian_torsion(&m)), "N = {n}");
            assert!(delta_image_structure(&m).is_isomorphic(&expected_delta_image(&m)), "N = {n}");
        }
    }

    #[test]
    fn m2_trivial_for_one_prime() {
        assert!(m_j(&nf(11), 2).is_trivial());
    }

    proptest! {
        #[test]
        fn atkin_lehner_equivariance(coeffs in prop::collection::vec(-6i64..6, 7), wb in 0u32..8) {
            let m = nf(105);
            let mut c: Vec<BigInt> = coeffs.into_iter().map(BigInt::from).collect();
            let total: BigInt = c.iter().sum();
            c.insert(0, -total);
            let d = CuspDivisor::from_coeffs(3, c).unwrap();
            let ww = WElem::new(3, wb);
            let lhs = delta_of(&m, &d.atkin_lehner(ww)).unwrap();
            prop_assert_eq!(lhs, delta_of(&m, &d).unwrap().atkin_lehner(ww));
        }

        #[test]
        fn delta_is_additive_and_uses_basis_weights(
            a in prop::collection::vec(-6i64..6, 3), b in prop::collection::vec(-6i64..6, 3)
        ) {
            let m = nf(30);
            let mk = |v: &[i64]| {
                let mut c: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
                let tail = BigInt::from(-(v.iter().sum::<i64>()));
                c.insert(0, tail);
                c.extend([BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()]);
                CuspDivisor::from_coeffs(3, c).unwrap()
            };
            let (x, y) = (mk(&a), mk(&b));
            let sum = delta_of(&m, &x.add(&y)).unwrap();
            prop_assert_eq!(&sum, &delta_of(&m, &x).unwrap().add(&delta_of(&m, &y).unwrap()));
            let by_weight = (0..3).fold(DeltaImage::zero(&m), |acc, i| {
                acc.add(&basis_image(&m, i).scale(&basis_weight(&x.add(&y), i)))
            });
            prop_assert_eq!(sum, by_weight);
        }
    }
}
