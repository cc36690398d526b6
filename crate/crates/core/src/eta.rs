//! Independent check of the cuspidal divisor class group over Q: exact
//! q-expansions of products of Δ(mτ), cusp orders by Ligozat's formula, and
//! the class group rebuilt by Smith normal form.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::base_ring::{Modulus, Setting};
use crate::error::{Error, Result};
use crate::group::LocalizedAbelianGroup;
use crate::lattice::{Character, WElem};
use crate::matrix::Matrix;
use crate::qseries::{delta_qexp, QSeries};
use crate::snf::cokernel;
use crate::sublattice::d2_coords;
use crate::{Divisor, QSeriesZ};

/// ∏_m Δ(mτ)^{r_m} over divisors m of N, with Δ = η^24.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaQuotient {
    pub level: u64,
    pub exponents: BTreeMap<u64, i64>,
}

impl EtaQuotient {
    pub fn new(level: u64, exponents: BTreeMap<u64, i64>) -> Result<Self> {
        if let Some(m) = exponents.keys().find(|&&m| m == 0 || !level.is_multiple_of(m)) {
            return Err(Error::NotADivisor(format!("{m} does not divide {level}")));
        }
        let exponents = exponents.into_iter().filter(|(_, r)| *r != 0).collect();
        Ok(EtaQuotient { level, exponents })
    }

    /// Δ itself, at level 1.
    pub fn delta() -> Self {
        EtaQuotient { level: 1, exponents: BTreeMap::from([(1, 1)]) }
    }

    /// Σ_m m r_m
    pub fn expected_ord_at_infinity(&self) -> i64 {
        self.exponents.iter().map(|(&m, &r)| m as i64 * r).sum()
    }

    /// A function on X_0(N) needs weight Σ_m 12 r_m = 0.
    pub fn is_weight_zero(&self) -> bool {
        self.exponents.values().sum::<i64>() == 0
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|(m, r)| {
                let base = if *m == 1 { "Δ(τ)".to_string() } else { format!("Δ({m}τ)") };
                if *r == 1 { base } else { format!("{base}^{r}") }
            })
            .collect();
        if parts.is_empty() { write!(f, "1") } else { write!(f, "{}", parts.join(" ")) }
    }
}

fn require_nf(modulus: &Modulus) -> Result<u64> {
    if modulus.setting() != Setting::Nf {
        return Err(Error::SettingMismatch("the eta oracle works over Q only".into()));
    }
    modulus
        .m_of_w_u64(&WElem::all_ones(modulus.s()))
        .ok_or_else(|| Error::Inconsistent("level does not fit in 64 bits".into()))
}

/// Δ^e = ∏_w Δ(m(w) τ)^{⟨e, w⟩}
pub fn eta_quotient_of_char(modulus: &Modulus, e: &Character) -> Result<EtaQuotient> {
    let level = require_nf(modulus)?;
    let mut exponents = BTreeMap::new();
    for w in WElem::all(modulus.s()) {
        let m = modulus.m_of_w_u64(&w).expect("divides N");
        exponents.insert(m, e.pairing(&w)? as i64);
    }
    EtaQuotient::new(level, exponents)
}

/// Δ and Δ^{-1} to a fixed relative precision, reused for every dilation.
pub struct DeltaSeries {
    precision: usize,
    delta: QSeriesZ,
    inverse: QSeriesZ,
}

impl DeltaSeries {
    pub fn new(precision: usize) -> Self {
        let delta = delta_qexp::<BigInt>(precision);
        let inverse = delta.inverse().expect("leading coefficient 1");
        DeltaSeries { precision, delta, inverse }
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// q-expansion at ∞ of the product, to relative precision `precision`.
    pub fn expand(&self, quotient: &EtaQuotient) -> Result<QSeriesZ> {
        let mut acc = QSeries::one(self.precision);
        for (&m, &r) in &quotient.exponents {
            let base = if r > 0 { &self.delta } else { &self.inverse };
            let factor = base.dilate(m as usize).truncate(self.precision).pow(r.abs())?;
            acc = acc.mul(&factor);
        }
        Ok(acc)
    }
}

/// Leading q-exponent of the expanded product at ∞, using `precision`
/// known coefficients per factor.
pub fn ord_at_infinity(quotient: &EtaQuotient, precision: usize) -> Result<i64> {
    Ok(DeltaSeries::new(precision).expand(quotient)?.valuation())
}

/// Order of vanishing at every cusp [w] = [1/m(w)], by Ligozat's formula
/// ord_{1/c} = (N / gcd(c, N/c)) Σ_m r_m gcd(c, m)^2 / (c m)
/// for the product of η(mτ)^{24 r_m}.
pub fn ligozat_orders(modulus: &Modulus, quotient: &EtaQuotient) -> Result<Divisor> {
    let level = require_nf(modulus)?;
    if quotient.level != level {
        return Err(Error::SettingMismatch(format!("quotient of level {} on X_0({level})", quotient.level)));
    }
    let s = modulus.s();
    let mut coeffs = vec![BigInt::zero(); 1 << s];
    for w in WElem::all(s) {
        let c = modulus.m_of_w_u64(&w).expect("divides N");
        let width = BigInt::from(level / (c.gcd(&(level / c))));
        let mut sum = BigRational::zero();
        for (&m, &r) in &quotient.exponents {
            let g = BigInt::from(c.gcd(&m));
            sum += BigRational::new(BigInt::from(r) * &g * &g, BigInt::from(c) * BigInt::from(m));
        }
        let ord = sum * BigRational::from_integer(width);
        if !ord.is_integer() {
            return Err(Error::Inconsistent(format!("non-integral order {ord} at [{w}]")));
        }
        coeffs[w.index()] = ord.to_integer();
    }
    Divisor::from_coeffs(s, coeffs)
}

/// D_2 modulo the divisors of Δ^e (e ≠ 1), away from 6.
pub fn cuspidal_group_oracle(modulus: &Modulus) -> Result<LocalizedAbelianGroup> {
    require_nf(modulus)?;
    let s = modulus.s();
    let mut rows = Vec::new();
    for e in Character::nontrivial(s) {
        let div = ligozat_orders(modulus, &eta_quotient_of_char(modulus, &e)?)?;
        rows.push(d2_coords(&div)?);
    }
    let (torsion, free) = cokernel(&Matrix::from_rows(rows));
    if free != 0 {
        return Err(Error::Inconsistent(format!("divisors of Δ^e have corank {free}")));
    }
    Ok(LocalizedAbelianGroup::integral(&torsion).localize([2, 3]))
}

/// Cross-checks for one character: the Ligozat divisor against d(e) D^e,
/// and the series valuation at ∞ against its [w_∞] coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaCheck {
    pub character: Character,
    pub ligozat_matches: bool,
    pub degree_zero: bool,
    pub series_ord_at_infinity: i64,
    #[serde(with = "crate::serde_int::big")]
    pub ligozat_ord_at_infinity: BigInt,
}

impl EtaCheck {
    pub fn passed(&self) -> bool {
        self.ligozat_matches && self.degree_zero && BigInt::from(self.series_ord_at_infinity) == self.ligozat_ord_at_infinity
    }
}

pub fn check_character(modulus: &Modulus, e: &Character, series: &DeltaSeries) -> Result<EtaCheck> {
    let quotient = eta_quotient_of_char(modulus, e)?;
    let div = ligozat_orders(modulus, &quotient)?;
    let expected = Divisor::eigen(e).scale(&crate::torsion::d_of_char(modulus, e));
    let expansion = series.expand(&quotient)?;
    if !expansion.leading_coefficient().is_one() {
        return Err(Error::Inconsistent(format!("leading coefficient {} for {quotient}", expansion.leading_coefficient())));
    }
    Ok(EtaCheck {
        character: *e,
        ligozat_matches: div == expected,
        degree_zero: div.degree().is_zero(),
        series_ord_at_infinity: expansion.valuation(),
        ligozat_ord_at_infinity: div.coeff(WElem::all_ones(modulus.s())).clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torsion::jacobian_torsion;

    fn nf(n: u64) -> Modulus {
        Modulus::nf_level(n).unwrap()
    }

    fn ch(s: &str) -> Character {
        s.parse().unwrap()
    }

    #[test]
    fn quotient_examples() {
        let q = eta_quotient_of_char(&nf(11), &ch("-")).unwrap();
        assert_eq!(q.exponents, BTreeMap::from([(1, 1), (11, -1)]));
        let q = eta_quotient_of_char(&nf(14), &ch("--")).unwrap();
        assert_eq!(q.exponents, BTreeMap::from([(1, 1), (2, -1), (7, -1), (14, 1)]));
        assert_eq!(q.to_string(), "Δ(τ) Δ(2τ)^-1 Δ(7τ)^-1 Δ(14τ)");
        let q = eta_quotient_of_char(&nf(14), &ch("++")).unwrap();
        assert!(q.exponents.values().all(|&r| r == 1));
        assert!(EtaQuotient::new(14, BTreeMap::from([(3, 1)])).is_err());
    }

    #[test]
    fn series_orders_at_infinity() {
        let q = eta_quotient_of_char(&nf(14), &ch("--")).unwrap();
        assert_eq!(ord_at_infinity(&q, 20).unwrap(), 6);
        let q = eta_quotient_of_char(&nf(11), &ch("-")).unwrap();
        assert_eq!(ord_at_infinity(&q, 20).unwrap(), -10);
        assert_eq!(ord_at_infinity(&EtaQuotient::delta(), 5).unwrap(), 1);
    }

    #[test]
    fn series_of_quotient_known_terms() {
        // Δ(τ)/Δ(11τ) = q^{-10} (1 - 24q + 252q^2 - …)(1 + O(q^11))
        let q = eta_quotient_of_char(&nf(11), &ch("-")).unwrap();
        let s = DeltaSeries::new(11).expand(&q).unwrap();
        let d = delta_qexp::<BigInt>(11);
        assert_eq!(s.coeffs(), d.coeffs());
    }

    #[test]
    fn ligozat_examples() {
        let m = nf(11);
        let div = ligozat_orders(&m, &eta_quotient_of_char(&m, &ch("-")).unwrap()).unwrap();
        assert_eq!(div.to_string(), "10[0] - 10[1]");
        let m = nf(14);
        let e = ch("--");
        let div = ligozat_orders(&m, &eta_quotient_of_char(&m, &e).unwrap()).unwrap();
        assert_eq!(div, Divisor::eigen(&e).scale(&BigInt::from(6)));
        let triv = ligozat_orders(&m, &eta_quotient_of_char(&m, &ch("++")).unwrap()).unwrap();
        assert!(!triv.degree().is_zero());
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(cuspidal_group_oracle(&nf(11)).unwrap().reduced(), vec![BigInt::from(5)]);
        assert!(cuspidal_group_oracle(&nf(14)).unwrap().is_trivial());
        assert!(cuspidal_group_oracle(&nf(37)).unwrap().is_trivial());
        for n in [30u64, 35, 39, 55, 77, 91] {
            let m = nf(n);
            assert!(cuspidal_group_oracle(&m).unwrap().is_isomorphic(&jacobian_torsion(&m).localize([3])), "N = {n}");
        }
    }

    #[test]
    fn function_field_rejected() {
        let m = Modulus::parse(Setting::Ff { q: 2 }, "t").unwrap();
        assert!(matches!(eta_quotient_of_char(&m, &ch("-")), Err(Error::SettingMismatch(_))));
    }

    #[test]
    fn checks_pass_for_small_level() {
        let m = nf(30);
        let series = DeltaSeries::new(240);
        for e in Character::nontrivial(3) {
            assert!(check_character(&m, &e, &series).unwrap().passed(), "e = {e}");
        }
    }
}
