//! Hecke action on cuspidal local data.
//!
//! L = ⊕_w F(X)^×_{[w]} / U^{(1)}_{[w]}: a class is determined by its
//! valuation and its leading coefficient in F^× relative to a fixed
//! uniformizer. F^× is modeled as roots of unity times the free abelian
//! group on the primes that occur. τ_p acts on each component by
//! α ↦ (-1)^{(|p|+1) ord(α)} α^{|p|+1}.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::is_prime_u64;
use crate::base_ring::{Modulus, PrimeElt, Setting};
use crate::error::{Error, Result};
use crate::lattice::{CuspDivisor, WElem};
use crate::poly::monic_irreducibles;
use crate::Divisor;

/// ζ^root · ∏ p^{e_p} in F^×, where ζ generates the roots of unity
/// (ζ = -1 over Q; a primitive element of F_q^× over F_q(t)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unit {
    order: u64,
    root: u64,
    factors: BTreeMap<PrimeElt, i64>,
}

impl Unit {
    pub fn one(modulus: &Modulus) -> Self {
        Unit { order: modulus.setting().roots_of_unity(), root: 0, factors: BTreeMap::new() }
    }

    pub fn minus_one(modulus: &Modulus) -> Self {
        let mut u = Self::one(modulus);
        u.root = if u.order.is_multiple_of(2) { u.order / 2 } else { 0 };
        u
    }

    pub fn root_of_unity(modulus: &Modulus, root: u64) -> Self {
        let mut u = Self::one(modulus);
        u.root = root % u.order;
        u
    }

    pub fn prime(modulus: &Modulus, p: &PrimeElt) -> Self {
        let mut u = Self::one(modulus);
        u.factors.insert(p.clone(), 1);
        u
    }

    pub fn root(&self) -> u64 {
        self.root
    }

    pub fn factors(&self) -> &BTreeMap<PrimeElt, i64> {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.root == 0 && self.factors.is_empty()
    }

    pub fn is_sign(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        for (p, e) in &other.factors {
            let slot = factors.entry(p.clone()).or_insert(0);
            *slot += e;
            if *slot == 0 {
                factors.remove(p);
            }
        }
        Unit { order: self.order, root: (self.root + other.root) % self.order, factors }
    }

    pub fn pow(&self, n: i64) -> Self {
        let root = (self.root as i128 * n as i128).rem_euclid(self.order as i128) as u64;
        let factors = if n == 0 {
            BTreeMap::new()
        } else {
            self.factors.iter().map(|(p, e)| (p.clone(), e.checked_mul(n).expect("exponent overflow"))).collect()
        };
        Unit { order: self.order, root, factors }
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.root != 0 {
            if self.order == 2 {
                parts.push("-1".to_string());
            } else {
                parts.push(format!("ζ^{}", self.root));
            }
        }
        for (p, e) in &self.factors {
            let base = if p.to_string().contains('+') { format!("({p})") } else { p.to_string() };
            parts.push(if *e == 1 { base } else { format!("{base}^{e}") });
        }
        if parts.is_empty() { write!(f, "1") } else { write!(f, "{}", parts.join("·")) }
    }
}

/// Class of α in F(X)^×_{[w]} / U^{(1)}_{[w]}: α = leading · t^valuation + ….
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalUnitClass {
    pub valuation: i64,
    pub leading: Unit,
}

impl LocalUnitClass {
    pub fn mul(&self, other: &Self) -> Self {
        LocalUnitClass { valuation: self.valuation + other.valuation, leading: self.leading.mul(&other.leading) }
    }

    pub fn pow(&self, n: i64) -> Self {
        LocalUnitClass { valuation: self.valuation * n, leading: self.leading.pow(n) }
    }
}

/// An element of L, one local class per cusp, indexed by w.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LElement {
    s: usize,
    comps: Vec<LocalUnitClass>,
}

impl LElement {
    pub fn identity(modulus: &Modulus) -> Self {
        let s = modulus.s();
        let one = LocalUnitClass { valuation: 0, leading: Unit::one(modulus) };
        LElement { s, comps: vec![one; 1 << s] }
    }

    pub fn from_components(s: usize, comps: Vec<LocalUnitClass>) -> Result<Self> {
        if comps.len() != 1 << s {
            return Err(Error::LengthMismatch { expected: 1 << s, got: comps.len() });
        }
        Ok(LElement { s, comps })
    }

    pub fn component(&self, w: WElem) -> &LocalUnitClass {
        &self.comps[w.index()]
    }

    pub fn set(&mut self, w: WElem, c: LocalUnitClass) {
        self.comps[w.index()] = c;
    }

    /// d: L → Z, the total valuation.
    pub fn degree(&self) -> i64 {
        self.comps.iter().map(|c| c.valuation).sum()
    }

    /// The image in the cuspidal divisors: Σ_w ord_{[w]} [w].
    pub fn divisor(&self) -> Divisor {
        CuspDivisor::from_coeffs(self.s, self.comps.iter().map(|c| BigInt::from(c.valuation)).collect())
            .expect("matching length")
    }

    pub fn is_identity(&self) -> bool {
        self.comps.iter().all(|c| c.valuation == 0 && c.leading.is_one())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a.mul(b)).collect();
        LElement { s: self.s, comps }
    }

    pub fn pow(&self, n: i64) -> Self {
        LElement { s: self.s, comps: self.comps.iter().map(|c| c.pow(n)).collect() }
    }
}

/// An element of L^0 = ker(d : L → Z).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct L0Element(LElement);

impl L0Element {
    pub fn new(x: LElement) -> Result<Self> {
        match x.degree() {
            0 => Ok(L0Element(x)),
            d => Err(Error::NotInL0(format!("total valuation {d}"))),
        }
    }

    pub fn inner(&self) -> &LElement {
        &self.0
    }
}

/// An element of D_3 ⊗ F^×, with the w = 0 leading coefficient divided out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct D3Units {
    s: usize,
    comps: Vec<Unit>,
}

impl D3Units {
    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Unit::is_one)
    }

    pub fn component(&self, w: WElem) -> &Unit {
        &self.comps[w.index()]
    }

    /// Cusps with a nontrivial component, in lexicographic order.
    pub fn support(&self) -> Vec<WElem> {
        WElem::all_sorted(self.s).into_iter().filter(|w| !self.comps[w.index()].is_one()).collect()
    }
}

impl fmt::Display for D3Units {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.support().iter().map(|w| format!("[{w}] ⊗ {}", self.comps[w.index()])).collect();
        if parts.is_empty() { write!(f, "0") } else { write!(f, "{}", parts.join(" + ")) }
    }
}

fn check_eligible(modulus: &Modulus, p: &PrimeElt) -> Result<i64> {
    if !modulus.hecke_eligible_prime(p) {
        return Err(Error::PrimeDividesLevel(p.to_string()));
    }
    modulus.norm(p).to_i64().ok_or_else(|| Error::Inconsistent(format!("|{p}| too large")))
}

/// Primes p ∤ N with |p| ≤ `max_norm`, by norm and then by the order of
/// the ring elements.
pub fn eligible_primes(modulus: &Modulus, max_norm: u64) -> Result<Vec<PrimeElt>> {
    let mut out = Vec::new();
    match modulus.setting() {
        Setting::Nf => {
            for n in 2..=max_norm {
                if is_prime_u64(n) {
                    out.push(PrimeElt::integer(n)?);
                }
            }
        }
        Setting::Ff { q } => {
            let field = modulus.field().expect("function field modulus");
            let mut d = 1u32;
            while q.checked_pow(d).is_some_and(|n| n <= max_norm) {
                for f in monic_irreducibles(field, d as usize) {
                    out.push(PrimeElt::polynomial(field, f)?);
                }
                d += 1;
            }
        }
    }
    out.retain(|p| modulus.hecke_eligible_prime(p));
    Ok(out)
}

/// τ_p on cuspidal divisors: each cusp pulls back to [w]' (ramification |p|)
/// and [w*]' (unramified) and pushes forward to (|p| + 1)[w].
pub fn hecke_on_cusp_divisor(modulus: &Modulus, p: &PrimeElt, d: &Divisor) -> Result<Divisor> {
    let n = check_eligible(modulus, p)?;
    Ok(d.scale(&BigInt::from(n + 1)))
}

/// φ_w(α) = (-1)^{(|p|+1) ord(α)} α^{|p|+1}
pub fn phi_w(modulus: &Modulus, p: &PrimeElt, u: &LocalUnitClass) -> Result<LocalUnitClass> {
    let n = check_eligible(modulus, p)? + 1;
    let sign = Unit::minus_one(modulus).pow(n * u.valuation);
    let raised = u.pow(n);
    Ok(LocalUnitClass { valuation: raised.valuation, leading: sign.mul(&raised.leading) })
}

/// τ_p on L, componentwise.
pub fn hecke_on_l(modulus: &Modulus, p: &PrimeElt, x: &LElement) -> Result<LElement> {
    let comps = x.comps.iter().map(|c| phi_w(modulus, p, c)).collect::<Result<Vec<_>>>()?;
    Ok(LElement { s: x.s, comps })
}

/// (τ_p - |p| - 1) x, written multiplicatively: τ_p(x) · x^{-(|p|+1)}.
/// The result has every valuation zero.
pub fn apply_eisenstein(modulus: &Modulus, p: &PrimeElt, x: &L0Element) -> Result<L0Element> {
    let n = check_eligible(modulus, p)? + 1;
    let image = hecke_on_l(modulus, p, &x.0)?.mul(&x.0.pow(-n));
    L0Element::new(image)
}

/// Image of a valuation-zero element of L in D_3 ⊗ F^×: divide out the
/// diagonal (constants) by normalizing the w = 0 component to 1.
pub fn project_d3(x: &LElement) -> Result<D3Units> {
    if let Some(c) = x.comps.iter().find(|c| c.valuation != 0) {
        return Err(Error::Inconsistent(format!("component of valuation {} is not a unit", c.valuation)));
    }
    let base = x.comps[0].leading.inv();
    Ok(D3Units { s: x.s, comps: x.comps.iter().map(|c| c.leading.mul(&base)).collect() })
}

/// Whether τ_p and τ_q commute on x.
pub fn hecke_commute(modulus: &Modulus, p: &PrimeElt, q: &PrimeElt, x: &LElement) -> Result<bool> {
    let pq = hecke_on_l(modulus, p, &hecke_on_l(modulus, q, x)?)?;
    let qp = hecke_on_l(modulus, q, &hecke_on_l(modulus, p, x)?)?;
    Ok(pq == qp)
}

/// Whether τ_p - |p| - 1 kills every basis element of D_3, both on the
/// divisor level and on the unit classes [w] ⊗ λ for λ a root of unity or
/// a prime of N.
pub fn d3_eisenstein(modulus: &Modulus, p: &PrimeElt) -> Result<bool> {
    let s = modulus.s();
    let n = BigInt::from(check_eligible(modulus, p)? + 1);
    let mut lambdas = vec![Unit::root_of_unity(modulus, 1), Unit::prime(modulus, p)];
    lambdas.extend(modulus.primes().iter().map(|q| Unit::prime(modulus, q)));
    for w in WElem::all(s) {
        let d = Divisor::cusp(w);
        if hecke_on_cusp_divisor(modulus, p, &d)?.sub(&d.scale(&n)) != Divisor::zero(s) {
            return Ok(false);
        }
        for lambda in &lambdas {
            let mut x = LElement::identity(modulus);
            x.set(w, LocalUnitClass { valuation: 0, leading: lambda.clone() });
            if !apply_eisenstein(modulus, p, &L0Element::new(x)?)?.0.is_identity() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A random element of L^0 whose leading coefficients involve roots of
/// unity, the primes of N and the given extra primes.
pub fn random_l0<R: Rng>(modulus: &Modulus, extra: &[PrimeElt], rng: &mut R) -> L0Element {
    let s = modulus.s();
    let mut basis: Vec<PrimeElt> = modulus.primes().to_vec();
    basis.extend(extra.iter().cloned());
    let order = modulus.setting().roots_of_unity();
    let mut comps = Vec::with_capacity(1 << s);
    for _ in 0..1usize << s {
        let mut leading = Unit::root_of_unity(modulus, rng.gen_range(0..order));
        for p in &basis {
            let e: i64 = rng.gen_range(-3..=3);
            if e != 0 {
                leading = leading.mul(&Unit::prime(modulus, p).pow(e));
            }
        }
        comps.push(LocalUnitClass { valuation: rng.gen_range(-4..=4), leading });
    }
    let total: i64 = comps.iter().map(|c| c.valuation).sum();
    comps[0].valuation -= total;
    L0Element::new(LElement { s, comps }).expect("degree adjusted to zero")
}

/// The obstruction at p = 2 for odd N over Q: lift
/// [1] - [1/p_1] - [p_1/N] + [1/N] to L^0 with unit leading coefficients,
/// apply τ_2 - 3 and project to D_3 ⊗ F^×.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentOneObstruction {
    pub lift: LElement,
    pub image: D3Units,
}

impl ExponentOneObstruction {
    pub fn nonzero(&self) -> bool {
        !self.image.is_zero()
    }
}

pub fn exponent_one_obstruction(modulus: &Modulus, p: &PrimeElt) -> Result<ExponentOneObstruction> {
    if modulus.setting() != Setting::Nf {
        return Err(Error::SettingMismatch("the p = 2 obstruction is specific to Q".into()));
    }
    if p.as_integer() != Some(2) {
        return Err(Error::ExcludedCase(format!("the obstruction uses p = 2, not {p}")));
    }
    check_eligible(modulus, p)?;
    let s = modulus.s();
    let (zero, all) = (WElem::zero(s), WElem::all_ones(s));
    let e1 = WElem::unit(s, 0);
    // cusps [1], [1/p_1], [p_1/N] = [1/(N/p_1)], [1/N]
    let support = [(zero, 1), (e1, -1), (all.add(e1), -1), (all, 1)];
    let mut lift = LElement::identity(modulus);
    for (w, v) in support {
        let c = lift.component(w).clone();
        lift.set(w, LocalUnitClass { valuation: c.valuation + v, leading: c.leading });
    }
    let x = L0Element::new(lift.clone())?;
    let image = project_d3(&apply_eisenstein(modulus, p, &x)?.0)?;
    Ok(ExponentOneObstruction { lift, image })
}

/// Per-prime Eisenstein checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EisensteinEntry {
    pub prime: String,
    pub norm: u64,
    /// τ_p D = (|p| + 1) D on every cusp
    pub divisor_action: bool,
    /// τ_p - |p| - 1 kills D_3 and D_3 ⊗ F^×
    pub d3_eisenstein: bool,
    /// (τ_p - |p| - 1)^2 kills every sampled element of L^0
    pub exponent_two: bool,
    /// τ_p commutes with every other listed τ_q on the samples
    pub commutes: bool,
    /// for p = 2 and odd N over Q: whether τ_2 - 3 kills the lift of
    /// [1] - [1/p_1] - [p_1/N] + [1/N] in D_3 ⊗ F^×
    pub exponent_one: Option<bool>,
    pub samples: usize,
}

impl EisensteinEntry {
    pub fn passed(&self) -> bool {
        self.divisor_action && self.d3_eisenstein && self.exponent_two && self.commutes
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EisensteinReport {
    pub modulus: String,
    pub entries: Vec<EisensteinEntry>,
}

impl EisensteinReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(EisensteinEntry::passed)
    }
}

pub fn eisenstein_entry<R: Rng>(
    modulus: &Modulus,
    p: &PrimeElt,
    others: &[PrimeElt],
    samples: usize,
    rng: &mut R,
) -> Result<EisensteinEntry> {
    let norm = check_eligible(modulus, p)? as u64;
    let n = BigInt::from(norm + 1);
    let divisor_action = WElem::all(modulus.s()).all(|w| {
        let d = Divisor::cusp(w);
        hecke_on_cusp_divisor(modulus, p, &d).is_ok_and(|x| x == d.scale(&n))
    });
    let d3 = d3_eisenstein(modulus, p)?;
    let mut exponent_two = true;
    let mut commutes = true;
    let extra: Vec<PrimeElt> = std::iter::once(p.clone()).chain(others.iter().take(2).cloned()).collect();
    for k in 0..samples {
        let x = random_l0(modulus, &extra, rng);
        let once = apply_eisenstein(modulus, p, &x)?;
        if !once.0.comps.iter().all(|c| c.valuation == 0) || !apply_eisenstein(modulus, p, &once)?.0.is_identity() {
            exponent_two = false;
        }
        if let Some(q) = others.get(k % others.len().max(1)) {
            if q != p && !hecke_commute(modulus, p, q, &x.0)? {
                commutes = false;
            }
        }
    }
    let exponent_one = match (modulus.setting(), p.as_integer()) {
        (Setting::Nf, Some(2)) => Some(!exponent_one_obstruction(modulus, p)?.nonzero()),
        _ => None,
    };
    Ok(EisensteinEntry {
        prime: p.to_string(),
        norm,
        divisor_action,
        d3_eisenstein: d3,
        exponent_two,
        commutes,
        exponent_one,
        samples,
    })
}

/// Runs [`eisenstein_entry`] for every eligible prime with |p| ≤ `max_norm`.
pub fn eisenstein_report<R: Rng>(modulus: &Modulus, max_norm: u64, samples: usize, rng: &mut R) -> Result<EisensteinReport> {
    let primes = eligible_primes(modulus, max_norm)?;
    let entries = primes
        .iter()
        .map(|p| eisenstein_entry(modulus, p, &primes, samples, rng))
        .collect::<Result<Vec<_>>>()?;
    Ok(EisensteinReport { modulus: modulus.describe(), entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn nf(n: u64) -> Modulus {
        Modulus::nf_level(n).unwrap()
    }

    fn ip(p: u64) -> PrimeElt {
        PrimeElt::integer(p).unwrap()
    }

    fn ff(q: u64, level: &str) -> Modulus {
        Modulus::parse(Setting::Ff { q }, level).unwrap()
    }

    #[test]
    fn divisor_action_examples() {
        let m = nf(11);
        let d = Divisor::cusp(WElem::zero(1)).sub(&Divisor::cusp(WElem::all_ones(1)));
        assert_eq!(hecke_on_cusp_divisor(&m, &ip(2), &d).unwrap(), d.scale(&BigInt::from(3)));
        assert_eq!(hecke_on_cusp_divisor(&m, &ip(5), &Divisor::zero(1)).unwrap(), Divisor::zero(1));
        assert_eq!(hecke_on_cusp_divisor(&m, &ip(11), &d), Err(Error::PrimeDividesLevel("11".into())));
        let m = ff(2, "t");
        let p = m.parse_prime("t+1").unwrap();
        let de = Divisor::eigen(&"-".parse().unwrap());
        assert_eq!(hecke_on_cusp_divisor(&m, &p, &de).unwrap(), de.scale(&BigInt::from(3)));
    }

    #[test]
    fn phi_examples() {
        let m = nf(11);
        let lambda = Unit::prime(&m, &ip(11)).mul(&Unit::minus_one(&m));
        let u = LocalUnitClass { valuation: 0, leading: lambda.clone() };
        assert_eq!(phi_w(&m, &ip(2), &u).unwrap(), LocalUnitClass { valuation: 0, leading: lambda.pow(3) });
        let t = LocalUnitClass { valuation: 1, leading: Unit::one(&m) };
        assert_eq!(phi_w(&m, &ip(2), &t).unwrap(), LocalUnitClass { valuation: 3, leading: Unit::minus_one(&m) });
        assert_eq!(phi_w(&m, &ip(3), &t).unwrap(), LocalUnitClass { valuation: 4, leading: Unit::one(&m) });
    }

    #[test]
    fn eisenstein_examples() {
        let m = nf(11);
        let mut x = LElement::identity(&m);
        x.set(WElem::zero(1), LocalUnitClass { valuation: 0, leading: Unit::prime(&m, &ip(11)) });
        assert!(apply_eisenstein(&m, &ip(2), &L0Element::new(x).unwrap()).unwrap().inner().is_identity());

        let mut x = LElement::identity(&m);
        x.set(WElem::zero(1), LocalUnitClass { valuation: 1, leading: Unit::one(&m) });
        x.set(WElem::all_ones(1), LocalUnitClass { valuation: -1, leading: Unit::one(&m) });
        let y = apply_eisenstein(&m, &ip(2), &L0Element::new(x.clone()).unwrap()).unwrap();
        for w in WElem::all(1) {
            assert_eq!(y.inner().component(w), &LocalUnitClass { valuation: 0, leading: Unit::minus_one(&m) });
        }
        // (-1, -1) is diagonal, so it dies in D_3 ⊗ F^×
        assert!(project_d3(y.inner()).unwrap().is_zero());

        let mut bad = LElement::identity(&m);
        bad.set(WElem::zero(1), LocalUnitClass { valuation: 1, leading: Unit::one(&m) });
        assert!(matches!(L0Element::new(bad), Err(Error::NotInL0(_))));
    }

    #[test]
    fn exponent_one_obstruction_examples() {
        let r = exponent_one_obstruction(&nf(105), &ip(2)).unwrap();
        assert!(r.nonzero());
        assert_eq!(r.image.support().len(), 4);
        assert!(!exponent_one_obstruction(&nf(15), &ip(2)).unwrap().nonzero());
        assert!(!exponent_one_obstruction(&nf(11), &ip(2)).unwrap().nonzero());
        assert_eq!(exponent_one_obstruction(&nf(30), &ip(2)).unwrap_err(), Error::PrimeDividesLevel("2".into()));
        assert!(matches!(exponent_one_obstruction(&nf(105), &ip(11)), Err(Error::ExcludedCase(_))));
        assert!(exponent_one_obstruction(&nf(1155), &ip(2)).unwrap().nonzero());
    }

    #[test]
    fn eligible_prime_lists() {
        let ps: Vec<String> = eligible_primes(&nf(30), 20).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(ps, ["7", "11", "13", "17", "19"]);
        let ps: Vec<String> = eligible_primes(&ff(2, "t"), 8).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(ps, ["t+1", "t^2+t+1", "t^3+t+1", "t^3+t^2+1"]);
    }

    #[test]
    fn reports() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r = eisenstein_report(&nf(11), 7, 50, &mut rng).unwrap();
        assert_eq!(r.entries.len(), 4);
        assert!(r.passed());
        assert_eq!(r.entries[0].exponent_one, Some(true));
        let r = eisenstein_report(&nf(105), 2, 50, &mut rng).unwrap();
        assert!(r.passed());
        assert_eq!(r.entries[0].exponent_one, Some(false));
        let r = eisenstein_report(&ff(2, "t"), 2, 50, &mut rng).unwrap();
        assert!(r.passed());
        assert_eq!(r.entries[0].exponent_one, None);
    }

    proptest! {
        #[test]
        fn exponent_two_on_random_elements(seed in any::<u64>(), pi in 0usize..4) {
            let m = nf(105);
            let p = ip([2, 11, 13, 17][pi]);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = random_l0(&m, std::slice::from_ref(&p), &mut rng);
            let once = apply_eisenstein(&m, &p, &x).unwrap();
            prop_assert!(WElem::all(3).all(|w| once.inner().component(w).valuation == 0));
            prop_assert!(apply_eisenstein(&m, &p, &once).unwrap().inner().is_identity());
        }

        #[test]
        fn hecke_operators_commute(seed in any::<u64>()) {
            let m = ff(3, "t^2+1");
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = m.parse_prime("t").unwrap();
            let q = m.parse_prime("t+2").unwrap();
            let x = random_l0(&m, &[p.clone(), q.clone()], &mut rng);
            prop_assert!(hecke_commute(&m, &p, &q, x.inner()).unwrap());
        }

        #[test]
        fn valuations_scale(v in -20i64..20, p in prop::sample::select(vec![2u64, 3, 5, 7, 13])) {
            let m = nf(11);
            let u = LocalUnitClass { valuation: v, leading: Unit::one(&m) };
            prop_assert_eq!(phi_w(&m, &ip(p), &u).unwrap().valuation, (p as i64 + 1) * v);
        }
    }
}
