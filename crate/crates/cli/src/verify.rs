//! Verification suites: each check compares two independent computations.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use cuspidal::base_ring::{ff_squarefree_levels, nf_squarefree_levels};
use cuspidal::delta::{
    delta_image_de, delta_image_from_units, delta_image_structure, delta_of, delta_order_de, expected_delta_image,
    kernel_generators, kernel_structure,
};
use cuspidal::eta::{check_character, cuspidal_group_oracle, DeltaSeries};
use cuspidal::hecke::eisenstein_entry;
use cuspidal::snf::smith_normal_form;
use cuspidal::sublattice::{coker_d2_to_d3, lattice_index_d2_d1, pairing_matrix, pairing_matrix_det};
use cuspidal::torsion::{embeds_in, gen_jacobian_torsion, jacobian_torsion, prime_level_torsion_order};
use cuspidal::{Character, CuspDivisor, Modulus, Result, WElem};
use num_bigint::BigInt;

use crate::select::PrimeSelection;
use crate::table::{aligned, csv};
use crate::Format;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub checks: u64,
    pub failures: Vec<String>,
    /// informational findings that are not failures
    pub notes: Vec<String>,
    /// false when the time budget ran out before the suite finished
    pub complete: bool,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        SuiteResult { name: name.into(), checks: 0, failures: Vec::new(), notes: Vec::new(), complete: true }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.complete && self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn render(&self, format: Format) -> String {
        let rows: Vec<Vec<String>> = self
            .suites
            .iter()
            .map(|s| {
                let status = match (s.complete, s.failures.is_empty()) {
                    (true, true) => "pass",
                    (true, false) => "FAIL",
                    (false, _) => "incomplete",
                };
                vec![s.name.clone(), s.checks.to_string(), s.failures.len().to_string(), status.to_string()]
            })
            .collect();
        let headers = ["suite", "checks", "failures", "status"];
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("serializable") + "\n",
            Format::Csv => csv(&headers, &rows),
            Format::Text => {
                let mut out = aligned(&headers, &rows);
                for s in &self.suites {
                    for n in &s.notes {
                        out += &format!("note [{}]: {n}\n", s.name);
                    }
                    for f in &s.failures {
                        out += &format!("failure [{}]: {f}\n", s.name);
                    }
                }
                out
            }
        }
    }
}

/// Optional wall-clock deadline shared by the suites of one run.
#[derive(Debug, Clone, Copy)]
pub struct Budget(Option<Instant>);

impl Budget {
    pub fn unlimited() -> Self {
        Budget(None)
    }

    pub fn seconds(secs: u64) -> Self {
        Budget(Some(Instant::now() + std::time::Duration::from_secs(secs)))
    }

    fn exhausted(&self) -> bool {
        self.0.is_some_and(|t| Instant::now() > t)
    }
}

/// Determinant, index and cokernel identities for s = 1..=smax.
pub fn matrix_suite(smax: usize) -> SuiteResult {
    let mut r = SuiteResult::new("matrix");
    for s in 1..=smax {
        let two = BigInt::from(2);
        let det = two.pow((1u32 << (s - 1)) * s as u32);
        let bareiss = pairing_matrix_det(s);
        r.check(bareiss == det, || format!("s = {s}: |det A_s| = {bareiss}, want {det}"));
        let snf = smith_normal_form(&pairing_matrix(s)).product();
        r.check(snf == det, || format!("s = {s}: Smith form product {snf}, want {det}"));
        let index = two.pow(((1u32 << (s - 1)) - 1) * s as u32);
        let got = lattice_index_d2_d1(s);
        r.check(got == index, || format!("s = {s}: [D_2 : D_1] = {got}, want {index}"));
        let coker = coker_d2_to_d3(s).order();
        r.check(coker == two.pow(s as u32), || format!("s = {s}: |coker(D_2 → D_3)| = {coker}"));
    }
    r
}

/// Checks that need no q-expansions: δ routes, kernel and image
/// reconstruction, prime level consistency.
fn structural_checks(r: &mut SuiteResult, m: &Modulus) -> Result<()> {
    let name = m.describe();
    for e in Character::nontrivial(m.s()) {
        let closed = delta_image_de(m, &e)?;
        let units = delta_image_from_units(m, &e)?;
        r.check(closed == units, || format!("{name}, e = {e}: δ(D^e) closed form {closed} vs unit values {units}"));
        let order = delta_order_de(m, &e)?;
        r.check(closed.order() == order, || format!("{name}, e = {e}: image order {} vs {order}", closed.order()));
        let via_basis = delta_of(m, &CuspDivisor::eigen(&e))?;
        r.check(via_basis == closed, || format!("{name}, e = {e}: basis expansion gives {via_basis}"));
    }
    for d in kernel_generators(m) {
        let img = delta_of(m, &d)?;
        r.check(img.is_zero(), || format!("{name}: δ({d}) = {img}"));
    }
    let (kernel, m2) = (kernel_structure(m), gen_jacobian_torsion(m));
    r.check(kernel.is_isomorphic(&m2), || format!("{name}: C ∩ ker δ = {kernel}, M_2 = {m2}"));
    let (image, expected) = (delta_image_structure(m), expected_delta_image(m));
    r.check(image.is_isomorphic(&expected), || format!("{name}: δ(C) = {image}, want {expected}"));
    let m1 = jacobian_torsion(m);
    r.check(embeds_in(&m2, &m1), || format!("{name}: M_2 = {m2} does not fit in M_1 = {m1}"));
    if m.s() == 1 {
        let full = prime_level_torsion_order(m)?;
        let delta = delta_order_de(m, &Character::single(1, 0))?;
        r.check(full == delta, || format!("{name}: torsion order {full}, δ-order {delta}"));
    }
    Ok(())
}

/// Everything over Q for squarefree 2 ≤ N ≤ nmax, including the eta
/// oracle with truncation `trunc` (default 8N).
pub fn nf_suite(nmax: u64, trunc: Option<usize>, budget: Budget) -> Result<SuiteResult> {
    nf_levels_suite(&format!("nf (N ≤ {nmax})"), &nf_squarefree_levels(nmax), trunc, budget)
}

/// The checks of [`nf_suite`] on an explicit list of levels over Q.
pub fn nf_levels_suite(name: &str, levels: &[Modulus], trunc: Option<usize>, budget: Budget) -> Result<SuiteResult> {
    let mut r = SuiteResult::new(name);
    for m in levels {
        if budget.exhausted() {
            r.complete = false;
            break;
        }
        let n = m.m_of_w_u64(&WElem::all_ones(m.s())).expect("small level");
        let series = DeltaSeries::new(trunc.unwrap_or(8 * n as usize));
        for e in Character::nontrivial(m.s()) {
            let c = check_character(m, &e, &series)?;
            r.check(c.ligozat_matches && c.degree_zero, || format!("N = {n}, e = {e}: Ligozat divisor ≠ d(e) D^e"));
            let sum: i64 = WElem::all(m.s()).map(|w| e.pairing(&w).expect("same length") as i64 * m.m_of_w_u64(&w).unwrap() as i64).sum();
            r.check(c.series_ord_at_infinity == sum && c.passed(), || {
                format!("N = {n}, e = {e}: series order {} vs {sum}", c.series_ord_at_infinity)
            });
        }
        let oracle = cuspidal_group_oracle(m)?;
        let m1 = jacobian_torsion(m);
        r.check(oracle.is_isomorphic(&m1), || format!("N = {n}: oracle {oracle}, M_1 {m1}"));
        structural_checks(&mut r, m)?;
    }
    Ok(r)
}

/// Everything without q-expansions over F_q(t), squarefree deg N ≤ dmax.
pub fn ff_suite(q: u64, dmax: usize, budget: Budget) -> Result<SuiteResult> {
    ff_levels_suite(&format!("ff (q = {q}, deg ≤ {dmax})"), &ff_squarefree_levels(q, dmax)?, budget)
}

/// The checks of [`ff_suite`] on an explicit list of levels.
pub fn ff_levels_suite(name: &str, levels: &[Modulus], budget: Budget) -> Result<SuiteResult> {
    let mut r = SuiteResult::new(name);
    for m in levels {
        if budget.exhausted() {
            r.complete = false;
            break;
        }
        structural_checks(&mut r, m)?;
    }
    Ok(r)
}

/// Eisenstein checks for each level and selected prime. The p = 2
/// obstruction over Q is expected to vanish exactly when s ≤ 2; a
/// nonvanishing obstruction is reported as a note.
pub fn hecke_suite(
    moduli: &[Modulus],
    selection: &PrimeSelection,
    samples: usize,
    seed: u64,
    budget: Budget,
) -> Result<SuiteResult> {
    let mut r = SuiteResult::new("hecke");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for m in moduli {
        if budget.exhausted() {
            r.complete = false;
            break;
        }
        let primes = selection.resolve(m)?;
        for p in &primes {
            let entry = eisenstein_entry(m, p, &primes, samples, &mut rng)?;
            let name = format!("{}, p = {p}", m.describe());
            r.check(entry.divisor_action, || format!("{name}: τ_p ≠ |p| + 1 on cusps"));
            r.check(entry.d3_eisenstein, || format!("{name}: D_3 not killed"));
            r.check(entry.exponent_two, || format!("{name}: (τ_p - |p| - 1)^2 ≠ 0 on L^0"));
            r.check(entry.commutes, || format!("{name}: Hecke operators do not commute"));
            if let Some(killed) = entry.exponent_one {
                let expected = m.s() <= 2;
                r.check(killed == expected, || format!("{name}: p = 2 obstruction vanishing = {killed}"));
                if !killed {
                    r.notes.push(format!("{name}: exponent one fails (τ_2 - 3 ≠ 0), exponent two holds"));
                }
            }
        }
    }
    Ok(r)
}

/// Default level list for the Hecke suite when none is given.
pub fn default_hecke_moduli() -> Result<Vec<Modulus>> {
    let mut all = nf_squarefree_levels(60);
    for q in [2u64, 3] {
        all.extend(ff_squarefree_levels(q, 3)?);
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_suite_passes() {
        let r = matrix_suite(4);
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.checks, 16);
    }

    #[test]
    fn small_suites_pass() {
        assert!(nf_suite(30, None, Budget::unlimited()).unwrap().passed());
        assert!(ff_suite(3, 2, Budget::unlimited()).unwrap().passed());
    }

    #[test]
    fn hecke_obstruction_is_a_note() {
        let m = vec![Modulus::nf_level(105).unwrap()];
        let r = hecke_suite(&m, &PrimeSelection::parse("2").unwrap(), 20, 1, Budget::unlimited()).unwrap();
        assert!(r.passed());
        assert_eq!(r.notes.len(), 1);
    }

    #[test]
    fn exhausted_budget_marks_incomplete() {
        let r = ff_suite(2, 3, Budget(Some(Instant::now() - std::time::Duration::from_secs(1)))).unwrap();
        assert!(!r.complete);
        assert!(!r.passed());
    }
}
