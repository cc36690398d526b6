//! Acceptance suite: one line per criterion, each with its runtime budget.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cuspidal::base_ring::{ff_squarefree_levels, nf_squarefree_levels};
use cuspidal::delta::{delta_order_de, kernel_structure};
use cuspidal::eta::{check_character, cuspidal_group_oracle, DeltaSeries};
use cuspidal::hecke::{apply_eisenstein, d3_eisenstein, eligible_primes, random_l0, exponent_one_obstruction};
use cuspidal::poly::monic_irreducibles;
use cuspidal::sublattice::{coker_d2_to_d3, lattice_index_d2_d1, pairing_matrix, pairing_matrix_det};
use cuspidal::torsion::{
    cuspidal_ell_part, gen_jacobian_ell_part, gen_jacobian_torsion, jacobian_torsion, prime_level_torsion_order,
};
use cuspidal::{gf::GaloisField, Character, LocalizedAbelianGroup, Modulus, PrimeElt, WElem};

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond { Ok(()) } else { Err(msg()) }
}

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

fn primes_below(n: u64) -> Vec<u64> {
    (2..n).filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)).collect()
}

/// 1: N = p < 200 prime over Q.
fn prime_level_nf() -> Outcome {
    let mut saw_eleven = false;
    for p in primes_below(200) {
        let m = Modulus::nf_level(p).map_err(|e| e.to_string())?;
        let expected = big(p - 1) / big(p - 1).gcd(&big(12));
        let order = prime_level_torsion_order(&m).map_err(|e| e.to_string())?;
        let delta = delta_order_de(&m, &Character::single(1, 0)).map_err(|e| e.to_string())?;
        ensure(order == expected && delta == expected, || format!("p = {p}: {order}, {delta}, want {expected}"))?;
        saw_eleven |= p == 11 && order == big(5);
    }
    ensure(saw_eleven, || "no order 5 at p = 11".into())
}

/// 2: N monic irreducible of degree ≤ 4 over F_q, q ∈ {2, 3, 4}.
fn prime_level_ff() -> Outcome {
    for q in [2u64, 3, 4] {
        let field = GaloisField::new(q).map_err(|e| e.to_string())?;
        let k = big(q * q - 1);
        for d in 1..=4usize {
            for f in monic_irreducibles(&field, d) {
                let m = Modulus::ff(q, vec![f.clone()]).map_err(|e| e.to_string())?;
                let qd: BigInt = big(q).pow(d as u32) - 1;
                let expected = &qd / qd.gcd(&k);
                let order = prime_level_torsion_order(&m).map_err(|e| e.to_string())?;
                let delta = delta_order_de(&m, &Character::single(1, 0)).map_err(|e| e.to_string())?;
                ensure(order == expected && delta == expected, || format!("q = {q}, N = {f}: {order}, {delta}"))?;
            }
        }
    }
    Ok(())
}

/// 3: determinant, index and cokernel identities for s = 1..4.
fn matrix_identities() -> Outcome {
    for s in 1..=4usize {
        let two = BigInt::from(2);
        let det_expected = two.clone().pow((1u32 << (s - 1)) * s as u32);
        let det = pairing_matrix_det(s);
        let snf = cuspidal::snf::smith_normal_form(&pairing_matrix(s));
        ensure(det == det_expected && snf.product() == det_expected, || format!("s = {s}: det {det}"))?;
        let index_expected = two.clone().pow(((1u32 << (s - 1)) - 1) * s as u32);
        let index = lattice_index_d2_d1(s);
        ensure(index == index_expected, || format!("s = {s}: index {index}, want {index_expected}"))?;
        let coker = coker_d2_to_d3(s).order();
        ensure(coker == two.pow(s as u32), || format!("s = {s}: cokernel order {coker}"))?;
    }
    Ok(())
}

/// 4: Ligozat orders of Δ^e and series valuations at ∞ for squarefree N ≤ 60.
fn eta_oracle() -> Outcome {
    for m in nf_squarefree_levels(60) {
        let n = m.m_of_w_u64(&WElem::all_ones(m.s())).unwrap();
        let series = DeltaSeries::new(8 * n as usize);
        for e in Character::nontrivial(m.s()) {
            let check = check_character(&m, &e, &series).map_err(|x| x.to_string())?;
            let sum: i64 = WElem::all(m.s())
                .map(|w| e.pairing(&w).unwrap() as i64 * m.m_of_w_u64(&w).unwrap() as i64)
                .sum();
            ensure(check.passed() && check.series_ord_at_infinity == sum, || format!("N = {n}, e = {e}: {check:?}"))?;
        }
    }
    Ok(())
}

fn squarefree_moduli() -> Result<Vec<Modulus>, String> {
    let mut all = nf_squarefree_levels(60);
    for q in [2u64, 3] {
        all.extend(ff_squarefree_levels(q, 3).map_err(|e| e.to_string())?);
    }
    Ok(all)
}

/// 5: the class group oracle against M_1 and the kernel of δ against M_2.
fn reconstruction() -> Outcome {
    for m in squarefree_moduli()? {
        if m.setting() == cuspidal::Setting::Nf {
            let oracle = cuspidal_group_oracle(&m).map_err(|e| e.to_string())?;
            let m1 = jacobian_torsion(&m);
            ensure(oracle.is_isomorphic(&m1), || format!("{}: oracle {oracle}, M_1 {m1}", m.describe()))?;
        }
        let kernel = kernel_structure(&m);
        let m2 = gen_jacobian_torsion(&m);
        ensure(kernel.is_isomorphic(&m2), || format!("{}: kernel {kernel}, M_2 {m2}", m.describe()))?;
    }
    Ok(())
}

/// 6: τ_p - |p| - 1 on D_3, its square on L^0, and the p = 2 obstruction.
fn hecke() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20240601);
    for m in squarefree_moduli()? {
        let primes = eligible_primes(&m, 50).map_err(|e| e.to_string())?;
        let samples: Vec<_> = (0..1000).map(|_| random_l0(&m, &primes[..2.min(primes.len())], &mut rng)).collect();
        for p in &primes {
            ensure(d3_eisenstein(&m, p).map_err(|e| e.to_string())?, || format!("{}: D_3 at {p}", m.describe()))?;
            for x in &samples {
                let once = apply_eisenstein(&m, p, x).map_err(|e| e.to_string())?;
                let twice = apply_eisenstein(&m, p, &once).map_err(|e| e.to_string())?;
                ensure(twice.inner().is_identity(), || format!("{}: exponent two at {p}", m.describe()))?;
            }
        }
    }
    let two = PrimeElt::integer(2).unwrap();
    let r = exponent_one_obstruction(&Modulus::nf_level(105).unwrap(), &two).map_err(|e| e.to_string())?;
    ensure(r.nonzero(), || "N = 105: obstruction vanishes".into())?;
    for m in nf_squarefree_levels(60).into_iter().filter(|m| m.s() <= 2) {
        if m.primes().iter().any(|p| p.as_integer() == Some(2)) {
            continue;
        }
        let r = exponent_one_obstruction(&m, &two).map_err(|e| e.to_string())?;
        ensure(!r.nonzero(), || format!("{}: obstruction {}", m.describe(), r.image))?;
    }
    Ok(())
}

/// 7: ℓ-parts for N ∈ {77, 91}.
fn ell_tables() -> Outcome {
    for n in [77u64, 91] {
        let m = Modulus::nf_level(n).unwrap();
        let ps: Vec<u64> = m.primes().iter().map(|p| p.as_integer().unwrap()).collect();
        // e_H from residues mod 3: +1 for p ≡ 1, -1 for p ≡ 2
        let eh: Vec<i8> = ps.iter().map(|p| if p % 3 == 1 { 1 } else { -1 }).collect();
        let d = |e: &Character| -> BigInt { ps.iter().enumerate().map(|(i, p)| big(*p) + e.sign(i) as i64).product() };
        let part = |x: &BigInt, ell: u64| -> BigInt {
            let mut x = x.clone();
            let mut out = BigInt::one();
            while (&x % ell).is_zero() {
                x /= ell;
                out *= ell;
            }
            out
        };
        for ell in [5u64, 7, 11, 13] {
            for e in Character::all(2) {
                let expected = if e.is_trivial() {
                    BigInt::one()
                } else if e.signs() == eh {
                    part(&d(&e), ell)
                } else {
                    part(&(d(&e) / 3), ell)
                };
                let got = cuspidal_ell_part(&m, ell, &e).map_err(|x| x.to_string())?;
                ensure(got == expected, || format!("N = {n}, ℓ = {ell}, e = {e}: {got}, want {expected}"))?;
            }
        }
        let mut m2_prime = Vec::new();
        for e in Character::all(2).into_iter().filter(|e| e.num_minus() >= 2 && e.signs() != eh) {
            m2_prime.push(part(&(d(&e) / 3), 3));
        }
        let expected = LocalizedAbelianGroup::integral(&m2_prime);
        let got = gen_jacobian_ell_part(&m, 3).map_err(|x| x.to_string())?;
        ensure(got == expected, || format!("N = {n}: M_2' 3-part {got}, want {expected}"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 7] = [
        (1, "prime-level sweep over Q, p < 200", Duration::from_secs(1), prime_level_nf),
        (2, "prime-level sweep over F_q(t), q ≤ 4, deg ≤ 4", Duration::from_secs(1), prime_level_ff),
        (3, "pairing determinant, D_2/D_1 index, D_3 cokernel, s ≤ 4", Duration::from_secs(1), matrix_identities),
        (4, "Ligozat orders and q-expansions, squarefree N ≤ 60", Duration::from_secs(30), eta_oracle),
        (5, "class group and ker δ reconstruction", Duration::from_secs(60), reconstruction),
        (6, "Eisenstein checks, |p| ≤ 50, 1000 samples", Duration::from_secs(10), hecke),
        (7, "ℓ-part tables for N = 77, 91", Duration::from_secs(1), ell_tables),
    ];
    let mut failed = 0;
    let mut summary = BTreeMap::new();
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let verdict = match (&outcome, elapsed <= budget) {
            (Ok(()), true) => "PASS".to_string(),
            (Ok(()), false) => format!("FAIL (over budget {budget:?})"),
            (Err(msg), _) => format!("FAIL ({msg})"),
        };
        if !verdict.starts_with("PASS") {
            failed += 1;
        }
        println!("criterion {id}: {verdict} [{:.3}s / {}s] {name}", elapsed.as_secs_f64(), budget.as_secs());
        summary.insert(id, verdict);
    }
    println!("acceptance: {} passed, {failed} failed", summary.len() - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
