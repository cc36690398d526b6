//! The cuspidal lattices D_1 ⊂ D_2 ⊂ D and the quotient D_3 = D / ⟨Σ_w [w]⟩,
//! with their index and cokernel computations.
//!
//! Coordinates on D_2 are taken in the basis `[w] - [0]`, w ≠ 0, ordered by
//! `WElem::index`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::base_ring::{Modulus, RingElt};
use crate::error::{Error, Result};
use crate::group::LocalizedAbelianGroup;
use crate::lattice::{Character, CuspDivisor, WElem};
use crate::matrix::Matrix;
use crate::snf::{cokernel, smith_normal_form};
use crate::{Divisor, IntMatrix};

/// A_s = (⟨e, w⟩)_{e, w}, rows by character order, columns by cusp order.
pub fn pairing_matrix(s: usize) -> IntMatrix {
    let es = Character::all(s);
    let ws = WElem::all_sorted(s);
    Matrix::from_fn(es.len(), ws.len(), |i, j| BigInt::from(es[i].pair(&ws[j])))
}

/// |det A_s| by fraction-free elimination.
pub fn pairing_matrix_det(s: usize) -> BigInt {
    pairing_matrix(s).determinant().abs()
}

/// Coordinates of a degree-zero divisor in the `[w] - [0]` basis of D_2.
pub fn d2_coords(d: &Divisor) -> Result<Vec<BigInt>> {
    if !d.degree().is_zero() {
        return Err(Error::NonzeroDegree(d.degree().to_string()));
    }
    Ok(d.coeffs()[1..].to_vec())
}

pub fn from_d2_coords(s: usize, coords: &[BigInt]) -> Divisor {
    let mut c = Vec::with_capacity(1 << s);
    let sum: BigInt = coords.iter().sum();
    c.push(-sum);
    c.extend_from_slice(coords);
    CuspDivisor::from_coeffs(s, c).expect("2^s - 1 coordinates")
}

/// Matrix whose rows are the D^e (e ≠ 1) in D_2 coordinates.
pub fn d1_in_d2(s: usize) -> IntMatrix {
    let rows = Character::nontrivial(s)
        .iter()
        .map(|e| d2_coords(&CuspDivisor::eigen(e)).unwrap())
        .collect();
    Matrix::from_rows(rows)
}

/// [D_2 : D_1], from the Smith form of the inclusion.
pub fn lattice_index_d2_d1(s: usize) -> BigInt {
    smith_normal_form(&d1_in_d2(s)).product()
}

/// Cokernel of D_2 → D_3. D_3 is given coordinates [w], w ≠ 0, since
/// [0] ≡ -Σ_{w≠0} [w]; the basis element [w] - [0] maps to [w] + Σ_{w'≠0} [w'].
pub fn coker_d2_to_d3(s: usize) -> LocalizedAbelianGroup {
    let n = (1usize << s) - 1;
    let m = Matrix::from_fn(n, n, |i, j| if i == j { BigInt::from(2) } else { BigInt::from(1) });
    let (torsion, free) = cokernel(&m);
    assert_eq!(free, 0);
    LocalizedAbelianGroup::integral(&torsion)
}

/// One element [1/m] - [1/(m p_i)] of the standard D_2 basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct D2BasisElement {
    /// 0-based prime index
    pub i: usize,
    /// the cusp [1/m]
    pub w: WElem,
    pub m: RingElt,
    pub divisor: Divisor,
}

/// {[1/m] - [1/(m p_i)] : i, m | N/(p_1⋯p_i)}, ordered by (i, m).
pub fn d2_standard_basis(modulus: &Modulus) -> Vec<D2BasisElement> {
    let s = modulus.s();
    let mut out = Vec::with_capacity((1 << s) - 1);
    for i in 0..s {
        let mut block: Vec<D2BasisElement> = WElem::all(s)
            .filter(|w| (0..=i).all(|j| !w.bit(j)))
            .map(|w| {
                let divisor = CuspDivisor::cusp(w).sub(&CuspDivisor::cusp(w.add(WElem::unit(s, i))));
                D2BasisElement { i, w, m: modulus.m_of_w(&w), divisor }
            })
            .collect();
        block.sort_by(|a, b| a.m.cmp(&b.m));
        out.extend(block);
    }
    out
}

/// Expansion of a degree-zero divisor in [`d2_standard_basis`], by
/// eliminating the primes in order.
pub fn expand_in_d2_basis(modulus: &Modulus, d: &Divisor) -> Result<Vec<BigInt>> {
    let s = modulus.s();
    if d.s() != s {
        return Err(Error::LengthMismatch { expected: s, got: d.s() });
    }
    if !d.degree().is_zero() {
        return Err(Error::NonzeroDegree(d.degree().to_string()));
    }
    let basis = d2_standard_basis(modulus);
    let mut rest = d.clone();
    let mut coeffs = vec![BigInt::zero(); basis.len()];
    for (k, b) in basis.iter().enumerate() {
        // [w] - [w + e_i]: clear the coefficient at w + e_i
        let partner = b.w.add(WElem::unit(s, b.i));
        let c = -rest.coeff(partner).clone();
        rest = rest.sub(&b.divisor.scale(&c));
        coeffs[k] = c;
    }
    if !rest.is_zero() {
        return Err(Error::Inconsistent(format!("basis expansion left remainder {rest}")));
    }
    Ok(coeffs)
}
