//! Cross-module checks: torsion tables, the δ map and the lattice computations
//! must tell the same story at every level.

use cuspidal::base_ring::{ff_squarefree_levels, nf_squarefree_levels};
use cuspidal::delta::{
    delta_image_de, delta_image_from_units, delta_image_structure, delta_of, eta_principal_divisors,
    expected_delta_image, kernel_generators, kernel_structure,
};
use cuspidal::eta::cuspidal_group_oracle;
use cuspidal::torsion::{embeds_in, gen_jacobian_torsion, jacobian_torsion};
use cuspidal::{Character, Modulus};

fn check_level(m: &Modulus) {
    let name = m.describe();
    let kernel = kernel_structure(m);
    let image = delta_image_structure(m);
    assert!(kernel.is_isomorphic(&gen_jacobian_torsion(m)), "{name}: kernel {kernel:?}");
    assert!(image.is_isomorphic(&expected_delta_image(m)), "{name}: image {image:?}");
    let whole = jacobian_torsion(m);
    assert_eq!(kernel.reduced_order() * image.reduced_order(), whole.reduced_order(), "{name}");
    assert!(embeds_in(&kernel, &whole), "{name}");
    for g in kernel_generators(m) {
        assert!(delta_of(m, &g).unwrap().is_zero(), "{name}: δ({g}) ≠ 0");
    }
    for d in eta_principal_divisors(m) {
        assert!(delta_of(m, &d).unwrap().is_zero(), "{name}: δ({d}) ≠ 0");
    }
    for e in Character::nontrivial(m.s()) {
        assert_eq!(delta_image_de(m, &e).unwrap(), delta_image_from_units(m, &e).unwrap(), "{name}: {e}");
    }
}

#[test]
fn number_field_levels() {
    for m in nf_squarefree_levels(120) {
        check_level(&m);
    }
}

#[test]
fn function_field_levels_larger_q() {
    for q in [5u64, 7] {
        for m in ff_squarefree_levels(q, 3).unwrap() {
            check_level(&m);
        }
    }
}

#[test]
fn function_field_levels_small_q() {
    for q in [2u64, 3, 4] {
        for m in ff_squarefree_levels(q, 3).unwrap() {
            check_level(&m);
        }
    }
}

#[test]
fn eta_lattice_matches_torsion() {
    for n in [11u64, 35, 77, 143, 385, 1001] {
        let m = Modulus::nf_level(n).unwrap();
        let oracle = cuspidal_group_oracle(&m).unwrap();
        assert!(oracle.is_isomorphic(&jacobian_torsion(&m)), "N = {n}: {oracle:?}");
    }
}
