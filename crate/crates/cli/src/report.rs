//! `torsion` and `delta` reports.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use cuspidal::arith::prime_divisors;
use cuspidal::delta::{
    c_constant, delta_basis_element, delta_image_de, delta_order_de, kernel_generators, kernel_structure, DeltaTerm,
};
use cuspidal::serde_int::JsonInt;
use cuspidal::sublattice::d2_standard_basis;
use cuspidal::torsion::{
    cuspidal_ell_part, d_of_char, epart_table, gen_jacobian_ell_part, gen_jacobian_torsion, jacobian_torsion,
    prime_level_torsion_order, EPartTable,
};
use cuspidal::{Character, Divisor, Error, LocalizedAbelianGroup, Modulus, Result, Setting, WElem};

use crate::table::{aligned, csv};
use crate::Format;

/// Rendered in place of a value outside the range of the known results.
pub const EXCLUDED: &str = "unknown (excluded case)";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelInfo {
    pub setting: Setting,
    pub level: String,
    pub primes: Vec<String>,
    pub norms: Vec<JsonInt>,
}

impl LevelInfo {
    pub fn of(modulus: &Modulus) -> Self {
        LevelInfo {
            setting: modulus.setting(),
            level: modulus.level().to_string(),
            primes: modulus.primes().iter().map(|p| p.to_string()).collect(),
            norms: modulus.norms().into_iter().map(JsonInt).collect(),
        }
    }

    fn header(&self) -> String {
        format!("{} N = {} = {}", self.setting, self.level, self.primes.join(" · "))
    }
}

/// Order of C{ℓ}^e, or `None` with a reason when the case is not covered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllPartRow {
    pub ell: u64,
    pub character: Character,
    pub order: Option<JsonInt>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenEllPartRow {
    pub ell: u64,
    pub group: Option<LocalizedAbelianGroup>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionReport {
    pub level: LevelInfo,
    pub jacobian: LocalizedAbelianGroup,
    pub generalized: LocalizedAbelianGroup,
    pub prime_level_order: Option<JsonInt>,
    pub epart: EPartTable,
    pub ell_parts: Vec<EllPartRow>,
    pub generalized_ell_parts: Vec<GenEllPartRow>,
}

fn excluded_note(err: Error) -> Result<String> {
    match err {
        Error::ExcludedCase(why) => Ok(why),
        other => Err(other),
    }
}

/// Odd primes worth tabulating: 3, and the odd primes dividing some d(e).
fn interesting_ells(modulus: &Modulus) -> BTreeSet<u64> {
    let mut out = BTreeSet::from([3]);
    for e in Character::nontrivial(modulus.s()) {
        out.extend(prime_divisors(&d_of_char(modulus, &e)).into_iter().filter(|&l| l != 2));
    }
    out
}

impl TorsionReport {
    /// `invert` lists primes inverted on top of those dividing a.
    pub fn build(modulus: &Modulus, invert: &BTreeSet<u64>) -> Result<Self> {
        let jacobian = jacobian_torsion(modulus).localize(invert.iter().copied());
        let generalized = gen_jacobian_torsion(modulus).localize(invert.iter().copied());
        let prime_level_order = match prime_level_torsion_order(modulus) {
            Ok(n) => Some(JsonInt(n)),
            Err(Error::NotPrimeLevel(_)) => None,
            Err(e) => return Err(e),
        };
        let mut ell_parts = Vec::new();
        for ell in interesting_ells(modulus) {
            for e in Character::nontrivial(modulus.s()) {
                let (order, note) = match cuspidal_ell_part(modulus, ell, &e) {
                    Ok(n) => (Some(JsonInt(n)), None),
                    Err(err) => (None, Some(excluded_note(err)?)),
                };
                ell_parts.push(EllPartRow { ell, character: e, order, note });
            }
        }
        let gen_ells: Vec<u64> = match modulus.setting() {
            Setting::Nf => vec![3],
            Setting::Ff { q } => prime_divisors(&BigInt::from(q + 1)).into_iter().filter(|&l| l != 2).collect(),
        };
        let mut generalized_ell_parts = Vec::new();
        for ell in gen_ells {
            let (group, note) = match gen_jacobian_ell_part(modulus, ell) {
                Ok(g) => (Some(g), None),
                Err(err) => (None, Some(excluded_note(err)?)),
            };
            generalized_ell_parts.push(GenEllPartRow { ell, group, note });
        }
        let mut epart = epart_table(modulus);
        let inverted: BTreeSet<u64> = epart.inverted.union(invert).copied().collect();
        if inverted != epart.inverted {
            for entry in epart.entries.values_mut() {
                entry.jacobian = cuspidal::arith::strip_primes(&entry.jacobian, &inverted);
                entry.generalized = cuspidal::arith::strip_primes(&entry.generalized, &inverted);
            }
            epart.inverted = inverted;
        }
        Ok(TorsionReport {
            level: LevelInfo::of(modulus),
            jacobian,
            generalized,
            prime_level_order,
            epart,
            ell_parts,
            generalized_ell_parts,
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("serializable") + "\n",
            Format::Csv => {
                let rows: Vec<Vec<String>> = self
                    .epart
                    .entries
                    .iter()
                    .map(|(e, x)| vec![e.to_string(), x.d.to_string(), x.jacobian.to_string(), x.generalized.to_string()])
                    .collect();
                csv(&["character", "d", "jacobian", "generalized"], &rows)
            }
            Format::Text => self.text(),
        }
    }

    fn text(&self) -> String {
        let radical: BigInt = self.epart.inverted.iter().map(|&p| BigInt::from(p)).product();
        let away = format!("ℤ[1/{radical}]");
        let mut out = format!("{}\n\n", self.level.header());
        out += &format!("J(F)_Tor ⊗ {away}: {}\n", group_text(&self.jacobian));
        out += &format!("  M_1 integral: {}\n", integral_text(&self.jacobian));
        if let Some(n) = &self.prime_level_order {
            out += &format!("  full order at prime level: {}\n", n.0);
        }
        out += &format!("J̃(F)_Tor ⊗ {away}: {}\n", group_text(&self.generalized));
        out += &format!("  M_2 integral: {}\n\n", integral_text(&self.generalized));
        let rows: Vec<Vec<String>> = self
            .epart
            .entries
            .iter()
            .map(|(e, x)| vec![e.to_string(), x.d.to_string(), x.jacobian.to_string(), x.generalized.to_string()])
            .collect();
        out += &aligned(&["e", "d(e)", "#J^e", "#J̃^e"], &rows);
        if !self.ell_parts.is_empty() {
            out += "\n";
            let rows: Vec<Vec<String>> = self
                .ell_parts
                .iter()
                .map(|r| {
                    let v = r.order.as_ref().map_or(EXCLUDED.to_string(), |n| n.0.to_string());
                    vec![r.ell.to_string(), r.character.to_string(), v]
                })
                .collect();
            out += &aligned(&["ℓ", "e", "#C{ℓ}^e"], &rows);
        }
        for r in &self.generalized_ell_parts {
            let v = r.group.as_ref().map_or(EXCLUDED.to_string(), integral_text);
            out += &format!("\nJ̃(F){{{}}}: {v}\n", r.ell);
        }
        out
    }
}

fn group_text(g: &LocalizedAbelianGroup) -> String {
    let r = g.reduced();
    if r.is_empty() {
        "0".into()
    } else {
        r.iter().map(|n| format!("ℤ/{n}")).collect::<Vec<_>>().join(" ⊕ ")
    }
}

fn integral_text(g: &LocalizedAbelianGroup) -> String {
    group_text(&LocalizedAbelianGroup::integral(g.invariant_factors()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaRow {
    pub character: Character,
    pub d: JsonInt,
    pub order: JsonInt,
    /// c(e, w_∞) in factored form
    pub c_at_infinity: String,
    pub image: Vec<DeltaTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisRow {
    /// 1-based index of p_i
    pub i: usize,
    pub m: String,
    pub order: JsonInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaReport {
    pub level: LevelInfo,
    pub characters: Vec<DeltaRow>,
    pub basis: Vec<BasisRow>,
    pub kernel_generators: Vec<Divisor>,
    pub kernel: LocalizedAbelianGroup,
    pub m2: LocalizedAbelianGroup,
    pub kernel_matches: bool,
}

impl DeltaReport {
    pub fn build(modulus: &Modulus, invert: &BTreeSet<u64>) -> Result<Self> {
        let s = modulus.s();
        let mut characters = Vec::new();
        for e in Character::nontrivial(s) {
            characters.push(DeltaRow {
                character: e,
                d: JsonInt(d_of_char(modulus, &e)),
                order: JsonInt(delta_order_de(modulus, &e)?),
                c_at_infinity: c_constant(modulus, &e, WElem::all_ones(s))?.to_string(),
                image: delta_image_de(modulus, &e)?.terms(),
            });
        }
        let mut basis = Vec::new();
        for b in d2_standard_basis(modulus) {
            let (_, order) = delta_basis_element(modulus, b.i, &b.m)?;
            basis.push(BasisRow { i: b.i + 1, m: b.m.to_string(), order: JsonInt(order) });
        }
        let kernel = kernel_structure(modulus).localize(invert.iter().copied());
        let m2 = gen_jacobian_torsion(modulus).localize(invert.iter().copied());
        Ok(DeltaReport {
            level: LevelInfo::of(modulus),
            characters,
            basis,
            kernel_generators: kernel_generators(modulus),
            kernel_matches: kernel.is_isomorphic(&m2),
            kernel,
            m2,
        })
    }

    pub fn render(&self, format: Format) -> String {
        let rows: Vec<Vec<String>> = self
            .characters
            .iter()
            .map(|r| vec![r.character.to_string(), r.d.0.to_string(), r.order.0.to_string(), r.c_at_infinity.clone()])
            .collect();
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("serializable") + "\n",
            Format::Csv => csv(&["character", "d", "delta_order", "c_at_infinity"], &rows),
            Format::Text => {
                let mut out = format!("{}\n\n", self.level.header());
                out += &aligned(&["e", "d(e)", "ord δ(D^e)", "c(e, w_∞)"], &rows);
                out += "\nδ(D^e) ≠ 0:\n";
                for r in self.characters.iter().filter(|r| !r.image.is_empty()) {
                    let terms: Vec<String> =
                        r.image.iter().map(|t| format!("[{}] ⊗ {} ⊗ {}", t.cusp, t.prime, t.exponent)).collect();
                    out += &format!("  {}: {}\n", r.character, terms.join(" + "));
                }
                out += "\n";
                let brows: Vec<Vec<String>> =
                    self.basis.iter().map(|b| vec![b.i.to_string(), b.m.clone(), b.order.0.to_string()]).collect();
                out += &aligned(&["i", "m", "ord δ([1/m] - [1/(m p_i)])"], &brows);
                out += "\nC ∩ ker δ generated by:\n";
                for d in &self.kernel_generators {
                    out += &format!("  {d}\n");
                }
                out += &format!(
                    "\n(C ∩ ker δ) away from a: {}\nM_2 away from a:         {}\nmatch: {}\n",
                    group_text(&self.kernel),
                    group_text(&self.m2),
                    if self.kernel_matches { "yes" } else { "NO" }
                );
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torsion_eleven() {
        let r = TorsionReport::build(&Modulus::nf_level(11).unwrap(), &BTreeSet::new()).unwrap();
        assert_eq!(r.jacobian.reduced(), vec![BigInt::from(5)]);
        assert!(r.generalized.is_trivial());
        assert_eq!(r.prime_level_order, Some(JsonInt(5.into())));
        let text = r.render(Format::Text);
        assert!(text.contains("J(F)_Tor ⊗ ℤ[1/6]: ℤ/5"), "{text}");
    }

    #[test]
    fn excluded_cases_are_rows() {
        let r = TorsionReport::build(&Modulus::nf_level(15).unwrap(), &BTreeSet::new()).unwrap();
        assert!(r.ell_parts.iter().any(|row| row.ell == 3 && row.order.is_none()));
        assert!(r.render(Format::Text).contains(EXCLUDED));
    }

    #[test]
    fn extra_inversion() {
        let r = TorsionReport::build(&Modulus::nf_level(11).unwrap(), &BTreeSet::from([5])).unwrap();
        assert!(r.jacobian.is_trivial());
        assert!(r.epart.entries.values().all(|x| x.jacobian == BigInt::from(1)));
    }

    #[test]
    fn delta_eleven() {
        let r = DeltaReport::build(&Modulus::nf_level(11).unwrap(), &BTreeSet::new()).unwrap();
        assert_eq!(r.characters.len(), 1);
        assert_eq!(r.characters[0].order, JsonInt(5.into()));
        assert_eq!(r.characters[0].c_at_infinity, "11^-12");
        assert!(r.kernel_matches);
    }
}
