//! Parsing of Hecke prime selections such as `2..50`, `2..=50`, `7` or
//! `t+1,t^2+t+1`.

use cuspidal::hecke::eligible_primes;
use cuspidal::{Error, Modulus, PrimeElt, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimeSelection {
    /// all eligible primes with lo ≤ |p| ≤ hi
    Norms { lo: u64, hi: u64 },
    List(Vec<String>),
}

impl PrimeSelection {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = |reason: &str| Error::Parse { input: text.into(), reason: reason.into() };
        if let Some((a, b)) = text.split_once("..") {
            let lo = a.trim().parse::<u64>().map_err(|_| bad("range bounds must be integers"))?;
            let (hi, inclusive) = match b.strip_prefix('=') {
                Some(rest) => (rest, true),
                None => (b, false),
            };
            let hi = hi.trim().parse::<u64>().map_err(|_| bad("range bounds must be integers"))?;
            let hi = if inclusive { hi } else { hi.saturating_sub(1) };
            return Ok(PrimeSelection::Norms { lo, hi });
        }
        if text.is_empty() {
            return Err(bad("empty prime selection"));
        }
        Ok(PrimeSelection::List(text.split(',').map(|s| s.trim().to_string()).collect()))
    }

    /// Resolve against a level. Listed primes dividing N are an error;
    /// ranges silently skip them.
    pub fn resolve(&self, modulus: &Modulus) -> Result<Vec<PrimeElt>> {
        match self {
            PrimeSelection::Norms { lo, hi } => {
                let mut ps = eligible_primes(modulus, *hi)?;
                ps.retain(|p| modulus.norm(p) >= (*lo).into());
                Ok(ps)
            }
            PrimeSelection::List(items) => items
                .iter()
                .map(|t| {
                    let p = modulus.parse_prime(t)?;
                    if modulus.hecke_eligible_prime(&p) {
                        Ok(p)
                    } else {
                        Err(Error::PrimeDividesLevel(p.to_string()))
                    }
                })
                .collect(),
        }
    }
}
