//! Finite fields GF(q) for small prime powers q, as explicit operation tables.
//!
//! An element is an integer in `0..q` whose base-p digits are the
//! coefficients (lowest first) of a polynomial in a fixed generator `α`
//! modulo a monic irreducible polynomial of degree r over GF(p).
//! For prime q this is the usual residue representation.

use crate::arith::factor_u64;
use crate::error::{Error, Result};

/// Largest field size we build tables for.
pub const MAX_Q: u64 = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisField {
    p: u32,
    r: u32,
    q: u32,
    /// Defining polynomial over GF(p), lowest coefficient first, monic.
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    generator: u32,
}

fn prime_poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let r = modulus.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for k in (r..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        // subtract c * x^{k-r} * modulus
        for (i, &m) in modulus.iter().enumerate() {
            let idx = k - r + i;
            prod[idx] = (prod[idx] + p - (c * m) % p) % p;
        }
    }
    prod.truncate(r);
    prod
}

fn digits(mut x: u32, p: u32, r: u32) -> Vec<u32> {
    (0..r)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Does the monic polynomial `f` over GF(p) (degree r) have a monic factor of
/// degree in `1..=r/2`? Brute force over all candidates.
fn prime_poly_irreducible(f: &[u32], p: u32) -> bool {
    let r = f.len() - 1;
    for d in 1..=r / 2 {
        for idx in 0..p.pow(d as u32) {
            let mut g = digits(idx, p, d as u32);
            g.push(1);
            // remainder of f mod g
            let mut rem = f.to_vec();
            for k in (d..rem.len()).rev() {
                let c = rem[k];
                if c == 0 {
                    continue;
                }
                for (i, &gi) in g.iter().enumerate() {
                    let idx2 = k - d + i;
                    rem[idx2] = (rem[idx2] + p - (c * gi) % p) % p;
                }
            }
            if rem[..d].iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl GaloisField {
    pub fn new(q: u64) -> Result<Self> {
        if !(2..=MAX_Q).contains(&q) {
            return Err(Error::BadFieldSize(q));
        }
        let f = factor_u64(q);
        if f.len() != 1 {
            return Err(Error::BadFieldSize(q));
        }
        let (p, r) = (f[0].0 as u32, f[0].1);
        let q = q as u32;
        let modulus = if r == 1 {
            vec![0, 1]
        } else {
            (0..p.pow(r))
                .map(|idx| {
                    let mut m = digits(idx, p, r);
                    m.push(1);
                    m
                })
                .find(|m| m[0] != 0 && prime_poly_irreducible(m, p))
                .expect("an irreducible polynomial of every degree exists")
        };
        let qs = q as usize;
        let mut add = vec![0; qs * qs];
        let mut mul = vec![0; qs * qs];
        for a in 0..q {
            let da = digits(a, p, r);
            for b in 0..q {
                let db = digits(b, p, r);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&s, p);
                let m = if r == 1 {
                    vec![(a * b) % p]
                } else {
                    prime_poly_mulmod(&da, &db, &modulus, p)
                };
                mul[(a * q + b) as usize] = undigits(&m, p);
            }
        }
        let mut neg = vec![0; qs];
        let mut inv = vec![0; qs];
        for a in 0..q {
            for b in 0..q {
                if add[(a * q + b) as usize] == 0 {
                    neg[a as usize] = b;
                }
                if mul[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b;
                }
            }
        }
        let mut field = GaloisField { p, r, q, modulus, add, mul, neg, inv, generator: 1 };
        field.generator = (1..q)
            .find(|&g| field.multiplicative_order(g) == q - 1)
            .expect("multiplicative group is cyclic");
        Ok(field)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.r
    }

    /// A primitive element of GF(q)^×.
    pub fn generator(&self) -> u32 {
        self.generator
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `a` must be nonzero.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        self.inv[a as usize]
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn multiplicative_order(&self, a: u32) -> u32 {
        assert!(a != 0);
        let mut x = a;
        let mut n = 1;
        while x != 1 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// Defining polynomial of the extension over the prime field.
    pub fn defining_polynomial(&self) -> &[u32] {
        &self.modulus
    }
}
