//! Small finite fields `F_q`, `q = p^n`, with table-driven arithmetic.
//!
//! Elements are stored as an index `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`
//! where `c_i` are the coordinates in the power basis of `F_p[x]/(modulus)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field size for which tables are built.
pub const MAX_Q: u64 = 1 << 12;

/// Characteristic, degree and defining polynomial of a residue field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldParams {
    pub p: u32,
    pub n: u32,
    /// Monic irreducible polynomial of degree `n` over `F_p`, low degree
    /// first. `None` when `n == 1`.
    pub modulus: Option<Vec<u32>>,
}

impl FieldParams {
    /// Validates `p` and `modulus`. The modulus is normalized to be monic.
    pub fn new(p: u32, n: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if n == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        let q = (p as u64).checked_pow(n).filter(|&q| q <= MAX_Q);
        if q.is_none() {
            return Err(Error::InvalidField(format!(
                "q = {p}^{n} exceeds the supported maximum {MAX_Q}"
            )));
        }
        let modulus = match (n, modulus) {
            (1, None) => None,
            (1, Some(m)) => {
                // A linear modulus is harmless; ignore it after checking shape.
                if m.len() != 2 || m[1] % p == 0 {
                    return Err(Error::InvalidField("modulus degree must equal n".into()));
                }
                None
            }
            (_, None) => Some(first_irreducible(p, n)),
            (_, Some(m)) => {
                let m: Vec<u32> = m.iter().map(|c| c % p).collect();
                let mut m = trim(m);
                if m.len() != n as usize + 1 {
                    return Err(Error::InvalidField(format!(
                        "modulus has degree {}, expected {n}",
                        m.len().saturating_sub(1)
                    )));
                }
                let lead_inv = inv_mod(m[n as usize], p);
                for c in m.iter_mut() {
                    *c = (*c * lead_inv) % p;
                }
                if !is_irreducible(&m, p) {
                    return Err(Error::InvalidField(format!(
                        "modulus {m:?} is reducible over F_{p}"
                    )));
                }
                Some(m)
            }
        };
        Ok(Self { p, n, modulus })
    }

    /// Default parameters for a prime power `q`: the prime field when `q`
    /// is prime, otherwise the first monic irreducible polynomial of the
    /// right degree (coefficients enumerated low degree first).
    pub fn for_q(q: u64) -> Result<Self> {
        let (p, n) = prime_power(q)
            .ok_or_else(|| Error::InvalidField(format!("q = {q} is not a prime power")))?;
        Self::new(p, n, None)
    }

    /// Like [`FieldParams::for_q`] but with an explicit modulus.
    pub fn with_modulus(q: u64, modulus: Vec<u32>) -> Result<Self> {
        let (p, n) = prime_power(q)
            .ok_or_else(|| Error::InvalidField(format!("q = {q} is not a prime power")))?;
        Self::new(p, n, Some(modulus))
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.n)
    }
}

/// An element of `F_q`, meaningful only together with its [`Field`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Arithmetic context for `F_q`.
#[derive(Clone)]
pub struct Field {
    params: FieldParams,
    q: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field").field("params", &self.params).finish()
    }
}

impl Field {
    pub fn new(params: FieldParams) -> Self {
        let p = params.p;
        let n = params.n as usize;
        let q = params.q() as u32;
        let coords = |mut x: u32| -> Vec<u32> {
            let mut c = vec![0; n];
            for ci in c.iter_mut() {
                *ci = x % p;
                x /= p;
            }
            c
        };
        let index = |c: &[u32]| -> u32 { c.iter().rev().fold(0, |acc, &ci| acc * p + ci) };

        let qs = q as usize;
        let mut add = vec![0; qs * qs];
        let mut mul = vec![0; qs * qs];
        let mut neg = vec![0; qs];
        let mut inv = vec![0; qs];
        for a in 0..q {
            let ca = coords(a);
            neg[a as usize] = index(&ca.iter().map(|&x| (p - x) % p).collect::<Vec<_>>());
            for b in 0..q {
                let cb = coords(b);
                let s: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * qs + b as usize] = index(&s);
                let prod = match &params.modulus {
                    None => vec![(ca[0] * cb[0]) % p],
                    Some(m) => poly_mulmod(&ca, &cb, m, p),
                };
                mul[a as usize * qs + b as usize] = index(&prod);
            }
        }
        for a in 1..q {
            let b = (1..q)
                .find(|&b| mul[a as usize * qs + b as usize] == 1)
                .expect("modulus is irreducible, so every nonzero element is invertible");
            inv[a as usize] = b;
        }
        Self { params, q, add, mul, neg, inv }
    }

    /// Shorthand for `Field::new(FieldParams::for_q(q)?)`.
    pub fn for_q(q: u64) -> Result<Self> {
        Ok(Self::new(FieldParams::for_q(q)?))
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.params.p
    }

    /// All field elements, zero first.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(FieldElem)
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, x: i64) -> FieldElem {
        FieldElem(x.rem_euclid(self.params.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.add[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.mul[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.neg[a.0 as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElem(self.inv[a.0 as usize]))
    }

    /// Human-readable form: an integer for prime fields, otherwise a
    /// polynomial in the generator `a`.
    pub fn format(&self, e: FieldElem) -> String {
        let p = self.params.p;
        if self.params.n == 1 {
            return e.0.to_string();
        }
        let mut x = e.0;
        let mut terms = Vec::new();
        for i in 0..self.params.n {
            let c = x % p;
            x /= p;
            if c == 0 {
                continue;
            }
            let term = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "a".to_string(),
                (1, c) => format!("{c}a"),
                (i, 1) => format!("a^{i}"),
                (i, c) => format!("{c}a^{i}"),
            };
            terms.push(term);
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.reverse();
            terms.join("+")
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// `q = p^n` decomposition, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|&d| q.is_multiple_of(d))?;
    let mut n = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        n += 1;
    }
    (r == 1).then_some((p as u32, n))
}

fn inv_mod(a: u32, p: u32) -> u32 {
    (1..p).find(|&b| (a * b) % p == 1).expect("nonzero mod prime")
}

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Remainder of `a` modulo `b` over `F_p`; `b` must have a nonzero lead.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let dr = r.len() - 1;
        let c = (r[dr] * lead_inv) % p;
        for (i, &bi) in b.iter().enumerate() {
            let idx = dr - db + i;
            r[idx] = (r[idx] + p - (c * bi) % p) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = poly_rem(&prod, m, p);
    r.resize(m.len() - 1, 0);
    r
}

/// Exhaustive test: no monic factor of degree `1..=deg/2`.
pub(crate) fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for fd in 1..=deg / 2 {
        let count = (p as u64).pow(fd as u32);
        for idx in 0..count {
            let mut f = Vec::with_capacity(fd + 1);
            let mut x = idx;
            for _ in 0..fd {
                f.push((x % p as u64) as u32);
                x /= p as u64;
            }
            f.push(1);
            if poly_rem(m, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn first_irreducible(p: u32, n: u32) -> Vec<u32> {
    let count = (p as u64).pow(n);
    (0..count)
        .map(|idx| {
            let mut f = Vec::with_capacity(n as usize + 1);
            let mut x = idx;
            for _ in 0..n {
                f.push((x % p as u64) as u32);
                x /= p as u64;
            }
            f.push(1);
            f
        })
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}
