//! Exact arithmetic in `F_q`, `q = p^k` with `p` an odd prime.
//!
//! Elements are stored as their rank in the lexicographic order of coordinate
//! tuples (constant coefficient first, compared first). Consequently the
//! integer order of [`FieldElement`] *is* the enumeration order, and vector
//! enumeration reduces to mixed-radix counting. Note that for `k > 1` the unit
//! element is not index 1: use [`FieldConfig::one`] and
//! [`FieldConfig::from_prime`].
//!
//! Prime fields use plain modular arithmetic. Extension fields use
//! exp/log/Zech tables built from the first primitive element in enumeration
//! order.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest extension field for which tables are built.
pub const MAX_EXTENSION_ORDER: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

const NO_LOG: u32 = u32::MAX;

enum Arith {
    Prime,
    Tables {
        exp: Vec<u32>,
        log: Vec<u32>,
        // zech[d] = log(1 + g^d), or NO_LOG when 1 + g^d = 0
        zech: Vec<u32>,
    },
}

struct Inner {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    one: u32,
    arith: Arith,
}

/// The field `F_q` together with its chosen defining polynomial.
#[derive(Clone)]
pub struct FieldConfig(Arc<Inner>);

impl fmt::Debug for FieldConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldConfig")
            .field("p", &self.p())
            .field("k", &self.k())
            .field("modulus", &self.modulus())
            .finish()
    }
}

impl PartialEq for FieldConfig {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldConfig {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Builds `F_q`. When `modulus` is omitted and `k > 1`, the lexicographically
/// smallest monic irreducible polynomial of degree `k` is used (coefficient
/// tuples compared constant term first).
pub fn make_field(p: u64, k: u32, modulus: Option<&[u32]>) -> Result<FieldConfig> {
    if p == 2 {
        return Err(Error::EvenCharacteristic);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p > u32::MAX as u64 / 2 {
        return Err(Error::FieldTooLarge(p));
    }
    if k == 0 {
        return Err(Error::ZeroDegree);
    }
    let p32 = p as u32;
    let q = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
    if k > 1 && q > MAX_EXTENSION_ORDER as u128 {
        return Err(Error::FieldTooLarge(q.min(u64::MAX as u128) as u64));
    }
    let modulus = match modulus {
        Some(m) => {
            if m.len() != k as usize + 1 {
                return Err(Error::BadModulus(format!(
                    "expected {} coefficients for degree {k}, got {}",
                    k + 1,
                    m.len()
                )));
            }
            if m[k as usize] != 1 {
                return Err(Error::BadModulus("leading coefficient must be 1".into()));
            }
            if let Some(&c) = m.iter().find(|&&c| c >= p32) {
                return Err(Error::BadModulus(format!("coefficient {c} not in [0, {p})")));
            }
            if !poly::is_irreducible(m, p32) {
                return Err(Error::ReducibleModulus { coeffs: m.to_vec(), p: p32 });
            }
            m.to_vec()
        }
        None if k == 1 => vec![0, 1],
        None => poly::smallest_irreducible(k as usize, p32),
    };
    let q = q as u32;
    let one = q / p32;
    let arith = if k == 1 { Arith::Prime } else { build_tables(p32, k, q, &modulus) };
    Ok(FieldConfig(Arc::new(Inner { p: p32, k, q, modulus, one, arith })))
}

fn build_tables(p: u32, k: u32, q: u32, modulus: &[u32]) -> Arith {
    let order = (q - 1) as usize;
    let to_index = |c: &[u32]| c.iter().fold(0u32, |acc, &d| acc * p + d);
    let from_index = |mut a: u32| {
        let mut c = vec![0u32; k as usize];
        for l in (0..k as usize).rev() {
            c[l] = a % p;
            a /= p;
        }
        c
    };
    let one = to_index(&{
        let mut c = vec![0u32; k as usize];
        c[0] = 1;
        c
    });
    // first primitive element in enumeration order
    for cand in 2..q {
        let g = from_index(cand);
        let mut exp = Vec::with_capacity(order);
        let mut cur = from_index(one);
        let mut ok = true;
        for i in 0..order {
            let idx = to_index(&cur);
            if i > 0 && idx == one {
                ok = false;
                break;
            }
            exp.push(idx);
            cur = poly::mul_mod(&cur, &g, modulus, p);
        }
        if !ok || to_index(&cur) != one {
            continue;
        }
        let mut log = vec![NO_LOG; q as usize];
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u32;
        }
        let mut zech = vec![NO_LOG; order];
        for (d, z) in zech.iter_mut().enumerate() {
            let mut c = from_index(exp[d]);
            c[0] = (c[0] + 1) % p;
            let s = to_index(&c);
            if s != 0 {
                *z = log[s as usize];
            }
        }
        return Arith::Tables { exp, log, zech };
    }
    unreachable!("F_q^* is cyclic; a primitive element exists")
}

impl FieldConfig {
    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// Defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        FieldElement(self.0.one)
    }

    /// Embeds `c mod p` from the prime subfield.
    pub fn from_prime(&self, c: i64) -> FieldElement {
        let p = self.0.p as i64;
        FieldElement((c.rem_euclid(p) as u32) * self.0.one)
    }

    /// Element with the given index in enumeration order.
    pub fn element(&self, index: u32) -> FieldElement {
        assert!(index < self.0.q, "element index {index} out of range");
        FieldElement(index)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.0.q).map(FieldElement)
    }

    /// Power-basis coordinates, constant coefficient first.
    pub fn coords(&self, a: FieldElement) -> Vec<u32> {
        let (p, k) = (self.0.p, self.0.k as usize);
        let mut c = vec![0u32; k];
        let mut v = a.0;
        for l in (0..k).rev() {
            c[l] = v % p;
            v /= p;
        }
        c
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<FieldElement> {
        if coords.len() != self.0.k as usize {
            return Err(Error::DimensionMismatch { expected: self.0.k as usize, found: coords.len() });
        }
        let p = self.0.p;
        let mut v = 0u32;
        for &c in coords {
            if c >= p {
                return Err(Error::BadParameter(format!("coordinate {c} not in [0, {p})")));
            }
            v = v * p + c;
        }
        Ok(FieldElement(v))
    }

    /// Coordinates as a plain integer for prime fields, `[c0,...]` otherwise.
    pub fn format(&self, a: FieldElement) -> String {
        if self.0.k == 1 {
            a.0.to_string()
        } else {
            let c: Vec<String> = self.coords(a).iter().map(|c| c.to_string()).collect();
            format!("[{}]", c.join(","))
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.0.arith {
            Arith::Prime => {
                let s = a.0 + b.0;
                FieldElement(if s >= self.0.p { s - self.0.p } else { s })
            }
            Arith::Tables { exp, log, zech } => {
                if a.0 == 0 {
                    return b;
                }
                if b.0 == 0 {
                    return a;
                }
                let n = self.0.q - 1;
                let (la, lb) = (log[a.0 as usize], log[b.0 as usize]);
                let d = if lb >= la { lb - la } else { lb + n - la };
                let z = zech[d as usize];
                if z == NO_LOG {
                    FieldElement::ZERO
                } else {
                    let e = la + z;
                    FieldElement(exp[(if e >= n { e - n } else { e }) as usize])
                }
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if a.0 == 0 {
            return a;
        }
        match &self.0.arith {
            Arith::Prime => FieldElement(self.0.p - a.0),
            Arith::Tables { exp, log, .. } => {
                let n = self.0.q - 1;
                let e = log[a.0 as usize] + n / 2;
                FieldElement(exp[(if e >= n { e - n } else { e }) as usize])
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.0.arith {
            Arith::Prime => FieldElement(((a.0 as u64 * b.0 as u64) % self.0.p as u64) as u32),
            Arith::Tables { exp, log, .. } => {
                if a.0 == 0 || b.0 == 0 {
                    return FieldElement::ZERO;
                }
                let n = self.0.q - 1;
                let e = log[a.0 as usize] + log[b.0 as usize];
                FieldElement(exp[(if e >= n { e - n } else { e }) as usize])
            }
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0.arith {
            Arith::Prime => {
                let p = self.0.p as u64;
                let (mut base, mut e, mut acc) = (a.0 as u64, p - 2, 1u64);
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc * base % p;
                    }
                    base = base * base % p;
                    e >>= 1;
                }
                FieldElement(acc as u32)
            }
            Arith::Tables { exp, log, .. } => {
                let n = self.0.q - 1;
                let l = log[a.0 as usize];
                FieldElement(exp[((n - l) % n) as usize])
            }
        })
    }

    /// `Σ a_i b_i`.
    pub fn dot(&self, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
        a.iter().zip(b).fold(FieldElement::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    pub fn scale(&self, c: FieldElement, v: &[FieldElement]) -> Vec<FieldElement> {
        v.iter().map(|&x| self.mul(c, x)).collect()
    }

    /// `acc += c * v`, componentwise.
    pub fn axpy(&self, acc: &mut [FieldElement], c: FieldElement, v: &[FieldElement]) {
        if c.is_zero() {
            return;
        }
        for (a, &x) in acc.iter_mut().zip(v) {
            *a = self.add(*a, self.mul(c, x));
        }
    }

    /// Number of points in `F_q^dim`, or `None` on overflow.
    pub fn space_size(&self, dim: usize) -> Option<u64> {
        (self.0.q as u64).checked_pow(dim as u32)
    }

    /// Writes the vector with the given rank in enumeration order.
    pub fn decode_vector(&self, mut index: u64, out: &mut [FieldElement]) {
        let q = self.0.q as u64;
        for slot in out.iter_mut().rev() {
            *slot = FieldElement((index % q) as u32);
            index /= q;
        }
    }

    /// Rank of a vector in enumeration order.
    pub fn encode_vector(&self, v: &[FieldElement]) -> u64 {
        let q = self.0.q as u64;
        v.iter().fold(0u64, |acc, x| acc * q + x.0 as u64)
    }
}

/// All `q^b` vectors of `F_q^b` in lexicographic order of their concatenated
/// coordinate lists, zero vector first.
pub fn enumerate_vectors(cfg: &FieldConfig, b: usize) -> VectorIter {
    VectorIter { q: cfg.q(), current: vec![FieldElement::ZERO; b], done: false }
}

pub struct VectorIter {
    q: u32,
    current: Vec<FieldElement>,
    done: bool,
}

impl Iterator for VectorIter {
    type Item = Vec<FieldElement>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        self.done = true;
        for slot in self.current.iter_mut().rev() {
            if slot.0 + 1 < self.q {
                slot.0 += 1;
                self.done = false;
                break;
            }
            slot.0 = 0;
        }
        Some(out)
    }
}

/// Polynomials over `F_p`, constant term first. Used only to validate and
/// select defining polynomials.
mod poly {
    fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let mut r: Vec<u64> = a.to_vec();
        trim(&mut r);
        let df = f.len() - 1;
        let lead_inv = inv(f[df], p);
        while r.len() > df {
            let shift = r.len() - 1 - df;
            let c = r[r.len() - 1] * lead_inv % p;
            for (i, &fi) in f.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * fi % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    fn inv(a: u64, p: u64) -> u64 {
        let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    }

    fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        out
    }

    fn pow_mod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, f, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &b, p), f, p);
            }
            b = rem(&mul(&b, &b, p), f, p);
            e >>= 1;
        }
        acc
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut x, mut y) = (a.to_vec(), b.to_vec());
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// `X^(p^j) mod f` for `j = 0..=k`.
    fn frobenius_powers(f: &[u64], k: usize, p: u64) -> Vec<Vec<u64>> {
        let mut out = vec![rem(&[0, 1], f, p)];
        for _ in 0..k {
            let last = out.last().unwrap();
            out.push(pow_mod(last, p, f, p));
        }
        out
    }

    /// Rabin's test: `f | X^(p^k) - X` and `gcd(f, X^(p^(k/r)) - X) = 1` for
    /// every prime `r | k`.
    pub(super) fn is_irreducible(f: &[u32], p: u32) -> bool {
        let p = p as u64;
        let f: Vec<u64> = f.iter().map(|&c| c as u64).collect();
        let k = f.len() - 1;
        if k == 1 {
            return true;
        }
        let fp = frobenius_powers(&f, k, p);
        let minus_x = |h: &[u64]| {
            let mut h = h.to_vec();
            h.resize(h.len().max(2), 0);
            h[1] = (h[1] + p - 1) % p;
            trim(&mut h);
            h
        };
        if !minus_x(&fp[k]).is_empty() {
            return false;
        }
        for r in super::prime_factors(k as u64) {
            let h = minus_x(&fp[k / r as usize]);
            if gcd(&f, &h, p).len() != 1 {
                return false;
            }
        }
        true
    }

    pub(super) fn smallest_irreducible(k: usize, p: u32) -> Vec<u32> {
        let total = (p as u64).pow(k as u32);
        for rank in 0..total {
            // rank in lex order with c0 most significant
            let mut c = vec![0u32; k + 1];
            let mut r = rank;
            for l in (0..k).rev() {
                c[l] = (r % p as u64) as u32;
                r /= p as u64;
            }
            c[k] = 1;
            if c[0] != 0 && is_irreducible(&c, p) {
                return c;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub(super) fn mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        let a: Vec<u64> = a.iter().map(|&x| x as u64).collect();
        let b: Vec<u64> = b.iter().map(|&x| x as u64).collect();
        let f64_: Vec<u64> = f.iter().map(|&x| x as u64).collect();
        let r = rem(&mul(&a, &b, p as u64), &f64_, p as u64);
        let mut out = vec![0u32; f.len() - 1];
        for (i, &x) in r.iter().enumerate() {
            out[i] = x as u32;
        }
        out
    }
}
