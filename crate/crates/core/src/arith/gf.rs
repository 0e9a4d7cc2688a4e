//! Small finite fields `GF(p^k)` backed by exponential/logarithm tables.
//!
//! An element is encoded as a `u32` whose base-`p` digits are the
//! coefficients of its polynomial representative, so the prime subfield is
//! encoded by the integers `0..p` and addition is digit-wise.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::arith::field::Field;
use crate::error::{Error, Result};

/// Largest field size for which tables are built.
pub const MAX_FIELD_SIZE: u64 = 1 << 22;

struct Tables {
    p: u32,
    k: u32,
    size: u32,
    /// `exp[i] = g^i` for `i < 2(size-1)`.
    exp: Vec<u32>,
    /// `log[a]` for nonzero `a`.
    log: Vec<u32>,
    /// Monic defining polynomial over the prime field, low degree first.
    modulus: Vec<u32>,
}

#[derive(Clone)]
pub struct Gf {
    t: Arc<Tables>,
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.t.p, self.t.k)
    }
}

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        self.t.p == other.t.p && self.t.k == other.t.k && self.t.modulus == other.t.modulus
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^k`, returning `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    if r == 1 && is_prime(p) {
        Some((p, k))
    } else {
        None
    }
}

impl Gf {
    /// Builds `GF(q)` for a prime power `q`.
    pub fn new(q: u64) -> Result<Gf> {
        let (p, k) = prime_power(q).ok_or_else(|| Error::InvalidInput(format!("{q} is not a prime power")))?;
        Self::with_degree(p, k)
    }

    pub fn with_degree(p: u64, k: u32) -> Result<Gf> {
        if !is_prime(p) || k == 0 {
            return Err(Error::InvalidInput(format!("GF({p}^{k}) is not a field")));
        }
        let size = p
            .checked_pow(k)
            .filter(|&s| s <= MAX_FIELD_SIZE)
            .ok_or_else(|| Error::Resource(format!("field GF({p}^{k}) exceeds the table limit")))?;
        let (p, size) = (p as u32, size as u32);
        let n = (size - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; size as usize];

        let modulus = if k == 1 {
            let g = (1..p.max(2))
                .find(|&g| fill_prime_tables(p, g, &mut exp, &mut log))
                .expect("a prime field has a primitive root");
            vec![p - g, 1]
        } else {
            let mut found = None;
            for idx in 0..size {
                let mut low = digits(idx, p, k);
                if low[0] == 0 {
                    continue;
                }
                low.push(1);
                if fill_extension_tables(p, k, &low, &mut exp, &mut log) {
                    found = Some(low);
                    break;
                }
            }
            found.expect("a primitive polynomial exists in every degree")
        };
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        Ok(Gf {
            t: Arc::new(Tables { p, k, size, exp, log, modulus }),
        })
    }

    pub fn p(&self) -> u32 {
        self.t.p
    }

    pub fn degree(&self) -> u32 {
        self.t.k
    }

    pub fn size(&self) -> u32 {
        self.t.size
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.t.size
    }

    /// A generator of the multiplicative group.
    pub fn generator(&self) -> u32 {
        self.t.exp[if self.t.size > 2 { 1 } else { 0 }]
    }

    /// Defining polynomial over the prime field (low degree first, monic).
    pub fn modulus(&self) -> &[u32] {
        &self.t.modulus
    }

    /// Whether `a` lies in the subfield with `sub` elements.
    pub fn in_subfield(&self, a: u32, sub: u64) -> bool {
        self.pow(&a, sub) == a
    }

    /// `GF(q^m)` together with an embedding of `self` into it.
    pub fn extension(&self, m: u32) -> Result<(Gf, Embedding)> {
        let big = Gf::with_degree(self.t.p as u64, self.t.k * m)?;
        let emb = Embedding::new(self, &big);
        Ok((big, emb))
    }
}

fn digits(mut v: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn fill_prime_tables(p: u32, g: u32, exp: &mut [u32], log: &mut [u32]) -> bool {
    let n = (p - 1) as usize;
    if p == 2 {
        exp[0] = 1;
        log[1] = 0;
        return true;
    }
    let mut cur: u64 = 1;
    for i in 0..n {
        if i > 0 && cur == 1 {
            return false;
        }
        exp[i] = cur as u32;
        log[cur as usize] = i as u32;
        cur = cur * g as u64 % p as u64;
    }
    cur == 1
}

/// Multiplies by `x` repeatedly modulo `modulus`; succeeds iff `x` has order `p^k - 1`.
fn fill_extension_tables(p: u32, k: u32, modulus: &[u32], exp: &mut [u32], log: &mut [u32]) -> bool {
    let size = p.pow(k);
    let n = (size - 1) as usize;
    let mut cur = vec![0u32; k as usize];
    cur[0] = 1;
    let encode = |d: &[u32]| d.iter().rev().fold(0u32, |acc, &x| acc * p + x);
    for i in 0..n {
        let e = encode(&cur);
        if i > 0 && e == 1 {
            return false;
        }
        exp[i] = e;
        log[e as usize] = i as u32;
        let top = cur[k as usize - 1];
        for j in (1..k as usize).rev() {
            cur[j] = cur[j - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for j in 0..k as usize {
                cur[j] = (cur[j] + (p - top) * modulus[j] % p) % p;
            }
        }
    }
    encode(&cur) == 1
}

impl Field for Gf {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let p = self.t.p;
        if self.t.k == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        if p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (*a, *b);
        let (mut out, mut place) = (0u32, 1u32);
        while a > 0 || b > 0 {
            let d = (a % p + b % p) % p;
            out += d * place;
            place *= p;
            a /= p;
            b /= p;
        }
        out
    }
    fn neg(&self, a: &u32) -> u32 {
        let p = self.t.p;
        if self.t.k == 1 {
            return if *a == 0 { 0 } else { p - a };
        }
        if p == 2 {
            return *a;
        }
        let mut a = *a;
        let (mut out, mut place) = (0u32, 1u32);
        while a > 0 {
            let d = a % p;
            out += ((p - d) % p) * place;
            place *= p;
            a /= p;
        }
        out
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        if *a == 0 || *b == 0 {
            return 0;
        }
        let t = &self.t;
        t.exp[(t.log[*a as usize] + t.log[*b as usize]) as usize]
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        let t = &self.t;
        let n = t.size - 1;
        Some(t.exp[((n - t.log[*a as usize]) % n) as usize])
    }
    fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.t.p as i64) as u32
    }
    fn characteristic(&self) -> u64 {
        self.t.p as u64
    }
    fn order(&self) -> Option<u64> {
        Some(self.t.size as u64)
    }
    fn describe(&self) -> String {
        format!("GF({})", self.t.size)
    }
    /// Prime-field elements print as integers; extension elements as
    /// polynomials in the generator `a` of the defining modulus.
    fn format(&self, x: &u32) -> String {
        let (p, k) = (self.t.p, self.t.k);
        if k == 1 {
            return x.to_string();
        }
        let mut digits = Vec::new();
        let mut v = *x;
        for _ in 0..k {
            digits.push(v % p);
            v /= p;
        }
        let terms: Vec<String> = digits
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &d)| d != 0)
            .map(|(i, &d)| match (i, d) {
                (0, _) => d.to_string(),
                (1, 1) => "a".to_string(),
                (1, _) => format!("{d}a"),
                (_, 1) => format!("a^{i}"),
                _ => format!("{d}a^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn pow(&self, a: &u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if *a == 0 {
            return 0;
        }
        let t = &self.t;
        let n = (t.size - 1) as u64;
        t.exp[((t.log[*a as usize] as u64 * (e % n)) % n) as usize]
    }
}

/// A field embedding `GF(q) -> GF(q^m)`.
#[derive(Clone, Debug)]
pub struct Embedding {
    forward: Vec<u32>,
    backward: HashMap<u32, u32>,
}

impl Embedding {
    fn new(small: &Gf, big: &Gf) -> Embedding {
        let q = small.size();
        let forward: Vec<u32> = if small.degree() == 1 {
            (0..q).collect()
        } else {
            // A root of the small field's defining polynomial inside `big`.
            let step = (big.size() - 1) / (q - 1);
            let modulus = small.modulus();
            let theta = (1..q)
                .map(|j| big.pow(&big.generator(), (j * step) as u64))
                .find(|&th| {
                    let mut acc = 0u32;
                    for c in modulus.iter().rev() {
                        acc = big.add(&big.mul(&acc, &th), c);
                    }
                    acc == 0
                })
                .expect("defining polynomial splits in the extension");
            let k = small.degree();
            (0..q)
                .map(|v| {
                    let d = digits(v, small.p(), k);
                    let mut acc = 0u32;
                    for c in d.iter().rev() {
                        acc = big.add(&big.mul(&acc, &theta), c);
                    }
                    acc
                })
                .collect()
        };
        let backward = forward.iter().enumerate().map(|(i, &b)| (b, i as u32)).collect();
        Embedding { forward, backward }
    }

    pub fn map(&self, a: u32) -> u32 {
        self.forward[a as usize]
    }

    /// Preimage of `b` if it lies in the small field.
    pub fn preimage(&self, b: u32) -> Option<u32> {
        self.backward.get(&b).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_field_axioms(f: &Gf) {
        for a in f.elements() {
            assert_eq!(f.add(&a, &f.neg(&a)), 0);
            if a != 0 {
                assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
            }
        }
        let els: Vec<u32> = f.elements().collect();
        for &a in els.iter().step_by(3) {
            for &b in els.iter().step_by(5) {
                for &c in els.iter().step_by(7) {
                    let lhs = f.mul(&a, &f.add(&b, &c));
                    let rhs = f.add(&f.mul(&a, &b), &f.mul(&a, &c));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn small_fields_are_fields() {
        for q in [2, 3, 4, 5, 7, 8, 9, 25, 27, 49] {
            check_field_axioms(&Gf::new(q).unwrap());
        }
    }

    #[test]
    fn prime_field_encoding_is_natural() {
        let f = Gf::new(7).unwrap();
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.add(&4, &5), 2);
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        for q in [3u64, 4, 5, 9] {
            let small = Gf::new(q).unwrap();
            let (big, emb) = small.extension(2).unwrap();
            for a in small.elements() {
                for b in small.elements() {
                    assert_eq!(emb.map(small.mul(&a, &b)), big.mul(&emb.map(a), &emb.map(b)));
                    assert_eq!(emb.map(small.add(&a, &b)), big.add(&emb.map(a), &emb.map(b)));
                }
                assert!(big.in_subfield(emb.map(a), q));
                assert_eq!(emb.preimage(emb.map(a)), Some(a));
            }
        }
    }
}
