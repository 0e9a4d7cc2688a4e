//! Dense univariate polynomials over a [`Field`].

use crate::arith::field::Field;

/// Coefficients are stored low degree first with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + PartialEq> Poly<E> {
    pub fn from_coeffs<F: Field<Elem = E>>(f: &F, mut coeffs: Vec<E>) -> Self {
        while coeffs.last().is_some_and(|c| f.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant<F: Field<Elem = E>>(f: &F, c: E) -> Self {
        Self::from_coeffs(f, vec![c])
    }

    pub fn one<F: Field<Elem = E>>(f: &F) -> Self {
        Self::constant(f, f.one())
    }

    /// `c * x^k`.
    pub fn monomial<F: Field<Elem = E>>(f: &F, c: E, k: usize) -> Self {
        let mut v = vec![f.zero(); k + 1];
        v[k] = c;
        Self::from_coeffs(f, v)
    }

    /// `x - a`.
    pub fn linear_root<F: Field<Elem = E>>(f: &F, a: &E) -> Self {
        Poly { coeffs: vec![f.neg(a), f.one()] }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff<F: Field<Elem = E>>(&self, f: &F, k: usize) -> E {
        self.coeffs.get(k).cloned().unwrap_or_else(|| f.zero())
    }

    pub fn lead(&self) -> Option<&E> {
        self.coeffs.last()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation<F: Field<Elem = E>>(&self, f: &F) -> Option<usize> {
        self.coeffs.iter().position(|c| !f.is_zero(c))
    }

    pub fn add<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| f.add(&self.coeff(f, i), &other.coeff(f, i))).collect();
        Self::from_coeffs(f, v)
    }

    pub fn neg<F: Field<Elem = E>>(&self, f: &F) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect() }
    }

    pub fn sub<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        self.add(&other.neg(f), f)
    }

    pub fn scale<F: Field<Elem = E>>(&self, c: &E, f: &F) -> Self {
        Self::from_coeffs(f, self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    /// Multiplies by `x^k`.
    pub fn shift_up<F: Field<Elem = E>>(&self, k: usize, f: &F) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![f.zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn mul<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] = f.add(&v[i + j], &f.mul(a, b));
            }
        }
        Self::from_coeffs(f, v)
    }

    pub fn pow<F: Field<Elem = E>>(&self, e: u32, f: &F) -> Self {
        let mut acc = Self::one(f);
        for _ in 0..e {
            acc = acc.mul(self, f);
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem<F: Field<Elem = E>>(&self, d: &Self, f: &F) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv_lead = f.inv(d.lead().unwrap()).unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quo = vec![f.zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if f.is_zero(&rem[i]) {
                continue;
            }
            let c = f.mul(&rem[i], &inv_lead);
            for (j, b) in d.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = f.sub(&rem[idx], &f.mul(&c, b));
            }
            quo[i - dd] = c;
        }
        rem.truncate(dd);
        (Self::from_coeffs(f, quo), Self::from_coeffs(f, rem))
    }

    pub fn rem<F: Field<Elem = E>>(&self, d: &Self, f: &F) -> Self {
        self.divrem(d, f).1
    }

    /// Exact quotient, `None` if `d` does not divide `self`.
    pub fn div_exact<F: Field<Elem = E>>(&self, d: &Self, f: &F) -> Option<Self> {
        let (q, r) = self.divrem(d, f);
        r.is_zero().then_some(q)
    }

    pub fn monic<F: Field<Elem = E>>(&self, f: &F) -> Self {
        match self.lead() {
            None => Self::zero(),
            Some(l) => self.scale(&f.inv(l).unwrap(), f),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1, f);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1, f), f);
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1, f), f);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.lead().cloned() {
            None => (r0, s0, t0),
            Some(l) => {
                let il = f.inv(&l).unwrap();
                (r0.scale(&il, f), s0.scale(&il, f), t0.scale(&il, f))
            }
        }
    }

    pub fn derivative<F: Field<Elem = E>>(&self, f: &F) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
            .collect();
        Self::from_coeffs(f, v)
    }

    pub fn eval<F: Field<Elem = E>>(&self, x: &E, f: &F) -> E {
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        acc
    }

    /// `self(x + a)`.
    pub fn taylor_shift<F: Field<Elem = E>>(&self, a: &E, f: &F) -> Self {
        let mut v = self.coeffs.clone();
        let n = v.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = f.mul(&v[j + 1], a);
                v[j] = f.add(&v[j], &t);
            }
        }
        Self::from_coeffs(f, v)
    }

    /// Maps coefficients into another field.
    pub fn map<G: Field>(&self, g: &G, m: impl Fn(&E) -> G::Elem) -> Poly<G::Elem> {
        Poly::from_coeffs(g, self.coeffs.iter().map(m).collect())
    }

    /// `self^e mod m` by repeated squaring.
    pub fn powmod<F: Field<Elem = E>>(&self, mut e: u64, m: &Self, f: &F) -> Self {
        let mut base = self.rem(m, f);
        let mut acc = Self::one(f).rem(m, f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f).rem(m, f);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, f).rem(m, f);
            }
        }
        acc
    }

    /// Drops the largest power of `x` dividing `self`.
    pub fn strip_x_power<F: Field<Elem = E>>(&self, f: &F) -> (usize, Self) {
        match self.valuation(f) {
            None => (0, Self::zero()),
            Some(v) => (v, Poly { coeffs: self.coeffs[v..].to_vec() }),
        }
    }
}
