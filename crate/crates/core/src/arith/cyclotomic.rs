//! Exact arithmetic in cyclotomic fields `Q(ζ_n)`.
//!
//! Roots of unity follow the compatible system `ζ_{mn}^n = ζ_m`, so the value
//! `ζ_m^a` is represented in any `Q(ζ_n)` with `m | n` as `ζ_n^{a n/m}`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::field::{format_rational, Field, Rationals};
use crate::arith::poly::Poly;

/// The n-th cyclotomic polynomial over the integers (as rationals).
pub fn cyclotomic_polynomial(n: u64) -> Poly<BigRational> {
    let f = Rationals;
    let mut p = Poly::monomial(&f, f.one(), n as usize).sub(&Poly::one(&f), &f);
    for d in 1..n {
        if n % d == 0 {
            p = p.div_exact(&cyclotomic_polynomial(d), &f).expect("Φ_d divides x^n - 1");
        }
    }
    p
}

/// An element of `Q(ζ_n)` in the power basis `1, ζ_n, …, ζ_n^{φ(n)-1}`.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    fn reduced(order: u64, raw: Poly<BigRational>) -> Cyclotomic {
        let phi = cyclotomic_polynomial(order);
        let deg = phi.degree().unwrap();
        let r = raw.rem(&phi, &Rationals);
        let mut coeffs = r.into_coeffs();
        coeffs.resize(deg, BigRational::zero());
        Cyclotomic { order, coeffs }
    }

    pub fn from_rational(q: BigRational) -> Cyclotomic {
        Cyclotomic { order: 1, coeffs: vec![q] }
    }

    pub fn from_integer(n: i64) -> Cyclotomic {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Cyclotomic {
        Self::from_integer(0)
    }

    /// `ζ_order^num`.
    pub fn root_of_unity(num: i64, order: u64) -> Cyclotomic {
        assert!(order >= 1);
        let e = num.rem_euclid(order as i64) as usize;
        let f = Rationals;
        Self::reduced(order, Poly::monomial(&f, f.one(), e))
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Re-expresses `self` inside `Q(ζ_n)` for a multiple `n` of its order.
    pub fn lift_to(&self, n: u64) -> Cyclotomic {
        assert_eq!(n % self.order, 0);
        if n == self.order {
            return self.clone();
        }
        let step = (n / self.order) as usize;
        let f = Rationals;
        let mut v = vec![BigRational::zero(); step * self.coeffs.len().max(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * step] = c.clone();
        }
        Self::reduced(n, Poly::from_coeffs(&f, v))
    }

    fn common(&self, other: &Cyclotomic) -> (Cyclotomic, Cyclotomic, u64) {
        let n = self.order.lcm(&other.order);
        (self.lift_to(n), other.lift_to(n), n)
    }

    pub fn add(&self, other: &Cyclotomic) -> Cyclotomic {
        let (a, b, n) = self.common(other);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Cyclotomic { order: n, coeffs }
    }

    pub fn neg(&self) -> Cyclotomic {
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Cyclotomic) -> Cyclotomic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        let (a, b, n) = self.common(other);
        let f = Rationals;
        let pa = Poly::from_coeffs(&f, a.coeffs);
        let pb = Poly::from_coeffs(&f, b.coeffs);
        Self::reduced(n, pa.mul(&pb, &f))
    }

    pub fn scale(&self, q: &BigRational) -> Cyclotomic {
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The value as a rational, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then(|| self.coeffs[0].clone())
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let (a, b, _) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{}", format_rational(&q));
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format_rational(c),
                _ if c.is_one() => format!("z{}^{}", self.order, i),
                _ if (-c).is_one() => format!("-z{}^{}", self.order, i),
                _ => format!("{}*z{}^{}", format_rational(c), self.order, i),
            })
            .collect();
        let mut out = terms[0].clone();
        for t in &terms[1..] {
            match t.strip_prefix('-') {
                Some(rest) => out.push_str(&format!(" - {rest}")),
                None => out.push_str(&format!(" + {t}")),
            }
        }
        write!(f, "{out}")
    }
}
