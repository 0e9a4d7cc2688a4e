//! Power series in one variable truncated at a tracked precision.

use crate::arith::field::Field;
use crate::arith::poly::Poly;

/// `Σ_{k<precision} c_k t^k + O(t^precision)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries<E> {
    coeffs: Vec<E>,
    precision: usize,
}

impl<E: Clone + PartialEq> TruncatedSeries<E> {
    pub fn new<F: Field<Elem = E>>(f: &F, mut coeffs: Vec<E>, precision: usize) -> Self {
        coeffs.truncate(precision);
        coeffs.resize(precision, f.zero());
        TruncatedSeries { coeffs, precision }
    }

    pub fn constant<F: Field<Elem = E>>(f: &F, c: E, precision: usize) -> Self {
        Self::new(f, vec![c], precision)
    }

    pub fn from_poly<F: Field<Elem = E>>(f: &F, p: &Poly<E>, precision: usize) -> Self {
        Self::new(f, p.coeffs().to_vec(), precision)
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// Coefficient of `t^k`, `None` beyond the known precision.
    pub fn coeff(&self, k: usize) -> Option<&E> {
        self.coeffs.get(k)
    }

    pub fn constant_term(&self) -> Option<&E> {
        self.coeffs.first()
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.coeffs.iter().all(|c| f.is_zero(c))
    }

    /// Known nonzero terms `(k, c_k)`.
    pub fn terms<'a, F: Field<Elem = E>>(&'a self, f: &'a F) -> impl Iterator<Item = (usize, &'a E)> + 'a {
        self.coeffs.iter().enumerate().filter(move |(_, c)| !f.is_zero(c))
    }

    pub fn add<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        let n = self.precision.min(other.precision);
        let v = (0..n).map(|i| f.add(&self.coeffs[i], &other.coeffs[i])).collect();
        TruncatedSeries { coeffs: v, precision: n }
    }

    pub fn mul<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        let n = self.precision.min(other.precision);
        let mut v = vec![f.zero(); n];
        for i in 0..n {
            for j in 0..n - i {
                v[i + j] = f.add(&v[i + j], &f.mul(&self.coeffs[i], &other.coeffs[j]));
            }
        }
        TruncatedSeries { coeffs: v, precision: n }
    }

    /// Multiplies by `t^k`; the precision grows by `k`.
    pub fn shift<F: Field<Elem = E>>(&self, k: usize, f: &F) -> Self {
        let mut v = vec![f.zero(); k];
        v.extend(self.coeffs.iter().cloned());
        TruncatedSeries { coeffs: v, precision: self.precision + k }
    }
}
