//! Discriminants of polynomials in `λ` with coefficients in `GF(q)[t]`.

use crate::arith::field::Field;
use crate::arith::gf::Gf;
use crate::arith::poly::Poly;

type TPoly = Poly<u32>;

/// Determinant of a square matrix over `GF(q)[t]` by fraction-free
/// (Bareiss) elimination. The sign is not tracked.
pub fn bareiss_det_up_to_sign(mut m: Vec<Vec<TPoly>>, f: &Gf) -> TPoly {
    let n = m.len();
    if n == 0 {
        return Poly::one(f);
    }
    let mut prev = Poly::one(f);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => m.swap(k, i),
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j], f).sub(&m[i][k].mul(&m[k][j], f), f);
                m[i][j] = num.div_exact(&prev, f).expect("Bareiss quotients are exact");
            }
            m[i][k] = Poly::zero();
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].clone()
}

/// `Res_λ(a, b)` up to sign, `a` and `b` given by their `λ`-coefficients
/// (low degree first).
pub fn resultant_up_to_sign(a: &[TPoly], b: &[TPoly], f: &Gf) -> TPoly {
    let (da, db) = (a.len() - 1, b.len() - 1);
    let n = da + db;
    let mut m = vec![vec![Poly::zero(); n]; n];
    for row in 0..db {
        for (k, c) in a.iter().enumerate() {
            m[row][row + da - k] = c.clone();
        }
    }
    for row in 0..da {
        for (k, c) in b.iter().enumerate() {
            m[db + row][row + db - k] = c.clone();
        }
    }
    bareiss_det_up_to_sign(m, f)
}

/// Discriminant (up to sign) of a monic polynomial in `λ`.
pub fn discriminant(coeffs: &[TPoly], f: &Gf) -> TPoly {
    let deriv: Vec<TPoly> =
        coeffs.iter().enumerate().skip(1).map(|(k, c)| c.scale(&f.from_i64(k as i64), f)).collect();
    if deriv.len() <= 1 {
        return Poly::one(f);
    }
    resultant_up_to_sign(coeffs, &deriv, f)
}
