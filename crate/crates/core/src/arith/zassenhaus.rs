//! Irreducible factorization over the rationals (Zassenhaus): factor modulo a
//! good prime, Hensel-lift to beyond the Mignotte bound, recombine.
//!
//! Only the degrees of the irreducible factors are needed downstream, but the
//! factors themselves are produced so the result can be checked by
//! multiplication.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::factor::{factor_squarefree, is_squarefree};
use crate::arith::field::Rationals;
use crate::arith::gf::Gf;
use crate::arith::poly::Poly;

type IntPoly = Vec<BigInt>;

fn trim(mut v: IntPoly) -> IntPoly {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn int_mul(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn reduce(v: &[BigInt], m: &BigInt) -> IntPoly {
    trim(v.iter().map(|c| c.mod_floor(m)).collect())
}

fn symmetric(v: &[BigInt], m: &BigInt) -> IntPoly {
    let half: BigInt = m >> 1;
    trim(
        v.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn primitive(v: IntPoly) -> IntPoly {
    let c = content(&v);
    if c.is_zero() {
        return v;
    }
    let sign = if v.last().is_some_and(|l| l.is_negative()) { -BigInt::one() } else { BigInt::one() };
    v.into_iter().map(|x| x / &c * &sign).collect()
}

fn to_rational_poly(v: &[BigInt]) -> Poly<BigRational> {
    Poly::from_coeffs(&Rationals, v.iter().map(|c| BigRational::from_integer(c.clone())).collect())
}

/// Clears denominators and content: a primitive integer polynomial with
/// positive leading coefficient.
pub fn to_primitive_integer(p: &Poly<BigRational>) -> IntPoly {
    let l = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    primitive(p.coeffs().iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect())
}

fn exact_int_div(f: &[BigInt], g: &[BigInt]) -> Option<IntPoly> {
    let (q, r) = to_rational_poly(f).divrem(&to_rational_poly(g), &Rationals);
    if !r.is_zero() || q.coeffs().iter().any(|c| !c.is_integer()) {
        return None;
    }
    Some(q.coeffs().iter().map(|c| c.to_integer()).collect())
}

fn to_gf(v: &[BigInt], f: &Gf) -> Poly<u32> {
    let p = BigInt::from(f.p());
    Poly::from_coeffs(f, v.iter().map(|c| c.mod_floor(&p).to_u32().unwrap()).collect())
}

fn from_gf(v: &Poly<u32>) -> IntPoly {
    v.coeffs().iter().map(|&c| BigInt::from(c)).collect()
}

fn odd_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&n| (3..).step_by(2).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

/// Lifts `f ≡ g0 * h0 (mod p)` (all monic) to a factorization modulo `p^k`.
fn lift_pair(f: &[BigInt], g0: &Poly<u32>, h0: &Poly<u32>, fp: &Gf, k: u32) -> (IntPoly, IntPoly) {
    let p = BigInt::from(fp.p());
    let (one, s, t) = g0.ext_gcd(h0, fp);
    debug_assert_eq!(one.degree(), Some(0));
    let (mut g, mut h) = (from_gf(g0), from_gf(h0));
    let mut pj = p.clone();
    for _ in 1..k {
        let next = &pj * &p;
        let prod = int_mul(&g, &h);
        let n = f.len().max(prod.len());
        let diff: IntPoly = (0..n)
            .map(|i| {
                let a = f.get(i).cloned().unwrap_or_default();
                let b = prod.get(i).cloned().unwrap_or_default();
                (a - b).mod_floor(&next) / &pj
            })
            .collect();
        let e = to_gf(&diff, fp);
        let dg = t.mul(&e, fp).rem(g0, fp);
        let dh = s.mul(&e, fp).rem(h0, fp);
        for (i, c) in dg.coeffs().iter().enumerate() {
            g[i] += &pj * BigInt::from(*c);
        }
        for (i, c) in dh.coeffs().iter().enumerate() {
            h[i] += &pj * BigInt::from(*c);
        }
        pj = next;
    }
    (g, h)
}

fn lift_all(f: &[BigInt], factors: &[Poly<u32>], fp: &Gf, k: u32, m: &BigInt) -> Vec<IntPoly> {
    if factors.len() == 1 {
        return vec![reduce(f, m)];
    }
    let rest = factors[1..].iter().fold(Poly::one(fp), |a, b| a.mul(b, fp));
    let (g, h) = lift_pair(f, &factors[0], &rest, fp, k);
    let mut out = vec![reduce(&g, m)];
    out.extend(lift_all(&reduce(&h, m), &factors[1..], fp, k, m));
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Irreducible factors over the rationals of a squarefree polynomial, as
/// primitive integer polynomials.
pub fn factor_squarefree_rational(p: &Poly<BigRational>) -> Vec<IntPoly> {
    let f = to_primitive_integer(p);
    let n = f.len().saturating_sub(1);
    if n <= 1 {
        return if n == 1 { vec![f] } else { Vec::new() };
    }
    let lc = f[n].clone();
    let (fp, modular) = odd_primes()
        .find_map(|q| {
            if (&lc % BigInt::from(q)).is_zero() {
                return None;
            }
            let gf = Gf::new(q).ok()?;
            let fm = to_gf(&f, &gf);
            (fm.degree() == Some(n) && is_squarefree(&fm, &gf)).then(|| {
                let facs = factor_squarefree(&fm.monic(&gf), &gf, q);
                (gf, facs)
            })
        })
        .expect("a squarefree polynomial stays squarefree modulo almost every prime");
    if modular.len() == 1 {
        return vec![f];
    }

    let max_coeff = f.iter().map(|c| c.abs()).max().unwrap();
    let bound = (BigInt::one() << n) * BigInt::from(n + 1) * max_coeff * lc.abs();
    let p = BigInt::from(fp.p());
    let (mut k, mut m) = (1u32, p.clone());
    while m <= &bound * 2 {
        m *= &p;
        k += 1;
    }
    let lc_inv = mod_inverse(&lc, &m);
    let f_monic = reduce(&f.iter().map(|c| c * &lc_inv).collect::<Vec<_>>(), &m);
    let mut lifted = lift_all(&f_monic, &modular, &fp, k, &m);

    let mut current = f;
    let mut found = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= lifted.len() {
        for combo in combinations(lifted.len(), size) {
            let lc_cur = current.last().unwrap().clone();
            let prod = combo.iter().fold(vec![lc_cur], |acc, &i| reduce(&int_mul(&acc, &lifted[i]), &m));
            let cand = primitive(symmetric(&prod, &m));
            if let Some(q) = exact_int_div(&current, &cand) {
                found.push(cand);
                current = primitive(q);
                let mut idx = 0;
                lifted.retain(|_| {
                    let keep = !combo.contains(&idx);
                    idx += 1;
                    keep
                });
                continue 'outer;
            }
        }
        size += 1;
    }
    if current.len() > 1 {
        found.push(current);
    }
    found
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    e.x.mod_floor(m)
}

/// Degrees of the irreducible factors over the rationals of a squarefree polynomial.
pub fn factor_degrees_rational(p: &Poly<BigRational>) -> Vec<usize> {
    let mut d: Vec<usize> = factor_squarefree_rational(p).iter().map(|g| g.len() - 1).collect();
    d.sort_unstable();
    d
}

/// Multiplies integer factors back together (test support).
pub fn product(factors: &[IntPoly]) -> IntPoly {
    factors.iter().fold(vec![BigInt::one()], |a, b| int_mul(&a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::Field;

    fn qp(c: &[i64]) -> Poly<BigRational> {
        let f = Rationals;
        Poly::from_coeffs(&f, c.iter().map(|&x| f.from_i64(x)).collect())
    }

    #[test]
    fn x4_plus_1_is_irreducible() {
        // Splits modulo every prime, so recombination is essential.
        assert_eq!(factor_degrees_rational(&qp(&[1, 0, 0, 0, 1])), vec![4]);
    }

    #[test]
    fn mixed_factorization() {
        let f = Rationals;
        // (x^2 - 2)(3x + 1)(x^3 - x - 1)
        let p = qp(&[-2, 0, 1]).mul(&qp(&[1, 3]), &f).mul(&qp(&[-1, -1, 0, 1]), &f);
        assert_eq!(factor_degrees_rational(&p), vec![1, 2, 3]);
        let facs = factor_squarefree_rational(&p);
        let prod = product(&facs);
        assert_eq!(primitive(prod), to_primitive_integer(&p));
    }

    #[test]
    fn rational_coefficients() {
        // 2u + 3u^2 without its u factor: 2 + 3u, plus (1/2)u^2 - 1/8 = (u-1/2)(u+1/2)/2
        assert_eq!(factor_degrees_rational(&qp(&[2, 3])), vec![1]);
        let f = Rationals;
        let p = Poly::from_coeffs(
            &f,
            vec![BigRational::new((-1).into(), 8.into()), f.zero(), BigRational::new(1.into(), 2.into())],
        );
        assert_eq!(factor_degrees_rational(&p), vec![1, 1]);
    }

    #[test]
    fn cyclotomic_like() {
        // x^6 + x^3 + 1 = Phi_9 is irreducible; x^6 - 1 splits as 1,1,2,2.
        assert_eq!(factor_degrees_rational(&qp(&[1, 0, 0, 1, 0, 0, 1])), vec![6]);
        assert_eq!(factor_degrees_rational(&qp(&[-1, 0, 0, 0, 0, 0, 1])), vec![1, 1, 2, 2]);
    }
}
