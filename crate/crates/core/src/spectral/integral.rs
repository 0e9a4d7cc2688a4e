//! Irreducibility of a monic `F(λ, t) ∈ GF(q)[t][λ]` over `GF(q)(t)`.
//!
//! Pick `t_0` (possibly in an extension field) with `F(λ, t_0)` squarefree,
//! factor it, Hensel-lift the factorization to `GF(q^m)[[s]][λ]` with
//! `t = t_0 + s`, and test every subset product for being a genuine factor
//! over `GF(q)[t]`. Coefficient degrees of any factor are bounded by the
//! Newton polygon at infinity, so a finite lifting precision is exact.

use crate::arith::factor::{factor_squarefree, is_squarefree};
use crate::arith::field::Field;
use crate::arith::gf::{Embedding, Gf};
use crate::arith::poly::Poly;

type GPoly = Poly<u32>;

/// A polynomial in `λ` whose coefficients are truncated series in `s`,
/// stored as `s`-coefficients: `Σ_k G_k(λ) s^k`.
#[derive(Clone, Debug)]
struct SeriesPoly {
    terms: Vec<GPoly>,
}

impl SeriesPoly {
    fn mul(&self, other: &SeriesPoly, prec: usize, f: &Gf) -> SeriesPoly {
        let mut terms = vec![Poly::zero(); prec];
        for (a, x) in self.terms.iter().enumerate() {
            for (b, y) in other.terms.iter().enumerate() {
                if a + b < prec {
                    terms[a + b] = terms[a + b].add(&x.mul(y, f), f);
                }
            }
        }
        SeriesPoly { terms }
    }
}

/// Lifts `F ≡ g0 h0` (monic, coprime) to precision `s^prec`.
fn lift_pair(target: &SeriesPoly, g0: &GPoly, h0: &GPoly, prec: usize, f: &Gf) -> (SeriesPoly, SeriesPoly) {
    let (one, a, b) = g0.ext_gcd(h0, f);
    let inv = f.inv(&one.coeffs()[0]).expect("coprime factors");
    let (a, b) = (a.scale(&inv, f), b.scale(&inv, f));
    let mut g = SeriesPoly { terms: vec![g0.clone()] };
    let mut h = SeriesPoly { terms: vec![h0.clone()] };
    for k in 1..prec {
        let prod = g.mul(&h, k + 1, f);
        let want = target.terms.get(k).cloned().unwrap_or_else(Poly::zero);
        let have = prod.terms.get(k).cloned().unwrap_or_else(Poly::zero);
        let e = want.sub(&have, f);
        // g0 δh + h0 δg = e with deg δg < deg g0, deg δh < deg h0
        let dg = e.mul(&b, f).rem(g0, f);
        let dh = e.mul(&a, f).rem(h0, f);
        g.terms.push(dg);
        h.terms.push(dh);
    }
    (g, h)
}

fn lift_all(target: &SeriesPoly, factors: &[GPoly], prec: usize, f: &Gf) -> Vec<SeriesPoly> {
    if factors.len() == 1 {
        return vec![target.clone()];
    }
    let rest = factors[1..].iter().fold(Poly::one(f), |acc, p| acc.mul(p, f));
    let (g, h) = lift_pair(target, &factors[0], &rest, prec, f);
    let mut out = vec![g];
    out.extend(lift_all(&h, &factors[1..], prec, f));
    out
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u64..(1u64 << n) - 1).map(move |mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
}

/// Evaluates `F(λ, t0)` given the `λ`-coefficients of `F` over `big`.
fn specialize(coeffs: &[GPoly], t0: u32, big: &Gf) -> GPoly {
    Poly::from_coeffs(big, coeffs.iter().map(|c| c.eval(&t0, big)).collect())
}

/// Finds `t0` in `GF(q^m)` for the least `m` such that `F(λ, t0)` is
/// squarefree. Returns the extension, its embedding and `t0`.
fn good_specialization(coeffs: &[GPoly], f: &Gf) -> Option<(Gf, Embedding, Vec<GPoly>, u32)> {
    for m in 1..=16u32 {
        let (big, emb) = f.extension(m).ok()?;
        let lifted: Vec<GPoly> = coeffs.iter().map(|c| c.map(&big, |x| emb.map(*x))).collect();
        let found = big.elements().find(|t0| is_squarefree(&specialize(&lifted, *t0, &big), &big));
        if let Some(t0) = found {
            return Some((big, emb, lifted, t0));
        }
    }
    None
}

/// Whether the monic polynomial with `λ`-coefficients `coeffs` (low degree
/// first, last one equal to 1) is irreducible over `GF(q)(t)`.
pub fn is_irreducible_over_function_field(coeffs: &[GPoly], f: &Gf) -> bool {
    let r = coeffs.len() - 1;
    if r <= 1 {
        return r == 1;
    }
    if coeffs[0].is_zero() {
        return false;
    }
    let Some((big, emb, lifted, t0)) = good_specialization(coeffs, f) else {
        // Every specialization has a repeated root: F is not squarefree.
        return false;
    };
    let special = specialize(&lifted, t0, &big);
    let locals = factor_squarefree(&special, &big, 0);
    if locals.len() == 1 {
        return true;
    }

    // deg_t of the coefficient of λ^{r-i} in a factor is at most i·w with
    // w = max_j deg a_j / j.
    let prec = (1..=r)
        .filter_map(|j| coeffs[r - j].degree().map(|d| r * d / j))
        .max()
        .unwrap_or(0)
        + 1;

    // F(λ, t0 + s) as a series polynomial.
    let shifted: Vec<GPoly> = lifted.iter().map(|c| c.taylor_shift(&t0, &big)).collect();
    let depth = shifted.iter().map(|c| c.coeffs().len()).max().unwrap_or(1).max(prec);
    let target = SeriesPoly {
        terms: (0..depth)
            .map(|k| Poly::from_coeffs(&big, shifted.iter().map(|c| c.coeff(&big, k)).collect()))
            .collect(),
    };
    let lifts = lift_all(&target, &locals, prec, &big);
    let neg_t0 = big.neg(&t0);

    for subset in subsets(lifts.len()) {
        if subset.len() * 2 > lifts.len() {
            continue;
        }
        let prod = subset.iter().skip(1).fold(lifts[subset[0]].clone(), |acc, &i| acc.mul(&lifts[i], prec, &big));
        let deg = prod.terms[0].degree().unwrap();
        // Coefficient of λ^k as a polynomial in s, then in t.
        let mut factor = Vec::with_capacity(deg + 1);
        let mut rational = true;
        for k in 0..=deg {
            let in_s = Poly::from_coeffs(&big, prod.terms.iter().map(|p| p.coeff(&big, k)).collect());
            let in_t = in_s.taylor_shift(&neg_t0, &big);
            let back: Option<Vec<u32>> = in_t.coeffs().iter().map(|c| emb.preimage(*c)).collect();
            match back {
                Some(v) => factor.push(Poly::from_coeffs(f, v)),
                None => {
                    rational = false;
                    break;
                }
            }
        }
        if rational && divides(&factor, coeffs, f) {
            return false;
        }
    }
    true
}

/// Exact division of monic polynomials in `λ` over `GF(q)[t]`.
fn divides(g: &[GPoly], fpoly: &[GPoly], f: &Gf) -> bool {
    let dg = g.len() - 1;
    let mut rem: Vec<GPoly> = fpoly.to_vec();
    for top in (dg..rem.len()).rev() {
        let c = rem[top].clone();
        if c.is_zero() {
            continue;
        }
        for (k, gk) in g.iter().enumerate() {
            let idx = top - dg + k;
            rem[idx] = rem[idx].sub(&c.mul(gk, f), f);
        }
    }
    rem[..dg].iter().all(|c| c.is_zero())
}
