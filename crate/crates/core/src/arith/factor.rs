//! Factorization over finite fields: distinct-degree splitting, equal-degree
//! splitting (odd characteristic), and root counting.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::field::Field;
use crate::arith::gf::Gf;
use crate::arith::poly::Poly;

pub type GfPoly = Poly<u32>;

pub fn is_squarefree<F: Field>(p: &Poly<F::Elem>, f: &F) -> bool {
    match p.degree() {
        None => false,
        Some(0) => true,
        Some(_) => p.gcd(&p.derivative(f), f).degree() == Some(0),
    }
}

/// Degree of the squarefree part, i.e. the number of distinct roots over the
/// algebraic closure. Valid whenever the degree is below the characteristic.
pub fn distinct_root_count<F: Field>(p: &Poly<F::Elem>, f: &F) -> usize {
    match p.degree() {
        None | Some(0) => 0,
        Some(d) => d - p.gcd(&p.derivative(f), f).degree().unwrap_or(0),
    }
}

/// Distinct-degree factorization of a monic squarefree polynomial.
/// Returns `(d, product of all irreducible factors of degree d)`.
pub fn distinct_degree(p: &GfPoly, f: &Gf) -> Vec<(usize, GfPoly)> {
    let q = f.size() as u64;
    let mut out = Vec::new();
    let mut rest = p.monic(f);
    let x = Poly::monomial(f, 1, 1);
    let mut h = x.clone();
    let mut d = 0;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = h.powmod(q, &rest, f);
        let g = rest.gcd(&h.sub(&x, f), f);
        if g.degree().unwrap_or(0) > 0 {
            rest = rest.div_exact(&g, f).expect("gcd divides");
            h = h.rem(&rest, f);
            out.push((d, g));
        }
    }
    if let Some(deg) = rest.degree().filter(|&k| k > 0) {
        out.push((deg, rest));
    }
    out
}

/// Degrees of the irreducible factors of a squarefree polynomial, sorted.
pub fn factor_degrees(p: &GfPoly, f: &Gf) -> Vec<usize> {
    let mut degs: Vec<usize> = distinct_degree(p, f)
        .into_iter()
        .flat_map(|(d, g)| std::iter::repeat_n(d, g.degree().unwrap() / d))
        .collect();
    degs.sort_unstable();
    degs
}

/// Splits a product of distinct irreducibles of common degree `d` (odd `q`).
pub fn equal_degree(p: &GfPoly, d: usize, f: &Gf, rng: &mut ChaCha8Rng) -> Vec<GfPoly> {
    assert!(f.p() != 2, "equal-degree splitting is implemented for odd characteristic");
    let n = p.degree().unwrap();
    if n == d {
        return vec![p.monic(f)];
    }
    let q = f.size() as u64;
    loop {
        let a = Poly::from_coeffs(f, (0..n).map(|_| rng.gen_range(0..f.size())).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        // a^((q^d - 1)/2) = (a * a^q * ... * a^(q^(d-1)))^((q-1)/2)
        let mut frob = a.rem(p, f);
        let mut norm = frob.clone();
        for _ in 1..d {
            frob = frob.powmod(q, p, f);
            norm = norm.mul(&frob, f).rem(p, f);
        }
        let b = norm.powmod((q - 1) / 2, p, f).sub(&Poly::one(f), f);
        let g = p.gcd(&b, f);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let other = p.div_exact(&g, f).unwrap();
            let mut out = equal_degree(&g, d, f, rng);
            out.extend(equal_degree(&other, d, f, rng));
            return out;
        }
    }
}

/// Full factorization of a squarefree polynomial into monic irreducibles.
pub fn factor_squarefree(p: &GfPoly, f: &Gf, seed: u64) -> Vec<GfPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<GfPoly> = distinct_degree(p, f)
        .into_iter()
        .flat_map(|(d, g)| equal_degree(&g, d, f, &mut rng))
        .collect();
    out.sort_by_key(|g| (g.degree(), g.coeffs().to_vec()));
    out
}

/// Number of distinct roots of `p` lying in the field itself.
pub fn count_roots_in_field(p: &GfPoly, f: &Gf) -> usize {
    match p.degree() {
        None => f.size() as usize,
        Some(0) => 0,
        Some(1) => 1,
        Some(_) => {
            let m = p.monic(f);
            let x = Poly::monomial(f, 1, 1);
            let xq = x.powmod(f.size() as u64, &m, f);
            m.gcd(&xq.sub(&x, f), f).degree().unwrap_or(0)
        }
    }
}

/// Roots of `p` in the field, found by exhaustive evaluation (small fields only).
pub fn roots_by_search(p: &GfPoly, f: &Gf) -> Vec<u32> {
    f.elements().filter(|x| f.is_zero(&p.eval(x, f))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gp(f: &Gf, c: &[u32]) -> GfPoly {
        Poly::from_coeffs(f, c.to_vec())
    }

    #[test]
    fn ddf_groups_by_degree() {
        let f = Gf::new(17).unwrap();
        // (x-1)(x-2)(x^2-3): x^2-3 is irreducible mod 17.
        let p = gp(&f, &[16, 1]).mul(&gp(&f, &[15, 1]), &f).mul(&gp(&f, &[14, 0, 1]), &f);
        assert_eq!(factor_degrees(&p, &f), vec![1, 1, 2]);
        let factors = factor_squarefree(&p, &f, 3);
        assert_eq!(factors.len(), 3);
        let prod = factors.iter().fold(Poly::one(&f), |a, b| a.mul(b, &f));
        assert_eq!(prod, p.monic(&f));
    }

    #[test]
    fn root_count_matches_search() {
        let f = Gf::new(9).unwrap();
        for seed in 0..20u32 {
            let c: Vec<u32> = (0..4).map(|i| (seed * 7 + i * 5 + 1) % 9).chain([1]).collect();
            let p = gp(&f, &c);
            assert_eq!(count_roots_in_field(&p, &f), roots_by_search(&p, &f).len());
        }
    }

    #[test]
    fn squarefree_detection() {
        let f = Gf::new(5).unwrap();
        let sq = gp(&f, &[4, 1]).mul(&gp(&f, &[4, 1]), &f);
        assert!(!is_squarefree(&sq, &f));
        assert_eq!(distinct_root_count(&sq, &f), 1);
        assert!(is_squarefree(&gp(&f, &[2, 0, 1]), &f));
    }
}
