//! Zeta functions of smooth projective curves over `GF(q)` from point counts.

use serde::Serialize;

use crate::error::{Error, Result};

/// `L(T) = Σ b_k T^k` of degree `2g` with `b_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LPolynomial {
    pub q: u64,
    pub genus: usize,
    pub coeffs: Vec<i128>,
}

impl LPolynomial {
    pub fn trivial(q: u64) -> Self {
        LPolynomial { q, genus: 0, coeffs: vec![1] }
    }

    pub fn at_one(&self) -> i128 {
        self.coeffs.iter().sum()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| *c != 0).unwrap_or(0)
    }

    /// `b_{2g-i} = q^{g-i} b_i` for `0 ≤ i ≤ g`.
    pub fn functional_equation_holds(&self) -> bool {
        let g = self.genus;
        if self.coeffs.len() != 2 * g + 1 {
            return false;
        }
        (0..=g).all(|i| self.coeffs[2 * g - i] == (self.q as i128).pow((g - i) as u32) * self.coeffs[i])
    }

    /// Power sums `S_m = Σ α^m` of the reciprocal roots, `m = 1..=n`.
    pub fn power_sums(&self, n: usize) -> Vec<i128> {
        let b = |k: usize| self.coeffs.get(k).copied().unwrap_or(0);
        let mut s: Vec<i128> = Vec::with_capacity(n);
        for m in 1..=n {
            // m b_m + Σ_{i=1}^{m} S_i b_{m-i} = 0
            let mut acc = m as i128 * b(m);
            for i in 1..m {
                acc += s[i - 1] * b(m - i);
            }
            s.push(-acc);
        }
        s
    }

    /// `N_m = q^m + 1 - S_m`.
    pub fn predicted_counts(&self, n: usize) -> Vec<i128> {
        self.power_sums(n)
            .into_iter()
            .enumerate()
            .map(|(i, s)| (self.q as i128).pow(i as u32 + 1) + 1 - s)
            .collect()
    }

    pub fn render(&self) -> String {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(k, c)| match k {
                0 => c.to_string(),
                1 => format!("{c}T"),
                _ => format!("{c}T^{k}"),
            })
            .collect();
        terms.join(" + ").replace("+ -", "- ")
    }
}

/// Reconstructs `L` from `N_1, …, N_g` and the functional equation. Extra
/// counts beyond `g` are checked against the fitted polynomial.
pub fn zeta_fit(counts: &[u64], q: u64, genus: usize) -> Result<LPolynomial> {
    if counts.len() < genus {
        return Err(Error::ZetaFit(format!("need {genus} counts, got {}", counts.len())));
    }
    let qi = q as i128;
    let s: Vec<i128> = counts.iter().enumerate().map(|(i, &n)| qi.pow(i as u32 + 1) + 1 - n as i128).collect();
    let mut b = vec![0i128; 2 * genus + 1];
    b[0] = 1;
    for k in 1..=genus {
        let mut acc = 0i128;
        for i in 1..=k {
            acc += s[i - 1] * b[k - i];
        }
        if acc % k as i128 != 0 {
            return Err(Error::ZetaFit(format!("coefficient b_{k} = {}/{k} is not an integer", -acc)));
        }
        b[k] = -acc / k as i128;
    }
    for i in 0..genus {
        b[2 * genus - i] = qi.pow((genus - i) as u32) * b[i];
    }
    let l = LPolynomial { q, genus, coeffs: b };
    let predicted = l.predicted_counts(counts.len());
    for (m, (p, n)) in predicted.iter().zip(counts).enumerate() {
        if *p != *n as i128 {
            return Err(Error::ZetaFit(format!("N_{} = {n} but the fitted L predicts {p}", m + 1)));
        }
    }
    Ok(l)
}

/// The genus of the curve whose counts `N_1..N_K` are given: the least `g`
/// with `2g ≤ K` whose fit reproduces every count. Exact whenever the true
/// genus is at most `K/2`, because the power sums `S_1..S_K` determine the
/// first `K` coefficients of `L`.
pub fn infer_genus(counts: &[u64], q: u64) -> Option<usize> {
    (0..=counts.len() / 2).find(|&g| zeta_fit(counts, q, g).is_ok())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassNumbers {
    pub h_jac: i128,
    pub h_prym: i128,
}

pub fn class_numbers(l: &LPolynomial, base: &LPolynomial) -> Result<ClassNumbers> {
    let (h, hb) = (l.at_one(), base.at_one());
    if hb == 0 || h % hb != 0 {
        return Err(Error::PrymDivision(format!("L(1) = {h} is not divisible by the base value {hb}")));
    }
    Ok(ClassNumbers { h_jac: h, h_prym: h / hb })
}

/// `|N_m - q^m - 1| ≤ 2g q^{m/2}`, compared after squaring.
pub fn weil_check(counts: &[u64], genus: usize, q: u64) -> bool {
    counts.iter().enumerate().all(|(i, &n)| {
        let qm = (q as i128).pow(i as u32 + 1);
        let dev = n as i128 - qm - 1;
        dev * dev <= 4 * (genus as i128).pow(2) * qm
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_examples() {
        assert_eq!(zeta_fit(&[8], 5, 1).unwrap().coeffs, vec![1, 2, 5]);
        assert_eq!(zeta_fit(&[], 5, 0).unwrap().coeffs, vec![1]);
        assert_eq!(zeta_fit(&[6], 5, 1).unwrap().coeffs, vec![1, 0, 5]);
        assert!(zeta_fit(&[8], 5, 1).unwrap().functional_equation_holds());
    }

    #[test]
    fn fit_rejects_inconsistent_counts() {
        // The genus-1 curve with N_1 = 8 over GF(5) has N_2 = 32.
        assert_eq!(zeta_fit(&[8, 32], 5, 1).unwrap().at_one(), 8);
        assert!(zeta_fit(&[8, 33], 5, 1).is_err());
    }

    #[test]
    fn genus_inference() {
        let l = LPolynomial { q: 5, genus: 1, coeffs: vec![1, 2, 5] };
        let counts: Vec<u64> = l.predicted_counts(4).into_iter().map(|c| c as u64).collect();
        assert_eq!(infer_genus(&counts, 5), Some(1));
        assert_eq!(infer_genus(&[6, 26], 5), Some(0));
    }

    #[test]
    fn class_number_examples() {
        let t = LPolynomial::trivial(5);
        let l = LPolynomial { q: 5, genus: 1, coeffs: vec![1, 2, 5] };
        assert_eq!(class_numbers(&l, &t).unwrap(), ClassNumbers { h_jac: 8, h_prym: 8 });
        assert_eq!(class_numbers(&t, &t).unwrap(), ClassNumbers { h_jac: 1, h_prym: 1 });
        let l = LPolynomial { q: 5, genus: 1, coeffs: vec![1, 0, 5] };
        assert_eq!(class_numbers(&l, &t).unwrap().h_jac, 6);
        let base = LPolynomial { q: 5, genus: 1, coeffs: vec![1, 1, 5] };
        assert!(class_numbers(&l, &base).is_err());
    }

    #[test]
    fn weil_examples() {
        assert!(weil_check(&[8], 1, 5));
        assert!(weil_check(&[6], 3, 5));
        // ⌈2·1·√5⌉ = 5
        assert!(!weil_check(&[5 + 2 + 5], 1, 5));
        assert!(weil_check(&[5 + 1 + 4], 1, 5));
    }

    #[test]
    fn render() {
        assert_eq!(LPolynomial { q: 5, genus: 1, coeffs: vec![1, -2, 5] }.render(), "1 - 2T + 5T^2");
    }
}
