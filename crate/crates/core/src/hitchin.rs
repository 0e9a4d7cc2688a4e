//! Degrees and dimensions of the parabolic Hitchin base and the genus
//! bookkeeping of spectral curves.
//!
//! The `j`-th summand of the base is `H^0(ω^j(Σ_x (j - γ_j(x)) x))`. Its
//! dimension is obtained from Riemann-Roch where that is unambiguous; for
//! special degrees on curves of genus ≥ 2 the value is reported as
//! indeterminate instead of guessed.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::parabolic::ParabolicData;

/// Which bundle a summand is, as far as the `h^0` rule is concerned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BundleKind {
    /// The `j = 1` summand, which is `ω_X` itself.
    Canonical,
    /// `ω^j` with zero twist divisor.
    UntwistedPower,
    Twisted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum H0 {
    Value(u64),
    Indeterminate,
}

impl H0 {
    pub fn value(self) -> Option<u64> {
        match self {
            H0::Value(v) => Some(v),
            H0::Indeterminate => None,
        }
    }
}

/// `h^0` of a line bundle of degree `d` on a curve of genus `g`, together
/// with the name of the rule that fired.
pub fn h0_line_bundle(g: u64, d: i64, kind: BundleKind) -> (H0, &'static str) {
    let gi = g as i64;
    if d < 0 {
        return (H0::Value(0), "negative degree");
    }
    if kind == BundleKind::Canonical {
        return (H0::Value(g), "canonical bundle");
    }
    if g == 0 {
        return (H0::Value(d as u64 + 1), "projective line");
    }
    if g == 1 && d == 0 {
        return if kind == BundleKind::UntwistedPower {
            (H0::Value(1), "genus 1, trivial bundle")
        } else {
            (H0::Value(0), "genus 1, generic degree-0 bundle")
        };
    }
    if d > 2 * gi - 2 {
        return (H0::Value((d + 1 - gi) as u64), "nonspecial range");
    }
    (H0::Indeterminate, "special range")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeEntry {
    pub j: usize,
    pub degree: i64,
    pub h0: H0,
    pub rule: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    pub entries: Vec<DegreeEntry>,
}

impl DegreeProfile {
    pub fn degrees(&self) -> Vec<i64> {
        self.entries.iter().map(|e| e.degree).collect()
    }

    pub fn h0s(&self) -> Vec<Option<u64>> {
        self.entries.iter().map(|e| e.h0.value()).collect()
    }

    /// `h^0` of the `j = r` summand is positive, so `a_r` can be nonzero.
    pub fn top_summand_nonzero(&self) -> bool {
        self.entries.last().and_then(|e| e.h0.value()).is_some_and(|v| v >= 1)
    }
}

/// Twist of the `j`-th summand: `Σ_x (j - γ_j(x))`.
pub fn twist_degree(data: &ParabolicData, j: usize) -> i64 {
    data.points.iter().map(|p| j as i64 - p.gamma.at(j) as i64).sum()
}

pub fn coefficient_degrees(data: &ParabolicData) -> DegreeProfile {
    let g = data.genus as i64;
    let entries = (1..=data.rank)
        .map(|j| {
            let twist = twist_degree(data, j);
            let degree = j as i64 * (2 * g - 2) + twist;
            let kind = match (j, twist) {
                (1, _) => BundleKind::Canonical,
                (_, 0) => BundleKind::UntwistedPower,
                _ => BundleKind::Twisted,
            };
            let (h0, rule) = h0_line_bundle(data.genus as u64, degree, kind);
            DegreeEntry { j, degree, h0, rule }
        })
        .collect();
    DegreeProfile { entries }
}

/// `(dim H_P, dim H_P^0)`.
pub fn hitchin_dims(data: &ParabolicData) -> Result<(u64, u64)> {
    let profile = coefficient_degrees(data);
    let mut total = 0;
    for e in &profile.entries {
        match e.h0 {
            H0::Value(v) => total += v,
            H0::Indeterminate => {
                return Err(Error::IndeterminateH0 { j: e.j, degree: e.degree, genus: data.genus as i64 })
            }
        }
    }
    Ok((total, total - data.genus as u64))
}

/// Arithmetic genus of a spectral curve in the total space of `ω_X(D)`.
pub fn spectral_arithmetic_genus(data: &ParabolicData) -> i64 {
    let (r, g) = (data.rank as i64, data.genus as i64);
    r * (g - 1) + 1 + r * (r - 1) / 2 * data.twist_degree()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalizedGenus {
    pub g_tilde: i64,
    pub p_a: i64,
    /// `δ_x = (Σ n_i² - r)/2` per marked point.
    pub deltas: Vec<usize>,
    /// `p_a - Σ δ_x = g̃`.
    pub consistent: bool,
    /// `g̃ < 0`: no integral spectral curve exists for this data.
    pub degenerate: bool,
}

impl NormalizedGenus {
    pub fn delta_total(&self) -> i64 {
        self.deltas.iter().sum::<usize>() as i64
    }
}

/// `g̃ = r²(g-1) + 1 + Σ_x dim G/P_x`, cross-checked against `p_a - Σ δ_x`.
pub fn normalized_genus_closed_form(data: &ParabolicData) -> NormalizedGenus {
    let (r, g) = (data.rank as i64, data.genus as i64);
    let flags: i64 = data.points.iter().map(|p| p.flag_dim as i64).sum();
    let g_tilde = r * r * (g - 1) + 1 + flags;
    let deltas: Vec<usize> = data.points.iter().map(|p| p.delta()).collect();
    let p_a = spectral_arithmetic_genus(data);
    let consistent = p_a - deltas.iter().sum::<usize>() as i64 == g_tilde;
    NormalizedGenus { g_tilde, p_a, deltas, consistent, degenerate: g_tilde < 0 }
}

/// Degree of the line bundle on the normalized spectral curve corresponding
/// to a parabolic Higgs bundle of degree `d`.
pub fn bnr_line_bundle_degree(data: &ParabolicData, d: i64) -> i64 {
    let (r, g) = (data.rank as i64, data.genus as i64);
    let flags: i64 = data.points.iter().map(|p| p.flag_dim as i64).sum();
    (r * r - r) * (g - 1) + flags + d
}

/// Euler characteristic consistency `δ + 1 - g̃ = d + r(1 - g)`.
pub fn bnr_euler_check(data: &ParabolicData, d: i64) -> bool {
    let delta = bnr_line_bundle_degree(data, d);
    let g_tilde = normalized_genus_closed_form(data).g_tilde;
    delta + 1 - g_tilde == d + data.rank as i64 * (1 - data.genus as i64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub dim_hp: Option<u64>,
    pub dim_hp0: Option<u64>,
    pub p_a: i64,
    pub g_tilde: i64,
    pub delta_total: i64,
    pub prym_dim: i64,
    /// `δ - d`, i.e. the BNR degree is `d + bnr_offset`.
    pub bnr_offset: i64,
}

pub fn dimension_report(data: &ParabolicData) -> DimensionReport {
    let dims = hitchin_dims(data).ok();
    let ng = normalized_genus_closed_form(data);
    DimensionReport {
        dim_hp: dims.map(|d| d.0),
        dim_hp0: dims.map(|d| d.1),
        p_a: ng.p_a,
        g_tilde: ng.g_tilde,
        delta_total: ng.delta_total(),
        prym_dim: ng.g_tilde - data.genus as i64,
        bnr_offset: bnr_line_bundle_degree(data, 0),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityStatus {
    Holds,
    Fails,
    /// No integral spectral curve was detected, so there is nothing to test.
    Vacuous,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegrabilityReport {
    pub status: IdentityStatus,
    pub dim_hp: Option<u64>,
    pub dim_hp0: Option<u64>,
    pub g_tilde: i64,
    pub prym_dim: i64,
    pub reason: String,
}

/// Checks `dim H_P = g̃` and `dim H_P^0 = g̃ - g`, gated on the integrality
/// proxy (the `j = r` summand must admit a nonzero section).
pub fn integrability_report(data: &ParabolicData) -> IntegrabilityReport {
    let profile = coefficient_degrees(data);
    let ng = normalized_genus_closed_form(data);
    let prym_dim = ng.g_tilde - data.genus as i64;
    let dims = hitchin_dims(data);
    let (dim_hp, dim_hp0) = match &dims {
        Ok((a, b)) => (Some(*a), Some(*b)),
        Err(_) => (None, None),
    };
    let (status, reason) = if let Err(e) = dims {
        (IdentityStatus::Vacuous, e.to_string())
    } else if !profile.top_summand_nonzero() {
        (IdentityStatus::Vacuous, format!("a_{} is forced to vanish", data.rank))
    } else if ng.degenerate {
        (IdentityStatus::Vacuous, "normalized genus is negative".into())
    } else if dim_hp == Some(ng.g_tilde as u64) && dim_hp0 == Some(prym_dim as u64) {
        (IdentityStatus::Holds, format!("{} = g̃ and {} = g̃ - g", ng.g_tilde, prym_dim))
    } else {
        (
            IdentityStatus::Fails,
            format!("dim H_P = {dim_hp:?}, g̃ = {}, dim H_P^0 = {dim_hp0:?}, g̃ - g = {prym_dim}", ng.g_tilde),
        )
    };
    IntegrabilityReport { status, dim_hp, dim_hp0, g_tilde: ng.g_tilde, prym_dim, reason }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn borel(r: usize, k: usize, g: usize) -> ParabolicData {
        let p = vec![1; r];
        let parts: Vec<&[usize]> = (0..k).map(|_| p.as_slice()).collect();
        ParabolicData::from_partitions(r, g, &parts).unwrap()
    }

    #[test]
    fn degree_examples() {
        let d = borel(3, 3, 0);
        let prof = coefficient_degrees(&d);
        assert_eq!(prof.degrees(), vec![-2, -1, 0]);
        assert_eq!(prof.h0s(), vec![Some(0), Some(0), Some(1)]);

        let d = ParabolicData::from_partitions(3, 0, &[&[2, 1], &[2, 1], &[2, 1]]).unwrap();
        let prof = coefficient_degrees(&d);
        assert_eq!(prof.degrees(), vec![-2, -1, -3]);
        assert_eq!(prof.h0s(), vec![Some(0), Some(0), Some(0)]);

        let d = borel(2, 1, 2);
        let prof = coefficient_degrees(&d);
        assert_eq!(prof.degrees(), vec![2, 5]);
        assert_eq!(prof.h0s(), vec![Some(2), Some(4)]);
    }

    #[test]
    fn h0_examples() {
        assert_eq!(h0_line_bundle(0, 0, BundleKind::Twisted).0, H0::Value(1));
        assert_eq!(h0_line_bundle(2, 5, BundleKind::Twisted).0, H0::Value(4));
        assert_eq!(h0_line_bundle(2, 2, BundleKind::Canonical).0, H0::Value(2));
        assert_eq!(h0_line_bundle(3, 2, BundleKind::Twisted).0, H0::Indeterminate);
        assert_eq!(h0_line_bundle(1, 0, BundleKind::UntwistedPower).0, H0::Value(1));
        assert_eq!(h0_line_bundle(1, 0, BundleKind::Twisted).0, H0::Value(0));
        assert_eq!(h0_line_bundle(5, -1, BundleKind::Twisted).0, H0::Value(0));
    }

    #[test]
    fn dims_examples() {
        assert_eq!(hitchin_dims(&borel(3, 3, 0)).unwrap(), (1, 1));
        assert_eq!(hitchin_dims(&borel(2, 4, 0)).unwrap(), (1, 1));
        assert_eq!(hitchin_dims(&borel(2, 1, 2)).unwrap(), (6, 4));
    }

    #[test]
    fn arithmetic_genus_examples() {
        assert_eq!(spectral_arithmetic_genus(&borel(3, 3, 0)), 1);
        assert_eq!(spectral_arithmetic_genus(&borel(2, 4, 0)), 1);
        assert_eq!(spectral_arithmetic_genus(&borel(2, 1, 1)), 2);
    }

    #[test]
    fn normalized_genus_examples() {
        let ng = normalized_genus_closed_form(&borel(3, 3, 0));
        assert_eq!((ng.g_tilde, ng.deltas.clone()), (1, vec![0, 0, 0]));
        assert!(ng.consistent);
        assert_eq!(normalized_genus_closed_form(&borel(2, 4, 0)).g_tilde, 1);
        let d = ParabolicData::from_partitions(3, 1, &[&[2, 1]]).unwrap();
        let ng = normalized_genus_closed_form(&d);
        assert_eq!(ng.deltas, vec![1]);
        assert!(ng.consistent);
    }

    #[test]
    fn bnr_examples() {
        assert_eq!(bnr_line_bundle_degree(&borel(3, 3, 0), 0), 3);
        assert_eq!(bnr_line_bundle_degree(&borel(2, 4, 0), 0), 2);
        let d = borel(2, 3, 1);
        assert_eq!(bnr_line_bundle_degree(&d, 5) - bnr_line_bundle_degree(&d, 4), 1);
        assert!(bnr_euler_check(&borel(3, 3, 0), 0));
    }

    #[test]
    fn integrability_examples() {
        assert_eq!(integrability_report(&borel(3, 3, 0)).status, IdentityStatus::Holds);
        let r = integrability_report(&borel(2, 1, 2));
        assert_eq!((r.status, r.dim_hp, r.dim_hp0, r.g_tilde), (IdentityStatus::Holds, Some(6), Some(4), 6));
        let d = ParabolicData::from_partitions(3, 0, &[&[2, 1], &[2, 1], &[2, 1]]).unwrap();
        assert_eq!(integrability_report(&d).status, IdentityStatus::Vacuous);
    }
}
