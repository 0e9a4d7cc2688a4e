//! Spectral curves over `GF(q)` on the projective line: sampling a generic
//! characteristic, counting points of the normalization, and zeta data.
//!
//! With `M = deg D - 2`, the coefficient `a_j` is a polynomial `α_j(t)` of
//! degree at most `jM` in the affine chart, vanishing to order `γ_j(x)` at
//! each finite marked point and with `deg α_j ≤ jM - γ_j(∞)`. In the chart
//! `t' = 1/t` the curve is `λ'^r + Σ α'_j(t') λ'^{r-j}` with
//! `α'_j(t') = t'^{jM} α_j(1/t')`.

pub mod disc;
pub mod integral;
pub mod zeta;

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::factor::{count_roots_in_field, is_squarefree};
use crate::arith::field::Field;
use crate::arith::gf::{prime_power, Gf};
use crate::arith::poly::Poly;
use crate::error::{Error, Result};
use crate::hitchin::coefficient_degrees;
use crate::par::{self, Strategy};
use crate::parabolic::{delta_p, ParabolicData, Partition};
use crate::resolution::{
    default_precision, local_equation_from_type, newton_polygon_profile, rational_divisor_gcd, resolve,
    DivisorGcd, LocalEquation, RamificationProfile, ResolutionResult,
};

pub use zeta::{class_numbers, infer_genus, weil_check, zeta_fit, ClassNumbers, LPolynomial};

type TPoly = Poly<u32>;

#[derive(Clone, Debug)]
pub struct FqSpec {
    pub q: u64,
    pub p: u64,
    pub field: Gf,
}

impl FqSpec {
    /// `GF(q)` for counting spectral curves of rank `rank`; requires `p > rank`.
    pub fn new(q: u64, rank: usize) -> Result<FqSpec> {
        let (p, _) = prime_power(q).ok_or_else(|| Error::InvalidInput(format!("q = {q} is not a prime power")))?;
        if p <= rank as u64 {
            return Err(Error::InvalidInput(format!("characteristic {p} must exceed the rank {rank}")));
        }
        Ok(FqSpec { q, p, field: Gf::new(q)? })
    }
}

/// Marked point on the projective line: `None` is `∞`, otherwise the
/// element of `GF(q)` with the given encoding (the integer itself for a
/// prime field).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedLocal {
    pub label: String,
    pub position: Option<u32>,
    pub mu: Partition,
}

pub fn parse_position(label: &str, q: u64) -> Result<Option<u32>> {
    if label == "inf" {
        return Ok(None);
    }
    let v: u64 = label
        .parse()
        .map_err(|_| Error::InvalidInput(format!("position {label:?} is neither \"inf\" nor an element of GF({q})")))?;
    if v >= q {
        return Err(Error::InvalidInput(format!("position {v} is not an element of GF({q})")));
    }
    Ok(Some(v as u32))
}

/// `a = (α_1, …, α_r)` together with the marked points it was drawn for.
#[derive(Clone, Debug)]
pub struct GlobalCharacteristic {
    pub fq: FqSpec,
    pub rank: usize,
    /// `M = 2g - 2 + deg D`.
    pub twist: usize,
    pub marked: Vec<MarkedLocal>,
    /// `α_1, …, α_r` in the affine chart.
    pub alphas: Vec<TPoly>,
}

impl GlobalCharacteristic {
    pub fn new(data: &ParabolicData, fq: &FqSpec, alphas: Vec<TPoly>) -> Result<GlobalCharacteristic> {
        if data.genus != 0 {
            return Err(Error::InvalidInput("point counting is implemented for genus-0 bases only".into()));
        }
        if alphas.len() != data.rank {
            return Err(Error::InvalidInput(format!("expected {} coefficients", data.rank)));
        }
        let marked = data
            .points
            .iter()
            .map(|p| {
                Ok(MarkedLocal { label: p.position.label().to_string(), position: parse_position(p.position.label(), fq.q)?, mu: p.mu.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        for (i, a) in marked.iter().enumerate() {
            if marked[..i].iter().any(|b| b.position == a.position) {
                return Err(Error::InvalidInput(format!("marked point {} is repeated", a.label)));
            }
        }
        Ok(GlobalCharacteristic { fq: fq.clone(), rank: data.rank, twist: data.twist_degree() as usize, marked, alphas })
    }

    /// `λ`-coefficients of the affine equation, low degree first (monic).
    pub fn lambda_coeffs(&self) -> Vec<TPoly> {
        let f = &self.fq.field;
        let mut v: Vec<TPoly> = (0..self.rank).map(|k| self.alphas[self.rank - 1 - k].clone()).collect();
        v.push(Poly::one(f));
        v
    }

    /// `α'_j` in the chart at infinity.
    pub fn alphas_at_infinity(&self) -> Vec<TPoly> {
        let f = &self.fq.field;
        self.alphas
            .iter()
            .enumerate()
            .map(|(idx, a)| {
                let top = (idx + 1) * self.twist;
                let mut v = vec![0u32; top + 1];
                for (k, c) in a.coeffs().iter().enumerate() {
                    v[top - k] = *c;
                }
                Poly::from_coeffs(f, v)
            })
            .collect()
    }

    /// The local equation `c_j(s) = α_j(x + s) / s^{γ_j(x)}` at a marked point.
    pub fn local_equation(&self, point: &MarkedLocal) -> Result<LocalEquation<u32>> {
        let f = &self.fq.field;
        let gamma = crate::parabolic::level_function(&point.mu, self.rank)?;
        let source = match point.position {
            Some(x) => self.alphas.iter().map(|a| a.taylor_shift(&x, f)).collect::<Vec<_>>(),
            None => self.alphas_at_infinity(),
        };
        let mut coeffs = Vec::with_capacity(self.rank);
        let mut longest = 0;
        for (idx, a) in source.iter().enumerate() {
            let g = gamma.at(idx + 1);
            if a.valuation(f).is_some_and(|v| v < g) {
                return Err(Error::InvalidInput(format!(
                    "α_{} does not vanish to order {g} at {}",
                    idx + 1,
                    point.label
                )));
            }
            let c: Vec<u32> = a.coeffs().iter().skip(g).copied().collect();
            longest = longest.max(c.len());
            coeffs.push(c);
        }
        let precision = default_precision(self.rank, gamma.at(self.rank)).max(longest);
        local_equation_from_type(&point.mu, coeffs, f, precision)
    }

    pub fn resolve_marked(&self) -> Result<Vec<ResolutionResult<u32>>> {
        self.marked.iter().map(|p| resolve(&self.local_equation(p)?, &self.fq.field)).collect()
    }

    pub fn discriminant(&self) -> TPoly {
        disc::discriminant(&self.lambda_coeffs(), &self.fq.field)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let f = &self.fq.field;
        let render = |p: &TPoly| p.coeffs().iter().map(|c| f.format(c)).collect::<Vec<_>>();
        serde_json::json!({
            "q": self.fq.q,
            "alphas": self.alphas.iter().map(render).collect::<Vec<_>>(),
        })
    }
}

/// Irreducibility of `λ^r + Σ α_j λ^{r-j}` over `GF(q)(t)`.
pub fn is_integral(ch: &GlobalCharacteristic) -> bool {
    if ch.alphas.last().is_none_or(|a| a.is_zero()) {
        return false;
    }
    if ch.discriminant().is_zero() {
        return false;
    }
    integral::is_irreducible_over_function_field(&ch.lambda_coeffs(), &ch.fq.field)
}

/// The discriminant has only simple zeros away from the marked points,
/// including at `∞` when `∞` is unmarked.
pub fn discriminant_simple_off_marked(ch: &GlobalCharacteristic) -> bool {
    let f = &ch.fq.field;
    let mut d = ch.discriminant();
    if d.is_zero() {
        return false;
    }
    for p in &ch.marked {
        if let Some(x) = p.position {
            let lin = Poly::linear_root(f, &x);
            while let Some(q) = d.div_exact(&lin, f) {
                d = q;
            }
        }
    }
    let deg = d.degree().unwrap();
    if !is_squarefree(&d, f) && deg > 0 {
        return false;
    }
    let infinity_marked = ch.marked.iter().any(|p| p.position.is_none());
    if !infinity_marked {
        let full = ch.discriminant().degree().unwrap();
        let ord_inf = ch.rank * (ch.rank - 1) * ch.twist - full;
        if ord_inf > 1 {
            return false;
        }
    }
    true
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RejectionStats {
    pub draws: usize,
    pub top_coefficient_zero: usize,
    pub not_integral: usize,
    pub marked_point_not_generic: usize,
    pub discriminant_not_simple: usize,
    pub no_rational_point: usize,
}

#[derive(Clone, Debug)]
pub struct Sample {
    pub characteristic: GlobalCharacteristic,
    pub resolutions: Vec<ResolutionResult<u32>>,
    pub stats: RejectionStats,
    pub n1: u64,
}

/// Draws `α_j = Π_{finite x} (t - x)^{γ_j(x)} β_j` with `β_j` uniform of
/// degree at most `deg_j` until the draw is integral, generic at every marked
/// point, simply branched elsewhere, and has a rational point (which makes
/// the smooth model geometrically irreducible).
pub fn sample_characteristic(
    data: &ParabolicData,
    fq: &FqSpec,
    seed: u64,
    max_draws: usize,
    strategy: Strategy,
) -> Result<Sample> {
    if data.genus != 0 {
        return Err(Error::InvalidInput("sampling is implemented for genus-0 bases only".into()));
    }
    let f = &fq.field;
    let profile = coefficient_degrees(data);
    if profile.entries.last().is_some_and(|e| e.degree < 0) {
        return Err(Error::SamplingExhausted(format!(
            "the j = {} summand has no sections, so a_{} vanishes identically",
            data.rank, data.rank
        )));
    }
    let template = GlobalCharacteristic::new(data, fq, vec![Poly::zero(); data.rank])?;
    let vanishing: Vec<TPoly> = (1..=data.rank)
        .map(|j| {
            template.marked.iter().zip(&data.points).fold(Poly::one(f), |acc, (m, p)| match m.position {
                Some(x) => acc.mul(&Poly::linear_root(f, &x).pow(p.gamma.at(j) as u32, f), f),
                None => acc,
            })
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = RejectionStats::default();
    for _ in 0..max_draws {
        stats.draws += 1;
        let alphas: Vec<TPoly> = profile
            .entries
            .iter()
            .zip(&vanishing)
            .map(|(e, v)| {
                if e.degree < 0 {
                    return Poly::zero();
                }
                let beta: Vec<u32> = (0..=e.degree).map(|_| rng.gen_range(0..fq.q as u32)).collect();
                v.mul(&Poly::from_coeffs(f, beta), f)
            })
            .collect();
        let ch = GlobalCharacteristic { alphas, ..template.clone() };
        if ch.alphas.last().unwrap().is_zero() {
            stats.top_coefficient_zero += 1;
            continue;
        }
        let resolutions = match ch.resolve_marked() {
            Ok(r) if r.iter().all(|x| x.generic) => r,
            Ok(_) => {
                stats.marked_point_not_generic += 1;
                continue;
            }
            Err(e @ Error::PrecisionExhausted { .. }) => return Err(e),
            Err(_) => {
                stats.marked_point_not_generic += 1;
                continue;
            }
        };
        if !discriminant_simple_off_marked(&ch) {
            stats.discriminant_not_simple += 1;
            continue;
        }
        if !is_integral(&ch) {
            stats.not_integral += 1;
            continue;
        }
        let n1 = count_curve_with(&ch, &resolutions, 1, strategy)?;
        if n1 == 0 {
            stats.no_rational_point += 1;
            continue;
        }
        return Ok(Sample { characteristic: ch, resolutions, stats, n1 });
    }
    Err(Error::SamplingExhausted(format!("{} draws rejected: {:?}", stats.draws, stats)))
}

/// Points of the normalization over an unmarked affine `t0 ∈ GF(q^m)`
/// (given through the lifted coefficients), i.e. distinct roots of
/// `F(λ, t0)` in `GF(q^m)`.
fn fiber_roots(lifted: &[TPoly], t0: u32, big: &Gf) -> u64 {
    let spec = Poly::from_coeffs(big, lifted.iter().map(|c| c.eval(&t0, big)).collect());
    count_roots_in_field(&spec, big) as u64
}

/// A base point for [`count_fiber`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasePoint {
    /// Affine point given by its encoding in `GF(q^m)`.
    Affine(u32),
    Infinity,
}

/// Number of points of the normalization over a base point defined over
/// `GF(q^m)`. Marked points use the resolution data.
pub fn count_fiber(
    ch: &GlobalCharacteristic,
    resolutions: &[ResolutionResult<u32>],
    point: BasePoint,
    m: u32,
) -> Result<u64> {
    let (big, emb) = ch.fq.field.extension(m)?;
    let marked_at = |pos: Option<u32>| ch.marked.iter().position(|p| p.position.map(|x| emb.map(x)) == pos);
    let key = match point {
        BasePoint::Affine(t) => Some(t),
        BasePoint::Infinity => None,
    };
    if let Some(i) = marked_at(key) {
        return Ok(resolutions[i].profile.points_over_extension(m as usize) as u64);
    }
    let coeffs = match point {
        BasePoint::Affine(_) => ch.lambda_coeffs(),
        BasePoint::Infinity => {
            let mut v: Vec<TPoly> = ch.alphas_at_infinity().into_iter().rev().collect();
            v.push(Poly::one(&ch.fq.field));
            v
        }
    };
    let lifted: Vec<TPoly> = coeffs.iter().map(|c| c.map(&big, |x| emb.map(*x))).collect();
    Ok(fiber_roots(&lifted, key.unwrap_or(0), &big))
}

/// `N_m = #X̃(GF(q^m))`.
pub fn count_curve(ch: &GlobalCharacteristic, m: u32, strategy: Strategy) -> Result<u64> {
    let res = ch.resolve_marked()?;
    count_curve_with(ch, &res, m, strategy)
}

pub fn count_curve_with(
    ch: &GlobalCharacteristic,
    resolutions: &[ResolutionResult<u32>],
    m: u32,
    strategy: Strategy,
) -> Result<u64> {
    let (big, emb) = ch.fq.field.extension(m)?;
    let lifted: Vec<TPoly> = ch.lambda_coeffs().iter().map(|c| c.map(&big, |x| emb.map(*x))).collect();
    let mut marked_affine: Vec<u32> = ch.marked.iter().filter_map(|p| p.position.map(|x| emb.map(x))).collect();
    marked_affine.sort_unstable();
    let affine = par::sum_range(strategy, big.size(), |t0| {
        if marked_affine.binary_search(&t0).is_ok() {
            0
        } else {
            fiber_roots(&lifted, t0, &big)
        }
    });
    let marked: u64 = resolutions.iter().map(|r| r.profile.points_over_extension(m as usize) as u64).sum();
    let infinity = if ch.marked.iter().any(|p| p.position.is_none()) {
        0
    } else {
        count_fiber(ch, resolutions, BasePoint::Infinity, m)?
    };
    Ok(affine + marked + infinity)
}

/// Counts for `m = 1..=depth`.
pub fn count_series(
    ch: &GlobalCharacteristic,
    resolutions: &[ResolutionResult<u32>],
    depth: u32,
    strategy: Strategy,
) -> Result<Vec<u64>> {
    (1..=depth).map(|m| count_curve_with(ch, resolutions, m, strategy)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ZetaData {
    pub counts: Vec<u64>,
    pub l: LPolynomial,
    pub class_numbers: ClassNumbers,
    /// Genus read off from the counts alone (needs `2g̃` counts).
    pub inferred_genus: Option<usize>,
    pub functional_equation: bool,
    pub weil: bool,
}

/// Fits the zeta function of an accepted sample with the given genus using
/// `depth ≥ g̃` counts.
pub fn zeta_data(sample: &Sample, genus: usize, depth: u32, strategy: Strategy) -> Result<ZetaData> {
    let counts = count_series(&sample.characteristic, &sample.resolutions, depth.max(genus as u32), strategy)?;
    let l = zeta_fit(&counts, sample.characteristic.fq.q, genus)?;
    let class_numbers = class_numbers(&l, &LPolynomial::trivial(sample.characteristic.fq.q))?;
    Ok(ZetaData {
        inferred_genus: if counts.len() >= 2 * genus { infer_genus(&counts, sample.characteristic.fq.q) } else { None },
        functional_equation: l.functional_equation_holds(),
        weil: weil_check(&counts, genus, sample.characteristic.fq.q),
        counts,
        l,
        class_numbers,
    })
}

/// Ledger genus `p_a - Σ δ` from the resolutions of an accepted sample.
pub fn ledger_genus(data: &ParabolicData, resolutions: &[ResolutionResult<u32>]) -> i64 {
    crate::hitchin::spectral_arithmetic_genus(data) - resolutions.iter().map(|r| r.ledger.delta as i64).sum::<i64>()
}

/// Realized divisor gcd over the marked points of an accepted sample.
pub fn sample_divisor_gcd(data: &ParabolicData, resolutions: &[ResolutionResult<u32>]) -> DivisorGcd {
    let profiles: Vec<&RamificationProfile> = resolutions.iter().map(|r| &r.profile).collect();
    rational_divisor_gcd(&profiles, delta_p(data))
}

/// Newton-polygon cross-check at every marked point of a sample.
pub fn newton_agrees(ch: &GlobalCharacteristic, resolutions: &[ResolutionResult<u32>]) -> Result<bool> {
    for (p, r) in ch.marked.iter().zip(resolutions) {
        let np = newton_polygon_profile(&ch.local_equation(p)?, &ch.fq.field)?;
        if np.geometric() != r.profile.geometric() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rejection counts keyed by reason, for reports.
pub fn stats_map(stats: &RejectionStats) -> BTreeMap<&'static str, usize> {
    BTreeMap::from([
        ("draws", stats.draws),
        ("top_coefficient_zero", stats.top_coefficient_zero),
        ("not_integral", stats.not_integral),
        ("marked_point_not_generic", stats.marked_point_not_generic),
        ("discriminant_not_simple", stats.discriminant_not_simple),
        ("no_rational_point", stats.no_rational_point),
    ])
}
