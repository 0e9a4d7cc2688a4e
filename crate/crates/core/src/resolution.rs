//! Successive blow-ups of the local spectral equation
//! `λ^r + Σ_ℓ c_ℓ(t) t^{γ_ℓ} λ^{r-ℓ}` at a marked point.
//!
//! Stage `i` lives in the chart `u_{i-1} = λ u_i` of the blow-up of the
//! origin of stage `i-1` (with `u_0 = t`). Each stage records its exceptional
//! multiplicity, the ramification polynomial `R_i(u) = E_i(0, u)` and the
//! closed points it contributes to the normalization over the marked point.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::factor::factor_degrees;
use crate::arith::field::{Field, Rationals};
use crate::arith::gf::Gf;
use crate::arith::poly::Poly;
use crate::arith::series::TruncatedSeries;
use crate::arith::zassenhaus::factor_degrees_rational;
use crate::error::{Error, Result};
use crate::parabolic::{level_function, Partition};

/// Fields over which residue degrees can be computed.
pub trait ResidueField: Field {
    /// Degrees of the irreducible factors of a squarefree polynomial.
    fn irreducible_degrees(&self, p: &Poly<Self::Elem>) -> Vec<usize>;
}

impl ResidueField for Gf {
    fn irreducible_degrees(&self, p: &Poly<u32>) -> Vec<usize> {
        factor_degrees(&p.monic(self), self)
    }
}

impl ResidueField for Rationals {
    fn irreducible_degrees(&self, p: &Poly<BigRational>) -> Vec<usize> {
        factor_degrees_rational(p)
    }
}

/// `N = max(8, 4 r γ_r)`.
pub fn default_precision(rank: usize, gamma_r: usize) -> usize {
    (4 * rank * gamma_r).max(8)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalEquation<E> {
    pub rank: usize,
    pub mu: Partition,
    /// The sorted partition `n`, dual to `mu`.
    pub partition: Partition,
    pub gamma: Vec<usize>,
    /// `c_1, …, c_r`; a zero series means the term is absent.
    pub units: Vec<TruncatedSeries<E>>,
    pub precision: usize,
    pub field: String,
}

impl<E: Clone + PartialEq> LocalEquation<E> {
    /// 1-based indices `ℓ` whose `c_ℓ(0)` vanishes.
    pub fn nonunits<F: Field<Elem = E>>(&self, f: &F) -> Vec<usize> {
        (1..=self.rank)
            .filter(|&l| self.units[l - 1].constant_term().is_none_or(|c| f.is_zero(c)))
            .collect()
    }

    /// `(λ-exponent, t-exponent) -> coefficient` for every known monomial.
    pub fn monomials<F: Field<Elem = E>>(&self, f: &F) -> BTreeMap<(usize, usize), E> {
        let mut m = BTreeMap::new();
        m.insert((self.rank, 0), f.one());
        for (idx, c) in self.units.iter().enumerate() {
            let l = idx + 1;
            for (k, v) in c.terms(f) {
                m.insert((self.rank - l, self.gamma[idx] + k), v.clone());
            }
        }
        m
    }

    pub fn to_json<F: Field<Elem = E>>(&self, f: &F) -> Value {
        json!({
            "rank": self.rank,
            "mu": self.mu.parts(),
            "partition": self.partition.parts(),
            "gamma": self.gamma,
            "precision": self.precision,
            "field": self.field,
            "equation": render_bivariate(&self.monomials(f), f, "t"),
        })
    }
}

/// Builds the equation with `γ` derived from `mu`; each coefficient is a
/// truncated series `c_ℓ(t)` (constants are promoted).
pub fn local_equation_from_type<F: Field>(
    mu: &Partition,
    coeffs: Vec<Vec<F::Elem>>,
    f: &F,
    precision: usize,
) -> Result<LocalEquation<F::Elem>> {
    let r = mu.total();
    if coeffs.len() != r {
        return Err(Error::InvalidInput(format!("expected {r} coefficients, got {}", coeffs.len())));
    }
    if precision == 0 {
        return Err(Error::InvalidInput("precision must be positive".into()));
    }
    let gamma = level_function(mu, r)?.values().to_vec();
    let units = coeffs.into_iter().map(|c| TruncatedSeries::new(f, c, precision)).collect();
    Ok(LocalEquation { rank: r, mu: mu.clone(), partition: mu.dual(), gamma, units, precision, field: f.describe() })
}

pub fn local_equation_from_constants<F: Field>(
    mu: &Partition,
    coeffs: &[F::Elem],
    f: &F,
    precision: usize,
) -> Result<LocalEquation<F::Elem>> {
    local_equation_from_type(mu, coeffs.iter().map(|c| vec![c.clone()]).collect(), f, precision)
}

fn render_bivariate<F: Field>(m: &BTreeMap<(usize, usize), F::Elem>, f: &F, var: &str) -> String {
    let mut keys: Vec<&(usize, usize)> = m.keys().collect();
    keys.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
    let terms: Vec<String> = keys
        .into_iter()
        .map(|k| {
            let c = f.format(&m[k]);
            let mut mono = Vec::new();
            if k.0 > 0 {
                mono.push(if k.0 == 1 { "l".to_string() } else { format!("l^{}", k.0) });
            }
            if k.1 > 0 {
                mono.push(if k.1 == 1 { var.to_string() } else { format!("{var}^{}", k.1) });
            }
            match (c.as_str(), mono.is_empty()) {
                (_, true) => c,
                ("1", false) => mono.join("*"),
                _ => format!("({c})*{}", mono.join("*")),
            }
        })
        .collect();
    terms.join(" + ")
}

fn render_poly<F: Field>(p: &Poly<F::Elem>, f: &F) -> Vec<String> {
    p.coeffs().iter().map(|c| f.format(c)).collect()
}

/// Closed points with a given ramification index and residue degree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ProfileEntry {
    pub ramification: usize,
    pub residue_degree: usize,
    pub count: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RamificationProfile {
    pub entries: Vec<ProfileEntry>,
}

impl RamificationProfile {
    fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut tally: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for p in pairs {
            *tally.entry(p).or_default() += 1;
        }
        let mut entries: Vec<ProfileEntry> = tally
            .into_iter()
            .map(|((e, d), count)| ProfileEntry { ramification: e, residue_degree: d, count })
            .collect();
        entries.sort_by(|a, b| b.ramification.cmp(&a.ramification).then(a.residue_degree.cmp(&b.residue_degree)));
        RamificationProfile { entries }
    }

    /// Ramification indices over the algebraic closure, non-increasing.
    pub fn geometric(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.ramification, e.residue_degree * e.count))
            .collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    /// `Σ e · deg · count`, the degree of the fibre.
    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.ramification * e.residue_degree * e.count).sum()
    }

    /// Degree of the rational divisor formed by all points of index `e`.
    pub fn group_degrees(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for e in &self.entries {
            *m.entry(e.ramification).or_default() += e.residue_degree * e.count;
        }
        m
    }

    /// Number of closed points with residue degree dividing `m`, weighted by
    /// that degree: the number of points over the degree-`m` extension.
    pub fn points_over_extension(&self, m: usize) -> usize {
        self.entries
            .iter()
            .filter(|e| m % e.residue_degree == 0)
            .map(|e| e.residue_degree * e.count)
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaLedger {
    pub multiplicities: Vec<usize>,
    pub delta: usize,
}

impl DeltaLedger {
    fn new(multiplicities: Vec<usize>) -> Self {
        let delta = multiplicities.iter().map(|m| m * m.saturating_sub(1) / 2).sum();
        DeltaLedger { multiplicities, delta }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupStage<E> {
    pub index: usize,
    /// Strict transform `E_i(λ, u)` as `(λ-exp, u-exp) -> coeff`.
    pub equation: BTreeMap<(usize, usize), E>,
    /// Every monomial not stored has total degree at least this.
    pub total_degree_bound: usize,
    /// Every monomial not stored has `u`-degree at least this.
    pub u_degree_bound: usize,
    /// Multiplicity of the previous stage at its origin.
    pub exceptional_multiplicity: usize,
    /// `n_i`.
    pub expected_multiplicity: usize,
    /// The other chart of the blow-up contains no point of the strict
    /// transform over the origin.
    pub chart_one_clear: bool,
    pub ramification_polynomial: Poly<E>,
    /// Nonzero roots of `R_i` are simple.
    pub simple_roots: bool,
    /// Distinct nonzero roots of `R_i` over the algebraic closure.
    pub distinct_nonzero_roots: usize,
    /// `max - min` of the exponents occurring in `R_i`.
    pub degree_spread: usize,
    /// Residue degrees of the closed points with index `i`.
    pub residue_degrees: Vec<usize>,
    /// A singular point of the stage lies on `λ = 0` away from the origin.
    pub singular_off_origin: bool,
}

impl<E: Clone + PartialEq> BlowupStage<E> {
    /// Value `N_i` read off the equation: the pure `λ` power.
    pub fn lambda_power(&self) -> Option<usize> {
        self.equation.keys().filter(|k| k.1 == 0).map(|k| k.0).min()
    }

    /// Lowest total degree of a monomial, the multiplicity at the origin
    /// (0 when the origin is not on the curve).
    pub fn origin_multiplicity(&self) -> usize {
        self.equation.keys().map(|k| k.0 + k.1).min().unwrap_or(0)
    }

    pub fn to_json<F: Field<Elem = E>>(&self, f: &F) -> Value {
        json!({
            "index": self.index,
            "equation": render_bivariate(&self.equation, f, "u"),
            "exceptional_multiplicity": self.exceptional_multiplicity,
            "expected_multiplicity": self.expected_multiplicity,
            "chart_one_clear": self.chart_one_clear,
            "ramification_polynomial": render_poly(&self.ramification_polynomial, f),
            "simple_roots": self.simple_roots,
            "distinct_nonzero_roots": self.distinct_nonzero_roots,
            "degree_spread": self.degree_spread,
            "residue_degrees": self.residue_degrees,
            "origin_multiplicity": self.origin_multiplicity(),
            "singular_off_origin": self.singular_off_origin,
        })
    }
}

/// `E_{i-1}(λ, λu) / λ^{m}` with `m` the multiplicity at the origin, plus the
/// certificate for the complementary chart `λ = u_{i-1} v`.
pub fn blowup_step<F: ResidueField>(prev: &BlowupStage<F::Elem>, n: &Partition, f: &F) -> Result<BlowupStage<F::Elem>> {
    let i = prev.index + 1;
    if i > n.len() {
        return Err(Error::OutOfRange { index: i, max: n.len() });
    }
    if prev.equation.keys().all(|k| k.1 == 0) {
        return Err(Error::Degenerate(format!("stage {} is a pure power of λ", prev.index)));
    }
    let m = prev.origin_multiplicity();
    if m >= prev.total_degree_bound {
        return Err(Error::PrecisionExhausted { stage: prev.index, have: prev.total_degree_bound, need: m + 1 });
    }
    let chart_one_clear = prev.equation.get(&(0, m)).is_some_and(|c| !f.is_zero(c));
    let equation: BTreeMap<(usize, usize), F::Elem> =
        prev.equation.iter().map(|(&(a, b), c)| ((a + b - m, b), c.clone())).collect();
    let total_degree_bound = prev.total_degree_bound + prev.u_degree_bound - m;
    let lambda_bound = prev.total_degree_bound - m;
    if lambda_bound < 2 {
        return Err(Error::PrecisionExhausted { stage: i, have: lambda_bound, need: 2 });
    }
    let mut stage = BlowupStage {
        index: i,
        equation,
        total_degree_bound,
        u_degree_bound: prev.u_degree_bound,
        exceptional_multiplicity: m,
        expected_multiplicity: n.part(i),
        chart_one_clear,
        ramification_polynomial: Poly::zero(),
        simple_roots: true,
        distinct_nonzero_roots: 0,
        degree_spread: 0,
        residue_degrees: Vec::new(),
        singular_off_origin: false,
    };
    analyze_stage(&mut stage, f);
    Ok(stage)
}

fn u_poly<F: Field>(eq: &BTreeMap<(usize, usize), F::Elem>, lambda_exp: usize, f: &F) -> Poly<F::Elem> {
    let deg = eq.keys().filter(|k| k.0 == lambda_exp).map(|k| k.1).max();
    let Some(deg) = deg else { return Poly::zero() };
    let mut v = vec![f.zero(); deg + 1];
    for (&(a, b), c) in eq {
        if a == lambda_exp {
            v[b] = c.clone();
        }
    }
    Poly::from_coeffs(f, v)
}

fn analyze_stage<F: ResidueField>(stage: &mut BlowupStage<F::Elem>, f: &F) {
    let r = u_poly(&stage.equation, 0, f);
    let exps: Vec<usize> = r.coeffs().iter().enumerate().filter(|(_, c)| !f.is_zero(c)).map(|(k, _)| k).collect();
    stage.degree_spread = match (exps.first(), exps.last()) {
        (Some(lo), Some(hi)) => hi - lo,
        _ => 0,
    };
    let (_, nonzero_part) = r.strip_x_power(f);
    if nonzero_part.degree().unwrap_or(0) > 0 {
        let d = nonzero_part.derivative(f);
        let g = nonzero_part.gcd(&d, f);
        stage.simple_roots = g.degree() == Some(0);
        let squarefree = nonzero_part.div_exact(&g, f).expect("gcd divides");
        stage.distinct_nonzero_roots = squarefree.degree().unwrap_or(0);
        stage.residue_degrees = f.irreducible_degrees(&squarefree);
        if !stage.simple_roots {
            // A repeated nonzero root is a singular point unless ∂E/∂λ is
            // nonzero there.
            let dl = u_poly(&stage.equation, 1, f);
            let common = g.gcd(&dl, f);
            stage.singular_off_origin = common.degree().unwrap_or(0) > 0 || dl.is_zero();
        }
    }
    stage.ramification_polynomial = r;
}

fn stage_zero<F: Field>(eq: &LocalEquation<F::Elem>, f: &F) -> BlowupStage<F::Elem> {
    BlowupStage {
        index: 0,
        equation: eq.monomials(f),
        total_degree_bound: eq.precision + 1,
        u_degree_bound: eq.precision + 1,
        exceptional_multiplicity: 0,
        expected_multiplicity: 0,
        chart_one_clear: true,
        ramification_polynomial: Poly::zero(),
        simple_roots: true,
        distinct_nonzero_roots: 0,
        degree_spread: 0,
        residue_degrees: Vec::new(),
        singular_off_origin: false,
    }
}

/// The fiber over `t = 0` at stage `i`: for `i = σ` the constant `1` enters
/// `R_σ` through `λ^{N_σ} = 1`.
pub fn ramification_polynomial<F: ResidueField>(eq: &LocalEquation<F::Elem>, i: usize, f: &F) -> Result<Poly<F::Elem>> {
    let mut stage = stage_zero(eq, f);
    for _ in 0..i {
        stage = blowup_step(&stage, &eq.partition, f)?;
    }
    Ok(stage.ramification_polynomial)
}

#[derive(Clone, Debug)]
pub struct ResolutionResult<E> {
    pub profile: RamificationProfile,
    pub ledger: DeltaLedger,
    pub stages: Vec<BlowupStage<E>>,
    pub generic: bool,
    pub nonunits: Vec<usize>,
    /// The only possible singular point of every stage is its origin.
    pub singular_locus_in_origin: bool,
    pub chart_one_clear: bool,
}

impl<E: Clone + PartialEq> ResolutionResult<E> {
    pub fn to_json<F: Field<Elem = E>>(&self, f: &F) -> Value {
        json!({
            "profile": self.profile,
            "geometric_profile": self.profile.geometric(),
            "ledger": self.ledger,
            "generic": self.generic,
            "nonunits": self.nonunits,
            "singular_locus_in_origin": self.singular_locus_in_origin,
            "chart_one_clear": self.chart_one_clear,
            "stages": self.stages.iter().map(|s| s.to_json(f)).collect::<Vec<_>>(),
        })
    }
}

/// Runs all `σ` stages.
pub fn resolve<F: ResidueField>(eq: &LocalEquation<F::Elem>, f: &F) -> Result<ResolutionResult<F::Elem>> {
    let sigma = eq.partition.len();
    let mut stages = Vec::with_capacity(sigma);
    let mut cur = stage_zero(eq, f);
    for _ in 0..sigma {
        cur = blowup_step(&cur, &eq.partition, f)?;
        stages.push(cur.clone());
    }
    let profile = RamificationProfile::from_pairs(
        stages.iter().flat_map(|s| s.residue_degrees.iter().map(move |&d| (s.index, d))),
    );
    let ledger = DeltaLedger::new(stages.iter().map(|s| s.exceptional_multiplicity).collect());
    let generic = stages.iter().all(|s| s.simple_roots && s.exceptional_multiplicity == s.expected_multiplicity)
        && profile.geometric() == eq.mu.parts();
    Ok(ResolutionResult {
        profile,
        ledger,
        generic,
        nonunits: eq.nonunits(f),
        singular_locus_in_origin: stages.iter().all(|s| !s.singular_off_origin),
        chart_one_clear: stages.iter().all(|s| s.chart_one_clear),
        stages,
    })
}

/// Ramification indices over the algebraic closure from the lower Newton
/// polygon of the support `{(r-ℓ, γ_ℓ + ord c_ℓ)} ∪ {(r, 0)}`.
pub fn newton_polygon_profile<F: Field>(eq: &LocalEquation<F::Elem>, f: &F) -> Result<RamificationProfile> {
    let r = eq.rank;
    let mut lowest: BTreeMap<usize, usize> = BTreeMap::new();
    lowest.insert(r, 0);
    for (idx, c) in eq.units.iter().enumerate() {
        if let Some((k, _)) = c.terms(f).next() {
            let x = r - (idx + 1);
            let y = eq.gamma[idx] + k;
            lowest.entry(x).and_modify(|v| *v = (*v).min(y)).or_insert(y);
        }
    }
    if !lowest.contains_key(&0) {
        return Err(Error::Degenerate("the constant term in λ vanishes".into()));
    }
    let pts: Vec<(i64, i64)> = lowest.into_iter().map(|(x, y)| (x as i64, y as i64)).collect();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut pairs = Vec::new();
    for w in hull.windows(2) {
        let (len, height) = (w[1].0 - w[0].0, w[0].1 - w[1].1);
        let g = len.gcd(&height);
        let b = (len / g) as usize;
        pairs.extend(std::iter::repeat_n((b, 1), g as usize));
    }
    Ok(RamificationProfile::from_pairs(pairs))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorGcd {
    /// gcd of the degrees of the rational divisors `Σ_{e(P)=i} P` over all
    /// marked points and indices.
    pub group_gcd: usize,
    /// gcd of the residue degrees of all closed points over the marked points.
    pub closed_point_gcd: usize,
    pub delta_p: usize,
    pub divides_delta_p: bool,
}

pub fn rational_divisor_gcd(profiles: &[&RamificationProfile], delta_p: usize) -> DivisorGcd {
    let group_gcd = profiles.iter().flat_map(|p| p.group_degrees().into_values()).fold(0usize, |g, d| g.gcd(&d));
    let closed_point_gcd =
        profiles.iter().flat_map(|p| p.entries.iter().map(|e| e.residue_degree)).fold(0usize, |g, d| g.gcd(&d));
    DivisorGcd { group_gcd, closed_point_gcd, delta_p, divides_delta_p: group_gcd != 0 && delta_p % group_gcd == 0 }
}
