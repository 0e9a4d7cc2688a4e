//! Stringy E-polynomials and (twisted) stringy point counts of abelian
//! quotient orbifolds, evaluated from declarative sector data.
//!
//! Each sector `γ` carries components `Z` with eigenvalue exponents `c_i`
//! (the eigenvalues of `γ` on the normal directions are `ζ^{c_i}` with
//! `ζ` of order `ord γ`), an E-polynomial, a point-count polynomial in `q`,
//! and optionally a twisted E-polynomial and a Frobenius trace. The
//! fermionic shift is `F = Σ c_i / ord γ` and
//!
//! - `E_st = Σ_γ Σ_Z E(Z; u, v) (uv)^F`,
//! - `#_st(q) = Σ_γ Σ_Z q^F #Z(q)`, twisted by multiplying with the trace.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::arith::cyclotomic::Cyclotomic;
use crate::arith::field::{format_rational, parse_rational};
use crate::error::{Error, Result};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Bivariate polynomial in `u, v` with rational exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EPolynomial {
    pub terms: BTreeMap<(BigRational, BigRational), BigInt>,
}

impl EPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(p: BigRational, q: BigRational, c: BigInt) -> Self {
        let mut e = Self::zero();
        e.add_term(p, q, c);
        e
    }

    pub fn one() -> Self {
        Self::monomial(rat(0), rat(0), BigInt::one())
    }

    /// `(uv)^k`.
    pub fn uv_power(k: i64) -> Self {
        Self::monomial(rat(k), rat(k), BigInt::one())
    }

    fn add_term(&mut self, p: BigRational, q: BigRational, c: BigInt) {
        let entry = self.terms.entry((p.clone(), q.clone())).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(p, q));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((p, q), c) in &other.terms {
            out.add_term(p.clone(), q.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((p1, q1), c1) in &self.terms {
            for ((p2, q2), c2) in &other.terms {
                out.add_term(p1 + p2, q1 + q2, c1 * c2);
            }
        }
        out
    }

    /// Multiplies by `(uv)^s`.
    pub fn shift(&self, s: &BigRational) -> Self {
        let mut out = Self::zero();
        for ((p, q), c) in &self.terms {
            out.add_term(p + s, q + s, c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `E(x, x)` as a symbolic power series in `x`: exponent `p + q`.
    pub fn diagonal(&self) -> QPoly<BigInt> {
        let mut out = QPoly::default();
        for ((p, q), c) in &self.terms {
            out.add_term(p + q, c.clone());
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|((p, q), c)| json!({"p": format_rational(p), "q": format_rational(q), "coeff": c.to_string()}))
                .collect(),
        )
    }
}

fn power_name(var: &str, e: &BigRational) -> String {
    if e.is_zero() {
        String::new()
    } else if e.is_one() {
        var.to_string()
    } else if e.is_integer() {
        format!("{var}^{e}")
    } else {
        format!("{var}^({})", format_rational(e))
    }
}

/// `coeff * mono`, dropping unit coefficients.
fn term(coeff: &str, mono: &str) -> String {
    match (mono.is_empty(), coeff) {
        (true, _) => coeff.to_string(),
        (false, "1") => mono.to_string(),
        (false, "-1") => format!("-{mono}"),
        (false, _) if coeff.contains(' ') => format!("({coeff})*{mono}"),
        _ => format!("{coeff}*{mono}"),
    }
}

fn join_signed(terms: &[String]) -> String {
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        match (i, t.strip_prefix('-')) {
            (0, _) => out.push_str(t),
            (_, Some(rest)) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            _ => {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
    }
    out
}

impl fmt::Display for EPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|((p, q), c)| {
                let mono = format!("{}{}", power_name("u", p), power_name("v", q));
                term(&c.to_string(), &mono)
            })
            .collect();
        write!(f, "{}", join_signed(&terms))
    }
}

/// Coefficients a stringy count can carry.
pub trait CountCoeff: Clone + fmt::Debug + PartialEq {
    fn nothing() -> Self;
    fn vanishes(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn scaled(&self, n: &BigRational) -> Self;
    fn render(&self) -> String;
}

impl CountCoeff for BigInt {
    fn nothing() -> Self {
        Zero::zero()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn scaled(&self, n: &BigRational) -> Self {
        let v = n * BigRational::from_integer(self.clone());
        assert!(v.is_integer(), "integer counts are only scaled by integers");
        v.to_integer()
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl CountCoeff for Cyclotomic {
    fn nothing() -> Self {
        Cyclotomic::zero()
    }
    fn vanishes(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        Cyclotomic::add(self, other)
    }
    fn scaled(&self, n: &BigRational) -> Self {
        Cyclotomic::scale(self, n)
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

/// `Σ c_e q^e` with rational exponents `e`.
#[derive(Clone, Debug, PartialEq)]
pub struct QPoly<C: CountCoeff> {
    pub terms: BTreeMap<BigRational, C>,
}

impl<C: CountCoeff> Default for QPoly<C> {
    fn default() -> Self {
        QPoly { terms: BTreeMap::new() }
    }
}

impl<C: CountCoeff> QPoly<C> {
    pub fn add_term(&mut self, e: BigRational, c: C) {
        let next = match self.terms.get(&e) {
            Some(old) => old.plus(&c),
            None => c,
        };
        if next.vanishes() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, next);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// Multiplies by `q^s`.
    pub fn shift(&self, s: &BigRational) -> Self {
        QPoly { terms: self.terms.iter().map(|(e, c)| (e + s, c.clone())).collect() }
    }

    /// Substitutes `q -> q^k`.
    pub fn substitute_power(&self, k: i64) -> Self {
        let k = rat(k);
        QPoly { terms: self.terms.iter().map(|(e, c)| (e * &k, c.clone())).collect() }
    }

    /// Exact value at `q`; every `q^e` must be rational.
    pub fn evaluate(&self, q: u64) -> Result<C> {
        let mut acc = C::nothing();
        for (e, c) in &self.terms {
            let v = rational_power(q, e).ok_or_else(|| {
                Error::FractionalPower(format!("q^{} is irrational at q = {q}", format_rational(e)))
            })?;
            acc = acc.plus(&c.scaled(&v));
        }
        Ok(acc)
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let terms: Vec<String> = self.terms.iter().rev().map(|(e, c)| term(&c.render(), &power_name("q", e))).collect();
        join_signed(&terms)
            
    }
}

/// `q^e` when it is rational.
pub fn rational_power(q: u64, e: &BigRational) -> Option<BigRational> {
    let (num, den) = (e.numer(), e.denom().to_u32()?);
    let root = (q as u128).nth_root(den);
    if root.pow(den) != q as u128 {
        return None;
    }
    let base = BigRational::from_integer(BigInt::from(root));
    let n = num.abs().to_i32()?;
    let v = num_traits::pow::Pow::pow(&base, n as u32);
    Some(if num.is_negative() { v.recip() } else { v })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SectorComponent {
    pub label: String,
    pub eigen_exponents: Vec<u64>,
    pub e_poly: Option<EPolynomial>,
    pub count: Option<QPoly<BigInt>>,
    pub twisted_e_poly: Option<EPolynomial>,
    /// `ζ_order^num`.
    pub trace: Option<(i64, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub label: String,
    pub order: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbifoldDescription {
    pub ambient_dim: usize,
    pub group: Vec<GroupElement>,
    /// Components of the fixed locus of each group element, keyed by label.
    pub sectors: BTreeMap<String, Vec<SectorComponent>>,
}

/// `Σ c_i / order`.
pub fn fermionic_shift(exponents: &[u64], order: u64) -> Result<BigRational> {
    if order == 0 {
        return Err(Error::InvalidInput("group element order must be positive".into()));
    }
    if let Some(c) = exponents.iter().find(|&&c| c >= order) {
        return Err(Error::InvalidInput(format!("eigenvalue exponent {c} is not below the order {order}")));
    }
    let total: u64 = exponents.iter().sum();
    Ok(BigRational::new(BigInt::from(total), BigInt::from(order)))
}

impl OrbifoldDescription {
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        let identities: Vec<&GroupElement> = self.group.iter().filter(|g| g.order == 1).collect();
        if identities.len() != 1 {
            errs.push(format!("exactly one identity element (order 1) is required, found {}", identities.len()));
        }
        for (i, g) in self.group.iter().enumerate() {
            if g.order == 0 {
                errs.push(format!("group.{}: order must be positive", g.label));
            }
            if self.group[..i].iter().any(|h| h.label == g.label) {
                errs.push(format!("group.{}: repeated label", g.label));
            }
        }
        for (label, comps) in &self.sectors {
            let Some(g) = self.group.iter().find(|g| &g.label == label) else {
                errs.push(format!("sectors.{label}: not a group element"));
                continue;
            };
            for c in comps {
                let path = format!("sectors.{label}.{}", c.label);
                if c.eigen_exponents.len() != self.ambient_dim {
                    errs.push(format!("{path}: expected {} eigenvalue exponents", self.ambient_dim));
                }
                if c.eigen_exponents.iter().any(|&e| e >= g.order.max(1)) {
                    errs.push(format!("{path}: eigenvalue exponents must lie in 0..{}", g.order));
                }
                if g.order == 1 && c.eigen_exponents.iter().any(|&e| e != 0) {
                    errs.push(format!("{path}: identity components must have zero exponents"));
                }
                if let Some((_, o)) = c.trace {
                    if o == 0 {
                        errs.push(format!("{path}: trace order must be positive"));
                    }
                }
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidInput(errs.join("; ")))
        }
    }

    fn order_of(&self, label: &str) -> u64 {
        self.group.iter().find(|g| g.label == label).map_or(1, |g| g.order)
    }

    fn components(&self) -> impl Iterator<Item = (&str, u64, &SectorComponent)> {
        self.sectors.iter().flat_map(move |(l, cs)| {
            let order = self.order_of(l);
            cs.iter().map(move |c| (l.as_str(), order, c))
        })
    }
}

/// `Σ_γ Σ_Z E(Z; u, v) (uv)^{F(γ, Z)}`.
pub fn stringy_e(desc: &OrbifoldDescription) -> Result<EPolynomial> {
    let mut acc = EPolynomial::zero();
    for (sector, order, c) in desc.components() {
        let e = c.e_poly.as_ref().ok_or_else(|| Error::MissingSectorData(format!("e_poly of {sector}/{}", c.label)))?;
        acc = acc.add(&e.shift(&fermionic_shift(&c.eigen_exponents, order)?));
    }
    Ok(acc)
}

/// Same assembly over the twisted (isotypic) E-polynomials.
pub fn stringy_e_twisted(desc: &OrbifoldDescription) -> Result<EPolynomial> {
    let mut acc = EPolynomial::zero();
    for (sector, order, c) in desc.components() {
        let e = c
            .twisted_e_poly
            .as_ref()
            .ok_or_else(|| Error::MissingSectorData(format!("twisted_e_poly of {sector}/{}", c.label)))?;
        acc = acc.add(&e.shift(&fermionic_shift(&c.eigen_exponents, order)?));
    }
    Ok(acc)
}

/// `Σ_γ Σ_Z q^{F(γ, Z)} #Z(q)` as a symbolic polynomial in `q`.
pub fn stringy_count_symbolic(desc: &OrbifoldDescription) -> Result<QPoly<BigInt>> {
    let mut acc = QPoly::default();
    for (sector, order, c) in desc.components() {
        let n = c.count.as_ref().ok_or_else(|| Error::MissingSectorData(format!("count of {sector}/{}", c.label)))?;
        acc = acc.add(&n.shift(&fermionic_shift(&c.eigen_exponents, order)?));
    }
    Ok(acc)
}

pub fn stringy_count(desc: &OrbifoldDescription, q: u64) -> Result<BigRational> {
    let v = stringy_count_symbolic(desc)?.evaluate(q)?;
    Ok(BigRational::from_integer(v))
}

/// Twisted count with every component weighted by its trace.
pub fn stringy_count_twisted_symbolic(desc: &OrbifoldDescription) -> Result<QPoly<Cyclotomic>> {
    let mut acc = QPoly::default();
    for (sector, order, c) in desc.components() {
        let n = c.count.as_ref().ok_or_else(|| Error::MissingSectorData(format!("count of {sector}/{}", c.label)))?;
        let (num, tord) =
            c.trace.ok_or_else(|| Error::MissingSectorData(format!("trace of {sector}/{}", c.label)))?;
        let z = Cyclotomic::root_of_unity(num, tord);
        let shift = fermionic_shift(&c.eigen_exponents, order)?;
        for (e, k) in &n.terms {
            acc.add_term(e + &shift, z.scale(&BigRational::from_integer(k.clone())));
        }
    }
    Ok(acc)
}

pub fn stringy_count_twisted(desc: &OrbifoldDescription, q: u64) -> Result<Cyclotomic> {
    stringy_count_twisted_symbolic(desc)?.evaluate(q)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightCheck {
    pub holds: bool,
    /// The comparison used exact values (`true`) or symbolic polynomials.
    pub numeric: bool,
    pub count_side: String,
    pub e_side: String,
}

/// `#_st(q²) = E_st(q, q)`. Values are compared exactly when every power
/// of `q` involved is rational, symbolically otherwise.
pub fn weight_consistency(desc: &OrbifoldDescription, q: u64) -> Result<WeightCheck> {
    let count = stringy_count_symbolic(desc)?.substitute_power(2);
    let e = stringy_e(desc)?.diagonal();
    match (count.evaluate(q), e.evaluate(q)) {
        (Ok(a), Ok(b)) => Ok(WeightCheck { holds: a == b, numeric: true, count_side: a.to_string(), e_side: b.to_string() }),
        _ => Ok(WeightCheck { holds: count == e, numeric: false, count_side: count.render(), e_side: e.render() }),
    }
}

// ---- sector file format ----

#[derive(Deserialize)]
#[serde(untagged)]
enum RatIn {
    Int(i64),
    Str(String),
}

impl RatIn {
    fn get(&self, path: &str, errs: &mut Vec<String>) -> BigRational {
        match self {
            RatIn::Int(n) => rat(*n),
            RatIn::Str(s) => parse_rational(s).unwrap_or_else(|| {
                errs.push(format!("{path}: {s:?} is not a rational number"));
                rat(0)
            }),
        }
    }

    fn get_int(&self, path: &str, errs: &mut Vec<String>) -> BigInt {
        let r = self.get(path, errs);
        if !r.is_integer() {
            errs.push(format!("{path}: coefficient must be an integer"));
        }
        r.to_integer()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ETermIn {
    p: RatIn,
    q: RatIn,
    coeff: RatIn,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CountTermIn {
    exp: RatIn,
    coeff: RatIn,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TraceIn {
    num: i64,
    order: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentIn {
    label: String,
    eigen_exponents: Vec<u64>,
    #[serde(default)]
    e_poly: Option<Vec<ETermIn>>,
    #[serde(default)]
    count: Option<Vec<CountTermIn>>,
    #[serde(default)]
    twisted_e_poly: Option<Vec<ETermIn>>,
    #[serde(default)]
    trace: Option<TraceIn>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupIn {
    label: String,
    order: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DescriptionIn {
    ambient_dim: usize,
    group: Vec<GroupIn>,
    sectors: BTreeMap<String, Vec<ComponentIn>>,
    #[serde(default)]
    #[allow(dead_code)]
    description: Option<String>,
}

fn e_poly_from(terms: &[ETermIn], path: &str, errs: &mut Vec<String>) -> EPolynomial {
    let mut e = EPolynomial::zero();
    for (i, t) in terms.iter().enumerate() {
        let p = format!("{path}[{i}]");
        e.add_term(t.p.get(&p, errs), t.q.get(&p, errs), t.coeff.get_int(&p, errs));
    }
    e
}

/// Parses a sector file.
pub fn parse_sector_file(text: &str) -> Result<OrbifoldDescription> {
    let raw: DescriptionIn =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("sector file: {e}")))?;
    let mut errs = Vec::new();
    let mut sectors = BTreeMap::new();
    for (label, comps) in &raw.sectors {
        let mut out = Vec::new();
        for c in comps {
            let path = format!("sectors.{label}.{}", c.label);
            let count = c.count.as_ref().map(|terms| {
                let mut n = QPoly::default();
                for (i, t) in terms.iter().enumerate() {
                    let p = format!("{path}.count[{i}]");
                    n.add_term(t.exp.get(&p, &mut errs), t.coeff.get_int(&p, &mut errs));
                }
                n
            });
            out.push(SectorComponent {
                label: c.label.clone(),
                eigen_exponents: c.eigen_exponents.clone(),
                e_poly: c.e_poly.as_ref().map(|t| e_poly_from(t, &format!("{path}.e_poly"), &mut errs)),
                twisted_e_poly: c
                    .twisted_e_poly
                    .as_ref()
                    .map(|t| e_poly_from(t, &format!("{path}.twisted_e_poly"), &mut errs)),
                count,
                trace: c.trace.as_ref().map(|t| (t.num, t.order)),
            });
        }
        sectors.insert(label.clone(), out);
    }
    if !errs.is_empty() {
        return Err(Error::InvalidInput(errs.join("; ")));
    }
    let desc = OrbifoldDescription {
        ambient_dim: raw.ambient_dim,
        group: raw.group.into_iter().map(|g| GroupElement { label: g.label, order: g.order }).collect(),
        sectors,
    };
    desc.validate()?;
    Ok(desc)
}
