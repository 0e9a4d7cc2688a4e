//! Partition combinatorics of quasi-parabolic types.
//!
//! At a marked point the flag quotient dimensions are sorted into a partition
//! `n_1 ≥ … ≥ n_σ` of the rank. Its dual `μ` gives the ramification indices of
//! the normalized spectral curve, and the level function `γ` built from `μ`
//! gives the vanishing orders of the characteristic coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};

/// A partition stored with parts in non-increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Validates already-sorted positive parts.
    pub fn new(parts: Vec<usize>) -> Result<Partition> {
        if parts.is_empty() {
            return Err(Error::InvalidInput("a partition needs at least one part".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidInput(format!("partition {parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!("partition {parts:?} is not non-increasing")));
        }
        Ok(Partition { parts })
    }

    /// Sorts positive parts into a partition.
    pub fn from_unsorted(parts: &[usize]) -> Result<Partition> {
        let mut v = parts.to_vec();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(v)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts (σ).
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// 1-based part `n_i`.
    pub fn part(&self, i: usize) -> usize {
        self.parts[i - 1]
    }

    /// `μ_j = #{ℓ : n_ℓ ≥ j}`.
    pub fn dual(&self) -> Partition {
        let largest = self.parts[0];
        let parts = (1..=largest).map(|j| self.parts.iter().filter(|&&n| n >= j).count()).collect();
        Partition { parts }
    }

    pub fn sum_of_squares(&self) -> usize {
        self.parts.iter().map(|n| n * n).sum()
    }

    /// All partitions of `n` in reverse lexicographic order, starting at `(n)`.
    pub fn all(n: usize) -> Vec<Partition> {
        fn go(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for k in (1..=rem.min(max)).rev() {
                cur.push(k);
                go(rem - k, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            go(n, n, &mut Vec::new(), &mut out);
        }
        out
    }

    /// `(1, …, 1)`: the full-flag (Borel) type.
    pub fn is_full_flag(&self) -> bool {
        self.parts.iter().all(|&n| n == 1)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// `γ_1, …, γ_r` with `γ_j = l` iff `Σ_{t<l} μ_t < j ≤ Σ_{t≤l} μ_t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct LevelFunction {
    gamma: Vec<usize>,
}

impl LevelFunction {
    pub fn values(&self) -> &[usize] {
        &self.gamma
    }

    /// 1-based `γ_j`.
    pub fn at(&self, j: usize) -> usize {
        self.gamma[j - 1]
    }

    pub fn rank(&self) -> usize {
        self.gamma.len()
    }
}

pub fn dual_partition(p: &Partition) -> Partition {
    p.dual()
}

pub fn level_function(mu: &Partition, r: usize) -> Result<LevelFunction> {
    if mu.total() != r {
        return Err(Error::InvalidInput(format!("dual partition {mu} does not total r = {r}")));
    }
    let gamma = mu
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(l, &m)| std::iter::repeat_n(l + 1, m))
        .collect();
    Ok(LevelFunction { gamma })
}

/// Outcome of the successive-degree minimisation at stage `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelData {
    pub stage: usize,
    /// `min_ℓ (iγ_ℓ + N_{i-1} - ℓ)`.
    pub min_value: usize,
    /// `L_i`, 1-based indices attaining the minimum.
    pub level_set: Vec<usize>,
    /// `n_i`, the value the minimum should equal.
    pub expected: usize,
    /// Some `ℓ ∈ L_i` with `(i-1)γ_ℓ + N_{i-1} - ℓ = 0`.
    pub part_a_witness: Option<usize>,
    /// `max γ - min γ` over `L_i`, the literal reading of part (b).
    pub gamma_range: usize,
    /// `#{ℓ : μ_ℓ = i}`.
    pub multiplicity: usize,
}

impl LevelData {
    pub fn min_holds(&self) -> bool {
        self.min_value == self.expected
    }

    pub fn part_a_holds(&self) -> bool {
        self.part_a_witness.is_some()
    }

    /// Part (b) read literally; known to fail e.g. for `n = (2,1)`, `i = 2`.
    pub fn literal_part_b_holds(&self) -> bool {
        self.gamma_range == self.multiplicity
    }
}

/// `N_{i} = Σ_{j > i} n_j`, so `N_0 = r` and `N_σ = 0`.
pub fn tail_sum(n: &Partition, i: usize) -> usize {
    n.parts().iter().skip(i).sum()
}

pub fn min_level_data(n: &Partition, gamma: &LevelFunction, i: usize) -> Result<LevelData> {
    let sigma = n.len();
    if i == 0 || i > sigma {
        return Err(Error::OutOfRange { index: i, max: sigma });
    }
    let r = gamma.rank();
    let tail = tail_sum(n, i - 1) as i64;
    let value = |l: usize| i as i64 * gamma.at(l) as i64 + tail - l as i64;
    let min_value = (1..=r).map(value).min().unwrap();
    let level_set: Vec<usize> = (1..=r).filter(|&l| value(l) == min_value).collect();
    let part_a_witness = level_set
        .iter()
        .copied()
        .find(|&l| (i as i64 - 1) * gamma.at(l) as i64 + tail - l as i64 == 0);
    let gs: Vec<usize> = level_set.iter().map(|&l| gamma.at(l)).collect();
    let gamma_range = gs.iter().max().unwrap() - gs.iter().min().unwrap();
    let multiplicity = ramification_multiplicity_counts(&n.dual()).get(&i).copied().unwrap_or(0);
    Ok(LevelData {
        stage: i,
        min_value: min_value.max(0) as usize,
        level_set,
        expected: n.part(i),
        part_a_witness,
        gamma_range,
        multiplicity,
    })
}

/// `i ↦ #{ℓ : μ_ℓ = i}` for the indices that occur.
pub fn ramification_multiplicity_counts(mu: &Partition) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for &p in mu.parts() {
        *m.entry(p).or_insert(0) += 1;
    }
    m
}

/// `m_i = Σ_{k ≥ i} #{ℓ : μ_ℓ = k}` for `i = 1..=max μ`; returned sorted.
pub fn filtration_dims(mu: &Partition) -> Vec<usize> {
    let counts = ramification_multiplicity_counts(mu);
    let top = mu.parts()[0];
    (1..=top).map(|i| counts.range(i..).map(|(_, c)| c).sum()).collect()
}

/// `dim G/P = (r² - Σ n_i²)/2`.
pub fn flag_dim(p: &Partition, r: usize) -> Result<usize> {
    if p.total() != r {
        return Err(Error::InvalidInput(format!("partition {p} does not total r = {r}")));
    }
    Ok((r * r - p.sum_of_squares()) / 2)
}

/// Where `γ_ℓ - γ_{ℓ+1} = -1`: exactly at the partial sums of `μ`.
pub fn level_steps(gamma: &LevelFunction) -> Vec<usize> {
    (1..gamma.rank()).filter(|&l| gamma.at(l + 1) == gamma.at(l) + 1).collect()
}

pub fn partial_sums(mu: &Partition) -> Vec<usize> {
    mu.parts()
        .iter()
        .scan(0, |acc, &m| {
            *acc += m;
            Some(*acc)
        })
        .collect()
}

/// Label of a marked point; `"inf"` is the point at infinity of the
/// projective line.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Position(pub String);

impl Position {
    pub fn infinity() -> Position {
        Position("inf".into())
    }

    pub fn label(&self) -> &str {
        &self.0
    }

    pub fn is_infinity(&self) -> bool {
        self.0 == "inf"
    }
}

/// Parabolic type at a single marked point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedPoint {
    pub position: Position,
    /// The flag quotient dimensions in the order given.
    pub original: Vec<usize>,
    pub partition: Partition,
    pub mu: Partition,
    pub gamma: LevelFunction,
    pub flag_dim: usize,
    /// Parabolic weights; carried along but never used numerically.
    pub weights: Option<Vec<BigRational>>,
}

impl MarkedPoint {
    pub fn new(position: Position, quotient_dims: &[usize], weights: Option<Vec<BigRational>>) -> Result<MarkedPoint> {
        let partition = Partition::from_unsorted(quotient_dims)?;
        let r = partition.total();
        let mu = partition.dual();
        let gamma = level_function(&mu, r)?;
        let flag_dim = flag_dim(&partition, r)?;
        if let Some(w) = &weights {
            let zero = BigRational::from_integer(0.into());
            let one = BigRational::from_integer(1.into());
            if w.iter().any(|a| *a < zero || *a >= one) {
                return Err(Error::InvalidInput(format!("weights at {} must lie in [0,1)", position.label())));
            }
        }
        Ok(MarkedPoint { position, original: quotient_dims.to_vec(), partition, mu, gamma, flag_dim, weights })
    }

    pub fn rank(&self) -> usize {
        self.partition.total()
    }

    /// `δ_x = (Σ n_i² - r)/2`.
    pub fn delta(&self) -> usize {
        (self.partition.sum_of_squares() - self.rank()) / 2
    }
}

/// Rank, genus and the parabolic types at the marked points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicData {
    pub rank: usize,
    pub genus: usize,
    pub points: Vec<MarkedPoint>,
}

impl ParabolicData {
    /// Validates and reports every violation, not just the first.
    pub fn new(rank: usize, genus: usize, points: Vec<MarkedPoint>) -> std::result::Result<ParabolicData, Vec<String>> {
        let mut errs = Vec::new();
        if rank < 2 {
            errs.push(format!("rank must be at least 2, got {rank}"));
        }
        if points.is_empty() {
            errs.push("at least one marked point is required".into());
        }
        for p in &points {
            if p.rank() != rank {
                errs.push(format!("partition {} at point {} does not sum to r = {rank}", p.partition, p.position.label()));
            }
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].iter().any(|q| q.position == p.position) {
                errs.push(format!("marked point {} is repeated", p.position.label()));
            }
        }
        if 2 * genus as i64 - 2 + points.len() as i64 <= 0 {
            errs.push(format!(
                "2g-2+deg D must be positive (g = {genus}, deg D = {})",
                points.len()
            ));
        }
        if errs.is_empty() {
            Ok(ParabolicData { rank, genus, points })
        } else {
            Err(errs)
        }
    }

    /// Builds data with the marked points labelled `0, 1, 2, …`.
    pub fn from_partitions(rank: usize, genus: usize, parts: &[&[usize]]) -> Result<ParabolicData> {
        let points = parts
            .iter()
            .enumerate()
            .map(|(i, p)| MarkedPoint::new(Position(i.to_string()), p, None))
            .collect::<Result<Vec<_>>>()?;
        Self::new(rank, genus, points).map_err(|e| Error::InvalidInput(e.join("; ")))
    }

    pub fn degree_d(&self) -> usize {
        self.points.len()
    }

    /// `deg ω_X(D) = 2g - 2 + deg D`.
    pub fn twist_degree(&self) -> i64 {
        2 * self.genus as i64 - 2 + self.points.len() as i64
    }
}

/// `gcd` of the nonzero counts `#{ℓ : μ_ℓ(x) = i}` over all points and indices.
pub fn delta_p(data: &ParabolicData) -> usize {
    data.points
        .iter()
        .flat_map(|p| ramification_multiplicity_counts(&p.mu).into_values())
        .fold(0usize, |g, c| g.gcd(&c))
}

/// Least `λ ∈ {1, …, Δ}` with `e ≡ λ d (mod Δ)`.
pub fn gerbe_compatible(d: i64, e: i64, delta: u64) -> Option<u64> {
    assert!(delta >= 1, "Δ_P is a positive integer");
    let m = delta as i64;
    (1..=delta).find(|&l| (e - l as i64 * d).rem_euclid(m) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn dual_examples() {
        assert_eq!(part(&[3]).dual(), part(&[1, 1, 1]));
        assert_eq!(part(&[1, 1, 1]).dual(), part(&[3]));
        assert_eq!(part(&[2, 1]).dual(), part(&[2, 1]));
        assert_eq!(part(&[2, 2]).dual(), part(&[2, 2]));
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert!(Partition::new(vec![]).is_err());
        assert_eq!(Partition::from_unsorted(&[1, 3, 2]).unwrap(), part(&[3, 2, 1]));
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=10).map(|n| Partition::all(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }

    #[test]
    fn level_function_examples() {
        assert_eq!(level_function(&part(&[1, 1, 1]), 3).unwrap().values(), &[1, 2, 3]);
        assert_eq!(level_function(&part(&[3]), 3).unwrap().values(), &[1, 1, 1]);
        assert_eq!(level_function(&part(&[2, 1]), 3).unwrap().values(), &[1, 1, 2]);
        assert!(matches!(level_function(&part(&[2, 1]), 4), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn min_level_examples() {
        let g = level_function(&part(&[2, 1]), 3).unwrap();
        let d = min_level_data(&part(&[2, 1]), &g, 1).unwrap();
        assert_eq!((d.min_value, d.level_set.clone()), (2, vec![2, 3]));
        assert!(d.min_holds() && d.part_a_holds());
        let d = min_level_data(&part(&[2, 1]), &g, 2).unwrap();
        assert_eq!((d.min_value, d.level_set.clone()), (1, vec![2]));
        // The literal γ-range reading of part (b) fails here.
        assert!(!d.literal_part_b_holds());
        let g = level_function(&part(&[2]), 2).unwrap();
        let d = min_level_data(&part(&[1, 1]), &g, 1).unwrap();
        assert_eq!((d.min_value, d.level_set), (1, vec![2]));
        assert_eq!(
            min_level_data(&part(&[1, 1]), &g, 3),
            Err(Error::OutOfRange { index: 3, max: 2 })
        );
    }

    #[test]
    fn ramification_counts_examples() {
        assert_eq!(ramification_multiplicity_counts(&part(&[2, 1])), BTreeMap::from([(1, 1), (2, 1)]));
        assert_eq!(ramification_multiplicity_counts(&part(&[3])), BTreeMap::from([(3, 1)]));
        assert_eq!(ramification_multiplicity_counts(&part(&[2, 2])), BTreeMap::from([(2, 2)]));
    }

    #[test]
    fn filtration_examples() {
        assert_eq!(filtration_dims(&part(&[2, 1])), vec![2, 1]);
        assert_eq!(filtration_dims(&part(&[3])), vec![1, 1, 1]);
        assert_eq!(filtration_dims(&part(&[1, 1, 1])), vec![3]);
    }

    #[test]
    fn flag_dim_examples() {
        assert_eq!(flag_dim(&part(&[1, 1, 1]), 3).unwrap(), 3);
        assert_eq!(flag_dim(&part(&[3]), 3).unwrap(), 0);
        assert_eq!(flag_dim(&part(&[2, 1]), 3).unwrap(), 2);
    }

    #[test]
    fn delta_p_examples() {
        let d = ParabolicData::from_partitions(3, 0, &[&[1, 1, 1], &[3], &[2, 1]]).unwrap();
        assert_eq!(delta_p(&d), 1);
        let d = ParabolicData::from_partitions(4, 1, &[&[2, 2]]).unwrap();
        assert_eq!(delta_p(&d), 2);
        let d = ParabolicData::from_partitions(4, 1, &[&[2, 2], &[4]]).unwrap();
        assert_eq!(delta_p(&d), 2);
    }

    #[test]
    fn gerbe_examples() {
        assert_eq!(gerbe_compatible(1, 1, 1), Some(1));
        assert_eq!(gerbe_compatible(2, 4, 3), Some(2));
        assert_eq!(gerbe_compatible(0, 1, 2), None);
    }

    #[test]
    fn data_validation_collects_all_errors() {
        let pts = vec![
            MarkedPoint::new(Position("0".into()), &[1, 1], None).unwrap(),
            MarkedPoint::new(Position("0".into()), &[2, 1], None).unwrap(),
        ];
        let errs = ParabolicData::new(2, 0, pts).unwrap_err();
        assert_eq!(errs.len(), 3, "{errs:?}");
        assert!(errs.iter().any(|e| e.contains("2g-2+deg D must be positive")));
    }

    #[test]
    fn weights_are_range_checked() {
        let half = crate::arith::field::parse_rational("1/2").unwrap();
        assert!(MarkedPoint::new(Position::infinity(), &[1, 1], Some(vec![half.clone()])).is_ok());
        let one = crate::arith::field::parse_rational("1").unwrap();
        assert!(MarkedPoint::new(Position::infinity(), &[1, 1], Some(vec![one])).is_err());
    }
}
