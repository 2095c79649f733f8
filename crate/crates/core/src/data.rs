//! Evaluation dataset types: binary outcome vectors, paired vectors,
//! per-cluster counts, and confusion-matrix counts.

use crate::error::{Error, Result};

/// Ordered 0/1 outcomes for one model on N questions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryEvalVector {
    outcomes: Vec<u8>,
}

impl BinaryEvalVector {
    /// Validates that every entry is 0 or 1.
    pub fn new(outcomes: Vec<u8>) -> Result<Self> {
        if let Some(pos) = outcomes.iter().position(|&y| y > 1) {
            return Err(Error::Domain(format!(
                "outcome at index {pos} is {}, expected 0 or 1",
                outcomes[pos]
            )));
        }
        Ok(Self { outcomes })
    }

    /// `successes` ones followed by zeros, length `n`.
    pub fn from_counts(successes: u64, n: u64) -> Result<Self> {
        if successes > n {
            return Err(Error::Domain(format!("successes {successes} exceed n {n}")));
        }
        let mut outcomes = vec![1u8; successes as usize];
        outcomes.resize(n as usize, 0);
        Ok(Self { outcomes })
    }

    pub fn outcomes(&self) -> &[u8] {
        &self.outcomes
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    /// Total successes S.
    pub fn successes(&self) -> u64 {
        self.outcomes.iter().map(|&y| u64::from(y)).sum()
    }

    /// Sample mean θ̂ = S/N.
    pub fn mean(&self) -> f64 {
        self.successes() as f64 / self.len() as f64
    }
}

/// Two aligned binary outcome vectors and their 2×2 contingency counts.
///
/// `s` both correct, `t` only A correct, `u` only B correct, `v` neither.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairedEvalData {
    y_a: BinaryEvalVector,
    y_b: BinaryEvalVector,
    s: u64,
    t: u64,
    u: u64,
    v: u64,
}

impl PairedEvalData {
    pub fn from_vectors(y_a: BinaryEvalVector, y_b: BinaryEvalVector) -> Result<Self> {
        if y_a.len() != y_b.len() {
            return Err(Error::LengthMismatch(format!(
                "paired vectors have lengths {} and {}",
                y_a.len(),
                y_b.len()
            )));
        }
        let (mut s, mut t, mut u, mut v) = (0u64, 0u64, 0u64, 0u64);
        for (&a, &b) in y_a.outcomes().iter().zip(y_b.outcomes()) {
            match (a, b) {
                (1, 1) => s += 1,
                (1, 0) => t += 1,
                (0, 1) => u += 1,
                _ => v += 1,
            }
        }
        Ok(Self { y_a, y_b, s, t, u, v })
    }

    /// Builds canonical vectors from the four cell counts.
    pub fn from_counts(s: u64, t: u64, u: u64, v: u64) -> Self {
        let n = (s + t + u + v) as usize;
        let mut a = Vec::with_capacity(n);
        let mut b = Vec::with_capacity(n);
        for _ in 0..s {
            a.push(1);
            b.push(1);
        }
        for _ in 0..t {
            a.push(1);
            b.push(0);
        }
        for _ in 0..u {
            a.push(0);
            b.push(1);
        }
        for _ in 0..v {
            a.push(0);
            b.push(0);
        }
        Self { y_a: BinaryEvalVector { outcomes: a }, y_b: BinaryEvalVector { outcomes: b }, s, t, u, v }
    }

    pub fn y_a(&self) -> &BinaryEvalVector {
        &self.y_a
    }

    pub fn y_b(&self) -> &BinaryEvalVector {
        &self.y_b
    }

    pub fn n(&self) -> u64 {
        self.y_a.len() as u64
    }

    /// `(s, t, u, v)` cell counts.
    pub fn counts(&self) -> (u64, u64, u64, u64) {
        (self.s, self.t, self.u, self.v)
    }

    /// Per-question differences `y_A − y_B` summarized as (mean, unbiased
    /// sample variance). Differences take values in {−1, 0, 1}.
    pub fn diff_moments(&self) -> (f64, f64) {
        let n = self.n() as f64;
        let mean = (self.t as f64 - self.u as f64) / n;
        let sum_sq = (self.t + self.u) as f64;
        let var = (sum_sq - n * mean * mean) / (n - 1.0);
        (mean, var.max(0.0))
    }
}

/// Per-cluster question and success counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusteredEvalData {
    clusters: Vec<(u64, u64)>,
}

impl ClusteredEvalData {
    /// Takes `(n_t, y_t)` pairs; requires `T ≥ 1`, `n_t ≥ 1`, `y_t ≤ n_t`.
    pub fn new(clusters: Vec<(u64, u64)>) -> Result<Self> {
        if clusters.is_empty() {
            return Err(Error::EmptyData("clustered data needs at least one cluster"));
        }
        for (idx, &(n, y)) in clusters.iter().enumerate() {
            if n == 0 {
                return Err(Error::Domain(format!("cluster {idx} has zero questions")));
            }
            if y > n {
                return Err(Error::Domain(format!(
                    "cluster {idx} has {y} successes out of {n} questions"
                )));
            }
        }
        Ok(Self { clusters })
    }

    /// `(n_t, y_t)` pairs in input order.
    pub fn clusters(&self) -> &[(u64, u64)] {
        &self.clusters
    }

    pub fn n_clusters(&self) -> usize {
        self.clusters.len()
    }

    pub fn total_questions(&self) -> u64 {
        self.clusters.iter().map(|&(n, _)| n).sum()
    }

    pub fn total_successes(&self) -> u64 {
        self.clusters.iter().map(|&(_, y)| y).sum()
    }

    /// Pooled mean ȳ.
    pub fn pooled_mean(&self) -> f64 {
        self.total_successes() as f64 / self.total_questions() as f64
    }

    /// Flattens to a single outcome vector (cluster structure discarded).
    pub fn pooled_vector(&self) -> BinaryEvalVector {
        let mut outcomes = Vec::with_capacity(self.total_questions() as usize);
        for &(n, y) in &self.clusters {
            outcomes.extend(std::iter::repeat_n(1u8, y as usize));
            outcomes.extend(std::iter::repeat_n(0u8, (n - y) as usize));
        }
        BinaryEvalVector { outcomes }
    }
}

/// Confusion matrix counts `(TP, FP, FN, TN)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub n_tp: u64,
    pub n_fp: u64,
    pub n_fn: u64,
    pub n_tn: u64,
}

impl ConfusionCounts {
    pub fn new(n_tp: u64, n_fp: u64, n_fn: u64, n_tn: u64) -> Self {
        Self { n_tp, n_fp, n_fn, n_tn }
    }

    pub fn total(&self) -> u64 {
        self.n_tp + self.n_fp + self.n_fn + self.n_tn
    }

    /// `2·TP + FP + FN`, the F1 denominator.
    pub fn f1_denominator(&self) -> u64 {
        2 * self.n_tp + self.n_fp + self.n_fn
    }

    pub fn as_array(&self) -> [u64; 4] {
        [self.n_tp, self.n_fp, self.n_fn, self.n_tn]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_vector_validates_entries() {
        assert!(BinaryEvalVector::new(vec![0, 1, 1, 0]).is_ok());
        let err = BinaryEvalVector::new(vec![0, 2, 1]).unwrap_err();
        assert!(err.to_string().contains("index 1"));
    }

    #[test]
    fn paired_counts_are_consistent() {
        let a = BinaryEvalVector::new(vec![1, 1, 1, 0, 0, 1]).unwrap();
        let b = BinaryEvalVector::new(vec![1, 0, 1, 1, 0, 0]).unwrap();
        let d = PairedEvalData::from_vectors(a, b).unwrap();
        assert_eq!(d.counts(), (2, 2, 1, 1));
        assert_eq!(d.n(), 6);

        let rebuilt = PairedEvalData::from_counts(2, 2, 1, 1);
        assert_eq!(rebuilt.counts(), d.counts());
    }

    #[test]
    fn paired_rejects_mismatched_lengths() {
        let a = BinaryEvalVector::new(vec![1, 0]).unwrap();
        let b = BinaryEvalVector::new(vec![1]).unwrap();
        assert!(PairedEvalData::from_vectors(a, b).is_err());
    }

    #[test]
    fn diff_moments_hand_checked() {
        // s,t,u,v = 4,3,1,2: differences are {+1 ×3, −1 ×1, 0 ×6}.
        let d = PairedEvalData::from_counts(4, 3, 1, 2);
        let (mean, var) = d.diff_moments();
        assert!((mean - 0.2).abs() < 1e-15);
        assert!((var - (4.0 - 10.0 * 0.04) / 9.0).abs() < 1e-15);
    }

    #[test]
    fn clustered_validation_and_pooling() {
        assert!(ClusteredEvalData::new(vec![]).is_err());
        assert!(ClusteredEvalData::new(vec![(4, 5)]).is_err());
        assert!(ClusteredEvalData::new(vec![(0, 0)]).is_err());

        let c = ClusteredEvalData::new(vec![(4, 3), (2, 0)]).unwrap();
        assert_eq!(c.total_questions(), 6);
        assert_eq!(c.total_successes(), 3);
        assert_eq!(c.pooled_vector().outcomes(), &[1, 1, 1, 0, 0, 0]);
    }

    #[test]
    fn confusion_totals() {
        let c = ConfusionCounts::new(40, 10, 20, 30);
        assert_eq!(c.total(), 100);
        assert_eq!(c.f1_denominator(), 110);
    }
}
