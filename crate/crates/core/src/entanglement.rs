//! Bipartitions and closed-form entanglement entropy of G-states.
//!
//! For a spin-flip group `G = X(𝒜)` of rank k and a cut (A, B) the
//! G-homogeneous state has entropy `log₂|G_AB|` with
//! `log₂|G_AB| = k − dim G_A − dim G_B = rank(M_A) + rank(M_B) − k`, where
//! `M_X` is the basis restricted to the columns of side X. Weighted G-states
//! with separable coefficients have the Shannon entropy of the normalized
//! `|N_A N_B β(h)|²` over coset representatives.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spin_flip::{SpinFlipGroup, WeightedGState};

/// Ordered index sets `(side_A, side_B)` covering `0..n`, 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    n: usize,
    side_a: Vec<usize>,
    side_b: Vec<usize>,
}

impl Partition {
    /// Side A is `side_a` (0-based, any order, no repeats); B is the rest.
    pub fn new(n: usize, side_a: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut in_a = vec![false; n];
        for i in side_a {
            if i >= n {
                return Err(Error::InvalidPartition(format!("site {} out of range 1..={n}", i + 1)));
            }
            if in_a[i] {
                return Err(Error::InvalidPartition(format!("site {} repeated", i + 1)));
            }
            in_a[i] = true;
        }
        let (side_a, side_b) = (0..n).partition(|&i| in_a[i]);
        Ok(Self { n, side_a, side_b })
    }

    /// Side A from a bit mask, bit `i` selecting site `i`.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        Self::new(n, (0..n.min(64)).filter(|&i| mask >> i & 1 == 1))
    }

    /// Parses a comma-separated list of 1-based site indices for side A,
    /// e.g. `"1,2,5"`. The empty string gives an empty side A.
    pub fn parse(spec: &str, n: usize) -> Result<Self> {
        let spec = spec.trim();
        let mut sites = Vec::new();
        if !spec.is_empty() {
            for tok in spec.split(',') {
                let tok = tok.trim();
                let i: usize = tok
                    .parse()
                    .map_err(|_| Error::InvalidPartition(format!("bad site index {tok:?}")))?;
                if i == 0 {
                    return Err(Error::InvalidPartition("site indices are 1-based".into()));
                }
                sites.push(i - 1);
            }
        }
        Self::new(n, sites)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }

    pub fn complement(&self) -> Partition {
        Partition {
            n: self.n,
            side_a: self.side_b.clone(),
            side_b: self.side_a.clone(),
        }
    }

    /// One side empty.
    pub fn is_trivial(&self) -> bool {
        self.side_a.is_empty() || self.side_b.is_empty()
    }

    pub fn contains_a(&self, site: usize) -> bool {
        self.side_a.binary_search(&site).is_ok()
    }

    pub(crate) fn check_sites(&self, n: usize) -> Result<()> {
        if self.n != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: self.n,
            });
        }
        Ok(())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.side_a.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", s + 1)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyReport {
    pub entropy_bits: f64,
    #[serde(rename = "dim_A")]
    pub dim_a: usize,
    #[serde(rename = "dim_B")]
    pub dim_b: usize,
    pub log2_quotient: usize,
    pub saturated: bool,
}

/// `-Σ p log₂ p` with `0 log 0 = 0`.
pub fn shannon_bits(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Exact entropy of the G-homogeneous state `|G⟩` across `p`.
pub fn homogeneous_entropy(g: &SpinFlipGroup, p: &Partition) -> Result<EntropyReport> {
    let (dim_a, dim_b) = g.subgroup_dims(p)?;
    let q = g.k() - dim_a - dim_b;
    Ok(EntropyReport {
        entropy_bits: q as f64,
        dim_a,
        dim_b,
        log2_quotient: q,
        // ⟨0|g_X|0⟩ = 0 for every nontrivial flip, so the bound is attained
        saturated: g.zerovev_holds(),
    })
}

/// Whether `G = G_A × G_B` across `p`, in which case the entropy vanishes.
pub fn is_product_partition(g: &SpinFlipGroup, p: &Partition) -> Result<bool> {
    Ok(g.quotient_order_log2(p)? == 0)
}

fn norm_sqr_sum<'a>(values: impl Iterator<Item = &'a num_complex::Complex64>) -> f64 {
    values.map(|c| c.norm_sqr()).sum()
}

/// Upper bound `-Σ_h |N_A N_B β(h)|² log₂ |N_A N_B β(h)|²` after rescaling
/// the three tables so the assembled state has unit norm.
pub fn weighted_bound(w: &WeightedGState) -> Result<f64> {
    let na2 = norm_sqr_sum(w.alpha_a().values());
    let nb2 = norm_sqr_sum(w.alpha_b().values());
    let beta2 = norm_sqr_sum(w.beta().values());
    if !(na2 > 0.0 && nb2 > 0.0 && beta2 > 0.0) || !(na2 * nb2 * beta2).is_finite() {
        return Err(Error::ZeroNorm);
    }
    // Each group element appears once in the sum, so ‖Ψ‖² = N_A² N_B² Σ|β|².
    // Absorb 1/‖Ψ‖ into β.
    let (na, nb) = (na2.sqrt(), nb2.sqrt());
    let scale = 1.0 / (na2 * nb2 * beta2).sqrt();
    let probs: Vec<f64> = w.beta().values().map(|b| (b * (na * nb * scale)).norm_sqr()).collect();
    Ok(shannon_bits(&probs))
}

/// Entropy of a weighted G-state: the bound is attained because the
/// vacuum-expectation condition holds for spin flips.
pub fn weighted_entropy_exact(w: &WeightedGState) -> Result<EntropyReport> {
    let bound = weighted_bound(w)?;
    let g = w.group();
    let (dim_a, dim_b) = g.subgroup_dims(w.partition())?;
    debug_assert!(g.zerovev_holds());
    Ok(EntropyReport {
        entropy_bits: bound,
        dim_a,
        dim_b,
        log2_quotient: g.k() - dim_a - dim_b,
        saturated: g.zerovev_holds(),
    })
}
