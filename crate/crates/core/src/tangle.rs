//! Group parity and the closed-form n-tangle of G-homogeneous states.
//!
//! With `Y^{⊗n} = i^n X^{⊗n} Z^{⊗n}` and real amplitudes,
//! `⟨G|Y^{⊗n}|G*⟩ = i^n χ(1…1) |G|⁻¹ Σ_h (−1)^{|h|}`, and the average is
//! `∏(1 − p_i)` over any basis, hence `τ_n = (1 − p(G)) χ(1…1)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::BitRow;
use crate::spin_flip::SpinFlipGroup;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityProfile {
    /// Weight parities of the normalized basis; at most one is odd.
    pub generator_parities: Vec<u8>,
    /// 1 iff the group has an odd-weight element.
    pub group_parity: u8,
    #[serde(skip)]
    pub basis: Vec<BitRow>,
}

/// Re-bases so that only the first odd row stays odd: every later odd row
/// is multiplied by it.
pub fn group_parity(g: &SpinFlipGroup) -> ParityProfile {
    let mut basis = g.basis_rows().to_vec();
    if let Some(first) = basis.iter().position(|r| r.weight() % 2 == 1) {
        let pivot = basis[first].clone();
        for r in basis.iter_mut().skip(first + 1) {
            if r.weight() % 2 == 1 {
                r.xor_assign(&pivot);
            }
        }
    }
    let generator_parities: Vec<u8> = basis.iter().map(|r| (r.weight() % 2) as u8).collect();
    // 1 − p(G) = ∏(1 − p_i)
    let group_parity = 1 - generator_parities.iter().map(|p| 1 - p).product::<u8>();
    ParityProfile {
        generator_parities,
        group_parity,
        basis,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NTangleReport {
    pub tau_n: u8,
    pub parity: ParityProfile,
    /// Trivial character at `X^{⊗n}`: 1 iff the all-ones flip is in G.
    pub chi: u8,
}

pub fn ntangle_closed_form(g: &SpinFlipGroup) -> Result<NTangleReport> {
    let n = g.n();
    if n % 2 == 1 {
        return Err(Error::OddQubitCount(n));
    }
    let parity = group_parity(g);
    let chi = g.contains(&BitRow::ones(n)) as u8;
    Ok(NTangleReport {
        tau_n: (1 - parity.group_parity) * chi,
        parity,
        chi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::BitMatrix;
    use proptest::prelude::*;

    fn group(rows: &[&str]) -> SpinFlipGroup {
        SpinFlipGroup::from_generators(&BitMatrix::parse_rows(rows, 2).unwrap()).unwrap()
    }

    /// `|G|⁻¹ Σ_h (−1)^{|h|}` by enumeration.
    fn parity_average(g: &SpinFlipGroup) -> f64 {
        let elems = g.elements().unwrap();
        let s: i64 = elems.iter().map(|h| if h.weight() % 2 == 0 { 1 } else { -1 }).sum();
        s as f64 / elems.len() as f64
    }

    #[test]
    fn parity_examples() {
        let p = group_parity(&SpinFlipGroup::ghz(4));
        assert_eq!((p.generator_parities.clone(), p.group_parity), (vec![0], 0));
        let p = group_parity(&SpinFlipGroup::ghz(3));
        assert_eq!((p.generator_parities.clone(), p.group_parity), (vec![1], 1));
        let g = group(&["1110", "0111"]);
        let p = group_parity(&g);
        assert_eq!(p.group_parity, 1);
        assert_eq!(p.generator_parities.iter().filter(|&&b| b == 1).count(), 1);
        assert_eq!(parity_average(&g), 0.0);
    }

    #[test]
    fn ntangle_examples() {
        assert_eq!(ntangle_closed_form(&SpinFlipGroup::ghz(4)).unwrap().tau_n, 1);
        assert_eq!(ntangle_closed_form(&group(&["1100"])).unwrap().tau_n, 0);
        let r = ntangle_closed_form(&group(&["1111", "1000"])).unwrap();
        assert_eq!((r.tau_n, r.chi, r.parity.group_parity), (0, 1, 1));
        assert_eq!(
            ntangle_closed_form(&SpinFlipGroup::ghz(3)),
            Err(Error::OddQubitCount(3))
        );
        assert_eq!(ntangle_closed_form(&SpinFlipGroup::trivial(2)).unwrap().tau_n, 0);
    }

    fn group_strategy() -> impl Strategy<Value = (SpinFlipGroup, Vec<Vec<u8>>)> {
        (1usize..10).prop_flat_map(|n| {
            let rows = proptest::collection::vec(proptest::collection::vec(0u8..2, n), 0..=n);
            let mix = proptest::collection::vec(proptest::collection::vec(0u8..2, n), n);
            (rows, mix).prop_map(move |(rows, mix)| {
                (
                    SpinFlipGroup::from_generators(&BitMatrix::from_rows(n, 2, rows).unwrap()).unwrap(),
                    mix,
                )
            })
        })
    }

    proptest! {
        #[test]
        fn sum_identity_and_basis_independence((g, mix) in group_strategy()) {
            let p = group_parity(&g);
            let product: f64 = p.generator_parities.iter().map(|&b| 1.0 - b as f64).product();
            prop_assert_eq!(parity_average(&g), product);
            prop_assert_eq!(1 - p.group_parity as i32, product as i32);
            prop_assert!(p.generator_parities.iter().filter(|&&b| b == 1).count() <= 1);
            // random re-basing: add mixes of basis rows to each row, keep those that stay independent
            let rows = g.basis_rows();
            let mixed: Vec<BitRow> = rows.iter().enumerate().map(|(i, r)| {
                let mut out = r.clone();
                for (j, other) in rows.iter().enumerate() {
                    if j > i && mix[i][j] == 1 {
                        out.xor_assign(other);
                    }
                }
                out
            }).collect();
            let rebased = SpinFlipGroup::from_bit_rows(g.n(), mixed.clone()).unwrap();
            prop_assert_eq!(&rebased, &g);
            let raw: f64 = mixed.iter().map(|r| 1.0 - (r.weight() % 2) as f64).product();
            prop_assert_eq!(raw, product);
        }
    }
}
