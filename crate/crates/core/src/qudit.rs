//! Shift groups `X(𝒜)` on n qudits of prime dimension d.
//!
//! `X|k⟩ = |k+1 mod d⟩` and the group of shifts by vectors of a GF(d)
//! subspace 𝒜 acts on |0…0⟩. The rank formula of the qubit case carries
//! over with `|G| = d^k`, so entropies are multiples of `log₂ d`.

use crate::entanglement::{EntropyReport, Partition};
use crate::error::{Error, Result};
use crate::gf2::{field_modulus, BitMatrix};
use crate::spin_flip::{parse_group_file, SpinFlipGroup, MAX_ENUMERATION_DIM};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuditShiftGroup {
    n: usize,
    d: u32,
    /// Reduced row-echelon basis over GF(d).
    basis: BitMatrix,
}

impl QuditShiftGroup {
    pub fn from_generators(rows: &BitMatrix) -> Result<Self> {
        if rows.ncols() == 0 {
            return Err(Error::NoSites);
        }
        Ok(Self {
            n: rows.ncols(),
            d: rows.modulus() as u32,
            basis: rows.rref().matrix,
        })
    }

    /// Group file with header `n=<int> d=<prime>`.
    pub fn parse(text: &str) -> Result<Self> {
        let file = parse_group_file(text)?;
        field_modulus(file.d)?;
        Self::from_generators(&BitMatrix::from_rows(file.n, file.d, &file.rows)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn k(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &BitMatrix {
        &self.basis
    }

    /// The qubit view, for d = 2.
    pub fn to_spin_flip(&self) -> Option<SpinFlipGroup> {
        (self.d == 2).then(|| SpinFlipGroup::from_generators(&self.basis).expect("n > 0"))
    }

    /// All `d^k` elements as digit vectors, sorted.
    pub fn elements(&self) -> Result<Vec<Vec<u8>>> {
        let k = self.k();
        let d = self.d as usize;
        if (k as f64) * (d as f64).log2() > MAX_ENUMERATION_DIM as f64 {
            return Err(Error::TooLarge(k));
        }
        let mut out = vec![vec![0u8; self.n]];
        for r in 0..k {
            let row = self.basis.row(r);
            let mut next = Vec::with_capacity(out.len() * d);
            for v in &out {
                for c in 0..d {
                    next.push(
                        v.iter()
                            .zip(&row)
                            .map(|(&a, &b)| ((a as usize + c * b as usize) % d) as u8)
                            .collect(),
                    );
                }
            }
            out = next;
        }
        out.sort();
        Ok(out)
    }
}

/// `⟨X^{⊗n}⟩` over Z_d; d must be prime.
pub fn cyclic_group(n: usize, d: u32) -> Result<QuditShiftGroup> {
    if n == 0 {
        return Err(Error::NoSites);
    }
    BitMatrix::from_rows(n, d, [vec![1u8; n]]).and_then(|m| QuditShiftGroup::from_generators(&m))
}

/// `S = (rank_d M_A + rank_d M_B − k) log₂ d`; `dim_A`, `dim_B` and
/// `log2_quotient` are in units of `log_d`.
pub fn qudit_entropy(g: &QuditShiftGroup, p: &Partition) -> Result<EntropyReport> {
    if p.n() != g.n {
        return Err(Error::LengthMismatch {
            expected: g.n,
            found: p.n(),
        });
    }
    let k = g.k();
    let rank_a = g.basis.select_columns(p.side_a()).rank();
    let rank_b = g.basis.select_columns(p.side_b()).rank();
    let q = rank_a + rank_b - k;
    Ok(EntropyReport {
        entropy_bits: q as f64 * (g.d as f64).log2(),
        dim_a: k - rank_b,
        dim_b: k - rank_a,
        log2_quotient: q,
        // a nonzero shift never returns |0…0⟩ to itself
        saturated: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::homogeneous_entropy;
    use proptest::prelude::*;

    #[test]
    fn cyclic_examples() {
        let g = cyclic_group(3, 3).unwrap();
        assert_eq!(g.basis().row_vectors(), vec![vec![1, 1, 1]]);
        assert_eq!(g.k(), 1);
        assert_eq!(
            cyclic_group(2, 2).unwrap().to_spin_flip().unwrap(),
            SpinFlipGroup::ghz(2)
        );
        assert_eq!(cyclic_group(3, 4), Err(Error::NotPrime(4)));
        assert_eq!(cyclic_group(3, 1), Err(Error::NotPrime(1)));
    }

    #[test]
    fn entropy_examples() {
        for d in [2, 3, 5, 7] {
            for n in 2..6 {
                let g = cyclic_group(n, d).unwrap();
                for mask in 1..(1u64 << n) - 1 {
                    let p = Partition::from_mask(n, mask).unwrap();
                    let s = qudit_entropy(&g, &p).unwrap().entropy_bits;
                    assert!((s - (d as f64).log2()).abs() < 1e-12);
                }
            }
        }
        let g = QuditShiftGroup::from_generators(&BitMatrix::parse_rows(&["1100", "0011"], 3).unwrap()).unwrap();
        let p = Partition::parse("1,2", 4).unwrap();
        assert_eq!(qudit_entropy(&g, &p).unwrap().entropy_bits, 0.0);
        assert!(qudit_entropy(&g, &Partition::parse("1", 3).unwrap()).is_err());
    }

    #[test]
    fn parse_and_elements() {
        let g = QuditShiftGroup::parse("n=3 d=3\n120\n012\n").unwrap();
        assert_eq!((g.n(), g.d(), g.k()), (3, 3, 2));
        let e = g.elements().unwrap();
        assert_eq!(e.len(), 9);
        assert!(e.contains(&vec![1, 0, 2]));
        assert!(QuditShiftGroup::parse("n=2 d=4\n11").is_err());
        assert!(QuditShiftGroup::parse("n=2 d=3\n13").is_err());
    }

    proptest! {
        #[test]
        fn binary_path_agrees(rows in proptest::collection::vec(proptest::collection::vec(0u8..2, 6), 0..6), mask in 0u64..64) {
            let m = BitMatrix::from_rows(6, 2, rows).unwrap();
            let q = QuditShiftGroup::from_generators(&m).unwrap();
            let g = SpinFlipGroup::from_generators(&m).unwrap();
            let p = Partition::from_mask(6, mask).unwrap();
            prop_assert_eq!(qudit_entropy(&q, &p).unwrap(), homogeneous_entropy(&g, &p).unwrap());
        }

        #[test]
        fn symmetric_and_quantized(d in prop::sample::select(vec![3u32, 5]), rows in proptest::collection::vec(proptest::collection::vec(0u8..3, 5), 0..5), mask in 0u64..32) {
            let m = BitMatrix::from_rows(5, d, rows).unwrap();
            let g = QuditShiftGroup::from_generators(&m).unwrap();
            let p = Partition::from_mask(5, mask).unwrap();
            let a = qudit_entropy(&g, &p).unwrap();
            let b = qudit_entropy(&g, &p.complement()).unwrap();
            prop_assert_eq!(a.entropy_bits, b.entropy_bits);
            let units = a.entropy_bits / (d as f64).log2();
            prop_assert!((units - units.round()).abs() < 1e-12);
        }
    }
}
