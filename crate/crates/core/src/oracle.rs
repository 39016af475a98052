//! Brute-force statevector ground truth.
//!
//! States are built literally as sums of basis kets, orbits are closed by
//! breadth-first search over generator shifts, and entropies come from the
//! singular values of the reshaped amplitude matrix. No rank formula from
//! the rest of the crate is used here. Site 1 is the most significant digit
//! of an amplitude index.

use std::collections::VecDeque;
use std::io::{self, Read, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::entanglement::{shannon_bits, Partition};
use crate::error::{Error, Result};
use crate::gf2::BitRow;
use crate::graph_state::Graph;
use crate::qudit::QuditShiftGroup;
use crate::spin_flip::{SpinFlipGroup, WeightedGState};
use crate::stabilizer::{PauliString, StabilizerGroup};

type C = Complex64;

pub const DEFAULT_GUARD: usize = 1 << 20;
/// Tolerance for eigenvalue and state-equality checks.
pub const TOLERANCE: f64 = 1e-9;

const MAGIC: &[u8; 4] = b"GSTV";

#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    n: usize,
    d: u32,
    amps: Vec<C>,
}

impl DenseState {
    /// Normalizes `amps`, which must have length `dⁿ`.
    pub fn from_amplitudes(n: usize, d: u32, amps: Vec<C>) -> Result<Self> {
        let len = (d as u128).checked_pow(n as u32);
        if len != Some(amps.len() as u128) {
            return Err(Error::LengthMismatch {
                expected: len.unwrap_or(u128::MAX).min(usize::MAX as u128) as usize,
                found: amps.len(),
            });
        }
        let mut s = Self { n, d, amps };
        s.normalize()?;
        Ok(s)
    }

    fn normalize(&mut self) -> Result<()> {
        let norm = self.norm();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        for a in &mut self.amps {
            *a /= norm;
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn amplitudes(&self) -> &[C] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &DenseState) -> C {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|⟨self|other⟩|`, insensitive to global phase.
    pub fn fidelity_up_to_phase(&self, other: &DenseState) -> f64 {
        if self.n != other.n || self.d != other.d {
            return 0.0;
        }
        self.inner(other).norm()
    }

    pub fn equal_up_to_phase(&self, other: &DenseState) -> bool {
        (1.0 - self.fidelity_up_to_phase(other)).abs() < TOLERANCE
    }

    /// Maximum entrywise distance.
    pub fn distance(&self, other: &DenseState) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Applies a 2×2 matrix `[[m00, m01], [m10, m11]]` to `qubit` (0-based).
    pub fn apply_single_qubit(&mut self, qubit: usize, m: [[C; 2]; 2]) -> Result<()> {
        if self.d != 2 {
            return Err(Error::UnsupportedDimension(self.d));
        }
        let bit = 1usize << (self.n - 1 - qubit);
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        Ok(())
    }

    /// `i^φ X(x) Z(z)` applied as a product of single-qubit matrices.
    pub fn apply_pauli(&self, p: &PauliString) -> Result<DenseState> {
        if p.n() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: p.n(),
            });
        }
        let mut out = self.clone();
        for q in p.z().iter_ones() {
            out.apply_single_qubit(q, gates::Z)?;
        }
        for q in p.x().iter_ones() {
            out.apply_single_qubit(q, gates::X)?;
        }
        let phase = C::i().powu(p.phase() as u32);
        for a in &mut out.amps {
            *a *= phase;
        }
        Ok(out)
    }

    /// 16-byte header `GSTV`, u32 n, u32 d, u32 0, then little-endian
    /// `(re, im)` f64 pairs.
    pub fn dump(&self, w: &mut impl Write) -> io::Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&(self.n as u32).to_le_bytes())?;
        w.write_all(&self.d.to_le_bytes())?;
        w.write_all(&0u32.to_le_bytes())?;
        for a in &self.amps {
            w.write_all(&a.re.to_le_bytes())?;
            w.write_all(&a.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn load(r: &mut impl Read, guard: usize) -> io::Result<DenseState> {
        let invalid = |m: String| io::Error::new(io::ErrorKind::InvalidData, m);
        let mut header = [0u8; 16];
        r.read_exact(&mut header)?;
        if &header[..4] != MAGIC {
            return Err(invalid("missing GSTV magic".into()));
        }
        let word = |i: usize| u32::from_le_bytes(header[i..i + 4].try_into().expect("4 bytes"));
        let (n, d) = (word(4) as usize, word(8));
        let len = (d as u128).checked_pow(n as u32).filter(|&l| l <= guard as u128);
        let len = len.ok_or_else(|| invalid(format!("{d}^{n} amplitudes exceed the guard")))? as usize;
        let mut amps = Vec::with_capacity(len);
        let mut buf = [0u8; 16];
        for _ in 0..len {
            r.read_exact(&mut buf)?;
            let re = f64::from_le_bytes(buf[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(buf[8..].try_into().expect("8 bytes"));
            amps.push(C::new(re, im));
        }
        Ok(DenseState { n, d, amps })
    }
}

pub mod gates {
    use super::C;

    const O: C = C::new(0.0, 0.0);
    const I: C = C::new(1.0, 0.0);
    const S2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    pub const X: [[C; 2]; 2] = [[O, I], [I, O]];
    pub const Y: [[C; 2]; 2] = [[O, C::new(0.0, -1.0)], [C::new(0.0, 1.0), O]];
    pub const Z: [[C; 2]; 2] = [[I, O], [O, C::new(-1.0, 0.0)]];
    pub const H: [[C; 2]; 2] = [[C::new(S2, 0.0), C::new(S2, 0.0)], [C::new(S2, 0.0), C::new(-S2, 0.0)]];
}

/// Builder and analysis entry point carrying the memory guard.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Oracle {
    pub guard: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Self { guard: DEFAULT_GUARD }
    }
}

impl Oracle {
    pub fn with_guard(guard: usize) -> Self {
        Self { guard }
    }

    fn size(&self, n: usize, d: u32) -> Result<usize> {
        let amplitudes = (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if amplitudes > self.guard as u128 {
            return Err(Error::GuardExceeded {
                amplitudes,
                guard: self.guard,
            });
        }
        Ok(amplitudes as usize)
    }

    /// Indices reachable from |0…0⟩ by adding generator digit vectors mod d.
    fn orbit(&self, n: usize, d: u32, generators: &[Vec<u8>]) -> Result<Vec<usize>> {
        let len = self.size(n, d)?;
        let d = d as usize;
        let digits_of = |mut idx: usize| {
            let mut v = vec![0usize; n];
            for slot in v.iter_mut().rev() {
                *slot = idx % d;
                idx /= d;
            }
            v
        };
        let index_of = |v: &[usize]| v.iter().fold(0usize, |acc, &x| acc * d + x);
        let mut seen = vec![false; len];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut out = vec![0usize];
        while let Some(idx) = queue.pop_front() {
            let digits = digits_of(idx);
            for g in generators {
                let moved: Vec<usize> = digits.iter().zip(g).map(|(&a, &b)| (a + b as usize) % d).collect();
                let j = index_of(&moved);
                if !seen[j] {
                    seen[j] = true;
                    out.push(j);
                    queue.push_back(j);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    fn uniform_on(&self, n: usize, d: u32, support: &[usize]) -> Result<DenseState> {
        let mut amps = vec![C::new(0.0, 0.0); self.size(n, d)?];
        for &i in support {
            amps[i] = C::new(1.0, 0.0);
        }
        DenseState::from_amplitudes(n, d, amps)
    }

    /// `|G|^{-1/2} Σ_g g|0…0⟩`.
    pub fn build_homogeneous(&self, g: &SpinFlipGroup) -> Result<DenseState> {
        let gens: Vec<Vec<u8>> = g.basis_rows().iter().map(BitRow::to_bits).collect();
        let orbit = self.orbit(g.n(), 2, &gens)?;
        self.uniform_on(g.n(), 2, &orbit)
    }

    pub fn build_qudit(&self, g: &QuditShiftGroup) -> Result<DenseState> {
        let gens = g.basis().row_vectors();
        let orbit = self.orbit(g.n(), g.d(), &gens)?;
        self.uniform_on(g.n(), g.d(), &orbit)
    }

    /// `d^{-1/2} Σ_j |j…j⟩` for any `d ≥ 2`, prime or not.
    pub fn build_cyclic(&self, n: usize, d: u32) -> Result<DenseState> {
        if n == 0 {
            return Err(Error::NoSites);
        }
        if d < 2 || d > u8::MAX as u32 {
            return Err(Error::UnsupportedDimension(d));
        }
        let orbit = self.orbit(n, d, &[vec![1u8; n]])?;
        self.uniform_on(n, d, &orbit)
    }

    /// `Σ_w c_w X(shift_w) |G⟩`, normalized.
    pub fn build_shifted_homogeneous(&self, g: &SpinFlipGroup, terms: &[(BitRow, C)]) -> Result<DenseState> {
        let n = g.n();
        let gens: Vec<Vec<u8>> = g.basis_rows().iter().map(BitRow::to_bits).collect();
        let orbit = self.orbit(n, 2, &gens)?;
        let mut amps = vec![C::new(0.0, 0.0); self.size(n, 2)?];
        for (shift, c) in terms {
            if shift.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: shift.len(),
                });
            }
            let s = shift.to_index_msb() as usize;
            for &i in &orbit {
                amps[i ^ s] += c;
            }
        }
        DenseState::from_amplitudes(n, 2, amps)
    }

    /// `Σ α_A(a) α_B(b) β(h) |a ⊕ b ⊕ h⟩`, normalized.
    pub fn build_weighted(&self, w: &WeightedGState) -> Result<DenseState> {
        let n = w.group().n();
        let mut amps = vec![C::new(0.0, 0.0); self.size(n, 2)?];
        for (a, ca) in w.alpha_a() {
            for (b, cb) in w.alpha_b() {
                let ab = a.xor(b);
                for (h, ch) in w.beta() {
                    amps[ab.xor(h).to_index_msb() as usize] += ca * cb * ch;
                }
            }
        }
        DenseState::from_amplitudes(n, 2, amps)
    }

    /// `∏_{(u,v)} CZ_{uv} H^{⊗n} |0…0⟩`, with every `X_i ∏_{j∼i} Z_j`
    /// asserted to fix the result.
    pub fn build_graph_state(&self, g: &Graph) -> Result<DenseState> {
        let n = g.n();
        let mut amps = vec![C::new(0.0, 0.0); self.size(n, 2)?];
        amps[0] = C::new(1.0, 0.0);
        let mut s = DenseState { n, d: 2, amps };
        for q in 0..n {
            s.apply_single_qubit(q, gates::H)?;
        }
        for (u, v) in g.edges() {
            let (bu, bv) = (1usize << (n - 1 - u), 1usize << (n - 1 - v));
            for (i, a) in s.amps.iter_mut().enumerate() {
                if i & bu != 0 && i & bv != 0 {
                    *a = -*a;
                }
            }
        }
        for i in 0..n {
            let mut t = s.clone();
            t.apply_single_qubit(i, gates::X)?;
            for j in g.neighbours(i).iter_ones() {
                t.apply_single_qubit(j, gates::Z)?;
            }
            assert!(t.distance(&s) < TOLERANCE, "graph generator {i} does not fix the state");
        }
        Ok(s)
    }

    /// Von Neumann entropy (bits) of the reduced state on side A, from the
    /// Schmidt coefficients.
    pub fn entropy(&self, s: &DenseState, p: &Partition) -> Result<f64> {
        if p.n() != s.n {
            return Err(Error::LengthMismatch {
                expected: s.n,
                found: p.n(),
            });
        }
        let d = s.d as usize;
        let (da, db) = (d.pow(p.side_a().len() as u32), d.pow(p.side_b().len() as u32));
        // place value of each site's digit inside its side's index
        let mut place = vec![(false, 0usize); s.n];
        for (side, sites) in [(true, p.side_a()), (false, p.side_b())] {
            let mut w = 1;
            for &site in sites.iter().rev() {
                place[site] = (side, w);
                w *= d;
            }
        }
        let mut m = DMatrix::<C>::zeros(da.min(db), da.max(db));
        let a_rows = da <= db;
        for (idx, amp) in s.amps.iter().enumerate() {
            let (mut ia, mut ib) = (0, 0);
            let mut rest = idx;
            for site in (0..s.n).rev() {
                let digit = rest % d;
                rest /= d;
                let (in_a, w) = place[site];
                if in_a {
                    ia += digit * w;
                } else {
                    ib += digit * w;
                }
            }
            if a_rows {
                m[(ia, ib)] = *amp;
            } else {
                m[(ib, ia)] = *amp;
            }
        }
        let sv = m.singular_values();
        let probs: Vec<f64> = sv.iter().map(|x| x * x).collect();
        let total: f64 = probs.iter().sum();
        let probs: Vec<f64> = probs.iter().map(|p| p / total).collect();
        Ok(shannon_bits(&probs))
    }

    /// `|⟨ψ|Y^{⊗n}|ψ*⟩|²`; only a monotone for even n.
    pub fn ntangle(&self, s: &DenseState) -> Result<f64> {
        if s.d != 2 {
            return Err(Error::UnsupportedDimension(s.d));
        }
        let mut t = DenseState {
            n: s.n,
            d: 2,
            amps: s.amps.iter().map(|a| a.conj()).collect(),
        };
        for q in 0..s.n {
            t.apply_single_qubit(q, gates::Y)?;
        }
        Ok(s.inner(&t).norm_sqr())
    }

    /// Whether every generator fixes `s` within [`TOLERANCE`].
    pub fn stabilizer_eigencheck(&self, s: &DenseState, grp: &StabilizerGroup) -> Result<bool> {
        for g in grp.generators() {
            if s.apply_pauli(g)?.distance(s) >= TOLERANCE {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Hadamard on the listed qubits.
    pub fn apply_hadamards(&self, s: &DenseState, qubits: &[usize]) -> Result<DenseState> {
        let mut t = s.clone();
        for &q in qubits {
            t.apply_single_qubit(q, gates::H)?;
        }
        Ok(t)
    }
}
