//! Pauli strings with exact phase tracking and stabilizer groups.
//!
//! A [`PauliString`] stores the operator `i^phase · X(x) · Z(z)` in X-before-Z
//! normal order. Text form is a sign followed by one letter per qubit
//! (`"+XXZ"`, `"-YIZ"`); `Y` is read as `i·X·Z`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitRow};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    x: BitRow,
    z: BitRow,
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitRow::zeros(n),
            z: BitRow::zeros(n),
            phase: 0,
        }
    }

    pub fn new(x: BitRow, z: BitRow, phase: u8) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::LengthMismatch {
                expected: x.len(),
                found: z.len(),
            });
        }
        Ok(Self { x, z, phase: phase % 4 })
    }

    /// `X(x)` with sign +1.
    pub fn x_type(x: BitRow) -> Self {
        let n = x.len();
        Self {
            x,
            z: BitRow::zeros(n),
            phase: 0,
        }
    }

    /// `Z(z)` with sign +1.
    pub fn z_type(z: BitRow) -> Self {
        let n = z.len();
        Self {
            x: BitRow::zeros(n),
            z,
            phase: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &BitRow {
        &self.x
    }

    pub fn z(&self) -> &BitRow {
        &self.z
    }

    /// Exponent φ of the prefactor `i^φ` in the X-before-Z normal order.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    fn y_count(&self) -> usize {
        self.x.and(&self.z).weight()
    }

    /// Exponent e with operator = `i^e · ⊗ P_j`, `P_j ∈ {I, X, Y, Z}`.
    pub fn letter_phase(&self) -> u8 {
        ((self.phase as usize + 4 - self.y_count() % 4) % 4) as u8
    }

    pub fn is_hermitian(&self) -> bool {
        self.letter_phase().is_multiple_of(2)
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Hermitian and not `-I`: the string squares to the identity and can
    /// sit in a stabilizer group.
    pub fn is_valid_generator(&self) -> bool {
        self.is_hermitian() && !(self.is_identity_up_to_phase() && self.phase != 0)
    }

    /// The commutation bit `(x_p, z_q) + (x_q, z_p) mod 2`.
    pub fn symplectic_product(&self, other: &PauliString) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.x.dot(&other.z) ^ other.x.dot(&self.z))
    }

    pub fn commutes_with(&self, other: &PauliString) -> Result<bool> {
        Ok(!self.symplectic_product(other)?)
    }

    fn check_len(&self, other: &PauliString) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        Ok(())
    }

    /// Operator product `self · other`.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        self.check_len(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &PauliString) -> PauliString {
        // Z(z1) X(x2) = (-1)^{z1·x2} X(x2) Z(z1)
        let swap = if self.z.dot(&other.x) { 2 } else { 0 };
        PauliString {
            x: self.x.xor(&other.x),
            z: self.z.xor(&other.z),
            phase: (self.phase + other.phase + swap) % 4,
        }
    }

    /// `-self`.
    pub fn negated(&self) -> PauliString {
        PauliString {
            phase: (self.phase + 2) % 4,
            ..self.clone()
        }
    }

    /// Conjugation `U P U†` by one single-qubit Clifford gate on `qubit`.
    pub fn conjugate_gate(&mut self, qubit: usize, gate: Gate) {
        let (xb, zb) = (self.x.get(qubit), self.z.get(qubit));
        match gate {
            // X <-> Z, Y -> -Y
            Gate::H => {
                self.x.set(qubit, zb);
                self.z.set(qubit, xb);
                if xb && zb {
                    self.phase = (self.phase + 2) % 4;
                }
            }
            // X -> Y, Y -> -X, Z -> Z
            Gate::P => {
                if xb {
                    self.z.flip(qubit);
                    self.phase = (self.phase + 1) % 4;
                }
            }
        }
    }

    /// Column-permuted copy: qubit `j` of the result is qubit `perm[j]` here.
    pub fn permuted(&self, perm: &[usize]) -> PauliString {
        let map = |r: &BitRow| BitRow::from_indices(perm.len(), (0..perm.len()).filter(|&j| r.get(perm[j])));
        PauliString {
            x: map(&self.x),
            z: map(&self.z),
            phase: self.phase,
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.letter_phase() {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        })?;
        for j in 0..self.n() {
            f.write_str(match (self.x.get(j), self.z.get(j)) {
                (false, false) => "I",
                (true, false) => "X",
                (true, true) => "Y",
                (false, true) => "Z",
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (sign, body) = if let Some(rest) = s.strip_prefix("+i") {
            (1, rest)
        } else if let Some(rest) = s.strip_prefix("-i") {
            (3, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (0, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (2, rest)
        } else if let Some(rest) = s.strip_prefix('\u{2212}') {
            (2, rest)
        } else {
            (0, s)
        };
        let n = body.chars().count();
        let mut x = BitRow::zeros(n);
        let mut z = BitRow::zeros(n);
        let mut ys = 0u8;
        for (j, c) in body.chars().enumerate() {
            match c.to_ascii_uppercase() {
                'I' => {}
                'X' => x.set(j, true),
                'Z' => z.set(j, true),
                'Y' => {
                    x.set(j, true);
                    z.set(j, true);
                    ys = (ys + 1) % 4;
                }
                _ => return Err(Error::InvalidPauli(format!("unexpected {c:?} in {s:?}"))),
            }
        }
        Ok(PauliString {
            x,
            z,
            phase: (sign + ys) % 4,
        })
    }
}

/// Generators of the single-qubit Clifford group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    H,
    P,
}

/// A word in {H, P}, applied left to right (first letter acts first).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LocalClifford(pub Vec<Gate>);

impl LocalClifford {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn hadamard() -> Self {
        Self(vec![Gate::H])
    }

    /// `Z = P²`.
    pub fn z() -> Self {
        Self(vec![Gate::P, Gate::P])
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for LocalClifford {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .filter(|&c| c != 'I' && c != 'i')
            .map(|c| match c.to_ascii_uppercase() {
                'H' => Ok(Gate::H),
                'P' | 'S' => Ok(Gate::P),
                _ => Err(Error::InvalidPauli(format!("unknown Clifford letter {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(LocalClifford)
    }
}

/// An Abelian group of Pauli strings given by independent, commuting,
/// Hermitian generators (m ≤ n).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerGroup {
    n: usize,
    generators: Vec<PauliString>,
}

/// Gottesman standard form `( I_r A | B C ; 0 0 | D I_{n-r} )`, expressed on
/// permuted qubits.
#[derive(Clone, Debug)]
pub struct StandardForm {
    /// Generators after row operations, written in permuted qubit order.
    pub generators: Vec<PauliString>,
    /// Rank of the X block.
    pub rank_x: usize,
    /// `permutation[j]` is the original qubit placed at column `j`.
    pub permutation: Vec<usize>,
}

impl StandardForm {
    pub fn matrix(&self) -> BitMatrix {
        generator_matrix_of(self.permutation.len(), &self.generators)
    }
}

fn generator_matrix_of(n: usize, gens: &[PauliString]) -> BitMatrix {
    let mut m = BitMatrix::new(2 * n);
    for g in gens {
        let mut row = BitRow::zeros(2 * n);
        for j in g.x().iter_ones() {
            row.set(j, true);
        }
        for j in g.z().iter_ones() {
            row.set(n + j, true);
        }
        m.push_bit_row(row).expect("row length 2n");
    }
    m
}

fn symplectic_bit(p: &PauliString, col: usize) -> bool {
    let n = p.n();
    if col < n {
        p.x().get(col)
    } else {
        p.z().get(col - n)
    }
}

/// Gauss–Jordan on the symplectic vectors, multiplying the strings
/// themselves so signs stay exact. Returns the pivot columns.
fn eliminate_strings(rows: &mut [PauliString], cols: std::ops::Range<usize>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in cols {
        if rank == rows.len() {
            break;
        }
        let Some(found) = (rank..rows.len()).find(|&r| symplectic_bit(&rows[r], col)) else {
            continue;
        };
        rows.swap(rank, found);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && symplectic_bit(row, col) {
                *row = row.mul_unchecked(&pivot);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    pivots
}

impl StabilizerGroup {
    /// Checks conditions (i) Hermitian and not −I, (ii) pairwise commuting,
    /// and independence of the symplectic vectors.
    pub fn new(n: usize, generators: Vec<PauliString>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if g.n() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: g.n(),
                });
            }
            if !g.is_hermitian() {
                return Err(Error::InvalidStabilizer(format!(
                    "generator {} ({g}) does not square to the identity",
                    i + 1
                )));
            }
            if g.is_identity_up_to_phase() && g.phase != 0 {
                return Err(Error::InvalidStabilizer(format!("generator {} is -I", i + 1)));
            }
        }
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                if generators[i].symplectic_product(&generators[j])? {
                    return Err(Error::InvalidStabilizer(format!(
                        "generators {} and {} anticommute",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let rank = generator_matrix_of(n, &generators).rank();
        if rank != generators.len() {
            return Err(Error::InvalidStabilizer(format!(
                "generators are dependent (rank {rank} of {})",
                generators.len()
            )));
        }
        Ok(Self { n, generators })
    }

    /// Parses one Pauli string per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut gens = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let p: PauliString = line.parse().map_err(|e: Error| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            gens.push(p);
        }
        let n = gens.first().map_or(0, PauliString::n);
        Self::new(n, gens)
    }

    /// The stabilizer of |0…0⟩.
    pub fn vacuum(n: usize) -> Self {
        let gens = (0..n)
            .map(|j| PauliString::z_type(BitRow::from_indices(n, [j])))
            .collect();
        Self { n, generators: gens }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.generators.len() == self.n
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    /// Rows `(a_i | b_i)`, X block left, signs omitted.
    pub fn generator_matrix(&self) -> BitMatrix {
        generator_matrix_of(self.n, &self.generators)
    }

    /// Reduced generating set: unique for the generated group, signs included.
    pub fn canonical_generators(&self) -> Vec<PauliString> {
        let mut rows = self.generators.clone();
        eliminate_strings(&mut rows, 0..2 * self.n);
        rows
    }

    /// The group element with symplectic part `(x | z)`, if there is one.
    pub fn element(&self, x: &BitRow, z: &BitRow) -> Option<PauliString> {
        let canon = self.canonical_generators();
        let mut target = PauliString::new(x.clone(), z.clone(), 0).ok()?;
        let mut product = PauliString::identity(self.n);
        for g in &canon {
            // pivot of g is its first set symplectic bit
            let pivot = (0..2 * self.n).find(|&c| symplectic_bit(g, c))?;
            if symplectic_bit(&target, pivot) {
                target = target.mul_unchecked(g);
                product = product.mul_unchecked(g);
            }
        }
        target.is_identity_up_to_phase().then_some(product)
    }

    /// Membership including the sign.
    pub fn contains(&self, p: &PauliString) -> bool {
        p.n() == self.n && self.element(p.x(), p.z()).is_some_and(|e| &e == p)
    }

    /// Equality of the generated groups, signs included.
    pub fn same_group(&self, other: &StabilizerGroup) -> bool {
        self.n == other.n && self.canonical_generators() == other.canonical_generators()
    }

    /// Reduction to `( I_r A | B C ; 0 0 | D I_{n-r} )` by row operations and
    /// qubit permutations. Requires a full group (m = n).
    pub fn standard_form(&self) -> Result<StandardForm> {
        if !self.is_full() {
            return Err(Error::InvalidStabilizer(format!(
                "standard form needs n = {} generators, got {}",
                self.n,
                self.len()
            )));
        }
        let n = self.n;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut rows = self.generators.clone();
        let swap_qubits = |rows: &mut Vec<PauliString>, a: usize, b: usize| {
            for r in rows.iter_mut() {
                let (xa, xb, za, zb) = (r.x.get(a), r.x.get(b), r.z.get(a), r.z.get(b));
                r.x.set(a, xb);
                r.x.set(b, xa);
                r.z.set(a, zb);
                r.z.set(b, za);
            }
        };

        let mut rank_x = 0;
        while rank_x < n {
            let pick = (rank_x..n).find_map(|c| (rank_x..n).find(|&r| rows[r].x.get(c)).map(|r| (r, c)));
            let Some((r, c)) = pick else { break };
            if c != rank_x {
                swap_qubits(&mut rows, rank_x, c);
                perm.swap(rank_x, c);
            }
            rows.swap(rank_x, r);
            let pivot = rows[rank_x].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank_x && row.x.get(rank_x) {
                    *row = row.mul_unchecked(&pivot);
                }
            }
            rank_x += 1;
        }

        // Lower block: X part is zero, reduce its Z part on columns rank_x..n.
        for t in rank_x..n {
            let pick = (t..n).find_map(|c| (t..n).find(|&r| rows[r].z.get(c)).map(|r| (r, c)));
            let Some((r, c)) = pick else {
                return Err(Error::InvalidStabilizer(
                    "Z block of the lower generators is rank deficient".into(),
                ));
            };
            if c != t {
                swap_qubits(&mut rows, t, c);
                perm.swap(t, c);
            }
            rows.swap(t, r);
            let pivot = rows[t].clone();
            for (i, row) in rows.iter_mut().enumerate().skip(rank_x) {
                if i != t && row.z.get(t) {
                    *row = row.mul_unchecked(&pivot);
                }
            }
        }

        Ok(StandardForm {
            generators: rows,
            rank_x,
            permutation: perm,
        })
    }

    /// If row reduction (without qubit permutations) gives `( I | B )` with
    /// `B` symmetric and zero on the diagonal, returns `B`. Signs are ignored.
    pub fn graph_adjacency(&self) -> Option<BitMatrix> {
        if !self.is_full() {
            return None;
        }
        let n = self.n;
        let mut rows = self.generators.clone();
        let pivots = eliminate_strings(&mut rows, 0..n);
        if pivots.len() != n {
            return None;
        }
        let mut b = BitMatrix::zeros(n, n);
        for (i, row) in rows.iter().enumerate() {
            for j in row.z.iter_ones() {
                b.set(i, j, 1);
            }
        }
        let ok = (0..n).all(|i| b.get(i, i) == 0 && (0..i).all(|j| b.get(i, j) == b.get(j, i)));
        ok.then_some(b)
    }

    /// Whether the group has a generating set of pure-X and pure-Z strings:
    /// `rank(X block) + rank(Z block) = m`.
    pub fn is_css(&self) -> bool {
        let m = self.generator_matrix();
        let n = self.n;
        let xs: Vec<usize> = (0..n).collect();
        let zs: Vec<usize> = (n..2 * n).collect();
        m.select_columns(&xs).rank() + m.select_columns(&zs).rank() == self.len()
    }

    /// Generators `U g_i U†` for a product of single-qubit Clifford words.
    pub fn conjugate_local(&self, words: &[LocalClifford]) -> Result<StabilizerGroup> {
        if words.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: words.len(),
            });
        }
        let gens = self
            .generators
            .iter()
            .map(|g| {
                let mut h = g.clone();
                for (q, word) in words.iter().enumerate() {
                    for &gate in &word.0 {
                        h.conjugate_gate(q, gate);
                    }
                }
                h
            })
            .collect();
        Ok(StabilizerGroup {
            n: self.n,
            generators: gens,
        })
    }
}

/// Convenience: Hadamard on the listed qubits, identity elsewhere.
pub fn hadamards_on(n: usize, qubits: &[usize]) -> Vec<LocalClifford> {
    let mut words = vec![LocalClifford::identity(); n];
    for &q in qubits {
        words[q] = LocalClifford::hadamard();
    }
    words
}

pub fn symplectic_product(p: &PauliString, q: &PauliString) -> Result<bool> {
    p.symplectic_product(q)
}

pub fn groups_equal(a: &StabilizerGroup, b: &StabilizerGroup) -> Result<bool> {
    if a.n != b.n {
        return Err(Error::LengthMismatch {
            expected: a.n,
            found: b.n,
        });
    }
    Ok(a.same_group(b))
}

impl fmt::Display for StabilizerGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(">")
    }
}

#[cfg(test)]
pub(crate) mod dense {
    //! Explicit 2ⁿ×2ⁿ matrices for Pauli strings; test-only ground truth.
    use nalgebra::DMatrix;
    use num_complex::Complex64 as C;

    pub fn single(letter: char) -> DMatrix<C> {
        let (o, z, i) = (C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 1.0));
        match letter {
            'I' => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
            'X' => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
            'Y' => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
            'Z' => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
            'H' => DMatrix::from_row_slice(2, 2, &[o, o, o, -o]) * C::new(0.5f64.sqrt(), 0.0),
            'P' => DMatrix::from_row_slice(2, 2, &[o, z, z, i]),
            _ => unreachable!(),
        }
    }

    pub fn kron(a: &DMatrix<C>, b: &DMatrix<C>) -> DMatrix<C> {
        a.kronecker(b)
    }

    /// Matrix of a Pauli string given in letter form, first letter = qubit 1.
    pub fn pauli(text: &str) -> DMatrix<C> {
        let (sign, body) = match text.chars().next() {
            Some('+') => (C::new(1.0, 0.0), &text[1..]),
            Some('-') => (C::new(-1.0, 0.0), &text[1..]),
            _ => (C::new(1.0, 0.0), text),
        };
        let (sign, body) = if let Some(rest) = body.strip_prefix('i') {
            (sign * C::new(0.0, 1.0), rest)
        } else {
            (sign, body)
        };
        let mut m = DMatrix::from_element(1, 1, sign);
        for c in body.chars() {
            m = kron(&m, &single(c));
        }
        m
    }

    pub fn close(a: &DMatrix<C>, b: &DMatrix<C>) -> bool {
        (a - b).iter().all(|e| e.norm() < 1e-12)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn group(gens: &[&str]) -> StabilizerGroup {
        let gens: Vec<PauliString> = gens.iter().map(|s| p(s)).collect();
        StabilizerGroup::new(gens[0].n(), gens).unwrap()
    }

    #[test]
    fn symplectic_examples() {
        assert!(symplectic_product(&p("X"), &p("Z")).unwrap());
        assert!(!symplectic_product(&p("XX"), &p("ZZ")).unwrap());
        assert!(!symplectic_product(&p("XZ"), &p("ZX")).unwrap());
        assert!(symplectic_product(&p("X"), &p("ZZ")).is_err());
        // matrix oracle for the last case
        let (a, b) = (dense::pauli("XZ"), dense::pauli("ZX"));
        assert!(dense::close(&(&a * &b), &(&b * &a)));
    }

    #[test]
    fn multiply_examples() {
        let xx = p("X").multiply(&p("X")).unwrap();
        assert!(xx.is_identity_up_to_phase());
        assert_eq!(xx.phase(), 0);

        let zx = p("Z").multiply(&p("X")).unwrap();
        assert!(zx.x().get(0) && zx.z().get(0));
        assert_eq!(zx.phase(), 2); // -X·Z
        assert_eq!(zx.to_string(), "+iY");
        let expect = dense::pauli("Z") * dense::pauli("X");
        assert!(dense::close(
            &expect,
            &(dense::pauli("X") * dense::pauli("Z") * num_complex::Complex64::new(-1.0, 0.0))
        ));

        let prod = p("XX").multiply(&p("ZZ")).unwrap();
        assert_eq!(prod.phase(), 0);
        assert_eq!(prod.to_string(), "-YY");
        assert!(dense::close(
            &(dense::pauli("XX") * dense::pauli("ZZ")),
            &dense::pauli("-YY")
        ));
    }

    #[test]
    fn parse_and_display() {
        for s in ["+XXZ", "-IYZ", "+iX", "-iZY", "+III"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("XZ").to_string(), "+XZ");
        assert!("+XQ".parse::<PauliString>().is_err());
        assert_eq!(p("Y").phase(), 1);
    }

    #[test]
    fn bell_generator_matrix() {
        let bell = group(&["XX", "ZZ"]);
        assert_eq!(
            bell.generator_matrix(),
            BitMatrix::parse_rows(&["1100", "0011"], 2).unwrap()
        );
        let vac = StabilizerGroup::vacuum(3);
        assert_eq!(
            vac.generator_matrix(),
            BitMatrix::parse_rows(&["000100", "000010", "000001"], 2).unwrap()
        );
        let ghz = group(&["XXX", "ZZI", "ZIZ"]);
        assert_eq!(
            ghz.generator_matrix(),
            BitMatrix::parse_rows(&["111000", "000110", "000101"], 2).unwrap()
        );
    }

    #[test]
    fn validity_conditions() {
        assert!(StabilizerGroup::new(2, vec![p("XX"), p("ZI")]).is_err()); // anticommute
        assert!(StabilizerGroup::new(1, vec![p("-I")]).is_err());
        assert!(StabilizerGroup::new(1, vec![p("+iX")]).is_err());
        assert!(StabilizerGroup::new(2, vec![p("XX"), p("-XX")]).is_err()); // dependent
        assert!(StabilizerGroup::new(2, vec![p("YY"), p("ZZ")]).is_ok());
        assert!(StabilizerGroup::parse("+XX\n# comment\n\n+ZZ\n").is_ok());
        match StabilizerGroup::parse("+XX\n+ZQ\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn standard_form_examples() {
        let graph = group(&["XZI", "ZXZ", "IZX"]);
        let sf = graph.standard_form().unwrap();
        assert_eq!(sf.rank_x, 3);
        assert_eq!(sf.matrix(), graph.generator_matrix());
        assert_eq!(sf.permutation, vec![0, 1, 2]);

        let ghz = group(&["XXX", "ZZI", "ZIZ"]);
        let sf = ghz.standard_form().unwrap();
        assert_eq!(sf.rank_x, 1);
        let m = sf.matrix();
        // block shape ( 1 A | B C ; 0 0 | D I )
        assert_eq!(m.get(0, 0), 1);
        for r in 1..3 {
            for c in 0..3 {
                assert_eq!(m.get(r, c), 0);
            }
            for c in 1..3 {
                assert_eq!(m.get(r, 3 + c), (r == c) as u8);
            }
        }

        let vac = StabilizerGroup::vacuum(4);
        let sf = vac.standard_form().unwrap();
        assert_eq!(sf.rank_x, 0);
        assert_eq!(sf.matrix().select_columns(&[4, 5, 6, 7]), BitMatrix::identity(4));
    }

    #[test]
    fn graph_form_examples() {
        let edge = group(&["XZ", "ZX"]);
        assert_eq!(
            edge.graph_adjacency(),
            Some(BitMatrix::parse_rows(&["01", "10"], 2).unwrap())
        );
        assert_eq!(StabilizerGroup::vacuum(2).graph_adjacency(), None);
        assert_eq!(group(&["XXX", "ZZI", "ZIZ"]).graph_adjacency(), None);
        // Y on a vertex puts a 1 on the diagonal
        assert_eq!(group(&["YZ", "ZX"]).graph_adjacency(), None);
    }

    #[test]
    fn css_examples() {
        assert!(group(&["XX", "ZZ"]).is_css());
        assert!(group(&["XXXX", "ZZII", "ZIZI", "ZIIZ"]).is_css());
        let edge = group(&["XZ", "ZX"]);
        assert!(!edge.is_css());
        // brute force: every generating pair of the 4-element group is mixed
        let elems = [p("XZ"), p("ZX"), p("XZ").multiply(&p("ZX")).unwrap()];
        for a in &elems {
            for b in &elems {
                let pure = |q: &PauliString| q.x().is_zero() || q.z().is_zero();
                if a != b {
                    assert!(!(pure(a) && pure(b)));
                }
            }
        }
    }

    #[test]
    fn conjugation_examples() {
        let bell = group(&["XX", "ZZ"]);
        let phi_minus = bell
            .conjugate_local(&[LocalClifford::z(), LocalClifford::identity()])
            .unwrap();
        assert_eq!(phi_minus.generators()[0], p("-XX"));
        assert_eq!(phi_minus.generators()[1], p("ZZ"));

        let a_form = group(&["XXI", "IXX"]);
        let h = a_form.conjugate_local(&hadamards_on(3, &[0, 1, 2])).unwrap();
        assert_eq!(h, group(&["ZZI", "IZZ"]));
        let m = a_form.generator_matrix();
        let mh = h.generator_matrix();
        for r in 0..2 {
            for c in 0..3 {
                assert_eq!(m.get(r, c), mh.get(r, 3 + c));
                assert_eq!(m.get(r, 3 + c), mh.get(r, c));
            }
        }

        let id = bell
            .conjugate_local(&[LocalClifford::identity(), LocalClifford::identity()])
            .unwrap();
        assert_eq!(id, bell);
    }

    #[test]
    fn conjugation_matches_matrices() {
        for letters in ["X", "Y", "Z", "-Y", "+iX"] {
            for (word, gates) in [("H", "H"), ("P", "P"), ("HP", "HP"), ("PPH", "PPH")] {
                let mut q = p(letters);
                for g in word.parse::<LocalClifford>().unwrap().0 {
                    q.conjugate_gate(0, g);
                }
                let mut u = dense::single('I');
                for c in gates.chars() {
                    u = dense::single(c) * u;
                }
                let expect = &u * dense::pauli(letters) * u.adjoint();
                assert!(dense::close(&expect, &dense::pauli(&q.to_string())), "{letters} {word}");
            }
        }
    }

    #[test]
    fn group_equality_examples() {
        let a = group(&["XX", "ZZ"]);
        assert!(groups_equal(&a, &group(&["ZZ", "XX"])).unwrap());
        assert!(!groups_equal(&a, &group(&["-XX", "ZZ"])).unwrap());
        let xxzz = p("XX").multiply(&p("ZZ")).unwrap();
        let b = StabilizerGroup::new(2, vec![xxzz, p("ZZ")]).unwrap();
        assert!(groups_equal(&a, &b).unwrap());
        assert!(groups_equal(&a, &StabilizerGroup::vacuum(3)).is_err());
    }

    #[test]
    fn membership_tracks_sign() {
        let a = group(&["XX", "ZZ"]);
        assert!(a.contains(&p("-YY")));
        assert!(!a.contains(&p("YY")));
        assert!(!a.contains(&p("XI")));
    }

    fn pauli_strategy(n: usize) -> impl Strategy<Value = PauliString> {
        (proptest::collection::vec(0u8..4, n), 0u8..4).prop_map(|(letters, ph)| {
            let mut x = BitRow::zeros(letters.len());
            let mut z = BitRow::zeros(letters.len());
            for (j, l) in letters.iter().enumerate() {
                x.set(j, l & 1 == 1);
                z.set(j, l & 2 == 2);
            }
            PauliString::new(x, z, ph).unwrap()
        })
    }

    fn as_matrix(q: &PauliString) -> nalgebra::DMatrix<num_complex::Complex64> {
        let ph = num_complex::Complex64::new(0.0, 1.0).powu(q.phase() as u32);
        let mut m = nalgebra::DMatrix::from_element(1, 1, ph);
        for j in 0..q.n() {
            let xj = if q.x().get(j) {
                dense::single('X')
            } else {
                dense::single('I')
            };
            let zj = if q.z().get(j) {
                dense::single('Z')
            } else {
                dense::single('I')
            };
            m = dense::kron(&m, &(xj * zj));
        }
        m
    }

    proptest! {
        #[test]
        fn multiplication_matches_matrices(
            (a, b, c) in (1usize..4).prop_flat_map(|n| (pauli_strategy(n), pauli_strategy(n), pauli_strategy(n)))
        ) {
            let ab = a.multiply(&b).unwrap();
            prop_assert!(dense::close(&as_matrix(&ab), &(as_matrix(&a) * as_matrix(&b))));
            let left = ab.multiply(&c).unwrap();
            let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            let sq = a.multiply(&a).unwrap();
            prop_assert!(sq.is_identity_up_to_phase());
            let commute = dense::close(&(as_matrix(&a) * as_matrix(&b)), &(as_matrix(&b) * as_matrix(&a)));
            prop_assert_eq!(a.commutes_with(&b).unwrap(), commute);
            prop_assert!(dense::close(&as_matrix(&a), &dense::pauli(&a.to_string())));
        }
    }
}
