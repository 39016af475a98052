//! Exact linear algebra over GF(2) and GF(p) for small primes p.
//!
//! Binary matrices keep their rows bit-packed into `u64` words so that
//! elimination is word-parallel XOR; matrices over GF(p), p > 2, store one
//! byte per entry. Both share the [`BitMatrix`] front end so callers never
//! need to care which representation is in use.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A packed vector over GF(2).
///
/// Ordering is lexicographic with index 0 as the most significant position,
/// i.e. the order of the printed bit strings.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut row = Self::zeros(len);
        for i in 0..len {
            row.set(i, true);
        }
        row
    }

    /// Indicator vector of `support`.
    pub fn from_indices(len: usize, support: impl IntoIterator<Item = usize>) -> Self {
        let mut row = Self::zeros(len);
        for i in support {
            row.set(i, true);
        }
        row
    }

    /// Builds a row from entries that must all be 0 or 1.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut row = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => row.set(i, true),
                v => {
                    return Err(Error::EntryOutOfRange {
                        value: v as u32,
                        modulus: 2,
                    })
                }
            }
        }
        Ok(row)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitRow) -> BitRow {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &BitRow) -> BitRow {
        debug_assert_eq!(self.len, other.len);
        BitRow {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &BitRow) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + tz)
            })
        })
    }

    /// Restriction to the listed positions, in the listed order.
    pub fn select(&self, positions: &[usize]) -> BitRow {
        let mut out = BitRow::zeros(positions.len());
        for (j, &p) in positions.iter().enumerate() {
            if self.get(p) {
                out.set(j, true);
            }
        }
        out
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    /// Low-level word access; the padding bits past `len` are always zero.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The row read as an integer with index 0 as the most significant bit.
    /// Only meaningful for `len <= 64`.
    pub fn to_index_msb(&self) -> u64 {
        assert!(self.len <= 64, "row too long for an integer index");
        (0..self.len).fold(0u64, |acc, i| (acc << 1) | self.get(i) as u64)
    }
}

impl Ord for BitRow {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let bit = 1u64 << diff.trailing_zeros();
                return if a & bit != 0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for BitRow {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitRow({self})")
    }
}

impl std::str::FromStr for BitRow {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut row = BitRow::zeros(s.chars().count());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => row.set(i, true),
                _ => return Err(crate::error::parse_err(0, format!("not a bit string: {s:?}"))),
            }
        }
        Ok(row)
    }
}

pub fn is_prime(d: u32) -> bool {
    if d < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= d {
        if d.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}

/// Validates a modulus for field linear algebra.
pub fn field_modulus(d: u32) -> Result<u8> {
    if d <= u8::MAX as u32 && is_prime(d) {
        Ok(d as u8)
    } else {
        Err(Error::NotPrime(d))
    }
}

fn inv_mod(a: u8, p: u8) -> u8 {
    debug_assert!(a != 0);
    // Fermat: a^(p-2)
    let p = p as u32;
    let mut base = a as u32 % p;
    let mut exp = p - 2;
    let mut acc = 1u32;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc as u8
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Rows {
    Binary(Vec<BitRow>),
    Prime(Vec<Vec<u8>>),
}

/// A dense matrix over Z_d for prime d (d = 2 by default).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    cols: usize,
    modulus: u8,
    rows: Rows,
}

/// Reduced row-echelon form: nonzero rows only, pivots strictly increasing.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rref {
    pub matrix: BitMatrix,
    pub pivots: Vec<usize>,
}

impl BitMatrix {
    /// An empty (0-row) binary matrix with `cols` columns.
    pub fn new(cols: usize) -> Self {
        Self {
            cols,
            modulus: 2,
            rows: Rows::Binary(Vec::new()),
        }
    }

    /// An empty matrix over GF(`modulus`); the modulus must be prime.
    pub fn with_modulus(cols: usize, modulus: u32) -> Result<Self> {
        let modulus = field_modulus(modulus)?;
        let rows = if modulus == 2 {
            Rows::Binary(Vec::new())
        } else {
            Rows::Prime(Vec::new())
        };
        Ok(Self { cols, modulus, rows })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            modulus: 2,
            rows: Rows::Binary(vec![BitRow::zeros(cols); rows]),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_bit_rows(n, (0..n).map(|i| BitRow::from_indices(n, [i])))
            .expect("identity rows have matching length")
    }

    pub fn from_bit_rows(cols: usize, rows: impl IntoIterator<Item = BitRow>) -> Result<Self> {
        let rows: Vec<BitRow> = rows.into_iter().collect();
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self {
            cols,
            modulus: 2,
            rows: Rows::Binary(rows),
        })
    }

    /// Builds a matrix from rows of entries in `0..modulus`.
    pub fn from_rows<R: AsRef<[u8]>>(cols: usize, modulus: u32, rows: impl IntoIterator<Item = R>) -> Result<Self> {
        let mut m = Self::with_modulus(cols, modulus)?;
        for r in rows {
            m.push_row(r.as_ref())?;
        }
        Ok(m)
    }

    /// Parses rows written as digit strings, e.g. `["110", "011"]`.
    pub fn parse_rows(rows: &[&str], modulus: u32) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.trim().len());
        let parsed: Vec<Vec<u8>> = rows
            .iter()
            .map(|r| {
                r.trim()
                    .chars()
                    .map(|c| {
                        c.to_digit(10).map(|v| v as u8).ok_or_else(|| Error::Parse {
                            line: 0,
                            message: format!("not a digit: {c:?}"),
                        })
                    })
                    .collect::<Result<Vec<u8>>>()
            })
            .collect::<Result<_>>()?;
        Self::from_rows(cols, modulus, parsed)
    }

    pub fn nrows(&self) -> usize {
        match &self.rows {
            Rows::Binary(r) => r.len(),
            Rows::Prime(r) => r.len(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u8 {
        self.modulus
    }

    pub fn is_binary(&self) -> bool {
        self.modulus == 2
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        assert!(c < self.cols, "column {c} out of range");
        match &self.rows {
            Rows::Binary(rows) => rows[r].get(c) as u8,
            Rows::Prime(rows) => rows[r][c],
        }
    }

    /// Sets an entry; the value is reduced modulo d.
    pub fn set(&mut self, r: usize, c: usize, value: u8) {
        assert!(c < self.cols, "column {c} out of range");
        let v = value % self.modulus;
        match &mut self.rows {
            Rows::Binary(rows) => rows[r].set(c, v == 1),
            Rows::Prime(rows) => rows[r][c] = v,
        }
    }

    pub fn row(&self, r: usize) -> Vec<u8> {
        match &self.rows {
            Rows::Binary(rows) => rows[r].to_bits(),
            Rows::Prime(rows) => rows[r].clone(),
        }
    }

    pub fn row_vectors(&self) -> Vec<Vec<u8>> {
        (0..self.nrows()).map(|r| self.row(r)).collect()
    }

    /// Packed rows, available for binary matrices only.
    pub fn bit_rows(&self) -> Option<&[BitRow]> {
        match &self.rows {
            Rows::Binary(rows) => Some(rows),
            Rows::Prime(_) => None,
        }
    }

    pub fn bit_row(&self, r: usize) -> Option<&BitRow> {
        self.bit_rows().map(|rows| &rows[r])
    }

    fn check_vector(&self, v: &[u8]) -> Result<()> {
        if v.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        if let Some(&bad) = v.iter().find(|&&e| e >= self.modulus) {
            return Err(Error::EntryOutOfRange {
                value: bad as u32,
                modulus: self.modulus,
            });
        }
        Ok(())
    }

    pub fn push_row(&mut self, v: &[u8]) -> Result<()> {
        self.check_vector(v)?;
        match &mut self.rows {
            Rows::Binary(rows) => rows.push(BitRow::from_bits(v)?),
            Rows::Prime(rows) => rows.push(v.to_vec()),
        }
        Ok(())
    }

    pub fn push_bit_row(&mut self, v: BitRow) -> Result<()> {
        if v.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        match &mut self.rows {
            Rows::Binary(rows) => rows.push(v),
            Rows::Prime(rows) => rows.push(v.to_bits()),
        }
        Ok(())
    }

    /// Column restriction, keeping the listed columns in the listed order.
    pub fn select_columns(&self, columns: &[usize]) -> BitMatrix {
        let rows = match &self.rows {
            Rows::Binary(rows) => Rows::Binary(rows.iter().map(|r| r.select(columns)).collect()),
            Rows::Prime(rows) => Rows::Prime(rows.iter().map(|r| columns.iter().map(|&c| r[c]).collect()).collect()),
        };
        BitMatrix {
            cols: columns.len(),
            modulus: self.modulus,
            rows,
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut out = match self.modulus {
            2 => BitMatrix::zeros(self.cols, self.nrows()),
            d => BitMatrix {
                cols: self.nrows(),
                modulus: d,
                rows: Rows::Prime(vec![vec![0; self.nrows()]; self.cols]),
            },
        };
        for r in 0..self.nrows() {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if v != 0 {
                    out.set(c, r, v);
                }
            }
        }
        out
    }

    /// Matrix-vector product `m · v` (one entry per row).
    pub fn mul_vec(&self, v: &[u8]) -> Result<Vec<u8>> {
        self.check_vector(v)?;
        let d = self.modulus as u32;
        Ok((0..self.nrows())
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.get(r, c) as u32 * v[c] as u32)
                    .sum::<u32>()
                    .rem_euclid(d) as u8
            })
            .collect())
    }

    pub fn rank(&self) -> usize {
        match &self.rows {
            Rows::Binary(rows) => {
                let mut work = rows.clone();
                binary_eliminate(&mut work, self.cols, false).len()
            }
            Rows::Prime(rows) => {
                let mut work = rows.clone();
                prime_eliminate(&mut work, self.cols, self.modulus, false).len()
            }
        }
    }

    pub fn rref(&self) -> Rref {
        let (rows, pivots) = match &self.rows {
            Rows::Binary(rows) => {
                let mut work = rows.clone();
                let pivots = binary_eliminate(&mut work, self.cols, true);
                work.truncate(pivots.len());
                (Rows::Binary(work), pivots)
            }
            Rows::Prime(rows) => {
                let mut work = rows.clone();
                let pivots = prime_eliminate(&mut work, self.cols, self.modulus, true);
                work.truncate(pivots.len());
                (Rows::Prime(work), pivots)
            }
        };
        Rref {
            matrix: BitMatrix {
                cols: self.cols,
                modulus: self.modulus,
                rows,
            },
            pivots,
        }
    }

    /// Basis of the right kernel `{v : m·v = 0}`, one row per free column
    /// in increasing column order.
    pub fn kernel_basis(&self) -> BitMatrix {
        let Rref { matrix, pivots } = self.rref();
        let d = self.modulus;
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = BitMatrix {
            cols: self.cols,
            modulus: d,
            rows: if d == 2 {
                Rows::Binary(Vec::new())
            } else {
                Rows::Prime(Vec::new())
            },
        };
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u8; self.cols];
            v[free] = 1;
            for (i, &p) in pivots.iter().enumerate() {
                let e = matrix.get(i, free);
                v[p] = (d - e) % d;
            }
            out.push_row(&v).expect("kernel vector is well formed");
        }
        out
    }

    /// Whether `v` is a GF(d)-combination of the rows.
    pub fn in_row_space(&self, v: &[u8]) -> Result<bool> {
        self.check_vector(v)?;
        let rref = self.rref();
        Ok(rref.reduce(v).iter().all(|&e| e == 0))
    }
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Clears every pivot position of `v` using the reduced rows. The result
    /// is zero iff `v` lies in the row space.
    pub fn reduce(&self, v: &[u8]) -> Vec<u8> {
        let d = self.matrix.modulus as u32;
        let mut out = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            let coef = out[p] as u32;
            if coef == 0 {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                let e = self.matrix.get(i, c) as u32;
                *o = ((*o as u32 + d * d - coef * e) % d) as u8;
            }
        }
        out
    }

    /// Binary-only fast path of [`Rref::reduce`]. For binary spaces the
    /// result is the lexicographically smallest member of the coset `v + span`.
    pub fn reduce_bits(&self, v: &BitRow) -> BitRow {
        let rows = self.matrix.bit_rows().expect("reduce_bits requires a binary matrix");
        let mut out = v.clone();
        for (row, &p) in rows.iter().zip(&self.pivots) {
            if out.get(p) {
                out.xor_assign(row);
            }
        }
        out
    }
}

/// Gauss–Jordan over GF(2). Returns pivot columns; rows `0..pivots.len()`
/// hold the echelon form afterwards. With `reduce` unset only the rows below
/// each pivot are cleared, which is enough for rank.
fn binary_eliminate(rows: &mut [BitRow], cols: usize, reduce: bool) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows.len() {
            break;
        }
        let Some(found) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, found);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for r in tail.iter_mut() {
            if r.get(col) {
                r.xor_assign(pivot_row);
            }
        }
        if reduce {
            let (above, rest) = rows.split_at_mut(rank);
            let pivot_row = &rest[0];
            for r in above.iter_mut() {
                if r.get(col) {
                    r.xor_assign(pivot_row);
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    pivots
}

fn prime_eliminate(rows: &mut [Vec<u8>], cols: usize, p: u8, reduce: bool) -> Vec<usize> {
    let d = p as u32;
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows.len() {
            break;
        }
        let Some(found) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = inv_mod(rows[rank][col], p) as u32;
        for e in rows[rank].iter_mut() {
            *e = (*e as u32 * inv % d) as u8;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || (!reduce && r < rank) {
                continue;
            }
            let coef = row[col] as u32;
            if coef == 0 {
                continue;
            }
            for (e, &pe) in row.iter_mut().zip(&pivot_row) {
                *e = ((*e as u32 + d * d - coef * pe as u32) % d) as u8;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    pivots
}
