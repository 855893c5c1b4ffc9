//! Dense linear algebra over GF(2) with rows packed into 64-bit words.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum F2Error {
    #[error("image vector {index} is not in the span of the kernel basis")]
    ImageNotContained { index: usize },
    #[error("vector length {got} does not match expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

/// A bit vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Vec {
    len: usize,
    words: Vec<u64>,
}

impl F2Vec {
    pub fn zeros(len: usize) -> Self {
        F2Vec { len, words: vec![0; words_for(len)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &F2Vec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + t)
            })
        })
    }

    pub fn dot(&self, other: &F2Vec) -> bool {
        let mut acc = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= (a & b).count_ones();
        }
        acc & 1 == 1
    }
}

impl fmt::Debug for F2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "F2Vec({s})")
    }
}

/// Dense `rows x cols` matrix over GF(2).
#[derive(Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<F2Vec>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix { rows, cols, data: vec![F2Vec::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<F2Vec>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length mismatch");
        }
        F2Matrix { rows: rows.len(), cols, data: rows }
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[F2Vec]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for i in c.ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn from_u8(rows: usize, cols: usize, entries: &[u8]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if entries[i * cols + j] & 1 == 1 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols, "entry ({i},{j}) out of bounds");
        self.data[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        assert!(i < self.rows && j < self.cols, "entry ({i},{j}) out of bounds");
        self.data[i].set(j, b);
    }

    pub fn row(&self, i: usize) -> &F2Vec {
        &self.data[i]
    }

    pub fn column(&self, j: usize) -> F2Vec {
        let mut v = F2Vec::zeros(self.rows);
        for i in 0..self.rows {
            if self.data[i].get(j) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.data[i].ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &F2Vec) -> F2Vec {
        assert_eq!(v.len(), self.cols);
        let mut out = F2Vec::zeros(self.rows);
        for i in 0..self.rows {
            if self.data[i].dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in self.data[i].ones() {
                out.data[i].xor_assign(&rhs.data[k]);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F2Vec::is_zero)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// In-place reduced row echelon form; returns pivot columns in row order.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.data[i].get(c)) else {
                continue;
            };
            self.data.swap(r, p);
            let pivot_row = self.data[r].clone();
            for i in 0..self.rows {
                if i != r && self.data[i].get(c) {
                    self.data[i].xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for r in &self.data {
            let s: String = (0..self.cols).map(|j| if r.get(j) { '1' } else { '.' }).collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

/// Reduced echelon basis of the span of `vectors`, ordered by pivot.
pub fn echelon_basis(len: usize, vectors: &[F2Vec]) -> Vec<F2Vec> {
    let mut m = F2Matrix::from_rows(len, vectors.to_vec());
    let r = m.rref().len();
    m.data.truncate(r);
    m.data
}

/// Rank, kernel basis and image basis of `m` viewed as a map GF(2)^cols -> GF(2)^rows.
///
/// The kernel basis is the standard one attached to the free columns of the
/// row-reduced matrix; the image basis is the reduced echelon basis of the
/// column space. Pivots are chosen lowest index first.
pub fn rank_kernel_image(m: &F2Matrix) -> (usize, Vec<F2Vec>, Vec<F2Vec>) {
    let mut red = m.clone();
    let pivots = red.rref();
    let rank = pivots.len();

    let mut is_pivot = vec![false; m.cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut kernel = Vec::with_capacity(m.cols - rank);
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = F2Vec::unit(m.cols, free);
        for (r, &pc) in pivots.iter().enumerate() {
            if red.data[r].get(free) {
                v.set(pc, true);
            }
        }
        kernel.push(v);
    }

    let columns: Vec<F2Vec> = (0..m.cols).map(|j| m.column(j)).collect();
    let image = echelon_basis(m.rows, &columns);
    debug_assert_eq!(image.len(), rank);
    (rank, kernel, image)
}

/// Incremental echelon form used to test membership and extend bases.
#[derive(Clone, Debug)]
pub struct EchelonSpan {
    len: usize,
    rows: Vec<(usize, F2Vec)>,
}

impl EchelonSpan {
    pub fn new(len: usize) -> Self {
        EchelonSpan { len, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &F2Vec) -> F2Vec {
        let mut w = v.clone();
        for (p, row) in &self.rows {
            if w.get(*p) {
                w.xor_assign(row);
            }
        }
        w
    }

    pub fn contains(&self, v: &F2Vec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &F2Vec) -> bool {
        assert_eq!(v.len(), self.len);
        let w = self.reduce(v);
        match w.first_one() {
            None => false,
            Some(p) => {
                for (_, row) in self.rows.iter_mut() {
                    if row.get(p) {
                        row.xor_assign(&w);
                    }
                }
                let pos = self.rows.partition_point(|(q, _)| *q < p);
                self.rows.insert(pos, (p, w));
                true
            }
        }
    }
}

/// Dimension and representatives of span(ker) / span(im).
///
/// Representatives are members of `ker_basis` completing a basis of the image
/// to one of the kernel span, scanned in input order.
pub fn subquotient(ker_basis: &[F2Vec], im_basis: &[F2Vec]) -> Result<(usize, Vec<F2Vec>), F2Error> {
    let len = ker_basis.first().or(im_basis.first()).map_or(0, F2Vec::len);
    for v in ker_basis.iter().chain(im_basis) {
        if v.len() != len {
            return Err(F2Error::LengthMismatch { expected: len, got: v.len() });
        }
    }
    let mut ker = EchelonSpan::new(len);
    for v in ker_basis {
        ker.insert(v);
    }
    let mut span = EchelonSpan::new(len);
    for (index, v) in im_basis.iter().enumerate() {
        if !ker.contains(v) {
            return Err(F2Error::ImageNotContained { index });
        }
        span.insert(v);
    }
    let mut reps = Vec::new();
    for v in ker_basis {
        if span.insert(v) {
            reps.push(v.clone());
        }
    }
    Ok((reps.len(), reps))
}
