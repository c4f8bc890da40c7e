//! Dense linear algebra over GF(2) with rows packed into `u64` words.

use std::fmt;

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Vector with ones exactly at `positions`.
    pub fn from_ones(len: usize, positions: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for p in positions {
            v.toggle(p);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_ones(bits.len(), bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Positions of the ones, ascending.
    pub fn ones(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * WORD + w.trailing_zeros() as usize);
            }
        }
        None
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A `rows × cols` matrix over GF(2), row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: Vec<BitVector>,
    cols: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows: vec![BitVector::zeros(cols); rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Stacks row vectors; all must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "row length mismatch");
        BitMatrix { rows, cols }
    }

    pub fn from_dense(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols);
                BitVector::from_ones(cols, r.iter().enumerate().filter(|(_, &b)| b & 1 == 1).map(|(i, _)| i))
            })
            .collect();
        BitMatrix { rows, cols }
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|r| (0..self.cols).map(|i| r.get(i) as u8).collect())
            .collect()
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value)
    }

    pub fn row(&self, r: usize) -> &BitVector {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn push_row(&mut self, row: BitVector) {
        assert_eq!(row.len(), self.cols);
        self.rows.push(row);
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVector::is_zero)
    }

    pub fn column(&self, c: usize) -> BitVector {
        BitVector::from_ones(self.nrows(), (0..self.nrows()).filter(|&r| self.get(r, c)))
    }

    pub fn transpose(&self) -> BitMatrix {
        let rows = (0..self.cols).map(|c| self.column(c)).collect();
        BitMatrix {
            rows,
            cols: self.nrows(),
        }
    }

    /// `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.nrows(), "dimension mismatch");
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = BitVector::zeros(other.cols);
                for k in r.ones() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        BitMatrix { rows, cols: other.cols }
    }

    /// `self · v` for a column vector `v`.
    pub fn apply(&self, v: &BitVector) -> BitVector {
        assert_eq!(self.cols, v.len());
        BitVector::from_ones(self.nrows(), (0..self.nrows()).filter(|&r| self.rows[r].dot(v)))
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        BitMatrix { rows, cols: self.cols }
    }

    /// Reduced row echelon form and the pivot column of each nonzero row.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            let Some(p) = (next..rows.len()).find(|&r| rows[r].get(c)) else {
                continue;
            };
            rows.swap(next, p);
            let pivot_row = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            next += 1;
            if next == rows.len() {
                break;
            }
        }
        (BitMatrix { rows, cols: self.cols }, pivots)
    }

    pub fn rank(&self) -> usize {
        // forward elimination only
        let mut basis: Vec<BitVector> = Vec::new();
        let mut leads: Vec<usize> = Vec::new();
        for row in &self.rows {
            let mut v = row.clone();
            for (b, &lead) in basis.iter().zip(&leads) {
                if v.get(lead) {
                    v.xor_assign(b);
                }
            }
            if let Some(lead) = v.first_one() {
                basis.push(v);
                leads.push(lead);
            }
        }
        basis.len()
    }

    /// Basis of `{v : self·v = 0}` as rows; one vector per free column,
    /// ordered by free column.
    pub fn kernel_basis(&self) -> BitMatrix {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let rows = (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitVector::zeros(self.cols);
                v.set(free, true);
                for (k, &p) in pivots.iter().enumerate() {
                    if r.get(k, free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect();
        BitMatrix { rows, cols: self.cols }
    }

    /// Reduced basis of the column space, as rows of length `nrows()`.
    pub fn image_basis(&self) -> BitMatrix {
        let (r, pivots) = self.transpose().rref();
        let mut rows = r.rows;
        rows.truncate(pivots.len());
        BitMatrix {
            rows,
            cols: self.nrows(),
        }
    }

    /// Whether every row of `vectors` lies in the row space of `self`.
    pub fn row_space_contains(&self, vectors: &BitMatrix) -> bool {
        self.rank() == self.vstack(vectors).rank()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.nrows(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_and_zero() {
        let id = BitMatrix::identity(3);
        assert_eq!(id.rank(), 3);
        assert_eq!(id.kernel_basis().nrows(), 0);
        let z = BitMatrix::zeros(2, 5);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.kernel_basis().nrows(), 5);
        assert_eq!(z.image_basis().nrows(), 0);
    }

    #[test]
    fn triangle_coboundary() {
        // pairs {12,13},{12,23},{13,23} against edges 12,13,23
        let d0 = BitMatrix::from_dense(&[vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]]);
        assert_eq!(d0.rank(), 2);
        let k = d0.kernel_basis();
        assert_eq!(k.to_dense(), vec![vec![1, 1, 1]]);
    }

    #[test]
    fn wide_rows_cross_word_boundary() {
        let mut m = BitMatrix::zeros(2, 130);
        m.set(0, 0, true);
        m.set(0, 129, true);
        m.set(1, 129, true);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.kernel_basis().nrows(), 128);
        assert!(m.mul(&m.kernel_basis().transpose()).is_zero());
    }

    fn arb_matrix() -> impl Strategy<Value = BitMatrix> {
        (0usize..9, 0usize..80).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(0u8..2, c), r).prop_map(move |rows| {
                if rows.is_empty() {
                    BitMatrix::zeros(0, c)
                } else {
                    BitMatrix::from_dense(&rows)
                }
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let k = m.kernel_basis();
            prop_assert_eq!(m.rank() + k.nrows(), m.ncols());
            prop_assert_eq!(k.rank(), k.nrows());
            prop_assert!(k.mul(&m.transpose()).is_zero());
        }

        #[test]
        fn image_basis_spans_columns(m in arb_matrix()) {
            let img = m.image_basis();
            prop_assert_eq!(img.nrows(), m.rank());
            prop_assert!(img.row_space_contains(&m.transpose()));
        }
    }
}
