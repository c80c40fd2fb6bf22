//! Dense linear algebra over GF(2) on bit-packed vectors and matrices.
//!
//! Coordinates are packed into `u64` words, least-significant-first inside a
//! word, so XOR/AND/popcount run word-parallel. All comparisons are defined
//! on the logical coordinate sequence; padding bits past `len` are kept zero.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

/// A vector over GF(2) with a fixed number of coordinates.
///
/// Addition is coordinatewise XOR, the Hadamard product is coordinatewise
/// AND. Coordinate 0 is the most significant for ordering purposes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Vector {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vector {
    pub fn zeros(len: usize) -> Self {
        let nwords = len.div_ceil(WORD_BITS).max(1);
        Gf2Vector {
            len,
            words: vec![0; nwords],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    /// Unit vector with a single 1 at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Parses a line of `'0'`/`'1'` characters.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim_end_matches(['\r', '\n']);
        if text.is_empty() {
            return Err(Error::TextFormat("empty vector line".into()));
        }
        let mut v = Self::zeros(text.len());
        for (i, c) in text.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                other => {
                    return Err(Error::TextFormat(format!(
                        "invalid character {other:?} in vector line"
                    )))
                }
            }
        }
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.len, "coordinate {index} out of range {}", self.len);
        (self.words[index / WORD_BITS] >> (index % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, index: usize, value: bool) {
        assert!(index < self.len, "coordinate {index} out of range {}", self.len);
        let mask = 1u64 << (index % WORD_BITS);
        if value {
            self.words[index / WORD_BITS] |= mask;
        } else {
            self.words[index / WORD_BITS] &= !mask;
        }
    }

    /// Number of nonzero coordinates.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &Gf2Vector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// GF(2) sum (coordinatewise XOR).
    pub fn plus(&self, other: &Gf2Vector) -> Gf2Vector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Parity of the overlap `|self ∘ other| mod 2`; this is the bilinear
    /// form underlying every evenness argument in the crate.
    pub fn overlap_parity(&self, other: &Gf2Vector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in overlap");
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    /// Restriction of the vector to the given coordinates, in order.
    pub fn restrict(&self, coords: &[usize]) -> Gf2Vector {
        let mut out = Gf2Vector::zeros(coords.len());
        for (j, &c) in coords.iter().enumerate() {
            if self.get(c) {
                out.set(j, true);
            }
        }
        out
    }
}

/// Coordinatewise AND; the Hadamard product on `(Z_2)^n`.
pub fn hprod(x: &Gf2Vector, y: &Gf2Vector) -> Result<Gf2Vector> {
    if x.len != y.len {
        return Err(Error::LengthMismatch {
            left: x.len,
            right: y.len,
        });
    }
    let mut out = x.clone();
    for (a, b) in out.words.iter_mut().zip(&y.words) {
        *a &= b;
    }
    Ok(out)
}

impl Ord for Gf2Vector {
    fn cmp(&self, other: &Self) -> Ordering {
        // Coordinate 0 is most significant; within a word that is the low bit,
        // so the first differing coordinate is the lowest set bit of the xor.
        for (a, b) in self.words.iter().zip(&other.words) {
            let x = a ^ b;
            if x != 0 {
                let bit = x.trailing_zeros();
                return if (a >> bit) & 1 == 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for Gf2Vector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vector({self})")
    }
}

/// A dense matrix over GF(2), stored as one `Gf2Vector` per row.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Gf2Vector>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Gf2Matrix {
            rows,
            cols,
            data: vec![Gf2Vector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<Gf2Vector>) -> Self {
        let cols = rows.first().map_or(0, Gf2Vector::len);
        assert!(
            rows.iter().all(|r| r.len() == cols),
            "ragged rows in matrix"
        );
        Gf2Matrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Gf2Vector]) -> Self {
        let rows = cols.first().map_or(0, Gf2Vector::len);
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns in matrix");
            for i in 0..rows {
                if c.get(i) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Parses the shared text format: one row of `'0'`/`'1'` per line, a
    /// blank line or end of input terminates the matrix.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.trim_end_matches('\r');
            if line.is_empty() {
                break;
            }
            rows.push(Gf2Vector::parse(line)?);
        }
        if rows.is_empty() {
            return Err(Error::TextFormat("no matrix rows found".into()));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::TextFormat("rows have differing lengths".into()));
        }
        Ok(Self::from_rows(rows))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.data[row].get(col)
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.data[row].set(col, value);
    }

    pub fn row(&self, i: usize) -> &Gf2Vector {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[Gf2Vector] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Gf2Vector {
        let mut c = Gf2Vector::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                c.set(i, true);
            }
        }
        c
    }

    pub fn columns(&self) -> Vec<Gf2Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    /// Matrix-vector product `M x` with `x` a column vector.
    pub fn mul_vector(&self, x: &Gf2Vector) -> Gf2Vector {
        assert_eq!(self.cols, x.len(), "shape mismatch in mul_vector");
        let mut out = Gf2Vector::zeros(self.rows);
        for i in 0..self.rows {
            if self.data[i].overlap_parity(x) {
                out.set(i, true);
            }
        }
        out
    }

    /// Matrix product `self * other`.
    pub fn mul_matrix(&self, other: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul_matrix");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let mut acc = Gf2Vector::zeros(other.cols);
            for k in 0..self.cols {
                if self.get(i, k) {
                    acc.xor_assign(&other.data[k]);
                }
            }
            out.data[i] = acc;
        }
        out
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// True for a 0/1 matrix with exactly one 1 per row and per column.
    pub fn is_permutation_matrix(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let mut seen = vec![false; self.cols];
        for r in &self.data {
            if r.weight() != 1 {
                return false;
            }
            let j = r.support()[0];
            if seen[j] {
                return false;
            }
            seen[j] = true;
        }
        true
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Reduced row echelon form. Returns the reduced matrix (same shape,
    /// zero rows at the bottom), the rank, and the pivot column list.
    pub fn rref(&self) -> (Gf2Matrix, usize, Vec<usize>) {
        let mut rows = self.data.clone();
        let mut pivots = Vec::new();
        let mut rank = 0usize;
        for col in 0..self.cols {
            let Some(pivot_row) = (rank..rows.len()).find(|&i| rows[i].get(col)) else {
                continue;
            };
            rows.swap(rank, pivot_row);
            let pivot = rows[rank].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && row.get(col) {
                    row.xor_assign(&pivot);
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        (Gf2Matrix::from_rows(rows), rank, pivots)
    }

    /// True iff `x` is a GF(2) linear combination of the rows.
    pub fn in_span(&self, x: &Gf2Vector) -> Result<bool> {
        if self.cols != x.len() && self.rows != 0 {
            return Err(Error::LengthMismatch {
                left: self.cols,
                right: x.len(),
            });
        }
        if self.rows == 0 {
            return Ok(x.is_zero());
        }
        let (reduced, rank, pivots) = self.rref();
        let mut rem = x.clone();
        for (i, &p) in pivots.iter().enumerate().take(rank) {
            if rem.get(p) {
                rem.xor_assign(reduced.row(i));
            }
        }
        Ok(rem.is_zero())
    }

    /// Inverse of a square full-rank matrix.
    pub fn invert(&self) -> Result<Gf2Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        // Augment with the identity and reduce.
        let mut aug: Vec<Gf2Vector> = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Gf2Vector::zeros(2 * n);
            for j in 0..n {
                if self.get(i, j) {
                    row.set(j, true);
                }
            }
            row.set(n + i, true);
            aug.push(row);
        }
        let mut rank = 0usize;
        for col in 0..n {
            let Some(pivot_row) = (rank..n).find(|&i| aug[i].get(col)) else {
                continue;
            };
            aug.swap(rank, pivot_row);
            let pivot = aug[rank].clone();
            for (i, row) in aug.iter_mut().enumerate() {
                if i != rank && row.get(col) {
                    row.xor_assign(&pivot);
                }
            }
            rank += 1;
        }
        if rank < n {
            return Err(Error::Singular);
        }
        let mut inv = Gf2Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if aug[i].get(n + j) {
                    inv.set(i, j, true);
                }
            }
        }
        Ok(inv)
    }

    /// Basis of the right kernel `{x : Mx = 0}`, one vector per row of the
    /// returned matrix. Dimension is `cols - rank`.
    pub fn kernel(&self) -> Gf2Matrix {
        let (reduced, rank, pivots) = self.rref();
        let pivot_set: Vec<bool> = {
            let mut s = vec![false; self.cols];
            for &p in &pivots {
                s[p] = true;
            }
            s
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free] {
                continue;
            }
            let mut x = Gf2Vector::zeros(self.cols);
            x.set(free, true);
            for (i, &p) in pivots.iter().enumerate().take(rank) {
                if reduced.get(i, free) {
                    x.set(p, true);
                }
            }
            basis.push(x);
        }
        if basis.is_empty() {
            Gf2Matrix {
                rows: 0,
                cols: self.cols,
                data: Vec::new(),
            }
        } else {
            Gf2Matrix::from_rows(basis)
        }
    }
}

impl fmt::Display for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.data {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{} [", self.rows, self.cols)?;
        for row in &self.data {
            writeln!(f, "  {row}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Gf2Vector {
        Gf2Vector::parse(s).unwrap()
    }

    fn m(rows: &[&str]) -> Gf2Matrix {
        Gf2Matrix::from_rows(rows.iter().map(|r| v(r)).collect())
    }

    #[test]
    fn weight_counts_ones() {
        assert_eq!(v("0000").weight(), 0);
        assert_eq!(v("1111").weight(), 4);
        assert_eq!(v("1010").weight(), 2);
    }

    #[test]
    fn weight_identity_with_hadamard() {
        // |x+y| = |x| + |y| - 2|x∘y|
        let x = v("110101");
        let y = v("011100");
        let s = x.plus(&y);
        let p = hprod(&x, &y).unwrap();
        assert_eq!(s.weight() + 2 * p.weight(), x.weight() + y.weight());
    }

    #[test]
    fn rref_identity_is_fixed() {
        let id = Gf2Matrix::identity(3);
        let (r, rank, pivots) = id.rref();
        assert_eq!(r, id);
        assert_eq!(rank, 3);
        assert_eq!(pivots, vec![0, 1, 2]);
    }

    #[test]
    fn rref_duplicate_rows_rank_one() {
        let mm = m(&["1010", "1010"]);
        let (_, rank, _) = mm.rref();
        assert_eq!(rank, 1);
    }

    #[test]
    fn rref_dependent_rows() {
        let mm = m(&["1100", "0110", "1010"]);
        let (_, rank, _) = mm.rref();
        assert_eq!(rank, 2);
    }

    #[test]
    fn in_span_examples() {
        let basis = m(&["1100", "0011"]);
        assert!(basis.in_span(&v("1111")).unwrap());
        assert!(!basis.in_span(&v("1000")).unwrap());
        let empty = Gf2Matrix::zeros(0, 0);
        assert!(empty.in_span(&Gf2Vector::zeros(4)).unwrap());
    }

    #[test]
    fn in_span_length_mismatch() {
        let basis = m(&["1100"]);
        assert!(matches!(
            basis.in_span(&v("110")),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn invert_examples() {
        let id = Gf2Matrix::identity(4);
        assert_eq!(id.invert().unwrap(), id);

        let u = m(&["11", "01"]);
        assert_eq!(u.invert().unwrap(), u);

        // A permutation matrix inverts to its transpose.
        let p = m(&["010", "001", "100"]);
        assert_eq!(p.invert().unwrap(), p.transpose());

        let singular = m(&["11", "11"]);
        assert!(matches!(singular.invert(), Err(Error::Singular)));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Gf2Matrix::identity(3).kernel().rows(), 0);
        assert_eq!(Gf2Matrix::zeros(3, 3).kernel().rows(), 3);

        let parity = m(&["1111"]);
        let k = parity.kernel();
        assert_eq!(k.rows(), 3);
        for row in k.row_vectors() {
            assert_eq!(row.weight() % 2, 0);
        }
    }

    #[test]
    fn lex_order_coordinate_zero_most_significant() {
        assert!(v("0110") < v("1010"));
        assert!(v("1010") < v("1100"));
        assert!(v("0001") < v("0010"));
        // Multi-word lengths behave the same way.
        let mut a = Gf2Vector::zeros(70);
        let mut b = Gf2Vector::zeros(70);
        a.set(69, true);
        b.set(3, true);
        assert!(a < b);
    }

    #[test]
    fn multiword_ops() {
        let mut a = Gf2Vector::zeros(70);
        a.set(0, true);
        a.set(65, true);
        let mut b = Gf2Vector::zeros(70);
        b.set(65, true);
        b.set(69, true);
        assert_eq!(a.plus(&b).support(), vec![0, 69]);
        assert_eq!(hprod(&a, &b).unwrap().support(), vec![65]);
        assert_eq!(a.weight(), 2);
    }

    #[test]
    fn parse_and_display_roundtrip() {
        let text = "10110\n01011\n";
        let mm = Gf2Matrix::parse(text).unwrap();
        assert_eq!(mm.to_string(), text);
        assert!(Gf2Matrix::parse("10\n1\n").is_err());
        assert!(Gf2Matrix::parse("1x0\n").is_err());
        assert!(Gf2Matrix::parse("\n").is_err());
        // Blank line terminates.
        let first = Gf2Matrix::parse("11\n00\n\n1111\n").unwrap();
        assert_eq!(first.rows(), 2);
        assert_eq!(first.cols(), 2);
    }

    #[test]
    fn mul_vector_and_matrix() {
        let p = m(&["010", "001", "100"]);
        let x = v("100");
        assert_eq!(p.mul_vector(&x), v("001"));
        assert_eq!(p.mul_matrix(&p.invert().unwrap()), Gf2Matrix::identity(3));
    }
}
