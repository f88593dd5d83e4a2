//! Square matrices over GF(4) of dimension at most 16, with a 2×2 block view.
//!
//! Rows are packed two bits per entry (column `c` at bits `2c..2c+2`), so a
//! row is also the packed form of a vector in GF(4)^dim. The same packing
//! numbers the points of the natural action: the vector with coordinates
//! `v_i` is the point `Σ v_i · 4^i`, and a matrix acts by `v ↦ v·X`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::element::{GroupElement, Permutation};
use crate::error::{Error, Result};
use crate::gf4::{Gf4, Mat2};
use crate::group::GroupHandle;

pub const MAX_DIM: usize = 16;

const LO: u64 = 0x5555_5555_5555_5555;

#[inline]
fn scale_packed(c: u8, w: u64) -> u64 {
    let lo = w & LO;
    let hi = (w >> 1) & LO;
    match c & 3 {
        0 => 0,
        1 => w,
        // (b0 + b1·α)·α = b1 + (b0 + b1)·α
        2 => hi | ((lo ^ hi) << 1),
        // (b0 + b1·α)·(α + 1) = (b0 + b1) + b0·α
        _ => (lo ^ hi) | (lo << 1),
    }
}

#[inline]
fn entry_of(w: u64, c: usize) -> u8 {
    ((w >> (2 * c)) & 3) as u8
}

/// A `dim × dim` matrix over GF(4).
///
/// Serialized as its literal; the dimension is recovered from the digit
/// count.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Matrix {
    dim: u8,
    rows: [u32; MAX_DIM],
}

impl Matrix {
    pub fn zero(dim: usize) -> Matrix {
        assert!(
            (1..=MAX_DIM).contains(&dim),
            "matrix dimension {dim} outside 1..={MAX_DIM}"
        );
        Matrix {
            dim: dim as u8,
            rows: [0; MAX_DIM],
        }
    }

    pub fn identity(dim: usize) -> Matrix {
        let mut m = Matrix::zero(dim);
        for i in 0..dim {
            m.rows[i] = 1 << (2 * i);
        }
        m
    }

    pub fn from_entries(entries: &[Vec<Gf4>]) -> Result<Matrix> {
        let dim = entries.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::InvalidParameter(format!(
                "matrix dimension {dim} outside 1..={MAX_DIM}"
            )));
        }
        let mut m = Matrix::zero(dim);
        for (r, row) in entries.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            for (c, x) in row.iter().enumerate() {
                m.set(r, c, *x);
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Gf4 {
        Gf4::from_code(entry_of(self.rows[r] as u64, c))
    }

    pub fn set(&mut self, r: usize, c: usize, x: Gf4) {
        let shift = 2 * c;
        self.rows[r] = (self.rows[r] & !(3 << shift)) | ((x.code() as u32) << shift);
    }

    /// Packed row `r`.
    #[inline]
    pub fn row(&self, r: usize) -> u32 {
        self.rows[r]
    }

    /// `v · self` for a packed row vector `v`.
    #[inline]
    pub fn apply(&self, v: u32) -> u32 {
        let mut acc = 0u64;
        for i in 0..self.dim() {
            let c = entry_of(v as u64, i);
            if c != 0 {
                acc ^= scale_packed(c, self.rows[i] as u64);
            }
        }
        acc as u32
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim);
        let mut out = *self;
        for i in 0..self.dim() {
            out.rows[i] ^= rhs.rows[i];
        }
        out
    }

    pub fn neg(&self) -> Matrix {
        *self
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        self.add(&rhs.neg())
    }

    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let mut out = Matrix::zero(self.dim());
        for i in 0..self.dim() {
            out.rows[i] = rhs.apply(self.rows[i]);
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.dim());
        for r in 0..self.dim() {
            for c in 0..self.dim() {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// Gauss–Jordan inversion on the augmented matrix `[self | I]`.
    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.dim();
        let mut aug: Vec<u64> = (0..n)
            .map(|i| self.rows[i] as u64 | (1u64 << (2 * (n + i))))
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| entry_of(aug[r], col) != 0)
                .ok_or(Error::SingularMatrix)?;
            aug.swap(col, pivot);
            let inv = Gf4::from_code(entry_of(aug[col], col))
                .inverse()
                .expect("pivot is nonzero");
            aug[col] = scale_packed(inv.code(), aug[col]);
            let p = aug[col];
            for (r, row) in aug.iter_mut().enumerate() {
                let c = entry_of(*row, col);
                if r != col && c != 0 {
                    *row ^= scale_packed(c, p);
                }
            }
        }
        let mut out = Matrix::zero(n);
        let mask = if n == 16 {
            u32::MAX
        } else {
            (1u32 << (2 * n)) - 1
        };
        for (row, a) in out.rows.iter_mut().zip(&aug) {
            *row = ((a >> (2 * n)) as u32) & mask;
        }
        Ok(out)
    }

    pub fn det(&self) -> Gf4 {
        let n = self.dim();
        let mut rows: Vec<u64> = (0..n).map(|i| self.rows[i] as u64).collect();
        let mut det = Gf4::ONE;
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| entry_of(rows[r], col) != 0) else {
                return Gf4::ZERO;
            };
            // row swaps do not change the sign in characteristic 2
            rows.swap(col, pivot);
            let pv = Gf4::from_code(entry_of(rows[col], col));
            det = det * pv;
            let inv = pv.inverse().expect("pivot is nonzero");
            let p = scale_packed(inv.code(), rows[col]);
            for row in rows.iter_mut().skip(col + 1) {
                let c = entry_of(*row, col);
                if c != 0 {
                    *row ^= scale_packed(c, p);
                }
            }
        }
        det
    }

    /// `[self, other] = self⁻¹ other⁻¹ self other`.
    pub fn commutator(&self, other: &Matrix) -> Result<Matrix> {
        Ok(self
            .inverse()?
            .matmul(&other.inverse()?)
            .matmul(self)
            .matmul(other))
    }

    // ---- block view -------------------------------------------------------

    /// Number of 2×2 blocks along the diagonal; panics for odd dimension.
    pub fn block_dim(&self) -> usize {
        assert!(
            self.dim.is_multiple_of(2),
            "odd dimension has no 2x2 block view"
        );
        self.dim() / 2
    }

    /// Block `(i, j)`, 0-based.
    pub fn block(&self, i: usize, j: usize) -> Mat2 {
        let _ = self.block_dim();
        Mat2::new(
            self.get(2 * i, 2 * j),
            self.get(2 * i, 2 * j + 1),
            self.get(2 * i + 1, 2 * j),
            self.get(2 * i + 1, 2 * j + 1),
        )
    }

    pub fn set_block(&mut self, i: usize, j: usize, a: &Mat2) {
        for r in 0..2 {
            for c in 0..2 {
                self.set(2 * i + r, 2 * j + c, a.get(r, c));
            }
        }
    }

    pub fn block_identity(n: usize) -> Matrix {
        Matrix::identity(2 * n)
    }

    /// `E_ij(A)`: identity blocks on the diagonal, `A` at block `(i, j)`
    /// (0-based, `i != j`), zero elsewhere.
    pub fn elementary_block(n: usize, i: usize, j: usize, a: &Mat2) -> Matrix {
        assert!(
            i != j && i < n && j < n,
            "invalid block position ({i}, {j})"
        );
        let mut m = Matrix::block_identity(n);
        m.set_block(i, j, a);
        m
    }

    /// `Δ(A)`: `n` copies of `A` along the block diagonal.
    pub fn block_diagonal(n: usize, a: &Mat2) -> Matrix {
        let mut m = Matrix::zero(2 * n);
        for i in 0..n {
            m.set_block(i, i, a);
        }
        m
    }

    /// Block upper unitriangular: identity diagonal blocks, zero below.
    pub fn is_block_unitriangular(&self) -> bool {
        let n = self.block_dim();
        (0..n).all(|i| {
            self.block(i, i) == Mat2::IDENTITY && (0..i).all(|j| self.block(i, j).is_zero())
        })
    }

    // ---- literals ---------------------------------------------------------

    /// Block literal: one 4-digit token per block in row-major block order,
    /// digits 0-3 encoding 0, 1, α, α+1.
    pub fn to_block_literal(&self) -> String {
        let n = self.block_dim();
        let mut tokens = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let codes = self.block(i, j).codes();
                tokens.push(
                    codes
                        .iter()
                        .map(|c| char::from(b'0' + c))
                        .collect::<String>(),
                );
            }
        }
        tokens.join(" ")
    }

    /// Scalar literal: a single token of `dim²` digits, row-major.
    pub fn to_scalar_literal(&self) -> String {
        let mut s = String::with_capacity(self.dim() * self.dim());
        for r in 0..self.dim() {
            for c in 0..self.dim() {
                s.push(char::from(b'0' + self.get(r, c).code()));
            }
        }
        s
    }

    /// The block literal for even dimensions, the scalar literal otherwise.
    pub fn to_literal(&self) -> String {
        if self.dim.is_multiple_of(2) {
            self.to_block_literal()
        } else {
            self.to_scalar_literal()
        }
    }

    /// Parses a literal whose digit count is a perfect square.
    pub fn parse_literal_inferred(text: &str) -> Result<Matrix> {
        let digits = text.chars().filter(|c| c.is_ascii_digit()).count();
        let dim = (1..=MAX_DIM)
            .find(|d| d * d == digits)
            .ok_or_else(|| Error::Parse {
                line: 1,
                column: 1,
                message: format!("{digits} digits do not form a square matrix"),
            })?;
        Matrix::parse_literal(text, dim)
    }

    /// Parses either literal form for a `dim × dim` matrix. Column numbers
    /// in errors are 1-based character offsets into `text`.
    pub fn parse_literal(text: &str, dim: usize) -> Result<Matrix> {
        let err = |column: usize, message: String| Error::Parse {
            line: 1,
            column,
            message,
        };
        if dim == 0 || dim > MAX_DIM {
            return Err(err(1, format!("dimension {dim} outside 1..={MAX_DIM}")));
        }
        let mut digits = Vec::with_capacity(dim * dim);
        let mut tokens = Vec::new();
        let mut token_start = None;
        for (pos, ch) in text.char_indices() {
            if ch.is_whitespace() {
                if let Some(start) = token_start.take() {
                    tokens.push((start, pos));
                }
                continue;
            }
            if token_start.is_none() {
                token_start = Some(pos);
            }
            match ch {
                '0'..='3' => digits.push(ch as u8 - b'0'),
                _ => return Err(err(pos + 1, format!("unexpected character `{ch}`"))),
            }
        }
        if let Some(start) = token_start {
            tokens.push((start, text.len()));
        }
        if digits.len() != dim * dim {
            return Err(err(
                text.len() + 1,
                format!("expected {} digits, found {}", dim * dim, digits.len()),
            ));
        }
        let mut m = Matrix::zero(dim);
        if tokens.len() == 1 {
            for (k, &d) in digits.iter().enumerate() {
                m.set(k / dim, k % dim, Gf4::from_code(d));
            }
            return Ok(m);
        }
        if !dim.is_multiple_of(2) {
            return Err(err(1, "block literal needs an even dimension".into()));
        }
        let n = dim / 2;
        if tokens.len() != n * n {
            return Err(err(
                1,
                format!("expected {} blocks, found {}", n * n, tokens.len()),
            ));
        }
        for &(start, end) in &tokens {
            if end - start != 4 {
                return Err(err(start + 1, "block token must have 4 digits".into()));
            }
        }
        for (b, chunk) in digits.chunks(4).enumerate() {
            let block = Mat2::from_codes([chunk[0], chunk[1], chunk[2], chunk[3]]);
            m.set_block(b / n, b % n, &block);
        }
        Ok(m)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix({})", self.to_literal())
    }
}

impl TryFrom<String> for Matrix {
    type Error = Error;
    fn try_from(text: String) -> Result<Matrix> {
        Matrix::parse_literal_inferred(&text)
    }
}

impl From<Matrix> for String {
    fn from(m: Matrix) -> String {
        m.to_literal()
    }
}

impl GroupElement for Matrix {
    fn degree(&self) -> usize {
        1usize << (2 * self.dim())
    }

    #[inline]
    fn image(&self, point: usize) -> usize {
        self.apply(point as u32) as usize
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.matmul(rhs)
    }

    fn inv(&self) -> Self {
        self.inverse().expect("group elements are invertible")
    }

    fn identity_like(&self) -> Self {
        Matrix::identity(self.dim())
    }

    fn is_identity(&self) -> bool {
        (0..self.dim()).all(|i| self.rows[i] == 1 << (2 * i))
    }

    /// The index of the first standard basis vector not fixed.
    fn first_moved_point(&self) -> Option<usize> {
        (0..self.dim())
            .find(|&i| self.rows[i] != 1 << (2 * i))
            .map(|i| 1usize << (2 * i))
    }
}

impl Matrix {
    /// The permutation of the `4^dim` vectors induced by `v ↦ v·self`.
    pub fn to_permutation(&self) -> Permutation {
        let images = (0..self.degree() as u32).map(|v| self.apply(v)).collect();
        Permutation::from_images(images).expect("invertible matrix acts bijectively")
    }
}

/// Permutation generators for the right-multiplication action of an
/// invertible matrix group on all vectors of GF(4)^dim.
pub fn matrix_to_perm(gens: &[Matrix], dim: usize) -> Result<GroupHandle<Permutation>> {
    if dim == 0 || dim > 10 {
        return Err(Error::InvalidParameter(format!(
            "permutation action of dimension {dim} is not materialized (limit 10)"
        )));
    }
    let mut perms = Vec::with_capacity(gens.len());
    for g in gens {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: g.dim(),
            });
        }
        g.inverse()?;
        perms.push(g.to_permutation());
    }
    Ok(GroupHandle::new(
        Permutation::identity(1 << (2 * dim)),
        perms,
    ))
}

/// Selector for [`block_ops`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockOp {
    Mul,
    Inverse,
    Commutator,
}

/// Product `XY`, inverse `X⁻¹` (ignores `Y`), or commutator `[X, Y]`.
pub fn block_ops(x: &Matrix, y: &Matrix, op: BlockOp) -> Result<Matrix> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    match op {
        BlockOp::Mul => Ok(x.matmul(y)),
        BlockOp::Inverse => x.inverse(),
        BlockOp::Commutator => x.commutator(y),
    }
}

/// Inverse of a 3×3 block unitriangular matrix by the closed form
/// `[[I,B,D],[0,I,C],[0,0,I]]⁻¹ = [[I,-B,BC-D],[0,I,-C],[0,0,I]]`.
pub fn unitriangular3_inverse(y: &Matrix) -> Matrix {
    assert_eq!(y.block_dim(), 3);
    let (b, c, d) = (y.block(0, 1), y.block(1, 2), y.block(0, 2));
    let mut out = Matrix::block_identity(3);
    out.set_block(0, 1, &-b);
    out.set_block(1, 2, &-c);
    out.set_block(0, 2, &(b * c - d));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf4::{enumerate_sl2, enumerate_trace_zero};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, dim: usize) -> Matrix {
        let mut m = Matrix::zero(dim);
        for r in 0..dim {
            for c in 0..dim {
                m.set(r, c, Gf4::from_code(rng.gen_range(0..4)));
            }
        }
        m
    }

    // Schoolbook product over entries, independent of the packed kernels.
    fn naive_mul(a: &Matrix, b: &Matrix) -> Matrix {
        let n = a.dim();
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut s = Gf4::ZERO;
                for k in 0..n {
                    s = s + a.get(i, k) * b.get(k, j);
                }
                out.set(i, j, s);
            }
        }
        out
    }

    #[test]
    fn packed_product_matches_schoolbook() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in [1, 2, 3, 6, 8, 16] {
            for _ in 0..20 {
                let a = random_matrix(&mut rng, dim);
                let b = random_matrix(&mut rng, dim);
                assert_eq!(a.matmul(&b), naive_mul(&a, &b));
            }
        }
    }

    #[test]
    fn inverse_on_random_invertible_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut tested = 0;
        while tested < 1000 {
            let dim = [2, 4, 6, 8][tested % 4];
            let a = random_matrix(&mut rng, dim);
            match a.inverse() {
                Ok(inv) => {
                    assert!(a.matmul(&inv).is_identity());
                    assert!(inv.matmul(&a).is_identity());
                    assert!(!a.det().is_zero());
                    tested += 1;
                }
                Err(e) => {
                    assert_eq!(e, Error::SingularMatrix);
                    assert!(a.det().is_zero());
                }
            }
        }
    }

    #[test]
    fn det_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let a = random_matrix(&mut rng, 4);
            let b = random_matrix(&mut rng, 4);
            assert_eq!(a.matmul(&b).det(), a.det() * b.det());
        }
    }

    #[test]
    fn singular_inverse_is_an_error() {
        let z = Matrix::zero(4);
        assert_eq!(
            block_ops(&z, &z, BlockOp::Inverse),
            Err(Error::SingularMatrix)
        );
        assert!(block_ops(&Matrix::identity(4), &Matrix::identity(6), BlockOp::Mul).is_err());
    }

    #[test]
    fn action_is_vector_times_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_matrix(&mut rng, 3);
        // e_1 · A is the second row of A
        assert_eq!(a.apply(1 << 2), a.row(1));
        let b = random_matrix(&mut rng, 3);
        for v in 0..64u32 {
            assert_eq!(b.apply(a.apply(v)), a.matmul(&b).apply(v));
        }
        assert_eq!(a.apply(0), 0);
    }

    #[test]
    fn self_commutator_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x = loop {
            let x = random_matrix(&mut rng, 6);
            if x.inverse().is_ok() {
                break x;
            }
        };
        assert!(block_ops(&x, &x, BlockOp::Commutator)
            .unwrap()
            .is_identity());
    }

    #[test]
    fn closed_form_unitriangular_inverse() {
        let t = enumerate_trace_zero();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let mut y = Matrix::block_identity(3);
            y.set_block(0, 1, &Mat2::all().nth(rng.gen_range(0..256)).unwrap());
            y.set_block(1, 2, &t[rng.gen_range(0..t.len())]);
            y.set_block(0, 2, &Mat2::all().nth(rng.gen_range(0..256)).unwrap());
            assert_eq!(unitriangular3_inverse(&y), y.inverse().unwrap());
        }
    }

    #[test]
    fn commutator_with_block_diagonal_has_conjugate_differences() {
        // [Y, X] for X = Δ(A), Y = [[I,B,D],[0,I,C],[0,0,I]]
        let t = enumerate_trace_zero();
        let sl2 = enumerate_sl2();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let a = sl2[rng.gen_range(0..60)];
            let (b, c) = (t[rng.gen_range(0..64)], t[rng.gen_range(0..64)]);
            let d = Mat2::all().nth(rng.gen_range(0..256)).unwrap();
            let mut y = Matrix::block_identity(3);
            y.set_block(0, 1, &b);
            y.set_block(1, 2, &c);
            y.set_block(0, 2, &d);
            let x = Matrix::block_diagonal(3, &a);
            let k = block_ops(&y, &x, BlockOp::Commutator).unwrap();
            let ba = b.conj(&a).unwrap();
            let ca = c.conj(&a).unwrap();
            assert_eq!(k.block(0, 1), -b + ba);
            assert_eq!(k.block(1, 2), -c + ca);
            assert_eq!(k.block(0, 2), d.conj(&a).unwrap() - b * ca + b * c - d);
            assert!(k.is_block_unitriangular());
        }
    }

    #[test]
    fn literal_round_trip_and_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for dim in [2, 3, 6] {
            let a = random_matrix(&mut rng, dim);
            assert_eq!(Matrix::parse_literal(&a.to_literal(), dim).unwrap(), a);
            assert_eq!(
                Matrix::parse_literal(&a.to_scalar_literal(), dim).unwrap(),
                a
            );
        }
        let e = Matrix::parse_literal("1000 01x0", 2).unwrap_err();
        assert!(matches!(e, Error::Parse { column: 8, .. }), "{e:?}");
        assert!(Matrix::parse_literal("1000 0100", 4).is_err());
        assert_eq!(
            Matrix::block_identity(2).to_block_literal(),
            "1001 0000 0000 1001"
        );
    }
}
