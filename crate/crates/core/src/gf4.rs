//! Arithmetic in GF(4) = {0, 1, α, α+1} with α² = α + 1, and 2×2 matrices
//! over it.
//!
//! Elements are 2-bit codes `b0 + 2·b1` standing for `b0 + b1·α`, so the
//! codes 0, 1, 2, 3 are 0, 1, α, α+1. Addition is XOR of codes;
//! multiplication goes through a precomputed 4×4 table.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

const MUL_TABLE: [[u8; 4]; 4] = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];

const INV_TABLE: [u8; 4] = [0, 1, 3, 2];

/// An element of GF(4).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gf4(u8);

impl Gf4 {
    pub const ZERO: Gf4 = Gf4(0);
    pub const ONE: Gf4 = Gf4(1);
    /// The primitive element α.
    pub const ALPHA: Gf4 = Gf4(2);
    /// α + 1 = α².
    pub const ALPHA_SQ: Gf4 = Gf4(3);

    pub const ALL: [Gf4; 4] = [Gf4(0), Gf4(1), Gf4(2), Gf4(3)];

    /// Builds an element from its 2-bit code; only the low two bits are used.
    #[inline]
    pub const fn from_code(code: u8) -> Gf4 {
        Gf4(code & 3)
    }

    #[inline]
    pub const fn code(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(self) -> Option<Gf4> {
        if self.0 == 0 {
            None
        } else {
            Some(Gf4(INV_TABLE[self.0 as usize]))
        }
    }

    pub fn pow(self, mut e: u32) -> Gf4 {
        let mut base = self;
        let mut acc = Gf4::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl Add for Gf4 {
    type Output = Gf4;
    /// Characteristic 2: addition is XOR of the codes.
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Gf4) -> Gf4 {
        Gf4(self.0 ^ rhs.0)
    }
}

impl Sub for Gf4 {
    type Output = Gf4;
    #[inline]
    fn sub(self, rhs: Gf4) -> Gf4 {
        self + (-rhs)
    }
}

impl Neg for Gf4 {
    type Output = Gf4;
    // characteristic 2
    #[inline]
    fn neg(self) -> Gf4 {
        self
    }
}

impl Mul for Gf4 {
    type Output = Gf4;
    #[inline]
    fn mul(self, rhs: Gf4) -> Gf4 {
        Gf4(MUL_TABLE[self.0 as usize][rhs.0 as usize])
    }
}

impl fmt::Debug for Gf4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "0",
            1 => "1",
            2 => "a",
            _ => "a+1",
        })
    }
}

impl fmt::Display for Gf4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Binary operation selector for [`field_op`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
}

pub fn field_op(a: Gf4, b: Gf4, op: FieldOp) -> Gf4 {
    match op {
        FieldOp::Add => a + b,
        FieldOp::Mul => a * b,
    }
}

/// A 2×2 matrix over GF(4), stored row-major.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mat2(pub [[Gf4; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[Gf4::ZERO; 2]; 2]);
    pub const IDENTITY: Mat2 = Mat2([[Gf4::ONE, Gf4::ZERO], [Gf4::ZERO, Gf4::ONE]]);

    pub const fn new(a: Gf4, b: Gf4, c: Gf4, d: Gf4) -> Mat2 {
        Mat2([[a, b], [c, d]])
    }

    /// Builds a matrix from four 2-bit codes in row-major order.
    pub const fn from_codes(codes: [u8; 4]) -> Mat2 {
        Mat2([
            [Gf4::from_code(codes[0]), Gf4::from_code(codes[1])],
            [Gf4::from_code(codes[2]), Gf4::from_code(codes[3])],
        ])
    }

    pub fn codes(&self) -> [u8; 4] {
        [
            self.0[0][0].code(),
            self.0[0][1].code(),
            self.0[1][0].code(),
            self.0[1][1].code(),
        ]
    }

    pub fn scalar(a: Gf4) -> Mat2 {
        Mat2::new(a, Gf4::ZERO, Gf4::ZERO, a)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Gf4 {
        self.0[r][c]
    }

    pub fn trace(&self) -> Gf4 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> Gf4 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn is_zero(&self) -> bool {
        *self == Mat2::ZERO
    }

    /// True for matrices of the form `a·I`.
    pub fn is_scalar(&self) -> bool {
        self.0[0][1].is_zero() && self.0[1][0].is_zero() && self.0[0][0] == self.0[1][1]
    }

    pub fn scale(&self, a: Gf4) -> Mat2 {
        Mat2([
            [a * self.0[0][0], a * self.0[0][1]],
            [a * self.0[1][0], a * self.0[1][1]],
        ])
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let inv_det = self.det().inverse()?;
        let [[a, b], [c, d]] = self.0;
        Some(Mat2::new(d, -b, -c, a).scale(inv_det))
    }

    /// `self^a = a⁻¹ · self · a`.
    pub fn conj(&self, a: &Mat2) -> Option<Mat2> {
        Some(a.inverse()? * *self * *a)
    }

    /// Coordinates as a length-4 vector (row-major).
    pub fn to_vector(&self) -> [Gf4; 4] {
        [self.0[0][0], self.0[0][1], self.0[1][0], self.0[1][1]]
    }

    /// All 256 matrices, in code order.
    pub fn all() -> impl Iterator<Item = Mat2> {
        (0u16..256).map(|bits| {
            let b = bits as u8;
            Mat2::from_codes([b >> 6, b >> 4, b >> 2, b])
        })
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let mut out = self;
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] = self.0[r][c] + rhs.0[r][c];
            }
        }
        out
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + (-rhs)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        let mut out = self;
        for row in out.0.iter_mut() {
            for x in row.iter_mut() {
                *x = -*x;
            }
        }
        out
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let mut out = Mat2::ZERO;
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] = self.0[r][0] * rhs.0[0][c] + self.0[r][1] * rhs.0[1][c];
            }
        }
        out
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{:?},{:?}],[{:?},{:?}]]",
            self.0[0][0], self.0[0][1], self.0[1][0], self.0[1][1]
        )
    }
}

/// The trace of a 2×2 matrix.
pub fn mat_trace(m: &Mat2) -> Gf4 {
    m.trace()
}

/// All 64 trace-zero matrices.
pub fn enumerate_trace_zero() -> Vec<Mat2> {
    Mat2::all().filter(|m| m.trace().is_zero()).collect()
}

/// All 60 matrices of determinant 1, i.e. SL(2, 4).
pub fn enumerate_sl2() -> Vec<Mat2> {
    Mat2::all().filter(|m| m.det() == Gf4::ONE).collect()
}

/// Rank of a list of vectors over GF(4), by Gaussian elimination with
/// first-nonzero pivoting.
pub fn rank<V: AsRef<[Gf4]>>(vectors: &[V]) -> usize {
    let mut rows: Vec<Vec<Gf4>> = vectors.iter().map(|v| v.as_ref().to_vec()).collect();
    let width = rows.iter().map(Vec::len).max().unwrap_or(0);
    for r in rows.iter_mut() {
        r.resize(width, Gf4::ZERO);
    }
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].inverse().expect("nonzero pivot");
        for x in rows[rank].iter_mut() {
            *x = *x * inv;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col];
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = *x - factor * *p;
            }
        }
        rank += 1;
    }
    rank
}

/// Dimension of the GF(4)-span of a set of 2×2 matrices viewed as vectors
/// of length 4.
pub fn span_dim(mats: &[Mat2]) -> usize {
    let vectors: Vec<[Gf4; 4]> = mats.iter().map(Mat2::to_vector).collect();
    rank(&vectors)
}

/// The set `{ -B + B^A : B ∈ T, A ∈ SL(2,4) }`.
pub fn conjugation_differences() -> Vec<Mat2> {
    let sl2 = enumerate_sl2();
    let mut out = Vec::with_capacity(64 * 60);
    for b in enumerate_trace_zero() {
        for a in &sl2 {
            out.push(-b + b.conj(a).expect("SL(2,4) element is invertible"));
        }
    }
    out
}

/// The set `{ BC : B, C ∈ T }`.
pub fn trace_zero_products() -> Vec<Mat2> {
    let t = enumerate_trace_zero();
    let mut out = Vec::with_capacity(t.len() * t.len());
    for b in &t {
        for c in &t {
            out.push(*b * *c);
        }
    }
    out
}

/// The basis {I, E₁₂, E₂₁} of the trace-zero matrices.
pub fn trace_zero_basis() -> [Mat2; 3] {
    [
        Mat2::IDENTITY,
        Mat2::from_codes([0, 1, 0, 0]),
        Mat2::from_codes([0, 0, 1, 0]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    // Polynomial arithmetic in GF(2)[x]/(x² + x + 1), independent of the tables.
    fn poly_mul(a: u8, b: u8) -> u8 {
        let mut prod = 0u8;
        for i in 0..2 {
            if b >> i & 1 == 1 {
                prod ^= a << i;
            }
        }
        if prod & 4 != 0 {
            prod ^= 0b111;
        }
        prod
    }

    #[test]
    fn mul_table_matches_polynomial_arithmetic() {
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(MUL_TABLE[a as usize][b as usize], poly_mul(a, b), "{a}*{b}");
            }
        }
    }

    #[test]
    fn alpha_relations() {
        assert_eq!(Gf4::ALPHA * Gf4::ALPHA, Gf4::ALPHA + Gf4::ONE);
        assert_eq!(Gf4::ALPHA * Gf4::ALPHA_SQ, Gf4::ONE);
        assert_eq!(Gf4::ALPHA.pow(3), Gf4::ONE);
        for x in Gf4::ALL {
            assert_eq!(x + x, Gf4::ZERO);
            assert_eq!(field_op(x, x, FieldOp::Add), Gf4::ZERO);
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for a in Gf4::ALL {
            if let Some(inv) = a.inverse() {
                assert_eq!(a * inv, Gf4::ONE);
            }
            assert_eq!(a + (-a), Gf4::ZERO);
            for b in Gf4::ALL {
                assert_eq!(a + b, b + a);
                assert_eq!(a * b, b * a);
                for c in Gf4::ALL {
                    assert_eq!((a + b) + c, a + (b + c));
                    assert_eq!((a * b) * c, a * (b * c));
                    assert_eq!(a * (b + c), a * b + a * c);
                }
            }
        }
    }

    #[test]
    fn nonzero_elements_cyclic_of_order_three() {
        let powers: Vec<Gf4> = (0..3).map(|e| Gf4::ALPHA.pow(e)).collect();
        let mut sorted = powers.clone();
        sorted.sort();
        assert_eq!(sorted, vec![Gf4::ONE, Gf4::ALPHA, Gf4::ALPHA_SQ]);
    }

    #[test]
    fn trace_examples() {
        assert_eq!(mat_trace(&Mat2::IDENTITY), Gf4::ZERO);
        assert_eq!(mat_trace(&Mat2::from_codes([0, 1, 0, 0])), Gf4::ZERO);
    }

    #[test]
    fn enumerations() {
        let t = enumerate_trace_zero();
        assert_eq!(t.len(), 64);
        assert!(t.contains(&Mat2::ZERO));
        let s = enumerate_sl2();
        assert_eq!(s.len(), 60);
        assert!(s.contains(&Mat2::IDENTITY));
        assert!(s.iter().all(|m| m.det() == Gf4::ONE));
        let mut dedup = t.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 64);
    }

    #[test]
    fn conjugation_preserves_trace_and_t() {
        let t = enumerate_trace_zero();
        for b in &t {
            for a in enumerate_sl2() {
                let c = b.conj(&a).unwrap();
                assert_eq!(c.trace(), b.trace());
                assert!(t.contains(&c));
            }
        }
    }

    #[test]
    fn det_multiplicative_trace_additive() {
        for a in Mat2::all() {
            for b in Mat2::all().step_by(7) {
                assert_eq!((a * b).det(), a.det() * b.det());
                assert_eq!((a + b).trace(), a.trace() + b.trace());
            }
        }
    }

    #[test]
    fn spans() {
        let diffs = conjugation_differences();
        assert_eq!(diffs.len(), 64 * 60);
        assert!(diffs.iter().all(|m| m.trace().is_zero()));
        assert_eq!(span_dim(&diffs), 3);
        assert_eq!(span_dim(&trace_zero_products()), 4);
        assert_eq!(span_dim(&[]), 0);
        assert_eq!(span_dim(&trace_zero_basis()), 3);
    }

    #[test]
    fn rank_of_dependent_rows() {
        let v = [Gf4::ONE, Gf4::ALPHA, Gf4::ZERO];
        let w = [Gf4::ALPHA, Gf4::ALPHA_SQ, Gf4::ZERO];
        assert_eq!(rank(&[v, w]), 1);
        assert_eq!(rank(&[v, [Gf4::ZERO, Gf4::ZERO, Gf4::ONE]]), 2);
    }

    #[test]
    fn inverse_round_trip() {
        for a in Mat2::all() {
            match a.inverse() {
                Some(inv) => assert_eq!(a * inv, Mat2::IDENTITY),
                None => assert!(a.det().is_zero()),
            }
        }
    }
}
