//! Integer linear algebra: primitive vectors, Hermite and Smith normal
//! forms, saturated lattice bases, unimodular completions and kernels.
//!
//! All arithmetic is done with [`BigInt`]. Matrices act on column vectors,
//! so a lattice basis is the list of columns of an `n x k` matrix.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Rat};

/// An integer vector of fixed length.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(Vec<BigInt>);

impl IntVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntVector(entries)
    }

    pub fn from_i64s(entries: &[i64]) -> Self {
        IntVector(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        IntVector(vec![BigInt::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = BigInt::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &IntVector) -> BigInt {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn dot_rat(&self, x: &[Rat]) -> Rat {
        self.0
            .iter()
            .zip(x)
            .fold(Rat::zero(), |acc, (a, b)| acc + b * a)
    }

    /// gcd of the entries; zero for the zero vector.
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
    }

    pub fn scale(&self, k: &BigInt) -> IntVector {
        IntVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn to_rat(&self) -> Vec<Rat> {
        linalg::int_to_rat(&self.0)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.0.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn sum_entries(&self) -> BigInt {
        self.0.iter().sum()
    }
}

impl Index<usize> for IntVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl std::ops::Add for &IntVector {
    type Output = IntVector;
    fn add(self, rhs: &IntVector) -> IntVector {
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl std::ops::Sub for &IntVector {
    type Output = IntVector;
    fn sub(self, rhs: &IntVector) -> IntVector {
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl std::ops::Neg for &IntVector {
    type Output = IntVector;
    fn neg(self) -> IntVector {
        IntVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Dense integer matrix, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            data.extend(row);
        }
        IntMatrix { rows: r, cols, data }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
            cols,
        )
    }

    /// Matrix whose columns are `columns`; `rows` fixes the shape when empty.
    pub fn from_columns(columns: &[IntVector], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for i in 0..rows {
                m[(i, j)] = c[i].clone();
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

    pub fn column(&self, j: usize) -> IntVector {
        IntVector((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn row(&self, i: usize) -> IntVector {
        IntVector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn columns(&self) -> Vec<IntVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &IntVector) -> IntVector {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        IntVector((0..self.rows).map(|i| self.row(i).dot(v)).collect())
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * &m[(n - 1, n - 1)]
    }

    /// Minor on the given row indices and the first `rows_idx.len()` columns.
    pub fn minor(&self, rows_idx: &[usize], cols_idx: &[usize]) -> BigInt {
        assert_eq!(rows_idx.len(), cols_idx.len());
        let sub: Vec<Vec<BigInt>> = rows_idx
            .iter()
            .map(|&i| cols_idx.iter().map(|&j| self[(i, j)].clone()).collect())
            .collect();
        IntMatrix::from_rows(sub, cols_idx.len()).det()
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<Rat>> = (0..self.rows).map(|i| self.row(i).to_rat()).collect();
        linalg::rank(&rows)
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }

    /// Inverse of a unimodular matrix; `None` if the matrix is not unimodular.
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        if !self.is_unimodular() {
            return None;
        }
        let n = self.rows;
        let rows: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_rat();
                r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
                r
            })
            .collect();
        let (r, _) = linalg::rref(rows);
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let x = &r[i][n + j];
                debug_assert!(x.is_integer());
                inv[(i, j)] = x.to_integer();
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// col_j <- col_j - q * col_k
    fn col_axpy(&mut self, j: usize, q: &BigInt, k: usize) {
        for i in 0..self.rows {
            let t = q * &self[(i, k)];
            self[(i, j)] -= t;
        }
    }

    /// row_i <- row_i - q * row_k
    fn row_axpy(&mut self, i: usize, q: &BigInt, k: usize) {
        for j in 0..self.cols {
            let t = q * &self[(k, j)];
            self[(i, j)] -= t;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    /// Applies the unimodular 2x2 column transform
    /// `(col_a, col_b) <- (s col_a + t col_b, x col_a + y col_b)`.
    fn col_combine(&mut self, a: usize, b: usize, s: &BigInt, t: &BigInt, x: &BigInt, y: &BigInt) {
        for i in 0..self.rows {
            let ca = self[(i, a)].clone();
            let cb = self[(i, b)].clone();
            self[(i, a)] = s * &ca + t * &cb;
            self[(i, b)] = x * &ca + y * &cb;
        }
    }

    fn row_combine(&mut self, a: usize, b: usize, s: &BigInt, t: &BigInt, x: &BigInt, y: &BigInt) {
        for j in 0..self.cols {
            let ra = self[(a, j)].clone();
            let rb = self[(b, j)].clone();
            self[(a, j)] = s * &ra + t * &rb;
            self[(b, j)] = x * &ra + y * &rb;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).0.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// A basis of a saturated sublattice `H ∩ Z^n`, stored as column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeBasis {
    ambient: usize,
    vectors: Vec<IntVector>,
}

impl LatticeBasis {
    /// Wraps vectors without checking saturation; see [`LatticeBasis::is_saturated`].
    pub fn new(ambient: usize, vectors: Vec<IntVector>) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch { expected: ambient, found: v.len() });
        }
        Ok(LatticeBasis { ambient, vectors })
    }

    pub fn empty(ambient: usize) -> Self {
        LatticeBasis { ambient, vectors: Vec::new() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn vectors(&self) -> &[IntVector] {
        &self.vectors
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(&self.vectors, self.ambient)
    }

    /// Linearly independent and every Smith invariant factor equal to 1.
    pub fn is_saturated(&self) -> bool {
        if self.vectors.is_empty() {
            return true;
        }
        let (s, _, _) = smith_normal_form(&self.matrix());
        (0..self.vectors.len()).all(|i| s[(i, i)].is_one())
    }
}

/// `v / gcd(v)`.
pub fn primitive(v: &IntVector) -> Result<IntVector> {
    let g = v.content();
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(IntVector(v.0.iter().map(|x| x / &g).collect()))
}

/// Column Hermite normal form: returns `(H, U)` with `M U = H`, `U` unimodular.
///
/// `H` is in column echelon form: pivot rows strictly increase with the
/// column index, pivots are positive, and in each pivot row the entries of
/// the earlier columns lie in `[0, pivot)`. Zero columns come last.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.cols);
    let mut pc = 0;
    for i in 0..m.rows {
        if pc == m.cols {
            break;
        }
        for j in pc + 1..m.cols {
            if h[(i, j)].is_zero() {
                continue;
            }
            let a = h[(i, pc)].clone();
            let b = h[(i, j)].clone();
            let e = a.extended_gcd(&b);
            let (g, s, t) = (e.gcd, e.x, e.y);
            let x = -(&b / &g);
            let y = &a / &g;
            h.col_combine(pc, j, &s, &t, &x, &y);
            u.col_combine(pc, j, &s, &t, &x, &y);
        }
        if h[(i, pc)].is_zero() {
            continue;
        }
        if h[(i, pc)].is_negative() {
            h.negate_col(pc);
            u.negate_col(pc);
        }
        let pivot = h[(i, pc)].clone();
        for k in 0..pc {
            let q = h[(i, k)].div_floor(&pivot);
            if !q.is_zero() {
                h.col_axpy(k, &q, pc);
                u.col_axpy(k, &q, pc);
            }
        }
        pc += 1;
    }
    (h, u)
}

/// Smith normal form: returns `(S, U, V)` with `U M V = S` diagonal,
/// nonnegative, and each diagonal entry dividing the next.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (r, c) = (m.rows, m.cols);
    let mut s = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    for t in 0..r.min(c) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if s[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish_snf(s, u, v);
            };
            s.swap_rows(t, bi);
            u.swap_rows(t, bi);
            s.swap_cols(t, bj);
            v.swap_cols(t, bj);

            let mut clean = true;
            for i in t + 1..r {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let a = s[(t, t)].clone();
                let b = s[(i, t)].clone();
                if b.is_multiple_of(&a) {
                    let q = &b / &a;
                    s.row_axpy(i, &q, t);
                    u.row_axpy(i, &q, t);
                } else {
                    let e = a.extended_gcd(&b);
                    let (g, x, y) = (e.gcd, e.x, e.y);
                    let p = -(&b / &g);
                    let q = &a / &g;
                    s.row_combine(t, i, &x, &y, &p, &q);
                    u.row_combine(t, i, &x, &y, &p, &q);
                    clean = false;
                }
            }
            for j in t + 1..c {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let a = s[(t, t)].clone();
                let b = s[(t, j)].clone();
                if b.is_multiple_of(&a) {
                    let q = &b / &a;
                    s.col_axpy(j, &q, t);
                    v.col_axpy(j, &q, t);
                } else {
                    let e = a.extended_gcd(&b);
                    let (g, x, y) = (e.gcd, e.x, e.y);
                    let p = -(&b / &g);
                    let q = &a / &g;
                    s.col_combine(t, j, &x, &y, &p, &q);
                    v.col_combine(t, j, &x, &y, &p, &q);
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let pivot = s[(t, t)].clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !s[(i, j)].is_multiple_of(&pivot)));
            match bad {
                Some(i) => {
                    // row_t <- row_t + row_i, then re-run the elimination
                    let minus_one = -BigInt::one();
                    s.row_axpy(t, &minus_one, i);
                    u.row_axpy(t, &minus_one, i);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    finish_snf(s, u, v)
}

fn finish_snf(mut s: IntMatrix, mut u: IntMatrix, v: IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    for t in 0..s.rows.min(s.cols) {
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    (s, u, v)
}

/// Basis of `{xi in Z^n : B^t xi = 0}` where `b` is `n x k`.
///
/// The basis is returned in column Hermite normal form, so the first nonzero
/// entry of every vector is positive.
pub fn kernel_lattice(b: &IntMatrix) -> LatticeBasis {
    let n = b.rows;
    let bt = b.transpose();
    let (h, u) = hermite_normal_form(&bt);
    let r = (0..h.cols).take_while(|&j| !h.column(j).is_zero()).count();
    let ker: Vec<IntVector> = (r..n).map(|j| u.column(j)).collect();
    LatticeBasis { ambient: n, vectors: canonical_basis(&ker, n) }
}

/// Basis of `span_R(dirs) ∩ Z^n`.
pub fn saturate(dirs: &[IntVector], n: usize) -> LatticeBasis {
    let m = IntMatrix::from_columns(dirs, n);
    let perp = kernel_lattice(&m);
    kernel_lattice(&perp.matrix())
}

fn canonical_basis(vectors: &[IntVector], n: usize) -> Vec<IntVector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let (h, _) = hermite_normal_form(&IntMatrix::from_columns(vectors, n));
    h.columns().into_iter().filter(|c| !c.is_zero()).collect()
}

/// Extends a saturated basis to a unimodular `n x n` matrix whose first
/// columns are the basis vectors, in order.
pub fn complete_to_unimodular(basis: &LatticeBasis) -> Result<IntMatrix> {
    let n = basis.ambient;
    let k = basis.rank();
    if k == 0 {
        return Ok(IntMatrix::identity(n));
    }
    let b = basis.matrix();
    let (h, u) = hermite_normal_form(&b.transpose());
    // B^t U = [T | 0] with T lower triangular; saturation <=> |det T| = 1
    let pivots_ok = (0..k).all(|j| j < h.cols && h[(j, j)].is_one());
    if !pivots_ok || (k..h.cols).any(|j| !h.column(j).is_zero()) {
        return Err(Error::NotSaturated);
    }
    let u_inv_t = u.inverse_unimodular().ok_or(Error::NotSaturated)?.transpose();
    let mut cols = basis.vectors.clone();
    cols.extend((k..n).map(|j| u_inv_t.column(j)));
    let d = IntMatrix::from_columns(&cols, n);
    debug_assert!(d.is_unimodular());
    Ok(d)
}
