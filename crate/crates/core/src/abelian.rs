//! Finitely generated abelian groups, integer matrices and Smith normal form.
//!
//! Everything here is generic over an exact integer type `T` ([`Scalar`]);
//! arithmetic is overflow-checked so fixed-width scalars fail loudly rather
//! than wrap. `BigInt` never overflows.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact integer scalar.
pub trait Scalar:
    Integer
    + Signed
    + Clone
    + fmt::Debug
    + fmt::Display
    + std::hash::Hash
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
}

impl<T> Scalar for T where
    T: Integer
        + Signed
        + Clone
        + fmt::Debug
        + fmt::Display
        + std::hash::Hash
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbelianError {
    #[error("integer overflow")]
    Overflow,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("vector {0} is not an element of the subgroup")]
    NotASubgroupElement(String),
    #[error("not a chain complex: g(f(e{witness})) != 0")]
    NotAComplex { witness: usize },
    #[error("matrix does not define a homomorphism: torsion relation of generator {0} is not respected")]
    NotAHomomorphism(usize),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
}

pub type Result<T, E = AbelianError> = std::result::Result<T, E>;

#[inline]
pub(crate) fn add<T: Scalar>(a: &T, b: &T) -> Result<T> {
    a.checked_add(b).ok_or(AbelianError::Overflow)
}

#[inline]
pub(crate) fn mul<T: Scalar>(a: &T, b: &T) -> Result<T> {
    a.checked_mul(b).ok_or(AbelianError::Overflow)
}

pub(crate) fn from_i64<T: Scalar>(x: i64) -> T {
    T::from_i64(x).expect("i64 fits every scalar")
}

/// `sum a_i b_i`, checked.
pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> Result<T> {
    a.iter().zip(b).try_fold(T::zero(), |acc, (x, y)| add(&acc, &mul(x, y)?))
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.cols.max(1)).take(self.rows).collect();
        write!(f, "{rows:?}")
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(AbelianError::Shape("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(AbelianError::Shape(format!("column {j} has length {}", col.len())));
            }
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| from_i64(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix<T>) -> Result<Matrix<T>> {
        if self.cols != other.rows {
            return Err(AbelianError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = mul(a, &other[(k, j)])?;
                    out[(i, j)] = add(&out[(i, j)], &prod)?;
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(AbelianError::Shape(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &Matrix<T>) -> Result<Matrix<T>> {
        if self.rows != other.rows {
            return Err(AbelianError::Shape("hstack row mismatch".into()));
        }
        let mut cols: Vec<Vec<T>> = (0..self.cols).map(|j| self.column(j)).collect();
        cols.extend((0..other.cols).map(|j| other.column(j)));
        Matrix::from_columns(self.rows, &cols)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &T) -> Result<()> {
        for j in 0..self.cols {
            let v = add(&self[(dst, j)], &mul(c, &self[(src, j)])?)?;
            self[(dst, j)] = v;
        }
        Ok(())
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &T) -> Result<()> {
        for i in 0..self.rows {
            let v = add(&self[(i, dst)], &mul(c, &self[(i, src)])?)?;
            self[(i, dst)] = v;
        }
        Ok(())
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            self[(r, j)] = -self[(r, j)].clone();
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            self[(i, c)] = -self[(i, c)].clone();
        }
    }

    /// Exact inverse of a unimodular square matrix.
    pub fn unimodular_inverse(&self) -> Option<Matrix<T>> {
        if self.rows != self.cols {
            return None;
        }
        let snf = smith_normal_form(self).ok()?;
        let n = self.rows;
        if (0..n).any(|i| !snf.d[(i, i)].is_one()) {
            return None;
        }
        // U A V = I  =>  A^-1 = V U
        snf.v.mul(&snf.u).ok()
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// `U A V = D` with `U`, `V` unimodular and `D` diagonal, `d1 | d2 | ...`, `d_i >= 0`.
/// The inverses of `U` and `V` are tracked alongside.
#[derive(Clone, Debug)]
pub struct Snf<T> {
    pub u: Matrix<T>,
    pub u_inv: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
    pub v_inv: Matrix<T>,
}

impl<T: Scalar> Snf<T> {
    /// Diagonal entries, `min(rows, cols)` of them.
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

struct SnfState<T> {
    a: Matrix<T>,
    u: Matrix<T>,
    u_inv: Matrix<T>,
    v: Matrix<T>,
    v_inv: Matrix<T>,
}

impl<T: Scalar> SnfState<T> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// row[dst] += c row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &T) -> Result<()> {
        self.a.add_row(dst, src, c)?;
        self.u.add_row(dst, src, c)?;
        self.u_inv.add_col(src, dst, &-c.clone())
    }

    /// col[dst] += c col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &T) -> Result<()> {
        self.a.add_col(dst, src, c)?;
        self.v.add_col(dst, src, c)?;
        self.v_inv.add_row(src, dst, &-c.clone())
    }

    fn negate_row(&mut self, r: usize) {
        self.a.negate_row(r);
        self.u.negate_row(r);
        self.u_inv.negate_col(r);
    }

    /// Smallest nonzero |entry| in the trailing block, ties by row-major position.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(T, usize, usize)> = None;
        for i in t..self.a.rows {
            for j in t..self.a.cols {
                let x = self.a[(i, j)].abs();
                if x.is_zero() {
                    continue;
                }
                if best.as_ref().is_none_or(|(b, _, _)| x < *b) {
                    best = Some((x, i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }
}

/// `q` with `x - q p` in `[-p/2, p/2)`, for `p > 0`.
fn nearest_quotient<T: Scalar>(x: &T, p: &T) -> T {
    let half = p.div_floor(&(T::one() + T::one()));
    (x.clone() + half).div_floor(p)
}

/// Smith normal form with smallest-absolute-value pivoting.
pub fn smith_normal_form<T: Scalar>(a: &Matrix<T>) -> Result<Snf<T>> {
    let (r, c) = (a.rows, a.cols);
    let mut s = SnfState {
        a: a.clone(),
        u: Matrix::identity(r),
        u_inv: Matrix::identity(r),
        v: Matrix::identity(c),
        v_inv: Matrix::identity(c),
    };
    for t in 0..r.min(c) {
        let Some((pi, pj)) = s.pivot(t) else { break };
        s.swap_rows(t, pi);
        s.swap_cols(t, pj);
        loop {
            if s.a[(t, t)].is_negative() {
                s.negate_row(t);
            }
            let p = s.a[(t, t)].clone();
            let mut dirty = false;
            for i in (t + 1)..r {
                let x = s.a[(i, t)].clone();
                if !x.is_zero() {
                    let q = nearest_quotient(&x, &p);
                    s.add_row(i, t, &-q)?;
                    dirty |= !s.a[(i, t)].is_zero();
                }
            }
            for j in (t + 1)..c {
                let x = s.a[(t, j)].clone();
                if !x.is_zero() {
                    let q = nearest_quotient(&x, &p);
                    s.add_col(j, t, &-q)?;
                    dirty |= !s.a[(t, j)].is_zero();
                }
            }
            if dirty {
                // a remainder smaller than the pivot survived; bring the smallest one in
                let mut best: Option<(T, bool, usize)> = None;
                for i in (t + 1)..r {
                    let x = s.a[(i, t)].abs();
                    if !x.is_zero() && best.as_ref().is_none_or(|(b, _, _)| x < *b) {
                        best = Some((x, true, i));
                    }
                }
                for j in (t + 1)..c {
                    let x = s.a[(t, j)].abs();
                    if !x.is_zero() && best.as_ref().is_none_or(|(b, _, _)| x < *b) {
                        best = Some((x, false, j));
                    }
                }
                let (_, is_row, k) = best.expect("dirty implies a nonzero remainder");
                if is_row {
                    s.swap_rows(t, k);
                } else {
                    s.swap_cols(t, k);
                }
                continue;
            }
            // row and column are clear; enforce divisibility of the trailing block
            let bad = (t + 1..r).find_map(|i| {
                (t + 1..c).find(|&j| !s.a[(i, j)].is_multiple_of(&p)).map(|_| i)
            });
            match bad {
                Some(i) => s.add_row(t, i, &T::one())?,
                None => break,
            }
        }
    }
    Ok(Snf { u: s.u, u_inv: s.u_inv, d: s.a, v: s.v, v_inv: s.v_inv })
}

/// Basis (as columns) of the integer kernel `{x : A x = 0}`.
pub fn kernel_lattice<T: Scalar>(a: &Matrix<T>) -> Result<Vec<Vec<T>>> {
    let snf = smith_normal_form(a)?;
    let rank = snf.rank();
    Ok((rank..a.cols).map(|j| snf.v.column(j)).collect())
}

/// A finitely generated abelian group `Z^rank ⊕ Z/d1 ⊕ ... ⊕ Z/dk`.
///
/// Elements are vectors of length `rank + torsion.len()`: free coordinates
/// first, then torsion coordinates reduced into `0..d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct FgAbelian<T> {
    pub rank: usize,
    /// Invariant factors; direct sums built by [`FgAbelian::direct_sum`] may
    /// carry an arbitrary list of moduli here.
    pub torsion: Vec<T>,
}

impl<T: Scalar> FgAbelian<T> {
    pub fn new(rank: usize, torsion: Vec<T>) -> Result<Self> {
        for (i, d) in torsion.iter().enumerate() {
            if *d < from_i64(2) {
                return Err(AbelianError::InvalidGroup(format!("torsion factor {d} is below 2")));
            }
            if i + 1 < torsion.len() && !torsion[i + 1].is_multiple_of(d) {
                return Err(AbelianError::InvalidGroup(format!(
                    "{} does not divide {}",
                    d,
                    torsion[i + 1]
                )));
            }
        }
        Ok(FgAbelian { rank, torsion })
    }

    pub fn free(rank: usize) -> Self {
        FgAbelian { rank, torsion: Vec::new() }
    }

    pub fn cyclic(d: T) -> Result<Self> {
        if d.is_zero() {
            Ok(Self::free(1))
        } else if d.is_one() {
            Ok(Self::free(0))
        } else {
            Self::new(0, vec![d])
        }
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn ngens(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.ngens() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn order(&self) -> Option<T> {
        if self.rank > 0 {
            return None;
        }
        self.torsion.iter().try_fold(T::one(), |acc, d| acc.checked_mul(d))
    }

    /// Modulus of coordinate `i` (zero for free coordinates).
    pub fn modulus(&self, i: usize) -> T {
        if i < self.rank {
            T::zero()
        } else {
            self.torsion[i - self.rank].clone()
        }
    }

    pub fn zero(&self) -> Vec<T> {
        vec![T::zero(); self.ngens()]
    }

    pub fn basis(&self, i: usize) -> Vec<T> {
        let mut v = self.zero();
        v[i] = T::one();
        v
    }

    pub fn reduce(&self, v: &[T]) -> Vec<T> {
        v.iter()
            .enumerate()
            .map(|(i, x)| {
                let m = self.modulus(i);
                if m.is_zero() {
                    x.clone()
                } else {
                    x.mod_floor(&m)
                }
            })
            .collect()
    }

    /// Reduces row `i` of `m` modulo the modulus of coordinate `i`.
    pub fn reduce_rows(&self, m: &Matrix<T>) -> Matrix<T> {
        let mut out = m.clone();
        for i in self.rank..self.ngens().min(m.rows) {
            let d = self.modulus(i);
            for j in 0..m.cols {
                out[(i, j)] = m[(i, j)].mod_floor(&d);
            }
        }
        out
    }

    pub fn is_zero_elem(&self, v: &[T]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn is_reduced(&self, v: &[T]) -> bool {
        v.len() == self.ngens() && self.reduce(v) == v
    }

    pub fn add(&self, a: &[T], b: &[T]) -> Result<Vec<T>> {
        let s: Vec<T> = a.iter().zip(b).map(|(x, y)| add(x, y)).collect::<Result<_>>()?;
        Ok(self.reduce(&s))
    }

    pub fn neg(&self, a: &[T]) -> Vec<T> {
        let s: Vec<T> = a.iter().map(|x| -x.clone()).collect();
        self.reduce(&s)
    }

    pub fn sub(&self, a: &[T], b: &[T]) -> Result<Vec<T>> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, k: &T, a: &[T]) -> Result<Vec<T>> {
        let s: Vec<T> = a.iter().map(|x| mul(k, x)).collect::<Result<_>>()?;
        Ok(self.reduce(&s))
    }

    /// Relation lattice generators `d_i e_i`, as columns.
    pub fn relations(&self) -> Vec<Vec<T>> {
        (self.rank..self.ngens())
            .map(|i| {
                let mut v = self.zero();
                v[i] = self.modulus(i);
                v
            })
            .collect()
    }

    /// Every element, for finite groups.
    pub fn elements(&self) -> Option<Vec<Vec<T>>> {
        if self.rank > 0 {
            return None;
        }
        let mut out = vec![Vec::new()];
        for d in &self.torsion {
            let d = d.to_i64()?;
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..d).map(move |k| {
                        let mut w = v.clone();
                        w.push(from_i64(k));
                        w
                    })
                })
                .collect();
        }
        Some(out)
    }

    /// The canonical invariant list: torsion factors followed by `rank` zeros.
    pub fn invariants(&self) -> Vec<T> {
        let mut v = self.torsion.clone();
        v.extend(std::iter::repeat_n(T::zero(), self.rank));
        v
    }

    /// `self ⊕ other` with coordinates `[self free, other free, self torsion,
    /// other torsion]`. The torsion list need not be a divisor chain.
    pub fn direct_sum(&self, other: &FgAbelian<T>) -> DirectSum<T> {
        let (ra, rb) = (self.rank, other.rank);
        let (ta, tb) = (self.torsion.len(), other.torsion.len());
        let n = self.ngens() + other.ngens();
        let mut torsion = self.torsion.clone();
        torsion.extend(other.torsion.iter().cloned());
        let group = FgAbelian { rank: ra + rb, torsion };
        let pos_a: Vec<usize> = (0..ra).chain((0..ta).map(|i| ra + rb + i)).collect();
        let pos_b: Vec<usize> = (0..rb).map(|i| ra + i).chain((0..tb).map(|i| ra + rb + ta + i)).collect();
        let inj = |pos: &[usize]| {
            let mut m = Matrix::zeros(n, pos.len());
            for (j, &i) in pos.iter().enumerate() {
                m[(i, j)] = T::one();
            }
            m
        };
        let inj_a = inj(&pos_a);
        let inj_b = inj(&pos_b);
        DirectSum { proj_a: inj_a.transpose(), proj_b: inj_b.transpose(), inj_a, inj_b, group }
    }
}

/// A direct sum with its injections and projections.
#[derive(Clone, Debug)]
pub struct DirectSum<T> {
    pub group: FgAbelian<T>,
    pub inj_a: Matrix<T>,
    pub inj_b: Matrix<T>,
    pub proj_a: Matrix<T>,
    pub proj_b: Matrix<T>,
}

impl<T: Scalar> DirectSum<T> {
    pub fn pair(&self, a: &[T], b: &[T]) -> Result<Vec<T>> {
        let x = self.inj_a.apply(a)?;
        let y = self.inj_b.apply(b)?;
        x.iter().zip(&y).map(|(p, q)| add(p, q)).collect()
    }

    pub fn split(&self, v: &[T]) -> Result<(Vec<T>, Vec<T>)> {
        Ok((self.proj_a.apply(v)?, self.proj_b.apply(v)?))
    }
}

impl<T: Scalar> fmt::Display for FgAbelian<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.rank == 1 {
            parts.push("Z".into());
        } else if self.rank > 1 {
            parts.push(format!("Z^{}", self.rank));
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Invariant-factor form of `⊕ Z/orders[i]` (0 means `Z`), with the matrix sending
/// the summand coordinates to canonical coordinates.
pub fn canonical_from_orders<T: Scalar>(orders: &[T]) -> Result<(FgAbelian<T>, Matrix<T>)> {
    let n = orders.len();
    let gens: Vec<Vec<T>> = (0..n)
        .map(|i| {
            let mut v = vec![T::zero(); n];
            v[i] = T::one();
            v
        })
        .collect();
    let rels: Vec<Vec<T>> = (0..n)
        .filter(|&i| !orders[i].is_zero())
        .map(|i| {
            let mut v = vec![T::zero(); n];
            v[i] = orders[i].clone();
            v
        })
        .collect();
    let sq = Subquotient::new(n, &gens, &rels)?;
    let cols: Vec<Vec<T>> = gens.iter().map(|g| sq.coordinates(g)).collect::<Result<_>>()?;
    let m = Matrix::from_columns(sq.group.ngens(), &cols)?;
    Ok((sq.group, m))
}

/// A homomorphism of finitely generated abelian groups; column `j` of `matrix`
/// is the image of source generator `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianHom<T> {
    pub source: FgAbelian<T>,
    pub target: FgAbelian<T>,
    pub matrix: Matrix<T>,
}

impl<T: Scalar> AbelianHom<T> {
    pub fn new(source: FgAbelian<T>, target: FgAbelian<T>, matrix: Matrix<T>) -> Result<Self> {
        if matrix.rows != target.ngens() || matrix.cols != source.ngens() {
            return Err(AbelianError::Shape(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows,
                matrix.cols,
                target.ngens(),
                source.ngens()
            )));
        }
        for j in source.rank..source.ngens() {
            let col = matrix.column(j);
            let img = target.scale(&source.modulus(j), &col)?;
            if !target.is_zero_elem(&img) {
                return Err(AbelianError::NotAHomomorphism(j));
            }
        }
        Ok(AbelianHom { source, target, matrix })
    }

    pub fn zero(source: &FgAbelian<T>, target: &FgAbelian<T>) -> Self {
        AbelianHom {
            source: source.clone(),
            target: target.clone(),
            matrix: Matrix::zeros(target.ngens(), source.ngens()),
        }
    }

    pub fn identity(g: &FgAbelian<T>) -> Self {
        AbelianHom { source: g.clone(), target: g.clone(), matrix: Matrix::identity(g.ngens()) }
    }

    pub fn apply(&self, v: &[T]) -> Result<Vec<T>> {
        Ok(self.target.reduce(&self.matrix.apply(v)?))
    }

    /// `other ∘ self`
    pub fn then(&self, other: &AbelianHom<T>) -> Result<AbelianHom<T>> {
        if self.target != other.source {
            return Err(AbelianError::Shape("composition of mismatched homomorphisms".into()));
        }
        Ok(AbelianHom {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: other.matrix.mul(&self.matrix)?,
        })
    }

    pub fn is_zero(&self) -> Result<bool> {
        for j in 0..self.source.ngens() {
            if !self.target.is_zero_elem(&self.matrix.column(j)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Some `x` with `f(x) = y`, or `None` when `y` is not in the image.
    pub fn preimage(&self, y: &[T]) -> Result<Option<Vec<T>>> {
        let n = self.source.ngens();
        let rels = self.target.relations();
        let big = if rels.is_empty() {
            self.matrix.clone()
        } else {
            self.matrix.hstack(&Matrix::from_columns(self.target.ngens(), &rels)?)?
        };
        let snf = smith_normal_form(&big)?;
        let uy = snf.u.apply(y)?;
        let diag = snf.diagonal();
        let mut w = vec![T::zero(); big.cols()];
        for (i, c) in uy.iter().enumerate() {
            match diag.get(i) {
                Some(d) if !d.is_zero() => {
                    if !c.is_multiple_of(d) {
                        return Ok(None);
                    }
                    w[i] = c.div_floor(d);
                }
                _ if !c.is_zero() => return Ok(None),
                _ => {}
            }
        }
        let x = snf.v.apply(&w)?;
        Ok(Some(self.source.reduce(&x[..n])))
    }

    pub(crate) fn image_columns(&self) -> Vec<Vec<T>> {
        (0..self.matrix.cols).map(|j| self.matrix.column(j)).collect()
    }

    /// Lattice `{x in Z^source : f(x) = 0 in target}` (contains the source relations).
    pub(crate) fn kernel_preimage(&self) -> Result<Vec<Vec<T>>> {
        let n = self.source.ngens();
        let rels = self.target.relations();
        let big = if rels.is_empty() {
            self.matrix.clone()
        } else {
            self.matrix.hstack(&Matrix::from_columns(self.target.ngens(), &rels)?)?
        };
        Ok(kernel_lattice(&big)?.into_iter().map(|v| v[..n].to_vec()).collect())
    }
}

/// `L / R` for lattices `R ⊆ L ⊆ Z^n`, in invariant-factor form, with generator
/// lifts and a coordinate map.
#[derive(Clone, Debug)]
pub struct Subquotient<T> {
    pub group: FgAbelian<T>,
    /// Lift in `Z^n` of each generator of `group`.
    pub lifts: Vec<Vec<T>>,
    ambient: usize,
    /// SNF data of the generators of `L`.
    l_u: Matrix<T>,
    l_diag: Vec<T>,
    /// change of basis inside `L` diagonalising the relations
    r_u: Matrix<T>,
    /// for each row of `r_u`: Some(coordinate in `group`) or None when trivial
    slot: Vec<Option<usize>>,
}

impl<T: Scalar> Subquotient<T> {
    pub fn new(ambient: usize, l_gens: &[Vec<T>], r_gens: &[Vec<T>]) -> Result<Self> {
        for v in l_gens.iter().chain(r_gens) {
            if v.len() != ambient {
                return Err(AbelianError::Shape(format!("vector of length {} in Z^{ambient}", v.len())));
            }
        }
        let l_mat = Matrix::from_columns(ambient, l_gens)?;
        let l_snf = smith_normal_form(&l_mat)?;
        let k = l_snf.rank();
        let l_diag: Vec<T> = l_snf.diagonal()[..k].to_vec();
        // basis of L: b_i = d_i * (U^-1 column i), i < k
        let basis: Vec<Vec<T>> = (0..k)
            .map(|i| {
                l_snf.u_inv.column(i).iter().map(|x| mul(x, &l_diag[i])).collect::<Result<Vec<T>>>()
            })
            .collect::<Result<_>>()?;
        let mut partial = Subquotient {
            group: FgAbelian::trivial(),
            lifts: Vec::new(),
            ambient,
            l_u: l_snf.u,
            l_diag,
            r_u: Matrix::identity(k),
            slot: Vec::new(),
        };
        let r_coords: Vec<Vec<T>> =
            r_gens.iter().map(|r| partial.basis_coordinates(r)).collect::<Result<_>>()?;
        let c = Matrix::from_columns(k, &r_coords)?;
        let r_snf = smith_normal_form(&c)?;
        let diag = r_snf.diagonal();
        let mut free = Vec::new();
        let mut tors = Vec::new();
        for i in 0..k {
            let d = diag.get(i).cloned().unwrap_or_else(T::zero);
            if d.is_zero() {
                free.push(i);
            } else if !d.is_one() {
                tors.push((i, d));
            }
        }
        let mut slot = vec![None; k];
        for (pos, &i) in free.iter().enumerate() {
            slot[i] = Some(pos);
        }
        for (pos, (i, _)) in tors.iter().enumerate() {
            slot[*i] = Some(free.len() + pos);
        }
        let group = FgAbelian { rank: free.len(), torsion: tors.iter().map(|(_, d)| d.clone()).collect() };
        // lift of slot i: basis * (U2^-1 column i)
        let order: Vec<usize> = free.iter().copied().chain(tors.iter().map(|(i, _)| *i)).collect();
        let lifts = order
            .iter()
            .map(|&i| {
                let coeffs = r_snf.u_inv.column(i);
                let mut v = vec![T::zero(); ambient];
                for (b, c) in basis.iter().zip(&coeffs) {
                    for (x, y) in v.iter_mut().zip(b) {
                        *x = add(x, &mul(c, y)?)?;
                    }
                }
                Ok(v)
            })
            .collect::<Result<_>>()?;
        partial.group = group;
        partial.lifts = lifts;
        partial.r_u = r_snf.u;
        partial.slot = slot;
        Ok(partial)
    }

    /// Coordinates of `v ∈ L` in the basis `b_i` of `L`.
    fn basis_coordinates(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.ambient {
            return Err(AbelianError::Shape("vector length".into()));
        }
        let w = self.l_u.apply(v)?;
        let k = self.l_diag.len();
        let mut c = Vec::with_capacity(k);
        for (i, x) in w.iter().enumerate() {
            if i < k {
                let (q, r) = x.div_rem(&self.l_diag[i]);
                if !r.is_zero() {
                    return Err(AbelianError::NotASubgroupElement(format_vec(v)));
                }
                c.push(q);
            } else if !x.is_zero() {
                return Err(AbelianError::NotASubgroupElement(format_vec(v)));
            }
        }
        Ok(c)
    }

    /// Reduced coordinates in `group` of the class of `v ∈ L`.
    pub fn coordinates(&self, v: &[T]) -> Result<Vec<T>> {
        let c = self.basis_coordinates(v)?;
        let y = self.r_u.apply(&c)?;
        let mut out = self.group.zero();
        for (i, yi) in y.into_iter().enumerate() {
            if let Some(s) = self.slot[i] {
                out[s] = yi;
            }
        }
        Ok(self.group.reduce(&out))
    }

    pub fn contains(&self, v: &[T]) -> bool {
        self.basis_coordinates(v).is_ok()
    }

    /// A lift of the element with the given coordinates.
    pub fn lift(&self, coords: &[T]) -> Result<Vec<T>> {
        let mut v = vec![T::zero(); self.ambient];
        for (c, l) in coords.iter().zip(&self.lifts) {
            for (x, y) in v.iter_mut().zip(l) {
                *x = add(x, &mul(c, y)?)?;
            }
        }
        Ok(v)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }
}

fn format_vec<T: Scalar>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// `ker f`, with its lifts as elements of the source.
pub fn kernel<T: Scalar>(f: &AbelianHom<T>) -> Result<(Subquotient<T>, AbelianHom<T>)> {
    let gens = f.kernel_preimage()?;
    let sq = Subquotient::new(f.source.ngens(), &gens, &f.source.relations())?;
    let emb = embedding(&sq, &f.source)?;
    Ok((sq, emb))
}

/// `im f`, inside the target.
pub fn image<T: Scalar>(f: &AbelianHom<T>) -> Result<(Subquotient<T>, AbelianHom<T>)> {
    let rels = f.target.relations();
    let mut gens = f.image_columns();
    gens.extend(rels.iter().cloned());
    let sq = Subquotient::new(f.target.ngens(), &gens, &rels)?;
    let emb = embedding(&sq, &f.target)?;
    Ok((sq, emb))
}

/// `G / <sub>` with the projection.
pub fn quotient<T: Scalar>(g: &FgAbelian<T>, sub: &[Vec<T>]) -> Result<(Subquotient<T>, AbelianHom<T>)> {
    for s in sub {
        if !g.is_reduced(s) {
            return Err(AbelianError::NotASubgroupElement(format_vec(s)));
        }
    }
    let n = g.ngens();
    let gens: Vec<Vec<T>> = (0..n).map(|i| g.basis(i)).collect();
    let mut rels = g.relations();
    rels.extend(sub.iter().cloned());
    let sq = Subquotient::new(n, &gens, &rels)?;
    let cols: Vec<Vec<T>> = gens.iter().map(|e| sq.coordinates(e)).collect::<Result<_>>()?;
    let proj = AbelianHom::new(g.clone(), sq.group.clone(), Matrix::from_columns(sq.group.ngens(), &cols)?)?;
    Ok((sq, proj))
}

/// `coker f = target / im f`.
pub fn cokernel<T: Scalar>(f: &AbelianHom<T>) -> Result<(Subquotient<T>, AbelianHom<T>)> {
    let cols: Vec<Vec<T>> = f.image_columns().iter().map(|c| f.target.reduce(c)).collect();
    quotient(&f.target, &cols)
}

/// `ker g / im f` for `A --f--> B --g--> C`.
pub fn homology_at<T: Scalar>(f: &AbelianHom<T>, g: &AbelianHom<T>) -> Result<Subquotient<T>> {
    if f.target != g.source {
        return Err(AbelianError::Shape("f and g are not composable".into()));
    }
    for i in 0..f.source.ngens() {
        let gf = g.apply(&f.apply(&f.source.basis(i))?)?;
        if !g.target.is_zero_elem(&gf) {
            return Err(AbelianError::NotAComplex { witness: i });
        }
    }
    let gens = g.kernel_preimage()?;
    let mut rels = f.image_columns();
    rels.extend(f.target.relations());
    Subquotient::new(f.target.ngens(), &gens, &rels)
}

fn embedding<T: Scalar>(sq: &Subquotient<T>, into: &FgAbelian<T>) -> Result<AbelianHom<T>> {
    let cols: Vec<Vec<T>> = sq.lifts.iter().map(|l| into.reduce(l)).collect();
    AbelianHom::new(sq.group.clone(), into.clone(), Matrix::from_columns(into.ngens(), &cols)?)
}

/// Converts a scalar to `i64` when it fits (for reporting).
pub fn to_i64<T: Scalar>(x: &T) -> Option<i64> {
    x.to_i64()
}

pub fn to_bigint<T: Scalar>(x: &T) -> BigInt {
    BigInt::from_i128(x.to_i128().unwrap_or(0)).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> Matrix<i64> {
        Matrix::from_i64_rows(rows).unwrap()
    }

    fn check_snf(a: &Matrix<i64>) -> Snf<i64> {
        let s = smith_normal_form(a).unwrap();
        assert_eq!(s.u.mul(a).unwrap().mul(&s.v).unwrap(), s.d);
        assert_eq!(s.u.mul(&s.u_inv).unwrap(), Matrix::identity(a.rows()));
        assert_eq!(s.v.mul(&s.v_inv).unwrap(), Matrix::identity(a.cols()));
        assert!(s.d.is_diagonal());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(w[0] >= 0 && (w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0)), "{diag:?}");
        }
        s
    }

    #[test]
    fn snf_2x2() {
        // det = -8, gcd of entries = 2
        let s = check_snf(&m(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.diagonal(), vec![2, 4]);
    }

    #[test]
    fn snf_identity_and_zero() {
        assert_eq!(check_snf(&Matrix::identity(3)).diagonal(), vec![1, 1, 1]);
        assert_eq!(check_snf(&Matrix::zeros(2, 3)).diagonal(), vec![0, 0]);
    }

    #[test]
    fn snf_nontrivial_divisibility() {
        // diag(2, 3) -> diag(1, 6)
        let s = check_snf(&m(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal(), vec![1, 6]);
        let s = check_snf(&m(&[vec![4, 6, 0], vec![6, 9, 15], vec![2, 0, 5]]));
        let d = s.diagonal();
        assert_eq!(d[0], 1);
    }

    #[test]
    fn overflow_is_detected() {
        let big = i64::MAX / 2;
        let a = m(&[vec![big, big - 1], vec![big - 1, big - 2]]);
        // the result either is exact or reports overflow; it never silently wraps
        match smith_normal_form(&a) {
            Ok(s) => {
                let big = |m: &Matrix<i64>| -> Matrix<BigInt> {
                    Matrix::from_rows(m.to_rows().iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
                        .unwrap()
                };
                assert_eq!(big(&s.u).mul(&big(&a)).unwrap().mul(&big(&s.v)).unwrap(), big(&s.d));
            }
            Err(e) => assert_eq!(e, AbelianError::Overflow),
        }
        let huge = m(&[vec![i64::MAX, 1]]);
        let id = Matrix::<i64>::from_i64_rows(&[vec![2], vec![0]]).unwrap();
        assert_eq!(huge.mul(&id).unwrap_err(), AbelianError::Overflow);
    }

    #[test]
    fn quotient_examples() {
        let z = FgAbelian::<i64>::free(1);
        let (q, _) = quotient(&z, &[vec![2]]).unwrap();
        assert_eq!(q.group, FgAbelian::new(0, vec![2]).unwrap());
        let z2 = FgAbelian::<i64>::free(2);
        let (q, proj) = quotient(&z2, &[vec![2, 0], vec![0, 2]]).unwrap();
        assert_eq!(q.group.torsion, vec![2, 2]);
        assert!(proj.apply(&[2, 4]).unwrap().iter().all(|x| *x == 0));
    }

    #[test]
    fn quotient_rejects_unreduced() {
        let g = FgAbelian::<i64>::new(0, vec![2]).unwrap();
        assert!(matches!(quotient(&g, &[vec![3]]), Err(AbelianError::NotASubgroupElement(_))));
    }

    #[test]
    fn kernel_of_difference() {
        // psi(m, m') = m - m'
        let z2 = FgAbelian::<i64>::free(2);
        let z = FgAbelian::<i64>::free(1);
        let psi = AbelianHom::new(z2, z, m(&[vec![1, -1]])).unwrap();
        let (k, emb) = kernel(&psi).unwrap();
        assert_eq!(k.group, FgAbelian::free(1));
        let d = emb.apply(&[1]).unwrap();
        assert!(d == vec![1, 1] || d == vec![-1, -1]);
    }

    #[test]
    fn homology_examples() {
        let z = FgAbelian::<i64>::free(1);
        let zero = AbelianHom::zero(&z, &z);
        assert_eq!(homology_at(&zero, &zero).unwrap().group, FgAbelian::free(1));
        let id = AbelianHom::identity(&z);
        assert!(homology_at(&id, &zero).unwrap().group.is_trivial());
        assert_eq!(homology_at(&id, &id).unwrap_err(), AbelianError::NotAComplex { witness: 0 });
        // Z --2--> Z --> Z/2 ... the middle is Z/2 when g = 0
        let two = AbelianHom::new(z.clone(), z.clone(), m(&[vec![2]])).unwrap();
        assert_eq!(homology_at(&two, &zero).unwrap().group.torsion, vec![2]);
    }

    #[test]
    fn torsion_respecting_hom() {
        let z2 = FgAbelian::<i64>::new(0, vec![2]).unwrap();
        let z4 = FgAbelian::<i64>::new(0, vec![4]).unwrap();
        assert!(AbelianHom::new(z2.clone(), z4.clone(), m(&[vec![2]])).is_ok());
        assert_eq!(
            AbelianHom::new(z2, z4, m(&[vec![1]])).unwrap_err(),
            AbelianError::NotAHomomorphism(0)
        );
    }

    #[test]
    fn canonical_orders() {
        let (g, _) = canonical_from_orders::<i64>(&[2, 3]).unwrap();
        assert_eq!(g.torsion, vec![6]);
        let (g, _) = canonical_from_orders::<i64>(&[2, 0, 4]).unwrap();
        assert_eq!((g.rank, g.torsion.clone()), (1, vec![2, 4]));
    }

    #[test]
    fn bigint_scalar() {
        let a: Matrix<BigInt> = Matrix::from_i64_rows(&[vec![2, 4], vec![6, 8]]).unwrap();
        let s = smith_normal_form(&a).unwrap();
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }
}
