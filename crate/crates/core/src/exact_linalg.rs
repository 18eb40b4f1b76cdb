//! Exact rational linear algebra.
//!
//! Rational matrices are scaled row-wise to integers and reduced by
//! fraction-free (Bareiss) elimination; back substitution is done over the
//! rationals. Integer vectors ([`ZVector`]) are the working currency of the
//! polyhedral layer.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type ExactScalar = BigRational;

/// Integer vector; primitive representatives of rays and normals.
pub type ZVector = Vec<BigInt>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QVector(Vec<ExactScalar>);

impl QVector {
    pub fn new(entries: Vec<ExactScalar>) -> Self {
        QVector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        QVector(vec![ExactScalar::zero(); dim])
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        QVector(entries.iter().map(|&x| ExactScalar::from_integer(x.into())).collect())
    }

    pub fn from_ints(entries: &[BigInt]) -> Self {
        QVector(entries.iter().map(|x| ExactScalar::from_integer(x.clone())).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[ExactScalar] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &QVector) -> Result<ExactScalar> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum())
    }

    pub fn add(&self, other: &QVector) -> Result<QVector> {
        check_dim(self.dim(), other.dim())?;
        Ok(QVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &QVector) -> Result<QVector> {
        check_dim(self.dim(), other.dim())?;
        Ok(QVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn scale(&self, s: &ExactScalar) -> QVector {
        QVector(self.0.iter().map(|a| a * s).collect())
    }

    /// Positive multiple with coprime integer entries; the zero vector maps to itself.
    pub fn to_primitive(&self) -> ZVector {
        let l = self.0.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: ZVector = self.0.iter().map(|x| x.numer() * (&l / x.denom())).collect();
        primitive(ints)
    }

    /// Exact integer entries, if every entry is integral.
    pub fn to_integers(&self) -> Option<ZVector> {
        self.0.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
    }
}

impl From<ZVector> for QVector {
    fn from(v: ZVector) -> Self {
        QVector(v.into_iter().map(ExactScalar::from_integer).collect())
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ExactScalar>,
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<ExactScalar>) -> Result<Self> {
        check_dim(rows * cols, entries.len())?;
        Ok(QMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, entries: vec![ExactScalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = ExactScalar::one();
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[QVector]) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            check_dim(cols, r.dim())?;
            entries.extend(r.0.iter().cloned());
        }
        Ok(QMatrix { rows: rows.len(), cols, entries })
    }

    pub fn from_int_rows(cols: usize, rows: &[ZVector]) -> Result<Self> {
        let q: Vec<QVector> = rows.iter().map(|r| QVector::from_ints(r)).collect();
        Self::from_rows(cols, &q)
    }

    pub fn from_i64_rows(cols: usize, rows: &[&[i64]]) -> Result<Self> {
        let q: Vec<QVector> = rows.iter().map(|r| QVector::from_i64(r)).collect();
        Self::from_rows(cols, &q)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[ExactScalar] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactScalar {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> QVector {
        QVector(self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn col(&self, j: usize) -> QVector {
        QVector((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn row_vectors(&self) -> Vec<QVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        QMatrix { rows: self.cols, cols: self.rows, entries }
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        check_dim(self.cols, other.rows)?;
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                entries.push((0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum());
            }
        }
        Ok(QMatrix { rows: self.rows, cols: other.cols, entries })
    }

    pub fn mul_vec(&self, v: &QVector) -> Result<QVector> {
        check_dim(self.cols, v.dim())?;
        Ok(QVector((0..self.rows).map(|i| self.row(i).dot(v).expect("checked")).collect()))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Rows scaled by the lcm of their denominators.
    fn integer_rows(&self) -> Vec<ZVector> {
        (0..self.rows).map(|i| self.row(i).to_primitive()).collect()
    }

    /// Integer rows, if all entries are integral.
    pub fn to_int_rows(&self) -> Option<Vec<ZVector>> {
        (0..self.rows).map(|i| self.row(i).to_integers()).collect()
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

pub fn rank(m: &QMatrix) -> usize {
    rank_int(&m.integer_rows(), m.cols)
}

/// Rows form a basis of `{x : Mx = 0}`. One row per free column, in ascending
/// order; each row is a primitive integer vector whose entry at its own free
/// column is positive.
pub fn kernel_basis(m: &QMatrix) -> QMatrix {
    let rows = kernel_int(&m.integer_rows(), m.cols);
    QMatrix::from_int_rows(m.cols, &rows).expect("kernel rows have the column dimension")
}

/// Some `x` with `Mx = b`, free variables set to zero; `None` if inconsistent.
pub fn solve(m: &QMatrix, b: &QVector) -> Result<Option<QVector>> {
    check_dim(m.rows, b.dim())?;
    let cols = m.cols;
    let rows: Vec<ZVector> = (0..m.rows)
        .map(|i| {
            let mut r = m.row(i).0;
            r.push(b.0[i].clone());
            let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            r.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    let (ech, pivots) = bareiss_echelon(rows, cols + 1);
    if pivots.last() == Some(&cols) {
        return Ok(None);
    }
    let mut x = vec![ExactScalar::zero(); cols];
    for (k, &p) in pivots.iter().enumerate().rev() {
        let row = &ech[k];
        let mut acc = ExactScalar::from_integer(row[cols].clone());
        for j in p + 1..cols {
            if !row[j].is_zero() {
                acc -= ExactScalar::from_integer(row[j].clone()) * &x[j];
            }
        }
        x[p] = acc / ExactScalar::from_integer(row[p].clone());
    }
    Ok(Some(QVector(x)))
}

/// Gale dual: rows span the kernel of `q`, so that `P·Qᵗ = 0`.
pub fn gale_dual(q: &QMatrix) -> Result<QMatrix> {
    let r = rank(q);
    if r < q.rows {
        return Err(Error::RankDeficient { rank: r, rows: q.rows });
    }
    Ok(kernel_basis(q))
}

/// Gale dual computed with the columns eliminated in the order `perm`
/// (a permutation of `0..cols`); spans the same row space as [`gale_dual`].
pub fn gale_dual_permuted(q: &QMatrix, perm: &[usize]) -> Result<QMatrix> {
    if perm.len() != q.cols || !is_permutation(perm) {
        return Err(Error::InvalidInput("column order is not a permutation".into()));
    }
    let cols: Vec<QVector> = perm.iter().map(|&j| q.col(j)).collect();
    let permuted = QMatrix::from_rows(q.rows, &cols)?.transpose();
    let kp = gale_dual(&permuted)?;
    let rows: Vec<QVector> = (0..kp.rows)
        .map(|i| {
            let mut out = vec![ExactScalar::zero(); q.cols];
            for (pos, &j) in perm.iter().enumerate() {
                out[j] = kp.get(i, pos).clone();
            }
            QVector(out)
        })
        .collect();
    QMatrix::from_rows(q.cols, &rows)
}

fn is_permutation(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return false;
        }
        seen[p] = true;
    }
    true
}

// ---------------------------------------------------------------------------
// Integer kernels.

pub fn zdot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Divides by the content; the zero vector maps to itself.
pub fn primitive(mut v: ZVector) -> ZVector {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
    v
}

pub fn zvec(entries: &[i64]) -> ZVector {
    entries.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn zneg(v: &[BigInt]) -> ZVector {
    v.iter().map(|x| -x).collect()
}

pub fn zadd(a: &[BigInt], b: &[BigInt]) -> ZVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `s·a + t·b`.
pub fn zcombine(s: &BigInt, a: &[BigInt], t: &BigInt, b: &[BigInt]) -> ZVector {
    a.iter().zip(b).map(|(x, y)| s * x + t * y).collect()
}

/// Fraction-free row echelon form: returns the echelon rows (nonzero rows
/// first) and the pivot column of each nonzero row.
pub fn bareiss_echelon(mut a: Vec<ZVector>, cols: usize) -> (Vec<ZVector>, Vec<usize>) {
    let m = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            let f = row[c].clone();
            for j in c + 1..cols {
                let v = &pivot_row[c] * &row[j] - &f * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
            row[c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(pivots.len());
    (a, pivots)
}

pub fn rank_int(rows: &[ZVector], cols: usize) -> usize {
    let nonzero: Vec<ZVector> = rows.iter().filter(|r| !is_zero_vec(r)).cloned().collect();
    match nonzero.len() {
        0 => 0,
        1 => 1,
        _ => bareiss_echelon(nonzero, cols).1.len(),
    }
}

/// Kernel basis of an integer matrix; see [`kernel_basis`] for normalization.
pub fn kernel_int(rows: &[ZVector], cols: usize) -> Vec<ZVector> {
    let (ech, pivots) = bareiss_echelon(rows.to_vec(), cols);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for f in (0..cols).filter(|&j| !is_pivot[j]) {
        let mut x = vec![ExactScalar::zero(); cols];
        x[f] = ExactScalar::one();
        for (k, &p) in pivots.iter().enumerate().rev() {
            let row = &ech[k];
            let mut acc = ExactScalar::zero();
            for j in p + 1..cols {
                if !row[j].is_zero() && !x[j].is_zero() {
                    acc -= ExactScalar::from_integer(row[j].clone()) * &x[j];
                }
            }
            x[p] = acc / ExactScalar::from_integer(row[p].clone());
        }
        basis.push(QVector(x).to_primitive());
    }
    basis
}

/// Canonical basis of the span of `vectors`: reduced row echelon form with
/// each row scaled to a primitive integer vector (pivot entries positive).
pub fn canonical_basis(vectors: &[ZVector], cols: usize) -> Vec<ZVector> {
    let nonzero: Vec<ZVector> = vectors.iter().filter(|r| !is_zero_vec(r)).cloned().collect();
    if nonzero.is_empty() {
        return Vec::new();
    }
    let (mut ech, pivots) = bareiss_echelon(nonzero, cols);
    for k in (0..pivots.len()).rev() {
        if ech[k][pivots[k]].is_negative() {
            ech[k] = zneg(&ech[k]);
        }
        ech[k] = primitive(std::mem::take(&mut ech[k]));
        for i in 0..k {
            let pivot_row = ech[k].clone();
            reduce_against(&mut ech[i], &pivot_row, pivots[k]);
        }
    }
    ech.into_iter().map(primitive).collect()
}

/// Clears entry `pivot` of `v` using `row` (whose entry at `pivot` is positive),
/// keeping `v` a positive multiple of its reduced class representative.
pub(crate) fn reduce_against(v: &mut ZVector, row: &[BigInt], pivot: usize) {
    if v[pivot].is_zero() {
        return;
    }
    let g = v[pivot].gcd(&row[pivot]);
    let s = &row[pivot] / &g;
    let t = -(&v[pivot] / &g);
    *v = zcombine(&s, v, &t, row);
}

/// Canonical representative of `v` modulo a subspace given by its
/// [`canonical_basis`]; primitive.
pub fn reduce_modulo(v: &[BigInt], basis: &[ZVector]) -> ZVector {
    let mut out = v.to_vec();
    for row in basis {
        let pivot = row.iter().position(|x| !x.is_zero()).expect("basis rows are nonzero");
        reduce_against(&mut out, row, pivot);
    }
    primitive(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q3() -> QMatrix {
        QMatrix::from_i64_rows(
            6,
            &[&[1, 0, 0, 1, 1, 0], &[0, 1, 0, 1, 0, 1], &[0, 0, 1, 0, 1, 1]],
        )
        .unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&QMatrix::identity(3)), 3);
        assert_eq!(rank(&QMatrix::zeros(2, 4)), 0);
        assert_eq!(rank(&q3()), 3);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&QMatrix::identity(2)).rows(), 0);
        let k = kernel_basis(&QMatrix::from_i64_rows(2, &[&[1, 1]]).unwrap());
        assert_eq!(k.to_int_rows().unwrap(), vec![zvec(&[-1, 1])]);
        let k = kernel_basis(&q3());
        assert_eq!(
            k.to_int_rows().unwrap(),
            vec![zvec(&[-1, -1, 0, 1, 0, 0]), zvec(&[-1, 0, -1, 0, 1, 0]), zvec(&[0, -1, -1, 0, 0, 1])]
        );
    }

    #[test]
    fn solve_examples() {
        let b = QVector::from_i64(&[1, 2]);
        assert_eq!(solve(&QMatrix::identity(2), &b).unwrap(), Some(b.clone()));
        let m = QMatrix::from_i64_rows(2, &[&[1, 1]]).unwrap();
        assert_eq!(solve(&m, &QVector::from_i64(&[3])).unwrap(), Some(QVector::from_i64(&[3, 0])));
        let m = QMatrix::from_i64_rows(2, &[&[1, 0], &[1, 0]]).unwrap();
        assert_eq!(solve(&m, &QVector::from_i64(&[0, 1])).unwrap(), None);
        assert!(solve(&m, &QVector::from_i64(&[0])).is_err());
    }

    #[test]
    fn gale_dual_examples() {
        assert_eq!(gale_dual(&QMatrix::identity(2)).unwrap().rows(), 0);
        let p = gale_dual(&q3()).unwrap();
        assert!(p.mul(&q3().transpose()).unwrap().is_zero());
        let deficient = QMatrix::from_i64_rows(2, &[&[1, 1], &[2, 2]]).unwrap();
        assert!(matches!(gale_dual(&deficient), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn permuted_gale_dual_spans_same_space() {
        let q = q3();
        let p1 = gale_dual(&q).unwrap();
        let p2 = gale_dual_permuted(&q, &[5, 3, 1, 0, 4, 2]).unwrap();
        assert!(p2.mul(&q.transpose()).unwrap().is_zero());
        let mut stacked = p1.to_int_rows().unwrap();
        stacked.extend(p2.to_int_rows().unwrap());
        assert_eq!(rank_int(&stacked, 6), 3);
    }

    #[test]
    fn canonical_basis_is_rref() {
        let b = canonical_basis(&[zvec(&[2, 4, 2]), zvec(&[1, 3, 0])], 3);
        assert_eq!(b, vec![zvec(&[1, 0, 3]), zvec(&[0, 1, -1])]);
        assert_eq!(reduce_modulo(&zvec(&[1, 1, 5]), &b), zvec(&[0, 0, 1]));
    }
}
