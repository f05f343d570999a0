//! Exact rational scalars, vectors and matrices, plus the integer linear
//! algebra (Bareiss determinants, Hermite normal forms) the rest of the crate
//! is built on.
//!
//! Every value here is normalized on construction: rationals are kept in
//! lowest terms with a positive denominator, so structural equality is
//! numerical equality.

use std::fmt;
use std::ops::{Deref, DerefMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"` or `"p"` (surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
            let q: BigInt = q.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Rational::new(p, q)
        }
        None => Rational::from_integer(
            s.parse().map_err(|_| Error::Parse(format!("not a rational: {s:?}")))?,
        ),
    };
    Ok(parsed)
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let raw = RationalToken::deserialize(d)?;
        raw.into_rational().map_err(serde::de::Error::custom)
    }
}

/// A rational as it may appear in input files: a `"p/q"` string or a bare
/// JSON integer.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub(crate) enum RationalToken {
    Text(String),
    Int(i64),
}

impl RationalToken {
    pub(crate) fn into_rational(self) -> Result<Rational> {
        match self {
            RationalToken::Text(s) => parse_rational(&s),
            RationalToken::Int(n) => Ok(int(n)),
        }
    }
}

pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::zero(), |g, v| g.gcd(v))
}

pub fn lcm_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |l, v| if v.is_zero() { l } else { l.lcm(v) })
}

/// Dense rational vector.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QVector(Vec<Rational>);

impl QVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        QVector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        QVector(vec![Rational::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Rational::one();
        v
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        entries.iter().map(|&x| int(x)).collect()
    }

    pub fn from_bigints(entries: &[BigInt]) -> Self {
        entries.iter().map(|x| Rational::from_integer(x.clone())).collect()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }

    pub fn dot(&self, other: &QVector) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| if a.is_zero() || b.is_zero() { acc } else { acc + a * b })
    }

    pub fn add(&self, other: &QVector) -> QVector {
        self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()
    }

    pub fn sub(&self, other: &QVector) -> QVector {
        self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()
    }

    pub fn scale(&self, k: &Rational) -> QVector {
        self.0.iter().map(|a| a * k).collect()
    }

    pub fn neg(&self) -> QVector {
        self.0.iter().map(|a| -a).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Rational::is_integer)
    }

    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.0.iter().map(|a| a.is_integer().then(|| a.to_integer())).collect()
    }

    /// Entries as `i64`; `None` if some entry is fractional or too large.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.0.iter().map(|a| if a.is_integer() { a.to_integer().to_i64() } else { None }).collect()
    }

    /// Smallest positive multiple with integer entries.
    pub fn clear_denominators(&self) -> QVector {
        let l = lcm_all(self.0.iter().map(|a| a.denom()));
        self.scale(&Rational::from_integer(l))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_rational).collect()
    }
}

impl Deref for QVector {
    type Target = [Rational];
    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl DerefMut for QVector {
    fn deref_mut(&mut self) -> &mut [Rational] {
        &mut self.0
    }
}

impl FromIterator<Rational> for QVector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        QVector(iter.into_iter().collect())
    }
}

impl From<Vec<Rational>> for QVector {
    fn from(v: Vec<Rational>) -> Self {
        QVector(v)
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for QVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<RationalToken>::deserialize(d)?;
        raw.into_iter()
            .map(RationalToken::into_rational)
            .collect::<Result<QVector>>()
            .map_err(serde::de::Error::custom)
    }
}

/// Divides an integer vector by the gcd of its entries.
pub fn primitive(v: &QVector) -> Result<QVector> {
    let ints = v.to_integers().ok_or_else(|| Error::NotIntegral(v.to_string()))?;
    let g = gcd_all(&ints);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(ints.iter().map(|x| Rational::from_integer(x / &g)).collect())
}

/// Primitive integer vector pointing the same way as a nonzero rational vector.
pub fn primitive_direction(v: &QVector) -> Result<QVector> {
    primitive(&v.clear_denominators())
}

/// Dense rectangular rational matrix stored by rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: Vec<QVector>,
    cols: usize,
}

impl QMatrix {
    pub fn new(rows: Vec<QVector>, cols: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.dim() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, found: bad.dim() });
        }
        Ok(QMatrix { rows, cols })
    }

    /// Builds from a nonempty list of equal-length rows.
    pub fn from_rows(rows: Vec<QVector>) -> Result<Self> {
        let cols = rows.first().map_or(0, QVector::dim);
        Self::new(rows, cols)
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| QVector::from_ints(r)).collect())
    }

    pub fn identity(n: usize) -> Self {
        QMatrix { rows: (0..n).map(|i| QVector::unit(n, i)).collect(), cols: n }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows: vec![QVector::zeros(cols); rows], cols }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &QVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[QVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<QVector> {
        self.rows
    }

    pub fn column(&self, j: usize) -> QVector {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        QMatrix { rows: (0..self.cols).map(|j| self.column(j)).collect(), cols: self.nrows() }
    }

    pub fn mul_vec(&self, v: &QVector) -> QVector {
        self.rows.iter().map(|r| r.dot(v)).collect()
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.nrows() {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.nrows() });
        }
        let t = other.transpose();
        let rows = self.rows.iter().map(|r| t.rows.iter().map(|c| r.dot(c)).collect()).collect();
        Ok(QMatrix { rows, cols: other.cols })
    }

    /// Appends a column on the right.
    pub fn with_column(&self, col: &QVector) -> Result<QMatrix> {
        if col.dim() != self.nrows() {
            return Err(Error::DimensionMismatch { expected: self.nrows(), found: col.dim() });
        }
        let rows = self
            .rows
            .iter()
            .zip(col.iter())
            .map(|(r, c)| r.iter().cloned().chain(std::iter::once(c.clone())).collect())
            .collect();
        Ok(QMatrix { rows, cols: self.cols + 1 })
    }

    pub fn without_row(&self, i: usize) -> QMatrix {
        let rows = self.rows.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, r)| r.clone()).collect();
        QMatrix { rows, cols: self.cols }
    }

    pub fn is_integral(&self) -> bool {
        self.rows.iter().all(QVector::is_integral)
    }

    /// Exact determinant via fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<Rational> {
        if self.nrows() != self.cols {
            return Err(Error::NotSquare { rows: self.nrows(), cols: self.cols });
        }
        let mut scale = BigInt::one();
        let mut m = Vec::with_capacity(self.nrows());
        for r in &self.rows {
            let l = lcm_all(r.iter().map(|a| a.denom()));
            m.push(r.iter().map(|a| (a * Rational::from_integer(l.clone())).to_integer()).collect::<Vec<_>>());
            scale *= l;
        }
        Ok(Rational::new(bareiss_det(m), scale))
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == m.len() {
                break;
            }
            let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
            m.swap(r, p);
            let inv = m[r][c].recip();
            m[r] = m[r].scale(&inv);
            for i in 0..m.len() {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    let pivot_row = m[r].clone();
                    for (x, y) in m[i].iter_mut().zip(pivot_row.iter()) {
                        if !y.is_zero() {
                            *x -= &f * y;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (QMatrix { rows: m, cols: self.cols }, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : M x = 0}`.
    pub fn nullspace(&self) -> Vec<QVector> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = QVector::zeros(self.cols);
                v[f] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.rows[i][f].clone();
                }
                v
            })
            .collect()
    }

    /// Unique solution of a square system, or `None` when singular.
    pub fn solve(&self, b: &QVector) -> Option<QVector> {
        let n = self.nrows();
        if n != self.cols || b.dim() != n {
            return None;
        }
        let aug = self.with_column(b).ok()?;
        let (r, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
            return None;
        }
        Some((0..n).map(|i| r.rows[i][n].clone()).collect())
    }

    fn to_bigints(&self) -> Result<Vec<Vec<BigInt>>> {
        self.rows
            .iter()
            .map(|r| r.to_integers().ok_or_else(|| Error::NotIntegral(r.to_string())))
            .collect()
    }

    fn from_bigints(rows: Vec<Vec<BigInt>>, cols: usize) -> QMatrix {
        QMatrix { rows: rows.iter().map(|r| QVector::from_bigints(r)).collect(), cols }
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Row-style Hermite normal form of an integer matrix.
#[derive(Clone, Debug)]
pub struct HermiteForm {
    /// `transform * input`, upper echelon with positive pivots and reduced
    /// entries above each pivot.
    pub form: QMatrix,
    /// Unimodular left transform.
    pub transform: QMatrix,
    pub rank: usize,
}

/// Computes `U` unimodular and `H = U M` in row Hermite normal form.
pub fn hermite_normal_form(m: &QMatrix) -> Result<HermiteForm> {
    let mut h = m.to_bigints()?;
    let n = h.len();
    let cols = m.ncols();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();

    fn sub_row(rows: &mut [Vec<BigInt>], target: usize, src: usize, q: &BigInt) {
        let (a, b) = if target < src {
            let (lo, hi) = rows.split_at_mut(src);
            (&mut lo[target], &hi[0])
        } else {
            let (lo, hi) = rows.split_at_mut(target);
            (&mut hi[0], &lo[src])
        };
        for (x, y) in a.iter_mut().zip(b.iter()) {
            *x -= q * y;
        }
    }

    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        loop {
            let Some(p) = (r..n).filter(|&i| !h[i][c].is_zero()).min_by_key(|&i| h[i][c].abs()) else {
                break;
            };
            h.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..n {
                if !h[i][c].is_zero() {
                    let q = h[i][c].div_floor(&h[r][c]);
                    sub_row(&mut h, i, r, &q);
                    sub_row(&mut u, i, r, &q);
                    if !h[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            for x in h[r].iter_mut().chain(u[r].iter_mut()) {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let q = h[i][c].div_floor(&h[r][c]);
            if !q.is_zero() {
                sub_row(&mut h, i, r, &q);
                sub_row(&mut u, i, r, &q);
            }
        }
        r += 1;
    }
    Ok(HermiteForm {
        form: QMatrix::from_bigints(h, cols),
        transform: QMatrix::from_bigints(u, n),
        rank: r,
    })
}

/// A unimodular change of coordinates adapted to a rational subspace.
#[derive(Clone, Debug)]
pub struct KernelComplement {
    /// Unimodular `n x n` matrix; its last `n - rank` rows vanish on the subspace.
    pub unimodular: QMatrix,
    pub rank: usize,
}

impl KernelComplement {
    /// The lattice-preserving projection `Z^n -> Z^(n - rank)` whose kernel is
    /// the saturation of the subspace.
    pub fn projection(&self) -> QMatrix {
        let rows = self.unimodular.rows()[self.rank..].to_vec();
        QMatrix { rows, cols: self.unimodular.ncols() }
    }
}

/// For `K` (`n x k`, columns spanning a rational subspace of `R^n`), returns a
/// unimodular `U` such that `U K` is nonzero only in its first `rank K` rows.
pub fn integer_kernel_complement(k: &QMatrix) -> Result<KernelComplement> {
    let n = k.nrows();
    if k.ncols() == 0 {
        return Ok(KernelComplement { unimodular: QMatrix::identity(n), rank: 0 });
    }
    let scaled = QMatrix::new(
        k.transpose().rows().iter().map(QVector::clear_denominators).collect(),
        n,
    )?
    .transpose();
    let hnf = hermite_normal_form(&scaled)?;
    Ok(KernelComplement { unimodular: hnf.transform, rank: hnf.rank })
}

/// Basis (as rows) of the lattice generated by the given integer vectors.
pub fn lattice_basis(generators: &[QVector], dim: usize) -> Result<Vec<QVector>> {
    let m = QMatrix::new(generators.to_vec(), dim)?;
    let hnf = hermite_normal_form(&m)?;
    Ok(hnf.form.rows()[..hnf.rank].to_vec())
}

/// Dimension of the affine hull of a finite point set (`None` when empty).
pub fn affine_rank(points: &[QVector]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    if rest.is_empty() {
        return Some(0);
    }
    let diffs: Vec<QVector> = rest.iter().map(|p| p.sub(first)).collect();
    Some(QMatrix::new(diffs, first.dim()).map(|m| m.rank()).unwrap_or(0))
}
