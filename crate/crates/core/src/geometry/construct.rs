use num_traits::{One, Signed, Zero};

use super::Polytope;
use crate::error::{Error, Result};
use crate::exact::{int, QMatrix, QVector, Rational};

/// `conv{0, e_1, ..., e_d}`.
pub fn standard_simplex(d: usize) -> Polytope {
    let mut vertices = vec![QVector::zeros(d)];
    vertices.extend((0..d).map(|i| QVector::unit(d, i)));
    Polytope::from_vertices_unchecked(d, vertices)
}

/// `kP` for a positive rational `k`.
pub fn dilate(p: &Polytope, k: &Rational) -> Result<Polytope> {
    if !k.is_positive() {
        return Err(Error::InvalidArgument(format!("dilation factor must be positive, got {k}")));
    }
    Ok(Polytope::from_vertices_unchecked(p.ambient_dim(), p.vertices().iter().map(|v| v.scale(k)).collect()))
}

pub fn translate(p: &Polytope, t: &QVector) -> Result<Polytope> {
    if t.dim() != p.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: p.ambient_dim(), found: t.dim() });
    }
    Ok(Polytope::from_vertices_unchecked(p.ambient_dim(), p.vertices().iter().map(|v| v.add(t)).collect()))
}

/// Image under `x -> U x` for an integer matrix with determinant `±1`.
pub fn apply_unimodular(p: &Polytope, u: &QMatrix) -> Result<Polytope> {
    let d = p.ambient_dim();
    if u.nrows() != d || u.ncols() != d {
        return Err(Error::DimensionMismatch { expected: d, found: u.nrows() });
    }
    if !u.is_integral() || u.det()?.abs() != Rational::one() {
        return Err(Error::NotUnimodular);
    }
    Ok(Polytope::from_vertices_unchecked(d, p.vertices().iter().map(|v| u.mul_vec(v)).collect()))
}

/// Lattice pyramid `conv(P x {1}, 0)`, with the new coordinate last.
pub fn pyramid(p: &Polytope) -> Polytope {
    let d = p.ambient_dim();
    let mut vertices: Vec<QVector> = p
        .vertices()
        .iter()
        .map(|v| {
            let mut x = v.to_vec();
            x.push(Rational::one());
            QVector::new(x)
        })
        .collect();
    vertices.push(QVector::zeros(d + 1));
    Polytope::from_vertices_unchecked(d + 1, vertices)
}

/// Cayley sum `conv(P_0 x 0, P_1 x e_1, ..., P_t x e_t)`.
pub fn cayley_sum(parts: &[Polytope]) -> Result<Polytope> {
    let first = parts.first().ok_or_else(|| Error::InvalidArgument("cayley sum of no polytopes".into()))?;
    let k = first.ambient_dim();
    let t = parts.len() - 1;
    let mut points = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        if part.ambient_dim() != k {
            return Err(Error::DimensionMismatch { expected: k, found: part.ambient_dim() });
        }
        for v in part.vertices() {
            let mut x = v.to_vec();
            x.extend((1..=t).map(|j| if j == i { Rational::one() } else { Rational::zero() }));
            points.push(QVector::new(x));
        }
    }
    Polytope::from_points(k + t, points)
}

/// Cayley sum of the segments `[0, h_1], ..., [0, h_d]`.
pub fn lawrence_prism(heights: &[u32]) -> Result<Polytope> {
    if heights.is_empty() || heights.iter().all(|&h| h == 0) {
        return Err(Error::InvalidArgument("a Lawrence prism needs a positive height".into()));
    }
    let segments: Vec<Polytope> = heights
        .iter()
        .map(|&h| Polytope::from_points(1, [QVector::from_ints(&[0]), QVector::from_ints(&[h as i64])]))
        .collect::<Result<_>>()?;
    cayley_sum(&segments)
}

/// The `(d-2)`-fold lattice pyramid over `2 Delta_2`.
pub fn exceptional_simplex(d: usize) -> Result<Polytope> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("exceptional simplices need d >= 2, got {d}")));
    }
    let mut p = dilate(&standard_simplex(2), &int(2))?;
    for _ in 2..d {
        p = pyramid(&p);
    }
    Ok(p)
}

/// `P x [0, h]`.
pub fn prism(p: &Polytope, h: &Rational) -> Result<Polytope> {
    if !h.is_positive() {
        return Err(Error::InvalidArgument(format!("prism height must be positive, got {h}")));
    }
    let d = p.ambient_dim();
    let mut vertices = Vec::new();
    for v in p.vertices() {
        for top in [Rational::zero(), h.clone()] {
            let mut x = v.to_vec();
            x.push(top);
            vertices.push(QVector::new(x));
        }
    }
    Ok(Polytope::from_vertices_unchecked(d + 1, vertices))
}
