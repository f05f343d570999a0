//! Exact polytopes: vertex and facet descriptions, lattice points, codegree.

mod construct;
mod named;

pub use construct::{
    apply_unimodular, cayley_sum, dilate, exceptional_simplex, lawrence_prism, prism, pyramid, standard_simplex,
    translate,
};
pub use named::{named_polytope, p11, p13, p17, p19, p19_as_printed, p5, p7, NAMED};

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{affine_rank, int, primitive, QMatrix, QVector, Rational};
use crate::lp::{self, Constraints, LpOutcome};

/// Facet description `<a_i, x> >= b_i` with primitive inward normals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRep {
    pub normals: Vec<QVector>,
    pub rhs: Vec<Rational>,
    pub ambient: usize,
}

impl HRep {
    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&QVector, &Rational)> {
        self.normals.iter().zip(&self.rhs)
    }

    pub fn contains(&self, x: &QVector) -> bool {
        self.iter().all(|(a, b)| &a.dot(x) >= b)
    }

    pub fn contains_strictly(&self, x: &QVector) -> bool {
        self.iter().all(|(a, b)| &a.dot(x) > b)
    }

    pub fn to_constraints(&self) -> Constraints {
        let mut c = Constraints::new(self.ambient);
        for (a, b) in self.iter() {
            c.push(a.clone(), b.clone());
        }
        c
    }
}

/// A polytope given by its vertices. Vertices are kept sorted and
/// irredundant; `is_lattice` records whether all of them are integral.
#[derive(Clone)]
pub struct Polytope {
    ambient: usize,
    vertices: Vec<QVector>,
    lattice: bool,
    facets: OnceLock<HRep>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

impl fmt::Debug for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Polytope").field("ambient", &self.ambient).field("vertices", &self.vertices).finish()
    }
}

impl fmt::Display for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{{{}}}", self.vertices.iter().join(", "))
    }
}

impl Polytope {
    /// Convex hull of a finite point set.
    pub fn from_points(ambient: usize, points: impl IntoIterator<Item = QVector>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for p in points {
            if p.dim() != ambient {
                return Err(Error::DimensionMismatch { expected: ambient, found: p.dim() });
            }
            set.insert(p);
        }
        if set.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        let points: Vec<QVector> = set.into_iter().collect();
        let vertices = hull_vertices(&points);
        Ok(Self::from_vertices_unchecked(ambient, vertices))
    }

    pub fn from_int_points(points: &[&[i64]]) -> Result<Self> {
        let ambient = points.first().map(|p| p.len()).ok_or(Error::EmptyPolytope)?;
        Self::from_points(ambient, points.iter().map(|p| QVector::from_ints(p)))
    }

    /// Trusts the caller that `vertices` are distinct and in convex position.
    pub(crate) fn from_vertices_unchecked(ambient: usize, mut vertices: Vec<QVector>) -> Self {
        vertices.sort();
        vertices.dedup();
        let lattice = vertices.iter().all(QVector::is_integral);
        Polytope { ambient, vertices, lattice, facets: OnceLock::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }

    pub fn is_lattice(&self) -> bool {
        self.lattice
    }

    /// Dimension of the affine hull.
    pub fn dim(&self) -> usize {
        affine_rank(&self.vertices).unwrap_or(0)
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Errors with `NotFullDim` unless the polytope spans its ambient space.
    pub fn require_full_dim(&self) -> Result<()> {
        let dim = self.dim();
        if dim == self.ambient {
            Ok(())
        } else {
            Err(Error::NotFullDim { dim, ambient: self.ambient })
        }
    }

    /// `h_P(a) = min_v <a, v>`.
    pub fn support(&self, a: &QVector) -> Rational {
        self.vertices.iter().map(|v| a.dot(v)).min().expect("polytopes are nonempty")
    }

    pub fn max_value(&self, a: &QVector) -> Rational {
        self.vertices.iter().map(|v| a.dot(v)).max().expect("polytopes are nonempty")
    }

    /// Irredundant facet description.
    pub fn facets(&self) -> Result<&HRep> {
        if let Some(h) = self.facets.get() {
            return Ok(h);
        }
        self.require_full_dim()?;
        let h = compute_facets(self.ambient, &self.vertices);
        Ok(self.facets.get_or_init(|| h))
    }

    pub fn contains(&self, x: &QVector) -> bool {
        if let Ok(h) = self.facets() {
            return h.contains(x);
        }
        // lower-dimensional: x is a convex combination of the vertices
        let n = self.vertices.len();
        let mut c = Constraints::new(n);
        for i in 0..n {
            c.push(QVector::unit(n, i), Rational::zero());
        }
        c.push_equality(QVector::new(vec![Rational::one(); n]), Rational::one());
        for j in 0..self.ambient {
            c.push_equality(self.vertices.iter().map(|v| v[j].clone()).collect(), x[j].clone());
        }
        lp::is_feasible(&c)
    }

    /// Integer points of the bounding box, lexicographically ordered.
    fn box_points(&self) -> impl Iterator<Item = QVector> {
        let ranges: Vec<std::ops::RangeInclusive<i64>> = (0..self.ambient)
            .map(|j| {
                let lo = self.vertices.iter().map(|v| v[j].floor()).min().unwrap();
                let hi = self.vertices.iter().map(|v| v[j].ceil()).max().unwrap();
                lo.to_integer().to_i64().expect("bounding box fits i64")..=hi.to_integer().to_i64().expect("bounding box fits i64")
            })
            .collect();
        ranges.into_iter().multi_cartesian_product().map(|p| QVector::from_ints(&p))
    }

    pub fn lattice_points(&self) -> Vec<QVector> {
        if self.ambient == 0 {
            return vec![QVector::zeros(0)];
        }
        self.box_points().filter(|p| self.contains(p)).collect()
    }

    /// Lattice points in the interior; empty unless full-dimensional.
    pub fn interior_lattice_points(&self) -> Vec<QVector> {
        match self.facets() {
            Ok(h) if self.ambient > 0 => self.box_points().filter(|p| h.contains_strictly(p)).collect(),
            _ => Vec::new(),
        }
    }

    /// Smallest `k >= 1` such that `kP` has an interior lattice point.
    pub fn codegree(&self) -> Result<usize> {
        if !self.lattice {
            return Err(Error::LatticeRequired);
        }
        self.require_full_dim()?;
        let d = self.ambient;
        let k = (1..=d + 1)
            .find(|&k| !dilate(self, &int(k as i64)).expect("positive factor").interior_lattice_points().is_empty())
            .expect("(d+1)P always has an interior lattice point");
        Ok(k)
    }

    pub fn degree(&self) -> Result<usize> {
        Ok(self.ambient + 1 - self.codegree()?)
    }

    /// Image under an affine map `x -> M x` with `M` of shape `k x d`.
    pub fn image(&self, m: &QMatrix) -> Result<Polytope> {
        if m.ncols() != self.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: m.ncols() });
        }
        Polytope::from_points(m.nrows(), self.vertices.iter().map(|v| m.mul_vec(v)))
    }
}

/// Whether `v` can be strictly separated from the other points.
fn is_extreme(v: &QVector, others: &[&QVector]) -> bool {
    if others.is_empty() {
        return true;
    }
    let d = v.dim();
    let mut c = Constraints::new(d + 1);
    for p in others {
        let mut row = p.sub(v).into_inner();
        row.push(-Rational::one());
        c.push(QVector::new(row), Rational::zero());
    }
    for j in 0..d {
        c.push(QVector::unit(d + 1, j), -Rational::one());
        c.push(QVector::unit(d + 1, j).neg(), -Rational::one());
    }
    match lp::maximize(&c, &QVector::unit(d + 1, d)) {
        LpOutcome::Optimal { value, .. } => value.is_positive(),
        _ => unreachable!("separation LP is feasible and bounded"),
    }
}

fn hull_vertices(points: &[QVector]) -> Vec<QVector> {
    let set: HashSet<&QVector> = points.iter().collect();
    let d = points[0].dim();
    let steps: Vec<QVector> = if points.iter().all(QVector::is_integral) && d <= 6 {
        (0..d)
            .map(|_| -1i64..=1)
            .multi_cartesian_product()
            .filter(|w| w.iter().find(|x| **x != 0) == Some(&1))
            .map(|w| QVector::from_ints(&w))
            .collect()
    } else {
        Vec::new()
    };
    let candidates: Vec<&QVector> = points
        .iter()
        .filter(|p| !steps.iter().any(|w| set.contains(&p.add(w)) && set.contains(&p.sub(w))))
        .collect();
    let result: Vec<QVector> = points
        .iter()
        .filter(|p| {
            if !candidates.contains(p) {
                return false;
            }
            let others: Vec<&QVector> = points.iter().filter(|q| q != p).collect();
            is_extreme(p, &others)
        })
        .cloned()
        .collect();
    result
}

fn compute_facets(d: usize, vertices: &[QVector]) -> HRep {
    let mut found: Vec<(QVector, Rational)> = Vec::new();
    for subset in vertices.iter().combinations(d) {
        let base = subset[0];
        let diffs: Vec<QVector> = subset[1..].iter().map(|v| v.sub(base)).collect();
        let normal = if d == 1 {
            QVector::from_ints(&[1])
        } else {
            let m = QMatrix::new(diffs, d).expect("consistent dimension");
            let ns = m.nullspace();
            if ns.len() != 1 {
                continue;
            }
            primitive(&ns[0].clear_denominators()).expect("nonzero integral normal")
        };
        let at_base = normal.dot(base);
        let values: Vec<Rational> = vertices.iter().map(|v| normal.dot(v)).collect();
        let oriented = if values.iter().all(|x| x >= &at_base) {
            normal
        } else if values.iter().all(|x| x <= &at_base) {
            normal.neg()
        } else {
            continue;
        };
        let rhs = oriented.dot(base);
        if !found.iter().any(|(a, _)| a == &oriented) {
            found.push((oriented.clone(), rhs));
        }
        if d == 1 {
            found.push((oriented.neg(), -vertices.iter().map(|v| v[0].clone()).max().unwrap()));
            break;
        }
    }
    found.sort_by(|x, y| y.0.cmp(&x.0));
    found.dedup_by(|x, y| x.0 == y.0);
    let (normals, rhs) = found.into_iter().unzip();
    HRep { normals, rhs, ambient: d }
}

/// Denominator lcm of all vertex coordinates.
pub fn vertex_denominator(p: &Polytope) -> num_bigint::BigInt {
    p.vertices().iter().flat_map(|v| v.iter().map(|x| x.denom().clone())).fold(num_bigint::BigInt::one(), |a, b| a.lcm(&b))
}
