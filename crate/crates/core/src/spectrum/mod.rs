//! Exploring the Fine spectrum: normal configurations, determinant
//! numerators, the MILP family and spectrum scans.

mod milp;
pub mod planar;
mod scan;

pub use milp::{integer_hull, milp_solve, MilpInstance, MilpResult, MilpWitness};
pub use scan::{default_box, realize_numerator, scan_range, spectrum_scan, step_denominator};

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{int, primitive, QMatrix, QVector, Rational};
use crate::geometry::Polytope;

/// A finite set of primitive integer functionals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalConfiguration {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub dim: usize,
    pub normals: Vec<Vec<i64>>,
}

impl NormalConfiguration {
    /// Checks dimensions and primitivity; spanning is checked separately.
    pub fn new(dim: usize, normals: Vec<Vec<i64>>) -> Result<Self> {
        let cfg = NormalConfiguration { id: None, dim, normals };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = Some(id.into());
        self
    }

    pub fn validate(&self) -> Result<()> {
        for n in &self.normals {
            if n.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, found: n.len() });
            }
            let v = QVector::from_ints(n);
            if primitive(&v)? != v {
                return Err(Error::InvalidArgument(format!("normal {v} is not primitive")));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    pub fn vectors(&self) -> Vec<QVector> {
        self.normals.iter().map(|n| QVector::from_ints(n)).collect()
    }

    pub fn matrix(&self) -> QMatrix {
        QMatrix::new(self.vectors(), self.dim).expect("rows match the configuration dimension")
    }

    /// Whether the origin is interior to the convex hull of the normals.
    pub fn is_positively_spanning(&self) -> bool {
        is_positively_spanning(&self.vectors())
    }

    pub fn hull(&self) -> Result<Polytope> {
        Polytope::from_points(self.dim, self.vectors())
    }
}

pub fn is_positively_spanning(vectors: &[QVector]) -> bool {
    let Some(first) = vectors.first() else { return false };
    let Ok(hull) = Polytope::from_points(first.dim(), vectors.iter().cloned()) else { return false };
    match hull.facets() {
        Ok(h) => h.rhs.iter().all(Signed::is_negative),
        Err(_) => false,
    }
}

/// Positive coefficients of the dependence of `d + 1` vectors, if they
/// positively span: the solution of `A^T l = 0`, `sum l = 1`.
fn spanning_coefficients(rows: &[QVector]) -> Option<QVector> {
    let d = rows.first()?.dim();
    if rows.len() != d + 1 {
        return None;
    }
    let mut system: Vec<QVector> = (0..d).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect();
    system.push(QVector::new(vec![int(1); d + 1]));
    let mut rhs = QVector::zeros(d + 1);
    rhs[d] = int(1);
    let lambda = QMatrix::new(system, d + 1).ok()?.solve(&rhs)?;
    lambda.iter().all(Signed::is_positive).then_some(lambda)
}

/// `[A | -1]` for a `(d+1) x d` matrix.
pub fn bordered(a: &QMatrix) -> QMatrix {
    a.with_column(&QVector::new(vec![int(-1); a.nrows()])).expect("column length matches")
}

/// `|det [A | -1]| / gcd_j det(A_j)` for `d + 1` positively spanning rows.
pub fn eta(a: &QMatrix) -> Result<u64> {
    let d = a.ncols();
    if a.nrows() != d + 1 {
        return Err(Error::DimensionMismatch { expected: d + 1, found: a.nrows() });
    }
    if spanning_coefficients(a.rows()).is_none() {
        return Err(Error::NotSpanning);
    }
    let top = bordered(a).det()?;
    let minors: Vec<BigInt> =
        (0..=d).map(|j| a.without_row(j).det().map(|x| x.to_integer())).collect::<Result<_>>()?;
    let g = minors.iter().fold(BigInt::zero(), |acc, m| acc.gcd(m));
    let value = top.to_integer().abs() / g;
    value.to_u64().ok_or_else(|| Error::Unsupported(format!("eta {value} exceeds u64")))
}

/// `(d+1)`-subsets of the configuration that positively span.
pub fn positively_spanning_subsets(config: &NormalConfiguration) -> Vec<Vec<usize>> {
    let vectors = config.vectors();
    (0..vectors.len())
        .combinations(config.dim + 1)
        .filter(|s| {
            let rows: Vec<QVector> = s.iter().map(|&i| vectors[i].clone()).collect();
            spanning_coefficients(&rows).is_some()
        })
        .collect()
}

/// `eta` of each positively spanning subset, with the subset.
pub fn subset_etas(config: &NormalConfiguration) -> Vec<(Vec<usize>, u64)> {
    let vectors = config.vectors();
    positively_spanning_subsets(config)
        .into_iter()
        .map(|s| {
            let a = QMatrix::new(s.iter().map(|&i| vectors[i].clone()).collect(), config.dim).expect("dimension");
            let e = eta(&a).expect("subset positively spans");
            (s, e)
        })
        .collect()
}

/// `|det [A | -1]|` for a square bordered matrix, as an integer.
pub fn bordered_determinant(a: &QMatrix) -> Result<u64> {
    let value = bordered(a).det()?.to_integer().abs();
    value.to_u64().ok_or_else(|| Error::Unsupported(format!("determinant {value} exceeds u64")))
}

/// Union of `|det [A | -1]|` over all positively spanning subsets of all
/// configurations. Every numerator of a Fine number with such core normals
/// divides one of these; `eta` divides out the common factor of the minors.
pub fn numerator_candidates(configs: &[NormalConfiguration]) -> BTreeSet<u64> {
    configs
        .iter()
        .flat_map(|c| {
            let vectors = c.vectors();
            positively_spanning_subsets(c).into_iter().map(move |s| {
                let a = QMatrix::new(s.iter().map(|&i| vectors[i].clone()).collect(), c.dim).expect("dimension");
                bordered_determinant(&a).expect("integral determinant")
            })
        })
        .collect()
}

/// Union of `eta` over all positively spanning subsets of all configurations.
pub fn reduced_numerators(configs: &[NormalConfiguration]) -> BTreeSet<u64> {
    configs.iter().flat_map(|c| subset_etas(c).into_iter().map(|(_, e)| e)).collect()
}

/// Numerators in dimension `d` given those of dimension `d - 1`: configurations
/// with an opposing pair only contribute lower-dimensional numerators, so they
/// are filtered out before taking `eta`.
pub fn extend_numerators(lower: &BTreeSet<u64>, configs: &[NormalConfiguration]) -> BTreeSet<u64> {
    let mut out = lower.clone();
    out.extend(numerator_candidates(&filter_opposing(configs)));
    out
}

/// Numerators contributed by each configuration: a configuration with an
/// opposing pair contributes `lower` (the numerators one dimension down, if
/// known), any other contributes `|det [A | -1]|` over its spanning subsets.
pub fn contributed_numerators(configs: &[NormalConfiguration], lower: Option<&BTreeSet<u64>>) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for c in configs {
        if filter_opposing(std::slice::from_ref(c)).is_empty() {
            out.extend(lower.into_iter().flatten().copied());
        } else {
            out.extend(numerator_candidates(std::slice::from_ref(c)));
        }
    }
    out
}

/// Drops configurations whose hull contains a lattice point `v` together
/// with `-v`. Every nonzero lattice point of the hull is itself a core normal
/// whenever the configuration is, so such a pair is a circuit of length two.
pub fn filter_opposing(configs: &[NormalConfiguration]) -> Vec<NormalConfiguration> {
    configs
        .iter()
        .filter(|c| {
            let Ok(hull) = c.hull() else { return true };
            let points: BTreeSet<QVector> = hull.lattice_points().into_iter().filter(|p| !p.is_zero()).collect();
            !points.iter().any(|p| points.contains(&p.neg()))
        })
        .cloned()
        .collect()
}

/// All configurations of a dimension that can be enumerated in-house.
pub fn enumerate_configs(dim: usize) -> Result<Vec<NormalConfiguration>> {
    match dim {
        1 => Ok(vec![NormalConfiguration::new(1, vec![vec![1], vec![-1]])?]),
        2 => Ok(enumerate_configs_2d()),
        _ => Err(Error::Unsupported("unsupported; ingest external classification".into())),
    }
}

/// The vertex sets of the sixteen reflexive polygons.
pub fn enumerate_configs_2d() -> Vec<NormalConfiguration> {
    planar::reflexive_polygons()
        .into_iter()
        .enumerate()
        .map(|(i, hull)| NormalConfiguration {
            id: Some(format!("R{:02}", i + 1)),
            dim: 2,
            normals: hull.into_iter().map(|(x, y)| vec![x, y]).collect(),
        })
        .collect()
}

/// Lowest common denominator of all attainable Fine numbers for the
/// configuration: `lcm |det [A_S | -1]|` over nonsingular `(d+1)`-subsets.
pub fn denominator_bound(config: &NormalConfiguration) -> BigInt {
    let vectors = config.vectors();
    (0..vectors.len())
        .combinations(config.dim + 1)
        .filter_map(|s| {
            let a = QMatrix::new(s.iter().map(|&i| vectors[i].clone()).collect(), config.dim).ok()?;
            let det = bordered(&a).det().ok()?.to_integer().abs();
            (!det.is_zero()).then_some(det)
        })
        .fold(BigInt::from(1), |acc, d| acc.lcm(&d))
}

pub fn rational_of(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

#[cfg(test)]
mod tests;
