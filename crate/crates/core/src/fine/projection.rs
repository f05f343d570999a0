//! Lattice projections that preserve the Fine Q-codegree, and the pyramid
//! formula.

use itertools::Itertools;
use num_traits::{One, Zero};

use super::fine_profile;
use crate::error::{Error, Result};
use crate::exact::{int, integer_kernel_complement, QMatrix, QVector, Rational};
use crate::geometry::Polytope;
use crate::lp::{self, Constraints};

/// A polytope together with the integer map that produced it.
#[derive(Clone, Debug)]
pub struct Projection {
    pub polytope: Polytope,
    /// Rows form a lattice basis of the dual of the image lattice, so the
    /// image is expressed in standard coordinates of `Z^k`.
    pub map: QMatrix,
}

/// Projects along the saturation of the span of `directions`.
fn project_along(p: &Polytope, directions: &[QVector]) -> Result<Projection> {
    let d = p.ambient_dim();
    let k = QMatrix::new(directions.to_vec(), d)?.transpose();
    let k = if directions.is_empty() { QMatrix::zeros(d, 0) } else { k };
    let map = integer_kernel_complement(&k)?.projection();
    let polytope = p.image(&map)?;
    Ok(Projection { polytope, map })
}

/// Quotient by the directions of the Fine core, after which the core is a
/// point and the Fine Q-codegree is unchanged.
pub fn natural_projection(p: &Polytope) -> Result<Projection> {
    let profile = fine_profile(p)?;
    let d = p.ambient_dim();
    if profile.core_dim == 0 {
        return Ok(Projection { polytope: p.clone(), map: QMatrix::identity(d) });
    }
    let base = &profile.core_vertices[0];
    let directions: Vec<QVector> = profile.core_vertices[1..].iter().map(|v| v.sub(base)).collect();
    project_along(p, &directions)
}

/// Indices of a smallest subset of `normals` with at most `max_size` elements
/// admitting a strictly positive linear dependence.
pub fn positive_circuit(normals: &[QVector], max_size: usize) -> Option<Vec<usize>> {
    let d = normals.first()?.dim();
    for size in 2..=max_size.min(normals.len()) {
        for subset in (0..normals.len()).combinations(size) {
            // sum lambda_i a_i = 0 with lambda_i >= 1
            let mut c = Constraints::new(size);
            for i in 0..size {
                c.push(QVector::unit(size, i), Rational::one());
            }
            for j in 0..d {
                c.push_equality(subset.iter().map(|&i| normals[i][j].clone()).collect(), Rational::zero());
            }
            if lp::is_feasible(&c) {
                return Some(subset);
            }
        }
    }
    None
}

/// For core normals `a_0, ..., a_l` with a positive dependence and `l < d`,
/// projects by `(a_1, ..., a_l)`. The image lattice `pi(Z^d)` is identified
/// with `Z^l` through a unimodular complement of the kernel.
pub fn circuit_reduction(p: &Polytope) -> Result<Option<Projection>> {
    let profile = fine_profile(p)?;
    let d = p.ambient_dim();
    let Some(circuit) = positive_circuit(&profile.core_normals, d) else {
        return Ok(None);
    };
    let rows: Vec<QVector> = circuit[1..].iter().map(|&i| profile.core_normals[i].clone()).collect();
    let kernel = QMatrix::new(rows, d)?.nullspace();
    project_along(p, &kernel).map(Some)
}

/// `max{2, mu^F(P) + 1}`, the Fine Q-codegree of a lattice pyramid over `P`.
pub fn pyramid_mu(p: &Polytope) -> Result<Rational> {
    if !p.is_lattice() {
        return Err(Error::LatticeRequired);
    }
    let mu = fine_profile(p)?.mu_f + Rational::one();
    Ok(mu.max(int(2)))
}

/// Fine Q-codegree with respect to the lattice `kZ x Z^(d-1)`.
pub fn mu_under_sublattice(p: &Polytope, k: u32) -> Result<Rational> {
    if k == 0 {
        return Err(Error::InvalidArgument("sublattice index must be positive".into()));
    }
    let d = p.ambient_dim();
    let mut scale = QMatrix::identity(d).into_rows();
    if let Some(first) = scale.first_mut() {
        first[0] = Rational::new(1.into(), k.into());
    }
    let rescaled = p.image(&QMatrix::new(scale, d)?)?;
    Ok(fine_profile(&rescaled)?.mu_f)
}
