//! Fine adjunction: candidate inequalities, the Fine mountain, the Fine
//! number and the Fine core.
//!
//! A valid inequality `<a, x> >= h_P(a)` is relevant only if `a` lies in the
//! convex hull of the primitive facet normals, so the nonzero lattice points of
//! that hull form a finite superset of all inequalities that matter.

mod projection;

pub use projection::{circuit_reduction, mu_under_sublattice, natural_projection, positive_circuit, pyramid_mu, Projection};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{affine_rank, QMatrix, QVector, Rational};
use crate::geometry::Polytope;
use crate::lp::{self, Constraints, LpOutcome};

/// A candidate inequality `<normal, x> >= rhs` with `rhs = h_P(normal)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub normal: QVector,
    pub rhs: Rational,
}

#[derive(Clone, Debug)]
pub struct FineSystem {
    pub base: Polytope,
    pub candidates: Vec<Candidate>,
}

/// Candidates are the nonzero lattice points of the hull of the facet normals.
pub fn relevant_candidates(p: &Polytope) -> Result<FineSystem> {
    let facets = p.facets()?;
    let hull = Polytope::from_points(p.ambient_dim(), facets.normals.iter().cloned())?;
    let candidates = hull
        .lattice_points()
        .into_iter()
        .filter(|a| !a.is_zero())
        .map(|a| Candidate { rhs: p.support(&a), normal: a })
        .collect();
    Ok(FineSystem { base: p.clone(), candidates })
}

impl FineSystem {
    pub fn dim(&self) -> usize {
        self.base.ambient_dim()
    }

    /// Rows `<a, x> >= h(a) + s` in the variables `x`.
    pub fn adjoint_constraints(&self, s: &Rational) -> Constraints {
        let mut c = Constraints::new(self.dim());
        for cand in &self.candidates {
            c.push(cand.normal.clone(), &cand.rhs + s);
        }
        c
    }

    pub fn mountain(&self) -> Mountain {
        let d = self.dim();
        let mut c = Constraints::new(d + 1);
        for cand in &self.candidates {
            let mut row = cand.normal.to_vec();
            row.push(-Rational::one());
            c.push(QVector::new(row), cand.rhs.clone());
        }
        c.push(QVector::unit(d + 1, d), Rational::zero());
        Mountain { constraints: c, dim: d }
    }

    /// The system keeping only the candidates at `keep`.
    pub fn restrict(&self, keep: &[usize]) -> FineSystem {
        FineSystem { base: self.base.clone(), candidates: keep.iter().map(|&i| self.candidates[i].clone()).collect() }
    }
}

/// `{(x, s) : <a, x> - s >= h(a), s >= 0}` in dimension `d + 1`. The last row
/// is `s >= 0`.
#[derive(Clone, Debug)]
pub struct Mountain {
    pub constraints: Constraints,
    pub dim: usize,
}

impl Mountain {
    /// Maximum of `s`, with an optimal point.
    pub fn height(&self) -> Result<(Rational, QVector)> {
        match lp::maximize(&self.constraints, &QVector::unit(self.dim + 1, self.dim)) {
            LpOutcome::Optimal { value, point } => Ok((value, point)),
            LpOutcome::Infeasible => Err(Error::EmptyPolytope),
            LpOutcome::Unbounded => Err(Error::Unbounded),
        }
    }
}

/// Whether candidate `i` is non-redundant in the mountain.
pub fn is_relevant(sys: &FineSystem, i: usize) -> bool {
    !lp::is_redundant(&sys.mountain().constraints, i)
}

/// `P^{F(s)}`, or `None` when empty.
pub fn fine_adjoint(p: &Polytope, s: &Rational) -> Result<Option<Polytope>> {
    if !s.is_positive() {
        return Err(Error::InvalidArgument(format!("adjoint parameter must be positive, got {s}")));
    }
    let sys = relevant_candidates(p)?;
    let vertices = lp::vertices_of(&sys.adjoint_constraints(s))?;
    Ok((!vertices.is_empty()).then(|| Polytope::from_vertices_unchecked(p.ambient_dim(), vertices)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FineProfile {
    #[serde(rename = "nF", with = "crate::exact::rational_string")]
    pub fine_number: Rational,
    #[serde(rename = "muF", with = "crate::exact::rational_string")]
    pub mu_f: Rational,
    pub core_dim: usize,
    pub core_vertices: Vec<QVector>,
    pub core_normals: Vec<QVector>,
}

pub fn fine_profile(p: &Polytope) -> Result<FineProfile> {
    profile_of_system(&relevant_candidates(p)?)
}

pub fn mu_f(p: &Polytope) -> Result<Rational> {
    Ok(fine_profile(p)?.mu_f)
}

/// Profile computed from an explicit candidate system.
pub fn profile_of_system(sys: &FineSystem) -> Result<FineProfile> {
    let d = sys.dim();
    let (n_f, apex) = sys.mountain().height()?;
    if !n_f.is_positive() {
        return Err(Error::NotFullDim { dim: sys.base.dim(), ambient: d });
    }
    let x_star = QVector::new(apex[..d].to_vec());
    let core = sys.adjoint_constraints(&n_f);

    // `a` is a core normal iff `<a, x>` is constant on the core. The minimum is
    // `h(a) + n^F` by construction, so only the maximum needs checking; a
    // core point off the hyperplane rules `a` out at once.
    let mut normal_rows = Vec::new();
    for (i, cand) in sys.candidates.iter().enumerate() {
        let level = &cand.rhs + &n_f;
        if cand.normal.dot(&x_star) != level {
            continue;
        }
        match lp::maximize(&core, &cand.normal) {
            LpOutcome::Optimal { value, .. } if value == level => normal_rows.push(i),
            LpOutcome::Optimal { .. } => {}
            _ => unreachable!("the core is a nonempty polytope"),
        }
    }
    let core_vertices = lp::vertices_with_equalities(&core, &normal_rows)?;
    let core_dim = affine_rank(&core_vertices).expect("nonempty core");
    let core_normals: Vec<QVector> = normal_rows.iter().map(|&i| sys.candidates[i].normal.clone()).collect();
    debug_assert_eq!(
        core_dim,
        d - QMatrix::new(core_normals.clone(), d).map(|m| m.rank()).unwrap_or(0)
    );
    Ok(FineProfile { mu_f: n_f.recip(), fine_number: n_f, core_dim, core_vertices, core_normals })
}

#[cfg(test)]
mod tests;
