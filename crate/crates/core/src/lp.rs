//! Exact rational linear programming over systems `<a_i, x> >= b_i` with free
//! variables.
//!
//! The solver works on the dual standard form `max b.y s.t. A^T y = c,
//! y >= 0`, whose tableau has one row per primal variable. Primal systems here
//! have few variables and many rows, so this keeps pivots cheap. An optimal
//! dual basis names `n` tight primal rows, and the primal optimum is recovered
//! by solving that square system. Bland's rule is used throughout.

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{QMatrix, QVector, Rational};

/// A system of inequalities `<a_i, x> >= b_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraints {
    normals: Vec<QVector>,
    rhs: Vec<Rational>,
    dim: usize,
}

impl Constraints {
    pub fn new(dim: usize) -> Self {
        Constraints { normals: Vec::new(), rhs: Vec::new(), dim }
    }

    pub fn from_parts(normals: QMatrix, rhs: QVector) -> Result<Self> {
        if normals.nrows() != rhs.dim() {
            return Err(Error::DimensionMismatch { expected: normals.nrows(), found: rhs.dim() });
        }
        let dim = normals.ncols();
        Ok(Constraints { normals: normals.into_rows(), rhs: rhs.into_inner(), dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    pub fn normal(&self, i: usize) -> &QVector {
        &self.normals[i]
    }

    pub fn rhs(&self, i: usize) -> &Rational {
        &self.rhs[i]
    }

    pub fn push(&mut self, normal: QVector, rhs: Rational) {
        assert_eq!(normal.dim(), self.dim, "constraint dimension");
        self.normals.push(normal);
        self.rhs.push(rhs);
    }

    /// Adds `<a, x> = b` as two opposite inequalities.
    pub fn push_equality(&mut self, normal: QVector, rhs: Rational) {
        self.push(normal.neg(), -rhs.clone());
        self.push(normal, rhs);
    }

    pub fn without(&self, i: usize) -> Constraints {
        let mut out = Constraints::new(self.dim);
        for k in (0..self.len()).filter(|&k| k != i) {
            out.push(self.normals[k].clone(), self.rhs[k].clone());
        }
        out
    }

    pub fn is_satisfied_by(&self, x: &QVector) -> bool {
        self.normals.iter().zip(&self.rhs).all(|(a, b)| &a.dot(x) >= b)
    }

    pub fn normals_matrix(&self) -> QMatrix {
        QMatrix::new(self.normals.clone(), self.dim).expect("rows share the system dimension")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub constraints: Constraints,
    pub objective: QVector,
    pub sense: Sense,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, point: QVector },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal { .. } => LpStatus::Optimal,
            LpOutcome::Infeasible => LpStatus::Infeasible,
            LpOutcome::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&QVector> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

pub fn solve(lp: &LinearProgram) -> LpOutcome {
    let c = match lp.sense {
        Sense::Minimize => lp.objective.clone(),
        Sense::Maximize => lp.objective.neg(),
    };
    match minimize(&lp.constraints, &c) {
        LpOutcome::Optimal { value, point } => {
            let value = if lp.sense == Sense::Maximize { -value } else { value };
            LpOutcome::Optimal { value, point }
        }
        other => other,
    }
}

pub fn maximize(constraints: &Constraints, objective: &QVector) -> LpOutcome {
    solve(&LinearProgram { constraints: constraints.clone(), objective: objective.clone(), sense: Sense::Maximize })
}

/// A point satisfying the system, if there is one.
pub fn feasible_point(constraints: &Constraints) -> Option<QVector> {
    minimize(constraints, &QVector::zeros(constraints.dim())).point().cloned()
}

pub fn is_feasible(constraints: &Constraints) -> bool {
    feasible_point(constraints).is_some()
}

/// Whether row `i` is implied by the remaining rows.
pub fn is_redundant(constraints: &Constraints, i: usize) -> bool {
    let rest = constraints.without(i);
    match minimize(&rest, constraints.normal(i)) {
        LpOutcome::Optimal { value, .. } => &value >= constraints.rhs(i),
        LpOutcome::Infeasible => true,
        LpOutcome::Unbounded => false,
    }
}

/// Vertices of a bounded system, by enumeration of `dim`-subsets of rows.
pub fn vertices_of(constraints: &Constraints) -> Result<Vec<QVector>> {
    vertices_with_equalities(constraints, &[])
}

/// Vertex enumeration when some rows are known to hold with equality on the
/// whole polyhedron. Those rows fix the affine hull, so only the remaining
/// `dim - rank` tight rows have to be enumerated.
pub fn vertices_with_equalities(constraints: &Constraints, equalities: &[usize]) -> Result<Vec<QVector>> {
    let n = constraints.dim();
    let Some(anchor) = feasible_point(constraints) else {
        return Ok(Vec::new());
    };
    if !is_bounded(constraints) {
        return Err(Error::Unbounded);
    }

    let mut fixed: Vec<usize> = Vec::new();
    let mut fixed_rows: Vec<QVector> = Vec::new();
    for &i in equalities {
        let mut trial = fixed_rows.clone();
        trial.push(constraints.normal(i).clone());
        if QMatrix::new(trial.clone(), n)?.rank() == trial.len() {
            fixed.push(i);
            fixed_rows = trial;
        }
    }
    let free = n - fixed.len();
    if free == 0 {
        let m = QMatrix::new(fixed_rows, n)?;
        let rhs: QVector = fixed.iter().map(|&i| constraints.rhs(i).clone()).collect();
        let x = m.solve(&rhs).expect("independent equalities");
        debug_assert!(constraints.is_satisfied_by(&x));
        return Ok(vec![x]);
    }
    if fixed.is_empty() && constraints.is_empty() {
        return Ok(vec![anchor]);
    }

    let others: Vec<usize> = (0..constraints.len()).filter(|i| !fixed.contains(i)).collect();
    let mut found = std::collections::BTreeSet::new();
    for subset in others.iter().copied().combinations(free) {
        let rows: Vec<usize> = fixed.iter().copied().chain(subset).collect();
        let m = QMatrix::new(rows.iter().map(|&i| constraints.normal(i).clone()).collect(), n)?;
        let rhs: QVector = rows.iter().map(|&i| constraints.rhs(i).clone()).collect();
        if let Some(x) = m.solve(&rhs) {
            if constraints.is_satisfied_by(&x) {
                found.insert(x);
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Whether the system's feasible set is bounded (assumes it is nonempty).
pub fn is_bounded(constraints: &Constraints) -> bool {
    let n = constraints.dim();
    (0..n).all(|j| {
        let e = QVector::unit(n, j);
        matches!(minimize(constraints, &e), LpOutcome::Optimal { .. })
            && matches!(minimize(constraints, &e.neg()), LpOutcome::Optimal { .. })
    })
}

/// `min c.x s.t. A x >= b`.
fn minimize(constraints: &Constraints, c: &QVector) -> LpOutcome {
    let n = constraints.dim();
    let a = constraints.normals_matrix();
    let (_, pivots) = a.rref();
    if pivots.len() < n {
        // The system has a lineality space. Either the objective moves along
        // it, or the non-pivot variables can be pinned to zero.
        let along_lineality = a.nullspace().iter().any(|v| !c.dot(v).is_zero());
        let reduced_c: QVector = pivots.iter().map(|&j| c[j].clone()).collect();
        let reduced = restrict_columns(constraints, &pivots);
        let inner = minimize_full_rank(&reduced, &if along_lineality { QVector::zeros(pivots.len()) } else { reduced_c });
        return match inner {
            LpOutcome::Optimal { value, point } => {
                if along_lineality {
                    return LpOutcome::Unbounded;
                }
                let mut x = QVector::zeros(n);
                for (k, &j) in pivots.iter().enumerate() {
                    x[j] = point[k].clone();
                }
                LpOutcome::Optimal { value, point: x }
            }
            other => other,
        };
    }
    minimize_full_rank(constraints, c)
}

fn restrict_columns(constraints: &Constraints, cols: &[usize]) -> Constraints {
    let mut out = Constraints::new(cols.len());
    for i in 0..constraints.len() {
        out.push(cols.iter().map(|&j| constraints.normal(i)[j].clone()).collect(), constraints.rhs(i).clone());
    }
    out
}

/// `min c.x s.t. A x >= b` where `A` has full column rank.
fn minimize_full_rank(constraints: &Constraints, c: &QVector) -> LpOutcome {
    let n = constraints.dim();
    let m = constraints.len();
    if n == 0 {
        return if constraints.rhs.iter().all(|b| !b.is_positive()) {
            LpOutcome::Optimal { value: Rational::zero(), point: QVector::zeros(0) }
        } else {
            LpOutcome::Infeasible
        };
    }
    // Dual: min (-b).y s.t. A^T y = c, y >= 0.
    let rows: Vec<Vec<Rational>> =
        (0..n).map(|j| (0..m).map(|i| constraints.normal(i)[j].clone()).collect()).collect();
    let cost: Vec<Rational> = constraints.rhs.iter().map(|b| -b.clone()).collect();
    match standard_simplex(rows, c.to_vec(), &cost) {
        StandardOutcome::Optimal { basis } => {
            let a_b = QMatrix::new(basis.iter().map(|&i| constraints.normal(i).clone()).collect(), n)
                .expect("basis rows share the dimension");
            let b_b: QVector = basis.iter().map(|&i| constraints.rhs(i).clone()).collect();
            let x = a_b.solve(&b_b).expect("optimal dual basis is nonsingular");
            debug_assert!(constraints.is_satisfied_by(&x));
            let value = c.dot(&x);
            LpOutcome::Optimal { value, point: x }
        }
        StandardOutcome::Unbounded => LpOutcome::Infeasible,
        StandardOutcome::Infeasible => {
            // Dual infeasible: primal is unbounded or infeasible.
            let zero = QVector::zeros(n);
            match minimize_full_rank(constraints, &zero) {
                LpOutcome::Optimal { .. } => LpOutcome::Unbounded,
                _ => LpOutcome::Infeasible,
            }
        }
    }
}

enum StandardOutcome {
    Optimal { basis: Vec<usize> },
    Infeasible,
    Unbounded,
}

/// Dense tableau for `min cost.y s.t. M y = rhs, y >= 0`, two phases with
/// artificial columns appended after the structural ones.
struct Tableau {
    /// Each row holds the structural and artificial coefficients, then the rhs.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    structural: usize,
}

impl Tableau {
    fn rhs_col(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len() - 1)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs Bland's rule over columns `< allowed`; `Ok(())` at optimum,
    /// `Err(())` when unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> std::result::Result<(), ()> {
        let rhs = self.rhs_col();
        loop {
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut reduced = cost[j].clone();
                for (row, &bj) in self.rows.iter().zip(&self.basis) {
                    if !row[j].is_zero() && !cost[bj].is_zero() {
                        reduced -= &cost[bj] * &row[j];
                    }
                }
                reduced.is_negative()
            });
            let Some(j) = entering else { return Ok(()) };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[j].is_positive() {
                    let ratio = &row[rhs] / &row[j];
                    let better = match &leave {
                        None => true,
                        Some((k, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else { return Err(()) };
            self.pivot(r, j);
        }
    }
}

fn standard_simplex(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>, cost: &[Rational]) -> StandardOutcome {
    let r = m.len();
    let n = cost.len();
    for (row, b) in m.iter_mut().zip(rhs.iter_mut()) {
        if b.is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
            *b = -b.clone();
        }
    }
    let rows = m
        .into_iter()
        .zip(rhs)
        .enumerate()
        .map(|(i, (row, b))| {
            let mut full = row;
            full.extend((0..r).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
            full.push(b);
            full
        })
        .collect();
    let mut t = Tableau { rows, basis: (n..n + r).collect(), structural: n };

    let phase1: Vec<Rational> =
        (0..n + r).map(|j| if j >= n { Rational::one() } else { Rational::zero() }).collect();
    t.optimize(&phase1, n + r).expect("phase one is bounded below");
    let rhs_col = t.rhs_col();
    let infeasibility: Rational =
        t.rows.iter().zip(&t.basis).filter(|(_, &b)| b >= n).map(|(row, _)| row[rhs_col].clone()).sum();
    if infeasibility.is_positive() {
        return StandardOutcome::Infeasible;
    }
    // Drive zero-valued artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                t.pivot(i, j);
            } else {
                t.rows.remove(i);
                t.basis.remove(i);
                continue;
            }
        }
        i += 1;
    }
    let mut phase2 = cost.to_vec();
    phase2.extend((0..r).map(|_| Rational::zero()));
    match t.optimize(&phase2, t.structural) {
        Ok(()) => StandardOutcome::Optimal { basis: t.basis },
        Err(()) => StandardOutcome::Unbounded,
    }
}
