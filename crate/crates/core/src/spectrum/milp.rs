//! Branch-and-bound for the MILP family that searches for polytopes with a
//! prescribed configuration of Fine core normals.
//!
//! Variables, in order: `b` (one per normal, `b_i = <a_i, u_i>`), the support
//! points `u_1, ..., u_n` row-major, the core point `p`, and `n^F`. Integral
//! `u` forces integral `b`, and `b` alone determines the Fine number, so
//! branching visits `b` first.

use std::collections::HashMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::NormalConfiguration;
use crate::error::{Error, Result};
use crate::exact::{QVector, Rational};
use crate::fine::fine_profile;
use crate::geometry::Polytope;
use crate::lp::{self, Constraints, LpOutcome, Sense};

#[derive(Clone, Debug)]
pub struct MilpInstance {
    pub config: NormalConfiguration,
    /// `L <= n^F`.
    pub lower: Rational,
    /// `n^F <= U`.
    pub upper: Rational,
    pub sense: Sense,
    /// Box `R` with `-R <= u_i <= R` coordinatewise.
    pub box_bound: i64,
    /// Accept only solutions whose integer hull really has the configured
    /// normals as Fine core normals and the same Fine number.
    pub verify: bool,
}

impl MilpInstance {
    pub fn new(config: NormalConfiguration, lower: Rational, upper: Rational, sense: Sense) -> Self {
        let box_bound = super::default_box(config.dim);
        MilpInstance { config, lower, upper, sense, box_bound, verify: true }
    }

    pub fn with_box(mut self, r: i64) -> Self {
        self.box_bound = r;
        self
    }

    pub fn with_verification(mut self, verify: bool) -> Self {
        self.verify = verify;
        self
    }
}

#[derive(Clone, Debug)]
pub struct MilpWitness {
    pub fine_number: Rational,
    pub core_point: QVector,
    /// The integer points `u_i` with `<a_i, u_i> = b_i`.
    pub support_points: Vec<QVector>,
    pub support_values: Vec<BigInt>,
    /// Integer hull of `{x : <a_i, x> >= b_i}`; present when verified.
    pub polytope: Option<Polytope>,
    pub verified: bool,
    /// Some `u_i` touches the box, so a larger box might do better.
    pub at_box_boundary: bool,
    pub nodes: usize,
}

impl MilpWitness {
    /// Vertices of the witness polytope, or the support points when the
    /// polytope was not built.
    pub fn witness_vertices(&self) -> Vec<QVector> {
        match &self.polytope {
            Some(p) => p.vertices().to_vec(),
            None => self.support_points.iter().cloned().sorted().dedup().collect(),
        }
    }

    pub fn mu_f(&self) -> Rational {
        self.fine_number.recip()
    }
}

#[derive(Clone, Debug)]
pub enum MilpResult {
    Optimal(MilpWitness),
    Infeasible,
}

impl MilpResult {
    pub fn witness(&self) -> Option<&MilpWitness> {
        match self {
            MilpResult::Optimal(w) => Some(w),
            MilpResult::Infeasible => None,
        }
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, MilpResult::Infeasible)
    }
}

/// Integer hull of `{x : <a_i, x> >= b_i}`, or `None` when it has no
/// lattice points.
pub fn integer_hull(normals: &[Vec<i64>], rhs: &[BigInt]) -> Result<Option<Polytope>> {
    let d = normals.first().map_or(0, Vec::len);
    let mut c = Constraints::new(d);
    for (a, b) in normals.iter().zip(rhs) {
        c.push(QVector::from_ints(a), Rational::from_integer(b.clone()));
    }
    let vertices = lp::vertices_of(&c)?;
    if vertices.is_empty() {
        return Ok(None);
    }
    let rhs: Vec<i64> = rhs
        .iter()
        .map(|b| b.to_i64().ok_or_else(|| Error::Unsupported("support value exceeds i64".into())))
        .collect::<Result<_>>()?;
    let ranges: Vec<std::ops::RangeInclusive<i64>> = (0..d)
        .map(|j| {
            let lo = vertices.iter().map(|v| v[j].ceil().to_integer()).min().unwrap();
            let hi = vertices.iter().map(|v| v[j].floor().to_integer()).max().unwrap();
            lo.to_i64().unwrap()..=hi.to_i64().unwrap()
        })
        .collect();
    let points: Vec<QVector> = ranges
        .into_iter()
        .multi_cartesian_product()
        .filter(|x| normals.iter().zip(&rhs).all(|(a, b)| a.iter().zip(x).map(|(p, q)| p * q).sum::<i64>() >= *b))
        .map(|x| QVector::from_ints(&x))
        .collect();
    if points.is_empty() {
        return Ok(None);
    }
    Polytope::from_points(d, points).map(Some)
}

struct Layout {
    n: usize,
    d: usize,
}

impl Layout {
    fn b(&self, i: usize) -> usize {
        i
    }
    fn u(&self, j: usize, k: usize) -> usize {
        self.n + j * self.d + k
    }
    fn p(&self, k: usize) -> usize {
        self.n + self.n * self.d + k
    }
    fn nf(&self) -> usize {
        self.n + self.n * self.d + self.d
    }
    fn total(&self) -> usize {
        self.nf() + 1
    }
    fn integers(&self) -> usize {
        self.n + self.n * self.d
    }
}

#[derive(Clone)]
struct Node {
    lo: Vec<Option<BigInt>>,
    hi: Vec<Option<BigInt>>,
}

struct Relaxed {
    node: Node,
    value: Rational,
    point: QVector,
}

struct Solver<'a> {
    inst: &'a MilpInstance,
    layout: Layout,
    base: Constraints,
    objective: QVector,
    cache: HashMap<Vec<BigInt>, bool>,
    nodes: usize,
}

impl<'a> Solver<'a> {
    fn new(inst: &'a MilpInstance) -> Self {
        let a = &inst.config.normals;
        let layout = Layout { n: a.len(), d: inst.config.dim };
        let total = layout.total();
        let r = Rational::from_integer(inst.box_bound.into());
        let mut c = Constraints::new(total);
        let row = |entries: &[(usize, Rational)]| {
            let mut v = QVector::zeros(total);
            for (i, x) in entries {
                v[*i] += x;
            }
            v
        };
        let q = |x: i64| Rational::from_integer(x.into());
        for (i, ai) in a.iter().enumerate() {
            for j in 0..layout.n {
                let mut entries: Vec<(usize, Rational)> = (0..layout.d).map(|k| (layout.u(j, k), q(ai[k]))).collect();
                entries.push((layout.b(i), -Rational::one()));
                if i == j {
                    c.push_equality(row(&entries), Rational::zero());
                } else {
                    c.push(row(&entries), Rational::zero());
                }
            }
            let mut entries: Vec<(usize, Rational)> = (0..layout.d).map(|k| (layout.p(k), q(ai[k]))).collect();
            entries.push((layout.nf(), -Rational::one()));
            entries.push((layout.b(i), -Rational::one()));
            c.push_equality(row(&entries), Rational::zero());
            let reach = &r * q(ai.iter().map(|x| x.abs()).sum());
            c.push(row(&[(layout.b(i), Rational::one())]), -reach.clone());
            c.push(row(&[(layout.b(i), -Rational::one())]), -reach);
        }
        for j in 0..layout.n {
            for k in 0..layout.d {
                c.push(row(&[(layout.u(j, k), Rational::one())]), -r.clone());
                c.push(row(&[(layout.u(j, k), -Rational::one())]), -r.clone());
            }
        }
        for k in 0..layout.d {
            c.push(row(&[(layout.p(k), Rational::one())]), Rational::zero());
            c.push(row(&[(layout.p(k), -Rational::one())]), -Rational::one());
        }
        c.push(row(&[(layout.nf(), Rational::one())]), inst.lower.clone());
        c.push(row(&[(layout.nf(), -Rational::one())]), -inst.upper.clone());
        let sign = if inst.sense == Sense::Maximize { Rational::one() } else { -Rational::one() };
        let objective = row(&[(layout.nf(), sign)]);
        Solver { inst, layout, base: c, objective, cache: HashMap::new(), nodes: 0 }
    }

    fn relax(&mut self, node: Node) -> Option<Relaxed> {
        self.nodes += 1;
        let total = self.layout.total();
        let mut c = self.base.clone();
        for (i, (lo, hi)) in node.lo.iter().zip(&node.hi).enumerate() {
            if let Some(lo) = lo {
                c.push(QVector::unit(total, i), Rational::from_integer(lo.clone()));
            }
            if let Some(hi) = hi {
                c.push(QVector::unit(total, i).neg(), -Rational::from_integer(hi.clone()));
            }
        }
        match lp::maximize(&c, &self.objective) {
            LpOutcome::Optimal { value, point } => Some(Relaxed { node, value, point }),
            LpOutcome::Infeasible => None,
            LpOutcome::Unbounded => unreachable!("every variable is boxed"),
        }
    }

    fn first_fractional(&self, x: &QVector) -> Option<usize> {
        (0..self.layout.integers()).find(|&i| !x[i].is_integer())
    }

    fn support_values(&self, x: &QVector) -> Vec<BigInt> {
        (0..self.layout.n).map(|i| x[self.layout.b(i)].to_integer()).collect()
    }

    fn check(&mut self, b: &[BigInt], fine_number: &Rational) -> Result<Option<Polytope>> {
        if self.cache.get(b) == Some(&false) {
            return Ok(None);
        }
        let Some(q) = integer_hull(&self.inst.config.normals, b)? else {
            self.cache.insert(b.to_vec(), false);
            return Ok(None);
        };
        let ok = q.is_full_dimensional() && {
            let profile = fine_profile(&q)?;
            &profile.fine_number == fine_number
                && self.inst.config.vectors().iter().all(|a| profile.core_normals.contains(a))
        };
        self.cache.insert(b.to_vec(), ok);
        Ok(ok.then_some(q))
    }

    fn witness(&self, x: &QVector, polytope: Option<Polytope>) -> MilpWitness {
        let l = &self.layout;
        let support_points: Vec<QVector> =
            (0..l.n).map(|j| (0..l.d).map(|k| x[l.u(j, k)].clone()).collect()).collect();
        let r = Rational::from_integer(self.inst.box_bound.into());
        let at_box_boundary = support_points.iter().any(|u| u.iter().any(|c| c.abs() == r));
        MilpWitness {
            fine_number: x[l.nf()].clone(),
            core_point: (0..l.d).map(|k| x[l.p(k)].clone()).collect(),
            support_values: self.support_values(x),
            support_points,
            verified: polytope.is_some(),
            polytope,
            at_box_boundary,
            nodes: self.nodes,
        }
    }

    fn push_sorted(stack: &mut Vec<Relaxed>, mut children: Vec<Relaxed>) {
        // best child ends on top of the stack
        children.sort_by(|x, y| x.value.cmp(&y.value));
        stack.extend(children);
    }

    fn run(&mut self) -> Result<MilpResult> {
        let width = self.layout.integers();
        let root = Node { lo: vec![None; width], hi: vec![None; width] };
        let mut stack: Vec<Relaxed> = self.relax(root).into_iter().collect();
        let mut best: Option<(Rational, MilpWitness)> = None;
        while let Some(cur) = stack.pop() {
            if best.as_ref().is_some_and(|(v, _)| &cur.value <= v) {
                continue;
            }
            if let Some(i) = self.first_fractional(&cur.point) {
                let f = cur.point[i].floor().to_integer();
                let mut down = cur.node.clone();
                down.hi[i] = Some(f.clone());
                let mut up = cur.node.clone();
                up.lo[i] = Some(f + 1);
                let children = [down, up].into_iter().filter_map(|n| self.relax(n)).collect();
                Self::push_sorted(&mut stack, children);
                continue;
            }
            let b = self.support_values(&cur.point);
            let fine_number = cur.point[self.layout.nf()].clone();
            let polytope = if self.inst.verify { self.check(&b, &fine_number)? } else { None };
            if !self.inst.verify || polytope.is_some() {
                let w = self.witness(&cur.point, polytope);
                best = Some((cur.value, w));
                continue;
            }
            // Rejected support values: split them off the node.
            let Some(j) = (0..self.layout.n).find(|&j| cur.node.lo[j].is_none() || cur.node.lo[j] != cur.node.hi[j])
            else {
                continue;
            };
            let bj = b[j].clone();
            let mut below = cur.node.clone();
            below.hi[j] = Some(&bj - 1);
            let mut above = cur.node.clone();
            above.lo[j] = Some(&bj + 1);
            let mut fixed = cur.node.clone();
            fixed.lo[j] = Some(bj.clone());
            fixed.hi[j] = Some(bj);
            let children = [below, above, fixed].into_iter().filter_map(|n| self.relax(n)).collect();
            Self::push_sorted(&mut stack, children);
        }
        Ok(match best {
            Some((_, mut w)) => {
                w.nodes = self.nodes;
                MilpResult::Optimal(w)
            }
            None => MilpResult::Infeasible,
        })
    }
}

/// Exact branch-and-bound. Integrality is enforced on `b` and `u`; `p` and
/// `n^F` stay rational.
pub fn milp_solve(inst: &MilpInstance) -> Result<MilpResult> {
    if inst.box_bound < 1 {
        return Err(Error::InvalidArgument(format!("box bound must be at least 1, got {}", inst.box_bound)));
    }
    inst.config.validate()?;
    if inst.config.is_empty() {
        return Err(Error::InvalidArgument("empty configuration".into()));
    }
    if inst.lower > inst.upper {
        return Ok(MilpResult::Infeasible);
    }
    if !inst.upper.is_positive() {
        return Ok(MilpResult::Infeasible);
    }
    Solver::new(inst).run()
}
