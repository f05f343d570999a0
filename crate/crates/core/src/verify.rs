//! Executable checks of the classification results, grouped into suites.
//!
//! Every check compares exact rationals. A check that errors counts as a
//! failure and carries the error in its detail.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::{configs_3d, numerator_bound, pyramid_corpus};
use crate::error::{Error, Result};
use crate::exact::{format_rational, int, rat, QMatrix, QVector, Rational};
use crate::fine::{fine_profile, is_relevant, mu_f, natural_projection, profile_of_system, relevant_candidates};
use crate::geometry::{
    dilate, exceptional_simplex, lawrence_prism, named_polytope, prism, pyramid, standard_simplex, Polytope, NAMED,
};
use crate::lp::Sense;
use crate::spectrum::{
    bordered_determinant, default_box, enumerate_configs_2d, eta, filter_opposing, milp_solve, numerator_candidates,
    realize_numerator, MilpInstance, NormalConfiguration,
};

/// Seed of the randomized instances.
pub const SEED: u64 = 0x5eed_f1e0;
/// Instances per property.
pub const INSTANCES: usize = 50;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }

    fn from_result(name: impl Into<String>, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Check::new(name, passed, detail),
            Err(e) => Check::new(name, false, format!("error: {e}")),
        }
    }

    /// `expected == actual`, reporting both.
    fn equal(name: impl Into<String>, expected: &Rational, actual: Result<Rational>) -> Self {
        Check::from_result(
            name,
            actual.map(|a| (&a == expected, format!("expected {}, got {}", format_rational(expected), format_rational(&a)))),
        )
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Dim1,
    Dim2,
    Dim3,
    Pyramid,
    GeneralD,
    Invariants,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Dim1, Suite::Dim2, Suite::Dim3, Suite::Pyramid, Suite::GeneralD, Suite::Invariants];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Dim1 => "dim1",
            Suite::Dim2 => "dim2",
            Suite::Dim3 => "dim3",
            Suite::Pyramid => "pyramid",
            Suite::GeneralD => "general-d",
            Suite::Invariants => "invariants",
        }
    }

    pub fn run(self) -> Vec<Check> {
        match self {
            Suite::Dim1 => segment_checks(),
            Suite::Dim2 => [planar_checks(), numerator_checks_2d()].concat(),
            Suite::Dim3 => [named_checks(), numerator_checks_3d()].concat(),
            Suite::Pyramid => pyramid_checks(),
            Suite::GeneralD => general_d_checks(),
            Suite::Invariants => [property_checks(SEED, INSTANCES), milp_checks()].concat(),
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}; expected one of {}", Suite::ALL.iter().map(|x| x.name()).join(", "))))
    }
}

fn segment(k: i64) -> Polytope {
    Polytope::from_int_points(&[&[0], &[k]]).expect("segment")
}

fn unit_square() -> Polytope {
    Polytope::from_int_points(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).expect("square")
}

fn polygon(points: &[(i64, i64)]) -> Result<Polytope> {
    Polytope::from_points(2, points.iter().map(|&(x, y)| QVector::from_ints(&[x, y])))
}

fn show(set: &BTreeSet<u64>) -> String {
    format!("{{{}}}", set.iter().join(","))
}

/// `mu^F([0, k]) = 2/k`.
pub fn segment_checks() -> Vec<Check> {
    (1..=8).map(|k| Check::equal(format!("segment [0,{k}]"), &rat(2, k), mu_f(&segment(k)))).collect()
}

/// Whether `mu` is `2/k` or `3/k` for a positive integer `k`.
fn in_planar_spectrum(mu: &Rational) -> bool {
    mu.is_positive() && [2, 3].iter().any(|&q| (int(q) / mu).is_integer())
}

/// Dilated simplices and squares, and the whole `[0,3]^2` corpus.
pub fn planar_checks() -> Vec<Check> {
    let mut checks = Vec::new();
    for k in 1..=6 {
        checks.push(Check::equal(format!("{k}*Delta_2"), &rat(3, k), dilate(&standard_simplex(2), &int(k)).and_then(|p| mu_f(&p))));
        checks.push(Check::equal(format!("{k}*square"), &rat(2, k), dilate(&unit_square(), &int(k)).and_then(|p| mu_f(&p))));
    }
    let corpus = crate::spectrum::planar::polygons_in_box(3);
    let result = corpus
        .iter()
        .map(|h| polygon(h).and_then(|p| mu_f(&p)))
        .collect::<Result<Vec<_>>>()
        .map(|mus| {
            let bad: Vec<String> = mus.iter().filter(|m| !in_planar_spectrum(m)).map(format_rational).collect();
            let values: BTreeSet<Rational> = mus.into_iter().collect();
            (bad.is_empty(), format!("{} polygons, {} distinct values, outside {{2/k, 3/k}}: {:?}", corpus.len(), values.len(), bad))
        });
    checks.push(Check::from_result("corpus [0,3]^2", result));
    checks
}

/// The six named three-dimensional polytopes.
pub fn named_checks() -> Vec<Check> {
    let expected = [rat(5, 2), rat(7, 6), rat(11, 60), rat(13, 240), rat(17, 420), rat(19, 840)];
    NAMED
        .iter()
        .zip(expected)
        .map(|(name, want)| Check::equal(*name, &want, mu_f(&named_polytope(name).expect("named polytope"))))
        .collect()
}

pub fn numerator_checks_2d() -> Vec<Check> {
    let configs = enumerate_configs_2d();
    let survivors = filter_opposing(&configs);
    let bound = numerator_bound(2);
    vec![
        Check::new("reflexive configurations", configs.len() == 16, format!("{} configurations", configs.len())),
        Check::new(
            "opposing filter",
            survivors.len() == 1 && survivors[0].is_positively_spanning() && survivors[0].len() == 3,
            format!("{} survivor(s): {:?}", survivors.len(), survivors.iter().map(|c| &c.normals).collect::<Vec<_>>()),
        ),
        Check::from_result("I_2", bound.map(|b| (b == BTreeSet::from([2, 3]), format!("expected {{2,3}}, got {}", show(&b))))),
    ]
}

pub fn numerator_checks_3d() -> Vec<Check> {
    let configs = configs_3d();
    let listed: Vec<u64> = vec![19, 17, 11, 13, 20, 7, 5, 4];
    let mut checks = Vec::new();
    let per_config: Result<Vec<(u64, u64)>> =
        configs.iter().map(|c| Ok((bordered_determinant(&c.matrix())?, eta(&c.matrix())?))).collect();
    checks.push(Check::from_result(
        "3D configurations in order",
        per_config.map(|v| {
            let dets: Vec<u64> = v.iter().map(|x| x.0).collect();
            (dets == listed, format!("|det[A|-1]| = {dets:?}, eta = {:?}", v.iter().map(|x| x.1).collect::<Vec<_>>()))
        }),
    ));
    let candidates = numerator_candidates(&configs);
    let want: BTreeSet<u64> = listed.iter().copied().collect();
    checks.push(Check::new("3D numerator candidates", candidates == want, format!("expected {}, got {}", show(&want), show(&candidates))));
    let a20 = configs.iter().find(|c| c.id.as_deref() == Some("A20")).expect("bundled A20");
    checks.push(Check::from_result(
        "A20 reduces to 4",
        eta(&a20.matrix()).map(|e| (e == 4, format!("eta = {e}, minors share the factor 5"))),
    ));
    checks
}

/// `mu^F(Pyr(P)) = max{2, mu^F(P) + 1}` over the bundled polygons, plus the
/// two rational segments.
pub fn pyramid_checks() -> Vec<Check> {
    let mut checks: Vec<Check> = pyramid_corpus()
        .into_iter()
        .map(|(id, p)| {
            let r = (|| {
                let base = mu_f(&p)?;
                let want = std::cmp::max(int(2), &base + int(1));
                let got = mu_f(&pyramid(&p))?;
                Ok((got == want, format!("mu(P) = {}, mu(Pyr P) = {}", format_rational(&base), format_rational(&got))))
            })();
            Check::from_result(format!("pyramid {id}"), r)
        })
        .collect();
    for (name, a, b, want) in [("Pyr(S_1)", rat(-1, 5), rat(2, 5), rat(10, 3)), ("Pyr(S_2)", rat(1, 5), rat(4, 5), int(3))] {
        let s = Polytope::from_points(1, [QVector::new(vec![a]), QVector::new(vec![b])]);
        checks.push(Check::equal(name, &want, s.and_then(|s| mu_f(&pyramid(&s)))));
    }
    checks
}

/// Full-dimensional hulls of subsets of the unit cube, then seeded random
/// lattice polytopes in `[0,2]^3`, with duplicate vertex sets removed.
pub fn small_corpus_3d(seed: u64, random: usize) -> Vec<Polytope> {
    let cube: Vec<QVector> = (0..8).map(|i| QVector::from_ints(&[i & 1, (i >> 1) & 1, (i >> 2) & 1])).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut keep = |p: Polytope| {
        if p.is_full_dimensional() && seen.insert(p.vertices().to_vec()) {
            out.push(p);
        }
    };
    for size in 4..=8 {
        for subset in cube.iter().cloned().combinations(size) {
            keep(Polytope::from_points(3, subset).expect("cube subset"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        let n = rng.gen_range(4..=6);
        let pts: Vec<QVector> = (0..n).map(|_| QVector::from_ints(&[rng.gen_range(0..=2), rng.gen_range(0..=2), rng.gen_range(0..=2)])).collect();
        keep(Polytope::from_points(3, pts).expect("random points"));
    }
    out
}

/// The three extremal families for `d = 2..5`, and the gaps above `d - 1`
/// over a small three-dimensional corpus.
pub fn general_d_checks() -> Vec<Check> {
    let mut checks = Vec::new();
    for d in 2..=5usize {
        let di = d as i64;
        checks.push(Check::equal(format!("Delta_{d}"), &int(di + 1), mu_f(&standard_simplex(d))));
        checks.push(Check::equal(
            format!("exceptional simplex d={d}"),
            &(int(di) - rat(1, 2)),
            exceptional_simplex(d).and_then(|p| mu_f(&p)),
        ));
        let mut heights = vec![1u32; d];
        heights[0] = 2;
        checks.push(Check::equal(format!("Lawrence prism {heights:?}"), &int(di), lawrence_prism(&heights).and_then(|p| mu_f(&p))));
    }
    let corpus = small_corpus_3d(SEED, 40);
    let d = int(3);
    let half = rat(1, 2);
    let gaps = [(&d - int(1), &d - &half), (&d - &half, d.clone()), (d.clone(), &d + int(1))];
    let result = corpus.iter().map(mu_f).collect::<Result<Vec<_>>>().map(|mus| {
        let bad: Vec<String> =
            mus.iter().filter(|m| gaps.iter().any(|(lo, hi)| *m > lo && *m < hi)).map(format_rational).collect();
        let top: BTreeSet<String> = mus.iter().filter(|m| **m > &d - int(1)).map(format_rational).collect();
        (bad.is_empty(), format!("{} polytopes, values above 2: {top:?}, inside a gap: {bad:?}", corpus.len()))
    });
    checks.push(Check::from_result("gaps above d-1 in d=3", result));
    checks
}

/// A random full-dimensional lattice polygon with 3 to 6 points in `[0,4]^2`.
pub fn random_polygon(rng: &mut ChaCha8Rng) -> Polytope {
    loop {
        let n = rng.gen_range(3..=6);
        let pts: Vec<QVector> = (0..n).map(|_| QVector::from_ints(&[rng.gen_range(0..=4), rng.gen_range(0..=4)])).collect();
        let p = Polytope::from_points(2, pts).expect("random points");
        if p.is_full_dimensional() {
            return p;
        }
    }
}

/// Runs `property` on `n` seeded polygons; stops at the first failure.
fn property(name: &str, seed: u64, n: usize, mut property: impl FnMut(&Polytope, &mut ChaCha8Rng) -> Result<bool>) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..n {
        let p = random_polygon(&mut rng);
        match property(&p, &mut rng) {
            Ok(true) => {}
            Ok(false) => return Check::new(name, false, format!("instance {i} fails: {:?}", p.vertices())),
            Err(e) => return Check::new(name, false, format!("instance {i}: error {e}")),
        }
    }
    Check::new(name, true, format!("{n} instances"))
}

pub fn property_checks(seed: u64, n: usize) -> Vec<Check> {
    vec![
        property("homogeneity", seed, n, |p, rng| {
            let k = int(rng.gen_range(2..=4));
            Ok(fine_profile(&dilate(p, &k)?)?.fine_number == fine_profile(p)?.fine_number * k)
        }),
        property("monotonicity", seed + 1, n, |p, rng| {
            let mut pts = p.vertices().to_vec();
            pts.push(QVector::from_ints(&[rng.gen_range(-1..=5), rng.gen_range(-1..=5)]));
            let q = Polytope::from_points(2, pts)?;
            Ok(fine_profile(p)?.fine_number <= fine_profile(&q)?.fine_number)
        }),
        property("mu <= codegree", seed + 2, n, |p, _| Ok(mu_f(p)? <= int(p.codegree()? as i64))),
        property("projection inequality", seed + 3, n, |p, rng| {
            let a = loop {
                let (x, y): (i64, i64) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
                if x.gcd(&y) == 1 {
                    break [x, y];
                }
            };
            let image = p.image(&QMatrix::from_ints(&[&a])?)?;
            Ok(mu_f(&image)? <= mu_f(p)?)
        }),
        property("natural projection equality", seed + 4, n, |p, _| {
            let proj = natural_projection(p)?;
            let prof = fine_profile(&proj.polytope)?;
            Ok(prof.mu_f == mu_f(p)? && prof.core_dim == 0)
        }),
        property("prism stability", seed + 5, n, |p, _| {
            let prof = fine_profile(p)?;
            let h = int(2) * prof.fine_number.ceil() + int(1);
            Ok(mu_f(&prism(p, &h)?)? == prof.mu_f)
        }),
        property("core normal closure", seed + 6, n, |p, _| {
            let prof = fine_profile(p)?;
            let hull = Polytope::from_points(2, prof.core_normals.iter().cloned())?;
            Ok(hull.lattice_points().iter().filter(|v| !v.is_zero()).all(|v| prof.core_normals.contains(v)))
        }),
        property("relevance soundness", seed + 7, n, |p, _| {
            let sys = relevant_candidates(p)?;
            let keep: Vec<usize> = (0..sys.candidates.len()).filter(|&i| is_relevant(&sys, i)).collect();
            let full = profile_of_system(&sys)?;
            let reduced = profile_of_system(&sys.restrict(&keep))?;
            Ok(full.fine_number == reduced.fine_number && full.core_vertices == reduced.core_vertices)
        }),
    ]
}

fn config(dim: usize, normals: &[&[i64]]) -> NormalConfiguration {
    NormalConfiguration::new(dim, normals.iter().map(|n| n.to_vec()).collect()).expect("valid configuration")
}

/// Solves an instance and re-checks the witness with `fine_profile`.
fn milp_example(name: &str, inst: MilpInstance, want: Rational) -> Check {
    let r = milp_solve(&inst).and_then(|res| {
        let w = res.witness().cloned().ok_or(Error::MilpInfeasible(inst.box_bound))?;
        let q = w.polytope.as_ref().ok_or_else(|| Error::InvalidArgument("witness without polytope".into()))?;
        let prof = fine_profile(q)?;
        let normals_ok = inst.config.vectors().iter().all(|a| prof.core_normals.contains(a));
        let ok = w.fine_number == want && prof.fine_number == w.fine_number && normals_ok && w.verified;
        Ok((ok, format!("n^F = {}, re-verified n^F = {}", format_rational(&w.fine_number), format_rational(&prof.fine_number))))
    });
    Check::from_result(name, r)
}

pub fn milp_checks() -> Vec<Check> {
    let seg = config(1, &[&[1], &[-1]]);
    let tri = config(2, &[&[1, 0], &[0, 1], &[-1, -1]]);
    let mut checks = vec![
        milp_example("segment max U=3/4", MilpInstance::new(seg.clone(), Rational::zero(), rat(3, 4), Sense::Maximize).with_box(5), rat(1, 2)),
        milp_example("segment min L=1/3", MilpInstance::new(seg, rat(1, 3), int(10), Sense::Minimize).with_box(5), rat(1, 2)),
        milp_example("triangle max U=1", MilpInstance::new(tri.clone(), rat(1, 3), int(1), Sense::Maximize).with_box(6), int(1)),
    ];
    let scan = crate::spectrum::scan_range(&tri, &rat(1, 3), &rat(7, 3), default_box(2)).and_then(|ws| {
        let mut ok = !ws.is_empty();
        for w in &ws {
            let q = w.polytope.as_ref().ok_or_else(|| Error::InvalidArgument("witness without polytope".into()))?;
            let prof = fine_profile(q)?;
            ok &= prof.fine_number == w.fine_number && tri.vectors().iter().all(|a| prof.core_normals.contains(a));
        }
        Ok((ok, format!("{} scan witnesses", ws.len())))
    });
    checks.push(Check::from_result("scan witnesses re-verify", scan));
    let a20 = configs_3d().into_iter().find(|c| c.id.as_deref() == Some("A20")).expect("bundled A20");
    let raw = realize_numerator(&a20.matrix(), default_box(3), false).map(|w| {
        let numer = w.mu_f().numer().clone();
        (BigInt::from(4).is_multiple_of(&numer), format!("raw minimum n^F = {}, numerator of mu^F = {numer}", format_rational(&w.fine_number)))
    });
    checks.push(Check::from_result("A20 numerator divides 4", raw));
    checks
}
