use itertools::Itertools;
use proptest::prelude::*;

use super::*;
use crate::exact::{int, rat};
use crate::geometry::{dilate, exceptional_simplex, prism, pyramid, standard_simplex};

fn poly(points: &[&[i64]]) -> Polytope {
    Polytope::from_int_points(points).unwrap()
}

fn segment(a: Rational, b: Rational) -> Polytope {
    Polytope::from_points(1, [QVector::new(vec![a]), QVector::new(vec![b])]).unwrap()
}

fn normals(sys: &FineSystem) -> Vec<QVector> {
    let mut out: Vec<QVector> = sys.candidates.iter().map(|c| c.normal.clone()).collect();
    out.sort();
    out
}

fn sorted(vs: &[&[i64]]) -> Vec<QVector> {
    let mut out: Vec<QVector> = vs.iter().map(|v| QVector::from_ints(v)).collect();
    out.sort();
    out
}

/// Highest point of the mountain by brute force over its vertices: every
/// `(d+1)`-subset of rows is solved and the feasible solutions compared.
fn oracle_fine_number(sys: &FineSystem) -> Rational {
    let m = sys.mountain().constraints;
    let n = m.dim();
    (0..m.len())
        .combinations(n)
        .filter_map(|rows| {
            let a = QMatrix::new(rows.iter().map(|&i| m.normal(i).clone()).collect(), n).unwrap();
            let b: QVector = rows.iter().map(|&i| m.rhs(i).clone()).collect();
            a.solve(&b)
        })
        .filter(|x| m.is_satisfied_by(x))
        .map(|x| x[n - 1].clone())
        .max()
        .unwrap()
}

#[test]
fn candidate_examples() {
    let tri = standard_simplex(2);
    assert_eq!(normals(&relevant_candidates(&tri).unwrap()), sorted(&[&[1, 0], &[0, 1], &[-1, -1]]));
    let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
    assert_eq!(normals(&relevant_candidates(&sq).unwrap()), sorted(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]));
    let seg = poly(&[&[0], &[2]]);
    let sys = relevant_candidates(&seg).unwrap();
    assert_eq!(normals(&sys), sorted(&[&[1], &[-1]]));
    assert!(sys.candidates.iter().all(|c| c.rhs == c.normal.dot(&QVector::from_ints(&[0])).min(c.normal.dot(&QVector::from_ints(&[2])))));
}

#[test]
fn relevance_examples() {
    let tri = relevant_candidates(&standard_simplex(2)).unwrap();
    assert!((0..3).all(|i| is_relevant(&tri, i)));
    let seg = relevant_candidates(&poly(&[&[0], &[5]])).unwrap();
    assert!((0..2).all(|i| is_relevant(&seg, i)));
    // an explicitly added (1,1) row is implied by x >= s and y >= s
    let rect = poly(&[&[0, 0], &[3, 0], &[0, 1], &[3, 1]]);
    let mut sys = relevant_candidates(&rect).unwrap();
    let extra = QVector::from_ints(&[1, 1]);
    sys.candidates.push(Candidate { rhs: rect.support(&extra), normal: extra });
    assert!(!is_relevant(&sys, sys.candidates.len() - 1));
}

#[test]
fn adjoint_examples() {
    let tri = standard_simplex(2);
    let core = fine_adjoint(&tri, &rat(1, 3)).unwrap().unwrap();
    assert_eq!(core.vertices(), &[QVector::new(vec![rat(1, 3), rat(1, 3)])]);
    assert!(fine_adjoint(&tri, &rat(1, 2)).unwrap().is_none());
    let seg = poly(&[&[0], &[2]]);
    let adj = fine_adjoint(&seg, &rat(1, 2)).unwrap().unwrap();
    assert_eq!(adj, segment(rat(1, 2), rat(3, 2)));
    assert!(fine_adjoint(&seg, &int(0)).is_err());
}

#[test]
fn profile_examples() {
    let tri = fine_profile(&standard_simplex(2)).unwrap();
    assert_eq!(tri.mu_f, int(3));
    assert_eq!(tri.core_vertices, vec![QVector::new(vec![rat(1, 3), rat(1, 3)])]);
    assert_eq!(tri.core_dim, 0);
    assert_eq!(tri.core_normals.len(), 3);

    let p5 = Polytope::from_int_points(&[&[0, 0, 0], &[1, 0, 0], &[1, 2, 0], &[1, 0, 2]]).unwrap();
    assert_eq!(mu_f(&p5).unwrap(), rat(5, 2));
    assert_eq!(mu_f(&segment(rat(1, 5), rat(4, 5))).unwrap(), rat(10, 3));
    let ex = fine_profile(&exceptional_simplex(2).unwrap()).unwrap();
    assert_eq!((ex.fine_number, ex.mu_f), (rat(2, 3), rat(3, 2)));

    let rect = fine_profile(&poly(&[&[0, 0], &[1, 0], &[0, 3], &[1, 3]])).unwrap();
    assert_eq!(rect.core_dim, 1);
    assert_eq!(rect.core_vertices, vec![QVector::new(vec![rat(1, 2), rat(1, 2)]), QVector::new(vec![rat(1, 2), rat(5, 2)])]);
    assert_eq!(sorted_vecs(rect.core_normals), sorted(&[&[1, 0], &[-1, 0]]));
}

fn sorted_vecs(mut v: Vec<QVector>) -> Vec<QVector> {
    v.sort();
    v
}

#[test]
fn profile_serializes_with_rational_strings() {
    let tri = fine_profile(&standard_simplex(2)).unwrap();
    let json = serde_json::to_value(&tri).unwrap();
    assert_eq!(json["nF"], "1/3");
    assert_eq!(json["muF"], "3");
    assert_eq!(json["core_dim"], 0);
    assert_eq!(json["core_vertices"][0][0], "1/3");
    let back: FineProfile = serde_json::from_value(json).unwrap();
    assert_eq!(back, tri);
}

#[test]
fn projection_examples() {
    let rect = poly(&[&[0, 0], &[1, 0], &[0, 3], &[1, 3]]);
    let proj = natural_projection(&rect).unwrap();
    assert_eq!(proj.polytope.ambient_dim(), 1);
    assert_eq!(mu_f(&proj.polytope).unwrap(), int(2));
    assert_eq!(mu_f(&rect).unwrap(), int(2));

    let tri = standard_simplex(2);
    let proj = natural_projection(&tri).unwrap();
    assert_eq!((proj.polytope, proj.map), (tri.clone(), QMatrix::identity(2)));
    let sq2 = poly(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2]]);
    let prof = fine_profile(&sq2).unwrap();
    assert_eq!(prof.core_vertices, vec![QVector::from_ints(&[1, 1])]);
    assert_eq!(natural_projection(&sq2).unwrap().map, QMatrix::identity(2));
}

#[test]
fn circuit_examples() {
    let rect = poly(&[&[0, 0], &[1, 0], &[0, 3], &[1, 3]]);
    let q = circuit_reduction(&rect).unwrap().unwrap();
    assert_eq!(q.polytope.ambient_dim(), 1);
    assert_eq!(mu_f(&q.polytope).unwrap(), int(2));
    assert!(circuit_reduction(&standard_simplex(2)).unwrap().is_none());
    assert!(circuit_reduction(&poly(&[&[0], &[3]])).unwrap().is_none());
}

#[test]
fn pyramid_formula_examples() {
    assert_eq!(pyramid_mu(&standard_simplex(1)).unwrap(), int(3));
    assert_eq!(mu_f(&standard_simplex(2)).unwrap(), int(3));
    assert_eq!(pyramid_mu(&poly(&[&[0], &[4]])).unwrap(), int(2));
    assert_eq!(pyramid_mu(&exceptional_simplex(2).unwrap()).unwrap(), rat(5, 2));
    assert_eq!(mu_f(&exceptional_simplex(3).unwrap()).unwrap(), rat(5, 2));
    assert_eq!(pyramid_mu(&segment(rat(1, 5), rat(4, 5))), Err(Error::LatticeRequired));
    // the formula fails for rational bases
    assert_eq!(mu_f(&pyramid(&segment(rat(-1, 5), rat(2, 5)))).unwrap(), rat(10, 3));
    assert_eq!(mu_f(&pyramid(&segment(rat(1, 5), rat(4, 5)))).unwrap(), int(3));
}

#[test]
fn sublattice_examples() {
    let unit = poly(&[&[0], &[1]]);
    assert_eq!(mu_under_sublattice(&unit, 2).unwrap(), int(4));
    assert_eq!(mu_under_sublattice(&unit, 1).unwrap(), int(2));
    assert_eq!(mu_under_sublattice(&poly(&[&[0], &[2]]), 2).unwrap(), int(2));
    assert!(mu_under_sublattice(&unit, 0).is_err());
}

#[test]
fn simplex_family_matches_oracle() {
    for d in 1..=4 {
        let sys = relevant_candidates(&standard_simplex(d)).unwrap();
        let prof = profile_of_system(&sys).unwrap();
        assert_eq!(prof.mu_f, int(d as i64 + 1));
        assert_eq!(prof.fine_number, oracle_fine_number(&sys));
    }
}

fn lattice_polygon() -> impl Strategy<Value = Polytope> {
    proptest::collection::vec((0i64..4, 0i64..4), 3..6).prop_filter_map("full-dimensional", |pts| {
        let p = Polytope::from_points(2, pts.iter().map(|&(x, y)| QVector::from_ints(&[x, y]))).ok()?;
        p.is_full_dimensional().then_some(p)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fine_number_matches_vertex_oracle(p in lattice_polygon()) {
        let sys = relevant_candidates(&p).unwrap();
        prop_assert_eq!(profile_of_system(&sys).unwrap().fine_number, oracle_fine_number(&sys));
    }

    #[test]
    fn homogeneity(p in lattice_polygon(), k in prop::sample::select(vec![1i64, 2, 3, 5])) {
        let n = fine_profile(&p).unwrap().fine_number;
        let nk = fine_profile(&dilate(&p, &int(k)).unwrap()).unwrap().fine_number;
        prop_assert_eq!(nk, n * int(k));
    }

    #[test]
    fn monotone_under_inclusion(p in lattice_polygon(), extra in (0i64..5, 0i64..5)) {
        let mut pts = p.vertices().to_vec();
        pts.push(QVector::from_ints(&[extra.0, extra.1]));
        let q = Polytope::from_points(2, pts).unwrap();
        prop_assert!(fine_profile(&p).unwrap().fine_number <= fine_profile(&q).unwrap().fine_number);
    }

    #[test]
    fn bounded_by_codegree(p in lattice_polygon()) {
        prop_assert!(mu_f(&p).unwrap() <= int(p.codegree().unwrap() as i64));
    }

    #[test]
    fn profile_invariants(p in lattice_polygon()) {
        let prof = fine_profile(&p).unwrap();
        prop_assert_eq!(&prof.mu_f * &prof.fine_number, int(1));
        let sys = relevant_candidates(&p).unwrap();
        for v in &prof.core_vertices {
            for c in &sys.candidates {
                let level = &c.rhs + &prof.fine_number;
                let value = c.normal.dot(v);
                prop_assert!(value >= level);
                if prof.core_normals.contains(&c.normal) {
                    prop_assert_eq!(value, level);
                }
            }
        }
        prop_assert_eq!(Some(prof.core_dim), affine_rank(&prof.core_vertices));
    }

    #[test]
    fn natural_projection_preserves_mu(p in lattice_polygon()) {
        let proj = natural_projection(&p).unwrap();
        let prof = fine_profile(&proj.polytope).unwrap();
        prop_assert_eq!(prof.mu_f, mu_f(&p).unwrap());
        prop_assert_eq!(prof.core_dim, 0);
    }

    #[test]
    fn prism_is_stable(p in lattice_polygon()) {
        let prof = fine_profile(&p).unwrap();
        let h = int(2) * prof.fine_number.ceil() + int(1);
        prop_assert_eq!(mu_f(&prism(&p, &h).unwrap()).unwrap(), prof.mu_f);
    }

    #[test]
    fn pyramid_formula_holds(p in lattice_polygon()) {
        prop_assert_eq!(mu_f(&pyramid(&p)).unwrap(), pyramid_mu(&p).unwrap());
    }

    #[test]
    fn dropping_irrelevant_rows_keeps_profile(p in lattice_polygon()) {
        let sys = relevant_candidates(&p).unwrap();
        let keep: Vec<usize> = (0..sys.candidates.len()).filter(|&i| is_relevant(&sys, i)).collect();
        let full = profile_of_system(&sys).unwrap();
        let reduced = profile_of_system(&sys.restrict(&keep)).unwrap();
        prop_assert_eq!(full.fine_number, reduced.fine_number);
        prop_assert_eq!(full.core_vertices, reduced.core_vertices);
    }
}
