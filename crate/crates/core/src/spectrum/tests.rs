use std::collections::BTreeSet;

use num_integer::Integer;
use proptest::prelude::*;

use super::*;
use crate::exact::rat;
use crate::fine::fine_profile;
use crate::lp::Sense;

fn cfg(dim: usize, rows: &[&[i64]]) -> NormalConfiguration {
    NormalConfiguration::new(dim, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
}

fn simplex_fan() -> NormalConfiguration {
    cfg(2, &[&[1, 0], &[0, 1], &[-1, -1]])
}

fn segment_fan() -> NormalConfiguration {
    cfg(1, &[&[1], &[-1]])
}

fn a4() -> NormalConfiguration {
    cfg(3, &[&[-1, -1, -1], &[0, 0, 1], &[0, 1, 0], &[1, 0, 0]])
}

/// Leibniz expansion.
fn leibniz(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    (0..n)
        .permutations(n)
        .map(|p| {
            let inv = (0..n).tuple_combinations().filter(|&(i, j)| p[i] > p[j]).count();
            let s = if inv % 2 == 0 { 1 } else { -1 };
            s * (0..n).map(|i| m[i][p[i]]).product::<i64>()
        })
        .sum()
}

fn oracle_eta(rows: &[Vec<i64>]) -> i64 {
    let bordered: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().copied().chain([-1]).collect()).collect();
    let minors = (0..rows.len()).map(|j| {
        let sub: Vec<Vec<i64>> = rows.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, r)| r.clone()).collect();
        leibniz(&sub)
    });
    let g = minors.fold(0i64, |acc, m| acc.gcd(&m));
    leibniz(&bordered).abs() / g
}

#[test]
fn eta_examples() {
    assert_eq!(eta(&a4().matrix()).unwrap(), 4);
    assert_eq!(eta(&simplex_fan().matrix()).unwrap(), 3);
    assert_eq!(oracle_eta(&simplex_fan().normals), 3);
    let a19 = cfg(3, &[&[1, -2, -5], &[-2, 2, 7], &[0, 1, 0], &[1, 0, 0]]);
    assert_eq!(eta(&a19.matrix()).unwrap(), 19);
    // all four maximal minors of this one are divisible by 5
    let a20 = cfg(3, &[&[-2, 2, -5], &[1, -3, 5], &[0, 1, 0], &[1, 0, 0]]);
    assert_eq!(bordered_determinant(&a20.matrix()).unwrap(), 20);
    assert_eq!(eta(&a20.matrix()).unwrap(), 4);
    assert_eq!(oracle_eta(&a20.normals), 4);
    assert_eq!(numerator_candidates(&[a20.clone()]), BTreeSet::from([20]));
    assert_eq!(reduced_numerators(&[a20]), BTreeSet::from([4]));
    let flat = cfg(2, &[&[1, 0], &[0, 1], &[1, 1]]);
    assert_eq!(eta(&flat.matrix()), Err(Error::NotSpanning));
}

#[test]
fn spanning_subset_examples() {
    assert_eq!(positively_spanning_subsets(&simplex_fan()), vec![vec![0, 1, 2]]);
    // any three of the four vectors lie in a closed half-plane
    let cross = cfg(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]);
    assert!(positively_spanning_subsets(&cross).is_empty());
    assert!(cross.is_positively_spanning());
    let half = cfg(2, &[&[1, 0], &[0, 1], &[1, 1], &[1, -1]]);
    assert!(positively_spanning_subsets(&half).is_empty());
    assert!(!half.is_positively_spanning());
}

#[test]
fn numerator_examples() {
    assert!(numerator_candidates(&[]).is_empty());
    assert_eq!(numerator_candidates(&[simplex_fan()]), BTreeSet::from([3]));
    let a5 = cfg(3, &[&[-1, -1, -1], &[1, 1, 2], &[0, 1, 0], &[1, 0, 0]]);
    assert_eq!(numerator_candidates(&[a5.clone()]), BTreeSet::from([oracle_eta(&a5.normals) as u64]));
    assert_eq!(oracle_eta(&a5.normals), 5);
    // one sign away from a5, and the dependence has a negative coefficient
    let skew = cfg(3, &[&[-1, 1, -1], &[1, 1, 2], &[0, 1, 0], &[1, 0, 0]]);
    assert!(numerator_candidates(&[skew]).is_empty());
}

#[test]
fn contributed_numerator_examples() {
    let two = enumerate_configs_2d();
    assert_eq!(numerator_candidates(&two), BTreeSet::from([3, 4, 6, 8, 9]));
    assert_eq!(reduced_numerators(&two), BTreeSet::from([3, 4, 6]));
    assert_eq!(contributed_numerators(&two, Some(&BTreeSet::from([2]))), BTreeSet::from([2, 3]));
    assert_eq!(contributed_numerators(&two, None), BTreeSet::from([3]));
    let half = cfg(2, &[&[1, 0], &[0, 1], &[1, 1], &[1, -1]]);
    assert!(contributed_numerators(&[half], Some(&BTreeSet::from([2]))).is_empty());
}

#[test]
fn configuration_enumeration() {
    assert_eq!(enumerate_configs(1).unwrap(), vec![segment_fan()]);
    let two = enumerate_configs(2).unwrap();
    assert_eq!(two.len(), 16);
    assert!(two.iter().any(|c| {
        let set: BTreeSet<_> = c.normals.iter().cloned().collect();
        set == BTreeSet::from([vec![1, 0], vec![0, 1], vec![-1, -1]])
    }));
    match enumerate_configs(3) {
        Err(Error::Unsupported(msg)) => assert_eq!(msg, "unsupported; ingest external classification"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn opposing_filter() {
    let cross = cfg(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]);
    assert!(filter_opposing(&[cross]).is_empty());
    assert_eq!(filter_opposing(&[simplex_fan()]), vec![simplex_fan()]);
    let survivors = filter_opposing(&enumerate_configs_2d());
    assert_eq!(survivors.len(), 1);
    assert_eq!(planar::linear_canonical_form(&planar::convex_hull(&[(1, 0), (0, 1), (-1, -1)])), {
        let hull: Vec<(i64, i64)> = survivors[0].normals.iter().map(|v| (v[0], v[1])).collect();
        planar::linear_canonical_form(&planar::convex_hull(&hull))
    });
}

/// Best `n^F` for the segment configuration by enumerating `u_1, u_2`.
fn oracle_segment(lower: Rational, upper: Rational, r: i64, maximize: bool) -> Option<Rational> {
    let values = (-r..=r).flat_map(|u1| (-r..=r).map(move |u2| (u1, u2))).filter_map(|(u1, u2)| {
        let nf = rat(u2 - u1, 2);
        let p = Rational::from_integer(u1.into()) + &nf;
        (u2 >= u1 && nf >= lower && nf <= upper && p >= rat(0, 1) && p <= rat(1, 1)).then_some(nf)
    });
    if maximize {
        values.max()
    } else {
        values.min()
    }
}

/// Best `n^F` for the triangle configuration: with `b` fixed the core point
/// is `(b_1 + n, b_2 + n)` and `n = -(b_1 + b_2 + b_3) / 3`.
fn oracle_triangle(upper: Rational, r: i64) -> Option<Rational> {
    itertools::iproduct!(-2 * r..=2 * r, -2 * r..=2 * r, -2 * r..=2 * r)
        .filter_map(|(b1, b2, b3)| {
            let n = rat(-(b1 + b2 + b3), 3);
            let p = [Rational::from_integer(b1.into()) + &n, Rational::from_integer(b2.into()) + &n];
            let vertices_fit = [b1, b2, -b3 - b1, -b3 - b2].iter().all(|x| x.abs() <= r);
            (n.is_positive() && n <= upper && vertices_fit && p.iter().all(|x| x >= &rat(0, 1) && x <= &rat(1, 1)))
                .then_some(n)
        })
        .max()
}

#[test]
fn milp_segment_maximum() {
    let inst = MilpInstance::new(segment_fan(), rat(0, 1), rat(3, 4), Sense::Maximize).with_box(5);
    let w = milp_solve(&inst).unwrap().witness().cloned().unwrap();
    assert_eq!(Some(w.fine_number.clone()), oracle_segment(rat(0, 1), rat(3, 4), 5, true));
    assert_eq!(w.fine_number, rat(1, 2));
    assert_eq!(w.support_points, vec![QVector::from_ints(&[0]), QVector::from_ints(&[1])]);
    assert_eq!(w.core_point, QVector::new(vec![rat(1, 2)]));
    assert!(w.verified);
}

#[test]
fn milp_segment_minimum() {
    let inst = MilpInstance::new(segment_fan(), rat(1, 3), rat(10, 1), Sense::Minimize).with_box(5);
    let w = milp_solve(&inst).unwrap().witness().cloned().unwrap();
    assert_eq!(Some(w.fine_number.clone()), oracle_segment(rat(1, 3), rat(10, 1), 5, false));
    assert_eq!(w.fine_number, rat(1, 2));
}

#[test]
fn milp_triangle_maximum() {
    let inst = MilpInstance::new(simplex_fan(), rat(1, 3), rat(1, 1), Sense::Maximize).with_box(6);
    let w = milp_solve(&inst).unwrap().witness().cloned().unwrap();
    assert_eq!(Some(w.fine_number.clone()), oracle_triangle(rat(1, 1), 6));
    assert_eq!(w.fine_number, rat(1, 1));
    let q = w.polytope.clone().unwrap();
    let prof = fine_profile(&q).unwrap();
    assert_eq!(prof.fine_number, rat(1, 1));
    assert_eq!(prof.core_vertices, vec![w.core_point.clone()]);
    assert!(w.core_point.iter().all(|x| x >= &rat(0, 1) && x <= &rat(1, 1)));
    // lattice-equivalent to 3 Delta_2: a triangle with 10 lattice points
    assert_eq!(q.vertices().len(), 3);
    assert_eq!(q.lattice_points().len(), 10);
}

#[test]
fn milp_infeasible_and_invalid() {
    let inst = MilpInstance::new(segment_fan(), rat(1, 3), rat(2, 5), Sense::Maximize).with_box(5);
    assert!(milp_solve(&inst).unwrap().is_infeasible());
    let inst = MilpInstance::new(segment_fan(), rat(1, 1), rat(1, 2), Sense::Maximize);
    assert!(milp_solve(&inst).unwrap().is_infeasible());
    let inst = MilpInstance::new(segment_fan(), rat(0, 1), rat(1, 1), Sense::Maximize).with_box(0);
    assert!(milp_solve(&inst).is_err());
}

#[test]
fn scans() {
    let values = spectrum_scan(&segment_fan(), &rat(1, 3), 10).unwrap();
    assert_eq!(values, vec![rat(2, 1), rat(1, 1), rat(2, 3), rat(1, 2), rat(2, 5), rat(1, 3)]);
    let values = spectrum_scan(&simplex_fan(), &rat(3, 4), default_box(2)).unwrap();
    assert_eq!(values, vec![rat(3, 1), rat(3, 2), rat(1, 1), rat(3, 4)]);
    assert!(scan_range(&segment_fan(), &rat(2, 1), &rat(1, 1), 5).unwrap().is_empty());
    assert!(spectrum_scan(&segment_fan(), &rat(0, 1), 5).is_err());
}

#[test]
fn numerator_realization() {
    let w = realize_numerator(&simplex_fan().matrix(), default_box(2), true).unwrap();
    assert_eq!(w.mu_f().numer(), &3.into());
    assert_eq!(fine_profile(w.polytope.as_ref().unwrap()).unwrap().fine_number, w.fine_number);

    let w = realize_numerator(&a4().matrix(), default_box(3), true).unwrap();
    assert!(BigInt::from(4).is_multiple_of(w.mu_f().numer()));
    assert_eq!(w.mu_f(), rat(4, 1));
}

#[test]
fn scan_witnesses_reverify() {
    let witnesses = scan_range(&simplex_fan(), &rat(1, 3), &rat(4, 3), default_box(2)).unwrap();
    assert_eq!(witnesses.len(), 4);
    for w in witnesses {
        let q = w.polytope.as_ref().unwrap();
        let prof = fine_profile(q).unwrap();
        assert_eq!(prof.fine_number, w.fine_number);
        assert!(simplex_fan().vectors().iter().all(|a| prof.core_normals.contains(a)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn eta_is_invariant(shear in -3i64..4, perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle()) {
        let a = a4().matrix();
        let u = QMatrix::from_ints(&[&[1, shear, 0], &[0, 1, 0], &[shear, 0, 1]]).unwrap();
        let u = if u.det().unwrap().abs() == rat(1, 1) { u } else { QMatrix::identity(3) };
        let transformed = a.mul(&u).unwrap();
        prop_assert_eq!(eta(&transformed).unwrap(), 4);
        let permuted = QMatrix::new(perm.iter().map(|&i| a.row(i).clone()).collect(), 3).unwrap();
        prop_assert_eq!(eta(&permuted).unwrap(), 4);
    }

    #[test]
    fn segment_milp_matches_oracle(u_num in 1i64..8, r in 1i64..5) {
        let upper = rat(u_num, 3);
        let inst = MilpInstance::new(segment_fan(), rat(0, 1), upper.clone(), Sense::Maximize).with_box(r);
        let got = milp_solve(&inst).unwrap().witness().map(|w| w.fine_number.clone());
        prop_assert_eq!(got.filter(|n| n.is_positive()), oracle_segment(rat(1, 100), upper, r, true));
    }

    #[test]
    fn maximum_is_monotone(u_num in 1i64..7, r in 1i64..4) {
        let solve = |u: Rational, r: i64| {
            let inst = MilpInstance::new(simplex_fan(), rat(1, 3), u, Sense::Maximize).with_box(r);
            milp_solve(&inst).unwrap().witness().map(|w| w.fine_number.clone())
        };
        let base = solve(rat(u_num, 3), r);
        prop_assert!(solve(rat(u_num + 1, 3), r) >= base);
        prop_assert!(solve(rat(u_num, 3), r + 1) >= base);
    }
}

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Signed;
