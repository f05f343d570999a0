//! Small-integer planar geometry for enumerating polygons.

use std::collections::{BTreeMap, HashSet};

pub type Pt = (i64, i64);

fn cross(o: Pt, a: Pt, b: Pt) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Vertices of the convex hull in counterclockwise order, starting from the
/// lexicographically smallest. Collinear boundary points are dropped.
pub fn convex_hull(points: &[Pt]) -> Vec<Pt> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Pt> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Pt> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// For a counterclockwise hull with at least three vertices.
pub fn contains(hull: &[Pt], p: Pt) -> bool {
    (0..hull.len()).all(|i| cross(hull[i], hull[(i + 1) % hull.len()], p) >= 0)
}

pub fn contains_strictly(hull: &[Pt], p: Pt) -> bool {
    (0..hull.len()).all(|i| cross(hull[i], hull[(i + 1) % hull.len()], p) > 0)
}

fn bounding_box(hull: &[Pt]) -> impl Iterator<Item = Pt> {
    let (x0, x1) = (hull.iter().map(|p| p.0).min().unwrap(), hull.iter().map(|p| p.0).max().unwrap());
    let (y0, y1) = (hull.iter().map(|p| p.1).min().unwrap(), hull.iter().map(|p| p.1).max().unwrap());
    (x0..=x1).flat_map(move |x| (y0..=y1).map(move |y| (x, y)))
}

pub fn interior_points(hull: &[Pt]) -> Vec<Pt> {
    if hull.len() < 3 {
        return Vec::new();
    }
    bounding_box(hull).filter(|&p| contains_strictly(hull, p)).collect()
}

pub fn lattice_points(hull: &[Pt]) -> Vec<Pt> {
    if hull.len() < 3 {
        return Vec::new();
    }
    bounding_box(hull).filter(|&p| contains(hull, p)).collect()
}

/// Row Hermite normal form of the `2 x k` matrix with the given columns.
fn hnf(cols: &[Pt]) -> [Vec<i64>; 2] {
    let mut rows = [cols.iter().map(|c| c.0).collect::<Vec<_>>(), cols.iter().map(|c| c.1).collect::<Vec<_>>()];
    let mut r = 0;
    for c in 0..cols.len() {
        if r == 2 {
            break;
        }
        if r == 0 {
            while rows[1][c] != 0 {
                if rows[0][c] == 0 || rows[1][c].abs() < rows[0][c].abs() {
                    rows.swap(0, 1);
                    continue;
                }
                let q = rows[1][c].div_euclid(rows[0][c]);
                let top = rows[0].clone();
                for (x, y) in rows[1].iter_mut().zip(&top) {
                    *x -= q * y;
                }
            }
        }
        if rows[r][c] == 0 {
            continue;
        }
        if rows[r][c] < 0 {
            rows[r].iter_mut().for_each(|x| *x = -*x);
        }
        if r == 1 {
            let q = rows[0][c].div_euclid(rows[1][c]);
            let bottom = rows[1].clone();
            for (x, y) in rows[0].iter_mut().zip(&bottom) {
                *x -= q * y;
            }
        }
        r += 1;
    }
    rows
}

/// The cyclic vertex orders of a hull: every start vertex, both directions.
fn cyclic_orders(hull: &[Pt]) -> impl Iterator<Item = Vec<Pt>> + '_ {
    let n = hull.len();
    (0..n).flat_map(move |s| {
        [1i64, -1].into_iter().map(move |o| (0..n as i64).map(|i| hull[(s as i64 + o * i).rem_euclid(n as i64) as usize]).collect())
    })
}

/// Invariant of a polygon around the origin under `GL_2(Z)`.
pub fn linear_canonical_form(hull: &[Pt]) -> [Vec<i64>; 2] {
    cyclic_orders(hull).map(|order| hnf(&order)).min().expect("nonempty hull")
}

/// Invariant of a lattice polygon under affine unimodular maps.
pub fn affine_canonical_form(hull: &[Pt]) -> [Vec<i64>; 2] {
    cyclic_orders(hull)
        .map(|order| {
            let diffs: Vec<Pt> = order[1..].iter().map(|p| (p.0 - order[0].0, p.1 - order[0].1)).collect();
            hnf(&diffs)
        })
        .min()
        .expect("nonempty hull")
}

/// Representatives of the lattice polygons with the origin as their unique
/// interior lattice point, up to `GL_2(Z)`, grown from the origin inside
/// `[-3, 3]^2`.
pub fn reflexive_polygons() -> Vec<Vec<Pt>> {
    let box_points: Vec<Pt> = (-3..=3).flat_map(|x| (-3..=3).map(move |y| (x, y))).collect();
    let mut seen: HashSet<Vec<Pt>> = HashSet::new();
    let start = vec![(0, 0)];
    seen.insert(start.clone());
    let mut stack = vec![start];
    let mut classes: BTreeMap<[Vec<i64>; 2], Vec<Pt>> = BTreeMap::new();
    while let Some(hull) = stack.pop() {
        for &q in &box_points {
            if hull.len() >= 3 && contains(&hull, q) {
                continue;
            }
            let mut pts = hull.clone();
            pts.push(q);
            let next = convex_hull(&pts);
            if seen.contains(&next) {
                continue;
            }
            if next.len() >= 3 {
                let interior = interior_points(&next);
                if interior.iter().any(|&p| p != (0, 0)) {
                    continue;
                }
                if interior == [(0, 0)] {
                    let key = linear_canonical_form(&next);
                    let better = |old: &Vec<Pt>| representative_key(&next) < representative_key(old);
                    if classes.get(&key).is_none_or(better) {
                        classes.insert(key, next.clone());
                    }
                }
            }
            seen.insert(next.clone());
            stack.push(next);
        }
    }
    let mut reps: Vec<Vec<Pt>> = classes.into_values().collect();
    reps.sort_by_key(|h| (h.len(), representative_key(h)));
    reps
}

/// Prefers small coordinates, then the lexicographically smallest vertex list.
fn representative_key(hull: &[Pt]) -> (i64, Vec<Pt>) {
    let norm = hull.iter().map(|p| p.0.abs().max(p.1.abs())).max().unwrap_or(0);
    let mut sorted = hull.to_vec();
    sorted.sort_unstable();
    (norm, sorted)
}

/// Representatives of all lattice polygons with vertices in `[0, n]^2`, up to
/// affine unimodular equivalence.
pub fn polygons_in_box(n: i64) -> Vec<Vec<Pt>> {
    let grid: Vec<Pt> = (0..=n).flat_map(|x| (0..=n).map(move |y| (x, y))).collect();
    let mut seen: HashSet<Vec<Pt>> = HashSet::new();
    let mut stack: Vec<Vec<Pt>> = Vec::new();
    for (i, &a) in grid.iter().enumerate() {
        for (j, &b) in grid.iter().enumerate().skip(i + 1) {
            for &c in &grid[j + 1..] {
                let h = convex_hull(&[a, b, c]);
                if h.len() == 3 && seen.insert(h.clone()) {
                    stack.push(h);
                }
            }
        }
    }
    while let Some(hull) = stack.pop() {
        for &q in &grid {
            if contains(&hull, q) {
                continue;
            }
            let mut pts = hull.clone();
            pts.push(q);
            let next = convex_hull(&pts);
            if seen.insert(next.clone()) {
                stack.push(next);
            }
        }
    }
    let mut classes: BTreeMap<[Vec<i64>; 2], Vec<Pt>> = BTreeMap::new();
    for hull in seen {
        let key = affine_canonical_form(&hull);
        let entry = classes.entry(key).or_insert_with(|| hull.clone());
        if representative_key(&hull) < representative_key(entry) {
            *entry = hull;
        }
    }
    let mut reps: Vec<Vec<Pt>> = classes.into_values().collect();
    reps.sort_by_key(|h| (h.len(), representative_key(h)));
    reps
}
