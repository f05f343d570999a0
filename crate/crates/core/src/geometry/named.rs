//! Witness polytopes for the three-dimensional numerators.
//!
//! The larger ones are given as integer dilations of rational hulls.

use super::{dilate, Polytope};
use crate::exact::{int, parse_rational, QVector};

/// Names accepted by [`named_polytope`].
pub const NAMED: &[&str] = &["P5", "P7", "P11", "P13", "P17", "P19"];

fn scaled_hull(k: i64, points: &[[&str; 3]]) -> Polytope {
    let pts = points.iter().map(|p| p.iter().map(|x| parse_rational(x).expect("well-formed literal")).collect::<QVector>());
    let base = Polytope::from_points(3, pts).expect("nonempty");
    dilate(&base, &int(k)).expect("positive factor")
}

pub fn p5() -> Polytope {
    Polytope::from_int_points(&[&[0, 0, 0], &[1, 0, 0], &[1, 2, 0], &[1, 0, 2]]).expect("valid points")
}

pub fn p7() -> Polytope {
    Polytope::from_int_points(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[3, 8, 15]]).expect("valid points")
}

pub fn p11() -> Polytope {
    scaled_hull(5, &[["10", "-1", "4"], ["-2", "-1", "-4/5"], ["-2", "-1", "0"], ["-2", "5", "-2"]])
}

pub fn p13() -> Polytope {
    scaled_hull(15, &[["15", "-2", "-4"], ["-1", "-2", "0"], ["-1", "-2", "-4/5"], ["-1", "10/3", "4/3"]])
}

pub fn p17() -> Polytope {
    scaled_hull(21, &[["9", "-2", "-2"], ["-1", "-2", "0"], ["-1", "-2", "-4/7"], ["-1", "14/3", "4/3"]])
}

/// The numerator-19 witness. The third vertex carries `+1` in its last
/// coordinate; with `-1` the facet normals are not the configuration
/// `A_19` and the codegree comes out as `1/42` (see [`p19_as_printed`]).
pub fn p19() -> Polytope {
    scaled_hull(21, &[["37/3", "-2", "11/3"], ["-1", "-2", "-1/7"], ["-1", "-2", "1"], ["-1", "8", "-3"]])
}

/// The numerator-19 vertex list with `-1` in the third vertex.
pub fn p19_as_printed() -> Polytope {
    scaled_hull(21, &[["37/3", "-2", "11/3"], ["-1", "-2", "-1/7"], ["-1", "-2", "-1"], ["-1", "8", "-3"]])
}

pub fn named_polytope(name: &str) -> Option<Polytope> {
    Some(match name {
        "P5" => p5(),
        "P7" => p7(),
        "P11" => p11(),
        "P13" => p13(),
        "P17" => p17(),
        "P19" => p19(),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_witnesses_are_lattice_tetrahedra() {
        for name in NAMED {
            let p = named_polytope(name).unwrap();
            assert!(p.is_lattice(), "{name}");
            assert_eq!(p.vertices().len(), 4, "{name}");
            assert!(p.is_full_dimensional(), "{name}");
        }
        assert!(named_polytope("P23").is_none());
    }
}
