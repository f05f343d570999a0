//! Bundled data sets.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::geometry::Polytope;
use crate::io::{parse_configs, parse_polytopes};
use crate::spectrum::{enumerate_configs, extend_numerators, numerator_candidates, NormalConfiguration};

pub const CONFIGS_3D_JSON: &str = include_str!("../data/configs_3d.json");
pub const PYRAMID_CORPUS_JSON: &str = include_str!("../data/pyramid_corpus.json");

/// The eight simplicial three-dimensional core normal configurations,
/// labelled by their numerators.
pub fn configs_3d() -> Vec<NormalConfiguration> {
    parse_configs(CONFIGS_3D_JSON).expect("bundled configurations parse")
}

/// Twenty small lattice polygons with their ids.
pub fn pyramid_corpus() -> Vec<(String, Polytope)> {
    parse_polytopes(PYRAMID_CORPUS_JSON)
        .expect("bundled corpus parses")
        .into_iter()
        .map(|r| (r.id.clone().unwrap_or_default(), r.to_polytope().expect("bundled polygon is valid")))
        .collect()
}

/// A superset of the numerators of `mu^F` in dimension `d <= 3`, built up
/// from the segment. In dimension three the bundled configurations stand in
/// for the full classification.
pub fn numerator_bound(dim: usize) -> Result<BTreeSet<u64>> {
    match dim {
        1 => Ok(numerator_candidates(&enumerate_configs(1)?)),
        2 => Ok(extend_numerators(&numerator_bound(1)?, &enumerate_configs(2)?)),
        3 => Ok(extend_numerators(&numerator_bound(2)?, &configs_3d())),
        _ => enumerate_configs(dim).map(|_| BTreeSet::new()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_sets_load() {
        let configs = configs_3d();
        assert_eq!(configs.len(), 8);
        assert!(configs.iter().all(|c| c.dim == 3 && c.len() == 4 && c.is_positively_spanning()));
        let corpus = pyramid_corpus();
        assert_eq!(corpus.len(), 20);
        assert!(corpus.iter().all(|(_, p)| p.is_lattice() && p.is_full_dimensional()));
    }

    #[test]
    fn numerators_by_dimension() {
        assert_eq!(numerator_bound(1).unwrap(), BTreeSet::from([2]));
        assert_eq!(numerator_bound(2).unwrap(), BTreeSet::from([2, 3]));
        assert_eq!(numerator_bound(3).unwrap(), BTreeSet::from([2, 3, 4, 5, 7, 11, 13, 17, 19, 20]));
        assert!(numerator_bound(4).is_err());
    }
}
