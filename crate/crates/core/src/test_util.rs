//! Shared fixtures for unit tests.

use crate::data::Dataset;
use crate::model::SplitSpace;
use crate::tree::{populate_counts, Tree};

/// The canonical 8-point dataset used across hand-computed examples:
/// feature 0 spans [0, 1], feature 1 is binary, labels split 5/3 and are
/// perfectly separated by `x0 <= 0.5`.
pub(crate) fn hand_dataset() -> Dataset {
    Dataset::from_rows(
        vec![
            vec![0.0, 0.0],
            vec![0.1, 1.0],
            vec![0.2, 0.0],
            vec![0.3, 1.0],
            vec![0.4, 0.0],
            vec![0.6, 1.0],
            vec![0.8, 0.0],
            vec![1.0, 1.0],
        ],
        vec![0, 0, 0, 0, 0, 1, 1, 1],
        2,
    )
    .unwrap()
}

/// Random small tree built from plain uniform grows; deliberately does not
/// touch the proposal machinery.
pub(crate) fn random_tree<R: rand::Rng>(data: &Dataset, rng: &mut R) -> Tree {
    let space = SplitSpace::from_dataset(data);
    let mut tree = Tree::single_node(data.class_count());
    let grows = rng.random_range(0..4);
    for _ in 0..grows {
        let leaves = tree.leaves();
        let leaf = leaves[rng.random_range(0..leaves.len())];
        let (feature, threshold) = space.sample_split(rng);
        tree = tree.grow_at(leaf, feature, threshold);
    }
    populate_counts(&mut tree, data);
    tree
}
