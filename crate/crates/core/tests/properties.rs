//! Structural and statistical invariants of the move kernel and samplers.

mod common;

use common::{hand_dataset, random_tree};
use proptest::prelude::*;
use rand::Rng;
use treemc::data::{kfold, Dataset};
use treemc::model::{predict_proba, Model, SplitSpace};
use treemc::moves::{propose, renormalize, valid_moves, MoveKind, KIND_COUNT};
use treemc::rng::unit_rng;
use treemc::smc::{run_smc_ea, update_permanent, PermanentPheromones, SmcConfig};
use treemc::tree::{populate_counts, Tree};

const MAX_DEPTH: usize = 6;

/// Ten thousand random moves, each proposal adopted, never leave the space
/// of valid trees: strictly binary, acyclic/compact, parameters in range,
/// depth within the cap, counts summing to N.
#[test]
fn structural_validity_under_ten_thousand_moves() {
    let data = hand_dataset();
    let space = SplitSpace::from_dataset(&data);
    let ranges = data.feature_ranges().to_vec();
    let mut rng = unit_rng(0x57AB, 0);
    let mut tree = Tree::single_node(2);
    populate_counts(&mut tree, &data);

    for step in 0..10_000 {
        let valid = valid_moves(&tree, MAX_DEPTH);
        let probs = renormalize(&[0.25; KIND_COUNT], &valid).unwrap();
        let kind = loop {
            let k = MoveKind::ALL[rng.random_range(0..KIND_COUNT)];
            if valid[k.index()] {
                break k;
            }
        };
        let (next, record) =
            propose(&tree, kind, &data, &space, MAX_DEPTH, probs, &mut rng).unwrap();

        assert!(
            next.is_valid(data.n_features(), &ranges),
            "invalid tree after step {step} ({kind:?})"
        );
        assert!(next.depth() <= MAX_DEPTH);
        let total: u32 = next
            .leaves()
            .iter()
            .map(|&l| next.leaf_counts(l).iter().sum::<u32>())
            .sum();
        assert_eq!(total as usize, data.len());
        match record.kind {
            MoveKind::Swap => {
                assert_eq!(record.targets.len(), 2);
                assert_ne!(record.targets[0], record.targets[1]);
            }
            _ => assert_eq!(record.targets.len(), 1),
        }
        let probs_sum: f64 = record.selection_probs.iter().sum();
        assert!((probs_sum - 1.0).abs() < 1e-9);
        tree = next;
    }
}

#[test]
fn swap_of_identical_params_keeps_likelihood_exactly() {
    // degenerate swap: both nodes carry the same (feature, threshold)
    let data = hand_dataset();
    let model = Model::new(&data, 1.0, 2.0);
    let base = Tree::single_node(2).grow_at(0, 0, 0.5);
    let left_leaf = base.leaves()[0];
    let mut tree = base.grow_at(left_leaf, 0, 0.5);
    populate_counts(&mut tree, &data);

    let internal = tree.internal_nodes();
    let swapped_raw = tree.swap_params(internal[0], internal[1]);
    let mut swapped = swapped_raw.clone();
    populate_counts(&mut swapped, &data);

    assert_eq!(tree.depth(), swapped.depth());
    assert_eq!(tree.leaves().len(), swapped.leaves().len());
    assert_eq!(
        model.log_likelihood(&tree).to_bits(),
        model.log_likelihood(&swapped).to_bits()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Renormalized selection vectors are distributions over the valid set.
    #[test]
    fn renormalize_yields_distribution(
        base in prop::array::uniform4(0.0f64..1.0),
        mask in prop::array::uniform4(any::<bool>()),
    ) {
        if let Some(probs) = renormalize(&base, &mask) {
            let total: f64 = probs.iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-9);
            for i in 0..KIND_COUNT {
                prop_assert!(probs[i] >= 0.0);
                if !mask[i] {
                    prop_assert_eq!(probs[i], 0.0);
                }
            }
        }
    }

    /// Permanent pheromones stay normalized and the cap's post-state is a
    /// permutation of [0.4, 0.2, 0.2, 0.2] whenever it fires.
    #[test]
    fn permanent_pheromone_updates_stay_normalized(
        counts in prop::collection::vec(0usize..4, 0..40),
        rounds in 1usize..6,
    ) {
        let moves: Vec<MoveKind> = counts.iter().map(|&i| MoveKind::ALL[i]).collect();
        let mut perm = PermanentPheromones::new();
        for _ in 0..rounds {
            perm = update_permanent(&perm, &moves);
            let total: f64 = perm.probs().iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-9);
            prop_assert!(perm.probs().iter().all(|&p| p >= 0.0));
            prop_assert!(perm.probs().iter().all(|&p| p <= 0.8));
        }
    }

    /// Whenever one kind dominates an update, the cap's post-state is
    /// exactly 0.4 on it and 0.2 on the rest.
    #[test]
    fn cap_rule_exact_poststate(dominant in 0usize..KIND_COUNT, copies in 50usize..500) {
        let moves = vec![MoveKind::ALL[dominant]; copies];
        let capped = update_permanent(&PermanentPheromones::new(), &moves);
        let mut expected = [0.2; KIND_COUNT];
        expected[dominant] = 0.4;
        prop_assert_eq!(capped.probs(), &expected);
    }

    /// Prediction vectors are valid distributions on every leaf.
    #[test]
    fn predictions_normalized(seed in 0u64..500) {
        let data = hand_dataset();
        let mut rng = unit_rng(seed, 0);
        let tree = random_tree(&data, 4, &mut rng);
        for i in 0..data.len() {
            let probs = predict_proba(&tree, data.row(i));
            prop_assert!(probs.iter().all(|&p| p >= 0.0));
            let total: f64 = probs.iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }
    }

    /// Fold plans partition the rows with near-equal sizes for any shape.
    #[test]
    fn kfold_partitions(n in 5usize..200, k in 2usize..6, seed in any::<u64>()) {
        prop_assume!(n >= k);
        let plan = kfold(n, k, seed).unwrap();
        let mut seen = vec![false; n];
        let mut sizes = vec![0usize; k];
        for (fold, size) in sizes.iter_mut().enumerate() {
            for idx in plan.test_indices(fold) {
                prop_assert!(!seen[idx]);
                seen[idx] = true;
                *size += 1;
            }
        }
        prop_assert!(seen.iter().all(|&s| s));
        let max = sizes.iter().max().unwrap();
        let min = sizes.iter().min().unwrap();
        prop_assert!(max - min <= 1);
    }
}

/// Across twenty seeded runs on the hand dataset, the per-iteration median
/// of the population's best log-joint never decreases.
#[test]
fn median_best_log_joint_is_nondecreasing() {
    let data = hand_dataset();
    let iterations = 12;
    let mut traces = Vec::new();
    for seed in 0..20u64 {
        let config = SmcConfig {
            particles: 50,
            iterations,
            seed,
            max_depth: 6,
            ..SmcConfig::default()
        };
        let run = run_smc_ea(&config, &data).unwrap();
        traces.push(run.best_log_joint);
    }
    let mut medians = Vec::with_capacity(iterations);
    for i in 0..iterations {
        let mut column: Vec<f64> = traces.iter().map(|t| t[i]).collect();
        column.sort_by(|x, y| x.partial_cmp(y).unwrap());
        medians.push(0.5 * (column[9] + column[10]));
    }
    for pair in medians.windows(2) {
        assert!(
            pair[1] >= pair[0] - 1e-12,
            "median best log-joint decreased: {medians:?}"
        );
    }
}

/// A thousand particles initialized on the wide benchmark table cover
/// several distinct depths, as the geometric grow count predicts.
#[test]
fn initialization_produces_depth_diversity() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scadi.csv");
    treemc::data::synth::scadi_like(6).write_csv(&path).unwrap();
    let data = treemc::data::load_csv(
        &path,
        "class",
        treemc::data::MissingPolicy::MedianImpute,
        true,
    )
    .unwrap();
    let model = Model::new(&data, 1.0, 2.0);
    let mut rngs: Vec<_> = (0..1000).map(|i| unit_rng(3, i as u64)).collect();
    let population = treemc::smc::initialize_population(1000, &model, 15, 0.5, &mut rngs);
    let mut depths: Vec<usize> = population
        .particles
        .iter()
        .map(|p| p.tree.depth())
        .collect();
    depths.sort_unstable();
    depths.dedup();
    assert!(depths.len() >= 2, "expected at least two distinct depths");
}

/// Training-fold datasets never leak held-out rows into their ranges.
#[test]
fn fold_subsets_use_training_ranges_only() {
    let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64]).collect();
    let labels: Vec<usize> = (0..20).map(|i| i % 2).collect();
    let data = Dataset::from_rows(rows, labels, 2).unwrap();
    let plan = kfold(20, 5, 7).unwrap();
    for fold in 0..5 {
        let train_idx = plan.train_indices(fold);
        let train = data.subset(&train_idx).unwrap();
        let lo = train_idx
            .iter()
            .map(|&i| i as f64)
            .fold(f64::INFINITY, f64::min);
        let hi = train_idx
            .iter()
            .map(|&i| i as f64)
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(train.feature_ranges(), &[(lo, hi)]);
    }
}
