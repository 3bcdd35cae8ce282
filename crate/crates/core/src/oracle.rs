//! Brute-force ground truth over a tiny discretized tree space.
//!
//! Thresholds are restricted to a small grid so the tree space is finite and
//! the posterior can be enumerated exactly. Scoring here is written from
//! scratch on purpose: the likelihood routes every datum itself and uses
//! explicit factorial identities rather than the model's cached-gamma path,
//! so the two implementations check each other.

use std::collections::HashMap;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::model::SplitSpace;
use crate::tree::{Node, Tree, TreeSpec};

const MAX_DEPTH_CAP: usize = 2;
const MAX_FEATURES: usize = 2;
const MAX_GRID: usize = 3;

/// A finite tree space: depth cap plus a threshold grid per feature.
#[derive(Debug, Clone)]
pub struct EnumerationSpace {
    pub max_depth: usize,
    pub thresholds: Vec<Vec<f64>>,
}

impl EnumerationSpace {
    pub fn new(max_depth: usize, thresholds: Vec<Vec<f64>>) -> Result<Self> {
        if max_depth > MAX_DEPTH_CAP {
            return Err(Error::EnumerationSpaceTooLarge {
                reason: format!("max_depth {max_depth} exceeds {MAX_DEPTH_CAP}"),
            });
        }
        if thresholds.is_empty() || thresholds.len() > MAX_FEATURES {
            return Err(Error::EnumerationSpaceTooLarge {
                reason: format!("{} features exceed {MAX_FEATURES}", thresholds.len()),
            });
        }
        if thresholds
            .iter()
            .any(|g| g.is_empty() || g.len() > MAX_GRID)
        {
            return Err(Error::EnumerationSpaceTooLarge {
                reason: format!("a grid exceeds {MAX_GRID} thresholds"),
            });
        }
        Ok(EnumerationSpace {
            max_depth,
            thresholds,
        })
    }

    /// The matching proposal/prior space for samplers run against this oracle.
    pub fn split_space(&self) -> SplitSpace {
        SplitSpace::Grid {
            thresholds: self.thresholds.clone(),
        }
    }
}

/// Independent log-likelihood: route each row with a local descent loop and
/// apply the closed form `(C-1)! * prod(n_c!) / (n + C - 1)!` per leaf via
/// explicit log-factorials.
pub fn oracle_log_likelihood(tree: &Tree, data: &Dataset) -> f64 {
    let class_count = data.class_count();
    let mut counts: HashMap<usize, Vec<u64>> = HashMap::new();
    for i in 0..data.len() {
        let x = data.row(i);
        let mut id = tree.root();
        loop {
            match tree.node(id) {
                Node::Leaf { .. } => break,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    id = if x[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
        counts.entry(id).or_insert_with(|| vec![0; class_count])[data.label(i)] += 1;
    }
    let mut total = 0.0;
    for leaf_counts in counts.values() {
        let n: u64 = leaf_counts.iter().sum();
        let mut term =
            ln_factorial(class_count as u64 - 1) - ln_factorial(n + class_count as u64 - 1);
        for &c in leaf_counts {
            term += ln_factorial(c);
        }
        total += term;
    }
    total
}

fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// Independent log-joint over the discretized space: likelihood above, a
/// uniform point mass `1/(K * grid_k)` per split, and the depth prior
/// computed with a local depth recursion.
pub fn oracle_log_joint(
    tree: &Tree,
    data: &Dataset,
    space: &EnumerationSpace,
    a: f64,
    beta: f64,
) -> f64 {
    let k = space.thresholds.len() as f64;
    let mut param_prior = 0.0;
    let mut stack = vec![tree.root()];
    while let Some(id) = stack.pop() {
        if let Node::Split {
            feature,
            left,
            right,
            ..
        } = tree.node(id)
        {
            param_prior -= k.ln() + (space.thresholds[*feature].len() as f64).ln();
            stack.push(*left);
            stack.push(*right);
        }
    }
    fn depth(tree: &Tree, id: usize) -> usize {
        match tree.node(id) {
            Node::Leaf { .. } => 0,
            Node::Split { left, right, .. } => 1 + depth(tree, *left).max(depth(tree, *right)),
        }
    }
    let tree_prior = a.ln() - beta * ((1 + depth(tree, tree.root())) as f64).ln();
    oracle_log_likelihood(tree, data) + param_prior + tree_prior
}

/// Every structurally distinct tree over the grid up to the depth cap, with
/// exact normalized posterior masses.
pub fn enumerate_posterior(
    space: &EnumerationSpace,
    data: &Dataset,
    a: f64,
    beta: f64,
) -> Result<Vec<(Tree, f64)>> {
    fn specs(space: &EnumerationSpace, depth_left: usize) -> Vec<TreeSpec> {
        let mut out = vec![TreeSpec::Leaf];
        if depth_left == 0 {
            return out;
        }
        let children = specs(space, depth_left - 1);
        for (feature, grid) in space.thresholds.iter().enumerate() {
            for &threshold in grid {
                for left in &children {
                    for right in &children {
                        out.push(TreeSpec::Split {
                            feature,
                            threshold,
                            left: Box::new(left.clone()),
                            right: Box::new(right.clone()),
                        });
                    }
                }
            }
        }
        out
    }

    let trees: Vec<Tree> = specs(space, space.max_depth)
        .iter()
        .map(|spec| Tree::from_spec(spec, data.class_count()))
        .collect();

    let log_scores: Vec<f64> = trees
        .iter()
        .map(|t| oracle_log_joint(t, data, space, a, beta))
        .collect();
    let max = log_scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = log_scores.iter().map(|s| (s - max).exp()).collect();
    let total: f64 = weights.iter().sum();
    Ok(trees
        .into_iter()
        .zip(weights)
        .map(|(t, w)| (t, w / total))
        .collect())
}

/// Total-variation distance between an empirical distribution and the exact
/// one, both keyed by canonical tree fingerprints. Every empirical key must
/// exist in the exact map.
pub fn tv_distance(empirical: &HashMap<String, f64>, exact: &HashMap<String, f64>) -> Result<f64> {
    for key in empirical.keys() {
        if !exact.contains_key(key) {
            return Err(Error::DistributionKeyMismatch(key.clone()));
        }
    }
    let mut total = 0.0;
    for (key, &p) in exact {
        let q = empirical.get(key).copied().unwrap_or(0.0);
        total += (p - q).abs();
    }
    Ok(0.5 * total)
}
