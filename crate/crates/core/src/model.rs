//! Posterior scoring for classification trees.
//!
//! The joint density factors into three parts, all on the log scale:
//!
//! * a Dirichlet-multinomial marginal likelihood per leaf (unit
//!   concentration, so leaf class probabilities are integrated out and the
//!   sampler state is structure plus split parameters only),
//! * a per-split parameter prior: uniform feature choice times a uniform
//!   threshold over that feature's observed range (or over its grid points
//!   in a discretized space),
//! * a depth prior `a / (1 + depth)^beta` that penalizes deep trees.
//!
//! Prediction at a leaf uses the posterior-mean class distribution
//! `(count + 1) / (total + classes)`.

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::tree::Tree;

/// Where split parameters live: the observed continuous ranges of a dataset,
/// or an explicit finite grid of thresholds per feature.
///
/// The same object serves as the parameter prior and the proposal
/// distribution for Grow/Change, which is what makes their densities cancel
/// in the acceptance ratio.
#[derive(Debug, Clone, PartialEq)]
pub enum SplitSpace {
    Continuous { ranges: Vec<(f64, f64)> },
    Grid { thresholds: Vec<Vec<f64>> },
}

impl SplitSpace {
    pub fn from_dataset(data: &Dataset) -> Self {
        SplitSpace::Continuous {
            ranges: data.feature_ranges().to_vec(),
        }
    }

    pub fn n_features(&self) -> usize {
        match self {
            SplitSpace::Continuous { ranges } => ranges.len(),
            SplitSpace::Grid { thresholds } => thresholds.len(),
        }
    }

    /// Log mass/density of drawing `(feature, threshold)` for the given
    /// feature: `log(1/K)` for the feature choice plus the threshold term.
    /// A zero-width range is a point mass and contributes `log(1/K)` only.
    pub fn log_split_mass(&self, feature: usize) -> f64 {
        let k = self.n_features() as f64;
        match self {
            SplitSpace::Continuous { ranges } => {
                let (lo, hi) = ranges[feature];
                let width = hi - lo;
                if width > 0.0 {
                    -k.ln() - width.ln()
                } else {
                    -k.ln()
                }
            }
            SplitSpace::Grid { thresholds } => -k.ln() - (thresholds[feature].len() as f64).ln(),
        }
    }

    /// Draw `(feature, threshold)`: feature uniform over `0..K`, threshold
    /// uniform over the feature's range or grid. Consumes exactly two RNG
    /// draws regardless of range width.
    pub fn sample_split<R: rand::Rng>(&self, rng: &mut R) -> (usize, f64) {
        let feature = rng.random_range(0..self.n_features());
        let threshold = match self {
            SplitSpace::Continuous { ranges } => {
                let (lo, hi) = ranges[feature];
                let u: f64 = rng.random();
                lo + u * (hi - lo)
            }
            SplitSpace::Grid { thresholds } => {
                let grid = &thresholds[feature];
                grid[rng.random_range(0..grid.len())]
            }
        };
        (feature, threshold)
    }
}

/// Scoring context: dataset, split space, prior hyperparameters, and a
/// cached log-gamma table for integer arguments.
#[derive(Debug, Clone)]
pub struct Model<'a> {
    data: &'a Dataset,
    space: SplitSpace,
    a: f64,
    beta: f64,
    lgamma: Vec<f64>,
}

impl<'a> Model<'a> {
    pub fn new(data: &'a Dataset, a: f64, beta: f64) -> Self {
        Self::with_space(data, SplitSpace::from_dataset(data), a, beta)
    }

    pub fn with_space(data: &'a Dataset, space: SplitSpace, a: f64, beta: f64) -> Self {
        // lnGamma at integer arguments via the factorial recurrence; exact at
        // 1 and 2, which keeps empty leaves at exactly zero likelihood.
        // All likelihood arguments are integers in 1..=N+C.
        let top = data.len() + data.class_count() + 1;
        let mut lgamma = Vec::with_capacity(top + 1);
        lgamma.push(f64::INFINITY); // gamma(0) diverges; index never used
        lgamma.push(0.0);
        for i in 1..top {
            let next = lgamma[i] + (i as f64).ln();
            lgamma.push(next);
        }
        Model {
            data,
            space,
            a,
            beta,
            lgamma,
        }
    }

    pub fn data(&self) -> &Dataset {
        self.data
    }

    pub fn space(&self) -> &SplitSpace {
        &self.space
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    fn lg(&self, i: usize) -> f64 {
        self.lgamma[i]
    }

    /// Dirichlet-multinomial marginal log-likelihood of the cached leaf
    /// counts. Each leaf with counts `n_1..n_C`, total `n`, contributes
    /// `lnG(C) - lnG(n + C) + sum_c lnG(n_c + 1)`; an empty leaf contributes
    /// exactly zero.
    pub fn log_likelihood(&self, tree: &Tree) -> f64 {
        let c = tree.class_count();
        let mut total = 0.0;
        for leaf in tree.leaves() {
            let counts = tree.leaf_counts(leaf);
            let n: u32 = counts.iter().sum();
            let mut term = self.lg(c) - self.lg(n as usize + c);
            for &count in counts {
                term += self.lg(count as usize + 1);
            }
            total += term;
        }
        total
    }

    /// `log a - beta * log(1 + depth)`.
    pub fn log_tree_prior(&self, tree: &Tree) -> f64 {
        self.a.ln() - self.beta * ((1 + tree.depth()) as f64).ln()
    }

    /// Depth-prior log ratio between two trees; the constant `a` cancels
    /// algebraically, so the result never depends on it.
    pub fn log_tree_prior_ratio(&self, from: &Tree, to: &Tree) -> f64 {
        self.beta * ((1 + from.depth()) as f64).ln() - self.beta * ((1 + to.depth()) as f64).ln()
    }

    /// Sum of split masses over every internal node.
    pub fn log_param_prior(&self, tree: &Tree) -> f64 {
        tree.internal_nodes()
            .iter()
            .map(|&id| {
                let (feature, _) = tree.split_params(id);
                self.space.log_split_mass(feature)
            })
            .sum()
    }

    /// Full unnormalized log posterior: likelihood + parameter prior +
    /// depth prior.
    pub fn log_joint(&self, tree: &Tree) -> f64 {
        self.log_likelihood(tree) + self.log_param_prior(tree) + self.log_tree_prior(tree)
    }
}

/// Posterior-mean class distribution at the leaf reached by `x`:
/// `(count_c + 1) / (total + C)`.
pub fn predict_proba(tree: &Tree, x: &[f64]) -> Vec<f64> {
    let leaf = tree.traverse(x);
    let counts = tree.leaf_counts(leaf);
    let n: u32 = counts.iter().sum();
    let denom = (n as usize + tree.class_count()) as f64;
    counts.iter().map(|&c| (c as f64 + 1.0) / denom).collect()
}

/// Class with the highest mean predicted probability across the ensemble;
/// ties go to the lowest class index. Errors on an empty ensemble.
pub fn predict_ensemble<'a, I>(trees: I, x: &[f64]) -> Result<usize>
where
    I: IntoIterator<Item = &'a Tree>,
{
    // summed probabilities; the argmax is unchanged by dividing out the count
    let mut total: Option<Vec<f64>> = None;
    for tree in trees {
        let probs = predict_proba(tree, x);
        match &mut total {
            None => total = Some(probs),
            Some(acc) => {
                for (a, p) in acc.iter_mut().zip(probs) {
                    *a += p;
                }
            }
        }
    }
    let total = total.ok_or(Error::EmptyEnsemble)?;
    let mut best = 0usize;
    for (i, &p) in total.iter().enumerate() {
        if p > total[best] {
            best = i;
        }
    }
    Ok(best)
}
