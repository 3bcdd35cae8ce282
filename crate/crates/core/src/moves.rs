//! Stochastic tree moves and their transition-probability ratio.
//!
//! Four structural moves: Grow splits a leaf, Prune collapses a split whose
//! children are both leaves, Change resamples a split's parameters, Swap
//! exchanges the parameters of two splits. Prune is restricted to
//! leaf-parent splits so that it is the exact reverse of Grow, which keeps
//! the forward/reverse ratio well defined.

use rand::Rng;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::model::SplitSpace;
use crate::tree::{populate_counts, NodeId, Tree};

pub const KIND_COUNT: usize = 4;

/// The four move kinds, in the fixed order used by every probability vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveKind {
    Grow,
    Prune,
    Change,
    Swap,
}

impl MoveKind {
    pub const ALL: [MoveKind; KIND_COUNT] = [
        MoveKind::Grow,
        MoveKind::Prune,
        MoveKind::Change,
        MoveKind::Swap,
    ];

    pub fn index(self) -> usize {
        match self {
            MoveKind::Grow => 0,
            MoveKind::Prune => 1,
            MoveKind::Change => 2,
            MoveKind::Swap => 3,
        }
    }
}

/// One proposed transition: what moved, where, with which parameters, and
/// the move-selection distribution in force when the kind was drawn.
#[derive(Debug, Clone)]
pub struct MoveRecord {
    pub kind: MoveKind,
    /// One node id for Grow/Prune/Change, two distinct ids for Swap, all in
    /// the pre-move tree's arena.
    pub targets: Vec<NodeId>,
    pub old_params: Option<(usize, f64)>,
    pub new_params: Option<(usize, f64)>,
    /// Distribution over kinds actually used for the draw (already
    /// renormalized over the valid moves of the pre-move tree).
    pub selection_probs: [f64; KIND_COUNT],
}

/// Which kinds can fire on this tree: Grow needs a leaf below the depth cap,
/// Prune a split with two leaf children, Change any split, Swap two splits.
pub fn valid_moves(tree: &Tree, max_depth: usize) -> [bool; KIND_COUNT] {
    let internal = tree.internal_nodes().len();
    [
        !tree.growable_leaves(max_depth).is_empty(),
        !tree.prunable_nodes().is_empty(),
        internal >= 1,
        internal >= 2,
    ]
}

/// Restrict `base` to the valid kinds and rescale to sum 1. `None` when no
/// valid kind has positive base probability.
pub fn renormalize(
    base: &[f64; KIND_COUNT],
    valid: &[bool; KIND_COUNT],
) -> Option<[f64; KIND_COUNT]> {
    let mut probs = [0.0; KIND_COUNT];
    let mut total = 0.0;
    for i in 0..KIND_COUNT {
        if valid[i] {
            probs[i] = base[i];
            total += base[i];
        }
    }
    if total <= 0.0 {
        return None;
    }
    for p in probs.iter_mut() {
        *p /= total;
    }
    Some(probs)
}

/// Single-uniform draw from a normalized kind distribution.
pub fn draw_kind<R: Rng>(probs: &[f64; KIND_COUNT], rng: &mut R) -> MoveKind {
    let u: f64 = rng.random();
    let mut cumulative = 0.0;
    let mut last = MoveKind::Grow;
    for kind in MoveKind::ALL {
        let p = probs[kind.index()];
        if p <= 0.0 {
            continue;
        }
        cumulative += p;
        last = kind;
        if u < cumulative {
            return kind;
        }
    }
    last
}

/// Apply `kind` to `tree`: uniform target choice, parameters drawn from
/// `space` where the move needs them, leaf counts repopulated from `data`.
/// `selection_probs` is stored in the returned record verbatim.
pub fn propose<R: Rng>(
    tree: &Tree,
    kind: MoveKind,
    data: &Dataset,
    space: &SplitSpace,
    max_depth: usize,
    selection_probs: [f64; KIND_COUNT],
    rng: &mut R,
) -> Result<(Tree, MoveRecord)> {
    let (mut new_tree, record) = match kind {
        MoveKind::Grow => {
            let growable = tree.growable_leaves(max_depth);
            if growable.is_empty() {
                return Err(Error::InvalidMove(kind));
            }
            let leaf = growable[rng.random_range(0..growable.len())];
            let (feature, threshold) = space.sample_split(rng);
            (
                tree.grow_at(leaf, feature, threshold),
                MoveRecord {
                    kind,
                    targets: vec![leaf],
                    old_params: None,
                    new_params: Some((feature, threshold)),
                    selection_probs,
                },
            )
        }
        MoveKind::Prune => {
            let prunable = tree.prunable_nodes();
            if prunable.is_empty() {
                return Err(Error::InvalidMove(kind));
            }
            let target = prunable[rng.random_range(0..prunable.len())];
            let old = tree.split_params(target);
            (
                tree.prune_at(target),
                MoveRecord {
                    kind,
                    targets: vec![target],
                    old_params: Some(old),
                    new_params: None,
                    selection_probs,
                },
            )
        }
        MoveKind::Change => {
            let internal = tree.internal_nodes();
            if internal.is_empty() {
                return Err(Error::InvalidMove(kind));
            }
            let target = internal[rng.random_range(0..internal.len())];
            let old = tree.split_params(target);
            let (feature, threshold) = space.sample_split(rng);
            (
                tree.change_at(target, feature, threshold),
                MoveRecord {
                    kind,
                    targets: vec![target],
                    old_params: Some(old),
                    new_params: Some((feature, threshold)),
                    selection_probs,
                },
            )
        }
        MoveKind::Swap => {
            let internal = tree.internal_nodes();
            if internal.len() < 2 {
                return Err(Error::InvalidMove(kind));
            }
            // uniform unordered pair of distinct nodes
            let first = rng.random_range(0..internal.len());
            let mut second = rng.random_range(0..internal.len() - 1);
            if second >= first {
                second += 1;
            }
            let (a, b) = (internal[first], internal[second]);
            (
                tree.swap_params(a, b),
                MoveRecord {
                    kind,
                    targets: vec![a, b],
                    old_params: Some(tree.split_params(a)),
                    new_params: Some(tree.split_params(b)),
                    selection_probs,
                },
            )
        }
    };
    populate_counts(&mut new_tree, data);
    Ok((new_tree, record))
}

/// `log q(reverse) - log q(forward)` for a recorded move.
///
/// `reverse_probs` must be the same base selection distribution the forward
/// draw used, renormalized over the valid moves of `new_tree`; a reverse
/// kind with zero probability yields `-inf`.
///
/// Grow forward density is `P(Grow) / |growable(T)| * mass(k, c)` and its
/// reverse is `P(Prune) / |prunable(T')|`; Prune mirrors it. Change keeps
/// the structure, so only selection, node-count, and parameter-mass terms
/// remain. Swap's pair choice and parameter exchange are symmetric.
pub fn log_q_ratio(
    record: &MoveRecord,
    old_tree: &Tree,
    new_tree: &Tree,
    reverse_probs: &[f64; KIND_COUNT],
    space: &SplitSpace,
    max_depth: usize,
) -> f64 {
    let fwd_p = record.selection_probs[record.kind.index()];
    debug_assert!(fwd_p > 0.0, "forward kind was drawn, so it has mass");
    match record.kind {
        MoveKind::Grow => {
            let rev_p = reverse_probs[MoveKind::Prune.index()];
            if rev_p <= 0.0 {
                return f64::NEG_INFINITY;
            }
            let (feature, _) = record.new_params.expect("grow records new params");
            let log_fwd = fwd_p.ln() - (old_tree.growable_leaves(max_depth).len() as f64).ln()
                + space.log_split_mass(feature);
            let log_rev = rev_p.ln() - (new_tree.prunable_nodes().len() as f64).ln();
            log_rev - log_fwd
        }
        MoveKind::Prune => {
            let rev_p = reverse_probs[MoveKind::Grow.index()];
            if rev_p <= 0.0 {
                return f64::NEG_INFINITY;
            }
            let (feature, _) = record.old_params.expect("prune records old params");
            let log_fwd = fwd_p.ln() - (old_tree.prunable_nodes().len() as f64).ln();
            let log_rev = rev_p.ln() - (new_tree.growable_leaves(max_depth).len() as f64).ln()
                + space.log_split_mass(feature);
            log_rev - log_fwd
        }
        MoveKind::Change => {
            let rev_p = reverse_probs[MoveKind::Change.index()];
            if rev_p <= 0.0 {
                return f64::NEG_INFINITY;
            }
            let (old_feature, _) = record.old_params.expect("change records old params");
            let (new_feature, _) = record.new_params.expect("change records new params");
            rev_p.ln() - fwd_p.ln() + (old_tree.internal_nodes().len() as f64).ln()
                - (new_tree.internal_nodes().len() as f64).ln()
                + space.log_split_mass(old_feature)
                - space.log_split_mass(new_feature)
        }
        MoveKind::Swap => {
            let rev_p = reverse_probs[MoveKind::Swap.index()];
            if rev_p <= 0.0 {
                return f64::NEG_INFINITY;
            }
            rev_p.ln() - fwd_p.ln()
        }
    }
}
