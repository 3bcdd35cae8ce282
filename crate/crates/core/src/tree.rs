//! Arena-backed binary classification trees.
//!
//! A tree is a flat arena of nodes plus a root id. Split nodes carry a
//! `(feature, threshold)` pair; leaves carry per-class counts of the training
//! rows routed to them. Trees are treated as immutable values by the
//! samplers: every move produces a fresh tree.

use crate::data::Dataset;

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: NodeId,
        right: NodeId,
    },
    Leaf {
        counts: Vec<u32>,
    },
}

impl Node {
    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Leaf { .. })
    }
}

/// Declarative tree shape for tests and enumeration.
#[derive(Debug, Clone)]
pub enum TreeSpec {
    Leaf,
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeSpec>,
        right: Box<TreeSpec>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    nodes: Vec<Node>,
    root: NodeId,
    class_count: usize,
}

impl Tree {
    /// Single-leaf tree with zeroed counts.
    pub fn single_node(class_count: usize) -> Self {
        Tree {
            nodes: vec![Node::Leaf {
                counts: vec![0; class_count],
            }],
            root: 0,
            class_count,
        }
    }

    /// Build a tree from a [`TreeSpec`]; counts start at zero.
    pub fn from_spec(spec: &TreeSpec, class_count: usize) -> Self {
        fn build(spec: &TreeSpec, nodes: &mut Vec<Node>, class_count: usize) -> NodeId {
            match spec {
                TreeSpec::Leaf => {
                    nodes.push(Node::Leaf {
                        counts: vec![0; class_count],
                    });
                    nodes.len() - 1
                }
                TreeSpec::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    let id = nodes.len();
                    // placeholder, patched once children exist
                    nodes.push(Node::Leaf { counts: Vec::new() });
                    let l = build(left, nodes, class_count);
                    let r = build(right, nodes, class_count);
                    nodes[id] = Node::Split {
                        feature: *feature,
                        threshold: *threshold,
                        left: l,
                        right: r,
                    };
                    id
                }
            }
        }
        let mut nodes = Vec::new();
        let root = build(spec, &mut nodes, class_count);
        Tree {
            nodes,
            root,
            class_count,
        }
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Leaf ids in preorder.
    pub fn leaves(&self) -> Vec<NodeId> {
        let mut out = Vec::new();
        self.preorder(|id, node| {
            if node.is_leaf() {
                out.push(id);
            }
        });
        out
    }

    /// Split-node ids in preorder.
    pub fn internal_nodes(&self) -> Vec<NodeId> {
        let mut out = Vec::new();
        self.preorder(|id, node| {
            if !node.is_leaf() {
                out.push(id);
            }
        });
        out
    }

    /// Split nodes whose two children are both leaves (collapse candidates).
    pub fn prunable_nodes(&self) -> Vec<NodeId> {
        let mut out = Vec::new();
        self.preorder(|id, node| {
            if let Node::Split { left, right, .. } = node {
                if self.nodes[*left].is_leaf() && self.nodes[*right].is_leaf() {
                    out.push(id);
                }
            }
        });
        out
    }

    /// Leaves that may still be split under the depth cap.
    pub fn growable_leaves(&self, max_depth: usize) -> Vec<NodeId> {
        let depths = self.node_depths();
        self.leaves()
            .into_iter()
            .filter(|&id| depths[id] < max_depth)
            .collect()
    }

    /// Length of the longest root-to-leaf edge path; a lone root has depth 0.
    pub fn depth(&self) -> usize {
        fn go(tree: &Tree, id: NodeId) -> usize {
            match &tree.nodes[id] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(tree, *left).max(go(tree, *right)),
            }
        }
        go(self, self.root)
    }

    /// Depth of every node, indexed by node id (unreachable ids get 0).
    pub fn node_depths(&self) -> Vec<usize> {
        let mut depths = vec![0usize; self.nodes.len()];
        let mut stack = vec![(self.root, 0usize)];
        while let Some((id, d)) = stack.pop() {
            depths[id] = d;
            if let Node::Split { left, right, .. } = &self.nodes[id] {
                stack.push((*left, d + 1));
                stack.push((*right, d + 1));
            }
        }
        depths
    }

    fn preorder<F: FnMut(NodeId, &Node)>(&self, mut visit: F) {
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id];
            visit(id, node);
            if let Node::Split { left, right, .. } = node {
                stack.push(*right);
                stack.push(*left);
            }
        }
    }

    /// Route a feature vector to its leaf: descend left iff `x[feature] <= threshold`.
    pub fn traverse(&self, x: &[f64]) -> NodeId {
        let mut id = self.root;
        loop {
            match &self.nodes[id] {
                Node::Leaf { .. } => return id,
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
    }

    pub fn leaf_counts(&self, id: NodeId) -> &[u32] {
        match &self.nodes[id] {
            Node::Leaf { counts } => counts,
            Node::Split { .. } => panic!("node {id} is not a leaf"),
        }
    }

    pub fn split_params(&self, id: NodeId) -> (usize, f64) {
        match &self.nodes[id] {
            Node::Split {
                feature, threshold, ..
            } => (*feature, *threshold),
            Node::Leaf { .. } => panic!("node {id} is not a split"),
        }
    }

    /// Replace leaf `leaf` with a split on `(feature, threshold)` over two
    /// fresh empty leaves. Counts are left stale; callers repopulate.
    pub fn grow_at(&self, leaf: NodeId, feature: usize, threshold: f64) -> Tree {
        debug_assert!(self.nodes[leaf].is_leaf());
        let mut nodes = self.nodes.clone();
        let l = nodes.len();
        nodes.push(Node::Leaf {
            counts: vec![0; self.class_count],
        });
        let r = nodes.len();
        nodes.push(Node::Leaf {
            counts: vec![0; self.class_count],
        });
        nodes[leaf] = Node::Split {
            feature,
            threshold,
            left: l,
            right: r,
        };
        Tree {
            nodes,
            root: self.root,
            class_count: self.class_count,
        }
    }

    /// Collapse the subtree under split node `target` into a leaf, then
    /// compact the arena so every stored node is reachable.
    pub fn prune_at(&self, target: NodeId) -> Tree {
        debug_assert!(!self.nodes[target].is_leaf());
        let mut pruned = self.clone();
        pruned.nodes[target] = Node::Leaf {
            counts: vec![0; self.class_count],
        };
        pruned.compact()
    }

    /// Overwrite the split parameters of `target`.
    pub fn change_at(&self, target: NodeId, feature: usize, threshold: f64) -> Tree {
        let mut tree = self.clone();
        match &mut tree.nodes[target] {
            Node::Split {
                feature: f,
                threshold: t,
                ..
            } => {
                *f = feature;
                *t = threshold;
            }
            Node::Leaf { .. } => panic!("node {target} is not a split"),
        }
        tree
    }

    /// Exchange the split parameters of two split nodes.
    pub fn swap_params(&self, first: NodeId, second: NodeId) -> Tree {
        let (fa, ta) = self.split_params(first);
        let (fb, tb) = self.split_params(second);
        self.change_at(first, fb, tb).change_at(second, fa, ta)
    }

    /// Rebuild the arena in preorder, dropping unreachable nodes.
    fn compact(&self) -> Tree {
        fn copy(tree: &Tree, id: NodeId, nodes: &mut Vec<Node>) -> NodeId {
            match &tree.nodes[id] {
                Node::Leaf { counts } => {
                    nodes.push(Node::Leaf {
                        counts: counts.clone(),
                    });
                    nodes.len() - 1
                }
                Node::Split {
                    feature, threshold, ..
                } => {
                    let new_id = nodes.len();
                    nodes.push(Node::Leaf { counts: Vec::new() });
                    let (feature, threshold) = (*feature, *threshold);
                    let (l, r) = match &tree.nodes[id] {
                        Node::Split { left, right, .. } => (*left, *right),
                        Node::Leaf { .. } => unreachable!(),
                    };
                    let l = copy(tree, l, nodes);
                    let r = copy(tree, r, nodes);
                    nodes[new_id] = Node::Split {
                        feature,
                        threshold,
                        left: l,
                        right: r,
                    };
                    new_id
                }
            }
        }
        let mut nodes = Vec::new();
        let root = copy(self, self.root, &mut nodes);
        Tree {
            nodes,
            root,
            class_count: self.class_count,
        }
    }

    /// Exact structural fingerprint: preorder shape and split parameters
    /// (bit-exact thresholds), ignoring leaf counts.
    pub fn canonical_key(&self) -> String {
        fn go(tree: &Tree, id: NodeId, out: &mut String) {
            match &tree.nodes[id] {
                Node::Leaf { .. } => out.push('L'),
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    out.push_str(&format!("S{}:{:x}(", feature, threshold.to_bits()));
                    go(tree, *left, out);
                    out.push(',');
                    go(tree, *right, out);
                    out.push(')');
                }
            }
        }
        let mut out = String::new();
        go(self, self.root, &mut out);
        out
    }

    /// Structural sanity check used by property tests: every arena slot is
    /// reachable exactly once, split parameters are within `ranges`, and
    /// every leaf count vector has `class_count` entries.
    pub fn is_valid(&self, feature_count: usize, ranges: &[(f64, f64)]) -> bool {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            if id >= self.nodes.len() || seen[id] {
                return false;
            }
            seen[id] = true;
            match &self.nodes[id] {
                Node::Leaf { counts } => {
                    if counts.len() != self.class_count {
                        return false;
                    }
                }
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    if *feature >= feature_count {
                        return false;
                    }
                    let (lo, hi) = ranges[*feature];
                    if !(*threshold >= lo && *threshold <= hi) {
                        return false;
                    }
                    stack.push(*left);
                    stack.push(*right);
                }
            }
        }
        seen.iter().all(|&s| s)
    }
}

/// Zero every leaf count, then route each training row to its leaf and count
/// its label there. Leaves no training row reaches keep all-zero counts.
pub fn populate_counts(tree: &mut Tree, data: &Dataset) {
    for node in tree.nodes.iter_mut() {
        if let Node::Leaf { counts } = node {
            counts.clear();
            counts.resize(data.class_count(), 0);
        }
    }
    for i in 0..data.len() {
        let leaf = tree.traverse(data.row(i));
        match &mut tree.nodes[leaf] {
            Node::Leaf { counts } => counts[data.label(i)] += 1,
            Node::Split { .. } => unreachable!("traverse returns a leaf"),
        }
    }
}
