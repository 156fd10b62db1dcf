//! Backtracking (BT) algorithms and their computation trees.
//!
//! An algorithm supplies an ordering function, realized as a comparison
//! key on candidate items, and a choice function returning an ordered
//! list over `{accept, reject, STOP}`. The tree builder repeatedly takes
//! the first remaining item under the ordering and branches on the
//! decisions listed before `STOP`.

mod adaptivity;
mod reference;

pub use adaptivity::{check_adaptivity, AdaptivityReport, Probe};
pub use reference::{
    full_backtrack, greedy_largest_fit, reference_algorithms, width_capped, ItemOrder, ReferenceAlgorithm,
};

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::knapsack::{Instance, Selector};

/// Default node budget for tree construction.
pub const DEFAULT_MAX_NODES: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Decision {
    Reject,
    Accept,
}

impl Decision {
    pub fn bit(self) -> u8 {
        match self {
            Decision::Reject => 0,
            Decision::Accept => 1,
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bit())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Choice {
    Decide(Decision),
    Stop,
}

/// Output of a choice function. Only the prefix before `STOP` is explored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceList(Vec<Choice>);

impl ChoiceList {
    pub fn new(entries: Vec<Choice>) -> Result<Self> {
        for (i, c) in entries.iter().enumerate() {
            if entries[..i].contains(c) {
                return Err(Error::Input(format!("choice {c:?} listed twice")));
            }
        }
        Ok(ChoiceList(entries))
    }

    pub fn only(d: Decision) -> Self {
        ChoiceList(vec![Choice::Decide(d)])
    }

    pub fn stop() -> Self {
        ChoiceList(vec![Choice::Stop])
    }

    pub fn entries(&self) -> &[Choice] {
        &self.0
    }

    /// Decisions before the first `STOP`, in order.
    pub fn explored(&self) -> Vec<Decision> {
        self.0
            .iter()
            .map_while(|c| match c {
                Choice::Decide(d) => Some(*d),
                Choice::Stop => None,
            })
            .collect()
    }
}

/// Which arguments an ordering function may read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AdaptivityClass {
    /// Reads nothing.
    Fixed,
    /// Reads the items seen so far but not the decisions.
    Adaptive,
    /// Reads items and decisions.
    FullyAdaptive,
}

/// What an algorithm sees at depth `k`: the capacity, the `k` items
/// considered so far and the decisions taken on them.
#[derive(Debug, Clone, Copy)]
pub struct History<'a> {
    pub capacity: &'a BigInt,
    pub items: &'a [BigInt],
    pub decisions: &'a [Decision],
}

impl History<'_> {
    pub fn depth(&self) -> usize {
        self.items.len()
    }

    pub fn accepted_sum(&self) -> BigInt {
        self.items.iter().zip(self.decisions).filter(|(_, d)| **d == Decision::Accept).map(|(x, _)| x).sum()
    }
}

/// Comparison key; smaller keys come first in the ordering.
pub type OrderKey = Vec<BigInt>;

pub trait BtAlgorithm: Send + Sync {
    fn name(&self) -> String;

    fn class(&self) -> AdaptivityClass;

    /// Ordering function `r^k`, evaluated on one candidate item.
    fn order_key(&self, history: &History<'_>, candidate: &BigInt) -> OrderKey;

    /// Choice function `c^k` for the item `next`.
    fn choices(&self, history: &History<'_>, next: &BigInt) -> ChoiceList;
}

/// Ranks `candidates` by the algorithm's ordering, rejecting ties.
pub(crate) fn rank(alg: &dyn BtAlgorithm, history: &History<'_>, candidates: &[BigInt]) -> Result<Vec<usize>> {
    let keys: Vec<OrderKey> = candidates.iter().map(|c| alg.order_key(history, c)).collect();
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    for w in order.windows(2) {
        if keys[w[0]] == keys[w[1]] {
            let tied = order.iter().filter(|&&i| keys[i] == keys[w[0]]).map(|&i| candidates[i].clone()).collect();
            return Err(Error::OrderingTie { items: tied });
        }
    }
    Ok(order)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub parent: Option<usize>,
    pub depth: usize,
    /// Instance index of `D_depth` and the decision `a_depth`; `None` at the root.
    pub step: Option<(usize, Decision)>,
    pub children: Vec<usize>,
}

/// Label of a node: instance indices `D_1..D_k` and decisions `a_1..a_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub items: Vec<usize>,
    pub decisions: Vec<Decision>,
}

impl Label {
    /// Instance indices accepted along this label.
    pub fn accepted(&self) -> Selector {
        self.items.iter().zip(&self.decisions).filter(|(_, d)| **d == Decision::Accept).map(|(&i, _)| i).collect()
    }
}

/// Partial solutions present at one depth of a tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeLevelSet {
    pub depth: usize,
    pub partial_solutions: Vec<Label>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComputationTree {
    nodes: Vec<Node>,
    n: usize,
    level_sizes: Vec<usize>,
}

impl ComputationTree {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        0
    }

    /// Item count of the instance the tree was built on.
    pub fn instance_len(&self) -> usize {
        self.n
    }

    /// Number of nodes at each depth `0..=deepest`.
    pub fn level_sizes(&self) -> &[usize] {
        &self.level_sizes
    }

    pub fn label(&self, id: usize) -> Label {
        label_in(&self.nodes, id)
    }

    pub fn level(&self, depth: usize) -> TreeLevelSet {
        let partial_solutions =
            self.nodes.iter().enumerate().filter(|(_, n)| n.depth == depth).map(|(id, _)| self.label(id)).collect();
        TreeLevelSet { depth, partial_solutions }
    }

    /// Checks the label-extension invariants at every node.
    pub fn check_structure(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Internal(msg));
        if self.nodes.is_empty() || self.nodes[0].parent.is_some() || self.nodes[0].step.is_some() {
            return bad("root must exist with an empty label".into());
        }
        for (id, node) in self.nodes.iter().enumerate() {
            let mut shared_item = None;
            let mut seen = Vec::new();
            for &c in &node.children {
                let child = &self.nodes[c];
                if child.parent != Some(id) || child.depth != node.depth + 1 {
                    return bad(format!("node {c} does not extend its parent {id}"));
                }
                let Some((item, d)) = child.step else {
                    return bad(format!("node {c} has an empty step"));
                };
                if *shared_item.get_or_insert(item) != item {
                    return bad(format!("children of {id} disagree on the next item"));
                }
                if seen.contains(&d) {
                    return bad(format!("children of {id} repeat decision {d}"));
                }
                seen.push(d);
            }
            let label = self.label(id);
            let mut items = label.items.clone();
            items.sort_unstable();
            items.dedup();
            if items.len() != label.items.len() || label.items.len() != node.depth {
                return bad(format!("node {id} label repeats an item"));
            }
        }
        Ok(())
    }
}

/// Maximum number of nodes at a single depth.
pub fn tree_width(tree: &ComputationTree) -> usize {
    tree.level_sizes.iter().copied().max().unwrap_or(0)
}

pub fn build_tree(alg: &dyn BtAlgorithm, instance: &Instance) -> Result<ComputationTree> {
    build_tree_with_budget(alg, instance, DEFAULT_MAX_NODES)
}

/// Builds `T_A(I)` breadth-first, so node ids are level by level and each
/// node's children are left to right.
pub fn build_tree_with_budget(alg: &dyn BtAlgorithm, instance: &Instance, max_nodes: usize) -> Result<ComputationTree> {
    let n = instance.len();
    if n == 0 {
        return Err(Error::Input("instance has no items".into()));
    }
    let mut nodes = vec![Node { parent: None, depth: 0, step: None, children: Vec::new() }];
    let mut level_sizes = vec![1];
    let mut frontier = vec![0usize];
    for depth in 0..n {
        let mut next_frontier = Vec::new();
        for &id in &frontier {
            let label = label_in(&nodes, id);
            let seen: Vec<BigInt> = label.items.iter().map(|&i| instance.items()[i].clone()).collect();
            let history = History { capacity: instance.capacity(), items: &seen, decisions: &label.decisions };
            let remaining: Vec<usize> = (0..n).filter(|i| !label.items.contains(i)).collect();
            let candidates: Vec<BigInt> = remaining.iter().map(|&i| instance.items()[i].clone()).collect();
            let order = rank(alg, &history, &candidates)?;
            let next = remaining[order[0]];
            for d in alg.choices(&history, &instance.items()[next]).explored() {
                if nodes.len() >= max_nodes {
                    return Err(Error::budget("computation tree", format!("more than {max_nodes} nodes"), max_nodes));
                }
                let child = nodes.len();
                nodes.push(Node { parent: Some(id), depth: depth + 1, step: Some((next, d)), children: Vec::new() });
                nodes[id].children.push(child);
                next_frontier.push(child);
            }
        }
        if next_frontier.is_empty() {
            break;
        }
        level_sizes.push(next_frontier.len());
        frontier = next_frontier;
    }
    Ok(ComputationTree { nodes, n, level_sizes })
}

fn label_in(nodes: &[Node], id: usize) -> Label {
    let mut items = Vec::new();
    let mut decisions = Vec::new();
    let mut cur = Some(id);
    while let Some(v) = cur {
        if let Some((item, d)) = nodes[v].step {
            items.push(item);
            decisions.push(d);
        }
        cur = nodes[v].parent;
    }
    items.reverse();
    decisions.reverse();
    Label { items, decisions }
}

/// One complete leaf: decisions per instance index and the accepted weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafSolution {
    pub decisions: Vec<Decision>,
    pub accepted: Selector,
    pub sum: BigInt,
}

/// Decision vectors of all depth-`n` leaves, in left-to-right order.
/// Dead leaves above depth `n` contribute nothing.
pub fn extract_solutions(tree: &ComputationTree, instance: &Instance) -> Vec<LeafSolution> {
    tree.nodes
        .iter()
        .enumerate()
        .filter(|(_, node)| node.depth == instance.len() && node.children.is_empty())
        .map(|(id, _)| {
            let label = tree.label(id);
            let mut decisions = vec![Decision::Reject; instance.len()];
            for (&i, &d) in label.items.iter().zip(&label.decisions) {
                decisions[i] = d;
            }
            let accepted = label.accepted();
            let sum = accepted.indices().iter().map(|&i| &instance.items()[i]).sum();
            LeafSolution { decisions, accepted, sum }
        })
        .collect()
}

/// Largest leaf sum not exceeding the capacity.
pub fn best_feasible(solutions: &[LeafSolution], capacity: &BigInt) -> Option<BigInt> {
    solutions.iter().map(|s| &s.sum).filter(|s| *s <= capacity).max().cloned()
}
