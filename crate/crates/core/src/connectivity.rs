//! Menger-based connectivity verifiers, domination checks, feasibility
//! certificates, and brute-force cut characterizations used as oracles.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::SplitFlowNetwork;
use crate::graph::{Graph, NodeSet};

/// Largest `|T ∪ S|` accepted by [`check_cut_characterization`].
pub const CUT_CHECK_CAP: usize = 20;
/// Largest node count accepted by [`check_subpartition_characterization`].
pub const SUBPARTITION_CHECK_CAP: usize = 12;

const PARALLEL_PAIRS: usize = 64;

fn check_pair(g: &Graph, u: usize, v: usize) -> Result<()> {
    if u == v {
        return Err(Error::param(format!("connectivity query needs distinct nodes, got {u} twice")));
    }
    for x in [u, v] {
        if !g.is_active(x) {
            return Err(Error::param(format!("node {x} is not in the graph")));
        }
    }
    Ok(())
}

/// `min(κ(u, v), cap)`: the number of internally disjoint u-v paths, where
/// an edge `uv` counts as one path.
pub fn local_connectivity(g: &Graph, u: usize, v: usize, cap: usize) -> Result<usize> {
    check_pair(g, u, v)?;
    if cap == 0 {
        return Err(Error::param("connectivity cap must be at least 1"));
    }
    Ok(SplitFlowNetwork::new(g, u, v).max_flow(cap))
}

/// Up to `limit` internally disjoint u-v paths, each listed from `u` to `v`.
pub fn disjoint_paths(g: &Graph, u: usize, v: usize, limit: usize) -> Result<Vec<Vec<usize>>> {
    check_pair(g, u, v)?;
    let mut net = SplitFlowNetwork::new(g, u, v);
    net.max_flow(limit);
    Ok(net.paths())
}

/// Why a graph fails to be k-connected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ConnectivityFailure {
    /// At most `k` nodes; a k-connected graph needs at least `k + 1`.
    TooFewNodes { nodes: usize },
    /// Removing `separator` (fewer than `k` nodes) disconnects `pair`.
    Separator { pair: (usize, usize), separator: NodeSet },
}

/// Non-adjacent pairs in the fixed check order: ascending degree sum, then
/// lexicographic.
fn nonadjacent_pairs(g: &Graph) -> Vec<(usize, usize)> {
    let nodes: Vec<usize> = g.nodes().collect();
    let mut pairs: Vec<(usize, usize)> = nodes
        .iter()
        .enumerate()
        .flat_map(|(i, &u)| nodes[i + 1..].iter().map(move |&v| (u, v)))
        .filter(|&(u, v)| !g.has_edge(u, v))
        .collect();
    pairs.sort_by_key(|&(u, v)| (g.degree(u) + g.degree(v), u, v));
    pairs
}

fn pair_separator(g: &Graph, u: usize, v: usize, k: usize) -> Option<NodeSet> {
    let mut net = SplitFlowNetwork::new(g, u, v);
    if net.max_flow(k) < k {
        Some(net.cut_nodes())
    } else {
        None
    }
}

/// First witness (in check order) that `g` is not k-connected, if any.
///
/// A graph on more than `k` nodes is k-connected iff every non-adjacent pair
/// has `κ ≥ k`: a vertex cut always separates some non-adjacent pair, and a
/// complete graph has none.
pub fn connectivity_failure(g: &Graph, k: usize) -> Option<ConnectivityFailure> {
    let n = g.node_count();
    if n <= k {
        return Some(ConnectivityFailure::TooFewNodes { nodes: n });
    }
    // A node of degree < k is separated from any non-neighbour by its neighbourhood.
    if let Some(v) = g.nodes().find(|&v| g.degree(v) < k) {
        if let Some(u) = g.nodes().find(|&u| u != v && !g.has_edge(u, v)) {
            let pair = (u.min(v), u.max(v));
            return Some(ConnectivityFailure::Separator {
                pair,
                separator: g.neighbors(v).iter().copied().collect(),
            });
        }
    }
    let pairs = nonadjacent_pairs(g);
    let probe = |&(u, v): &(usize, usize)| {
        pair_separator(g, u, v, k).map(|separator| ConnectivityFailure::Separator { pair: (u, v), separator })
    };
    if pairs.len() >= PARALLEL_PAIRS {
        pairs.par_iter().find_map_first(probe)
    } else {
        pairs.iter().find_map(probe)
    }
}

/// At least `k + 1` nodes and `k` internally disjoint paths between every pair.
pub fn is_k_connected(g: &Graph, k: usize) -> bool {
    connectivity_failure(g, k).is_none()
}

/// Whether every pair of nodes of `terminals` has `κ ≥ k` in `g`.
pub fn is_k_t_connected(g: &Graph, terminals: &NodeSet, k: usize) -> Result<bool> {
    if terminals.is_empty() {
        return Err(Error::param("terminal set must be nonempty"));
    }
    let t = terminals.as_slice();
    for (i, &u) in t.iter().enumerate() {
        for &v in &t[i + 1..] {
            if local_connectivity(g, u, v, k)? < k {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether every terminal has `k` internally disjoint paths to `root`.
pub fn is_k_rooted_connected(g: &Graph, root: usize, terminals: &NodeSet, k: usize) -> Result<bool> {
    for t in terminals.iter().filter(|&t| t != root) {
        if local_connectivity(g, t, root, k)? < k {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether every active node other than `root` has `κ(v, root) ≥ k`.
pub fn is_k_in_connected_to_root(g: &Graph, root: usize, k: usize) -> Result<bool> {
    if !g.is_active(root) {
        return Err(Error::param(format!("root {root} is not in the graph")));
    }
    is_k_rooted_connected(g, root, &g.node_set(), k)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Domination {
    pub dominating: bool,
    /// `|Γ(v) ∩ S|` for every active node `v` outside `S`.
    pub counts: BTreeMap<usize, usize>,
}

impl Domination {
    /// Nodes outside `S` with fewer than `m` neighbours in `S`.
    pub fn violators(&self, m: usize) -> Vec<usize> {
        self.counts.iter().filter(|(_, &c)| c < m).map(|(&v, _)| v).collect()
    }
}

/// Whether every node outside `s` has at least `m` neighbours in `s`.
pub fn is_m_dominating(g: &Graph, s: &NodeSet, m: usize) -> Domination {
    let counts: BTreeMap<usize, usize> = g
        .nodes()
        .filter(|&v| !s.contains(v))
        .map(|v| (v, g.neighbors(v).iter().filter(|&&u| s.contains(u)).count()))
        .collect();
    Domination {
        dominating: counts.values().all(|&c| c >= m),
        counts,
    }
}

/// k internally disjoint paths between one pair of solution nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairWitness {
    pub pair: (usize, usize),
    pub paths: Vec<Vec<usize>>,
}

/// Evidence that a node set is a k-connected m-dominating set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub domination_counts: BTreeMap<usize, usize>,
    pub connectivity_witnesses: Vec<PairWitness>,
}

/// Builds a certificate for `set`, or explains why `set` is not a (k,m)-cds.
pub fn certify(g: &Graph, set: &NodeSet, k: usize, m: usize) -> Result<Certificate> {
    let domination = is_m_dominating(g, set, m);
    if !domination.dominating {
        return Err(Error::infeasible(
            format!("set is not {m}-dominating"),
            domination.violators(m),
        ));
    }
    let h = g.induced_subgraph(set);
    if let Some(failure) = connectivity_failure(&h, k) {
        let witness = match failure {
            ConnectivityFailure::TooFewNodes { .. } => set.as_slice().to_vec(),
            ConnectivityFailure::Separator { separator, .. } => separator.as_slice().to_vec(),
        };
        return Err(Error::infeasible(format!("induced subgraph is not {k}-connected"), witness));
    }
    let members = set.as_slice();
    let pairs: Vec<(usize, usize)> = members
        .iter()
        .enumerate()
        .flat_map(|(i, &u)| members[i + 1..].iter().map(move |&v| (u, v)))
        .collect();
    let witnesses = pairs
        .par_iter()
        .map(|&(u, v)| {
            disjoint_paths(&h, u, v, k).map(|paths| PairWitness { pair: (u, v), paths })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Certificate {
        domination_counts: domination.counts,
        connectivity_witnesses: witnesses,
    })
}

/// Re-checks a certificate from scratch against the graph, without flows.
pub fn validate_certificate(g: &Graph, set: &NodeSet, k: usize, m: usize, cert: &Certificate) -> std::result::Result<(), String> {
    for v in g.nodes().filter(|&v| !set.contains(v)) {
        let actual = g.neighbors(v).iter().filter(|&&u| set.contains(u)).count();
        match cert.domination_counts.get(&v) {
            Some(&c) if c == actual && c >= m => {}
            Some(&c) => return Err(format!("node {v}: claimed count {c}, actual {actual}, need {m}")),
            None => return Err(format!("node {v} missing from domination counts")),
        }
    }
    if set.len() <= k {
        return Err(format!("{} nodes cannot be {k}-connected", set.len()));
    }
    let mut seen = BTreeMap::new();
    for w in &cert.connectivity_witnesses {
        let (u, v) = w.pair;
        if w.paths.len() < k {
            return Err(format!("pair ({u}, {v}) has {} paths, need {k}", w.paths.len()));
        }
        let mut interior = NodeSet::new();
        for p in &w.paths {
            if p.first() != Some(&u) || p.last() != Some(&v) {
                return Err(format!("pair ({u}, {v}): path {p:?} has wrong endpoints"));
            }
            if let Some(x) = p.iter().find(|&&x| !set.contains(x)) {
                return Err(format!("pair ({u}, {v}): path leaves the set at node {x}"));
            }
            if let Some(e) = p.windows(2).find(|e| !g.has_edge(e[0], e[1])) {
                return Err(format!("pair ({u}, {v}): ({}, {}) is not an edge", e[0], e[1]));
            }
            for &x in &p[1..p.len() - 1] {
                if !interior.insert(x) || x == u || x == v {
                    return Err(format!("pair ({u}, {v}): paths share interior node {x}"));
                }
            }
        }
        seen.insert((u.min(v), u.max(v)), ());
    }
    let members = set.as_slice();
    for (i, &u) in members.iter().enumerate() {
        for &v in &members[i + 1..] {
            if !seen.contains_key(&(u, v)) {
                return Err(format!("no witness for pair ({u}, {v})"));
            }
        }
    }
    Ok(())
}

/// Checks `|Γ(A) \ {r}| + |A ∩ R| ≥ k` for every nonempty `A ⊆ T ∪ S`, with
/// Γ taken in `H_r = g_r[T ∪ S ∪ {r}]`. By Menger this holds iff every node
/// of `T ∪ S` has `k` internally disjoint paths to `r` in `H_r`.
pub fn check_cut_characterization(
    g_r: &Graph,
    root: usize,
    terminals: &NodeSet,
    extra: &NodeSet,
    attach: &NodeSet,
    k: usize,
) -> Result<bool> {
    let ground = terminals.union(extra);
    if ground.len() > CUT_CHECK_CAP {
        return Err(Error::CapExceeded {
            what: "cut characterization ground set",
            size: ground.len(),
            cap: CUT_CHECK_CAP,
        });
    }
    let nodes = ground.as_slice();
    let index: BTreeMap<usize, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let neighbor_masks: Vec<u32> = nodes
        .iter()
        .map(|&v| {
            g_r.neighbors(v)
                .iter()
                .filter_map(|u| index.get(u))
                .fold(0u32, |acc, &i| acc | 1 << i)
        })
        .collect();
    let attach_mask = nodes
        .iter()
        .enumerate()
        .filter(|(_, &v)| attach.contains(v) && g_r.has_edge(v, root))
        .fold(0u32, |acc, (i, _)| acc | 1 << i);
    for a in 1u32..1 << nodes.len() {
        let mut gamma = 0u32;
        for (i, mask) in neighbor_masks.iter().enumerate() {
            if a >> i & 1 == 1 {
                gamma |= mask;
            }
        }
        gamma &= !a;
        let value = gamma.count_ones() + (a & attach_mask).count_ones();
        if (value as usize) < k {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks `|V \ (A ∪ B)| ≥ k` for all disjoint nonempty `A, B` with no edge
/// between them, by explicit enumeration of both sides.
pub fn check_subpartition_characterization(g: &Graph, k: usize) -> Result<bool> {
    let nodes: Vec<usize> = g.nodes().collect();
    let n = nodes.len();
    if n > SUBPARTITION_CHECK_CAP {
        return Err(Error::CapExceeded {
            what: "subpartition check graph",
            size: n,
            cap: SUBPARTITION_CHECK_CAP,
        });
    }
    let adjacency: Vec<u32> = nodes
        .iter()
        .map(|&u| {
            nodes
                .iter()
                .enumerate()
                .filter(|(_, &v)| g.has_edge(u, v))
                .fold(0u32, |acc, (i, _)| acc | 1 << i)
        })
        .collect();
    let all = (1u32 << n) - 1;
    for a in 1..=all {
        let rest = all & !a;
        let mut b = rest;
        while b != 0 {
            let crossing = (0..n).any(|i| a >> i & 1 == 1 && adjacency[i] & b != 0);
            if !crossing && (n - (a | b).count_ones() as usize) < k {
                return Ok(false);
            }
            b = (b - 1) & rest;
        }
    }
    Ok(true)
}
