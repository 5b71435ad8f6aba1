//! Rooted connectivity stage: choose extra nodes `S` outside the fixed set
//! so that every terminal has `k` internally disjoint paths to the root
//! inside `G_r[fixed ∪ S]`.

use serde::{Deserialize, Serialize};

use crate::connectivity::local_connectivity;
use crate::error::{Error, Result};
use crate::flow::SplitFlowNetwork;
use crate::graph::{Graph, NodeSet};
use crate::subsets;
use crate::Weight;

/// Largest pool accepted by the exact backend.
pub const EXACT_POOL_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    #[default]
    FlowUnion,
    Exact,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::FlowUnion => "flow-union",
            Backend::Exact => "exact",
        }
    }
}

/// How pool nodes are priced in the flow backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pricing {
    /// Cost `w_v` on the internal arc of each pool node.
    NodeWeight,
    /// Cost `w_u + w_v` on each edge arc, nodes free; fixed and already
    /// selected nodes contribute 0 to the sum.
    EdgeCost,
}

#[derive(Debug, Clone)]
pub struct RootedProblem<'a> {
    /// `G_r`: the graph with the root attached (or a real node acting as root).
    pub graph: Graph,
    pub root: usize,
    /// Nodes that must reach the root by `k` internally disjoint paths.
    pub terminals: NodeSet,
    /// Nodes always present at zero cost (terminals, attachment, root).
    pub fixed: NodeSet,
    /// Node weights; slots past the end (a virtual root) weigh 0.
    pub weights: &'a [Weight],
    pub k: usize,
}

/// `c_uv = w_u + w_v`.
pub fn conversion_cost(wu: Weight, wv: Weight) -> Weight {
    wu + wv
}

/// Degrees and costs of a chosen subgraph `(S, F)` under `c_uv = w_u + w_v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConversionCheck {
    pub nodes: usize,
    pub edges: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    pub node_weight: Weight,
    pub edge_cost: Weight,
    /// `min_degree · w(S) ≤ c(F) ≤ max_degree · w(S)`.
    pub holds: bool,
}

/// Evaluates the degree sandwich for the subgraph spanned by `edges`.
pub fn conversion_check(edges: &[(usize, usize)], weight: impl Fn(usize) -> Weight) -> ConversionCheck {
    let nodes: NodeSet = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    let slots = nodes.largest().map_or(0, |v| v + 1);
    let mut degree = vec![0usize; slots];
    for &(u, v) in edges {
        degree[u] += 1;
        degree[v] += 1;
    }
    let min_degree = nodes.iter().map(|v| degree[v]).min().unwrap_or(0);
    let max_degree = nodes.iter().map(|v| degree[v]).max().unwrap_or(0);
    let node_weight: Weight = nodes.iter().map(&weight).sum();
    let edge_cost: Weight = edges.iter().map(|&(u, v)| conversion_cost(weight(u), weight(v))).sum();
    let lo = min_degree as u128 * node_weight as u128;
    let hi = max_degree as u128 * node_weight as u128;
    ConversionCheck {
        nodes: nodes.len(),
        edges: edges.len(),
        min_degree,
        max_degree,
        node_weight,
        edge_cost,
        holds: lo <= edge_cost as u128 && edge_cost as u128 <= hi,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootedSolution {
    pub extra: NodeSet,
    pub backend: Backend,
    /// Edges routed by the edge-cost backend before pruning.
    pub routed_edges: Vec<(usize, usize)>,
}

impl RootedProblem<'_> {
    pub fn weight(&self, v: usize) -> Weight {
        if self.fixed.contains(v) {
            0
        } else {
            self.weights.get(v).copied().unwrap_or(0)
        }
    }

    pub fn pool(&self) -> NodeSet {
        self.graph.nodes().filter(|&v| !self.fixed.contains(v)).collect()
    }

    fn check(&self) -> Result<()> {
        if !self.graph.is_active(self.root) {
            return Err(Error::param(format!("root {} is not in the graph", self.root)));
        }
        if !self.terminals.is_subset(&self.fixed) || !self.fixed.contains(self.root) {
            return Err(Error::param("terminals and root must be fixed nodes"));
        }
        Ok(())
    }

    /// First terminal with fewer than `k` paths to the root in `G_r[fixed ∪ extra]`.
    pub fn violated_terminal(&self, extra: &NodeSet) -> Option<usize> {
        let h = self.graph.induced_subgraph(&self.fixed.union(extra));
        self.terminals
            .iter()
            .filter(|&t| t != self.root)
            .find(|&t| local_connectivity(&h, t, self.root, self.k).map_or(true, |c| c < self.k))
    }

    pub fn is_feasible(&self, extra: &NodeSet) -> bool {
        self.violated_terminal(extra).is_none()
    }

    /// Terminals by descending total neighbour weight, then index.
    fn terminal_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = self.terminals.iter().filter(|&t| t != self.root).collect();
        let nbhd = |t: usize| -> Weight {
            self.graph
                .neighbors(t)
                .iter()
                .map(|&u| self.weights.get(u).copied().unwrap_or(0))
                .sum()
        };
        order.sort_by_key(|&t| (std::cmp::Reverse(nbhd(t)), t));
        order
    }

    /// Routes `k` units from each terminal to the root by minimum-cost flow,
    /// pool nodes priced by `pricing`, and takes every pool node the flows use.
    pub fn flow_union(&self, pricing: Pricing) -> Result<RootedSolution> {
        self.check()?;
        let mut extra = NodeSet::new();
        let mut routed = Vec::new();
        for t in self.terminal_order() {
            let present = self.fixed.union(&extra);
            let h = self.graph.induced_subgraph(&present);
            if local_connectivity(&h, t, self.root, self.k)? >= self.k {
                continue;
            }
            let cost = |v: usize| -> i64 {
                if present.contains(v) {
                    0
                } else {
                    self.weight(v) as i64
                }
            };
            let mut net = match pricing {
                Pricing::NodeWeight => SplitFlowNetwork::with_costs(&self.graph, t, self.root, cost, |_, _| 0),
                Pricing::EdgeCost => {
                    SplitFlowNetwork::with_costs(&self.graph, t, self.root, |_| 0, |u, v| cost(u) + cost(v))
                }
            };
            if net.min_cost_flow(self.k).is_none() {
                return Err(Error::infeasible(
                    format!(
                        "terminal {t} has only {} internally disjoint paths to the root",
                        net.flow_value()
                    ),
                    vec![t],
                ));
            }
            for v in net.carrying_nodes().iter() {
                if !present.contains(v) {
                    extra.insert(v);
                }
            }
            if pricing == Pricing::EdgeCost {
                routed.extend(net.carrying_edges());
            }
        }
        routed.sort_unstable();
        routed.dedup();
        Ok(RootedSolution {
            extra,
            backend: Backend::FlowUnion,
            routed_edges: routed,
        })
    }

    /// Minimum-weight feasible `S` by enumeration in (weight, lex) order.
    pub fn exact(&self) -> Result<RootedSolution> {
        self.check()?;
        let pool: Vec<usize> = self.pool().iter().collect();
        if pool.len() > EXACT_POOL_CAP {
            return Err(Error::CapExceeded {
                what: "exact backend pool",
                size: pool.len(),
                cap: EXACT_POOL_CAP,
            });
        }
        let everything: NodeSet = pool.iter().copied().collect();
        if let Some(t) = self.violated_terminal(&everything) {
            return Err(Error::infeasible(
                format!("terminal {t} cannot reach the root by {} disjoint paths", self.k),
                vec![t],
            ));
        }
        let weights: Vec<Weight> = pool.iter().map(|&v| self.weight(v)).collect();
        for mask in subsets::by_weight(&weights) {
            let extra: NodeSet = (0..pool.len()).filter(|i| mask >> i & 1 == 1).map(|i| pool[i]).collect();
            if self.is_feasible(&extra) {
                return Ok(RootedSolution {
                    extra,
                    backend: Backend::Exact,
                    routed_edges: Vec::new(),
                });
            }
        }
        Err(Error::Internal("full pool feasible but no subset found".into()))
    }

    /// Drops nodes of `extra`, heaviest first (lowest index on ties), while
    /// the rest stays feasible.
    pub fn prune(&self, extra: &NodeSet) -> NodeSet {
        let mut order: Vec<usize> = extra.iter().collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(self.weight(v)), v));
        let mut kept = extra.clone();
        for v in order {
            kept.remove(v);
            if !self.is_feasible(&kept) {
                kept.insert(v);
            }
        }
        kept
    }

    pub fn solve(&self, backend: Backend, pricing: Pricing, prune: bool) -> Result<RootedSolution> {
        let mut sol = match backend {
            Backend::FlowUnion => self.flow_union(pricing)?,
            Backend::Exact => self.exact()?,
        };
        if prune {
            sol.extra = self.prune(&sol.extra);
        }
        // both backends route every terminal by construction and pruning keeps feasibility
        if cfg!(debug_assertions) {
            if let Some(t) = self.violated_terminal(&sol.extra) {
                return Err(Error::Internal(format!("rooted stage left terminal {t} under-connected")));
            }
        }
        Ok(sol)
    }
}

/// Node-weighted rooted stage.
pub fn solve_rooted_nodeweight(p: &RootedProblem<'_>, backend: Backend, prune: bool) -> Result<RootedSolution> {
    p.solve(backend, Pricing::NodeWeight, prune)
}

/// Edge-cost rooted stage under `c_uv = w_u + w_v`.
pub fn solve_rooted_edgecost(p: &RootedProblem<'_>, prune: bool) -> Result<RootedSolution> {
    p.solve(Backend::FlowUnion, Pricing::EdgeCost, prune)
}
