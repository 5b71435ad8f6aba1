//! Pair augmentation: an inclusion-minimal set `J` of virtual edges on the
//! root attachment that makes `H ∪ J` k-connected, and cheap node sets that
//! realise each virtual edge by `k` internally disjoint paths in `G`.

use serde::{Deserialize, Serialize};

use crate::connectivity::is_k_connected;
use crate::error::{Error, Result};
use crate::flow::SplitFlowNetwork;
use crate::graph::{Graph, NodeSet};
use crate::Weight;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AugmentingForest {
    pub edges: Vec<(usize, usize)>,
}

impl AugmentingForest {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_acyclic(&self) -> bool {
        let slots = self.edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        let mut parent: Vec<usize> = (0..slots).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(u, v) in &self.edges {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }

    /// Whether every single-edge deletion leaves `H ∪ (J \ e)` short of k-connected.
    pub fn is_inclusion_minimal(&self, h: &Graph, k: usize) -> bool {
        (0..self.edges.len()).all(|i| {
            let rest: Vec<_> = self.edges.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &e)| e).collect();
            !is_k_connected(&h.with_edges(&rest), k)
        })
    }
}

/// Starts from the clique on `attach` (minus edges already in `h`) and
/// deletes edges in lexicographic order while `h ∪ J` stays k-connected.
pub fn minimal_augmenting_forest(h: &Graph, attach: &NodeSet, k: usize) -> Result<AugmentingForest> {
    let nodes = attach.as_slice();
    let mut edges: Vec<(usize, usize)> = nodes
        .iter()
        .enumerate()
        .flat_map(|(i, &u)| nodes[i + 1..].iter().map(move |&v| (u, v)))
        .filter(|&(u, v)| !h.has_edge(u, v))
        .collect();
    if !is_k_connected(&h.with_edges(&edges), k) {
        return Err(Error::Internal(format!(
            "graph plus a clique on the attachment is not {k}-connected"
        )));
    }
    let mut i = 0;
    while i < edges.len() {
        let mut without = edges.clone();
        without.remove(i);
        if is_k_connected(&h.with_edges(&without), k) {
            edges = without;
        } else {
            i += 1;
        }
    }
    let forest = AugmentingForest { edges };
    // a forest on R has at most |R| - 1 = k - 1 edges
    if !forest.is_acyclic() || forest.len() + 1 > attach.len().max(1) {
        return Err(Error::Internal(format!(
            "minimal augmenting set {:?} is not a forest with at most |R| - 1 edges",
            forest.edges
        )));
    }
    Ok(forest)
}

/// Nodes outside `free` that, added to `free`, give `k` internally disjoint
/// u-v paths in `g`: a minimum-cost flow of value `k` with free nodes at cost 0.
pub fn min_weight_k_paths(g: &Graph, weights: &[Weight], free: &NodeSet, u: usize, v: usize, k: usize) -> Result<NodeSet> {
    if u == v {
        return Err(Error::param("pair endpoints must differ"));
    }
    let cost = |x: usize| if free.contains(x) { 0 } else { weights[x] as i64 };
    let mut net = SplitFlowNetwork::with_costs(g, u, v, cost, |_, _| 0);
    if net.min_cost_flow(k).is_none() {
        return Err(Error::infeasible(
            format!("only {} internally disjoint paths between {u} and {v}", net.flow_value()),
            vec![u, v],
        ));
    }
    Ok(net.carrying_nodes().difference(free))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectivity::{is_k_in_connected_to_root, local_connectivity};
    use crate::subsets;

    #[test]
    fn connected_graph_needs_no_forest() {
        let h = Graph::complete(5);
        let f = minimal_augmenting_forest(&h, &NodeSet::from([0, 1, 2]), 3).unwrap();
        assert!(f.is_empty());
    }

    #[test]
    fn two_triangles_need_one_link() {
        let h = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let f = minimal_augmenting_forest(&h, &NodeSet::from([2, 3]), 1).unwrap();
        assert_eq!(f.edges, vec![(2, 3)]);
    }

    #[test]
    fn six_cycle_instance() {
        // H_r: C_6 with the root on two opposite nodes is 2-in-connected to r;
        // dropping r leaves C_6 itself, already 2-connected.
        let c6 = Graph::cycle(6);
        let attach = NodeSet::from([0, 3]);
        let hr = c6.attach_root(&attach, 2).unwrap();
        assert!(is_k_in_connected_to_root(&hr, 6, 2).unwrap());
        let f = minimal_augmenting_forest(&c6, &attach, 2).unwrap();
        assert!(f.len() <= 1);
        assert!(is_k_connected(&c6.with_edges(&f.edges), 2));
        assert!(f.is_inclusion_minimal(&c6, 2));

        // a path 0-1-2-3-4-5 with root on both ends needs the link (0, 5)
        let p6 = Graph::path(6);
        let attach = NodeSet::from([0, 5]);
        let hr = p6.attach_root(&attach, 2).unwrap();
        assert!(is_k_in_connected_to_root(&hr, 6, 2).unwrap());
        let f = minimal_augmenting_forest(&p6, &attach, 2).unwrap();
        assert_eq!(f.edges, vec![(0, 5)]);
        assert!(f.is_inclusion_minimal(&p6, 2));
    }

    #[test]
    fn forest_rejects_cycles() {
        let f = AugmentingForest {
            edges: vec![(0, 1), (1, 2), (0, 2)],
        };
        assert!(!f.is_acyclic());
    }

    #[test]
    fn pair_path_examples() {
        let g = Graph::path(2);
        assert!(min_weight_k_paths(&g, &[1, 1], &NodeSet::from([0, 1]), 0, 1, 1).unwrap().is_empty());

        let p3 = Graph::path(3);
        assert_eq!(min_weight_k_paths(&p3, &[1; 3], &NodeSet::from([0, 2]), 0, 2, 1).unwrap(), NodeSet::from([1]));

        // K_4 minus edge 01
        let g = Graph::from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let p = min_weight_k_paths(&g, &[1; 4], &NodeSet::from([0, 1]), 0, 1, 2).unwrap();
        assert_eq!(p, NodeSet::from([2, 3]));
        // brute force: cheapest subset of {2, 3} giving two disjoint 0-1 paths
        let pool = [2usize, 3];
        let best = subsets::by_weight(&[1, 1])
            .into_iter()
            .map(|mask| (0..2).filter(|i| mask >> i & 1 == 1).map(|i| pool[i]).collect::<NodeSet>())
            .find(|extra| {
                let h = g.induced_subgraph(&extra.union(&NodeSet::from([0, 1])));
                local_connectivity(&h, 0, 1, 2).unwrap() >= 2
            })
            .unwrap();
        assert_eq!(best.len(), 2);
    }

    #[test]
    fn pair_paths_report_infeasibility() {
        let g = Graph::path(3);
        assert!(min_weight_k_paths(&g, &[1; 3], &NodeSet::from([0, 2]), 0, 2, 2).unwrap_err().is_infeasible());
    }
}
