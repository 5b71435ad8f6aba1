//! Weighted m-dominating sets: density greedy over the coverage potential,
//! plus an exhaustive optimum for small graphs.

use crate::connectivity::is_m_dominating;
use crate::error::{Error, Result};
use crate::graph::{Graph, Instance, NodeSet};
use crate::subsets;

/// Largest node count accepted by [`opt_mds_bruteforce`].
pub const MDS_ORACLE_CAP: usize = 16;

/// `f(T) = Σ_v min(m, cov_T(v))`, where members count as fully covered and
/// other nodes count their neighbours in `T`.
pub fn coverage_potential(g: &Graph, t: &NodeSet, m: usize) -> usize {
    g.nodes()
        .map(|v| {
            if t.contains(v) {
                m
            } else {
                g.neighbors(v).iter().filter(|&&u| t.contains(u)).count().min(m)
            }
        })
        .sum()
}

/// Greedy m-dominating set: repeatedly add the node with the largest
/// potential gain per unit weight (lowest index on ties; zero-weight nodes
/// with positive gain first).
pub fn greedy_mds(inst: &Instance) -> NodeSet {
    let g = inst.graph();
    let m = inst.m();
    let n = inst.node_count();
    let mut in_set = vec![false; n];
    let mut residual: Vec<usize> = (0..n).map(|_| m).collect();
    let gain = |u: usize, in_set: &[bool], residual: &[usize]| -> u64 {
        (residual[u] + g.neighbors(u).iter().filter(|&&v| !in_set[v] && residual[v] > 0).count()) as u64
    };
    loop {
        let mut best: Option<(usize, u64)> = None;
        for u in (0..n).filter(|&u| !in_set[u]) {
            let gu = gain(u, &in_set, &residual);
            if gu == 0 {
                continue;
            }
            let better = match best {
                None => true,
                Some((b, gb)) => {
                    let (wu, wb) = (inst.weight(u) as u128, inst.weight(b) as u128);
                    match (wu, wb) {
                        (0, 0) => false,
                        (0, _) => true,
                        (_, 0) => false,
                        _ => gu as u128 * wb > gb as u128 * wu,
                    }
                }
            };
            if better {
                best = Some((u, gu));
            }
        }
        let Some((u, _)) = best else { break };
        in_set[u] = true;
        residual[u] = 0;
        for &v in g.neighbors(u) {
            if !in_set[v] && residual[v] > 0 {
                residual[v] -= 1;
            }
        }
    }
    (0..n).filter(|&v| in_set[v]).collect()
}

/// Minimum-weight m-dominating set by enumeration in (weight, lex) order.
pub fn opt_mds_bruteforce(inst: &Instance) -> Result<NodeSet> {
    let n = inst.node_count();
    if n > MDS_ORACLE_CAP {
        return Err(Error::CapExceeded {
            what: "m-dominating set oracle instance",
            size: n,
            cap: MDS_ORACLE_CAP,
        });
    }
    let g = inst.graph();
    for mask in subsets::by_weight(inst.weights()) {
        let s = NodeSet::from_mask(mask);
        if is_m_dominating(g, &s, inst.m()).dominating {
            return Ok(s);
        }
    }
    Err(Error::Internal("full node set failed to dominate".into()))
}
