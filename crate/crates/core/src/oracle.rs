//! Exact minimum-weight (k,m)-cds by enumeration, for small instances.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::connectivity::{is_k_connected, is_m_dominating};
use crate::error::{Error, Result};
use crate::graph::{Graph, Instance, NodeSet};
use crate::subsets::{self, lex_cmp, mask_weight};
use crate::Weight;

/// Largest node count accepted by the oracles.
pub const ORACLE_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub set: NodeSet,
    pub weight: Weight,
    pub subsets_examined: u64,
    pub elapsed_ms: f64,
}

/// Whether `set` induces a k-connected subgraph and m-dominates `g`.
pub fn is_kmcds(g: &Graph, set: &NodeSet, k: usize, m: usize) -> bool {
    is_m_dominating(g, set, m).dominating && is_k_connected(&g.induced_subgraph(set), k)
}

fn check_cap(inst: &Instance) -> Result<()> {
    if inst.node_count() > ORACLE_CAP {
        return Err(Error::CapExceeded {
            what: "oracle instance",
            size: inst.node_count(),
            cap: ORACLE_CAP,
        });
    }
    Ok(())
}

/// Scans subsets in (weight, lex) order and returns the first (k,m)-cds,
/// or `None` when no subset qualifies. Cheap necessary conditions (size,
/// domination, minimum induced degree) are tested before connectivity.
pub fn opt_kmcds(inst: &Instance) -> Result<Option<OracleResult>> {
    check_cap(inst)?;
    let start = Instant::now();
    let g = inst.graph();
    let (k, m) = (inst.k(), inst.m());
    let adjacency: Vec<u64> = (0..inst.node_count())
        .map(|v| g.neighbors(v).iter().fold(0u64, |acc, &u| acc | 1 << u))
        .collect();
    for (index, mask) in subsets::by_weight(inst.weights()).into_iter().enumerate() {
        if (mask.count_ones() as usize) <= k {
            continue;
        }
        let dominated = (0..inst.node_count())
            .filter(|v| mask >> v & 1 == 0)
            .all(|v| (adjacency[v] & mask).count_ones() as usize >= m);
        if !dominated {
            continue;
        }
        let degrees_ok = (0..inst.node_count())
            .filter(|v| mask >> v & 1 == 1)
            .all(|v| (adjacency[v] & mask).count_ones() as usize >= k);
        if !degrees_ok {
            continue;
        }
        let set = NodeSet::from_mask(mask);
        if is_k_connected(&g.induced_subgraph(&set), k) {
            return Ok(Some(OracleResult {
                weight: inst.weight_of(&set),
                set,
                subsets_examined: index as u64 + 1,
                elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
            }));
        }
    }
    Ok(None)
}

/// Full scan with the plain verifiers on every subset, keeping the
/// (weight, lex)-smallest feasible one. Reference for [`opt_kmcds`].
pub fn opt_kmcds_exhaustive(inst: &Instance) -> Result<Option<OracleResult>> {
    check_cap(inst)?;
    let start = Instant::now();
    let n = inst.node_count();
    let mut best: Option<u64> = None;
    for mask in 0..1u64 << n {
        let set = NodeSet::from_mask(mask);
        if !is_kmcds(inst.graph(), &set, inst.k(), inst.m()) {
            continue;
        }
        let better = match best {
            None => true,
            Some(b) => {
                let (wm, wb) = (mask_weight(mask, inst.weights()), mask_weight(b, inst.weights()));
                wm < wb || (wm == wb && lex_cmp(mask, b).is_lt())
            }
        };
        if better {
            best = Some(mask);
        }
    }
    Ok(best.map(|mask| {
        let set = NodeSet::from_mask(mask);
        OracleResult {
            weight: inst.weight_of(&set),
            set,
            subsets_examined: 1 << n,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        }
    }))
}
