//! End-to-end solver: greedy m-domination, rooted connectivity through a
//! virtual root, augmenting forest on the root attachment, and pair path
//! sets; plus the unit-disk (edge-cost) and guess-root variants.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::augment::{min_weight_k_paths, minimal_augmenting_forest, AugmentingForest};
use crate::connectivity::{certify, connectivity_failure, is_k_connected, local_connectivity, Certificate, ConnectivityFailure};
use crate::dominating::greedy_mds;
use crate::error::{Error, Result};
use crate::graph::{Graph, Instance, NodeSet};
use crate::guarantee::{domination_bound, GuaranteeInfo};
use crate::oracle::is_kmcds;
use crate::rooted::{conversion_check, Backend, ConversionCheck, Pricing, RootedProblem};
use crate::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    #[default]
    General,
    UnitDisk,
    GuessRoot,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::General => "general",
            Variant::UnitDisk => "unit-disk",
            Variant::GuessRoot => "guess-root",
        }
    }
}

/// Which k terminals the virtual root attaches to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum RootRule {
    /// The k lightest terminals, lowest index on ties.
    #[default]
    MinWeight,
    /// Every k-subset of the terminals (when few enough), keeping the best.
    Enumerate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub variant: Variant,
    pub backend: Backend,
    pub root_rule: RootRule,
    /// Final pass dropping redundant nodes from the returned set.
    pub prune: bool,
    /// `RootRule::Enumerate` falls back to `MinWeight` above this many terminals.
    pub root_enumeration_cap: usize,
    pub record_timings: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            variant: Variant::General,
            backend: Backend::FlowUnion,
            root_rule: RootRule::MinWeight,
            prune: true,
            root_enumeration_cap: 12,
            record_timings: false,
        }
    }
}

impl SolverConfig {
    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightBreakdown {
    pub terminals: Weight,
    pub rooted: Weight,
    pub paths: Weight,
    /// Real root and attachment outside the terminals (guess-root only).
    pub anchor: Weight,
    /// Weight of the returned (deduplicated, possibly pruned) set.
    pub total: Weight,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSet {
    pub pair: (usize, usize),
    pub nodes: NodeSet,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StageTimings {
    pub dominating_ms: f64,
    pub rooted_ms: f64,
    pub forest_ms: f64,
    pub paths_ms: f64,
    pub prune_ms: f64,
    pub certify_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionReport {
    pub variant: Variant,
    pub nodes: usize,
    pub k: usize,
    pub m: usize,
    pub weight_denominator: u64,
    /// `T`, the m-dominating set (after padding).
    pub terminals: NodeSet,
    /// Nodes added to `T` so that it has at least `k + 1` members.
    pub padding: NodeSet,
    /// `R`, the k nodes the root is joined to.
    pub attachment: NodeSet,
    /// The real root node in the guess-root variant; `None` for a virtual root.
    pub root: Option<usize>,
    /// `S`, chosen by the rooted-connectivity stage.
    pub rooted: NodeSet,
    /// `J`, virtual edges on `R`.
    pub forest: AugmentingForest,
    pub pair_sets: Vec<PairSet>,
    /// `P`, the union of the pair sets.
    pub paths: NodeSet,
    /// Real root and attachment nodes not already in `T` (guess-root only).
    pub anchor: NodeSet,
    pub solution: NodeSet,
    /// Nodes removed by the final pruning pass.
    pub pruned: NodeSet,
    pub weights: WeightBreakdown,
    pub guarantee: GuaranteeInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conversion: Option<ConversionCheck>,
    /// Guess-root found no valid candidate and ran the general pipeline.
    pub fell_back: bool,
    pub certificate: Certificate,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timings: Option<StageTimings>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum Precheck {
    Ok,
    Infeasible(ConnectivityFailure),
}

/// A (k,m)-cds with `m ≥ k` exists iff `G` itself is k-connected: `V` is
/// trivially m-dominating, and any solution forces `G` to be k-connected.
pub fn precheck(inst: &Instance) -> Precheck {
    match connectivity_failure(inst.graph(), inst.k()) {
        None => Precheck::Ok,
        Some(failure) => Precheck::Infeasible(failure),
    }
}

fn require_feasible(inst: &Instance) -> Result<()> {
    match precheck(inst) {
        Precheck::Ok => Ok(()),
        Precheck::Infeasible(ConnectivityFailure::TooFewNodes { nodes }) => Err(Error::infeasible(
            format!("graph has {nodes} nodes, a {}-connected graph needs more", inst.k()),
            Vec::new(),
        )),
        Precheck::Infeasible(ConnectivityFailure::Separator { separator, pair }) => Err(Error::infeasible(
            format!(
                "graph is not {}-connected: removing the witness separates {} from {}",
                inst.k(),
                pair.0,
                pair.1
            ),
            separator.as_slice().to_vec(),
        )),
    }
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Greedy m-dominating set, padded with the lightest remaining nodes up to `k` members.
fn dominating_stage(inst: &Instance) -> (NodeSet, NodeSet) {
    let mut t = greedy_mds(inst);
    let mut padding = NodeSet::new();
    // a k-connected set needs at least k + 1 nodes
    if t.len() <= inst.k() {
        let mut rest: Vec<usize> = (0..inst.node_count()).filter(|&v| !t.contains(v)).collect();
        rest.sort_by_key(|&v| (inst.weight(v), v));
        for v in rest.into_iter().take(inst.k() + 1 - t.len()) {
            t.insert(v);
            padding.insert(v);
        }
    }
    (t, padding)
}

fn lightest(inst: &Instance, set: &NodeSet, count: usize) -> NodeSet {
    let mut order: Vec<usize> = set.iter().collect();
    order.sort_by_key(|&v| (inst.weight(v), v));
    order.into_iter().take(count).collect()
}

fn k_subsets(items: &[usize], k: usize) -> Vec<NodeSet> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > items.len() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + items.len() - k) else {
            return out;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn guarantee(inst: &Instance, backend: Backend, variant: Variant, terminals: usize, augmentation: bool) -> GuaranteeInfo {
    let (_, max_degree) = inst.graph().degree_stats();
    let (factor, value) = match backend {
        Backend::FlowUnion => ("2|T|".to_string(), 2 * terminals as u64),
        Backend::Exact => ("1".to_string(), 1),
    };
    let augmentation_term = if augmentation { 2 * (inst.k() as u64 - 1) } else { 0 };
    let dom = domination_bound(max_degree, inst.m());
    let mut refs = vec![
        "m-dominating set: greedy ratio ln(Δ+m)+1".to_string(),
        "rooted k-connectivity, node weights: best known ratio O(k^2 ln n)".to_string(),
        "overall reference shape: α_m + β'_k + 2(k-1) = O(k^2 ln n)".to_string(),
    ];
    match variant {
        Variant::General => {}
        Variant::UnitDisk => {
            refs.push("rooted k-connectivity, edge costs: best known 2 (k=2), 6 2/3 (k=3), O(k ln k) (k≥4)".into());
            refs.push(
                "k-connected unit-disk graphs have k-connected spanning subgraphs of max degree 5 (k=2) or 5k (k≥3); \
                 with c_uv = w_u + w_v this moves node weights to edge costs at factor 5/2 (k=2) or 5 (k≥3)"
                    .into(),
            );
            refs.push("unit-disk reference shape: α_m + 5β_k + 2(k-1) = O(k ln k)".into());
        }
        Variant::GuessRoot => {
            refs.push("guessing a degree-k node of an edge-minimal optimum and its k edges makes the augmentation stages unnecessary for k ∈ {2,3}".into());
            if inst.k() == 3 && inst.geometry().is_some() {
                refs.push("unit-disk k=3 reference ratio: α_m + 5β_3 = α_m + 33 1/3".into());
            }
        }
    }
    GuaranteeInfo {
        backend: backend.name().to_string(),
        backend_factor: factor,
        backend_factor_value: value,
        domination_bound: "ln(Δ+m)+1".to_string(),
        domination_bound_value: dom,
        augmentation_term,
        total_bound_value: dom + value as f64 + augmentation_term as f64,
        reference_ratios: refs,
    }
}

struct Stages {
    attachment: NodeSet,
    rooted: NodeSet,
    forest: AugmentingForest,
    pair_sets: Vec<PairSet>,
    paths: NodeSet,
    conversion: Option<ConversionCheck>,
}

impl Stages {
    fn union(&self, terminals: &NodeSet) -> NodeSet {
        terminals.union(&self.rooted).union(&self.paths)
    }
}

fn attached_stages(
    inst: &Instance,
    terminals: &NodeSet,
    attachment: NodeSet,
    cfg: &SolverConfig,
    pricing: Pricing,
    timings: &mut StageTimings,
) -> Result<Stages> {
    let g = inst.graph();
    let k = inst.k();
    let root = inst.node_count();

    let start = Instant::now();
    let mut fixed = terminals.clone();
    fixed.insert(root);
    let problem = RootedProblem {
        graph: g.attach_root(&attachment, k)?,
        root,
        terminals: terminals.clone(),
        fixed,
        weights: inst.weights(),
        k,
    };
    let rooted = problem.solve(cfg.backend, pricing, true)?;
    let conversion = (pricing == Pricing::EdgeCost)
        .then(|| conversion_check(&rooted.routed_edges, |v| inst.weights().get(v).copied().unwrap_or(0)));
    let rooted_set = rooted.extra;
    timings.rooted_ms += elapsed_ms(start);

    let start = Instant::now();
    let base = terminals.union(&rooted_set);
    let h = g.induced_subgraph(&base);
    let forest = minimal_augmenting_forest(&h, &attachment, k)?;
    timings.forest_ms += elapsed_ms(start);

    let start = Instant::now();
    let mut free = base;
    let mut pair_sets = Vec::with_capacity(forest.len());
    let mut paths = NodeSet::new();
    for &(u, v) in &forest.edges {
        let nodes = min_weight_k_paths(g, inst.weights(), &free, u, v, k)?;
        free = free.union(&nodes);
        paths = paths.union(&nodes);
        let h = g.induced_subgraph(&free);
        if local_connectivity(&h, u, v, k)? < k {
            return Err(Error::Internal(format!("pair set for ({u}, {v}) does not give {k} paths")));
        }
        pair_sets.push(PairSet { pair: (u, v), nodes });
    }
    timings.paths_ms += elapsed_ms(start);

    Ok(Stages {
        attachment,
        rooted: rooted_set,
        forest,
        pair_sets,
        paths,
        conversion,
    })
}

/// Drops the heaviest node (lowest index on ties) whose removal keeps a
/// (k,m)-cds, until no node can go.
fn prune_solution(inst: &Instance, set: &NodeSet) -> NodeSet {
    let mut current = set.clone();
    loop {
        let mut order: Vec<usize> = current.iter().collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(inst.weight(v)), v));
        let removable = order.into_iter().find(|&v| {
            let mut smaller = current.clone();
            smaller.remove(v);
            is_kmcds(inst.graph(), &smaller, inst.k(), inst.m())
        });
        match removable {
            Some(v) => {
                current.remove(v);
            }
            None => return current,
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    inst: &Instance,
    cfg: &SolverConfig,
    variant: Variant,
    terminals: NodeSet,
    padding: NodeSet,
    root: Option<usize>,
    anchor: NodeSet,
    stages: Stages,
    guarantee: GuaranteeInfo,
    fell_back: bool,
    mut timings: StageTimings,
) -> Result<SolutionReport> {
    let assembled = stages.union(&terminals).union(&anchor);
    if !is_kmcds(inst.graph(), &assembled, inst.k(), inst.m()) {
        return Err(Error::Internal(format!(
            "assembled set is not a ({}, {})-cds",
            inst.k(),
            inst.m()
        )));
    }
    let start = Instant::now();
    let solution = if cfg.prune { prune_solution(inst, &assembled) } else { assembled.clone() };
    timings.prune_ms = elapsed_ms(start);

    let start = Instant::now();
    let certificate = certify(inst.graph(), &solution, inst.k(), inst.m())
        .map_err(|e| Error::Internal(format!("final set failed verification: {e}")))?;
    timings.certify_ms = elapsed_ms(start);

    let weights = WeightBreakdown {
        terminals: inst.weight_of(&terminals),
        rooted: inst.weight_of(&stages.rooted),
        paths: inst.weight_of(&stages.paths),
        anchor: inst.weight_of(&anchor),
        total: inst.weight_of(&solution),
    };
    Ok(SolutionReport {
        variant,
        nodes: inst.node_count(),
        k: inst.k(),
        m: inst.m(),
        weight_denominator: inst.weight_denominator(),
        pruned: assembled.difference(&solution),
        terminals,
        padding,
        attachment: stages.attachment,
        root,
        rooted: stages.rooted,
        forest: stages.forest,
        pair_sets: stages.pair_sets,
        paths: stages.paths,
        anchor,
        solution,
        weights,
        guarantee,
        conversion: stages.conversion,
        fell_back,
        certificate,
        timings: cfg.record_timings.then_some(timings),
    })
}

fn solve_attached(inst: &Instance, cfg: &SolverConfig, variant: Variant, pricing: Pricing, fell_back: bool) -> Result<SolutionReport> {
    require_feasible(inst)?;
    let mut timings = StageTimings::default();
    let start = Instant::now();
    let (terminals, padding) = dominating_stage(inst);
    timings.dominating_ms = elapsed_ms(start);

    let candidates: Vec<NodeSet> = match cfg.root_rule {
        RootRule::Enumerate if terminals.len() <= cfg.root_enumeration_cap => k_subsets(terminals.as_slice(), inst.k()),
        _ => vec![lightest(inst, &terminals, inst.k())],
    };
    let mut best: Option<(Weight, Stages)> = None;
    for attachment in candidates {
        let stages = attached_stages(inst, &terminals, attachment, cfg, pricing, &mut timings)?;
        let w = inst.weight_of(&stages.union(&terminals));
        if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
            best = Some((w, stages));
        }
    }
    let (_, stages) = best.ok_or_else(|| Error::Internal("no root attachment candidate".into()))?;
    let guarantee = guarantee(inst, cfg.backend, variant, terminals.len(), true);
    finish(
        inst,
        cfg,
        variant,
        terminals,
        padding,
        None,
        NodeSet::new(),
        stages,
        guarantee,
        fell_back,
        timings,
    )
}

/// Greedy domination, rooted connectivity through a virtual root, minimal
/// augmenting forest and pair path sets.
pub fn solve_general(inst: &Instance, cfg: &SolverConfig) -> Result<SolutionReport> {
    solve_attached(inst, cfg, Variant::General, Pricing::NodeWeight, false)
}

/// As [`solve_general`], with the rooted stage priced on edges by `c_uv = w_u + w_v`.
pub fn solve_unit_disk(inst: &Instance, cfg: &SolverConfig) -> Result<SolutionReport> {
    if inst.geometry().is_none() {
        return Err(Error::param("unit-disk variant needs node coordinates and a radius"));
    }
    // the exact backend enumerates node sets directly, so edge pricing only applies to flows
    let pricing = match cfg.backend {
        Backend::FlowUnion => Pricing::EdgeCost,
        Backend::Exact => Pricing::NodeWeight,
    };
    solve_attached(inst, cfg, Variant::UnitDisk, pricing, false)
}

struct GuessCandidate {
    root: usize,
    attachment: NodeSet,
    rooted: NodeSet,
    weight: Weight,
}

/// Rooted stage with a real root `r` whose edges are cut down to `attachment`.
/// Any selected node that is not yet k-connected to `r` becomes a terminal
/// and the stage repeats, so `G'[T ∪ R ∪ {r} ∪ S]` ends up k-in-connected to `r`.
fn guess_candidate(inst: &Instance, cfg: &SolverConfig, terminals: &NodeSet, root: usize, attachment: &NodeSet) -> Option<GuessCandidate> {
    let k = inst.k();
    let graph: Graph = inst.graph().restrict_incident_edges(root, attachment);
    let mut fixed = terminals.union(attachment);
    fixed.insert(root);
    let mut targets = terminals.union(attachment);
    targets.remove(root);
    let mut rooted = NodeSet::new();
    loop {
        let problem = RootedProblem {
            graph: graph.clone(),
            root,
            terminals: targets.clone(),
            fixed: fixed.clone(),
            weights: inst.weights(),
            k,
        };
        let extra = problem.solve(cfg.backend, Pricing::NodeWeight, false).ok()?.extra;
        if extra.is_empty() {
            break;
        }
        rooted = rooted.union(&extra);
        fixed = fixed.union(&extra);
        let h = graph.induced_subgraph(&fixed);
        let lagging: Vec<usize> = extra
            .iter()
            .filter(|&x| local_connectivity(&h, x, root, k).map_or(true, |c| c < k))
            .collect();
        if lagging.is_empty() {
            break;
        }
        targets = targets.union(&lagging.into_iter().collect());
    }
    let set = fixed;
    Some(GuessCandidate {
        root,
        attachment: attachment.clone(),
        weight: inst.weight_of(&set),
        rooted,
    })
}

/// For k ∈ {2, 3}: try every real node as the root together with every
/// k-subset of its edges, run only the rooted stage, and keep the lightest
/// k-connected outcome. Falls back to [`solve_general`] if no candidate works.
pub fn solve_guess_root(inst: &Instance, cfg: &SolverConfig) -> Result<SolutionReport> {
    let k = inst.k();
    if !(2..=3).contains(&k) {
        return Err(Error::param(format!("guess-root variant needs k in {{2, 3}}, got {k}")));
    }
    require_feasible(inst)?;
    let mut timings = StageTimings::default();
    let start = Instant::now();
    let (terminals, padding) = dominating_stage(inst);
    timings.dominating_ms = elapsed_ms(start);

    let start = Instant::now();
    let base_weight = inst.weight_of(&terminals);
    let mut roots: Vec<usize> = (0..inst.node_count()).collect();
    roots.sort_by_key(|&r| (inst.weight(r), r));
    // candidates are ranked by weight first; the k-connectivity check then
    // runs only until the lightest passing one is found
    let mut candidates: Vec<GuessCandidate> = Vec::new();
    let mut bound: Option<Weight> = None;
    for r in roots {
        let lower = base_weight + if terminals.contains(r) { 0 } else { inst.weight(r) };
        if bound.is_some_and(|b| lower >= b) {
            continue;
        }
        let subsets = k_subsets(inst.graph().neighbors(r), k);
        let found: Vec<GuessCandidate> = subsets
            .par_iter()
            .filter_map(|attachment| {
                let mut anchored = terminals.union(attachment);
                anchored.insert(r);
                if bound.is_some_and(|b| inst.weight_of(&anchored) >= b) {
                    return None;
                }
                guess_candidate(inst, cfg, &terminals, r, attachment)
            })
            .collect();
        for cand in found {
            if bound.is_none_or(|b| cand.weight < b) {
                bound = Some(cand.weight);
                candidates.push(cand);
            }
        }
    }
    candidates.sort_by_key(|c| c.weight);
    let best = candidates.into_iter().find(|c| {
        let mut set = terminals.union(&c.rooted).union(&c.attachment);
        set.insert(c.root);
        is_k_connected(&inst.graph().induced_subgraph(&set), k)
    });
    timings.rooted_ms = elapsed_ms(start);

    let Some(best) = best else {
        return solve_attached(inst, cfg, Variant::GuessRoot, Pricing::NodeWeight, true);
    };
    let mut anchor = best.attachment.clone();
    anchor.insert(best.root);
    let anchor = anchor.difference(&terminals);
    let stages = Stages {
        attachment: best.attachment,
        rooted: best.rooted.difference(&anchor),
        forest: AugmentingForest::default(),
        pair_sets: Vec::new(),
        paths: NodeSet::new(),
        conversion: None,
    };
    let guarantee = guarantee(inst, cfg.backend, Variant::GuessRoot, terminals.len(), false);
    finish(
        inst,
        cfg,
        Variant::GuessRoot,
        terminals,
        padding,
        Some(best.root),
        anchor,
        stages,
        guarantee,
        false,
        timings,
    )
}

/// Dispatches on `cfg.variant`.
pub fn solve(inst: &Instance, cfg: &SolverConfig) -> Result<SolutionReport> {
    match cfg.variant {
        Variant::General => solve_general(inst, cfg),
        Variant::UnitDisk => solve_unit_disk(inst, cfg),
        Variant::GuessRoot => solve_guess_root(inst, cfg),
    }
}
