//! Undirected simple graphs over dense node indices, node sets, and the
//! node-weighted problem instance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::unit_disk_edges;
use crate::{Rational, RationalPoint, Weight};

/// Weights above this bound are rejected so that flow costs summed over a
/// few thousand nodes stay far from `i64` overflow.
pub const MAX_WEIGHT: Weight = 1 << 40;

/// A sorted, duplicate-free set of node indices.
///
/// The derived ordering is lexicographic over the sorted member list, which
/// is the tie-break order used by every enumeration in the crate.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeSet(Vec<usize>);

impl NodeSet {
    pub fn new() -> Self {
        NodeSet(Vec::new())
    }

    pub fn full(n: usize) -> Self {
        NodeSet((0..n).collect())
    }

    /// Members of `mask` read as a bitset over `0..64`.
    pub fn from_mask(mask: u64) -> Self {
        NodeSet((0..64).filter(|&i| mask >> i & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn insert(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, v);
                true
            }
        }
    }

    pub fn remove(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(pos) => {
                self.0.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = usize> + ExactSizeIterator + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn largest(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        self.iter().chain(other.iter()).collect()
    }

    pub fn intersection(&self, other: &NodeSet) -> NodeSet {
        self.iter().filter(|&v| other.contains(v)).collect()
    }

    pub fn difference(&self, other: &NodeSet) -> NodeSet {
        self.iter().filter(|&v| !other.contains(v)).collect()
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn mask(&self, slots: usize) -> Vec<bool> {
        let mut mask = vec![false; slots];
        for v in self.iter() {
            mask[v] = true;
        }
        mask
    }
}

impl FromIterator<usize> for NodeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        NodeSet(v)
    }
}

impl From<Vec<usize>> for NodeSet {
    fn from(v: Vec<usize>) -> Self {
        v.into_iter().collect()
    }
}

impl<const N: usize> From<[usize; N]> for NodeSet {
    fn from(v: [usize; N]) -> Self {
        v.into_iter().collect()
    }
}

/// Undirected simple graph on node slots `0..slot_count`.
///
/// Slots can be inactive: an induced subgraph keeps the slot range of its
/// parent so node identities survive, and the dropped nodes become inactive
/// with no incident edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    active: Vec<bool>,
    edge_count: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            active: vec![true; n],
            edge_count: 0,
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::param(format!("edge ({u}, {v}) outside node range 0..{n}")));
            }
            if u == v {
                return Err(Error::param(format!("self-loop on node {u}")));
            }
            if g.adj[u].contains(&v) {
                return Err(Error::param(format!("parallel edge ({u}, {v})")));
            }
            g.adj[u].push(v);
            g.adj[v].push(u);
            g.edge_count += 1;
        }
        for list in &mut g.adj {
            list.sort_unstable();
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_edges(n, edges).expect("complete graph is simple")
    }

    pub fn cycle(n: usize) -> Self {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle of length >= 3 is simple")
    }

    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path is simple")
    }

    /// Star with center 0 and leaves `1..=leaves`.
    pub fn star(leaves: usize) -> Self {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("star is simple")
    }

    pub fn petersen() -> Self {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        Graph::from_edges(10, outer.chain(spokes).chain(inner)).expect("petersen graph is simple")
    }

    pub fn slot_count(&self) -> usize {
        self.adj.len()
    }

    /// Number of active nodes.
    pub fn node_count(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_active(&self, v: usize) -> bool {
        self.active.get(v).copied().unwrap_or(false)
    }

    pub fn nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.adj.len()).filter(|&v| self.active[v])
    }

    pub fn node_set(&self) -> NodeSet {
        self.nodes().collect()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Γ(A): nodes outside `a` adjacent to at least one node of `a`.
    pub fn open_neighborhood(&self, a: &NodeSet) -> NodeSet {
        a.iter()
            .filter(|&v| v < self.adj.len())
            .flat_map(|v| self.adj[v].iter().copied())
            .filter(|&u| !a.contains(u))
            .collect()
    }

    /// G[S] with node identities preserved; slots outside `s` become inactive.
    pub fn induced_subgraph(&self, s: &NodeSet) -> Graph {
        let n = self.adj.len();
        let keep: Vec<bool> = (0..n).map(|v| self.active[v] && s.contains(v)).collect();
        let mut edge_count = 0;
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|u| {
                if !keep[u] {
                    return Vec::new();
                }
                let list: Vec<usize> = self.adj[u].iter().copied().filter(|&v| keep[v]).collect();
                edge_count += list.iter().filter(|&&v| v > u).count();
                list
            })
            .collect();
        Graph {
            adj,
            active: keep,
            edge_count,
        }
    }

    /// G_r: a new node `r = slot_count()` joined to every node of `attach`.
    pub fn attach_root(&self, attach: &NodeSet, k: usize) -> Result<Graph> {
        if attach.len() != k {
            return Err(Error::param(format!(
                "root attachment has {} nodes, expected k = {k}",
                attach.len()
            )));
        }
        let r = self.adj.len();
        if let Some(v) = attach.iter().find(|&v| !self.is_active(v)) {
            return Err(Error::param(format!("root attachment node {v} is not in the graph")));
        }
        let mut g = self.clone();
        g.adj.push(attach.as_slice().to_vec());
        g.active.push(true);
        for v in attach.iter() {
            g.adj[v].push(r);
        }
        g.edge_count += attach.len();
        Ok(g)
    }

    /// Removes the last slot, undoing [`Graph::attach_root`].
    pub fn detach_root(&self) -> Graph {
        let r = self.adj.len() - 1;
        let mut g = self.clone();
        let removed = g.adj.pop().unwrap_or_default();
        g.active.pop();
        for v in removed {
            g.adj[v].retain(|&u| u != r);
        }
        g.edge_count -= self.adj[r].len();
        g
    }

    /// Copy with `extra` edges added; pairs already present are skipped.
    pub fn with_edges(&self, extra: &[(usize, usize)]) -> Graph {
        let mut g = self.clone();
        for &(u, v) in extra {
            if u != v && !g.has_edge(u, v) {
                let pos = g.adj[u].binary_search(&v).unwrap_err();
                g.adj[u].insert(pos, v);
                let pos = g.adj[v].binary_search(&u).unwrap_err();
                g.adj[v].insert(pos, u);
                g.edge_count += 1;
            }
        }
        g
    }

    /// Copy in which `v` keeps only its edges to `keep`.
    pub fn restrict_incident_edges(&self, v: usize, keep: &NodeSet) -> Graph {
        let mut g = self.clone();
        let dropped: Vec<usize> = g.adj[v].iter().copied().filter(|&u| !keep.contains(u)).collect();
        for &u in &dropped {
            g.adj[u].retain(|&x| x != v);
        }
        g.adj[v].retain(|&u| keep.contains(u));
        g.edge_count -= dropped.len();
        g
    }

    /// (minimum degree, maximum degree) over active nodes; `(0, 0)` if there are none.
    pub fn degree_stats(&self) -> (usize, usize) {
        let mut degrees = self.nodes().map(|v| self.degree(v));
        match degrees.next() {
            None => (0, 0),
            Some(first) => degrees.fold((first, first), |(lo, hi), d| (lo.min(d), hi.max(d))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Geometry {
    pub points: Vec<RationalPoint>,
    pub radius: Rational,
}

/// Node-weighted graph together with the connectivity target `k` and
/// domination target `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    graph: Graph,
    weights: Vec<Weight>,
    k: usize,
    m: usize,
    weight_denominator: u64,
    geometry: Option<Geometry>,
}

impl Instance {
    pub fn new(graph: Graph, weights: Vec<Weight>, k: usize, m: usize) -> Result<Self> {
        if graph.node_count() != graph.slot_count() {
            return Err(Error::param("instance graph must not have inactive slots"));
        }
        if weights.len() != graph.slot_count() {
            return Err(Error::param(format!(
                "{} weights for {} nodes",
                weights.len(),
                graph.slot_count()
            )));
        }
        if graph.slot_count() == 0 {
            return Err(Error::param("instance needs at least one node"));
        }
        if k < 1 {
            return Err(Error::param("k must be at least 1"));
        }
        if m < k {
            return Err(Error::param(format!("m = {m} must be at least k = {k}")));
        }
        if let Some((v, w)) = weights.iter().enumerate().find(|(_, &w)| w > MAX_WEIGHT) {
            return Err(Error::param(format!("weight {w} of node {v} exceeds {MAX_WEIGHT}")));
        }
        Ok(Instance {
            graph,
            weights,
            k,
            m,
            weight_denominator: 1,
            geometry: None,
        })
    }

    /// Unit-disk instance: edges are exactly the pairs within `radius`.
    pub fn unit_disk(points: Vec<RationalPoint>, radius: Rational, weights: Vec<Weight>, k: usize, m: usize) -> Result<Self> {
        if radius < Rational::from_integer(0) {
            return Err(Error::param("radius must be nonnegative"));
        }
        let graph = Graph::from_edges(points.len(), unit_disk_edges(&points, &radius))?;
        let mut inst = Instance::new(graph, weights, k, m)?;
        inst.geometry = Some(Geometry { points, radius });
        Ok(inst)
    }

    /// Attaches coordinates to an existing instance, checking that its edge
    /// set is exactly the unit-disk edge set.
    pub fn with_geometry(mut self, geometry: Geometry) -> Result<Self> {
        if geometry.points.len() != self.graph.slot_count() {
            return Err(Error::param("coordinate count does not match node count"));
        }
        let expected = unit_disk_edges(&geometry.points, &geometry.radius);
        let actual: Vec<(usize, usize)> = self.graph.edges().collect();
        if expected != actual {
            let diff = expected
                .iter()
                .find(|e| !actual.contains(e))
                .or_else(|| actual.iter().find(|e| !expected.contains(e)))
                .copied()
                .unwrap_or((0, 0));
            return Err(Error::param(format!(
                "edge set disagrees with coordinates and radius at pair {diff:?}"
            )));
        }
        self.geometry = Some(geometry);
        Ok(self)
    }

    pub fn with_weight_denominator(mut self, denominator: u64) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::param("weight denominator must be positive"));
        }
        self.weight_denominator = denominator;
        Ok(self)
    }

    pub fn with_params(mut self, k: usize, m: usize) -> Result<Self> {
        if k < 1 || m < k {
            return Err(Error::param(format!("need m >= k >= 1, got k = {k}, m = {m}")));
        }
        self.k = k;
        self.m = m;
        Ok(self)
    }

    pub fn with_weights(mut self, weights: Vec<Weight>) -> Result<Self> {
        let geometry = self.geometry.take();
        let mut inst = Instance::new(self.graph, weights, self.k, self.m)?;
        inst.weight_denominator = self.weight_denominator;
        inst.geometry = geometry;
        self = inst;
        Ok(self)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn node_count(&self) -> usize {
        self.graph.slot_count()
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn weight(&self, v: usize) -> Weight {
        self.weights[v]
    }

    pub fn weight_of(&self, s: &NodeSet) -> Weight {
        s.iter().map(|v| self.weights[v]).sum()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn weight_denominator(&self) -> u64 {
        self.weight_denominator
    }

    pub fn geometry(&self) -> Option<&Geometry> {
        self.geometry.as_ref()
    }
}
