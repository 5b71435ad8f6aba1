//! Node-split flow network for internally disjoint paths.
//!
//! Each node `v` becomes `v_in → v_out` (capacity 1, cost of `v`), and each
//! undirected edge `uv` becomes `u_out → v_in` and `v_out → u_in` (capacity 1).
//! The source and sink are uncapacitated: flow leaves `s_out`, enters `t_in`,
//! and no arc re-enters the source or leaves the sink. An integral flow of
//! value `f` then decomposes into `f` internally node-disjoint s-t paths.

use std::collections::VecDeque;

use crate::graph::{Graph, NodeSet};

const NONE: usize = usize::MAX;

#[derive(Debug, Clone)]
pub struct SplitFlowNetwork {
    source: usize,
    sink: usize,
    /// Arc ids leaving node `x` are `out_arcs[first[x]..first[x + 1]]`.
    first: Vec<usize>,
    out_arcs: Vec<usize>,
    head: Vec<usize>,
    residual: Vec<i32>,
    capacity: Vec<i32>,
    cost: Vec<i64>,
    flow_value: usize,
    flow_cost: i64,
}

fn node_in(v: usize) -> usize {
    2 * v
}

fn node_out(v: usize) -> usize {
    2 * v + 1
}

impl SplitFlowNetwork {
    /// Unit-cost-free network for connectivity queries between `source` and `sink`.
    pub fn new(graph: &Graph, source: usize, sink: usize) -> Self {
        Self::with_costs(graph, source, sink, |_| 0, |_, _| 0)
    }

    /// Network with a cost on each internal node arc and on each edge arc.
    pub fn with_costs(
        graph: &Graph,
        source: usize,
        sink: usize,
        node_cost: impl Fn(usize) -> i64,
        edge_cost: impl Fn(usize, usize) -> i64,
    ) -> Self {
        let mut arcs: Vec<(usize, usize, i64)> = Vec::with_capacity(graph.slot_count() + 2 * graph.edge_count());
        for v in graph.nodes() {
            if v != source && v != sink {
                arcs.push((node_in(v), node_out(v), node_cost(v)));
            }
        }
        for (u, v) in graph.edges() {
            let c = edge_cost(u, v);
            for (a, b) in [(u, v), (v, u)] {
                if b != source && a != sink {
                    arcs.push((node_out(a), node_in(b), c));
                }
            }
        }
        let n = 2 * graph.slot_count();
        let mut first = vec![0; n + 1];
        for &(from, to, _) in &arcs {
            first[from + 1] += 1;
            first[to + 1] += 1;
        }
        for x in 0..n {
            first[x + 1] += first[x];
        }
        let mut fill = first.clone();
        let mut out_arcs = vec![0; 2 * arcs.len()];
        let mut head = Vec::with_capacity(2 * arcs.len());
        let mut residual = Vec::with_capacity(2 * arcs.len());
        let mut cost = Vec::with_capacity(2 * arcs.len());
        for &(from, to, c) in &arcs {
            let id = head.len();
            out_arcs[fill[from]] = id;
            fill[from] += 1;
            out_arcs[fill[to]] = id + 1;
            fill[to] += 1;
            head.extend([to, from]);
            residual.extend([1, 0]);
            cost.extend([c, -c]);
        }
        SplitFlowNetwork {
            source,
            sink,
            first,
            out_arcs,
            head,
            capacity: residual.clone(),
            residual,
            cost,
            flow_value: 0,
            flow_cost: 0,
        }
    }

    fn arcs_from(&self, x: usize) -> &[usize] {
        &self.out_arcs[self.first[x]..self.first[x + 1]]
    }

    fn start(&self) -> usize {
        node_out(self.source)
    }

    fn end(&self) -> usize {
        node_in(self.sink)
    }

    fn augment(&mut self, parent: &[usize]) {
        let mut x = self.end();
        while x != self.start() {
            let arc = parent[x];
            self.residual[arc] -= 1;
            self.residual[arc ^ 1] += 1;
            self.flow_cost += self.cost[arc];
            x = self.head[arc ^ 1];
        }
        self.flow_value += 1;
    }

    /// Augments along shortest (BFS) paths until the flow reaches `limit` or
    /// no augmenting path is left. Returns the flow value.
    pub fn max_flow(&mut self, limit: usize) -> usize {
        let n = self.first.len() - 1;
        while self.flow_value < limit {
            let mut parent = vec![NONE; n];
            let mut seen = vec![false; n];
            let mut queue = VecDeque::from([self.start()]);
            seen[self.start()] = true;
            while let Some(x) = queue.pop_front() {
                if x == self.end() {
                    break;
                }
                for &arc in self.arcs_from(x) {
                    let y = self.head[arc];
                    if self.residual[arc] > 0 && !seen[y] {
                        seen[y] = true;
                        parent[y] = arc;
                        queue.push_back(y);
                    }
                }
            }
            if !seen[self.end()] {
                break;
            }
            self.augment(&parent);
        }
        self.flow_value
    }

    /// Successive shortest paths (Bellman-Ford on the residual network) until
    /// the flow reaches `amount`. Returns the total cost if `amount` units
    /// were routed, `None` otherwise (the partial flow is kept).
    pub fn min_cost_flow(&mut self, amount: usize) -> Option<i64> {
        let n = self.first.len() - 1;
        while self.flow_value < amount {
            let mut dist = vec![i64::MAX; n];
            let mut parent = vec![NONE; n];
            let mut in_queue = vec![false; n];
            let mut queue = VecDeque::from([self.start()]);
            dist[self.start()] = 0;
            in_queue[self.start()] = true;
            while let Some(x) = queue.pop_front() {
                in_queue[x] = false;
                for &arc in self.arcs_from(x) {
                    if self.residual[arc] <= 0 {
                        continue;
                    }
                    let y = self.head[arc];
                    let candidate = dist[x] + self.cost[arc];
                    if candidate < dist[y] {
                        dist[y] = candidate;
                        parent[y] = arc;
                        if !in_queue[y] {
                            in_queue[y] = true;
                            queue.push_back(y);
                        }
                    }
                }
            }
            if dist[self.end()] == i64::MAX {
                return None;
            }
            self.augment(&parent);
        }
        Some(self.flow_cost)
    }

    pub fn flow_value(&self) -> usize {
        self.flow_value
    }

    pub fn flow_cost(&self) -> i64 {
        self.flow_cost
    }

    /// Decomposes the current flow into source-sink paths of original nodes,
    /// each starting at the source and ending at the sink. Flow cycles that
    /// do not touch a path are ignored.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        let mut remaining: Vec<i32> = (0..self.head.len())
            .map(|a| if a % 2 == 0 { self.capacity[a] - self.residual[a] } else { 0 })
            .collect();
        let mut paths = Vec::with_capacity(self.flow_value);
        for _ in 0..self.flow_value {
            let mut path = vec![self.source];
            let mut x = self.start();
            while x != self.end() {
                let Some(&arc) = self.arcs_from(x).iter().find(|&&a| remaining[a] > 0) else {
                    break;
                };
                remaining[arc] -= 1;
                x = self.head[arc];
                if x.is_multiple_of(2) {
                    path.push(x / 2);
                }
            }
            if x == self.end() {
                paths.push(path);
            }
        }
        paths
    }

    /// Nodes strictly inside the decomposed paths.
    pub fn carrying_nodes(&self) -> NodeSet {
        self.paths()
            .iter()
            .flat_map(|p| p[1..p.len() - 1].iter().copied())
            .collect()
    }

    /// Original edges traversed by the decomposed paths, as `(u, v)` with `u < v`.
    pub fn carrying_edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = self
            .paths()
            .iter()
            .flat_map(|p| p.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1]))).collect::<Vec<_>>())
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    /// After a maximum flow: the nodes whose internal arc crosses the minimum
    /// cut, i.e. `v_in` is reachable from the source in the residual network
    /// and `v_out` is not.
    pub fn cut_nodes(&self) -> NodeSet {
        let n = self.first.len() - 1;
        let mut seen = vec![false; n];
        let mut stack = vec![self.start()];
        seen[self.start()] = true;
        while let Some(x) = stack.pop() {
            for &arc in self.arcs_from(x) {
                let y = self.head[arc];
                if self.residual[arc] > 0 && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..n / 2)
            .filter(|&v| v != self.source && v != self.sink)
            .filter(|&v| seen[node_in(v)] && !seen[node_out(v)])
            .collect()
    }
}
