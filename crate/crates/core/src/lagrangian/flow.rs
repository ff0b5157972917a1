//! Integral max-flow by shortest augmenting paths, with path decomposition.

use std::collections::VecDeque;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlowArc {
    pub from: usize,
    pub to: usize,
    pub capacity: u64,
}

/// Directed network with integral capacities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowNetwork {
    n_vertices: usize,
    source: usize,
    sink: usize,
    arcs: Vec<FlowArc>,
}

impl FlowNetwork {
    pub fn new(n_vertices: usize, source: usize, sink: usize) -> Self {
        assert!(source < n_vertices && sink < n_vertices && source != sink);
        Self {
            n_vertices,
            source,
            sink,
            arcs: Vec::new(),
        }
    }

    /// Adds an arc; zero-capacity arcs are kept but never carry flow.
    pub fn add_arc(&mut self, from: usize, to: usize, capacity: u64) -> usize {
        assert!(from < self.n_vertices && to < self.n_vertices && from != to);
        self.arcs.push(FlowArc { from, to, capacity });
        self.arcs.len() - 1
    }

    pub fn arcs(&self) -> &[FlowArc] {
        &self.arcs
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowPath {
    /// Vertices from source to sink.
    pub vertices: Vec<usize>,
    pub flow: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxFlow {
    pub value: u64,
    /// Flow on each arc, indexed like [`FlowNetwork::arcs`].
    pub arc_flow: Vec<u64>,
    pub paths: Vec<FlowPath>,
    /// Source side of a minimum cut.
    pub source_side: Vec<bool>,
}

impl MaxFlow {
    /// Capacity of the cut returned in `source_side`.
    pub fn cut_capacity(&self, net: &FlowNetwork) -> u64 {
        net.arcs
            .iter()
            .filter(|a| self.source_side[a.from] && !self.source_side[a.to])
            .map(|a| a.capacity)
            .sum()
    }
}

/// Edmonds–Karp. Adjacency follows arc insertion order, so results are deterministic.
pub fn max_flow(net: &FlowNetwork) -> MaxFlow {
    let nv = net.n_vertices;
    // Residual edges: 2k forward, 2k+1 backward.
    let mut residual: Vec<u64> = Vec::with_capacity(net.arcs.len() * 2);
    let mut head: Vec<usize> = Vec::with_capacity(net.arcs.len() * 2);
    let mut adj = vec![Vec::new(); nv];
    for (k, a) in net.arcs.iter().enumerate() {
        residual.push(a.capacity);
        head.push(a.to);
        residual.push(0);
        head.push(a.from);
        adj[a.from].push(2 * k);
        adj[a.to].push(2 * k + 1);
    }
    let mut value = 0u64;
    let mut via = vec![usize::MAX; nv];
    loop {
        via.iter_mut().for_each(|v| *v = usize::MAX);
        let mut seen = vec![false; nv];
        seen[net.source] = true;
        let mut queue = VecDeque::from([net.source]);
        while let Some(v) = queue.pop_front() {
            if v == net.sink {
                break;
            }
            for &e in &adj[v] {
                let t = head[e];
                if residual[e] > 0 && !seen[t] {
                    seen[t] = true;
                    via[t] = e;
                    queue.push_back(t);
                }
            }
        }
        if !seen[net.sink] {
            break;
        }
        let mut bottleneck = u64::MAX;
        let mut v = net.sink;
        while v != net.source {
            let e = via[v];
            bottleneck = bottleneck.min(residual[e]);
            v = head[e ^ 1];
        }
        let mut v = net.sink;
        while v != net.source {
            let e = via[v];
            residual[e] -= bottleneck;
            residual[e ^ 1] += bottleneck;
            v = head[e ^ 1];
        }
        value += bottleneck;
    }

    let mut source_side = vec![false; nv];
    source_side[net.source] = true;
    let mut queue = VecDeque::from([net.source]);
    while let Some(v) = queue.pop_front() {
        for &e in &adj[v] {
            let t = head[e];
            if residual[e] > 0 && !source_side[t] {
                source_side[t] = true;
                queue.push_back(t);
            }
        }
    }

    let arc_flow: Vec<u64> = (0..net.arcs.len()).map(|k| residual[2 * k + 1]).collect();
    let paths = decompose(net, &arc_flow);
    MaxFlow {
        value,
        arc_flow,
        paths,
        source_side,
    }
}

/// Splits an arc flow into source-sink paths (circulations, if any, are dropped).
fn decompose(net: &FlowNetwork, arc_flow: &[u64]) -> Vec<FlowPath> {
    let nv = net.n_vertices;
    let mut left = arc_flow.to_vec();
    let mut out_arcs = vec![Vec::new(); nv];
    for (k, a) in net.arcs.iter().enumerate() {
        out_arcs[a.from].push(k);
    }
    let mut paths = Vec::new();
    loop {
        // DFS over arcs that still carry flow.
        let mut visited = vec![false; nv];
        let mut stack: Vec<(usize, usize)> = vec![(net.source, 0)];
        let mut arc_stack: Vec<usize> = Vec::new();
        visited[net.source] = true;
        let mut found = false;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if v == net.sink {
                found = true;
                break;
            }
            if let Some(&k) = out_arcs[v].get(*next) {
                *next += 1;
                let t = net.arcs[k].to;
                if left[k] > 0 && !visited[t] {
                    visited[t] = true;
                    stack.push((t, 0));
                    arc_stack.push(k);
                }
            } else {
                stack.pop();
                arc_stack.pop();
            }
        }
        if !found {
            break;
        }
        let flow = arc_stack.iter().map(|&k| left[k]).min().unwrap_or(0);
        for &k in &arc_stack {
            left[k] -= flow;
        }
        paths.push(FlowPath {
            vertices: stack.iter().map(|&(v, _)| v).collect(),
            flow,
        });
    }
    paths
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_arc() {
        let mut net = FlowNetwork::new(2, 0, 1);
        net.add_arc(0, 1, 5);
        let f = max_flow(&net);
        assert_eq!(f.value, 5);
        assert_eq!(
            f.paths,
            vec![FlowPath {
                vertices: vec![0, 1],
                flow: 5
            }]
        );
        assert_eq!(f.cut_capacity(&net), 5);
    }

    #[test]
    fn diamond() {
        // s=0, a=1, b=2, t=3
        let mut net = FlowNetwork::new(4, 0, 3);
        net.add_arc(0, 1, 1);
        net.add_arc(1, 3, 1);
        net.add_arc(0, 2, 1);
        net.add_arc(2, 3, 1);
        let f = max_flow(&net);
        assert_eq!(f.value, 2);
        assert_eq!(f.paths.len(), 2);
        assert_eq!(f.paths.iter().map(|p| p.flow).sum::<u64>(), 2);
        assert_eq!(f.cut_capacity(&net), 2);
    }

    #[test]
    fn disconnected() {
        let mut net = FlowNetwork::new(3, 0, 2);
        net.add_arc(0, 1, 4);
        let f = max_flow(&net);
        assert_eq!(f.value, 0);
        assert!(f.paths.is_empty());
        assert_eq!(f.cut_capacity(&net), 0);
    }

    #[test]
    fn needs_reverse_residual() {
        // Classic case where the first BFS path must be partially undone.
        let mut net = FlowNetwork::new(4, 0, 3);
        net.add_arc(0, 1, 1);
        net.add_arc(0, 2, 1);
        net.add_arc(1, 2, 1);
        net.add_arc(1, 3, 1);
        net.add_arc(2, 3, 1);
        let f = max_flow(&net);
        assert_eq!(f.value, 2);
        assert_eq!(f.cut_capacity(&net), 2);
    }
}
