//! Unit-capacity max-flow and deterministic minimum edge cuts.
//!
//! Used for minimal cuts through tilings (discrete geodesics) and for finding
//! small Schmidt cuts through contraction networks. Cuts are tie-broken to the
//! lexicographically smallest edge-id set.

use std::collections::VecDeque;

/// An undirected unit-capacity multigraph on nodes 0..n.
#[derive(Debug, Clone, Default)]
pub struct CutGraph {
    n: usize,
    /// Undirected edges as node pairs; the index in this list is the edge id.
    edges: Vec<(usize, usize)>,
}

impl CutGraph {
    pub fn new(n: usize) -> Self {
        CutGraph { n, edges: Vec::new() }
    }

    pub fn add_node(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> usize {
        assert!(a < self.n && b < self.n);
        self.edges.push((a, b));
        self.edges.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        self.edges[edge]
    }

    /// Max-flow value between node sets, with the listed edges removed.
    /// Sources/sinks are attached with infinite capacity.
    fn max_flow_without(&self, sources: &[usize], sinks: &[usize], removed: &[bool]) -> usize {
        // Edmonds-Karp on the residual graph; unit capacities on real edges.
        let s = self.n;
        let t = self.n + 1;
        let n_nodes = self.n + 2;
        // adjacency: (to, edge_index_in_cap_vec)
        let mut cap: Vec<i32> = Vec::new();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_nodes];
        let add = |adj: &mut Vec<Vec<(usize, usize)>>, cap: &mut Vec<i32>, a: usize, b: usize, c: i32| {
            adj[a].push((b, cap.len()));
            cap.push(c);
            adj[b].push((a, cap.len()));
            cap.push(0);
        };
        const INF: i32 = i32::MAX / 4;
        for (id, &(a, b)) in self.edges.iter().enumerate() {
            if removed.get(id).copied().unwrap_or(false) {
                continue;
            }
            // undirected unit edge: capacity 1 both ways
            add(&mut adj, &mut cap, a, b, 1);
            add(&mut adj, &mut cap, b, a, 1);
        }
        for &src in sources {
            add(&mut adj, &mut cap, s, src, INF);
        }
        for &snk in sinks {
            add(&mut adj, &mut cap, snk, t, INF);
        }
        let mut flow = 0usize;
        loop {
            // BFS for an augmenting path
            let mut prev: Vec<Option<(usize, usize)>> = vec![None; n_nodes];
            let mut q = VecDeque::new();
            q.push_back(s);
            let mut reached = false;
            let mut visited = vec![false; n_nodes];
            visited[s] = true;
            while let Some(u) = q.pop_front() {
                if u == t {
                    reached = true;
                    break;
                }
                for &(v, ci) in &adj[u] {
                    if !visited[v] && cap[ci] > 0 {
                        visited[v] = true;
                        prev[v] = Some((u, ci));
                        q.push_back(v);
                    }
                }
            }
            if !reached {
                return flow;
            }
            // each augmenting path carries at least 1; trace back
            let mut bottleneck = INF;
            let mut v = t;
            while let Some((u, ci)) = prev[v] {
                bottleneck = bottleneck.min(cap[ci]);
                v = u;
            }
            let mut v = t;
            while let Some((u, ci)) = prev[v] {
                cap[ci] -= bottleneck;
                cap[ci ^ 1] += bottleneck;
                v = u;
            }
            flow += bottleneck as usize;
        }
    }

    pub fn max_flow(&self, sources: &[usize], sinks: &[usize]) -> usize {
        self.max_flow_without(sources, sinks, &vec![false; self.edges.len()])
    }

    /// The minimum edge cut separating `sources` from `sinks`, as the
    /// lexicographically smallest set of edge ids among all minimum cuts.
    ///
    /// Greedy certification: an edge id is committed to the cut iff a minimum
    /// cut of the required size containing the committed prefix exists.
    pub fn min_cut(&self, sources: &[usize], sinks: &[usize]) -> Vec<usize> {
        let total = self.max_flow(sources, sinks);
        let mut removed = vec![false; self.edges.len()];
        let mut cut = Vec::with_capacity(total);
        for e in 0..self.edges.len() {
            if cut.len() == total {
                break;
            }
            removed[e] = true;
            let f = self.max_flow_without(sources, sinks, &removed);
            if f == total - cut.len() - 1 {
                cut.push(e);
            } else {
                removed[e] = false;
            }
        }
        debug_assert_eq!(cut.len(), total, "lexicographic refinement must realize the max-flow value");
        cut
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_graph_cut_is_single_edge() {
        // 0 - 1 - 2 - 3
        let mut g = CutGraph::new(4);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        g.add_edge(2, 3);
        assert_eq!(g.max_flow(&[0], &[3]), 1);
        // lexicographically smallest single-edge cut is edge 0
        assert_eq!(g.min_cut(&[0], &[3]), vec![0]);
    }

    #[test]
    fn parallel_paths_need_two_edges() {
        // two disjoint paths 0-1-3 and 0-2-3
        let mut g = CutGraph::new(4);
        let e01 = g.add_edge(0, 1);
        let e13 = g.add_edge(1, 3);
        let e02 = g.add_edge(0, 2);
        let e23 = g.add_edge(2, 3);
        assert_eq!(g.max_flow(&[0], &[3]), 2);
        let cut = g.min_cut(&[0], &[3]);
        assert_eq!(cut, vec![e01, e02]);
        let _ = (e13, e23);
    }

    #[test]
    fn cut_value_matches_exhaustive_enumeration() {
        // K4 between 0 and 3
        let mut g = CutGraph::new(4);
        for a in 0..4 {
            for b in (a + 1)..4 {
                g.add_edge(a, b);
            }
        }
        let f = g.max_flow(&[0], &[3]);
        // brute force: smallest edge subset whose removal disconnects 0 from 3
        let m = g.edge_count();
        let mut best = m + 1;
        'outer: for size in 0..=m {
            for mask in 0u32..(1 << m) {
                if mask.count_ones() as usize != size {
                    continue;
                }
                let removed: Vec<bool> = (0..m).map(|i| mask & (1 << i) != 0).collect();
                if g.max_flow_without(&[0], &[3], &removed) == 0 {
                    best = size;
                    break 'outer;
                }
            }
        }
        assert_eq!(f, best);
        assert_eq!(f, 3);
    }

    #[test]
    fn multi_source_multi_sink() {
        // sources {0,1}, sinks {4,5}, bottleneck edges 2-3 style
        let mut g = CutGraph::new(6);
        g.add_edge(0, 2);
        g.add_edge(1, 2);
        g.add_edge(2, 3);
        g.add_edge(3, 4);
        g.add_edge(3, 5);
        assert_eq!(g.max_flow(&[0, 1], &[4, 5]), 1);
        assert_eq!(g.min_cut(&[0, 1], &[4, 5]), vec![2]);
    }
}
