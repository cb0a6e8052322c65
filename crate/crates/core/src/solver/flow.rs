//! Successive-shortest-path min-cost flow over real capacities.
//!
//! Dijkstra with node potentials on the residual graph. Graphs here are tiny
//! (consumers + producers + 2), so the shortest-path step is the dense
//! O(V²) variant, which also gives a fixed scan order for tie-breaking.

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    rev: usize,
    cap: f64,
    cost: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct MinCostFlow {
    adj: Vec<Vec<Arc>>,
    eps: f64,
}

/// Handle to a forward arc, used to read its flow after solving.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ArcRef {
    from: usize,
    idx: usize,
    cap: f64,
}

pub(crate) struct FlowOutcome {
    pub flow: f64,
    pub cost: f64,
}

impl MinCostFlow {
    /// `eps` is the residual capacity treated as zero.
    pub fn new(nodes: usize, eps: f64) -> Self {
        Self {
            adj: vec![Vec::new(); nodes],
            eps,
        }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: f64, cost: f64) -> ArcRef {
        debug_assert!(cost >= 0.0, "initial costs must be non-negative");
        let idx = self.adj[from].len();
        let rev = self.adj[to].len() + usize::from(from == to);
        self.adj[from].push(Arc { to, rev, cap, cost });
        self.adj[to].push(Arc {
            to: from,
            rev: idx,
            cap: 0.0,
            cost: -cost,
        });
        ArcRef { from, idx, cap }
    }

    pub fn flow_on(&self, arc: ArcRef) -> f64 {
        (arc.cap - self.adj[arc.from][arc.idx].cap).max(0.0)
    }

    /// Pushes up to `limit` units from `source` to `sink` at minimum cost.
    /// Stops early when no augmenting path remains.
    pub fn run(&mut self, source: usize, sink: usize, limit: f64) -> FlowOutcome {
        let n = self.adj.len();
        let mut potential = vec![0.0_f64; n];
        let mut flow = 0.0;
        let mut cost = 0.0;
        while limit - flow > self.eps {
            let mut dist = vec![f64::INFINITY; n];
            let mut done = vec![false; n];
            let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
            dist[source] = 0.0;
            loop {
                let mut u = usize::MAX;
                for v in 0..n {
                    if !done[v] && dist[v].is_finite() && (u == usize::MAX || dist[v] < dist[u]) {
                        u = v;
                    }
                }
                if u == usize::MAX {
                    break;
                }
                done[u] = true;
                for (i, a) in self.adj[u].iter().enumerate() {
                    if a.cap <= self.eps || done[a.to] {
                        continue;
                    }
                    // rounding can push reduced costs slightly negative
                    let reduced = (a.cost + potential[u] - potential[a.to]).max(0.0);
                    let nd = dist[u] + reduced;
                    if nd < dist[a.to] {
                        dist[a.to] = nd;
                        parent[a.to] = Some((u, i));
                    }
                }
            }
            if !dist[sink].is_finite() {
                break;
            }
            for v in 0..n {
                if dist[v].is_finite() {
                    potential[v] += dist[v];
                }
            }
            let mut push = limit - flow;
            let mut v = sink;
            while let Some((u, i)) = parent[v] {
                push = push.min(self.adj[u][i].cap);
                v = u;
            }
            let mut v = sink;
            while let Some((u, i)) = parent[v] {
                let rev = self.adj[u][i].rev;
                self.adj[u][i].cap -= push;
                cost += push * self.adj[u][i].cost;
                self.adj[v][rev].cap += push;
                v = u;
            }
            flow += push;
        }
        FlowOutcome { flow, cost }
    }
}
