//! Finite edge-weighted graphs as metric spaces.
//!
//! Edge weights are snapped to a dyadic grid when the runtime is built, so
//! every path length is an exact integer multiple of the quantum and the
//! f64 distances returned here satisfy symmetry and the triangle
//! inequality bit-for-bit. Shortest-path rows are computed lazily per
//! source and cached.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dyadic grid for edge weights: 2^-26.
pub const WEIGHT_QUANTUM: f64 = 1.0 / ((1u64 << 26) as f64);

/// Hard cap on node count.
pub const MAX_NODES: usize = 5000;

/// Largest tick total that stays exactly representable in f64.
const MAX_PATH_TICKS: u64 = 1 << 52;

/// Serializable graph description. Weights are kept as parsed; the
/// quantization happens only inside the runtime, so a load/save round
/// trip preserves the original numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphData {
    /// Curvature class the graph is declared to approximate.
    pub k: f64,
    pub nodes: Vec<String>,
    /// (from, to, weight) with 0-based node indices; undirected.
    pub edges: Vec<(usize, usize, f64)>,
}

impl GraphData {
    pub fn validate(&self) -> Result<()> {
        if !self.k.is_finite() {
            return Err(Error::InvalidSpec("graph curvature class must be finite".into()));
        }
        if self.nodes.is_empty() {
            return Err(Error::InvalidSpec("graph has no nodes".into()));
        }
        if self.nodes.len() > MAX_NODES {
            return Err(Error::BudgetExceeded(format!(
                "graph has {} nodes, cap is {MAX_NODES}",
                self.nodes.len()
            )));
        }
        for &(i, j, w) in &self.edges {
            if i >= self.nodes.len() || j >= self.nodes.len() {
                return Err(Error::InvalidSpec(format!("edge ({i}, {j}) out of range")));
            }
            if i == j {
                return Err(Error::InvalidSpec(format!("self-loop at node {i}")));
            }
            if !w.is_finite() || w < WEIGHT_QUANTUM {
                return Err(Error::InvalidSpec(format!(
                    "edge weight {w} must be finite and at least {WEIGHT_QUANTUM}"
                )));
            }
        }
        Ok(())
    }
}

fn to_ticks(w: f64) -> u64 {
    (w / WEIGHT_QUANTUM).round() as u64
}

pub struct GraphRuntime {
    adj: Vec<Vec<(usize, u64)>>,
    rows: Mutex<HashMap<usize, Arc<Vec<u64>>>>,
}

impl GraphRuntime {
    pub fn new(data: &GraphData) -> Result<Self> {
        data.validate()?;
        let n = data.nodes.len();
        let mut adj = vec![Vec::new(); n];
        let mut max_tick = 0u64;
        for &(i, j, w) in &data.edges {
            let t = to_ticks(w);
            max_tick = max_tick.max(t);
            adj[i].push((j, t));
            adj[j].push((i, t));
        }
        if (n as u64).saturating_mul(max_tick) >= MAX_PATH_TICKS {
            return Err(Error::InvalidSpec(
                "edge weights too large for exact path arithmetic at this node count".into(),
            ));
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        let rt = Self { adj, rows: Mutex::new(HashMap::new()) };
        // Reject disconnected graphs up front so `dist` is total.
        let row = rt.row(0);
        if row.iter().any(|&d| d == u64::MAX) {
            return Err(Error::InvalidSpec("graph is not connected".into()));
        }
        Ok(rt)
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    fn row(&self, src: usize) -> Arc<Vec<u64>> {
        if let Some(r) = self.rows.lock().unwrap().get(&src) {
            return Arc::clone(r);
        }
        let mut dist = vec![u64::MAX; self.adj.len()];
        dist[src] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0u64, src)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, w) in &self.adj[u] {
                let nd = d + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        let arc = Arc::new(dist);
        self.rows
            .lock()
            .unwrap()
            .entry(src)
            .or_insert_with(|| Arc::clone(&arc))
            .clone()
    }

    pub fn dist(&self, a: usize, b: usize) -> Result<f64> {
        let n = self.adj.len();
        if a >= n || b >= n {
            return Err(Error::ForeignPoint(format!("node index out of range: {a}, {b}")));
        }
        let ticks = self.row(a)[b];
        Ok(ticks as f64 * WEIGHT_QUANTUM)
    }

    /// Node on a shortest path from `a` to `b` whose distance from `a` is
    /// closest to `u`·dist(a, b). The path is recovered by walking back
    /// from `b` along tight edges (dist(a, v) + w == dist(a, cur)), taking
    /// the lowest-indexed tight neighbor at every step, so the choice is
    /// independent of traversal order; among path nodes equally close to
    /// the target the one nearer `a` wins. All arithmetic is in exact
    /// ticks, so ties are decided exactly.
    pub fn path_point(&self, a: usize, b: usize, u: f64) -> Result<usize> {
        let n = self.adj.len();
        if a >= n || b >= n {
            return Err(Error::ForeignPoint(format!("node index out of range: {a}, {b}")));
        }
        if a == b {
            return Ok(a);
        }
        let row = self.row(a);
        let total = row[b];
        let target = (u * total as f64).round() as u64;
        let mut path = vec![b];
        let mut cur = b;
        while cur != a {
            let mut next = None;
            for &(v, w) in &self.adj[cur] {
                if row[v].saturating_add(w) == row[cur] {
                    next = Some(v);
                    break;
                }
            }
            cur = next.ok_or_else(|| {
                Error::InvalidSpec("shortest-path row has no tight predecessor".into())
            })?;
            path.push(cur);
        }
        path.reverse();
        let mut best = (u64::MAX, a);
        for &node in &path {
            let gap = row[node].abs_diff(target);
            if gap < best.0 {
                best = (gap, node);
            }
        }
        Ok(best.1)
    }

    /// Largest nearest-neighbor gap over all nodes; the nearest other node
    /// always sits at the end of the lightest incident edge.
    pub fn max_min_incident(&self) -> f64 {
        let mut worst = 0u64;
        for nbrs in &self.adj {
            let m = nbrs.iter().map(|&(_, w)| w).min().unwrap_or(u64::MAX);
            worst = worst.max(m);
        }
        if worst == u64::MAX {
            0.0
        } else {
            worst as f64 * WEIGHT_QUANTUM
        }
    }
}
