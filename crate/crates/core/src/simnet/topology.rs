use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::config::{Role, Waypoint};
use crate::types::{NodeId, SimTime};

pub type Position = (f64, f64);

pub fn distance(a: Position, b: Position) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlacedNode {
    pub id: NodeId,
    pub position: Position,
    pub role: Role,
}

/// Node placement plus a disc radio range. Links are always derived from the
/// current positions, never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Topology {
    pub nodes: Vec<PlacedNode>,
    pub radio_range_m: f64,
}

impl Topology {
    pub fn new(nodes: Vec<PlacedNode>, radio_range_m: f64) -> Self {
        assert!(radio_range_m > 0.0 && radio_range_m.is_finite());
        Topology {
            nodes,
            radio_range_m,
        }
    }

    fn position(&self, id: NodeId) -> Option<Position> {
        self.nodes.iter().find(|n| n.id == id).map(|n| n.position)
    }

    /// Whether `a` and `b` are within radio range of each other.
    pub fn is_link(&self, a: NodeId, b: NodeId) -> bool {
        match (self.position(a), self.position(b)) {
            (Some(pa), Some(pb)) => a != b && distance(pa, pb) <= self.radio_range_m,
            _ => false,
        }
    }

    pub fn neighbors(&self, id: NodeId) -> Vec<NodeId> {
        self.nodes
            .iter()
            .filter(|n| self.is_link(id, n.id))
            .map(|n| n.id)
            .collect()
    }

    pub fn adjacency(&self) -> BTreeMap<NodeId, Vec<NodeId>> {
        self.nodes
            .iter()
            .map(|n| (n.id, self.neighbors(n.id)))
            .collect()
    }

    /// Every node reachable from `start` over any number of hops, `start` included.
    pub fn component_of(&self, start: NodeId) -> BTreeSet<NodeId> {
        let adj = self.adjacency();
        let mut seen = BTreeSet::new();
        if !adj.contains_key(&start) {
            return seen;
        }
        let mut frontier = VecDeque::from([start]);
        seen.insert(start);
        while let Some(n) = frontier.pop_front() {
            for &m in &adj[&n] {
                if seen.insert(m) {
                    frontier.push_back(m);
                }
            }
        }
        seen
    }

    /// Fewest hops from `start` to every node in its component.
    pub fn hop_distances(&self, start: NodeId) -> BTreeMap<NodeId, u32> {
        let adj = self.adjacency();
        let mut dist = BTreeMap::new();
        if !adj.contains_key(&start) {
            return dist;
        }
        dist.insert(start, 0);
        let mut frontier = VecDeque::from([start]);
        while let Some(n) = frontier.pop_front() {
            let d = dist[&n];
            for &m in &adj[&n] {
                dist.entry(m).or_insert_with(|| {
                    frontier.push_back(m);
                    d + 1
                });
            }
        }
        dist
    }
}

/// Piecewise-linear Mobile-Hub path, clamped at both ends.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MobilityTrace {
    waypoints: Vec<(SimTime, Position)>,
}

impl MobilityTrace {
    pub fn new(waypoints: Vec<(SimTime, Position)>) -> Self {
        assert!(
            waypoints.windows(2).all(|w| w[0].0 < w[1].0),
            "waypoint times must be strictly increasing"
        );
        MobilityTrace { waypoints }
    }

    pub fn from_config(waypoints: &[Waypoint]) -> Self {
        Self::new(
            waypoints
                .iter()
                .map(|w| (SimTime(w.t_ms), (w.x, w.y)))
                .collect(),
        )
    }

    pub fn is_static(&self) -> bool {
        self.waypoints.len() < 2
    }

    pub fn is_empty(&self) -> bool {
        self.waypoints.is_empty()
    }

    pub fn position_at(&self, t: SimTime) -> Option<Position> {
        let first = self.waypoints.first()?;
        let last = self.waypoints.last()?;
        if t <= first.0 {
            return Some(first.1);
        }
        if t >= last.0 {
            return Some(last.1);
        }
        let i = self.waypoints.partition_point(|(wt, _)| *wt <= t);
        let (t0, p0) = self.waypoints[i - 1];
        let (t1, p1) = self.waypoints[i];
        let f = (t.0 - t0.0) as f64 / (t1.0 - t0.0) as f64;
        Some((p0.0 + (p1.0 - p0.0) * f, p0.1 + (p1.1 - p0.1) * f))
    }
}

/// Hub position at `t`; `None` only for an empty trace.
pub fn hub_position(trace: &MobilityTrace, t: SimTime) -> Option<Position> {
    trace.position_at(t)
}

/// Disc model: a frame reaches every node within `range_m`, each copy
/// independently lost with `per_link_loss_prob`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadioModel {
    pub range_m: f64,
    pub per_link_loss_prob: f64,
    pub latency_ms: u64,
}

impl RadioModel {
    pub fn in_range(&self, a: Position, b: Position) -> bool {
        distance(a, b) <= self.range_m
    }
}
