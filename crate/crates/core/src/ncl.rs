//! Nondeterministic Constraint Logic.
//!
//! A constraint graph carries a nonnegative weight on every edge, an integer
//! constraint on every vertex, and an orientation on every edge. It is valid
//! when each vertex receives at least its constraint in total weight from
//! the edges pointing at it. A move flips one edge and must keep the graph
//! valid.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Undirected edge stored with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeKey {
    pub lo: VertexId,
    pub hi: VertexId,
}

impl EdgeKey {
    pub fn new(a: VertexId, b: VertexId) -> Self {
        EdgeKey { lo: a.min(b), hi: a.max(b) }
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub key: EdgeKey,
    pub weight: u64,
    /// `+1` points from `key.lo` to `key.hi`, `-1` the other way.
    pub orientation: i8,
}

impl Edge {
    pub fn head(&self) -> VertexId {
        if self.orientation > 0 {
            self.key.hi
        } else {
            self.key.lo
        }
    }

    pub fn points_into(&self, v: VertexId) -> bool {
        self.head() == v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum NclError {
    #[error("edge {0} is not in the graph")]
    UnknownEdge(EdgeKey),
    #[error("flipping {0} would violate a vertex constraint")]
    InvalidFlip(EdgeKey),
    #[error("edge {0} is a loop or duplicates another edge")]
    NotSimple(EdgeKey),
    #[error("edge {0} references an undeclared vertex")]
    UnknownVertex(EdgeKey),
    #[error("orientation must be +1 or -1")]
    BadOrientation,
    #[error("initial orientation violates the constraint at {0}")]
    InvalidInitialOrientation(VertexId),
    #[error("vertex {0} must have degree 3")]
    DegreeMismatch(VertexId),
    #[error("edge weights around {0} do not match its gate type")]
    WeightMismatch(VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstraintGraph {
    constraints: BTreeMap<VertexId, i64>,
    edges: Vec<Edge>,
}

impl ConstraintGraph {
    /// Builds a graph; validity of the orientation is not required here.
    pub fn new(constraints: BTreeMap<VertexId, i64>, edges: Vec<Edge>) -> Result<Self, NclError> {
        let mut keys = std::collections::BTreeSet::new();
        for e in &edges {
            if e.key.lo >= e.key.hi || !keys.insert(e.key) {
                return Err(NclError::NotSimple(e.key));
            }
            if !constraints.contains_key(&e.key.lo) || !constraints.contains_key(&e.key.hi) {
                return Err(NclError::UnknownVertex(e.key));
            }
            if e.orientation != 1 && e.orientation != -1 {
                return Err(NclError::BadOrientation);
            }
        }
        Ok(ConstraintGraph { constraints, edges })
    }

    /// Convenience constructor from `(tail, head, weight)` triples.
    pub fn from_arcs(
        constraints: impl IntoIterator<Item = (u32, i64)>,
        arcs: impl IntoIterator<Item = (u32, u32, u64)>,
    ) -> Result<Self, NclError> {
        let constraints = constraints.into_iter().map(|(v, c)| (VertexId(v), c)).collect();
        let edges = arcs
            .into_iter()
            .map(|(t, h, w)| {
                let key = EdgeKey::new(VertexId(t), VertexId(h));
                Edge { key, weight: w, orientation: if VertexId(h) == key.hi { 1 } else { -1 } }
            })
            .collect();
        Self::new(constraints, edges)
    }

    pub fn constraints(&self) -> &BTreeMap<VertexId, i64> {
        &self.constraints
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_index(&self, key: EdgeKey) -> Option<usize> {
        self.edges.iter().position(|e| e.key == key)
    }

    pub fn incident(&self, v: VertexId) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.key.lo == v || e.key.hi == v)
            .map(|(i, _)| i)
    }

    pub fn inflow(&self, v: VertexId) -> u64 {
        self.edges.iter().filter(|e| e.points_into(v)).map(|e| e.weight).sum()
    }

    pub fn satisfied(&self, v: VertexId) -> bool {
        self.inflow(v) as i128 >= self.constraints[&v] as i128
    }

    /// Orientation as a bitmask: bit `i` set when edge `i` differs from `reference`.
    fn flips_relative_to(&self, reference: &ConstraintGraph) -> u64 {
        self.edges
            .iter()
            .zip(&reference.edges)
            .enumerate()
            .filter(|(_, (a, b))| a.orientation != b.orientation)
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    pub fn with_flips(&self, mask: u64) -> ConstraintGraph {
        let mut g = self.clone();
        for (i, e) in g.edges.iter_mut().enumerate() {
            if mask >> i & 1 == 1 {
                e.orientation = -e.orientation;
            }
        }
        g
    }

    /// Classifies `v` by its constraint and incident weights.
    pub fn role(&self, v: VertexId) -> VertexRole {
        let c = self.constraints[&v];
        if c <= 0 {
            return VertexRole::Free;
        }
        let incident: Vec<usize> = self.incident(v).collect();
        if c != 2 || incident.len() != 3 {
            return VertexRole::Other;
        }
        let weights: Vec<u64> = incident.iter().map(|&i| self.edges[i].weight).collect();
        if weights.iter().all(|&w| w == 2) {
            return VertexRole::Or([incident[0], incident[1], incident[2]]);
        }
        let heavy: Vec<usize> = incident.iter().copied().filter(|&i| self.edges[i].weight == 2).collect();
        let light: Vec<usize> = incident.iter().copied().filter(|&i| self.edges[i].weight == 1).collect();
        if heavy.len() == 1 && light.len() == 2 {
            VertexRole::And { x: light[0], y: light[1], o: heavy[0] }
        } else {
            VertexRole::Other
        }
    }
}

/// Gate type of a vertex; edge fields are indices into [`ConstraintGraph::edges`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexRole {
    And { x: usize, y: usize, o: usize },
    Or([usize; 3]),
    Free,
    Other,
}

pub fn is_valid(g: &ConstraintGraph) -> bool {
    g.constraints.keys().all(|&v| g.satisfied(v))
}

/// Reverses `edge` if the result is still valid. `g` is left untouched.
pub fn flip(g: &ConstraintGraph, edge: EdgeKey) -> Result<ConstraintGraph, NclError> {
    let i = g.edge_index(edge).ok_or(NclError::UnknownEdge(edge))?;
    let mut out = g.clone();
    out.edges[i].orientation = -out.edges[i].orientation;
    let e = out.edges[i];
    // Only the old head can lose inflow.
    let lost = if e.orientation > 0 { e.key.lo } else { e.key.hi };
    if out.satisfied(lost) {
        Ok(out)
    } else {
        Err(NclError::InvalidFlip(edge))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GateKind {
    And,
    Or,
    Free,
}

/// Builds an AND/OR graph. Edges are `(tail, head, weight)` in their initial orientation.
pub fn build_and_or_graph(
    vertices: &[(u32, GateKind)],
    arcs: &[(u32, u32, u64)],
) -> Result<ConstraintGraph, NclError> {
    let constraints = vertices.iter().map(|&(v, k)| (v, if k == GateKind::Free { 0 } else { 2 }));
    let g = ConstraintGraph::from_arcs(constraints, arcs.iter().copied())?;
    for &(v, kind) in vertices {
        let v = VertexId(v);
        let weights: Vec<u64> = g.incident(v).map(|i| g.edges[i].weight).collect();
        match kind {
            GateKind::Free => {}
            GateKind::And | GateKind::Or => {
                if weights.len() != 3 {
                    return Err(NclError::DegreeMismatch(v));
                }
                let expected = if kind == GateKind::And { matches!(g.role(v), VertexRole::And { .. }) } else {
                    matches!(g.role(v), VertexRole::Or(_))
                };
                if !expected {
                    return Err(NclError::WeightMismatch(v));
                }
            }
        }
    }
    if let Some(&v) = g.constraints.keys().find(|&&v| !g.satisfied(v)) {
        return Err(NclError::InvalidInitialOrientation(v));
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NclAnswer {
    Yes { flips: Vec<EdgeKey> },
    No { states_explored: u64 },
    BoundExceeded { bound: u64 },
}

impl NclAnswer {
    pub fn is_yes(&self) -> bool {
        matches!(self, NclAnswer::Yes { .. })
    }
}

/// Breadth-first search over orientations for a shortest flip sequence that
/// reverses `target`.
pub fn ncl_decide(g: &ConstraintGraph, target: EdgeKey, max_states: u64) -> Result<NclAnswer, NclError> {
    let t = g.edge_index(target).ok_or(NclError::UnknownEdge(target))?;
    assert!(g.edges.len() <= 64, "orientation masks hold at most 64 edges");
    let mut parent: HashMap<u64, (u64, usize)> = HashMap::new();
    parent.insert(0, (0, usize::MAX));
    let mut queue = VecDeque::from([0u64]);
    while let Some(mask) = queue.pop_front() {
        if mask >> t & 1 == 1 {
            let mut flips = Vec::new();
            let mut at = mask;
            while at != 0 {
                let (prev, e) = parent[&at];
                flips.push(g.edges[e].key);
                at = prev;
            }
            flips.reverse();
            return Ok(NclAnswer::Yes { flips });
        }
        let current = g.with_flips(mask);
        for (i, e) in current.edges.iter().enumerate() {
            let next = mask ^ 1 << i;
            if parent.contains_key(&next) {
                continue;
            }
            if flip(&current, e.key).is_ok() {
                if parent.len() as u64 >= max_states {
                    return Ok(NclAnswer::BoundExceeded { bound: max_states });
                }
                parent.insert(next, (mask, i));
                queue.push_back(next);
            }
        }
    }
    Ok(NclAnswer::No { states_explored: parent.len() as u64 })
}

/// Applies `flips` in order, failing on the first invalid one.
pub fn replay_flips(g: &ConstraintGraph, flips: &[EdgeKey]) -> Result<ConstraintGraph, NclError> {
    flips.iter().try_fold(g.clone(), |acc, &e| flip(&acc, e))
}

/// Orientation of `g` relative to `reference`, one bit per edge.
pub fn orientation_delta(g: &ConstraintGraph, reference: &ConstraintGraph) -> u64 {
    g.flips_relative_to(reference)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lone_and(x_in: bool, y_in: bool, o_in: bool) -> ConstraintGraph {
        // v0 is the gate; v1, v2, v3 are free ends of x, y, o.
        let arc = |other: u32, inward: bool, w| if inward { (other, 0, w) } else { (0, other, w) };
        ConstraintGraph::from_arcs(
            [(0, 2), (1, 0), (2, 0), (3, 0)],
            [arc(1, x_in, 1), arc(2, y_in, 1), arc(3, o_in, 2)],
        )
        .unwrap()
    }

    #[test]
    fn empty_graph_is_valid() {
        let g = ConstraintGraph::new(BTreeMap::new(), vec![]).unwrap();
        assert!(is_valid(&g));
    }

    #[test]
    fn and_gate_validity() {
        assert!(is_valid(&lone_and(true, true, false)));
        assert!(!is_valid(&lone_and(false, true, false)));
        assert!(is_valid(&lone_and(false, false, true)));
    }

    #[test]
    fn free_edge_flips_both_ways() {
        let g = ConstraintGraph::from_arcs([(0, 0), (1, 0)], [(0, 1, 1)]).unwrap();
        let e = EdgeKey::new(VertexId(0), VertexId(1));
        let once = flip(&g, e).unwrap();
        assert_ne!(once, g);
        assert_eq!(flip(&once, e).unwrap(), g);
    }

    #[test]
    fn and_output_pinned_while_inputs_point_away() {
        let g = lone_and(false, false, true);
        let o = EdgeKey::new(VertexId(0), VertexId(3));
        assert_eq!(flip(&g, o), Err(NclError::InvalidFlip(o)));
        assert_eq!(
            flip(&g, EdgeKey::new(VertexId(5), VertexId(6))),
            Err(NclError::UnknownEdge(EdgeKey::new(VertexId(5), VertexId(6))))
        );
    }

    #[test]
    fn builder_checks_gates() {
        use GateKind::*;
        let ok = build_and_or_graph(
            &[(0, And), (1, Free), (2, Free), (3, Free)],
            &[(1, 0, 1), (2, 0, 1), (0, 3, 2)],
        );
        assert!(ok.is_ok());
        // One OR vertex with exactly one weight-2 edge inward.
        let or = build_and_or_graph(
            &[(0, Or), (1, Free), (2, Free), (3, Free)],
            &[(1, 0, 2), (0, 2, 2), (0, 3, 2)],
        );
        assert!(or.is_ok());
        let short = build_and_or_graph(&[(0, And), (1, Free), (2, Free)], &[(1, 0, 1), (2, 0, 1)]);
        assert_eq!(short, Err(NclError::DegreeMismatch(VertexId(0))));
        let bad = build_and_or_graph(
            &[(0, And), (1, Free), (2, Free), (3, Free)],
            &[(0, 1, 1), (2, 0, 1), (0, 3, 2)],
        );
        assert_eq!(bad, Err(NclError::InvalidInitialOrientation(VertexId(0))));
    }

    #[test]
    fn decide_isolated_edge() {
        let g = ConstraintGraph::from_arcs([(0, 0), (1, 0)], [(0, 1, 3)]).unwrap();
        let e = EdgeKey::new(VertexId(0), VertexId(1));
        assert_eq!(ncl_decide(&g, e, 100).unwrap(), NclAnswer::Yes { flips: vec![e] });
    }

    #[test]
    fn decide_pinned_and_output() {
        // x and y point away from the gate toward vertices that need them.
        let g = ConstraintGraph::from_arcs(
            [(0, 2), (1, 1), (2, 1), (3, 0)],
            [(0, 1, 1), (0, 2, 1), (3, 0, 2)],
        )
        .unwrap();
        assert!(is_valid(&g));
        let o = EdgeKey::new(VertexId(0), VertexId(3));
        let answer = ncl_decide(&g, o, 1000).unwrap();
        // No edge can move: x and y are needed where they point, and o is the
        // only inflow of the gate.
        assert!(matches!(answer, NclAnswer::No { states_explored: 1 }), "{answer:?}");
    }

    #[test]
    fn decide_unlocks_and_output() {
        let g = lone_and(false, false, true);
        let o = EdgeKey::new(VertexId(0), VertexId(3));
        let NclAnswer::Yes { flips } = ncl_decide(&g, o, 1000).unwrap() else { panic!() };
        assert_eq!(flips.len(), 3);
        let end = replay_flips(&g, &flips).unwrap();
        assert!(is_valid(&end));
        assert_eq!(orientation_delta(&end, &g) >> g.edge_index(o).unwrap() & 1, 1);
    }
}
