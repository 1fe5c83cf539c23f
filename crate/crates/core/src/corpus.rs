//! Desk-scale instance families used by the cross-validation harness.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{CnfFormula, GridGraph, Literal, Point, SubsetSumInstance};
use crate::level::{Element, Level, LevelBuilder, Passage};
use crate::ncl::{is_valid, ConstraintGraph, Edge, EdgeKey, VertexId, VertexRole};

/// Every multiset of at most `max_n` values in `1..=max_value`, with every
/// target in `0..=max_target`.
pub fn subset_sum_instances(max_n: usize, max_value: u64, max_target: u64) -> Vec<SubsetSumInstance> {
    let mut multisets = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max_n {
        let mut next = Vec::new();
        for m in &frontier {
            let lo = m.last().copied().unwrap_or(1);
            for v in lo..=max_value {
                let mut m2: Vec<u64> = m.clone();
                m2.push(v);
                next.push(m2);
            }
        }
        multisets.extend(next.iter().cloned());
        frontier = next;
    }
    multisets
        .into_iter()
        .flat_map(|values| {
            (0..=max_target).map(move |t| SubsetSumInstance::new(values.clone(), t).expect("positive values"))
        })
        .collect()
}

/// Clauses as sorted sets of distinct literals over `vars` variables.
fn all_clauses(vars: u32) -> Vec<Vec<Literal>> {
    let lits: Vec<Literal> = (1..=vars)
        .flat_map(|var| [Literal { var, positive: true }, Literal { var, positive: false }])
        .collect();
    let mut out = Vec::new();
    for mask in 1u32..1 << lits.len() {
        if mask.count_ones() > 3 {
            continue;
        }
        let clause: Vec<Literal> = (0..lits.len()).filter(|i| mask >> i & 1 == 1).map(|i| lits[i]).collect();
        out.push(clause);
    }
    out.sort();
    out
}

fn permutations(k: u32) -> Vec<Vec<u32>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k);
            out.push(q);
        }
    }
    out
}

/// Smallest image of a clause set under variable renaming and sign flips.
fn canonical(clauses: &[Vec<Literal>], vars: u32, perms: &[Vec<u32>]) -> Vec<Vec<Literal>> {
    let mut best: Option<Vec<Vec<Literal>>> = None;
    for perm in perms {
        for flips in 0u32..1 << vars {
            let mut image: Vec<Vec<Literal>> = clauses
                .iter()
                .map(|c| {
                    let mut c: Vec<Literal> = c
                        .iter()
                        .map(|l| Literal {
                            var: perm[l.var as usize - 1],
                            positive: l.positive ^ (flips >> (l.var - 1) & 1 == 1),
                        })
                        .collect();
                    c.sort();
                    c
                })
                .collect();
            image.sort();
            if best.as_ref().is_none_or(|b| image < *b) {
                best = Some(image);
            }
        }
    }
    best.unwrap_or_default()
}

/// All sets of at most `max_clauses` distinct clauses over `vars` variables,
/// one representative per symmetry class.
pub fn small_cnf_formulas(vars: u32, max_clauses: usize) -> Vec<CnfFormula> {
    let clauses = all_clauses(vars);
    let perms = permutations(vars);
    let mut classes: BTreeSet<Vec<Vec<Literal>>> = BTreeSet::new();
    let mut pick = Vec::new();
    fn rec(
        start: usize,
        clauses: &[Vec<Literal>],
        pick: &mut Vec<usize>,
        max: usize,
        vars: u32,
        perms: &[Vec<u32>],
        classes: &mut BTreeSet<Vec<Vec<Literal>>>,
    ) {
        let chosen: Vec<Vec<Literal>> = pick.iter().map(|&i| clauses[i].clone()).collect();
        classes.insert(canonical(&chosen, vars, perms));
        if pick.len() == max {
            return;
        }
        for i in start..clauses.len() {
            pick.push(i);
            rec(i + 1, clauses, pick, max, vars, perms, classes);
            pick.pop();
        }
    }
    rec(0, &clauses, &mut pick, max_clauses, vars, &perms, &mut classes);
    classes.into_iter().map(|c| CnfFormula::new(vars, c).expect("well formed")).collect()
}

/// Seeded random formulas over `vars` variables with 1 to 3 literals per clause.
pub fn random_cnf_formulas(seed: u64, count: usize, vars: u32) -> Vec<CnfFormula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let m = rng.gen_range(1..=10);
            let clauses = (0..m)
                .map(|_| {
                    let width = rng.gen_range(1..=3usize.min(vars as usize));
                    let mut picked: Vec<u32> = (1..=vars).collect();
                    picked.shuffle(&mut rng);
                    picked[..width].iter().map(|&var| Literal { var, positive: rng.gen() }).collect()
                })
                .collect();
            CnfFormula::new(vars, clauses).expect("well formed")
        })
        .collect()
}

/// Connected induced subgraphs of the `w` by `h` grid with at most `max_vertices`
/// vertices, starting at their smallest vertex.
pub fn grid_subgraphs(w: i32, h: i32, max_vertices: usize) -> Vec<GridGraph> {
    let cells: Vec<Point> = (0..w).flat_map(|x| (0..h).map(move |y| (x, y))).collect();
    let mut out = Vec::new();
    for mask in 1u32..1 << cells.len() {
        if mask.count_ones() as usize > max_vertices {
            continue;
        }
        let vertices = (0..cells.len()).filter(|i| mask >> i & 1 == 1).map(|i| cells[i]);
        let g = GridGraph::new(vertices, None).expect("nonempty");
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}

/// A constraint graph instance with its target edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NclCase {
    pub name: String,
    pub graph: ConstraintGraph,
    pub target: EdgeKey,
}

fn is_gate(g: &ConstraintGraph, v: VertexId) -> bool {
    matches!(g.role(v), VertexRole::And { .. } | VertexRole::Or(_))
}

/// Seeded random AND/OR graphs with at most `max_edges` edges and a valid
/// initial orientation.
///
/// Shapes alternate between K4 and a triangle with one pendant edge per
/// corner (every gate vertex must fit AND or OR), and an arbitrary graph on
/// 4 to 6 vertices where degree-3 vertices become gates when their weights fit.
pub fn random_and_or_graphs(seed: u64, count: usize, max_edges: usize) -> Vec<NclCase> {
    let k4: Vec<(u32, u32)> = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let triangle: Vec<(u32, u32)> = vec![(0, 1), (1, 2), (0, 2), (0, 3), (1, 4), (2, 5)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let shape = out.len() % 3;
        let (pairs, strict): (Vec<(u32, u32)>, &[u32]) = match shape {
            0 if max_edges >= 6 => (k4.clone(), &[0, 1, 2, 3]),
            1 if max_edges >= 6 => (triangle.clone(), &[0, 1, 2]),
            _ => {
                let n = rng.gen_range(4..=6u32);
                let mut all: Vec<(u32, u32)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
                all.shuffle(&mut rng);
                let m = rng.gen_range(3..=max_edges.min(all.len()));
                all.truncate(m);
                (all, &[])
            }
        };
        let m = pairs.len();
        let n = pairs.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
        let edges: Vec<Edge> = pairs
            .iter()
            .map(|&(a, b)| Edge {
                key: EdgeKey::new(VertexId(a), VertexId(b)),
                weight: rng.gen_range(1..=2),
                orientation: 1,
            })
            .collect();
        let mut constraints: BTreeMap<VertexId, i64> = (0..n).map(|v| (VertexId(v), 2)).collect();
        let probe = ConstraintGraph::new(constraints.clone(), edges.clone()).expect("simple");
        if strict.iter().any(|&v| !is_gate(&probe, VertexId(v))) {
            continue;
        }
        for v in 0..n {
            let v = VertexId(v);
            if !strict.contains(&v.0) && (!is_gate(&probe, v) || rng.gen_bool(0.15)) {
                constraints.insert(v, 0);
            }
        }
        if constraints.values().all(|&c| c == 0) {
            continue;
        }
        let base = ConstraintGraph::new(constraints, edges).expect("simple");
        // Look for a valid orientation among a handful of random ones.
        let valid = (0..64).find_map(|_| {
            let mask: u64 = rng.gen::<u64>() & ((1 << m) - 1);
            let g = base.with_flips(mask);
            is_valid(&g).then_some(g)
        });
        let Some(graph) = valid else { continue };
        let target = graph.edges()[rng.gen_range(0..m)].key;
        out.push(NclCase { name: format!("random {}", out.len()), graph, target });
    }
    out
}

/// Small hand-built cases around single gates and a pinned cycle.
pub fn hand_built_ncl() -> Vec<NclCase> {
    let e = |a, b| EdgeKey::new(VertexId(a), VertexId(b));
    let graph = |cs: &[(u32, i64)], arcs: &[(u32, u32, u64)]| {
        ConstraintGraph::from_arcs(cs.iter().copied(), arcs.iter().copied()).expect("simple")
    };
    let lone_and = graph(&[(0, 2), (1, 0), (2, 0), (3, 0)], &[(1, 0, 1), (2, 0, 1), (0, 3, 2)]);
    let lone_or = graph(&[(0, 2), (1, 0), (2, 0), (3, 0)], &[(1, 0, 2), (0, 2, 2), (0, 3, 2)]);
    // Four OR gates on a 4-cycle with a diagonal pair, all edges weight 2.
    // Oriented as a directed triangle 0→1→2→0 plus 3 pointing nowhere in
    // would be invalid, so 3 receives from 0 and sends to 1 and 2.
    let k4 = graph(
        &[(0, 2), (1, 2), (2, 2), (3, 2)],
        &[(0, 1, 2), (1, 2, 2), (2, 0, 2), (0, 3, 2), (3, 1, 2), (3, 2, 2)],
    );
    // Two AND gates whose light edges point at each other's heavy side.
    let pinned = graph(
        &[(0, 2), (1, 2), (2, 0), (3, 0), (4, 0)],
        &[(0, 1, 2), (2, 0, 1), (3, 0, 1), (4, 1, 1), (1, 2, 1)],
    );
    // Vertex 0 is an OR gate fed by three heavy edges; 1, 2 and 3 are AND
    // gates on a light triangle. No edge can ever move.
    let frozen = ConstraintGraph::new(
        (0..4).map(|v| (VertexId(v), 2)).collect(),
        [(0, 1, 2, -1), (0, 2, 2, 1), (0, 3, 2, 1), (1, 2, 1, -1), (1, 3, 1, -1), (2, 3, 1, -1)]
            .into_iter()
            .map(|(a, b, weight, orientation)| Edge { key: e(a, b), weight, orientation })
            .collect(),
    )
    .expect("simple");
    vec![
        NclCase { name: "frozen k4".into(), graph: frozen, target: e(0, 1) },
        NclCase { name: "free edge".into(), graph: graph(&[(0, 0), (1, 0)], &[(0, 1, 1)]), target: e(0, 1) },
        NclCase { name: "and output".into(), graph: lone_and.clone(), target: e(0, 3) },
        NclCase { name: "and input".into(), graph: lone_and, target: e(0, 1) },
        NclCase { name: "or input".into(), graph: lone_or, target: e(0, 1) },
        NclCase { name: "or cycle".into(), graph: k4.clone(), target: e(0, 1) },
        NclCase { name: "or cycle diagonal".into(), graph: k4, target: e(0, 3) },
        NclCase { name: "chained and".into(), graph: pinned.clone(), target: e(1, 2) },
        NclCase { name: "chained and heavy".into(), graph: pinned, target: e(0, 1) },
    ]
}

/// `k` doors in series, door `i` held open by state 1 of a switch in room `i`.
pub fn door_series(k: usize) -> Level {
    let mut b = LevelBuilder::new();
    let rooms: Vec<_> = (0..=k).map(|i| b.room(format!("r{i}"))).collect();
    for i in 0..k {
        let door = b.door(false);
        b.passage(Passage::new(rooms[i], rooms[i + 1], 1).guarded(door));
        let id = b.next_id();
        b.element(Element::Switch {
            id,
            room: rooms[i],
            initial_state: 0,
            open_in_state: [BTreeSet::new(), BTreeSet::from([door])],
        });
    }
    b.build(rooms[0], rooms[k])
}
