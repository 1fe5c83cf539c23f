//! Hamiltonian cycle in grid graphs through timing.
//!
//! Every vertex becomes a room and every lattice edge a hallway. Visiting a
//! room sets off something that opens that vertex's door on an exit
//! corridor, and the corridor needs every such door at once. The budget is
//! tuned so that a closed walk through all vertices fits only when it has
//! exactly `n` hallways; grid graphs are bipartite, so any other closed
//! walk is at least two hallways longer and one hallway already overruns.
//!
//! Two vertices never form a cycle but do form a closed walk of length two,
//! so that case gets a permanently closed corridor door.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::instance::{GridGraph, Point};
use crate::level::{Element, ElementId, HepTrigger, Level, LevelBuilder, Passage, RoomId};

use super::CompileError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimedTiming {
    pub alpha: u64,
    pub delta: u64,
    pub epsilon_exit: u64,
}

impl TimedTiming {
    /// Smallest `alpha` allowed for `n` vertices, with unit `delta` and `epsilon_exit = n`.
    pub fn for_vertices(n: usize) -> Self {
        let n = n as u64;
        TimedTiming { alpha: n + 1, delta: 1, epsilon_exit: n.max(1) }
    }

    pub fn duration(&self, n: usize) -> u64 {
        (self.alpha + self.delta) * (n as u64 + 1) + self.epsilon_exit
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HepTiming {
    pub alpha: u64,
    pub delta: u64,
    pub epsilon1: u64,
    pub epsilon2: u64,
}

impl HepTiming {
    pub fn for_vertices(n: usize) -> Self {
        let n = n as u64;
        HepTiming { alpha: n + 1, delta: 1, epsilon1: n.max(1), epsilon2: 1 }
    }

    pub fn fire_tick(&self, n: usize) -> u64 {
        (self.alpha + self.delta) * n as u64 + self.epsilon1 + self.epsilon2
    }
}

fn check_hallway(alpha: u64, delta: u64, n: usize) -> Result<(), CompileError> {
    if delta == 0 {
        return Err(CompileError::TimingViolation("delta must be at least 1".into()));
    }
    if alpha <= n as u64 * delta {
        return Err(CompileError::TimingViolation(format!(
            "alpha = {alpha} must exceed n * delta = {}",
            n as u64 * delta
        )));
    }
    Ok(())
}

/// `slack` ticks remain once a tour through `n` vertices is done; it must be
/// positive, and for `n >= 3` no more than one extra hallway.
fn check_slack(slack: i128, hallway: u64, n: usize) -> Result<(), CompileError> {
    if slack < 1 {
        return Err(CompileError::TimingViolation(format!("a perfect tour overruns the deadline by {}", 1 - slack)));
    }
    if n >= 3 && slack > hallway as i128 {
        return Err(CompileError::TimingViolation(format!(
            "slack {slack} would admit a tour with an extra hallway of {hallway} ticks"
        )));
    }
    Ok(())
}

fn label((x, y): Point) -> String {
    format!("v {x} {y}")
}

struct Skeleton {
    b: LevelBuilder,
    rooms: BTreeMap<Point, RoomId>,
}

fn vertex_rooms(g: &GridGraph, hallway: u64, lock: ElementId, grill: bool, mut b: LevelBuilder) -> Skeleton {
    let rooms: BTreeMap<Point, RoomId> = g.vertices.iter().map(|&p| (p, b.room(label(p)))).collect();
    for (p, q) in g.edges() {
        let mut passage = Passage::new(rooms[&p], rooms[&q], hallway).guarded(lock);
        if grill {
            passage = passage.with_grill();
        }
        b.passage(passage);
    }
    Skeleton { b, rooms }
}

/// Exit corridor from `from` through one door per vertex; returns the goal room.
fn corridor(b: &mut LevelBuilder, from: RoomId, doors: &[ElementId], two_vertex: bool) -> RoomId {
    let mut at = from;
    for (k, &door) in doors.iter().enumerate() {
        let next = b.room(format!("corridor {}", k + 1));
        b.passage(Passage::new(at, next, 1).guarded(door));
        at = next;
    }
    if two_vertex {
        let sealed = b.door(false);
        let next = b.room("sealed");
        b.passage(Passage::new(at, next, 1).guarded(sealed));
        at = next;
    }
    at
}

/// Timed buttons: each vertex room holds a button whose timer keeps that
/// vertex's corridor door open. The start vertex's button sits on a pad
/// before the grid and also opens the lock on every hallway.
pub fn compile_hamcycle_timed(g: &GridGraph, timing: TimedTiming) -> Result<Level, CompileError> {
    let n = g.n();
    check_hallway(timing.alpha, timing.delta, n)?;
    if timing.epsilon_exit == 0 {
        return Err(CompileError::TimingViolation("epsilon_exit must be at least 1".into()));
    }
    let hallway = timing.alpha + timing.delta - 1;
    let pad_ticks = hallway.saturating_sub(1).max(1);
    let duration = timing.duration(n);
    // Ticks from the start press until the last corridor segment is entered.
    let elapsed = if n == 1 { pad_ticks } else { pad_ticks + n as u64 * hallway + 2 * (n as u64 - 1) };
    check_slack(duration as i128 - elapsed as i128, hallway, n)?;

    let mut b = LevelBuilder::new();
    let lock = b.door(false);
    let Skeleton { mut b, rooms } = vertex_rooms(g, hallway, lock, false, b);
    let pad = b.room("pad");
    let start = rooms[&g.start];
    // A long fall, so the start button cannot be pressed a second time.
    b.passage(Passage::new(pad, start, pad_ticks).one_way().guarded(lock));

    // The start timer runs longest, so its door is the last one on the corridor.
    let mut exits = Vec::new();
    let mut start_exit = None;
    for (&p, &room) in &rooms {
        let exit = b.door(false);
        let id = b.next_id();
        let (room, opens) = if p == g.start {
            start_exit = Some(exit);
            (pad, BTreeSet::from([exit, lock]))
        } else {
            exits.push(exit);
            (room, BTreeSet::from([exit]))
        };
        b.element(Element::TimedButton { id, room, duration_ticks: duration, opens });
    }
    exits.extend(start_exit);
    let goal = corridor(&mut b, start, &exits, n == 2);
    Ok(b.build(pad, goal))
}

/// High energy pellets: each vertex room has a launcher that a portal pair
/// redirects into its catcher, opening the vertex's corridor door for good.
/// A global pellet lands at the deadline and seals both the hallways and the
/// time verifier at the end of the corridor.
pub fn compile_hamcycle_hep(g: &GridGraph, timing: HepTiming) -> Result<Level, CompileError> {
    let n = g.n();
    check_hallway(timing.alpha, timing.delta, n)?;
    if timing.epsilon2 == 0 {
        return Err(CompileError::TimingViolation("epsilon2 must be at least 1".into()));
    }
    let hallway = timing.alpha + timing.delta - 1;
    let fire = timing.fire_tick(n);
    // Ticks until the verifier passage is entered after a perfect tour.
    let tour = if n == 1 { 2 } else { n as u64 * (hallway + 1) + n as u64 };
    check_slack(fire as i128 - tour as i128, hallway, n)?;

    let mut b = LevelBuilder::new();
    let lock = b.door(true);
    let Skeleton { mut b, rooms } = vertex_rooms(g, hallway, lock, true, b);
    let mut exits = Vec::new();
    for &room in rooms.values() {
        let exit = b.door(false);
        exits.push(exit);
        let launcher = b.next_id();
        b.element(Element::PortalSurface { id: launcher, room, visible_from: BTreeSet::new() });
        let catcher = b.next_id();
        b.element(Element::PortalSurface { id: catcher, room, visible_from: BTreeSet::new() });
        let id = b.next_id();
        b.element(Element::HepPair {
            id,
            trigger: HepTrigger::PortalRedirect { surfaces: (launcher, catcher) },
            on_fire_opens: BTreeSet::from([exit]),
            on_fire_closes: BTreeSet::new(),
        });
    }
    let start = rooms[&g.start];
    let end = corridor(&mut b, start, &exits, n == 2);
    let verifier = b.door(true);
    let goal = b.room("verified");
    b.passage(Passage::new(end, goal, timing.epsilon2).guarded(verifier));
    let id = b.next_id();
    b.element(Element::HepPair {
        id,
        trigger: HepTrigger::Scheduled { catcher_fire_tick: fire },
        on_fire_opens: BTreeSet::new(),
        on_fire_closes: BTreeSet::from([verifier, lock]),
    });
    Ok(b.build(start, goal))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::level::validate_level;
    use crate::solver::{solve, SearchBounds, Verdict};

    fn timed(g: &GridGraph) -> Verdict {
        let level = compile_hamcycle_timed(g, TimedTiming::for_vertices(g.n())).unwrap();
        assert!(validate_level(&level).is_valid(), "{}", validate_level(&level));
        solve(&level, SearchBounds::default()).unwrap()
    }

    fn hep(g: &GridGraph) -> Verdict {
        let level = compile_hamcycle_hep(g, HepTiming::for_vertices(g.n())).unwrap();
        assert!(validate_level(&level).is_valid(), "{}", validate_level(&level));
        solve(&level, SearchBounds::default()).unwrap()
    }

    #[test]
    fn timer_and_fire_formulas() {
        let t = TimedTiming { alpha: 5, delta: 1, epsilon_exit: 2 };
        assert_eq!(t.duration(4), 32);
        let square = GridGraph::rectangle(2, 2);
        let level = compile_hamcycle_timed(&square, t).unwrap();
        assert!(level.elements.iter().all(|e| match e {
            Element::TimedButton { duration_ticks, .. } => *duration_ticks == 32,
            _ => true,
        }));
        let h = HepTiming { alpha: 5, delta: 1, epsilon1: 2, epsilon2: 3 };
        assert_eq!(h.fire_tick(4), 29);
        assert!(compile_hamcycle_hep(&square, h).is_ok());
    }

    #[test]
    fn square_and_path() {
        let square = GridGraph::rectangle(2, 2);
        let path = GridGraph::rectangle(3, 1);
        assert!(timed(&square).is_solvable());
        assert!(!timed(&path).is_solvable());
        let timing = HepTiming::for_vertices(4);
        let Verdict::Solvable { ticks, .. } = hep(&square) else { panic!("square is Hamiltonian") };
        // The verifier was entered before the deadline.
        assert!(ticks - timing.epsilon2 < timing.fire_tick(4));
        assert!(!hep(&path).is_solvable());
    }

    #[test]
    fn tiny_graphs() {
        let one = GridGraph::rectangle(1, 1);
        let two = GridGraph::rectangle(2, 1);
        assert!(timed(&one).is_solvable() && hep(&one).is_solvable());
        assert!(!timed(&two).is_solvable() && !hep(&two).is_solvable());
    }

    #[test]
    fn rejects_bad_timing() {
        let square = GridGraph::rectangle(2, 2);
        let slow = TimedTiming { alpha: 4, delta: 1, epsilon_exit: 2 };
        assert!(matches!(compile_hamcycle_timed(&square, slow), Err(CompileError::TimingViolation(_))));
        let loose = TimedTiming { alpha: 5, delta: 1, epsilon_exit: 40 };
        assert!(matches!(compile_hamcycle_timed(&square, loose), Err(CompileError::TimingViolation(_))));
        let late = HepTiming { alpha: 5, delta: 1, epsilon1: 0, epsilon2: 1 };
        assert!(matches!(compile_hamcycle_hep(&square, late), Err(CompileError::TimingViolation(_))));
    }

    #[test]
    fn six_cycle_and_a_tail() {
        assert!(timed(&GridGraph::rectangle(3, 2)).is_solvable());
        let tail = GridGraph::new([(0, 0), (1, 0), (0, 1), (1, 1), (2, 0)], Some((0, 0))).unwrap();
        assert!(!timed(&tail).is_solvable());
        assert!(!hep(&tail).is_solvable());
    }
}
