//! Exhaustive reachability over a level's canonical state graph.
//!
//! The absolute clock is dropped from the search key: two states that agree
//! on everything except the clock have identical futures, because timers are
//! stored as residues. The one exception is a level with scheduled pellets,
//! whose catchers fire at absolute ticks; while any of them is pending the
//! clock stays in the key.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::level::{validate_level, Element, HepTrigger, Level, Mechanic, ValidationReport};
use crate::sim::{GameState, InputEvent, Simulator};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_states: u64,
    /// Clock values above this are identified while pellets are pending.
    pub max_clock: u64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_states: 5_000_000, max_clock: u64::MAX }
    }
}

impl SearchBounds {
    pub fn with_max_states(max_states: u64) -> Self {
        SearchBounds { max_states, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Solvable { witness: Vec<InputEvent>, ticks: u64, states_explored: u64 },
    Unsolvable { states_explored: u64 },
    BoundExceeded { bound: u64 },
}

impl Verdict {
    pub fn is_solvable(&self) -> bool {
        matches!(self, Verdict::Solvable { .. })
    }

    pub fn states_explored(&self) -> Option<u64> {
        match self {
            Verdict::Solvable { states_explored, .. } | Verdict::Unsolvable { states_explored } => {
                Some(*states_explored)
            }
            Verdict::BoundExceeded { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&[InputEvent]> {
        match self {
            Verdict::Solvable { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Solvable { witness, ticks, states_explored } => write!(
                f,
                "Solvable ({} inputs, {ticks} ticks, {states_explored} states explored)",
                witness.len()
            ),
            Verdict::Unsolvable { states_explored } => {
                write!(f, "Unsolvable ({states_explored} states explored)")
            }
            Verdict::BoundExceeded { bound } => write!(f, "BoundExceeded (max_states = {bound})"),
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum SolveError {
    #[error("invalid level: {0}")]
    InvalidLevel(ValidationReport),
}

/// Search key for `state`: derived door set dropped, clock kept only while
/// some scheduled pellet is still in flight.
pub fn canonical_key(sim: &Simulator<'_>, state: &GameState, bounds: &SearchBounds) -> GameState {
    let mut key = state.clone();
    key.doors_open.clear();
    key.clock = if sim.has_pending_schedule(state) { state.clock.min(bounds.max_clock) } else { 0 };
    key
}

struct Node {
    state: GameState,
    parent: usize,
    input: Option<InputEvent>,
}

/// Breadth-first search for the goal room.
///
/// Among witnesses with the fewest inputs the one with the fewest ticks is
/// returned; remaining ties go to the earlier input encoding.
pub fn solve(level: &Level, bounds: SearchBounds) -> Result<Verdict, SolveError> {
    let report = validate_level(level);
    if !report.is_valid() {
        return Err(SolveError::InvalidLevel(report));
    }
    let sim = Simulator::new(level);
    let initial = sim.initial_state();

    let mut nodes = vec![Node { state: initial.clone(), parent: usize::MAX, input: None }];
    let mut seen: HashMap<GameState, usize> = HashMap::new();
    seen.insert(canonical_key(&sim, &initial, &bounds), 0);
    if initial.avatar_room == level.goal {
        return Ok(Verdict::Solvable { witness: Vec::new(), ticks: 0, states_explored: 1 });
    }

    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let layer_start = nodes.len();
        let mut next = Vec::new();
        for &current in &frontier {
            for (input, succ) in sim.successors(&nodes[current].state) {
                let key = canonical_key(&sim, &succ, &bounds);
                if let Some(&idx) = seen.get(&key) {
                    // Same layer, cheaper in ticks: re-parent.
                    if idx >= layer_start && succ.clock < nodes[idx].state.clock {
                        nodes[idx] = Node { state: succ, parent: current, input: Some(input) };
                    }
                    continue;
                }
                if seen.len() as u64 >= bounds.max_states {
                    return Ok(Verdict::BoundExceeded { bound: bounds.max_states });
                }
                seen.insert(key, nodes.len());
                next.push(nodes.len());
                nodes.push(Node { state: succ, parent: current, input: Some(input) });
            }
        }

        let best = next
            .iter()
            .copied()
            .filter(|&i| nodes[i].state.avatar_room == level.goal)
            .min_by_key(|&i| nodes[i].state.clock);
        if let Some(goal) = best {
            let mut witness = Vec::new();
            let mut at = goal;
            while let Some(input) = nodes[at].input {
                witness.push(input);
                at = nodes[at].parent;
            }
            witness.reverse();
            return Ok(Verdict::Solvable {
                witness,
                ticks: nodes[goal].state.clock,
                states_explored: seen.len() as u64,
            });
        }
        frontier = next;
    }
    Ok(Verdict::Unsolvable { states_explored: seen.len() as u64 })
}

/// Product bound on the number of canonical states `solve` can visit.
///
/// Saturates at `u128::MAX`.
pub fn state_bound(level: &Level) -> u128 {
    let rooms = level.rooms.len() as u128;
    let mut bound = rooms.max(1);
    let mut mul = |factor: u128| bound = bound.saturating_mul(factor);
    let pow2 = |k: usize| if k >= 127 { u128::MAX } else { 1u128 << k };

    mul(pow2(level.count(Mechanic::Doors)));
    mul(pow2(level.count(Mechanic::Switches)));
    mul(pow2(level.count(Mechanic::Turrets)));
    mul(pow2(level.count(Mechanic::Hep)));
    let mut surfaces = 0u128;
    let mut latest = None;
    for element in &level.elements {
        match element {
            Element::TimedButton { duration_ticks, .. } => mul(*duration_ticks as u128 + 1),
            // A cube sits in a room, is carried, or has been destroyed.
            Element::Cube { .. } => mul(rooms + 2),
            Element::PortalSurface { .. } => surfaces += 1,
            Element::HepPair { trigger: HepTrigger::Scheduled { catcher_fire_tick }, .. } => {
                latest = latest.max(Some(*catcher_fire_tick));
            }
            _ => {}
        }
    }
    mul(surfaces * surfaces.saturating_sub(1) / 2 + 1);
    if let Some(t) = latest {
        mul(t as u128 + 1);
    }
    bound
}

/// Replays `witness` and reports whether it ends in the goal room.
pub fn replays_to_goal(level: &Level, witness: &[InputEvent]) -> bool {
    let sim = Simulator::new(level);
    match sim.replay(witness) {
        Ok(states) => states.last().map(|s| s.avatar_room) == Some(level.goal),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::level::{LevelBuilder, Passage};

    #[test]
    fn start_is_goal() {
        let mut b = LevelBuilder::new();
        let a = b.room("a");
        let v = solve(&b.build(a, a), SearchBounds::default()).unwrap();
        assert_eq!(v, Verdict::Solvable { witness: vec![], ticks: 0, states_explored: 1 });
    }

    #[test]
    fn door_without_opener() {
        let mut b = LevelBuilder::new();
        let a = b.room("a");
        let c = b.room("c");
        let d = b.door(false);
        b.passage(Passage::new(a, c, 1).guarded(d));
        let v = solve(&b.build(a, c), SearchBounds::default()).unwrap();
        assert!(matches!(v, Verdict::Unsolvable { .. }));
    }

    #[test]
    fn press_then_move() {
        let mut b = LevelBuilder::new();
        let a = b.room("a");
        let c = b.room("c");
        let d = b.door(false);
        let button = b.next_id();
        b.element(Element::TimedButton { id: button, room: a, duration_ticks: 3, opens: [d].into() });
        let p = b.passage(Passage::new(a, c, 2).guarded(d));
        let level = b.build(a, c);
        let v = solve(&level, SearchBounds::default()).unwrap();
        assert_eq!(v.witness().unwrap(), &[InputEvent::Press(button), InputEvent::Move(p)]);
        // Canonical states: {a, idle}, {a, 3 left}, {c, 1 left}, {a, 1 left}, ...
        assert!(v.states_explored().unwrap() <= 6);
        assert!(replays_to_goal(&level, v.witness().unwrap()));
    }

    #[test]
    fn invalid_level_is_rejected() {
        let mut b = LevelBuilder::new();
        let a = b.room("a");
        let mut level = b.build(a, a);
        level.goal = crate::level::RoomId(9);
        assert!(solve(&level, SearchBounds::default()).is_err());
    }

    #[test]
    fn bound_formula_small_cases() {
        let mut b = LevelBuilder::new();
        let a = b.room("a");
        assert_eq!(state_bound(&b.build(a, a)), 1);

        let mut b = LevelBuilder::new();
        let a = b.room("a");
        let c = b.room("c");
        let d = b.door(false);
        let id = b.next_id();
        b.element(Element::Switch { id, room: a, initial_state: 0, open_in_state: [Default::default(), [d].into()] });
        assert_eq!(state_bound(&b.build(a, c)), 8);
    }

    #[test]
    fn exceeding_the_budget() {
        let mut b = LevelBuilder::new();
        let rooms: Vec<_> = (0..5).map(|i| b.room(format!("r{i}"))).collect();
        for w in rooms.windows(2) {
            b.passage(Passage::new(w[0], w[1], 1));
        }
        let level = b.build(rooms[0], rooms[4]);
        assert_eq!(
            solve(&level, SearchBounds::with_max_states(3)).unwrap(),
            Verdict::BoundExceeded { bound: 3 }
        );
        assert!(solve(&level, SearchBounds::default()).unwrap().is_solvable());
    }

    #[test]
    fn prefers_fewer_ticks_among_shortest() {
        let mut b = LevelBuilder::new();
        let a = b.room("a");
        let c = b.room("c");
        b.passage(Passage::new(a, c, 9));
        let fast = b.passage(Passage::new(a, c, 2));
        let level = b.build(a, c);
        let v = solve(&level, SearchBounds::default()).unwrap();
        assert_eq!(v.witness().unwrap(), &[InputEvent::Move(fast)]);
    }
}
