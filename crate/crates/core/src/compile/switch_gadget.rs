//! Switch gadgets and their external contract.
//!
//! A switch has two states, each holding its own set of doors open. The
//! avatar can change the state only while inside the gadget, and the state
//! persists while the avatar is away. Three physical realizations are
//! provided: a cube resting on one of two weighted buttons behind an
//! entrance door, and two memory latches (laser and gravity beam) whose
//! self-holding state machine is represented by the two-state element.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::level::{Element, ElementId, Level, LevelBuilder, RoomId};
use crate::sim::{GameState, Simulator};

use super::realize_switches;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SwitchKind {
    Cubes,
    Laser,
    Gravity,
}

impl SwitchKind {
    pub const ALL: [SwitchKind; 3] = [SwitchKind::Cubes, SwitchKind::Laser, SwitchKind::Gravity];

    pub fn name(self) -> &'static str {
        match self {
            SwitchKind::Cubes => "cubes",
            SwitchKind::Laser => "laser",
            SwitchKind::Gravity => "gravity",
        }
    }

    pub(crate) fn interior_label(self) -> &'static str {
        match self {
            SwitchKind::Cubes => "cube room",
            SwitchKind::Laser => "laser latch",
            SwitchKind::Gravity => "gravity latch",
        }
    }
}

impl std::str::FromStr for SwitchKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SwitchKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown switch kind {s:?}"))
    }
}

/// A level fragment realizing one switch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchGadget {
    pub kind: SwitchKind,
    pub level: Level,
    /// Where the avatar stands when it is not inside the gadget.
    pub outside: RoomId,
    /// Doors held open in state 0 and state 1.
    pub external: [BTreeSet<ElementId>; 2],
    pub initial_state: u8,
}

/// A single room holding the two-state element, to be realized by a gadget.
fn bare_switch() -> SwitchGadget {
    let mut b = LevelBuilder::new();
    let outside = b.room("outside");
    let a0 = b.door(false);
    let b0 = b.door(false);
    let a1 = b.door(false);
    let external = [BTreeSet::from([a0, b0]), BTreeSet::from([a1])];
    let id = b.next_id();
    b.element(Element::Switch { id, room: outside, initial_state: 0, open_in_state: external.clone() });
    SwitchGadget { kind: SwitchKind::Laser, level: b.build(outside, outside), outside, external, initial_state: 0 }
}

/// The abstract switch: the two-state element in a room next to the outside.
pub fn abstract_switch() -> SwitchGadget {
    let base = bare_switch();
    let mut level = base.level.clone();
    let inside = RoomId(level.rooms.len() as u32);
    level.rooms.push(crate::level::Room { id: inside, label: "switch".into() });
    level.passages.push(crate::level::Passage::new(base.outside, inside, 1));
    for e in &mut level.elements {
        if let Element::Switch { room, .. } = e {
            *room = inside;
        }
    }
    SwitchGadget { level, ..base }
}

pub fn instantiate_switch_gadget(kind: SwitchKind) -> SwitchGadget {
    let base = bare_switch();
    SwitchGadget { kind, level: realize_switches(&base.level, kind), ..base }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchCheck {
    pub sequences: u64,
    pub outside_observations: u64,
    pub reachable_states: usize,
}

impl SwitchGadget {
    /// State shown to the outside, if the avatar is outside and the door set
    /// matches exactly one state.
    pub fn observe(&self, state: &GameState) -> Option<Option<u8>> {
        if state.avatar_room != self.outside {
            return None;
        }
        let all: BTreeSet<ElementId> = self.external[0].union(&self.external[1]).copied().collect();
        let open: BTreeSet<ElementId> = state.doors_open.intersection(&all).copied().collect();
        Some((0..2u8).find(|&s| open == self.external[s as usize]))
    }
}

/// Compares the gadget with the abstract switch over every input sequence
/// of length at most `depth`, then checks by exhaustive search that from
/// every reachable configuration the avatar can bring the switch into
/// either state and walk back out.
pub fn check_switch_contract(gadget: &SwitchGadget, depth: usize) -> Result<SwitchCheck, String> {
    let sim = Simulator::new(&gadget.level);
    let initial = sim.initial_state();
    match gadget.observe(&initial) {
        Some(Some(s)) if s == gadget.initial_state => {}
        other => return Err(format!("initial observation {other:?}")),
    }

    let mut check = SwitchCheck { sequences: 0, outside_observations: 0, reachable_states: 0 };
    // (state, last outside observation, inside since that observation)
    let mut stack = vec![(initial.clone(), gadget.initial_state, false, 0usize)];
    while let Some((state, last, went_in, len)) = stack.pop() {
        check.sequences += 1;
        if len == depth {
            continue;
        }
        for (input, next) in sim.successors(&state) {
            let (last, went_in) = match gadget.observe(&next) {
                None => (last, true),
                Some(None) => return Err(format!("after {input}: outside doors match neither state")),
                Some(Some(s)) => {
                    check.outside_observations += 1;
                    if s != last && !went_in {
                        return Err(format!("after {input}: state changed while the avatar stayed outside"));
                    }
                    (s, false)
                }
            };
            stack.push((next, last, went_in, len + 1));
        }
    }

    let mut seen: HashSet<GameState> = HashSet::from([timeless(&initial)]);
    let mut queue = VecDeque::from([initial]);
    let mut order = Vec::new();
    while let Some(state) = queue.pop_front() {
        for (_, next) in sim.successors(&state) {
            if seen.insert(timeless(&next)) {
                queue.push_back(next);
            }
        }
        order.push(state);
    }
    check.reachable_states = order.len();
    for state in &order {
        let reachable = reachable_observations(&sim, gadget, state);
        if reachable != BTreeSet::from([0, 1]) {
            return Err(format!("from a reachable configuration only states {reachable:?} can be shown outside"));
        }
    }
    Ok(check)
}

/// Gadgets have no timers, so states differing only in the clock coincide.
fn timeless(state: &GameState) -> GameState {
    GameState { clock: 0, ..state.clone() }
}

fn reachable_observations(sim: &Simulator<'_>, gadget: &SwitchGadget, from: &GameState) -> BTreeSet<u8> {
    let mut seen: HashSet<GameState> = HashSet::from([timeless(from)]);
    let mut queue = VecDeque::from([from.clone()]);
    let mut shown = BTreeSet::new();
    while let Some(state) = queue.pop_front() {
        if let Some(Some(s)) = gadget.observe(&state) {
            shown.insert(s);
        }
        for (_, next) in sim.successors(&state) {
            if seen.insert(timeless(&next)) {
                queue.push_back(next);
            }
        }
    }
    shown
}
