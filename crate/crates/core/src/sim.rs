//! Deterministic single-step semantics over [`Level`]s.
//!
//! Every input costs at least one tick. Moves cost the passage's traverse
//! time, everything else costs exactly one tick. Dying is not a transition:
//! an input that would kill the avatar (walking into a turret's line of
//! fire) is simply illegal.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::level::{Element, ElementId, HepTrigger, Level, RoomId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CubeLocation {
    Room(RoomId),
    Carried,
    Destroyed,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GameState {
    pub avatar_room: RoomId,
    pub clock: u64,
    /// Derived from the other fields after every step.
    pub doors_open: BTreeSet<ElementId>,
    /// Remaining ticks of every running timed button. Entries are removed at expiry.
    pub timers: BTreeMap<ElementId, u64>,
    pub switch_states: BTreeMap<ElementId, u8>,
    pub turrets_alive: BTreeSet<ElementId>,
    pub cube_locations: BTreeMap<ElementId, CubeLocation>,
    /// Stored with the smaller surface id first.
    pub portal_pair: Option<(ElementId, ElementId)>,
    pub hep_fired: BTreeSet<ElementId>,
}

impl GameState {
    pub fn carried_cube(&self) -> Option<ElementId> {
        self.cube_locations
            .iter()
            .find(|(_, loc)| **loc == CubeLocation::Carried)
            .map(|(id, _)| *id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "input", content = "arg")]
pub enum InputEvent {
    Move(usize),
    Press(ElementId),
    ToggleSwitch(ElementId),
    PickUpCube(ElementId),
    DropCube,
    ShootPortalPair(ElementId, ElementId),
    PortalJump,
    DisableTurret(ElementId),
    Wait(u64),
}

impl fmt::Display for InputEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputEvent::Move(p) => write!(f, "move p{p}"),
            InputEvent::Press(b) => write!(f, "press {b}"),
            InputEvent::ToggleSwitch(s) => write!(f, "toggle {s}"),
            InputEvent::PickUpCube(c) => write!(f, "pick-up {c}"),
            InputEvent::DropCube => write!(f, "drop"),
            InputEvent::ShootPortalPair(a, b) => write!(f, "shoot {a} {b}"),
            InputEvent::PortalJump => write!(f, "portal-jump"),
            InputEvent::DisableTurret(t) => write!(f, "disable {t}"),
            InputEvent::Wait(k) => write!(f, "wait {k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum IllegalInput {
    #[error("no such passage")]
    UnknownPassage,
    #[error("avatar is not at an endpoint of the passage")]
    NotAtEndpoint,
    #[error("passage is a one-way drop in the other direction")]
    OneWay,
    #[error("guarding door is closed")]
    DoorClosed,
    #[error("passage is covered by a live turret")]
    CoveredByTurret,
    #[error("referenced element does not exist or has the wrong kind")]
    UnknownElement,
    #[error("avatar is in the wrong room")]
    WrongRoom,
    #[error("timed button is already running")]
    ButtonRunning,
    #[error("already carrying a cube")]
    HandsFull,
    #[error("not carrying a cube")]
    NothingCarried,
    #[error("portal surface not visible")]
    NotVisible,
    #[error("no usable portal pair")]
    NoPortals,
    #[error("turret already disabled")]
    TurretDown,
    #[error("wait must last at least one tick")]
    EmptyWait,
}

/// Per-level lookup tables, built once and reused across many steps.
#[derive(Debug)]
pub struct Simulator<'a> {
    level: &'a Level,
    by_id: HashMap<ElementId, usize>,
    covered_by: Vec<Vec<ElementId>>,
    passages_at: HashMap<RoomId, Vec<usize>>,
    switch_doors: BTreeSet<ElementId>,
    latest_schedule: Option<u64>,
}

impl<'a> Simulator<'a> {
    pub fn new(level: &'a Level) -> Self {
        let by_id = level.elements.iter().enumerate().map(|(i, e)| (e.id(), i)).collect();
        let mut covered_by = vec![Vec::new(); level.passages.len()];
        let mut switch_doors = BTreeSet::new();
        let mut latest_schedule = None;
        for element in &level.elements {
            match element {
                Element::Turret { id, blocks, .. } => {
                    for &p in blocks {
                        if let Some(list) = covered_by.get_mut(p) {
                            list.push(*id);
                        }
                    }
                }
                Element::Switch { open_in_state, .. } => {
                    switch_doors.extend(open_in_state[0].iter().chain(&open_in_state[1]));
                }
                Element::HepPair { trigger: HepTrigger::Scheduled { catcher_fire_tick }, .. } => {
                    latest_schedule = latest_schedule.max(Some(*catcher_fire_tick));
                }
                _ => {}
            }
        }
        let mut passages_at: HashMap<RoomId, Vec<usize>> = HashMap::new();
        for (i, p) in level.passages.iter().enumerate() {
            passages_at.entry(p.from).or_default().push(i);
            if p.to != p.from {
                passages_at.entry(p.to).or_default().push(i);
            }
        }
        Simulator { level, by_id, covered_by, passages_at, switch_doors, latest_schedule }
    }

    pub fn level(&self) -> &'a Level {
        self.level
    }

    /// Largest scheduled catcher tick, if the level has any scheduled pellets.
    pub fn latest_schedule(&self) -> Option<u64> {
        self.latest_schedule
    }

    fn get(&self, id: ElementId) -> Option<&'a Element> {
        self.by_id.get(&id).map(|&i| &self.level.elements[i])
    }

    pub fn initial_state(&self) -> GameState {
        let mut state = GameState {
            avatar_room: self.level.start,
            clock: 0,
            doors_open: BTreeSet::new(),
            timers: BTreeMap::new(),
            switch_states: BTreeMap::new(),
            turrets_alive: BTreeSet::new(),
            cube_locations: BTreeMap::new(),
            portal_pair: None,
            hep_fired: BTreeSet::new(),
        };
        for element in &self.level.elements {
            match element {
                Element::Switch { id, initial_state, .. } => {
                    state.switch_states.insert(*id, *initial_state);
                }
                Element::Turret { id, .. } => {
                    state.turrets_alive.insert(*id);
                }
                Element::Cube { id, initial_room } => {
                    state.cube_locations.insert(*id, CubeLocation::Room(*initial_room));
                }
                _ => {}
            }
        }
        self.settle(&mut state);
        state
    }

    pub fn step(&self, state: &GameState, input: InputEvent) -> Result<GameState, IllegalInput> {
        let mut next = state.clone();
        let mut ticks = 1;
        let mut pressed = None;
        match input {
            InputEvent::Move(index) => {
                let passage = self.level.passages.get(index).ok_or(IllegalInput::UnknownPassage)?;
                let destination = if state.avatar_room == passage.from {
                    passage.to
                } else if state.avatar_room == passage.to {
                    if passage.one_way {
                        return Err(IllegalInput::OneWay);
                    }
                    passage.from
                } else {
                    return Err(IllegalInput::NotAtEndpoint);
                };
                if let Some(door) = passage.guarded_by {
                    if !state.doors_open.contains(&door) {
                        return Err(IllegalInput::DoorClosed);
                    }
                }
                if self.covered_by[index].iter().any(|t| state.turrets_alive.contains(t)) {
                    return Err(IllegalInput::CoveredByTurret);
                }
                next.avatar_room = destination;
                if passage.grill {
                    next.portal_pair = None;
                    if let Some(cube) = state.carried_cube() {
                        next.cube_locations.insert(cube, CubeLocation::Destroyed);
                    }
                }
                ticks = passage.traverse_ticks;
            }
            InputEvent::Press(button) => match self.get(button) {
                Some(Element::TimedButton { room, duration_ticks, .. }) => {
                    if *room != state.avatar_room {
                        return Err(IllegalInput::WrongRoom);
                    }
                    if state.timers.contains_key(&button) {
                        return Err(IllegalInput::ButtonRunning);
                    }
                    pressed = Some((button, *duration_ticks));
                }
                _ => return Err(IllegalInput::UnknownElement),
            },
            InputEvent::ToggleSwitch(switch) => match self.get(switch) {
                Some(Element::Switch { room, .. }) => {
                    if *room != state.avatar_room {
                        return Err(IllegalInput::WrongRoom);
                    }
                    let s = next.switch_states.entry(switch).or_insert(0);
                    *s ^= 1;
                }
                _ => return Err(IllegalInput::UnknownElement),
            },
            InputEvent::PickUpCube(cube) => {
                if !matches!(self.get(cube), Some(Element::Cube { .. })) {
                    return Err(IllegalInput::UnknownElement);
                }
                if state.carried_cube().is_some() {
                    return Err(IllegalInput::HandsFull);
                }
                if state.cube_locations.get(&cube) != Some(&CubeLocation::Room(state.avatar_room)) {
                    return Err(IllegalInput::WrongRoom);
                }
                next.cube_locations.insert(cube, CubeLocation::Carried);
            }
            InputEvent::DropCube => {
                let cube = state.carried_cube().ok_or(IllegalInput::NothingCarried)?;
                next.cube_locations.insert(cube, CubeLocation::Room(state.avatar_room));
            }
            InputEvent::ShootPortalPair(a, b) => {
                if a == b {
                    return Err(IllegalInput::NoPortals);
                }
                for surface in [a, b] {
                    match self.get(surface) {
                        Some(Element::PortalSurface { room, visible_from, .. }) => {
                            if *room != state.avatar_room && !visible_from.contains(&state.avatar_room) {
                                return Err(IllegalInput::NotVisible);
                            }
                        }
                        _ => return Err(IllegalInput::UnknownElement),
                    }
                }
                next.portal_pair = Some((a.min(b), a.max(b)));
            }
            InputEvent::PortalJump => {
                let (a, b) = state.portal_pair.ok_or(IllegalInput::NoPortals)?;
                let room_of = |id| match self.get(id) {
                    Some(Element::PortalSurface { room, .. }) => Some(*room),
                    _ => None,
                };
                let (ra, rb) = match (room_of(a), room_of(b)) {
                    (Some(ra), Some(rb)) if ra != rb => (ra, rb),
                    _ => return Err(IllegalInput::NoPortals),
                };
                next.avatar_room = if state.avatar_room == ra {
                    rb
                } else if state.avatar_room == rb {
                    ra
                } else {
                    return Err(IllegalInput::NoPortals);
                };
            }
            InputEvent::DisableTurret(turret) => match self.get(turret) {
                Some(Element::Turret { disable_room, .. }) => {
                    if *disable_room != state.avatar_room {
                        return Err(IllegalInput::WrongRoom);
                    }
                    if !next.turrets_alive.remove(&turret) {
                        return Err(IllegalInput::TurretDown);
                    }
                }
                _ => return Err(IllegalInput::UnknownElement),
            },
            InputEvent::Wait(k) => {
                if k == 0 {
                    return Err(IllegalInput::EmptyWait);
                }
                ticks = k;
            }
        }

        next.clock += ticks;
        next.timers.retain(|_, remaining| {
            *remaining = remaining.saturating_sub(ticks);
            *remaining > 0
        });
        if let Some((button, duration)) = pressed {
            next.timers.insert(button, duration);
        }
        self.settle(&mut next);
        Ok(next)
    }

    /// Fires due pellets, then recomputes which doors are open.
    fn settle(&self, state: &mut GameState) {
        for element in &self.level.elements {
            if let Element::HepPair { id, trigger, .. } = element {
                if state.hep_fired.contains(id) {
                    continue;
                }
                let fires = match trigger {
                    HepTrigger::Scheduled { catcher_fire_tick } => state.clock >= *catcher_fire_tick,
                    HepTrigger::PortalRedirect { surfaces: (a, b) } => {
                        state.portal_pair == Some((*a.min(b), *a.max(b)))
                    }
                };
                if fires {
                    state.hep_fired.insert(*id);
                }
            }
        }
        state.doors_open = self.doors_open(state);
    }

    fn doors_open(&self, state: &GameState) -> BTreeSet<ElementId> {
        let mut open = BTreeSet::new();
        let mut closed = BTreeSet::new();
        for element in &self.level.elements {
            match element {
                Element::Door { id, initially_open } => {
                    if *initially_open && !self.switch_doors.contains(id) {
                        open.insert(*id);
                    }
                }
                Element::TimedButton { id, opens, .. } => {
                    if state.timers.contains_key(id) {
                        open.extend(opens);
                    }
                }
                Element::WeightedButton { room, while_pressed_opens, while_pressed_closes, .. } => {
                    let pressed = state.avatar_room == *room
                        || state.cube_locations.values().any(|loc| *loc == CubeLocation::Room(*room));
                    if pressed {
                        open.extend(while_pressed_opens);
                        closed.extend(while_pressed_closes);
                    }
                }
                Element::HepPair { id, on_fire_opens, on_fire_closes, .. } => {
                    if state.hep_fired.contains(id) {
                        open.extend(on_fire_opens);
                        closed.extend(on_fire_closes);
                    }
                }
                Element::Switch { id, open_in_state, .. } => {
                    let s = state.switch_states.get(id).copied().unwrap_or(0) as usize;
                    open.extend(&open_in_state[s & 1]);
                }
                _ => {}
            }
        }
        &open - &closed
    }

    /// Candidate inputs in the avatar's current situation; a superset of the legal ones.
    fn candidates(&self, state: &GameState) -> Vec<InputEvent> {
        let mut out = Vec::new();
        let here = state.avatar_room;
        if let Some(list) = self.passages_at.get(&here) {
            out.extend(list.iter().map(|&p| InputEvent::Move(p)));
        }
        let mut visible = Vec::new();
        for element in &self.level.elements {
            match element {
                Element::TimedButton { id, room, .. } if *room == here => out.push(InputEvent::Press(*id)),
                Element::Switch { id, room, .. } if *room == here => out.push(InputEvent::ToggleSwitch(*id)),
                Element::Cube { id, .. } => {
                    if state.cube_locations.get(id) == Some(&CubeLocation::Room(here)) {
                        out.push(InputEvent::PickUpCube(*id));
                    }
                }
                Element::Turret { id, disable_room, .. } if *disable_room == here => {
                    out.push(InputEvent::DisableTurret(*id))
                }
                Element::PortalSurface { id, room, visible_from } if *room == here || visible_from.contains(&here) => {
                    visible.push(*id)
                }
                _ => {}
            }
        }
        for (i, a) in visible.iter().enumerate() {
            for b in &visible[i + 1..] {
                out.push(InputEvent::ShootPortalPair(*a.min(b), *a.max(b)));
            }
        }
        if state.carried_cube().is_some() {
            out.push(InputEvent::DropCube);
        }
        if state.portal_pair.is_some() {
            out.push(InputEvent::PortalJump);
        }
        if let Some(k) = self.minimal_wait(state) {
            out.push(InputEvent::Wait(k));
        }
        out
    }

    /// Shortest wait after which some timer expires or some pellet lands.
    pub fn minimal_wait(&self, state: &GameState) -> Option<u64> {
        let timer = state.timers.values().copied().min();
        let pellet = self
            .level
            .elements
            .iter()
            .filter_map(|e| match e {
                Element::HepPair { id, trigger: HepTrigger::Scheduled { catcher_fire_tick }, .. }
                    if !state.hep_fired.contains(id) && *catcher_fire_tick > state.clock =>
                {
                    Some(catcher_fire_tick - state.clock)
                }
                _ => None,
            })
            .min();
        match (timer, pellet) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Every legal input with its successor, sorted by input encoding.
    pub fn successors(&self, state: &GameState) -> Vec<(InputEvent, GameState)> {
        let mut inputs = self.candidates(state);
        inputs.sort();
        inputs.dedup();
        inputs
            .into_iter()
            .filter_map(|input| self.step(state, input).ok().map(|next| (input, next)))
            .collect()
    }

    /// True while some scheduled pellet has not landed yet.
    pub fn has_pending_schedule(&self, state: &GameState) -> bool {
        self.level.elements.iter().any(|e| {
            matches!(e, Element::HepPair { id, trigger: HepTrigger::Scheduled { .. }, .. }
                if !state.hep_fired.contains(id))
        })
    }

    /// Replays `inputs` from the initial state, returning every visited state.
    pub fn replay(&self, inputs: &[InputEvent]) -> Result<Vec<GameState>, (usize, IllegalInput)> {
        let mut states = vec![self.initial_state()];
        for (i, input) in inputs.iter().enumerate() {
            let next = self.step(states.last().expect("non-empty"), *input).map_err(|e| (i, e))?;
            states.push(next);
        }
        Ok(states)
    }
}

pub fn initial_state(level: &Level) -> GameState {
    Simulator::new(level).initial_state()
}

pub fn step(level: &Level, state: &GameState, input: InputEvent) -> Result<GameState, IllegalInput> {
    Simulator::new(level).step(state, input)
}

pub fn successors(level: &Level, state: &GameState) -> Vec<(InputEvent, GameState)> {
    Simulator::new(level).successors(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::level::{LevelBuilder, Passage};

    fn timed_level(duration: u64) -> (Level, ElementId, ElementId) {
        let mut b = LevelBuilder::new();
        let a = b.room("a");
        let c = b.room("c");
        let door = b.door(false);
        let button = b.next_id();
        b.element(Element::TimedButton { id: button, room: a, duration_ticks: duration, opens: [door].into() });
        b.passage(Passage::new(a, c, 2).guarded(door));
        (b.build(a, c), button, door)
    }

    #[test]
    fn timed_button_reverts() {
        let (level, button, door) = timed_level(5);
        let sim = Simulator::new(&level);
        let mut s = sim.step(&sim.initial_state(), InputEvent::Press(button)).unwrap();
        assert!(s.doors_open.contains(&door));
        for _ in 0..4 {
            s = sim.step(&s, InputEvent::Wait(1)).unwrap();
            assert!(s.doors_open.contains(&door));
        }
        s = sim.step(&s, InputEvent::Wait(1)).unwrap();
        assert!(!s.doors_open.contains(&door));
        assert!(s.timers.is_empty());
    }

    #[test]
    fn one_way_cannot_be_climbed() {
        let mut b = LevelBuilder::new();
        let a = b.room("top");
        let c = b.room("bottom");
        let p = b.passage(Passage::new(a, c, 1).one_way());
        let level = b.build(a, c);
        let sim = Simulator::new(&level);
        let down = sim.step(&sim.initial_state(), InputEvent::Move(p)).unwrap();
        assert_eq!(down.avatar_room, c);
        assert_eq!(sim.step(&down, InputEvent::Move(p)), Err(IllegalInput::OneWay));
    }

    #[test]
    fn grill_clears_portals_and_cube() {
        let mut b = LevelBuilder::new();
        let a = b.room("a");
        let c = b.room("c");
        let s1 = b.next_id();
        b.element(Element::PortalSurface { id: s1, room: a, visible_from: BTreeSet::new() });
        let s2 = b.next_id();
        b.element(Element::PortalSurface { id: s2, room: c, visible_from: [a].into() });
        let cube = b.next_id();
        b.element(Element::Cube { id: cube, initial_room: a });
        let p = b.passage(Passage::new(a, c, 1).with_grill());
        let level = b.build(a, c);
        let sim = Simulator::new(&level);
        let mut s = sim.initial_state();
        s = sim.step(&s, InputEvent::ShootPortalPair(s1, s2)).unwrap();
        s = sim.step(&s, InputEvent::PickUpCube(cube)).unwrap();
        assert!(s.portal_pair.is_some());
        s = sim.step(&s, InputEvent::Move(p)).unwrap();
        assert_eq!(s.portal_pair, None);
        assert_eq!(s.cube_locations[&cube], CubeLocation::Destroyed);
        s = sim.step(&s, InputEvent::Move(p)).unwrap();
        assert_eq!(s.portal_pair, None);
    }

    #[test]
    fn portal_jump_moves_between_surface_rooms() {
        let mut b = LevelBuilder::new();
        let a = b.room("a");
        let c = b.room("c");
        let s1 = b.next_id();
        b.element(Element::PortalSurface { id: s1, room: a, visible_from: BTreeSet::new() });
        let s2 = b.next_id();
        b.element(Element::PortalSurface { id: s2, room: c, visible_from: [a].into() });
        let level = b.build(a, c);
        let sim = Simulator::new(&level);
        let s = sim.initial_state();
        assert_eq!(sim.step(&s, InputEvent::PortalJump), Err(IllegalInput::NoPortals));
        let s = sim.step(&s, InputEvent::ShootPortalPair(s2, s1)).unwrap();
        assert_eq!(s.portal_pair, Some((s1, s2)));
        let s = sim.step(&s, InputEvent::PortalJump).unwrap();
        assert_eq!(s.avatar_room, c);
        // From c the surface in a is out of sight.
        assert_eq!(sim.step(&s, InputEvent::ShootPortalPair(s1, s2)), Err(IllegalInput::NotVisible));
    }

    #[test]
    fn successors_only_open_moves() {
        let mut b = LevelBuilder::new();
        let a = b.room("a");
        let c = b.room("c");
        let d = b.room("d");
        let open = b.door(true);
        let shut = b.door(false);
        let p_open = b.passage(Passage::new(a, c, 1).guarded(open));
        b.passage(Passage::new(a, d, 1).guarded(shut));
        let level = b.build(a, d);
        let inputs: Vec<_> = successors(&level, &initial_state(&level)).into_iter().map(|(i, _)| i).collect();
        assert_eq!(inputs, vec![InputEvent::Move(p_open)]);
    }

    #[test]
    fn empty_level_has_no_successors() {
        let mut b = LevelBuilder::new();
        let a = b.room("a");
        let level = b.build(a, a);
        assert!(successors(&level, &initial_state(&level)).is_empty());
    }

    #[test]
    fn toggling_changes_admissible_moves() {
        let mut b = LevelBuilder::new();
        let a = b.room("a");
        let c = b.room("c");
        let d = b.room("d");
        let dc = b.door(false);
        let dd = b.door(false);
        let sw = b.next_id();
        b.element(Element::Switch { id: sw, room: a, initial_state: 0, open_in_state: [[dc].into(), [dd].into()] });
        let pc = b.passage(Passage::new(a, c, 1).guarded(dc));
        let pd = b.passage(Passage::new(a, d, 1).guarded(dd));
        let level = b.build(a, d);
        let sim = Simulator::new(&level);
        let before: Vec<_> = sim.successors(&sim.initial_state()).into_iter().map(|(i, _)| i).collect();
        assert_eq!(before, vec![InputEvent::Move(pc), InputEvent::ToggleSwitch(sw)]);
        let toggled = sim.step(&sim.initial_state(), InputEvent::ToggleSwitch(sw)).unwrap();
        let after: Vec<_> = sim.successors(&toggled).into_iter().map(|(i, _)| i).collect();
        assert_eq!(after, vec![InputEvent::Move(pd), InputEvent::ToggleSwitch(sw)]);
    }

    #[test]
    fn turret_blocks_until_disabled() {
        let mut b = LevelBuilder::new();
        let a = b.room("a");
        let c = b.room("c");
        let back = b.room("behind");
        let p = b.passage(Passage::new(a, c, 1));
        let q = b.passage(Passage::new(a, back, 1));
        let t = b.next_id();
        b.element(Element::Turret { id: t, blocks: [p].into(), disable_room: back });
        let level = b.build(a, c);
        let sim = Simulator::new(&level);
        let s = sim.initial_state();
        assert_eq!(sim.step(&s, InputEvent::Move(p)), Err(IllegalInput::CoveredByTurret));
        assert_eq!(sim.step(&s, InputEvent::DisableTurret(t)), Err(IllegalInput::WrongRoom));
        let s = sim.step(&s, InputEvent::Move(q)).unwrap();
        let s = sim.step(&s, InputEvent::DisableTurret(t)).unwrap();
        let s = sim.step(&s, InputEvent::Move(q)).unwrap();
        assert_eq!(sim.step(&s, InputEvent::Move(p)).unwrap().avatar_room, c);
    }

    #[test]
    fn weighted_button_holds_while_occupied() {
        let mut b = LevelBuilder::new();
        let a = b.room("a");
        let pad = b.room("pad");
        let door = b.door(false);
        let w = b.next_id();
        b.element(Element::WeightedButton {
            id: w,
            room: pad,
            while_pressed_opens: [door].into(),
            while_pressed_closes: BTreeSet::new(),
        });
        let cube = b.next_id();
        b.element(Element::Cube { id: cube, initial_room: a });
        let p = b.passage(Passage::new(a, pad, 1));
        let level = b.build(a, a);
        let sim = Simulator::new(&level);
        let mut s = sim.initial_state();
        assert!(!s.doors_open.contains(&door));
        s = sim.step(&s, InputEvent::PickUpCube(cube)).unwrap();
        s = sim.step(&s, InputEvent::Move(p)).unwrap();
        assert!(s.doors_open.contains(&door));
        s = sim.step(&s, InputEvent::DropCube).unwrap();
        s = sim.step(&s, InputEvent::Move(p)).unwrap();
        assert_eq!(s.avatar_room, a);
        assert!(s.doors_open.contains(&door));
    }

    #[test]
    fn scheduled_pellet_fires_once_and_wait_targets_it() {
        let mut b = LevelBuilder::new();
        let a = b.room("a");
        let door = b.door(true);
        let h = b.next_id();
        b.element(Element::HepPair {
            id: h,
            trigger: HepTrigger::Scheduled { catcher_fire_tick: 4 },
            on_fire_opens: BTreeSet::new(),
            on_fire_closes: [door].into(),
        });
        let level = b.build(a, a);
        let sim = Simulator::new(&level);
        let s = sim.initial_state();
        assert!(s.doors_open.contains(&door));
        assert_eq!(sim.minimal_wait(&s), Some(4));
        let s = sim.step(&s, InputEvent::Wait(4)).unwrap();
        assert!(s.hep_fired.contains(&h));
        assert!(!s.doors_open.contains(&door));
        assert_eq!(sim.minimal_wait(&s), None);
    }
}
