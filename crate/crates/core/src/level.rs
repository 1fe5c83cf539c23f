//! Abstract level model: rooms joined by passages, plus the gameplay
//! elements that gate movement between them.
//!
//! Geometry is quotiented away. A room is any region the avatar can move
//! around in freely; a passage is a hallway, drop, or portal-free traversal
//! with an integer tick cost. Everything the hardness constructions care
//! about (connectivity, timing, element state) survives this quotient.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RoomId(pub u32);

/// Identifier shared by every element kind. Unique across the level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(pub u32);

impl fmt::Display for RoomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.0)
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mechanic {
    Doors,
    TimedButtons,
    WeightedButtons,
    Cubes,
    Turrets,
    Portals,
    EmancipationGrills,
    Hep,
    Switches,
    LongFall,
}

impl Mechanic {
    pub const ALL: [Mechanic; 10] = [
        Mechanic::Doors,
        Mechanic::TimedButtons,
        Mechanic::WeightedButtons,
        Mechanic::Cubes,
        Mechanic::Turrets,
        Mechanic::Portals,
        Mechanic::EmancipationGrills,
        Mechanic::Hep,
        Mechanic::Switches,
        Mechanic::LongFall,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Room {
    pub id: RoomId,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Passage {
    pub from: RoomId,
    pub to: RoomId,
    pub traverse_ticks: u64,
    /// A long fall: traversable `from -> to` only.
    pub one_way: bool,
    pub guarded_by: Option<ElementId>,
    /// Crossing clears placed portals and destroys a carried cube.
    pub grill: bool,
}

impl Passage {
    pub fn new(from: RoomId, to: RoomId, traverse_ticks: u64) -> Self {
        Passage { from, to, traverse_ticks, one_way: false, guarded_by: None, grill: false }
    }

    pub fn one_way(mut self) -> Self {
        self.one_way = true;
        self
    }

    pub fn guarded(mut self, door: ElementId) -> Self {
        self.guarded_by = Some(door);
        self
    }

    pub fn with_grill(mut self) -> Self {
        self.grill = true;
        self
    }
}

/// How a high energy pellet reaches its catcher.
///
/// A scheduled pellet hits the catcher at a fixed tick no matter what the
/// avatar does. A redirected pellet only reaches the catcher once the avatar
/// places exactly the named portal pair in front of the launcher.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "trigger")]
pub enum HepTrigger {
    Scheduled { catcher_fire_tick: u64 },
    PortalRedirect { surfaces: (ElementId, ElementId) },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Element {
    Door {
        id: ElementId,
        initially_open: bool,
    },
    TimedButton {
        id: ElementId,
        room: RoomId,
        duration_ticks: u64,
        opens: BTreeSet<ElementId>,
    },
    WeightedButton {
        id: ElementId,
        room: RoomId,
        while_pressed_opens: BTreeSet<ElementId>,
        while_pressed_closes: BTreeSet<ElementId>,
    },
    Cube {
        id: ElementId,
        initial_room: RoomId,
    },
    Turret {
        id: ElementId,
        /// Indices into `Level::passages` covered by this turret's line of fire.
        blocks: BTreeSet<usize>,
        disable_room: RoomId,
    },
    PortalSurface {
        id: ElementId,
        room: RoomId,
        /// Rooms other than `room` with a sightline to this surface.
        visible_from: BTreeSet<RoomId>,
    },
    HepPair {
        id: ElementId,
        #[serde(flatten)]
        trigger: HepTrigger,
        on_fire_opens: BTreeSet<ElementId>,
        on_fire_closes: BTreeSet<ElementId>,
    },
    Switch {
        id: ElementId,
        room: RoomId,
        initial_state: u8,
        /// Doors held open in state 0 and state 1 respectively.
        open_in_state: [BTreeSet<ElementId>; 2],
    },
}

impl Element {
    pub fn id(&self) -> ElementId {
        match self {
            Element::Door { id, .. }
            | Element::TimedButton { id, .. }
            | Element::WeightedButton { id, .. }
            | Element::Cube { id, .. }
            | Element::Turret { id, .. }
            | Element::PortalSurface { id, .. }
            | Element::HepPair { id, .. }
            | Element::Switch { id, .. } => *id,
        }
    }

    pub fn mechanic(&self) -> Mechanic {
        match self {
            Element::Door { .. } => Mechanic::Doors,
            Element::TimedButton { .. } => Mechanic::TimedButtons,
            Element::WeightedButton { .. } => Mechanic::WeightedButtons,
            Element::Cube { .. } => Mechanic::Cubes,
            Element::Turret { .. } => Mechanic::Turrets,
            Element::PortalSurface { .. } => Mechanic::Portals,
            Element::HepPair { .. } => Mechanic::Hep,
            Element::Switch { .. } => Mechanic::Switches,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Element::Door { .. } => "door",
            Element::TimedButton { .. } => "timed-button",
            Element::WeightedButton { .. } => "weighted-button",
            Element::Cube { .. } => "cube",
            Element::Turret { .. } => "turret",
            Element::PortalSurface { .. } => "portal-surface",
            Element::HepPair { .. } => "hep-pair",
            Element::Switch { .. } => "switch",
        }
    }

    pub fn is_door(&self) -> bool {
        matches!(self, Element::Door { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level {
    pub rooms: Vec<Room>,
    pub passages: Vec<Passage>,
    pub elements: Vec<Element>,
    pub start: RoomId,
    pub goal: RoomId,
    pub allowed_mechanics: BTreeSet<Mechanic>,
}

impl Level {
    pub fn room_label(&self, id: RoomId) -> Option<&str> {
        self.rooms.iter().find(|r| r.id == id).map(|r| r.label.as_str())
    }

    pub fn element(&self, id: ElementId) -> Option<&Element> {
        self.elements.iter().find(|e| e.id() == id)
    }

    pub fn doors(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.elements.iter().filter(|e| e.is_door()).map(Element::id)
    }

    pub fn count(&self, mechanic: Mechanic) -> usize {
        self.elements.iter().filter(|e| e.mechanic() == mechanic).count()
    }
}

/// Incremental level construction with sequential ids.
#[derive(Debug, Default)]
pub struct LevelBuilder {
    rooms: Vec<Room>,
    passages: Vec<Passage>,
    elements: Vec<Element>,
    mechanics: BTreeSet<Mechanic>,
    next_element: u32,
}

impl LevelBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn room(&mut self, label: impl Into<String>) -> RoomId {
        let id = RoomId(self.rooms.len() as u32);
        self.rooms.push(Room { id, label: label.into() });
        id
    }

    pub fn passage(&mut self, passage: Passage) -> usize {
        if passage.one_way {
            self.mechanics.insert(Mechanic::LongFall);
        }
        if passage.grill {
            self.mechanics.insert(Mechanic::EmancipationGrills);
        }
        if passage.guarded_by.is_some() {
            self.mechanics.insert(Mechanic::Doors);
        }
        self.passages.push(passage);
        self.passages.len() - 1
    }

    pub fn next_id(&mut self) -> ElementId {
        let id = ElementId(self.next_element);
        self.next_element += 1;
        id
    }

    /// Adds an element whose id was reserved with [`LevelBuilder::next_id`].
    pub fn element(&mut self, element: Element) -> ElementId {
        self.mechanics.insert(element.mechanic());
        let id = element.id();
        self.next_element = self.next_element.max(id.0 + 1);
        self.elements.push(element);
        id
    }

    pub fn door(&mut self, initially_open: bool) -> ElementId {
        let id = self.next_id();
        self.element(Element::Door { id, initially_open })
    }

    pub fn allow(&mut self, mechanic: Mechanic) {
        self.mechanics.insert(mechanic);
    }

    pub fn passages(&self) -> &[Passage] {
        &self.passages
    }

    pub fn elements_mut(&mut self) -> &mut Vec<Element> {
        &mut self.elements
    }

    pub fn build(self, start: RoomId, goal: RoomId) -> Level {
        Level {
            rooms: self.rooms,
            passages: self.passages,
            elements: self.elements,
            start,
            goal,
            allowed_mechanics: self.mechanics,
        }
    }
}

/// One broken invariant, with a locator pointing at the offending item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub locator: String,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    UnknownRoom,
    DuplicateRoom,
    DuplicateElement,
    DanglingReference,
    WrongElementKind,
    MechanicNotAllowed,
    ZeroTicks,
    SelfLoop,
    OneWayPair,
    ZeroDuration,
    BadSwitchState,
    MultipleSwitchControllers,
    TurretGuardsOwnDisableRoom,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:?}", self.locator, self.kind)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, locator: impl Into<String>, kind: ViolationKind) {
        self.violations.push(Violation { locator: locator.into(), kind });
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join("; "))
    }
}

pub fn validate_level(level: &Level) -> ValidationReport {
    let mut report = ValidationReport::default();

    let mut rooms = BTreeSet::new();
    for room in &level.rooms {
        if !rooms.insert(room.id) {
            report.push(format!("room {}", room.id), ViolationKind::DuplicateRoom);
        }
    }
    for (what, id) in [("start", level.start), ("goal", level.goal)] {
        if !rooms.contains(&id) {
            report.push(format!("{what} {id}"), ViolationKind::UnknownRoom);
        }
    }

    let mut kinds: BTreeMap<ElementId, &Element> = BTreeMap::new();
    for element in &level.elements {
        if kinds.insert(element.id(), element).is_some() {
            report.push(format!("element {}", element.id()), ViolationKind::DuplicateElement);
        }
        if !level.allowed_mechanics.contains(&element.mechanic()) {
            report.push(
                format!("{} {}", element.kind_name(), element.id()),
                ViolationKind::MechanicNotAllowed,
            );
        }
    }

    let is_door = |id: &ElementId| kinds.get(id).map(|e| e.is_door());
    let check_door = |report: &mut ValidationReport, locator: String, id: &ElementId| match is_door(id) {
        None => report.push(format!("{locator} -> {id}"), ViolationKind::DanglingReference),
        Some(false) => report.push(format!("{locator} -> {id}"), ViolationKind::WrongElementKind),
        Some(true) => {}
    };
    let check_room = |report: &mut ValidationReport, locator: String, id: RoomId| {
        if !rooms.contains(&id) {
            report.push(format!("{locator} -> {id}"), ViolationKind::UnknownRoom);
        }
    };

    for (index, passage) in level.passages.iter().enumerate() {
        let locator = format!("passage {index}");
        check_room(&mut report, locator.clone(), passage.from);
        check_room(&mut report, locator.clone(), passage.to);
        if passage.traverse_ticks == 0 {
            report.push(locator.clone(), ViolationKind::ZeroTicks);
        }
        if passage.from == passage.to {
            report.push(locator.clone(), ViolationKind::SelfLoop);
        }
        if let Some(door) = &passage.guarded_by {
            check_door(&mut report, locator.clone(), door);
        }
        for (flag, mechanic) in [
            (passage.one_way, Mechanic::LongFall),
            (passage.grill, Mechanic::EmancipationGrills),
            (passage.guarded_by.is_some(), Mechanic::Doors),
        ] {
            if flag && !level.allowed_mechanics.contains(&mechanic) {
                report.push(locator.clone(), ViolationKind::MechanicNotAllowed);
            }
        }
        if passage.one_way
            && level.passages[..index]
                .iter()
                .any(|p| p.one_way && p.from == passage.to && p.to == passage.from)
        {
            report.push(locator, ViolationKind::OneWayPair);
        }
    }

    let mut switch_of_door: BTreeMap<ElementId, ElementId> = BTreeMap::new();
    for element in &level.elements {
        let locator = format!("{} {}", element.kind_name(), element.id());
        match element {
            Element::Door { .. } => {}
            Element::TimedButton { room, duration_ticks, opens, .. } => {
                check_room(&mut report, locator.clone(), *room);
                if *duration_ticks == 0 {
                    report.push(locator.clone(), ViolationKind::ZeroDuration);
                }
                for door in opens {
                    check_door(&mut report, locator.clone(), door);
                }
            }
            Element::WeightedButton { room, while_pressed_opens, while_pressed_closes, .. } => {
                check_room(&mut report, locator.clone(), *room);
                for door in while_pressed_opens.iter().chain(while_pressed_closes) {
                    check_door(&mut report, locator.clone(), door);
                }
            }
            Element::Cube { initial_room, .. } => check_room(&mut report, locator, *initial_room),
            Element::Turret { blocks, disable_room, .. } => {
                check_room(&mut report, locator.clone(), *disable_room);
                for &index in blocks {
                    match level.passages.get(index) {
                        None => report.push(
                            format!("{locator} -> passage {index}"),
                            ViolationKind::DanglingReference,
                        ),
                        Some(p) if p.from == *disable_room || p.to == *disable_room => {
                            report.push(
                                format!("{locator} -> passage {index}"),
                                ViolationKind::TurretGuardsOwnDisableRoom,
                            );
                        }
                        Some(_) => {}
                    }
                }
            }
            Element::PortalSurface { room, visible_from, .. } => {
                check_room(&mut report, locator.clone(), *room);
                for r in visible_from {
                    check_room(&mut report, locator.clone(), *r);
                }
            }
            Element::HepPair { trigger, on_fire_opens, on_fire_closes, .. } => {
                for door in on_fire_opens.iter().chain(on_fire_closes) {
                    check_door(&mut report, locator.clone(), door);
                }
                if let HepTrigger::PortalRedirect { surfaces: (a, b) } = trigger {
                    for s in [a, b] {
                        match kinds.get(s) {
                            None => report.push(
                                format!("{locator} -> {s}"),
                                ViolationKind::DanglingReference,
                            ),
                            Some(Element::PortalSurface { .. }) => {}
                            Some(_) => report.push(
                                format!("{locator} -> {s}"),
                                ViolationKind::WrongElementKind,
                            ),
                        }
                    }
                }
            }
            Element::Switch { id, room, initial_state, open_in_state } => {
                check_room(&mut report, locator.clone(), *room);
                if *initial_state > 1 {
                    report.push(locator.clone(), ViolationKind::BadSwitchState);
                }
                let controlled: BTreeSet<ElementId> =
                    open_in_state[0].union(&open_in_state[1]).copied().collect();
                for door in &controlled {
                    check_door(&mut report, locator.clone(), door);
                    if let Some(other) = switch_of_door.insert(*door, *id) {
                        if other != *id {
                            report.push(
                                format!("door {door} in switches {other} and {id}"),
                                ViolationKind::MultipleSwitchControllers,
                            );
                        }
                    }
                }
            }
        }
    }
    // Switch-held doors answer to their switch alone.
    for e in &level.elements {
        let touched: Vec<&ElementId> = match e {
            Element::TimedButton { opens, .. } => opens.iter().collect(),
            Element::WeightedButton { while_pressed_opens, while_pressed_closes, .. } => {
                while_pressed_opens.iter().chain(while_pressed_closes).collect()
            }
            Element::HepPair { on_fire_opens, on_fire_closes, .. } => on_fire_opens.iter().chain(on_fire_closes).collect(),
            _ => continue,
        };
        for door in touched {
            if let Some(switch) = switch_of_door.get(door) {
                report.push(
                    format!("door {door} in switch {switch} and {} {}", e.kind_name(), e.id()),
                    ViolationKind::MultipleSwitchControllers,
                );
            }
        }
    }

    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_room() -> Level {
        let mut b = LevelBuilder::new();
        let r = b.room("only");
        b.build(r, r)
    }

    #[test]
    fn minimal_level_is_valid() {
        assert!(validate_level(&one_room()).is_valid());
    }

    #[test]
    fn undeclared_door_is_dangling() {
        let mut b = LevelBuilder::new();
        let r = b.room("a");
        let id = b.next_id();
        b.element(Element::TimedButton {
            id,
            room: r,
            duration_ticks: 3,
            opens: [ElementId(99)].into(),
        });
        let report = validate_level(&b.build(r, r));
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.count(ViolationKind::DanglingReference), 1);
    }

    #[test]
    fn door_in_two_switches_is_flagged_once() {
        let mut b = LevelBuilder::new();
        let r = b.room("a");
        let d = b.door(false);
        let other = b.door(false);
        for _ in 0..2 {
            let id = b.next_id();
            b.element(Element::Switch {
                id,
                room: r,
                initial_state: 0,
                open_in_state: [[d].into(), [other].into()],
            });
        }
        let report = validate_level(&b.build(r, r));
        // `other` is also shared, so both doors are reported; a level with a
        // single shared door produces exactly one violation.
        assert_eq!(report.count(ViolationKind::MultipleSwitchControllers), 2);

        let mut b = LevelBuilder::new();
        let r = b.room("a");
        let d = b.door(false);
        let e = b.door(false);
        let f = b.door(false);
        for (s0, s1) in [(d, e), (d, f)] {
            let id = b.next_id();
            b.element(Element::Switch {
                id,
                room: r,
                initial_state: 0,
                open_in_state: [[s0].into(), [s1].into()],
            });
        }
        let report = validate_level(&b.build(r, r));
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.count(ViolationKind::MultipleSwitchControllers), 1);
    }

    #[test]
    fn switch_doors_have_no_other_controller() {
        let mut b = LevelBuilder::new();
        let r = b.room("a");
        let d = b.door(false);
        let s = b.next_id();
        b.element(Element::Switch { id: s, room: r, initial_state: 0, open_in_state: [[d].into(), [].into()] });
        let t = b.next_id();
        b.element(Element::TimedButton { id: t, room: r, duration_ticks: 2, opens: [d].into() });
        let report = validate_level(&b.build(r, r));
        assert_eq!(report.count(ViolationKind::MultipleSwitchControllers), 1);
    }

    #[test]
    fn structural_violations() {
        let mut level = one_room();
        level.goal = RoomId(7);
        level.passages.push(Passage::new(RoomId(0), RoomId(0), 0));
        let report = validate_level(&level);
        assert_eq!(report.count(ViolationKind::UnknownRoom), 1);
        assert_eq!(report.count(ViolationKind::ZeroTicks), 1);
        assert_eq!(report.count(ViolationKind::SelfLoop), 1);
    }

    #[test]
    fn mechanic_must_be_allowed() {
        let mut b = LevelBuilder::new();
        let r = b.room("a");
        b.door(true);
        let mut level = b.build(r, r);
        level.allowed_mechanics.clear();
        assert_eq!(validate_level(&level).count(ViolationKind::MechanicNotAllowed), 1);
    }

    #[test]
    fn turret_may_not_cover_its_disable_room() {
        let mut b = LevelBuilder::new();
        let a = b.room("a");
        let c = b.room("c");
        let p = b.passage(Passage::new(a, c, 1));
        let id = b.next_id();
        b.element(Element::Turret { id, blocks: [p].into(), disable_room: a });
        let report = validate_level(&b.build(a, c));
        assert_eq!(report.count(ViolationKind::TurretGuardsOwnDisableRoom), 1);
    }

    #[test]
    fn opposing_long_falls_are_rejected() {
        let mut b = LevelBuilder::new();
        let a = b.room("a");
        let c = b.room("c");
        b.passage(Passage::new(a, c, 1).one_way());
        b.passage(Passage::new(c, a, 1).one_way());
        assert_eq!(validate_level(&b.build(a, c)).count(ViolationKind::OneWayPair), 1);
    }
}
