//! NCL through doors and switches.
//!
//! Each edge gets a switch whose state is the edge's orientation: state 0
//! is the initial orientation, state 1 the reversed one. The switch sits at
//! the far end of a hallway from a central hub, and the hallway passes one
//! consistency check per endpoint of the edge. A check is a set of routes
//! gated by doors that are open exactly when the corresponding edge points
//! into the vertex, arranged so that some route is open iff the vertex's
//! constraint holds. After flipping, the avatar can only get back to the
//! hub when both endpoints are still satisfied. The exit from the hub opens
//! once the target switch has left its initial state.

use std::collections::BTreeSet;

use crate::level::{Element, ElementId, Level, LevelBuilder, Mechanic, Passage, RoomId};
use crate::ncl::{ConstraintGraph, EdgeKey, VertexId, VertexRole};

use super::switch_gadget::SwitchKind;
use super::CompileError;

/// Doors held open per switch state; index `[edge][state]`.
type DoorSets = Vec<[BTreeSet<ElementId>; 2]>;

fn door_for(b: &mut LevelBuilder, sets: &mut DoorSets, g: &ConstraintGraph, edge: usize, into: VertexId) -> ElementId {
    let door = b.door(false);
    let e = g.edges()[edge];
    // State 0 keeps the initial orientation.
    let state = if e.points_into(into) { 0 } else { 1 };
    sets[edge][state].insert(door);
    door
}

/// Routes from `from` to `to` that are open iff `v` is satisfied.
fn check(
    b: &mut LevelBuilder,
    sets: &mut DoorSets,
    g: &ConstraintGraph,
    v: VertexId,
    from: RoomId,
    to: RoomId,
) -> Result<(), CompileError> {
    match g.role(v) {
        VertexRole::Free => {
            b.passage(Passage::new(from, to, 1));
        }
        VertexRole::And { x, y, o } => {
            let heavy = door_for(b, sets, g, o, v);
            b.passage(Passage::new(from, to, 1).guarded(heavy));
            let mid = b.room(format!("check {v} light"));
            let dx = door_for(b, sets, g, x, v);
            let dy = door_for(b, sets, g, y, v);
            b.passage(Passage::new(from, mid, 1).guarded(dx));
            b.passage(Passage::new(mid, to, 1).guarded(dy));
        }
        VertexRole::Or(edges) => {
            for e in edges {
                let d = door_for(b, sets, g, e, v);
                b.passage(Passage::new(from, to, 1).guarded(d));
            }
        }
        VertexRole::Other => return Err(CompileError::NotAndOr(v)),
    }
    Ok(())
}

/// Compiles `(g, target)` into a level that is solvable iff `target` can be reversed.
pub fn compile_ncl_switches(g: &ConstraintGraph, target: EdgeKey) -> Result<Level, CompileError> {
    if let Some(&v) = g.constraints().keys().find(|&&v| g.role(v) == VertexRole::Other) {
        return Err(CompileError::NotAndOr(v));
    }
    let target_index = g.edge_index(target).ok_or(CompileError::UnknownTarget(target))?;
    let mut b = LevelBuilder::new();
    b.allow(Mechanic::Switches);
    let hub = b.room("hub");
    let mut sets: DoorSets = vec![Default::default(); g.edges().len()];
    let mut switch_rooms = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        let near = b.room(format!("edge {} {} between checks", e.key.lo, e.key.hi));
        let far = b.room(format!("edge {} {} switch", e.key.lo, e.key.hi));
        check(&mut b, &mut sets, g, e.key.hi, hub, near)?;
        check(&mut b, &mut sets, g, e.key.lo, near, far)?;
        switch_rooms.push((i, far));
    }
    let exit = b.door(false);
    sets[target_index][1].insert(exit);
    let goal = b.room("exit");
    b.passage(Passage::new(hub, goal, 1).guarded(exit));
    for ((_, room), open_in_state) in switch_rooms.into_iter().zip(sets) {
        let id = b.next_id();
        b.element(Element::Switch { id, room, initial_state: 0, open_in_state });
    }
    Ok(b.build(hub, goal))
}

/// Replaces every abstract switch of `level` by the gadget of `kind`.
///
/// The switch room becomes the gadget's outside room.
pub fn realize_switches(level: &Level, kind: SwitchKind) -> Level {
    let mut out = level.clone();
    let switches: Vec<Element> =
        level.elements.iter().filter(|e| matches!(e, Element::Switch { .. })).cloned().collect();
    if kind != SwitchKind::Cubes {
        // Latch kinds keep the two-state element behind an interior room.
        out.elements.retain(|e| !matches!(e, Element::Switch { .. }));
        for (next_room, switch) in (out.rooms.len() as u32..).zip(switches) {
            let Element::Switch { id, room, initial_state, open_in_state } = switch else { unreachable!() };
            let interior = RoomId(next_room);
            out.rooms.push(crate::level::Room { id: interior, label: format!("{} {id}", kind.interior_label()) });
            out.passages.push(Passage::new(room, interior, 1));
            out.elements.push(Element::Switch { id, room: interior, initial_state, open_in_state });
        }
        return out;
    }

    out.elements.retain(|e| !matches!(e, Element::Switch { .. }));
    out.allowed_mechanics.remove(&Mechanic::Switches);
    for m in [Mechanic::Cubes, Mechanic::WeightedButtons, Mechanic::Doors] {
        out.allowed_mechanics.insert(m);
    }
    let mut next_room = out.rooms.len() as u32;
    let mut next_id = out.elements.iter().map(|e| e.id().0 + 1).max().unwrap_or(0);
    let mut fresh = || {
        next_id += 1;
        ElementId(next_id - 1)
    };
    for switch in switches {
        let Element::Switch { id, room, initial_state, open_in_state } = switch else { unreachable!() };
        let mut room_named = |label: String| {
            let r = RoomId(next_room);
            next_room += 1;
            out.rooms.push(crate::level::Room { id: r, label });
            r
        };
        let interior = room_named(format!("cube room {id}"));
        let pads = [room_named(format!("pad 0 {id}")), room_named(format!("pad 1 {id}"))];
        let entrance = fresh();
        out.elements.push(Element::Door { id: entrance, initially_open: false });
        out.passages.push(Passage::new(room, interior, 1).guarded(entrance));
        for (state, pad) in pads.into_iter().enumerate() {
            out.passages.push(Passage::new(interior, pad, 1));
            let mut opens = open_in_state[state].clone();
            opens.insert(entrance);
            out.elements.push(Element::WeightedButton {
                id: fresh(),
                room: pad,
                while_pressed_opens: opens,
                while_pressed_closes: BTreeSet::new(),
            });
        }
        out.elements.push(Element::Cube { id: fresh(), initial_room: pads[initial_state as usize] });
    }
    out
}
