//! 3-SAT through turrets and long falls.
//!
//! Variables are visited in order. At each variable hub the avatar drops
//! into either the true or the false branch and can never climb back. A
//! branch walks through the unlock rooms of every literal occurrence it
//! makes true, where the three turrets guarding that occurrence's clause
//! hallway can be switched off. Clauses follow in series; each one offers a
//! hallway per literal, covered by that occurrence's turrets.

use std::collections::BTreeSet;

use crate::instance::CnfFormula;
use crate::level::{Element, Level, LevelBuilder, Mechanic, Passage, RoomId};

struct Occurrence {
    clause: usize,
    /// Disable room of each turret.
    disable: [RoomId; 3],
    /// Passages each turret covers.
    blocks: [BTreeSet<usize>; 3],
}

/// Compiles `f` into a level that is solvable iff `f` is satisfiable.
pub fn compile_3sat_turrets(f: &CnfFormula) -> Result<Level, super::CompileError> {
    f.validate()?;
    let mut b = LevelBuilder::new();
    b.allow(Mechanic::Turrets);
    b.allow(Mechanic::LongFall);

    let mut occurrences: Vec<Occurrence> = Vec::new();
    let mut hub = b.room(if f.vars == 0 { "clause 0" } else { "var 1" });
    let start = hub;
    for var in 1..=f.vars {
        let next_hub = b.room(if var == f.vars { "clause 0".to_string() } else { format!("var {}", var + 1) });
        for positive in [true, false] {
            let branch = if positive { "true" } else { "false" };
            let mut at = b.room(format!("x{var} {branch}"));
            b.passage(Passage::new(hub, at, 1).one_way());
            // Turret whose line of fire covers the next passage out of `at`.
            let mut pending: Option<(usize, usize)> = None;
            for (clause, lits) in f.clauses.iter().enumerate() {
                for (slot, lit) in lits.iter().enumerate() {
                    if lit.var != var || lit.positive != positive {
                        continue;
                    }
                    let k = occurrences.len();
                    occurrences.push(Occurrence { clause, disable: [at; 3], blocks: Default::default() });
                    for stage in 0..3 {
                        let room = b.room(format!("unlock c{clause}.{slot} {}", stage + 1));
                        let p = b.passage(Passage::new(at, room, 1).one_way());
                        if let Some((o, s)) = pending.take() {
                            occurrences[o].blocks[s].insert(p);
                        }
                        occurrences[k].disable[stage] = at;
                        pending = Some((k, stage));
                        at = room;
                    }
                }
            }
            let exit = b.passage(Passage::new(at, next_hub, 1).one_way());
            if let Some((o, s)) = pending.take() {
                occurrences[o].blocks[s].insert(exit);
            }
        }
        hub = next_hub;
    }

    let clause_rooms: Vec<RoomId> = std::iter::once(hub)
        .chain((1..=f.clauses.len()).map(|k| b.room(format!("clause {k}"))))
        .collect();
    for occ in &mut occurrences {
        let hallway = b.passage(Passage::new(clause_rooms[occ.clause], clause_rooms[occ.clause + 1], 1));
        for set in &mut occ.blocks {
            set.insert(hallway);
        }
    }
    for occ in occurrences {
        for (disable_room, blocks) in occ.disable.into_iter().zip(occ.blocks) {
            let id = b.next_id();
            b.element(Element::Turret { id, blocks, disable_room });
        }
    }
    let goal = *clause_rooms.last().unwrap();
    Ok(b.build(start, goal))
}
