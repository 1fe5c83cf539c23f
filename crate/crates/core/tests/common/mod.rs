#![allow(dead_code)]

use std::collections::BTreeSet;

use chamber::level::HepTrigger;
use chamber::{validate_level, Element, ElementId, Level, LevelBuilder, Passage, RoomId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn subset(rng: &mut ChaCha8Rng, from: &[ElementId]) -> BTreeSet<ElementId> {
    from.iter().copied().filter(|_| rng.gen_bool(0.5)).collect()
}

/// A small random level with at most `max_elements` elements, or `None` when
/// the draw does not validate.
pub fn random_level(seed: u64, max_elements: usize) -> Option<Level> {
    random_level_biased(seed, max_elements, false)
}

/// As [`random_level`], with half of the non-door elements timed buttons when `timers` is set.
pub fn random_level_biased(seed: u64, max_elements: usize, timers: bool) -> Option<Level> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = LevelBuilder::new();
    let rooms: Vec<RoomId> = (0..rng.gen_range(2..=4)).map(|i| b.room(format!("r{i}"))).collect();
    let budget = rng.gen_range(1..=max_elements);
    let doors: Vec<ElementId> = (0..rng.gen_range(0..=2.min(budget))).map(|_| b.door(rng.gen_bool(0.3))).collect();
    let mut passages = Vec::new();
    for _ in 0..rng.gen_range(2..=5) {
        let a = rooms[rng.gen_range(0..rooms.len())];
        let c = rooms[rng.gen_range(0..rooms.len())];
        if a == c {
            continue;
        }
        let mut p = Passage::new(a, c, rng.gen_range(1..=3));
        if rng.gen_bool(0.2) {
            p = p.one_way();
        }
        if rng.gen_bool(0.2) {
            p = p.with_grill();
        }
        if !doors.is_empty() && rng.gen_bool(0.4) {
            p = p.guarded(doors[rng.gen_range(0..doors.len())]);
        }
        passages.push((a, c));
        b.passage(p);
    }
    let room = |rng: &mut ChaCha8Rng| rooms[rng.gen_range(0..rooms.len())];
    for _ in doors.len()..budget {
        let id = b.next_id();
        let kind = if timers && rng.gen_bool(0.5) { 0 } else { rng.gen_range(0..7) };
        let e = match kind {
            0 => Element::TimedButton {
                id,
                room: room(&mut rng),
                duration_ticks: rng.gen_range(1..=4),
                opens: subset(&mut rng, &doors),
            },
            1 => Element::Switch {
                id,
                room: room(&mut rng),
                initial_state: rng.gen_range(0..2),
                open_in_state: [subset(&mut rng, &doors), subset(&mut rng, &doors)],
            },
            2 => Element::Cube { id, initial_room: room(&mut rng) },
            3 => Element::WeightedButton {
                id,
                room: room(&mut rng),
                while_pressed_opens: subset(&mut rng, &doors),
                while_pressed_closes: subset(&mut rng, &doors),
            },
            4 => {
                let disable_room = room(&mut rng);
                let blocks = passages
                    .iter()
                    .enumerate()
                    .filter(|(_, (a, c))| *a != disable_room && *c != disable_room && rng.gen_bool(0.5))
                    .map(|(i, _)| i)
                    .collect();
                Element::Turret { id, blocks, disable_room }
            }
            5 => Element::PortalSurface {
                id,
                room: room(&mut rng),
                visible_from: rooms.iter().copied().filter(|_| rng.gen_bool(0.3)).collect(),
            },
            _ => Element::HepPair {
                id,
                trigger: HepTrigger::Scheduled { catcher_fire_tick: rng.gen_range(1..=8) },
                on_fire_opens: subset(&mut rng, &doors),
                on_fire_closes: subset(&mut rng, &doors),
            },
        };
        b.element(e);
    }
    let start = room(&mut rng);
    let goal = room(&mut rng);
    let level = b.build(start, goal);
    validate_level(&level).is_valid().then_some(level)
}
