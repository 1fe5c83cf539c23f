//! A three-room level: a switch in the first room holds the door to the goal open.

use std::collections::BTreeSet;

use chamber::solver::{replays_to_goal, solve, state_bound, SearchBounds};
use chamber::{Element, LevelBuilder, Passage, Simulator};

fn main() {
    let mut b = LevelBuilder::new();
    let (a, hall, goal) = (b.room("lobby"), b.room("hall"), b.room("exit"));
    let door = b.door(false);
    b.passage(Passage::new(a, hall, 2));
    b.passage(Passage::new(hall, goal, 1).guarded(door));
    let id = b.next_id();
    b.element(Element::Switch { id, room: a, initial_state: 0, open_in_state: [BTreeSet::new(), BTreeSet::from([door])] });
    let level = b.build(a, goal);

    let sim = Simulator::new(&level);
    for (input, next) in sim.successors(&sim.initial_state()) {
        println!("{input:<12} -> avatar in {}, clock {}", next.avatar_room, next.clock);
    }

    let verdict = solve(&level, SearchBounds::default()).unwrap();
    println!("{verdict}");
    for input in verdict.witness().unwrap() {
        println!("  {input}");
    }
    assert!(replays_to_goal(&level, verdict.witness().unwrap()));
    println!("bound {} >= explored {}", state_bound(&level), verdict.states_explored().unwrap());
}
