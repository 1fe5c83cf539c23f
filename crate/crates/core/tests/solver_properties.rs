mod common;

use std::collections::HashSet;

use chamber::corpus::door_series;
use chamber::solver::{replays_to_goal, solve, state_bound, SearchBounds, Verdict};
use chamber::{GameState, Level, Simulator};
use proptest::prelude::*;

use common::random_level;

/// Depth-first reachability of the goal, identifying states that differ only
/// in the clock once no pellet is pending.
fn goal_reachable_dfs(level: &Level) -> bool {
    let sim = Simulator::new(level);
    let key = |s: &GameState| {
        if sim.has_pending_schedule(s) {
            s.clone()
        } else {
            GameState { clock: 0, ..s.clone() }
        }
    };
    let start = sim.initial_state();
    let mut seen = HashSet::from([key(&start)]);
    let mut stack = vec![start];
    while let Some(s) = stack.pop() {
        if s.avatar_room == level.goal {
            return true;
        }
        for (_, next) in sim.successors(&s) {
            if seen.insert(key(&next)) {
                stack.push(next);
            }
        }
    }
    false
}

fn levels() -> impl Strategy<Value = Level> {
    any::<u64>().prop_filter_map("level must validate", |seed| random_level(seed, 5))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn verdicts_are_sound_bounded_and_complete(level in levels()) {
        let verdict = solve(&level, SearchBounds::default()).unwrap();
        let explored = verdict.states_explored().expect("small levels stay under the default bound");
        prop_assert!(explored as u128 <= state_bound(&level), "{} > {}", explored, state_bound(&level));
        if let Some(w) = verdict.witness() {
            prop_assert!(replays_to_goal(&level, w));
        }
        if state_bound(&level) <= 1_000_000 {
            prop_assert_eq!(verdict.is_solvable(), goal_reachable_dfs(&level));
        }
        prop_assert_eq!(solve(&level, SearchBounds::default()).unwrap(), verdict);
    }
}

#[test]
fn two_rooms_one_door_one_switch() {
    let level = door_series(1);
    assert_eq!(state_bound(&level), 8);
    let v = solve(&level, SearchBounds::default()).unwrap();
    assert!(v.states_explored().unwrap() <= 8);
    assert_eq!(v.witness().unwrap().len(), 2);
}

#[test]
fn door_series_stays_under_the_bound() {
    for k in 1..=10 {
        let level = door_series(k);
        let v = solve(&level, SearchBounds::default()).unwrap();
        assert!(v.is_solvable());
        assert!(v.states_explored().unwrap() as u128 <= state_bound(&level), "k = {k}");
        assert_eq!(v.witness().unwrap().len(), 2 * k);
    }
}

#[test]
fn tight_limit_reports_the_bound() {
    let level = door_series(4);
    assert_eq!(solve(&level, SearchBounds::with_max_states(3)).unwrap(), Verdict::BoundExceeded { bound: 3 });
}
