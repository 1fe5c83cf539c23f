//! Explored states against the product bound for k doors in series.

use chamber::corpus::door_series;
use chamber::solver::{solve, state_bound, SearchBounds};

fn main() {
    println!("{:>2} {:>10} {:>12} {:>8}", "k", "explored", "bound", "ratio");
    for k in 1..=10 {
        let level = door_series(k);
        let explored = solve(&level, SearchBounds::default()).unwrap().states_explored().unwrap();
        let bound = state_bound(&level);
        println!("{k:>2} {explored:>10} {bound:>12} {:>8.5}", explored as f64 / bound as f64);
    }
}
