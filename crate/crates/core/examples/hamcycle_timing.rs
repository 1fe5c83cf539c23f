//! Grid graphs through timed buttons and through pellets.

use chamber::compile::{compile_hamcycle_hep, compile_hamcycle_timed, HepTiming, TimedTiming};
use chamber::instance::GridGraph;
use chamber::oracles::grid_hamcycle_oracle;
use chamber::solver::{solve, SearchBounds};

fn main() {
    let graphs = [
        ("2x2 square", GridGraph::rectangle(2, 2)),
        ("3x1 path", GridGraph::rectangle(3, 1)),
        ("3x2 ladder", GridGraph::rectangle(3, 2)),
        ("square with a tail", GridGraph::new([(0, 0), (1, 0), (0, 1), (1, 1), (2, 0)], None).unwrap()),
    ];
    for (name, g) in graphs {
        let oracle = grid_hamcycle_oracle(&g).unwrap();
        let timed = compile_hamcycle_timed(&g, TimedTiming::for_vertices(g.n())).unwrap();
        let hep = compile_hamcycle_hep(&g, HepTiming::for_vertices(g.n())).unwrap();
        let tv = solve(&timed, SearchBounds::default()).unwrap();
        let hv = solve(&hep, SearchBounds::default()).unwrap();
        println!("{name}: oracle {}", if oracle.yes { "yes" } else { "no" });
        println!("  timed buttons: {tv}");
        println!("  pellets:       {hv}");
    }
}
