//! An AND gate decided directly and through every switch realization.

use chamber::compile::{compile_ncl_switches, realize_switches, SwitchKind};
use chamber::ncl::{build_and_or_graph, ncl_decide, EdgeKey, GateKind, VertexId};
use chamber::solver::{solve, SearchBounds};

fn main() {
    use GateKind::*;
    let g = build_and_or_graph(&[(0, And), (1, Free), (2, Free), (3, Free)], &[(1, 0, 1), (2, 0, 1), (0, 3, 2)])
        .unwrap();
    for target in [EdgeKey::new(VertexId(0), VertexId(1)), EdgeKey::new(VertexId(0), VertexId(3))] {
        println!("target {target}: {:?}", ncl_decide(&g, target, 1 << 16).unwrap());
        let level = compile_ncl_switches(&g, target).unwrap();
        println!("  abstract switches: {}", solve(&level, SearchBounds::default()).unwrap());
        for kind in SwitchKind::ALL {
            let real = realize_switches(&level, kind);
            println!("  {:<8} {}", kind.name(), solve(&real, SearchBounds::default()).unwrap());
        }
    }
}
