//! Formulas compiled into turret levels, checked against brute force.

use chamber::compile::compile_3sat_turrets;
use chamber::instance::CnfFormula;
use chamber::oracles::sat_oracle;
use chamber::solver::{solve, SearchBounds};
use chamber::Mechanic;

fn main() {
    let formulas: [(&str, u32, &[&[i32]]); 3] = [
        ("x or x or x", 1, &[&[1, 1, 1]]),
        ("x and not x", 1, &[&[1], &[-1]]),
        ("all four 2-clauses", 2, &[&[1, 2], &[-1, 2], &[1, -2], &[-1, -2]]),
    ];
    for (name, vars, clauses) in formulas {
        let f = CnfFormula::from_dimacs(vars, clauses).unwrap();
        let level = compile_3sat_turrets(&f).unwrap();
        let verdict = solve(&level, SearchBounds::default()).unwrap();
        let oracle = sat_oracle(&f).unwrap();
        println!(
            "{name}: {} rooms, {} turrets; level {verdict}; oracle {}",
            level.rooms.len(),
            level.count(Mechanic::Turrets),
            if oracle.yes { "sat" } else { "unsat" }
        );
    }
}
