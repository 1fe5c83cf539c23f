//! Wells, ceilings and the launch for A = {1, 2, 3}, t = 3.

use chamber::compile::{compile_subset_sum, selected_wells};
use chamber::instance::SubsetSumInstance;
use chamber::kinematics::{verify_selection, KinematicsParams};
use chamber::oracles::subset_sum_oracle;
use chamber::solver::{solve, SearchBounds};

fn main() {
    let inst = SubsetSumInstance::new(vec![1, 2, 3], 3).unwrap();
    let params = KinematicsParams::default();
    let (level, geom) = compile_subset_sum(&inst, &params).unwrap();
    for w in &geom.wells {
        println!("well {} (value {}): depth {}", w.index, w.value, w.depth);
    }
    println!("platform at squared distance {}, half width {}", geom.target_distance_sq, geom.half_width);

    for mask in 0u32..1 << inst.n() {
        let chosen: Vec<usize> = (0..inst.n()).filter(|i| mask >> i & 1 == 1).collect();
        let landing = verify_selection(&inst, &chosen, &params, &geom).unwrap();
        println!("{chosen:?} sums to {}: {landing:?}", inst.sum_of(&chosen));
    }

    let verdict = solve(&level, SearchBounds::default()).unwrap();
    let oracle = subset_sum_oracle(&inst);
    println!("level {verdict}, oracle {}", if oracle.yes { "yes" } else { "no" });
    println!("wells used by the witness: {:?}", selected_wells(&level, verdict.witness().unwrap()).unwrap());
}
