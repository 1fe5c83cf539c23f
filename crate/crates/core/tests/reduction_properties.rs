use std::collections::{HashMap, HashSet, VecDeque};

use chamber::compile::{
    build_geometry, compile_3sat_turrets, compile_subset_sum, selected_wells, unit_depth,
};
use chamber::corpus::{hand_built_ncl, random_and_or_graphs, random_cnf_formulas, small_cnf_formulas};
use chamber::instance::{CnfFormula, SubsetSumInstance};
use chamber::kinematics::{drift_is_safe, free_fall, verify_selection, KinematicsParams, Rational};
use chamber::ncl::{flip, is_valid, ncl_decide, replay_flips, ConstraintGraph, NclAnswer, VertexRole};
use chamber::oracles::{check_sat_witness, check_subset_witness, sat_oracle, subset_sum_oracle};
use chamber::solver::{solve, SearchBounds};
use proptest::prelude::*;

fn orientation(g: &ConstraintGraph) -> Vec<i8> {
    g.edges().iter().map(|e| e.orientation).collect()
}

/// Every orientation reachable from `g` by legal flips.
fn reachable(g: &ConstraintGraph) -> HashMap<Vec<i8>, ConstraintGraph> {
    let mut seen = HashMap::from([(orientation(g), g.clone())]);
    let mut queue = VecDeque::from([g.clone()]);
    while let Some(h) = queue.pop_front() {
        for e in h.edges() {
            if let Ok(next) = flip(&h, e.key) {
                if let std::collections::hash_map::Entry::Vacant(slot) = seen.entry(orientation(&next)) {
                    slot.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
    }
    seen
}

fn ncl_cases() -> Vec<chamber::corpus::NclCase> {
    let mut cases = hand_built_ncl();
    cases.extend(random_and_or_graphs(11, 40, 6));
    cases
}

#[test]
fn ncl_moves_preserve_validity_and_reverse() {
    for case in ncl_cases() {
        let all = reachable(&case.graph);
        for h in all.values() {
            assert!(is_valid(h), "{}", case.name);
            // A move is undone by flipping the same edge back.
            for e in h.edges() {
                if let Ok(next) = flip(h, e.key) {
                    assert_eq!(orientation(&flip(&next, e.key).unwrap()), orientation(h), "{}", case.name);
                }
            }
        }
        if let NclAnswer::Yes { flips } = ncl_decide(&case.graph, case.target, 1 << 16).unwrap() {
            let end = replay_flips(&case.graph, &flips).unwrap();
            assert!(is_valid(&end));
            // The start is reachable again from the witness endpoint.
            assert!(reachable(&end).contains_key(&orientation(&case.graph)), "{}", case.name);
            let back: Vec<_> = flips.iter().rev().copied().collect();
            assert_eq!(orientation(&replay_flips(&end, &back).unwrap()), orientation(&case.graph));
        }
    }
}

#[test]
fn and_output_leaves_only_when_both_inputs_arrive() {
    for case in ncl_cases() {
        for h in reachable(&case.graph).values() {
            for &v in h.constraints().keys() {
                if let VertexRole::And { x, y, o } = h.role(v) {
                    if !h.edges()[o].points_into(v) {
                        assert!(h.edges()[x].points_into(v) && h.edges()[y].points_into(v), "{}", case.name);
                    }
                }
            }
        }
    }
}

#[test]
fn dropping_a_clause_only_removes_that_constraint() {
    let mut formulas = small_cnf_formulas(3, 2);
    formulas.extend(random_cnf_formulas(5, 20, 4));
    for f in formulas.iter().filter(|f| !f.clauses.is_empty()) {
        let full = solve(&compile_3sat_turrets(f).unwrap(), SearchBounds::default()).unwrap().is_solvable();
        for i in 0..f.clauses.len() {
            let g = f.without_clause(i);
            let level = compile_3sat_turrets(&g).unwrap();
            let relaxed = solve(&level, SearchBounds::default()).unwrap().is_solvable();
            assert_eq!(relaxed, sat_oracle(&g).unwrap().yes, "{f:?} without clause {i}");
            assert!(relaxed || !full);
        }
    }
}

fn small_subset_sum() -> impl Strategy<Value = SubsetSumInstance> {
    (prop::collection::vec(1u64..=6, 0..=4), 0u64..=24)
        .prop_map(|(values, t)| SubsetSumInstance::new(values, t).unwrap())
}

fn rational() -> impl Strategy<Value = Rational> {
    (1i64..=1000, 1i64..=97).prop_map(|(n, d)| Rational::new(n, d))
}

fn brute_subset(inst: &SubsetSumInstance) -> bool {
    (0u32..1 << inst.n()).any(|m| {
        let chosen: Vec<usize> = (0..inst.n()).filter(|i| m >> i & 1 == 1).collect();
        inst.sum_of(&chosen) == inst.target
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn landing_distance_ignores_gravity(a1 in rational(), a2 in rational(), s in rational(), h in rational()) {
        let fall = |alpha: &Rational| {
            // The launch ledge sits at height epsilon.
            let p = KinematicsParams::new(alpha.clone(), Rational::int(1), h.clone());
            free_fall(&s, &p).unwrap().landing_sq
        };
        let four_sh = &(&Rational::int(4) * &s) * &h;
        prop_assert_eq!(fall(&a1), four_sh.clone());
        prop_assert_eq!(fall(&a2), four_sh);
    }

    #[test]
    fn hits_are_exactly_the_target_sums(inst in small_subset_sum(), alpha in rational()) {
        let params = KinematicsParams::new(alpha, Rational::int(1), Rational::int(8));
        let geom = build_geometry(&inst, &params).unwrap();
        let s_max = &unit_depth(&inst, &params) * &Rational::from_u64(inst.values.iter().sum());
        prop_assert!(drift_is_safe(&s_max, &params, &geom.separation));
        for m in 0u32..1 << inst.n() {
            let chosen: Vec<usize> = (0..inst.n()).filter(|i| m >> i & 1 == 1).collect();
            let hit = verify_selection(&inst, &chosen, &params, &geom).unwrap().is_hit();
            prop_assert_eq!(hit, inst.sum_of(&chosen) == inst.target);
        }
    }

    #[test]
    fn subset_sum_witnesses_pick_each_well_once(inst in small_subset_sum()) {
        let (level, _) = compile_subset_sum(&inst, &KinematicsParams::default()).unwrap();
        let verdict = solve(&level, SearchBounds::default()).unwrap();
        let oracle = subset_sum_oracle(&inst);
        prop_assert_eq!(verdict.is_solvable(), oracle.yes);
        prop_assert_eq!(oracle.yes, brute_subset(&inst));
        prop_assert!(check_subset_witness(&inst, &oracle));
        if let Some(w) = verdict.witness() {
            let wells = selected_wells(&level, w).unwrap();
            let distinct: HashSet<usize> = wells.iter().copied().collect();
            prop_assert_eq!(distinct.len(), wells.len());
            prop_assert_eq!(inst.sum_of(&wells), inst.target);
        }
    }

    #[test]
    fn sat_oracle_is_deterministic_and_checkable(seed in any::<u64>()) {
        let f: CnfFormula = random_cnf_formulas(seed, 1, 5).pop().unwrap();
        let a = sat_oracle(&f).unwrap();
        prop_assert_eq!(&a, &sat_oracle(&f).unwrap());
        prop_assert!(check_sat_witness(&f, &a));
        let brute = (0u32..1 << f.vars).any(|m| {
            let assignment: Vec<bool> = (0..f.vars).map(|i| m >> i & 1 == 1).collect();
            f.satisfied_by(&assignment)
        });
        prop_assert_eq!(a.yes, brute);
    }
}
