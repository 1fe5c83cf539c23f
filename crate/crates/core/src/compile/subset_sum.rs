//! Subset sum through falling and portals.
//!
//! The avatar drops into a first well, then repeatedly links the floor of
//! the well it is falling in with the ceiling above a later well. Momentum
//! is conserved through portals, so the fall distance accumulates. A wall
//! portal finally converts the fall into horizontal speed toward a small
//! platform that is only reached when the accumulated depth encodes `t`.
//!
//! In the room graph a falling avatar is `flight i s`: in well `i` having
//! accumulated value `s`. Ceilings of later wells are only visible from
//! earlier ones and each ceiling drop crosses a grill, so every well is
//! chosen at most once.

use std::collections::{BTreeMap, BTreeSet};

use crate::instance::SubsetSumInstance;
use crate::kinematics::{
    drift_is_safe, free_fall, land, Ceiling, Geometry, KinematicsParams, Rational, Well,
};
use crate::level::{Element, ElementId, Level, LevelBuilder, Mechanic, Passage, RoomId};
use crate::sim::{InputEvent, Simulator};

use super::CompileError;

/// Depth of a well per unit of value, `4·n²·ε·t` with `n` and `t` at least 1.
pub fn unit_depth(inst: &SubsetSumInstance, params: &KinematicsParams) -> Rational {
    let n_eff = Rational::int(inst.n().max(1) as i64);
    let t_eff = Rational::from_u64(inst.target.max(1));
    &(&(&Rational::int(4) * &n_eff.square()) * &params.epsilon) * &t_eff
}

/// Lays out wells, ceilings, and the target platform.
pub fn build_geometry(inst: &SubsetSumInstance, params: &KinematicsParams) -> Result<Geometry, CompileError> {
    inst.validate()?;
    params.validate()?;
    let n = inst.n() as i64;
    let n_eff = Rational::int(n.max(1));
    let t = Rational::from_u64(inst.target);
    let t_eff = Rational::from_u64(inst.target.max(1));
    let eps = &params.epsilon;
    let unit = unit_depth(inst, params);
    let s_max = &unit * &Rational::from_u64(inst.values.iter().sum());
    let two = Rational::int(2);
    let delta = &(&(&two * &n_eff.square()) * eps) * &t_eff;
    let half_width = &(&n_eff * eps) / &two;

    let drift_room = &(&two * &params.v_h) * &(&n_eff * eps);
    let fall_drift = &params.v_h * &(&(&(&two * &s_max) / &params.alpha) + &Rational::int(1));
    let separation = &(&drift_room + &fall_drift) + &Rational::int(1);

    let wells = inst
        .values
        .iter()
        .enumerate()
        .map(|(i, &a)| Well {
            index: i,
            value: a,
            depth: &unit * &Rational::from_u64(a),
            floor_x: &separation * &Rational::int(i as i64),
        })
        .collect();
    let ceilings = (0..inst.n())
        .map(|i| Ceiling {
            index: i,
            x: &separation * &Rational::int(i as i64),
            y: eps * &Rational::int(n - i as i64),
        })
        .collect();

    let target_fall = &unit * &t;
    let target_distance_sq = free_fall(&target_fall, params)?.landing_sq;
    let geom = Geometry {
        params: params.clone(),
        wells,
        ceilings,
        delta,
        stair_rise: eps.clone(),
        launch_height: params.launch_height.clone(),
        launch_x: &separation * &Rational::int(n),
        target_distance_sq,
        intended_target_distance: &(&(&two * &t) * &Rational::int(n)) * eps,
        half_width,
        separation,
    };

    if !drift_is_safe(&s_max, params, &geom.separation) {
        return Err(CompileError::Geometry("horizontal drift reaches the next well".into()));
    }
    // Stair steps traversed while selecting never push a correct sum off the platform.
    let steps = inst.n().min(inst.target as usize) as i64;
    let worst = &target_fall + &(&geom.stair_rise * &Rational::int(steps));
    if !land(&worst, &geom)?.is_hit() {
        return Err(CompileError::Geometry("accumulated stair error exceeds the platform".into()));
    }
    Ok(geom)
}

fn flight_label(i: usize, s: u64) -> String {
    format!("flight {i} {s}")
}

/// Compiles `inst` into a level and the geometry it is drawn from.
pub fn compile_subset_sum(
    inst: &SubsetSumInstance,
    params: &KinematicsParams,
) -> Result<(Level, Geometry), CompileError> {
    let geom = build_geometry(inst, params)?;
    let n = inst.n();
    let cap: u64 = inst.values.iter().sum();

    // Accumulated values reachable while falling in each well.
    let mut sums: Vec<BTreeSet<u64>> = vec![BTreeSet::new(); n];
    for i in 0..n {
        let mut here = BTreeSet::from([inst.values[i]]);
        for earlier in &sums[..i] {
            here.extend(earlier.iter().map(|s| s + inst.values[i]));
        }
        sums[i] = here;
    }
    let mut launch_sums: BTreeSet<u64> = sums.iter().flatten().copied().collect();
    launch_sums.insert(0);
    debug_assert!(launch_sums.iter().all(|&s| s <= cap));

    let mut b = LevelBuilder::new();
    b.allow(Mechanic::Portals);
    let top = b.room("top");
    let platform = b.room("platform");

    let mut flight: BTreeMap<(usize, u64), RoomId> = BTreeMap::new();
    let mut floor: BTreeMap<(usize, u64), ElementId> = BTreeMap::new();
    for (i, set) in sums.iter().enumerate() {
        for &s in set {
            let room = b.room(flight_label(i, s));
            flight.insert((i, s), room);
            let id = b.next_id();
            b.element(Element::PortalSurface { id, room, visible_from: BTreeSet::new() });
            floor.insert((i, s), id);
        }
    }
    let top_floor = b.next_id();
    b.element(Element::PortalSurface { id: top_floor, room: top, visible_from: BTreeSet::new() });

    // Ceiling above well j, entered with accumulated value s.
    for j in 0..n {
        for &s in &sums[j] {
            let prior = s - inst.values[j];
            let seen_from: BTreeSet<RoomId> =
                (0..j).filter_map(|i| flight.get(&(i, prior)).copied()).collect();
            if seen_from.is_empty() {
                continue;
            }
            let room = b.room(format!("ceiling {j} {s}"));
            let id = b.next_id();
            b.element(Element::PortalSurface { id, room, visible_from: seen_from });
            b.passage(Passage::new(room, flight[&(j, s)], 1).one_way().with_grill());
        }
    }

    for i in 0..n {
        b.passage(Passage::new(top, flight[&(i, inst.values[i])], 1).one_way());
    }

    let unit = unit_depth(inst, params);
    for &s in &launch_sums {
        let mut seen_from: BTreeSet<RoomId> =
            (0..n).filter_map(|i| flight.get(&(i, s)).copied()).collect();
        if s == 0 {
            seen_from.insert(top);
        }
        let room = b.room(format!("launch {s}"));
        let id = b.next_id();
        b.element(Element::PortalSurface { id, room, visible_from: seen_from });
        let fall = &unit * &Rational::from_u64(s);
        if land(&fall, &geom)?.is_hit() {
            b.passage(Passage::new(room, platform, 1));
        }
    }
    Ok((b.build(top, platform), geom))
}

/// Well indices the avatar falls through when replaying `witness`, in order.
pub fn selected_wells(level: &Level, witness: &[InputEvent]) -> Option<Vec<usize>> {
    let sim = Simulator::new(level);
    let states = sim.replay(witness).ok()?;
    let mut wells = Vec::new();
    let mut last = None;
    for state in &states {
        if last == Some(state.avatar_room) {
            continue;
        }
        last = Some(state.avatar_room);
        let label = level.room_label(state.avatar_room)?;
        if let Some(rest) = label.strip_prefix("flight ") {
            let i: usize = rest.split(' ').next()?.parse().ok()?;
            wells.push(i);
        }
    }
    Some(wells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::verify_selection;
    use crate::solver::{solve, SearchBounds};

    fn params(eps: i64) -> KinematicsParams {
        KinematicsParams::new(Rational::int(10), Rational::int(1), Rational::int(eps))
    }

    #[test]
    fn depths_follow_the_scaling() {
        let inst = SubsetSumInstance::new(vec![1, 2, 3], 3).unwrap();
        let geom = build_geometry(&inst, &params(8)).unwrap();
        let depths: Vec<_> = geom.wells.iter().map(|w| w.depth.clone()).collect();
        assert_eq!(depths, vec![Rational::int(864), Rational::int(1728), Rational::int(2592)]);
        assert_eq!(geom.target_distance_sq, Rational::int(82944));
        assert_eq!(geom.half_width, Rational::int(12));

        let single = build_geometry(&SubsetSumInstance::new(vec![5], 5).unwrap(), &params(1)).unwrap();
        assert_eq!(single.wells[0].depth, Rational::int(100));
        assert_eq!(single.delta, Rational::int(10));
    }

    #[test]
    fn selection_examples() {
        let inst = SubsetSumInstance::new(vec![1, 2, 3], 3).unwrap();
        let p = params(8);
        let geom = build_geometry(&inst, &p).unwrap();
        assert!(verify_selection(&inst, &[0, 1], &p, &geom).unwrap().is_hit());
        assert!(verify_selection(&inst, &[2], &p, &geom).unwrap().is_hit());
        let miss = verify_selection(&inst, &[0], &p, &geom).unwrap();
        assert_eq!(
            miss,
            crate::kinematics::Landing::Miss { landing_sq: Rational::int(27648), target_sq: Rational::int(82944) }
        );
        assert!(verify_selection(&inst, &[3], &p, &geom).is_err());
    }

    #[test]
    fn small_levels_solve_correctly() {
        let p = params(8);
        let yes = SubsetSumInstance::new(vec![1, 2, 3], 5).unwrap();
        let (level, _) = compile_subset_sum(&yes, &p).unwrap();
        let v = solve(&level, SearchBounds::default()).unwrap();
        let wells = selected_wells(&level, v.witness().unwrap()).unwrap();
        assert_eq!(yes.sum_of(&wells), 5);

        let no = SubsetSumInstance::new(vec![2, 4], 3).unwrap();
        let (level, _) = compile_subset_sum(&no, &p).unwrap();
        assert!(!solve(&level, SearchBounds::default()).unwrap().is_solvable());
    }

    #[test]
    fn empty_instance() {
        let inst = SubsetSumInstance::new(vec![], 0).unwrap();
        let (level, _) = compile_subset_sum(&inst, &params(8)).unwrap();
        assert!(solve(&level, SearchBounds::default()).unwrap().is_solvable());
    }
}
