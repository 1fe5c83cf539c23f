//! Brute-force deciders for the source problems.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{CnfFormula, GridGraph, Point, SubsetSumInstance};

pub const MAX_SAT_VARS: u32 = 22;
pub const MAX_GRID_VERTICES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleWitness {
    /// Indices into the value list.
    Subset(Vec<usize>),
    Assignment(Vec<bool>),
    Cycle(Vec<Point>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OracleAnswer {
    pub yes: bool,
    pub witness: Option<OracleWitness>,
}

impl OracleAnswer {
    fn no() -> Self {
        OracleAnswer { yes: false, witness: None }
    }

    fn yes(w: OracleWitness) -> Self {
        OracleAnswer { yes: true, witness: Some(w) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance too large for brute force ({size} > {cap})")]
    TooLarge { size: usize, cap: usize },
}

/// Pseudopolynomial DP over reachable sums.
pub fn subset_sum_oracle(inst: &SubsetSumInstance) -> OracleAnswer {
    let t = inst.target as usize;
    // reach[i][s]: some subset of the first i values sums to s
    let mut reach = vec![vec![false; t + 1]; inst.n() + 1];
    reach[0][0] = true;
    for (i, &a) in inst.values.iter().enumerate() {
        let a = a as usize;
        for s in 0..=t {
            reach[i + 1][s] = reach[i][s] || (s >= a && reach[i][s - a]);
        }
    }
    if !reach[inst.n()][t] {
        return OracleAnswer::no();
    }
    let mut chosen = Vec::new();
    let mut s = t;
    for i in (0..inst.n()).rev() {
        if !reach[i][s] {
            chosen.push(i);
            s -= inst.values[i] as usize;
        }
    }
    chosen.reverse();
    OracleAnswer::yes(OracleWitness::Subset(chosen))
}

/// Enumerates assignments in lexicographic order, `false` before `true`,
/// variable 1 most significant.
pub fn sat_oracle(f: &CnfFormula) -> Result<OracleAnswer, OracleError> {
    if f.vars > MAX_SAT_VARS {
        return Err(OracleError::TooLarge { size: f.vars as usize, cap: MAX_SAT_VARS as usize });
    }
    let n = f.vars as usize;
    let mut assignment = vec![false; n];
    for bits in 0u64..1 << n {
        for (v, slot) in assignment.iter_mut().enumerate() {
            *slot = bits >> (n - 1 - v) & 1 == 1;
        }
        if f.satisfied_by(&assignment) {
            return Ok(OracleAnswer::yes(OracleWitness::Assignment(assignment)));
        }
    }
    Ok(OracleAnswer::no())
}

/// Backtracking search for a cycle through every vertex, starting at `g.start`.
///
/// One vertex counts as a trivial cycle; two vertices do not.
pub fn grid_hamcycle_oracle(g: &GridGraph) -> Result<OracleAnswer, OracleError> {
    let n = g.n();
    if n > MAX_GRID_VERTICES {
        return Err(OracleError::TooLarge { size: n, cap: MAX_GRID_VERTICES });
    }
    if n == 1 {
        return Ok(OracleAnswer::yes(OracleWitness::Cycle(vec![g.start])));
    }
    if n == 2 {
        return Ok(OracleAnswer::no());
    }
    let mut path = vec![g.start];
    let mut used = std::collections::BTreeSet::from([g.start]);
    if extend(g, &mut path, &mut used) {
        Ok(OracleAnswer::yes(OracleWitness::Cycle(path)))
    } else {
        Ok(OracleAnswer::no())
    }
}

fn extend(g: &GridGraph, path: &mut Vec<Point>, used: &mut std::collections::BTreeSet<Point>) -> bool {
    let last = *path.last().unwrap();
    if path.len() == g.n() {
        return g.adjacent(last, g.start);
    }
    let next: Vec<Point> = g.neighbours(last).filter(|p| !used.contains(p)).collect();
    for p in next {
        path.push(p);
        used.insert(p);
        if extend(g, path, used) {
            return true;
        }
        used.remove(&p);
        path.pop();
    }
    false
}

/// Re-checks a witness by direct substitution.
pub fn check_subset_witness(inst: &SubsetSumInstance, answer: &OracleAnswer) -> bool {
    match (&answer.witness, answer.yes) {
        (Some(OracleWitness::Subset(chosen)), true) => {
            let mut sorted = chosen.clone();
            sorted.dedup();
            sorted.len() == chosen.len()
                && chosen.iter().all(|&i| i < inst.n())
                && inst.sum_of(chosen) == inst.target
        }
        (None, false) => true,
        _ => false,
    }
}

pub fn check_sat_witness(f: &CnfFormula, answer: &OracleAnswer) -> bool {
    match (&answer.witness, answer.yes) {
        (Some(OracleWitness::Assignment(a)), true) => a.len() == f.vars as usize && f.satisfied_by(a),
        (None, false) => true,
        _ => false,
    }
}

pub fn check_cycle_witness(g: &GridGraph, answer: &OracleAnswer) -> bool {
    match (&answer.witness, answer.yes) {
        (Some(OracleWitness::Cycle(c)), true) => g.is_hamiltonian_cycle(c),
        (None, false) => true,
        _ => false,
    }
}
