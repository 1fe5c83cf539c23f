//! Source-problem instances.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("subset-sum values must be positive (value {index} is {value})")]
    NonPositiveValue { index: usize, value: i64 },
    #[error("subset-sum target must be nonnegative (got {0})")]
    NegativeTarget(i64),
    #[error("clause {0} is empty")]
    EmptyClause(usize),
    #[error("clause {0} has more than three literals")]
    WideClause(usize),
    #[error("clause {clause} mentions variable {var} beyond the declared {vars}")]
    VariableOutOfRange { clause: usize, var: u32, vars: u32 },
    #[error("literal 0 is not a variable")]
    ZeroLiteral,
    #[error("grid graph has no vertices")]
    EmptyGrid,
    #[error("start vertex {0:?} is not in the grid graph")]
    StartNotInGraph((i32, i32)),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubsetSumInstance {
    pub values: Vec<u64>,
    pub target: u64,
}

impl SubsetSumInstance {
    pub fn new(values: Vec<u64>, target: u64) -> Result<Self, InstanceError> {
        if let Some(index) = values.iter().position(|&v| v == 0) {
            return Err(InstanceError::NonPositiveValue { index, value: 0 });
        }
        Ok(SubsetSumInstance { values, target })
    }

    /// Accepts signed input so that zero and negative values can be reported.
    pub fn from_signed(values: &[i64], target: i64) -> Result<Self, InstanceError> {
        if let Some(index) = values.iter().position(|&v| v <= 0) {
            return Err(InstanceError::NonPositiveValue { index, value: values[index] });
        }
        if target < 0 {
            return Err(InstanceError::NegativeTarget(target));
        }
        Ok(SubsetSumInstance { values: values.iter().map(|&v| v as u64).collect(), target: target as u64 })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        match self.values.iter().position(|&v| v == 0) {
            Some(index) => Err(InstanceError::NonPositiveValue { index, value: 0 }),
            None => Ok(()),
        }
    }

    pub fn sum_of(&self, chosen: &[usize]) -> u64 {
        chosen.iter().map(|&i| self.values[i]).sum()
    }
}

/// A literal: variable index (1-based) and polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub var: u32,
    pub positive: bool,
}

impl Literal {
    pub fn from_dimacs(lit: i32) -> Result<Self, InstanceError> {
        if lit == 0 {
            return Err(InstanceError::ZeroLiteral);
        }
        Ok(Literal { var: lit.unsigned_abs(), positive: lit > 0 })
    }

    pub fn to_dimacs(self) -> i32 {
        if self.positive {
            self.var as i32
        } else {
            -(self.var as i32)
        }
    }

    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var as usize - 1] == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", if self.positive { "" } else { "!" }, self.var)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CnfFormula {
    pub vars: u32,
    pub clauses: Vec<Vec<Literal>>,
}

impl CnfFormula {
    pub fn new(vars: u32, clauses: Vec<Vec<Literal>>) -> Result<Self, InstanceError> {
        let f = CnfFormula { vars, clauses };
        f.validate()?;
        Ok(f)
    }

    /// Builds from DIMACS-style signed integers.
    pub fn from_dimacs(vars: u32, clauses: &[&[i32]]) -> Result<Self, InstanceError> {
        let clauses = clauses
            .iter()
            .map(|c| c.iter().map(|&l| Literal::from_dimacs(l)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(vars, clauses)
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        for (i, clause) in self.clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(InstanceError::EmptyClause(i));
            }
            if clause.len() > 3 {
                return Err(InstanceError::WideClause(i));
            }
            for lit in clause {
                if lit.var == 0 {
                    return Err(InstanceError::ZeroLiteral);
                }
                if lit.var > self.vars {
                    return Err(InstanceError::VariableOutOfRange { clause: i, var: lit.var, vars: self.vars });
                }
            }
        }
        Ok(())
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.eval(assignment)))
    }

    pub fn literal_occurrences(&self) -> usize {
        self.clauses.iter().map(Vec::len).sum()
    }

    pub fn without_clause(&self, index: usize) -> CnfFormula {
        let mut f = self.clone();
        f.clauses.remove(index);
        f
    }
}

pub type Point = (i32, i32);

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridGraph {
    pub vertices: BTreeSet<Point>,
    pub start: Point,
}

impl GridGraph {
    pub fn new(vertices: impl IntoIterator<Item = Point>, start: Option<Point>) -> Result<Self, InstanceError> {
        let vertices: BTreeSet<Point> = vertices.into_iter().collect();
        let first = *vertices.iter().next().ok_or(InstanceError::EmptyGrid)?;
        let start = start.unwrap_or(first);
        if !vertices.contains(&start) {
            return Err(InstanceError::StartNotInGraph(start));
        }
        Ok(GridGraph { vertices, start })
    }

    /// Full `w` by `h` rectangle with the start at the origin.
    pub fn rectangle(w: i32, h: i32) -> Self {
        let vertices = (0..w).flat_map(|x| (0..h).map(move |y| (x, y)));
        Self::new(vertices, Some((0, 0))).expect("nonempty rectangle")
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn neighbours(&self, (x, y): Point) -> impl Iterator<Item = Point> + '_ {
        [(x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1)]
            .into_iter()
            .filter(|p| self.vertices.contains(p))
    }

    pub fn adjacent(&self, a: Point, b: Point) -> bool {
        (a.0 - b.0).abs() + (a.1 - b.1).abs() == 1 && self.vertices.contains(&a) && self.vertices.contains(&b)
    }

    /// Lattice edges, each once with the smaller endpoint first.
    pub fn edges(&self) -> Vec<(Point, Point)> {
        self.vertices
            .iter()
            .flat_map(|&p| [(p.0 + 1, p.1), (p.0, p.1 + 1)].into_iter().map(move |q| (p, q)))
            .filter(|(_, q)| self.vertices.contains(q))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = BTreeSet::from([self.start]);
        let mut stack = vec![self.start];
        while let Some(p) = stack.pop() {
            for q in self.neighbours(p) {
                if seen.insert(q) {
                    stack.push(q);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// True when `cycle` lists every vertex once, starting at `start`, with consecutive
    /// (and last-to-first) entries adjacent.
    pub fn is_hamiltonian_cycle(&self, cycle: &[Point]) -> bool {
        let distinct: BTreeSet<Point> = cycle.iter().copied().collect();
        if cycle.first() != Some(&self.start) || distinct != self.vertices || cycle.len() != self.n() {
            return false;
        }
        if self.n() == 1 {
            return true;
        }
        if self.n() < 3 {
            return false;
        }
        (0..cycle.len()).all(|i| self.adjacent(cycle[i], cycle[(i + 1) % cycle.len()]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_subset_sum() {
        assert_eq!(
            SubsetSumInstance::from_signed(&[1, 0], 1),
            Err(InstanceError::NonPositiveValue { index: 1, value: 0 })
        );
        assert_eq!(SubsetSumInstance::from_signed(&[1], -1), Err(InstanceError::NegativeTarget(-1)));
        assert!(SubsetSumInstance::new(vec![], 0).is_ok());
    }

    #[test]
    fn cnf_checks() {
        assert!(CnfFormula::from_dimacs(1, &[&[1, 1, 1]]).is_ok());
        assert_eq!(CnfFormula::from_dimacs(1, &[&[]]), Err(InstanceError::EmptyClause(0)));
        assert!(matches!(CnfFormula::from_dimacs(1, &[&[2]]), Err(InstanceError::VariableOutOfRange { .. })));
        let f = CnfFormula::from_dimacs(2, &[&[1, -2], &[2]]).unwrap();
        assert!(f.satisfied_by(&[true, true]));
        assert!(!f.satisfied_by(&[false, true]));
    }

    #[test]
    fn grid_basics() {
        let g = GridGraph::rectangle(2, 2);
        assert_eq!(g.edges().len(), 4);
        assert!(g.is_hamiltonian_cycle(&[(0, 0), (1, 0), (1, 1), (0, 1)]));
        assert!(!g.is_hamiltonian_cycle(&[(0, 0), (1, 1), (1, 0), (0, 1)]));
        let path = GridGraph::new([(0, 0), (2, 0)], None).unwrap();
        assert!(!path.is_connected());
        assert_eq!(GridGraph::new([(0, 0)], Some((1, 1))), Err(InstanceError::StartNotInGraph((1, 1))));
    }
}
