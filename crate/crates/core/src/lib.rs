//! Executable gadget reductions into abstract Portal-style levels.
//!
//! Source instances (Subset Sum, 3-SAT, grid-graph Hamiltonian cycle and
//! Nondeterministic Constraint Logic) are compiled into [`level::Level`]s
//! made of rooms, passages, doors, buttons, turrets, portals and pellets.
//! [`solver::solve`] decides a level by exhaustive search over its
//! canonicalized state graph, and [`oracles`] decide the source problems
//! directly, so every reduction can be checked end to end.

pub mod cli;
pub mod compile;
pub mod corpus;
pub mod format;
pub mod instance;
pub mod kinematics;
pub mod level;
pub mod sim;
pub mod ncl;
pub mod oracles;
pub mod render;
pub mod solver;

pub use level::{validate_level, Element, ElementId, Level, LevelBuilder, Mechanic, Passage, RoomId};
pub use sim::{step, successors, GameState, InputEvent, Simulator};
