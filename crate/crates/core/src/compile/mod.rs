//! Compilers from source problems to levels.
//!
//! Each compiler's contract is that the emitted level is solvable exactly
//! when the source instance is a yes-instance.

mod hamcycle;
mod ncl_switch;
mod sat;
mod subset_sum;
mod switch_gadget;

pub use hamcycle::{compile_hamcycle_hep, compile_hamcycle_timed, HepTiming, TimedTiming};
pub use ncl_switch::{compile_ncl_switches, realize_switches};
pub use sat::compile_3sat_turrets;
pub use subset_sum::{build_geometry, unit_depth, compile_subset_sum, selected_wells};
pub use switch_gadget::{
    abstract_switch, check_switch_contract, instantiate_switch_gadget, SwitchCheck, SwitchGadget, SwitchKind,
};

use thiserror::Error;

use crate::instance::InstanceError;
use crate::kinematics::KinematicsError;
use crate::ncl::{EdgeKey, NclError, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("invalid instance: {0}")]
    InvalidInstance(#[from] InstanceError),
    #[error("timing violation: {0}")]
    TimingViolation(String),
    #[error("vertex {0} is neither AND, OR nor free")]
    NotAndOr(VertexId),
    #[error("target edge {0} is not in the graph")]
    UnknownTarget(EdgeKey),
    #[error("constraint graph: {0}")]
    Ncl(#[from] NclError),
    #[error("kinematics: {0}")]
    Kinematics(#[from] KinematicsError),
    #[error("geometry check failed: {0}")]
    Geometry(String),
}
