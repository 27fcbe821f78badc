//! The ranked-slice determinization construction.

pub mod config;
pub mod explore;
pub mod macrostate;
pub mod ops;
pub mod policy;
pub mod successor;
pub mod topo;

pub use config::{DetConfig, Limits, MergeStrategy};
pub use explore::{determinize_plain, explore, Determinized, Edge, Explored};
pub use macrostate::{parent_index, Macrostate, RankedSlice};
pub use ops::Signals;
pub use policy::{ComponentMode, ComponentPolicy};
pub use successor::{DetContext, Target, Transition};
pub use topo::{determinize_topo, select_kept_bottom, TopoResult};
