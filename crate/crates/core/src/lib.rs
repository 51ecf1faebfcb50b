//! Direction-optimized breadth-first search over a partitioned graph.
//!
//! The graph is split into one host partition and zero or more accelerator
//! partitions (degree-specialized or random assignment). BFS runs under a
//! bulk-synchronous model: per level every partition executes a top-down or
//! bottom-up kernel, frontiers are exchanged by push (top-down) or pull
//! (bottom-up), and the host partition coordinates direction switches.
//! Parent records stay local during traversal and are assembled in a final
//! aggregation step, Graph500 style.

pub mod bench;
pub mod bitmap;
pub mod engine;
pub mod error;
pub mod gen;
pub mod graph;
pub mod io;
pub mod partition;
pub mod validate;

pub use engine::{bfs, BfsOutput, DirectionPolicy, ForceMode, StepType};
pub use error::Error;
pub use graph::Graph;
pub use partition::{partition, PartitionSpec, PartitionStrategy, PartitionedGraph};
pub use validate::{sequential_bfs, validate_tree, ValidationReport};

/// Level sentinel for vertices the traversal never reached.
pub const UNREACHED: u32 = u32::MAX;

/// Parent sentinel for vertices the traversal never reached.
pub const NO_PARENT: usize = usize::MAX;
