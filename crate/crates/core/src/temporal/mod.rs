//! Temporal graph model: time-labelled edges, snapshots, the footprint,
//! the instance text format, random generation and the temporal
//! neighbourhood diversity partition.

mod generate;
mod graph;
mod io;
mod tnd;

pub use generate::generate_random;
pub use graph::{footprint, StaticGraph, TemporalEdge, TemporalGraph, Time, Vertex};
pub use io::{parse_instance, serialize_instance};
pub use tnd::{tnd_graph, tnd_partition, ClassKind, TndGraph, TndPartition};
