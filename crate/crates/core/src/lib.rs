//! Finite ultrametric spaces with exact rational distances.
//!
//! A space is a [`DistanceMatrix`] that has passed [`certify_ultrametric`],
//! i.e. satisfies `d(x, z) ≤ max(d(x, y), d(y, z))` for every triple. On top
//! of that the crate offers:
//!
//! - [`diamfn`]: diameter functions on subsets, their axioms, and synthesis
//!   of the unique ultrametric a valid one comes from;
//! - [`dipgraph`]: the graph of diametrical pairs, complete multipartite
//!   recognition, and the counting bounds around it;
//! - [`chains`]: nested graph chains and spectrum realization;
//! - [`dendro`]: dendrograms, LCA reconstruction and Newick export;
//! - [`oracle`]: brute-force checks and seeded generators used by the tests.
//!
//! ```
//! use ultrametric::{certify_ultrametric, parse_matrix, MatrixFormat};
//!
//! let m = parse_matrix("0,1/2,1\n1/2,0,1\n1,1,0\n", MatrixFormat::Csv).unwrap();
//! let s = certify_ultrametric(m).unwrap();
//! assert_eq!(s.diameter().to_string(), "1");
//! assert_eq!(s.equiv_partition().unwrap().parts(), &[vec![0, 1], vec![2]]);
//! ```

pub mod chains;
pub mod dendro;
pub mod diamfn;
pub mod dipgraph;
mod error;
pub mod graph;
mod matrix;
pub mod oracle;
mod partition;
mod scalar;
mod space;
mod subset;

pub use chains::{ChainError, GraphChain};
pub use dendro::Dendrogram;
pub use diamfn::DiameterFunction;
pub use error::{DiamMismatch, Error, MetricFault, Result};
pub use graph::SimpleGraph;
pub use matrix::{default_snap_epsilon, parse_matrix, parse_matrix_with, DistanceMatrix, MatrixFormat, ParseOptions};
pub use partition::Partition;
pub use scalar::{parse_rational, Scalar, ScalarParseError};
pub use space::{certify_ultrametric, UltrametricSpace, Violation};
pub use subset::{SubsetId, MAX_POINTS};
