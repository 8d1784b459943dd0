//! Computation of 𝒜(n) = {1 ≤ a < n : n | a²−1, a | n²−1}, the
//! Fibonacci-like polynomials `G_i`, their integer chains, and a census
//! that checks |𝒜(n)| ≤ 3 over large ranges by testing the chains for
//! shared values.
//!
//! ```
//! use asize::{chains, unity};
//!
//! let set = unity::aset_fast(21).unwrap();
//! assert_eq!(set.elements, vec![1, 8, 20]);
//!
//! let trace = chains::descend(8u64, 21u64).unwrap();
//! assert_eq!((trace.coord.k, trace.coord.i), (3, 3));
//! ```

pub mod census;
pub mod chains;
pub mod cli;
pub mod error;
pub mod polyseq;
pub mod report;
pub mod unity;

pub use census::{CensusReport, ChainMember};
pub use chains::{ChainCoord, DescentTrace};
pub use error::{CensusError, ChainError, PolyError, UnityError};
pub use polyseq::PolyCoeffs;
pub use unity::{ASetResult, Factorization, Method};
