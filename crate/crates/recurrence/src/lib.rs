//! Return times, repetition times and sequence complexity along orbits of
//! one-dimensional piecewise-monotonic maps.
//!
//! The crate computes the Poincaré return time of cylinder sets (an exact
//! word-combinatorial quantity), the return of balls under exact
//! interval-union iteration, point return times and symbolic repetition
//! times, and turns these into estimates of metric entropy, Lyapunov
//! exponents and local dimension through log-log regression over scale
//! grids. See the `examples/` directory for one runnable walkthrough per
//! capability.

pub mod complexity;
pub mod error;
pub mod estimators;
pub mod experiment;
pub mod maps;
pub mod returns;
pub mod selftest;
pub mod symbolic;

pub use error::{Error, Result};
pub use maps::{make_builtin_map, IntervalMap, IntervalUnion, Orbit};
pub use returns::{ReturnSeries, SeriesKind};
pub use symbolic::{Partition, SymbolSequence};
