//! Colored (categorical) range searching.
//!
//! * [`data`]: rank-space datasets, query descriptions, histograms, seeds.
//! * [`oracle`]: linear-scan reference answers.
//! * [`ric`]: incremental 3D hull and 2D envelope under colored insertion
//!   orders, with structural change counters.
//! * [`k1`]: "exactly one color?" testers, exact (dominance) and Monte Carlo
//!   (dominance, halfplane, halfspace).
//! * [`colortree`]: random color-splitting tree that turns a tester into a
//!   distinct-color reporter.
//! * [`type2`]: 2D weighted per-color counting (capped grids, shallow
//!   cuttings, estimator, general structure).
//! * [`cli`]: the command-line front end and experiment drivers.

pub mod cli;
pub mod colortree;
pub mod data;
pub mod error;
pub mod gen;
pub mod geom;
pub mod k1;
pub mod kdtree;
pub mod oracle;
pub mod queries;
pub mod ric;
pub mod type2;

pub use data::{Color, ColoredPoint, Dataset, Histogram, RangeQuery, RawPoint, Rect, Seed};
pub use error::{Error, Result};
