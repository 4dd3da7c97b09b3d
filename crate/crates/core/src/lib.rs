//! Dilute hitomezashi stitching on the isometric grid.
//!
//! Only every second line of each of the three line families is stitched, so
//! every visited vertex has degree two and a quarter of the vertices stay
//! empty. Binary offset words choose, line by line, whether the first stitch
//! sits on the front or the back of the fabric.
//!
//! * [`words`]: word algebra and the Koch word family
//! * [`grid`]: lattice geometry and the line-selection rule
//! * [`stitcher`]: words → front/back segment sets
//! * [`design_graph`]: cycles and motif census
//! * [`symmetry`]: wallpaper groups and self-duality
//! * [`koch_oracle`]: snowflake iterates and their detection
//! * [`render`]: SVG output
//! * [`cli`]: command line, reports, convention calibration

pub mod cli;
pub mod design_graph;
pub mod error;
pub mod grid;
pub mod koch_oracle;
pub mod render;
pub mod stitcher;
pub mod symmetry;
pub mod words;

pub use error::{Error, Result};
