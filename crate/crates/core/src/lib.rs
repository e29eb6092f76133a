pub mod cli;
pub mod cube;
pub mod enumerate;
pub mod error;
pub mod fourier;
pub mod generators;
pub mod heavy;
pub mod measure;
pub mod rng;
pub mod verify;

pub use cube::{chi, enumerate_subcubes, CoordSet, Point, Subcube};
pub use error::{Error, Result};
pub use measure::{ExplicitMeasure, SampleSet, SkewReport, Sign};
