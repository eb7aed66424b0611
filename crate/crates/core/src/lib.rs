//! Gini mean difference, cumulative entropies/extropies and probability
//! weighted moments, for parametric models and data samples.

pub mod cli;
pub mod empirical;
pub mod error;
pub mod identities;
pub mod measures;
pub mod models;
pub mod pwm;

pub use empirical::{EcdfConvention, Sample};
pub use error::{Error, Result};
pub use measures::{estimate, Estimate, EstimatorRoute, MeasureParams, MeasureSpec, Phi, Weight};
pub use models::{ParametricModel, QuadratureConfig};
pub use pwm::PwmIndex;
