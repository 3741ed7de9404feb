pub mod analytic;
pub mod channel;
pub mod error;
pub mod experiment;
pub mod integrate;
pub mod montecarlo;
pub mod params;
pub mod quadrature;
pub mod schemes;

pub use error::{Error, Result};
