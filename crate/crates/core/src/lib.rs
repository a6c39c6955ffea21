//! Value-at-Risk and non-ruin capital for compound renewal risk models.
//!
//! Claims of size `Y` arrive after i.i.d. waiting times `T`. For a premium
//! rate `c` and horizon `t` the crate computes, bounds, approximates and
//! simulates two capitals:
//!
//! * the Value-at-Risk `u` solving `P{V_t > u + c t} = alpha`, and
//! * the non-ruin capital `u` solving `P{ruin before t} = alpha`.
//!
//! ```
//! use ruincap::{dist::Distribution, model::RiskModel};
//!
//! let m = RiskModel::new(Distribution::exponential(1.0)?, Distribution::exponential(1.0)?)?;
//! let k = m.derived_constants()?;
//! assert_eq!((k.m_big, k.d2_big), (1.0, 2.0));
//! # Ok::<(), ruincap::Error>(())
//! ```

pub mod approx;
pub mod bounds;
pub mod capital;
pub mod cli;
pub mod dist;
pub mod error;
pub mod exact;
pub mod model;
pub mod montecarlo;
pub mod quad;
pub mod roots;
pub mod special;
pub mod table;

pub use error::{Error, Result};
pub use special::Probability;
