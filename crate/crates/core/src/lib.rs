//! Genuine multipartite concurrence and linear entropy of N-qubit X-states,
//! the maximally entangled mixed X-states that bound them, and brute-force
//! oracles that check the closed forms.
//!
//! ```
//! use xmems::{measures, mems, xstate::XState};
//!
//! let ghz = XState::ghz(3).unwrap();
//! assert_eq!(measures::gm_concurrence(&ghz).value, 1.0);
//! assert_eq!(mems::critical_entropy_exact(3).unwrap(), (32, 35));
//! ```

pub mod cli;
pub mod error;
pub mod measures;
pub mod mems;
pub mod oracle;
pub mod sampling;
pub mod xstate;

pub use error::{Error, Result};
pub use measures::{gm_concurrence, linear_entropy, purity, MeasurePair};
pub use mems::{bar_transform, boundary_entropy, critical_entropy, mems_state, MemsPoint};
pub use sampling::{SamplerConfig, SweepRecord};
pub use xstate::{DenseMatrix, XState};
