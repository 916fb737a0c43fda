//! Volterra p-norms and distances for sampled one-dimensional signals.
//!
//! A signal is `n` samples `x_j = f(j/n)` of a function on `[0, 1]`. The
//! discrete Volterra operator is the scaled running sum
//! `(V x)_k = (1/n) Σ_{j<=k} x_j`, and the Volterra p-norm of `x` is the
//! normalized p-norm of `V x`. On densities the `p = 1` distance is the
//! earth mover's distance and the `p = ∞` distance is the Kolmogorov metric.
//!
//! ```
//! use volterra::{volterra_norm, Exponent, Signal};
//!
//! let x = Signal::new(vec![1.0, 1.0, 1.0, 1.0]).unwrap();
//! assert_eq!(volterra_norm(&x, Exponent::ONE), 0.625);
//! assert_eq!(volterra_norm(&x, Exponent::Infinity), 1.0);
//! ```

pub mod catalogue;
pub mod error;
pub mod experiments;
pub mod exponent;
pub mod oracles;
pub mod perturbation;
pub mod radon;
pub mod rng;
pub mod signal;
pub mod volterra;

pub use catalogue::CatalogueSignal;
pub use error::{Error, Result};
pub use experiments::{Family, NoiseConfig, RadonConfig, ShiftConfig, SweepResult};
pub use exponent::Exponent;
pub use oracles::{cdf_max, refine_norm, transport_emd, verify, VerifyConfig};
pub use perturbation::{apply_warp, epsilon_of, shift, Interval, Warp};
pub use radon::{project, projection_bound, Grid2D, ProjectionOptions};
pub use signal::{Density, Signal};
pub use volterra::{
    dual_certificate, emd, km, p_distance, p_norm, volterra, volterra_distance, volterra_norm, DualCertificate,
};
