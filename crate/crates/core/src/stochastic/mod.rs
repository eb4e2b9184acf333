//! Seeded random streams, special functions, SDE samplers and the two
//! density oracles (finite differences and Monte Carlo).

pub mod kfe;
pub mod ks;
pub mod ou;
pub mod reset;
pub mod rng;
pub mod special;

pub use kfe::{solve_stationary_kfe_fd, FluxScheme, Grid1D, KfeSolution};
pub use ks::{ks_distance, ks_two_sample};
pub use ou::{simulate_ou_reflected, simulate_ou_reflected_with, OuProcessSpec};
pub use reset::{simulate_gbm_reset, simulate_gbm_reset_with, GbmResetSpec};
pub use special::{normal_cdf, normal_pdf, normal_sf};
