//! Field-of-experts prior with Gaussian scale mixture experts.

mod bank;
mod latent;
mod precision;

pub use bank::{default_filter_bank, filter_responses, load_filter_bank, BankSource, FilterBank, LOADED_ZERO_MEAN_TOL};
pub use latent::{HyperParams, LatentVariances};
pub use precision::{precision_apply, PrecisionOperator};
