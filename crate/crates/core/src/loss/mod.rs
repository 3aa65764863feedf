//! Value functions and expected loss of coding-decoding schemes.

pub mod engine;
pub mod sweep;
pub mod theorems;
pub mod translation;
pub mod value;

pub use engine::{
    expected_loss_exact, expected_loss_induced, expected_loss_monte_carlo, g_matrix,
    word_error_probability, GMatrix, McEstimate,
};
pub use sweep::{
    linear_grid, sign_changes, sweep_losses, sweep_with, Configuration, DecoderSpec, Method,
    SweepReport,
};
pub use theorems::{theorem1_check, theorem2_check, Theorem1Report, Theorem2Report};
pub use translation::{
    bayes_assignment, bit_error_probability, bit_error_probability_direct, h_coefficients,
    hamming_h_closed_form, is_bayes_encoder, BayesVerdict,
};
pub use value::{
    ber_value, bit_error_value, indicator_value, induced_value, point_mass_value,
    reward_equal_value, squared_error_value, InducedValue, ValueTable,
};
