//! Floating-point oracle: AGM periods, the L-series at s = 1 and numerical
//! period integrals of the newform.

mod cross_validate;
mod integrate;
mod lseries;
mod periods;

pub use cross_validate::{check_period_pair, compare, cross_validate, Verdict, ABS_FLOOR};
pub use integrate::{gamma_to, period_integral, terms_for_height};
pub use lseries::{
    coefficients, eichler_integral, lseries_at_one, required_terms, tail_bound, Coefficients,
    LSeriesValue,
};
pub use periods::{agm, agm_periods, PeriodData};
