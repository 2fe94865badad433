//! Closed-form predictors: thresholds, non-vanishing ranges, curve formulas
//! and combined support maps.
//!
//! All arithmetic is exact except the Gaussian normalisation, which is
//! reported as `f64`.

mod curves;
mod support;
mod thresholds;
mod veronese;

pub use curves::{
    curve_duality_pair, curve_gaussian_normalized, curve_kp1, curve_support, gaussian_index, validate_gonality,
    CurveTwist,
};
pub use support::{Basis, CellVerdict, SupportPrediction, Verdict};
pub use thresholds::{asymptotic_window, np_thresholds, Family, ThresholdVerdict, Window};
pub use veronese::{
    cm_range, counterexample_watch, easy_proxy_holds, easy_support, normalize_twist, veronese_easy_params,
    veronese_range, veronese_support, WatchFinding, WatchKind, WatchReport,
};
