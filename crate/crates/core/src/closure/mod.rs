//! Does the ambient Bures geodesic between two points of `𝒦ₙ` stay in `𝒦ₙ`?
//!
//! For commuting endpoints the answer is read off the square-root profile
//! `H_t` in a joint eigenbasis: the geodesic stays in the model exactly when
//! `H_t` has rank one. For general endpoints the whitened initial velocity
//! `Z₀` must lie in the Kronecker-sum tangent space, i.e. `Π(Z₀) = 0`.

mod chart;
mod departure;
mod metric;
mod tangency;

pub use chart::{
    build_chart, classify_closure_commuting, sqrt_profile_at, ClosureClass, CommutingChart, SqrtProfile, CHART_TOL,
    RANK_TOL,
};
pub use departure::{
    delta_diag, delta_diag_gamma, delta_geo_asymptote, delta_geo_closed_form, delta_geo_svd, departure_profile,
    svd_tail, DepartureCoefficients, DepartureRecord, DiagDeparture, RADICAND_TOL,
};
pub use metric::pullback_metric_isotropic;
pub use tangency::{
    direct_leaf_verdict, endpoint_rigidity_classify, factor_transports, pattern_2x2_check, pattern_2x2_check_tol,
    pi_residual, whitened_initial_velocity, FactorTransports, Relation, TangencyReport, TangencyVerdict, PATTERN_TOL,
    RESIDUAL_TOL,
};
