//! Correlations of the holonomy suspension flow: observables, direct
//! unfolding of `Υ`, its Laplace series, decay fits and the holonomy
//! statistics of closed geodesics.

mod equidistribution;
mod fit;
mod observable;
mod series;
mod upsilon;

pub use equidistribution::{character_sum, holonomy_equidistribution, li, EquidistributionRow};
pub use fit::{fit_decay, fit_decay_samples, DecayEstimate, DECAY_FLOOR, MIN_DECAY_POINTS};
pub use observable::{
    gauss_legendre, hat_phi, hat_phi_all, integrate, panels_for, profile_transform, Observable, Profile, QUADRATURE_NODES,
};
pub use series::{laplace_series, LaplaceSeries};
pub use upsilon::{horizon, upsilon, upsilon_series, CorrelationSeries, TimeGrid, UpsilonValue, HORIZON_FACTOR};
