//! Bound states and continuous-variable separability diagnostics for a
//! relativistic two-meson system bound by a Coulomb interaction.
//!
//! The crate computes the bound-state spectral parameters of the two-body
//! Klein-Gordon Coulomb problem (equal masses, natural units), builds the
//! normalized radial wavefunctions, evaluates the closed-form expectation
//! values `<r^-2>`, `<r^-1>`, `<r^2>`, `<p^2>`, and classifies states with a
//! Duan-type separability criterion over the EPR parameter `a`.
//!
//! Every closed form is paired with an exact term-wise Gamma-integration
//! oracle ([`specfun::rho_moment_oracle`]) so the two routes can be diffed.
//! The `<rho^2>` combinatorial factor `F0` exists in two modes that disagree
//! for radial quantum number `n >= 1`: [`moments::F0Mode::Paper`] keeps the
//! tabulated closed form, [`moments::F0Mode::Oracle`] uses exact integration.
//! Both are first-class everywhere downstream; nothing is silently patched.

pub mod cli;
pub mod criteria;
pub mod moments;
pub mod specfun;
pub mod spectrum;
pub mod wavefunction;

/// Errors shared by every module.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// The effective angular parameter xi would be zero or imaginary; every
    /// downstream formula is invalid there, so this is a hard error.
    #[error("critical coupling: alpha >= 2l+1 (alpha = {alpha}, l = {l})")]
    CriticalCoupling { alpha: f64, l: u32 },
    /// An argument left the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub use criteria::{
    classify_on_grid, classify_state, criterion_nonrelativistic, criterion_reduced,
    criterion_relativistic_asymptotic, duan_necessary_check, duan_sufficient_check,
    total_variance, y_affine, y_general, AffineCriterion, ClassifyOutcome, CriterionReport,
    EprParameter, Verdict, VerdictValue, Witness,
};
pub use moments::{
    closed_form_moments, criterion_coefficients, ClosedFormMoments, CriterionCoefficients,
    F0Mode, MomentIntegrals,
};
pub use spectrum::{binding_energy, bound_mass, compute_xi, SpectralParams, StateLabel, SystemConfig};
pub use wavefunction::{build_state, moments_oracle, radial_eval, MomentMode, RadialMoments, RadialState};
