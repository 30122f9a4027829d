//! Normalized radial bound-state wavefunction and oracle-grade expectation
//! values of r powers and of p^2.

use crate::specfun::{self, PolyCoeffs};
use crate::spectrum::{bound_mass, SpectralParams, StateLabel, SystemConfig};
use crate::{Error, Result};

/// Provenance of a set of radial moments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentMode {
    /// Moments assembled from the tabulated closed forms.
    PaperClosedForm,
    /// Moments from exact term-wise Gamma integration.
    Oracle,
}

/// A normalized bound state: spectral parameters, squared normalization
/// constant C^2, and the Kummer polynomial part of the radial solution
/// R(r) = C (kr)^(xi - 1/2) e^(-kr/2) F(-n; 2 xi + 1; kr).
#[derive(Debug, Clone, PartialEq)]
pub struct RadialState {
    pub params: SpectralParams,
    pub norm_c2: f64,
    pub poly: PolyCoeffs,
    config: SystemConfig,
}

impl RadialState {
    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    pub fn radial_quantum_number(&self) -> u32 {
        self.poly.degree() as u32
    }
}

/// Expectation values over the relative coordinate r = r1 - r2 and the
/// relative momentum, tagged with their provenance.
///
/// `p2` comes from the algebraic identity
/// `<p^2> = (M^2/4 - m^2) + <V^2>/4 - (M/2)<V>` with V = -alpha/r, which is
/// exact given the moments and avoids numerical derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialMoments {
    pub inv_r2: f64,
    pub inv_r: f64,
    pub r2: f64,
    pub p2: f64,
    pub mode: MomentMode,
}

/// ln C^2 = ln[ k^3 Gamma(2xi+1+n) / (n! (2n+2xi+1) Gamma^2(2xi+1)) ].
pub(crate) fn ln_norm_c2(params: &SpectralParams, n: u32) -> f64 {
    let two_xi = 2.0 * params.xi;
    3.0 * params.k.ln() + specfun::ln_gamma(two_xi + 1.0 + n as f64)
        - specfun::ln_gamma(n as f64 + 1.0)
        - (2.0 * params.big_n).ln()
        - 2.0 * specfun::ln_gamma(two_xi + 1.0)
}

/// Builds the normalized radial state for (n, l) at the given coupling.
pub fn build_state(state: StateLabel, config: &SystemConfig) -> Result<RadialState> {
    let params = bound_mass(state, config)?;
    let poly = PolyCoeffs::kummer(state.n, 2.0 * params.xi + 1.0)?;
    let norm_c2 = ln_norm_c2(&params, state.n).exp();
    Ok(RadialState { params, norm_c2, poly, config: *config })
}

/// R(r) for r > 0. For l = 0 the amplitude grows like r^(xi - 1/2) with
/// xi < 1/2 toward the origin, but stays finite for every r > 0.
pub fn radial_eval(rs: &RadialState, r: f64) -> Result<f64> {
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::domain(format!("radius must be positive, got {r}")));
    }
    let rho = rs.params.k * r;
    Ok(rs.norm_c2.sqrt() * rho.powf(rs.params.xi - 0.5) * (-rho / 2.0).exp() * rs.poly.eval(rho))
}

/// Normalization integral of R^2 r^2 dr via the term-wise Gamma sum;
/// equals 1 when C^2 is correct.
pub fn norm_integral(rs: &RadialState) -> f64 {
    let two_xi = 2.0 * rs.params.xi;
    let sum =
        specfun::weighted_gamma_sum(rs.radial_quantum_number(), two_xi + 1.0, two_xi + 2.0);
    sum.sign * (rs.norm_c2.ln() - 3.0 * rs.params.k.ln() + sum.ln_abs).exp()
}

/// Oracle moments of the state: inv_r = k <rho^-1>, inv_r2 = k^2 <rho^-2>,
/// r2 = <rho^2> / k^2, and p^2 from the algebraic identity.
pub fn moments_oracle(rs: &RadialState) -> RadialMoments {
    let n = rs.radial_quantum_number();
    let (xi, k, mass) = (rs.params.xi, rs.params.k, rs.params.mass);
    let alpha = rs.config.alpha();
    let mom = |s: f64| {
        specfun::rho_moment_oracle(n, xi, s).expect("bound state stays inside the oracle domain")
    };
    let inv_r = k * mom(-1.0);
    let inv_r2 = k * k * mom(-2.0);
    let r2 = mom(2.0) / (k * k);
    // M^2/4 - m^2 = -k^2/4 exactly
    let p2 = alpha * alpha / 4.0 * inv_r2 + mass * alpha / 2.0 * inv_r - k * k / 4.0;
    RadialMoments { inv_r2, inv_r, r2, p2, mode: MomentMode::Oracle }
}
