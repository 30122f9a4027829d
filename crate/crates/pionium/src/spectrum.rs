//! Bound-state spectral parameters of the equal-mass two-meson Coulomb
//! system, in natural units (c = hbar = 1, distances in Yukawa radii).

use crate::{Error, Result};

/// Radial and orbital quantum numbers (n, l) of a bound state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StateLabel {
    pub n: u32,
    pub l: u32,
}

impl StateLabel {
    pub fn new(n: u32, l: u32) -> Self {
        Self { n, l }
    }
}

/// Dimensionless coupling constant and constituent mass. Equal masses are
/// structural: there is a single mass field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    alpha: f64,
    m: f64,
}

impl SystemConfig {
    pub fn new(alpha: f64, m: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::domain(format!("coupling alpha must be positive and finite, got {alpha}")));
        }
        if !m.is_finite() || m <= 0.0 {
            return Err(Error::domain(format!("mass m must be positive and finite, got {m}")));
        }
        Ok(Self { alpha, m })
    }

    /// Config with the default mass m = 1.
    pub fn with_alpha(alpha: f64) -> Result<Self> {
        Self::new(alpha, 1.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn m(&self) -> f64 {
        self.m
    }
}

/// Derived quantities of one bound state.
///
/// * `xi`     effective angular parameter sqrt((l+1/2)^2 - alpha^2/4)
/// * `big_n`  effective principal number N = n + 1/2 + xi
/// * `mass`   bound-state mass M, 0 < M < 2m
/// * `k`      momentum scale sqrt(4m^2 - M^2)
/// * `lambda` Coulomb parameter M alpha / (2k); equals N at quantization
/// * `n1`     non-relativistic principal number n + l + 1
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParams {
    pub xi: f64,
    pub big_n: f64,
    pub mass: f64,
    pub k: f64,
    pub lambda: f64,
    pub n1: u32,
}

/// xi = sqrt((l + 1/2)^2 - alpha^2 / 4).
///
/// Fails with [`Error::CriticalCoupling`] at alpha >= 2l + 1, where xi
/// would be zero or imaginary.
pub fn compute_xi(l: u32, alpha: f64) -> Result<f64> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::domain(format!("coupling alpha must be positive and finite, got {alpha}")));
    }
    if alpha >= 2.0 * l as f64 + 1.0 {
        return Err(Error::CriticalCoupling { alpha, l });
    }
    let half = l as f64 + 0.5;
    Ok(((half - alpha / 2.0) * (half + alpha / 2.0)).sqrt())
}

/// All spectral parameters of the bound state: M = 2m / sqrt(1 + alpha^2/4N^2)
/// with N = n + 1/2 + xi.
pub fn bound_mass(state: StateLabel, config: &SystemConfig) -> Result<SpectralParams> {
    let xi = compute_xi(state.l, config.alpha())?;
    let big_n = state.n as f64 + 0.5 + xi;
    let m = config.m();
    let x = (config.alpha() / (2.0 * big_n)).powi(2);
    let root = (1.0 + x).sqrt();
    let mass = 2.0 * m / root;
    // 2m - M through the algebraic identity, immune to the cancellation that
    // 2m - mass suffers at small alpha; k^2 = (2m - M)(2m + M).
    let deficit = 2.0 * m * x / (root * (1.0 + root));
    let k = (deficit * (2.0 * m + mass)).sqrt();
    let lambda = mass * config.alpha() / (2.0 * k);
    Ok(SpectralParams { xi, big_n, mass, k, lambda, n1: state.n + state.l + 1 })
}

/// Binding energy 2m - M, evaluated in the cancellation-free form.
pub fn binding_energy(params: &SpectralParams, config: &SystemConfig) -> f64 {
    let x = (config.alpha() / (2.0 * params.big_n)).powi(2);
    let root = (1.0 + x).sqrt();
    2.0 * config.m() * x / (root * (1.0 + root))
}
