//! Command implementations behind the binary: single-state queries, the
//! closed-form-vs-oracle verification report, classification, figure data,
//! and parameter sweeps.
//!
//! Everything returns a deterministic string: no wall clock, no randomness,
//! and all floating-point output is printed with 12 significant digits.

use crate::criteria::{
    classify_on_grid, criterion_reduced, log_spaced, total_variance, y_affine, Witness,
};
use crate::moments::{
    b_verbatim, closed_form_moments, criterion_coefficients, d_verbatim, f0_paper,
    i_m1_simplified, i_m2_simplified, rho2_closed_form, F0Mode,
};
use crate::specfun::rho_moment_oracle;
use crate::spectrum::{binding_energy, bound_mass, StateLabel, SystemConfig};
use crate::wavefunction::{build_state, moments_oracle, norm_integral};
use crate::{Error, Result};
use serde_json::json;
use std::fmt::Write as _;

/// 12 significant digits, exponent notation; the single formatting used for
/// every float the tool emits.
pub fn fmt12(x: f64) -> String {
    format!("{x:.11e}")
}

/// Rounds to the 12-significant-digit value that [`fmt12`] prints, for JSON
/// fields.
pub fn round12(x: f64) -> f64 {
    fmt12(x).parse().expect("fmt12 output always parses")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// A one-dimensional parameter grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    pub log: bool,
}

impl GridSpec {
    pub fn linear(min: f64, max: f64, steps: usize) -> Self {
        Self { min, max, steps, log: false }
    }

    pub fn logarithmic(min: f64, max: f64, steps: usize) -> Self {
        Self { min, max, steps, log: true }
    }

    /// Grid points, endpoints included; empty when steps = 0 or min > max.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 0 || self.min > self.max {
            return Vec::new();
        }
        if self.steps == 1 {
            return vec![self.min];
        }
        if self.log {
            log_spaced(self.min, self.max, self.steps)
        } else {
            let step = (self.max - self.min) / (self.steps - 1) as f64;
            (0..self.steps).map(|i| self.min + step * i as f64).collect()
        }
    }
}

/// Default a-grid: 2001 log-spaced points over [1e-3, 1e3].
pub fn default_a_grid_spec() -> GridSpec {
    GridSpec::logarithmic(1e-3, 1e3, 2001)
}

/// Sweep specification; defaults reproduce the full verification sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub n_max: u32,
    pub l_max: u32,
    pub alpha_grid: GridSpec,
    pub a_grid: GridSpec,
    pub mode: F0Mode,
    pub m: f64,
    pub format: OutputFormat,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            n_max: 6,
            l_max: 3,
            alpha_grid: GridSpec::linear(0.05, 3.0, 60),
            a_grid: default_a_grid_spec(),
            mode: F0Mode::Paper,
            m: 1.0,
            format: OutputFormat::Csv,
        }
    }
}

/// Spectral parameters of one state, one `name value` line each.
pub fn run_spectrum(n: u32, l: u32, alpha: f64, m: f64) -> Result<String> {
    let config = SystemConfig::new(alpha, m)?;
    let state = StateLabel::new(n, l);
    let p = bound_mass(state, &config)?;
    let mut out = String::new();
    let _ = writeln!(out, "xi {}", fmt12(p.xi));
    let _ = writeln!(out, "N {}", fmt12(p.big_n));
    let _ = writeln!(out, "M {}", fmt12(p.mass));
    let _ = writeln!(out, "k {}", fmt12(p.k));
    let _ = writeln!(out, "lambda {}", fmt12(p.lambda));
    let _ = writeln!(out, "N1 {}", p.n1);
    let _ = writeln!(out, "binding {}", fmt12(binding_energy(&p, &config)));
    Ok(out)
}

/// Closed-form integrals in the requested mode plus the oracle moments.
pub fn run_moments(n: u32, l: u32, alpha: f64, m: f64, mode: F0Mode) -> Result<String> {
    let config = SystemConfig::new(alpha, m)?;
    let state = StateLabel::new(n, l);
    let p = bound_mass(state, &config)?;
    let cf = closed_form_moments(state, &config, mode)?;
    let co = criterion_coefficients(&(&cf).into(), &p, &config);
    let om = moments_oracle(&build_state(state, &config)?);
    let mut out = String::new();
    let _ = writeln!(out, "mode {mode}");
    let _ = writeln!(out, "xi {}", fmt12(p.xi));
    let _ = writeln!(out, "N {}", fmt12(p.big_n));
    let _ = writeln!(out, "M {}", fmt12(p.mass));
    let _ = writeln!(out, "k {}", fmt12(p.k));
    let _ = writeln!(out, "I_m2 {}", fmt12(cf.i_m2));
    let _ = writeln!(out, "I_m1 {}", fmt12(cf.i_m1));
    let _ = writeln!(out, "I_2 {}", fmt12(cf.i_2));
    let _ = writeln!(out, "F0 {}", fmt12(cf.f0));
    let _ = writeln!(out, "B {}", fmt12(co.big_b));
    let _ = writeln!(out, "D {}", fmt12(co.big_d));
    let _ = writeln!(out, "A {}", fmt12(co.big_a));
    let _ = writeln!(out, "oracle_inv_r {}", fmt12(om.inv_r));
    let _ = writeln!(out, "oracle_inv_r2 {}", fmt12(om.inv_r2));
    let _ = writeln!(out, "oracle_r2 {}", fmt12(om.r2));
    let _ = writeln!(out, "oracle_p2 {}", fmt12(om.p2));
    Ok(out)
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

/// Closed-form-vs-oracle verification. Returns the report and whether all
/// expected checks passed; the F0 discrepancy for n >= 1 is expected and
/// reported, never failed.
pub fn run_verify(n_max: u32, l_max: u32) -> (String, bool) {
    let mut out = String::new();
    let mut ok = true;
    let tol = 1e-10;
    let tol_eq = 1e-12;

    let _ = writeln!(out, "closed-form vs oracle (tol {tol:e}; form equivalence tol {tol_eq:e})");
    for l in 0..=l_max {
        let critical = 2.0 * l as f64 + 1.0;
        for n in 0..=n_max {
            for frac in [0.3, 0.6, 0.9] {
                let alpha = frac * critical;
                let config = SystemConfig::with_alpha(alpha).expect("alpha below critical");
                let state = StateLabel::new(n, l);
                let params = bound_mass(state, &config).expect("below critical coupling");
                let rs = build_state(state, &config).expect("below critical coupling");
                let om = moments_oracle(&rs);
                let cf = closed_form_moments(state, &config, F0Mode::Paper)
                    .expect("below critical coupling");

                let norm_ok = (norm_integral(&rs) - 1.0).abs() <= tol;
                let im1_ok = rel_err(cf.i_m1, alpha * om.inv_r) <= tol;
                let im2_ok = rel_err(cf.i_m2, alpha * alpha * om.inv_r2) <= tol;
                let simp_ok = rel_err(cf.i_m1, i_m1_simplified(&params, &config)) <= tol_eq
                    && rel_err(cf.i_m2, i_m2_simplified(&params, &config)) <= tol_eq;
                let co = criterion_coefficients(&(&cf).into(), &params, &config);
                let b_scale = cf.i_2.abs() / 4.0
                    + cf.i_m2
                    + 2.0 * params.mass * cf.i_m1
                    + params.k * params.k;
                let bd_ok = (b_verbatim(state, &config, cf.f0).unwrap() - co.big_b).abs()
                    <= tol_eq * b_scale.max(1.0)
                    && (d_verbatim(state, &config).unwrap() - co.big_d).abs()
                        <= tol_eq * b_scale.max(1.0);
                ok &= norm_ok && im1_ok && im2_ok && simp_ok && bd_ok;
                let flag = |b: bool| if b { "PASS" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "n={n} l={l} alpha={} norm={} i_m1={} i_m2={} simplified={} bd={}",
                    fmt12(alpha),
                    flag(norm_ok),
                    flag(im1_ok),
                    flag(im2_ok),
                    flag(simp_ok),
                    flag(bd_ok)
                );
            }
        }
    }

    let _ = writeln!(out, "F0 audit: <rho^2> tabulated vs exact (candidate = 10N^2 - 6xi^2 + 7/2)");
    for n in 0..=n_max {
        for xi in [0.1, 0.5, 1.2, 2.5] {
            let paper = f0_paper(n, xi) / (2.0 * n as f64 + 2.0 * xi + 1.0);
            let oracle = rho_moment_oracle(n, xi, 2.0).expect("xi > 0");
            let candidate = rho2_closed_form(n, xi);
            let matches = rel_err(paper, oracle) <= tol;
            let candidate_ok = rel_err(candidate, oracle) <= tol;
            // n = 0 must match; the candidate must match everywhere
            ok &= candidate_ok && (n > 0 || matches);
            let flag = if matches { "MATCH" } else { "DISCREPANT" };
            let _ = writeln!(
                out,
                "n={n} xi={} paper={} oracle={} candidate={} {}{}",
                fmt12(xi),
                fmt12(paper),
                fmt12(oracle),
                fmt12(candidate),
                flag,
                if candidate_ok { "" } else { " CANDIDATE-FAIL" }
            );
        }
    }

    // informational: <p^2> < m M can fail close to the critical coupling
    let mut p2_violations = 0usize;
    let sweep = SweepSpec::default();
    for l in 0..=sweep.l_max {
        for n in 0..=sweep.n_max {
            for alpha in sweep.alpha_grid.values() {
                let Ok(config) = SystemConfig::with_alpha(alpha) else { continue };
                let Ok(rs) = build_state(StateLabel::new(n, l), &config) else { continue };
                let om = moments_oracle(&rs);
                if om.p2 >= config.m() * rs.params.mass {
                    p2_violations += 1;
                }
            }
        }
    }
    let _ = writeln!(
        out,
        "sanity p2 < m*M over the default sweep grid: {p2_violations} violation(s) (informational, near-critical states)"
    );

    if ok {
        let _ = writeln!(out, "verify: PASS (F0 discrepancies for n >= 1 are expected and reported above)");
    } else {
        let _ = writeln!(out, "verify: FAIL (unexpected check failure, see lines above)");
    }
    (out, ok)
}

fn witness_json(witness: Option<Witness>) -> serde_json::Value {
    match witness {
        Some(Witness::AffinePair { p, q }) => json!({ "p": round12(p), "q": round12(q) }),
        Some(Witness::EprValue(a)) => json!({ "a": round12(a) }),
        None => serde_json::Value::Null,
    }
}

/// Verdict line plus a JSON record carrying both modes' classifications.
pub fn run_classify(
    n: u32,
    l: u32,
    alpha: f64,
    m: f64,
    mode: F0Mode,
    a_grid: &GridSpec,
) -> Result<String> {
    let config = SystemConfig::new(alpha, m)?;
    let state = StateLabel::new(n, l);
    let grid = a_grid.values();

    let mut per_mode = serde_json::Map::new();
    let mut requested = None;
    for mode_i in [F0Mode::Paper, F0Mode::Oracle] {
        let out = classify_on_grid(state, &config, mode_i, &grid)?;
        per_mode.insert(
            mode_i.to_string(),
            json!({
                "p": round12(out.p),
                "q": round12(out.q),
                "margin_at_a1": round12(out.margin_at_a1),
                "violated_all_a": out.violated_all_a,
                "satisfied_all_a": out.satisfied_all_a,
                "necessary_all_a": out.necessary_all_a,
                "grid_agrees": out.grid_agrees,
                "verdict": out.verdict.value.to_string(),
            }),
        );
        if mode_i == mode {
            requested = Some(out);
        }
    }
    let requested = requested.expect("requested mode classified");

    // the reduced composition pins the a = 1 margin at exactly -2
    let params = bound_mass(state, &config)?;
    let mut reduced = serde_json::Map::new();
    for mode_i in [F0Mode::Paper, F0Mode::Oracle] {
        let cf = closed_form_moments(state, &config, mode_i)?;
        let co = criterion_coefficients(&(&cf).into(), &params, &config);
        reduced.insert(mode_i.to_string(), json!(round12(criterion_reduced(&co, 1.0))));
    }
    let tv_a1 = total_variance(&moments_oracle(&build_state(state, &config)?), 1.0)?;

    let record = json!({
        "n": n,
        "l": l,
        "alpha": round12(alpha),
        "m": round12(m),
        "requested_mode": mode.to_string(),
        "verdict": requested.verdict.value.to_string(),
        "witness": witness_json(requested.verdict.witness),
        "modes": serde_json::Value::Object(per_mode),
        "reduced_margin_at_a1": serde_json::Value::Object(reduced),
        "total_variance_at_a1": round12(tv_a1),
    });

    let witness_text = match requested.verdict.witness {
        Some(Witness::AffinePair { p, q }) => format!(" [P={}, Q={}]", fmt12(p), fmt12(q)),
        Some(Witness::EprValue(a)) => format!(" [violated at a={}]", fmt12(a)),
        None => String::new(),
    };
    let mut out = String::new();
    let _ = writeln!(out, "verdict ({mode}): {}{}", requested.verdict.value, witness_text);
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&record).expect("serializable"));
    Ok(out)
}

/// Figure data: `alpha,a,y_lhs,y_rhs,violated` rows for the fixed state of
/// the requested figure. Figure 1 is (l=1, n=3) over alpha in (0, 3);
/// figure 2 is (l=0, n=2) over alpha in (0, 1).
pub fn run_figure(id: u8, mode: F0Mode, a_grid: &GridSpec, m: f64) -> Result<String> {
    let (state, alpha_grid) = match id {
        1 => (StateLabel::new(3, 1), GridSpec::linear(0.05, 2.95, 59)),
        2 => (StateLabel::new(2, 0), GridSpec::linear(0.05, 0.95, 19)),
        other => return Err(Error::domain(format!("unknown figure id {other}, expected 1 or 2"))),
    };
    let a_values = a_grid.values();
    let mut out = String::from("alpha,a,y_lhs,y_rhs,violated\n");
    for alpha in alpha_grid.values() {
        let config = SystemConfig::new(alpha, m)?;
        let aff = y_affine(state, &config, mode)?;
        for &a in &a_values {
            let y_rhs = a * a + 1.0 / (a * a);
            let y_lhs = aff.p * y_rhs + aff.q;
            let violated = y_lhs <= y_rhs;
            let _ = writeln!(out, "{},{},{},{},{}", fmt12(alpha), fmt12(a), fmt12(y_lhs), fmt12(y_rhs), violated);
        }
    }
    Ok(out)
}

const SWEEP_HEADER: &str =
    "n,l,alpha,skipped,xi,bigN,mass,k,inv_r,inv_r2,r2_oracle,r2_paper,p2,p,q,verdict_paper,verdict_oracle";

/// One record per (n, l, alpha) cell in ascending order; cells above the
/// critical coupling are kept as `skipped` rows.
pub fn run_sweep(spec: &SweepSpec) -> Result<String> {
    let alphas = spec.alpha_grid.values();
    let a_values = spec.a_grid.values();
    let mut rows = Vec::new();
    for n in 0..=spec.n_max {
        for l in 0..=spec.l_max {
            for &alpha in &alphas {
                let config = SystemConfig::new(alpha, spec.m)?;
                let state = StateLabel::new(n, l);
                match bound_mass(state, &config) {
                    Err(Error::CriticalCoupling { .. }) => {
                        rows.push((n, l, alpha, None));
                    }
                    Err(e) => return Err(e),
                    Ok(params) => {
                        let rs = build_state(state, &config)?;
                        let om = moments_oracle(&rs);
                        let paper_cf = closed_form_moments(state, &config, F0Mode::Paper)?;
                        let aff = y_affine(state, &config, spec.mode)?;
                        let vp = classify_on_grid(state, &config, F0Mode::Paper, &a_values)?;
                        let vo = classify_on_grid(state, &config, F0Mode::Oracle, &a_values)?;
                        rows.push((
                            n,
                            l,
                            alpha,
                            Some((params, om, paper_cf.i_2, aff, vp.verdict.value, vo.verdict.value)),
                        ));
                    }
                }
            }
        }
    }

    match spec.format {
        OutputFormat::Csv => {
            let mut out = String::from(SWEEP_HEADER);
            out.push('\n');
            for (n, l, alpha, cell) in rows {
                match cell {
                    None => {
                        let _ = writeln!(out, "{n},{l},{},true,,,,,,,,,,,,,", fmt12(alpha));
                    }
                    Some((p, om, r2_paper, aff, vp, vo)) => {
                        let _ = writeln!(
                            out,
                            "{n},{l},{},false,{},{},{},{},{},{},{},{},{},{},{},{vp},{vo}",
                            fmt12(alpha),
                            fmt12(p.xi),
                            fmt12(p.big_n),
                            fmt12(p.mass),
                            fmt12(p.k),
                            fmt12(om.inv_r),
                            fmt12(om.inv_r2),
                            fmt12(om.r2),
                            fmt12(r2_paper),
                            fmt12(om.p2),
                            fmt12(aff.p),
                            fmt12(aff.q),
                        );
                    }
                }
            }
            Ok(out)
        }
        OutputFormat::Json => {
            let records: Vec<serde_json::Value> = rows
                .into_iter()
                .map(|(n, l, alpha, cell)| match cell {
                    None => json!({ "n": n, "l": l, "alpha": round12(alpha), "skipped": true }),
                    Some((p, om, r2_paper, aff, vp, vo)) => json!({
                        "n": n,
                        "l": l,
                        "alpha": round12(alpha),
                        "skipped": false,
                        "xi": round12(p.xi),
                        "bigN": round12(p.big_n),
                        "mass": round12(p.mass),
                        "k": round12(p.k),
                        "inv_r": round12(om.inv_r),
                        "inv_r2": round12(om.inv_r2),
                        "r2_oracle": round12(om.r2),
                        "r2_paper": round12(r2_paper),
                        "p2": round12(om.p2),
                        "p": round12(aff.p),
                        "q": round12(aff.q),
                        "verdict_paper": vp.to_string(),
                        "verdict_oracle": vo.to_string(),
                    }),
                })
                .collect();
            let mut out = serde_json::to_string_pretty(&records).expect("serializable");
            out.push('\n');
            Ok(out)
        }
    }
}
