//! Electric-field cutoff growth bounds: the long-time leakage bound Λ(t),
//! the per-link Hamiltonian norm χ that drives it, and the hydrogenic
//! heuristic estimate.

use serde::{Deserialize, Serialize};

use crate::lattice::SimulationParams;
use crate::{Error, Result};

use std::f64::consts::PI;

/// Inputs of the long-time leakage bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LeakageParams {
    /// Initial cutoff Λ₀.
    pub lambda0: f64,
    /// Step granularity δ; the bound's 1/(δ−1) forces δ ≥ 2.
    pub delta_step: u64,
    /// Per-link norm bound χ of the link-changing terms.
    pub chi: f64,
    /// Exponent r; zero for lattice gauge theories.
    #[serde(default)]
    pub r: f64,
    /// Evolution time.
    pub t: f64,
}

/// Λ(t) = Λ₀ + ⌈(1/(δ−1))((Λ₀^{1−r} + 2χ|t|(1−r)(δ−1))^{1/(1−r)} − Λ₀)⌉(δ−1).
///
/// At r = 0 the inner expression collapses to Λ₀ + 2χ|t|(δ−1), so the
/// bound grows linearly in t up to the ⌈·⌉(δ−1) quantization.
pub fn leakage_lambda(p: &LeakageParams) -> Result<f64> {
    if p.delta_step < 2 {
        return Err(Error::InvalidParams("delta_step must be >= 2".into()));
    }
    if p.lambda0 < 0.0 || p.chi < 0.0 {
        return Err(Error::InvalidParams("lambda0 and chi must be >= 0".into()));
    }
    if p.r >= 1.0 {
        return Err(Error::InvalidParams("r must be < 1".into()));
    }
    let dm1 = (p.delta_step - 1) as f64;
    let one_minus_r = 1.0 - p.r;
    let inner = (p.lambda0.powf(one_minus_r) + 2.0 * p.chi * p.t.abs() * one_minus_r * dm1)
        .powf(1.0 / one_minus_r);
    Ok(p.lambda0 + ((inner - p.lambda0) / dm1).ceil() * dm1)
}

/// χ = 4πη·ln2/(Δ²c) + 4π²/(Δ²c) + 6, the norm bound on the per-link
/// field-changing terms.
pub fn chi_bound(params: &SimulationParams) -> f64 {
    let d2 = params.delta * params.delta;
    4.0 * PI * params.eta as f64 * 2f64.ln() / (d2 * params.c)
        + 4.0 * PI * PI / (d2 * params.c)
        + 6.0
}

/// Companion scaling form Λ(t) ~ ηN^{2/3}t/Ω^{2/3} for cross-checks
/// against the exact bound.
pub fn leakage_scaling(params: &SimulationParams) -> f64 {
    params.eta as f64 * (params.n as f64).powf(2.0 / 3.0) * params.t
        / params.omega.powf(2.0 / 3.0)
}

/// Hydrogenic heuristic Λ̃ ≤ ηZ²_max/2: all η electrons in the 1s orbital
/// of the deepest well.
pub fn heuristic_lambda(eta: u64, z_max: f64) -> Result<f64> {
    if eta < 1 {
        return Err(Error::InvalidParams("eta must be >= 1".into()));
    }
    if z_max < 0.0 {
        return Err(Error::InvalidParams("Z_max must be >= 0".into()));
    }
    Ok(eta as f64 * z_max * z_max / 2.0)
}
