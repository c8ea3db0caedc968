//! Classical simulation of the 1/√‖v‖ state-preparation procedure.
//!
//! The prepared register holds signed lattice displacements v grouped
//! into nested boxes B_μ, μ = 2..n_p, where box μ holds the v whose
//! largest |coordinate| lies in [2^{μ−2}, 2^{μ−1}). Preparation walks
//! four stages, each of which can fail:
//!
//!   I.   box register in amplitudes ∝ 2^μ;
//!   II.  coordinates in uniform superposition (minus-zero → failure);
//!   III. inner-box test (point belongs to a smaller box → failure);
//!   IV.  inequality test (2^{μ−2}M)² > m²‖v‖² over a uniform m register.
//!
//! Everything is enumerated exactly: the per-v squared amplitude is
//! 3·⌈M·2^{μ−2}/‖v‖⌉ / (M·(4^{n_p+1}−16)·2^μ) and the bookkeeping below
//! reproduces it branch by branch, m-counts in closed form.

use serde::Serialize;

use crate::{Error, Result};

/// Resolution parameters of the preparation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PrepConfig {
    /// Bits per signed coordinate; boxes run μ = 2..n_p.
    pub n_p: u32,
    /// Inequality-test resolution, a power of two.
    pub m: u64,
}

/// Exact enumeration outcome.
#[derive(Debug, Clone, Serialize)]
pub struct PrepOutcome {
    /// Squared amplitude per surviving displacement, keyed by (vx, vy, vz).
    #[serde(skip)]
    pub amplitudes: Vec<((i64, i64, i64), f64)>,
    /// Total probability routed to any failure flag.
    pub failure_prob: f64,
    /// Σ_v |amp²(v) − ideal(v)| against the 1/‖v‖ profile.
    pub deviation_sum: f64,
    /// Largest relative error among pairwise amplitude ratios versus
    /// inverse-norm ratios, sampled over axis-aligned pairs.
    pub max_ratio_error: f64,
    /// Probability mass per box μ (index 0 ↔ μ = 2).
    pub per_box_mass: Vec<f64>,
}

impl PrepConfig {
    fn validate(&self) -> Result<()> {
        if self.n_p < 3 {
            return Err(Error::InvalidParams("n_p must be >= 3".into()));
        }
        if self.m < 4 || !self.m.is_power_of_two() {
            return Err(Error::InvalidParams("M must be a power of two >= 4".into()));
        }
        // (μ, v) branches; the m register is counted in closed form.
        let branches: u128 = (2..=self.n_p).map(|mu| 1u128 << (3 * mu)).sum();
        if branches > 1 << 24 {
            return Err(Error::Guard(format!("{branches} branches exceed 2^24")));
        }
        Ok(())
    }

    /// Normalization 4^{n_p+1} − 16 of the box register.
    fn box_norm(&self) -> f64 {
        4f64.powi(self.n_p as i32 + 1) - 16.0
    }
}

/// Walk every (μ, coordinate) branch and account each one as success or
/// failure; success amplitudes follow the ceiling formula.
pub fn simulate_prep(cfg: &PrepConfig) -> Result<PrepOutcome> {
    cfg.validate()?;
    let norm = cfg.box_norm();
    let m = cfg.m as f64;
    let mut amplitudes = Vec::new();
    let mut failure = 0.0;
    let mut deviation = 0.0;
    let mut per_box = Vec::new();

    for mu in 2..=cfg.n_p {
        // Branch amplitude before any test: the box amplitude 4^μ/norm
        // split uniformly over 2^{3μ} coordinate states and M values of m.
        let branch_amp2 = 3.0 * 2f64.powi(-(mu as i32)) / (m * norm);
        let mut box_mass = 0.0;
        let half = 1i64 << (mu - 1); // coordinate bitstrings per sign block
        let coords = 1u64 << mu;
        let decode = |bits: u64| -> (i64, bool) {
            // Sign-magnitude: top bit sign, lower μ−1 bits magnitude.
            let magnitude = (bits as i64) & (half - 1);
            let negative = bits & (half as u64) != 0;
            (if negative { -magnitude } else { magnitude }, negative && magnitude == 0)
        };
        for bx in 0..coords {
            let (vx, mz_x) = decode(bx);
            for by in 0..coords {
                let (vy, mz_y) = decode(by);
                for bz in 0..coords {
                    let (vz, mz_z) = decode(bz);
                    if mz_x || mz_y || mz_z {
                        // Minus zero: all M branches fail.
                        failure += branch_amp2 * m;
                        continue;
                    }
                    let maxc = vx.abs().max(vy.abs()).max(vz.abs());
                    if maxc < 1 << (mu - 2) {
                        // Inside the next smaller box (v = 0 at μ = 2).
                        failure += branch_amp2 * m;
                        continue;
                    }
                    let norm_v = ((vx * vx + vy * vy + vz * vz) as f64).sqrt();
                    // #{m ∈ [0, M): (2^{μ−2}M)² > m²‖v‖²} = ⌈M·2^{μ−2}/‖v‖⌉.
                    let x = m * 2f64.powi(mu as i32 - 2) / norm_v;
                    let q = x.ceil().min(m);
                    let amp2 = branch_amp2 * q;
                    failure += branch_amp2 * (m - q);
                    box_mass += amp2;
                    let ideal = 3.0 / (4.0 * norm * norm_v);
                    deviation += (amp2 - ideal).abs();
                    amplitudes.push(((vx, vy, vz), amp2));
                }
            }
        }
        per_box.push(box_mass);
    }

    // Ratio convergence against the inverse-norm profile, sampled on the
    // positive x-axis points (1,0,0), (2,0,0), ….
    let axis = |k: i64| {
        amplitudes
            .iter()
            .find(|((x, y, z), _)| *x == k && *y == 0 && *z == 0)
            .map(|(_, a)| *a)
    };
    let mut max_ratio_error: f64 = 0.0;
    let top = (1i64 << (cfg.n_p - 1)) - 1;
    for k in 2..=top.min(8) {
        if let (Some(a1), Some(ak)) = (axis(1), axis(k)) {
            // amp²(k)/amp²(1) should converge to 1/k.
            let err = (ak / a1 - 1.0 / k as f64).abs() * k as f64;
            max_ratio_error = max_ratio_error.max(err);
        }
    }

    Ok(PrepOutcome {
        amplitudes,
        failure_prob: failure,
        deviation_sum: deviation,
        max_ratio_error,
        per_box_mass: per_box,
    })
}

/// Itemized gate estimate per preparation stage, unit constants; the
/// minus-zero flag counts are exact.
#[derive(Debug, Clone, Serialize)]
pub struct PrepGates {
    /// Stage I controlled-H ladder: n_p controlled-H, each 2H + 2T + 1CNOT.
    pub ladder_t: u128,
    pub ladder_cnot: u128,
    pub ladder_h: u128,
    /// Stage II minus-zero flags: 2(4n_p−8) T and 2(4n_p−7) CNOT.
    pub flag_t: u128,
    pub flag_cnot: u128,
    pub flag_ancillae: u128,
    /// Stage III box membership test.
    pub box_test: u128,
    /// Stage IV inequality test, n_p² + n_p + n_M·n_p + n_M (zero when
    /// M = 1: with a single m value the test always passes).
    pub inequality: u128,
    pub total: u128,
}

pub fn prep_gate_estimate(cfg: &PrepConfig) -> Result<PrepGates> {
    if cfg.n_p < 3 {
        return Err(Error::InvalidParams("n_p must be >= 3".into()));
    }
    if !cfg.m.is_power_of_two() {
        return Err(Error::InvalidParams("M must be a power of two".into()));
    }
    let np = cfg.n_p as u128;
    let n_m = cfg.m.trailing_zeros() as u128;
    let ladder_t = 2 * np;
    let ladder_cnot = np;
    let ladder_h = 2 * np + 3 * np; // ladder plus the coordinate H layer
    let flag_t = 2 * (4 * np - 8);
    let flag_cnot = 2 * (4 * np - 7);
    let flag_ancillae = np - 1;
    let box_test = np;
    let inequality = if n_m == 0 { 0 } else { np * np + np + n_m * np + n_m };
    Ok(PrepGates {
        ladder_t,
        ladder_cnot,
        ladder_h,
        flag_t,
        flag_cnot,
        flag_ancillae,
        box_test,
        inequality,
        total: ladder_t + ladder_cnot + ladder_h + flag_t + flag_cnot + box_test + inequality,
    })
}
