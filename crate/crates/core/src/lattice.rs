//! Discretized simulation geometry and the global parameter record.
//!
//! A cubic box of side `L` (Bohr) is split into `N` sites, `N^(1/3)` per
//! Cartesian direction, with periodic boundary conditions. Each site owns
//! three links (one per direction); each link carries a 2Λ-dimensional
//! electric register. Grid points are flattened row-major with z fastest:
//! `index = (qx * side + qy) * side + qz`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Speed of light in atomic units (CODATA inverse fine-structure constant).
pub const SPEED_OF_LIGHT: f64 = 137.035999084;

fn default_c() -> f64 {
    SPEED_OF_LIGHT
}

/// Raw input record, exactly the JSON field names accepted by the CLI.
/// Unknown fields are rejected.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawParams {
    pub eta: u64,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "Lambda")]
    pub lambda: u64,
    pub a: u32,
    /// Finite-difference spacing; defaults to the lattice spacing Δ.
    #[serde(default)]
    pub h: Option<f64>,
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(rename = "K")]
    pub k: u64,
    #[serde(rename = "Z")]
    pub z: Vec<f64>,
    pub t: f64,
    pub eps: f64,
}

/// Full parameter record with every derived quantity populated.
#[derive(Debug, Clone, Serialize)]
pub struct SimulationParams {
    pub eta: u64,
    pub n: u64,
    /// Sites per side, `n = side³`.
    pub side: u64,
    pub l: f64,
    pub lambda: u64,
    pub a: u32,
    pub h: f64,
    pub c: f64,
    pub k: u64,
    pub z: Vec<f64>,
    pub t: f64,
    pub eps: f64,
    /// Lattice spacing Δ = L / N^(1/3).
    pub delta: f64,
    /// Box volume Ω = L³.
    pub omega: f64,
    /// Link-space dimension d = 2Λ (asymmetric cutoff, power-of-two size).
    pub d: u64,
    /// Σ_κ |Z_κ|.
    pub z_sum: f64,
    /// η_s = η + Z_sum.
    pub eta_s: f64,
    /// True when both Λ and the side length are powers of two, i.e. the
    /// binary register encodings used by the operator oracles are exact.
    pub binary_exact: bool,
}

impl SimulationParams {
    /// Validate a raw record and populate all derived quantities.
    ///
    /// `N` must be a perfect cube and Λ ≥ 2. Power-of-two Λ and side are
    /// required only by the operator/LCU constructors (which need binary
    /// register encodings); the cost models accept general values, so the
    /// reference instances of the sweeps (Λ = 100, side = 100) pass
    /// through here with `binary_exact = false`.
    pub fn derive(raw: &RawParams) -> Result<Self> {
        if raw.eta < 1 {
            return Err(Error::InvalidParams("eta must be >= 1".into()));
        }
        if raw.l <= 0.0 || !raw.l.is_finite() {
            return Err(Error::InvalidParams("L must be positive".into()));
        }
        if raw.lambda < 2 {
            return Err(Error::InvalidParams("Lambda must be >= 2".into()));
        }
        if raw.a < 1 {
            return Err(Error::InvalidParams("a must be >= 1".into()));
        }
        if raw.t < 0.0 || !raw.t.is_finite() {
            return Err(Error::InvalidParams("t must be >= 0".into()));
        }
        if raw.eps <= 0.0 || !raw.eps.is_finite() {
            return Err(Error::InvalidParams("eps must be > 0".into()));
        }
        if raw.c <= 0.0 {
            return Err(Error::InvalidParams("c must be > 0".into()));
        }
        if raw.z.len() != raw.k as usize {
            return Err(Error::InvalidParams(format!(
                "Z has {} entries but K = {}",
                raw.z.len(),
                raw.k
            )));
        }
        let side = integer_cube_root(raw.n).ok_or_else(|| {
            Error::InvalidParams(format!("N = {} is not a perfect cube", raw.n))
        })?;
        let delta = raw.l / side as f64;
        let h = raw.h.unwrap_or(delta);
        if h <= 0.0 {
            return Err(Error::InvalidParams("h must be positive".into()));
        }
        let z_sum: f64 = raw.z.iter().map(|z| z.abs()).sum();
        Ok(SimulationParams {
            eta: raw.eta,
            n: raw.n,
            side,
            l: raw.l,
            lambda: raw.lambda,
            a: raw.a,
            h,
            c: raw.c,
            k: raw.k,
            z: raw.z.clone(),
            t: raw.t,
            eps: raw.eps,
            delta,
            omega: raw.l.powi(3),
            d: 2 * raw.lambda,
            z_sum,
            eta_s: raw.eta as f64 + z_sum,
            binary_exact: raw.lambda.is_power_of_two() && side.is_power_of_two(),
        })
    }

    /// Reject parameter sets whose registers have no exact binary encoding.
    /// The LCU and dense-oracle paths require this.
    pub fn require_binary(&self) -> Result<()> {
        if !self.binary_exact {
            return Err(Error::InvalidParams(format!(
                "Lambda = {} and side = {} must both be powers of two for \
                 operator construction",
                self.lambda, self.side
            )));
        }
        Ok(())
    }

    /// Δ · N^(1/3) as an exact rational, for the spacing identity check.
    pub fn delta_times_side_rational(&self) -> BigRational {
        let l = BigRational::from_float(self.l).expect("finite L");
        let side = BigRational::from_integer(BigInt::from(self.side));
        // Δ is defined as the exact quotient L/side; Δ·side therefore
        // reproduces L identically in rational arithmetic.
        (l / side.clone()) * side
    }

    /// 3N links, one per site per direction.
    pub fn link_count(&self) -> u64 {
        3 * self.n
    }

    pub fn site(&self, qx: u64, qy: u64, qz: u64) -> GridPoint {
        debug_assert!(qx < self.side && qy < self.side && qz < self.side);
        GridPoint { qx, qy, qz }
    }

    pub fn sites(&self) -> impl Iterator<Item = GridPoint> + '_ {
        let s = self.side;
        (0..s).flat_map(move |qx| (0..s).flat_map(move |qy| (0..s).map(move |qz| GridPoint { qx, qy, qz })))
    }

    /// Neon attosecond-photoemission reference instance of the sweeps:
    /// η = Z_sum = 10, Ω^(1/3) = 30 Bohr, N = 10⁶, Λ = 100, t = 83,
    /// ε = 10⁻³.
    pub fn neon_reference() -> Self {
        let raw = RawParams {
            eta: 10,
            n: 1_000_000,
            l: 30.0,
            lambda: 100,
            a: 1,
            h: None,
            c: SPEED_OF_LIGHT,
            k: 1,
            z: vec![10.0],
            t: 83.0,
            eps: 1e-3,
        };
        Self::derive(&raw).expect("reference instance is valid")
    }

    /// Same record with one field replaced (sweeps vary one variable at a
    /// time; Δ and the other derived fields follow automatically).
    pub fn with_n(&self, n: u64) -> Result<Self> {
        let mut raw = self.to_raw();
        raw.n = n;
        Self::derive(&raw)
    }

    pub fn with_lambda(&self, lambda: u64) -> Result<Self> {
        let mut raw = self.to_raw();
        raw.lambda = lambda;
        Self::derive(&raw)
    }

    pub fn to_raw(&self) -> RawParams {
        RawParams {
            eta: self.eta,
            n: self.n,
            l: self.l,
            lambda: self.lambda,
            a: self.a,
            h: Some(self.h),
            c: self.c,
            k: self.k,
            z: self.z.clone(),
            t: self.t,
            eps: self.eps,
        }
    }
}

fn integer_cube_root(n: u64) -> Option<u64> {
    if n == 0 {
        return None;
    }
    let mut r = (n as f64).cbrt().round() as u64;
    // Guard against rounding at the boundary.
    while r > 1 && r * r * r > n {
        r -= 1;
    }
    while (r + 1).checked_pow(3).is_some_and(|c| c <= n) {
        r += 1;
    }
    (r * r * r == n).then_some(r)
}

/// Grid point with coordinates in [0, side).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GridPoint {
    pub qx: u64,
    pub qy: u64,
    pub qz: u64,
}

/// Cartesian direction of a link or stencil axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

impl GridPoint {
    /// Neighbour `q + k·ê_axis`, wrapped periodically.
    pub fn step(&self, axis: Axis, k: i64, side: u64) -> GridPoint {
        let wrap = |v: u64| ((v as i64 + k).rem_euclid(side as i64)) as u64;
        match axis {
            Axis::X => GridPoint { qx: wrap(self.qx), ..*self },
            Axis::Y => GridPoint { qy: wrap(self.qy), ..*self },
            Axis::Z => GridPoint { qz: wrap(self.qz), ..*self },
        }
    }

    /// Row-major flattening with z fastest.
    pub fn flat_index(&self, side: u64) -> u64 {
        (self.qx * side + self.qy) * side + self.qz
    }
}

/// A directed link: the edge from `q` to `q + 1_axis`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct LinkIndex {
    pub q: GridPoint,
    pub axis: Axis,
}

/// The four ordered links of one square face:
/// (q,μ), (q+1_μ,ν), (q+1_ν,μ), (q,ν) with μ ≠ ν.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Plaquette {
    pub links: [LinkIndex; 4],
}

impl Plaquette {
    pub fn new(q: GridPoint, mu: Axis, nu: Axis, side: u64) -> Self {
        assert_ne!(mu, nu, "plaquette axes must differ");
        Plaquette {
            links: [
                LinkIndex { q, axis: mu },
                LinkIndex { q: q.step(mu, 1, side), axis: nu },
                LinkIndex { q: q.step(nu, 1, side), axis: mu },
                LinkIndex { q, axis: nu },
            ],
        }
    }
}

/// All 3N plaquettes: one per site per unordered axis pair {μ < ν}.
pub fn plaquettes(params: &SimulationParams) -> Vec<Plaquette> {
    let pairs = [(Axis::X, Axis::Y), (Axis::X, Axis::Z), (Axis::Y, Axis::Z)];
    params
        .sites()
        .flat_map(|q| pairs.iter().map(move |&(mu, nu)| Plaquette::new(q, mu, nu, params.side)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn raw(n: u64, l: f64, lambda: u64) -> RawParams {
        RawParams {
            eta: 2,
            n,
            l,
            lambda,
            a: 1,
            h: None,
            c: SPEED_OF_LIGHT,
            k: 0,
            z: vec![],
            t: 1.0,
            eps: 1e-3,
        }
    }

    #[test]
    fn neon_spacing() {
        let p = SimulationParams::derive(&raw(1_000_000, 30.0, 2)).unwrap();
        assert_eq!(p.side, 100);
        assert!((p.delta - 0.3).abs() < 1e-15);
    }

    #[test]
    fn single_cell() {
        let p = SimulationParams::derive(&raw(1, 1.0, 2)).unwrap();
        assert!((p.delta - 1.0).abs() == 0.0);
        assert_eq!(p.link_count(), 3);
    }

    #[test]
    fn link_register_width() {
        let p = SimulationParams::derive(&raw(8, 1.0, 2)).unwrap();
        assert_eq!(p.d, 4);
        assert_eq!((p.d as f64).log2() as u32, 2);
    }

    #[test]
    fn rejects_non_cubic_n() {
        assert!(SimulationParams::derive(&raw(10, 1.0, 2)).is_err());
    }

    #[test]
    fn non_power_of_two_lambda_fails_binary_gate() {
        let p = SimulationParams::derive(&raw(8, 1.0, 100)).unwrap();
        assert!(!p.binary_exact);
        assert!(p.require_binary().is_err());
    }

    #[test]
    fn spacing_identity_is_exact_in_rationals() {
        let p = SimulationParams::derive(&raw(1_000_000, 30.0, 2)).unwrap();
        let lhs = p.delta_times_side_rational();
        let l = BigRational::from_float(30.0).unwrap();
        assert!((lhs - l).is_zero());
    }

    #[test]
    fn plaquette_count_is_3n() {
        let p = SimulationParams::derive(&raw(8, 2.0, 2)).unwrap();
        assert_eq!(plaquettes(&p).len(), 24);
        let p1 = SimulationParams::derive(&raw(1, 2.0, 2)).unwrap();
        assert_eq!(plaquettes(&p1).len(), 3);
    }

    #[test]
    fn single_cell_plaquette_wraps_onto_itself() {
        let p = SimulationParams::derive(&raw(1, 2.0, 2)).unwrap();
        for plq in plaquettes(&p) {
            // On a 1-site lattice the wrap identifies links pairwise.
            assert_eq!(plq.links[0].q, plq.links[1].q);
            assert_eq!(plq.links[0].axis, plq.links[2].axis);
        }
    }

    #[test]
    fn plaquette_links_form_a_face() {
        let p = SimulationParams::derive(&raw(64, 4.0, 2)).unwrap();
        let q = p.site(1, 2, 3);
        let plq = Plaquette::new(q, Axis::X, Axis::Y, p.side);
        // Opposite sides are parallel, adjacent sides share a corner.
        assert_eq!(plq.links[0].axis, plq.links[2].axis);
        assert_eq!(plq.links[1].axis, plq.links[3].axis);
        assert_eq!(plq.links[1].q, q.step(Axis::X, 1, p.side));
        assert_eq!(plq.links[2].q, q.step(Axis::Y, 1, p.side));
    }

    #[test]
    fn periodic_step_returns_after_side_moves() {
        let p = SimulationParams::derive(&raw(64, 4.0, 2)).unwrap();
        let q = p.site(3, 0, 2);
        let mut r = q;
        for _ in 0..p.side {
            r = r.step(Axis::Y, 1, p.side);
        }
        assert_eq!(q, r);
    }

    #[test]
    fn unknown_json_fields_rejected() {
        let text = r#"{"eta":1,"N":8,"L":1.0,"Lambda":2,"a":1,"K":0,"Z":[],"t":0.0,"eps":0.001,"bogus":1}"#;
        assert!(serde_json::from_str::<RawParams>(text).is_err());
    }
}
