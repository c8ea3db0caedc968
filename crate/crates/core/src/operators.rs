//! Exact dense realizations of the lattice operators and fragment
//! Hamiltonians on tiny truncated supports.
//!
//! These are the ground-truth oracles: every LCU decomposition, block
//! encoding and commutator bound elsewhere in the crate is checked against
//! matrices built here entry by entry. The full 3N-link Hilbert space is
//! never materialized; each fragment accepts only truncations whose
//! support fits under the dense-dimension guard.

use num_complex::Complex64;
use serde::Serialize;

use crate::densemat::{DenseOperator, DIM_GUARD};
use crate::lattice::SimulationParams;
use crate::lcu::{stencil_first, stencil_second};
use crate::{Error, Result};

/// One summand group of the Pauli-Fierz Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum FragmentId {
    H1pi,
    H2pi,
    H3pi,
    Hf1,
    Hf2,
    Hs,
    Hvee,
    Hvne,
}

impl FragmentId {
    pub const ALL: [FragmentId; 8] = [
        FragmentId::H1pi,
        FragmentId::H2pi,
        FragmentId::H3pi,
        FragmentId::Hf1,
        FragmentId::Hf2,
        FragmentId::Hs,
        FragmentId::Hvee,
        FragmentId::Hvne,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FragmentId::H1pi => "H1pi",
            FragmentId::H2pi => "H2pi",
            FragmentId::H3pi => "H3pi",
            FragmentId::Hf1 => "Hf1",
            FragmentId::Hf2 => "Hf2",
            FragmentId::Hs => "Hs",
            FragmentId::Hvee => "Hvee",
            FragmentId::Hvne => "Hvne",
        }
    }
}

/// Sub-register selection for a fragment oracle. Each variant names the
/// registers that get materialized; everything else is implicit identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Truncation {
    /// One 2Λ-dimensional link register (Hf1, H3pi per-term).
    SingleLink,
    /// One particle axis as a periodic ring of `sites` samples tensored
    /// with one link register (H2pi per-term).
    ParticleLink { sites: usize },
    /// One particle axis ring (H1pi per-term, one direction retained).
    ParticleRing { sites: usize },
    /// Two particle position registers on a side³ grid (Hvee).
    ParticlePair3d { side: usize },
    /// One particle position register on a side³ grid plus the stored
    /// nuclei (Hvne).
    SingleParticle3d { side: usize },
    /// Spin ⊗ the two links of one ∇_ν A_ξ curl half at a = 1 (Hs).
    SpinLinkPair,
    /// The four link registers of one plaquette (Hf2).
    PlaquetteLinks,
}

impl std::fmt::Display for Truncation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// E² = diag(ε²) for ε = −Λ..Λ−1 under b = ε + Λ.
pub fn op_e2(lambda: u64) -> DenseOperator {
    let values: Vec<f64> = (-(lambda as i64)..lambda as i64)
        .map(|eps| (eps * eps) as f64)
        .collect();
    DenseOperator::diag_real(&values)
}

/// Raising operator U = Σ_ε |ε+1⟩⟨ε| with periodic wrap, i.e. the cyclic
/// shift |b⟩ ↦ |b+1⟩.
pub fn op_u(lambda: u64) -> DenseOperator {
    DenseOperator::shift(2 * lambda as usize, 1)
}

/// Vector potential A = (1/iΔ)·F†·log(C)·F with the principal branch
/// log(C) = diag(0, 2πi/d, …); satisfies exp(iΔA) = U.
pub fn op_a(lambda: u64, delta: f64) -> DenseOperator {
    let d = 2 * lambda as usize;
    let f = DenseOperator::fourier(d);
    let diag: Vec<f64> = (0..d)
        .map(|j| 2.0 * std::f64::consts::PI * j as f64 / (d as f64 * delta))
        .collect();
    f.adjoint().mul(&DenseOperator::diag_real(&diag)).mul(&f)
}

/// One plaquette pair W + W† on four link registers,
/// W = U ⊗ U ⊗ U† ⊗ U† in the link order (q,μ), (q+1_μ,ν), (q+1_ν,μ), (q,ν).
pub fn op_w2_pair(lambda: u64) -> Result<DenseOperator> {
    let d = 2 * lambda as usize;
    if d * d * d * d > DIM_GUARD {
        return Err(Error::Guard(format!(
            "plaquette register dim {} exceeds {}",
            d * d * d * d,
            DIM_GUARD
        )));
    }
    let u = op_u(lambda);
    let ud = u.adjoint();
    let w = u.kron(&u).kron(&ud).kron(&ud);
    Ok(w.add(&w.adjoint()))
}

/// i∇ on a periodic ring: (i/h) Σ_k d′_k T_k, Hermitian by antisymmetry.
pub fn op_i_grad(a: u32, h: f64, ring: usize) -> DenseOperator {
    let d = stencil_first(a);
    let mut acc = DenseOperator::zeros(ring);
    for k in -(a as i64)..=a as i64 {
        if k == 0 {
            continue;
        }
        let t = crate::lcu::LcuUnitary::Adder(k).dense(ring);
        acc = acc.add(&t.scale(Complex64::new(0.0, d[(k + a as i64) as usize] / h)));
    }
    acc
}

/// ∇² on a periodic ring: (1/h²) Σ_k d_k T_k.
pub fn op_laplacian(a: u32, h: f64, ring: usize) -> DenseOperator {
    let d = stencil_second(a);
    let mut acc = DenseOperator::zeros(ring);
    for k in -(a as i64)..=a as i64 {
        let t = crate::lcu::LcuUnitary::Adder(k).dense(ring);
        acc = acc.add(&t.scale_real(d[(k + a as i64) as usize] / (h * h)));
    }
    acc
}

pub(crate) fn pauli(axis: usize) -> DenseOperator {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    match axis {
        0 => DenseOperator::from_rows(2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]),
        1 => DenseOperator::from_rows(2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]),
        _ => DenseOperator::diag_real(&[1.0, -1.0]),
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim > DIM_GUARD {
        return Err(Error::Guard(format!("fragment support dim {dim} exceeds {DIM_GUARD}")));
    }
    Ok(())
}

/// Dense realization of one fragment restricted to the named registers,
/// with the coefficients of the assembled Hamiltonian (1/2, 1/c, 1/2c²,
/// 1/Δ) attached.
pub fn op_fragment(
    id: FragmentId,
    params: &SimulationParams,
    truncation: &Truncation,
) -> Result<DenseOperator> {
    params.require_binary()?;
    let d = params.d as usize;
    match (id, truncation) {
        (FragmentId::Hf1, Truncation::SingleLink) => {
            check_dim(d)?;
            Ok(op_e2(params.lambda).scale_real(0.5))
        }
        (FragmentId::H3pi, Truncation::SingleLink) => {
            check_dim(d)?;
            let a = op_a(params.lambda, params.delta);
            Ok(a.mul(&a).scale_real(0.5 / (params.c * params.c)))
        }
        (FragmentId::H1pi, Truncation::ParticleRing { sites }) => {
            check_dim(*sites)?;
            Ok(op_laplacian(params.a, params.h, *sites).scale_real(-0.5))
        }
        (FragmentId::H2pi, Truncation::ParticleLink { sites }) => {
            check_dim(sites * d)?;
            let grad = op_i_grad(params.a, params.h, *sites);
            let a = op_a(params.lambda, params.delta);
            Ok(grad.kron(&a).scale_real(1.0 / params.c))
        }
        (FragmentId::Hf2, Truncation::PlaquetteLinks) => {
            Ok(op_w2_pair(params.lambda)?.scale_real(-1.0))
        }
        (FragmentId::Hs, Truncation::SpinLinkPair) => {
            // −(1/c)·σ_μ ⊗ ∇_ν A_ξ restricted to the a = 1 curl half: the
            // two retained links are (q+ê_ν, ξ) and (q−ê_ν, ξ) with
            // weights d′_{+1}/h and d′_{−1}/h.
            check_dim(2 * d * d)?;
            let dp = stencil_first(1);
            let a_op = op_a(params.lambda, params.delta);
            let id_link = DenseOperator::identity(d);
            let grad_a = a_op
                .kron(&id_link)
                .scale_real(dp[2] / params.h)
                .add(&id_link.kron(&a_op).scale_real(dp[0] / params.h));
            Ok(pauli(0).kron(&grad_a).scale_real(-1.0 / params.c))
        }
        (FragmentId::Hvee, Truncation::ParticlePair3d { side }) => {
            let n = side * side * side;
            check_dim(n * n)?;
            let mut values = vec![0.0; n * n];
            for (i, qi) in grid_points(*side).enumerate() {
                for (j, qj) in grid_points(*side).enumerate() {
                    if i == j {
                        continue; // coincident points are excluded from the sum
                    }
                    let dist = euclid(qi, qj, *side);
                    values[i * n + j] = 1.0 / (params.delta * params.delta * dist);
                }
            }
            Ok(DenseOperator::diag_real(&values))
        }
        (FragmentId::Hvne, Truncation::SingleParticle3d { side }) => {
            let n = side * side * side;
            check_dim(n)?;
            let mut values = vec![0.0; n];
            for (i, q) in grid_points(*side).enumerate() {
                let mut v = 0.0;
                for (kappa, &z) in params.z.iter().enumerate() {
                    // Nuclei sit at distinct grid sites, walked in flat order.
                    let r = index_to_point(kappa % n, *side);
                    let dist = euclid(q, r, *side);
                    if dist > 0.0 {
                        v -= z / (params.delta * params.delta * dist);
                    }
                }
                values[i] = v;
            }
            Ok(DenseOperator::diag_real(&values))
        }
        _ => Err(Error::UnsupportedTruncation {
            fragment: id.name(),
            truncation: format!("{truncation}"),
        }),
    }
}

fn grid_points(side: usize) -> impl Iterator<Item = (i64, i64, i64)> {
    let s = side as i64;
    (0..s).flat_map(move |x| (0..s).flat_map(move |y| (0..s).map(move |z| (x, y, z))))
}

fn index_to_point(index: usize, side: usize) -> (i64, i64, i64) {
    let s = side;
    let z = index % s;
    let y = (index / s) % s;
    let x = index / (s * s);
    (x as i64, y as i64, z as i64)
}

/// Minimum-image Euclidean distance in lattice units.
fn euclid(q: (i64, i64, i64), r: (i64, i64, i64), side: usize) -> f64 {
    let s = side as i64;
    let wrap = |d: i64| {
        let m = d.rem_euclid(s);
        m.min(s - m)
    };
    let dx = wrap(q.0 - r.0);
    let dy = wrap(q.1 - r.1);
    let dz = wrap(q.2 - r.2);
    ((dx * dx + dy * dy + dz * dz) as f64).sqrt()
}

/// Brute-force Σ_{q≠r} 1/d_qr over ordered site pairs of an N-site cube
/// with spacing Δ (open boundaries, as in the bound's derivation).
pub fn coulomb_sum(n: u64, delta: f64) -> Result<f64> {
    let side = match (1u64..=13).find(|s| s * s * s == n) {
        Some(s) => s as i64,
        None => {
            return Err(Error::InvalidParams(format!(
                "N = {n} must be a perfect cube at most 13^3"
            )))
        }
    };
    let mut sum = 0.0;
    let pts: Vec<(i64, i64, i64)> = (0..side)
        .flat_map(|x| (0..side).flat_map(move |y| (0..side).map(move |z| (x, y, z))))
        .collect();
    for (i, q) in pts.iter().enumerate() {
        for (j, r) in pts.iter().enumerate() {
            if i == j {
                continue;
            }
            let dd = ((q.0 - r.0).pow(2) + (q.1 - r.1).pow(2) + (q.2 - r.2).pow(2)) as f64;
            sum += 1.0 / (delta * dd.sqrt());
        }
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::RawParams;
    use crate::TOL_MAT;

    fn params(lambda: u64) -> SimulationParams {
        SimulationParams::derive(&RawParams {
            eta: 2,
            n: 8,
            l: 2.0,
            lambda,
            a: 1,
            h: None,
            c: crate::lattice::SPEED_OF_LIGHT,
            k: 1,
            z: vec![2.0],
            t: 1.0,
            eps: 1e-3,
        })
        .unwrap()
    }

    #[test]
    fn e2_lambda2_diagonal() {
        let e2 = op_e2(2);
        assert!(e2.max_abs_diff(&DenseOperator::diag_real(&[4., 1., 0., 1.])) == 0.0);
    }

    #[test]
    fn u_raises_the_electric_index() {
        // U|ε=−2⟩ = |ε=−1⟩ under b = ε+Λ, i.e. U|b=0⟩ = |b=1⟩.
        let u = op_u(2);
        assert!((u.get(1, 0).re - 1.0).abs() < 1e-15);
        assert!(u.is_unitary(TOL_MAT));
    }

    #[test]
    fn exp_of_a_gives_u() {
        for lambda in [2u64, 4, 8] {
            for delta in [0.3, 1.0] {
                let a = op_a(lambda, delta);
                assert!(a.is_hermitian(1e-9), "A Hermitian, Λ={lambda}");
                let exp = a.exp_i_hermitian(delta).unwrap();
                assert!(
                    exp.max_abs_diff(&op_u(lambda)) < 1e-9,
                    "exp(iΔA) = U, Λ={lambda}, Δ={delta}"
                );
            }
        }
    }

    #[test]
    fn plaquette_pair_is_hermitian_and_norm_at_most_two() {
        let w = op_w2_pair(2).unwrap();
        assert!(w.is_hermitian(1e-12));
        assert!(w.spectral_norm().unwrap() <= 2.0 + 1e-9);
        assert!(w.commutator(&w).unwrap().max_abs_entry() < 1e-12);
    }

    #[test]
    fn hf1_single_link() {
        let p = params(2);
        let h = op_fragment(FragmentId::Hf1, &p, &Truncation::SingleLink).unwrap();
        assert!(h.max_abs_diff(&DenseOperator::diag_real(&[2.0, 0.5, 0.0, 0.5])) < TOL_MAT);
    }

    #[test]
    fn hvee_pair_entries() {
        let p = params(2);
        let h = op_fragment(FragmentId::Hvee, &p, &Truncation::ParticlePair3d { side: 2 }).unwrap();
        assert!(h.is_hermitian(0.0));
        // Nearest-neighbour pair at lattice distance 1: entry 1/Δ².
        let idx = 1; // q = (0,0,0), r = (0,0,1)
        let expect = 1.0 / (p.delta * p.delta);
        assert!((h.get(idx, idx).re - expect).abs() < 1e-12);
    }

    #[test]
    fn hs_truncation_is_hermitian_with_bounded_norm() {
        let p = params(2);
        let h = op_fragment(FragmentId::Hs, &p, &Truncation::SpinLinkPair).unwrap();
        assert!(h.is_hermitian(1e-10));
        // Per-term budget on this support: (1/c)·(Σ|d′|/h)·ℓ1(A).
        let l1_a = 2.0 * std::f64::consts::PI * (p.d as f64 - 1.0) / (p.d as f64 * p.delta);
        let budget = (1.0 / p.c) * (1.0 / p.h) * l1_a;
        assert!(h.spectral_norm().unwrap() <= budget + 1e-9);
    }

    #[test]
    fn fragments_are_hermitian() {
        let p = params(2);
        let cases: Vec<(FragmentId, Truncation)> = vec![
            (FragmentId::Hf1, Truncation::SingleLink),
            (FragmentId::H3pi, Truncation::SingleLink),
            (FragmentId::H1pi, Truncation::ParticleRing { sites: 8 }),
            (FragmentId::H2pi, Truncation::ParticleLink { sites: 4 }),
            (FragmentId::Hf2, Truncation::PlaquetteLinks),
            (FragmentId::Hs, Truncation::SpinLinkPair),
            (FragmentId::Hvee, Truncation::ParticlePair3d { side: 2 }),
            (FragmentId::Hvne, Truncation::SingleParticle3d { side: 2 }),
        ];
        for (id, tr) in cases {
            let h = op_fragment(id, &p, &tr).unwrap();
            assert!(h.is_hermitian(1e-10), "{}", id.name());
        }
    }

    #[test]
    fn unsupported_truncation_rejected() {
        let p = params(2);
        assert!(op_fragment(FragmentId::Hf2, &p, &Truncation::SingleLink).is_err());
    }

    #[test]
    fn coulomb_sum_2x2x2() {
        let got = coulomb_sum(8, 1.0).unwrap();
        let expect = 24.0 + 24.0 / 2f64.sqrt() + 8.0 / 3f64.sqrt();
        assert!((got - expect).abs() < 1e-9);
        assert!(got <= 2.0 * 8f64.powf(5.0 / 3.0));
    }

    #[test]
    fn coulomb_sum_single_point() {
        assert_eq!(coulomb_sum(1, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn coulomb_sum_3x3x3_bound() {
        let got = coulomb_sum(27, 1.0).unwrap();
        assert!(got <= 2.0 * 27f64.powf(5.0 / 3.0));
    }
}
