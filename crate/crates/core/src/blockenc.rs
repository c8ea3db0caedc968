//! Generic PREP/SELECT block-encoding model over LCU decompositions, with
//! the divide-and-conquer sum and product compositions.
//!
//! A block encoding is held abstractly as the pair (prep amplitudes on the
//! ancilla register, ancilla-indexed system unitaries). `verify_block`
//! does not shortcut through that abstraction: it completes PREP to a full
//! ancilla unitary, assembles SELECT as a dense matrix on ancilla ⊗ system,
//! contracts ⟨0|PREP†·SELECT·PREP|0⟩ and measures the deviation from the
//! target, exactly as the block-encoding definition reads.

use num_complex::Complex64;

use crate::densemat::DenseOperator;
use crate::lcu::LcuDecomposition;
use crate::{Error, Result};

/// Dense verification cap on ancilla ⊗ system dimension.
pub const VERIFY_DIM_GUARD: usize = 1 << 14;

/// PREP/SELECT pair encoding H/λ.
#[derive(Debug, Clone)]
pub struct BlockEncoding {
    /// Encoding constant λ (Σ|coefficients| at the leaves, combined per
    /// the composition rules above that).
    pub lambda: f64,
    /// Dimension of the encoded system register.
    pub system_dim: usize,
    /// Prep amplitudes on the ancilla register; real nonnegative because
    /// signs and phases are folded into the SELECT unitaries.
    pub prep_state: Vec<f64>,
    /// Ancilla-indexed unitaries; `None` means identity (unreachable
    /// branches with zero prep amplitude).
    pub select_terms: Vec<Option<DenseOperator>>,
}

impl BlockEncoding {
    pub fn ancilla_dim(&self) -> usize {
        self.prep_state.len()
    }

    pub fn ancilla_width(&self) -> u32 {
        self.ancilla_dim().trailing_zeros()
    }
}

/// Block encoding of `reconstruct(dec)/l1`: prep amplitudes √(|c_j|/λ),
/// signs folded into the unitaries.
pub fn encode(dec: &LcuDecomposition) -> Result<BlockEncoding> {
    if dec.l1 <= 0.0 {
        return Err(Error::InvalidParams("cannot block encode a zero-l1 decomposition".into()));
    }
    let m = dec.terms.len().next_power_of_two().max(1);
    let mut prep = vec![0.0; m];
    let mut select: Vec<Option<DenseOperator>> = vec![None; m];
    for (j, term) in dec.terms.iter().enumerate() {
        prep[j] = (term.coeff.abs() / dec.l1).sqrt();
        let mut u = term.unitary.dense(dec.target_dim);
        if term.coeff < 0.0 {
            u = u.scale_real(-1.0);
        }
        select[j] = Some(u);
    }
    Ok(BlockEncoding {
        lambda: dec.l1,
        system_dim: dec.target_dim,
        prep_state: prep,
        select_terms: select,
    })
}

/// Weighted sum Σ wᵢHᵢ with λ = Σ wᵢλᵢ.
///
/// The composed ancilla register is (outer selector) ⊗ ⊗ᵢ(ancillaᵢ): every
/// sub-encoding keeps its own prep register, as in the recursive PREP
/// definition.
pub fn compose_sum(parts: &[(f64, BlockEncoding)]) -> Result<BlockEncoding> {
    if parts.is_empty() {
        return Err(Error::InvalidParams("compose_sum of an empty list".into()));
    }
    let system_dim = parts[0].1.system_dim;
    if parts.iter().any(|(w, be)| *w <= 0.0 || be.system_dim != system_dim) {
        return Err(Error::InvalidParams(
            "compose_sum needs positive weights and equal system dims".into(),
        ));
    }
    let m_outer = parts.len().next_power_of_two();
    let lambda: f64 = parts.iter().map(|(w, be)| w * be.lambda).sum();
    let inner_dim: usize = parts.iter().map(|(_, be)| be.ancilla_dim()).product();
    let total = m_outer * inner_dim;
    let mut prep = vec![0.0; total];
    let mut select: Vec<Option<DenseOperator>> = vec![None; total];

    // Ancilla basis (i, j_1..j_M) flattened with the outer index slowest.
    for (i, (w, be)) in parts.iter().enumerate() {
        let head = (w * be.lambda / lambda).sqrt();
        for inner in 0..inner_dim {
            let js = unflatten(inner, parts);
            let mut amp = head;
            for (k, (_, bek)) in parts.iter().enumerate() {
                amp *= bek.prep_state[js[k]];
            }
            if amp == 0.0 {
                continue;
            }
            prep[i * inner_dim + inner] = amp;
            select[i * inner_dim + inner] = be.select_terms[js[i]].clone();
        }
    }
    Ok(BlockEncoding { lambda, system_dim, prep_state: prep, select_terms: select })
}

/// Sum of the same encoding applied with equal weights, keeping a single
/// prep register copy (the disjoint-subspace economy): ancilla width is
/// ⌈log₂ M⌉ plus one copy of the sub-encoding's width.
pub fn compose_sum_shared(be: &BlockEncoding, copies: usize) -> Result<BlockEncoding> {
    if copies == 0 {
        return Err(Error::InvalidParams("compose_sum_shared of zero copies".into()));
    }
    let m_outer = copies.next_power_of_two();
    let inner = be.ancilla_dim();
    let lambda = copies as f64 * be.lambda;
    let mut prep = vec![0.0; m_outer * inner];
    let mut select: Vec<Option<DenseOperator>> = vec![None; m_outer * inner];
    let head = (1.0 / copies as f64).sqrt();
    for i in 0..copies {
        for j in 0..inner {
            prep[i * inner + j] = head * be.prep_state[j];
            select[i * inner + j] = be.select_terms[j].clone();
        }
    }
    Ok(BlockEncoding {
        lambda,
        system_dim: be.system_dim,
        prep_state: prep,
        select_terms: select,
    })
}

/// Product H₁H₂⋯H_M with λ = ∏ λᵢ; ancilla register ⊗ᵢ(ancillaᵢ), SELECT
/// applies the product of the selected unitaries in list order.
pub fn compose_product(parts: &[BlockEncoding]) -> Result<BlockEncoding> {
    if parts.is_empty() {
        return Err(Error::InvalidParams("compose_product of an empty list".into()));
    }
    let system_dim = parts[0].system_dim;
    if parts.iter().any(|be| be.system_dim != system_dim) {
        return Err(Error::InvalidParams("compose_product needs equal system dims".into()));
    }
    let lambda: f64 = parts.iter().map(|be| be.lambda).product();
    let dims: Vec<usize> = parts.iter().map(|be| be.ancilla_dim()).collect();
    let total: usize = dims.iter().product();
    let mut prep = vec![0.0; total];
    let mut select: Vec<Option<DenseOperator>> = vec![None; total];
    for flat in 0..total {
        let js = unflatten_dims(flat, &dims);
        let mut amp = 1.0;
        for (k, be) in parts.iter().enumerate() {
            amp *= be.prep_state[js[k]];
        }
        if amp == 0.0 {
            continue;
        }
        let mut u = DenseOperator::identity(system_dim);
        for (k, be) in parts.iter().enumerate() {
            if let Some(t) = &be.select_terms[js[k]] {
                u = u.mul(t);
            }
        }
        prep[flat] = amp;
        select[flat] = Some(u);
    }
    Ok(BlockEncoding { lambda, system_dim, prep_state: prep, select_terms: select })
}

fn unflatten(flat: usize, parts: &[(f64, BlockEncoding)]) -> Vec<usize> {
    let dims: Vec<usize> = parts.iter().map(|(_, be)| be.ancilla_dim()).collect();
    unflatten_dims(flat, &dims)
}

fn unflatten_dims(mut flat: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = flat % dims[k];
        flat /= dims[k];
    }
    out
}

/// Householder completion of |S⟩ into a unitary with PREP|0⟩ = |S⟩.
fn prep_unitary(state: &[f64]) -> DenseOperator {
    let dim = state.len();
    let norm: f64 = state.iter().map(|a| a * a).sum::<f64>().sqrt();
    assert!((norm - 1.0).abs() < 1e-9, "prep state must be normalized, got {norm}");
    let mut w: Vec<f64> = state.to_vec();
    w[0] -= 1.0; // e0 − S
    let wn: f64 = w.iter().map(|a| a * a).sum::<f64>().sqrt();
    if wn < 1e-14 {
        return DenseOperator::identity(dim);
    }
    let mut mat = DenseOperator::identity(dim);
    for r in 0..dim {
        for c in 0..dim {
            let refl = -2.0 * (w[r] / wn) * (w[c] / wn);
            let cur = mat.get(r, c);
            mat.set(r, c, cur + Complex64::new(refl, 0.0));
        }
    }
    mat
}

/// ‖H − λ·⟨0|PREP†·SELECT·PREP|0⟩‖ with PREP and SELECT assembled as full
/// dense maps on ancilla ⊗ system.
pub fn verify_block(be: &BlockEncoding, target: &DenseOperator) -> Result<f64> {
    if be.system_dim != target.dim() {
        return Err(Error::DimMismatch(be.system_dim, target.dim()));
    }
    let anc = be.ancilla_dim();
    let n = be.system_dim;
    let full = anc * n;
    if full > VERIFY_DIM_GUARD {
        return Err(Error::Guard(format!(
            "block verification dim {full} exceeds {VERIFY_DIM_GUARD}"
        )));
    }
    let prep = prep_unitary(&be.prep_state).kron(&DenseOperator::identity(n));
    let mut select = DenseOperator::zeros(full);
    for j in 0..anc {
        let u = match &be.select_terms[j] {
            Some(u) => u.clone(),
            None => DenseOperator::identity(n),
        };
        for r in 0..n {
            for c in 0..n {
                select.set(j * n + r, j * n + c, u.get(r, c));
            }
        }
    }
    let whole = prep.adjoint().mul(&select).mul(&prep);
    // Top-left system block at ancilla |0⟩.
    let mut block = DenseOperator::zeros(n);
    for r in 0..n {
        for c in 0..n {
            block.set(r, c, whole.get(r, c));
        }
    }
    target
        .sub(&block.scale_real(be.lambda))
        .spectral_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lcu::{lcu_e_squared, lcu_u, LcuDecomposition, LcuTerm, LcuUnitary};
    use crate::operators::op_e2;

    fn dec_of(terms: Vec<LcuTerm>, dim: usize) -> LcuDecomposition {
        let l1 = terms.iter().map(|t| t.coeff.abs()).sum();
        LcuDecomposition { terms, l1, target_dim: dim }
    }

    #[test]
    fn encode_half_i_plus_half_x() {
        let dec = dec_of(
            vec![
                LcuTerm { coeff: 0.5, unitary: LcuUnitary::Identity },
                LcuTerm { coeff: 0.5, unitary: LcuUnitary::FourierConjugated(Box::new(LcuUnitary::ZString(vec![0]))) },
            ],
            2,
        );
        let be = encode(&dec).unwrap();
        assert!((be.lambda - 1.0).abs() < 1e-15);
        let target = dec.reconstruct().unwrap();
        assert!(verify_block(&be, &target).unwrap() < 1e-9);
    }

    #[test]
    fn single_unitary_encodes_exactly() {
        let dec = lcu_u(4).unwrap();
        let be = encode(&dec).unwrap();
        assert!((be.lambda - 1.0).abs() < 1e-15);
        let dev = verify_block(&be, &DenseOperator::shift(4, 1)).unwrap();
        assert!(dev < 1e-10);
    }

    #[test]
    fn e_squared_encoding() {
        let dec = lcu_e_squared(2).unwrap();
        let be = encode(&dec).unwrap();
        assert!((be.lambda - 4.0).abs() < 1e-12);
        assert!(verify_block(&be, &op_e2(2)).unwrap() < 1e-9);
    }

    #[test]
    fn wrong_lambda_shows_up_as_the_norm() {
        let dec = dec_of(vec![LcuTerm { coeff: 1.0, unitary: LcuUnitary::Identity }], 2);
        let mut be = encode(&dec).unwrap();
        be.lambda *= 2.0;
        let dev = verify_block(&be, &DenseOperator::identity(2)).unwrap();
        assert!((dev - 1.0).abs() < 1e-10);
    }

    #[test]
    fn sum_of_two_identities() {
        let dec = dec_of(vec![LcuTerm { coeff: 1.0, unitary: LcuUnitary::Identity }], 2);
        let be = encode(&dec).unwrap();
        let sum = compose_sum(&[(1.0, be.clone()), (1.0, be)]).unwrap();
        assert!((sum.lambda - 2.0).abs() < 1e-15);
        // Contraction (I + I)/2 = I.
        assert!(verify_block(&sum, &DenseOperator::identity(2).scale_real(2.0)).unwrap() < 1e-9);
    }

    #[test]
    fn weighted_sum_of_e2_and_u() {
        let e2 = encode(&lcu_e_squared(2).unwrap()).unwrap();
        let u = encode(&lcu_u(4).unwrap()).unwrap();
        let sum = compose_sum(&[(0.5, e2), (1.0, u)]).unwrap();
        // Encodes (E²/2 + U) with λ = 0.5·4 + 1 = 3.
        assert!((sum.lambda - 3.0).abs() < 1e-12);
        let target = op_e2(2).scale_real(0.5).add(&DenseOperator::shift(4, 1));
        assert!(verify_block(&sum, &target).unwrap() < 1e-9);
    }

    #[test]
    fn weight_scaling_leaves_contraction_unchanged() {
        let e2 = encode(&lcu_e_squared(2).unwrap()).unwrap();
        let u = encode(&lcu_u(4).unwrap()).unwrap();
        let s1 = compose_sum(&[(0.5, e2.clone()), (1.0, u.clone())]).unwrap();
        let s2 = compose_sum(&[(1.0, e2), (2.0, u)]).unwrap();
        assert!((s2.lambda - 2.0 * s1.lambda).abs() < 1e-12);
        let target = op_e2(2).add(&DenseOperator::shift(4, 1).scale_real(2.0));
        assert!(verify_block(&s2, &target).unwrap() < 1e-9);
    }

    #[test]
    fn product_of_x_with_itself_is_identity() {
        let x = dec_of(
            vec![LcuTerm { coeff: 1.0, unitary: LcuUnitary::FourierConjugated(Box::new(LcuUnitary::ZString(vec![0]))) }],
            2,
        );
        let be = encode(&x).unwrap();
        let prod = compose_product(&[be.clone(), be]).unwrap();
        assert!(verify_block(&prod, &DenseOperator::identity(2)).unwrap() < 1e-10);
    }

    #[test]
    fn product_e2_times_u() {
        let e2 = encode(&lcu_e_squared(2).unwrap()).unwrap();
        let u = encode(&lcu_u(4).unwrap()).unwrap();
        let prod = compose_product(&[e2, u]).unwrap();
        assert!((prod.lambda - 4.0).abs() < 1e-12);
        let target = op_e2(2).mul(&DenseOperator::shift(4, 1));
        assert!(verify_block(&prod, &target).unwrap() < 1e-9);
    }

    #[test]
    fn singleton_product_is_unchanged() {
        let e2 = encode(&lcu_e_squared(2).unwrap()).unwrap();
        let prod = compose_product(&[e2.clone()]).unwrap();
        assert_eq!(prod.ancilla_dim(), e2.ancilla_dim());
        assert!(verify_block(&prod, &op_e2(2)).unwrap() < 1e-9);
    }

    #[test]
    fn shared_prep_sum_reproduces_operator_with_small_ancilla() {
        let e2 = encode(&lcu_e_squared(2).unwrap()).unwrap();
        let inner_width = e2.ancilla_width();
        let sum = compose_sum_shared(&e2, 4).unwrap();
        assert_eq!(sum.ancilla_width(), 2 + inner_width);
        assert!(verify_block(&sum, &op_e2(2).scale_real(4.0)).unwrap() < 1e-9);
    }

    #[test]
    fn empty_compositions_rejected() {
        assert!(compose_sum(&[]).is_err());
        assert!(compose_product(&[]).is_err());
    }

    #[test]
    fn coefficient_scaling_moves_lambda_not_the_block() {
        // encode(α·dec) has λ scaled by α while the encoded ratio H/λ is
        // unchanged, so the deviation against α·H stays at zero.
        let dec = lcu_e_squared(2).unwrap();
        let scaled = LcuDecomposition {
            terms: dec
                .terms
                .iter()
                .map(|t| LcuTerm { coeff: 3.0 * t.coeff, unitary: t.unitary.clone() })
                .collect(),
            l1: 3.0 * dec.l1,
            target_dim: dec.target_dim,
        };
        let be = encode(&dec).unwrap();
        let be3 = encode(&scaled).unwrap();
        assert!((be3.lambda - 3.0 * be.lambda).abs() < 1e-12);
        assert!(verify_block(&be3, &op_e2(2).scale_real(3.0)).unwrap() < 1e-9);
        assert_eq!(be3.prep_state, be.prep_state);
    }
}
