//! Split-and-merge counting calculus for groups of multi-controlled-X
//! gates.
//!
//! A SELECT over M unitaries needs M compute–uncompute pairs of
//! C^{log₂M}X. Splitting the log₂M controls into n groups of widths w_i
//! trades T gates for ancillae: the circuit becomes Σ_i 2^{w_i} pairs of
//! C^{w_i}X plus M pairs of C^nX, with Σ_i 2^{w_i} extra ancillae. With
//! the standard 4k−4 T-count (4k−3 CNOTs) per C^kX pair this gives
//!
//!   𝒯_n = Σ_i 2^{w_i}(4w_i − 4) + M(4n − 4).
//!
//! All realizable-partition counts are exact integers; the equal-split
//! savings formula is also exposed as a real-valued function of n so the
//! optimum can be located across group counts that do not divide log₂M.

use serde::Serialize;

use crate::{Error, Result};

/// A split of the log₂M control qubits into groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    /// Number of controlled unitaries after padding to a power of two.
    pub m: u128,
    /// M as requested; differs from `m` only when padding applied.
    pub requested_m: u128,
    /// Group widths w_i ≥ 1 with Σ w_i = log₂M.
    pub widths: Vec<u32>,
}

impl Partition {
    /// Equal split into `n` groups; `n` must divide log₂M.
    pub fn equal(m: u128, n: u32) -> Result<Self> {
        let (padded, log2m) = pad_to_power_of_two(m)?;
        if n == 0 || !log2m.is_multiple_of(n) {
            return Err(Error::InvalidParams(format!(
                "equal split needs n | log2(M): n = {n}, log2(M) = {log2m}"
            )));
        }
        Ok(Partition {
            m: padded,
            requested_m: m,
            widths: vec![log2m / n; n as usize],
        })
    }

    pub fn from_widths(m: u128, widths: Vec<u32>) -> Result<Self> {
        let (padded, log2m) = pad_to_power_of_two(m)?;
        if widths.is_empty() || widths.contains(&0) {
            return Err(Error::InvalidParams("group widths must be positive".into()));
        }
        if widths.iter().sum::<u32>() != log2m {
            return Err(Error::InvalidParams(format!(
                "group widths must sum to log2(M) = {log2m}"
            )));
        }
        Ok(Partition { m: padded, requested_m: m, widths })
    }

    pub fn group_count(&self) -> u32 {
        self.widths.len() as u32
    }

    pub fn log2m(&self) -> u32 {
        self.m.trailing_zeros()
    }

    /// Extra ancillae Σ_i 2^{w_i}.
    pub fn ancillae(&self) -> u128 {
        self.widths.iter().map(|&w| 1u128 << w).sum()
    }

    pub fn padded(&self) -> bool {
        self.m != self.requested_m
    }
}

fn pad_to_power_of_two(m: u128) -> Result<(u128, u32)> {
    if m < 2 {
        return Err(Error::InvalidParams("M must be >= 2".into()));
    }
    let padded = m.next_power_of_two();
    Ok((padded, padded.trailing_zeros()))
}

/// T-count per compute–uncompute pair of C^kX; zero for plain CNOTs.
fn t_per_pair(k: u32) -> u128 {
    if k <= 1 {
        0
    } else {
        4 * k as u128 - 4
    }
}

fn cnot_per_pair(k: u32) -> u128 {
    if k == 0 {
        0
    } else if k == 1 {
        1
    } else {
        4 * k as u128 - 3
    }
}

/// 𝒯_n = Σ_i 2^{w_i}(4w_i − 4) + M(4n − 4).
pub fn t_count(p: &Partition) -> u128 {
    let n = p.group_count();
    if n == 1 {
        // No merge stage: M pairs of C^{log₂M}X directly.
        return p.m * t_per_pair(p.log2m());
    }
    let split: u128 = p.widths.iter().map(|&w| (1u128 << w) * t_per_pair(w)).sum();
    split + p.m * t_per_pair(n)
}

/// CNOT companion with −3 in place of −4 in each pair.
pub fn cnot_count(p: &Partition) -> u128 {
    let n = p.group_count();
    if n == 1 {
        return p.m * cnot_per_pair(p.log2m());
    }
    let split: u128 = p.widths.iter().map(|&w| (1u128 << w) * cnot_per_pair(w)).sum();
    split + p.m * cnot_per_pair(n)
}

/// Exact equal-split savings 𝒯₁ − 𝒯_n = 4(M − M^{1/n})(log₂M − n);
/// requires n | log₂M so that M^{1/n} is integral.
pub fn t_savings_equal(m: u128, n: u32) -> Result<u128> {
    let (padded, log2m) = pad_to_power_of_two(m)?;
    if n == 0 || !log2m.is_multiple_of(n) {
        return Err(Error::InvalidParams(format!(
            "equal split needs n | log2(M): n = {n}, log2(M) = {log2m}"
        )));
    }
    let root = 1u128 << (log2m / n);
    Ok(4 * (padded - root) * (log2m - n) as u128)
}

/// The same closed form over arbitrary integer n (M^{1/n} need not be an
/// integer); this is what the savings-vs-n curve plots.
pub fn t_savings_equal_real(m: u128, n: u32) -> f64 {
    let log2m = (m as f64).log2();
    let root = (m as f64).powf(1.0 / n as f64);
    4.0 * (m as f64 - root) * (log2m - n as f64)
}

/// Group count maximizing the equal-split savings curve over all integer
/// n in [1, log₂M]; ties resolve to the smaller n.
pub fn optimal_equal_split(m: u128) -> Result<u32> {
    let (_, log2m) = pad_to_power_of_two(m)?;
    let mut best = 1u32;
    let mut best_val = t_savings_equal_real(m, 1);
    for n in 2..=log2m {
        let v = t_savings_equal_real(m, n);
        if v > best_val + 1e-9 {
            best = n;
            best_val = v;
        }
    }
    Ok(best)
}

/// Best realizable equal split (n | log₂M) by T-count, ties to smaller n.
/// Returns the partition together with its exact savings over n = 1.
pub fn optimize_partition(m: u128) -> Result<(Partition, u128)> {
    let (_, log2m) = pad_to_power_of_two(m)?;
    let mut best: Option<(Partition, u128)> = None;
    for n in 1..=log2m {
        if !log2m.is_multiple_of(n) {
            continue;
        }
        let p = Partition::equal(m, n)?;
        let t = t_count(&p);
        match &best {
            Some((bp, _)) if t_count(bp) <= t => {}
            _ => {
                let savings = t_savings_equal(m, n)?;
                best = Some((p, savings));
            }
        }
    }
    Ok(best.expect("n = 1 always realizable"))
}

/// Divided-vs-undivided SELECT tallies for a list of sub-Hamiltonian
/// unitary counts.
#[derive(Debug, Clone, Serialize)]
pub struct SelectCost {
    pub divided_t: u128,
    pub divided_cnot: u128,
    pub undivided_t: u128,
    pub undivided_cnot: u128,
    /// Printed continuous difference 4Σ_iM_i log((M_i+1)/ΣM_j) + 4MlogM − 4M.
    pub t_difference: f64,
    /// Same with −3M.
    pub cnot_difference: f64,
}

fn ceil_log2(v: u128) -> u32 {
    128 - (v - 1).leading_zeros()
}

/// SELECT cost of Theorem-style division: every sub-Hamiltonian keeps its
/// own selector register (gates get one extra control), versus one flat
/// SELECT over M′ = ΣM_i unitaries. Integer tallies use widths
/// ⌈log₂(M_i+1)⌉ and ⌈log₂(M+1)⌉ for the divided stages and ⌈log₂M′⌉ for
/// the flat one.
pub fn select_cost(m_list: &[u128]) -> Result<SelectCost> {
    if m_list.is_empty() || m_list.contains(&0) {
        return Err(Error::InvalidParams("m_list must be nonempty positive counts".into()));
    }
    let m = m_list.len() as u128;
    let m_total: u128 = m_list.iter().sum();

    let sub_t: u128 = m_list.iter().map(|&mi| mi * t_per_pair(ceil_log2(mi + 1))).sum();
    let sub_c: u128 = m_list.iter().map(|&mi| mi * cnot_per_pair(ceil_log2(mi + 1))).sum();
    let outer_width = if m == 1 { 1 } else { ceil_log2(m + 1) };
    let divided_t = sub_t + m * t_per_pair(outer_width);
    let divided_cnot = sub_c + m * cnot_per_pair(outer_width);

    let flat_width = ceil_log2(m_total).max(1);
    let undivided_t = m_total * t_per_pair(flat_width);
    let undivided_cnot = m_total * cnot_per_pair(flat_width);

    let mf = m as f64;
    let sum_f = m_total as f64;
    let log_term: f64 = m_list
        .iter()
        .map(|&mi| 4.0 * mi as f64 * ((mi as f64 + 1.0) / sum_f).log2())
        .sum();
    let t_difference = log_term + 4.0 * mf * mf.log2() - 4.0 * mf;
    let cnot_difference = log_term + 4.0 * mf * mf.log2() - 3.0 * mf;

    Ok(SelectCost {
        divided_t,
        divided_cnot,
        undivided_t,
        undivided_cnot,
        t_difference,
        cnot_difference,
    })
}

/// One row of the savings sweep for a fixed M.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub m: u128,
    pub n: u32,
    pub t_count: u128,
    pub savings: u128,
    pub ancillae: u128,
}

/// Exact rows over all realizable equal splits of M.
pub fn sweep(m: u128) -> Result<Vec<SweepRow>> {
    let (_, log2m) = pad_to_power_of_two(m)?;
    let mut rows = Vec::new();
    for n in 1..=log2m {
        if !log2m.is_multiple_of(n) {
            continue;
        }
        let p = Partition::equal(m, n)?;
        rows.push(SweepRow {
            m: p.m,
            n,
            t_count: t_count(&p),
            savings: t_savings_equal(m, n)?,
            ancillae: p.ancillae(),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_select_m16() {
        let p = Partition::equal(16, 1).unwrap();
        assert_eq!(t_count(&p), 192);
    }

    #[test]
    fn equal_two_split_m16() {
        let p = Partition::equal(16, 2).unwrap();
        assert_eq!(t_count(&p), 96);
        assert_eq!(t_savings_equal(16, 2).unwrap(), 96);
        assert_eq!(p.ancillae(), 8);
    }

    #[test]
    fn single_control_costs_no_t() {
        let p = Partition::equal(2, 1).unwrap();
        assert_eq!(t_count(&p), 0);
    }

    #[test]
    fn savings_endpoints_vanish() {
        assert_eq!(t_savings_equal(16, 1).unwrap(), 0);
        assert_eq!(t_savings_equal(16, 4).unwrap(), 0);
    }

    #[test]
    fn savings_positive_strictly_inside() {
        for log2m in 3u32..=12 {
            let m = 1u128 << log2m;
            for n in 2..log2m {
                if log2m % n == 0 {
                    assert!(t_savings_equal(m, n).unwrap() > 0, "M=2^{log2m}, n={n}");
                }
                assert!(t_savings_equal_real(m, n) > 0.0, "real form, M=2^{log2m}, n={n}");
            }
        }
    }

    #[test]
    fn closed_form_savings_m1024() {
        assert_eq!(t_savings_equal(1 << 10, 2).unwrap(), 31744);
    }

    #[test]
    fn savings_match_count_difference() {
        for n in [1u32, 2, 4, 8] {
            let flat = t_count(&Partition::equal(256, 1).unwrap());
            let split = t_count(&Partition::equal(256, n).unwrap());
            assert_eq!(flat - split, t_savings_equal(256, n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn optimum_is_two_groups_for_m256() {
        let (p, savings) = optimize_partition(256).unwrap();
        assert_eq!(p.group_count(), 2);
        assert_eq!(savings, t_savings_equal(256, 2).unwrap());
    }

    #[test]
    fn m4_endpoints_tie_and_report_one_group() {
        let (p, savings) = optimize_partition(4).unwrap();
        assert_eq!(p.group_count(), 1);
        assert_eq!(savings, 0);
    }

    #[test]
    fn formula_optimum_is_two_for_all_tested_m() {
        for log2m in 4u32..=12 {
            assert_eq!(optimal_equal_split(1 << log2m).unwrap(), 2, "M = 2^{log2m}");
        }
    }

    #[test]
    fn non_power_of_two_m_pads_up() {
        let p = Partition::equal(12, 1).unwrap();
        assert_eq!(p.m, 16);
        assert!(p.padded());
    }

    #[test]
    fn select_cost_pair_of_fours() {
        let sc = select_cost(&[4, 4]).unwrap();
        assert_eq!(sc.divided_t, 72);
        assert_eq!(sc.undivided_t, 64);
        assert!(sc.t_difference < 0.0);
    }

    #[test]
    fn select_cost_single_sub_hamiltonian_has_no_overhead() {
        // One group degenerates to the flat cost plus a zero outer stage.
        let sc = select_cost(&[8]).unwrap();
        assert_eq!(sc.divided_t, 8 * (4 * 4 - 4));
        assert_eq!(sc.undivided_t, 8 * (4 * 3 - 4));
    }

    #[test]
    fn select_cost_four_pairs() {
        let sc = select_cost(&[2, 2, 2, 2]).unwrap();
        // M_i terms: 2·(4·2−4) = 8 each; outer: 4·(4·3−4) = 32.
        assert_eq!(sc.divided_t, 4 * 8 + 32);
        assert_eq!(sc.undivided_t, 8 * (4 * 3 - 4));
    }

    #[test]
    fn t_and_cnot_linear_in_m_for_half_width_groups() {
        // Σ_i 2^{w_i}·w_i ≤ K'·M with K' = 1 whenever w_i ≤ log₂M/2.
        let mut worst: f64 = 0.0;
        for log2m in 2u32..=20 {
            let m = 1u128 << log2m;
            for n in 2..=log2m {
                if !log2m.is_multiple_of(n) {
                    continue;
                }
                let p = Partition::equal(m, n).unwrap();
                let work: u128 = p.widths.iter().map(|&w| (1u128 << w) * w as u128).sum();
                worst = worst.max(work as f64 / m as f64);
            }
        }
        assert!(worst <= 1.0 + 1e-12, "K' = 1 exceeded: {worst}");
    }
}
