//! Interference subspace chains and the genie-aided dimension bound.
//!
//! In a bracketed (Region II) configuration, interference propagates
//! through a finite chain of nested subspaces whose dimensions obey
//! `|S_m| = (mult_m * |S_{m-1}| - |S_{m-2}|)^+` with the alternating
//! multiplier `mult_m = (G-1) * kbar(K, .)`; the chain starts from the
//! antenna counts and the first zero dimension occurs exactly at the
//! bracket index. A genie argument assigns each chain level a helper
//! subspace, and propagating the genie constraints backward through the
//! chain yields an upper bound on the per-user DoF `d` that is independent
//! of the closed-form bound formulas.
//!
//! # Examples
//!
//! ```
//! use ia_dof::config::SystemConfig;
//! use ia_dof::chain::{subspace_chain, genie_bound_recursive};
//! use ia_dof::rational::Rat;
//!
//! let cfg = SystemConfig::new(3, 1, 5, 7).unwrap();
//! let chain = subspace_chain(&cfg).unwrap();
//! let dims: Vec<String> = chain.dims.iter().map(|d| d.to_string()).collect();
//! assert_eq!(dims, ["7/1", "5/1", "3/1", "1/1", "0/1"]);
//! assert_eq!(chain.length, 3);
//! assert_eq!(genie_bound_recursive(&cfg).unwrap(), Rat::from_int(3));
//! ```

// Refusal values carry exact rationals plus the broken constraint, which
// puts the Err variants over clippy's size threshold; they only travel on
// terminal reporting paths.
#![allow(clippy::result_large_err)]

use num::bigint::BigInt;
use serde::Serialize;

use crate::bounds::{classify_region, Region};
use crate::config::SystemConfig;
use crate::rational::Rat;
use crate::sequence::{kbar, pq_sequence, Side};

/// Errors from the chain and genie computations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChainError {
    #[error("the subspace chain is non-terminating (Region I): {config} lies strictly between the sequence limits")]
    NonTerminatingRegionOne { config: SystemConfig },
    #[error("the subspace chain is non-terminating: {config} sits exactly on the common sequence limit (G-1)K/2; bounds remain defined but no finite chain exists")]
    NonTerminatingLimitRatio { config: SystemConfig },
    #[error("candidate DoF must be positive, got {d}")]
    NonPositiveD { d: Rat },
    #[error("candidate DoF {d} exceeds the genie bound: the {broken} constraint breaks first (margin {margin})")]
    ExceedsBound { d: Rat, broken: BrokenConstraint, margin: Rat },
}

/// Which genie constraint a too-large candidate DoF violates first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BrokenConstraint {
    /// The seed dimension `|G_{-1}|` (receive side `M - K d`, transmit side
    /// `N - d`) would be negative.
    #[serde(rename = "seed")]
    Seed,
    /// Terminal absorption: `mult_n * |G_{n-1}| <= |G_{n-2}|`.
    #[serde(rename = "terminal-absorption")]
    TerminalAbsorption,
    /// Terminal containment: `|G_{n-1}| <= |S_{n-1}|`.
    #[serde(rename = "terminal-containment")]
    TerminalContainment,
}

impl std::fmt::Display for BrokenConstraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BrokenConstraint::Seed => write!(f, "seed nonnegativity"),
            BrokenConstraint::TerminalAbsorption => write!(f, "terminal absorption"),
            BrokenConstraint::TerminalContainment => write!(f, "terminal containment"),
        }
    }
}

/// The multiplier `mult_m` of chain step `m` for the given bracket side.
///
/// Side A chains use `(G-1) * kbar(K, m-1)`, side B chains the index-shifted
/// `(G-1) * kbar(K, m)`.
fn chain_multiplier(cfg: &SystemConfig, side: Side, m: i64) -> u64 {
    match side {
        Side::A => (cfg.g - 1) * kbar(cfg.k, m - 1),
        Side::B => (cfg.g - 1) * kbar(cfg.k, m),
    }
}

/// Subspace chain of a bracketed configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    /// Which boundary family brackets the ratio.
    pub side: Side,
    /// `|S_{-1}|, |S_0|, ..., |S_n|`; the last entry is the first zero.
    pub dims: Vec<Rat>,
    /// Index `n` of the first zero dimension (equals the bracket index).
    pub length: i64,
    /// The genie DoF bound for this configuration.
    pub genie_bound: Rat,
    /// Maximal genie dimensions `|G_{-1}|, ..., |G_{n-1}|` evaluated at the
    /// critical candidate `d = genie_bound`.
    pub genie_dims: Vec<Rat>,
}

/// Computes the interference subspace chain.
///
/// Dimensions are produced by the positive-part recursion and checked
/// against the closed form (side A: `(q_m N - p_m M)^+`, side B:
/// `(p_m M - q_m N)^+`); the two must agree. Errors in Region I and at the
/// limit ratio, where no finite chain exists.
pub fn subspace_chain(cfg: &SystemConfig) -> Result<ChainReport, ChainError> {
    let region = classify_region(cfg);
    let (side, expected_len) = match region {
        Region::One => return Err(ChainError::NonTerminatingRegionOne { config: *cfg }),
        Region::TwoLimit => return Err(ChainError::NonTerminatingLimitRatio { config: *cfg }),
        Region::TwoA { index, .. } => (Side::A, index),
        Region::TwoB { index, .. } => (Side::B, index),
    };
    let (seed_prev, seed_cur) = match side {
        Side::A => (cfg.m, cfg.n),
        Side::B => (cfg.n, cfg.m),
    };
    let pairs = pq_sequence(cfg.g, cfg.k, side, expected_len);
    let mut dims = vec![Rat::from_int(seed_prev), Rat::from_int(seed_cur)];
    let mut length = None;
    for m in 1..=expected_len {
        let mult = Rat::from_int(chain_multiplier(cfg, side, m));
        let prev = dims[dims.len() - 2].clone();
        let cur = dims[dims.len() - 1].clone();
        let dim = (mult * cur - prev).positive_part();
        let pair = &pairs[(m + 1) as usize];
        let closed_form = match side {
            Side::A => {
                Rat::from_int(&pair.q * BigInt::from(cfg.n) - &pair.p * BigInt::from(cfg.m))
            }
            Side::B => {
                Rat::from_int(&pair.p * BigInt::from(cfg.m) - &pair.q * BigInt::from(cfg.n))
            }
        }
        .positive_part();
        assert_eq!(
            dim, closed_form,
            "chain recursion and closed form disagree at step {m} for {cfg}"
        );
        dims.push(dim.clone());
        if dim.is_zero() {
            length = Some(m);
            break;
        }
    }
    let length = length.expect("chain reaches zero exactly at the bracket index");
    assert_eq!(length, expected_len, "chain length must equal the bracket index for {cfg}");
    let genie_bound = genie_bound_recursive(cfg)?;
    let genie = genie_dims(cfg, &genie_bound)?;
    Ok(ChainReport { side, dims, length, genie_bound, genie_dims: genie.dims })
}

/// Backward-propagated genie coefficients `(gamma_0, epsilon_0)` for a
/// bracketed chain of length `n`.
///
/// The absorption coefficients start from the terminal constraints
/// (`gamma_{n-1} = 1 / mult_n`, `epsilon_{n-1} = 0`) and propagate through
/// `x_{m-1} = 1 / (mult_m - x_m)`.
fn backward_coefficients(cfg: &SystemConfig, side: Side, n: i64) -> (Rat, Rat) {
    let mut gamma = Rat::from_int(chain_multiplier(cfg, side, n)).recip();
    let mut epsilon = Rat::zero();
    for m in (1..n).rev() {
        let mult = Rat::from_int(chain_multiplier(cfg, side, m));
        gamma = (mult.clone() - gamma).recip();
        epsilon = (mult - epsilon).recip();
    }
    (gamma, epsilon)
}

/// The genie-aided upper bound on the per-user DoF, derived purely from the
/// chain recursion (no boundary-sequence closed forms).
///
/// Errors in Region I, where the chain does not terminate. At the limit
/// ratio the backward propagation is replaced by its fixed point
/// `2 / ((G-1)K)`.
pub fn genie_bound_recursive(cfg: &SystemConfig) -> Result<Rat, ChainError> {
    let region = classify_region(cfg);
    let k = Rat::from_int(cfg.k);
    let m_ant = Rat::from_int(cfg.m);
    let n_ant = Rat::from_int(cfg.n);
    match region {
        Region::One => Err(ChainError::NonTerminatingRegionOne { config: *cfg }),
        Region::TwoLimit => {
            // Fixed point of x = 1 / (mult - x) through one alternation
            // period; the discriminant is zero so both coefficients
            // collapse to 2 / ((G-1)K).
            let fix = Rat::new(2, (cfg.g - 1) * cfg.k);
            let bound_m = fix.clone() * m_ant / (Rat::one() + fix.clone() * k.clone());
            let bound_n = n_ant / (Rat::one() + fix * k);
            Ok(bound_m.min(bound_n))
        }
        Region::TwoA { index, .. } => {
            // gamma can be +inf when the bracket is the final one of a
            // finite boundary sequence; gamma*M / (1 + gamma*K) is written
            // as M / (1/gamma + K) so that the projective limit M/K falls
            // out of the same expression.
            let (gamma, epsilon) = backward_coefficients(cfg, Side::A, index);
            let bound_m = m_ant / (gamma.recip() + k.clone());
            let bound_n = n_ant / (Rat::one() + epsilon * k);
            Ok(bound_m.min(bound_n))
        }
        Region::TwoB { index, .. } => {
            let (gamma, epsilon) = backward_coefficients(cfg, Side::B, index);
            let bound_n = n_ant / (k.clone() * gamma.recip() + Rat::one());
            let bound_m = m_ant / (k + epsilon);
            Ok(bound_m.min(bound_n))
        }
    }
}

/// Genie dimensions for a candidate per-user DoF.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenieReport {
    /// The candidate DoF the dimensions are evaluated at.
    pub d: Rat,
    /// Maximal genie dimensions `|G_{-1}|, |G_0|, ..., |G_{n-1}|`.
    pub dims: Vec<Rat>,
    /// Slack of the terminal absorption constraint
    /// `|G_{n-2}| - mult_n * |G_{n-1}|` (zero when `d` is tight there).
    pub absorption_slack: Rat,
    /// Slack of the terminal containment constraint
    /// `|S_{n-1}| - |G_{n-1}|`.
    pub containment_slack: Rat,
}

/// Evaluates the maximal genie dimensions at candidate DoF `d`.
///
/// The interior constraints are satisfied with equality by the maximal
/// choice `|G_m| = (mult_m |G_{m-1}| - |G_{m-2}|)^+`; feasibility of `d` is
/// then decided by the two terminal constraints. Errors when `d` is not
/// positive or exceeds the genie bound (naming the first constraint to
/// break); errors in Region I and at the limit ratio like
/// [`subspace_chain`].
pub fn genie_dims(cfg: &SystemConfig, d: &Rat) -> Result<GenieReport, ChainError> {
    if !d.is_positive() {
        return Err(ChainError::NonPositiveD { d: d.clone() });
    }
    let region = classify_region(cfg);
    let (side, n) = match region {
        Region::One => return Err(ChainError::NonTerminatingRegionOne { config: *cfg }),
        Region::TwoLimit => return Err(ChainError::NonTerminatingLimitRatio { config: *cfg }),
        Region::TwoA { index, .. } => (Side::A, index),
        Region::TwoB { index, .. } => (Side::B, index),
    };
    let k = Rat::from_int(cfg.k);
    let (seed_prev, seed_cur) = match side {
        Side::A => (Rat::from_int(cfg.m) - k.clone() * d.clone(), d.clone()),
        Side::B => (Rat::from_int(cfg.n) - d.clone(), k.clone() * d.clone()),
    };
    if seed_prev.is_negative() {
        return Err(ChainError::ExceedsBound {
            d: d.clone(),
            broken: BrokenConstraint::Seed,
            margin: seed_prev,
        });
    }
    let mut dims = vec![seed_prev, seed_cur];
    for m in 1..n {
        let mult = Rat::from_int(chain_multiplier(cfg, side, m));
        let prev = dims[dims.len() - 2].clone();
        let cur = dims[dims.len() - 1].clone();
        dims.push((mult * cur - prev).positive_part());
    }
    let mult_n = Rat::from_int(chain_multiplier(cfg, side, n));
    let absorption_slack =
        dims[dims.len() - 2].clone() - mult_n * dims[dims.len() - 1].clone();
    let chain = {
        // Last nonzero chain dimension |S_{n-1}| in closed form.
        let pairs = pq_sequence(cfg.g, cfg.k, side, n - 1);
        let pair = pairs.last().expect("bracket index within sequence range");
        match side {
            Side::A => Rat::from_int(&pair.q * BigInt::from(cfg.n) - &pair.p * BigInt::from(cfg.m)),
            Side::B => Rat::from_int(&pair.p * BigInt::from(cfg.m) - &pair.q * BigInt::from(cfg.n)),
        }
    };
    let containment_slack = chain - dims[dims.len() - 1].clone();
    if absorption_slack.is_negative() {
        return Err(ChainError::ExceedsBound {
            d: d.clone(),
            broken: BrokenConstraint::TerminalAbsorption,
            margin: absorption_slack,
        });
    }
    if containment_slack.is_negative() {
        return Err(ChainError::ExceedsBound {
            d: d.clone(),
            broken: BrokenConstraint::TerminalContainment,
            margin: containment_slack,
        });
    }
    Ok(GenieReport { d: d.clone(), dims, absorption_slack, containment_slack })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::dof_quantity;

    fn cfg(g: u64, k: u64, m: u64, n: u64) -> SystemConfig {
        SystemConfig::new(g, k, m, n).unwrap()
    }

    #[test]
    fn chain_example_receive_limited() {
        let chain = subspace_chain(&cfg(3, 1, 5, 7)).unwrap();
        assert_eq!(chain.side, Side::B);
        assert_eq!(
            chain.dims,
            vec![
                Rat::from_int(7),
                Rat::from_int(5),
                Rat::from_int(3),
                Rat::from_int(1),
                Rat::zero()
            ]
        );
        assert_eq!(chain.length, 3);
        assert_eq!(chain.genie_bound, Rat::from_int(3));
    }

    #[test]
    fn chain_example_transmit_limited() {
        // For G=3, K=2 the side A chain dimensions follow
        // (4N - M)^+, (7N - 2M)^+, (24N - 7M)^+.
        let chain = subspace_chain(&cfg(3, 2, 7, 2)).unwrap();
        assert_eq!(chain.side, Side::A);
        assert_eq!(
            chain.dims,
            vec![Rat::from_int(7), Rat::from_int(2), Rat::from_int(1), Rat::zero()]
        );
        assert_eq!(chain.length, 2);
        let chain = subspace_chain(&cfg(3, 2, 24, 6)).unwrap();
        assert_eq!(chain.length, 1);
        assert_eq!(chain.dims, vec![Rat::from_int(24), Rat::from_int(6), Rat::zero()]);
    }

    #[test]
    fn chain_refuses_region_one_and_limit() {
        assert!(matches!(
            subspace_chain(&cfg(3, 2, 1, 1)),
            Err(ChainError::NonTerminatingRegionOne { .. })
        ));
        assert!(matches!(
            subspace_chain(&cfg(3, 1, 4, 4)),
            Err(ChainError::NonTerminatingLimitRatio { .. })
        ));
    }

    #[test]
    fn genie_bound_matches_quantity_bound() {
        for (g, k) in [(2u64, 1u64), (2, 2), (2, 4), (3, 1), (3, 2), (4, 3), (5, 4)] {
            for m in 1..=24 {
                for n in 1..=24 {
                    let c = cfg(g, k, m, n);
                    if let Some(dq) = dof_quantity(&c) {
                        assert_eq!(
                            genie_bound_recursive(&c).unwrap(),
                            dq,
                            "G={g} K={k} M={m} N={n}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn genie_dims_worked_example() {
        // G=3 K=2 M=7 N=2: bracket index 2, bound 14/11; at the bound the
        // genie needs |G_1| = 7/11.
        let c = cfg(3, 2, 7, 2);
        let d = Rat::new(14, 11);
        let report = genie_dims(&c, &d).unwrap();
        assert_eq!(report.dims, vec![Rat::new(49, 11), Rat::new(14, 11), Rat::new(7, 11)]);
        assert_eq!(report.absorption_slack, Rat::zero());
        assert!(report.containment_slack.is_positive());
    }

    #[test]
    fn genie_dims_rejects_above_bound() {
        let c = cfg(3, 2, 7, 2);
        let err = genie_dims(&c, &Rat::new(15, 11)).unwrap_err();
        assert!(matches!(
            err,
            ChainError::ExceedsBound { broken: BrokenConstraint::TerminalAbsorption, .. }
        ));
        let err = genie_dims(&c, &Rat::from_int(100)).unwrap_err();
        assert!(matches!(err, ChainError::ExceedsBound { broken: BrokenConstraint::Seed, .. }));
        assert!(matches!(
            genie_dims(&c, &Rat::zero()),
            Err(ChainError::NonPositiveD { .. })
        ));
    }

    #[test]
    fn genie_slack_tight_at_bound() {
        for (g, k, m, n) in [(3u64, 1u64, 5u64, 7u64), (3, 2, 7, 2), (3, 2, 11, 3), (2, 1, 3, 2)] {
            let c = cfg(g, k, m, n);
            let bound = genie_bound_recursive(&c).unwrap();
            let report = genie_dims(&c, &bound).unwrap();
            assert!(
                report.absorption_slack.is_zero() || report.containment_slack.is_zero(),
                "one terminal constraint must be tight at the bound for {c}"
            );
        }
    }
}
