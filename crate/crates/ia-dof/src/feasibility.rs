//! Feasibility verdicts for a requested per-user stream count and the
//! minimal spatial extension that makes the closed-form design realizable.
//!
//! In Region II, linear feasibility of `d` streams per user is decided by
//! the pairwise antenna condition `max(p*M, q*N) >= (p*K + q)*d` over the
//! boundary pairs of both sides up to one past the bracket index; the
//! verdict coincides exactly with `d <= dof_quantity`. In Region I the
//! proper condition `M + N >= (G*K + 1)*d` is necessary and conjectured
//! sufficient, so a passing configuration is reported as
//! conjectured-feasible rather than feasible. Asymptotic feasibility in
//! Region I is decided exactly by `M*N >= (M + K*N)*d`.
//!
//! # Examples
//!
//! ```
//! use ia_dof::config::SystemConfig;
//! use ia_dof::feasibility::{feasible_linear, LinearFeasibility};
//! use ia_dof::rational::Rat;
//!
//! let cfg = SystemConfig::new(3, 1, 5, 7).unwrap();
//! let verdict = feasible_linear(&cfg, &Rat::from_int(3)).unwrap();
//! assert_eq!(verdict.linear, LinearFeasibility::Feasible);
//! ```

use num::bigint::BigInt;
use serde::Serialize;

use crate::bounds::{classify_region, dof_quantity, Region};
use crate::config::SystemConfig;
use crate::design::{DesignError, DesignPlan};
use crate::rational::{int_times, Rat};
use crate::sequence::{pq_sequence, Side};

/// Errors from the feasibility queries.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FeasibilityError {
    #[error("requested stream count must be positive, got {d}")]
    NonPositiveD { d: Rat },
    #[error("no finite spatial extension for {config}: {reason}")]
    NoFiniteExtension { config: SystemConfig, reason: String },
}

/// Verdict on linear (finite-dimensional) IA feasibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LinearFeasibility {
    #[serde(rename = "feasible")]
    Feasible,
    #[serde(rename = "infeasible")]
    Infeasible,
    /// Region I with the proper condition satisfied: conjectured but not
    /// proven feasible.
    #[serde(rename = "conjectured-feasible")]
    ConjecturedFeasible,
}

/// Verdict on asymptotic (infinite-extension) IA feasibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AsymptoticFeasibility {
    #[serde(rename = "feasible")]
    Feasible,
    #[serde(rename = "infeasible")]
    Infeasible,
}

/// A boundary pair whose antenna condition the requested `d` violates.
///
/// `side` and `index` are `None` for the limit-ratio configuration, whose
/// single binding pair is the reduced common limit rather than a member of
/// either sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BindingPair {
    pub side: Option<Side>,
    pub index: Option<i64>,
    pub p: BigInt,
    pub q: BigInt,
}

/// Complete feasibility verdict for one `(config, d)` query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeasibilityVerdict {
    pub linear: LinearFeasibility,
    pub asymptotic: AsymptoticFeasibility,
    /// First violated pair; present exactly when the configuration is in
    /// Region II and `linear` is infeasible.
    pub binding_pair: Option<BindingPair>,
    /// Whether the proper condition `M + N >= (G*K + 1)*d` holds.
    pub proper_holds: bool,
}

/// `max(p*M, q*N) >= (p*K + q)*d` for one pair.
fn pair_condition_holds(cfg: &SystemConfig, p: &BigInt, q: &BigInt, d: &Rat) -> bool {
    let lhs = Rat::from_int((p * BigInt::from(cfg.m)).max(q * BigInt::from(cfg.n)));
    let weight = p * BigInt::from(cfg.k) + q;
    lhs >= int_times(&weight, d)
}

/// Pairs to test in Region II: both sides, indices 0 through the bracket
/// index plus one (clipped to what a finite sequence provides).
fn candidate_pairs(cfg: &SystemConfig, region_side: Side, index: i64) -> Vec<(Side, i64, BigInt, BigInt)> {
    let mut out = Vec::new();
    let other = match region_side {
        Side::A => Side::B,
        Side::B => Side::A,
    };
    for side in [region_side, other] {
        for pair in pq_sequence(cfg.g, cfg.k, side, index + 1) {
            if pair.n >= 0 {
                out.push((side, pair.n, pair.p, pair.q));
            }
        }
    }
    out
}

/// The proper condition `M + N >= (G*K + 1)*d`.
pub fn proper_holds(cfg: &SystemConfig, d: &Rat) -> bool {
    Rat::from_int(cfg.m + cfg.n) >= int_times(&BigInt::from(cfg.users() + 1), d)
}

/// Asymptotic IA feasibility of `d` streams per user.
///
/// Region I: exactly `M*N >= (M + K*N)*d`. Region II: the same pairwise
/// condition as the linear verdict.
pub fn feasible_asymptotic(
    cfg: &SystemConfig,
    d: &Rat,
) -> Result<AsymptoticFeasibility, FeasibilityError> {
    if !d.is_positive() {
        return Err(FeasibilityError::NonPositiveD { d: d.clone() });
    }
    let feasible = match classify_region(cfg) {
        Region::One => {
            let lhs = Rat::from_int(BigInt::from(cfg.m) * BigInt::from(cfg.n));
            let weight = BigInt::from(cfg.m) + BigInt::from(cfg.k) * BigInt::from(cfg.n);
            lhs >= int_times(&weight, d)
        }
        _ => {
            let bound = dof_quantity(cfg).expect("Region II has a quantity bound");
            *d <= bound
        }
    };
    Ok(if feasible { AsymptoticFeasibility::Feasible } else { AsymptoticFeasibility::Infeasible })
}

/// Linear IA feasibility of `d` streams per user, with the asymptotic
/// verdict and proper flag alongside.
///
/// The pairwise scan starts on the bracket's own side in ascending index
/// order, so the reported binding pair is deterministic.
pub fn feasible_linear(
    cfg: &SystemConfig,
    d: &Rat,
) -> Result<FeasibilityVerdict, FeasibilityError> {
    if !d.is_positive() {
        return Err(FeasibilityError::NonPositiveD { d: d.clone() });
    }
    let proper = proper_holds(cfg, d);
    let asymptotic = feasible_asymptotic(cfg, d)?;
    let region = classify_region(cfg);
    let (linear, binding_pair) = match region {
        Region::One => {
            let verdict = if proper {
                LinearFeasibility::ConjecturedFeasible
            } else {
                LinearFeasibility::Infeasible
            };
            (verdict, None)
        }
        Region::TwoLimit => {
            // The single binding constraint sits at the common limit
            // (G-1)K/2, reduced to lowest terms; p*M = q*N there, so the
            // pair condition is exactly d <= dof_quantity.
            let num = BigInt::from((cfg.g - 1) * cfg.k);
            let two = BigInt::from(2u64);
            let gcd = num::Integer::gcd(&num, &two);
            let (p, q) = (&two / &gcd, num / &gcd);
            if pair_condition_holds(cfg, &p, &q, d) {
                (LinearFeasibility::Feasible, None)
            } else {
                (
                    LinearFeasibility::Infeasible,
                    Some(BindingPair { side: None, index: None, p, q }),
                )
            }
        }
        Region::TwoA { index, .. } | Region::TwoB { index, .. } => {
            let side = match region {
                Region::TwoA { .. } => Side::A,
                _ => Side::B,
            };
            let mut binding = None;
            for (side, n, p, q) in candidate_pairs(cfg, side, index) {
                if !pair_condition_holds(cfg, &p, &q, d) {
                    binding = Some(BindingPair { side: Some(side), index: Some(n), p, q });
                    break;
                }
            }
            match binding {
                None => (LinearFeasibility::Feasible, None),
                Some(pair) => (LinearFeasibility::Infeasible, Some(pair)),
            }
        }
    };
    if region.is_region_two() {
        debug_assert_eq!(
            linear == LinearFeasibility::Feasible,
            *d <= dof_quantity(cfg).expect("Region II has a quantity bound"),
            "pairwise scan must agree with the closed-form bound for {cfg}, d={d}"
        );
    }
    Ok(FeasibilityVerdict { linear, asymptotic, binding_pair, proper_holds: proper })
}

/// Smallest positive integer `m` such that scaling the antennas by `m`
/// makes the per-user bound an integer and every null-space column count
/// of the closed-form design an integer.
///
/// Errors in Region I, where no finite extension reaches the bound.
pub fn min_spatial_extension(cfg: &SystemConfig) -> Result<u64, FeasibilityError> {
    let plan = match DesignPlan::new(cfg) {
        Ok(plan) => Some(plan),
        Err(DesignError::LimitRatio { .. }) => None,
        Err(err @ DesignError::RegionOne { .. }) => {
            return Err(FeasibilityError::NoFiniteExtension {
                config: *cfg,
                reason: err.to_string(),
            });
        }
    };
    let d = dof_quantity(cfg).expect("bracketed region has a quantity bound");
    let denom = d.denom().expect("quantity bound is finite").clone();
    // With d = a/b in lowest terms the extension must be a multiple of b;
    // the aligned design additionally needs its divisor to divide K*d.
    let divisor = match plan.and_then(|p| p.aligned) {
        Some(counts) => BigInt::from(counts.null_cols_divisor),
        None => BigInt::from(1u64),
    };
    let numer = d.numer().expect("quantity bound is finite").clone();
    let k_a = BigInt::from(cfg.k) * numer;
    let gcd = num::Integer::gcd(&divisor, &k_a);
    let m = denom * (divisor / gcd);
    Ok(u64::try_from(&m).expect("extension factor fits in u64"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::bigint::BigInt;

    fn cfg(g: u64, k: u64, m: u64, n: u64) -> SystemConfig {
        SystemConfig::new(g, k, m, n).unwrap()
    }

    #[test]
    fn worked_feasible_case() {
        let v = feasible_linear(&cfg(3, 1, 5, 7), &Rat::from_int(3)).unwrap();
        assert_eq!(v.linear, LinearFeasibility::Feasible);
        assert_eq!(v.asymptotic, AsymptoticFeasibility::Feasible);
        assert!(v.binding_pair.is_none());
        assert!(v.proper_holds);
    }

    #[test]
    fn proper_but_infeasible_in_region_two() {
        // M + N = 8 >= 8 = (GK+1)d, yet the bound is 1 < 2.
        let v = feasible_linear(&cfg(3, 1, 1, 7), &Rat::from_int(2)).unwrap();
        assert!(v.proper_holds);
        assert_eq!(v.linear, LinearFeasibility::Infeasible);
        let pair = v.binding_pair.unwrap();
        assert_eq!(pair.side, Some(Side::B));
        assert_eq!(pair.index, Some(0));
        assert_eq!((pair.p, pair.q), (BigInt::from(1), BigInt::from(0)));
    }

    #[test]
    fn region_one_verdict_vocabulary() {
        // Proper fails but the decomposition bound passes: asymptotic
        // schemes exist while linear ones provably do not.
        let v = feasible_linear(&cfg(3, 2, 21, 21), &Rat::from_int(7)).unwrap();
        assert_eq!(v.linear, LinearFeasibility::Infeasible);
        assert_eq!(v.asymptotic, AsymptoticFeasibility::Feasible);
        assert!(v.binding_pair.is_none());
        assert!(!v.proper_holds);
        assert_eq!(
            feasible_asymptotic(&cfg(3, 2, 21, 21), &Rat::from_int(8)).unwrap(),
            AsymptoticFeasibility::Infeasible
        );
        // Proper holds: the conjecture is reported, never upgraded.
        let v = feasible_linear(&cfg(3, 2, 21, 21), &Rat::from_int(6)).unwrap();
        assert_eq!(v.linear, LinearFeasibility::ConjecturedFeasible);
    }

    #[test]
    fn limit_ratio_pair() {
        // G=3, K=1, M=N: the single constraint at the common limit is
        // max(2M, 2N)/... reduced pair (1, 1), giving d <= M/2.
        let v = feasible_linear(&cfg(3, 1, 6, 6), &Rat::from_int(3)).unwrap();
        assert_eq!(v.linear, LinearFeasibility::Feasible);
        let v = feasible_linear(&cfg(3, 1, 6, 6), &Rat::new(7, 2)).unwrap();
        assert_eq!(v.linear, LinearFeasibility::Infeasible);
        let pair = v.binding_pair.unwrap();
        assert_eq!(pair.side, None);
        assert_eq!((pair.p, pair.q), (BigInt::from(1), BigInt::from(1)));
    }

    #[test]
    fn verdict_matches_bound_exhaustively() {
        for (g, k) in [(2u64, 1u64), (3, 1), (2, 2), (3, 2)] {
            for m in 1..=20 {
                for n in 1..=20 {
                    let c = cfg(g, k, m, n);
                    if dof_quantity(&c).is_none() {
                        continue;
                    }
                    for d in 1..=8u64 {
                        let v = feasible_linear(&c, &Rat::from_int(d)).unwrap();
                        assert_eq!(
                            v.linear == LinearFeasibility::Feasible,
                            Rat::from_int(d) <= dof_quantity(&c).unwrap(),
                            "G={g} K={k} M={m} N={n} d={d}"
                        );
                        assert_eq!(
                            v.binding_pair.is_some(),
                            v.linear == LinearFeasibility::Infeasible
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_nonpositive_d() {
        assert!(matches!(
            feasible_linear(&cfg(3, 1, 5, 7), &Rat::zero()),
            Err(FeasibilityError::NonPositiveD { .. })
        ));
        assert!(matches!(
            feasible_asymptotic(&cfg(3, 1, 5, 7), &Rat::from_int(-1)),
            Err(FeasibilityError::NonPositiveD { .. })
        ));
    }

    #[test]
    fn extension_goldens() {
        assert_eq!(min_spatial_extension(&cfg(3, 1, 5, 7)).unwrap(), 1);
        assert_eq!(min_spatial_extension(&cfg(3, 2, 8, 2)).unwrap(), 3);
        assert_eq!(min_spatial_extension(&cfg(3, 2, 7, 2)).unwrap(), 11);
        assert_eq!(min_spatial_extension(&cfg(3, 2, 11, 3)).unwrap(), 1);
        assert_eq!(min_spatial_extension(&cfg(3, 2, 24, 6)).unwrap(), 1);
        // Limit ratio: only integrality of d itself is required.
        assert_eq!(min_spatial_extension(&cfg(3, 1, 5, 5)).unwrap(), 2);
        assert!(matches!(
            min_spatial_extension(&cfg(3, 2, 1, 1)),
            Err(FeasibilityError::NoFiniteExtension { .. })
        ));
    }

    #[test]
    fn extension_makes_design_integral() {
        for (g, k, m, n) in
            [(3u64, 2u64, 7u64, 2u64), (3, 2, 8, 2), (3, 1, 5, 7), (3, 2, 36, 10), (4, 1, 5, 14)]
        {
            let c = cfg(g, k, m, n);
            let ext = min_spatial_extension(&c).unwrap();
            let extended = c.extended(ext);
            let d = dof_quantity(&extended).unwrap();
            assert!(d.is_integer(), "extended bound integral for {c}");
            if let Some(counts) = DesignPlan::new(&extended).unwrap().aligned {
                let kd = Rat::from_int(c.k) * d.clone();
                let cols = kd / Rat::from_int(counts.null_cols_divisor);
                assert!(cols.is_integer(), "null-space column count integral for {c}");
            }
            // Minimality: no smaller factor works.
            for smaller in 1..ext {
                let sub = c.extended(smaller);
                let d = dof_quantity(&sub).unwrap();
                let integral = d.is_integer()
                    && match DesignPlan::new(&sub).unwrap().aligned {
                        Some(counts) => (Rat::from_int(c.k) * d
                            / Rat::from_int(counts.null_cols_divisor))
                        .is_integer(),
                        None => true,
                    };
                assert!(!integral, "extension {smaller} must not suffice for {c}");
            }
        }
    }

    #[test]
    fn feasibility_monotone_in_antennas() {
        // Adding an antenna anywhere never turns a non-infeasible point
        // infeasible: every pair condition is monotone in M and N, and a
        // Region II feasible point that crosses into Region I keeps the
        // proper condition with slack.
        let d = Rat::from_int(2);
        for m in 1..=25u64 {
            for n in 1..=25u64 {
                let here = feasible_linear(&cfg(3, 2, m, n), &d).unwrap().linear;
                if here == LinearFeasibility::Infeasible {
                    continue;
                }
                for (m2, n2) in [(m + 1, n), (m, n + 1)] {
                    let next = feasible_linear(&cfg(3, 2, m2, n2), &d).unwrap().linear;
                    assert_ne!(
                        next,
                        LinearFeasibility::Infeasible,
                        "monotonicity broken from ({m},{n}) to ({m2},{n2})"
                    );
                }
            }
        }
    }
}
