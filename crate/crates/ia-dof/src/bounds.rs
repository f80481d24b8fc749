//! Antenna-ratio regions and per-user DoF bounds.
//!
//! Every configuration falls into one of two regimes determined by the
//! antenna ratio `M/N`. Between the two sequence limits (possible only when
//! `(G-1)^2 K > 4`) lies Region I, where the decomposition value
//! `MN / (M + KN)` is the exact per-user DoF but is only approached through
//! asymptotically many channel extensions. Outside that open interval the
//! ratio lands in a bracket of one boundary sequence, Region II, where a
//! finite closed-form bound applies and is achievable by linear processing
//! in finite (spatially extended) dimensions.
//!
//! # Examples
//!
//! ```
//! use ia_dof::config::SystemConfig;
//! use ia_dof::bounds::{classify_region, dof_quantity, Region, Subcase};
//! use ia_dof::rational::Rat;
//!
//! let cfg = SystemConfig::new(3, 1, 5, 7).unwrap();
//! let region = classify_region(&cfg);
//! assert_eq!(region, Region::TwoB { index: 3, subcase: Subcase::MLimited });
//! assert_eq!(dof_quantity(&cfg), Some(Rat::from_int(3)));
//! ```

use num::bigint::BigInt;
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::config::SystemConfig;
use crate::rational::Rat;
use crate::sequence::{discriminant, kbar, pq_sequence, Side};

/// Which term of the quantity bound attains the minimum (ties go to
/// M-limited; at a touch-point ratio the two terms are equal).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subcase {
    #[serde(rename = "M-limited")]
    MLimited,
    #[serde(rename = "N-limited")]
    NLimited,
}

/// Region classification of an antenna ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// Strictly between the two sequence limits: exact DoF known but only
    /// asymptotically achievable.
    One,
    /// Bracketed by the descending sequence: `C_n <= M/N < C_{n-1}`.
    TwoA { index: i64, subcase: Subcase },
    /// Bracketed by the ascending sequence: `C_{n-1} < M/N <= C_n`.
    TwoB { index: i64, subcase: Subcase },
    /// `M/N` equals the common rational limit `(G-1)K / 2` of both
    /// sequences (only possible when `(G-1)^2 K = 4`). Belongs to Region II
    /// but no finite bracket index exists.
    TwoLimit,
}

impl Region {
    pub fn is_region_two(&self) -> bool {
        !matches!(self, Region::One)
    }

    /// Bracket index for the two sequence-bracketed cases.
    pub fn index(&self) -> Option<i64> {
        match self {
            Region::TwoA { index, .. } | Region::TwoB { index, .. } => Some(*index),
            _ => None,
        }
    }

    /// Sequence side for the two sequence-bracketed cases.
    pub fn side(&self) -> Option<Side> {
        match self {
            Region::TwoA { .. } => Some(Side::A),
            Region::TwoB { .. } => Some(Side::B),
            _ => None,
        }
    }

    pub fn subcase(&self) -> Option<Subcase> {
        match self {
            Region::TwoA { subcase, .. } | Region::TwoB { subcase, .. } => Some(*subcase),
            // Both quantity terms coincide at the limit ratio; the tie rule
            // labels it M-limited.
            Region::TwoLimit => Some(Subcase::MLimited),
            Region::One => None,
        }
    }

    /// Short label: "I", "II-A", "II-B" or "II-limit".
    pub fn label(&self) -> &'static str {
        match self {
            Region::One => "I",
            Region::TwoA { .. } => "II-A",
            Region::TwoB { .. } => "II-B",
            Region::TwoLimit => "II-limit",
        }
    }
}

const SCAN_CAP: i64 = 1_000_000;

/// First `n >= 1` with `C_n^A <= M/N` (side A brackets are half-open on the
/// left). The caller guarantees such an index exists.
fn scan_side_a(cfg: &SystemConfig) -> i64 {
    let m = BigInt::from(cfg.m);
    let n_ant = BigInt::from(cfg.n);
    let (mut p_prev, mut q_prev) = (BigInt::from(-1), BigInt::from(0));
    let (mut p_cur, mut q_cur) = (BigInt::from(0), BigInt::from(1));
    for step in 1..SCAN_CAP {
        let mult = BigInt::from((cfg.g - 1) * kbar(cfg.k, step - 1));
        let p = &mult * &p_cur - &p_prev;
        let q = &mult * &q_cur - &q_prev;
        debug_assert!(!p.is_negative() && !q.is_negative(), "scan ran past sequence end");
        // C_step = q/p <= M/N  <=>  q*N <= M*p  (p > 0 for step >= 1).
        if &q * &n_ant <= &m * &p {
            return step;
        }
        (p_prev, q_prev) = (p_cur, q_cur);
        (p_cur, q_cur) = (p, q);
    }
    unreachable!("side A bracket scan did not terminate");
}

/// First `n >= 1` with `M/N <= C_n^B` (side B brackets are closed on the
/// right). The caller guarantees such an index exists.
fn scan_side_b(cfg: &SystemConfig) -> i64 {
    let m = BigInt::from(cfg.m);
    let n_ant = BigInt::from(cfg.n);
    let (mut p_prev, mut q_prev) = (BigInt::from(0), BigInt::from(-1));
    let (mut p_cur, mut q_cur) = (BigInt::from(1), BigInt::from(0));
    for step in 1..SCAN_CAP {
        let mult = BigInt::from((cfg.g - 1) * kbar(cfg.k, step));
        let p = &mult * &p_cur - &p_prev;
        let q = &mult * &q_cur - &q_prev;
        debug_assert!(!p.is_negative() && !q.is_negative(), "scan ran past sequence end");
        // M/N <= C_step = q/p  <=>  M*p <= q*N (true at a p = 0 endpoint).
        if &m * &p <= &q * &n_ant {
            return step;
        }
        (p_prev, q_prev) = (p_cur, q_cur);
        (p_cur, q_cur) = (p, q);
    }
    unreachable!("side B bracket scan did not terminate");
}

/// The two competing terms of the quantity bound for a bracketed region:
/// `(M-term, N-term)`. `None` for Region I.
///
/// Side A at index n: `(M / (K + C_n), N / (1 + K / C_{n-1}))`.
/// Side B at index n: `(M / (K + C_{n-1}), N / (1 + K / C_n))`.
/// At the limit ratio both terms equal `M / (K + (G-1)K/2)`.
pub fn quantity_terms(cfg: &SystemConfig, region: &Region) -> Option<(Rat, Rat)> {
    let k = Rat::from_int(cfg.k);
    let m = Rat::from_int(cfg.m);
    let n_ant = Rat::from_int(cfg.n);
    match region {
        Region::One => None,
        Region::TwoLimit => {
            let c_inf = Rat::new((cfg.g - 1) * cfg.k, 2);
            let m_term = m / (k.clone() + c_inf.clone());
            let n_term = n_ant / (Rat::one() + k / c_inf);
            debug_assert_eq!(m_term, n_term);
            Some((m_term, n_term))
        }
        Region::TwoA { index, .. } => {
            let pairs = pq_sequence(cfg.g, cfg.k, Side::A, *index);
            let c_n = pairs[(*index + 1) as usize].ratio();
            let c_prev = pairs[*index as usize].ratio();
            Some((m / (k.clone() + c_n), n_ant / (Rat::one() + k / c_prev)))
        }
        Region::TwoB { index, .. } => {
            let pairs = pq_sequence(cfg.g, cfg.k, Side::B, *index);
            let c_n = pairs[(*index + 1) as usize].ratio();
            let c_prev = pairs[*index as usize].ratio();
            Some((m / (k.clone() + c_prev), n_ant / (Rat::one() + k / c_n)))
        }
    }
}

/// Classifies the antenna ratio into its region, exactly.
///
/// Region I membership is decided by the sign of the integer quadratic
/// `M^2 - (G-1)K*M*N + K*N^2`, whose roots are the two sequence limits;
/// bracket indices are found by exact sequence scans. For `(G-1)^2 K = 4`
/// the quadratic is a perfect square and the single root `(G-1)K/2` is the
/// rational limit ratio, classified as [`Region::TwoLimit`].
pub fn classify_region(cfg: &SystemConfig) -> Region {
    let disc = discriminant(cfg.g, cfg.k);
    let with_subcase = |region: Region| -> Region {
        let (m_term, n_term) = quantity_terms(cfg, &region).expect("bracketed region has terms");
        let subcase = if m_term <= n_term { Subcase::MLimited } else { Subcase::NLimited };
        match region {
            Region::TwoA { index, .. } => Region::TwoA { index, subcase },
            Region::TwoB { index, .. } => Region::TwoB { index, subcase },
            other => other,
        }
    };
    let placeholder = Subcase::MLimited;
    if disc.is_negative() {
        // Finite sequences: Region I is empty and the descending family
        // reaches 0, so the side A scan covers every ratio.
        let index = scan_side_a(cfg);
        return with_subcase(Region::TwoA { index, subcase: placeholder });
    }
    // Compare M/N with the midpoint (G-1)K/2 of the two limits.
    let two_m = BigInt::from(2) * BigInt::from(cfg.m);
    let gk_n = BigInt::from((cfg.g - 1) * cfg.k) * BigInt::from(cfg.n);
    if disc.is_zero() {
        return match two_m.cmp(&gk_n) {
            std::cmp::Ordering::Equal => Region::TwoLimit,
            std::cmp::Ordering::Greater => {
                with_subcase(Region::TwoA { index: scan_side_a(cfg), subcase: placeholder })
            }
            std::cmp::Ordering::Less => {
                with_subcase(Region::TwoB { index: scan_side_b(cfg), subcase: placeholder })
            }
        };
    }
    let m = BigInt::from(cfg.m);
    let n_ant = BigInt::from(cfg.n);
    let quad = &m * &m - BigInt::from((cfg.g - 1) * cfg.k) * &m * &n_ant
        + BigInt::from(cfg.k) * &n_ant * &n_ant;
    if quad.is_negative() {
        return Region::One;
    }
    // A positive discriminant is never a perfect square, so a rational
    // ratio cannot sit exactly on an irrational limit.
    debug_assert!(!quad.is_zero());
    if two_m > gk_n {
        with_subcase(Region::TwoA { index: scan_side_a(cfg), subcase: placeholder })
    } else {
        with_subcase(Region::TwoB { index: scan_side_b(cfg), subcase: placeholder })
    }
}

/// Decomposition-based per-user DoF: `MN / (M + KN)`. In Region I this is
/// the exact per-user DoF; in Region II it is a lower bound.
pub fn dof_decomposition(cfg: &SystemConfig) -> Rat {
    Rat::from_int(cfg.m * cfg.n) / Rat::from_int(cfg.m + cfg.k * cfg.n)
}

/// Properness bound for one-shot linear processing: `(M + N) / (GK + 1)`.
pub fn dof_proper(cfg: &SystemConfig) -> Rat {
    Rat::from_int(cfg.m + cfg.n) / Rat::from_int(cfg.g * cfg.k + 1)
}

/// The closed-form Region II per-user DoF. `None` in Region I.
pub fn dof_quantity(cfg: &SystemConfig) -> Option<Rat> {
    let region = classify_region(cfg);
    quantity_terms(cfg, &region).map(|(m_term, n_term)| m_term.min(n_term))
}

/// The exact per-user DoF of the configuration: the decomposition value in
/// Region I, the quantity value in Region II.
pub fn dof_upper(cfg: &SystemConfig) -> Rat {
    match dof_quantity(cfg) {
        Some(d) => d,
        None => dof_decomposition(cfg),
    }
}

/// How the exact per-user DoF is attained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AchievableBy {
    /// Only in the limit of infinitely many channel extensions (Region I).
    #[serde(rename = "asymptotic-only")]
    AsymptoticOnly,
    /// By linear transceivers in finite spatial dimensions (Region II).
    #[serde(rename = "linear")]
    Linear,
}

/// Full bound summary for one configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoFReport {
    pub config: SystemConfig,
    pub region: Region,
    pub d_decomposition: Rat,
    pub d_proper: Rat,
    pub d_quantity: Option<Rat>,
    pub d_upper: Rat,
    pub achievable_by: AchievableBy,
}

impl DoFReport {
    pub fn compute(cfg: &SystemConfig) -> Self {
        let region = classify_region(cfg);
        let d_quantity = quantity_terms(cfg, &region).map(|(a, b)| a.min(b));
        let d_decomposition = dof_decomposition(cfg);
        let d_upper = d_quantity.clone().unwrap_or_else(|| d_decomposition.clone());
        let achievable_by = if region.is_region_two() {
            AchievableBy::Linear
        } else {
            AchievableBy::AsymptoticOnly
        };
        DoFReport {
            config: *cfg,
            region,
            d_decomposition,
            d_proper: dof_proper(cfg),
            d_quantity,
            d_upper,
            achievable_by,
        }
    }
}
