//! Transceiver design plans: which side aligns, at which pair index, and
//! with what per-matrix bookkeeping.
//!
//! A bracketed (Region II) configuration admits a closed-form linear
//! design. For bracket index 1 no alignment is possible or needed and one
//! side simply zero-forces. For index n >= 2 one side builds aligned
//! matrices from a boundary pair (p, q) and takes transmit or receive
//! vectors from their null spaces; the side is determined by which bound
//! term binds. Writing the bound as min(m_term, n_term):
//!
//! * `m_term > n_term` (receive antennas bind): the transmitters align,
//!   using the pair with `p*M - q*N > 0` so the aligned matrices are wide.
//! * `m_term < n_term` (transmit antennas bind): the receivers align,
//!   using the pair with `q*N - p*M > 0` so they are tall.
//! * Tie (the ratio M/N sits on a touch point): both designs are exactly
//!   tight; the transmit-aligned one is chosen.
//!
//! The counting identities below hold post spatial extension, when the
//! per-user DoF `d` is an integer and every null-space column count
//! divides evenly.

use serde::Serialize;

use crate::bounds::{classify_region, quantity_terms, Region};
use crate::config::SystemConfig;
use crate::sequence::{kbar, pq_sequence, Side};

/// Errors from design-plan resolution.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DesignError {
    #[error("no linear design exists for {config}: the ratio M/N lies strictly between the boundary limits (Region I), where only asymptotic schemes reach the bound")]
    RegionOne { config: SystemConfig },
    #[error("no linear design exists for {config}: the ratio M/N equals the common boundary limit, where the alignment chain does not terminate")]
    LimitRatio { config: SystemConfig },
}

/// The four closed-form construction flows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DesignKind {
    /// Bracket index >= 2, transmitters align: transmit vectors come from
    /// null spaces of wide aligned matrices, receivers null what remains.
    #[serde(rename = "transmit-aligned")]
    TransmitAligned,
    /// Bracket index >= 2, receivers align: receive vectors come from
    /// null spaces of (conjugated) tall aligned matrices, transmitters
    /// null what remains.
    #[serde(rename = "receive-aligned")]
    ReceiveAligned,
    /// Bracket index 1 on side A: each base station zero-forces all
    /// cross-cell interference; receivers need no nulling.
    #[serde(rename = "transmit-zero-forcing")]
    TransmitZeroForcing,
    /// Bracket index 1 on side B: each user zero-forces all cross-cell
    /// interference; transmitters need no nulling.
    #[serde(rename = "receive-zero-forcing")]
    ReceiveZeroForcing,
}

impl DesignKind {
    /// True when the transmit side is the aligned or zero-forcing side.
    pub fn is_transmit_side(&self) -> bool {
        matches!(self, DesignKind::TransmitAligned | DesignKind::TransmitZeroForcing)
    }
}

/// Bookkeeping for the aligned-matrix stage of an index >= 2 design.
///
/// All counts are per the unextended pair values; they become realizable
/// matrix dimensions once the configuration is spatially extended so that
/// `K*d / null_cols_divisor` is an integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlignedCounts {
    /// Index of the boundary pair whose (p, q) shape the matrices take.
    pub pair_index: i64,
    /// Row blocks per matrix (each block is one user's N rows).
    pub row_blocks: u64,
    /// Column blocks per matrix (each block is one base station's M
    /// columns).
    pub col_blocks: u64,
    /// Number of aligned matrices.
    pub matrix_count: u64,
    /// Null-space columns taken per matrix = `K*d / null_cols_divisor`.
    pub null_cols_divisor: u64,
    /// Column-block slots referencing each base station, across all
    /// matrices.
    pub col_slots_per_bs: u64,
    /// Row-block slots referencing each user, across all matrices.
    pub row_slots_per_user: u64,
}

/// Resolved construction strategy for one bracketed configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DesignPlan {
    /// Which boundary family brackets the ratio.
    pub side: Side,
    /// Bracket index.
    pub index: i64,
    pub kind: DesignKind,
    /// Aligned-matrix bookkeeping; `None` for the index-1 zero-forcing
    /// flows.
    pub aligned: Option<AlignedCounts>,
}

impl DesignPlan {
    /// Resolves the design plan for a bracketed configuration.
    pub fn new(cfg: &SystemConfig) -> Result<DesignPlan, DesignError> {
        let region = classify_region(cfg);
        let (side, index) = match region {
            Region::One => return Err(DesignError::RegionOne { config: *cfg }),
            Region::TwoLimit => return Err(DesignError::LimitRatio { config: *cfg }),
            Region::TwoA { index, .. } => (Side::A, index),
            Region::TwoB { index, .. } => (Side::B, index),
        };
        if index == 1 {
            let kind = match side {
                Side::A => DesignKind::TransmitZeroForcing,
                Side::B => DesignKind::ReceiveZeroForcing,
            };
            return Ok(DesignPlan { side, index, kind, aligned: None });
        }
        let (m_term, n_term) =
            quantity_terms(cfg, &region).expect("bracketed region has bound terms");
        let kind = if m_term >= n_term {
            DesignKind::TransmitAligned
        } else {
            DesignKind::ReceiveAligned
        };
        // Pair index of the aligned-matrix shape: the transmit-aligned
        // design needs p*M - q*N > 0 on the bracket (index n on side A,
        // n-1 on side B), the receive-aligned design the reverse.
        let pair_index = match (kind, side) {
            (DesignKind::TransmitAligned, Side::A) => index,
            (DesignKind::TransmitAligned, Side::B) => index - 1,
            (DesignKind::ReceiveAligned, Side::A) => index - 1,
            (DesignKind::ReceiveAligned, Side::B) => index,
            _ => unreachable!("zero-forcing kinds returned above"),
        };
        let pairs = pq_sequence(cfg.g, cfg.k, side, pair_index);
        let pair = pairs.last().expect("bracket pairs exist up to the bracket index");
        debug_assert_eq!(pair.n, pair_index);
        let p = u64::try_from(&pair.p).expect("pair entries are nonnegative");
        let q = u64::try_from(&pair.q).expect("pair entries are nonnegative");
        // The aligned side's alternation factor: kbar(K, n) for transmit,
        // kbar(K, n-1) for receive designs.
        let factor = if kind == DesignKind::TransmitAligned {
            kbar(cfg.k, index)
        } else {
            kbar(cfg.k, index - 1)
        };
        let null_cols_divisor = match kind {
            DesignKind::TransmitAligned => factor * p,
            DesignKind::ReceiveAligned => factor * q,
            _ => unreachable!(),
        };
        let row_slots_total = cfg.g * factor * q;
        debug_assert_eq!(row_slots_total % (cfg.g * cfg.k), 0);
        let aligned = AlignedCounts {
            pair_index,
            row_blocks: q,
            col_blocks: p,
            matrix_count: cfg.g * factor,
            null_cols_divisor,
            col_slots_per_bs: factor * p,
            row_slots_per_user: factor * q / cfg.k,
        };
        Ok(DesignPlan { side, index, kind, aligned: Some(aligned) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(g: u64, k: u64, m: u64, n: u64) -> DesignPlan {
        DesignPlan::new(&SystemConfig::new(g, k, m, n).unwrap()).unwrap()
    }

    #[test]
    fn zero_forcing_flows_at_index_one() {
        let p = plan(3, 2, 24, 6);
        assert_eq!(p.kind, DesignKind::TransmitZeroForcing);
        assert_eq!(p.index, 1);
        assert!(p.aligned.is_none());
        let p = plan(2, 1, 2, 2);
        assert_eq!(p.kind, DesignKind::TransmitZeroForcing);
        let p = plan(3, 2, 2, 12);
        assert_eq!(p.kind, DesignKind::ReceiveZeroForcing);
        assert!(p.aligned.is_none());
    }

    #[test]
    fn tie_configurations_choose_transmit_alignment() {
        // 5/7 and 11/3 sit exactly on touch points, where both designs
        // are tight; the transmit-aligned flow is the canonical pick.
        let p = plan(3, 1, 5, 7);
        assert_eq!(p.kind, DesignKind::TransmitAligned);
        assert_eq!((p.side, p.index), (Side::B, 3));
        let a = p.aligned.unwrap();
        assert_eq!(a.pair_index, 2);
        assert_eq!((a.row_blocks, a.col_blocks), (2, 3));
        assert_eq!(a.matrix_count, 3);
        assert_eq!(a.null_cols_divisor, 3);
        assert_eq!(a.col_slots_per_bs, 3);
        assert_eq!(a.row_slots_per_user, 2);

        let p = plan(3, 2, 11, 3);
        assert_eq!(p.kind, DesignKind::TransmitAligned);
        assert_eq!((p.side, p.index), (Side::A, 2));
        let a = p.aligned.unwrap();
        assert_eq!(a.pair_index, 2);
        assert_eq!((a.row_blocks, a.col_blocks), (7, 2));
        assert_eq!(a.matrix_count, 6);
        assert_eq!(a.null_cols_divisor, 4);
        assert_eq!(a.col_slots_per_bs, 4);
        assert_eq!(a.row_slots_per_user, 7);
    }

    #[test]
    fn strict_subcases_pick_the_side_with_null_room() {
        // Strictly transmit-limited: the wide aligned matrices run out of
        // null space, so the receivers align.
        let p = plan(3, 2, 36, 10);
        assert_eq!(p.kind, DesignKind::ReceiveAligned);
        assert_eq!((p.side, p.index), (Side::A, 2));
        let a = p.aligned.unwrap();
        assert_eq!(a.pair_index, 1);
        assert_eq!((a.row_blocks, a.col_blocks), (4, 1));
        assert_eq!(a.matrix_count, 3);
        assert_eq!(a.null_cols_divisor, 4);
        // Strictly receive-limited: mirrored.
        let p = plan(3, 2, 100, 26);
        assert_eq!(p.kind, DesignKind::TransmitAligned);
        assert_eq!(p.aligned.unwrap().pair_index, 2);
        let p = plan(3, 2, 7, 2);
        assert_eq!(p.kind, DesignKind::ReceiveAligned);
        let a = p.aligned.unwrap();
        assert_eq!(a.pair_index, 1);
        assert_eq!(a.null_cols_divisor, 4);
    }

    #[test]
    fn mirrored_bracket_side_b_indices() {
        // Side B strictly transmit-limited at index 2: receivers align at
        // the bracket pair itself.
        let p = plan(4, 1, 5, 14);
        assert_eq!(p.kind, DesignKind::ReceiveAligned);
        assert_eq!((p.side, p.index), (Side::B, 2));
        let a = p.aligned.unwrap();
        assert_eq!(a.pair_index, 2);
        assert_eq!((a.row_blocks, a.col_blocks), (3, 8));
        assert_eq!(a.matrix_count, 4);
        assert_eq!(a.null_cols_divisor, 3);
    }

    #[test]
    fn refusals() {
        let cfg = SystemConfig::new(3, 2, 1, 1).unwrap();
        assert!(matches!(DesignPlan::new(&cfg), Err(DesignError::RegionOne { .. })));
        let cfg = SystemConfig::new(3, 1, 4, 4).unwrap();
        assert!(matches!(DesignPlan::new(&cfg), Err(DesignError::LimitRatio { .. })));
    }
}
