//! Closed-form transceiver synthesis and numerical verification.
//!
//! For a bracketed configuration whose per-user bound is a positive
//! integer `d` (after spatial extension if needed), the synthesizer
//! builds per-base-station precoders `V[j]` of shape M x (K*d) and
//! per-user filters `U[i][k]` of shape N x d such that all cross-cell
//! interference is nulled and every cell still conveys its K*d desired
//! streams at full rank. Bracket index 1 is plain zero-forcing on one
//! side; deeper brackets take null-space vectors from aligned matrices on
//! the designing side and null the compressed residual interference on
//! the other.
//!
//! Verification is separate from construction and never trusts it: the
//! normalized cross-link residuals, the per-matrix numerical ranks, and
//! the per-cell direct-link rank condition are measured on the actual
//! channel draw and reported with their tolerances.

use serde::Serialize;

use crate::align::{aligned_matrix_specs, AlignError};
use crate::bounds::dof_quantity;
use crate::channel::ChannelSet;
use crate::config::SystemConfig;
use crate::design::{DesignError, DesignKind, DesignPlan};
use crate::feasibility::min_spatial_extension;
use crate::linalg::{
    fro_norm, hstack, normalize_columns, null_space, numerical_rank, random_orthonormal, vstack,
    CMat,
};
use crate::rational::Rat;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Rank tolerance used for the internal construction checks.
const BUILD_RANK_TOL: f64 = 1e-6;
/// Salt mixed into the channel seed for the auxiliary random frames, so
/// the construction is deterministic given the channel draw without
/// replaying its stream.
const AUX_SEED_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

/// Errors from transceiver synthesis.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SynthError {
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Align(#[from] AlignError),
    #[error("per-user bound {d} does not give integer stream and column counts at these antenna dimensions; extend both antenna counts by a multiple of {min_extension}")]
    NonIntegralStreams { d: Rat, min_extension: u64 },
    #[error("rank deficiency while building {context}: expected {expected}, measured {measured} (non-generic channel draw or invalid aligned mask)")]
    RankDeficiency { context: String, expected: usize, measured: usize },
}

/// One complete linear transceiver.
#[derive(Debug, Clone, PartialEq)]
pub struct Transceiver {
    /// Streams per user.
    pub d: u64,
    /// Per-base-station precoders, M x (K*d), unit-norm columns.
    pub v: Vec<CMat>,
    /// Per-user receive filters `u[cell][user]`, N x d, unit-norm
    /// columns.
    pub u: Vec<Vec<CMat>>,
}

/// Measured quality of a transceiver on a channel draw.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    /// Largest normalized cross-link residual
    /// `|U^H H V| / (|U| |H| |V|)` over all interfering links (Frobenius
    /// norms).
    pub zf_residual: f64,
    /// Per-cell flag: the stacked direct-link product has rank K*d.
    pub direct_rank_ok: Vec<bool>,
    /// Measured numerical rank of each precoder (target K*d).
    pub v_ranks: Vec<usize>,
    /// Measured numerical rank of each filter (target d).
    pub u_ranks: Vec<Vec<usize>>,
    pub pass: bool,
    pub zf_tol: f64,
    pub rank_tol: f64,
}

fn rank_checked(a: &CMat, expected: usize, context: &str) -> Result<(), SynthError> {
    let measured = numerical_rank(a, BUILD_RANK_TOL);
    if measured == expected {
        Ok(())
    } else {
        Err(SynthError::RankDeficiency { context: context.to_string(), expected, measured })
    }
}

/// Stacked interference seen by user `(cell, user)`: the adjoints of
/// `H[(cell,user), j] * V[j]` over all interfering base stations `j`,
/// giving a ((G-1)*K*d) x N matrix whose null space holds valid receive
/// filters.
fn residual_at_user(ch: &ChannelSet, v: &[CMat], cell: usize, user: usize) -> CMat {
    let g = ch.config.g as usize;
    let blocks: Vec<CMat> = (0..g)
        .filter(|&j| j != cell)
        .map(|j| (ch.channel(cell, user, j) * &v[j]).adjoint())
        .collect();
    vstack(&blocks)
}

/// Stacked interference caused by base station `bs`: the rows
/// `U[(i,k)]^H H[(i,k), bs]` over all other-cell users, giving a
/// ((G-1)*K*d) x M matrix whose null space holds valid transmit vectors.
fn residual_at_bs(ch: &ChannelSet, u: &[Vec<CMat>], bs: usize) -> CMat {
    let g = ch.config.g as usize;
    let k = ch.config.k as usize;
    let mut blocks = Vec::with_capacity((g - 1) * k);
    for i in (0..g).filter(|&i| i != bs) {
        for (ku, filter) in u[i].iter().enumerate() {
            blocks.push(filter.adjoint() * ch.channel(i, ku, bs));
        }
    }
    vstack(&blocks)
}

/// Builds a transceiver achieving the per-user bound of `cfg` on the
/// given channel draw.
///
/// Requires a bracketed configuration whose bound `d` is a positive
/// integer and whose aligned-design column count `K*d / divisor` is an
/// integer; otherwise the minimal extension factor is reported in the
/// error. Construction is deterministic given the channel draw.
pub fn synthesize(cfg: &SystemConfig, channels: &ChannelSet) -> Result<Transceiver, SynthError> {
    assert_eq!(&channels.config, cfg, "channel draw must match the configuration");
    let plan = DesignPlan::new(cfg)?;
    let bound = dof_quantity(cfg).expect("bracketed region has a quantity bound");
    let integral = bound.is_integer()
        && bound.is_positive()
        && match &plan.aligned {
            Some(counts) => {
                (Rat::from_int(cfg.k) * bound.clone() / Rat::from_int(counts.null_cols_divisor))
                    .is_integer()
            }
            None => true,
        };
    if !integral {
        let min_extension =
            min_spatial_extension(cfg).expect("bracketed region has a finite extension");
        return Err(SynthError::NonIntegralStreams { d: bound, min_extension });
    }
    let d = u64::try_from(&bound.to_integer().expect("integral bound")).expect("d fits in u64");
    let g = cfg.g as usize;
    let k = cfg.k as usize;
    let kd = (cfg.k * d) as usize;
    let interferers = (g - 1) * k * d as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(channels.seed ^ AUX_SEED_SALT);

    let (v, u) = match plan.kind {
        DesignKind::TransmitZeroForcing => {
            // Receivers take arbitrary orthonormal frames; every base
            // station nulls all the interference it would cause.
            let u: Vec<Vec<CMat>> = (0..g)
                .map(|_| (0..k).map(|_| random_orthonormal(cfg.n as usize, d as usize, &mut rng)).collect())
                .collect();
            let mut v = Vec::with_capacity(g);
            for j in 0..g {
                let q = residual_at_bs(channels, &u, j);
                rank_checked(&q, interferers, &format!("interference rows of base station {j}"))?;
                let ns = null_space(&q, BUILD_RANK_TOL);
                if ns.ncols() < kd {
                    return Err(SynthError::RankDeficiency {
                        context: format!("zero-forcing null space of base station {j}"),
                        expected: kd,
                        measured: ns.ncols(),
                    });
                }
                v.push(ns.columns(0, kd).clone_owned());
            }
            (v, u)
        }
        DesignKind::ReceiveZeroForcing => {
            let v: Vec<CMat> =
                (0..g).map(|_| random_orthonormal(cfg.m as usize, kd, &mut rng)).collect();
            let mut u = vec![Vec::with_capacity(k); g];
            for (i, cell_filters) in u.iter_mut().enumerate() {
                for ku in 0..k {
                    let q = residual_at_user(channels, &v, i, ku);
                    rank_checked(&q, interferers, &format!("interference rows of user ({i},{ku})"))?;
                    let ns = null_space(&q, BUILD_RANK_TOL);
                    if ns.ncols() < d as usize {
                        return Err(SynthError::RankDeficiency {
                            context: format!("zero-forcing null space of user ({i},{ku})"),
                            expected: d as usize,
                            measured: ns.ncols(),
                        });
                    }
                    cell_filters.push(ns.columns(0, d as usize).clone_owned());
                }
            }
            (v, u)
        }
        DesignKind::TransmitAligned => {
            let counts = plan.aligned.as_ref().expect("aligned design carries counts");
            let specs = aligned_matrix_specs(cfg)?;
            let cols_w = (cfg.k * d / counts.null_cols_divisor) as usize;
            let mut v_blocks: Vec<Vec<CMat>> = vec![Vec::new(); g];
            for (idx, spec) in specs.iter().enumerate() {
                let inst = spec.instantiate(channels);
                rank_checked(&inst, spec.expected_rank, &format!("aligned matrix {idx}"))?;
                let ns = null_space(&inst, BUILD_RANK_TOL);
                if ns.ncols() < cols_w {
                    return Err(SynthError::RankDeficiency {
                        context: format!("null space of aligned matrix {idx}"),
                        expected: cols_w,
                        measured: ns.ncols(),
                    });
                }
                let w = ns.columns(0, cols_w);
                for (b, &bs) in spec.col_blocks.iter().enumerate() {
                    v_blocks[bs]
                        .push(w.rows(b * cfg.m as usize, cfg.m as usize).clone_owned());
                }
            }
            let mut v = Vec::with_capacity(g);
            for (j, blocks) in v_blocks.iter().enumerate() {
                let mut vj = hstack(blocks);
                assert_eq!(vj.ncols(), kd, "column quota fills every precoder exactly");
                normalize_columns(&mut vj);
                rank_checked(&vj, kd, &format!("precoder of base station {j}"))?;
                v.push(vj);
            }
            // Residual interference at each user is compressed to a known
            // rank by the alignment; the filters null it.
            let eliminated = counts.row_slots_per_user as usize * cols_w;
            let residual_rank = interferers - eliminated;
            let mut u = vec![Vec::with_capacity(k); g];
            for (i, cell_filters) in u.iter_mut().enumerate() {
                for ku in 0..k {
                    let q = residual_at_user(channels, &v, i, ku);
                    rank_checked(
                        &q,
                        residual_rank,
                        &format!("compressed interference of user ({i},{ku})"),
                    )?;
                    let ns = null_space(&q, BUILD_RANK_TOL);
                    if ns.ncols() < d as usize {
                        return Err(SynthError::RankDeficiency {
                            context: format!("filter null space of user ({i},{ku})"),
                            expected: d as usize,
                            measured: ns.ncols(),
                        });
                    }
                    cell_filters.push(ns.columns(0, d as usize).clone_owned());
                }
            }
            (v, u)
        }
        DesignKind::ReceiveAligned => {
            let counts = plan.aligned.as_ref().expect("aligned design carries counts");
            let specs = aligned_matrix_specs(cfg)?;
            let cols_wu = (cfg.k * d / counts.null_cols_divisor) as usize;
            let mut u_blocks: Vec<Vec<Vec<CMat>>> = vec![vec![Vec::new(); k]; g];
            for (idx, spec) in specs.iter().enumerate() {
                let inst = spec.instantiate(channels);
                rank_checked(&inst, spec.expected_rank, &format!("aligned matrix {idx}"))?;
                let ns = null_space(&inst.adjoint(), BUILD_RANK_TOL);
                if ns.ncols() < cols_wu {
                    return Err(SynthError::RankDeficiency {
                        context: format!("adjoint null space of aligned matrix {idx}"),
                        expected: cols_wu,
                        measured: ns.ncols(),
                    });
                }
                let w = ns.columns(0, cols_wu);
                for (r, &(cell, user)) in spec.row_blocks.iter().enumerate() {
                    u_blocks[cell][user]
                        .push(w.rows(r * cfg.n as usize, cfg.n as usize).clone_owned());
                }
            }
            let mut u = vec![Vec::with_capacity(k); g];
            for (i, per_cell) in u_blocks.iter().enumerate() {
                for (ku, blocks) in per_cell.iter().enumerate() {
                    let mut uik = hstack(blocks);
                    assert_eq!(uik.ncols(), d as usize, "row quota fills every filter exactly");
                    normalize_columns(&mut uik);
                    rank_checked(&uik, d as usize, &format!("filter of user ({i},{ku})"))?;
                    u[i].push(uik);
                }
            }
            let eliminated = counts.col_slots_per_bs as usize * cols_wu;
            let residual_rank = interferers - eliminated;
            let mut v = Vec::with_capacity(g);
            for j in 0..g {
                let q = residual_at_bs(channels, &u, j);
                rank_checked(
                    &q,
                    residual_rank,
                    &format!("compressed interference of base station {j}"),
                )?;
                let ns = null_space(&q, BUILD_RANK_TOL);
                if ns.ncols() < kd {
                    return Err(SynthError::RankDeficiency {
                        context: format!("precoder null space of base station {j}"),
                        expected: kd,
                        measured: ns.ncols(),
                    });
                }
                v.push(ns.columns(0, kd).clone_owned());
            }
            (v, u)
        }
    };
    Ok(Transceiver { d, v, u })
}

/// Measures a transceiver against the alignment conditions on a channel
/// draw. Failures are reported in the result, never thrown.
pub fn verify_ia(
    cfg: &SystemConfig,
    channels: &ChannelSet,
    t: &Transceiver,
    zf_tol: f64,
    rank_tol: f64,
) -> VerificationReport {
    assert_eq!(&channels.config, cfg, "channel draw must match the configuration");
    let g = cfg.g as usize;
    let k = cfg.k as usize;
    let d = t.d as usize;
    let kd = cfg.k as usize * d;
    let mut zf_residual: f64 = 0.0;
    for i in 0..g {
        for ku in 0..k {
            for j in (0..g).filter(|&j| j != i) {
                let h = channels.channel(i, ku, j);
                let cross = t.u[i][ku].adjoint() * h * &t.v[j];
                let den = fro_norm(&t.u[i][ku]) * fro_norm(h) * fro_norm(&t.v[j]);
                let res = if den > 0.0 { fro_norm(&cross) / den } else { f64::INFINITY };
                zf_residual = zf_residual.max(res);
            }
        }
    }
    let v_ranks: Vec<usize> = t.v.iter().map(|vj| numerical_rank(vj, rank_tol)).collect();
    let u_ranks: Vec<Vec<usize>> = t
        .u
        .iter()
        .map(|cell| cell.iter().map(|uik| numerical_rank(uik, rank_tol)).collect())
        .collect();
    let direct_rank_ok: Vec<bool> = (0..g)
        .map(|i| {
            let blocks: Vec<CMat> = (0..k)
                .map(|ku| t.u[i][ku].adjoint() * channels.channel(i, ku, i) * &t.v[i])
                .collect();
            numerical_rank(&vstack(&blocks), rank_tol) == kd
        })
        .collect();
    let ranks_ok = v_ranks.iter().all(|&r| r == kd)
        && u_ranks.iter().flatten().all(|&r| r == d)
        && direct_rank_ok.iter().all(|&ok| ok);
    VerificationReport {
        zf_residual,
        direct_rank_ok,
        v_ranks,
        u_ranks,
        pass: zf_residual <= zf_tol && ranks_ok,
        zf_tol,
        rank_tol,
    }
}
