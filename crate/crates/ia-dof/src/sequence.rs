//! Boundary sequences and their integer pair representation.
//!
//! The symmetric G-cell, K-user network has two families of region
//! boundaries, one approached from wide transmit arrays (side A) and one
//! from wide receive arrays (side B). Each family is a sequence of exact
//! ratios `C_n = q_n / p_n` whose numerators and denominators satisfy a
//! three-term recursion with an alternating multiplier
//! `(G-1) * kbar(K, .)`, where `kbar` is `K` at even indices and 1 at odd
//! indices.
//!
//! For `G = 2` and `K < 4` both sequences are finite (side A descends to 0,
//! side B ascends to infinity); otherwise they are infinite and converge to
//! the roots of `x^2 - (G-1)K x + K`.
//!
//! # Examples
//!
//! ```
//! use ia_dof::sequence::{c_sequence, Side};
//! use ia_dof::rational::Rat;
//!
//! let c = c_sequence(3, 2, Side::A, 3);
//! assert_eq!(c[0], Rat::infinity());
//! assert_eq!(c[1], Rat::from_int(4));
//! assert_eq!(c[2], Rat::new(7, 2));
//! assert_eq!(c[3], Rat::new(24, 7));
//! ```

use num::bigint::BigInt;
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::Rat;

/// Which boundary family a sequence or pair belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// Descending family; brackets ratios with many transmit antennas.
    A,
    /// Ascending family; brackets ratios with many receive antennas.
    B,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::A => write!(f, "A"),
            Side::B => write!(f, "B"),
        }
    }
}

/// Alternating per-step user-count factor: `K` at even `n`, 1 at odd `n`.
pub fn kbar(k: u64, n: i64) -> u64 {
    if n.rem_euclid(2) == 0 {
        k
    } else {
        1
    }
}

/// One numerator/denominator pair `(p_n, q_n)` with `C_n = q_n / p_n`.
///
/// Invariants: entries at `n >= 0` are nonnegative; for `n >= 1` the pair is
/// coprime. Index `-1` holds the recursion seed, which has one negative
/// entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PQPair {
    pub side: Side,
    pub n: i64,
    pub p: BigInt,
    pub q: BigInt,
}

impl PQPair {
    /// The boundary ratio `C_n = q_n / p_n` (infinite when `p_n = 0`).
    pub fn ratio(&self) -> Rat {
        Rat::new(self.q.clone(), self.p.clone())
    }
}

fn check_gk(g: u64, k: u64) {
    assert!(g >= 2, "need at least two cells, got G = {g}");
    assert!(k >= 1, "need at least one user per cell, got K = {k}");
}

/// `(G-1)^2 K^2 - 4K`: negative exactly when both sequences are finite,
/// zero when they share a single rational limit.
pub fn discriminant(g: u64, k: u64) -> BigInt {
    let gk = BigInt::from(g - 1) * BigInt::from(k);
    &gk * &gk - BigInt::from(4) * BigInt::from(k)
}

/// The pair sequence for one side, from `n = -1` up to `n_max` or up to the
/// last index before an entry would become negative, whichever is earlier.
///
/// # Examples
///
/// ```
/// use ia_dof::sequence::{pq_sequence, Side};
/// use num::bigint::BigInt;
///
/// // Finite descending family for G = 2, K = 1: ratios {inf, 1, 0}.
/// let pairs = pq_sequence(2, 1, Side::A, 10);
/// let qs: Vec<i64> = pairs.iter().map(|e| i64::try_from(&e.q).unwrap()).collect();
/// assert_eq!(qs, vec![0, 1, 1, 0]);
/// assert_eq!(pairs.last().unwrap().n, 2);
/// ```
pub fn pq_sequence(g: u64, k: u64, side: Side, n_max: i64) -> Vec<PQPair> {
    check_gk(g, k);
    assert!(n_max >= -1, "n_max must be at least -1, got {n_max}");
    let (seed_prev, seed_cur) = match side {
        Side::A => ((BigInt::from(-1), BigInt::zero()), (BigInt::zero(), BigInt::from(1))),
        Side::B => ((BigInt::zero(), BigInt::from(-1)), (BigInt::from(1), BigInt::zero())),
    };
    let mut pairs = vec![
        PQPair { side, n: -1, p: seed_prev.0, q: seed_prev.1 },
        PQPair { side, n: 0, p: seed_cur.0, q: seed_cur.1 },
    ];
    for n in 1..=n_max {
        let factor_index = match side {
            Side::A => n - 1,
            Side::B => n,
        };
        let mult = BigInt::from(g - 1) * BigInt::from(kbar(k, factor_index));
        let prev = &pairs[pairs.len() - 2];
        let cur = &pairs[pairs.len() - 1];
        let p = &mult * &cur.p - &prev.p;
        let q = &mult * &cur.q - &prev.q;
        if p.is_negative() || q.is_negative() {
            break;
        }
        pairs.push(PQPair { side, n, p, q });
    }
    pairs.truncate((n_max + 2) as usize);
    pairs
}

/// The boundary ratios `C_0..C_n` for one side, exact.
///
/// Values are produced from the pair recursion (`C_n = q_n / p_n`), which is
/// identical to the direct continued-fraction recursion on its whole domain
/// but also handles the truncation step of the finite sequences cleanly.
/// Returns entries for `n = 0..=n_max`, stopping early where a finite
/// sequence ends.
pub fn c_sequence(g: u64, k: u64, side: Side, n_max: i64) -> Vec<Rat> {
    assert!(n_max >= 0, "n_max must be at least 0, got {n_max}");
    pq_sequence(g, k, side, n_max)
        .iter()
        .skip(1)
        .map(PQPair::ratio)
        .collect()
}

/// Errors from the sequence-limit and touch-point queries.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SequenceError {
    #[error("the boundary sequences for G = {g}, K = {k} are finite and have no limit")]
    NoLimit { g: u64, k: u64 },
    #[error("boundary index {n} is outside the produced range of side {side} for G = {g}, K = {k} (last index {max_n})")]
    IndexBeyondEnd { g: u64, k: u64, side: Side, n: i64, max_n: i64 },
}

/// Limit of the side's boundary sequence in double precision:
/// `((G-1)K +/- sqrt((G-1)^2 K^2 - 4K)) / 2` (side A takes `+`).
///
/// Errors for `G = 2, K < 4`, where the sequences are finite.
pub fn c_limit(g: u64, k: u64, side: Side) -> Result<f64, SequenceError> {
    check_gk(g, k);
    let disc = discriminant(g, k);
    if disc.is_negative() {
        return Err(SequenceError::NoLimit { g, k });
    }
    use num::ToPrimitive;
    let b = ((g - 1) * k) as f64;
    let root = disc
        .to_f64()
        .expect("discriminant fits f64 for supported parameters")
        .sqrt();
    Ok(match side {
        Side::A => (b + root) / 2.0,
        Side::B => (b - root) / 2.0,
    })
}

/// True when both sequences converge to the single rational limit
/// `(G-1)K / 2`, i.e. the discriminant vanishes.
pub fn has_rational_limit(g: u64, k: u64) -> bool {
    discriminant(g, k).is_zero()
}

/// The ratio at which the quantity bound meets the proper bound between
/// consecutive boundary ratios: side A takes
/// `(K + C_{n+1}) / (1 + K / C_n)`, side B `(K + C_n) / (1 + K / C_{n+1})`.
///
/// Errors when index `n + 1` is beyond the end of a finite sequence.
///
/// # Examples
///
/// ```
/// use ia_dof::sequence::{d_boundary, Side};
/// use ia_dof::rational::Rat;
///
/// assert_eq!(d_boundary(3, 2, Side::A, 1).unwrap(), Rat::new(11, 3));
/// assert_eq!(d_boundary(3, 1, Side::B, 2).unwrap(), Rat::new(5, 7));
/// ```
pub fn d_boundary(g: u64, k: u64, side: Side, n: i64) -> Result<Rat, SequenceError> {
    assert!(n >= 0, "touch-point index must be nonnegative, got {n}");
    let pairs = pq_sequence(g, k, side, n + 1);
    let max_n = pairs.last().expect("sequence is never empty").n;
    if max_n < n + 1 {
        return Err(SequenceError::IndexBeyondEnd { g, k, side, n, max_n });
    }
    let c_n = pairs[(n + 1) as usize].ratio();
    let c_next = pairs[(n + 2) as usize].ratio();
    let k_rat = Rat::from_int(k);
    Ok(match side {
        Side::A => (k_rat.clone() + c_next) / (Rat::one() + k_rat / c_n),
        Side::B => (k_rat.clone() + c_n) / (Rat::one() + k_rat / c_next),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratios(g: u64, k: u64, side: Side, n_max: i64) -> Vec<Rat> {
        c_sequence(g, k, side, n_max)
    }

    #[test]
    fn kbar_alternates_with_even_anchor() {
        assert_eq!(kbar(5, 0), 5);
        assert_eq!(kbar(5, 1), 1);
        assert_eq!(kbar(5, 2), 5);
        assert_eq!(kbar(5, -1), 1);
        assert_eq!(kbar(5, -2), 5);
    }

    #[test]
    fn side_a_examples() {
        assert_eq!(
            ratios(3, 1, Side::A, 3),
            vec![Rat::infinity(), Rat::from_int(2), Rat::new(3, 2), Rat::new(4, 3)]
        );
        assert_eq!(
            ratios(3, 2, Side::A, 3),
            vec![Rat::infinity(), Rat::from_int(4), Rat::new(7, 2), Rat::new(24, 7)]
        );
    }

    #[test]
    fn side_b_examples() {
        assert_eq!(
            ratios(3, 1, Side::B, 3),
            vec![Rat::zero(), Rat::new(1, 2), Rat::new(2, 3), Rat::new(3, 4)]
        );
        assert_eq!(
            ratios(3, 2, Side::B, 2),
            vec![Rat::zero(), Rat::new(1, 2), Rat::new(4, 7)]
        );
    }

    #[test]
    fn finite_sequences_truncate() {
        assert_eq!(
            ratios(2, 1, Side::A, 99),
            vec![Rat::infinity(), Rat::one(), Rat::zero()]
        );
        assert_eq!(
            ratios(2, 2, Side::A, 99),
            vec![Rat::infinity(), Rat::from_int(2), Rat::one(), Rat::zero()]
        );
        assert_eq!(
            ratios(2, 3, Side::A, 99),
            vec![
                Rat::infinity(),
                Rat::from_int(3),
                Rat::from_int(2),
                Rat::new(3, 2),
                Rat::one(),
                Rat::zero()
            ]
        );
        assert_eq!(
            ratios(2, 1, Side::B, 99),
            vec![Rat::zero(), Rat::one(), Rat::infinity()]
        );
        assert_eq!(
            ratios(2, 2, Side::B, 99),
            vec![Rat::zero(), Rat::one(), Rat::from_int(2), Rat::infinity()]
        );
    }

    #[test]
    fn direct_recursion_matches_pairs() {
        for (g, k) in [(2u64, 1u64), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (4, 3), (5, 4)] {
            let k_rat = Rat::from_int(k);
            let gk = Rat::from_int((g - 1) * k);
            let a = ratios(g, k, Side::A, 8);
            for i in 1..a.len() {
                let expect = gk.clone() - k_rat.clone() / a[i - 1].clone();
                assert_eq!(a[i], expect, "side A (G={g}, K={k}, n={i})");
            }
            let b = ratios(g, k, Side::B, 8);
            for i in 1..b.len() {
                let expect =
                    Rat::one() / (Rat::from_int(g - 1) - b[i - 1].clone() / k_rat.clone());
                // At a finite side-B endpoint the direct recursion crosses a
                // signed zero; the pair form keeps the +inf endpoint.
                if b[i] == Rat::infinity() && i + 1 == b.len() {
                    continue;
                }
                assert_eq!(b[i], expect, "side B (G={g}, K={k}, n={i})");
            }
        }
    }

    #[test]
    fn pairs_are_coprime_and_monotone() {
        use num::Integer;
        for (g, k) in [(2u64, 4u64), (3, 1), (3, 2), (4, 1), (4, 3), (5, 4)] {
            for side in [Side::A, Side::B] {
                let pairs = pq_sequence(g, k, side, 12);
                for pair in pairs.iter().filter(|e| e.n >= 1) {
                    assert_eq!(pair.p.gcd(&pair.q), BigInt::from(1), "G={g} K={k} {side} n={}", pair.n);
                }
                let c: Vec<Rat> = pairs.iter().skip(1).map(PQPair::ratio).collect();
                for w in c.windows(2) {
                    match side {
                        Side::A => assert!(w[0] > w[1]),
                        Side::B => assert!(w[0] < w[1]),
                    }
                }
            }
        }
    }

    #[test]
    fn q_divisibility_by_k() {
        use num::Integer;
        for (g, k) in [(3u64, 2u64), (3, 4), (4, 3), (5, 4), (2, 5)] {
            let a = pq_sequence(g, k, Side::A, 11);
            for pair in a.iter().filter(|e| e.n >= 1 && e.n % 2 == 1) {
                assert!(pair.q.is_multiple_of(&BigInt::from(k)), "A side odd q");
            }
            let b = pq_sequence(g, k, Side::B, 11);
            for pair in b.iter().filter(|e| e.n >= 2 && e.n % 2 == 0) {
                assert!(pair.q.is_multiple_of(&BigInt::from(k)), "B side even q");
            }
        }
    }

    #[test]
    fn limits_and_errors() {
        assert!(matches!(c_limit(2, 1, Side::A), Err(SequenceError::NoLimit { .. })));
        assert!(matches!(c_limit(2, 3, Side::B), Err(SequenceError::NoLimit { .. })));
        let a = c_limit(3, 2, Side::A).unwrap();
        let b = c_limit(3, 2, Side::B).unwrap();
        assert!((a - (2.0 + 2.0_f64.sqrt())).abs() < 1e-12);
        assert!((b - (2.0 - 2.0_f64.sqrt())).abs() < 1e-12);
        // Vieta: sum (G-1)K, product K.
        assert!((a + b - 4.0).abs() < 1e-12);
        assert!((a * b - 2.0).abs() < 1e-12);
        assert_eq!(c_limit(3, 1, Side::A).unwrap(), 1.0);
        assert_eq!(c_limit(2, 4, Side::B).unwrap(), 2.0);
        assert!(has_rational_limit(3, 1));
        assert!(has_rational_limit(2, 4));
        assert!(!has_rational_limit(3, 2));
    }

    #[test]
    fn touch_points() {
        assert_eq!(d_boundary(3, 2, Side::A, 0).unwrap(), Rat::from_int(6));
        assert_eq!(d_boundary(3, 2, Side::A, 1).unwrap(), Rat::new(11, 3));
        assert_eq!(d_boundary(3, 1, Side::B, 2).unwrap(), Rat::new(5, 7));
        // Interleaving: C_{n+1} < D_n < C_n on side A.
        for n in 0..6 {
            let d = d_boundary(3, 2, Side::A, n).unwrap();
            let c = c_sequence(3, 2, Side::A, n + 1);
            assert!(c[(n + 1) as usize] < d && d < c[n as usize]);
        }
        // Out-of-range index on a finite sequence errors.
        assert!(matches!(
            d_boundary(2, 1, Side::A, 2),
            Err(SequenceError::IndexBeyondEnd { .. })
        ));
    }
}
