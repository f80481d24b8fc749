//! Complex dense linear algebra helpers: numerical rank, orthonormal null
//! spaces, random orthonormal frames, and a plain-text matrix format.
//!
//! Ranks are measured from singular values. Null spaces come from a
//! column-pivoted QR of the adjoint, padded to square so the factorization
//! exposes a full unitary basis; the trailing columns beyond the measured
//! rank span the null space to machine precision, which is considerably
//! more accurate on wide rank-deficient inputs than assembling near-null
//! singular vectors from a thin SVD.

use nalgebra::{Complex, DMatrix};
use rand::Rng;
use rand_distr::StandardNormal;
use std::io::{self, BufRead, Write};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;

/// Singular values of `a`, largest first.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    a.clone().singular_values().iter().copied().collect()
}

/// Number of singular values above `rank_tol` times the largest one.
///
/// A zero matrix (or one with nonpositive leading singular value) has rank
/// zero.
pub fn numerical_rank(a: &CMat, rank_tol: f64) -> usize {
    let sv = singular_values(a);
    match sv.first() {
        None => 0,
        Some(&max) if max <= 0.0 => 0,
        Some(&max) => sv.iter().filter(|&&s| s > rank_tol * max).count(),
    }
}

/// Orthonormal basis of the right null space of `a`, one column per null
/// dimension (zero columns when `a` has full column rank).
pub fn null_space(a: &CMat, rank_tol: f64) -> CMat {
    let cols = a.ncols();
    let rank = numerical_rank(a, rank_tol);
    if rank >= cols {
        return CMat::zeros(cols, 0);
    }
    // Square up the adjoint with zero columns when it is narrow, so the
    // decomposition yields a complete unitary Q; its trailing columns are
    // orthogonal to the column space of the adjoint, i.e. they span
    // null(a).
    let adj = a.adjoint();
    let m = if adj.ncols() < cols {
        let mut padded = CMat::zeros(cols, cols);
        padded.view_mut((0, 0), (cols, adj.ncols())).copy_from(&adj);
        padded
    } else {
        adj
    };
    let q = m.col_piv_qr().q();
    q.columns(rank, cols - rank).clone_owned()
}

/// Random matrix with orthonormal columns, `rows >= cols`.
pub fn random_orthonormal(rows: usize, cols: usize, rng: &mut impl Rng) -> CMat {
    assert!(rows >= cols, "orthonormal frame needs rows >= cols");
    let g = random_gaussian(rows, cols, rng);
    let q = g.qr().q();
    q.columns(0, cols).clone_owned()
}

/// Matrix of i.i.d. standard complex Gaussian entries (unit variance per
/// entry, split evenly between the real and imaginary parts).
pub fn random_gaussian(rows: usize, cols: usize, rng: &mut impl Rng) -> CMat {
    let scale = 0.5f64.sqrt();
    let data: Vec<C64> = (0..rows * cols)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex::new(re * scale, im * scale)
        })
        .collect();
    CMat::from_row_slice(rows, cols, &data)
}

/// Frobenius norm.
pub fn fro_norm(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Concatenates equal-height blocks left to right.
pub fn hstack(blocks: &[CMat]) -> CMat {
    assert!(!blocks.is_empty(), "hstack of nothing");
    let rows = blocks[0].nrows();
    let cols = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMat::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        assert_eq!(b.nrows(), rows, "hstack blocks must share a height");
        out.view_mut((0, at), (rows, b.ncols())).copy_from(b);
        at += b.ncols();
    }
    out
}

/// Concatenates equal-width blocks top to bottom.
pub fn vstack(blocks: &[CMat]) -> CMat {
    assert!(!blocks.is_empty(), "vstack of nothing");
    let cols = blocks[0].ncols();
    let rows = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMat::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        assert_eq!(b.ncols(), cols, "vstack blocks must share a width");
        out.view_mut((at, 0), (b.nrows(), cols)).copy_from(b);
        at += b.nrows();
    }
    out
}

/// Scales every nonzero column to unit Euclidean norm (zero columns are
/// left alone; downstream rank checks flag them).
pub fn normalize_columns(a: &mut CMat) {
    for mut col in a.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 {
            col /= C64::new(norm, 0.0);
        }
    }
}

/// Writes `a` as text: a "rows cols" header line, then one line per row
/// with "re,im" entries separated by spaces.
pub fn write_matrix(w: &mut impl Write, a: &CMat) -> io::Result<()> {
    writeln!(w, "{} {}", a.nrows(), a.ncols())?;
    for r in 0..a.nrows() {
        let row: Vec<String> =
            (0..a.ncols()).map(|c| format!("{},{}", a[(r, c)].re, a[(r, c)].im)).collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}

/// Reads a matrix written by [`write_matrix`]; entries may be separated by
/// any whitespace.
pub fn read_matrix(r: &mut impl BufRead) -> io::Result<CMat> {
    let bad = |msg: &str| io::Error::new(io::ErrorKind::InvalidData, msg.to_string());
    let mut header = String::new();
    r.read_line(&mut header)?;
    let mut dims = header.split_whitespace();
    let rows: usize =
        dims.next().ok_or_else(|| bad("missing row count"))?.parse().map_err(|_| bad("bad row count"))?;
    let cols: usize =
        dims.next().ok_or_else(|| bad("missing column count"))?.parse().map_err(|_| bad("bad column count"))?;
    let mut body = String::new();
    r.read_to_string(&mut body)?;
    let mut data = Vec::with_capacity(rows * cols);
    for tok in body.split_whitespace() {
        let (re, im) = tok.split_once(',').ok_or_else(|| bad("entry is not a re,im pair"))?;
        let re: f64 = re.parse().map_err(|_| bad("bad real part"))?;
        let im: f64 = im.parse().map_err(|_| bad("bad imaginary part"))?;
        data.push(Complex::new(re, im));
    }
    if data.len() != rows * cols {
        return Err(bad("entry count does not match the header"));
    }
    Ok(CMat::from_row_slice(rows, cols, &data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rank_of_constructed_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_gaussian(6, 4, &mut rng);
        assert_eq!(numerical_rank(&a, 1e-6), 4);
        let b = random_gaussian(6, 2, &mut rng);
        let low = &b * b.adjoint();
        assert_eq!(numerical_rank(&low, 1e-6), 2);
        assert_eq!(numerical_rank(&CMat::zeros(3, 5), 1e-6), 0);
    }

    #[test]
    fn null_space_is_orthonormal_and_annihilated() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // Wide rank-deficient matrix: 16 x 24 of rank 12.
        let left = random_gaussian(16, 12, &mut rng);
        let right = random_gaussian(12, 24, &mut rng);
        let a = &left * &right;
        let ns = null_space(&a, 1e-6);
        assert_eq!(ns.ncols(), 12);
        let residual = fro_norm(&(&a * &ns)) / (fro_norm(&a) * fro_norm(&ns));
        assert!(residual < 1e-12, "null-space residual {residual}");
        let gram = ns.adjoint() * &ns;
        let eye = CMat::identity(12, 12);
        assert!(fro_norm(&(gram - eye)) < 1e-12);
    }

    #[test]
    fn null_space_of_full_rank_is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_gaussian(5, 3, &mut rng);
        assert_eq!(null_space(&a, 1e-6).ncols(), 0);
    }

    #[test]
    fn orthonormal_frame() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let q = random_orthonormal(9, 4, &mut rng);
        let gram = q.adjoint() * &q;
        assert!(fro_norm(&(gram - CMat::identity(4, 4))) < 1e-12);
    }

    #[test]
    fn matrix_io_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_gaussian(4, 7, &mut rng);
        let mut buf = Vec::new();
        write_matrix(&mut buf, &a).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("4 7\n"));
        let b = read_matrix(&mut &buf[..]).unwrap();
        assert_eq!(a, b);
    }
}
