//! Thin safe wrappers over the handful of LAPACK routines this crate needs.
//!
//! Everything here works on `ndarray` containers in row-major order and
//! converts to Fortran column-major at the boundary; at the matrix sizes this
//! crate targets (dense, small) the copies are irrelevant.
//!
//! Only the complex double-precision routines are bound: real pencils share
//! the complex code path and realness is restored (and asserted) at the API
//! layer, not here.

use crate::error::{Error, Result};
use crate::{CMat, CVec};
use ndarray::{Array1, Array2};
use num_complex::Complex64;
use std::os::raw::c_char;

extern "C" {
    fn zgeev_(
        jobvl: *const c_char,
        jobvr: *const c_char,
        n: *const i32,
        a: *mut Complex64,
        lda: *const i32,
        w: *mut Complex64,
        vl: *mut Complex64,
        ldvl: *const i32,
        vr: *mut Complex64,
        ldvr: *const i32,
        work: *mut Complex64,
        lwork: *const i32,
        rwork: *mut f64,
        info: *mut i32,
    );

    fn zgesvd_(
        jobu: *const c_char,
        jobvt: *const c_char,
        m: *const i32,
        n: *const i32,
        a: *mut Complex64,
        lda: *const i32,
        s: *mut f64,
        u: *mut Complex64,
        ldu: *const i32,
        vt: *mut Complex64,
        ldvt: *const i32,
        work: *mut Complex64,
        lwork: *const i32,
        rwork: *mut f64,
        info: *mut i32,
    );

    fn zgesv_(
        n: *const i32,
        nrhs: *const i32,
        a: *mut Complex64,
        lda: *const i32,
        ipiv: *mut i32,
        b: *mut Complex64,
        ldb: *const i32,
        info: *mut i32,
    );

    fn zgetrf_(
        m: *const i32,
        n: *const i32,
        a: *mut Complex64,
        lda: *const i32,
        ipiv: *mut i32,
        info: *mut i32,
    );

    fn zgetri_(
        n: *const i32,
        a: *mut Complex64,
        lda: *const i32,
        ipiv: *const i32,
        work: *mut Complex64,
        lwork: *const i32,
        info: *mut i32,
    );
}

/// Row-major `ndarray` matrix -> column-major contiguous buffer.
fn to_col_major(a: &CMat) -> Vec<Complex64> {
    let (m, n) = a.dim();
    let mut buf = Vec::with_capacity(m * n);
    for j in 0..n {
        for i in 0..m {
            buf.push(a[[i, j]]);
        }
    }
    buf
}

/// Column-major buffer -> row-major `ndarray` matrix.
fn from_col_major(buf: &[Complex64], m: usize, n: usize) -> CMat {
    let mut out = Array2::zeros((m, n));
    for j in 0..n {
        for i in 0..m {
            out[[i, j]] = buf[j * m + i];
        }
    }
    out
}

/// Eigenvalues of a general complex square matrix (zgeev, no vectors).
pub fn eigvals(a: &CMat) -> Result<Vec<Complex64>> {
    let (m, n) = a.dim();
    assert_eq!(m, n, "eigvals requires a square matrix");
    if n == 0 {
        return Ok(Vec::new());
    }
    let ni = n as i32;
    let mut buf = to_col_major(a);
    let mut w = vec![Complex64::default(); n];
    let mut rwork = vec![0.0f64; 2 * n];
    let jobn = b'N' as c_char;
    let mut info = 0i32;

    // Workspace query, then the real call.
    let mut work_query = [Complex64::default()];
    let lwork_query = -1i32;
    unsafe {
        zgeev_(
            &jobn, &jobn, &ni, buf.as_mut_ptr(), &ni, w.as_mut_ptr(),
            std::ptr::null_mut(), &ni, std::ptr::null_mut(), &ni,
            work_query.as_mut_ptr(), &lwork_query, rwork.as_mut_ptr(), &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "zgeev", info });
    }
    let lwork = work_query[0].re as i32;
    let mut work = vec![Complex64::default(); lwork.max(1) as usize];
    unsafe {
        zgeev_(
            &jobn, &jobn, &ni, buf.as_mut_ptr(), &ni, w.as_mut_ptr(),
            std::ptr::null_mut(), &ni, std::ptr::null_mut(), &ni,
            work.as_mut_ptr(), &lwork, rwork.as_mut_ptr(), &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "zgeev", info });
    }
    Ok(w)
}

/// Full singular value decomposition `a = u * diag(s) * vh`.
pub struct Svd {
    pub u: CMat,
    pub s: Vec<f64>,
    /// Conjugate-transposed right factor (`n x n`); its *rows* beyond the
    /// numerical rank conjugate-transpose into a nullspace basis.
    pub vh: CMat,
}

pub fn svd(a: &CMat) -> Result<Svd> {
    let (m, n) = a.dim();
    let k = m.min(n);
    if m == 0 || n == 0 {
        return Ok(Svd {
            u: Array2::eye(m),
            s: vec![],
            vh: Array2::eye(n),
        });
    }
    let (mi, ni) = (m as i32, n as i32);
    let mut buf = to_col_major(a);
    let mut s = vec![0.0f64; k];
    let mut u = vec![Complex64::default(); m * m];
    let mut vt = vec![Complex64::default(); n * n];
    let mut rwork = vec![0.0f64; 5 * k];
    let joba = b'A' as c_char;
    let mut info = 0i32;

    let mut work_query = [Complex64::default()];
    let lwork_query = -1i32;
    unsafe {
        zgesvd_(
            &joba, &joba, &mi, &ni, buf.as_mut_ptr(), &mi, s.as_mut_ptr(),
            u.as_mut_ptr(), &mi, vt.as_mut_ptr(), &ni,
            work_query.as_mut_ptr(), &lwork_query, rwork.as_mut_ptr(), &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "zgesvd", info });
    }
    let lwork = work_query[0].re as i32;
    let mut work = vec![Complex64::default(); lwork.max(1) as usize];
    unsafe {
        zgesvd_(
            &joba, &joba, &mi, &ni, buf.as_mut_ptr(), &mi, s.as_mut_ptr(),
            u.as_mut_ptr(), &mi, vt.as_mut_ptr(), &ni,
            work.as_mut_ptr(), &lwork, rwork.as_mut_ptr(), &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "zgesvd", info });
    }
    Ok(Svd {
        u: from_col_major(&u, m, m),
        s,
        vh: from_col_major(&vt, n, n),
    })
}

/// Solve `a * x = b` for multiple right-hand sides by LU with partial pivoting.
pub fn solve_many(a: &CMat, b: &CMat) -> Result<CMat> {
    let (m, n) = a.dim();
    assert_eq!(m, n, "solve requires a square matrix");
    let (bm, nrhs) = b.dim();
    if bm != n {
        return Err(Error::Dimension(format!(
            "solve: matrix is {n}x{n} but right-hand side has {bm} rows"
        )));
    }
    if n == 0 {
        return Ok(b.clone());
    }
    let ni = n as i32;
    let nrhsi = nrhs as i32;
    let mut abuf = to_col_major(a);
    let mut bbuf = to_col_major(b);
    let mut ipiv = vec![0i32; n];
    let mut info = 0i32;
    unsafe {
        zgesv_(
            &ni, &nrhsi, abuf.as_mut_ptr(), &ni, ipiv.as_mut_ptr(),
            bbuf.as_mut_ptr(), &ni, &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "zgesv", info });
    }
    Ok(from_col_major(&bbuf, n, nrhs))
}

/// Solve `a * x = b` for a single right-hand side.
pub fn solve(a: &CMat, b: &CVec) -> Result<CVec> {
    let n = b.len();
    let bmat = b.clone().into_shape((n, 1)).expect("vector reshape");
    let x = solve_many(a, &bmat)?;
    Ok(x.column(0).to_owned())
}

/// Determinant via LU factorization.
pub fn det(a: &CMat) -> Result<Complex64> {
    let (m, n) = a.dim();
    assert_eq!(m, n, "det requires a square matrix");
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let ni = n as i32;
    let mut buf = to_col_major(a);
    let mut ipiv = vec![0i32; n];
    let mut info = 0i32;
    unsafe {
        zgetrf_(&ni, &ni, buf.as_mut_ptr(), &ni, ipiv.as_mut_ptr(), &mut info);
    }
    if info < 0 {
        return Err(Error::Lapack { routine: "zgetrf", info });
    }
    // info > 0 means an exactly-zero pivot: determinant is exactly zero.
    let mut d = Complex64::new(1.0, 0.0);
    for i in 0..n {
        d *= buf[i * n + i];
        if ipiv[i] != (i as i32 + 1) {
            d = -d;
        }
    }
    Ok(d)
}

/// Matrix inverse via LU.
pub fn inv(a: &CMat) -> Result<CMat> {
    let (m, n) = a.dim();
    assert_eq!(m, n, "inv requires a square matrix");
    if n == 0 {
        return Ok(a.clone());
    }
    let ni = n as i32;
    let mut buf = to_col_major(a);
    let mut ipiv = vec![0i32; n];
    let mut info = 0i32;
    unsafe {
        zgetrf_(&ni, &ni, buf.as_mut_ptr(), &ni, ipiv.as_mut_ptr(), &mut info);
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "zgetrf", info });
    }
    let mut work_query = [Complex64::default()];
    let lwork_query = -1i32;
    unsafe {
        zgetri_(
            &ni, buf.as_mut_ptr(), &ni, ipiv.as_ptr(),
            work_query.as_mut_ptr(), &lwork_query, &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "zgetri", info });
    }
    let lwork = work_query[0].re as i32;
    let mut work = vec![Complex64::default(); lwork.max(1) as usize];
    unsafe {
        zgetri_(
            &ni, buf.as_mut_ptr(), &ni, ipiv.as_ptr(),
            work.as_mut_ptr(), &lwork, &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "zgetri", info });
    }
    Ok(from_col_major(&buf, n, n))
}

/// Numerical rank with the crate's relative threshold
/// (`tol_rank * sigma_max * max_dim`), together with the singular values.
pub fn rank_svd(a: &CMat, tol_rank: f64) -> Result<(usize, Vec<f64>)> {
    let decomp = svd(a)?;
    let smax = decomp.s.first().copied().unwrap_or(0.0);
    let (m, n) = a.dim();
    let thresh = tol_rank * smax * m.max(n) as f64;
    let rank = decomp.s.iter().filter(|&&x| x > thresh).count();
    Ok((rank, decomp.s))
}

/// Orthonormal nullspace basis (columns) with the crate's rank threshold.
pub fn nullspace(a: &CMat, tol_rank: f64) -> Result<CMat> {
    let decomp = svd(a)?;
    let smax = decomp.s.first().copied().unwrap_or(0.0);
    let (m, n) = a.dim();
    let thresh = tol_rank * smax * m.max(n) as f64;
    let rank = decomp.s.iter().filter(|&&x| x > thresh).count();
    // Rows rank..n of vh conjugate into nullspace columns.
    let mut basis = Array2::zeros((n, n - rank));
    for (col, row) in (rank..n).enumerate() {
        for i in 0..n {
            basis[[i, col]] = decomp.vh[[row, i]].conj();
        }
    }
    Ok(basis)
}

/// Orthonormal basis of the `k`-dimensional near-nullspace: the right
/// singular vectors of the `k` smallest singular values, regardless of
/// their size. For callers that already know the nullity from a validated
/// source and must not re-litigate it through a threshold.
pub fn nullspace_dim(a: &CMat, k: usize) -> Result<CMat> {
    let decomp = svd(a)?;
    let n = a.dim().1;
    let k = k.min(n);
    let mut basis = Array2::zeros((n, k));
    for (col, row) in ((n - k)..n).enumerate() {
        for i in 0..n {
            basis[[i, col]] = decomp.vh[[row, i]].conj();
        }
    }
    Ok(basis)
}

/// 2-norm condition number.
pub fn cond2(a: &CMat) -> Result<f64> {
    let decomp = svd(a)?;
    let smax = decomp.s.first().copied().unwrap_or(0.0);
    let smin = decomp.s.last().copied().unwrap_or(0.0);
    if smin == 0.0 {
        Ok(f64::INFINITY)
    } else {
        Ok(smax / smin)
    }
}

/// Minimum-norm least-squares solution of `a x ≈ b` through the SVD, with an
/// explicit rank cut so callers can detect deficiency.
pub fn lstsq(a: &CMat, b: &CVec, tol_rank: f64) -> Result<(CVec, usize)> {
    let (m, n) = a.dim();
    if b.len() != m {
        return Err(Error::Dimension(format!(
            "lstsq: matrix has {m} rows but rhs has {}",
            b.len()
        )));
    }
    let decomp = svd(a)?;
    let smax = decomp.s.first().copied().unwrap_or(0.0);
    let thresh = tol_rank * smax * m.max(n) as f64;
    let mut x = Array1::zeros(n);
    let mut rank = 0usize;
    for (i, &sv) in decomp.s.iter().enumerate() {
        if sv <= thresh {
            break;
        }
        rank += 1;
        // coefficient along the i-th singular direction: (u_i^* b) / s_i
        let mut ub = Complex64::default();
        for r in 0..m {
            ub += decomp.u[[r, i]].conj() * b[r];
        }
        let coef = ub / sv;
        for c in 0..n {
            x[c] += decomp.vh[[i, c]].conj() * coef;
        }
    }
    Ok((x, rank))
}

/// Max-row-sum (infinity) norm.
pub fn norm_inf(a: &CMat) -> f64 {
    let mut best = 0.0f64;
    for row in a.rows() {
        let s: f64 = row.iter().map(|z| z.norm()).sum();
        best = best.max(s);
    }
    best
}
