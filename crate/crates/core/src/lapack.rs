//! Thin safe wrappers around the LAPACK routines this crate needs:
//! zheevr (hermitian eigenpairs, lowest-k subset) and dstev (symmetric
//! tridiagonal eigendecomposition).

// Pulls in the link directives for the system BLAS/LAPACK.
extern crate openblas_src;

use std::ffi::c_char;

use num_complex::Complex64;

use crate::error::{NcqmError, Result};

/// Lowest `k` eigenpairs of a hermitian matrix given in column-major order.
///
/// Consumes (overwrites) the input buffer. Returns eigenvalues ascending and
/// eigenvectors as `k` contiguous column vectors of length `n`.
pub fn hermitian_lowest_eigenpairs(
    a: &mut [Complex64],
    n: usize,
    k: usize,
) -> Result<(Vec<f64>, Vec<Complex64>)> {
    assert_eq!(a.len(), n * n, "matrix buffer size");
    assert!(k >= 1 && k <= n, "1 <= k <= n required");
    let n_i = n as i32;
    let jobz = b'V' as c_char;
    let range = b'I' as c_char;
    let uplo = b'L' as c_char;
    let (vl, vu) = (0.0_f64, 0.0_f64);
    let (il, iu) = (1_i32, k as i32);
    let abstol = -1.0_f64; // default tolerance; eigenvectors are orthonormal with zheevr
    let mut m_found = 0_i32;
    let mut w = vec![0.0_f64; n];
    let mut z = vec![Complex64::default(); n * k];
    let mut isuppz = vec![0_i32; 2 * n.max(1)];
    let mut info = 0_i32;

    // Workspace query.
    let mut work_q = [Complex64::default()];
    let mut rwork_q = [0.0_f64];
    let mut iwork_q = [0_i32];
    let neg1 = -1_i32;
    unsafe {
        lapack_sys::zheevr_(
            &jobz, &range, &uplo, &n_i,
            a.as_mut_ptr().cast(), &n_i,
            &vl, &vu, &il, &iu, &abstol, &mut m_found,
            w.as_mut_ptr(), z.as_mut_ptr().cast(), &n_i,
            isuppz.as_mut_ptr(),
            work_q.as_mut_ptr().cast(), &neg1,
            rwork_q.as_mut_ptr(), &neg1,
            iwork_q.as_mut_ptr(), &neg1,
            &mut info,
        );
    }
    if info != 0 {
        return Err(NcqmError::Lapack { routine: "zheevr (workspace query)", info });
    }
    let lwork = work_q[0].re as i32;
    let lrwork = rwork_q[0] as i32;
    let liwork = iwork_q[0];
    let mut work = vec![Complex64::default(); lwork.max(1) as usize];
    let mut rwork = vec![0.0_f64; lrwork.max(1) as usize];
    let mut iwork = vec![0_i32; liwork.max(1) as usize];

    unsafe {
        lapack_sys::zheevr_(
            &jobz, &range, &uplo, &n_i,
            a.as_mut_ptr().cast(), &n_i,
            &vl, &vu, &il, &iu, &abstol, &mut m_found,
            w.as_mut_ptr(), z.as_mut_ptr().cast(), &n_i,
            isuppz.as_mut_ptr(),
            work.as_mut_ptr().cast(), &lwork,
            rwork.as_mut_ptr(), &lrwork,
            iwork.as_mut_ptr(), &liwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(NcqmError::Lapack { routine: "zheevr", info });
    }
    if (m_found as usize) < k {
        return Err(NcqmError::NonConvergence {
            what: "zheevr eigenpair extraction",
            iterations: m_found as usize,
            step: None,
        });
    }
    w.truncate(k);
    Ok((w, z))
}

/// Full eigendecomposition of a symmetric tridiagonal matrix.
///
/// Returns (eigenvalues ascending, eigenvectors column-major n×n).
pub fn tridiagonal_eigenpairs(diag: &[f64], offdiag: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    assert!(offdiag.len() + 1 == n || (n == 0 && offdiag.is_empty()));
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let n_i = n as i32;
    let jobz = b'V' as c_char;
    let mut d = diag.to_vec();
    let mut e = offdiag.to_vec();
    e.push(0.0); // LAPACK wants length >= n-1; keep a slot for n = 1
    let mut z = vec![0.0_f64; n * n];
    let mut work = vec![0.0_f64; (2 * n).max(1)];
    let mut info = 0_i32;
    unsafe {
        lapack_sys::dstev_(
            &jobz, &n_i,
            d.as_mut_ptr(), e.as_mut_ptr(),
            z.as_mut_ptr(), &n_i,
            work.as_mut_ptr(), &mut info,
        );
    }
    if info != 0 {
        return Err(NcqmError::Lapack { routine: "dstev", info });
    }
    Ok((d, z))
}
