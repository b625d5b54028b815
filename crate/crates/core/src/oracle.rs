//! Dense reference implementations for tiny problems.
//!
//! Everything here assembles explicit matrices and is only meant to certify
//! the matrix-free code on instances of at most a few hundred pixels.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linops::LinearOperator;
use crate::prior::HyperParams;

pub type DenseMatrix = DMatrix<f64>;

/// Largest operator input dimension the oracle will assemble.
pub const DENSE_GUARD: usize = 256;
const ADJOINT_TOL: f64 = 1e-10;
const CROSS_CHECK_TOL: f64 = 1e-6;

fn guard(dim: usize, limit: usize) -> Result<()> {
    if dim > limit {
        Err(Error::SizeGuard { dim, limit })
    } else {
        Ok(())
    }
}

/// Column `j` is `op.forward(e_j)`. Also assembles the adjoint and checks
/// that it is the transpose.
pub fn assemble_operator(op: &dyn LinearOperator<f64>) -> Result<DenseMatrix> {
    let (m, n) = (op.output_len(), op.input_len());
    guard(n, DENSE_GUARD)?;
    guard(m, DENSE_GUARD)?;
    let mut a = DMatrix::zeros(m, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        a.set_column(j, &DVector::from_vec(op.forward(&e)));
        e[j] = 0.0;
    }
    let mut at = DMatrix::zeros(n, m);
    let mut e = vec![0.0; m];
    for i in 0..m {
        e[i] = 1.0;
        at.set_column(i, &DVector::from_vec(op.adjoint(&e)));
        e[i] = 0.0;
    }
    let scale = a.amax().max(1.0);
    let gap = (&a.transpose() - &at).amax();
    if gap > ADJOINT_TOL * scale {
        return Err(Error::OracleMismatch(format!(
            "adjoint differs from transpose by {gap:e}"
        )));
    }
    Ok(a)
}

/// `tau (DH)^T (DH) + sum_l K_l^T diag(1/gamma_l) K_l`.
pub fn dense_precision(tau: f64, dh: &DenseMatrix, filters: &[DenseMatrix], gamma: &[Vec<f64>]) -> Result<DenseMatrix> {
    if filters.len() != gamma.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} gamma vectors", filters.len()),
            found: format!("{}", gamma.len()),
        });
    }
    let mut w = dh.transpose() * dh * tau;
    for (k, g) in filters.iter().zip(gamma) {
        let inv = DVector::from_iterator(g.len(), g.iter().map(|v| 1.0 / v));
        let weighted = DMatrix::from_diagonal(&inv) * k;
        w += k.transpose() * weighted;
    }
    Ok(w)
}

/// Exact posterior mean and covariance.
///
/// The covariance comes from a Cholesky factorization and is cross-checked
/// against an LU-based inverse; disagreement beyond what the conditioning
/// explains is reported as an error.
pub fn dense_posterior(
    y: &[f64],
    tau: f64,
    dh: &DenseMatrix,
    filters: &[DenseMatrix],
    gamma: &[Vec<f64>],
) -> Result<(DVector<f64>, DenseMatrix)> {
    guard(dh.ncols(), DENSE_GUARD)?;
    if y.len() != dh.nrows() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} observations", dh.nrows()),
            found: format!("{}", y.len()),
        });
    }
    let w = dense_precision(tau, dh, filters, gamma)?;
    let eig = w.symmetric_eigenvalues();
    let cond = eig.max() / eig.min();
    let sigma = w.clone().cholesky().ok_or(Error::Singular)?.inverse();
    let sigma_lu = w.lu().try_inverse().ok_or(Error::Singular)?;
    // Both inverses lose about cond * eps digits; only flag gaps beyond that.
    let tol = CROSS_CHECK_TOL.max(100.0 * cond * f64::EPSILON);
    let gap = (&sigma - &sigma_lu).amax();
    if gap > tol * sigma.amax() {
        return Err(Error::OracleMismatch(format!(
            "cholesky and LU inverses differ by {gap:e}"
        )));
    }
    let rhs = dh.transpose() * DVector::from_column_slice(y) * tau;
    let mu = &sigma * rhs;
    Ok((mu, sigma))
}

pub fn dense_diag(m: &DenseMatrix) -> Result<Vec<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", m.nrows(), m.ncols()),
        });
    }
    Ok(m.diagonal().iter().copied().collect())
}

/// Negative log evidence (up to constants) for fixed hyperparameters:
/// `y^T S^-1 y + log|S|` with `S = I/tau + DH P^-1 (DH)^T`, plus the
/// hyperprior penalties.
///
/// The prior precision `P` of a zero-mean filter bank is singular along
/// constant images, so `ridge * I` is added before inverting.
pub fn dense_neg_log_marginal(
    y: &[f64],
    tau: f64,
    dh: &DenseMatrix,
    filters: &[DenseMatrix],
    gamma: &[Vec<f64>],
    hyper: &HyperParams,
    ridge: f64,
) -> Result<f64> {
    let n = dh.nrows();
    guard(n, 128)?;
    guard(dh.ncols(), DENSE_GUARD)?;
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("{n} observations"),
            found: format!("{}", y.len()),
        });
    }
    let mut s = DMatrix::identity(n, n) / tau;
    if !filters.is_empty() {
        let mut p = dense_precision(0.0, dh, filters, gamma)?;
        for i in 0..p.nrows() {
            p[(i, i)] += ridge;
        }
        let p_inv = p.cholesky().ok_or(Error::Singular)?.inverse();
        s += dh * p_inv * dh.transpose();
    }
    let chol = s.cholesky().ok_or(Error::Singular)?;
    let yv = DVector::from_column_slice(y);
    let quad = yv.dot(&chol.solve(&yv));
    let log_det = 2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>();

    let mut penalty = 0.0;
    for g in gamma {
        for &v in g {
            penalty += 2.0 * hyper.a * v.ln() + 2.0 * hyper.b / v;
        }
    }
    penalty -= 2.0 * ((hyper.a0 - 1.0) * tau.ln() - hyper.b0 * tau);
    Ok(quad + log_det + penalty)
}
