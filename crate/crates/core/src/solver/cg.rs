use crate::error::{Error, Result};
use crate::linops::LinearOperator;
use crate::scalar::{dot, norm, Real};

/// Result of a conjugate-gradient solve.
#[derive(Clone, Debug)]
pub struct CgOutcome<T> {
    pub solution: Vec<T>,
    pub iterations: usize,
    /// Final relative residual `||b - A x|| / ||b||` (recursively updated).
    pub residual: f64,
    pub converged: bool,
    /// Relative residual before the first step and after every step.
    pub history: Vec<f64>,
}

/// Solves `A x = b` for symmetric positive definite `A`.
///
/// Hitting `maxiter` is reported through `converged`, not as an error.
pub fn cg_solve<T: Real, O: LinearOperator<T> + ?Sized>(
    op: &O,
    rhs: &[T],
    tol: f64,
    maxiter: usize,
    warm_start: Option<&[T]>,
) -> Result<CgOutcome<T>> {
    let n = op.input_len();
    if op.output_len() != n || rhs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("square system of size {n}"),
            found: format!("operator {}x{}, rhs {}", op.output_len(), n, rhs.len()),
        });
    }
    if let Some(x0) = warm_start {
        if x0.len() != n {
            return Err(Error::DimensionMismatch {
                expected: format!("warm start of length {n}"),
                found: format!("{}", x0.len()),
            });
        }
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("cg tolerance must be positive, got {tol}")));
    }

    let b_norm = norm(rhs).to_f64_lossy();
    if b_norm == 0.0 {
        return Ok(CgOutcome {
            solution: vec![T::zero(); n],
            iterations: 0,
            residual: 0.0,
            converged: true,
            history: vec![0.0],
        });
    }

    let mut x = warm_start.map_or_else(|| vec![T::zero(); n], <[T]>::to_vec);
    let mut r = if warm_start.is_some() {
        let ax = op.forward(&x);
        rhs.iter().zip(&ax).map(|(&b, &a)| b - a).collect()
    } else {
        rhs.to_vec()
    };
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    let mut rel = rr.sqrt().to_f64_lossy() / b_norm;
    let mut history = vec![rel];
    let mut iterations = 0;

    while rel > tol && iterations < maxiter {
        let ap = op.forward(&p);
        let pap = dot(&p, &ap);
        let alpha = rr / pap;
        if !alpha.is_finite() {
            return Err(Error::CgNan(iterations + 1));
        }
        for i in 0..n {
            x[i] = x[i] + alpha * p[i];
            r[i] = r[i] - alpha * ap[i];
        }
        let rr_next = dot(&r, &r);
        iterations += 1;
        rel = rr_next.sqrt().to_f64_lossy() / b_norm;
        if !rel.is_finite() {
            return Err(Error::CgNan(iterations));
        }
        history.push(rel);
        let beta = rr_next / rr;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        rr = rr_next;
    }

    Ok(CgOutcome {
        solution: x,
        iterations,
        residual: rel,
        converged: rel <= tol,
        history,
    })
}
