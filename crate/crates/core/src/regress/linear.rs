use super::DesignMatrix;
use crate::error::{Error, Result};
use crate::vsm::svd::jacobi_svd;

/// Least squares on centred data through a one-sided Jacobi SVD; singular
/// values below `max(n, p) · ε · σ_max` are dropped, which yields the
/// minimum-norm coefficients for rank-deficient designs.
pub(crate) fn fit_mlr(x: &DesignMatrix) -> Result<(f64, Vec<f64>)> {
    let (n, p) = (x.n(), x.p());
    if n == 0 {
        return Err(Error::InsufficientRows { needed: 1, available: 0 });
    }
    let y_mean = x.target().iter().sum::<f64>() / n as f64;
    if p == 0 {
        return Ok((y_mean, Vec::new()));
    }
    let columns: Vec<Vec<f64>> = (0..p)
        .map(|j| {
            let c = x.column(j);
            let m = c.iter().sum::<f64>() / n as f64;
            c.into_iter().map(|v| v - m).collect()
        })
        .collect();
    let means: Vec<f64> = (0..p).map(|j| x.column(j).iter().sum::<f64>() / n as f64).collect();
    let b: Vec<f64> = x.target().iter().map(|y| y - y_mean).collect();

    // A P = W diag(σ), so β = P diag(σ)⁺ Wᵀ b.
    let (w, sigma, rot) = jacobi_svd(columns)?;
    let cutoff = n.max(p) as f64 * f64::EPSILON * sigma[0];
    let mut beta = vec![0.0; p];
    for k in 0..p {
        if sigma[k] > cutoff {
            let coef = w[k].iter().zip(&b).map(|(u, v)| u * v).sum::<f64>() / sigma[k];
            for (bj, pj) in beta.iter_mut().zip(&rot[k]) {
                *bj += coef * pj;
            }
        }
    }
    if beta.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite("linear regression coefficients".into()));
    }
    let intercept = y_mean - beta.iter().zip(&means).map(|(c, m)| c * m).sum::<f64>();
    Ok((intercept, beta))
}
