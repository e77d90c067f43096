//! Pointwise geometry of a radial graph `X = u(x)·x` over the unit sphere
//! `Sⁿ`, evaluated from `φ = log u` and its covariant derivatives.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Geometric quantities of a radial graph at one point of `Sⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSample {
    pub n: usize,
    pub u: f64,
    pub phi: f64,
    pub phi_i: DVector<f64>,
    pub phi_ij: DMatrix<f64>,
    pub sigma_ij: DMatrix<f64>,
    pub sigma_inv: DMatrix<f64>,
    /// `υ = (1 + |Dφ|²)^{1/2}`
    pub upsilon: f64,
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    pub h: DMatrix<f64>,
    pub mean_curvature: f64,
}

impl GraphSample {
    /// `|A|² = g^{ij} g^{kl} h_ik h_jl`.
    pub fn norm_a_squared(&self) -> f64 {
        let w = &self.g_inv * &self.h;
        (&w * &w).trace()
    }

    /// `H` recomputed as the trace `g^{ij} h_ij`.
    pub fn trace_mean_curvature(&self) -> f64 {
        (&self.g_inv * &self.h).trace()
    }
}

/// Evaluates `υ`, `g_ij`, `g^{ij}`, `h_ij` and `H` of the radial graph at a
/// point where the round metric is `sigma_ij` and `φ` has covariant first and
/// second derivatives `phi_i`, `phi_ij`.
pub fn graph_quantities(
    n: usize,
    u: f64,
    phi_i: &[f64],
    phi_ij: &DMatrix<f64>,
    sigma_ij: &DMatrix<f64>,
) -> Result<GraphSample> {
    if n == 0 {
        return Err(Error::InvalidConfig("sphere dimension must be positive".into()));
    }
    if !(u.is_finite() && u > 0.0) {
        return Err(Error::InvalidConfig(format!("graph value u must be positive, got {u}")));
    }
    if phi_i.len() != n || phi_ij.shape() != (n, n) || sigma_ij.shape() != (n, n) {
        return Err(Error::InvalidConfig(format!(
            "expected {n}-dimensional derivatives and a {n}x{n} metric"
        )));
    }
    if phi_i.iter().chain(phi_ij.iter()).chain(sigma_ij.iter()).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            what: "graph derivatives",
            index: 0,
        });
    }
    let scale = sigma_ij.amax().max(1.0);
    if (sigma_ij - sigma_ij.transpose()).amax() > 1e-12 * scale {
        return Err(Error::InvalidMetric("sphere metric is not symmetric".into()));
    }
    if (phi_ij - phi_ij.transpose()).amax() > 1e-12 * phi_ij.amax().max(1.0) {
        return Err(Error::InvalidConfig("Hessian of phi is not symmetric".into()));
    }
    let chol = sigma_ij
        .clone()
        .cholesky()
        .ok_or_else(|| Error::InvalidMetric("sphere metric is not positive definite".into()))?;
    let sigma_inv = chol.inverse();

    let dphi = DVector::from_column_slice(phi_i);
    let dphi_up = &sigma_inv * &dphi;
    let grad_sq = dphi.dot(&dphi_up);
    let upsilon = (1.0 + grad_sq).sqrt();
    let u2 = u * u;
    let outer = &dphi * dphi.transpose();

    let g = (sigma_ij + &outer) * u2;
    let g_inv = (&sigma_inv - (&dphi_up * dphi_up.transpose()) / (upsilon * upsilon)) / u2;
    let h = (sigma_ij - phi_ij + &outer) * (u / upsilon);
    let coeff = -&sigma_inv + (&dphi_up * dphi_up.transpose()) / (upsilon * upsilon);
    let contraction = coeff.component_mul(phi_ij).sum();
    let mean_curvature = (n as f64 + contraction) / (u * upsilon);

    let identity_err = (&g_inv * &g - DMatrix::<f64>::identity(n, n)).amax();
    let cond = sigma_ij.amax() * sigma_inv.amax();
    if identity_err > 1e-12 * cond.max(1.0) * (1.0 + grad_sq) {
        return Err(Error::InvalidMetric(format!(
            "inverse metric check failed by {identity_err:e}"
        )));
    }

    Ok(GraphSample {
        n,
        u,
        phi: u.ln(),
        phi_i: dphi,
        phi_ij: phi_ij.clone(),
        sigma_ij: sigma_ij.clone(),
        sigma_inv,
        upsilon,
        g,
        g_inv,
        h,
        mean_curvature,
    })
}

/// Radial graph with `φ_i = φ_ij = 0`: a round sphere of radius `r`.
pub fn round_sphere(n: usize, r: f64, sigma_ij: &DMatrix<f64>) -> Result<GraphSample> {
    graph_quantities(n, r, &vec![0.0; n], &DMatrix::zeros(n, n), sigma_ij)
}

/// Round metric of `Sⁿ` in polar coordinates `(ϑ_1, …, ϑ_n)` at `angles`:
/// `σ = diag(1, sin²ϑ_1, sin²ϑ_1 sin²ϑ_2, …)`.
pub fn polar_sphere_metric(angles: &[f64]) -> DMatrix<f64> {
    let n = angles.len();
    let mut diag = Vec::with_capacity(n);
    let mut acc = 1.0;
    for (i, a) in angles.iter().enumerate() {
        diag.push(acc);
        if i + 1 < n {
            acc *= a.sin().powi(2);
        }
    }
    DMatrix::from_diagonal(&DVector::from_vec(diag))
}
