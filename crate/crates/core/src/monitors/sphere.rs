//! Evolution identities of the flow evaluated on the exact expanding or
//! shrinking round sphere `X = r(t) ω` in `ℝⁿ⁺¹`, where `r_tt = r/n`.
//!
//! Every tensor is built from the radial-graph formulas at a point of the
//! polar chart; time derivatives are either taken from the closed form or
//! finite-differenced in `t`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::geometry::{polar_sphere_metric, round_sphere, GraphSample};
use crate::radial::{classify_regime, closed_form_radius, closed_form_velocity, RadialGeometry};

/// How time derivatives of the geometry are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeDerivative {
    Exact,
    /// Second-order central differences with step `h`.
    FiniteDifference(f64),
}

pub const FD_STEP: f64 = 1e-4;

/// Chart point at which the tensors are evaluated.
fn chart_metric(n: usize) -> DMatrix<f64> {
    let angles: Vec<f64> = (0..n).map(|i| 0.4 + 0.3 * i as f64).collect();
    polar_sphere_metric(&angles)
}

struct Sphere {
    n: usize,
    geometry: RadialGeometry,
    r0: f64,
    r1: f64,
    sigma: DMatrix<f64>,
}

impl Sphere {
    fn new(n: usize, r0: f64, r1: f64, t: f64) -> Result<Self> {
        let geometry = RadialGeometry::sphere(n)?;
        let regime = classify_regime(geometry, r0, r1)?;
        let t_max = regime.t_max.unwrap_or(f64::INFINITY);
        if !(t >= 0.0 && t < t_max) {
            return Err(Error::OutOfDomain { t, t_max });
        }
        Ok(Self {
            n,
            geometry,
            r0,
            r1,
            sigma: chart_metric(n),
        })
    }

    fn r(&self, t: f64) -> f64 {
        closed_form_radius(self.geometry, self.r0, self.r1, t)
    }

    fn r_t(&self, t: f64) -> f64 {
        closed_form_velocity(self.geometry, self.r0, self.r1, t)
    }

    fn sample(&self, t: f64) -> Result<GraphSample> {
        round_sphere(self.n, self.r(t), &self.sigma)
    }

    /// `(f(t+h) − 2f(t) + f(t−h)) / h²` on matrices.
    fn second_difference(
        &self,
        t: f64,
        h: f64,
        f: impl Fn(&GraphSample) -> DMatrix<f64>,
    ) -> Result<DMatrix<f64>> {
        let (a, b, c) = (self.sample(t - h)?, self.sample(t)?, self.sample(t + h)?);
        Ok((f(&c) - f(&b) * 2.0 + f(&a)) / (h * h))
    }
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// `∂²g_ij/∂t² − (2H⁻¹h_ij + 2⟨X_ti, X_tj⟩)`, max-norm over the chart
/// indices. On the sphere `⟨X_ti, X_tj⟩ = r_t² σ_ij`.
pub fn residual_lemma_4_2(
    n: usize,
    r0: f64,
    r1: f64,
    t: f64,
    mode: TimeDerivative,
) -> Result<f64> {
    let sp = Sphere::new(n, r0, r1, t)?;
    let (r, r_t) = (sp.r(t), sp.r_t(t));
    let here = sp.sample(t)?;
    let lhs = match mode {
        TimeDerivative::Exact => {
            let r_tt = r * sp.geometry.stiffness();
            &sp.sigma * (2.0 * r_t * r_t + 2.0 * r * r_tt)
        }
        TimeDerivative::FiniteDifference(h) => sp.second_difference(t, h, |s| s.g.clone())?,
    };
    let xt_xt = &sp.sigma * (r_t * r_t);
    let rhs = &here.h * (2.0 / here.mean_curvature) + xt_xt * 2.0;
    Ok(max_abs(&(lhs - rhs)))
}

/// `∂²H/∂t²` against the term-by-term assembly
///
/// `H⁻²ΔH − 2H⁻³|∇H|² − H⁻¹|A|² − 2g^{ik}g^{jl}h_ij⟨X_tk, X_tl⟩
///  + H g^{kl}⟨ν, X_tk⟩⟨ν, X_tl⟩ + 2g^{ij}∂_tΓ^k_ij⟨ν, X_tk⟩
///  + 2g^{ik}g^{jp}g^{lq}h_ij ∂_t g_pq ∂_t g_kl − 2g^{ik}g^{jl}∂_t g_kl ∂_t h_ij`.
pub fn residual_lemma_4_5(
    n: usize,
    r0: f64,
    r1: f64,
    t: f64,
    mode: TimeDerivative,
) -> Result<f64> {
    let sp = Sphere::new(n, r0, r1, t)?;
    let (r, r_t) = (sp.r(t), sp.r_t(t));
    let s = sp.sample(t)?;
    let h_mean = s.mean_curvature;
    let gi = &s.g_inv;

    // sphere values: H is constant in space, X_tk = r_t ∂_k ω is tangent
    let laplace_h = 0.0;
    let grad_h_sq = 0.0;
    let xt_xt = &sp.sigma * (r_t * r_t);
    let nu_xt = DMatrix::<f64>::zeros(n, 1);
    let dg = &sp.sigma * (2.0 * r * r_t);
    let dh = &sp.sigma * r_t;
    let trace_dgamma_nu_xt = 0.0;

    let hgi = gi * &s.h * gi;
    let rhs = laplace_h / (h_mean * h_mean) - 2.0 * grad_h_sq / h_mean.powi(3)
        - s.norm_a_squared() / h_mean
        - 2.0 * (&hgi.transpose() * &xt_xt).trace()
        + h_mean * (nu_xt.transpose() * gi * &nu_xt)[(0, 0)]
        + 2.0 * trace_dgamma_nu_xt
        + 2.0 * (gi * &s.h * gi * &dg * gi * &dg).trace()
        - 2.0 * (gi * &dg * gi * &dh).trace();

    let lhs = match mode {
        TimeDerivative::Exact => {
            let r_tt = r * sp.geometry.stiffness();
            let nf = n as f64;
            -nf * r_tt / (r * r) + 2.0 * nf * r_t * r_t / r.powi(3)
        }
        TimeDerivative::FiniteDifference(h) => sp.second_difference(t, h, |g| {
            DMatrix::from_element(1, 1, g.trace_mean_curvature())
        })?[(0, 0)],
    };
    Ok((lhs - rhs).abs())
}

/// Max-norm of `∇_i∇_jH + H h_il g^{lm} h_mj − |A|² h_ij` on the round
/// sphere of radius `r`, whose Laplacian of `h` vanishes.
pub fn check_simons_sphere(n: usize, r: f64) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidInitialRadius(r));
    }
    let s = round_sphere(n, r, &chart_metric(n))?;
    let hess_h = DMatrix::<f64>::zeros(n, n);
    let rhs = hess_h + &s.h * &s.g_inv * &s.h * s.mean_curvature - &s.h * s.norm_a_squared();
    Ok(max_abs(&rhs))
}
