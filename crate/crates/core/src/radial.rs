//! Radially symmetric reductions of the flow: round spheres in `R^{n+1}`,
//! round cylinders and plane circles all reduce to `r_tt = κ·r` with
//! stiffness `κ = 1/n` (spheres) or `κ = 1` (cylinders, circles).
//!
//! With `λ = √κ` the solution is
//! `r(t) = ½(r0 + r1/λ)e^{λt} + ½(r0 − r1/λ)e^{−λt}`, so its fate is decided
//! by the sign of `d₊ = r0 + r1/λ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which symmetric family is evolving.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadialGeometry {
    /// Round `n`-spheres in `R^{n+1}`, `n ≥ 2`.
    SphereN { n: usize },
    /// Round cylinders; they collapse onto their axis.
    Cylinder,
    /// Round plane circles.
    Circle,
}

impl RadialGeometry {
    pub fn sphere(n: usize) -> Result<Self> {
        let g = RadialGeometry::SphereN { n };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            RadialGeometry::SphereN { n } if n < 2 => Err(Error::InvalidConfig(format!(
                "sphere dimension must be at least 2, got {n}"
            ))),
            _ => Ok(()),
        }
    }

    /// Coefficient `κ` in `r_tt = κ·r`.
    pub fn stiffness(&self) -> f64 {
        match *self {
            RadialGeometry::SphereN { n } => 1.0 / n as f64,
            RadialGeometry::Cylinder | RadialGeometry::Circle => 1.0,
        }
    }

    /// Growth rate `λ = √κ`.
    pub fn rate(&self) -> f64 {
        self.stiffness().sqrt()
    }

    /// What a collapsing member of the family degenerates to.
    pub fn collapse_target(&self) -> &'static str {
        match self {
            RadialGeometry::Cylinder => "axis line",
            _ => "point",
        }
    }
}

/// One sample of a radial trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialState {
    pub geometry: RadialGeometry,
    pub r: f64,
    pub r_t: f64,
    pub t: f64,
    pub r0: f64,
    pub r1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    ExpandsForever,
    DipThenExpand,
    ConvergesToPointInfiniteTime,
    ConvergesToPointFiniteTime,
}

/// Fate of a radial solution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeReport {
    pub geometry: RadialGeometry,
    pub regime: Regime,
    /// Extinction time, present iff the regime is `ConvergesToPointFiniteTime`.
    pub t_max: Option<f64>,
    /// `r0 + r1/λ`
    pub d_plus: f64,
    /// `r0 − r1/λ`
    pub d_minus: f64,
    pub label: String,
    /// Notes on values that differ from the commonly printed form.
    pub flags: Vec<String>,
}

/// Closed-form radius at time `t`; may be non-positive past extinction.
pub fn closed_form_radius(geometry: RadialGeometry, r0: f64, r1: f64, t: f64) -> f64 {
    let lam = geometry.rate();
    let a = 0.5 * (r0 + r1 / lam);
    let b = 0.5 * (r0 - r1 / lam);
    a * (lam * t).exp() + b * (-lam * t).exp()
}

/// Closed-form radial velocity `r_t` at time `t`.
pub fn closed_form_velocity(geometry: RadialGeometry, r0: f64, r1: f64, t: f64) -> f64 {
    let lam = geometry.rate();
    let a = 0.5 * (r0 + r1 / lam);
    let b = 0.5 * (r0 - r1 / lam);
    lam * (a * (lam * t).exp() - b * (-lam * t).exp())
}

/// Classifies the closed-form solution with initial data `(r0, r1)`.
pub fn classify_regime(geometry: RadialGeometry, r0: f64, r1: f64) -> Result<RegimeReport> {
    geometry.validate()?;
    if !(r0.is_finite() && r0 > 0.0) {
        return Err(Error::InvalidInitialRadius(r0));
    }
    if !r1.is_finite() {
        return Err(Error::InvalidConfig(format!("initial velocity must be finite, got {r1}")));
    }
    let lam = geometry.rate();
    let d_plus = r0 + r1 / lam;
    let d_minus = r0 - r1 / lam;
    let zero_tol = 1e-12 * r0.max((r1 / lam).abs());
    let target = geometry.collapse_target();
    let mut flags = Vec::new();
    let (regime, t_max, label) = if d_plus.abs() <= zero_tol {
        (
            Regime::ConvergesToPointInfiniteTime,
            None,
            format!("converges to a {target} as t -> infinity (r = r0 e^(-{lam:.6} t))"),
        )
    } else if d_plus > 0.0 {
        if r1 >= 0.0 {
            (Regime::ExpandsForever, None, "expands exponentially for all time".to_string())
        } else {
            (
                Regime::DipThenExpand,
                None,
                "contracts for a while, then expands exponentially".to_string(),
            )
        }
    } else {
        let ratio = (r1 / lam - r0) / (r1 / lam + r0);
        let t_max = ratio.ln() / (2.0 * lam);
        if geometry == RadialGeometry::Cylinder {
            flags.push(format!(
                "cylinder extinction time uses (1/2)ln((r1-r0)/(r1+r0)) = {t_max}; \
                 the form without the 1/2 factor would give {}",
                ratio.ln()
            ));
        }
        (
            Regime::ConvergesToPointFiniteTime,
            Some(t_max),
            format!("converges to a {target} at T_max = {t_max}"),
        )
    };
    Ok(RegimeReport {
        geometry,
        regime,
        t_max,
        d_plus,
        d_minus,
        label,
        flags,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadialTermination {
    HorizonReached,
    ExtinctionReached { t: f64 },
}

/// Sampled numerical solution of `r_tt = κ·r`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialTrajectory {
    pub geometry: RadialGeometry,
    pub samples: Vec<RadialState>,
    pub termination: RadialTermination,
}

impl RadialTrajectory {
    pub fn last(&self) -> &RadialState {
        self.samples.last().expect("trajectories hold the initial sample")
    }

    /// Largest relative change of `E = r_t² − κ r²` along the trajectory.
    pub fn energy_drift(&self) -> f64 {
        let k = self.geometry.stiffness();
        let energy = |s: &RadialState| s.r_t * s.r_t - k * s.r * s.r;
        let first = &self.samples[0];
        let scale = (first.r_t * first.r_t).max(k * first.r * first.r);
        let e0 = energy(first);
        self.samples
            .iter()
            .map(|s| (energy(s) - e0).abs() / scale)
            .fold(0.0, f64::max)
    }
}

/// One classical fourth-order step of `(r, r_t)' = (r_t, κ(t)·r)`.
fn rk4_step(y: [f64; 2], t: f64, h: f64, kappa: &impl Fn(f64) -> f64) -> [f64; 2] {
    let f = |t: f64, y: [f64; 2]| [y[1], kappa(t) * y[0]];
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
    let k3 = f(t + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
    let k4 = f(t + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
    [
        y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ]
}

/// Cubic Hermite interpolant of `r` on one step.
fn hermite(y0: [f64; 2], y1: [f64; 2], h: f64, s: f64) -> f64 {
    let (s2, s3) = (s * s, s * s * s);
    (2.0 * s3 - 3.0 * s2 + 1.0) * y0[0]
        + (s3 - 2.0 * s2 + s) * h * y0[1]
        + (-2.0 * s3 + 3.0 * s2) * y1[0]
        + (s3 - s2) * h * y1[1]
}

/// Time tolerance of the extinction search.
pub const EXTINCTION_TIME_TOL: f64 = 1e-6;

fn check_step(dt: f64, t_end: f64) -> Result<()> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidConfig(format!("time step must be positive, got {dt}")));
    }
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::InvalidConfig(format!("horizon must be positive, got {t_end}")));
    }
    Ok(())
}

/// Integrates `r_tt = κ·r` with a classical fourth-order scheme, stopping at
/// the first zero of `r`, located by bisection on the step's Hermite
/// interpolant.
pub fn integrate_radial_ode(
    geometry: RadialGeometry,
    r0: f64,
    r1: f64,
    dt: f64,
    t_end: f64,
) -> Result<RadialTrajectory> {
    geometry.validate()?;
    check_step(dt, t_end)?;
    if !(r0.is_finite() && r0 > 0.0) {
        return Err(Error::InvalidInitialRadius(r0));
    }
    let kappa = geometry.stiffness();
    let state = |y: [f64; 2], t: f64| RadialState {
        geometry,
        r: y[0],
        r_t: y[1],
        t,
        r0,
        r1,
    };
    let mut samples = vec![state([r0, r1], 0.0)];
    let mut y = [r0, r1];
    let steps = (t_end / dt).ceil() as usize;
    for k in 0..steps {
        let t = k as f64 * dt;
        let h = dt.min(t_end - t);
        if h <= 0.0 {
            break;
        }
        let next = rk4_step(y, t, h, &|_| kappa);
        if next[0] <= 0.0 {
            let (mut lo, mut hi) = (0.0, 1.0);
            while (hi - lo) * h > EXTINCTION_TIME_TOL * 1e-3 {
                let mid = 0.5 * (lo + hi);
                if hermite(y, next, h, mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let t_ext = t + hi * h;
            samples.push(state([0.0, next[1]], t_ext));
            return Ok(RadialTrajectory {
                geometry,
                samples,
                termination: RadialTermination::ExtinctionReached { t: t_ext },
            });
        }
        y = next;
        samples.push(state(y, t + h));
    }
    Ok(RadialTrajectory {
        geometry,
        samples,
        termination: RadialTermination::HorizonReached,
    })
}

/// Forced run and its two constant-coefficient brackets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForcedRunReport {
    pub times: Vec<f64>,
    pub r: Vec<f64>,
    pub r_lower: Vec<f64>,
    pub r_upper: Vec<f64>,
    /// `min_k (r − r⁻)`
    pub margin_lower: f64,
    /// `min_k (r⁺ − r)`
    pub margin_upper: f64,
    pub tolerance: f64,
}

/// Integrates `r_tt = (κ + c(t))·r` together with the brackets obtained for
/// `c ≡ c_lo` and `c ≡ c_hi`, and verifies `r⁻ ≤ r ≤ r⁺` within
/// `1e-8 · max r⁺`. The run stops early if any radius reaches zero.
#[allow(clippy::too_many_arguments)]
pub fn forced_radial(
    geometry: RadialGeometry,
    forcing: &dyn Fn(f64) -> f64,
    c_lo: f64,
    c_hi: f64,
    r0: f64,
    r1: f64,
    dt: f64,
    t_end: f64,
) -> Result<ForcedRunReport> {
    geometry.validate()?;
    check_step(dt, t_end)?;
    if !(r0.is_finite() && r0 > 0.0) {
        return Err(Error::InvalidInitialRadius(r0));
    }
    if !(c_lo.is_finite() && c_hi.is_finite() && c_lo <= c_hi) {
        return Err(Error::InvalidConfig(format!(
            "forcing bounds must satisfy c_lo <= c_hi, got [{c_lo}, {c_hi}]"
        )));
    }
    let kappa = geometry.stiffness();
    let forced = |t: f64| kappa + forcing(t);
    let steps = (t_end / dt).ceil() as usize;
    let mut times = vec![0.0];
    let (mut y, mut lo, mut hi) = ([r0, r1], [r0, r1], [r0, r1]);
    let (mut r, mut r_lower, mut r_upper) = (vec![r0], vec![r0], vec![r0]);
    for k in 0..steps {
        let t = k as f64 * dt;
        let h = dt.min(t_end - t);
        if h <= 0.0 {
            break;
        }
        for tau in [t, t + 0.5 * h, t + h] {
            if !forcing(tau).is_finite() {
                return Err(Error::InvalidForcing { t: tau });
            }
        }
        y = rk4_step(y, t, h, &forced);
        lo = rk4_step(lo, t, h, &|_| kappa + c_lo);
        hi = rk4_step(hi, t, h, &|_| kappa + c_hi);
        if y[0] <= 0.0 || lo[0] <= 0.0 {
            break;
        }
        times.push(t + h);
        r.push(y[0]);
        r_lower.push(lo[0]);
        r_upper.push(hi[0]);
    }
    let tolerance = 1e-8 * r_upper.iter().cloned().fold(0.0, f64::max);
    let mut margin_lower = f64::INFINITY;
    let mut margin_upper = f64::INFINITY;
    for k in 0..times.len() {
        let (a, b) = (r[k] - r_lower[k], r_upper[k] - r[k]);
        if a < -tolerance || b < -tolerance {
            return Err(Error::BracketViolation {
                t: times[k],
                r: r[k],
                lower: r_lower[k],
                upper: r_upper[k],
            });
        }
        margin_lower = margin_lower.min(a);
        margin_upper = margin_upper.min(b);
    }
    Ok(ForcedRunReport {
        times,
        r,
        r_lower,
        r_upper,
        margin_lower,
        margin_upper,
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use RadialGeometry::*;

    #[test]
    fn closed_form_values() {
        assert_eq!(closed_form_radius(SphereN { n: 2 }, 1.0, 0.0, 0.0), 1.0);
        assert!((closed_form_radius(Circle, 1.0, -1.0, 2.0) - (-2.0f64).exp()).abs() < 1e-15);
        let v = closed_form_radius(SphereN { n: 2 }, 1.0, 0.0, 2f64.sqrt());
        assert!((v - 1.0f64.cosh()).abs() < 1e-14);
        assert!((v - 1.543081).abs() < 1e-6);
    }

    #[test]
    fn circle_regimes() {
        let r = classify_regime(Circle, 1.0, -1.0).unwrap();
        assert_eq!(r.regime, Regime::ConvergesToPointInfiniteTime);
        assert_eq!(r.t_max, None);
        let r = classify_regime(Circle, 1.0, -2.0).unwrap();
        assert_eq!(r.regime, Regime::ConvergesToPointFiniteTime);
        assert!((r.t_max.unwrap() - 0.5 * 3f64.ln()).abs() < 1e-15);
        assert!(r.flags.is_empty());
        let r = classify_regime(Circle, 1.0, -0.5).unwrap();
        assert_eq!(r.regime, Regime::DipThenExpand);
    }

    #[test]
    fn cylinder_horizon_carries_the_half_and_a_flag() {
        let r = classify_regime(Cylinder, 1.0, -2.0).unwrap();
        assert!((r.t_max.unwrap() - 0.549306).abs() < 1e-6);
        assert_eq!(r.flags.len(), 1);
        assert!(r.label.contains("axis line"));
    }

    #[test]
    fn sphere_expands() {
        let r = classify_regime(SphereN { n: 2 }, 1.0, 1.0).unwrap();
        assert_eq!(r.regime, Regime::ExpandsForever);
        assert!((r.d_plus - (1.0 + 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            classify_regime(Circle, 0.0, 1.0).unwrap_err(),
            Error::InvalidInitialRadius(0.0)
        );
        assert!(classify_regime(SphereN { n: 1 }, 1.0, 0.0).is_err());
        assert!(matches!(
            integrate_radial_ode(Circle, 1.0, 0.0, 0.0, 1.0),
            Err(Error::InvalidConfig(_))
        ));
        assert!(integrate_radial_ode(Circle, 1.0, 0.0, 0.1, -1.0).is_err());
    }

    #[test]
    fn integrator_matches_closed_form() {
        let tr = integrate_radial_ode(Circle, 1.0, -1.0, 1e-3, 1.0).unwrap();
        assert_eq!(tr.termination, RadialTermination::HorizonReached);
        assert!((tr.last().t - 1.0).abs() < 1e-12);
        assert!((tr.last().r - (-1.0f64).exp()).abs() < 1e-10);
        let g = SphereN { n: 3 };
        let tr = integrate_radial_ode(g, 2.0, 0.0, 1e-3, 1.0).unwrap();
        assert!((tr.last().r - closed_form_radius(g, 2.0, 0.0, 1.0)).abs() < 1e-10);
        assert!(tr.energy_drift() < 1e-8);
    }

    #[test]
    fn integrator_detects_extinction() {
        let tr = integrate_radial_ode(Circle, 1.0, -2.0, 1e-4, 1.0).unwrap();
        match tr.termination {
            RadialTermination::ExtinctionReached { t } => {
                assert!((t - 0.5 * 3f64.ln()).abs() < 1e-3)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unforced_brackets_collapse() {
        let g = SphereN { n: 2 };
        let rep = forced_radial(g, &|_| 0.0, 0.0, 0.0, 1.0, 0.3, 1e-3, 1.0).unwrap();
        for k in 0..rep.times.len() {
            assert_eq!(rep.r[k], rep.r_lower[k]);
            assert_eq!(rep.r[k], rep.r_upper[k]);
        }
        let plain = integrate_radial_ode(g, 1.0, 0.3, 1e-3, 1.0).unwrap();
        assert!((rep.r.last().unwrap() - plain.last().r).abs() < 1e-14);
    }

    #[test]
    fn constant_forcing_shifts_the_rate() {
        let rep = forced_radial(Circle, &|_| 0.5, 0.5, 0.5, 1.0, 0.0, 1e-3, 1.0).unwrap();
        let lam = 1.5f64.sqrt();
        let exact = (lam * 1.0).cosh();
        assert!((rep.r.last().unwrap() - exact).abs() < 1e-9);
    }

    #[test]
    fn nonfinite_forcing_is_rejected() {
        let err = forced_radial(Circle, &|t| if t > 0.5 { f64::NAN } else { 0.0 }, -1.0, 1.0, 1.0, 0.0, 0.1, 1.0)
            .unwrap_err();
        assert!(matches!(err, Error::InvalidForcing { .. }));
    }
}
