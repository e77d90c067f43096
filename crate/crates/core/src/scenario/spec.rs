use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::FlowConfig;
use crate::geometry::{support_to_curve, AngleGrid, PlaneCurve, SupportState};
use crate::radial::RadialGeometry;

/// Initial convex curve, described by its support function about the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Preset {
    Circle {
        r0: f64,
    },
    /// Semi-axes `a` along x and `b` along y.
    Ellipse {
        a: f64,
        b: f64,
    },
    /// `S(θ) = cos[0] + Σ_{m≥1} (cos[m] cos mθ + sin[m−1] sin mθ)`.
    Fourier {
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
}

/// Initial normal speed `f̃(θ)`; a non-constant speed on a curve is assigned
/// through the normal angle, `f(u) = f̃(θ(u))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Speed {
    Constant {
        c: f64,
    },
    Fourier {
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
}

fn fourier(cos: &[f64], sin: &[f64], theta: f64) -> f64 {
    let mut acc = cos.first().copied().unwrap_or(0.0);
    for (m, c) in cos.iter().enumerate().skip(1) {
        acc += c * (m as f64 * theta).cos();
    }
    for (m, s) in sin.iter().enumerate() {
        acc += s * ((m + 1) as f64 * theta).sin();
    }
    acc
}

impl Preset {
    pub fn support(&self, theta: f64) -> f64 {
        match self {
            Preset::Circle { r0 } => *r0,
            Preset::Ellipse { a, b } => {
                (a * a * theta.cos().powi(2) + b * b * theta.sin().powi(2)).sqrt()
            }
            Preset::Fourier { cos, sin } => fourier(cos, sin, theta),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match self {
            Preset::Circle { r0 } => r0.is_finite() && *r0 > 0.0,
            Preset::Ellipse { a, b } => a.is_finite() && b.is_finite() && *a > 0.0 && *b > 0.0,
            Preset::Fourier { cos, sin } => {
                !cos.is_empty() && cos.iter().chain(sin).all(|c| c.is_finite())
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("invalid curve preset {self:?}")))
        }
    }

    /// Samples on `grid`; fails unless the data is strictly convex.
    pub fn state(&self, grid: &AngleGrid, speed: &Speed) -> Result<SupportState> {
        self.validate()?;
        let s = grid.sample(|t| self.support(t));
        let v = grid.sample(|t| speed.at(t));
        SupportState::new(grid.clone(), s, v, 0.0)
    }

    /// Vertex curve with `vertices` points at equally spaced normal angles,
    /// carrying the initial speed.
    pub fn curve(&self, vertices: usize, speed: &Speed) -> Result<PlaneCurve> {
        let grid = AngleGrid::new(vertices)?;
        support_to_curve(&self.state(&grid, speed)?)
    }
}

impl Speed {
    pub fn at(&self, theta: f64) -> f64 {
        match self {
            Speed::Constant { c } => *c,
            Speed::Fourier { cos, sin } => fourier(cos, sin, theta),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Speed::Constant { c } => c.is_finite(),
            Speed::Fourier { cos, sin } => cos.iter().chain(sin).all(|c| c.is_finite()),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("invalid speed {self:?}")))
        }
    }
}

/// Time-dependent forcing `c(t)` of the radial equation `r_tt = (κ + c(t)) r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Forcing {
    #[default]
    None,
    Constant {
        c: f64,
    },
    /// Piecewise-linear through `(times[i], values[i])`, constant outside.
    Table {
        times: Vec<f64>,
        values: Vec<f64>,
    },
}

impl Forcing {
    pub fn validate(&self) -> Result<()> {
        match self {
            Forcing::None => Ok(()),
            Forcing::Constant { c } if c.is_finite() => Ok(()),
            Forcing::Table { times, values }
                if !times.is_empty()
                    && times.len() == values.len()
                    && times.windows(2).all(|w| w[0] < w[1])
                    && times.iter().chain(values).all(|x| x.is_finite()) =>
            {
                Ok(())
            }
            _ => Err(Error::InvalidConfig(format!("invalid forcing {self:?}"))),
        }
    }

    pub fn at(&self, t: f64) -> f64 {
        match self {
            Forcing::None => 0.0,
            Forcing::Constant { c } => *c,
            Forcing::Table { times, values } => {
                let i = times.partition_point(|&x| x <= t);
                if i == 0 {
                    values[0]
                } else if i == times.len() {
                    values[i - 1]
                } else {
                    let w = (t - times[i - 1]) / (times[i] - times[i - 1]);
                    (1.0 - w) * values[i - 1] + w * values[i]
                }
            }
        }
    }

    /// `(min c, max c)` over all time.
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            Forcing::None => (0.0, 0.0),
            Forcing::Constant { c } => (*c, *c),
            Forcing::Table { values, .. } => values
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                    (lo.min(*v), hi.max(*v))
                }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RadialSpec {
    pub geometry: RadialGeometry,
    pub r0: f64,
    pub r1: f64,
    pub t_end: f64,
    pub dt: f64,
    pub forcing: Forcing,
}

impl Default for RadialSpec {
    fn default() -> Self {
        Self {
            geometry: RadialGeometry::Circle,
            r0: 1.0,
            r1: 0.0,
            t_end: 2.0,
            dt: 1e-3,
            forcing: Forcing::None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CurveSpec {
    pub preset: Preset,
    pub speed: Speed,
    pub flow: FlowConfig,
    pub both_solvers: bool,
    /// Vertex count of the Lagrangian solver.
    pub vertices: usize,
}

impl Default for CurveSpec {
    fn default() -> Self {
        Self {
            preset: Preset::Circle { r0: 1.0 },
            speed: Speed::Constant { c: 0.0 },
            flow: FlowConfig::default(),
            both_solvers: false,
            vertices: 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Body {
    pub preset: Preset,
    pub speed: Speed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ContainmentSpec {
    pub outer: Body,
    pub inner: Body,
    pub flow: FlowConfig,
}

impl Default for ContainmentSpec {
    fn default() -> Self {
        Self {
            outer: Body {
                preset: Preset::Circle { r0: 2.0 },
                speed: Speed::Constant { c: 0.5 },
            },
            inner: Body {
                preset: Preset::Circle { r0: 1.0 },
                speed: Speed::Constant { c: 0.3 },
            },
            flow: FlowConfig::default(),
        }
    }
}

/// Recording interval used when a scenario does not set one.
pub(crate) fn default_interval(t_end: f64) -> f64 {
    t_end / 20.0
}
