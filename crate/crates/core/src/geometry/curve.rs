//! Closed discrete convex curves and their discrete Frenet frame.

use std::f64::consts::PI;

use crate::error::{ensure_finite, Error, Result};

pub type Point = [f64; 2];

/// Fewest vertices for which the five-point frame stencil is meaningful.
pub const MIN_VERTICES: usize = 8;

/// Counterclockwise, strictly convex closed polygon approximating a smooth
/// curve, with a normal velocity `sigma` attached to every vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneCurve {
    points: Vec<Point>,
    sigma: Vec<f64>,
    t: f64,
}

/// Per-vertex tangent, outward normal, curvature and normal angle.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub tangent: Vec<Point>,
    pub normal: Vec<Point>,
    pub curvature: Vec<f64>,
    /// Angle of the outward normal, in `[0, 2π)`.
    pub normal_angle: Vec<f64>,
}

impl PlaneCurve {
    pub fn new(points: Vec<Point>, sigma: Vec<f64>, t: f64) -> Result<Self> {
        let curve = Self::new_unchecked(points, sigma, t);
        curve.validate()?;
        Ok(curve)
    }

    pub(crate) fn new_unchecked(points: Vec<Point>, sigma: Vec<f64>, t: f64) -> Self {
        Self { points, sigma, t }
    }

    /// Convexity, orientation and simplicity checks.
    pub fn validate(&self) -> Result<()> {
        let m = self.points.len();
        if m < MIN_VERTICES {
            return Err(Error::NotConvex(format!(
                "need at least {MIN_VERTICES} vertices, got {m}"
            )));
        }
        if self.sigma.len() != m {
            return Err(Error::LengthMismatch {
                expected: m,
                got: self.sigma.len(),
            });
        }
        for (i, p) in self.points.iter().enumerate() {
            if !(p[0].is_finite() && p[1].is_finite()) {
                return Err(Error::NonFinite {
                    what: "vertex position",
                    index: i,
                });
            }
        }
        ensure_finite(&self.sigma, "normal velocity")?;
        let mean_edge = self.perimeter() / m as f64;
        for i in 0..m {
            if dist(self.points[i], self.points[(i + 1) % m]) <= 1e-12 * mean_edge {
                return Err(Error::DegenerateEdge {
                    index: i,
                    next: (i + 1) % m,
                });
            }
        }
        let turning = self.turning_angles();
        if let Some(i) = turning.iter().position(|&a| a <= 0.0) {
            return Err(Error::NotConvex(format!(
                "turning angle {} at vertex {i}",
                turning[i]
            )));
        }
        let total: f64 = turning.iter().sum();
        if (total - 2.0 * PI).abs() > 1e-6 {
            return Err(Error::NotConvex(format!(
                "total turning {total} (curve not simple or not counterclockwise)"
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn with_sigma(mut self, sigma: Vec<f64>) -> Result<Self> {
        self.sigma = sigma;
        self.validate()?;
        Ok(self)
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    /// Signed exterior angle at every vertex.
    pub fn turning_angles(&self) -> Vec<f64> {
        let m = self.points.len();
        (0..m)
            .map(|i| {
                let a = sub(self.points[i], self.points[(i + m - 1) % m]);
                let b = sub(self.points[(i + 1) % m], self.points[i]);
                cross(a, b).atan2(dot(a, b))
            })
            .collect()
    }

    /// Polygon perimeter.
    pub fn perimeter(&self) -> f64 {
        let m = self.points.len();
        (0..m)
            .map(|i| dist(self.points[i], self.points[(i + 1) % m]))
            .sum()
    }

    pub fn vertex_centroid(&self) -> Point {
        let m = self.points.len() as f64;
        let (sx, sy) = self
            .points
            .iter()
            .fold((0.0, 0.0), |(x, y), p| (x + p[0], y + p[1]));
        [sx / m, sy / m]
    }

    /// True when `q` lies strictly on the inner side of every edge.
    pub fn strictly_contains(&self, q: Point) -> bool {
        let m = self.points.len();
        (0..m).all(|i| {
            let p = self.points[i];
            cross(sub(self.points[(i + 1) % m], p), sub(q, p)) > 0.0
        })
    }

    /// Cumulative chord length at every vertex, starting at zero.
    pub fn chord_parameters(&self) -> (Vec<f64>, f64) {
        let m = self.points.len();
        let mut s = Vec::with_capacity(m);
        let mut acc = 0.0;
        for i in 0..m {
            s.push(acc);
            acc += dist(self.points[i], self.points[(i + 1) % m]);
        }
        (s, acc)
    }

    /// Discrete Frenet frame from five-point finite differences in the
    /// chord-length parameter.
    pub fn frame(&self) -> Frame {
        frame_of(&self.points)
    }

    /// Resamples vertices to equal chord-length spacing (vertex 0 is kept);
    /// positions and `sigma` are carried by periodic cubic interpolation.
    pub fn resample_equal_arclength(&self, count: usize) -> Result<PlaneCurve> {
        let (s, total) = self.chord_parameters();
        let xs: Vec<f64> = self.points.iter().map(|p| p[0]).collect();
        let ys: Vec<f64> = self.points.iter().map(|p| p[1]).collect();
        let ix = PeriodicCubic::new(&s, total, &xs)?;
        let iy = PeriodicCubic::new(&s, total, &ys)?;
        let is = PeriodicCubic::new(&s, total, &self.sigma)?;
        let mut points = Vec::with_capacity(count);
        let mut sigma = Vec::with_capacity(count);
        for k in 0..count {
            let at = total * k as f64 / count as f64;
            points.push([ix.eval(at), iy.eval(at)]);
            sigma.push(is.eval(at));
        }
        PlaneCurve::new(points, sigma, self.t)
    }

    pub fn translated(&self, by: Point) -> PlaneCurve {
        PlaneCurve {
            points: self.points.iter().map(|p| add(*p, by)).collect(),
            sigma: self.sigma.clone(),
            t: self.t,
        }
    }

    pub fn rotated(&self, angle: f64) -> PlaneCurve {
        let (s, c) = angle.sin_cos();
        PlaneCurve {
            points: self
                .points
                .iter()
                .map(|p| [c * p[0] - s * p[1], s * p[0] + c * p[1]])
                .collect(),
            sigma: self.sigma.clone(),
            t: self.t,
        }
    }
}

pub(crate) fn frame_of(points: &[Point]) -> Frame {
    let m = points.len();
    let mut tangent = Vec::with_capacity(m);
    let mut normal = Vec::with_capacity(m);
    let mut curvature = Vec::with_capacity(m);
    let mut normal_angle = Vec::with_capacity(m);
    for i in 0..m {
        // local chord-length coordinates of the five-point neighbourhood
        let idx = |o: isize| ((i as isize + o).rem_euclid(m as isize)) as usize;
        let mut nodes = [0.0; 5];
        for o in 1..=2isize {
            nodes[(2 + o) as usize] =
                nodes[(1 + o) as usize] + dist(points[idx(o - 1)], points[idx(o)]);
            nodes[(2 - o) as usize] =
                nodes[(3 - o) as usize] - dist(points[idx(1 - o)], points[idx(-o)]);
        }
        let w = fornberg_weights(0.0, &nodes);
        let (mut d1, mut d2) = ([0.0; 2], [0.0; 2]);
        for (k, o) in (-2..=2isize).enumerate() {
            let p = points[idx(o)];
            for c in 0..2 {
                d1[c] += w[1][k] * p[c];
                d2[c] += w[2][k] * p[c];
            }
        }
        let speed = norm(d1);
        let tg = [d1[0] / speed, d1[1] / speed];
        let nu = [tg[1], -tg[0]];
        tangent.push(tg);
        normal.push(nu);
        curvature.push(cross(d1, d2) / speed.powi(3));
        normal_angle.push(nu[1].atan2(nu[0]).rem_euclid(2.0 * PI));
    }
    Frame {
        tangent,
        normal,
        curvature,
        normal_angle,
    }
}

/// Finite-difference weights for derivatives 0..=2 at `x0` on arbitrary
/// nodes (Fornberg's recursion).
pub(crate) fn fornberg_weights(x0: f64, nodes: &[f64]) -> [Vec<f64>; 3] {
    let n = nodes.len();
    let mut c = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(2);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Local four-point cubic interpolation of periodic data on increasing,
/// possibly non-uniform, parameters `params ⊂ [p0, p0 + period)`.
#[derive(Debug, Clone)]
pub struct PeriodicCubic {
    params: Vec<f64>,
    values: Vec<f64>,
    period: f64,
}

impl PeriodicCubic {
    pub fn new(params: &[f64], period: f64, values: &[f64]) -> Result<Self> {
        if params.len() != values.len() {
            return Err(Error::LengthMismatch {
                expected: params.len(),
                got: values.len(),
            });
        }
        if params.len() < 4 {
            return Err(Error::InsufficientData(
                "cubic interpolation needs at least four nodes".into(),
            ));
        }
        if params.windows(2).any(|w| w[1] <= w[0]) || params[params.len() - 1] >= params[0] + period
        {
            return Err(Error::InvalidConfig(
                "interpolation parameters must increase within one period".into(),
            ));
        }
        Ok(Self {
            params: params.to_vec(),
            values: values.to_vec(),
            period,
        })
    }

    pub fn eval(&self, at: f64) -> f64 {
        let m = self.params.len();
        let p0 = self.params[0];
        let x = p0 + (at - p0).rem_euclid(self.period);
        // interval [params[i], params[i+1]) containing x, wrapping past the end
        let i = match self.params.partition_point(|&p| p <= x) {
            0 => m - 1,
            k => k - 1,
        };
        let node = |o: isize| {
            let raw = i as isize + o;
            let wraps = raw.div_euclid(m as isize);
            let j = raw.rem_euclid(m as isize) as usize;
            (self.params[j] + wraps as f64 * self.period, self.values[j])
        };
        let pts = [node(-1), node(0), node(1), node(2)];
        let mut acc = 0.0;
        for (a, &(xa, ya)) in pts.iter().enumerate() {
            let mut l = 1.0;
            for (b, &(xb, _)) in pts.iter().enumerate() {
                if a != b {
                    l *= (x - xb) / (xa - xb);
                }
            }
            acc += l * ya;
        }
        acc
    }
}

pub(crate) fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

pub(crate) fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1]]
}

pub(crate) fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub(crate) fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub(crate) fn norm(a: Point) -> f64 {
    a[0].hypot(a[1])
}

pub(crate) fn dist(a: Point, b: Point) -> f64 {
    norm(sub(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ellipse(a: f64, b: f64, m: usize) -> PlaneCurve {
        let pts = (0..m)
            .map(|i| {
                let u = 2.0 * PI * i as f64 / m as f64;
                [a * u.cos(), b * u.sin()]
            })
            .collect();
        PlaneCurve::new(pts, vec![0.0; m], 0.0).unwrap()
    }

    #[test]
    fn fornberg_matches_centered_stencil() {
        let w = fornberg_weights(0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0]);
        let d1 = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        let d2 = [-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0];
        for k in 0..5 {
            assert!((w[1][k] - d1[k]).abs() < 1e-14);
            assert!((w[2][k] - d2[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn circle_frame_is_exact_to_discretisation() {
        let c = ellipse(2.0, 2.0, 256);
        let f = c.frame();
        for (i, k) in f.curvature.iter().enumerate() {
            assert!((k - 0.5).abs() < 1e-6, "k[{i}] = {k}");
            let p = c.points()[i];
            assert!((dot(f.normal[i], p) - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ellipse_curvature_at_vertices() {
        let f = ellipse(2.0, 1.0, 512).frame();
        assert!((f.curvature[0] - 2.0).abs() < 1e-5);
        assert!((f.curvature[128] - 0.25).abs() < 1e-5);
    }

    #[test]
    fn rejects_clockwise_and_nonconvex() {
        let mut pts: Vec<Point> = ellipse(1.0, 1.0, 16).points().to_vec();
        pts.reverse();
        assert!(matches!(
            PlaneCurve::new(pts.clone(), vec![0.0; 16], 0.0),
            Err(Error::NotConvex(_))
        ));
        pts.reverse();
        pts[3] = [0.0, 0.0];
        assert!(PlaneCurve::new(pts, vec![0.0; 16], 0.0).is_err());
    }

    #[test]
    fn rejects_collided_vertices() {
        let mut pts: Vec<Point> = ellipse(1.0, 1.0, 16).points().to_vec();
        pts[4] = pts[3];
        assert!(matches!(
            PlaneCurve::new(pts, vec![0.0; 16], 0.0),
            Err(Error::DegenerateEdge { index: 3, .. })
        ));
    }

    #[test]
    fn resampling_keeps_the_curve() {
        let c = ellipse(2.0, 1.0, 300);
        let r = c.resample_equal_arclength(256).unwrap();
        for p in r.points() {
            let e = (p[0] / 2.0).powi(2) + p[1].powi(2) - 1.0;
            assert!(e.abs() < 1e-6, "off-curve by {e}");
        }
        let (s, total) = r.chord_parameters();
        let h = total / 256.0;
        for w in s.windows(2) {
            assert!(((w[1] - w[0]) / h - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn cubic_interpolation_reproduces_cubics_and_wraps() {
        let params = [0.0, 0.7, 1.5, 2.0, 3.1, 4.4, 5.0, 6.0];
        let period = 6.5;
        let vals: Vec<f64> = params.iter().map(|&x: &f64| (x * 2.0 * PI / period).sin()).collect();
        let ip = PeriodicCubic::new(&params, period, &vals).unwrap();
        for &x in &params {
            assert!((ip.eval(x) - (x * 2.0 * PI / period).sin()).abs() < 1e-12);
            assert!((ip.eval(x + period) - ip.eval(x)).abs() < 1e-12);
        }
        let inside = PeriodicCubic::new(&params, period, &params.map(|x| 1.0 + 2.0 * x)).unwrap();
        assert!((inside.eval(2.5) - 6.0).abs() < 1e-12);
    }
}
