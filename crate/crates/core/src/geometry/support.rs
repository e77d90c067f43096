//! Support functions of strictly convex curves on a normal-angle grid and
//! the conversions between the support and vertex representations.

use super::curve::{dot, sub, PlaneCurve, Point};
use super::grid::AngleGrid;
use super::spectral::Order;
use crate::error::{ensure_finite, Error, Result};

/// Relative convexity floor: `ε_convex = DEFAULT_CONVEX_FLOOR · mean(S)`.
pub const DEFAULT_CONVEX_FLOOR: f64 = 1e-8;

/// Support function `S` and its time derivative `V = S_τ` sampled on a
/// normal-angle grid, measured from `center`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportState {
    grid: AngleGrid,
    s: Vec<f64>,
    v: Vec<f64>,
    t: f64,
    center: Point,
    eps_convex: f64,
}

impl SupportState {
    /// Builds a state centred at the origin with the default convexity floor.
    pub fn new(grid: AngleGrid, s: Vec<f64>, v: Vec<f64>, t: f64) -> Result<Self> {
        let eps = default_floor(&s);
        Self::with_floor(grid, s, v, t, [0.0, 0.0], eps)
    }

    pub fn with_floor(
        grid: AngleGrid,
        s: Vec<f64>,
        v: Vec<f64>,
        t: f64,
        center: Point,
        eps_convex: f64,
    ) -> Result<Self> {
        for len in [s.len(), v.len()] {
            if len != grid.len() {
                return Err(Error::LengthMismatch {
                    expected: grid.len(),
                    got: len,
                });
            }
        }
        ensure_finite(&s, "support function")?;
        ensure_finite(&v, "support velocity")?;
        if !(eps_convex.is_finite() && eps_convex > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "convexity floor must be positive, got {eps_convex}"
            )));
        }
        let state = Self {
            grid,
            s,
            v,
            t,
            center,
            eps_convex,
        };
        state.radius_of_curvature()?;
        Ok(state)
    }

    pub(crate) fn from_parts_unchecked(
        grid: AngleGrid,
        s: Vec<f64>,
        v: Vec<f64>,
        t: f64,
        center: Point,
        eps_convex: f64,
    ) -> Self {
        Self {
            grid,
            s,
            v,
            t,
            center,
            eps_convex,
        }
    }

    pub fn grid(&self) -> &AngleGrid {
        &self.grid
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn eps_convex(&self) -> f64 {
        self.eps_convex
    }

    pub fn with_velocity(mut self, v: Vec<f64>) -> Result<Self> {
        if v.len() != self.grid.len() {
            return Err(Error::LengthMismatch {
                expected: self.grid.len(),
                got: v.len(),
            });
        }
        ensure_finite(&v, "support velocity")?;
        self.v = v;
        Ok(self)
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    pub fn with_eps_convex(mut self, eps: f64) -> Result<Self> {
        self.eps_convex = eps;
        self.radius_of_curvature()?;
        Ok(self)
    }

    /// Support function measured from the origin: `S + ⟨center, ν(θ)⟩`.
    pub fn absolute_support(&self) -> Vec<f64> {
        let [cx, cy] = self.center;
        self.grid
            .thetas()
            .iter()
            .zip(&self.s)
            .map(|(&th, &s)| s + cx * th.cos() + cy * th.sin())
            .collect()
    }

    /// `S_θθ + S`, the radius of curvature, checked against the floor.
    pub fn radius_of_curvature(&self) -> Result<Vec<f64>> {
        let s_tt = self.grid.spectral().derivative_unchecked(&self.s, Order::Second);
        let rho: Vec<f64> = s_tt.iter().zip(&self.s).map(|(a, b)| a + b).collect();
        check_floor(&self.grid, &rho, self.eps_convex, self.t)?;
        Ok(rho)
    }

    pub fn min_radius_of_curvature(&self) -> Result<f64> {
        Ok(self
            .radius_of_curvature()?
            .into_iter()
            .fold(f64::INFINITY, f64::min))
    }
}

pub(crate) fn default_floor(s: &[f64]) -> f64 {
    let mean = s.iter().sum::<f64>() / s.len().max(1) as f64;
    DEFAULT_CONVEX_FLOOR * mean.abs().max(f64::MIN_POSITIVE)
}

/// Fails with `ConvexityLost` over the contiguous θ-run around the worst sample.
pub(crate) fn check_floor(grid: &AngleGrid, rho: &[f64], eps: f64, t: f64) -> Result<()> {
    let n = rho.len();
    let (worst, &min_radius) = rho
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("grid is never empty");
    if min_radius > eps {
        return Ok(());
    }
    let bad = |j: usize| rho[j % n] <= eps;
    let mut lo = worst;
    let mut steps = 0;
    while steps < n && bad((lo + n - 1) % n) {
        lo = (lo + n - 1) % n;
        steps += 1;
    }
    let mut hi = worst;
    while steps < n && bad(hi + 1) {
        hi = (hi + 1) % n;
        steps += 1;
    }
    Err(Error::ConvexityLost {
        t,
        theta_lo: grid.theta(lo),
        theta_hi: grid.theta(hi),
        min_radius,
    })
}

/// Reconstructs the curve `x = S cosθ − S_θ sinθ`, `y = S sinθ + S_θ cosθ`
/// (plus the state's centre); vertex `j` carries `σ = V[j]`.
pub fn support_to_curve(s: &SupportState) -> Result<PlaneCurve> {
    s.radius_of_curvature()?;
    let s_th = s.grid.spectral().derivative_unchecked(&s.s, Order::First);
    let [cx, cy] = s.center;
    let points = s
        .grid
        .thetas()
        .iter()
        .zip(s.s.iter().zip(&s_th))
        .map(|(&th, (&h, &dh))| {
            let (sn, cs) = th.sin_cos();
            [cx + h * cs - dh * sn, cy + h * sn + dh * cs]
        })
        .collect();
    PlaneCurve::new(points, s.v.clone(), s.t)
}

/// Discrete support function of a convex polygon on `grid`.
///
/// The origin is used as the support centre when it lies strictly inside the
/// curve; otherwise the vertex centroid is used and recorded as the state's
/// centre. Each sample is the vertex maximum of `⟨P − c, ν(θ)⟩`, refined by a
/// quadratic fit through the arg-max vertex and its two neighbours in the
/// local tangent/normal frame. The velocity is left at zero.
pub fn curve_to_support(c: &PlaneCurve, grid: &AngleGrid) -> Result<SupportState> {
    c.validate()?;
    let origin = [0.0, 0.0];
    let center = if c.strictly_contains(origin) {
        origin
    } else {
        let centroid = c.vertex_centroid();
        if !c.strictly_contains(centroid) {
            return Err(Error::OriginNotInterior);
        }
        centroid
    };
    let pts: Vec<Point> = c.points().iter().map(|p| sub(*p, center)).collect();
    let s = support_samples(&pts, grid);
    let eps = default_floor(&s);
    SupportState::with_floor(grid.clone(), s, vec![0.0; grid.len()], c.t(), center, eps)
}

pub(crate) fn support_samples(pts: &[Point], grid: &AngleGrid) -> Vec<f64> {
    let m = pts.len();
    let mut best = 0;
    (0..grid.len())
        .map(|j| {
            let nu = grid.normal(j);
            // the arg-max moves monotonically with θ; walk from the last one
            // and fall back to a full scan when the walk stalls on a plateau
            let f = |i: usize| dot(pts[i % m], nu);
            let mut steps = 0;
            while steps < m && f(best + 1) > f(best) {
                best = (best + 1) % m;
                steps += 1;
            }
            if f((best + m - 1) % m) > f(best) {
                best = (0..m).max_by(|&a, &b| f(a).total_cmp(&f(b))).unwrap_or(0);
            }
            let at = |k: usize| pts[(best + m - 2 + k) % m];
            if m >= 5 {
                if let Some(v) = refine_max_quartic([at(0), at(1), at(2), at(3), at(4)], nu) {
                    return v;
                }
            }
            refine_max(at(1), at(2), at(3), nu)
        })
        .collect()
}

/// Maximum of the quartic through five consecutive vertices, in the frame
/// whose normal axis is `nu`, found by Newton's method from the middle vertex.
/// `None` unless the fit is concave at a peak inside the inner bracket.
fn refine_max_quartic(w: [Point; 5], nu: Point) -> Option<f64> {
    let tg = [-nu[1], nu[0]];
    let t0 = dot(w[2], tg);
    let x: Vec<f64> = w.iter().map(|p| dot(*p, tg) - t0).collect();
    let y: Vec<f64> = w.iter().map(|p| dot(*p, nu)).collect();
    if !x.windows(2).all(|p| p[0] < p[1]) {
        return None;
    }
    // Newton divided differences, then expansion to monomial coefficients
    let mut c = y.clone();
    for k in 1..5 {
        for i in (k..5).rev() {
            c[i] = (c[i] - c[i - 1]) / (x[i] - x[i - k]);
        }
    }
    let mut poly = vec![c[4]];
    for k in (0..4).rev() {
        let mut next = vec![0.0; poly.len() + 1];
        for (i, a) in poly.iter().enumerate() {
            next[i + 1] += a;
            next[i] -= a * x[k];
        }
        next[0] += c[k];
        poly = next;
    }
    let eval = |t: f64, d: usize| -> f64 {
        poly.iter()
            .enumerate()
            .skip(d)
            .map(|(i, a)| {
                let f: f64 = ((i - d + 1)..=i).map(|j| j as f64).product();
                a * f * t.powi((i - d) as i32)
            })
            .sum()
    };
    let mut t = 0.0;
    for _ in 0..30 {
        let d2 = eval(t, 2);
        if d2 >= 0.0 {
            return None;
        }
        let step = eval(t, 1) / d2;
        t -= step;
        if t < x[1] || t > x[3] {
            return None;
        }
        if step.abs() <= 1e-15 * (x[3] - x[1]) {
            break;
        }
    }
    let peak = eval(t, 0);
    (peak >= y[2] && eval(t, 2) < 0.0).then_some(peak)
}

/// Maximum of the parabola `η(τ)` through three points, in the frame whose
/// normal axis is `nu`. Falls back to the middle value when the fit is not
/// concave or its peak leaves the bracket.
fn refine_max(a: Point, b: Point, c: Point, nu: Point) -> f64 {
    let tg = [-nu[1], nu[0]];
    let (ta, tb, tc) = (dot(a, tg), dot(b, tg), dot(c, tg));
    let (ea, eb, ec) = (dot(a, nu), dot(b, nu), dot(c, nu));
    if !(ta < tb && tb < tc) {
        return eb;
    }
    // divided differences, centred at τ_b
    let d1 = (eb - ea) / (tb - ta);
    let d2 = (ec - eb) / (tc - tb);
    let curv = (d2 - d1) / (tc - ta);
    if curv >= 0.0 {
        return eb;
    }
    // η(τ) = eb + slope·(τ − τ_b) + curv·(τ − τ_b)²
    let slope = d1 + curv * (tb - ta);
    let peak = -slope / (2.0 * curv);
    if peak < ta - tb || peak > tc - tb {
        return eb;
    }
    eb - slope * slope / (4.0 * curv)
}

/// Curvature `k = 1/(S_θθ + S)`.
pub fn curvature_from_support(s: &SupportState) -> Result<Vec<f64>> {
    Ok(s.radius_of_curvature()?.into_iter().map(|r| 1.0 / r).collect())
}

/// Length `L = ∫ S dθ` (the periodic integral of `S_θθ` vanishes).
pub fn length_from_support(s: &SupportState) -> Result<f64> {
    s.radius_of_curvature()?;
    Ok(s.grid.integrate(&s.s))
}

/// Hausdorff distance between two convex curves, `max_θ |h_a − h_b|`, with
/// both support functions taken about a common interior point and sampled on
/// `grid`.
pub fn hausdorff_convex(a: &PlaneCurve, b: &PlaneCurve, grid: &AngleGrid) -> Result<f64> {
    let center = a.vertex_centroid();
    if !(a.strictly_contains(center) && b.strictly_contains(center)) {
        return Err(Error::PreconditionFailed(
            "curves share no common interior point".into(),
        ));
    }
    let shift = |c: &PlaneCurve| -> Vec<Point> { c.points().iter().map(|p| sub(*p, center)).collect() };
    let ha = support_samples(&shift(a), grid);
    let hb = support_samples(&shift(b), grid);
    Ok(ha
        .iter()
        .zip(&hb)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

/// Exact support value of a vertex set in direction `nu`.
pub fn polygon_support(pts: &[Point], nu: Point) -> f64 {
    pts.iter().map(|p| dot(*p, nu)).fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid(n: usize) -> AngleGrid {
        AngleGrid::new(n).unwrap()
    }

    fn ellipse_support(a: f64, b: f64) -> impl Fn(f64) -> f64 {
        move |t: f64| (a * a * t.cos().powi(2) + b * b * t.sin().powi(2)).sqrt()
    }

    fn state(g: &AngleGrid, f: impl Fn(f64) -> f64) -> SupportState {
        SupportState::new(g.clone(), g.sample(f), vec![0.0; g.len()], 0.0).unwrap()
    }

    #[test]
    fn constant_support_is_a_centred_circle() {
        let g = grid(32);
        let c = support_to_curve(&state(&g, |_| 1.5)).unwrap();
        for p in c.points() {
            assert!((p[0].hypot(p[1]) - 1.5).abs() < 1e-13);
        }
        let k = curvature_from_support(&state(&g, |_| 1.5)).unwrap();
        assert!(k.iter().all(|k| (k - 1.0 / 1.5).abs() < 1e-13));
        assert!((length_from_support(&state(&g, |_| 1.5)).unwrap() - 3.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn translated_disk() {
        let g = grid(64);
        let st = state(&g, |t| 1.0 + 0.1 * t.cos());
        let c = support_to_curve(&st).unwrap();
        for p in c.points() {
            assert!(((p[0] - 0.1).hypot(p[1]) - 1.0).abs() < 1e-13);
        }
        for k in curvature_from_support(&st).unwrap() {
            assert!((k - 1.0).abs() < 1e-10);
        }
        assert!((length_from_support(&st).unwrap() - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn ellipse_vertices_lie_on_the_ellipse() {
        let g = grid(128);
        let c = support_to_curve(&state(&g, ellipse_support(2.0, 1.0))).unwrap();
        for p in c.points() {
            assert!(((p[0] / 2.0).powi(2) + p[1].powi(2) - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn ellipse_curvature_extremes() {
        let g = grid(128);
        let k = curvature_from_support(&state(&g, ellipse_support(2.0, 1.0))).unwrap();
        assert!((k[0] - 2.0).abs() < 1e-6);
        assert!((k[32] - 0.25).abs() < 1e-6);
    }

    #[test]
    fn convexity_loss_reports_the_bad_range() {
        let g = grid(64);
        // S = 1 + 0.5 cos 2θ gives S_θθ + S = 1 − 1.5 cos 2θ < 0 near θ = 0, π
        let err = SupportState::new(g.clone(), g.sample(|t| 1.0 + 0.5 * (2.0 * t).cos()), vec![0.0; 64], 0.3)
            .unwrap_err();
        match err {
            Error::ConvexityLost { t, min_radius, .. } => {
                assert_eq!(t, 0.3);
                assert!((min_radius + 0.5).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn curve_to_support_recentres_when_origin_outside() {
        let g = grid(64);
        let c = support_to_curve(&state(&g, |_| 1.0)).unwrap().translated([5.0, -2.0]);
        let s = curve_to_support(&c, &g).unwrap();
        assert!((s.center()[0] - 5.0).abs() < 1e-12 && (s.center()[1] + 2.0).abs() < 1e-12);
        assert!(s.s().iter().all(|v| (v - 1.0).abs() < 1e-12));
        let back = support_to_curve(&s).unwrap();
        for (p, q) in back.points().iter().zip(c.points()) {
            assert!((p[0] - q[0]).abs() < 1e-9 && (p[1] - q[1]).abs() < 1e-9);
        }
    }

    #[test]
    fn refine_max_falls_back_on_polygon_corners() {
        // square corner at (1,1) seen along the diagonal: exact polygon value
        let nu = [1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt()];
        let v = refine_max([1.0, 0.0], [1.0, 1.0], [0.0, 1.0], nu);
        assert!(v >= polygon_support(&[[1.0, 1.0]], nu) - 1e-15);
        assert!(v < 2f64.sqrt() + 0.2);
    }
}
