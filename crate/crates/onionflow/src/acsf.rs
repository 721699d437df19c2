//! Front-tracking simulation of the affine curve-shortening flow on closed
//! convex curves.
//!
//! Each sample point moves toward the circumcircle center of itself and its
//! two neighbors with speed `r^{-1/3}`, plus a tangential component that
//! redistributes samples toward the farther neighbor so they do not bunch
//! up at regions of high curvature. The time step `c * d_min^{4/3}` makes
//! the scheme scale-independent.

use crate::geometry::{circumcircle, shoelace_area, Circumcircle, FloatPoint};
use crate::region::Region;
use crate::{Error, Result};

/// Time-step and tangential-velocity coefficients.
#[derive(Clone, Copy, Debug)]
pub struct StepParams {
    pub c_step: f64,
    pub lambda: f64,
}

impl Default for StepParams {
    fn default() -> Self {
        // stability of the explicit update at m samples requires roughly
        // c < 3 s0 / (speed * d^{4/3}) with s0 the per-sample sagitta; 0.02
        // keeps the standard 1024-sample circle in the damped regime
        StepParams {
            c_step: 0.02,
            lambda: 0.5,
        }
    }
}

impl StepParams {
    pub fn new(c_step: f64, lambda: f64) -> Result<Self> {
        // NaN must not slip through either check
        if !c_step.is_finite() || c_step <= 0.0 || !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "step params need c_step > 0 and lambda >= 0, got {c_step}, {lambda}"
            )));
        }
        Ok(StepParams { c_step, lambda })
    }
}

/// No point may travel farther than this fraction of the minimum sample
/// spacing in one step; the step size is shortened when a fast corner point
/// would exceed it.
const MAX_DISPLACEMENT_FRACTION: f64 = 0.4;

/// Spacing ratio past which the run loop resamples the curve uniformly.
const RESAMPLE_SPACING_RATIO: f64 = 10.0;

/// Step-count guard for the run loops.
const MAX_FLOW_STEPS: u64 = 20_000_000;

/// Relative tolerance for the convexity validation of input curves.
const CONVEXITY_TOL: f64 = 1e-12;

/// A closed convex curve sampled at `>= 8` points, with the flow time
/// accumulated so far.
#[derive(Clone, Debug)]
pub struct FrontCurve {
    points: Vec<FloatPoint>,
    elapsed_time: f64,
    area: f64,
}

impl FrontCurve {
    /// Validates and normalizes a closed convex sample loop to CCW order.
    /// Collinear triples are tolerated; reflex turns are not.
    pub fn new(points: Vec<FloatPoint>) -> Result<Self> {
        let mut points = points;
        if points.len() < 8 {
            return Err(Error::InvalidParameter(format!(
                "a front curve needs at least 8 samples, got {}",
                points.len()
            )));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParameter(
                "front curve contains non-finite coordinates".into(),
            ));
        }
        let area = shoelace_area(&points);
        if area == 0.0 {
            return Err(Error::NonConvexCurve);
        }
        if area < 0.0 {
            points.reverse();
        }
        let m = points.len();
        let mut diam2: f64 = 0.0;
        for i in 0..m {
            let d = points[i].dist(points[(i + 1) % m]);
            if d == 0.0 {
                return Err(Error::InvalidParameter(
                    "front curve has coincident consecutive samples".into(),
                ));
            }
            diam2 = diam2.max(d * d);
        }
        let tol = CONVEXITY_TOL * diam2 * m as f64;
        for i in 0..m {
            let o = points[i];
            let a = points[(i + 1) % m];
            let b = points[(i + 2) % m];
            let cross = (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
            if cross < -tol {
                return Err(Error::NonConvexCurve);
            }
        }
        let area = area.abs();
        Ok(FrontCurve {
            points,
            elapsed_time: 0.0,
            area,
        })
    }

    pub fn points(&self) -> &[FloatPoint] {
        &self.points
    }

    pub fn elapsed_time(&self) -> f64 {
        self.elapsed_time
    }

    pub fn enclosed_area(&self) -> f64 {
        self.area
    }

    pub fn min_spacing(&self) -> f64 {
        let m = self.points.len();
        (0..m)
            .map(|i| self.points[i].dist(self.points[(i + 1) % m]))
            .fold(f64::INFINITY, f64::min)
    }

    fn spacing_ratio(&self) -> f64 {
        let m = self.points.len();
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for i in 0..m {
            let d = self.points[i].dist(self.points[(i + 1) % m]);
            lo = lo.min(d);
            hi = hi.max(d);
        }
        hi / lo
    }

    /// One simultaneous update of all samples.
    ///
    /// Velocities are evaluated on a snapshot of the current points, so the
    /// update is order-independent. Fails with [`Error::StepRejected`] if the
    /// step would stop shrinking the enclosed area (the caller is expected
    /// to halve `c_step` and retry).
    pub fn step(&self, params: &StepParams) -> Result<FrontCurve> {
        let pts = &self.points;
        let m = pts.len();
        let d_min = self.min_spacing();
        let mut dt = params.c_step * d_min.powf(4.0 / 3.0);

        let mut velocities: Vec<FloatPoint> = Vec::with_capacity(m);
        let mut v_max: f64 = 0.0;
        for i in 0..m {
            let prev = pts[(i + m - 1) % m];
            let p = pts[i];
            let next = pts[(i + 1) % m];
            let vel = match circumcircle(prev, p, next)? {
                Circumcircle::Straight => FloatPoint::new(0.0, 0.0),
                Circumcircle::Circle { center, radius } => {
                    let toward = center - p;
                    let dist = toward.x.hypot(toward.y);
                    let speed = radius.powf(-1.0 / 3.0);
                    let normal = toward * (speed / dist);
                    let d_prev = p.dist(prev);
                    let d_next = p.dist(next);
                    if params.lambda == 0.0 || d_prev == d_next {
                        normal
                    } else {
                        let mag = params.lambda * speed * (d_prev / d_next).ln().abs();
                        // unit tangent, oriented toward the farther neighbor
                        let mut tangent = FloatPoint::new(-normal.y / speed, normal.x / speed);
                        let farther = if d_next > d_prev { next } else { prev };
                        let toward_far = farther - p;
                        if tangent.x * toward_far.x + tangent.y * toward_far.y < 0.0 {
                            tangent = tangent * -1.0;
                        }
                        normal + tangent * mag
                    }
                }
            };
            v_max = v_max.max(vel.x.hypot(vel.y));
            velocities.push(vel);
        }

        let cap = MAX_DISPLACEMENT_FRACTION * d_min;
        if v_max * dt > cap {
            dt = cap / v_max;
        }

        let new_points: Vec<FloatPoint> = (0..m).map(|i| pts[i] + velocities[i] * dt).collect();
        if new_points.iter().any(|p| !p.is_finite()) {
            return Err(Error::StepRejected("non-finite coordinates"));
        }
        let new_area = shoelace_area(&new_points);
        if new_area <= 0.0 {
            return Err(Error::StepRejected("area became non-positive"));
        }
        if new_area >= self.area {
            return Err(Error::StepRejected("area did not decrease"));
        }
        let mm = new_points.len();
        for i in 0..mm {
            if new_points[i] == new_points[(i + 1) % mm] {
                return Err(Error::StepRejected("samples collided"));
            }
        }
        Ok(FrontCurve {
            points: new_points,
            elapsed_time: self.elapsed_time + dt,
            area: new_area,
        })
    }

    /// Arclength-uniform resampling to `m` points, starting from sample 0.
    pub fn resampled(&self, m: usize) -> FrontCurve {
        debug_assert!(m >= 8, "resampling below the minimum sample count");
        let pts = &self.points;
        let k = pts.len();
        let mut cumulative = Vec::with_capacity(k + 1);
        cumulative.push(0.0);
        for i in 0..k {
            let d = pts[i].dist(pts[(i + 1) % k]);
            cumulative.push(cumulative[i] + d);
        }
        let perimeter = cumulative[k];
        let mut out = Vec::with_capacity(m);
        let mut seg = 0usize;
        for j in 0..m {
            let target = perimeter * j as f64 / m as f64;
            while seg + 1 < k && cumulative[seg + 1] < target {
                seg += 1;
            }
            let span = cumulative[seg + 1] - cumulative[seg];
            let t = if span > 0.0 {
                (target - cumulative[seg]) / span
            } else {
                0.0
            };
            let a = pts[seg];
            let b = pts[(seg + 1) % k];
            out.push(a + (b - a) * t);
        }
        let area = shoelace_area(&out).abs();
        FrontCurve {
            points: out,
            elapsed_time: self.elapsed_time,
            area,
        }
    }
}

fn step_with_backoff(curve: &FrontCurve, params: &mut StepParams) -> Result<FrontCurve> {
    loop {
        match curve.step(params) {
            Ok(next) => return Ok(next),
            Err(Error::StepRejected(_)) if params.c_step > 1e-12 => {
                params.c_step /= 2.0;
            }
            Err(e) => return Err(e),
        }
    }
}

/// Flows the curve until its area first drops to `target_fraction` of the
/// starting area; returns the final curve and the flow time taken.
pub fn run_until_area(
    curve: FrontCurve,
    target_fraction: f64,
    params: &StepParams,
) -> Result<(FrontCurve, f64)> {
    let mut checkpoints = run_with_area_checkpoints(curve, &[target_fraction], params)?;
    let (t, curve) = checkpoints.pop().expect("one checkpoint per fraction");
    Ok((curve, t))
}

/// Flows the curve through a sequence of area fractions, snapshotting the
/// first state at or below each one. Fractions are processed in decreasing
/// order; the returned list matches that order.
pub fn run_with_area_checkpoints(
    curve: FrontCurve,
    fractions: &[f64],
    params: &StepParams,
) -> Result<Vec<(f64, FrontCurve)>> {
    if fractions.is_empty() {
        return Ok(Vec::new());
    }
    if fractions.iter().any(|f| !(*f > 0.0 && *f < 1.0)) {
        return Err(Error::InvalidParameter(
            "area fractions must lie in (0, 1)".into(),
        ));
    }
    let mut order: Vec<f64> = fractions.to_vec();
    order.sort_by(|a, b| b.total_cmp(a));
    let m = curve.points.len();
    let initial_area = curve.enclosed_area();
    let mut params = *params;
    let mut current = curve;
    let mut out = Vec::with_capacity(order.len());
    let mut steps = 0u64;
    for fraction in order {
        let target = fraction * initial_area;
        while current.enclosed_area() > target {
            if steps >= MAX_FLOW_STEPS {
                return Err(Error::NonConvergence {
                    max_steps: MAX_FLOW_STEPS,
                });
            }
            if current.spacing_ratio() > RESAMPLE_SPACING_RATIO {
                current = current.resampled(m);
            }
            current = step_with_backoff(&current, &mut params)?;
            steps += 1;
        }
        out.push((current.elapsed_time(), current.clone()));
    }
    Ok(out)
}

/// Exact radius of a circle of initial radius `r0` after flowing for time
/// `t`: `r(t) = (r0^{4/3} - 4t/3)^{3/4}`.
pub fn circle_radius(r0: f64, t: f64) -> Result<f64> {
    if !r0.is_finite() || r0 <= 0.0 || t < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "circle radius needs r0 > 0 and t >= 0, got r0={r0}, t={t}"
        )));
    }
    let collapse = 0.75 * r0.powf(4.0 / 3.0);
    if t > collapse {
        return Err(Error::PastCollapse { t, collapse });
    }
    Ok((r0.powf(4.0 / 3.0) - 4.0 * t / 3.0).max(0.0).powf(0.75))
}

/// Flow time at which a circle of radius `r0` encloses `fraction` of its
/// initial area.
pub fn circle_time_to_area_fraction(r0: f64, fraction: f64) -> f64 {
    // area fraction f means r/r0 = sqrt(f)
    0.75 * r0.powf(4.0 / 3.0) * (1.0 - fraction.powf(2.0 / 3.0))
}

/// Samples `m` approximately arclength-uniform points on the region
/// boundary; corners of polygonal regions are always among the samples.
pub fn sample_region_boundary(region: &Region, m: usize) -> Result<FrontCurve> {
    if m < 8 {
        return Err(Error::InvalidParameter(format!(
            "boundary sampling needs m >= 8, got {m}"
        )));
    }
    let points = match region {
        Region::Disk { center, diameter } => {
            let r = diameter / 2.0;
            (0..m)
                .map(|i| {
                    let a = 2.0 * std::f64::consts::PI * i as f64 / m as f64;
                    FloatPoint::new(center.x + r * a.cos(), center.y + r * a.sin())
                })
                .collect()
        }
        Region::HalfDisk { center, diameter } => {
            let r = diameter / 2.0;
            let flat = *diameter;
            let arc = std::f64::consts::PI * r;
            let corners = [
                FloatPoint::new(center.x + r, center.y),
                FloatPoint::new(center.x - r, center.y),
            ];
            let counts = apportion(m - 2, &[arc, flat]);
            let mut pts = Vec::with_capacity(m);
            pts.push(corners[0]);
            for j in 1..=counts[0] {
                let a = std::f64::consts::PI * j as f64 / (counts[0] + 1) as f64;
                pts.push(FloatPoint::new(
                    center.x + r * a.cos(),
                    center.y + r * a.sin(),
                ));
            }
            pts.push(corners[1]);
            for j in 1..=counts[1] {
                let t = j as f64 / (counts[1] + 1) as f64;
                pts.push(corners[1] + (corners[0] - corners[1]) * t);
            }
            pts
        }
        Region::ParametricCurve { .. } => {
            let poly = region.boundary_polygon();
            let hull = FrontCurve::new(poly)?;
            return Ok(hull.resampled(m));
        }
        _ => {
            let poly = region.boundary_polygon();
            if m < poly.len() {
                return Err(Error::InvalidParameter(format!(
                    "cannot keep {} corners among {m} samples",
                    poly.len()
                )));
            }
            sample_polygon(&poly, m)
        }
    };
    FrontCurve::new(points)
}

/// Largest-remainder apportionment of `extra` samples over edge lengths.
fn apportion(extra: usize, lengths: &[f64]) -> Vec<usize> {
    let total: f64 = lengths.iter().sum();
    let quotas: Vec<f64> = lengths.iter().map(|l| extra as f64 * l / total).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..lengths.len()).collect();
    order.sort_by(|&i, &j| {
        let fi = quotas[i] - quotas[i].floor();
        let fj = quotas[j] - quotas[j].floor();
        fj.total_cmp(&fi).then(i.cmp(&j))
    });
    for &i in order.iter().take(extra - assigned) {
        counts[i] += 1;
    }
    counts
}

fn sample_polygon(poly: &[FloatPoint], m: usize) -> Vec<FloatPoint> {
    let k = poly.len();
    debug_assert!(m >= k, "more corners than samples");
    let lengths: Vec<f64> = (0..k).map(|i| poly[i].dist(poly[(i + 1) % k])).collect();
    let counts = apportion(m - k, &lengths);
    let mut out = Vec::with_capacity(m);
    for i in 0..k {
        out.push(poly[i]);
        let next = poly[(i + 1) % k];
        for j in 1..=counts[i] {
            let t = j as f64 / (counts[i] + 1) as f64;
            out.push(poly[i] + (next - poly[i]) * t);
        }
    }
    out
}
