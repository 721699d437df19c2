//! Experiment orchestration: peeling the same region the flow simulator
//! evolves, measuring Hausdorff distances between the two fronts, and
//! estimating the constant that couples peeling iterations to flow time.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::acsf::{
    circle_radius, circle_time_to_area_fraction, run_with_area_checkpoints, sample_region_boundary,
    StepParams,
};
use crate::geometry::{convex_hull, hausdorff_distance, ConvexChain, FloatPoint};
use crate::peel::{rasterize, RowIntervalSet};
use crate::quadrant::{estimate_c_quadrant, QuadrantProfile};
use crate::region::Region;
use crate::{Error, Result};

/// Sample count for reference flow runs and for polygonizing exact
/// boundaries before Hausdorff measurements.
///
/// Denser sampling does not help here: on boundaries with flat segments the
/// per-sample curvature signal scales like 1/m^2 while the front tracker's
/// transverse jitter floor scales like 1/m, so oversampling drowns the
/// signal (m = 4096 visibly derails on the unit square) whereas m = 1024
/// with the finer step below tracks closed forms to a few parts in 10^3.
pub const REFERENCE_SAMPLES: usize = 1024;
/// Time-step coefficient for reference flow runs (finer than the default).
pub const REFERENCE_C_STEP: f64 = 0.01;
pub const REFERENCE_LAMBDA: f64 = 0.5;

/// One cell of the peeling-vs-flow comparison.
#[derive(Clone, Debug)]
pub struct ComparisonRecord {
    pub region: String,
    pub n: u32,
    pub fraction: f64,
    /// Peeling iterations to reach the point-count fraction.
    pub m_layers: u32,
    /// Flow time to reach the area fraction.
    pub t_flow: f64,
    /// Hausdorff distance between the two fronts, in region units.
    pub hausdorff: f64,
    /// Hausdorff distance between the initial grid hull and the exact
    /// boundary — the inherent discretization error at this density.
    pub initial_hausdorff: f64,
    /// `m / (t n^{4/3})`.
    pub c_est: f64,
}

/// Inverts `m = c t n^{4/3}` for `c`.
pub fn estimate_c(m_layers: u32, t: f64, n: u32) -> Result<f64> {
    if t <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "flow time must be positive, got {t}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("grid density must be >= 1".into()));
    }
    Ok(m_layers as f64 / (t * (n as f64).powf(4.0 / 3.0)))
}

/// Flow-side checkpoints for a region at the given area fractions
/// (descending): `(t_i, front chain)` per fraction.
///
/// Disks use the closed-form circle solution instead of simulation; other
/// regions run the front tracker once with reference parameters.
pub fn acsf_reference_checkpoints(
    region: &Region,
    fractions: &[f64],
) -> Result<Vec<(f64, ConvexChain<FloatPoint>)>> {
    let mut order: Vec<f64> = fractions.to_vec();
    order.sort_by(|a, b| b.total_cmp(a));
    if let Region::Disk { center, diameter } = region {
        let r0 = diameter / 2.0;
        let mut out = Vec::with_capacity(order.len());
        for fraction in order {
            let t = circle_time_to_area_fraction(r0, fraction);
            let r = circle_radius(r0, t)?;
            let shrunk = Region::Disk {
                center: *center,
                diameter: 2.0 * r,
            };
            let curve = sample_region_boundary(&shrunk, REFERENCE_SAMPLES)?;
            out.push((t, convex_hull(curve.points())?));
        }
        return Ok(out);
    }
    let curve = sample_region_boundary(region, REFERENCE_SAMPLES)?;
    let params = StepParams::new(REFERENCE_C_STEP, REFERENCE_LAMBDA)?;
    let checkpoints = run_with_area_checkpoints(curve, &order, &params)?;
    checkpoints
        .into_iter()
        .map(|(t, front)| Ok((t, convex_hull(front.points())?)))
        .collect()
}

/// Scales a lattice hull chain back into region coordinates.
fn scaled_chain(set: &RowIntervalSet, n: u32) -> Result<ConvexChain<FloatPoint>> {
    let pts: Vec<FloatPoint> = set
        .hull_chain()?
        .vertices()
        .iter()
        .map(|p| FloatPoint::new(p.x as f64 / n as f64, p.y as f64 / n as f64))
        .collect();
    convex_hull(&pts)
}

/// Dense polygonization of the exact region boundary.
fn boundary_chain(region: &Region) -> Result<ConvexChain<FloatPoint>> {
    let curve = sample_region_boundary(region, REFERENCE_SAMPLES)?;
    convex_hull(curve.points())
}

/// Runs both processes on one region at one grid density and compares them
/// at each stopping fraction.
pub fn compare_experiment(
    region: &Region,
    region_id: &str,
    n: u32,
    fractions: &[f64],
) -> Result<Vec<ComparisonRecord>> {
    let flow = acsf_reference_checkpoints(region, fractions)?;
    compare_with_flow(region, region_id, n, fractions, &flow)
}

fn compare_with_flow(
    region: &Region,
    region_id: &str,
    n: u32,
    fractions: &[f64],
    flow: &[(f64, ConvexChain<FloatPoint>)],
) -> Result<Vec<ComparisonRecord>> {
    let mut order: Vec<f64> = fractions.to_vec();
    order.sort_by(|a, b| b.total_cmp(a));
    if order.iter().any(|f| !(*f > 0.0 && *f < 1.0)) {
        return Err(Error::InvalidParameter(
            "stopping fractions must lie in (0, 1)".into(),
        ));
    }

    let initial = rasterize(region, n)?;
    if initial.is_empty() {
        return Err(Error::EmptySet);
    }
    let exact = boundary_chain(region)?;
    let initial_hausdorff = hausdorff_distance(&scaled_chain(&initial, n)?, &exact);

    let initial_count = initial.point_count();
    let mut set = initial;
    let mut m_layers = 0u32;
    let mut records = Vec::with_capacity(order.len());
    for (fraction, (t_flow, flow_chain)) in order.iter().zip(flow) {
        let target = fraction * initial_count as f64;
        while set.point_count() as f64 > target && !set.is_empty() {
            let (next, _) = set.peel_step()?;
            set = next;
            m_layers += 1;
        }
        let peel_chain = scaled_chain(&set, n)?;
        let hausdorff = hausdorff_distance(&peel_chain, flow_chain);
        records.push(ComparisonRecord {
            region: region_id.to_string(),
            n,
            fraction: *fraction,
            m_layers,
            t_flow: *t_flow,
            hausdorff,
            initial_hausdorff,
            c_est: estimate_c(m_layers, *t_flow, n)?,
        });
    }
    Ok(records)
}

/// Worker-thread cap: `ONIONFLOW_THREADS` if set, else the machine's
/// available parallelism.
pub fn thread_cap() -> usize {
    std::env::var("ONIONFLOW_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|p| p.get())
                .unwrap_or(1)
        })
}

/// Comparison over several grid densities. The flow side runs once and is
/// shared; peeling cells run on worker threads (capped by
/// `ONIONFLOW_THREADS`) and results are merged in deterministic order.
pub fn compare_matrix(
    region: &Region,
    region_id: &str,
    n_values: &[u32],
    fractions: &[f64],
) -> Result<Vec<ComparisonRecord>> {
    let flow = acsf_reference_checkpoints(region, fractions)?;
    let mut ns: Vec<u32> = n_values.to_vec();
    ns.sort_unstable();
    ns.dedup();

    let workers = thread_cap().min(ns.len().max(1));
    let next_job = AtomicUsize::new(0);
    let results: Vec<Mutex<Option<Result<Vec<ComparisonRecord>>>>> =
        ns.iter().map(|_| Mutex::new(None)).collect();

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let job = next_job.fetch_add(1, Ordering::Relaxed);
                if job >= ns.len() {
                    break;
                }
                let outcome = compare_with_flow(region, region_id, ns[job], fractions, &flow);
                *results[job].lock().unwrap() = Some(outcome);
            });
        }
    });

    let mut merged = Vec::new();
    for cell in results {
        let outcome = cell.into_inner().unwrap().expect("worker finished");
        merged.extend(outcome?);
    }
    Ok(merged)
}

/// One row of the quadrant hyperbola-fit report.
#[derive(Clone, Copy, Debug)]
pub struct QuadrantReportRow {
    pub n: u64,
    pub alpha: f64,
    pub k_n: f64,
    pub x_alpha: i64,
    /// `x_alpha / K_n`.
    pub ratio: f64,
    pub c_est: f64,
}

/// Runs quadrant peeling through increasing `n` checkpoints, reporting the
/// hyperbola-fit extent for each configured tolerance and the c estimate
/// from the diagonal point.
pub fn quadrant_experiment(n_values: &[u64], alphas: &[f64]) -> Result<Vec<QuadrantReportRow>> {
    let mut ns: Vec<u64> = n_values.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let mut sorted_alphas: Vec<f64> = alphas.to_vec();
    sorted_alphas.sort_by(f64::total_cmp);
    sorted_alphas.dedup();

    let mut profile = QuadrantProfile::new();
    let mut rows = Vec::with_capacity(ns.len() * sorted_alphas.len());
    for &n in &ns {
        if n == 0 {
            return Err(Error::InvalidParameter("quadrant n must be >= 1".into()));
        }
        if n > crate::quadrant::MAX_QUADRANT_ITERATIONS {
            return Err(Error::InvalidParameter(format!(
                "quadrant n {n} exceeds the iteration cap"
            )));
        }
        profile.advance_to(n);
        let k_n = profile.k_n();
        let c_est = estimate_c_quadrant(k_n, n);
        for &alpha in &sorted_alphas {
            let extent = profile.hyperbola_fit_extent(alpha)?;
            rows.push(QuadrantReportRow {
                n,
                alpha,
                k_n,
                x_alpha: extent.x_alpha,
                ratio: extent.ratio,
                c_est,
            });
        }
    }
    Ok(rows)
}
