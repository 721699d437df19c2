//! Convex-layer decomposition of convex-region grid subsets.
//!
//! The point set is stored as one `[x_min, x_max]` interval per row. The
//! representation is closed under peeling: every hull vertex is the leftmost
//! or rightmost point of its row, so removing the vertex set only shifts
//! interval endpoints. Collinear boundary points are not vertices and stay.

use crate::geometry::{orient_grid, ConvexChain, GridPoint, Orientation, UnimodularMap};
use crate::region::Region;
use crate::{Error, Result};

/// Absolute slack, in scaled lattice units, used when snapping real boundary
/// coordinates to integer interval endpoints. Keeps lattice points that lie
/// exactly on the region boundary inside despite floating-point rounding.
const RASTER_EPS: f64 = 1e-6;

/// A finite grid subset with contiguous rows.
///
/// Row `i` covers lattice points `(x, y_base + i)` with
/// `x_min <= x <= x_max`; `None` marks a row emptied by peeling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowIntervalSet {
    y_base: i64,
    rows: Vec<Option<(i64, i64)>>,
    point_count: u64,
}

/// One peeling iteration: the removed vertex set and what remains.
#[derive(Clone, Debug)]
pub struct LayerRecord {
    /// 1-based iteration number.
    pub index: u32,
    /// The removed vertices, in CCW order.
    pub vertices: ConvexChain<GridPoint>,
    pub vertex_count: usize,
    /// Points left after this iteration.
    pub remaining_points: u64,
}

impl RowIntervalSet {
    pub fn empty() -> Self {
        RowIntervalSet {
            y_base: 0,
            rows: Vec::new(),
            point_count: 0,
        }
    }

    pub fn from_rows(y_base: i64, rows: Vec<Option<(i64, i64)>>) -> Result<Self> {
        let mut count = 0u64;
        for (i, row) in rows.iter().enumerate() {
            if let Some((lo, hi)) = row {
                if lo > hi {
                    return Err(Error::NotRowInterval {
                        y: y_base + i as i64,
                    });
                }
                count += (hi - lo + 1) as u64;
            }
        }
        let mut set = RowIntervalSet {
            y_base,
            rows,
            point_count: count,
        };
        set.trim();
        Ok(set)
    }

    /// Builds the set from an explicit point list, verifying that every row
    /// is a contiguous interval.
    pub fn from_points(points: &[GridPoint]) -> Result<Self> {
        if points.is_empty() {
            return Ok(Self::empty());
        }
        let mut pts = points.to_vec();
        pts.sort_by_key(|p| (p.y, p.x));
        pts.dedup();
        let y_base = pts[0].y;
        let y_max = pts[pts.len() - 1].y;
        let mut rows: Vec<Option<(i64, i64)>> = vec![None; (y_max - y_base + 1) as usize];
        let mut i = 0;
        while i < pts.len() {
            let y = pts[i].y;
            let mut j = i;
            while j < pts.len() && pts[j].y == y {
                j += 1;
            }
            let lo = pts[i].x;
            let hi = pts[j - 1].x;
            if (hi - lo + 1) as usize != j - i {
                return Err(Error::NotRowInterval { y });
            }
            rows[(y - y_base) as usize] = Some((lo, hi));
            i = j;
        }
        Self::from_rows(y_base, rows)
    }

    pub fn point_count(&self) -> u64 {
        self.point_count
    }

    pub fn is_empty(&self) -> bool {
        self.point_count == 0
    }

    pub fn y_base(&self) -> i64 {
        self.y_base
    }

    pub fn rows(&self) -> &[Option<(i64, i64)>] {
        &self.rows
    }

    /// Every point of the set. Intended for tests and small exports.
    pub fn points(&self) -> Vec<GridPoint> {
        let mut out = Vec::with_capacity(self.point_count as usize);
        for (i, row) in self.rows.iter().enumerate() {
            if let Some((lo, hi)) = row {
                let y = self.y_base + i as i64;
                for x in *lo..=*hi {
                    out.push(GridPoint::new(x, y));
                }
            }
        }
        out
    }

    /// Leftmost and rightmost point of each nonempty row (deduplicated).
    pub fn extreme_points(&self) -> Vec<GridPoint> {
        let mut out = Vec::with_capacity(2 * self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            if let Some((lo, hi)) = row {
                let y = self.y_base + i as i64;
                out.push(GridPoint::new(*lo, y));
                if hi != lo {
                    out.push(GridPoint::new(*hi, y));
                }
            }
        }
        out
    }

    fn trim(&mut self) {
        let first = self.rows.iter().position(|r| r.is_some());
        match first {
            None => {
                self.rows.clear();
                self.y_base = 0;
            }
            Some(first) => {
                let last = self.rows.iter().rposition(|r| r.is_some()).unwrap();
                self.rows.truncate(last + 1);
                self.rows.drain(..first);
                self.y_base += first as i64;
            }
        }
    }

    /// Strict hull vertices in CCW order, in O(rows) time.
    ///
    /// The right boundary chain is built over the row maxima from bottom to
    /// top and the left chain over the row minima from top to bottom; both
    /// are filtered to strict turns with a monotone stack. The junctions at
    /// the top and bottom rows are strict by construction, so concatenating
    /// the chains (deduplicating the seams) yields the strict hull cycle.
    fn hull_vertices(&self) -> Result<Vec<GridPoint>> {
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut right: Vec<GridPoint> = Vec::new();
        let mut left: Vec<GridPoint> = Vec::new();
        let push_strict = |chain: &mut Vec<GridPoint>, p: GridPoint| {
            while chain.len() >= 2
                && orient_grid(chain[chain.len() - 2], chain[chain.len() - 1], p)
                    != Orientation::Ccw
            {
                chain.pop();
            }
            chain.push(p);
        };
        for (i, row) in self.rows.iter().enumerate() {
            if let Some((_, hi)) = row {
                push_strict(&mut right, GridPoint::new(*hi, self.y_base + i as i64));
            }
        }
        for (i, row) in self.rows.iter().enumerate().rev() {
            if let Some((lo, _)) = row {
                push_strict(&mut left, GridPoint::new(*lo, self.y_base + i as i64));
            }
        }
        // seams: single-point top/bottom rows appear in both chains; only
        // those duplicates can collide with the cycle's first/last entry
        let mut cycle = right;
        for &p in &left {
            if cycle.first() == Some(&p) || cycle.last() == Some(&p) {
                continue;
            }
            cycle.push(p);
        }
        Ok(cycle)
    }

    /// Boundary of the current convex hull.
    pub fn hull_chain(&self) -> Result<ConvexChain<GridPoint>> {
        Ok(ConvexChain::from_convex_vertices(self.hull_vertices()?))
    }

    fn peel_in_place(&mut self, index: u32) -> Result<LayerRecord> {
        let verts = self.hull_vertices()?;
        let mut removed = 0u64;
        for v in &verts {
            let row = self.rows[(v.y - self.y_base) as usize]
                .as_mut()
                .expect("hull vertex in an empty row");
            let (lo, hi) = *row;
            debug_assert!(v.x == lo || v.x == hi, "hull vertex is not a row extreme");
            if lo == hi {
                self.rows[(v.y - self.y_base) as usize] = None;
                removed += 1;
            } else {
                let new_lo = if v.x == lo { lo + 1 } else { lo };
                let new_hi = if v.x == hi { hi - 1 } else { hi };
                if new_lo > new_hi {
                    self.rows[(v.y - self.y_base) as usize] = None;
                } else {
                    *row = (new_lo, new_hi);
                }
                removed += 1;
            }
        }
        debug_assert_eq!(removed as usize, verts.len());
        self.point_count -= removed;
        self.trim();
        Ok(LayerRecord {
            index,
            vertex_count: verts.len(),
            vertices: ConvexChain::from_convex_vertices(verts),
            remaining_points: self.point_count,
        })
    }

    /// Removes the current hull's vertex set, returning the remainder and
    /// a record of the removed layer.
    pub fn peel_step(&self) -> Result<(RowIntervalSet, LayerRecord)> {
        let mut next = self.clone();
        let record = next.peel_in_place(1)?;
        Ok((next, record))
    }

    /// Peels until the population first drops to `fraction` of the initial
    /// count; returns the remainder and the number of iterations taken.
    pub fn peel_until_fraction(&self, fraction: f64) -> Result<(RowIntervalSet, u32)> {
        if !(fraction > 0.0 && fraction < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "fraction must lie in (0, 1), got {fraction}"
            )));
        }
        let target = fraction * self.point_count as f64;
        let mut set = self.clone();
        let mut iterations = 0u32;
        while set.point_count as f64 > target && !set.is_empty() {
            iterations += 1;
            set.peel_in_place(iterations)?;
        }
        Ok((set, iterations))
    }

    /// Total number of peeling iterations until the set is empty.
    pub fn layer_count(&self) -> Result<u32> {
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut set = self.clone();
        let mut n = 0u32;
        while !set.is_empty() {
            n += 1;
            set.peel_in_place(n)?;
        }
        Ok(n)
    }

    /// Full decomposition: one record per layer until empty.
    pub fn peel_all(&self) -> Result<Vec<LayerRecord>> {
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut set = self.clone();
        let mut records = Vec::new();
        while !set.is_empty() {
            let index = records.len() as u32 + 1;
            records.push(set.peel_in_place(index)?);
        }
        Ok(records)
    }

    /// Image of the set under a grid-preserving map. The image of a convex
    /// grid set is again a convex grid set, so row intervals remain valid.
    pub fn apply_map(&self, map: &UnimodularMap) -> Result<RowIntervalSet> {
        let mapped: Vec<GridPoint> = self.points().iter().map(|&p| map.apply(p)).collect();
        Self::from_points(&mapped)
    }
}

/// The `m x m` grid `{0..m-1}^2`.
pub fn square_grid(m: u32) -> Result<RowIntervalSet> {
    rect_grid(m, m)
}

/// The `w x h` grid `{0..w-1} x {0..h-1}`.
pub fn rect_grid(w: u32, h: u32) -> Result<RowIntervalSet> {
    if w == 0 || h == 0 {
        return Err(Error::InvalidParameter(
            "grid sides must be positive".into(),
        ));
    }
    RowIntervalSet::from_rows(0, vec![Some((0, w as i64 - 1)); h as usize])
}

/// Lattice points `p` with `p / n` inside the closed region, in scaled
/// integer coordinates.
///
/// Disks and half-disks are rasterized from the exact circle equation; all
/// other kinds go through a convex polygon (curved boundaries are replaced
/// by the hull of a dense sample, whose area defect is far below the grid
/// resolution at any practical `n`).
pub fn rasterize(region: &Region, n: u32) -> Result<RowIntervalSet> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "grid density n must be >= 1".into(),
        ));
    }
    let s = n as f64;
    match region {
        Region::Disk { center, diameter } => {
            raster_circle(center.x * s, center.y * s, diameter * s / 2.0, None)
        }
        Region::HalfDisk { center, diameter } => raster_circle(
            center.x * s,
            center.y * s,
            diameter * s / 2.0,
            Some(center.y * s),
        ),
        _ => {
            let poly: Vec<(f64, f64)> = region
                .boundary_polygon()
                .iter()
                .map(|p| (p.x * s, p.y * s))
                .collect();
            raster_polygon(&poly)
        }
    }
}

fn raster_circle(cx: f64, cy: f64, r: f64, y_floor: Option<f64>) -> Result<RowIntervalSet> {
    let y_lo_real = y_floor.map_or(cy - r, |f| f.max(cy - r));
    let y_lo = (y_lo_real - RASTER_EPS).ceil() as i64;
    let y_hi = (cy + r + RASTER_EPS).floor() as i64;
    if y_lo > y_hi {
        return Ok(RowIntervalSet::empty());
    }
    let mut rows = Vec::with_capacity((y_hi - y_lo + 1) as usize);
    for y in y_lo..=y_hi {
        let dy = y as f64 - cy;
        let s2 = r * r - dy * dy;
        if s2 < -RASTER_EPS {
            rows.push(None);
            continue;
        }
        let half = s2.max(0.0).sqrt();
        let lo = (cx - half - RASTER_EPS).ceil() as i64;
        let hi = (cx + half + RASTER_EPS).floor() as i64;
        rows.push(if lo <= hi { Some((lo, hi)) } else { None });
    }
    RowIntervalSet::from_rows(y_lo, rows)
}

fn raster_polygon(poly: &[(f64, f64)]) -> Result<RowIntervalSet> {
    debug_assert!(poly.len() >= 3);
    let y_min = poly.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let y_max = poly.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let y_lo = (y_min - RASTER_EPS).ceil() as i64;
    let y_hi = (y_max + RASTER_EPS).floor() as i64;
    if y_lo > y_hi {
        return Ok(RowIntervalSet::empty());
    }
    let mut rows = Vec::with_capacity((y_hi - y_lo + 1) as usize);
    for y in y_lo..=y_hi {
        let yf = y as f64;
        let mut x_lo = f64::INFINITY;
        let mut x_hi = f64::NEG_INFINITY;
        for i in 0..poly.len() {
            let (px, py) = poly[i];
            let (qx, qy) = poly[(i + 1) % poly.len()];
            if (py - qy).abs() <= RASTER_EPS {
                // horizontal edge on this row contributes both endpoints
                if (py - yf).abs() <= RASTER_EPS {
                    x_lo = x_lo.min(px.min(qx));
                    x_hi = x_hi.max(px.max(qx));
                }
                continue;
            }
            let t = (yf - py) / (qy - py);
            if !(-1e-9..=1.0 + 1e-9).contains(&t) {
                continue;
            }
            let x = px + t.clamp(0.0, 1.0) * (qx - px);
            x_lo = x_lo.min(x);
            x_hi = x_hi.max(x);
        }
        if x_lo > x_hi {
            rows.push(None);
            continue;
        }
        let lo = (x_lo - RASTER_EPS).ceil() as i64;
        let hi = (x_hi + RASTER_EPS).floor() as i64;
        rows.push(if lo <= hi { Some((lo, hi)) } else { None });
    }
    RowIntervalSet::from_rows(y_lo, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::convex_hull;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sorted(points: &[GridPoint]) -> Vec<GridPoint> {
        let mut v = points.to_vec();
        v.sort();
        v
    }

    #[test]
    fn rasterize_unit_square_n2() {
        let set = rasterize(&Region::builtin("r2").unwrap(), 2).unwrap();
        assert_eq!(set.point_count(), 9);
        assert_eq!(set.rows(), &[Some((0, 2)), Some((0, 2)), Some((0, 2))]);
    }

    #[test]
    fn rasterize_disk_n2_keeps_boundary_points() {
        let set = rasterize(&Region::builtin("r5").unwrap(), 2).unwrap();
        assert_eq!(
            sorted(&set.points()),
            sorted(&[
                GridPoint::new(1, 0),
                GridPoint::new(0, 1),
                GridPoint::new(1, 1),
                GridPoint::new(2, 1),
                GridPoint::new(1, 2),
            ])
        );
    }

    #[test]
    fn rasterize_triangle_count_tracks_area() {
        let r3 = Region::builtin("r3").unwrap();
        let n = 1000u32;
        let set = rasterize(&r3, n).unwrap();
        let expected = r3.area() * (n as f64) * (n as f64);
        let got = set.point_count() as f64;
        assert!(
            (got - expected).abs() / expected < 0.005,
            "count {got} vs area estimate {expected}"
        );
    }

    #[test]
    fn rasterize_half_disk_flat_side() {
        let set = rasterize(&Region::builtin("r4").unwrap(), 10).unwrap();
        // bottom row is the full diameter
        assert_eq!(set.y_base(), 0);
        assert_eq!(set.rows()[0], Some((0, 10)));
        // nothing below the flat side
        assert!(set.points().iter().all(|p| p.y >= 0));
    }

    #[test]
    fn peel_3x3_removes_corners_then_tips() {
        let set = square_grid(3).unwrap();
        let (rest, layer) = set.peel_step().unwrap();
        assert_eq!(layer.vertex_count, 4);
        assert_eq!(rest.point_count(), 5);
        assert_eq!(
            sorted(layer.vertices.vertices()),
            sorted(&[
                GridPoint::new(0, 0),
                GridPoint::new(2, 0),
                GridPoint::new(2, 2),
                GridPoint::new(0, 2),
            ])
        );
        // plus-shape: the four diamond tips go next, the center stays
        let (rest2, layer2) = rest.peel_step().unwrap();
        assert_eq!(layer2.vertex_count, 4);
        assert_eq!(rest2.points(), vec![GridPoint::new(1, 1)]);
        let (rest3, layer3) = rest2.peel_step().unwrap();
        assert_eq!(layer3.vertex_count, 1);
        assert!(rest3.is_empty());
        assert!(rest3.peel_step().is_err());
    }

    #[test]
    fn layer_counts_of_small_grids() {
        assert_eq!(square_grid(1).unwrap().layer_count().unwrap(), 1);
        assert_eq!(square_grid(2).unwrap().layer_count().unwrap(), 1);
        assert_eq!(square_grid(3).unwrap().layer_count().unwrap(), 3);
    }

    #[test]
    fn peel_until_fraction_hand_cases() {
        let set = square_grid(3).unwrap();
        let (_, m) = set.peel_until_fraction(0.999).unwrap();
        assert_eq!(m, 1);
        // 9 -> 5 (> 4.5) -> 1 (<= 4.5): stops after two iterations
        let (rest, m) = set.peel_until_fraction(0.5).unwrap();
        assert_eq!(m, 2);
        assert_eq!(rest.point_count(), 1);
    }

    #[test]
    fn hull_chain_of_simple_sets() {
        let set = square_grid(4).unwrap();
        let chain = set.hull_chain().unwrap();
        assert_eq!(chain.len(), 4);

        let row = RowIntervalSet::from_rows(5, vec![Some((2, 9))]).unwrap();
        let chain = row.hull_chain().unwrap();
        assert_eq!(
            sorted(chain.vertices()),
            sorted(&[GridPoint::new(2, 5), GridPoint::new(9, 5)])
        );

        let single = RowIntervalSet::from_rows(0, vec![Some((3, 3))]).unwrap();
        assert_eq!(single.hull_chain().unwrap().len(), 1);
    }

    #[test]
    fn hull_chain_matches_generic_hull_on_rasterized_disks() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let d = rng.gen_range(0.3..1.0);
            let cx = rng.gen_range(0.2..0.8);
            let cy = rng.gen_range(0.2..0.8);
            let disk = Region::Disk {
                center: crate::geometry::FloatPoint::new(cx, cy),
                diameter: d,
            };
            let set = rasterize(&disk, rng.gen_range(20..80)).unwrap();
            if set.is_empty() {
                continue;
            }
            let fast = set.hull_chain().unwrap();
            let slow = convex_hull(&set.points()).unwrap();
            assert_eq!(sorted(fast.vertices()), sorted(slow.vertices()));
        }
    }

    #[test]
    fn hull_chain_matches_generic_hull_under_peeling() {
        // exercise middle-row emptying and degenerate leftovers
        let mut set = RowIntervalSet::from_points(&[
            GridPoint::new(0, 0),
            GridPoint::new(1, 0),
            GridPoint::new(2, 0),
            GridPoint::new(3, 1),
            GridPoint::new(0, 2),
            GridPoint::new(1, 2),
            GridPoint::new(2, 2),
        ])
        .unwrap();
        while !set.is_empty() {
            let fast = set.hull_chain().unwrap();
            let slow = convex_hull(&set.points()).unwrap();
            assert_eq!(sorted(fast.vertices()), sorted(slow.vertices()));
            set = set.peel_step().unwrap().0;
        }
    }

    #[test]
    fn removed_vertices_are_row_extremes_and_counts_decrease() {
        let set = rasterize(&Region::builtin("r5").unwrap(), 40).unwrap();
        let mut current = set;
        let mut prev_count = current.point_count();
        while !current.is_empty() {
            let extremes = sorted(&current.extreme_points());
            let (next, layer) = current.peel_step().unwrap();
            for v in layer.vertices.vertices() {
                assert!(extremes.binary_search(v).is_ok(), "{v:?} not a row extreme");
            }
            assert!(next.point_count() < prev_count);
            assert_eq!(next.point_count(), prev_count - layer.vertex_count as u64);
            prev_count = next.point_count();
            current = next;
        }
    }

    #[test]
    fn from_points_rejects_gaps() {
        let err = RowIntervalSet::from_points(&[GridPoint::new(0, 0), GridPoint::new(2, 0)]);
        assert!(matches!(err, Err(Error::NotRowInterval { y: 0 })));
    }

    #[test]
    fn unimodular_commutation_small() {
        let set = rasterize(&Region::builtin("r5").unwrap(), 15).unwrap();
        let map = UnimodularMap::new(2, 1, 1, 1).unwrap();
        let mapped = set.apply_map(&map).unwrap();
        let layers_a = set.peel_all().unwrap();
        let layers_b = mapped.peel_all().unwrap();
        assert_eq!(layers_a.len(), layers_b.len());
        for (la, lb) in layers_a.iter().zip(&layers_b) {
            let image: Vec<GridPoint> = la
                .vertices
                .vertices()
                .iter()
                .map(|&p| map.apply(p))
                .collect();
            assert_eq!(sorted(&image), sorted(lb.vertices.vertices()));
        }
    }

    #[test]
    fn square_scaling_band_small() {
        // quick sanity check at small sizes; the acceptance suite covers the
        // larger band
        let c32 = square_grid(32).unwrap().layer_count().unwrap() as f64 / 32f64.powf(4.0 / 3.0);
        let c64 = square_grid(64).unwrap().layer_count().unwrap() as f64 / 64f64.powf(4.0 / 3.0);
        assert!((c32 / c64 - 1.0).abs() < 0.25, "c32={c32} c64={c64}");
    }

    #[test]
    fn r2_peel_fraction_regression() {
        // recorded baseline used downstream for c estimation
        let set = rasterize(&Region::builtin("r2").unwrap(), 1000).unwrap();
        let (rest, m5) = set.peel_until_fraction(0.75).unwrap();
        assert_eq!(m5, 1277);
        assert!(rest.point_count() as f64 <= 0.75 * set.point_count() as f64);
    }

    #[test]
    fn rectangle_scaling_band() {
        // layer_count(w x h) / (w h)^{2/3} stable within +-20% across scales
        let ratios: Vec<f64> = [(64u32, 256u32), (128, 512), (256, 1024)]
            .iter()
            .map(|&(w, h)| {
                let layers = rect_grid(w, h).unwrap().layer_count().unwrap();
                layers as f64 / ((w as f64).powf(2.0 / 3.0) * (h as f64).powf(2.0 / 3.0))
            })
            .collect();
        for r in &ratios {
            for s in &ratios {
                assert!((r / s - 1.0).abs() < 0.2, "ratios diverge: {ratios:?}");
            }
        }
    }
}
