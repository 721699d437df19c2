//! Convex test regions: built-ins r1..r5, user polygons, and a plain-text
//! `key = value` config format for loading custom regions.

use std::collections::BTreeMap;

use crate::geometry::{convex_hull, shoelace_area, FloatPoint};
use crate::{Error, Result};

/// Parameter-space sample count used when a curved boundary is replaced by
/// its polygonal hull for rasterization.
pub const CURVE_SAMPLES: usize = 16_384;

/// A bounded convex region of the plane.
#[derive(Clone, Debug, PartialEq)]
pub enum Region {
    /// Hull of a named built-in parametric curve.
    ParametricCurve {
        curve: NamedCurve,
    },
    /// Convex polygon, vertices in CCW order.
    Polygon {
        vertices: Vec<FloatPoint>,
    },
    /// Axis-aligned square `[0, side]^2`.
    Square {
        side: f64,
    },
    Triangle {
        a: FloatPoint,
        b: FloatPoint,
        c: FloatPoint,
    },
    /// Upper half of a disk; `center` is the midpoint of the flat side.
    HalfDisk {
        center: FloatPoint,
        diameter: f64,
    },
    Disk {
        center: FloatPoint,
        diameter: f64,
    },
}

/// Built-in parametric boundary curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedCurve {
    /// The rounded asymmetric blob bounding region r1:
    /// `x(a) = ((1 - sin a)/2)^2`, `y(a) = ((1 - sin(a+2))/2)^1.3`.
    R1,
}

impl NamedCurve {
    pub fn point(self, a: f64) -> FloatPoint {
        match self {
            NamedCurve::R1 => FloatPoint::new(
                ((1.0 - a.sin()) / 2.0).powi(2),
                ((1.0 - (a + 2.0).sin()) / 2.0).powf(1.3),
            ),
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "r1" => Ok(NamedCurve::R1),
            other => Err(Error::Config(format!("unknown builtin curve '{other}'"))),
        }
    }
}

impl Region {
    /// The five standard test regions, by name.
    pub fn builtin(name: &str) -> Result<Region> {
        match name {
            "r1" => Ok(Region::ParametricCurve {
                curve: NamedCurve::R1,
            }),
            "r2" | "square" => Ok(Region::Square { side: 1.0 }),
            "r3" | "triangle" => Ok(Region::Triangle {
                a: FloatPoint::new(0.0, 0.0),
                b: FloatPoint::new(1.0, 0.75),
                c: FloatPoint::new(0.4, 1.0),
            }),
            "r4" | "half-disk" => Ok(Region::HalfDisk {
                center: FloatPoint::new(0.5, 0.0),
                diameter: 1.0,
            }),
            "r5" | "disk" => Ok(Region::Disk {
                center: FloatPoint::new(0.5, 0.5),
                diameter: 1.0,
            }),
            other => Err(Error::UnknownRegion(other.to_string())),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Region::ParametricCurve { .. } => "parametric-curve",
            Region::Polygon { .. } => "polygon",
            Region::Square { .. } => "square",
            Region::Triangle { .. } => "triangle",
            Region::HalfDisk { .. } => "half-disk",
            Region::Disk { .. } => "disk",
        }
    }

    /// Convex polygon whose rasterization equals (polygon kinds) or closely
    /// approximates (curved kinds) this region. Disks are rasterized exactly
    /// elsewhere and never go through this path.
    pub fn boundary_polygon(&self) -> Vec<FloatPoint> {
        match self {
            Region::ParametricCurve { curve } => {
                let samples: Vec<FloatPoint> = (0..CURVE_SAMPLES)
                    .map(|i| {
                        curve.point(2.0 * std::f64::consts::PI * i as f64 / CURVE_SAMPLES as f64)
                    })
                    .collect();
                convex_hull(&samples)
                    .expect("curve samples are nonempty")
                    .vertices()
                    .to_vec()
            }
            Region::Polygon { vertices } => vertices.clone(),
            Region::Square { side } => vec![
                FloatPoint::new(0.0, 0.0),
                FloatPoint::new(*side, 0.0),
                FloatPoint::new(*side, *side),
                FloatPoint::new(0.0, *side),
            ],
            Region::Triangle { a, b, c } => vec![*a, *b, *c],
            Region::HalfDisk { center, diameter } => {
                let r = diameter / 2.0;
                let mut pts = Vec::with_capacity(CURVE_SAMPLES + 2);
                pts.push(FloatPoint::new(center.x - r, center.y));
                pts.push(FloatPoint::new(center.x + r, center.y));
                for i in 1..CURVE_SAMPLES {
                    let a = std::f64::consts::PI * i as f64 / CURVE_SAMPLES as f64;
                    pts.push(FloatPoint::new(
                        center.x + r * a.cos(),
                        center.y + r * a.sin(),
                    ));
                }
                convex_hull(&pts).expect("nonempty").vertices().to_vec()
            }
            Region::Disk { center, diameter } => {
                let r = diameter / 2.0;
                let pts: Vec<FloatPoint> = (0..CURVE_SAMPLES)
                    .map(|i| {
                        let a = 2.0 * std::f64::consts::PI * i as f64 / CURVE_SAMPLES as f64;
                        FloatPoint::new(center.x + r * a.cos(), center.y + r * a.sin())
                    })
                    .collect();
                convex_hull(&pts).expect("nonempty").vertices().to_vec()
            }
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Region::Square { side } => side * side,
            Region::Disk { diameter, .. } => std::f64::consts::PI * diameter * diameter / 4.0,
            Region::HalfDisk { diameter, .. } => std::f64::consts::PI * diameter * diameter / 8.0,
            _ => shoelace_area(&self.boundary_polygon()).abs(),
        }
    }
}

fn parse_f64(section: &str, key: &str, value: &str) -> Result<f64> {
    value.parse::<f64>().map_err(|_| {
        Error::Config(format!(
            "[{section}] {key}: expected a number, got '{value}'"
        ))
    })
}

fn build_region(section: &str, keys: &BTreeMap<String, String>) -> Result<Region> {
    let get = |key: &str| -> Result<&str> {
        keys.get(key)
            .map(|s| s.as_str())
            .ok_or_else(|| Error::Config(format!("[{section}] missing key '{key}'")))
    };
    let get_f64 = |key: &str| -> Result<f64> { parse_f64(section, key, get(key)?) };
    let kind = get("kind")?;
    let region = match kind {
        "parametric-curve" => Region::ParametricCurve {
            curve: NamedCurve::parse(get("curve")?)?,
        },
        "polygon" => {
            let raw = get("points")?;
            let mut vertices = Vec::new();
            for pair in raw.split(';') {
                let pair = pair.trim();
                if pair.is_empty() {
                    continue;
                }
                let (xs, ys) = pair.split_once(',').ok_or_else(|| {
                    Error::Config(format!("[{section}] points: expected 'x,y' pairs"))
                })?;
                vertices.push(FloatPoint::new(
                    parse_f64(section, "points", xs.trim())?,
                    parse_f64(section, "points", ys.trim())?,
                ));
            }
            if vertices.len() < 3 {
                return Err(Error::Config(format!(
                    "[{section}] polygon needs at least 3 vertices"
                )));
            }
            if shoelace_area(&vertices) < 0.0 {
                vertices.reverse();
            }
            // reject non-convex input up front
            let hull = convex_hull(&vertices)?;
            if hull.len() != vertices.len() {
                return Err(Error::Config(format!(
                    "[{section}] polygon is not strictly convex"
                )));
            }
            Region::Polygon { vertices }
        }
        "square" => Region::Square {
            side: keys
                .get("side")
                .map(|v| parse_f64(section, "side", v))
                .transpose()?
                .unwrap_or(1.0),
        },
        "triangle" => Region::Triangle {
            a: FloatPoint::new(get_f64("x1")?, get_f64("y1")?),
            b: FloatPoint::new(get_f64("x2")?, get_f64("y2")?),
            c: FloatPoint::new(get_f64("x3")?, get_f64("y3")?),
        },
        "half-disk" => Region::HalfDisk {
            center: FloatPoint::new(get_f64("cx")?, get_f64("cy")?),
            diameter: get_f64("diameter")?,
        },
        "disk" => Region::Disk {
            center: FloatPoint::new(get_f64("cx")?, get_f64("cy")?),
            diameter: get_f64("diameter")?,
        },
        other => return Err(Error::Config(format!("[{section}] unknown kind '{other}'"))),
    };
    Ok(region)
}

/// Parses a regions file: `[name]` sections with `key = value` lines,
/// `#` comments, blank lines ignored.
pub fn parse_regions(text: &str) -> Result<BTreeMap<String, Region>> {
    let mut sections: Vec<(String, BTreeMap<String, String>)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            sections.push((name.trim().to_string(), BTreeMap::new()));
        } else if let Some((key, value)) = line.split_once('=') {
            let Some((_, keys)) = sections.last_mut() else {
                return Err(Error::Config(format!(
                    "line {}: key outside a [region] section",
                    lineno + 1
                )));
            };
            keys.insert(key.trim().to_string(), value.trim().to_string());
        } else {
            return Err(Error::Config(format!(
                "line {}: expected '[name]' or 'key = value'",
                lineno + 1
            )));
        }
    }
    let mut regions = BTreeMap::new();
    for (name, keys) in sections {
        let region = build_region(&name, &keys)?;
        if regions.insert(name.clone(), region).is_some() {
            return Err(Error::Config(format!("duplicate region '{name}'")));
        }
    }
    Ok(regions)
}

/// Resolves `--region NAME`: a section from the regions file if one was
/// given, else a built-in.
pub fn resolve_region(
    name: &str,
    file_regions: Option<&BTreeMap<String, Region>>,
) -> Result<Region> {
    if let Some(map) = file_regions {
        if let Some(r) = map.get(name) {
            return Ok(r.clone());
        }
    }
    Region::builtin(name)
}
