//! Moebius function, primitive-vector (coprime-pair) counting, and the
//! lattice convex-position ratio statistic.

use std::sync::OnceLock;

use crate::geometry::{ConvexChain, GridPoint};
use crate::{Error, Result};

const SIEVE_LIMIT: usize = 1_000_000;

/// Smallest-prime-factor sieve, built once and shared read-only.
fn spf_sieve() -> &'static [u32] {
    static SIEVE: OnceLock<Vec<u32>> = OnceLock::new();
    SIEVE.get_or_init(|| {
        let mut spf = vec![0u32; SIEVE_LIMIT + 1];
        for i in 2..=SIEVE_LIMIT {
            if spf[i] == 0 {
                for j in (i..=SIEVE_LIMIT).step_by(i) {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                }
            }
        }
        spf
    })
}

/// Moebius function: -1 for square-free with an odd number of prime factors,
/// +1 for square-free with an even number, 0 otherwise.
pub fn mobius(k: u64) -> Result<i32> {
    if k == 0 {
        return Err(Error::InvalidParameter("mobius of 0".into()));
    }
    let mut rest = k;
    let mut factors = 0u32;
    let sieve = spf_sieve();
    while rest > 1 {
        let p = if rest <= SIEVE_LIMIT as u64 {
            sieve[rest as usize] as u64
        } else {
            // trial division fallback for values past the sieve
            let mut d = 2u64;
            let mut found = rest;
            while d * d <= rest {
                if rest.is_multiple_of(d) {
                    found = d;
                    break;
                }
                d += 1;
            }
            found
        };
        rest /= p;
        if rest.is_multiple_of(p) {
            return Ok(0);
        }
        factors += 1;
    }
    Ok(if factors.is_multiple_of(2) { 1 } else { -1 })
}

/// Axis-parallel lattice box `{a+1..a+m} x {b+1..b+n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeRect {
    pub a: i64,
    pub b: i64,
    pub m: i64,
    pub n: i64,
}

impl LatticeRect {
    pub fn new(a: i64, b: i64, m: i64, n: i64) -> Result<Self> {
        if m < 1 || n < 1 || a < 0 || b < 0 {
            return Err(Error::InvalidParameter(format!(
                "lattice rect needs a, b >= 0 and m, n >= 1; got a={a} b={b} m={m} n={n}"
            )));
        }
        Ok(LatticeRect { a, b, m, n })
    }
}

fn check_product(m: i64, n: i64) -> Result<()> {
    if (m as i128) * (n as i128) > (1i128 << 62) {
        return Err(Error::Overflow("primitive count of a box past 2^62 cells"));
    }
    Ok(())
}

/// `rho` extended to zero-size boxes, used by the inclusion-exclusion below.
fn rho(m: i64, n: i64) -> Result<i64> {
    if m <= 0 || n <= 0 {
        return Ok(0);
    }
    check_product(m, n)?;
    let mut sum: i128 = 0;
    for d in 1..=m.min(n) {
        let mu = mobius(d as u64)?;
        if mu != 0 {
            sum += mu as i128 * ((m / d) as i128) * ((n / d) as i128);
        }
    }
    Ok(sum as i64)
}

/// Number of coprime pairs (primitive vectors) in `{1..m} x {1..n}`,
/// computed exactly by the Moebius sum over common divisors.
pub fn primitive_count_anchored(m: i64, n: i64) -> Result<i64> {
    if m < 1 || n < 1 {
        return Err(Error::InvalidParameter(
            "anchored primitive count needs m, n >= 1".into(),
        ));
    }
    rho(m, n)
}

/// Exact primitive-vector count in a translated box, by inclusion-exclusion
/// of four anchored counts.
pub fn primitive_count_rect(rect: LatticeRect) -> Result<i64> {
    let LatticeRect { a, b, m, n } = rect;
    Ok(rho(a + m, b + n)? - rho(a + m, b)? - rho(a, b + n)? + rho(a, b)?)
}

/// `|vertices| / (w*h)^{1/3}` for the chain's bounding box, with each side
/// floored at 1 so degenerate chains stay finite.
pub fn jarnik_ratio(chain: &ConvexChain<GridPoint>) -> f64 {
    let verts = chain.vertices();
    let (mut xmin, mut xmax) = (i64::MAX, i64::MIN);
    let (mut ymin, mut ymax) = (i64::MAX, i64::MIN);
    for v in verts {
        xmin = xmin.min(v.x);
        xmax = xmax.max(v.x);
        ymin = ymin.min(v.y);
        ymax = ymax.max(v.y);
    }
    let w = (xmax - xmin).max(1);
    let h = (ymax - ymin).max(1);
    verts.len() as f64 / ((w * h) as f64).cbrt()
}
