//! Ulam spiral geometry.
//!
//! 1 sits at the origin, 2 at (1, 0), and the spiral turns counterclockwise
//! with `y` pointing up, so the 3x3 block reads
//!
//! ```text
//! 5 4 3
//! 6 1 2
//! 7 8 9
//! ```
//!
//! Along any straight ray that stays inside one side of the rings, the
//! values are a quadratic `4n^2 + bn + c`.

use std::fmt;
use std::str::FromStr;

use num_integer::Roots;
use rayon::prelude::*;
use serde::Serialize;

use crate::bhconstant::hlf_constant;
use crate::polynomial::{irreducibility, IntPoly, Irreducibility};
use crate::primes::{is_prime_u64, sieve_range};
use crate::{Error, Result};

/// Default pixel budget for [`render_spiral`] (one byte per cell).
pub const DEFAULT_PIXEL_BUDGET: u64 = 1 << 28;
/// Prime bound used for the constant attached to ray reports.
pub const REPORT_PRIME_BOUND: u64 = 1_000_000;
/// Extra skips tried by [`fit_ray`] before giving up.
pub const SKIP_RETRIES: u64 = 4;

pub const PRIME_PIXEL: u8 = 0;
pub const COMPOSITE_PIXEL: u8 = 255;
pub const OVERLAY_PIXEL: u8 = 128;

/// Lattice position of `n >= 1` on the spiral.
pub fn spiral_coords(n: u64) -> (i64, i64) {
    assert!(n >= 1, "spiral positions start at 1");
    let k = ((n - 1).sqrt() + 1) / 2;
    let side = 2 * k as i128 + 1;
    let d = (side * side - n as i128) as i64;
    let k = k as i64;
    if d < 2 * k {
        (k - d, -k)
    } else if d < 4 * k {
        (-k, -k + (d - 2 * k))
    } else if d < 6 * k {
        (-k + (d - 4 * k), k)
    } else {
        (k, k - (d - 6 * k))
    }
}

/// Value at lattice point `(x, y)`; inverse of [`spiral_coords`].
pub fn spiral_value(x: i64, y: i64) -> u64 {
    let (x, y) = (x as i128, y as i128);
    let k = x.abs().max(y.abs());
    let m = (2 * k + 1) * (2 * k + 1);
    let d = if y == -k {
        k - x
    } else if x == -k {
        2 * k + (y + k)
    } else if y == k {
        4 * k + (x + k)
    } else {
        6 * k + (k - y)
    };
    (m - d) as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    E,
    NE,
    N,
    NW,
    W,
    SW,
    S,
    SE,
}

impl Direction {
    pub const ALL: [Direction; 8] = [
        Direction::E,
        Direction::NE,
        Direction::N,
        Direction::NW,
        Direction::W,
        Direction::SW,
        Direction::S,
        Direction::SE,
    ];

    pub fn step(self) -> (i64, i64) {
        match self {
            Direction::E => (1, 0),
            Direction::NE => (1, 1),
            Direction::N => (0, 1),
            Direction::NW => (-1, 1),
            Direction::W => (-1, 0),
            Direction::SW => (-1, -1),
            Direction::S => (0, -1),
            Direction::SE => (1, -1),
        }
    }

    pub fn is_diagonal(self) -> bool {
        let (dx, dy) = self.step();
        dx != 0 && dy != 0
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Direction::ALL
            .into_iter()
            .find(|d| d.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse {
                pos: 0,
                msg: format!("unknown direction {s:?}; expected one of E NE N NW W SW S SE"),
            })
    }
}

/// A ray `anchor + n * direction`, `n >= skip`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RaySpec {
    pub anchor: (i64, i64),
    pub direction: Direction,
    pub skip: u64,
}

impl RaySpec {
    pub fn new(anchor: (i64, i64), direction: Direction) -> Self {
        RaySpec {
            anchor,
            direction,
            skip: 0,
        }
    }

    /// Ray anchored at the cell holding `n`.
    pub fn from_value(n: u64, direction: Direction) -> Self {
        Self::new(spiral_coords(n), direction)
    }

    pub fn with_skip(self, skip: u64) -> Self {
        RaySpec { skip, ..self }
    }

    fn point(&self, n: u64) -> (i64, i64) {
        let (dx, dy) = self.direction.step();
        (self.anchor.0 + n as i64 * dx, self.anchor.1 + n as i64 * dy)
    }
}

/// Spiral values at `anchor + n * direction` for `n = skip .. skip + count`.
pub fn ray_values(spec: &RaySpec, count: usize) -> Vec<u64> {
    (spec.skip..spec.skip + count as u64)
        .map(|n| {
            let (x, y) = spec.point(n);
            spiral_value(x, y)
        })
        .collect()
}

/// Coefficients of `A n^2 + b n + c`, indexed so that `n = 1` is the first value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RayQuadratic {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl RayQuadratic {
    pub fn eval(&self, n: i64) -> i64 {
        (self.a * n + self.b) * n + self.c
    }

    pub fn polynomial(&self) -> IntPoly {
        IntPoly::from_i64s(&[self.c, self.b, self.a])
    }
}

/// Exact integer quadratic through the first three values, checked on the rest.
pub fn fit_ray_quadratic(values: &[u64]) -> Result<RayQuadratic> {
    if values.len() < 4 {
        return Err(Error::NotQuadratic(format!(
            "need at least 4 values to fit and check, got {}",
            values.len()
        )));
    }
    let v: Vec<i64> = values.iter().map(|&x| x as i64).collect();
    let second = v[2] - 2 * v[1] + v[0];
    if second % 2 != 0 {
        return Err(Error::NotQuadratic(format!(
            "odd second difference {second}"
        )));
    }
    let a = second / 2;
    let b = (v[1] - v[0]) - 3 * a;
    let c = v[0] - a - b;
    let q = RayQuadratic { a, b, c };
    match v
        .iter()
        .enumerate()
        .find(|&(i, &x)| q.eval(i as i64 + 1) != x)
    {
        None => Ok(q),
        Some((i, &x)) => Err(Error::NotQuadratic(format!(
            "value {x} at position {} does not lie on {a}n^2{b:+}n{c:+}",
            i + 1
        ))),
    }
}

/// Fit with the requested skip, retrying up to [`SKIP_RETRIES`] larger skips.
/// Returns the spec with the skip that worked.
pub fn fit_ray(spec: &RaySpec, count: usize) -> Result<(RaySpec, RayQuadratic)> {
    let mut last_err = None;
    for skip in spec.skip..=spec.skip + SKIP_RETRIES {
        let s = spec.with_skip(skip);
        match fit_ray_quadratic(&ray_values(&s, count)) {
            Ok(q) => return Ok((s, q)),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum RayClass {
    /// Factors over the integers: at most one prime value expected.
    Reducible { factor: String },
    /// Irreducible; `constant` is the Bateman-Horn constant when it satisfies
    /// the quadratic hypotheses (otherwise the reason is given).
    Irreducible {
        constant: Option<f64>,
        note: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RayReport {
    pub ray: RaySpec,
    pub quadratic: RayQuadratic,
    pub values_tested: usize,
    pub primes_found: usize,
    pub class: RayClass,
}

impl RayReport {
    pub fn constant(&self) -> Option<f64> {
        match &self.class {
            RayClass::Irreducible { constant, .. } => *constant,
            RayClass::Reducible { .. } => None,
        }
    }
}

/// Fit the ray, count primes among its first `count` values and classify it.
pub fn ray_report(spec: &RaySpec, count: usize) -> Result<RayReport> {
    let (ray, quadratic) = fit_ray(spec, count.max(20))?;
    let values = ray_values(&ray, count);
    let primes_found = values.iter().filter(|&&v| is_prime_u64(v)).count();
    let class = match irreducibility(&quadratic.polynomial())? {
        Irreducibility::Reducible { witness } => RayClass::Reducible {
            factor: witness.to_string(),
        },
        _ => match hlf_constant(quadratic.a, quadratic.b, quadratic.c, REPORT_PRIME_BOUND) {
            Ok(h) => RayClass::Irreducible {
                constant: Some(h.value),
                note: None,
            },
            Err(e) => RayClass::Irreducible {
                constant: None,
                note: Some(e.to_string()),
            },
        },
    };
    Ok(RayReport {
        ray,
        quadratic,
        values_tested: count,
        primes_found,
        class,
    })
}

/// Square grayscale image, row 0 at the top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    pub side: usize,
    pub pixels: Vec<u8>,
}

impl Raster {
    /// Binary PGM (P5), maxval 255.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.side, self.side).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn count(&self, value: u8) -> usize {
        self.pixels.iter().filter(|&&p| p == value).count()
    }
}

/// Range of steps `n` for which the ray's line lies in `[-h, h]^2`.
fn steps_inside(ray: &RaySpec, h: i64) -> Option<(i64, i64)> {
    let (dx, dy) = ray.direction.step();
    let mut lo = i64::MIN;
    let mut hi = i64::MAX;
    for (a, d) in [(ray.anchor.0, dx), (ray.anchor.1, dy)] {
        match d {
            0 if a.abs() > h => return None,
            0 => {}
            1 => {
                lo = lo.max(-h - a);
                hi = hi.min(h - a);
            }
            _ => {
                lo = lo.max(a - h);
                hi = hi.min(a + h);
            }
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// Spiral of `side x side` cells centred on 1. Prime cells are black; cells on
/// any overlay ray (from its skip outwards) that are not prime are gray.
pub fn render_spiral(side: usize, overlay: &[RaySpec], pixel_budget: u64) -> Result<Raster> {
    if side % 2 == 0 {
        return Err(Error::Domain(format!("side must be odd, got {side}")));
    }
    let cells = (side as u64)
        .checked_mul(side as u64)
        .filter(|&c| c <= pixel_budget)
        .ok_or(Error::Capacity {
            what: "spiral pixels",
            requested: (side as u64).saturating_mul(side as u64),
            budget: pixel_budget,
        })?;
    let flags = sieve_range(0, cells + 1)?;
    let h = (side / 2) as i64;
    let mut pixels = vec![COMPOSITE_PIXEL; side * side];
    pixels
        .par_chunks_mut(side)
        .enumerate()
        .for_each(|(row, line)| {
            let y = h - row as i64;
            for (col, px) in line.iter_mut().enumerate() {
                let x = col as i64 - h;
                if flags.is_prime(spiral_value(x, y)) {
                    *px = PRIME_PIXEL;
                }
            }
        });
    for ray in overlay {
        let Some((lo, hi)) = steps_inside(ray, h) else {
            continue;
        };
        for n in lo.max(ray.skip as i64)..=hi {
            let (dx, dy) = ray.direction.step();
            let (x, y) = (ray.anchor.0 + n * dx, ray.anchor.1 + n * dy);
            let idx = (h - y) as usize * side + (x + h) as usize;
            if pixels[idx] != PRIME_PIXEL {
                pixels[idx] = OVERLAY_PIXEL;
            }
        }
    }
    Ok(Raster { side, pixels })
}
