//! Contraction constants of the fixed-point map and the region where the
//! map is guaranteed to contract.
//!
//! With `a = 1+δ`, `b = 1+γ` and the shorthand `max(1,·)`, `min(1,·)`:
//!
//! ```text
//! M1 = √π max(1,a)^½ / (2 min(1,a) min(1,b)^½)
//! M2 = 2 max(1,a) max(1,b)^½ / (√π min(1,a)^½)
//! M3 = √π max(1,a)^½ / (4 min(1,a)² min(1,b)^½) · S
//! S  = 2|δ| + |δ−γ| max(1,a) / (min(1,a) min(1,b))
//! M  = 2 M2 M3 = max(1,a)^{3/2} max(1,b)^½ / (min(1,a)^{5/2} min(1,b)^½) · S
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible value of `1+δ` and `1+γ`.
pub const PARAM_FLOOR: f64 = 1e-6;

/// Upper end of the δ search in [`region_boundary`].
pub const BOUNDARY_SEARCH_CAP: f64 = 10.0;

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// The pair (δ, γ): slopes of the conductivity and capacity factors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub delta: f64,
    pub gamma: f64,
}

impl Params {
    pub fn new(delta: f64, gamma: f64) -> Result<Self> {
        let p = Self { delta, gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("delta", self.delta), ("gamma", self.gamma)] {
            let one_plus = 1.0 + v;
            if !v.is_finite() || one_plus.is_nan() || one_plus < PARAM_FLOOR {
                return Err(Error::ParamOutOfDomain { name, one_plus });
            }
        }
        Ok(())
    }

    pub(crate) fn bounds(&self) -> Bounds {
        let a = 1.0 + self.delta;
        let b = 1.0 + self.gamma;
        Bounds {
            max_d: a.max(1.0),
            min_d: a.min(1.0),
            max_g: b.max(1.0),
            min_g: b.min(1.0),
        }
    }
}

/// `max(1,1+υ)` and `min(1,1+υ)` for υ = δ, γ: the pointwise bounds of
/// `1+υh` over `h ∈ [0,1]`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Bounds {
    pub max_d: f64,
    pub min_d: f64,
    pub max_g: f64,
    pub min_g: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContractionReport {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub m: f64,
    pub in_region: bool,
}

fn bracket_sum(p: &Params, b: &Bounds) -> f64 {
    2.0 * p.delta.abs() + (p.delta - p.gamma).abs() * b.max_d / (b.min_d * b.min_g)
}

/// `M(δ,γ)` in its closed, displayed form (independent of M2 and M3).
pub fn contraction_constant_closed_form(p: &Params) -> Result<f64> {
    p.validate()?;
    let b = p.bounds();
    let prefactor = b.max_d.powf(1.5) * b.max_g.sqrt() / (b.min_d.powf(2.5) * b.min_g.sqrt());
    Ok(prefactor * bracket_sum(p, &b))
}

pub fn contraction_constants(p: &Params) -> Result<ContractionReport> {
    p.validate()?;
    let b = p.bounds();
    let m1 = SQRT_PI * b.max_d.sqrt() / (2.0 * b.min_d * b.min_g.sqrt());
    let m2 = 2.0 * b.max_d * b.max_g.sqrt() / (SQRT_PI * b.min_d.sqrt());
    let m3 =
        SQRT_PI * b.max_d.sqrt() / (4.0 * b.min_d * b.min_d * b.min_g.sqrt()) * bracket_sum(p, &b);
    let m = 2.0 * m2 * m3;

    let closed = contraction_constant_closed_form(p)?;
    debug_assert!(
        (m - closed).abs() <= 1e-14 * closed.abs().max(f64::MIN_POSITIVE) * 4.0,
        "M routes disagree: {m} vs {closed}"
    );

    Ok(ContractionReport {
        m1,
        m2,
        m3,
        m,
        in_region: m < 1.0,
    })
}

/// `δ(1+δ)^{3/2}(3+δ)`, the value of `M(δ,0)` for `δ > 0`.
pub fn remark_closed_form(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "remark_closed_form needs delta > 0, got {delta}"
        )));
    }
    Ok(delta * (1.0 + delta).powf(1.5) * (3.0 + delta))
}

/// One lattice point of a region scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionRecord {
    pub delta: f64,
    pub gamma: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub in_region: bool,
}

/// Closed interval `[lo, hi]` sampled at `resolution` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub resolution: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, resolution: usize) -> Self {
        Self { lo, hi, resolution }
    }

    /// Lattice values along the axis. A degenerate range gives one value.
    /// When the range straddles zero, zero is inserted if it is not already a
    /// lattice value, so the scan always carries the point `M = 0`.
    pub fn values(&self, name: &str) -> Result<Vec<f64>> {
        if !(self.lo.is_finite() && self.hi.is_finite()) || self.lo > self.hi {
            return Err(Error::InvalidArgument(format!(
                "{name} range [{}, {}] is empty or not finite",
                self.lo, self.hi
            )));
        }
        if 1.0 + self.lo < PARAM_FLOOR {
            return Err(Error::ParamOutOfDomain {
                name: if name == "delta" { "delta" } else { "gamma" },
                one_plus: 1.0 + self.lo,
            });
        }
        if self.lo == self.hi {
            return Ok(vec![self.lo]);
        }
        if self.resolution < 2 {
            return Err(Error::InvalidArgument(format!(
                "{name} resolution must be >= 2 for a non-degenerate range"
            )));
        }
        let last = self.resolution - 1;
        let span = self.hi - self.lo;
        let mut v: Vec<f64> = (0..self.resolution)
            .map(|i| {
                if i == last {
                    self.hi
                } else {
                    self.lo + span * i as f64 / last as f64
                }
            })
            .collect();
        let tiny = 1e-12 * span;
        if self.lo < 0.0 && self.hi > 0.0 {
            match v.iter().position(|&x| x.abs() <= tiny) {
                Some(i) => v[i] = 0.0,
                None => {
                    let at = v.partition_point(|&x| x < 0.0);
                    v.insert(at, 0.0);
                }
            }
        }
        Ok(v)
    }
}

/// Evaluates `M` on the rectangular lattice `delta × gamma`, row-major in γ.
pub fn region_scan(delta: Axis, gamma: Axis) -> Result<Vec<RegionRecord>> {
    let ds = delta.values("delta")?;
    let gs = gamma.values("gamma")?;
    let mut out = Vec::with_capacity(ds.len() * gs.len());
    for &g in &gs {
        for &d in &ds {
            let r = contraction_constants(&Params::new(d, g)?)?;
            out.push(RegionRecord {
                delta: d,
                gamma: g,
                m: r.m,
                in_region: r.in_region,
            });
        }
    }
    Ok(out)
}

/// Smallest positive δ with `M(δ,γ) = 1`, located by stepping up from δ = 0
/// to the first sign change of `M − 1` and bisecting to `tol`.
/// `None` when no crossing exists in `(0, BOUNDARY_SEARCH_CAP]`.
pub fn region_boundary(gamma: f64, tol: f64) -> Result<Option<f64>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tol must be positive, got {tol}"
        )));
    }
    Params::new(0.0, gamma)?;
    let excess = |d: f64| -> f64 {
        contraction_constant_closed_form(&Params { delta: d, gamma }).expect("δ >= 0") - 1.0
    };

    let mut lo = 0.0;
    let mut f_lo = excess(lo);
    let mut step = 1.0 / 64.0;
    let mut hi = None;
    while lo < BOUNDARY_SEARCH_CAP {
        let next = (lo + step).min(BOUNDARY_SEARCH_CAP);
        let f_next = excess(next);
        if f_lo < 0.0 && f_next >= 0.0 {
            hi = Some(next);
            break;
        }
        lo = next;
        f_lo = f_next;
        step *= 1.5;
    }
    let Some(mut hi) = hi else {
        return Ok(None);
    };
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if excess(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}
