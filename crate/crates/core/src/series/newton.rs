use num_rational::Ratio;

use super::{RingTag, TruncLaurent, Q};
use crate::error::{Error, Result};
use crate::scalar::INF;

/// Result of a Gauss valuation: the minimum over known coefficients and
/// whether the unknown part provably cannot go below it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GaussValue {
    pub value: Q,
    pub certified: bool,
    /// Provable lower bound for the true value, counting coefficients known
    /// only modulo a power of `p` at their precision floor.
    pub lower_bound: Option<Q>,
}

/// `w_r(f) = min_i v(c_i) + r i`.
///
/// An exact zero series has value `+inf`, reported as `INF` and certified.
pub fn gauss_valuation(f: &TruncLaurent, r: Q) -> GaussValue {
    let mut value: Option<Q> = None;
    let mut unknown_floor: Option<Q> = None;
    let bump = |slot: &mut Option<Q>, x: Q| {
        *slot = Some(slot.map_or(x, |y: Q| y.min(x)));
    };
    for (e, c) in f.terms() {
        let w = r * e;
        if c.is_zero() {
            if !c.is_exact_zero() {
                bump(&mut unknown_floor, Q::from_integer(c.valuation()) + w);
            }
        } else {
            bump(&mut value, Q::from_integer(c.valuation()) + w);
        }
    }
    if let Some(h) = f.hi() {
        let tail = match f.tag() {
            RingTag::Omega | RingTag::Gamma => f.tail_bound().map(|b| Q::from_integer(b) + r * h),
            RingTag::Rplus | RingTag::Robba => f.radius().and_then(|rho| {
                if r < rho {
                    return None;
                }
                let inner = f
                    .nonzero_terms()
                    .map(|(e, c)| Q::from_integer(c.valuation()) + rho * e)
                    .min()?;
                Some(inner + (r - rho) * h)
            }),
        };
        match tail {
            Some(t) => bump(&mut unknown_floor, t),
            None => {
                return GaussValue { value: value.unwrap_or(Q::from_integer(INF)), certified: false, lower_bound: None };
            }
        }
    }
    let inf = Q::from_integer(INF);
    let lower_bound = Some(value.unwrap_or(inf).min(unknown_floor.unwrap_or(inf)));
    match value {
        None => GaussValue { value: unknown_floor.unwrap_or(inf), certified: unknown_floor.is_none(), lower_bound },
        Some(v) => GaussValue { value: v, certified: unknown_floor.is_none_or(|u| u >= v), lower_bound },
    }
}

/// Lower convex hull of the points `(exponent, valuation)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(i64, Q)>,
    /// Segment slopes with their horizontal lengths, in increasing order.
    pub slopes: Vec<(Q, u64)>,
}

impl NewtonPolygon {
    /// Lower hull of arbitrary points (sorted by abscissa, one point per
    /// abscissa); collinear interior points are dropped.
    pub fn from_points(points: &[(i64, Q)]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::ZeroSeries);
        }
        let mut pts = points.to_vec();
        pts.sort_by_key(|p| p.0);
        let mut hull: Vec<(i64, Q)> = Vec::new();
        for pt in pts {
            if let Some(last) = hull.last() {
                if last.0 == pt.0 {
                    if pt.1 < last.1 {
                        hull.pop();
                    } else {
                        continue;
                    }
                }
            }
            while hull.len() >= 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                // drop b when it lies on or above segment a -> pt
                let lhs = (b.1 - a.1) * (pt.0 - a.0);
                let rhs = (pt.1 - a.1) * (b.0 - a.0);
                if lhs >= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(pt);
        }
        let slopes = hull
            .windows(2)
            .map(|w| ((w[1].1 - w[0].1) / Q::from_integer(w[1].0 - w[0].0), (w[1].0 - w[0].0) as u64))
            .collect();
        Ok(Self { vertices: hull, slopes })
    }

    /// Root valuations (negated slopes) with multiplicity, largest first.
    pub fn root_valuations(&self) -> Vec<(Q, u64)> {
        self.slopes.iter().map(|&(s, m)| (-s, m)).collect()
    }

    /// Slopes expanded by multiplicity.
    pub fn slope_multiset(&self) -> Vec<Q> {
        let mut out = Vec::new();
        for &(s, m) in &self.slopes {
            out.extend(std::iter::repeat_n(s, m as usize));
        }
        out
    }

    /// Number of roots with valuation strictly greater than `gamma`.
    pub fn roots_above(&self, gamma: Q) -> u64 {
        self.slopes.iter().filter(|(s, _)| -*s > gamma).map(|(_, m)| m).sum()
    }
}

/// Newton polygon of the known nonzero coefficients of `f`.
pub fn newton_polygon(f: &TruncLaurent) -> Result<NewtonPolygon> {
    let pts: Vec<(i64, Q)> = f.nonzero_terms().map(|(e, c)| (e, Ratio::from_integer(c.valuation()))).collect();
    NewtonPolygon::from_points(&pts)
}
