use num_traits::Zero;

use super::FrobeniusLift;
use crate::error::{Error, Result};
use crate::series::{NewtonPolygon, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadiusDirection {
    Mu,
    Lambda,
}

/// Piecewise-linear radius map in valuation coordinates.
///
/// `lambda(y) = min_i v(a_i) + i y` is the valuation of `t^sigma` at a point
/// of valuation `y`; `mu` is its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadiusMap {
    pub direction: RadiusDirection,
    /// Contributing terms `(i, v(a_i))`.
    pub lines: Vec<(i64, Q)>,
    /// Points `(x, map(x))` where the active term changes.
    pub breakpoints: Vec<(Q, Q)>,
    /// Inputs at or above this value may be affected by coefficients known
    /// only up to their precision.
    pub certified_below: Option<Q>,
    /// Some term `i > q` is active somewhere.
    pub beyond_q: bool,
}

impl RadiusMap {
    pub fn eval(&self, x: Q) -> Q {
        match self.direction {
            RadiusDirection::Lambda => lambda_of(&self.lines, x),
            RadiusDirection::Mu => self
                .lines
                .iter()
                .map(|&(i, v)| (x - v) / Q::from_integer(i))
                .max()
                .expect("a_q contributes"),
        }
    }

    pub fn is_certified(&self, x: Q) -> bool {
        self.certified_below.is_none_or(|b| x < b)
    }

    /// The inverse map.
    pub fn inverse(&self) -> RadiusMap {
        let direction = match self.direction {
            RadiusDirection::Mu => RadiusDirection::Lambda,
            RadiusDirection::Lambda => RadiusDirection::Mu,
        };
        let breakpoints = self.breakpoints.iter().map(|&(x, y)| (y, x)).collect();
        let certified_below = self.certified_below.map(|b| self.eval(b));
        RadiusMap { direction, lines: self.lines.clone(), breakpoints, certified_below, beyond_q: self.beyond_q }
    }
}

fn lambda_of(lines: &[(i64, Q)], y: Q) -> Q {
    lines.iter().map(|&(i, v)| v + y * Q::from_integer(i)).min().expect("a_q contributes")
}

struct LineData {
    exact: Vec<(i64, Q)>,
    inexact: Vec<(i64, Q)>,
}

fn lines(sigma: &FrobeniusLift) -> Result<LineData> {
    if !sigma.is_zero_centered() {
        return Err(Error::NotZeroCentered);
    }
    let mut exact = Vec::new();
    let mut inexact = Vec::new();
    for (i, c) in sigma.image().terms() {
        if i <= 0 || c.is_exact_zero() {
            continue;
        }
        if c.is_zero() {
            inexact.push((i, Q::from_integer(c.valuation())));
        } else {
            exact.push((i, Q::from_integer(c.valuation())));
        }
    }
    Ok(LineData { exact, inexact })
}

/// The first `y > 0` at which the line `k + i y` reaches `lambda(y)`.
fn crossing(lines: &[(i64, Q)], (i, k): (i64, Q)) -> Option<Q> {
    let mut y = Q::zero();
    for &(j, v) in lines {
        if j > i {
            y = y.max((k - v) / Q::from_integer(j - i));
        }
    }
    (k + y * Q::from_integer(i) <= lambda_of(lines, y)).then_some(y)
}

/// The map `lambda` of a zero-centered lift.
pub fn radius_lambda(sigma: &FrobeniusLift) -> Result<RadiusMap> {
    let data = lines(sigma)?;
    let pts: Vec<(i64, Q)> = data.exact.clone();
    let np = NewtonPolygon::from_points(&pts)?;
    // active term changes where y equals a negated hull slope
    let breakpoints: Vec<(Q, Q)> = np
        .slopes
        .iter()
        .map(|&(s, _)| -s)
        .filter(|y| *y > Q::zero())
        .map(|y| (y, lambda_of(&data.exact, y)))
        .collect();
    let q = sigma.q() as i64;
    let beyond_q = np.slopes.iter().zip(np.vertices.iter().skip(1)).any(|(&(s, _), &(i, _))| i > q && s < Q::zero());
    let certified_below = data.inexact.iter().filter_map(|&l| crossing(&data.exact, l)).min();
    Ok(RadiusMap { direction: RadiusDirection::Lambda, lines: data.exact, breakpoints, certified_below, beyond_q })
}

/// The map `mu`, inverse to `lambda`.
pub fn radius_mu(sigma: &FrobeniusLift) -> Result<RadiusMap> {
    Ok(radius_lambda(sigma)?.inverse())
}

/// Smallest valuation of a root `y` of `t^sigma(y) = x` with `v(x) =
/// target`, read off the Newton polygon of `t^sigma - x`.
pub fn min_preimage_valuation(sigma: &FrobeniusLift, target: Q) -> Result<Q> {
    if target <= Q::zero() {
        return Err(Error::InvalidParameter("target valuation must be positive".into()));
    }
    let data = lines(sigma)?;
    let mut pts = vec![(0, target)];
    pts.extend(data.exact);
    let np = NewtonPolygon::from_points(&pts)?;
    Ok(-np.slopes[0].0)
}
