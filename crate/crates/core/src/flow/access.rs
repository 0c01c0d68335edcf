//! Extra walking for passengers whose nearest stations are not linked.
//!
//! Stations sit one spacing apart in a repeating pattern and trip ends are
//! spread uniformly along the line. When the nearest origin and destination
//! stations are of types no train section joins, the passenger walks to an
//! acceptable station at whichever end costs less.

use num::{One, Signed, Zero};
use serde::Serialize;

use super::FlowError;
use crate::model::ftr;
use crate::rational::{serde_q, Q};
use crate::routing::build_graph_from_spec;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AccessPenalty {
    /// Share of trips whose nearest stations are not joined.
    #[serde(with = "serde_q")]
    pub affected_fraction: Q,
    /// Mean extra distance over affected trips, in station spacings.
    #[serde(with = "serde_q")]
    pub conditional_mean: Q,
    /// Mean extra distance over all trips.
    #[serde(with = "serde_q")]
    pub average: Q,
}

/// `P(extra > τ)` at one trip end, averaged over the two sides of the station.
///
/// On the side facing the nearer acceptable station `a` away, shifting costs
/// `a − 2y` for an offset `y` uniform on `[0, 1/2]`; the station `b` away on
/// the far side costs `b`.
struct EndSurvival {
    right: u64,
    left: u64,
}

fn side(a: u64, b: u64, t: &Q) -> Q {
    if *t >= Q::from_integer(b.into()) {
        return Q::zero();
    }
    let x = Q::from_integer(a.into()) - t;
    if x.is_negative() {
        Q::zero()
    } else if x > Q::one() {
        Q::one()
    } else {
        x
    }
}

impl EndSurvival {
    fn at(&self, t: &Q) -> Q {
        (side(self.right, self.left, t) + side(self.left, self.right, t)) / Q::from_integer(2.into())
    }

    fn breakpoints(&self) -> Vec<Q> {
        let mut out = Vec::new();
        for d in [self.right, self.left] {
            out.push(Q::from_integer(d.into()));
            out.push(Q::from_integer(d.saturating_sub(1).into()));
        }
        out
    }
}

/// `∫ S_o S_d dτ`; the integrand is piecewise quadratic, so Simpson's rule
/// between breakpoints is exact.
fn expected_min(o: &EndSurvival, d: &EndSurvival) -> Q {
    let mut pts = o.breakpoints();
    pts.extend(d.breakpoints());
    pts.push(Q::zero());
    pts.sort();
    pts.dedup();
    let f = |t: &Q| o.at(t) * d.at(t);
    let six = Q::from_integer(6.into());
    let two = Q::from_integer(2.into());
    pts.windows(2)
        .map(|w| {
            let mid = (&w[0] + &w[1]) / &two;
            (&w[1] - &w[0]) * (f(&w[0]) + f(&mid) * Q::from_integer(4.into()) + f(&w[1])) / &six
        })
        .sum()
}

/// Distance to the nearest station to the right and to the left of `at`
/// whose type satisfies `ok`.
fn nearest(pattern: &[usize], at: usize, ok: impl Fn(usize) -> bool) -> Option<EndSurvival> {
    let p = pattern.len();
    let right = (1..=p).find(|&k| ok(pattern[(at + k) % p]))?;
    let left = (1..=p).find(|&k| ok(pattern[(at + p - k) % p]))?;
    Some(EndSurvival { right: right as u64, left: left as u64 })
}

/// Access penalty on a cyclic pattern of station types, where
/// `connected(i, j)` tells whether type `i` reaches type `j` without shifting.
///
/// The extra distance is counted once per trip end, so a trip that shifts
/// one end pays half the mean of the cheaper shift.
pub fn access_penalty(pattern: &[usize], connected: impl Fn(usize, usize) -> bool) -> Result<AccessPenalty, FlowError> {
    if pattern.is_empty() {
        return Err(FlowError::InvalidInput("empty station pattern".into()));
    }
    let p = pattern.len();
    let mut affected = 0u64;
    let mut total = Q::zero();
    for o in 0..p {
        for d in 0..p {
            let (i, j) = (pattern[o], pattern[d]);
            if connected(i, j) {
                continue;
            }
            affected += 1;
            let unreachable = || FlowError::InvalidInput("no acceptable station in the pattern".into());
            let so = nearest(pattern, o, |x| connected(x, j)).ok_or_else(unreachable)?;
            let sd = nearest(pattern, d, |x| connected(i, x)).ok_or_else(unreachable)?;
            total += expected_min(&so, &sd) / Q::from_integer(2.into());
        }
    }
    let pairs = Q::from_integer(((p * p) as i64).into());
    let affected_fraction = Q::from_integer((affected as i64).into()) / &pairs;
    let conditional_mean = if affected == 0 { Q::zero() } else { &total / Q::from_integer((affected as i64).into()) };
    Ok(AccessPenalty { affected_fraction, conditional_mean, average: total / pairs })
}

/// Access penalty of the F/T/R protocol on a cyclic pattern of its labels.
pub fn access_penalty_ftr<S: AsRef<str>>(pattern: &[S]) -> Result<AccessPenalty, FlowError> {
    let g = build_graph_from_spec(&ftr());
    let types = pattern
        .iter()
        .map(|l| g.type_index(l.as_ref()).map_err(|e| FlowError::InvalidInput(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    access_penalty(&types, |i, j| g.connected(i, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qr;

    #[test]
    fn canonical_pattern() {
        let r = access_penalty_ftr(&["F", "R", "T"]).unwrap();
        assert_eq!(r.affected_fraction, qr(2, 9));
        assert_eq!(r.conditional_mean, qr(1, 6));
        assert_eq!(r.average, qr(1, 27));
    }

    #[test]
    fn all_connected_costs_nothing() {
        let r = access_penalty_ftr(&["F", "T"]).unwrap();
        assert!(r.average.is_zero() && r.affected_fraction.is_zero());
    }

    #[test]
    fn survival_tail() {
        let s = EndSurvival { right: 1, left: 1 };
        assert_eq!(s.at(&Q::zero()), Q::one());
        assert_eq!(s.at(&qr(1, 2)), qr(1, 2));
        assert!(s.at(&Q::one()).is_zero());
    }
}
