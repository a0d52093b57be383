use serde::{Deserialize, Serialize};

use super::SolutionProfile;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    Ball,
    Annulus,
}

/// A ball or annulus in R^n. Only the distance of its center from the origin
/// is stored, which is all a radial profile can see.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    pub kind: RegionKind,
    pub center_distance: f64,
    pub inner: f64,
    pub outer: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Extremum {
    Sup,
    Inf,
}

impl RegionSpec {
    pub fn ball(radius: f64) -> Self {
        Self {
            kind: RegionKind::Ball,
            center_distance: 0.0,
            inner: 0.0,
            outer: radius,
        }
    }

    pub fn ball_at(center_distance: f64, radius: f64) -> Self {
        Self {
            center_distance,
            ..Self::ball(radius)
        }
    }

    pub fn annulus(inner: f64, outer: f64) -> Self {
        Self {
            kind: RegionKind::Annulus,
            center_distance: 0.0,
            inner,
            outer,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let inner = match self.kind {
            RegionKind::Ball => 0.0,
            RegionKind::Annulus => self.inner,
        };
        if !(inner >= 0.0 && inner < self.outer && self.center_distance >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "region needs 0 <= inner < outer and center distance >= 0 \
                 (inner = {inner}, outer = {}, center = {})",
                self.outer, self.center_distance
            )));
        }
        Ok(())
    }

    /// Interval of `|x|` covered by the region.
    pub fn radial_range(&self) -> (f64, f64) {
        let d = self.center_distance;
        let hi = d + self.outer;
        let lo = match self.kind {
            RegionKind::Ball => (d - self.outer).max(0.0),
            RegionKind::Annulus => {
                if d > self.outer {
                    d - self.outer
                } else if d >= self.inner {
                    0.0
                } else {
                    self.inner - d
                }
            }
        };
        (lo, hi)
    }
}

/// Sup or inf of a profile over a region.
///
/// Evaluated on the grid nodes inside the region, the midpoints between
/// consecutive such nodes and the two ends of the radial range. This is a
/// resolution-limited estimate, not a global optimization.
pub fn extremum_on(p: &SolutionProfile, region: &RegionSpec, which: Extremum) -> Result<f64> {
    region.validate()?;
    let (lo, hi) = region.radial_range();
    if hi > p.ball_radius() * (1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "region reaches r = {hi} beyond the profile's ball of radius {}",
            p.ball_radius()
        )));
    }
    let hi = hi.min(p.ball_radius());
    let nodes = p.nodes();
    let values = p.values();
    let first = nodes.partition_point(|&r| r < lo);
    let last = nodes.partition_point(|&r| r <= hi);
    if first >= last {
        return Err(Error::EmptyRegion { lo, hi });
    }
    let pick = |a: f64, b: f64| match which {
        Extremum::Sup => a.max(b),
        Extremum::Inf => a.min(b),
    };
    let mut best = values[first];
    for i in first..last {
        best = pick(best, values[i]);
        if i + 1 < last {
            best = pick(best, p.eval(0.5 * (nodes[i] + nodes[i + 1]))?);
        }
    }
    best = pick(best, p.eval(lo)?);
    best = pick(best, p.eval(hi)?);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{CurvatureProfile, Exponents, RadialGrid};

    fn decreasing() -> SolutionProfile {
        let e = Exponents::new(4).unwrap();
        let grid = RadialGrid::uniform(1.0, 1e-3).unwrap();
        SolutionProfile::from_fn(grid, e, false, CurvatureProfile::constant(8.0), |r| 2.0 - r * r).unwrap()
    }

    #[test]
    fn monotone_profile_extrema() {
        let p = decreasing();
        assert_eq!(extremum_on(&p, &RegionSpec::ball(0.5), Extremum::Sup).unwrap(), 2.0);
        assert_eq!(extremum_on(&p, &RegionSpec::ball(1.0), Extremum::Inf).unwrap(), 1.0);
        let ann = RegionSpec::annulus(0.25, 0.5);
        let s = extremum_on(&p, &ann, Extremum::Sup).unwrap();
        let i = extremum_on(&p, &ann, Extremum::Inf).unwrap();
        assert!((s - (2.0 - 0.0625)).abs() < 1e-12);
        assert!((i - 1.75).abs() < 1e-12);
    }

    #[test]
    fn radial_ranges() {
        assert_eq!(RegionSpec::ball_at(0.3, 0.2).radial_range(), (0.09999999999999998, 0.5));
        assert_eq!(RegionSpec::ball_at(0.1, 0.2).radial_range(), (0.0, 0.30000000000000004));
        let mut a = RegionSpec::annulus(0.2, 0.4);
        a.center_distance = 0.1;
        assert_eq!(a.radial_range().0, 0.1);
        a.center_distance = 0.3;
        assert_eq!(a.radial_range().0, 0.0);
    }

    #[test]
    fn region_outside_ball_is_rejected() {
        let p = decreasing();
        assert!(extremum_on(&p, &RegionSpec::ball(1.5), Extremum::Sup).is_err());
        assert!(RegionSpec::annulus(0.5, 0.5).validate().is_err());
    }

    #[test]
    fn region_between_nodes_is_empty() {
        let e = Exponents::new(4).unwrap();
        let grid = RadialGrid::uniform(1.0, 0.1).unwrap();
        let p = SolutionProfile::from_fn(grid, e, false, CurvatureProfile::constant(8.0), |_| 1.0).unwrap();
        let r = extremum_on(&p, &RegionSpec::annulus(0.41, 0.49), Extremum::Sup);
        assert!(matches!(r, Err(Error::EmptyRegion { .. })));
    }
}
