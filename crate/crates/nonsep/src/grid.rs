//! Evenly spaced evaluation grids and their `start:stop:steps` text form.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Reasons a grid specification is unusable.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    /// A grid needs at least one point.
    #[error("grid needs at least 1 step")]
    ZeroSteps,
    /// Endpoints must be finite numbers.
    #[error("grid bound {0} is not finite")]
    NonFinite(f64),
    /// The grid must not run backwards.
    #[error("grid start {start} exceeds stop {stop}")]
    Descending { start: f64, stop: f64 },
    /// The text form must look like `start:stop:steps`.
    #[error("grid spec {0:?} must look like start:stop:steps")]
    Syntax(String),
}

/// Inclusive evenly spaced grid with a fixed point count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    /// First point.
    pub start: f64,
    /// Last point when `steps > 1`.
    pub stop: f64,
    /// Number of points.
    pub steps: usize,
}

impl Grid {
    /// Validates and builds a grid.
    pub fn new(start: f64, stop: f64, steps: usize) -> Result<Self, GridError> {
        if steps == 0 {
            return Err(GridError::ZeroSteps);
        }
        for bound in [start, stop] {
            if !bound.is_finite() {
                return Err(GridError::NonFinite(bound));
            }
        }
        if start > stop {
            return Err(GridError::Descending { start, stop });
        }
        Ok(Grid { start, stop, steps })
    }

    /// Grid points; both endpoints are produced exactly, and a single-step
    /// grid holds only `start`.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let span = self.stop - self.start;
        let denom = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i == self.steps - 1 {
                    self.stop
                } else {
                    self.start + (i as f64 * span) / denom
                }
            })
            .collect()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.steps)
    }
}

impl FromStr for Grid {
    type Err = GridError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(GridError::Syntax(s.to_string()));
        }
        let parse_bound =
            |p: &str| p.trim().parse::<f64>().map_err(|_| GridError::Syntax(s.to_string()));
        let start = parse_bound(parts[0])?;
        let stop = parse_bound(parts[1])?;
        let steps =
            parts[2].trim().parse::<usize>().map_err(|_| GridError::Syntax(s.to_string()))?;
        Grid::new(start, stop, steps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_exact() {
        let g = Grid::new(0.0, 3.0, 301).unwrap();
        let v = g.values();
        assert_eq!(v.len(), 301);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[100], 1.0);
        assert_eq!(v[300], 3.0);

        let sweep = Grid::new(0.0, 0.999, 200).unwrap();
        let w = sweep.values();
        assert_eq!(w[199], 0.999);
    }

    #[test]
    fn single_step_grid_is_the_start_point() {
        let g = Grid::new(2.5, 7.0, 1).unwrap();
        assert_eq!(g.values(), vec![2.5]);
    }

    #[test]
    fn invalid_grids_are_rejected() {
        assert_eq!(Grid::new(0.0, 1.0, 0), Err(GridError::ZeroSteps));
        assert_eq!(
            Grid::new(2.0, 1.0, 5),
            Err(GridError::Descending { start: 2.0, stop: 1.0 })
        );
        assert!(matches!(Grid::new(f64::NAN, 1.0, 5), Err(GridError::NonFinite(_))));
    }

    #[test]
    fn text_form_round_trips() {
        let g: Grid = "0:3:301".parse().unwrap();
        assert_eq!(g, Grid { start: 0.0, stop: 3.0, steps: 301 });
        assert_eq!(g.to_string(), "0:3:301");
        assert_eq!("0.5:2:7".parse::<Grid>().unwrap().start, 0.5);
    }

    #[test]
    fn malformed_text_is_rejected() {
        for bad in ["", "1:2", "1:2:3:4", "a:2:3", "1:b:3", "1:2:c", "1:2:-3"] {
            assert!(matches!(bad.parse::<Grid>(), Err(GridError::Syntax(_))), "{bad}");
        }
    }
}
