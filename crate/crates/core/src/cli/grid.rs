use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Evenly spaced closed interval `start..=stop` with `count` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    start: f64,
    stop: f64,
    count: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        if !start.is_finite() || !stop.is_finite() {
            return Err(Error::param(format!("grid bounds must be finite, got {start}:{stop}")));
        }
        if count < 1 {
            return Err(Error::param("grid count must be >= 1"));
        }
        if start > stop {
            return Err(Error::param(format!("grid start {start} exceeds stop {stop}")));
        }
        Ok(Grid { start, stop, count })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn stop(&self) -> f64 {
        self.stop
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Spacing between neighbours; zero for a single point.
    pub fn resolution(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.stop - self.start) / (self.count - 1) as f64
        }
    }

    /// Grid points; the last one is exactly `stop`.
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = self.count - 1;
        (0..self.count)
            .map(|i| if i == last { self.stop } else { self.start + (self.stop - self.start) * i as f64 / last as f64 })
            .collect()
    }

    pub(crate) fn require_within(&self, lo: f64, hi: f64, what: &str) -> Result<()> {
        if self.start < lo || self.stop > hi {
            return Err(Error::param(format!("{what} grid {self} must lie within [{lo}, {hi}]")));
        }
        Ok(())
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}:{:?}:{}", self.start, self.stop, self.count)
    }
}

/// `start:stop:count`, where the bounds accept anything [`parse_real`] does.
impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count] = parts[..] else {
            return Err(Error::param(format!("grid must look like start:stop:count, got {s:?}")));
        };
        let count = count.trim().parse().map_err(|_| Error::param(format!("bad grid count {count:?}")))?;
        Grid::new(parse_real(start)?, parse_real(stop)?, count)
    }
}

/// A real number, optionally written in units of π: `0.3`, `pi`, `-pi/4`,
/// `2pi`, `3*pi/2`.
pub fn parse_real(s: &str) -> Result<f64> {
    let bad = || Error::param(format!("cannot parse {s:?} as a number"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().map_err(|_| bad())?),
        None => (s, 1.0),
    };
    let value = match num.strip_suffix("pi") {
        Some(coef) => {
            let coef = coef.trim().trim_end_matches('*').trim();
            let c = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| bad())?,
            };
            c * PI
        }
        None => num.parse::<f64>().map_err(|_| bad())?,
    } / den;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_triplets() {
        let g: Grid = "0:0.95:200".parse().unwrap();
        assert_eq!((g.start(), g.stop(), g.count()), (0.0, 0.95, 200));
        let p = g.points();
        assert_eq!(p.len(), 200);
        assert_eq!(p[0], 0.0);
        assert_eq!(p[199], 0.95);
        assert!((g.resolution() - 0.95 / 199.0).abs() < 1e-16);
    }

    #[test]
    fn single_point() {
        let g: Grid = "0.3:0.3:1".parse().unwrap();
        assert_eq!(g.points(), vec![0.3]);
        assert_eq!(g.resolution(), 0.0);
    }

    #[test]
    fn rejects_malformed() {
        for s in ["", "1:2", "1:2:3:4", "2:1:5", "0:1:0", "0:x:3", "0:1:-2", "nan:1:2"] {
            assert!(s.parse::<Grid>().is_err(), "{s}");
        }
    }

    #[test]
    fn pi_units() {
        assert_eq!(parse_real("pi").unwrap(), PI);
        assert_eq!(parse_real("-pi/4").unwrap(), -PI / 4.0);
        assert_eq!(parse_real("2pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_real("3*pi/2").unwrap(), 1.5 * PI);
        assert_eq!(parse_real(" -0.25 ").unwrap(), -0.25);
        assert!(parse_real("pi/0").is_err());
        let g: Grid = "0:2pi:5".parse().unwrap();
        assert_eq!(g.points()[4], 2.0 * PI);
    }

    #[test]
    fn display_round_trips() {
        let g = Grid::new(0.1, 0.7, 13).unwrap();
        assert_eq!(g.to_string().parse::<Grid>().unwrap(), g);
    }
}
