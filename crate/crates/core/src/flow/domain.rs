use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::FlowError;

/// Compact rectangle `[x_min, x_max] x [y_min, y_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct DomainU {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl DomainU {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self, FlowError> {
        let finite = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite());
        if !finite || x_min >= x_max || y_min >= y_max {
            return Err(FlowError::InvalidDomain(format!(
                "{x_min},{x_max},{y_min},{y_max}"
            )));
        }
        Ok(DomainU {
            x_min,
            x_max,
            y_min,
            y_max,
        })
    }

    /// Square `[-h, h]^2`.
    pub fn square(h: f64) -> Result<Self, FlowError> {
        Self::new(-h, h, -h, h)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }
    pub fn x_max(&self) -> f64 {
        self.x_max
    }
    pub fn y_min(&self) -> f64 {
        self.y_min
    }
    pub fn y_max(&self) -> f64 {
        self.y_max
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    /// Closed-set membership.
    pub fn contains(&self, p: [f64; 2]) -> bool {
        p[0] >= self.x_min && p[0] <= self.x_max && p[1] >= self.y_min && p[1] <= self.y_max
    }

    /// Membership with a slack of `tol` on every side.
    pub fn contains_with(&self, p: [f64; 2], tol: f64) -> bool {
        p[0] >= self.x_min - tol
            && p[0] <= self.x_max + tol
            && p[1] >= self.y_min - tol
            && p[1] <= self.y_max + tol
    }

    pub fn bounds(&self) -> [f64; 4] {
        [self.x_min, self.x_max, self.y_min, self.y_max]
    }
}

impl TryFrom<[f64; 4]> for DomainU {
    type Error = FlowError;

    fn try_from(b: [f64; 4]) -> Result<Self, Self::Error> {
        DomainU::new(b[0], b[1], b[2], b[3])
    }
}

impl From<DomainU> for [f64; 4] {
    fn from(d: DomainU) -> Self {
        d.bounds()
    }
}

impl fmt::Display for DomainU {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.x_min, self.x_max, self.y_min, self.y_max)
    }
}

impl FromStr for DomainU {
    type Err = FlowError;

    /// `xmin,xmax,ymin,ymax`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| FlowError::InvalidDomain(s.to_string()))?;
        match parts.as_slice() {
            [a, b, c, d] => DomainU::new(*a, *b, *c, *d),
            _ => Err(FlowError::InvalidDomain(s.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_validate() {
        let d: DomainU = "-2,2,-1,1".parse().unwrap();
        assert_eq!(d.bounds(), [-2.0, 2.0, -1.0, 1.0]);
        assert!(d.contains([2.0, 1.0]));
        assert!(!d.contains([2.1, 0.0]));
        assert!("1,0,0,1".parse::<DomainU>().is_err());
        assert!("1,2,3".parse::<DomainU>().is_err());
        assert!("a,b,c,d".parse::<DomainU>().is_err());
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(json, "[-2.0,2.0,-1.0,1.0]");
        assert_eq!(serde_json::from_str::<DomainU>(&json).unwrap(), d);
        assert!(serde_json::from_str::<DomainU>("[0,0,0,1]").is_err());
    }
}
