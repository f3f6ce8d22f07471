//! Piecewise-constant branch coupling profiles.
//!
//! A profile records the coupling strength a branch exerts on the field as a
//! function of time, as contiguous segments tiling [0, T]. The
//! branch-conditioned interaction of a two-branch superposition is a pair of
//! such profiles, one per branch.

use crate::error::{Error, Result};

/// One constant-coupling interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    /// Start time, s.
    pub t_start: f64,
    /// End time, s.
    pub t_end: f64,
    /// Coupling strength over the interval, rad/s.
    pub g: f64,
}

/// Piecewise-constant coupling over [0, T]: non-overlapping segments that
/// tile the interval contiguously starting at t = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingProfile {
    segments: Vec<Segment>,
}

impl CouplingProfile {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::BadProfile("no segments".into()));
        }
        if segments[0].t_start != 0.0 {
            return Err(Error::BadProfile(format!(
                "first segment starts at {}, not 0",
                segments[0].t_start
            )));
        }
        for (i, s) in segments.iter().enumerate() {
            if !(s.t_start < s.t_end) {
                return Err(Error::BadProfile(format!(
                    "segment {i} has t_start {} >= t_end {}",
                    s.t_start, s.t_end
                )));
            }
            if !s.g.is_finite() {
                return Err(Error::NonFinite { name: "segment coupling", value: s.g });
            }
        }
        for w in segments.windows(2) {
            if w[1].t_start != w[0].t_end {
                return Err(Error::BadProfile(format!(
                    "gap or overlap between t = {} and t = {}",
                    w[0].t_end, w[1].t_start
                )));
            }
        }
        Ok(Self { segments })
    }

    /// Constant coupling g over [0, total_time].
    pub fn constant(g: f64, total_time: f64) -> Result<Self> {
        Self::new(vec![Segment { t_start: 0.0, t_end: total_time, g }])
    }

    /// Zero coupling over [0, total_time].
    pub fn zero(total_time: f64) -> Result<Self> {
        Self::constant(0.0, total_time)
    }

    /// Build from breakpoints `0 = t_0 < t_1 < ... < t_n` and one coupling
    /// value per interval.
    pub fn from_breakpoints(breaks: &[f64], gs: &[f64]) -> Result<Self> {
        if breaks.len() != gs.len() + 1 {
            return Err(Error::LengthMismatch {
                left_name: "breakpoints",
                left: breaks.len(),
                right_name: "couplings + 1",
                right: gs.len() + 1,
            });
        }
        let segments = gs
            .iter()
            .enumerate()
            .map(|(i, &g)| Segment { t_start: breaks[i], t_end: breaks[i + 1], g })
            .collect();
        Self::new(segments)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// End of coverage.
    pub fn total_time(&self) -> f64 {
        self.segments.last().unwrap().t_end
    }

    /// Coupling value at time t (right-continuous; the final endpoint maps to
    /// the last segment).
    pub fn coupling_at(&self, t: f64) -> Result<f64> {
        if t < 0.0 || t > self.total_time() {
            return Err(Error::OutsideCoverage { t, t_end: self.total_time() });
        }
        for s in &self.segments {
            if t < s.t_end {
                return Ok(s.g);
            }
        }
        Ok(self.segments.last().unwrap().g)
    }

    /// True when every segment has zero coupling.
    pub fn is_zero(&self) -> bool {
        self.segments.iter().all(|s| s.g == 0.0)
    }

    /// Restrict to [0, t], truncating the segment containing t.
    pub fn truncated(&self, t: f64) -> Result<Self> {
        if t <= 0.0 || t > self.total_time() {
            return Err(Error::OutsideCoverage { t, t_end: self.total_time() });
        }
        let mut out = Vec::new();
        for s in &self.segments {
            if s.t_start >= t {
                break;
            }
            out.push(Segment { t_start: s.t_start, t_end: s.t_end.min(t), g: s.g });
        }
        Self::new(out)
    }

    /// All interior breakpoints plus 0 and T, sorted.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.segments.iter().map(|s| s.t_start).collect();
        b.push(self.total_time());
        b
    }

    /// Serialize as `t_start:t_end:g` triples joined by commas, the form
    /// accepted in configuration files.
    pub fn to_config_string(&self) -> String {
        self.segments
            .iter()
            .map(|s| format!("{}:{}:{}", s.t_start, s.t_end, s.g))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parse the `to_config_string` form.
    pub fn from_config_string(s: &str) -> Result<Self> {
        let mut segments = Vec::new();
        for part in s.split(',') {
            let fields: Vec<&str> = part.trim().split(':').collect();
            if fields.len() != 3 {
                return Err(Error::Config(format!(
                    "profile segment `{part}` is not t_start:t_end:g"
                )));
            }
            let parse = |v: &str, what: &str| {
                v.trim().parse::<f64>().map_err(|_| {
                    Error::Config(format!("profile segment `{part}`: bad {what} `{v}`"))
                })
            };
            segments.push(Segment {
                t_start: parse(fields[0], "t_start")?,
                t_end: parse(fields[1], "t_end")?,
                g: parse(fields[2], "g")?,
            });
        }
        Self::new(segments)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contiguity_enforced() {
        assert!(CouplingProfile::new(vec![
            Segment { t_start: 0.0, t_end: 1.0, g: 1.0 },
            Segment { t_start: 1.5, t_end: 2.0, g: -1.0 },
        ])
        .is_err());
        assert!(CouplingProfile::new(vec![Segment { t_start: 0.5, t_end: 1.0, g: 1.0 }]).is_err());
        assert!(CouplingProfile::new(vec![Segment { t_start: 0.0, t_end: 0.0, g: 1.0 }]).is_err());
        assert!(CouplingProfile::new(vec![
            Segment { t_start: 0.0, t_end: 1.0, g: 1.0 },
            Segment { t_start: 1.0, t_end: 2.0, g: -1.0 },
        ])
        .is_ok());
    }

    #[test]
    fn coupling_lookup() {
        let p = CouplingProfile::from_breakpoints(&[0.0, 1.0, 3.0], &[0.5, -0.5]).unwrap();
        assert_eq!(p.coupling_at(0.0).unwrap(), 0.5);
        assert_eq!(p.coupling_at(0.99).unwrap(), 0.5);
        assert_eq!(p.coupling_at(1.0).unwrap(), -0.5);
        assert_eq!(p.coupling_at(3.0).unwrap(), -0.5);
        assert!(p.coupling_at(3.1).is_err());
        assert!(p.coupling_at(-0.1).is_err());
    }

    #[test]
    fn truncation() {
        let p = CouplingProfile::from_breakpoints(&[0.0, 1.0, 3.0], &[0.5, -0.5]).unwrap();
        let q = p.truncated(2.0).unwrap();
        assert_eq!(q.total_time(), 2.0);
        assert_eq!(q.segments().len(), 2);
        assert_eq!(q.segments()[1].t_end, 2.0);
        let r = p.truncated(0.5).unwrap();
        assert_eq!(r.segments().len(), 1);
    }

    #[test]
    fn config_round_trip() {
        let p = CouplingProfile::from_breakpoints(&[0.0, 0.5, 2.0], &[1.25, -0.75]).unwrap();
        let s = p.to_config_string();
        let q = CouplingProfile::from_config_string(&s).unwrap();
        assert_eq!(p, q);
        assert!(CouplingProfile::from_config_string("0:1").is_err());
        assert!(CouplingProfile::from_config_string("0:1:x").is_err());
    }
}
