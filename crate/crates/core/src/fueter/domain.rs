use serde::{Deserialize, Serialize};

use crate::error::{QfcError, Result};
use crate::quaternion::Point4;

pub const DEFAULT_MASK_THRESHOLD: f64 = 1e-6;

/// Axis-aligned box in `(x1, y1, x2, y2)` plus the masking threshold for
/// points near the singular set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub lo: [f64; 4],
    pub hi: [f64; 4],
    pub excluded_threshold: f64,
}

impl Domain {
    pub fn new(lo: [f64; 4], hi: [f64; 4], excluded_threshold: f64) -> Result<Self> {
        for k in 0..4 {
            if !(lo[k].is_finite() && hi[k].is_finite() && lo[k] < hi[k]) {
                return Err(QfcError::InvalidArgument(format!(
                    "interval {k} of the box is empty or not finite: [{}, {}]",
                    lo[k], hi[k]
                )));
            }
        }
        if !(excluded_threshold > 0.0) {
            return Err(QfcError::InvalidArgument(
                "mask threshold must be positive".into(),
            ));
        }
        Ok(Domain { lo, hi, excluded_threshold })
    }

    /// `[a, b]^4` with the default mask threshold.
    pub fn cube(a: f64, b: f64) -> Self {
        Domain::new([a; 4], [b; 4], DEFAULT_MASK_THRESHOLD).expect("a < b")
    }

    /// From `x1min,x1max,y1min,y1max,x2min,x2max,y2min,y2max`.
    pub fn from_bounds(b: [f64; 8], excluded_threshold: f64) -> Result<Self> {
        Domain::new([b[0], b[2], b[4], b[6]], [b[1], b[3], b[5], b[7]], excluded_threshold)
    }

    pub fn bounds(&self) -> [f64; 8] {
        let (l, h) = (self.lo, self.hi);
        [l[0], h[0], l[1], h[1], l[2], h[2], l[3], h[3]]
    }

    pub fn with_threshold(mut self, t: f64) -> Result<Self> {
        if !(t > 0.0) {
            return Err(QfcError::InvalidArgument("mask threshold must be positive".into()));
        }
        self.excluded_threshold = t;
        Ok(self)
    }

    pub fn spacing(&self, n: usize) -> [f64; 4] {
        let d = (n.max(2) - 1) as f64;
        std::array::from_fn(|k| (self.hi[k] - self.lo[k]) / d)
    }

    /// Grid coordinate `i` (0..n) along axis `k`, endpoints included.
    pub fn tick(&self, k: usize, i: usize, n: usize) -> f64 {
        if i + 1 == n {
            self.hi[k]
        } else {
            self.lo[k] + i as f64 * self.spacing(n)[k]
        }
    }

    /// The `n^4` grid points, `x1` varying slowest.
    pub fn grid(&self, n: usize) -> Result<Vec<Point4>> {
        if n < 2 {
            return Err(QfcError::InvalidArgument("grid size must be at least 2".into()));
        }
        let mut out = Vec::with_capacity(n.pow(4));
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        out.push(Point4::from_coords([
                            self.tick(0, a, n),
                            self.tick(1, b, n),
                            self.tick(2, c, n),
                            self.tick(3, d, n),
                        ]));
                    }
                }
            }
        }
        Ok(out)
    }
}

impl Default for Domain {
    fn default() -> Self {
        Domain::cube(-1.0, 1.0)
    }
}
