use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Points in `dim` dimensions, stored row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("point dimension must be positive".into()));
        }
        if coords.is_empty() {
            return Err(Error::Config("point set must be nonempty".into()));
        }
        if coords.len() % dim != 0 {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            )));
        }
        if let Some(p) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { row: p / dim, col: p % dim });
        }
        Ok(Self { dim, coords })
    }

    pub fn from_points(points: &[Vec<f64>]) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        if let Some(bad) = points.iter().position(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "point {bad} has {} coordinates, expected {dim}",
                points[bad].len()
            )));
        }
        Self::new(dim, points.concat())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Smallest Euclidean distance between a point of `self` and one of `other`,
    /// with the indices attaining it.
    pub fn min_cross_distance(&self, other: &PointSet) -> (f64, usize, usize) {
        let mut best = (f64::INFINITY, 0, 0);
        for (i, p) in self.iter().enumerate() {
            for (j, q) in other.iter().enumerate() {
                let d2: f64 = p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
                if d2 < best.0 {
                    best = (d2, i, j);
                }
            }
        }
        (best.0.sqrt(), best.1, best.2)
    }

    /// Largest distance from the origin.
    pub fn max_norm(&self) -> f64 {
        self.iter()
            .map(|p| p.iter().map(|c| c * c).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    /// Component-wise `(min, max)` over all points.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for p in self.iter() {
            for (k, &c) in p.iter().enumerate() {
                lo[k] = lo[k].min(c);
                hi[k] = hi[k].max(c);
            }
        }
        (lo, hi)
    }

    /// Parses one point per line; blank lines and lines starting with `#` are skipped.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut dim = None;
        let mut coords = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut count = 0;
            for field in line.split(',') {
                let v: f64 = field.trim().parse().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    msg: format!("non-numeric field {:?}", field.trim()),
                })?;
                if !v.is_finite() {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: format!("non-finite value {v}"),
                    });
                }
                coords.push(v);
                count += 1;
            }
            match dim {
                None => dim = Some(count),
                Some(d) if d != count => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: format!("expected {d} fields, found {count}"),
                    })
                }
                _ => {}
            }
        }
        match dim {
            Some(d) => Self::new(d, coords),
            None => Err(Error::Parse { line: 0, msg: "no data rows".into() }),
        }
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse_csv(&std::fs::read_to_string(path)?)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for p in self.iter() {
            for (k, c) in p.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                write!(out, "{c:e}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Shifts and scales every coordinate to mean 0 and population variance 1.
    pub fn standardize(&mut self) -> Result<()> {
        let n = self.len() as f64;
        for k in 0..self.dim {
            let mean = self.iter().map(|p| p[k]).sum::<f64>() / n;
            let var = self.iter().map(|p| (p[k] - mean).powi(2)).sum::<f64>() / n;
            if !(var > 0.0) {
                return Err(Error::ZeroVariance { column: k });
            }
            let sd = var.sqrt();
            for i in 0..self.len() {
                let c = &mut self.coords[i * self.dim + k];
                *c = (*c - mean) / sd;
            }
        }
        Ok(())
    }

    /// The first `count` points.
    pub fn truncated(&self, count: usize) -> Result<Self> {
        Self::new(self.dim, self.coords[..count.min(self.len()) * self.dim].to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_with_header_and_blank_lines() {
        let p = PointSet::parse_csv("# x,y\n1,2\n\n3.5, -4e-1\n").unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.len(), 2);
        assert_eq!(p.point(1), &[3.5, -0.4]);
    }

    #[test]
    fn ragged_and_non_numeric_rows() {
        assert!(matches!(PointSet::parse_csv("1,2\n3\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(PointSet::parse_csv("1,abc\n"), Err(Error::Parse { line: 1, .. })));
        assert!(PointSet::parse_csv("# only a header\n").is_err());
    }

    #[test]
    fn standardize_two_points() {
        let mut p = PointSet::from_points(&[vec![0.0], vec![2.0]]).unwrap();
        p.standardize().unwrap();
        assert_eq!(p.coords(), &[-1.0, 1.0]);
    }

    #[test]
    fn constant_column_has_zero_variance() {
        let mut p = PointSet::from_points(&[vec![1.0, 3.0], vec![2.0, 3.0]]).unwrap();
        assert!(matches!(p.standardize(), Err(Error::ZeroVariance { column: 1 })));
    }

    #[test]
    fn csv_round_trip() {
        let p = PointSet::from_points(&[vec![0.1, -2.5e-7], vec![1e10, 3.0]]).unwrap();
        assert_eq!(PointSet::parse_csv(&p.to_csv()).unwrap(), p);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(PointSet::new(1, vec![f64::NAN]).is_err());
        assert!(PointSet::new(2, vec![1.0, 2.0, 3.0]).is_err());
    }
}
