//! Point-set generators and loaders for the test problems, and the
//! circulant-corner matrices.

mod circulant;
mod geometry;

pub use circulant::{circulant_first_col, gen_circulant_corner, Symbol};
pub use geometry::{gen_airfoil_like, gen_fem_grid, gen_flower, gen_set3d, FLOWER_GAP, FLOWER_HALF_ARC};

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::kernel::PointSet;

#[derive(Debug, Clone, PartialEq)]
pub enum DatasetKind {
    Flower,
    FemGrid,
    AirfoilLike,
    Set3D,
    CirculantCorner,
    CsvFile(PathBuf),
}

impl DatasetKind {
    /// `(|x|, |y|)` of the reference problems. For CSV files `x` is the first
    /// 1000 points and `y` the whole file.
    pub fn default_sizes(&self) -> (usize, usize) {
        match self {
            Self::Flower => (1018, 13965),
            Self::FemGrid => (821, 4125),
            Self::AirfoilLike => (617, 11078),
            Self::Set3D => (717, 6650),
            Self::CirculantCorner => (1024, 1024),
            Self::CsvFile(_) => (1000, usize::MAX),
        }
    }
}

impl fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Flower => f.write_str("flower"),
            Self::FemGrid => f.write_str("fem"),
            Self::AirfoilLike => f.write_str("airfoil"),
            Self::Set3D => f.write_str("set3d"),
            Self::CirculantCorner => f.write_str("circulant"),
            Self::CsvFile(p) => write!(f, "csv:{}", p.display()),
        }
    }
}

impl FromStr for DatasetKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flower" => Ok(Self::Flower),
            "fem" => Ok(Self::FemGrid),
            "airfoil" => Ok(Self::AirfoilLike),
            "set3d" => Ok(Self::Set3D),
            "circulant" => Ok(Self::CirculantCorner),
            _ => match s.strip_prefix("csv:") {
                Some(p) if !p.is_empty() => Ok(Self::CsvFile(PathBuf::from(p))),
                _ => Err(Error::Config(format!(
                    "unknown dataset '{s}' (expected flower, fem, airfoil, set3d, circulant, csv:<path>)"
                ))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetParams {
    /// Set3D jitter as a fraction of the grid spacing.
    pub jitter: f64,
    pub symbol: Symbol,
    /// Standardize CSV points before use.
    pub standardize: bool,
}

impl Default for DatasetParams {
    fn default() -> Self {
        Self { jitter: 1.0, symbol: Symbol::default(), standardize: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSpec {
    pub kind: DatasetKind,
    /// `|x|`, or the order of a circulant corner.
    pub m: usize,
    /// `|y|`; ignored for circulant corners.
    pub n: usize,
    pub seed: u64,
    pub params: DatasetParams,
}

impl DatasetSpec {
    /// The reference sizes for `kind`.
    pub fn new(kind: DatasetKind) -> Self {
        let (m, n) = kind.default_sizes();
        Self { kind, m, n, seed: 0, params: DatasetParams::default() }
    }

    pub fn with_sizes(mut self, m: usize, n: usize) -> Self {
        self.m = m;
        self.n = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 {
            return Err(Error::Config(format!("dataset sizes must be positive, got {} x {}", self.m, self.n)));
        }
        if self.kind == DatasetKind::CirculantCorner && self.m < 2 {
            return Err(Error::Config("circulant corner needs order >= 2".into()));
        }
        Ok(())
    }

    pub fn is_points(&self) -> bool {
        self.kind != DatasetKind::CirculantCorner
    }

    /// The `(x, y)` point sets; circulant corners have none.
    pub fn points(&self) -> Result<(PointSet, PointSet)> {
        self.validate()?;
        let (m, n, seed) = (self.m, self.n, self.seed);
        match &self.kind {
            DatasetKind::Flower => gen_flower(m, n, seed),
            DatasetKind::FemGrid => gen_fem_grid(m, n, seed),
            DatasetKind::AirfoilLike => gen_airfoil_like(m, n, seed),
            DatasetKind::Set3D => gen_set3d(m, n, seed, self.params.jitter),
            DatasetKind::CsvFile(path) => {
                let all = load_csv_points(path, self.params.standardize)?;
                Ok((all.truncated(m)?, all.truncated(n)?))
            }
            DatasetKind::CirculantCorner => Err(Error::Config("the circulant dataset has no point sets".into())),
        }
    }
}

/// Reads points from CSV, optionally standardized per coordinate to mean 0
/// and population variance 1.
pub fn load_csv_points(path: impl AsRef<Path>, standardize: bool) -> Result<PointSet> {
    let mut p = PointSet::read_csv(path)?;
    if standardize {
        p.standardize()?;
    }
    Ok(p)
}
