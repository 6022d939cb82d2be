//! Uniform cell-centered structured grids in one to three dimensions.
//!
//! Cells are stored in row-major order over the axes `(x, y, z)`: the last
//! active axis varies fastest. Cell `i` along an axis has its center at
//! `(i + 1/2) * spacing`, so the domain faces sit at `0` and `length`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const AXIS_NAMES: [&str; 3] = ["x", "y", "z"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    dims: usize,
    lengths: [f64; 3],
    cells: [usize; 3],
    spacing: [f64; 3],
}

impl GridSpec {
    pub fn new(lengths: &[f64], cells: &[usize]) -> Result<Self> {
        let dims = lengths.len();
        if !(1..=3).contains(&dims) {
            return Err(Error::invalid("grid.dims", format!("must be 1, 2 or 3, got {dims}")));
        }
        if cells.len() != dims {
            return Err(Error::invalid(
                "grid.cells",
                format!("expected {dims} entries, got {}", cells.len()),
            ));
        }
        let mut grid = GridSpec {
            dims,
            lengths: [1.0; 3],
            cells: [1; 3],
            spacing: [1.0; 3],
        };
        for axis in 0..dims {
            let (length, count) = (lengths[axis], cells[axis]);
            if !(length.is_finite() && length > 0.0) {
                return Err(Error::invalid(
                    format!("grid.lengths_m[{axis}]"),
                    format!("must be > 0, got {length}"),
                ));
            }
            if count < 2 {
                return Err(Error::invalid(
                    format!("grid.cells[{axis}]"),
                    format!("must be >= 2, got {count}"),
                ));
            }
            grid.lengths[axis] = length;
            grid.cells[axis] = count;
            grid.spacing[axis] = length / count as f64;
        }
        Ok(grid)
    }

    pub fn line(length: f64, cells: usize) -> Result<Self> {
        GridSpec::new(&[length], &[cells])
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths[..self.dims]
    }

    pub fn cell_counts(&self) -> &[usize] {
        &self.cells[..self.dims]
    }

    pub fn spacings(&self) -> &[f64] {
        &self.spacing[..self.dims]
    }

    pub fn length(&self, axis: usize) -> f64 {
        self.lengths[axis]
    }

    pub fn cells(&self, axis: usize) -> usize {
        self.cells[axis]
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.spacing[axis]
    }

    pub fn len(&self) -> usize {
        self.cells.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Volume of one cell. Absent axes count as one metre, so a 1-D grid
    /// describes a column of unit cross-section.
    pub fn cell_volume(&self) -> f64 {
        self.spacings().iter().product()
    }

    /// Sum over active axes of 1/Δ².
    pub fn inverse_spacing_sq_sum(&self) -> f64 {
        self.spacings().iter().map(|d| 1.0 / (d * d)).sum()
    }

    pub(crate) fn strides(&self) -> [usize; 3] {
        [self.cells[1] * self.cells[2], self.cells[2], 1]
    }

    pub fn index(&self, ijk: [usize; 3]) -> usize {
        let s = self.strides();
        ijk[0] * s[0] + ijk[1] * s[1] + ijk[2] * s[2]
    }

    pub fn coords(&self, index: usize) -> [usize; 3] {
        let s = self.strides();
        [index / s[0], (index % s[0]) / s[1], index % s[1]]
    }

    pub fn center(&self, axis: usize, i: usize) -> f64 {
        (i as f64 + 0.5) * self.spacing[axis]
    }

    /// Box of cells whose centers lie in the half-open interval `[lo, hi)` on
    /// every active axis. `field` names the config entry for error messages.
    pub fn cell_box(&self, lo: &[f64], hi: &[f64], field: &str) -> Result<CellBox> {
        if lo.len() != self.dims || hi.len() != self.dims {
            return Err(Error::invalid(
                field,
                format!("region needs {} lower and upper bounds", self.dims),
            ));
        }
        let mut out = CellBox {
            lo: [0; 3],
            hi: [1; 3],
        };
        for axis in 0..self.dims {
            let (a, b) = (lo[axis], hi[axis]);
            if !(a.is_finite() && b.is_finite()) || a >= b {
                return Err(Error::invalid(field, format!("empty or non-finite interval [{a}, {b})")));
            }
            if a < 0.0 || b > self.lengths[axis] * (1.0 + 1e-12) {
                return Err(Error::invalid(
                    field,
                    format!("interval [{a}, {b}) leaves the grid on axis {}", AXIS_NAMES[axis]),
                ));
            }
            let d = self.spacing[axis];
            // first center >= a, first center >= b
            let first = ((a / d) - 0.5).ceil().max(0.0) as usize;
            let last = (((b / d) - 0.5).ceil().max(0.0) as usize).min(self.cells[axis]);
            out.lo[axis] = first.min(self.cells[axis]);
            out.hi[axis] = last;
        }
        Ok(out)
    }

    pub fn full_box(&self) -> CellBox {
        CellBox {
            lo: [0; 3],
            hi: self.cells,
        }
    }
}

/// Half-open box of cell indices `lo[a] <= i < hi[a]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellBox {
    pub lo: [usize; 3],
    pub hi: [usize; 3],
}

impl CellBox {
    pub fn contains(&self, ijk: [usize; 3]) -> bool {
        (0..3).all(|a| self.lo[a] <= ijk[a] && ijk[a] < self.hi[a])
    }

    pub fn is_empty(&self) -> bool {
        (0..3).any(|a| self.lo[a] >= self.hi[a])
    }

    pub fn fits(&self, grid: &GridSpec) -> bool {
        (0..3).all(|a| self.hi[a] <= grid.cells(a))
    }

    pub fn cell_count(&self) -> usize {
        (0..3).map(|a| self.hi[a].saturating_sub(self.lo[a])).product()
    }
}

/// One of the six faces of the domain box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Face {
    XMin,
    XMax,
    YMin,
    YMax,
    ZMin,
    ZMax,
}

impl Face {
    pub const ALL: [Face; 6] = [Face::XMin, Face::XMax, Face::YMin, Face::YMax, Face::ZMin, Face::ZMax];

    pub fn axis(self) -> usize {
        self as usize / 2
    }

    pub fn is_max(self) -> bool {
        self as usize % 2 == 1
    }

    pub fn of(axis: usize, is_max: bool) -> Face {
        Face::ALL[axis * 2 + is_max as usize]
    }

    pub fn name(self) -> &'static str {
        ["x-", "x+", "y-", "y+", "z-", "z+"][self as usize]
    }

    /// Faces that bound a grid of `dims` dimensions.
    pub fn active(dims: usize) -> &'static [Face] {
        &Face::ALL[..2 * dims]
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Face {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Face::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::invalid("faces", format!("unknown face `{s}` (expected x-, x+, y-, y+, z-, z+)")))
    }
}
