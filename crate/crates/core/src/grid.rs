//! Grid points, half-open rectangles and the cell families built on the
//! `n x n` grid.
//!
//! A grid point with index `(i, j)` sits at the continuous position
//! `(i + 1/2, j + 1/2)`. Rectangle corners are integers, so a rectangle
//! boundary never passes through a point and membership is a pair of
//! integer comparisons.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridPoint {
    pub x: u32,
    pub y: u32,
}

impl GridPoint {
    pub const fn new(x: u32, y: u32) -> Self {
        GridPoint { x, y }
    }
}

impl From<(u32, u32)> for GridPoint {
    fn from((x, y): (u32, u32)) -> Self {
        GridPoint { x, y }
    }
}

/// A multiset of points on the `n x n` grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridPointSet {
    n: u32,
    points: Vec<GridPoint>,
}

impl GridPointSet {
    pub fn new(n: u32, points: Vec<GridPoint>) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("grid side must be positive"));
        }
        if let Some(p) = points.iter().find(|p| p.x >= n || p.y >= n) {
            return Err(Error::OutOfGrid { x: p.x, y: p.y, n });
        }
        Ok(GridPointSet { n, points })
    }

    pub fn empty(n: u32) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    pub fn from_pairs(n: u32, pairs: &[(u32, u32)]) -> Result<Self> {
        Self::new(n, pairs.iter().copied().map(GridPoint::from).collect())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn into_points(self) -> Vec<GridPoint> {
        self.points
    }

    /// Points sorted lexicographically, the canonical order used on output.
    pub fn sorted_points(&self) -> Vec<GridPoint> {
        let mut pts = self.points.clone();
        pts.sort_unstable();
        pts
    }

    /// Bounding box `[min x, max x + 1) x [min y, max y + 1)`, or `None` when empty.
    pub fn bounding_box(&self) -> Option<Rect> {
        bounding_box(self.points.iter().copied())
    }

    /// Renders the point-set text format: a `n <n>` line followed by one
    /// `x y` line per point in sorted order.
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for p in self.sorted_points() {
            out.push_str(&format!("{} {}\n", p.x, p.y));
        }
        out
    }

    /// Parses the point-set text format. Blank lines and lines starting with
    /// `#` are skipped; any other leading `key value` header line (such as
    /// `eps 1/16` in net files) is ignored after the `n` line.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut n = None;
        let mut points = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (a, b) = match (fields.next(), fields.next(), fields.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: format!("expected two fields, got {line:?}"),
                    })
                }
            };
            let parse = |s: &str| {
                s.parse::<u32>().map_err(|e| Error::Parse {
                    line: lineno + 1,
                    msg: format!("{s:?}: {e}"),
                })
            };
            if n.is_none() {
                if a != "n" {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: "first line must be `n <side>`".into(),
                    });
                }
                n = Some(parse(b)?);
                continue;
            }
            if a.parse::<u32>().is_err() {
                // header such as `eps 1/16`
                continue;
            }
            points.push(GridPoint::new(parse(a)?, parse(b)?));
        }
        let n = n.ok_or(Error::Parse {
            line: 0,
            msg: "missing `n <side>` header".into(),
        })?;
        GridPointSet::new(n, points)
    }
}

impl FromStr for GridPointSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GridPointSet::from_text(s)
    }
}

pub(crate) fn bounding_box(points: impl IntoIterator<Item = GridPoint>) -> Option<Rect> {
    let mut it = points.into_iter();
    let first = it.next()?;
    let (mut x0, mut x1, mut y0, mut y1) = (first.x, first.x, first.y, first.y);
    for p in it {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    Some(Rect {
        x_lo: x0,
        x_hi: x1 + 1,
        y_lo: y0,
        y_hi: y1 + 1,
    })
}

/// Half-open rectangle `[x_lo, x_hi) x [y_lo, y_hi)` with integer corners.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rect {
    pub x_lo: u32,
    pub x_hi: u32,
    pub y_lo: u32,
    pub y_hi: u32,
}

impl Rect {
    pub fn new(x_lo: u32, x_hi: u32, y_lo: u32, y_hi: u32) -> Result<Self> {
        if x_lo > x_hi || y_lo > y_hi {
            return Err(Error::param(format!(
                "inverted rectangle [{x_lo},{x_hi})x[{y_lo},{y_hi})"
            )));
        }
        Ok(Rect {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
        })
    }

    /// The dominance range `[0, x) x [0, y)`.
    pub const fn two_sided(x: u32, y: u32) -> Self {
        Rect {
            x_lo: 0,
            x_hi: x,
            y_lo: 0,
            y_hi: y,
        }
    }

    pub const fn full(n: u32) -> Self {
        Rect::two_sided(n, n)
    }

    pub fn contains(&self, p: GridPoint) -> bool {
        self.x_lo <= p.x && p.x < self.x_hi && self.y_lo <= p.y && p.y < self.y_hi
    }

    pub fn area(&self) -> u64 {
        u64::from(self.x_hi - self.x_lo) * u64::from(self.y_hi - self.y_lo)
    }

    pub fn is_empty(&self) -> bool {
        self.x_lo == self.x_hi || self.y_lo == self.y_hi
    }

    pub fn within(&self, n: u32) -> bool {
        self.x_hi <= n && self.y_hi <= n
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.x_lo <= other.x_lo
            && other.x_hi <= self.x_hi
            && self.y_lo <= other.y_lo
            && other.y_hi <= self.y_hi
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{},{})x[{},{})",
            self.x_lo, self.x_hi, self.y_lo, self.y_hi
        )
    }
}

/// Identifies a cell of the grid.
///
/// `Canonical { k, i, j }` is the width-`2^k`, height-`n / 2^k` cell
/// `G_k(i, j)`; for a fixed `k` these cells tile the grid with `n` cells of
/// area `n`. `Cell { a, b, i, j }` is the general `2^a x 2^b` cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CellId {
    Canonical { k: u32, i: u32, j: u32 },
    Cell { a: u32, b: u32, i: u32, j: u32 },
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CellId::Canonical { k, i, j } => write!(f, "G_{k}({i},{j})"),
            CellId::Cell { a, b, i, j } => write!(f, "G_{{{a},{b}}}({i},{j})"),
        }
    }
}

/// `log2(n)` when `n` is a power of two.
pub fn exact_log2(n: u32) -> Option<u32> {
    n.is_power_of_two().then(|| n.trailing_zeros())
}

/// Smallest `b` with `2^b >= x` (0 for `x <= 1`).
pub fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

pub(crate) fn require_log2(n: u32) -> Result<u32> {
    exact_log2(n).ok_or_else(|| Error::param(format!("n = {n} is not a power of two")))
}

/// The half-open rectangle covered by cell `c` on the `n x n` grid.
pub fn cell_rect(c: CellId, n: u32) -> Result<Rect> {
    match c {
        CellId::Canonical { k, i, j } => {
            let log_n = require_log2(n)?;
            if k > log_n {
                return Err(Error::param(format!("level {k} exceeds log n = {log_n}")));
            }
            cell_rect(
                CellId::Cell {
                    a: k,
                    b: log_n - k,
                    i,
                    j,
                },
                n,
            )
        }
        CellId::Cell { a, b, i, j } => {
            if a >= 32 || b >= 32 {
                return Err(Error::param("cell exponent out of range"));
            }
            let (w, h) = (1u64 << a, 1u64 << b);
            let (x_lo, y_lo) = (u64::from(i) * w, u64::from(j) * h);
            let (x_hi, y_hi) = (x_lo + w, y_lo + h);
            if x_hi > u64::from(n) || y_hi > u64::from(n) {
                return Err(Error::param(format!("{c} lies outside the {n}x{n} grid")));
            }
            Ok(Rect {
                x_lo: x_lo as u32,
                x_hi: x_hi as u32,
                y_lo: y_lo as u32,
                y_hi: y_hi as u32,
            })
        }
    }
}

/// Exact number of points of `p` inside `r`, by a linear scan.
pub fn count_in_rect(p: &GridPointSet, r: &Rect) -> usize {
    p.points().iter().filter(|&&q| r.contains(q)).count()
}
