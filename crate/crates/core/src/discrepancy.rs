//! Discrepancy quantities on the grid: corner volumes of binary nets, the
//! grid Lebesgue discrepancy, exact combinatorial discrepancy for small
//! sets, and the discrepancy of a fixed coloring.
//!
//! Every rectangle here has integer corners. Points sit at cell centres, so
//! these are exactly the rectangles bounded by lines through point
//! coordinates plus or minus one half, and every range's point set is
//! induced by one of them.

use std::collections::HashMap;

use num_rational::Ratio;

use crate::binary_net::BinaryNet;
use crate::error::{Error, Result};
use crate::grid::{GridPoint, GridPointSet, Rect};

/// Corner x- and y-distances of every canonical cell of a binary net.
///
/// Values are kept doubled, so distances are integers and volumes are
/// integers in units of 1/4.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CornerVolumeTable {
    n: u32,
    log_n: u32,
    x2: Vec<u32>,
    y2: Vec<u32>,
}

/// One row of a [`CornerVolumeTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CornerEntry {
    pub k: u32,
    pub i: u32,
    pub j: u32,
    pub x: Ratio<u64>,
    pub y: Ratio<u64>,
    pub volume: Ratio<u64>,
}

impl CornerVolumeTable {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn log_n(&self) -> u32 {
        self.log_n
    }

    fn slot(&self, k: u32, i: u32, j: u32) -> usize {
        debug_assert!(k <= self.log_n && i < self.n >> k && j < 1 << k);
        k as usize * self.n as usize + ((i as usize) << k) + j as usize
    }

    pub fn x(&self, k: u32, i: u32, j: u32) -> Ratio<u64> {
        Ratio::new(u64::from(self.x2[self.slot(k, i, j)]), 2)
    }

    pub fn y(&self, k: u32, i: u32, j: u32) -> Ratio<u64> {
        Ratio::new(u64::from(self.y2[self.slot(k, i, j)]), 2)
    }

    /// `4 V(k, i, j)`.
    pub fn volume_quarters(&self, k: u32, i: u32, j: u32) -> u64 {
        let s = self.slot(k, i, j);
        u64::from(self.x2[s]) * u64::from(self.y2[s])
    }

    pub fn volume(&self, k: u32, i: u32, j: u32) -> Ratio<u64> {
        Ratio::new(self.volume_quarters(k, i, j), 4)
    }

    /// `4 S_P`.
    pub fn sum_quarters(&self) -> u64 {
        self.x2
            .iter()
            .zip(&self.y2)
            .map(|(&x, &y)| u64::from(x) * u64::from(y))
            .sum()
    }

    pub fn entries(&self) -> impl Iterator<Item = CornerEntry> + '_ {
        (0..=self.log_n).flat_map(move |k| {
            (0..self.n >> k).flat_map(move |i| {
                (0..1u32 << k).map(move |j| CornerEntry {
                    k,
                    i,
                    j,
                    x: self.x(k, i, j),
                    y: self.y(k, i, j),
                    volume: self.volume(k, i, j),
                })
            })
        })
    }
}

/// Doubled distance from a centre at `offset + 1/2` to the nearer end of
/// `[0, side)`. Side-1 cells give 1 (distance 1/2) either way.
fn near_side2(offset: u32, side: u32) -> u32 {
    (2 * offset + 1).min(2 * side - 2 * offset - 1)
}

pub fn corner_volumes(net: &BinaryNet) -> CornerVolumeTable {
    let n = net.n();
    let log_n = net.log_n();
    let cells = n as usize * (log_n as usize + 1);
    let mut x2 = vec![0; cells];
    let mut y2 = vec![0; cells];
    for k in 0..=log_n {
        let (w, h) = (1u32 << k, n >> k);
        for q in net.points() {
            let (i, j) = (q.x >> k, q.y / h);
            let s = k as usize * n as usize + ((i as usize) << k) + j as usize;
            x2[s] = near_side2(q.x - i * w, w);
            y2[s] = near_side2(q.y - j * h, h);
        }
    }
    CornerVolumeTable { n, log_n, x2, y2 }
}

/// `S_P`, summed over levels `0..=log n`.
pub fn corner_volume_sum(net: &BinaryNet) -> Ratio<u64> {
    Ratio::new(corner_volumes(net).sum_quarters(), 4)
}

/// Rational lower bound on `e` used by [`corner_sum_bound_holds`].
const E_LOWER: (u128, u128) = (2_718_281_828, 1_000_000_000);

/// Whether `S_P >= n^2 log n / (16 e)`. The comparison uses a rational lower
/// bound on `e`, which only makes the right side larger.
pub fn corner_sum_bound_holds(table: &CornerVolumeTable) -> bool {
    let (num, den) = E_LOWER;
    let lhs = 4 * num * u128::from(table.sum_quarters());
    let n = u128::from(table.n);
    lhs >= n * n * u128::from(table.log_n) * den
}

/// `sum |V_1(k, i, j) - V_2(k, i, j)|` over all canonical cells.
pub fn corner_volume_distance(a: &BinaryNet, b: &BinaryNet) -> Result<Ratio<u64>> {
    Ok(Ratio::new(
        corner_distance_quarters(&corner_volumes(a), &corner_volumes(b))?,
        4,
    ))
}

/// `4 Δ` between two tables.
pub fn corner_distance_quarters(a: &CornerVolumeTable, b: &CornerVolumeTable) -> Result<u64> {
    if a.n != b.n {
        return Err(Error::param(format!(
            "nets of size {} and {} differ",
            a.n, b.n
        )));
    }
    Ok(a.x2
        .iter()
        .zip(&a.y2)
        .zip(b.x2.iter().zip(&b.y2))
        .map(|((&xa, &ya), (&xb, &yb))| {
            (u64::from(xa) * u64::from(ya)).abs_diff(u64::from(xb) * u64::from(yb))
        })
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LebesgueReport {
    /// `max |count(R) - |P| area(R) / n^2|`.
    pub value: Ratio<u64>,
    pub witness: Rect,
    pub count: usize,
}

/// Grid Lebesgue discrepancy: the expected count of a rectangle is
/// `|P| area / n^2`. `O(n^3)`.
pub fn lebesgue_discrepancy(p: &GridPointSet) -> LebesgueReport {
    let n = p.n() as usize;
    let total = p.len() as i64;
    let n2 = (n * n) as i64;
    let mut by_col: Vec<Vec<u32>> = vec![Vec::new(); n];
    for q in p.points() {
        by_col[q.x as usize].push(q.y);
    }

    let mut best = (-1i64, Rect::two_sided(0, 0));
    let mut rows = vec![0i64; n];
    for x1 in 0..n {
        rows.fill(0);
        for x2 in x1 + 1..=n {
            for &y in &by_col[x2 - 1] {
                rows[y as usize] += 1;
            }
            let slope = total * (x2 - x1) as i64;
            // g(y) = n^2 C(y) - |P| width y, with C the count below y
            let (mut lo, mut hi) = ((0i64, 0usize), (0i64, 0usize));
            let mut c = 0i64;
            for y in 1..=n {
                c += rows[y - 1];
                let g = n2 * c - slope * y as i64;
                if g < lo.0 {
                    lo = (g, y);
                }
                if g > hi.0 {
                    hi = (g, y);
                }
            }
            let gap = hi.0 - lo.0;
            if gap > best.0 {
                let (y_lo, y_hi) = (lo.1.min(hi.1), lo.1.max(hi.1));
                let rect = Rect {
                    x_lo: x1 as u32,
                    x_hi: x2 as u32,
                    y_lo: y_lo as u32,
                    y_hi: y_hi as u32,
                };
                best = (gap, rect);
            }
        }
    }
    let witness = best.1;
    LebesgueReport {
        value: Ratio::new(best.0.max(0) as u64, n2 as u64),
        witness,
        count: crate::grid::count_in_rect(p, &witness),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringReport {
    pub value: u32,
    /// `+1` or `-1` per point, in the input order.
    pub coloring: Vec<i8>,
    pub witness: Rect,
}

/// Default size limit for [`combinatorial_discrepancy_exact`].
pub const EXACT_MAX_POINTS: usize = 22;

/// Distinct nonempty point subsets cut out by rectangles, as bit masks over
/// the input order, each with its tight bounding rectangle.
pub fn rectangle_subsets(p: &GridPointSet) -> Vec<(u64, Rect)> {
    let pts = p.points();
    assert!(pts.len() <= 64, "subset masks hold at most 64 points");
    let mut xs: Vec<u32> = pts.iter().map(|q| q.x).collect();
    let mut ys: Vec<u32> = pts.iter().map(|q| q.y).collect();
    xs.sort_unstable();
    xs.dedup();
    ys.sort_unstable();
    ys.dedup();

    let mut seen: HashMap<u64, Rect> = HashMap::new();
    for (a, &xa) in xs.iter().enumerate() {
        for &xb in &xs[a..] {
            for (c, &yc) in ys.iter().enumerate() {
                for &yd in &ys[c..] {
                    let rect = Rect {
                        x_lo: xa,
                        x_hi: xb + 1,
                        y_lo: yc,
                        y_hi: yd + 1,
                    };
                    let mask = pts
                        .iter()
                        .enumerate()
                        .filter(|(_, &q)| rect.contains(q))
                        .fold(0u64, |m, (i, _)| m | 1 << i);
                    if mask != 0 {
                        seen.entry(mask).or_insert(rect);
                    }
                }
            }
        }
    }
    let mut out: Vec<(u64, Rect)> = seen.into_iter().collect();
    // small ranges first: they reject most colorings quickly
    out.sort_by_key(|&(m, r)| (m.count_ones(), m, r));
    out
}

fn imbalance(mask: u64, plus: u64) -> u32 {
    (2 * (mask & plus).count_ones()).abs_diff(mask.count_ones())
}

/// `min over colorings of max over rectangles |chi(P ∩ R)|`, by exhaustive
/// search over colorings with the first point fixed to `+1` (a coloring and
/// its negation have the same discrepancy), abandoning a coloring as soon as
/// some range reaches the best value found so far.
pub fn combinatorial_discrepancy_exact(
    p: &GridPointSet,
    max_points: usize,
) -> Result<ColoringReport> {
    let len = p.len();
    let limit = max_points.min(63);
    if len > limit {
        return Err(Error::param(format!(
            "exact discrepancy is limited to {limit} points, got {len}"
        )));
    }
    if len == 0 {
        return Ok(ColoringReport {
            value: 0,
            coloring: Vec::new(),
            witness: Rect::two_sided(0, 0),
        });
    }
    let subsets = rectangle_subsets(p);
    let mut best_value = u32::MAX;
    let mut best_plus = 0u64;
    for free in 0u64..1 << (len - 1) {
        let plus = (free << 1) | 1;
        let mut worst = 0;
        for &(mask, _) in &subsets {
            worst = worst.max(imbalance(mask, plus));
            if worst >= best_value {
                break;
            }
        }
        if worst < best_value {
            best_value = worst;
            best_plus = plus;
        }
    }
    let witness = subsets
        .iter()
        .find(|&&(mask, _)| imbalance(mask, best_plus) == best_value)
        .map(|&(_, r)| r)
        .expect("some range attains the maximum");
    Ok(ColoringReport {
        value: best_value,
        coloring: (0..len)
            .map(|i| if best_plus >> i & 1 == 1 { 1 } else { -1 })
            .collect(),
        witness,
    })
}

/// Maximum over rectangles of `|sum of weights inside|`, with a maximizing
/// rectangle. `O(n^2 log n + n |points| log n)`.
pub fn max_weighted_rect(n: u32, points: &[(GridPoint, i32)]) -> (u64, Rect) {
    let n = n as usize;
    let mut by_col: Vec<Vec<(u32, i32)>> = vec![Vec::new(); n];
    for &(q, w) in points {
        by_col[q.x as usize].push((q.y, w));
    }
    let mut tree = PrefixTree::new(n);
    let mut best = (0u64, Rect::two_sided(0, 0));
    for x1 in 0..n {
        tree.clear();
        for x2 in x1 + 1..=n {
            if by_col[x2 - 1].is_empty() {
                continue;
            }
            for &(y, w) in &by_col[x2 - 1] {
                tree.add(y as usize, i64::from(w));
            }
            let (gap, a, b) = tree.widest();
            if gap > best.0 {
                best = (
                    gap,
                    Rect {
                        x_lo: x1 as u32,
                        x_hi: x2 as u32,
                        y_lo: a as u32,
                        y_hi: b as u32,
                    },
                );
            }
        }
    }
    best
}

/// Discrepancy of a fixed `+1/-1` coloring of `p`.
pub fn coloring_discrepancy(p: &GridPointSet, coloring: &[i8]) -> Result<(u64, Rect)> {
    if coloring.len() != p.len() {
        return Err(Error::param("one color per point is required"));
    }
    let weighted: Vec<(GridPoint, i32)> = p
        .points()
        .iter()
        .zip(coloring)
        .map(|(&q, &c)| (q, i32::from(c)))
        .collect();
    Ok(max_weighted_rect(p.n(), &weighted))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnionReport {
    /// `max |(|R ∩ P1| - |R ∩ P2|)|`.
    pub value: u64,
    pub witness: Rect,
}

/// Discrepancy of `P1 ∪ P2` under the coloring `+1` on `P1`, `-1` on `P2`.
pub fn union_discrepancy(p1: &GridPointSet, p2: &GridPointSet) -> Result<UnionReport> {
    if p1.n() != p2.n() {
        return Err(Error::param(format!(
            "grids of side {} and {} differ",
            p1.n(),
            p2.n()
        )));
    }
    let weighted: Vec<(GridPoint, i32)> = p1
        .points()
        .iter()
        .map(|&q| (q, 1))
        .chain(p2.points().iter().map(|&q| (q, -1)))
        .collect();
    let (value, witness) = max_weighted_rect(p1.n(), &weighted);
    Ok(UnionReport { value, witness })
}

/// Segment tree over row weights keeping, per node, the sum and the extreme
/// nonempty prefix sums with their (first) end positions.
struct PrefixTree {
    size: usize,
    sum: Vec<i64>,
    max: Vec<(i64, usize)>,
    min: Vec<(i64, usize)>,
}

impl PrefixTree {
    fn new(len: usize) -> Self {
        let size = len.next_power_of_two();
        let mut t = PrefixTree {
            size,
            sum: vec![0; 2 * size],
            max: vec![(0, 0); 2 * size],
            min: vec![(0, 0); 2 * size],
        };
        t.clear();
        t
    }

    fn clear(&mut self) {
        self.sum.fill(0);
        for leaf in 0..self.size {
            self.max[self.size + leaf] = (0, leaf + 1);
            self.min[self.size + leaf] = (0, leaf + 1);
        }
        for v in (1..self.size).rev() {
            self.pull(v);
        }
    }

    fn pull(&mut self, v: usize) {
        let (l, r) = (2 * v, 2 * v + 1);
        let shift = self.sum[l];
        self.sum[v] = shift + self.sum[r];
        let right_max = (shift + self.max[r].0, self.max[r].1);
        self.max[v] = if right_max.0 > self.max[l].0 {
            right_max
        } else {
            self.max[l]
        };
        let right_min = (shift + self.min[r].0, self.min[r].1);
        self.min[v] = if right_min.0 < self.min[l].0 {
            right_min
        } else {
            self.min[l]
        };
    }

    fn add(&mut self, pos: usize, w: i64) {
        let mut v = self.size + pos;
        self.sum[v] += w;
        self.max[v].0 = self.sum[v];
        self.min[v].0 = self.sum[v];
        while v > 1 {
            v /= 2;
            self.pull(v);
        }
    }

    /// Largest `|prefix(b) - prefix(a)|` over `0 <= a < b`, as `(value, a, b)`.
    fn widest(&self) -> (u64, usize, usize) {
        let (hi, hi_at) = if self.max[1].0 > 0 {
            self.max[1]
        } else {
            (0, 0)
        };
        let (lo, lo_at) = if self.min[1].0 < 0 {
            self.min[1]
        } else {
            (0, 0)
        };
        ((hi - lo) as u64, hi_at.min(lo_at), hi_at.max(lo_at))
    }
}
