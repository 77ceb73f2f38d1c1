//! ε-nets of a point set with respect to axis-parallel rectangles.
//!
//! A subset `A` of `P` is an ε-net when every rectangle holding at least
//! `ε|P|` points of `P` also holds a point of `A`. Nets are built by random
//! sampling and then checked exactly: [`heaviest_empty_rect`] finds the
//! rectangle avoiding `A` that holds the most points of `P`, and the
//! candidate is a net iff that count stays below the threshold.

use std::collections::{BTreeSet, HashSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fenwick::Fenwick;
use crate::grid::{bounding_box, GridPoint, GridPointSet, Rect};
use crate::ratio::{self, Eps};

/// Sampling attempts before giving up: the first try plus 64 reseeded retries.
pub const MAX_ATTEMPTS: u32 = 65;

/// A verified ε-net, stored as indices into the source point set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsNet {
    eps: Eps,
    threshold: usize,
    members: Vec<usize>,
    points: Vec<GridPoint>,
}

impl EpsNet {
    pub fn eps(&self) -> Eps {
        self.eps
    }

    /// Rectangles holding at least this many points must contain a net point.
    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Indices into the source set, ordered by `(x, y, index)`.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Net points in the same order as [`members`](Self::members).
    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    /// Net file: the point-set format with an extra `eps p/q` header line.
    pub fn to_text(&self, n: u32) -> String {
        let mut out = format!("n {n}\neps {}\n", ratio::format_eps(self.eps));
        let mut pts = self.points.clone();
        pts.sort_unstable();
        for p in pts {
            out.push_str(&format!("{} {}\n", p.x, p.y));
        }
        out
    }
}

/// A rectangle that avoids a candidate net, with the number of points of
/// `P` inside it. The rectangle is the bounding box of those points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmptyRect {
    pub rect: Rect,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetCheck {
    pub threshold: usize,
    /// Heaviest rectangle avoiding the candidate, when it reaches the threshold.
    pub witness: Option<EmptyRect>,
}

impl NetCheck {
    pub fn is_net(&self) -> bool {
        self.witness.is_none()
    }
}

/// `max(1, ceil(eps * len))`. Ranges with no points never need a net point.
pub fn net_threshold(eps: Eps, len: usize) -> usize {
    (ratio::ceil_mul(eps, len as u64) as usize).max(1)
}

/// Sample size `ceil((8/eps) ln(8/eps))` used by [`build_net`].
pub fn sample_size(eps: f64) -> usize {
    let r = 8.0 / eps;
    (r * r.ln()).ceil() as usize
}

/// Checks the ε-net property of `candidate` (positions of net points) for `p`.
pub fn verify_net(p: &GridPointSet, candidate: &[GridPoint], eps: Eps) -> NetCheck {
    check_threshold(p, candidate, net_threshold(eps, p.len()))
}

pub(crate) fn check_threshold(
    p: &GridPointSet,
    candidate: &[GridPoint],
    threshold: usize,
) -> NetCheck {
    let witness = heaviest_empty_rect(p, candidate).filter(|e| e.count >= threshold);
    NetCheck { threshold, witness }
}

/// The rectangle containing no point of `blockers` that holds the most points
/// of `p`, or `None` if every point of `p` is covered by a blocker.
///
/// Every maximal empty rectangle has its left side on the grid border or just
/// right of a blocker, so the sweep fixes such a left side, moves the right
/// side across the columns, and scores a y-gap between blockers whenever a
/// new blocker closes it (or the sweep reaches the right border).
pub fn heaviest_empty_rect(p: &GridPointSet, blockers: &[GridPoint]) -> Option<EmptyRect> {
    let n = p.n();
    let covered: HashSet<GridPoint> = blockers.iter().copied().collect();
    if p.points().iter().all(|q| covered.contains(q)) {
        return None;
    }

    // compress rows to the distinct rows of P
    let mut rows: Vec<u32> = p.points().iter().map(|q| q.y).collect();
    rows.sort_unstable();
    rows.dedup();
    let row_rank = |y: u32| rows.partition_point(|&r| r < y);

    let mut events: Vec<(u32, bool, u32)> = p
        .points()
        .iter()
        .map(|q| (q.x, false, q.y))
        .chain(covered.iter().map(|a| (a.x, true, a.y)))
        .collect();
    // blockers of a column come first so gaps are scored before its points enter
    events.sort_unstable_by_key(|&(x, is_point, y)| (x, !is_point, y));

    let mut starts: Vec<u32> = std::iter::once(0)
        .chain(covered.iter().map(|a| a.x + 1).filter(|&x| x < n))
        .collect();
    starts.sort_unstable();
    starts.dedup();

    let mut fen = Fenwick::new(rows.len());
    let mut best: Option<(u32, Rect)> = None;
    let mut consider = |rect: Rect, count: u32| {
        if count > 0 && best.is_none_or(|(c, _)| count > c) {
            best = Some((count, rect));
        }
    };

    for &x1 in &starts {
        fen.clear();
        let mut blocked: BTreeSet<u32> = BTreeSet::new();
        let first = events.partition_point(|e| e.0 < x1);
        let mut idx = first;
        while idx < events.len() {
            let col = events[idx].0;
            let end = idx + events[idx..].partition_point(|e| e.0 == col);
            let split = idx + events[idx..end].partition_point(|e| e.1);
            for &(_, _, ay) in &events[idx..split] {
                if blocked.contains(&ay) {
                    continue;
                }
                let lo = blocked.range(..ay).next_back().map_or(0, |r| r + 1);
                let hi = blocked.range(ay..).next().copied().unwrap_or(n);
                let count = fen.range(row_rank(lo), row_rank(hi));
                consider(
                    Rect {
                        x_lo: x1,
                        x_hi: col,
                        y_lo: lo,
                        y_hi: hi,
                    },
                    count,
                );
            }
            for &(_, _, ay) in &events[idx..split] {
                blocked.insert(ay);
            }
            for &(_, _, y) in &events[split..end] {
                fen.add(row_rank(y), 1);
            }
            idx = end;
        }
        let mut lo = 0;
        for &r in blocked.iter().chain(std::iter::once(&n)) {
            let count = fen.range(row_rank(lo), row_rank(r));
            consider(
                Rect {
                    x_lo: x1,
                    x_hi: n,
                    y_lo: lo,
                    y_hi: r,
                },
                count,
            );
            lo = r + 1;
        }
    }

    let (count, rect) = best?;
    let tight = bounding_box(p.points().iter().copied().filter(|&q| rect.contains(q)))
        .expect("winning rectangle holds points");
    Some(EmptyRect {
        rect: tight,
        count: count as usize,
    })
}

/// Indices of `p` ordered by `(x, y, index)`.
pub(crate) fn sorted_order(p: &GridPointSet) -> Vec<usize> {
    let pts = p.points();
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by_key(|&i| (pts[i].x, pts[i].y, i));
    order
}

/// Builds a verified ε-net of `p`.
///
/// Draws `ceil((8/eps) ln(8/eps))` points without replacement, verifies, and
/// reseeds on failure. The accepted sample is padded with the smallest
/// unused points (in `(x, y, index)` order) up to a power of two, or to all
/// of `p` when it has fewer points than that.
pub fn build_net(p: &GridPointSet, eps: Eps, seed: u64) -> Result<EpsNet> {
    ratio::check_eps(eps)?;
    let threshold = net_threshold(eps, p.len());
    build_net_with(p, ratio::to_f64(eps), threshold, eps, seed)
}

/// Net construction with an explicit point threshold; `size_eps` only drives
/// the sample size.
pub(crate) fn build_net_with(
    p: &GridPointSet,
    size_eps: f64,
    threshold: usize,
    eps: Eps,
    seed: u64,
) -> Result<EpsNet> {
    let len = p.len();
    let order = sorted_order(p);
    let sample = sample_size(size_eps).min(len);
    let mut chosen = vec![false; len];
    let mut last_witness = None;
    let mut accepted = false;

    for attempt in 0..MAX_ATTEMPTS {
        chosen.fill(false);
        if sample == len {
            chosen.fill(true);
            accepted = true;
            break;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(u64::from(attempt)));
        for i in rand::seq::index::sample(&mut rng, len, sample) {
            chosen[i] = true;
        }
        let candidate: Vec<GridPoint> = (0..len)
            .filter(|&i| chosen[i])
            .map(|i| p.points()[i])
            .collect();
        let check = check_threshold(p, &candidate, threshold);
        match check.witness {
            None => {
                accepted = true;
                break;
            }
            Some(w) => last_witness = Some(w),
        }
    }
    if !accepted {
        let w = last_witness.expect("a failed attempt leaves a witness");
        return Err(Error::NetConstruction {
            attempts: MAX_ATTEMPTS,
            witness: w.rect,
            count: w.count,
        });
    }

    let target = sample.next_power_of_two().min(len);
    let mut missing = target - sample;
    for &i in &order {
        if missing == 0 {
            break;
        }
        if !chosen[i] {
            chosen[i] = true;
            missing -= 1;
        }
    }
    let members: Vec<usize> = order.into_iter().filter(|&i| chosen[i]).collect();
    let points = members.iter().map(|&i| p.points()[i]).collect();
    Ok(EpsNet {
        eps,
        threshold,
        members,
        points,
    })
}
