//! The range-counting sketch: an ε-net plus one indicator bit per net point
//! and dyadic level.
//!
//! Net points `u_0, ..., u_{m-1}` are sorted by `(x, y)`. Level `l` (for
//! `1 <= l <= L`, `L = max(1, ceil(log2 m))`) groups them into aligned runs of
//! `2^(l-1)` consecutive net points; run `a` spans the vertical slab
//! `[x(u_{a 2^(l-1)}), x(u_{(a+1) 2^(l-1)}))`, the last slab ending at the grid
//! border. Within each slab the points of `P` are sorted by `y` and cut into
//! chunks of `c = ceil(eps' n)` points, and the lowest net point of each chunk
//! gets its level-`l` bit set. A two-sided query adds `c` for every set bit
//! below the query height in the slabs that tile the query's x-prefix.

use bitvec::prelude::*;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::epsnet::{self, EpsNet};
use crate::error::{Error, Result};
use crate::grid::{ceil_log2, count_in_rect, GridPoint, GridPointSet, Rect};
use crate::ratio::{self, Eps};

pub const MAGIC: &[u8; 4] = b"RSK1";
pub const VERSION: u16 = 1;
/// magic + version + n + eps + eps' + m
pub const HEADER_BYTES: usize = 4 + 2 + 8 + 8 + 8 + 4;
pub const CHECKSUM_BYTES: usize = 4;
/// Fixed bits per sketch: the header fields plus the trailing CRC-32.
pub const FIXED_BITS: u64 = ((HEADER_BYTES + CHECKSUM_BYTES) * 8) as u64;

/// Indicator levels for a net of `m` points.
pub fn levels_for(m: usize) -> u32 {
    if m == 0 {
        0
    } else {
        ceil_log2(m as u64).max(1)
    }
}

/// Aligned runs `(level, index)` whose union is net points `0..j`, largest first.
pub fn decompose_prefix(levels: u32, j: usize) -> Vec<(u32, usize)> {
    let mut out = Vec::new();
    let mut covered = 0;
    for level in (1..=levels).rev() {
        let w = 1usize << (level - 1);
        while covered + w <= j {
            out.push((level, covered / w));
            covered += w;
        }
    }
    debug_assert_eq!(covered, j);
    out
}

/// Longest prefix decomposition over all `j <= m`.
pub fn max_slabs(m: usize) -> usize {
    let levels = levels_for(m);
    (0..=m)
        .map(|j| decompose_prefix(levels, j).len())
        .max()
        .unwrap_or(0)
}

/// `eps / (4 (s + 1))`: with at most `s` slabs per prefix, four two-sided
/// estimates each off by less than `(s + 1) eps' n` stay within `eps n`.
pub fn internal_eps(eps: Eps, slabs: usize) -> Result<Eps> {
    let scale = 4 * (slabs as u64 + 1);
    let denom = u64::from(*eps.denom()) * scale;
    let denom = u32::try_from(denom).map_err(|_| Error::param("eps too small to represent"))?;
    Ok(Eps::new(*eps.numer(), denom))
}

/// One dyadic slab: net points `first..end` at `level`, covering columns
/// `x_lo..x_hi`. Slabs whose boundary net points share a column are empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicSlab {
    pub level: u32,
    pub index: usize,
    pub first: usize,
    pub end: usize,
    pub x_lo: u32,
    pub x_hi: u32,
}

impl DyadicSlab {
    pub fn rect(&self, y_cap: u32) -> Rect {
        Rect {
            x_lo: self.x_lo,
            x_hi: self.x_hi.max(self.x_lo),
            y_lo: 0,
            y_hi: y_cap,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sketch {
    n: u32,
    eps: Eps,
    eps_internal: Eps,
    coords: Vec<GridPoint>,
    levels: u32,
    indicators: BitVec<u8, Lsb0>,
    // sorted y of set indicators, per level and slab
    marked: Vec<Vec<Vec<u32>>>,
}

/// Bit accounting of the serialized form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeReport {
    pub fixed_bits: u64,
    pub coordinate_bits: u64,
    pub indicator_bits: u64,
    pub padding_bits: u64,
    pub total_bytes: usize,
}

impl SizeReport {
    /// Header, coordinates and indicators, without byte padding.
    pub fn payload_bits(&self) -> u64 {
        self.fixed_bits + self.coordinate_bits + self.indicator_bits
    }
}

/// `FIXED_BITS + m * 2 ceil(log n) + m * levels`.
pub fn formula_bits(n: u32, m: usize) -> u64 {
    let m64 = m as u64;
    FIXED_BITS + m64 * 2 * u64::from(ceil_log2(u64::from(n))) + m64 * u64::from(levels_for(m))
}

/// Builds a sketch answering four-sided queries within `eps * n`.
///
/// The internal parameter `eps'` depends on the net size, which depends on
/// `eps'`; starting from the net size implied by `eps`, the net is rebuilt
/// until its slab count no longer exceeds the one `eps'` was computed for.
pub fn build_sketch(p: &GridPointSet, eps: Eps, seed: u64) -> Result<Sketch> {
    ratio::check_eps(eps)?;
    let n = p.n();
    let len = p.len();
    if len == 0 {
        return Sketch::from_parts(n, eps, internal_eps(eps, 0)?, Vec::new(), BitVec::new());
    }

    let mut m_est = epsnet::sample_size(ratio::to_f64(eps))
        .min(len)
        .next_power_of_two()
        .min(len);
    let (net, eps_internal) = loop {
        let slabs = max_slabs(m_est);
        let eps_i = internal_eps(eps, slabs)?;
        let threshold = ratio::ceil_mul(eps_i, u64::from(n)).max(1) as usize;
        let size_eps = (ratio::to_f64(eps_i) * f64::from(n) / len as f64).min(1.0);
        let net = epsnet::build_net_with(p, size_eps, threshold, eps_i, seed)?;
        if max_slabs(net.len()) <= slabs {
            break (net, eps_i);
        }
        m_est = net.len();
    };

    let indicators = assign_indicators(p, &net, n, chunk_size(eps_internal, n))?;
    Sketch::from_parts(n, eps, eps_internal, net.points().to_vec(), indicators)
}

fn chunk_size(eps_internal: Eps, n: u32) -> u64 {
    ratio::ceil_mul(eps_internal, u64::from(n)).max(1)
}

fn slab_bounds(coords: &[GridPoint], n: u32, level: u32, index: usize) -> DyadicSlab {
    let w = 1usize << (level - 1);
    let first = index * w;
    let end = (first + w).min(coords.len());
    DyadicSlab {
        level,
        index,
        first,
        end,
        x_lo: coords[first].x,
        x_hi: if end == coords.len() {
            n
        } else {
            coords[end].x
        },
    }
}

fn slab_count(m: usize, level: u32) -> usize {
    m.div_ceil(1usize << (level - 1))
}

fn assign_indicators(
    p: &GridPointSet,
    net: &EpsNet,
    n: u32,
    chunk: u64,
) -> Result<BitVec<u8, Lsb0>> {
    let m = net.len();
    let levels = levels_for(m);
    let pts = p.points();
    let mut row_of = vec![usize::MAX; pts.len()];
    for (row, &e) in net.members().iter().enumerate() {
        row_of[e] = row;
    }
    let by_x = epsnet::sorted_order(p);
    let chunk = usize::try_from(chunk).unwrap_or(usize::MAX);

    let mut bits = bitvec![u8, Lsb0; 0; m * levels as usize];
    for level in 1..=levels {
        for index in 0..slab_count(m, level) {
            let slab = slab_bounds(net.points(), n, level, index);
            if slab.x_lo >= slab.x_hi {
                continue;
            }
            let lo = by_x.partition_point(|&e| pts[e].x < slab.x_lo);
            let hi = by_x.partition_point(|&e| pts[e].x < slab.x_hi);
            let mut members = by_x[lo..hi].to_vec();
            members.sort_by_key(|&e| (pts[e].y, pts[e].x, e));
            for (ci, group) in members.chunks(chunk).enumerate() {
                match group.iter().find(|&&e| row_of[e] != usize::MAX) {
                    Some(&e) => bits.set(row_of[e] * levels as usize + (level as usize - 1), true),
                    None if group.len() == chunk => {
                        return Err(Error::NetViolation {
                            level,
                            slab: index,
                            chunk: ci,
                        })
                    }
                    None => {}
                }
            }
        }
    }
    Ok(bits)
}

impl Sketch {
    fn from_parts(
        n: u32,
        eps: Eps,
        eps_internal: Eps,
        coords: Vec<GridPoint>,
        indicators: BitVec<u8, Lsb0>,
    ) -> Result<Self> {
        let m = coords.len();
        let levels = levels_for(m);
        debug_assert_eq!(indicators.len(), m * levels as usize);
        let mut marked = Vec::with_capacity(levels as usize);
        for level in 1..=levels {
            let mut per_slab = Vec::with_capacity(slab_count(m, level));
            for index in 0..slab_count(m, level) {
                let slab = slab_bounds(&coords, n, level, index);
                let lo = coords.partition_point(|u| u.x < slab.x_lo);
                let hi = coords.partition_point(|u| u.x < slab.x_hi);
                let mut ys: Vec<u32> = (lo..hi.max(lo))
                    .filter(|&row| indicators[row * levels as usize + (level as usize - 1)])
                    .map(|row| coords[row].y)
                    .collect();
                ys.sort_unstable();
                per_slab.push(ys);
            }
            marked.push(per_slab);
        }
        Ok(Sketch {
            n,
            eps,
            eps_internal,
            coords,
            levels,
            indicators,
            marked,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn eps(&self) -> Eps {
        self.eps
    }

    pub fn eps_internal(&self) -> Eps {
        self.eps_internal
    }

    /// Net size `m`.
    pub fn m(&self) -> usize {
        self.coords.len()
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    /// Weight added per set indicator, `ceil(eps' n)`.
    pub fn chunk(&self) -> u64 {
        chunk_size(self.eps_internal, self.n)
    }

    pub fn net_points(&self) -> &[GridPoint] {
        &self.coords
    }

    /// Indicator bit of net point `row` at `level` (1-based).
    pub fn indicator(&self, row: usize, level: u32) -> bool {
        self.indicators[row * self.levels as usize + (level as usize - 1)]
    }

    pub fn slab(&self, level: u32, index: usize) -> DyadicSlab {
        slab_bounds(&self.coords, self.n, level, index)
    }

    /// All slabs, level by level.
    pub fn slabs(&self) -> impl Iterator<Item = DyadicSlab> + '_ {
        (1..=self.levels).flat_map(move |level| {
            (0..slab_count(self.m(), level)).map(move |index| self.slab(level, index))
        })
    }

    /// Indicator estimate of `|P ∩ slab x [0, y_cap)|`.
    pub fn slab_estimate(&self, slab: &DyadicSlab, y_cap: u32) -> u64 {
        let ys = &self.marked[slab.level as usize - 1][slab.index];
        self.chunk() * ys.partition_point(|&y| y < y_cap) as u64
    }

    /// Slabs tiling the columns `[x(u_0), x(u_j))`, where `j` counts net points
    /// left of `qx`.
    pub fn decomposition(&self, qx: u32) -> Vec<DyadicSlab> {
        let j = self.coords.partition_point(|u| u.x < qx);
        decompose_prefix(self.levels, j)
            .into_iter()
            .map(|(level, index)| self.slab(level, index))
            .collect()
    }

    /// Estimate of `|P ∩ [0, qx) x [0, qy)|`.
    pub fn query_two_sided(&self, qx: u32, qy: u32) -> Result<u64> {
        if qx > self.n || qy > self.n {
            return Err(Error::param(format!(
                "query ({qx}, {qy}) outside [0, {}]^2",
                self.n
            )));
        }
        if qx == 0 || qy == 0 {
            return Ok(0);
        }
        Ok(self
            .decomposition(qx)
            .iter()
            .map(|s| self.slab_estimate(s, qy))
            .sum())
    }

    /// Estimate of `|P ∩ r|` by inclusion-exclusion over four dominance ranges.
    pub fn query_four_sided(&self, r: &Rect) -> Result<i64> {
        if !r.within(self.n) {
            return Err(Error::param(format!("rectangle {r} exceeds the grid")));
        }
        let q = |x, y| self.query_two_sided(x, y).map(|v| v as i64);
        Ok(q(r.x_hi, r.y_hi)? - q(r.x_lo, r.y_hi)? - q(r.x_hi, r.y_lo)? + q(r.x_lo, r.y_lo)?)
    }

    /// `(S + 1) eps' n` with `S` the longest slab decomposition: the bound on
    /// any two-sided estimate's error.
    pub fn two_sided_bound(&self) -> Ratio<u64> {
        let s = max_slabs(self.m()) as u64 + 1;
        Ratio::new(
            s * u64::from(*self.eps_internal.numer()) * u64::from(self.n),
            u64::from(*self.eps_internal.denom()),
        )
    }

    /// `eps n`, the bound on any four-sided estimate's error.
    pub fn four_sided_bound(&self) -> Ratio<u64> {
        Ratio::new(
            u64::from(*self.eps.numer()) * u64::from(self.n),
            u64::from(*self.eps.denom()),
        )
    }

    pub fn size_report(&self) -> SizeReport {
        let m = self.m() as u64;
        let coordinate_bits = m * 2 * u64::from(self.coord_bits());
        let indicator_bits = m * u64::from(self.levels);
        let body = coordinate_bits + indicator_bits;
        let padding_bits = body.next_multiple_of(8) - body;
        SizeReport {
            fixed_bits: FIXED_BITS,
            coordinate_bits,
            indicator_bits,
            padding_bits,
            total_bytes: ((FIXED_BITS + body + padding_bits) / 8) as usize,
        }
    }

    fn coord_bits(&self) -> u32 {
        ceil_log2(u64::from(self.n))
    }

    /// Serialized form: little-endian header, LSB-first packed coordinate and
    /// indicator blocks, then a CRC-32 of everything before it.
    pub fn serialize(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.size_report().total_bytes);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&u64::from(self.n).to_le_bytes());
        for e in [self.eps, self.eps_internal] {
            out.extend_from_slice(&e.numer().to_le_bytes());
            out.extend_from_slice(&e.denom().to_le_bytes());
        }
        out.extend_from_slice(&(self.m() as u32).to_le_bytes());

        let cb = self.coord_bits() as usize;
        let mut body: BitVec<u8, Lsb0> = BitVec::new();
        for u in &self.coords {
            for v in [u.x, u.y] {
                for b in 0..cb {
                    body.push((v >> b) & 1 == 1);
                }
            }
        }
        body.extend_from_bitslice(&self.indicators);
        out.extend_from_slice(body.as_raw_slice());

        let crc = crc32fast::hash(&out);
        out.extend_from_slice(&crc.to_le_bytes());
        out
    }

    pub fn deserialize(bytes: &[u8]) -> Result<Sketch> {
        if bytes.len() < HEADER_BYTES + CHECKSUM_BYTES {
            return Err(Error::Format(format!("truncated: {} bytes", bytes.len())));
        }
        if &bytes[..4] != MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let (content, tail) = bytes.split_at(bytes.len() - CHECKSUM_BYTES);
        let stored = u32::from_le_bytes(tail.try_into().expect("4 bytes"));
        let computed = crc32fast::hash(content);
        if stored != computed {
            return Err(Error::Checksum { stored, computed });
        }

        let u16_at = |o: usize| u16::from_le_bytes(content[o..o + 2].try_into().expect("2 bytes"));
        let u32_at = |o: usize| u32::from_le_bytes(content[o..o + 4].try_into().expect("4 bytes"));
        let u64_at = |o: usize| u64::from_le_bytes(content[o..o + 8].try_into().expect("8 bytes"));
        let version = u16_at(4);
        if version != VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let n = u32::try_from(u64_at(6))
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::Format("grid side out of range".into()))?;
        let read_eps = |o: usize| -> Result<Eps> {
            let (p, q) = (u32_at(o), u32_at(o + 4));
            if q == 0 {
                return Err(Error::Format("zero denominator".into()));
            }
            let e = Eps::new(p, q);
            ratio::check_eps(e).map_err(|e| Error::Format(e.to_string()))?;
            Ok(e)
        };
        let eps = read_eps(14)?;
        let eps_internal = read_eps(22)?;
        let m = u32_at(30) as usize;

        let cb = ceil_log2(u64::from(n)) as usize;
        let levels = levels_for(m) as usize;
        let coord_bits = m
            .checked_mul(2 * cb)
            .ok_or_else(|| Error::Format("net size overflow".into()))?;
        let body_bits = coord_bits + m * levels;
        let body = &content[HEADER_BYTES..];
        if body.len() != body_bits.div_ceil(8) {
            return Err(Error::Format(format!(
                "body holds {} bytes, expected {} for m = {m}",
                body.len(),
                body_bits.div_ceil(8)
            )));
        }
        let bits = body.view_bits::<Lsb0>();
        if bits[body_bits..].any() {
            return Err(Error::Format("nonzero padding bits".into()));
        }
        let read = |start: usize| -> u32 {
            (0..cb).fold(0u32, |acc, b| acc | (u32::from(bits[start + b]) << b))
        };
        let mut coords = Vec::with_capacity(m);
        for i in 0..m {
            let u = GridPoint::new(read(2 * cb * i), read(2 * cb * i + cb));
            if u.x >= n || u.y >= n {
                return Err(Error::Format(format!(
                    "net point ({}, {}) outside grid",
                    u.x, u.y
                )));
            }
            if coords.last().is_some_and(|prev: &GridPoint| *prev > u) {
                return Err(Error::Format("net points not sorted".into()));
            }
            coords.push(u);
        }
        let indicators: BitVec<u8, Lsb0> = bits[coord_bits..body_bits].to_bitvec();
        Sketch::from_parts(n, eps, eps_internal, coords, indicators)
    }
}

/// One evaluated query of an [`ErrorProfile`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProfileRow {
    pub rect: Rect,
    pub exact: u64,
    pub estimate: i64,
    pub error: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorProfile {
    pub rows: Vec<ProfileRow>,
    pub max_abs_error: u64,
    pub mean_abs_error: f64,
    pub two_sided_bound: Ratio<u64>,
    pub four_sided_bound: Ratio<u64>,
}

/// Draws `trials` four-sided rectangles with uniform integer corners and
/// compares the sketch's estimates with exact counts from `p`.
pub fn error_profile(
    s: &Sketch,
    p: &GridPointSet,
    trials: usize,
    seed: u64,
) -> Result<ErrorProfile> {
    let n = s.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(trials);
    for _ in 0..trials {
        let rect = random_rect(&mut rng, n);
        let exact = count_in_rect(p, &rect) as u64;
        let estimate = s.query_four_sided(&rect)?;
        rows.push(ProfileRow {
            rect,
            exact,
            estimate,
            error: estimate - exact as i64,
        });
    }
    let max_abs_error = rows
        .iter()
        .map(|r| r.error.unsigned_abs())
        .max()
        .unwrap_or(0);
    let mean_abs_error = if rows.is_empty() {
        0.0
    } else {
        rows.iter()
            .map(|r| r.error.unsigned_abs() as f64)
            .sum::<f64>()
            / rows.len() as f64
    };
    Ok(ErrorProfile {
        rows,
        max_abs_error,
        mean_abs_error,
        two_sided_bound: s.two_sided_bound(),
        four_sided_bound: s.four_sided_bound(),
    })
}

/// Rectangle with corners drawn uniformly from `0..=n` on each axis.
pub fn random_rect<R: Rng>(rng: &mut R, n: u32) -> Rect {
    let (a, b) = (rng.gen_range(0..=n), rng.gen_range(0..=n));
    let (c, d) = (rng.gen_range(0..=n), rng.gen_range(0..=n));
    Rect {
        x_lo: a.min(b),
        x_hi: a.max(b),
        y_lo: c.min(d),
        y_hi: c.max(d),
    }
}
