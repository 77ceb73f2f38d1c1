//! A large family of binary nets whose pairwise unions have high
//! discrepancy.
//!
//! For `k` in `{0, 6, 12, ...}` (with `k + 6 <= log n`) the cell
//! `G_{k+6, log n - k}(i, j)` is a 64 x 64 grid of `(k, log n - k - 6)`-cells
//! and holds 64 net points. The 192 partition-vector bits of levels
//! `k..k+6` inside it, in `(l, s, t)` order, are exactly the partition vector
//! of those 64 points on the virtual grid. Fixing each block to one of two
//! assignments `s1`, `s2` moves the point of `G_{k+3}(8i, 8j)` (the lower-left
//! 8 x 8 corner of the block) between a corner cell and a cell next to the
//! centre, which changes its corner volume by at least `n/8`.

use bitvec::prelude::*;
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::binary_net::{decode, encode, BinaryNet, PartitionVector};
use crate::discrepancy::{
    corner_distance_quarters, corner_volumes, union_discrepancy, UnionReport,
};
use crate::error::{Error, Result};
use crate::grid::{require_log2, GridPoint};

/// Levels spanned by one block.
pub const BLOCK_LEVELS: u32 = 6;
/// Bits per block.
pub const BLOCK_BITS: usize = 192;
/// Side of the virtual grid inside a block.
pub const VIRTUAL_SIDE: u32 = 64;

/// Block `Z_{k,i,j}`: `i < n / 2^(k+6)`, `j < 2^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockIndex {
    pub k: u32,
    pub i: u32,
    pub j: u32,
}

fn check_n(n: u32) -> Result<u32> {
    let log_n = require_log2(n)?;
    if log_n < BLOCK_LEVELS {
        return Err(Error::param(format!(
            "the hard family needs n >= 64, got {n}"
        )));
    }
    Ok(log_n)
}

/// Base levels `0, 6, 12, ...` whose block fits below `log n`.
pub fn block_levels(n: u32) -> Result<Vec<u32>> {
    let log_n = check_n(n)?;
    Ok((0..=log_n - BLOCK_LEVELS)
        .step_by(BLOCK_LEVELS as usize)
        .collect())
}

/// All blocks in `(k, i, j)` order.
pub fn blocks(n: u32) -> Result<Vec<BlockIndex>> {
    let mut out = Vec::new();
    for k in block_levels(n)? {
        for i in 0..n >> (k + BLOCK_LEVELS) {
            for j in 0..1 << k {
                out.push(BlockIndex { k, i, j });
            }
        }
    }
    Ok(out)
}

/// Number of blocks, `(n / 64) floor(log n / 6)`; equals `n log n / 384`
/// when `6 | log n`.
pub fn block_count(n: u32) -> Result<usize> {
    Ok(block_levels(n)?.len() * (n as usize / 64))
}

/// Partition-vector triples of block `b`, ordered by `(l, s, t)`:
/// `(k + l, 2^(5-l) i + s, 2^l j + t)`.
pub fn block_bit_indices(b: BlockIndex, n: u32) -> Result<Vec<(u32, u32, u32)>> {
    if blocks(n)?.binary_search(&b).is_err() {
        return Err(Error::param(format!(
            "block {b:?} does not exist for n = {n}"
        )));
    }
    let mut out = Vec::with_capacity(BLOCK_BITS);
    for l in 0..BLOCK_LEVELS {
        for s in 0..1u32 << (5 - l) {
            for t in 0..1u32 << l {
                out.push((b.k + l, (b.i << (5 - l)) + s, (b.j << l) + t));
            }
        }
    }
    Ok(out)
}

fn block_offsets(z: &PartitionVector, b: BlockIndex) -> impl Iterator<Item = usize> + '_ {
    (0..BLOCK_LEVELS).flat_map(move |l| {
        (0..1u32 << (5 - l)).flat_map(move |s| {
            (0..1u32 << l).map(move |t| z.index(b.k + l, (b.i << (5 - l)) + s, (b.j << l) + t))
        })
    })
}

/// Bits of block `b` of `z`, as a 64-point partition vector.
pub fn extract_block(z: &PartitionVector, b: BlockIndex) -> PartitionVector {
    let bits: Vec<bool> = block_offsets(z, b).map(|o| z.bit(o)).collect();
    PartitionVector::from_bits(VIRTUAL_SIDE, &bits).expect("192 bits")
}

pub fn write_block(z: &mut PartitionVector, b: BlockIndex, block: &PartitionVector) {
    let offsets: Vec<usize> = block_offsets(z, b).collect();
    for (pos, o) in offsets.into_iter().enumerate() {
        z.set_bit(o, block.bit(pos));
    }
}

/// Position on the block's virtual grid of the net point lying in the block
/// at virtual column `v`, or `None` if that column's point is outside the
/// block.
pub fn virtual_point(net: &BinaryNet, b: BlockIndex, v: u32) -> Option<GridPoint> {
    let n = net.n();
    let w = 1u32 << b.k;
    let h = n >> (b.k + BLOCK_LEVELS);
    let x0 = ((b.i << BLOCK_LEVELS) + v) << b.k;
    let y0 = b.j * (n >> b.k);
    (x0..x0 + w)
        .map(|x| GridPoint::new(x, net.row(x)))
        .find(|q| q.y >= y0 && q.y < y0 + (n >> b.k))
        .map(|q| GridPoint::new(v, (q.y - y0) / h))
}

/// Virtual position of the point of `G_{k+3}(8i, 8j)`, the block's lower-left
/// 8 x 8 corner.
pub fn tracked_point(net: &BinaryNet, b: BlockIndex) -> GridPoint {
    (0..8)
        .filter_map(|v| virtual_point(net, b, v))
        .find(|q| q.y < 8)
        .expect("a binary net has one point in every canonical cell")
}

/// How the figure's "upper" is read: rows counted from the bottom, or the
/// mirror image with rows counted from the top. Corner volumes are
/// symmetric under the reflection, so both readings give the same gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reading {
    RowsUp,
    RowsDown,
}

impl Reading {
    pub const ALL: [Reading; 2] = [Reading::RowsUp, Reading::RowsDown];

    /// Target of `s1`: the upper-left cell of the 8 x 8 corner.
    pub fn s1_target(self) -> (u32, u32) {
        match self {
            Reading::RowsUp => (0, 7),
            Reading::RowsDown => (0, 0),
        }
    }

    /// Targets for `s2`, preferred first: the cell upper-left of the centre,
    /// then the other three cells around the centre.
    pub fn s2_targets(self) -> [(u32, u32); 4] {
        match self {
            Reading::RowsUp => [(3, 4), (4, 4), (3, 3), (4, 3)],
            Reading::RowsDown => [(3, 3), (4, 3), (3, 4), (4, 4)],
        }
    }
}

/// The two block assignments and where they put the tracked point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockAssignments {
    pub reading: Reading,
    pub s1: PartitionVector,
    pub s2: PartitionVector,
    pub s1_target: (u32, u32),
    pub s2_target: (u32, u32),
}

/// Random block bits, with the six path bits of virtual column `col` forced
/// so that its point lands in virtual row `row`.
fn place_point<R: Rng>(rng: &mut R, col: u32, row: u32) -> PartitionVector {
    let mut z = PartitionVector::random(VIRTUAL_SIDE, rng).expect("64 is a power of two");
    for l in 0..BLOCK_LEVELS {
        let jl = row >> (BLOCK_LEVELS - l);
        let upper = (row >> (BLOCK_LEVELS - 1 - l)) & 1;
        z.set(l, col >> (l + 1), jl, (upper ^ ((col >> l) & 1)) == 1);
    }
    z
}

/// Quarter units of the smallest corner-volume gap that `s1`/`s2` must
/// guarantee: `4 n / 8`.
fn required_gap_quarters(n: u32) -> u64 {
    u64::from(n) / 2
}

/// Builds `s1` and `s2` for `reading` and checks them on `completions`
/// random completions of a full `n`-point vector at block `probe`. The first
/// `s2` target whose gap check passes is used.
pub fn synthesize_assignments(
    n: u32,
    probe: BlockIndex,
    reading: Reading,
    completions: usize,
    seed: u64,
) -> Result<BlockAssignments> {
    block_bit_indices(probe, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (c1, r1) = reading.s1_target();
    let s1 = place_point(&mut rng, c1, r1);
    let virtual_net = decode(&s1);
    if virtual_net.row(c1) != r1 {
        return Err(Error::Search(format!(
            "s1 misplaced: column {c1} at row {}",
            virtual_net.row(c1)
        )));
    }
    let mut tried = Vec::new();
    for (c2, r2) in reading.s2_targets() {
        let s2 = place_point(&mut rng, c2, r2);
        let candidate = BlockAssignments {
            reading,
            s1: s1.clone(),
            s2,
            s1_target: (c1, r1),
            s2_target: (c2, r2),
        };
        let gap = min_block_gap(n, &candidate, probe, completions, seed ^ 0x5eed)?;
        if gap.placed && gap.min_gap_quarters >= required_gap_quarters(n) {
            return Ok(candidate);
        }
        tried.push(format!("({c2},{r2}): gap {}/4", gap.min_gap_quarters));
    }
    Err(Error::Search(format!(
        "no s2 target reaches a gap of n/8 = {}: {}",
        Ratio::new(u64::from(n), 8),
        tried.join(", ")
    )))
}

/// Outcome of [`min_block_gap`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GapCheck {
    /// Both assignments put the tracked point on their targets in every
    /// completion.
    pub placed: bool,
    pub min_gap_quarters: u64,
}

impl GapCheck {
    pub fn min_gap(&self) -> Ratio<u64> {
        Ratio::new(self.min_gap_quarters, 4)
    }
}

/// Fills a full vector at random, sets block `b` to `s1` and then `s2`, and
/// records the smallest `|V(k+3, 8i, 8j)|` difference over `completions`
/// tries.
pub fn min_block_gap(
    n: u32,
    a: &BlockAssignments,
    b: BlockIndex,
    completions: usize,
    seed: u64,
) -> Result<GapCheck> {
    block_bit_indices(b, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut placed = true;
    let mut min_gap = u64::MAX;
    for _ in 0..completions {
        let mut z = PartitionVector::random(n, &mut rng)?;
        write_block(&mut z, b, &a.s1);
        let net1 = decode(&z);
        write_block(&mut z, b, &a.s2);
        let net2 = decode(&z);
        let t1 = tracked_point(&net1, b);
        let t2 = tracked_point(&net2, b);
        placed &= (t1.x, t1.y) == a.s1_target && (t2.x, t2.y) == a.s2_target;
        let v1 = tracked_volume_quarters(&net1, b);
        let v2 = tracked_volume_quarters(&net2, b);
        min_gap = min_gap.min(v1.abs_diff(v2));
    }
    Ok(GapCheck {
        placed,
        min_gap_quarters: if completions == 0 { 0 } else { min_gap },
    })
}

/// `4 V(k+3, 8i, 8j)` for block `b`.
pub fn tracked_volume_quarters(net: &BinaryNet, b: BlockIndex) -> u64 {
    let n = net.n();
    let k = b.k + 3;
    let (i, j) = (8 * b.i, 8 * b.j);
    let q = net.point_in_cell(k, i, j);
    let (w, h) = (1u32 << k, n >> k);
    let near = |off: u32, side: u32| u64::from((2 * off + 1).min(2 * side - 2 * off - 1));
    near(q.x - i * w, w) * near(q.y - j * h, h)
}

/// One bit per block: 0 selects `s1`, 1 selects `s2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TVector {
    bits: BitVec<u8, Msb0>,
}

impl TVector {
    pub fn zeros(len: usize) -> Self {
        TVector {
            bits: bitvec![u8, Msb0; 0; len],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        TVector {
            bits: bits.iter().copied().collect(),
        }
    }

    pub fn random<R: Rng>(len: usize, rng: &mut R) -> Self {
        TVector {
            bits: (0..len).map(|_| rng.gen::<bool>()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits.set(i, value);
    }

    pub fn hamming(&self, other: &TVector) -> usize {
        (self.bits.clone() ^ other.bits.clone()).count_ones()
    }

    /// Lowercase hex, first bit in the most significant position.
    pub fn to_hex(&self) -> String {
        hex::encode(self.bits.as_raw_slice())
    }

    pub fn from_hex(len: usize, text: &str) -> Result<Self> {
        let bytes = hex::decode(text.trim()).map_err(|e| Error::param(format!("bad hex: {e}")))?;
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::param(format!(
                "{len} bits need {} bytes",
                len.div_ceil(8)
            )));
        }
        let bits = bytes.view_bits::<Msb0>();
        if bits[len..].any() {
            return Err(Error::param("nonzero padding bits"));
        }
        Ok(TVector {
            bits: bits[..len].to_bitvec(),
        })
    }
}

/// Maps T-vectors to nets: block `b` gets `s1` or `s2` by bit `T(b)`; bits of
/// levels not covered by any block (when `6` does not divide `log n`) are 0.
#[derive(Debug, Clone)]
pub struct FamilyCodec {
    n: u32,
    blocks: Vec<BlockIndex>,
    assignments: BlockAssignments,
}

impl FamilyCodec {
    pub fn new(n: u32, assignments: BlockAssignments) -> Result<Self> {
        Ok(FamilyCodec {
            n,
            blocks: blocks(n)?,
            assignments,
        })
    }

    /// Codec with assignments synthesized for `reading` and checked on the
    /// first block.
    pub fn synthesize(n: u32, reading: Reading, completions: usize, seed: u64) -> Result<Self> {
        let probe = BlockIndex { k: 0, i: 0, j: 0 };
        let a = synthesize_assignments(n, probe, reading, completions, seed)?;
        Self::new(n, a)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn blocks(&self) -> &[BlockIndex] {
        &self.blocks
    }

    /// `N`, the T-vector length.
    pub fn code_len(&self) -> usize {
        self.blocks.len()
    }

    pub fn assignments(&self) -> &BlockAssignments {
        &self.assignments
    }

    pub fn partition_vector(&self, t: &TVector) -> Result<PartitionVector> {
        if t.len() != self.code_len() {
            return Err(Error::param(format!(
                "T-vector for n = {} has {} bits, got {}",
                self.n,
                self.code_len(),
                t.len()
            )));
        }
        let mut z = PartitionVector::zeros(self.n)?;
        for (pos, &b) in self.blocks.iter().enumerate() {
            let s = if t.get(pos) {
                &self.assignments.s2
            } else {
                &self.assignments.s1
            };
            write_block(&mut z, b, s);
        }
        Ok(z)
    }

    pub fn decode_t(&self, t: &TVector) -> Result<BinaryNet> {
        Ok(decode(&self.partition_vector(t)?))
    }

    /// Reads the T-vector back from a family member.
    pub fn recover_t(&self, net: &BinaryNet) -> Result<TVector> {
        if net.n() != self.n {
            return Err(Error::param("net size differs from the codec's"));
        }
        let z = encode(net);
        let mut t = TVector::zeros(self.code_len());
        for (pos, &b) in self.blocks.iter().enumerate() {
            let block = extract_block(&z, b);
            if block == self.assignments.s2 {
                t.set(pos, true);
            } else if block != self.assignments.s1 {
                return Err(Error::param(format!(
                    "block {b:?} holds neither assignment"
                )));
            }
        }
        Ok(t)
    }

    /// `sum over blocks |V_1(k+3, 8i, 8j) - V_2(k+3, 8i, 8j)|`, in quarters.
    pub fn block_distance_quarters(&self, a: &BinaryNet, b: &BinaryNet) -> u64 {
        self.blocks
            .iter()
            .map(|&blk| tracked_volume_quarters(a, blk).abs_diff(tracked_volume_quarters(b, blk)))
            .sum()
    }
}

/// `count` T-vectors of length `len` with pairwise Hamming distance at least
/// `len / 4`, by rejection sampling with at most `max_draws` candidates.
pub fn build_code(len: usize, count: usize, seed: u64, max_draws: usize) -> Result<Vec<TVector>> {
    if len == 0 {
        return Err(Error::param("code length must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut kept: Vec<TVector> = Vec::with_capacity(count);
    let mut draws = 0;
    while kept.len() < count {
        if draws == max_draws {
            return Err(Error::CodeBudget {
                achieved: kept.len(),
                requested: count,
            });
        }
        draws += 1;
        let cand = TVector::random(len, &mut rng);
        if kept.iter().all(|t| 4 * t.hamming(&cand) >= len) {
            kept.push(cand);
        }
    }
    Ok(kept)
}

/// Default draw budget for [`build_code`].
pub fn default_draws(count: usize) -> usize {
    1000 * count.max(1)
}

/// Report on one pair of family members.
#[derive(Debug, Clone, PartialEq)]
pub struct PairReport {
    pub a: usize,
    pub b: usize,
    pub hamming: usize,
    pub delta: Ratio<u64>,
    /// The block-restricted lower estimate of `delta`.
    pub block_delta: Ratio<u64>,
    /// `delta >= block_delta >= H n / 8`.
    pub chain_holds: bool,
    pub union: Option<UnionReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyOptions {
    pub reading: Reading,
    /// Random completions used to check the assignments.
    pub completions: usize,
    /// Evaluate at most this many pairs (all pairs when `None`), chosen at
    /// random when fewer than all.
    pub max_pairs: Option<usize>,
    /// Compute union discrepancy for the first this many evaluated pairs.
    pub union_pairs: usize,
    pub max_draws: Option<usize>,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        FamilyOptions {
            reading: Reading::RowsUp,
            completions: 100,
            max_pairs: None,
            union_pairs: 0,
            max_draws: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Family {
    pub codec: FamilyCodec,
    pub code: Vec<TVector>,
    pub nets: Vec<BinaryNet>,
    pub pairs: Vec<PairReport>,
}

impl Family {
    pub fn all_chains_hold(&self) -> bool {
        self.pairs.iter().all(|p| p.chain_holds)
    }

    pub fn min_hamming(&self) -> Option<usize> {
        self.pairs.iter().map(|p| p.hamming).min()
    }
}

pub fn build_family(n: u32, count: usize, seed: u64, opts: &FamilyOptions) -> Result<Family> {
    let codec = FamilyCodec::synthesize(n, opts.reading, opts.completions, seed)?;
    let len = codec.code_len();
    let draws = opts.max_draws.unwrap_or_else(|| default_draws(count));
    let code = build_code(len, count, seed, draws)?;
    let nets = code
        .par_iter()
        .map(|t| codec.decode_t(t))
        .collect::<Result<Vec<_>>>()?;
    let tables: Vec<_> = nets.par_iter().map(corner_volumes).collect();

    let mut pairs: Vec<(usize, usize)> = (0..count)
        .flat_map(|a| (a + 1..count).map(move |b| (a, b)))
        .collect();
    if let Some(limit) = opts.max_pairs.filter(|&l| l < pairs.len()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xfa11);
        pairs.shuffle(&mut rng);
        pairs.truncate(limit);
        pairs.sort_unstable();
    }

    let point_sets: Vec<_> = nets.par_iter().map(|net| net.to_point_set()).collect();
    // pairs are independent; the indexed collect keeps their order
    let reports = pairs
        .par_iter()
        .enumerate()
        .map(|(idx, &(a, b))| {
            let hamming = code[a].hamming(&code[b]);
            let delta_q = corner_distance_quarters(&tables[a], &tables[b])?;
            let block_q = codec.block_distance_quarters(&nets[a], &nets[b]);
            let floor_q = hamming as u64 * required_gap_quarters(n);
            let union = if idx < opts.union_pairs {
                Some(union_discrepancy(&point_sets[a], &point_sets[b])?)
            } else {
                None
            };
            Ok(PairReport {
                a,
                b,
                hamming,
                delta: Ratio::new(delta_q, 4),
                block_delta: Ratio::new(block_q, 4),
                chain_holds: delta_q >= block_q && block_q >= floor_q,
                union,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Family {
        codec,
        code,
        nets,
        pairs: reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binary_net::{is_binary_net, random_net};
    use crate::discrepancy::corner_volume_distance;
    use std::collections::HashSet;

    #[test]
    fn block_counts() {
        assert_eq!(block_count(64).unwrap(), 1);
        assert_eq!(block_count(512).unwrap(), 8);
        assert_eq!(block_count(4096).unwrap(), 128);
        assert_eq!(4096 * 12 / 384, 128);
        assert!(blocks(32).is_err());
        assert!(blocks(100).is_err());
        assert_eq!(block_levels(4096).unwrap(), vec![0, 6]);
    }

    #[test]
    fn block_indices_shape() {
        let idx = block_bit_indices(BlockIndex { k: 0, i: 0, j: 0 }, 64).unwrap();
        assert_eq!(idx.len(), BLOCK_BITS);
        for l in 0..6u32 {
            let at: Vec<_> = idx.iter().filter(|t| t.0 == l).collect();
            assert_eq!(at.len(), 32);
            assert!(at.iter().all(|&&(_, i, j)| i < 1 << (5 - l) && j < 1 << l));
        }
        assert!(block_bit_indices(BlockIndex { k: 6, i: 0, j: 0 }, 64).is_err());
    }

    #[test]
    fn blocks_partition_the_vector() {
        for n in [64u32, 4096] {
            let z = PartitionVector::zeros(n).unwrap();
            let mut seen = HashSet::new();
            for b in blocks(n).unwrap() {
                for (k, i, j) in block_bit_indices(b, n).unwrap() {
                    assert!(seen.insert(z.index(k, i, j)), "{b:?}");
                }
            }
            assert_eq!(seen.len(), z.len());
        }
        let z = PartitionVector::zeros(512).unwrap();
        let covered: usize = blocks(512).unwrap().len() * BLOCK_BITS;
        assert_eq!(covered, 256 * 6);
        assert!(covered < z.len());
    }

    #[test]
    fn virtual_grid_matches_block_bits() {
        for seed in 0..5 {
            let (net, z) = random_net(4096, seed).unwrap();
            for &b in blocks(4096).unwrap().iter().step_by(37) {
                let virtual_net = decode(&extract_block(&z, b));
                let mut inside = 0;
                for v in 0..VIRTUAL_SIDE {
                    if let Some(q) = virtual_point(&net, b, v) {
                        assert_eq!(q.y, virtual_net.row(v), "{b:?} v={v}");
                        inside += 1;
                    }
                }
                assert_eq!(inside, 64);
            }
        }
    }

    #[test]
    fn assignments_hit_targets() {
        for reading in Reading::ALL {
            let a = synthesize_assignments(512, BlockIndex { k: 0, i: 0, j: 0 }, reading, 30, 3)
                .unwrap();
            assert_eq!(a.s1_target, reading.s1_target());
            assert_eq!(a.s2_target, reading.s2_targets()[0]);
            for b in [
                BlockIndex { k: 0, i: 3, j: 0 },
                BlockIndex { k: 0, i: 7, j: 0 },
            ] {
                let gap = min_block_gap(512, &a, b, 30, 8).unwrap();
                assert!(gap.placed);
                assert!(gap.min_gap() >= Ratio::from_integer(64));
            }
        }
    }

    #[test]
    fn codec_round_trip() {
        let codec = FamilyCodec::synthesize(512, Reading::RowsUp, 10, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let t = TVector::random(codec.code_len(), &mut rng);
            let net = codec.decode_t(&t).unwrap();
            assert!(is_binary_net(&net.to_point_set()));
            assert_eq!(codec.recover_t(&net).unwrap(), t);
        }
        assert!(codec.decode_t(&TVector::zeros(3)).is_err());
        let stranger = random_net(512, 0).unwrap().0;
        assert!(codec.recover_t(&stranger).is_err());
    }

    #[test]
    fn one_bit_changes_delta_by_n_over_8() {
        let codec = FamilyCodec::synthesize(512, Reading::RowsUp, 10, 4).unwrap();
        let zero = TVector::zeros(codec.code_len());
        let mut one = zero.clone();
        one.set(5, true);
        let a = codec.decode_t(&zero).unwrap();
        let b = codec.decode_t(&one).unwrap();
        assert!(corner_volume_distance(&a, &b).unwrap() >= Ratio::from_integer(64));
        let mut all = zero.clone();
        for i in 0..all.len() {
            all.set(i, true);
        }
        let c = codec.decode_t(&all).unwrap();
        let floor = Ratio::from_integer(64 * codec.code_len() as u64);
        assert!(corner_volume_distance(&a, &c).unwrap() >= floor);
    }

    #[test]
    fn tvector_hex() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let t = TVector::random(13, &mut rng);
        assert_eq!(TVector::from_hex(13, &t.to_hex()).unwrap(), t);
        assert!(TVector::from_hex(13, "ffff").is_err());
        assert!(TVector::from_hex(13, "ff").is_err());
    }

    #[test]
    fn code_construction() {
        let one = build_code(128, 1, 0, 10).unwrap();
        assert_eq!(one.len(), 1);
        let two = build_code(8, 2, 3, 100).unwrap();
        assert!(two[0].hamming(&two[1]) >= 2);
        let code = build_code(128, 64, 1, default_draws(64)).unwrap();
        for a in 0..code.len() {
            for b in a + 1..code.len() {
                assert!(code[a].hamming(&code[b]) >= 32);
            }
        }
        assert_eq!(code, build_code(128, 64, 1, default_draws(64)).unwrap());
        assert!(matches!(
            build_code(1, 3, 0, 100),
            Err(Error::CodeBudget {
                achieved: 2,
                requested: 3
            })
        ));
        assert!(build_code(0, 1, 0, 10).is_err());
    }

    #[test]
    fn small_family_report() {
        let opts = FamilyOptions {
            completions: 10,
            union_pairs: 2,
            ..FamilyOptions::default()
        };
        let fam = build_family(512, 4, 7, &opts).unwrap();
        assert_eq!(fam.nets.len(), 4);
        assert_eq!(fam.pairs.len(), 6);
        assert!(fam.all_chains_hold());
        assert!(fam.min_hamming().unwrap() * 4 >= fam.codec.code_len());
        assert!(fam.pairs[0].union.is_some() && fam.pairs[2].union.is_none());
        let limited = build_family(
            512,
            4,
            7,
            &FamilyOptions {
                max_pairs: Some(3),
                ..opts
            },
        )
        .unwrap();
        assert_eq!(limited.pairs.len(), 3);
    }
}
