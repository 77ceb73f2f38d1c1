//! Binary nets: `n` points with exactly one point in every canonical cell
//! `G_k(i, j)` for `k = 0..=log n`, and their partition-vector encoding.
//!
//! Bit `Z(k, i, j)` belongs to the pair of `k`-cells `G_k(2i, j)`,
//! `G_k(2i + 1, j)`, which the `(k+1)`-cells `G_{k+1}(i, 2j)` and
//! `G_{k+1}(i, 2j + 1)` cut into four quadrants. The pair's two points sit in
//! the lower-left and upper-right quadrants when the bit is 0, and in the
//! lower-right and upper-left ones when it is 1.

use std::fmt;

use bitvec::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{require_log2, CellId, GridPoint, GridPointSet};

/// Partition vector of an `n`-point binary net: `(n/2) log n` bits in
/// `(k, i, j)` lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PartitionVector {
    n: u32,
    bits: BitVec<u8, Msb0>,
}

impl PartitionVector {
    pub fn zeros(n: u32) -> Result<Self> {
        let log_n = require_log2(n)?;
        Ok(PartitionVector {
            n,
            bits: bitvec![u8, Msb0; 0; vector_len(n, log_n)],
        })
    }

    pub fn from_bits(n: u32, bits: &[bool]) -> Result<Self> {
        let mut z = Self::zeros(n)?;
        if bits.len() != z.len() {
            return Err(Error::param(format!(
                "partition vector for n = {n} needs {} bits, got {}",
                z.len(),
                bits.len()
            )));
        }
        for (i, &b) in bits.iter().enumerate() {
            z.bits.set(i, b);
        }
        Ok(z)
    }

    pub fn random<R: Rng>(n: u32, rng: &mut R) -> Result<Self> {
        let mut z = Self::zeros(n)?;
        for i in 0..z.len() {
            z.bits.set(i, rng.gen());
        }
        Ok(z)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn log_n(&self) -> u32 {
        self.n.trailing_zeros()
    }

    /// Position of `Z(k, i, j)`: `k n/2 + i 2^k + j`.
    pub fn index(&self, k: u32, i: u32, j: u32) -> usize {
        debug_assert!(k < self.log_n() && i < self.n >> (k + 1) && j < 1 << k);
        k as usize * (self.n as usize / 2) + ((i as usize) << k) + j as usize
    }

    /// Inverse of [`PartitionVector::index`].
    pub fn triple(&self, index: usize) -> (u32, u32, u32) {
        let half = self.n as usize / 2;
        let k = (index / half) as u32;
        let rest = index % half;
        (k, (rest >> k) as u32, (rest & ((1 << k) - 1)) as u32)
    }

    pub fn get(&self, k: u32, i: u32, j: u32) -> bool {
        self.bits[self.index(k, i, j)]
    }

    pub fn set(&mut self, k: u32, i: u32, j: u32, value: bool) {
        let idx = self.index(k, i, j);
        self.bits.set(idx, value);
    }

    pub fn bit(&self, index: usize) -> bool {
        self.bits[index]
    }

    pub fn set_bit(&mut self, index: usize, value: bool) {
        self.bits.set(index, value);
    }

    pub fn bits(&self) -> &BitSlice<u8, Msb0> {
        &self.bits
    }

    /// Lowercase hex; the first bit is the most significant bit of the first
    /// byte and the tail is zero-padded.
    pub fn to_hex(&self) -> String {
        hex::encode(self.bits.as_raw_slice())
    }

    pub fn from_hex(n: u32, text: &str) -> Result<Self> {
        let mut z = Self::zeros(n)?;
        let bytes = hex::decode(text.trim()).map_err(|e| Error::param(format!("bad hex: {e}")))?;
        let expected = z.len().div_ceil(8);
        if bytes.len() != expected {
            return Err(Error::param(format!(
                "partition vector for n = {n} needs {expected} bytes, got {}",
                bytes.len()
            )));
        }
        let bits = bytes.view_bits::<Msb0>();
        if bits[z.len()..].any() {
            return Err(Error::param("nonzero padding bits in partition vector"));
        }
        let len = z.len();
        z.bits.copy_from_bitslice(&bits[..len]);
        Ok(z)
    }
}

impl fmt::Debug for PartitionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartitionVector(n={}, {})", self.n, self.to_hex())
    }
}

fn vector_len(n: u32, log_n: u32) -> usize {
    n as usize / 2 * log_n as usize
}

/// A validated binary net, stored as the row of the point in each column.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryNet {
    rows: Vec<u32>,
}

impl BinaryNet {
    pub fn new(p: &GridPointSet) -> Result<Self> {
        if let Some(cell) = validate_net(p)? {
            return Err(Error::InvalidNet(cell));
        }
        let mut rows = vec![0; p.n() as usize];
        for q in p.points() {
            rows[q.x as usize] = q.y;
        }
        Ok(BinaryNet { rows })
    }

    pub fn n(&self) -> u32 {
        self.rows.len() as u32
    }

    pub fn log_n(&self) -> u32 {
        self.n().trailing_zeros()
    }

    /// Row of the point in column `x`.
    pub fn row(&self, x: u32) -> u32 {
        self.rows[x as usize]
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        self.rows
            .iter()
            .enumerate()
            .map(|(x, &y)| GridPoint::new(x as u32, y))
    }

    pub fn to_point_set(&self) -> GridPointSet {
        GridPointSet::new(self.n(), self.points().collect()).expect("net points lie in the grid")
    }

    /// The point inside `G_k(i, j)`.
    pub fn point_in_cell(&self, k: u32, i: u32, j: u32) -> GridPoint {
        let h = self.n() >> k;
        let x0 = i << k;
        (x0..x0 + (1 << k))
            .map(|x| GridPoint::new(x, self.row(x)))
            .find(|q| q.y / h == j)
            .expect("a binary net has a point in every canonical cell")
    }

    /// Reflection in the diagonal; maps `k`-cells to `(log n - k)`-cells.
    pub fn transpose(&self) -> BinaryNet {
        let mut rows = vec![0; self.rows.len()];
        for (x, &y) in self.rows.iter().enumerate() {
            rows[y as usize] = x as u32;
        }
        BinaryNet { rows }
    }
}

/// First canonical cell (in `(k, i, j)` order) that does not hold exactly
/// one point of `p`, or `None` for a binary net. Levels run over
/// `0..=log n`, so both the column and the row constraints are enforced.
pub fn validate_net(p: &GridPointSet) -> Result<Option<CellId>> {
    let n = p.n();
    let log_n = require_log2(n)?;
    if p.len() != n as usize {
        return Err(Error::param(format!(
            "a binary net on the {n}x{n} grid has {n} points, got {}",
            p.len()
        )));
    }
    let mut counts = vec![0u32; n as usize];
    for k in 0..=log_n {
        counts.fill(0);
        let h = n >> k;
        for q in p.points() {
            let (i, j) = (q.x >> k, q.y / h);
            counts[((i << k) + j) as usize] += 1;
        }
        if let Some(pos) = counts.iter().position(|&c| c != 1) {
            let pos = pos as u32;
            return Ok(Some(CellId::Canonical {
                k,
                i: pos >> k,
                j: pos & ((1 << k) - 1),
            }));
        }
    }
    Ok(None)
}

pub fn is_binary_net(p: &GridPointSet) -> bool {
    matches!(validate_net(p), Ok(None))
}

/// The net encoded by `z`.
pub fn decode(z: &PartitionVector) -> BinaryNet {
    let log_n = z.log_n();
    let rows = (0..z.n())
        .map(|c| {
            (0..log_n).fold(0u32, |j, k| {
                let side = (c >> k) & 1;
                2 * j + (u32::from(z.get(k, c >> (k + 1), j)) ^ side)
            })
        })
        .collect();
    BinaryNet { rows }
}

pub fn encode(net: &BinaryNet) -> PartitionVector {
    let n = net.n();
    let log_n = net.log_n();
    let mut z = PartitionVector::zeros(n).expect("net side is a power of two");
    for c in 0..n {
        let y = net.row(c);
        for k in 0..log_n {
            let j = y >> (log_n - k);
            let upper = (y >> (log_n - k - 1)) & 1;
            z.set(k, c >> (k + 1), j, (upper ^ ((c >> k) & 1)) == 1);
        }
    }
    z
}

/// All binary nets for `n <= 4`, found by testing every `n`-subset of the
/// `n^2` cells. Sorted by column rows.
pub fn enumerate_nets(n: u32) -> Result<Vec<BinaryNet>> {
    require_log2(n)?;
    if n > 4 {
        return Err(Error::param(format!(
            "exhaustive enumeration is limited to n <= 4 (got {n})"
        )));
    }
    let cells = (n * n) as usize;
    let mut out = Vec::new();
    for mask in 0u32..(1 << cells) {
        if mask.count_ones() != n {
            continue;
        }
        let pts = (0..cells as u32)
            .filter(|&c| mask >> c & 1 == 1)
            .map(|c| GridPoint::new(c % n, c / n))
            .collect();
        let p = GridPointSet::new(n, pts)?;
        if is_binary_net(&p) {
            out.push(BinaryNet::new(&p)?);
        }
    }
    out.sort();
    Ok(out)
}

/// Decodes a uniformly random partition vector, so every net is equally
/// likely.
pub fn random_net(n: u32, seed: u64) -> Result<(BinaryNet, PartitionVector)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z = PartitionVector::random(n, &mut rng)?;
    Ok((decode(&z), z))
}
