//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rangesketch::binary_net::{decode, encode, enumerate_nets, random_net, PartitionVector};
use rangesketch::discrepancy::{
    combinatorial_discrepancy_exact, corner_sum_bound_holds, corner_volume_distance, corner_volumes,
};
use rangesketch::hard_family::{
    blocks, build_code, build_family, default_draws, min_block_gap, synthesize_assignments,
    BlockIndex, FamilyCodec, FamilyOptions, Reading,
};
use rangesketch::onedim::enumerate_onedim;
use rangesketch::pointsets::Family;
use rangesketch::sketch::{
    build_sketch, formula_bits, levels_for, random_rect, Sketch, FIXED_BITS,
};
use rangesketch::{bench, Eps, GridPointSet, Rect};

struct Outcome {
    pass: bool,
    detail: String,
}

fn brute_count(p: &GridPointSet, r: &Rect) -> i64 {
    let mut c = 0;
    for q in p.points() {
        if r.x_lo <= q.x && q.x < r.x_hi && r.y_lo <= q.y && q.y < r.y_hi {
            c += 1;
        }
    }
    c
}

struct Built {
    n: u32,
    eps: Eps,
    family: Family,
    p: GridPointSet,
    sketch: Sketch,
}

const NS: [u32; 3] = [256, 1024, 4096];
const EPSES: [(u32, u32); 3] = [(1, 4), (1, 8), (1, 16)];

fn build_all() -> Vec<Built> {
    let mut out = Vec::new();
    for n in NS {
        for (p_, q_) in EPSES {
            let eps = Eps::new(p_, q_);
            for family in Family::ALL {
                let p = family.generate(n, eps, 17).expect("generate");
                let sketch = build_sketch(&p, eps, 5).expect("build");
                out.push(Built {
                    n,
                    eps,
                    family,
                    p,
                    sketch,
                });
            }
        }
    }
    out
}

fn criterion_1(all: &[Built]) -> Outcome {
    let mut violations = 0;
    let mut slowest = Duration::ZERO;
    let mut worst = String::new();
    let mut worst_ratio = 0.0f64;
    for b in all {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(u64::from(b.n) ^ u64::from(*b.eps.denom()));
        let bound = b.eps * b.n;
        let mut max_err = 0i64;
        for _ in 0..100_000 {
            let r = random_rect(&mut rng, b.n);
            let est = b.sketch.query_four_sided(&r).expect("query");
            let err = (est - brute_count(&b.p, &r)).abs();
            max_err = max_err.max(err);
            if Ratio::from_integer(err as u32) > bound {
                violations += 1;
            }
        }
        slowest = slowest.max(start.elapsed());
        let ratio = max_err as f64
            / (f64::from(b.n) * f64::from(*b.eps.numer()) / f64::from(*b.eps.denom()));
        if ratio >= worst_ratio {
            worst_ratio = ratio;
            worst = format!(
                "n={} eps={} {}: max err {} vs eps n = {}",
                b.n,
                b.eps,
                b.family.name(),
                max_err,
                bound
            );
        }
    }
    Outcome {
        pass: violations == 0 && slowest < Duration::from_secs(300),
        detail: format!(
            "{} sketches x 1e5 queries, {violations} violations; worst {worst}; slowest cell {:.1?}",
            all.len(),
            slowest
        ),
    }
}

fn criterion_2(all: &[Built]) -> Outcome {
    let mut violations = 0u64;
    let mut checked = 0u64;
    let mut whole_nets = 0;
    for b in all {
        let s = &b.sketch;
        let c = s.chunk() as i64;
        if s.m() == b.p.len() {
            whole_nets += 1;
        }
        for slab in s.slabs() {
            let mut ys: Vec<u32> =
                b.p.points()
                    .iter()
                    .filter(|q| slab.x_lo <= q.x && q.x < slab.x_hi)
                    .map(|q| q.y)
                    .collect();
            ys.sort_unstable();
            let mut below = 0usize;
            for y in 0..=b.n {
                while below < ys.len() && ys[below] < y {
                    below += 1;
                }
                let diff = s.slab_estimate(&slab, y) as i64 - below as i64;
                checked += 1;
                if diff < 0 || diff > c {
                    violations += 1;
                }
            }
        }
    }
    Outcome {
        pass: violations == 0,
        detail: format!(
            "{checked} (slab, y) checks over {} sketches, {violations} violations; net is all of P in {whole_nets}/{}",
            all.len(),
            all.len()
        ),
    }
}

fn criterion_3(all: &[Built]) -> Outcome {
    let mut mismatches = 0;
    for b in all {
        let s = &b.sketch;
        let bytes = s.serialize();
        let n_bits = u64::from(rangesketch::grid::ceil_log2(u64::from(b.n)));
        let m = s.m() as u64;
        let want = FIXED_BITS + m * 2 * n_bits + m * u64::from(levels_for(s.m()));
        let report = s.size_report();
        if report.payload_bits() != want
            || formula_bits(b.n, s.m()) != want
            || bytes.len() as u64 != want.div_ceil(8)
            || Sketch::deserialize(&bytes).map(|d| d != *s).unwrap_or(true)
        {
            mismatches += 1;
        }
    }
    let sweep: Vec<(u32, Eps)> = NS
        .iter()
        .flat_map(|&n| EPSES.iter().map(move |&(a, b)| (n, Eps::new(a, b))))
        .collect();
    let rows = bench::bench(&sweep, 2000, 3).expect("bench");
    let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    for r in &rows {
        println!(
            "    bench n={:<5} eps={:<5} m={:<5} bits={:<7} formula={:<8.0} ratio={:.2} max_err={} eps_n={}",
            r.n, r.eps, r.m, r.bits, r.formula, r.ratio, r.max_error, r.eps_n
        );
    }
    Outcome {
        pass: mismatches == 0,
        detail: format!(
            "{} sketches, {mismatches} size mismatches; bits/formula ratio across sweep in [{lo:.2}, {hi:.2}] (reported)",
            all.len()
        ),
    }
}

fn criterion_4() -> Outcome {
    let mut problems = Vec::new();
    for (n, want) in [(1u32, 1usize), (2, 2), (4, 16)] {
        let got = enumerate_nets(n).expect("enumerate").len();
        if got != want || got != 1usize << (n as usize / 2 * n.trailing_zeros() as usize) {
            problems.push(format!("n={n}: {got} nets"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let mut trips = 0;
    for n in [8u32, 64, 1024] {
        for _ in 0..10_000 {
            let z = PartitionVector::random(n, &mut rng).expect("vector");
            let net = decode(&z);
            if encode(&net) != z || !rangesketch::binary_net::is_binary_net(&net.to_point_set()) {
                problems.push(format!("n={n}: round trip failed"));
            }
            trips += 1;
        }
    }
    Outcome {
        pass: problems.is_empty(),
        detail: format!(
            "counts 1/2/16 by exhaustive search; {trips} round trips; problems: {problems:?}"
        ),
    }
}

fn x_fact_holds(n: u32, seed: u64) -> bool {
    let (net, _) = random_net(n, seed).expect("net");
    let t = corner_volumes(&net);
    let log_n = net.log_n();
    for k in 0..=log_n {
        for i in 0..n >> k {
            let mut xs: Vec<Ratio<u64>> = (0..1u32 << k).map(|j| t.x(k, i, j)).collect();
            xs.sort();
            let want: Vec<Ratio<u64>> = if k == 0 {
                vec![Ratio::new(1, 2)]
            } else {
                (0..1u64 << (k - 1))
                    .flat_map(|j| [Ratio::new(2 * j + 1, 2); 2])
                    .collect()
            };
            if xs != want {
                return false;
            }
        }
    }
    corner_sum_bound_holds(&t)
}

fn criterion_5() -> Outcome {
    let mut failures = 0;
    let mut total = 0;
    for n in [8u32, 64, 256] {
        for seed in 0..1000 {
            total += 1;
            if !x_fact_holds(n, 1_000_000 + seed) {
                failures += 1;
            }
        }
    }
    Outcome {
        pass: failures == 0,
        detail: format!(
            "{total} random nets, {failures} fail the X-multiset fact or S_P >= n^2 log n/(16e)"
        ),
    }
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let n = 4096;
    let mut problems = Vec::new();
    let codec = FamilyCodec::synthesize(n, Reading::RowsUp, 100, 1).expect("codec");
    let len = codec.code_len();
    if len != 128 {
        problems.push(format!("N = {len}"));
    }
    let code = build_code(len, 64, 1, default_draws(64)).expect("code");
    let mut min_h = usize::MAX;
    for a in 0..code.len() {
        for b in a + 1..code.len() {
            min_h = min_h.min(code[a].hamming(&code[b]));
        }
    }
    if code.len() != 64 || 4 * min_h < len {
        problems.push(format!("min Hamming {min_h}"));
    }

    let nets: Vec<_> = code
        .iter()
        .map(|t| codec.decode_t(t).expect("decode"))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut chain_failures = 0;
    for _ in 0..50 {
        let a = rng.gen_range(0..64);
        let mut b = rng.gen_range(0..63);
        if b >= a {
            b += 1;
        }
        let h = code[a].hamming(&code[b]) as u64;
        let delta = corner_volume_distance(&nets[a], &nets[b]).expect("delta");
        if delta < Ratio::new(h * u64::from(n), 8) {
            chain_failures += 1;
        }
    }
    if chain_failures > 0 {
        problems.push(format!("{chain_failures} pairs with delta < H n/8"));
    }

    let mut min_gap = u64::MAX;
    for reading in Reading::ALL {
        let a = synthesize_assignments(n, BlockIndex { k: 0, i: 0, j: 0 }, reading, 100, 2)
            .expect("assign");
        for (idx, b) in blocks(n).expect("blocks").into_iter().enumerate() {
            let gap = min_block_gap(n, &a, b, 100, 1000 + idx as u64).expect("gap");
            if !gap.placed {
                problems.push(format!("{reading:?} {b:?} misplaced"));
            }
            min_gap = min_gap.min(gap.min_gap_quarters);
        }
    }
    if 4 * u64::from(n) / 8 > min_gap {
        problems.push(format!("block gap {}/4 below n/8", min_gap));
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: problems.is_empty() && elapsed < Duration::from_secs(900),
        detail: format!(
            "N={len}, 64 codewords, min H={min_h} (need {}); 50 pairs delta >= H n/8; min block gap {} over 128 blocks x 100 completions x 2 readings (need {}); {elapsed:.1?}; problems: {problems:?}",
            len.div_ceil(4),
            Ratio::new(min_gap, 4),
            n / 8
        ),
    }
}

fn criterion_7() -> Outcome {
    let mut maxima = Vec::new();
    let mut lines = Vec::new();
    for (n, count) in [(64u32, 2usize), (512, 4), (4096, 4)] {
        let opts = FamilyOptions {
            completions: 20,
            max_pairs: Some(4),
            union_pairs: 4,
            ..FamilyOptions::default()
        };
        let fam = build_family(n, count, 11, &opts).expect("family");
        let vals: Vec<u64> = fam
            .pairs
            .iter()
            .filter_map(|p| p.union.map(|u| u.value))
            .collect();
        let max = vals.iter().copied().max().unwrap_or(0);
        lines.push(format!("n={n} (log n = {}): {vals:?}", n.trailing_zeros()));
        maxima.push(max);
    }
    Outcome {
        pass: maxima.windows(2).all(|w| w[0] <= w[1]),
        detail: format!("max over pairs {maxima:?}; {}", lines.join("; ")),
    }
}

fn criterion_8() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (n, q) in [(4u32, 2u32), (8, 4)] {
        let r = enumerate_onedim(n, Eps::new(1, q)).expect("onedim");
        let ok = r.placements == u64::from(n).pow(q) && r.all_distinguished();
        pass &= ok;
        parts.push(format!(
            "n={n} eps=1/{q}: {} placements, {} distinct sets, min prefix gap {} (need {})",
            r.placements, r.distinct_sets, r.min_prefix_gap, r.cluster_size
        ));
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn naive_discrepancy(p: &GridPointSet) -> u32 {
    let n = p.n();
    let pts = p.points();
    let mut rects = Vec::new();
    for x1 in 0..n {
        for x2 in x1 + 1..=n {
            for y1 in 0..n {
                for y2 in y1 + 1..=n {
                    rects.push(Rect {
                        x_lo: x1,
                        x_hi: x2,
                        y_lo: y1,
                        y_hi: y2,
                    });
                }
            }
        }
    }
    let mut best = u32::MAX;
    for coloring in 0u32..1 << pts.len() {
        let mut worst = 0;
        for r in &rects {
            let mut sum = 0i32;
            for (i, q) in pts.iter().enumerate() {
                if r.contains(*q) {
                    sum += if coloring >> i & 1 == 1 { 1 } else { -1 };
                }
            }
            worst = worst.max(sum.unsigned_abs());
        }
        best = best.min(worst);
    }
    best
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut disagreements = 0;
    let mut values = [0usize; 6];
    for _ in 0..50 {
        let pts: Vec<(u32, u32)> = (0..10)
            .map(|_| (rng.gen_range(0..8), rng.gen_range(0..8)))
            .collect();
        let p = GridPointSet::from_pairs(8, &pts).expect("set");
        let fast = combinatorial_discrepancy_exact(&p, 22)
            .expect("exact")
            .value;
        if fast != naive_discrepancy(&p) {
            disagreements += 1;
        }
        values[(fast as usize).min(5)] += 1;
    }
    Outcome {
        pass: disagreements == 0,
        detail: format!(
            "50 random 10-point sets, {disagreements} disagreements; value histogram {values:?}"
        ),
    }
}

fn main() {
    let mut failed = 0;
    let mut report = |id: u32, name: &str, run: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!(
            "{verdict} criterion {id} ({name}): {} [{:.1?}]",
            o.detail,
            start.elapsed()
        );
    };

    let start = Instant::now();
    let all = build_all();
    println!("built {} sketches in {:.1?}", all.len(), start.elapsed());

    report(1, "four-sided error <= eps n", &mut || criterion_1(&all));
    report(2, "per-slab inequality", &mut || criterion_2(&all));
    report(3, "space accounting", &mut || criterion_3(&all));
    report(4, "binary-net bijection", &mut criterion_4);
    report(5, "corner-volume identities", &mut criterion_5);
    report(6, "hard-family chain at n = 4096", &mut criterion_6);
    report(7, "union-discrepancy trend", &mut criterion_7);
    report(8, "1-d lower-bound enumeration", &mut criterion_8);
    report(9, "exact solver cross-check", &mut criterion_9);

    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
