use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rangesketch::pointsets::{self, Family};
use rangesketch::sketch::{build_sketch, error_profile, random_rect, Sketch};
use rangesketch::{count_in_rect, Eps, GridPointSet, Rect};

fn prefix_table(p: &GridPointSet) -> Vec<Vec<u32>> {
    let n = p.n() as usize;
    let mut t = vec![vec![0u32; n + 1]; n + 1];
    for q in p.points() {
        t[q.x as usize + 1][q.y as usize + 1] += 1;
    }
    for x in 1..=n {
        for y in 1..=n {
            t[x][y] += t[x - 1][y] + t[x][y - 1] - t[x - 1][y - 1];
        }
    }
    t
}

#[test]
fn two_sided_bound_on_random_queries() {
    let n = 1024;
    let p = pointsets::uniform(n, n as usize, 8).unwrap();
    let s = build_sketch(&p, Eps::new(1, 8), 2).unwrap();
    let table = prefix_table(&p);
    let bound = s.two_sided_bound();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10_000 {
        let (qx, qy) = (rng.gen_range(0..=n), rng.gen_range(0..=n));
        let exact = u64::from(table[qx as usize][qy as usize]);
        let est = s.query_two_sided(qx, qy).unwrap();
        assert!(
            Ratio::from_integer(est.abs_diff(exact)) <= bound,
            "({qx},{qy})"
        );
    }
    let full = s.query_two_sided(n, n).unwrap();
    assert!(Ratio::from_integer(full.abs_diff(n.into())) <= bound);
}

#[test]
fn four_sided_bound_on_random_rects() {
    let n = 1024;
    let p = pointsets::uniform(n, n as usize, 9).unwrap();
    let s = build_sketch(&p, Eps::new(1, 8), 2).unwrap();
    let table = prefix_table(&p);
    let count = |r: &Rect| {
        let t = |x: u32, y: u32| i64::from(table[x as usize][y as usize]);
        t(r.x_hi, r.y_hi) - t(r.x_lo, r.y_hi) - t(r.x_hi, r.y_lo) + t(r.x_lo, r.y_lo)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let bound = s.four_sided_bound();
    for _ in 0..100_000 {
        let r = random_rect(&mut rng, n);
        let err = (s.query_four_sided(&r).unwrap() - count(&r)).unsigned_abs();
        assert!(Ratio::from_integer(err) <= bound, "{r}");
    }
}

#[test]
fn clusters_stay_within_eps_n() {
    let n = 1024;
    let eps = Eps::new(1, 8);
    let p = pointsets::clusters(n, eps, 4).unwrap();
    let s = build_sketch(&p, eps, 1).unwrap();
    let prof = error_profile(&s, &p, 20_000, 7).unwrap();
    assert!(Ratio::from_integer(prof.max_abs_error) <= prof.four_sided_bound);
    for row in prof.rows.iter().take(100) {
        assert_eq!(row.exact as usize, count_in_rect(&p, &row.rect));
    }
}

#[test]
fn profile_n4096() {
    let n = 4096;
    let eps = Eps::new(1, 16);
    let p = pointsets::uniform(n, n as usize, 12).unwrap();
    let s = build_sketch(&p, eps, 12).unwrap();
    let prof = error_profile(&s, &p, 100_000, 12).unwrap();
    assert!(Ratio::from_integer(prof.max_abs_error) <= Ratio::from_integer(256));
    assert!(prof.mean_abs_error <= prof.max_abs_error as f64);
}

#[test]
fn hundred_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..100u64 {
        let n = rng.gen_range(1..=300);
        let len = rng.gen_range(0..400);
        let eps = Eps::new(1, rng.gen_range(1..=16));
        let family = Family::ALL[i as usize % 3];
        let p = match family {
            Family::Uniform => pointsets::uniform(n, len, i).unwrap(),
            other => other.generate(n, eps, i).unwrap(),
        };
        let s = build_sketch(&p, eps, i).unwrap();
        let bytes = s.serialize();
        let back = Sketch::deserialize(&bytes).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.serialize(), bytes);
        assert_eq!(bytes.len(), s.size_report().total_bytes);
    }
}

#[test]
fn queries_validate_input() {
    let p = pointsets::diagonal(16).unwrap();
    let s = build_sketch(&p, Eps::new(1, 2), 0).unwrap();
    assert!(s.query_two_sided(17, 3).is_err());
    assert!(s
        .query_four_sided(&Rect {
            x_lo: 0,
            x_hi: 20,
            y_lo: 0,
            y_hi: 1
        })
        .is_err());
    assert!(build_sketch(&p, Eps::new(0, 1), 0).is_err());
    assert!(build_sketch(&p, Eps::new(3, 2), 0).is_err());
}
