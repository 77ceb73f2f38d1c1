/// Binary indexed tree of counts over `0..len`.
#[derive(Debug, Clone)]
pub(crate) struct Fenwick {
    tree: Vec<u32>,
}

impl Fenwick {
    pub fn new(len: usize) -> Self {
        Fenwick { tree: vec![0; len] }
    }

    pub fn clear(&mut self) {
        self.tree.fill(0);
    }

    pub fn add(&mut self, mut idx: usize, value: u32) {
        while idx < self.tree.len() {
            self.tree[idx] += value;
            idx |= idx + 1;
        }
    }

    // Exclusive prefix sum over 0..idx
    pub fn prefix(&self, idx: usize) -> u32 {
        let mut sum = 0;
        let mut r = idx;
        while r > 0 {
            sum += self.tree[r - 1];
            r &= r - 1;
        }
        sum
    }

    pub fn range(&self, lo: usize, hi: usize) -> u32 {
        if hi <= lo {
            0
        } else {
            self.prefix(hi) - self.prefix(lo)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_naive_sums() {
        let vals = [3u32, 0, 1, 4, 1, 5, 9, 2, 6];
        let mut f = Fenwick::new(vals.len());
        for (i, &v) in vals.iter().enumerate() {
            f.add(i, v);
        }
        for lo in 0..=vals.len() {
            for hi in lo..=vals.len() {
                assert_eq!(f.range(lo, hi), vals[lo..hi].iter().sum::<u32>());
            }
        }
        f.clear();
        assert_eq!(f.prefix(vals.len()), 0);
    }
}
