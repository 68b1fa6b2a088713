use super::DiffError;

/// The graded co-lexicographic ranking of `N^l`: tuples are ordered by total
/// degree, then by the last component, then the one before it, and so on.
/// For `l = 2` this is the Cantor pairing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ThetaRank {
    l: usize,
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial fits in u64")
}

impl ThetaRank {
    pub fn new(l: usize) -> Result<Self, DiffError> {
        if l == 0 {
            return Err(DiffError::NoIndependents);
        }
        Ok(ThetaRank { l })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// Number of tuples of total degree below `s`.
    fn below(&self, s: u64) -> u64 {
        if s == 0 {
            0
        } else {
            binom(s - 1 + self.l as u64, self.l as u64)
        }
    }

    /// Tuples of `i` components summing to `s`.
    fn compositions(s: u64, i: usize) -> u64 {
        if i == 0 {
            return u64::from(s == 0);
        }
        binom(s + i as u64 - 1, i as u64 - 1)
    }

    pub fn rank(&self, t: &[u32]) -> Result<u64, DiffError> {
        if t.len() != self.l {
            return Err(DiffError::Arity { expected: self.l, found: t.len() });
        }
        let s: u64 = t.iter().map(|&a| a as u64).sum();
        let mut r = self.below(s);
        let mut rest = s;
        for i in (1..self.l).rev() {
            let a = t[i] as u64;
            for v in 0..a {
                r += Self::compositions(rest - v, i);
            }
            rest -= a;
        }
        Ok(r)
    }

    pub fn unrank(&self, k: u64) -> Vec<u32> {
        let mut s = 0u64;
        while self.below(s + 1) <= k {
            s += 1;
        }
        let mut r = k - self.below(s);
        let mut t = vec![0u32; self.l];
        let mut rest = s;
        for i in (1..self.l).rev() {
            let mut v = 0;
            loop {
                let c = Self::compositions(rest - v, i);
                if r < c {
                    break;
                }
                r -= c;
                v += 1;
            }
            t[i] = v as u32;
            rest -= v;
        }
        t[0] = rest as u32;
        t
    }
}

pub fn sigma_rank(rank: ThetaRank, t: &[u32]) -> Result<u64, DiffError> {
    rank.rank(t)
}

pub fn sigma_unrank(rank: ThetaRank, k: u64) -> Vec<u32> {
    rank.unrank(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cantor_pairing_for_two_variables() {
        let r = ThetaRank::new(2).unwrap();
        let seq = [[0, 0], [1, 0], [0, 1], [2, 0], [1, 1], [0, 2], [3, 0]];
        for (k, t) in seq.iter().enumerate() {
            assert_eq!(r.rank(t).unwrap(), k as u64);
            assert_eq!(r.unrank(k as u64), t.to_vec());
        }
        assert_eq!(r.unrank(8), vec![1, 2]);
        assert_eq!(r.unrank(12), vec![2, 2]);
        for a in 0..20u32 {
            for b in 0..20u32 {
                let s = (a + b) as u64;
                assert_eq!(r.rank(&[a, b]).unwrap(), s * (s + 1) / 2 + b as u64);
            }
        }
    }

    #[test]
    fn three_variables() {
        let r = ThetaRank::new(3).unwrap();
        assert_eq!(r.rank(&[1, 0, 0]).unwrap(), 1);
        assert_eq!(r.rank(&[0, 1, 0]).unwrap(), 2);
        assert_eq!(r.rank(&[0, 0, 1]).unwrap(), 3);
        assert_eq!(r.rank(&[2, 0, 0]).unwrap(), 4);
    }

    #[test]
    fn arity_and_zero_dimension() {
        assert!(ThetaRank::new(0).is_err());
        assert!(ThetaRank::new(2).unwrap().rank(&[1]).is_err());
        assert_eq!(ThetaRank::new(1).unwrap().rank(&[7]).unwrap(), 7);
    }
}
