use std::cmp::Ordering;

/// Sparse power product: `(variable index, exponent)` pairs with strictly
/// increasing indices and positive exponents. The empty product is `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(index: usize, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(index as u32, exp)])
        }
    }

    /// Builds a monomial from arbitrary pairs, merging repeats and dropping zeros.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut v: Vec<(u32, u32)> = pairs
            .into_iter()
            .filter(|&(_, e)| e > 0)
            .map(|(i, e)| (i as u32, e))
            .collect();
        v.sort_unstable();
        let mut out: Vec<(u32, u32)> = Vec::with_capacity(v.len());
        for (i, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 += e,
                _ => out.push((i, e)),
            }
        }
        Monomial(out)
    }

    pub fn from_dense(exps: &[u32]) -> Self {
        Monomial(
            exps.iter()
                .enumerate()
                .filter(|&(_, &e)| e > 0)
                .map(|(i, &e)| (i as u32, e))
                .collect(),
        )
    }

    pub fn to_dense(&self, n: usize) -> Vec<u32> {
        let mut v = vec![0; n];
        for &(i, e) in &self.0 {
            v[i as usize] = e;
        }
        v
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|&(i, e)| (i as usize, e))
    }

    pub fn exponent(&self, var: usize) -> u32 {
        match self.0.binary_search_by_key(&(var as u32), |&(i, _)| i) {
            Ok(pos) => self.0[pos].1,
            Err(_) => 0,
        }
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn max_var(&self) -> Option<usize> {
        self.0.last().map(|&(i, _)| i as usize)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.merge(other, |a, b| a + b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        self.merge(other, u32::max)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    out.push((self.0[i].0, self.0[i].1.min(other.0[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        Monomial(out)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        let mut j = 0;
        for &(i, e) in &self.0 {
            while j < other.0.len() && other.0[j].0 < i {
                j += 1;
            }
            if j == other.0.len() || other.0[j].0 != i || other.0[j].1 < e {
                return false;
            }
        }
        true
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(i, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 == i {
                let r = e - other.0[j].1;
                if r > 0 {
                    out.push((i, r));
                }
                j += 1;
            } else {
                out.push((i, e));
            }
        }
        Some(Monomial(out))
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.gcd(other).is_one()
    }

    /// Maps variable indices; the map must be injective.
    pub fn remap(&self, map: impl Fn(usize) -> usize) -> Monomial {
        Monomial::from_pairs(self.iter().map(|(i, e)| (map(i), e)))
    }

    /// Removes variable `var`, returning its exponent and the cofactor.
    pub fn split_var(&self, var: usize) -> (u32, Monomial) {
        let e = self.exponent(var);
        let rest = Monomial(self.0.iter().copied().filter(|&(i, _)| i as usize != var).collect());
        (e, rest)
    }

    fn merge(&self, other: &Monomial, f: impl Fn(u32, u32) -> u32) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            if j == other.0.len() || (i < self.0.len() && self.0[i].0 < other.0[j].0) {
                out.push(self.0[i]);
                i += 1;
            } else if i == self.0.len() || other.0[j].0 < self.0[i].0 {
                out.push(other.0[j]);
                j += 1;
            } else {
                out.push((self.0[i].0, f(self.0[i].1, other.0[j].1)));
                i += 1;
                j += 1;
            }
        }
        Monomial(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_addition() {
        // (y')^2 * (y')^3 with y' flattened to variable 4
        let a = Monomial::var(4, 2);
        let b = Monomial::var(4, 3);
        assert_eq!(a.mul(&b), Monomial::var(4, 5));
    }

    #[test]
    fn divisibility_and_division() {
        let m = Monomial::from_pairs([(0, 2), (2, 1)]);
        let d = Monomial::from_pairs([(0, 1)]);
        assert!(d.divides(&m));
        assert_eq!(m.div(&d), Some(Monomial::from_pairs([(0, 1), (2, 1)])));
        assert!(!m.divides(&d));
        assert_eq!(d.div(&m), None);
        assert_eq!(m.lcm(&Monomial::var(1, 3)), Monomial::from_pairs([(0, 2), (1, 3), (2, 1)]));
        assert!(Monomial::var(1, 1).is_coprime(&m));
        assert_eq!(Monomial::from_pairs([(3, 1), (1, 2), (3, 2), (0, 0)]).iter().collect::<Vec<_>>(), vec![(1, 2), (3, 3)]);
    }
}
