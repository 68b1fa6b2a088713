use std::time::{Duration, Instant};

use super::coeff::Coeff;
use super::ipoly::{lin_comb, spoly, sub_keys, IPoly, Term};
use super::{Budget, GbStats, GroebnerError, Selection};
use crate::polyring::CompiledOrder;

struct Pair {
    i: usize,
    j: usize,
    lcm: Box<[i32]>,
    sugar: u32,
}

pub(crate) struct Buchberger<'a, C> {
    ord: &'a CompiledOrder,
    budget: &'a Budget,
    selection: Selection,
    polys: Vec<IPoly<C>>,
    masks: Vec<u64>,
    sugar: Vec<u32>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
    start: Instant,
    pub stats: GbStats,
}

impl<'a, C: Coeff> Buchberger<'a, C> {
    pub fn new(ord: &'a CompiledOrder, budget: &'a Budget, selection: Selection) -> Self {
        Buchberger {
            ord,
            budget,
            selection,
            polys: Vec::new(),
            masks: Vec::new(),
            sugar: Vec::new(),
            active: Vec::new(),
            pairs: Vec::new(),
            start: Instant::now(),
            stats: GbStats::default(),
        }
    }

    fn check_budget(&mut self) -> Result<(), GroebnerError> {
        self.stats.elapsed = self.start.elapsed();
        if let Some(limit) = self.budget.time_limit {
            if self.stats.elapsed > limit {
                return Err(self.fail(format!("time limit of {:?} exceeded", limit)));
            }
        }
        if self.stats.pairs_processed > self.budget.max_pairs {
            return Err(self.fail(format!("more than {} S-pairs", self.budget.max_pairs)));
        }
        if self.stats.max_coeff_bits > self.budget.max_coeff_bits {
            return Err(self.fail(format!("coefficients above {} bits", self.budget.max_coeff_bits)));
        }
        Ok(())
    }

    fn fail(&mut self, reason: String) -> GroebnerError {
        self.stats.basis_size = self.active.iter().filter(|a| **a).count();
        self.stats.elapsed = self.start.elapsed();
        GroebnerError::Budget { reason, stats: Box::new(self.stats.clone()) }
    }

    fn find_reducer(&self, key: &[i32], mask: u64, skip: Option<usize>) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (k, g) in self.polys.iter().enumerate() {
            if !self.active[k] || Some(k) == skip || self.masks[k] & !mask != 0 {
                continue;
            }
            if self.ord.key_divides(&g.lead().key, key) && best.is_none_or(|b| g.len() < self.polys[b].len()) {
                best = Some(k);
            }
        }
        best
    }

    /// Full reduction modulo the active basis, optionally skipping one element.
    fn reduce(&mut self, p: IPoly<C>, skip: Option<usize>) -> Result<IPoly<C>, GroebnerError> {
        let mut cur = p.terms;
        let mut start = 0;
        let mut rem: Vec<Term<C>> = Vec::new();
        let mut steps = 0u64;
        while start < cur.len() {
            let lead = &cur[start];
            let mask = self.ord.key_mask(&lead.key);
            match self.find_reducer(&lead.key, mask, skip) {
                Some(k) => {
                    let g = &self.polys[k];
                    let glc = &g.lead().c;
                    let gc = lead.c.gcd(glc);
                    let a = glc.div_exact(&gc);
                    let b = lead.c.div_exact(&gc);
                    let shift = sub_keys(&lead.key, &g.lead().key);
                    cur = lin_comb(&cur[start + 1..], &a, &g.terms[1..], &b, &shift);
                    start = 0;
                    if !a.is_one() {
                        for t in rem.iter_mut() {
                            t.c = t.c.mul(&a);
                        }
                    }
                    steps += 1;
                    if steps.is_multiple_of(8) {
                        remove_joint_content(&mut cur, &mut rem);
                        let bits = cur.iter().chain(&rem).map(|t| t.c.bits()).max().unwrap_or(0);
                        self.stats.max_coeff_bits = self.stats.max_coeff_bits.max(bits);
                        if steps.is_multiple_of(256) {
                            self.check_budget()?;
                        }
                    }
                }
                None => {
                    rem.push(cur[start].clone());
                    start += 1;
                }
            }
        }
        self.stats.reduction_steps += steps;
        let mut out = IPoly { terms: rem };
        out.make_primitive();
        self.stats.max_coeff_bits = self.stats.max_coeff_bits.max(out.max_bits());
        Ok(out)
    }

    /// Adds a known basis element without generating pairs.
    pub fn install(&mut self, g: IPoly<C>) {
        let k = self.push(g, 0);
        self.active[k] = true;
    }

    pub fn normal_form(&mut self, p: IPoly<C>) -> Result<IPoly<C>, GroebnerError> {
        self.reduce(p, None)
    }

    fn push(&mut self, h: IPoly<C>, sugar: u32) -> usize {
        let mask = self.ord.key_mask(&h.lead().key);
        self.polys.push(h);
        self.masks.push(mask);
        self.sugar.push(sugar);
        self.active.push(false);
        self.polys.len() - 1
    }

    /// Gebauer-Moeller installation of a new basis element.
    fn update(&mut self, h: usize) {
        let ord = self.ord;
        let hl = self.polys[h].lead().key.clone();
        let hdeg = ord.key_degree(&hl);
        let cands: Vec<(usize, Box<[i32]>, bool)> = (0..self.polys.len())
            .filter(|&g| self.active[g])
            .map(|g| {
                let gl = &self.polys[g].lead().key;
                let l: Box<[i32]> = ord.key_lcm(&hl, gl).into_boxed_slice();
                (g, l, ord.key_coprime(&hl, gl))
            })
            .collect();
        // chain criterion among the new pairs
        let mut keep = vec![false; cands.len()];
        for a in 0..cands.len() {
            let (_, la, coprime) = &cands[a];
            if *coprime {
                keep[a] = true;
                continue;
            }
            let dominated_later = (a + 1..cands.len()).any(|b| ord.key_divides(&cands[b].1, la));
            let dominated_kept = (0..a).any(|b| keep[b] && ord.key_divides(&cands[b].1, la));
            keep[a] = !dominated_later && !dominated_kept;
        }
        // drop old pairs whose lcm is strictly covered through h
        let mut old = std::mem::take(&mut self.pairs);
        old.retain(|p| {
            if !ord.key_divides(&hl, &p.lcm) {
                return true;
            }
            let li = ord.key_lcm(&self.polys[p.i].lead().key, &hl);
            let lj = ord.key_lcm(&self.polys[p.j].lead().key, &hl);
            li.as_slice() == p.lcm.as_ref() || lj.as_slice() == p.lcm.as_ref()
        });
        self.pairs = old;
        for (a, (g, l, coprime)) in cands.into_iter().enumerate() {
            if !keep[a] {
                continue;
            }
            if coprime {
                self.stats.pairs_pruned += 1;
                continue;
            }
            let ldeg = ord.key_degree(&l);
            let gdeg = ord.key_degree(&self.polys[g].lead().key);
            let sugar = (self.sugar[h] + ldeg - hdeg).max(self.sugar[g] + ldeg - gdeg);
            self.pairs.push(Pair { i: g, j: h, lcm: l, sugar });
        }
        for g in 0..self.polys.len() {
            if self.active[g] && ord.key_divides(&hl, &self.polys[g].lead().key) {
                self.active[g] = false;
            }
        }
        self.active[h] = true;
    }

    fn select(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (p, q) = (&self.pairs[k], &self.pairs[best]);
            let better = match self.selection {
                Selection::Normal => p.lcm < q.lcm,
                Selection::Sugar => (p.sugar, &p.lcm) < (q.sugar, &q.lcm),
            };
            if better {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    /// Runs to completion and returns the reduced basis, sorted by ascending
    /// leading key. A unit ideal yields the single constant 1.
    pub fn run(mut self, mut inputs: Vec<IPoly<C>>) -> Result<(Vec<IPoly<C>>, GbStats), GroebnerError> {
        inputs.retain(|p| !p.is_zero());
        inputs.sort_by(|a, b| a.lead().key.cmp(&b.lead().key));
        for f in inputs {
            let sugar = f.terms.iter().map(|t| self.ord.key_degree(&t.key)).max().unwrap_or(0);
            let h = self.reduce(f, None)?;
            if h.is_zero() {
                continue;
            }
            if h.is_constant() {
                return Ok((vec![h], self.finish()));
            }
            let k = self.push(h, sugar);
            self.update(k);
        }
        while let Some(pair) = self.select() {
            self.stats.pairs_processed += 1;
            if self.stats.pairs_processed.is_multiple_of(16) {
                self.check_budget()?;
            }
            let s = spoly(&self.polys[pair.i], &self.polys[pair.j], self.ord);
            let h = self.reduce(s, None)?;
            if h.is_zero() {
                self.stats.zero_reductions += 1;
                continue;
            }
            if h.is_constant() {
                return Ok((vec![h], self.finish()));
            }
            let k = self.push(h, pair.sugar);
            self.update(k);
        }
        let basis = self.interreduce()?;
        let stats = self.finish_with(basis.len());
        Ok((basis, stats))
    }

    fn finish(&mut self) -> GbStats {
        self.finish_with(1)
    }

    fn finish_with(&mut self, size: usize) -> GbStats {
        self.stats.basis_size = size;
        self.stats.elapsed = self.start.elapsed();
        self.stats.clone()
    }

    fn interreduce(&mut self) -> Result<Vec<IPoly<C>>, GroebnerError> {
        let mut idx: Vec<usize> = (0..self.polys.len()).filter(|&k| self.active[k]).collect();
        idx.sort_by(|&a, &b| self.polys[a].lead().key.cmp(&self.polys[b].lead().key));
        let minimal: Vec<usize> = idx
            .iter()
            .copied()
            .filter(|&k| {
                !idx.iter().any(|&o| {
                    o != k
                        && self.ord.key_divides(&self.polys[o].lead().key, &self.polys[k].lead().key)
                        && (self.polys[o].lead().key != self.polys[k].lead().key || o < k)
                })
            })
            .collect();
        for k in 0..self.active.len() {
            self.active[k] = minimal.contains(&k);
        }
        let mut out = Vec::with_capacity(minimal.len());
        for &k in &minimal {
            let p = self.polys[k].clone();
            out.push(self.reduce(p, Some(k))?);
        }
        Ok(out)
    }
}

fn remove_joint_content<C: Coeff>(cur: &mut [Term<C>], rem: &mut [Term<C>]) {
    let mut all = cur.iter().chain(rem.iter());
    let Some(first) = all.next() else { return };
    let mut g = first.c.clone();
    for t in all {
        if g.is_one() {
            return;
        }
        g = g.gcd(&t.c);
    }
    let g = g.gcd(&g);
    if g.is_one() {
        return;
    }
    for t in cur.iter_mut().chain(rem.iter_mut()) {
        t.c = t.c.div_exact(&g);
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_pairs: 1_000_000, max_coeff_bits: 1 << 20, time_limit: None }
    }
}

impl Budget {
    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = Some(limit);
        self
    }
}
