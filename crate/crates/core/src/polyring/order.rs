use std::cmp::Ordering;

use super::{Monomial, PolyError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InnerOrder {
    Lex,
    DegRevLex,
}

/// One block of a block (elimination) order; `vars` lists the block's
/// variables from highest to lowest rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderBlock {
    pub vars: Vec<usize>,
    pub inner: InnerOrder,
}

/// Monomial orders. Variable permutations list variables from highest rank
/// to lowest. `Block` compares the projection on the first block, then the
/// second, and so on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex(Vec<usize>),
    DegRevLex(Vec<usize>),
    Block(Vec<OrderBlock>),
}

impl MonomialOrder {
    pub fn blocks(&self) -> Vec<OrderBlock> {
        match self {
            MonomialOrder::Lex(p) => vec![OrderBlock { vars: p.clone(), inner: InnerOrder::Lex }],
            MonomialOrder::DegRevLex(p) => vec![OrderBlock { vars: p.clone(), inner: InnerOrder::DegRevLex }],
            MonomialOrder::Block(b) => b.clone(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.blocks().iter().map(|b| b.vars.len()).sum()
    }

    pub fn compile(&self, nvars: usize) -> Result<CompiledOrder, PolyError> {
        CompiledOrder::new(self, nvars, false)
    }

    /// Like [`compile`](Self::compile), but variables the order does not
    /// rank are allowed; keys ignore them.
    pub fn compile_partial(&self, nvars: usize) -> Result<CompiledOrder, PolyError> {
        CompiledOrder::new(self, nvars, true)
    }

    /// Three-way comparison; panics if the order is malformed.
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let c = self.compile(self.nvars()).expect("well-formed monomial order");
        c.compare(a, b)
    }

    /// Variables ranked highest first, flattened across blocks.
    pub fn ranking(&self) -> Vec<usize> {
        self.blocks().into_iter().flat_map(|b| b.vars).collect()
    }
}

/// One coordinate of a monomial's order key.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlotKind {
    /// Exponent of `var`.
    Pos(usize),
    /// Negated exponent of `var` (reverse-lex tiebreak).
    Neg(usize),
    /// Degree of a reverse-lex block whose `Neg` slots occupy `from..to`.
    Deg { from: usize, to: usize },
}

/// An order flattened into a key layout: monomials compare exactly as their
/// keys compare lexicographically, and keys are linear in the exponents so
/// products and quotients act on keys directly.
#[derive(Clone, Debug)]
pub struct CompiledOrder {
    nvars: usize,
    slots: Vec<SlotKind>,
    var_slot: Vec<usize>,
}

impl CompiledOrder {
    fn new(order: &MonomialOrder, nvars: usize, partial: bool) -> Result<Self, PolyError> {
        let blocks = order.blocks();
        let mut seen = vec![false; nvars];
        let mut slots = Vec::new();
        let mut var_slot = vec![usize::MAX; nvars];
        for block in &blocks {
            for &v in &block.vars {
                if v >= nvars {
                    return Err(PolyError::InvalidOrder(format!("variable {v} outside table of {nvars}")));
                }
                if seen[v] {
                    return Err(PolyError::InvalidOrder(format!("variable {v} ranked twice")));
                }
                seen[v] = true;
            }
            match block.inner {
                InnerOrder::Lex => {
                    for &v in &block.vars {
                        var_slot[v] = slots.len();
                        slots.push(SlotKind::Pos(v));
                    }
                }
                InnerOrder::DegRevLex => {
                    let from = slots.len() + 1;
                    let to = from + block.vars.len();
                    slots.push(SlotKind::Deg { from, to });
                    for &v in block.vars.iter().rev() {
                        var_slot[v] = slots.len();
                        slots.push(SlotKind::Neg(v));
                    }
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s).filter(|_| !partial) {
            return Err(PolyError::InvalidOrder(format!("variable {v} not ranked")));
        }
        Ok(CompiledOrder { nvars, slots, var_slot })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_ranked(&self, var: usize) -> bool {
        self.var_slot.get(var).is_some_and(|&s| s != usize::MAX)
    }

    pub fn has_unranked(&self) -> bool {
        self.var_slot.contains(&usize::MAX)
    }

    pub fn slots(&self) -> &[SlotKind] {
        &self.slots
    }

    pub fn key_len(&self) -> usize {
        self.slots.len()
    }

    pub fn key(&self, m: &Monomial) -> Vec<i32> {
        let mut key = vec![0i32; self.slots.len()];
        for (v, e) in m.iter() {
            let s = self.var_slot[v];
            if s == usize::MAX {
                continue;
            }
            match self.slots[s] {
                SlotKind::Pos(_) => key[s] = e as i32,
                SlotKind::Neg(_) => key[s] = -(e as i32),
                SlotKind::Deg { .. } => unreachable!(),
            }
        }
        self.fill_degrees(&mut key);
        key
    }

    fn fill_degrees(&self, key: &mut [i32]) {
        for s in 0..self.slots.len() {
            if let SlotKind::Deg { from, to } = self.slots[s] {
                key[s] = -key[from..to].iter().sum::<i32>();
            }
        }
    }

    pub fn monomial(&self, key: &[i32]) -> Monomial {
        Monomial::from_pairs(self.slots.iter().zip(key).filter_map(|(s, &k)| match *s {
            SlotKind::Pos(v) => Some((v, k as u32)),
            SlotKind::Neg(v) => Some((v, (-k) as u32)),
            SlotKind::Deg { .. } => None,
        }))
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }

    /// Whether the monomial keyed `a` divides the one keyed `b`.
    pub fn key_divides(&self, a: &[i32], b: &[i32]) -> bool {
        self.slots.iter().zip(a.iter().zip(b)).all(|(s, (&x, &y))| match s {
            SlotKind::Pos(_) => x <= y,
            SlotKind::Neg(_) => x >= y,
            SlotKind::Deg { .. } => true,
        })
    }

    pub fn key_lcm(&self, a: &[i32], b: &[i32]) -> Vec<i32> {
        let mut out: Vec<i32> = self
            .slots
            .iter()
            .zip(a.iter().zip(b))
            .map(|(s, (&x, &y))| match s {
                SlotKind::Pos(_) => x.max(y),
                SlotKind::Neg(_) => x.min(y),
                SlotKind::Deg { .. } => 0,
            })
            .collect();
        self.fill_degrees(&mut out);
        out
    }

    pub fn key_coprime(&self, a: &[i32], b: &[i32]) -> bool {
        self.slots.iter().zip(a.iter().zip(b)).all(|(s, (&x, &y))| match s {
            SlotKind::Pos(_) | SlotKind::Neg(_) => x == 0 || y == 0,
            SlotKind::Deg { .. } => true,
        })
    }

    pub fn key_degree(&self, a: &[i32]) -> u32 {
        self.slots
            .iter()
            .zip(a)
            .map(|(s, &x)| match s {
                SlotKind::Pos(_) | SlotKind::Neg(_) => x.unsigned_abs(),
                SlotKind::Deg { .. } => 0,
            })
            .sum()
    }

    /// Bitmask of variables with positive exponent (variable index mod 64).
    pub fn key_mask(&self, a: &[i32]) -> u64 {
        let mut m = 0u64;
        for (s, &x) in self.slots.iter().zip(a) {
            match *s {
                SlotKind::Pos(v) | SlotKind::Neg(v) if x != 0 => m |= 1 << (v % 64),
                _ => {}
            }
        }
        m
    }
}
