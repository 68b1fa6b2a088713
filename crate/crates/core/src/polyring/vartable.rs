use std::collections::HashMap;
use std::fmt;

use super::PolyError;

/// What a flattened polynomial variable stands for.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarDesc {
    Independent(String),
    Parameter(String),
    /// A derivative of differential indeterminate `indet` with multi-index `index`.
    Deriv { indet: usize, index: Vec<u32> },
    Auxiliary(String),
}

/// Variable classes, listed from lowest to highest default rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarClass {
    Parameter,
    Independent,
    Deriv,
    Auxiliary,
}

impl VarDesc {
    pub fn class(&self) -> VarClass {
        match self {
            VarDesc::Independent(_) => VarClass::Independent,
            VarDesc::Parameter(_) => VarClass::Parameter,
            VarDesc::Deriv { .. } => VarClass::Deriv,
            VarDesc::Auxiliary(_) => VarClass::Auxiliary,
        }
    }
}

/// Dense numbering of the variables of one polynomial ring.
///
/// Indices are assigned in insertion order and never change, so a table can
/// only grow. `indet_names` is display metadata for `Deriv` descriptors.
#[derive(Clone, Debug, Default)]
pub struct VarTable {
    vars: Vec<VarDesc>,
    lookup: HashMap<VarDesc, usize>,
    indet_names: Vec<String>,
}

impl PartialEq for VarTable {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars
    }
}

impl Eq for VarTable {}

impl VarTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_indeterminates(names: Vec<String>) -> Self {
        VarTable {
            indet_names: names,
            ..Self::default()
        }
    }

    pub fn push(&mut self, desc: VarDesc) -> Result<usize, PolyError> {
        if self.lookup.contains_key(&desc) {
            return Err(PolyError::DuplicateVariable(self.describe(&desc)));
        }
        let idx = self.vars.len();
        self.lookup.insert(desc.clone(), idx);
        self.vars.push(desc);
        Ok(idx)
    }

    /// Index of `desc`, inserting it when absent.
    pub fn intern(&mut self, desc: VarDesc) -> usize {
        match self.lookup.get(&desc) {
            Some(&i) => i,
            None => self.push(desc).expect("absent descriptor"),
        }
    }

    pub fn index_of(&self, desc: &VarDesc) -> Option<usize> {
        self.lookup.get(desc).copied()
    }

    pub fn desc(&self, i: usize) -> &VarDesc {
        &self.vars[i]
    }

    pub fn class(&self, i: usize) -> VarClass {
        self.vars[i].class()
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn descs(&self) -> &[VarDesc] {
        &self.vars
    }

    pub fn indet_names(&self) -> &[String] {
        &self.indet_names
    }

    pub fn set_indet_names(&mut self, names: Vec<String>) {
        self.indet_names = names;
    }

    pub fn name(&self, i: usize) -> String {
        self.describe(&self.vars[i])
    }

    fn describe(&self, desc: &VarDesc) -> String {
        match desc {
            VarDesc::Independent(n) | VarDesc::Parameter(n) | VarDesc::Auxiliary(n) => n.clone(),
            VarDesc::Deriv { indet, index } => {
                let base = self
                    .indet_names
                    .get(*indet)
                    .cloned()
                    .unwrap_or_else(|| format!("u{indet}"));
                if index.iter().all(|&k| k == 0) {
                    base
                } else {
                    let idx: Vec<String> = index.iter().map(|k| k.to_string()).collect();
                    format!("{base}[{}]", idx.join(","))
                }
            }
        }
    }
}

impl fmt::Display for VarTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.len()).map(|i| self.name(i)).collect();
        write!(f, "[{}]", names.join(", "))
    }
}
