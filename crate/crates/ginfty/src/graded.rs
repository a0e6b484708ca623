use std::collections::HashMap;
use std::fmt;

/// One basis vector of the input complex, carrying the three gradings the
/// engine tracks: homological (fermionic) degree, conformal weight, and
/// charge. Weight must be non-negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub id: String,
    pub ferm: i64,
    pub weight: i64,
    pub charge: i64,
}

/// Finite-dimensional trigraded vector space with a fixed ordered basis.
#[derive(Clone, Debug)]
pub struct GradedSpace {
    pub basis: Vec<BasisElement>,
    index: HashMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceError {
    DuplicateId(String),
    NegativeWeight(String, i64),
}

impl fmt::Display for SpaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceError::DuplicateId(id) => write!(f, "duplicate basis id {:?}", id),
            SpaceError::NegativeWeight(id, w) => {
                write!(f, "basis element {:?} has negative weight {}", id, w)
            }
        }
    }
}

impl std::error::Error for SpaceError {}

/// Ids accepted in input files and in the word grammar. Derived bases use
/// composite ids (bracket words) that intentionally fail this.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl GradedSpace {
    pub fn new(basis: Vec<BasisElement>) -> Result<Self, SpaceError> {
        let mut index = HashMap::new();
        for (i, b) in basis.iter().enumerate() {
            if b.weight < 0 {
                return Err(SpaceError::NegativeWeight(b.id.clone(), b.weight));
            }
            if index.insert(b.id.clone(), i).is_some() {
                return Err(SpaceError::DuplicateId(b.id.clone()));
            }
        }
        Ok(GradedSpace { basis, index })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn elem(&self, i: usize) -> &BasisElement {
        &self.basis[i]
    }

    pub fn weight_range(&self) -> (i64, i64) {
        let ws = self.basis.iter().map(|b| b.weight);
        (ws.clone().min().unwrap_or(0), ws.max().unwrap_or(0))
    }

    pub fn charge_range(&self) -> (i64, i64) {
        let qs = self.basis.iter().map(|b| b.charge);
        (qs.clone().min().unwrap_or(0), qs.max().unwrap_or(0))
    }
}
