use crate::graded::GradedSpace;
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// Coefficient vector over the fixed basis of a `GradedSpace`. BTreeMap so
/// iteration order (and hence all printed output) is deterministic.
pub type SparseVec = BTreeMap<usize, Scalar>;

pub fn vec_add_scaled(target: &mut SparseVec, src: &SparseVec, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    for (i, a) in src {
        let entry = target.entry(*i).or_insert_with(Scalar::zero);
        *entry += a * c;
        if entry.is_zero() {
            target.remove(i);
        }
    }
}

pub fn vec_sub(target: &mut SparseVec, src: &SparseVec) {
    for (i, a) in src {
        let entry = target.entry(*i).or_insert_with(Scalar::zero);
        *entry -= a.clone();
        if entry.is_zero() {
            target.remove(i);
        }
    }
}

pub fn vec_scale(target: &mut SparseVec, c: &Scalar) {
    if c.is_zero() {
        target.clear();
        return;
    }
    for a in target.values_mut() {
        *a *= c.clone();
    }
}

pub fn unit_vec(i: usize) -> SparseVec {
    let mut v = SparseVec::new();
    v.insert(i, Scalar::one());
    v
}

/// Koszul sign for moving an object of degree `a` past one of degree `b`.
pub fn koszul(a: i64, b: i64) -> Scalar {
    Scalar::neg_one_pow(a * b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapError {
    GradingMismatch {
        map: String,
        inputs: Vec<String>,
        output: String,
        detail: String,
    },
    DuplicateEntry { map: String, keys: Vec<String> },
}

impl fmt::Display for MapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapError::GradingMismatch {
                map,
                inputs,
                output,
                detail,
            } => write!(
                f,
                "{}: entry ({}) -> {} breaks grading: {}",
                map,
                inputs.join(", "),
                output,
                detail
            ),
            MapError::DuplicateEntry { map, keys } => {
                write!(f, "{}: duplicate entry for ({})", map, keys.join(", "))
            }
        }
    }
}

impl std::error::Error for MapError {}

/// Grading-homogeneous linear map between two graded spaces, stored
/// column-wise. Weight and charge are always preserved; only the fermionic
/// degree shifts.
#[derive(Clone, Debug)]
pub struct SparseLinear {
    pub domain: Arc<GradedSpace>,
    pub codomain: Arc<GradedSpace>,
    pub ferm_shift: i64,
    cols: Vec<SparseVec>,
}

fn same_space(a: &Arc<GradedSpace>, b: &Arc<GradedSpace>) -> bool {
    Arc::ptr_eq(a, b) || a.dim() == b.dim() && a.basis.iter().zip(b.basis.iter()).all(|(x, y)| x == y)
}

impl SparseLinear {
    pub fn zero(domain: Arc<GradedSpace>, codomain: Arc<GradedSpace>, ferm_shift: i64) -> Self {
        let cols = vec![SparseVec::new(); domain.dim()];
        SparseLinear {
            domain,
            codomain,
            ferm_shift,
            cols,
        }
    }

    pub fn identity(space: Arc<GradedSpace>) -> Self {
        let mut m = SparseLinear::zero(space.clone(), space, 0);
        for i in 0..m.domain.dim() {
            m.cols[i].insert(i, Scalar::one());
        }
        m
    }

    pub fn is_endo(&self) -> bool {
        same_space(&self.domain, &self.codomain)
    }

    pub fn from_entries(
        name: &str,
        domain: Arc<GradedSpace>,
        codomain: Arc<GradedSpace>,
        ferm_shift: i64,
        entries: &[(usize, usize, Scalar)],
    ) -> Result<Self, MapError> {
        let mut m = SparseLinear::zero(domain, codomain, ferm_shift);
        for (input, output, c) in entries {
            let bi = m.domain.elem(*input);
            let bo = m.codomain.elem(*output);
            if bo.ferm != bi.ferm + ferm_shift || bo.weight != bi.weight || bo.charge != bi.charge
            {
                return Err(MapError::GradingMismatch {
                    map: name.to_string(),
                    inputs: vec![bi.id.clone()],
                    output: bo.id.clone(),
                    detail: format!(
                        "expected (ferm, weight, charge) = ({}, {}, {}), got ({}, {}, {})",
                        bi.ferm + ferm_shift,
                        bi.weight,
                        bi.charge,
                        bo.ferm,
                        bo.weight,
                        bo.charge
                    ),
                });
            }
            if m.cols[*input].contains_key(output) {
                return Err(MapError::DuplicateEntry {
                    map: name.to_string(),
                    keys: vec![bi.id.clone(), bo.id.clone()],
                });
            }
            if !c.is_zero() {
                m.cols[*input].insert(*output, c.clone());
            }
        }
        Ok(m)
    }

    pub fn col(&self, i: usize) -> &SparseVec {
        &self.cols[i]
    }

    pub fn set_entry(&mut self, input: usize, output: usize, c: Scalar) {
        if c.is_zero() {
            self.cols[input].remove(&output);
        } else {
            self.cols[input].insert(output, c);
        }
    }

    pub fn entry(&self, input: usize, output: usize) -> Scalar {
        self.cols[input].get(&output).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in v {
            vec_add_scaled(&mut out, &self.cols[*i], c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn support(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    /// self . other, applied right to left.
    pub fn compose(&self, other: &SparseLinear) -> SparseLinear {
        assert!(
            same_space(&other.codomain, &self.domain),
            "compose: domain mismatch"
        );
        let mut m = SparseLinear::zero(
            other.domain.clone(),
            self.codomain.clone(),
            self.ferm_shift + other.ferm_shift,
        );
        for i in 0..m.domain.dim() {
            m.cols[i] = self.apply(other.col(i));
        }
        m
    }

    pub fn add_scaled(&mut self, other: &SparseLinear, c: &Scalar) {
        assert_eq!(self.ferm_shift, other.ferm_shift, "ferm shift mismatch");
        assert!(
            same_space(&self.domain, &other.domain) && same_space(&self.codomain, &other.codomain),
            "add: space mismatch"
        );
        for i in 0..self.cols.len() {
            let src = other.col(i).clone();
            vec_add_scaled(&mut self.cols[i], &src, c);
        }
    }

    /// f . g - (-1)^{|f||g|} g . f
    pub fn graded_commutator(f: &SparseLinear, g: &SparseLinear) -> SparseLinear {
        let mut m = f.compose(g);
        let sign = -koszul(f.ferm_shift, g.ferm_shift);
        m.add_scaled(&g.compose(f), &sign);
        m
    }

    /// Entries where this endomorphism disagrees with `scale_of(i) * id`.
    pub fn diag_mismatch(&self, scale_of: impl Fn(usize) -> Scalar) -> Vec<(usize, usize)> {
        assert!(self.is_endo(), "diag check needs an endomorphism");
        let mut bad = Vec::new();
        for i in 0..self.cols.len() {
            let want = scale_of(i);
            for (j, c) in self.col(i) {
                if *j != i || *c != want {
                    bad.push((i, *j));
                }
            }
            if !want.is_zero() && !self.col(i).contains_key(&i) {
                bad.push((i, i));
            }
        }
        bad
    }

    /// First nonzero column, as (domain index, column) - a witness for
    /// failed zero-checks.
    pub fn first_nonzero(&self) -> Option<(usize, &SparseVec)> {
        self.cols
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_empty())
            .map(|(i, c)| (i, c))
    }
}

/// Exchange law a bilinear operation is tested against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetryKind {
    /// m(x,y) = (-1)^{|x||y|} m(y,x)
    Commutative,
    /// m(x,y) = -(-1)^{(|x|-1)(|y|-1)} m(y,x)
    ShiftedSkew,
}

/// Bilinear operation on one space, stored as coefficient lists per ordered
/// input pair. Weight and charge add; fermionic degrees add up to a fixed
/// shift (0 for products, -1 for brackets).
#[derive(Clone, Debug)]
pub struct SparseBilinear {
    pub space: Arc<GradedSpace>,
    pub ferm_shift: i64,
    entries: HashMap<(usize, usize), SparseVec>,
    empty: SparseVec,
}

impl SparseBilinear {
    pub fn new(space: Arc<GradedSpace>, ferm_shift: i64) -> Self {
        SparseBilinear {
            space,
            ferm_shift,
            entries: HashMap::new(),
            empty: SparseVec::new(),
        }
    }

    pub fn from_entries(
        name: &str,
        space: Arc<GradedSpace>,
        ferm_shift: i64,
        entries: &[(usize, usize, usize, Scalar)],
    ) -> Result<Self, MapError> {
        let mut m = SparseBilinear::new(space, ferm_shift);
        for (x, y, output, c) in entries {
            let bx = m.space.elem(*x);
            let by = m.space.elem(*y);
            let bo = m.space.elem(*output);
            if bo.ferm != bx.ferm + by.ferm + ferm_shift
                || bo.weight != bx.weight + by.weight
                || bo.charge != bx.charge + by.charge
            {
                return Err(MapError::GradingMismatch {
                    map: name.to_string(),
                    inputs: vec![bx.id.clone(), by.id.clone()],
                    output: bo.id.clone(),
                    detail: format!(
                        "expected (ferm, weight, charge) = ({}, {}, {}), got ({}, {}, {})",
                        bx.ferm + by.ferm + ferm_shift,
                        bx.weight + by.weight,
                        bx.charge + by.charge,
                        bo.ferm,
                        bo.weight,
                        bo.charge
                    ),
                });
            }
            let slot = m.entries.entry((*x, *y)).or_default();
            if slot.contains_key(output) {
                return Err(MapError::DuplicateEntry {
                    map: name.to_string(),
                    keys: vec![bx.id.clone(), by.id.clone(), bo.id.clone()],
                });
            }
            if !c.is_zero() {
                slot.insert(*output, c.clone());
            }
        }
        m.entries.retain(|_, v| !v.is_empty());
        Ok(m)
    }

    pub fn set_pair(&mut self, x: usize, y: usize, value: SparseVec) {
        if value.is_empty() {
            self.entries.remove(&(x, y));
        } else {
            self.entries.insert((x, y), value);
        }
    }

    pub fn pair(&self, x: usize, y: usize) -> &SparseVec {
        self.entries.get(&(x, y)).unwrap_or(&self.empty)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&(usize, usize), &SparseVec)> {
        self.entries.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn apply(&self, u: &SparseVec, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, a) in u {
            for (j, b) in v {
                let c = a * b;
                vec_add_scaled(&mut out, self.pair(*i, *j), &c);
            }
        }
        out
    }

    /// First ordered pair violating the exchange law, if any.
    pub fn symmetry_failure(&self, kind: SymmetryKind) -> Option<(usize, usize)> {
        let n = self.space.dim();
        for x in 0..n {
            for y in x..n {
                let fx = self.space.elem(x).ferm;
                let fy = self.space.elem(y).ferm;
                let sign = match kind {
                    SymmetryKind::Commutative => koszul(fx, fy),
                    SymmetryKind::ShiftedSkew => -koszul(fx - 1, fy - 1),
                };
                let mut rhs = self.pair(y, x).clone();
                vec_scale(&mut rhs, &sign);
                let mut diff = self.pair(x, y).clone();
                vec_sub(&mut diff, &rhs);
                if !diff.is_empty() {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// Basis pairs violating the signed Leibniz rule
    /// f(m(x,y)) = m(f x, y) + (-1)^{|f| (|x| + s)} m(x, f y),
    /// s being this operation's fermionic shift.
    pub fn derivation_failures(&self, f: &SparseLinear) -> Vec<(usize, usize)> {
        let n = self.space.dim();
        let mut bad = Vec::new();
        for x in 0..n {
            for y in 0..n {
                let mut lhs = f.apply(self.pair(x, y));
                let rhs1 = self.apply(f.col(x), &unit_vec(y));
                let eps = koszul(f.ferm_shift, self.space.elem(x).ferm + self.ferm_shift);
                let mut rhs2 = self.apply(&unit_vec(x), f.col(y));
                vec_scale(&mut rhs2, &eps);
                vec_sub(&mut lhs, &rhs1);
                vec_sub(&mut lhs, &rhs2);
                if !lhs.is_empty() {
                    bad.push((x, y));
                }
            }
        }
        bad
    }

    /// Basis triples where (x y) z differs from x (y z).
    pub fn assoc_failures(&self) -> Vec<(usize, usize, usize)> {
        let n = self.space.dim();
        let mut bad = Vec::new();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let mut lhs = self.apply(self.pair(x, y), &unit_vec(z));
                    let rhs = self.apply(&unit_vec(x), self.pair(y, z));
                    vec_sub(&mut lhs, &rhs);
                    if !lhs.is_empty() {
                        bad.push((x, y, z));
                    }
                }
            }
        }
        bad
    }

    /// Basis triples violating the shifted Jacobi identity
    /// [x,[y,z]] = [[x,y],z] + (-1)^{(|x|-1)(|y|-1)} [y,[x,z]].
    pub fn shifted_jacobi_failures(&self) -> Vec<(usize, usize, usize)> {
        let n = self.space.dim();
        let mut bad = Vec::new();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let mut lhs = self.apply(&unit_vec(x), self.pair(y, z));
                    let rhs1 = self.apply(self.pair(x, y), &unit_vec(z));
                    let eps = koszul(self.space.elem(x).ferm - 1, self.space.elem(y).ferm - 1);
                    let mut rhs2 = self.apply(&unit_vec(y), self.pair(x, z));
                    vec_scale(&mut rhs2, &eps);
                    vec_sub(&mut lhs, &rhs1);
                    vec_sub(&mut lhs, &rhs2);
                    if !lhs.is_empty() {
                        bad.push((x, y, z));
                    }
                }
            }
        }
        bad
    }

    /// Basis triples violating the odd-Poisson rule
    /// [x, y z] = [x,y] z + (-1)^{(|x|-1)|y|} y [x,z],
    /// where self is the bracket and `product` the commutative operation.
    pub fn poisson_failures(&self, product: &SparseBilinear) -> Vec<(usize, usize, usize)> {
        let n = self.space.dim();
        let mut bad = Vec::new();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let mut lhs = self.apply(&unit_vec(x), product.pair(y, z));
                    let rhs1 = product.apply(self.pair(x, y), &unit_vec(z));
                    let eps = koszul(self.space.elem(x).ferm - 1, self.space.elem(y).ferm);
                    let mut rhs2 = product.apply(&unit_vec(y), self.pair(x, z));
                    vec_scale(&mut rhs2, &eps);
                    vec_sub(&mut lhs, &rhs1);
                    vec_sub(&mut lhs, &rhs2);
                    if !lhs.is_empty() {
                        bad.push((x, y, z));
                    }
                }
            }
        }
        bad
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::BasisElement;

    fn two_dim() -> Arc<GradedSpace> {
        Arc::new(
            GradedSpace::new(vec![
                BasisElement {
                    id: "u".into(),
                    ferm: 0,
                    weight: 1,
                    charge: 0,
                },
                BasisElement {
                    id: "v".into(),
                    ferm: 1,
                    weight: 1,
                    charge: 0,
                },
            ])
            .unwrap(),
        )
    }

    #[test]
    fn koszul_signs() {
        assert_eq!(koszul(0, 5), Scalar::one());
        assert_eq!(koszul(1, 1), -Scalar::one());
        assert_eq!(koszul(3, 2), Scalar::one());
    }

    #[test]
    fn compose_identity_and_zero() {
        let s = two_dim();
        let d = SparseLinear::from_entries("d", s.clone(), s.clone(), 1, &[(0, 1, Scalar::one())])
            .unwrap();
        let id = SparseLinear::identity(s.clone());
        let z = SparseLinear::zero(s.clone(), s.clone(), 0);
        assert_eq!(id.compose(&d).col(0), d.col(0));
        assert!(z.compose(&d).is_zero());
        assert!(d.compose(&d).is_zero());
        assert_eq!(d.compose(&d).ferm_shift, 2);
    }

    #[test]
    fn commutator_of_odd_map_doubles_square() {
        let s = two_dim();
        let d = SparseLinear::from_entries("d", s.clone(), s.clone(), 1, &[(0, 1, Scalar::one())])
            .unwrap();
        let c = SparseLinear::graded_commutator(&d, &d);
        let mut dd = d.compose(&d);
        dd.add_scaled(&d.compose(&d), &Scalar::one());
        assert_eq!(c.col(0), dd.col(0));
        assert_eq!(c.col(1), dd.col(1));
    }

    #[test]
    fn grading_is_validated() {
        let s = two_dim();
        let bad = SparseLinear::from_entries("m", s.clone(), s.clone(), 0, &[(0, 1, Scalar::one())]);
        assert!(matches!(bad, Err(MapError::GradingMismatch { .. })));
    }
}
