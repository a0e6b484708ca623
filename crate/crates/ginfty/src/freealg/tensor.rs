use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// Element of a tensor power of the alphabet space: word -> coefficient.
pub type TVec = BTreeMap<Vec<u32>, Scalar>;

pub fn tvec_add_scaled(target: &mut TVec, src: &TVec, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    for (w, a) in src {
        let e = target.entry(w.clone()).or_insert_with(Scalar::zero);
        *e += a * c;
        if e.is_zero() {
            target.remove(w);
        }
    }
}

/// [u, a] for a homogeneous tensor element u of sign degree `u_deg` and a
/// single letter: u (x) a - (-1)^{u_deg a_deg} a (x) u.
pub fn bracket_letter(u: &TVec, u_deg: i64, letter: u32, letter_deg: i64) -> TVec {
    let mut out = TVec::new();
    let sign = -Scalar::neg_one_pow(u_deg * letter_deg);
    for (w, c) in u {
        let mut left = w.clone();
        left.push(letter);
        *out.entry(left).or_insert_with(Scalar::zero) += c.clone();
        let mut right = Vec::with_capacity(w.len() + 1);
        right.push(letter);
        right.extend_from_slice(w);
        *out.entry(right).or_insert_with(Scalar::zero) += c.clone() * &sign;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// [u, v] for homogeneous tensor elements of sign degrees du, dv.
pub fn bracket_tensor(u: &TVec, du: i64, v: &TVec, dv: i64) -> TVec {
    let mut out = TVec::new();
    let sign = -Scalar::neg_one_pow(du * dv);
    for (wu, cu) in u {
        for (wv, cv) in v {
            let c = cu * cv;
            let mut uv = wu.clone();
            uv.extend_from_slice(wv);
            *out.entry(uv).or_insert_with(Scalar::zero) += c.clone();
            let mut vu = wv.clone();
            vu.extend_from_slice(wu);
            *out.entry(vu).or_insert_with(Scalar::zero) += c * &sign;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

struct EchelonRow {
    vec: TVec,
    /// this row as a combination of realized basis words (global word ids)
    expr: Vec<(usize, Scalar)>,
}

/// Incremental echelon over one tensor component, remembering how each row
/// decomposes over the selected basis words so arbitrary vectors can later be
/// expanded over the basis.
pub struct Echelon {
    rows: Vec<EchelonRow>,
    by_pivot: BTreeMap<Vec<u32>, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon {
            rows: Vec::new(),
            by_pivot: BTreeMap::new(),
        }
    }

    fn reduce(&self, mut v: TVec) -> (TVec, Vec<(usize, Scalar)>) {
        let mut combo = Vec::new();
        for (pivot, &idx) in &self.by_pivot {
            if let Some(c) = v.get(pivot) {
                let row = &self.rows[idx];
                let f = c.clone() / row.vec[pivot].clone();
                let neg = -f.clone();
                tvec_add_scaled(&mut v, &row.vec, &neg);
                combo.push((idx, f));
            }
        }
        (v, combo)
    }

    /// If the realization `v` of candidate word `word_id` is independent,
    /// insert it and return true.
    pub fn try_insert(&mut self, word_id: usize, v: TVec) -> bool {
        let (rem, combo) = self.reduce(v);
        if rem.is_empty() {
            return false;
        }
        let mut expr: BTreeMap<usize, Scalar> = BTreeMap::new();
        expr.insert(word_id, Scalar::one());
        for (row_idx, c) in combo {
            for (w, a) in &self.rows[row_idx].expr {
                let e = expr.entry(*w).or_insert_with(Scalar::zero);
                *e -= a * &c;
                if e.is_zero() {
                    expr.remove(w);
                }
            }
        }
        let pivot = rem.keys().next().unwrap().clone();
        self.by_pivot.insert(pivot, self.rows.len());
        self.rows.push(EchelonRow {
            vec: rem,
            expr: expr.into_iter().collect(),
        });
        true
    }

    /// Expand an arbitrary vector of this component over the selected basis
    /// words. None if it is outside the span (cannot happen for elements of
    /// the free Lie algebra itself).
    pub fn express(&self, v: TVec) -> Option<BTreeMap<usize, Scalar>> {
        let (rem, combo) = self.reduce(v);
        if !rem.is_empty() {
            return None;
        }
        let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (row_idx, c) in combo {
            for (w, a) in &self.rows[row_idx].expr {
                let e = out.entry(*w).or_insert_with(Scalar::zero);
                *e += a * &c;
                if e.is_zero() {
                    out.remove(w);
                }
            }
        }
        Some(out)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}
