use super::lie::{charge_feasible, LetterMeta};
use super::{FreealgError, GCtx, TruncationConfig};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::collections::HashMap;

/// Wedge word of GA: a sorted multiset of Lie basis word ids. The fermionic
/// degree counts the per-factor shift: each factor of Lie degree d
/// contributes d + 1.
#[derive(Clone, Debug)]
pub struct GWordData {
    pub factors: Vec<usize>,
    pub m: usize,
    pub ga_ferm: i64,
    pub weight: i64,
    pub charge: i64,
    pub pos_in_m: usize,
}

/// Linear combination of GWords.
pub type GElem = BTreeMap<usize, Scalar>;

pub fn ge_add_scaled(target: &mut GElem, src: &GElem, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    for (w, a) in src {
        let e = target.entry(*w).or_insert_with(Scalar::zero);
        *e += a * c;
        if e.is_zero() {
            target.remove(w);
        }
    }
}

pub fn ge_scale(target: &mut GElem, c: &Scalar) {
    if c.is_zero() {
        target.clear();
        return;
    }
    for a in target.values_mut() {
        *a *= c.clone();
    }
}

pub(super) struct GWordSet {
    pub words: Vec<GWordData>,
    pub by_m: Vec<Vec<usize>>,
    pub index: HashMap<Vec<usize>, usize>,
}

pub(super) fn build(
    ctx_words: &super::lie::LieBasisSet,
    factor_key: &dyn Fn(usize) -> (usize, i64, i64, i64, usize),
    cfg: &TruncationConfig,
    lm: &LetterMeta,
) -> GWordSet {
    let mut all: Vec<usize> = (0..ctx_words.words.len()).collect();
    all.sort_by_key(|&id| factor_key(id));
    let mut set = GWordSet {
        words: Vec::new(),
        by_m: vec![Vec::new(); cfg.max_len + 1],
        index: HashMap::new(),
    };
    let mut chosen: Vec<usize> = Vec::new();
    for m in 1..=cfg.max_len {
        gen(ctx_words, &all, cfg, lm, m, 0, 0, 0, &mut chosen, &mut set);
    }
    set
}

#[allow(clippy::too_many_arguments)]
fn gen(
    lie: &super::lie::LieBasisSet,
    sorted: &[usize],
    cfg: &TruncationConfig,
    lm: &LetterMeta,
    m: usize,
    from: usize,
    len: usize,
    _depth: usize,
    chosen: &mut Vec<usize>,
    set: &mut GWordSet,
) {
    if len == m {
        let id = set.words.len();
        let ga_ferm = chosen
            .iter()
            .map(|&f| lie.words[f].deg_lie + 1)
            .sum::<i64>();
        let weight = chosen.iter().map(|&f| lie.words[f].weight).sum();
        let charge = chosen.iter().map(|&f| lie.words[f].charge).sum();
        let pos_in_m = set.by_m[m].len();
        set.index.insert(chosen.clone(), id);
        set.by_m[m].push(id);
        set.words.push(GWordData {
            factors: chosen.clone(),
            m,
            ga_ferm,
            weight,
            charge,
            pos_in_m,
        });
        return;
    }
    let cur_w: i64 = chosen.iter().map(|&f| lie.words[f].weight).sum();
    let cur_q: i64 = chosen.iter().map(|&f| lie.words[f].charge).sum();
    let cur_letters: usize = chosen.iter().map(|&f| lie.words[f].p()).sum();
    for (pos, &cand) in sorted.iter().enumerate().skip(from) {
        let wd = &lie.words[cand];
        let p = wd.p();
        if cur_letters + p > m {
            continue;
        }
        // odd GA-degree factors square to zero
        if (wd.deg_lie + 1).rem_euclid(2) == 1 && chosen.last() == Some(&cand) {
            continue;
        }
        let nw = cur_w + wd.weight;
        if nw > cfg.max_weight {
            continue;
        }
        let nq = cur_q + wd.charge;
        if !charge_feasible(cfg, lm, cur_letters + p, nq) {
            continue;
        }
        chosen.push(cand);
        gen(lie, sorted, cfg, lm, m, pos, len + p, 0, chosen, set);
        chosen.pop();
    }
}

/// Merge two factor lists already in normal form, with the Koszul sign of
/// interleaving. None when an odd-degree factor repeats.
pub(super) fn merge_wedge(
    ctx: &GCtx,
    a: &[usize],
    b: &[usize],
) -> Option<(Vec<usize>, Scalar)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut sign = Scalar::one();
    let mut i = 0;
    let mut j = 0;
    // sign degree of the yet-unmerged tail of a
    let mut a_tail: i64 = a.iter().map(|&f| ctx.ga_deg(f)).sum();
    while i < a.len() && j < b.len() {
        if ctx.factor_key(a[i]) <= ctx.factor_key(b[j]) {
            a_tail -= ctx.ga_deg(a[i]);
            out.push(a[i]);
            i += 1;
        } else {
            sign *= Scalar::neg_one_pow(ctx.ga_deg(b[j]) * a_tail);
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    for k in 1..out.len() {
        if out[k] == out[k - 1] && ctx.ga_deg(out[k]).rem_euclid(2) == 1 {
            return None;
        }
    }
    Some((out, sign))
}

impl GCtx {
    pub(super) fn interned(&self, factors: &[usize]) -> Result<usize, FreealgError> {
        self.gwords.index.get(factors).copied().ok_or_else(|| {
            FreealgError::TruncationOverflow(format!(
                "wedge word {} leaves the configured window",
                self.print_factors(factors)
            ))
        })
    }

    /// x ^ y over arbitrary combinations.
    pub fn wedge(&self, x: &GElem, y: &GElem) -> Result<GElem, FreealgError> {
        let mut out = GElem::new();
        for (u, cu) in x {
            for (v, cv) in y {
                let wu = self.gword(*u);
                let wv = self.gword(*v);
                if wu.m + wv.m > self.cfg.max_len {
                    return Err(FreealgError::TruncationOverflow(format!(
                        "wedge of lengths {} and {} exceeds {}",
                        wu.m, wv.m, self.cfg.max_len
                    )));
                }
                if let Some((factors, sign)) = merge_wedge(self, &wu.factors, &wv.factors) {
                    let id = self.interned(&factors)?;
                    let c = cu * cv * sign;
                    let e = out.entry(id).or_insert_with(Scalar::zero);
                    *e += c;
                    if e.is_zero() {
                        out.remove(&id);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Bracket of two basis words, memoized. Lie-algebra level on single
    /// factors, biderivation expansion otherwise.
    pub fn g_bracket(&self, u: usize, w: usize) -> Result<std::sync::Arc<GElem>, FreealgError> {
        if let Some(hit) = self.bracket_memo.lock().unwrap().get(&(u, w)) {
            return Ok(hit.clone());
        }
        let du = self.gword(u);
        let dw = self.gword(w);
        if du.m + dw.m > self.cfg.max_len {
            return Err(FreealgError::TruncationOverflow(format!(
                "bracket of lengths {} and {} exceeds {}",
                du.m, dw.m, self.cfg.max_len
            )));
        }
        let result: GElem = if dw.factors.len() >= 2 {
            let mu1 = dw.factors[0];
            let wrest = &dw.factors[1..];
            let mu1_word = self.interned(&[mu1])?;
            let wrest_word = self.interned(wrest)?;
            let t1 = self.g_bracket(u, mu1_word)?;
            let mut out = self.wedge_elem_factors(&t1, wrest)?;
            let t2 = self.g_bracket(u, wrest_word)?;
            let sign = Scalar::neg_one_pow((du.ga_ferm - 1) * self.ga_deg(mu1));
            let mut part = self.wedge_factor_elem(mu1, &t2)?;
            ge_scale(&mut part, &sign);
            ge_add_scaled(&mut out, &part, &Scalar::one());
            out
        } else if du.factors.len() >= 2 {
            let la1 = du.factors[0];
            let urest = &du.factors[1..];
            let la1_word = self.interned(&[la1])?;
            let urest_word = self.interned(urest)?;
            let t1 = self.g_bracket(urest_word, w)?;
            let mut out = self.wedge_factor_elem(la1, &t1)?;
            let urest_deg: i64 = urest.iter().map(|&f| self.ga_deg(f)).sum();
            let sign = Scalar::neg_one_pow((dw.ga_ferm - 1) * urest_deg);
            let t2 = self.g_bracket(la1_word, w)?;
            let mut part = self.wedge_elem_factors(&t2, urest)?;
            ge_scale(&mut part, &sign);
            ge_add_scaled(&mut out, &part, &Scalar::one());
            out
        } else {
            let la = du.factors[0];
            let mu = dw.factors[0];
            let alpha =
                Scalar::neg_one_pow(self.lie.words[la].deg_lie * self.lie.words[mu].deg_lie);
            let bracket = self.lie_bracket(la, mu)?;
            let mut out = GElem::new();
            for (k, c) in bracket.iter() {
                let id = self.interned(&[*k])?;
                out.insert(id, c.clone() * &alpha);
            }
            out
        };
        let arc = std::sync::Arc::new(result);
        self.bracket_memo
            .lock()
            .unwrap()
            .insert((u, w), arc.clone());
        Ok(arc)
    }

    /// Bracket over arbitrary combinations.
    pub fn g_bracket_elem(&self, x: &GElem, y: &GElem) -> Result<GElem, FreealgError> {
        let mut out = GElem::new();
        for (u, cu) in x {
            for (w, cw) in y {
                let b = self.g_bracket(*u, *w)?;
                let c = cu * cw;
                ge_add_scaled(&mut out, &b, &c);
            }
        }
        Ok(out)
    }

    /// factor ^ elem
    pub fn wedge_factor_elem(&self, factor: usize, elem: &GElem) -> Result<GElem, FreealgError> {
        let mut out = GElem::new();
        for (w, c) in elem {
            let wd = self.gword(*w);
            if let Some((factors, sign)) = merge_wedge(self, &[factor], &wd.factors) {
                let id = self.interned(&factors)?;
                let e = out.entry(id).or_insert_with(Scalar::zero);
                *e += c.clone() * sign;
                if e.is_zero() {
                    out.remove(&id);
                }
            }
        }
        Ok(out)
    }

    /// elem ^ (factor list in normal form)
    pub fn wedge_elem_factors(
        &self,
        elem: &GElem,
        factors: &[usize],
    ) -> Result<GElem, FreealgError> {
        let mut out = GElem::new();
        for (w, c) in elem {
            let wd = self.gword(*w);
            if let Some((merged, sign)) = merge_wedge(self, &wd.factors, factors) {
                let id = self.interned(&merged)?;
                let e = out.entry(id).or_insert_with(Scalar::zero);
                *e += c.clone() * sign;
                if e.is_zero() {
                    out.remove(&id);
                }
            }
        }
        Ok(out)
    }
}
