use super::tensor::{bracket_letter, bracket_tensor, Echelon, TVec};
use super::{FreealgError, Letter, TruncationConfig};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::collections::HashMap;

/// Basis word of the free graded Lie algebra: the left-normed bracket
/// [[...[a_1,a_2],...],a_p] stored as its letter list.
#[derive(Clone, Debug)]
pub struct LieWordData {
    pub letters: Vec<u32>,
    pub deg_lie: i64,
    pub weight: i64,
    pub charge: i64,
}

impl LieWordData {
    pub fn p(&self) -> usize {
        self.letters.len()
    }
}

/// Linear combination of Lie basis words.
pub type LieElem = BTreeMap<usize, Scalar>;

pub(super) struct Block {
    pub word_ids: Vec<usize>,
    pub echelon: Echelon,
}

pub(super) struct LieBasisSet {
    pub words: Vec<LieWordData>,
    pub blocks: HashMap<(usize, i64, i64), Block>,
    pub by_p: Vec<Vec<usize>>,
}

/// A partial word of total charge q and length len can still be part of an
/// in-window computation if appending up to `max_len - len` letters can land
/// the total in the window. Sound because weights are non-negative and every
/// operation is charge-additive.
pub(super) fn charge_feasible(cfg: &TruncationConfig, lm: &LetterMeta, len: usize, q: i64) -> bool {
    let cap = (cfg.max_len - len) as i64;
    q + (cap * lm.max_charge).max(0) >= cfg.charge_min
        && q + (cap * lm.min_charge).min(0) <= cfg.charge_max
}

pub(super) struct LetterMeta {
    pub min_charge: i64,
    pub max_charge: i64,
}

impl LetterMeta {
    pub fn of(letters: &[Letter]) -> LetterMeta {
        LetterMeta {
            min_charge: letters.iter().map(|l| l.charge).min().unwrap_or(0),
            max_charge: letters.iter().map(|l| l.charge).max().unwrap_or(0),
        }
    }
}

pub(super) fn realize(letters: &[Letter], word: &[u32]) -> (TVec, i64) {
    let mut acc = TVec::new();
    acc.insert(vec![word[0]], Scalar::one());
    let mut deg = letters[word[0] as usize].ferm;
    for &a in &word[1..] {
        let ad = letters[a as usize].ferm;
        acc = bracket_letter(&acc, deg, a, ad);
        deg += ad;
    }
    (acc, deg)
}

pub(super) fn build(letters: &[Letter], cfg: &TruncationConfig, max_p: usize) -> LieBasisSet {
    let lm = LetterMeta::of(letters);
    let mut set = LieBasisSet {
        words: Vec::new(),
        blocks: HashMap::new(),
        by_p: vec![Vec::new(); max_p + 1],
    };
    let mut seq: Vec<u32> = Vec::new();
    for p in 1..=max_p {
        gen_words(letters, cfg, &lm, p, &mut seq, 0, 0, &mut set);
    }
    set
}

fn gen_words(
    letters: &[Letter],
    cfg: &TruncationConfig,
    lm: &LetterMeta,
    p: usize,
    seq: &mut Vec<u32>,
    w: i64,
    q: i64,
    set: &mut LieBasisSet,
) {
    if seq.len() == p {
        let (vec, _) = realize(letters, seq);
        if vec.is_empty() {
            return;
        }
        let block = set
            .blocks
            .entry((p, w, q))
            .or_insert_with(|| Block {
                word_ids: Vec::new(),
                echelon: Echelon::new(),
            });
        let id = set.words.len();
        if block.echelon.try_insert(id, vec) {
            block.word_ids.push(id);
            set.words.push(LieWordData {
                letters: seq.clone(),
                deg_lie: seq.iter().map(|&a| letters[a as usize].ferm).sum(),
                weight: w,
                charge: q,
            });
            set.by_p[p].push(id);
        }
        return;
    }
    for (i, l) in letters.iter().enumerate() {
        let nw = w + l.weight;
        if nw > cfg.max_weight {
            continue;
        }
        let nq = q + l.charge;
        if !charge_feasible(cfg, lm, seq.len() + 1, nq) {
            continue;
        }
        seq.push(i as u32);
        gen_words(letters, cfg, lm, p, seq, nw, nq, set);
        seq.pop();
    }
}

impl LieBasisSet {
    /// Express an arbitrary homogeneous tensor vector over the basis.
    pub(super) fn express(
        &self,
        p: usize,
        w: i64,
        q: i64,
        vec: TVec,
    ) -> Result<LieElem, FreealgError> {
        if vec.is_empty() {
            return Ok(LieElem::new());
        }
        let block = self.blocks.get(&(p, w, q)).ok_or_else(|| {
            FreealgError::TruncationOverflow(format!(
                "no length-{} block at weight {}, charge {}",
                p, w, q
            ))
        })?;
        block.echelon.express(vec).ok_or_else(|| {
            FreealgError::Internal(format!(
                "vector outside the Lie span in block ({}, {}, {})",
                p, w, q
            ))
        })
    }

    pub(super) fn bracket_realized(
        &self,
        letters: &[Letter],
        i: usize,
        j: usize,
    ) -> (TVec, usize, i64, i64) {
        let wi = &self.words[i];
        let wj = &self.words[j];
        let (ri, di) = realize(letters, &wi.letters);
        let (rj, dj) = realize(letters, &wj.letters);
        let vec = bracket_tensor(&ri, di, &rj, dj);
        (
            vec,
            wi.p() + wj.p(),
            wi.weight + wj.weight,
            wi.charge + wj.charge,
        )
    }
}
