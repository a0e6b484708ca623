//! Free graded Lie algebra on the dual alphabet of a complex, and the free
//! Gerstenhaber algebra built on top of it: wedge words of Lie words, with
//! the shifted bracket extended as a biderivation.

mod gword;
mod lie;
pub mod tensor;

pub use gword::{ge_add_scaled, ge_scale, GElem, GWordData};
pub use lie::{LieElem, LieWordData};

use crate::graded::{BasisElement, GradedSpace};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};
use tensor::TVec;

/// Dual alphabet entry: one letter per basis vector of the complex, with the
/// shifted fermionic degree 1 - ferm(source). Weight and charge are copied.
#[derive(Clone, Debug)]
pub struct Letter {
    pub source: usize,
    pub ferm: i64,
    pub weight: i64,
    pub charge: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureMode {
    Gerstenhaber,
    Lie,
}

#[derive(Clone, Debug)]
pub struct TruncationConfig {
    pub max_len: usize,
    pub max_weight: i64,
    pub charge_min: i64,
    pub charge_max: i64,
    pub mode: StructureMode,
}

#[derive(Debug, Clone)]
pub enum FreealgError {
    TruncationOverflow(String),
    Internal(String),
}

impl fmt::Display for FreealgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreealgError::TruncationOverflow(s) => write!(f, "truncation overflow: {}", s),
            FreealgError::Internal(s) => write!(f, "internal error: {}", s),
        }
    }
}

impl std::error::Error for FreealgError {}

/// All basis data for one complex under one truncation: letters, the Lie
/// word basis, the wedge word basis, derived graded spaces, and memo tables
/// for the two products.
pub struct GCtx {
    pub space: Arc<GradedSpace>,
    pub cfg: TruncationConfig,
    letters: Vec<Letter>,
    lie: lie::LieBasisSet,
    gwords: gword::GWordSet,
    g_spaces: Vec<Arc<GradedSpace>>,
    lie_memo: Mutex<HashMap<(usize, usize), Arc<LieElem>>>,
    pub(in crate::freealg) bracket_memo: Mutex<HashMap<(usize, usize), Arc<GElem>>>,
}

pub fn letters_of(space: &GradedSpace) -> Vec<Letter> {
    space
        .basis
        .iter()
        .enumerate()
        .map(|(i, b)| Letter {
            source: i,
            ferm: 1 - b.ferm,
            weight: b.weight,
            charge: b.charge,
        })
        .collect()
}

impl GCtx {
    pub fn build(space: Arc<GradedSpace>, cfg: &TruncationConfig) -> Result<GCtx, FreealgError> {
        if cfg.max_len == 0 {
            return Err(FreealgError::Internal("max_len must be at least 1".into()));
        }
        let letters = letters_of(&space);
        let max_p = match cfg.mode {
            StructureMode::Gerstenhaber => cfg.max_len,
            StructureMode::Lie => 1,
        };
        let lie_set = lie::build(&letters, cfg, max_p);
        let lm = lie::LetterMeta::of(&letters);
        let words_ref = &lie_set;
        let key = |id: usize| {
            let w = &words_ref.words[id];
            (w.p(), w.weight, w.deg_lie, w.charge, id)
        };
        let gset = gword::build(&lie_set, &key, cfg, &lm);
        let mut ctx = GCtx {
            space,
            cfg: cfg.clone(),
            letters,
            lie: lie_set,
            gwords: gset,
            g_spaces: Vec::new(),
            lie_memo: Mutex::new(HashMap::new()),
            bracket_memo: Mutex::new(HashMap::new()),
        };
        let mut spaces = vec![Arc::new(GradedSpace::new(Vec::new()).unwrap())];
        for m in 1..=cfg.max_len {
            let basis: Vec<BasisElement> = ctx.gwords.by_m[m]
                .iter()
                .map(|&id| {
                    let w = &ctx.gwords.words[id];
                    BasisElement {
                        id: ctx.print_factors(&w.factors),
                        ferm: w.ga_ferm,
                        weight: w.weight,
                        charge: w.charge,
                    }
                })
                .collect();
            spaces.push(Arc::new(GradedSpace::new(basis).map_err(|e| {
                FreealgError::Internal(format!("derived basis for length {}: {}", m, e))
            })?));
        }
        ctx.g_spaces = spaces;
        Ok(ctx)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn lie_word(&self, id: usize) -> &LieWordData {
        &self.lie.words[id]
    }

    pub fn lie_word_count(&self, p: usize) -> usize {
        if p < self.lie.by_p.len() {
            self.lie.by_p[p].len()
        } else {
            0
        }
    }

    pub fn lie_words_of_len(&self, p: usize) -> &[usize] {
        if p < self.lie.by_p.len() {
            &self.lie.by_p[p]
        } else {
            &[]
        }
    }

    pub(in crate::freealg) fn factor_key(&self, id: usize) -> (usize, i64, i64, i64, usize) {
        let w = &self.lie.words[id];
        (w.p(), w.weight, w.deg_lie, w.charge, id)
    }

    /// GA sign degree of the suspended factor.
    pub fn ga_deg(&self, lie_id: usize) -> i64 {
        self.lie.words[lie_id].deg_lie + 1
    }

    /// [u, v] over the Lie basis, memoized.
    pub fn lie_bracket(&self, u: usize, v: usize) -> Result<Arc<LieElem>, FreealgError> {
        if let Some(hit) = self.lie_memo.lock().unwrap().get(&(u, v)) {
            return Ok(hit.clone());
        }
        let (vec, p, w, q) = self.lie.bracket_realized(&self.letters, u, v);
        if p > self.max_lie_len() {
            return Err(FreealgError::TruncationOverflow(format!(
                "bracket length {} exceeds {}",
                p,
                self.max_lie_len()
            )));
        }
        if w > self.cfg.max_weight {
            return Err(FreealgError::TruncationOverflow(format!(
                "bracket weight {} exceeds {}",
                w, self.cfg.max_weight
            )));
        }
        let elem = if vec.is_empty() {
            LieElem::new()
        } else {
            self.lie.express(p, w, q, vec)?
        };
        let arc = Arc::new(elem);
        self.lie_memo.lock().unwrap().insert((u, v), arc.clone());
        Ok(arc)
    }

    fn max_lie_len(&self) -> usize {
        match self.cfg.mode {
            StructureMode::Gerstenhaber => self.cfg.max_len,
            StructureMode::Lie => 1,
        }
    }

    /// Expand the left-normed word on the given letter sequence over the
    /// Lie basis.
    pub fn expand_letters(&self, seq: &[u32]) -> Result<LieElem, FreealgError> {
        let (vec, _) = lie::realize(&self.letters, seq);
        let w: i64 = seq.iter().map(|&a| self.letters[a as usize].weight).sum();
        let q: i64 = seq.iter().map(|&a| self.letters[a as usize].charge).sum();
        if vec.is_empty() {
            return Ok(LieElem::new());
        }
        self.lie.express(seq.len(), w, q, vec)
    }

    /// Tensor realization of a combination of Lie basis words.
    pub fn realize_elem(&self, elem: &LieElem) -> TVec {
        let mut acc = TVec::new();
        for (id, c) in elem {
            let (t, _) = lie::realize(&self.letters, &self.lie.words[*id].letters);
            tensor::tvec_add_scaled(&mut acc, &t, c);
        }
        acc
    }

    /// Expand an externally assembled tensor vector (from the word grammar)
    /// over the Lie basis.
    pub fn express_tensor(
        &self,
        p: usize,
        w: i64,
        q: i64,
        vec: TVec,
    ) -> Result<LieElem, FreealgError> {
        if vec.is_empty() {
            return Ok(LieElem::new());
        }
        self.lie.express(p, w, q, vec)
    }

    pub fn gword(&self, id: usize) -> &GWordData {
        &self.gwords.words[id]
    }

    pub fn gword_count(&self, m: usize) -> usize {
        if m < self.gwords.by_m.len() {
            self.gwords.by_m[m].len()
        } else {
            0
        }
    }

    pub fn gwords_of_len(&self, m: usize) -> &[usize] {
        if m < self.gwords.by_m.len() {
            &self.gwords.by_m[m]
        } else {
            &[]
        }
    }

    /// The derived graded space whose basis is the length-m wedge words, in
    /// enumeration order. Ids are the printed normal forms.
    pub fn g_space(&self, m: usize) -> Arc<GradedSpace> {
        self.g_spaces[m].clone()
    }

    /// The G_1 word of a single letter.
    pub fn gword_of_letter(&self, letter: u32) -> usize {
        let lie_id = self.lie.by_p[1]
            .iter()
            .copied()
            .find(|&id| self.lie.words[id].letters == [letter])
            .expect("letter word");
        self.gwords.index[&vec![lie_id]]
    }

    pub fn gword_of_factors(&self, factors: &[usize]) -> Option<usize> {
        self.gwords.index.get(factors).copied()
    }

    pub fn single_factor_word(&self, lie_id: usize) -> Result<usize, FreealgError> {
        self.interned(&[lie_id])
    }

    pub fn print_lie(&self, id: usize) -> String {
        let letters = &self.lie.words[id].letters;
        let mut s = self.space.elem(self.letters[letters[0] as usize].source).id.clone();
        for &a in &letters[1..] {
            let name = &self.space.elem(self.letters[a as usize].source).id;
            s = format!("[{},{}]", s, name);
        }
        s
    }

    pub(in crate::freealg) fn print_factors(&self, factors: &[usize]) -> String {
        factors
            .iter()
            .map(|&f| self.print_lie(f))
            .collect::<Vec<_>>()
            .join("^")
    }

    pub fn print_gword(&self, id: usize) -> String {
        self.print_factors(&self.gwords.words[id].factors)
    }

    pub fn print_gelem(&self, elem: &GElem) -> String {
        if elem.is_empty() {
            return "0".into();
        }
        elem.iter()
            .map(|(w, c)| format!("{}*{}", c, self.print_gword(*w)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}
