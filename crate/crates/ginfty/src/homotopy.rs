//! Inductive construction of the tower of higher maps. Each map is stored
//! by its values on letters; everything else is reached by extending those
//! values to wedge words as an odd derivation of both products.

use crate::freealg::{ge_add_scaled, ge_scale, FreealgError, GCtx, GElem};
use crate::scalar::Scalar;
use crate::sparse::SparseLinear;
use rayon::prelude::*;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

#[derive(Debug)]
pub enum HomotopyError {
    Freealg(FreealgError),
    ChainMap {
        order: usize,
        letter: String,
        defect: String,
    },
    WeightZeroObstruction {
        order: usize,
        letter: String,
        value: String,
    },
}

impl fmt::Display for HomotopyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomotopyError::Freealg(e) => write!(f, "{}", e),
            HomotopyError::ChainMap {
                order,
                letter,
                defect,
            } => write!(
                f,
                "obstruction at order {} is not a chain map on letter {}: defect {}",
                order, letter, defect
            ),
            HomotopyError::WeightZeroObstruction {
                order,
                letter,
                value,
            } => write!(
                f,
                "nonzero obstruction at order {} on weight-zero letter {}: {}",
                order, letter, value
            ),
        }
    }
}

impl std::error::Error for HomotopyError {}

impl From<FreealgError> for HomotopyError {
    fn from(e: FreealgError) -> Self {
        HomotopyError::Freealg(e)
    }
}

#[derive(Debug, Clone)]
pub struct StepStats {
    pub order: usize,
    pub letters_assigned: usize,
    pub nonzero_values: usize,
    pub max_terms: usize,
}

/// The tower under construction: values of every completed map on letters,
/// plus the splitting homotopy. Orders are counted so that order 1 is the
/// differential and order k sends single letters to words of k letters.
pub struct GammaFamily {
    pub ctx: Arc<GCtx>,
    orders: Vec<Vec<GElem>>,
    sigma: Vec<GElem>,
    gen_memo: Mutex<HashMap<(usize, Vec<u32>), Arc<GElem>>>,
    word_memo: Mutex<HashMap<(usize, usize), Arc<GElem>>>,
}

fn validate_values(
    ctx: &GCtx,
    vals: &[GElem],
    shift: i64,
    len: Option<usize>,
    what: &str,
) -> Result<(), HomotopyError> {
    if vals.len() != ctx.letters().len() {
        return Err(HomotopyError::Freealg(FreealgError::Internal(format!(
            "{}: {} values for {} letters",
            what,
            vals.len(),
            ctx.letters().len()
        ))));
    }
    for (i, v) in vals.iter().enumerate() {
        let a = &ctx.letters()[i];
        for w in v.keys() {
            let wd = ctx.gword(*w);
            let ok = wd.ga_ferm == a.ferm + 1 + shift
                && wd.weight == a.weight
                && wd.charge == a.charge
                && len.map_or(true, |m| wd.m == m);
            if !ok {
                return Err(HomotopyError::Freealg(FreealgError::Internal(format!(
                    "{}: value on letter {} contains mismatched word {}",
                    what,
                    ctx.space.elem(a.source).id,
                    ctx.print_gword(*w)
                ))));
            }
        }
    }
    Ok(())
}

impl GammaFamily {
    /// Start a tower from the differential and splitting homotopy, both
    /// given letterwise as combinations of letters.
    pub fn new(
        ctx: Arc<GCtx>,
        d: Vec<GElem>,
        sigma: Vec<GElem>,
    ) -> Result<GammaFamily, HomotopyError> {
        validate_values(&ctx, &d, 1, Some(1), "differential")?;
        validate_values(&ctx, &sigma, -1, Some(1), "splitting homotopy")?;
        Ok(GammaFamily {
            ctx,
            orders: vec![d],
            sigma,
            gen_memo: Mutex::new(HashMap::new()),
            word_memo: Mutex::new(HashMap::new()),
        })
    }

    /// Highest order whose letter values are all assigned.
    pub fn completed(&self) -> usize {
        self.orders.len()
    }

    /// Install the values of the next order, checking their grading.
    pub fn push_order(&mut self, vals: Vec<GElem>) -> Result<(), HomotopyError> {
        let k = self.orders.len() + 1;
        validate_values(&self.ctx, &vals, 1, Some(k), "pushed order")?;
        self.orders.push(vals);
        Ok(())
    }

    pub fn value(&self, order: usize, letter: usize) -> &GElem {
        &self.orders[order - 1][letter]
    }

    pub fn sigma(&self, letter: usize) -> &GElem {
        &self.sigma[letter]
    }

    pub fn letter_of_g1(&self, word: usize) -> usize {
        let wd = self.ctx.gword(word);
        assert_eq!(wd.m, 1, "not a single-letter word");
        self.ctx.lie_word(wd.factors[0]).letters[0] as usize
    }

    /// Value of the order-k extension on the left-normed generator over the
    /// given letter sequence.
    fn ext_gen(&self, order: usize, seq: &[u32]) -> Result<Arc<GElem>, HomotopyError> {
        assert!(
            order <= self.completed(),
            "extension of an incomplete order {}",
            order
        );
        assert!(!seq.is_empty());
        if seq.len() == 1 {
            return Ok(Arc::new(self.value(order, seq[0] as usize).clone()));
        }
        let key = (order, seq.to_vec());
        if let Some(hit) = self.gen_memo.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let ctx = &self.ctx;
        let (prefix, last) = seq.split_at(seq.len() - 1);
        let a = last[0];
        let deg_prefix: i64 = prefix
            .iter()
            .map(|&b| ctx.letters()[b as usize].ferm)
            .sum();
        let deg_a = ctx.letters()[a as usize].ferm;
        let val_prefix = self.ext_gen(order, prefix)?;
        let mut a_elem = GElem::new();
        a_elem.insert(ctx.gword_of_letter(a), Scalar::one());
        let mut out = ctx.g_bracket_elem(&val_prefix, &a_elem)?;
        let mut prefix_elem = GElem::new();
        for (lie_id, c) in ctx.expand_letters(prefix)? {
            prefix_elem.insert(ctx.single_factor_word(lie_id)?, c);
        }
        let val_a = self.value(order, a as usize);
        let mut t2 = ctx.g_bracket_elem(&prefix_elem, val_a)?;
        ge_scale(&mut t2, &Scalar::neg_one_pow(deg_prefix));
        ge_add_scaled(&mut out, &t2, &Scalar::one());
        ge_scale(&mut out, &Scalar::neg_one_pow(deg_prefix * deg_a));
        let arc = Arc::new(out);
        self.gen_memo.lock().unwrap().insert(key, arc.clone());
        Ok(arc)
    }

    /// Value of the order-k extension on a wedge word.
    fn ext_word(&self, order: usize, word: usize) -> Result<Arc<GElem>, HomotopyError> {
        let key = (order, word);
        if let Some(hit) = self.word_memo.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let ctx = &self.ctx;
        let wd = ctx.gword(word);
        let result = if wd.factors.len() == 1 {
            let letters = ctx.lie_word(wd.factors[0]).letters.clone();
            (*self.ext_gen(order, &letters)?).clone()
        } else {
            let f1 = wd.factors[0];
            let rest = &wd.factors[1..];
            let rest_id = ctx.gword_of_factors(rest).ok_or_else(|| {
                FreealgError::Internal(format!(
                    "suffix {} of an interned word is missing",
                    ctx.print_gword(word)
                ))
            })?;
            let letters = ctx.lie_word(f1).letters.clone();
            let head = self.ext_gen(order, &letters)?;
            let mut out = ctx.wedge_elem_factors(&head, rest)?;
            let tail = self.ext_word(order, rest_id)?;
            let mut t2 = ctx.wedge_factor_elem(f1, &tail)?;
            ge_scale(&mut t2, &Scalar::neg_one_pow(ctx.ga_deg(f1)));
            ge_add_scaled(&mut out, &t2, &Scalar::one());
            out
        };
        let arc = Arc::new(result);
        self.word_memo.lock().unwrap().insert(key, arc.clone());
        Ok(arc)
    }

    /// Apply the order-k extension linearly.
    pub fn ext_apply(&self, order: usize, x: &GElem) -> Result<GElem, HomotopyError> {
        let mut out = GElem::new();
        for (w, c) in x {
            let m = self.ctx.gword(*w).m;
            if m + order - 1 > self.ctx.cfg.max_len {
                return Err(HomotopyError::Freealg(FreealgError::TruncationOverflow(
                    format!(
                        "order-{} extension on a {}-letter word needs length {}",
                        order,
                        m,
                        m + order - 1
                    ),
                )));
            }
            let v = self.ext_word(order, *w)?;
            ge_add_scaled(&mut out, &v, c);
        }
        Ok(out)
    }

    /// Matrix of the order-k extension on words of m letters.
    pub fn extended_map(&self, order: usize, m: usize) -> Result<SparseLinear, HomotopyError> {
        let target = m + order - 1;
        if target > self.ctx.cfg.max_len {
            return Err(HomotopyError::Freealg(FreealgError::TruncationOverflow(
                format!("extension target length {} exceeds {}", target, self.ctx.cfg.max_len),
            )));
        }
        let mut map = SparseLinear::zero(self.ctx.g_space(m), self.ctx.g_space(target), 1);
        for (pos, &w) in self.ctx.gwords_of_len(m).iter().enumerate() {
            let v = self.ext_word(order, w)?;
            for (t, c) in v.iter() {
                map.set_entry(pos, self.ctx.gword(*t).pos_in_m, c.clone());
            }
        }
        Ok(map)
    }

    pub fn differential(&self, m: usize) -> Result<SparseLinear, HomotopyError> {
        self.extended_map(1, m)
    }

    pub fn sigma_map(&self) -> SparseLinear {
        let g1 = self.ctx.g_space(1);
        let mut map = SparseLinear::zero(g1.clone(), g1, -1);
        for (pos, &w) in self.ctx.gwords_of_len(1).iter().enumerate() {
            let a = self.letter_of_g1(w);
            for (t, c) in &self.sigma[a] {
                map.set_entry(pos, self.ctx.gword(*t).pos_in_m, c.clone());
            }
        }
        map
    }

    /// Obstruction at the given order on one letter: minus the sum of all
    /// strictly intermediate two-step compositions.
    pub fn obstruction_on_letter(&self, order: usize, letter: usize) -> Result<GElem, HomotopyError> {
        let mut acc = GElem::new();
        for j in 2..order {
            let inner = self.value(j, letter);
            let outer = self.ext_apply(order - j + 1, inner)?;
            ge_add_scaled(&mut acc, &outer, &Scalar::one());
        }
        ge_scale(&mut acc, &Scalar::from_int(-1));
        Ok(acc)
    }

    /// Quadratic relation at (1, order) on one letter; zero once the tower
    /// closes at that order.
    pub fn residual_on_letter(&self, order: usize, letter: usize) -> Result<GElem, HomotopyError> {
        let mut acc = GElem::new();
        for j in 1..=order {
            let inner = self.value(j, letter);
            let outer = self.ext_apply(order - j + 1, inner)?;
            ge_add_scaled(&mut acc, &outer, &Scalar::one());
        }
        Ok(acc)
    }

    /// Full matrix of the quadratic relation between word lengths i and k.
    pub fn residual(&self, i: usize, k: usize) -> Result<SparseLinear, HomotopyError> {
        let mut acc = SparseLinear::zero(self.ctx.g_space(i), self.ctx.g_space(k), 2);
        for j in i..=k {
            let inner = self.extended_map(j - i + 1, i)?;
            let outer = self.extended_map(k - j + 1, j)?;
            acc.add_scaled(&outer.compose(&inner), &Scalar::one());
        }
        Ok(acc)
    }

    fn obstruction_all(&self, order: usize) -> Result<Vec<GElem>, HomotopyError> {
        (0..self.ctx.letters().len())
            .into_par_iter()
            .map(|i| self.obstruction_on_letter(order, i))
            .collect()
    }

    /// d applied after the new-order obstruction minus the obstruction
    /// applied after d, letterwise; must vanish before a step is taken.
    pub fn chain_map_defect(&self, order: usize) -> Result<Option<(usize, GElem)>, HomotopyError> {
        let obs = self.obstruction_all(order)?;
        self.chain_map_defect_with(order, &obs)
    }

    fn chain_map_defect_with(
        &self,
        _order: usize,
        obs: &[GElem],
    ) -> Result<Option<(usize, GElem)>, HomotopyError> {
        for (i, ob) in obs.iter().enumerate() {
            let mut lhs = self.ext_apply(1, ob)?;
            for (w, c) in self.value(1, i) {
                let b = self.letter_of_g1(*w);
                ge_add_scaled(&mut lhs, &obs[b], &-c.clone());
            }
            if !lhs.is_empty() {
                return Ok(Some((i, lhs)));
            }
        }
        Ok(None)
    }

    /// Construct the next order: check the obstruction is a chain map, then
    /// split it through the homotopy, letters in increasing fermionic
    /// degree. Weight-zero letters take the value zero and their
    /// obstruction must already vanish.
    pub fn advance_order(&mut self) -> Result<StepStats, HomotopyError> {
        let order = self.completed() + 1;
        assert!(order >= 3, "seed orders must be installed directly");
        let obs = self.obstruction_all(order)?;
        if let Some((i, defect)) = self.chain_map_defect_with(order, &obs)? {
            return Err(HomotopyError::ChainMap {
                order,
                letter: self.ctx.space.elem(self.ctx.letters()[i].source).id.clone(),
                defect: self.ctx.print_gelem(&defect),
            });
        }
        let n = self.ctx.letters().len();
        let mut seq: Vec<usize> = (0..n).collect();
        seq.sort_by_key(|&i| (self.ctx.letters()[i].ferm, i));
        let mut new_vals: Vec<Option<GElem>> = vec![None; n];
        for &i in &seq {
            let a = &self.ctx.letters()[i];
            if a.weight == 0 {
                if !obs[i].is_empty() {
                    return Err(HomotopyError::WeightZeroObstruction {
                        order,
                        letter: self.ctx.space.elem(a.source).id.clone(),
                        value: self.ctx.print_gelem(&obs[i]),
                    });
                }
                new_vals[i] = Some(GElem::new());
                continue;
            }
            let mut obs_sig = GElem::new();
            let mut gam_sig = GElem::new();
            for (w, c) in &self.sigma[i] {
                let b = self.letter_of_g1(*w);
                ge_add_scaled(&mut obs_sig, &obs[b], c);
                let prev = new_vals[b].as_ref().ok_or_else(|| {
                    HomotopyError::Freealg(FreealgError::Internal(
                        "splitting homotopy does not lower the fermionic degree".into(),
                    ))
                })?;
                ge_add_scaled(&mut gam_sig, prev, c);
            }
            let d_gam = self.ext_apply(1, &gam_sig)?;
            let mut val = obs_sig;
            ge_add_scaled(&mut val, &d_gam, &Scalar::from_int(-1));
            ge_scale(&mut val, &Scalar::ratio(1, a.weight));
            new_vals[i] = Some(val);
        }
        let vals: Vec<GElem> = new_vals.into_iter().map(|v| v.unwrap()).collect();
        let nonzero = vals.iter().filter(|v| !v.is_empty()).count();
        let max_terms = vals.iter().map(|v| v.len()).max().unwrap_or(0);
        self.push_order(vals)?;
        Ok(StepStats {
            order,
            letters_assigned: n,
            nonzero_values: nonzero,
            max_terms,
        })
    }

    /// The splitting identity at the given order, letterwise: zero when the
    /// stored values solve it.
    pub fn nullhomotopy_defect(&self, order: usize) -> Result<Option<(usize, GElem)>, HomotopyError> {
        for i in 0..self.ctx.letters().len() {
            let mut lhs = self.ext_apply(1, self.value(order, i))?;
            for (w, c) in self.value(1, i) {
                let b = self.letter_of_g1(*w);
                ge_add_scaled(&mut lhs, self.value(order, b), c);
            }
            let rhs = self.obstruction_on_letter(order, i)?;
            let mut defect = lhs;
            ge_add_scaled(&mut defect, &rhs, &Scalar::from_int(-1));
            if !defect.is_empty() {
                return Ok(Some((i, defect)));
            }
        }
        Ok(None)
    }
}
