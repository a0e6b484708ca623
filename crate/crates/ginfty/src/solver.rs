//! Transfer onto a finite complex: validate the strict data, dualize it
//! into letter values, then raise the order one step at a time.

use crate::freealg::{
    ge_add_scaled, letters_of, FreealgError, GCtx, GElem, LieElem, StructureMode,
    TruncationConfig,
};
use crate::graded::GradedSpace;
use crate::homotopy::{GammaFamily, HomotopyError, StepStats};
use crate::scalar::Scalar;
use crate::sparse::{SparseBilinear, SparseLinear, SparseVec, SymmetryKind};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Strict input data: a differential, a splitting homotopy, a
/// graded-commutative product and a one-shifted bracket on one space. In
/// Lie mode the product slot must stay empty.
pub struct G2Input {
    pub space: Arc<GradedSpace>,
    pub m1: SparseLinear,
    pub h: SparseLinear,
    pub m2: SparseBilinear,
    pub m11: SparseBilinear,
}

#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub order: usize,
    pub mode: StructureMode,
}

#[derive(Debug)]
pub enum SolveError {
    Contract(String),
    SeedNotG2(String),
    WeightZeroNotStrict(String),
    SymmetryMismatch(String),
    Truncation(String),
    ChainMap(String),
    ResidualNonzero(String),
    Internal(String),
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::Contract(s) => write!(f, "contract violation: {}", s),
            SolveError::SeedNotG2(s) => write!(f, "seed does not define a quadratic value: {}", s),
            SolveError::WeightZeroNotStrict(s) => {
                write!(f, "weight-zero part is not strict: {}", s)
            }
            SolveError::SymmetryMismatch(s) => write!(f, "symmetry mismatch: {}", s),
            SolveError::Truncation(s) => write!(f, "truncation overflow: {}", s),
            SolveError::ChainMap(s) => write!(f, "chain map check failed: {}", s),
            SolveError::ResidualNonzero(s) => write!(f, "nonzero residual: {}", s),
            SolveError::Internal(s) => write!(f, "internal error: {}", s),
        }
    }
}

impl std::error::Error for SolveError {}

impl From<HomotopyError> for SolveError {
    fn from(e: HomotopyError) -> Self {
        match e {
            HomotopyError::Freealg(FreealgError::TruncationOverflow(s)) => {
                SolveError::Truncation(s)
            }
            HomotopyError::Freealg(FreealgError::Internal(s)) => SolveError::Internal(s),
            HomotopyError::ChainMap {
                order,
                letter,
                defect,
            } => SolveError::ChainMap(format!(
                "order {} on letter {}: defect {}",
                order, letter, defect
            )),
            HomotopyError::WeightZeroObstruction {
                order,
                letter,
                value,
            } => SolveError::WeightZeroNotStrict(format!(
                "obstruction of order {} on letter {}: {}",
                order, letter, value
            )),
        }
    }
}

impl From<FreealgError> for SolveError {
    fn from(e: FreealgError) -> Self {
        match e {
            FreealgError::TruncationOverflow(s) => SolveError::Truncation(s),
            FreealgError::Internal(s) => SolveError::Internal(s),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub mode: StructureMode,
    pub order: usize,
    pub letters: usize,
    pub words_by_len: Vec<usize>,
    pub seed_nonzero: usize,
    pub steps: Vec<StepStats>,
}

pub struct SolveOutcome {
    pub family: GammaFamily,
    pub report: SolveReport,
}

/// Check the strict identities of the input: both squares vanish, the
/// anticommutator of the differential with the homotopy is the weight, the
/// two operations have their symmetry type, and the differential acts on
/// both by the Leibniz rule.
pub fn validate_input(input: &G2Input, cfg: &SolveConfig) -> Result<(), SolveError> {
    let sp = &input.space;
    let name = |i: usize| sp.elem(i).id.clone();
    if !input.m1.is_endo() || input.m1.ferm_shift != 1 {
        return Err(SolveError::Contract("differential must be an endomorphism of degree 1".into()));
    }
    if !input.h.is_endo() || input.h.ferm_shift != -1 {
        return Err(SolveError::Contract("homotopy must be an endomorphism of degree -1".into()));
    }
    if input.m2.ferm_shift != 0 || input.m11.ferm_shift != -1 {
        return Err(SolveError::Contract("operations must have degrees 0 and -1".into()));
    }
    if let Some((i, _)) = input.m1.compose(&input.m1).first_nonzero() {
        return Err(SolveError::Contract(format!(
            "differential does not square to zero at {}",
            name(i)
        )));
    }
    if let Some((i, _)) = input.h.compose(&input.h).first_nonzero() {
        return Err(SolveError::Contract(format!(
            "homotopy does not square to zero at {}",
            name(i)
        )));
    }
    let anti = SparseLinear::graded_commutator(&input.m1, &input.h);
    let bad = anti.diag_mismatch(|i| Scalar::from_int(sp.elem(i).weight));
    if let Some(&(i, j)) = bad.first() {
        return Err(SolveError::Contract(format!(
            "anticommutator with the homotopy is not the weight at ({}, {})",
            name(i),
            name(j)
        )));
    }
    if cfg.mode == StructureMode::Lie && !input.m2.is_empty() {
        return Err(SolveError::SeedNotG2(
            "a homotopy Lie run takes no commutative product".into(),
        ));
    }
    if let Some((x, y)) = input.m2.symmetry_failure(SymmetryKind::Commutative) {
        return Err(SolveError::SymmetryMismatch(format!(
            "product at ({}, {})",
            name(x),
            name(y)
        )));
    }
    if let Some((x, y)) = input.m11.symmetry_failure(SymmetryKind::ShiftedSkew) {
        return Err(SolveError::SymmetryMismatch(format!(
            "bracket at ({}, {})",
            name(x),
            name(y)
        )));
    }
    if let Some(&(x, y)) = input.m2.derivation_failures(&input.m1).first() {
        return Err(SolveError::Contract(format!(
            "differential is not a derivation of the product at ({}, {})",
            name(x),
            name(y)
        )));
    }
    if let Some(&(x, y)) = input.m11.derivation_failures(&input.m1).first() {
        return Err(SolveError::Contract(format!(
            "differential is not a derivation of the bracket at ({}, {})",
            name(x),
            name(y)
        )));
    }
    Ok(())
}

fn pi(fx: i64, fy: i64) -> Scalar {
    Scalar::neg_one_pow(fy * (fx + 1))
}

fn kappa(fx: i64) -> Scalar {
    Scalar::neg_one_pow(fx)
}

fn transpose_values(ctx: &GCtx, map: &SparseLinear) -> Vec<GElem> {
    let mut vals = vec![GElem::new(); ctx.letters().len()];
    for v in 0..map.domain.dim() {
        for (w, c) in map.col(v) {
            let word = ctx.gword_of_letter(v as u32);
            let e = vals[*w].entry(word).or_insert_with(Scalar::zero);
            *e += c.clone();
        }
    }
    vals
}

fn lie_to_g(ctx: &GCtx, elem: &LieElem) -> Result<GElem, SolveError> {
    let mut out = GElem::new();
    for (id, c) in elem {
        let w = ctx.single_factor_word(*id)?;
        let e = out.entry(w).or_insert_with(Scalar::zero);
        *e += c.clone();
        if e.is_zero() {
            out.remove(&w);
        }
    }
    Ok(out)
}

/// Dual quadratic values on letters: the product feeds the bracket words,
/// the one-shifted bracket feeds the wedge words.
fn seed_values(ctx: &GCtx, input: &G2Input) -> Result<Vec<GElem>, SolveError> {
    let half = Scalar::ratio(1, 2);
    let mut vals = vec![GElem::new(); ctx.letters().len()];
    for (&(x, y), out) in input.m2.pairs() {
        let fx = input.space.elem(x).ferm;
        let fy = input.space.elem(y).ferm;
        let word = ctx.expand_letters(&[x as u32, y as u32])?;
        let g = lie_to_g(ctx, &word)?;
        let s = pi(fx, fy) * &half;
        for (v, c) in out {
            ge_add_scaled(&mut vals[*v], &g, &(c.clone() * &s));
        }
    }
    for (&(x, y), out) in input.m11.pairs() {
        let fx = input.space.elem(x).ferm;
        let mut pair = GElem::new();
        pair.insert(ctx.gword_of_letter(y as u32), Scalar::one());
        let mut wx = GElem::new();
        wx.insert(ctx.gword_of_letter(x as u32), Scalar::one());
        let g = ctx.wedge(&wx, &pair)?;
        let s = kappa(fx) * &half;
        for (v, c) in out {
            ge_add_scaled(&mut vals[*v], &g, &(c.clone() * &s));
        }
    }
    Ok(vals)
}

/// Recover the two strict operations from quadratic letter values and
/// compare them with the input tables entry by entry.
pub fn seed_roundtrip_check(
    ctx: &GCtx,
    input: &G2Input,
    vals: &[GElem],
) -> Result<(), SolveError> {
    let mut prod: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
    let mut brk: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
    for (v, val) in vals.iter().enumerate() {
        let mut lie_part = LieElem::new();
        for (w, c) in val {
            let wd = ctx.gword(*w);
            if wd.factors.len() == 1 {
                let e = lie_part.entry(wd.factors[0]).or_insert_with(Scalar::zero);
                *e += c.clone();
            } else if wd.factors.len() == 2 {
                let x = ctx.lie_word(wd.factors[0]).letters[0] as usize;
                let y = ctx.lie_word(wd.factors[1]).letters[0] as usize;
                let fx = input.space.elem(x).ferm;
                let fy = input.space.elem(y).ferm;
                let mut f = c.clone() * kappa(fx);
                if x == y {
                    f = f * Scalar::from_int(2);
                }
                brk.entry((x, y)).or_default().insert(v, f.clone());
                if x != y {
                    let mirror =
                        -Scalar::neg_one_pow((fx - 1) * (fy - 1)) * f;
                    brk.entry((y, x)).or_default().insert(v, mirror);
                }
            } else {
                return Err(SolveError::SeedNotG2(format!(
                    "value on {} has {} factors",
                    ctx.space.elem(v).id,
                    wd.factors.len()
                )));
            }
        }
        let tensor = ctx.realize_elem(&lie_part);
        for (seq, t) in tensor {
            let (x, y) = (seq[0] as usize, seq[1] as usize);
            let fx = input.space.elem(x).ferm;
            let fy = input.space.elem(y).ferm;
            prod.entry((x, y))
                .or_default()
                .insert(v, t * pi(fx, fy));
        }
    }
    let clean = |m: BTreeMap<(usize, usize), SparseVec>| {
        let mut out = m;
        for v in out.values_mut() {
            v.retain(|_, c| !c.is_zero());
        }
        out.retain(|_, v| !v.is_empty());
        out
    };
    let prod = clean(prod);
    let brk = clean(brk);
    let compare = |got: &BTreeMap<(usize, usize), SparseVec>,
                   want: &SparseBilinear,
                   what: &str|
     -> Result<(), SolveError> {
        let mut keys: Vec<(usize, usize)> = got.keys().copied().collect();
        for (k, v) in want.pairs() {
            if !v.is_empty() && !got.contains_key(k) {
                keys.push(*k);
            }
        }
        for k in keys {
            let lhs = got.get(&k).cloned().unwrap_or_default();
            let rhs = want.pair(k.0, k.1);
            if &lhs != rhs {
                return Err(SolveError::SeedNotG2(format!(
                    "{} does not survive the round trip at ({}, {})",
                    what,
                    input.space.elem(k.0).id,
                    input.space.elem(k.1).id
                )));
            }
        }
        Ok(())
    };
    compare(&prod, &input.m2, "product")?;
    compare(&brk, &input.m11, "bracket")?;
    Ok(())
}

/// Build the word context and the seeded tower for a validated input.
pub fn dualize(input: &G2Input, cfg: &SolveConfig) -> Result<GammaFamily, SolveError> {
    let letters = letters_of(&input.space);
    if letters.is_empty() {
        return Err(SolveError::Contract("empty basis".into()));
    }
    let (_, wmax) = input.space.weight_range();
    let (qmin, qmax) = input.space.charge_range();
    let tc = TruncationConfig {
        max_len: cfg.order.max(2),
        max_weight: wmax,
        charge_min: qmin,
        charge_max: qmax,
        mode: cfg.mode,
    };
    let ctx = Arc::new(GCtx::build(input.space.clone(), &tc)?);
    let d = transpose_values(&ctx, &input.m1);
    let sig = transpose_values(&ctx, &input.h);
    let mut fam = GammaFamily::new(ctx.clone(), d, sig)?;
    let vals = seed_values(&ctx, input)?;
    seed_roundtrip_check(&ctx, input, &vals)?;
    fam.push_order(vals)?;
    Ok(fam)
}

pub fn solve(input: &G2Input, cfg: &SolveConfig) -> Result<SolveOutcome, SolveError> {
    if cfg.order < 2 {
        return Err(SolveError::Contract("order must be at least 2".into()));
    }
    validate_input(input, cfg)?;
    let mut fam = dualize(input, cfg)?;
    let ctx = fam.ctx.clone();
    for (i, a) in ctx.letters().iter().enumerate() {
        if a.weight == 0 && cfg.order >= 3 {
            let obs = fam.obstruction_on_letter(3, i)?;
            if !obs.is_empty() {
                return Err(SolveError::WeightZeroNotStrict(format!(
                    "obstruction of order 3 on letter {}: {}",
                    ctx.space.elem(a.source).id,
                    ctx.print_gelem(&obs)
                )));
            }
        }
    }
    let seed_nonzero = (0..ctx.letters().len())
        .filter(|&i| !fam.value(2, i).is_empty())
        .count();
    let mut steps = Vec::new();
    for _ in 3..=cfg.order {
        steps.push(fam.advance_order()?);
    }
    for k in 2..=cfg.order {
        for i in 0..ctx.letters().len() {
            let r = fam.residual_on_letter(k, i)?;
            if !r.is_empty() {
                return Err(SolveError::ResidualNonzero(format!(
                    "relation (1, {}) on letter {}: {}",
                    k,
                    ctx.space.elem(ctx.letters()[i].source).id,
                    ctx.print_gelem(&r)
                )));
            }
        }
        if k >= 3 {
            if let Some((i, defect)) = fam.nullhomotopy_defect(k)? {
                return Err(SolveError::ResidualNonzero(format!(
                    "splitting identity at order {} on letter {}: {}",
                    k,
                    ctx.space.elem(ctx.letters()[i].source).id,
                    ctx.print_gelem(&defect)
                )));
            }
        }
    }
    let report = SolveReport {
        mode: cfg.mode,
        order: cfg.order,
        letters: ctx.letters().len(),
        words_by_len: (1..=ctx.cfg.max_len).map(|m| ctx.gword_count(m)).collect(),
        seed_nonzero,
        steps,
    };
    Ok(SolveOutcome { family: fam, report })
}

/// Homotopy Lie variant: the bracket sits in the m11 slot and there is no
/// product, so the derived words are wedges of letters only.
pub fn solve_linfty(
    l1: SparseLinear,
    l2: SparseBilinear,
    h: SparseLinear,
    order: usize,
) -> Result<SolveOutcome, SolveError> {
    let space = l2.space.clone();
    let input = G2Input {
        m2: SparseBilinear::new(space.clone(), 0),
        m11: l2,
        m1: l1,
        h,
        space,
    };
    solve(
        &input,
        &SolveConfig {
            order,
            mode: StructureMode::Lie,
        },
    )
}
