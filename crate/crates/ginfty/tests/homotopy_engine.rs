use ginfty::freealg::{ge_add_scaled, ge_scale, GCtx, GElem, StructureMode, TruncationConfig};
use ginfty::graded::{BasisElement, GradedSpace};
use ginfty::homotopy::{GammaFamily, HomotopyError};
use ginfty::scalar::Scalar;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn space(elems: &[(&str, i64, i64)]) -> Arc<GradedSpace> {
    let basis = elems
        .iter()
        .map(|&(id, ferm, weight)| BasisElement {
            id: id.into(),
            ferm,
            weight,
            charge: 0,
        })
        .collect();
    Arc::new(GradedSpace::new(basis).unwrap())
}

fn ctx_of(sp: Arc<GradedSpace>, max_len: usize, max_weight: i64) -> Arc<GCtx> {
    let cfg = TruncationConfig {
        max_len,
        max_weight,
        charge_min: 0,
        charge_max: 0,
        mode: StructureMode::Gerstenhaber,
    };
    Arc::new(GCtx::build(sp, &cfg).unwrap())
}

fn singleton(id: usize) -> GElem {
    let mut e = GElem::new();
    e.insert(id, Scalar::one());
    e
}

fn zeros(ctx: &GCtx) -> Vec<GElem> {
    vec![GElem::new(); ctx.letters().len()]
}

/// Random letter values of the given order and fermionic shift, built from
/// whatever enumerated words carry the right grading.
fn random_values(ctx: &GCtx, order: usize, shift: i64, rng: &mut ChaCha8Rng) -> Vec<GElem> {
    ctx.letters()
        .iter()
        .map(|a| {
            let mut v = GElem::new();
            for &w in ctx.gwords_of_len(order) {
                let wd = ctx.gword(w);
                if wd.ga_ferm == a.ferm + 1 + shift
                    && wd.weight == a.weight
                    && wd.charge == a.charge
                    && rng.gen_bool(0.5)
                    && v.len() < 3
                {
                    v.insert(w, Scalar::from_int(rng.gen_range(1..=3)));
                }
            }
            v
        })
        .collect()
}

fn mixed_family(rng: &mut ChaCha8Rng) -> GammaFamily {
    let sp = space(&[("e0", 0, 0), ("e1", 1, 0), ("e2", 2, 0)]);
    let ctx = ctx_of(sp, 4, 0);
    let d = random_values(&ctx, 1, 1, rng);
    let sig = random_values(&ctx, 1, -1, rng);
    let mut fam = GammaFamily::new(ctx, d, sig).unwrap();
    let g2 = random_values(&fam.ctx, 2, 1, rng);
    fam.push_order(g2).unwrap();
    fam
}

#[test]
fn extension_is_a_wedge_derivation() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x77);
    for _ in 0..5 {
        let fam = mixed_family(&mut rng);
        let ctx = fam.ctx.clone();
        let pool: Vec<usize> = (1..=2)
            .flat_map(|m| ctx.gwords_of_len(m).to_vec())
            .collect();
        for _ in 0..25 {
            let &u = pool.choose(&mut rng).unwrap();
            let &v = pool.choose(&mut rng).unwrap();
            if ctx.gword(u).m + ctx.gword(v).m > 3 {
                continue;
            }
            for order in 1..=2 {
                let uv = ctx.wedge(&singleton(u), &singleton(v)).unwrap();
                let lhs = fam.ext_apply(order, &uv).unwrap();
                let eu = fam.ext_apply(order, &singleton(u)).unwrap();
                let ev = fam.ext_apply(order, &singleton(v)).unwrap();
                let mut rhs = ctx.wedge(&eu, &singleton(v)).unwrap();
                let mut t2 = ctx.wedge(&singleton(u), &ev).unwrap();
                ge_scale(&mut t2, &Scalar::neg_one_pow(ctx.gword(u).ga_ferm));
                ge_add_scaled(&mut rhs, &t2, &Scalar::one());
                ge_add_scaled(&mut rhs, &lhs, &-Scalar::one());
                assert!(rhs.is_empty(), "wedge derivation failed: {}", ctx.print_gelem(&rhs));
            }
        }
    }
}

#[test]
fn extension_is_a_bracket_derivation() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x78);
    for _ in 0..5 {
        let fam = mixed_family(&mut rng);
        let ctx = fam.ctx.clone();
        let pool: Vec<usize> = (1..=2)
            .flat_map(|m| ctx.gwords_of_len(m).to_vec())
            .collect();
        for _ in 0..25 {
            let &u = pool.choose(&mut rng).unwrap();
            let &v = pool.choose(&mut rng).unwrap();
            if ctx.gword(u).m + ctx.gword(v).m > 3 {
                continue;
            }
            for order in 1..=2 {
                let uv = ctx.g_bracket_elem(&singleton(u), &singleton(v)).unwrap();
                let lhs = fam.ext_apply(order, &uv).unwrap();
                let eu = fam.ext_apply(order, &singleton(u)).unwrap();
                let ev = fam.ext_apply(order, &singleton(v)).unwrap();
                let mut rhs = ctx.g_bracket_elem(&eu, &singleton(v)).unwrap();
                let mut t2 = ctx.g_bracket_elem(&singleton(u), &ev).unwrap();
                ge_scale(&mut t2, &Scalar::neg_one_pow(ctx.gword(u).ga_ferm - 1));
                ge_add_scaled(&mut rhs, &t2, &Scalar::one());
                ge_add_scaled(&mut rhs, &lhs, &-Scalar::one());
                assert!(
                    rhs.is_empty(),
                    "bracket derivation failed on {} , {}: {}",
                    ctx.print_gword(u),
                    ctx.print_gword(v),
                    ctx.print_gelem(&rhs)
                );
            }
        }
    }
}

fn paired_complex() -> GammaFamily {
    let sp = space(&[("x0", 0, 1), ("x1", 1, 1), ("y0", 0, 1), ("y1", 1, 1)]);
    let ctx = ctx_of(sp, 3, 3);
    let mut d = zeros(&ctx);
    let mut sig = zeros(&ctx);
    let at = |name: &str, ctx: &GCtx| {
        let src = ctx.space.index_of(name).unwrap();
        ctx.letters().iter().position(|l| l.source == src).unwrap()
    };
    let g1 = |name: &str, ctx: &GCtx| {
        singleton(ctx.gword_of_letter(at(name, ctx) as u32))
    };
    d[at("x1", &ctx)] = g1("x0", &ctx);
    d[at("y1", &ctx)] = g1("y0", &ctx);
    sig[at("x0", &ctx)] = g1("x1", &ctx);
    sig[at("y0", &ctx)] = g1("y1", &ctx);
    GammaFamily::new(ctx, d, sig).unwrap()
}

#[test]
fn extended_differential_squares_to_zero() {
    let fam = paired_complex();
    for m in 1..=3 {
        let dm = fam.differential(m).unwrap();
        assert!(dm.compose(&dm).is_zero(), "square at length {}", m);
    }
    let d1 = fam.differential(1).unwrap();
    let s = fam.sigma_map();
    let mut anti = d1.compose(&s);
    anti.add_scaled(&s.compose(&d1), &Scalar::one());
    let ctx = fam.ctx.clone();
    let bad = anti.diag_mismatch(|i| Scalar::from_int(ctx.g_space(1).elem(i).weight));
    assert!(bad.is_empty(), "homotopy identity fails at {:?}", bad);
}

#[test]
fn zero_seed_advances_to_zero() {
    let mut fam = paired_complex();
    fam.push_order(zeros(&fam.ctx.clone())).unwrap();
    let stats = fam.advance_order().unwrap();
    assert_eq!(stats.order, 3);
    assert_eq!(stats.nonzero_values, 0);
    assert!(fam.nullhomotopy_defect(3).unwrap().is_none());
    assert!(fam.chain_map_defect(3).unwrap().is_none());
    for i in 0..fam.ctx.letters().len() {
        assert!(fam.residual_on_letter(2, i).unwrap().is_empty());
        assert!(fam.residual_on_letter(3, i).unwrap().is_empty());
    }
    let r = fam.residual(1, 2).unwrap();
    assert!(r.is_zero());
}

#[test]
fn matrix_and_letterwise_residuals_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x79);
    let mut fam = mixed_family(&mut rng);
    fam.push_order(zeros(&fam.ctx.clone())).unwrap();
    let ctx = fam.ctx.clone();
    let r = fam.residual(1, 3).unwrap();
    for (pos, &w) in ctx.gwords_of_len(1).iter().enumerate() {
        let letter = fam.letter_of_g1(w);
        let elem = fam.residual_on_letter(3, letter).unwrap();
        let col = r.col(pos);
        let mut from_col = GElem::new();
        for (out, c) in col {
            from_col.insert(ctx.gwords_of_len(3)[*out], c.clone());
        }
        let mut diff = elem;
        ge_add_scaled(&mut diff, &from_col, &-Scalar::one());
        assert!(diff.is_empty(), "residual mismatch at column {}", pos);
    }
}

#[test]
fn incompatible_seed_fails_the_chain_map_check() {
    let sp = space(&[("t", 0, 0), ("p", 0, 1), ("q", 1, 1), ("r", 0, 2), ("s", 1, 2)]);
    let ctx = ctx_of(sp, 3, 2);
    let at = |name: &str| {
        let src = ctx.space.index_of(name).unwrap();
        ctx.letters().iter().position(|l| l.source == src).unwrap()
    };
    let g1 = |name: &str| singleton(ctx.gword_of_letter(at(name) as u32));
    let mut d = zeros(&ctx);
    d[at("q")] = g1("p");
    d[at("s")] = g1("r");
    let sig = zeros(&ctx);
    let mut fam = GammaFamily::new(ctx.clone(), d, sig).unwrap();
    let mut g2 = zeros(&ctx);
    let lie_tp = ctx
        .expand_letters(&[at("t") as u32, at("p") as u32])
        .unwrap();
    let mut val_p = GElem::new();
    for (k, c) in lie_tp {
        val_p.insert(ctx.single_factor_word(k).unwrap(), c);
    }
    g2[at("p")] = val_p;
    let lie_pq = ctx
        .expand_letters(&[at("p") as u32, at("q") as u32])
        .unwrap();
    let mut val_s = GElem::new();
    for (k, c) in lie_pq {
        val_s.insert(ctx.single_factor_word(k).unwrap(), c);
    }
    g2[at("s")] = val_s;
    fam.push_order(g2).unwrap();
    match fam.advance_order() {
        Err(HomotopyError::ChainMap { order: 3, .. }) => {}
        other => panic!("expected a chain map failure, got {:?}", other.map(|s| s.order)),
    }
}
