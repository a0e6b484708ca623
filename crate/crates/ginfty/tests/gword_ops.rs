use ginfty::freealg::{ge_add_scaled, ge_scale, GCtx, GElem, StructureMode, TruncationConfig};
use ginfty::graded::{BasisElement, GradedSpace};
use ginfty::scalar::Scalar;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn ctx_for(ferms: &[i64], max_len: usize) -> GCtx {
    let basis = ferms
        .iter()
        .enumerate()
        .map(|(i, &f)| BasisElement {
            id: format!("v{}", i),
            ferm: f,
            weight: 0,
            charge: 0,
        })
        .collect();
    let space = Arc::new(GradedSpace::new(basis).unwrap());
    let cfg = TruncationConfig {
        max_len,
        max_weight: 0,
        charge_min: 0,
        charge_max: 0,
        mode: StructureMode::Gerstenhaber,
    };
    GCtx::build(space, &cfg).unwrap()
}

fn singleton(id: usize) -> GElem {
    let mut e = GElem::new();
    e.insert(id, Scalar::one());
    e
}

fn words_up_to(ctx: &GCtx, m_max: usize) -> Vec<usize> {
    (1..=m_max)
        .flat_map(|m| ctx.gwords_of_len(m).to_vec())
        .collect()
}

fn assert_ge_eq(ctx: &GCtx, a: &GElem, b: &GElem, what: &str) {
    let mut diff = a.clone();
    ge_add_scaled(&mut diff, b, &-Scalar::one());
    assert!(
        diff.is_empty(),
        "{}: difference {}",
        what,
        ctx.print_gelem(&diff)
    );
}

#[test]
fn wedge_graded_commutativity() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA1);
    for ferms in [vec![0i64, 1], vec![0, 0, 1], vec![1, 2, -1]] {
        let ctx = ctx_for(&ferms, 4);
        let pool = words_up_to(&ctx, 2);
        for _ in 0..40 {
            let &x = pool.choose(&mut rng).unwrap();
            let &y = pool.choose(&mut rng).unwrap();
            if ctx.gword(x).m + ctx.gword(y).m > 4 {
                continue;
            }
            let xy = ctx.wedge(&singleton(x), &singleton(y)).unwrap();
            let mut yx = ctx.wedge(&singleton(y), &singleton(x)).unwrap();
            let sign = Scalar::neg_one_pow(ctx.gword(x).ga_ferm * ctx.gword(y).ga_ferm);
            ge_scale(&mut yx, &sign);
            assert_ge_eq(&ctx, &xy, &yx, "graded commutativity");
            for (w, _) in &xy {
                assert_eq!(ctx.gword(*w).m, ctx.gword(x).m + ctx.gword(y).m);
            }
        }
    }
}

#[test]
fn wedge_odd_square_vanishes() {
    let ctx = ctx_for(&[0, 1], 4);
    for m in 1..=2 {
        for &w in ctx.gwords_of_len(m) {
            if ctx.gword(w).ga_ferm.rem_euclid(2) == 1 {
                let sq = ctx.wedge(&singleton(w), &singleton(w)).unwrap();
                assert!(sq.is_empty(), "square of {}", ctx.print_gword(w));
            }
        }
    }
}

#[test]
fn bracket_shifted_skew() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB2);
    for ferms in [vec![0i64, 1], vec![0, 0, 1], vec![1, 2, -1]] {
        let ctx = ctx_for(&ferms, 4);
        let pool = words_up_to(&ctx, 2);
        for _ in 0..40 {
            let &x = pool.choose(&mut rng).unwrap();
            let &y = pool.choose(&mut rng).unwrap();
            if ctx.gword(x).m + ctx.gword(y).m > 4 {
                continue;
            }
            let xy = ctx.g_bracket_elem(&singleton(x), &singleton(y)).unwrap();
            let mut yx = ctx.g_bracket_elem(&singleton(y), &singleton(x)).unwrap();
            let sign =
                Scalar::neg_one_pow((ctx.gword(x).ga_ferm - 1) * (ctx.gword(y).ga_ferm - 1));
            ge_scale(&mut yx, &sign);
            let mut sum = xy.clone();
            ge_add_scaled(&mut sum, &yx, &Scalar::one());
            assert!(
                sum.is_empty(),
                "shifted skew on {} , {}: {}",
                ctx.print_gword(x),
                ctx.print_gword(y),
                ctx.print_gelem(&sum)
            );
        }
    }
}

#[test]
fn bracket_is_biderivation() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC3);
    for ferms in [vec![0i64, 1], vec![0, 0, 1], vec![1, 2, -1]] {
        let ctx = ctx_for(&ferms, 4);
        let pool = words_up_to(&ctx, 2);
        for _ in 0..60 {
            let &x = pool.choose(&mut rng).unwrap();
            let &y = pool.choose(&mut rng).unwrap();
            let &z = pool.choose(&mut rng).unwrap();
            let (mx, my, mz) = (ctx.gword(x).m, ctx.gword(y).m, ctx.gword(z).m);
            if mx + my + mz > 4 {
                continue;
            }
            let yz = ctx.wedge(&singleton(y), &singleton(z)).unwrap();
            let lhs = ctx.g_bracket_elem(&singleton(x), &yz).unwrap();
            let xy = ctx.g_bracket_elem(&singleton(x), &singleton(y)).unwrap();
            let mut rhs = ctx.wedge(&xy, &singleton(z)).unwrap();
            let xz = ctx.g_bracket_elem(&singleton(x), &singleton(z)).unwrap();
            let mut t2 = ctx.wedge(&singleton(y), &xz).unwrap();
            let eps =
                Scalar::neg_one_pow((ctx.gword(x).ga_ferm - 1) * ctx.gword(y).ga_ferm);
            ge_scale(&mut t2, &eps);
            ge_add_scaled(&mut rhs, &t2, &Scalar::one());
            assert_ge_eq(&ctx, &lhs, &rhs, "biderivation");
        }
    }
}

#[test]
fn bracket_shifted_jacobi() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD4);
    for ferms in [vec![0i64, 1], vec![0, 0, 1], vec![1, 2, -1], vec![0, 0]] {
        let ctx = ctx_for(&ferms, 4);
        let pool = words_up_to(&ctx, 2);
        for _ in 0..60 {
            let &x = pool.choose(&mut rng).unwrap();
            let &y = pool.choose(&mut rng).unwrap();
            let &z = pool.choose(&mut rng).unwrap();
            if ctx.gword(x).m + ctx.gword(y).m + ctx.gword(z).m > 4 {
                continue;
            }
            let yz = ctx.g_bracket_elem(&singleton(y), &singleton(z)).unwrap();
            let lhs = ctx.g_bracket_elem(&singleton(x), &yz).unwrap();
            let xy = ctx.g_bracket_elem(&singleton(x), &singleton(y)).unwrap();
            let mut rhs = ctx.g_bracket_elem(&xy, &singleton(z)).unwrap();
            let xz = ctx.g_bracket_elem(&singleton(x), &singleton(z)).unwrap();
            let mut t2 = ctx.g_bracket_elem(&singleton(y), &xz).unwrap();
            let eps = Scalar::neg_one_pow(
                (ctx.gword(x).ga_ferm - 1) * (ctx.gword(y).ga_ferm - 1),
            );
            ge_scale(&mut t2, &eps);
            ge_add_scaled(&mut rhs, &t2, &Scalar::one());
            assert_ge_eq(&ctx, &lhs, &rhs, "shifted jacobi");
        }
    }
}

#[test]
fn lie_bracket_skew_and_jacobi() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xE5);
    let ctx = ctx_for(&[0, 1, 0], 4);
    let words: Vec<usize> = (1..=2)
        .flat_map(|p| ctx.lie_words_of_len(p).to_vec())
        .collect();
    for _ in 0..60 {
        let &u = words.choose(&mut rng).unwrap();
        let &v = words.choose(&mut rng).unwrap();
        let du = ctx.lie_word(u).deg_lie;
        let dv = ctx.lie_word(v).deg_lie;
        if ctx.lie_word(u).p() + ctx.lie_word(v).p() > 4 {
            continue;
        }
        let uv = ctx.lie_bracket(u, v).unwrap();
        let vu = ctx.lie_bracket(v, u).unwrap();
        let sign = Scalar::neg_one_pow(du * dv);
        let mut sum = (*uv).clone();
        for (k, c) in vu.iter() {
            let e = sum.entry(*k).or_insert_with(Scalar::zero);
            *e += c.clone() * &sign;
            if e.is_zero() {
                sum.remove(k);
            }
        }
        assert!(sum.is_empty(), "lie skew-symmetry");
    }
    // triples of letters
    let letters: Vec<usize> = ctx.lie_words_of_len(1).to_vec();
    for _ in 0..30 {
        let &a = letters.choose(&mut rng).unwrap();
        let &b = letters.choose(&mut rng).unwrap();
        let &c = letters.choose(&mut rng).unwrap();
        let da = ctx.lie_word(a).deg_lie;
        let db = ctx.lie_word(b).deg_lie;
        let combine = |outer: usize, inner: &ginfty::freealg::LieElem| {
            let mut acc = ginfty::freealg::LieElem::new();
            for (k, co) in inner {
                let br = ctx.lie_bracket(outer, *k).unwrap();
                for (k2, c2) in br.iter() {
                    let e = acc.entry(*k2).or_insert_with(Scalar::zero);
                    *e += c2.clone() * co;
                    if e.is_zero() {
                        acc.remove(k2);
                    }
                }
            }
            acc
        };
        let bc = (*ctx.lie_bracket(b, c).unwrap()).clone();
        let lhs = combine(a, &bc);
        let ab = (*ctx.lie_bracket(a, b).unwrap()).clone();
        let mut rhs = ginfty::freealg::LieElem::new();
        for (k, co) in &ab {
            let br = ctx.lie_bracket(*k, c).unwrap();
            for (k2, c2) in br.iter() {
                let e = rhs.entry(*k2).or_insert_with(Scalar::zero);
                *e += c2.clone() * co;
                if e.is_zero() {
                    rhs.remove(k2);
                }
            }
        }
        let ac = (*ctx.lie_bracket(a, c).unwrap()).clone();
        let t2 = combine(b, &ac);
        let eps = Scalar::neg_one_pow(da * db);
        for (k, c2) in &t2 {
            let e = rhs.entry(*k).or_insert_with(Scalar::zero);
            *e += c2.clone() * &eps;
            if e.is_zero() {
                rhs.remove(k);
            }
        }
        let mut diff = lhs;
        for (k, c2) in &rhs {
            let e = diff.entry(*k).or_insert_with(Scalar::zero);
            *e -= c2.clone();
            if e.is_zero() {
                diff.remove(k);
            }
        }
        assert!(diff.is_empty(), "lie jacobi");
    }
}

#[test]
fn generator_bracket_matches_lie_level() {
    let ctx = ctx_for(&[0, 1], 3);
    for &la in ctx.lie_words_of_len(1) {
        for &mu in ctx.lie_words_of_len(2) {
            let u = ctx.single_factor_word(la).unwrap();
            let w = ctx.single_factor_word(mu).unwrap();
            let got = ctx.g_bracket_elem(&singleton(u), &singleton(w)).unwrap();
            let alpha = Scalar::neg_one_pow(
                ctx.lie_word(la).deg_lie * ctx.lie_word(mu).deg_lie,
            );
            let lie = ctx.lie_bracket(la, mu).unwrap();
            let mut want = GElem::new();
            for (k, c) in lie.iter() {
                want.insert(ctx.single_factor_word(*k).unwrap(), c.clone() * &alpha);
            }
            assert_ge_eq(&ctx, &got, &want, "generator bracket");
        }
    }
}
