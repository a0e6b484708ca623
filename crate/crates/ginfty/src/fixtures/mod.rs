//! Reference inputs for the solver and the Courant bracket calculator.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::freealg::StructureMode;
use crate::graded::{BasisElement, GradedSpace};
use crate::linalg;
use crate::scalar::Scalar;
use crate::solver::G2Input;
use crate::sparse::{SparseBilinear, SparseLinear, SparseVec, SymmetryKind};

fn elem(id: &str, ferm: i64, weight: i64) -> BasisElement {
    BasisElement {
        id: id.to_string(),
        ferm,
        weight,
        charge: 0,
    }
}

fn space_of(basis: Vec<BasisElement>) -> Arc<GradedSpace> {
    Arc::new(GradedSpace::new(basis).expect("fixture basis"))
}

/// Truncated polyvector fields on the line: functions R = Q[x]/x^3 together
/// with the derivations x∂ and x²∂ that preserve the ideal (x³). Restricting
/// to those derivations is what keeps the Leibniz rule exact: [x∂, x·x²]
/// expands to 3x³ = 0 on both sides, while [∂, x·x²] would not.
///
/// Basis: one, x, x2 in fermionic degree 0; xt = x∂, x2t = x²∂ in degree 1.
/// m2 is the product (functions multiply, functions scale derivations, the
/// rank-one derivation module has zero wedge square), m11 is the Schouten
/// bracket. Everything sits in weight 0 with m1 = h = 0, and all Gerstenhaber
/// axioms hold strictly.
pub fn polyvector() -> G2Input {
    let space = space_of(vec![
        elem("one", 0, 0),
        elem("x", 0, 0),
        elem("x2", 0, 0),
        elem("xt", 1, 0),
        elem("x2t", 1, 0),
    ]);
    let (one, x, x2, xt, x2t) = (0, 1, 2, 3, 4);
    let c = Scalar::from_int;
    let m2 = SparseBilinear::from_entries(
        "m2",
        space.clone(),
        0,
        &[
            (one, one, one, c(1)),
            (one, x, x, c(1)),
            (x, one, x, c(1)),
            (one, x2, x2, c(1)),
            (x2, one, x2, c(1)),
            (one, xt, xt, c(1)),
            (xt, one, xt, c(1)),
            (one, x2t, x2t, c(1)),
            (x2t, one, x2t, c(1)),
            (x, x, x2, c(1)),
            (x, xt, x2t, c(1)),
            (xt, x, x2t, c(1)),
        ],
    )
    .expect("polyvector m2");
    let m11 = SparseBilinear::from_entries(
        "m11",
        space.clone(),
        -1,
        &[
            (xt, x, x, c(1)),
            (x, xt, x, c(-1)),
            (xt, x2, x2, c(2)),
            (x2, xt, x2, c(-2)),
            (x2t, x, x2, c(1)),
            (x, x2t, x2, c(-1)),
            (xt, x2t, x2t, c(1)),
            (x2t, xt, x2t, c(-1)),
        ],
    )
    .expect("polyvector m11");
    G2Input {
        m1: SparseLinear::zero(space.clone(), space.clone(), 1),
        h: SparseLinear::zero(space.clone(), space.clone(), -1),
        m2,
        m11,
        space,
    }
}

/// One odd generator with square zero and no bracket: the exterior algebra
/// on a point. Strict, weight-0 only, commutative.
pub fn grassmann() -> G2Input {
    let space = space_of(vec![elem("one", 0, 0), elem("th", 1, 0)]);
    let (one, th) = (0, 1);
    let c = Scalar::from_int;
    let m2 = SparseBilinear::from_entries(
        "m2",
        space.clone(),
        0,
        &[
            (one, one, one, c(1)),
            (one, th, th, c(1)),
            (th, one, th, c(1)),
        ],
    )
    .expect("grassmann m2");
    G2Input {
        m1: SparseLinear::zero(space.clone(), space.clone(), 1),
        h: SparseLinear::zero(space.clone(), space.clone(), -1),
        m11: SparseBilinear::new(space.clone(), -1),
        m2,
        space,
    }
}

/// A single contractible pair in weight 1 with zero products: m1 u = v,
/// h v = u. All higher maps of any solve come out zero.
pub fn two_dim() -> G2Input {
    let space = space_of(vec![elem("u", 0, 1), elem("v", 1, 1)]);
    let m1 = SparseLinear::from_entries(
        "m1",
        space.clone(),
        space.clone(),
        1,
        &[(0, 1, Scalar::one())],
    )
    .expect("two_dim m1");
    let h = SparseLinear::from_entries(
        "h",
        space.clone(),
        space.clone(),
        -1,
        &[(1, 0, Scalar::one())],
    )
    .expect("two_dim h");
    G2Input {
        m2: SparseBilinear::new(space.clone(), 0),
        m11: SparseBilinear::new(space.clone(), -1),
        m1,
        h,
        space,
    }
}

/// Representative slots (x, y, out) of a symmetry-constrained bilinear on
/// `space`: ordered pairs x <= y, diagonal only where the symmetry does not
/// force the value to vanish, outputs matching the grading.
fn bilinear_slots(
    space: &GradedSpace,
    ferm_shift: i64,
    kind: SymmetryKind,
) -> Vec<(usize, usize, usize)> {
    let n = space.dim();
    let mut slots = Vec::new();
    for x in 0..n {
        for y in x..n {
            let bx = &space.basis[x];
            let by = &space.basis[y];
            if x == y {
                let sign = match kind {
                    SymmetryKind::Commutative => Scalar::neg_one_pow(bx.ferm * bx.ferm),
                    SymmetryKind::ShiftedSkew => {
                        -Scalar::neg_one_pow((bx.ferm - 1) * (bx.ferm - 1))
                    }
                };
                if !sign.is_one() {
                    continue;
                }
            }
            for o in 0..n {
                let bo = &space.basis[o];
                if bo.ferm == bx.ferm + by.ferm + ferm_shift
                    && bo.weight == bx.weight + by.weight
                    && bo.charge == bx.charge + by.charge
                {
                    slots.push((x, y, o));
                }
            }
        }
    }
    slots
}

fn mirror_sign(space: &GradedSpace, kind: SymmetryKind, x: usize, y: usize) -> Scalar {
    let fx = space.basis[x].ferm;
    let fy = space.basis[y].ferm;
    match kind {
        SymmetryKind::Commutative => Scalar::neg_one_pow(fx * fy),
        SymmetryKind::ShiftedSkew => -Scalar::neg_one_pow((fx - 1) * (fy - 1)),
    }
}

/// Full entry table for the bilinear determined by one coefficient per slot.
fn bilinear_from_coeffs(
    space: &Arc<GradedSpace>,
    ferm_shift: i64,
    kind: SymmetryKind,
    slots: &[(usize, usize, usize)],
    coeffs: &[Scalar],
) -> SparseBilinear {
    let mut entries = Vec::new();
    for (&(x, y, o), c) in slots.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        entries.push((x, y, o, c.clone()));
        if x != y {
            entries.push((y, x, o, c.clone() * mirror_sign(space, kind, x, y)));
        }
    }
    SparseBilinear::from_entries("perturbation", space.clone(), ferm_shift, &entries)
        .expect("slot grading")
}

/// Rows of the Leibniz constraint [m1, m] = 0 as linear forms in the slot
/// coefficients. A vector in the nullspace is exactly a symmetry-correct
/// bilinear that m1 differentiates.
fn leibniz_rows(
    space: &Arc<GradedSpace>,
    m1: &SparseLinear,
    ferm_shift: i64,
    kind: SymmetryKind,
    slots: &[(usize, usize, usize)],
) -> Vec<Vec<Scalar>> {
    let n = space.dim();
    let mut rows = vec![vec![Scalar::zero(); slots.len()]; n * n * n];
    for j in 0..slots.len() {
        let mut coeffs = vec![Scalar::zero(); slots.len()];
        coeffs[j] = Scalar::one();
        let b = bilinear_from_coeffs(space, ferm_shift, kind, slots, &coeffs);
        for x in 0..n {
            for y in 0..n {
                let unit_x: SparseVec = [(x, Scalar::one())].into_iter().collect();
                let unit_y: SparseVec = [(y, Scalar::one())].into_iter().collect();
                let eps = Scalar::neg_one_pow(space.basis[x].ferm + ferm_shift);
                let mut defect: SparseVec = SparseVec::new();
                for (o, c) in m1.apply(b.pair(x, y)) {
                    *defect.entry(o).or_insert_with(Scalar::zero) += c;
                }
                for (o, c) in b.apply(m1.col(x), &unit_y) {
                    *defect.entry(o).or_insert_with(Scalar::zero) -= c;
                }
                for (o, c) in b.apply(&unit_x, m1.col(y)) {
                    *defect.entry(o).or_insert_with(Scalar::zero) -= eps.clone() * c;
                }
                for (o, c) in defect {
                    if !c.is_zero() {
                        rows[(x * n + y) * n + o][j] = c;
                    }
                }
            }
        }
    }
    rows.retain(|r| r.iter().any(|c| !c.is_zero()));
    rows
}

fn random_nullspace_element(
    basis: &[Vec<Scalar>],
    dim: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); dim];
    loop {
        let mut nonzero = false;
        for b in basis {
            let c = Scalar::from_int(rng.gen_range(-2i64..=2));
            if !c.is_zero() {
                nonzero = true;
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi += c.clone() * bi.clone();
                }
            }
        }
        if nonzero || basis.is_empty() {
            return v;
        }
    }
}

/// Seeded random seed data on a four-step weight ladder. The products are
/// drawn from the nullspace of the Leibniz constraint, so m1 differentiates
/// them and the solve is guaranteed to close; nothing forces the associator
/// or Jacobiator to vanish off weight 0, which is what makes the computed
/// higher maps nonzero for most seeds. In Lie mode only the bracket is
/// generated and m2 stays empty.
pub fn perturbed(seed: u64, mode: StructureMode) -> G2Input {
    let space = space_of(vec![
        elem("s1", 0, 1),
        elem("t1", 1, 1),
        elem("s2", 0, 2),
        elem("t2", 1, 2),
        elem("s3", 0, 3),
        elem("t3", 1, 3),
        elem("s4", 0, 4),
        elem("t4", 1, 4),
    ]);
    let mut m1_entries = Vec::new();
    let mut h_entries = Vec::new();
    for i in 0..4 {
        let s = 2 * i;
        let t = 2 * i + 1;
        m1_entries.push((s, t, Scalar::one()));
        h_entries.push((t, s, Scalar::from_int(i as i64 + 1)));
    }
    let m1 = SparseLinear::from_entries("m1", space.clone(), space.clone(), 1, &m1_entries)
        .expect("ladder m1");
    let h = SparseLinear::from_entries("h", space.clone(), space.clone(), -1, &h_entries)
        .expect("ladder h");

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |ferm_shift: i64, kind: SymmetryKind| {
        let slots = bilinear_slots(&space, ferm_shift, kind);
        let rows = leibniz_rows(&space, &m1, ferm_shift, kind, &slots);
        let basis = linalg::nullspace(&rows);
        let coeffs = random_nullspace_element(&basis, slots.len(), &mut rng);
        bilinear_from_coeffs(&space, ferm_shift, kind, &slots, &coeffs)
    };
    let m2 = match mode {
        StructureMode::Gerstenhaber => draw(0, SymmetryKind::Commutative),
        StructureMode::Lie => SparseBilinear::new(space.clone(), 0),
    };
    let m11 = draw(-1, SymmetryKind::ShiftedSkew);
    G2Input {
        m1,
        h,
        m2,
        m11,
        space,
    }
}
