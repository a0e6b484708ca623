use crate::scalar::Scalar;

/// In-place reduced row echelon form. Returns the pivot columns in order.
/// Row order of the result is pivot order; deterministic for a given input.
pub fn rref(mat: &mut Vec<Vec<Scalar>>) -> Vec<usize> {
    let rows = mat.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = mat[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = mat[r][c].clone().recip();
        for x in mat[r].iter_mut() {
            *x = x.clone() * &inv;
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                for j in 0..cols {
                    let s = mat[r][j].clone() * &f;
                    mat[i][j] = mat[i][j].clone() - s;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(mut mat: Vec<Vec<Scalar>>) -> usize {
    rref(&mut mat).len()
}

/// A particular solution of A x = b with free variables set to zero, or None
/// if inconsistent.
pub fn solve(a: &[Vec<Scalar>], b: &[Scalar]) -> Option<Vec<Scalar>> {
    let rows = a.len();
    assert_eq!(rows, b.len(), "shape mismatch");
    if rows == 0 {
        return Some(Vec::new());
    }
    let cols = a[0].len();
    let mut aug: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b.iter())
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// Basis of the kernel of A, one vector per free column, deterministic.
pub fn nullspace(a: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    if a.is_empty() {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut mat = a.to_vec();
    let pivots = rref(&mut mat);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &f in &free {
        let mut v = vec![Scalar::zero(); cols];
        v[f] = Scalar::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -mat[r][f].clone();
        }
        basis.push(v);
    }
    basis
}
