//! Dense exact linear algebra by Gaussian elimination.

use crate::error::{Error, Result};
use crate::fields::{FieldSpec, Scalar};

pub type Matrix = Vec<Vec<Scalar>>;

pub fn identity(field: &FieldSpec, n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { field.one() } else { field.zero() })
                .collect()
        })
        .collect()
}

pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Matrix {
    vec![vec![field.zero(); cols]; rows]
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref_in_place(field: &FieldSpec, m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !field.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, pr);
        let inv = field.inv(&m[r][c]).unwrap();
        for x in m[r].iter_mut().skip(c) {
            *x = field.mul(x, &inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || field.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !field.is_zero(y) {
                    *x = field.sub(x, &field.mul(&factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rref(field: &FieldSpec, m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let p = rref_in_place(field, &mut a);
    (a, p)
}

/// Rank by forward elimination only.
pub fn rank(field: &FieldSpec, m: &Matrix) -> usize {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !field.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, pr);
        let inv = field.inv(&a[r][c]).unwrap();
        let pivot_row = a[r].clone();
        for row in a.iter_mut().skip(r + 1) {
            if field.is_zero(&row[c]) {
                continue;
            }
            let factor = field.mul(&row[c], &inv);
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !field.is_zero(y) {
                    *x = field.sub(x, &field.mul(&factor, y));
                }
            }
        }
        r += 1;
    }
    r
}

/// Basis of the right kernel {x : m·x = 0}; `cols` is needed when m has no rows.
pub fn nullspace(field: &FieldSpec, m: &Matrix, cols: usize) -> Vec<Vec<Scalar>> {
    let (a, pivots) = rref(field, m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); cols];
            v[f] = field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(&a[r][f]);
            }
            v
        })
        .collect()
}

pub fn determinant(field: &FieldSpec, m: &Matrix) -> Scalar {
    let n = m.len();
    let mut a = m.clone();
    let mut det = field.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !field.is_zero(&a[i][c])) else {
            return field.zero();
        };
        if pr != c {
            a.swap(pr, c);
            det = field.neg(&det);
        }
        det = field.mul(&det, &a[c][c]);
        let inv = field.inv(&a[c][c]).unwrap();
        let pivot_row = a[c].clone();
        for row in a.iter_mut().skip(c + 1) {
            if field.is_zero(&row[c]) {
                continue;
            }
            let factor = field.mul(&row[c], &inv);
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x = field.sub(x, &field.mul(&factor, y));
            }
        }
    }
    det
}

pub fn inverse(field: &FieldSpec, m: &Matrix) -> Result<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .zip(identity(field, n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let pivots = rref_in_place(field, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::SingularMatrix);
    }
    Ok(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mat_mul(field: &FieldSpec, a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(field.zero(), |acc, k| {
                        field.add(&acc, &field.mul(&row[k], &b[k][j]))
                    })
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(field: &FieldSpec, a: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .map(|row| {
            row.iter().zip(v).fold(field.zero(), |acc, (x, y)| {
                field.add(&acc, &field.mul(x, y))
            })
        })
        .collect()
}

pub fn transpose(m: &Matrix) -> Matrix {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols)
        .map(|j| m.iter().map(|r| r[j].clone()).collect())
        .collect()
}

/// Embeds every entry into a larger field.
pub fn embed_matrix(source: &FieldSpec, m: &Matrix, target: &FieldSpec) -> Result<Matrix> {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|x| crate::fields::embed(source, x, target))
                .collect()
        })
        .collect()
}

/// Completes the nonzero vector `v` to an invertible matrix whose first
/// column is `v`, using standard basis vectors for the remaining columns.
pub fn complete_basis(field: &FieldSpec, v: &[Scalar]) -> Matrix {
    let n = v.len();
    let pivot = v
        .iter()
        .position(|x| !field.is_zero(x))
        .expect("nonzero vector");
    let mut cols: Vec<Vec<Scalar>> = vec![v.to_vec()];
    for i in 0..n {
        if i == pivot {
            continue;
        }
        let mut e = vec![field.zero(); n];
        e[i] = field.one();
        cols.push(e);
    }
    transpose(&cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_field;
    use rand::SeedableRng;

    #[test]
    fn inverse_round_trip_over_f5() {
        let f = make_field(5, 1).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut done = 0;
        while done < 10 {
            let m: Matrix = (0..4)
                .map(|_| (0..4).map(|_| f.random(&mut rng)).collect())
                .collect();
            if f.is_zero(&determinant(&f, &m)) {
                assert!(inverse(&f, &m).is_err());
                continue;
            }
            let inv = inverse(&f, &m).unwrap();
            assert_eq!(mat_mul(&f, &m, &inv), identity(&f, 4));
            done += 1;
        }
    }

    #[test]
    fn nullspace_vectors_are_in_kernel() {
        let q = FieldSpec::rational();
        let m: Matrix = vec![
            vec![q.from_i64(1), q.from_i64(2), q.from_i64(3)],
            vec![q.from_i64(2), q.from_i64(4), q.from_i64(6)],
        ];
        let ns = nullspace(&q, &m, 3);
        assert_eq!(ns.len(), 2);
        assert_eq!(rank(&q, &m), 1);
        for v in ns {
            assert!(mat_vec(&q, &m, &v).iter().all(|x| q.is_zero(x)));
        }
    }

    #[test]
    fn determinant_of_permutation() {
        let f = make_field(7, 1).unwrap();
        let m: Matrix = vec![vec![f.zero(), f.one()], vec![f.one(), f.zero()]];
        assert_eq!(determinant(&f, &m), f.from_i64(-1));
    }
}
