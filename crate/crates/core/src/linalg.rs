//! Dense exact linear algebra over a [`FieldSpec`].

use crate::scalar::{FieldSpec, Scalar};

/// Row-major dense matrix of field elements.
pub type Matrix = Vec<Vec<Scalar>>;

/// Reduces `m` in place to row echelon form; returns the pivot columns and
/// the determinant factor accumulated from row swaps and pivots.
fn echelon(field: &FieldSpec, m: &mut Matrix) -> (Vec<usize>, Scalar) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut det = field.one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if pr != r {
            m.swap(pr, r);
            det = -det;
        }
        let inv = m[r][c].inv();
        det = &det * &m[r][c];
        for i in (r + 1)..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = &m[i][c] * &inv;
            for j in c..cols {
                let t = &factor * &m[r][j];
                m[i][j] = &m[i][j] - &t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (pivots, det)
}

pub fn rank(field: &FieldSpec, m: &Matrix) -> usize {
    let mut work = m.clone();
    echelon(field, &mut work).0.len()
}

/// Rank of a list of vectors (each of equal length).
pub fn rank_of_vectors(field: &FieldSpec, vectors: &[Vec<Scalar>]) -> usize {
    rank(field, &vectors.to_vec())
}

pub fn determinant(field: &FieldSpec, m: &Matrix) -> Scalar {
    let n = m.len();
    assert!(
        m.iter().all(|r| r.len() == n),
        "determinant of a non-square matrix"
    );
    let mut work = m.clone();
    let (pivots, det) = echelon(field, &mut work);
    if pivots.len() < n {
        field.zero()
    } else {
        det
    }
}

pub fn transpose(m: &Matrix) -> Matrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_mul(field: &FieldSpec, a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "dimension mismatch in matrix product");
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b.iter())
                        .fold(field.zero(), |acc, (x, brow)| &acc + &(x * &brow[j]))
                })
                .collect()
        })
        .collect()
}

pub fn identity(field: &FieldSpec, n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { field.one() } else { field.zero() })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(m: &[&[i64]]) -> Matrix {
        let f = FieldSpec::Rationals;
        m.iter()
            .map(|r| r.iter().map(|&x| f.from_i64(x)).collect())
            .collect()
    }

    #[test]
    fn determinant_and_rank() {
        let f = FieldSpec::Rationals;
        assert_eq!(determinant(&f, &q(&[&[1, 2], &[1, 1]])), f.from_i64(-1));
        assert_eq!(determinant(&f, &q(&[&[0, 1], &[1, 0]])), f.from_i64(-1));
        assert_eq!(determinant(&f, &q(&[&[2, 4], &[1, 2]])), f.zero());
        assert_eq!(rank(&f, &q(&[&[2, 4], &[1, 2]])), 1);
        assert_eq!(rank(&f, &q(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&f, &Vec::new()), 0);
        let m = q(&[&[1, 0, 2], &[0, 3, 0], &[4, 0, 5]]);
        assert_eq!(determinant(&f, &m), f.from_i64(3 * (5 - 8)));
    }

    #[test]
    fn product_with_identity() {
        let f = FieldSpec::prime(5).unwrap();
        let m: Matrix = vec![
            vec![f.from_i64(2), f.from_i64(3)],
            vec![f.from_i64(4), f.from_i64(1)],
        ];
        assert_eq!(mat_mul(&f, &m, &identity(&f, 2)), m);
        assert_eq!(transpose(&transpose(&m)), m);
    }
}
