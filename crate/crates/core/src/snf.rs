//! Smith normal form of integer matrices with unimodular transforms.
//!
//! `U * A * V = D` where `D` is diagonal with `d_1 | d_2 | ... | d_r` followed
//! by zeros. Pivot rule: smallest absolute value, ties broken by row-major
//! position. Entries are arbitrary precision throughout.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix with explicit shape (so that `0 x n` is representable).
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![vec![BigInt::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i][i] = BigInt::one();
        }
        m
    }

    /// Builds from rows; `cols` fixes the width when there are no rows.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Self {
        assert!(
            rows.iter().all(|r| r.len() == cols),
            "ragged integer matrix"
        );
        IntMatrix {
            rows: rows.len(),
            cols,
            entries: rows,
        }
    }

    pub fn from_i64(cols: usize, rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch in integer product"
        );
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.entries[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i][j] += a * &other.entries[k][j];
                }
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.entries.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.entries.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for row in &mut self.entries {
            row.swap(a, b);
        }
    }

    /// row[target] += k * row[source]
    fn add_row(&mut self, target: usize, source: usize, k: &BigInt) {
        for j in 0..self.cols {
            let t = &self.entries[source][j] * k;
            self.entries[target][j] += t;
        }
    }

    /// col[target] += k * col[source]
    fn add_col(&mut self, target: usize, source: usize, k: &BigInt) {
        for row in &mut self.entries {
            let t = &row[source] * k;
            row[target] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.entries[i] {
            *x = -&*x;
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for (i, row) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            let parts: Vec<String> = row.iter().map(ToString::to_string).collect();
            f.write_str(&parts.join(" "))?;
        }
        f.write_str("]")
    }
}

#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
    rank: usize,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The nonzero diagonal entries `d_1 | d_2 | ... | d_rank`, all positive.
    pub fn diagonal(&self) -> Vec<BigUint> {
        (0..self.rank)
            .map(|k| self.d.get(k, k).magnitude().clone())
            .collect()
    }

    /// Invariant factors `>= 2` of the cokernel `Z^cols / rowspace`.
    pub fn torsion(&self) -> Vec<BigUint> {
        self.diagonal()
            .into_iter()
            .filter(|d| !d.is_one())
            .collect()
    }

    /// Free rank of the cokernel `Z^cols / rowspace`.
    pub fn free_rank(&self) -> usize {
        self.d.cols() - self.rank
    }

    /// Re-checks `U A V = D`, unimodularity and the divisibility chain.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        if self.u.mul(a).mul(&self.v) != self.d {
            return false;
        }
        if !self.u.determinant().abs().is_one() || !self.v.determinant().abs().is_one() {
            return false;
        }
        for i in 0..self.d.rows() {
            for j in 0..self.d.cols() {
                let x = self.d.get(i, j);
                let on_diag = i == j && i < self.rank;
                if on_diag != !x.is_zero() || (on_diag && x.is_negative()) {
                    return false;
                }
            }
        }
        let diag = self.diagonal();
        diag.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
    }
}

/// Position of the nonzero entry of least absolute value in the lower-right
/// block starting at `(t, t)`, scanning row-major.
fn smallest_in_block(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = d.get(i, j);
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.magnitude() < d.get(bi, bj).magnitude()) {
                best = Some((i, j));
            }
        }
    }
    best
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = smallest_in_block(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            for i in t + 1..m {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = d.get(i, t).div_floor(d.get(t, t));
                let k = -q;
                d.add_row(i, t, &k);
                u.add_row(i, t, &k);
            }
            for j in t + 1..n {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = d.get(t, j).div_floor(d.get(t, t));
                let k = -q;
                d.add_col(j, t, &k);
                v.add_col(j, t, &k);
            }
            // a nonzero remainder is smaller than the pivot: move it in
            let col_rest = (t + 1..m)
                .filter(|&i| !d.get(i, t).is_zero())
                .map(|i| (i, t));
            let row_rest = (t + 1..n)
                .filter(|&j| !d.get(t, j).is_zero())
                .map(|j| (t, j));
            let smaller = col_rest.chain(row_rest).min_by(|&(i1, j1), &(i2, j2)| {
                d.get(i1, j1).magnitude().cmp(d.get(i2, j2).magnitude())
            });
            if let Some((i, j)) = smaller {
                if i != t {
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                } else {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                }
                continue;
            }
            let bad = (t + 1..m)
                .find(|&i| (t + 1..n).any(|j| !d.get(i, j).mod_floor(d.get(t, t)).is_zero()));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let snf = SmithDecomposition { u, v, d, rank: t };
    assert!(
        snf.verify(a),
        "Smith normal form failed verification for {a:?}"
    );
    snf
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(xs: &[u64]) -> Vec<BigUint> {
        xs.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn one_by_one() {
        let a = IntMatrix::from_i64(1, &[vec![1]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.d, IntMatrix::from_i64(1, &[vec![1]]));
        assert_eq!(s.rank(), 1);
        let neg = smith_normal_form(&IntMatrix::from_i64(1, &[vec![-6]]));
        assert_eq!(neg.diagonal(), big(&[6]));
    }

    #[test]
    fn star_three_spokes() {
        // rows 2e_i - e_w, w = column 3
        let a = IntMatrix::from_i64(
            4,
            &[vec![2, 0, 0, -1], vec![0, 2, 0, -1], vec![0, 0, 2, -1]],
        );
        let s = smith_normal_form(&a);
        assert_eq!(s.diagonal(), big(&[1, 2, 2]));
        assert_eq!(s.free_rank(), 1);
        assert_eq!(s.torsion(), big(&[2, 2]));
    }

    #[test]
    fn cycle_with_ear() {
        // edges 1->2, 2->3, 3->4, 4->1, 1->5, 5->1 as rows 2e_src - e_dst
        let edges = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 0)];
        let rows: Vec<Vec<i64>> = edges
            .iter()
            .map(|&(s, t)| {
                let mut r = vec![0; 5];
                r[s] += 2;
                r[t] -= 1;
                r
            })
            .collect();
        let s = smith_normal_form(&IntMatrix::from_i64(5, &rows));
        assert_eq!(s.free_rank(), 0);
        assert_eq!(s.torsion(), big(&[3]));
    }

    #[test]
    fn empty_and_zero_matrices() {
        let s = smith_normal_form(&IntMatrix::zeros(0, 3));
        assert_eq!(s.rank(), 0);
        assert_eq!(s.free_rank(), 3);
        assert_eq!(s.v, IntMatrix::identity(3));
        let z = smith_normal_form(&IntMatrix::zeros(2, 2));
        assert_eq!(z.rank(), 0);
    }

    #[test]
    fn divisibility_needs_row_mixing() {
        // diag(2, 3) is not in Smith form; expected (1, 6)
        let s = smith_normal_form(&IntMatrix::from_i64(2, &[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal(), big(&[1, 6]));
        let s = smith_normal_form(&IntMatrix::from_i64(
            3,
            &[vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 10]],
        ));
        assert_eq!(s.diagonal(), big(&[2, 2, 60]));
    }

    #[test]
    fn bareiss_determinant() {
        let m = IntMatrix::from_i64(3, &[vec![2, -1, 0], vec![1, 3, 4], vec![0, 5, -2]]);
        // 2(3*-2 - 4*5) - (-1)(1*-2 - 0) = 2(-26) + (-2) = -54
        assert_eq!(m.determinant(), BigInt::from(-54));
        assert_eq!(
            IntMatrix::from_i64(2, &[vec![0, 1], vec![1, 0]]).determinant(),
            BigInt::from(-1)
        );
    }
}
