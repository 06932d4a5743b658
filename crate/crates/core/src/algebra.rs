//! Finite-dimensional evolution algebras with a distinguished natural basis.
//!
//! The structure matrix uses the column convention: `matrix[j][i]` is the
//! coefficient of `e_j` in `e_i^2`, so column `i` holds the coordinates of
//! `e_i^2`. Every other module relies on this layout.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::linalg::{self, Matrix};
use crate::scalar::{FieldSpec, Scalar, ScalarError};

/// Default upper bound on the dimension.
pub const DEFAULT_MAX_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension {0} is outside 1..={1}")]
    InvalidDimension(usize, usize),
    #[error("duplicate basis label {0:?}")]
    DuplicateLabel(String),
    #[error("the zero vector has no naturality")]
    ZeroVector,
    #[error("not a natural basis: {0}")]
    NotANaturalBasis(BasisWitness),
    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Why a list of vectors fails to be a natural basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisWitness {
    /// Wrong number of vectors.
    WrongSize { expected: usize, got: usize },
    /// Two members with a nonzero product.
    NonzeroProduct(usize, usize),
    /// The vectors span a space of this rank only.
    Dependent { rank: usize },
}

impl fmt::Display for BasisWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisWitness::WrongSize { expected, got } => {
                write!(f, "expected {expected} vectors, got {got}")
            }
            BasisWitness::NonzeroProduct(i, j) => {
                write!(f, "vectors {} and {} have nonzero product", i + 1, j + 1)
            }
            BasisWitness::Dependent { rank } => write!(f, "vectors are dependent (rank {rank})"),
        }
    }
}

/// Coordinates relative to the distinguished basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector(pub Vec<Scalar>);

impl Vector {
    pub fn zero(field: &FieldSpec, n: usize) -> Self {
        Vector(vec![field.zero(); n])
    }

    /// The `i`-th basis vector (0-based).
    pub fn basis(field: &FieldSpec, n: usize, i: usize) -> Self {
        let mut v = Self::zero(field, n);
        v.0[i] = field.one();
        v
    }

    pub fn from_i64(field: &FieldSpec, coords: &[i64]) -> Self {
        Vector(coords.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.0[i].is_zero()).collect()
    }

    pub fn scale(&self, k: &Scalar) -> Vector {
        Vector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `Some(k)` with `self = k * other`, when `other` is nonzero and the two
    /// are proportional.
    pub fn ratio_to(&self, other: &Vector) -> Option<Scalar> {
        let c = other.0.iter().position(|x| !x.is_zero())?;
        let k = &self.0[c] / &other.0[c];
        (other.scale(&k) == *self).then_some(k)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// Outcome of the naturality test for a single vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Naturality {
    Natural,
    NotNatural,
    /// Characteristic 2 with a one-dimensional span of squares, beyond the
    /// sizes the exhaustive fallback covers.
    Indeterminate,
}

impl fmt::Display for Naturality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Naturality::Natural => "true",
            Naturality::NotNatural => "false",
            Naturality::Indeterminate => "indeterminate",
        })
    }
}

/// Permutation plus rescaling: the basis `{k_i * b_{perm[i]}}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisChange {
    pub perm: Vec<usize>,
    pub scales: Vec<Scalar>,
}

impl BasisChange {
    pub fn apply(&self, basis: &[Vector]) -> Vec<Vector> {
        self.perm
            .iter()
            .zip(&self.scales)
            .map(|(&j, k)| basis[j].scale(k))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvolutionAlgebra {
    field: FieldSpec,
    labels: Vec<String>,
    matrix: Matrix,
}

impl EvolutionAlgebra {
    /// Builds an algebra from its structure matrix (`matrix[j][i] = w_ji`).
    pub fn new(
        field: FieldSpec,
        labels: Vec<String>,
        matrix: Matrix,
    ) -> Result<Self, AlgebraError> {
        Self::with_cap(field, labels, matrix, DEFAULT_MAX_DIM)
    }

    pub fn with_cap(
        field: FieldSpec,
        labels: Vec<String>,
        matrix: Matrix,
        max_dim: usize,
    ) -> Result<Self, AlgebraError> {
        let n = labels.len();
        if n == 0 || n > max_dim {
            return Err(AlgebraError::InvalidDimension(n, max_dim));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(AlgebraError::DuplicateLabel(l.clone()));
            }
        }
        if matrix.len() != n {
            return Err(AlgebraError::DimensionMismatch {
                expected: n,
                got: matrix.len(),
            });
        }
        for row in &matrix {
            if row.len() != n {
                return Err(AlgebraError::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for x in row {
                if !field.contains(x) {
                    return Err(
                        ScalarError::FieldMismatch(field.to_string(), format!("{x:?}")).into(),
                    );
                }
            }
        }
        Ok(EvolutionAlgebra {
            field,
            labels,
            matrix,
        })
    }

    /// Builds an algebra from the squares `columns[i] = e_i^2`, labelling the
    /// basis `e1, e2, ...`.
    pub fn from_squares(field: FieldSpec, columns: Vec<Vec<Scalar>>) -> Result<Self, AlgebraError> {
        let labels = default_labels(columns.len());
        let n = columns.len();
        for c in &columns {
            if c.len() != n {
                return Err(AlgebraError::DimensionMismatch {
                    expected: n,
                    got: c.len(),
                });
            }
        }
        Self::new(field, labels, linalg::transpose(&columns))
    }

    /// Integer-entry convenience constructor; `columns[i]` is `e_i^2`.
    pub fn from_square_ints(field: FieldSpec, columns: &[&[i64]]) -> Result<Self, AlgebraError> {
        let cols = columns
            .iter()
            .map(|c| c.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::from_squares(field, cols)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `w_ji`, the coefficient of `e_j` in `e_i^2`.
    pub fn omega(&self, j: usize, i: usize) -> &Scalar {
        &self.matrix[j][i]
    }

    pub fn structure_matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Coordinates of `e_i^2`.
    pub fn square_of_basis(&self, i: usize) -> Vector {
        Vector(self.matrix.iter().map(|row| row[i].clone()).collect())
    }

    fn check_vector(&self, v: &Vector) -> Result<(), AlgebraError> {
        if v.len() != self.dim() {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        for x in &v.0 {
            self.field.check(x)?;
        }
        Ok(())
    }

    /// `uv = sum_i u_i v_i e_i^2`.
    pub fn multiply(&self, u: &Vector, v: &Vector) -> Result<Vector, AlgebraError> {
        self.check_vector(u)?;
        self.check_vector(v)?;
        Ok(self.product_unchecked(u, v))
    }

    pub(crate) fn product_unchecked(&self, u: &Vector, v: &Vector) -> Vector {
        let w: Vec<Scalar> = u.0.iter().zip(&v.0).map(|(a, b)| a * b).collect();
        Vector(
            self.matrix
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&w)
                        .filter(|(_, x)| !x.is_zero())
                        .fold(self.field.zero(), |acc, (m, x)| &acc + &(m * x))
                })
                .collect(),
        )
    }

    /// First pair `i < j` whose squares are linearly dependent.
    pub fn two_li_witness(&self) -> Option<(usize, usize)> {
        let n = self.dim();
        let cols: Vec<Vec<Scalar>> = (0..n).map(|i| self.square_of_basis(i).0).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                if linalg::rank_of_vectors(&self.field, &[cols[i].clone(), cols[j].clone()]) < 2 {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Distinct basis elements have linearly independent squares.
    pub fn is_2li(&self) -> bool {
        self.two_li_witness().is_none()
    }

    /// First basis element with zero square.
    pub fn degenerate_witness(&self) -> Option<usize> {
        (0..self.dim()).find(|&i| self.matrix.iter().all(|row| row[i].is_zero()))
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.degenerate_witness().is_none()
    }

    pub fn determinant(&self) -> Scalar {
        linalg::determinant(&self.field, &self.matrix)
    }

    pub fn is_invertible(&self) -> bool {
        !self.determinant().is_zero()
    }

    /// `A^2 = A`; in finite dimension this is full rank of the structure matrix.
    pub fn is_perfect(&self) -> bool {
        linalg::rank(&self.field, &self.matrix) == self.dim()
    }

    pub fn is_natural_vector(&self, u: &Vector) -> Result<Naturality, AlgebraError> {
        self.check_vector(u)?;
        if u.is_zero() {
            return Err(AlgebraError::ZeroVector);
        }
        let support = u.support();
        if support.len() == 1 {
            return Ok(Naturality::Natural);
        }
        let squares: Vec<Vec<Scalar>> =
            support.iter().map(|&i| self.square_of_basis(i).0).collect();
        if self.product_unchecked(u, u).is_zero() {
            let all_zero = squares.iter().flatten().all(Scalar::is_zero);
            return Ok(if all_zero {
                Naturality::Natural
            } else {
                Naturality::NotNatural
            });
        }
        if linalg::rank_of_vectors(&self.field, &squares) >= 2 {
            return Ok(Naturality::NotNatural);
        }
        if self.field.characteristic() != 2 {
            return Ok(Naturality::Natural);
        }
        if self.dim() <= 4 {
            let found = !self.natural_bases(Some(u), 1)?.is_empty();
            return Ok(if found {
                Naturality::Natural
            } else {
                Naturality::NotNatural
            });
        }
        Ok(Naturality::Indeterminate)
    }

    fn check_natural_basis(&self, basis: &[Vector]) -> Result<(), AlgebraError> {
        let n = self.dim();
        if basis.len() != n {
            return Err(AlgebraError::NotANaturalBasis(BasisWitness::WrongSize {
                expected: n,
                got: basis.len(),
            }));
        }
        for v in basis {
            self.check_vector(v)?;
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if !self.product_unchecked(&basis[i], &basis[j]).is_zero() {
                    return Err(AlgebraError::NotANaturalBasis(
                        BasisWitness::NonzeroProduct(i, j),
                    ));
                }
            }
        }
        let coords: Vec<Vec<Scalar>> = basis.iter().map(|v| v.0.clone()).collect();
        let rank = linalg::rank_of_vectors(&self.field, &coords);
        if rank < n {
            return Err(AlgebraError::NotANaturalBasis(BasisWitness::Dependent {
                rank,
            }));
        }
        Ok(())
    }

    /// The distinguished basis as coordinate vectors.
    pub fn distinguished_basis(&self) -> Vec<Vector> {
        (0..self.dim())
            .map(|i| Vector::basis(&self.field, self.dim(), i))
            .collect()
    }

    /// `Some(change)` with `b2[i] = k_i * b1[perm[i]]` when every member of
    /// `b2` is a multiple of a member of `b1`.
    pub fn same_orbit(
        &self,
        b1: &[Vector],
        b2: &[Vector],
    ) -> Result<Option<BasisChange>, AlgebraError> {
        self.check_natural_basis(b1)?;
        self.check_natural_basis(b2)?;
        let mut perm = Vec::with_capacity(b2.len());
        let mut scales = Vec::with_capacity(b2.len());
        for v in b2 {
            let hit = b1
                .iter()
                .enumerate()
                .find_map(|(j, w)| v.ratio_to(w).map(|k| (j, k)));
            match hit {
                Some((j, k)) => {
                    perm.push(j);
                    scales.push(k);
                }
                None => return Ok(None),
            }
        }
        Ok(Some(BasisChange { perm, scales }))
    }

    /// All natural bases over a small prime field, each given by normalized
    /// representatives (first nonzero coordinate 1) in increasing order.
    /// With `required`, only bases containing a multiple of that vector are
    /// returned. Stops after `limit` results.
    pub fn natural_bases(
        &self,
        required: Option<&Vector>,
        limit: usize,
    ) -> Result<Vec<Vec<Vector>>, AlgebraError> {
        let p = self.field.modulus().ok_or_else(|| {
            AlgebraError::TooLarge("exhaustive search needs a finite field".into())
        })?;
        let n = self.dim();
        let points = u64::from(p).checked_pow(n as u32).unwrap_or(u64::MAX);
        if points > 4096 {
            return Err(AlgebraError::TooLarge(format!("{p}^{n} candidate vectors")));
        }
        let candidates = projective_points(&self.field, n);
        let required = required.map(normalize);
        let mut out = Vec::new();
        let mut chosen: Vec<usize> = Vec::new();
        self.search_bases(
            &candidates,
            &mut chosen,
            0,
            required.as_ref(),
            limit,
            &mut out,
        );
        Ok(out)
    }

    fn search_bases(
        &self,
        candidates: &[Vector],
        chosen: &mut Vec<usize>,
        start: usize,
        required: Option<&Vector>,
        limit: usize,
        out: &mut Vec<Vec<Vector>>,
    ) {
        if out.len() >= limit {
            return;
        }
        if chosen.len() == self.dim() {
            let basis: Vec<Vector> = chosen.iter().map(|&c| candidates[c].clone()).collect();
            if required.is_none_or(|r| basis.contains(r)) {
                out.push(basis);
            }
            return;
        }
        for c in start..candidates.len() {
            let v = &candidates[c];
            if chosen
                .iter()
                .any(|&d| !self.product_unchecked(&candidates[d], v).is_zero())
            {
                continue;
            }
            let mut coords: Vec<Vec<Scalar>> =
                chosen.iter().map(|&d| candidates[d].0.clone()).collect();
            coords.push(v.0.clone());
            if linalg::rank_of_vectors(&self.field, &coords) < coords.len() {
                continue;
            }
            chosen.push(c);
            self.search_bases(candidates, chosen, c + 1, required, limit, out);
            chosen.pop();
            if out.len() >= limit {
                return;
            }
        }
    }

    /// Exhaustively checks that every natural basis is a permuted rescaling
    /// of the distinguished one. Oracle for tiny instances only
    /// (`F_p` with `p <= 5`, dimension at most 3).
    pub fn verify_unique_basis_up_to_scaling(&self) -> Result<bool, AlgebraError> {
        match self.field.modulus() {
            Some(p) if p <= 5 && self.dim() <= 3 => {}
            _ => {
                return Err(AlgebraError::TooLarge(format!(
                    "{} of dimension {} (oracle needs F_p, p <= 5, n <= 3)",
                    self.field,
                    self.dim()
                )))
            }
        }
        let e = self.distinguished_basis();
        let bases = self.natural_bases(None, usize::MAX)?;
        Ok(bases.iter().all(|b| b.iter().all(|v| e.contains(v))))
    }
}

pub fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("e{i}")).collect()
}

fn normalize(v: &Vector) -> Vector {
    match v.0.iter().find(|x| !x.is_zero()) {
        Some(lead) => v.scale(&lead.inv()),
        None => v.clone(),
    }
}

/// Nonzero vectors of `F_p^n` with leading nonzero coordinate 1, in
/// lexicographic order of coordinates.
fn projective_points(field: &FieldSpec, n: usize) -> Vec<Vector> {
    let p = field.modulus().expect("finite field") as i64;
    let total = (p as usize).pow(n as u32);
    let mut out = Vec::new();
    for code in 1..total {
        let mut digits = vec![0i64; n];
        let mut c = code;
        for d in digits.iter_mut().rev() {
            *d = (c % p as usize) as i64;
            c /= p as usize;
        }
        if digits.iter().find(|&&d| d != 0) == Some(&1) {
            out.push(Vector::from_i64(field, &digits));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn f(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    /// u1^2 = u1 + u2, u2^2 = 2u1 + u2.
    fn swap_example(field: FieldSpec) -> EvolutionAlgebra {
        EvolutionAlgebra::from_square_ints(field, &[&[1, 1], &[2, 1]]).unwrap()
    }

    #[test]
    fn multiply_examples() {
        let a = swap_example(q());
        let e1 = Vector::basis(&q(), 2, 0);
        let e2 = Vector::basis(&q(), 2, 1);
        assert_eq!(
            a.multiply(&e1, &e1).unwrap(),
            Vector::from_i64(&q(), &[1, 1])
        );
        assert!(a.multiply(&e1, &e2).unwrap().is_zero());
        let u = Vector::from_i64(&q(), &[1, 1]);
        // e1^2 - e2^2 = (1,1) - (2,1)
        assert_eq!(
            a.multiply(&u, &Vector::from_i64(&q(), &[1, -1])).unwrap(),
            Vector::from_i64(&q(), &[-1, 0])
        );
        assert!(a.multiply(&u, &Vector::from_i64(&q(), &[1])).is_err());
    }

    #[test]
    fn multiply_bilinear_expansion() {
        // e1^2 = e1 + e2, e2^2 = 2e1 + e2: (e1+e2)(e1-e2) = e1^2 - e2^2 = (-1, 0)
        let a = EvolutionAlgebra::from_square_ints(q(), &[&[1, 1], &[2, 1]]).unwrap();
        let u = Vector::from_i64(&q(), &[1, 1]);
        let v = Vector::from_i64(&q(), &[1, -1]);
        let e1 = Vector::basis(&q(), 2, 0);
        let e2 = Vector::basis(&q(), 2, 1);
        let expanded = a
            .multiply(&e1, &e1)
            .unwrap()
            .add(&a.multiply(&e2, &e2).unwrap().scale(&q().from_i64(-1)));
        assert_eq!(a.multiply(&u, &v).unwrap(), expanded);
    }

    #[test]
    fn two_li_examples() {
        // chain u_i^2 = u_i + u_{i+1}, u_4^2 = u_4
        let chain = EvolutionAlgebra::from_square_ints(
            q(),
            &[&[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1], &[0, 0, 0, 1]],
        )
        .unwrap();
        assert!(chain.is_2li());
        // u1^2 = u1, u2^2 = u1, u3^2 = u2
        let dio =
            EvolutionAlgebra::from_square_ints(q(), &[&[1, 0, 0], &[1, 0, 0], &[0, 1, 0]]).unwrap();
        assert_eq!(dio.two_li_witness(), Some((0, 1)));
        assert!(!dio.is_invertible());
        let one = EvolutionAlgebra::from_square_ints(q(), &[&[1]]).unwrap();
        assert!(one.is_2li());
    }

    #[test]
    fn perfection_predicates() {
        let a = EvolutionAlgebra::from_square_ints(q(), &[&[1, 0], &[0, 0]]).unwrap();
        assert!(!a.is_nondegenerate() && !a.is_perfect() && !a.is_invertible());
        assert_eq!(a.degenerate_witness(), Some(1));
        let b = swap_example(q());
        assert_eq!(b.determinant(), q().from_i64(-1));
        assert!(b.is_nondegenerate() && b.is_perfect() && b.is_invertible());
    }

    #[test]
    fn naturality() {
        let f2 = f(2);
        let a =
            EvolutionAlgebra::from_square_ints(f2.clone(), &[&[1, 0, 0], &[1, 0, 0], &[1, 0, 0]])
                .unwrap();
        let u = Vector::from_i64(&f2, &[1, 1, 1]);
        assert_eq!(a.is_natural_vector(&u).unwrap(), Naturality::NotNatural);
        for b in a.distinguished_basis() {
            assert_eq!(a.is_natural_vector(&b).unwrap(), Naturality::Natural);
        }
        // e1^2 = e2^2 = e3, e3^2 = 0 over Q
        let c =
            EvolutionAlgebra::from_square_ints(q(), &[&[0, 0, 1], &[0, 0, 1], &[0, 0, 0]]).unwrap();
        let u = Vector::from_i64(&q(), &[1, 1, 0]);
        assert_eq!(c.is_natural_vector(&u).unwrap(), Naturality::Natural);
        // span of squares of dimension 2
        let d = swap_example(q());
        assert_eq!(
            d.is_natural_vector(&Vector::from_i64(&q(), &[1, 1]))
                .unwrap(),
            Naturality::NotNatural
        );
        assert_eq!(
            d.is_natural_vector(&Vector::zero(&q(), 2)),
            Err(AlgebraError::ZeroVector)
        );
        // u^2 = 0 but a square in the support is nonzero
        let e = EvolutionAlgebra::from_square_ints(q(), &[&[0, 0, 1], &[0, 0, -1], &[0, 0, 0]])
            .unwrap();
        assert_eq!(
            e.is_natural_vector(&Vector::from_i64(&q(), &[1, 1, 0]))
                .unwrap(),
            Naturality::NotNatural
        );
        // zero squares
        let z = EvolutionAlgebra::from_square_ints(q(), &[&[0, 0], &[0, 0]]).unwrap();
        assert_eq!(
            z.is_natural_vector(&Vector::from_i64(&q(), &[1, 1]))
                .unwrap(),
            Naturality::Natural
        );
    }

    #[test]
    fn char_two_large_is_indeterminate() {
        let f2 = f(2);
        let cols: Vec<Vec<i64>> = (0..5).map(|_| vec![1, 0, 0, 0, 0]).collect();
        let refs: Vec<&[i64]> = cols.iter().map(Vec::as_slice).collect();
        let a = EvolutionAlgebra::from_square_ints(f2.clone(), &refs).unwrap();
        let u = Vector::from_i64(&f2, &[1, 1, 1, 0, 0]);
        assert_eq!(a.is_natural_vector(&u).unwrap(), Naturality::Indeterminate);
    }

    #[test]
    fn same_orbit_examples() {
        let a = EvolutionAlgebra::from_square_ints(q(), &[&[0, 0], &[0, 0]]).unwrap();
        let b1 = a.distinguished_basis();
        let b2 = vec![
            Vector::from_i64(&q(), &[0, 2]),
            Vector::from_i64(&q(), &[3, 0]),
        ];
        let change = a.same_orbit(&b1, &b2).unwrap().unwrap();
        assert_eq!(change.perm, vec![1, 0]);
        assert_eq!(change.scales, vec![q().from_i64(2), q().from_i64(3)]);
        assert_eq!(change.apply(&b1), b2);
        let id = a.same_orbit(&b1, &b1).unwrap().unwrap();
        assert_eq!(id.perm, vec![0, 1]);
        assert!(id.scales.iter().all(Scalar::is_one));

        let deg = EvolutionAlgebra::from_square_ints(q(), &[&[1, 0], &[0, 0]]).unwrap();
        let other = vec![
            Vector::from_i64(&q(), &[1, 1]),
            Vector::from_i64(&q(), &[0, 1]),
        ];
        assert_eq!(
            deg.same_orbit(&deg.distinguished_basis(), &other).unwrap(),
            None
        );

        let bad = vec![
            Vector::from_i64(&q(), &[1, 0]),
            Vector::from_i64(&q(), &[1, 1]),
        ];
        assert_eq!(
            deg.same_orbit(&deg.distinguished_basis(), &bad),
            Err(AlgebraError::NotANaturalBasis(
                BasisWitness::NonzeroProduct(0, 1)
            ))
        );
        let dep = vec![
            Vector::from_i64(&q(), &[0, 1]),
            Vector::from_i64(&q(), &[0, 2]),
        ];
        assert_eq!(
            deg.same_orbit(&deg.distinguished_basis(), &dep),
            Err(AlgebraError::NotANaturalBasis(BasisWitness::Dependent {
                rank: 1
            }))
        );
    }

    #[test]
    fn unique_basis_oracle() {
        let a = swap_example(f(3));
        assert!(a.verify_unique_basis_up_to_scaling().unwrap());
        let deg = EvolutionAlgebra::from_square_ints(f(3), &[&[1, 0], &[0, 0]]).unwrap();
        assert!(!deg.verify_unique_basis_up_to_scaling().unwrap());
        let second = vec![
            Vector::from_i64(&f(3), &[0, 1]),
            Vector::from_i64(&f(3), &[1, 1]),
        ];
        assert!(deg
            .natural_bases(None, usize::MAX)
            .unwrap()
            .contains(&second));
        let one = EvolutionAlgebra::from_square_ints(f(5), &[&[1]]).unwrap();
        assert!(one.verify_unique_basis_up_to_scaling().unwrap());
        assert!(matches!(
            swap_example(f(7)).verify_unique_basis_up_to_scaling(),
            Err(AlgebraError::TooLarge(_))
        ));
        assert!(matches!(
            swap_example(q()).verify_unique_basis_up_to_scaling(),
            Err(AlgebraError::TooLarge(_))
        ));
    }

    #[test]
    fn constructor_validation() {
        assert!(matches!(
            EvolutionAlgebra::new(q(), vec![], vec![]),
            Err(AlgebraError::InvalidDimension(0, _))
        ));
        assert!(matches!(
            EvolutionAlgebra::new(
                q(),
                vec!["a".into(), "a".into()],
                vec![vec![q().zero(); 2]; 2]
            ),
            Err(AlgebraError::DuplicateLabel(_))
        ));
        assert!(EvolutionAlgebra::new(f(5), vec!["a".into()], vec![vec![q().one()]]).is_err());
    }
}
