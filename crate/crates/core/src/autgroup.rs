//! Automorphism groups built from monomial maps `e_i -> x_i e_{sigma(i)}`.
//!
//! The diagonal part solves `x_u^2 = x_v` over the edges of the graph. For a
//! graph automorphism `sigma` the admissible scalings solve
//! `w_{sigma(j) sigma(i)} x_i^2 = w_ji x_j` over every edge `i -> j`. Taking
//! all `sigma` that admit a solution gives the group of basis-monomial
//! automorphisms, a split extension of the graph symmetries by the diagonal
//! group.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

use crate::algebra::EvolutionAlgebra;
use crate::linalg::Matrix;
use crate::scalar::{FieldSpec, Scalar};
use crate::solver::{
    solve_homogeneous, solve_inhomogeneous, GroupDescription, MonomialSystem, SolutionCoset,
    SolutionGroup,
};
use crate::wgraph::{
    algebra_to_wgraph, enumerate_graph_automorphisms, GraphAutomorphism, GraphError,
};

/// Upper bound on `p^(n^2)` for [`bruteforce_aut`].
pub const BRUTEFORCE_AUT_SPACE: u64 = 100_000_000;
/// Upper bound on the number of automorphisms [`bruteforce_aut`] will list.
pub const BRUTEFORCE_AUT_RESULTS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error("permutation is not an automorphism of the underlying graph")]
    NotAGraphAutomorphism,
    #[error("monomial maps belong to different algebras")]
    AlgebraMismatch,
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The linear map `e_i -> scales[i] * e_{sigma[i]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialAutomorphism {
    pub sigma: Vec<usize>,
    pub scales: Vec<Scalar>,
}

impl MonomialAutomorphism {
    pub fn new(sigma: Vec<usize>, scales: Vec<Scalar>) -> Self {
        assert_eq!(
            sigma.len(),
            scales.len(),
            "permutation and scales differ in length"
        );
        MonomialAutomorphism { sigma, scales }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        Self::new((0..n).collect(), vec![field.one(); n])
    }

    pub fn diagonal(scales: Vec<Scalar>) -> Self {
        Self::new((0..scales.len()).collect(), scales)
    }

    pub fn dim(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_diagonal(&self) -> bool {
        self.sigma.iter().enumerate().all(|(i, &s)| i == s)
    }

    pub fn is_identity(&self) -> bool {
        self.is_diagonal() && self.scales.iter().all(Scalar::is_one)
    }

    pub fn graph_map(&self) -> GraphAutomorphism {
        GraphAutomorphism {
            sigma: self.sigma.clone(),
        }
    }

    /// Column `i` holds `scales[i]` in row `sigma[i]`.
    pub fn to_matrix(&self, field: &FieldSpec) -> Matrix {
        let n = self.dim();
        let mut m = vec![vec![field.zero(); n]; n];
        for i in 0..n {
            m[self.sigma[i]][i] = self.scales[i].clone();
        }
        m
    }

    /// `self o other` as linear maps (`other` applied first).
    pub fn compose(&self, other: &MonomialAutomorphism) -> Result<MonomialAutomorphism, AutError> {
        self.compatible(other)?;
        let sigma = other.sigma.iter().map(|&t| self.sigma[t]).collect();
        let scales = other
            .scales
            .iter()
            .zip(&other.sigma)
            .map(|(y, &t)| y * &self.scales[t])
            .collect();
        Ok(MonomialAutomorphism { sigma, scales })
    }

    /// Apply `self` first, then `other`: scales `x_i * y_{sigma(i)}`.
    pub fn then(&self, other: &MonomialAutomorphism) -> Result<MonomialAutomorphism, AutError> {
        other.compose(self)
    }

    pub fn invert(&self) -> MonomialAutomorphism {
        let n = self.dim();
        let mut sigma = vec![0; n];
        let mut scales = self.scales.clone();
        for i in 0..n {
            sigma[self.sigma[i]] = i;
            scales[self.sigma[i]] = self.scales[i].inv();
        }
        MonomialAutomorphism { sigma, scales }
    }

    fn compatible(&self, other: &MonomialAutomorphism) -> Result<(), AutError> {
        let same_field = match (self.scales.first(), other.scales.first()) {
            (Some(a), Some(b)) => a.field() == b.field(),
            _ => true,
        };
        if self.dim() != other.dim() || !same_field {
            return Err(AutError::AlgebraMismatch);
        }
        Ok(())
    }

    /// Image of a coordinate vector.
    pub fn apply(&self, field: &FieldSpec, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![field.zero(); self.dim()];
        for (i, c) in v.iter().enumerate() {
            out[self.sigma[i]] = c * &self.scales[i];
        }
        out
    }

    /// Whether the map is an algebra automorphism: `f(e_i)^2 = f(e_i^2)` for
    /// every `i` (products of distinct images vanish automatically).
    pub fn verify(&self, algebra: &EvolutionAlgebra) -> bool {
        let n = algebra.dim();
        let field = algebra.field();
        if self.dim() != n
            || self
                .scales
                .iter()
                .any(|x| x.is_zero() || !field.contains(x))
        {
            return false;
        }
        let mut seen = vec![false; n];
        if self
            .sigma
            .iter()
            .any(|&s| s >= n || std::mem::replace(&mut seen[s], true))
        {
            return false;
        }
        (0..n).all(|i| {
            let lhs = algebra
                .square_of_basis(self.sigma[i])
                .scale(&(&self.scales[i] * &self.scales[i]));
            let rhs = self.apply(field, &algebra.square_of_basis(i).0);
            lhs.0 == rhs
        })
    }
}

impl fmt::Display for MonomialAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let scales: Vec<String> = self.scales.iter().map(ToString::to_string).collect();
        write!(
            f,
            "{} with scales ({})",
            self.graph_map(),
            scales.join(", ")
        )
    }
}

fn edge_system(algebra: &EvolutionAlgebra) -> MonomialSystem {
    let field = algebra.field();
    let mut system = MonomialSystem::new(field.clone(), algebra.dim());
    for (s, t, _) in algebra_to_wgraph(algebra).edges() {
        system
            .push_edge(s, t, field.one())
            .expect("edge within range");
    }
    system
}

/// The group of diagonal automorphisms, solutions of `x_u^2 = x_v` over all
/// edges `u -> v`.
pub fn diag_solutions(algebra: &EvolutionAlgebra) -> SolutionGroup {
    solve_homogeneous(&edge_system(algebra))
}

pub fn diag_group(algebra: &EvolutionAlgebra) -> GroupDescription {
    diag_solutions(algebra).shape
}

/// The system whose solutions `x` make `(sigma, x)` an automorphism.
pub fn twisted_system(
    algebra: &EvolutionAlgebra,
    sigma: &GraphAutomorphism,
) -> Result<MonomialSystem, AutError> {
    let graph = algebra_to_wgraph(algebra);
    if sigma.sigma.len() != algebra.dim() || !sigma.is_automorphism_of(&graph) {
        return Err(AutError::NotAGraphAutomorphism);
    }
    let mut system = MonomialSystem::new(algebra.field().clone(), algebra.dim());
    for (i, j, w) in graph.edges() {
        let image = algebra.omega(sigma.sigma[j], sigma.sigma[i]);
        system
            .push_edge(i, j, w / image)
            .expect("edge within range");
    }
    Ok(system)
}

pub fn twisted_limit(
    algebra: &EvolutionAlgebra,
    sigma: &GraphAutomorphism,
) -> Result<SolutionCoset, AutError> {
    Ok(solve_inhomogeneous(&twisted_system(algebra, sigma)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Completeness {
    /// The monomial group is all of `Aut(A)`.
    FullAut,
    /// Only known to be a subgroup of `Aut(A)`.
    SubgroupOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lift {
    pub sigma: GraphAutomorphism,
    pub particular: MonomialAutomorphism,
    pub coset: SolutionCoset,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutPresentation {
    pub field: FieldSpec,
    pub diag: SolutionGroup,
    /// Lifting graph automorphisms, in enumeration order (identity first).
    pub lifts: Vec<Lift>,
    /// Graph automorphisms whose twisted system has no solution.
    pub rejected: Vec<GraphAutomorphism>,
    /// `table[a][b] = c` when `lifts[a].sigma o lifts[b].sigma = lifts[c].sigma`.
    pub group_law_table: Vec<Vec<usize>>,
    pub completeness: Completeness,
}

impl AutPresentation {
    pub fn diag_description(&self) -> &GroupDescription {
        &self.diag.shape
    }

    pub fn quotient_order(&self) -> usize {
        self.lifts.len()
    }

    /// `|Diag| * |quotient|`, or `None` when infinite.
    pub fn order(&self) -> Option<BigUint> {
        self.diag
            .order()
            .map(|d| d * BigUint::from(self.lifts.len()))
    }

    /// Every monomial automorphism, sorted; `None` when infinite.
    pub fn elements(&self) -> Option<Vec<MonomialAutomorphism>> {
        let mut out = Vec::new();
        for lift in &self.lifts {
            for x in lift.coset.elements()? {
                out.push(MonomialAutomorphism::new(lift.sigma.sigma.clone(), x));
            }
        }
        out.sort();
        Some(out)
    }
}

/// Enumerates graph automorphisms up to `cap` vertices, keeps those that
/// lift, and records one particular lift for each.
pub fn assemble_aut(algebra: &EvolutionAlgebra, cap: usize) -> Result<AutPresentation, AutError> {
    let graph = algebra_to_wgraph(algebra);
    let sigmas = enumerate_graph_automorphisms(&graph, cap)?;
    let mut lifts = Vec::new();
    let mut rejected = Vec::new();
    for sigma in sigmas {
        let coset = twisted_limit(algebra, &sigma)?;
        match &coset.particular {
            Some(x) => {
                let particular = MonomialAutomorphism::new(sigma.sigma.clone(), x.clone());
                if !particular.verify(algebra) {
                    return Err(AutError::Internal(format!(
                        "particular lift of {sigma} is not an automorphism"
                    )));
                }
                lifts.push(Lift {
                    sigma,
                    particular,
                    coset,
                });
            }
            None => rejected.push(sigma),
        }
    }
    if lifts.first().is_none_or(|l| !l.sigma.is_identity()) {
        return Err(AutError::Internal("identity does not lift".into()));
    }

    let index: HashMap<&GraphAutomorphism, usize> = lifts
        .iter()
        .enumerate()
        .map(|(k, l)| (&l.sigma, k))
        .collect();
    let mut table = Vec::with_capacity(lifts.len());
    for a in &lifts {
        let mut row = Vec::with_capacity(lifts.len());
        for b in &lifts {
            let c = a.sigma.compose(&b.sigma);
            let k = *index.get(&c).ok_or_else(|| {
                AutError::Internal(format!("lifted permutations not closed at {c}"))
            })?;
            row.push(k);
        }
        table.push(row);
    }

    let completeness = if algebra.is_2li() || algebra.is_invertible() {
        Completeness::FullAut
    } else {
        Completeness::SubgroupOnly
    };
    Ok(AutPresentation {
        field: algebra.field().clone(),
        diag: diag_solutions(algebra),
        lifts,
        rejected,
        group_law_table: table,
        completeness,
    })
}

/// Every automorphism of an algebra over a small prime field, as matrices
/// whose column `i` is the image of `e_i`. Sorted by column-major residues.
pub fn bruteforce_aut(algebra: &EvolutionAlgebra) -> Result<Vec<Matrix>, AutError> {
    let field = algebra.field();
    Ok(bruteforce_aut_raw(algebra)?
        .into_iter()
        .map(|cols| {
            let n = algebra.dim();
            (0..n)
                .map(|r| {
                    (0..n)
                        .map(|c| field.from_i64(i64::from(cols[c * n + r])))
                        .collect()
                })
                .collect()
        })
        .collect())
}

/// Column-major residues of every automorphism, sorted.
///
/// Columns are chosen one at a time; whenever `t_i` and all but one of the
/// columns occurring in `e_i^2` are known, the square condition
/// `t_i^2 = sum_k w_ki t_k` fixes the remaining one. The worst-case number
/// of candidate evaluations must stay within [`BRUTEFORCE_AUT_SPACE`].
pub fn bruteforce_aut_raw(algebra: &EvolutionAlgebra) -> Result<Vec<Vec<u32>>, AutError> {
    let field = algebra.field();
    let p = field
        .modulus()
        .ok_or_else(|| AutError::TooLarge("brute force needs a prime field".into()))?;
    let n = algebra.dim();
    let omega: Vec<Vec<u64>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| u64::from(algebra.omega(j, i).residue().unwrap()))
                .collect()
        })
        .collect();
    let per_column = u64::from(p)
        .checked_pow(n as u32)
        .filter(|&c| c <= BRUTEFORCE_AUT_SPACE)
        .ok_or_else(|| AutError::TooLarge(format!("{p}^{n} candidate columns")))?
        - 1;
    let branches = branch_count(&omega);
    let bound = (0..branches).try_fold(1u64, |acc, _| {
        acc.checked_mul(per_column)
            .filter(|&b| b <= BRUTEFORCE_AUT_SPACE)
    });
    if bound.is_none() {
        return Err(AutError::TooLarge(format!(
            "{per_column}^{branches} candidate column choices"
        )));
    }
    let mut search = AutSearch::new(u64::from(p), n, omega);
    let start = vec![None; n];
    search.run(start)?;
    let mut out = search.found;
    out.sort();
    Ok(out)
}

/// Columns `k != i` occurring in `e_i^2`, for each `i`.
fn square_support(omega: &[Vec<u64>]) -> Vec<Vec<usize>> {
    let n = omega.len();
    (0..n)
        .map(|i| (0..n).filter(|&k| omega[k][i] != 0).collect())
        .collect()
}

/// Which columns the square conditions determine once `known` are fixed.
fn closure(support: &[Vec<usize>], known: &mut [bool]) {
    loop {
        let mut changed = false;
        for i in 0..known.len() {
            if !known[i] {
                continue;
            }
            let missing: Vec<usize> = support[i].iter().copied().filter(|&k| !known[k]).collect();
            if let [k] = missing[..] {
                if k != i {
                    known[k] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return;
        }
    }
}

/// Columns that must be enumerated when branching greedily on the column
/// that determines the most others.
fn branch_count(omega: &[Vec<u64>]) -> usize {
    let support = square_support(omega);
    let n = omega.len();
    let mut known = vec![false; n];
    let mut branches = 0;
    while known.iter().any(|k| !k) {
        let best = (0..n)
            .filter(|&v| !known[v])
            .max_by_key(|&v| {
                let mut trial = known.clone();
                trial[v] = true;
                closure(&support, &mut trial);
                (trial.iter().filter(|&&k| k).count(), std::cmp::Reverse(v))
            })
            .unwrap();
        known[best] = true;
        closure(&support, &mut known);
        branches += 1;
    }
    branches
}

type Columns = Vec<Option<Vec<u64>>>;

struct AutSearch {
    p: u64,
    n: usize,
    omega: Vec<Vec<u64>>,
    support: Vec<Vec<usize>>,
    candidates: Vec<Vec<u64>>,
    found: Vec<Vec<u32>>,
}

impl AutSearch {
    fn new(p: u64, n: usize, omega: Vec<Vec<u64>>) -> Self {
        let total = p.pow(n as u32);
        let candidates = (1..total)
            .map(|mut code| {
                let mut v = vec![0; n];
                for x in v.iter_mut() {
                    *x = code % p;
                    code /= p;
                }
                v
            })
            .collect();
        let support = square_support(&omega);
        AutSearch {
            p,
            n,
            omega,
            support,
            candidates,
            found: Vec::new(),
        }
    }

    /// Coordinates of `u * v` where `u`, `v` are coordinate vectors.
    fn product(&self, u: &[u64], v: &[u64]) -> Vec<u64> {
        let mut out = vec![0; self.n];
        for k in 0..self.n {
            let c = u[k] * v[k] % self.p;
            if c == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = (*o + c * self.omega[j][k]) % self.p;
            }
        }
        out
    }

    /// `t_i^2 - sum_{k != skip} w_ki t_k`.
    fn square_residual(&self, cols: &Columns, i: usize, skip: Option<usize>) -> Vec<u64> {
        let t = cols[i].as_ref().unwrap();
        let mut r = self.product(t, t);
        for &k in &self.support[i] {
            if Some(k) == skip {
                continue;
            }
            let w = self.omega[k][i];
            for (x, y) in r.iter_mut().zip(cols[k].as_ref().unwrap()) {
                *x = (*x + self.p * self.p - w * y) % self.p;
            }
        }
        r
    }

    /// Fixes every column the square conditions determine; `false` when a
    /// condition fails or a derived column is zero.
    fn propagate(&self, cols: &mut Columns) -> bool {
        loop {
            let mut changed = false;
            for i in 0..self.n {
                if cols[i].is_none() {
                    continue;
                }
                let missing: Vec<usize> = self.support[i]
                    .iter()
                    .copied()
                    .filter(|&k| cols[k].is_none())
                    .collect();
                match missing[..] {
                    [] => {
                        if self.square_residual(cols, i, None).iter().any(|&x| x != 0) {
                            return false;
                        }
                    }
                    [k] if k != i => {
                        let r = self.square_residual(cols, i, Some(k));
                        let inv = modpow(self.omega[k][i], self.p - 2, self.p);
                        let t: Vec<u64> = r.iter().map(|x| x * inv % self.p).collect();
                        if t.iter().all(|&x| x == 0) {
                            return false;
                        }
                        cols[k] = Some(t);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn consistent(&self, cols: &Columns) -> bool {
        let known: Vec<&Vec<u64>> = cols.iter().flatten().collect();
        for (a, u) in known.iter().enumerate() {
            for v in &known[..a] {
                if self.product(u, v).iter().any(|&x| x != 0) {
                    return false;
                }
            }
        }
        self.independent(&known)
    }

    fn independent(&self, vectors: &[&Vec<u64>]) -> bool {
        let p = self.p;
        let mut rows: Vec<Vec<u64>> = vectors.iter().map(|v| (*v).clone()).collect();
        let mut rank = 0;
        for col in 0..self.n {
            let Some(pr) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(rank, pr);
            let inv = modpow(rows[rank][col], p - 2, p);
            for r in 0..rows.len() {
                if r != rank && rows[r][col] != 0 {
                    let f = rows[r][col] * inv % p;
                    for c in 0..self.n {
                        rows[r][c] = (rows[r][c] + p * p - f * rows[rank][c]) % p;
                    }
                }
            }
            rank += 1;
        }
        rank == rows.len()
    }

    /// Unknown column whose choice determines the most others.
    fn next_branch(&self, cols: &Columns) -> Option<usize> {
        let known: Vec<bool> = cols.iter().map(Option::is_some).collect();
        (0..self.n).filter(|&v| !known[v]).max_by_key(|&v| {
            let mut trial = known.clone();
            trial[v] = true;
            closure(&self.support, &mut trial);
            (trial.iter().filter(|&&k| k).count(), std::cmp::Reverse(v))
        })
    }

    fn run(&mut self, mut cols: Columns) -> Result<(), AutError> {
        if !self.propagate(&mut cols) || !self.consistent(&cols) {
            return Ok(());
        }
        let Some(v) = self.next_branch(&cols) else {
            let flat = cols
                .iter()
                .flatten()
                .flat_map(|c| c.iter().map(|&x| x as u32))
                .collect();
            self.found.push(flat);
            if self.found.len() > BRUTEFORCE_AUT_RESULTS {
                return Err(AutError::TooLarge(format!(
                    "more than {BRUTEFORCE_AUT_RESULTS} automorphisms"
                )));
            }
            return Ok(());
        };
        for c in 0..self.candidates.len() {
            let t = &self.candidates[c];
            if cols
                .iter()
                .flatten()
                .any(|u| self.product(u, t).iter().any(|&x| x != 0))
            {
                continue;
            }
            let mut next = cols.clone();
            next[v] = Some(t.clone());
            self.run(next)?;
        }
        Ok(())
    }
}

fn modpow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// The monomial automorphisms among `matrices`, as `(sigma, scales)`; any
/// matrix that is not monomial is skipped.
pub fn monomial_part(matrices: &[Matrix]) -> BTreeSet<MonomialAutomorphism> {
    matrices
        .iter()
        .filter_map(|m| {
            let n = m.len();
            let mut sigma = Vec::with_capacity(n);
            let mut scales = Vec::with_capacity(n);
            for i in 0..n {
                let nz: Vec<usize> = (0..n).filter(|&r| !m[r][i].is_zero()).collect();
                if nz.len() != 1 {
                    return None;
                }
                sigma.push(nz[0]);
                scales.push(m[nz[0]][i].clone());
            }
            Some(MonomialAutomorphism { sigma, scales })
        })
        .collect()
}
