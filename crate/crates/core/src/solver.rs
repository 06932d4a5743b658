//! Multiplicative ("monomial") systems `prod_v x_v^{a_ev} = c_e` over `K^x`.
//!
//! The exponent matrix is brought to Smith normal form `U A V = D`. With the
//! substitution `x = V y` (multiplicatively) and the transformed right-hand
//! side `c'_k = prod_e c_e^{U_ke}`, the system decouples into
//! `y_k^{d_k} = c'_k` for `k < rank` and `1 = c'_k` for the remaining rows.
//! The homogeneous solution group is `Hom(Z^n / rowspace(A), K^x)`, i.e.
//! `(K^x)^r x prod mu_{d_i}(K)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::scalar::{self, FieldSpec, Scalar, ScalarError};
use crate::snf::{smith_normal_form, IntMatrix, SmithDecomposition};

/// Exhaustive enumeration budget for [`enumerate_solutions_bruteforce`].
pub const BRUTEFORCE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("invalid monomial system: {0}")]
    InvalidSystem(String),
    #[error("brute force over {0} candidates exceeds the budget")]
    TooLarge(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// One relation `prod_v x_v^{exponents[v]} = rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub exponents: Vec<i64>,
    pub rhs: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialSystem {
    field: FieldSpec,
    n_vars: usize,
    rows: Vec<Relation>,
}

impl MonomialSystem {
    pub fn new(field: FieldSpec, n_vars: usize) -> Self {
        MonomialSystem {
            field,
            n_vars,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, exponents: Vec<i64>, rhs: Scalar) -> Result<(), SolverError> {
        if exponents.len() != self.n_vars {
            return Err(SolverError::InvalidSystem(format!(
                "row has {} exponents, system has {} variables",
                exponents.len(),
                self.n_vars
            )));
        }
        self.field.check(&rhs)?;
        if rhs.is_zero() {
            return Err(SolverError::InvalidSystem(
                "right-hand side must be nonzero".into(),
            ));
        }
        self.rows.push(Relation { exponents, rhs });
        Ok(())
    }

    /// Appends `x_src^2 / x_dst = rhs`, the relation contributed by an edge.
    pub fn push_edge(&mut self, src: usize, dst: usize, rhs: Scalar) -> Result<(), SolverError> {
        if src >= self.n_vars || dst >= self.n_vars {
            return Err(SolverError::InvalidSystem(format!(
                "edge {src}->{dst} out of range"
            )));
        }
        let mut e = vec![0; self.n_vars];
        e[src] += 2;
        e[dst] -= 1;
        self.push(e, rhs)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn rows(&self) -> &[Relation] {
        &self.rows
    }

    pub fn exponent_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(
            self.n_vars,
            self.rows
                .iter()
                .map(|r| r.exponents.iter().map(|&a| BigInt::from(a)).collect())
                .collect(),
        )
    }

    /// Same relations with every right-hand side replaced by 1.
    pub fn homogeneous(&self) -> MonomialSystem {
        let one = self.field.one();
        MonomialSystem {
            field: self.field.clone(),
            n_vars: self.n_vars,
            rows: self
                .rows
                .iter()
                .map(|r| Relation {
                    exponents: r.exponents.clone(),
                    rhs: one.clone(),
                })
                .collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.rows.iter().all(|r| r.rhs.is_one())
    }

    /// Whether `x` (all nonzero) satisfies every relation.
    pub fn is_solution(&self, x: &[Scalar]) -> bool {
        x.len() == self.n_vars
            && x.iter().all(|v| self.field.contains(v) && !v.is_zero())
            && self.rows.iter().all(|r| monomial(x, &r.exponents) == r.rhs)
    }
}

fn monomial(x: &[Scalar], exponents: &[i64]) -> Scalar {
    let one = x.first().map(|s| s.pow(0));
    x.iter()
        .zip(exponents)
        .filter(|(_, &a)| a != 0)
        .fold(one.expect("nonempty vector"), |acc, (v, &a)| {
            &acc * &v.pow(a)
        })
}

/// Abstract abelian group `(K^x)^free_rank x prod mu_{d}(K)`, with the
/// torsion in invariant-factor form (each `>= 2`, each dividing the next).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupDescription {
    pub free_rank: usize,
    pub torsion: Vec<BigUint>,
}

impl GroupDescription {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn new(free_rank: usize, torsion: Vec<BigUint>) -> Self {
        GroupDescription { free_rank, torsion }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_invariant_factor_form(&self) -> bool {
        self.torsion.iter().all(|d| *d >= BigUint::from(2u32))
            && self.torsion.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
    }

    /// Number of elements over a concrete field; `None` when infinite.
    pub fn order_over(&self, field: &FieldSpec) -> Option<BigUint> {
        match field {
            FieldSpec::Prime(pf) => {
                let q = BigUint::from(pf.group_order());
                let mut order = num_traits::Pow::pow(&q, self.free_rank);
                for d in &self.torsion {
                    order *= d.gcd(&q);
                }
                Some(order)
            }
            FieldSpec::Rationals => {
                if self.free_rank > 0 {
                    return None;
                }
                let two = BigUint::from(2u32);
                Some(
                    self.torsion
                        .iter()
                        .map(|d| {
                            if d.is_even() {
                                two.clone()
                            } else {
                                BigUint::one()
                            }
                        })
                        .product(),
                )
            }
        }
    }
}

impl fmt::Display for GroupDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("(K^x)^{}", self.free_rank));
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let mult = self.torsion[i..].iter().take_while(|x| *x == d).count();
            if mult == 1 {
                parts.push(format!("mu_{d}(K)"));
            } else {
                parts.push(format!("mu_{d}(K)^{mult}"));
            }
            i += mult;
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" x "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse group description {0:?}")]
pub struct GroupParseError(pub String);

impl FromStr for GroupDescription {
    type Err = GroupParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || GroupParseError(s.to_string());
        let t = s.trim();
        if t == "1" {
            return Ok(Self::trivial());
        }
        let mut out = GroupDescription::trivial();
        for part in t.split(" x ") {
            let part = part.trim();
            if let Some(r) = part.strip_prefix("(K^x)^") {
                out.free_rank += r.parse::<usize>().map_err(|_| err())?;
            } else if let Some(rest) = part.strip_prefix("mu_") {
                let (d, mult) = match rest.split_once("(K)") {
                    Some((d, "")) => (d, 1),
                    Some((d, m)) => (
                        d,
                        m.strip_prefix('^')
                            .ok_or_else(err)?
                            .parse()
                            .map_err(|_| err())?,
                    ),
                    None => return Err(err()),
                };
                let d: BigUint = d.parse().map_err(|_| err())?;
                out.torsion.extend(std::iter::repeat_n(d, mult));
            } else {
                return Err(err());
            }
        }
        out.torsion.sort();
        if !out.is_invariant_factor_form() {
            return Err(err());
        }
        Ok(out)
    }
}

/// A generator of the solution group. `order` is `None` for a generator of
/// infinite order (never materialized over `Q`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub values: Vec<Scalar>,
    pub order: BigUint,
}

/// Solutions of a homogeneous monomial system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionGroup {
    pub field: FieldSpec,
    pub n_vars: usize,
    pub shape: GroupDescription,
    /// Independent finite-order generators; the group is their direct
    /// product times `symbolic_free` copies of `K^x` over `Q`.
    pub generators: Vec<Generator>,
    /// Free factors presented only symbolically (`t_1, ..., t_r in Q^x`).
    pub symbolic_free: usize,
}

impl SolutionGroup {
    pub fn order(&self) -> Option<BigUint> {
        self.shape.order_over(&self.field)
    }

    pub fn is_finite(&self) -> bool {
        self.symbolic_free == 0
    }

    /// All elements, sorted; `None` when the group is infinite.
    pub fn elements(&self) -> Option<Vec<Vec<Scalar>>> {
        if !self.is_finite() {
            return None;
        }
        let mut out = vec![vec![self.field.one(); self.n_vars]];
        for g in &self.generators {
            let ord = g.order.to_u64().expect("generator order fits in u64");
            let mut next = Vec::with_capacity(out.len() * ord as usize);
            for base in &out {
                let mut cur = base.clone();
                for _ in 0..ord {
                    next.push(cur.clone());
                    cur = cur.iter().zip(&g.values).map(|(a, b)| a * b).collect();
                }
            }
            out = next;
        }
        out.sort();
        Some(out)
    }
}

/// Solution set of an inhomogeneous system: `particular * homogeneous`, or
/// empty when `particular` is `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionCoset {
    pub particular: Option<Vec<Scalar>>,
    pub homogeneous: SolutionGroup,
}

impl SolutionCoset {
    pub fn is_feasible(&self) -> bool {
        self.particular.is_some()
    }

    /// Number of solutions (`0` when infeasible); `None` when infinite.
    pub fn count(&self) -> Option<BigUint> {
        match self.particular {
            None => Some(BigUint::zero()),
            Some(_) => self.homogeneous.order(),
        }
    }

    /// All solutions, sorted; `None` when infinite.
    pub fn elements(&self) -> Option<Vec<Vec<Scalar>>> {
        let Some(x) = &self.particular else {
            return Some(Vec::new());
        };
        let mut out: Vec<Vec<Scalar>> = self
            .homogeneous
            .elements()?
            .into_iter()
            .map(|h| x.iter().zip(&h).map(|(a, b)| a * b).collect())
            .collect();
        out.sort();
        Some(out)
    }
}

struct Reduced {
    snf: SmithDecomposition,
}

impl Reduced {
    fn of(system: &MonomialSystem) -> Self {
        Reduced {
            snf: smith_normal_form(&system.exponent_matrix()),
        }
    }

    /// `x_v = prod_k y_k^{V_vk}`.
    fn pull_back(&self, field: &FieldSpec, y: &[Scalar]) -> Vec<Scalar> {
        let v = &self.snf.v;
        (0..v.rows())
            .map(|row| {
                y.iter().enumerate().fold(field.one(), |acc, (k, yk)| {
                    let e = v.get(row, k);
                    if e.is_zero() || yk.is_one() {
                        acc
                    } else {
                        &acc * &yk.checked_pow_big(e).expect("nonzero base")
                    }
                })
            })
            .collect()
    }

    fn homogeneous(&self, field: &FieldSpec) -> SolutionGroup {
        let n = self.snf.v.rows();
        let rank = self.snf.rank();
        let diag = self.snf.diagonal();
        let unit = |k: usize, value: Scalar| {
            let mut y = vec![field.one(); n];
            y[k] = value;
            y
        };
        let mut generators = Vec::new();
        let mut symbolic_free = 0;
        match field {
            FieldSpec::Prime(pf) => {
                let q = pf.group_order();
                for (k, d) in diag.iter().enumerate() {
                    let o = d.gcd(&BigUint::from(q)).to_u64().unwrap();
                    if o > 1 {
                        let y = unit(k, field.generator_pow(q / o).unwrap());
                        generators.push(Generator {
                            values: self.pull_back(field, &y),
                            order: o.into(),
                        });
                    }
                }
                if q > 1 {
                    for k in rank..n {
                        let y = unit(k, field.generator_pow(1).unwrap());
                        generators.push(Generator {
                            values: self.pull_back(field, &y),
                            order: q.into(),
                        });
                    }
                }
            }
            FieldSpec::Rationals => {
                for (k, d) in diag.iter().enumerate() {
                    if d.is_even() {
                        let y = unit(k, -field.one());
                        generators.push(Generator {
                            values: self.pull_back(field, &y),
                            order: 2u32.into(),
                        });
                    }
                }
                symbolic_free = n - rank;
            }
        }
        SolutionGroup {
            field: field.clone(),
            n_vars: n,
            shape: GroupDescription::new(self.snf.free_rank(), self.snf.torsion()),
            generators,
            symbolic_free,
        }
    }
}

/// Solution group of the homogeneous system with the same exponent matrix
/// (right-hand sides are ignored).
pub fn solve_homogeneous(system: &MonomialSystem) -> SolutionGroup {
    Reduced::of(system).homogeneous(system.field())
}

pub fn solve_inhomogeneous(system: &MonomialSystem) -> SolutionCoset {
    let field = system.field();
    let reduced = Reduced::of(system);
    let homogeneous = reduced.homogeneous(field);
    let particular = particular_solution(system, &reduced);
    if let Some(x) = &particular {
        assert!(
            system.is_solution(x),
            "particular solution fails its own system"
        );
    }
    SolutionCoset {
        particular,
        homogeneous,
    }
}

fn particular_solution(system: &MonomialSystem, reduced: &Reduced) -> Option<Vec<Scalar>> {
    let field = system.field();
    let snf = &reduced.snf;
    let n = system.n_vars();
    let transformed: Vec<Scalar> = (0..snf.u.rows())
        .map(|k| {
            system
                .rows()
                .iter()
                .enumerate()
                .fold(field.one(), |acc, (e, row)| {
                    let pow = snf.u.get(k, e);
                    if pow.is_zero() {
                        acc
                    } else {
                        &acc * &row.rhs.checked_pow_big(pow).expect("nonzero rhs")
                    }
                })
        })
        .collect();
    if transformed[snf.rank()..].iter().any(|c| !c.is_one()) {
        return None;
    }
    let mut y = vec![field.one(); n];
    for (k, d) in snf.diagonal().iter().enumerate() {
        let d = d.to_u64().expect("invariant factor fits in u64");
        let roots = scalar::nth_roots(field, d, &transformed[k]).expect("nonzero rhs");
        y[k] = canonical_root(roots)?;
    }
    Some(reduced.pull_back(field, &y))
}

/// Smallest residue over `F_p`; over `Q` the positive root when there is one.
fn canonical_root(roots: Vec<Scalar>) -> Option<Scalar> {
    let positive = roots
        .iter()
        .find(|r| r.as_rational().is_some_and(|q| q.is_positive()))
        .cloned();
    positive.or_else(|| roots.into_iter().next())
}

/// Every solution in `(F_p^x)^n`, sorted. Test oracle; evaluates each
/// relation by direct multiplication.
pub fn enumerate_solutions_bruteforce(
    system: &MonomialSystem,
) -> Result<Vec<Vec<Scalar>>, SolverError> {
    let field = system.field();
    let p = field
        .modulus()
        .ok_or_else(|| ScalarError::NotPrimeField(field.to_string()))?;
    let q = u64::from(p) - 1;
    let n = system.n_vars();
    let total = q.checked_pow(n as u32).filter(|&t| t <= BRUTEFORCE_BUDGET);
    let Some(total) = total else {
        return Err(SolverError::TooLarge(format!("({q})^{n}")));
    };
    let pm = u64::from(p);
    let pow_mod = |x: u64, a: i64| -> u64 {
        let (base, e) = if a < 0 {
            // x^{-1} = x^{p-2}
            (modpow(x, pm - 2, pm), a.unsigned_abs())
        } else {
            (x, a as u64)
        };
        modpow(base, e, pm)
    };
    let rows: Vec<(Vec<(usize, i64)>, u64)> = system
        .rows()
        .iter()
        .map(|r| {
            let terms = r
                .exponents
                .iter()
                .enumerate()
                .filter(|(_, &a)| a != 0)
                .map(|(v, &a)| (v, a))
                .collect();
            (terms, u64::from(r.rhs.residue().unwrap()))
        })
        .collect();
    let mut out = Vec::new();
    let mut x = vec![1u64; n];
    for _ in 0..total {
        let ok = rows.iter().all(|(terms, c)| {
            terms
                .iter()
                .fold(1u64, |acc, &(v, a)| acc * pow_mod(x[v], a) % pm)
                == *c
        });
        if ok {
            out.push(x.iter().map(|&v| field.from_i64(v as i64)).collect());
        }
        // odometer over 1..p
        for v in x.iter_mut().rev() {
            if *v + 1 < pm {
                *v += 1;
                break;
            }
            *v = 1;
        }
    }
    out.sort();
    Ok(out)
}

fn modpow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}
