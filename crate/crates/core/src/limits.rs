//! Truncated inverse systems `... -> K^x -> K^x` under power maps, and the
//! 2-adic Tate module of `K^x`.
//!
//! Chains are indexed so that the map goes from index `i + 1` down to `i`:
//! a tuple `(x_1, ..., x_N)` is compatible when `x_{i+1}^{n_{i+1}} = x_i`,
//! and, with an anchor `a`, additionally `x_1^{n_1} = a`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

use crate::algebra::{AlgebraError, EvolutionAlgebra};
use crate::autgroup::diag_group;
use crate::scalar::{self, two_adic_valuation, FieldSpec, Scalar, ScalarError};
use crate::solver::GroupDescription;

/// Budget for `(p - 1) * N` in [`truncated_chain`].
pub const CHAIN_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LimitError {
    #[error("exponent {0} at position {1} must be at least 1")]
    InvalidExponent(u64, usize),
    #[error("anchor must be a nonzero element of {0}")]
    InvalidAnchor(String),
    #[error("chain needs at least one exponent")]
    EmptyChain,
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("depth {depth} is too small, need more than {needed}")]
    DepthTooSmall { depth: usize, needed: usize },
    #[error("{0} is not a prime field")]
    NotPrimeField(String),
    #[error("unknown field tag {0:?}")]
    UnknownTag(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSpec {
    field: FieldSpec,
    exponents: Vec<u64>,
    anchor: Option<Scalar>,
}

impl ChainSpec {
    pub fn new(
        field: FieldSpec,
        exponents: Vec<u64>,
        anchor: Option<Scalar>,
    ) -> Result<Self, LimitError> {
        if exponents.is_empty() {
            return Err(LimitError::EmptyChain);
        }
        if let Some((pos, &e)) = exponents.iter().enumerate().find(|(_, &e)| e == 0) {
            return Err(LimitError::InvalidExponent(e, pos + 1));
        }
        if let Some(a) = &anchor {
            if a.is_zero() || !field.contains(a) {
                return Err(LimitError::InvalidAnchor(field.to_string()));
            }
        }
        Ok(ChainSpec {
            field,
            exponents,
            anchor,
        })
    }

    /// Depth `N` chain of squaring maps, `x_{i+1}^2 = x_i`.
    pub fn squaring(
        field: FieldSpec,
        depth: usize,
        anchor: Option<Scalar>,
    ) -> Result<Self, LimitError> {
        Self::new(field, vec![2; depth], anchor)
    }

    pub fn depth(&self) -> usize {
        self.exponents.len()
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn anchor(&self) -> Option<&Scalar> {
        self.anchor.as_ref()
    }

    fn prefix(&self, depth: usize) -> ChainSpec {
        ChainSpec {
            field: self.field.clone(),
            exponents: self.exponents[..depth].to_vec(),
            anchor: self.anchor.clone(),
        }
    }

    /// Whether `x` is a compatible tuple for this spec.
    pub fn is_compatible(&self, x: &[Scalar]) -> bool {
        if x.len() != self.depth() || x.iter().any(|v| v.is_zero() || !self.field.contains(v)) {
            return false;
        }
        let links = (1..x.len()).all(|i| x[i].pow(self.exponents[i] as i64) == x[i - 1]);
        let anchored = self
            .anchor
            .as_ref()
            .is_none_or(|a| &x[0].pow(self.exponents[0] as i64) == a);
        links && anchored
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainElements {
    /// Every compatible tuple, sorted.
    Tuples(Vec<Vec<Scalar>>),
    /// The set is infinite; its shape as a group.
    Symbolic(GroupDescription),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedLimit {
    pub depth: usize,
    pub elements: ChainElements,
    /// Smallest `s` such that the first coordinates of depth-`s` chains
    /// already equal those of depth-`N` chains, when `s < N`.
    pub stabilization_depth: Option<usize>,
}

impl TruncatedLimit {
    pub fn count(&self) -> Option<usize> {
        match &self.elements {
            ChainElements::Tuples(t) => Some(t.len()),
            ChainElements::Symbolic(_) => None,
        }
    }

    pub fn tuples(&self) -> Option<&[Vec<Scalar>]> {
        match &self.elements {
            ChainElements::Tuples(t) => Some(t),
            ChainElements::Symbolic(_) => None,
        }
    }
}

/// Walks down from `x_N`, returning `(x_1, ..., x_N)`.
fn descend(spec: &ChainSpec, top: Scalar) -> Vec<Scalar> {
    let n = spec.depth();
    let mut x = vec![top; n];
    for i in (0..n - 1).rev() {
        x[i] = x[i + 1].pow(spec.exponents[i + 1] as i64);
    }
    x
}

fn tuples_over_prime(spec: &ChainSpec) -> Result<Vec<Vec<Scalar>>, LimitError> {
    let mut out: Vec<Vec<Scalar>> = spec
        .field
        .units()?
        .into_iter()
        .map(|top| descend(spec, top))
        .filter(|x| {
            spec.anchor
                .as_ref()
                .is_none_or(|a| &x[0].pow(spec.exponents[0] as i64) == a)
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Over `Q` with an anchor: `x_N` ranges over the roots of
/// `x^{n_1 ... n_N} = a`.
fn tuples_over_rationals(
    spec: &ChainSpec,
    anchor: &Scalar,
) -> Result<Vec<Vec<Scalar>>, LimitError> {
    let total = spec
        .exponents
        .iter()
        .try_fold(1u64, |acc, &e| acc.checked_mul(e))
        .ok_or_else(|| LimitError::TooLarge("product of exponents overflows".into()))?;
    let mut out: Vec<Vec<Scalar>> = scalar::nth_roots(&spec.field, total, anchor)?
        .into_iter()
        .map(|top| descend(spec, top))
        .collect();
    out.sort();
    Ok(out)
}

fn first_coordinates(tuples: &[Vec<Scalar>]) -> BTreeSet<Scalar> {
    tuples.iter().map(|x| x[0].clone()).collect()
}

/// All compatible tuples, by backward propagation from `x_N`, together with
/// the depth at which the first coordinate stabilizes.
pub fn truncated_chain(spec: &ChainSpec) -> Result<TruncatedLimit, LimitError> {
    let depth = spec.depth();
    match (&spec.field, &spec.anchor) {
        (FieldSpec::Prime(pf), _) => {
            let work = pf.group_order().saturating_mul(depth as u64);
            if work > CHAIN_BUDGET {
                return Err(LimitError::TooLarge(format!("{work} chain evaluations")));
            }
            let tuples = tuples_over_prime(spec)?;
            let last = first_coordinates(&tuples);
            let mut stabilization_depth = None;
            for s in 1..depth {
                if first_coordinates(&tuples_over_prime(&spec.prefix(s))?) == last {
                    stabilization_depth = Some(s);
                    break;
                }
            }
            Ok(TruncatedLimit {
                depth,
                elements: ChainElements::Tuples(tuples),
                stabilization_depth,
            })
        }
        (FieldSpec::Rationals, Some(a)) => {
            let tuples = tuples_over_rationals(spec, a)?;
            let last = first_coordinates(&tuples);
            let mut stabilization_depth = None;
            for s in 1..depth {
                if first_coordinates(&tuples_over_rationals(&spec.prefix(s), a)?) == last {
                    stabilization_depth = Some(s);
                    break;
                }
            }
            Ok(TruncatedLimit {
                depth,
                elements: ChainElements::Tuples(tuples),
                stabilization_depth,
            })
        }
        // x_N is free in Q^x and determines the rest.
        (FieldSpec::Rationals, None) => Ok(TruncatedLimit {
            depth,
            elements: ChainElements::Symbolic(GroupDescription::new(1, Vec::new())),
            stabilization_depth: None,
        }),
    }
}

/// Fields accepted by [`tate_module_2`]: concrete ones, and named fields
/// that are known only through their roots of unity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldTag {
    Concrete(FieldSpec),
    /// Algebraically closed, characteristic not 2 (`acl-not2`).
    AlgebraicallyClosedNot2,
    /// `Q` with all `2^n`-th roots of unity adjoined (`Q-zeta2inf`).
    QZeta2Inf,
    /// `Q(i)` (`Q-i`).
    QI,
}

impl FromStr for FieldTag {
    type Err = LimitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "acl-not2" => Ok(FieldTag::AlgebraicallyClosedNot2),
            "Q-zeta2inf" => Ok(FieldTag::QZeta2Inf),
            "Q-i" => Ok(FieldTag::QI),
            other => other
                .parse()
                .map(FieldTag::Concrete)
                .map_err(|_| LimitError::UnknownTag(other.to_string())),
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Concrete(k) => write!(f, "{k}"),
            FieldTag::AlgebraicallyClosedNot2 => f.write_str("acl-not2"),
            FieldTag::QZeta2Inf => f.write_str("Q-zeta2inf"),
            FieldTag::QI => f.write_str("Q-i"),
        }
    }
}

/// `T_2(K^x)`, the inverse limit of `mu_{2^n}(K)` under squaring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TateModule {
    /// Trivial; `stationary_index` is the `i` with `mu_{2^j}(K) = mu_{2^i}(K)`
    /// for all `j >= i`.
    Trivial { stationary_index: u32 },
    /// The 2-adic integers.
    TwoAdicIntegers,
}

impl TateModule {
    pub fn is_trivial(&self) -> bool {
        matches!(self, TateModule::Trivial { .. })
    }
}

impl fmt::Display for TateModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TateModule::Trivial { stationary_index } => {
                write!(f, "T_2 = 1 (stationary index {stationary_index})")
            }
            TateModule::TwoAdicIntegers => f.write_str("T_2 ≅ Z_2"),
        }
    }
}

/// Index at which `mu_2(K) ⊆ mu_4(K) ⊆ ...` becomes constant.
pub fn stationary_index(field: &FieldSpec) -> u32 {
    match field {
        FieldSpec::Prime(pf) if pf.modulus() == 2 => 0,
        FieldSpec::Prime(pf) => two_adic_valuation(pf.group_order()),
        FieldSpec::Rationals => 1,
    }
}

pub fn tate_module_2(tag: &FieldTag) -> TateModule {
    match tag {
        FieldTag::Concrete(k) => TateModule::Trivial {
            stationary_index: stationary_index(k),
        },
        FieldTag::QI => TateModule::Trivial {
            stationary_index: 2,
        },
        FieldTag::AlgebraicallyClosedNot2 | FieldTag::QZeta2Inf => TateModule::TwoAdicIntegers,
    }
}

/// Exhaustive check over `F_p` that every depth-`N` squaring chain with
/// `x_i` in `mu_{2^i}` has `x_j = 1` for all `j <= N - s`, where `s` is the
/// stationary index: `x_j = x_{j+s}^{2^s}` and `x_{j+s}` lies in
/// `mu_{2^s}`. Needs `N > s + 1`.
pub fn verify_stationary_collapse(field: &FieldSpec, depth: usize) -> Result<bool, LimitError> {
    let pf = field
        .prime_field()
        .ok_or_else(|| LimitError::NotPrimeField(field.to_string()))?;
    let s = stationary_index(field) as usize;
    if depth <= s + 1 {
        return Err(LimitError::DepthTooSmall {
            depth,
            needed: s + 1,
        });
    }
    let q = pf.group_order();
    let in_mu = |x: &Scalar, i: usize| -> bool {
        // x^{2^i} = 1, by repeated squaring
        let mut y = x.clone();
        for _ in 0..i {
            y = &y * &y;
        }
        y.is_one()
    };
    let spec = ChainSpec::squaring(field.clone(), depth, None)?;
    if q.saturating_mul(depth as u64) > CHAIN_BUDGET {
        return Err(LimitError::TooLarge(format!(
            "F_{} at depth {depth}",
            pf.modulus()
        )));
    }
    let chains: Vec<Vec<Scalar>> = tuples_over_prime(&spec)?
        .into_iter()
        .filter(|x| x.iter().enumerate().all(|(i, v)| in_mu(v, i + 1)))
        .collect();
    Ok(!chains.is_empty()
        && chains
            .iter()
            .all(|x| spec.is_compatible(x) && x[..depth - s].iter().all(Scalar::is_one)))
}

/// `u_1^2 = u_1`, `u_{i+1}^2 = u_i` in dimension `n`.
pub fn loop_chain_algebra(field: &FieldSpec, n: usize) -> Result<EvolutionAlgebra, LimitError> {
    let columns = (0..n)
        .map(|i| {
            let mut c = vec![field.zero(); n];
            c[i.saturating_sub(1)] = field.one();
            c
        })
        .collect();
    Ok(EvolutionAlgebra::from_squares(field.clone(), columns)?)
}

pub fn loop_chain_truncation(field: &FieldSpec, n: usize) -> Result<GroupDescription, LimitError> {
    Ok(diag_group(&loop_chain_algebra(field, n)?))
}

/// `|mu_{2^(n-1)}(F_p)| = gcd(2^(n-1), p - 1)`.
pub fn loop_chain_order(field: &FieldSpec, n: usize) -> Option<BigUint> {
    loop_chain_truncation(field, n).ok()?.order_over(field)
}
