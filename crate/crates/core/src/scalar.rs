//! Exact scalars over prime fields `F_p` and over the rationals.
//!
//! A [`FieldSpec`] names the coefficient field. Prime fields carry a fixed
//! multiplicative generator and a lazily built discrete-log table, which the
//! monomial solver uses to linearise power equations modulo `p - 1`.
//! Rationals are kept as normalized big rationals; the prime factorization
//! needed by multiplicative solving is available through [`Factorization`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Largest accepted prime modulus.
pub const MAX_PRIME: u64 = 1 << 31;

/// Prime fields up to this size get a full discrete-log table; larger ones
/// fall back to baby-step giant-step.
const DLOG_TABLE_LIMIT: u32 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields ({0} and {1})")]
    FieldMismatch(String, String),
    #[error("zero has no discrete logarithm or roots")]
    ZeroArgument,
    #[error("operation requires a prime field, got {0}")]
    NotPrimeField(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported maximum 2^31")]
    ModulusTooLarge(u64),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("unknown field {0:?} (expected F<p> or Q)")]
    UnknownField(String),
}

/// A prime field `F_p` with its canonical generator.
#[derive(Debug)]
pub struct PrimeField {
    p: u32,
    generator: u32,
    dlog: OnceLock<DlogTable>,
}

impl PrimeField {
    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn generator(&self) -> u32 {
        self.generator
    }

    /// Order of the multiplicative group.
    pub fn group_order(&self) -> u64 {
        u64::from(self.p) - 1
    }

    pub fn dlog_table(&self) -> Option<&DlogTable> {
        if self.p > DLOG_TABLE_LIMIT {
            return None;
        }
        Some(
            self.dlog
                .get_or_init(|| DlogTable::build(self.p, self.generator)),
        )
    }

    fn log(&self, x: u32) -> u64 {
        match self.dlog_table() {
            Some(table) => table.log(x),
            None => bsgs(self.p, self.generator, x),
        }
    }

    fn gen_pow(&self, e: u64) -> u32 {
        pow_mod(self.generator, e % self.group_order(), self.p)
    }
}

/// Discrete logarithms to the canonical generator for every element of `F_p^x`.
#[derive(Debug, Clone)]
pub struct DlogTable {
    p: u32,
    generator: u32,
    // log[x] for x in 1..p; index 0 unused
    log: Vec<u32>,
}

impl DlogTable {
    fn build(p: u32, generator: u32) -> Self {
        let mut log = vec![0u32; p as usize];
        let mut x: u64 = 1;
        for e in 0..(p - 1) {
            log[x as usize] = e;
            x = x * u64::from(generator) % u64::from(p);
        }
        DlogTable { p, generator, log }
    }

    pub fn generator(&self) -> u32 {
        self.generator
    }

    /// Number of entries (`p - 1`).
    pub fn len(&self) -> usize {
        self.p as usize - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn log(&self, x: u32) -> u64 {
        debug_assert!(x != 0 && x < self.p);
        u64::from(self.log[x as usize])
    }
}

fn pow_mod(base: u32, mut e: u64, p: u32) -> u32 {
    let p = u64::from(p);
    let mut b = u64::from(base) % p;
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc as u32
}

fn bsgs(p: u32, g: u32, x: u32) -> u64 {
    let n = u64::from(p) - 1;
    let m = (n as f64).sqrt().ceil() as u64;
    let mut baby = HashMap::with_capacity(m as usize);
    let mut cur: u64 = 1;
    for j in 0..m {
        baby.entry(cur as u32).or_insert(j);
        cur = cur * u64::from(g) % u64::from(p);
    }
    // g^{-m}
    let factor = pow_mod(g, n - (m % n), p);
    let mut gamma = u64::from(x);
    for i in 0..=m {
        if let Some(j) = baby.get(&(gamma as u32)) {
            return (i * m + j) % n;
        }
        gamma = gamma * u64::from(factor) % u64::from(p);
    }
    unreachable!("generator does not generate F_{p}^x")
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors, ascending.
pub(crate) fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// 2-adic valuation of a positive integer.
pub fn two_adic_valuation(n: u64) -> u32 {
    assert!(n != 0, "valuation of zero");
    n.trailing_zeros()
}

/// Coefficient field: a prime field or the rationals.
#[derive(Clone)]
pub enum FieldSpec {
    Prime(Arc<PrimeField>),
    Rationals,
}

impl FieldSpec {
    /// `F_p`, with primality checked by trial division and the generator found
    /// by searching upward from 2.
    pub fn prime(p: u64) -> Result<Self, ScalarError> {
        if p > MAX_PRIME {
            return Err(ScalarError::ModulusTooLarge(p));
        }
        if !is_prime_u64(p) {
            return Err(ScalarError::NotPrime(p));
        }
        let order = p - 1;
        let qs = prime_divisors(order);
        let generator = if p == 2 {
            1
        } else {
            (2..p as u32)
                .find(|&g| qs.iter().all(|&q| pow_mod(g, order / q, p as u32) != 1))
                .expect("every prime field has a generator")
        };
        Ok(FieldSpec::Prime(Arc::new(PrimeField {
            p: p as u32,
            generator,
            dlog: OnceLock::new(),
        })))
    }

    pub fn rationals() -> Self {
        FieldSpec::Rationals
    }

    pub fn prime_field(&self) -> Option<&PrimeField> {
        match self {
            FieldSpec::Prime(pf) => Some(pf),
            FieldSpec::Rationals => None,
        }
    }

    /// The modulus for prime fields, `None` for `Q`.
    pub fn modulus(&self) -> Option<u32> {
        self.prime_field().map(PrimeField::modulus)
    }

    pub fn characteristic(&self) -> u32 {
        self.modulus().unwrap_or(0)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldSpec::Prime(_))
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Prime(pf) => Scalar::Fp {
                value: n.rem_euclid(i64::from(pf.p)) as u32,
                modulus: pf.p,
            },
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(n.into())),
        }
    }

    /// `num / den` mapped into the field.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar, ScalarError> {
        self.from_big_ratio(&BigRational::new_raw(num.into(), den.into()))
    }

    fn from_big_ratio(&self, r: &BigRational) -> Result<Scalar, ScalarError> {
        if r.denom().is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        match self {
            FieldSpec::Rationals => Ok(Scalar::Rational(reduce(r.clone()))),
            FieldSpec::Prime(pf) => {
                let p = BigInt::from(pf.p);
                let num = r.numer().mod_floor(&p).to_u32().unwrap();
                let den = r.denom().mod_floor(&p).to_u32().unwrap();
                if den == 0 {
                    return Err(ScalarError::DivisionByZero);
                }
                let num = Scalar::Fp {
                    value: num,
                    modulus: pf.p,
                };
                let den = Scalar::Fp {
                    value: den,
                    modulus: pf.p,
                };
                num.checked_div(&den)
            }
        }
    }

    /// Parses a decimal integer or fraction (`7`, `-3`, `1/2`, `-5/4`).
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar, ScalarError> {
        let t = s.trim().replace('\u{2212}', "-");
        let bad = || ScalarError::Parse(s.to_string());
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t.as_str(), "1"),
        };
        if num.is_empty() || den.starts_with(['+', '-']) {
            return Err(bad());
        }
        let num = BigInt::from_str(num).map_err(|_| bad())?;
        let den = BigInt::from_str(den).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        self.from_big_ratio(&BigRational::new_raw(num, den))
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        match (self, s) {
            (FieldSpec::Prime(pf), Scalar::Fp { modulus, .. }) => pf.p == *modulus,
            (FieldSpec::Rationals, Scalar::Rational(_)) => true,
            _ => false,
        }
    }

    pub(crate) fn check(&self, s: &Scalar) -> Result<(), ScalarError> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(ScalarError::FieldMismatch(self.to_string(), s.field_name()))
        }
    }

    /// Elements of `F_p^x` in increasing order.
    pub fn units(&self) -> Result<Vec<Scalar>, ScalarError> {
        let pf = self
            .prime_field()
            .ok_or_else(|| ScalarError::NotPrimeField(self.to_string()))?;
        Ok((1..pf.p)
            .map(|value| Scalar::Fp {
                value,
                modulus: pf.p,
            })
            .collect())
    }

    /// `g^e` for the canonical generator.
    pub fn generator_pow(&self, e: u64) -> Result<Scalar, ScalarError> {
        let pf = self
            .prime_field()
            .ok_or_else(|| ScalarError::NotPrimeField(self.to_string()))?;
        Ok(Scalar::Fp {
            value: pf.gen_pow(e),
            modulus: pf.p,
        })
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.modulus() == other.modulus()
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(pf) => write!(f, "F{}", pf.p),
            FieldSpec::Rationals => f.write_str("Q"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        let digits = t
            .strip_prefix("F_")
            .or_else(|| t.strip_prefix('F'))
            .ok_or_else(|| ScalarError::UnknownField(s.to_string()))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| ScalarError::UnknownField(s.to_string()))?;
        FieldSpec::prime(p)
    }
}

fn reduce(r: BigRational) -> BigRational {
    BigRational::new(r.numer().clone(), r.denom().clone())
}

/// An exact field element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    /// Residue in `[0, modulus)`.
    Fp { value: u32, modulus: u32 },
    /// Normalized rational (positive denominator, coprime parts).
    Rational(BigRational),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Fp { value, .. } => *value == 0,
            Scalar::Rational(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Fp { value, modulus } => *value == 1 % *modulus,
            Scalar::Rational(r) => r.is_one(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Fp { modulus, .. } => {
                FieldSpec::prime(u64::from(*modulus)).expect("scalar modulus is prime")
            }
            Scalar::Rational(_) => FieldSpec::Rationals,
        }
    }

    fn field_name(&self) -> String {
        match self {
            Scalar::Fp { modulus, .. } => format!("F{modulus}"),
            Scalar::Rational(_) => "Q".to_string(),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Fp { .. } => None,
        }
    }

    pub fn residue(&self) -> Option<u32> {
        match self {
            Scalar::Fp { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    fn same_field(&self, other: &Scalar) -> Result<(), ScalarError> {
        match (self, other) {
            (Scalar::Fp { modulus: a, .. }, Scalar::Fp { modulus: b, .. }) if a == b => Ok(()),
            (Scalar::Rational(_), Scalar::Rational(_)) => Ok(()),
            _ => Err(ScalarError::FieldMismatch(
                self.field_name(),
                other.field_name(),
            )),
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Fp { value: a, modulus }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                value: ((u64::from(*a) + u64::from(*b)) % u64::from(*modulus)) as u32,
                modulus: *modulus,
            },
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Fp { value: a, modulus }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                value: ((u64::from(*a) * u64::from(*b)) % u64::from(*modulus)) as u32,
                modulus: *modulus,
            },
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            _ => unreachable!(),
        })
    }

    pub fn checked_inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Fp { value, modulus } => Scalar::Fp {
                value: pow_mod(*value, u64::from(*modulus) - 2, *modulus),
                modulus: *modulus,
            },
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.same_field(other)?;
        self.checked_mul(&other.checked_inv()?)
    }

    /// Integer power; negative exponents invert first.
    pub fn checked_pow(&self, e: i64) -> Result<Scalar, ScalarError> {
        if e < 0 {
            return self
                .checked_inv()?
                .checked_pow(e.checked_neg().unwrap_or(i64::MAX));
        }
        let e = e as u64;
        Ok(match self {
            Scalar::Fp { value, modulus } => {
                // x^(p-1) = 1 for units; keep 0^e exact
                let e = if *value == 0 || e == 0 {
                    e
                } else {
                    (e - 1) % (u64::from(*modulus) - 1) + 1
                };
                Scalar::Fp {
                    value: pow_mod(*value, e, *modulus),
                    modulus: *modulus,
                }
            }
            Scalar::Rational(r) => {
                let e = i32::try_from(e).expect("rational exponent fits in i32");
                Scalar::Rational(num_traits::Pow::pow(r, e))
            }
        })
    }

    /// Power with an arbitrary-precision exponent. Over `Q` the exponent must
    /// fit in 32 bits unless the base is `±1`.
    pub fn checked_pow_big(&self, e: &BigInt) -> Result<Scalar, ScalarError> {
        match self {
            Scalar::Fp { value, modulus } => {
                if *value == 0 {
                    return match e.sign() {
                        Sign::Minus => Err(ScalarError::DivisionByZero),
                        Sign::NoSign => Ok(Scalar::Fp {
                            value: 1 % *modulus,
                            modulus: *modulus,
                        }),
                        Sign::Plus => Ok(self.clone()),
                    };
                }
                let order = BigInt::from(u64::from(*modulus) - 1);
                let r = e.mod_floor(&order).to_i64().unwrap();
                self.checked_pow(r)
            }
            Scalar::Rational(r) => {
                if r.abs().is_one() {
                    let odd = e.is_odd();
                    return Ok(if odd {
                        self.clone()
                    } else {
                        Scalar::Rational(BigRational::one())
                    });
                }
                let e = e.to_i64().expect("rational exponent fits in i64");
                self.checked_pow(e)
            }
        }
    }

    fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Fp { value, modulus } => Scalar::Fp {
                value: (*modulus - *value) % *modulus,
                modulus: *modulus,
            },
            Scalar::Rational(r) => Scalar::Rational(-r),
        }
    }

    pub fn inv(&self) -> Scalar {
        self.checked_inv().expect("inverse of zero")
    }

    pub fn pow(&self, e: i64) -> Scalar {
        self.checked_pow(e)
            .expect("power of zero with negative exponent")
    }

    /// Prime factorization of a nonzero rational.
    pub fn factorization(&self) -> Option<Factorization> {
        self.as_rational().and_then(Factorization::of)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp { value, .. } => write!(f, "{value}"),
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

macro_rules! forward_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);
forward_op!(Div, div, checked_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

/// `sign * prod p^e` for a nonzero rational. Exponents may be negative
/// (denominator primes).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    negative: bool,
    exponents: BTreeMap<BigUint, i64>,
}

impl Factorization {
    pub fn of(r: &BigRational) -> Option<Self> {
        if r.is_zero() {
            return None;
        }
        let mut exponents = BTreeMap::new();
        for (p, e) in factor_biguint(r.numer().magnitude()) {
            *exponents.entry(p).or_insert(0) += e;
        }
        for (p, e) in factor_biguint(r.denom().magnitude()) {
            *exponents.entry(p).or_insert(0) -= e;
        }
        exponents.retain(|_, e| *e != 0);
        Some(Factorization {
            negative: r.is_negative(),
            exponents,
        })
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn exponents(&self) -> &BTreeMap<BigUint, i64> {
        &self.exponents
    }

    pub fn mul(&self, other: &Factorization) -> Factorization {
        let mut exponents = self.exponents.clone();
        for (p, e) in &other.exponents {
            *exponents.entry(p.clone()).or_insert(0) += e;
        }
        exponents.retain(|_, e| *e != 0);
        Factorization {
            negative: self.negative ^ other.negative,
            exponents,
        }
    }

    pub fn pow(&self, k: i64) -> Factorization {
        if k == 0 {
            return Factorization {
                negative: false,
                exponents: BTreeMap::new(),
            };
        }
        Factorization {
            negative: self.negative && k % 2 != 0,
            exponents: self
                .exponents
                .iter()
                .map(|(p, e)| (p.clone(), e * k))
                .collect(),
        }
    }

    pub fn to_rational(&self) -> BigRational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (p, &e) in &self.exponents {
            let pp = BigInt::from(p.clone()).pow(e.unsigned_abs() as u32);
            match e.cmp(&0) {
                Ordering::Greater => num *= pp,
                Ordering::Less => den *= pp,
                Ordering::Equal => {}
            }
        }
        if self.negative {
            num = -num;
        }
        BigRational::new(num, den)
    }
}

fn factor_biguint(n: &BigUint) -> Vec<(BigUint, i64)> {
    let mut out = Vec::new();
    let mut n = n.clone();
    if n.is_zero() {
        return out;
    }
    let mut d = BigUint::from(2u32);
    while &d * &d <= n {
        let mut e = 0;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += 1u32;
    }
    if !n.is_one() {
        out.push((n, 1));
    }
    out
}

/// `log_g(x)` in `[0, p - 1)` for the field's canonical generator `g`.
pub fn dlog(field: &FieldSpec, x: &Scalar) -> Result<u64, ScalarError> {
    let pf = field
        .prime_field()
        .ok_or_else(|| ScalarError::NotPrimeField(field.to_string()))?;
    field.check(x)?;
    if x.is_zero() {
        return Err(ScalarError::ZeroArgument);
    }
    Ok(pf.log(x.residue().unwrap()))
}

/// `{x in K^x : x^n = a}`, sorted.
pub fn nth_roots(field: &FieldSpec, n: u64, a: &Scalar) -> Result<Vec<Scalar>, ScalarError> {
    assert!(n >= 1, "root degree must be positive");
    field.check(a)?;
    if a.is_zero() {
        return Err(ScalarError::ZeroArgument);
    }
    match field {
        FieldSpec::Prime(pf) => {
            // n*y = log(a) mod (p-1)
            let order = pf.group_order();
            let target = pf.log(a.residue().unwrap());
            let g = n.gcd(&order);
            if target % g != 0 {
                return Ok(Vec::new());
            }
            let m = order / g;
            let n_red = (n / g) % m;
            let t_red = (target / g) % m;
            let y0 = if m == 1 {
                0
            } else {
                (t_red * mod_inverse(n_red, m)) % m
            };
            let mut roots: Vec<Scalar> = (0..g)
                .map(|k| Scalar::Fp {
                    value: pf.gen_pow(y0 + k * m),
                    modulus: pf.p,
                })
                .collect();
            roots.sort();
            Ok(roots)
        }
        FieldSpec::Rationals => {
            let r = a.as_rational().unwrap();
            let even = n.is_multiple_of(2);
            if r.is_negative() && even {
                return Ok(Vec::new());
            }
            let Ok(k) = u32::try_from(n) else {
                // only ±1 have roots of astronomically large degree
                return Ok(match (r.abs().is_one(), r.is_negative(), even) {
                    (true, true, _) => vec![a.clone()],
                    (true, false, true) => vec![-field.one(), field.one()],
                    (true, false, false) => vec![field.one()],
                    _ => Vec::new(),
                });
            };
            let num = r.numer().magnitude();
            let den = r.denom().magnitude();
            let (Some(rn), Some(rd)) = (exact_root(num, k), exact_root(den, k)) else {
                return Ok(Vec::new());
            };
            let pos = BigRational::new(BigInt::from(rn), BigInt::from(rd));
            Ok(if r.is_negative() {
                vec![Scalar::Rational(-pos)]
            } else if even {
                vec![Scalar::Rational(-pos.clone()), Scalar::Rational(pos)]
            } else {
                vec![Scalar::Rational(pos)]
            })
        }
    }
}

fn exact_root(n: &BigUint, k: u32) -> Option<BigUint> {
    let r = n.nth_root(k);
    (num_traits::Pow::pow(&r, k) == *n).then_some(r)
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let e = i128::from(a).extended_gcd(&i128::from(m));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(i128::from(m)) as u64
}

/// `|mu_d(K)|`: `gcd(d, p - 1)` over `F_p`, and 2 or 1 over `Q`.
pub fn mu_order(field: &FieldSpec, d: u64) -> u64 {
    assert!(d >= 1, "root degree must be positive");
    match field {
        FieldSpec::Prime(pf) => d.gcd(&pf.group_order()),
        FieldSpec::Rationals => {
            if d.is_multiple_of(2) {
                2
            } else {
                1
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn q(s: &str) -> Scalar {
        FieldSpec::Rationals.parse_scalar(s).unwrap()
    }

    #[test]
    fn basic_arithmetic() {
        let f7 = f(7);
        assert_eq!(f7.from_i64(3) * f7.from_i64(5), f7.one());
        assert_eq!(f7.from_i64(3).inv(), f7.from_i64(5));
        assert_eq!(q("-1/2").pow(2), q("1/4"));
        assert_eq!(q("2/3").pow(-2), q("9/4"));
        assert_eq!(f7.from_i64(3).pow(-1), f7.from_i64(5));
        assert_eq!(f7.from_i64(-1), f7.from_i64(6));
    }

    #[test]
    fn errors() {
        let f7 = f(7);
        assert_eq!(f7.zero().checked_inv(), Err(ScalarError::DivisionByZero));
        assert!(matches!(
            f7.one().checked_add(&q("1")),
            Err(ScalarError::FieldMismatch(..))
        ));
        assert!(matches!(
            f(5).one().checked_mul(&f7.one()),
            Err(ScalarError::FieldMismatch(..))
        ));
        assert_eq!(FieldSpec::prime(9).err(), Some(ScalarError::NotPrime(9)));
        assert!(FieldSpec::prime(1 << 32).is_err());
        assert_eq!(dlog(&f7, &f7.zero()), Err(ScalarError::ZeroArgument));
        assert!(matches!(
            dlog(&FieldSpec::Rationals, &q("2")),
            Err(ScalarError::NotPrimeField(_))
        ));
    }

    #[test]
    fn parsing_and_display() {
        assert_eq!(q("-5/10").to_string(), "-1/2");
        assert_eq!(q("\u{2212}3").to_string(), "-3");
        assert_eq!(f(7).parse_scalar("1/2").unwrap(), f(7).from_i64(4));
        assert_eq!(f(7).parse_scalar("-1").unwrap().to_string(), "6");
        assert!(f(7).parse_scalar("1/7").is_err());
        assert!(FieldSpec::Rationals.parse_scalar("x").is_err());
        assert!(FieldSpec::Rationals.parse_scalar("1/-2").is_err());
        assert_eq!("F13".parse::<FieldSpec>().unwrap().to_string(), "F13");
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert!("R".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn generator_of_f7_is_3() {
        let f7 = f(7);
        assert_eq!(f7.prime_field().unwrap().generator(), 3);
        assert_eq!(f(2).prime_field().unwrap().generator(), 1);
    }

    #[test]
    fn dlog_examples_match_power_table() {
        let f7 = f(7);
        // power table of 3 in F_7: 1,3,2,6,4,5
        let mut table = HashMap::new();
        let mut x = 1u32;
        for e in 0..6u64 {
            table.insert(x, e);
            x = x * 3 % 7;
        }
        assert_eq!(table[&2], 2);
        assert_eq!(dlog(&f7, &f7.from_i64(2)).unwrap(), 2);
        assert_eq!(dlog(&f7, &f7.from_i64(1)).unwrap(), 0);
        assert_eq!(dlog(&f7, &f7.from_i64(3)).unwrap(), 1);
    }

    #[test]
    fn dlog_exhaustive_small_primes() {
        for p in (2..100).filter(|&p| is_prime_u64(p)) {
            let field = f(p);
            let table = field.prime_field().unwrap().dlog_table().unwrap();
            assert_eq!(table.len(), p as usize - 1);
            for x in field.units().unwrap() {
                let l = dlog(&field, &x).unwrap();
                assert!(l < p - 1);
                assert_eq!(field.generator_pow(l).unwrap(), x);
            }
        }
    }

    #[test]
    fn bsgs_agrees_with_table() {
        let p = 1_000_003u32;
        let pf = match f(u64::from(p)) {
            FieldSpec::Prime(pf) => pf,
            _ => unreachable!(),
        };
        for x in [1u32, 2, 17, 999_999, 123_456] {
            let l = bsgs(p, pf.generator(), x);
            assert_eq!(pow_mod(pf.generator(), l, p), x);
            assert_eq!(l, pf.log(x));
        }
    }

    #[test]
    fn nth_roots_examples() {
        let f7 = f(7);
        let cubes: Vec<u32> = nth_roots(&f7, 3, &f7.one())
            .unwrap()
            .iter()
            .map(|s| s.residue().unwrap())
            .collect();
        assert_eq!(cubes, vec![1, 2, 4]);
        assert_eq!(
            nth_roots(&FieldSpec::Rationals, 2, &q("1")).unwrap(),
            vec![q("-1"), q("1")]
        );
        assert!(nth_roots(&FieldSpec::Rationals, 2, &q("2"))
            .unwrap()
            .is_empty());
        assert_eq!(
            nth_roots(&FieldSpec::Rationals, 3, &q("-8/27")).unwrap(),
            vec![q("-2/3")]
        );
        assert!(nth_roots(&FieldSpec::Rationals, 2, &q("-4"))
            .unwrap()
            .is_empty());
        assert_eq!(
            nth_roots(&FieldSpec::Rationals, 2, &q("9/4")).unwrap(),
            vec![q("-3/2"), q("3/2")]
        );
        assert_eq!(
            nth_roots(&f7, 1, &f7.zero()),
            Err(ScalarError::ZeroArgument)
        );
    }

    #[test]
    fn nth_roots_exhaustive_over_small_fields() {
        for p in [2u64, 3, 5, 7, 11, 13, 17] {
            let field = f(p);
            for n in 1..=12u64 {
                for a in field.units().unwrap() {
                    let brute: Vec<Scalar> = field
                        .units()
                        .unwrap()
                        .into_iter()
                        .filter(|x| x.pow(n as i64) == a)
                        .collect();
                    assert_eq!(
                        nth_roots(&field, n, &a).unwrap(),
                        brute,
                        "p={p} n={n} a={a}"
                    );
                }
                assert_eq!(
                    nth_roots(&field, n, &field.one()).unwrap().len() as u64,
                    mu_order(&field, n)
                );
            }
        }
    }

    #[test]
    fn rational_roots_reraise() {
        for s in ["1", "-1", "4", "-27/8", "16/81", "12", "-32", "1/1024"] {
            let a = q(s);
            for n in 1..=6 {
                for r in nth_roots(&FieldSpec::Rationals, n, &a).unwrap() {
                    assert_eq!(r.pow(n as i64), a);
                }
            }
            assert_eq!(
                nth_roots(&FieldSpec::Rationals, 1 << 40, &q("1"))
                    .unwrap()
                    .len(),
                2
            );
        }
    }

    #[test]
    fn mu_order_examples() {
        assert_eq!(mu_order(&f(7), 3), 3);
        assert_eq!(mu_order(&FieldSpec::Rationals, 3), 1);
        assert_eq!(mu_order(&FieldSpec::Rationals, 4), 2);
        assert_eq!(mu_order(&f(5), 3), 1);
        assert_eq!(nth_roots(&f(5), 3, &f(5).one()).unwrap().len(), 1);
    }

    #[test]
    fn factorization_roundtrip() {
        let r = q("-360/49");
        let fac = r.factorization().unwrap();
        assert!(fac.is_negative());
        assert_eq!(fac.exponents()[&BigUint::from(2u32)], 3);
        assert_eq!(fac.exponents()[&BigUint::from(7u32)], -2);
        assert_eq!(Scalar::Rational(fac.to_rational()), r);
        assert_eq!(Scalar::Rational(fac.pow(-3).to_rational()), r.pow(-3));
        assert!(q("0").factorization().is_none());
    }

    #[test]
    fn factored_multiplication_agrees_with_big_rationals() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let mut pick = || loop {
                let n: i64 = rng.gen_range(-5000..5000);
                let d: i64 = rng.gen_range(1..5000);
                if n != 0 {
                    break FieldSpec::Rationals.from_ratio(n, d).unwrap();
                }
            };
            let (a, b) = (pick(), pick());
            let fa = a.factorization().unwrap();
            let fb = b.factorization().unwrap();
            let prod = &a * &b;
            assert_eq!(fa.mul(&fb), prod.factorization().unwrap());
            assert_eq!(Scalar::Rational(fa.mul(&fb).to_rational()), prod);
        }
    }

    #[test]
    fn big_exponents() {
        let f7 = f(7);
        let e = BigInt::from(-13i64);
        assert_eq!(
            f7.from_i64(3).checked_pow_big(&e).unwrap(),
            f7.from_i64(3).pow(-13)
        );
        let big = BigInt::from(10u32).pow(30u32) + 1u32;
        assert_eq!(q("-1").checked_pow_big(&big).unwrap(), q("-1"));
        assert_eq!(q("2").checked_pow_big(&BigInt::from(-3)).unwrap(), q("1/8"));
    }
}
