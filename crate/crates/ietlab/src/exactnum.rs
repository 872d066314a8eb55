//! Exact arithmetic on the circle R/Z for values of the form
//!
//! ```text
//!     r + n_1*a_1 + ... + n_s*a_s   (mod 1)
//! ```
//!
//! where `r` is an arbitrary-precision rational, the `n_i` are integers, and
//! the `a_i` are fixed irrationals in (0,1): fractional parts of square roots
//! of integers with pairwise distinct squarefree cores. That choice makes
//! `{1, a_1, ..., a_s}` linearly independent over Q, so a linear form with at
//! least one nonzero irrational coefficient is never zero, and its sign can be
//! decided by refining dyadic enclosures of the square roots until zero falls
//! outside the interval. Refinement starts at `precision_hint` bits and
//! doubles each round; independence guarantees termination.
//!
//! Every `CircleValue` is kept in canonical form: the stored rational part is
//! adjusted by the unique integer that puts the real value `r + sum n_i a_i`
//! into [0,1). Canonical forms are unique, so equality and hashing are
//! structural.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{IetError, Result};

// ======================================================================
// Irrational basis
// ======================================================================

/// A list of `s` irrationals `a_i = sqrt(d_i) - floor(sqrt(d_i))`, available
/// at arbitrary precision through integer square roots.
#[derive(Debug, Clone)]
pub struct IrrationalBasis {
    radicands: Vec<u64>,
    precision_hint: u32,
}

/// Two bases are interchangeable iff they realize the same numbers; the
/// starting precision is a performance knob, not part of the identity.
impl PartialEq for IrrationalBasis {
    fn eq(&self, other: &Self) -> bool {
        self.radicands == other.radicands
    }
}
impl Eq for IrrationalBasis {}
impl std::hash::Hash for IrrationalBasis {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.radicands.hash(state);
    }
}

pub const DEFAULT_PRECISION_HINT: u32 = 64;

fn first_primes(s: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(s);
    let mut n = 2u64;
    while out.len() < s {
        if (2..=n.isqrt()).all(|d| n % d != 0) {
            out.push(n);
        }
        n += 1;
    }
    out
}

fn squarefree_core(mut d: u64) -> u64 {
    let mut core = 1u64;
    let mut p = 2u64;
    while p * p <= d {
        let mut count = 0u32;
        while d % p == 0 {
            d /= p;
            count += 1;
        }
        if count % 2 == 1 {
            core *= p;
        }
        p += 1;
    }
    core * d
}

impl IrrationalBasis {
    /// Default realization: fractional parts of the square roots of the first
    /// `s` primes (sqrt(2)-1, sqrt(3)-1, sqrt(5)-2, ...).
    pub fn sqrt_primes(s: usize) -> Result<Arc<Self>> {
        Self::from_radicands(first_primes(s))
    }

    /// Realization from explicit radicands. Independence over Q of
    /// `{1, sqrt(d_1), ..., sqrt(d_s)}` holds exactly when no radicand is a
    /// perfect square and the squarefree cores are pairwise distinct, so this
    /// is validated rather than trusted.
    pub fn from_radicands(radicands: Vec<u64>) -> Result<Arc<Self>> {
        if radicands.is_empty() {
            return Err(IetError::EmptyBasis);
        }
        let mut cores: Vec<(u64, u64)> = Vec::new();
        for &d in &radicands {
            if d < 2 {
                return Err(IetError::RadicandTooSmall(d));
            }
            let r = d.isqrt();
            if r * r == d {
                return Err(IetError::SquareRadicand(d));
            }
            let core = squarefree_core(d);
            if let Some(&(prev, _)) = cores.iter().find(|&&(_, c)| c == core) {
                return Err(IetError::DependentRadicands(prev, d, core));
            }
            cores.push((d, core));
        }
        Ok(Arc::new(IrrationalBasis {
            radicands,
            precision_hint: DEFAULT_PRECISION_HINT,
        }))
    }

    pub fn with_precision_hint(mut self: Arc<Self>, bits: u32) -> Arc<Self> {
        Arc::make_mut(&mut self).precision_hint = bits.max(4);
        self
    }

    pub fn s(&self) -> usize {
        self.radicands.len()
    }

    pub fn radicands(&self) -> &[u64] {
        &self.radicands
    }

    pub fn is_sqrt_primes(&self) -> bool {
        self.radicands == first_primes(self.radicands.len())
    }

    /// Squarefree core and integer multiplier of `sqrt(d_i) = k*sqrt(core)`.
    pub fn core_and_multiplier(&self, i: usize) -> (u64, u64) {
        let d = self.radicands[i];
        let core = squarefree_core(d);
        ((core), (d / core).isqrt())
    }

    /// Dyadic enclosure `lo <= a_i <= hi` with `hi - lo = 2^-bits`.
    fn enclosure(&self, i: usize, bits: u32) -> (BigRational, BigRational) {
        let d = self.radicands[i];
        let shifted = BigUint::from(d) << (2 * bits as usize);
        let n = shifted.sqrt();
        let denom = BigInt::one() << bits as usize;
        let base = BigInt::from(d.isqrt());
        let lo = BigRational::new(BigInt::from(n.clone()) - &base * &denom, denom.clone());
        let hi = BigRational::new(BigInt::from(n) + 1 - &base * &denom, denom);
        (lo, hi)
    }

    fn f64_alpha(&self, i: usize) -> f64 {
        let d = self.radicands[i] as f64;
        d.sqrt() - (self.radicands[i].isqrt() as f64)
    }
}

// ======================================================================
// Sign and floor of linear forms (not reduced mod 1)
// ======================================================================

fn interval_of_form(
    basis: &IrrationalBasis,
    rat: &BigRational,
    irr: &[i64],
    bits: u32,
) -> (BigRational, BigRational) {
    let mut lo = rat.clone();
    let mut hi = rat.clone();
    for (i, &n) in irr.iter().enumerate() {
        if n == 0 {
            continue;
        }
        let (alo, ahi) = basis.enclosure(i, bits);
        let n = BigRational::from_integer(BigInt::from(n));
        if n.is_positive() {
            lo += &n * alo;
            hi += &n * ahi;
        } else {
            lo += &n * ahi;
            hi += &n * alo;
        }
    }
    (lo, hi)
}

/// Sign of `rat + sum irr_i * a_i` as a real number. Never loops forever: a
/// form with a nonzero irrational coefficient is nonzero by independence.
pub(crate) fn sign_of_form(basis: &IrrationalBasis, rat: &BigRational, irr: &[i64]) -> Ordering {
    if irr.iter().all(|&n| n == 0) {
        return rat.cmp(&BigRational::zero());
    }
    let mut bits = basis.precision_hint;
    loop {
        let (lo, hi) = interval_of_form(basis, rat, irr, bits);
        if lo.is_positive() {
            return Ordering::Greater;
        }
        if hi.is_negative() {
            return Ordering::Less;
        }
        bits *= 2;
    }
}

/// Exact floor of `rat + sum irr_i * a_i`.
pub(crate) fn floor_of_form(basis: &IrrationalBasis, rat: &BigRational, irr: &[i64]) -> BigInt {
    if irr.iter().all(|&n| n == 0) {
        return rat.floor().to_integer();
    }
    let mut bits = basis.precision_hint;
    loop {
        let (lo, hi) = interval_of_form(basis, rat, irr, bits);
        let (flo, fhi) = (lo.floor().to_integer(), hi.floor().to_integer());
        if flo == fhi {
            return flo;
        }
        bits *= 2;
    }
}

// ======================================================================
// Circle values
// ======================================================================

/// An exactly represented point of R/Z, stored canonically in [0,1).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CircleValue {
    basis: Arc<IrrationalBasis>,
    rat: BigRational,
    irr: Vec<i64>,
}

impl CircleValue {
    /// Canonicalizes `rat + sum irr_i * a_i` into [0,1).
    pub fn new(basis: &Arc<IrrationalBasis>, rat: BigRational, irr: Vec<i64>) -> Result<Self> {
        if irr.len() != basis.s() {
            return Err(IetError::CoefficientCount {
                expected: basis.s(),
                got: irr.len(),
            });
        }
        let k = floor_of_form(basis, &rat, &irr);
        Ok(CircleValue {
            basis: Arc::clone(basis),
            rat: rat - BigRational::from_integer(k),
            irr,
        })
    }

    pub fn zero(basis: &Arc<IrrationalBasis>) -> Self {
        CircleValue {
            basis: Arc::clone(basis),
            rat: BigRational::zero(),
            irr: vec![0; basis.s()],
        }
    }

    pub fn from_rational(basis: &Arc<IrrationalBasis>, r: BigRational) -> Self {
        let k = r.floor();
        CircleValue {
            basis: Arc::clone(basis),
            rat: r - k,
            irr: vec![0; basis.s()],
        }
    }

    /// Convenience for small rationals `num/den`.
    pub fn rational(basis: &Arc<IrrationalBasis>, num: i64, den: i64) -> Self {
        Self::from_rational(basis, BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// The basis irrational `a_i` itself.
    pub fn alpha(basis: &Arc<IrrationalBasis>, i: usize) -> Self {
        assert!(i < basis.s(), "alpha index {i} out of range");
        let mut irr = vec![0; basis.s()];
        irr[i] = 1;
        CircleValue::new(basis, BigRational::zero(), irr).expect("coefficient count matches")
    }

    pub fn basis(&self) -> &Arc<IrrationalBasis> {
        &self.basis
    }

    /// Rational part of the canonical representative in [0,1).
    pub fn rational_part(&self) -> &BigRational {
        &self.rat
    }

    /// Integer coefficients of the irrational part.
    pub fn coefficients(&self) -> &[i64] {
        &self.irr
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.iter().all(|&n| n == 0)
    }

    /// Exact rationality test; returns the canonical representative when the
    /// irrational part vanishes.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.irr.iter().all(|&n| n == 0) {
            Some(&self.rat)
        } else {
            None
        }
    }

    fn assert_same_basis(&self, other: &Self) {
        assert!(
            self.basis == other.basis,
            "circle values from different irrational bases cannot be combined"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_basis(other);
        let irr: Vec<i64> = self
            .irr
            .iter()
            .zip(&other.irr)
            .map(|(a, b)| a.checked_add(*b).expect("coefficient overflow"))
            .collect();
        CircleValue::new(&self.basis, &self.rat + &other.rat, irr).expect("same basis")
    }

    pub fn neg(&self) -> Self {
        let irr: Vec<i64> = self.irr.iter().map(|&n| -n).collect();
        CircleValue::new(&self.basis, -self.rat.clone(), irr).expect("same basis")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul_int(&self, k: i64) -> Self {
        let irr: Vec<i64> = self
            .irr
            .iter()
            .map(|&n| n.checked_mul(k).expect("coefficient overflow"))
            .collect();
        CircleValue::new(
            &self.basis,
            &self.rat * BigRational::from_integer(BigInt::from(k)),
            irr,
        )
        .expect("same basis")
    }

    pub fn add_rational(&self, r: &BigRational) -> Self {
        CircleValue::new(&self.basis, &self.rat + r, self.irr.clone()).expect("same basis")
    }

    /// Total order on canonical representatives in [0,1).
    pub fn compare(&self, other: &Self) -> Ordering {
        self.assert_same_basis(other);
        if self.rat == other.rat && self.irr == other.irr {
            return Ordering::Equal;
        }
        let diff_irr: Vec<i64> = self
            .irr
            .iter()
            .zip(&other.irr)
            .map(|(a, b)| a - b)
            .collect();
        sign_of_form(&self.basis, &(&self.rat - &other.rat), &diff_irr)
    }

    /// Writes `gamma = j0/q + tilde` with `j0` in `{0..q-1}` and `tilde` in
    /// `[0, 1/q)`; both parts are exact.
    pub fn decompose_mod(&self, q: u32) -> Result<(u32, CircleValue)> {
        if q == 0 {
            return Err(IetError::BadModulus(q));
        }
        let scaled: Vec<i64> = self
            .irr
            .iter()
            .map(|&n| n.checked_mul(q as i64).expect("coefficient overflow"))
            .collect();
        let j0 = floor_of_form(
            &self.basis,
            &(&self.rat * BigRational::from_integer(BigInt::from(q))),
            &scaled,
        );
        let j0 = j0.to_u32().expect("canonical value lies in [0,1)");
        let tilde = CircleValue {
            basis: Arc::clone(&self.basis),
            rat: &self.rat - BigRational::new(BigInt::from(j0), BigInt::from(q)),
            irr: self.irr.clone(),
        };
        Ok((j0, tilde))
    }

    /// Floating-point shadow of the canonical representative; used for
    /// display and for agreement tests, never for decisions.
    pub fn to_f64(&self) -> f64 {
        let mut v = self.rat.to_f64().unwrap_or(f64::NAN);
        for (i, &n) in self.irr.iter().enumerate() {
            v += n as f64 * self.basis.f64_alpha(i);
        }
        v
    }
}

impl PartialOrd for CircleValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.compare(other))
    }
}

impl Ord for CircleValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl fmt::Debug for CircleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CircleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", rational_string(&self.rat))?;
        for (i, &n) in self.irr.iter().enumerate() {
            match n {
                0 => {}
                1 => write!(f, "+a{}", i + 1)?,
                -1 => write!(f, "-a{}", i + 1)?,
                n if n > 0 => write!(f, "+{}*a{}", n, i + 1)?,
                n => write!(f, "{}*a{}", n, i + 1)?,
            }
        }
        Ok(())
    }
}

// ======================================================================
// Serialization
// ======================================================================

pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rational_from_str(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let parsed = if t.contains('/') {
        BigRational::from_str(t).ok()
    } else {
        BigInt::from_str(t).ok().map(BigRational::from_integer)
    };
    parsed.ok_or_else(|| IetError::BadRational(s.to_string()))
}

impl Serialize for CircleValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("CircleValue", 2)?;
        st.serialize_field("rat", &rational_string(&self.rat))?;
        st.serialize_field("irr", &self.irr)?;
        st.end()
    }
}

/// Basis-free wire form of a circle value; bind it to a basis to use it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CircleValueRepr {
    pub rat: String,
    pub irr: Vec<i64>,
}

impl CircleValueRepr {
    pub fn bind(&self, basis: &Arc<IrrationalBasis>) -> Result<CircleValue> {
        CircleValue::new(basis, rational_from_str(&self.rat)?, self.irr.clone())
    }
}

impl From<&CircleValue> for CircleValueRepr {
    fn from(v: &CircleValue) -> Self {
        CircleValueRepr {
            rat: rational_string(&v.rat),
            irr: v.irr.clone(),
        }
    }
}

/// Wire form of a basis: `"sqrt-primes"` or `{"sqrt": [3, 7]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RealizationRepr {
    Named(String),
    Sqrt { sqrt: Vec<u64> },
}

impl RealizationRepr {
    pub fn to_basis(&self, s: usize) -> Result<Arc<IrrationalBasis>> {
        match self {
            RealizationRepr::Named(name) if name == "sqrt-primes" => IrrationalBasis::sqrt_primes(s),
            RealizationRepr::Named(name) => {
                Err(IetError::Schema(format!("unknown realization `{name}`")))
            }
            RealizationRepr::Sqrt { sqrt } => {
                if sqrt.len() != s {
                    return Err(IetError::Schema(format!(
                        "realization lists {} radicands but s={s}",
                        sqrt.len()
                    )));
                }
                IrrationalBasis::from_radicands(sqrt.clone())
            }
        }
    }

    pub fn of_basis(basis: &IrrationalBasis) -> Self {
        if basis.is_sqrt_primes() {
            RealizationRepr::Named("sqrt-primes".to_string())
        } else {
            RealizationRepr::Sqrt {
                sqrt: basis.radicands().to_vec(),
            }
        }
    }
}

// ======================================================================
// Tests
// ======================================================================
