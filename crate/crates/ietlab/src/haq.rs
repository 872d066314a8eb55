//! Groups generated by irrational rotations and exchanges of the 1/q-grid.
//!
//! A [`HaqSpec`] fixes the grid size q, the grid exchanges `E_{τ}` for τ in a
//! generating list, and the basis of rotation amounts α₁,…,α_s. Words over
//! these generators carry their realized interval exchange alongside the
//! letter sequence, which keeps both the syntactic data (for the translation
//! morphism ℓ and for decompositions) and the exact map (for evaluation and
//! equality).
//!
//! Torsion elements — the kernel of ℓ — permute each fiber
//! `{x, x+1/q, …, x+(q−1)/q}`; the map `x ↦ ω(f,x)` recording that local
//! permutation is piecewise constant on `[0,1/q)` and is stored as a
//! [`StepProfile`]. Profiles multiply pointwise, which makes searching for
//! commutator words that realize a prescribed grid exchange far cheaper than
//! composing interval exchanges.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{IetError, Result};
use crate::exactnum::{CircleValue, CircleValueRepr, IrrationalBasis, RealizationRepr};
use crate::ietcore::{classes_mod_q, IntervalExchange, PointSet};
use crate::permgrp::{build_v, build_w, build_w0, Perm, PermGroup, PermRepr};

// ======================================================================
// Specs
// ======================================================================

/// Generating data: the rotations by α₁,…,α_s together with the grid
/// exchanges `E_{τ}` for the listed permutations τ of degree q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HaqSpec {
    q: u32,
    qgens: Vec<Perm>,
    basis: Arc<IrrationalBasis>,
}

impl HaqSpec {
    pub fn new(q: u32, qgens: Vec<Perm>, basis: Arc<IrrationalBasis>) -> Result<Arc<Self>> {
        if q == 0 {
            return Err(IetError::BadModulus(0));
        }
        for g in &qgens {
            if g.degree() != q as usize {
                return Err(IetError::DegreeMismatch(g.degree(), q as usize));
            }
        }
        Ok(Arc::new(HaqSpec { q, qgens, basis }))
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn qgens(&self) -> &[Perm] {
        &self.qgens
    }

    /// Number of grid-exchange generators.
    pub fn m(&self) -> usize {
        self.qgens.len()
    }

    /// Number of rotation generators.
    pub fn s(&self) -> usize {
        self.basis.s()
    }

    pub fn basis(&self) -> &Arc<IrrationalBasis> {
        &self.basis
    }

    pub fn alpha(&self, i: usize) -> CircleValue {
        CircleValue::alpha(&self.basis, i)
    }

    /// The permutation group generated by the τ's (the grid images of the
    /// rational generators).
    pub fn sq_group(&self) -> PermGroup {
        PermGroup::new(self.q as usize, self.qgens.clone())
    }

    /// 𝔖(Q) together with the full cycle σ.
    pub fn w_group(&self) -> PermGroup {
        build_w(&self.qgens, self.q as usize)
    }

    /// The group generated by all σ-conjugates of 𝔖(Q).
    pub fn v_group(&self) -> PermGroup {
        build_v(&self.qgens, self.q as usize)
    }
}

/// Wire form of a spec: `{"q":4,"Qgens":["(1,3)"],"s":1,"alphas":"sqrt-primes"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HaqSpecRepr {
    pub q: u32,
    #[serde(rename = "Qgens")]
    pub qgens: Vec<PermRepr>,
    pub s: usize,
    pub alphas: RealizationRepr,
}

impl HaqSpecRepr {
    pub fn of(spec: &HaqSpec) -> Self {
        HaqSpecRepr {
            q: spec.q,
            qgens: spec.qgens.iter().map(PermRepr::from).collect(),
            s: spec.s(),
            alphas: RealizationRepr::of_basis(&spec.basis),
        }
    }

    pub fn bind(&self) -> Result<Arc<HaqSpec>> {
        if self.s == 0 {
            return Err(IetError::EmptyBasis);
        }
        let basis = self.alphas.to_basis(self.s)?;
        let qgens = self
            .qgens
            .iter()
            .map(|r| r.bind(self.q as usize))
            .collect::<Result<Vec<_>>>()?;
        HaqSpec::new(self.q, qgens, basis)
    }
}

// ======================================================================
// Words
// ======================================================================

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Letter {
    /// Rotation by the stored amount.
    Rot(CircleValue),
    /// The grid exchange of the i-th listed permutation.
    Gen(usize),
    /// Its inverse.
    GenInv(usize),
}

/// A word over the spec's generators, multiplied left to right (the rightmost
/// letter acts first), together with its realized interval exchange.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupWord {
    spec: Arc<HaqSpec>,
    letters: Vec<Letter>,
    realized: IntervalExchange,
}

impl GroupWord {
    pub fn identity(spec: &Arc<HaqSpec>) -> Self {
        GroupWord {
            spec: Arc::clone(spec),
            letters: Vec::new(),
            realized: IntervalExchange::identity(spec.basis()),
        }
    }

    pub fn rotation(spec: &Arc<HaqSpec>, amount: &CircleValue) -> Self {
        GroupWord {
            spec: Arc::clone(spec),
            letters: vec![Letter::Rot(amount.clone())],
            realized: IntervalExchange::rotation(amount),
        }
    }

    /// The word `R_{α_i}`.
    pub fn rotation_gen(spec: &Arc<HaqSpec>, i: usize) -> Self {
        Self::rotation(spec, &spec.alpha(i))
    }

    /// The word `E_{τ_i}` for the i-th listed grid permutation.
    pub fn generator(spec: &Arc<HaqSpec>, i: usize) -> Result<Self> {
        let tau = spec
            .qgens
            .get(i)
            .ok_or_else(|| IetError::Schema(format!("generator index {i} out of range")))?;
        Ok(GroupWord {
            spec: Arc::clone(spec),
            letters: vec![Letter::Gen(i)],
            realized: IntervalExchange::from_permutation(spec.basis(), tau),
        })
    }

    pub fn spec(&self) -> &Arc<HaqSpec> {
        &self.spec
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn realized(&self) -> &IntervalExchange {
        &self.realized
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `self · other` (apply `other` first).
    pub fn compose(&self, other: &GroupWord) -> GroupWord {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        GroupWord {
            spec: Arc::clone(&self.spec),
            letters,
            realized: self.realized.compose(&other.realized),
        }
    }

    pub fn inverse(&self) -> GroupWord {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| match l {
                Letter::Rot(c) => Letter::Rot(c.neg()),
                Letter::Gen(i) => Letter::GenInv(*i),
                Letter::GenInv(i) => Letter::Gen(*i),
            })
            .collect();
        GroupWord {
            spec: Arc::clone(&self.spec),
            letters,
            realized: self.realized.inverse(),
        }
    }

    pub fn pow(&self, exp: i64) -> GroupWord {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut acc = GroupWord::identity(&self.spec);
        for _ in 0..exp.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    /// `[f,g] = f g f⁻¹ g⁻¹`.
    pub fn commutator(f: &GroupWord, g: &GroupWord) -> GroupWord {
        f.compose(g).compose(&f.inverse()).compose(&g.inverse())
    }

    /// The total rotation-letter coefficient vector 𝔫(f) over α₁,…,α_s.
    pub fn rotation_coefficients(&self) -> Vec<i64> {
        let mut total = vec![0i64; self.spec.s()];
        for letter in &self.letters {
            if let Letter::Rot(c) = letter {
                for (acc, &n) in total.iter_mut().zip(c.coefficients()) {
                    *acc = acc.checked_add(n).expect("rotation coefficient overflow");
                }
            }
        }
        total
    }

    /// The translation morphism: the irrational part Σ 𝔫ᵢ(f)·αᵢ of the word,
    /// reduced mod 1. Computed syntactically from the rotation letters and
    /// cross-checked against the realized map, which must differ from
    /// `x ↦ x + ℓ(f)` by rational amounts only.
    pub fn ell(&self) -> Result<CircleValue> {
        let coeffs = self.rotation_coefficients();
        let value = CircleValue::new(self.spec.basis(), num_rational::BigRational::zero(), coeffs)?;
        let q = self.spec.q() as i64;
        let samples = [
            CircleValue::zero(self.spec.basis()),
            CircleValue::rational(self.spec.basis(), 1, 2 * q + 1),
            self.spec.alpha(0),
        ];
        for x in &samples {
            let offset = self.realized.evaluate(x).sub(x).sub(&value);
            if offset.as_rational().is_none() {
                return Err(IetError::MorphismCrossCheck(x.to_string()));
            }
        }
        Ok(value)
    }

    /// Whether the word lies in the kernel of ℓ (equivalently: it is torsion,
    /// a map with rational translations).
    pub fn is_torsion(&self) -> Result<bool> {
        Ok(self.ell()?.is_zero())
    }

    /// Splits off the rotation part: `f = P_f · R_{ℓ(f)} = R_{ℓ(f)} · Q_f`
    /// with both factors in the kernel of ℓ.
    pub fn decompose(&self) -> Result<Decomposition> {
        let rotation = self.ell()?;
        let back = GroupWord::rotation(&self.spec, &rotation.neg());
        Ok(Decomposition {
            p: self.compose(&back),
            q: back.compose(self),
            rotation,
        })
    }

    /// The local permutation at x ∈ [0, 1/q).
    pub fn local_perm(&self, x: &CircleValue) -> Result<Perm> {
        self.require_torsion()?;
        local_perm(&self.realized, self.spec.q(), x)
    }

    /// The full step profile x ↦ ω(f,x) of a kernel element.
    pub fn profile(&self) -> Result<StepProfile> {
        self.require_torsion()?;
        StepProfile::of_map(&self.realized, self.spec.q())
    }

    /// Order of a torsion element, via the profile.
    pub fn torsion_order(&self) -> Result<u64> {
        Ok(self.profile()?.order())
    }

    fn require_torsion(&self) -> Result<()> {
        let ell = self.ell()?;
        if !ell.is_zero() {
            return Err(IetError::Precondition(format!(
                "element has nonzero translation number {ell}"
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "Id");
        }
        for (k, letter) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, "·")?;
            }
            match letter {
                Letter::Rot(c) => write!(f, "R({c})")?,
                Letter::Gen(i) => write!(f, "E{}", self.spec.qgens[*i])?,
                Letter::GenInv(i) => write!(f, "E{}⁻¹", self.spec.qgens[*i])?,
            }
        }
        Ok(())
    }
}

/// `f = p · R_rotation = R_rotation · q`, with p and q in ker ℓ.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub p: GroupWord,
    pub q: GroupWord,
    pub rotation: CircleValue,
}

// ----------------------------------------------------------------------
// Word wire form
// ----------------------------------------------------------------------

/// Wire form of a letter: `{"rot":"a1"}`, `{"rot":{"rat":"1/4","irr":[2]}}`,
/// `{"gen":0}`, or `{"inv":<letter>}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LetterRepr {
    Rot { rot: RotationAmountRepr },
    Gen { gen: usize },
    Inv { inv: Box<LetterRepr> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RotationAmountRepr {
    Named(String),
    Value(CircleValueRepr),
}

impl RotationAmountRepr {
    pub fn bind(&self, spec: &HaqSpec) -> Result<CircleValue> {
        match self {
            RotationAmountRepr::Named(name) => {
                let index: usize = name
                    .strip_prefix('a')
                    .and_then(|rest| rest.parse().ok())
                    .ok_or_else(|| {
                        IetError::Schema(format!("unknown rotation name {name:?} (expected a1..a{})", spec.s()))
                    })?;
                if index == 0 || index > spec.s() {
                    return Err(IetError::Schema(format!(
                        "rotation name {name:?} out of range (expected a1..a{})",
                        spec.s()
                    )));
                }
                Ok(spec.alpha(index - 1))
            }
            RotationAmountRepr::Value(repr) => repr.bind(&spec.basis),
        }
    }
}

impl LetterRepr {
    fn bind_word(&self, spec: &Arc<HaqSpec>) -> Result<GroupWord> {
        match self {
            LetterRepr::Rot { rot } => Ok(GroupWord::rotation(spec, &rot.bind(spec)?)),
            LetterRepr::Gen { gen } => GroupWord::generator(spec, *gen),
            LetterRepr::Inv { inv } => Ok(inv.bind_word(spec)?.inverse()),
        }
    }

    fn of_letter(letter: &Letter, spec: &HaqSpec) -> LetterRepr {
        match letter {
            Letter::Rot(c) => {
                let named = (0..spec.s()).find(|&i| spec.alpha(i) == *c);
                let rot = match named {
                    Some(i) => RotationAmountRepr::Named(format!("a{}", i + 1)),
                    None => RotationAmountRepr::Value(CircleValueRepr::from(c)),
                };
                LetterRepr::Rot { rot }
            }
            Letter::Gen(i) => LetterRepr::Gen { gen: *i },
            Letter::GenInv(i) => LetterRepr::Inv {
                inv: Box::new(LetterRepr::Gen { gen: *i }),
            },
        }
    }
}

/// Binds a JSON letter list (left-to-right product) over a spec.
pub fn bind_word(letters: &[LetterRepr], spec: &Arc<HaqSpec>) -> Result<GroupWord> {
    let mut word = GroupWord::identity(spec);
    for letter in letters {
        word = word.compose(&letter.bind_word(spec)?);
    }
    Ok(word)
}

pub fn word_repr(word: &GroupWord) -> Vec<LetterRepr> {
    word.letters
        .iter()
        .map(|l| LetterRepr::of_letter(l, &word.spec))
        .collect()
}

// ======================================================================
// Local permutations and step profiles
// ======================================================================

/// The permutation ω with `f(x + (i−1)/q) = x + (ω(i)−1)/q`, for a map with
/// rational translations in (1/q)ℤ over the fiber of x.
pub fn local_perm(f: &IntervalExchange, q: u32, x: &CircleValue) -> Result<Perm> {
    let basis = x.basis();
    let step = CircleValue::rational(basis, 1, q as i64);
    if q > 1 && *x >= step {
        return Err(IetError::Precondition(format!(
            "probe point {x} is not inside [0, 1/{q})"
        )));
    }
    let mut one_line = vec![0usize; q as usize];
    for i in 0..q as usize {
        let point = x.add(&CircleValue::rational(basis, i as i64, q as i64));
        let offset = f.evaluate(&point).sub(x);
        let image = match offset.as_rational() {
            Some(r) => {
                let scaled = r * num_rational::BigRational::from_integer(q.into());
                if scaled.is_integer() {
                    scaled.to_integer().to_usize()
                } else {
                    None
                }
            }
            None => None,
        };
        match image {
            Some(j) if j < q as usize => one_line[i] = j + 1,
            _ => {
                return Err(IetError::NotKernelElement {
                    q,
                    x: x.to_string(),
                })
            }
        }
    }
    Perm::from_one_line(&one_line).map_err(|_| IetError::NotKernelElement {
        q,
        x: x.to_string(),
    })
}

/// The piecewise-constant map `x ↦ ω(f,x)` on `[0, 1/q)`: breakpoints (the
/// first always 0) and the value on each piece. Adjacent values differ, so
/// the pieces are canonical and profile equality is map equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StepProfile {
    q: u32,
    cuts: Vec<CircleValue>,
    values: Vec<Perm>,
}

impl StepProfile {
    /// Profile of a map with translations in (1/q)ℤ. Probe points are the
    /// piece left endpoints: the map's circle breakpoints reduced mod 1/q,
    /// together with 0.
    pub fn of_map(f: &IntervalExchange, q: u32) -> Result<StepProfile> {
        let basis = f.basis();
        let mut cut_set: BTreeSet<CircleValue> = BTreeSet::new();
        cut_set.insert(CircleValue::zero(basis));
        for bp in f.breakpoints_circle() {
            let (_, reduced) = bp.decompose_mod(q)?;
            cut_set.insert(reduced);
        }
        let cuts: Vec<CircleValue> = cut_set.into_iter().collect();
        let values = cuts
            .iter()
            .map(|x| local_perm(f, q, x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::merged(q, cuts, values))
    }

    pub fn constant(q: u32, basis: &Arc<IrrationalBasis>, value: Perm) -> StepProfile {
        assert_eq!(value.degree(), q as usize);
        StepProfile {
            q,
            cuts: vec![CircleValue::zero(basis)],
            values: vec![value],
        }
    }

    fn merged(q: u32, cuts: Vec<CircleValue>, values: Vec<Perm>) -> StepProfile {
        let mut merged_cuts = Vec::with_capacity(cuts.len());
        let mut merged_values: Vec<Perm> = Vec::with_capacity(values.len());
        for (cut, value) in cuts.into_iter().zip(values) {
            if merged_values.last() == Some(&value) {
                continue;
            }
            merged_cuts.push(cut);
            merged_values.push(value);
        }
        StepProfile {
            q,
            cuts: merged_cuts,
            values: merged_values,
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn cuts(&self) -> &[CircleValue] {
        &self.cuts
    }

    pub fn values(&self) -> &[Perm] {
        &self.values
    }

    pub fn num_pieces(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_identity(&self) -> bool {
        self.values.iter().all(Perm::is_identity)
    }

    /// Value at a point of [0, 1/q).
    pub fn value_at(&self, x: &CircleValue) -> &Perm {
        let mut index = 0;
        for (i, cut) in self.cuts.iter().enumerate().skip(1) {
            if cut <= x {
                index = i;
            } else {
                break;
            }
        }
        &self.values[index]
    }

    /// Pointwise product `self · other` (apply `other` first), on the common
    /// refinement of the pieces.
    pub fn compose(&self, other: &StepProfile) -> StepProfile {
        assert_eq!(self.q, other.q, "profiles over different grids");
        let mut cut_set: BTreeSet<CircleValue> = self.cuts.iter().cloned().collect();
        cut_set.extend(other.cuts.iter().cloned());
        let cuts: Vec<CircleValue> = cut_set.into_iter().collect();
        let values = cuts
            .iter()
            .map(|x| self.value_at(x).compose(other.value_at(x)))
            .collect();
        Self::merged(self.q, cuts, values)
    }

    pub fn inverse(&self) -> StepProfile {
        StepProfile {
            q: self.q,
            cuts: self.cuts.clone(),
            values: self.values.iter().map(Perm::inverse).collect(),
        }
    }

    /// Rebuilds the interval exchange `x + (i−1)/q ↦ x + (ωⱼ(i)−1)/q`.
    pub fn to_iet(&self, basis: &Arc<IrrationalBasis>) -> IntervalExchange {
        let q = self.q as i64;
        let mut cuts = Vec::new();
        let mut deltas = Vec::new();
        for residue in 0..q {
            let shift = CircleValue::rational(basis, residue, q);
            for (cut, value) in self.cuts.iter().zip(&self.values) {
                cuts.push(cut.add(&shift));
                deltas.push(CircleValue::rational(
                    basis,
                    value.apply(residue as usize) as i64 - residue,
                    q,
                ));
            }
        }
        IntervalExchange::canonicalized(cuts, deltas)
    }

    /// Order of the underlying torsion map: the lcm of the piece orders.
    pub fn order(&self) -> u64 {
        self.values.iter().map(Perm::order).fold(1, |a, b| a.lcm(&b))
    }
}

impl fmt::Debug for StepProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Profile[1/{}]{{", self.q)?;
        for i in 0..self.cuts.len() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} ↦ {}", self.cuts[i], self.values[i])?;
        }
        write!(f, "}}")
    }
}

// ======================================================================
// Images of ω on the kernel and on the commutator subgroup
// ======================================================================

/// The group of values taken by x ↦ ω(f,x) over all kernel elements: the
/// σ-conjugates of 𝔖(Q).
pub fn omega_image_kernel(spec: &HaqSpec) -> PermGroup {
    spec.v_group()
}

/// The group of values over the commutator subgroup: generated by the
/// commutators `[σ^p, t]` and `[t₁, t₂]` with t, t₁, t₂ ranging over 𝔖(Q);
/// equal to the derived subgroup of W.
pub fn omega_image_commutator(spec: &HaqSpec, cap: usize) -> Result<PermGroup> {
    build_w0(&spec.sq_group(), cap)
}

// ======================================================================
// Witness search in [H,H]
// ======================================================================

/// Default probe rotation amounts: one per residue window, the smallest
/// positive multiple m·α₁ whose circle value lies strictly inside
/// `(j/q + j/q², j/q + (j+1)/q²)` — a generic irrational point of the j-th
/// grid interval.
pub fn default_probes(spec: &HaqSpec) -> Result<Vec<CircleValue>> {
    (0..spec.q()).map(|j| Ok(probe_for_residue(spec.basis(), spec.q(), j)?.1)).collect()
}

/// The (multiplier, amount) pair for one residue window; search capped to
/// keep failures loud rather than silent.
pub fn probe_for_residue(
    basis: &Arc<IrrationalBasis>,
    q: u32,
    j: u32,
) -> Result<(u64, CircleValue)> {
    let q = q as i64;
    let j = j as i64;
    let alpha = CircleValue::alpha(basis, 0);
    let lo = CircleValue::rational(basis, j * q + j, q * q);
    // The top window for j = q−1 ends at 1, which wraps to 0 on the circle;
    // there the upper comparison is vacuous.
    let hi = if j * q + j + 1 == q * q {
        None
    } else {
        Some(CircleValue::rational(basis, j * q + j + 1, q * q))
    };
    let mut value = CircleValue::zero(basis);
    for m in 1..=100_000u64 {
        value = value.add(&alpha);
        if value > lo && hi.as_ref().is_none_or(|h| value < *h) {
            return Ok((m, value));
        }
    }
    Err(IetError::ProbeSearchExhausted(j as u32))
}

#[derive(Debug, Clone)]
pub enum WitnessOutcome {
    /// A word in the commutator generators realizing the target exactly.
    Found(Witness),
    /// The target is outside `[W,W] ∩ 𝔖(Q)`, so no witness can exist.
    Impossible { reason: String },
    /// Budget exhausted without a hit; says nothing about existence.
    Unresolved { states_explored: usize },
}

#[derive(Clone)]
pub struct Witness {
    pub word: GroupWord,
    /// Human-readable factors, outermost first.
    pub blocks: Vec<String>,
    /// Number of commutator blocks.
    pub length: usize,
}

impl fmt::Debug for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Witness(len {}): {}", self.length, self.blocks.join(" · "))
    }
}

/// Breadth-first search for a product of at most `budget` commutator blocks
/// `[R_a, E_t^{±1}]` (a over the probes) and `[E_{t₁}^{±1}, E_{t₂}^{±1}]`,
/// together with their inverses, whose realized map is the grid exchange of
/// `target`. States are step profiles, memoized; the first hit is returned
/// and re-verified against the exact interval exchange.
pub fn witness_search(
    spec: &Arc<HaqSpec>,
    target: &Perm,
    budget: usize,
    probes: &[CircleValue],
) -> Result<WitnessOutcome> {
    if target.degree() != spec.q() as usize {
        return Err(IetError::DegreeMismatch(target.degree(), spec.q() as usize));
    }
    let sq = spec.sq_group();
    if !sq.contains(target) {
        return Ok(WitnessOutcome::Impossible {
            reason: format!("{target} is not in the grid-image group"),
        });
    }
    let w_derived = spec.w_group().derived_subgroup();
    if !w_derived.contains(target) {
        return Ok(WitnessOutcome::Impossible {
            reason: format!("{target} is outside the derived subgroup of W"),
        });
    }

    let target_profile = StepProfile::constant(spec.q(), spec.basis(), target.clone());
    let identity_profile = StepProfile::constant(spec.q(), spec.basis(), Perm::identity(spec.q() as usize));
    if target_profile == identity_profile {
        return Ok(WitnessOutcome::Found(Witness {
            word: GroupWord::identity(spec),
            blocks: Vec::new(),
            length: 0,
        }));
    }

    let blocks = witness_blocks(spec, probes)?;
    if blocks.is_empty() {
        return Ok(WitnessOutcome::Unresolved { states_explored: 1 });
    }

    // BFS over profiles; parent links reconstruct the block sequence.
    struct Node {
        profile: StepProfile,
        parent: usize,
        block: usize,
        depth: usize,
    }
    let mut nodes = vec![Node {
        profile: identity_profile.clone(),
        parent: usize::MAX,
        block: usize::MAX,
        depth: 0,
    }];
    let mut seen: HashMap<StepProfile, ()> = HashMap::new();
    seen.insert(identity_profile, ());
    let mut queue: VecDeque<usize> = VecDeque::new();
    queue.push_back(0);

    while let Some(index) = queue.pop_front() {
        if nodes[index].depth == budget {
            continue;
        }
        for (b, block) in blocks.iter().enumerate() {
            let next = nodes[index].profile.compose(&block.profile);
            if seen.contains_key(&next) {
                continue;
            }
            let hit = next == target_profile;
            seen.insert(next.clone(), ());
            nodes.push(Node {
                profile: next,
                parent: index,
                block: b,
                depth: nodes[index].depth + 1,
            });
            let new_index = nodes.len() - 1;
            if hit {
                // Unwind the block chain (stored innermost-last).
                let mut chain = Vec::new();
                let mut at = new_index;
                while at != 0 {
                    chain.push(nodes[at].block);
                    at = nodes[at].parent;
                }
                chain.reverse();
                let mut word = GroupWord::identity(spec);
                let mut labels = Vec::new();
                for &b in &chain {
                    word = word.compose(&blocks[b].word);
                    labels.push(blocks[b].label.clone());
                }
                let expected = IntervalExchange::from_permutation(spec.basis(), target);
                if *word.realized() != expected {
                    return Err(IetError::MorphismCrossCheck(format!(
                        "witness word for {target} does not realize its grid exchange"
                    )));
                }
                return Ok(WitnessOutcome::Found(Witness {
                    word,
                    blocks: labels,
                    length: chain.len(),
                }));
            }
            queue.push_back(new_index);
        }
    }

    Ok(WitnessOutcome::Unresolved {
        states_explored: nodes.len(),
    })
}

struct SearchBlock {
    word: GroupWord,
    profile: StepProfile,
    label: String,
}

/// The commutator generators available to the search, deduplicated by
/// profile; inverses included so the words range over the full subgroup the
/// blocks generate.
fn witness_blocks(spec: &Arc<HaqSpec>, probes: &[CircleValue]) -> Result<Vec<SearchBlock>> {
    // Grid generators and their inverses, deduplicated as permutations.
    let mut torsion_parts: Vec<(GroupWord, String)> = Vec::new();
    let mut seen_perms: Vec<Perm> = Vec::new();
    for i in 0..spec.m() {
        let gen = GroupWord::generator(spec, i)?;
        for (word, suffix) in [(gen.clone(), ""), (gen.inverse(), "⁻¹")] {
            let perm = word.profile()?.values()[0].clone();
            if perm.is_identity() || seen_perms.contains(&perm) {
                continue;
            }
            seen_perms.push(perm);
            torsion_parts.push((word, format!("E{}{}", spec.qgens()[i], suffix)));
        }
    }

    let mut blocks: Vec<SearchBlock> = Vec::new();
    let push = |word: GroupWord, label: String, blocks: &mut Vec<SearchBlock>| -> Result<()> {
        let profile = word.profile()?;
        if profile.is_identity() {
            return Ok(());
        }
        if blocks.iter().all(|b| b.profile != profile) {
            blocks.push(SearchBlock { word, profile, label });
        }
        Ok(())
    };

    for (pi, a) in probes.iter().enumerate() {
        let rot = GroupWord::rotation(spec, a);
        for (t, t_label) in &torsion_parts {
            let block = GroupWord::commutator(&rot, t);
            let label = format!("[R(a{pi}), {t_label}]");
            push(block.clone(), label.clone(), &mut blocks)?;
            push(block.inverse(), format!("{label}⁻¹"), &mut blocks)?;
        }
    }
    for (t1, l1) in &torsion_parts {
        for (t2, l2) in &torsion_parts {
            let block = GroupWord::commutator(t1, t2);
            push(block, format!("[{l1}, {l2}]"), &mut blocks)?;
        }
    }
    Ok(blocks)
}

// ======================================================================
// Lamplighter faithfulness
// ======================================================================

/// Checks that the listed torsion maps have pairwise disjoint breakpoint
/// classes mod 1/q and that their product's breakpoint classes are exactly
/// the disjoint union — the certificate that the product is nontrivial and
/// the factors are independent.
pub fn breakpoint_union_certificate(
    parts: &[IntervalExchange],
    product: &IntervalExchange,
    q: u32,
) -> bool {
    let mut union = PointSet::new();
    let mut total = 0usize;
    for part in parts {
        let classes = classes_mod_q(&part.breakpoints_circle(), q);
        total += classes.len();
        union.extend(classes);
    }
    // Pairwise disjoint iff no points collapsed in the union.
    if union.len() != total {
        return false;
    }
    union == classes_mod_q(&product.breakpoints_circle(), q)
}

/// Samples random reduced products of distinct rotation conjugates
/// `R_c E_t^e R_{−c}` and certifies each is nontrivial via breakpoint-class
/// disjointness. Requires the kernel image V to be abelian (the lamplighter
/// regime); a trivial grid group passes vacuously.
pub fn faithful_lamplighter_check(spec: &Arc<HaqSpec>, samples: usize, seed: u64) -> Result<bool> {
    let nontrivial: Vec<usize> = (0..spec.m())
        .filter(|&i| !spec.qgens()[i].is_identity())
        .collect();
    if nontrivial.is_empty() {
        return Ok(true);
    }
    if !spec.v_group().is_abelian() {
        return Err(IetError::Precondition(
            "lamplighter faithfulness applies only when V is abelian".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let multipliers: Vec<i64> = (1..=24).collect();
    for _ in 0..samples {
        let count = rng.random_range(1..=3usize);
        let chosen: Vec<i64> = multipliers
            .choose_multiple(&mut rng, count)
            .copied()
            .collect();
        let mut parts = Vec::new();
        let mut product = GroupWord::identity(spec);
        for m in chosen {
            let i = *nontrivial.choose(&mut rng).expect("nonempty");
            let order = spec.qgens()[i].order();
            let exponent = if order <= 2 {
                1
            } else {
                rng.random_range(1..order) as i64
            };
            let amount = spec.alpha(0).mul_int(m);
            let conj = GroupWord::rotation(spec, &amount)
                .compose(&GroupWord::generator(spec, i)?.pow(exponent))
                .compose(&GroupWord::rotation(spec, &amount.neg()));
            parts.push(conj.realized().clone());
            product = product.compose(&conj);
        }
        if product.realized().is_identity() {
            return Ok(false);
        }
        if !breakpoint_union_certificate(&parts, product.realized(), spec.q()) {
            return Ok(false);
        }
    }
    Ok(true)
}

// ======================================================================
// Tests
// ======================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(q: u32, gens: &[&str], s: usize) -> Arc<HaqSpec> {
        let basis = IrrationalBasis::sqrt_primes(s).unwrap();
        let qgens = gens
            .iter()
            .map(|g| Perm::parse_cycles(g, q as usize).unwrap())
            .collect();
        HaqSpec::new(q, qgens, basis).unwrap()
    }

    fn sigma_pow_conj(spec: &HaqSpec, tau: &Perm, p: i64) -> Perm {
        tau.conjugate_by(&Perm::sigma_cycle(spec.q() as usize).pow(p))
    }

    #[test]
    fn ell_is_a_morphism_on_examples() {
        let s = spec(4, &["(1,3)"], 2);
        let r1 = GroupWord::rotation_gen(&s, 0);
        let r2 = GroupWord::rotation_gen(&s, 1);
        let e = GroupWord::generator(&s, 0).unwrap();

        assert_eq!(r1.ell().unwrap(), s.alpha(0));
        assert!(e.ell().unwrap().is_zero());
        assert!(e.is_torsion().unwrap());
        assert!(!r1.is_torsion().unwrap());
        assert_eq!(
            r1.compose(&r2).ell().unwrap(),
            s.alpha(0).add(&s.alpha(1))
        );
        assert!(GroupWord::commutator(&r1, &e).is_torsion().unwrap());
        assert_eq!(r1.rotation_coefficients(), vec![1, 0]);
        assert_eq!(
            r1.compose(&r1).compose(&r2).inverse().rotation_coefficients(),
            vec![-2, -1]
        );
    }

    #[test]
    fn decompose_splits_off_the_rotation() {
        let s = spec(4, &["(1,3)"], 1);
        let r = GroupWord::rotation_gen(&s, 0);
        let e = GroupWord::generator(&s, 0).unwrap();

        let d = r.decompose().unwrap();
        assert!(d.p.realized().is_identity());
        assert_eq!(d.rotation, s.alpha(0));

        let d = e.decompose().unwrap();
        assert_eq!(d.p.realized(), e.realized());
        assert!(d.rotation.is_zero());

        // f = R_{α₁}·E: P_f = R_{α₁} E R_{−α₁}, and both P·R and R·Q rebuild f.
        let f = r.compose(&e);
        let d = f.decompose().unwrap();
        let conj = r.compose(&e).compose(&r.inverse());
        assert_eq!(d.p.realized(), conj.realized());
        assert!(d.p.is_torsion().unwrap());
        assert!(d.q.is_torsion().unwrap());
        let rot = GroupWord::rotation(&s, &d.rotation);
        assert_eq!(d.p.compose(&rot).realized(), f.realized());
        assert_eq!(rot.compose(&d.q).realized(), f.realized());
    }

    #[test]
    fn rotation_conjugate_profiles_split_at_the_reduced_point() {
        // R_γ E_τ R_{−γ} has the two-piece profile with σ-conjugated values
        // σ^{j₀+1} τ σ^{−(j₀+1)} on [0, γ̃) and σ^{j₀} τ σ^{−j₀} on [γ̃, 1/q),
        // where γ = j₀/q + γ̃.
        let s = spec(4, &["(1,3)"], 1);
        let gamma = s.alpha(0); // ≈ 0.4142: j₀ = 1, γ̃ = α₁ − 1/4
        let (j0, tilde) = gamma.decompose_mod(4).unwrap();
        assert_eq!(j0, 1);

        let tau = &s.qgens()[0];
        let conj = GroupWord::rotation(&s, &gamma)
            .compose(&GroupWord::generator(&s, 0).unwrap())
            .compose(&GroupWord::rotation(&s, &gamma.neg()));
        let profile = conj.profile().unwrap();
        assert_eq!(profile.num_pieces(), 2);
        assert_eq!(profile.cuts()[1], tilde);
        assert_eq!(*profile.value_at(&CircleValue::zero(s.basis())), sigma_pow_conj(&s, tau, 2));
        assert_eq!(*profile.value_at(&tilde), sigma_pow_conj(&s, tau, 1));

        // Commutator variant: values [σ^{j₀+1}, τ] then [σ^{j₀}, τ].
        let sigma = Perm::sigma_cycle(4);
        let com = GroupWord::commutator(&GroupWord::rotation(&s, &gamma), &GroupWord::generator(&s, 0).unwrap());
        let profile = com.profile().unwrap();
        assert_eq!(profile.num_pieces(), 2);
        assert_eq!(*profile.value_at(&CircleValue::zero(s.basis())), Perm::commutator(&sigma.pow(2), tau));
        assert_eq!(*profile.value_at(&tilde), Perm::commutator(&sigma, tau));
    }

    #[test]
    fn profiles_of_grid_exchanges_are_constant() {
        let s = spec(4, &["(1,3)", "(1,2)(3,4)"], 1);
        for i in 0..2 {
            let e = GroupWord::generator(&s, i).unwrap();
            let p = e.profile().unwrap();
            assert_eq!(p.num_pieces(), 1);
            assert_eq!(p.values()[0], s.qgens()[i]);
            // Any probe point gives the same answer.
            let x = CircleValue::rational(s.basis(), 1, 17);
            assert_eq!(e.local_perm(&x).unwrap(), s.qgens()[i]);
        }
        let id = GroupWord::identity(&s);
        assert!(id.profile().unwrap().is_identity());
        assert_eq!(id.torsion_order().unwrap(), 1);
    }

    #[test]
    fn profile_reconstruction_and_orders() {
        let s = spec(4, &["(1,3)"], 1);
        let e = GroupWord::generator(&s, 0).unwrap();
        assert_eq!(e.torsion_order().unwrap(), 2);

        // [R_{α₁}, E_{(1,2)}] has profile values (1,2)(3,4) and (1,3,2):
        // order lcm(2,3) = 6, matching plain iterated composition.
        let s2 = spec(4, &["(1,2)"], 1);
        let com = GroupWord::commutator(
            &GroupWord::rotation_gen(&s2, 0),
            &GroupWord::generator(&s2, 0).unwrap(),
        );
        let profile = com.profile().unwrap();
        let values: Vec<String> = profile.values().iter().map(|p| p.to_string()).collect();
        assert_eq!(values, vec!["(1,2)(3,4)", "(1,3,2)"]);
        assert_eq!(com.torsion_order().unwrap(), 6);
        assert_eq!(com.realized().order(10).unwrap(), 6);
        assert_eq!(profile.to_iet(s2.basis()), *com.realized());

        // Non-kernel elements are rejected.
        let r = GroupWord::rotation_gen(&s2, 0);
        assert!(matches!(r.profile(), Err(IetError::Precondition(_))));
        assert!(matches!(r.local_perm(&CircleValue::zero(s2.basis())), Err(IetError::Precondition(_))));
        // Torsion outside the 1/q grid is not a kernel element for this q.
        let third_turn = IntervalExchange::rotation(&CircleValue::rational(s2.basis(), 1, 3));
        assert!(matches!(
            local_perm(&third_turn, 4, &CircleValue::zero(s2.basis())),
            Err(IetError::NotKernelElement { .. })
        ));
    }

    #[test]
    fn omega_images_match_the_conjugate_groups() {
        let s = spec(4, &["(1,3)"], 1);
        let v = omega_image_kernel(&s);
        assert_eq!(v.order_u64(), Some(4));
        assert!(v.is_abelian());
        assert!(v.contains(&Perm::parse_cycles("(2,4)", 4).unwrap()));

        let trivial = spec(4, &[], 1);
        assert!(omega_image_kernel(&trivial).is_trivial());
        assert!(omega_image_commutator(&trivial, 10_000).unwrap().is_trivial());

        let s3 = spec(3, &["(1,3)"], 1);
        let w0 = omega_image_commutator(&s3, 10_000).unwrap();
        assert_eq!(w0.order_u64(), Some(3)); // the 3-cycles
        assert!(w0.contains(&Perm::parse_cycles("(1,2,3)", 3).unwrap()));
    }

    #[test]
    fn probe_windows_land_in_their_residue_intervals() {
        let basis = IrrationalBasis::sqrt_primes(1).unwrap();
        let multipliers: Vec<u64> = (0..4)
            .map(|j| probe_for_residue(&basis, 4, j).unwrap().0)
            .collect();
        assert_eq!(multipliers, vec![17, 8, 4, 12]);
        for (j, probe) in default_probes(&spec(4, &["(1,3)"], 1)).unwrap().iter().enumerate() {
            let (j0, _) = probe.decompose_mod(4).unwrap();
            assert_eq!(j0 as usize, j);
        }

        let basis3 = IrrationalBasis::from_radicands(vec![3]).unwrap();
        let m3: Vec<u64> = (0..4)
            .map(|j| probe_for_residue(&basis3, 4, j).unwrap().0)
            .collect();
        assert_eq!(m3, vec![11, 10, 5, 15]);
    }

    #[test]
    fn witness_search_finds_the_three_block_word() {
        // Grid 4 with τ₁ = (1,2), τ₂ = (3,4): the double transposition
        // (1,2)(3,4) is realized by [R_a, E_{τ₂}]·[R_a, E_{τ₁}]² for a probe
        // a in the second grid interval.
        let s = spec(4, &["(1,2)", "(3,4)"], 1);
        let target = Perm::parse_cycles("(1,2)(3,4)", 4).unwrap();
        let probes = default_probes(&s).unwrap();
        match witness_search(&s, &target, 3, &probes).unwrap() {
            WitnessOutcome::Found(w) => {
                assert_eq!(w.length, 3);
                assert_eq!(
                    *w.word.realized(),
                    IntervalExchange::from_permutation(s.basis(), &target)
                );
                // The realized witness is constant τ₀ across the fiber.
                let profile = w.word.profile().unwrap();
                assert_eq!(profile.num_pieces(), 1);
                assert_eq!(profile.values()[0], target);
            }
            other => panic!("expected a witness, got {other:?}"),
        }

        // Identity target: the empty word.
        match witness_search(&s, &Perm::identity(4), 3, &probes).unwrap() {
            WitnessOutcome::Found(w) => assert_eq!(w.length, 0),
            other => panic!("expected the empty witness, got {other:?}"),
        }

        // A transposition is odd: outside [W,W] = A₄, hence impossible.
        let odd = Perm::parse_cycles("(1,2)", 4).unwrap();
        assert!(matches!(
            witness_search(&s, &odd, 3, &probes).unwrap(),
            WitnessOutcome::Impossible { .. }
        ));

        // Budget 1 cannot produce a constant nontrivial profile here.
        assert!(matches!(
            witness_search(&s, &target, 1, &probes).unwrap(),
            WitnessOutcome::Unresolved { .. }
        ));
    }

    #[test]
    fn lamplighter_breakpoint_certificates() {
        let s = spec(4, &["(1,3)"], 1);
        assert!(faithful_lamplighter_check(&s, 12, 7).unwrap());
        assert!(faithful_lamplighter_check(&spec(4, &[], 1), 4, 0).unwrap());

        // Non-abelian V is out of scope for the check.
        let bad = spec(4, &["(1,2)"], 1);
        assert!(matches!(
            faithful_lamplighter_check(&bad, 2, 0),
            Err(IetError::Precondition(_))
        ));

        // Rational conjugators collapse breakpoint classes: the certificate
        // must fail rather than pass silently.
        let e = GroupWord::generator(&s, 0).unwrap();
        let quarter = CircleValue::rational(s.basis(), 1, 4);
        let shifted = GroupWord::rotation(&s, &quarter)
            .compose(&e)
            .compose(&GroupWord::rotation(&s, &quarter.neg()));
        let parts = vec![e.realized().clone(), shifted.realized().clone()];
        let product = e.compose(&shifted);
        assert!(!breakpoint_union_certificate(&parts, product.realized(), 4));

        // Genuinely independent conjugates certify fine.
        let a = s.alpha(0);
        let c1 = GroupWord::rotation(&s, &a).compose(&e).compose(&GroupWord::rotation(&s, &a.neg()));
        let two_a = a.mul_int(2);
        let c2 = GroupWord::rotation(&s, &two_a).compose(&e).compose(&GroupWord::rotation(&s, &two_a.neg()));
        let parts = vec![c1.realized().clone(), c2.realized().clone()];
        let product = c1.compose(&c2);
        assert!(breakpoint_union_certificate(&parts, product.realized(), 4));
    }

    #[test]
    fn word_json_binding() {
        let s = spec(4, &["(1,3)"], 1);
        let letters: Vec<LetterRepr> =
            serde_json::from_str(r#"[{"rot":"a1"},{"gen":0},{"inv":{"gen":0}}]"#).unwrap();
        let word = bind_word(&letters, &s).unwrap();
        assert_eq!(
            *word.realized(),
            IntervalExchange::rotation(&s.alpha(0))
        );
        assert_eq!(word.len(), 3);

        // Round trip through the wire form preserves the realization.
        let json = serde_json::to_string(&word_repr(&word)).unwrap();
        let reparsed: Vec<LetterRepr> = serde_json::from_str(&json).unwrap();
        assert_eq!(bind_word(&reparsed, &s).unwrap().realized(), word.realized());

        // Explicit circle values and errors.
        let letters: Vec<LetterRepr> =
            serde_json::from_str(r#"[{"rot":{"rat":"1/4","irr":[0]}}]"#).unwrap();
        let word = bind_word(&letters, &s).unwrap();
        assert_eq!(
            *word.realized(),
            IntervalExchange::rotation(&CircleValue::rational(s.basis(), 1, 4))
        );
        let bad: Vec<LetterRepr> = serde_json::from_str(r#"[{"rot":"a9"}]"#).unwrap();
        assert!(bind_word(&bad, &s).is_err());
        let bad: Vec<LetterRepr> = serde_json::from_str(r#"[{"gen":5}]"#).unwrap();
        assert!(bind_word(&bad, &s).is_err());
    }

    #[test]
    fn spec_json_binding() {
        let json = r#"{"q":4,"Qgens":["(1,3)"],"s":1,"alphas":"sqrt-primes"}"#;
        let repr: HaqSpecRepr = serde_json::from_str(json).unwrap();
        let s = repr.bind().unwrap();
        assert_eq!(s.q(), 4);
        assert_eq!(s.m(), 1);
        assert_eq!(s.s(), 1);
        assert!(s.basis().is_sqrt_primes());

        let alt = r#"{"q":4,"Qgens":[[3,2,1,4]],"s":2,"alphas":{"sqrt":[3,7]}}"#;
        let s2: Arc<HaqSpec> = serde_json::from_str::<HaqSpecRepr>(alt).unwrap().bind().unwrap();
        assert_eq!(s2.qgens()[0].to_string(), "(1,3)");
        assert_eq!(s2.basis().radicands(), &[3, 7]);

        // Round trip.
        let again = HaqSpecRepr::of(&s).bind().unwrap();
        assert_eq!(*again, *s);

        // Degree mismatch is rejected.
        let bad = r#"{"q":4,"Qgens":["(1,5)"],"s":1,"alphas":"sqrt-primes"}"#;
        assert!(serde_json::from_str::<HaqSpecRepr>(bad).unwrap().bind().is_err());
    }

    fn arb_kernel_word(s: Arc<HaqSpec>) -> impl Strategy<Value = GroupWord> {
        // Conjugates R_{kα} E^{±1} R_{−kα} and grid letters: all torsion.
        let m = s.m();
        proptest::collection::vec((0..m, -3i64..4, prop::bool::ANY), 0..4).prop_map(
            move |letters| {
                let mut word = GroupWord::identity(&s);
                for (i, k, invert) in letters {
                    let amount = s.alpha(0).mul_int(k);
                    let mut e = GroupWord::generator(&s, i).unwrap();
                    if invert {
                        e = e.inverse();
                    }
                    let conj = GroupWord::rotation(&s, &amount)
                        .compose(&e)
                        .compose(&GroupWord::rotation(&s, &amount.neg()));
                    word = word.compose(&conj);
                }
                word
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn ell_additive_and_decomposition_laws(
            ks in proptest::collection::vec(-4i64..5, 0..4),
            js in proptest::collection::vec(0usize..2, 0..3),
        ) {
            let s = spec(4, &["(1,2)", "(1,3)"], 2);
            let mut f = GroupWord::identity(&s);
            for (n, &k) in ks.iter().enumerate() {
                f = f.compose(&GroupWord::rotation(&s, &s.alpha(n % 2).mul_int(k)));
            }
            for &j in &js {
                f = f.compose(&GroupWord::generator(&s, j).unwrap());
            }
            let g = f.inverse().compose(&GroupWord::rotation_gen(&s, 0));

            // ℓ(fg) = ℓ(f) + ℓ(g)
            prop_assert_eq!(
                f.compose(&g).ell().unwrap(),
                f.ell().unwrap().add(&g.ell().unwrap())
            );

            // P_{h₁h₂} = P_{h₁} P_{h₂} [P_{h₂}⁻¹, R_{ℓ(h₁)}]
            let (d1, d2, d12) = (f.decompose().unwrap(), g.decompose().unwrap(), f.compose(&g).decompose().unwrap());
            let r1 = GroupWord::rotation(&s, &d1.rotation);
            let correction = GroupWord::commutator(&d2.p.inverse(), &r1);
            let product_law = d1.p.compose(&d2.p).compose(&correction);
            prop_assert_eq!(d12.p.realized(), product_law.realized());

            // P_{h⁻¹} = P_h⁻¹ [P_h, R_{−ℓ(h)}]
            let dinv = f.inverse().decompose().unwrap();
            let rneg = GroupWord::rotation(&s, &d1.rotation.neg());
            let correction = GroupWord::commutator(&d1.p, &rneg);
            let inverse_law = d1.p.inverse().compose(&correction);
            prop_assert_eq!(dinv.p.realized(), inverse_law.realized());
        }

        #[test]
        fn profiles_multiply_pointwise(
            fg in (arb_kernel_word(spec(4, &["(1,3)", "(1,2)(3,4)"], 1)),
                   arb_kernel_word(spec(4, &["(1,3)", "(1,2)(3,4)"], 1))),
        ) {
            let (f, g) = fg;
            let composed = f.compose(&g);
            let pointwise = f.profile().unwrap().compose(&g.profile().unwrap());
            prop_assert_eq!(composed.profile().unwrap(), pointwise.clone());
            // Reconstruction ties profiles back to exact maps.
            prop_assert_eq!(pointwise.to_iet(f.spec().basis()), composed.realized().clone());
            // Identity criterion.
            prop_assert_eq!(composed.realized().is_identity(), composed.profile().unwrap().is_identity());
            // Torsion order agrees with iterated composition.
            let order = composed.torsion_order().unwrap();
            prop_assert_eq!(order, composed.realized().order(1000).unwrap());
            // Inverse profile.
            prop_assert_eq!(f.inverse().profile().unwrap(), f.profile().unwrap().inverse());
        }

        #[test]
        fn local_perms_stay_in_the_kernel_image(
            f in arb_kernel_word(spec(4, &["(1,3)", "(1,2)(3,4)"], 1)),
        ) {
            let v = omega_image_kernel(f.spec());
            for value in f.profile().unwrap().values() {
                prop_assert!(v.contains(value));
            }
        }
    }
}
