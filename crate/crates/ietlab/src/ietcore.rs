//! Exact interval exchange transformations, stored as circle maps.
//!
//! An `IntervalExchange` is a bijection of R/Z that is a translation on each
//! of finitely many arcs. The canonical form cuts the circle at 0 and lists
//! the pieces `[cutᵢ, cutᵢ₊₁)` with their translations `deltaᵢ`; adjacent
//! pieces with equal translations are merged, so every interior cut is a
//! genuine discontinuity of the circle map and equality of maps is structural
//! equality of the representation. The view as a map of `[0,1)` (whose
//! discontinuity set also picks up the preimage of 0 and, by convention, the
//! point 0 itself) is derived, not stored.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{IetError, Result};
use crate::exactnum::{CircleValue, CircleValueRepr, IrrationalBasis};
use crate::permgrp::Perm;

/// A sorted, duplicate-free set of circle points.
pub type PointSet = BTreeSet<CircleValue>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntervalExchange {
    /// Strictly increasing, starting with 0; piece i is `[cuts[i], cuts[i+1])`
    /// (the last piece wraps to 1).
    cuts: Vec<CircleValue>,
    /// Translation applied on piece i, mod 1.
    deltas: Vec<CircleValue>,
}

impl IntervalExchange {
    // ------------------------------------------------------------------
    // Constructors
    // ------------------------------------------------------------------

    pub fn identity(basis: &Arc<IrrationalBasis>) -> Self {
        IntervalExchange {
            cuts: vec![CircleValue::zero(basis)],
            deltas: vec![CircleValue::zero(basis)],
        }
    }

    /// The rotation `x ↦ x + a`.
    pub fn rotation(a: &CircleValue) -> Self {
        IntervalExchange {
            cuts: vec![CircleValue::zero(a.basis())],
            deltas: vec![a.clone()],
        }
    }

    /// The exchange of the q equal intervals `Iᵢ = [(i−1)/q, i/q)` sending
    /// `Iᵢ` onto `I_{τ(i)}` by translation. The full cycle gives the rotation
    /// by 1/q.
    pub fn from_permutation(basis: &Arc<IrrationalBasis>, tau: &Perm) -> Self {
        let q = tau.degree() as i64;
        let mut cuts = Vec::new();
        let mut deltas = Vec::new();
        for i in 0..q {
            cuts.push(CircleValue::rational(basis, i, q));
            deltas.push(CircleValue::rational(basis, tau.apply(i as usize) as i64 - i, q));
        }
        Self::canonicalized(cuts, deltas)
    }

    /// Builds the exchange with the given piece lengths, the image intervals
    /// ordered by `pi` (1-based positions): cut i is the i-th partial sum of
    /// lengths, and the translation of piece i is the total length of the
    /// pieces whose images precede it minus the total length of the pieces
    /// preceding it in the domain.
    pub fn from_lengths(lengths: &[CircleValue], pi: &Perm) -> Result<Self> {
        if lengths.is_empty() {
            return Err(IetError::LengthCountMismatch(0, pi.degree()));
        }
        if lengths.len() != pi.degree() {
            return Err(IetError::LengthCountMismatch(lengths.len(), pi.degree()));
        }
        let basis = lengths[0].basis();
        // The lengths are canonical representatives in [0,1); their real sum
        // must be exactly 1, i.e. rational parts summing to 1 and irrational
        // coefficients cancelling (by independence there is no other way).
        let mut rat_sum = BigRational::zero();
        let mut irr_sum = vec![0i64; basis.s()];
        for l in lengths {
            if l.is_zero() {
                return Err(IetError::ZeroLength);
            }
            rat_sum += l.rational_part();
            for (acc, c) in irr_sum.iter_mut().zip(l.coefficients()) {
                *acc += c;
            }
        }
        if rat_sum != BigRational::one() || irr_sum.iter().any(|&c| c != 0) {
            return Err(IetError::LengthsSumNotOne);
        }

        let m = lengths.len();
        let mut cuts = vec![CircleValue::zero(basis)];
        for l in &lengths[..m - 1] {
            let prev = cuts.last().unwrap().clone();
            cuts.push(prev.add(l));
        }
        let mut deltas = Vec::with_capacity(m);
        for i in 0..m {
            let mut delta = CircleValue::zero(basis);
            for j in 0..m {
                if pi.apply(j) < pi.apply(i) {
                    delta = delta.add(&lengths[j]);
                }
            }
            for l in &lengths[..i] {
                delta = delta.sub(l);
            }
            deltas.push(delta);
        }
        Ok(Self::canonicalized(cuts, deltas))
    }

    /// Builds directly from cut points and translations, validating that the
    /// data really defines a bijection of the circle.
    pub fn from_pieces(cuts: Vec<CircleValue>, deltas: Vec<CircleValue>) -> Result<Self> {
        if cuts.is_empty() || cuts.len() != deltas.len() {
            return Err(IetError::LengthCountMismatch(cuts.len(), deltas.len()));
        }
        if !cuts[0].is_zero() {
            return Err(IetError::Schema("first breakpoint must be 0".into()));
        }
        if cuts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(IetError::Schema(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        let candidate = Self::canonicalized(cuts, deltas);
        if !candidate.is_bijective() {
            return Err(IetError::Schema(
                "pieces do not map onto a partition of the circle".into(),
            ));
        }
        Ok(candidate)
    }

    /// Canonicalization: merge adjacent pieces (within the cut at 0) whose
    /// translations agree.
    pub(crate) fn canonicalized(cuts: Vec<CircleValue>, deltas: Vec<CircleValue>) -> Self {
        debug_assert_eq!(cuts.len(), deltas.len());
        debug_assert!(cuts[0].is_zero());
        let mut merged_cuts = Vec::with_capacity(cuts.len());
        let mut merged_deltas: Vec<CircleValue> = Vec::with_capacity(deltas.len());
        for (cut, delta) in cuts.into_iter().zip(deltas) {
            if merged_deltas.last() == Some(&delta) {
                continue;
            }
            merged_cuts.push(cut);
            merged_deltas.push(delta);
        }
        IntervalExchange {
            cuts: merged_cuts,
            deltas: merged_deltas,
        }
    }

    fn is_bijective(&self) -> bool {
        let m = self.cuts.len();
        if m == 1 {
            return true; // a single translated arc is a rotation
        }
        // Image arcs (start, length); they must chain head-to-tail in sorted
        // order and close up around the circle.
        let mut arcs: Vec<(CircleValue, CircleValue)> = (0..m)
            .map(|i| {
                let start = self.cuts[i].add(&self.deltas[i]);
                let end = if i + 1 < m {
                    self.cuts[i + 1].clone()
                } else {
                    CircleValue::zero(self.basis())
                };
                (start, end.sub(&self.cuts[i]))
            })
            .collect();
        arcs.sort_by(|a, b| a.0.cmp(&b.0));
        (0..m).all(|k| {
            let expected_next = arcs[k].0.add(&arcs[k].1);
            expected_next == arcs[(k + 1) % m].0
        })
    }

    // ------------------------------------------------------------------
    // Accessors
    // ------------------------------------------------------------------

    pub fn basis(&self) -> &Arc<IrrationalBasis> {
        self.cuts[0].basis()
    }

    pub fn num_pieces(&self) -> usize {
        self.cuts.len()
    }

    pub fn cuts(&self) -> &[CircleValue] {
        &self.cuts
    }

    pub fn deltas(&self) -> &[CircleValue] {
        &self.deltas
    }

    pub fn is_identity(&self) -> bool {
        self.cuts.len() == 1 && self.deltas[0].is_zero()
    }

    /// The rotation amount if this map is a rotation.
    pub fn as_rotation(&self) -> Option<&CircleValue> {
        if self.cuts.len() == 1 {
            Some(&self.deltas[0])
        } else {
            None
        }
    }

    fn piece_index(&self, x: &CircleValue) -> usize {
        // Last cut ≤ x; cuts[0] = 0 ≤ x always.
        let mut index = 0;
        for (i, cut) in self.cuts.iter().enumerate().skip(1) {
            if cut <= x {
                index = i;
            } else {
                break;
            }
        }
        index
    }

    pub fn evaluate(&self, x: &CircleValue) -> CircleValue {
        x.add(&self.deltas[self.piece_index(x)])
    }

    /// The 1-based positions of the image intervals: piece i is sent to the
    /// `perm(i)`-th interval of the codomain, reading images left to right.
    pub fn interval_permutation(&self) -> Perm {
        let m = self.cuts.len();
        let mut order: Vec<usize> = (0..m).collect();
        let starts: Vec<CircleValue> = (0..m).map(|i| self.evaluate(&self.cuts[i])).collect();
        order.sort_by(|&a, &b| starts[a].cmp(&starts[b]));
        let mut one_line = vec![0usize; m];
        for (rank, &piece) in order.iter().enumerate() {
            one_line[piece] = rank + 1;
        }
        Perm::from_one_line(&one_line).expect("ranking is a bijection")
    }

    // ------------------------------------------------------------------
    // Group operations
    // ------------------------------------------------------------------

    /// `self ∘ other`: applies `other` first. Candidate cuts are the cuts of
    /// `other` together with the pullbacks of the cuts of `self`; on each
    /// resulting piece both maps are translations, so the composite
    /// translation is read off at the left endpoint and equal neighbours are
    /// merged away.
    pub fn compose(&self, other: &IntervalExchange) -> IntervalExchange {
        let other_inv = other.inverse();
        let mut candidates: BTreeSet<CircleValue> = other.cuts.iter().cloned().collect();
        for c in &self.cuts {
            candidates.insert(other_inv.evaluate(c));
        }
        candidates.insert(CircleValue::zero(self.basis()));
        let cuts: Vec<CircleValue> = candidates.into_iter().collect();
        let deltas: Vec<CircleValue> = cuts
            .iter()
            .map(|c| self.evaluate(&other.evaluate(c)).sub(c))
            .collect();
        Self::canonicalized(cuts, deltas)
    }

    pub fn inverse(&self) -> IntervalExchange {
        let m = self.cuts.len();
        let mut pieces: Vec<(CircleValue, CircleValue)> = (0..m)
            .map(|i| (self.evaluate(&self.cuts[i]), self.deltas[i].neg()))
            .collect();
        pieces.sort_by(|a, b| a.0.cmp(&b.0));
        if !pieces[0].0.is_zero() {
            // The image arc that straddles 0 provides the piece at 0.
            let wrap_delta = pieces[m - 1].1.clone();
            pieces.insert(0, (CircleValue::zero(self.basis()), wrap_delta));
        }
        let (cuts, deltas) = pieces.into_iter().unzip();
        Self::canonicalized(cuts, deltas)
    }

    pub fn pow(&self, exp: i64) -> IntervalExchange {
        let mut base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = IntervalExchange::identity(self.basis());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// `[f,g] = f g f⁻¹ g⁻¹`.
    pub fn commutator(f: &IntervalExchange, g: &IntervalExchange) -> IntervalExchange {
        f.compose(g).compose(&f.inverse()).compose(&g.inverse())
    }

    // ------------------------------------------------------------------
    // Breakpoints and rationality
    // ------------------------------------------------------------------

    /// Discontinuity points of the map of the circle. A rotation has none;
    /// the cut at 0 is reported only when the map genuinely jumps there.
    pub fn breakpoints_circle(&self) -> PointSet {
        let mut set = PointSet::new();
        if self.cuts.len() == 1 {
            return set;
        }
        for cut in &self.cuts[1..] {
            set.insert(cut.clone());
        }
        if self.deltas[0] != self.deltas[self.cuts.len() - 1] {
            set.insert(CircleValue::zero(self.basis()));
        }
        set
    }

    /// Breakpoints of the map viewed on `[0,1)`: the point 0 (by convention),
    /// the circle discontinuities, and the preimages of 0 (where an image arc
    /// crosses the wrap point).
    pub fn breakpoints_interval(&self) -> PointSet {
        let mut set = self.breakpoints_circle();
        set.insert(CircleValue::zero(self.basis()));
        for delta in &self.deltas {
            let wrap = delta.neg(); // the point mapping exactly onto 0
            if self.evaluate(&wrap).is_zero() {
                set.insert(wrap);
            }
        }
        set
    }

    /// Whether all translations are rational.
    pub fn is_delta_rational(&self) -> bool {
        self.deltas.iter().all(|d| d.as_rational().is_some())
    }

    /// Order of a finite-order element by iterated composition. Returns an
    /// error when `cap` iterations do not reach the identity (which cannot
    /// happen for maps with rational translations).
    pub fn order(&self, cap: u64) -> Result<u64> {
        if !self.is_delta_rational() {
            return Err(IetError::NotDeltaRational);
        }
        let mut power = self.clone();
        for n in 1..=cap {
            if power.is_identity() {
                return Ok(n);
            }
            power = power.compose(self);
        }
        Err(IetError::OrderCapExceeded(cap))
    }
}

impl fmt::Debug for IntervalExchange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IET{{")?;
        for i in 0..self.cuts.len() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[{}..)+{}", self.cuts[i], self.deltas[i])?;
        }
        write!(f, "}}")
    }
}

/// `[X]_q = ∪_p R_{p/q}(X)`: the union of the q rational translates.
pub fn classes_mod_q(points: &PointSet, q: u32) -> PointSet {
    let mut out = PointSet::new();
    if let Some(first) = points.iter().next() {
        let basis = first.basis().clone();
        for p in 0..q {
            let shift = CircleValue::rational(&basis, p as i64, q as i64);
            for x in points {
                out.insert(x.add(&shift));
            }
        }
    }
    out
}

// ======================================================================
// Serialization
// ======================================================================

/// Wire form: breakpoints, translations, and (redundantly, for readability)
/// the 1-based image-interval order; validated against the pieces on input.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IetRepr {
    pub breakpoints: Vec<CircleValueRepr>,
    pub deltas: Vec<CircleValueRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perm: Option<Vec<usize>>,
}

impl IetRepr {
    pub fn of(f: &IntervalExchange) -> Self {
        IetRepr {
            breakpoints: f.cuts.iter().map(CircleValueRepr::from).collect(),
            deltas: f.deltas.iter().map(CircleValueRepr::from).collect(),
            perm: Some(f.interval_permutation().one_line()),
        }
    }

    pub fn bind(&self, basis: &Arc<IrrationalBasis>) -> Result<IntervalExchange> {
        let cuts = self
            .breakpoints
            .iter()
            .map(|r| r.bind(basis))
            .collect::<Result<Vec<_>>>()?;
        let deltas = self
            .deltas
            .iter()
            .map(|r| r.bind(basis))
            .collect::<Result<Vec<_>>>()?;
        let iet = IntervalExchange::from_pieces(cuts, deltas)?;
        if let Some(perm) = &self.perm {
            let declared = Perm::from_one_line(perm)?;
            if declared != iet.interval_permutation() {
                return Err(IetError::Schema(
                    "declared interval permutation disagrees with the pieces".into(),
                ));
            }
        }
        Ok(iet)
    }
}

// ======================================================================
// Tests
// ======================================================================
