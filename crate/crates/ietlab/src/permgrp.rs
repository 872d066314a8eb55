//! Finite permutations and finitely generated permutation groups.
//!
//! Permutations act on `{0, …, degree−1}` internally; the user-facing
//! notation (one-line arrays, cycle strings) is 1-based. Composition is
//! function composition: `a.compose(&b)` applies `b` first, and the
//! commutator is `[a,b] = a b a⁻¹ b⁻¹`.
//!
//! Groups carry a deterministic stabilizer chain (base, strong generators,
//! per-level transversals), giving exact order and membership without
//! materializing elements. Full enumeration is available behind an explicit
//! cap, and everything downstream of generator order is canonical: orbits are
//! kept in sorted maps and frontier scans run in point order, so equal groups
//! presented differently still produce identical derived data.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{IetError, Result};

// ======================================================================
// Permutations
// ======================================================================

/// A permutation of `{0, …, degree−1}` in one-line form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    img: Vec<u8>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            img: (0..degree as u8).collect(),
        }
    }

    /// The full cycle `(1,2,…,q)`: residue `i` maps to `i+1 mod q`.
    pub fn sigma_cycle(degree: usize) -> Self {
        Perm {
            img: (0..degree).map(|i| ((i + 1) % degree) as u8).collect(),
        }
    }

    /// 1-based one-line notation `[π(1), …, π(q)]`.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        let degree = images.len();
        let mut img = vec![u8::MAX; degree];
        let mut seen = vec![false; degree];
        for (i, &v) in images.iter().enumerate() {
            if v < 1 || v > degree || seen[v - 1] {
                return Err(IetError::BadPermutation(
                    format!("{images:?}"),
                    "one-line array must be a bijection of 1..=degree".into(),
                ));
            }
            seen[v - 1] = true;
            img[i] = (v - 1) as u8;
        }
        Ok(Perm { img })
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.img.iter().map(|&v| v as usize + 1).collect()
    }

    /// Parses 1-based cycle notation such as `"(1,3)(2,4)"`. Cycles are
    /// composed right-to-left (function composition); `"()"` and `"id"`
    /// denote the identity. Spaces are ignored.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self> {
        let bad = |why: &str| IetError::BadPermutation(text.to_string(), why.to_string());
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "id" || compact == "()" {
            return Ok(Perm::identity(degree));
        }
        if !compact.starts_with('(') || !compact.ends_with(')') {
            return Err(bad("expected cycles like (1,3)(2,4), or id"));
        }
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        for chunk in compact[1..compact.len() - 1].split(")(") {
            let mut cycle = Vec::new();
            for part in chunk.split(',') {
                let v: usize = part
                    .parse()
                    .map_err(|_| bad("cycle entries must be positive integers"))?;
                if v < 1 || v > degree {
                    return Err(bad("cycle entry out of 1..=degree"));
                }
                if cycle.contains(&(v - 1)) {
                    return Err(bad("repeated point inside a cycle"));
                }
                cycle.push(v - 1);
            }
            cycles.push(cycle);
        }
        // Compose right-to-left so `(1,2)(1,3)` means apply (1,3) first.
        let mut result = Perm::identity(degree);
        for cycle in cycles.iter().rev() {
            let mut img: Vec<u8> = (0..degree as u8).collect();
            for w in cycle.windows(2) {
                img[w[0]] = w[1] as u8;
            }
            if cycle.len() > 1 {
                img[*cycle.last().unwrap()] = cycle[0] as u8;
            }
            result = Perm { img }.compose(&result);
        }
        Ok(result)
    }

    pub fn degree(&self) -> usize {
        self.img.len()
    }

    /// Image of a 0-based point.
    pub fn apply(&self, point: usize) -> usize {
        self.img[point] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Perm {
            img: other.img.iter().map(|&v| self.img[v as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut img = vec![0u8; self.img.len()];
        for (i, &v) in self.img.iter().enumerate() {
            img[v as usize] = i as u8;
        }
        Perm { img }
    }

    pub fn pow(&self, exp: i64) -> Perm {
        let mut base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Perm::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// `[a,b] = a b a⁻¹ b⁻¹`.
    pub fn commutator(a: &Perm, b: &Perm) -> Perm {
        a.compose(b).compose(&a.inverse()).compose(&b.inverse())
    }

    /// `h ∘ self ∘ h⁻¹`.
    pub fn conjugate_by(&self, h: &Perm) -> Perm {
        h.compose(self).compose(&h.inverse())
    }

    /// Nontrivial cycles (0-based), each starting at its smallest point,
    /// sorted by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.img.len()];
        let mut out = Vec::new();
        for start in 0..self.img.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.apply(start);
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.apply(p);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    fn smallest_moved(&self) -> Option<usize> {
        (0..self.img.len()).find(|&i| self.apply(i) != i)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            let text: Vec<String> = cycle.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", text.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Wire form of a permutation: cycle string or 1-based one-line array.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PermRepr {
    Cycles(String),
    OneLine(Vec<usize>),
}

impl PermRepr {
    pub fn bind(&self, degree: usize) -> Result<Perm> {
        match self {
            PermRepr::Cycles(text) => Perm::parse_cycles(text, degree),
            PermRepr::OneLine(images) => {
                if images.len() != degree {
                    return Err(IetError::DegreeMismatch(images.len(), degree));
                }
                Perm::from_one_line(images)
            }
        }
    }
}

impl From<&Perm> for PermRepr {
    fn from(p: &Perm) -> Self {
        PermRepr::Cycles(p.to_string())
    }
}

// ======================================================================
// Generated groups (stabilizer chain)
// ======================================================================

#[derive(Debug, Clone)]
struct Level {
    point: usize,
    /// Strong generators stabilizing all earlier base points.
    gens: Vec<Perm>,
    /// orbit point -> coset representative u with u(point) = orbit point.
    transversal: BTreeMap<usize, Perm>,
}

/// A finitely generated subgroup of S_degree with exact order and membership.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Perm>,
    base: Vec<usize>,
    strong: Vec<Perm>,
    levels: Vec<Level>,
}

fn orbit_with_transversal(point: usize, gens: &[Perm], degree: usize) -> BTreeMap<usize, Perm> {
    let mut transversal = BTreeMap::new();
    transversal.insert(point, Perm::identity(degree));
    let mut frontier = vec![point];
    while let Some(p) = frontier.pop() {
        let rep = transversal[&p].clone();
        for g in gens {
            let q = g.apply(p);
            if !transversal.contains_key(&q) {
                transversal.insert(q, g.compose(&rep));
                frontier.push(q);
            }
        }
    }
    transversal
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Self {
        let mut gens: Vec<Perm> = Vec::new();
        for g in generators {
            assert_eq!(g.degree(), degree, "generator degree mismatch");
            if !g.is_identity() && !gens.contains(&g) {
                gens.push(g);
            }
        }
        let mut group = PermGroup {
            degree,
            strong: gens.clone(),
            gens,
            base: Vec::new(),
            levels: Vec::new(),
        };
        group.rebuild();
        group
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup::new(degree, Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    /// Deterministic Schreier–Sims: recompute the chain from the current
    /// strong set, sift all Schreier generators, adopt the residues, and
    /// repeat until every residue sifts to the identity. At that fixpoint the
    /// chain is a verified base and strong generating set.
    fn rebuild(&mut self) {
        loop {
            // Every non-identity strong generator must move a base point.
            loop {
                let stuck = self
                    .strong
                    .iter()
                    .find(|g| self.base.iter().all(|&b| g.apply(b) == b));
                match stuck {
                    Some(g) => {
                        let moved = g.smallest_moved().expect("non-identity");
                        self.base.push(moved);
                    }
                    None => break,
                }
            }
            self.levels = (0..self.base.len())
                .map(|i| {
                    let gens: Vec<Perm> = self
                        .strong
                        .iter()
                        .filter(|g| self.base[..i].iter().all(|&b| g.apply(b) == b))
                        .cloned()
                        .collect();
                    let transversal = orbit_with_transversal(self.base[i], &gens, self.degree);
                    Level {
                        point: self.base[i],
                        gens,
                        transversal,
                    }
                })
                .collect();

            let mut residues: Vec<Perm> = Vec::new();
            'scan: for i in 0..self.levels.len() {
                for rep in self.levels[i].transversal.values() {
                    for g in &self.levels[i].gens {
                        let image = g.apply(rep.apply(self.levels[i].point));
                        let back = self.levels[i].transversal[&image].inverse();
                        let schreier = back.compose(&g.compose(rep));
                        let residue = self.sift_from(schreier, i + 1);
                        if !residue.is_identity() && !residues.contains(&residue) {
                            residues.push(residue);
                            if residues.len() >= 8 {
                                break 'scan;
                            }
                        }
                    }
                }
            }
            if residues.is_empty() {
                return;
            }
            for r in residues {
                if !self.strong.contains(&r) {
                    self.strong.push(r);
                }
            }
        }
    }

    fn sift_from(&self, mut g: Perm, start_level: usize) -> Perm {
        for level in &self.levels[start_level..] {
            let image = g.apply(level.point);
            match level.transversal.get(&image) {
                None => return g,
                Some(rep) => g = rep.inverse().compose(&g),
            }
        }
        g
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.sift_from(g.clone(), 0).is_identity()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.transversal.len()))
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.order().to_u64()
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.is_empty()
    }

    /// All elements, each produced exactly once as a transversal product, in
    /// a deterministic order. Errors if the order exceeds `cap`.
    pub fn elements(&self, cap: usize) -> Result<Vec<Perm>> {
        if self.order() > BigUint::from(cap) {
            return Err(IetError::ClosureCapExceeded { cap });
        }
        let mut elems = vec![Perm::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(elems.len() * level.transversal.len());
            for rep in level.transversal.values() {
                for e in &elems {
                    next.push(rep.compose(e));
                }
            }
            elems = next;
        }
        Ok(elems)
    }

    pub fn is_abelian(&self) -> bool {
        for (i, a) in self.gens.iter().enumerate() {
            for b in &self.gens[i + 1..] {
                if !Perm::commutator(a, b).is_identity() {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    pub fn same_group(&self, other: &PermGroup) -> bool {
        self.is_subgroup_of(other) && other.is_subgroup_of(self)
    }

    /// Smallest subgroup containing `seeds` that is normal in `self`
    /// (assumes `seeds ⊆ self`): conjugates the working generating set by
    /// the ambient generators until membership stabilizes. Only generators
    /// adopted in the previous round need conjugating again — conjugates of
    /// older ones were already checked against a subgroup of the result —
    /// and each round rebuilds the chain once.
    pub fn normal_closure(&self, seeds: &[Perm]) -> PermGroup {
        let mut gens: Vec<Perm> = Vec::new();
        for s in seeds {
            if !s.is_identity() && !gens.contains(s) {
                gens.push(s.clone());
            }
        }
        let mut closure = PermGroup::new(self.degree, gens.clone());
        let mut fresh = gens.clone();
        while !fresh.is_empty() {
            let mut batch: Vec<Perm> = Vec::new();
            for s in &fresh {
                for g in &self.gens {
                    let c = s.conjugate_by(g);
                    if !closure.contains(&c) && !batch.contains(&c) {
                        batch.push(c);
                    }
                }
            }
            if batch.is_empty() {
                return closure;
            }
            gens.extend(batch.iter().cloned());
            closure = PermGroup::new(self.degree, gens.clone());
            fresh = batch;
        }
        closure
    }

    /// The commutator subgroup `[G,G]`: normal closure of the generator
    /// commutators. (Conjugates of commutators generate the commutator
    /// subgroup, so the closure equals the full `[G,G]`.)
    pub fn derived_subgroup(&self) -> PermGroup {
        let mut seeds = Vec::new();
        for (i, a) in self.gens.iter().enumerate() {
            for b in &self.gens[i + 1..] {
                let c = Perm::commutator(a, b);
                if !c.is_identity() && !seeds.contains(&c) {
                    seeds.push(c);
                }
            }
        }
        self.normal_closure(&seeds)
    }

    /// The derived series `G ⊳ [G,G] ⊳ …`, ending at the trivial group
    /// (solvable) or at the first repetition (perfect nontrivial tail).
    pub fn derived_series(&self) -> Vec<PermGroup> {
        let mut series = vec![self.clone()];
        loop {
            let last = series.last().unwrap();
            if last.is_trivial() {
                return series;
            }
            let next = last.derived_subgroup();
            if next.order() == last.order() {
                return series;
            }
            series.push(next);
        }
    }

    /// Least `n` with the n-th derived subgroup trivial, or `None` when the
    /// series stabilizes at a nontrivial perfect group.
    pub fn derived_length(&self) -> Option<u32> {
        let series = self.derived_series();
        if series.last().unwrap().is_trivial() {
            Some(series.len() as u32 - 1)
        } else {
            None
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_length().is_some()
    }

    pub fn is_perfect(&self) -> bool {
        !self.is_trivial() && self.derived_subgroup().order() == self.order()
    }

    /// Whether the full alternating group on the degree is contained,
    /// decided by membership of the consecutive 3-cycles that generate it.
    pub fn contains_alternating(&self) -> bool {
        if self.degree < 3 {
            return true;
        }
        (0..self.degree - 2).all(|i| {
            let mut img: Vec<u8> = (0..self.degree as u8).collect();
            img[i] = (i + 1) as u8;
            img[i + 1] = (i + 2) as u8;
            img[i + 2] = i as u8;
            self.contains(&Perm { img })
        })
    }

    /// Exact intersection by enumerating the smaller group and filtering by
    /// membership in the other.
    pub fn intersection(&self, other: &PermGroup, cap: usize) -> Result<PermGroup> {
        if self.degree != other.degree {
            return Err(IetError::DegreeMismatch(self.degree, other.degree));
        }
        let (small, big) = if self.order() <= other.order() {
            (self, other)
        } else {
            (other, self)
        };
        let mut gens: Vec<Perm> = Vec::new();
        let mut result = PermGroup::trivial(self.degree);
        for e in small.elements(cap)? {
            if big.contains(&e) && !result.contains(&e) {
                gens.push(e);
                result = PermGroup::new(self.degree, gens.clone());
            }
        }
        Ok(result)
    }

    /// Invariant factors `d₁ | d₂ | … | d_k` (ascending) of the abelian
    /// quotient `self / n`. Checks that the quotient is abelian; `n` must be
    /// normal in `self`. The factors are reconstructed from order statistics:
    /// the exponent is split off and the statistics divided out, which pins
    /// the factors uniquely because `#{x : x^t = 1} = Π gcd(dᵢ, t)`.
    pub fn abelian_invariants_mod(&self, n: &PermGroup, cap: usize) -> Result<Vec<u64>> {
        for (i, a) in self.gens.iter().enumerate() {
            for b in &self.gens[i..] {
                if !n.contains(&Perm::commutator(a, b)) {
                    return Err(IetError::QuotientNotAbelian);
                }
            }
        }
        debug_assert!(
            self.gens
                .iter()
                .all(|g| n.generators().iter().all(|h| n.contains(&h.conjugate_by(g)))),
            "quotient modulus must be normal"
        );

        // Coset enumeration: BFS over generator multiplication, identifying
        // cosets by a membership test against every known representative.
        let mut reps = vec![Perm::identity(self.degree)];
        let mut frontier = vec![Perm::identity(self.degree)];
        while let Some(r) = frontier.pop() {
            for g in &self.gens {
                let c = g.compose(&r);
                if reps.iter().all(|p| !n.contains(&p.inverse().compose(&c))) {
                    if reps.len() >= cap {
                        return Err(IetError::QuotientTooLarge(cap));
                    }
                    reps.push(c.clone());
                    frontier.push(c);
                }
            }
        }

        let m = reps.len() as u64;
        let mut quotient_orders = Vec::with_capacity(reps.len());
        for r in &reps {
            let full = r.order();
            let q_order = divisors(full)
                .into_iter()
                .find(|&d| n.contains(&r.pow(d as i64)))
                .expect("element order bounds quotient order");
            quotient_orders.push(q_order);
        }

        let mut stats: BTreeMap<u64, u64> = BTreeMap::new();
        for t in divisors(m) {
            stats.insert(t, quotient_orders.iter().filter(|&&o| t % o == 0).count() as u64);
        }

        let mut remaining = m;
        let mut factors_desc = Vec::new();
        while remaining > 1 {
            let exponent = divisors(remaining)
                .into_iter()
                .find(|t| stats[t] == remaining)
                .expect("exponent of a finite abelian group divides its order");
            factors_desc.push(exponent);
            remaining /= exponent;
            for (t, count) in stats.iter_mut() {
                *count /= t.gcd(&exponent);
            }
            stats.retain(|t, _| remaining % t == 0);
        }
        factors_desc.reverse();
        Ok(factors_desc)
    }

    /// Invariant factors of `self` itself (must be abelian).
    pub fn abelian_invariants(&self, cap: usize) -> Result<Vec<u64>> {
        self.abelian_invariants_mod(&PermGroup::trivial(self.degree), cap)
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

// ======================================================================
// Derived constructions on a degree-q generator set
// ======================================================================

/// `W = ⟨𝔖(Q), σ⟩` where σ is the full cycle of the degree.
pub fn build_w(sq_gens: &[Perm], q: usize) -> PermGroup {
    let mut gens = sq_gens.to_vec();
    gens.push(Perm::sigma_cycle(q));
    PermGroup::new(q, gens)
}

/// `V = ⟨σᵖ 𝔖(Q) σ⁻ᵖ : p⟩`. Conjugating a generating set generates the
/// conjugate subgroup, so generator conjugates over p ∈ {0,…,q−1} suffice.
pub fn build_v(sq_gens: &[Perm], q: usize) -> PermGroup {
    let sigma = Perm::sigma_cycle(q);
    let mut gens = Vec::new();
    for p in 0..q {
        let s = sigma.pow(p as i64);
        for g in sq_gens {
            let c = g.conjugate_by(&s);
            if !gens.contains(&c) {
                gens.push(c);
            }
        }
    }
    PermGroup::new(q, gens)
}

/// `W₀ = ⟨[σᵖ, t], [t₁,t₂] : t, t₁, t₂ ∈ 𝔖(Q), p⟩`, built from its
/// definition: the pair part is the commutator subgroup of 𝔖(Q) (that is
/// its definition), and the `[σᵖ, t]` part sweeps over *all* elements t of
/// 𝔖(Q) — enumerated under `cap` — until membership stabilizes.
pub fn build_w0(sq: &PermGroup, cap: usize) -> Result<PermGroup> {
    let q = sq.degree();
    let sigma = Perm::sigma_cycle(q);
    let elements = sq.elements(cap)?;
    let mut gens: Vec<Perm> = sq.derived_subgroup().generators().to_vec();
    let mut group = PermGroup::new(q, gens.clone());
    loop {
        let mut added = false;
        for t in &elements {
            for p in 1..q {
                let c = Perm::commutator(&sigma.pow(p as i64), t);
                if !c.is_identity() && !group.contains(&c) {
                    gens.push(c);
                    group = PermGroup::new(q, gens.clone());
                    added = true;
                }
            }
        }
        if !added {
            return Ok(group);
        }
    }
}

/// Imprimitive wreath product `L wr G ≤ S_{|L-degree|·|G-degree|}`: one copy
/// of L on the first block plus G permuting blocks. Generates the full
/// wreath product when G is transitive on its points (the block conjugates
/// of the first copy reach every block), which holds for the regular cyclic
/// realizations used here.
pub fn wreath_product(l: &PermGroup, g: &PermGroup) -> PermGroup {
    let dl = l.degree();
    let dg = g.degree();
    let degree = dl * dg;
    let mut gens = Vec::new();
    for lg in l.generators() {
        let mut img: Vec<u8> = (0..degree as u8).collect();
        for i in 0..dl {
            img[i] = lg.apply(i) as u8;
        }
        gens.push(Perm { img });
    }
    for gg in g.generators() {
        let mut img = vec![0u8; degree];
        for b in 0..dg {
            for i in 0..dl {
                img[b * dl + i] = (gg.apply(b) * dl + i) as u8;
            }
        }
        gens.push(Perm { img });
    }
    PermGroup::new(degree, gens)
}

/// Invariant factors of the direct product of two abelian groups given by
/// their invariant factors: split into prime powers, then regroup by taking
/// the largest power of each prime for the last factor, the next largest for
/// the one before, and so on.
pub fn merge_abelian_invariants(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut prime_powers: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &d in a.iter().chain(b) {
        let mut rest = d;
        let mut p = 2;
        while p * p <= rest {
            if rest % p == 0 {
                let mut pk = 1;
                while rest % p == 0 {
                    rest /= p;
                    pk *= p;
                }
                prime_powers.entry(p).or_default().push(pk);
            }
            p += 1;
        }
        if rest > 1 {
            prime_powers.entry(rest).or_default().push(rest);
        }
    }
    let rank = prime_powers.values().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![1u64; rank];
    for powers in prime_powers.values_mut() {
        powers.sort_unstable();
        // Largest power goes into the last invariant factor.
        for (offset, pk) in powers.iter().rev().enumerate() {
            factors[rank - 1 - offset] *= pk;
        }
    }
    factors
}

// ======================================================================
// Tests
// ======================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(text: &str, degree: usize) -> Perm {
        Perm::parse_cycles(text, degree).unwrap()
    }

    #[test]
    fn compose_is_right_to_left() {
        let s = Perm::sigma_cycle(4);
        let t = p("(1,2)", 4);
        // s∘t: apply t first. 1→2→3.
        assert_eq!(s.compose(&t).one_line(), vec![3, 2, 4, 1]);
        // Commutator convention [σ,(1,2)] = σ(1,2)σ⁻¹(1,2) = (2,3)(1,2) = (1,3,2).
        assert_eq!(Perm::commutator(&s, &t), p("(1,3,2)", 4));
        // And with σ²: [σ²,(1,2)] = (1,2)(3,4) — the two-piece commutator value
        // of the degree-4 worked example.
        assert_eq!(Perm::commutator(&s.pow(2), &t), p("(1,2)(3,4)", 4));
    }

    #[test]
    fn parse_and_display_roundtrip() {
        for text in ["(1,3)", "(1,3)(2,4)", "(1,2,3,4)", "()"] {
            let perm = p(text, 4);
            assert_eq!(perm.to_string(), text);
            assert_eq!(p(&perm.to_string(), 4), perm);
        }
        assert_eq!(p("id", 5), Perm::identity(5));
        assert_eq!(p("( 1 , 3 )", 4), p("(1,3)", 4));
        // Non-disjoint cycles compose right-to-left.
        assert_eq!(p("(1,2)(1,3)", 3), p("(1,3,2)", 3));
        assert!(Perm::parse_cycles("(1,5)", 4).is_err());
        assert!(Perm::parse_cycles("(1,1)", 4).is_err());
        assert!(Perm::parse_cycles("nonsense", 4).is_err());
    }

    #[test]
    fn one_line_roundtrip_and_validation() {
        let g = Perm::from_one_line(&[3, 2, 1, 4]).unwrap();
        assert_eq!(g, p("(1,3)", 4));
        assert_eq!(g.one_line(), vec![3, 2, 1, 4]);
        assert!(Perm::from_one_line(&[1, 1, 3]).is_err());
        assert!(Perm::from_one_line(&[0, 1]).is_err());
    }

    #[test]
    fn order_parity_inverse() {
        let s = Perm::sigma_cycle(6);
        assert_eq!(s.order(), 6);
        assert!(!s.is_even()); // 6-cycle is odd
        assert!(p("(1,2,3)", 5).is_even());
        assert_eq!(s.compose(&s.inverse()), Perm::identity(6));
        assert_eq!(s.pow(-2), s.inverse().compose(&s.inverse()));
        assert_eq!(s.pow(6), Perm::identity(6));
    }

    #[test]
    fn group_orders() {
        assert_eq!(
            PermGroup::new(4, vec![Perm::sigma_cycle(4)]).order_u64(),
            Some(4)
        );
        // ⟨σ₄,(1,3)⟩ is dihedral of order 8.
        let d8 = build_w(&[p("(1,3)", 4)], 4);
        assert_eq!(d8.order_u64(), Some(8));
        let s4 = build_w(&[p("(1,2)", 4)], 4);
        assert_eq!(s4.order_u64(), Some(24));
        let s7 = build_w(&[p("(1,2)", 7)], 7);
        assert_eq!(s7.order_u64(), Some(5040));
        assert!(PermGroup::trivial(4).is_trivial());
    }

    #[test]
    fn membership_and_enumeration() {
        let a4 = PermGroup::new(4, vec![p("(1,2,3)", 4), p("(2,3,4)", 4)]);
        assert_eq!(a4.order_u64(), Some(12));
        assert!(!a4.contains(&p("(1,2)", 4)));
        assert!(a4.contains(&p("(1,2)(3,4)", 4)));
        let elems = a4.elements(100).unwrap();
        assert_eq!(elems.len(), 12);
        assert!(elems.iter().all(|e| e.is_even()));
        // Deterministic and duplicate-free.
        let mut dedup = elems.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 12);
        assert!(matches!(
            a4.elements(5),
            Err(IetError::ClosureCapExceeded { cap: 5 })
        ));
    }

    #[test]
    fn derived_series_examples() {
        let s3 = build_w(&[p("(1,3)", 3)], 3);
        assert_eq!(s3.order_u64(), Some(6));
        let a3 = s3.derived_subgroup();
        assert_eq!(a3.order_u64(), Some(3));
        assert_eq!(s3.derived_length(), Some(2));

        let s4 = build_w(&[p("(1,2)", 4)], 4);
        assert_eq!(s4.derived_length(), Some(3)); // S4 ⊳ A4 ⊳ V4 ⊳ 1
        let a4 = s4.derived_subgroup();
        assert_eq!(a4.order_u64(), Some(12));
        assert!(a4.derived_subgroup().is_abelian());

        let s5 = build_w(&[p("(1,2)", 5)], 5);
        assert_eq!(s5.derived_length(), None);
        assert!(!s5.is_solvable());
        assert!(s5.derived_subgroup().is_perfect());

        assert_eq!(PermGroup::trivial(3).derived_length(), Some(0));
    }

    #[test]
    fn alternating_membership() {
        assert!(build_w(&[p("(1,2)", 5)], 5).contains_alternating());
        assert!(!PermGroup::new(5, vec![Perm::sigma_cycle(5)]).contains_alternating());
        // Consecutive 3-cycles generate the alternating group.
        let a6 = PermGroup::new(
            6,
            vec![p("(1,2,3)", 6), p("(2,3,4)", 6), p("(3,4,5)", 6), p("(4,5,6)", 6)],
        );
        assert_eq!(a6.order_u64(), Some(360));
        assert!(a6.contains_alternating());
    }

    #[test]
    fn intersection_example() {
        let a4 = build_w(&[p("(1,2)", 4)], 4).derived_subgroup();
        let sq = PermGroup::new(4, vec![p("(1,2)", 4), p("(3,4)", 4)]);
        let meet = a4.intersection(&sq, 1000).unwrap();
        assert_eq!(meet.order_u64(), Some(2));
        assert!(meet.contains(&p("(1,2)(3,4)", 4)));
        assert!(a4.intersection(&a4, 1000).unwrap().same_group(&a4));
    }

    #[test]
    fn w_v_w0_examples() {
        // 𝔖(Q)=⟨(1,3)⟩ at degree 4: V = ⟨(1,3),(2,4)⟩, abelian of order 4.
        let v = build_v(&[p("(1,3)", 4)], 4);
        assert!(v.is_abelian());
        assert_eq!(v.order_u64(), Some(4));
        assert!(v.contains(&p("(2,4)", 4)));

        // Trivial Q: V and W₀ trivial, W = ⟨σ⟩.
        assert!(build_v(&[], 4).is_trivial());
        assert!(build_w0(&PermGroup::trivial(4), 100).unwrap().is_trivial());
        assert_eq!(build_w(&[], 4).order_u64(), Some(4));

        // W₀ = [W,W] on the worked degree-3 and degree-4 examples.
        for (gens, q) in [
            (vec![p("(1,3)", 3)], 3),
            (vec![p("(1,3)", 4)], 4),
            (vec![p("(1,2)", 4), p("(3,4)", 4)], 4),
        ] {
            let sq = PermGroup::new(q, gens.clone());
            let w0 = build_w0(&sq, 10_000).unwrap();
            let ww = build_w(&gens, q).derived_subgroup();
            assert!(w0.same_group(&ww));
        }
    }

    #[test]
    fn abelian_invariants_examples() {
        let s3 = build_w(&[p("(1,3)", 3)], 3);
        let a3 = s3.derived_subgroup();
        assert_eq!(s3.abelian_invariants_mod(&a3, 100).unwrap(), vec![2]);

        let klein = PermGroup::new(4, vec![p("(1,2)", 4), p("(3,4)", 4)]);
        assert_eq!(klein.abelian_invariants(100).unwrap(), vec![2, 2]);

        let c6 = PermGroup::new(6, vec![Perm::sigma_cycle(6)]);
        assert_eq!(c6.abelian_invariants(100).unwrap(), vec![6]);

        assert_eq!(
            PermGroup::trivial(3).abelian_invariants(10).unwrap(),
            Vec::<u64>::new()
        );

        let s4 = build_w(&[p("(1,2)", 4)], 4);
        assert!(matches!(
            s4.abelian_invariants(100),
            Err(IetError::QuotientNotAbelian)
        ));
        assert!(matches!(
            klein.abelian_invariants(2),
            Err(IetError::QuotientTooLarge(2))
        ));

        // D8 / [D8,D8] = Z/2 × Z/2.
        let d8 = build_w(&[p("(1,3)", 4)], 4);
        let inv = d8.abelian_invariants_mod(&d8.derived_subgroup(), 100).unwrap();
        assert_eq!(inv, vec![2, 2]);
    }

    #[test]
    fn wreath_abelianization_oracle() {
        let z2 = PermGroup::new(2, vec![p("(1,2)", 2)]);
        let z3 = PermGroup::new(3, vec![Perm::sigma_cycle(3)]);
        let klein = PermGroup::new(4, vec![p("(1,2)", 4), p("(3,4)", 4)]);

        let cases: Vec<(PermGroup, PermGroup, Vec<u64>)> = vec![
            (z2.clone(), z3.clone(), vec![6]),
            (z3, z2.clone(), vec![6]),
            (klein, z2, vec![2, 2, 2]),
        ];
        for (l, g, expected) in cases {
            let w = wreath_product(&l, &g);
            assert_eq!(
                w.order(),
                l.order().pow(g.degree() as u32) * g.order(),
                "regular cyclic top: |L wr G| = |L|^blocks · |G|"
            );
            let ab = w
                .abelian_invariants_mod(&w.derived_subgroup(), 10_000)
                .unwrap();
            assert_eq!(ab, expected);
            let merged = merge_abelian_invariants(
                &l.abelian_invariants_mod(&l.derived_subgroup(), 100).unwrap(),
                &g.abelian_invariants_mod(&g.derived_subgroup(), 100).unwrap(),
            );
            assert_eq!(ab, merged);
        }
    }

    #[test]
    fn merge_invariants() {
        assert_eq!(merge_abelian_invariants(&[2], &[3]), vec![6]);
        assert_eq!(merge_abelian_invariants(&[2, 2], &[2]), vec![2, 2, 2]);
        assert_eq!(merge_abelian_invariants(&[2], &[4]), vec![2, 4]);
        assert_eq!(merge_abelian_invariants(&[6], &[4]), vec![2, 12]);
        assert_eq!(merge_abelian_invariants(&[], &[5]), vec![5]);
        assert_eq!(merge_abelian_invariants(&[], &[]), Vec::<u64>::new());
    }

    fn arb_perm(degree: usize) -> impl Strategy<Value = Perm> {
        // A permutation from a sequence of transpositions — uniform enough.
        proptest::collection::vec((0..degree, 0..degree), 0..8).prop_map(move |swaps| {
            let mut img: Vec<u8> = (0..degree as u8).collect();
            for (a, b) in swaps {
                img.swap(a, b);
            }
            Perm { img }
        })
    }

    proptest! {
        #[test]
        fn group_axioms_via_chain(a in arb_perm(6), b in arb_perm(6)) {
            let g = PermGroup::new(6, vec![a.clone(), b.clone()]);
            // Generators and simple words are members; order caps at |S6|.
            prop_assert!(g.contains(&a.compose(&b)));
            prop_assert!(g.contains(&a.inverse()));
            prop_assert!(g.order_u64().unwrap() <= 720);
            let elems = g.elements(720).unwrap();
            prop_assert_eq!(elems.len() as u64, g.order_u64().unwrap());
            // Lagrange for the derived subgroup, which is normal.
            let d = g.derived_subgroup();
            prop_assert!(d.is_subgroup_of(&g));
            prop_assert_eq!(g.order_u64().unwrap() % d.order_u64().unwrap(), 0);
            for x in d.generators() {
                prop_assert!(d.contains(&x.conjugate_by(&a)));
                prop_assert!(d.contains(&x.conjugate_by(&b)));
            }
            // G/[G,G] is abelian, so invariants must exist.
            let inv = g.abelian_invariants_mod(&d, 1000).unwrap();
            let quotient: u64 = inv.iter().product();
            prop_assert_eq!(quotient, g.order_u64().unwrap() / d.order_u64().unwrap());
            for w in inv.windows(2) {
                prop_assert_eq!(w[1] % w[0], 0);
            }
        }

        #[test]
        fn pow_matches_repeated_compose(a in arb_perm(7), k in 0i64..12) {
            let mut acc = Perm::identity(7);
            for _ in 0..k {
                acc = acc.compose(&a);
            }
            prop_assert_eq!(a.pow(k), acc.clone());
            prop_assert_eq!(a.pow(-k), acc.inverse());
        }

        #[test]
        fn display_parse_roundtrip(a in arb_perm(9)) {
            prop_assert_eq!(Perm::parse_cycles(&a.to_string(), 9).unwrap(), a);
        }
    }
}
