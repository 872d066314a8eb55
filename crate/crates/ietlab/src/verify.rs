//! Named re-verification suites, runnable from the CLI: randomized,
//! exact-arithmetic property checks of the library's structural claims.
//! Each suite reports per-property pass/fail with a counterexample dump on
//! the first failing instance. Randomness is seeded, so runs are
//! reproducible.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constructions::solvable_tower;
use crate::error::{IetError, Result};
use crate::exactnum::{CircleValue, IrrationalBasis};
use crate::haq::{GroupWord, HaqSpec, StepProfile};
use crate::ietcore::{IntervalExchange, PointSet};
use crate::permgrp::{
    build_w, build_w0, merge_abelian_invariants, wreath_product, Perm, PermGroup,
};

pub const DEFAULT_SEED: u64 = 0x1e7ab;

pub const SUITE_NAMES: &[&str] = &[
    "conjugation",
    "w0",
    "morphism",
    "profiles",
    "wreath-ab",
    "breakpoints",
    "tower",
];

#[derive(Debug, Clone, Serialize)]
pub struct PropertyOutcome {
    pub property: String,
    pub passed: bool,
    /// Number of instances checked (up to the failing one).
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub passed: bool,
    pub properties: Vec<PropertyOutcome>,
}

/// Runs one suite by name, or every suite for `"all"`.
pub fn run_suites(name: &str, seed: u64) -> Result<Vec<SuiteOutcome>> {
    let names: Vec<&str> = if name == "all" {
        SUITE_NAMES.to_vec()
    } else if SUITE_NAMES.contains(&name) {
        vec![name]
    } else {
        return Err(IetError::Schema(format!(
            "unknown verify suite '{name}' (available: {}, all)",
            SUITE_NAMES.join(", ")
        )));
    };
    Ok(names.into_iter().map(|n| run_one(n, seed)).collect())
}

fn run_one(name: &str, seed: u64) -> SuiteOutcome {
    let properties = match name {
        "conjugation" => conjugation_suite(seed),
        "w0" => w0_suite(seed),
        "morphism" => morphism_suite(seed),
        "profiles" => profiles_suite(seed),
        "wreath-ab" => wreath_suite(seed),
        "breakpoints" => breakpoints_suite(seed),
        "tower" => tower_suite(),
        _ => unreachable!("suite names are validated by run_suites"),
    };
    SuiteOutcome {
        suite: name.to_string(),
        passed: properties.iter().all(|p| p.passed),
        properties,
    }
}

fn check<F>(property: &str, cases: usize, mut case: F) -> PropertyOutcome
where
    F: FnMut(usize) -> std::result::Result<(), String>,
{
    for index in 0..cases {
        if let Err(dump) = case(index) {
            return PropertyOutcome {
                property: property.into(),
                passed: false,
                cases: index,
                counterexample: Some(dump),
            };
        }
    }
    PropertyOutcome {
        property: property.into(),
        passed: true,
        cases,
        counterexample: None,
    }
}

// ----------------------------------------------------------------------
// Random instance generators
// ----------------------------------------------------------------------

fn random_perm(rng: &mut ChaCha8Rng, degree: usize) -> Perm {
    let mut line: Vec<usize> = (1..=degree).collect();
    line.shuffle(rng);
    Perm::from_one_line(&line).expect("shuffled line is a permutation")
}

fn random_spec(rng: &mut ChaCha8Rng, max_q: u32, gens: std::ops::RangeInclusive<usize>) -> Arc<HaqSpec> {
    let q = rng.random_range(2..=max_q);
    let n_gens = rng.random_range(gens);
    let qgens = (0..n_gens).map(|_| random_perm(rng, q as usize)).collect();
    let basis = IrrationalBasis::sqrt_primes(if rng.random_bool(0.5) { 1 } else { 2 })
        .expect("prime basis");
    HaqSpec::new(q, qgens, basis).expect("random spec is well-formed")
}

/// A rotation amount inside the group: a grid-rational part plus a small
/// integer combination of the basis rotations.
fn random_rotation_amount(rng: &mut ChaCha8Rng, spec: &Arc<HaqSpec>) -> CircleValue {
    let q = spec.q() as i64;
    let mut amount = CircleValue::rational(spec.basis(), rng.random_range(0..q), q);
    for i in 0..spec.s() {
        let n = rng.random_range(-2..=2i64);
        if n != 0 {
            amount = amount.add(&spec.alpha(i).mul_int(n));
        }
    }
    amount
}

fn random_word(rng: &mut ChaCha8Rng, spec: &Arc<HaqSpec>, max_len: usize) -> GroupWord {
    let mut word = GroupWord::identity(spec);
    for _ in 0..rng.random_range(0..=max_len) {
        let choices = if spec.m() > 0 { 4 } else { 2 };
        let letter = match rng.random_range(0..choices) {
            0 => GroupWord::rotation(spec, &random_rotation_amount(rng, spec)),
            1 => GroupWord::rotation_gen(spec, rng.random_range(0..spec.s())),
            2 => GroupWord::generator(spec, rng.random_range(0..spec.m()))
                .expect("generator index in range"),
            _ => GroupWord::generator(spec, rng.random_range(0..spec.m()))
                .expect("generator index in range")
                .inverse(),
        };
        word = word.compose(&letter);
    }
    word
}

/// A random kernel element: the torsion factor of a random word.
fn random_kernel_word(
    rng: &mut ChaCha8Rng,
    spec: &Arc<HaqSpec>,
    max_len: usize,
) -> std::result::Result<GroupWord, String> {
    random_word(rng, spec, max_len)
        .decompose()
        .map(|d| d.p)
        .map_err(|e| format!("decompose failed: {e}"))
}

fn random_point(rng: &mut ChaCha8Rng, basis: &Arc<IrrationalBasis>) -> CircleValue {
    if rng.random_bool(0.5) {
        let den = rng.random_range(1..=17i64);
        CircleValue::rational(basis, rng.random_range(0..den), den)
    } else {
        CircleValue::alpha(basis, 0).mul_int(rng.random_range(1..=40))
    }
}

// ----------------------------------------------------------------------
// conjugation: closed-form profiles of rotated grid exchanges
// ----------------------------------------------------------------------

/// Rotating a grid exchange by γ = j₀/q + γ̃ yields a two-piece profile:
/// the (j₀+1)-fold σ-conjugate of τ on [0, γ̃) and the j₀-fold conjugate on
/// [γ̃, 1/q); the commutator with the rotation replaces conjugates by
/// commutators. Both are checked against the directly computed profile.
fn conjugation_suite(seed: u64) -> Vec<PropertyOutcome> {
    vec![
        check("two-piece-conjugate-profile", 200, conjugation_case(seed, false)),
        check("two-piece-commutator-profile", 200, conjugation_case(seed ^ 1, true)),
    ]
}

fn conjugation_case(
    seed: u64,
    commutator_form: bool,
) -> impl FnMut(usize) -> std::result::Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    move |_| {
        let q = rng.random_range(2..=8u32);
        let tau = random_perm(&mut rng, q as usize);
        let basis = IrrationalBasis::sqrt_primes(1).expect("prime basis");
        let spec = HaqSpec::new(q, vec![tau.clone()], basis).expect("spec");
        let j0 = rng.random_range(0..q) as i64;
        let gamma_tilde = if rng.random_bool(0.5) {
            let d = rng.random_range(1..=6i64);
            CircleValue::rational(spec.basis(), rng.random_range(0..d), q as i64 * d)
        } else {
            let multiple = spec.alpha(0).mul_int(rng.random_range(1..=30));
            multiple.decompose_mod(q).expect("reduction").1
        };
        let gamma = CircleValue::rational(spec.basis(), j0, q as i64).add(&gamma_tilde);

        let e = GroupWord::generator(&spec, 0).expect("one grid generator");
        let r = GroupWord::rotation(&spec, &gamma);
        let word = if commutator_form {
            GroupWord::commutator(&r, &e)
        } else {
            r.compose(&e).compose(&r.inverse())
        };

        let sigma = Perm::sigma_cycle(q as usize);
        let (near, far) = if commutator_form {
            (
                Perm::commutator(&sigma.pow(j0 + 1), &tau),
                Perm::commutator(&sigma.pow(j0), &tau),
            )
        } else {
            (
                tau.conjugate_by(&sigma.pow(j0 + 1)),
                tau.conjugate_by(&sigma.pow(j0)),
            )
        };

        let computed = word
            .profile()
            .map_err(|e| format!("profile failed: {e} (q={q}, τ={tau}, γ={gamma})"))?;
        let zero = CircleValue::zero(spec.basis());
        let (expected_cuts, expected_values) = if gamma_tilde.is_zero() || near == far {
            (vec![zero], vec![far])
        } else {
            (vec![zero, gamma_tilde.clone()], vec![near, far])
        };
        if computed.cuts() != expected_cuts.as_slice()
            || computed.values() != expected_values.as_slice()
        {
            return Err(format!(
                "q={q} τ={tau} j₀={j0} γ̃={gamma_tilde}: computed {computed:?}, expected cuts {expected_cuts:?} values {expected_values:?}"
            ));
        }
        Ok(())
    }
}

// ----------------------------------------------------------------------
// w0: the σ-commutator subgroup equals the derived subgroup of W
// ----------------------------------------------------------------------

fn w0_suite(seed: u64) -> Vec<PropertyOutcome> {
    let random = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        check("sigma-commutators-generate-derived-subgroup", 50, move |_| {
            let q = rng.random_range(2..=7u32) as usize;
            let n_gens = rng.random_range(0..=2usize);
            let gens: Vec<Perm> = (0..n_gens).map(|_| random_perm(&mut rng, q)).collect();
            compare_w0(&gens, q, 50_000)
        })
    };
    let spots: Vec<Vec<Perm>> = vec![
        vec![Perm::parse_cycles("(1,2)", 8).expect("cycle")],
        vec![
            Perm::parse_cycles("(1,2)", 8).expect("cycle"),
            Perm::sigma_cycle(8),
        ],
    ];
    let spot = check("degree-eight-spot-checks", spots.len(), move |i| {
        compare_w0(&spots[i], 8, 100_000)
    });
    vec![random, spot]
}

fn compare_w0(gens: &[Perm], q: usize, cap: usize) -> std::result::Result<(), String> {
    let sq = PermGroup::new(q, gens.to_vec());
    let w0 = build_w0(&sq, cap).map_err(|e| format!("q={q} gens={gens:?}: {e}"))?;
    let ww = build_w(gens, q).derived_subgroup();
    if !w0.same_group(&ww) {
        return Err(format!(
            "q={q} gens={gens:?}: |W₀| = {} but |[W,W]| = {}",
            w0.order(),
            ww.order()
        ));
    }
    Ok(())
}

// ----------------------------------------------------------------------
// morphism: the translation-number morphism and the rotation splitting
// ----------------------------------------------------------------------

fn morphism_suite(seed: u64) -> Vec<PropertyOutcome> {
    let additivity = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        check("translation-number-additivity", 120, move |_| {
            let spec = random_spec(&mut rng, 8, 1..=2);
            let f = random_word(&mut rng, &spec, 5);
            let g = random_word(&mut rng, &spec, 5);
            let sum = ell(&f)?.add(&ell(&g)?);
            let composed = ell(&f.compose(&g))?;
            if composed != sum {
                return Err(format!("ℓ(fg) = {composed} but ℓ(f)+ℓ(g) = {sum} for f={f}, g={g}"));
            }
            Ok(())
        })
    };
    let splitting = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
        check("rotation-splitting", 120, move |_| {
            let spec = random_spec(&mut rng, 8, 1..=2);
            let f = random_word(&mut rng, &spec, 6);
            let d = f.decompose().map_err(|e| format!("decompose: {e}"))?;
            let rot = GroupWord::rotation(&spec, &d.rotation);
            if !d.p.is_torsion().map_err(err)? || !d.q.is_torsion().map_err(err)? {
                return Err(format!("split factors of {f} are not torsion"));
            }
            if d.p.compose(&rot).realized() != f.realized()
                || rot.compose(&d.q).realized() != f.realized()
            {
                return Err(format!("f ≠ P·R = R·Q for f={f}, ℓ={}", d.rotation));
            }
            Ok(())
        })
    };
    let inverse_identity = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
        check("inverse-splitting-identity", 120, move |_| {
            let spec = random_spec(&mut rng, 8, 1..=2);
            let h = random_word(&mut rng, &spec, 6);
            let p_h = h.decompose().map_err(err)?.p;
            let p_h_inv = h.inverse().decompose().map_err(err)?.p;
            let back = GroupWord::rotation(&spec, &ell(&h)?.neg());
            let rhs = p_h
                .inverse()
                .compose(&GroupWord::commutator(&p_h, &back));
            if p_h_inv.realized() != rhs.realized() {
                return Err(format!("P(h⁻¹) ≠ P(h)⁻¹·[P(h), R(−ℓh)] for h={h}"));
            }
            Ok(())
        })
    };
    let product_identity = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 4);
        check("product-splitting-identity", 120, move |_| {
            let spec = random_spec(&mut rng, 8, 1..=2);
            let h1 = random_word(&mut rng, &spec, 5);
            let h2 = random_word(&mut rng, &spec, 5);
            let p12 = h1.compose(&h2).decompose().map_err(err)?.p;
            let p1 = h1.decompose().map_err(err)?.p;
            let p2 = h2.decompose().map_err(err)?.p;
            let forward = GroupWord::rotation(&spec, &ell(&h1)?);
            let rhs = p1
                .compose(&p2)
                .compose(&GroupWord::commutator(&p2.inverse(), &forward));
            if p12.realized() != rhs.realized() {
                return Err(format!(
                    "P(h₁h₂) ≠ P(h₁)P(h₂)[P(h₂)⁻¹, R(ℓh₁)] for h₁={h1}, h₂={h2}"
                ));
            }
            Ok(())
        })
    };
    let torsion_criterion = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 5);
        check("torsion-iff-zero-coefficients", 120, move |_| {
            let spec = random_spec(&mut rng, 8, 1..=2);
            let f = random_word(&mut rng, &spec, 6);
            let torsion = f.is_torsion().map_err(err)?;
            let zero_coeffs = f.rotation_coefficients().iter().all(|&n| n == 0);
            if torsion != zero_coeffs {
                return Err(format!(
                    "torsion = {torsion} but coefficients = {:?} for f={f}",
                    f.rotation_coefficients()
                ));
            }
            if torsion {
                let by_profile = f.torsion_order().map_err(err)?;
                let by_iteration = f.realized().order(100_000).map_err(err)?;
                if by_profile != by_iteration {
                    return Err(format!(
                        "profile order {by_profile} ≠ iterated order {by_iteration} for f={f}"
                    ));
                }
            }
            Ok(())
        })
    };
    vec![
        additivity,
        splitting,
        inverse_identity,
        product_identity,
        torsion_criterion,
    ]
}

fn ell(f: &GroupWord) -> std::result::Result<CircleValue, String> {
    f.ell().map_err(|e| format!("ℓ failed on {f}: {e}"))
}

fn err(e: IetError) -> String {
    e.to_string()
}

// ----------------------------------------------------------------------
// profiles: the step-profile encoding of kernel elements
// ----------------------------------------------------------------------

fn profiles_suite(seed: u64) -> Vec<PropertyOutcome> {
    let multiplication = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        check("profile-multiplication", 120, move |_| {
            let spec = random_spec(&mut rng, 8, 1..=2);
            let k1 = random_kernel_word(&mut rng, &spec, 5)?;
            let k2 = random_kernel_word(&mut rng, &spec, 5)?;
            let pointwise = profile(&k1)?.compose(&profile(&k2)?);
            let composed = profile(&k1.compose(&k2))?;
            if pointwise != composed {
                return Err(format!(
                    "profile(k₁)·profile(k₂) = {pointwise:?} ≠ profile(k₁k₂) = {composed:?}"
                ));
            }
            Ok(())
        })
    };
    let reconstruction = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 6);
        check("profile-reconstruction", 120, move |_| {
            let spec = random_spec(&mut rng, 8, 1..=2);
            let k = random_kernel_word(&mut rng, &spec, 6)?;
            let rebuilt = profile(&k)?.to_iet(spec.basis());
            if rebuilt != *k.realized() {
                return Err(format!("profile.to_iet ≠ realized map for k={k}"));
            }
            Ok(())
        })
    };
    let inverse = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 7);
        check("profile-inverse", 120, move |_| {
            let spec = random_spec(&mut rng, 8, 1..=2);
            let k = random_kernel_word(&mut rng, &spec, 6)?;
            if profile(&k)?.inverse() != profile(&k.inverse())? {
                return Err(format!("profile(k)⁻¹ ≠ profile(k⁻¹) for k={k}"));
            }
            Ok(())
        })
    };
    let order = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 8);
        check("torsion-order-via-profile", 120, move |_| {
            let spec = random_spec(&mut rng, 8, 1..=2);
            let k = random_kernel_word(&mut rng, &spec, 6)?;
            let by_profile = k.torsion_order().map_err(err)?;
            let by_iteration = k.realized().order(100_000).map_err(err)?;
            if by_profile != by_iteration {
                return Err(format!(
                    "profile order {by_profile} ≠ iterated order {by_iteration} for k={k}"
                ));
            }
            Ok(())
        })
    };
    vec![multiplication, reconstruction, inverse, order]
}

fn profile(k: &GroupWord) -> std::result::Result<StepProfile, String> {
    k.profile().map_err(|e| format!("profile of {k}: {e}"))
}

// ----------------------------------------------------------------------
// wreath-ab: enumerated abelianization of wreath products
// ----------------------------------------------------------------------

fn wreath_suite(seed: u64) -> Vec<PropertyOutcome> {
    let z = |k: usize| PermGroup::new(k, vec![Perm::sigma_cycle(k)]);
    let klein = PermGroup::new(
        4,
        vec![
            Perm::parse_cycles("(1,2)", 4).expect("cycle"),
            Perm::parse_cycles("(3,4)", 4).expect("cycle"),
        ],
    );
    let fixed_cases: Vec<(PermGroup, PermGroup, Vec<u64>)> = vec![
        (z(2), z(3), vec![6]),
        (z(3), z(2), vec![6]),
        (klein.clone(), z(2), vec![2, 2, 2]),
    ];
    let fixed = check("fixed-oracles", fixed_cases.len(), move |i| {
        let (l, g, expected) = &fixed_cases[i];
        let got = wreath_abelianization(l, g)?;
        if got != *expected {
            return Err(format!(
                "ab(L wr G) = {got:?}, expected {expected:?} for |L|={}, |G|={}",
                l.order(),
                g.order()
            ));
        }
        Ok(())
    });
    let random = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 9);
        let s3 = PermGroup::new(
            3,
            vec![
                Perm::parse_cycles("(1,2)", 3).expect("cycle"),
                Perm::parse_cycles("(1,2,3)", 3).expect("cycle"),
            ],
        );
        let lamps: Vec<PermGroup> = vec![z(2), z(3), z(4), klein, s3];
        let tops: Vec<PermGroup> = vec![z(2), z(3)];
        check("direct-product-law", 24, move |_| {
            let l = lamps[rng.random_range(0..lamps.len())].clone();
            let g = tops[rng.random_range(0..tops.len())].clone();
            let got = wreath_abelianization(&l, &g)?;
            let expected = merge_abelian_invariants(
                &l.abelian_invariants_mod(&l.derived_subgroup(), 1_000)
                    .map_err(err)?,
                &g.abelian_invariants_mod(&g.derived_subgroup(), 1_000)
                    .map_err(err)?,
            );
            if got != expected {
                return Err(format!(
                    "ab(L wr G) = {got:?} ≠ ab(L)×ab(G) = {expected:?} for |L|={}, |G|={}",
                    l.order(),
                    g.order()
                ));
            }
            Ok(())
        })
    };
    vec![fixed, random]
}

fn wreath_abelianization(
    l: &PermGroup,
    g: &PermGroup,
) -> std::result::Result<Vec<u64>, String> {
    let w = wreath_product(l, g);
    w.abelian_invariants_mod(&w.derived_subgroup(), 50_000)
        .map_err(err)
}

// ----------------------------------------------------------------------
// breakpoints: exact interval-exchange arithmetic
// ----------------------------------------------------------------------

fn random_iet(rng: &mut ChaCha8Rng, basis: &Arc<IrrationalBasis>, factors: usize) -> IntervalExchange {
    let mut f = IntervalExchange::identity(basis);
    for _ in 0..factors {
        let next = if rng.random_bool(0.5) {
            let q = rng.random_range(2..=6usize);
            IntervalExchange::from_permutation(basis, &random_perm(rng, q))
        } else {
            let den = rng.random_range(1..=10i64);
            let mut amount = CircleValue::rational(basis, rng.random_range(0..den), den);
            if rng.random_bool(0.5) {
                amount = amount.add(&CircleValue::alpha(basis, 0).mul_int(rng.random_range(-3..=3)));
            }
            IntervalExchange::rotation(&amount)
        };
        f = f.compose(&next);
    }
    f
}

fn breakpoints_suite(seed: u64) -> Vec<PropertyOutcome> {
    let laws = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        check("group-laws-and-evaluation", 120, move |_| {
            let basis = IrrationalBasis::sqrt_primes(1).expect("prime basis");
            let (nf, ng) = (rng.random_range(0..=4), rng.random_range(0..=4));
            let f = random_iet(&mut rng, &basis, nf);
            let g = random_iet(&mut rng, &basis, ng);
            if f.compose(&f.inverse()) != IntervalExchange::identity(&basis) {
                return Err(format!("f∘f⁻¹ ≠ id for f with {} pieces", f.num_pieces()));
            }
            let fg = f.compose(&g);
            for _ in 0..5 {
                let x = random_point(&mut rng, &basis);
                let direct = fg.evaluate(&x);
                let stepwise = f.evaluate(&g.evaluate(&x));
                if direct != stepwise {
                    return Err(format!("(f∘g)({x}) = {direct} ≠ f(g({x})) = {stepwise}"));
                }
            }
            Ok(())
        })
    };
    let containment = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 10);
        check("composition-breakpoint-containment", 120, move |_| {
            let basis = IrrationalBasis::sqrt_primes(1).expect("prime basis");
            let (nf, ng) = (rng.random_range(0..=3), rng.random_range(0..=3));
            let f = random_iet(&mut rng, &basis, nf);
            let g = random_iet(&mut rng, &basis, ng);
            let mut allowed: PointSet = g.breakpoints_circle();
            let g_inv = g.inverse();
            for y in f.breakpoints_circle() {
                allowed.insert(g_inv.evaluate(&y));
            }
            let actual = f.compose(&g).breakpoints_circle();
            if !actual.is_subset(&allowed) {
                return Err(format!(
                    "breakpoints of f∘g ⊄ bp(g) ∪ g⁻¹(bp(f)): extra {:?}",
                    actual.difference(&allowed).collect::<Vec<_>>()
                ));
            }
            Ok(())
        })
    };
    let lengths = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 11);
        check("rebuild-from-lengths", 120, move |_| {
            let basis = IrrationalBasis::sqrt_primes(1).expect("prime basis");
            // Random rational partition of [0,1) into 2–5 pieces.
            let den = rng.random_range(6..=24i64);
            let mut cut_nums: Vec<i64> = Vec::new();
            while cut_nums.len() < rng.random_range(1..=4usize) {
                let c = rng.random_range(1..den);
                if !cut_nums.contains(&c) {
                    cut_nums.push(c);
                }
            }
            cut_nums.sort_unstable();
            let mut boundaries = vec![0i64];
            boundaries.extend(&cut_nums);
            boundaries.push(den);
            let lengths: Vec<CircleValue> = boundaries
                .windows(2)
                .map(|w| CircleValue::rational(&basis, w[1] - w[0], den))
                .collect();
            let pi = random_perm(&mut rng, lengths.len());
            let f = IntervalExchange::from_lengths(&lengths, &pi).map_err(err)?;
            // Defining property: piece i starts at Σ_{j<i} λⱼ and lands at
            // Σ_{π(j)<π(i)} λⱼ.
            let mut start = CircleValue::zero(&basis);
            for i in 0..lengths.len() {
                let mut target = CircleValue::zero(&basis);
                for j in 0..lengths.len() {
                    if pi.apply(j) < pi.apply(i) {
                        target = target.add(&lengths[j]);
                    }
                }
                if f.evaluate(&start) != target {
                    return Err(format!(
                        "piece {i}: f({start}) = {} ≠ {target} (π = {pi})",
                        f.evaluate(&start)
                    ));
                }
                start = start.add(&lengths[i]);
            }
            Ok(())
        })
    };
    let grid_maps = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 12);
        check("grid-exchange-order-and-breakpoints", 120, move |_| {
            let basis = IrrationalBasis::sqrt_primes(1).expect("prime basis");
            let q = rng.random_range(2..=8usize);
            let tau = random_perm(&mut rng, q);
            let e = IntervalExchange::from_permutation(&basis, &tau);
            if !e.is_delta_rational() {
                return Err(format!("grid exchange for τ={tau} not Δ-rational"));
            }
            let expected_order = tau.order().max(1);
            let got = e.order(1_000).map_err(err)?;
            if got != expected_order {
                return Err(format!("order(E_τ) = {got} ≠ ord(τ) = {expected_order}"));
            }
            // Breakpoints sit on the grid.
            for bp in e.breakpoints_circle() {
                let reduced = bp.decompose_mod(q as u32).map_err(err)?.1;
                if !reduced.is_zero() {
                    return Err(format!("breakpoint {bp} of E_τ off the 1/{q} grid"));
                }
            }
            Ok(())
        })
    };
    vec![laws, containment, lengths, grid_maps]
}

// ----------------------------------------------------------------------
// tower: recomputed invariants of the solvable tower
// ----------------------------------------------------------------------

fn tower_suite() -> Vec<PropertyOutcome> {
    let recomputed = check("levels-recomputed", 4, |i| {
        let n = i as u32 + 1;
        let level = solvable_tower(n).map_err(err)?;
        let expected_order = num_bigint::BigUint::from(1u8) << ((1usize << n) - 1);
        if level.order != expected_order || level.derived_length != n {
            return Err(format!(
                "level {n}: order {} (expected {expected_order}), dl {}",
                level.order, level.derived_length
            ));
        }
        if !level.group.contains(&level.full_cycle_witness) {
            return Err(format!("level {n}: full cycle not a member"));
        }
        Ok(())
    });
    let recurrence = check("doubling-recurrence", 3, |i| {
        let n = i as u32 + 1;
        let this = solvable_tower(n).map_err(err)?;
        let next = solvable_tower(n + 1).map_err(err)?;
        let doubled = num_bigint::BigUint::from(2u8) * &this.order * &this.order;
        if next.order != doubled {
            return Err(format!(
                "|G(2^{})| = {} ≠ 2·|G(2^{n})|² = {doubled}",
                n + 1,
                next.order
            ));
        }
        Ok(())
    });
    let enumerated = check("enumeration-cross-check", 4, |i| {
        let n = i as u32 + 1;
        let level = solvable_tower(n).map_err(err)?;
        let elems = level
            .group
            .elements(40_000)
            .map_err(err)?;
        if num_bigint::BigUint::from(elems.len()) != level.order {
            return Err(format!(
                "level {n}: {} enumerated elements vs chain order {}",
                elems.len(),
                level.order
            ));
        }
        let mut dedup = elems;
        dedup.sort();
        dedup.dedup();
        if num_bigint::BigUint::from(dedup.len()) != level.order {
            return Err(format!("level {n}: transversal products collide"));
        }
        Ok(())
    });
    vec![recomputed, recurrence, enumerated]
}

// ======================================================================
// Tests
// ======================================================================

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        let outcomes = run_suites("all", DEFAULT_SEED).unwrap();
        assert_eq!(outcomes.len(), SUITE_NAMES.len());
        for suite in &outcomes {
            for property in &suite.properties {
                assert!(
                    property.passed,
                    "{} / {}: {:?}",
                    suite.suite, property.property, property.counterexample
                );
            }
            assert!(suite.passed);
        }
    }

    #[test]
    fn suite_selection_and_unknown_names() {
        let one = run_suites("wreath-ab", 7).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].suite, "wreath-ab");
        assert!(one[0].passed);
        assert!(matches!(
            run_suites("nonsense", 7),
            Err(IetError::Schema(_))
        ));
    }

    #[test]
    fn case_counts_meet_the_contract() {
        // Conjugation: 200 random instances each form; morphism and profile
        // properties: at least 100; w0: 50 random trials.
        let by_name = |suite: &str| {
            run_suites(suite, DEFAULT_SEED).unwrap().remove(0)
        };
        for p in by_name("conjugation").properties {
            assert!(p.passed && p.cases == 200, "{p:?}");
        }
        for p in by_name("morphism").properties {
            assert!(p.passed && p.cases >= 100, "{p:?}");
        }
        for p in by_name("profiles").properties {
            assert!(p.passed && p.cases >= 100, "{p:?}");
        }
        let w0 = by_name("w0");
        assert!(w0.properties[0].cases == 50 && w0.properties[0].passed);
    }

    #[test]
    fn failures_carry_counterexamples() {
        let outcome = check("always-fails", 5, |i| {
            if i < 3 {
                Ok(())
            } else {
                Err("boom".to_string())
            }
        });
        assert!(!outcome.passed);
        assert_eq!(outcome.cases, 3);
        assert_eq!(outcome.counterexample.as_deref(), Some("boom"));
    }
}
