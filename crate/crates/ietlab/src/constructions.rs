//! Builders for the named example families: the iterated-wreath solvable
//! tower inside S_{2ⁿ}, the classic lamplighter spec, and a catalog of
//! ready-made specs addressable by name from the CLI.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::error::{IetError, Result};
use crate::exactnum::IrrationalBasis;
use crate::haq::HaqSpec;
use crate::permgrp::{Perm, PermGroup};

// ======================================================================
// Solvable tower
// ======================================================================

/// One verified level of the solvable tower: a subgroup of S_{2ⁿ} containing
/// the full cycle, of order 2^(2ⁿ−1) and derived length exactly n. The order
/// and derived length are recomputed from the generators, not trusted.
#[derive(Debug, Clone)]
pub struct TowerLevel {
    pub n: u32,
    pub degree: usize,
    pub group: PermGroup,
    /// The full cycle σ_{2ⁿ}, re-verified to lie in the group.
    pub full_cycle_witness: Perm,
    pub order: BigUint,
    pub derived_length: u32,
}

/// Builds level n of the tower. Levels 1–4 are small enough to enumerate;
/// levels 5 and 6 (orders 2³¹ and 2⁶³) rely on the stabilizer chain for
/// order, membership, and the derived series.
pub fn solvable_tower(n: u32) -> Result<TowerLevel> {
    if !(1..=6).contains(&n) {
        return Err(IetError::TowerRange(n));
    }
    let degree = 1usize << n;
    let group = PermGroup::new(degree, tower_generators(n));
    let full_cycle_witness = Perm::sigma_cycle(degree);
    assert!(
        group.contains(&full_cycle_witness),
        "tower level {n} lost the full cycle"
    );
    let order = group.order();
    assert_eq!(
        order,
        BigUint::one() << (degree - 1),
        "tower level {n} order must be 2^(2^n - 1)"
    );
    let derived_length = group
        .derived_length()
        .expect("tower levels are solvable by construction");
    assert_eq!(derived_length, n, "tower level derived length must equal n");
    Ok(TowerLevel {
        n,
        degree,
        group,
        full_cycle_witness,
        order,
        derived_length,
    })
}

/// Generators of the level-n group, already conjugated so the standard full
/// cycle lies in the group.
fn tower_generators(n: u32) -> Vec<Perm> {
    let mut gens = vec![Perm::sigma_cycle(2)];
    let mut degree = 2usize;
    for _ in 1..n {
        gens = double_level(&gens, degree);
        degree *= 2;
    }
    gens
}

/// One doubling step: embed two copies of the previous level side by side on
/// {1..h} and {h+1..2h}, adjoin the block swap τ = (σ_{2h})^h, and conjugate
/// everything so that the 2h-cycle τΠ₁ becomes the standard full cycle,
/// where Π₁ is the previous full cycle acting on the first block only.
fn double_level(prev: &[Perm], h: usize) -> Vec<Perm> {
    let d = 2 * h;
    let mut gens: Vec<Perm> = Vec::new();
    for g in prev {
        let mut images: Vec<usize> = (1..=d).collect();
        for i in 0..h {
            images[i] = g.apply(i) + 1;
        }
        gens.push(Perm::from_one_line(&images).unwrap());
    }
    for g in prev {
        let mut images: Vec<usize> = (1..=d).collect();
        for i in 0..h {
            images[h + i] = h + g.apply(i) + 1;
        }
        gens.push(Perm::from_one_line(&images).unwrap());
    }
    let tau_images: Vec<usize> = (0..d).map(|i| (i + h) % d + 1).collect();
    let tau = Perm::from_one_line(&tau_images).unwrap();
    gens.push(tau.clone());

    let mut pi1_images: Vec<usize> = (1..=d).collect();
    for i in 0..h {
        pi1_images[i] = (i + 1) % h + 1;
    }
    let pi1 = Perm::from_one_line(&pi1_images).unwrap();
    let s = tau.compose(&pi1);

    // Map the orbit 0, s(0), s²(0), … onto 0, 1, 2, …: the conjugator c with
    // c∘s∘c⁻¹ = σ_{2h}.
    let mut conj_images = vec![0usize; d];
    let mut x = 0usize;
    for j in 0..d {
        assert_eq!(conj_images[x], 0, "τΠ₁ must be a full 2h-cycle");
        conj_images[x] = j + 1;
        x = s.apply(x);
    }
    assert_eq!(x, 0, "τΠ₁ must close up after 2h steps");
    let c = Perm::from_one_line(&conj_images).unwrap();
    gens.iter().map(|g| g.conjugate_by(&c)).collect()
}

/// Wire form of a tower level: generators in cycle notation plus the
/// recomputed invariants.
#[derive(Debug, Clone, Serialize)]
pub struct TowerLevelRepr {
    pub n: u32,
    pub degree: usize,
    pub generators: Vec<String>,
    pub full_cycle: String,
    pub order: String,
    pub derived_length: u32,
}

impl TowerLevelRepr {
    pub fn of(level: &TowerLevel) -> Self {
        TowerLevelRepr {
            n: level.n,
            degree: level.degree,
            generators: level
                .group
                .generators()
                .iter()
                .map(|g| g.to_string())
                .collect(),
            full_cycle: level.full_cycle_witness.to_string(),
            order: level.order.to_string(),
            derived_length: level.derived_length,
        }
    }
}

// ======================================================================
// Named specs
// ======================================================================

/// The worked lamplighter example: one rotation and the half-turn grid
/// exchange at q = 4.
pub fn lamplighter_spec() -> Arc<HaqSpec> {
    named_spec(4, &["(1,3)"], 1)
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub spec: Arc<HaqSpec>,
}

/// The named example specs, all over the single-rotation realization: the
/// metabelian and lamplighter worked examples, the 3-solvable q=4 family,
/// the non-virtually-solvable families for q ∈ {5,6,7} (one transposition,
/// full symmetric, alternating), and the tower levels 1–4 wrapped as grid
/// groups.
pub fn catalog() -> Vec<CatalogEntry> {
    let mut entries = vec![
        CatalogEntry {
            name: "metabelian-q3".into(),
            spec: named_spec(3, &["(1,3)"], 1),
        },
        CatalogEntry {
            name: "lamplighter-q4".into(),
            spec: lamplighter_spec(),
        },
        CatalogEntry {
            name: "3solv-q4-pair".into(),
            spec: named_spec(4, &["(1,2)", "(3,4)"], 1),
        },
        CatalogEntry {
            name: "3solv-q4-single".into(),
            spec: named_spec(4, &["(1,2)"], 1),
        },
        CatalogEntry {
            name: "3solv-S4".into(),
            spec: named_spec(4, &["(1,2)", "(1,2,3,4)"], 1),
        },
        CatalogEntry {
            name: "nvs-q5-transposition".into(),
            spec: named_spec(5, &["(1,2)"], 1),
        },
    ];
    for q in [5u32, 6, 7] {
        let sigma = Perm::sigma_cycle(q as usize).to_string();
        entries.push(CatalogEntry {
            name: format!("nvs-S{q}"),
            spec: named_spec(q, &["(1,2)", &sigma], 1),
        });
        let three_cycles: Vec<String> = (1..=q - 2)
            .map(|i| format!("({},{},{})", i, i + 1, i + 2))
            .collect();
        let refs: Vec<&str> = three_cycles.iter().map(String::as_str).collect();
        entries.push(CatalogEntry {
            name: format!("nvs-A{q}"),
            spec: named_spec(q, &refs, 1),
        });
    }
    for n in 1..=4u32 {
        let basis = IrrationalBasis::sqrt_primes(1).expect("singleton prime basis");
        let spec = HaqSpec::new(1 << n, tower_generators(n), basis)
            .expect("tower generators form a valid spec");
        entries.push(CatalogEntry {
            name: format!("tower-{n}"),
            spec,
        });
    }
    entries
}

/// Looks up a catalog spec by name.
pub fn catalog_entry(name: &str) -> Result<Arc<HaqSpec>> {
    catalog()
        .into_iter()
        .find(|e| e.name == name)
        .map(|e| e.spec)
        .ok_or_else(|| IetError::UnknownCatalogEntry(name.to_string()))
}

fn named_spec(q: u32, cycle_gens: &[&str], s: usize) -> Arc<HaqSpec> {
    let basis = IrrationalBasis::sqrt_primes(s).expect("prime basis");
    let gens = cycle_gens
        .iter()
        .map(|text| Perm::parse_cycles(text, q as usize).expect("catalog generator"))
        .collect();
    HaqSpec::new(q, gens, basis).expect("catalog spec is well-formed")
}

// ======================================================================
// Tests
// ======================================================================
