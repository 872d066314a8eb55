//! Classification reports: structural flags of a generated rotation/exchange
//! group, its abelianization, and non-isomorphism evidence between two specs.
//!
//! Every verdict is backed by a certificate describing the group-theoretic
//! rule that produced it, with the finite data (orders, derived lengths,
//! witness words) recomputed rather than asserted. Verdicts the implemented
//! criteria cannot settle are reported as `undetermined-by-criteria`, never
//! guessed.

use std::sync::Arc;

use num_integer::Integer;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{IetError, Result};
use crate::exactnum::{CircleValue, IrrationalBasis};
use crate::haq::{
    default_probes, faithful_lamplighter_check, witness_search, GroupWord, HaqSpec, HaqSpecRepr,
    WitnessOutcome,
};
use crate::permgrp::{Perm, PermGroup};

// ======================================================================
// Options
// ======================================================================

#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    /// Element cap for subgroup enumerations (intersections, coset scans).
    pub closure_cap: usize,
    /// Maximum number of commutator blocks in a witness word.
    pub witness_budget: usize,
    /// Probe rotation amounts for the witness search; default one per grid
    /// interval.
    pub probes: Option<Vec<CircleValue>>,
    /// Number of random reduced words checked by the lamplighter
    /// faithfulness certificate.
    pub lamplighter_samples: usize,
    /// Seed for the sampling checks (fixed default keeps reports
    /// byte-deterministic).
    pub seed: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            closure_cap: 200_000,
            witness_budget: 6,
            probes: None,
            lamplighter_samples: 100,
            seed: 0x5eed,
        }
    }
}

// ======================================================================
// Report schema
// ======================================================================

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub spec: HaqSpecRepr,
    pub is_abelian: bool,
    pub solvable: Solvability,
    /// "yes", "no", or "undetermined-by-criteria".
    pub virtually_solvable: String,
    pub labels: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lamplighter: Option<Lamplighter>,
    pub abelianization: Abelianization,
    pub certificates: Vec<Certificate>,
    /// Stages cut short by a cap; nonempty reports are partial.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub incomplete: Vec<IncompleteStage>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Solvability {
    Solvable { dl: u32 },
    Nonsolvable { nonsolvable: bool },
}

#[derive(Debug, Clone, Serialize)]
pub struct Lamplighter {
    /// Abelian invariants of the lamp group L (isomorphic to the grid group).
    #[serde(rename = "L")]
    pub lamps: Vec<u64>,
    /// Rank of the base Z^k (the number of rotation generators).
    pub k: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Abelianization {
    pub free_rank: usize,
    /// Invariant factors of the finite part, or bounds when witnesses could
    /// not settle every coset; absent only when a cap interrupted the stage.
    #[serde(rename = "F", skip_serializing_if = "Option::is_none")]
    pub finite_part: Option<FinitePart>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum FinitePart {
    Resolved(Vec<u64>),
    Bounds { lower: Vec<u64>, upper: Vec<u64> },
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub rule: String,
    pub witness: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct IncompleteStage {
    pub stage: String,
    pub reason: String,
}

fn is_cap_error(e: &IetError) -> bool {
    matches!(
        e,
        IetError::ClosureCapExceeded { .. } | IetError::QuotientTooLarge(_)
    )
}

// ======================================================================
// classify
// ======================================================================

/// Applies the classification rules to a spec. Results are deterministic and
/// depend only on (q, grid generators, s): the rotation amounts enter solely
/// through probe windows whose combinatorics are fixed by the grid.
pub fn classify(spec: &Arc<HaqSpec>, options: &ClassifyOptions) -> Result<Report> {
    let sq = spec.sq_group();
    let w = spec.w_group();
    let v = spec.v_group();
    let mut certificates = Vec::new();
    let mut incomplete = Vec::new();

    // --- abelian / growth labels -------------------------------------
    let w_abelian = w.is_abelian();
    certificates.push(Certificate {
        rule: "abelian-iff-closure-abelian".into(),
        witness: json!({
            "W_order": w.order().to_string(),
            "W_abelian": w_abelian,
        }),
    });
    let labels: Vec<String> = if w_abelian {
        Vec::new()
    } else {
        certificates.push(Certificate {
            rule: "nonabelian-growth-labels".into(),
            witness: json!({ "W_abelian": false }),
        });
        [
            "elementary-amenable-EG2",
            "not-virtually-nilpotent",
            "free-semigroup",
            "exponential-growth",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect()
    };

    // --- solvability ---------------------------------------------------
    let w_dl = w.derived_length();
    let solvable = match w_dl {
        Some(p) => {
            let dl = p.max(1); // the rotation part keeps H nontrivial abelian at least
            certificates.push(Certificate {
                rule: "solvable-transfer".into(),
                witness: json!({ "W_derived_length": p, "dl": dl }),
            });
            Solvability::Solvable { dl }
        }
        None => {
            certificates.push(Certificate {
                rule: "solvable-transfer".into(),
                witness: json!({ "W_solvable": false }),
            });
            Solvability::Nonsolvable { nonsolvable: true }
        }
    };

    // --- virtual solvability --------------------------------------------
    let mut labels = labels;
    let virtually_solvable = match &solvable {
        Solvability::Solvable { .. } => "yes".to_string(),
        Solvability::Nonsolvable { .. } => {
            if spec.q() >= 5 && w.contains_alternating() {
                certificates.push(Certificate {
                    rule: "alternating-minorant".into(),
                    witness: json!({
                        "q": spec.q(),
                        "W_contains_alternating": true,
                    }),
                });
                labels.push("not-linear".to_string());
                "no".to_string()
            } else {
                "undetermined-by-criteria".to_string()
            }
        }
    };

    // --- lamplighter structure ------------------------------------------
    let lamplighter = if !sq.is_trivial() && v.is_abelian() {
        match lamplighter_verdict(spec, &sq, &v, options) {
            Ok((verdict, certificate)) => {
                certificates.push(certificate);
                Some(verdict)
            }
            Err(e) if is_cap_error(&e) => {
                incomplete.push(IncompleteStage {
                    stage: "lamplighter".into(),
                    reason: e.to_string(),
                });
                None
            }
            Err(e) => return Err(e),
        }
    } else {
        None
    };

    // --- abelianization ---------------------------------------------------
    let abelianization = match abelianization_with_certificates(spec, options) {
        Ok((ab, mut certs)) => {
            certificates.append(&mut certs);
            ab
        }
        Err(e) if is_cap_error(&e) => {
            incomplete.push(IncompleteStage {
                stage: "abelianization".into(),
                reason: e.to_string(),
            });
            Abelianization {
                free_rank: spec.s(),
                finite_part: None,
            }
        }
        Err(e) => return Err(e),
    };

    Ok(Report {
        spec: HaqSpecRepr::of(spec),
        is_abelian: w_abelian,
        solvable,
        virtually_solvable,
        labels,
        lamplighter,
        abelianization,
        certificates,
        incomplete,
    })
}

fn lamplighter_verdict(
    spec: &Arc<HaqSpec>,
    sq: &PermGroup,
    v: &PermGroup,
    options: &ClassifyOptions,
) -> Result<(Lamplighter, Certificate)> {
    let lamps = sq.abelian_invariants(options.closure_cap)?;
    let faithful = faithful_lamplighter_check(spec, options.lamplighter_samples, options.seed)?;
    let certificate = Certificate {
        rule: "abelian-kernel-image".into(),
        witness: json!({
            "V_order": v.order().to_string(),
            "V_abelian": true,
            "faithfulness": {
                "samples": options.lamplighter_samples,
                "passed": faithful,
            },
        }),
    };
    Ok((
        Lamplighter {
            lamps,
            k: spec.s(),
        },
        certificate,
    ))
}

// ======================================================================
// Abelianization
// ======================================================================

/// The abelianization splits as (finite part) × Z^s. The finite part is the
/// grid group modulo the normal subgroup of exchanges that are products of
/// commutators; that subgroup is bracketed between the grid group's own
/// derived subgroup and the intersection of [W,W] with the grid group, and
/// witness words promote elements of the gap into the resolved kernel.
pub fn abelianization(spec: &Arc<HaqSpec>, options: &ClassifyOptions) -> Result<Abelianization> {
    abelianization_with_certificates(spec, options).map(|(ab, _)| ab)
}

fn abelianization_with_certificates(
    spec: &Arc<HaqSpec>,
    options: &ClassifyOptions,
) -> Result<(Abelianization, Vec<Certificate>)> {
    let mut certificates = vec![Certificate {
        rule: "torsion-rotation-splitting".into(),
        witness: json!({ "free_rank": spec.s() }),
    }];

    let sq = spec.sq_group();
    if sq.is_trivial() {
        certificates.push(Certificate {
            rule: "finite-part-kernel-bounds".into(),
            witness: json!({ "grid_group_trivial": true }),
        });
        return Ok((
            Abelianization {
                free_rank: spec.s(),
                finite_part: Some(FinitePart::Resolved(Vec::new())),
            },
            certificates,
        ));
    }

    let n_lower = sq.derived_subgroup();
    let sigma = Perm::sigma_cycle(spec.q() as usize);

    // With the full cycle inside the grid group, W equals the grid group and
    // the two kernel bounds coincide with its derived subgroup.
    if sq.contains(&sigma) {
        let invariants = sq.abelian_invariants_mod(&n_lower, options.closure_cap)?;
        certificates.push(Certificate {
            rule: "finite-part-kernel-bounds".into(),
            witness: json!({
                "full_cycle_in_grid_group": true,
                "N_lower_order": n_lower.order().to_string(),
                "N_upper_order": n_lower.order().to_string(),
                "resolved": true,
            }),
        });
        return Ok((
            Abelianization {
                free_rank: spec.s(),
                finite_part: Some(FinitePart::Resolved(invariants)),
            },
            certificates,
        ));
    }

    let w_derived = spec.w_group().derived_subgroup();
    let n_upper = w_derived.intersection(&sq, options.closure_cap)?;

    if n_lower.same_group(&n_upper) {
        let invariants = sq.abelian_invariants_mod(&n_upper, options.closure_cap)?;
        certificates.push(Certificate {
            rule: "finite-part-kernel-bounds".into(),
            witness: json!({
                "N_lower_order": n_lower.order().to_string(),
                "N_upper_order": n_upper.order().to_string(),
                "resolved": true,
            }),
        });
        return Ok((
            Abelianization {
                free_rank: spec.s(),
                finite_part: Some(FinitePart::Resolved(invariants)),
            },
            certificates,
        ));
    }

    // Gap between the bounds: try to certify each outstanding element of the
    // upper bound as a commutator product; every hit enlarges the resolved
    // kernel (any subgroup between the bounds is normal, the quotient being
    // abelian).
    let probes = match &options.probes {
        Some(p) => p.clone(),
        None => default_probes(spec)?,
    };
    let mut resolved = n_lower.clone();
    let mut witnesses = Vec::new();
    let mut unresolved = Vec::new();
    for element in n_upper.elements(options.closure_cap)? {
        if element.is_identity() || resolved.contains(&element) {
            continue;
        }
        match witness_search(spec, &element, options.witness_budget, &probes)? {
            WitnessOutcome::Found(witness) => {
                witnesses.push(json!({
                    "target": element.to_string(),
                    "length": witness.length,
                    "blocks": witness.blocks,
                }));
                let mut gens = resolved.generators().to_vec();
                gens.push(element);
                resolved = PermGroup::new(sq.degree(), gens);
            }
            WitnessOutcome::Unresolved { .. } => {
                unresolved.push(element.to_string());
            }
            WitnessOutcome::Impossible { reason } => {
                // The upper bound kept the element eligible; a parity-style
                // obstruction here would contradict it.
                return Err(IetError::MorphismCrossCheck(reason));
            }
        }
    }

    let fully_resolved = resolved.same_group(&n_upper);
    let finite_part = if fully_resolved {
        FinitePart::Resolved(sq.abelian_invariants_mod(&n_upper, options.closure_cap)?)
    } else {
        FinitePart::Bounds {
            lower: sq.abelian_invariants_mod(&n_upper, options.closure_cap)?,
            upper: sq.abelian_invariants_mod(&resolved, options.closure_cap)?,
        }
    };
    certificates.push(Certificate {
        rule: "finite-part-kernel-bounds".into(),
        witness: json!({
            "N_lower_order": n_lower.order().to_string(),
            "N_upper_order": n_upper.order().to_string(),
            "resolved_order": resolved.order().to_string(),
            "resolved": fully_resolved,
            "witnesses": witnesses,
            "unresolved": unresolved,
            "witness_budget": options.witness_budget,
        }),
    });
    Ok((
        Abelianization {
            free_rank: spec.s(),
            finite_part: Some(finite_part),
        },
        certificates,
    ))
}

// ======================================================================
// Translation-module coordinates
// ======================================================================

/// The rotation-coefficient vector 𝔫(f): the coordinates of the word's
/// translation number in the module generated by the αᵢ, and (for these
/// groups) a faithful coordinate of its scissors-congruence invariant.
pub fn saf_of(f: &GroupWord) -> Result<Vec<i64>> {
    f.ell()?; // cross-checks the realization before trusting the letters
    Ok(f.rotation_coefficients())
}

/// Canonical signature of the module generated by the basis values over ℤ:
/// per squarefree core, the gcd of the integer multipliers. Two bases
/// generate the same subgroup of the circle iff their signatures agree.
pub fn translation_module_signature(basis: &IrrationalBasis) -> Vec<(u64, u64)> {
    let mut per_core: Vec<(u64, u64)> = Vec::new();
    for i in 0..basis.s() {
        let (core, multiplier) = basis.core_and_multiplier(i);
        match per_core.iter_mut().find(|(c, _)| *c == core) {
            Some((_, g)) => *g = g.gcd(&multiplier),
            None => per_core.push((core, multiplier)),
        }
    }
    per_core.sort_unstable();
    per_core
}

// ======================================================================
// Non-isomorphism evidence
// ======================================================================

#[derive(Debug, Clone, Serialize)]
pub struct Evidence {
    pub kind: String,
    pub conclusion: String,
    pub detail: Value,
}

/// Compares two specs and returns every piece of non-isomorphism (or
/// non-conjugacy) evidence the implemented criteria yield. An empty list
/// means "no evidence", never "isomorphic".
pub fn non_isomorphism(
    a: &Arc<HaqSpec>,
    b: &Arc<HaqSpec>,
    options: &ClassifyOptions,
) -> Result<Vec<Evidence>> {
    let mut evidence = Vec::new();

    if a.s() != b.s() {
        evidence.push(Evidence {
            kind: "free-rank".into(),
            conclusion: "not-isomorphic".into(),
            detail: json!({ "s_left": a.s(), "s_right": b.s() }),
        });
    }

    let sig_a = translation_module_signature(a.basis());
    let sig_b = translation_module_signature(b.basis());
    if sig_a != sig_b {
        evidence.push(Evidence {
            kind: "translation-module".into(),
            conclusion: "not-conjugate".into(),
            detail: json!({
                "module_left": module_signature_json(&sig_a),
                "module_right": module_signature_json(&sig_b),
            }),
        });
    }

    let sq_a = a.sq_group();
    let sq_b = b.sq_group();
    let sigma_a = Perm::sigma_cycle(a.q() as usize);
    let sigma_b = Perm::sigma_cycle(b.q() as usize);
    if sq_a.contains(&sigma_a) && sq_b.contains(&sigma_b) {
        let f_a = sq_a.abelian_invariants_mod(&sq_a.derived_subgroup(), options.closure_cap)?;
        let f_b = sq_b.abelian_invariants_mod(&sq_b.derived_subgroup(), options.closure_cap)?;
        if f_a != f_b {
            evidence.push(Evidence {
                kind: "finite-abelianization".into(),
                conclusion: "not-isomorphic".into(),
                detail: json!({ "F_left": f_a, "F_right": f_b }),
            });
        }
    }

    Ok(evidence)
}

fn module_signature_json(sig: &[(u64, u64)]) -> Value {
    Value::Array(
        sig.iter()
            .map(|(core, multiplier)| json!({ "core": core, "multiplier": multiplier }))
            .collect(),
    )
}

// ======================================================================
// Tests
// ======================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::IrrationalBasis;

    fn spec(q: u32, gens: &[&str], s: usize) -> Arc<HaqSpec> {
        let basis = IrrationalBasis::sqrt_primes(s).unwrap();
        spec_on(q, gens, basis)
    }

    fn spec_on(q: u32, gens: &[&str], basis: Arc<IrrationalBasis>) -> Arc<HaqSpec> {
        let qgens = gens
            .iter()
            .map(|g| Perm::parse_cycles(g, q as usize).unwrap())
            .collect();
        HaqSpec::new(q, qgens, basis).unwrap()
    }

    fn resolved(report: &Report) -> &[u64] {
        match report.abelianization.finite_part.as_ref().unwrap() {
            FinitePart::Resolved(inv) => inv,
            other => panic!("expected resolved finite part, got {other:?}"),
        }
    }

    #[test]
    fn metabelian_grid_three() {
        let report = classify(&spec(3, &["(1,3)"], 1), &ClassifyOptions::default()).unwrap();
        assert!(!report.is_abelian);
        assert!(matches!(report.solvable, Solvability::Solvable { dl: 2 }));
        assert_eq!(report.virtually_solvable, "yes");
        assert!(report.lamplighter.is_none()); // V = S₃ is not abelian
        assert_eq!(report.abelianization.free_rank, 1);
        assert_eq!(resolved(&report), &[2]);
        assert!(report.incomplete.is_empty());
    }

    #[test]
    fn lamplighter_grid_four() {
        let report = classify(&spec(4, &["(1,3)"], 1), &ClassifyOptions::default()).unwrap();
        assert!(matches!(report.solvable, Solvability::Solvable { dl: 2 }));
        let lamp = report.lamplighter.as_ref().expect("lamplighter verdict");
        assert_eq!(lamp.lamps, vec![2]);
        assert_eq!(lamp.k, 1);
        assert_eq!(resolved(&report), &[2]);
        let cert = report
            .certificates
            .iter()
            .find(|c| c.rule == "abelian-kernel-image")
            .unwrap();
        assert_eq!(cert.witness["faithfulness"]["passed"], Value::Bool(true));
        assert_eq!(cert.witness["V_order"], Value::String("4".into()));
    }

    #[test]
    fn pair_of_transpositions_resolves_by_witness() {
        let s = spec(4, &["(1,2)", "(3,4)"], 1);
        let report = classify(&s, &ClassifyOptions::default()).unwrap();
        assert!(matches!(report.solvable, Solvability::Solvable { dl: 3 }));
        assert_eq!(resolved(&report), &[2]);
        let cert = report
            .certificates
            .iter()
            .find(|c| c.rule == "finite-part-kernel-bounds")
            .unwrap();
        assert_eq!(cert.witness["resolved"], Value::Bool(true));
        assert_eq!(cert.witness["N_upper_order"], Value::String("2".into()));
        let witnesses = cert.witness["witnesses"].as_array().unwrap();
        assert_eq!(witnesses.len(), 1);
        assert_eq!(witnesses[0]["target"], Value::String("(1,2)(3,4)".into()));
        assert_eq!(witnesses[0]["length"], json!(3));

        // With no witness budget the gap stays open and bounds are reported.
        let opts = ClassifyOptions {
            witness_budget: 0,
            ..ClassifyOptions::default()
        };
        let bounded = classify(&s, &opts).unwrap();
        assert_eq!(
            *bounded.abelianization.finite_part.as_ref().unwrap(),
            FinitePart::Bounds {
                lower: vec![2],
                upper: vec![2, 2],
            }
        );
    }

    #[test]
    fn not_virtually_solvable_family() {
        let report = classify(&spec(5, &["(1,2)"], 1), &ClassifyOptions::default()).unwrap();
        assert!(matches!(report.solvable, Solvability::Nonsolvable { .. }));
        assert_eq!(report.virtually_solvable, "no");
        assert!(report.labels.iter().any(|l| l == "not-linear"));
        assert!(report.labels.iter().any(|l| l == "exponential-growth"));
        assert_eq!(resolved(&report), &[2]); // bounds coincide: A₅ ∩ ⟨(1,2)⟩ is trivial

        // Perfect grid group: trivial finite part.
        let alt = spec(5, &["(1,2,3)", "(3,4,5)"], 1);
        let report = classify(&alt, &ClassifyOptions::default()).unwrap();
        assert_eq!(report.virtually_solvable, "no");
        assert!(resolved(&report).is_empty());

        // Full symmetric grid group: fast path via the full cycle.
        let full = spec(5, &["(1,2)", "(1,2,3,4,5)"], 1);
        let report = classify(&full, &ClassifyOptions::default()).unwrap();
        assert_eq!(resolved(&report), &[2]);
    }

    #[test]
    fn empty_grid_group_is_abelian_free() {
        let report = classify(&spec(4, &[], 2), &ClassifyOptions::default()).unwrap();
        assert!(report.is_abelian);
        assert!(matches!(report.solvable, Solvability::Solvable { dl: 1 }));
        assert_eq!(report.virtually_solvable, "yes");
        assert!(report.labels.is_empty());
        assert!(report.lamplighter.is_none());
        assert_eq!(report.abelianization.free_rank, 2);
        assert!(resolved(&report).is_empty());
    }

    #[test]
    fn caps_yield_partial_reports() {
        let s = spec(4, &["(1,2)", "(3,4)"], 1);
        let opts = ClassifyOptions {
            closure_cap: 2,
            ..ClassifyOptions::default()
        };
        let report = classify(&s, &opts).unwrap();
        assert!(report
            .incomplete
            .iter()
            .any(|stage| stage.stage == "abelianization"));
        assert!(report.abelianization.finite_part.is_none());
        // The structural flags are still present.
        assert!(matches!(report.solvable, Solvability::Solvable { dl: 3 }));
    }

    #[test]
    fn reports_are_deterministic_and_realization_independent() {
        let options = ClassifyOptions::default();
        let one = classify(&spec(3, &["(1,3)"], 1), &options).unwrap();
        let two = classify(&spec(3, &["(1,3)"], 1), &options).unwrap();
        assert_eq!(
            serde_json::to_string(&one).unwrap(),
            serde_json::to_string(&two).unwrap()
        );

        let alt_basis = IrrationalBasis::from_radicands(vec![3]).unwrap();
        let alt = classify(&spec_on(3, &["(1,3)"], alt_basis), &options).unwrap();
        let mut left = serde_json::to_value(&one).unwrap();
        let mut right = serde_json::to_value(&alt).unwrap();
        left.as_object_mut().unwrap().remove("spec");
        right.as_object_mut().unwrap().remove("spec");
        assert_eq!(left, right);
    }

    #[test]
    fn saf_coordinates() {
        let s = spec(4, &["(1,3)"], 2);
        let r1 = GroupWord::rotation_gen(&s, 0);
        let e = crate::haq::GroupWord::generator(&s, 0).unwrap();
        assert_eq!(saf_of(&r1).unwrap(), vec![1, 0]);
        assert_eq!(saf_of(&e).unwrap(), vec![0, 0]);
        let f = r1.compose(&r1).compose(&GroupWord::rotation_gen(&s, 1));
        assert_eq!(saf_of(&f).unwrap(), vec![2, 1]);
        // Additivity under composition.
        let g = f.inverse();
        let sum: Vec<i64> = saf_of(&f)
            .unwrap()
            .iter()
            .zip(saf_of(&g).unwrap())
            .map(|(x, y)| x + y)
            .collect();
        assert_eq!(saf_of(&f.compose(&g)).unwrap(), sum);
    }

    #[test]
    fn module_signatures_detect_scaled_bases() {
        let sqrt2 = IrrationalBasis::from_radicands(vec![2]).unwrap();
        let sqrt8 = IrrationalBasis::from_radicands(vec![8]).unwrap();
        assert_eq!(translation_module_signature(&sqrt2), vec![(2, 1)]);
        assert_eq!(translation_module_signature(&sqrt8), vec![(2, 2)]);
        let mixed = IrrationalBasis::from_radicands(vec![12, 5]).unwrap();
        assert_eq!(translation_module_signature(&mixed), vec![(3, 2), (5, 1)]);
    }

    #[test]
    fn non_isomorphism_evidence() {
        let options = ClassifyOptions::default();

        // Different free rank.
        let a = spec(4, &["(1,3)"], 1);
        let b = spec(4, &["(1,3)"], 2);
        let ev = non_isomorphism(&a, &b, &options).unwrap();
        assert!(ev.iter().any(|e| e.kind == "free-rank"));

        // Identical specs: no evidence.
        assert!(non_isomorphism(&a, &a.clone(), &options).unwrap().is_empty());

        // Same rank, different module: non-conjugacy evidence only.
        let b8 = spec_on(4, &["(1,3)"], IrrationalBasis::from_radicands(vec![8]).unwrap());
        let ev = non_isomorphism(&a, &b8, &options).unwrap();
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].kind, "translation-module");
        assert_eq!(ev[0].conclusion, "not-conjugate");

        // Symmetric vs alternating grid groups over q=5 (both contain the
        // full cycle): finite parts [2] vs [] separate them.
        let sym = spec(5, &["(1,2)", "(1,2,3,4,5)"], 1);
        let alt = spec(5, &["(1,2,3,4,5)", "(1,2,3)"], 1);
        let ev = non_isomorphism(&sym, &alt, &options).unwrap();
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].kind, "finite-abelianization");
        assert_eq!(ev[0].detail["F_left"], json!([2]));
        assert_eq!(ev[0].detail["F_right"], json!([]));
    }
}
