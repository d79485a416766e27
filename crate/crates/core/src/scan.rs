//! Exhaustive consistency scan over all minimal coprime triples with
//! `d3 <= dmax`: closed forms against Apéry-set invariants, the symmetry
//! criteria against each other, and the classical inequalities.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::gcd_all;
use crate::brute;
use crate::error::{Error, Result};
use crate::relations::{self, ClosedForms};
use crate::semigroup::{self, GeneratorTuple};

const MAX_EXAMPLES: usize = 20;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub dmax: u64,
    pub verified_by_enumeration: bool,
    pub triples: u64,
    pub symmetric: u64,
    pub nonsymmetric: u64,
    /// Closed-form conductor differs from the Apéry-set conductor.
    pub conductor_mismatches: u64,
    pub genus_mismatches: u64,
    /// `2G - C != min{A3, B3}`.
    pub min_identity_violations: u64,
    /// `(u, w)` does not reproduce the labelled triple, or could not be built.
    pub round_trip_failures: u64,
    /// `2G = C`, the pair criterion and `t = 1` disagree.
    pub symmetry_criteria_disagreements: u64,
    /// `G > nongaps * t`.
    pub genus_type_bound_violations: u64,
    /// The conductor lower bound exceeds `C`.
    pub lower_bound_violations: u64,
    /// `G = nongaps` but not symmetric, or the reverse.
    pub symmetric_genus_violations: u64,
    /// `G = 2 nongaps` but not of the form `(3, 3k+1, 3k+2)`, or the reverse.
    pub family_violations: u64,
    /// Symmetric but the derived semigroup needs three generators, or the reverse.
    pub derived_generator_violations: u64,
    /// Symmetric triples whose derived semigroup is generated by a single element.
    pub derived_single_generator: u64,
    /// Pairwise coprime but symmetric.
    pub pairwise_coprime_violations: u64,
    /// Type outside `{1, 2}`.
    pub type_violations: u64,
    /// Apéry-set invariants differ from direct enumeration (only with verification).
    pub enumeration_mismatches: u64,
    /// Triples with `2 nongaps - G = 1`.
    pub unit_defect: Vec<[u64; 3]>,
    pub examples: Vec<String>,
}

impl ScanReport {
    /// Every checked relation held.
    pub fn is_clean(&self) -> bool {
        self.conductor_mismatches
            + self.genus_mismatches
            + self.min_identity_violations
            + self.round_trip_failures
            + self.symmetry_criteria_disagreements
            + self.genus_type_bound_violations
            + self.lower_bound_violations
            + self.symmetric_genus_violations
            + self.family_violations
            + self.derived_generator_violations
            + self.pairwise_coprime_violations
            + self.type_violations
            + self.enumeration_mismatches
            == 0
    }
}

/// Sorted minimal coprime triples with largest element at most `dmax`.
pub fn minimal_triples(dmax: u64) -> Vec<[u64; 3]> {
    let mut out = Vec::new();
    for d3 in 5..=dmax {
        for d2 in 4..d3 {
            for d1 in 3..d2 {
                let d = [d1, d2, d3];
                if gcd_all(&d) == 1 && semigroup::is_minimal_generating_set(&d) {
                    out.push(d);
                }
            }
        }
    }
    out
}

fn is_family(d: [u64; 3]) -> bool {
    d[0] == 3 && d[1] % 3 == 1 && d[2] == d[1] + 1
}

#[derive(Default)]
struct Outcome {
    symmetric: bool,
    flags: Vec<(&'static str, bool)>,
    derived_single: bool,
    unit_defect: bool,
}

fn examine(d: [u64; 3], verify: bool) -> Result<Outcome> {
    let gens = GeneratorTuple::from_slice(&d)?;
    let prof = semigroup::profile(&gens)?;
    let (c, g, ng, t) = (prof.conductor, prof.genus, prof.nongaps, prof.type_ as u64);
    let symmetric = 2 * g == c;
    let mut flags = Vec::new();

    let pair_criterion = semigroup::is_symmetric_by_pair_criterion(&gens)?;
    flags.push((
        "symmetry criteria",
        symmetric != pair_criterion || symmetric != (t == 1),
    ));
    flags.push(("genus/type bound", g > ng * t));
    flags.push(("type", !(1..=2).contains(&t)));
    let bound = relations::conductor_lower_bound(&gens, symmetric)?;
    flags.push(("lower bound", bound > c as f64));
    flags.push(("symmetric genus", (g == ng) != symmetric));
    flags.push(("family", (g == 2 * ng) != is_family(d)));
    let derived = semigroup::derived_semigroup(&gens)?;
    flags.push((
        "derived generators",
        (derived.minimal_generator_count <= 2) != symmetric,
    ));
    let pairwise_coprime = derived.pairwise_gcds.iter().all(|&x| x == 1);
    flags.push(("pairwise coprime", pairwise_coprime && symmetric));

    if !symmetric {
        match relations::uw_decomposition(&gens) {
            Ok(uw) => {
                let forms = ClosedForms::evaluate(&uw)?;
                flags.push(("round trip", uw.generators()? != d));
                flags.push(("conductor", forms.conductor != c as i128));
                flags.push(("genus", forms.twice_genus != 2 * g as i128));
                flags.push(("min identity", 2 * g as i128 - c as i128 != forms.min_term as i128));
            }
            Err(_) => flags.push(("round trip", true)),
        }
    }
    if verify {
        let b = brute::profile(&d);
        let same = b.frobenius == prof.frobenius
            && b.genus == g
            && b.gaps == prof.gaps
            && b.pseudo_frobenius == prof.pseudo_frobenius;
        flags.push(("enumeration", !same));
    }
    Ok(Outcome {
        symmetric,
        flags,
        derived_single: symmetric && derived.minimal_generator_count == 1,
        unit_defect: prof.nongap_defect() == 1,
    })
}

/// Scan all minimal coprime triples with `d3 <= dmax`. With `verify`, the
/// Apéry-set invariants are also recomputed by direct enumeration.
pub fn scan(dmax: u64, verify: bool) -> Result<ScanReport> {
    if dmax < 5 {
        return Err(Error::Domain(format!("dmax must be at least 5, got {dmax}")));
    }
    let triples = minimal_triples(dmax);
    let outcomes: Vec<Outcome> = triples.par_iter().map(|&d| examine(d, verify)).collect::<Result<_>>()?;
    let mut rep = ScanReport {
        dmax,
        verified_by_enumeration: verify,
        ..Default::default()
    };
    for (d, o) in triples.iter().zip(outcomes) {
        rep.triples += 1;
        if o.symmetric {
            rep.symmetric += 1;
        } else {
            rep.nonsymmetric += 1;
        }
        rep.derived_single_generator += o.derived_single as u64;
        if o.unit_defect {
            rep.unit_defect.push(*d);
        }
        for (name, failed) in o.flags {
            if !failed {
                continue;
            }
            let counter = match name {
                "symmetry criteria" => &mut rep.symmetry_criteria_disagreements,
                "genus/type bound" => &mut rep.genus_type_bound_violations,
                "type" => &mut rep.type_violations,
                "lower bound" => &mut rep.lower_bound_violations,
                "symmetric genus" => &mut rep.symmetric_genus_violations,
                "family" => &mut rep.family_violations,
                "derived generators" => &mut rep.derived_generator_violations,
                "pairwise coprime" => &mut rep.pairwise_coprime_violations,
                "round trip" => &mut rep.round_trip_failures,
                "conductor" => &mut rep.conductor_mismatches,
                "genus" => &mut rep.genus_mismatches,
                "min identity" => &mut rep.min_identity_violations,
                _ => &mut rep.enumeration_mismatches,
            };
            *counter += 1;
            if rep.examples.len() < MAX_EXAMPLES {
                rep.examples.push(format!("{name}: {d:?}"));
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_scan_is_clean() {
        let rep = scan(20, true).unwrap();
        assert!(rep.is_clean(), "{:?}", rep.examples);
        assert_eq!(rep.triples, rep.symmetric + rep.nonsymmetric);
        assert!(rep.symmetric > 0 && rep.nonsymmetric > 0);
        assert!(rep.unit_defect.contains(&[4, 5, 11]));
    }

    #[test]
    fn triple_listing() {
        let t = minimal_triples(6);
        assert_eq!(t, vec![[3, 4, 5], [4, 5, 6]]);
        assert!(scan(4, false).is_err());
    }
}
