use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::neighborhood::{chunked_fold, LatticeBase, NeighborhoodSpec};
use crate::arith::gcd_all;
use crate::error::{Error, Result};
use crate::relations::{self, ClosedForms, UWPair};
use crate::semigroup::{self, GeneratorTuple};

/// Counts and sums over one sweep, and the estimators derived from them.
///
/// Sums run over admissible points. Symmetric points are included in the
/// main estimators; the `*_nonsymmetric` variants exclude them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorReport {
    pub spec: NeighborhoodSpec,
    pub lattice_points: u128,
    pub total_points: u64,
    pub coprime_count: u64,
    pub admissible_count: u64,
    pub symmetric_count: u64,
    pub sum_conductor: u128,
    pub sum_nongaps: u128,
    /// `sum (G - nongaps)`, equivalently `sum min{A3, B3}` on the (u,w)-lattice.
    pub sum_excess: u128,
    /// `sum V^(1/(m-1))` with `V` the product of the generators.
    pub sum_root_volume: f64,
    pub k_est: Option<f64>,
    pub p_est: Option<f64>,
    pub q_est: Option<f64>,
    pub symmetric_fraction: Option<f64>,
    /// Coprime points over visited points.
    pub density: f64,
    pub k_est_nonsymmetric: Option<f64>,
    pub p_est_nonsymmetric: Option<f64>,
    /// Explicit finite-(N, r) lower bound on `k_est` for three generators.
    pub k_lower_bound: Option<f64>,
    /// Closed-form values at the base, for (u,w)-lattice sweeps.
    pub k_target: Option<f64>,
    pub q_target: Option<f64>,
    /// Non-symmetric points whose conductor and genus were recomputed
    /// through their relation matrix, and how many disagreed.
    pub closed_form_checked: u64,
    pub closed_form_mismatches: u64,
    pub reason: Option<String>,
    pub seed: Option<u64>,
    pub elapsed_ms: Option<u64>,
}

#[derive(Debug, Default, Clone)]
struct Accumulator {
    total: u64,
    coprime: u64,
    admissible: u64,
    symmetric: u64,
    sum_c: u128,
    sum_nongaps: u128,
    sum_excess: u128,
    sum_root: f64,
    ns_sum_c: u128,
    ns_sum_nongaps: u128,
    ns_sum_root: f64,
    checked: u64,
    mismatches: u64,
}

impl Accumulator {
    fn merge(&mut self, o: Accumulator) {
        self.total += o.total;
        self.coprime += o.coprime;
        self.admissible += o.admissible;
        self.symmetric += o.symmetric;
        self.sum_c += o.sum_c;
        self.sum_nongaps += o.sum_nongaps;
        self.sum_excess += o.sum_excess;
        self.sum_root += o.sum_root;
        self.ns_sum_c += o.ns_sum_c;
        self.ns_sum_nongaps += o.ns_sum_nongaps;
        self.ns_sum_root += o.ns_sum_root;
        self.checked += o.checked;
        self.mismatches += o.mismatches;
    }

    fn report(self, spec: &NeighborhoodSpec, started: Instant) -> EstimatorReport {
        let ratio = |a: u128, b: u128| (b > 0).then(|| a as f64 / b as f64);
        let empty = self.admissible == 0;
        EstimatorReport {
            spec: spec.clone(),
            lattice_points: spec.lattice_size(),
            total_points: self.total,
            coprime_count: self.coprime,
            admissible_count: self.admissible,
            symmetric_count: self.symmetric,
            sum_conductor: self.sum_c,
            sum_nongaps: self.sum_nongaps,
            sum_excess: self.sum_excess,
            sum_root_volume: self.sum_root,
            k_est: (!empty).then(|| self.sum_c as f64 / self.sum_root),
            p_est: ratio(self.sum_nongaps, self.sum_c),
            q_est: ratio(self.sum_excess, self.sum_c),
            symmetric_fraction: ratio(self.symmetric as u128, self.admissible as u128),
            density: self.coprime as f64 / self.total.max(1) as f64,
            k_est_nonsymmetric: (self.ns_sum_root > 0.0).then(|| self.ns_sum_c as f64 / self.ns_sum_root),
            p_est_nonsymmetric: ratio(self.ns_sum_nongaps, self.ns_sum_c),
            k_lower_bound: None,
            k_target: None,
            q_target: None,
            closed_form_checked: self.checked,
            closed_form_mismatches: self.mismatches,
            reason: empty.then(|| "no admissible points in the neighborhood".to_string()),
            seed: spec.seed(),
            elapsed_ms: Some(started.elapsed().as_millis() as u64),
        }
    }
}

/// `V^(1/(m-1))`: the volume itself for two generators, its square root for three.
fn root_volume(p: &[u64]) -> f64 {
    let v: f64 = p.iter().map(|&x| x as f64).product();
    match p.len() {
        2 => v,
        3 => v.sqrt(),
        m => v.powf(1.0 / (m - 1) as f64),
    }
}

/// `sqrt(3) - N^(-1/2) (d1 + d2 + d3 + (3r - 1)/N) prod_k (d_k - r/N)^(-1/2)`.
pub fn k_lower_bound(base: [u64; 3], n: u64, r: u64) -> f64 {
    let (n, r) = (n as f64, r as f64);
    let sum: f64 = base.iter().map(|&d| d as f64).sum();
    let prod: f64 = base.iter().map(|&d| (d as f64 - r / n).powf(-0.5)).product();
    3f64.sqrt() - (sum + (3.0 * r - 1.0) / n) * prod / n.sqrt()
}

fn check_closed_forms(point: &[u64], conductor: u64, genus: u64) -> bool {
    let Ok(gens) = GeneratorTuple::from_slice(point) else {
        return false;
    };
    let Ok(uw) = relations::uw_decomposition(&gens) else {
        return false;
    };
    let Ok(forms) = ClosedForms::evaluate(&uw) else {
        return false;
    };
    forms.conductor == conductor as i128 && forms.twice_genus == 2 * genus as i128
}

fn d_sweep(spec: &NeighborhoodSpec, cross_check: bool) -> Result<EstimatorReport> {
    spec.validate()?;
    let LatticeBase::D { generators } = &spec.base else {
        return Err(Error::InvalidNeighborhood("expected a d-lattice neighborhood".into()));
    };
    let started = Instant::now();
    let three = generators.len() == 3;
    let fold = |acc: &mut Accumulator, k: u64| {
        let p = spec.point(spec.visit_index(k));
        acc.total += 1;
        if gcd_all(&p) != 1 {
            return;
        }
        acc.coprime += 1;
        if !semigroup::is_minimal_generating_set(&p) {
            return;
        }
        acc.admissible += 1;
        let inv = GeneratorTuple::from_slice(&p)
            .and_then(|g| semigroup::invariants(&g))
            .expect("admissible points are valid semigroups");
        let (c, nongaps) = (inv.conductor as u128, inv.nongaps as u128);
        let root = root_volume(&p);
        acc.sum_c += c;
        acc.sum_nongaps += nongaps;
        acc.sum_excess += inv.genus as u128 - nongaps;
        acc.sum_root += root;
        if inv.symmetric {
            acc.symmetric += 1;
        } else {
            acc.ns_sum_c += c;
            acc.ns_sum_nongaps += nongaps;
            acc.ns_sum_root += root;
            if three && cross_check {
                acc.checked += 1;
                if !check_closed_forms(&p, inv.conductor, inv.genus) {
                    acc.mismatches += 1;
                }
            }
        }
    };
    let acc = chunked_fold(spec.visit_count(), Accumulator::default, fold, Accumulator::merge);
    let mut report = acc.report(spec, started);
    if let Some(base) = generators.triple() {
        report.k_lower_bound = Some(k_lower_bound(base, spec.n, spec.r));
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricFraction {
    pub fraction: f64,
    pub symmetric_count: u64,
    pub admissible_count: u64,
}

/// Share of admissible points whose semigroup is symmetric.
pub fn symmetric_fraction(spec: &NeighborhoodSpec) -> Result<SymmetricFraction> {
    let report = d_sweep(spec, false)?;
    let fraction = report.symmetric_fraction.ok_or(Error::EmptyAdmissibleSet)?;
    Ok(SymmetricFraction {
        fraction,
        symmetric_count: report.symmetric_count,
        admissible_count: report.admissible_count,
    })
}

/// Full d-lattice sweep: `K = sum C / sum V^(1/(m-1))`, and for three
/// generators the explicit lower bound and the closed-form cross-check.
pub fn k_estimator(spec: &NeighborhoodSpec) -> Result<EstimatorReport> {
    d_sweep(spec, true)
}

/// `p = sum nongaps / sum C`, `q = sum (G - nongaps) / sum C`.
pub fn p_q_estimators(spec: &NeighborhoodSpec) -> Result<EstimatorReport> {
    d_sweep(spec, false)
}

/// Averages over the six-dimensional `(u, w)` neighborhood using the closed
/// forms pointwise; a point is admissible when its generators are coprime.
pub fn uw_sweep(spec: &NeighborhoodSpec) -> Result<EstimatorReport> {
    spec.validate()?;
    let LatticeBase::Uw { uw: base } = &spec.base else {
        return Err(Error::InvalidNeighborhood(
            "expected a (u,w)-lattice neighborhood".into(),
        ));
    };
    let started = Instant::now();
    let fold = |acc: &mut Accumulator, k: u64| {
        let p = spec.point(spec.visit_index(k));
        acc.total += 1;
        let uw = UWPair::new([p[0], p[1], p[2]], [p[3], p[4], p[5]]).expect("validated coordinates are positive");
        let d = uw.generators().expect("validated coordinates fit");
        if gcd_all(&d) != 1 {
            return;
        }
        acc.coprime += 1;
        acc.admissible += 1;
        let forms = ClosedForms::evaluate(&uw).expect("validated coordinates fit");
        let c = forms.conductor.max(0) as u128;
        acc.sum_c += c;
        acc.sum_excess += forms.min_term;
        acc.sum_nongaps += c.saturating_sub(forms.min_term) / 2;
        acc.sum_root += root_volume(&d);
    };
    let acc = chunked_fold(spec.visit_count(), Accumulator::default, fold, Accumulator::merge);
    let mut report = acc.report(spec, started);
    // nongaps = (C - min)/2 pointwise; derive p from q so the identity is exact
    report.p_est = report.q_est.map(relations::p_from_q);
    report.k_target = Some(relations::k_closed_form(base)?);
    report.q_target = Some(relations::q_closed_form(base)?);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::super::SamplingMode;
    use super::*;

    fn d_spec(g: &[u64], n: u64, r: u64) -> NeighborhoodSpec {
        NeighborhoodSpec::d_lattice(GeneratorTuple::from_slice(g).unwrap(), n, r, SamplingMode::Exhaustive)
    }

    /// Sweep recomputed point by point from the definition-level oracle.
    fn oracle(g: &[u64], n: u64, r: u64) -> (u64, u64, u128, u128) {
        let (mut admissible, mut symmetric, mut sum_c, mut sum_nongaps) = (0, 0, 0u128, 0u128);
        let r = r as i64;
        for j1 in -r..=r {
            for j2 in -r..=r {
                for j3 in -r..=r {
                    let p: Vec<u64> = g
                        .iter()
                        .zip([j1, j2, j3])
                        .map(|(&d, j)| ((d * n) as i64 + j) as u64)
                        .collect();
                    if gcd_all(&p) != 1 {
                        continue;
                    }
                    let minimal = (0..3).all(|i| {
                        let others: Vec<u64> = (0..3).filter(|&k| k != i).map(|k| p[k]).collect();
                        !crate::brute::membership(&others, p[i])[p[i] as usize]
                    });
                    if !minimal {
                        continue;
                    }
                    admissible += 1;
                    let b = crate::brute::profile(&p);
                    let c = b.frobenius + 1;
                    if 2 * b.genus == c {
                        symmetric += 1;
                    }
                    sum_c += c as u128;
                    sum_nongaps += b.nongaps as u128;
                }
            }
        }
        (admissible, symmetric, sum_c, sum_nongaps)
    }

    #[test]
    fn d_sweep_matches_oracle() {
        for (g, n, r) in [(&[3u64, 5, 7][..], 10, 2), (&[3, 4, 5][..], 12, 2)] {
            let rep = k_estimator(&d_spec(g, n, r)).unwrap();
            let (adm, sym, sc, sng) = oracle(g, n, r);
            assert_eq!(
                (
                    rep.admissible_count,
                    rep.symmetric_count,
                    rep.sum_conductor,
                    rep.sum_nongaps
                ),
                (adm, sym, sc, sng),
                "{g:?}"
            );
            assert_eq!(rep.closed_form_checked, adm - sym);
            assert_eq!(rep.closed_form_mismatches, 0);
        }
    }

    #[test]
    fn symmetric_fraction_regression() {
        // pinned from the definition-level oracle
        let f = symmetric_fraction(&d_spec(&[3, 5, 7], 10, 4)).unwrap();
        assert_eq!((f.symmetric_count, f.admissible_count), (134, 557));
    }

    #[test]
    fn two_generator_sweep() {
        let rep = p_q_estimators(&d_spec(&[3, 5], 100, 3)).unwrap();
        assert_eq!(rep.symmetric_count, rep.admissible_count);
        assert_eq!(rep.p_est, Some(0.5));
        assert_eq!(rep.k_lower_bound, None);
    }

    #[test]
    fn pq_identity() {
        let rep = p_q_estimators(&d_spec(&[3, 4, 5], 30, 3)).unwrap();
        let (p, q) = (rep.p_est.unwrap(), rep.q_est.unwrap());
        assert!((q - (1.0 - 2.0 * p)).abs() < 1e-12);
        assert!(p > 1.0 / 3.0 && p < 0.5);
    }

    #[test]
    fn uw_sweep_tracks_closed_form() {
        let uw = UWPair::new([2, 1, 1], [1, 1, 1]).unwrap();
        let spec = NeighborhoodSpec::uw_lattice(
            uw,
            200,
            2,
            SamplingMode::Sampled {
                count: 20_000,
                seed: 11,
            },
        );
        let rep = uw_sweep(&spec).unwrap();
        assert!((rep.k_est.unwrap() - rep.k_target.unwrap()).abs() < 0.02);
        assert!((rep.q_est.unwrap() - 1.0 / 14.0).abs() < 0.01);
        assert!(rep.admissible_count < rep.total_points);
    }

    #[test]
    fn k_bound_is_below_sqrt3() {
        let b = k_lower_bound([3, 4, 5], 100, 4);
        assert!(b < 3f64.sqrt() && b > 0.0);
    }
}
