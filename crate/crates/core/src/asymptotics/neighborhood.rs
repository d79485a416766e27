use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relations::UWPair;
use crate::semigroup::{self, GeneratorTuple};

/// Exhaustive sweeps larger than this must be sampled.
pub const EXHAUSTIVE_BUDGET: u128 = 10_000_000;

const CHUNK: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "lattice", rename_all = "lowercase")]
pub enum LatticeBase {
    D { generators: GeneratorTuple },
    Uw { uw: UWPair },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum SamplingMode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

/// The cube `N * base + j`, `j_i in [-r, r]`, over either lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborhoodSpec {
    pub base: LatticeBase,
    pub n: u64,
    pub r: u64,
    pub mode: SamplingMode,
}

impl NeighborhoodSpec {
    pub fn d_lattice(generators: GeneratorTuple, n: u64, r: u64, mode: SamplingMode) -> Self {
        Self {
            base: LatticeBase::D { generators },
            n,
            r,
            mode,
        }
    }

    pub fn uw_lattice(uw: UWPair, n: u64, r: u64, mode: SamplingMode) -> Self {
        Self {
            base: LatticeBase::Uw { uw },
            n,
            r,
            mode,
        }
    }

    /// Base coordinates: the generators, or `u` followed by `w`.
    pub fn coordinates(&self) -> Vec<u64> {
        match &self.base {
            LatticeBase::D { generators } => generators.gens().to_vec(),
            LatticeBase::Uw { uw } => uw.u().into_iter().chain(uw.w()).collect(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.coordinates().len()
    }

    /// `(2r + 1)^dimension`, saturating.
    pub fn lattice_size(&self) -> u128 {
        let side = 2 * self.r as u128 + 1;
        (0..self.dimension()).fold(1u128, |acc, _| acc.saturating_mul(side))
    }

    pub fn seed(&self) -> Option<u64> {
        match self.mode {
            SamplingMode::Exhaustive => None,
            SamplingMode::Sampled { seed, .. } => Some(seed),
        }
    }

    /// Number of points a sweep visits.
    pub fn visit_count(&self) -> u64 {
        match self.mode {
            SamplingMode::Exhaustive => self.lattice_size() as u64,
            SamplingMode::Sampled { count, .. } => count,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.r == 0 {
            return Err(Error::InvalidNeighborhood(format!(
                "N and r must be positive (N={}, r={})",
                self.n, self.r
            )));
        }
        if self.r >= self.n {
            return Err(Error::RadiusTooLarge { r: self.r, n: self.n });
        }
        if 10 * self.r > self.n {
            log::debug!(
                "radius r={} exceeds N/10 for N={}; finite-size effects are large",
                self.r,
                self.n
            );
        }
        let floor = match &self.base {
            LatticeBase::D { generators } => {
                if generators.len() < 2 {
                    return Err(Error::InvalidGenerators(format!(
                        "need two or three generators, got {generators}"
                    )));
                }
                generators.require_coprime()?;
                if !semigroup::is_minimal_generating_set(generators.gens()) {
                    return Err(Error::NotMinimal(generators.gens().to_vec()));
                }
                2
            }
            LatticeBase::Uw { .. } => 1,
        };
        for &c in &self.coordinates() {
            let lowest = (c as u128 * self.n as u128).checked_sub(self.r as u128);
            if lowest.is_none_or(|x| x < floor) {
                return Err(Error::InvalidNeighborhood(format!(
                    "N*{c} - r must be at least {floor} (N={}, r={})",
                    self.n, self.r
                )));
            }
            if lowest.is_some_and(|x| x + 2 * self.r as u128 > u64::MAX as u128 / 4) {
                return Err(Error::Overflow("neighborhood coordinates"));
            }
        }
        match self.mode {
            SamplingMode::Exhaustive if self.lattice_size() > EXHAUSTIVE_BUDGET => Err(Error::SampledModeRequired {
                points: self.lattice_size(),
                budget: EXHAUSTIVE_BUDGET,
            }),
            SamplingMode::Sampled { count: 0, .. } => {
                Err(Error::InvalidNeighborhood("sample count must be positive".into()))
            }
            _ => Ok(()),
        }
    }

    /// Lattice point with mixed-radix index `index`, first coordinate most significant.
    pub fn point(&self, index: u128) -> Vec<u64> {
        let side = 2 * self.r as u128 + 1;
        let coords = self.coordinates();
        let mut rest = index;
        let mut out = vec![0u64; coords.len()];
        for (slot, &c) in out.iter_mut().zip(coords.iter()).rev() {
            let offset = (rest % side) as u64;
            rest /= side;
            *slot = c * self.n + offset - self.r;
        }
        out
    }

    /// Index of the `k`-th visited point: `k` itself, or a uniform draw from
    /// a ChaCha stream keyed by `(seed, k)`.
    pub fn visit_index(&self, k: u64) -> u128 {
        match self.mode {
            SamplingMode::Exhaustive => k as u128,
            SamplingMode::Sampled { seed, .. } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(k);
                rng.random_range(0..self.lattice_size())
            }
        }
    }
}

/// Deterministic parallel fold over `0..n`: fixed chunks are folded in index
/// order and merged in chunk order, so the result does not depend on the
/// number of worker threads.
pub(crate) fn chunked_fold<A, F, M>(n: u64, init: impl Fn() -> A + Sync, fold: F, merge: M) -> A
where
    A: Send,
    F: Fn(&mut A, u64) + Sync,
    M: Fn(&mut A, A),
{
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<A> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = init();
            for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                fold(&mut acc, i);
            }
            acc
        })
        .collect();
    let mut total = init();
    for part in parts {
        merge(&mut total, part);
    }
    total
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissiblePoints {
    pub points: Vec<Vec<u64>>,
    pub total: u64,
    pub coprime: u64,
    pub admissible: u64,
}

/// Visited d-lattice points that are coprime and minimally generated, in
/// visit order.
pub fn admissible_points(spec: &NeighborhoodSpec) -> Result<AdmissiblePoints> {
    spec.validate()?;
    if !matches!(spec.base, LatticeBase::D { .. }) {
        return Err(Error::InvalidNeighborhood(
            "admissible points are defined on the d-lattice".into(),
        ));
    }
    let init = || AdmissiblePoints {
        points: Vec::new(),
        total: 0,
        coprime: 0,
        admissible: 0,
    };
    Ok(chunked_fold(
        spec.visit_count(),
        init,
        |acc, k| {
            let p = spec.point(spec.visit_index(k));
            acc.total += 1;
            if crate::arith::gcd_all(&p) == 1 {
                acc.coprime += 1;
                if semigroup::is_minimal_generating_set(&p) {
                    acc.admissible += 1;
                    acc.points.push(p);
                }
            }
        },
        |acc, part| {
            acc.points.extend(part.points);
            acc.total += part.total;
            acc.coprime += part.coprime;
            acc.admissible += part.admissible;
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(g: &[u64]) -> GeneratorTuple {
        GeneratorTuple::from_slice(g).unwrap()
    }

    #[test]
    fn indexing_covers_the_cube() {
        let spec = NeighborhoodSpec::d_lattice(base(&[3, 5, 7]), 10, 1, SamplingMode::Exhaustive);
        assert_eq!(spec.lattice_size(), 27);
        assert_eq!(spec.point(0), vec![29, 49, 69]);
        assert_eq!(spec.point(13), vec![30, 50, 70]);
        assert_eq!(spec.point(26), vec![31, 51, 71]);
        assert_eq!(spec.point(1), vec![29, 49, 70]);
    }

    #[test]
    fn center_is_never_admissible() {
        let spec = NeighborhoodSpec::d_lattice(base(&[3, 5, 7]), 10, 1, SamplingMode::Exhaustive);
        let pts = admissible_points(&spec).unwrap();
        assert!(!pts.points.contains(&vec![30, 50, 70]));
        assert!(pts.admissible <= pts.coprime && pts.coprime <= pts.total);
        assert_eq!(pts.total, 27);
    }

    #[test]
    fn off_center_point_matches_direct_checks() {
        let spec = NeighborhoodSpec::d_lattice(base(&[3, 5, 7]), 10, 1, SamplingMode::Exhaustive);
        let pts = admissible_points(&spec).unwrap();
        let p = [29u64, 50, 71];
        let direct = crate::arith::gcd_all(&p) == 1
            && !crate::brute::membership(&[50, 71], 29)[29]
            && !crate::brute::membership(&[29, 71], 50)[50]
            && !crate::brute::membership(&[29, 50], 71)[71];
        assert_eq!(pts.points.contains(&p.to_vec()), direct);
    }

    #[test]
    fn radius_two_count_matches_enumeration() {
        let spec = NeighborhoodSpec::d_lattice(base(&[3, 5, 7]), 10, 2, SamplingMode::Exhaustive);
        let pts = admissible_points(&spec).unwrap();
        let mut expected = 0;
        for a in 28..=32u64 {
            for b in 48..=52u64 {
                for c in 68..=72u64 {
                    let g = [a, b, c];
                    if crate::arith::gcd_all(&g) != 1 {
                        continue;
                    }
                    let table = crate::brute::membership(&[a, b], c);
                    let others = |x: u64, y: u64, z: u64| !crate::brute::membership(&[x, y], z)[z as usize];
                    if others(b, c, a) && others(a, c, b) && !table[c as usize] {
                        expected += 1;
                    }
                }
            }
        }
        assert_eq!(pts.total, 125);
        assert_eq!(pts.admissible, expected);
    }

    #[test]
    fn validation() {
        let mk = |n, r| NeighborhoodSpec::d_lattice(base(&[3, 5, 7]), n, r, SamplingMode::Exhaustive);
        assert_eq!(mk(10, 10).validate(), Err(Error::RadiusTooLarge { r: 10, n: 10 }));
        assert!(mk(10, 4).validate().is_ok());
        assert!(matches!(
            NeighborhoodSpec::d_lattice(base(&[4, 6, 8]), 10, 1, SamplingMode::Exhaustive).validate(),
            Err(Error::NonCoprime(..))
        ));
        let uw = UWPair::new([2, 1, 1], [1, 1, 1]).unwrap();
        let big = NeighborhoodSpec::uw_lattice(uw, 1000, 20, SamplingMode::Exhaustive);
        assert!(matches!(big.validate(), Err(Error::SampledModeRequired { .. })));
    }

    #[test]
    fn sampling_is_keyed_by_index() {
        let spec = NeighborhoodSpec::d_lattice(base(&[3, 5, 7]), 100, 4, SamplingMode::Sampled { count: 50, seed: 7 });
        let a: Vec<u128> = (0..50).map(|k| spec.visit_index(k)).collect();
        let b: Vec<u128> = (0..50).rev().map(|k| spec.visit_index(k)).rev().collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|&i| i < spec.lattice_size()));
    }

    #[test]
    fn chunked_fold_is_thread_independent() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| {
                    chunked_fold(
                        100_003,
                        || 0.0f64,
                        |acc, i| *acc += (i as f64).sqrt(),
                        |acc, part| *acc += part,
                    )
                })
        };
        assert_eq!(run(1).to_bits(), run(7).to_bits());
    }
}
