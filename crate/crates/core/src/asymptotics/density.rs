use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::neighborhood::chunked_fold;
use crate::arith::gcd_all;
use crate::error::{Error, Result};
use crate::semigroup::{self, GeneratorTuple};

pub const MIN_DENSITY_SAMPLES: u64 = 10_000;

const ZETA_TERMS: u64 = 1000;

/// `zeta(m)` from a partial sum and an Euler-Maclaurin tail.
pub fn zeta(m: u32) -> Result<f64> {
    if m < 2 {
        return Err(Error::Domain(format!("zeta(m) needs m >= 2, got {m}")));
    }
    let s = m as f64;
    let n = ZETA_TERMS as f64;
    // smallest terms first
    let partial: f64 = (1..ZETA_TERMS).rev().map(|k| (k as f64).powf(-s)).sum();
    let tail = n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s) + s * n.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * n.powf(-s - 3.0) / 720.0;
    Ok(partial + tail)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub m: u32,
    pub samples: u64,
    pub seed: u64,
    pub lo: u64,
    pub hi: u64,
    pub coprime: u64,
    pub fraction: f64,
    /// `1 / zeta(m)`
    pub target: f64,
    pub deviation: f64,
}

/// Fraction of uniformly drawn `m`-tuples from `[lo, hi]^m` with gcd 1.
/// Sample `k` is drawn from the ChaCha stream `(seed, k)`.
pub fn coprime_density(m: u32, samples: u64, seed: u64, lo: u64, hi: u64) -> Result<DensityReport> {
    if !(2..=4).contains(&m) {
        return Err(Error::Domain(format!("density is defined for m in 2..=4, got {m}")));
    }
    if samples < MIN_DENSITY_SAMPLES {
        return Err(Error::Domain(format!(
            "need at least {MIN_DENSITY_SAMPLES} samples, got {samples}"
        )));
    }
    if lo == 0 || lo > hi {
        return Err(Error::Domain(format!("invalid range [{lo}, {hi}]")));
    }
    let coprime = chunked_fold(
        samples,
        || 0u64,
        |acc, k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let tuple: Vec<u64> = (0..m).map(|_| rng.random_range(lo..=hi)).collect();
            if gcd_all(&tuple) == 1 {
                *acc += 1;
            }
        },
        |acc, part| *acc += part,
    );
    let fraction = coprime as f64 / samples as f64;
    let target = 1.0 / zeta(m)?;
    Ok(DensityReport {
        m,
        samples,
        seed,
        lo,
        hi,
        coprime,
        fraction,
        target,
        deviation: fraction - target,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FillBin {
    /// Integers `lo..hi` fall in this bin.
    pub lo: u64,
    pub hi: u64,
    pub members: u64,
    pub empirical: f64,
    /// Average of `(s/C)^(m-1)` over the bin's share of `[0, 1]`.
    pub conjectured: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FillReport {
    pub generators: GeneratorTuple,
    pub conductor: u64,
    pub bins: Vec<FillBin>,
    pub l1_distance: f64,
    /// Semigroup elements in `[0, C-1]` over `C`.
    pub mean_occupancy: Ratio<u64>,
    /// `nongaps / C` from the profile.
    pub profile_p: Ratio<u64>,
    /// `sum over bins of width * conjectured average`, i.e. `C/m`.
    pub conjectured_integral: Ratio<u128>,
}

/// Occupancy of `S ∩ [0, C-1]` in `bins` bins, integer `s` going to bin
/// `floor(s * bins / C)`, against the profile `(s/C)^(m-1)`.
pub fn fill_density(gens: &GeneratorTuple, bins: usize) -> Result<FillReport> {
    if bins == 0 {
        return Err(Error::Domain("bins must be positive".into()));
    }
    let apery = semigroup::apery_set(gens)?;
    let profile = semigroup::profile(gens)?;
    let c = apery.conductor();
    if c < bins as u64 {
        return Err(Error::DegenerateRange { conductor: c, bins });
    }
    let m = gens.len() as u32;
    let b = bins as u128;
    let bin_of = |s: u64| (s as u128 * b / c as u128) as usize;
    let mut members = vec![0u64; bins];
    let mut widths = vec![0u64; bins];
    for s in 0..c {
        widths[bin_of(s)] += 1;
        if apery.contains(s) {
            members[bin_of(s)] += 1;
        }
    }
    let mut out = Vec::with_capacity(bins);
    let mut lo = 0u64;
    let mut integral = Ratio::from_integer(0u128);
    for k in 0..bins {
        let (k0, k1) = (k as u128, k as u128 + 1);
        let rise = k1.pow(m) - k0.pow(m);
        let conjectured = rise as f64 / (m as f64 * (bins as f64).powi(m as i32 - 1));
        integral += Ratio::new(c as u128 * rise, m as u128 * b.pow(m));
        out.push(FillBin {
            lo,
            hi: lo + widths[k],
            members: members[k],
            empirical: if widths[k] == 0 {
                0.0
            } else {
                members[k] as f64 / widths[k] as f64
            },
            conjectured,
        });
        lo += widths[k];
    }
    let l1_distance = out
        .iter()
        .map(|bin| (bin.empirical - bin.conjectured).abs())
        .sum::<f64>()
        / bins as f64;
    Ok(FillReport {
        generators: gens.clone(),
        conductor: c,
        bins: out,
        l1_distance,
        mean_occupancy: Ratio::new(members.iter().sum(), c),
        profile_p: profile.p,
        conjectured_integral: integral,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_values() {
        let pi = std::f64::consts::PI;
        assert!((zeta(2).unwrap() - pi * pi / 6.0).abs() < 1e-12);
        assert!((zeta(3).unwrap() - 1.202_056_903_159_594).abs() < 1e-12);
        assert!((zeta(4).unwrap() - pi.powi(4) / 90.0).abs() < 1e-12);
        assert!((1.0 / zeta(2).unwrap() - 0.6079).abs() < 5e-5);
        assert!((1.0 / zeta(3).unwrap() - 0.8319).abs() < 5e-5);
        assert!((1.0 / zeta(4).unwrap() - 0.9239).abs() < 5e-5);
        assert!(zeta(1).is_err());
    }

    #[test]
    fn density_small_run() {
        let rep = coprime_density(3, 20_000, 5, 2, 1_000_000).unwrap();
        assert!(rep.deviation.abs() < 0.02);
        assert_eq!(rep, coprime_density(3, 20_000, 5, 2, 1_000_000).unwrap());
        assert!(coprime_density(3, 100, 5, 2, 10).is_err());
        assert!(coprime_density(5, 20_000, 5, 2, 10).is_err());
    }

    #[test]
    fn fill_bins_tiny_case() {
        let rep = fill_density(&GeneratorTuple::from_slice(&[3, 4, 5]).unwrap(), 3).unwrap();
        let occ: Vec<f64> = rep.bins.iter().map(|b| b.empirical).collect();
        assert_eq!(occ, vec![1.0, 0.0, 0.0]);
        assert_eq!(rep.mean_occupancy, Ratio::new(1, 3));
        assert_eq!(rep.mean_occupancy, rep.profile_p);
        assert_eq!(rep.conjectured_integral, Ratio::from_integer(1));
    }

    #[test]
    fn fill_integral_and_mean() {
        let g = GeneratorTuple::from_slice(&[101, 102, 103]).unwrap();
        let rep = fill_density(&g, 10).unwrap();
        assert_eq!(rep.mean_occupancy, rep.profile_p);
        assert_eq!(rep.conjectured_integral, Ratio::new(rep.conductor as u128, 3));
        let first = rep.bins.first().unwrap().empirical;
        let last = rep.bins.last().unwrap().empirical;
        assert!(last > first);
    }

    #[test]
    fn fill_rejects_coarse_range() {
        let g = GeneratorTuple::from_slice(&[3, 4, 5]).unwrap();
        assert_eq!(
            fill_density(&g, 4),
            Err(Error::DegenerateRange { conductor: 3, bins: 4 })
        );
    }
}
