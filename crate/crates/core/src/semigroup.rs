//! Exact per-semigroup invariants for numerical semigroups with two or three
//! generators: Apéry sets, Frobenius number, genus, pseudo-Frobenius numbers,
//! minimality and the symmetry criteria.
//!
//! Everything here is a pure function over `u64` with checked products. The
//! Apéry set with respect to the smallest generator `m` drives all other
//! invariants: if `w_c` is the least element congruent to `c` modulo `m`, then
//!
//! * `F = max(w_c) - m`,
//! * the residue class `c` contributes `(w_c - c) / m` gaps,
//! * `x` is pseudo-Frobenius iff `x = w - m` for a maximal `w` of the Apéry set
//!   under `a <= b  <=>  b - a in S`.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::arith::{self, gcd, gcd_all};
use crate::error::{Error, Result};

/// Caller-ordered generators of a numerical semigroup, with duplicates
/// removed (first occurrence wins).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct GeneratorTuple {
    gens: Vec<u64>,
}

impl GeneratorTuple {
    pub fn new(gens: Vec<u64>) -> Result<Self> {
        if !(2..=3).contains(&gens.len()) {
            return Err(Error::InvalidGenerators(format!(
                "expected 2 or 3 generators, got {}",
                gens.len()
            )));
        }
        if gens.contains(&0) {
            return Err(Error::InvalidGenerators(format!(
                "generators must be positive: {gens:?}"
            )));
        }
        let mut unique = Vec::with_capacity(gens.len());
        for g in gens {
            if !unique.contains(&g) {
                unique.push(g);
            }
        }
        Ok(Self { gens: unique })
    }

    pub fn from_slice(gens: &[u64]) -> Result<Self> {
        Self::new(gens.to_vec())
    }

    pub fn gens(&self) -> &[u64] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn sorted(&self) -> Vec<u64> {
        let mut s = self.gens.clone();
        s.sort_unstable();
        s
    }

    pub fn gcd(&self) -> u64 {
        gcd_all(&self.gens)
    }

    pub fn smallest(&self) -> u64 {
        self.gens.iter().copied().min().unwrap_or(0)
    }

    /// The three generators in caller order, if there are exactly three.
    pub fn triple(&self) -> Option<[u64; 3]> {
        match self.gens[..] {
            [a, b, c] => Some([a, b, c]),
            _ => None,
        }
    }

    pub(crate) fn require_coprime(&self) -> Result<()> {
        let g = self.gcd();
        if g != 1 {
            return Err(Error::NonCoprime(self.gens.clone(), g));
        }
        Ok(())
    }

    fn require_triple(&self) -> Result<[u64; 3]> {
        self.triple()
            .ok_or_else(|| Error::InvalidGenerators(format!("expected three distinct generators, got {:?}", self.gens)))
    }
}

impl TryFrom<Vec<u64>> for GeneratorTuple {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<GeneratorTuple> for Vec<u64> {
    fn from(t: GeneratorTuple) -> Self {
        t.gens
    }
}

impl fmt::Display for GeneratorTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

/// Least semigroup element in every residue class modulo the smallest
/// generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AperySet {
    modulus: u64,
    elements: Vec<u64>,
    others: Vec<u64>,
}

impl AperySet {
    /// Shortest distances from residue 0 in the circulant graph on `Z/mZ` with
    /// an edge `c -> c + d (mod m)` of weight `d` for every other generator.
    ///
    /// Relaxation is done generator by generator: for a generator `d` the
    /// residues split into `gcd(d, m)` cycles; each cycle is walked twice
    /// starting from its current minimum, which reaches the fixed point for
    /// that generator in `O(m)` steps.
    pub fn new(gens: &GeneratorTuple) -> Result<Self> {
        gens.require_coprime()?;
        let m = gens.smallest();
        if m < 2 {
            return Err(Error::InvalidGenerators(format!(
                "smallest generator must be at least 2, got {gens}"
            )));
        }
        let n = usize::try_from(m).map_err(|_| Error::Overflow("Apéry modulus"))?;
        let mut dist = vec![u64::MAX; n];
        dist[0] = 0;
        let others: Vec<u64> = gens.gens().iter().copied().filter(|&g| g != m).collect();
        for &d in &others {
            let step = (d % m) as usize;
            let cycles = gcd(step as u64, m) as usize;
            let cycle_len = n / cycles;
            for start in 0..cycles {
                // locate the cycle minimum
                let mut best = start;
                let mut cur = start;
                for _ in 0..cycle_len {
                    if dist[cur] < dist[best] {
                        best = cur;
                    }
                    cur = (cur + step) % n;
                }
                if dist[best] == u64::MAX {
                    continue;
                }
                let mut cur = best;
                for _ in 0..cycle_len {
                    let next = (cur + step) % n;
                    let candidate = dist[cur].checked_add(d).ok_or(Error::Overflow("Apéry element"))?;
                    if candidate < dist[next] {
                        dist[next] = candidate;
                    }
                    cur = next;
                }
            }
        }
        debug_assert!(dist.iter().all(|&x| x != u64::MAX));
        Ok(Self {
            modulus: m,
            elements: dist,
            others,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Element `i` is the least semigroup element congruent to `i`.
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn contains(&self, s: u64) -> bool {
        s >= self.elements[(s % self.modulus) as usize]
    }

    pub fn frobenius(&self) -> u64 {
        // max >= modulus whenever the modulus is at least 2
        self.elements.iter().copied().max().unwrap_or(0) - self.modulus
    }

    pub fn conductor(&self) -> u64 {
        self.frobenius() + 1
    }

    pub fn genus(&self) -> u64 {
        self.elements
            .iter()
            .enumerate()
            .map(|(c, &w)| (w - c as u64) / self.modulus)
            .sum()
    }

    /// Elements of the Apéry set that are maximal under `a <= b <=> b - a in S`.
    ///
    /// `w` is maximal iff `w + d` leaves the Apéry set for every generator `d`
    /// other than the modulus.
    pub fn maximal_elements(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .elements
            .iter()
            .copied()
            .filter(|&w| {
                self.others.iter().all(|&d| {
                    let s = w + d;
                    self.elements[(s % self.modulus) as usize] != s
                })
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn pseudo_frobenius(&self) -> Vec<u64> {
        self.maximal_elements().into_iter().map(|w| w - self.modulus).collect()
    }

    /// All gaps in increasing order.
    pub fn gaps(&self) -> Vec<u64> {
        let mut gaps = Vec::with_capacity(self.genus() as usize);
        for (c, &w) in self.elements.iter().enumerate() {
            let mut g = c as u64;
            while g < w {
                gaps.push(g);
                g += self.modulus;
            }
        }
        gaps.sort_unstable();
        gaps
    }

    pub fn invariants(&self) -> Invariants {
        let frobenius = self.frobenius();
        let conductor = frobenius + 1;
        let genus = self.genus();
        Invariants {
            frobenius,
            conductor,
            genus,
            nongaps: conductor - genus,
            symmetric: 2 * genus == conductor,
        }
    }
}

/// The Apéry set of `gens` with respect to its smallest generator.
pub fn apery_set(gens: &GeneratorTuple) -> Result<AperySet> {
    AperySet::new(gens)
}

/// The scalar invariants without materialising the gap list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariants {
    pub frobenius: u64,
    pub conductor: u64,
    pub genus: u64,
    pub nongaps: u64,
    pub symmetric: bool,
}

pub fn invariants(gens: &GeneratorTuple) -> Result<Invariants> {
    Ok(AperySet::new(gens)?.invariants())
}

/// Every invariant of one numerical semigroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemigroupProfile {
    pub generators: GeneratorTuple,
    pub frobenius: u64,
    pub conductor: u64,
    pub genus: u64,
    pub nongaps: u64,
    pub gaps: Vec<u64>,
    pub pseudo_frobenius: Vec<u64>,
    #[serde(rename = "type")]
    pub type_: usize,
    pub symmetric: bool,
    /// Occupied fraction `nongaps / conductor`.
    pub p: Ratio<u64>,
    /// `(genus - nongaps) / conductor`.
    pub q: Ratio<u64>,
}

impl SemigroupProfile {
    /// `2*nongaps - genus`, the defect of the relation `G = 2*G~ - u`.
    pub fn nongap_defect(&self) -> i64 {
        2 * self.nongaps as i64 - self.genus as i64
    }
}

pub fn profile(gens: &GeneratorTuple) -> Result<SemigroupProfile> {
    let apery = AperySet::new(gens)?;
    let inv = apery.invariants();
    let pseudo_frobenius = apery.pseudo_frobenius();
    Ok(SemigroupProfile {
        generators: gens.clone(),
        frobenius: inv.frobenius,
        conductor: inv.conductor,
        genus: inv.genus,
        nongaps: inv.nongaps,
        gaps: apery.gaps(),
        type_: pseudo_frobenius.len(),
        pseudo_frobenius,
        symmetric: inv.symmetric,
        p: Ratio::new(inv.nongaps, inv.conductor),
        q: Ratio::new(inv.genus - inv.nongaps, inv.conductor),
    })
}

/// Whether `s` is a nonnegative integer combination of `gens`.
pub fn is_member(s: u64, gens: &[u64]) -> bool {
    debug_assert!(!gens.is_empty() && gens.iter().all(|&g| g >= 1));
    if s == 0 {
        return true;
    }
    let g = gcd_all(gens);
    if g == 0 || !s.is_multiple_of(g) {
        return false;
    }
    let s = s / g;
    let mut reduced: Vec<u64> = gens.iter().map(|&d| d / g).collect();
    reduced.sort_unstable();
    reduced.dedup();
    match reduced[..] {
        [1, ..] => true,
        [a] => s.is_multiple_of(a),
        [a, b] => arith::in_two_generated(s, a, b),
        _ => {
            // a single Apéry table over the reduced (coprime) generators
            let tuple = GeneratorTuple { gens: reduced };
            match AperySet::new(&tuple) {
                Ok(ap) => ap.contains(s),
                Err(_) => brute_member(s, tuple.gens()),
            }
        }
    }
}

fn brute_member(s: u64, gens: &[u64]) -> bool {
    let n = s as usize;
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for i in 1..=n {
        reach[i] = gens.iter().any(|&d| (d as usize) <= i && reach[i - d as usize]);
    }
    reach[n]
}

/// True iff no generator is a nonnegative combination of the others.
pub fn is_minimal_generating_set(gens: &[u64]) -> bool {
    (0..gens.len()).all(|i| {
        let others: Vec<u64> = gens
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &d)| d)
            .collect();
        others.is_empty() || !is_member(gens[i], &others)
    })
}

/// The minimal generating set of the semigroup generated by `gens`, sorted.
pub fn minimal_generators(gens: &[u64]) -> Vec<u64> {
    let mut sorted = gens.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut kept: Vec<u64> = Vec::new();
    for d in sorted {
        if kept.is_empty() || !is_member(d, &kept) {
            kept.push(d);
        }
    }
    kept
}

/// Pairwise gcds and the derived semigroup `S(d1/(g2 g3), d2/(g1 g3), d3/(g1 g2))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedSemigroupResult {
    /// `(gcd(d2,d3), gcd(d3,d1), gcd(d1,d2))` in caller order.
    pub pairwise_gcds: [u64; 3],
    pub derived: [u64; 3],
    pub minimal_generators: Vec<u64>,
    pub minimal_generator_count: usize,
}

pub fn derived_semigroup(gens: &GeneratorTuple) -> Result<DerivedSemigroupResult> {
    let [d1, d2, d3] = gens.require_triple()?;
    gens.require_coprime()?;
    let g1 = gcd(d2, d3);
    let g2 = gcd(d3, d1);
    let g3 = gcd(d1, d2);
    // pairwise gcds are coprime to each other, so these divisions are exact
    let derived = [d1 / (g2 * g3), d2 / (g1 * g3), d3 / (g1 * g2)];
    debug_assert_eq!(derived[0] * g2 * g3, d1);
    let minimal = minimal_generators(&derived);
    Ok(DerivedSemigroupResult {
        pairwise_gcds: [g1, g2, g3],
        derived,
        minimal_generator_count: minimal.len(),
        minimal_generators: minimal,
    })
}

/// The presentation `gcd(di, dj) = b >= 2`, `gcd(dk, b) = 1`,
/// `dk in S(di/b, dj/b)` certifying symmetry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryWitness {
    /// Caller-order indices `(i, j)` of the pair sharing the factor `b`.
    pub pair: (usize, usize),
    pub remaining: usize,
    pub b: u64,
}

pub fn pair_symmetry_witness(gens: &GeneratorTuple) -> Result<Option<SymmetryWitness>> {
    let d = gens.require_triple()?;
    gens.require_coprime()?;
    if !is_minimal_generating_set(&d) {
        return Err(Error::NotMinimal(d.to_vec()));
    }
    if gcd(d[0], d[1]) == 1 && gcd(d[1], d[2]) == 1 && gcd(d[0], d[2]) == 1 {
        return Ok(None);
    }
    for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let b = gcd(d[i], d[j]);
        if b >= 2 && gcd(d[k], b) == 1 && arith::in_two_generated(d[k], d[i] / b, d[j] / b) {
            return Ok(Some(SymmetryWitness {
                pair: (i, j),
                remaining: k,
                b,
            }));
        }
    }
    Ok(None)
}

/// Symmetry decided from the generators alone, without computing the
/// Frobenius number.
pub fn is_symmetric_by_pair_criterion(gens: &GeneratorTuple) -> Result<bool> {
    Ok(pair_symmetry_witness(gens)?.is_some())
}

/// `(d1 - 1)(d2 - 1)` for a coprime pair.
pub fn sylvester_conductor(d1: u64, d2: u64) -> Result<u64> {
    if d1 < 2 || d2 < 2 {
        return Err(Error::InvalidGenerators(format!(
            "both generators must be at least 2, got ({d1}, {d2})"
        )));
    }
    let g = gcd(d1, d2);
    if g != 1 {
        return Err(Error::NonCoprime(vec![d1, d2], g));
    }
    arith::checked_mul(d1 - 1, d2 - 1, "Sylvester conductor")
}
