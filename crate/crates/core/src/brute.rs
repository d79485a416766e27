//! Reference computations by direct enumeration.
//!
//! These share no code with the Apéry-set machinery and are used to
//! cross-check it (tests, `scan --verify`). They are quadratic or worse; keep
//! inputs small.

use crate::arith::gcd_all;

/// Membership table for `0..=limit`.
pub fn membership(gens: &[u64], limit: u64) -> Vec<bool> {
    let n = limit as usize;
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for i in 1..=n {
        reach[i] = gens.iter().any(|&d| d as usize <= i && reach[i - d as usize]);
    }
    reach
}

/// Upper limit on every Apéry element: `F < (d_min - 1)(d_max - 1)`.
fn search_limit(gens: &[u64]) -> u64 {
    let lo = *gens.iter().min().unwrap();
    let hi = *gens.iter().max().unwrap();
    lo * hi + hi
}

/// Least element of every residue class modulo the smallest generator.
pub fn apery(gens: &[u64]) -> Vec<u64> {
    assert_eq!(gcd_all(gens), 1);
    let m = *gens.iter().min().unwrap();
    let table = membership(gens, search_limit(gens));
    let mut out = vec![u64::MAX; m as usize];
    for (s, &inside) in table.iter().enumerate() {
        let c = s % m as usize;
        if inside && out[c] == u64::MAX {
            out[c] = s as u64;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteProfile {
    pub frobenius: u64,
    pub genus: u64,
    pub nongaps: u64,
    pub gaps: Vec<u64>,
    pub pseudo_frobenius: Vec<u64>,
}

/// Invariants straight from their definitions.
pub fn profile(gens: &[u64]) -> BruteProfile {
    assert_eq!(gcd_all(gens), 1);
    let limit = search_limit(gens);
    let table = membership(gens, 2 * limit);
    let frobenius = (0..=limit).rev().find(|&s| !table[s as usize]).expect("1 is excluded");
    let gaps: Vec<u64> = (0..=frobenius).filter(|&s| !table[s as usize]).collect();
    let elements: Vec<u64> = (1..=frobenius + 1).filter(|&s| table[s as usize]).collect();
    let pseudo_frobenius = gaps
        .iter()
        .copied()
        .filter(|&x| elements.iter().all(|&s| table[(x + s) as usize]))
        .collect();
    BruteProfile {
        frobenius,
        genus: gaps.len() as u64,
        nongaps: frobenius + 1 - gaps.len() as u64,
        gaps,
        pseudo_frobenius,
    }
}

/// Smallest `v >= 2` with `v*d[j]` a nonnegative combination of the other two,
/// and every witness at that `v`, by scanning coefficient pairs.
pub fn minimal_relation_row(d: [u64; 3], j: usize) -> (u64, Vec<(u64, u64)>) {
    let (k, l) = match j {
        0 => (1, 2),
        1 => (2, 0),
        _ => (0, 1),
    };
    let mut v = 2;
    loop {
        let s = v * d[j];
        let witnesses: Vec<(u64, u64)> = (0..=s / d[k])
            .flat_map(|x| (0..=s / d[l]).map(move |y| (x, y)))
            .filter(|&(x, y)| x * d[k] + y * d[l] == s)
            .collect();
        if !witnesses.is_empty() {
            return (v, witnesses);
        }
        v += 1;
    }
}
