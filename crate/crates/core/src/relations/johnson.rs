use serde::{Deserialize, Serialize};

use crate::arith::{self, gcd, gcd_all};
use crate::error::{Error, Result};
use crate::semigroup::{self, GeneratorTuple};

use super::UWPair;

/// Minimal relations of a three-generated semigroup.
///
/// Row `j` holds magnitudes: `rows[j][j] * d_j = rows[j][k] * d_k + rows[j][l] * d_l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationMatrix {
    pub generators: [u64; 3],
    pub rows: [[u64; 3]; 3],
}

impl RelationMatrix {
    pub fn diagonal(&self) -> [u64; 3] {
        [self.rows[0][0], self.rows[1][1], self.rows[2][2]]
    }

    /// Every row annihilates the generator vector.
    pub fn annihilates(&self) -> bool {
        let d = self.generators;
        (0..3).all(|j| {
            let lhs = self.rows[j][j] as u128 * d[j] as u128;
            let rhs: u128 = (0..3)
                .filter(|&i| i != j)
                .map(|i| self.rows[j][i] as u128 * d[i] as u128)
                .sum();
            lhs == rhs
        })
    }

    /// The signed matrix with positive diagonal and non-positive off-diagonal.
    pub fn signed(&self) -> [[i64; 3]; 3] {
        let mut out = [[0i64; 3]; 3];
        for (j, row) in self.rows.iter().enumerate() {
            for (i, &a) in row.iter().enumerate() {
                out[j][i] = if i == j { a as i64 } else { -(a as i64) };
            }
        }
        out
    }
}

/// For each generator, the least multiple `v >= 2` that is a nonnegative
/// combination of the other two, with its (unique) witness coefficients.
///
/// The search for row `j` stops at `d_k / gcd(d_j, d_k)`, where `v * d_j`
/// becomes a multiple of `d_k`; minimality guarantees that bound is at least 2.
pub fn minimal_relation_matrix(gens: &GeneratorTuple) -> Result<RelationMatrix> {
    let d = gens
        .triple()
        .ok_or_else(|| Error::InvalidGenerators(format!("expected three distinct generators, got {gens}")))?;
    gens.require_coprime()?;
    if !semigroup::is_minimal_generating_set(&d) {
        return Err(Error::NotMinimal(d.to_vec()));
    }
    let inconsistent = |reason: String| Error::InconsistentMatrix {
        gens: d.to_vec(),
        reason,
    };

    let mut rows = [[0u64; 3]; 3];
    for j in 0..3 {
        let (k, l) = ((j + 1) % 3, (j + 2) % 3);
        let ceiling = d[k] / gcd(d[j], d[k]);
        let mut found = None;
        for v in 2..=ceiling {
            let s = arith::checked_mul(v, d[j], "relation multiple")?;
            let witnesses = arith::two_generated_witnesses(s, d[k], d[l]);
            match witnesses.len() {
                0 => continue,
                1 => {
                    found = Some((v, witnesses[0]));
                    break;
                }
                n => {
                    return Err(inconsistent(format!(
                        "{n} witnesses for {v}*{} over ({}, {})",
                        d[j], d[k], d[l]
                    )))
                }
            }
        }
        let (v, (x, y)) = found.ok_or_else(|| inconsistent(format!("no relation found for generator {}", d[j])))?;
        rows[j][j] = v;
        rows[j][k] = x;
        rows[j][l] = y;
        if gcd_all(&rows[j]) != 1 {
            return Err(inconsistent(format!("row {j} = {:?} is not primitive", rows[j])));
        }
    }
    Ok(RelationMatrix { generators: d, rows })
}

/// Read the `(u, w)` standard form off the relation matrix of a
/// non-symmetric semigroup:
/// `u = (a31, a12, a23)`, `w = (a21, a32, a13)` with `a_jj = u_j + w_j`.
pub fn uw_decomposition(gens: &GeneratorTuple) -> Result<UWPair> {
    let d = gens
        .triple()
        .ok_or_else(|| Error::InvalidGenerators(format!("expected three distinct generators, got {gens}")))?;
    let inv = semigroup::invariants(gens)?;
    if inv.symmetric {
        return Err(Error::SymmetricInput(d.to_vec()));
    }
    let a = minimal_relation_matrix(gens)?.rows;
    uw_from_rows(d, &a)
}

pub(crate) fn uw_from_rows(d: [u64; 3], a: &[[u64; 3]; 3]) -> Result<UWPair> {
    let inconsistent = |reason: String| Error::InconsistentMatrix {
        gens: d.to_vec(),
        reason,
    };
    let u = [a[2][0], a[0][1], a[1][2]];
    let w = [a[1][0], a[2][1], a[0][2]];
    if u.iter().chain(w.iter()).any(|&x| x == 0) {
        return Err(inconsistent(format!("zero off-diagonal entry in {a:?}")));
    }
    for j in 0..3 {
        if a[j][j] != u[j] + w[j] {
            return Err(inconsistent(format!(
                "diagonal a{0}{0} = {1} differs from u{0} + w{0} = {2}",
                j + 1,
                a[j][j],
                u[j] + w[j]
            )));
        }
    }
    let uw = UWPair::new(u, w)?;
    let back = uw.generators()?;
    if back != d {
        return Err(inconsistent(format!("(u,w) reconstructs {back:?}")));
    }
    Ok(uw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute;

    fn t(g: &[u64]) -> GeneratorTuple {
        GeneratorTuple::from_slice(g).unwrap()
    }

    #[test]
    fn matrix_examples() {
        let m = minimal_relation_matrix(&t(&[3, 4, 5])).unwrap();
        assert_eq!(m.rows, [[3, 1, 1], [1, 2, 1], [2, 1, 2]]);
        let m = minimal_relation_matrix(&t(&[4, 5, 11])).unwrap();
        assert_eq!(m.rows, [[4, 1, 1], [1, 3, 1], [3, 2, 2]]);
        let m = minimal_relation_matrix(&t(&[3, 5, 7])).unwrap();
        assert_eq!(m.diagonal(), [4, 2, 2]);
        assert!(m.annihilates());
    }

    #[test]
    fn matrix_preconditions() {
        assert!(matches!(
            minimal_relation_matrix(&t(&[2, 3, 4])),
            Err(Error::NotMinimal(_))
        ));
        assert!(matches!(
            minimal_relation_matrix(&t(&[4, 6, 8])),
            Err(Error::NonCoprime(..))
        ));
    }

    #[test]
    fn uw_examples() {
        let uw = uw_decomposition(&t(&[3, 4, 5])).unwrap();
        assert_eq!((uw.u(), uw.w()), ([2, 1, 1], [1, 1, 1]));
        let uw = uw_decomposition(&t(&[4, 5, 11])).unwrap();
        assert_eq!((uw.u(), uw.w()), ([3, 1, 1], [1, 2, 1]));
        assert!(matches!(
            uw_decomposition(&t(&[4, 5, 6])),
            Err(Error::SymmetricInput(_))
        ));
        // labels are kept: the reversed triple has its own standard form
        let uw = uw_decomposition(&t(&[5, 4, 3])).unwrap();
        assert_eq!((uw.u(), uw.w()), ([1, 1, 1], [1, 1, 2]));
    }

    #[test]
    fn matrix_matches_exhaustive_search() {
        for d3 in 3..=30u64 {
            for d2 in 2..d3 {
                for d1 in 2..d2 {
                    let d = [d1, d2, d3];
                    let g = t(&d);
                    if g.gcd() != 1 || !semigroup::is_minimal_generating_set(&d) {
                        continue;
                    }
                    let symmetric = semigroup::invariants(&g).unwrap().symmetric;
                    let oracle: Vec<_> = (0..3).map(|j| brute::minimal_relation_row(d, j)).collect();
                    match minimal_relation_matrix(&g) {
                        Ok(m) => {
                            for (j, (v, w)) in oracle.iter().enumerate() {
                                assert_eq!(w.len(), 1, "{g}");
                                assert_eq!(m.rows[j][j], *v, "{g}");
                                let (k, l) = ((j + 1) % 3, (j + 2) % 3);
                                assert_eq!((m.rows[j][k], m.rows[j][l]), w[0], "{g}");
                            }
                        }
                        Err(Error::InconsistentMatrix { .. }) => {
                            // only symmetric semigroups admit several minimal witnesses
                            assert!(symmetric, "{g}");
                            assert!(oracle.iter().any(|(_, w)| w.len() > 1), "{g}");
                        }
                        Err(e) => panic!("{g}: {e}"),
                    }
                }
            }
        }
    }
}
