//! Minimal relations of three-generated semigroups and the closed forms built
//! on their `(u, w)` standard form.
//!
//! For a non-symmetric semigroup the relation matrix reads
//!
//! ```text
//! | u1+w1   -u2    -w3  |
//! |  -w1   u2+w2   -u3  |
//! |  -u1    -w2   u3+w3 |
//! ```
//!
//! and the generators, conductor and genus are polynomials in `(u, w)`.

mod closed_form;
mod johnson;
mod landscape;

pub use closed_form::{
    conductor_closed_form, conductor_lower_bound, general_lower_bound, genus_closed_form, k_closed_form, p_from_q,
    q_closed_form, q_closed_form_exact, validate_uw, ClosedForms,
};
pub use johnson::{minimal_relation_matrix, uw_decomposition, RelationMatrix};
pub use landscape::{l_function, minimize_l, GridSpec, LMinimum, PlaneMinimum, RhoVector};

use serde::{Deserialize, Serialize};

use num_rational::Ratio;

use crate::arith;
use crate::error::{Error, Result};
use crate::semigroup::{self, GeneratorTuple};

/// Entries of the standard form of a relation matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UWPair {
    u: [u64; 3],
    w: [u64; 3],
}

impl UWPair {
    pub fn new(u: [u64; 3], w: [u64; 3]) -> Result<Self> {
        if u.iter().chain(w.iter()).any(|&x| x == 0) {
            return Err(Error::InvalidUw(format!("entries must be positive: u={u:?} w={w:?}")));
        }
        Ok(Self { u, w })
    }

    pub fn u(&self) -> [u64; 3] {
        self.u
    }

    pub fn w(&self) -> [u64; 3] {
        self.w
    }

    /// `u1 u2 + u3 u1 + u2 u3`
    pub fn a2(&self) -> u128 {
        let [a, b, c] = self.u.map(u128::from);
        a * b + c * a + b * c
    }

    /// `u1 u2 u3`
    pub fn a3(&self) -> u128 {
        self.u.iter().map(|&x| x as u128).product()
    }

    pub fn b2(&self) -> u128 {
        let [a, b, c] = self.w.map(u128::from);
        a * b + c * a + b * c
    }

    pub fn b3(&self) -> u128 {
        self.w.iter().map(|&x| x as u128).product()
    }

    /// `u1 w2 + u2 w3 + u3 w1`
    pub fn cross(&self) -> u128 {
        let [u1, u2, u3] = self.u.map(u128::from);
        let [w1, w2, w3] = self.w.map(u128::from);
        u1 * w2 + u2 * w3 + u3 * w1
    }

    /// `(u1 + w1)(u2 + w2)(u3 + w3)`
    pub fn diagonal_product(&self) -> u128 {
        (0..3).map(|i| self.u[i] as u128 + self.w[i] as u128).product()
    }

    /// `d1 = u2 u3 + w2 w3 + u2 w3`, `d2 = u3 u1 + w3 w1 + u3 w1`,
    /// `d3 = u1 u2 + w1 w2 + u1 w2`, in that (not necessarily sorted) order.
    pub fn generators(&self) -> Result<[u64; 3]> {
        let mut out = [0u64; 3];
        for (i, slot) in out.iter_mut().enumerate() {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let uu = arith::checked_mul(self.u[j], self.u[k], "generator from (u,w)")?;
            let ww = arith::checked_mul(self.w[j], self.w[k], "generator from (u,w)")?;
            let uw = arith::checked_mul(self.u[j], self.w[k], "generator from (u,w)")?;
            *slot = arith::checked_add(
                arith::checked_add(uu, ww, "generator from (u,w)")?,
                uw,
                "generator from (u,w)",
            )?;
        }
        Ok(out)
    }

    pub fn rho(&self) -> RhoVector {
        RhoVector::new_unchecked([0, 1, 2].map(|i| self.u[i] as f64 / self.w[i] as f64))
    }
}

/// Generators in the labelled order fixed by the standard form.
pub fn generators_from_uw(uw: &UWPair) -> Result<[u64; 3]> {
    uw.generators()
}

/// Everything the relations layer says about one triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationsSummary {
    pub generators: GeneratorTuple,
    pub symmetric: bool,
    pub conductor: u64,
    pub genus: u64,
    /// `None` when several minimal witnesses exist (symmetric triples only).
    pub matrix: Option<RelationMatrix>,
    pub uw: Option<UWPair>,
    pub closed_form_conductor: Option<u64>,
    pub closed_form_genus: Option<u64>,
    pub min_term: Option<u128>,
    pub k: Option<f64>,
    pub q: Option<Ratio<u128>>,
    pub p: Option<f64>,
    pub lower_bound: f64,
}

pub fn summarize(gens: &GeneratorTuple) -> Result<RelationsSummary> {
    let d = gens
        .triple()
        .ok_or_else(|| Error::InvalidGenerators(format!("expected three distinct generators, got {gens}")))?;
    let inv = semigroup::invariants(gens)?;
    if !semigroup::is_minimal_generating_set(&d) {
        return Err(Error::NotMinimal(d.to_vec()));
    }
    let matrix = match minimal_relation_matrix(gens) {
        Ok(m) => Some(m),
        Err(Error::InconsistentMatrix { .. }) if inv.symmetric => None,
        Err(e) => return Err(e),
    };
    let uw = if inv.symmetric {
        None
    } else {
        Some(uw_decomposition(gens)?)
    };
    let (mut cc, mut cg, mut min_term, mut k, mut q, mut p) = (None, None, None, None, None, None);
    if let Some(uw) = &uw {
        cc = Some(conductor_closed_form(uw)?);
        cg = Some(genus_closed_form(uw)?);
        min_term = Some(ClosedForms::evaluate(uw)?.min_term);
        k = Some(k_closed_form(uw)?);
        q = Some(q_closed_form_exact(uw)?);
        p = Some(p_from_q(q_closed_form(uw)?));
    }
    Ok(RelationsSummary {
        generators: gens.clone(),
        symmetric: inv.symmetric,
        conductor: inv.conductor,
        genus: inv.genus,
        matrix,
        uw,
        closed_form_conductor: cc,
        closed_form_genus: cg,
        min_term,
        k,
        q,
        p,
        lower_bound: conductor_lower_bound(gens, inv.symmetric)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_examples() {
        let g = |u, w| generators_from_uw(&UWPair::new(u, w).unwrap()).unwrap();
        assert_eq!(g([2, 1, 1], [1, 1, 1]), [3, 4, 5]);
        assert_eq!(g([1, 1, 1], [1, 1, 2]), [5, 4, 3]);
        assert_eq!(g([3, 1, 1], [1, 2, 1]), [4, 5, 11]);
    }

    #[test]
    fn aggregates() {
        let uw = UWPair::new([3, 1, 1], [1, 2, 1]).unwrap();
        assert_eq!((uw.a2(), uw.a3(), uw.b2(), uw.b3()), (7, 3, 5, 2));
        assert_eq!(uw.diagonal_product(), 24);
        assert_eq!(uw.cross(), 3 * 2 + 1 + 1);
    }

    #[test]
    fn rejects_zero_entries() {
        assert!(matches!(UWPair::new([0, 1, 1], [1, 1, 1]), Err(Error::InvalidUw(_))));
    }

    #[test]
    fn summary_of_4_5_11() {
        let s = summarize(&GeneratorTuple::from_slice(&[4, 5, 11]).unwrap()).unwrap();
        assert_eq!(s.matrix.unwrap().rows, [[4, 1, 1], [1, 3, 1], [3, 2, 2]]);
        assert_eq!(s.uw.map(|x| (x.u(), x.w())), Some(([3, 1, 1], [1, 2, 1])));
        assert_eq!((s.closed_form_conductor, s.closed_form_genus), (Some(8), Some(5)));
        assert_eq!(s.q, Some(Ratio::new(2, 27)));
        let sym = summarize(&GeneratorTuple::from_slice(&[4, 6, 9]).unwrap()).unwrap();
        assert!(sym.symmetric && sym.matrix.is_none() && sym.uw.is_none());
    }

    #[test]
    fn overflow_is_reported() {
        let big = u64::MAX / 2;
        let uw = UWPair::new([big, big, big], [1, 1, 1]).unwrap();
        assert!(matches!(uw.generators(), Err(Error::Overflow(_))));
    }
}
