use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::arith::gcd_all;
use crate::error::{Error, Result};
use crate::semigroup::{self, GeneratorTuple};

use super::UWPair;

/// Entries above this bound could overflow the 128-bit cubic terms.
const ENTRY_LIMIT: u64 = 1 << 40;

/// Integer closed forms evaluated at a `(u, w)` pair, without checking that
/// the pair is the standard form of an actual semigroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedForms {
    /// `1 + prod(u_i + w_i) - A2 - B2 - (u1 w2 + u2 w3 + u3 w1) + max{A3, B3}`
    pub conductor: i128,
    /// The same with `A3 + B3` in place of the maximum.
    pub twice_genus: i128,
    pub min_term: u128,
    pub max_term: u128,
    /// `prod(u_i + w_i) + max{A3, B3}`
    pub k_numerator: u128,
}

impl ClosedForms {
    pub fn evaluate(uw: &UWPair) -> Result<Self> {
        if uw.u().iter().chain(uw.w().iter()).any(|&x| x >= ENTRY_LIMIT) {
            return Err(Error::Overflow("closed forms"));
        }
        let (a3, b3) = (uw.a3(), uw.b3());
        let product = uw.diagonal_product();
        let base = 1 + product as i128 - uw.a2() as i128 - uw.b2() as i128 - uw.cross() as i128;
        let (min_term, max_term) = (a3.min(b3), a3.max(b3));
        Ok(Self {
            conductor: base + max_term as i128,
            twice_genus: base + a3 as i128 + b3 as i128,
            min_term,
            max_term,
            k_numerator: product + max_term,
        })
    }
}

/// Reconstruct the generators and require a coprime minimal triple.
pub fn validate_uw(uw: &UWPair) -> Result<[u64; 3]> {
    let d = uw.generators()?;
    let g = gcd_all(&d);
    if g != 1 {
        return Err(Error::InvalidUw(format!("generators {d:?} have gcd {g}")));
    }
    if d[0] == d[1] || d[1] == d[2] || d[0] == d[2] || !semigroup::is_minimal_generating_set(&d) {
        return Err(Error::InvalidUw(format!(
            "generators {d:?} are not a minimal generating set"
        )));
    }
    Ok(d)
}

pub fn conductor_closed_form(uw: &UWPair) -> Result<u64> {
    validate_uw(uw)?;
    let c = ClosedForms::evaluate(uw)?.conductor;
    u64::try_from(c).map_err(|_| Error::InvalidUw(format!("closed-form conductor {c} out of range")))
}

/// Genus from the closed form of `2G`; also checks `2G - C = min{A3, B3}`.
pub fn genus_closed_form(uw: &UWPair) -> Result<u64> {
    validate_uw(uw)?;
    let forms = ClosedForms::evaluate(uw)?;
    if forms.twice_genus % 2 != 0 {
        return Err(Error::ParityViolation(forms.twice_genus));
    }
    debug_assert_eq!(forms.twice_genus - forms.conductor, forms.min_term as i128);
    u64::try_from(forms.twice_genus / 2)
        .map_err(|_| Error::InvalidUw(format!("closed-form genus {} out of range", forms.twice_genus / 2)))
}

fn root_volume(uw: &UWPair) -> Result<f64> {
    let d = uw.generators()?;
    let v = d
        .iter()
        .map(|&x| x as u128)
        .try_fold(1u128, |acc, x| acc.checked_mul(x))
        .ok_or(Error::Overflow("generator volume"))?;
    Ok((v as f64).sqrt())
}

/// `[prod(u_i + w_i) + max{A3, B3}] / sqrt(d1 d2 d3)`.
pub fn k_closed_form(uw: &UWPair) -> Result<f64> {
    let forms = ClosedForms::evaluate(uw)?;
    Ok(forms.k_numerator as f64 / root_volume(uw)?)
}

/// `min{A3, B3} / [prod(u_i + w_i) + max{A3, B3}]` as an exact fraction.
pub fn q_closed_form_exact(uw: &UWPair) -> Result<Ratio<u128>> {
    let forms = ClosedForms::evaluate(uw)?;
    Ok(Ratio::new(forms.min_term, forms.k_numerator))
}

pub fn q_closed_form(uw: &UWPair) -> Result<f64> {
    let forms = ClosedForms::evaluate(uw)?;
    Ok(forms.min_term as f64 / forms.k_numerator as f64)
}

pub fn p_from_q(q: f64) -> f64 {
    (1.0 - q) / 2.0
}

/// Lower bound on the conductor of a three-generated semigroup:
/// `sqrt(3) sqrt(d1 d2 d3 + 1) - (d1 + d2 + d3) + 1` when non-symmetric and
/// `2 sqrt(d1 d2 d3) - (d1 + d2 + d3) + 1` when symmetric.
pub fn conductor_lower_bound(gens: &GeneratorTuple, symmetric: bool) -> Result<f64> {
    let d = gens
        .triple()
        .ok_or_else(|| Error::InvalidGenerators(format!("expected three distinct generators, got {gens}")))?;
    gens.require_coprime()?;
    if !semigroup::is_minimal_generating_set(&d) {
        return Err(Error::NotMinimal(d.to_vec()));
    }
    let volume = d.iter().map(|&x| x as f64).product::<f64>();
    let sum = d.iter().map(|&x| x as f64).sum::<f64>();
    Ok(if symmetric {
        2.0 * volume.sqrt() - sum + 1.0
    } else {
        3f64.sqrt() * (volume + 1.0).sqrt() - sum + 1.0
    })
}

/// `g_m (d1 ... dm)^(1/(m-1)) - (d1 + ... + dm) + 1` with
/// `g_m = ((m-1)!)^(1/(m-1))`, for any `m >= 2`.
pub fn general_lower_bound(gens: &[u64]) -> f64 {
    let m = gens.len();
    assert!(m >= 2, "need at least two generators");
    let e = 1.0 / (m - 1) as f64;
    let factorial: f64 = (1..m).map(|k| k as f64).product();
    let volume: f64 = gens.iter().map(|&x| x as f64).product();
    let sum: f64 = gens.iter().map(|&x| x as f64).sum();
    factorial.powf(e) * volume.powf(e) - sum + 1.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uw(u: [u64; 3], w: [u64; 3]) -> UWPair {
        UWPair::new(u, w).unwrap()
    }

    #[test]
    fn conductor_examples() {
        assert_eq!(conductor_closed_form(&uw([2, 1, 1], [1, 1, 1])).unwrap(), 3);
        assert_eq!(conductor_closed_form(&uw([3, 1, 1], [1, 2, 1])).unwrap(), 8);
        assert_eq!(conductor_closed_form(&uw([1, 1, 1], [1, 1, 2])).unwrap(), 3);
    }

    #[test]
    fn genus_examples() {
        let a = uw([2, 1, 1], [1, 1, 1]);
        assert_eq!(genus_closed_form(&a).unwrap(), 2);
        assert_eq!(ClosedForms::evaluate(&a).unwrap().min_term, 1);
        let b = uw([3, 1, 1], [1, 2, 1]);
        assert_eq!(genus_closed_form(&b).unwrap(), 5);
        assert_eq!(ClosedForms::evaluate(&b).unwrap().min_term, 2);
    }

    #[test]
    fn equal_u_and_w_collapse_min_and_max() {
        for x in 1..6 {
            let f = ClosedForms::evaluate(&uw([x, x + 1, 2], [x, x + 1, 2])).unwrap();
            assert_eq!(f.min_term, f.max_term);
            assert_eq!(f.twice_genus - f.conductor, f.min_term as i128);
        }
        // such pairs are never valid standard forms
        assert!(matches!(
            validate_uw(&uw([1, 1, 1], [1, 1, 1])),
            Err(Error::InvalidUw(_))
        ));
    }

    #[test]
    fn k_examples() {
        let k = k_closed_form(&uw([1, 1, 1], [1, 1, 1])).unwrap();
        assert!((k - 3f64.sqrt()).abs() < 1e-15);
        let k = k_closed_form(&uw([2, 1, 1], [1, 1, 1])).unwrap();
        assert!((k - 14.0 / 60f64.sqrt()).abs() < 1e-15);
        let k = k_closed_form(&uw([3, 1, 1], [1, 2, 1])).unwrap();
        assert!((k - 27.0 / 220f64.sqrt()).abs() < 1e-15);
        assert!((k - 1.8205).abs() < 5e-4);
    }

    #[test]
    fn q_examples() {
        assert_eq!(
            q_closed_form_exact(&uw([1, 1, 1], [1, 1, 1])).unwrap(),
            Ratio::new(1, 9)
        );
        assert_eq!(
            q_closed_form_exact(&uw([2, 1, 1], [1, 1, 1])).unwrap(),
            Ratio::new(1, 14)
        );
        assert_eq!(
            q_closed_form_exact(&uw([3, 1, 1], [1, 2, 1])).unwrap(),
            Ratio::new(2, 27)
        );
        let p = p_from_q(q_closed_form(&uw([2, 1, 1], [1, 1, 1])).unwrap());
        assert!((p - 13.0 / 28.0).abs() < 1e-15);
        let p = p_from_q(q_closed_form(&uw([1, 1, 1], [1, 1, 1])).unwrap());
        assert!((p - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn lower_bound_examples() {
        let t = |g: &[u64]| GeneratorTuple::from_slice(g).unwrap();
        let b = conductor_lower_bound(&t(&[3, 4, 5]), false).unwrap();
        assert!((b - 2.528).abs() < 1e-3 && b <= 3.0);
        let b = conductor_lower_bound(&t(&[4, 5, 6]), true).unwrap();
        assert!((b - 7.909).abs() < 1e-3 && b <= 8.0);
        let b = conductor_lower_bound(&t(&[4, 5, 11]), false).unwrap();
        assert!((b - 6.748).abs() < 1e-3 && b <= 8.0);
    }

    #[test]
    fn general_bound_reduces_to_known_cases() {
        // m = 2: d1 d2 - d1 - d2 + 1 = (d1 - 1)(d2 - 1)
        assert!((general_lower_bound(&[3, 5]) - 8.0).abs() < 1e-12);
        // m = 3: g_3 = sqrt(2)
        let b = general_lower_bound(&[3, 4, 5]);
        assert!((b - (2f64.sqrt() * 60f64.sqrt() - 11.0)).abs() < 1e-12);
    }
}
