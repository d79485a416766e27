use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ratios `rho_i = u_i / w_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoVector([f64; 3]);

impl RhoVector {
    pub fn new(rho: [f64; 3]) -> Result<Self> {
        if rho.iter().any(|&x| !x.is_finite() || x <= 0.0) {
            return Err(Error::Domain(format!("rho must be finite and positive, got {rho:?}")));
        }
        Ok(Self(rho))
    }

    pub(crate) fn new_unchecked(rho: [f64; 3]) -> Self {
        Self(rho)
    }

    pub fn values(&self) -> [f64; 3] {
        self.0
    }

    pub fn rotate(&self) -> Self {
        let [a, b, c] = self.0;
        Self([b, c, a])
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.map(|x| 1.0 / x))
    }

    /// Elementary symmetric functions `(Gamma1, Gamma2, Gamma3)`.
    pub fn gammas(&self) -> (f64, f64, f64) {
        let [a, b, c] = self.0;
        (a + b + c, a * b + b * c + c * a, a * b * c)
    }

    /// `(rho1 - rho2)(rho2 - rho3)(rho3 - rho1)`
    pub fn gamma4(&self) -> f64 {
        let [a, b, c] = self.0;
        (a - b) * (b - c) * (c - a)
    }

    /// `Gamma4^2` written through the elementary symmetric functions.
    pub fn discriminant(&self) -> f64 {
        let (g1, g2, g3) = self.gammas();
        g1 * g1 * g2 * g2 + 18.0 * g1 * g2 * g3 - 4.0 * g2.powi(3) - 4.0 * g1.powi(3) * g3 - 27.0 * g3 * g3
    }
}

/// `K^2` as a function of `rho` alone:
/// `[(1+r1)(1+r2)(1+r3) + max{1, r1 r2 r3}]^2 / [(1+r2 r3+r2)(1+r3 r1+r3)(1+r1 r2+r1)]`.
pub fn l_function(rho: &RhoVector) -> f64 {
    let [a, b, c] = rho.0;
    let num = (1.0 + a) * (1.0 + b) * (1.0 + c) + (a * b * c).max(1.0);
    let den = (1.0 + b * c + b) * (1.0 + c * a + c) * (1.0 + a * b + a);
    num * num / den
}

/// A log-spaced cube `[lo, hi]^3` with `points` samples per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl GridSpec {
    fn validate(&self) -> Result<()> {
        if self.points == 0 {
            return Err(Error::EmptyGrid);
        }
        if !(self.lo > 0.0 && self.hi.is_finite() && self.lo <= self.hi) {
            return Err(Error::Domain(format!(
                "box [{}, {}] must lie in (0, inf)",
                self.lo, self.hi
            )));
        }
        Ok(())
    }

    fn log_step(&self) -> f64 {
        if self.points < 2 {
            0.0
        } else {
            (self.hi.log2() - self.lo.log2()) / (self.points - 1) as f64
        }
    }

    /// Axis values; endpoints are exact.
    pub fn axis(&self) -> Vec<f64> {
        let step = self.log_step();
        let base = self.lo.log2();
        (0..self.points)
            .map(|i| match i {
                0 => self.lo,
                i if i + 1 == self.points => self.hi,
                i => (base + step * i as f64).exp2(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneMinimum {
    /// Indices of the two coordinates held equal.
    pub plane: (usize, usize),
    pub value: f64,
    pub argmin: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LMinimum {
    pub grid: GridSpec,
    /// Minimum over the coarse grid.
    pub grid_value: f64,
    pub grid_argmin: [f64; 3],
    /// Minimum after one refinement pass around the grid argmin.
    pub value: f64,
    pub argmin: [f64; 3],
    pub planes: Vec<PlaneMinimum>,
}

/// Parallel argmin of `f` over `0..n`, ties broken by the smaller index.
fn argmin_by_index<F>(n: usize, f: F) -> (f64, usize)
where
    F: Fn(usize) -> f64 + Sync,
{
    (0..n).into_par_iter().map(|i| (f(i), i)).reduce(
        || (f64::INFINITY, usize::MAX),
        |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
    )
}

const REFINE_POINTS: usize = 21;

/// Grid minimum of `l_function`, a local refinement of it, and the
/// minimum restricted to each plane `rho_i = rho_j`.
pub fn minimize_l(grid: &GridSpec) -> Result<LMinimum> {
    grid.validate()?;
    let axis = grid.axis();
    let p = axis.len();
    let at = |i: usize| [axis[i / (p * p)], axis[(i / p) % p], axis[i % p]];
    let eval = |x: [f64; 3]| l_function(&RhoVector::new_unchecked(x));

    let (grid_value, idx) = argmin_by_index(p * p * p, |i| eval(at(i)));
    let grid_argmin = at(idx);

    // refine within one coarse step of the best point, clamped to the box
    let step = grid.log_step();
    let (lo, hi) = (grid.lo.log2(), grid.hi.log2());
    let local: Vec<[f64; 2]> = grid_argmin
        .iter()
        .map(|&x| [(x.log2() - step).max(lo), (x.log2() + step).min(hi)])
        .collect();
    let fine = |axis: usize, k: usize| {
        let [a, b] = local[axis];
        (a + (b - a) * k as f64 / (REFINE_POINTS - 1) as f64).exp2()
    };
    let q = REFINE_POINTS;
    let fine_at = |i: usize| [fine(0, i / (q * q)), fine(1, (i / q) % q), fine(2, i % q)];
    let (fine_value, fine_idx) = argmin_by_index(q * q * q, |i| eval(fine_at(i)));
    let (value, argmin) = if fine_value < grid_value {
        (fine_value, fine_at(fine_idx))
    } else {
        (grid_value, grid_argmin)
    };

    let planes = [(0, 1), (1, 2), (0, 2)]
        .into_iter()
        .map(|(a, b)| {
            let c = 3 - a - b;
            let point = |i: usize| {
                let mut x = [0.0; 3];
                x[a] = axis[i / p];
                x[b] = axis[i / p];
                x[c] = axis[i % p];
                x
            };
            let (value, i) = argmin_by_index(p * p, |i| eval(point(i)));
            PlaneMinimum {
                plane: (a, b),
                value,
                argmin: point(i),
            }
        })
        .collect();

    Ok(LMinimum {
        grid: *grid,
        grid_value,
        grid_argmin,
        value,
        argmin,
        planes,
    })
}
