//! Simulation in the 2n-dimensional bit-swap-symmetric subspace.
//!
//! The symmetric basis is ordered |R,0>, |L,1>, |R,1>, |L,2>, ..., |R,n-1>,
//! |L,n>: R,x sits at index 2x and L,x at 2x-1. Interleaving R and L keeps
//! the collapsed walk operator banded (|row - col| <= 2), so a step is O(n).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::binom::{binomial, ln_binomial, sqrt_binomial_over_pow2};
use crate::config::{AmpPair, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::full::FullState;

/// Largest n for which the collapsed operator is stored dense; above this the
/// banded representation is used. Results agree to 1e-14 between the two.
pub const DENSE_LIMIT_N: usize = 64;

/// Complex amplitude vector over the 2n symmetric basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct CollapsedState {
    n: usize,
    amps: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct CollapsedStateRepr {
    n: usize,
    amps: Vec<AmpPair>,
}

impl Serialize for CollapsedState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CollapsedStateRepr {
            n: self.n,
            amps: self.amps.iter().map(|&z| z.into()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CollapsedState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CollapsedStateRepr::deserialize(d)?;
        CollapsedState::from_amps(repr.n, repr.amps.into_iter().map(Into::into).collect())
            .map_err(serde::de::Error::custom)
    }
}

impl CollapsedState {
    pub fn from_amps(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension { n, min: 2 });
        }
        if amps.len() != 2 * n {
            return Err(Error::DimensionMismatch {
                state_n: amps.len(),
                expected_n: 2 * n,
            });
        }
        Ok(CollapsedState { n, amps })
    }

    /// Index of |R,x>, valid for x in [0, n).
    pub fn r_index(x: usize) -> usize {
        2 * x
    }

    /// Index of |L,x>, valid for x in [1, n].
    pub fn l_index(x: usize) -> usize {
        2 * x - 1
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp_r(&self, x: usize) -> Complex64 {
        self.amps[Self::r_index(x)]
    }

    pub fn amp_l(&self, x: usize) -> Complex64 {
        self.amps[Self::l_index(x)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &CollapsedState) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                state_n: other.n,
                expected_n: self.n,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn normalize(&mut self) {
        let norm = self.norm_sqr().sqrt();
        if norm > 0.0 {
            for z in &mut self.amps {
                *z /= norm;
            }
        }
    }
}

/// The collapsed initial state: amp(R,x) = sqrt(C(n-1,x)/2^n) and
/// amp(L,x) = sqrt(C(n-1,x-1)/2^n).
pub fn collapsed_initial_state(n: usize) -> Result<CollapsedState> {
    if n < 2 {
        return Err(Error::InvalidDimension { n, min: 2 });
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 2 * n];
    let nn = n as u64;
    for x in 0..n {
        amps[CollapsedState::r_index(x)] =
            Complex64::new(sqrt_binomial_over_pow2(nn - 1, x as u64, nn), 0.0);
    }
    for x in 1..=n {
        amps[CollapsedState::l_index(x)] =
            Complex64::new(sqrt_binomial_over_pow2(nn - 1, x as u64 - 1, nn), 0.0);
    }
    Ok(CollapsedState { n, amps })
}

/// The companion state psi_1 with amplitudes +-1/(c sqrt(2 C(n-1,x))) on the
/// first n/2 R/L pairs, together with its normalization constant c.
/// Defined only for even n.
pub fn psi1_state(n: usize) -> Result<(CollapsedState, f64)> {
    if n % 2 != 0 {
        return Err(Error::OddDimension { n });
    }
    if n < 4 {
        return Err(Error::InvalidDimension { n, min: 4 });
    }
    let nn = n as u64;
    let c_sqr: f64 = (0..n / 2)
        .map(|x| (-ln_binomial(nn - 1, x as u64)).exp())
        .sum();
    let c = c_sqr.sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); 2 * n];
    for x in 0..n / 2 {
        let a = (-0.5 * (ln_binomial(nn - 1, x as u64) + std::f64::consts::LN_2)).exp() / c;
        amps[CollapsedState::r_index(x)] = Complex64::new(a, 0.0);
        amps[CollapsedState::l_index(x + 1)] = Complex64::new(-a, 0.0);
    }
    Ok((CollapsedState { n, amps }, c))
}

enum Storage {
    /// Row-major 2n x 2n matrix.
    Dense(Vec<f64>),
    /// Per-row entries for offsets col - row in {-2,-1,0,1,2}.
    Banded(Vec<[f64; 5]>),
}

/// The collapsed walk operator U (or U' when perturbed).
pub struct CollapsedOperator {
    n: usize,
    perturbed: bool,
    storage: Storage,
}

fn cos_omega(n: usize, x: usize) -> f64 {
    1.0 - 2.0 * x as f64 / n as f64
}

fn sin_omega(n: usize, x: usize) -> f64 {
    2.0 / n as f64 * ((x * (n - x)) as f64).sqrt()
}

/// Matrix entry of the collapsed U/U' at (row, col).
///
/// Columns follow U|R,x> = sin w_x |R,x-1> + cos w_x |L,x+1> and
/// U|L,x> = sin w_x |L,x+1> - cos w_x |R,x-1>; the perturbation flips the
/// sign of the (L,1; R,0) entry.
fn entry(n: usize, perturbed: bool, row: usize, col: usize) -> f64 {
    let dim = 2 * n;
    debug_assert!(row < dim && col < dim);
    if col % 2 == 0 {
        // col = |R,x>
        let x = col / 2;
        if x >= 1 && row == CollapsedState::r_index(x - 1) {
            return sin_omega(n, x);
        }
        if row == CollapsedState::l_index(x + 1) {
            return if perturbed && x == 0 {
                -cos_omega(n, 0)
            } else {
                cos_omega(n, x)
            };
        }
    } else {
        // col = |L,x>
        let x = (col + 1) / 2;
        if x <= n - 1 && row == CollapsedState::l_index(x + 1) {
            return sin_omega(n, x);
        }
        if row == CollapsedState::r_index(x - 1) {
            return -cos_omega(n, x);
        }
    }
    0.0
}

/// Builds the collapsed walk operator for dimension n.
pub fn build_collapsed_unitary(n: usize, perturbed: bool) -> Result<CollapsedOperator> {
    if n < 2 {
        return Err(Error::InvalidDimension { n, min: 2 });
    }
    let storage = if n <= DENSE_LIMIT_N {
        dense_storage(n, perturbed)
    } else {
        banded_storage(n, perturbed)
    };
    Ok(CollapsedOperator {
        n,
        perturbed,
        storage,
    })
}

fn dense_storage(n: usize, perturbed: bool) -> Storage {
    let dim = 2 * n;
    let mut m = vec![0.0f64; dim * dim];
    for row in 0..dim {
        for col in row.saturating_sub(2)..dim.min(row + 3) {
            m[row * dim + col] = entry(n, perturbed, row, col);
        }
    }
    Storage::Dense(m)
}

fn banded_storage(n: usize, perturbed: bool) -> Storage {
    let dim = 2 * n;
    let rows = (0..dim)
        .map(|row| {
            let mut band = [0.0f64; 5];
            for (slot, off) in (-2i64..=2).enumerate() {
                let col = row as i64 + off;
                if col >= 0 && (col as usize) < dim {
                    band[slot] = entry(n, perturbed, row, col as usize);
                }
            }
            band
        })
        .collect();
    Storage::Banded(rows)
}

impl CollapsedOperator {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn perturbed(&self) -> bool {
        self.perturbed
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        match &self.storage {
            Storage::Dense(m) => m[row * self.dim() + col],
            Storage::Banded(rows) => {
                let off = col as i64 - row as i64;
                if (-2..=2).contains(&off) {
                    rows[row][(off + 2) as usize]
                } else {
                    0.0
                }
            }
        }
    }

    /// Dense row-major copy of the matrix.
    pub fn to_dense(&self) -> Vec<f64> {
        let dim = self.dim();
        let mut m = vec![0.0f64; dim * dim];
        for row in 0..dim {
            for col in 0..dim {
                m[row * dim + col] = self.entry(row, col);
            }
        }
        m
    }

    /// Max-norm orthogonality residual ||M^T M - I||_max.
    pub fn orthogonality_residual(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = 0.0;
                for k in 0..dim {
                    acc += self.entry(k, i) * self.entry(k, j);
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((acc - target).abs());
            }
        }
        worst
    }

    /// Applies the operator to a state. Both storage layouts accumulate the
    /// nonzero band in the same column order, so they agree bitwise.
    pub fn apply(&self, s: &CollapsedState) -> Result<CollapsedState> {
        if s.n != self.n {
            return Err(Error::DimensionMismatch {
                state_n: s.n,
                expected_n: self.n,
            });
        }
        let dim = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        match &self.storage {
            Storage::Dense(m) => {
                for row in 0..dim {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for col in row.saturating_sub(2)..dim.min(row + 3) {
                        acc += m[row * dim + col] * s.amps[col];
                    }
                    out[row] = acc;
                }
            }
            Storage::Banded(rows) => {
                for row in 0..dim {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (slot, off) in (-2i64..=2).enumerate() {
                        let col = row as i64 + off;
                        if col >= 0 && (col as usize) < dim {
                            acc += rows[row][slot] * s.amps[col as usize];
                        }
                    }
                    out[row] = acc;
                }
            }
        }
        Ok(CollapsedState { n: self.n, amps: out })
    }

    /// CSV dump of the nonzero entries as (row, col, value) triples.
    pub fn to_csv(&self) -> String {
        let dim = self.dim();
        let mut csv = String::from("#schema=qwalk.operator.v1\nrow,col,value\n");
        for row in 0..dim {
            for col in row.saturating_sub(2)..dim.min(row + 3) {
                let v = self.entry(row, col);
                if v != 0.0 {
                    csv.push_str(&format!("{row},{col},{v}\n"));
                }
            }
        }
        csv
    }
}

#[derive(Serialize, Deserialize)]
struct CollapsedOperatorRepr {
    n: usize,
    perturbed: bool,
    matrix: Vec<Vec<f64>>,
}

impl Serialize for CollapsedOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let dim = self.dim();
        CollapsedOperatorRepr {
            n: self.n,
            perturbed: self.perturbed,
            matrix: (0..dim)
                .map(|r| (0..dim).map(|c| self.entry(r, c)).collect())
                .collect(),
        }
        .serialize(s)
    }
}

/// One collapsed step, out = M * s.
pub fn collapsed_step(s: &CollapsedState, op: &CollapsedOperator) -> Result<CollapsedState> {
    op.apply(s)
}

/// Projects a full state onto the symmetric basis: amp(R,x) and amp(L,x) are
/// the overlaps with |R,x> and |L,x>. Norm is preserved for bit-swap
/// symmetric inputs and may shrink otherwise.
pub fn collapse(s: &FullState) -> CollapsedState {
    let n = s.n();
    let nodes = 1u64 << n;
    let mut acc_r = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut acc_l = vec![Complex64::new(0.0, 0.0); n + 1];
    for x in 0..nodes {
        let w = x.count_ones() as usize;
        for d in 0..n {
            if (x >> d) & 1 == 0 {
                acc_r[w] += s.amp(d, x);
            } else {
                acc_l[w] += s.amp(d, x);
            }
        }
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 2 * n];
    for x in 0..n {
        let scale = 1.0 / (((n - x) as f64) * binomial(n as u64, x as u64)).sqrt();
        amps[CollapsedState::r_index(x)] = acc_r[x] * scale;
    }
    for x in 1..=n {
        let scale = 1.0 / ((x as f64) * binomial(n as u64, x as u64)).sqrt();
        amps[CollapsedState::l_index(x)] = acc_l[x] * scale;
    }
    CollapsedState { n, amps }
}

/// Probability of measuring the marked node: |amp(R,0)|^2.
pub fn marked_probability(s: &CollapsedState) -> Result<f64> {
    marked_probability_tol(s, DEFAULT_TOL)
}

pub fn marked_probability_tol(s: &CollapsedState, tol: f64) -> Result<f64> {
    let deviation = (s.norm_sqr() - 1.0).abs();
    if deviation > tol {
        return Err(Error::NotNormalized { deviation, tol });
    }
    Ok(s.amps[0].norm_sqr())
}
