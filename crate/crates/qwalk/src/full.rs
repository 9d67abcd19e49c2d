//! Exact simulation on the full n * 2^n space.
//!
//! Amplitudes are indexed by `d * 2^n + x` where `d` is the coin direction
//! and `x` the node bit string. The walk operator is U = S * C with S the
//! direction-conditioned shift `|d, x> -> |d, x ^ (1 << d)>` and C the Grover
//! diffusion coin on the direction register (the marking coin at the target
//! when perturbed).

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{AmpPair, MarkingCoin, WalkConfig, DEFAULT_TOL};
use crate::error::{Error, Result};

/// Complex amplitude vector over (direction, node).
#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    n: usize,
    amps: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct FullStateRepr {
    n: usize,
    amps: Vec<AmpPair>,
}

impl Serialize for FullState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FullStateRepr {
            n: self.n,
            amps: self.amps.iter().map(|&z| z.into()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FullState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = FullStateRepr::deserialize(d)?;
        FullState::from_amps(repr.n, repr.amps.into_iter().map(Into::into).collect())
            .map_err(serde::de::Error::custom)
    }
}

impl FullState {
    /// Wraps an amplitude vector, checking only the length invariant.
    pub fn from_amps(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension { n, min: 2 });
        }
        let expected = n << n;
        if amps.len() != expected {
            return Err(Error::DimensionMismatch {
                state_n: amps.len(),
                expected_n: expected,
            });
        }
        Ok(FullState { n, amps })
    }

    /// The basis state |d, x>.
    pub fn basis(n: usize, d: usize, x: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension { n, min: 2 });
        }
        if d >= n {
            return Err(Error::BitIndexOutOfRange { index: d, n });
        }
        if x >= (1u64 << n) {
            return Err(Error::TargetOutOfRange { target: x, n });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); n << n];
        amps[(d << n) + x as usize] = Complex64::new(1.0, 0.0);
        Ok(FullState { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// Flat index of |d, x>.
    pub fn index(&self, d: usize, x: u64) -> usize {
        (d << self.n) + x as usize
    }

    pub fn amp(&self, d: usize, x: u64) -> Complex64 {
        self.amps[self.index(d, x)]
    }

    /// Squared norm, accumulated in index order for determinism.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Hermitian inner product <self|other>.
    pub fn inner(&self, other: &FullState) -> Result<Complex64> {
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

    /// Scales to unit norm.
    pub fn normalize(&mut self) {
        let norm = self.norm_sqr().sqrt();
        if norm > 0.0 {
            for z in &mut self.amps {
                *z /= norm;
            }
        }
    }

    fn check_normalized(&self, tol: f64) -> Result<()> {
        let deviation = (self.norm_sqr() - 1.0).abs();
        if deviation > tol {
            return Err(Error::NotNormalized { deviation, tol });
        }
        Ok(())
    }
}

/// Grover diffusion coin G = -I + 2|s><s| as an n x n matrix, G[i][j] = 2/n - delta_ij.
pub fn grover_coin(n: usize) -> Result<Vec<Vec<f64>>> {
    if n == 0 {
        return Err(Error::InvalidDimension { n, min: 1 });
    }
    let off = 2.0 / n as f64;
    Ok((0..n)
        .map(|i| (0..n).map(|j| if i == j { off - 1.0 } else { off }).collect())
        .collect())
}

/// Equal superposition over all n * 2^n basis states.
pub fn uniform_state(n: usize) -> Result<FullState> {
    uniform_state_capped(n, crate::config::max_n_from_env())
}

/// Equal superposition with an explicit memory cap.
pub fn uniform_state_capped(n: usize, max_n: usize) -> Result<FullState> {
    if n < 2 {
        return Err(Error::InvalidDimension { n, min: 2 });
    }
    if n > max_n {
        return Err(Error::CapacityExceeded { n, max_n });
    }
    let len = n << n;
    let a = 1.0 / (len as f64).sqrt();
    Ok(FullState {
        n,
        amps: vec![Complex64::new(a, 0.0); len],
    })
}

/// Shift S: moves the amplitude at (d, x) to (d, x ^ (1 << d)). A permutation,
/// and its own inverse.
pub fn apply_shift(s: &FullState) -> FullState {
    let n = s.n;
    let nodes = 1usize << n;
    let mut out = vec![Complex64::new(0.0, 0.0); s.amps.len()];
    for d in 0..n {
        let base = d << n;
        let flip = 1usize << d;
        for x in 0..nodes {
            out[base + (x ^ flip)] = s.amps[base + x];
        }
    }
    FullState { n, amps: out }
}

/// Coin operator: the Grover coin on every node block, or the marking coin on
/// the target block when `perturbed`. Uses the rank-one form
/// G v = (2/n) (sum v) - v.
pub fn apply_coin(s: &FullState, cfg: &WalkConfig, perturbed: bool) -> Result<FullState> {
    if s.n != cfg.n {
        return Err(Error::DimensionMismatch {
            state_n: s.n,
            expected_n: cfg.n,
        });
    }
    let n = s.n;
    let nodes = 1usize << n;
    let two_over_n = 2.0 / n as f64;
    let target = cfg.target as usize;
    let mut out = vec![Complex64::new(0.0, 0.0); s.amps.len()];
    let mut block = vec![Complex64::new(0.0, 0.0); n];
    for x in 0..nodes {
        for d in 0..n {
            block[d] = s.amps[(d << n) + x];
        }
        if perturbed && x == target {
            match &cfg.marking_coin {
                MarkingCoin::MinusIdentity => {
                    for d in 0..n {
                        out[(d << n) + x] = -block[d];
                    }
                }
                MarkingCoin::Custom(m) => {
                    for d in 0..n {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for (k, &b) in block.iter().enumerate() {
                            acc += m[d][k] * b;
                        }
                        out[(d << n) + x] = acc;
                    }
                }
            }
        } else {
            let sum: Complex64 = block.iter().sum();
            for d in 0..n {
                out[(d << n) + x] = two_over_n * sum - block[d];
            }
        }
    }
    Ok(FullState { n, amps: out })
}

/// One walk step, U = S * C (or U' = S * C' when perturbed).
pub fn step(s: &FullState, cfg: &WalkConfig, perturbed: bool) -> Result<FullState> {
    Ok(apply_shift(&apply_coin(s, cfg, perturbed)?))
}

/// t-fold application of `step`; t = 0 returns the input unchanged.
pub fn evolve(s: &FullState, cfg: &WalkConfig, t: u64, perturbed: bool) -> Result<FullState> {
    let mut cur = s.clone();
    for _ in 0..t {
        cur = step(&cur, cfg, perturbed)?;
    }
    Ok(cur)
}

/// Node-measurement distribution P[x] = sum_d |amp(d, x)|^2.
pub fn node_distribution(s: &FullState) -> Result<Vec<f64>> {
    node_distribution_tol(s, DEFAULT_TOL)
}

pub fn node_distribution_tol(s: &FullState, tol: f64) -> Result<Vec<f64>> {
    s.check_normalized(tol)?;
    let nodes = 1usize << s.n;
    let mut p = vec![0.0f64; nodes];
    for d in 0..s.n {
        let base = d << s.n;
        for x in 0..nodes {
            p[x] += s.amps[base + x].norm_sqr();
        }
    }
    Ok(p)
}

/// Seeded i.i.d. samples of (d, x) from |amps|^2.
pub fn sample_measurement(s: &FullState, seed: u64, trials: usize) -> Result<Vec<(usize, u64)>> {
    s.check_normalized(DEFAULT_TOL)?;
    let mut cumulative = Vec::with_capacity(s.amps.len());
    let mut acc = 0.0f64;
    for z in &s.amps {
        acc += z.norm_sqr();
        cumulative.push(acc);
    }
    let total = acc;
    let mut rng: ChaCha8Rng = rand::SeedableRng::seed_from_u64(seed);
    let nodes = 1u64 << s.n;
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let u: f64 = rng.gen::<f64>() * total;
        let idx = cumulative.partition_point(|&c| c <= u).min(s.amps.len() - 1);
        out.push((idx >> s.n, (idx as u64) & (nodes - 1)));
    }
    Ok(out)
}

/// Permutation P_ij: swaps node bits i and j and exchanges directions i and j.
pub fn apply_bit_swap(s: &FullState, i: usize, j: usize) -> Result<FullState> {
    let n = s.n;
    if i >= n {
        return Err(Error::BitIndexOutOfRange { index: i, n });
    }
    if j >= n {
        return Err(Error::BitIndexOutOfRange { index: j, n });
    }
    if i == j {
        return Ok(s.clone());
    }
    let nodes = 1usize << n;
    let mut out = vec![Complex64::new(0.0, 0.0); s.amps.len()];
    for d in 0..n {
        let d2 = if d == i {
            j
        } else if d == j {
            i
        } else {
            d
        };
        for x in 0..nodes {
            let bi = (x >> i) & 1;
            let bj = (x >> j) & 1;
            let x2 = if bi != bj {
                x ^ (1 << i) ^ (1 << j)
            } else {
                x
            };
            out[(d2 << n) + x2] = s.amps[(d << n) + x];
        }
    }
    Ok(FullState { n, amps: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_state(n: usize, seed: u64) -> FullState {
        let mut rng: ChaCha8Rng = rand::SeedableRng::seed_from_u64(seed);
        let amps: Vec<Complex64> = (0..(n << n))
            .map(|_| {
                Complex64::new(
                    rand::Rng::gen::<f64>(&mut rng) - 0.5,
                    rand::Rng::gen::<f64>(&mut rng) - 0.5,
                )
            })
            .collect();
        let mut s = FullState::from_amps(n, amps).unwrap();
        s.normalize();
        s
    }

    /// Dense U' matrix built column-by-column straight from the definition,
    /// for use as an independent oracle.
    fn dense_unitary(cfg: &WalkConfig, perturbed: bool) -> Vec<Vec<Complex64>> {
        let dim = cfg.n << cfg.n;
        let mut cols = Vec::with_capacity(dim);
        for col in 0..dim {
            let d = col >> cfg.n;
            let x = (col & ((1 << cfg.n) - 1)) as u64;
            let basis = FullState::basis(cfg.n, d, x).unwrap();
            cols.push(step(&basis, cfg, perturbed).unwrap().amps().to_vec());
        }
        // transpose columns into rows
        (0..dim)
            .map(|r| (0..dim).map(|c| cols[c][r]).collect())
            .collect()
    }

    fn matvec(m: &[Vec<Complex64>], v: &[Complex64]) -> Vec<Complex64> {
        m.iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    #[test]
    fn grover_coin_small() {
        assert_eq!(grover_coin(2).unwrap(), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(grover_coin(1).unwrap(), vec![vec![1.0]]);
        let g4 = grover_coin(4).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { -0.5 } else { 0.5 };
                assert_eq!(g4[i][j], expect);
            }
        }
        assert!(grover_coin(0).is_err());
    }

    #[test]
    fn grover_coin_is_orthogonal_involution() {
        for n in [1usize, 2, 3, 5, 8] {
            let g = grover_coin(n).unwrap();
            for i in 0..n {
                for j in 0..n {
                    let gg: f64 = (0..n).map(|k| g[i][k] * g[k][j]).sum();
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((gg - expect).abs() < 1e-14);
                    assert_eq!(g[i][j], g[j][i]);
                }
            }
        }
    }

    #[test]
    fn uniform_state_amplitudes() {
        let s = uniform_state(2).unwrap();
        assert_eq!(s.amps().len(), 8);
        for z in s.amps() {
            assert!((z.re - 1.0 / 8f64.sqrt()).abs() < 1e-15);
            assert_eq!(z.im, 0.0);
        }
        let s3 = uniform_state(3).unwrap();
        assert_eq!(s3.amps().len(), 24);
        assert!((s3.amps()[5].re - 1.0 / 24f64.sqrt()).abs() < 1e-15);
        for n in 2..=10 {
            assert!((uniform_state(n).unwrap().norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_state_capacity_error() {
        assert!(matches!(
            uniform_state_capped(25, 20),
            Err(Error::CapacityExceeded { n: 25, max_n: 20 })
        ));
    }

    #[test]
    fn shift_moves_basis_states() {
        let s = FullState::basis(3, 0, 0b000).unwrap();
        let shifted = apply_shift(&s);
        assert_eq!(shifted.amp(0, 0b001), Complex64::new(1.0, 0.0));

        let s = FullState::basis(3, 2, 0b101).unwrap();
        let shifted = apply_shift(&s);
        assert_eq!(shifted.amp(2, 0b001), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn shift_is_involution() {
        let s = random_state(4, 7);
        let back = apply_shift(&apply_shift(&s));
        for (a, b) in s.amps().iter().zip(back.amps()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn coin_negates_target_block() {
        let cfg = WalkConfig::new(3).unwrap().with_target(5).unwrap();
        let s = FullState::basis(3, 0, 5).unwrap();
        let out = apply_coin(&s, &cfg, true).unwrap();
        assert_eq!(out.amp(0, 5), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn coin_applies_grover_column() {
        let cfg = WalkConfig::new(4).unwrap();
        let s = FullState::basis(4, 0, 3).unwrap();
        let out = apply_coin(&s, &cfg, false).unwrap();
        for d in 0..4 {
            let expect = if d == 0 { -0.5 } else { 0.5 };
            assert!((out.amp(d, 3) - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn perturbed_coin_matches_dense_oracle_n2() {
        let cfg = WalkConfig::new(2).unwrap();
        let s = uniform_state(2).unwrap();
        let out = apply_coin(&s, &cfg, true).unwrap();
        // 8x8 oracle: C' = G (x) I + (-I - G) (x) |0><0|, multiplied directly.
        let g = grover_coin(2).unwrap();
        let mut oracle = vec![Complex64::new(0.0, 0.0); 8];
        for d in 0..2usize {
            for x in 0..4u64 {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..2usize {
                    let c = if x == 0 {
                        if d == k {
                            -1.0
                        } else {
                            0.0
                        }
                    } else {
                        g[d][k]
                    };
                    acc += c * s.amp(k, x);
                }
                oracle[(d << 2) + x as usize] = acc;
            }
        }
        for (a, b) in out.amps().iter().zip(&oracle) {
            assert!((a - b).norm() < 1e-14);
        }
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn perturbed_step_leaves_small_residual_overlap() {
        for n in 2..=12 {
            let cfg = WalkConfig::new(n).unwrap();
            let s = uniform_state(n).unwrap();
            let out = step(&s, &cfg, true).unwrap();
            let overlap = s.inner(&out).unwrap();
            let expect = 1.0 - 1.0 / 2f64.powi(n as i32 - 1);
            assert!(
                (overlap.re - expect).abs() < 1e-12 && overlap.im.abs() < 1e-12,
                "n={n}: overlap {overlap}"
            );
        }
    }

    #[test]
    fn unperturbed_step_fixes_uniform() {
        for n in [2usize, 4, 8] {
            let cfg = WalkConfig::new(n).unwrap();
            let s = uniform_state(n).unwrap();
            let out = evolve(&s, &cfg, 100, false).unwrap();
            for (a, b) in s.amps().iter().zip(out.amps()) {
                assert!((a - b).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn evolve_matches_dense_oracle_n4() {
        let cfg = WalkConfig::new(4).unwrap();
        let u = dense_unitary(&cfg, true);
        let s = random_state(4, 11);
        let once = matvec(&u, s.amps());
        let oracle = matvec(&u, &once);
        let out = evolve(&s, &cfg, 2, true).unwrap();
        for (a, b) in out.amps().iter().zip(&oracle) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn evolve_zero_steps_is_identity() {
        let cfg = WalkConfig::new(3).unwrap();
        let s = random_state(3, 1);
        let out = evolve(&s, &cfg, 0, true).unwrap();
        assert_eq!(s, out);
    }

    #[test]
    fn node_distribution_uniform_and_basis() {
        let p = node_distribution(&uniform_state(3).unwrap()).unwrap();
        for &v in &p {
            assert!((v - 0.125).abs() < 1e-12);
        }
        let p = node_distribution(&FullState::basis(3, 1, 5).unwrap()).unwrap();
        for (x, &v) in p.iter().enumerate() {
            let expect = if x == 5 { 1.0 } else { 0.0 };
            assert!((v - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn node_distribution_rejects_unnormalized() {
        let mut s = uniform_state(2).unwrap();
        s = FullState::from_amps(2, s.amps().iter().map(|z| z * 2.0).collect()).unwrap();
        assert!(matches!(
            node_distribution(&s),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn sampling_basis_state_and_determinism() {
        let s = FullState::basis(3, 1, 5).unwrap();
        for (d, x) in sample_measurement(&s, 42, 50).unwrap() {
            assert_eq!((d, x), (1, 5));
        }
        let s = uniform_state(2).unwrap();
        let a = sample_measurement(&s, 7, 1000).unwrap();
        let b = sample_measurement(&s, 7, 1000).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sampling_uniform_frequencies() {
        let s = uniform_state(2).unwrap();
        let samples = sample_measurement(&s, 3, 100_000).unwrap();
        let mut counts = [0usize; 8];
        for (d, x) in samples {
            counts[(d << 2) + x as usize] += 1;
        }
        for c in counts {
            let freq = c as f64 / 100_000.0;
            assert!((freq - 0.125).abs() < 0.01, "freq {freq}");
        }
    }

    #[test]
    fn bit_swap_definition_and_involution() {
        let s = FullState::basis(2, 0, 0b01).unwrap();
        let out = apply_bit_swap(&s, 0, 1).unwrap();
        assert_eq!(out.amp(1, 0b10), Complex64::new(1.0, 0.0));

        let s = random_state(4, 5);
        let same = apply_bit_swap(&s, 2, 2).unwrap();
        assert_eq!(s, same);
        let twice = apply_bit_swap(&apply_bit_swap(&s, 1, 3).unwrap(), 1, 3).unwrap();
        assert_eq!(s, twice);
        assert!(apply_bit_swap(&s, 0, 4).is_err());
    }

    #[test]
    fn commutation_with_bit_swaps() {
        // The perturbed walk commutes with every bit-swap permutation.
        let cfg = WalkConfig::new(4).unwrap();
        for i in 0..4 {
            for j in (i + 1)..4 {
                for seed in 0..20 {
                    let s = random_state(4, 100 + seed);
                    let a = step(&apply_bit_swap(&s, i, j).unwrap(), &cfg, true).unwrap();
                    let b = apply_bit_swap(&step(&s, &cfg, true).unwrap(), i, j).unwrap();
                    for (x, y) in a.amps().iter().zip(b.amps()) {
                        assert!((x - y).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn serde_round_trip() {
        let s = random_state(3, 9);
        let json = serde_json::to_string(&s).unwrap();
        let back: FullState = serde_json::from_str(&json).unwrap();
        assert_eq!(s, back);
    }

    proptest! {
        #[test]
        fn step_preserves_norm(seed in 0u64..500, n in 2usize..7, perturbed: bool) {
            let cfg = WalkConfig::new(n).unwrap();
            let s = random_state(n, seed);
            let out = step(&s, &cfg, perturbed).unwrap();
            prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn shift_and_swap_are_permutations(seed in 0u64..200) {
            let s = random_state(3, seed);
            let shifted = apply_shift(&s);
            prop_assert!((shifted.norm_sqr() - s.norm_sqr()).abs() < 1e-15);
            let swapped = apply_bit_swap(&s, 0, 2).unwrap();
            prop_assert!((swapped.norm_sqr() - s.norm_sqr()).abs() < 1e-15);
        }
    }
}
