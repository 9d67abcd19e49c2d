use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default memory cap: n = 20 keeps the full state vector (n * 2^n complex
/// doubles) around 320 MB.
pub const DEFAULT_MAX_N: usize = 20;

/// Default tolerance for norm and invariant checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Tolerance for exact permutation identities (S^2 = I, bit swaps).
pub const PERMUTATION_TOL: f64 = 1e-12;

/// The coin applied at the marked node.
#[derive(Debug, Clone, PartialEq)]
pub enum MarkingCoin {
    /// C1 = -I, the choice with a full analytic treatment.
    MinusIdentity,
    /// An arbitrary n x n unitary, row-major. Accepted and validated for
    /// unitarity only; no spectral claims are made for it.
    Custom(Vec<Vec<Complex64>>),
}

impl MarkingCoin {
    /// Max-norm unitarity residual ||M^† M - I||_max.
    pub fn unitarity_residual(&self) -> f64 {
        match self {
            MarkingCoin::MinusIdentity => 0.0,
            MarkingCoin::Custom(m) => {
                let n = m.len();
                let mut worst = 0.0f64;
                for i in 0..n {
                    for j in 0..n {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for k in 0..n {
                            acc += m[k][i].conj() * m[k][j];
                        }
                        let target = if i == j { 1.0 } else { 0.0 };
                        worst = worst.max((acc - target).norm());
                    }
                }
                worst
            }
        }
    }
}

/// Parameters of one walk instance.
#[derive(Debug, Clone)]
pub struct WalkConfig {
    pub n: usize,
    pub target: u64,
    pub marking_coin: MarkingCoin,
    pub tol: f64,
    pub seed: u64,
    pub max_n: usize,
}

impl WalkConfig {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension { n, min: 2 });
        }
        Ok(WalkConfig {
            n,
            target: 0,
            marking_coin: MarkingCoin::MinusIdentity,
            tol: DEFAULT_TOL,
            seed: 0,
            max_n: max_n_from_env(),
        })
    }

    pub fn with_target(mut self, target: u64) -> Result<Self> {
        if self.n < 64 && target >= (1u64 << self.n) {
            return Err(Error::TargetOutOfRange { target, n: self.n });
        }
        self.target = target;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_n(mut self, max_n: usize) -> Self {
        self.max_n = max_n;
        self
    }

    pub fn with_marking_coin(mut self, coin: MarkingCoin) -> Result<Self> {
        if let MarkingCoin::Custom(m) = &coin {
            if m.len() != self.n || m.iter().any(|row| row.len() != self.n) {
                return Err(Error::CoinDimensionMismatch {
                    coin_n: m.len(),
                    expected_n: self.n,
                });
            }
            let residual = coin.unitarity_residual();
            if residual > self.tol {
                return Err(Error::NonUnitaryCoin { residual });
            }
        }
        self.marking_coin = coin;
        Ok(self)
    }

    /// Errors unless the full n * 2^n state vector fits under the cap.
    pub fn check_capacity(&self) -> Result<()> {
        if self.n > self.max_n {
            return Err(Error::CapacityExceeded {
                n: self.n,
                max_n: self.max_n,
            });
        }
        Ok(())
    }
}

/// Memory cap, honoring the QWALK_MAX_N environment variable.
pub fn max_n_from_env() -> usize {
    std::env::var("QWALK_MAX_N")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_N)
}

/// Complex amplitude serialized as a `[re, im]` pair.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AmpPair(pub f64, pub f64);

impl From<Complex64> for AmpPair {
    fn from(z: Complex64) -> Self {
        AmpPair(z.re, z.im)
    }
}

impl From<AmpPair> for Complex64 {
    fn from(p: AmpPair) -> Self {
        Complex64::new(p.0, p.1)
    }
}
