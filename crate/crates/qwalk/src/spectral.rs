//! Eigendecomposition of the collapsed walk operators and the checks on the
//! arc structure, the overlaps p0/p1, the relative phase eta and the rotation
//! angle omega'_0.
//!
//! The operators are real orthogonal, so M commutes with its symmetric part
//! K = (M + M^T)/2. K is diagonalized with a symmetric solver; inside each
//! eigenspace of K (eigenvalue cos w) the antisymmetric part acts as a
//! rotation by w, which yields the complex conjugate eigenvector pairs
//! directly. This avoids a general nonsymmetric solver entirely.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::binom::binomial;
use crate::collapsed::{build_collapsed_unitary, collapsed_initial_state, psi1_state, CollapsedOperator};
use crate::error::{Error, Result};

/// Default residual tolerance for eigenpairs.
pub const DEFAULT_TOL_EIG: f64 = 1e-9;

/// Inputs must be orthogonal to this residual.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// Cap constant for the rotation-angle bound: | |omega'_0| - 1/(c sqrt(2^{n-1})) |
/// must stay below OMEGA_CAP * n^{3/2} / 2^n. Calibrated by a sweep over even
/// n in 8..=32 with 2x headroom (see tests/fixtures/caps.json).
pub const OMEGA_CAP: f64 = 0.03;

/// |e^{i eta} - i| is flagged above this.
pub const ETA_DELTA_CAP: f64 = 0.2;

/// Unit-modulus eigenvalue with its eigenvector and residual ||Mv - lambda v||.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: Complex64,
    pub vector: Vec<Complex64>,
    pub residual: f64,
}

/// Per-n outcome of the analytic spectral checks.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralSummary {
    pub n: usize,
    /// |omega'_0|, the positive member of the conjugate pair, in radians.
    pub omega0: f64,
    /// Predicted center 1/(c sqrt(2^{n-1})).
    pub omega0_predicted: f64,
    pub p0: f64,
    pub p1: f64,
    /// e^{i eta} as (re, im).
    pub eta: (f64, f64),
    /// |e^{i eta} - i|.
    pub delta_abs: f64,
    pub c: f64,
    pub arc_count: usize,
    /// 1 - p0 - p1, the mass outside the psi_0/psi_1 plane.
    pub residual_mass: f64,
    /// True when the conjugate pair degenerated to omega'_0 = 0 and real
    /// combinations were used.
    pub degenerate: bool,
    pub p0_bound: f64,
    pub p1_bound: f64,
    pub omega_bound: f64,
    pub p0_ok: bool,
    pub p1_ok: bool,
    pub eta_ok: bool,
    pub omega_ok: bool,
}

fn complex_matvec(m: &DMatrix<f64>, v: &[Complex64]) -> Vec<Complex64> {
    let dim = m.nrows();
    (0..dim)
        .map(|r| {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..dim {
                acc += m[(r, c)] * v[c];
            }
            acc
        })
        .collect()
}

fn rayleigh(m: &DMatrix<f64>, v: &[Complex64]) -> Complex64 {
    let mv = complex_matvec(m, v);
    v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
}

fn residual(m: &DMatrix<f64>, v: &[Complex64], lambda: Complex64) -> f64 {
    let mv = complex_matvec(m, v);
    mv.iter()
        .zip(v)
        .map(|(a, b)| (a - lambda * b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Eigendecomposition of a real orthogonal matrix (row-major, dim x dim).
///
/// Returns all `dim` eigenpairs with orthonormal eigenvectors, closed under
/// complex conjugation, sorted by angle in (-pi, pi] ascending with ties
/// broken by the sign of the imaginary part.
pub fn eigendecompose(matrix: &[f64], dim: usize, tol_eig: f64) -> Result<Vec<EigenPair>> {
    eigendecompose_labeled(matrix, dim, tol_eig, "matrix")
}

pub fn eigendecompose_labeled(
    matrix: &[f64],
    dim: usize,
    tol_eig: f64,
    context: &str,
) -> Result<Vec<EigenPair>> {
    assert_eq!(matrix.len(), dim * dim, "matrix data length mismatch");
    let m = DMatrix::from_row_slice(dim, dim, matrix);
    let ortho = (m.transpose() * &m - DMatrix::identity(dim, dim)).abs().max();
    if ortho > ORTHOGONALITY_TOL {
        return Err(Error::NotOrthogonal { residual: ortho });
    }

    let k = (&m + m.transpose()) * 0.5;
    let sym = SymmetricEigen::new(k);

    // group K-eigenvectors by eigenvalue cos(w)
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| sym.eigenvalues[b].partial_cmp(&sym.eigenvalues[a]).unwrap());

    let group_tol = 1e-7;
    let mut pairs: Vec<EigenPair> = Vec::with_capacity(dim);
    let mut start = 0;
    while start < dim {
        let mu = sym.eigenvalues[order[start]];
        let mut end = start + 1;
        while end < dim && (sym.eigenvalues[order[end]] - mu).abs() <= group_tol {
            end += 1;
        }
        let g = end - start;
        let mut q = DMatrix::zeros(dim, g);
        for (col, &idx) in order[start..end].iter().enumerate() {
            q.set_column(col, &sym.eigenvectors.column(idx));
        }
        decompose_group(&m, &q, &mut pairs).map_err(|detail| Error::EigenFailure {
            context: context.to_string(),
            n: dim / 2,
            detail,
        })?;
        start = end;
    }

    for p in &pairs {
        if p.residual > tol_eig || (p.value.norm() - 1.0).abs() > tol_eig {
            return Err(Error::EigenFailure {
                context: context.to_string(),
                n: dim / 2,
                detail: format!(
                    "eigenpair residual {:.3e} (|lambda| = {}) exceeds tolerance {:.1e}",
                    p.residual,
                    p.value.norm(),
                    tol_eig
                ),
            });
        }
    }

    pairs.sort_by(|a, b| {
        let aa = a.value.arg();
        let ab = b.value.arg();
        aa.partial_cmp(&ab)
            .unwrap()
            .then(a.value.im.partial_cmp(&b.value.im).unwrap())
    });
    Ok(pairs)
}

/// Extracts the eigenpairs living in one eigenspace of the symmetric part.
fn decompose_group(
    m: &DMatrix<f64>,
    q: &DMatrix<f64>,
    out: &mut Vec<EigenPair>,
) -> std::result::Result<(), String> {
    let g = q.ncols();
    let b = q.transpose() * m * q;
    let a = (&b - b.transpose()) * 0.5;
    // -A^2 is symmetric PSD with eigenvalues sin^2(w)
    let s2 = -(&a * &a);
    let sub = SymmetricEigen::new(s2);

    let mut order: Vec<usize> = (0..g).collect();
    order.sort_by(|&x, &y| sub.eigenvalues[y].partial_cmp(&sub.eigenvalues[x]).unwrap());

    let s_tol = 1e-7;
    let mut start = 0;
    while start < g {
        let s = sub.eigenvalues[order[start]].max(0.0).sqrt();
        let mut end = start + 1;
        while end < g && (sub.eigenvalues[order[end]].max(0.0).sqrt() - s).abs() <= s_tol {
            end += 1;
        }
        if s <= s_tol {
            // real eigenvectors, eigenvalue +-1
            for &idx in &order[start..end] {
                let w = sub.eigenvectors.column(idx).into_owned();
                let v_real = q * w;
                let v: Vec<Complex64> =
                    v_real.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                let lambda = rayleigh(m, &v);
                let res = residual(m, &v, lambda);
                out.push(EigenPair {
                    value: lambda,
                    vector: v,
                    residual: res,
                });
            }
        } else {
            // conjugate pairs: within this subspace A/s is a complex structure J
            let sub_dim = end - start;
            if sub_dim % 2 != 0 {
                return Err(format!(
                    "odd-dimensional rotation block (dim {sub_dim}, sin w = {s:.3e})"
                ));
            }
            let mut used: Vec<DVector<f64>> = Vec::with_capacity(sub_dim);
            let mut built = 0;
            for &idx in &order[start..end] {
                if built == sub_dim / 2 {
                    break;
                }
                let mut u = sub.eigenvectors.column(idx).into_owned();
                for w in &used {
                    let proj = w.dot(&u);
                    u -= w * proj;
                }
                let norm = u.norm();
                if norm < 1e-6 {
                    continue;
                }
                u /= norm;
                let mut ju = (&a * &u) / s;
                for w in &used {
                    let proj = w.dot(&ju);
                    ju -= w * proj;
                }
                let proj = u.dot(&ju);
                ju -= &u * proj;
                let jnorm = ju.norm();
                if jnorm < 1e-6 {
                    return Err(format!("degenerate rotation pair (|Ju| = {jnorm:.3e})"));
                }
                ju /= jnorm;

                let qu = q * &u;
                let qju = q * &ju;
                let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
                let v_plus: Vec<Complex64> = qu
                    .iter()
                    .zip(qju.iter())
                    .map(|(&re, &im)| Complex64::new(re * inv_sqrt2, -im * inv_sqrt2))
                    .collect();
                let lambda = rayleigh(m, &v_plus);
                let res_plus = residual(m, &v_plus, lambda);
                let v_minus: Vec<Complex64> = v_plus.iter().map(|z| z.conj()).collect();
                let res_minus = residual(m, &v_minus, lambda.conj());
                out.push(EigenPair {
                    value: lambda,
                    vector: v_plus,
                    residual: res_plus,
                });
                out.push(EigenPair {
                    value: lambda.conj(),
                    vector: v_minus,
                    residual: res_minus,
                });
                used.push(u);
                used.push(ju);
                built += 1;
            }
            if built != sub_dim / 2 {
                return Err(format!(
                    "could not complete rotation block (built {built} of {})",
                    sub_dim / 2
                ));
            }
        }
        start = end;
    }
    Ok(())
}

/// Eigendecomposition of a collapsed operator.
pub fn eigendecompose_operator(op: &CollapsedOperator, tol_eig: f64) -> Result<Vec<EigenPair>> {
    let label = if op.perturbed() {
        "collapsed U'"
    } else {
        "collapsed U"
    };
    eigendecompose_labeled(&op.to_dense(), op.dim(), tol_eig, label)
}

/// Arc threshold Re z > 1 - 2/(3n).
pub fn arc_threshold(n: usize) -> f64 {
    1.0 - 2.0 / (3.0 * n as f64)
}

/// Eigenpairs on the arc, preserving order.
pub fn arc_members(spectrum: &[EigenPair], n: usize) -> Vec<EigenPair> {
    let threshold = arc_threshold(n);
    spectrum
        .iter()
        .filter(|p| p.value.re > threshold)
        .cloned()
        .collect()
}

/// Closed-form unperturbed eigenvalue pair e^{+-i w_k} = 1 - 2k/n +- (2i/n) sqrt(k(n-k)).
pub fn unperturbed_eigenvalue(n: usize, k: usize) -> Result<(Complex64, Complex64)> {
    if k > n {
        return Err(Error::EigenIndexOutOfRange { k, n });
    }
    let re = 1.0 - 2.0 * k as f64 / n as f64;
    let im = 2.0 / n as f64 * ((k * (n - k)) as f64).sqrt();
    Ok((Complex64::new(re, im), Complex64::new(re, -im)))
}

/// Builds collapsed U', decomposes it and evaluates the analytic bounds for one n.
pub fn spectral_summary(n: usize, tol_eig: f64) -> Result<SpectralSummary> {
    if n % 2 != 0 {
        return Err(Error::OddDimension { n });
    }
    if n < 4 {
        return Err(Error::InvalidDimension { n, min: 4 });
    }
    if n > crate::collapsed::DENSE_LIMIT_N {
        return Err(Error::CapacityExceeded {
            n,
            max_n: crate::collapsed::DENSE_LIMIT_N,
        });
    }

    let op = build_collapsed_unitary(n, true)?;
    let spectrum = eigendecompose_operator(&op, tol_eig)?;
    let arc = arc_members(&spectrum, n);
    if arc.len() != 2 {
        return Err(Error::ArcCount { found: arc.len(), n });
    }

    let psi0 = collapsed_initial_state(n)?;
    let (psi1, c) = psi1_state(n)?;

    // Take the negative-angle member of the pair: in the gauge where the
    // psi_0 overlap is real positive its psi_1 overlap carries e^{i eta} with
    // eta near +pi/2.
    let degenerate = arc.iter().all(|p| p.value.im.abs() <= tol_eig);
    let member = if degenerate {
        &arc[0]
    } else {
        arc.iter()
            .find(|p| p.value.im < 0.0)
            .expect("conjugate pair has a negative-angle member")
    };
    let omega0 = member.value.arg().abs();

    let overlap0: Complex64 = psi0
        .amps()
        .iter()
        .zip(&member.vector)
        .map(|(a, b)| a.conj() * b)
        .sum();
    let phase = if overlap0.norm() > 0.0 {
        overlap0 / overlap0.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let gauge = phase.conj();
    let overlap1: Complex64 = psi1
        .amps()
        .iter()
        .zip(&member.vector)
        .map(|(a, b)| a.conj() * b * gauge)
        .sum();

    let p0 = overlap0.norm_sqr();
    let p1 = overlap1.norm_sqr();
    let eta = if overlap1.norm() > 0.0 {
        overlap1 / overlap1.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let delta_abs = (eta - Complex64::new(0.0, 1.0)).norm();

    let pow2n = 2f64.powi(n as i32);
    let p0_bound = 0.5 - 3.0 * n as f64 / (2.0 * pow2n);
    let p1_bound = 0.5 - 3.0 * n as f64 / (8.0 * c * c * binomial(n as u64 - 1, n as u64 / 2));
    let omega0_predicted = 1.0 / (c * (pow2n / 2.0).sqrt());
    let omega_bound = OMEGA_CAP * (n as f64).powf(1.5) / pow2n;

    Ok(SpectralSummary {
        n,
        omega0,
        omega0_predicted,
        p0,
        p1,
        eta: (eta.re, eta.im),
        delta_abs,
        c,
        arc_count: arc.len(),
        residual_mass: 1.0 - p0 - p1,
        degenerate,
        p0_bound,
        p1_bound,
        omega_bound,
        p0_ok: p0 >= p0_bound,
        p1_ok: p1 >= p1_bound,
        eta_ok: delta_abs <= ETA_DELTA_CAP,
        omega_ok: (omega0 - omega0_predicted).abs() <= omega_bound,
    })
}
