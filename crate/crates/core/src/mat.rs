//! Dense complex matrix kernel for small dimensions (d ≤ 256).
//!
//! Everything here is value-semantic and deterministic. Shape mismatches in
//! the arithmetic kernels are programming errors and panic; data-dependent
//! failures (a matrix that is not a rank-1 projector, a state that is not a
//! density matrix) are reported through [`MatError`].

use num_complex::Complex64;
use thiserror::Error;

/// Default tolerance for equality-style checks.
pub const EQ_TOL: f64 = 1e-10;
/// Default tolerance for projector residuals.
pub const PROJECTOR_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum MatError {
    #[error("shape mismatch: ({0}, {1}) vs ({2}, {3})")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("not a rank-1 projector (residual {residual:.3e})")]
    NotRankOneProjector { residual: f64 },
    #[error("not a density matrix: {0} (residual {1:.3e})")]
    NotDensityMatrix(&'static str, f64),
}

/// A dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Kronecker product; the left factor indexes the most significant
    /// subsystem.
    pub fn tensor(&self, other: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Hilbert–Schmidt inner product tr(A†·B).
    pub fn hs_inner(&self, other: &CMatrix) -> Complex64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn frob_dist(&self, other: &CMatrix) -> f64 {
        self.sub(other).frob_norm()
    }

    /// Max |A − A†| entry; zero for Hermitian matrices.
    pub fn hermiticity_residual(&self) -> f64 {
        assert!(self.is_square());
        let mut r: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                r = r.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        r
    }

    /// A·v for a column vector v.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// |v⟩⟨w|.
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> CMatrix {
        let mut out = CMatrix::zeros(v.len(), w.len());
        for i in 0..v.len() {
            for j in 0..w.len() {
                out[(i, j)] = v[i] * w[j].conj();
            }
        }
        out
    }

    /// Entries as nested row-major [re, im] pairs, the JSON wire format.
    pub fn to_nested(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| [self[(i, j)].re, self[(i, j)].im])
                    .collect()
            })
            .collect()
    }

    pub fn from_nested(rows: &[Vec<[f64; 2]>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
                .collect(),
        )
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// ⟨v|w⟩.
pub fn inner(v: &[Complex64], w: &[Complex64]) -> Complex64 {
    v.iter().zip(w).map(|(a, b)| a.conj() * b).sum()
}

/// Extract the pure state of a rank-1 projector.
///
/// Deterministic recipe: take the column of largest Euclidean norm, normalize
/// it, and fix the global phase so that the first component of modulus above
/// `tol` is real positive. The preconditions (Hermitian, idempotent, unit
/// trace) and the reconstruction P = v·v† are all enforced within `tol`.
pub fn extract_pure_state(p: &CMatrix, tol: f64) -> Result<Vec<Complex64>, MatError> {
    assert!(p.is_square());
    let herm = p.hermiticity_residual();
    let idem = p.mul(p).frob_dist(p);
    let tr = (p.trace() - Complex64::new(1.0, 0.0)).norm();
    let residual = herm.max(idem).max(tr);
    if residual > tol {
        return Err(MatError::NotRankOneProjector { residual });
    }

    let n = p.rows();
    let (best, _) = (0..n)
        .map(|j| (j, (0..n).map(|i| p[(i, j)].norm_sqr()).sum::<f64>()))
        .fold(
            (0, -1.0),
            |acc, (j, norm)| if norm > acc.1 { (j, norm) } else { acc },
        );
    let norm = (0..n).map(|i| p[(i, best)].norm_sqr()).sum::<f64>().sqrt();
    let mut v: Vec<Complex64> = (0..n).map(|i| p[(i, best)] / norm).collect();

    if let Some(lead) = v.iter().find(|z| z.norm() > tol) {
        let phase = lead / lead.norm();
        for z in v.iter_mut() {
            *z /= phase;
        }
    }

    let recon = CMatrix::outer(&v, &v);
    let err = recon.frob_dist(p);
    if err > tol {
        return Err(MatError::NotRankOneProjector { residual: err });
    }
    Ok(v)
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order with matching eigenvector columns.
/// The sweep order is fixed, so results are reproducible run to run. Only
/// meant for the small dimensions this crate handles.
pub fn hermitian_eigen(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    assert!(a.is_square());
    let n = a.rows();
    let mut m = a.clone();
    let mut vecs = CMatrix::identity(n);

    let scale = a.frob_norm().max(1.0);
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.norm() <= 1e-300 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let abs = apq.norm();
                let phase = apq / abs;
                let tau = (aqq - app) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Rotation J: J[p][p]=J[q][q]=c, J[p][q]=s·phase, J[q][p]=−s·conj(phase)
                let jpp = Complex64::new(c, 0.0);
                let jpq = phase * s;
                let jqp = -phase.conj() * s;
                let jqq = Complex64::new(c, 0.0);

                // M ← J† M J: update columns then rows.
                for i in 0..n {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = mip * jpp + miq * jqp;
                    m[(i, q)] = mip * jpq + miq * jqq;
                }
                for j in 0..n {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = jpp.conj() * mpj + jqp.conj() * mqj;
                    m[(q, j)] = jpq.conj() * mpj + jqq.conj() * mqj;
                }
                for i in 0..n {
                    let vip = vecs[(i, p)];
                    let viq = vecs[(i, q)];
                    vecs[(i, p)] = vip * jpp + viq * jqp;
                    vecs[(i, q)] = vip * jpq + viq * jqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m[(i, i)]
            .re
            .partial_cmp(&m[(j, j)].re)
            .unwrap()
            .then(i.cmp(&j))
    });
    let vals: Vec<f64> = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut sorted = CMatrix::zeros(n, n);
    for (newcol, &oldcol) in order.iter().enumerate() {
        for i in 0..n {
            sorted[(i, newcol)] = vecs[(i, oldcol)];
        }
    }
    (vals, sorted)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(a: &CMatrix) -> f64 {
    hermitian_eigen(a).0[0]
}

/// Clamp negative eigenvalues to zero and renormalize to unit trace.
pub fn psd_floor(a: &CMatrix) -> CMatrix {
    let n = a.rows();
    let (vals, vecs) = hermitian_eigen(a);
    let clamped: Vec<f64> = vals.iter().map(|&v| v.max(0.0)).collect();
    let total: f64 = clamped.iter().sum();
    let mut out = CMatrix::zeros(n, n);
    for (k, &lam) in clamped.iter().enumerate() {
        if lam == 0.0 {
            continue;
        }
        let col: Vec<Complex64> = (0..n).map(|i| vecs[(i, k)]).collect();
        out = out.add(&CMatrix::outer(&col, &col).scale(Complex64::new(lam / total, 0.0)));
    }
    out
}

/// Trace distance (1/2)‖A − B‖₁ between Hermitian matrices.
pub fn trace_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    let (vals, _) = hermitian_eigen(&a.sub(b));
    0.5 * vals.iter().map(|v| v.abs()).sum::<f64>()
}

/// Uhlmann fidelity (tr √(√ρ σ √ρ))² between density matrices.
pub fn fidelity(rho: &CMatrix, sigma: &CMatrix) -> f64 {
    let n = rho.rows();
    let (vals, vecs) = hermitian_eigen(rho);
    let mut sqrt_rho = CMatrix::zeros(n, n);
    for (k, &lam) in vals.iter().enumerate() {
        if lam <= 0.0 {
            continue;
        }
        let col: Vec<Complex64> = (0..n).map(|i| vecs[(i, k)]).collect();
        sqrt_rho = sqrt_rho.add(&CMatrix::outer(&col, &col).scale(Complex64::new(lam.sqrt(), 0.0)));
    }
    let m = sqrt_rho.mul(sigma).mul(&sqrt_rho);
    let (mvals, _) = hermitian_eigen(&m);
    let s: f64 = mvals.iter().map(|v| v.max(0.0).sqrt()).sum();
    s * s
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite
/// within fixed tolerances.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn new(mat: CMatrix) -> Result<Self, MatError> {
        assert!(mat.is_square());
        let herm = mat.hermiticity_residual();
        if herm > EQ_TOL {
            return Err(MatError::NotDensityMatrix("not Hermitian", herm));
        }
        let tr = (mat.trace() - Complex64::new(1.0, 0.0)).norm();
        if tr > EQ_TOL {
            return Err(MatError::NotDensityMatrix("trace is not 1", tr));
        }
        let min = min_eigenvalue(&mat);
        if min < -EQ_TOL {
            return Err(MatError::NotDensityMatrix("negative eigenvalue", -min));
        }
        Ok(Self { mat })
    }

    pub fn pure(state: &[Complex64]) -> Self {
        let norm = inner(state, state).re.sqrt();
        let v: Vec<Complex64> = state.iter().map(|z| z / norm).collect();
        Self {
            mat: CMatrix::outer(&v, &v),
        }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            mat: CMatrix::identity(d).scale(Complex64::new(1.0 / d as f64, 0.0)),
        }
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }
}

/// Deterministic pseudo-random density matrix (Ginibre construction).
pub fn random_density(d: usize, rng: &mut impl rand::Rng) -> DensityMatrix {
    use rand::distributions::Distribution;
    let normal = rand_distr_standard_normal();
    let mut g = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            g[(i, j)] = Complex64::new(normal.sample(rng), normal.sample(rng));
        }
    }
    let m = g.mul(&g.dagger());
    let tr = m.trace().re;
    DensityMatrix::new(m.scale(Complex64::new(1.0 / tr, 0.0)))
        .expect("Ginibre construction yields a density matrix")
}

// A tiny Box–Muller standard normal so we do not pull in rand_distr.
struct StdNormal;
impl rand::distributions::Distribution<f64> for StdNormal {
    fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen_range(0.0..1.0);
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}

fn rand_distr_standard_normal() -> StdNormal {
    StdNormal
}
