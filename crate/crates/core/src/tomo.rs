//! Tomography protocols and their simulation: the qubit SIC POVM realized by
//! a two-qubit unitary on system + ancilla, its factorisable two-qubit
//! product, projective measurements in d+1 MUBs, finite-shot multinomial
//! sampling with seeded reproducibility, linear-inversion reconstruction,
//! redundancy accounting, and the Mean King inference rule.
//!
//! Estimators are linear inversion only. Finite-shot estimates can be
//! non-positive; they are reported raw alongside an eigenvalue-floored
//! projection, with fidelity computed against the floored variant and trace
//! distance against the raw one.

use crate::field::FieldElement;
use crate::mat::{self, CMatrix, DensityMatrix, MatError};
use crate::wigner::{LineSpec, MubSet, WignerFamily};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TomoError {
    #[error("probabilities sum to {0}, expected 1 within 1e-6")]
    NotNormalized(f64),
    #[error("unknown scheme: {0}")]
    UnknownScheme(String),
    #[error("direction {direction} is out of range 0..={d}")]
    InvalidDirection { direction: usize, d: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("POVM validation failed: {property} residual {residual:.3e}")]
    InvalidPovm {
        property: &'static str,
        residual: f64,
    },
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// Name of the seeded generator recorded in every histogram.
pub const GENERATOR: &str = "chacha20";

/// A positive-operator-valued measure with labeled outcomes.
#[derive(Debug, Clone)]
pub struct Povm {
    pub elements: Vec<CMatrix>,
    pub labels: Vec<String>,
}

impl Povm {
    /// Validate positivity (eigen-floor ≥ −1e−10) and completeness.
    pub fn new(elements: Vec<CMatrix>, labels: Vec<String>) -> Result<Self, TomoError> {
        assert_eq!(elements.len(), labels.len());
        let d = elements[0].rows();
        let mut sum = CMatrix::zeros(d, d);
        for e in &elements {
            let herm = e.hermiticity_residual();
            if herm > 1e-10 {
                return Err(TomoError::InvalidPovm {
                    property: "hermiticity",
                    residual: herm,
                });
            }
            let min = mat::min_eigenvalue(e);
            if min < -1e-10 {
                return Err(TomoError::InvalidPovm {
                    property: "positivity",
                    residual: -min,
                });
            }
            sum = sum.add(e);
        }
        let completeness = sum.frob_dist(&CMatrix::identity(d));
        if completeness > 1e-10 {
            return Err(TomoError::InvalidPovm {
                property: "completeness",
                residual: completeness,
            });
        }
        Ok(Self { elements, labels })
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }

    pub fn probabilities(&self, rho: &DensityMatrix) -> Result<Vec<f64>, TomoError> {
        if rho.dim() != self.dim() {
            return Err(TomoError::ShapeMismatch {
                expected: self.dim(),
                got: rho.dim(),
            });
        }
        Ok(self
            .elements
            .iter()
            .map(|e| rho.mat().mul(e).trace().re)
            .collect())
    }
}

/// Bloch parametrization (⟨σ_x⟩, ⟨σ_y⟩, ⟨σ_z⟩) of a qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

fn pauli(k: usize) -> CMatrix {
    let c = Complex64::new;
    let rows = match k {
        1 => vec![vec![c(0., 0.), c(1., 0.)], vec![c(1., 0.), c(0., 0.)]],
        2 => vec![vec![c(0., 0.), c(0., -1.)], vec![c(0., 1.), c(0., 0.)]],
        3 => vec![vec![c(1., 0.), c(0., 0.)], vec![c(0., 0.), c(-1., 0.)]],
        _ => vec![vec![c(1., 0.), c(0., 0.)], vec![c(0., 0.), c(1., 0.)]],
    };
    CMatrix::from_rows(rows)
}

/// Bloch vector of a qubit density matrix.
pub fn bloch_of(rho: &DensityMatrix) -> Result<BlochVector, TomoError> {
    if rho.dim() != 2 {
        return Err(TomoError::ShapeMismatch {
            expected: 2,
            got: rho.dim(),
        });
    }
    Ok(BlochVector {
        x: rho.mat().mul(&pauli(1)).trace().re,
        y: rho.mat().mul(&pauli(2)).trace().re,
        z: rho.mat().mul(&pauli(3)).trace().re,
    })
}

/// Qubit density matrix (I + p·σ)/2 from a Bloch vector with norm ≤ 1.
pub fn density_from_bloch(p: BlochVector) -> Result<DensityMatrix, TomoError> {
    let rho = bloch_matrix(p);
    Ok(DensityMatrix::new(rho)?)
}

fn bloch_matrix(p: BlochVector) -> CMatrix {
    pauli(0)
        .add(&pauli(1).scale(Complex64::new(p.x, 0.0)))
        .add(&pauli(2).scale(Complex64::new(p.y, 0.0)))
        .add(&pauli(3).scale(Complex64::new(p.z, 0.0)))
        .scale(Complex64::new(0.5, 0.0))
}

/// The 4×4 unitary that realizes the qubit SIC POVM on system ⊗ ancilla,
/// with α = √(1+1/√3) and β = √(1−1/√3). Every entry follows the α/β
/// pattern of the matrix (the (2,3) slot is −e^{−iπ/4}β; unitarity, which is
/// asserted here to 1e−12, pins that choice).
pub fn sic_unitary_qubit() -> CMatrix {
    let a = (1.0 + 1.0 / 3f64.sqrt()).sqrt();
    let b = (1.0 - 1.0 / 3f64.sqrt()).sqrt();
    let ep = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4); // e^{iπ/4}
    let em = ep.conj();
    let c = |x: f64| Complex64::new(x, 0.0);
    let u = CMatrix::from_rows(vec![
        vec![ep * a, c(a), c(b), -ep * b],
        vec![c(a), -em * a, -em * b, -c(b)],
        vec![c(b), -ep * b, ep * a, c(a)],
        vec![-em * b, -c(b), c(a), -em * a],
    ])
    .scale(c(0.5));
    let residual = u.dagger().mul(&u).frob_dist(&CMatrix::identity(4));
    assert!(residual < 1e-12, "SIC unitary residual {residual:e}");
    u
}

/// The qubit SIC POVM: four elements (1/2)·σ_{i,j}|φ⟩⟨φ|σ_{i,j}†, labeled
/// "00", "01", "10", "11" in correspondence with the outcome probabilities of
/// the system-ancilla measurement. Fiducial overlaps are verified to satisfy
/// |⟨φ_a|φ_b⟩| = 1/√3.
pub fn sic_povm_qubit() -> Povm {
    let states = sic_fiducials();
    let elements: Vec<CMatrix> = states
        .iter()
        .map(|v| CMatrix::outer(v, v).scale(Complex64::new(0.5, 0.0)))
        .collect();
    let labels = vec!["00".into(), "01".into(), "10".into(), "11".into()];
    for (a, va) in states.iter().enumerate() {
        for vb in states.iter().skip(a + 1) {
            let overlap = mat::inner(va, vb).norm();
            assert!(
                (overlap - 1.0 / 3f64.sqrt()).abs() < 1e-10,
                "fiducial overlap {overlap}"
            );
        }
    }
    Povm::new(elements, labels).expect("SIC construction is a valid POVM")
}

/// The four SIC fiducial states σ_{i,j}|φ⟩ with |φ⟩ ∝ α|0⟩ + e^{iπ/4}β|1⟩,
/// ordered (0,0), (0,1), (1,0), (1,1) with σ_{0,1} = σ_Z, σ_{1,0} = σ_X,
/// σ_{1,1} = σ_Y.
fn sic_fiducials() -> Vec<Vec<Complex64>> {
    let a = (1.0 + 1.0 / 3f64.sqrt()).sqrt() / 2f64.sqrt();
    let b = (1.0 - 1.0 / 3f64.sqrt()).sqrt() / 2f64.sqrt();
    let phi = vec![
        Complex64::new(a, 0.0),
        Complex64::from_polar(b, std::f64::consts::FRAC_PI_4),
    ];
    [0usize, 3, 1, 2]
        .iter()
        .map(|&k| pauli(k).apply(&phi))
        .collect()
}

/// Outcome probabilities of the qubit SIC POVM, per the closed form in the
/// Bloch parameters:
///
/// ```text
/// P_00 = (1/4)[1 + (p_x+p_y+p_z)/√3]      P_01 = (1/4)[1 + (−p_x−p_y+p_z)/√3]
/// P_10 = (1/4)[1 + (p_x−p_y−p_z)/√3]      P_11 = (1/4)[1 + (−p_x+p_y−p_z)/√3]
/// ```
///
/// Under the canonical qubit Wigner convention the outcome (i, j) sits at
/// phase-space point (k, l) = (i, j): P_{k,l} = (1/√3)·W_{k,l} + (1−1/√3)/4.
/// The correspondence is frozen here and asserted in the test suite.
pub fn sic_probabilities(rho: &DensityMatrix) -> Result<[f64; 4], TomoError> {
    let p = bloch_of(rho)?;
    let s = 1.0 / 3f64.sqrt();
    Ok([
        0.25 * (1.0 + s * (p.x + p.y + p.z)),
        0.25 * (1.0 + s * (-p.x - p.y + p.z)),
        0.25 * (1.0 + s * (p.x - p.y - p.z)),
        0.25 * (1.0 + s * (-p.x + p.y - p.z)),
    ])
}

/// Invert SIC outcome probabilities (or frequencies) to a Bloch vector:
/// p_x = √3(P₀₀−P₀₁+P₁₀−P₁₁), p_y = √3(P₀₀−P₀₁−P₁₀+P₁₁),
/// p_z = √3(P₀₀+P₀₁−P₁₀−P₁₁).
pub fn bloch_from_sic(p: &[f64; 4]) -> Result<BlochVector, TomoError> {
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-6 {
        return Err(TomoError::NotNormalized(total));
    }
    let s = 3f64.sqrt();
    Ok(BlochVector {
        x: s * (p[0] - p[1] + p[2] - p[3]),
        y: s * (p[0] - p[1] - p[2] + p[3]),
        z: s * (p[0] + p[1] - p[2] - p[3]),
    })
}

/// The 16-outcome product of two local qubit SIC POVMs.
pub fn product_sic_two_qubit() -> Povm {
    let local = sic_povm_qubit();
    let mut elements = Vec::with_capacity(16);
    let mut labels = Vec::with_capacity(16);
    for (ea, la) in local.elements.iter().zip(&local.labels) {
        for (eb, lb) in local.elements.iter().zip(&local.labels) {
            elements.push(ea.tensor(eb));
            labels.push(format!("{la},{lb}"));
        }
    }
    Povm::new(elements, labels).expect("product of POVMs is a POVM")
}

/// The 16 two-qubit Pauli products σ_μ ⊗ σ_ν in row-major (μ, ν) order.
fn pauli_products() -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(16);
    for mu in 0..4 {
        for nu in 0..4 {
            out.push(pauli(mu).tensor(&pauli(nu)));
        }
    }
    out
}

/// Frame analysis of a POVM against an operator basis: the real matrix
/// T[o][b] = tr(E_o·B_b)/dim, its rank, and a Frobenius condition number
/// ‖T‖_F·‖T⁻¹‖_F (reported as infinity when T is singular).
#[derive(Debug, Clone, Serialize)]
pub struct FrameAnalysis {
    pub rank: usize,
    pub condition_frobenius: f64,
}

/// Informational completeness of the product SIC: frame rank over the
/// two-qubit Pauli basis must be 16.
pub fn product_sic_frame() -> FrameAnalysis {
    let povm = product_sic_two_qubit();
    let basis = pauli_products();
    let t: Vec<Vec<f64>> = povm
        .elements
        .iter()
        .map(|e| basis.iter().map(|b| e.mul(b).trace().re / 4.0).collect())
        .collect();
    let rank = real_rank(&t, 1e-10);
    let condition_frobenius = match real_inverse(&t) {
        Some(inv) => frob(&t) * frob(&inv),
        None => f64::INFINITY,
    };
    FrameAnalysis {
        rank,
        condition_frobenius,
    }
}

fn frob(a: &[Vec<f64>]) -> f64 {
    a.iter()
        .flat_map(|r| r.iter().map(|x| x * x))
        .sum::<f64>()
        .sqrt()
}

#[allow(clippy::needless_range_loop)]
fn real_rank(a: &[Vec<f64>], tol: f64) -> usize {
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let rows = m.len();
    let cols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let (pivot, max) =
            (row..rows)
                .map(|r| (r, m[r][col].abs()))
                .fold(
                    (row, 0.0),
                    |acc, (r, v)| if v > acc.1 { (r, v) } else { acc },
                );
        if max < tol {
            continue;
        }
        m.swap(row, pivot);
        for r in 0..rows {
            if r != row && m[r][col].abs() > 0.0 {
                let factor = m[r][col] / m[row][col];
                for c in col..cols {
                    m[r][c] -= factor * m[row][c];
                }
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

#[allow(clippy::needless_range_loop)]
fn real_inverse(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for col in 0..n {
        let (pivot, max) =
            (col..n)
                .map(|r| (r, m[r][col].abs()))
                .fold(
                    (col, 0.0),
                    |acc, (r, v)| if v > acc.1 { (r, v) } else { acc },
                );
        if max < 1e-12 {
            return None;
        }
        m.swap(col, pivot);
        let lead = m[col][col];
        for c in 0..2 * n {
            m[col][c] /= lead;
        }
        for r in 0..n {
            if r != col {
                let factor = m[r][col];
                if factor != 0.0 {
                    for c in 0..2 * n {
                        m[r][c] -= factor * m[col][c];
                    }
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn solve_real(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let inv = real_inverse(a).expect("frame matrix must be invertible");
    inv.iter()
        .map(|row| row.iter().zip(b).map(|(x, y)| x * y).sum())
        .collect()
}

/// Exact MUB tomography: measure the (d+1)·d outcome probabilities and invert
/// ρ = Σ_{k,i} p_{k,i}·|e^k_i⟩⟨e^k_i| − I.
pub fn pvm_mub_tomography(rho: &DensityMatrix, mubs: &MubSet) -> Result<DensityMatrix, TomoError> {
    let d = mubs.d();
    if rho.dim() != d {
        return Err(TomoError::ShapeMismatch {
            expected: d,
            got: rho.dim(),
        });
    }
    let probs = mub_probabilities(rho, mubs);
    Ok(DensityMatrix::new(invert_mub(&probs, mubs))?)
}

fn mub_probabilities(rho: &DensityMatrix, mubs: &MubSet) -> Vec<Vec<f64>> {
    mubs.bases
        .iter()
        .map(|basis| {
            basis
                .iter()
                .map(|state| {
                    let projected = rho.mat().apply(state);
                    mat::inner(state, &projected).re
                })
                .collect()
        })
        .collect()
}

fn invert_mub(probs: &[Vec<f64>], mubs: &MubSet) -> CMatrix {
    let d = mubs.d();
    let mut rho = CMatrix::zeros(d, d);
    for (basis, p_basis) in mubs.bases.iter().zip(probs) {
        for (state, &p) in basis.iter().zip(p_basis) {
            rho = rho.add(&CMatrix::outer(state, state).scale(Complex64::new(p, 0.0)));
        }
    }
    rho.sub(&CMatrix::identity(d))
}

/// The schemes the redundancy ledger knows about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    MubPvm,
    SicPovm,
    LocalMubTwoQubit,
}

impl std::str::FromStr for Scheme {
    type Err = TomoError;
    fn from_str(s: &str) -> Result<Self, TomoError> {
        match s {
            "mub-pvm" => Ok(Scheme::MubPvm),
            "sic-povm" => Ok(Scheme::SicPovm),
            "local-mub-two-qubit" => Ok(Scheme::LocalMubTwoQubit),
            other => Err(TomoError::UnknownScheme(other.into())),
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Scheme::MubPvm => "mub-pvm",
            Scheme::SicPovm => "sic-povm",
            Scheme::LocalMubTwoQubit => "local-mub-two-qubit",
        };
        write!(f, "{s}")
    }
}

/// Counting-rate bookkeeping for a tomography scheme against the d²−1 free
/// parameters of a density matrix.
#[derive(Debug, Clone, Serialize)]
pub struct RedundancyLedger {
    pub scheme: String,
    pub d: usize,
    pub measurements: usize,
    pub counting_rates: usize,
    pub free_parameters: usize,
}

/// Measurement and counting-rate totals: d+1 measurements with d²+d rates for
/// MUB PVM tomography, one measurement with d² rates for the SIC POVM, and
/// 3² settings with 36 rates for local MUB tomography of two qubits.
pub fn redundancy_ledger(scheme: Scheme, d: usize) -> Result<RedundancyLedger, TomoError> {
    let (measurements, counting_rates) = match scheme {
        Scheme::MubPvm => (d + 1, d * d + d),
        Scheme::SicPovm => (1, d * d),
        Scheme::LocalMubTwoQubit => {
            if d != 4 {
                return Err(TomoError::UnknownScheme(format!(
                    "local-mub-two-qubit requires d = 4, got {d}"
                )));
            }
            (9, 36)
        }
    };
    let ledger = RedundancyLedger {
        scheme: scheme.to_string(),
        d,
        measurements,
        counting_rates,
        free_parameters: d * d - 1,
    };
    debug_assert!(ledger.counting_rates >= ledger.free_parameters + ledger.measurements);
    Ok(ledger)
}

/// Outcome counts of one simulated measurement with seed provenance.
#[derive(Debug, Clone, Serialize)]
pub struct CountHistogram {
    pub scheme: String,
    pub label: String,
    pub counts: Vec<u64>,
    pub shots: u64,
    pub seed: u64,
    pub generator: &'static str,
}

fn sample_multinomial(probs: &[f64], shots: u64, rng: &mut ChaCha20Rng) -> Vec<u64> {
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &p in probs {
        acc += p.max(0.0);
        cumulative.push(acc);
    }
    let total = *cumulative.last().expect("nonempty outcome set");
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..shots {
        let x: f64 = rng.gen_range(0.0..total);
        let idx = cumulative.partition_point(|&c| c <= x).min(probs.len() - 1);
        counts[idx] += 1;
    }
    counts
}

/// A tomography protocol to simulate.
pub enum TomographyScheme<'a> {
    /// Qubit SIC POVM (4 outcomes, one measurement).
    SicQubit,
    /// Product of two local qubit SICs (16 outcomes, one measurement).
    ProductSic,
    /// Projective measurements in d+1 MUBs; `shots` applies per basis.
    MubPvm(&'a MubSet),
}

impl TomographyScheme<'_> {
    pub fn id(&self) -> &'static str {
        match self {
            TomographyScheme::SicQubit => "sic-qubit",
            TomographyScheme::ProductSic => "product-sic",
            TomographyScheme::MubPvm(_) => "mub-pvm",
        }
    }

    fn dim(&self) -> usize {
        match self {
            TomographyScheme::SicQubit => 2,
            TomographyScheme::ProductSic => 4,
            TomographyScheme::MubPvm(mubs) => mubs.d(),
        }
    }
}

/// Result of a finite-shot (or exact) tomography run.
#[derive(Debug, Clone)]
pub struct EstimateReport {
    pub histograms: Vec<CountHistogram>,
    /// Raw linear-inversion estimate; may fail positivity.
    pub estimate_raw: CMatrix,
    /// Eigenvalue-floored, trace-renormalized projection of the raw estimate.
    pub estimate_floored: CMatrix,
    /// Uhlmann fidelity between the true state and the floored estimate.
    pub fidelity: f64,
    /// Trace distance between the true state and the raw estimate.
    pub trace_distance: f64,
}

/// Draw outcome counts from the exact probabilities with a seeded generator
/// and feed the frequencies through the scheme's linear inversion.
///
/// Identical seed and build give identical counts. For the MUB scheme each of
/// the d+1 bases is sampled with `shots` draws from one sequential stream.
pub fn sample_and_estimate(
    rho: &DensityMatrix,
    scheme: &TomographyScheme<'_>,
    shots: u64,
    seed: u64,
) -> Result<EstimateReport, TomoError> {
    assert!(shots >= 1, "at least one shot is required");
    if rho.dim() != scheme.dim() {
        return Err(TomoError::ShapeMismatch {
            expected: scheme.dim(),
            got: rho.dim(),
        });
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let id = scheme.id().to_string();

    let (histograms, raw) = match scheme {
        TomographyScheme::SicQubit => {
            let probs = sic_probabilities(rho)?;
            let counts = sample_multinomial(&probs, shots, &mut rng);
            let freqs: Vec<f64> = counts.iter().map(|&c| c as f64 / shots as f64).collect();
            let bloch = bloch_from_sic(&[freqs[0], freqs[1], freqs[2], freqs[3]])?;
            let hist = CountHistogram {
                scheme: id.clone(),
                label: "sic".into(),
                counts,
                shots,
                seed,
                generator: GENERATOR,
            };
            (vec![hist], bloch_matrix(bloch))
        }
        TomographyScheme::ProductSic => {
            let povm = product_sic_two_qubit();
            let probs = povm.probabilities(rho)?;
            let counts = sample_multinomial(&probs, shots, &mut rng);
            let freqs: Vec<f64> = counts.iter().map(|&c| c as f64 / shots as f64).collect();
            let hist = CountHistogram {
                scheme: id.clone(),
                label: "product-sic".into(),
                counts,
                shots,
                seed,
                generator: GENERATOR,
            };
            (vec![hist], invert_product_sic(&povm, &freqs))
        }
        TomographyScheme::MubPvm(mubs) => {
            let probs = mub_probabilities(rho, mubs);
            let mut freqs = Vec::with_capacity(probs.len());
            let mut hists = Vec::with_capacity(probs.len());
            for (k, basis_probs) in probs.iter().enumerate() {
                let counts = sample_multinomial(basis_probs, shots, &mut rng);
                freqs.push(
                    counts
                        .iter()
                        .map(|&c| c as f64 / shots as f64)
                        .collect::<Vec<f64>>(),
                );
                hists.push(CountHistogram {
                    scheme: id.clone(),
                    label: format!("basis-{k}"),
                    counts,
                    shots,
                    seed,
                    generator: GENERATOR,
                });
            }
            (hists, invert_mub(&freqs, mubs))
        }
    };

    let floored = mat::psd_floor(&raw);
    Ok(EstimateReport {
        histograms,
        fidelity: mat::fidelity(rho.mat(), &floored),
        trace_distance: mat::trace_distance(rho.mat(), &raw),
        estimate_raw: raw,
        estimate_floored: floored,
    })
}

/// Exact-probability inversion for a scheme (the infinite-shot limit).
pub fn exact_estimate(
    rho: &DensityMatrix,
    scheme: &TomographyScheme<'_>,
) -> Result<CMatrix, TomoError> {
    if rho.dim() != scheme.dim() {
        return Err(TomoError::ShapeMismatch {
            expected: scheme.dim(),
            got: rho.dim(),
        });
    }
    Ok(match scheme {
        TomographyScheme::SicQubit => {
            let p = sic_probabilities(rho)?;
            bloch_matrix(bloch_from_sic(&p)?)
        }
        TomographyScheme::ProductSic => {
            let povm = product_sic_two_qubit();
            let probs = povm.probabilities(rho)?;
            invert_product_sic(&povm, &probs)
        }
        TomographyScheme::MubPvm(mubs) => invert_mub(&mub_probabilities(rho, mubs), mubs),
    })
}

fn invert_product_sic(povm: &Povm, freqs: &[f64]) -> CMatrix {
    let basis = pauli_products();
    let t: Vec<Vec<f64>> = povm
        .elements
        .iter()
        .map(|e| basis.iter().map(|b| e.mul(b).trace().re / 4.0).collect())
        .collect();
    let coeffs = solve_real(&t, freqs);
    let mut rho = CMatrix::zeros(4, 4);
    for (c, b) in coeffs.iter().zip(&basis) {
        rho = rho.add(&b.scale(Complex64::new(c / 4.0, 0.0)));
    }
    rho
}

/// Mean King inference: given the preparation direction and the phase-space
/// point of the detector that fired, return the index of the prepared MUB
/// state, i.e. the offset of the direction's line through that point.
pub fn mean_king_infer(
    fam: &WignerFamily,
    prep_direction: usize,
    detector: (usize, usize),
) -> Result<usize, TomoError> {
    let d = fam.d();
    if prep_direction > d {
        return Err(TomoError::InvalidDirection {
            direction: prep_direction,
            d,
        });
    }
    assert!(
        detector.0 < d && detector.1 < d,
        "detector point out of range"
    );
    let line = LineSpec::through(
        fam.field(),
        prep_direction,
        (FieldElement(detector.0), FieldElement(detector.1)),
    );
    Ok(line.offset.0)
}
