//! Wigner (phase-point) operator families over GF(d), their acceptability
//! verifier, line averages, MUB extraction, and state distributions.
//!
//! The d² Wigner operators are assembled from the convention-dressed
//! displacements U_{m,n}:
//!
//! ```text
//! W_{(i₁,i₂)} = (1/d)·Σ_{m,n} γ^{⊖(i₁⊙n) ⊕ (i₂⊙m)}·U_{m,n}
//! ```
//!
//! An acceptable family is Hermitian with unit traces, orthonormalized to d
//! under the trace inner product, and averages to a rank-1 projector along
//! every phase-space line, with parallel lines giving mutually orthogonal
//! projectors. The d+1 line directions then yield d+1 mutually unbiased bases.
//!
//! Phase-space lines of slope s are parametrized here by their second-axis
//! intercept, {(α, s⊙α ⊕ offset)}, which covers the d parallel translates
//! uniformly for every slope including s = 0; vertical lines are
//! {(offset, α)}.

use crate::field::{FieldElement, FieldTables};
use crate::mat::{self, CMatrix, DensityMatrix, MatError};
use crate::weyl::{
    self, canonical_conventions, displacement, DisplacementIndex, PhaseConvention, WeylError,
};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WignerError {
    #[error("acceptability failure: {property} residual {residual:.3e}")]
    AcceptabilityFailure {
        property: &'static str,
        residual: f64,
    },
    #[error("dimension mismatch: operator family has d = {expected}, state has d = {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("operation requires d = 2, got d = {0}")]
    WrongDimension(usize),
    #[error("MUB verification failure: {property} residual {residual:.3e}")]
    MubFailure {
        property: &'static str,
        residual: f64,
    },
    #[error(transparent)]
    Projector(#[from] MatError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
}

/// A verified family of d² Hermitian phase-point operators.
#[derive(Debug, Clone)]
pub struct WignerFamily {
    field: FieldTables,
    conventions: Vec<PhaseConvention>,
    ops: Vec<CMatrix>,
}

/// A phase-space line: one of the d+1 directions plus an offset picking the
/// parallel translate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LineSpec {
    /// 0 for the vertical direction, k ≥ 1 for slope k−1.
    pub direction: usize,
    pub offset: FieldElement,
}

/// Real d×d grid of Wigner values, row-major over (i₁, i₂).
#[derive(Debug, Clone)]
pub struct WignerDistribution {
    pub d: usize,
    pub values: Vec<f64>,
}

impl WignerDistribution {
    pub fn value(&self, i1: usize, i2: usize) -> f64 {
        self.values[i1 * self.d + i2]
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Complex d×d grid of Weyl coefficients w_{i,j} = (1/d)·tr(ρ·V^j_i†).
#[derive(Debug, Clone)]
pub struct WeylDistribution {
    pub d: usize,
    pub values: Vec<Complex64>,
}

impl WeylDistribution {
    pub fn value(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.d + j]
    }
}

/// d+1 mutually unbiased bases, tagged by the line direction each came from.
#[derive(Debug, Clone)]
pub struct MubSet {
    pub bases: Vec<Vec<Vec<Complex64>>>,
    pub provenance: Vec<usize>,
}

impl MubSet {
    pub fn d(&self) -> usize {
        self.bases.first().map_or(0, Vec::len)
    }

    pub fn state(&self, basis: usize, index: usize) -> &[Complex64] {
        &self.bases[basis][index]
    }
}

/// Residuals of the acceptability checks; `max_residual` folds them for a
/// single pass/fail verdict.
#[derive(Debug, Clone, Copy)]
pub struct AcceptabilityReport {
    pub hermiticity: f64,
    pub trace: f64,
    pub orthonormality: f64,
    pub line_projector: f64,
    pub line_orthogonality: f64,
}

impl AcceptabilityReport {
    pub fn max_residual(&self) -> f64 {
        self.hermiticity
            .max(self.trace)
            .max(self.orthonormality)
            .max(self.line_projector)
            .max(self.line_orthogonality)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual() < tol
    }
}

impl WignerFamily {
    pub fn d(&self) -> usize {
        self.field.d()
    }

    pub fn field(&self) -> &FieldTables {
        &self.field
    }

    pub fn conventions(&self) -> &[PhaseConvention] {
        &self.conventions
    }

    pub fn op(&self, i1: usize, i2: usize) -> &CMatrix {
        &self.ops[i1 * self.d() + i2]
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }
}

/// The convention-dressed displacement U_{m,n} at a phase-space point.
fn dressed_displacement(
    f: &FieldTables,
    conventions: &[PhaseConvention],
    m: FieldElement,
    n: FieldElement,
) -> Result<CMatrix, WignerError> {
    let idx = DisplacementIndex { i: m, j: n };
    if idx.is_identity() {
        return Ok(CMatrix::identity(f.d()));
    }
    let label = if m.0 == 0 {
        0
    } else {
        f.div(n, m).expect("m is nonzero").0 + 1
    };
    let conv = &conventions[label];
    let phase = conv
        .phase_of(idx)
        .ok_or(WeylError::NotAMember(m.0, n.0, label))?;
    Ok(displacement(f, idx).scale(phase))
}

/// Assemble the d² Wigner operators from a full set of family conventions
/// (one per family, in label order). Hermiticity, unit traces, and trace
/// orthonormality are verified before the family is returned.
pub fn build_wigner_family(
    f: &FieldTables,
    conventions: &[PhaseConvention],
) -> Result<WignerFamily, WignerError> {
    let d = f.d();
    assert_eq!(conventions.len(), d + 1, "one convention per family");
    for conv in conventions {
        weyl::verify_closure(f, conv, 1e-10)?;
    }

    let mut dressed = Vec::with_capacity(d * d);
    for m in 0..d {
        for n in 0..d {
            dressed.push(dressed_displacement(
                f,
                conventions,
                FieldElement(m),
                FieldElement(n),
            )?);
        }
    }

    let scale = Complex64::new(1.0 / d as f64, 0.0);
    let mut ops = Vec::with_capacity(d * d);
    for i1 in 0..d {
        for i2 in 0..d {
            let mut w = CMatrix::zeros(d, d);
            for m in 0..d {
                for n in 0..d {
                    let exponent = f.add(
                        f.neg(f.mul(FieldElement(i1), FieldElement(n))),
                        f.mul(FieldElement(i2), FieldElement(m)),
                    );
                    let chi = f.char_phase(exponent, false);
                    w = w.add(&dressed[m * d + n].scale(chi));
                }
            }
            ops.push(w.scale(scale));
        }
    }

    let fam = WignerFamily {
        field: f.clone(),
        conventions: conventions.to_vec(),
        ops,
    };

    let herm = fam
        .ops
        .iter()
        .map(CMatrix::hermiticity_residual)
        .fold(0.0, f64::max);
    if herm > 1e-10 {
        return Err(WignerError::AcceptabilityFailure {
            property: "hermiticity",
            residual: herm,
        });
    }
    let trace = fam
        .ops
        .iter()
        .map(|w| (w.trace() - Complex64::new(1.0, 0.0)).norm())
        .fold(0.0, f64::max);
    if trace > 1e-10 {
        return Err(WignerError::AcceptabilityFailure {
            property: "unit trace",
            residual: trace,
        });
    }
    let orth = orthonormality_residual(&fam.ops, d);
    if orth > 1e-8 {
        return Err(WignerError::AcceptabilityFailure {
            property: "trace orthonormality",
            residual: orth,
        });
    }
    Ok(fam)
}

/// Wigner family from the canonical phase conventions.
pub fn canonical_wigner_family(f: &FieldTables) -> Result<WignerFamily, WignerError> {
    let conventions = canonical_conventions(f)?;
    build_wigner_family(f, &conventions)
}

fn orthonormality_residual(ops: &[CMatrix], d: usize) -> f64 {
    let mut worst = 0.0f64;
    for (a, wa) in ops.iter().enumerate() {
        for (b, wb) in ops.iter().enumerate().skip(a) {
            let inner = wa.hs_inner(wb);
            let expected = if a == b {
                Complex64::new(d as f64, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            worst = worst.max((inner - expected).norm());
        }
    }
    worst
}

impl LineSpec {
    /// The d phase-space points of the line.
    pub fn points(&self, f: &FieldTables) -> Vec<(FieldElement, FieldElement)> {
        let d = f.d();
        match self.direction {
            0 => (0..d).map(|a| (self.offset, FieldElement(a))).collect(),
            k => {
                let slope = FieldElement(k - 1);
                (0..d)
                    .map(|a| {
                        let alpha = FieldElement(a);
                        (alpha, f.add(f.mul(slope, alpha), self.offset))
                    })
                    .collect()
            }
        }
    }

    /// The line of direction `direction` through a given point.
    pub fn through(
        f: &FieldTables,
        direction: usize,
        point: (FieldElement, FieldElement),
    ) -> LineSpec {
        let offset = if direction == 0 {
            point.0
        } else {
            let slope = FieldElement(direction - 1);
            f.sub(point.1, f.mul(slope, point.0))
        };
        LineSpec { direction, offset }
    }
}

/// Average along a line of a d×d grid of candidate phase-point operators
/// (row-major over (i₁, i₂)).
pub fn line_average_ops(f: &FieldTables, ops: &[CMatrix], line: &LineSpec) -> CMatrix {
    let d = f.d();
    let mut sum = CMatrix::zeros(ops[0].rows(), ops[0].cols());
    for (i1, i2) in line.points(f) {
        sum = sum.add(&ops[i1.0 * d + i2.0]);
    }
    sum.scale(Complex64::new(1.0 / d as f64, 0.0))
}

/// Average of the Wigner operators along a line; for an acceptable family
/// this is a rank-1 projector, and vertical lines give the computational
/// basis projectors.
pub fn line_average(fam: &WignerFamily, line: &LineSpec) -> CMatrix {
    line_average_ops(&fam.field, &fam.ops, line)
}

/// Acceptability check of an arbitrary candidate grid of phase-point
/// operators against the phase-space line structure of `f`: (a) unit traces,
/// (b) orthonormality to d, (c) line averages are rank-1 projectors and
/// parallel lines are mutually orthogonal. Residuals are reported rather
/// than raised.
pub fn verify_ops_acceptability(f: &FieldTables, ops: &[CMatrix]) -> AcceptabilityReport {
    let d = f.d();
    assert_eq!(
        ops.len(),
        d * d,
        "expected one operator per phase-space point"
    );
    let hermiticity = ops
        .iter()
        .map(CMatrix::hermiticity_residual)
        .fold(0.0, f64::max);
    let trace = ops
        .iter()
        .map(|w| (w.trace() - Complex64::new(1.0, 0.0)).norm())
        .fold(0.0, f64::max);
    let orthonormality = orthonormality_residual(ops, d);

    let mut line_projector = 0.0f64;
    let mut line_orthogonality = 0.0f64;
    for direction in 0..=d {
        let averages: Vec<CMatrix> = (0..d)
            .map(|offset| {
                line_average_ops(
                    f,
                    ops,
                    &LineSpec {
                        direction,
                        offset: FieldElement(offset),
                    },
                )
            })
            .collect();
        for avg in &averages {
            let herm = avg.hermiticity_residual();
            let idem = avg.mul(avg).frob_dist(avg);
            let tr = (avg.trace() - Complex64::new(1.0, 0.0)).norm();
            line_projector = line_projector.max(herm).max(idem).max(tr);
        }
        for a in 0..d {
            for b in (a + 1)..d {
                line_orthogonality =
                    line_orthogonality.max(averages[a].hs_inner(&averages[b]).norm());
            }
        }
    }

    AcceptabilityReport {
        hermiticity,
        trace,
        orthonormality,
        line_projector,
        line_orthogonality,
    }
}

/// Full acceptability check of a built Wigner family.
pub fn verify_acceptability(fam: &WignerFamily) -> AcceptabilityReport {
    verify_ops_acceptability(&fam.field, &fam.ops)
}

/// Extract the d+1 mutually unbiased bases from parallel-line averages.
///
/// Basis k comes from direction k; state i of a basis comes from the line
/// with offset i. Orthonormality and pairwise unbiasedness are verified.
pub fn mubs_from_wigner(fam: &WignerFamily) -> Result<MubSet, WignerError> {
    let d = fam.d();
    let mut bases = Vec::with_capacity(d + 1);
    for direction in 0..=d {
        let mut basis = Vec::with_capacity(d);
        for offset in 0..d {
            let avg = line_average(
                fam,
                &LineSpec {
                    direction,
                    offset: FieldElement(offset),
                },
            );
            basis.push(mat::extract_pure_state(&avg, mat::PROJECTOR_TOL)?);
        }
        bases.push(basis);
    }

    let mut orth = 0.0f64;
    let mut unbiased = 0.0f64;
    for (k, basis) in bases.iter().enumerate() {
        for (i, v) in basis.iter().enumerate() {
            for (j, w) in basis.iter().enumerate() {
                let ip = mat::inner(v, w).norm();
                let expected = if i == j { 1.0 } else { 0.0 };
                orth = orth.max((ip - expected).abs());
            }
        }
        for other in bases.iter().skip(k + 1) {
            for v in basis {
                for w in other {
                    let overlap_sq = mat::inner(v, w).norm_sqr();
                    unbiased = unbiased.max((overlap_sq - 1.0 / d as f64).abs());
                }
            }
        }
    }
    if orth > 1e-8 {
        return Err(WignerError::MubFailure {
            property: "orthonormality",
            residual: orth,
        });
    }
    if unbiased > 1e-8 {
        return Err(WignerError::MubFailure {
            property: "unbiasedness",
            residual: unbiased,
        });
    }

    Ok(MubSet {
        bases,
        provenance: (0..=d).collect(),
    })
}

/// Wigner distribution of a state: values (1/d)·tr(ρ·W), real and summing
/// to 1.
pub fn wigner_distribution(
    rho: &DensityMatrix,
    fam: &WignerFamily,
) -> Result<WignerDistribution, WignerError> {
    let d = fam.d();
    if rho.dim() != d {
        return Err(WignerError::ShapeMismatch {
            expected: d,
            got: rho.dim(),
        });
    }
    let mut values = Vec::with_capacity(d * d);
    for w in &fam.ops {
        let v = rho.mat().mul(w).trace() / d as f64;
        debug_assert!(v.im.abs() < 1e-10, "Wigner value should be real");
        values.push(v.re);
    }
    Ok(WignerDistribution { d, values })
}

/// Weyl distribution of a state: w_{i,j} = (1/d)·tr(ρ·V^j_i†).
pub fn weyl_distribution(
    rho: &DensityMatrix,
    f: &FieldTables,
) -> Result<WeylDistribution, WignerError> {
    let d = f.d();
    if rho.dim() != d {
        return Err(WignerError::ShapeMismatch {
            expected: d,
            got: rho.dim(),
        });
    }
    let mut values = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let v = displacement(f, DisplacementIndex::new(i, j));
            values.push(rho.mat().mul(&v.dagger()).trace() / d as f64);
        }
    }
    Ok(WeylDistribution { d, values })
}

/// Invert a Wigner distribution: ρ = Σ values·W (exact by orthonormality).
pub fn reconstruct_from_wigner(
    dist: &WignerDistribution,
    fam: &WignerFamily,
) -> Result<DensityMatrix, WignerError> {
    let d = fam.d();
    if dist.d != d {
        return Err(WignerError::ShapeMismatch {
            expected: d,
            got: dist.d,
        });
    }
    let mut rho = CMatrix::zeros(d, d);
    for (value, w) in dist.values.iter().zip(&fam.ops) {
        rho = rho.add(&w.scale(Complex64::new(*value, 0.0)));
    }
    Ok(DensityMatrix::new(rho)?)
}

/// Invert a Weyl distribution: ρ = Σ w_{i,j}·V^j_i.
pub fn reconstruct_from_weyl(
    dist: &WeylDistribution,
    f: &FieldTables,
) -> Result<DensityMatrix, WignerError> {
    let d = f.d();
    if dist.d != d {
        return Err(WignerError::ShapeMismatch {
            expected: d,
            got: dist.d,
        });
    }
    let mut rho = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let v = displacement(f, DisplacementIndex::new(i, j));
            rho = rho.add(&v.scale(dist.value(i, j)));
        }
    }
    Ok(DensityMatrix::new(rho)?)
}

/// Verify the displacement covariance of the family: conjugating W_{(0,0)}
/// by V^{i₂}_{i₁} reaches the phase-point operator at (i₁, i₂),
///
/// ```text
/// W_{(i₁,i₂)} = V^{i₂}_{i₁}·W_{(0,0)}·(V^{i₂}_{i₁})†
/// ```
///
/// (equivalently, (V^{i₂}_{i₁})†·W_{(0,0)}·V^{i₂}_{i₁} lands on the negated
/// point (⊖i₁, ⊖i₂); the two orientations coincide in characteristic 2).
/// Returns the worst Frobenius residual over all d² points.
pub fn covariance_check(fam: &WignerFamily) -> f64 {
    let d = fam.d();
    let w00 = fam.op(0, 0);
    let mut worst = 0.0f64;
    for i1 in 0..d {
        for i2 in 0..d {
            let v = displacement(&fam.field, DisplacementIndex::new(i1, i2));
            let conj = v.mul(w00).mul(&v.dagger());
            worst = worst.max(conj.frob_dist(fam.op(i1, i2)));
        }
    }
    worst
}

/// Qubit-only symplectic Fourier transform of the Weyl distribution,
/// W_{k,l} = (1/2)·Σ_{i,j} (−1)^{i·l−j·k}·w̃_{i,j}, where w̃ re-expresses the
/// coefficients over the canonical Hermitian (Pauli) operators. Agrees with
/// [`wigner_distribution`] under the canonical convention.
pub fn qubit_symplectic_transform(w: &WeylDistribution) -> Result<WignerDistribution, WignerError> {
    if w.d != 2 {
        return Err(WignerError::WrongDimension(w.d));
    }
    // w is taken over V operators; re-express over the Hermitian canonical
    // set (V^1_1 is dressed by −i into σ_Y, so its coefficient picks up the
    // conjugate factor +i)
    let dress = |i: usize, j: usize| -> Complex64 {
        if i == 1 && j == 1 {
            Complex64::new(0.0, 1.0)
        } else {
            Complex64::new(1.0, 0.0)
        }
    };
    let mut values = Vec::with_capacity(4);
    for k in 0..2 {
        for l in 0..2 {
            let mut sum = Complex64::new(0.0, 0.0);
            for i in 0..2 {
                for j in 0..2 {
                    let sign = if (i * l + j * k) % 2 == 0 { 1.0 } else { -1.0 };
                    sum += w.value(i, j) * dress(i, j) * sign;
                }
            }
            let v = sum * 0.5;
            debug_assert!(v.im.abs() < 1e-10);
            values.push(v.re);
        }
    }
    Ok(WignerDistribution { d: 2, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;
    use crate::mat::random_density;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli(k: usize) -> CMatrix {
        let rows = match k {
            1 => vec![vec![c(0., 0.), c(1., 0.)], vec![c(1., 0.), c(0., 0.)]],
            2 => vec![vec![c(0., 0.), c(0., -1.)], vec![c(0., 1.), c(0., 0.)]],
            3 => vec![vec![c(1., 0.), c(0., 0.)], vec![c(0., 0.), c(-1., 0.)]],
            _ => vec![vec![c(1., 0.), c(0., 0.)], vec![c(0., 0.), c(1., 0.)]],
        };
        CMatrix::from_rows(rows)
    }

    fn qubit_family() -> WignerFamily {
        let f = build_field(2, 1, None).unwrap();
        canonical_wigner_family(&f).unwrap()
    }

    #[test]
    fn qubit_w00_is_the_symmetric_point_operator() {
        let fam = qubit_family();
        let expected = pauli(0)
            .add(&pauli(1))
            .add(&pauli(2))
            .add(&pauli(3))
            .scale(c(0.5, 0.0));
        assert!(fam.op(0, 0).frob_dist(&expected) < 1e-12);
    }

    #[test]
    fn wigner_ops_sum_to_d_times_identity() {
        for (p, m) in [(2, 1), (3, 1), (2, 2), (3, 2)] {
            let f = build_field(p, m, None).unwrap();
            let fam = canonical_wigner_family(&f).unwrap();
            let d = f.d();
            let mut sum = CMatrix::zeros(d, d);
            for w in fam.ops() {
                sum = sum.add(w);
            }
            assert!(sum.frob_dist(&CMatrix::identity(d).scale(c(d as f64, 0.0))) < 1e-9);
        }
    }

    #[test]
    fn canonical_families_are_acceptable() {
        for (p, m) in [
            (2, 1),
            (3, 1),
            (2, 2),
            (5, 1),
            (7, 1),
            (2, 3),
            (3, 2),
            (2, 4),
        ] {
            let f = build_field(p, m, None).unwrap();
            let fam = canonical_wigner_family(&f).unwrap();
            let report = verify_acceptability(&fam);
            assert!(report.passes(1e-8), "d = {}: {:?}", f.d(), report);
        }
    }

    #[test]
    fn inconsistent_sign_flip_fails_property_c() {
        // Flip the sign of the σ_X term in W_{(0,0)} only. No group-closing
        // convention produces this grid, and the slope-0 line average
        // degenerates to I/2, which is not a projector.
        let fam = qubit_family();
        let mut ops = fam.ops().to_vec();
        ops[0] = ops[0].sub(&pauli(1)); // (1/2)(I+X+Y+Z) − X = (1/2)(I−X+Y+Z)
        let f = build_field(2, 1, None).unwrap();
        let report = verify_ops_acceptability(&f, &ops);
        assert!(!report.passes(1e-8));
        assert!(report.line_projector > 1e-8);
    }

    #[test]
    fn vertical_lines_give_computational_projectors() {
        for (p, m) in [(2, 1), (3, 1), (2, 2)] {
            let f = build_field(p, m, None).unwrap();
            let fam = canonical_wigner_family(&f).unwrap();
            let d = f.d();
            for offset in 0..d {
                let avg = line_average(
                    &fam,
                    &LineSpec {
                        direction: 0,
                        offset: FieldElement(offset),
                    },
                );
                let mut expected = CMatrix::zeros(d, d);
                expected[(offset, offset)] = c(1.0, 0.0);
                assert!(avg.frob_dist(&expected) < 1e-10);
            }
        }
    }

    #[test]
    fn qubit_slope_lines_give_x_and_y_projectors() {
        let fam = qubit_family();
        let avg = line_average(
            &fam,
            &LineSpec {
                direction: 1,
                offset: FieldElement(0),
            },
        );
        let expected = CMatrix::identity(2).add(&pauli(1)).scale(c(0.5, 0.0));
        assert!(avg.frob_dist(&expected) < 1e-12);
        let avg = line_average(
            &fam,
            &LineSpec {
                direction: 2,
                offset: FieldElement(0),
            },
        );
        let expected = CMatrix::identity(2).add(&pauli(2)).scale(c(0.5, 0.0));
        assert!(avg.frob_dist(&expected) < 1e-12);
    }

    #[test]
    fn parallel_lines_are_orthogonal() {
        let f = build_field(3, 1, None).unwrap();
        let fam = canonical_wigner_family(&f).unwrap();
        for direction in 0..=3 {
            for a in 0..3 {
                for b in (a + 1)..3 {
                    let pa = line_average(
                        &fam,
                        &LineSpec {
                            direction,
                            offset: FieldElement(a),
                        },
                    );
                    let pb = line_average(
                        &fam,
                        &LineSpec {
                            direction,
                            offset: FieldElement(b),
                        },
                    );
                    assert!(pa.hs_inner(&pb).norm() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn qubit_mubs_are_the_pauli_eigenbases() {
        let fam = qubit_family();
        let mubs = mubs_from_wigner(&fam).unwrap();
        assert_eq!(mubs.bases.len(), 3);
        // direction 0 = computational (σ_Z), 1 = σ_X, 2 = σ_Y eigenbases
        let s = 1.0 / 2f64.sqrt();
        assert!((mubs.state(0, 0)[0] - c(1., 0.)).norm() < 1e-10);
        assert!((mubs.state(1, 0)[1] - c(s, 0.)).norm() < 1e-10);
        assert!((mubs.state(2, 0)[1] - c(0., s)).norm() < 1e-10);
    }

    #[test]
    fn qutrit_mubs_are_pairwise_unbiased() {
        let f = build_field(3, 1, None).unwrap();
        let fam = canonical_wigner_family(&f).unwrap();
        let mubs = mubs_from_wigner(&fam).unwrap();
        assert_eq!(mubs.bases.len(), 4);
        for k in 0..4 {
            for l in (k + 1)..4 {
                for i in 0..3 {
                    for j in 0..3 {
                        let overlap = mat::inner(mubs.state(k, i), mubs.state(l, j)).norm_sqr();
                        assert!((overlap - 1.0 / 3.0).abs() < 1e-8);
                    }
                }
            }
        }
    }

    /// The two-qubit MUB set contains exactly three product bases and two
    /// maximally entangled ones.
    #[test]
    fn two_qubit_mubs_split_product_and_entangled() {
        let f = build_field(2, 2, None).unwrap();
        let fam = canonical_wigner_family(&f).unwrap();
        let mubs = mubs_from_wigner(&fam).unwrap();
        assert_eq!(mubs.bases.len(), 5);
        let mut entangled_bases = 0;
        for basis in &mubs.bases {
            let mut basis_entangled = true;
            for state in basis {
                // reduced density matrix of the first qubit
                let rho = CMatrix::outer(state, state);
                let mut red = CMatrix::zeros(2, 2);
                for i in 0..2 {
                    for j in 0..2 {
                        for k in 0..2 {
                            let v = red[(i, j)] + rho[(i * 2 + k, j * 2 + k)];
                            red[(i, j)] = v;
                        }
                    }
                }
                let maximally_mixed = CMatrix::identity(2).scale(c(0.5, 0.0));
                if red.frob_dist(&maximally_mixed) > 1e-8 {
                    basis_entangled = false;
                }
            }
            if basis_entangled {
                entangled_bases += 1;
            }
        }
        assert_eq!(entangled_bases, 2);
    }

    #[test]
    fn wigner_distribution_of_basis_states() {
        let fam = qubit_family();
        let zero = DensityMatrix::pure(&[c(1., 0.), c(0., 0.)]);
        let dist = wigner_distribution(&zero, &fam).unwrap();
        // (1/2)·δ_{k,0}
        assert!((dist.value(0, 0) - 0.5).abs() < 1e-12);
        assert!((dist.value(0, 1) - 0.5).abs() < 1e-12);
        assert!(dist.value(1, 0).abs() < 1e-12);
        assert!(dist.value(1, 1).abs() < 1e-12);

        let s = 1.0 / 2f64.sqrt();
        let plus = DensityMatrix::pure(&[c(s, 0.), c(s, 0.)]);
        let dist = wigner_distribution(&plus, &fam).unwrap();
        // (1/2)·δ_{l,0}
        assert!((dist.value(0, 0) - 0.5).abs() < 1e-12);
        assert!((dist.value(1, 0) - 0.5).abs() < 1e-12);
        assert!(dist.value(0, 1).abs() < 1e-12);
        assert!(dist.value(1, 1).abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_is_uniform() {
        for (p, m) in [(2, 1), (3, 1), (2, 2)] {
            let f = build_field(p, m, None).unwrap();
            let fam = canonical_wigner_family(&f).unwrap();
            let d = f.d();
            let rho = DensityMatrix::maximally_mixed(d);
            let dist = wigner_distribution(&rho, &fam).unwrap();
            for v in &dist.values {
                assert!((v - 1.0 / (d * d) as f64).abs() < 1e-12);
            }
            assert!((dist.total() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn line_marginals_equal_projector_probabilities() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (p, m) in [(2, 1), (3, 1), (2, 2)] {
            let f = build_field(p, m, None).unwrap();
            let fam = canonical_wigner_family(&f).unwrap();
            let d = f.d();
            let rho = random_density(d, &mut rng);
            let dist = wigner_distribution(&rho, &fam).unwrap();
            for direction in 0..=d {
                for offset in 0..d {
                    let line = LineSpec {
                        direction,
                        offset: FieldElement(offset),
                    };
                    let marginal: f64 = line
                        .points(&f)
                        .iter()
                        .map(|&(i1, i2)| dist.value(i1.0, i2.0))
                        .sum();
                    let projector = line_average(&fam, &line);
                    let prob = rho.mat().mul(&projector).trace().re;
                    assert!((marginal - prob).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn mub_state_wigner_support_is_its_line() {
        for (p, m) in [(2, 1), (3, 1), (2, 2)] {
            let f = build_field(p, m, None).unwrap();
            let fam = canonical_wigner_family(&f).unwrap();
            let d = f.d();
            let mubs = mubs_from_wigner(&fam).unwrap();
            for direction in 0..=d {
                for offset in 0..d {
                    let state = DensityMatrix::pure(mubs.state(direction, offset));
                    let dist = wigner_distribution(&state, &fam).unwrap();
                    let line = LineSpec {
                        direction,
                        offset: FieldElement(offset),
                    };
                    let on_line: std::collections::HashSet<(usize, usize)> =
                        line.points(&f).iter().map(|&(a, b)| (a.0, b.0)).collect();
                    for i1 in 0..d {
                        for i2 in 0..d {
                            let expected = if on_line.contains(&(i1, i2)) {
                                1.0 / d as f64
                            } else {
                                0.0
                            };
                            assert!(
                                (dist.value(i1, i2) - expected).abs() < 1e-9,
                                "d={d} dir={direction} offset={offset} point=({i1},{i2})"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn distributions_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for (p, m) in [(2, 1), (3, 1), (2, 2)] {
            let f = build_field(p, m, None).unwrap();
            let fam = canonical_wigner_family(&f).unwrap();
            for _ in 0..17 {
                let rho = random_density(f.d(), &mut rng);
                let wd = wigner_distribution(&rho, &fam).unwrap();
                let back = reconstruct_from_wigner(&wd, &fam).unwrap();
                assert!(back.mat().frob_dist(rho.mat()) < 1e-10);

                let weyl = weyl_distribution(&rho, &f).unwrap();
                assert!((weyl.value(0, 0) - c(1.0 / f.d() as f64, 0.0)).norm() < 1e-12);
                let back = reconstruct_from_weyl(&weyl, &f).unwrap();
                assert!(back.mat().frob_dist(rho.mat()) < 1e-10);
            }
        }
    }

    #[test]
    fn qubit_weyl_slots_match_bloch_components() {
        // Bloch (0,0,1): w = (1/2, 0, 0, 1/2) on the (I, X, Y, Z) slots
        let f = build_field(2, 1, None).unwrap();
        let zero = DensityMatrix::pure(&[c(1., 0.), c(0., 0.)]);
        let w = weyl_distribution(&zero, &f).unwrap();
        assert!((w.value(0, 0) - c(0.5, 0.)).norm() < 1e-12);
        assert!(w.value(1, 0).norm() < 1e-12);
        assert!(w.value(1, 1).norm() < 1e-12);
        assert!((w.value(0, 1) - c(0.5, 0.)).norm() < 1e-12);
    }

    #[test]
    fn mixed_state_weyl_is_a_delta_at_the_origin() {
        for (p, m) in [(2, 1), (3, 1), (2, 2)] {
            let f = build_field(p, m, None).unwrap();
            let d = f.d();
            let w = weyl_distribution(&DensityMatrix::maximally_mixed(d), &f).unwrap();
            for i in 0..d {
                for j in 0..d {
                    let expected = if (i, j) == (0, 0) {
                        1.0 / d as f64
                    } else {
                        0.0
                    };
                    assert!((w.value(i, j) - c(expected, 0.)).norm() < 1e-12);
                }
            }
        }
    }

    /// Line averages of direction k live in the eigenbasis of family k's
    /// dressed operators: every direction-k average commutes with every
    /// member of family k, which pins the transformation law between the
    /// vertical family and the others.
    #[test]
    fn line_averages_diagonalize_their_family() {
        for (p, m) in [(2, 1), (3, 1), (2, 2), (2, 3)] {
            let f = build_field(p, m, None).unwrap();
            let fam = canonical_wigner_family(&f).unwrap();
            let d = f.d();
            for direction in 0..=d {
                let conv = &fam.conventions()[direction];
                let dressed: Vec<CMatrix> = conv
                    .family
                    .members
                    .iter()
                    .zip(&conv.phases)
                    .map(|(&idx, &phase)| displacement(&f, idx).scale(phase))
                    .collect();
                for offset in 0..d {
                    let avg = line_average(
                        &fam,
                        &LineSpec {
                            direction,
                            offset: FieldElement(offset),
                        },
                    );
                    for u in &dressed {
                        let comm = u.mul(&avg).sub(&avg.mul(u));
                        assert!(
                            comm.frob_norm() < 1e-9,
                            "d={d} direction={direction} offset={offset}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn covariance_relation_holds() {
        for (p, m) in [(2, 1), (3, 1), (2, 2)] {
            let f = build_field(p, m, None).unwrap();
            let fam = canonical_wigner_family(&f).unwrap();
            assert!(covariance_check(&fam) < 1e-10, "d = {}", f.d());
        }
    }

    #[test]
    fn symplectic_transform_agrees_with_wigner_distribution() {
        let fam = qubit_family();
        let f = build_field(2, 1, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let rho = random_density(2, &mut rng);
            let w = weyl_distribution(&rho, &f).unwrap();
            let transformed = qubit_symplectic_transform(&w).unwrap();
            let direct = wigner_distribution(&rho, &fam).unwrap();
            for k in 0..2 {
                for l in 0..2 {
                    assert!((transformed.value(k, l) - direct.value(k, l)).abs() < 1e-10);
                }
            }
        }
        // uniform for the maximally mixed state
        let w = weyl_distribution(&DensityMatrix::maximally_mixed(2), &f).unwrap();
        let transformed = qubit_symplectic_transform(&w).unwrap();
        for v in &transformed.values {
            assert!((v - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn non_closing_convention_is_rejected_at_build() {
        let f = build_field(2, 2, None).unwrap();
        let mut conventions = crate::weyl::canonical_conventions(&f).unwrap();
        conventions[1].phases[0] *= c(0., 1.);
        assert!(matches!(
            build_wigner_family(&f, &conventions),
            Err(WignerError::Weyl(_))
        ));
    }

    #[test]
    fn line_through_contains_its_point() {
        let f = build_field(2, 3, None).unwrap();
        let d = f.d();
        for direction in 0..=d {
            for a in 0..d {
                for b in 0..d {
                    let pt = (FieldElement(a), FieldElement(b));
                    let line = LineSpec::through(&f, direction, pt);
                    assert!(line.points(&f).contains(&pt));
                }
            }
        }
    }

    #[test]
    fn wrong_dimension_errors() {
        let f3 = build_field(3, 1, None).unwrap();
        let rho3 = DensityMatrix::maximally_mixed(3);
        let w3 = weyl_distribution(&rho3, &f3).unwrap();
        assert!(matches!(
            qubit_symplectic_transform(&w3),
            Err(WignerError::WrongDimension(3))
        ));
        let fam2 = qubit_family();
        assert!(matches!(
            wigner_distribution(&rho3, &fam2),
            Err(WignerError::ShapeMismatch { .. })
        ));
    }
}
