//! Generalized displacement operators over GF(d), their composition law, the
//! partition into d+1 commuting families, and the phase conventions that close
//! each family into a group.
//!
//! A displacement is indexed by a shift i and a phase index j:
//!
//! ```text
//! V^j_i = Σ_k γ^{(k⊕i)⊙j} |k⊕i⟩⟨k|
//! ```
//!
//! with γ the p-th root of unity and ⊕/⊙ the field operations. Products obey
//! V^{j_a}_{i_a}·V^{j_b}_{i_b} = γ^{⊖(i_a⊙j_b)}·V^{j_a⊕j_b}_{i_a⊕i_b}, so the
//! d²−1 non-identity indices split into d+1 families of d−1 pairwise commuting
//! operators: the vertical family {(0, j)} and, for each slope s, the family
//! {(i, s⊙i)}. Each family closes into a commutative group once its members
//! are dressed with suitable unit phases; the canonical choice implemented
//! here is γ^{⊖(s⊙i⊙i)⊘2} in odd characteristic and a quadratic-form power of
//! i in characteristic 2, fixed so that the dressed qubit operators are
//! exactly the Pauli matrices.

use crate::field::{quarter_phase, FieldElement, FieldTables};
use crate::mat::CMatrix;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WeylError {
    #[error(
        "family {family} phase closure failure at members {a:?}·{b:?} (residual {residual:.3e})"
    )]
    ClosureFailure {
        family: usize,
        a: (usize, usize),
        b: (usize, usize),
        residual: f64,
    },
    #[error("member ({0}, {1}) does not belong to family {2}")]
    NotAMember(usize, usize, usize),
    #[error("sign-convention enumeration requires characteristic 2, got p = {0}")]
    OddCharacteristic(usize),
}

/// Index (shift i, phase j) of a displacement operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DisplacementIndex {
    pub i: FieldElement,
    pub j: FieldElement,
}

impl DisplacementIndex {
    pub fn new(i: usize, j: usize) -> Self {
        Self {
            i: FieldElement(i),
            j: FieldElement(j),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.i.0 == 0 && self.j.0 == 0
    }
}

/// One of the d+1 commuting families; label 0 is the vertical family {V^j_0},
/// label l ≥ 1 carries slope l−1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutingFamily {
    pub label: usize,
    pub members: Vec<DisplacementIndex>,
}

impl CommutingFamily {
    pub fn slope(&self, f: &FieldTables) -> Option<FieldElement> {
        if self.label == 0 {
            None
        } else {
            debug_assert!(self.label <= f.d());
            Some(FieldElement(self.label - 1))
        }
    }

    /// Position of a member in the family's fixed ordering.
    pub fn member_position(&self, idx: DisplacementIndex) -> Option<usize> {
        self.members.iter().position(|&m| m == idx)
    }
}

/// Unit phases attached to a family's members so the dressed set, together
/// with the identity, forms a group.
#[derive(Debug, Clone)]
pub struct PhaseConvention {
    pub family: CommutingFamily,
    pub phases: Vec<Complex64>,
}

impl PhaseConvention {
    pub fn phase_of(&self, idx: DisplacementIndex) -> Option<Complex64> {
        self.family.member_position(idx).map(|k| self.phases[k])
    }
}

/// The d×d unitary V^j_i; V^0_0 is the identity.
pub fn displacement(f: &FieldTables, idx: DisplacementIndex) -> CMatrix {
    let d = f.d();
    let mut m = CMatrix::zeros(d, d);
    for k in 0..d {
        let row = f.add(FieldElement(k), idx.i);
        let phase = f.char_phase(f.mul(row, idx.j), false);
        m[(row.0, k)] = phase;
    }
    m
}

/// Composition law: returns (phase, c) with V_a·V_b = phase·V_c.
pub fn displacement_product_phase(
    f: &FieldTables,
    a: DisplacementIndex,
    b: DisplacementIndex,
) -> (Complex64, DisplacementIndex) {
    let phase = f.char_phase(f.neg(f.mul(a.i, b.j)), false);
    let c = DisplacementIndex {
        i: f.add(a.i, b.i),
        j: f.add(a.j, b.j),
    };
    (phase, c)
}

/// The d+1 commuting families, in label order with members ordered by their
/// running index.
pub fn partition_families(f: &FieldTables) -> Vec<CommutingFamily> {
    let d = f.d();
    let mut out = Vec::with_capacity(d + 1);
    out.push(CommutingFamily {
        label: 0,
        members: (1..d).map(|j| DisplacementIndex::new(0, j)).collect(),
    });
    for l in 1..=d {
        let slope = FieldElement(l - 1);
        out.push(CommutingFamily {
            label: l,
            members: (1..d)
                .map(|i| DisplacementIndex {
                    i: FieldElement(i),
                    j: f.mul(slope, FieldElement(i)),
                })
                .collect(),
        });
    }
    out
}

/// Canonical phase for a family member.
///
/// Family 0 members keep phase 1. For odd p the phase on the slope-s member
/// with shift i is γ^{⊖(s⊙i⊙i)⊘2}. For p = 2 it is i^{−q(i)} with the
/// quadratic form
///
/// ```text
/// q(i) = Σ_{n∈bits(i)} s(slope⊙2ⁿ⊙2ⁿ)  −  2·Σ_{n<n'∈bits(i)} c(slope⊙2ⁿ⊙2ⁿ')   (mod 4)
/// ```
///
/// where s(·) is the plain digit sum and c(·) the character exponent. The
/// branch is fixed so the dressed qubit slope-1 member is σ_Y, and the square
/// of every phase is γ^{⊖(slope⊙i⊙i)}, both of which are checked here.
pub fn canonical_phase(
    f: &FieldTables,
    family_label: usize,
    member: DisplacementIndex,
) -> Result<Complex64, WeylError> {
    let in_family = if family_label == 0 {
        member.i.0 == 0
    } else {
        f.mul(FieldElement(family_label - 1), member.i) == member.j
    };
    if !in_family && !member.is_identity() {
        return Err(WeylError::NotAMember(member.i.0, member.j.0, family_label));
    }
    if family_label == 0 || member.is_identity() {
        return Ok(Complex64::new(1.0, 0.0));
    }

    let slope = FieldElement(family_label - 1);
    let i = member.i;
    let phase = if f.p() == 2 {
        let digits = f.digits(i);
        let bits: Vec<usize> = (0..f.pp.m).filter(|&n| digits[n] == 1).collect();
        let mut q: usize = 0;
        for (a, &n) in bits.iter().enumerate() {
            let e_n = FieldElement(1 << n);
            let diag = f.mul(slope, f.mul(e_n, e_n));
            q += 4 - f.weighted_digit_sum(diag) % 4;
            for &n2 in &bits[a + 1..] {
                let e_m = FieldElement(1 << n2);
                q += 2 * f.char_value(f.mul(slope, f.mul(e_n, e_m)));
            }
        }
        quarter_phase(q % 4)
    } else {
        let x = f.neg(f.mul(slope, f.mul(i, i)));
        f.char_phase(x, true)
    };

    // The squared phase must be γ^{⊖(slope⊙i⊙i)}.
    let expected_sq = f.char_phase(f.neg(f.mul(slope, f.mul(i, i))), false);
    let residual = (phase * phase - expected_sq).norm();
    if residual > 1e-12 {
        return Err(WeylError::ClosureFailure {
            family: family_label,
            a: (member.i.0, member.j.0),
            b: (member.i.0, member.j.0),
            residual,
        });
    }
    Ok(phase)
}

/// Canonical phases for a whole family, with group closure verified against
/// the explicit matrices.
pub fn canonical_convention(
    f: &FieldTables,
    family: &CommutingFamily,
) -> Result<PhaseConvention, WeylError> {
    let phases = family
        .members
        .iter()
        .map(|&m| canonical_phase(f, family.label, m))
        .collect::<Result<Vec<_>, _>>()?;
    let conv = PhaseConvention {
        family: family.clone(),
        phases,
    };
    verify_closure(f, &conv, 1e-10)?;
    Ok(conv)
}

/// Canonical conventions for all d+1 families.
pub fn canonical_conventions(f: &FieldTables) -> Result<Vec<PhaseConvention>, WeylError> {
    partition_families(f)
        .iter()
        .map(|fam| canonical_convention(f, fam))
        .collect()
}

fn phased_member(f: &FieldTables, conv: &PhaseConvention, pos: usize) -> CMatrix {
    displacement(f, conv.family.members[pos]).scale(conv.phases[pos])
}

/// Check that {phase·V} ∪ {1} is closed under multiplication.
pub fn verify_closure(f: &FieldTables, conv: &PhaseConvention, tol: f64) -> Result<(), WeylError> {
    let d = f.d();
    let mats: Vec<CMatrix> = (0..conv.family.members.len())
        .map(|k| phased_member(f, conv, k))
        .collect();
    let identity = CMatrix::identity(d);
    let lookup = |idx: DisplacementIndex| -> &CMatrix {
        if idx.is_identity() {
            &identity
        } else {
            &mats[conv
                .family
                .member_position(idx)
                .expect("family indices are closed under addition")]
        }
    };
    for (ka, &a) in conv.family.members.iter().enumerate() {
        for (kb, &b) in conv.family.members.iter().enumerate() {
            let c = DisplacementIndex {
                i: f.add(a.i, b.i),
                j: f.add(a.j, b.j),
            };
            let prod = mats[ka].mul(&mats[kb]);
            let residual = prod.frob_dist(lookup(c));
            if residual > tol {
                return Err(WeylError::ClosureFailure {
                    family: conv.family.label,
                    a: (a.i.0, a.j.0),
                    b: (b.i.0, b.j.0),
                    residual,
                });
            }
        }
    }
    Ok(())
}

/// Build the dressed unitaries U = phase·V of a convention, additionally
/// verifying U_l† = U_{⊖l}.
pub fn build_u_family(f: &FieldTables, conv: &PhaseConvention) -> Result<Vec<CMatrix>, WeylError> {
    verify_closure(f, conv, 1e-10)?;
    let mats: Vec<CMatrix> = (0..conv.family.members.len())
        .map(|k| phased_member(f, conv, k))
        .collect();
    for (k, &m) in conv.family.members.iter().enumerate() {
        let negated = DisplacementIndex {
            i: f.neg(m.i),
            j: f.neg(m.j),
        };
        let pos = conv
            .family
            .member_position(negated)
            .expect("families are closed under negation");
        let residual = mats[k].dagger().frob_dist(&mats[pos]);
        if residual > 1e-10 {
            return Err(WeylError::ClosureFailure {
                family: conv.family.label,
                a: (m.i.0, m.j.0),
                b: (negated.i.0, negated.j.0),
                residual,
            });
        }
    }
    Ok(mats)
}

/// Exhaustively enumerate the unit-phase assignments from {±1, ±i} that close
/// a family (characteristic 2 only).
pub fn enumerate_sign_conventions(
    f: &FieldTables,
    family: &CommutingFamily,
) -> Result<Vec<PhaseConvention>, WeylError> {
    if f.p() != 2 {
        return Err(WeylError::OddCharacteristic(f.p()));
    }
    let n = family.members.len();
    let options = [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
    ];
    let mut found = Vec::new();
    for assignment in 0..4usize.pow(n as u32) {
        let mut t = assignment;
        let phases: Vec<Complex64> = (0..n)
            .map(|_| {
                let p = options[t % 4];
                t /= 4;
                p
            })
            .collect();
        let conv = PhaseConvention {
            family: family.clone(),
            phases,
        };
        if verify_closure(f, &conv, 1e-10).is_ok() {
            found.push(conv);
        }
    }
    Ok(found)
}
