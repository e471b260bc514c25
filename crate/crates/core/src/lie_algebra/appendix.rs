//! Printed SU(2)/SU(3)/SU(4) decompositions `[λ_l, λ⃗] = (Σ X_μν L_μν) λ⃗`
//! and their reconciliation against the commutator-trace oracle.
//!
//! Plane membership is compared exactly. Coefficients are only reported: the
//! printed tables use a different overall scale per group and are not sign
//! consistent with one another, so the oracle value is the authority.

use serde::Serialize;

use crate::lie_algebra::{adjoint_generator, BasisKind, GeneratorBasis};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// A printed term `coefficient · L_{μν}` as it appears in the tables, where
/// `μ > ν` is allowed (and means `−L_{νμ}`).
type PrintedTerm = (usize, usize, f64);

const SU2: [&[PrintedTerm]; 3] = [&[(2, 3, 4.0)], &[(1, 3, -4.0)], &[(1, 2, 4.0)]];

const SU3: [&[PrintedTerm]; 8] = [
    &[(2, 3, 4.0), (4, 7, 2.0), (6, 5, 2.0)],
    &[(1, 3, -4.0), (4, 6, 2.0), (5, 7, 2.0)],
    &[(2, 1, 4.0), (4, 5, 2.0), (7, 6, -2.0)],
    &[(6, 2, -2.0), (7, 1, -2.0), (5, 3, -2.0), (5, 8, -2.0 * SQRT3)],
    &[(1, 6, 2.0), (3, 4, 2.0), (7, 2, -2.0), (8, 4, -2.0 * SQRT3)],
    &[(2, 4, -2.0), (3, 7, 2.0), (5, 1, 2.0), (7, 8, 2.0 * SQRT3)],
    &[(1, 4, 2.0), (2, 5, 2.0), (6, 3, -2.0), (8, 6, -2.0 * SQRT3)],
    &[(4, 5, 2.0 * SQRT3), (6, 7, 2.0 * SQRT3)],
];

/// The same λ3 decomposition as printed in the main text.
const SU3_LAMBDA3_MAIN_TEXT: &[PrintedTerm] = &[(1, 2, -1.0), (4, 5, 1.0), (7, 6, 1.0)];

const SU4: [&[PrintedTerm]; 15] = [
    &[(2, 3, 8.0), (10, 13, 8.0), (11, 14, 8.0), (12, 15, 8.0)],
    &[(1, 3, -8.0), (7, 13, -8.0), (8, 14, -8.0), (9, 15, -8.0)],
    &[(1, 2, 8.0), (7, 10, 8.0), (8, 11, 8.0), (9, 12, 8.0)],
    &[(5, 6, 8.0), (8, 9, 8.0), (11, 12, 8.0), (14, 15, 8.0)],
    &[(4, 6, -8.0), (7, 9, -8.0), (10, 12, -8.0), (13, 15, -8.0)],
    &[(4, 5, 8.0), (7, 8, 8.0), (10, 11, 8.0), (13, 14, 8.0)],
    &[(2, 13, 8.0), (3, 10, -8.0), (5, 9, 8.0), (6, 8, -8.0)],
    &[(2, 14, -8.0), (3, 11, -8.0), (4, 9, -8.0), (6, 7, 8.0)],
    &[(2, 15, 8.0), (3, 12, -8.0), (4, 8, 8.0), (5, 7, -8.0)],
    &[(1, 13, -8.0), (3, 7, 8.0), (5, 12, 8.0), (6, 11, -8.0)],
    &[(1, 14, -8.0), (3, 8, 8.0), (4, 12, -8.0), (6, 10, 8.0)],
    &[(1, 15, -8.0), (3, 9, 8.0), (4, 11, 8.0), (5, 10, -8.0)],
    &[(1, 10, 8.0), (2, 7, -8.0), (5, 15, 8.0), (6, 14, -8.0)],
    &[(1, 11, 8.0), (2, 8, -8.0), (4, 15, -8.0), (6, 13, 8.0)],
    &[(1, 12, 8.0), (2, 9, -8.0), (4, 14, 8.0), (5, 13, -8.0)],
];

/// `(μ, ν, coefficient)` with `μ < ν`, coefficient of the natural generator `L_μν`.
pub type PlaneTriple = (usize, usize, f64);

fn normalize(terms: &[PrintedTerm]) -> Vec<PlaneTriple> {
    let mut out: Vec<PlaneTriple> = terms
        .iter()
        .map(|&(mu, nu, coef)| if mu < nu { (mu, nu, coef) } else { (nu, mu, -coef) })
        .collect();
    out.sort_by_key(|&(mu, nu, _)| (mu, nu));
    out
}

/// The printed decomposition for one-based generator `l`, normalized to `μ < ν`.
pub fn printed_planes(kind: BasisKind, l: usize) -> Option<Vec<PlaneTriple>> {
    let table: &[&[PrintedTerm]] = match kind {
        BasisKind::Pauli => &SU2,
        BasisKind::GellMann => &SU3,
        BasisKind::PauliProduct => &SU4,
    };
    table.get(l.checked_sub(1)?).map(|t| normalize(t))
}

/// Another printing of the same decomposition found elsewhere in the text.
#[derive(Debug, Clone, Serialize)]
pub struct AlternatePrinting {
    pub source: String,
    pub planes: Vec<PlaneTriple>,
    pub membership_match: bool,
    /// Planes on which this printing and the appendix table disagree in sign.
    pub sign_disagreements: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReconciliationEntry {
    pub basis: String,
    pub generator_index: usize,
    pub printed_planes: Vec<PlaneTriple>,
    pub oracle_planes: Vec<PlaneTriple>,
    pub membership_match: bool,
    /// Printed over oracle coefficient, per shared plane.
    pub coefficient_ratios: Vec<PlaneTriple>,
    /// The common ratio when every shared plane has the same one.
    pub uniform_scale: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub alternate_printings: Vec<AlternatePrinting>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn membership(a: &[PlaneTriple], b: &[PlaneTriple]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.0 == y.0 && x.1 == y.1)
}

fn sign_disagreements(a: &[PlaneTriple], b: &[PlaneTriple]) -> Vec<(usize, usize)> {
    a.iter()
        .filter_map(|&(mu, nu, ca)| {
            b.iter()
                .find(|&&(m, n, _)| m == mu && n == nu)
                .filter(|&&(_, _, cb)| ca.signum() != cb.signum())
                .map(|_| (mu, nu))
        })
        .collect()
}

fn fmt_planes(planes: &[(usize, usize)]) -> String {
    planes
        .iter()
        .map(|(m, n)| format!("({m},{n})"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Compares oracle decompositions with the printed tables, one entry per generator.
pub fn reconcile_appendix(basis: &GeneratorBasis) -> Vec<ReconciliationEntry> {
    let kind = basis.kind();
    (1..=basis.adjoint_dim())
        .map(|l| {
            let direction = basis.unit_direction(l).expect("label in range");
            let generator = adjoint_generator(basis, &direction).expect("unit direction");
            let oracle_planes: Vec<PlaneTriple> = generator
                .planes()
                .iter()
                .map(|p| (p.mu, p.nu, p.natural_coefficient()))
                .collect();
            let printed = printed_planes(kind, l).expect("table covers basis");
            let membership_match = membership(&printed, &oracle_planes);

            let coefficient_ratios: Vec<PlaneTriple> = printed
                .iter()
                .filter_map(|&(mu, nu, printed)| {
                    oracle_planes
                        .iter()
                        .find(|&&(m, n, _)| m == mu && n == nu)
                        .map(|&(_, _, oracle)| (mu, nu, printed / oracle))
                })
                .collect();
            let uniform_scale = coefficient_ratios.first().and_then(|&(_, _, first)| {
                coefficient_ratios
                    .iter()
                    .all(|&(_, _, r)| (r - first).abs() <= 1e-9 * first.abs())
                    .then_some(first)
            });

            let mut notes = Vec::new();
            if !membership_match {
                notes.push("printed plane set differs from the oracle plane set".to_string());
            }
            let flipped = sign_disagreements(&printed, &oracle_planes);
            if uniform_scale.is_none() && !coefficient_ratios.is_empty() {
                let majority_negative =
                    coefficient_ratios.iter().filter(|r| r.2 < 0.0).count() * 2 > coefficient_ratios.len();
                let odd: Vec<(usize, usize)> = coefficient_ratios
                    .iter()
                    .filter(|r| (r.2 < 0.0) != majority_negative)
                    .map(|r| (r.0, r.1))
                    .collect();
                if !odd.is_empty() {
                    notes.push(format!(
                        "printed signs are not a uniform rescaling of the oracle; odd planes: {}",
                        fmt_planes(&odd)
                    ));
                } else {
                    notes.push("printed magnitudes are not a uniform rescaling of the oracle".into());
                }
            } else if !flipped.is_empty() && flipped.len() == printed.len() {
                notes.push("printed coefficients are the oracle's up to an overall negative scale".into());
            }

            let mut alternate_printings = Vec::new();
            if kind == BasisKind::GellMann && l == 3 {
                let planes = normalize(SU3_LAMBDA3_MAIN_TEXT);
                let disagreements = sign_disagreements(&planes, &printed);
                if !disagreements.is_empty() {
                    let oracle_values: Vec<String> = disagreements
                        .iter()
                        .filter_map(|&(mu, nu)| {
                            oracle_planes
                                .iter()
                                .find(|p| p.0 == mu && p.1 == nu)
                                .map(|p| format!("oracle L_{mu}{nu} coefficient {:+}", p.2))
                        })
                        .collect();
                    notes.push(format!(
                        "main-text and appendix decompositions of λ3 disagree in sign on {}; {}",
                        fmt_planes(&disagreements),
                        oracle_values.join(", ")
                    ));
                }
                alternate_printings.push(AlternatePrinting {
                    source: "main_text".into(),
                    membership_match: membership(&planes, &oracle_planes),
                    planes,
                    sign_disagreements: disagreements,
                });
            }

            ReconciliationEntry {
                basis: kind.group_tag().to_string(),
                generator_index: l,
                printed_planes: printed,
                oracle_planes,
                membership_match,
                coefficient_ratios,
                uniform_scale,
                alternate_printings,
                notes,
            }
        })
        .collect()
}
