//! Trisection diagrams at homology level and their validation.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::exactalg::{
    self, domain_warning, pairing, rank_over_fraction_field, smith_normal_form, HClass, IntPoly,
    SymplecticSpace,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("{family} has {found} rows, expected {expected}")]
    RowCount { family: Family, expected: usize, found: usize },
    #[error("{family}_{index} has length {found}, expected {expected}")]
    RowLength { family: Family, index: usize, expected: usize, found: usize },
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Alpha,
    Beta,
    Gamma,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Alpha, Family::Beta, Family::Gamma];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Family {
        Self::ALL[i % 3]
    }

    /// α → β → γ → α
    pub fn next(self) -> Family {
        Self::from_index(self.index() + 1)
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Alpha => "alpha",
            Family::Beta => "beta",
            Family::Gamma => "gamma",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = DiagramError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "alpha" | "a" | "α" => Ok(Family::Alpha),
            "beta" | "b" | "β" => Ok(Family::Beta),
            "gamma" | "c" | "γ" => Ok(Family::Gamma),
            _ => Err(DiagramError::UnknownFamily(s.to_string())),
        }
    }
}

/// Three ordered families of `g` classes each in `H_1(Σ_g)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TrisectionMatrix {
    space: SymplecticSpace,
    families: [Vec<HClass>; 3],
    label: String,
}

impl TrisectionMatrix {
    /// Checks shapes only; see [`validate`] for the homological conditions.
    pub fn new(
        space: SymplecticSpace,
        alpha: Vec<HClass>,
        beta: Vec<HClass>,
        gamma: Vec<HClass>,
    ) -> Result<Self, DiagramError> {
        let families = [alpha, beta, gamma];
        let g = space.genus();
        for (f, rows) in Family::ALL.into_iter().zip(&families) {
            if rows.len() != g {
                return Err(DiagramError::RowCount { family: f, expected: g, found: rows.len() });
            }
            if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != 2 * g) {
                return Err(DiagramError::RowLength {
                    family: f,
                    index: i + 1,
                    expected: 2 * g,
                    found: r.len(),
                });
            }
        }
        Ok(TrisectionMatrix { space, families, label: String::new() })
    }

    /// Convenience constructor from integer rows.
    pub fn from_i64_rows(
        genus: usize,
        alpha: &[&[i64]],
        beta: &[&[i64]],
        gamma: &[&[i64]],
    ) -> Result<Self, DiagramError> {
        let conv = |rows: &[&[i64]]| rows.iter().map(|r| HClass::from_i64s(r)).collect();
        Self::new(SymplecticSpace::new(genus), conv(alpha), conv(beta), conv(gamma))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn space(&self) -> SymplecticSpace {
        self.space
    }

    pub fn genus(&self) -> usize {
        self.space.genus()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn family(&self, f: Family) -> &[HClass] {
        &self.families[f.index()]
    }

    pub fn alpha(&self) -> &[HClass] {
        self.family(Family::Alpha)
    }

    pub fn beta(&self) -> &[HClass] {
        self.family(Family::Beta)
    }

    pub fn gamma(&self) -> &[HClass] {
        self.family(Family::Gamma)
    }

    /// Row `i` (0-based) of family `f`.
    pub fn row(&self, f: Family, i: usize) -> &HClass {
        &self.families[f.index()][i]
    }

    /// All `3g` rows in α, β, γ order.
    pub fn rows(&self) -> impl Iterator<Item = &HClass> {
        self.families.iter().flatten()
    }

    pub(crate) fn families_mut(&mut self) -> &mut [Vec<HClass>; 3] {
        &mut self.families
    }

    pub fn is_symbolic(&self) -> bool {
        self.rows().any(|r| !r.is_constant())
    }

    pub fn max_degree(&self) -> usize {
        self.rows().map(HClass::max_degree).max().unwrap_or(0)
    }

    /// Substitutes `n ← n0` in every entry.
    pub fn evaluate(&self, n0: i64) -> TrisectionMatrix {
        TrisectionMatrix {
            space: self.space,
            families: self
                .families
                .clone()
                .map(|rows| rows.iter().map(|r| r.evaluate(n0)).collect()),
            label: self.label.clone(),
        }
    }

    /// Applies `f` to every row.
    pub fn map_rows(&self, f: impl Fn(&HClass) -> HClass) -> TrisectionMatrix {
        TrisectionMatrix {
            space: self.space,
            families: self.families.clone().map(|rows| rows.iter().map(&f).collect()),
            label: self.label.clone(),
        }
    }

    /// Relabels families cyclically: the new α is the old β, and so on.
    pub fn rotate_families(&self) -> TrisectionMatrix {
        let [a, b, c] = self.families.clone();
        TrisectionMatrix { space: self.space, families: [b, c, a], label: self.label.clone() }
    }

    /// Pairing of two rows; rows always share the ambient space.
    pub fn omega(&self, f: Family, i: usize, h: Family, j: usize) -> IntPoly {
        pairing(self.row(f, i), self.row(h, j)).expect("rows share one symplectic space")
    }

    /// Rows of `x` followed by rows of `y`, as a `2g × 2g` matrix.
    pub fn stacked(&self, x: Family, y: Family) -> Vec<Vec<IntPoly>> {
        self.family(x)
            .iter()
            .chain(self.family(y))
            .map(|r| r.0.clone())
            .collect()
    }
}

impl fmt::Display for TrisectionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for fam in Family::ALL {
            for (i, r) in self.family(fam).iter().enumerate() {
                writeln!(f, "{fam}_{}: {r}", i + 1)?;
            }
        }
        Ok(())
    }
}

/// Entrywise, order-sensitive equality of all `3g` rows. The label is ignored.
pub fn equal(d1: &TrisectionMatrix, d2: &TrisectionMatrix) -> bool {
    d1.genus() == d2.genus() && d1.families == d2.families
}

/// One differing row between two matrices of equal genus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowMismatch {
    pub family: Family,
    /// 1-based
    pub index: usize,
    pub found: String,
    pub expected: String,
}

/// Rows where `found` differs from `expected`; `Err` with a note on genus mismatch.
pub fn mismatches(
    found: &TrisectionMatrix,
    expected: &TrisectionMatrix,
) -> Result<Vec<RowMismatch>, String> {
    if found.genus() != expected.genus() {
        return Err(format!("genus {} vs {}", found.genus(), expected.genus()));
    }
    let mut out = Vec::new();
    for f in Family::ALL {
        for (i, (a, b)) in found.family(f).iter().zip(expected.family(f)).enumerate() {
            if a != b {
                out.push(RowMismatch {
                    family: f,
                    index: i + 1,
                    found: a.to_string(),
                    expected: b.to_string(),
                });
            }
        }
    }
    Ok(out)
}

/// Cokernel `ℤ^{2g} / rowspan(X ∪ Y)` of one pair of families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairHomology {
    pub pair: (Family, Family),
    /// `k` in `#^k S¹×S²`
    pub free_rank: usize,
    #[serde(serialize_with = "crate::format::serialize_bigints")]
    pub torsion: Vec<BigInt>,
}

impl PairHomology {
    pub fn torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairHomologyAt {
    /// `None` when the matrix had integer entries and was not evaluated.
    pub n: Option<i64>,
    pub pairs: Vec<PairHomology>,
    pub free_rank_sum: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub genus: usize,
    pub isotropy_ok: [bool; 3],
    pub lagrangian_rank: [usize; 3],
    pub pair_homology: Vec<PairHomologyAt>,
    /// `Σ k_i = g` at every evaluated point; `None` if nothing was evaluated.
    pub euler_consistent: Option<bool>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn cut_systems_ok(&self) -> bool {
        self.isotropy_ok.iter().all(|&b| b) && self.lagrangian_rank.iter().all(|&r| r == self.genus)
    }

    pub fn pairs_torsion_free(&self) -> bool {
        self.pair_homology
            .iter()
            .all(|at| at.pairs.iter().all(PairHomology::torsion_free))
    }

    pub fn is_ok(&self) -> bool {
        self.cut_systems_ok() && self.pairs_torsion_free() && self.euler_consistent != Some(false)
    }
}

const PAIRS: [(Family, Family); 3] = [
    (Family::Alpha, Family::Beta),
    (Family::Beta, Family::Gamma),
    (Family::Gamma, Family::Alpha),
];

/// Cut-system and Heegaard-pair checks. Failures are reported, never thrown.
pub fn validate(d: &TrisectionMatrix, evaluate_at: &[i64]) -> ValidationReport {
    let g = d.genus();
    let mut notes = Vec::new();
    let mut isotropy_ok = [true; 3];
    let mut lagrangian_rank = [0; 3];
    for f in Family::ALL {
        'outer: for i in 0..g {
            for j in (i + 1)..g {
                if !d.omega(f, i, f, j).is_zero() {
                    isotropy_ok[f.index()] = false;
                    notes.push(format!("{f}_{} and {f}_{} have nonzero pairing", i + 1, j + 1));
                    break 'outer;
                }
            }
        }
        lagrangian_rank[f.index()] = if g == 0 {
            0
        } else {
            rank_over_fraction_field(d.family(f)).expect("rows share one space")
        };
        if lagrangian_rank[f.index()] != g {
            notes.push(format!("{f} has rank {} < {g}", lagrangian_rank[f.index()]));
        }
    }

    let points: Vec<Option<i64>> = if !evaluate_at.is_empty() {
        evaluate_at.iter().copied().map(Some).collect()
    } else if d.is_symbolic() {
        notes.push("symbolic entries: pair homology needs evaluation points".to_string());
        Vec::new()
    } else {
        vec![None]
    };

    let mut pair_homology = Vec::new();
    for n0 in points {
        let concrete = match n0 {
            Some(n0) => {
                if let Some(w) = domain_warning(n0) {
                    notes.push(w);
                }
                d.evaluate(n0)
            }
            None => d.clone(),
        };
        let at = n0.map_or(String::new(), |n| format!(" at n = {n}"));
        let mut pairs = Vec::new();
        for (x, y) in PAIRS {
            let snf = smith_normal_form(&concrete.stacked(x, y)).expect("evaluated entries");
            let ph = PairHomology { pair: (x, y), free_rank: snf.cokernel_free_rank(), torsion: snf.torsion() };
            if !ph.torsion_free() {
                notes.push(format!("({x}, {y}){at}: cokernel has torsion, not #^k S1xS2"));
            }
            pairs.push(ph);
        }
        let free_rank_sum = pairs.iter().map(|p| p.free_rank).sum();
        if free_rank_sum != g {
            notes.push(format!(
                "sphere bookkeeping{at}: free ranks sum to {free_rank_sum}, expected {g}"
            ));
        }
        pair_homology.push(PairHomologyAt { n: n0, pairs, free_rank_sum });
    }
    let euler_consistent = (!pair_homology.is_empty())
        .then(|| pair_homology.iter().all(|at| at.free_rank_sum == g));

    ValidationReport { genus: g, isotropy_ok, lagrangian_rank, pair_homology, euler_consistent, notes }
}

/// Integer rank of a family evaluated at `n0`.
pub fn family_rank_at(d: &TrisectionMatrix, f: Family, n0: i64) -> usize {
    let rows: Vec<Vec<BigInt>> = d
        .family(f)
        .iter()
        .map(|r| r.evaluate(n0).to_integers().expect("evaluated"))
        .collect();
    exactalg::integer_rank(&rows)
}
