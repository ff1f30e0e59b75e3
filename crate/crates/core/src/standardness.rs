//! Homologically standard position.
//!
//! A matrix is in standard position when, after reordering each family and
//! flipping row signs, every index `i` falls in exactly one of three classes:
//!
//! * `A`: `Ω(α_i, β_i) = Ω(α_i, γ_i) = ±1`, `Ω(α_i, β_j) = Ω(γ_i, β_j) = 0`
//!   for `j ≠ i`, and `β_i = γ_i`;
//! * `B`: the same with `(β, γ, α)` in place of `(α, β, γ)`;
//! * `C`: the same with `(γ, α, β)`.
//!
//! The checker decides this exactly by a pruned backtracking search over the
//! matching of rows into index triples.

use std::fmt;

use serde::Serialize;

use crate::diagram::{Family, TrisectionMatrix};
use crate::exactalg::pairing;
use crate::moves::Move;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Bullet {
    /// α distinguished, `β_i = γ_i`
    A,
    /// β distinguished, `γ_i = α_i`
    B,
    /// γ distinguished, `α_i = β_i`
    C,
}

impl Bullet {
    pub const ALL: [Bullet; 3] = [Bullet::A, Bullet::B, Bullet::C];

    /// The family whose curve is dual to the other two.
    pub fn distinguished(self) -> Family {
        match self {
            Bullet::A => Family::Alpha,
            Bullet::B => Family::Beta,
            Bullet::C => Family::Gamma,
        }
    }
}

impl fmt::Display for Bullet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// How the "for `j ≠ i`" clauses quantify over `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reading {
    /// `j` ranges over every other index; the index set is partitioned
    /// among the three classes.
    #[default]
    AllIndices,
    /// `j` ranges only over other indices of the same class.
    SameClass,
}

/// Witness for standard position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StandardAssignment {
    pub class_of: Vec<Bullet>,
    /// `perms[f][i]` is the original 1-based row of family `f` placed at index `i + 1`.
    pub perms: [Vec<usize>; 3],
    /// Sign applied to the row placed at each index.
    pub signs: [Vec<i8>; 3],
}

impl StandardAssignment {
    /// Permute and Negate moves realizing the assignment.
    pub fn to_moves(&self) -> Vec<Move> {
        let mut out = Vec::new();
        for f in Family::ALL {
            let perm = &self.perms[f.index()];
            if perm.iter().enumerate().any(|(i, &p)| p != i + 1) {
                out.push(Move::Permute { family: f, perm: perm.clone() });
            }
            for (i, &s) in self.signs[f.index()].iter().enumerate() {
                if s < 0 {
                    out.push(Move::Negate { family: f, index: i + 1 });
                }
            }
        }
        out
    }

    /// The reordered, sign-corrected matrix in which the bullets hold literally.
    pub fn arrange(&self, d: &TrisectionMatrix) -> TrisectionMatrix {
        crate::moves::compose_apply(d, &self.to_moves()).expect("assignment moves are well-formed")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PairVal {
    Zero,
    Unit,
    Other,
}

/// Pairing and equality data of the `3g` rows, indexed `family * g + i`.
pub(crate) struct Profile {
    g: usize,
    omega: Vec<PairVal>,
    omega_size: Vec<u64>,
    same: Vec<i8>,
    row_size: Vec<u64>,
}

impl Profile {
    pub(crate) fn from_matrix(d: &TrisectionMatrix) -> Profile {
        let g = d.genus();
        let rows: Vec<_> = d.rows().collect();
        let n = rows.len();
        let mut p = Profile::empty(g);
        for a in 0..n {
            p.row_size[a] = rows[a].entries().iter().map(|x| x.size()).fold(0, u64::saturating_add);
            for b in 0..n {
                let w = pairing(rows[a], rows[b]).expect("same space");
                p.omega[a * n + b] = if w.is_zero() {
                    PairVal::Zero
                } else if w.unit_sign().is_some() {
                    PairVal::Unit
                } else {
                    PairVal::Other
                };
                p.omega_size[a * n + b] = w.size();
                p.same[a * n + b] = if rows[a] == rows[b] {
                    1
                } else if *rows[a] == -rows[b] {
                    -1
                } else {
                    0
                };
            }
        }
        p
    }

    /// Rows as flat integer slices of length `2g`, in α, β, γ order.
    pub(crate) fn from_int_rows(g: usize, rows: &[i64]) -> Profile {
        let dim = 2 * g;
        let n = 3 * g;
        let mut p = Profile::empty(g);
        let row = |a: usize| &rows[a * dim..(a + 1) * dim];
        for a in 0..n {
            p.row_size[a] = row(a).iter().map(|x| x.unsigned_abs()).fold(0, u64::saturating_add);
            for b in 0..n {
                let (x, y) = (row(a), row(b));
                let mut w: i128 = 0;
                for i in 0..g {
                    w += x[g + i] as i128 * y[i] as i128 - x[i] as i128 * y[g + i] as i128;
                }
                p.omega[a * n + b] = match w {
                    0 => PairVal::Zero,
                    1 | -1 => PairVal::Unit,
                    _ => PairVal::Other,
                };
                p.omega_size[a * n + b] = u64::try_from(w.unsigned_abs()).unwrap_or(u64::MAX);
                p.same[a * n + b] = if x == y {
                    1
                } else if x.iter().zip(y).all(|(s, t)| *s == -*t) {
                    -1
                } else {
                    0
                };
            }
        }
        p
    }

    fn empty(g: usize) -> Profile {
        let n = 3 * g;
        Profile {
            g,
            omega: vec![PairVal::Zero; n * n],
            omega_size: vec![0; n * n],
            same: vec![0; n * n],
            row_size: vec![0; n],
        }
    }

    fn idx(&self, f: Family, i: usize) -> usize {
        f.index() * self.g + i
    }

    fn om(&self, f: Family, i: usize, h: Family, j: usize) -> PairVal {
        let n = 3 * self.g;
        self.omega[self.idx(f, i) * n + self.idx(h, j)]
    }

    fn same(&self, f: Family, i: usize, h: Family, j: usize) -> i8 {
        let n = 3 * self.g;
        self.same[self.idx(f, i) * n + self.idx(h, j)]
    }

    /// Local conditions for one triple `(a, b, c)` of α, β, γ rows.
    fn local_ok(&self, t: [usize; 3], class: Bullet) -> bool {
        let d = class.distinguished();
        let (e, f) = (d.next(), d.next().next());
        let (td, te, tf) = (t[d.index()], t[e.index()], t[f.index()]);
        self.om(d, td, e, te) == PairVal::Unit
            && self.om(d, td, f, tf) == PairVal::Unit
            && self.same(e, te, f, tf) != 0
    }

    /// Conditions of triple `t` (class `class`) against another index's rows `u`.
    fn cross_ok(&self, t: [usize; 3], class: Bullet, u: [usize; 3]) -> bool {
        let d = class.distinguished();
        let (e, f) = (d.next(), d.next().next());
        // Ω(d_i, e_j) = Ω(f_i, e_j) = 0
        self.om(d, t[d.index()], e, u[e.index()]) == PairVal::Zero
            && self.om(f, t[f.index()], e, u[e.index()]) == PairVal::Zero
    }

    pub(crate) fn find_witness(&self, reading: Reading) -> Option<StandardAssignment> {
        let mut chosen: Vec<([usize; 3], Bullet)> = Vec::with_capacity(self.g);
        if self.backtrack(&mut chosen, 0, 0, reading) {
            Some(self.assignment(&chosen))
        } else {
            None
        }
    }

    fn backtrack(
        &self,
        chosen: &mut Vec<([usize; 3], Bullet)>,
        used_b: u64,
        used_c: u64,
        reading: Reading,
    ) -> bool {
        let a = chosen.len();
        if a == self.g {
            return true;
        }
        for b in (0..self.g).filter(|b| used_b & (1 << b) == 0) {
            for c in (0..self.g).filter(|c| used_c & (1 << c) == 0) {
                let t = [a, b, c];
                for class in Bullet::ALL {
                    if !self.local_ok(t, class) {
                        continue;
                    }
                    let compatible = chosen.iter().all(|&(u, uc)| {
                        let check = reading == Reading::AllIndices || uc == class;
                        !check || (self.cross_ok(t, class, u) && self.cross_ok(u, uc, t))
                    });
                    if !compatible {
                        continue;
                    }
                    chosen.push((t, class));
                    if self.backtrack(chosen, used_b | (1 << b), used_c | (1 << c), reading) {
                        return true;
                    }
                    chosen.pop();
                }
            }
        }
        false
    }

    fn assignment(&self, chosen: &[([usize; 3], Bullet)]) -> StandardAssignment {
        let mut perms: [Vec<usize>; 3] = Default::default();
        let mut signs: [Vec<i8>; 3] = Default::default();
        let mut class_of = Vec::with_capacity(self.g);
        for &(t, class) in chosen {
            class_of.push(class);
            let d = class.distinguished();
            let (e, f) = (d.next(), d.next().next());
            // make row f equal to row e
            let s = self.same(e, t[e.index()], f, t[f.index()]);
            for fam in Family::ALL {
                perms[fam.index()].push(t[fam.index()] + 1);
                signs[fam.index()].push(if fam == f { s } else { 1 });
            }
        }
        StandardAssignment { class_of, perms, signs }
    }

    /// 0 iff a witness exists; otherwise a positive score that shrinks as
    /// the pairing pattern and entry sizes approach a standard diagram.
    pub(crate) fn defect(&self) -> u64 {
        if self.find_witness(Reading::AllIndices).is_some() {
            return 0;
        }
        let g = self.g;
        let n = 3 * g;
        let mut gram = 0u64;
        let mut equal_pairs = 0u64;
        let mut isotropy = 0u64;
        for a in 0..n {
            for b in (a + 1)..n {
                let k = a * n + b;
                if a / g.max(1) == b / g.max(1) {
                    if self.omega[k] != PairVal::Zero {
                        isotropy += 1;
                    }
                } else {
                    gram = gram.saturating_add(self.omega_size[k]);
                    if self.same[k] != 0 {
                        equal_pairs += 1;
                    }
                }
            }
        }
        let gram_excess = gram.abs_diff(2 * g as u64);
        let equality_deficit = (g as u64).saturating_sub(equal_pairs);
        let entry_excess = self
            .row_size
            .iter()
            .map(|s| s.saturating_sub(1))
            .fold(0u64, u64::saturating_add);
        1u64.saturating_add(gram_excess)
            .saturating_add(2 * equality_deficit)
            .saturating_add(entry_excess)
            .saturating_add(4 * isotropy)
    }
}

/// A witness for standard position, or `None`.
pub fn is_standard_position(d: &TrisectionMatrix) -> Option<StandardAssignment> {
    is_standard_position_with(d, Reading::AllIndices)
}

pub fn is_standard_position_with(d: &TrisectionMatrix, reading: Reading) -> Option<StandardAssignment> {
    Profile::from_matrix(d).find_witness(reading)
}

/// Search heuristic: 0 exactly when [`is_standard_position`] succeeds.
pub fn standardness_defect(d: &TrisectionMatrix) -> u64 {
    Profile::from_matrix(d).defect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::TrisectionMatrix;

    #[test]
    fn genus_one_class_c() {
        let d = TrisectionMatrix::from_i64_rows(1, &[&[1, 0]], &[&[1, 0]], &[&[0, 1]]).unwrap();
        let w = is_standard_position(&d).unwrap();
        assert_eq!(w.class_of, vec![Bullet::C]);
        assert_eq!(standardness_defect(&d), 0);
    }

    #[test]
    fn signs_fix_equalities() {
        let d = TrisectionMatrix::from_i64_rows(1, &[&[1, 0]], &[&[-1, 0]], &[&[0, 1]]).unwrap();
        let w = is_standard_position(&d).unwrap();
        assert_eq!(w.signs[Family::Beta.index()], vec![-1]);
        let arranged = w.arrange(&d);
        assert_eq!(arranged.alpha(), arranged.beta());
    }

    #[test]
    fn non_standard_genus_one() {
        // α = β = γ: no dual curve anywhere
        let d = TrisectionMatrix::from_i64_rows(1, &[&[1, 0]], &[&[1, 0]], &[&[1, 0]]).unwrap();
        assert!(is_standard_position(&d).is_none());
        assert!(standardness_defect(&d) > 0);
    }

    #[test]
    fn genus_zero_is_vacuous() {
        let d = TrisectionMatrix::from_i64_rows(0, &[], &[], &[]).unwrap();
        assert!(is_standard_position(&d).is_some());
        assert_eq!(standardness_defect(&d), 0);
    }

    #[test]
    fn readings_differ_on_cross_class_pairings() {
        // index 1 is class A, index 2 class B; α_1 pairs with β_2, which only
        // the all-indices reading forbids.
        let d = TrisectionMatrix::from_i64_rows(
            2,
            &[&[1, 0, 0, 0], &[0, 1, 0, 0]],
            &[&[0, 0, 1, 0], &[0, 0, 1, 1]],
            &[&[0, 0, 1, 0], &[0, 1, 0, 0]],
        )
        .unwrap();
        let alt = is_standard_position_with(&d, Reading::SameClass);
        assert!(alt.is_some());
        assert!(is_standard_position(&d).is_none());
    }

    #[test]
    fn int_profile_agrees_with_poly_profile() {
        let d = TrisectionMatrix::from_i64_rows(
            2,
            &[&[1, 0, 0, 0], &[0, 1, 0, 0]],
            &[&[0, 0, 1, 0], &[0, 0, 1, 1]],
            &[&[0, 0, 1, 0], &[0, 1, 0, 0]],
        )
        .unwrap();
        let flat: Vec<i64> = d
            .rows()
            .flat_map(|r| r.to_integers().unwrap())
            .map(|x| i64::try_from(x).unwrap())
            .collect();
        assert_eq!(Profile::from_int_rows(2, &flat).defect(), Profile::from_matrix(&d).defect());
    }
}
