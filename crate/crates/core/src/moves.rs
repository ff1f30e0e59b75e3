//! The homological move calculus.
//!
//! Row indices in moves are 1-based, matching the `α_i` notation and the
//! certificate text format.

use std::fmt;

use thiserror::Error;

use crate::diagram::{Family, TrisectionMatrix};
use crate::exactalg::{pairing, HClass, IntPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("slide of {family}_{index} over itself")]
    SelfSlide { family: Family, index: usize },
    #[error("index {index} out of range 1..={genus}")]
    IndexOutOfRange { index: usize, genus: usize },
    #[error("{0:?} is not a permutation of 1..={1}")]
    BadPermutation(Vec<usize>, usize),
    #[error("twist vector has length {found}, expected {expected}")]
    TwistLength { expected: usize, found: usize },
    #[error("twist vector is zero")]
    ZeroTwist,
    #[error("twist vector {0} has symbolic entries")]
    SymbolicTwist(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("move {index} ({mv}): {source}")]
pub struct ComposeError {
    /// 0-based position in the move list
    pub index: usize,
    pub mv: Move,
    pub source: MoveError,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Move {
    /// `r_target ← r_target + m · r_source` within one family.
    Slide { family: Family, target: usize, source: usize, m: IntPoly },
    /// Every row `x` of every family becomes `x + k·Ω(x, v)·v`.
    Twist { v: HClass, k: IntPoly },
    /// `r_index ← −r_index`
    Negate { family: Family, index: usize },
    /// New row `i` is old row `perm[i]`.
    Permute { family: Family, perm: Vec<usize> },
}

impl Move {
    pub fn slide(family: Family, target: usize, source: usize, m: impl Into<IntPoly>) -> Move {
        Move::Slide { family, target, source, m: m.into() }
    }

    pub fn twist(v: HClass, k: impl Into<IntPoly>) -> Move {
        Move::Twist { v, k: k.into() }
    }

    /// Shape checks against a genus. `Ok` carries non-fatal warnings.
    pub fn check(&self, genus: usize) -> Result<Vec<String>, MoveError> {
        let in_range = |index: usize| {
            if index == 0 || index > genus {
                Err(MoveError::IndexOutOfRange { index, genus })
            } else {
                Ok(())
            }
        };
        let mut warnings = Vec::new();
        match self {
            Move::Slide { family, target, source, .. } => {
                in_range(*target)?;
                in_range(*source)?;
                if target == source {
                    return Err(MoveError::SelfSlide { family: *family, index: *target });
                }
            }
            Move::Twist { v, .. } => {
                if v.len() != 2 * genus {
                    return Err(MoveError::TwistLength { expected: 2 * genus, found: v.len() });
                }
                if !v.is_constant() {
                    return Err(MoveError::SymbolicTwist(v.to_string()));
                }
                if v.is_zero() {
                    return Err(MoveError::ZeroTwist);
                }
                if v.is_primitive() == Some(false) {
                    warnings.push(format!("twist vector {v} is not primitive"));
                }
            }
            Move::Negate { index, .. } => in_range(*index)?,
            Move::Permute { perm, .. } => {
                let mut seen = vec![false; genus + 1];
                let ok = perm.len() == genus
                    && perm.iter().all(|&p| {
                        (1..=genus).contains(&p) && !std::mem::replace(&mut seen[p], true)
                    });
                if !ok {
                    return Err(MoveError::BadPermutation(perm.clone(), genus));
                }
            }
        }
        Ok(warnings)
    }

    pub fn inverse(&self) -> Move {
        match self {
            Move::Slide { family, target, source, m } => {
                Move::Slide { family: *family, target: *target, source: *source, m: -m }
            }
            Move::Twist { v, k } => Move::Twist { v: v.clone(), k: -k },
            Move::Negate { .. } => self.clone(),
            Move::Permute { family, perm } => {
                let mut inv = vec![0; perm.len()];
                for (i, &p) in perm.iter().enumerate() {
                    inv[p - 1] = i + 1;
                }
                Move::Permute { family: *family, perm: inv }
            }
        }
    }

    /// Substitutes `n ← n0` in the move's coefficients.
    pub fn evaluate(&self, n0: i64) -> Move {
        match self {
            Move::Slide { family, target, source, m } => {
                Move::Slide { family: *family, target: *target, source: *source, m: m.evaluate(n0) }
            }
            Move::Twist { v, k } => Move::Twist { v: v.evaluate(n0), k: k.evaluate(n0) },
            _ => self.clone(),
        }
    }

    pub fn is_symbolic(&self) -> bool {
        match self {
            Move::Slide { m, .. } => !m.is_constant(),
            Move::Twist { v, k } => !k.is_constant() || !v.is_constant(),
            _ => false,
        }
    }
}

impl fmt::Display for Move {
    /// The certificate line for this move.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Slide { family, target, source, m } => {
                write!(f, "slide f={family} i={target} j={source} m={m}")
            }
            Move::Twist { v, k } => {
                let entries: Vec<String> = v.entries().iter().map(|x| x.to_string()).collect();
                write!(f, "twist v=[{}] k={k}", entries.join(","))
            }
            Move::Negate { family, index } => write!(f, "negate f={family} i={index}"),
            Move::Permute { family, perm } => {
                let p: Vec<String> = perm.iter().map(|x| x.to_string()).collect();
                write!(f, "permute f={family} p=[{}]", p.join(","))
            }
        }
    }
}

/// `x + k·Ω(x, v)·v`
pub fn transvect(x: &HClass, v: &HClass, k: &IntPoly) -> HClass {
    let c = pairing(x, v).expect("same dimension") * k;
    if c.is_zero() {
        return x.clone();
    }
    x.add_scaled(&c, v)
}

/// Applies one move, returning a new matrix.
pub fn apply(d: &TrisectionMatrix, mv: &Move) -> Result<TrisectionMatrix, MoveError> {
    mv.check(d.genus())?;
    let mut out = d.clone();
    match mv {
        Move::Slide { family, target, source, m } => {
            let rows = &mut out.families_mut()[family.index()];
            rows[target - 1] = rows[target - 1].add_scaled(m, &rows[source - 1]);
        }
        Move::Twist { v, k } => {
            out = d.map_rows(|x| transvect(x, v, k));
        }
        Move::Negate { family, index } => {
            let rows = &mut out.families_mut()[family.index()];
            rows[index - 1] = -&rows[index - 1];
        }
        Move::Permute { family, perm } => {
            let old = d.family(*family);
            out.families_mut()[family.index()] = perm.iter().map(|&p| old[p - 1].clone()).collect();
        }
    }
    Ok(out)
}

/// Left-to-right fold of [`apply`]; the first failing move aborts.
pub fn compose_apply(d: &TrisectionMatrix, moves: &[Move]) -> Result<TrisectionMatrix, ComposeError> {
    let mut cur = d.clone();
    for (index, mv) in moves.iter().enumerate() {
        cur = apply(&cur, mv).map_err(|source| ComposeError { index, mv: mv.clone(), source })?;
    }
    Ok(cur)
}

/// Inverse sequence: reversed, each move inverted.
pub fn inverse_sequence(moves: &[Move]) -> Vec<Move> {
    moves.iter().rev().map(Move::inverse).collect()
}
