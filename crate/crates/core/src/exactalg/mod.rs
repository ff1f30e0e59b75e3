//! Exact arithmetic kernel: polynomials in `n`, homology vectors, the
//! symplectic pairing, rank over `ℚ(n)` and Smith normal form over `ℤ`.

mod poly;
mod rank;
mod snf;

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use thiserror::Error;

pub use poly::IntPoly;
pub use rank::{integer_rank, rank_over_fraction_field};
pub use snf::{smith_normal_form, snf_integer, IntMatrix, SmithForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("odd vector length {0}: homology vectors have length 2g")]
    OddLength(usize),
    #[error("symbolic entry {0}: evaluate first")]
    Symbolic(String),
    #[error("malformed polynomial {0:?}")]
    PolySyntax(String),
    #[error("empty row list")]
    Empty,
}

/// `H_1(Σ_g)` with a symplectic basis; columns `1..g` pair with `g+1..2g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymplecticSpace {
    genus: usize,
}

impl SymplecticSpace {
    pub fn new(genus: usize) -> Self {
        SymplecticSpace { genus }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn dim(&self) -> usize {
        2 * self.genus
    }

    /// Basis vector `e_k`, 1-based as in the matrix columns.
    pub fn basis(&self, k: usize) -> HClass {
        assert!(k >= 1 && k <= self.dim(), "basis index {k} out of range");
        let mut v = HClass::zero(self.dim());
        v.0[k - 1] = IntPoly::one();
        v
    }

    pub fn contains(&self, v: &HClass) -> bool {
        v.len() == self.dim()
    }
}

/// A homology class, written in the symplectic basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HClass(pub Vec<IntPoly>);

impl HClass {
    pub fn zero(dim: usize) -> Self {
        HClass(vec![IntPoly::zero(); dim])
    }

    pub fn from_i64s(entries: &[i64]) -> Self {
        HClass(entries.iter().map(|&c| IntPoly::constant(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[IntPoly] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(IntPoly::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(IntPoly::is_constant)
    }

    pub fn max_degree(&self) -> usize {
        self.0.iter().filter_map(IntPoly::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &IntPoly) -> HClass {
        HClass(self.0.iter().map(|x| x * c).collect())
    }

    /// `self + c·other`
    pub fn add_scaled(&self, c: &IntPoly, other: &HClass) -> HClass {
        debug_assert_eq!(self.len(), other.len());
        HClass(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + &(c * b))
                .collect(),
        )
    }

    pub fn evaluate(&self, n0: i64) -> HClass {
        HClass(self.0.iter().map(|x| x.evaluate(n0)).collect())
    }

    /// Integer entries, or `Symbolic` if any entry depends on `n`.
    pub fn to_integers(&self) -> Result<Vec<BigInt>, AlgError> {
        self.0
            .iter()
            .map(|x| x.as_constant().ok_or_else(|| AlgError::Symbolic(x.to_string())))
            .collect()
    }

    /// The row with its sign fixed so that the first nonzero coefficient
    /// (entries in order, coefficients from degree 0 up) is positive.
    pub fn sign_canonical(&self) -> (HClass, i8) {
        let s = self
            .0
            .iter()
            .map(IntPoly::first_sign)
            .find(|&s| s != 0)
            .unwrap_or(0);
        if s < 0 {
            (-self, -1)
        } else {
            (self.clone(), 1)
        }
    }

    /// gcd of the integer entries is 1. `None` for symbolic vectors.
    pub fn is_primitive(&self) -> Option<bool> {
        use num_integer::Integer;
        use num_traits::One;
        let ints = self.to_integers().ok()?;
        let g = ints.iter().fold(BigInt::from(0), |acc, x| acc.gcd(x));
        Some(g.is_one())
    }
}

impl fmt::Debug for HClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for HClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Add<&HClass> for &HClass {
    type Output = HClass;
    fn add(self, rhs: &HClass) -> HClass {
        HClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&HClass> for &HClass {
    type Output = HClass;
    fn sub(self, rhs: &HClass) -> HClass {
        HClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &HClass {
    type Output = HClass;
    fn neg(self) -> HClass {
        HClass(self.0.iter().map(|a| -a).collect())
    }
}

/// The algebraic intersection pairing
/// `Ω(a, b) = Σ_{i=1..g} (a_{g+i}·b_i − a_i·b_{g+i})`.
///
/// With this convention `Ω(e_i, e_{g+i}) = −1`.
pub fn pairing(a: &HClass, b: &HClass) -> Result<IntPoly, AlgError> {
    if a.len() != b.len() {
        return Err(AlgError::DimensionMismatch(a.len(), b.len()));
    }
    if !a.len().is_multiple_of(2) {
        return Err(AlgError::OddLength(a.len()));
    }
    let g = a.len() / 2;
    let mut acc = IntPoly::zero();
    for i in 0..g {
        acc += &(&a.0[g + i] * &b.0[i]);
        acc -= &(&a.0[i] * &b.0[g + i]);
    }
    Ok(acc)
}

/// `None` when `n0` lies in the parameter range `n ≥ 1`, otherwise a warning.
/// Evaluation itself is exact for every integer.
pub fn domain_warning(n0: i64) -> Option<String> {
    (n0 < 1).then(|| format!("n = {n0} is outside the family's range n >= 1; values are still exact"))
}
