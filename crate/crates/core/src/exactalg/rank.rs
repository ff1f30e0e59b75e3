use num_bigint::BigInt;

use super::{AlgError, HClass, IntPoly};

/// Rank of the row span over `ℚ(n)`.
///
/// Fraction-free (Bareiss) elimination with full pivoting; every division
/// is exact in `ℤ[n]`, so entries stay polynomial.
pub fn rank_over_fraction_field(rows: &[HClass]) -> Result<usize, AlgError> {
    let first = rows.first().ok_or(AlgError::Empty)?;
    let cols = first.len();
    if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
        return Err(AlgError::DimensionMismatch(cols, bad.len()));
    }
    let m: Vec<Vec<IntPoly>> = rows.iter().map(|r| r.0.clone()).collect();
    Ok(bareiss_rank(m))
}

/// Rank over `ℚ` of an integer matrix given as rows.
pub fn integer_rank(rows: &[Vec<BigInt>]) -> usize {
    let m = rows
        .iter()
        .map(|r| r.iter().cloned().map(IntPoly::constant).collect())
        .collect();
    bareiss_rank(m)
}

fn bareiss_rank(mut m: Vec<Vec<IntPoly>>) -> usize {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev = IntPoly::one();
    let mut rank = 0;
    while rank < nrows && rank < ncols {
        let pivot = (rank..nrows)
            .flat_map(|i| (rank..ncols).map(move |j| (i, j)))
            .find(|&(i, j)| !m[i][j].is_zero());
        let Some((pi, pj)) = pivot else { break };
        m.swap(rank, pi);
        for row in m.iter_mut() {
            row.swap(rank, pj);
        }
        let k = rank;
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            for j in (k + 1)..ncols {
                let num = &(&pivot_row[k] * &row[j]) - &(&row[k] * &pivot_row[j]);
                row[j] = num
                    .div_exact(&prev)
                    .expect("Bareiss step divides exactly");
            }
            row[k] = IntPoly::zero();
        }
        prev = m[k][k].clone();
        rank += 1;
    }
    rank
}
