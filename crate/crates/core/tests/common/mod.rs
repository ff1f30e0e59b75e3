//! Test-only oracles. These deliberately share no code with the library:
//! plain machine integers where they suffice, no pruning, no clever pivoting.

#![allow(dead_code, clippy::needless_range_loop)]

pub mod gen;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use trihomo::diagram::{Family, TrisectionMatrix};

/// Integer rows of one family; panics on symbolic entries.
pub fn int_rows(d: &TrisectionMatrix, f: Family) -> Vec<Vec<i64>> {
    d.family(f)
        .iter()
        .map(|r| r.to_integers().expect("integer entries").iter().map(|x| x.to_i64().unwrap()).collect())
        .collect()
}

/// `Ω(a, b) = Σ a_{g+i} b_i − a_i b_{g+i}`
pub fn omega(a: &[i64], b: &[i64]) -> i64 {
    let g = a.len() / 2;
    (0..g).map(|i| a[g + i] * b[i] - a[i] * b[g + i]).sum()
}

pub fn permutations(g: usize) -> Vec<Vec<usize>> {
    if g == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(g - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, g - 1);
            out.push(q);
        }
    }
    out
}

fn equal_up_to_sign(x: &[i64], y: &[i64]) -> bool {
    x == y || x.iter().zip(y).all(|(a, b)| *a == -*b)
}

fn is_unit(x: i64) -> bool {
    x == 1 || x == -1
}

/// Unpruned search over every β and γ reordering and every class labeling,
/// checking the bullets literally (all `j ≠ i`).
pub fn brute_force_standard(d: &TrisectionMatrix) -> bool {
    let g = d.genus();
    let a = int_rows(d, Family::Alpha);
    let b0 = int_rows(d, Family::Beta);
    let c0 = int_rows(d, Family::Gamma);
    let perms = permutations(g);
    let labelings = 3usize.pow(g as u32);
    for pb in &perms {
        let b: Vec<&[i64]> = pb.iter().map(|&k| b0[k].as_slice()).collect();
        for pc in &perms {
            let c: Vec<&[i64]> = pc.iter().map(|&k| c0[k].as_slice()).collect();
            for lab in 0..labelings {
                let mut ok = true;
                let mut code = lab;
                for i in 0..g {
                    let class = code % 3;
                    code /= 3;
                    let fam = [a[i].as_slice(), b[i], c[i]];
                    let all: [Vec<&[i64]>; 3] = [a.iter().map(Vec::as_slice).collect(), b.clone(), c.clone()];
                    // (x, y, z) = (α, β, γ) rotated so that x is distinguished
                    let (x, y, z) = (class, (class + 1) % 3, (class + 2) % 3);
                    ok &= is_unit(omega(fam[x], fam[y])) && is_unit(omega(fam[x], fam[z]));
                    ok &= equal_up_to_sign(fam[y], fam[z]);
                    for j in (0..g).filter(|&j| j != i) {
                        ok &= omega(fam[x], all[y][j]) == 0 && omega(fam[z], all[y][j]) == 0;
                    }
                    if !ok {
                        break;
                    }
                }
                if ok {
                    return true;
                }
            }
        }
    }
    false
}

/// Row Hermite form: Bezout row operations, entries above each pivot
/// reduced modulo it.
fn hermite_rows(a: &mut [Vec<BigInt>]) {
    let r = a.len();
    let c = if r == 0 { 0 } else { a[0].len() };
    let mut top = 0;
    for col in 0..c {
        if top == r {
            break;
        }
        for i in (top + 1)..r {
            if a[i][col].is_zero() {
                continue;
            }
            let (x, y) = (a[top][col].clone(), a[i][col].clone());
            let e = x.extended_gcd(&y);
            let (xg, yg) = (&x / &e.gcd, &y / &e.gcd);
            for j in 0..c {
                let (p, q) = (a[top][j].clone(), a[i][j].clone());
                a[top][j] = &e.x * &p + &e.y * &q;
                a[i][j] = &xg * &q - &yg * &p;
            }
        }
        if a[top][col].is_zero() {
            continue;
        }
        if a[top][col].is_negative() {
            for x in a[top].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..top {
            let q = a[i][col].div_floor(&a[top][col]);
            for j in 0..c {
                let d = &q * &a[top][j];
                a[i][j] -= d;
            }
        }
        top += 1;
    }
}

fn transpose(a: &[Vec<BigInt>], c: usize) -> Vec<Vec<BigInt>> {
    (0..c).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Invariant factors, length `min(r, c)`: alternate row and column Hermite
/// forms until diagonal, then push `(a, b) → (gcd, lcm)` until the chain divides.
pub fn naive_invariant_factors(m: &[Vec<i64>]) -> Vec<BigInt> {
    let r = m.len();
    let c = if r == 0 { 0 } else { m[0].len() };
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect();
    loop {
        hermite_rows(&mut a);
        let mut t = transpose(&a, c);
        hermite_rows(&mut t);
        a = transpose(&t, r);
        let diagonal = (0..r).all(|i| (0..c).all(|j| i == j || a[i][j].is_zero()));
        if diagonal {
            break;
        }
    }
    let k = r.min(c);
    let mut d: Vec<BigInt> = (0..k).map(|i| a[i][i].abs()).collect();
    d.sort_by_key(|x| x.is_zero());
    for i in 0..k {
        for j in (i + 1)..k {
            if d[j].is_zero() {
                continue;
            }
            let (g, l) = (d[i].gcd(&d[j]), d[i].lcm(&d[j]));
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors as ratios of determinantal divisors. Small shapes only.
pub fn determinantal_invariant_factors(m: &[Vec<i64>]) -> Vec<i128> {
    let r = m.len();
    let c = if r == 0 { 0 } else { m[0].len() };
    let mut divisors = vec![1i128];
    for k in 1..=r.min(c) {
        let mut d = 0;
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let minor: Vec<Vec<i128>> =
                    rows.iter().map(|&i| cols.iter().map(|&j| m[i][j] as i128).collect()).collect();
                d = gcd(d, det(&minor));
            }
        }
        divisors.push(d);
    }
    (1..divisors.len())
        .map(|k| if divisors[k] == 0 { 0 } else { divisors[k] / divisors[k - 1] })
        .collect()
}

/// Rank by Gaussian elimination modulo a large prime.
pub fn rank_mod_p(m: &[Vec<i64>]) -> usize {
    const P: i128 = 2_305_843_009_213_693_951; // 2^61 − 1
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| (x as i128).rem_euclid(P)).collect()).collect();
    let cols = a.first().map_or(0, Vec::len);
    let pow = |mut b: i128, mut e: i128| {
        let mut acc = 1i128;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b, P);
            }
            b = mulmod(b, b, P);
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| a[i][col] != 0) else { continue };
        a.swap(rank, p);
        let inv = pow(a[rank][col], P - 2);
        for i in 0..a.len() {
            if i != rank && a[i][col] != 0 {
                let f = mulmod(a[i][col], inv, P);
                for j in 0..cols {
                    a[i][j] = (a[i][j] - mulmod(f, a[rank][j], P)).rem_euclid(P);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mulmod(a: i128, b: i128, p: i128) -> i128 {
    // a, b < 2^61 so split b to stay inside i128
    let (hi, lo) = (b >> 31, b & ((1 << 31) - 1));
    ((a * hi % p) * (1 << 31) % p + a * lo % p) % p
}
