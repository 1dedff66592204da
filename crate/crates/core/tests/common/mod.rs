//! Independent oracles shared by the integration tests. Nothing here calls
//! into the echelon code under test except where noted.

#![allow(dead_code, clippy::needless_range_loop)]

use gf_cohom::linformgb::{echelon, normal_form, LinearForm, SparseMatrix};
use gf_cohom::rational::Q;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

/// Random sparse rational matrix with at most `max_rows x max_cols` entries.
/// Some rows are combinations of earlier ones so that kernels are nontrivial
/// beyond the shape.
pub fn random_sparse(rng: &mut impl Rng, max_rows: usize, max_cols: usize) -> SparseMatrix {
    let rows = rng.gen_range(1..=max_rows);
    let cols = rng.gen_range(1..=max_cols);
    let density = rng.gen_range(0.05..0.6);
    let mut dense = vec![vec![Q::zero(); cols]; rows];
    for i in 0..rows {
        if i >= 2 && rng.gen_bool(0.25) {
            let (a, b) = (rng.gen_range(0..i), rng.gen_range(0..i));
            let (s, t) = (small_q(rng), small_q(rng));
            for j in 0..cols {
                dense[i][j] = &s * &dense[a][j] + &t * &dense[b][j];
            }
            continue;
        }
        for j in 0..cols {
            if rng.gen_bool(density) {
                dense[i][j] = small_q(rng);
            }
        }
    }
    SparseMatrix::from_dense(&dense)
}

fn small_q(rng: &mut impl Rng) -> Q {
    let n = rng.gen_range(-9i64..=9);
    let d = rng.gen_range(1i64..=5);
    Q::new(n.into(), d.into())
}

pub fn to_dense(m: &SparseMatrix) -> Vec<Vec<Q>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect()).collect()
}

/// Nullspace by dense Gauss-Jordan with the free-variable parametrization.
pub fn echelon_nullspace(m: &SparseMatrix) -> Vec<Vec<Q>> {
    let mut a = to_dense(m);
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -a[i][f].clone();
            }
            v
        })
        .collect()
}

/// Rank by fraction-free (Bareiss) elimination after clearing denominators
/// row by row.
pub fn bareiss_rank(m: &SparseMatrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = to_dense(m)
        .into_iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |l, x| num_integer::lcm(l, x.denom().clone()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].abs();
        r += 1;
    }
    r
}

/// `m * v`, dense.
pub fn apply(m: &SparseMatrix, v: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); m.rows()];
    for (j, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (i, c) in m.column(j) {
            out[*i] += c * x;
        }
    }
    out
}

pub fn form_to_dense(f: &LinearForm) -> Vec<Q> {
    let mut v = vec![Q::zero(); f.nvars()];
    for (i, c) in f.terms() {
        v[*i] = c.clone();
    }
    v
}

/// Whether `forms` (assumed to have distinct leading variables) and the
/// dense `oracle` vectors span the same space. Counts must agree and every
/// oracle vector must reduce to zero modulo `forms`.
pub fn spans_equal(nvars: usize, forms: &[LinearForm], oracle: &[Vec<Q>]) -> bool {
    if forms.len() != oracle.len() {
        return false;
    }
    let gb = echelon(nvars, forms.iter().cloned());
    if gb.len() != forms.len() {
        return false;
    }
    oracle.iter().all(|v| {
        let f = LinearForm::from_terms(nvars, v.iter().cloned().enumerate().filter(|(_, c)| !c.is_zero()));
        normal_form(&f, &gb).is_zero()
    })
}
