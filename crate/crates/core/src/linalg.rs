//! Small exact dense linear algebra over rationals.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::rational::Rational;

/// Brings `m` to reduced row echelon form in place and returns the pivot
/// column of each nonzero row.
pub(crate) fn rref(m: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for (x, y) in other.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// A nonzero `c` with `Σ_k c_k · columns[k] = 0`, if the columns are
/// linearly dependent.
pub(crate) fn null_vector(columns: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let k = columns.len();
    if k == 0 {
        return None;
    }
    let r = columns[0].len();
    let mut m: Vec<Vec<Rational>> = (0..r)
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect();
    let pivots = rref(&mut m, k);
    let free = (0..k).find(|c| !pivots.contains(c))?;
    let mut v = vec![Rational::zero(); k];
    v[free] = Rational::from_integer(1.into());
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = -m[row][free].clone();
    }
    Some(v)
}

/// Some solution of `a·x = b`, or `None` if the system is inconsistent.
pub(crate) fn solve_any(a: &[Vec<Rational>], b: &[Rational], cols: usize) -> Option<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m, cols + 1);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = m[row][cols].clone();
    }
    Some(x)
}

/// Carathéodory reduction: returns weights with the same weighted column
/// sum whose positive entries index linearly independent columns. The
/// support of the result is a subset of the input support.
pub(crate) fn caratheodory(columns: &[Vec<Rational>], weights: &[Rational]) -> Vec<Rational> {
    let mut w: Vec<Rational> = weights.to_vec();
    let mut active: Vec<usize> = Vec::new();
    for k in 0..columns.len() {
        if !w[k].is_positive() {
            continue;
        }
        active.push(k);
        let cols: Vec<Vec<Rational>> = active.iter().map(|&a| columns[a].clone()).collect();
        let Some(mut c) = null_vector(&cols) else {
            continue;
        };
        if !c.iter().any(Signed::is_positive) {
            for x in c.iter_mut() {
                *x = -x.clone();
            }
        }
        let mut best: Option<(Rational, usize)> = None;
        for (pos, ck) in c.iter().enumerate() {
            if ck.is_positive() {
                let ratio = &w[active[pos]] / ck;
                if best.as_ref().is_none_or(|(b, _)| ratio < *b) {
                    best = Some((ratio, pos));
                }
            }
        }
        let (theta, leave) = best.expect("a positive coefficient exists");
        for (pos, ck) in c.iter().enumerate() {
            if !ck.is_zero() {
                let idx = active[pos];
                w[idx] -= &theta * ck;
            }
        }
        w[active[leave]] = Rational::zero();
        active.retain(|&a| w[a].is_positive());
    }
    w
}
