//! Dense Gaussian elimination over `Q` for the small matrices that show up
//! (Gram matrices of basis changes, graded-piece form matrices).

use num_traits::{One, Zero};

use crate::rational::Q;

/// Rank of a dense rational matrix.
pub fn rank(mut m: Vec<Vec<Q>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &pivot;
            for k in c..cols {
                if !m[r][k].is_zero() {
                    let s = &f * &m[r][k];
                    m[i][k] -= s;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Inverse of a square matrix, or `None` when singular.
pub fn inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for k in 0..2 * n {
            a[c][k] *= &inv;
        }
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for k in 0..2 * n {
                if !a[c][k].is_zero() {
                    let s = &f * &a[c][k];
                    a[i][k] -= s;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![Q::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    out[i][j] += &a[i][l] * &b[l][j];
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter()
            .map(|r| r.iter().map(|&c| Q::from(c)).collect())
            .collect()
    }

    #[test]
    fn rank_and_inverse() {
        assert_eq!(rank(q(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(q(&[&[0, 1], &[1, 0]])), 2);
        let m = q(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), q(&[&[1, 0], &[0, 1]]));
        assert!(inverse(&q(&[&[1, 1], &[1, 1]])).is_none());
    }
}
