//! Combinatorial coefficient families used by the bracket formula.
//!
//! * [`poly_p`]: the polynomials `p^k_j` appearing in commutators of
//!   `D_alpha(n)` with powers of `E_alpha`,
//! * [`compositions`] / [`b_poly`]: ordered compositions of an integer and
//!   their counting polynomials,
//! * [`proj_coeffs`]: coefficients of the truncated projector
//!   `(1/n!) * prod_{i=1..n} (X + i)`.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{factorial, Q};

/// A polynomial in one formal variable `T` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct IntPolynomial {
    coeffs: Vec<Q>,
}

impl IntPolynomial {
    pub fn from_coeffs(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Q) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * T^k`
    pub fn monomial(c: Q, k: usize) -> Self {
        let mut coeffs = vec![Q::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &Q) -> Q {
        // Horner
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    /// Multiplication by `T`.
    pub fn shift(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Q::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        IntPolynomial { coeffs }
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", c)?,
                1 if c.is_one() => write!(f, "T")?,
                1 => write!(f, "{}*T", c)?,
                _ if c.is_one() => write!(f, "T^{}", k)?,
                _ => write!(f, "{}*T^{}", c, k)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The polynomial `p^k_j`.
///
/// `p^k_0 = T^k`, `p^k_{k-1} = kT`, `p^k_k = 1` and otherwise
/// `p^k_j = T p^{k-1}_j + p^{k-1}_{j-1}`.
pub fn poly_p(k: usize, j: usize) -> Result<IntPolynomial> {
    if j > k {
        return Err(Error::Argument(format!(
            "p^{k}_{j}: index j must satisfy 0 <= j <= k"
        )));
    }
    Ok(poly_p_table(k).swap_remove(j))
}

/// All of `p^k_0, ..., p^k_k`.
pub fn poly_p_table(k: usize) -> Vec<IntPolynomial> {
    let mut row = vec![IntPolynomial::constant(Q::one())];
    for kk in 1..=k {
        let mut next = Vec::with_capacity(kk + 1);
        for j in 0..=kk {
            let p = if j == kk {
                IntPolynomial::constant(Q::one())
            } else if j + 1 == kk {
                IntPolynomial::monomial(Q::from(kk), 1)
            } else if j == 0 {
                IntPolynomial::monomial(Q::one(), kk)
            } else {
                row[j].shift().add(&row[j - 1])
            };
            next.push(p);
        }
        row = next;
    }
    row
}

/// An ordered tuple of positive integers; the empty tuple is allowed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Composition(pub Vec<u32>);

impl Composition {
    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&p| p as u64).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// The set of compositions of `n` into exactly `m` positive parts, in
/// lexicographic order.
pub fn compositions(n: i64, m: usize) -> Vec<Composition> {
    let mut out = Vec::new();
    if n < 0 || (m == 0 && n != 0) || (m as i64) > n && m > 0 {
        return out;
    }
    let mut cur = Vec::with_capacity(m);
    fn rec(rest: i64, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Composition>) {
        if slots == 0 {
            if rest == 0 {
                out.push(Composition(cur.clone()));
            }
            return;
        }
        // leave at least one for each remaining slot
        let max_first = rest - (slots as i64 - 1);
        for first in 1..=max_first {
            cur.push(first as u32);
            rec(rest - first, slots - 1, cur, out);
            cur.pop();
        }
    }
    rec(n, m, &mut cur, &mut out);
    out
}

/// All compositions of `n` (any number of parts), grouped by length.
pub fn all_compositions(n: i64) -> Vec<Composition> {
    if n < 0 {
        return Vec::new();
    }
    (0..=n as usize).flat_map(|m| compositions(n, m)).collect()
}

/// `b_n = sum_m |B^m(n)| T^m`.
pub fn b_poly(n: u64) -> IntPolynomial {
    // |B^m(n)| = C(n-1, m-1) for n >= 1; b_0 = 1
    if n == 0 {
        return IntPolynomial::constant(Q::one());
    }
    let mut coeffs = vec![Q::zero(); n as usize + 1];
    let mut c = Q::one();
    for m in 1..=n {
        coeffs[m as usize] = c.clone();
        // C(n-1, m) = C(n-1, m-1) * (n-m) / m
        c = c * Q::from((n - m) as i64) / Q::from(m as i64);
    }
    IntPolynomial::from_coeffs(coeffs)
}

/// Coefficients `S_{0,n}, ..., S_{n,n}` of `(1/n!) prod_{i=1}^n (X + i)`.
pub fn proj_coeffs(n: u64) -> Vec<Q> {
    let mut poly = IntPolynomial::constant(Q::one());
    for i in 1..=n as i64 {
        poly = poly.mul(&IntPolynomial::from_coeffs(vec![Q::from(i), Q::one()]));
    }
    let scale = factorial(n).recip();
    (0..=n as usize).map(|i| poly.coeff(i) * &scale).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t_poly(coeffs: &[i64]) -> IntPolynomial {
        IntPolynomial::from_coeffs(coeffs.iter().map(|&c| Q::from(c)).collect())
    }

    #[test]
    fn p_small_cases() {
        assert_eq!(poly_p(1, 0).unwrap(), t_poly(&[0, 1]));
        assert_eq!(poly_p(3, 2).unwrap(), t_poly(&[0, 3]));
        assert_eq!(poly_p(2, 0).unwrap(), t_poly(&[0, 0, 1]));
        assert_eq!(poly_p(5, 5).unwrap(), t_poly(&[1]));
        assert!(poly_p(2, 3).is_err());
    }

    #[test]
    fn p_degrees() {
        for k in 0..9 {
            for (j, p) in poly_p_table(k).iter().enumerate() {
                assert_eq!(p.degree(), Some(k - j), "p^{k}_{j}");
            }
        }
    }

    #[test]
    fn compositions_examples() {
        assert_eq!(
            compositions(3, 2),
            vec![Composition(vec![1, 2]), Composition(vec![2, 1])]
        );
        assert_eq!(compositions(0, 0), vec![Composition(vec![])]);
        assert!(compositions(2, 3).is_empty());
        assert!(compositions(1, 0).is_empty());
        assert!(compositions(-1, 1).is_empty());
    }

    #[test]
    fn b_examples() {
        assert_eq!(b_poly(0), t_poly(&[1]));
        assert_eq!(b_poly(2), t_poly(&[0, 1, 1]));
        assert_eq!(b_poly(3), t_poly(&[0, 1, 2, 1]));
    }

    #[test]
    fn b_counts_compositions() {
        for n in 0..=10i64 {
            let b = b_poly(n as u64);
            for m in 0..=n as usize {
                assert_eq!(b.coeff(m), Q::from(compositions(n, m).len()));
            }
            let total = all_compositions(n).len() as i64;
            assert_eq!(b.eval(&Q::one()), Q::from(total));
            if n >= 1 {
                assert_eq!(total, 1 << (n - 1));
            }
        }
    }

    #[test]
    fn proj_coeff_examples() {
        assert_eq!(proj_coeffs(0), vec![Q::one()]);
        assert_eq!(proj_coeffs(1), vec![Q::one(), Q::one()]);
        assert_eq!(proj_coeffs(2), vec![Q::one(), Q::new(3, 2), Q::new(1, 2)]);
    }

    #[test]
    fn proj_coeffs_kill_negative_eigenvalues() {
        for n in 0..=8u64 {
            let s = IntPolynomial::from_coeffs(proj_coeffs(n));
            assert_eq!(s.eval(&Q::zero()), Q::one());
            for j in 1..=n as i64 {
                assert!(s.eval(&Q::from(-j)).is_zero());
            }
        }
    }
}
