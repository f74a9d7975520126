//! Even non-degenerate integral lattices, the sign cocycle, short vectors,
//! and the bookkeeping on the hyperbolic plane `II_{1,1}`.

use std::path::Path;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Q;

/// A vector of `L` in coordinates of the fixed lattice basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![0; rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        LatticeVector(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        LatticeVector(self.0.iter().map(|a| k * a).collect())
    }

    pub fn to_h(&self) -> HVector {
        HVector(self.0.iter().map(|&c| Q::from(c)).collect())
    }
}

/// An element of `h = L (x) Q` in coordinates of the lattice basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct HVector(pub Vec<Q>);

impl HVector {
    pub fn zero(rank: usize) -> Self {
        HVector(vec![Q::zero(); rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn scale(&self, s: &Q) -> Self {
        HVector(self.0.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        HVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }
}

impl From<&LatticeVector> for HVector {
    fn from(v: &LatticeVector) -> Self {
        v.to_h()
    }
}

/// An even, non-degenerate integral lattice given by its Gram matrix.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Lattice {
    pub name: String,
    pub gram: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct LatticeFile {
    name: String,
    gram: Vec<Vec<i64>>,
}

impl Lattice {
    /// Validates symmetry, evenness and non-degeneracy.
    pub fn new(name: impl Into<String>, gram: Vec<Vec<i64>>) -> Result<Self> {
        let n = gram.len();
        if n == 0 {
            return Err(Error::Argument("lattice must have positive rank".into()));
        }
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Argument(format!(
                    "gram row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            for j in 0..n {
                if row[j] != gram[j][i] {
                    return Err(Error::Invariant(format!(
                        "gram matrix not symmetric at ({i},{j})"
                    )));
                }
            }
            if row[i] % 2 != 0 {
                return Err(Error::Invariant(format!(
                    "lattice is not even: gram[{i}][{i}] = {}",
                    row[i]
                )));
            }
        }
        let lat = Lattice {
            name: name.into(),
            gram,
        };
        if lat.determinant().is_zero() {
            return Err(Error::Invariant("gram matrix is degenerate".into()));
        }
        Ok(lat)
    }

    /// `"II11"`, `"E8"` or `"E8x3"`.
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "II11" => Ok(Self::ii11()),
            "E8" => Ok(Self::e8()),
            "E8x3" => Ok(Self::e8x3()),
            other => Err(Error::Argument(format!(
                "unknown built-in lattice '{other}'"
            ))),
        }
    }

    /// A built-in name or a path to a lattice JSON file.
    pub fn resolve(spec: &str) -> Result<Self> {
        match spec {
            "II11" | "E8" | "E8x3" => Self::builtin(spec),
            path => Self::from_json_file(path),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let f: LatticeFile = serde_json::from_str(s).map_err(|e| Error::Parse {
            pos: e.column(),
            msg: e.to_string(),
        })?;
        Lattice::new(f.name, f.gram)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json_str(&text)
    }

    /// The hyperbolic plane with basis `(e, f)`, `e^2 = f^2 = 0`, `(e,f) = 1`.
    pub fn ii11() -> Self {
        Lattice {
            name: "II11".into(),
            gram: vec![vec![0, 1], vec![1, 0]],
        }
    }

    /// `E8` in a basis that is triangular with respect to the standard
    /// coordinates of `R^8`:
    /// `2e_1, e_2 - e_1, ..., e_7 - e_6, (1/2)(e_1 + ... + e_8)`.
    pub fn e8() -> Self {
        let mut gram = vec![vec![0i64; 8]; 8];
        gram[0][0] = 4;
        gram[0][1] = -2;
        gram[1][0] = -2;
        for i in 1..7 {
            gram[i][i] = 2;
            if i + 1 < 7 {
                gram[i][i + 1] = -1;
                gram[i + 1][i] = -1;
            }
        }
        gram[7][7] = 2;
        gram[0][7] = 1;
        gram[7][0] = 1;
        Lattice {
            name: "E8".into(),
            gram,
        }
    }

    /// Orthogonal sum of three copies of [`Lattice::e8`].
    pub fn e8x3() -> Self {
        let e8 = Self::e8();
        let mut gram = vec![vec![0i64; 24]; 24];
        for b in 0..3 {
            for i in 0..8 {
                for j in 0..8 {
                    gram[8 * b + i][8 * b + j] = e8.gram[i][j];
                }
            }
        }
        Lattice {
            name: "E8x3".into(),
            gram,
        }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram_q(&self) -> Vec<Vec<Q>> {
        self.gram
            .iter()
            .map(|r| r.iter().map(|&c| Q::from(c)).collect())
            .collect()
    }

    pub fn determinant(&self) -> Q {
        determinant(self.gram_q())
    }

    /// Integral pairing of lattice vectors.
    pub fn dot(&self, x: &LatticeVector, y: &LatticeVector) -> i64 {
        let mut acc = 0i64;
        for (i, xi) in x.0.iter().enumerate() {
            if *xi == 0 {
                continue;
            }
            for (j, yj) in y.0.iter().enumerate() {
                acc += xi * self.gram[i][j] * yj;
            }
        }
        acc
    }

    pub fn norm(&self, x: &LatticeVector) -> i64 {
        self.dot(x, x)
    }

    /// `x^T G y` for rational vectors.
    pub fn inner(&self, x: &HVector, y: &HVector) -> Result<Q> {
        let n = self.rank();
        if x.rank() != n || y.rank() != n {
            return Err(Error::Argument(format!(
                "dimension mismatch: rank {n}, got {} and {}",
                x.rank(),
                y.rank()
            )));
        }
        let mut acc = Q::zero();
        for i in 0..n {
            if x.0[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if self.gram[i][j] != 0 && !y.0[j].is_zero() {
                    acc += &x.0[i] * &y.0[j] * Q::from(self.gram[i][j]);
                }
            }
        }
        Ok(acc)
    }

    pub fn check_vector(&self, v: &LatticeVector) -> Result<()> {
        if v.rank() != self.rank() {
            return Err(Error::Argument(format!(
                "vector has {} coordinates, lattice {} has rank {}",
                v.rank(),
                self.name,
                self.rank()
            )));
        }
        Ok(())
    }

    /// `LDL^T`-type decomposition `x^T G x = sum_i d_i (x_i + sum_{j>i} u_ij x_j)^2`.
    /// Returns `None` when a pivot vanishes.
    pub fn ldl(&self) -> Option<(Vec<Q>, Vec<Vec<Q>>)> {
        let n = self.rank();
        let g = self.gram_q();
        let mut d = vec![Q::zero(); n];
        let mut u = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            let mut di = g[i][i].clone();
            for k in 0..i {
                di -= &d[k] * &u[k][i] * &u[k][i];
            }
            if di.is_zero() {
                return None;
            }
            for j in i + 1..n {
                let mut s = g[i][j].clone();
                for k in 0..i {
                    s -= &d[k] * &u[k][i] * &u[k][j];
                }
                u[i][j] = s / &di;
            }
            u[i][i] = Q::one();
            d[i] = di;
        }
        Some((d, u))
    }

    pub fn is_positive_definite(&self) -> bool {
        match self.ldl() {
            Some((d, _)) => d.iter().all(|x| !x.is_negative() && !x.is_zero()),
            None => false,
        }
    }

    /// All vectors `v` with `(v,v) = norm`, sorted lexicographically.
    pub fn short_vectors(&self, norm: i64) -> Result<Vec<LatticeVector>> {
        let mut out = self.vectors_up_to(norm)?;
        out.retain(|v| self.norm(v) == norm);
        Ok(out)
    }

    /// All vectors with `(v,v) <= bound`, sorted lexicographically.
    pub fn vectors_up_to(&self, bound: i64) -> Result<Vec<LatticeVector>> {
        if !self.is_positive_definite() {
            return Err(Error::Unsupported(format!(
                "short-vector enumeration requires a positive-definite lattice; {} is not",
                self.name
            )));
        }
        let (d, u) = self.ldl().expect("positive definite");
        let n = self.rank();
        let mut x = vec![0i64; n];
        let mut out = Vec::new();
        fincke_pohst(&d, &u, n, &Q::from(bound), &mut x, &mut out);
        out.sort();
        Ok(out)
    }

    /// Number of vectors of each norm `0, 2, ..., 2*max_half`.
    pub fn norm_counts(&self, max_half: i64) -> Result<Vec<u64>> {
        let vs = self.vectors_up_to(2 * max_half)?;
        let mut counts = vec![0u64; max_half as usize + 1];
        for v in &vs {
            counts[(self.norm(v) / 2) as usize] += 1;
        }
        Ok(counts)
    }
}

// Enumerates coordinates from the last one down; term i of the quadratic form
// only involves x_i, ..., x_{n-1}.
fn fincke_pohst(
    d: &[Q],
    u: &[Vec<Q>],
    level: usize,
    remaining: &Q,
    x: &mut [i64],
    out: &mut Vec<LatticeVector>,
) {
    if level == 0 {
        out.push(LatticeVector(x.to_vec()));
        return;
    }
    let i = level - 1;
    let n = x.len();
    let mut c = Q::zero();
    for j in i + 1..n {
        if x[j] != 0 {
            c += &u[i][j] * Q::from(x[j]);
        }
    }
    let cost = |xi: i64| -> Q {
        let t = Q::from(xi) + &c;
        &d[i] * &t * &t
    };
    // the centre of the admissible interval is -c
    let centre = (-c.to_f64()).round() as i64;
    let mut lo = centre;
    while cost(lo - 1) <= *remaining {
        lo -= 1;
    }
    let mut hi = centre;
    while cost(hi + 1) <= *remaining {
        hi += 1;
    }
    for xi in lo..=hi {
        let k = cost(xi);
        if k <= *remaining {
            x[i] = xi;
            let rest = remaining - &k;
            fincke_pohst(d, u, i, &rest, x, out);
        }
    }
    x[i] = 0;
}

/// Determinant by fraction-free elimination over `Q`.
pub fn determinant(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut det = Q::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Q::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &pivot;
            for c in col..n {
                let sub = &f * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

/// The bimultiplicative sign cocycle with `eps(g_i, g_j) = (-1)^{(g_i, g_j)}`
/// for `i > j` and `1` otherwise.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cocycle {
    /// `basis_signs[i][j]` is `eps(g_i, g_j)`.
    pub basis_signs: Vec<Vec<i8>>,
    // parity of the exponent, as a bit matrix
    parity: Vec<Vec<bool>>,
}

impl Cocycle {
    pub fn build(lattice: &Lattice) -> Result<Self> {
        let n = lattice.rank();
        for i in 0..n {
            if lattice.gram[i][i] % 2 != 0 {
                return Err(Error::Invariant(format!(
                    "cocycle requires an even lattice; {} is odd",
                    lattice.name
                )));
            }
        }
        let parity: Vec<Vec<bool>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| i > j && lattice.gram[i][j].rem_euclid(2) == 1)
                    .collect()
            })
            .collect();
        let basis_signs = parity
            .iter()
            .map(|r| r.iter().map(|&p| if p { -1 } else { 1 }).collect())
            .collect();
        Ok(Cocycle {
            basis_signs,
            parity,
        })
    }

    /// `eps(a, b)` as `+1` or `-1`.
    pub fn eps(&self, a: &LatticeVector, b: &LatticeVector) -> i64 {
        let mut odd = false;
        for (i, ai) in a.0.iter().enumerate() {
            if ai & 1 == 0 {
                continue;
            }
            for (j, bj) in b.0.iter().enumerate() {
                if bj & 1 == 1 && self.parity[i][j] {
                    odd = !odd;
                }
            }
        }
        if odd {
            -1
        } else {
            1
        }
    }
}

/// Elements of `II_{1,1}` in the basis `(e, f)`.
pub mod ii11 {
    use super::*;

    pub fn vector(e_coeff: i64, f_coeff: i64) -> LatticeVector {
        LatticeVector(vec![e_coeff, f_coeff])
    }

    pub fn e() -> LatticeVector {
        vector(1, 0)
    }

    pub fn f() -> LatticeVector {
        vector(0, 1)
    }

    /// `(alpha, f)`, which is the `e`-coordinate of `alpha`.
    pub fn pair_f(alpha: &LatticeVector) -> i64 {
        alpha.0[0]
    }

    /// `alpha^2 / 2`
    pub fn half_norm(alpha: &LatticeVector) -> i64 {
        alpha.0[0] * alpha.0[1]
    }

    pub fn dot(a: &LatticeVector, b: &LatticeVector) -> i64 {
        a.0[0] * b.0[1] + a.0[1] * b.0[0]
    }

    pub fn require_not_f_perp(alpha: &LatticeVector, label: &str) -> Result<()> {
        if pair_f(alpha) == 0 {
            return Err(Error::Hypothesis(format!(
                "({label}, f) = 0: {label} in f-perp"
            )));
        }
        Ok(())
    }

    /// `w_alpha = f / (alpha, f)`, in `(e, f)` coordinates.
    pub fn w_vector(alpha: &LatticeVector) -> Result<HVector> {
        require_not_f_perp(alpha, "alpha")?;
        Ok(HVector(vec![Q::zero(), Q::new(1, pair_f(alpha))]))
    }

    /// `x_{alpha,beta} = (w_alpha, beta) = (beta, f) / (alpha, f)`.
    pub fn x_coeff(alpha: &LatticeVector, beta: &LatticeVector) -> Result<Q> {
        require_not_f_perp(alpha, "alpha")?;
        Ok(Q::new(pair_f(beta), pair_f(alpha)))
    }
}
