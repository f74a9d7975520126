//! The Fock-space model of a lattice vertex algebra `V_L`.
//!
//! States are spanned by `b_{i1}(-n1) ... b_{ik}(-nk) e^alpha` where the
//! `b_i` form an internal basis of `h = L (x) Q`. When the Gram matrix admits
//! an `LDL^T` decomposition the internal basis is orthogonal (and orthonormal
//! wherever the pivots are rational squares); otherwise, e.g. for `II_{1,1}`,
//! it is the lattice basis itself. Keeping `h` orthogonal makes contractions
//! and the Virasoro operators sparse.

mod parse;
mod state;

use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::lattice::{Cocycle, HVector, Lattice, LatticeVector};
use crate::linalg;
use crate::lincomb::LinComb;
use crate::rational::{binomial, Q};

pub use parse::parse_element;
pub use state::{format_element, merge_words, FockBasisState, FockElement, Letter, Word};
use state::{insert_letter, mode_range};

/// Creation polynomial: a linear combination of words acting on momentum states.
pub type WordPoly = LinComb<Word>;

/// An element of `h` in internal coordinates, with its pairings precomputed.
#[derive(Clone, Debug)]
pub struct InternalVec {
    /// `h = sum_k coords[k] b_k`, sparse
    pub coords: Vec<(u16, Q)>,
    /// `(h, b_l)` for every internal direction `l`
    pub pairing: Vec<Q>,
    /// `(h, g_i)` for every lattice basis vector `g_i`
    pub lattice_pairing: Vec<Q>,
}

#[derive(Debug)]
struct MomentumData {
    iv: InternalVec,
    half_norm: i64,
}

type ModeKey = (FockBasisState, i64, FockBasisState);

// Memo tables are cleared once they reach this many entries.
const CACHE_CAP: usize = 400_000;

/// A lattice vertex algebra with a fixed cocycle and internal basis of `h`.
pub struct LatticeVoa {
    lattice: Lattice,
    cocycle: Cocycle,
    rank: usize,
    orthogonal: bool,
    // to_internal[i][k]: coefficient of b_k in the lattice basis vector g_i
    to_internal: Vec<Vec<Q>>,
    gram_internal: Vec<Vec<Q>>,
    gram_rows: Vec<Vec<(u16, Q)>>,
    dual_rows: Vec<Vec<(u16, Q)>>,
    directions: Vec<InternalVec>,
    momenta: Mutex<FxHashMap<LatticeVector, Arc<MomentumData>>>,
    schur: Mutex<FxHashMap<LatticeVector, Arc<Vec<WordPoly>>>>,
    modes: Mutex<FxHashMap<ModeKey, Arc<FockElement>>>,
}

impl std::fmt::Debug for LatticeVoa {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LatticeVoa")
            .field("lattice", &self.lattice.name)
            .field("orthogonal", &self.orthogonal)
            .finish()
    }
}

fn rational_sqrt(q: &Q) -> Option<Q> {
    if q.is_negative() {
        return rational_sqrt(&-q.clone());
    }
    let (n, d): (BigInt, BigInt) = (q.numer(), q.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    if &rn * &rn == n && &rd * &rd == d {
        Some(Q::from(rn) / Q::from(rd))
    } else {
        None
    }
}

impl LatticeVoa {
    pub fn new(lattice: Lattice) -> Result<Self> {
        let cocycle = Cocycle::build(&lattice)?;
        let n = lattice.rank();
        let gram = lattice.gram_q();
        let (orthogonal, to_internal, gram_internal) = match lattice.ldl() {
            Some((d, u)) => {
                let mut m = vec![vec![Q::zero(); n]; n];
                let mut b = vec![vec![Q::zero(); n]; n];
                for k in 0..n {
                    let s = rational_sqrt(&d[k]).unwrap_or_else(Q::one);
                    b[k][k] = &d[k] / (&s * &s);
                    for i in k..n {
                        m[i][k] = &u[k][i] * &s;
                    }
                }
                (true, m, b)
            }
            None => {
                let id = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| if i == j { Q::one() } else { Q::zero() })
                            .collect()
                    })
                    .collect();
                (false, id, gram.clone())
            }
        };
        let inv = linalg::inverse(&gram_internal)
            .ok_or_else(|| Error::Invariant("internal Gram matrix is singular".into()))?;
        let sparse = |m: &Vec<Vec<Q>>| -> Vec<Vec<(u16, Q)>> {
            m.iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(j, c)| (j as u16, c.clone()))
                        .collect()
                })
                .collect()
        };
        let pairing = linalg::mat_mul(&to_internal, &gram_internal);
        let directions = (0..n)
            .map(|d| InternalVec {
                coords: vec![(d as u16, Q::one())],
                pairing: gram_internal[d].clone(),
                lattice_pairing: (0..n).map(|i| pairing[i][d].clone()).collect(),
            })
            .collect();
        Ok(LatticeVoa {
            rank: n,
            orthogonal,
            gram_rows: sparse(&gram_internal),
            dual_rows: sparse(&inv),
            lattice,
            cocycle,
            to_internal,
            gram_internal,
            directions,
            momenta: Mutex::default(),
            schur: Mutex::default(),
            modes: Mutex::default(),
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Whether the internal basis of `h` is orthogonal.
    pub fn is_orthogonal(&self) -> bool {
        self.orthogonal
    }

    /// Gram matrix of the internal basis.
    pub fn internal_gram(&self) -> &[Vec<Q>] {
        &self.gram_internal
    }

    /// Coefficients of the lattice basis vector `g_i` on the internal basis.
    pub fn lattice_basis_internal(&self, i: usize) -> &[Q] {
        &self.to_internal[i]
    }

    pub fn central_charge(&self) -> Q {
        Q::from(self.rank)
    }

    pub fn eps(&self, a: &LatticeVector, b: &LatticeVector) -> i64 {
        self.cocycle.eps(a, b)
    }

    pub fn clear_caches(&self) {
        self.momenta.lock().unwrap().clear();
        self.schur.lock().unwrap().clear();
        self.modes.lock().unwrap().clear();
    }

    pub fn internal_of(&self, h: &HVector) -> InternalVec {
        let n = self.rank;
        let mut coords = vec![Q::zero(); n];
        let mut pairing = vec![Q::zero(); n];
        let mut lattice_pairing = vec![Q::zero(); n];
        for (i, hi) in h.0.iter().enumerate() {
            if hi.is_zero() {
                continue;
            }
            for k in 0..n {
                if !self.to_internal[i][k].is_zero() {
                    coords[k] += hi * &self.to_internal[i][k];
                }
                if !self.directions[k].lattice_pairing[i].is_zero() {
                    pairing[k] += hi * &self.directions[k].lattice_pairing[i];
                }
                if self.lattice.gram[i][k] != 0 {
                    lattice_pairing[k] += hi * Q::from(self.lattice.gram[i][k]);
                }
            }
        }
        InternalVec {
            coords: coords
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k as u16, c))
                .collect(),
            pairing,
            lattice_pairing,
        }
    }

    /// The internal basis vector `b_d`.
    pub fn direction(&self, d: usize) -> &InternalVec {
        &self.directions[d]
    }

    fn momentum_data(&self, alpha: &LatticeVector) -> Arc<MomentumData> {
        if let Some(m) = self.momenta.lock().unwrap().get(alpha) {
            return m.clone();
        }
        let data = Arc::new(MomentumData {
            iv: self.internal_of(&alpha.to_h()),
            half_norm: self.lattice.norm(alpha) / 2,
        });
        self.momenta
            .lock()
            .unwrap()
            .insert(alpha.clone(), data.clone());
        data
    }

    pub fn half_norm(&self, alpha: &LatticeVector) -> i64 {
        self.momentum_data(alpha).half_norm
    }

    /// `L_0`-eigenvalue of a basis state.
    pub fn weight(&self, s: &FockBasisState) -> i64 {
        s.level() + self.half_norm(&s.momentum)
    }

    /// The weight of a homogeneous element, `None` for zero or mixed weights.
    pub fn homogeneous_weight(&self, v: &FockElement) -> Option<i64> {
        let mut w = None;
        for s in v.keys() {
            let ws = self.weight(s);
            match w {
                None => w = Some(ws),
                Some(x) if x != ws => return None,
                _ => {}
            }
        }
        w
    }

    /// The component of `v` of weight `w`.
    pub fn graded_part(&self, v: &FockElement, w: i64) -> FockElement {
        v.filter(|s| self.weight(s) == w)
    }

    pub fn vacuum(&self) -> FockElement {
        FockElement::basis(FockBasisState::vacuum(self.rank))
    }

    pub fn momentum_state(&self, alpha: &LatticeVector) -> FockElement {
        FockElement::basis(FockBasisState::momentum_state(alpha.clone()))
    }

    fn heis_basis(
        &self,
        h: &InternalVec,
        n: i64,
        s: &FockBasisState,
        scale: &Q,
        out: &mut FockElement,
    ) {
        if n < 0 {
            for (d, c) in &h.coords {
                out.add_term(s.with_letter(Letter::new(-n, *d as usize)), scale * c);
            }
        } else if n > 0 {
            if n > u16::MAX as i64 {
                return;
            }
            for p in mode_range(&s.word, n as u16) {
                let c = &h.pairing[s.word[p].dir as usize];
                if !c.is_zero() {
                    out.add_term(s.without(p), scale * c * Q::from(n));
                }
            }
        } else {
            let mut z = Q::zero();
            for (i, a) in s.momentum.0.iter().enumerate() {
                if *a != 0 {
                    z += &h.lattice_pairing[i] * Q::from(*a);
                }
            }
            if !z.is_zero() {
                out.add_term(s.clone(), scale * z);
            }
        }
    }

    /// `h(n) v`, with `h` given in lattice coordinates.
    pub fn heis_act(&self, h: &HVector, n: i64, v: &FockElement) -> FockElement {
        let iv = self.internal_of(h);
        self.heis_act_internal(&iv, n, v)
    }

    pub fn heis_act_internal(&self, h: &InternalVec, n: i64, v: &FockElement) -> FockElement {
        let mut out = FockElement::new();
        for (s, c) in v.iter() {
            self.heis_basis(h, n, s, c, &mut out);
        }
        out
    }

    /// Left multiplication by `e^beta`.
    pub fn apply_e(&self, beta: &LatticeVector, v: &FockElement) -> FockElement {
        v.iter()
            .map(|(s, c)| {
                let sign = self.eps(beta, &s.momentum);
                (
                    FockBasisState {
                        momentum: s.momentum.add(beta),
                        word: s.word.clone(),
                    },
                    c * Q::from(sign),
                )
            })
            .collect()
    }

    /// `S_0(alpha), ..., S_k(alpha)` as creation polynomials.
    pub fn schur_polys(&self, alpha: &LatticeVector, k: usize) -> Arc<Vec<WordPoly>> {
        if let Some(s) = self.schur.lock().unwrap().get(alpha) {
            if s.len() > k {
                return s.clone();
            }
        }
        let iv = self.momentum_data(alpha).iv.clone();
        let mut polys: Vec<WordPoly> = vec![WordPoly::basis(Word::new())];
        for j in 1..=k {
            let mut next = WordPoly::new();
            for m in 1..=j {
                for (w, c) in polys[j - m].iter() {
                    for (d, a) in &iv.coords {
                        next.add_term(insert_letter(w, Letter::new(m as i64, *d as usize)), c * a);
                    }
                }
            }
            polys.push(next.scaled(&Q::new(1, j as i64)));
        }
        let polys = Arc::new(polys);
        self.schur
            .lock()
            .unwrap()
            .insert(alpha.clone(), polys.clone());
        polys
    }

    /// `S_k(alpha)` as a creation polynomial.
    pub fn schur_op(&self, alpha: &LatticeVector, k: usize) -> WordPoly {
        self.schur_polys(alpha, k)[k].clone()
    }

    /// Multiplies a creation polynomial into `v`.
    pub fn apply_creation(&self, p: &WordPoly, v: &FockElement) -> FockElement {
        let mut out = FockElement::new();
        for (s, c) in v.iter() {
            for (w, a) in p.iter() {
                out.add_term(
                    FockBasisState {
                        momentum: s.momentum.clone(),
                        word: merge_words(w, &s.word),
                    },
                    c * a,
                );
            }
        }
        out
    }

    fn virasoro_basis(&self, n: i64, s: &FockBasisState, scale: &Q, out: &mut FockElement) {
        if n == 0 {
            let w = self.weight(s);
            if w != 0 {
                out.add_term(s.clone(), scale * Q::from(w));
            }
            return;
        }
        let md = self.momentum_data(&s.momentum);
        // one creation and one annihilation mode: moves a single letter
        for (p, l) in s.word.iter().enumerate() {
            let m = l.mode as i64;
            if m > n {
                out.add_term(
                    s.replace(p, Letter::new(m - n, l.dir as usize)),
                    scale * Q::from(m),
                );
            }
        }
        if n < 0 {
            for (d, c) in &md.iv.coords {
                out.add_term(s.with_letter(Letter::new(-n, *d as usize)), scale * c);
            }
            let big_n = -n;
            let half = Q::new(1, 2);
            for k in 1..big_n {
                for (i, row) in self.dual_rows.iter().enumerate() {
                    for (j, c) in row {
                        let t = s
                            .with_letter(Letter::new(k, i))
                            .with_letter(Letter::new(big_n - k, *j as usize));
                        out.add_term(t, scale * c * &half);
                    }
                }
            }
        } else {
            if n <= u16::MAX as i64 {
                for p in mode_range(&s.word, n as u16) {
                    let c = &md.iv.pairing[s.word[p].dir as usize];
                    if !c.is_zero() {
                        out.add_term(s.without(p), scale * c * Q::from(n));
                    }
                }
            }
            for p in 0..s.word.len() {
                let kp = s.word[p].mode as i64;
                if 2 * kp > n {
                    break;
                }
                let kq = n - kp;
                for q in mode_range(&s.word, kq as u16) {
                    if q <= p {
                        continue;
                    }
                    let (lp, lq) = (s.word[p].dir as usize, s.word[q].dir as usize);
                    if let Some((_, b)) = self.gram_rows[lp].iter().find(|(j, _)| *j as usize == lq)
                    {
                        out.add_term(s.without_two(p, q), scale * b * Q::from(kp * kq));
                    }
                }
            }
        }
    }

    /// `L_n v`.
    pub fn virasoro(&self, n: i64, v: &FockElement) -> FockElement {
        let mut out = FockElement::new();
        for (s, c) in v.iter() {
            self.virasoro_basis(n, s, c, &mut out);
        }
        out
    }

    /// `L_{m_1} ... L_{m_r} v`, applying the rightmost mode first.
    pub fn virasoro_word(&self, modes: &[i64], v: &FockElement) -> FockElement {
        let mut cur = v.clone();
        for &m in modes.iter().rev() {
            cur = self.virasoro(m, &cur);
        }
        cur
    }

    /// The conformal vector `omega = L_{-2} |0>`.
    pub fn conformal_vector(&self) -> FockElement {
        self.virasoro(-2, &self.vacuum())
    }

    /// `(e^alpha)_n (word e^beta)`.
    fn vertex_basis(
        &self,
        alpha: &LatticeVector,
        n: i64,
        v: &FockBasisState,
        scale: &Q,
        out: &mut FockElement,
    ) {
        let ab = self.lattice.dot(alpha, &v.momentum);
        let level = v.level();
        // the exponent of S_j must be reachable: j - n - 1 - (alpha,beta) <= ... with j <= level
        let max_idx = level - n - 1 - ab;
        if max_idx < 0 {
            return;
        }
        let md = self.momentum_data(alpha);
        let target = alpha.add(&v.momentum);
        let sign = Q::from(self.eps(alpha, &v.momentum));
        // annihilation part: j A_j = -sum_k alpha(k) A_{j-k}
        let mut ann: Vec<WordPoly> = vec![WordPoly::basis(v.word.clone())];
        for j in 1..=level {
            let mut next = WordPoly::new();
            for k in 1..=j {
                let prev = &ann[(j - k) as usize];
                for (w, c) in prev.iter() {
                    for p in mode_range(w, k as u16) {
                        let a = &md.iv.pairing[w[p].dir as usize];
                        if !a.is_zero() {
                            let mut w2 = w.clone();
                            w2.remove(p);
                            next.add_term(w2, -(c * a * Q::from(k)));
                        }
                    }
                }
            }
            ann.push(next.scaled(&Q::new(1, j)));
        }
        let schur = self.schur_polys(alpha, max_idx as usize);
        for (j, aj) in ann.iter().enumerate() {
            let idx = j as i64 - n - 1 - ab;
            if idx < 0 || aj.is_zero() {
                continue;
            }
            for (w1, c1) in schur[idx as usize].iter() {
                for (w2, c2) in aj.iter() {
                    out.add_term(
                        FockBasisState {
                            momentum: target.clone(),
                            word: merge_words(w1, w2),
                        },
                        scale * &sign * c1 * c2,
                    );
                }
            }
        }
    }

    /// `u_n v` for basis states.
    pub fn mode_basis(&self, u: &FockBasisState, n: i64, v: &FockBasisState) -> Arc<FockElement> {
        if u.word.is_empty() {
            let mut out = FockElement::new();
            self.vertex_basis(&u.momentum, n, v, &Q::one(), &mut out);
            return Arc::new(out);
        }
        let key = (u.clone(), n, v.clone());
        if let Some(r) = self.modes.lock().unwrap().get(&key) {
            return r.clone();
        }
        let out = Arc::new(self.mode_recursive(u, n, v));
        let mut cache = self.modes.lock().unwrap();
        if cache.len() >= CACHE_CAP {
            cache.clear();
        }
        cache.insert(key, out.clone());
        out
    }

    // (b_i(-m) u')_n v = sum_j C(m+j-1, j) [ b_i(-m-j) u'_{n+j} v - (-1)^m u'_{n-m-j} b_i(j) v ]
    fn mode_recursive(&self, u: &FockBasisState, n: i64, v: &FockBasisState) -> FockElement {
        let first = u.word[0];
        let rest = u.without(0);
        let m = first.mode as i64;
        let dir = &self.directions[first.dir as usize];
        let mut out = FockElement::new();
        let wt_rest = self.weight(&rest);
        let wt_v = self.weight(v);
        let floor = self.half_norm(&u.momentum.add(&v.momentum));
        let mut j = 0i64;
        while wt_rest + wt_v - (n + j) - 1 >= floor {
            let inner = self.mode_basis(&rest, n + j, v);
            if !inner.is_zero() {
                let c = binomial(m + j - 1, j as u64);
                for (s, a) in inner.iter() {
                    self.heis_basis(dir, -(m + j), s, &(&c * a), &mut out);
                }
            }
            j += 1;
        }
        let sign = if m % 2 == 0 { Q::from(-1) } else { Q::one() };
        let mut zero = FockElement::new();
        self.heis_basis(dir, 0, v, &Q::one(), &mut zero);
        for (s, a) in zero.iter() {
            out.add_scaled(&self.mode_basis(&rest, n - m, s), &(&sign * a));
        }
        let max_mode = v.word.last().map_or(0, |l| l.mode as i64);
        for j in 1..=max_mode {
            let mut ann = FockElement::new();
            self.heis_basis(dir, j, v, &Q::one(), &mut ann);
            if ann.is_zero() {
                continue;
            }
            let c = &sign * binomial(m + j - 1, j as u64);
            for (s, a) in ann.iter() {
                out.add_scaled(&self.mode_basis(&rest, n - m - j, s), &(&c * a));
            }
        }
        out
    }

    /// `u_n v`.
    pub fn mode_product(&self, u: &FockElement, n: i64, v: &FockElement) -> FockElement {
        let mut out = FockElement::new();
        for (a, ca) in u.iter() {
            for (b, cb) in v.iter() {
                out.add_scaled(&self.mode_basis(a, n, b), &(ca * cb));
            }
        }
        out
    }

    /// The involution with `theta(e^alpha) = (-1)^{alpha^2/2} (e^alpha)^{-1}`, `theta h(n) = -h(n)`.
    pub fn theta_inv(&self, v: &FockElement) -> FockElement {
        v.iter()
            .map(|(s, c)| {
                let neg = s.momentum.neg();
                let mut sign = self.eps(&s.momentum, &neg);
                if s.word.len() % 2 == 1 {
                    sign = -sign;
                }
                if self.half_norm(&s.momentum).rem_euclid(2) == 1 {
                    sign = -sign;
                }
                (
                    FockBasisState {
                        momentum: neg,
                        word: s.word.clone(),
                    },
                    c * Q::from(sign),
                )
            })
            .collect()
    }

    fn basis_form(&self, a: &FockBasisState, b: &FockBasisState) -> Q {
        if a.momentum != b.momentum || a.word.len() != b.word.len() {
            return Q::zero();
        }
        let mut acc = Q::one();
        let mut p = 0;
        while p < a.word.len() {
            let mode = a.word[p].mode;
            let ra = mode_range(&a.word, mode);
            let rb = mode_range(&b.word, mode);
            if ra != rb {
                return Q::zero();
            }
            let da: Vec<usize> = a.word[ra.clone()].iter().map(|l| l.dir as usize).collect();
            let db: Vec<usize> = b.word[rb].iter().map(|l| l.dir as usize).collect();
            let perm = self.permanent(&da, &db);
            if perm.is_zero() {
                return perm;
            }
            acc = acc * perm * Q::from(mode as i64).pow(da.len() as u32);
            p = ra.end;
        }
        acc
    }

    // permanent of the internal Gram submatrix B[da][db]
    fn permanent(&self, da: &[usize], db: &[usize]) -> Q {
        if self.orthogonal {
            // B diagonal: only equal direction multisets pair
            let mut sa = da.to_vec();
            let mut sb = db.to_vec();
            sa.sort_unstable();
            sb.sort_unstable();
            if sa != sb {
                return Q::zero();
            }
            let mut acc = Q::one();
            let mut i = 0;
            while i < sa.len() {
                let mut j = i;
                while j < sa.len() && sa[j] == sa[i] {
                    j += 1;
                }
                let mult = (j - i) as u64;
                acc = acc
                    * crate::rational::factorial(mult)
                    * self.gram_internal[sa[i]][sa[i]].pow(mult as u32);
                i = j;
            }
            return acc;
        }
        let k = da.len();
        // dp over subsets of columns
        let mut dp = vec![Q::zero(); 1 << k];
        dp[0] = Q::one();
        for mask in 0usize..(1 << k) {
            if dp[mask].is_zero() {
                continue;
            }
            let row = mask.count_ones() as usize;
            if row == k {
                continue;
            }
            for col in 0..k {
                if mask & (1 << col) == 0 {
                    let g = &self.gram_internal[da[row]][db[col]];
                    if !g.is_zero() {
                        let add = &dp[mask] * g;
                        dp[mask | (1 << col)] += add;
                    }
                }
            }
        }
        dp[(1 << k) - 1].clone()
    }

    /// The Fock form: `h(n)` is adjoint to `h(-n)` and `(e^a, e^b)_0 = delta_{a,b}`.
    pub fn contravariant_form(&self, u: &FockElement, v: &FockElement) -> Q {
        let mut acc = Q::zero();
        let (small, large, swap) = if u.len() <= v.len() {
            (u, v, false)
        } else {
            (v, u, true)
        };
        for (s, c) in small.iter() {
            for (t, d) in large.iter() {
                if s.momentum != t.momentum {
                    continue;
                }
                let f = if swap {
                    self.basis_form(t, s)
                } else {
                    self.basis_form(s, t)
                };
                if !f.is_zero() {
                    acc += c * d * f;
                }
            }
        }
        acc
    }

    /// `sign * (u, theta v)_0`.
    pub fn invariant_form(&self, u: &FockElement, v: &FockElement, sign: i64) -> Q {
        self.contravariant_form(u, &self.theta_inv(v)) * Q::from(sign)
    }

    /// All basis states of the given momentum and Heisenberg level, in canonical order.
    pub fn sector_basis(&self, momentum: &LatticeVector, level: i64) -> Vec<FockBasisState> {
        let mut out = Vec::new();
        let mut cur = Word::new();
        self.words_rec(level, 1, 0, &mut cur, &mut |w| {
            out.push(FockBasisState {
                momentum: momentum.clone(),
                word: w.clone(),
            })
        });
        out.sort();
        out
    }

    fn words_rec(
        &self,
        rest: i64,
        min_mode: i64,
        min_dir: usize,
        cur: &mut Word,
        f: &mut dyn FnMut(&Word),
    ) {
        if rest == 0 {
            f(cur);
            return;
        }
        for m in min_mode..=rest {
            let start = if m == min_mode { min_dir } else { 0 };
            for d in start..self.rank {
                cur.push(Letter::new(m, d));
                self.words_rec(rest - m, m, d, cur, f);
                cur.pop();
            }
        }
    }

    /// Basis of the weight-`w` piece restricted to the given momenta.
    pub fn graded_basis(&self, momenta: &[LatticeVector], w: i64) -> Vec<FockBasisState> {
        let mut out = Vec::new();
        for a in momenta {
            let level = w - self.half_norm(a);
            if level >= 0 {
                out.extend(self.sector_basis(a, level));
            }
        }
        out
    }

    /// The Gram matrix of the invariant form on a list of elements.
    pub fn form_matrix(&self, elems: &[FockElement], sign: i64) -> Vec<Vec<Q>> {
        elems
            .iter()
            .map(|a| {
                elems
                    .iter()
                    .map(|b| self.invariant_form(a, b, sign))
                    .collect()
            })
            .collect()
    }
}

/// Number of `r`-coloured partitions of `0..=n`: coefficients of `prod (1-q^k)^{-r}`.
pub fn coloured_partitions(r: usize, n: usize) -> Vec<u64> {
    let mut p = vec![0u64; n + 1];
    p[0] = 1;
    for _ in 0..r {
        for k in 1..=n {
            for i in k..=n {
                p[i] += p[i - k];
            }
        }
    }
    p
}

/// `dim (V_L)_w` for `w = 0..=max_weight`, for a positive-definite lattice.
pub fn graded_dims(lattice: &Lattice, max_weight: i64) -> Result<Vec<u64>> {
    if max_weight < 0 {
        return Err(Error::Argument("max weight must be non-negative".into()));
    }
    let counts = lattice.norm_counts(max_weight)?;
    let parts = coloured_partitions(lattice.rank(), max_weight as usize);
    Ok((0..=max_weight as usize)
        .map(|w| (0..=w).map(|h| counts[h] * parts[w - h]).sum())
        .collect())
}

/// Rank of a family of elements over `Q`.
pub fn rank_of(elems: &[FockElement]) -> usize {
    let mut index: FxHashMap<FockBasisState, usize> = FxHashMap::default();
    for e in elems {
        for k in e.keys() {
            let next = index.len();
            index.entry(k.clone()).or_insert(next);
        }
    }
    let m: Vec<Vec<Q>> = elems
        .iter()
        .map(|e| {
            let mut row = vec![Q::zero(); index.len()];
            for (k, c) in e.iter() {
                row[index[k]] = c.clone();
            }
            row
        })
        .collect();
    linalg::rank(m)
}

impl LatticeVoa {
    /// Parses an element in the state-expression grammar.
    pub fn parse(&self, src: &str) -> Result<FockElement> {
        parse_element(self, src)
    }

    /// A short textual summary, e.g. for reports.
    pub fn describe(&self) -> String {
        format!(
            "V_{} (rank {}, c = {})",
            self.lattice.name, self.rank, self.rank
        )
    }
}

#[cfg(test)]
mod tests;
