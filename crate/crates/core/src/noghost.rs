//! Covariant quantisation on `V (x) V_{II_{1,1}}`.
//!
//! The operators `K_alpha(n)`, `D_alpha(n)` and `E_alpha` act on the momentum
//! sector `H(alpha) = V (x) S(h^_-) e^alpha` of the tensor space. The
//! projection `p_T` onto the zero eigenspace of `E_alpha` is evaluated with the
//! truncated product formula, and the no-ghost maps `eta_alpha` identify
//! `V_{1 - alpha^2/2}` with classes of physical states.
//!
//! With `w_alpha = f / (alpha, f)` the space `K(alpha)` of states killed by
//! all `K_alpha(n)`, `n > 0`, consists of the states without `e`-modes, and its
//! complement `K'(alpha)` inside it is spanned by the states with at least one
//! `f`-mode. Consequently `p_V` is the `II_{1,1}`-level-zero part of `p_T`.

use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::combinatorics::proj_coeffs;
use crate::error::{Error, Result};
use crate::lattice::{ii11, HVector, Lattice, LatticeVector};
use crate::lincomb::LinComb;
use crate::rational::{factorial, Q};
use crate::voa::{FockBasisState, FockElement, LatticeVoa, Letter};

/// The vertex operator algebra `V` on the left of the tensor product.
pub trait VoaBackend: Sync {
    fn name(&self) -> String;
    fn central_charge(&self) -> Q;
    fn vacuum(&self) -> FockElement;
    fn weight(&self, s: &FockBasisState) -> i64;
    /// An upper bound for the modes `n` with `a_n b != 0`.
    fn max_mode(&self, a: &FockBasisState, b: &FockBasisState) -> i64;
    fn mode_basis(&self, a: &FockBasisState, n: i64, b: &FockBasisState) -> Arc<FockElement>;
    fn virasoro(&self, n: i64, v: &FockElement) -> FockElement;
    /// The invariant form, normalised by `(|0>, |0>) = 1`.
    fn invariant_form(&self, u: &FockElement, v: &FockElement) -> Q;
    fn parse(&self, src: &str) -> Result<FockElement>;

    fn mode_product(&self, u: &FockElement, n: i64, v: &FockElement) -> FockElement {
        let mut out = FockElement::new();
        for (a, ca) in u.iter() {
            for (b, cb) in v.iter() {
                if n <= self.max_mode(a, b) {
                    out.add_scaled(&self.mode_basis(a, n, b), &(ca * cb));
                }
            }
        }
        out
    }

    fn homogeneous_weight(&self, v: &FockElement) -> Option<i64> {
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
}

impl VoaBackend for LatticeVoa {
    fn name(&self) -> String {
        self.lattice().name.clone()
    }

    fn central_charge(&self) -> Q {
        LatticeVoa::central_charge(self)
    }

    fn vacuum(&self) -> FockElement {
        LatticeVoa::vacuum(self)
    }

    fn weight(&self, s: &FockBasisState) -> i64 {
        LatticeVoa::weight(self, s)
    }

    fn max_mode(&self, a: &FockBasisState, b: &FockBasisState) -> i64 {
        self.weight(a) + self.weight(b) - 1 - self.half_norm(&a.momentum.add(&b.momentum))
    }

    fn mode_basis(&self, a: &FockBasisState, n: i64, b: &FockBasisState) -> Arc<FockElement> {
        LatticeVoa::mode_basis(self, a, n, b)
    }

    fn virasoro(&self, n: i64, v: &FockElement) -> FockElement {
        LatticeVoa::virasoro(self, n, v)
    }

    fn invariant_form(&self, u: &FockElement, v: &FockElement) -> Q {
        LatticeVoa::invariant_form(self, u, v, 1)
    }

    fn parse(&self, src: &str) -> Result<FockElement> {
        LatticeVoa::parse(self, src)
    }
}

/// A basis key of `V (x) V_{II_{1,1}}`.
pub type TensorKey = (FockBasisState, FockBasisState);

/// An element of `V (x) V_{II_{1,1}}`.
pub type TensorElement = LinComb<TensorKey>;

/// `v (x) s`
pub fn tensor(v: &FockElement, s: &FockElement) -> TensorElement {
    let mut out = TensorElement::with_capacity(v.len() * s.len());
    for (a, ca) in v.iter() {
        for (b, cb) in s.iter() {
            out.add_term((a.clone(), b.clone()), ca * cb);
        }
    }
    out
}

/// Tuples `(lambda, mu)` labelling `t_{lambda,mu} = L(-1)^{l_1}..L(-n)^{l_n} K(-1)^{m_1}..K(-m)^{m_m} t`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LambdaMuWord {
    pub lambda: Vec<u32>,
    pub mu: Vec<u32>,
}

impl LambdaMuWord {
    pub fn new(mut lambda: Vec<u32>, mut mu: Vec<u32>) -> Self {
        while lambda.last() == Some(&0) {
            lambda.pop();
        }
        while mu.last() == Some(&0) {
            mu.pop();
        }
        LambdaMuWord { lambda, mu }
    }

    /// `sum i lambda_i + sum j mu_j`, the negated `E_alpha`-eigenvalue.
    pub fn degree(&self) -> i64 {
        let f = |t: &[u32]| {
            t.iter()
                .enumerate()
                .map(|(i, &c)| (i as i64 + 1) * c as i64)
                .sum::<i64>()
        };
        f(&self.lambda) + f(&self.mu)
    }
}

type VirKey = (i64, FockBasisState);

/// The tensor space `V (x) V_{II_{1,1}}` together with operator caches.
pub struct TensorSpace<'a> {
    pub backend: &'a dyn VoaBackend,
    pub ii: LatticeVoa,
    v_vir: Mutex<FxHashMap<VirKey, Arc<FockElement>>>,
    ii_vir: Mutex<FxHashMap<VirKey, Arc<FockElement>>>,
    d_ops: Mutex<FxHashMap<VirKey, Arc<FockElement>>>,
}

const CACHE_CAP: usize = 400_000;

fn cached<F: FnOnce() -> FockElement>(
    map: &Mutex<FxHashMap<VirKey, Arc<FockElement>>>,
    key: VirKey,
    f: F,
) -> Arc<FockElement> {
    if let Some(r) = map.lock().unwrap().get(&key) {
        return r.clone();
    }
    let r = Arc::new(f());
    let mut m = map.lock().unwrap();
    if m.len() >= CACHE_CAP {
        m.clear();
    }
    m.insert(key, r.clone());
    r
}

// Partitions of n into parts <= max_part, largest part first.
fn partitions(n: i64, max_part: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if n == 0 {
        out.push(cur.clone());
        return;
    }
    for p in (1..=max_part.min(n)).rev() {
        cur.push(p);
        partitions(n - p, p, cur, out);
        cur.pop();
    }
}

fn multiplicity_factorials(parts: &[i64]) -> Q {
    let mut acc = Q::one();
    let mut i = 0;
    while i < parts.len() {
        let mut j = i;
        while j < parts.len() && parts[j] == parts[i] {
            j += 1;
        }
        acc *= factorial((j - i) as u64);
        i = j;
    }
    acc
}

impl<'a> TensorSpace<'a> {
    pub fn new(backend: &'a dyn VoaBackend) -> Self {
        TensorSpace {
            backend,
            ii: LatticeVoa::new(Lattice::ii11()).expect("II11 is even and unimodular"),
            v_vir: Mutex::default(),
            ii_vir: Mutex::default(),
            d_ops: Mutex::default(),
        }
    }

    pub fn clear_caches(&self) {
        self.v_vir.lock().unwrap().clear();
        self.ii_vir.lock().unwrap().clear();
        self.d_ops.lock().unwrap().clear();
        self.ii.clear_caches();
    }

    pub fn weight(&self, k: &TensorKey) -> i64 {
        self.backend.weight(&k.0) + self.ii.weight(&k.1)
    }

    pub fn homogeneous_weight(&self, x: &TensorElement) -> Option<i64> {
        let mut w = None;
        for k in x.keys() {
            let wk = self.weight(k);
            match w {
                None => w = Some(wk),
                Some(y) if y != wk => return None,
                _ => {}
            }
        }
        w
    }

    /// `v (x) e^alpha`
    pub fn lift(&self, v: &FockElement, alpha: &LatticeVector) -> TensorElement {
        tensor(v, &self.ii.momentum_state(alpha))
    }

    /// Checks that `x` lies in `H(alpha)`.
    pub fn check_sector(&self, alpha: &LatticeVector, x: &TensorElement) -> Result<()> {
        ii11::require_not_f_perp(alpha, "alpha")?;
        if let Some(k) = x.keys().find(|k| k.1.momentum != *alpha) {
            return Err(Error::Argument(format!(
                "element has II11 momentum {:?}, outside H({:?})",
                k.1.momentum.0, alpha.0
            )));
        }
        Ok(())
    }

    fn v_virasoro(&self, n: i64, a: &FockBasisState) -> Arc<FockElement> {
        cached(&self.v_vir, (n, a.clone()), || {
            self.backend.virasoro(n, &FockElement::basis(a.clone()))
        })
    }

    fn ii_virasoro(&self, n: i64, s: &FockBasisState) -> Arc<FockElement> {
        cached(&self.ii_vir, (n, s.clone()), || {
            self.ii.virasoro(n, &FockElement::basis(s.clone()))
        })
    }

    /// `L(n) = L_n (x) 1 + 1 (x) L_n`.
    pub fn l_tensor(&self, n: i64, x: &TensorElement) -> TensorElement {
        let mut out = TensorElement::new();
        for ((a, s), c) in x.iter() {
            for (b, cb) in self.v_virasoro(n, a).iter() {
                out.add_term((b.clone(), s.clone()), c * cb);
            }
            for (t, ct) in self.ii_virasoro(n, s).iter() {
                out.add_term((a.clone(), t.clone()), c * ct);
            }
        }
        out
    }

    fn ii_apply(
        &self,
        x: &TensorElement,
        mut f: impl FnMut(&FockBasisState) -> Arc<FockElement>,
    ) -> TensorElement {
        let mut out = TensorElement::new();
        for ((a, s), c) in x.iter() {
            for (t, ct) in f(s).iter() {
                out.add_term((a.clone(), t.clone()), c * ct);
            }
        }
        out
    }

    /// `K_alpha(n) = 1 (x) w_alpha(n)` on `H(alpha)`.
    pub fn k_op(&self, alpha: &LatticeVector, n: i64, x: &TensorElement) -> Result<TensorElement> {
        self.check_sector(alpha, x)?;
        let w = self.ii.internal_of(&ii11::w_vector(alpha)?);
        Ok(self.ii_apply(x, |s| {
            Arc::new(
                self.ii
                    .heis_act_internal(&w, n, &FockElement::basis(s.clone())),
            )
        }))
    }

    /// `K_beta(n)` restricted to `H(alpha)`, for comparing operators across sectors.
    pub fn k_op_foreign(
        &self,
        beta: &LatticeVector,
        n: i64,
        x: &TensorElement,
    ) -> Result<TensorElement> {
        let w = self.ii.internal_of(&ii11::w_vector(beta)?);
        Ok(self.ii_apply(x, |s| {
            Arc::new(
                self.ii
                    .heis_act_internal(&w, n, &FockElement::basis(s.clone())),
            )
        }))
    }

    // D_alpha(n) = sum over commuting products of K_alpha(n_i), grouped by the
    // multisets of positive parts (removed e-modes) and negative parts (added f-modes).
    fn d_basis(&self, n: i64, s: &FockBasisState) -> FockElement {
        let alpha = &s.momentum;
        let af = Q::from(ii11::pair_f(alpha));
        let inv = af.recip();
        let e_modes: Vec<i64> = s
            .word
            .iter()
            .filter(|l| l.dir == 0)
            .map(|l| l.mode as i64)
            .collect();
        let mut out = FockElement::new();
        // enumerate sub-multisets of the e-modes by choosing a count per distinct mode
        let mut distinct: Vec<(i64, usize)> = Vec::new();
        for &m in &e_modes {
            match distinct.last_mut() {
                Some((x, c)) if *x == m => *c += 1,
                _ => distinct.push((m, 1)),
            }
        }
        let mut choice = vec![0usize; distinct.len()];
        loop {
            let p: i64 = distinct
                .iter()
                .zip(&choice)
                .map(|((m, _), &j)| m * j as i64)
                .sum();
            let q = p - n;
            if q >= 0 {
                // apply K(pi): f(m)^j e(-m)^k = k!/(k-j)! m^j e(-m)^{k-j}
                let mut coeff = Q::one();
                let mut word = s.word.clone();
                let mut len_pi = 0usize;
                let mut mult = Q::one();
                for ((m, k), &j) in distinct.iter().zip(&choice) {
                    if j == 0 {
                        continue;
                    }
                    len_pi += j;
                    mult *= factorial(j as u64);
                    coeff *= factorial(*k as u64) / factorial((*k - j) as u64);
                    coeff *= (Q::from(*m) * &inv).pow(j as u32);
                    for _ in 0..j {
                        let pos = word
                            .iter()
                            .position(|l| l.dir == 0 && l.mode as i64 == *m)
                            .unwrap();
                        word.remove(pos);
                    }
                }
                let base = FockBasisState {
                    momentum: alpha.clone(),
                    word,
                };
                let mut rhos = Vec::new();
                partitions(q, q, &mut Vec::new(), &mut rhos);
                for rho in rhos {
                    let len = len_pi + rho.len();
                    let sign = if len % 2 == 0 { Q::one() } else { -Q::one() };
                    let count = factorial(len as u64) / (&mult * multiplicity_factorials(&rho));
                    let c = &sign * &count * &coeff * inv.pow(rho.len() as u32);
                    let mut t = base.clone();
                    for r in &rho {
                        t = t.with_letter(Letter::new(*r, 1));
                    }
                    out.add_term(t, c);
                }
            }
            // next choice
            let mut i = 0;
            loop {
                if i == choice.len() {
                    return out;
                }
                if choice[i] < distinct[i].1 {
                    choice[i] += 1;
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    fn d_cached(&self, n: i64, s: &FockBasisState) -> Arc<FockElement> {
        cached(&self.d_ops, (n, s.clone()), || self.d_basis(n, s))
    }

    /// `D_alpha(n)`, the modes of `K_alpha(z)^{-1}` on `H(alpha)`.
    pub fn d_op(&self, alpha: &LatticeVector, n: i64, x: &TensorElement) -> Result<TensorElement> {
        self.check_sector(alpha, x)?;
        Ok(self.d_unchecked(n, x))
    }

    fn d_unchecked(&self, n: i64, x: &TensorElement) -> TensorElement {
        self.ii_apply(x, |s| self.d_cached(n, s))
    }

    /// `sum_m (-1)^m D_alpha(n, m)` with `D_alpha(n, m)` the sum of `K_alpha(n_1)...K_alpha(n_m)`
    /// over ordered non-zero parts, evaluated term by term. Cross-checks [`TensorSpace::d_op`].
    pub fn d_op_naive(
        &self,
        alpha: &LatticeVector,
        n: i64,
        x: &TensorElement,
    ) -> Result<TensorElement> {
        self.check_sector(alpha, x)?;
        // positive parts remove e-modes, negative parts only add f-modes
        let depth = x.keys().map(|k| k.1.level()).max().unwrap_or(0);
        let neg_max = (depth - n).max(0);
        let mut total = if n == 0 {
            x.clone()
        } else {
            TensorElement::new()
        };
        let mut layer: FxHashMap<i64, TensorElement> = FxHashMap::default();
        layer.insert(0, x.clone());
        for m in 1..=(depth + neg_max) {
            let mut next: FxHashMap<i64, TensorElement> = FxHashMap::default();
            for (sum, y) in &layer {
                for p in -neg_max..=depth {
                    if p == 0 {
                        continue;
                    }
                    let z = self.k_op(alpha, p, y)?;
                    if !z.is_zero() {
                        next.entry(sum + p).or_default().add_assign(&z);
                    }
                }
            }
            layer = next.into_iter().filter(|(_, y)| !y.is_zero()).collect();
            if let Some(y) = layer.get(&n) {
                total.add_scaled(y, &Q::from(if m % 2 == 0 { 1 } else { -1 }));
            }
        }
        Ok(total)
    }

    fn depth(&self, alpha: &LatticeVector, w: i64) -> i64 {
        w - ii11::half_norm(alpha)
    }

    fn e_unchecked(&self, alpha: &LatticeVector, w: i64, x: &TensorElement) -> TensorElement {
        let d = self.depth(alpha, w);
        let mut out = self.d_unchecked(0, x) - x.clone();
        out = out.scaled(&Q::from(w - 1));
        for n in 1..=d {
            let ln = self.l_tensor(n, x);
            if !ln.is_zero() {
                out.add_assign(&self.d_unchecked(-n, &ln));
            }
            let dn = self.d_unchecked(n, x);
            if !dn.is_zero() {
                out.add_assign(&self.l_tensor(-n, &dn));
            }
        }
        out
    }

    fn require_homogeneous(&self, x: &TensorElement) -> Result<i64> {
        if x.is_zero() {
            return Ok(0);
        }
        self.homogeneous_weight(x)
            .ok_or_else(|| Error::Argument("element is not homogeneous".into()))
    }

    /// `E_alpha = (D(0) - 1)(L(0) - 1) + sum_{n >= 1} (D(-n) L(n) + L(-n) D(n))`, applied
    /// to each homogeneous component.
    pub fn e_op(&self, alpha: &LatticeVector, x: &TensorElement) -> Result<TensorElement> {
        self.check_sector(alpha, x)?;
        let mut by_weight: FxHashMap<i64, TensorElement> = FxHashMap::default();
        for (k, c) in x.iter() {
            by_weight
                .entry(self.weight(k))
                .or_default()
                .add_term(k.clone(), c.clone());
        }
        let mut out = TensorElement::new();
        for (w, part) in by_weight {
            out.add_assign(&self.e_unchecked(alpha, w, &part));
        }
        Ok(out)
    }

    /// `p_T x = (1/d!) prod_{i=1}^d (E_alpha + i) x`, `d` the excitation depth.
    pub fn proj_t(&self, alpha: &LatticeVector, x: &TensorElement) -> Result<TensorElement> {
        self.check_sector(alpha, x)?;
        let w = self.require_homogeneous(x)?;
        if x.is_zero() {
            return Ok(TensorElement::new());
        }
        let d = self.depth(alpha, w);
        if d < 0 {
            return Ok(TensorElement::new());
        }
        let coeffs = proj_coeffs(d as u64);
        let mut power = x.clone();
        let mut out = x.clone();
        for c in coeffs.iter().skip(1) {
            power = self.e_unchecked(alpha, w, &power);
            if power.is_zero() {
                break;
            }
            out.add_scaled(&power, c);
        }
        let check = self.e_unchecked(alpha, w, &out);
        if !check.is_zero() {
            return Err(Error::Invariant(format!(
                "projection did not become stationary at depth {d}"
            )));
        }
        Ok(out)
    }

    /// The `II_{1,1}`-level-zero part of `x`, as an element of `V`.
    pub fn level_zero(&self, x: &TensorElement) -> FockElement {
        x.iter()
            .filter(|(k, _)| k.1.word.is_empty())
            .map(|(k, c)| (k.0.clone(), c.clone()))
            .collect()
    }

    /// `p_V x`, returned as the `V`-factor of `u (x) e^alpha`.
    pub fn proj_v(&self, alpha: &LatticeVector, x: &TensorElement) -> Result<FockElement> {
        Ok(self.level_zero(&self.proj_t(alpha, x)?))
    }

    /// `eta_alpha(v) = p_T(v (x) e^alpha)`.
    pub fn eta(&self, alpha: &LatticeVector, v: &FockElement) -> Result<TensorElement> {
        ii11::require_not_f_perp(alpha, "alpha")?;
        if alpha.is_zero() {
            return Err(Error::Hypothesis("alpha = 0".into()));
        }
        let target = 1 - ii11::half_norm(alpha);
        if !v.is_zero() && self.backend.homogeneous_weight(v) != Some(target) {
            return Err(Error::Argument(format!(
                "state must be homogeneous of weight 1 - alpha^2/2 = {target}"
            )));
        }
        self.proj_t(alpha, &self.lift(v, alpha))
    }

    /// Checks `L(1) x = L(2) x = 0`.
    pub fn is_physical(&self, x: &TensorElement) -> bool {
        self.l_tensor(1, x).is_zero() && self.l_tensor(2, x).is_zero()
    }

    /// Inverse of `eta_alpha` on classes: `p_V(p_T(x))`.
    pub fn eta_inv(&self, alpha: &LatticeVector, x: &TensorElement) -> Result<FockElement> {
        self.check_sector(alpha, x)?;
        if x.is_zero() {
            return Ok(FockElement::new());
        }
        if self.homogeneous_weight(x) != Some(1) {
            return Err(Error::Argument(
                "element must be homogeneous of weight 1".into(),
            ));
        }
        if !self.is_physical(x) {
            return Err(Error::Argument("element is not physical".into()));
        }
        self.proj_v(alpha, x)
    }

    /// `eta_0(v, a) = v (x) e^0 + |0> (x) a(-1) e^0`.
    pub fn eta_zero(&self, v: &FockElement, a: &HVector) -> TensorElement {
        let zero = LatticeVector::zero(2);
        let mut out = self.lift(v, &zero);
        let a1 = self.ii.heis_act(a, -1, &self.ii.momentum_state(&zero));
        out.add_assign(&tensor(&self.backend.vacuum(), &a1));
        out
    }

    /// `t_{lambda,mu}`.
    pub fn t_lambda_mu(
        &self,
        alpha: &LatticeVector,
        word: &LambdaMuWord,
        t: &TensorElement,
    ) -> Result<TensorElement> {
        let mut x = t.clone();
        for (j, &c) in word.mu.iter().enumerate().rev() {
            for _ in 0..c {
                x = self.k_op(alpha, -(j as i64 + 1), &x)?;
            }
        }
        for (i, &c) in word.lambda.iter().enumerate().rev() {
            for _ in 0..c {
                x = self.l_tensor(-(i as i64 + 1), &x);
            }
        }
        Ok(x)
    }

    /// The contravariant form `(.,.)_0`: the invariant form of `V` times the Fock form of `V_{II_{1,1}}`.
    pub fn form(&self, x: &TensorElement, y: &TensorElement) -> Q {
        let mut acc = Q::zero();
        for ((a, s), c) in x.iter() {
            for ((b, t), d) in y.iter() {
                if s.momentum != t.momentum || s.word.len() != t.word.len() {
                    continue;
                }
                let fs = self.ii.contravariant_form(
                    &FockElement::basis(s.clone()),
                    &FockElement::basis(t.clone()),
                );
                if fs.is_zero() {
                    continue;
                }
                let fv = self.backend.invariant_form(
                    &FockElement::basis(a.clone()),
                    &FockElement::basis(b.clone()),
                );
                if !fv.is_zero() {
                    acc += c * d * fs * fv;
                }
            }
        }
        acc
    }

    /// `L(-1) y` with `y = p_T(u (x) e^alpha)` physical of weight 0; lies in the radical `N^1`.
    pub fn radical_translation(
        &self,
        alpha: &LatticeVector,
        u: &FockElement,
    ) -> Result<TensorElement> {
        let target = -ii11::half_norm(alpha);
        if !u.is_zero() && self.backend.homogeneous_weight(u) != Some(target) {
            return Err(Error::Argument(format!(
                "state must have weight -alpha^2/2 = {target}"
            )));
        }
        let y = self.proj_t(alpha, &self.lift(u, alpha))?;
        Ok(self.l_tensor(-1, &y))
    }

    /// `(L(-2) + 3/2 L(-1)^2) y` with `y = p_T(u (x) e^alpha)` physical of weight -1; null at `c = 26`.
    pub fn radical_virasoro(
        &self,
        alpha: &LatticeVector,
        u: &FockElement,
    ) -> Result<TensorElement> {
        let target = -1 - ii11::half_norm(alpha);
        if !u.is_zero() && self.backend.homogeneous_weight(u) != Some(target) {
            return Err(Error::Argument(format!(
                "state must have weight -1 - alpha^2/2 = {target}"
            )));
        }
        let y = self.proj_t(alpha, &self.lift(u, alpha))?;
        let mut out = self.l_tensor(-2, &y);
        out.add_scaled(&self.l_tensor(-1, &self.l_tensor(-1, &y)), &Q::new(3, 2));
        Ok(out)
    }

    /// `(a (x) s)_n (b (x) t) = sum_i (a_i b) (x) (s_{n-1-i} t)`.
    pub fn tensor_mode(&self, x: &TensorElement, n: i64, y: &TensorElement) -> TensorElement {
        let mut out = TensorElement::new();
        for ((a, s), c) in x.iter() {
            for ((b, t), d) in y.iter() {
                let cd = c * d;
                let top_v = self.backend.max_mode(a, b);
                let top_ii = self.ii.weight(s) + self.ii.weight(t)
                    - 1
                    - self.ii.half_norm(&s.momentum.add(&t.momentum));
                // i <= top_v and n - 1 - i <= top_ii
                let lo = n - 1 - top_ii;
                for i in lo..=top_v {
                    let vi = self.backend.mode_basis(a, i, b);
                    if vi.is_zero() {
                        continue;
                    }
                    let si = self.ii.mode_basis(s, n - 1 - i, t);
                    if si.is_zero() {
                        continue;
                    }
                    for (p, cp) in vi.iter() {
                        for (q, cq) in si.iter() {
                            out.add_term((p.clone(), q.clone()), &cd * cp * cq);
                        }
                    }
                }
            }
        }
        out
    }
}
