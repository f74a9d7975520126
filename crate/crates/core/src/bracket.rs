//! The explicit bracket formula.
//!
//! For `alpha, beta, alpha + beta` outside `f`-perp and `v`, `w` of weights
//! `1 - alpha^2/2`, `1 - beta^2/2` the bracket of the corresponding physical
//! states is
//!
//! ```text
//! {v, w} = sum_{n1, n2, k} p_{n1 + n2 + k - (alpha, beta)} ( iota_{n1}(v)_k jmath_{n2}(w) )
//! ```
//!
//! where `p_n`, `iota_n`, `jmath_n` are universal polynomials in Virasoro
//! operators with rational coefficients depending only on `alpha` and `beta`.
//! The sum over `k` runs over every integer for which the `p`-index is
//! non-negative; the upper end is set by the grading of `V`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::combinatorics::{all_compositions, b_poly, poly_p_table, proj_coeffs, Composition};
use crate::error::{Error, Result};
use crate::lattice::{ii11, LatticeVector};
use crate::lincomb::LinComb;
use crate::noghost::VoaBackend;
use crate::rational::Q;
use crate::voa::FockElement;

/// `L_{m_1} ... L_{m_r}`; the rightmost mode acts first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
pub struct VirasoroWord(pub Vec<i64>);

impl VirasoroWord {
    pub fn identity() -> Self {
        VirasoroWord(Vec::new())
    }

    pub fn modes(&self) -> &[i64] {
        &self.0
    }

    /// The weight shift `-sum m_i`.
    pub fn degree(&self) -> i64 {
        -self.0.iter().sum::<i64>()
    }

    /// `self * L_m`
    pub fn then_first(&self, m: i64) -> Self {
        let mut v = self.0.clone();
        v.push(m);
        VirasoroWord(v)
    }
}

impl fmt::Display for VirasoroWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        while i < self.0.len() {
            let mut j = i;
            while j < self.0.len() && self.0[j] == self.0[i] {
                j += 1;
            }
            write!(f, "L({})", self.0[i])?;
            if j - i > 1 {
                write!(f, "^{}", j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

impl FromStr for VirasoroWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let src = s.trim();
        if src == "1" {
            return Ok(VirasoroWord::identity());
        }
        let mut modes = Vec::new();
        let mut rest = src;
        let bad = |rest: &str| Error::Parse {
            pos: src.len() - rest.len(),
            msg: "expected L(m) or L(m)^k".into(),
        };
        while !rest.is_empty() {
            let body = rest.strip_prefix("L(").ok_or_else(|| bad(rest))?;
            let close = body.find(')').ok_or_else(|| bad(rest))?;
            let m: i64 = body[..close].trim().parse().map_err(|_| bad(rest))?;
            rest = &body[close + 1..];
            let mut count = 1;
            if let Some(p) = rest.strip_prefix('^') {
                let end = p.find(|c: char| !c.is_ascii_digit()).unwrap_or(p.len());
                count = p[..end].parse().map_err(|_| bad(rest))?;
                rest = &p[end..];
            }
            modes.extend(std::iter::repeat(m).take(count));
            rest = rest.trim_start();
        }
        Ok(VirasoroWord(modes))
    }
}

/// A finite rational combination of Virasoro words.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct VirasoroExpression(pub LinComb<VirasoroWord>);

impl VirasoroExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::word(VirasoroWord::identity(), Q::one())
    }

    pub fn word(w: VirasoroWord, c: Q) -> Self {
        VirasoroExpression(LinComb::term(w, c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_zero()
    }

    pub fn coeff(&self, w: &VirasoroWord) -> Q {
        self.0.coeff(w)
    }

    /// Terms in a fixed order: shorter words first, then lexicographic.
    pub fn terms(&self) -> Vec<(VirasoroWord, Q)> {
        let mut t: Vec<_> = self.0.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
        t.sort_by(|a, b| (a.0 .0.len(), &a.0).cmp(&(b.0 .0.len(), &b.0)));
        t
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Q) {
        self.0.add_scaled(&other.0, c);
    }

    pub fn scaled(&self, c: &Q) -> Self {
        VirasoroExpression(self.0.scaled(c))
    }

    /// `self * L_m`
    pub fn then_first(&self, m: i64) -> Self {
        VirasoroExpression(self.0.map_linear(|w| LinComb::basis(w.then_first(m))))
    }

    /// The common degree of all words, `None` if mixed; zero has degree 0.
    pub fn degree(&self) -> Option<i64> {
        let mut d = None;
        for w in self.0.keys() {
            match d {
                None => d = Some(w.degree()),
                Some(x) if x != w.degree() => return None,
                _ => {}
            }
        }
        Some(d.unwrap_or(0))
    }

    /// Applies the expression to `v`, sharing work between words with a common right end.
    pub fn apply(&self, backend: &dyn VoaBackend, v: &FockElement) -> FockElement {
        let words: Vec<(&[i64], &Q)> = self.0.iter().map(|(w, c)| (w.0.as_slice(), c)).collect();
        apply_words(backend, &words, v)
    }
}

fn apply_words(backend: &dyn VoaBackend, words: &[(&[i64], &Q)], v: &FockElement) -> FockElement {
    let mut out = FockElement::new();
    let mut groups: BTreeMap<i64, Vec<(&[i64], &Q)>> = BTreeMap::new();
    for &(w, c) in words {
        match w.split_last() {
            None => out.add_scaled(v, c),
            Some((&m, rest)) => groups.entry(m).or_default().push((rest, c)),
        }
    }
    for (m, rest) in groups {
        let lv = backend.virasoro(m, v);
        if !lv.is_zero() {
            out.add_assign(&apply_words(backend, &rest, &lv));
        }
    }
    out
}

impl fmt::Display for VirasoroExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if w.0.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{a}*{w}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct TermJson<'a> {
    word: String,
    modes: &'a [i64],
    coeff: &'a Q,
}

impl Serialize for VirasoroExpression {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self.terms();
        let mut seq = s.serialize_seq(Some(terms.len()))?;
        for (w, c) in &terms {
            seq.serialize_element(&TermJson {
                word: w.to_string(),
                modes: &w.0,
                coeff: c,
            })?;
        }
        seq.end()
    }
}

fn require_pair(gamma: &LatticeVector, delta: &LatticeVector) -> Result<()> {
    require_named(gamma, delta, ["gamma", "delta"])
}

fn require_named(a: &LatticeVector, b: &LatticeVector, names: [&str; 2]) -> Result<()> {
    for (v, name) in [(a, names[0]), (b, names[1])] {
        if v.rank() != 2 {
            return Err(Error::Argument(format!(
                "{name} must be an element of II11"
            )));
        }
        ii11::require_not_f_perp(v, name)?;
    }
    Ok(())
}

fn require_triple(alpha: &LatticeVector, beta: &LatticeVector) -> Result<()> {
    require_named(alpha, beta, ["alpha", "beta"])?;
    ii11::require_not_f_perp(&alpha.add(beta), "alpha+beta")
}

/// `A(m) = -x (1 - x)^{m-1}` with `x = x_{delta,gamma}`.
pub fn a_num(gamma: &LatticeVector, delta: &LatticeVector, m: i64) -> Result<Q> {
    require_pair(gamma, delta)?;
    if m < 1 {
        return Err(Error::Argument(format!("A(m) needs m >= 1, got {m}")));
    }
    Ok(a_from_x(&ii11::x_coeff(delta, gamma)?, m))
}

fn a_from_x(x: &Q, m: i64) -> Q {
    -(x * (Q::one() - x).pow((m - 1) as u32))
}

/// `c(n) = prod_i A(n_i) / (n_i + ... + n_m)`.
pub fn c_coeff(gamma: &LatticeVector, delta: &LatticeVector, n: &Composition) -> Result<Q> {
    require_pair(gamma, delta)?;
    let x = ii11::x_coeff(delta, gamma)?;
    Ok(c_from_x(&x, n))
}

fn c_from_x(x: &Q, n: &Composition) -> Q {
    let mut acc = Q::one();
    let mut tail: i64 = n.total() as i64;
    for &p in n.parts() {
        acc = acc * a_from_x(x, p as i64) / Q::from(tail);
        tail -= p as i64;
    }
    acc
}

/// `p_0, ..., p_n` from `n p_n = sum_{j=1}^n A(j) p_{n-j} L_{-j}`.
fn p_table(x: &Q, n: i64) -> Vec<VirasoroExpression> {
    let mut table = vec![VirasoroExpression::identity()];
    for k in 1..=n {
        let mut pk = VirasoroExpression::zero();
        for j in 1..=k {
            pk.add_scaled(&table[(k - j) as usize].then_first(-j), &a_from_x(x, j));
        }
        table.push(pk.scaled(&Q::new(1, k)));
    }
    table
}

/// `p^{gamma,delta}_n`; zero for `n < 0`.
pub fn p_operator(
    gamma: &LatticeVector,
    delta: &LatticeVector,
    n: i64,
) -> Result<VirasoroExpression> {
    require_pair(gamma, delta)?;
    if n < 0 {
        return Ok(VirasoroExpression::zero());
    }
    let x = ii11::x_coeff(delta, gamma)?;
    Ok(p_table(&x, n).swap_remove(n as usize))
}

/// `p^{gamma,delta}_n` as the sum of `c(n) L(-n)` over all compositions of `n`.
pub fn p_operator_direct(
    gamma: &LatticeVector,
    delta: &LatticeVector,
    n: i64,
) -> Result<VirasoroExpression> {
    require_pair(gamma, delta)?;
    let x = ii11::x_coeff(delta, gamma)?;
    let mut out = VirasoroExpression::zero();
    for comp in all_compositions(n) {
        // L(-n) = L_{-n_m} ... L_{-n_1}
        let word = VirasoroWord(comp.parts().iter().rev().map(|&p| -(p as i64)).collect());
        out.0.add_term(word, c_from_x(&x, &comp));
    }
    Ok(out)
}

/// `t[k][n]` for `k <= kmax`, `n <= nmax`, with
/// `t[k][n] = sum_{j=1}^k sum_{m=1}^n s(m) b_m(x) p^{k-1}_{j-1}(-m) t[j-1][n-m] L_m`,
/// `s(m) = (-1)^m` when `signed`.
fn annihilation_table(
    x: &Q,
    signed: bool,
    kmax: usize,
    nmax: usize,
) -> Vec<Vec<VirasoroExpression>> {
    let b: Vec<Q> = (0..=nmax as u64).map(|m| b_poly(m).eval(x)).collect();
    let mut t: Vec<Vec<VirasoroExpression>> = Vec::with_capacity(kmax + 1);
    t.push(
        (0..=nmax)
            .map(|n| {
                if n == 0 {
                    VirasoroExpression::identity()
                } else {
                    VirasoroExpression::zero()
                }
            })
            .collect(),
    );
    for k in 1..=kmax {
        let polys = poly_p_table(k - 1);
        let mut row = Vec::with_capacity(nmax + 1);
        for n in 0..=nmax {
            let mut acc = VirasoroExpression::zero();
            for m in 1..=n {
                let mut c = b[m].clone();
                if signed && m % 2 == 1 {
                    c = -c;
                }
                let mq = Q::from(-(m as i64));
                for j in 1..=k {
                    let pc = polys[j - 1].eval(&mq);
                    if pc.is_zero() {
                        continue;
                    }
                    acc.add_scaled(&t[j - 1][n - m].then_first(m as i64), &(&c * &pc));
                }
            }
            row.push(acc);
        }
        t.push(row);
    }
    t
}

fn check_indices(k: i64, n: i64) -> Result<()> {
    if k < 0 || n < 0 {
        return Err(Error::Argument(format!(
            "indices must be non-negative, got ({k}, {n})"
        )));
    }
    Ok(())
}

/// `iota_{k,n}`, built with `b_m(x_{alpha,beta})` and the sign `(-1)^m`.
pub fn iota(
    alpha: &LatticeVector,
    beta: &LatticeVector,
    k: i64,
    n: i64,
) -> Result<VirasoroExpression> {
    require_triple(alpha, beta)?;
    check_indices(k, n)?;
    let x = ii11::x_coeff(alpha, beta)?;
    Ok(annihilation_table(&x, true, k as usize, n as usize)[k as usize][n as usize].clone())
}

/// `jmath_{k,n}`, built with `b_m(x_{beta,alpha})` and no sign.
pub fn jmath(
    alpha: &LatticeVector,
    beta: &LatticeVector,
    k: i64,
    n: i64,
) -> Result<VirasoroExpression> {
    require_triple(alpha, beta)?;
    check_indices(k, n)?;
    let x = ii11::x_coeff(beta, alpha)?;
    Ok(annihilation_table(&x, false, k as usize, n as usize)[k as usize][n as usize].clone())
}

fn physical_weight(alpha: &LatticeVector, name: &str) -> Result<i64> {
    let w = 1 - ii11::half_norm(alpha);
    if w < 0 {
        return Err(Error::Unsupported(format!(
            "1 - {name}^2/2 = {w} is negative"
        )));
    }
    Ok(w)
}

fn weighted(table: &[Vec<VirasoroExpression>], depth: i64, n: usize) -> VirasoroExpression {
    let s = proj_coeffs(depth as u64);
    let mut out = VirasoroExpression::zero();
    for (k, c) in s.iter().enumerate() {
        out.add_scaled(&table[k][n], c);
    }
    out
}

/// `sum_{k=0}^{N} S_{k,N} iota_{k,n1}` with `N = 1 - alpha^2/2`.
pub fn iota_weighted(
    alpha: &LatticeVector,
    beta: &LatticeVector,
    n1: i64,
) -> Result<VirasoroExpression> {
    require_triple(alpha, beta)?;
    check_indices(0, n1)?;
    let depth = physical_weight(alpha, "alpha")?;
    let x = ii11::x_coeff(alpha, beta)?;
    let t = annihilation_table(&x, true, depth as usize, n1 as usize);
    Ok(weighted(&t, depth, n1 as usize))
}

/// `sum_{k=0}^{M} S_{k,M} jmath_{k,n2}` with `M = 1 - beta^2/2`.
pub fn jmath_weighted(
    alpha: &LatticeVector,
    beta: &LatticeVector,
    n2: i64,
) -> Result<VirasoroExpression> {
    require_triple(alpha, beta)?;
    check_indices(0, n2)?;
    let depth = physical_weight(beta, "beta")?;
    let x = ii11::x_coeff(beta, alpha)?;
    let t = annihilation_table(&x, false, depth as usize, n2 as usize);
    Ok(weighted(&t, depth, n2 as usize))
}

/// One summand `outer( left(v)_k right(w) )` of the formula.
#[derive(Clone, Debug, Serialize)]
pub struct ExpansionTerm {
    pub n1: i64,
    pub n2: i64,
    pub k: i64,
    pub p_index: i64,
    pub outer: VirasoroExpression,
    pub left: VirasoroExpression,
    pub right: VirasoroExpression,
}

impl fmt::Display for ExpansionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p_{} = [{}] applied to ([{}] v)_({}) ([{}] w)",
            self.p_index, self.outer, self.left, self.k, self.right
        )
    }
}

/// The finite list of summands for inputs of weights `wt_v`, `wt_w`.
///
/// The weights must be `1 - alpha^2/2` and `1 - beta^2/2`. With a primary
/// flag set, all terms with a positive annihilation index on that side are dropped.
pub fn expand_symbolic(
    alpha: &LatticeVector,
    beta: &LatticeVector,
    wt_v: i64,
    wt_w: i64,
    primary_v: bool,
    primary_w: bool,
) -> Result<Vec<ExpansionTerm>> {
    require_triple(alpha, beta)?;
    let (dv, dw) = (
        physical_weight(alpha, "alpha")?,
        physical_weight(beta, "beta")?,
    );
    if wt_v != dv || wt_w != dw {
        return Err(Error::Argument(format!(
            "weights ({wt_v}, {wt_w}) do not match 1 - alpha^2/2 = {dv}, 1 - beta^2/2 = {dw}"
        )));
    }
    let ab = ii11::dot(alpha, beta);
    let target = 1 - ii11::half_norm(&alpha.add(beta));
    let left_table =
        annihilation_table(&ii11::x_coeff(alpha, beta)?, true, dv as usize, dv as usize);
    let right_table = annihilation_table(
        &ii11::x_coeff(beta, alpha)?,
        false,
        dw as usize,
        dw as usize,
    );
    let p = p_table(&ii11::x_coeff(&alpha.add(beta), alpha)?, target.max(0));

    let mut terms = Vec::new();
    if target < 0 {
        return Ok(terms);
    }
    let n1_max = if primary_v { 0 } else { dv };
    let n2_max = if primary_w { 0 } else { dw };
    for n1 in 0..=n1_max {
        let left = weighted(&left_table, dv, n1 as usize);
        if left.is_zero() {
            continue;
        }
        for n2 in 0..=n2_max {
            let right = weighted(&right_table, dw, n2 as usize);
            if right.is_zero() {
                continue;
            }
            // a_k b vanishes for k >= wt a + wt b in a vertex algebra of CFT type
            let k_max = (dv - n1) + (dw - n2) - 1;
            let k_min = ab - n1 - n2;
            for k in k_min..=k_max {
                let p_index = n1 + n2 + k - ab;
                let outer = &p[p_index as usize];
                if outer.is_zero() {
                    continue;
                }
                terms.push(ExpansionTerm {
                    n1,
                    n2,
                    k,
                    p_index,
                    outer: outer.clone(),
                    left: left.clone(),
                    right: right.clone(),
                });
            }
        }
    }
    Ok(terms)
}

/// The result of evaluating the formula, with term statistics.
#[derive(Clone, Debug)]
pub struct BracketOutput {
    pub value: FockElement,
    pub weight: i64,
    pub terms: usize,
    pub nonzero_terms: usize,
}

/// Evaluates a list of summands on concrete states, checking that every
/// summand lands in weight `target`.
pub fn evaluate_terms(
    backend: &dyn VoaBackend,
    terms: &[ExpansionTerm],
    v: &FockElement,
    w: &FockElement,
    target: i64,
) -> Result<BracketOutput> {
    let mut lefts: FxHashMap<i64, FockElement> = FxHashMap::default();
    let mut rights: FxHashMap<i64, FockElement> = FxHashMap::default();
    let mut value = FockElement::new();
    let mut nonzero = 0;
    for t in terms {
        let a = lefts
            .entry(t.n1)
            .or_insert_with(|| t.left.apply(backend, v))
            .clone();
        let b = rights
            .entry(t.n2)
            .or_insert_with(|| t.right.apply(backend, w))
            .clone();
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let prod = backend.mode_product(&a, t.k, &b);
        if prod.is_zero() {
            continue;
        }
        let term = t.outer.apply(backend, &prod);
        if term.is_zero() {
            continue;
        }
        if backend.homogeneous_weight(&term) != Some(target) {
            return Err(Error::Invariant(format!(
                "term (n1={}, n2={}, k={}) does not lie in weight {target}",
                t.n1, t.n2, t.k
            )));
        }
        nonzero += 1;
        value.add_assign(&term);
    }
    Ok(BracketOutput {
        value,
        weight: target,
        terms: terms.len(),
        nonzero_terms: nonzero,
    })
}

/// The formula and the no-ghost maps need a vertex operator algebra of central charge 24.
pub fn require_central_charge(backend: &dyn VoaBackend) -> Result<()> {
    let c = backend.central_charge();
    if c != Q::from(24) {
        return Err(Error::Hypothesis(format!(
            "central charge {c}, expected 24"
        )));
    }
    Ok(())
}

fn require_weight(backend: &dyn VoaBackend, v: &FockElement, w: i64, name: &str) -> Result<()> {
    if !v.is_zero() && backend.homogeneous_weight(v) != Some(w) {
        return Err(Error::Argument(format!(
            "{name} must be homogeneous of weight {w}"
        )));
    }
    Ok(())
}

/// `{v, w}_{alpha,beta}` with term statistics.
pub fn bracket_detailed(
    backend: &dyn VoaBackend,
    alpha: &LatticeVector,
    beta: &LatticeVector,
    v: &FockElement,
    w: &FockElement,
) -> Result<BracketOutput> {
    require_central_charge(backend)?;
    require_triple(alpha, beta)?;
    let (dv, dw) = (
        physical_weight(alpha, "alpha")?,
        physical_weight(beta, "beta")?,
    );
    require_weight(backend, v, dv, "v")?;
    require_weight(backend, w, dw, "w")?;
    let terms = expand_symbolic(alpha, beta, dv, dw, false, false)?;
    let target = 1 - ii11::half_norm(&alpha.add(beta));
    evaluate_terms(backend, &terms, v, w, target)
}

/// `{v, w}_{alpha,beta}` evaluated by the explicit formula.
pub fn bracket(
    backend: &dyn VoaBackend,
    alpha: &LatticeVector,
    beta: &LatticeVector,
    v: &FockElement,
    w: &FockElement,
) -> Result<FockElement> {
    Ok(bracket_detailed(backend, alpha, beta, v, w)?.value)
}

/// The closed form for primary `v, w` of weight 2 and `alpha = beta`, `alpha^2 = -2`:
///
/// ```text
/// 1/2 (v_{-2} w - w_{-2} v) - 1/8 (L_{-2} + L_{-1}^2)(v_0 w - 1/2 L_{-1} v_1 w)
///   + 1/128 (L_{-2}^2 - 2 L_{-2} L_{-1}^2 - 7/3 L_{-1}^4) v_2 w
/// ```
pub fn weight_two_closed_form(
    backend: &dyn VoaBackend,
    v: &FockElement,
    w: &FockElement,
) -> FockElement {
    let half = Q::new(1, 2);
    let mut out = backend.mode_product(v, -2, w);
    out.add_scaled(&backend.mode_product(w, -2, v), &-Q::one());
    out = out.scaled(&half);

    let mut inner = backend.mode_product(v, 0, w);
    inner.add_scaled(
        &backend.virasoro(-1, &backend.mode_product(v, 1, w)),
        &-half,
    );
    let l2 = VirasoroExpression(
        [
            (VirasoroWord(vec![-2]), Q::one()),
            (VirasoroWord(vec![-1, -1]), Q::one()),
        ]
        .into_iter()
        .collect(),
    );
    out.add_scaled(&l2.apply(backend, &inner), &Q::new(-1, 8));

    let l4 = VirasoroExpression(
        [
            (VirasoroWord(vec![-2, -2]), Q::one()),
            (VirasoroWord(vec![-2, -1, -1]), Q::from(-2)),
            (VirasoroWord(vec![-1, -1, -1, -1]), Q::new(-7, 3)),
        ]
        .into_iter()
        .collect(),
    );
    out.add_scaled(
        &l4.apply(backend, &backend.mode_product(v, 2, w)),
        &Q::new(1, 128),
    );
    out
}
