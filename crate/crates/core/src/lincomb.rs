//! Finite formal linear combinations over [`Q`].

use std::fmt::Debug;
use std::hash::Hash;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;
use rustc_hash::FxHashMap;

use crate::rational::Q;

/// A finite map from basis keys to non-zero rational coefficients.
#[derive(Clone, Debug)]
pub struct LinComb<K: Eq + Hash> {
    terms: FxHashMap<K, Q>,
}

impl<K: Eq + Hash> Default for LinComb<K> {
    fn default() -> Self {
        LinComb {
            terms: FxHashMap::default(),
        }
    }
}

impl<K: Eq + Hash> PartialEq for LinComb<K> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}
impl<K: Eq + Hash> Eq for LinComb<K> {}

impl<K: Clone + Eq + Hash> LinComb<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        let mut terms = FxHashMap::default();
        terms.reserve(n);
        LinComb { terms }
    }

    pub fn basis(key: K) -> Self {
        Self::term(key, Q::from(1))
    }

    pub fn term(key: K, coeff: Q) -> Self {
        let mut out = Self::new();
        out.add_term(key, coeff);
        out
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &K) -> Q {
        self.terms.get(key).cloned().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Q)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (K, Q)> {
        self.terms.into_iter()
    }

    pub fn add_term(&mut self, key: K, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    /// `self += scale * other`
    pub fn add_scaled(&mut self, other: &Self, scale: &Q) {
        if scale.is_zero() {
            return;
        }
        for (k, c) in other.iter() {
            self.add_term(k.clone(), c * scale);
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, c) in other.iter() {
            self.add_term(k.clone(), c.clone());
        }
    }

    pub fn scaled(&self, scale: &Q) -> Self {
        if scale.is_zero() {
            return Self::new();
        }
        LinComb {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c * scale))
                .collect(),
        }
    }

    /// Applies a linear map given on basis keys.
    pub fn map_linear<K2, F>(&self, mut f: F) -> LinComb<K2>
    where
        K2: Clone + Eq + Hash,
        F: FnMut(&K) -> LinComb<K2>,
    {
        let mut out = LinComb::new();
        for (k, c) in self.iter() {
            out.add_scaled(&f(k), c);
        }
        out
    }

    /// Keeps only the terms whose key satisfies `pred`.
    pub fn filter<F: FnMut(&K) -> bool>(&self, mut pred: F) -> Self {
        LinComb {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| pred(k))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// Terms sorted by key, for deterministic output.
    pub fn sorted_terms(&self) -> Vec<(K, Q)>
    where
        K: Ord,
    {
        let mut v: Vec<_> = self
            .terms
            .iter()
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }
}

impl<K: Clone + Eq + Hash> FromIterator<(K, Q)> for LinComb<K> {
    fn from_iter<I: IntoIterator<Item = (K, Q)>>(iter: I) -> Self {
        let mut out = LinComb::new();
        for (k, c) in iter {
            out.add_term(k, c);
        }
        out
    }
}

impl<K: Clone + Eq + Hash> Add for LinComb<K> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        if self.len() < rhs.len() {
            let mut r = rhs;
            r.add_assign(&self);
            return r;
        }
        self.add_assign(&rhs);
        self
    }
}

impl<'a, K: Clone + Eq + Hash> Add for &'a LinComb<K> {
    type Output = LinComb<K>;
    fn add(self, rhs: Self) -> LinComb<K> {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl<K: Clone + Eq + Hash> Sub for LinComb<K> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self.add_scaled(&rhs, &Q::from(-1));
        self
    }
}

impl<'a, K: Clone + Eq + Hash> Sub for &'a LinComb<K> {
    type Output = LinComb<K>;
    fn sub(self, rhs: Self) -> LinComb<K> {
        let mut out = self.clone();
        out.add_scaled(rhs, &Q::from(-1));
        out
    }
}

impl<K: Clone + Eq + Hash> Neg for LinComb<K> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scaled(&Q::from(-1))
    }
}

impl<'a, K: Clone + Eq + Hash + Debug> Neg for &'a LinComb<K> {
    type Output = LinComb<K>;
    fn neg(self) -> LinComb<K> {
        self.scaled(&Q::from(-1))
    }
}
