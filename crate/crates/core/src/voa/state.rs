use std::fmt;

use smallvec::SmallVec;

use crate::lattice::LatticeVector;
use crate::lincomb::LinComb;

/// The creation operator `b_dir(-mode)` on an internal basis direction of `h`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter {
    pub mode: u16,
    pub dir: u16,
}

impl Letter {
    pub fn new(mode: i64, dir: usize) -> Letter {
        Letter {
            mode: mode as u16,
            dir: dir as u16,
        }
    }
}

/// A sorted multiset of creation letters.
pub type Word = SmallVec<[Letter; 8]>;

pub fn insert_letter(word: &Word, l: Letter) -> Word {
    let mut w = word.clone();
    let pos = w.partition_point(|x| *x <= l);
    w.insert(pos, l);
    w
}

pub fn merge_words(a: &Word, b: &Word) -> Word {
    let mut out = Word::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub fn word_level(word: &Word) -> i64 {
    word.iter().map(|l| l.mode as i64).sum()
}

/// Range of positions holding letters of the given mode.
pub fn mode_range(word: &Word, mode: u16) -> std::ops::Range<usize> {
    let lo = word.partition_point(|l| l.mode < mode);
    let hi = word.partition_point(|l| l.mode <= mode);
    lo..hi
}

/// A canonical Fock basis state `b_{i1}(-n1) ... b_{ik}(-nk) e^alpha`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FockBasisState {
    pub momentum: LatticeVector,
    pub word: Word,
}

impl FockBasisState {
    pub fn vacuum(rank: usize) -> Self {
        FockBasisState {
            momentum: LatticeVector::zero(rank),
            word: Word::new(),
        }
    }

    pub fn momentum_state(alpha: LatticeVector) -> Self {
        FockBasisState {
            momentum: alpha,
            word: Word::new(),
        }
    }

    pub fn level(&self) -> i64 {
        word_level(&self.word)
    }

    pub fn with_letter(&self, l: Letter) -> Self {
        FockBasisState {
            momentum: self.momentum.clone(),
            word: insert_letter(&self.word, l),
        }
    }

    pub fn without(&self, pos: usize) -> Self {
        let mut word = self.word.clone();
        word.remove(pos);
        FockBasisState {
            momentum: self.momentum.clone(),
            word,
        }
    }

    pub fn without_two(&self, p: usize, q: usize) -> Self {
        let word = self
            .word
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != p && *i != q)
            .map(|(_, l)| *l)
            .collect();
        FockBasisState {
            momentum: self.momentum.clone(),
            word,
        }
    }

    pub fn replace(&self, pos: usize, l: Letter) -> Self {
        let mut word = self.word.clone();
        word.remove(pos);
        let at = word.partition_point(|x| *x <= l);
        word.insert(at, l);
        FockBasisState {
            momentum: self.momentum.clone(),
            word,
        }
    }
}

impl fmt::Display for FockBasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.word {
            write!(f, "b[{}](-{})", l.dir, l.mode)?;
        }
        if self.momentum.is_zero() {
            write!(f, "vac")
        } else {
            write!(f, "e[")?;
            for (i, c) in self.momentum.0.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, "]")
        }
    }
}

pub type FockElement = LinComb<FockBasisState>;

/// Renders an element in the state-expression grammar, terms in canonical order.
pub fn format_element(v: &FockElement) -> String {
    let terms = v.sorted_terms();
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (s, c)) in terms.iter().enumerate() {
        let (neg, abs) = (c.is_negative(), c.abs());
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if abs != crate::rational::Q::from(1) {
            out.push_str(&format!("{abs}*"));
        }
        out.push_str(&s.to_string());
    }
    out
}
