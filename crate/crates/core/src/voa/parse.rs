//! Parser for state expressions such as `1/2*h[0](-1)h[1](-1)vac - e[1,0]`.
//!
//! ```text
//! element := term (("+"|"-") term)*
//! term    := [rational "*"] factor+
//! factor  := "vac" | "e[" int ("," int)* "]" | "h[" int "](" int ")" | "b[" int "](" int ")"
//! ```
//!
//! `h[i]` is the i-th lattice basis vector, `b[i]` the i-th internal basis
//! direction (the form used when printing). Factors act on everything to
//! their right; a term without `vac` or `e[..]` ends in the vacuum.

use num_traits::One;

use super::{FockElement, LatticeVoa};
use crate::error::{Error, Result};
use crate::lattice::{HVector, LatticeVector};
use crate::rational::Q;

enum Factor {
    Vac,
    E(LatticeVector),
    H(usize, i64),
    B(usize, i64),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    rank: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected '{s}'"))
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        let neg = self.eat("-");
        self.skip_ws();
        match self.digits() {
            Some(d) => match d.parse::<i64>() {
                Ok(v) => Ok(if neg { -v } else { v }),
                Err(_) => {
                    self.pos = start;
                    self.err("integer out of range")
                }
            },
            None => self.err("expected integer"),
        }
    }

    fn index(&mut self) -> Result<usize> {
        let at = self.pos;
        let i = self.int()?;
        if i < 0 || i as usize >= self.rank {
            self.pos = at;
            return self.err(format!("index {i} out of range for rank {}", self.rank));
        }
        Ok(i as usize)
    }

    fn factor(&mut self) -> Result<Option<Factor>> {
        if self.eat("vac") {
            return Ok(Some(Factor::Vac));
        }
        if self.eat("e[") {
            let at = self.pos;
            let mut coords = vec![self.int()?];
            while self.eat(",") {
                coords.push(self.int()?);
            }
            self.expect("]")?;
            if coords.len() != self.rank {
                self.pos = at;
                return self.err(format!(
                    "momentum has {} coordinates, expected {}",
                    coords.len(),
                    self.rank
                ));
            }
            return Ok(Some(Factor::E(LatticeVector(coords))));
        }
        for (tag, internal) in [("h[", false), ("b[", true)] {
            if self.eat(tag) {
                let i = self.index()?;
                self.expect("](")?;
                let n = self.int()?;
                self.expect(")")?;
                return Ok(Some(if internal {
                    Factor::B(i, n)
                } else {
                    Factor::H(i, n)
                }));
            }
        }
        Ok(None)
    }

    fn coefficient(&mut self) -> Result<Q> {
        self.skip_ws();
        let start = self.pos;
        let Some(n) = self.digits() else {
            return Ok(Q::one());
        };
        let mut text = n.to_string();
        if self.eat("/") {
            self.skip_ws();
            match self.digits() {
                Some(d) => {
                    text.push('/');
                    text.push_str(d);
                }
                None => return self.err("expected denominator"),
            }
        }
        self.expect("*")?;
        text.parse::<Q>().map_err(|e| Error::Parse {
            pos: start,
            msg: e.to_string(),
        })
    }
}

/// Parses a state expression for the given lattice vertex algebra.
pub fn parse_element(voa: &LatticeVoa, src: &str) -> Result<FockElement> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        rank: voa.rank(),
    };
    let mut out = FockElement::new();
    let mut sign = Q::one();
    if p.eat("-") {
        sign = -sign;
    } else {
        p.eat("+");
    }
    loop {
        let coeff = &sign * p.coefficient()?;
        let mut factors = Vec::new();
        while let Some(f) = p.factor()? {
            factors.push(f);
        }
        if factors.is_empty() {
            return p.err("expected factor");
        }
        let mut v = voa.vacuum();
        for f in factors.iter().rev() {
            v = match f {
                Factor::Vac => v,
                Factor::E(a) => voa.apply_e(a, &v),
                Factor::H(i, n) => {
                    let h = HVector(LatticeVector::unit(voa.rank(), *i).to_h().0);
                    voa.heis_act(&h, *n, &v)
                }
                Factor::B(i, n) => voa.heis_act_internal(voa.direction(*i), *n, &v),
            };
        }
        out.add_scaled(&v, &coeff);
        match p.peek() {
            None => break,
            Some(b'+') => {
                p.pos += 1;
                sign = Q::one();
            }
            Some(b'-') => {
                p.pos += 1;
                sign = -Q::one();
            }
            Some(_) => return p.err("unexpected character"),
        }
    }
    Ok(out)
}
