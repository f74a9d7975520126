//! Built-in suite and the quick checks behind `selftest` and `verify`.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use vbracket::bracket::{self, p_operator, p_operator_direct};
use vbracket::combinatorics::{b_poly, proj_coeffs};
use vbracket::lattice::ii11;
use vbracket::oracle::{self, BracketCase, Suite};
use vbracket::sample::Sampler;
use vbracket::voa::{format_element, graded_dims};
use vbracket::{Lattice, LatticeVoa, Result, Q};

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

/// Seeded cases on E8x3 for `(e-f, e-f)` and `(e-f, 2e-f)`, plus two momentum pairs.
pub fn builtin_suite(seed: u64) -> Result<Suite> {
    let voa = LatticeVoa::new(Lattice::e8x3())?;
    let a = ii11::vector(1, -1);
    let b = ii11::vector(2, -1);
    let mut cases = oracle::random_cases(&voa, &a, &a, 5, seed)?;
    cases.extend(oracle::random_cases(&voa, &a, &b, 5, seed.wrapping_add(1))?);
    let sampler = Sampler::new(&voa)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // partners with (delta, delta') < 0 so that the products do not vanish early
    for i in 0..2 {
        let d = sampler.momentum(2, &mut rng);
        let e = loop {
            let e = sampler.momentum(2, &mut rng);
            if voa.lattice().dot(&d, &e) <= -2 * i {
                break e;
            }
        };
        let (x, y) = (voa.momentum_state(&d), voa.momentum_state(&e));
        cases.push(BracketCase {
            name: format!("momentum#{i}"),
            alpha: [1, -1],
            beta: [1, -1],
            v: format_element(&x),
            w: format_element(&y),
            expected: None,
        });
    }
    Ok(Suite {
        lattice: "E8x3".into(),
        cases,
    })
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    match f() {
        Ok((passed, detail)) => CheckResult {
            name,
            passed,
            detail,
        },
        Err(e) => CheckResult {
            name,
            passed: false,
            detail: format!("{}: {e}", e.code()),
        },
    }
}

pub fn run_all() -> Vec<CheckResult> {
    vec![
        check("short vectors", || {
            let n = Lattice::e8().short_vectors(2)?.len();
            Ok((n == 240, format!("E8 has {n} roots")))
        }),
        check("graded dimensions", || {
            let e8 = graded_dims(&Lattice::e8(), 1)?;
            let e8x3 = graded_dims(&Lattice::e8x3(), 1)?;
            let ok = e8 == [1, 248] && e8x3 == [1, 744];
            Ok((ok, format!("E8 {e8:?}, E8x3 {e8x3:?}")))
        }),
        check("b polynomials", || {
            let ok = (1..=10u64).all(|n| b_poly(n).eval(&Q::from(1)) == Q::from(1i64 << (n - 1)));
            Ok((ok, "b_n(1) = 2^(n-1) for n <= 10".into()))
        }),
        check("projection coefficients", || {
            let ok = (0..=8u64).all(|n| {
                let s = proj_coeffs(n);
                let eval = |x: i64| -> Q {
                    s.iter()
                        .enumerate()
                        .map(|(i, c)| c * &Q::from(x).pow(i as u32))
                        .sum()
                };
                eval(0) == Q::from(1) && (1..=n as i64).all(|m| eval(-m) == Q::from(0))
            });
            Ok((ok, "roots -1..-n, value 1 at 0, n <= 8".into()))
        }),
        check("p recursion", || {
            let pairs = [
                (ii11::vector(1, -1), ii11::vector(2, -1)),
                (ii11::vector(2, 0), ii11::vector(1, 1)),
                (ii11::vector(1, 0), ii11::vector(-3, 1)),
            ];
            for (g, d) in &pairs {
                for n in 0..=5 {
                    if p_operator(g, d, n)? != p_operator_direct(g, d, n)? {
                        return Ok((false, format!("mismatch at n = {n}")));
                    }
                }
            }
            Ok((true, "recursion equals composition sum for n <= 5".into()))
        }),
        check("formula against oracle", || {
            let voa = LatticeVoa::new(Lattice::e8x3())?;
            let sampler = Sampler::new(&voa)?;
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            let a = ii11::vector(1, -1);
            let (v, w) = (sampler.primary(2, &mut rng), sampler.primary(2, &mut rng));
            let f = bracket::bracket(&voa, &a, &a, &v, &w)?;
            let o = oracle::bracket_oracle(&voa, &a, &a, &v, &w)?;
            let closed = bracket::weight_two_closed_form(&voa, &v, &w);
            let ok = f == o && f == closed;
            Ok((ok, format!("{} terms in weight 5", f.len())))
        }),
    ]
}
