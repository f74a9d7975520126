//! Brackets by covariant quantisation, and the harness comparing them with
//! the explicit formula.
//!
//! A state `v` of weight `1 - alpha^2/2` is lifted to the physical state
//! `eta_alpha(v)` of `V (x) V_{II_{1,1}}`; the bracket of two such states is
//! the zero mode product, pulled back with `eta^{-1}` and rescaled by the
//! cocycle value `eps(alpha, beta)`.

use std::fmt;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bracket;
use crate::error::{Error, Result};
use crate::lattice::{ii11, LatticeVector};
use crate::noghost::{TensorElement, TensorSpace, VoaBackend};
use crate::rational::Q;
use crate::sample::Sampler;
use crate::voa::{format_element, FockElement, LatticeVoa};

/// The quantisation side of the comparison, holding operator caches.
pub struct Oracle<'a> {
    pub space: TensorSpace<'a>,
}

fn sign(e: i64) -> Q {
    if e.rem_euclid(2) == 0 {
        Q::from(1)
    } else {
        Q::from(-1)
    }
}

impl<'a> Oracle<'a> {
    pub fn new(backend: &'a dyn VoaBackend) -> Result<Self> {
        bracket::require_central_charge(backend)?;
        Ok(Oracle {
            space: TensorSpace::new(backend),
        })
    }

    pub fn backend(&self) -> &'a dyn VoaBackend {
        self.space.backend
    }

    pub fn eps(&self, alpha: &LatticeVector, beta: &LatticeVector) -> Q {
        Q::from(self.space.ii.eps(alpha, beta))
    }

    pub fn eta(&self, alpha: &LatticeVector, v: &FockElement) -> Result<TensorElement> {
        self.space.eta(alpha, v)
    }

    /// `eps(alpha, beta) eta_{alpha+beta}^{-1}(x_0 y)` for physical `x`, `y` of momenta `alpha`, `beta`.
    pub fn bracket_physical(
        &self,
        alpha: &LatticeVector,
        beta: &LatticeVector,
        x: &TensorElement,
        y: &TensorElement,
    ) -> Result<FockElement> {
        let sum = alpha.add(beta);
        ii11::require_not_f_perp(&sum, "alpha+beta")?;
        let z = self.space.tensor_mode(x, 0, y);
        Ok(self.space.eta_inv(&sum, &z)?.scaled(&self.eps(alpha, beta)))
    }

    /// `{v, w}_{alpha,beta}` computed through the no-ghost maps.
    pub fn bracket(
        &self,
        alpha: &LatticeVector,
        beta: &LatticeVector,
        v: &FockElement,
        w: &FockElement,
    ) -> Result<FockElement> {
        ii11::require_not_f_perp(beta, "beta")?;
        let x = self.eta(alpha, v)?;
        let y = self.eta(beta, w)?;
        self.bracket_physical(alpha, beta, &x, &y)
    }

    /// The cyclic sum
    /// `eps(b,c) eps(a,b+c) {u,{v,w}} + eps(c,a) eps(b,c+a) {v,{w,u}} + eps(a,b) eps(c,a+b) {w,{u,v}}`,
    /// which vanishes by the Jacobi identity.
    pub fn jacobi(
        &self,
        momenta: [&LatticeVector; 3],
        states: [&FockElement; 3],
    ) -> Result<FockElement> {
        let mut out = FockElement::new();
        for i in 0..3 {
            let (a, b, c) = (momenta[i], momenta[(i + 1) % 3], momenta[(i + 2) % 3]);
            let (u, v, w) = (states[i], states[(i + 1) % 3], states[(i + 2) % 3]);
            let bc = b.add(c);
            let inner = self.bracket(b, c, v, w)?;
            let outer = self.bracket(a, &bc, u, &inner)?;
            out.add_scaled(&outer, &(self.eps(b, c) * self.eps(a, &bc)));
        }
        Ok(out)
    }
}

/// `{v, w}_{alpha,beta}` through the no-ghost maps, with fresh caches.
pub fn bracket_oracle(
    backend: &dyn VoaBackend,
    alpha: &LatticeVector,
    beta: &LatticeVector,
    v: &FockElement,
    w: &FockElement,
) -> Result<FockElement> {
    Oracle::new(backend)?.bracket(alpha, beta, v, w)
}

/// `(-1)^{(alpha,beta)+1}`, the sign relating `{v,w}_{alpha,beta}` and `{w,v}_{beta,alpha}`.
pub fn antisymmetry_sign(alpha: &LatticeVector, beta: &LatticeVector) -> Q {
    sign(ii11::dot(alpha, beta) + 1)
}

/// One bracket to compare; states are expressions in the state grammar.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketCase {
    pub name: String,
    pub alpha: [i64; 2],
    pub beta: [i64; 2],
    pub v: String,
    pub w: String,
    /// A recorded value both pipelines must also reproduce.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
}

impl BracketCase {
    pub fn alpha(&self) -> LatticeVector {
        ii11::vector(self.alpha[0], self.alpha[1])
    }

    pub fn beta(&self) -> LatticeVector {
        ii11::vector(self.beta[0], self.beta[1])
    }
}

/// A list of cases on a named lattice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Suite {
    pub lattice: String,
    pub cases: Vec<BracketCase>,
}

impl Suite {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Argument(format!("invalid suite: {e}")))
    }

    pub fn from_json_file(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json_str(&text)
    }
}

/// Seeded cases for the given momenta, drawn from the spanning sets of the
/// weight spaces: momentum states dressed with random Heisenberg words.
pub fn random_cases(
    voa: &LatticeVoa,
    alpha: &LatticeVector,
    beta: &LatticeVector,
    count: usize,
    seed: u64,
) -> Result<Vec<BracketCase>> {
    let sampler = Sampler::new(voa)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (wv, ww) = (1 - ii11::half_norm(alpha), 1 - ii11::half_norm(beta));
    if wv < 0 || ww < 0 {
        return Err(Error::Unsupported("negative weight".into()));
    }
    Ok((0..count)
        .map(|i| BracketCase {
            name: format!("{:?}x{:?}#{i}", alpha.0, beta.0),
            alpha: [alpha.0[0], alpha.0[1]],
            beta: [beta.0[0], beta.0[1]],
            v: format_element(&sampler.state(wv, 1 + i % 3, &mut rng)),
            w: format_element(&sampler.state(ww, 1 + (i + 1) % 3, &mut rng)),
            expected: None,
        })
        .collect())
}

/// The outcome of one case.
#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub name: String,
    pub alpha: [i64; 2],
    pub beta: [i64; 2],
    pub weight: i64,
    pub formula_terms: usize,
    pub result_terms: usize,
    pub formula_ms: u128,
    pub oracle_ms: u128,
    pub agrees: bool,
    pub antisymmetric: bool,
    pub oracle_antisymmetric: Option<bool>,
    pub difference: Option<String>,
    pub error: Option<String>,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.error.is_none()
            && self.agrees
            && self.antisymmetric
            && self.oracle_antisymmetric != Some(false)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub backend: String,
    pub cases: Vec<CaseReport>,
    pub passed: usize,
    pub failed: usize,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "backend {}: {} passed, {} failed",
            self.backend, self.passed, self.failed
        )?;
        for c in &self.cases {
            write!(
                f,
                "{} {} alpha={:?} beta={:?} weight={} terms={} formula={}ms oracle={}ms",
                if c.passed() { "PASS" } else { "FAIL" },
                c.name,
                c.alpha,
                c.beta,
                c.weight,
                c.result_terms,
                c.formula_ms,
                c.oracle_ms
            )?;
            if let Some(e) = &c.error {
                write!(f, " error: {e}")?;
            }
            if !c.antisymmetric {
                write!(f, " antisymmetry failed")?;
            }
            if c.oracle_antisymmetric == Some(false) {
                write!(f, " oracle antisymmetry failed")?;
            }
            if let Some(d) = &c.difference {
                write!(f, " difference: {d}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Options for [`equivalence_suite`].
#[derive(Clone, Copy, Debug, Default)]
pub struct SuiteOptions {
    /// Also check antisymmetry on the oracle side; doubles the oracle cost.
    pub oracle_antisymmetry: bool,
}

fn run_case(oracle: &Oracle, case: &BracketCase, opts: SuiteOptions) -> Result<CaseReport> {
    let backend = oracle.backend();
    let (alpha, beta) = (case.alpha(), case.beta());
    let v = backend.parse(&case.v)?;
    let w = backend.parse(&case.w)?;

    let t0 = Instant::now();
    let out = bracket::bracket_detailed(backend, &alpha, &beta, &v, &w)?;
    let formula_ms = t0.elapsed().as_millis();
    let swapped = bracket::bracket(backend, &beta, &alpha, &w, &v)?;
    let antisymmetric = out.value == swapped.scaled(&antisymmetry_sign(&alpha, &beta));

    let t1 = Instant::now();
    let reference = oracle.bracket(&alpha, &beta, &v, &w)?;
    let oracle_ms = t1.elapsed().as_millis();
    let oracle_antisymmetric = if opts.oracle_antisymmetry {
        let r = oracle.bracket(&beta, &alpha, &w, &v)?;
        Some(reference == r.scaled(&antisymmetry_sign(&alpha, &beta)))
    } else {
        None
    };

    let diff = |a: &FockElement, b: &FockElement| {
        let mut d = a.clone();
        d.add_scaled(b, &Q::from(-1));
        format_element(&d)
    };
    let mut difference = (out.value != reference).then(|| {
        format!(
            "formula {} oracle {} formula-oracle {}",
            format_element(&out.value),
            format_element(&reference),
            diff(&out.value, &reference)
        )
    });
    if let Some(e) = &case.expected {
        let e = backend.parse(e)?;
        if difference.is_none() && out.value != e {
            difference = Some(format!("formula-expected {}", diff(&out.value, &e)));
        }
    }
    let agrees = difference.is_none();
    Ok(CaseReport {
        name: case.name.clone(),
        alpha: case.alpha,
        beta: case.beta,
        weight: out.weight,
        formula_terms: out.nonzero_terms,
        result_terms: out.value.len(),
        formula_ms,
        oracle_ms,
        agrees,
        antisymmetric,
        oracle_antisymmetric,
        difference,
        error: None,
    })
}

/// Compares the formula with the oracle on every case.
pub fn equivalence_suite(
    backend: &dyn VoaBackend,
    cases: &[BracketCase],
    opts: SuiteOptions,
) -> Result<SuiteReport> {
    let oracle = Oracle::new(backend)?;
    let mut reports = Vec::with_capacity(cases.len());
    for case in cases {
        let report = run_case(&oracle, case, opts).unwrap_or_else(|e| CaseReport {
            name: case.name.clone(),
            alpha: case.alpha,
            beta: case.beta,
            weight: 1 - ii11::half_norm(&case.alpha().add(&case.beta())),
            formula_terms: 0,
            result_terms: 0,
            formula_ms: 0,
            oracle_ms: 0,
            agrees: false,
            antisymmetric: false,
            oracle_antisymmetric: None,
            difference: None,
            error: Some(format!("{}: {e}", e.code())),
        });
        reports.push(report);
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    Ok(SuiteReport {
        backend: backend.name(),
        failed: reports.len() - passed,
        passed,
        cases: reports,
    })
}
