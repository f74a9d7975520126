//! Identities linking the no-ghost operators with the bracket polynomials.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vbracket::bracket::{iota, p_operator};
use vbracket::combinatorics::b_poly;
use vbracket::lattice::{ii11, Lattice};
use vbracket::noghost::tensor;
use vbracket::sample::Sampler;
use vbracket::{FockElement, LatticeVector, LatticeVoa, TensorElement, TensorSpace, Q};

fn voa() -> LatticeVoa {
    LatticeVoa::new(Lattice::e8x3()).unwrap()
}

fn v(e: i64, f: i64) -> LatticeVector {
    ii11::vector(e, f)
}

fn sign(n: i64) -> Q {
    if n % 2 == 0 {
        Q::from(1)
    } else {
        Q::from(-1)
    }
}

#[test]
fn projection_of_schur_states() {
    let voa = voa();
    let space = TensorSpace::new(&voa);
    let sampler = Sampler::new(&voa).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let pairs = [
        (v(1, -1), v(1, -1)),
        (v(1, -1), v(3, -2)),
        (v(1, 0), v(2, -1)),
    ];
    for (gamma, delta) in &pairs {
        let u = sampler.state(2, 3, &mut rng);
        for k in 0..=3usize {
            let s = space.ii.apply_creation(
                &space.ii.schur_op(gamma, k),
                &space.ii.momentum_state(delta),
            );
            let x = tensor(&u, &s);
            let want = p_operator(gamma, delta, k as i64).unwrap().apply(&voa, &u);
            assert!(!want.is_zero());
            assert_eq!(space.proj_v(delta, &x).unwrap(), want, "k={k}");
        }
    }
}

// x (resp. y) is `v (x) e^alpha` (resp. `w (x) e^beta`); both sides are compared after `p_V`
#[test]
fn annihilation_modes_modulo_spurious_states() {
    let voa = voa();
    let space = TensorSpace::new(&voa);
    let sampler = Sampler::new(&voa).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let (alpha, beta) = (v(1, -1), v(1, 0));
    let sum = alpha.add(&beta);
    let x = space.lift(&sampler.state(2, 2, &mut rng), &alpha);
    let y = space.lift(&sampler.state(1, 2, &mut rng), &beta);
    let x_ab = ii11::x_coeff(&alpha, &beta).unwrap();
    let x_ba = ii11::x_coeff(&beta, &alpha).unwrap();
    let mut nonzero = 0;
    for n in 0..=3i64 {
        let dx = space.d_op(&alpha, -n, &x).unwrap();
        let dy = space.d_op(&beta, -n, &y).unwrap();
        let bl = sign(n) * b_poly(n as u64).eval(&x_ab);
        let br = b_poly(n as u64).eval(&x_ba);
        for k in (n - 1)..=(n + 1) {
            let plain = space
                .proj_v(&sum, &space.tensor_mode(&x, k - n, &y))
                .unwrap();
            let left = space.proj_v(&sum, &space.tensor_mode(&dx, k, &y)).unwrap();
            nonzero += usize::from(!left.is_zero());
            assert_eq!(left, plain.scaled(&bl), "left n={n} k={k}");
            let right = space.proj_v(&sum, &space.tensor_mode(&x, k, &dy)).unwrap();
            assert_eq!(right, plain.scaled(&br), "right n={n} k={k}");
        }
    }
    assert!(nonzero >= 8);
}

#[test]
fn modes_of_e_powers() {
    let voa = voa();
    let space = TensorSpace::new(&voa);
    let sampler = Sampler::new(&voa).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut nonzero = 0;
    for (alpha, beta) in [(v(1, -1), v(1, 0)), (v(1, -1), v(1, -1))] {
        let sum = alpha.add(&beta);
        let u = sampler.state(2, 3, &mut rng);
        let w = sampler.state(1 - ii11::half_norm(&beta), 2, &mut rng);
        let x = space.lift(&u, &alpha);
        let y = space.lift(&w, &beta);
        let mut ek = x.clone();
        for k in 0..=2i64 {
            for h in -1..=2i64 {
                let lhs = space.proj_v(&sum, &space.tensor_mode(&ek, h, &y)).unwrap();
                let mut terms = TensorElement::new();
                for n in 0..=2 {
                    let un: FockElement = iota(&alpha, &beta, k, n).unwrap().apply(&voa, &u);
                    if !un.is_zero() {
                        terms.add_assign(&space.tensor_mode(&space.lift(&un, &alpha), h - n, &y));
                    }
                }
                let rhs = space.proj_v(&sum, &terms).unwrap();
                nonzero += usize::from(!lhs.is_zero());
                assert_eq!(lhs, rhs, "k={k} h={h}");
            }
            ek = space.e_op(&alpha, &ek).unwrap();
        }
    }
    assert!(nonzero >= 12);
}
