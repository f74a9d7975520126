use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vbracket::bracket::{self, p_operator, p_operator_direct, VirasoroWord};
use vbracket::combinatorics::{all_compositions, b_poly, proj_coeffs};
use vbracket::lattice::{ii11, Lattice};
use vbracket::oracle::antisymmetry_sign;
use vbracket::sample::Sampler;
use vbracket::voa::format_element;
use vbracket::{LatticeVoa, Q};

fn q() -> impl Strategy<Value = Q> {
    (-50i64..50, 1i64..20).prop_map(|(p, d)| Q::new(p, d))
}

// momenta outside f-perp with 1 - alpha^2/2 in 0..=2
fn momentum() -> impl Strategy<Value = (i64, i64)> {
    prop_oneof![
        Just((1, 0)),
        Just((1, -1)),
        Just((2, -1)),
        Just((-1, 0)),
        Just((-1, 1)),
        Just((2, 0))
    ]
}

proptest! {
    #[test]
    fn rationals_form_a_field(a in q(), b in q(), c in q()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b) * &b, a.clone());
        }
        prop_assert_eq!(a.to_string().parse::<Q>().unwrap(), a);
    }

    #[test]
    fn virasoro_words_round_trip(modes in prop::collection::vec(-4i64..4, 0..6)) {
        let w = VirasoroWord(modes);
        prop_assert_eq!(w.to_string().parse::<VirasoroWord>().unwrap(), w);
    }

    #[test]
    fn projection_polynomial_roots(n in 0u64..9) {
        let s = proj_coeffs(n);
        let eval = |x: i64| {
            let mut acc = Q::from(0);
            let mut pow = Q::from(1);
            for c in &s {
                acc += c * &pow;
                pow *= Q::from(x);
            }
            acc
        };
        prop_assert_eq!(eval(0), Q::from(1));
        for m in 1..=n as i64 {
            prop_assert_eq!(eval(-m), Q::from(0));
        }
    }

    #[test]
    fn b_polynomials_count_compositions(n in 1u64..11) {
        prop_assert_eq!(b_poly(n).eval(&Q::from(1)), Q::from(1i64 << (n - 1)));
        prop_assert_eq!(all_compositions(n as i64).len(), 1usize << (n - 1));
    }

    #[test]
    fn p_recursion_matches_compositions(n in 0i64..6, a in momentum(), b in momentum()) {
        let (g, d) = (ii11::vector(a.0, a.1), ii11::vector(b.0, b.1));
        prop_assert_eq!(p_operator(&g, &d, n).unwrap(), p_operator_direct(&g, &d, n).unwrap());
    }

    #[test]
    fn expansion_respects_the_grading(a in momentum(), b in momentum()) {
        let (alpha, beta) = (ii11::vector(a.0, a.1), ii11::vector(b.0, b.1));
        prop_assume!(ii11::pair_f(&alpha.add(&beta)) != 0);
        let (wv, ww) = (1 - ii11::half_norm(&alpha), 1 - ii11::half_norm(&beta));
        let terms = bracket::expand_symbolic(&alpha, &beta, wv, ww, false, false).unwrap();
        for t in &terms {
            prop_assert!(t.p_index >= 0 && t.n1 <= wv && t.n2 <= ww);
            prop_assert_eq!(t.outer.degree(), Some(t.p_index));
            prop_assert_eq!(t.left.degree(), Some(-t.n1));
            prop_assert_eq!(t.right.degree(), Some(-t.n2));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sampled_states_round_trip_through_text(seed in any::<u64>(), w in 0i64..3) {
        let voa = LatticeVoa::new(Lattice::e8x3()).unwrap();
        let sampler = Sampler::new(&voa).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = sampler.state(w, 3, &mut rng);
        prop_assert_eq!(voa.parse(&format_element(&s)).unwrap(), s);
    }

    #[test]
    fn formula_is_antisymmetric(seed in any::<u64>(), a in momentum(), b in momentum()) {
        let (alpha, beta) = (ii11::vector(a.0, a.1), ii11::vector(b.0, b.1));
        prop_assume!(ii11::pair_f(&alpha.add(&beta)) != 0);
        let voa = LatticeVoa::new(Lattice::e8x3()).unwrap();
        let sampler = Sampler::new(&voa).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sampler.state(1 - ii11::half_norm(&alpha), 2, &mut rng);
        let y = sampler.state(1 - ii11::half_norm(&beta), 2, &mut rng);
        let lhs = bracket::bracket(&voa, &alpha, &beta, &x, &y).unwrap();
        let rhs = bracket::bracket(&voa, &beta, &alpha, &y, &x).unwrap();
        prop_assert_eq!(lhs, rhs.scaled(&antisymmetry_sign(&alpha, &beta)));
    }
}
