use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::lattice::ii11;

fn e8() -> LatticeVoa {
    LatticeVoa::new(Lattice::e8()).unwrap()
}

fn hyp() -> LatticeVoa {
    LatticeVoa::new(Lattice::ii11()).unwrap()
}

fn unit_h(voa: &LatticeVoa, i: usize) -> HVector {
    LatticeVector::unit(voa.rank(), i).to_h()
}

// A random homogeneous-by-term element built from a few basis states.
fn random_element(
    voa: &LatticeVoa,
    momenta: &[LatticeVector],
    max_weight: i64,
    rng: &mut ChaCha8Rng,
) -> FockElement {
    let mut out = FockElement::new();
    for _ in 0..rng.gen_range(1..=3) {
        let a = &momenta[rng.gen_range(0..momenta.len())];
        let level_cap = max_weight - voa.half_norm(a);
        if level_cap < 0 {
            continue;
        }
        let level = rng.gen_range(0..=level_cap);
        let basis = voa.sector_basis(a, level);
        let s = basis[rng.gen_range(0..basis.len())].clone();
        out.add_term(s, Q::from(rng.gen_range(-3i64..=3)));
    }
    out
}

fn e8_momenta(voa: &LatticeVoa) -> Vec<LatticeVector> {
    let mut v = voa.lattice().vectors_up_to(2).unwrap();
    v.truncate(40);
    v
}

fn hyp_momenta() -> Vec<LatticeVector> {
    let mut out = Vec::new();
    for a in -1..=1 {
        for b in -1..=1 {
            out.push(ii11::vector(a, b));
        }
    }
    out
}

#[test]
fn e8_internal_basis_is_orthonormal() {
    let voa = e8();
    assert!(voa.is_orthogonal());
    for (i, row) in voa.internal_gram().iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            assert_eq!(*c, Q::from((i == j) as i64));
        }
    }
    assert!(!hyp().is_orthogonal());
}

#[test]
fn heisenberg_examples() {
    let voa = e8();
    let alpha = voa.lattice().short_vectors(2).unwrap()[3].clone();
    let h = unit_h(&voa, 1);
    let ea = voa.momentum_state(&alpha);
    let z = voa.lattice().inner(&alpha.to_h(), &h).unwrap();
    assert_eq!(voa.heis_act(&h, 0, &ea), ea.scaled(&z));

    let h2 = unit_h(&voa, 0);
    let v = voa.heis_act(&h2, -1, &voa.vacuum());
    let g = voa.lattice().inner(&h, &h2).unwrap();
    assert_eq!(voa.heis_act(&h, 1, &v), voa.vacuum().scaled(&g));
    let va = voa.heis_act(&h2, -1, &ea);
    assert!(voa.heis_act(&h, 2, &va).is_zero());
}

#[test]
fn heisenberg_commutator() {
    let voa = e8();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let moms = e8_momenta(&voa);
    for _ in 0..20 {
        let v = random_element(&voa, &moms, 3, &mut rng);
        let (i, j) = (rng.gen_range(0..8), rng.gen_range(0..8));
        let (h, k) = (unit_h(&voa, i), unit_h(&voa, j));
        for n in -2..=2i64 {
            for m in -2..=2i64 {
                let lhs = voa.heis_act(&h, n, &voa.heis_act(&k, m, &v))
                    - voa.heis_act(&k, m, &voa.heis_act(&h, n, &v));
                let rhs = if n + m == 0 {
                    v.scaled(&(Q::from(n) * voa.lattice().inner(&h, &k).unwrap()))
                } else {
                    FockElement::new()
                };
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn group_ring_examples() {
    let voa = e8();
    let vs = voa.lattice().short_vectors(2).unwrap();
    let (a, b) = (&vs[5], &vs[17]);
    let ea = voa.momentum_state(a);
    assert_eq!(
        voa.apply_e(b, &ea),
        voa.momentum_state(&a.add(b))
            .scaled(&Q::from(voa.eps(b, a)))
    );
    let zero = LatticeVector::zero(8);
    assert_eq!(voa.apply_e(&zero, &ea), ea);
    let back = voa.apply_e(&a.neg(), &voa.apply_e(a, &voa.vacuum()));
    assert_eq!(back, voa.vacuum().scaled(&Q::from(voa.eps(&a.neg(), a))));
    assert_eq!(voa.eps(&a.neg(), a), voa.eps(a, &a.neg()));
}

#[test]
fn schur_examples() {
    let voa = e8();
    let a = voa.lattice().short_vectors(2).unwrap()[0].clone();
    let vac = voa.vacuum();
    let s = |k| voa.apply_creation(&voa.schur_op(&a, k), &vac);
    let ah = a.to_h();
    let a1 = voa.heis_act(&ah, -1, &vac);
    assert_eq!(s(0), vac);
    assert_eq!(s(1), a1);
    let two = voa.heis_act(&ah, -1, &a1) + voa.heis_act(&ah, -2, &vac);
    assert_eq!(s(2), two.scaled(&Q::new(1, 2)));
    // k S_k = sum_m alpha(-m) S_{k-m}
    for k in 1..=4usize {
        let mut rhs = FockElement::new();
        for m in 1..=k {
            rhs.add_assign(&voa.heis_act(&ah, -(m as i64), &s(k - m)));
        }
        assert_eq!(s(k).scaled(&Q::from(k)), rhs);
    }
}

#[test]
fn schur_commutator() {
    // [h(n), S_k(alpha)] = (alpha, h) S_{k-n}(alpha) for n > 0
    let voa = e8();
    let a = voa.lattice().short_vectors(2).unwrap()[9].clone();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let moms = e8_momenta(&voa);
    for _ in 0..5 {
        let v = random_element(&voa, &moms, 2, &mut rng);
        let h = unit_h(&voa, rng.gen_range(0..8));
        let ah = voa.lattice().inner(&a.to_h(), &h).unwrap();
        for k in 0..=4usize {
            for n in 1..=2i64 {
                let sk = voa.schur_op(&a, k);
                let lhs = voa.heis_act(&h, n, &voa.apply_creation(&sk, &v))
                    - voa.apply_creation(&sk, &voa.heis_act(&h, n, &v));
                let rhs = if (k as i64) >= n {
                    voa.apply_creation(&voa.schur_op(&a, k - n as usize), &v)
                        .scaled(&ah)
                } else {
                    FockElement::new()
                };
                assert_eq!(lhs, rhs, "k={k} n={n}");
            }
        }
    }
}

fn check_virasoro(voa: &LatticeVoa, moms: &[LatticeVector], max_weight: i64, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = voa.central_charge();
    for _ in 0..6 {
        let v = random_element(voa, moms, max_weight, &mut rng);
        for n in -3..=3i64 {
            for m in -3..=3i64 {
                let lhs =
                    voa.virasoro(n, &voa.virasoro(m, &v)) - voa.virasoro(m, &voa.virasoro(n, &v));
                let mut rhs = voa.virasoro(n + m, &v).scaled(&Q::from(n - m));
                if n + m == 0 {
                    rhs.add_scaled(&v, &(&c * Q::new(n * n * n - n, 12)));
                }
                assert_eq!(lhs, rhs, "n={n} m={m}");
            }
        }
    }
}

#[test]
fn virasoro_relations_e8() {
    let voa = e8();
    check_virasoro(&voa, &e8_momenta(&voa), 3, 3);
}

#[test]
fn virasoro_relations_hyperbolic() {
    let voa = hyp();
    check_virasoro(&voa, &hyp_momenta(), 3, 4);
}

#[test]
fn virasoro_examples() {
    let voa = e8();
    let h = unit_h(&voa, 2);
    let v = voa.heis_act(&h, -2, &voa.vacuum());
    assert_eq!(voa.virasoro(0, &v), v.scaled(&Q::from(2)));
    let d = voa.lattice().short_vectors(4).unwrap()[0].clone();
    let ed = voa.momentum_state(&d);
    assert!(voa.virasoro(1, &ed).is_zero());
    assert_eq!(voa.virasoro(0, &ed), ed.scaled(&Q::from(2)));
}

#[test]
fn virasoro_is_mode_of_conformal_vector() {
    for voa in [e8(), hyp()] {
        let moms = if voa.rank() == 2 {
            hyp_momenta()
        } else {
            e8_momenta(&voa)
        };
        let omega = voa.conformal_vector();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let v = random_element(&voa, &moms, 2, &mut rng);
            for n in -3..=3 {
                assert_eq!(voa.mode_product(&omega, n + 1, &v), voa.virasoro(n, &v));
            }
        }
    }
}

#[test]
fn mode_product_examples() {
    let voa = e8();
    let vs = voa.lattice().short_vectors(2).unwrap();
    let (a, b) = (&vs[1], &vs[30]);
    let ab = voa.lattice().dot(a, b);
    for n in -4..=2i64 {
        let lhs = voa.mode_product(&voa.momentum_state(a), n, &voa.momentum_state(b));
        let idx = -n - 1 - ab;
        let rhs = if idx < 0 {
            FockElement::new()
        } else {
            let s = voa.schur_op(a, idx as usize);
            voa.apply_creation(&s, &voa.momentum_state(&a.add(b)))
                .scaled(&Q::from(voa.eps(a, b)))
        };
        assert_eq!(lhs, rhs, "n={n}");
    }
    let h = unit_h(&voa, 4);
    let hv = voa.heis_act(&h, -1, &voa.vacuum());
    let eb = voa.momentum_state(b);
    let z = voa.lattice().inner(&h, &b.to_h()).unwrap();
    assert_eq!(voa.mode_product(&hv, 0, &eb), eb.scaled(&z));

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let moms = e8_momenta(&voa);
    for _ in 0..5 {
        let v = random_element(&voa, &moms, 3, &mut rng);
        for n in -3..=3 {
            let expect = if n == -1 {
                v.clone()
            } else {
                FockElement::new()
            };
            assert_eq!(voa.mode_product(&voa.vacuum(), n, &v), expect);
        }
        // skew symmetry at the level of the creation property: v_{-1} |0> = v
        assert_eq!(voa.mode_product(&v, -1, &voa.vacuum()), v);
    }
}

fn max_mode(voa: &LatticeVoa, u: &FockElement, v: &FockElement) -> i64 {
    let mut best = i64::MIN;
    for a in u.keys() {
        for b in v.keys() {
            let floor = voa.half_norm(&a.momentum.add(&b.momentum));
            best = best.max(voa.weight(a) + voa.weight(b) - 1 - floor);
        }
    }
    best
}

fn borcherds_holds(
    voa: &LatticeVoa,
    u: &FockElement,
    v: &FockElement,
    w: &FockElement,
    m: i64,
    k: i64,
    l: i64,
) -> bool {
    let mut lhs = FockElement::new();
    let top_uv = max_mode(voa, u, v);
    let mut i = 0i64;
    while l + i <= top_uv {
        let uv = voa.mode_product(u, l + i, v);
        lhs.add_scaled(&voa.mode_product(&uv, m + k - i, w), &binomial(m, i as u64));
        i += 1;
    }
    let mut rhs = FockElement::new();
    let top_vw = max_mode(voa, v, w);
    let mut i = 0i64;
    while k + i <= top_vw {
        let vw = voa.mode_product(v, k + i, w);
        let c = binomial(l, i as u64) * Q::from(if i % 2 == 0 { 1 } else { -1 });
        rhs.add_scaled(&voa.mode_product(u, l + m - i, &vw), &c);
        i += 1;
    }
    let top_uw = max_mode(voa, u, w);
    let mut i = 0i64;
    while m + i <= top_uw {
        let uw = voa.mode_product(u, m + i, w);
        let sign = if (i + l) % 2 == 0 { -1 } else { 1 };
        let c = binomial(l, i as u64) * Q::from(sign);
        rhs.add_scaled(&voa.mode_product(v, k + l - i, &uw), &c);
        i += 1;
    }
    lhs == rhs
}

#[test]
fn borcherds_identity_small() {
    for (voa, moms) in [(hyp(), hyp_momenta()), {
        let v = e8();
        let m = e8_momenta(&v);
        (v, m)
    }] {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..4 {
            let u = random_element(&voa, &moms, 2, &mut rng);
            let v = random_element(&voa, &moms, 2, &mut rng);
            let w = random_element(&voa, &moms, 2, &mut rng);
            for m in -1..=1 {
                for k in -1..=1 {
                    for l in -1..=1 {
                        assert!(
                            borcherds_holds(&voa, &u, &v, &w, m, k, l),
                            "m={m} k={k} l={l}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn theta_examples() {
    let voa = e8();
    let a = voa.lattice().short_vectors(2).unwrap()[11].clone();
    let ea = voa.momentum_state(&a);
    let sign = -voa.eps(&a, &a.neg());
    assert_eq!(
        voa.theta_inv(&ea),
        voa.momentum_state(&a.neg()).scaled(&Q::from(sign))
    );
    let hv = voa.heis_act(&unit_h(&voa, 0), -1, &voa.vacuum());
    assert_eq!(voa.theta_inv(&hv), -hv.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let moms = e8_momenta(&voa);
    for _ in 0..10 {
        let v = random_element(&voa, &moms, 3, &mut rng);
        assert_eq!(voa.theta_inv(&voa.theta_inv(&v)), v);
    }
}

#[test]
fn theta_is_an_automorphism() {
    let voa = e8();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let moms = e8_momenta(&voa);
    for _ in 0..5 {
        let u = random_element(&voa, &moms, 2, &mut rng);
        let v = random_element(&voa, &moms, 2, &mut rng);
        for n in -2..=1 {
            let lhs = voa.theta_inv(&voa.mode_product(&u, n, &v));
            let rhs = voa.mode_product(&voa.theta_inv(&u), n, &voa.theta_inv(&v));
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn contravariant_form_examples() {
    let voa = e8();
    let vs = voa.lattice().short_vectors(2).unwrap();
    let (ea, eb) = (voa.momentum_state(&vs[0]), voa.momentum_state(&vs[1]));
    assert_eq!(voa.contravariant_form(&ea, &ea), Q::one());
    assert_eq!(voa.contravariant_form(&ea, &eb), Q::zero());
    let (h, k) = (unit_h(&voa, 0), unit_h(&voa, 7));
    let hv = voa.heis_act(&h, -1, &voa.vacuum());
    let kv = voa.heis_act(&k, -1, &voa.vacuum());
    assert_eq!(
        voa.contravariant_form(&hv, &kv),
        voa.lattice().inner(&h, &k).unwrap()
    );
}

#[test]
fn contravariant_adjointness() {
    for (voa, moms) in [(hyp(), hyp_momenta()), {
        let v = e8();
        let m = e8_momenta(&v);
        (v, m)
    }] {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..20 {
            let u = random_element(&voa, &moms, 3, &mut rng);
            let v = random_element(&voa, &moms, 3, &mut rng);
            let h = unit_h(&voa, rng.gen_range(0..voa.rank()));
            for n in 1..=3 {
                assert_eq!(
                    voa.contravariant_form(&voa.heis_act(&h, n, &u), &v),
                    voa.contravariant_form(&u, &voa.heis_act(&h, -n, &v))
                );
                assert_eq!(
                    voa.contravariant_form(&voa.virasoro(n, &u), &v),
                    voa.contravariant_form(&u, &voa.virasoro(-n, &v))
                );
            }
        }
    }
}

// (a_n b, c) = (-1)^{wt a} (b, a_{2 wt a - n - 2} c) for quasi-primary a.
#[test]
fn invariant_form_is_invariant() {
    for (voa, moms, sign) in [(hyp(), hyp_momenta(), -1), {
        let v = e8();
        let m = e8_momenta(&v);
        (v, m, 1)
    }] {
        assert_eq!(
            voa.invariant_form(&voa.vacuum(), &voa.vacuum(), sign),
            Q::from(sign)
        );
        let mut quasi = vec![
            voa.conformal_vector(),
            voa.heis_act(&unit_h(&voa, 0), -1, &voa.vacuum()),
        ];
        for m in &moms {
            if voa.half_norm(m) == 1 {
                quasi.push(voa.momentum_state(m));
                break;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for a in &quasi {
            let wa = voa.homogeneous_weight(a).unwrap();
            assert!(voa.virasoro(1, a).is_zero());
            for _ in 0..6 {
                let b = random_element(&voa, &moms, 2, &mut rng);
                let c = random_element(&voa, &moms, 3, &mut rng);
                for n in -2..=3 {
                    let lhs = voa.invariant_form(&voa.mode_product(a, n, &b), &c, sign);
                    let rhs =
                        voa.invariant_form(&b, &voa.mode_product(a, 2 * wa - n - 2, &c), sign)
                            * Q::from(if wa % 2 == 0 { 1 } else { -1 });
                    assert_eq!(lhs, rhs, "n={n}");
                }
            }
        }
    }
}

#[test]
fn parse_round_trip() {
    let voa = e8();
    let src = "1/2*h[0](-1)h[1](-1)vac - e[1,0,0,0,0,0,0,0] + 3*h[7](-2)e[0,1,0,0,0,0,0,0]";
    let v = voa.parse(src).unwrap();
    assert_eq!(v.len(), 11);
    let text = format_element(&v);
    assert_eq!(voa.parse(&text).unwrap(), v);
    assert!(matches!(voa.parse("h[9](-1)vac"), Err(Error::Parse { .. })));
    assert!(matches!(voa.parse("e[1,0]"), Err(Error::Parse { .. })));
    assert!(matches!(voa.parse("2*"), Err(Error::Parse { .. })));
    assert_eq!(voa.parse("-vac").unwrap(), -voa.vacuum());
}

#[test]
fn dims() {
    assert_eq!(graded_dims(&Lattice::e8(), 2).unwrap(), vec![1, 248, 4124]);
    assert_eq!(graded_dims(&Lattice::e8x3(), 1).unwrap(), vec![1, 744]);
    assert!(graded_dims(&Lattice::ii11(), 1).is_err());
    assert_eq!(coloured_partitions(1, 5), vec![1, 1, 2, 3, 5, 7]);
}

#[test]
fn sector_basis_counts() {
    let voa = e8();
    let zero = LatticeVector::zero(8);
    let p = coloured_partitions(8, 4);
    for level in 0..=4 {
        assert_eq!(
            voa.sector_basis(&zero, level).len() as u64,
            p[level as usize]
        );
    }
    let basis: Vec<FockElement> = voa
        .sector_basis(&zero, 2)
        .into_iter()
        .map(FockElement::basis)
        .collect();
    let gram = voa.form_matrix(&basis, 1);
    assert_eq!(linalg::rank(gram), basis.len());
    assert_eq!(rank_of(&basis), basis.len());
}
