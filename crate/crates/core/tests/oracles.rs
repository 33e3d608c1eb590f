//! Cross-checks of the crate against brute-force oracles, and
//! property-based invariants.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use slgrowth::energy::{additive_energy, dilate, ScalarSet};
use slgrowth::growth::{enumerate_group, product_set, standard_generators, triple_product, word_ball};
use slgrowth::trace_lab::{f_of, powers};
use slgrowth::vandermonde::{elementary_symmetric, verify_vander_identity};
use slgrowth::{Budget, ElementSet, SquareMatrix};

#[test]
fn charpoly_matches_interpolation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for &(n, p) in &[(2, 5), (3, 7), (4, 31), (5, 101), (6, 13)] {
        let f = field(p);
        for _ in 0..300 {
            let g = SquareMatrix::random_sl(n, f, &mut rng);
            let full = charpoly_by_interpolation(&g);
            assert_eq!(full[n], 1);
            let expected_const = if n % 2 == 0 { 1 } else { p as u64 - 1 };
            assert_eq!(full[0], expected_const);
            assert_eq!(g.char_poly().unwrap().coeffs(), &kappa_oracle(&g)[..]);
        }
    }
}

#[test]
fn classify_matches_eigenspace_oracle_exhaustively() {
    for p in odd_primes_between(3, 13) {
        let g = enumerate_group(2, field(p), Budget::default()).unwrap();
        for h in g.iter() {
            assert_eq!(h.classify_semisimple(), classify_oracle(h), "{h:?}");
        }
    }
}

#[test]
fn classify_matches_oracle_on_sl3_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for p in odd_primes_between(5, 13) {
        for _ in 0..2000 {
            let g = SquareMatrix::random_sl(3, field(p), &mut rng);
            assert_eq!(g.classify_semisimple(), classify_oracle(&g), "{g:?}");
        }
    }
}

#[test]
fn charpoly_of_diagonal_gives_signed_elementary_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    use rand::Rng;
    let f = field(101);
    for n in 2..=6 {
        for _ in 0..200 {
            let mut d: Vec<u32> = (0..n - 1).map(|_| rng.gen_range(1..101)).collect();
            let prod = d.iter().fold(1u64, |acc, &x| acc * x as u64 % 101);
            d.push(modinv(prod, 101) as u32);
            let g = SquareMatrix::diagonal(f, &d);
            let kappa = g.char_poly().unwrap();
            let s: Vec<_> = d.iter().map(|&x| f.elem(x)).collect();
            // κ = (a_{n-1}, ..., a_1) and a_{n-m} = (-1)^m e_m
            for m in 1..n {
                let e = elementary_symmetric(&s, m).unwrap();
                let signed = if m % 2 == 0 { e } else { -e };
                assert_eq!(kappa.coeffs()[m - 1], signed.value());
            }
        }
    }
}

/// Cyclic-product determinants |q_k^j| on the ∏ r = 1 variety are
/// generically nonzero; the sampled failure rate must stay below 20%.
#[test]
fn cyclic_vandermonde_nonvanishing_rate() {
    use rand::Rng;
    use slgrowth::vandermonde::cyclic_vandermonde_det;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let f = field(101);
    let (mut zero, mut total) = (0, 0);
    for _ in 0..2000 {
        let a = rng.gen_range(1..101u64);
        let b = rng.gen_range(1..101u64);
        let r = [a, b, modinv(a * b % 101, 101)].map(|x| f.elem(x as u32));
        for l in 1..3 {
            for i in 0..=3 {
                total += 1;
                if cyclic_vandermonde_det(&r, l, i).unwrap().is_zero() {
                    zero += 1;
                }
            }
        }
    }
    let rate = zero as f64 / total as f64;
    println!("cyclic Vandermonde vanishing rate at p=101, n=3: {rate:.4} ({zero}/{total})");
    assert!(rate < 0.2);
}

#[test]
fn classify_on_structured_sl3_elements() {
    let f = field(7);
    let cases: &[(&[&[i64]], &str)] = &[
        (&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], "scalar"),
        (&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]], "scalar 2, det 8 = 1"),
        (&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]], "transvection"),
        (&[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]], "regular unipotent"),
        (&[&[3, 0, 0], &[0, 3, 0], &[0, 0, 4]], "repeated eigenvalue"),
        (&[&[3, 1, 0], &[0, 3, 0], &[0, 0, 4]], "Jordan block"),
        (&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 4]], "split regular"),
        (&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]], "permutation"),
    ];
    for (rows, label) in cases {
        let g = SquareMatrix::from_rows(f, rows).unwrap();
        assert_eq!(g.classify_semisimple(), classify_oracle(&g), "{label}");
    }
}

#[test]
fn group_closure_matches_brute_force() {
    let closure = enumerate_group(2, field(5), Budget::default()).unwrap();
    let brute = ElementSet::new(2, field(5), brute_force_sl(2, 5)).unwrap();
    assert_eq!(closure, brute);
}

#[test]
#[ignore = "closure of 5.6 million elements; run manually"]
fn sl3_f7_standard_generators_generate() {
    let g = enumerate_group(3, field(7), Budget::default()).unwrap();
    assert_eq!(g.len(), 343 * 48 * 342);
}

#[test]
fn word_ball_matches_naive_products() {
    let f = field(7);
    let a = standard_generators(2, f);
    let s = a.symmetrized().union(&ElementSet::identity(2, f));
    let mut naive = s.clone();
    for r in 1..=4u32 {
        assert_eq!(word_ball(&a, r, Budget::default()).unwrap(), naive, "radius {r}");
        naive = product_set(&naive, &s, Budget::default()).unwrap();
    }
}

#[test]
fn triple_product_matches_naive_enumeration() {
    let f = field(11);
    let a = word_ball(&standard_generators(2, f), 2, Budget::default()).unwrap();
    let mut naive = BTreeSet::new();
    for x in a.iter() {
        for y in a.iter() {
            for z in a.iter() {
                naive.insert((&(x * y) * z).encode());
            }
        }
    }
    let fast: BTreeSet<Vec<u8>> = triple_product(&a, Budget::default()).unwrap().keys().collect();
    assert_eq!(fast, naive);
}

#[test]
fn energy_matches_sum_representation_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    use rand::Rng;
    for _ in 0..50 {
        let p = [7u32, 101, 1009][rng.gen_range(0..3)];
        let x: Vec<u32> = (0..rng.gen_range(0..60)).map(|_| rng.gen_range(0..p)).collect();
        let y: Vec<u32> = (0..rng.gen_range(0..60)).map(|_| rng.gen_range(0..p)).collect();
        let xs = ScalarSet::new(field(p), x.iter().copied()).unwrap();
        let ys = ScalarSet::new(field(p), y.iter().copied()).unwrap();
        let xd: Vec<u32> = xs.iter().collect();
        let yd: Vec<u32> = ys.iter().collect();
        assert_eq!(additive_energy(&xs, &ys), energy_oracle(&xd, &yd, p));
    }
}

/// Regular semisimple elements of SL_2(F_p) with equal κ are conjugate:
/// every κ-class is a single orbit under conjugation.
#[test]
fn kappa_classes_of_regular_elements_do_not_split_in_sl2() {
    for p in odd_primes_between(3, 13) {
        let g = enumerate_group(2, field(p), Budget::default()).unwrap();
        let mut classes: BTreeMap<Vec<u32>, Vec<&SquareMatrix>> = BTreeMap::new();
        for h in g.iter().filter(|h| h.is_regular_semisimple()) {
            classes.entry(h.char_poly().unwrap().coeffs().to_vec()).or_default().push(h);
        }
        for (kappa, members) in classes {
            let rep = members[0];
            let orbit: BTreeSet<SquareMatrix> =
                g.iter().map(|x| &(x * rep) * &x.inverse().unwrap()).collect();
            assert_eq!(orbit.len(), members.len(), "p={p} kappa={kappa:?}");
        }
    }
}

fn sl_strategy(n: usize, p: u32) -> impl Strategy<Value = SquareMatrix> {
    any::<u64>().prop_map(move |seed| {
        SquareMatrix::random_sl(n, field(p), &mut ChaCha8Rng::seed_from_u64(seed))
    })
}

fn dims_and_primes() -> impl Strategy<Value = (usize, u32)> {
    (2usize..=4, prop::sample::select(vec![7u32, 31, 101, 65521]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_and_encoding_roundtrip((n, p) in dims_and_primes(), seed in any::<u64>()) {
        let g = SquareMatrix::random_sl(n, field(p), &mut ChaCha8Rng::seed_from_u64(seed));
        let inv = g.inverse().unwrap();
        prop_assert!((&g * &inv).is_identity());
        prop_assert_eq!(SquareMatrix::decode(&g.encode(), n, field(p)).unwrap(), g.clone());
        prop_assert_eq!(g.det(), 1);
    }

    #[test]
    fn top_kappa_coefficient_is_minus_trace((n, p) in dims_and_primes(), seed in any::<u64>()) {
        let g = SquareMatrix::random_sl(n, field(p), &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(g.char_poly().unwrap().coeffs()[0], (p - g.trace()) % p);
    }

    #[test]
    fn kappa_is_conjugation_invariant(g in sl_strategy(3, 31), h in sl_strategy(3, 31)) {
        let conj = &(&h * &g) * &h.inverse().unwrap();
        prop_assert_eq!(conj.char_poly().unwrap(), g.char_poly().unwrap());
        prop_assert_eq!(conj.classify_semisimple(), g.classify_semisimple());
    }

    #[test]
    fn encoding_order_matches_matrix_order(g in sl_strategy(2, 257), h in sl_strategy(2, 257)) {
        prop_assert_eq!(g.cmp(&h), g.encode().cmp(&h.encode()));
    }

    #[test]
    fn f_relation_holds(t in sl_strategy(3, 101), g in sl_strategy(3, 101)) {
        prop_assume!(t.is_regular_semisimple());
        let fv = f_of(&t).unwrap();
        let tr: Vec<u32> = powers(&t).iter().map(|tk| (tk * &g).trace()).collect();
        prop_assert_eq!(fv.dot(field(101), &tr[..3]), tr[3]);
    }

    #[test]
    fn vander_identity_holds(s in prop::collection::vec(0u32..31, 1..=6), i in 0usize..=6) {
        let f = field(31);
        let s: Vec<_> = s.into_iter().map(|x| f.elem(x)).collect();
        prop_assume!(i <= s.len());
        prop_assert!(verify_vander_identity(&s, i).unwrap());
    }

    #[test]
    fn elementary_symmetric_matches_brute(s in prop::collection::vec(0u64..101, 1..=6)) {
        let f = field(101);
        let elems: Vec<_> = s.iter().map(|&x| f.elem(x as u32)).collect();
        for m in 0..=s.len() {
            prop_assert_eq!(
                elementary_symmetric(&elems, m).unwrap().value() as u64,
                elementary_symmetric_brute(&s, m, 101)
            );
        }
    }

    #[test]
    fn energy_bounds(x in prop::collection::btree_set(0u32..101, 1..40),
                     y in prop::collection::btree_set(0u32..101, 1..40)) {
        let xs = ScalarSet::new(field(101), x.iter().copied()).unwrap();
        let ys = ScalarSet::new(field(101), y.iter().copied()).unwrap();
        let e = additive_energy(&xs, &ys) as f64;
        let total = (x.len() * y.len()) as f64;
        let diffs: BTreeSet<u32> = x.iter().flat_map(|a| y.iter().map(move |b| (a + 101 - b) % 101)).collect();
        prop_assert!(e >= total);
        prop_assert!(e * diffs.len() as f64 >= total * total);
    }

    #[test]
    fn dilation_by_unit_is_bijective(x in prop::collection::btree_set(0u32..101, 0..50), y in 1u32..101) {
        let xs = ScalarSet::new(field(101), x.iter().copied()).unwrap();
        prop_assert_eq!(dilate(&xs, field(101).elem(y)).len(), xs.len());
    }
}
