//! Oracle-equivalence tests: every structural computation that the library
//! performs through normal forms is re-derived here by brute force
//! (element enumeration, coset enumeration, congruence solving) and the two
//! routes are required to agree. The oracles deliberately share no code with
//! the lattice engine.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bicover::abgroup::{cokernel, FiniteAbelianGroup, IntMatrix, SubgroupPresentation};
use bicover::covers::CoverSpec;
use bicover::torus::{fixed_point_count, fixed_points, TorusMap, TwistLetter, TwistWord};

fn add_mod(a: &[u64], b: &[u64], ambient: &[u64]) -> Vec<u64> {
    a.iter()
        .zip(b)
        .zip(ambient)
        .map(|((&x, &y), &o)| (x + y) % o)
        .collect()
}

fn scalar_mod(d: u64, a: &[u64], ambient: &[u64]) -> Vec<u64> {
    a.iter()
        .zip(ambient)
        .map(|(&x, &o)| ((d as u128 * x as u128) % o as u128) as u64)
        .collect()
}

/// All elements of the subgroup generated by `gens` inside the product of
/// cyclic groups with the given orders, by closure under addition.
fn enumerate_subgroup(ambient: &[u64], gens: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
    let zero: Vec<u64> = vec![0; ambient.len()];
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut frontier = vec![zero];
    while let Some(x) = frontier.pop() {
        if !seen.insert(x.clone()) {
            continue;
        }
        for g in gens {
            frontier.push(add_mod(&x, g, ambient));
        }
    }
    seen
}

/// #{x in elements : d * x = 0}, the census that classifies finite abelian
/// groups.
fn census(elements: &BTreeSet<Vec<u64>>, ambient: &[u64], d: u64) -> usize {
    elements
        .iter()
        .filter(|x| scalar_mod(d, x, ambient).iter().all(|&c| c == 0))
        .count()
}

/// The same census predicted from invariant factors: prod gcd(d, d_i).
fn predicted_census(group: &FiniteAbelianGroup, d: u64) -> u128 {
    group
        .invariant_factors()
        .iter()
        .map(|di| {
            let di = di.to_u128().expect("desk scale");
            gcd_u128(d as u128, di)
        })
        .product()
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    out.sort_unstable();
    out
}

#[test]
fn subgroup_structure_matches_element_census() {
    // every ambient pair with n*m <= 200 and a spread of generator sets
    let mut checked = 0usize;
    for n in 1..=20u64 {
        for m in 1..=20u64 {
            if n * m > 200 {
                continue;
            }
            let gen_sets: Vec<Vec<(u64, u64)>> = vec![
                vec![],
                vec![(1, 0)],
                vec![(0, 1)],
                vec![(2, 0), (0, 2)],
                vec![(n.saturating_sub(1), 1)],
                vec![(2, 3)],
                vec![(3, 0), (0, 2), (1, 1)],
            ];
            for gens in gen_sets {
                let pres = SubgroupPresentation::in_pair(n, m, &gens).unwrap();
                let (group, index) = pres.subgroup_from_generators();

                let ambient = [n, m];
                let gen_vecs: Vec<Vec<u64>> =
                    gens.iter().map(|&(a, b)| vec![a % n, b % m]).collect();
                let elements = enumerate_subgroup(&ambient, &gen_vecs);

                // order and index
                assert_eq!(
                    group.order().to_u128().unwrap(),
                    elements.len() as u128,
                    "order mismatch for ({n},{m}) gens {gens:?}"
                );
                assert_eq!(
                    group.order() * index.clone(),
                    (n as u128 * m as u128).into(),
                    "order times index must be the ambient order"
                );

                // census agreement over all divisors of the ambient order
                // classifies the group
                for d in divisors(n * m) {
                    assert_eq!(
                        census(&elements, &ambient, d) as u128,
                        predicted_census(&group, d),
                        "census at {d} for ({n},{m}) gens {gens:?}"
                    );
                }
                checked += 1;
            }
        }
    }
    assert!(checked > 300, "oracle corpus too small: {checked}");
}

#[test]
fn quotient_structure_matches_coset_census() {
    for (n, m, gens) in [
        (6u64, 4u64, vec![(2u64, 0u64), (0, 1)]),
        (6, 4, vec![(1, 0), (0, 2)]),
        (6, 4, vec![(1, 0), (0, 1)]),
        (6, 4, vec![]),
        (12, 8, vec![(4, 0), (0, 2)]),
        (9, 3, vec![(3, 1)]),
        (10, 10, vec![(2, 4)]),
    ] {
        let pres = SubgroupPresentation::in_pair(n, m, &gens).unwrap();
        let quotient = pres.quotient_by_subgroup();

        let ambient = [n, m];
        let gen_vecs: Vec<Vec<u64>> = gens.iter().map(|&(a, b)| vec![a % n, b % m]).collect();
        let subgroup = enumerate_subgroup(&ambient, &gen_vecs);

        // cosets by canonical representatives
        let mut cosets: BTreeSet<Vec<u64>> = BTreeSet::new();
        for x0 in 0..n {
            for x1 in 0..m {
                let x = vec![x0, x1];
                let rep = subgroup
                    .iter()
                    .map(|s| add_mod(&x, s, &ambient))
                    .min()
                    .unwrap();
                cosets.insert(rep);
            }
        }
        assert_eq!(
            quotient.order().to_u128().unwrap(),
            cosets.len() as u128,
            "quotient order for ({n},{m}) / {gens:?}"
        );
        // census over the quotient: d kills the coset of x iff d*x lies in
        // the subgroup
        for d in divisors(n * m) {
            let count = cosets
                .iter()
                .filter(|x| subgroup.contains(&scalar_mod(d, x, &ambient)))
                .count();
            assert_eq!(
                count as u128,
                predicted_census(&quotient, d),
                "quotient census at {d} for ({n},{m}) / {gens:?}"
            );
        }
    }
}

#[test]
fn cokernel_matches_determinant_on_full_rank_square_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let size = rng.gen_range(1..=3);
        let m = IntMatrix::from_fn(size, size, |_, _| BigInt::from(rng.gen_range(-6i64..=6)));
        let det = m.det();
        let (free_rank, torsion) = cokernel(&m);
        if det.is_zero() {
            assert!(free_rank > 0);
        } else {
            assert_eq!(free_rank, 0);
            assert_eq!(BigInt::from(torsion.order()), det.abs());
        }
    }
}

fn random_word_matrix(rng: &mut ChaCha8Rng, max_len: usize) -> IntMatrix {
    let letters = [
        TwistLetter::R,
        TwistLetter::RInv,
        TwistLetter::L,
        TwistLetter::LInv,
    ];
    let len = rng.gen_range(0..=max_len);
    let mut m = IntMatrix::identity(2);
    for _ in 0..len {
        m = &m * &letters[rng.gen_range(0..4)].matrix();
    }
    if rng.gen_bool(0.5) {
        m = -&m;
    }
    m
}

fn entries_bounded(m: &IntMatrix, bound: i64) -> bool {
    m.entries().iter().all(|e| e.abs() <= BigInt::from(bound))
}

#[test]
fn fixed_point_enumeration_agrees_with_the_lefschetz_count() {
    // exhaustive over tiny entries
    let vals = [-2i64, -1, 0, 1, 2];
    for &a in &vals {
        for &b in &vals {
            for &c in &vals {
                for &d in &vals {
                    if a * d - b * c != 1 {
                        continue;
                    }
                    let m = TorusMap::from_entries([a, b, c, d]).unwrap();
                    for k in 1..=6u64 {
                        compare_fixed_point_routes(&m, k);
                    }
                }
            }
        }
    }

    // random spread with entries up to 50
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut sampled = 0;
    while sampled < 200 {
        let m = random_word_matrix(&mut rng, 9);
        if !entries_bounded(&m, 50) {
            continue;
        }
        let map = TorusMap::new(m).unwrap();
        for k in 1..=6u64 {
            compare_fixed_point_routes(&map, k);
        }
        sampled += 1;
    }
}

/// Enumeration is compared whenever the fixed set is small enough to list;
/// the determinant count itself is exact at any size.
const ENUMERATION_CAP: u64 = 5_000;

fn compare_fixed_point_routes(m: &TorusMap, k: u64) {
    let count = fixed_point_count(m, k);
    if let Ok(c) = &count {
        if c > &ENUMERATION_CAP.into() {
            return;
        }
    }
    let points = fixed_points(m, k);
    match (count, points) {
        (Err(a), Err(b)) => assert_eq!(a, b),
        (Ok(count), Err(e)) => {
            // infinite fixed set: Lefschetz number degenerates to zero
            assert_eq!(e, bicover::Error::DegenerateFixedSet);
            assert!(count.is_zero(), "only a degenerate power may disagree");
        }
        (Ok(count), Ok(points)) => {
            assert_eq!(
                BigInt::from(count),
                BigInt::from(points.len()),
                "count vs enumeration for {m} at power {k}"
            );
        }
        (Err(e), Ok(_)) => panic!("enumeration succeeded where counting failed: {e}"),
    }
}

#[test]
fn kernel_lattice_index_equals_image_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..150 {
        let factors = rng.gen_range(1..=3);
        let orders: Vec<u64> = (0..factors).map(|_| rng.gen_range(1..=8)).collect();
        let images: Vec<Vec<u64>> = (0..4)
            .map(|_| orders.iter().map(|&o| rng.gen_range(0..o.max(1))).collect())
            .collect();
        let spec = CoverSpec::new(2, orders, images).unwrap();
        let kernel = spec.kernel_lattice();
        assert_eq!(kernel.rows(), 4);
        assert_eq!(kernel.cols(), 4);
        assert_eq!(
            kernel.det().abs(),
            BigInt::from(spec.degree()),
            "lattice index vs image order"
        );
        // each basis vector really maps to zero
        for j in 0..4 {
            let v: Vec<BigInt> = (0..4).map(|i| kernel.get(i, j).clone()).collect();
            assert!(spec.apply(&v).iter().all(|&c| c == 0));
        }
    }
}

#[test]
fn twist_words_evaluate_back_to_their_source() {
    // 1000 random words of length <= 20, refactored and compared exactly
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..1000 {
        let m = random_word_matrix(&mut rng, 20);
        let map = TorusMap::new(m.clone()).unwrap();
        let word: TwistWord = bicover::factor_into_twists(&map).unwrap();
        assert_eq!(word.evaluate(), m, "round trip through factorization");
    }
}
