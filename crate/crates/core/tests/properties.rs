use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use quantgroupoid::algebra::make_multimatrix;
use quantgroupoid::duality::{evaluation_pairing, induce_pairing, verify_skew_pairing};
use quantgroupoid::linalg::{self, SparseVec};
use quantgroupoid::morita::{amplify, base_change, canonical_context, round_trip_map, weak_iso_report};
use quantgroupoid::towers::{basic_construction_step, bratteli_base_change, tl_algebra, transpose, BratteliFloor, InclusionStep, Matrix};
use quantgroupoid::weak::{groupoid_based, groupoid_weak_hopf, hopf_beta_check, verify_antipode, verify_weak_bialgebra, Groupoid};
use quantgroupoid::Scalar;

fn rational() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=7).prop_map(|(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
}

fn quadratic() -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
    prop_oneof![Just(2u32), Just(3), Just(5)].prop_flat_map(|d| {
        let s = move || (rational(), rational()).prop_map(move |(a, b)| Scalar::quad(a, b, d).unwrap());
        (s(), s(), s())
    })
}

/// Pieces of a groupoid: `(true, n)` is the pair groupoid on n objects, `(false, n)` the cyclic group of order n.
fn groupoid(max_objects: usize) -> impl Strategy<Value = (Groupoid, Vec<usize>)> {
    prop::collection::vec((any::<bool>(), 1usize..=2, 1usize..=2), 1..=max_objects)
        .prop_map(|parts| {
            let mut g: Option<Groupoid> = None;
            let mut blocks = Vec::new();
            for (pair, n, b) in parts {
                let piece = if pair { Groupoid::pair(n) } else { Groupoid::cyclic(n) };
                let objects = if pair { n } else { 1 };
                blocks.extend(std::iter::repeat(b).take(objects));
                g = Some(match g {
                    None => piece,
                    Some(acc) => acc.disjoint_union(&piece),
                });
            }
            (g.unwrap(), blocks)
        })
        .prop_filter("at most three objects", move |(_, b)| b.len() <= max_objects)
}

/// A step whose rows and columns are all nonzero.
fn inclusion() -> impl Strategy<Value = InclusionStep> {
    (1usize..=3, 1usize..=3)
        .prop_flat_map(|(r, c)| (prop::collection::vec(1u64..=3, r), prop::collection::vec(prop::collection::vec(0u64..=2, c), r)))
        .prop_map(|(lower, mut m): (Vec<u64>, Matrix)| {
            let (r, c) = (m.len(), m[0].len());
            for i in 0..r.max(c) {
                let x = &mut m[i % r][i % c];
                *x = (*x).max(1);
            }
            let upper: Vec<u64> = (0..c).map(|j| lower.iter().zip(&m).map(|(l, row)| l * row[j]).sum()).collect();
            InclusionStep::new(BratteliFloor::unlabeled(&lower).unwrap(), BratteliFloor::unlabeled(&upper).unwrap(), m).unwrap()
        })
}

fn coeffs(dim: usize) -> impl Strategy<Value = SparseVec> {
    prop::collection::vec(-3i64..=3, dim).prop_map(|v| linalg::from_dense(&v.into_iter().map(Scalar::from_int).collect::<Vec<_>>()))
}

proptest! {
    #[test]
    fn scalar_field_laws((x, y, z) in quadratic()) {
        prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        if !x.is_zero() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn scalar_text_round_trip((x, _, _) in quadratic()) {
        prop_assert_eq!(Scalar::parse(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn bratteli_base_change_keeps_the_matrix(step in inclusion(), seed in prop::collection::vec(1u64..=4, 3)) {
        let ranks: Vec<u64> = (0..step.lower.len()).map(|i| seed[i]).collect();
        let out = bratteli_base_change(&step, &ranks).unwrap();
        prop_assert_eq!(&out.matrix, &step.matrix);
        prop_assert_eq!(&out.upper.ranks, &step.pushed_ranks(&ranks));
        let back = bratteli_base_change(&out, &step.lower.ranks).unwrap();
        prop_assert_eq!(back, step);
    }

    #[test]
    fn basic_construction_transposes(step in inclusion()) {
        let next = basic_construction_step(&step).unwrap();
        prop_assert_eq!(&next.lower, &step.upper);
        prop_assert_eq!(&next.matrix, &transpose(&step.matrix, step.upper.len()));
        let expect: Vec<u64> = step.matrix.iter().map(|row| row.iter().zip(&step.upper.ranks).map(|(m, r)| m * r).sum()).collect();
        prop_assert_eq!(next.upper.ranks, expect);
    }

    #[test]
    fn tl_is_associative(n in 2u32..=3, a in coeffs(14), b in coeffs(14), c in coeffs(14)) {
        let tl = tl_algebra(n, 4).unwrap();
        let alg = &tl.algebra;
        prop_assert_eq!(alg.mul(&alg.mul(&a, &b), &c), alg.mul(&a, &alg.mul(&b, &c)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn groupoid_algebras_are_weak_hopf((g, _) in groupoid(3)) {
        let (h, s) = groupoid_weak_hopf(&g).unwrap();
        prop_assert!(verify_weak_bialgebra(&h).passed());
        prop_assert!(verify_antipode(&h, &s).passed());
        prop_assert!(hopf_beta_check(&groupoid_based(&g).unwrap()).unwrap().0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, ..ProptestConfig::default() })]

    #[test]
    fn amplification_round_trips_and_keeps_hopf((g, blocks) in groupoid(2)) {
        let b = groupoid_based(&g).unwrap();
        let ctx = canonical_context(&make_multimatrix(&blocks).unwrap()).unwrap();
        let amp = amplify(&b, &ctx).unwrap();
        prop_assert!(verify_weak_bialgebra(&amp.based.h).passed());
        prop_assert!(hopf_beta_check(&amp.based).unwrap().0);
        let back = base_change(&amp.based, &ctx).unwrap();
        let phi = round_trip_map(&amp, &back, &ctx).unwrap();
        prop_assert!(weak_iso_report(&phi, &back.based.h, &b.h).passed());
    }

    #[test]
    fn induced_pairings_are_skew_pairings((g, blocks) in groupoid(2)) {
        let b = groupoid_based(&g).unwrap();
        let ctx = canonical_context(&make_multimatrix(&blocks).unwrap()).unwrap();
        let p = evaluation_pairing(&b).unwrap();
        prop_assert!(verify_skew_pairing(&p).passed());
        let (al, ah) = (amplify(&p.lambda, &ctx).unwrap(), amplify(&b, &ctx).unwrap());
        let up = induce_pairing(&p, &al, &ah, &ctx.swap()).unwrap();
        let rep = verify_skew_pairing(&up);
        prop_assert!(rep.passed(), "{}", rep);
    }
}
