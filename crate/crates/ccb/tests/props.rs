//! Randomized invariants: format round-trips, flattening as a pure
//! relabeling, rank identities, and an independent re-evaluation of
//! decompositions.

use num::BigUint;
use proptest::collection::vec;
use proptest::prelude::*;

use ccb::field::{Field, Gf2, Rat};
use ccb::fooling::is_fooling_set;
use ccb::latin::latin_sample;
use ccb::partition::Bipartition;
use ccb::tensor::{eval_decomposition, hadamard, kron, Decomposition, KTensor};
use ccb::textio::{parse_latin, parse_tensor, render_latin, render_tensor, TensorData};

fn small_shape() -> impl Strategy<Value = Vec<usize>> {
    vec(1usize..=3, 2..=4)
}

fn rat_entry() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| Rat::parse(&format!("{n}/{d}")).unwrap())
}

fn rat_tensor(shape: Vec<usize>) -> impl Strategy<Value = KTensor<Rat>> {
    let cells: usize = shape.iter().product();
    vec(rat_entry(), cells).prop_map(move |entries| KTensor::new(shape.clone(), entries).unwrap())
}

fn gf2_tensor(shape: Vec<usize>) -> impl Strategy<Value = KTensor<Gf2>> {
    let cells: usize = shape.iter().product();
    vec(any::<bool>(), cells).prop_map(move |bits| {
        KTensor::new(shape.clone(), bits.into_iter().map(Gf2).collect()).unwrap()
    })
}

/// Axes dealt into a random number of nonempty groups, order preserved
/// inside each group.
fn groupings(k: usize) -> impl Strategy<Value = Vec<Vec<usize>>> {
    vec(0usize..k.min(3), k).prop_map(move |labels| {
        let buckets = labels.iter().max().unwrap() + 1;
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); buckets];
        for (axis, &g) in labels.iter().enumerate() {
            groups[g].push(axis);
        }
        groups.retain(|g| !g.is_empty());
        groups
    })
}

fn sorted_entries<F: Field>(t: &KTensor<F>) -> Vec<String> {
    let mut v: Vec<String> = t.values().iter().map(|e| e.render()).collect();
    v.sort();
    v
}

proptest! {
    #[test]
    fn flatten_relabels_without_touching_entries(
        (t, groups) in small_shape()
            .prop_flat_map(|s| {
                let k = s.len();
                (rat_tensor(s), groupings(k))
            })
    ) {
        let flat = t.flatten(&groups).unwrap();
        prop_assert_eq!(flat.arity(), groups.len());
        let expected: Vec<usize> = groups
            .iter()
            .map(|g| g.iter().map(|&a| t.shape()[a]).product())
            .collect();
        prop_assert_eq!(flat.shape(), &expected[..]);
        prop_assert_eq!(sorted_entries(&flat), sorted_entries(&t));
    }

    #[test]
    fn tensor_text_roundtrips_rationals(t in small_shape().prop_flat_map(rat_tensor)) {
        let text = render_tensor(&t);
        match parse_tensor(&text).unwrap() {
            TensorData::Rational(back) => prop_assert_eq!(back, t),
            TensorData::Gf2(_) => prop_assert!(false, "field tag flipped"),
        }
    }

    #[test]
    fn tensor_text_roundtrips_gf2(t in small_shape().prop_flat_map(gf2_tensor)) {
        let text = render_tensor(&t);
        match parse_tensor(&text).unwrap() {
            TensorData::Gf2(back) => prop_assert_eq!(back, t),
            TensorData::Rational(_) => prop_assert!(false, "field tag flipped"),
        }
    }

    #[test]
    fn latin_text_roundtrips(m in 1usize..=4, seed in any::<u64>()) {
        let l = latin_sample(m, seed).unwrap();
        let back = parse_latin(&render_latin(&l)).unwrap();
        prop_assert_eq!(back, l);
    }

    #[test]
    fn partition_render_parse_roundtrips(k in 2usize..=9, mask in 1u32..=254) {
        let mask = mask & ((1 << k) - 1);
        prop_assume!(mask != 0 && mask != (1 << k) - 1);
        let left: Vec<usize> = (0..k).filter(|&a| mask >> a & 1 == 1).collect();
        let right: Vec<usize> = (0..k).filter(|&a| mask >> a & 1 == 0).collect();
        let p = Bipartition::new(k, &left, &right).unwrap();
        let back = Bipartition::parse(k, &p.render()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn kron_multiplies_matrix_rank(
        a in rat_tensor(vec![2, 2]),
        b in rat_tensor(vec![3, 2]),
    ) {
        let split = Bipartition::parse(2, "1|2").unwrap();
        let ra = a.flattening_rank(&split).unwrap();
        let rb = b.flattening_rank(&split).unwrap();
        let prod = kron(&a, &b).unwrap();
        prop_assert_eq!(prod.flattening_rank(&split).unwrap(), ra * rb);
    }

    #[test]
    fn hadamard_rank_is_submultiplicative(
        a in rat_tensor(vec![3, 3]),
        b in rat_tensor(vec![3, 3]),
    ) {
        let split = Bipartition::parse(2, "1|2").unwrap();
        let ra = a.flattening_rank(&split).unwrap();
        let rb = b.flattening_rank(&split).unwrap();
        let h = hadamard(&a, &b).unwrap();
        prop_assert!(h.flattening_rank(&split).unwrap() <= ra * rb);
    }

    #[test]
    fn decomposition_evaluation_matches_direct_sum(
        terms in vec(
            vec(vec(-3i64..=3, 2), 3).prop_map(|vecs| {
                vecs.into_iter()
                    .map(|v| v.into_iter().map(|x| Rat::parse(&x.to_string()).unwrap()).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            }),
            1..=3,
        )
    ) {
        let d = Decomposition { shape: vec![2, 2, 2], terms };
        let t = eval_decomposition(&d).unwrap();
        // direct sum of outer products, written out by hand
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    let mut acc = <Rat as Field>::zero();
                    for term in &d.terms {
                        let mut prod = <Rat as Field>::one();
                        prod = prod.mul(&term[0][x]).mul(&term[1][y]).mul(&term[2][z]);
                        acc = acc.add(&prod);
                    }
                    prop_assert_eq!(t.value(&[x, y, z]), &acc);
                }
            }
        }
    }

    #[test]
    fn subsets_of_fooling_sets_still_fool(bits in vec(any::<bool>(), 8), keep in vec(any::<bool>(), 8)) {
        let f = ccb::boolfn::BoolFunction::new(vec![2, 2, 2], bits).unwrap();
        let found = ccb::fooling::max_fooling_set(&f, true, &ccb::caps::SearchCaps::default()).unwrap();
        prop_assume!(found.size >= 2);
        let subset: Vec<Vec<usize>> = found
            .set
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(c, _)| c.clone())
            .collect();
        prop_assume!(!subset.is_empty());
        prop_assert!(is_fooling_set(&f, &subset, true).unwrap().valid);
    }

    #[test]
    fn flattening_rank_never_exceeds_either_side(
        t in small_shape().prop_flat_map(gf2_tensor),
        mask in 1u32..=14,
    ) {
        let k = t.arity();
        let mask = mask & ((1 << k) - 1);
        prop_assume!(mask != 0 && mask != (1 << k) - 1);
        let left: Vec<usize> = (0..k).filter(|&a| mask >> a & 1 == 1).collect();
        let right: Vec<usize> = (0..k).filter(|&a| mask >> a & 1 == 0).collect();
        let p = Bipartition::new(k, &left, &right).unwrap();
        let rows: usize = left.iter().map(|&a| t.shape()[a]).product();
        let cols: usize = right.iter().map(|&a| t.shape()[a]).product();
        let r = t.flattening_rank(&p).unwrap();
        prop_assert!(r <= rows.min(cols));
        prop_assert!(BigUint::from(r) <= BigUint::from(rows));
    }
}
