//! Rank bounds from a separating collection of bipartitions, plus the
//! recursion that turns per-cut bounds into a bound on rank itself.

use ccb::decompose::{
    decompose_separating, n_recursion, rank_lower_bound_flattenings, FlatteningRankProfile,
};
use ccb::field::{Field, Rat};
use ccb::partition::SeparatingCollection;
use ccb::tensor::{eval_decomposition, KTensor};
use num::BigUint;
use rand::{Rng, SeedableRng};

fn main() -> ccb::error::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
    let entries: Vec<Rat> = (0..16)
        .map(|_| Rat::parse(&rng.gen_range(-2i64..=2).to_string()).unwrap())
        .collect();
    let t = KTensor::new(vec![2, 2, 2, 2], entries)?;

    // two cuts separating every pair of the four axes
    let coll = SeparatingCollection::parse(4, "12|34,13|24")?;
    let cert = decompose_separating(&t, &coll)?;
    println!("separating bound: {} terms stated, {} built", cert.bound, cert.terms());
    let back = eval_decomposition(&cert.decomposition)?;
    assert!(back == t);

    let floor = rank_lower_bound_flattenings(&t, None)?;
    println!("flattening floor: {}", floor.value);

    // the recursion on bare numbers: cuts with bounds 2 and 3 give 36
    let profile = FlatteningRankProfile::new(
        SeparatingCollection::parse(4, "12|34,13|24")?,
        vec![BigUint::from(2u32), BigUint::from(3u32)],
    )?;
    let (n, trace) = n_recursion(&profile);
    println!("recursion value: {}", n);
    println!("trace: {}", serde_json::to_string(&trace).unwrap());

    let swapped = FlatteningRankProfile::new(
        SeparatingCollection::parse(4, "12|34,13|24")?,
        vec![BigUint::from(3u32), BigUint::from(2u32)],
    )?;
    println!("order does not matter: {}", n_recursion(&swapped).0);
    Ok(())
}
