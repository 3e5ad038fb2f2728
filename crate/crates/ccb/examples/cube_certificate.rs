//! Decompose a random 3-way tensor and check the term count against the
//! product of two of its flattening ranks.

use ccb::decompose::{cube_decompose_3, footnote_tensor};
use ccb::field::{Field, Rat};
use ccb::partition::Bipartition;
use ccb::tensor::{eval_decomposition, KTensor};
use rand::{Rng, SeedableRng};

fn main() -> ccb::error::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let entries: Vec<Rat> = (0..27)
        .map(|_| Rat::parse(&rng.gen_range(-2i64..=2).to_string()).unwrap())
        .collect();
    let t = KTensor::new(vec![3, 3, 3], entries)?;

    let cert = cube_decompose_3(&t)?;
    let r1 = t.flattening_rank(&Bipartition::parse(3, "1|23")?)?;
    let r2 = t.flattening_rank(&Bipartition::parse(3, "2|13")?)?;
    println!("terms: {} (cap r1*r2 = {}*{} = {})", cert.terms(), r1, r2, r1 * r2);
    println!("stated bound: {}", cert.bound);

    let back = eval_decomposition(&cert.decomposition)?;
    println!("reconstructs exactly: {}", back == t);

    // the m x m x m tensor with 1 exactly where y = z needs only m terms,
    // far below m^2, because its first flattening has rank 1
    let f: KTensor<Rat> = footnote_tensor(4);
    let cert = cube_decompose_3(&f)?;
    let r1 = f.flattening_rank(&Bipartition::parse(3, "1|23")?)?;
    println!("[y=z] at m=4: rank(M1) = {}, terms = {}", r1, cert.terms());
    Ok(())
}
