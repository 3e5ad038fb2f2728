//! Exact deterministic cost of a 3-player function, sandwiched between
//! the partition lower bound and a hand-built upper bound.

use ccb::boolfn::BoolFunction;
use ccb::caps::SearchCaps;
use ccb::protocol::{det_cc_exact, partition_argument_bound};

fn main() -> ccb::error::Result<()> {
    let caps = SearchCaps::default();

    let xor3 = BoolFunction::from_fn(vec![2, 2, 2], |idx| idx.iter().sum::<usize>() % 2 == 1)?;
    let cost = det_cc_exact(&xor3, &caps)?;
    println!("xor of 3 bits: depth {}", cost.value);
    println!("tree verifies at depth {}", cost.tree.verify(&xor3)?);

    let bound = partition_argument_bound(&xor3, &caps)?;
    println!(
        "partition bound {} (attained by {})",
        bound.value,
        bound.witness.render()
    );
    for pc in &bound.per_partition {
        println!("  {}: induced two-party cost {}", pc.partition.render(), pc.value);
    }

    // all-equal needs less than its naive 2-bit transcript on 2 values
    let alleq = BoolFunction::from_fn(vec![2, 2, 2], |idx| idx.iter().all(|&v| v == idx[0]))?;
    let cost = det_cc_exact(&alleq, &caps)?;
    println!("all-equal on 3 bits: depth {}", cost.value);
    Ok(())
}
