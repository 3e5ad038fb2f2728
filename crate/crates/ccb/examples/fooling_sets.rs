//! Find a maximum fooling set, re-check it, and compare its size against
//! the matrix ranks it forces.

use ccb::boolfn::BoolFunction;
use ccb::caps::SearchCaps;
use ccb::fooling::{fooling_lower_bound_check, is_fooling_set, max_fooling_set, rank_vs_fooling_check};

fn main() -> ccb::error::Result<()> {
    let caps = SearchCaps::default();
    let alleq = BoolFunction::from_fn(vec![3, 3, 3], |idx| idx.iter().all(|&v| v == idx[0]))?;

    let found = max_fooling_set(&alleq, true, &caps)?;
    println!("largest 1-fooling set: {} cells", found.size);
    for cell in &found.set {
        println!("  {:?}", cell);
    }

    let check = is_fooling_set(&alleq, &found.set, true)?;
    assert!(check.valid);

    let depth = fooling_lower_bound_check(&alleq, &found.set, true, &caps)?;
    println!(
        "depth bound {} from {} cells; exact cost {:?}",
        depth.depth_bound, depth.size, depth.exact_depth
    );

    let report = rank_vs_fooling_check(&alleq, &found.set, true)?;
    println!("mixture product identity: {}", report.hadamard_is_identity);
    println!(
        "rank product {} vs set size {}",
        report.rank_product, report.t
    );
    for (p, r) in &report.mixture_ranks {
        println!("  {}: mixture rank {}", p, r);
    }
    Ok(())
}
