//! Seeded random functions with a planted diagonal fooling set, and the
//! counting threshold that guarantees the construction works.

use ccb::fooling::{is_fooling_set, max_fooling_set, sample_fooling_function, union_bound_threshold};

fn main() -> ccb::error::Result<()> {
    let n = 2;
    let f = sample_fooling_function(n, 0xfeed)?;
    println!("sampled on shape {:?}", f.shape());

    let side = 1usize << n;
    let diagonal: Vec<Vec<usize>> = (0..side).map(|v| vec![v, v, v]).collect();
    let check = is_fooling_set(&f, &diagonal, true)?;
    println!("diagonal of {} cells fools: {}", diagonal.len(), check.valid);

    let best = max_fooling_set(&f, true, &ccb::caps::SearchCaps::default())?;
    println!("largest 1-fooling set found: {}", best.size);

    // same seed, same function
    let again = sample_fooling_function(n, 0xfeed)?;
    assert!(again == f);
    println!("resampling with the seed reproduces the function");

    for n in [1u64, 2, 4] {
        match union_bound_threshold(n, 2048) {
            Some(t) => println!("n = {}: union bound holds from t = {}", n, t),
            None => println!("n = {}: no t up to 2048 works", n),
        }
    }
    Ok(())
}
