//! Latin squares as 3-player functions: enumeration, the not-equal
//! reduction test, and the cover-size experiment.

use ccb::caps::SearchCaps;
use ccb::latin::{
    latin_enumerate, latin_function, latin_hardness_experiment, latin_of_function, latin_sample,
    ne_reduction_per_axis,
};
use ccb::textio::render_latin;

fn main() -> ccb::error::Result<()> {
    for m in 1..=4 {
        println!("dimension {}: {} squares", m, latin_enumerate(m)?.len());
    }

    let l = latin_sample(4, 11)?;
    println!("\nsampled square:\n{}", render_latin(&l));

    let f = latin_function(&l)?;
    println!("as a function on {:?}", f.shape());
    println!("unique zero per line, all axes: {:?}", ne_reduction_per_axis(&f)?);
    assert!(latin_of_function(&f)? == l);

    let h = latin_hardness_experiment(3, &SearchCaps::default())?;
    println!(
        "\nall {} squares at m=3: worst 1-cover {} boxes ({} bits), threshold {} met: {}",
        h.squares, h.max_cover, h.max_cover_bits, h.threshold, h.threshold_met
    );
    for (size, count) in &h.histogram {
        println!("  cover size {}: {} squares", size, count);
    }
    Ok(())
}
