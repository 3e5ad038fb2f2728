//! Minimum box covers of a function's 0-cells and 1-cells, and the
//! nondeterministic bits they translate into.

use ccb::boolfn::BoolFunction;
use ccb::caps::SearchCaps;
use ccb::cover::{cover_number, maximal_mono_boxes, nondet_cc};

fn main() -> ccb::error::Result<()> {
    let caps = SearchCaps::default();

    // two players, not-equal on 2 values
    let ne = BoolFunction::from_fn(vec![2, 2], |idx| idx[0] != idx[1])?;
    for b in [false, true] {
        let c = cover_number(&ne, b, &caps)?;
        println!("{}-cover: {} boxes, {} bits", u8::from(b), c.count, c.bits);
    }
    let boxes = maximal_mono_boxes(&ne, true, &caps)?;
    println!("maximal 1-mono boxes: {}", boxes.len());
    ne_cover_detail(&ne, &caps)?;

    let sum = nondet_cc(&ne, &caps)?;
    println!(
        "tiling the whole cube: {} boxes, {} bits",
        sum.total_count, sum.total_bits
    );
    Ok(())
}

fn ne_cover_detail(ne: &BoolFunction, caps: &SearchCaps) -> ccb::error::Result<()> {
    let c = cover_number(ne, true, caps)?;
    c.cover.verify(ne)?;
    for (i, kb) in c.cover.boxes.iter().enumerate() {
        println!("  box {}: {}", i, serde_json::to_string(kb).unwrap());
    }
    Ok(())
}
