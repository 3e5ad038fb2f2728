//! A relation every two-camp split answers silently, yet that still
//! costs bits when all three players must agree on one output.

use ccb::caps::SearchCaps;
use ccb::partition::all_bipartitions;
use ccb::relation::{
    build_relation, inner_product_function, rel_det_cc_exact, silent_induced_check,
    zero_comm_check, MaskRelation, OutputRelation,
};

fn main() -> ccb::error::Result<()> {
    // each clause: inner product of one-bit halves
    let ip = inner_product_function(1)?;
    let rel = build_relation(ip.clone(), ip.clone(), ip)?;
    println!("relation on shape {:?}", rel.shape());

    for p in all_bipartitions(3) {
        let ans = zero_comm_check(&rel, &p)?;
        let who = match (ans.left_works, ans.right_works) {
            (true, true) => "either camp",
            (true, false) => "left camp",
            (false, true) => "right camp",
            (false, false) => "nobody",
        };
        println!("  {}: {} answers without speaking", p.render(), who);
        if let Some(w) = &ans.witness {
            w.verify(&rel)?;
        }
    }
    let silent = silent_induced_check(&rel)?;
    println!("silent under every split: {}", silent.all_induced_silent);

    let cost = rel_det_cc_exact(&rel, &SearchCaps::default())?;
    println!("exact cost with all three talking: {}", cost.value);

    // no single output works everywhere, so silence cannot be global
    let dense = MaskRelation::from_relation(&rel)?;
    let common = dense.masks().iter().fold(0xffu8, |acc, &m| acc & m);
    println!("outputs valid on every cell: {}", common.count_ones());
    Ok(())
}
