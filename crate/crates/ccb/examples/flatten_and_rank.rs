//! Flatten a 3-way tensor into a matrix and take its exact rank.

use ccb::field::{Field, Rat};
use ccb::partition::Bipartition;
use ccb::tensor::KTensor;

fn main() -> ccb::error::Result<()> {
    let entries: Vec<Rat> = (1..=30).map(|n| Rat::parse(&n.to_string()).unwrap()).collect();
    let t = KTensor::new(vec![2, 3, 5], entries)?;
    println!("tensor shape {:?}, {} cells", t.shape(), t.values().len());

    // merge the first two axes, keep the last
    let m = t.flatten(&[vec![0, 1], vec![2]])?;
    println!("flattened to {:?}", m.shape());

    for p in ["1|23", "2|13", "3|12"] {
        let p = Bipartition::parse(3, p)?;
        println!("rank across {}: {}", p.render(), t.flattening_rank(&p)?);
    }

    // a grid of products splits along every cut
    let prod = KTensor::new(
        vec![2, 2, 2],
        (0..8)
            .map(|i| {
                let (x, y, z) = (i >> 2 & 1, i >> 1 & 1, i & 1);
                Rat::parse(&format!("{}", (x + 1) * (y + 2) * (z + 3))).unwrap()
            })
            .collect(),
    )?;
    let p = Bipartition::parse(3, "1|23")?;
    println!("product grid rank across {}: {}", p.render(), prod.flattening_rank(&p)?);
    Ok(())
}
