//! Build a few groups, print their Cayley tables and check the axioms.
//!
//! cargo run --example groups

use groupsync::group::GroupTable;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let z4 = GroupTable::cyclic(4)?;
    println!("Z/4:\n{}", z4.dump());

    let s3 = GroupTable::symmetric(3)?;
    for a in 0..s3.order() {
        println!(
            "S3 element {a} = {}  inverse {}  order {}",
            s3.label(a),
            s3.label(s3.inverse(a)),
            s3.element_order(a)
        );
    }

    // S3 is not abelian.
    let (a, b) = (1, 2);
    println!("{a}*{b} = {}, {b}*{a} = {}", s3.mul(a, b), s3.mul(b, a));

    let z6 = GroupTable::direct_product(&GroupTable::cyclic(2)?, &GroupTable::cyclic(3)?)?;
    z6.validate()?;
    println!("Z/2 x Z/3 has order {} and passes validation", z6.order());
    Ok(())
}
