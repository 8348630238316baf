//! Replacing points by small clouds leaves c unchanged.

use sametype::constructions::{blow_up, blow_up_limit};
use sametype::geometry::int;
use sametype::sametype::c_exact;
use sametype::{Family, PointSet};

fn main() -> sametype::Result<()> {
    let f = Family::verified(
        2,
        vec![
            PointSet::from_ints("X1", &[&[0, 0], &[3, 1]])?,
            PointSet::from_ints("X2", &[&[10, 0], &[2, 5]])?,
            PointSet::from_ints("X3", &[&[1, 11], &[7, 6], &[-4, 3]])?,
        ],
    )?;
    let before = c_exact(&f)?.value;
    let limit = blow_up_limit(&f, 2).expect("other sets span lines");
    let g = blow_up(&f, 2, 4, &(limit.clone() / int(2)), 7)?;
    let after = c_exact(&g)?.value;
    println!("radius limit {limit}; X3 grows from {} to {} points", f.set(2).len(), g.set(2).len());
    println!("c before {before}, after {after}");
    Ok(())
}
