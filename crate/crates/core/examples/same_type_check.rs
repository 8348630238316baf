//! Same-type checks by orientation scan and by transversal search.

use sametype::geometry::format_scalar;
use sametype::sametype::{same_type_family, same_type_family_via_transversal, Witness};
use sametype::{Family, PointSet};

fn report(name: &str, f: &Family) -> sametype::Result<()> {
    let scan = same_type_family(f)?;
    let transversal = same_type_family_via_transversal(f)?;
    assert_eq!(scan.holds, transversal.holds);
    println!("{name}: same type = {}", scan.holds);
    for (tuple, sign) in &scan.signs {
        println!("  sets {tuple:?} have orientation {sign}");
    }
    match &scan.witness {
        Some(Witness::OppositeTuples { positive, negative, .. }) => {
            println!("  positive tuple {:?}", positive.iter().map(|p| p.to_f64()).collect::<Vec<_>>());
            println!("  negative tuple {:?}", negative.iter().map(|p| p.to_f64()).collect::<Vec<_>>());
        }
        Some(w) => println!("  witness {w:?}"),
        None => {}
    }
    if let Some(Witness::Transversal { hyperplane, .. }) = &transversal.witness {
        let normal: Vec<String> = hyperplane.normal().iter().map(format_scalar).collect();
        println!("  transversal line: normal {normal:?}, offset {}", hyperplane.offset());
    }
    Ok(())
}

fn main() -> sametype::Result<()> {
    let clusters = Family::verified(
        2,
        vec![
            PointSet::from_ints("A", &[&[0, 0], &[1, 1]])?,
            PointSet::from_ints("B", &[&[100, 0], &[97, 2]])?,
            PointSet::from_ints("C", &[&[0, 100], &[3, 95]])?,
        ],
    )?;
    report("clusters", &clusters)?;

    let straddle = Family::verified(
        2,
        vec![
            PointSet::from_ints("Y1", &[&[0, 0]])?,
            PointSet::from_ints("Y2", &[&[1, 0]])?,
            PointSet::from_ints("Y3", &[&[2, 1], &[3, -1]])?,
        ],
    )?;
    report("straddle", &straddle)
}
