//! Exact orientation and side tests, and a convex hull.

use sametype::geometry::hull::{ConvexHull, Location};
use sametype::geometry::{format_scalar, parse_scalar, ratio};
use sametype::{orient, side, span_hyperplane, Point};

fn main() -> sametype::Result<()> {
    let a = Point::from_ints(&[0, 0]);
    let b = Point::from_ints(&[4, 0]);
    let c = Point::from_ints(&[0, 3]);
    println!("orient(a, b, c) = {}", orient(&[&a, &b, &c])?);
    println!("orient(b, a, c) = {}", orient(&[&b, &a, &c])?);

    // A rational point exactly on the segment bc.
    let on = Point::new(vec![parse_scalar("2")?, parse_scalar("3/2")?])?;
    println!("orient(b, c, on) = {}", orient(&[&b, &c, &on])?);

    let h = span_hyperplane(&[&b, &c])?;
    let normal: Vec<String> = h.normal().iter().map(format_scalar).collect();
    println!("line through b and c: normal {normal:?}, offset {}", h.offset());
    let near = Point::new(vec![ratio(2, 1), ratio(3, 2) + ratio(1, 1_000_000_000)])?;
    println!("side of a: {}, side of a point 1e-9 above bc: {}", side(&h, &a)?, side(&h, &near)?);

    let hull = ConvexHull::new(&[a.clone(), b.clone(), c.clone(), Point::from_ints(&[1, 1])])?;
    println!("hull has {} facets", hull.facets().len());
    for p in [&Point::from_ints(&[1, 1]), &on, &Point::from_ints(&[5, 5])] {
        let loc = hull.locate(p)?;
        let name = match loc {
            Location::Interior => "interior",
            Location::Boundary => "boundary",
            Location::Outside => "outside",
        };
        println!("{:?} is {name}", p.to_f64());
    }
    Ok(())
}
