//! A conic bisecting five planar point sets at once.

use sametype::constructions::{clustered_family, Layout};
use sametype::io::poly_json;
use sametype::partition::{bisects, ham_sandwich_poly_seeded, lifted_dim};

fn main() -> sametype::Result<()> {
    let sets = clustered_family(lifted_dim(2, 2), 2, 25, Layout::Mixed, 3)?.sets().to_vec();
    let f = ham_sandwich_poly_seeded(&sets, 2, 1)?;
    println!("degree {} surface: {}", f.degree(), poly_json(&f));
    for s in &sets {
        let pos = s.points().iter().filter(|p| f.sign_at(p) > 0).count();
        let neg = s.points().iter().filter(|p| f.sign_at(p) < 0).count();
        println!("{}: {pos} above, {neg} below, {} on; bisected = {}", s.label, s.len() - pos - neg, bisects(&f, s));
    }
    Ok(())
}
