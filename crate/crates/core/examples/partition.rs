//! Polynomial partition of one point set, stage by stage.

use sametype::constructions::{clustered_family, Layout};
use sametype::io::{poly_json, sign_string};
use sametype::partition::{build_partition_seeded, warren_audit};

fn main() -> sametype::Result<()> {
    let x = clustered_family(1, 2, 128, Layout::Clustered, 5)?.set(0).clone();
    let part = build_partition_seeded(&x, 4, 11)?;
    for (j, (stage, f)) in part.stages.iter().zip(&part.polys).enumerate() {
        println!(
            "round {}: {} cells bisected, degree {} (budget {}), polynomial {}",
            j + 1,
            stage.cells_in,
            stage.degree,
            stage.budget,
            poly_json(f)
        );
    }
    for (signs, pts) in &part.cells {
        println!("cell {}: {} points", sign_string(signs), pts.len());
    }
    let w = warren_audit(&part)?;
    println!(
        "{} points on the surface; {} cells realized, at most {} allowed for total degree {}",
        part.on_surface.len(),
        w.realized,
        w.bound,
        w.total_degree
    );
    Ok(())
}
