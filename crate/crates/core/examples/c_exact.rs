//! Exact same-type constant of small families, against the cell heuristic.

use sametype::geometry::int;
use sametype::rng;
use sametype::sametype::{c_cell_heuristic, c_exact, c_exact_with, CExactBudget};
use sametype::{Error, Family, PointSet};

// `m` sets of `n` random points around the origin.
fn overlapping(m: usize, n: usize, seed: u64) -> sametype::Result<Family> {
    let mut r = rng::seeded(seed);
    loop {
        let sets = (0..m)
            .map(|i| {
                let pts = (0..n).map(|_| rng::point_near(&mut r, &[int(0), int(0)], 1000, 1)).collect();
                PointSet::new(format!("X{}", i + 1), pts)
            })
            .collect::<sametype::Result<Vec<_>>>();
        if let Ok(f) = sets.and_then(|s| Family::verified(2, s)) {
            return Ok(f);
        }
    }
}

fn main() -> sametype::Result<()> {
    for seed in 0..4 {
        let f = overlapping(3, 8, seed)?;
        let exact = c_exact(&f)?;
        let heuristic = c_cell_heuristic(&f, 64)?;
        println!(
            "seed {seed}: c = {} with subsets {:?}; heuristic lower bound {}",
            exact.value, exact.indices, heuristic.value
        );
    }

    // Four sets use the general search, whose cost grows quickly.
    let f = overlapping(4, 6, 1)?;
    match c_exact_with(&f, CExactBudget { max_nodes: 1000, ..CExactBudget::default() }) {
        Err(Error::BudgetExceeded { best_lower_bound, nodes }) => {
            println!("four sets: budget hit after {nodes} nodes, c >= {best_lower_bound}")
        }
        other => println!("four sets: c = {}", other?.value),
    }
    Ok(())
}
