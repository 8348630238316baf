//! Epsilon-approximants for few-facet polytopes and their effect on c.

use sametype::approx::{approximant_size, compare_c, eps_approximant, ApproxConfig};
use sametype::geometry::ratio;
use sametype::rng;
use sametype::sametype::CExactBudget;
use sametype::{Family, PointSet};

fn random_set(r: &mut rng::Rng, label: &str, n: usize) -> PointSet {
    loop {
        let pts = (0..n).map(|_| rng::point_near(r, &[ratio(0, 1), ratio(0, 1)], 1_000_000, 1000)).collect();
        if let Ok(s) = PointSet::new(label, pts) {
            return s;
        }
    }
}

fn main() -> sametype::Result<()> {
    let mut r = rng::seeded(2);
    let x = random_set(&mut r, "X", 2000);
    let cfg = ApproxConfig::new(ratio(1, 10), 4);
    println!("size guaranteed for eps = 1/10, m = 3: {}", approximant_size(3, 2, &cfg));

    let sampled = ApproxConfig { size_override: Some(500), ..cfg };
    let a = eps_approximant(&x, 3, &sampled)?;
    println!(
        "500-point sample: max discrepancy {} over {} ranges after {} attempt(s)",
        a.max_discrepancy, a.ranges, a.attempts
    );

    let sets: Vec<PointSet> = (1..=3).map(|i| random_set(&mut r, &format!("X{i}"), 8)).collect();
    let f = Family::verified(2, sets)?;
    let cfg = ApproxConfig { size_override: Some(6), ..ApproxConfig::new(ratio(1, 4), 1) };
    let c = compare_c(&f, &cfg, CExactBudget::default())?;
    println!("c(X) = {}, c(A) = {}, gap {} <= eps {}", c.c_x, c.c_a, c.gap, c.eps);
    Ok(())
}
