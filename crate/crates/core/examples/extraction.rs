//! Extracting a large same-type subfamily from five clustered sets.

use sametype::constructions::{clustered_family, Layout};
use sametype::extraction::{extract_same_type, ExtractionConfig};

fn main() -> sametype::Result<()> {
    let f = clustered_family(5, 2, 200, Layout::Mixed, 1)?;
    let report = extract_same_type(&f, &ExtractionConfig::new(16, 1))?;
    for (i, s) in report.sets.iter().enumerate() {
        println!(
            "X{}: {} cells (Warren bound {}), {} heavy above {}, kept {} points",
            i + 1,
            s.k,
            s.warren_bound,
            s.heavy_cells,
            s.threshold,
            report.subsets[i].len()
        );
    }
    let edges: usize = report.edge_counts.values().sum();
    println!("{edges} piercing edges, {} resampling rounds", report.rounds);
    println!("same type: {}, fraction {}", report.verdict.holds, report.fraction);
    Ok(())
}
