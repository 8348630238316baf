//! A partition sweep rendered as CSV, as `sametype sweep` does.

use sametype::cli::{run_sweep, SweepConfig};

fn main() -> sametype::Result<()> {
    let cfg: SweepConfig = toml::from_str(
        r#"
        command = "partition"
        [grid]
        n = [64, 128]
        J = [1, 2, 3, 4]
        seed = [1]
        "#,
    )
    .expect("valid config");
    let (csv, rows, failed) = run_sweep(&cfg, Some(2))?;
    print!("{csv}");
    eprintln!("{rows} rows, {failed} failed");
    Ok(())
}
