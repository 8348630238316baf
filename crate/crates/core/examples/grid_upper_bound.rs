//! Perturbed grid copies keep c small; the audit shows why.

use sametype::constructions::{perturbed_grid_family, ratio_bound, upper_bound_audit};
use sametype::geometry::ratio;
use sametype::sametype::c_exact;

fn main() -> sametype::Result<()> {
    for n in [5, 6, 8] {
        let pf = perturbed_grid_family(n, 2, 3, &ratio(1, 1000), 1)?;
        let c = c_exact(&pf.family)?;
        let audit = upper_bound_audit(&pf, &c.indices)?;
        println!("n = {n}: |X_i| = {}, c = {}, bound {}", pf.family.set(0).len(), c.value, ratio_bound(n, 2, 3));
        println!("  |Z_i| = {:?}, pigeonhole picks Z_{}", audit.z_sizes, audit.pigeon + 1);
        for q in audit.inequalities.iter().filter(|q| !q.name.starts_with("hyperplane")) {
            println!("  {}: {} <= {}", q.name, q.lhs, q.rhs);
        }
    }
    Ok(())
}
