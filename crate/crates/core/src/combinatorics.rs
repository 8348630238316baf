//! Small enumeration helpers.

/// Visits every `k`-subset of `0..n` in lexicographic order. The callback
/// returns `false` to stop early; the function returns `false` iff stopped.
pub fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    if k > n {
        return true;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    'outer: loop {
        if !f(&idx) {
            return false;
        }
        // Advance the rightmost index that can still move.
        for i in (0..k).rev() {
            if idx[i] != i + n - k {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                continue 'outer;
            }
        }
        return true;
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_combination(n, k, |c| {
        out.push(c.to_vec());
        true
    });
    out
}

/// Visits every tuple of the mixed-radix product `sizes[0] x sizes[1] x ...`.
pub fn for_each_product(sizes: &[usize], mut f: impl FnMut(&[usize]) -> bool) -> bool {
    if sizes.iter().any(|&s| s == 0) {
        return true;
    }
    let mut idx = vec![0usize; sizes.len()];
    loop {
        if !f(&idx) {
            return false;
        }
        let mut i = sizes.len();
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < sizes[i] {
                break;
            }
            idx[i] = 0;
        }
    }
}
