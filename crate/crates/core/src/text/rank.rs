use std::collections::HashMap;

pub const DEFAULT_TOP_N: usize = 100;

/// 1-based ranks of the `top_n` largest components, ties broken towards the
/// lower dimension index. Keyed by dimension.
fn top_ranks(v: &[f64], top_n: usize) -> HashMap<usize, usize> {
    let mut dims: Vec<usize> = (0..v.len()).collect();
    dims.sort_by(|&a, &b| v[b].total_cmp(&v[a]).then(a.cmp(&b)));
    dims.into_iter()
        .take(top_n)
        .enumerate()
        .map(|(rank, dim)| (dim, rank + 1))
        .collect()
}

/// Rank-overlap similarity: over the dimensions present in both vectors'
/// top-`top_n` lists, sums `2 / (rank_u + rank_v)`.
pub fn rank_similarity(u: &[f64], v: &[f64], top_n: usize) -> f64 {
    assert_eq!(u.len(), v.len(), "rank_similarity needs equal dimensions");
    let ru = top_ranks(u, top_n);
    let rv = top_ranks(v, top_n);
    let mut shared: Vec<(usize, usize, usize)> = ru
        .iter()
        .filter_map(|(&dim, &a)| rv.get(&dim).map(|&b| (dim, a, b)))
        .collect();
    shared.sort_unstable();
    shared
        .into_iter()
        .map(|(_, a, b)| 2.0 / (a + b) as f64)
        .sum()
}
