//! Subset bitmask helpers.
//!
//! A subset S of {1, .., n} is a `u64` mask with bit i-1 set when element i
//! belongs to S. Tables indexed by subsets run in ascending mask order.

/// Number of subsets of an n-element ground set.
#[inline]
pub fn table_len(arity: usize) -> usize {
    1usize << arity
}

/// Cardinality of the subset encoded by `mask`.
#[inline]
pub fn cardinality(mask: u64) -> usize {
    mask.count_ones() as usize
}

/// Exact binomial coefficient. Callers keep `n` small (at most 20 in this
/// crate), well within u64 range.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for j in 0..k {
        acc = acc * (n - j) as u64 / (j + 1) as u64;
    }
    acc
}

/// The 1-based elements of a subset mask, ascending.
pub fn elements(mask: u64) -> impl Iterator<Item = usize> {
    (0..64)
        .filter(move |i| mask >> i & 1 == 1)
        .map(|i| i + 1)
}

/// Render a mask as `{}`, `{1}`, `{1,3}`, ... for messages and reports.
pub fn format_subset(mask: u64) -> String {
    let inner: Vec<String> = elements(mask).map(|i| i.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}
