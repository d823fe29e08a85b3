//! Size and probe thresholds of the data structure.
//!
//! Every accept/reject decision compares integers exactly (squaring both
//! sides), so no decision depends on float rounding. The `f64` helpers are
//! for reporting and for the sample count, which is rounded up by definition.

/// `lg x` in base 2.
#[inline]
pub fn lg(x: f64) -> f64 {
    libm::log2(x)
}

/// `ceil(lg x)` for `x >= 1`.
pub fn ceil_log2(x: u64) -> u32 {
    assert!(x >= 1);
    if x == 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// `n^{3/2} / sqrt(w)`: minimum fresh coverage of an accepted pair, and the
/// failure threshold on the remaining set.
pub fn cover_threshold(n: usize, w: u32) -> f64 {
    let n = n as f64;
    n * libm::sqrt(n) / libm::sqrt(w as f64)
}

/// `count >= n^{3/2} / sqrt(w)`, exactly.
#[inline]
pub fn meets_cover_threshold(count: usize, n: usize, w: u32) -> bool {
    let c = count as u128;
    let n = n as u128;
    c * c * w as u128 >= n * n * n
}

/// `ones / size <= 1 / sqrt(n w)`, exactly; an empty slice passes.
#[inline]
pub fn density_ok(ones: usize, size: usize, n: usize, w: u32) -> bool {
    if size == 0 {
        return true;
    }
    let (o, s) = (ones as u128, size as u128);
    o * o * (n as u128) * (w as u128) <= s * s
}

/// `pairs <= sqrt(n w)`, exactly.
pub fn pair_count_ok(pairs: usize, n: usize, w: u32) -> bool {
    let p = pairs as u128;
    p * p <= n as u128 * w as u128
}

/// `ones <= n^{3/2} / sqrt(w)`, exactly.
pub fn ones_count_ok(ones: usize, n: usize, w: u32) -> bool {
    let o = ones as u128;
    let n = n as u128;
    o * o * w as u128 <= n * n * n
}

/// Step-2 samples per row: `ceil(2 sqrt(n w) lg n)`.
pub fn sample_count(n: usize, w: u32) -> usize {
    let s = 2.0 * libm::sqrt(n as f64 * w as f64) * lg(n as f64);
    libm::ceil(s) as usize
}

/// Per-query matrix word probe limit without fallback:
/// `n * ceil(2 sqrt(n w) lg n) + n^{3/2} / sqrt(w)`.
pub fn probe_limit(n: usize, w: u32) -> f64 {
    (n * sample_count(n, w)) as f64 + cover_threshold(n, w)
}

/// Headline probe scale `n^{3/2} sqrt(w) lg n` (asymptotic, constant 1).
pub fn headline_probe_bound(n: usize, w: u32) -> f64 {
    let nf = n as f64;
    nf * libm::sqrt(nf) * libm::sqrt(w as f64) * lg(nf)
}

/// Width of a row or column coordinate: `ceil(lg n)`.
pub fn coord_width(n: usize) -> u32 {
    ceil_log2(n as u64)
}

/// Smallest `k >= 0` with `4^k * scale >= target`.
fn quarter_log_ceil(target: u128, scale: u128) -> u32 {
    let mut k = 0;
    let mut p = scale;
    while p < target {
        p *= 4;
        k += 1;
    }
    k
}

/// Pair-count field width `ceil(lg sqrt(n w) + 1)`.
pub fn pair_count_width(n: usize, w: u32) -> u32 {
    1 + quarter_log_ceil(n as u128 * w as u128, 1)
}

/// Ones-count field width `ceil(lg(n^{3/2} / sqrt(w)) + 1)`, at least 1.
pub fn ones_count_width(n: usize, w: u32) -> u32 {
    let n = n as u128;
    1 + quarter_log_ceil(n * n * n, w as u128)
}

/// Serialized-size bound: `2n sqrt(n w) + 2 ceil(lg n) n^{3/2}/sqrt(w) + header`.
pub fn redundancy_size_bound(n: usize, w: u32) -> f64 {
    let nf = n as f64;
    let header = (pair_count_width(n, w) + ones_count_width(n, w)) as f64;
    2.0 * nf * libm::sqrt(nf * w as f64) + 2.0 * coord_width(n) as f64 * cover_threshold(n, w) + header
}
