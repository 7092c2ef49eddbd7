use crate::error::{Error, Result};

/// var_n of a step function of level m given by its 2^m cylinder values
/// (lexicographic order): the largest |f(x) − f(y)| over pairs agreeing on
/// their first n symbols. var_0 is the full oscillation.
pub fn variation_of_step_table(values: &[f64], n: usize) -> Result<f64> {
    let m = level_of_table(values.len())?;
    if n > m {
        return Err(Error::usage(format!("variation level {n} exceeds table level {m}")));
    }
    // words sharing their first n symbols form contiguous blocks of 2^{m−n}
    let block = 1usize << (m - n);
    Ok(values
        .chunks(block)
        .map(|chunk| {
            let (lo, hi) = chunk
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
            hi - lo
        })
        .fold(0.0, f64::max))
}

/// m such that len = 2^m.
pub(crate) fn level_of_table(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::usage(format!(
            "table of {len} values does not cover Σ_m for any m"
        )));
    }
    Ok(len.trailing_zeros() as usize)
}
