use crate::error::{Error, Result};

/// Fraction of `values` that are `<= x`, in `(0, 1]` whenever `x` belongs to `values`.
pub fn percentile_scale(x: f64, values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyCollection);
    }
    let below = values.iter().filter(|&&v| v <= x).count();
    Ok(below as f64 / values.len() as f64)
}

/// Percentile-scale every value of `values` against the whole slice.
pub fn percentile_scale_all(values: &[f64]) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    values
        .iter()
        .map(|&x| sorted.partition_point(|&v| v <= x) as f64 / n)
        .collect()
}

/// Attenuation coefficient for an indicator read through a path of `path_len` steps.
pub fn attenuation(path_len: usize) -> f64 {
    1.0 / (1.0 + path_len as f64)
}
