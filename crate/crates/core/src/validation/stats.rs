use crate::error::{Error, Result};

/// Pearson correlation over the rows where both vectors are non-null.
///
/// A constant vector has no defined correlation; it yields 0.
pub fn pearson(u: &[Option<f64>], v: &[Option<f64>]) -> Result<f64> {
    let pairs: Vec<(f64, f64)> = u
        .iter()
        .zip(v)
        .filter_map(|(a, b)| Some(((*a)?, (*b)?)))
        .collect();
    if pairs.len() < 2 {
        return Err(Error::InsufficientOverlap(pairs.len()));
    }
    let n = pairs.len() as f64;
    let mu = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let mv = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut suv, mut suu, mut svv) = (0.0, 0.0, 0.0);
    for &(a, b) in &pairs {
        let (da, db) = (a - mu, b - mv);
        suv += da * db;
        suu += da * da;
        svv += db * db;
    }
    if suu == 0.0 || svv == 0.0 {
        return Ok(0.0);
    }
    Ok((suv / (suu.sqrt() * svv.sqrt())).clamp(-1.0, 1.0))
}

pub fn pearson_dense(u: &[f64], v: &[f64]) -> Result<f64> {
    let wrap = |xs: &[f64]| xs.iter().copied().map(Some).collect::<Vec<_>>();
    pearson(&wrap(u), &wrap(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_and_negation() {
        let u = [1.0, 4.0, 2.0, 8.0];
        let neg: Vec<f64> = u.iter().map(|x| -x).collect();
        assert!((pearson_dense(&u, &u).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson_dense(&u, &neg).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn hand_computed() {
        // Means 2.5 and 2.75; deviations (-1.5,-0.5,0.5,1.5) and (-1.75,-0.75,0.25,2.25).
        // Sxy = 2.625+0.375+0.125+3.375 = 6.5, Sxx = 5, Syy = 3.0625+0.5625+0.0625+5.0625 = 8.75.
        let expected = 6.5 / (5.0f64 * 8.75).sqrt();
        let r = pearson_dense(&[1.0, 2.0, 3.0, 4.0], &[1.0, 2.0, 3.0, 5.0]).unwrap();
        assert!((r - expected).abs() < 1e-14);
    }

    #[test]
    fn constant_is_zero_and_nulls_are_skipped() {
        assert_eq!(
            pearson_dense(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).unwrap(),
            0.0
        );
        let u = [Some(1.0), None, Some(2.0), Some(3.0)];
        let v = [Some(2.0), Some(100.0), Some(4.0), Some(6.0)];
        assert!((pearson(&u, &v).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            pearson(&[Some(1.0), None], &[None, Some(1.0)]),
            Err(Error::InsufficientOverlap(0))
        ));
    }
}
