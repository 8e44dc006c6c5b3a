use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{GridSpec, RealField, SpectralField};
use super::spectral::Spectral;
use crate::error::{check_range, Result};

/// Real trigonometric polynomial with random coefficients on the modes
/// `max(|k1|, |k2|) ≤ kmax`, amplitudes decaying like `(1 + |k|²)^{-1}`.
/// The result has zero mean and unit sup norm.
pub fn random_band_limited(grid: GridSpec, kmax: usize, seed: u64) -> Result<RealField> {
    let n = grid.n();
    check_range("kmax", kmax as f64, kmax >= 1 && kmax < n / 2, "1 <= kmax < n/2")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.len()];
    let wrap = |k: i64| -> usize { k.rem_euclid(n as i64) as usize };
    let km = kmax as i64;
    for k2 in -km..=km {
        for k1 in -km..=km {
            // one representative of each ±k pair
            if (k2, k1) <= (0, 0) {
                continue;
            }
            let amp = 1.0 / (1.0 + (k1 * k1 + k2 * k2) as f64);
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * amp;
            coeffs[wrap(k2) * n + wrap(k1)] = c;
            coeffs[wrap(-k2) * n + wrap(-k1)] = c.conj();
        }
    }
    let f = Spectral::new(grid).inverse(&SpectralField::from_raw(grid, coeffs));
    let m = f.max_abs();
    Ok(f.scale(1.0 / m))
}
