use crate::measurement::{measure, prepare_along, Direction, RandomSource};
use crate::{Error, Result};

/// Draws `n` bits by measuring `|+z⟩` along x; `true` is the +1 outcome.
pub fn qrng_bits(n: usize, rng: &mut RandomSource) -> Result<Vec<bool>> {
    if n == 0 {
        return Err(Error::InvalidArgument("bit count must be positive".into()));
    }
    let source = prepare_along(Direction::z());
    (0..n)
        .map(|_| Ok(measure(&source, 0, Direction::x(), rng)?.value.bit()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let a = qrng_bits(64, &mut RandomSource::new(3, 0)).unwrap();
        let b = qrng_bits(64, &mut RandomSource::new(3, 0)).unwrap();
        let c = qrng_bits(64, &mut RandomSource::new(4, 0)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn roughly_balanced() {
        let bits = qrng_bits(10_000, &mut RandomSource::new(8, 0)).unwrap();
        let ones = bits.iter().filter(|&&b| b).count() as f64;
        assert!((ones / 10_000.0 - 0.5).abs() < 0.03);
    }

    #[test]
    fn zero_bits_rejected() {
        assert!(qrng_bits(0, &mut RandomSource::new(0, 0)).is_err());
    }
}
