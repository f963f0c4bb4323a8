//! Seeded random draws of parameters and initial states.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Parameters, State};

/// Environment variable that overrides [`DEFAULT_SEED`].
pub const SEED_ENV_VAR: &str = "MOSQDYN_SEED";
pub const DEFAULT_SEED: u64 = 20_240_917;

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform draw from `(0, 1]`.
pub fn unit_open_closed<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.gen::<f64>()
}

/// `α, β, μ` uniform in `(0, 1]` with `|β − μ| > min_gap`, no larval death.
pub fn random_w0_parameters<R: Rng + ?Sized>(rng: &mut R, min_gap: f64) -> Parameters {
    loop {
        let alpha = unit_open_closed(rng);
        let beta = unit_open_closed(rng);
        let mu = unit_open_closed(rng);
        if (beta - mu).abs() > min_gap {
            return Parameters::w0(alpha, beta, mu);
        }
    }
}

/// Uniform point of `[0, extent]²`.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, extent: f64) -> State {
    State::new(rng.gen_range(0.0..=extent), rng.gen_range(0.0..=extent))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ValidationMode;

    #[test]
    fn draws_are_valid_and_reproducible() {
        let mut a = rng_from_seed(7);
        let mut b = rng_from_seed(7);
        for _ in 0..1000 {
            let p = random_w0_parameters(&mut a, 0.01);
            assert!(p.validate(ValidationMode::W0).is_valid());
            assert!((p.beta - p.mu).abs() > 0.01);
            assert_eq!(p, random_w0_parameters(&mut b, 0.01));
        }
    }
}
