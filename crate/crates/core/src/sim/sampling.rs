use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use super::ProbDist;
use crate::error::{domain, Error, Result};

/// Deterministic generator for a seed and stream index.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Multinomial outcome counts for `shots` draws from `dist`.
pub fn sample_counts(dist: &ProbDist, shots: u64, seed: u64) -> Result<Vec<u64>> {
    let mut rng = seeded_rng(seed, 0);
    multinomial(dist.probs(), shots, &mut rng)
}

/// Multinomial sampling by successive conditional binomials.
pub(crate) fn multinomial<R: rand::Rng + ?Sized>(
    probs: &[f64],
    shots: u64,
    rng: &mut R,
) -> Result<Vec<u64>> {
    if shots == 0 {
        return domain("shots must be >= 1");
    }
    let mut counts = vec![0u64; probs.len()];
    let mut remaining = shots;
    let mut mass = 1.0f64;
    for (i, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if i + 1 == probs.len() || mass <= 0.0 {
            counts[i] = remaining;
            break;
        }
        let q = (p / mass).clamp(0.0, 1.0);
        let k = Binomial::new(remaining, q)
            .map_err(|e| Error::Numerical(format!("binomial({remaining}, {q}): {e}")))?
            .sample(rng);
        counts[i] = k;
        remaining -= k;
        mass -= p;
    }
    Ok(counts)
}
