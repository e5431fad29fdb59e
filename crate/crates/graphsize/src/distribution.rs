//! Probability vectors over node indices.

use crate::error::{Error, Result};

const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
    cumulative: Vec<f64>,
}

fn cumulative_of(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    probs
        .iter()
        .map(|&p| {
            acc += p;
            acc
        })
        .collect()
}

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        for (i, &p) in probs.iter().enumerate() {
            if p < 0.0 {
                return Err(Error::NegativeProbability(p, i));
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized(sum));
        }
        let cumulative = cumulative_of(&probs);
        Ok(Distribution { probs, cumulative })
    }

    pub fn uniform(n: usize) -> Self {
        let probs = vec![1.0 / n as f64; n];
        let cumulative = cumulative_of(&probs);
        Distribution { probs, cumulative }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, u: usize) -> f64 {
        self.probs[u]
    }

    pub fn l2_norm(&self) -> f64 {
        self.probs.iter().map(|p| p * p).sum::<f64>().sqrt()
    }

    /// Samples an index by inverse transform (binary search on the
    /// cumulative distribution).
    pub fn sample(&self, rng: &mut impl rand::Rng) -> usize {
        let x: f64 = rng.gen::<f64>();
        let idx = self.cumulative.partition_point(|&c| c <= x);
        idx.min(self.probs.len() - 1)
    }
}

/// Total variation distance `(1/2) * sum |p(x) - q(x)|`.
pub fn tv_distance(p: &Distribution, q: &Distribution) -> Result<f64> {
    tv_distance_slices(p.probs(), q.probs())
}

/// Slice form used internally where raw iterates are not yet normalized
/// distributions.
pub fn tv_distance_slices(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch(p.len(), q.len()));
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unnormalized_and_negative() {
        assert!(matches!(
            Distribution::new(vec![0.5, 0.6]),
            Err(Error::NotNormalized(_))
        ));
        assert!(matches!(
            Distribution::new(vec![-0.1, 1.1]),
            Err(Error::NegativeProbability(_, 0))
        ));
    }

    #[test]
    fn tv_examples() {
        let p = Distribution::new(vec![0.5, 0.5]).unwrap();
        let q = Distribution::new(vec![0.75, 0.25]).unwrap();
        assert_eq!(tv_distance(&p, &p).unwrap(), 0.0);
        assert!((tv_distance(&p, &q).unwrap() - 0.25).abs() < 1e-15);
        let a = Distribution::new(vec![1.0, 0.0]).unwrap();
        let b = Distribution::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(tv_distance(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn tv_length_mismatch() {
        let p = Distribution::uniform(2);
        let q = Distribution::uniform(3);
        assert!(matches!(
            tv_distance(&p, &q),
            Err(Error::LengthMismatch(2, 3))
        ));
    }

    #[test]
    fn sampling_hits_support_only() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        let d = Distribution::new(vec![0.0, 0.3, 0.7]).unwrap();
        for _ in 0..1000 {
            assert_ne!(d.sample(&mut rng), 0);
        }
    }
}
