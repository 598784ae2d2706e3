use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::{NlpError, Tokenizer};

/// Maps text to a fixed-width real vector. Implementations must be
/// deterministic and return finite values.
pub trait EmbeddingProvider: Send + Sync {
    fn dim(&self) -> usize;
    fn embed(&self, text: &str) -> Vec<f64>;
}

/// `u·v / (|u||v|)`, clamped to `[-1, 1]`.
pub fn cosine_similarity(u: &[f64], v: &[f64]) -> Result<f64, NlpError> {
    if u.len() != v.len() {
        return Err(NlpError::DimensionMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    let (mut dot, mut nu, mut nv) = (0.0, 0.0, 0.0);
    for (a, b) in u.iter().zip(v) {
        dot += a * b;
        nu += a * a;
        nv += b * b;
    }
    if nu == 0.0 || nv == 0.0 {
        return Err(NlpError::ZeroVector);
    }
    Ok((dot / (nu.sqrt() * nv.sqrt())).clamp(-1.0, 1.0))
}

/// Model-free provider: every token gets a pseudo-random unit vector seeded
/// by its bytes (and a salt), and a text embeds as the normalized mean of its
/// token vectors. Text without tokens embeds as the zero vector.
#[derive(Debug, Clone)]
pub struct HashEmbedding {
    dim: usize,
    salt: u64,
    tokenizer: Tokenizer,
}

impl HashEmbedding {
    pub fn new(dim: usize, salt: u64) -> Self {
        Self::with_tokenizer(dim, salt, Tokenizer::default())
    }

    pub fn with_tokenizer(dim: usize, salt: u64, tokenizer: Tokenizer) -> Self {
        assert!(dim > 0, "embedding dimension must be positive");
        HashEmbedding { dim, salt, tokenizer }
    }

    pub fn token_vector(&self, token: &str) -> Vec<f64> {
        let mut h = Sha256::new();
        h.update(self.salt.to_le_bytes());
        h.update(token.as_bytes());
        let digest = h.finalize();
        let mut seed = [0u8; 32];
        seed.copy_from_slice(&digest[..32]);
        let mut rng = ChaCha8Rng::from_seed(seed);
        let mut v: Vec<f64> = (0..self.dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        normalize(&mut v);
        v
    }
}

fn normalize(v: &mut [f64]) {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

impl EmbeddingProvider for HashEmbedding {
    fn dim(&self) -> usize {
        self.dim
    }

    fn embed(&self, text: &str) -> Vec<f64> {
        let mut acc = vec![0.0; self.dim];
        for tok in self.tokenizer.tokenize(text) {
            for (a, x) in acc.iter_mut().zip(self.token_vector(&tok)) {
                *a += x;
            }
        }
        normalize(&mut acc);
        acc
    }
}
