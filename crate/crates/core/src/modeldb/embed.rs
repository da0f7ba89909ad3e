//! Signed feature hashing of lowercase alphanumeric tokens.
//!
//! Each token is hashed with 64-bit FNV-1a whose offset basis is xor-ed with
//! [`HASH_SEED`]. The low 8 bits pick one of 256 dimensions and bit 8 picks
//! the sign. The accumulated vector is L2-normalized; text without tokens
//! embeds to the zero vector.

pub const DIM: usize = 256;
pub const HASH_SEED: u64 = 0xfb1e_4a6f_272b_9a6c;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

pub fn token_hash(token: &str) -> u64 {
    let mut h = FNV_OFFSET ^ HASH_SEED;
    for b in token.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

pub fn tokens(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_ascii_alphanumeric()).filter(|t| !t.is_empty()).map(str::to_ascii_lowercase)
}

/// Text embedding interface; vectors produced by any implementation are
/// persisted in the bundle, so queries must use the same embedder.
pub trait Embedder {
    fn embed(&self, text: &str) -> Vec<f64>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct HashEmbedder;

impl Embedder for HashEmbedder {
    fn embed(&self, text: &str) -> Vec<f64> {
        embed_text(text)
    }
}

pub fn embed_text(text: &str) -> Vec<f64> {
    let mut v = vec![0.0; DIM];
    for t in tokens(text) {
        let h = token_hash(&t);
        let idx = (h & 0xff) as usize;
        let sign = if (h >> 8) & 1 == 1 { -1.0 } else { 1.0 };
        v[idx] += sign;
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    v
}

/// Cosine similarity; 0 when either vector is zero.
pub fn cosine(a: &[f64], b: &[f32]) -> f64 {
    let (mut dot, mut na, mut nb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let y = f64::from(*y);
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na.sqrt() * nb.sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn as_f32(v: &[f64]) -> Vec<f32> {
        v.iter().map(|x| *x as f32).collect()
    }

    #[test]
    fn unit_norm_and_empty() {
        let n: f64 = embed_text("chair").iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((n - 1.0).abs() < 1e-9);
        assert!(embed_text("").iter().all(|x| *x == 0.0));
        assert!(embed_text("  --  ").iter().all(|x| *x == 0.0));
    }

    #[test]
    fn order_and_case_invariant() {
        let a = embed_text("red chair");
        assert_eq!(a, embed_text("Chair RED"));
        assert!((cosine(&a, &as_f32(&embed_text("chair red"))) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn different_words_differ() {
        assert!(cosine(&embed_text("red chair"), &as_f32(&embed_text("blue table"))) < 0.9);
    }
}
