use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::seed::{fnv1a64, mix64};

/// Sentence encoder contract used for the post view.
pub trait TextEmbedder {
    fn dimension(&self) -> usize;
    /// Always returns exactly `dimension()` entries.
    fn embed(&self, text: &str) -> Vec<f64>;
}

/// Feature-hashing embedder over unigrams and bigrams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HashedEmbedder {
    pub dimension: usize,
    pub seed: u64,
}

impl HashedEmbedder {
    pub fn new(dimension: usize, seed: u64) -> Self {
        assert!(dimension >= 1, "embedding dimension must be positive");
        Self { dimension, seed }
    }
}

impl Default for HashedEmbedder {
    fn default() -> Self {
        Self { dimension: 256, seed: 0 }
    }
}

impl TextEmbedder for HashedEmbedder {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn embed(&self, text: &str) -> Vec<f64> {
        hashed_text_embed(text, self.dimension, self.seed)
    }
}

fn tokens(text: &str) -> Vec<alloc::string::String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.chars().flat_map(char::to_lowercase).collect())
        .collect()
}

/// Signed-hash term-frequency vector of unigrams and bigrams, L2-normalized.
pub fn hashed_text_embed(text: &str, dimension: usize, seed: u64) -> Vec<f64> {
    assert!(dimension >= 1, "embedding dimension must be positive");
    let mut out = vec![0.0; dimension];
    let toks = tokens(text);
    let mut add = |key: u64| {
        let h = mix64(key ^ mix64(seed));
        let index = (h % dimension as u64) as usize;
        let sign = if h >> 63 == 0 { 1.0 } else { -1.0 };
        out[index] += sign;
    };
    for t in &toks {
        add(fnv1a64(t.as_bytes()));
    }
    for pair in toks.windows(2) {
        // Distinct domain from unigrams: hash of the first token seeds the second.
        let first = fnv1a64(pair[0].as_bytes());
        add(mix64(first ^ 0x6269_6772_616d) ^ fnv1a64(pair[1].as_bytes()));
    }
    let norm = libm::sqrt(out.iter().map(|v| v * v).sum());
    if norm > 0.0 {
        out.iter_mut().for_each(|v| *v /= norm);
    }
    out
}

/// Arithmetic mean of the post embeddings; zero vector for no posts.
pub fn post_view<E: TextEmbedder + ?Sized, S: AsRef<str>>(embedder: &E, posts: &[S]) -> Vec<f64> {
    let mut mean = vec![0.0; embedder.dimension()];
    if posts.is_empty() {
        return mean;
    }
    for post in posts {
        for (m, v) in mean.iter_mut().zip(embedder.embed(post.as_ref())) {
            *m += v;
        }
    }
    let n = posts.len() as f64;
    mean.iter_mut().for_each(|m| *m /= n);
    mean
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Fixed;

    impl TextEmbedder for Fixed {
        fn dimension(&self) -> usize {
            2
        }
        fn embed(&self, text: &str) -> Vec<f64> {
            if text == "x" {
                vec![1.0, 0.0]
            } else {
                vec![0.0, 1.0]
            }
        }
    }

    #[test]
    fn empty_text_is_zero() {
        assert_eq!(hashed_text_embed("", 16, 3), vec![0.0; 16]);
        assert_eq!(hashed_text_embed(" ,.; ", 16, 3), vec![0.0; 16]);
    }

    #[test]
    fn deterministic_and_normalized() {
        let a = hashed_text_embed("the quick brown fox", 64, 1);
        assert_eq!(a, hashed_text_embed("the quick brown fox", 64, 1));
        let norm: f64 = a.iter().map(|v| v * v).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        assert_ne!(a, hashed_text_embed("the quick brown fox", 64, 2));
    }

    #[test]
    fn word_order_changes_only_bigrams() {
        let e = HashedEmbedder::new(256, 0);
        let a = e.embed("cat sat");
        let b = e.embed("sat cat");
        assert_ne!(a, b);
        // Same unigram multiset: the unnormalized difference is just the bigram terms.
        let uni = hashed_text_embed("cat", 256, 0);
        let uni2 = hashed_text_embed("sat", 256, 0);
        let support = |v: &[f64]| v.iter().position(|x| *x != 0.0).unwrap();
        let (i, j) = (support(&uni), support(&uni2));
        assert!(a[i] != 0.0 && b[i] != 0.0 && a[j] != 0.0 && b[j] != 0.0);
    }

    #[test]
    fn post_view_means() {
        let e = HashedEmbedder::new(32, 9);
        assert_eq!(post_view(&e, &["hello there"]), e.embed("hello there"));
        let same = post_view(&e, &["a b", "a b", "a b"]);
        let single = e.embed("a b");
        assert!(same.iter().zip(&single).all(|(x, y)| (x - y).abs() < 1e-15));
        assert_eq!(post_view(&Fixed, &["x", "y"]), vec![0.5, 0.5]);
        assert_eq!(post_view::<_, &str>(&e, &[]), vec![0.0; 32]);
    }
}
