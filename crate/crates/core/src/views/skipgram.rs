use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;

use super::node2vec::Node2VecConfig;
use crate::seed;

const MIN_LEARNING_RATE: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct SkipGramModel {
    /// One vector per node; zero for nodes that never appeared in a
    /// (center, context) pair.
    pub vectors: Vec<Vec<f64>>,
    /// Mean negative-sampling loss per epoch, measured before each update.
    pub epoch_losses: Vec<f64>,
}

fn exact_terms(s: f64) -> (f64, f64, f64) {
    let e = libm::exp(-s.abs());
    let l = libm::log1p(e);
    let sig = if s >= 0.0 { 1.0 / (1.0 + e) } else { e / (1.0 + e) };
    (sig, -(l + (-s).max(0.0)), -(l + s.max(0.0)))
}

const TABLE_RANGE: f64 = 8.0;
const TABLE_BINS: usize = 4096;

/// Linearly interpolated `σ(s)` and `ln σ(s)` on `[-8, 8]`; exact outside.
struct SigmoidTable {
    sig: Vec<f64>,
    log_sig: Vec<f64>,
}

impl SigmoidTable {
    fn new() -> Self {
        let (sig, log_sig) = (0..=TABLE_BINS)
            .map(|i| {
                let s = -TABLE_RANGE + 2.0 * TABLE_RANGE * i as f64 / TABLE_BINS as f64;
                let (sig, log_pos, _) = exact_terms(s);
                (sig, log_pos)
            })
            .unzip();
        Self { sig, log_sig }
    }

    /// `(σ(s), ln σ(s), ln σ(−s))`.
    fn terms(&self, s: f64) -> (f64, f64, f64) {
        if !(s > -TABLE_RANGE && s < TABLE_RANGE) {
            return exact_terms(s.clamp(-30.0, 30.0));
        }
        let pos = (s + TABLE_RANGE) * (TABLE_BINS as f64 / (2.0 * TABLE_RANGE));
        let i = (pos as usize).min(TABLE_BINS - 1);
        let frac = pos - i as f64;
        let lerp = |t: &[f64]| t[i] + frac * (t[i + 1] - t[i]);
        let sig = lerp(&self.sig);
        let log_pos = lerp(&self.log_sig);
        // ln σ(−s) = ln σ(s) − s
        (sig, log_pos, log_pos - s)
    }
}

/// Walker alias table for O(1) draws from a discrete distribution.
struct AliasTable {
    probability: Vec<f64>,
    alias: Vec<usize>,
}

impl AliasTable {
    fn new(weights: &[f64]) -> Self {
        let n = weights.len();
        let total: f64 = weights.iter().sum();
        let mut scaled: Vec<f64> =
            weights.iter().map(|w| if total > 0.0 { w * n as f64 / total } else { 1.0 }).collect();
        let mut alias = vec![0; n];
        let (mut small, mut large): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| scaled[i] < 1.0);
        while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
            small.pop();
            alias[s] = l;
            scaled[l] -= 1.0 - scaled[s];
            if scaled[l] < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        for i in small.into_iter().chain(large) {
            scaled[i] = 1.0;
        }
        Self { probability: scaled, alias }
    }

    fn sample(&self, rng: &mut seed::Rng) -> usize {
        let i = rng.random_range(0..self.probability.len());
        if rng.random::<f64>() < self.probability[i] {
            i
        } else {
            self.alias[i]
        }
    }
}

fn dot(a: &[f32], b: &[f32]) -> f64 {
    let mut acc = [0.0f32; 8];
    let (ca, ra) = (a.chunks_exact(8), a.chunks_exact(8).remainder());
    for (x, y) in ca.zip(b.chunks_exact(8)) {
        for k in 0..8 {
            acc[k] += x[k] * y[k];
        }
    }
    let tail: f32 = ra.iter().zip(&b[a.len() - ra.len()..]).map(|(x, y)| x * y).sum();
    f64::from(acc.iter().sum::<f32>() + tail)
}

/// Skip-gram with negative sampling over walk windows.
///
/// For each center the effective window is drawn uniformly from
/// `1..=config.window`, as in the reference word2vec trainer. Noise nodes
/// are drawn from walk frequencies raised to 0.75. The learning rate
/// decays linearly to 1e-4 over all epochs. Single-threaded and
/// deterministic for a fixed `config.seed`.
pub fn skipgram_train(walks: &[Vec<usize>], node_count: usize, config: &Node2VecConfig) -> SkipGramModel {
    let dim = config.dimension;
    let mut rng = seed::rng(seed::derive(config.seed, 0x5347_4e53));

    let mut frequency = vec![0u64; node_count];
    for w in walks {
        for &n in w {
            frequency[n] += 1;
        }
    }
    let noise = AliasTable::new(&frequency.iter().map(|&f| libm::pow(f as f64, 0.75)).collect::<Vec<_>>());
    let table = SigmoidTable::new();

    // Parameters are held in single precision, as in the reference trainer.
    let mut input: Vec<f32> =
        (0..node_count * dim).map(|_| ((rng.random::<f64>() - 0.5) / dim as f64) as f32).collect();
    let mut output = vec![0.0f32; node_count * dim];
    let mut trained = vec![false; node_count];

    let tokens: usize = walks.iter().map(Vec::len).sum();
    let total_steps = (tokens * config.epochs).max(1) as f64;
    let mut processed = 0usize;
    let mut grad = vec![0.0f32; dim];
    let mut epoch_losses = Vec::with_capacity(config.epochs);

    for _ in 0..config.epochs {
        let (mut loss, mut pairs) = (0.0, 0usize);
        for walk in walks {
            for (i, &center) in walk.iter().enumerate() {
                let lr = config.learning_rate
                    - (config.learning_rate - MIN_LEARNING_RATE) * (processed as f64 / total_steps);
                let lr = lr.max(MIN_LEARNING_RATE);
                processed += 1;
                let window = rng.random_range(1..=config.window);
                let lo = i.saturating_sub(window);
                let hi = (i + window + 1).min(walk.len());
                for (j, &context) in walk.iter().enumerate().take(hi).skip(lo) {
                    if j == i {
                        continue;
                    }
                    trained[center] = true;
                    pairs += 1;
                    grad.iter_mut().for_each(|g| *g = 0.0);
                    let center_vec = &mut input[center * dim..(center + 1) * dim];
                    for s in 0..=config.negative_samples {
                        let (target, positive) = if s == 0 {
                            (context, true)
                        } else {
                            let t = noise.sample(&mut rng);
                            if t == context {
                                continue;
                            }
                            (t, false)
                        };
                        let out = &mut output[target * dim..(target + 1) * dim];
                        let (sig, log_pos, log_neg) = table.terms(dot(center_vec, out));
                        let (label, log_p) = if positive { (1.0, log_pos) } else { (0.0, log_neg) };
                        loss -= log_p;
                        let g = ((label - sig) * lr) as f32;
                        for ((gr, o), x) in grad.iter_mut().zip(out.iter_mut()).zip(center_vec.iter()) {
                            *gr += g * *o;
                            *o += g * x;
                        }
                    }
                    for (x, gr) in center_vec.iter_mut().zip(&grad) {
                        *x += gr;
                    }
                }
            }
        }
        epoch_losses.push(if pairs == 0 { 0.0 } else { loss / pairs as f64 });
    }

    let vectors = input
        .chunks_exact(dim)
        .zip(&trained)
        .map(|(v, &seen)| if seen { v.iter().map(|&x| f64::from(x)).collect() } else { vec![0.0; dim] })
        .collect();
    SkipGramModel { vectors, epoch_losses }
}
