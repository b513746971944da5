//! The 10-dimensional account-pair representation: five similarity-based
//! features in `[0, 1]` followed by five absolute differences.

use serde::{Deserialize, Serialize};

use crate::graph::{name_key, name_similarity};
use crate::profile::AccountProfile;
use crate::text::{normalize_text, sparse_cosine, JaroWinklerParams, TfidfModel};

pub const PAIR_FEATURE_COUNT: usize = 10;

pub const PAIR_FEATURE_NAMES: [&str; PAIR_FEATURE_COUNT] = [
    "username_sim",
    "screen_name_sim",
    "location_sim",
    "description_sim",
    "followers_ratio",
    "followers_diff",
    "friends_diff",
    "tweets_diff",
    "favorites_diff",
    "account_age_diff_months",
];

/// Columns `0..5` are bounded similarities; the rest are raw differences.
pub const BOUNDED_FEATURES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairFeatureVector {
    pub username_sim: f64,
    pub screen_name_sim: f64,
    pub location_sim: f64,
    pub description_sim: f64,
    pub followers_ratio: f64,
    pub followers_diff: f64,
    pub friends_diff: f64,
    pub tweets_diff: f64,
    pub favorites_diff: f64,
    pub account_age_diff_months: f64,
}

impl PairFeatureVector {
    pub fn to_array(&self) -> [f64; PAIR_FEATURE_COUNT] {
        [
            self.username_sim,
            self.screen_name_sim,
            self.location_sim,
            self.description_sim,
            self.followers_ratio,
            self.followers_diff,
            self.friends_diff,
            self.tweets_diff,
            self.favorites_diff,
            self.account_age_diff_months,
        ]
    }
}

/// `min / max` of the two counts, 1 when both are zero.
pub fn followers_ratio(f1: u64, f2: u64) -> f64 {
    let (lo, hi) = if f1 <= f2 { (f1, f2) } else { (f2, f1) };
    if hi == 0 {
        1.0
    } else {
        lo as f64 / hi as f64
    }
}

fn abs_diff(a: u64, b: u64) -> f64 {
    a.abs_diff(b) as f64
}

/// Pair features for one candidate pair.
///
/// `tfidf` must have been fitted on normalized descriptions.
pub fn extract_pair_features(
    a: &AccountProfile,
    b: &AccountProfile,
    tfidf: &TfidfModel,
    jw: &JaroWinklerParams,
) -> PairFeatureVector {
    let sim = |x: &str, y: &str| name_similarity(&name_key(x), &name_key(y), jw);
    let description_sim = {
        let va = tfidf.vector(&normalize_text(&a.description));
        let vb = tfidf.vector(&normalize_text(&b.description));
        // Both vectors come from the same model, so dimensions always agree.
        sparse_cosine(&va, &vb).unwrap_or(0.0)
    };
    let (early, late) = if a.registered_on <= b.registered_on {
        (a.registered_on, b.registered_on)
    } else {
        (b.registered_on, a.registered_on)
    };
    PairFeatureVector {
        username_sim: sim(&a.username, &b.username),
        screen_name_sim: sim(&a.screen_name, &b.screen_name),
        location_sim: sim(&a.location, &b.location),
        description_sim,
        followers_ratio: followers_ratio(a.followers_count, b.followers_count),
        followers_diff: abs_diff(a.followers_count, b.followers_count),
        friends_diff: abs_diff(a.friends_count, b.friends_count),
        tweets_diff: abs_diff(a.tweet_count, b.tweet_count),
        favorites_diff: abs_diff(a.favorites_count, b.favorites_count),
        account_age_diff_months: early.months_until(&late) as f64,
    }
}
