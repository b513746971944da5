use alloc::string::ToString;

use serde::{Deserialize, Serialize};

use crate::date::Date;
use crate::error::{Error, Result};
use crate::profile::AccountProfile;

pub const PROFILE_ATTRIBUTE_NAMES: [&str; 12] = [
    "friend_count",
    "follower_count",
    "favorite_count",
    "tweet_count",
    "list_count",
    "account_age_months",
    "has_profile_background",
    "uses_default_profile_image",
    "has_description",
    "has_url",
    "screen_name_length",
    "description_length",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileAttributeVector {
    pub friend_count: f64,
    pub follower_count: f64,
    pub favorite_count: f64,
    pub tweet_count: f64,
    pub list_count: f64,
    pub account_age_months: f64,
    pub has_profile_background: f64,
    pub uses_default_profile_image: f64,
    pub has_description: f64,
    pub has_url: f64,
    pub screen_name_length: f64,
    pub description_length: f64,
}

impl ProfileAttributeVector {
    pub fn to_array(&self) -> [f64; 12] {
        [
            self.friend_count,
            self.follower_count,
            self.favorite_count,
            self.tweet_count,
            self.list_count,
            self.account_age_months,
            self.has_profile_background,
            self.uses_default_profile_image,
            self.has_description,
            self.has_url,
            self.screen_name_length,
            self.description_length,
        ]
    }
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Lengths are counted in characters; age in whole months up to `reference_date`.
pub fn profile_attribute_vector(account: &AccountProfile, reference_date: &Date) -> Result<ProfileAttributeVector> {
    if account.registered_on > *reference_date {
        return Err(Error::RegisteredAfterReference {
            registered: account.registered_on.to_string(),
            reference: reference_date.to_string(),
        });
    }
    let description_length = account.description.chars().count();
    Ok(ProfileAttributeVector {
        friend_count: account.friends_count as f64,
        follower_count: account.followers_count as f64,
        favorite_count: account.favorites_count as f64,
        tweet_count: account.tweet_count as f64,
        list_count: account.list_count as f64,
        account_age_months: account.registered_on.months_until(reference_date) as f64,
        has_profile_background: flag(account.has_profile_background),
        uses_default_profile_image: flag(account.uses_default_profile_image),
        has_description: flag(description_length > 0),
        has_url: flag(account.has_url),
        screen_name_length: account.screen_name.chars().count() as f64,
        description_length: description_length as f64,
    })
}
