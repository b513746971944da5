use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::date::Date;

/// One account's non-privacy-sensitive attributes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccountProfile {
    pub id: String,
    pub username: String,
    pub screen_name: String,
    #[serde(default)]
    pub location: String,
    #[serde(default)]
    pub description: String,
    pub followers_count: u64,
    pub friends_count: u64,
    pub tweet_count: u64,
    pub favorites_count: u64,
    pub list_count: u64,
    pub registered_on: Date,
    #[serde(default)]
    pub has_profile_background: bool,
    #[serde(default)]
    pub uses_default_profile_image: bool,
    #[serde(default)]
    pub has_url: bool,
    #[serde(default)]
    pub posts: Vec<String>,
}

impl AccountProfile {
    /// A blank profile, handy for tests and fixtures.
    pub fn new(id: &str, username: &str, screen_name: &str, registered_on: Date) -> Self {
        Self {
            id: id.into(),
            username: username.into(),
            screen_name: screen_name.into(),
            location: String::new(),
            description: String::new(),
            followers_count: 0,
            friends_count: 0,
            tweet_count: 0,
            favorites_count: 0,
            list_count: 0,
            registered_on,
            has_profile_background: false,
            uses_default_profile_image: false,
            has_url: false,
            posts: Vec::new(),
        }
    }
}
