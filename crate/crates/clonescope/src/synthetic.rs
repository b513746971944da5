//! Seeded synthetic datasets: organic accounts with preferential-attachment
//! networks, plus clones that imitate chosen victims.

use std::collections::BTreeSet;

use clonescope_core::seed;
use clonescope_core::views::EdgeKind;
use clonescope_core::{AccountProfile, Date};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng as _;
use rand_distr::{Distribution, LogNormal};

use crate::dataset::{Dataset, Edge, Manifest};
use crate::error::{Error, Result};

const FIRST_NAMES: &str = include_str!("../resources/first_names.txt");
const LAST_NAMES: &str = include_str!("../resources/last_names.txt");
const CITIES: &str = include_str!("../resources/cities.txt");
const TOPICS: &str = include_str!("../resources/topics.txt");

const FILLER: [&str; 24] = [
    "the", "and", "of", "my", "a", "to", "in", "for", "with", "is", "all", "about", "love", "new", "today", "life",
    "day", "great", "really", "always", "world", "people", "best", "time",
];

struct Corpus {
    first: Vec<&'static str>,
    last: Vec<&'static str>,
    cities: Vec<String>,
    topics: Vec<Vec<&'static str>>,
}

impl Corpus {
    fn load() -> Self {
        let words = |s: &'static str| s.split_whitespace().collect::<Vec<_>>();
        Self {
            first: words(FIRST_NAMES),
            last: words(LAST_NAMES),
            cities: CITIES.split_whitespace().map(|c| c.replace('_', " ")).collect(),
            topics: TOPICS.lines().filter(|l| !l.trim().is_empty()).map(|l| l.split_whitespace().collect()).collect(),
        }
    }
}

type Rng = seed::Rng;

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    c.next().map(|f| f.to_uppercase().chain(c).collect()).unwrap_or_default()
}

fn lognormal_count(rng: &mut Rng, mu: f64, sigma: f64) -> u64 {
    LogNormal::new(mu, sigma).expect("valid lognormal").sample(rng).floor() as u64
}

fn date_between(rng: &mut Rng, from: Date, to: Date) -> Date {
    Date::from_days(rng.random_range(from.to_days()..=to.to_days()))
}

fn date(y: i32, m: u8, d: u8) -> Date {
    Date::new(y, m, d).expect("valid constant date")
}

/// Topic-word text: mostly words from the given topics, some filler.
fn topic_text(rng: &mut Rng, corpus: &Corpus, topics: &[usize], words: usize) -> String {
    (0..words)
        .map(|_| {
            if rng.random_bool(0.7) {
                let t = topics[rng.random_range(0..topics.len())];
                *corpus.topics[t].choose(rng).expect("nonempty topic")
            } else {
                *FILLER.choose(rng).expect("nonempty filler")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

struct Organic {
    profile: AccountProfile,
    topics: Vec<usize>,
}

fn organic_account(rng: &mut Rng, corpus: &Corpus, id: String) -> Organic {
    let first = *corpus.first.choose(rng).expect("names");
    let last = *corpus.last.choose(rng).expect("names");
    let mut username = match rng.random_range(0..5) {
        0 => format!("{first}{last}"),
        1 => format!("{first}_{last}"),
        2 => format!("{}{last}", &first[..1]),
        3 => format!("{last}{first}"),
        _ => format!("{first}{}", &last[..1]),
    };
    if rng.random_bool(0.3) {
        username.push_str(&rng.random_range(1..1000).to_string());
    }
    let screen_name = format!("{} {}", capitalize(first), capitalize(last));
    let mut topics = vec![rng.random_range(0..corpus.topics.len())];
    if rng.random_bool(0.4) {
        topics.push(rng.random_range(0..corpus.topics.len()));
    }
    let mut p = AccountProfile::new(&id, &username, &screen_name, date_between(rng, date(2008, 1, 1), date(2021, 12, 31)));
    if rng.random_bool(0.85) {
        p.location = corpus.cities.choose(rng).expect("cities").clone();
    }
    if rng.random_bool(0.8) {
        let words = rng.random_range(5..=12);
        p.description = capitalize(&topic_text(rng, corpus, &topics, words));
    }
    let posts = rng.random_range(3..=8);
    p.posts = (0..posts)
        .map(|_| {
            let words = rng.random_range(6..=15);
            topic_text(rng, corpus, &topics, words)
        })
        .collect();
    p.followers_count = lognormal_count(rng, 5.0, 1.5);
    p.friends_count = lognormal_count(rng, 5.0, 1.0);
    p.tweet_count = lognormal_count(rng, 6.5, 1.5);
    p.favorites_count = lognormal_count(rng, 5.5, 1.7);
    p.list_count = lognormal_count(rng, 1.0, 1.0);
    p.has_profile_background = rng.random_bool(0.7);
    p.uses_default_profile_image = rng.random_bool(0.1);
    p.has_url = rng.random_bool(0.4);
    Organic { profile: p, topics }
}

/// One random edit: insert a digit, swap two adjacent characters or delete one.
fn edit_name(rng: &mut Rng, name: &str, allow_digits: bool) -> String {
    let mut chars: Vec<char> = name.chars().collect();
    let choice = if allow_digits { rng.random_range(0..3) } else { rng.random_range(1..3) };
    match choice {
        0 => {
            let at = rng.random_range(0..=chars.len());
            chars.insert(at, char::from(b'0' + rng.random_range(0..10u8)));
        }
        1 if chars.len() >= 2 => {
            let at = rng.random_range(0..chars.len() - 1);
            chars.swap(at, at + 1);
        }
        _ if chars.len() > 3 => {
            chars.remove(rng.random_range(0..chars.len()));
        }
        _ => chars.push(chars.last().copied().unwrap_or('x')),
    }
    chars.into_iter().collect()
}

fn clone_account(rng: &mut Rng, corpus: &Corpus, victim: &Organic, id: String) -> AccountProfile {
    let v = &victim.profile;
    let mut username = v.username.clone();
    for _ in 0..rng.random_range(1..=2) {
        username = edit_name(rng, &username, true);
    }
    while username == v.username {
        username = edit_name(rng, &username, true);
    }
    let mut screen_name = v.screen_name.clone();
    if rng.random_bool(0.5) {
        while screen_name == v.screen_name {
            screen_name = edit_name(rng, &v.screen_name, false);
        }
    }
    let earliest = Date::from_days(v.registered_on.to_days().max(date(2021, 1, 1).to_days()) + 30);
    let mut p = AccountProfile::new(&id, &username, &screen_name, date_between(rng, earliest, date(2022, 12, 31)));
    if rng.random_bool(0.9) {
        p.location = v.location.clone();
    }
    p.description = v.description.split_whitespace().filter(|_| !rng.random_bool(0.2)).collect::<Vec<_>>().join(" ");
    let posts = rng.random_range(2..=6);
    p.posts = (0..posts)
        .map(|_| match v.posts.choose(rng) {
            Some(post) if rng.random_bool(0.5) => post.clone(),
            _ => {
                let words = rng.random_range(6..=15);
                topic_text(rng, corpus, &victim.topics, words)
            }
        })
        .collect();
    p.followers_count = lognormal_count(rng, 1.5, 1.0);
    p.friends_count = lognormal_count(rng, 3.0, 1.0);
    p.tweet_count = lognormal_count(rng, 2.0, 1.0);
    p.favorites_count = lognormal_count(rng, 1.5, 1.0);
    p.has_profile_background = v.has_profile_background && rng.random_bool(0.8);
    p.uses_default_profile_image = false;
    p.has_url = rng.random_bool(0.2);
    p
}

/// Barabási–Albert graph over `nodes` (taken in the given order), each new
/// node attaching to `m` distinct earlier nodes with probability
/// proportional to degree.
fn preferential_attachment(rng: &mut Rng, nodes: &[usize], m: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let mut ends: Vec<usize> = Vec::new();
    let core = (m + 1).min(nodes.len());
    for i in 0..core {
        for j in i + 1..core {
            edges.push((nodes[i], nodes[j]));
            ends.extend([nodes[i], nodes[j]]);
        }
    }
    for &node in &nodes[core..] {
        let mut targets = BTreeSet::new();
        while targets.len() < m {
            targets.insert(*ends.choose(rng).expect("seed clique"));
        }
        for t in targets {
            edges.push((node, t));
            ends.extend([node, t]);
        }
    }
    edges
}

/// Generates `n_legit + n_noise` organic accounts and `n_clone_pairs`
/// clones of distinct legitimate victims. Ids are shuffled so they carry
/// no hint of an account's role.
pub fn generate_synthetic(n_legit: usize, n_clone_pairs: usize, n_noise: usize, seed_value: u64) -> Result<Dataset> {
    if n_clone_pairs > n_legit {
        return Err(Error::Config(format!("clone pairs ({n_clone_pairs}) exceed legitimate accounts ({n_legit})")));
    }
    if n_legit + n_noise == 0 {
        return Err(Error::Config("at least one organic account is required".into()));
    }
    let corpus = Corpus::load();
    let mut rng = seed::rng(seed_value);
    let total = n_legit + n_noise + n_clone_pairs;
    let mut ids: Vec<String> = (0..total).map(|i| format!("acct{i:06}")).collect();
    ids.shuffle(&mut rng);

    let organic_count = n_legit + n_noise;
    let organic: Vec<Organic> = (0..organic_count).map(|i| organic_account(&mut rng, &corpus, ids[i].clone())).collect();

    let mut victims: Vec<usize> = (0..n_legit).collect();
    victims.shuffle(&mut rng);
    victims.truncate(n_clone_pairs);
    victims.sort_unstable();
    let clones: Vec<AccountProfile> = victims
        .iter()
        .enumerate()
        .map(|(c, &v)| clone_account(&mut rng, &corpus, &organic[v], ids[organic_count + c].clone()))
        .collect();

    let mut edges = Vec::new();
    let mut neighbours: Vec<Vec<BTreeSet<usize>>> = Vec::new();
    for (kind, m) in [(EdgeKind::Follower, 3), (EdgeKind::Friend, 2)] {
        let mut order: Vec<usize> = (0..organic_count).collect();
        order.shuffle(&mut rng);
        let mut adjacency = vec![BTreeSet::new(); organic_count];
        for (a, b) in preferential_attachment(&mut rng, &order, m) {
            adjacency[a].insert(b);
            adjacency[b].insert(a);
            edges.push(Edge { a: organic[a].profile.id.clone(), b: organic[b].profile.id.clone(), kind });
        }
        neighbours.push(adjacency);
    }
    // Clones reach fewer than 10% of the victim's contacts plus a few strangers.
    for (c, &v) in victims.iter().enumerate() {
        let contacts: BTreeSet<usize> = neighbours.iter().flat_map(|adj| adj[v].iter().copied()).collect();
        let mut pool: Vec<usize> = contacts.iter().copied().collect();
        pool.shuffle(&mut rng);
        pool.truncate(contacts.len() * 9 / 100);
        for (adjacency, kind) in neighbours.iter().zip([EdgeKind::Follower, EdgeKind::Friend]) {
            let mut chosen: BTreeSet<usize> = pool.iter().copied().filter(|s| adjacency[v].contains(s)).collect();
            for _ in 0..rng.random_range(1..=3) {
                let s = rng.random_range(0..organic_count);
                if s != v && !contacts.contains(&s) {
                    chosen.insert(s);
                }
            }
            for s in chosen {
                edges.push(Edge { a: clones[c].id.clone(), b: organic[s].profile.id.clone(), kind });
            }
        }
    }

    let labels = victims.iter().zip(&clones).map(|(&v, c)| (organic[v].profile.id.clone(), c.id.clone())).collect();
    let mut accounts: Vec<AccountProfile> = organic.into_iter().map(|o| o.profile).chain(clones).collect();
    accounts.sort_by(|a, b| a.id.cmp(&b.id));
    let manifest = Manifest {
        reference_date: Some(date(2023, 1, 1)),
        seed: Some(seed_value),
        source: format!("synthetic n_legit={n_legit} clone_pairs={n_clone_pairs} noise={n_noise}"),
    };
    Dataset::new(accounts, edges, labels, manifest)
}
