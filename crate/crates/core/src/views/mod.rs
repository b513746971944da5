//! Per-account views: mean-pooled post embeddings, node2vec embeddings of
//! the follower and friend networks, and the profile attribute vector.

mod embed;
mod interaction;
mod node2vec;
mod profile_view;
mod skipgram;

pub use embed::{hashed_text_embed, post_view, HashedEmbedder, TextEmbedder};
pub use interaction::{build_interaction_graph, EdgeKind, InteractionGraph};
pub use node2vec::{node2vec_walks, transition_probabilities, Node2VecConfig};
pub use profile_view::{profile_attribute_vector, ProfileAttributeVector, PROFILE_ATTRIBUTE_NAMES};
pub use skipgram::{skipgram_train, SkipGramModel};
