use clonescope_core::views::{
    build_interaction_graph, hashed_text_embed, node2vec_walks, post_view, profile_attribute_vector,
    skipgram_train, transition_probabilities, EdgeKind, HashedEmbedder, InteractionGraph, Node2VecConfig,
    TextEmbedder,
};
use clonescope_core::{AccountProfile, Date};
use proptest::prelude::*;

fn barbell() -> InteractionGraph {
    let nodes: Vec<String> = (0..12).map(|i| format!("n{i:02}")).collect();
    let mut edges = Vec::new();
    for block in [0..6, 6..12] {
        for i in block.clone() {
            for j in block.clone() {
                if i < j {
                    edges.push((i, j));
                }
            }
        }
    }
    edges.push((5, 6));
    InteractionGraph::from_index_edges(EdgeKind::Friend, nodes, &edges)
}

fn cos(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

#[test]
fn barbell_communities_separate() {
    let graph = barbell();
    let config = Node2VecConfig { dimension: 16, walks_per_node: 20, epochs: 10, seed: 5, ..Node2VecConfig::default() };
    let walks = node2vec_walks(&graph, &config);
    let model = skipgram_train(&walks, graph.node_count(), &config);
    let (mut intra, mut inter) = (Vec::new(), Vec::new());
    for i in 0..12 {
        for j in i + 1..12 {
            let c = cos(&model.vectors[i], &model.vectors[j]);
            if (i < 6) == (j < 6) {
                intra.push(c);
            } else {
                inter.push(c);
            }
        }
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    assert!(mean(&intra) > mean(&inter), "intra {} inter {}", mean(&intra), mean(&inter));
}

#[test]
fn skipgram_loss_trends_down() {
    let graph = barbell();
    let config = Node2VecConfig { dimension: 16, epochs: 8, seed: 2, ..Node2VecConfig::default() };
    let walks = node2vec_walks(&graph, &config);
    let model = skipgram_train(&walks, graph.node_count(), &config);
    assert_eq!(model.epoch_losses.len(), 8);
    for w in model.epoch_losses.windows(2) {
        assert!(w[1] <= w[0] * 1.05, "{:?}", model.epoch_losses);
    }
    assert!(model.epoch_losses.last() < model.epoch_losses.first());
    let again = skipgram_train(&walks, graph.node_count(), &config);
    assert_eq!(model, again);
}

#[test]
fn absent_nodes_get_zero_vectors() {
    let nodes: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
    let graph = build_interaction_graph(&nodes, &[("a", "b", EdgeKind::Follower)], EdgeKind::Follower).unwrap();
    let config = Node2VecConfig { dimension: 8, ..Node2VecConfig::default() };
    let walks = node2vec_walks(&graph, &config);
    assert!(walks.iter().filter(|w| w[0] == 2).all(|w| w.len() == 1));
    let model = skipgram_train(&walks, 3, &config);
    assert!(model.vectors[2].iter().all(|&v| v == 0.0));
    assert!(model.vectors[0].iter().any(|&v| v != 0.0));
}

#[test]
fn transition_distributions_sum_to_one_along_walks() {
    let graph = barbell();
    let config = Node2VecConfig { walks_per_node: 3, ..Node2VecConfig::default() };
    for walk in node2vec_walks(&graph, &config) {
        for step in walk.windows(3) {
            let probs = transition_probabilities(&graph, step[0], step[1], config.return_p, config.in_out_q);
            let total: f64 = probs.iter().map(|p| p.1).sum();
            assert!((total - 1.0).abs() < 1e-12);
            assert!(probs.iter().any(|&(node, p)| node == step[2] && p > 0.0));
        }
    }
}

#[test]
fn path_graph_walk_stays_on_path() {
    let nodes: Vec<String> = vec!["a".into(), "b".into()];
    let graph = build_interaction_graph(&nodes, &[("a", "b", EdgeKind::Friend)], EdgeKind::Friend).unwrap();
    let config = Node2VecConfig { walk_length: 3, ..Node2VecConfig::default() };
    for w in node2vec_walks(&graph, &config) {
        assert!(w.len() <= 3 && w.iter().all(|&n| n < 2));
    }
}

#[test]
fn bigram_order_matters() {
    let a = hashed_text_embed("cat sat", 64, 0);
    let b = hashed_text_embed("sat cat", 64, 0);
    assert_ne!(a, b);
    assert_eq!(hashed_text_embed("", 64, 0), vec![0.0; 64]);
}

proptest! {
    #[test]
    fn post_view_is_finite_with_fixed_width(posts in proptest::collection::vec(".{0,80}", 0..6), dim in 1usize..64) {
        let e = HashedEmbedder::new(dim, 3);
        let v = post_view(&e, &posts);
        prop_assert_eq!(v.len(), e.dimension());
        prop_assert!(v.iter().all(|x| x.is_finite()));
    }

    #[test]
    fn description_flag_matches_length(description in ".{0,30}", y in 2000i32..2020) {
        let mut a = AccountProfile::new("a", "u", "s", Date::new(y, 6, 1).unwrap());
        a.description = description;
        let v = profile_attribute_vector(&a, &Date::new(2021, 1, 1).unwrap()).unwrap();
        prop_assert_eq!(v.has_description == 1.0, v.description_length > 0.0);
    }
}
