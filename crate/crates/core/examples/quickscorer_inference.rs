//! Compiled (bit-mask) evaluation: the term masks of a hand-built two-tree
//! forest, then agreement with top-down routing on a trained forest.
//!
//! cargo run --release --example quickscorer_inference

use std::path::Path;

use setforest::dataset::{load_text_corpus, VocabularyConfig};
use setforest::inference::mask_bits;
use setforest::pipeline::{fit_method, MethodSpec};
use setforest::split::SplitCondition;
use setforest::train::{Algorithm, TrainConfig};
use setforest::tree::TrainingMetadata;
use setforest::{
    qs_predict, top_down_predict, CompiledForest, DecisionForest, FeatureSpec, FeatureValue,
    ForestKind, TreeNode, Vocabulary,
};

fn main() -> setforest::Result<()> {
    let terms = ["a", "b", "c", "d"];
    let set = |mask: &[u32]| SplitCondition::SetIntersects {
        feature: 0,
        mask: mask.to_vec(),
    };
    // Tree 0: c ? l2 : (b ? l1 : l0). Tree 1: {c, d} ? l1 : l0.
    let trees = vec![
        TreeNode::internal(
            set(&[2]),
            TreeNode::internal(set(&[1]), TreeNode::leaf(0.1), TreeNode::leaf(0.5)),
            TreeNode::leaf(0.9),
        ),
        TreeNode::internal(set(&[2, 3]), TreeNode::leaf(0.2), TreeNode::leaf(0.8)),
    ];
    let toy = DecisionForest {
        kind: ForestKind::RandomForest,
        initial_score: 0.0,
        shrinkage: 1.0,
        schema: vec![FeatureSpec::categorical_set(
            "f0",
            Vocabulary::from_terms(terms),
        )],
        trees,
        metadata: TrainingMetadata {
            config: TrainConfig::random_forest(),
            tree_stats: vec![],
            train_losses: vec![],
            validation_losses: vec![],
        },
    };
    let compiled = CompiledForest::compile(&toy)?;
    let table = compiled.term_masks(0).expect("set feature");
    for (id, term) in terms.iter().enumerate() {
        let masks: Vec<String> = table
            .masks_for(id as u32)
            .iter()
            .map(|e| {
                let width = toy.trees[e.tree_id as usize].num_leaves();
                format!("tree {}: {}", e.tree_id, mask_bits(e.mask, width))
            })
            .collect();
        println!("term {term}: {masks:?}");
    }
    for example in [vec![2u32], vec![], vec![0, 1]] {
        let x = vec![FeatureValue::CategoricalSet(example.clone())];
        println!(
            "{example:?}: leaves {:?}, score {}",
            compiled.active_leaves(x.as_slice()),
            qs_predict(&compiled, x.as_slice())
        );
    }

    let data = load_text_corpus(Path::new(env!("CARGO_MANIFEST_DIR")).join("data/planted.tsv"))?;
    let mut config = TrainConfig::mart();
    config.num_trees = 100;
    let (pipeline, forest) = fit_method(
        &data,
        &VocabularyConfig::default(),
        &MethodSpec::greedy_mask(Algorithm::Mart),
        &config,
    )?;
    let compiled = CompiledForest::compile(&forest)?;
    let encoded = pipeline.apply(&data)?;
    let agree = (0..encoded.len())
        .filter(|&i| {
            let row = encoded.row(i);
            qs_predict(&compiled, &row).to_bits() == top_down_predict(&forest, &row).to_bits()
        })
        .count();
    println!(
        "\ntrained MART: {} trees, {} term-mask entries; {agree}/{} predictions bit-identical",
        compiled.num_trees(),
        compiled.term_masks(0).map_or(0, |t| t.entries.len()),
        encoded.len()
    );
    Ok(())
}
