//! One greedy mask search on a toy node, with the per-step trace, at full and
//! partial term sampling.
//!
//! cargo run --example greedy_mask_split

use setforest::dataset::{Column, SetColumn};
use setforest::rng::stream;
use setforest::split::{greedy_mask_search, NodeContext, Objective};
use setforest::{Dataset, FeatureSpec, Vocabulary};

fn main() -> setforest::Result<()> {
    let terms = ["good", "bad", "fun", "dull", "plot", "cast"];
    let docs: [(&[u32], u8); 10] = [
        (&[0, 4], 1),
        (&[0, 2], 1),
        (&[2, 5], 1),
        (&[0, 5], 1),
        (&[2], 1),
        (&[1, 4], 0),
        (&[3, 4], 0),
        (&[1, 3], 0),
        (&[5], 0),
        (&[], 0),
    ];
    let sets: SetColumn = docs.iter().map(|(s, _)| Some(s.to_vec())).collect();
    let labels: Vec<u8> = docs.iter().map(|d| d.1).collect();
    let schema = vec![FeatureSpec::categorical_set(
        "text",
        Vocabulary::from_terms(terms),
    )];
    let data = Dataset::new(
        schema,
        vec![Column::CategoricalSet(sets.clone())],
        labels,
        None,
    )?;

    let targets: Vec<f64> = data.labels().iter().map(|&l| l as f64).collect();
    let ctx = NodeContext {
        targets: &targets,
        weights: data.weights(),
        objective: Objective::Classification,
        min_examples_per_leaf: 1,
    };
    let examples: Vec<usize> = (0..data.len()).collect();
    for p in [1.0, 0.5] {
        let mut rng = stream(7);
        let (split, trace) = greedy_mask_search(&sets, 0, &examples, &ctx, p, &mut rng);
        println!("p = {p}");
        println!("  sampled: {:?}", names(&terms, &trace.sampled_terms));
        for (t, g) in trace.accepted.iter().zip(&trace.gains) {
            println!("  + {:<5} gain {g:.4} bits", terms[*t as usize]);
        }
        if let Some(s) = split {
            println!(
                "  split {:?}: {} positive, {} negative",
                s.condition, s.num_positive, s.num_negative
            );
        }
    }
    Ok(())
}

fn names(terms: &[&str], ids: &[u32]) -> Vec<String> {
    ids.iter().map(|&i| terms[i as usize].to_owned()).collect()
}
