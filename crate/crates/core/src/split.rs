//! Split conditions and the per-feature splitters.
//!
//! All splitters share one scoring rule: information gain in bits for
//! classification trees and weighted variance reduction for regression trees.
//! A condition sends an example to the positive branch when it holds;
//! missing values always go to the negative branch.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{Column, Dataset, Example, SetColumn, MISSING_CATEGORY};

/// Routing test of an internal node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SplitCondition {
    /// `value >= threshold`.
    NumericalGe { feature: usize, threshold: f64 },
    /// `value ∈ values`; `values` is sorted.
    CategoricalIn { feature: usize, values: Vec<u32> },
    /// `X ∩ mask ≠ ∅`; `mask` is sorted and non-empty.
    SetIntersects { feature: usize, mask: Vec<u32> },
}

impl SplitCondition {
    pub fn feature(&self) -> usize {
        match self {
            SplitCondition::NumericalGe { feature, .. }
            | SplitCondition::CategoricalIn { feature, .. }
            | SplitCondition::SetIntersects { feature, .. } => *feature,
        }
    }

    /// True routes to the positive branch.
    #[inline]
    pub fn evaluate<E: Example + ?Sized>(&self, example: &E) -> bool {
        match self {
            SplitCondition::NumericalGe { feature, threshold } => {
                example.numerical(*feature).is_some_and(|v| v >= *threshold)
            }
            SplitCondition::CategoricalIn { feature, values } => example
                .categorical(*feature)
                .is_some_and(|v| values.binary_search(&v).is_ok()),
            SplitCondition::SetIntersects { feature, mask } => example
                .categorical_set(*feature)
                .is_some_and(|set| intersects(set, mask)),
        }
    }
}

/// Intersection test of two strictly increasing id lists. Merges lists of
/// similar length; otherwise binary-searches the longer one.
#[inline]
pub fn intersects(a: &[u32], b: &[u32]) -> bool {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if short.is_empty() || short[0] > long[long.len() - 1] || long[0] > short[short.len() - 1] {
        return false;
    }
    if long.len() > 8 * short.len() {
        let mut rest = long;
        for t in short {
            match rest.binary_search(t) {
                Ok(_) => return true,
                Err(i) => rest = &rest[i..],
            }
            if rest.is_empty() {
                return false;
            }
        }
        return false;
    }
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Binary targets in {0, 1}, scored by Shannon information gain (bits).
    Classification,
    /// Real targets, scored by weighted variance reduction.
    Regression,
}

/// Weighted target sums of a set of examples.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Stats {
    pub count: usize,
    pub weight: f64,
    /// Σ weight · target.
    pub sum: f64,
}

impl Stats {
    #[inline]
    pub fn add(&mut self, target: f64, weight: f64) {
        self.count += 1;
        self.weight += weight;
        self.sum += weight * target;
    }

    #[inline]
    fn merged(&self, other: &Stats) -> Stats {
        Stats {
            count: self.count + other.count,
            weight: self.weight + other.weight,
            sum: self.sum + other.sum,
        }
    }

    #[inline]
    fn minus(&self, other: &Stats) -> Stats {
        Stats {
            count: self.count - other.count,
            weight: self.weight - other.weight,
            sum: self.sum - other.sum,
        }
    }

    pub fn mean(&self) -> f64 {
        if self.weight > 0.0 {
            self.sum / self.weight
        } else {
            0.0
        }
    }
}

/// Binary entropy in bits of a positive fraction `p`.
pub fn entropy(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    let term = |q: f64| if q > 0.0 { -q * q.log2() } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// Gain of splitting `parent` into `positive` and its complement. Exactly 0
/// when either side is empty.
pub fn gain(objective: Objective, parent: &Stats, positive: &Stats) -> f64 {
    let negative = parent.minus(positive);
    if positive.count == 0 || negative.count == 0 {
        return 0.0;
    }
    let g = match objective {
        Objective::Classification => {
            let pw = positive.weight / parent.weight;
            let nw = negative.weight / parent.weight;
            entropy(parent.mean()) - pw * entropy(positive.mean()) - nw * entropy(negative.mean())
        }
        Objective::Regression => {
            // Between-group variance, equal to the reduction of the weighted
            // within-group variance.
            let diff = positive.mean() - negative.mean();
            positive.weight * negative.weight / (parent.weight * parent.weight) * diff * diff
        }
    };
    g.max(0.0)
}

/// Gain of `condition` over the examples `examples` of `dataset`.
pub fn score(
    dataset: &Dataset,
    examples: &[usize],
    targets: &[f64],
    weights: &[f64],
    objective: Objective,
    condition: &SplitCondition,
) -> f64 {
    let mut parent = Stats::default();
    let mut positive = Stats::default();
    for &e in examples {
        parent.add(targets[e], weights[e]);
        if condition.evaluate(&dataset.row(e)) {
            positive.add(targets[e], weights[e]);
        }
    }
    gain(objective, &parent, &positive)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitCandidate {
    pub condition: SplitCondition,
    pub score: f64,
    pub num_positive: usize,
    pub num_negative: usize,
}

/// Per-node inputs shared by the splitters. `targets` and `weights` are
/// indexed by example id; the splitters see a node through a list of ids.
#[derive(Debug, Clone, Copy)]
pub struct NodeContext<'a> {
    pub targets: &'a [f64],
    pub weights: &'a [f64],
    pub objective: Objective,
    pub min_examples_per_leaf: usize,
}

impl NodeContext<'_> {
    fn stats(&self, examples: &[usize]) -> Stats {
        let mut s = Stats::default();
        for &e in examples {
            s.add(self.targets[e], self.weights[e]);
        }
        s
    }

    fn admissible(&self, parent: &Stats, positive: &Stats) -> bool {
        let min = self.min_examples_per_leaf.max(1);
        positive.count >= min && parent.count - positive.count >= min
    }

    fn candidate(
        &self,
        condition: SplitCondition,
        parent: &Stats,
        positive: &Stats,
        score: f64,
    ) -> SplitCandidate {
        SplitCandidate {
            condition,
            score,
            num_positive: positive.count,
            num_negative: parent.count - positive.count,
        }
    }
}

/// Runs the splitter matching the column type of `feature`.
pub fn find_split<R: Rng + ?Sized>(
    dataset: &Dataset,
    feature: usize,
    examples: &[usize],
    ctx: &NodeContext<'_>,
    sampling_rate: f64,
    rng: &mut R,
) -> Option<SplitCandidate> {
    match dataset.column(feature) {
        Column::Numerical(values) => find_numerical_split(values, feature, examples, ctx),
        Column::Categorical(values) => find_categorical_cart_split(values, feature, examples, ctx),
        Column::CategoricalSet(sets) => {
            find_greedy_mask_split(sets, feature, examples, ctx, sampling_rate, rng)
        }
    }
}

/// Exact search over midpoints between consecutive distinct present values.
/// Ties go to the smaller threshold.
pub fn find_numerical_split(
    values: &[f64],
    feature: usize,
    examples: &[usize],
    ctx: &NodeContext<'_>,
) -> Option<SplitCandidate> {
    let parent = ctx.stats(examples);
    let mut present: Vec<(f64, usize)> = examples
        .iter()
        .filter(|&&e| !values[e].is_nan())
        .map(|&e| (values[e], e))
        .collect();
    if present.len() < 2 {
        return None;
    }
    present.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    // Walk from the largest value down, growing the positive (>= threshold)
    // side. On ties the later, smaller threshold wins.
    let mut positive = Stats::default();
    let mut best: Option<(f64, f64, Stats)> = None;
    for i in (1..present.len()).rev() {
        let (v, e) = present[i];
        positive.add(ctx.targets[e], ctx.weights[e]);
        let below = present[i - 1].0;
        if below == v || !ctx.admissible(&parent, &positive) {
            continue;
        }
        let g = gain(ctx.objective, &parent, &positive);
        if g > 0.0 && best.as_ref().is_none_or(|b| g >= b.0) {
            let mut threshold = below / 2.0 + v / 2.0;
            if threshold <= below {
                threshold = v;
            }
            best = Some((g, threshold, positive));
        }
    }
    best.map(|(g, threshold, positive)| {
        ctx.candidate(
            SplitCondition::NumericalGe { feature, threshold },
            &parent,
            &positive,
            g,
        )
    })
}

/// CART ordering for categorical features: categories sorted by mean target,
/// then every prefix/suffix bipartition is scored with either side positive.
pub fn find_categorical_cart_split(
    values: &[u32],
    feature: usize,
    examples: &[usize],
    ctx: &NodeContext<'_>,
) -> Option<SplitCandidate> {
    let parent = ctx.stats(examples);
    let mut per_value: HashMap<u32, Stats> = HashMap::new();
    let mut missing = Stats::default();
    for &e in examples {
        let v = values[e];
        if v == MISSING_CATEGORY {
            missing.add(ctx.targets[e], ctx.weights[e]);
        } else {
            per_value
                .entry(v)
                .or_default()
                .add(ctx.targets[e], ctx.weights[e]);
        }
    }
    let mut ordered: Vec<(u32, Stats)> = per_value.into_iter().collect();
    ordered.sort_unstable_by(|a, b| a.1.mean().total_cmp(&b.1.mean()).then(a.0.cmp(&b.0)));
    let k = ordered.len();
    if k == 0 || (k == 1 && missing.count == 0) {
        return None;
    }

    let mut prefix = vec![Stats::default(); k + 1];
    for i in 0..k {
        prefix[i + 1] = prefix[i].merged(&ordered[i].1);
    }
    let present = prefix[k];

    let mut best: Option<(f64, usize, bool, Stats)> = None;
    let mut consider = |g: f64, cut: usize, low_side: bool, positive: Stats| {
        if g > 0.0 && best.as_ref().is_none_or(|b| g > b.0) {
            best = Some((g, cut, low_side, positive));
        }
    };
    for cut in 1..=k {
        let low = prefix[cut];
        if cut < k && ctx.admissible(&parent, &low) {
            consider(gain(ctx.objective, &parent, &low), cut, true, low);
        }
        let high = present.minus(&prefix[cut - 1]);
        let high_cut = cut - 1;
        if (high_cut > 0 || missing.count > 0) && ctx.admissible(&parent, &high) {
            consider(gain(ctx.objective, &parent, &high), high_cut, false, high);
        }
    }
    best.map(|(g, cut, low_side, positive)| {
        let range = if low_side { 0..cut } else { cut..k };
        let mut set: Vec<u32> = ordered[range].iter().map(|(v, _)| *v).collect();
        set.sort_unstable();
        ctx.candidate(
            SplitCondition::CategoricalIn {
                feature,
                values: set,
            },
            &parent,
            &positive,
            g,
        )
    })
}

/// Trace of one greedy mask search, for inspection and testing.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GreedyTrace {
    /// Candidate terms kept by the Bernoulli sampling, ascending.
    pub sampled_terms: Vec<u32>,
    /// Accepted terms in acceptance order.
    pub accepted: Vec<u32>,
    /// Gain after each acceptance; strictly increasing.
    pub gains: Vec<f64>,
}

/// Greedy categorical-set splitter.
///
/// Terms present in the node are each kept with probability `sampling_rate`.
/// Starting from an empty mask, the term whose addition maximizes the gain is
/// added (lowest id on ties) until no addition improves on the current gain.
pub fn find_greedy_mask_split<R: Rng + ?Sized>(
    sets: &SetColumn,
    feature: usize,
    examples: &[usize],
    ctx: &NodeContext<'_>,
    sampling_rate: f64,
    rng: &mut R,
) -> Option<SplitCandidate> {
    greedy_mask_search(sets, feature, examples, ctx, sampling_rate, rng).0
}

pub fn greedy_mask_search<R: Rng + ?Sized>(
    sets: &SetColumn,
    feature: usize,
    examples: &[usize],
    ctx: &NodeContext<'_>,
    sampling_rate: f64,
    rng: &mut R,
) -> (Option<SplitCandidate>, GreedyTrace) {
    let parent = ctx.stats(examples);
    let mut trace = GreedyTrace::default();

    // Postings of the node: (term, position in `examples`), grouped by term.
    let mut postings: Vec<(u32, u32)> = Vec::new();
    for (pos, &e) in examples.iter().enumerate() {
        if let Some(set) = sets.get(e) {
            postings.extend(set.iter().map(|&t| (t, pos as u32)));
        }
    }
    postings.sort_unstable();

    // Candidate pool: (term, start, end) ranges into `postings`.
    let mut pool: Vec<(u32, usize, usize)> = Vec::new();
    let mut start = 0;
    while start < postings.len() {
        let term = postings[start].0;
        let mut end = start;
        while end < postings.len() && postings[end].0 == term {
            end += 1;
        }
        if sampling_rate >= 1.0 || rng.gen::<f64>() < sampling_rate {
            pool.push((term, start, end));
        }
        start = end;
    }
    trace.sampled_terms = pool.iter().map(|c| c.0).collect();

    let mut in_positive = vec![false; examples.len()];
    let mut positive = Stats::default();
    let mut current = 0.0;
    loop {
        let mut best: Option<(f64, usize, Stats)> = None;
        pool.retain(|&(_, s, e)| postings[s..e].iter().any(|p| !in_positive[p.1 as usize]));
        for (c, &(_, s, e)) in pool.iter().enumerate() {
            let mut extended = positive;
            for &(_, pos) in &postings[s..e] {
                if !in_positive[pos as usize] {
                    let ex = examples[pos as usize];
                    extended.add(ctx.targets[ex], ctx.weights[ex]);
                }
            }
            if !ctx.admissible(&parent, &extended) {
                continue;
            }
            let g = gain(ctx.objective, &parent, &extended);
            if best.as_ref().is_none_or(|b| g > b.0) {
                best = Some((g, c, extended));
            }
        }
        let Some((g, c, extended)) = best else { break };
        if g <= current {
            break;
        }
        let (term, s, e) = pool.remove(c);
        for &(_, pos) in &postings[s..e] {
            in_positive[pos as usize] = true;
        }
        positive = extended;
        current = g;
        trace.accepted.push(term);
        trace.gains.push(g);
    }

    if trace.accepted.is_empty() {
        return (None, trace);
    }
    let mut mask = trace.accepted.clone();
    mask.sort_unstable();
    let candidate = ctx.candidate(
        SplitCondition::SetIntersects { feature, mask },
        &parent,
        &positive,
        current,
    );
    (Some(candidate), trace)
}
