//! The biased sampling distributions driving the tree search.
//!
//! Node selection mixes a uniform draw over the whole tree with a uniform
//! draw over the best-scored nodes; obstacle selection mixes a uniform draw
//! over the currently manipulable obstacles with a point mass on the
//! advisor's recommendation. Both biases are controlled by a probability in
//! `[0, 1)` — at zero the search degenerates to a uniform random tree, and
//! keeping them strictly below one preserves nonzero mass on every
//! alternative, which is what makes the search probabilistically complete.
//!
//! Every draw goes through one seeded [`ChaCha8Rng`] stream owned by the
//! planner run, so a run is bit-reproducible from its seed.

use crate::geometry::{Bounds, Pose2};
use crate::world::{ManipulableSet, ObstacleId};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use thiserror::Error;

/// Per-node guidance score: the number of advisor-recommended relocations on
/// the node's root path.
pub type NodeScore = u32;

#[derive(Debug, Error, PartialEq)]
pub enum SamplingError {
    #[error("{0} must lie in [0, 1), got {1}")]
    BadProbability(&'static str, f64),
    #[error("candidate count K must be at least 1")]
    BadCandidateCount,
    #[error("cannot sample from an empty {0}")]
    EmptyDomain(&'static str),
}

/// Search-bias parameters plus the run seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingParams {
    /// Probability mass steered toward the top-scored nodes.
    pub p_rand: f64,
    /// Probability mass steered toward the advisor's recommendation.
    pub p_obs: f64,
    /// Number of candidate obstacles requested from the advisor per query.
    pub k: usize,
    pub rng_seed: u64,
}

impl SamplingParams {
    pub fn new(p_rand: f64, p_obs: f64, k: usize, rng_seed: u64) -> Result<Self, SamplingError> {
        let params = SamplingParams {
            p_rand,
            p_obs,
            k,
            rng_seed,
        };
        params.validate()?;
        Ok(params)
    }

    /// Unbiased parameters: the uniform random tree.
    pub fn uniform(rng_seed: u64) -> Self {
        SamplingParams {
            p_rand: 0.0,
            p_obs: 0.0,
            k: 1,
            rng_seed,
        }
    }

    pub fn validate(&self) -> Result<(), SamplingError> {
        for (name, p) in [("p_rand", self.p_rand), ("p_obs", self.p_obs)] {
            if !(0.0..1.0).contains(&p) {
                return Err(SamplingError::BadProbability(name, p));
            }
        }
        if self.k == 0 {
            return Err(SamplingError::BadCandidateCount);
        }
        Ok(())
    }

    /// The run's random stream, fully determined by the seed.
    pub fn rng(&self) -> ChaCha8Rng {
        use rand::SeedableRng;
        ChaCha8Rng::seed_from_u64(self.rng_seed)
    }
}

/// The argmax set of node scores, maintained incrementally as nodes are
/// inserted. Ids stay in insertion (ascending) order.
#[derive(Debug, Clone, PartialEq)]
pub struct TopScoreSet {
    max: NodeScore,
    ids: Vec<usize>,
}

impl TopScoreSet {
    /// The set for a tree holding only the root (score zero).
    pub fn root() -> Self {
        TopScoreSet {
            max: 0,
            ids: vec![0],
        }
    }

    /// Accounts for a newly inserted node. A strictly higher score resets
    /// the set; an equal score joins it.
    pub fn observe(&mut self, id: usize, score: NodeScore) {
        if score > self.max {
            self.max = score;
            self.ids.clear();
            self.ids.push(id);
        } else if score == self.max {
            self.ids.push(id);
        }
    }

    pub fn max_score(&self) -> NodeScore {
        self.max
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn contains(&self, id: usize) -> bool {
        self.ids.binary_search(&id).is_ok()
    }
}

/// Rebuilds the argmax set from scratch; the incremental path must always
/// agree with this.
pub fn recompute_top_set(scores: &[NodeScore]) -> TopScoreSet {
    let max = scores.iter().copied().max().unwrap_or(0);
    TopScoreSet {
        max,
        ids: scores
            .iter()
            .enumerate()
            .filter(|&(_, &s)| s == max)
            .map(|(i, _)| i)
            .collect(),
    }
}

/// Draws the node to expand: with probability `p_rand` a uniform member of
/// the top-score set, otherwise a uniform member of the whole tree. A member
/// of the top set therefore carries mass `p_rand/|top| + (1-p_rand)/n`, any
/// other node `(1-p_rand)/n`.
pub fn sample_node(
    n_nodes: usize,
    top: &TopScoreSet,
    p_rand: f64,
    rng: &mut ChaCha8Rng,
) -> Result<usize, SamplingError> {
    if n_nodes == 0 {
        return Err(SamplingError::EmptyDomain("tree"));
    }
    debug_assert!(!top.ids.is_empty() && top.ids.iter().all(|&i| i < n_nodes));
    let u: f64 = rng.gen();
    if u < p_rand {
        Ok(top.ids[rng.gen_range(0..top.ids.len())])
    } else {
        Ok(rng.gen_range(0..n_nodes))
    }
}

/// Probability that [`sample_node`] returns `id`. Test/analysis helper.
pub fn node_probability(n_nodes: usize, top: &TopScoreSet, p_rand: f64, id: usize) -> f64 {
    let base = (1.0 - p_rand) / n_nodes as f64;
    if top.contains(id) {
        p_rand / top.ids.len() as f64 + base
    } else {
        base
    }
}

/// Draws the obstacle to relocate: with probability `p_obs` the recommended
/// obstacle, otherwise a uniform member of the manipulable set. An absent
/// recommendation (advisor off, errored, or recommendation no longer
/// manipulable) disables the bias for this draw; obstacles outside the
/// manipulable set carry no mass at all.
pub fn sample_obstacle(
    manipulable: &ManipulableSet,
    recommended: Option<ObstacleId>,
    p_obs: f64,
    rng: &mut ChaCha8Rng,
) -> Result<ObstacleId, SamplingError> {
    if manipulable.is_empty() {
        return Err(SamplingError::EmptyDomain("manipulable set"));
    }
    let recommended = recommended.filter(|id| manipulable.contains(*id));
    let u: f64 = rng.gen();
    match recommended {
        Some(id) if u < p_obs => Ok(id),
        _ => Ok(manipulable.ids()[rng.gen_range(0..manipulable.len())]),
    }
}

/// Probability that [`sample_obstacle`] returns `id`. Test/analysis helper.
pub fn obstacle_probability(
    manipulable: &ManipulableSet,
    recommended: Option<ObstacleId>,
    p_obs: f64,
    id: ObstacleId,
) -> f64 {
    if !manipulable.contains(id) {
        return 0.0;
    }
    let recommended = recommended.filter(|r| manipulable.contains(*r));
    let p_obs = if recommended.is_some() { p_obs } else { 0.0 };
    let base = (1.0 - p_obs) / manipulable.len() as f64;
    if recommended == Some(id) {
        p_obs + base
    } else {
        base
    }
}

/// Draws a placement: position uniform over the workspace rectangle, heading
/// uniform over `[0, 2π)`. Validity is the caller's concern.
pub fn sample_configuration(workspace: Bounds, rng: &mut ChaCha8Rng) -> Pose2 {
    let x = rng.gen_range(workspace.xmin..workspace.xmax);
    let y = rng.gen_range(workspace.ymin..workspace.ymax);
    let theta = rng.gen_range(0.0..TAU);
    Pose2::new(x, y, theta)
}

/// Score of a child node: the parent's score, plus one iff the expansion
/// relocated the obstacle the advisor recommended.
pub fn child_score(parent: NodeScore, moved_recommended: bool) -> NodeScore {
    parent + u32::from(moved_recommended)
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    fn manipulable(ids: &[ObstacleId]) -> ManipulableSet {
        ManipulableSet::from_ids(ids.iter().copied())
    }

    #[test]
    fn params_validation() {
        assert!(SamplingParams::new(0.0, 0.0, 1, 0).is_ok());
        assert!(SamplingParams::new(0.99, 0.99, 4, 7).is_ok());
        assert_eq!(
            SamplingParams::new(1.0, 0.0, 1, 0),
            Err(SamplingError::BadProbability("p_rand", 1.0))
        );
        assert_eq!(
            SamplingParams::new(0.0, -0.1, 1, 0),
            Err(SamplingError::BadProbability("p_obs", -0.1))
        );
        assert_eq!(
            SamplingParams::new(0.0, 0.0, 0, 0),
            Err(SamplingError::BadCandidateCount)
        );
    }

    #[test]
    fn node_distribution_sums_to_one() {
        let mut top = TopScoreSet::root();
        top.observe(3, 2);
        top.observe(7, 2);
        for p in [0.0, 0.3, 0.8, 0.999] {
            let total: f64 = (0..10).map(|i| node_probability(10, &top, p, i)).sum();
            assert!((total - 1.0).abs() < 1e-12, "p={p} total={total}");
        }
    }

    #[test]
    fn node_frequencies_match_the_mixture() {
        let mut top = TopScoreSet::root();
        top.observe(3, 2);
        top.observe(7, 2); // top set becomes {3, 7}
        let params = SamplingParams::new(0.8, 0.0, 1, 42).unwrap();
        let mut rng = params.rng();
        let n = 100_000;
        let mut counts = [0usize; 10];
        for _ in 0..n {
            counts[sample_node(10, &top, 0.8, &mut rng).unwrap()] += 1;
        }
        for (i, &c) in counts.iter().enumerate() {
            let expected = node_probability(10, &top, 0.8, i);
            let observed = c as f64 / n as f64;
            assert!(
                (observed - expected).abs() < 0.01,
                "node {i}: observed {observed}, expected {expected}"
            );
        }
        // Spot the closed-form values: members 0.42, others 0.02.
        assert!((node_probability(10, &top, 0.8, 3) - 0.42).abs() < 1e-12);
        assert!((node_probability(10, &top, 0.8, 0) - 0.02).abs() < 1e-12);
    }

    #[test]
    fn obstacle_distribution_sums_to_one_and_biases_the_recommendation() {
        let set = manipulable(&[1, 3, 4, 5]);
        for p in [0.0, 0.5, 0.8] {
            let total: f64 = [1, 3, 4, 5]
                .iter()
                .map(|&id| obstacle_probability(&set, Some(3), p, id))
                .sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
        assert!((obstacle_probability(&set, Some(3), 0.8, 3) - 0.85).abs() < 1e-12);
        assert!((obstacle_probability(&set, Some(3), 0.8, 1) - 0.05).abs() < 1e-12);
        assert_eq!(obstacle_probability(&set, Some(3), 0.8, 2), 0.0);
        // Absent recommendation: uniform.
        assert!((obstacle_probability(&set, None, 0.8, 1) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn obstacle_frequencies_match_and_unmanipulable_is_never_drawn() {
        let set = manipulable(&[1, 3, 4, 5]);
        let params = SamplingParams::new(0.0, 0.8, 1, 9).unwrap();
        let mut rng = params.rng();
        let n = 100_000;
        let mut counts = std::collections::HashMap::new();
        for _ in 0..n {
            *counts
                .entry(sample_obstacle(&set, Some(3), 0.8, &mut rng).unwrap())
                .or_insert(0usize) += 1;
        }
        assert_eq!(counts.get(&2), None, "unmanipulable obstacle drawn");
        for id in [1u32, 3, 4, 5] {
            let expected = obstacle_probability(&set, Some(3), 0.8, id);
            let observed = *counts.get(&id).unwrap_or(&0) as f64 / n as f64;
            assert!(
                (observed - expected).abs() < 0.01,
                "obstacle {id}: observed {observed}, expected {expected}"
            );
        }
    }

    /// With both biases at zero the draws must be statistically uniform:
    /// chi-square goodness of fit at significance 0.01.
    #[test]
    fn zero_bias_is_uniform() {
        let chi2_p = |counts: &[usize], n: usize| {
            let e = n as f64 / counts.len() as f64;
            let stat: f64 = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
            let dist = ChiSquared::new((counts.len() - 1) as f64).unwrap();
            1.0 - dist.cdf(stat)
        };
        let params = SamplingParams::uniform(1234);
        let mut rng = params.rng();
        let n = 100_000;
        let top = TopScoreSet::root();
        let mut node_counts = vec![0usize; 10];
        for _ in 0..n {
            node_counts[sample_node(10, &top, 0.0, &mut rng).unwrap()] += 1;
        }
        assert!(chi2_p(&node_counts, n) > 0.01);

        let set = manipulable(&[2, 4, 6, 8]);
        let mut obstacle_counts = std::collections::HashMap::new();
        for _ in 0..n {
            *obstacle_counts
                .entry(sample_obstacle(&set, None, 0.0, &mut rng).unwrap())
                .or_insert(0usize) += 1;
        }
        let counts: Vec<usize> = [2u32, 4, 6, 8]
            .iter()
            .map(|id| *obstacle_counts.get(id).unwrap_or(&0))
            .collect();
        assert!(chi2_p(&counts, n) > 0.01);
    }

    #[test]
    fn configuration_samples_cover_the_workspace() {
        let ws = Bounds::new(-2.0, 1.0, 4.0, 7.0);
        let params = SamplingParams::uniform(5);
        let mut rng = params.rng();
        let n = 20_000;
        let (mut sx, mut st) = (0.0, 0.0);
        for _ in 0..n {
            let pose = sample_configuration(ws, &mut rng);
            assert!(ws.contains(pose.position()));
            assert!((0.0..TAU).contains(&pose.theta));
            sx += pose.x;
            st += pose.theta;
        }
        // Means land near the centers (loose 3-sigma bounds).
        assert!((sx / n as f64 - 1.0).abs() < 0.05);
        assert!((st / n as f64 - TAU / 2.0).abs() < 0.05);
    }

    #[test]
    fn same_seed_same_stream() {
        let params = SamplingParams::new(0.5, 0.5, 1, 77).unwrap();
        let ws = Bounds::new(0.0, 0.0, 1.0, 1.0);
        let draw = || {
            let mut rng = params.rng();
            (0..100)
                .map(|_| sample_configuration(ws, &mut rng))
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(), draw());
    }

    #[test]
    fn scores_and_top_set() {
        assert_eq!(child_score(0, false), 0);
        assert_eq!(child_score(2, true), 3);
        let scores = [0u32, 2, 1, 2];
        let top = recompute_top_set(&scores);
        assert_eq!(top.max_score(), 2);
        assert_eq!(top.ids(), &[1, 3]);
        // The incremental path agrees with the recomputation.
        let mut incremental = TopScoreSet::root();
        for (id, &s) in scores.iter().enumerate().skip(1) {
            incremental.observe(id, s);
        }
        assert_eq!(incremental, top);
        assert!(incremental.contains(3));
        assert!(!incremental.contains(0));
    }
}
