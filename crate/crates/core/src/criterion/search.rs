//! Exhaustive search for factorizations satisfying the criterion.
//!
//! Candidates `Λᵢ ≤ e(p,q)^dᵢ` are generated once per part size `dᵢ`; on
//! `P(a,1)` the action of `Λ` is `x(Λ) + a·y(Λ)`, so the action inequality
//! is decided by the endpoints alone and only the index has to be matched by
//! walking paths. Candidates are then assembled into factorizations with the
//! orbit and subset conditions checked incrementally.

use serde::{Deserialize, Serialize};

use super::{le_check_with, orbit_conflict, subset_index, CMode, EmbeddingProblem, Factorization};
use crate::error::{Error, Result};
use crate::generators::{search_endpoint, ConvexGenerator, EndpointSpec, LabelMode, NodeCounter};
use crate::rational::Rational;

pub const DEFAULT_NODE_LIMIT: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Use the endpoint restrictions derived from action and genus.
    pub prune: bool,
    /// Visited path and assembly nodes before giving up.
    pub node_limit: u64,
    /// Only factorizations with this many parts (inclusive range).
    pub n_range: Option<(usize, usize)>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { prune: true, node_limit: DEFAULT_NODE_LIMIT, n_range: None }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateCount {
    pub d: u64,
    pub count: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Endpoints `(x, y)` inside the action bound.
    pub endpoints: u64,
    /// Endpoints discarded before walking any path.
    pub endpoints_pruned: u64,
    /// Candidates `Λ ≤ e(p,q)^d` per part size.
    pub candidates: Vec<CandidateCount>,
    /// Partial factorizations examined during assembly.
    pub assemblies: u64,
    pub factorizations: u64,
    pub nodes_visited: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub factorizations: Vec<Factorization>,
    pub stats: SearchStats,
}

/// Every `Λ` with `Λ ≤ e(p,q)^d` for the problem, in enumeration order.
pub fn candidates(prob: &EmbeddingProblem, d: u64, config: &SearchConfig) -> Result<Vec<ConvexGenerator>> {
    let mut counter = NodeCounter::new(config.node_limit);
    let mut stats = SearchStats::default();
    candidates_inner(prob, d, config.prune, &mut counter, &mut stats)
}

fn candidates_inner(
    prob: &EmbeddingProblem,
    d: u64,
    prune: bool,
    counter: &mut NodeCounter,
    stats: &mut SearchStats,
) -> Result<Vec<ConvexGenerator>> {
    let threshold = prob.threshold(d);
    let minimal = prob.minimal(d);
    let source = prob.source();
    let index = prob.target_index(d);
    // x' + y' + m' - 1
    let genus = (prob.p + prob.q + 1) * d - 1;
    let restricted = prune && prob.in_regime();
    let mut out = Vec::new();

    for y in 0u64.. {
        let Some(x_max) = threshold.max_integer(&prob.a.scale(y as i64)) else { break };
        stats.endpoints += x_max + 1;
        let x_min = if prune { genus.saturating_sub(y) } else { 0 };
        // y < qd
        if restricted && y >= prob.q * d {
            stats.endpoints_pruned += x_max + 1;
            continue;
        }
        for x in 0..=x_max {
            if x < x_min || (restricted && prob.q == 2 && !factor_bounds_hold(&prob.a, prob.p, d, x, y)) {
                stats.endpoints_pruned += 1;
                continue;
            }
            let h_max = if prune { 2 * (x + y - genus) } else { u64::MAX };
            let spec = EndpointSpec { x, y, index, h_max, labels: LabelMode::All };
            let mut found = Vec::new();
            search_endpoint(&spec, None, counter, &mut |g| found.push(g))?;
            for g in found {
                if le_check_with(&g, &minimal, &source, &threshold)?.passes() {
                    out.push(g);
                }
            }
        }
    }
    stats.candidates.push(CandidateCount { d, count: out.len() });
    Ok(out)
}

/// `a > (x - pd)/(2d - y)` and `a > (3d - 1 - y)/(2d - y)`, for `y < 2d`.
fn factor_bounds_hold(a: &Rational, p: u64, d: u64, x: u64, y: u64) -> bool {
    let gap = Rational::from(2 * d - y);
    let lhs = a * &gap;
    let first = Rational::from(x as i64 - (p * d) as i64);
    let second = Rational::from((3 * d) as i64 - 1 - y as i64);
    lhs > first && lhs > second
}

/// Partitions of `total` into exactly `n` positive parts, each listed in
/// nonincreasing order; partitions in lexicographically decreasing order.
fn partitions(total: u64, n: usize) -> Vec<Vec<u64>> {
    fn rec(total: u64, n: usize, cap: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if n == 0 {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let hi = cap.min(total.saturating_sub(n as u64 - 1));
        for first in (1..=hi).rev() {
            if first * (n as u64) < total {
                break;
            }
            prefix.push(first);
            rec(total - first, n - 1, first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, n, total, &mut Vec::new(), &mut out);
    out
}

struct Assembly<'a> {
    prob: &'a EmbeddingProblem,
    dparts: &'a [u64],
    pools: Vec<&'a [ConvexGenerator]>,
    chosen: Vec<usize>,
    parts: Vec<ConvexGenerator>,
    counter: &'a mut NodeCounter,
    stats: &'a mut SearchStats,
    out: &'a mut Vec<Factorization>,
}

impl Assembly<'_> {
    fn extend(&mut self) -> Result<()> {
        let k = self.parts.len();
        if k == self.dparts.len() {
            self.stats.factorizations += 1;
            self.out.push(Factorization { n: k, lambda_parts: self.parts.clone(), dprime_parts: self.dparts.to_vec() });
            return Ok(());
        }
        // parts with equal d are unordered: keep their pool indices nondecreasing
        let start = if k > 0 && self.dparts[k] == self.dparts[k - 1] { self.chosen[k - 1] } else { 0 };
        for j in start..self.pools[k].len() {
            self.counter.tick()?;
            self.stats.assemblies += 1;
            let g = &self.pools[k][j];
            if self.compatible(k, g) {
                self.chosen.push(j);
                self.parts.push(g.clone());
                let r = self.extend();
                self.parts.pop();
                self.chosen.pop();
                r?;
            }
        }
        Ok(())
    }

    /// Orbit and subset conditions involving the new part `k`.
    fn compatible(&self, k: usize, g: &ConvexGenerator) -> bool {
        let dk = self.dparts[k];
        for (i, gi) in self.parts.iter().enumerate() {
            if gi.shares_hyperbolic_orbit(g).is_some() || orbit_conflict(gi, self.dparts[i], g, dk) {
                return false;
            }
        }
        if k == 0 {
            return true;
        }
        let mut parts = self.parts.clone();
        parts.push(g.clone());
        for mask in 1u64..(1 << k) {
            let mut subset: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
            subset.push(k);
            let d: u64 = subset.iter().map(|&i| self.dparts[i]).sum();
            if subset_index(&parts, &subset) != Some(self.prob.target_index(d)) {
                return false;
            }
        }
        true
    }
}

/// All factorizations passing the criterion, ordered by number of parts,
/// then partition of `d0` (larger parts first), then candidate order.
pub fn criterion_search(prob: &EmbeddingProblem, config: &SearchConfig) -> Result<SearchResult> {
    let mut counter = NodeCounter::new(config.node_limit);
    let mut stats = SearchStats::default();
    let (lo, hi) = config.n_range.unwrap_or((1, prob.d0 as usize));
    let (lo, hi) = (lo.max(1), hi.min(prob.d0 as usize));

    let mut pools: Vec<Option<Vec<ConvexGenerator>>> = vec![None; prob.d0 as usize + 1];
    let mut factorizations = Vec::new();
    for n in lo..=hi {
        for dparts in partitions(prob.d0, n) {
            for &d in &dparts {
                if pools[d as usize].is_none() {
                    pools[d as usize] = Some(candidates_inner(prob, d, config.prune, &mut counter, &mut stats)?);
                }
            }
            let mut assembly = Assembly {
                prob,
                dparts: &dparts,
                pools: dparts.iter().map(|&d| pools[d as usize].as_deref().unwrap()).collect(),
                chosen: Vec::new(),
                parts: Vec::new(),
                counter: &mut counter,
                stats: &mut stats,
                out: &mut factorizations,
            };
            assembly.extend()?;
        }
    }
    stats.candidates.sort_by_key(|c| c.d);
    stats.nodes_visited = counter.visited;
    Ok(SearchResult { factorizations, stats })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Obstructed,
    NotObstructed,
    Inconclusive,
}

/// Result of running the criterion against `e(p,q)^d0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub problem: EmbeddingProblem,
    pub outcome: Outcome,
    /// Obstructed: every embedding needs `c >= bound` (supremum mode), or
    /// the embedding at the given `c` does not exist (exact mode, `bound = c`).
    pub bound: Option<Rational>,
    pub witness: Option<Factorization>,
    pub reason: Option<String>,
    pub note: Option<String>,
    pub stats: SearchStats,
}

/// Runs the full search and classifies the result.
pub fn obstruct(prob: &EmbeddingProblem, config: &SearchConfig) -> ObstructionReport {
    let note = match prob.mode {
        CMode::SupremumStrict => Some(
            "action tested with strict < against (qa+p)·d_i, which covers <= pc·d_i for every c with pc < qa+p"
                .to_string(),
        ),
        CMode::Exact { .. } => None,
    };
    let mut report = ObstructionReport {
        problem: prob.clone(),
        outcome: Outcome::Inconclusive,
        bound: None,
        witness: None,
        reason: None,
        note,
        stats: SearchStats::default(),
    };
    match criterion_search(prob, config) {
        Err(Error::NodeLimit(limit)) => {
            report.reason = Some(format!("node limit of {limit} exceeded"));
            report.stats.nodes_visited = limit;
        }
        Err(e) => report.reason = Some(e.to_string()),
        Ok(SearchResult { factorizations, stats }) => {
            report.stats = stats;
            if let Some(first) = factorizations.into_iter().next() {
                report.outcome = Outcome::NotObstructed;
                report.witness = Some(first);
            } else if prob.q != 2 {
                report.reason = Some(format!(
                    "search is empty, but e({},{})^{} is not known to be minimal",
                    prob.p, prob.q, prob.d0
                ));
            } else {
                report.outcome = Outcome::Obstructed;
                report.bound = Some(match &prob.mode {
                    CMode::SupremumStrict => prob.trivial_bound(),
                    CMode::Exact { c } => c.clone(),
                });
            }
        }
    }
    report
}
