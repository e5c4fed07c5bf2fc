//! Bounded enumeration of convex generators.
//!
//! For each pair of endpoints `(x, y)` a depth-first search walks vertex
//! chains from `(0, y)` to `(x, 0)`, trying primitive directions in order of
//! decreasing slope. Every partial chain carries the exact number of lattice
//! points in the columns it has already passed; a chain is cut as soon as the
//! lattice points still reachable (between the chord to `(x, 0)` and the
//! extension of the last edge) cannot land in the target range, or as soon
//! as the action already spent plus a lower bound for the rest exceeds the
//! budget. Labels are assigned at the leaves.

use num_integer::Integer;

use super::{ConvexGenerator, Direction, EdgeFactor, Label};
use crate::domains::{ScaledSupport, ToricDomain};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelMode {
    EllipticOnly,
    All,
}

/// Counts visited search nodes against a limit.
#[derive(Clone, Debug)]
pub(crate) struct NodeCounter {
    pub visited: u64,
    pub limit: u64,
}

impl NodeCounter {
    pub fn new(limit: u64) -> Self {
        NodeCounter { visited: 0, limit }
    }

    pub(crate) fn tick(&mut self) -> Result<()> {
        self.visited += 1;
        if self.visited > self.limit {
            Err(Error::NodeLimit(self.limit))
        } else {
            Ok(())
        }
    }
}

/// One endpoint query: generators from `(0, y)` to `(x, 0)` with the given
/// index and at most `h_max` hyperbolic edges.
#[derive(Clone, Copy, Debug)]
pub(crate) struct EndpointSpec {
    pub x: u64,
    pub y: u64,
    pub index: u64,
    pub h_max: u64,
    pub labels: LabelMode,
}

/// Scaled action budget: accept iff scaled action `<= budget`.
pub(crate) struct ActionBudget<'a> {
    pub support: &'a ScaledSupport,
    pub budget: i128,
}

struct Search<'a, 'b> {
    x: u64,
    index: u64,
    h_max: u64,
    lattice_min: u64,
    lattice_max: u64,
    dirs: Vec<Direction>,
    unit_cost: Vec<i128>,
    action: Option<&'a ActionBudget<'a>>,
    counter: &'b mut NodeCounter,
    path: Vec<(usize, u64)>,
    emit: &'b mut dyn FnMut(ConvexGenerator),
}

/// Lattice points contributed by the columns `u .. u + m·run` under an edge
/// leaving height `v` (the column at the far end is not included).
fn edge_columns(v: u64, d: Direction, m: u64) -> u64 {
    let (a, b, m, v) = (d.run as u128, d.drop as u128, m as u128, v as u128);
    let total = m * a * (v + 1) - a * b * m * (m - 1) / 2 - m * (a - 1) * (b + 1) / 2;
    total as u64
}

/// Lattice points on or under the segment from `(0, v)` to `(n, 0)`.
fn triangle_count(n: u64, v: u64) -> u64 {
    ((n + 1) * (v + 1) + n.gcd(&v)).div_ceil(2)
}

impl Search<'_, '_> {
    fn run(&mut self, y: u64) -> Result<()> {
        self.node(0, y, None, 0, 0)
    }

    /// Lattice points in columns `u..=x` under the ray of slope `-ratio`
    /// from `(u, v)`, capped at `v`.
    fn upper_bound(&self, u: u64, v: u64, prev: Option<Direction>) -> u64 {
        let n = self.x - u;
        match prev {
            None => (n + 1) * (v + 1),
            Some(d) if d.drop == 0 => (n + 1) * (v + 1),
            Some(d) => {
                let (a, b) = (d.run as u128, d.drop as u128);
                let mut total = 0u64;
                for t in 0..=n as u128 {
                    let lowered = t * b;
                    let height = if lowered > v as u128 * a { 0 } else { (v as u128 * a - lowered) / a };
                    total += height as u64 + 1;
                }
                total
            }
        }
    }

    fn node(&mut self, u: u64, v: u64, prev: Option<usize>, count: u64, spent: i128) -> Result<()> {
        self.counter.tick()?;
        if v == 0 {
            if u == self.x {
                self.leaf(count);
            } else if prev.is_none() {
                // a path along the x-axis
                return self.step(0, self.x - u, u, v, count, spent);
            }
            return Ok(());
        }
        let prev_dir = prev.map(|i| self.dirs[i]);
        if prev_dir == Some(Direction::VERTICAL) {
            return Ok(());
        }

        let remaining_min = if u == self.x { v + 1 } else { triangle_count(self.x - u, v) };
        if count + remaining_min > self.lattice_max {
            return Ok(());
        }
        if count + self.upper_bound(u, v, prev_dir) < self.lattice_min {
            return Ok(());
        }
        if let Some(ab) = self.action {
            let rest = (v as i128 * ab.support.x_intercept()).max((self.x - u) as i128 * ab.support.y_intercept());
            if spent + rest > ab.budget {
                return Ok(());
            }
        }

        let start = prev.map_or(0, |i| i + 1);
        for i in start..self.dirs.len() {
            let d = self.dirs[i];
            if u == self.x {
                if d == Direction::VERTICAL {
                    self.step(i, v, u, v, count, spent)?;
                }
                continue;
            }
            // the first edge may not be steeper than the chord to (x, 0)
            if (d.drop as u128) * ((self.x - u) as u128) > (v as u128) * (d.run as u128) {
                break;
            }
            if d.run > self.x - u || d.drop > v {
                continue;
            }
            let mut m = 1;
            while u + m * d.run <= self.x && m * d.drop <= v {
                self.step(i, m, u, v, count, spent)?;
                m += 1;
            }
        }
        Ok(())
    }

    fn step(&mut self, i: usize, m: u64, u: u64, v: u64, count: u64, spent: i128) -> Result<()> {
        let d = self.dirs[i];
        let (nu, nv) = (u + m * d.run, v - m * d.drop);
        let mut added = if d == Direction::VERTICAL { v + 1 } else { edge_columns(v, d, m) };
        if nv == 0 && d != Direction::VERTICAL {
            if nu != self.x {
                return Ok(());
            }
            added += 1;
        }
        let spent = spent + self.unit_cost[i] * m as i128;
        self.path.push((i, m));
        let r = self.node(nu, nv, Some(i), count + added, spent);
        self.path.pop();
        r
    }

    fn leaf(&mut self, lattice: u64) {
        if lattice < self.lattice_min || lattice > self.lattice_max {
            return;
        }
        if let Some(ab) = self.action {
            let total: i128 = self.path.iter().map(|&(i, m)| self.unit_cost[i] * m as i128).sum();
            if total > ab.budget {
                return;
            }
        }
        let twice = 2 * (lattice - 1);
        if twice < self.index {
            return;
        }
        let h = twice - self.index;
        let slanted: Vec<usize> = (0..self.path.len()).filter(|&k| !self.dirs[self.path[k].0].is_axis()).collect();
        if h > self.h_max || h as usize > slanted.len() {
            return;
        }
        let base: Vec<EdgeFactor> = self
            .path
            .iter()
            .map(|&(i, m)| EdgeFactor { direction: self.dirs[i], multiplicity: m, label: Label::E })
            .collect();
        for chosen in combinations(slanted.len(), h as usize) {
            let mut edges = base.clone();
            for c in chosen {
                edges[slanted[c]].label = Label::H;
            }
            (self.emit)(ConvexGenerator::from_canonical_edges(edges));
        }
    }
}

/// k-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Primitive directions fitting in an `x` by `y` box, horizontal first,
/// by decreasing slope.
fn directions(x: u64, y: u64) -> Vec<Direction> {
    let mut dirs = Vec::new();
    for run in 0..=x {
        for drop in 0..=y {
            if (run, drop) != (0, 0) && run.gcd(&drop) == 1 {
                dirs.push(Direction { run, drop });
            }
        }
    }
    dirs.sort();
    dirs
}

/// Runs one endpoint query, handing every matching generator to `emit`.
pub(crate) fn search_endpoint(
    spec: &EndpointSpec,
    action: Option<&ActionBudget<'_>>,
    counter: &mut NodeCounter,
    emit: &mut dyn FnMut(ConvexGenerator),
) -> Result<()> {
    let EndpointSpec { x, y, index, labels, .. } = *spec;
    if x == 0 && y == 0 {
        return Ok(());
    }
    let h_cap = match labels {
        LabelMode::EllipticOnly => 0,
        LabelMode::All => spec.h_max.min(x.min(y)),
    };
    let h_min = index % 2;
    if h_min > h_cap {
        return Ok(());
    }
    let lattice_min = (index + h_min) / 2 + 1;
    let lattice_max = (index + h_cap) / 2 + 1;
    // whole-box and straight-chord bounds
    if (x + 1) * (y + 1) < lattice_min || triangle_count(x, y) > lattice_max {
        return Ok(());
    }
    let dirs = directions(x, y);
    let unit_cost = match action {
        Some(ab) => dirs.iter().map(|&d| ab.support.unit_action(d)).collect(),
        None => vec![0; dirs.len()],
    };
    let mut search = Search {
        x,
        index,
        h_max: h_cap,
        lattice_min,
        lattice_max,
        dirs,
        unit_cost,
        action,
        counter,
        path: Vec::new(),
        emit,
    };
    search.run(y)
}

/// All generators with `I(Λ) = index` and `A_domain(Λ) <= action_bound`.
///
/// Order: by `y`, then `x`, then vertex chain (directions by decreasing
/// slope, smaller multiplicities first), then label assignment.
pub fn enumerate_generators(
    index: u64,
    action_bound: &Rational,
    domain: &ToricDomain,
    labels: LabelMode,
) -> Result<Vec<ConvexGenerator>> {
    enumerate_with_limit(index, action_bound, domain, labels, u64::MAX)
}

pub(crate) fn enumerate_with_limit(
    index: u64,
    action_bound: &Rational,
    domain: &ToricDomain,
    labels: LabelMode,
    node_limit: u64,
) -> Result<Vec<ConvexGenerator>> {
    if !action_bound.is_positive() {
        return Err(Error::InvalidParameters("action bound must be positive".into()));
    }
    let support = domain.scaled_support(action_bound)?;
    let budget = support.budget_at_most(action_bound)?;
    let ab = ActionBudget { support: &support, budget };
    let y_max = (budget / support.x_intercept()) as u64;
    let x_max = (budget / support.y_intercept()) as u64;
    let mut counter = NodeCounter::new(node_limit);
    let mut out = Vec::new();
    for y in 0..=y_max {
        for x in 0..=x_max {
            let floor = (y as i128 * support.x_intercept()).max(x as i128 * support.y_intercept());
            if floor > budget {
                continue;
            }
            let spec = EndpointSpec { x, y, index, h_max: u64::MAX, labels };
            search_endpoint(&spec, Some(&ab), &mut counter, &mut |g| out.push(g))?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn g(s: &str) -> ConvexGenerator {
        s.parse().unwrap()
    }

    fn set(v: Vec<ConvexGenerator>) -> BTreeSet<String> {
        v.into_iter().map(|g| g.to_string()).collect()
    }

    #[test]
    fn edge_column_counts() {
        // e(1,1) from height 1: column 0 holds (0,0),(0,1)
        assert_eq!(edge_columns(1, Direction { run: 1, drop: 1 }, 1), 2);
        // e(5,2) from height 2: columns 0..5 hold 3+2+2+1+1
        assert_eq!(edge_columns(2, Direction { run: 5, drop: 2 }, 1), 9);
        assert_eq!(triangle_count(5, 2), 10);
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(combinations(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(combinations(2, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(1, 2).is_empty());
    }

    #[test]
    fn documented_examples() {
        let p11 = ToricDomain::polydisk(Rational::one(), Rational::one()).unwrap();
        let ten = Rational::integer(10);
        assert_eq!(
            set(enumerate_generators(2, &ten, &p11, LabelMode::EllipticOnly).unwrap()),
            set(vec![g("e(1,0)"), g("e(0,1)")])
        );
        assert_eq!(
            set(enumerate_generators(4, &ten, &p11, LabelMode::EllipticOnly).unwrap()),
            set(vec![g("e(1,0)^2"), g("e(0,1)^2"), g("e(1,1)")])
        );
        assert_eq!(set(enumerate_generators(3, &ten, &p11, LabelMode::All).unwrap()), set(vec![g("h(1,1)")]));
    }

    #[test]
    fn unbounded_domain_rejected() {
        let p = ToricDomain::polydisk(Rational::one(), Rational::one()).unwrap();
        assert!(enumerate_generators(2, &Rational::zero(), &p, LabelMode::All).is_err());
    }

    #[test]
    fn node_limit_is_reported() {
        let p = ToricDomain::polydisk(Rational::one(), Rational::one()).unwrap();
        let r = enumerate_with_limit(40, &Rational::integer(30), &p, LabelMode::All, 10);
        assert_eq!(r, Err(Error::NodeLimit(10)));
    }
}
