//! ECH capacities of ellipsoids and polydisks, a brute-force oracle over
//! minimal generators, and capacity-ratio scans.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::domains::ToricDomain;
use crate::error::{Error, Result};
use crate::generators::{enumerate_with_limit, ConvexGenerator, LabelMode};
use crate::rational::Rational;

/// Node budget for a single brute-force capacity evaluation.
pub const BRUTEFORCE_NODE_LIMIT: u64 = 50_000_000;

/// `c_0, ..., c_kmax` of `E(a,b)`: the sorted multiset `{am + bn : m, n >= 0}`.
pub fn ellipsoid_capacities(a: &Rational, b: &Rational, k_max: usize) -> Vec<Rational> {
    // rows n = 0, 1, ...; each row a·m + b·n is increasing in m
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((Rational::zero(), 0u64, 0u64)));
    let mut out = Vec::with_capacity(k_max + 1);
    while out.len() <= k_max {
        let Reverse((value, m, n)) = heap.pop().expect("heap never empties");
        heap.push(Reverse((&value + a, m + 1, n)));
        if m == 0 {
            heap.push(Reverse((&value + b, 0, n + 1)));
        }
        out.push(value);
    }
    out
}

pub fn cap_ellipsoid(a: &Rational, b: &Rational, k: usize) -> Rational {
    ellipsoid_capacities(a, b, k).pop().expect("k + 1 entries")
}

/// `c_0, ..., c_kmax` of `P(a,b)`: `c_k = min{am + bn : (m+1)(n+1) >= k+1}`.
pub fn polydisk_capacities(a: &Rational, b: &Rational, k_max: usize) -> Vec<Rational> {
    // best[r] = least value whose rectangle holds exactly r + 1 points (capped)
    let mut best: Vec<Option<Rational>> = vec![None; k_max + 1];
    let kk = k_max as u64 + 1;
    for m in 0..kk {
        let n_max = kk.div_ceil(m + 1) - 1;
        let am = a.scale(m as i64);
        for n in 0..=n_max {
            let reach = ((m + 1) * (n + 1) - 1).min(k_max as u64) as usize;
            let value = &am + &b.scale(n as i64);
            match &best[reach] {
                Some(v) if *v <= value => {}
                _ => best[reach] = Some(value),
            }
        }
    }
    let mut out = vec![Rational::zero(); k_max + 1];
    let mut running: Option<Rational> = None;
    for k in (0..=k_max).rev() {
        if let Some(v) = best[k].take() {
            running = Some(match running {
                Some(r) if r <= v => r,
                _ => v,
            });
        }
        out[k] = running.clone().expect("reach k_max is always attained");
    }
    out
}

pub fn cap_polydisk(a: &Rational, b: &Rational, k: usize) -> Rational {
    polydisk_capacities(a, b, k).pop().expect("k + 1 entries")
}

/// Least action of a purely elliptic generator of index `2k`.
pub fn cap_bruteforce(domain: &ToricDomain, k: u64) -> Result<Rational> {
    cap_bruteforce_with_limit(domain, k, BRUTEFORCE_NODE_LIMIT)
}

pub fn cap_bruteforce_with_limit(domain: &ToricDomain, k: u64, node_limit: u64) -> Result<Rational> {
    if k == 0 {
        return Ok(Rational::zero());
    }
    // e(1,0)^k and e(0,1)^k both have index 2k
    let bound =
        domain.action(&ConvexGenerator::single(1, 0, k)?).min(domain.action(&ConvexGenerator::single(0, 1, k)?));
    let found = enumerate_with_limit(2 * k, &bound, domain, LabelMode::EllipticOnly, node_limit)?;
    found
        .iter()
        .map(|g| domain.action(g))
        .min()
        .ok_or_else(|| Error::InvalidParameters(format!("no generator of index {}", 2 * k)))
}

/// `c_0, ..., c_kmax` for one domain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapacityTable {
    pub domain: ToricDomain,
    pub entries: Vec<Rational>,
}

impl CapacityTable {
    /// Closed forms for polydisks and ellipsoids; brute force otherwise.
    pub fn compute(domain: &ToricDomain, k_max: usize) -> Result<Self> {
        let entries = match domain {
            ToricDomain::Polydisk { a, b } => polydisk_capacities(a, b, k_max),
            ToricDomain::Ellipsoid { a, b } => ellipsoid_capacities(a, b, k_max),
            ToricDomain::ConvexPl(_) => (0..=k_max as u64).map(|k| cap_bruteforce(domain, k)).collect::<Result<_>>()?,
        };
        Ok(CapacityTable { domain: domain.clone(), entries })
    }

    pub fn k_max(&self) -> usize {
        self.entries.len() - 1
    }

    /// `k,capacity_num,capacity_den` rows, plus `capacity_float` if asked.
    pub fn to_csv(&self, with_float: bool) -> String {
        let mut out = String::from("k,capacity_num,capacity_den");
        if with_float {
            out.push_str(",capacity_float");
        }
        out.push('\n');
        for (k, c) in self.entries.iter().enumerate() {
            write!(out, "{k},{},{}", c.numer(), c.denom()).unwrap();
            if with_float {
                write!(out, ",{}", c.to_f64()).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Volumes whose ratio is the square of the limiting capacity ratio.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VolumeLimit {
    pub num_volume: Rational,
    pub den_volume: Rational,
}

impl VolumeLimit {
    pub fn ratio(&self) -> Rational {
        &self.num_volume / &self.den_volume
    }

    /// `√(vol(num) / vol(den))`, for display and soft checks only.
    pub fn limit_f64(&self) -> f64 {
        self.ratio().to_f64().sqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioScanResult {
    pub k_max: usize,
    pub max_ratio: Rational,
    pub argmax_k: usize,
    pub num_capacity_at_argmax: Rational,
    pub den_capacity_at_argmax: Rational,
    pub final_ratio: Rational,
    pub volume_limit: VolumeLimit,
}

/// Exact `max_{1 <= k <= kmax} c_k(num) / c_k(den)`, smallest maximizing `k`.
pub fn ratio_scan(num: &ToricDomain, den: &ToricDomain, k_max: usize) -> Result<RatioScanResult> {
    if k_max == 0 {
        return Err(Error::InvalidParameters("k_max must be at least 1".into()));
    }
    for d in [num, den] {
        if matches!(d, ToricDomain::ConvexPl(_)) {
            return Err(Error::InvalidDomain(format!("ratio scans need a polydisk or ellipsoid, got {d}")));
        }
    }
    let top = CapacityTable::compute(num, k_max)?.entries;
    let bottom = CapacityTable::compute(den, k_max)?.entries;
    let mut best: Option<(Rational, usize)> = None;
    for k in 1..=k_max {
        let ratio = &top[k] / &bottom[k];
        if best.as_ref().is_none_or(|(r, _)| ratio > *r) {
            best = Some((ratio, k));
        }
    }
    let (max_ratio, argmax_k) = best.expect("k_max >= 1");
    Ok(RatioScanResult {
        k_max,
        max_ratio,
        argmax_k,
        num_capacity_at_argmax: top[argmax_k].clone(),
        den_capacity_at_argmax: bottom[argmax_k].clone(),
        final_ratio: &top[k_max] / &bottom[k_max],
        volume_limit: VolumeLimit { num_volume: num.volume(), den_volume: den.volume() },
    })
}
