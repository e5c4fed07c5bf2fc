#![allow(dead_code)]

use ech_core::{ConvexGenerator, EdgeFactor, Rational, ToricDomain};
use num_integer::Integer;
use proptest::prelude::*;

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

pub fn g(s: &str) -> ConvexGenerator {
    s.parse().unwrap()
}

/// Primitive directions with `run <= x0`, `drop <= y0`, by decreasing slope.
fn directions(x0: u64, y0: u64) -> Vec<(u64, u64)> {
    let mut dirs: Vec<(u64, u64)> = (0..=x0)
        .flat_map(|run| (0..=y0).map(move |drop| (run, drop)))
        .filter(|&(run, drop)| run.gcd(&drop) == 1)
        .collect();
    // drop/run ascending, vertical last
    dirs.sort_by(|a, b| (a.1 * b.0).cmp(&(b.1 * a.0)));
    dirs
}

/// Every convex lattice path from `(0, y0)` to `(x0, 0)`, as lists of
/// `(run, drop, multiplicity)` in decreasing slope order.
pub fn naive_paths(x0: u64, y0: u64) -> Vec<Vec<(u64, u64, u64)>> {
    fn go(dirs: &[(u64, u64)], x: u64, y: u64, path: &mut Vec<(u64, u64, u64)>, out: &mut Vec<Vec<(u64, u64, u64)>>) {
        if x == 0 && y == 0 {
            out.push(path.clone());
            return;
        }
        for (i, &(run, drop)) in dirs.iter().enumerate() {
            let mut m = 1;
            while run * m <= x && drop * m <= y {
                path.push((run, drop, m));
                go(&dirs[i + 1..], x - run * m, y - drop * m, path, out);
                path.pop();
                m += 1;
            }
        }
    }
    let mut out = Vec::new();
    if x0 + y0 > 0 {
        go(&directions(x0, y0), x0, y0, &mut Vec::new(), &mut out);
    }
    out
}

/// All labellings of a path: each non-axis edge either elliptic or carrying
/// one `h`.
pub fn labellings(path: &[(u64, u64, u64)]) -> Vec<ConvexGenerator> {
    let n = path.len();
    let axis_mask: u32 =
        path.iter().enumerate().filter(|(_, &(run, drop, _))| run == 0 || drop == 0).map(|(i, _)| 1 << i).sum();
    (0u32..1 << n)
        .filter(|mask| mask & axis_mask == 0)
        .map(|mask| {
            let factors = path.iter().enumerate().map(|(i, &(run, drop, m))| {
                if mask >> i & 1 == 1 {
                    EdgeFactor::hyperbolic(run, drop, m).unwrap()
                } else {
                    EdgeFactor::elliptic(run, drop, m).unwrap()
                }
            });
            ConvexGenerator::new(factors).unwrap()
        })
        .collect()
}

pub fn elliptic(path: &[(u64, u64, u64)]) -> ConvexGenerator {
    ConvexGenerator::new(path.iter().map(|&(run, drop, m)| EdgeFactor::elliptic(run, drop, m).unwrap())).unwrap()
}

/// Lattice count by Pick's theorem on the polygon bounded by `g` and the axes.
pub fn pick_count(g: &ConvexGenerator) -> u64 {
    let (x, y) = (g.x() as i128, g.y() as i128);
    let m: u64 = g.edges().iter().map(|e| e.multiplicity).sum();
    if x == 0 || y == 0 {
        return m + 1;
    }
    let mut poly: Vec<(i128, i128)> = vec![(0, 0)];
    poly.extend(g.vertices().into_iter().map(|(a, b)| (a as i128, b as i128)));
    let twice_area: i128 = (0..poly.len())
        .map(|i| {
            let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
            p.0 * q.1 - q.0 * p.1
        })
        .sum::<i128>()
        .abs();
    let boundary = m as i128 + x + y;
    // L = A + B/2 + 1
    ((twice_area + boundary) / 2 + 1) as u64
}

/// Random valid generators with small edges, with or without `h` labels.
pub fn arb_generator(allow_h: bool) -> impl Strategy<Value = ConvexGenerator> {
    prop::collection::vec((0u64..5, 0u64..5, 1u64..4, any::<bool>()), 1..5).prop_filter_map(
        "needs a valid generator",
        move |edges| {
            let mut seen = std::collections::BTreeSet::new();
            let mut factors = Vec::new();
            for (run, drop, m, h) in edges {
                if run.gcd(&drop) != 1 || !seen.insert((run, drop)) {
                    continue;
                }
                let f = if h && allow_h {
                    EdgeFactor::hyperbolic(run, drop, m)
                } else {
                    EdgeFactor::elliptic(run, drop, m)
                };
                factors.push(f.ok()?);
            }
            ConvexGenerator::new(factors).ok()
        },
    )
}

pub fn arb_positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..40, 1i64..8).prop_map(|(n, d)| Rational::new(n, d))
}

pub fn arb_domain() -> impl Strategy<Value = ToricDomain> {
    (any::<bool>(), arb_positive_rational(), arb_positive_rational()).prop_map(|(poly, a, b)| {
        if poly {
            ToricDomain::polydisk(a, b).unwrap()
        } else {
            ToricDomain::ellipsoid(a, b).unwrap()
        }
    })
}
