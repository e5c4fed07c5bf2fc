//! Explicit generators showing where the criterion cannot obstruct: the
//! maximal integral path under a convex path, generators with prescribed
//! endpoints and lattice count, and three families of trivial factorizations.

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::criterion::{le_check, CMode, EmbeddingProblem, LeCheckResult};
use crate::domains::{ConvexPath, ToricDomain};
use crate::error::{Error, Result};
use crate::generators::{ConvexGenerator, EdgeFactor};
use crate::rational::Rational;

/// The unique convex integral path enclosing exactly the lattice points
/// enclosed by `path` (and the axes).
pub fn maximal_under(path: &ConvexPath) -> Result<ConvexGenerator> {
    for w in path.vertices().windows(2) {
        if !line_has_lattice_point(&w[0], &w[1]) {
            return Err(Error::InvalidPath(format!(
                "segment ({},{})-({},{}) passes through no lattice point",
                w[0].0, w[0].1, w[1].0, w[1].1
            )));
        }
    }
    let top = path.y_intercept().floor().to_u64().ok_or_else(|| Error::InvalidPath("intercept out of range".into()))?;
    let mut rows = Vec::with_capacity(top as usize + 1);
    for k in 0..=top {
        let x = path.x_at_height(&Rational::from(k)).expect("row below the y-intercept");
        rows.push(x.floor().to_u64().ok_or_else(|| Error::InvalidPath("intercept out of range".into()))?);
    }
    hull_from_rows(&rows)
}

/// Whether the line through `p` and `q` contains a point of `Z²`.
fn line_has_lattice_point(p: &(Rational, Rational), q: &(Rational, Rational)) -> bool {
    // A x + B y = C with A = dy, B = -dx
    let a = &q.1 - &p.1;
    let b = &p.0 - &q.0;
    let c = &a * &p.0 + &b * &p.1;
    let scale = a.denom().lcm(b.denom()).lcm(c.denom());
    let to_int = |r: &Rational| r.numer() * (&scale / r.denom());
    let (a, b, c) = (to_int(&a), to_int(&b), to_int(&c));
    let g = a.gcd(&b);
    if g.is_zero() {
        return false;
    }
    (c % g).is_zero()
}

/// Upper hull of the row maxima `(rows[k], k)` together with `(0, n)`.
fn hull_from_rows(rows: &[u64]) -> Result<ConvexGenerator> {
    let n = rows.len() as i128 - 1;
    let mut points: Vec<(i128, i128)> = vec![(0, n)];
    for k in (0..rows.len()).rev() {
        points.push((rows[k] as i128, k as i128));
    }
    let mut hull: Vec<(i128, i128)> = Vec::new();
    for pt in points {
        if hull.last() == Some(&pt) {
            continue;
        }
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 - o.0) * (pt.1 - o.1) - (a.1 - o.1) * (pt.0 - o.0);
            if cross < 0 {
                break;
            }
            hull.pop();
        }
        hull.push(pt);
    }
    if hull.len() < 2 {
        return Err(Error::InvalidPath("encloses only the origin".into()));
    }
    let mut factors = Vec::with_capacity(hull.len() - 1);
    for w in hull.windows(2) {
        let (dx, dy) = ((w[1].0 - w[0].0) as u64, (w[0].1 - w[1].1) as u64);
        let g = dx.gcd(&dy);
        factors.push(EdgeFactor::elliptic(dx / g, dy / g, g)?);
    }
    ConvexGenerator::new(factors)
}

/// Box points strictly above the chord from `(0, y0)` to `(x0, 0)`, in the
/// order in which they are added: by the value of `y0·x + x0·y`, then by `x`.
pub fn selection_order(x0: u64, y0: u64) -> Vec<(u64, u64)> {
    let mut strip = Vec::new();
    for y in 0..=y0 {
        for x in 0..=x0 {
            if y0 * x + x0 * y > x0 * y0 {
                strip.push((x, y));
            }
        }
    }
    strip.sort_by_key(|&(x, y)| (y0 * x + x0 * y, x));
    strip
}

/// Purely elliptic `Λ` with `x(Λ) = x0`, `y(Λ) = y0` and `L(Λ) = count`.
pub fn generator_with_count(x0: u64, y0: u64, count: u64) -> Result<ConvexGenerator> {
    if x0 == 0 || y0 == 0 {
        return Err(Error::InvalidParameters("x0 and y0 must be positive".into()));
    }
    let chord = ConvexGenerator::segment(x0, y0)?;
    let (low, high) = (chord.lattice_count(), (x0 + 1) * (y0 + 1));
    if count < low || count > high {
        return Err(Error::InvalidParameters(format!(
            "lattice count {count} outside [{low}, {high}] for endpoints ({x0}, {y0})"
        )));
    }
    let mut rows = chord.row_maxima();
    for (x, y) in selection_order(x0, y0).into_iter().take((count - low) as usize) {
        rows[y as usize] = rows[y as usize].max(x);
    }
    let g = hull_from_rows(&rows)?;
    debug_assert_eq!(g.lattice_count(), count);
    Ok(g)
}

/// The three witness families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum WitnessSpec {
    /// `a = (2d0-1)/d0 + ε`, `q = 2`.
    A { d0: u64, epsilon: Rational, p: u64 },
    /// `a = (2d0-1)/d0`, `p = 4d0 - 3`, `q = 2`.
    B { d0: u64 },
    /// `a = (2d0-1)/d0`, `p > q > 3` coprime.
    C { d0: u64, p: u64, q: u64 },
}

/// Everything a witness family prescribes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessParams {
    pub a: Rational,
    pub p: u64,
    pub q: u64,
    pub d0: u64,
    pub x0: u64,
    pub y0: u64,
    pub target_index: u64,
    pub lattice_count: u64,
    /// Open interval for `pc` on which the witness is claimed.
    pub pc_interval: (Rational, Rational),
}

impl WitnessParams {
    /// `c` at the midpoint of the `pc` interval.
    pub fn default_c(&self) -> Rational {
        (&self.pc_interval.0 + &self.pc_interval.1) / Rational::from(2 * self.p)
    }
}

impl WitnessSpec {
    pub fn params(&self) -> Result<WitnessParams> {
        let bad = |msg: &str| Err(Error::InvalidParameters(format!("{self:?}: {msg}")));
        let d0 = match *self {
            WitnessSpec::A { d0, .. } | WitnessSpec::B { d0 } | WitnessSpec::C { d0, .. } => d0,
        };
        if d0 < 2 {
            return bad("d0 must be at least 2");
        }
        let base_a = Rational::new(2 * d0 as i64 - 1, d0 as i64);
        let (a, p, q, x0, y0, gap) = match self {
            WitnessSpec::A { epsilon, p, .. } => {
                if !epsilon.is_positive() {
                    return bad("epsilon must be positive");
                }
                if *p <= 2 || p % 2 == 0 {
                    return bad("p must be an odd integer greater than 2");
                }
                let gap = epsilon / &Rational::integer(2);
                (&base_a + epsilon, *p, 2, (p + 2) * d0 - 1, d0, gap)
            }
            WitnessSpec::B { .. } => {
                let p = 4 * d0 - 3;
                let gap = Rational::new(d0 as i64 - 1, (d0 * d0) as i64);
                (base_a, p, 2, (p + 2) * d0, d0 - 1, gap)
            }
            WitnessSpec::C { p, q, .. } => {
                if !(*p > *q && *q > 3) || p.gcd(q) != 1 {
                    return bad("need p > q > 3 coprime");
                }
                let y0 = u64::div_ceil(*q, 2) * d0;
                let gap = Rational::new(((q - 3) * (d0 - 1)) as i64, (2 * d0) as i64);
                (base_a, *p, *q, (p + q + 1) * d0 - 1 - y0, y0, gap)
            }
        };
        let target_index = p * q * d0 * d0 + (p + q + 1) * d0;
        let hi = a.scale(q as i64) + Rational::from(p);
        let lo = &hi - &gap;
        Ok(WitnessParams {
            a,
            p,
            q,
            d0,
            x0,
            y0,
            target_index,
            lattice_count: target_index / 2 + 1,
            pc_interval: (lo, hi),
        })
    }
}

/// A constructed witness and its verification against `e(p,q)^d0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub spec: WitnessSpec,
    pub params: WitnessParams,
    pub generator: ConvexGenerator,
    pub c: Rational,
    pub le_check: LeCheckResult,
}

impl Witness {
    /// The fixed-`c` criterion problem this witness answers.
    pub fn problem(&self) -> Result<EmbeddingProblem> {
        let p = &self.params;
        EmbeddingProblem::new(p.a.clone(), p.p, p.q, p.d0, CMode::Exact { c: self.c.clone() })
    }
}

/// Builds `Λ` for the family and checks `Λ ≤ e(p,q)^d0` from `P(a,1)` into
/// `E(pc/q, c)`, at the given `c` or the midpoint of the family's interval.
pub fn build_witness(spec: &WitnessSpec, c: Option<Rational>) -> Result<Witness> {
    let params = spec.params()?;
    let c = c.unwrap_or_else(|| params.default_c());
    if !c.is_positive() {
        return Err(Error::InvalidParameters("c must be positive".into()));
    }
    let generator = generator_with_count(params.x0, params.y0, params.lattice_count)?;
    let source = ToricDomain::polydisk(params.a.clone(), Rational::one())?;
    let target = ToricDomain::ellipsoid(&c * &Rational::new(params.p as i64, params.q as i64), c.clone())?;
    let minimal = ConvexGenerator::single(params.p, params.q, params.d0)?;
    let le_check = le_check(&generator, &minimal, &source, &target)?;
    Ok(Witness { spec: spec.clone(), params, generator, c, le_check })
}
