//! Four-dimensional toric domains and the symplectic action of generators.
//!
//! Every domain is handled through its moment polygon `Ω`. The action of a
//! generator is the sum over its edges of `ν × p`, where `p` is a point of
//! `Ω` maximizing the support functional normal to the edge. Because `Ω` is a
//! polygon, that maximum is always attained at one of its vertices.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::generators::{enumerate_generators, ConvexGenerator, Direction, LabelMode};
use crate::rational::Rational;

pub type Point = (Rational, Rational);

/// A piecewise-linear concave path from the y-axis to the x-axis with
/// non-positive slopes, given by its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexPath {
    vertices: Vec<Point>,
}

impl ConvexPath {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let bad = |msg: &str| Err(Error::InvalidPath(msg.into()));
        if vertices.len() < 2 {
            return bad("need at least two vertices");
        }
        if !vertices[0].0.is_zero() {
            return bad("first vertex must lie on the y-axis");
        }
        if !vertices[vertices.len() - 1].1.is_zero() {
            return bad("last vertex must lie on the x-axis");
        }
        if vertices.iter().any(|(x, y)| x.is_negative() || y.is_negative()) {
            return bad("vertices must lie in the first quadrant");
        }
        for w in vertices.windows(2) {
            if w[1].0 < w[0].0 || w[1].1 > w[0].1 {
                return bad("path must move right and down");
            }
            if w[0] == w[1] {
                return bad("repeated vertex");
            }
        }
        for w in vertices.windows(3) {
            let (dx1, dy1) = (&w[1].0 - &w[0].0, &w[1].1 - &w[0].1);
            let (dx2, dy2) = (&w[2].0 - &w[1].0, &w[2].1 - &w[1].1);
            if (dx1 * dy2 - dy1 * dx2).is_positive() {
                return bad("path is not concave");
            }
        }
        Ok(ConvexPath { vertices })
    }

    /// The path traced by an integral generator.
    pub fn from_generator(g: &ConvexGenerator) -> Self {
        let vertices = g.vertices().into_iter().map(|(x, y)| (Rational::from(x), Rational::from(y))).collect();
        ConvexPath { vertices }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn x_intercept(&self) -> &Rational {
        &self.vertices[self.vertices.len() - 1].0
    }

    pub fn y_intercept(&self) -> &Rational {
        &self.vertices[0].1
    }

    /// Area between the path and the axes.
    pub fn area(&self) -> Rational {
        self.vertices.windows(2).map(|w| (&w[1].0 - &w[0].0) * (&w[0].1 + &w[1].1) / Rational::integer(2)).sum()
    }

    /// Largest `x` with `(x, height)` on or under the path, or `None` above it.
    pub fn x_at_height(&self, height: &Rational) -> Option<Rational> {
        if height > self.y_intercept() || height.is_negative() {
            return None;
        }
        // rightmost point at this height lies on the last segment reaching it
        let mut best = None;
        for w in self.vertices.windows(2) {
            let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
            if y1 <= height && height <= y0 {
                let x = if y0 == y1 { x1.clone() } else { x0 + &((y0 - height) * (x1 - x0) / (y0 - y1)) };
                best = Some(x);
            }
        }
        best
    }
}

impl fmt::Display for ConvexPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self.vertices.iter().map(|(x, y)| format!("({x},{y})")).collect();
        write!(f, "[{}]", pts.join(","))
    }
}

/// Polydisk, ellipsoid or general convex toric domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ToricDomain {
    Polydisk { a: Rational, b: Rational },
    Ellipsoid { a: Rational, b: Rational },
    ConvexPl(ConvexPath),
}

impl ToricDomain {
    pub fn polydisk(a: Rational, b: Rational) -> Result<Self> {
        Self::check_sides(&a, &b)?;
        Ok(ToricDomain::Polydisk { a, b })
    }

    pub fn ellipsoid(a: Rational, b: Rational) -> Result<Self> {
        Self::check_sides(&a, &b)?;
        Ok(ToricDomain::Ellipsoid { a, b })
    }

    pub fn convex_pl(boundary: ConvexPath) -> Result<Self> {
        if !boundary.x_intercept().is_positive() || !boundary.y_intercept().is_positive() {
            return Err(Error::InvalidDomain("axis intercepts must be positive".into()));
        }
        Ok(ToricDomain::ConvexPl(boundary))
    }

    fn check_sides(a: &Rational, b: &Rational) -> Result<()> {
        if a.is_positive() && b.is_positive() {
            Ok(())
        } else {
            Err(Error::InvalidDomain(format!("side lengths must be positive, got {a} and {b}")))
        }
    }

    /// Vertices of the moment polygon, origin first.
    pub fn polygon(&self) -> Vec<Point> {
        let zero = Rational::zero;
        match self {
            ToricDomain::Polydisk { a, b } => {
                vec![(zero(), zero()), (a.clone(), zero()), (a.clone(), b.clone()), (zero(), b.clone())]
            }
            ToricDomain::Ellipsoid { a, b } => {
                vec![(zero(), zero()), (a.clone(), zero()), (zero(), b.clone())]
            }
            ToricDomain::ConvexPl(path) => {
                let mut v = vec![(zero(), zero())];
                v.extend(path.vertices().iter().cloned());
                v
            }
        }
    }

    pub fn x_intercept(&self) -> Rational {
        match self {
            ToricDomain::Polydisk { a, .. } | ToricDomain::Ellipsoid { a, .. } => a.clone(),
            ToricDomain::ConvexPl(p) => p.x_intercept().clone(),
        }
    }

    pub fn y_intercept(&self) -> Rational {
        match self {
            ToricDomain::Polydisk { b, .. } | ToricDomain::Ellipsoid { b, .. } => b.clone(),
            ToricDomain::ConvexPl(p) => p.y_intercept().clone(),
        }
    }

    /// A point of `Ω` maximizing `drop·x + run·y`, smallest `x` (then `y`)
    /// among ties.
    pub fn support_point(&self, direction: Direction) -> Point {
        let (run, drop) = (Rational::from(direction.run), Rational::from(direction.drop));
        let mut best: Option<(Rational, Point)> = None;
        for p in self.polygon() {
            let value = &drop * &p.0 + &run * &p.1;
            let better = match &best {
                None => true,
                Some((bv, bp)) => value > *bv || (value == *bv && (&p.0, &p.1) < (&bp.0, &bp.1)),
            };
            if better {
                best = Some((value, p));
            }
        }
        best.expect("polygon is nonempty").1
    }

    /// `A_Ω(Λ) = Σ ν × p_ν`.
    pub fn action(&self, g: &ConvexGenerator) -> Rational {
        g.edges()
            .iter()
            .map(|e| {
                let (px, py) = self.support_point(e.direction);
                // (m·run, -m·drop) × (px, py)
                let run = Rational::from(e.run());
                let drop = Rational::from(e.drop());
                run * py + drop * px
            })
            .sum()
    }

    /// Euclidean area of `Ω`.
    pub fn volume(&self) -> Rational {
        match self {
            ToricDomain::Polydisk { a, b } => a * b,
            ToricDomain::Ellipsoid { a, b } => a * b / Rational::integer(2),
            ToricDomain::ConvexPl(p) => p.area(),
        }
    }

    /// Whether `g` is the unique purely elliptic generator of its index with
    /// least action.
    pub fn is_minimal(&self, g: &ConvexGenerator) -> Result<bool> {
        if !g.is_elliptic() {
            return Err(Error::InvalidParameters("minimality is defined for elliptic generators".into()));
        }
        let bound = self.action(g);
        let rivals = enumerate_generators(g.ech_index(), &bound, self, LabelMode::EllipticOnly)?;
        Ok(rivals.len() == 1 && rivals[0] == *g)
    }

    /// Integer rescaling of the polygon so enumeration can work in `i128`.
    /// `extra` lists further rationals (action bounds) that must scale to
    /// integers too.
    pub(crate) fn scaled_support(&self, extra: &Rational) -> Result<ScaledSupport> {
        let polygon = self.polygon();
        let mut scale = extra.denom().clone();
        for (x, y) in &polygon {
            scale = scale.lcm(x.denom()).lcm(y.denom());
        }
        let conv = |r: &Rational| {
            r.scaled_i128(&scale).ok_or_else(|| Error::Unbounded("domain coordinates too large for enumeration".into()))
        };
        let mut points = Vec::with_capacity(polygon.len());
        for (x, y) in &polygon {
            points.push((conv(x)?, conv(y)?));
        }
        let x_intercept = conv(&self.x_intercept())?;
        let y_intercept = conv(&self.y_intercept())?;
        if x_intercept <= 0 || y_intercept <= 0 {
            return Err(Error::Unbounded("domain has a zero axis intercept".into()));
        }
        Ok(ScaledSupport { scale, points, x_intercept, y_intercept })
    }
}

/// The polygon's vertices scaled by a common denominator.
pub(crate) struct ScaledSupport {
    scale: BigInt,
    points: Vec<(i128, i128)>,
    x_intercept: i128,
    y_intercept: i128,
}

impl ScaledSupport {
    /// Scaled action of one unit of an edge in direction `d`.
    pub fn unit_action(&self, d: Direction) -> i128 {
        self.points.iter().map(|&(x, y)| d.drop as i128 * x + d.run as i128 * y).max().unwrap_or(0)
    }

    pub fn x_intercept(&self) -> i128 {
        self.x_intercept
    }

    pub fn y_intercept(&self) -> i128 {
        self.y_intercept
    }

    /// Largest scaled action `s` with `s / scale <= bound`.
    pub fn budget_at_most(&self, bound: &Rational) -> Result<i128> {
        let scaled = bound * &Rational::from(self.scale.clone());
        scaled.floor().to_i128().ok_or_else(|| Error::Unbounded("action bound too large".into()))
    }

    #[allow(dead_code)]
    pub fn is_unit_scale(&self) -> bool {
        self.scale.is_one()
    }
}

/// `P(a,1)` sits inside `E(bc,c)` exactly when `a + b <= bc`.
pub fn trivial_inclusion(a: &Rational, b: &Rational, c: &Rational) -> bool {
    a + b <= b * c
}

impl fmt::Display for ToricDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ToricDomain::Polydisk { a, b } => write!(f, "P({a},{b})"),
            ToricDomain::Ellipsoid { a, b } => write!(f, "E({a},{b})"),
            ToricDomain::ConvexPl(p) => write!(f, "PL{p}"),
        }
    }
}

/// `P(a,b)`, `E(a,b)` or `PL[(x0,y0),(x1,y1),...]` with rational entries.
impl FromStr for ToricDomain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("not a domain: {s:?}"));
        let pair = |body: &str| -> Result<(Rational, Rational)> {
            let (a, b) = body.split_once(',').ok_or_else(bad)?;
            Ok((a.parse()?, b.parse()?))
        };
        if let Some(rest) = compact.strip_prefix("PL[") {
            let body = rest.strip_suffix(']').ok_or_else(bad)?;
            let body = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')).ok_or_else(bad)?;
            let vertices = body.split("),(").map(pair).collect::<Result<Vec<_>>>()?;
            return ToricDomain::convex_pl(ConvexPath::new(vertices)?);
        }
        let (kind, rest) = compact.split_at(compact.find('(').ok_or_else(bad)?);
        let body = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let (a, b) = pair(body)?;
        match kind {
            "P" => ToricDomain::polydisk(a, b),
            "E" => ToricDomain::ellipsoid(a, b),
            _ => Err(bad()),
        }
    }
}

impl Serialize for ToricDomain {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ToricDomain {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
