//! Convex generators: labelled convex lattice paths written as formal
//! products of `e(α,β)^m` and `h(α,β)` factors.
//!
//! A generator is stored as its geometric edges in canonical order (strictly
//! decreasing slope, so the horizontal direction comes first and the vertical
//! one last). Each geometric edge carries one primitive direction, a total
//! multiplicity and a label; an `h` label on an edge of multiplicity `m`
//! stands for the formal product `e(α,β)^(m-1) h(α,β)`.

mod closed_form;
mod decompose;
mod enumerate;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use closed_form::IndexFamily;
pub use decompose::decompositions;
pub use enumerate::{enumerate_generators, LabelMode};
pub(crate) use enumerate::{enumerate_with_limit, search_endpoint, EndpointSpec, NodeCounter};

/// A primitive edge direction: the edge displacement is `(run, -drop)` per
/// unit of multiplicity.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Direction {
    pub run: u64,
    pub drop: u64,
}

impl Direction {
    pub const HORIZONTAL: Direction = Direction { run: 1, drop: 0 };
    pub const VERTICAL: Direction = Direction { run: 0, drop: 1 };

    pub fn new(run: u64, drop: u64) -> Result<Self> {
        if run == 0 && drop == 0 {
            return Err(Error::InvalidGenerator("direction (0,0)".into()));
        }
        if run.gcd(&drop) != 1 {
            return Err(Error::InvalidGenerator(format!("direction ({run},{drop}) is not primitive")));
        }
        Ok(Direction { run, drop })
    }

    pub fn is_axis(&self) -> bool {
        self.run == 0 || self.drop == 0
    }

    /// Order by decreasing slope `-drop/run`: horizontal first, vertical last.
    pub fn slope_cmp(&self, other: &Direction) -> Ordering {
        (self.drop as u128 * other.run as u128).cmp(&(other.drop as u128 * self.run as u128))
    }
}

impl PartialOrd for Direction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Direction {
    fn cmp(&self, other: &Self) -> Ordering {
        self.slope_cmp(other)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    E,
    H,
}

/// One geometric edge of a generator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct EdgeFactor {
    pub direction: Direction,
    pub multiplicity: u64,
    pub label: Label,
}

impl EdgeFactor {
    pub fn elliptic(run: u64, drop: u64, multiplicity: u64) -> Result<Self> {
        Self::checked(Direction::new(run, drop)?, multiplicity, Label::E)
    }

    pub fn hyperbolic(run: u64, drop: u64, multiplicity: u64) -> Result<Self> {
        Self::checked(Direction::new(run, drop)?, multiplicity, Label::H)
    }

    fn checked(direction: Direction, multiplicity: u64, label: Label) -> Result<Self> {
        if multiplicity == 0 {
            return Err(Error::InvalidGenerator("zero multiplicity".into()));
        }
        if label == Label::H && direction.is_axis() {
            return Err(Error::InvalidGenerator(format!(
                "h label not allowed on axis direction ({},{})",
                direction.run, direction.drop
            )));
        }
        Ok(EdgeFactor { direction, multiplicity, label })
    }

    /// Exponent of the elliptic factor `e(α,β)` in the formal product.
    pub fn elliptic_multiplicity(&self) -> u64 {
        match self.label {
            Label::E => self.multiplicity,
            Label::H => self.multiplicity - 1,
        }
    }

    pub fn run(&self) -> u64 {
        self.direction.run * self.multiplicity
    }

    pub fn drop(&self) -> u64 {
        self.direction.drop * self.multiplicity
    }
}

/// Endpoint data and vertex trace of a generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathProfile {
    pub x: u64,
    pub y: u64,
    pub m: u64,
    pub h: u64,
    pub vertices: Vec<(u64, u64)>,
}

/// A canonical convex generator. Structural equality is generator equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ConvexGenerator {
    edges: Vec<EdgeFactor>,
}

impl ConvexGenerator {
    /// Builds the canonical generator for a formal product. Factors in the
    /// same direction merge; at most one `h` per direction is allowed.
    pub fn new<I: IntoIterator<Item = EdgeFactor>>(factors: I) -> Result<Self> {
        let mut merged: BTreeMap<Direction, (u64, Label)> = BTreeMap::new();
        for f in factors {
            let f = EdgeFactor::checked(f.direction, f.multiplicity, f.label)?;
            let entry = merged.entry(f.direction).or_insert((0, Label::E));
            if entry.1 == Label::H && f.label == Label::H {
                return Err(Error::InvalidGenerator(format!("repeated h({},{})", f.direction.run, f.direction.drop)));
            }
            entry.0 = entry
                .0
                .checked_add(f.multiplicity)
                .ok_or_else(|| Error::InvalidGenerator("multiplicity overflow".into()))?;
            entry.1 = entry.1.max(f.label);
        }
        if merged.is_empty() {
            return Err(Error::InvalidGenerator("empty generator".into()));
        }
        let edges = merged
            .into_iter()
            .map(|(direction, (multiplicity, label))| EdgeFactor { direction, multiplicity, label })
            .collect();
        Ok(ConvexGenerator { edges })
    }

    /// `e(run,drop)^multiplicity`
    pub fn single(run: u64, drop: u64, multiplicity: u64) -> Result<Self> {
        Self::new([EdgeFactor::elliptic(run, drop, multiplicity)?])
    }

    /// The generator `e(p,q)^d` for arbitrary nonnegative `(run, drop)`:
    /// the direction is reduced and the gcd folded into the multiplicity.
    pub fn segment(run: u64, drop: u64) -> Result<Self> {
        let g = run.gcd(&drop);
        if g == 0 {
            return Err(Error::InvalidGenerator("segment (0,0)".into()));
        }
        Self::single(run / g, drop / g, g)
    }

    /// Internal constructor for edge lists already known to be canonical.
    pub(crate) fn from_canonical_edges(edges: Vec<EdgeFactor>) -> Self {
        debug_assert!(!edges.is_empty());
        debug_assert!(edges.windows(2).all(|w| w[0].direction < w[1].direction));
        ConvexGenerator { edges }
    }

    pub fn edges(&self) -> &[EdgeFactor] {
        &self.edges
    }

    pub fn x(&self) -> u64 {
        self.edges.iter().map(EdgeFactor::run).sum()
    }

    pub fn y(&self) -> u64 {
        self.edges.iter().map(EdgeFactor::drop).sum()
    }

    /// Total multiplicity `m(Λ)`.
    pub fn total_multiplicity(&self) -> u64 {
        self.edges.iter().map(|e| e.multiplicity).sum()
    }

    /// Number of `h`-labelled edges `h(Λ)`.
    pub fn hyperbolic_count(&self) -> u64 {
        self.edges.iter().filter(|e| e.label == Label::H).count() as u64
    }

    pub fn is_elliptic(&self) -> bool {
        self.edges.iter().all(|e| e.label == Label::E)
    }

    /// Directions carrying an `e` factor in the formal product.
    pub fn elliptic_orbits(&self) -> impl Iterator<Item = Direction> + '_ {
        self.edges.iter().filter(|e| e.elliptic_multiplicity() > 0).map(|e| e.direction)
    }

    /// Directions carrying an `h` factor.
    pub fn hyperbolic_orbits(&self) -> impl Iterator<Item = Direction> + '_ {
        self.edges.iter().filter(|e| e.label == Label::H).map(|e| e.direction)
    }

    pub fn shares_elliptic_orbit(&self, other: &ConvexGenerator) -> bool {
        self.elliptic_orbits().any(|d| other.elliptic_orbits().any(|o| o == d))
    }

    pub fn shares_hyperbolic_orbit(&self, other: &ConvexGenerator) -> Option<Direction> {
        self.hyperbolic_orbits().find(|d| other.hyperbolic_orbits().any(|o| o == *d))
    }

    /// Whether the formal product contains the factor `e(1,0)`.
    pub fn has_horizontal_elliptic(&self) -> bool {
        self.elliptic_orbits().any(|d| d == Direction::HORIZONTAL)
    }

    /// Path vertices from `(0, y)` to `(x, 0)`.
    pub fn vertices(&self) -> Vec<(u64, u64)> {
        let mut pos = (0, self.y());
        let mut out = Vec::with_capacity(self.edges.len() + 1);
        out.push(pos);
        for e in &self.edges {
            pos = (pos.0 + e.run(), pos.1 - e.drop());
            out.push(pos);
        }
        out
    }

    pub fn profile(&self) -> PathProfile {
        PathProfile {
            x: self.x(),
            y: self.y(),
            m: self.total_multiplicity(),
            h: self.hyperbolic_count(),
            vertices: self.vertices(),
        }
    }

    /// Largest `x` of a lattice point on or under the path in each row
    /// `k = 0..=y`.
    pub fn row_maxima(&self) -> Vec<u64> {
        let y = self.y();
        let mut rows = vec![0u64; y as usize + 1];
        let mut start = (0u64, y);
        for e in &self.edges {
            let end = (start.0 + e.run(), start.1 - e.drop());
            if e.drop() == 0 {
                rows[start.1 as usize] = end.0;
            } else {
                // rows strictly inside the edge plus its lower endpoint
                for k in end.1..start.1 {
                    let num = (start.1 - k) as u128 * (end.0 - start.0) as u128;
                    let xk = start.0 + (num / (start.1 - end.1) as u128) as u64;
                    rows[k as usize] = rows[k as usize].max(xk);
                }
                rows[start.1 as usize] = rows[start.1 as usize].max(start.0);
            }
            start = end;
        }
        rows
    }

    /// `L(Λ)`: lattice points in the closed region bounded by the path and
    /// the axes, by direct row scan.
    pub fn lattice_count(&self) -> u64 {
        self.row_maxima().iter().map(|&x| x + 1).sum()
    }

    /// `I(Λ) = 2(L(Λ) - 1) - h(Λ)`.
    pub fn ech_index(&self) -> u64 {
        2 * (self.lattice_count() - 1) - self.hyperbolic_count()
    }

    /// Concatenation of formal products. Fails on a shared `h` factor.
    pub fn product(&self, other: &ConvexGenerator) -> Result<ConvexGenerator> {
        if let Some(d) = self.shares_hyperbolic_orbit(other) {
            return Err(Error::SharedHyperbolic(d.run, d.drop));
        }
        ConvexGenerator::new(self.edges.iter().chain(other.edges.iter()).copied())
    }

    /// Product of a nonempty list of generators.
    pub fn product_all<'a, I>(parts: I) -> Result<ConvexGenerator>
    where
        I: IntoIterator<Item = &'a ConvexGenerator>,
    {
        let mut it = parts.into_iter();
        let first = it.next().ok_or_else(|| Error::InvalidGenerator("empty product".into()))?.clone();
        it.try_fold(first, |acc, g| acc.product(g))
    }
}

impl fmt::Display for ConvexGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for e in &self.edges {
            let (a, b) = (e.direction.run, e.direction.drop);
            let em = e.elliptic_multiplicity();
            match em {
                0 => {}
                1 => terms.push(format!("e({a},{b})")),
                _ => terms.push(format!("e({a},{b})^{em}")),
            }
            if e.label == Label::H {
                terms.push(format!("h({a},{b})"));
            }
        }
        f.write_str(&terms.join(" "))
    }
}

impl fmt::Debug for ConvexGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConvexGenerator({self})")
    }
}

impl FromStr for ConvexGenerator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_generator(s)
    }
}

impl Serialize for ConvexGenerator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ConvexGenerator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses whitespace-separated terms `e(α,β)^m` / `h(α,β)`; whitespace inside
/// a term is tolerated.
pub fn parse_generator(text: &str) -> Result<ConvexGenerator> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let mut factors = Vec::new();

    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
    };
    let expect = |pos: &mut usize, c: char| -> Result<()> {
        skip_ws(pos);
        if *pos < chars.len() && chars[*pos] == c {
            *pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected '{c}' at offset {}", *pos)))
        }
    };
    let number = |pos: &mut usize| -> Result<u64> {
        skip_ws(pos);
        let start = *pos;
        while *pos < chars.len() && chars[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if start == *pos {
            return Err(Error::Parse(format!("expected integer at offset {start}")));
        }
        chars[start..*pos].iter().collect::<String>().parse().map_err(|_| Error::Parse("integer out of range".into()))
    };

    loop {
        skip_ws(&mut pos);
        if pos == chars.len() {
            break;
        }
        let label = match chars[pos] {
            'e' => Label::E,
            'h' => Label::H,
            c => return Err(Error::Parse(format!("unexpected '{c}' at offset {pos}"))),
        };
        pos += 1;
        expect(&mut pos, '(')?;
        let a = number(&mut pos)?;
        expect(&mut pos, ',')?;
        let b = number(&mut pos)?;
        expect(&mut pos, ')')?;
        skip_ws(&mut pos);
        let exp = if pos < chars.len() && chars[pos] == '^' {
            pos += 1;
            number(&mut pos)?
        } else {
            1
        };
        let factor = match label {
            Label::E => EdgeFactor::elliptic(a, b, exp)?,
            Label::H if exp > 1 => return Err(Error::InvalidGenerator(format!("repeated h({a},{b})"))),
            Label::H => EdgeFactor::hyperbolic(a, b, exp)?,
        };
        factors.push(factor);
    }
    ConvexGenerator::new(factors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> ConvexGenerator {
        s.parse().unwrap()
    }

    #[test]
    fn parse_examples() {
        let single = g("e(5,2)^3");
        assert_eq!(single.edges().len(), 1);
        assert_eq!(single.edges()[0].multiplicity, 3);

        let sorted = g("e(0,1) e(3,1) e(1,0)^2");
        let dirs: Vec<_> = sorted.edges().iter().map(|e| (e.direction.run, e.direction.drop)).collect();
        assert_eq!(dirs, vec![(1, 0), (3, 1), (0, 1)]);
        assert_eq!(sorted.to_string(), "e(1,0)^2 e(3,1) e(0,1)");

        assert!(matches!("h(1,0)".parse::<ConvexGenerator>(), Err(Error::InvalidGenerator(_))));
        assert!("h(0,1)".parse::<ConvexGenerator>().is_err());
        assert!("h(2,1) h(2,1)".parse::<ConvexGenerator>().is_err());
        assert!("h(2,1)^2".parse::<ConvexGenerator>().is_err());
        assert!("e(2,1)^0".parse::<ConvexGenerator>().is_err());
        assert!("e(4,2)".parse::<ConvexGenerator>().is_err());
        assert!("e(0,0)".parse::<ConvexGenerator>().is_err());
        assert!("".parse::<ConvexGenerator>().is_err());
        assert!(matches!("e(1,0) x(1,1)".parse::<ConvexGenerator>(), Err(Error::Parse(_))));
        assert!("e(1,0".parse::<ConvexGenerator>().is_err());
    }

    #[test]
    fn e_and_h_in_one_direction_merge() {
        let merged = g("e(1,1)^2 h(1,1)");
        assert_eq!(merged.edges().len(), 1);
        assert_eq!(merged.edges()[0].multiplicity, 3);
        assert_eq!(merged.edges()[0].label, Label::H);
        assert_eq!(merged.to_string(), "e(1,1)^2 h(1,1)");
        assert_eq!(g("h(1,1) e(1,1)").to_string(), "e(1,1) h(1,1)");
    }

    #[test]
    fn profile_examples() {
        let p = g("e(1,0)^2 e(3,1) e(0,1)").profile();
        assert_eq!((p.x, p.y, p.m, p.h), (5, 2, 4, 0));
        assert_eq!(p.vertices, vec![(0, 2), (2, 2), (5, 1), (5, 0)]);

        let p = g("e(5,2)^3").profile();
        assert_eq!((p.x, p.y, p.m), (15, 6, 3));

        let p = g("e(2,1) h(1,1)").profile();
        assert_eq!((p.x, p.y, p.h), (3, 2, 1));
    }

    #[test]
    fn lattice_count_examples() {
        assert_eq!(g("e(1,0)^2 e(0,1)^3").lattice_count(), 12);
        assert_eq!(g("e(1,1)").lattice_count(), 3);
        assert_eq!(g("e(5,2)").lattice_count(), 10);
        assert_eq!(g("e(0,1)^4").lattice_count(), 5);
        assert_eq!(g("e(1,0)^4").lattice_count(), 5);
    }

    #[test]
    fn index_examples() {
        assert_eq!(g("e(1,1)").ech_index(), 4);
        assert_eq!(g("h(1,1)").ech_index(), 3);
        assert_eq!(g("e(3,2)").ech_index(), 12);
        assert_eq!(g("e(5,2)^2").ech_index(), 56);
    }

    #[test]
    fn product_examples() {
        let p = g("e(1,0)^2").product(&g("e(1,0)^3 e(0,1)")).unwrap();
        assert_eq!(p, g("e(1,0)^5 e(0,1)"));

        assert_eq!(g("h(2,1)").product(&g("h(2,1)")), Err(Error::SharedHyperbolic(2, 1)));

        let p = g("e(1,0)^9").product(&g("e(1,0)^9")).unwrap();
        assert_eq!(p, g("e(1,0)^18"));
        assert_eq!(p.ech_index(), 36);

        // e and h in one direction combine into one h edge
        let p = g("h(2,1)").product(&g("e(2,1)")).unwrap();
        assert_eq!(p.to_string(), "e(2,1) h(2,1)");
        assert_eq!(p.hyperbolic_count(), 1);
    }

    #[test]
    fn orbit_sets() {
        let a = g("e(1,0) h(2,1)");
        let b = g("e(2,1) h(3,1)");
        assert!(!a.shares_elliptic_orbit(&b));
        assert!(a.shares_elliptic_orbit(&g("e(1,0)^4")));
        assert!(g("e(2,1) h(2,1)").shares_elliptic_orbit(&b));
        assert!(a.has_horizontal_elliptic());
        assert!(!b.has_horizontal_elliptic());
    }

    #[test]
    fn row_maxima_trace() {
        assert_eq!(g("e(1,0)^2 e(3,1) e(0,1)").row_maxima(), vec![5, 5, 2]);
        assert_eq!(g("e(1,0) e(2,1)^2").row_maxima(), vec![5, 3, 1]);
    }
}
