//! The `≤` relation between generators and the Hutchings criterion for
//! embeddings `P(a,1) → E(pc/q, c)` tested against `e(p,q)^d0`.

mod search;

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

pub use search::{
    candidates, criterion_search, obstruct, CandidateCount, ObstructionReport, Outcome, SearchConfig, SearchResult,
    SearchStats, DEFAULT_NODE_LIMIT,
};

use crate::domains::ToricDomain;
use crate::error::{Error, Result};
use crate::generators::ConvexGenerator;
use crate::rational::Rational;

/// How the target ellipsoid enters the action inequality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CMode {
    /// A fixed `c`: `A(Λᵢ) <= pc·dᵢ`.
    Exact { c: Rational },
    /// Every `c` with `pc < qa + p` at once: `A(Λᵢ) < (qa + p)·dᵢ`.
    SupremumStrict,
}

/// `P(a,1) → E(pc/q, c)`, tested against the generator `e(p,q)^d0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingProblem {
    pub a: Rational,
    pub p: u64,
    pub q: u64,
    pub d0: u64,
    pub mode: CMode,
}

impl EmbeddingProblem {
    pub fn new(a: Rational, p: u64, q: u64, d0: u64, mode: CMode) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidParameters(msg));
        if a < 1 {
            return bad(format!("a must be at least 1, got {a}"));
        }
        if p == 0 || q == 0 || p.gcd(&q) != 1 {
            return bad(format!("p and q must be coprime positive integers, got {p} and {q}"));
        }
        if d0 == 0 {
            return bad("d0 must be at least 1".into());
        }
        if let CMode::Exact { c } = &mode {
            if !c.is_positive() {
                return bad(format!("c must be positive, got {c}"));
            }
        }
        Ok(EmbeddingProblem { a, p, q, d0, mode })
    }

    /// `q = 2`, every `c` below the trivial-inclusion threshold.
    pub fn supremum(a: Rational, p: u64, d0: u64) -> Result<Self> {
        Self::new(a, p, 2, d0, CMode::SupremumStrict)
    }

    /// `q = 2` at a fixed `c`.
    pub fn exact(a: Rational, p: u64, d0: u64, c: Rational) -> Result<Self> {
        Self::new(a, p, 2, d0, CMode::Exact { c })
    }

    pub fn source(&self) -> ToricDomain {
        ToricDomain::Polydisk { a: self.a.clone(), b: Rational::one() }
    }

    /// `E(pc/q, c)`, when `c` is fixed.
    pub fn target(&self) -> Option<ToricDomain> {
        match &self.mode {
            CMode::Exact { c } => {
                Some(ToricDomain::Ellipsoid { a: c * &Rational::new(self.p as i64, self.q as i64), b: c.clone() })
            }
            CMode::SupremumStrict => None,
        }
    }

    /// `e(p,q)^d`.
    pub fn minimal(&self, d: u64) -> ConvexGenerator {
        ConvexGenerator::single(self.p, self.q, d).expect("p, q coprime and d >= 1")
    }

    /// `I(e(p,q)^d) = pqd² + (p+q+1)d`.
    pub fn target_index(&self, d: u64) -> u64 {
        self.p * self.q * d * d + (self.p + self.q + 1) * d
    }

    /// `(qa + p) / p`: the least `c` with `P(a,1) ⊂ E(pc/q, c)`.
    pub fn trivial_bound(&self) -> Rational {
        (self.a.scale(self.q as i64) + Rational::from(self.p)) / Rational::from(self.p)
    }

    /// Whether `pc < qa + p`, the regime of nontrivial embeddings.
    pub fn in_regime(&self) -> bool {
        match &self.mode {
            CMode::Exact { c } => *c < self.trivial_bound(),
            CMode::SupremumStrict => true,
        }
    }

    /// Action bound for a part matched with `e(p,q)^d`.
    pub fn threshold(&self, d: u64) -> Threshold {
        match &self.mode {
            CMode::Exact { c } => Threshold::AtMost(c.scale((self.p * d) as i64)),
            CMode::SupremumStrict => {
                Threshold::Below((self.a.scale(self.q as i64) + Rational::from(self.p)).scale(d as i64))
            }
        }
    }
}

/// Upper bound on the source action.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Threshold {
    AtMost(Rational),
    Below(Rational),
}

impl Threshold {
    pub fn admits(&self, action: &Rational) -> bool {
        match self {
            Threshold::AtMost(t) => action <= t,
            Threshold::Below(t) => action < t,
        }
    }

    pub fn value(&self) -> &Rational {
        match self {
            Threshold::AtMost(t) | Threshold::Below(t) => t,
        }
    }

    pub fn is_strict(&self) -> bool {
        matches!(self, Threshold::Below(_))
    }

    /// Largest integer `x` with `x + offset` admitted, if any.
    pub(crate) fn max_integer(&self, offset: &Rational) -> Option<u64> {
        let room = self.value() - offset;
        let x = match self {
            Threshold::AtMost(_) => room.floor(),
            Threshold::Below(_) => room.ceil() - 1,
        };
        x.to_u64()
    }
}

/// The three conditions of `Λ ≤ Λ'`, with both sides of each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeCheckResult {
    pub index_lhs: u64,
    pub index_rhs: u64,
    pub index_ok: bool,
    pub action_lhs: Rational,
    pub action_rhs: Rational,
    pub action_strict: bool,
    pub action_ok: bool,
    /// `x + y - h/2`
    pub genus_lhs: Rational,
    /// `x' + y' + m' - 1`
    pub genus_rhs: Rational,
    pub genus_ok: bool,
}

impl LeCheckResult {
    pub fn passes(&self) -> bool {
        self.index_ok && self.action_ok && self.genus_ok
    }
}

/// `Λ ≤ Λ'` for `source → target`: equal index, `A_source(Λ) <= A_target(Λ')`,
/// and `x + y - h/2 >= x' + y' + m' - 1`.
pub fn le_check(
    g: &ConvexGenerator,
    gp: &ConvexGenerator,
    source: &ToricDomain,
    target: &ToricDomain,
) -> Result<LeCheckResult> {
    le_check_with(g, gp, source, &Threshold::AtMost(target.action(gp)))
}

/// [`le_check`] with the target action replaced by an explicit bound.
pub fn le_check_with(
    g: &ConvexGenerator,
    gp: &ConvexGenerator,
    source: &ToricDomain,
    threshold: &Threshold,
) -> Result<LeCheckResult> {
    if !gp.is_elliptic() {
        return Err(Error::InvalidGenerator(format!("{gp} is not purely elliptic")));
    }
    let (index_lhs, index_rhs) = (g.ech_index(), gp.ech_index());
    let action_lhs = source.action(g);
    let action_ok = threshold.admits(&action_lhs);
    let genus_lhs = Rational::from(g.x() + g.y()) - Rational::new(g.hyperbolic_count() as i64, 2);
    let genus_rhs = Rational::from(gp.x() + gp.y() + gp.total_multiplicity() - 1);
    Ok(LeCheckResult {
        index_lhs,
        index_rhs,
        index_ok: index_lhs == index_rhs,
        action_lhs,
        action_rhs: threshold.value().clone(),
        action_strict: threshold.is_strict(),
        action_ok,
        genus_ok: genus_lhs >= genus_rhs,
        genus_lhs,
        genus_rhs,
    })
}

/// `Λ = Λ₁⋯Λₙ` matched with `e(p,q)^d0 = ∏ e(p,q)^dᵢ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factorization {
    pub n: usize,
    pub lambda_parts: Vec<ConvexGenerator>,
    pub dprime_parts: Vec<u64>,
}

impl Factorization {
    pub fn new(lambda_parts: Vec<ConvexGenerator>, dprime_parts: Vec<u64>) -> Result<Self> {
        if lambda_parts.is_empty() || lambda_parts.len() != dprime_parts.len() {
            return Err(Error::InvalidParameters("parts must be nonempty and of equal length".into()));
        }
        if dprime_parts.contains(&0) {
            return Err(Error::InvalidParameters("every d_i must be positive".into()));
        }
        Ok(Factorization { n: lambda_parts.len(), lambda_parts, dprime_parts })
    }

    /// The single-part factorization `(Λ, d0)`.
    pub fn trivial(lambda: ConvexGenerator, d0: u64) -> Self {
        Factorization { n: 1, lambda_parts: vec![lambda], dprime_parts: vec![d0] }
    }

    pub fn product(&self) -> Result<ConvexGenerator> {
        ConvexGenerator::product_all(&self.lambda_parts)
    }
}

/// Per-condition outcome of [`factorization_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationCheck {
    pub le: Vec<LeCheckResult>,
    /// Pairs `(i, j)` that must not but do share an elliptic orbit.
    pub orbit_conflicts: Vec<(usize, usize)>,
    /// Subsets (as part indices) whose product is ill-formed or has the
    /// wrong index.
    pub failed_subsets: Vec<Vec<usize>>,
}

impl FactorizationCheck {
    pub fn le_ok(&self) -> bool {
        self.le.iter().all(LeCheckResult::passes)
    }

    pub fn orbits_ok(&self) -> bool {
        self.orbit_conflicts.is_empty()
    }

    pub fn subsets_ok(&self) -> bool {
        self.failed_subsets.is_empty()
    }

    pub fn passes(&self) -> bool {
        self.le_ok() && self.orbits_ok() && self.subsets_ok()
    }
}

/// Whether parts `i` and `j` may coexist: equal parts with equal `d` may
/// share orbits, anything else may not share an elliptic orbit.
pub(crate) fn orbit_conflict(gi: &ConvexGenerator, di: u64, gj: &ConvexGenerator, dj: u64) -> bool {
    (gi != gj || di != dj) && gi.shares_elliptic_orbit(gj)
}

/// Index of the product over `subset`, or `None` if the product is ill-formed.
pub(crate) fn subset_index(parts: &[ConvexGenerator], subset: &[usize]) -> Option<u64> {
    ConvexGenerator::product_all(subset.iter().map(|&i| &parts[i])).ok().map(|g| g.ech_index())
}

/// Checks conditions (i)–(iii) of the criterion for one factorization.
pub fn factorization_check(fact: &Factorization, prob: &EmbeddingProblem) -> Result<FactorizationCheck> {
    if fact.n != fact.lambda_parts.len() || fact.n != fact.dprime_parts.len() {
        return Err(Error::InvalidParameters("factorization length mismatch".into()));
    }
    if fact.dprime_parts.iter().sum::<u64>() != prob.d0 {
        return Err(Error::InvalidParameters(format!("the d_i must sum to d0 = {}", prob.d0)));
    }
    let source = prob.source();
    let le = fact
        .lambda_parts
        .iter()
        .zip(&fact.dprime_parts)
        .map(|(g, &d)| le_check_with(g, &prob.minimal(d), &source, &prob.threshold(d)))
        .collect::<Result<Vec<_>>>()?;

    let mut orbit_conflicts = Vec::new();
    for i in 0..fact.n {
        for j in i + 1..fact.n {
            let (gi, gj) = (&fact.lambda_parts[i], &fact.lambda_parts[j]);
            if orbit_conflict(gi, fact.dprime_parts[i], gj, fact.dprime_parts[j]) {
                orbit_conflicts.push((i, j));
            }
        }
    }

    let mut failed_subsets = Vec::new();
    for mask in 1u64..(1 << fact.n) {
        let subset: Vec<usize> = (0..fact.n).filter(|i| mask >> i & 1 == 1).collect();
        let d: u64 = subset.iter().map(|&i| fact.dprime_parts[i]).sum();
        if subset_index(&fact.lambda_parts, &subset) != Some(prob.target_index(d)) {
            failed_subsets.push(subset);
        }
    }
    Ok(FactorizationCheck { le, orbit_conflicts, failed_subsets })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn g(s: &str) -> ConvexGenerator {
        s.parse().unwrap()
    }

    fn ellipsoid(p: i64, q: i64, c: Rational) -> ToricDomain {
        ToricDomain::ellipsoid(&c * &r(p, q), c).unwrap()
    }

    #[test]
    fn le_check_examples() {
        let e = ellipsoid(5, 2, r(1, 1));
        let one = le_check(&g("e(5,2)"), &g("e(5,2)"), &e, &e).unwrap();
        assert!(one.passes());
        assert_eq!((one.genus_lhs.clone(), one.genus_rhs.clone()), (r(7, 1), r(7, 1)));

        let two = le_check(&g("e(5,2)^2"), &g("e(5,2)^2"), &e, &e).unwrap();
        assert!(two.index_ok && two.action_ok);
        assert!(!two.genus_ok);
        assert_eq!((two.genus_lhs, two.genus_rhs), (r(14, 1), r(15, 1)));

        assert!(le_check(&g("e(5,2)"), &g("h(5,2)"), &e, &e).is_err());
    }

    #[test]
    fn le_check_half_integer_genus() {
        let p = ToricDomain::polydisk(r(1, 1), r(1, 1)).unwrap();
        let res = le_check(&g("h(1,1)"), &g("e(1,0)"), &p, &p).unwrap();
        assert_eq!(res.genus_lhs, r(3, 2));
        assert_eq!(res.genus_rhs, r(1, 1));
    }

    #[test]
    fn problem_basics() {
        let prob = EmbeddingProblem::supremum(r(4, 3), 3, 3).unwrap();
        assert_eq!(prob.trivial_bound(), r(17, 9));
        assert_eq!(prob.target_index(3), 6 * 9 + 6 * 3);
        assert_eq!(prob.threshold(1), Threshold::Below(r(17, 3)));
        assert!(EmbeddingProblem::supremum(r(1, 2), 3, 3).is_err());
        assert!(EmbeddingProblem::supremum(r(1, 1), 4, 3).is_err());
        assert!(EmbeddingProblem::exact(r(1, 1), 3, 1, r(0, 1)).is_err());
        let exact = EmbeddingProblem::exact(r(4, 3), 3, 1, r(17, 9)).unwrap();
        assert!(!exact.in_regime());
        assert_eq!(exact.target().unwrap().action(&exact.minimal(1)), r(17, 3));
    }

    #[test]
    fn threshold_integer_room() {
        assert_eq!(Threshold::AtMost(r(5, 1)).max_integer(&r(0, 1)), Some(5));
        assert_eq!(Threshold::Below(r(5, 1)).max_integer(&r(0, 1)), Some(4));
        assert_eq!(Threshold::Below(r(11, 2)).max_integer(&r(1, 2)), Some(4));
        assert_eq!(Threshold::Below(r(1, 2)).max_integer(&r(1, 2)), None);
    }

    #[test]
    fn full_factorization_fixtures() {
        let prob = EmbeddingProblem::supremum(r(3, 2), 5, 2).unwrap();
        let same = Factorization::new(vec![g("e(1,0)^9"), g("e(1,0)^9")], vec![1, 1]).unwrap();
        let check = factorization_check(&same, &prob).unwrap();
        assert!(check.orbits_ok());
        assert_eq!(check.failed_subsets, vec![vec![0, 1]]);
        assert_eq!(g("e(1,0)^18").ech_index(), 36);
        assert_eq!(prob.target_index(2), 56);

        let slanted = Factorization::new(vec![g("e(8,1)"), g("e(8,1)")], vec![1, 1]).unwrap();
        let check = factorization_check(&slanted, &prob).unwrap();
        assert_eq!(g("e(8,1)^2").ech_index(), 52);
        assert_eq!(check.failed_subsets, vec![vec![0, 1]]);
        assert!(!check.passes());
    }

    #[test]
    fn orbit_condition() {
        let prob = EmbeddingProblem::supremum(r(3, 2), 5, 2).unwrap();
        let f = Factorization::new(vec![g("e(1,0)^9"), g("e(1,0) e(8,1)")], vec![1, 1]).unwrap();
        assert_eq!(factorization_check(&f, &prob).unwrap().orbit_conflicts, vec![(0, 1)]);
        let wrong_sum = Factorization::new(vec![g("e(1,0)^9")], vec![1]).unwrap();
        assert!(factorization_check(&wrong_sum, &prob).is_err());
    }

    #[test]
    fn shared_hyperbolic_fails_subset() {
        let prob = EmbeddingProblem::supremum(r(3, 2), 5, 2).unwrap();
        let f = Factorization::new(vec![g("h(2,1)"), g("h(2,1)")], vec![1, 1]).unwrap();
        let check = factorization_check(&f, &prob).unwrap();
        assert!(check.failed_subsets.contains(&vec![0, 1]));
    }
}
