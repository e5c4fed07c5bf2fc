use super::{ConvexGenerator, Direction, EdgeFactor, Label};

/// Per direction: ways to split its `e` count over the parts, with the part
/// that takes its `h`, if any.
type DirectionChoices = (Direction, Vec<(Vec<u64>, Option<usize>)>);

/// Every ordered `n`-tuple of nonempty generators whose product is `g`.
///
/// Elliptic multiplicities are split across the parts in every possible way
/// and each `h` factor goes to exactly one part. Tuples come out in
/// lexicographic order of the per-direction splits (first direction slowest).
pub fn decompositions(g: &ConvexGenerator, n: usize) -> Vec<Vec<ConvexGenerator>> {
    if n == 0 || n as u64 > g.total_multiplicity() {
        return Vec::new();
    }
    // per direction, the list of (e-count per part, h owner) choices
    let mut choices: Vec<DirectionChoices> = Vec::new();
    for e in g.edges() {
        let splits = compositions(e.elliptic_multiplicity(), n);
        let owners: Vec<Option<usize>> = match e.label {
            Label::E => vec![None],
            Label::H => (0..n).map(Some).collect(),
        };
        let mut opts = Vec::with_capacity(splits.len() * owners.len());
        for s in &splits {
            for o in &owners {
                opts.push((s.clone(), *o));
            }
        }
        choices.push((e.direction, opts));
    }

    let mut out = Vec::new();
    let mut pick = vec![0usize; choices.len()];
    loop {
        if let Some(parts) = assemble(&choices, &pick, n) {
            out.push(parts);
        }
        // odometer, last direction fastest
        let mut i = choices.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < choices[i].1.len() {
                break;
            }
            pick[i] = 0;
        }
    }
}

fn assemble(choices: &[DirectionChoices], pick: &[usize], n: usize) -> Option<Vec<ConvexGenerator>> {
    let mut parts: Vec<Vec<EdgeFactor>> = vec![Vec::new(); n];
    for ((direction, opts), &p) in choices.iter().zip(pick) {
        let (split, owner) = &opts[p];
        for (i, part) in parts.iter_mut().enumerate() {
            let has_h = *owner == Some(i);
            let multiplicity = split[i] + has_h as u64;
            if multiplicity > 0 {
                let label = if has_h { Label::H } else { Label::E };
                part.push(EdgeFactor { direction: *direction, multiplicity, label });
            }
        }
    }
    if parts.iter().any(Vec::is_empty) {
        return None;
    }
    Some(parts.into_iter().map(ConvexGenerator::from_canonical_edges).collect())
}

/// Weak compositions of `total` into `n` parts, lexicographically descending
/// in the first part.
fn compositions(total: u64, n: usize) -> Vec<Vec<u64>> {
    fn rec(total: u64, n: usize, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if n == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=total).rev() {
            prefix.push(first);
            rec(total - first, n - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, n, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> ConvexGenerator {
        s.parse().unwrap()
    }

    #[test]
    fn documented_examples() {
        assert_eq!(decompositions(&g("e(1,0)^2"), 2), vec![vec![g("e(1,0)"), g("e(1,0)")]]);
        assert_eq!(decompositions(&g("e(5,2)^3"), 3), vec![vec![g("e(5,2)"), g("e(5,2)"), g("e(5,2)")]]);
        let two = decompositions(&g("e(1,0) e(2,1)"), 2);
        assert_eq!(two.len(), 2);
        assert!(two.contains(&vec![g("e(1,0)"), g("e(2,1)")]));
        assert!(two.contains(&vec![g("e(2,1)"), g("e(1,0)")]));
    }

    #[test]
    fn trivial_and_empty_cases() {
        let x = g("e(1,0)^2 h(3,1) e(0,1)");
        assert_eq!(decompositions(&x, 1), vec![vec![x.clone()]]);
        assert!(decompositions(&x, 5).is_empty());
        assert!(decompositions(&x, 0).is_empty());
    }

    #[test]
    fn h_goes_to_exactly_one_part() {
        let x = g("e(2,1) h(2,1)");
        let ds = decompositions(&x, 2);
        // e to part 0 + h to part 1, or h to part 0 + e to part 1
        assert_eq!(ds.len(), 2);
        for d in &ds {
            assert_eq!(d.iter().map(|p| p.hyperbolic_count()).sum::<u64>(), 1);
            assert_eq!(ConvexGenerator::product_all(d).unwrap(), x);
        }
    }

    #[test]
    fn no_duplicates_and_products_match() {
        let x = g("e(1,0)^2 e(3,1) e(1,2) h(1,3) e(0,1)^2");
        for n in 1..=4 {
            let ds = decompositions(&x, n);
            let mut sorted = ds.clone();
            sorted.sort_by_key(|d| d.iter().map(|p| p.to_string()).collect::<Vec<_>>());
            sorted.dedup();
            assert_eq!(sorted.len(), ds.len());
            for d in &ds {
                assert_eq!(d.len(), n);
                assert_eq!(&ConvexGenerator::product_all(d).unwrap(), &x);
            }
        }
    }
}
