//! Exhaustive counts of mobiles with marked vertices, grouped by profile.
//!
//! Members are generated as black-rooted trees with the first marked light
//! vertex `v1` at the root, then identified by their encoding rerooted at
//! `v1` toward the second marked vertex, so every object is counted once.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rayon::prelude::*;

use super::MobileGenerator;
use crate::error::OracleError;
use crate::mobile::{prune, validate_mobile, Mobile, MobileClass, NodeKind};
use crate::numeric::Integer;
use crate::series::Monomial;

/// White vertex count and sorted degrees of the unmarked light vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Profile {
    pub whites: usize,
    pub degrees: Vec<usize>,
}

impl Profile {
    pub fn new(whites: usize, mut degrees: Vec<usize>) -> Self {
        degrees.sort_unstable();
        Profile { whites, degrees }
    }

    /// The monomial `t^whites prod x_i` with one `x_i` per degree `p * i`.
    pub fn monomial(&self, p: u32) -> Option<Monomial> {
        let p = p as usize;
        let mut xs: BTreeMap<u32, u32> = BTreeMap::new();
        for &d in &self.degrees {
            if d == 0 || d % p != 0 {
                return None;
            }
            *xs.entry((d / p) as u32).or_insert(0) += 1;
        }
        let xs: Vec<(u32, u32)> = xs.into_iter().collect();
        Some(Monomial::new(self.whites as u32, &xs))
    }
}

/// Families of mobiles with marked vertices. Degrees are those of the
/// marked light vertices `v1`, `v2` before pruning.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Regular mobiles with two marked light vertices.
    B(usize, usize),
    /// Same, with the buds at both marked vertices removed.
    BHat(usize, usize),
    /// Quasi mobiles marked at their two irregular light vertices.
    Q(usize, usize),
    QHat(usize, usize),
    /// Regular mobiles with a marked light vertex and a marked white
    /// vertex; the marked white vertex is not counted in the profile.
    BPrime(usize),
    /// Middle parts of quasi mobiles between the irregular vertices.
    H,
    /// Middle parts of regular mobiles between two marked light vertices.
    K,
}

impl Family {
    pub fn is_quasi(self) -> bool {
        matches!(self, Family::Q(..) | Family::QHat(..) | Family::H)
    }

    fn marked_lights(self) -> usize {
        if let Family::BPrime(_) = self {
            1
        } else {
            2
        }
    }

    /// White vertices needed outside the counted part in the smallest
    /// mobile of the family with a given profile.
    fn extra_whites(self, p: usize) -> usize {
        match self {
            Family::BPrime(_) => 1,
            Family::H => p - 2,
            Family::K => 2 * (p - 2),
            _ => 0,
        }
    }
}

/// Bounds on the generated mobiles: total white and light vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyBudget {
    pub whites: usize,
    pub lights: usize,
}

impl FamilyBudget {
    /// Whether every member with this profile fits in the budget.
    pub fn covers(&self, family: Family, p: u32, profile: &Profile) -> bool {
        profile.whites + family.extra_whites(p as usize) <= self.whites
            && profile.degrees.len() + family.marked_lights() <= self.lights
    }
}

fn regular_class(p: u32) -> MobileClass {
    if p == 2 {
        MobileClass::Bipartite
    } else {
        MobileClass::PRegular
    }
}

fn quasi_class(p: u32) -> MobileClass {
    if p == 2 {
        MobileClass::QuasiBipartite
    } else {
        MobileClass::QuasiP
    }
}

/// Encoding rerooted at `v1`, root corner before the first edge of the
/// path to `v2`, with marks 1 and 2.
fn marked_key(m: &Mobile, v1: usize, v2: usize, pruned: bool) -> String {
    let mut m = m.clone();
    m.set_mark(v1, Some(1));
    m.set_mark(v2, Some(2));
    let m = if pruned { prune(&m, &[v1, v2]) } else { m.compact() };
    let marks = m.marked();
    let (v1, v2) = (marks[&1], marks[&2]);
    let next = m.path(v1, v2)[1];
    let start = m.adjacency()[v1].iter().position(|&x| x == next).expect("path step is a neighbour");
    m.rerooted(v1, start).encode()
}

/// Middle part between `v1` and `v2`: rooted at the first end, with `v2`
/// reduced to a marked leaf.
fn middle_part(m: &Mobile, v1: usize, v2: usize) -> (Profile, String) {
    let path = m.path(v1, v2);
    if path.len() == 2 {
        return (Profile::new(0, Vec::new()), "-".to_string());
    }
    let x1 = path[1];
    let adj = m.adjacency();
    let mut seen = vec![false; adj.len()];
    seen[v1] = true;
    seen[v2] = true;
    seen[x1] = true;
    let mut queue = VecDeque::from([x1]);
    let (mut whites, mut degrees) = (0, Vec::new());
    while let Some(v) = queue.pop_front() {
        match m.kind(v) {
            NodeKind::White => whites += 1,
            NodeKind::Black => degrees.push(adj[v].len()),
            _ => {}
        }
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    let mut marked = m.clone();
    marked.set_mark(v2, Some(2));
    let start = adj[x1].iter().position(|&x| x == v1).expect("path step is a neighbour");
    let mut r = marked.rerooted(x1, start);
    let root = r.root();
    r.node_mut(root).children.remove(0);
    let leaf = r.marked()[&2];
    r.node_mut(leaf).children.clear();
    (Profile::new(whites, degrees), r.encode())
}

fn members(family: Family, p: u32, m: &Mobile) -> Vec<(Profile, String)> {
    let want = if family.is_quasi() { quasi_class(p) } else { regular_class(p) };
    if validate_mobile(m, p) != want {
        return Vec::new();
    }
    let pu = p as usize;
    let parent = m.parents();
    let deg = |v: usize| m.degree(v, &parent);
    let v1 = m.root();
    let d1 = deg(v1);
    let lights: Vec<usize> =
        m.preorder().into_iter().filter(|&v| v != v1 && m.kind(v) == NodeKind::Black).collect();
    let profile = |skip: &[usize], whites: usize| Profile::new(whites, m.black_degrees_except(skip));
    let mut out = Vec::new();
    match family {
        Family::BPrime(d) => {
            if d1 == d && m.whites() > 0 {
                let prof = profile(&[v1], m.whites() - 1);
                for w in m.preorder().into_iter().filter(|&v| m.kind(v) == NodeKind::White) {
                    out.push((prof.clone(), marked_key(m, v1, w, false)));
                }
            }
        }
        Family::B(a, b) | Family::BHat(a, b) | Family::Q(a, b) | Family::QHat(a, b) => {
            let pruned = matches!(family, Family::BHat(..) | Family::QHat(..));
            if d1 != a || (family.is_quasi() && d1 % pu == 0) {
                return out;
            }
            for &v2 in &lights {
                if deg(v2) == b && !(family.is_quasi() && b % pu == 0) {
                    out.push((profile(&[v1, v2], m.whites()), marked_key(m, v1, v2, pruned)));
                }
            }
        }
        Family::H | Family::K => {
            if family.is_quasi() && d1 % pu == 0 {
                return out;
            }
            for &v2 in &lights {
                if !(family.is_quasi() && deg(v2) % pu == 0) {
                    out.push(middle_part(m, v1, v2));
                }
            }
        }
    }
    out
}

/// Every member of `family` within `budget`, keyed by encoding, for the
/// profiles the budget covers completely.
pub fn family_members(family: Family, p: u32, budget: FamilyBudget) -> BTreeMap<Profile, BTreeSet<String>> {
    let quasi = family.is_quasi();
    let darks = if quasi && p > 2 { budget.lights.saturating_sub(1) } else { 0 };
    let mut gen = MobileGenerator::new(p, p as usize * (budget.whites + 2), quasi);
    let shapes = gen.all_rooted(NodeKind::Black, budget.whites, budget.lights, darks);
    let found: Vec<(Profile, String)> =
        shapes.par_iter().flat_map_iter(|s| members(family, p, &s.to_mobile())).collect();
    let mut out: BTreeMap<Profile, BTreeSet<String>> = BTreeMap::new();
    for (prof, key) in found {
        if budget.covers(family, p, &prof) {
            out.entry(prof).or_default().insert(key);
        }
    }
    out
}

/// Member counts per covered profile.
pub fn family_counts(family: Family, p: u32, budget: FamilyBudget) -> BTreeMap<Profile, u64> {
    family_members(family, p, budget).into_iter().map(|(k, v)| (k, v.len() as u64)).collect()
}

/// Per-profile counts `(profile, scale_a * |a|, scale_b * |b|)` over the
/// profiles both families cover within `budget`.
pub fn compare_families(
    p: u32,
    (a, scale_a): (Family, u64),
    (b, scale_b): (Family, u64),
    budget: FamilyBudget,
) -> Vec<(Profile, u64, u64)> {
    let ca = family_counts(a, p, budget);
    let cb = family_counts(b, p, budget);
    let keys: BTreeSet<&Profile> = ca.keys().chain(cb.keys()).collect();
    keys.into_iter()
        .filter(|k| budget.covers(a, p, k) && budget.covers(b, p, k))
        .map(|k| (k.clone(), scale_a * ca.get(k).copied().unwrap_or(0), scale_b * cb.get(k).copied().unwrap_or(0)))
        .collect()
}

/// Number of members of `family` with the given profile.
pub fn oracle_family_count(
    family: Family,
    p: u32,
    profile: &Profile,
    budget: FamilyBudget,
) -> Result<Integer, OracleError> {
    if p < 2 {
        return Err(OracleError::InvalidQuery("p must be at least 2".into()));
    }
    if !budget.covers(family, p, profile) {
        return Err(OracleError::BudgetExceeded(format!(
            "profile {profile:?} of {family:?} needs more than {} whites / {} light vertices",
            budget.whites, budget.lights
        )));
    }
    let counts = family_members(family, p, budget);
    Ok(Integer::from(counts.get(profile).map_or(0, BTreeSet::len)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::compute_rp;
    use crate::mobile::unprune_count;
    use crate::numeric::int_to_rational;
    use crate::series::TruncationSpec;

    fn budget(whites: usize, lights: usize) -> FamilyBudget {
        FamilyBudget { whites, lights }
    }

    fn assert_equal(p: u32, a: (Family, u64), b: (Family, u64), bud: FamilyBudget) {
        let rows = compare_families(p, a, b, bud);
        assert!(rows.iter().filter(|r| r.1 > 0).count() >= 2, "{rows:?}");
        for (prof, x, y) in rows {
            assert_eq!(x, y, "{a:?} vs {b:?} at {prof:?}");
        }
    }

    #[test]
    fn smallest_members() {
        // a path W - B(2) - W - B(2): one member with 1 white... the two
        // marked degree-2 blacks share their white neighbour
        let b = family_counts(Family::B(2, 2), 2, budget(1, 2));
        assert_eq!(b.get(&Profile::new(1, vec![])), Some(&1));
        // the loop's mobile: two degree-1 blacks joined by an edge
        let q = family_counts(Family::Q(1, 1), 2, budget(0, 2));
        assert_eq!(q.get(&Profile::new(0, vec![])), Some(&1));
        let h = family_counts(Family::H, 2, budget(0, 2));
        assert_eq!(h.get(&Profile::new(0, vec![])), Some(&1));
    }

    #[test]
    fn pruning_divides_by_bud_placements() {
        let bud = budget(4, 3);
        let factor = u64::try_from(unprune_count(2, 2) * unprune_count(2, 1)).unwrap();
        assert_equal(2, (Family::BHat(4, 2), factor), (Family::B(4, 2), 1), bud);
    }

    #[test]
    fn quasi_reduction_p2() {
        let bud = budget(4, 3);
        assert_equal(2, (Family::BHat(2, 2), 1), (Family::QHat(1, 3), 1), bud);
        assert_equal(2, (Family::Q(1, 1), 1), (Family::BPrime(2), 1), bud);
    }

    #[test]
    fn middle_parts_match_derivatives() {
        let trunc = TruncationSpec::with_default_vars(6, 3).unwrap();
        let r = compute_rp(2, trunc.clone()).unwrap();
        let r1 = r.d_dt();
        let r1r = r1.mul(&r.restrict(r1.trunc().clone()).unwrap()).unwrap();
        let bud = budget(3, 4);
        let h = family_counts(Family::H, 2, bud);
        let k = family_counts(Family::K, 2, bud);
        for (prof, &n) in &h {
            assert_eq!(r1.coeff(&prof.monomial(2).unwrap()).unwrap(), int_to_rational(Integer::from(n)), "{prof:?}");
        }
        for (prof, &n) in &k {
            assert_eq!(r1r.coeff(&prof.monomial(2).unwrap()).unwrap(), int_to_rational(Integer::from(n)), "{prof:?}");
        }
        assert!(h.len() > 3 && k.len() > 3);
    }

    #[test]
    fn quasi_reduction_p3() {
        let bud = budget(4, 3);
        assert_equal(3, (Family::BHat(3, 3), 2), (Family::QHat(2, 4), 1), bud);
        assert_equal(3, (Family::BHat(3, 3), 2), (Family::QHat(1, 5), 1), bud);
        assert_equal(3, (Family::Q(1, 2), 1), (Family::BPrime(3), 1), bud);
        assert_equal(3, (Family::Q(2, 1), 1), (Family::BPrime(3), 1), bud);
    }

    #[test]
    fn middle_parts_match_derivatives_p3() {
        let trunc = TruncationSpec::with_default_vars(6, 3).unwrap();
        let r = compute_rp(3, trunc).unwrap();
        let r1 = r.d_dt();
        let r1r = r1.mul(&r.restrict(r1.trunc().clone()).unwrap()).unwrap();
        let bud = budget(4, 3);
        let h = family_counts(Family::H, 3, bud);
        let k = family_counts(Family::K, 3, bud);
        for (prof, &n) in &h {
            let want = r1.coeff(&prof.monomial(3).unwrap()).unwrap() * int_to_rational(Integer::from(2));
            assert_eq!(want, int_to_rational(Integer::from(n)), "{prof:?}");
        }
        for (prof, &n) in &k {
            assert_eq!(r1r.coeff(&prof.monomial(3).unwrap()).unwrap(), int_to_rational(Integer::from(n)), "{prof:?}");
        }
        assert!(h.len() >= 2 && !k.is_empty());
    }

    #[test]
    fn budget_is_reported() {
        let err = oracle_family_count(Family::H, 3, &Profile::new(3, vec![]), budget(3, 3));
        assert!(matches!(err, Err(OracleError::BudgetExceeded(_))));
        let ok = oracle_family_count(Family::H, 3, &Profile::new(0, vec![]), budget(1, 2)).unwrap();
        assert_eq!(ok, Integer::from(2));
    }
}
