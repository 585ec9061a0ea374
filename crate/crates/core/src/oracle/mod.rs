//! Brute-force ground truth: map census by rotation systems and exhaustive
//! mobile generation.

mod census;
pub mod families;
mod generator;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_integer::Integer as _;

pub use census::{full_scan, hypermap_census, MapOracle, SearchBudget, VertexCounts};
pub use generator::{MobileGenerator, Shape};

use crate::error::OracleError;
use crate::map::PlanarMap;
use crate::mobile::{validate_mobile, BlossomItem, BlossomingTree, MobileClass, NodeKind};
use crate::numeric::{factorial, unrank_subset, Integer};

/// A count of maps with numbered, corner-rooted boundary faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapQuery {
    pub p: u32,
    pub boundaries: Vec<u32>,
    /// Internal light faces: `i -> n_i` faces of degree `p * i`.
    pub internal: BTreeMap<u32, u32>,
    /// Restrict to maps with this many vertices.
    pub vertices: Option<usize>,
}

impl MapQuery {
    pub fn new(p: u32, boundaries: &[u32]) -> Self {
        MapQuery { p, boundaries: boundaries.to_vec(), internal: BTreeMap::new(), vertices: None }
    }

    pub fn with_internal(mut self, internal: BTreeMap<u32, u32>) -> Self {
        self.internal = internal;
        self
    }

    pub fn with_vertices(mut self, v: usize) -> Self {
        self.vertices = Some(v);
        self
    }

    /// All light face degrees, boundaries first.
    pub fn light_faces(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.boundaries.iter().map(|&l| l as usize).collect();
        for (&i, &n) in &self.internal {
            out.extend(std::iter::repeat((self.p * i) as usize).take(n as usize));
        }
        out
    }
}

fn exact_div(num: Integer, den: &Integer, what: &str) -> Integer {
    let (q, r) = num.div_rem(den);
    assert!(r == Integer::from(0), "{what}: labeled count is not divisible by the number of labelings");
    q
}

/// Ways to number the boundaries: injections from boundary indices into
/// light faces of the same degree.
fn numberings(boundaries: &[u32], light: &[usize]) -> Integer {
    let mut faces: BTreeMap<usize, u64> = BTreeMap::new();
    for &l in light {
        *faces.entry(l).or_insert(0) += 1;
    }
    let mut wanted: BTreeMap<usize, u64> = BTreeMap::new();
    for &b in boundaries {
        *wanted.entry(b as usize).or_insert(0) += 1;
    }
    wanted
        .iter()
        .map(|(deg, &b)| {
            let f = faces.get(deg).copied().unwrap_or(0);
            if b > f {
                Integer::from(0)
            } else {
                factorial(f) / factorial(f - b)
            }
        })
        .product()
}

/// Number of maps in `query`, using (and filling) the census of `oracle`.
pub fn count_maps(oracle: &MapOracle, query: &MapQuery) -> Result<Integer, OracleError> {
    let p = query.p as usize;
    if query.boundaries.is_empty() {
        return Err(OracleError::InvalidQuery("at least one boundary is required".into()));
    }
    let light = query.light_faces();
    let census = oracle.light_census(p, &light)?;
    let labeled: u64 = match query.vertices {
        Some(v) => census.get(&v).copied().unwrap_or(0),
        None => census.values().sum(),
    };
    let corners: Integer = query.boundaries.iter().map(|&l| Integer::from(l)).product();
    let total = Integer::from(labeled) * numberings(&query.boundaries, &light) * corners;
    Ok(exact_div(total, &MapOracle::labelings(p, &light), "count_maps"))
}

/// Maps (p-hypermaps for `p >= 3`) whose light faces are exactly the
/// numbered, corner-rooted boundaries.
pub fn oracle_slicings(p: u32, boundaries: &[u32], budget: SearchBudget) -> Result<Integer, OracleError> {
    count_maps(&MapOracle::new(budget), &MapQuery::new(p, boundaries))
}

/// Coefficient of `t^v prod x_i^n_i` in the boundary generating function,
/// counted on maps.
pub fn oracle_gf_coeff(query: &MapQuery, budget: SearchBudget) -> Result<Integer, OracleError> {
    if query.vertices.is_none() {
        return Err(OracleError::InvalidQuery("a vertex count is required".into()));
    }
    count_maps(&MapOracle::new(budget), query)
}

/// Rooted maps (p = 2, rooted at any corner) or rooted p-constellations
/// (rooted at a light corner) with `v` vertices and the given light faces.
pub fn oracle_rooted_count(
    oracle: &MapOracle,
    p: u32,
    v: usize,
    internal: &BTreeMap<u32, u32>,
) -> Result<Integer, OracleError> {
    let q = MapQuery { p, boundaries: Vec::new(), internal: internal.clone(), vertices: Some(v) };
    let light = q.light_faces();
    if light.is_empty() {
        return Err(OracleError::InvalidQuery("at least one face is required".into()));
    }
    let census = oracle.light_census(p as usize, &light)?;
    let labeled = census.get(&v).copied().unwrap_or(0);
    let darts = MapOracle::darts_for(p as usize, &light);
    let corners = if p == 2 { darts } else { darts / 2 };
    let total = Integer::from(labeled) * Integer::from(corners);
    Ok(exact_div(total, &MapOracle::labelings(p as usize, &light), "oracle_rooted_count"))
}

/// All connected planar maps on `2E` labeled darts.
pub fn planar_maps(edges: usize) -> Vec<PlanarMap> {
    let n = 2 * edges;
    let mut sigma: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    loop {
        if let Ok(m) = PlanarMap::new(sigma.clone()) {
            if m.is_planar() {
                out.push(m);
            }
        }
        if !next_perm(&mut sigma) {
            break;
        }
    }
    out
}

fn next_perm(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("a larger element exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Rooted p-mobiles (white-rooted, no explicit dark squares) with `whites`
/// white and `blacks` black vertices, counted by sorted black degrees.
pub fn rooted_mobile_counts(
    gen: &mut MobileGenerator,
    p: u32,
    whites: usize,
    blacks: usize,
) -> BTreeMap<Vec<usize>, u64> {
    let regular = if p == 2 { MobileClass::Bipartite } else { MobileClass::PRegular };
    let mut out = BTreeMap::new();
    for s in gen.subtrees(NodeKind::White, None, whites, blacks, 0).iter() {
        let m = s.to_mobile();
        if validate_mobile(&m, p) == regular {
            *out.entry(m.black_degrees()).or_insert(0) += 1;
        }
    }
    out
}

/// Rooted p-mobiles with `whites` white vertices and `n_i` black vertices
/// of degree `p * i`.
pub fn oracle_mobiles(
    gen: &mut MobileGenerator,
    p: u32,
    whites: usize,
    profile: &BTreeMap<u32, u32>,
    max_whites: usize,
) -> Result<Integer, OracleError> {
    if whites > max_whites {
        return Err(OracleError::BudgetExceeded(format!("{whites} white vertices > {max_whites}")));
    }
    let blacks: usize = profile.values().map(|&n| n as usize).sum();
    let mut want: Vec<usize> = Vec::new();
    for (&i, &n) in profile {
        want.extend(std::iter::repeat((p * i) as usize).take(n as usize));
    }
    want.sort_unstable();
    let counts = rooted_mobile_counts(gen, p, whites, blacks);
    Ok(Integer::from(counts.get(&want).copied().unwrap_or(0)))
}

/// Every planted blossoming p-tree with `internal` internal vertices, each
/// of arity `(p-1)i` with `i <= max_index`.
pub fn blossoming_trees(p: u32, internal: usize, max_index: usize) -> Vec<BlossomingTree> {
    let mut memo: HashMap<usize, Vec<BlossomingTree>> = HashMap::new();
    trees_with(p as usize, internal, max_index, &mut memo)
}

fn trees_with(
    p: usize,
    n: usize,
    max_index: usize,
    memo: &mut HashMap<usize, Vec<BlossomingTree>>,
) -> Vec<BlossomingTree> {
    if let Some(v) = memo.get(&n) {
        return v.clone();
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(BlossomingTree::Leaf);
    } else {
        for i in 1..=max_index {
            let arity = (p - 1) * i;
            let slots = p * i - 1;
            let bud_sets = subsets(slots, i - 1);
            for kids in forests_with(p, arity, n - 1, max_index, memo) {
                for buds in &bud_sets {
                    for dark_slot in 0..p - 1 {
                        let mut it = kids.iter().cloned();
                        let items = (0..slots)
                            .map(|j| {
                                if buds.contains(&j) {
                                    BlossomItem::BigBud
                                } else {
                                    BlossomItem::Child(it.next().expect("one tree per child slot"))
                                }
                            })
                            .collect();
                        out.push(BlossomingTree::Node { dark_slot: dark_slot as u32, items });
                    }
                }
            }
        }
    }
    memo.insert(n, out.clone());
    out
}

fn forests_with(
    p: usize,
    k: usize,
    n: usize,
    max_index: usize,
    memo: &mut HashMap<usize, Vec<BlossomingTree>>,
) -> Vec<Vec<BlossomingTree>> {
    if k == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=n {
        let heads = trees_with(p, first, max_index, memo);
        for tail in forests_with(p, k - 1, n - first, max_index, memo) {
            for h in &heads {
                let mut v = Vec::with_capacity(k);
                v.push(h.clone());
                v.extend(tail.iter().cloned());
                out.push(v);
            }
        }
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let total = crate::numeric::binomial(n as u64, k as i64);
    let count = u64::try_from(total).expect("small binomial");
    (0..count)
        .map(|r| unrank_subset(n, k, &Integer::from(r)).expect("rank is in range"))
        .collect()
}

/// Every vertex-pointed rooted planar map with `edges` edges, as a map in
/// canonical labeling (root dart 0) and its pointed vertex.
pub fn rooted_pointed_maps(edges: usize) -> Vec<(PlanarMap, usize)> {
    let mut seen: BTreeSet<(Vec<usize>, Option<usize>)> = BTreeSet::new();
    for m in planar_maps(edges) {
        for v in 0..m.n_vertices() {
            let pointed = m.clone().with_pointed_vertex(v).expect("vertex exists");
            seen.insert(pointed.canonical_form(0));
        }
    }
    seen.into_iter()
        .map(|(sigma, dart)| {
            let m = PlanarMap::new(sigma).expect("canonical form is a valid map");
            let v = m.vertex_of(dart.expect("pointed"));
            (m, v)
        })
        .collect()
}
