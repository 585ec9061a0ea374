//! Brute-force counting of planar maps and p-hypermaps as rotation systems.
//!
//! With the edge involution fixed (`d <-> d ^ 1`), a map on `2E` darts is
//! a permutation `sigma`. A rooted map has exactly `2^E E!` labelings, so
//! counting decorated labeled maps and dividing by `2^E E!` counts the
//! decorated maps, as long as the decoration marks a corner.
//!
//! For `p = 2` every `sigma` in `S_2E` is scanned. For `p >= 3` the face
//! permutation `phi` is built cycle by cycle with the prescribed face
//! degrees (light faces plus `epsilon / p` dark faces of degree `p`), and
//! `sigma(d) = phi(d ^ 1)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use rayon::prelude::*;

use crate::error::OracleError;
use crate::numeric::{factorial, Integer};

/// Vertex count to number of labeled (sigma, coloring) pairs.
pub type VertexCounts = BTreeMap<usize, u64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_darts: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_darts: 12 }
    }
}

struct DartGraph {
    parent: Vec<usize>,
}

impl DartGraph {
    fn new(n: usize) -> Self {
        DartGraph { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        self.parent[a] = b;
        true
    }
}

fn count_cycles(perm: &[usize], seen: &mut [bool]) -> usize {
    seen.iter_mut().for_each(|s| *s = false);
    let mut cycles = 0;
    for start in 0..perm.len() {
        if !seen[start] {
            cycles += 1;
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                d = perm[d];
            }
        }
    }
    cycles
}

fn is_connected(sigma: &[usize]) -> bool {
    let n = sigma.len();
    let mut g = DartGraph::new(n);
    let mut comps = n;
    for d in 0..n {
        if g.union(d, sigma[d]) {
            comps -= 1;
        }
        if g.union(d, d ^ 1) {
            comps -= 1;
        }
    }
    comps == 1
}

/// Face labels (cycle index of `phi`) and sorted face degrees.
fn faces_of(sigma: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let n = sigma.len();
    let mut label = vec![usize::MAX; n];
    let mut degrees = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let f = degrees.len();
        let mut d = start;
        let mut len = 0;
        while label[d] == usize::MAX {
            label[d] = f;
            len += 1;
            d = sigma[d ^ 1];
        }
        degrees.push(len);
    }
    (label, degrees)
}

/// Census of all planar maps on `n` darts, keyed by sorted face degrees.
pub fn full_scan(n: usize) -> HashMap<Vec<usize>, VertexCounts> {
    assert!(n % 2 == 0 && n > 0);
    let e = n / 2;
    (0..n)
        .into_par_iter()
        .map(|first| {
            let mut local: HashMap<Vec<usize>, VertexCounts> = HashMap::new();
            let mut rest: Vec<usize> = (0..n).filter(|&x| x != first).collect();
            let mut sigma = vec![0; n];
            let mut seen = vec![false; n];
            loop {
                sigma[0] = first;
                sigma[1..].copy_from_slice(&rest);
                if is_connected(&sigma) {
                    let v = count_cycles(&sigma, &mut seen);
                    let (_, mut degrees) = faces_of(&sigma);
                    if v + degrees.len() == e + 2 {
                        degrees.sort_unstable();
                        *local.entry(degrees).or_default().entry(v).or_insert(0) += 1;
                    }
                }
                if !next_permutation(&mut rest) {
                    break;
                }
            }
            local
        })
        .reduce(HashMap::new, merge_census)
}

fn merge_census(
    mut a: HashMap<Vec<usize>, VertexCounts>,
    b: HashMap<Vec<usize>, VertexCounts>,
) -> HashMap<Vec<usize>, VertexCounts> {
    for (k, counts) in b {
        let e = a.entry(k).or_default();
        for (v, c) in counts {
            *e.entry(v).or_insert(0) += c;
        }
    }
    a
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Labeled p-hypermaps whose light faces have exactly the degrees `light`,
/// counted once per valid coloring, by vertex count. For `p = 2` the light
/// faces are all the faces of a map.
pub fn hypermap_census(p: usize, light: &[usize]) -> VertexCounts {
    let eps: usize = light.iter().sum();
    assert!(p >= 2 && eps > 0 && eps % p == 0, "light degrees must sum to a positive multiple of p");
    let mut lengths: Vec<usize> = light.to_vec();
    let (n, darks) = if p == 2 { (eps, 0) } else { (2 * eps, eps / p) };
    lengths.extend(std::iter::repeat(p).take(darks));
    let mut pool: BTreeMap<usize, usize> = BTreeMap::new();
    for &l in &lengths {
        *pool.entry(l).or_insert(0) += 1;
    }
    let faces = lengths.len();
    let edges = n / 2;

    // Split the search on the cycle through dart 0.
    let mut prefixes = Vec::new();
    for (&len, _) in pool.iter() {
        let mut chosen = vec![0usize];
        first_cycles(n, len, &mut chosen, &mut prefixes);
    }
    prefixes
        .into_par_iter()
        .map(|cycle| {
            let mut st = Search {
                n,
                p,
                with_colors: p > 2,
                edges,
                faces,
                phi: vec![usize::MAX; n],
                face: vec![usize::MAX; n],
                face_len: Vec::with_capacity(faces),
                pool: pool.clone(),
                out: VertexCounts::new(),
                sigma: vec![0; n],
                seen: vec![false; n],
            };
            st.place_cycle(&cycle);
            st.search();
            st.out
        })
        .reduce(VertexCounts::new, |mut a, b| {
            for (v, c) in b {
                *a.entry(v).or_insert(0) += c;
            }
            a
        })
}

fn first_cycles(n: usize, len: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if chosen.len() == len {
        out.push(chosen.clone());
        return;
    }
    for d in 1..n {
        if !chosen.contains(&d) {
            chosen.push(d);
            first_cycles(n, len, chosen, out);
            chosen.pop();
        }
    }
}

struct Search {
    n: usize,
    p: usize,
    with_colors: bool,
    edges: usize,
    faces: usize,
    phi: Vec<usize>,
    face: Vec<usize>,
    face_len: Vec<usize>,
    pool: BTreeMap<usize, usize>,
    out: VertexCounts,
    sigma: Vec<usize>,
    seen: Vec<bool>,
}

impl Search {
    fn place_cycle(&mut self, cycle: &[usize]) {
        let f = self.face_len.len();
        for (j, &d) in cycle.iter().enumerate() {
            self.phi[d] = cycle[(j + 1) % cycle.len()];
            self.face[d] = f;
        }
        self.face_len.push(cycle.len());
        *self.pool.get_mut(&cycle.len()).expect("length is available") -= 1;
    }

    fn remove_cycle(&mut self, cycle: &[usize]) {
        for &d in cycle {
            self.phi[d] = usize::MAX;
            self.face[d] = usize::MAX;
        }
        let len = self.face_len.pop().expect("a cycle was placed");
        *self.pool.get_mut(&len).expect("length is known") += 1;
    }

    fn search(&mut self) {
        let Some(start) = (0..self.n).find(|&d| self.phi[d] == usize::MAX) else {
            self.record();
            return;
        };
        let lens: Vec<usize> = self.pool.iter().filter(|(_, &c)| c > 0).map(|(&l, _)| l).collect();
        for len in lens {
            let mut cycle = vec![start];
            self.extend(len, &mut cycle);
        }
    }

    fn extend(&mut self, len: usize, cycle: &mut Vec<usize>) {
        if cycle.len() == len {
            self.place_cycle(cycle);
            self.search();
            self.remove_cycle(cycle);
            return;
        }
        for d in 0..self.n {
            if self.phi[d] == usize::MAX && !cycle.contains(&d) {
                cycle.push(d);
                self.extend(len, cycle);
                cycle.pop();
            }
        }
    }

    fn record(&mut self) {
        for d in 0..self.n {
            self.sigma[d] = self.phi[d ^ 1];
        }
        if !is_connected(&self.sigma) {
            return;
        }
        let v = count_cycles(&self.sigma, &mut self.seen);
        if v + self.faces != self.edges + 2 {
            return;
        }
        let colorings = if self.with_colors { self.colorings() } else { 1 };
        if colorings > 0 {
            *self.out.entry(v).or_insert(0) += colorings;
        }
    }

    /// Proper dark/light colorings of the faces with every dark face of
    /// degree `p`.
    fn colorings(&self) -> u64 {
        let mut side = vec![u8::MAX; self.faces];
        side[0] = 0;
        let mut stack = vec![0usize];
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); self.faces];
        for d in 0..self.n {
            members[self.face[d]].push(d);
        }
        while let Some(f) = stack.pop() {
            for &d in &members[f] {
                let g = self.face[d ^ 1];
                if side[g] == u8::MAX {
                    side[g] = 1 - side[f];
                    stack.push(g);
                } else if side[g] == side[f] {
                    return 0;
                }
            }
        }
        (0..2u8)
            .filter(|&dark| (0..self.faces).all(|f| side[f] != dark || self.face_len[f] == self.p))
            .count() as u64
    }
}

/// Shared census for oracle queries, cached by `(p, light degrees)`.
pub struct MapOracle {
    budget: SearchBudget,
    cache: Mutex<HashMap<(usize, Vec<usize>), VertexCounts>>,
}

impl MapOracle {
    pub fn new(budget: SearchBudget) -> Self {
        MapOracle { budget, cache: Mutex::new(HashMap::new()) }
    }

    pub fn budget(&self) -> SearchBudget {
        self.budget
    }

    /// Darts of the underlying map when the light faces have these degrees.
    pub fn darts_for(p: usize, light: &[usize]) -> usize {
        let eps: usize = light.iter().sum();
        if p == 2 {
            eps
        } else {
            2 * eps
        }
    }

    /// Labeled census for the given light face degrees, by vertex count.
    pub fn light_census(&self, p: usize, light: &[usize]) -> Result<VertexCounts, OracleError> {
        let mut light = light.to_vec();
        light.sort_unstable();
        let eps: usize = light.iter().sum();
        if p < 2 || eps == 0 || eps % p != 0 || light.contains(&0) {
            return Err(OracleError::InvalidQuery(format!("light faces {light:?} do not form a p = {p} hypermap")));
        }
        let n = Self::darts_for(p, &light);
        if n > self.budget.max_darts {
            return Err(OracleError::BudgetExceeded(format!("{n} darts > max_darts = {}", self.budget.max_darts)));
        }
        if let Some(c) = self.cache.lock().expect("cache lock").get(&(p, light.clone())) {
            return Ok(c.clone());
        }
        let result = if p == 2 {
            let all = full_scan(n);
            let mut cache = self.cache.lock().expect("cache lock");
            let mut found = VertexCounts::new();
            for (degrees, counts) in all {
                if degrees == light {
                    found = counts.clone();
                }
                cache.insert((2, degrees), counts);
            }
            found
        } else {
            hypermap_census(p, &light)
        };
        self.cache.lock().expect("cache lock").insert((p, light), result.clone());
        Ok(result)
    }

    /// `2^E E!` for the underlying map.
    pub fn labelings(p: usize, light: &[usize]) -> Integer {
        let e = Self::darts_for(p, light) / 2;
        Integer::from(2u32).pow(e as u32) * factorial(e as u64)
    }
}
