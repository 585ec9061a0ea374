//! Maps as rotation systems.
//!
//! Darts are `0..n`. Dart `d` and `d ^ 1` form an edge. `sigma[d]` is the
//! next dart counterclockwise around the vertex of `d`, and faces are the
//! cycles of `phi(d) = sigma[d ^ 1]`. The face of a dart lies on its right.
//! Vertices and faces are numbered by increasing minimal dart.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{MapError, ParseError};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlanarMap {
    sigma: Vec<usize>,
    pointed_vertex: Option<usize>,
    vertex_of: Vec<usize>,
    face_of: Vec<usize>,
    n_vertices: usize,
    n_faces: usize,
}

#[derive(Serialize, Deserialize)]
struct MapJson {
    n_darts: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pointed_vertex: Option<usize>,
    sigma: Vec<usize>,
}

/// Labels the cycles of `perm`, numbering them by increasing minimal element.
fn cycle_labels(n: usize, perm: impl Fn(usize) -> usize) -> (Vec<usize>, usize) {
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let mut d = start;
        while label[d] == usize::MAX {
            label[d] = count;
            d = perm(d);
        }
        count += 1;
    }
    (label, count)
}

impl PlanarMap {
    /// Builds a connected map from its vertex rotation. Any genus is accepted;
    /// see [`PlanarMap::genus`].
    pub fn new(sigma: Vec<usize>) -> Result<Self, MapError> {
        let n = sigma.len();
        if n == 0 || n % 2 == 1 {
            return Err(MapError::OddDarts(n));
        }
        let mut seen = vec![false; n];
        for &s in &sigma {
            if s >= n || seen[s] {
                return Err(MapError::NotPermutation(n));
            }
            seen[s] = true;
        }
        let (vertex_of, n_vertices) = cycle_labels(n, |d| sigma[d]);
        let (face_of, n_faces) = cycle_labels(n, |d| sigma[d ^ 1]);
        let map = PlanarMap { sigma, pointed_vertex: None, vertex_of, face_of, n_vertices, n_faces };
        if !map.is_connected() {
            return Err(MapError::Disconnected);
        }
        Ok(map)
    }

    pub fn with_pointed_vertex(mut self, v: usize) -> Result<Self, MapError> {
        if v >= self.n_vertices {
            return Err(MapError::NoSuchVertex(v));
        }
        self.pointed_vertex = Some(v);
        Ok(self)
    }

    fn is_connected(&self) -> bool {
        let n = self.n_darts();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(d) = stack.pop() {
            for e in [self.sigma[d], d ^ 1] {
                if !seen[e] {
                    seen[e] = true;
                    count += 1;
                    stack.push(e);
                }
            }
        }
        count == n
    }

    pub fn n_darts(&self) -> usize {
        self.sigma.len()
    }

    pub fn n_edges(&self) -> usize {
        self.sigma.len() / 2
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_faces(&self) -> usize {
        self.n_faces
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn pointed_vertex(&self) -> Option<usize> {
        self.pointed_vertex
    }

    pub fn phi(&self, d: usize) -> usize {
        self.sigma[d ^ 1]
    }

    pub fn vertex_of(&self, d: usize) -> usize {
        self.vertex_of[d]
    }

    pub fn face_of(&self, d: usize) -> usize {
        self.face_of[d]
    }

    fn cycles(&self, count: usize, labels: &[usize], next: impl Fn(usize) -> usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); count];
        for (d, &l) in labels.iter().enumerate() {
            if out[l].is_empty() {
                let mut e = d;
                loop {
                    out[l].push(e);
                    e = next(e);
                    if e == d {
                        break;
                    }
                }
            }
        }
        out
    }

    /// Dart cycles of `phi`, each starting at its minimal dart.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        self.cycles(self.n_faces, &self.face_of, |d| self.phi(d))
    }

    /// Dart cycles of `sigma`, each starting at its minimal dart.
    pub fn vertices(&self) -> Vec<Vec<usize>> {
        self.cycles(self.n_vertices, &self.vertex_of, |d| self.sigma[d])
    }

    pub fn face_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_faces];
        for &f in &self.face_of {
            deg[f] += 1;
        }
        deg
    }

    pub fn genus(&self) -> usize {
        let chi = self.n_vertices as i64 - self.n_edges() as i64 + self.n_faces as i64;
        ((2 - chi) / 2) as usize
    }

    pub fn is_planar(&self) -> bool {
        self.genus() == 0
    }

    /// Graph distances from vertex `v0`, indexed by vertex.
    pub fn bfs_distances(&self, v0: usize) -> Result<Vec<usize>, MapError> {
        if v0 >= self.n_vertices {
            return Err(MapError::NoSuchVertex(v0));
        }
        let vertices = self.vertices();
        let mut dist = vec![usize::MAX; self.n_vertices];
        dist[v0] = 0;
        let mut queue = VecDeque::from([v0]);
        while let Some(v) = queue.pop_front() {
            for &d in &vertices[v] {
                let w = self.vertex_of[d ^ 1];
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    /// All ways to color the faces dark/light so that every edge has a dark
    /// face on one side and a light face on the other, and every dark face
    /// has degree `p`.
    pub fn hypermap_colorings(&self, p: usize) -> Vec<HypermapColoring> {
        let mut side = vec![None::<bool>; self.n_faces];
        side[0] = Some(false);
        let mut queue = VecDeque::from([0usize]);
        let faces = self.faces();
        while let Some(f) = queue.pop_front() {
            let here = side[f].expect("queued faces are colored");
            for &d in &faces[f] {
                let g = self.face_of[d ^ 1];
                match side[g] {
                    None => {
                        side[g] = Some(!here);
                        queue.push_back(g);
                    }
                    Some(c) if c == here => return Vec::new(),
                    Some(_) => {}
                }
            }
        }
        let base: Vec<bool> = side.into_iter().map(|c| c.expect("face graph is connected")).collect();
        let degrees = self.face_degrees();
        [base.clone(), base.into_iter().map(|c| !c).collect::<Vec<_>>()]
            .into_iter()
            .filter(|dark| dark.iter().zip(&degrees).all(|(&k, &deg)| !k || deg == p))
            .map(|dark| HypermapColoring { map: self.clone(), dark })
            .collect()
    }

    /// Relabels darts by a breadth-first walk from `root` (which becomes 0,
    /// its partner 1, then pairs in discovery order). Two rooted maps are
    /// isomorphic iff their canonical forms are equal.
    pub fn canonical_form(&self, root: usize) -> (Vec<usize>, Option<usize>) {
        let n = self.n_darts();
        let mut new = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        new[root] = 0;
        new[root ^ 1] = 1;
        order.extend([root, root ^ 1]);
        let mut i = 0;
        while i < order.len() {
            let s = self.sigma[order[i]];
            if new[s] == usize::MAX {
                let k = order.len();
                new[s] = k;
                new[s ^ 1] = k + 1;
                order.extend([s, s ^ 1]);
            }
            i += 1;
        }
        let sigma: Vec<usize> = order.iter().map(|&d| new[self.sigma[d]]).collect();
        let pointed = self.pointed_vertex.map(|v| {
            (0..n).filter(|&d| self.vertex_of[d] == v).map(|d| new[d]).min().expect("vertex has a dart")
        });
        (sigma, pointed)
    }

    pub fn to_json(&self) -> String {
        let j = MapJson {
            n_darts: self.n_darts(),
            pointed_vertex: self.pointed_vertex,
            sigma: self.sigma.clone(),
        };
        serde_json::to_string(&j).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        let j: MapJson = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
        if j.n_darts != j.sigma.len() {
            return Err(ParseError::Map(format!(
                "n_darts = {} but sigma has {} entries",
                j.n_darts,
                j.sigma.len()
            )));
        }
        let map = PlanarMap::new(j.sigma).map_err(|e| ParseError::Map(e.to_string()))?;
        match j.pointed_vertex {
            Some(v) => map.with_pointed_vertex(v).map_err(|e| ParseError::Map(e.to_string())),
            None => Ok(map),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypermapColoring {
    pub map: PlanarMap,
    /// Indexed by face id.
    pub dark: Vec<bool>,
}

impl HypermapColoring {
    pub fn light_faces(&self) -> Vec<usize> {
        (0..self.dark.len()).filter(|&f| !self.dark[f]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_edge() -> PlanarMap {
        PlanarMap::new(vec![0, 1]).unwrap()
    }

    fn loop_map() -> PlanarMap {
        PlanarMap::new(vec![1, 0]).unwrap()
    }

    /// Path u - v - w: edge (0,1) from u to v, edge (2,3) from v to w.
    fn path2() -> PlanarMap {
        PlanarMap::new(vec![0, 2, 1, 3]).unwrap()
    }

    #[test]
    fn orbit_examples() {
        let m = single_edge();
        assert_eq!((m.n_vertices(), m.n_faces(), m.genus()), (2, 1, 0));
        let l = loop_map();
        assert_eq!((l.n_vertices(), l.n_faces(), l.genus()), (1, 2, 0));
        assert_eq!(l.face_degrees(), vec![1, 1]);
        let torus = PlanarMap::new(vec![2, 3, 1, 0]).unwrap();
        assert_eq!(torus.n_vertices(), 1);
        assert_eq!(torus.n_faces(), 1);
        assert_eq!(torus.genus(), 1);
    }

    #[test]
    fn face_degrees_sum_to_darts() {
        let m = PlanarMap::new(vec![2, 3, 4, 5, 0, 1]).unwrap();
        assert_eq!(m.face_degrees().iter().sum::<usize>(), 6);
        assert_eq!(
            m.n_vertices() as i64 - m.n_edges() as i64 + m.n_faces() as i64 - 2,
            -2 * m.genus() as i64
        );
    }

    #[test]
    fn validation_errors() {
        assert_eq!(PlanarMap::new(vec![0]), Err(MapError::OddDarts(1)));
        assert_eq!(PlanarMap::new(vec![]), Err(MapError::OddDarts(0)));
        assert_eq!(PlanarMap::new(vec![0, 0]), Err(MapError::NotPermutation(2)));
        assert_eq!(PlanarMap::new(vec![0, 1, 2, 3]), Err(MapError::Disconnected));
        assert!(single_edge().with_pointed_vertex(2).is_err());
    }

    #[test]
    fn distances() {
        assert_eq!(single_edge().bfs_distances(0).unwrap(), vec![0, 1]);
        assert_eq!(loop_map().bfs_distances(0).unwrap(), vec![0]);
        let p = path2();
        let end = p.vertex_of(0);
        let mut d = p.bfs_distances(end).unwrap();
        d.sort();
        assert_eq!(d, vec![0, 1, 2]);
    }

    #[test]
    fn colorings() {
        assert!(loop_map().hypermap_colorings(2).is_empty());
        // two parallel edges between two vertices
        let double = PlanarMap::new(vec![2, 3, 0, 1]).unwrap();
        assert_eq!(double.face_degrees(), vec![2, 2]);
        let cs = double.hypermap_colorings(2);
        assert_eq!(cs.len(), 2);
        assert_eq!(cs[0].dark.iter().map(|&b| !b).collect::<Vec<_>>(), cs[1].dark);
        // triangle: darts 0->1 at a, 2->3 at b, 4->5 at c
        let tri = PlanarMap::new(vec![5, 2, 1, 4, 3, 0]).unwrap();
        assert_eq!((tri.n_vertices(), tri.n_faces()), (3, 2));
        assert_eq!(tri.hypermap_colorings(3).len(), 2);
        assert_eq!(tri.hypermap_colorings(2).len(), 0);
    }

    #[test]
    fn canonical_form_detects_isomorphism() {
        let a = PlanarMap::new(vec![0, 2, 1, 3]).unwrap();
        // same path with darts relabeled by swapping the edges
        let b = PlanarMap::new(vec![3, 1, 2, 0]).unwrap();
        let ca: Vec<_> = (0..4).map(|r| a.canonical_form(r)).collect();
        let cb: Vec<_> = (0..4).map(|r| b.canonical_form(r)).collect();
        for x in &ca {
            assert!(cb.contains(x));
        }
        assert_eq!(ca[0].0.len(), 4);
    }

    #[test]
    fn json_roundtrip() {
        let m = path2().with_pointed_vertex(1).unwrap();
        let s = m.to_json();
        assert_eq!(s, r#"{"n_darts":4,"pointed_vertex":1,"sigma":[0,2,1,3]}"#);
        assert_eq!(PlanarMap::from_json(&s).unwrap(), m);
        assert_eq!(PlanarMap::from_json(&s).unwrap().to_json(), s);
        assert!(PlanarMap::from_json(r#"{"n_darts":2,"sigma":[0,0]}"#).is_err());
        assert!(PlanarMap::from_json(r#"{"n_darts":4,"sigma":[0,1]}"#).is_err());
        assert!(PlanarMap::from_json("nope").is_err());
    }
}
