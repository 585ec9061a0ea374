//! From a pointed planar map to its mobile.
//!
//! Every vertex but the pointed one `v0` becomes a white vertex and every
//! face a black vertex. A dart `g` of face `f` gives one half-edge at the
//! black vertex of `f`:
//!
//! - `g` goes one step closer to `v0`: an edge to the origin of `g`;
//! - `g` goes one step away from `v0`: a bud;
//! - both ends at the same distance: an edge to the face on the other side.
//!
//! Around a black vertex the half-edges follow the face boundary backwards,
//! around a white vertex they follow the vertex rotation.

use std::cmp::Ordering;

use crate::error::MapError;
use crate::map::PlanarMap;
use crate::mobile::{Mobile, NodeKind};

/// Mobile of `map` pointed at `v0`, rooted at the half-edge of dart 0.
pub fn bdg_forward(map: &PlanarMap, v0: usize) -> Result<Mobile, MapError> {
    bdg_forward_rooted(map, v0, 0)
}

/// Mobile of `map` pointed at `v0`, rooted at the black corner right
/// before the half-edge coming from `root_dart`.
pub fn bdg_forward_rooted(map: &PlanarMap, v0: usize, root_dart: usize) -> Result<Mobile, MapError> {
    if !map.is_planar() {
        return Err(MapError::NotPlanar(map.genus()));
    }
    let n = map.n_darts();
    if root_dart >= n {
        return Err(MapError::NotPermutation(n));
    }
    let dist = map.bfs_distances(v0)?;
    let sigma = map.sigma();
    let mut sigma_inv = vec![0; n];
    for (d, &s) in sigma.iter().enumerate() {
        sigma_inv[s] = d;
    }
    let phi_inv = |e: usize| sigma_inv[e] ^ 1;
    let step = |g: usize| dist[map.vertex_of(g)].cmp(&dist[map.vertex_of(g ^ 1)]);

    enum Task {
        Black { id: usize, entry: usize, is_root: bool },
        White { id: usize, entry: usize },
    }
    let mut m = Mobile::new(NodeKind::Black);
    let mut tasks = vec![Task::Black { id: 0, entry: root_dart, is_root: true }];
    while let Some(task) = tasks.pop() {
        match task {
            Task::Black { id, entry, is_root } => {
                let mut darts = Vec::new();
                if is_root {
                    darts.push(entry);
                }
                let mut g = phi_inv(entry);
                while g != entry {
                    darts.push(g);
                    g = phi_inv(g);
                }
                for g in darts {
                    match step(g) {
                        Ordering::Greater => {
                            let c = m.add_child(id, NodeKind::White);
                            tasks.push(Task::White { id: c, entry: g });
                        }
                        Ordering::Less => {
                            m.add_child(id, NodeKind::Bud);
                        }
                        Ordering::Equal => {
                            let c = m.add_child(id, NodeKind::Black);
                            tasks.push(Task::Black { id: c, entry: g ^ 1, is_root: false });
                        }
                    }
                }
            }
            Task::White { id, entry } => {
                let mut d = sigma[entry];
                while d != entry {
                    if step(d) == Ordering::Greater {
                        let c = m.add_child(id, NodeKind::Black);
                        tasks.push(Task::Black { id: c, entry: d, is_root: false });
                    }
                    d = sigma[d];
                }
            }
        }
        assert!(m.preorder().len() <= 2 * n + 1, "mobile construction did not close up into a tree");
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mobile::{validate_mobile, MobileClass};

    #[test]
    fn single_edge() {
        let map = PlanarMap::new(vec![0, 1]).unwrap();
        let m = bdg_forward(&map, 0).unwrap();
        assert_eq!(m.whites(), 1);
        assert_eq!(m.black_degrees(), vec![2]);
        assert_eq!(validate_mobile(&m, 2), MobileClass::Bipartite);
    }

    #[test]
    fn loop_gives_two_joined_blacks() {
        let map = PlanarMap::new(vec![1, 0]).unwrap();
        let m = bdg_forward(&map, 0).unwrap();
        assert_eq!(m.encode(), "B(B())");
        assert_eq!(validate_mobile(&m, 2), MobileClass::QuasiBipartite);
    }

    #[test]
    fn triangle_is_quasi_bipartite() {
        let map = PlanarMap::new(vec![5, 2, 1, 4, 3, 0]).unwrap();
        for v0 in 0..3 {
            let m = bdg_forward(&map, v0).unwrap();
            assert_eq!(m.whites(), 2);
            assert_eq!(m.black_degrees(), vec![3, 3]);
            assert_eq!(validate_mobile(&m, 2), MobileClass::QuasiBipartite);
        }
    }

    #[test]
    fn torus_is_rejected() {
        let map = PlanarMap::new(vec![2, 3, 1, 0]).unwrap();
        assert!(matches!(bdg_forward(&map, 0), Err(MapError::NotPlanar(1))));
    }

    #[test]
    fn rooted_images_follow_rooted_maps() {
        // path of two edges
        let map = PlanarMap::new(vec![0, 2, 1, 3]).unwrap();
        for v0 in 0..map.n_vertices() {
            let pointed = map.clone().with_pointed_vertex(v0).unwrap();
            let mut codes = std::collections::BTreeSet::new();
            let mut forms = std::collections::BTreeSet::new();
            for d in 0..map.n_darts() {
                forms.insert(pointed.canonical_form(d));
                let m = bdg_forward_rooted(&map, v0, d).unwrap();
                assert_eq!(m.whites(), 2);
                assert_eq!(validate_mobile(&m, 2), MobileClass::Bipartite);
                codes.insert(m.encode());
            }
            assert_eq!(codes.len(), forms.len());
        }
    }
}
