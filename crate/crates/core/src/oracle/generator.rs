//! Exhaustive generation of mobiles by recursive decomposition.
//!
//! Subtrees are generated bottom-up with memoization on
//! `(kind, parent kind, whites, blacks, darks)`. The local rules are
//! enforced at each vertex: no white-white edge, buds only at square
//! vertices, and at a black vertex either `#buds = #white neighbours`
//! (`p = 2`) or `degree - p * #buds` within the range allowed by its dark
//! neighbours (`p >= 3`). Global consistency of dark weights is left to
//! [`validate_mobile`](crate::mobile::validate_mobile).

use std::collections::HashMap;
use std::sync::Arc;

use crate::mobile::{Mobile, NodeKind};

/// A generated subtree.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Shape {
    pub kind: NodeKind,
    pub children: Vec<Arc<Shape>>,
}

impl Shape {
    pub fn to_mobile(&self) -> Mobile {
        let mut m = Mobile::new(self.kind);
        let mut stack = vec![(self, 0usize)];
        while let Some((s, id)) = stack.pop() {
            for c in &s.children {
                let cid = m.add_child(id, c.kind);
                stack.push((c, cid));
            }
        }
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Counts {
    white: usize,
    black: usize,
    dark: usize,
    bud: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Budget {
    w: usize,
    b: usize,
    k: usize,
}

impl Budget {
    fn minus(self, o: Budget) -> Option<Budget> {
        Some(Budget { w: self.w.checked_sub(o.w)?, b: self.b.checked_sub(o.b)?, k: self.k.checked_sub(o.k)? })
    }

    fn is_zero(self) -> bool {
        self.w == 0 && self.b == 0 && self.k == 0
    }
}

type List = Arc<Vec<Arc<Shape>>>;
type SeqList = Arc<Vec<Vec<Arc<Shape>>>>;

pub struct MobileGenerator {
    p: usize,
    max_degree: usize,
    /// Allow black-black edges (`p = 2`) or explicit dark squares (`p >= 3`).
    square_edges: bool,
    bud: Arc<Shape>,
    trees: HashMap<(NodeKind, Option<NodeKind>, Budget), List>,
    seqs: HashMap<(Counts, NodeKind, Budget), SeqList>,
}

impl MobileGenerator {
    pub fn new(p: u32, max_degree: usize, square_edges: bool) -> Self {
        assert!(p >= 2, "p must be at least 2");
        MobileGenerator {
            p: p as usize,
            max_degree,
            square_edges,
            bud: Arc::new(Shape { kind: NodeKind::Bud, children: Vec::new() }),
            trees: HashMap::new(),
            seqs: HashMap::new(),
        }
    }

    /// All subtrees with a root of `kind` below a parent of `parent` (or
    /// unrooted when `None`) with exactly the given numbers of white,
    /// black and explicit dark vertices.
    pub fn subtrees(
        &mut self,
        kind: NodeKind,
        parent: Option<NodeKind>,
        whites: usize,
        blacks: usize,
        darks: usize,
    ) -> List {
        self.trees_for(kind, parent, Budget { w: whites, b: blacks, k: darks })
    }

    fn trees_for(&mut self, kind: NodeKind, parent: Option<NodeKind>, budget: Budget) -> List {
        let key = (kind, parent, budget);
        if let Some(l) = self.trees.get(&key) {
            return l.clone();
        }
        let mut out = Vec::new();
        let own = match kind {
            NodeKind::White => Budget { w: 1, b: 0, k: 0 },
            NodeKind::Black => Budget { w: 0, b: 1, k: 0 },
            NodeKind::Dark => Budget { w: 0, b: 0, k: 1 },
            NodeKind::Bud => Budget { w: 0, b: 0, k: 0 },
        };
        if let Some(rest) = budget.minus(own) {
            for counts in self.child_counts(kind, parent, rest) {
                for seq in self.seqs_for(counts, kind, rest).iter() {
                    out.push(Arc::new(Shape { kind, children: seq.clone() }));
                }
            }
        }
        let l = Arc::new(out);
        self.trees.insert(key, l.clone());
        l
    }

    /// Feasible numbers of children of each kind.
    fn child_counts(&self, kind: NodeKind, parent: Option<NodeKind>, rest: Budget) -> Vec<Counts> {
        let p = self.p;
        let has_parent = usize::from(parent.is_some());
        let mut out = Vec::new();
        match kind {
            NodeKind::White => {
                if matches!(parent, Some(k) if k != NodeKind::Black) {
                    return out;
                }
                for black in 0..=rest.b {
                    out.push(Counts { white: 0, black, dark: 0, bud: 0 });
                }
            }
            NodeKind::Black => {
                let parent_white = usize::from(parent == Some(NodeKind::White));
                let parent_dark = usize::from(parent == Some(NodeKind::Dark));
                if parent == Some(NodeKind::Black) && (p > 2 || !self.square_edges) {
                    return out;
                }
                if parent_dark == 1 && (p == 2 || !self.square_edges) {
                    return out;
                }
                let max_black = if p == 2 && self.square_edges { rest.b } else { 0 };
                let max_dark = if p > 2 && self.square_edges { rest.k } else { 0 };
                for white in 0..=rest.w {
                    for black in 0..=max_black {
                        for dark in 0..=max_dark {
                            let fixed = white + black + dark + has_parent;
                            if fixed > self.max_degree {
                                continue;
                            }
                            for bud in 0..=self.max_degree - fixed {
                                let degree = fixed + bud;
                                if degree == 0 {
                                    continue;
                                }
                                let ok = if p == 2 {
                                    bud == white + parent_white
                                } else {
                                    let kd = dark + parent_dark;
                                    let target = degree as i64 - (p * bud) as i64;
                                    if kd == 0 {
                                        target == 0
                                    } else {
                                        target >= kd as i64 && target <= (kd * (p - 1)) as i64
                                    }
                                };
                                if ok {
                                    out.push(Counts { white, black, dark, bud });
                                }
                            }
                        }
                    }
                }
            }
            NodeKind::Dark => {
                if parent != Some(NodeKind::Black) || p == 2 {
                    return out;
                }
                for black in 1..=rest.b.min(p - 1) {
                    out.push(Counts { white: 0, black, dark: 0, bud: p - 1 - black });
                }
            }
            NodeKind::Bud => {
                if parent.is_some() {
                    out.push(Counts { white: 0, black: 0, dark: 0, bud: 0 });
                }
            }
        }
        out
    }

    /// All ordered child sequences with the given kind counts, using up
    /// exactly `budget`, below a vertex of kind `parent`.
    fn seqs_for(&mut self, counts: Counts, parent: NodeKind, budget: Budget) -> SeqList {
        let key = (counts, parent, budget);
        if let Some(l) = self.seqs.get(&key) {
            return l.clone();
        }
        let mut out: Vec<Vec<Arc<Shape>>> = Vec::new();
        if counts == (Counts { white: 0, black: 0, dark: 0, bud: 0 }) {
            if budget.is_zero() {
                out.push(Vec::new());
            }
        } else {
            if counts.bud > 0 {
                let rest = Counts { bud: counts.bud - 1, ..counts };
                for tail in self.seqs_for(rest, parent, budget).iter() {
                    let mut v = Vec::with_capacity(tail.len() + 1);
                    v.push(self.bud.clone());
                    v.extend(tail.iter().cloned());
                    out.push(v);
                }
            }
            let kinds = [
                (NodeKind::White, counts.white),
                (NodeKind::Black, counts.black),
                (NodeKind::Dark, counts.dark),
            ];
            for (kind, n) in kinds {
                if n == 0 {
                    continue;
                }
                let rest = match kind {
                    NodeKind::White => Counts { white: n - 1, ..counts },
                    NodeKind::Black => Counts { black: n - 1, ..counts },
                    _ => Counts { dark: n - 1, ..counts },
                };
                // every remaining child needs at least its own vertex
                let reserve = Budget { w: rest.white, b: rest.black, k: rest.dark };
                let Some(avail) = budget.minus(reserve) else { continue };
                for w in 0..=avail.w {
                    for b in 0..=avail.b {
                        for k in 0..=avail.k {
                            let part = Budget { w, b, k };
                            let heads = self.trees_for(kind, Some(parent), part);
                            if heads.is_empty() {
                                continue;
                            }
                            let tails = self.seqs_for(rest, parent, budget.minus(part).expect("part fits"));
                            for h in heads.iter() {
                                for t in tails.iter() {
                                    let mut v = Vec::with_capacity(t.len() + 1);
                                    v.push(h.clone());
                                    v.extend(t.iter().cloned());
                                    out.push(v);
                                }
                            }
                        }
                    }
                }
            }
        }
        let l = Arc::new(out);
        self.seqs.insert(key, l.clone());
        l
    }

    /// Every mobile rooted at a vertex of `root` kind with at most the
    /// given numbers of vertices of each kind.
    pub fn all_rooted(&mut self, root: NodeKind, whites: usize, blacks: usize, darks: usize) -> Vec<Arc<Shape>> {
        let mut out = Vec::new();
        for w in 0..=whites {
            for b in 0..=blacks {
                for k in 0..=darks {
                    out.extend(self.subtrees(root, None, w, b, k).iter().cloned());
                }
            }
        }
        out
    }
}
