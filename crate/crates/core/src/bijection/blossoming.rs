//! Rooted p-mobiles and planted blossoming p-trees.
//!
//! A rooted mobile is either a lone white vertex (a leaf) or splits at the
//! first black child `L` of its root white vertex. If `L` has degree `pi`,
//! it carries `i` big buds among its `pi - 1` other slots, in one of
//! `C(pi-1, i)` arrangements, and `(p-1)i - 1` white children, each the
//! root of a smaller rooted mobile. The rest of the root vertex (its later
//! black children) is one more rooted mobile. A blossoming node of arity
//! `(p-1)i` has the same number of subtrees, and its `p - 1` dark slots
//! times `C(pi-1, i-1)` big bud placements give the same number of
//! arrangements. Arrangements are matched through
//! `rank = dark_slot * C(pi-1, i-1) + rank_of_big_buds`.

use crate::error::BijectionError;
use crate::mobile::{BlossomItem, BlossomingTree, Mobile, NodeKind};
use crate::numeric::{binomial, rank_subset, unrank_subset, Integer};

fn invalid(msg: impl Into<String>) -> BijectionError {
    BijectionError::InvalidInput(msg.into())
}

/// Inverse of [`blossoming_to_mobile`]. The mobile must be a p-mobile
/// without explicit dark vertices, rooted at a white vertex.
pub fn mobile_to_blossoming(m: &Mobile, p: u32) -> Result<BlossomingTree, BijectionError> {
    if p < 2 {
        return Err(invalid("p must be at least 2"));
    }
    if m.kind(m.root()) != NodeKind::White {
        return Err(invalid("the mobile must be rooted at a white vertex"));
    }
    split_at(m, p as usize, m.root(), 0)
}

fn split_at(m: &Mobile, p: usize, w: usize, from: usize) -> Result<BlossomingTree, BijectionError> {
    let kids = &m.node(w).children;
    if from == kids.len() {
        return Ok(BlossomingTree::Leaf);
    }
    let l = kids[from];
    if m.kind(l) != NodeKind::Black {
        return Err(invalid("white vertices may only have black neighbours"));
    }
    let slots = &m.node(l).children;
    let degree = slots.len() + 1;
    let buds: Vec<usize> = (0..slots.len()).filter(|&j| m.kind(slots[j]) == NodeKind::Bud).collect();
    let i = buds.len();
    if degree != p * i {
        return Err(invalid(format!("black vertex of degree {degree} with {i} buds is not p-regular")));
    }
    let rank = rank_subset(degree - 1, &buds);
    let per_slot = binomial((degree - 1) as u64, i as i64 - 1);
    let dark_slot = &rank / &per_slot;
    let rest = rank - &dark_slot * &per_slot;
    let big_buds = unrank_subset(degree - 1, i - 1, &rest).expect("rank is in range");
    let mut subtrees = Vec::new();
    for &c in slots {
        match m.kind(c) {
            NodeKind::Bud => {}
            NodeKind::White => subtrees.push(split_at(m, p, c, 0)?),
            _ => return Err(invalid("black vertices may only carry white vertices and buds")),
        }
    }
    subtrees.push(split_at(m, p, w, from + 1)?);
    let mut subtrees = subtrees.into_iter();
    let items = (0..degree - 1)
        .map(|j| {
            if big_buds.contains(&j) {
                BlossomItem::BigBud
            } else {
                BlossomItem::Child(subtrees.next().expect("one subtree per child slot"))
            }
        })
        .collect();
    Ok(BlossomingTree::Node { dark_slot: u32::try_from(dark_slot).expect("dark slot is below p"), items })
}

/// The rooted p-mobile of a planted blossoming p-tree: leaves become white
/// vertices and internal vertices of arity `(p-1)i` black vertices of
/// degree `pi`.
pub fn blossoming_to_mobile(t: &BlossomingTree, p: u32) -> Result<Mobile, BijectionError> {
    if p < 2 || !t.is_valid(p) {
        return Err(invalid("not a blossoming tree for this p"));
    }
    let mut m = Mobile::new(NodeKind::White);
    attach(&mut m, p as usize, 0, t);
    Ok(m)
}

fn attach(m: &mut Mobile, p: usize, w: usize, t: &BlossomingTree) {
    let BlossomingTree::Node { dark_slot, items } = t else {
        return;
    };
    let degree = items.len() + 1;
    let i = degree / p;
    let big_buds: Vec<usize> = (0..items.len()).filter(|&j| items[j] == BlossomItem::BigBud).collect();
    let per_slot = binomial((degree - 1) as u64, i as i64 - 1);
    let rank = Integer::from(*dark_slot) * per_slot + rank_subset(degree - 1, &big_buds);
    let buds = unrank_subset(degree - 1, i, &rank).expect("rank is in range");
    let children: Vec<&BlossomingTree> = items
        .iter()
        .filter_map(|it| match it {
            BlossomItem::Child(c) => Some(c),
            BlossomItem::BigBud => None,
        })
        .collect();
    let l = m.add_child(w, NodeKind::Black);
    let mut next = 0;
    for j in 0..degree - 1 {
        if buds.contains(&j) {
            m.add_child(l, NodeKind::Bud);
        } else {
            let c = m.add_child(l, NodeKind::White);
            attach(m, p, c, children[next]);
            next += 1;
        }
    }
    attach(m, p, w, children[next]);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mobile::{validate_mobile, MobileClass};

    fn node(dark_slot: u32, items: Vec<BlossomItem>) -> BlossomingTree {
        BlossomingTree::Node { dark_slot, items }
    }

    fn leaf() -> BlossomItem {
        BlossomItem::Child(BlossomingTree::Leaf)
    }

    #[test]
    fn leaf_is_a_lone_white() {
        let m = blossoming_to_mobile(&BlossomingTree::Leaf, 2).unwrap();
        assert_eq!(m.encode(), "W()");
        assert_eq!(mobile_to_blossoming(&m, 2).unwrap(), BlossomingTree::Leaf);
    }

    #[test]
    fn small_trees_roundtrip() {
        let trees = [
            (2, node(0, vec![leaf()])),
            (2, node(0, vec![leaf(), BlossomItem::BigBud, leaf()])),
            (3, node(1, vec![leaf(), leaf()])),
            (3, node(0, vec![leaf(), BlossomItem::Child(node(1, vec![leaf(), leaf()]))])),
        ];
        for (p, t) in trees {
            let m = blossoming_to_mobile(&t, p).unwrap();
            let regular = if p == 2 { MobileClass::Bipartite } else { MobileClass::PRegular };
            assert_eq!(validate_mobile(&m, p), regular);
            assert_eq!(m.whites(), t.leaves());
            assert_eq!(m.black_degrees(), t.degrees(p));
            assert_eq!(mobile_to_blossoming(&m, p).unwrap(), t);
        }
    }

    #[test]
    fn invalid_trees_are_rejected() {
        assert!(blossoming_to_mobile(&node(1, vec![leaf()]), 2).is_err());
        assert!(blossoming_to_mobile(&node(0, vec![leaf(), leaf()]), 2).is_err());
    }
}
