//! Aggregating a forest of rooted mobiles into one mobile with several
//! marked black vertices, and splitting it back.
//!
//! The components of the forest are cut into consecutive groups of sizes
//! `(p-1)a_1, ..., (p-1)a_r`; group `i` hangs below a new black vertex `b_i`
//! (marked `i`) whose children are the group's root white vertices. The
//! forest also carries white vertices marked `1..=r-1`. Step `k` of the
//! aggregation takes the white vertex `w` carrying mark `r-k`, picks one of
//! the other trees (rooted at some `b_j`), and merges the last child `u` of
//! `b_j` into `w`: `w` gains `b_j` and then the children of `u` as its last
//! children. The mark of `w` is used up and the mark of `u`, if any, moves
//! to `w`. Each white vertex carries at most one mark throughout.
//!
//! Choices index the eligible trees (or, when splitting, the non-root
//! marked black vertices), sorted by the mark of their black vertex.

use crate::error::BijectionError;
use crate::mobile::{Mobile, MobileForest, NodeKind};

/// Result of [`disaggregate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disaggregated {
    pub forest: MobileForest,
    /// `a_1, ..., a_r`.
    pub groups: Vec<usize>,
    /// Choices that make [`aggregate`] return the input mobile.
    pub merge_choices: Vec<usize>,
}

fn invalid(msg: impl Into<String>) -> BijectionError {
    BijectionError::InvalidInput(msg.into())
}

fn pick<T: Copy>(options: &[T], step: usize, index: usize) -> Result<T, BijectionError> {
    options.get(index).copied().ok_or(BijectionError::InvalidChoice { step, index, available: options.len() })
}

/// Aggregates `forest` with groups `a_1..a_r` and the given merge choices.
/// Returns the mobile, rooted at the corner of the last remaining tree's
/// black vertex before its first child, together with the split choices
/// that undo it.
pub fn aggregate(
    forest: &MobileForest,
    groups: &[usize],
    p: u32,
    choices: &[usize],
) -> Result<(Mobile, Vec<usize>), BijectionError> {
    let r = groups.len();
    if r == 0 || p < 2 {
        return Err(invalid("at least one group and p >= 2 are required"));
    }
    let q = p as usize - 1;
    if groups.contains(&0) || groups.iter().sum::<usize>() * q != forest.components.len() {
        return Err(invalid(format!(
            "{} components cannot be grouped as (p-1) * {:?}",
            forest.components.len(),
            groups
        )));
    }
    if choices.len() != r - 1 {
        return Err(invalid(format!("expected {} choices, got {}", r - 1, choices.len())));
    }
    let marks = forest.marks();
    let expected: Vec<u32> = (1..r as u32).collect();
    if marks.iter().map(|m| m.0).collect::<Vec<_>>() != expected {
        return Err(invalid(format!("forest must mark white vertices 1..={} once each", r - 1)));
    }

    // Copy everything into one arena; tree[i] is the tree index of a node.
    let mut m = Mobile::new(NodeKind::Black);
    let mut tree = vec![0usize];
    let mut blacks = vec![0usize];
    for j in 1..r {
        blacks.push(m.add_detached(NodeKind::Black));
        tree.push(j);
    }
    let mut mark_at = vec![usize::MAX; r];
    let mut comp = 0;
    for (j, &a) in groups.iter().enumerate() {
        m.set_mark(blacks[j], Some(j as u32 + 1));
        for _ in 0..a * q {
            let c = &forest.components[comp];
            comp += 1;
            if c.kind(c.root()) != NodeKind::White {
                return Err(invalid("forest components must be rooted at white vertices"));
            }
            let top = m.add_child(blacks[j], NodeKind::White);
            tree.push(j);
            let mut stack = vec![(c.root(), top)];
            while let Some((old, id)) = stack.pop() {
                if let Some(k) = c.node(old).mark {
                    if c.kind(old) != NodeKind::White {
                        return Err(invalid("only white vertices can carry forest marks"));
                    }
                    m.set_mark(id, Some(k));
                    mark_at[k as usize] = id;
                }
                for &ch in &c.node(old).children {
                    let cid = m.add_child(id, c.kind(ch));
                    tree.push(j);
                    stack.push((ch, cid));
                }
            }
        }
    }
    let mut owner: Vec<usize> = (0..r).collect();
    let find = |owner: &Vec<usize>, mut x: usize| {
        while owner[x] != x {
            x = owner[x];
        }
        x
    };
    let mut roots: Vec<usize> = (0..r).collect();
    let mut merged: Vec<usize> = Vec::new();
    let mut split = vec![0usize; r - 1];
    for (step, &choice) in choices.iter().enumerate() {
        let target_mark = r - 1 - step;
        let w = mark_at[target_mark];
        let home = find(&owner, tree[w]);
        let eligible: Vec<usize> = roots.iter().copied().filter(|&j| j != home).collect();
        let j = pick(&eligible, step, choice)?;
        let bj = blacks[j];
        let u = m.node_mut(bj).children.pop().ok_or_else(|| invalid("group vertex without children"))?;
        let mut moved = vec![bj];
        moved.extend(m.node(u).children.iter().copied());
        m.node_mut(w).children.extend(moved);
        let carried = m.node(u).mark;
        m.set_mark(w, carried);
        if let Some(k) = carried {
            mark_at[k as usize] = w;
        }
        owner[j] = home;
        roots.retain(|&x| x != j);
        merged.push(j);
        merged.sort_unstable();
        split[r - 2 - step] = merged.iter().position(|&x| x == j).expect("just inserted");
    }
    m.set_root(blacks[roots[0]]);
    Ok((m.compact(), split))
}

/// Splits a mobile whose black vertices marked `1..=r` carry no buds and
/// whose root is one of them. Returns the forest, the group sizes and the
/// merge choices that rebuild the input.
pub fn disaggregate(mobile: &Mobile, p: u32, choices: &[usize]) -> Result<Disaggregated, BijectionError> {
    if p < 2 {
        return Err(invalid("p must be at least 2"));
    }
    let q = p as usize - 1;
    let mut m = mobile.compact();
    let marked: Vec<(u32, usize)> =
        m.marked().into_iter().filter(|&(_, v)| m.kind(v) == NodeKind::Black).collect();
    let r = marked.len();
    if r == 0 || marked.iter().enumerate().any(|(i, &(k, _))| k as usize != i + 1) {
        return Err(invalid("black vertices must be marked 1..=r"));
    }
    if m.marked().len() != r {
        return Err(invalid("only black vertices can be marked"));
    }
    let blacks: Vec<usize> = marked.iter().map(|&(_, v)| v).collect();
    if !blacks.contains(&m.root()) {
        return Err(invalid("the root must be a marked black vertex"));
    }
    if choices.len() != r - 1 {
        return Err(invalid(format!("expected {} choices, got {}", r - 1, choices.len())));
    }
    let mut parent = m.parents();
    let mut merge = vec![0usize; r - 1];
    for (step, &choice) in choices.iter().enumerate() {
        let k = step + 1;
        let eligible: Vec<usize> = (0..r).filter(|&j| parent[blacks[j]].is_some()).collect();
        let j = pick(&eligible, step, choice)?;
        let b = blacks[j];
        let w = parent[b].expect("eligible vertices have a parent");
        if m.kind(w) != NodeKind::White {
            return Err(invalid("a marked black vertex hangs below a non-white vertex"));
        }
        let pos = m.node(w).children.iter().position(|&c| c == b).expect("child of its parent");
        let after = m.node_mut(w).children.split_off(pos + 1);
        m.node_mut(w).children.pop();
        let u = m.add_detached(NodeKind::White);
        parent.push(Some(b));
        for &c in &after {
            parent[c] = Some(u);
        }
        m.node_mut(u).children = after;
        m.node_mut(b).children.push(u);
        parent[b] = None;
        let carried = m.node(w).mark;
        m.set_mark(u, carried);
        m.set_mark(w, Some(k as u32));
        // forward step r-1-k merged b into the tree containing w
        let mut top = w;
        while let Some(x) = parent[top] {
            top = x;
        }
        let roots: Vec<usize> = (0..r).filter(|&i| parent[blacks[i]].is_none() && blacks[i] != top).collect();
        merge[r - 1 - k] = roots.iter().position(|&i| i == j).expect("b is now a root");
    }
    let mut components = Vec::new();
    let mut groups = Vec::new();
    for &b in &blacks {
        let kids = m.node(b).children.clone();
        if kids.is_empty() || kids.len() % q != 0 {
            return Err(invalid(format!("marked black vertex has {} neighbours, not a multiple of p - 1", kids.len())));
        }
        for &c in &kids {
            if m.kind(c) != NodeKind::White {
                return Err(invalid("marked black vertices must only have white neighbours"));
            }
            components.push(m.subtree(c));
        }
        groups.push(kids.len() / q);
    }
    Ok(Disaggregated { forest: MobileForest { components }, groups, merge_choices: merge })
}
