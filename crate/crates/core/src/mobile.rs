//! Mobiles: plane trees with round (white), light square (black) and dark
//! square vertices, and buds.
//!
//! A [`Mobile`] is stored as an arena of nodes with ordered children. The
//! counterclockwise order around a node is its parent followed by its
//! children; at the root it is just the children, and the root corner sits
//! before the first child.
//!
//! Buds are leaf nodes of kind [`NodeKind::Bud`]. Under a black vertex a bud
//! stands for a big bud, i.e. a dark square of degree `p` with `p - 1` plain
//! buds and no other neighbour (for `p = 2` this is an ordinary bud). Under
//! a dark square it is a plain bud. Dark squares are only stored explicitly
//! when they have at least two light neighbours; for `p = 2` such a dark
//! square is just an edge between two black vertices, and is stored that way.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde_json::{json, Value};

use crate::error::{BijectionError, ParseError};
use crate::numeric::{binomial, Integer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    White,
    Black,
    Dark,
    Bud,
}

impl NodeKind {
    fn code(self) -> char {
        match self {
            NodeKind::White => 'W',
            NodeKind::Black => 'B',
            NodeKind::Dark => 'D',
            NodeKind::Bud => 'o',
        }
    }

    fn color(self) -> &'static str {
        match self {
            NodeKind::White => "white",
            NodeKind::Black => "black",
            NodeKind::Dark | NodeKind::Bud => "dark",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    pub kind: NodeKind,
    pub children: Vec<usize>,
    pub mark: Option<u32>,
}

#[derive(Clone)]
pub struct Mobile {
    nodes: Vec<Node>,
    root: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MobileClass {
    Bipartite,
    QuasiBipartite,
    PRegular,
    QuasiP,
    /// A valid mobile with more than two non-regular black vertices.
    General,
    Invalid,
}

impl fmt::Display for MobileClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MobileClass::Bipartite => "bipartite",
            MobileClass::QuasiBipartite => "quasi-bipartite",
            MobileClass::PRegular => "p-regular",
            MobileClass::QuasiP => "quasi-p",
            MobileClass::General => "general",
            MobileClass::Invalid => "invalid",
        };
        f.write_str(s)
    }
}

impl Mobile {
    pub fn new(root_kind: NodeKind) -> Self {
        Mobile { nodes: vec![Node { kind: root_kind, children: Vec::new(), mark: None }], root: 0 }
    }

    /// Appends a new last child to `parent` and returns its id.
    pub fn add_child(&mut self, parent: usize, kind: NodeKind) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node { kind, children: Vec::new(), mark: None });
        self.nodes[parent].children.push(id);
        id
    }

    /// Adds a node with no parent yet; link it with `children` edits.
    pub fn add_detached(&mut self, kind: NodeKind) -> usize {
        self.nodes.push(Node { kind, children: Vec::new(), mark: None });
        self.nodes.len() - 1
    }

    /// Number of nodes in the arena, reachable or not.
    pub fn count_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn set_root(&mut self, root: usize) {
        self.root = root;
    }

    pub fn node(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub fn node_mut(&mut self, i: usize) -> &mut Node {
        &mut self.nodes[i]
    }

    pub fn kind(&self, i: usize) -> NodeKind {
        self.nodes[i].kind
    }

    pub fn set_mark(&mut self, i: usize, mark: Option<u32>) {
        self.nodes[i].mark = mark;
    }

    /// Node ids reachable from the root, in preorder.
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.nodes[v].children.iter().rev());
        }
        out
    }

    /// Parent of each node reachable from the root.
    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.nodes.len()];
        for v in self.preorder() {
            for &c in &self.nodes[v].children {
                parent[c] = Some(v);
            }
        }
        parent
    }

    /// Counterclockwise neighbour lists, parent first.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let parent = self.parents();
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for v in self.preorder() {
            if let Some(p) = parent[v] {
                adj[v].push(p);
            }
            adj[v].extend(self.nodes[v].children.iter().copied());
        }
        adj
    }

    /// Number of incident half-edges, buds included.
    pub fn degree(&self, v: usize, parent: &[Option<usize>]) -> usize {
        self.nodes[v].children.len() + usize::from(parent[v].is_some())
    }

    pub fn count(&self, kind: NodeKind) -> usize {
        self.preorder().into_iter().filter(|&v| self.nodes[v].kind == kind).count()
    }

    pub fn whites(&self) -> usize {
        self.count(NodeKind::White)
    }

    /// Sorted degrees of the black vertices, skipping the given ones.
    pub fn black_degrees_except(&self, skip: &[usize]) -> Vec<usize> {
        let parent = self.parents();
        let mut out: Vec<usize> = self
            .preorder()
            .into_iter()
            .filter(|&v| self.nodes[v].kind == NodeKind::Black && !skip.contains(&v))
            .map(|v| self.degree(v, &parent))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn black_degrees(&self) -> Vec<usize> {
        self.black_degrees_except(&[])
    }

    /// Nodes carrying a mark, by mark value.
    pub fn marked(&self) -> BTreeMap<u32, usize> {
        self.preorder().into_iter().filter_map(|v| self.nodes[v].mark.map(|m| (m, v))).collect()
    }

    /// Same tree rooted at `v`, with the root corner right before the
    /// neighbour `adjacency()[v][start]`.
    pub fn rerooted(&self, v: usize, start: usize) -> Mobile {
        let adj = self.adjacency();
        let mut out = Mobile::new(self.nodes[v].kind);
        out.nodes[0].mark = self.nodes[v].mark;
        let k = adj[v].len();
        // (old node, new id, old parent)
        let mut stack: Vec<(usize, usize, usize)> = Vec::new();
        let first: Vec<usize> = (0..k).map(|j| adj[v][(start + j) % k.max(1)]).collect();
        for c in first {
            let id = out.add_child(0, self.nodes[c].kind);
            out.nodes[id].mark = self.nodes[c].mark;
            stack.push((c, id, v));
        }
        while let Some((old, new, from)) = stack.pop() {
            let nbrs = &adj[old];
            let pos = nbrs.iter().position(|&x| x == from).expect("parent is a neighbour");
            let m = nbrs.len();
            for j in 1..m {
                let c = nbrs[(pos + j) % m];
                let id = out.add_child(new, self.nodes[c].kind);
                out.nodes[id].mark = self.nodes[c].mark;
                stack.push((c, id, old));
            }
        }
        out
    }

    /// The subtree below `v` as a mobile rooted at `v` (the root corner is
    /// where the parent edge was).
    pub fn subtree(&self, v: usize) -> Mobile {
        let mut out = Mobile::new(self.nodes[v].kind);
        out.nodes[0].mark = self.nodes[v].mark;
        let mut stack = vec![(v, 0usize)];
        while let Some((old, new)) = stack.pop() {
            for &c in &self.nodes[old].children {
                let id = out.add_child(new, self.nodes[c].kind);
                out.nodes[id].mark = self.nodes[c].mark;
                stack.push((c, id));
            }
        }
        out
    }

    /// Path of node ids from `a` to `b`.
    pub fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let adj = self.adjacency();
        let mut prev = vec![usize::MAX; self.nodes.len()];
        prev[a] = a;
        let mut queue = VecDeque::from([a]);
        while let Some(v) = queue.pop_front() {
            if v == b {
                break;
            }
            for &w in &adj[v] {
                if prev[w] == usize::MAX {
                    prev[w] = v;
                    queue.push_back(w);
                }
            }
        }
        let mut path = vec![b];
        let mut v = b;
        while v != a {
            v = prev[v];
            path.push(v);
        }
        path.reverse();
        path
    }

    /// Canonical string of the rooted tree: equal strings iff equal rooted
    /// mobiles (marks included).
    pub fn encode(&self) -> String {
        let mut out = String::new();
        self.encode_into(self.root, &mut out);
        out
    }

    fn encode_into(&self, v: usize, out: &mut String) {
        let n = &self.nodes[v];
        out.push(n.kind.code());
        if let Some(m) = n.mark {
            out.push_str(&format!("[{m}]"));
        }
        if n.kind != NodeKind::Bud {
            out.push('(');
            for &c in &n.children {
                self.encode_into(c, out);
            }
            out.push(')');
        }
    }

    /// Copy containing only the nodes reachable from the root, renumbered
    /// in preorder.
    pub fn compact(&self) -> Mobile {
        let order = self.preorder();
        let mut id = vec![usize::MAX; self.nodes.len()];
        for (i, &v) in order.iter().enumerate() {
            id[v] = i;
        }
        let nodes = order
            .iter()
            .map(|&v| Node {
                kind: self.nodes[v].kind,
                children: self.nodes[v].children.iter().map(|&c| id[c]).collect(),
                mark: self.nodes[v].mark,
            })
            .collect();
        Mobile { nodes, root: 0 }
    }

    pub fn to_json_value(&self) -> Value {
        self.json_of(self.root, None)
    }

    fn json_of(&self, v: usize, parent: Option<NodeKind>) -> Value {
        let n = &self.nodes[v];
        let color = match (n.kind, parent) {
            (NodeKind::Bud, Some(k)) => k.color(),
            (k, _) => k.color(),
        };
        let children: Vec<Value> = n.children.iter().map(|&c| self.json_of(c, Some(n.kind))).collect();
        let mut obj = json!({ "bud": n.kind == NodeKind::Bud, "children": children, "color": color });
        if let Some(m) = n.mark {
            obj["mark"] = json!(m);
        }
        obj
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Mobile, ParseError> {
        let v: Value = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
        Mobile::from_json_value(&v)
    }

    pub fn from_json_value(v: &Value) -> Result<Mobile, ParseError> {
        let kind = parse_kind(v)?;
        if kind == NodeKind::Bud {
            return Err(ParseError::Mobile("the root cannot be a bud".into()));
        }
        let mut m = Mobile::new(kind);
        m.nodes[0].mark = parse_mark(v)?;
        let mut stack = vec![(v, 0usize)];
        while let Some((val, id)) = stack.pop() {
            for c in children_of(val)? {
                let k = parse_kind(c)?;
                let cid = m.add_child(id, k);
                m.nodes[cid].mark = parse_mark(c)?;
                if k == NodeKind::Bud && !children_of(c)?.is_empty() {
                    return Err(ParseError::Mobile("a bud cannot have children".into()));
                }
                stack.push((c, cid));
            }
        }
        Ok(m)
    }
}

fn children_of(v: &Value) -> Result<&Vec<Value>, ParseError> {
    match v.get("children") {
        None => Err(ParseError::Mobile("missing `children`".into())),
        Some(Value::Array(a)) => Ok(a),
        Some(_) => Err(ParseError::Mobile("`children` must be an array".into())),
    }
}

fn parse_kind(v: &Value) -> Result<NodeKind, ParseError> {
    let bud = v.get("bud").and_then(Value::as_bool).unwrap_or(false);
    if bud {
        return Ok(NodeKind::Bud);
    }
    match v.get("color").and_then(Value::as_str) {
        Some("white") => Ok(NodeKind::White),
        Some("black") => Ok(NodeKind::Black),
        Some("dark") => Ok(NodeKind::Dark),
        Some(c) => Err(ParseError::Mobile(format!("unknown color `{c}`"))),
        None => Err(ParseError::Mobile("missing `color`".into())),
    }
}

fn parse_mark(v: &Value) -> Result<Option<u32>, ParseError> {
    match v.get("mark") {
        None | Some(Value::Null) => Ok(None),
        Some(m) => m
            .as_u64()
            .map(|x| Some(x as u32))
            .ok_or_else(|| ParseError::Mobile("`mark` must be a non-negative integer".into())),
    }
}

impl PartialEq for Mobile {
    fn eq(&self, other: &Self) -> bool {
        self.encode() == other.encode()
    }
}

impl Eq for Mobile {}

impl fmt::Debug for Mobile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mobile({})", self.encode())
    }
}

/// Checks the mobile rules for order `p` and classifies the result.
///
/// For `p = 2`: no white-white edge, no dark node, buds only at black
/// vertices, and every black vertex has as many buds as white neighbours.
/// For `p >= 3`: edges are white-black or black-dark; each explicit dark
/// has at least two black neighbours and degree `p`; and the weights on
/// black-dark edges (`p` for a big bud) can be solved so that every square
/// vertex has weight sum equal to its degree.
pub fn validate_mobile(m: &Mobile, p: u32) -> MobileClass {
    if p < 2 {
        return MobileClass::Invalid;
    }
    let parent = m.parents();
    let order = m.preorder();
    if m.kind(m.root()) == NodeKind::Bud {
        return MobileClass::Invalid;
    }
    for &v in &order {
        let k = m.kind(v);
        if let Some(u) = parent[v] {
            let pk = m.kind(u);
            let ok = match (pk, k) {
                (_, NodeKind::Bud) => pk == NodeKind::Black || (p > 2 && pk == NodeKind::Dark),
                (NodeKind::White, NodeKind::Black) | (NodeKind::Black, NodeKind::White) => true,
                (NodeKind::Black, NodeKind::Black) => p == 2,
                (NodeKind::Black, NodeKind::Dark) | (NodeKind::Dark, NodeKind::Black) => p > 2,
                _ => false,
            };
            if !ok {
                return MobileClass::Invalid;
            }
        }
        if matches!(k, NodeKind::Black | NodeKind::Dark) && m.degree(v, &parent) == 0 {
            return MobileClass::Invalid;
        }
    }
    if p == 2 {
        validate_two(m, &order, &parent)
    } else {
        validate_p(m, p, &order, &parent)
    }
}

fn kind_counts(m: &Mobile, v: usize, parent: &[Option<usize>]) -> BTreeMap<NodeKind, usize> {
    let mut c = BTreeMap::new();
    for &x in &m.node(v).children {
        *c.entry(m.kind(x)).or_insert(0) += 1;
    }
    if let Some(u) = parent[v] {
        *c.entry(m.kind(u)).or_insert(0) += 1;
    }
    c
}

/// Decides whether the given square-square edges form one path whose
/// two ends are exactly `ends`.
fn is_single_path(edges: &[(usize, usize)], ends: &[usize]) -> bool {
    if edges.is_empty() || ends.len() != 2 {
        return false;
    }
    let mut deg: BTreeMap<usize, usize> = BTreeMap::new();
    for &(a, b) in edges {
        *deg.entry(a).or_insert(0) += 1;
        *deg.entry(b).or_insert(0) += 1;
    }
    if deg.values().any(|&d| d > 2) {
        return false;
    }
    let leaves: Vec<usize> = deg.iter().filter(|(_, &d)| d == 1).map(|(&v, _)| v).collect();
    if leaves.len() != 2 {
        return false;
    }
    // A forest with maximum degree 2 and exactly two leaves is one path.
    let mut want = ends.to_vec();
    want.sort_unstable();
    leaves == want
}

fn validate_two(m: &Mobile, order: &[usize], parent: &[Option<usize>]) -> MobileClass {
    let mut bb = Vec::new();
    let mut odd = Vec::new();
    for &v in order {
        if m.kind(v) != NodeKind::Black {
            continue;
        }
        let c = kind_counts(m, v, parent);
        let get = |k| c.get(&k).copied().unwrap_or(0);
        if get(NodeKind::Bud) != get(NodeKind::White) {
            return MobileClass::Invalid;
        }
        if m.degree(v, parent) % 2 == 1 {
            odd.push(v);
        }
        if let Some(u) = parent[v] {
            if m.kind(u) == NodeKind::Black {
                bb.push((u, v));
            }
        }
    }
    if bb.is_empty() {
        MobileClass::Bipartite
    } else if is_single_path(&bb, &odd) {
        MobileClass::QuasiBipartite
    } else {
        MobileClass::General
    }
}

fn validate_p(m: &Mobile, p: u32, order: &[usize], parent: &[Option<usize>]) -> MobileClass {
    let p = p as i64;
    let mut need: BTreeMap<usize, i64> = BTreeMap::new();
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut edges = Vec::new();
    let mut irregular = Vec::new();
    for &v in order {
        let c = kind_counts(m, v, parent);
        let get = |k| c.get(&k).copied().unwrap_or(0) as i64;
        match m.kind(v) {
            NodeKind::Black => {
                let deg = m.degree(v, parent) as i64;
                need.insert(v, deg - p * get(NodeKind::Bud));
                if deg % p != 0 {
                    irregular.push(v);
                }
            }
            NodeKind::Dark => {
                if get(NodeKind::Black) < 2 || get(NodeKind::Black) + get(NodeKind::Bud) != p {
                    return MobileClass::Invalid;
                }
                need.insert(v, p);
            }
            _ => continue,
        }
        if let Some(u) = parent[v] {
            if m.kind(v) == NodeKind::Dark || m.kind(u) == NodeKind::Dark {
                edges.push((u, v));
                adj.entry(u).or_default().push(v);
                adj.entry(v).or_default().push(u);
            }
        }
    }
    // Peel leaves of the black-dark forest; each leaf fixes its edge weight.
    let mut remaining: BTreeMap<usize, usize> = adj.iter().map(|(&v, a)| (v, a.len())).collect();
    let mut removed_edge: std::collections::HashSet<(usize, usize)> = Default::default();
    let mut queue: VecDeque<usize> = remaining.iter().filter(|(_, &d)| d == 1).map(|(&v, _)| v).collect();
    while let Some(v) = queue.pop_front() {
        if remaining[&v] != 1 {
            continue;
        }
        let u = *adj[&v]
            .iter()
            .find(|&&u| !removed_edge.contains(&(u.min(v), u.max(v))))
            .expect("a leaf keeps one edge");
        let w = need[&v];
        if w < 1 || w > p - 1 {
            return MobileClass::Invalid;
        }
        removed_edge.insert((u.min(v), u.max(v)));
        *need.get_mut(&v).unwrap() = 0;
        *need.get_mut(&u).unwrap() -= w;
        *remaining.get_mut(&v).unwrap() = 0;
        let r = remaining.get_mut(&u).unwrap();
        *r -= 1;
        if *r == 1 {
            queue.push_back(u);
        }
    }
    if need.values().any(|&x| x != 0) {
        return MobileClass::Invalid;
    }
    if edges.is_empty() {
        MobileClass::PRegular
    } else if is_single_path(&edges, &irregular) {
        MobileClass::QuasiP
    } else {
        MobileClass::General
    }
}

/// Removes the buds (big buds) at the given black vertices.
pub fn prune(m: &Mobile, marked: &[usize]) -> Mobile {
    let mut out = m.clone();
    for &v in marked {
        let kids: Vec<usize> =
            out.nodes[v].children.iter().copied().filter(|&c| out.nodes[c].kind != NodeKind::Bud).collect();
        out.nodes[v].children = kids;
    }
    out.compact()
}

/// Number of ways to put back `a` big buds around a pruned vertex of
/// degree `(p-1)a`.
pub fn unprune_count(p: u32, a: u32) -> Integer {
    binomial((p * a - 1) as u64, a as i64)
}

/// Number of weak compositions of `total` into `parts` parts.
pub fn composition_count(total: usize, parts: usize) -> Integer {
    if parts == 0 {
        return Integer::from(u8::from(total == 0));
    }
    binomial((total + parts - 1) as u64, (parts - 1) as i64)
}

/// Weak composition of `total` into `parts` parts with lexicographic rank
/// `rank`, or `None` if the rank is out of range.
pub fn unrank_composition(total: usize, parts: usize, rank: &Integer) -> Option<Vec<usize>> {
    if *rank < Integer::from(0) || *rank >= composition_count(total, parts) {
        return None;
    }
    let mut rank = rank.clone();
    let mut left = total;
    let mut out = Vec::with_capacity(parts);
    for j in 0..parts {
        if j + 1 == parts {
            out.push(left);
            break;
        }
        let mut k = 0;
        loop {
            let block = composition_count(left - k, parts - j - 1);
            if rank < block {
                break;
            }
            rank -= block;
            k += 1;
        }
        out.push(k);
        left -= k;
    }
    Some(out)
}

pub fn rank_composition(parts: &[usize]) -> Integer {
    let mut left: usize = parts.iter().sum();
    let mut rank = Integer::from(0);
    for (j, &k) in parts.iter().enumerate() {
        if j + 1 == parts.len() {
            break;
        }
        for smaller in 0..k {
            rank += composition_count(left - smaller, parts.len() - j - 1);
        }
        left -= k;
    }
    rank
}

/// Puts `a_i` buds back around each pruned vertex `marked[i]`, where
/// `a_i = degree / (p - 1)`, following the composition with rank
/// `ranks[i]`. Gap `j` of a non-root vertex is right after its `j`-th
/// neighbour counting the parent as neighbour 0. At the root, gap 0 is the
/// root corner (its buds go after the last child) and gap `j` follows
/// child `j - 1`.
pub fn unprune_rank(
    pruned: &Mobile,
    marked: &[usize],
    ranks: &[Integer],
    p: u32,
) -> Result<Mobile, BijectionError> {
    if marked.len() != ranks.len() {
        return Err(BijectionError::InvalidInput("one rank per marked vertex is required".into()));
    }
    let parent = pruned.parents();
    let mut out = pruned.clone();
    for (step, (&v, rank)) in marked.iter().zip(ranks).enumerate() {
        let g = pruned.degree(v, &parent);
        if g == 0 || g % (p as usize - 1) != 0 {
            return Err(BijectionError::InvalidInput(format!(
                "pruned degree {g} is not a positive multiple of p - 1"
            )));
        }
        let a = g / (p as usize - 1);
        let comp = unrank_composition(a, g, rank).ok_or_else(|| BijectionError::InvalidChoice {
            step,
            index: usize::try_from(rank).unwrap_or(usize::MAX),
            available: usize::try_from(composition_count(a, g)).unwrap_or(usize::MAX),
        })?;
        let old = pruned.nodes[v].children.clone();
        let mut gaps: Vec<Vec<usize>> =
            comp.iter().map(|&k| (0..k).map(|_| out.add_detached(NodeKind::Bud)).collect()).collect();
        let mut kids = Vec::new();
        let mut tail = Vec::new();
        if parent[v].is_none() {
            tail = std::mem::take(&mut gaps[0]);
            for (j, &c) in old.iter().enumerate() {
                kids.push(c);
                if j + 1 < g {
                    kids.append(&mut gaps[j + 1]);
                }
            }
        } else {
            kids.append(&mut gaps[0]);
            for (j, &c) in old.iter().enumerate() {
                kids.push(c);
                kids.append(&mut gaps[j + 1]);
            }
        }
        kids.extend(tail);
        out.nodes[v].children = kids;
    }
    Ok(out)
}

/// A planted blossoming p-tree, given by the subtree below the root leaf.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BlossomingTree {
    Leaf,
    Node {
        /// Position of the downward edge among the `p - 1` non-parent slots
        /// of the intermediate dark square above this vertex.
        dark_slot: u32,
        /// `(p-1)i` subtrees interleaved with `i - 1` big buds.
        items: Vec<BlossomItem>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BlossomItem {
    Child(BlossomingTree),
    BigBud,
}

impl BlossomingTree {
    pub fn leaves(&self) -> usize {
        match self {
            BlossomingTree::Leaf => 1,
            BlossomingTree::Node { items, .. } => items
                .iter()
                .map(|it| match it {
                    BlossomItem::Child(t) => t.leaves(),
                    BlossomItem::BigBud => 0,
                })
                .sum(),
        }
    }

    pub fn internal(&self) -> usize {
        match self {
            BlossomingTree::Leaf => 0,
            BlossomingTree::Node { items, .. } => {
                1 + items
                    .iter()
                    .map(|it| match it {
                        BlossomItem::Child(t) => t.internal(),
                        BlossomItem::BigBud => 0,
                    })
                    .sum::<usize>()
            }
        }
    }

    /// Sorted degrees `p * i` of the internal vertices.
    pub fn degrees(&self, p: u32) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_degrees(p as usize, &mut out);
        out.sort_unstable();
        out
    }

    fn collect_degrees(&self, p: usize, out: &mut Vec<usize>) {
        if let BlossomingTree::Node { items, .. } = self {
            let arity = items.iter().filter(|it| matches!(it, BlossomItem::Child(_))).count();
            out.push(p * arity / (p - 1));
            for it in items {
                if let BlossomItem::Child(t) = it {
                    t.collect_degrees(p, out);
                }
            }
        }
    }

    /// Checks the arity and bud rules for order `p`.
    pub fn is_valid(&self, p: u32) -> bool {
        match self {
            BlossomingTree::Leaf => true,
            BlossomingTree::Node { dark_slot, items } => {
                let arity = items.iter().filter(|it| matches!(it, BlossomItem::Child(_))).count();
                let buds = items.len() - arity;
                let q = p as usize - 1;
                arity > 0
                    && arity % q == 0
                    && buds + 1 == arity / q
                    && *dark_slot < p - 1
                    && items.iter().all(|it| match it {
                        BlossomItem::Child(t) => t.is_valid(p),
                        BlossomItem::BigBud => true,
                    })
            }
        }
    }
}

/// An ordered list of white-rooted mobiles with some white vertices marked
/// `1..=r-1` through [`Node::mark`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobileForest {
    pub components: Vec<Mobile>,
}

impl MobileForest {
    /// `(mark, component, node)` for every marked white vertex, by mark.
    pub fn marks(&self) -> Vec<(u32, usize, usize)> {
        let mut out: Vec<(u32, usize, usize)> = self
            .components
            .iter()
            .enumerate()
            .flat_map(|(c, m)| m.marked().into_iter().map(move |(k, v)| (k, c, v)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn whites(&self) -> usize {
        self.components.iter().map(Mobile::whites).sum()
    }

    pub fn black_degrees(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.components.iter().flat_map(Mobile::black_degrees).collect();
        out.sort_unstable();
        out
    }

    pub fn encode(&self) -> String {
        self.components.iter().map(Mobile::encode).collect::<Vec<_>>().join("|")
    }
}
