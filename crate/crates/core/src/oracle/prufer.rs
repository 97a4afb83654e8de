//! Labeled spanning trees of the complete graph via Prüfer sequences.
//!
//! Every sequence of length `n - 2` over `0..n` decodes to a distinct labeled
//! tree, so the `n^(n-2)` trees are enumerated by counting in base `n`.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::model::{Edge, NodeId, RootedTree};

/// Default largest network size the oracle enumerates (`8^6 = 262144` trees).
pub const DEFAULT_CAP: usize = 8;
/// Hard ceiling for the cap (`9^7 = 4782969` trees).
pub const MAX_CAP: usize = 9;

/// Undirected edges of the tree encoded by `seq` over `seq.len() + 2` nodes.
pub fn decode(seq: &[NodeId]) -> Vec<Edge> {
    let n = seq.len() + 2;
    let mut degree = vec![1usize; n];
    for &v in seq {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut ptr = 0;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for &v in seq {
        edges.push((leaf, v));
        degree[v] -= 1;
        if degree[v] == 1 && v < ptr {
            leaf = v;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, n - 1));
    edges
}

/// Prüfer sequence of a tree given by undirected edges over `n` nodes.
pub fn encode(n: usize, edges: &[Edge]) -> Vec<NodeId> {
    if n <= 2 {
        return Vec::new();
    }
    let parent = parents_from(n, n - 1, edges);
    let mut degree = vec![0usize; n];
    for &(a, b) in edges {
        degree[a] += 1;
        degree[b] += 1;
    }
    let mut seq = Vec::with_capacity(n - 2);
    let mut ptr = 0;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for _ in 0..n - 2 {
        let next = parent[leaf];
        seq.push(next);
        degree[next] -= 1;
        if degree[next] == 1 && next < ptr {
            leaf = next;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    seq
}

fn adjacency(n: usize, edges: &[Edge]) -> Vec<Vec<NodeId>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    adj
}

fn parents_from(n: usize, root: NodeId, edges: &[Edge]) -> Vec<NodeId> {
    let adj = adjacency(n, edges);
    let mut parent = vec![usize::MAX; n];
    parent[root] = root;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if parent[v] == usize::MAX {
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    parent
}

/// Orients an undirected tree away from `root`. Edges are listed breadth
/// first, children of a node in increasing index order.
pub fn orient(n: usize, root: NodeId, edges: &[Edge]) -> Result<RootedTree> {
    let adj = adjacency(n, edges);
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut directed = Vec::with_capacity(n.saturating_sub(1));
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                directed.push((u, v));
                queue.push_back(v);
            }
        }
    }
    RootedTree::new(n, root, directed)
}

/// All `n^(n-2)` spanning trees of `K_n`, oriented from `root`. Trees are
/// produced lazily; index `r` corresponds to the `r`-th Prüfer sequence in
/// lexicographic order.
#[derive(Debug, Clone, Copy)]
pub struct TreeEnumeration {
    n: usize,
    root: NodeId,
}

impl TreeEnumeration {
    pub fn new(n: usize, root: NodeId, cap: usize) -> Result<Self> {
        if cap > MAX_CAP {
            return Err(Error::InvalidArgument(format!(
                "enumeration cap cannot exceed {MAX_CAP}, got {cap}"
            )));
        }
        if n < 2 {
            return Err(Error::InvalidNetwork(
                "at least 2 nodes are required".into(),
            ));
        }
        if n > cap {
            return Err(Error::AboveCap { len: n, cap });
        }
        if root >= n {
            return Err(Error::NodeOutOfRange {
                index: root,
                len: n,
            });
        }
        Ok(Self { n, root })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.n.pow((self.n - 2) as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sequence(&self, index: usize) -> Vec<NodeId> {
        let mut seq = vec![0; self.n - 2];
        let mut rest = index;
        for slot in seq.iter_mut().rev() {
            *slot = rest % self.n;
            rest /= self.n;
        }
        seq
    }

    pub fn tree(&self, index: usize) -> RootedTree {
        orient(self.n, self.root, &decode(&self.sequence(index)))
            .expect("a decoded Prüfer sequence is a spanning tree")
    }

    /// Parent of every node in tree `index` (the root is its own parent).
    /// Cheaper than [`TreeEnumeration::tree`] when only energies are needed.
    pub fn parents(&self, index: usize) -> Vec<NodeId> {
        parents_from(self.n, self.root, &decode(&self.sequence(index)))
    }

    pub fn iter(&self) -> impl Iterator<Item = RootedTree> + '_ {
        (0..self.len()).map(move |r| self.tree(r))
    }
}
