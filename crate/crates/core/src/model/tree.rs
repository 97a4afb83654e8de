use crate::error::{Error, Result};
use crate::model::{Edge, NodeId};

/// Directed spanning tree rooted at the broadcasting node. The edge sequence
/// is a valid transmission order: every sender is the root or has already
/// appeared as a receiver.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootedTree {
    root: NodeId,
    edges: Vec<Edge>,
}

impl RootedTree {
    /// Validates the tree over `n` nodes.
    pub fn new(n: usize, root: NodeId, edges: Vec<Edge>) -> Result<Self> {
        if root >= n {
            return Err(Error::NodeOutOfRange {
                index: root,
                len: n,
            });
        }
        if edges.len() + 1 != n {
            return Err(Error::InvalidTree(format!(
                "expected {} edges, got {}",
                n - 1,
                edges.len()
            )));
        }
        check_schedule(n, root, &edges, true)?;
        Ok(Self { root, edges })
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn into_edges(self) -> Vec<Edge> {
        self.edges
    }

    pub fn node_count(&self) -> usize {
        self.edges.len() + 1
    }

    /// Out-degree of every node.
    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.node_count()];
        for &(i, _) in &self.edges {
            deg[i] += 1;
        }
        deg
    }

    /// A tree is a path when no node sends to more than one child.
    pub fn is_path(&self) -> bool {
        self.out_degrees().into_iter().all(|d| d <= 1)
    }

    /// Same edges in a different transmission order.
    pub fn reordered(&self, edges: Vec<Edge>) -> Result<Self> {
        let mut a = self.edges.clone();
        let mut b = edges.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Err(Error::InvalidTree(
                "schedule is not a permutation of the tree edges".into(),
            ));
        }
        Self::new(self.node_count(), self.root, edges)
    }
}

/// Checks that `edges` form a transmission order from `root`: each receiver
/// is reached exactly once, never the root, and every sender already holds
/// the data. With `spanning` all `n` nodes must be reached.
pub(crate) fn check_schedule(n: usize, root: NodeId, edges: &[Edge], spanning: bool) -> Result<()> {
    let mut has_data = vec![false; n];
    has_data[root] = true;
    for &(i, j) in edges {
        if i >= n || j >= n {
            return Err(Error::NodeOutOfRange {
                index: i.max(j),
                len: n,
            });
        }
        if i == j {
            return Err(Error::InvalidTree(format!("self-loop at node {}", i + 1)));
        }
        if !has_data[i] {
            return Err(Error::InvalidTree(format!(
                "edge ({}, {}) is scheduled before node {} receives the data",
                i + 1,
                j + 1,
                i + 1
            )));
        }
        if has_data[j] {
            return Err(Error::InvalidTree(format!(
                "node {} receives the data twice",
                j + 1
            )));
        }
        has_data[j] = true;
    }
    if spanning && has_data.iter().any(|&h| !h) {
        return Err(Error::InvalidTree("tree does not span all nodes".into()));
    }
    Ok(())
}
