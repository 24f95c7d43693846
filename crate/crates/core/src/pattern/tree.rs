//! Exact geometry of recursion-tree nodes.
//!
//! Address digit `i` is the traversal slot, so children are listed in
//! parameter order.

use super::table::{root_entry, root_exit, PatternTable};
use super::{Pattern, PatternError};
use crate::geom::{Box3, Corner, Link, Point3};
use crate::param::Address;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeGeom {
    pub address: Address,
    pub cube: Box3,
    pub entry: Point3,
    pub exit: Point3,
    /// Entry and exit as vertices of `cube`; `None` at the root, whose
    /// endpoints are not vertices of the unit cube.
    pub selectors: Option<(Corner, Corner)>,
}

#[derive(Clone, Copy, Debug)]
pub struct Tree<'a> {
    table: &'a PatternTable,
}

impl<'a> Tree<'a> {
    pub fn new(table: &'a PatternTable) -> Self {
        Tree { table }
    }

    pub fn table(&self) -> &'a PatternTable {
        self.table
    }

    pub fn root(&self) -> NodeGeom {
        NodeGeom {
            address: Address::root(),
            cube: Box3::unit(),
            entry: root_entry(),
            exit: root_exit(),
            selectors: None,
        }
    }

    pub fn pattern(&self, node: &NodeGeom) -> Result<&'a Pattern, PatternError> {
        match node.selectors {
            None => Ok(self.table.root()),
            Some((e, x)) => self.table.node_pattern(e, x),
        }
    }

    /// Child in slot `i`.
    pub fn child(&self, node: &NodeGeom, i: u8) -> Result<NodeGeom, PatternError> {
        let p = self.pattern(node)?;
        Ok(child_of(node, p, i))
    }

    /// The 8 children in slot order.
    pub fn children(&self, node: &NodeGeom) -> Result<Vec<NodeGeom>, PatternError> {
        let p = self.pattern(node)?;
        Ok((0..8).map(|i| child_of(node, p, i)).collect())
    }

    pub fn node(&self, s: &Address) -> Result<NodeGeom, PatternError> {
        let mut n = self.root();
        for &i in s.digits() {
            n = self.child(&n, i)?;
        }
        Ok(n)
    }

    /// All nodes at `depth`, in address order.
    pub fn level(&self, depth: usize) -> Result<Vec<NodeGeom>, PatternError> {
        let mut nodes = vec![self.root()];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(nodes.len() * 8);
            for n in &nodes {
                next.extend(self.children(n)?);
            }
            nodes = next;
        }
        Ok(nodes)
    }

    /// The 7 connecting links of a node, exactly placed.
    pub fn links(&self, node: &NodeGeom) -> Result<Vec<Link>, PatternError> {
        Ok(self.pattern(node)?.links_in(&node.cube))
    }
}

fn child_of(node: &NodeGeom, p: &Pattern, i: u8) -> NodeGeom {
    let i = i as usize;
    let cube = node.cube.child(p.order[i]);
    NodeGeom {
        address: node.address.child(i as u8).expect("slot below 8"),
        entry: cube.vertex(p.entry[i]),
        exit: cube.vertex(p.exit[i]),
        selectors: Some((p.entry[i], p.exit[i])),
        cube,
    }
}
