//! Exact validation of a pattern table over the recursion tree.
//!
//! [`validate_tree`] checks every internal node locally; containment of
//! each subtree in its own cube makes this equivalent to checking all
//! pairs globally. [`validate_tree_exhaustive`] checks all pairs directly
//! and serves as an oracle for the local version at small depth.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::table::{closing_link, ClauseTally, PatternTable};
use super::tree::NodeGeom;
use super::Pattern;
use crate::geom::{link_box_disjoint, link_in_box, links_disjoint, Box3, Link};
use crate::param::Address;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    /// Slot 0 enters at the node entry and slot 7 leaves at the node exit.
    EndpointContinuity,
    /// The slot order is a permutation of the 8 corners.
    OrderBijection,
    /// Each child is entered and left at different vertices.
    DistinctEntryExit,
    /// Distinct cubes that are not nested are disjoint.
    CubesDisjoint,
    /// Each child cube lies inside its parent.
    ChildNesting,
    /// Each link lies inside its node cube.
    LinkContainment,
    /// Links miss every cube outside their own ancestry.
    LinkAvoidsCubes,
    /// Links are pairwise disjoint.
    LinksDisjoint,
    /// The closing segment misses every link.
    ClosingAvoidsLinks,
    /// The closing segment misses every non-root cube.
    ClosingAvoidsCubes,
    /// A node needs a pattern the table does not provide.
    MissingPattern,
    /// Links stored in a file differ from the ones the selectors produce.
    StoredLinks,
    /// The file content no longer matches its recorded hash.
    DigestMismatch,
}

impl Clause {
    pub fn name(self) -> &'static str {
        match self {
            Clause::EndpointContinuity => "endpoint_continuity",
            Clause::OrderBijection => "order_bijection",
            Clause::DistinctEntryExit => "distinct_entry_exit",
            Clause::CubesDisjoint => "cubes_disjoint",
            Clause::ChildNesting => "child_nesting",
            Clause::LinkContainment => "link_containment",
            Clause::LinkAvoidsCubes => "link_avoids_cubes",
            Clause::LinksDisjoint => "links_disjoint",
            Clause::ClosingAvoidsLinks => "closing_avoids_links",
            Clause::ClosingAvoidsCubes => "closing_avoids_cubes",
            Clause::MissingPattern => "missing_pattern",
            Clause::StoredLinks => "stored_links",
            Clause::DigestMismatch => "digest_mismatch",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub clause: Clause,
    pub location: String,
    pub detail: String,
}

impl Violation {
    pub fn new(clause: Clause, location: String, detail: impl Into<String>) -> Self {
        Violation { clause, location, detail: detail.into() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub depth: usize,
    /// Internal nodes whose patterns were checked.
    pub nodes: u64,
    pub checks: BTreeMap<Clause, u64>,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn total_checks(&self) -> u64 {
        self.checks.values().sum()
    }

    pub fn count(&self, clause: Clause) -> usize {
        self.violations.iter().filter(|v| v.clause == clause).count()
    }

    /// Checks and violations per clause.
    pub fn tallies(&self) -> BTreeMap<Clause, ClauseTally> {
        let mut out: BTreeMap<Clause, ClauseTally> = BTreeMap::new();
        for (&c, &n) in &self.checks {
            out.entry(c).or_default().checks = n;
        }
        for v in &self.violations {
            out.entry(v.clause).or_default().violations += 1;
        }
        out
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.nodes += other.nodes;
        for (c, n) in other.checks {
            *self.checks.entry(c).or_default() += n;
        }
        self.violations.extend(other.violations);
    }

    fn check(&mut self, clause: Clause, ok: bool, location: impl FnOnce() -> String, detail: impl FnOnce() -> String) {
        *self.checks.entry(clause).or_default() += 1;
        if !ok {
            self.violations.push(Violation { clause, location: location(), detail: detail() });
        }
    }
}

/// Validates every node `s` with `|s| < depth`, plus each stored class
/// pattern on its canonical unit-cube node.
pub fn validate_tree(table: &PatternTable, depth: usize) -> ValidationReport {
    let tree = table.tree();
    let mut report = ValidationReport { depth, ..Default::default() };

    for (&class, p) in table.classes() {
        let (e, x) = class.canonical();
        let cube = Box3::unit();
        let node = NodeGeom {
            address: Address::root(),
            entry: cube.vertex(e),
            exit: cube.vertex(x),
            selectors: Some((e, x)),
            cube,
        };
        check_node(&node, p, false, &format!("class {class}"), &mut report);
    }

    // Internal nodes level by level; a node without a pattern is reported
    // and its subtree skipped.
    let mut level = vec![tree.root()];
    let mut internal = Vec::new();
    for _ in 0..depth {
        let mut next = Vec::with_capacity(level.len() * 8);
        for n in level {
            match tree.pattern(&n) {
                Ok(p) => {
                    next.extend(tree.children(&n).expect("pattern exists"));
                    internal.push((n, p));
                }
                Err(e) => report.violations.push(Violation::new(
                    Clause::MissingPattern,
                    format!("node {}", n.address),
                    e.to_string(),
                )),
            }
        }
        level = next;
    }

    let parts: Vec<ValidationReport> = internal
        .par_iter()
        .map(|(n, p)| {
            let mut r = ValidationReport::default();
            check_node(n, p, n.address.is_empty(), &format!("node {}", n.address), &mut r);
            r.nodes = 1;
            r
        })
        .collect();
    for r in parts {
        report.merge(r);
    }
    report
}

fn check_node(node: &NodeGeom, p: &Pattern, is_root: bool, loc: &str, r: &mut ValidationReport) {
    let at = || loc.to_string();
    let kids: Vec<Box3> = p.order.iter().map(|&h| node.cube.child(h)).collect();

    let mut seen = [false; 8];
    for h in p.order {
        seen[h.index() as usize] = true;
    }
    r.check(Clause::OrderBijection, seen.iter().all(|&b| b), at, || format!("order {:?}", p.order));

    let first = kids[0].vertex(p.entry[0]);
    let last = kids[7].vertex(p.exit[7]);
    r.check(Clause::EndpointContinuity, first == node.entry, at, || {
        format!("slot 0 enters at {first}, node entry is {}", node.entry)
    });
    r.check(Clause::EndpointContinuity, last == node.exit, at, || {
        format!("slot 7 leaves at {last}, node exit is {}", node.exit)
    });

    for i in 0..8 {
        r.check(Clause::DistinctEntryExit, p.entry[i] != p.exit[i], at, || format!("slot {i}"));
        r.check(Clause::ChildNesting, node.cube.contains_box(&kids[i]), at, || format!("slot {i}"));
        for l in i + 1..8 {
            r.check(Clause::CubesDisjoint, kids[i].disjoint(&kids[l]), at, || format!("slots {i} and {l}"));
        }
    }

    let links = p.links_in(&node.cube);
    for (j, link) in links.iter().enumerate() {
        r.check(Clause::LinkContainment, link_in_box(link, &node.cube), at, || format!("link {j}"));
        for (i, k) in kids.iter().enumerate() {
            r.check(Clause::LinkAvoidsCubes, link_box_disjoint(link, k), at, || format!("link {j} meets slot {i}"));
        }
        for (l, other) in links.iter().enumerate().skip(j + 1) {
            r.check(Clause::LinksDisjoint, links_disjoint(link, other), at, || format!("links {j} and {l}"));
        }
    }

    if is_root {
        let closing = closing_link();
        for (j, link) in links.iter().enumerate() {
            r.check(Clause::ClosingAvoidsLinks, links_disjoint(link, &closing), at, || format!("link {j}"));
        }
        for (i, k) in kids.iter().enumerate() {
            r.check(Clause::ClosingAvoidsCubes, link_box_disjoint(&closing, k), at, || format!("slot {i}"));
        }
    }
}

/// All-pairs check of every cube and link down to `depth`, without using
/// nesting to prune. Quadratic in the node count.
pub fn validate_tree_exhaustive(table: &PatternTable, depth: usize) -> ValidationReport {
    let tree = table.tree();
    let mut r = ValidationReport { depth, ..Default::default() };
    let mut cubes: Vec<(Address, Box3)> = Vec::new();
    let mut links: Vec<(Address, usize, Link)> = Vec::new();
    let mut level = vec![tree.root()];
    for d in 0..=depth {
        let mut next = Vec::new();
        for n in &level {
            if d > 0 {
                cubes.push((n.address.clone(), n.cube.clone()));
            }
            if d < depth {
                match tree.links(n) {
                    Ok(ls) => {
                        r.nodes += 1;
                        links.extend(ls.into_iter().enumerate().map(|(j, l)| (n.address.clone(), j, l)));
                        next.extend(tree.children(n).expect("pattern exists"));
                    }
                    Err(e) => r.violations.push(Violation::new(
                        Clause::MissingPattern,
                        format!("node {}", n.address),
                        e.to_string(),
                    )),
                }
            }
        }
        level = next;
    }

    let is_prefix = |a: &Address, b: &Address| a.len() <= b.len() && b.digits()[..a.len()] == *a.digits();
    for (i, (a, ca)) in cubes.iter().enumerate() {
        for (b, cb) in &cubes[i + 1..] {
            let loc = || format!("cubes {a} and {b}");
            if is_prefix(a, b) {
                r.check(Clause::ChildNesting, ca.contains_box(cb), loc, String::new);
            } else if is_prefix(b, a) {
                r.check(Clause::ChildNesting, cb.contains_box(ca), loc, String::new);
            } else {
                r.check(Clause::CubesDisjoint, ca.disjoint(cb), loc, String::new);
            }
        }
    }
    for (s, j, link) in &links {
        for (t, cube) in &cubes {
            let loc = || format!("link {j} of {s}, cube {t}");
            if is_prefix(t, s) {
                r.check(Clause::LinkContainment, link_in_box(link, cube), loc, String::new);
            } else {
                r.check(Clause::LinkAvoidsCubes, link_box_disjoint(link, cube), loc, String::new);
            }
        }
    }
    for (i, (s, j, a)) in links.iter().enumerate() {
        for (t, l, b) in &links[i + 1..] {
            r.check(
                Clause::LinksDisjoint,
                links_disjoint(a, b),
                || format!("link {j} of {s}, link {l} of {t}"),
                String::new,
            );
        }
    }
    let closing = closing_link();
    for (t, cube) in &cubes {
        r.check(Clause::ClosingAvoidsCubes, link_box_disjoint(&closing, cube), || format!("cube {t}"), String::new);
    }
    for (s, j, link) in &links {
        r.check(Clause::ClosingAvoidsLinks, links_disjoint(&closing, link), || format!("link {j} of {s}"), String::new);
    }
    r
}
