//! Class-closed pattern tables and their JSON form.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest as _, Sha256};

use super::search::{find_pattern, find_pattern_local};
use super::tree::Tree;
use super::validate::{Clause, ValidationReport, Violation};
use super::{CubeSymmetry, PairClass, Pattern, PatternError, SearchOptions, FRAME};
use crate::geom::{Box3, Corner, Link, Point3};

/// `(1/3, 0, 0)`.
pub fn root_entry() -> Point3 {
    Point3::from_ints([1, 0, 0], 1)
}

/// `(2/3, 0, 0)`.
pub fn root_exit() -> Point3 {
    Point3::from_ints([2, 0, 0], 1)
}

/// The open segment from the root exit back to the root entry.
pub fn closing_link() -> Link {
    Link::new(vec![root_exit(), root_entry()]).expect("distinct endpoints")
}

/// Root pattern plus one pattern per pair class, for the canonical
/// representative of that class on the unit cube.
#[derive(Clone, Debug)]
pub struct PatternTable {
    root: Pattern,
    classes: BTreeMap<PairClass, Pattern>,
    iterations: usize,
    // transported pattern for each (entry, exit) pair, index 8·entry + exit
    by_pair: Vec<Option<Pattern>>,
}

impl PartialEq for PatternTable {
    fn eq(&self, other: &Self) -> bool {
        self.root == other.root && self.classes == other.classes
    }
}

impl PatternTable {
    pub fn new(root: Pattern, classes: BTreeMap<PairClass, Pattern>, iterations: usize) -> Self {
        let mut by_pair = vec![None; 64];
        for e in Corner::ALL {
            for x in Corner::ALL {
                let Some(class) = PairClass::of(e, x) else { continue };
                let Some(p) = classes.get(&class) else { continue };
                let g = CubeSymmetry::mapping(class.canonical(), (e, x)).expect("pairs in one class are congruent");
                by_pair[8 * e.index() as usize + x.index() as usize] = Some(p.transformed(&g));
            }
        }
        PatternTable { root, classes, iterations, by_pair }
    }

    pub fn root(&self) -> &Pattern {
        &self.root
    }

    pub fn classes(&self) -> &BTreeMap<PairClass, Pattern> {
        &self.classes
    }

    /// Rounds of class discovery the closure needed.
    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn fallback_used(&self) -> bool {
        self.root.uses_chains() || self.classes.values().any(Pattern::uses_chains)
    }

    /// Pattern of a non-root node entered at vertex `entry` and left at
    /// vertex `exit` of its cube.
    pub fn node_pattern(&self, entry: Corner, exit: Corner) -> Result<&Pattern, PatternError> {
        self.by_pair[8 * entry.index() as usize + exit.index() as usize]
            .as_ref()
            .ok_or(PatternError::MissingClass(entry, exit))
    }

    pub fn tree(&self) -> Tree<'_> {
        Tree::new(self)
    }

    /// Mutable access for building corrupted tables in tests.
    pub fn with_root(mut self, root: Pattern) -> Self {
        self.root = root;
        self
    }

    pub fn with_class(self, class: PairClass, p: Pattern) -> Self {
        let mut classes = self.classes;
        classes.insert(class, p);
        PatternTable::new(self.root, classes, self.iterations)
    }
}

/// Root search against the closing segment, then one search per newly
/// reached pair class until no new class appears.
pub fn pattern_closure(opts: SearchOptions) -> Result<PatternTable, PatternError> {
    let root = find_pattern(&root_entry(), &root_exit(), &Box3::unit(), &[closing_link()], opts)?;
    let mut classes = BTreeMap::new();
    let mut frontier: BTreeSet<PairClass> = root.child_classes().into_iter().flatten().collect();
    let mut iterations = 0;
    while !frontier.is_empty() {
        iterations += 1;
        let mut next = BTreeSet::new();
        for class in frontier {
            let (e, x) = class.canonical();
            let at = |c: Corner| c.bits().map(|b| FRAME * b as i64);
            let p = find_pattern_local(at(e), at(x), 1, &[], opts)?;
            next.extend(p.child_classes().into_iter().flatten());
            classes.insert(class, p);
        }
        next.retain(|c| !classes.contains_key(c));
        frontier = next;
    }
    Ok(PatternTable::new(root, classes, iterations))
}

/// A pattern with its links spelled out in the unit-cube frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternRecord {
    #[serde(flatten)]
    pub pattern: Pattern,
    pub links: Vec<Vec<Point3>>,
}

impl PatternRecord {
    fn new(pattern: &Pattern) -> Self {
        let links = pattern.links_in(&Box3::unit()).into_iter().map(|l| l.points().to_vec()).collect();
        PatternRecord { pattern: pattern.clone(), links }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootRecord {
    pub entry: Point3,
    pub exit: Point3,
    pub pattern: PatternRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub entry: Corner,
    pub exit: Corner,
    pub pattern: PatternRecord,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseTally {
    pub checks: u64,
    pub violations: u64,
}

/// Summary of a validation run over a table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Digest {
    pub depth: usize,
    pub nodes: u64,
    pub checks: u64,
    pub violations: u64,
    pub clauses: BTreeMap<String, ClauseTally>,
    pub classes_found: Vec<PairClass>,
    pub iterations: usize,
    pub fallback_used: bool,
    pub locality: String,
    /// SHA-256 of the canonical JSON of `root` and `classes`.
    pub sha256: String,
}

pub const FORMAT: &str = "cantorloop-pattern-table/1";

const LOCALITY: &str = "per internal node: endpoint continuity, distinct entry/exit, sibling \
disjointness, child nesting, link containment in the node cube, links against all 8 children, \
links pairwise; at the root also the closing segment against root links and level-1 cubes. \
Cross-subtree pairs are separated by disjoint sibling cubes that contain them, so these \
local checks imply the global ones.";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternFile {
    pub format: String,
    pub root: RootRecord,
    pub classes: BTreeMap<PairClass, ClassRecord>,
    pub digest: Digest,
}

impl PatternFile {
    pub fn new(table: &PatternTable, report: &ValidationReport) -> Self {
        let root = RootRecord { entry: root_entry(), exit: root_exit(), pattern: PatternRecord::new(&table.root) };
        let classes: BTreeMap<PairClass, ClassRecord> = table
            .classes
            .iter()
            .map(|(&c, p)| {
                let (entry, exit) = c.canonical();
                (c, ClassRecord { entry, exit, pattern: PatternRecord::new(p) })
            })
            .collect();
        let sha256 = content_hash(&root, &classes);
        let clauses = report.tallies().into_iter().map(|(c, t)| (c.name().to_string(), t)).collect();
        let digest = Digest {
            depth: report.depth,
            nodes: report.nodes,
            checks: report.total_checks(),
            violations: report.violations.len() as u64,
            clauses,
            classes_found: table.classes.keys().copied().collect(),
            iterations: table.iterations,
            fallback_used: table.fallback_used(),
            locality: LOCALITY.to_string(),
            sha256,
        };
        PatternFile { format: FORMAT.to_string(), root, classes, digest }
    }

    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("plain data serializes");
        let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, PatternError> {
        serde_json::from_str(s).map_err(|e| PatternError::Format(e.to_string()))
    }

    /// Rebuilds the table from the selectors. Stored links, frame points
    /// and the content hash are cross-checked; disagreements are returned
    /// as violations rather than errors.
    pub fn to_table(&self) -> Result<(PatternTable, Vec<Violation>), PatternError> {
        if self.format != FORMAT {
            return Err(PatternError::Format(format!("unknown format {:?}", self.format)));
        }
        self.root.pattern.pattern.well_formed()?;
        for rec in self.classes.values() {
            rec.pattern.pattern.well_formed()?;
        }
        let mut issues = Vec::new();
        let mut stored = |loc: String, rec: &PatternRecord| {
            if PatternRecord::new(&rec.pattern).links != rec.links {
                issues.push(Violation::new(Clause::StoredLinks, loc, "links disagree with the selectors"));
            }
        };
        stored("root".into(), &self.root.pattern);
        for (c, rec) in &self.classes {
            stored(format!("class {c}"), &rec.pattern);
        }
        if self.root.entry != root_entry() || self.root.exit != root_exit() {
            issues.push(Violation::new(Clause::EndpointContinuity, "root".into(), "root entry or exit moved"));
        }
        for (c, rec) in &self.classes {
            if (rec.entry, rec.exit) != c.canonical() {
                issues.push(Violation::new(
                    Clause::EndpointContinuity,
                    format!("class {c}"),
                    "class entry/exit is not the canonical pair",
                ));
            }
        }
        if content_hash(&self.root, &self.classes) != self.digest.sha256 {
            issues.push(Violation::new(Clause::DigestMismatch, "file".into(), "content hash differs from digest"));
        }
        let classes = self.classes.iter().map(|(&c, r)| (c, r.pattern.pattern.clone())).collect();
        let table = PatternTable::new(self.root.pattern.pattern.clone(), classes, self.digest.iterations);
        Ok((table, issues))
    }
}

fn content_hash(root: &RootRecord, classes: &BTreeMap<PairClass, ClassRecord>) -> String {
    let v = serde_json::json!({ "root": root, "classes": classes });
    let bytes = serde_json::to_vec(&v).expect("value serializes");
    hex::encode(Sha256::digest(&bytes))
}
