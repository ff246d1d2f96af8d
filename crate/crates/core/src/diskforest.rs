//! Cross-section combinatorics: disks in the unit disk up to isotopy,
//! recorded as a rooted forest of strict nestings.
//!
//! Node `0` is always the ambient disk. Siblings are disjoint, a child lies
//! strictly inside its parent, and nothing carries coordinates. For each
//! color `c ≥ 2` the forest may mark `c` ordered children of the root as the
//! cross-section of the trivial fat `c`-string link; for `c = 1` the marked
//! disk is the root itself, since the trivial fat 1-string link is the
//! identity.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

pub type NodeId = usize;

pub const ROOT: NodeId = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiskRelation {
    Equal,
    StrictlyInside,
    StrictlyContains,
    Disjoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForestError {
    #[error("unknown disk {0}")]
    UnknownNode(String),
    #[error("parent map is not a forest rooted at the ambient disk (node {0})")]
    NotAForest(String),
    #[error("duplicate disk name {0}")]
    DuplicateName(String),
    #[error("marked disks for color {0}: {1}")]
    BadMarked(usize, String),
    #[error("no marked disks for color {0}")]
    MissingMarked(usize),
    #[error("graft: {0}")]
    BadHoles(String),
    #[error("graft: cross-sections cannot be nested consistently around disk {0}")]
    NotPlanar(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiskForest {
    parent: Vec<Option<NodeId>>,
    names: Vec<String>,
    marked: BTreeMap<usize, Vec<NodeId>>,
}

impl DiskForest {
    /// Only the ambient disk.
    pub fn new() -> Self {
        let mut marked = BTreeMap::new();
        marked.insert(1, vec![ROOT]);
        DiskForest {
            parent: vec![None],
            names: vec!["root".to_string()],
            marked,
        }
    }

    /// The ambient disk with the standard cross-section of `i_c`.
    pub fn standard(color: usize) -> Self {
        let mut f = DiskForest::new();
        if color >= 2 {
            let marked = (1..=color)
                .map(|j| f.add_child(ROOT, &format!("m{j}")))
                .collect();
            f.marked.insert(color, marked);
        }
        f
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        0..self.parent.len()
    }

    pub fn name(&self, n: NodeId) -> &str {
        &self.names[n]
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.names.iter().position(|x| x == name)
    }

    pub fn parent(&self, n: NodeId) -> Option<NodeId> {
        self.parent[n]
    }

    /// Children in insertion order.
    pub fn children(&self, n: NodeId) -> Vec<NodeId> {
        self.nodes().filter(|&m| self.parent[m] == Some(n)).collect()
    }

    fn fresh_name(&self, hint: &str) -> String {
        if self.node_by_name(hint).is_none() {
            return hint.to_string();
        }
        (self.len()..)
            .map(|i| format!("{hint}_{i}"))
            .find(|s| self.node_by_name(s).is_none())
            .expect("unbounded")
    }

    pub fn add_child(&mut self, parent: NodeId, name: &str) -> NodeId {
        let name = self.fresh_name(name);
        self.parent.push(Some(parent));
        self.names.push(name);
        self.parent.len() - 1
    }

    /// Adds a disk around `children`, which must share a parent.
    pub fn insert_above(&mut self, children: &[NodeId], name: &str) -> Result<NodeId, ForestError> {
        let p = children
            .first()
            .and_then(|&c| self.parent[c])
            .ok_or_else(|| ForestError::BadHoles("insert_above needs non-root children".into()))?;
        if children.iter().any(|&c| self.parent[c] != Some(p)) {
            return Err(ForestError::BadHoles(
                "insert_above needs siblings".into(),
            ));
        }
        let f = self.add_child(p, name);
        for &c in children {
            self.parent[c] = Some(f);
        }
        Ok(f)
    }

    /// Low-level constructor used by the parser; call [`validate`] afterwards.
    pub fn from_parts(
        parent: Vec<Option<NodeId>>,
        names: Vec<String>,
        marked: BTreeMap<usize, Vec<NodeId>>,
    ) -> Self {
        let mut marked = marked;
        marked.insert(1, vec![ROOT]);
        DiskForest {
            parent,
            names,
            marked,
        }
    }

    pub fn marked(&self, color: usize) -> Option<&[NodeId]> {
        self.marked.get(&color).map(|v| v.as_slice())
    }

    pub fn marked_colors(&self) -> impl Iterator<Item = (usize, &[NodeId])> {
        self.marked.iter().map(|(&c, v)| (c, v.as_slice()))
    }

    pub fn set_marked(&mut self, color: usize, disks: Vec<NodeId>) {
        self.marked.insert(color, disks);
    }

    fn check(&self, n: NodeId) -> Result<(), ForestError> {
        if n < self.len() {
            Ok(())
        } else {
            Err(ForestError::UnknownNode(n.to_string()))
        }
    }

    /// Proper ancestors of `n`, nearest first.
    pub fn ancestors(&self, n: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut cur = self.parent[n];
        while let Some(p) = cur {
            out.push(p);
            cur = self.parent[p];
        }
        out
    }

    /// Whether `a` is a proper descendant of `b`.
    pub fn is_strictly_inside(&self, a: NodeId, b: NodeId) -> bool {
        let mut cur = self.parent[a];
        while let Some(p) = cur {
            if p == b {
                return true;
            }
            cur = self.parent[p];
        }
        false
    }

    pub fn inside_or_equal(&self, a: NodeId, b: NodeId) -> bool {
        a == b || self.is_strictly_inside(a, b)
    }

    pub fn relation(&self, a: NodeId, b: NodeId) -> Result<DiskRelation, ForestError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.rel(a, b))
    }

    pub(crate) fn rel(&self, a: NodeId, b: NodeId) -> DiskRelation {
        if a == b {
            DiskRelation::Equal
        } else if self.is_strictly_inside(a, b) {
            DiskRelation::StrictlyInside
        } else if self.is_strictly_inside(b, a) {
            DiskRelation::StrictlyContains
        } else {
            DiskRelation::Disjoint
        }
    }

    fn lca(&self, nodes: &[NodeId]) -> NodeId {
        let mut chain: Vec<NodeId> = {
            let mut v = vec![nodes[0]];
            v.extend(self.ancestors(nodes[0]));
            v
        };
        for &n in &nodes[1..] {
            chain.retain(|&a| self.inside_or_equal(n, a));
        }
        chain[0]
    }

    /// Substitutes `guest` (a cross-section carrying the color-`guest_color`
    /// marked disks) into the region bounded by `outer` with `holes` drilled
    /// out. Returns the new forest and the image of every guest node.
    ///
    /// The guest ambient disk goes to `outer` (to the single hole when
    /// `guest_color = 1`), guest marked disk `j` goes to `holes[j]`, and every
    /// other guest disk becomes a fresh disk with the same relation to each
    /// hole that it had to the corresponding marked disk.
    pub fn graft(
        &self,
        outer: NodeId,
        holes: &[NodeId],
        guest: &DiskForest,
        guest_color: usize,
    ) -> Result<(DiskForest, Vec<NodeId>), ForestError> {
        self.check(outer)?;
        for &h in holes {
            self.check(h)?;
        }
        if holes.len() != guest_color {
            return Err(ForestError::BadHoles(format!(
                "{} holes for guest color {guest_color}",
                holes.len()
            )));
        }
        let gmarked = guest
            .marked(guest_color)
            .ok_or(ForestError::MissingMarked(guest_color))?
            .to_vec();
        let mut host = self.clone();
        let mut map = vec![usize::MAX; guest.len()];

        if guest_color == 1 {
            if !self.inside_or_equal(holes[0], outer) {
                return Err(ForestError::BadHoles("hole outside outer disk".into()));
            }
            map[ROOT] = holes[0];
        } else {
            for (i, &a) in holes.iter().enumerate() {
                if !self.is_strictly_inside(a, outer) {
                    return Err(ForestError::BadHoles(format!(
                        "hole {} is not strictly inside {}",
                        self.name(a),
                        self.name(outer)
                    )));
                }
                for &b in &holes[i + 1..] {
                    if self.rel(a, b) != DiskRelation::Disjoint {
                        return Err(ForestError::BadHoles(format!(
                            "holes {} and {} are not disjoint",
                            self.name(a),
                            self.name(b)
                        )));
                    }
                }
            }
            map[ROOT] = outer;
            for (j, &m) in gmarked.iter().enumerate() {
                map[m] = holes[j];
            }
        }

        for g in guest.top_down() {
            if map[g] != usize::MAX {
                continue;
            }
            let gp = guest.parent[g].expect("only the root has no parent");
            let p = map[gp];
            let hint = guest.name(g);
            let contained: Vec<usize> = (0..gmarked.len())
                .filter(|&j| guest.is_strictly_inside(gmarked[j], g))
                .collect();
            map[g] = if contained.is_empty() {
                host.add_child(p, hint)
            } else {
                let targets: Vec<NodeId> = contained.iter().map(|&j| holes[j]).collect();
                let (q, adopt) = if targets.len() == 1 {
                    (host.parent[targets[0]].expect("holes are not the root"), targets.clone())
                } else {
                    let q = host.lca(&targets);
                    let mut adopt: Vec<NodeId> = Vec::new();
                    for &t in &targets {
                        let mut c = t;
                        while host.parent[c] != Some(q) {
                            c = host.parent[c].expect("q is an ancestor");
                        }
                        if !adopt.contains(&c) {
                            adopt.push(c);
                        }
                    }
                    (q, adopt)
                };
                if !host.inside_or_equal(q, p) {
                    return Err(ForestError::NotPlanar(host.name(q).to_string()));
                }
                for &c in &adopt {
                    let stray = holes
                        .iter()
                        .enumerate()
                        .any(|(j, &h)| !contained.contains(&j) && host.inside_or_equal(h, c));
                    if stray {
                        return Err(ForestError::NotPlanar(host.name(c).to_string()));
                    }
                }
                host.insert_above(&adopt, hint)?
            };
        }
        Ok((host, map))
    }

    /// Nodes ordered so that every parent precedes its children.
    pub fn top_down(&self) -> Vec<NodeId> {
        let mut order = vec![ROOT];
        let mut i = 0;
        while i < order.len() {
            let n = order[i];
            order.extend(self.children(n));
            i += 1;
        }
        order
    }

    /// Removes every disk not in `keep` (the root and marked disks are always
    /// kept), reattaching children to the nearest kept ancestor. Returns the
    /// new forest and the old-to-new index map.
    pub fn prune(&self, keep: &BTreeSet<NodeId>) -> (DiskForest, Vec<Option<NodeId>>) {
        let mut kept: BTreeSet<NodeId> = keep.clone();
        kept.insert(ROOT);
        for v in self.marked.values() {
            kept.extend(v.iter().copied());
        }
        self.relabel(|n| kept.contains(&n), None)
    }

    /// Relabels kept nodes; `order` lists kept nodes in their new index order
    /// (defaults to increasing old index).
    fn relabel(
        &self,
        keep: impl Fn(NodeId) -> bool,
        order: Option<&[NodeId]>,
    ) -> (DiskForest, Vec<Option<NodeId>>) {
        let order: Vec<NodeId> = match order {
            Some(o) => o.to_vec(),
            None => self.nodes().filter(|&n| keep(n)).collect(),
        };
        let mut map = vec![None; self.len()];
        for (new, &old) in order.iter().enumerate() {
            map[old] = Some(new);
        }
        let parent = order
            .iter()
            .map(|&old| {
                let mut cur = self.parent[old];
                while let Some(p) = cur {
                    if let Some(np) = map[p] {
                        return Some(np);
                    }
                    cur = self.parent[p];
                }
                None
            })
            .collect();
        let names = order.iter().map(|&old| self.names[old].clone()).collect();
        let marked = self
            .marked
            .iter()
            .map(|(&c, v)| (c, v.iter().map(|&m| map[m].expect("marked kept")).collect()))
            .collect();
        (
            DiskForest {
                parent,
                names,
                marked,
            },
            map,
        )
    }

    /// Reorders nodes by `order` (a permutation of all node ids with the root
    /// first) and renames them with `name`.
    pub fn reindexed(&self, order: &[NodeId], name: impl Fn(usize) -> String) -> (DiskForest, Vec<NodeId>) {
        let (mut f, map) = self.relabel(|_| true, Some(order));
        f.names = (0..f.len()).map(name).collect();
        (f, map.into_iter().map(|m| m.expect("total")).collect())
    }

    pub fn rename(&mut self, n: NodeId, name: String) {
        self.names[n] = name;
    }
}

impl Default for DiskForest {
    fn default() -> Self {
        DiskForest::new()
    }
}

/// Structural invariant check; reports the first violation.
pub fn validate(f: &DiskForest) -> Result<(), ForestError> {
    if f.parent.first() != Some(&None) {
        return Err(ForestError::NotAForest(f.names.first().cloned().unwrap_or_default()));
    }
    for n in 1..f.len() {
        let mut steps = 0;
        let mut cur = Some(n);
        while let Some(c) = cur {
            if c >= f.len() {
                return Err(ForestError::UnknownNode(c.to_string()));
            }
            if c == ROOT {
                break;
            }
            steps += 1;
            if steps > f.len() {
                return Err(ForestError::NotAForest(f.names[n].clone()));
            }
            cur = f.parent[c];
        }
        if cur.is_none() {
            return Err(ForestError::NotAForest(f.names[n].clone()));
        }
    }
    let mut seen = HashMap::new();
    for (i, name) in f.names.iter().enumerate() {
        if seen.insert(name.as_str(), i).is_some() {
            return Err(ForestError::DuplicateName(name.clone()));
        }
    }
    for (&c, disks) in &f.marked {
        if c == 1 {
            if disks != &[ROOT] {
                return Err(ForestError::BadMarked(1, "must be the ambient disk".into()));
            }
            continue;
        }
        if disks.len() != c {
            return Err(ForestError::BadMarked(c, format!("expected {c} disks, found {}", disks.len())));
        }
        let distinct: BTreeSet<_> = disks.iter().collect();
        if distinct.len() != c {
            return Err(ForestError::BadMarked(c, "duplicate marked disk".into()));
        }
        if disks.iter().any(|&d| d >= f.len() || d == ROOT) {
            return Err(ForestError::BadMarked(c, "marked disks must be proper disks of the forest".into()));
        }
        for (i, &a) in disks.iter().enumerate() {
            if disks[i + 1..].iter().any(|&b| f.rel(a, b) != DiskRelation::Disjoint) {
                return Err(ForestError::BadMarked(c, "marked disks must be disjoint".into()));
            }
        }
    }
    Ok(())
}
