use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::language::alphabet::SymId;
use crate::language::cyk::derive_table;
use crate::language::domains::SequenceDomains;
use crate::language::grammar::{CnfGrammar, CnfRhs, NtId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AndId(pub usize);

/// OR-node: the fact "nonterminal `nt` derives span [start, start+len)".
#[derive(Debug, Clone)]
pub struct OrNode {
    /// Position in the dump/encoding order, shared with AND-nodes.
    pub node_id: usize,
    pub nt: NtId,
    pub start: usize,
    pub len: usize,
    pub children: Vec<AndId>,
    pub parents: Vec<AndId>,
}

/// AND-node: one application of production `prod` deriving the parent span,
/// split after `split` positions (0 for terminal productions).
#[derive(Debug, Clone)]
pub struct AndNode {
    pub node_id: usize,
    pub prod: usize,
    pub start: usize,
    pub split: usize,
    pub len: usize,
    pub parent: OrId,
    pub children: AndChildren,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AndChildren {
    Leaf(usize, SymId),
    Pair(OrId, OrId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DagStatus {
    NonEmpty,
    /// No string of the domain box is in the language.
    Empty,
    /// Degenerate n = 0 case, answered by the nullable-start flag.
    EmptyString { accepted: bool },
}

/// The CYK derivation structure over a domain box, pruned in both
/// directions: an OR-node exists only if its span fact is derivable
/// bottom-up and reachable from the root top-down, and every AND-node's
/// span predicates hold. Empty iff the constraint is unsatisfiable.
#[derive(Debug, Clone)]
pub struct AndOrDag {
    status: DagStatus,
    domains: SequenceDomains,
    nt_names: Vec<String>,
    or_nodes: Vec<OrNode>,
    and_nodes: Vec<AndNode>,
    root: Option<OrId>,
    leaves: BTreeSet<(usize, SymId)>,
    node_ids: usize,
}

impl AndOrDag {
    pub fn status(&self) -> DagStatus {
        self.status
    }

    pub fn is_empty(&self) -> bool {
        !matches!(
            self.status,
            DagStatus::NonEmpty | DagStatus::EmptyString { accepted: true }
        )
    }

    pub fn domains(&self) -> &SequenceDomains {
        &self.domains
    }

    pub fn nonterminal_name(&self, nt: NtId) -> &str {
        &self.nt_names[nt.0]
    }

    pub fn or_nodes(&self) -> &[OrNode] {
        &self.or_nodes
    }

    pub fn and_nodes(&self) -> &[AndNode] {
        &self.and_nodes
    }

    pub fn or_node(&self, id: OrId) -> &OrNode {
        &self.or_nodes[id.0]
    }

    pub fn and_node(&self, id: AndId) -> &AndNode {
        &self.and_nodes[id.0]
    }

    pub fn root(&self) -> Option<OrId> {
        self.root
    }

    /// Surviving (position, symbol) leaves.
    pub fn leaves(&self) -> &BTreeSet<(usize, SymId)> {
        &self.leaves
    }

    /// OR-nodes plus AND-nodes plus leaves; the size measure for the
    /// scaling checks.
    pub fn node_count(&self) -> usize {
        self.or_nodes.len() + self.and_nodes.len() + self.leaves.len()
    }

    /// Text dump: one `or`/`and` line per node in id order, then `leaf`
    /// lines (continuing the id sequence), then `edge parent child` lines.
    /// The root is the first node line.
    pub fn dump(&self) -> String {
        let mut lines: Vec<(usize, String)> = Vec::new();
        for or in &self.or_nodes {
            lines.push((
                or.node_id,
                format!("or {} {} {}", self.nt_names[or.nt.0], or.start, or.len),
            ));
        }
        for and in &self.and_nodes {
            lines.push((
                and.node_id,
                format!("and {} {} {} {}", and.prod, and.start, and.split, and.len),
            ));
        }
        lines.sort();
        let mut out = String::new();
        for (_, line) in &lines {
            out.push_str(line);
            out.push('\n');
        }
        let mut leaf_ids: BTreeMap<(usize, SymId), usize> = BTreeMap::new();
        let mut next = self.node_ids;
        for &(t, v) in &self.leaves {
            leaf_ids.insert((t, v), next);
            out.push_str(&format!(
                "leaf {t} {}\n",
                self.domains.alphabet().name(v)
            ));
            next += 1;
        }
        for or in &self.or_nodes {
            for &child in &or.children {
                out.push_str(&format!(
                    "edge {} {}\n",
                    or.node_id,
                    self.and_nodes[child.0].node_id
                ));
            }
        }
        for and in &self.and_nodes {
            match and.children {
                AndChildren::Leaf(t, v) => {
                    out.push_str(&format!("edge {} {}\n", and.node_id, leaf_ids[&(t, v)]));
                }
                AndChildren::Pair(l, r) => {
                    out.push_str(&format!(
                        "edge {} {}\n",
                        and.node_id, self.or_nodes[l.0].node_id
                    ));
                    out.push_str(&format!(
                        "edge {} {}\n",
                        and.node_id, self.or_nodes[r.0].node_id
                    ));
                }
            }
        }
        out
    }
}

struct Builder<'g> {
    g: &'g CnfGrammar,
    d: &'g SequenceDomains,
    table: crate::language::cyk::DeriveTable,
    dag: AndOrDag,
    index: BTreeMap<(NtId, usize, usize), OrId>,
}

impl Builder<'_> {
    fn or_node(&mut self, nt: NtId, start: usize, len: usize) -> OrId {
        if let Some(&id) = self.index.get(&(nt, start, len)) {
            return id;
        }
        let id = OrId(self.dag.or_nodes.len());
        let node_id = self.dag.node_ids;
        self.dag.node_ids += 1;
        self.dag.or_nodes.push(OrNode {
            node_id,
            nt,
            start,
            len,
            children: Vec::new(),
            parents: Vec::new(),
        });
        self.index.insert((nt, start, len), id);

        for (pi, p) in self.g.productions().iter().enumerate() {
            if p.lhs != nt {
                continue;
            }
            match &p.rhs {
                CnfRhs::Terminal(v) => {
                    if len == 1 && self.d.contains(start, *v) && p.pred.holds(start, 1) {
                        let leaf = AndChildren::Leaf(start, *v);
                        self.push_and(id, pi, start, 0, len, leaf);
                        self.dag.leaves.insert((start, *v));
                    }
                }
                CnfRhs::Pair {
                    left,
                    left_pred,
                    right,
                    right_pred,
                } => {
                    if len < 2 || !p.pred.holds(start, len) {
                        continue;
                    }
                    for split in 1..len {
                        if self.table.get(*left, start, split)
                            && self.table.get(*right, start + split, len - split)
                            && left_pred.holds(start, split)
                            && right_pred.holds(start + split, len - split)
                        {
                            let l = self.or_node(*left, start, split);
                            let r = self.or_node(*right, start + split, len - split);
                            self.push_and(id, pi, start, split, len, AndChildren::Pair(l, r));
                        }
                    }
                }
            }
        }
        id
    }

    fn push_and(
        &mut self,
        parent: OrId,
        prod: usize,
        start: usize,
        split: usize,
        len: usize,
        children: AndChildren,
    ) {
        let and_id = AndId(self.dag.and_nodes.len());
        let node_id = self.dag.node_ids;
        self.dag.node_ids += 1;
        self.dag.and_nodes.push(AndNode {
            node_id,
            prod,
            start,
            split,
            len,
            parent,
            children,
        });
        self.dag.or_nodes[parent.0].children.push(and_id);
        if let AndChildren::Pair(l, r) = children {
            self.dag.or_nodes[l.0].parents.push(and_id);
            self.dag.or_nodes[r.0].parents.push(and_id);
        }
    }
}

/// Builds the pruned AND/OR DAG of `g` over the domain box `d`. A bottom-up
/// CYK pass establishes which span facts are derivable; a top-down walk
/// from (start, 0, n) materializes exactly the reachable nodes, so every
/// node lies on a root-to-leaf path.
pub fn build_andor_dag(g: &CnfGrammar, d: &SequenceDomains) -> Result<AndOrDag> {
    if g.terminals() != d.alphabet() {
        return Err(Error::input(
            "grammar and domains must share the same alphabet",
        ));
    }
    g.validate_for_len(d.n())?;
    let nt_names: Vec<String> = (0..g.num_nonterminals())
        .map(|i| g.nonterminal_name(NtId(i)).to_string())
        .collect();
    let empty = |status| AndOrDag {
        status,
        domains: d.clone(),
        nt_names: nt_names.clone(),
        or_nodes: Vec::new(),
        and_nodes: Vec::new(),
        root: None,
        leaves: BTreeSet::new(),
        node_ids: 0,
    };
    if d.n() == 0 {
        return Ok(empty(DagStatus::EmptyString {
            accepted: g.nullable_start(),
        }));
    }
    if d.is_failed() {
        return Ok(empty(DagStatus::Empty));
    }
    let table = derive_table(g, d);
    if !table.get(g.start(), 0, d.n()) {
        return Ok(empty(DagStatus::Empty));
    }
    let mut builder = Builder {
        g,
        d,
        table,
        dag: empty(DagStatus::NonEmpty),
        index: BTreeMap::new(),
    };
    let root = builder.or_node(g.start(), 0, d.n());
    let mut dag = builder.dag;
    dag.root = Some(root);
    Ok(dag)
}
