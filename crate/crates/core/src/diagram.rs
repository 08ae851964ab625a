//! Reduction diagrams: the tiled trace of a universal reduction run, and
//! the universal van Kampen shapes Γ_n.
//!
//! Both are emitted as plain directed graphs with role-annotated nodes.
//! The combinatorics (adjacency, orientations, roles, counts) is the
//! contract; planar geometry is not encoded.

use std::fmt::Write as _;

use crate::divisibility::BasicTable;
use crate::error::{Error, Result};
use crate::monoid::Monoid;
use crate::multifraction::{Multifraction, RuleId};
use crate::engine::ReductionTrace;

/// Role of a diagram node. Wells are sinks, springs are sources, and
/// four-prong nodes carry two incoming and two outgoing edges (tile
/// centers, and the base point of a Γ_n shape).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NodeRole {
    Boundary,
    Spring,
    Well,
    FourProng,
}

impl NodeRole {
    fn as_str(self) -> &'static str {
        match self {
            NodeRole::Boundary => "boundary",
            NodeRole::Spring => "spring",
            NodeRole::Well => "well",
            NodeRole::FourProng => "four_prong",
        }
    }
}

#[derive(Clone, Debug)]
pub struct DiagramNode {
    pub id: String,
    pub role: NodeRole,
}

/// A directed edge; the label, when present, is an element in canonical
/// word syntax (it re-parses to the canonical element it was printed from).
#[derive(Clone, Debug)]
pub struct DiagramEdge {
    pub from: String,
    pub to: String,
    pub label: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct DiagramGraph {
    pub nodes: Vec<DiagramNode>,
    pub edges: Vec<DiagramEdge>,
    pub base: String,
}

impl DiagramGraph {
    fn node(&mut self, id: String, role: NodeRole) {
        self.nodes.push(DiagramNode { id, role });
    }

    fn edge(&mut self, from: String, to: String, label: Option<String>) {
        self.edges.push(DiagramEdge { from, to, label });
    }

    /// Number of tile centers (four-prong nodes other than the base point).
    pub fn tile_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| n.role == NodeRole::FourProng && n.id != self.base)
            .count()
    }

    fn role_count(&self, role: NodeRole) -> usize {
        self.nodes.iter().filter(|n| n.role == role).count()
    }

    /// Number of wells.
    pub fn well_count(&self) -> usize {
        self.role_count(NodeRole::Well)
    }

    /// Number of springs.
    pub fn spring_count(&self) -> usize {
        self.role_count(NodeRole::Spring)
    }

    /// Number of four-prong nodes (base point included when so annotated).
    pub fn four_prong_count(&self) -> usize {
        self.role_count(NodeRole::FourProng)
    }
}

impl Monoid {
    /// Turn a universal-strategy trace into its tiled diagram: one row of
    /// nodes per snapshot, reading that multifraction along alternating
    /// edges, and one grey (four-prong) tile per recorded step, with the
    /// four side labels of its lcm square on the spokes. Every tile is
    /// re-derived from its rule and checked against the recorded snapshot
    /// before emission.
    pub fn emit_universal_diagram(&self, table: &BasicTable, trace: &ReductionTrace) -> Result<DiagramGraph> {
        let mut g = DiagramGraph::default();
        g.base = "p0.0".to_string();
        let last_row = trace.steps.len();
        self.push_row(&mut g, 0, &trace.initial, last_row);
        let mut prev = trace.initial.clone();
        for (idx, (rule, snap)) in trace.steps.iter().enumerate() {
            let row = idx + 1;
            let RuleId::Rix { level, parameter } = rule else {
                return Err(Error::InconsistentTrace {
                    detail: "trailing-entry strips do not occur in universal-strategy traces".into(),
                });
            };
            let i = *level;
            let applied = self.apply_r(table, &prev, i, parameter).map_err(|e| match e {
                Error::LevelOutOfRange { level, depth } => Error::InconsistentTrace {
                    detail: format!("step {row}: level {level} out of range for depth {depth}"),
                },
                other => other,
            })?;
            let expected = applied.ok_or_else(|| {
                Error::InconsistentTrace {
                    detail: format!(
                        "step {row}: rule R {i} {} does not apply to {}",
                        self.render(parameter),
                        self.render_mf(&prev)
                    ),
                }
            })?;
            if &expected != snap {
                return Err(Error::InconsistentTrace {
                    detail: format!(
                        "step {row}: recorded snapshot {} differs from the rule's result {}",
                        self.render_mf(snap),
                        self.render_mf(&expected)
                    ),
                });
            }
            let labels = self.tile_labels(table, &prev, snap, i, parameter)?;
            self.push_row(&mut g, row, snap, last_row);
            let tile = format!("t{row}");
            g.node(tile.clone(), NodeRole::FourProng);
            let above = row - 1;
            g.edge(format!("p{above}.{}", i - 1), tile.clone(), Some(labels[0].clone()));
            g.edge(format!("p{above}.{}", i + 1), tile.clone(), Some(labels[1].clone()));
            g.edge(tile.clone(), format!("p{row}.{}", i - 1), Some(labels[2].clone()));
            g.edge(tile, format!("p{row}.{}", i + 1), Some(labels[3].clone()));
            prev = snap.clone();
        }
        if prev != trace.final_mf {
            return Err(Error::InconsistentTrace {
                detail: format!(
                    "final multifraction {} is not the last snapshot {}",
                    self.render_mf(&trace.final_mf),
                    self.render_mf(&prev)
                ),
            });
        }
        Ok(g)
    }

    /// One snapshot row: nodes `p{row}.0 … p{row}.depth` joined by edges
    /// that read the multifraction with alternating orientations.
    fn push_row(&self, g: &mut DiagramGraph, row: usize, mf: &Multifraction, last_row: usize) {
        let n = mf.depth();
        for j in 0..=n {
            let role = if row == 0 || row == last_row || j == 0 || j == n {
                NodeRole::Boundary
            } else if j % 2 == 1 {
                NodeRole::Well
            } else {
                NodeRole::Spring
            };
            g.node(format!("p{row}.{j}"), role);
        }
        for i in 1..=n {
            let label = Some(self.render(mf.entry(i)));
            if i % 2 == 1 {
                g.edge(format!("p{row}.{}", i - 1), format!("p{row}.{i}"), label);
            } else {
                g.edge(format!("p{row}.{i}"), format!("p{row}.{}", i - 1), label);
            }
        }
    }

    /// The four side labels of a tile's square, with its defining
    /// equalities checked in the monoid. Even level: `x·b_i = a_i·x′` with
    /// `x·b_{i+1} = a_{i+1}`; odd level ≥ 3 mirrored; level 1 is the
    /// division square `b₁x = a₁, b₂x = a₂`.
    fn tile_labels(
        &self,
        table: &BasicTable,
        prev: &Multifraction,
        next: &Multifraction,
        i: usize,
        x: &crate::monoid::Element,
    ) -> Result<[String; 4]> {
        let bad = |detail: String| Error::InconsistentTrace { detail };
        if i == 1 {
            for level in [1, 2] {
                let glued = next.entry(level).word().concat(x.word());
                if !self.words_equal(&glued, prev.entry(level).word())? {
                    return Err(bad(format!(
                        "division tile at level {level}: {}·{} ≠ {}",
                        self.render(next.entry(level)),
                        self.render(x),
                        self.render(prev.entry(level))
                    )));
                }
            }
            return Ok([
                self.render(prev.entry(1)),
                self.render(prev.entry(2)),
                self.render(next.entry(1)),
                self.render(next.entry(2)),
            ]);
        }
        let (lcm, lhs, rhs) = if i % 2 == 0 {
            let r = self
                .right_lcm(table, x, prev.entry(i))?
                .ok_or_else(|| bad(format!("no lcm square at level {i}")))?;
            let lhs = x.word().concat(next.entry(i).word());
            let rhs = prev.entry(i).word().concat(r.left_complement.word());
            (r, lhs, rhs)
        } else {
            let r = self
                .left_lcm(table, x, prev.entry(i))?
                .ok_or_else(|| bad(format!("no lcm square at level {i}")))?;
            let lhs = next.entry(i).word().concat(x.word());
            let rhs = r.left_complement.word().concat(prev.entry(i).word());
            (r, lhs, rhs)
        };
        if next.entry(i) != &lcm.right_complement || !self.words_equal(&lhs, &rhs)? {
            return Err(bad(format!(
                "tile at level {i} is not the lcm square of {} and {}",
                self.render(x),
                self.render(prev.entry(i))
            )));
        }
        Ok([
            self.render(x),
            self.render(prev.entry(i)),
            self.render(next.entry(i)),
            self.render(&lcm.left_complement),
        ])
    }
}

/// The universal shape Γ_n: concentric even rings 4, 6, …, n of alternating
/// cycles, all sharing the base point, with a four-prong center in every
/// cell. Swallowed ring nodes become wells (sinks) at odd positions and
/// springs (sources) at even ones; the outermost cycle is the boundary.
pub fn gamma_shape(n: usize) -> Result<DiagramGraph> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::BadDepth { n });
    }
    let mut g = DiagramGraph::default();
    g.base = "base".to_string();
    g.node("base".into(), NodeRole::FourProng);
    let ring_node = |m: usize, k: usize| -> String {
        if k == 0 {
            "base".into()
        } else {
            format!("r{m}.{k}")
        }
    };
    for m in (4..=n).step_by(2) {
        for k in 1..m {
            let role = if m == n {
                NodeRole::Boundary
            } else if k % 2 == 1 {
                NodeRole::Well
            } else {
                NodeRole::Spring
            };
            g.node(ring_node(m, k), role);
        }
        // Cycle edges: segment j joins positions j−1 and j (mod m), odd
        // segments forward, even ones backward.
        for j in 1..=m {
            let a = ring_node(m, j - 1);
            let b = ring_node(m, j % m);
            if j % 2 == 1 {
                g.edge(a, b, None);
            } else {
                g.edge(b, a, None);
            }
        }
        let inner = m - 2;
        if m == 4 {
            // The base cell: one center on the 4-cycle.
            g.node("c4.0".into(), NodeRole::FourProng);
            for k in 0..4 {
                spoke(&mut g, "c4.0", &ring_node(4, k), k);
            }
            continue;
        }
        // Ring cells: center t sits between inner positions t−1, t (mod
        // inner ring size) and outer positions t, t+1.
        for t in 1..=(m - 2) {
            let c = format!("c{m}.{t}");
            g.node(c.clone(), NodeRole::FourProng);
            for (pos, id) in [
                (t - 1, ring_node(inner, t - 1)),
                (t % inner, ring_node(inner, t % inner)),
                (t, ring_node(m, t)),
                (t + 1, ring_node(m, t + 1)),
            ] {
                spoke(&mut g, &c, &id, pos);
            }
        }
        // Radial edges between the two cycles, one per cell boundary,
        // directed from the even-position endpoint to the odd one.
        let radial = |inner_pos: usize, outer_pos: usize, g: &mut DiagramGraph| {
            let a = ring_node(inner, inner_pos);
            let b = ring_node(m, outer_pos);
            if outer_pos % 2 == 1 {
                g.edge(a, b, None);
            } else {
                g.edge(b, a, None);
            }
        };
        radial(0, 1, &mut g);
        for t in 1..=(m - 3) {
            radial(t, t + 1, &mut g);
        }
        radial(0, m - 1, &mut g);
    }
    Ok(g)
}

/// A center spoke: even corner positions feed the center, odd ones drain it.
fn spoke(g: &mut DiagramGraph, center: &str, corner: &str, pos: usize) {
    if pos % 2 == 0 {
        g.edge(corner.to_string(), center.to_string(), None);
    } else {
        g.edge(center.to_string(), corner.to_string(), None);
    }
}

/// Serialize a diagram as DOT, byte-stable: nodes and edges appear in
/// construction order, roles as attributes, tiles filled grey, the base
/// point double-circled.
pub fn render_dot(g: &DiagramGraph) -> String {
    let mut out = String::from("digraph diagram {\n");
    for n in &g.nodes {
        let mut attrs = format!("role={}", n.role.as_str());
        if n.role == NodeRole::FourProng {
            attrs.push_str(", style=filled, fillcolor=lightgrey");
        }
        if n.id == g.base {
            attrs.push_str(", peripheries=2");
        }
        let _ = writeln!(out, "  \"{}\" [{attrs}];", n.id);
    }
    for e in &g.edges {
        match &e.label {
            Some(l) => {
                let _ = writeln!(out, "  \"{}\" -> \"{}\" [label=\"{}\"];", e.from, e.to, l);
            }
            None => {
                let _ = writeln!(out, "  \"{}\" -> \"{}\";", e.from, e.to);
            }
        }
    }
    out.push_str("}\n");
    out
}
