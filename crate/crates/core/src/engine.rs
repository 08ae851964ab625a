//! Full reduction: the universal strategy, normal forms, and the word
//! problem for the enveloping group, plus an exhaustive oracle that works
//! without any confluence assumption.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::divisibility::BasicTable;
use crate::error::{Error, Result};
use crate::monoid::{Element, Monoid};
use crate::multifraction::{Multifraction, RuleId};
use crate::word::SignedWord;

/// The record of one reduction run: every nontrivial step with the
/// multifraction it produced. Trivial steps (maximal parameter 1) are not
/// recorded, so consecutive snapshots are always distinct.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReductionTrace {
    pub initial: Multifraction,
    pub steps: Vec<(RuleId, Multifraction)>,
    pub final_mf: Multifraction,
}

/// The unique fully-irreducible representative of a group element: no
/// divisor move applies and the last entry is nontrivial (or it is empty).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NormalForm {
    mf: Multifraction,
}

impl NormalForm {
    pub fn mf(&self) -> &Multifraction {
        &self.mf
    }

    pub fn into_mf(self) -> Multifraction {
        self.mf
    }

    /// The depth of the group element: number of entries of its normal form.
    pub fn depth(&self) -> usize {
        self.mf.depth()
    }

    pub fn is_identity(&self) -> bool {
        self.mf.is_empty()
    }

    /// The last entry of the normal form; the identity has none.
    pub fn denominator(&self) -> Result<Element> {
        self.mf.last().cloned().ok_or(Error::TrivialElement)
    }
}

/// The universal reduction schedule U(n): empty for n ≤ 1, otherwise
/// (1, 2, …, n−1) followed by U(n−2). Applying the maximal reduction along
/// it leaves any depth-n multifraction irreducible at every level.
pub fn universal_sequence(n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut m = n;
    while m > 1 {
        out.extend(1..m);
        m -= 2;
    }
    out
}

/// The sweep Σ(m) = (m, m−2, m−4, …) down to 2 or 1: applied after the
/// levels below m are already irreducible, it extends irreducibility to
/// level m while restoring the lower levels it disturbs.
pub fn sigma_sequence(m: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut i = m;
    while i >= 1 {
        out.push(i);
        if i < 2 {
            break;
        }
        i -= 2;
    }
    out
}

/// How a word-problem verdict was reached.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SolveBasis {
    /// The universal strategy: valid when the 3-Ore condition holds.
    Universal,
    /// The exhaustive reduction tree: needs no confluence assumption.
    Exhaustive,
}

/// Outcome of the word problem for one signed word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Identity(SolveBasis),
    NotIdentity(SolveBasis),
    Undecided { reason: String },
}

impl Monoid {
    /// Reduce along the universal schedule U(‖a‖): the result admits no
    /// divisor move at any level. Nontrivial steps are recorded in order.
    pub fn reduce_universal(&self, table: &BasicTable, a: &Multifraction) -> Result<(Multifraction, ReductionTrace)> {
        let mut current = a.clone();
        let mut steps = Vec::new();
        for i in universal_sequence(a.depth()) {
            let (x, next) = self.r_i_max(table, &current, i)?;
            if !x.is_trivial() {
                steps.push((RuleId::Rix { level: i, parameter: x }, next.clone()));
            }
            current = next;
        }
        let trace = ReductionTrace {
            initial: a.clone(),
            steps,
            final_mf: current.clone(),
        };
        Ok((current, trace))
    }

    /// Reduce fully: run the universal schedule, then strip trailing
    /// trivial entries. Stripping cannot create new divisor moves at the
    /// surviving levels, which a final assertion double-checks.
    pub fn reduce_hat(&self, table: &BasicTable, a: &Multifraction) -> Result<(NormalForm, ReductionTrace)> {
        let (mut current, mut trace) = self.reduce_universal(table, a)?;
        while let Some(next) = current.apply_rtimes() {
            current = next;
            trace.steps.push((RuleId::Rtimes, current.clone()));
        }
        trace.final_mf = current.clone();
        let trailing_trivial = current.last().is_some_and(Element::is_trivial);
        if trailing_trivial || !self.is_irreducible(table, &current)? {
            return Err(Error::IrreducibilityAssertionFailed {
                detail: format!(
                    "reduction of {} stopped at the reducible {}",
                    self.render_mf(a),
                    self.render_mf(&current)
                ),
            });
        }
        Ok((NormalForm { mf: current }, trace))
    }

    /// Normal form of the group element spelled by a signed word.
    pub fn nf_of_signed(&self, table: &BasicTable, w: &SignedWord) -> Result<NormalForm> {
        let a = self.parse_signed(w)?;
        Ok(self.reduce_hat(table, &a)?.0)
    }

    /// Whether a signed word spells the group identity: true exactly when
    /// its multifraction reduces to the empty one.
    pub fn is_identity(&self, table: &BasicTable, w: &SignedWord) -> Result<bool> {
        Ok(self.nf_of_signed(table, w)?.is_identity())
    }

    /// Whether two signed words spell the same group element: their normal
    /// forms are compared entrywise.
    pub fn group_equal(&self, table: &BasicTable, w1: &SignedWord, w2: &SignedWord) -> Result<bool> {
        Ok(self.nf_of_signed(table, w1)? == self.nf_of_signed(table, w2)?)
    }

    /// Group multiplication on normal forms: multiply as multifractions,
    /// then reduce again.
    pub fn multiply_nf(&self, table: &BasicTable, g: &NormalForm, h: &NormalForm) -> Result<NormalForm> {
        let prod = self.mf_product(g.mf(), h.mf())?;
        Ok(self.reduce_hat(table, &prod)?.0)
    }

    /// Exhaustively explore every chain of single-atom reductions from `a`
    /// and return the set of fully-irreducible leaves. Needs no confluence:
    /// a singleton certifies confluence from `a`, several leaves certify
    /// non-confluence. `node_cap` bounds the number of distinct
    /// multifractions visited.
    pub fn naive_reduce(
        &self,
        table: &BasicTable,
        a: &Multifraction,
        node_cap: usize,
    ) -> Result<BTreeSet<Multifraction>> {
        let mut visited: BTreeSet<Multifraction> = BTreeSet::new();
        let mut leaves: BTreeSet<Multifraction> = BTreeSet::new();
        visited.insert(a.clone());
        let mut frontier = vec![a.clone()];
        while !frontier.is_empty() {
            let expanded = self.expand_frontier(table, &frontier)?;
            let mut next = Vec::new();
            for (node, children) in frontier.iter().zip(expanded) {
                if children.is_empty() {
                    leaves.insert(node.clone());
                    continue;
                }
                for c in children {
                    if visited.contains(&c) {
                        continue;
                    }
                    visited.insert(c.clone());
                    if visited.len() > node_cap {
                        return Err(Error::NodeCapExceeded { cap: node_cap });
                    }
                    next.push(c);
                }
            }
            frontier = next;
        }
        Ok(leaves)
    }

    /// Expand one breadth-first layer of the reduction tree. With the
    /// `parallel` feature the nodes of a layer are expanded concurrently;
    /// results keep the frontier's order either way, so the outcome is
    /// identical.
    fn expand_frontier(&self, table: &BasicTable, frontier: &[Multifraction]) -> Result<Vec<Vec<Multifraction>>> {
        let children_of = |node: &Multifraction| -> Result<Vec<Multifraction>> {
            Ok(self
                .atom_reducts(table, node)?
                .into_iter()
                .map(|(_, b)| b)
                .collect())
        };
        #[cfg(feature = "parallel")]
        if frontier.len() >= 4 {
            use rayon::prelude::*;
            return frontier.par_iter().map(children_of).collect();
        }
        frontier.iter().map(children_of).collect()
    }

    /// Decide whether a signed word spells the identity. The universal
    /// strategy answers first; if the presentation turns out not to satisfy
    /// the 3-Ore condition, the exhaustive tree takes over: any empty leaf
    /// certifies the identity, a unique nonempty leaf certifies the
    /// opposite, and anything else (including hitting `node_cap`) is
    /// reported undecided.
    pub fn solve_signed(&self, table: &BasicTable, w: &SignedWord, node_cap: usize) -> Result<Verdict> {
        let a = self.parse_signed(w)?;
        match self.reduce_hat(table, &a) {
            Ok((nf, _)) => Ok(if nf.is_identity() {
                Verdict::Identity(SolveBasis::Universal)
            } else {
                Verdict::NotIdentity(SolveBasis::Universal)
            }),
            Err(Error::ThreeOreViolation { .. }) => match self.naive_reduce(table, &a, node_cap) {
                Ok(leaves) => Ok(if leaves.iter().any(Multifraction::is_empty) {
                    Verdict::Identity(SolveBasis::Exhaustive)
                } else if leaves.len() == 1 {
                    Verdict::NotIdentity(SolveBasis::Exhaustive)
                } else {
                    Verdict::Undecided {
                        reason: format!(
                            "{} distinct irreducible reducts, none empty",
                            leaves.len()
                        ),
                    }
                }),
                Err(Error::NodeCapExceeded { cap }) => Ok(Verdict::Undecided {
                    reason: format!("exhaustive search exceeded {cap} nodes"),
                }),
                Err(e) => Err(e),
            },
            Err(e) => Err(e),
        }
    }

    /// Serialize a trace: one line per step (`R <level> <divisor>` or `Rx`)
    /// followed by the snapshot it produced, bracketed by the initial and
    /// final multifractions.
    pub fn trace_to_text(&self, trace: &ReductionTrace) -> String {
        let mut out = format!("initial: {}\n", self.render_mf(&trace.initial));
        for (rule, snap) in &trace.steps {
            match rule {
                RuleId::Rix { level, parameter } => {
                    let _ = writeln!(
                        out,
                        "R {} {} {}",
                        level,
                        self.render(parameter),
                        self.render_mf(snap)
                    );
                }
                RuleId::Rtimes => {
                    let _ = writeln!(out, "Rx {}", self.render_mf(snap));
                }
            }
        }
        let _ = write!(out, "final: {}", self.render_mf(&trace.final_mf));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Presentation;

    fn monoid(preset: &str) -> Monoid {
        Monoid::new(Presentation::preset(preset).unwrap()).unwrap()
    }

    fn mf(m: &Monoid, s: &str) -> Multifraction {
        m.parse_mf(s).unwrap()
    }

    #[test]
    fn universal_sequence_examples() {
        assert!(universal_sequence(0).is_empty());
        assert!(universal_sequence(1).is_empty());
        assert_eq!(universal_sequence(2), vec![1]);
        assert_eq!(universal_sequence(4), vec![1, 2, 3, 1]);
        assert_eq!(universal_sequence(6), vec![1, 2, 3, 4, 5, 1, 2, 3, 1]);
    }

    #[test]
    fn universal_sequence_matches_double_loop() {
        for n in 0..=12 {
            let mut loops = Vec::new();
            for p in 1..=n / 2 {
                for i in 1..=(n + 1 - 2 * p) {
                    loops.push(i);
                }
            }
            assert_eq!(universal_sequence(n), loops, "n = {n}");
        }
    }

    #[test]
    fn sigma_sequence_examples() {
        assert_eq!(sigma_sequence(1), vec![1]);
        assert_eq!(sigma_sequence(2), vec![2]);
        assert_eq!(sigma_sequence(5), vec![5, 3, 1]);
        assert_eq!(sigma_sequence(6), vec![6, 4, 2]);
    }

    #[test]
    fn braid_reduction_with_trace() {
        let m = monoid("braid:3");
        let t = m.basic_table().unwrap();
        let (nf, trace) = m.reduce_hat(&t, &mf(&m, "a/aba/b")).unwrap();
        assert_eq!(m.render_mf(nf.mf()), "a/ab");
        assert_eq!(
            m.trace_to_text(&trace),
            "initial: a/aba/b\nR 1 a 1/ab/b\nR 2 b a/ab/1\nRx a/ab\nfinal: a/ab"
        );
    }

    #[test]
    fn cancellation_collapses_to_empty() {
        let m = monoid("braid:3");
        let t = m.basic_table().unwrap();
        let (nf, trace) = m.reduce_hat(&t, &mf(&m, "a/a")).unwrap();
        assert!(nf.is_identity());
        assert_eq!(
            m.trace_to_text(&trace),
            "initial: a/a\nR 1 a 1/1\nRx 1\nRx []\nfinal: []"
        );
        let (nf2, _) = m.reduce_hat(&t, &mf(&m, "1/a/a")).unwrap();
        assert!(nf2.is_identity());
    }

    #[test]
    fn raag_inverse_normal_form() {
        let m = monoid("raag:ab,bc");
        let t = m.basic_table().unwrap();
        let (nf, _) = m.reduce_hat(&t, &mf(&m, "1/a/bc/a")).unwrap();
        assert_eq!(m.render_mf(nf.mf()), "b/a/c/a");
        assert_eq!(nf.depth(), 4);
        assert_eq!(m.render(&nf.denominator().unwrap()), "a");
    }

    #[test]
    fn depth_and_denominator_edges() {
        let m = monoid("braid:3");
        let t = m.basic_table().unwrap();
        let (identity, _) = m.reduce_hat(&t, &Multifraction::empty()).unwrap();
        assert_eq!(identity.depth(), 0);
        assert!(matches!(identity.denominator(), Err(Error::TrivialElement)));
        let (one_deep, _) = m.reduce_hat(&t, &mf(&m, "ab")).unwrap();
        assert_eq!(one_deep.depth(), 1);
    }

    #[test]
    fn word_problem_on_presets() {
        let braid = monoid("braid:3");
        let tb = braid.basic_table().unwrap();
        let p = braid.presentation();
        assert!(braid.is_identity(&tb, &p.parse_signed("aA").unwrap()).unwrap());
        assert!(braid
            .is_identity(&tb, &p.parse_signed("abaBAB").unwrap())
            .unwrap());
        assert!(!braid.is_identity(&tb, &p.parse_signed("aB").unwrap()).unwrap());
        assert!(braid
            .group_equal(
                &tb,
                &p.parse_signed("aba").unwrap(),
                &p.parse_signed("bab").unwrap()
            )
            .unwrap());
        let free = monoid("free:2");
        let tf = free.basic_table().unwrap();
        let pf = free.presentation();
        assert!(!free
            .group_equal(&tf, &pf.parse_signed("a").unwrap(), &pf.parse_signed("b").unwrap())
            .unwrap());
    }

    #[test]
    fn normal_form_multiplication() {
        let m = monoid("braid:3");
        let t = m.basic_table().unwrap();
        let g = m.reduce_hat(&t, &mf(&m, "a")).unwrap().0;
        let e = m.reduce_hat(&t, &Multifraction::empty()).unwrap().0;
        assert_eq!(m.multiply_nf(&t, &g, &e).unwrap(), g);
        let g_inv = m.reduce_hat(&t, &mf(&m, "1/a")).unwrap().0;
        assert!(m.multiply_nf(&t, &g, &g_inv).unwrap().is_identity());
        let big_inv = m.reduce_hat(&t, &mf(&m, "1/aba")).unwrap().0;
        let prod = m.multiply_nf(&t, &g, &big_inv).unwrap();
        assert_eq!(m.render_mf(prod.mf()), "1/ab");
    }

    #[test]
    fn exhaustive_oracle() {
        let affine = monoid("affine-A2");
        let ta = affine.basic_table().unwrap();
        let leaves = affine.naive_reduce(&ta, &mf(&affine, "1/c/aba"), 10_000).unwrap();
        let rendered: Vec<String> = leaves.iter().map(|l| affine.render_mf(l)).collect();
        assert_eq!(rendered, vec!["ac/ca/ba", "bc/cb/ab"]);
        let braid = monoid("braid:3");
        let tbr = braid.basic_table().unwrap();
        let single = braid.naive_reduce(&tbr, &mf(&braid, "a/aba/b"), 10_000).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(braid.render_mf(single.first().unwrap()), "a/ab");
        let still = mf(&braid, "a/b");
        assert_eq!(
            braid.naive_reduce(&tbr, &still, 10_000).unwrap(),
            [still.clone()].into_iter().collect()
        );
        assert!(matches!(
            braid.naive_reduce(&tbr, &mf(&braid, "a/aba/b"), 2),
            Err(Error::NodeCapExceeded { cap: 2 })
        ));
    }

    #[test]
    fn solver_verdicts() {
        let affine = monoid("affine-A2");
        let t = affine.basic_table().unwrap();
        let p = affine.presentation();
        let identity = affine
            .solve_signed(&t, &p.parse_signed("abaBAB").unwrap(), 10_000)
            .unwrap();
        assert_eq!(identity, Verdict::Identity(SolveBasis::Universal));
        let undecided = affine
            .solve_signed(&t, &p.parse_signed("Caba").unwrap(), 10_000)
            .unwrap();
        assert!(matches!(undecided, Verdict::Undecided { .. }));
        let braid = monoid("braid:3");
        let tb = braid.basic_table().unwrap();
        let not_id = braid
            .solve_signed(&tb, &braid.presentation().parse_signed("aB").unwrap(), 10_000)
            .unwrap();
        assert_eq!(not_id, Verdict::NotIdentity(SolveBasis::Universal));
    }
}
