//! Deciding the Ore-style compatibility conditions on a monoid, and the
//! type-FC classification of Artin-Tits presentations.
//!
//! Everything reduces to finitely many bounded lcm searches over the basic
//! elements: two elements are "compatible" when they admit a common
//! multiple on the relevant side, and the 3-Ore condition asks that any
//! pairwise-compatible triple be jointly compatible. For Artin-Tits
//! presentations that condition is equivalent to being of type FC, which
//! can also be tested directly on atom subsets — the agreement of the two
//! routes is a strong cross-check.

use std::sync::Arc;

use crate::divisibility::BasicTable;
use crate::error::{Error, Result};
use crate::monoid::{Element, Monoid};
use crate::presentation::Presentation;
use crate::word::Word;

/// Outcome of the 3-Ore / 2-Ore analysis. The witness, present exactly
/// when a 3-Ore condition fails, is the lexicographically first triple of
/// basics that pairwise admit common multiples but jointly do not.
#[derive(Clone, Debug)]
pub struct OreReport {
    pub satisfies_right_3ore: bool,
    pub satisfies_left_3ore: bool,
    pub satisfies_2ore: bool,
    pub witness: Option<(Element, Element, Element)>,
    pub basics_used: Arc<BasicTable>,
}

/// Whether an Artin-Tits presentation is of type FC.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FcStatus {
    Fc,
    NotFc,
}

/// One atom subset examined by the direct FC test.
#[derive(Clone, Debug)]
pub struct SubsetReport {
    /// The subset, pairwise compatible on the right, with at least two members.
    pub atoms: Vec<Element>,
    /// Whether the iterated lcm of the whole subset exists.
    pub spherical: bool,
    /// That lcm, when it exists.
    pub delta: Option<Element>,
}

/// Hard limit on 2^(number of atoms) for the direct FC subset scan.
const SUBSET_CAP: usize = 1 << 16;

/// Chunk size for parallel triple evaluation; chunks are scanned in order
/// so the first failing triple is found deterministically.
const TRIPLE_CHUNK: usize = 256;

impl Presentation {
    /// Check the Artin-Tits shape syntactically: every relation must equate
    /// the two alternating products `stst…` and `tsts…` of one atom pair,
    /// and no pair may be constrained twice. Returns a reason when violated.
    pub fn artin_tits_violation(&self) -> Option<String> {
        let mut seen_pairs = std::collections::BTreeSet::new();
        for rel in self.relations() {
            let render = || format!("{} = {}", self.render_word(&rel.lhs), self.render_word(&rel.rhs));
            if rel.lhs.len() < 2 || rel.lhs.len() != rel.rhs.len() {
                return Some(format!("relation {} is not length-balanced", render()));
            }
            let (s, t) = (rel.lhs.atoms()[0], rel.rhs.atoms()[0]);
            if s == t {
                return Some(format!("relation {} does not alternate two distinct atoms", render()));
            }
            if !is_alternating(&rel.lhs, s, t) || !is_alternating(&rel.rhs, t, s) {
                return Some(format!("relation {} does not alternate two distinct atoms", render()));
            }
            let pair = (s.min(t), s.max(t));
            if !seen_pairs.insert(pair) {
                return Some(format!(
                    "atoms {} and {} are constrained by two relations",
                    self.atom_name(pair.0),
                    self.atom_name(pair.1)
                ));
            }
        }
        None
    }
}

fn is_alternating(w: &Word, first: crate::word::AtomId, second: crate::word::AtomId) -> bool {
    w.atoms()
        .iter()
        .enumerate()
        .all(|(i, &a)| a == if i % 2 == 0 { first } else { second })
}

impl Monoid {
    /// Whether the presentation has the syntactic Artin-Tits shape.
    pub fn is_artin_tits(&self) -> bool {
        self.presentation().artin_tits_violation().is_none()
    }

    /// Decide the 3-Ore condition (both sides) and report the 2-Ore status.
    /// Both reduce to bounded searches over the finitely many basics; a
    /// triple fails when its three pairwise lcms exist but the join of two
    /// of them admits no common multiple with the third.
    pub fn check_3ore(&self, table: Arc<BasicTable>) -> Result<OreReport> {
        let right_witness = self.first_failing_triple(&table, true)?;
        let left_witness = self.first_failing_triple(&table, false)?;
        let (right_2ore, left_2ore) = self.check_2ore(&table);
        Ok(OreReport {
            satisfies_right_3ore: right_witness.is_none(),
            satisfies_left_3ore: left_witness.is_none(),
            satisfies_2ore: right_2ore && left_2ore,
            witness: right_witness.or(left_witness),
            basics_used: table,
        })
    }

    /// Whether every pair of right (resp. left) basics admits a common
    /// right (resp. left) multiple — precomputed during closure.
    pub fn check_2ore(&self, table: &BasicTable) -> (bool, bool) {
        (table.right_two_ore, table.left_two_ore)
    }

    fn first_failing_triple(
        &self,
        table: &BasicTable,
        right: bool,
    ) -> Result<Option<(Element, Element, Element)>> {
        let basics = if right { &table.right_basics } else { &table.left_basics };
        let members: Vec<&Element> = basics.iter().filter(|e| !e.is_trivial()).collect();
        let n = members.len();
        let mut triples = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    triples.push((i, j, k));
                }
            }
        }
        let eval = |&(i, j, k): &(usize, usize, usize)| -> Result<bool> {
            self.triple_fails(table, members[i], members[j], members[k], right)
        };
        for chunk in triples.chunks(TRIPLE_CHUNK) {
            let flags = self.eval_triples(chunk, &eval)?;
            if let Some(pos) = flags.iter().position(|&f| f) {
                let (i, j, k) = chunk[pos];
                return Ok(Some((members[i].clone(), members[j].clone(), members[k].clone())));
            }
        }
        Ok(None)
    }

    /// Evaluate one chunk of triples, in parallel when enabled. The caller
    /// scans the returned flags in order, so the outcome never depends on
    /// scheduling.
    fn eval_triples<F>(&self, chunk: &[(usize, usize, usize)], eval: &F) -> Result<Vec<bool>>
    where
        F: Fn(&(usize, usize, usize)) -> Result<bool> + Sync,
    {
        #[cfg(feature = "parallel")]
        if chunk.len() >= 16 {
            use rayon::prelude::*;
            return chunk.par_iter().map(eval).collect();
        }
        chunk.iter().map(eval).collect()
    }

    /// A triple fails when its members are pairwise compatible but the
    /// join of the first two has no common multiple with the third.
    fn triple_fails(
        &self,
        table: &BasicTable,
        x: &Element,
        y: &Element,
        z: &Element,
        right: bool,
    ) -> Result<bool> {
        let pair_lcm = |u: &Element, v: &Element| {
            if right {
                self.right_lcm(table, u, v)
            } else {
                self.left_lcm(table, u, v)
            }
        };
        let Some(xy) = pair_lcm(x, y)? else {
            return Ok(false);
        };
        if pair_lcm(x, z)?.is_none() || pair_lcm(y, z)?.is_none() {
            return Ok(false);
        }
        let jointly = if right {
            self.common_right_multiple_exists(table, &xy.lcm, z)?
        } else {
            self.common_left_multiple_exists(table, &xy.lcm, z)?
        };
        Ok(!jointly)
    }

    /// Classify an Artin-Tits presentation as type FC or not: FC is
    /// equivalent to the 3-Ore condition holding on both sides.
    pub fn classify_fc(&self, table: Arc<BasicTable>) -> Result<FcStatus> {
        if let Some(reason) = self.presentation().artin_tits_violation() {
            return Err(Error::NotArtinTits { reason });
        }
        let report = self.check_3ore(table)?;
        Ok(if report.satisfies_right_3ore && report.satisfies_left_3ore {
            FcStatus::Fc
        } else {
            FcStatus::NotFc
        })
    }

    /// The direct definition of type FC: every atom subset whose members
    /// pairwise admit common right multiples must have a global one (the
    /// iterated lcm Δ of the subset). Returns the per-subset evidence;
    /// agreement with [`Self::classify_fc`] is a library-level invariant.
    pub fn check_fc_direct(&self, table: &BasicTable) -> Result<(FcStatus, Vec<SubsetReport>)> {
        if let Some(reason) = self.presentation().artin_tits_violation() {
            return Err(Error::NotArtinTits { reason });
        }
        let atoms = self.atom_elements()?;
        let n = atoms.len();
        if n >= usize::BITS as usize || (1usize << n) > SUBSET_CAP {
            return Err(Error::SubsetBlowup { atoms: n, cap: SUBSET_CAP });
        }
        let mut reports = Vec::new();
        let mut all_spherical = true;
        for mask in 0usize..(1 << n) {
            if mask.count_ones() < 2 {
                continue;
            }
            let subset: Vec<&Element> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| &atoms[i]).collect();
            let mut pairwise = true;
            'pairs: for (idx, x) in subset.iter().enumerate() {
                for y in &subset[idx + 1..] {
                    if !self.common_right_multiple_exists(table, x, y)? {
                        pairwise = false;
                        break 'pairs;
                    }
                }
            }
            if !pairwise {
                continue;
            }
            let mut delta = Some(subset[0].clone());
            for x in &subset[1..] {
                let Some(d) = delta else { break };
                delta = self.right_lcm(table, &d, x)?.map(|r| r.lcm);
            }
            let spherical = delta.is_some();
            all_spherical &= spherical;
            reports.push(SubsetReport {
                atoms: subset.into_iter().cloned().collect(),
                spherical,
                delta,
            });
        }
        let status = if all_spherical { FcStatus::Fc } else { FcStatus::NotFc };
        Ok((status, reports))
    }
}
