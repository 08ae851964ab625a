//! Multifractions and the elementary reduction moves on them.
//!
//! A multifraction `a₁/a₂/…/a_n` stands for the group element
//! `a₁·a₂⁻¹·a₃·a₄⁻¹·…` — odd positions are positive, even positions are
//! inverted. Reduction rewrites a multifraction into an equivalent one by
//! pushing a divisor `x` of one entry through its neighbor using an lcm
//! (or, at the lowest level, by cancelling a common right divisor), and by
//! dropping a trailing trivial entry.

use std::fmt::Write as _;

use crate::divisibility::BasicTable;
use crate::error::{Error, Result};
use crate::monoid::{Element, Monoid};
use crate::word::{AtomId, SignedLetter, SignedWord, Word};

/// An alternating quotient sequence with entries in the monoid. The empty
/// sequence is the group identity; entries may be trivial elsewhere too.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Multifraction {
    entries: Vec<Element>,
}

impl Multifraction {
    pub fn empty() -> Self {
        Multifraction { entries: Vec::new() }
    }

    pub fn from_entries(entries: Vec<Element>) -> Self {
        Multifraction { entries }
    }

    /// The depth ‖a‖: number of entries.
    pub fn depth(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Element] {
        &self.entries
    }

    /// Entry at a 1-based level, matching the usual `a_i` indexing.
    pub fn entry(&self, level: usize) -> &Element {
        &self.entries[level - 1]
    }

    pub fn last(&self) -> Option<&Element> {
        self.entries.last()
    }

    /// The trailing-entry rule: drops the last entry iff it is trivial.
    pub fn apply_rtimes(&self) -> Option<Multifraction> {
        match self.entries.last() {
            Some(e) if e.is_trivial() => Some(Multifraction {
                entries: self.entries[..self.entries.len() - 1].to_vec(),
            }),
            _ => None,
        }
    }
}

/// Identifier of one reduction step, as recorded in traces.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RuleId {
    /// Reduce the divisor `parameter` at the given 1-based level.
    Rix { level: usize, parameter: Element },
    /// Drop a trailing trivial entry.
    Rtimes,
}

impl Monoid {
    /// Split a signed word into its alternating blocks and return the
    /// corresponding multifraction. Inverted runs contribute their letters
    /// in reverse order (`s̄ t̄` stands for `(ts)⁻¹`). The leading positive
    /// block may be empty; the empty word gives the empty multifraction.
    pub fn parse_signed(&self, w: &SignedWord) -> Result<Multifraction> {
        let mut blocks: Vec<Word> = Vec::new();
        let mut run: Vec<AtomId> = Vec::new();
        let mut negative = false;
        let finish = |run: &mut Vec<AtomId>, negative: bool| -> Word {
            let mut atoms = std::mem::take(run);
            if negative {
                atoms.reverse();
            }
            Word::from_atoms(atoms)
        };
        for l in w.letters() {
            if l.inverse != negative {
                blocks.push(finish(&mut run, negative));
                negative = l.inverse;
            }
            run.push(l.atom);
        }
        if !run.is_empty() || !blocks.is_empty() {
            blocks.push(finish(&mut run, negative));
        }
        let mut entries = Vec::with_capacity(blocks.len());
        for b in &blocks {
            entries.push(self.element(b)?);
        }
        Ok(Multifraction::from_entries(entries))
    }

    /// Re-serialize a multifraction as a signed word (inverse of
    /// [`Self::parse_signed`] up to trivial interior entries).
    pub fn signed_word_of(&self, a: &Multifraction) -> SignedWord {
        let mut sw = SignedWord::empty();
        for (idx, e) in a.entries().iter().enumerate() {
            if (idx + 1) % 2 == 1 {
                for &s in e.word().atoms() {
                    sw.push(SignedLetter { atom: s, inverse: false });
                }
            } else {
                for &s in e.word().atoms().iter().rev() {
                    sw.push(SignedLetter { atom: s, inverse: true });
                }
            }
        }
        sw
    }

    /// Product in the multifraction monoid: plain concatenation when ‖a‖ is
    /// even, concatenation with the junction entries multiplied when ‖a‖ is
    /// odd. The empty multifraction is neutral.
    pub fn mf_product(&self, a: &Multifraction, b: &Multifraction) -> Result<Multifraction> {
        if a.is_empty() {
            return Ok(b.clone());
        }
        if b.is_empty() {
            return Ok(a.clone());
        }
        let mut entries = a.entries().to_vec();
        if a.depth() % 2 == 1 {
            let merged = self.mul(entries.last().unwrap(), &b.entries()[0])?;
            *entries.last_mut().unwrap() = merged;
            entries.extend_from_slice(&b.entries()[1..]);
        } else {
            entries.extend_from_slice(b.entries());
        }
        Ok(Multifraction::from_entries(entries))
    }

    /// Parse `a/aba/b` syntax; `[]` (or an empty string) is the empty
    /// multifraction and `1` a trivial entry.
    pub fn parse_mf(&self, text: &str) -> Result<Multifraction> {
        let text = text.trim();
        if text.is_empty() || text == "[]" {
            return Ok(Multifraction::empty());
        }
        let mut entries = Vec::new();
        for part in text.split('/') {
            let w = self.presentation().parse_word(part)?;
            entries.push(self.element(&w)?);
        }
        Ok(Multifraction::from_entries(entries))
    }

    /// Render in `/`-joined syntax; the empty multifraction prints `[]`.
    pub fn render_mf(&self, a: &Multifraction) -> String {
        if a.is_empty() {
            return "[]".to_string();
        }
        let mut out = String::new();
        for (idx, e) in a.entries().iter().enumerate() {
            if idx > 0 {
                out.push('/');
            }
            let _ = write!(out, "{}", self.render(e));
        }
        out
    }

    /// One reduction step: reduce the divisor `x` at level `i` (1-based).
    ///
    /// For even `i`, `x` must left-divide `a_{i+1}` and admit a right lcm
    /// with `a_i`; the lcm's complements rewrite entries `i−1, i, i+1`. For
    /// odd `i ≥ 3` the mirror holds with right division and left lcм. At
    /// level 1 the move divides: `x` must right-divide both `a₁` and `a₂`.
    /// `x = 1` is allowed and returns the input unchanged; unmet
    /// divisibility or lcm preconditions give `None`.
    pub fn apply_r(
        &self,
        table: &BasicTable,
        a: &Multifraction,
        i: usize,
        x: &Element,
    ) -> Result<Option<Multifraction>> {
        let n = a.depth();
        if i < 1 || i >= n {
            return Err(Error::LevelOutOfRange { level: i, depth: n });
        }
        if x.is_trivial() {
            return Ok(Some(a.clone()));
        }
        let mut entries = a.entries().to_vec();
        if i == 1 {
            if !self.right_divides(x, a.entry(1))? || !self.right_divides(x, a.entry(2))? {
                return Ok(None);
            }
            entries[0] = self.right_quotient(x, a.entry(1))?;
            entries[1] = self.right_quotient(x, a.entry(2))?;
        } else if i % 2 == 0 {
            if !self.left_divides(x, a.entry(i + 1))? {
                return Ok(None);
            }
            let Some(lcm) = self.right_lcm(table, x, a.entry(i))? else {
                return Ok(None);
            };
            // x·b_i = a_i·x′ = x ∨ a_i
            let b_i = lcm.right_complement;
            let xp = lcm.left_complement;
            #[cfg(debug_assertions)]
            {
                let lhs = x.word().concat(b_i.word());
                let rhs = a.entry(i).word().concat(xp.word());
                debug_assert!(self.words_equal(&lhs, &rhs)?);
            }
            entries[i] = self.left_quotient(x, a.entry(i + 1))?;
            entries[i - 1] = b_i;
            entries[i - 2] = self.mul(a.entry(i - 1), &xp)?;
        } else {
            if !self.right_divides(x, a.entry(i + 1))? {
                return Ok(None);
            }
            let Some(lcm) = self.left_lcm(table, x, a.entry(i))? else {
                return Ok(None);
            };
            // b_i·x = x′·a_i = x ∨̃ a_i
            let b_i = lcm.right_complement;
            let xp = lcm.left_complement;
            #[cfg(debug_assertions)]
            {
                let lhs = b_i.word().concat(x.word());
                let rhs = xp.word().concat(a.entry(i).word());
                debug_assert!(self.words_equal(&lhs, &rhs)?);
            }
            entries[i] = self.right_quotient(x, a.entry(i + 1))?;
            entries[i - 1] = b_i;
            entries[i - 2] = self.mul(&xp, a.entry(i - 1))?;
        }
        Ok(Some(Multifraction::from_entries(entries)))
    }

    /// Whether no divisor-reduction rule applies. Trailing trivial entries
    /// are not considered (that is a separate, stripping rule): `1/1` is
    /// irreducible here. By the composition law for same-level steps, it
    /// suffices to test atoms.
    pub fn is_irreducible(&self, table: &BasicTable, a: &Multifraction) -> Result<bool> {
        for i in 1..a.depth() {
            if !self.is_irreducible_at(table, a, i)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether no reduction applies at one specific level. Levels at or
    /// beyond the depth are vacuously irreducible.
    pub fn is_irreducible_at(&self, table: &BasicTable, a: &Multifraction, i: usize) -> Result<bool> {
        if i < 1 || i >= a.depth() {
            return Ok(true);
        }
        if i == 1 {
            return Ok(self.right_gcd(a.entry(1), a.entry(2))?.is_trivial());
        }
        let atoms = self.atom_elements()?;
        for x in &atoms {
            let applies = if i % 2 == 0 {
                self.left_divides(x, a.entry(i + 1))?
                    && self.common_right_multiple_exists(table, x, a.entry(i))?
            } else {
                self.right_divides(x, a.entry(i + 1))?
                    && self.common_left_multiple_exists(table, x, a.entry(i))?
            };
            if applies {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every single-atom reduction of `a`, in deterministic order: levels
    /// ascending, atoms ascending within a level, and the trailing-entry
    /// drop last. This enumeration drives the exhaustive oracle.
    pub fn atom_reducts(&self, table: &BasicTable, a: &Multifraction) -> Result<Vec<(RuleId, Multifraction)>> {
        let mut out = Vec::new();
        let atoms = self.atom_elements()?;
        for i in 1..a.depth() {
            for x in &atoms {
                if let Some(b) = self.apply_r(table, a, i, x)? {
                    out.push((
                        RuleId::Rix { level: i, parameter: x.clone() },
                        b,
                    ));
                }
            }
        }
        if let Some(b) = a.apply_rtimes() {
            out.push((RuleId::Rtimes, b));
        }
        Ok(out)
    }

    /// The maximal reduction at level `i`: the largest `x` for which the
    /// level-`i` rule applies, together with the reduced multifraction.
    /// Levels at or beyond the depth return `(1, a)` unchanged. At level 1
    /// the maximum is the right gcd of the first two entries; elsewhere it
    /// is the fold, under lcm, of the compatible divisors of `a_{i+1}` —
    /// which exists exactly when no triple `(x, y, a_i)` with pairwise
    /// common multiples lacks a joint one (the 3-Ore condition).
    pub fn r_i_max(&self, table: &BasicTable, a: &Multifraction, i: usize) -> Result<(Element, Multifraction)> {
        if i < 1 {
            return Err(Error::LevelOutOfRange { level: i, depth: a.depth() });
        }
        if i >= a.depth() {
            return Ok((Element::trivial(), a.clone()));
        }
        let x_max = if i == 1 {
            self.right_gcd(a.entry(1), a.entry(2))?
        } else {
            self.max_compatible_divisor(table, a.entry(i + 1), a.entry(i), i % 2 == 0)?
        };
        let b = self
            .apply_r(table, a, i, &x_max)?
            .expect("maximal reduction parameter must satisfy the rule preconditions");
        Ok((x_max, b))
    }

    /// Fold the divisors of `d` compatible with `neighbor` into their
    /// common lcm. `right_side` selects left-divisors/right-lcm (even
    /// levels); the mirror handles odd levels. When every pair of elements
    /// has a common multiple on this side, the fold is just `d` itself.
    fn max_compatible_divisor(
        &self,
        table: &BasicTable,
        d: &Element,
        neighbor: &Element,
        right_side: bool,
    ) -> Result<Element> {
        if (right_side && table.right_two_ore) || (!right_side && table.left_two_ore) {
            return Ok(d.clone());
        }
        let divs = if right_side {
            self.left_divisor_set(d)?
        } else {
            self.right_divisor_set(d)?
        };
        let compatible = |x: &Element| {
            if right_side {
                self.common_right_multiple_exists(table, x, neighbor)
            } else {
                self.common_left_multiple_exists(table, x, neighbor)
            }
        };
        let mut acc = Element::trivial();
        for w in divs.iter() {
            let x = Element(w.clone());
            if x.is_trivial() || !compatible(&x)? {
                continue;
            }
            let subsumed = if right_side {
                self.left_divides(&x, &acc)?
            } else {
                self.right_divides(&x, &acc)?
            };
            if subsumed {
                continue;
            }
            let j = self.join_among_divisors(&divs, &acc, &x, right_side)?;
            if !compatible(&j)? {
                return Err(Error::ThreeOreViolation {
                    x: self.render(&acc),
                    y: self.render(&x),
                    z: self.render(neighbor),
                });
            }
            acc = j;
        }
        Ok(acc)
    }
}
