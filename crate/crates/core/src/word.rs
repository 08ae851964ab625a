//! Words over a finite atom alphabet, and signed words over the atoms and
//! their formal inverses.

use std::cmp::Ordering;

/// Index into a presentation's atom list.
pub type AtomId = u8;

/// A positive word: a finite sequence of atoms.
///
/// Words order by *shortlex* (length first, then lexicographically by atom
/// id), which is the ordering used for canonical representatives, witness
/// selection and fold order throughout the crate.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Word(Vec<AtomId>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(a: AtomId) -> Self {
        Word(vec![a])
    }

    pub fn from_atoms(atoms: Vec<AtomId>) -> Self {
        Word(atoms)
    }

    pub fn atoms(&self) -> &[AtomId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn starts_with(&self, prefix: &Word) -> bool {
        self.0.starts_with(&prefix.0)
    }

    pub fn ends_with(&self, suffix: &Word) -> bool {
        self.0.ends_with(&suffix.0)
    }

    /// The first `n` atoms as a word.
    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    /// The last `n` atoms as a word.
    pub fn suffix(&self, n: usize) -> Word {
        Word(self.0[self.0.len() - n..].to_vec())
    }

    /// Everything after the first `n` atoms.
    pub fn strip_prefix_len(&self, n: usize) -> Word {
        Word(self.0[n..].to_vec())
    }

    /// Everything before the last `n` atoms.
    pub fn strip_suffix_len(&self, n: usize) -> Word {
        Word(self.0[..self.0.len() - n].to_vec())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<AtomId> for Word {
    fn from_iter<T: IntoIterator<Item = AtomId>>(iter: T) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// One letter of a signed word: an atom or its formal inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SignedLetter {
    pub atom: AtomId,
    pub inverse: bool,
}

/// A word over the atoms and their formal inverses.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct SignedWord(Vec<SignedLetter>);

impl SignedWord {
    pub fn empty() -> Self {
        SignedWord(Vec::new())
    }

    pub fn from_letters(letters: Vec<SignedLetter>) -> Self {
        SignedWord(letters)
    }

    /// Embed a positive word.
    pub fn from_word(w: &Word) -> Self {
        SignedWord(
            w.atoms()
                .iter()
                .map(|&atom| SignedLetter { atom, inverse: false })
                .collect(),
        )
    }

    pub fn letters(&self) -> &[SignedLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, l: SignedLetter) {
        self.0.push(l);
    }

    pub fn concat(&self, other: &SignedWord) -> SignedWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        SignedWord(v)
    }

    /// The formal inverse: reverse the letters and flip every sign.
    pub fn inverse(&self) -> SignedWord {
        SignedWord(
            self.0
                .iter()
                .rev()
                .map(|l| SignedLetter { atom: l.atom, inverse: !l.inverse })
                .collect(),
        )
    }

    /// Net signed letter count (positive minus negative occurrences).
    pub fn exponent_sum(&self) -> i64 {
        self.0
            .iter()
            .map(|l| if l.inverse { -1i64 } else { 1 })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(atoms: &[AtomId]) -> Word {
        Word::from_atoms(atoms.to_vec())
    }

    #[test]
    fn shortlex_orders_by_length_first() {
        assert!(w(&[1, 1]) < w(&[0, 0, 0]));
        assert!(w(&[0, 1]) < w(&[1, 0]));
        assert!(Word::empty() < w(&[0]));
    }

    #[test]
    fn prefix_suffix_helpers() {
        let u = w(&[0, 1, 2]);
        assert_eq!(u.prefix(2), w(&[0, 1]));
        assert_eq!(u.suffix(1), w(&[2]));
        assert_eq!(u.strip_prefix_len(1), w(&[1, 2]));
        assert_eq!(u.strip_suffix_len(2), w(&[0]));
        assert!(u.starts_with(&w(&[0, 1])));
        assert!(!u.ends_with(&w(&[0])));
    }

    #[test]
    fn signed_inverse_reverses_and_flips() {
        let sw = SignedWord::from_letters(vec![
            SignedLetter { atom: 0, inverse: false },
            SignedLetter { atom: 1, inverse: true },
        ]);
        let inv = sw.inverse();
        assert_eq!(
            inv.letters(),
            &[
                SignedLetter { atom: 1, inverse: false },
                SignedLetter { atom: 0, inverse: true },
            ]
        );
        assert_eq!(sw.exponent_sum(), 0);
        assert_eq!(sw.concat(&inv).len(), 4);
    }
}
