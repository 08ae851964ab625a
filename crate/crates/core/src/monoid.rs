//! Validated presentations and the word problem for the presented monoid.
//!
//! Because every relation is length-preserving, the set of positive words
//! equal to a given word is finite and can be saturated by a worklist; the
//! shortlex-minimal member of that set is the canonical form. Classes and
//! canonical forms are memoized in concurrent maps so repeated queries stay
//! cheap across long reductions.

use std::collections::{BTreeSet, VecDeque};
use std::sync::{Arc, OnceLock};

use dashmap::DashMap;

use crate::divisibility::{BasicTable, LcmEntry};
use crate::error::{Error, Result};
use crate::presentation::{Presentation, Relation};
use crate::word::{AtomId, Word};

/// Default bound on the number of words explored per equivalence class.
pub const DEFAULT_CLASS_CAP: usize = 100_000;

/// Classes at most this large get every member memoized in the canonical-form
/// map; larger classes only memoize the words actually queried.
const CANON_MEMO_LIMIT: usize = 4_096;

/// All positive words equal to a given word. Members share one length, and
/// `words` is sorted, so `words[0]` is the shortlex-minimal representative.
#[derive(Debug)]
pub struct Class {
    words: Vec<Word>,
}

impl Class {
    pub fn canonical(&self) -> &Word {
        &self.words[0]
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn size(&self) -> usize {
        self.words.len()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search(w).is_ok()
    }
}

/// A monoid element, held as its shortlex-minimal representative word.
/// The ordering is shortlex on that representative.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Element(pub(crate) Word);

impl Element {
    pub fn trivial() -> Self {
        Element(Word::empty())
    }

    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn into_word(self) -> Word {
        self.0
    }

    /// Word length; well defined on elements because relations preserve it.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }
}

/// A validated presentation together with its memoized word-problem state.
pub struct Monoid {
    pres: Presentation,
    relations: Vec<Relation>,
    rewrites: Vec<(Word, Word)>,
    class_cap: usize,
    accelerate: bool,
    /// Index of the first relation whose two sides use different letter
    /// sets, which makes the support of an element ill defined.
    support_offender: Option<usize>,
    classes: DashMap<Word, Arc<Class>>,
    canon_map: DashMap<Word, Word>,
    pub(crate) right_lcm_cache: DashMap<(Word, Word), LcmEntry>,
    pub(crate) left_lcm_cache: DashMap<(Word, Word), LcmEntry>,
    pub(crate) left_div_cache: DashMap<Word, Arc<BTreeSet<Word>>>,
    pub(crate) right_div_cache: DashMap<Word, Arc<BTreeSet<Word>>>,
    pub(crate) basics: OnceLock<Arc<BasicTable>>,
}

/// Validate a presentation and build the monoid it presents.
///
/// Checks: nonempty alphabet of at most 255 atoms, names matching
/// `[a-z][a-z0-9_]*` with no duplicates, and relations whose sides have equal
/// length (relations with identical sides are dropped, the rest are
/// deduplicated up to swapping sides).
pub fn validate_presentation(pres: Presentation, class_cap: usize) -> Result<Monoid> {
    Monoid::validate(pres, class_cap)
}

impl std::fmt::Debug for Monoid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Monoid")
            .field("atoms", &self.pres.atom_names())
            .field("relations", &self.relations.len())
            .finish_non_exhaustive()
    }
}

fn valid_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

impl Monoid {
    /// [`validate_presentation`] with the default class cap.
    pub fn new(pres: Presentation) -> Result<Monoid> {
        Monoid::validate(pres, DEFAULT_CLASS_CAP)
    }

    pub fn validate(pres: Presentation, class_cap: usize) -> Result<Monoid> {
        if pres.atom_count() == 0 {
            return Err(Error::EmptyAlphabet);
        }
        if pres.atom_count() > 255 {
            return Err(Error::AlphabetTooLarge { count: pres.atom_count() });
        }
        let mut seen_names = BTreeSet::new();
        for name in pres.atom_names() {
            if !valid_atom_name(name) {
                return Err(Error::InvalidAtomName { name: name.clone() });
            }
            if !seen_names.insert(name.as_str()) {
                return Err(Error::DuplicateAtomName { name: name.clone() });
            }
        }
        let mut normalized: BTreeSet<(Word, Word)> = BTreeSet::new();
        for rel in pres.relations() {
            for side in [&rel.lhs, &rel.rhs] {
                if let Some(&id) = side.atoms().iter().find(|&&id| id as usize >= pres.atom_count()) {
                    return Err(Error::UnknownAtom { name: format!("#{id}") });
                }
            }
            if rel.lhs.len() != rel.rhs.len() {
                return Err(Error::NonHomogeneousRelation {
                    lhs: pres.render_word(&rel.lhs),
                    rhs: pres.render_word(&rel.rhs),
                });
            }
            if rel.lhs == rel.rhs {
                continue;
            }
            let (lo, hi) = if rel.lhs <= rel.rhs {
                (rel.lhs.clone(), rel.rhs.clone())
            } else {
                (rel.rhs.clone(), rel.lhs.clone())
            };
            normalized.insert((lo, hi));
        }
        let relations: Vec<Relation> = normalized
            .into_iter()
            .map(|(lhs, rhs)| Relation { lhs, rhs })
            .collect();
        let rewrites: Vec<(Word, Word)> = relations
            .iter()
            .flat_map(|r| {
                [(r.lhs.clone(), r.rhs.clone()), (r.rhs.clone(), r.lhs.clone())]
            })
            .collect();
        let support_offender = relations.iter().position(|r| {
            let set = |w: &Word| w.atoms().iter().copied().collect::<BTreeSet<_>>();
            set(&r.lhs) != set(&r.rhs)
        });
        Ok(Monoid {
            pres,
            relations,
            rewrites,
            class_cap,
            accelerate: true,
            support_offender,
            classes: DashMap::new(),
            canon_map: DashMap::new(),
            right_lcm_cache: DashMap::new(),
            left_lcm_cache: DashMap::new(),
            left_div_cache: DashMap::new(),
            right_div_cache: DashMap::new(),
            basics: OnceLock::new(),
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    /// Relations after normalization (sides ordered, duplicates and
    /// identical-sided relations removed).
    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn class_cap(&self) -> usize {
        self.class_cap
    }

    pub fn set_class_cap(&mut self, cap: usize) {
        self.class_cap = cap;
    }

    /// Whether lcm queries may try the reversing shortcut before falling
    /// back to the exhaustive search. On by default.
    pub fn accelerate(&self) -> bool {
        self.accelerate
    }

    pub fn set_accelerate(&mut self, on: bool) {
        self.accelerate = on;
    }

    pub fn atom_count(&self) -> usize {
        self.pres.atom_count()
    }

    pub fn atom_ids(&self) -> impl Iterator<Item = AtomId> {
        0..self.pres.atom_count() as AtomId
    }

    /// The atoms as elements, canonicalized (length-one relations may
    /// identify two atom names).
    pub fn atom_elements(&self) -> Result<Vec<Element>> {
        let mut out = Vec::new();
        for id in self.atom_ids() {
            let e = self.element(&Word::single(id))?;
            if !out.contains(&e) {
                out.push(e);
            }
        }
        Ok(out)
    }

    pub(crate) fn support_offender(&self) -> Option<&Relation> {
        self.support_offender.map(|i| &self.relations[i])
    }

    /// The equivalence class of `w`: every positive word reachable by
    /// applying defining relations at any position, in either direction.
    pub fn class(&self, w: &Word) -> Result<Arc<Class>> {
        if let Some(canon) = self.canon_map.get(w) {
            let canon = canon.clone();
            if let Some(class) = self.classes.get(&canon) {
                return Ok(class.clone());
            }
        }
        let mut seen: BTreeSet<Word> = BTreeSet::new();
        let mut queue: VecDeque<Word> = VecDeque::new();
        seen.insert(w.clone());
        queue.push_back(w.clone());
        while let Some(cur) = queue.pop_front() {
            for (from, to) in &self.rewrites {
                if from.len() > cur.len() {
                    continue;
                }
                for pos in 0..=cur.len() - from.len() {
                    if &cur.atoms()[pos..pos + from.len()] != from.atoms() {
                        continue;
                    }
                    let mut atoms = cur.atoms().to_vec();
                    atoms.splice(pos..pos + from.len(), to.atoms().iter().copied());
                    let next = Word::from_atoms(atoms);
                    if seen.insert(next.clone()) {
                        if seen.len() > self.class_cap {
                            return Err(Error::ClassSizeExceeded { cap: self.class_cap });
                        }
                        queue.push_back(next);
                    }
                }
            }
        }
        let words: Vec<Word> = seen.into_iter().collect();
        let canonical = words[0].clone();
        let size = words.len();
        let class = self
            .classes
            .entry(canonical.clone())
            .or_insert_with(|| Arc::new(Class { words }))
            .clone();
        if size <= CANON_MEMO_LIMIT {
            for member in class.words() {
                self.canon_map.insert(member.clone(), canonical.clone());
            }
        } else {
            self.canon_map.insert(w.clone(), canonical.clone());
            self.canon_map.insert(canonical.clone(), canonical);
        }
        Ok(class)
    }

    /// Shortlex-minimal representative of the class of `w`.
    pub fn canon(&self, w: &Word) -> Result<Word> {
        Ok(self.class(w)?.canonical().clone())
    }

    /// Whether `u` and `v` present the same monoid element.
    pub fn words_equal(&self, u: &Word, v: &Word) -> Result<bool> {
        if u == v {
            return Ok(true);
        }
        if u.len() != v.len() {
            return Ok(false);
        }
        Ok(self.class(u)?.contains(v))
    }

    pub fn element(&self, w: &Word) -> Result<Element> {
        Ok(Element(self.canon(w)?))
    }

    /// Parse a positive word in this monoid's alphabet and canonicalize it.
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        self.element(&self.pres.parse_word(text)?)
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element> {
        if a.is_trivial() {
            return Ok(b.clone());
        }
        if b.is_trivial() {
            return Ok(a.clone());
        }
        self.element(&a.word().concat(b.word()))
    }

    pub fn render(&self, e: &Element) -> String {
        self.pres.render_word(e.word())
    }
}
