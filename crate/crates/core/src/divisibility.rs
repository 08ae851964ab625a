//! Divisibility structure of the monoid: divisor sets, gcds, conditional
//! lcms with complements, syntactic reversing as an accelerator, and the
//! closure of the atoms under complement (basic elements).
//!
//! All length bounds follow from one fact: if every basic element has length
//! at most C, then an existing lcm of `a` and `b` has length at most
//! C(ℓ(a)+ℓ(b)). Bounded searches with that bound are therefore complete,
//! which turns existence questions into terminating procedures.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::monoid::{Element, Monoid};
use crate::word::{AtomId, Word};

/// A computed least common multiple, together with both complements.
///
/// For a *right* lcm of `(a, b)`: `lcm = a·right_complement = b·left_complement`.
/// For a *left* lcm of `(a, b)`: `lcm = right_complement·a = left_complement·b`.
/// In both cases the two complements have trivial gcd on the relevant side,
/// which is exactly what certifies minimality of the common multiple.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LcmResult {
    pub lcm: Element,
    pub left_complement: Element,
    pub right_complement: Element,
}

/// Cache entry for an lcm query: either a certified result, or a record
/// that no common multiple exists up to the stated length bound.
#[derive(Clone)]
pub(crate) enum LcmEntry {
    Found(Arc<LcmResult>),
    NoneUpTo(usize),
}

/// Safety limits for the basic-element closure.
#[derive(Clone, Copy, Debug)]
pub struct BasicCaps {
    pub size_cap: usize,
    pub length_cap: usize,
}

impl Default for BasicCaps {
    fn default() -> Self {
        BasicCaps { size_cap: 10_000, length_cap: 64 }
    }
}

/// The closure of the atoms (plus 1) under right and left complement, the
/// length constant `c_max` bounding every lcm search, per-side flags saying
/// whether *every* pair of basics on that side has a common multiple (which
/// makes lcm existence unconditional), and atom-level complement tables
/// driving syntactic reversing.
#[derive(Debug)]
pub struct BasicTable {
    pub right_basics: BTreeSet<Element>,
    pub left_basics: BTreeSet<Element>,
    pub c_max: usize,
    pub right_two_ore: bool,
    pub left_two_ore: bool,
    pub(crate) right_rev: HashMap<(AtomId, AtomId), (Word, Word)>,
    pub(crate) left_rev: HashMap<(AtomId, AtomId), (Word, Word)>,
}

impl BasicTable {
    /// Search bound for a right or left lcm of elements of the given lengths.
    pub fn lcm_bound(&self, la: usize, lb: usize) -> usize {
        self.c_max * (la + lb)
    }
}

/// Hard stop on the number of frontier elements in the exhaustive cone
/// search; hitting it signals an input far outside the intended scale.
const CONE_NODE_CAP: usize = 500_000;

/// Step cap factor for the public reversing entry point.
pub const REVERSE_STEP_FACTOR: usize = 10;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Right,
    Left,
}

impl Monoid {
    /// All left divisors of `a`, as canonical words: prefixes of every word
    /// in the class of `a`, canonicalized. Cached per element.
    pub fn left_divisor_set(&self, a: &Element) -> Result<Arc<BTreeSet<Word>>> {
        self.divisor_set(a, Side::Left)
    }

    /// All right divisors of `a` (suffix version of [`Self::left_divisor_set`]).
    pub fn right_divisor_set(&self, a: &Element) -> Result<Arc<BTreeSet<Word>>> {
        self.divisor_set(a, Side::Right)
    }

    fn divisor_set(&self, a: &Element, side: Side) -> Result<Arc<BTreeSet<Word>>> {
        let cache = match side {
            Side::Left => &self.left_div_cache,
            Side::Right => &self.right_div_cache,
        };
        if let Some(hit) = cache.get(a.word()) {
            return Ok(hit.clone());
        }
        let class = self.class(a.word())?;
        let mut raw: BTreeSet<Word> = BTreeSet::new();
        for w in class.words() {
            for k in 0..=w.len() {
                raw.insert(match side {
                    Side::Left => w.prefix(k),
                    Side::Right => w.suffix(k),
                });
            }
        }
        let mut divs = BTreeSet::new();
        for w in raw {
            divs.insert(self.canon(&w)?);
        }
        let divs = Arc::new(divs);
        cache.insert(a.word().clone(), divs.clone());
        Ok(divs)
    }

    /// Whether `x` left-divides `a`, i.e. `a = x·y` for some `y`.
    pub fn left_divides(&self, x: &Element, a: &Element) -> Result<bool> {
        if x.is_trivial() {
            return Ok(true);
        }
        if x.len() > a.len() {
            return Ok(false);
        }
        if x.len() == a.len() {
            return Ok(x == a);
        }
        Ok(self.left_divisor_set(a)?.contains(x.word()))
    }

    /// Whether `x` right-divides `a`, i.e. `a = y·x` for some `y`.
    pub fn right_divides(&self, x: &Element, a: &Element) -> Result<bool> {
        if x.is_trivial() {
            return Ok(true);
        }
        if x.len() > a.len() {
            return Ok(false);
        }
        if x.len() == a.len() {
            return Ok(x == a);
        }
        Ok(self.right_divisor_set(a)?.contains(x.word()))
    }

    /// The unique `y` with `x·y = a`. Distinct witnesses would contradict
    /// cancellativity and are reported as [`Error::AmbiguousQuotient`].
    pub fn left_quotient(&self, x: &Element, a: &Element) -> Result<Element> {
        if x.is_trivial() {
            return Ok(a.clone());
        }
        let not_a_divisor = || Error::NotADivisor {
            divisor: self.render(x),
            of: self.render(a),
        };
        if x.len() > a.len() {
            return Err(not_a_divisor());
        }
        let class = self.class(a.word())?;
        let xclass = self.class(x.word())?;
        let mut found: Option<Element> = None;
        for w in class.words() {
            if !xclass.contains(&w.prefix(x.len())) {
                continue;
            }
            let rest = self.element(&w.strip_prefix_len(x.len()))?;
            match &found {
                None => found = Some(rest),
                Some(prev) if *prev != rest => {
                    return Err(Error::AmbiguousQuotient {
                        first: self.render(prev),
                        second: self.render(&rest),
                    })
                }
                _ => {}
            }
        }
        found.ok_or_else(not_a_divisor)
    }

    /// The unique `y` with `y·x = a` (mirror of [`Self::left_quotient`]).
    pub fn right_quotient(&self, x: &Element, a: &Element) -> Result<Element> {
        if x.is_trivial() {
            return Ok(a.clone());
        }
        let not_a_divisor = || Error::NotADivisor {
            divisor: self.render(x),
            of: self.render(a),
        };
        if x.len() > a.len() {
            return Err(not_a_divisor());
        }
        let class = self.class(a.word())?;
        let xclass = self.class(x.word())?;
        let mut found: Option<Element> = None;
        for w in class.words() {
            if !xclass.contains(&w.suffix(x.len())) {
                continue;
            }
            let rest = self.element(&w.strip_suffix_len(x.len()))?;
            match &found {
                None => found = Some(rest),
                Some(prev) if *prev != rest => {
                    return Err(Error::AmbiguousQuotient {
                        first: self.render(prev),
                        second: self.render(&rest),
                    })
                }
                _ => {}
            }
        }
        found.ok_or_else(not_a_divisor)
    }

    /// Greatest common right divisor of `a` and `b`: the unique common
    /// right divisor that every other one right-divides.
    pub fn right_gcd(&self, a: &Element, b: &Element) -> Result<Element> {
        self.gcd(a, b, Side::Right)
    }

    /// Greatest common left divisor (prefix mirror of [`Self::right_gcd`]).
    pub fn left_gcd(&self, a: &Element, b: &Element) -> Result<Element> {
        self.gcd(a, b, Side::Left)
    }

    fn gcd(&self, a: &Element, b: &Element, side: Side) -> Result<Element> {
        if a.is_trivial() || b.is_trivial() {
            return Ok(Element::trivial());
        }
        let da = self.divisor_set(a, side)?;
        let db = self.divisor_set(b, side)?;
        let common: Vec<&Word> = da.intersection(&db).collect();
        // BTreeSet iterates in shortlex order, so the longest candidates
        // come last; the empty word is always present.
        let max_len = common.last().map(|w| w.len()).unwrap_or(0);
        let top: Vec<&&Word> = common.iter().filter(|w| w.len() == max_len).collect();
        if top.len() != 1 {
            return Err(Error::NotGcdMonoid {
                detail: format!(
                    "{} maximal common divisors of {} and {}",
                    top.len(),
                    self.render(a),
                    self.render(b)
                ),
            });
        }
        let g = Element((**top[0]).clone());
        let dg = self.divisor_set(&g, side)?;
        for w in &common {
            if !dg.contains(*w) {
                return Err(Error::NotGcdMonoid {
                    detail: format!(
                        "common divisor {} of {} and {} does not divide the maximal one {}",
                        self.presentation().render_word(w),
                        self.render(a),
                        self.render(b),
                        self.render(&g)
                    ),
                });
            }
        }
        Ok(g)
    }

    /// The set of atoms occurring in any word representing `a`. Well defined
    /// only when every relation's two sides use the same atoms.
    pub fn support(&self, a: &Element) -> Result<BTreeSet<AtomId>> {
        if let Some(rel) = self.support_offender() {
            return Err(Error::SupportIllDefined {
                relation: format!(
                    "{} = {}",
                    self.presentation().render_word(&rel.lhs),
                    self.presentation().render_word(&rel.rhs)
                ),
            });
        }
        Ok(a.word().atoms().iter().copied().collect())
    }

    /// Right lcm of `a` and `b`, or `None` when they have no common right
    /// multiple. Tries, in order: trivial/comparable shortcuts, the cache,
    /// syntactic reversing with certification (when acceleration is on),
    /// and the exhaustive bounded cone search, whose bound
    /// `c_max·(ℓ(a)+ℓ(b))` makes a negative answer definitive.
    pub fn right_lcm(&self, table: &BasicTable, a: &Element, b: &Element) -> Result<Option<LcmResult>> {
        self.lcm(table, a, b, Side::Right)
    }

    /// Left lcm of `a` and `b` (mirror of [`Self::right_lcm`]).
    pub fn left_lcm(&self, table: &BasicTable, a: &Element, b: &Element) -> Result<Option<LcmResult>> {
        self.lcm(table, a, b, Side::Left)
    }

    fn lcm(&self, table: &BasicTable, a: &Element, b: &Element, side: Side) -> Result<Option<LcmResult>> {
        if a.is_trivial() {
            return Ok(Some(LcmResult {
                lcm: b.clone(),
                left_complement: Element::trivial(),
                right_complement: b.clone(),
            }));
        }
        if b.is_trivial() {
            return Ok(Some(LcmResult {
                lcm: a.clone(),
                left_complement: a.clone(),
                right_complement: Element::trivial(),
            }));
        }
        let bound = table.lcm_bound(a.len(), b.len());
        if let Some(hit) = self.lcm_cache_get(a, b, bound, side) {
            return Ok(hit);
        }
        let divides = |x: &Element, y: &Element| match side {
            Side::Right => self.left_divides(x, y),
            Side::Left => self.right_divides(x, y),
        };
        if divides(a, b)? {
            let r = self.finish_lcm(a, b, b.clone(), side)?;
            return Ok(Some(self.lcm_cache_put(a, b, r, side)));
        }
        if divides(b, a)? {
            let r = self.finish_lcm(a, b, a.clone(), side)?;
            return Ok(Some(self.lcm_cache_put(a, b, r, side)));
        }
        // A common multiple of a and b is also one of their leading (for
        // right lcms) or trailing (for left lcms) atoms, and the closure
        // decided every atom pair: a missing pair rules the lcm out with
        // no search at all.
        let heads = match side {
            Side::Right => (a.word().atoms().first(), b.word().atoms().first()),
            Side::Left => (a.word().atoms().last(), b.word().atoms().last()),
        };
        if let (Some(&s), Some(&t)) = heads {
            let decided = match side {
                Side::Right => table.right_rev.contains_key(&(s, t)),
                Side::Left => table.left_rev.contains_key(&(s, t)),
            };
            if s != t && !decided {
                self.lcm_cache_put_none(a, b, bound, side);
                return Ok(None);
            }
        }
        // Peel off the shared divisor on the multiplied side: with c = a∧b
        // and a = c·a′, b = c·b′, cancellativity matches the common
        // multiples of (a, b) with c·(common multiples of (a′, b′)), so the
        // lcm factors as c·(a′∨b′) with the very same complements. The
        // quotients cannot share a dividing atom (it would extend the gcd),
        // so the leading-atom check settles the stripped pair whenever the
        // atoms are incompatible, instead of an exhaustive search.
        let shared = match side {
            Side::Right => self.left_gcd(a, b),
            Side::Left => self.right_gcd(a, b),
        };
        match shared {
            Ok(c) if !c.is_trivial() => {
                let quot = |x: &Element| match side {
                    Side::Right => self.left_quotient(&c, x),
                    Side::Left => self.right_quotient(&c, x),
                };
                let (qa, qb) = (quot(a)?, quot(b)?);
                return match self.lcm(table, &qa, &qb, side)? {
                    Some(sub) => {
                        let lcm = match side {
                            Side::Right => self.mul(&c, &sub.lcm)?,
                            Side::Left => self.mul(&sub.lcm, &c)?,
                        };
                        let r = LcmResult { lcm, ..sub };
                        Ok(Some(self.lcm_cache_put(a, b, r, side)))
                    }
                    None => {
                        self.lcm_cache_put_none(a, b, bound, side);
                        Ok(None)
                    }
                };
            }
            Ok(_) => {}
            Err(Error::NotGcdMonoid { .. } | Error::AmbiguousQuotient { .. }) => {}
            Err(e) => return Err(e),
        }
        if self.accelerate() {
            let cap = (a.len() + b.len() + 4).pow(2) * (table.c_max + 1);
            let candidates = match side {
                Side::Right => reverse_right_core(&table.right_rev, a.word(), b.word(), cap),
                Side::Left => reverse_left_core(&table.left_rev, a.word(), b.word(), cap),
            };
            if let Some((comp_a, comp_b)) = candidates {
                match self.certify_lcm(a, b, &comp_a, &comp_b, side) {
                    Ok(Some(r)) => return Ok(Some(self.lcm_cache_put(a, b, r, side))),
                    Ok(None) => {}
                    Err(
                        Error::NotGcdMonoid { .. }
                        | Error::AmbiguousQuotient { .. }
                        | Error::NotConditionalLcm { .. }
                        | Error::NotADivisor { .. },
                    ) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        match self.lcm_cone(a, b, bound, side)? {
            Some(r) => Ok(Some(self.lcm_cache_put(a, b, r, side))),
            None => {
                self.lcm_cache_put_none(a, b, bound, side);
                Ok(None)
            }
        }
    }

    fn lcm_cache_get(&self, a: &Element, b: &Element, bound: usize, side: Side) -> Option<Option<LcmResult>> {
        let cache = match side {
            Side::Right => &self.right_lcm_cache,
            Side::Left => &self.left_lcm_cache,
        };
        match cache.get(&(a.word().clone(), b.word().clone()))?.value() {
            LcmEntry::Found(r) => Some(Some((**r).clone())),
            LcmEntry::NoneUpTo(k) if *k >= bound => Some(None),
            LcmEntry::NoneUpTo(_) => None,
        }
    }

    fn lcm_cache_put(&self, a: &Element, b: &Element, r: LcmResult, side: Side) -> LcmResult {
        let cache = match side {
            Side::Right => &self.right_lcm_cache,
            Side::Left => &self.left_lcm_cache,
        };
        let arc = Arc::new(r.clone());
        let swapped = Arc::new(LcmResult {
            lcm: r.lcm.clone(),
            left_complement: r.right_complement.clone(),
            right_complement: r.left_complement.clone(),
        });
        cache.insert((a.word().clone(), b.word().clone()), LcmEntry::Found(arc));
        cache.insert((b.word().clone(), a.word().clone()), LcmEntry::Found(swapped));
        r
    }

    fn lcm_cache_put_none(&self, a: &Element, b: &Element, bound: usize, side: Side) {
        let cache = match side {
            Side::Right => &self.right_lcm_cache,
            Side::Left => &self.left_lcm_cache,
        };
        for key in [
            (a.word().clone(), b.word().clone()),
            (b.word().clone(), a.word().clone()),
        ] {
            let keep = match cache.get(&key).map(|e| e.value().clone()) {
                Some(LcmEntry::NoneUpTo(k)) => k.max(bound),
                _ => bound,
            };
            cache.insert(key, LcmEntry::NoneUpTo(keep));
        }
    }

    /// Build an [`LcmResult`] from a known common multiple that is already
    /// the lcm, extracting both complements and checking their coprimality.
    fn finish_lcm(&self, a: &Element, b: &Element, lcm: Element, side: Side) -> Result<LcmResult> {
        let (right_complement, left_complement, gcd) = match side {
            Side::Right => (
                self.left_quotient(a, &lcm)?,
                self.left_quotient(b, &lcm)?,
                Monoid::right_gcd as fn(&Monoid, &Element, &Element) -> Result<Element>,
            ),
            Side::Left => (
                self.right_quotient(a, &lcm)?,
                self.right_quotient(b, &lcm)?,
                Monoid::left_gcd as fn(&Monoid, &Element, &Element) -> Result<Element>,
            ),
        };
        let g = gcd(self, &left_complement, &right_complement)?;
        if !g.is_trivial() {
            return Err(Error::NotConditionalLcm {
                detail: format!(
                    "complements {} and {} of {} share the divisor {}",
                    self.render(&right_complement),
                    self.render(&left_complement),
                    self.render(&lcm),
                    self.render(&g)
                ),
            });
        }
        Ok(LcmResult { lcm, left_complement, right_complement })
    }

    /// Verify reversing candidates and shrink them to the actual lcm: a
    /// common multiple `a·v = b·u` becomes the lcm once the shared right
    /// divisor of the complements is peeled off, at which point coprimality
    /// certifies minimality.
    fn certify_lcm(
        &self,
        a: &Element,
        b: &Element,
        comp_a: &Word,
        comp_b: &Word,
        side: Side,
    ) -> Result<Option<LcmResult>> {
        let compose = |x: &Word, y: &Word| match side {
            Side::Right => x.concat(y),
            Side::Left => y.concat(x),
        };
        let cand_a = compose(a.word(), comp_a);
        let cand_b = compose(b.word(), comp_b);
        if !self.words_equal(&cand_a, &cand_b)? {
            return Ok(None);
        }
        let mut ca = self.element(comp_a)?;
        let mut cb = self.element(comp_b)?;
        loop {
            let g = match side {
                Side::Right => self.right_gcd(&ca, &cb)?,
                Side::Left => self.left_gcd(&ca, &cb)?,
            };
            if g.is_trivial() {
                break;
            }
            match side {
                Side::Right => {
                    ca = self.right_quotient(&g, &ca)?;
                    cb = self.right_quotient(&g, &cb)?;
                }
                Side::Left => {
                    ca = self.left_quotient(&g, &ca)?;
                    cb = self.left_quotient(&g, &cb)?;
                }
            }
        }
        let lcm = self.element(&compose(a.word(), ca.word()))?;
        if !self.words_equal(lcm.word(), &compose(b.word(), cb.word()))? {
            return Ok(None);
        }
        Ok(Some(LcmResult {
            lcm,
            left_complement: cb,
            right_complement: ca,
        }))
    }

    /// Exhaustive bounded lcm search: enumerate canonical (right or left)
    /// multiples of `a` level by level up to `max_len` and stop at the first
    /// level containing a multiple of `b`. A unique hit there is certified
    /// as the lcm by the coprime-complement check in [`Self::finish_lcm`];
    /// exhausting the bound without a hit is a definitive negative, since an
    /// existing lcm would have length at most the bound.
    fn lcm_cone(&self, a: &Element, b: &Element, max_len: usize, side: Side) -> Result<Option<LcmResult>> {
        let divides = |x: &Element, y: &Element| match side {
            Side::Right => self.left_divides(x, y),
            Side::Left => self.right_divides(x, y),
        };
        let finish_level = |hits: Vec<Element>| -> Result<Option<LcmResult>> {
            if hits.len() > 1 {
                return Err(Error::NotConditionalLcm {
                    detail: format!(
                        "{} incomparable minimal common multiples of {} and {}",
                        hits.len(),
                        self.render(a),
                        self.render(b)
                    ),
                });
            }
            Ok(Some(self.finish_lcm(a, b, hits.into_iter().next().unwrap(), side)?))
        };
        if divides(b, a)? {
            return finish_level(vec![a.clone()]);
        }
        let mut frontier: BTreeSet<Word> = BTreeSet::new();
        frontier.insert(a.word().clone());
        let mut len = a.len();
        while len < max_len && !frontier.is_empty() {
            if frontier.len() > CONE_NODE_CAP {
                return Err(Error::NodeCapExceeded { cap: CONE_NODE_CAP });
            }
            let mut next: BTreeSet<Word> = BTreeSet::new();
            for w in &frontier {
                for s in self.atom_ids() {
                    let ext = match side {
                        Side::Right => w.concat(&Word::single(s)),
                        Side::Left => Word::single(s).concat(w),
                    };
                    next.insert(self.canon(&ext)?);
                }
            }
            len += 1;
            let mut hits: Vec<Element> = Vec::new();
            for w in &next {
                let e = Element(w.clone());
                if divides(b, &e)? {
                    hits.push(e);
                }
            }
            if !hits.is_empty() {
                return finish_level(hits);
            }
            frontier = next;
        }
        Ok(None)
    }

    /// Whether `a` and `b` have a common right multiple. When every pair of
    /// right basics is known compatible, every pair of elements is.
    pub fn common_right_multiple_exists(&self, table: &BasicTable, a: &Element, b: &Element) -> Result<bool> {
        if a.is_trivial() || b.is_trivial() || table.right_two_ore {
            return Ok(true);
        }
        Ok(self.right_lcm(table, a, b)?.is_some())
    }

    /// Whether `a` and `b` have a common left multiple.
    pub fn common_left_multiple_exists(&self, table: &BasicTable, a: &Element, b: &Element) -> Result<bool> {
        if a.is_trivial() || b.is_trivial() || table.left_two_ore {
            return Ok(true);
        }
        Ok(self.left_lcm(table, a, b)?.is_some())
    }

    /// Right reversing of `ū·v` using the table's atom complements. On
    /// success returns candidate words `(v′, u′)` with `u·v′ = v·u′`; the
    /// caller must verify that equality (this is only an accelerator).
    /// Returns `None` when an atom pair has no recorded complement or the
    /// step cap is hit.
    pub fn reverse_right(&self, table: &BasicTable, u: &Word, v: &Word, step_cap: usize) -> Option<(Word, Word)> {
        reverse_right_core(&table.right_rev, u, v, step_cap)
    }

    /// Left reversing of `u·v̄`: candidate words `(u′, v′)` with `u′·u = v′·v`.
    pub fn reverse_left(&self, table: &BasicTable, u: &Word, v: &Word, step_cap: usize) -> Option<(Word, Word)> {
        reverse_left_core(&table.left_rev, u, v, step_cap)
    }

    /// Least common multiple of two divisors of a common element, computed
    /// inside the finite divisor poset instead of by cone search. `divs`
    /// must be the divisor set (on the matching side) of that element.
    pub(crate) fn join_among_divisors(
        &self,
        divs: &BTreeSet<Word>,
        x: &Element,
        y: &Element,
        right_side: bool,
    ) -> Result<Element> {
        let divides = |p: &Element, q: &Element| {
            if right_side {
                self.left_divides(p, q)
            } else {
                self.right_divides(p, q)
            }
        };
        if divides(x, y)? {
            return Ok(y.clone());
        }
        if divides(y, x)? {
            return Ok(x.clone());
        }
        let mut common: Vec<Element> = Vec::new();
        for w in divs {
            let e = Element(w.clone());
            if divides(x, &e)? && divides(y, &e)? {
                common.push(e);
            }
        }
        if common.is_empty() {
            return Err(Error::NotConditionalLcm {
                detail: format!(
                    "divisors {} and {} of a common element have no join among its divisors",
                    self.render(x),
                    self.render(y)
                ),
            });
        }
        // `divs` is shortlex-sorted, so the first common one is shortest.
        let min_len = common[0].len();
        if common.iter().filter(|e| e.len() == min_len).count() > 1 {
            return Err(Error::NotConditionalLcm {
                detail: format!(
                    "incomparable minimal joins of {} and {}",
                    self.render(x),
                    self.render(y)
                ),
            });
        }
        let j = common[0].clone();
        for e in &common[1..] {
            if !divides(&j, e)? {
                return Err(Error::NotConditionalLcm {
                    detail: format!(
                        "join {} of {} and {} does not divide the common multiple {}",
                        self.render(&j),
                        self.render(x),
                        self.render(y),
                        self.render(e)
                    ),
                });
            }
        }
        Ok(j)
    }

    /// The basic table computed with default caps, memoized on the monoid.
    pub fn basic_table(&self) -> Result<Arc<BasicTable>> {
        self.basic_table_with(BasicCaps::default())
    }

    /// The basic table, computing it with the given caps on first use.
    pub fn basic_table_with(&self, caps: BasicCaps) -> Result<Arc<BasicTable>> {
        if let Some(t) = self.basics.get() {
            return Ok(t.clone());
        }
        let t = Arc::new(self.basic_closure(caps)?);
        Ok(self.basics.get_or_init(|| t).clone())
    }

    /// Compute the closure of the atoms under complement on both sides.
    ///
    /// Pair lcms are decided by the bounded cone search with bound
    /// `c·(ℓx+ℓy)`, where `c` is the longest basic seen so far; whenever the
    /// set grows, all pairs are re-scanned so that every negative answer was
    /// obtained at the final bound. To avoid stalling below the true
    /// constant, atom pairs are seeded from the defining relations first: a
    /// relation whose sides start (end) with distinct atoms exhibits a
    /// common multiple of those atoms, inside whose divisor poset the exact
    /// lcm is found with no length assumptions.
    pub fn basic_closure(&self, caps: BasicCaps) -> Result<BasicTable> {
        self.seed_atom_lcms()?;
        let atoms = self.atom_elements()?;
        let mut c_max = atoms.iter().map(Element::len).max().unwrap_or(1).max(1);
        let right_basics = self.close_side(&atoms, &mut c_max, caps, Side::Right)?;
        let left_basics = self.close_side(&atoms, &mut c_max, caps, Side::Left)?;
        // Re-run both sides at the final constant so their bounds agree.
        let right_basics = {
            let mut c = c_max;
            let set = self.close_from(right_basics, &mut c, caps, Side::Right)?;
            c_max = c;
            set
        };
        let left_basics = {
            let mut c = c_max;
            let set = self.close_from(left_basics, &mut c, caps, Side::Left)?;
            c_max = c;
            set
        };
        let mut table = BasicTable {
            right_basics,
            left_basics,
            c_max,
            right_two_ore: false,
            left_two_ore: false,
            right_rev: HashMap::new(),
            left_rev: HashMap::new(),
        };
        self.build_reversing_tables(&mut table)?;
        table.right_two_ore = self.all_pairs_compatible(&table.right_basics, c_max, Side::Right)?;
        table.left_two_ore = self.all_pairs_compatible(&table.left_basics, c_max, Side::Left)?;
        Ok(table)
    }

    /// Record exact atom-pair lcms exhibited by the defining relations.
    fn seed_atom_lcms(&self) -> Result<()> {
        for rel in self.relations() {
            let m = self.element(&rel.lhs)?;
            let first = (rel.lhs.atoms()[0], rel.rhs.atoms()[0]);
            if first.0 != first.1 {
                let x = self.element(&Word::single(first.0))?;
                let y = self.element(&Word::single(first.1))?;
                if self
                    .lcm_cache_get(&x, &y, usize::MAX, Side::Right)
                    .is_none()
                {
                    let divs = self.left_divisor_set(&m)?;
                    let j = self.join_among_divisors(&divs, &x, &y, true)?;
                    let r = self.finish_lcm(&x, &y, j, Side::Right)?;
                    self.lcm_cache_put(&x, &y, r, Side::Right);
                }
            }
            let last = (
                rel.lhs.atoms()[rel.lhs.len() - 1],
                rel.rhs.atoms()[rel.rhs.len() - 1],
            );
            if last.0 != last.1 {
                let x = self.element(&Word::single(last.0))?;
                let y = self.element(&Word::single(last.1))?;
                if self.lcm_cache_get(&x, &y, usize::MAX, Side::Left).is_none() {
                    let divs = self.right_divisor_set(&m)?;
                    let j = self.join_among_divisors(&divs, &x, &y, false)?;
                    let r = self.finish_lcm(&x, &y, j, Side::Left)?;
                    self.lcm_cache_put(&x, &y, r, Side::Left);
                }
            }
        }
        Ok(())
    }

    fn close_side(
        &self,
        atoms: &[Element],
        c_max: &mut usize,
        caps: BasicCaps,
        side: Side,
    ) -> Result<BTreeSet<Element>> {
        let mut set: BTreeSet<Element> = atoms.iter().cloned().collect();
        set.insert(Element::trivial());
        self.close_from(set, c_max, caps, side)
    }

    /// Grow `set` to a complement-closed fixpoint, re-scanning all pairs
    /// whenever it grows (growth can raise the search bound, which can
    /// reveal lcms a smaller bound missed).
    fn close_from(
        &self,
        mut set: BTreeSet<Element>,
        c_max: &mut usize,
        caps: BasicCaps,
        side: Side,
    ) -> Result<BTreeSet<Element>> {
        loop {
            let members: Vec<Element> = set.iter().cloned().collect();
            let mut grew = false;
            for (idx, x) in members.iter().enumerate() {
                if x.is_trivial() {
                    continue;
                }
                for y in &members[idx + 1..] {
                    if y.is_trivial() {
                        continue;
                    }
                    let bound = *c_max * (x.len() + y.len());
                    let r = match self.lcm_cache_get(x, y, bound, side) {
                        Some(hit) => hit,
                        None => {
                            let computed = self.lcm_cone(x, y, bound, side)?;
                            match computed {
                                Some(r) => Some(self.lcm_cache_put(x, y, r, side)),
                                None => {
                                    self.lcm_cache_put_none(x, y, bound, side);
                                    None
                                }
                            }
                        }
                    };
                    let Some(r) = r else { continue };
                    for comp in [&r.left_complement, &r.right_complement] {
                        if comp.len() > caps.length_cap {
                            return Err(Error::BasicClosureDiverges {
                                detail: format!(
                                    "complement {} exceeds the length cap {}",
                                    self.render(comp),
                                    caps.length_cap
                                ),
                            });
                        }
                        if set.insert(comp.clone()) {
                            grew = true;
                            *c_max = (*c_max).max(comp.len());
                            if set.len() > caps.size_cap {
                                return Err(Error::BasicClosureDiverges {
                                    detail: format!("more than {} basic elements", caps.size_cap),
                                });
                            }
                        }
                    }
                }
            }
            if !grew {
                return Ok(set);
            }
        }
    }

    fn build_reversing_tables(&self, table: &mut BasicTable) -> Result<()> {
        let atom_count = self.atom_count() as AtomId;
        for s in 0..atom_count {
            for t in 0..atom_count {
                let es = self.element(&Word::single(s))?;
                let et = self.element(&Word::single(t))?;
                let bound = table.lcm_bound(es.len(), et.len());
                if let Some(r) = self.lcm_with_bound(table, &es, &et, bound, Side::Right)? {
                    table
                        .right_rev
                        .insert((s, t), (r.right_complement.word().clone(), r.left_complement.word().clone()));
                }
                if let Some(r) = self.lcm_with_bound(table, &es, &et, bound, Side::Left)? {
                    table
                        .left_rev
                        .insert((s, t), (r.right_complement.word().clone(), r.left_complement.word().clone()));
                }
            }
        }
        Ok(())
    }

    /// Cache-aware bounded lcm, used where the table is still under
    /// construction and the reversing accelerator cannot be consulted.
    fn lcm_with_bound(
        &self,
        _table: &BasicTable,
        a: &Element,
        b: &Element,
        bound: usize,
        side: Side,
    ) -> Result<Option<LcmResult>> {
        if a.is_trivial() || b.is_trivial() {
            let (lcm, lc, rc) = if a.is_trivial() {
                (b.clone(), Element::trivial(), b.clone())
            } else {
                (a.clone(), a.clone(), Element::trivial())
            };
            return Ok(Some(LcmResult { lcm, left_complement: lc, right_complement: rc }));
        }
        if let Some(hit) = self.lcm_cache_get(a, b, bound, side) {
            return Ok(hit);
        }
        match self.lcm_cone(a, b, bound, side)? {
            Some(r) => Ok(Some(self.lcm_cache_put(a, b, r, side))),
            None => {
                self.lcm_cache_put_none(a, b, bound, side);
                Ok(None)
            }
        }
    }

    fn all_pairs_compatible(&self, basics: &BTreeSet<Element>, c_max: usize, side: Side) -> Result<bool> {
        let members: Vec<&Element> = basics.iter().filter(|e| !e.is_trivial()).collect();
        for (idx, x) in members.iter().enumerate() {
            for y in &members[idx + 1..] {
                let bound = c_max * (x.len() + y.len());
                let r = match self.lcm_cache_get(x, y, bound, side) {
                    Some(hit) => hit.is_some(),
                    None => {
                        let computed = self.lcm_cone(x, y, bound, side)?;
                        let found = computed.is_some();
                        match computed {
                            Some(r) => {
                                self.lcm_cache_put(x, y, r, side);
                            }
                            None => self.lcm_cache_put_none(x, y, bound, side),
                        }
                        found
                    }
                };
                if !r {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// One signed letter of a reversing state.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Rev {
    Pos(AtomId),
    Neg(AtomId),
}

/// Right reversing: start from `ū v` and rewrite every `s̄ t` adjacency to
/// `v′ ū′` (with `s v′ = t u′` from the atom table) until only a positive
/// prefix and negative suffix remain. Returns `(v′_total, u′_total)`.
fn reverse_right_core(
    rev: &HashMap<(AtomId, AtomId), (Word, Word)>,
    u: &Word,
    v: &Word,
    step_cap: usize,
) -> Option<(Word, Word)> {
    let mut state: Vec<Rev> = Vec::with_capacity(u.len() + v.len());
    for &s in u.atoms().iter().rev() {
        state.push(Rev::Neg(s));
    }
    for &t in v.atoms() {
        state.push(Rev::Pos(t));
    }
    let mut steps = 0usize;
    let mut i = 0usize;
    while i + 1 < state.len().max(1) {
        match (state.get(i), state.get(i + 1)) {
            (Some(&Rev::Neg(s)), Some(&Rev::Pos(t))) => {
                steps += 1;
                if steps > step_cap {
                    return None;
                }
                let (vp, up) = rev.get(&(s, t))?;
                let mut patch: Vec<Rev> = Vec::with_capacity(vp.len() + up.len());
                for &x in vp.atoms() {
                    patch.push(Rev::Pos(x));
                }
                for &x in up.atoms().iter().rev() {
                    patch.push(Rev::Neg(x));
                }
                state.splice(i..i + 2, patch);
                // The rewrite may create a new adjacency just to the left.
                i = i.saturating_sub(1);
            }
            _ => i += 1,
        }
    }
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for l in &state {
        match *l {
            Rev::Pos(x) => pos.push(x),
            Rev::Neg(x) => neg.push(x),
        }
    }
    neg.reverse();
    Some((Word::from_atoms(pos), Word::from_atoms(neg)))
}

/// Left reversing: start from `u v̄` and rewrite every `s t̄` adjacency to
/// `ū′ v′` (with `u′ s = v′ t`) until only a negative prefix and positive
/// suffix remain. Returns `(u′_total, v′_total)` with `u′·u = v′·v`.
fn reverse_left_core(
    rev: &HashMap<(AtomId, AtomId), (Word, Word)>,
    u: &Word,
    v: &Word,
    step_cap: usize,
) -> Option<(Word, Word)> {
    let mut state: Vec<Rev> = Vec::with_capacity(u.len() + v.len());
    for &s in u.atoms() {
        state.push(Rev::Pos(s));
    }
    for &t in v.atoms().iter().rev() {
        state.push(Rev::Neg(t));
    }
    let mut steps = 0usize;
    let mut i = 0usize;
    while i + 1 < state.len().max(1) {
        match (state.get(i), state.get(i + 1)) {
            (Some(&Rev::Pos(s)), Some(&Rev::Neg(t))) => {
                steps += 1;
                if steps > step_cap {
                    return None;
                }
                let (up, vp) = rev.get(&(s, t))?;
                let mut patch: Vec<Rev> = Vec::with_capacity(up.len() + vp.len());
                for &x in up.atoms().iter().rev() {
                    patch.push(Rev::Neg(x));
                }
                for &x in vp.atoms() {
                    patch.push(Rev::Pos(x));
                }
                state.splice(i..i + 2, patch);
                i = i.saturating_sub(1);
            }
            _ => i += 1,
        }
    }
    let mut neg = Vec::new();
    let mut pos = Vec::new();
    for l in &state {
        match *l {
            Rev::Pos(x) => pos.push(x),
            Rev::Neg(x) => neg.push(x),
        }
    }
    neg.reverse();
    Some((Word::from_atoms(neg), Word::from_atoms(pos)))
}
