//! Monoid presentations: atoms, length-preserving relations, built-in
//! presets and the `atoms:`/`rel:` text format.

use crate::error::{Error, Result};
use crate::word::{AtomId, SignedLetter, SignedWord, Word};

/// A defining relation `lhs = rhs` between two positive words.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Relation {
    pub lhs: Word,
    pub rhs: Word,
}

/// A raw presentation: atom names, relations, and trust flags asserting
/// structural properties that are not decided algorithmically.
///
/// The trust flags record the caller's claim that the presented monoid is a
/// gcd-monoid (and in particular cancellative). Operations that depend on
/// those properties still raise concrete errors (`NotGcdMonoid`,
/// `AmbiguousQuotient`, ...) when a computation produces counter-evidence;
/// the flags only mark reports as unconditional.
#[derive(Clone, Debug)]
pub struct Presentation {
    atom_names: Vec<String>,
    relations: Vec<Relation>,
    pub assume_gcd_monoid: bool,
    pub assume_cancellative: bool,
}

const PRESET_LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyz";

impl Presentation {
    pub fn new(atom_names: Vec<String>) -> Self {
        Presentation {
            atom_names,
            relations: Vec::new(),
            assume_gcd_monoid: false,
            assume_cancellative: false,
        }
    }

    pub fn atom_names(&self) -> &[String] {
        &self.atom_names
    }

    pub fn atom_count(&self) -> usize {
        self.atom_names.len()
    }

    pub fn atom_name(&self, id: AtomId) -> &str {
        &self.atom_names[id as usize]
    }

    pub fn atom_id(&self, name: &str) -> Option<AtomId> {
        self.atom_names
            .iter()
            .position(|n| n == name)
            .map(|i| i as AtomId)
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn add_relation(&mut self, lhs: Word, rhs: Word) {
        self.relations.push(Relation { lhs, rhs });
    }

    /// True when every atom name is a single character, which enables the
    /// compact word syntax (`aba`) and the uppercase-inverse convention.
    pub fn single_char_atoms(&self) -> bool {
        self.atom_names.iter().all(|n| n.chars().count() == 1)
    }

    /// Parse a positive word: whitespace-separated atom names, or one compact
    /// run of single-character names when the alphabet allows it.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "1" {
            return Ok(Word::empty());
        }
        let mut atoms = Vec::new();
        for token in text.split(|c: char| c.is_whitespace() || c == '.') {
            if token.is_empty() {
                continue;
            }
            if let Some(id) = self.atom_id(token) {
                atoms.push(id);
            } else if self.single_char_atoms() {
                for ch in token.chars() {
                    let name = ch.to_string();
                    let id = self
                        .atom_id(&name)
                        .ok_or(Error::UnknownAtom { name })?;
                    atoms.push(id);
                }
            } else {
                return Err(Error::UnknownAtom { name: token.to_string() });
            }
        }
        Ok(Word::from_atoms(atoms))
    }

    /// Parse a signed word. Tokens are atom names (positive), `name^-1`
    /// (inverse), or — when all atom names are single characters — compact
    /// runs where an uppercase letter is the inverse of its lowercase atom.
    pub fn parse_signed(&self, text: &str) -> Result<SignedWord> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            if let Some(name) = token.strip_suffix("^-1") {
                let id = self.atom_id(name).ok_or(Error::UnknownAtom {
                    name: name.to_string(),
                })?;
                letters.push(SignedLetter { atom: id, inverse: true });
                continue;
            }
            if let Some(id) = self.atom_id(token) {
                letters.push(SignedLetter { atom: id, inverse: false });
                continue;
            }
            if !self.single_char_atoms() {
                return Err(Error::UnknownAtom { name: token.to_string() });
            }
            for ch in token.chars() {
                let lower = ch.to_lowercase().to_string();
                let inverse = ch.is_uppercase();
                let id = self
                    .atom_id(&lower)
                    .ok_or(Error::UnknownAtom { name: lower.clone() })?;
                letters.push(SignedLetter { atom: id, inverse });
            }
        }
        Ok(SignedWord::from_letters(letters))
    }

    /// Render a positive word with atom names. The empty word prints as `1`;
    /// multi-character atom names are joined with `.`.
    pub fn render_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let sep = if self.single_char_atoms() { "" } else { "." };
        w.atoms()
            .iter()
            .map(|&a| self.atom_name(a))
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Render a signed word in the input syntax (space-separated letters).
    pub fn render_signed(&self, w: &SignedWord) -> String {
        w.letters()
            .iter()
            .map(|l| {
                let name = self.atom_name(l.atom);
                if !l.inverse {
                    name.to_string()
                } else if self.single_char_atoms() {
                    name.to_uppercase()
                } else {
                    format!("{name}^-1")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parse the line-oriented presentation format:
    ///
    /// ```text
    /// # comment
    /// atoms: a b c
    /// rel: a b a = b a b
    /// trust: gcd-monoid cancellative
    /// ```
    pub fn from_text(src: &str) -> Result<Presentation> {
        let mut atoms: Option<Vec<String>> = None;
        let mut rel_lines: Vec<String> = Vec::new();
        let mut trust_gcd = false;
        let mut trust_cancel = false;
        for (lineno, raw) in src.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("atoms:") {
                if atoms.is_some() {
                    return Err(Error::Parse {
                        detail: format!("line {}: repeated atoms line", lineno + 1),
                    });
                }
                atoms = Some(rest.split_whitespace().map(str::to_string).collect());
            } else if let Some(rest) = line.strip_prefix("rel:") {
                rel_lines.push(rest.to_string());
            } else if let Some(rest) = line.strip_prefix("trust:") {
                for token in rest.split_whitespace() {
                    match token {
                        "gcd-monoid" => trust_gcd = true,
                        "cancellative" => trust_cancel = true,
                        other => {
                            return Err(Error::Parse {
                                detail: format!("line {}: unknown trust flag `{other}`", lineno + 1),
                            })
                        }
                    }
                }
            } else {
                return Err(Error::Parse {
                    detail: format!("line {}: expected `atoms:`, `rel:` or `trust:`", lineno + 1),
                });
            }
        }
        let atoms = atoms.ok_or(Error::Parse { detail: "missing atoms line".to_string() })?;
        let mut p = Presentation::new(atoms);
        p.assume_gcd_monoid = trust_gcd;
        p.assume_cancellative = trust_cancel;
        for rel in rel_lines {
            let mut sides = rel.split('=');
            let (lhs, rhs) = match (sides.next(), sides.next(), sides.next()) {
                (Some(l), Some(r), None) => (l, r),
                _ => {
                    return Err(Error::Parse {
                        detail: format!("relation `{}` needs exactly one `=`", rel.trim()),
                    })
                }
            };
            let lhs = p.parse_word(lhs)?;
            let rhs = p.parse_word(rhs)?;
            p.add_relation(lhs, rhs);
        }
        Ok(p)
    }

    /// Built-in presentations: `free:<n>`, `braid:<n>`, `raag:<edge-list>`
    /// (e.g. `raag:ab,bc`; `raag-abc` is an alias for `raag:ab,bc`), and
    /// `affine-A2`. Presets carry both trust flags.
    pub fn preset(name: &str) -> Result<Presentation> {
        let lowered = name.to_ascii_lowercase();
        let mut p = if let Some(n) = lowered.strip_prefix("free:") {
            let n = parse_preset_count(name, n)?;
            Presentation::new(letter_names(n)?)
        } else if let Some(n) = lowered.strip_prefix("braid:") {
            let strands = parse_preset_count(name, n)?;
            if strands < 2 {
                return Err(Error::Parse {
                    detail: format!("preset `{name}`: need at least 2 strands"),
                });
            }
            let k = strands - 1;
            let mut p = Presentation::new(letter_names(k)?);
            for i in 0..k {
                for j in i + 1..k {
                    let (a, b) = (i as AtomId, j as AtomId);
                    if j == i + 1 {
                        p.add_relation(
                            Word::from_atoms(vec![a, b, a]),
                            Word::from_atoms(vec![b, a, b]),
                        );
                    } else {
                        p.add_relation(
                            Word::from_atoms(vec![a, b]),
                            Word::from_atoms(vec![b, a]),
                        );
                    }
                }
            }
            p
        } else if lowered == "raag-abc" {
            return Presentation::preset("raag:ab,bc");
        } else if let Some(edges) = lowered.strip_prefix("raag:") {
            let mut pairs = Vec::new();
            let mut letters: Vec<char> = Vec::new();
            for edge in edges.split(',').filter(|e| !e.trim().is_empty()) {
                let chars: Vec<char> = edge.trim().chars().collect();
                if chars.len() != 2 || !chars.iter().all(|c| c.is_ascii_lowercase()) {
                    return Err(Error::Parse {
                        detail: format!("preset `{name}`: edge `{}` is not two letters", edge.trim()),
                    });
                }
                pairs.push((chars[0], chars[1]));
                letters.extend(&chars);
            }
            letters.sort_unstable();
            letters.dedup();
            let mut p = Presentation::new(letters.iter().map(|c| c.to_string()).collect());
            for (x, y) in pairs {
                let a = p.atom_id(&x.to_string()).unwrap();
                let b = p.atom_id(&y.to_string()).unwrap();
                p.add_relation(Word::from_atoms(vec![a, b]), Word::from_atoms(vec![b, a]));
            }
            p
        } else if lowered == "affine-a2" {
            let mut p = Presentation::new(letter_names(3)?);
            for (x, y) in [(0u8, 1u8), (1, 2), (2, 0)] {
                p.add_relation(
                    Word::from_atoms(vec![x, y, x]),
                    Word::from_atoms(vec![y, x, y]),
                );
            }
            p
        } else {
            return Err(Error::Parse { detail: format!("unknown preset `{name}`") });
        };
        p.assume_gcd_monoid = true;
        p.assume_cancellative = true;
        Ok(p)
    }
}

fn letter_names(n: usize) -> Result<Vec<String>> {
    if n > PRESET_LETTERS.len() {
        return Err(Error::AlphabetTooLarge { count: n });
    }
    Ok(PRESET_LETTERS[..n]
        .iter()
        .map(|&b| (b as char).to_string())
        .collect())
}

fn parse_preset_count(preset: &str, text: &str) -> Result<usize> {
    text.parse().map_err(|_| Error::Parse {
        detail: format!("preset `{preset}`: `{text}` is not a count"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn braid3_preset_is_one_braid_relation() {
        let p = Presentation::preset("braid:3").unwrap();
        assert_eq!(p.atom_names(), &["a".to_string(), "b".to_string()]);
        assert_eq!(p.relations().len(), 1);
        assert_eq!(p.render_word(&p.relations()[0].lhs), "aba");
        assert_eq!(p.render_word(&p.relations()[0].rhs), "bab");
        assert!(p.assume_gcd_monoid && p.assume_cancellative);
    }

    #[test]
    fn braid4_has_distant_commutation() {
        let p = Presentation::preset("braid:4").unwrap();
        assert_eq!(p.atom_count(), 3);
        assert_eq!(p.relations().len(), 3);
        let rendered: Vec<(String, String)> = p
            .relations()
            .iter()
            .map(|r| (p.render_word(&r.lhs), p.render_word(&r.rhs)))
            .collect();
        assert!(rendered.contains(&("ac".to_string(), "ca".to_string())));
    }

    #[test]
    fn raag_alias_matches_edge_list() {
        let a = Presentation::preset("raag-abc").unwrap();
        let b = Presentation::preset("raag:ab,bc").unwrap();
        assert_eq!(a.atom_names(), b.atom_names());
        assert_eq!(a.relations(), b.relations());
        assert_eq!(a.relations().len(), 2);
    }

    #[test]
    fn parse_words_compact_and_spaced() {
        let p = Presentation::preset("affine-A2").unwrap();
        assert_eq!(p.parse_word("aba").unwrap(), p.parse_word("a b a").unwrap());
        assert_eq!(p.parse_word("1").unwrap(), Word::empty());
        assert!(p.parse_word("z").is_err());
    }

    #[test]
    fn parse_signed_uppercase_inverse() {
        let p = Presentation::preset("braid:3").unwrap();
        let w = p.parse_signed("a B a^-1").unwrap();
        assert_eq!(w.len(), 3);
        assert!(!w.letters()[0].inverse);
        assert!(w.letters()[1].inverse);
        assert_eq!(w.letters()[1].atom, 1);
        assert!(w.letters()[2].inverse);
        assert_eq!(p.render_signed(&w), "a B A");
    }

    #[test]
    fn text_format_round_trip() {
        let src = "# demo\natoms: a b\nrel: a b a = b a b\ntrust: gcd-monoid cancellative\n";
        let p = Presentation::from_text(src).unwrap();
        assert_eq!(p.atom_count(), 2);
        assert_eq!(p.relations().len(), 1);
        assert!(p.assume_gcd_monoid);
        assert!(Presentation::from_text("rel: a = b").is_err());
        assert!(Presentation::from_text("atoms: a\nnonsense").is_err());
    }
}
