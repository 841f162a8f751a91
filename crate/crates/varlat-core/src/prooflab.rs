//! Constructions around unstable word families: parametric quadruples that
//! pin down when four words can share a class pattern, the two-word prefix
//! trick for unbalanced consequences, and a truncated class partition that
//! can be audited for congruence behaviour.

use core::fmt;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::syntax::{com_equivalence, sem_equivalence, ComWord, Letter, Word};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ProofLabError {
    ParameterRange(String),
    DegenerateInput(String),
    ResourceLimit(String),
}

impl fmt::Display for ProofLabError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProofLabError::ParameterRange(msg) => write!(f, "parameter out of range: {}", msg),
            ProofLabError::DegenerateInput(msg) => write!(f, "degenerate input: {}", msg),
            ProofLabError::ResourceLimit(msg) => write!(f, "resource limit exceeded: {}", msg),
        }
    }
}

impl core::error::Error for ProofLabError {}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WordQuadruple {
    pub u: Word,
    pub v: Word,
    pub s: Word,
    pub t: Word,
}

impl WordQuadruple {
    pub fn words(&self) -> [&Word; 4] {
        [&self.u, &self.v, &self.s, &self.t]
    }

    /// No two of the four words are equivalent as commutative words.
    pub fn pairwise_inequivalent(&self) -> bool {
        let ws = self.words();
        (0..4).all(|i| {
            (i + 1..4).all(|j| com_equivalence(&ws[i].com_word(), &ws[j].com_word()).is_none())
        })
    }

    /// All four words share a length and a content.
    pub fn aligned(&self) -> bool {
        let ws = self.words();
        ws.iter().all(|w| w.len() == ws[0].len()) && ws.iter().all(|w| w.content() == ws[0].content())
    }
}

fn runs(parts: &[(Letter, u32)]) -> Word {
    let mut letters = Vec::new();
    for &(l, e) in parts {
        for _ in 0..e {
            letters.push(l);
        }
    }
    Word::new(letters).expect("positive exponents")
}

/// Whether all multiplicities in the word are pairwise distinct; such words
/// admit no nontrivial multiplicity-preserving letter permutation.
pub fn is_unstable(w: &Word) -> bool {
    let parikh = w.parikh();
    let mults: BTreeSet<u32> = parikh.values().copied().collect();
    mults.len() == parikh.len()
}

/// Image of a word under the substitution sending each listed letter to an
/// identity element and fixing the rest. Only meaningful in a monoid
/// context — a plain semigroup has nothing to substitute — so callers must
/// flag results accordingly. `None` when every letter is erased.
pub fn monoid_erasure(w: &Word, erased: &BTreeSet<Letter>) -> Option<Word> {
    let kept: Vec<Letter> = w
        .letters()
        .iter()
        .copied()
        .filter(|l| !erased.contains(l))
        .collect();
    Word::new(kept).ok()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QuadrupleVariant {
    /// Four-letter words with two multiplicity-1 letters; the head and tail
    /// letters are swapped between the (u, v) and (s, t) pairs.
    Main,
    /// Three-letter words with all multiplicities distinct, so each word is
    /// unstable.
    Primed,
}

/// The parametric quadruple (u, v, s, t) for parameters n >= 2, m >= 1:
/// four words of one length and one content, pairwise inequivalent as
/// commutative words, with u = v and s = t balanced companions.
pub fn proposition_words(
    n: u32,
    m: u32,
    variant: QuadrupleVariant,
) -> Result<WordQuadruple, ProofLabError> {
    if n < 2 || m < 1 {
        return Err(ProofLabError::ParameterRange(String::from(
            "n must be at least 2 and m at least 1",
        )));
    }
    let (x, y, z, q) = (Letter::X, Letter::Y, Letter::Z, Letter::Q);
    let quad = match variant {
        QuadrupleVariant::Main => WordQuadruple {
            u: runs(&[(x, 1), (y, n + 4 * m + 3), (z, n), (q, 1)]),
            v: runs(&[(x, 1), (y, n + 2 * m + 3), (z, n + 2 * m), (q, 1)]),
            s: runs(&[(q, 1), (y, n + 4 * m + 2), (z, n + 1), (x, 1)]),
            t: runs(&[(q, 1), (y, n + 2 * m + 2), (z, n + 2 * m + 1), (x, 1)]),
        },
        QuadrupleVariant::Primed => WordQuadruple {
            u: runs(&[(x, n + 2 * m + 4), (y, n + 2), (z, 1)]),
            v: runs(&[(x, n + m + 4), (y, n + m + 2), (z, 1)]),
            s: runs(&[(x, n + 2 * m + 3), (y, n + 2), (z, 2)]),
            t: runs(&[(x, n + m + 3), (y, n + m + 2), (z, 2)]),
        },
    };
    debug_assert!(quad.aligned());
    debug_assert!(quad.pairwise_inequivalent());
    if variant == QuadrupleVariant::Primed {
        debug_assert!(quad.words().iter().all(|w| is_unstable(w)));
    }
    Ok(quad)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CorollaryWords {
    pub quadruple: WordQuadruple,
    /// First position (1-based) where the two input words differ.
    pub position: usize,
    pub left_letter: Letter,
    pub right_letter: Letter,
}

/// Prefixing trick: from two distinct words of one length, four words no
/// two of which are equivalent even as plain (non-commutative) words, with
/// u = s unbalanced. Writing x and y for the letters at the first position
/// where the inputs differ: u = xx.w1, v = xx.w2, s = xy.w1, t = xy.w2.
pub fn corollary_words(w1: &Word, w2: &Word) -> Result<CorollaryWords, ProofLabError> {
    if w1.len() != w2.len() {
        return Err(ProofLabError::DegenerateInput(String::from(
            "words of equal length required",
        )));
    }
    let diff = w1
        .letters()
        .iter()
        .zip(w2.letters())
        .position(|(a, b)| a != b);
    let Some(i) = diff else {
        return Err(ProofLabError::DegenerateInput(String::from(
            "the words are equal",
        )));
    };
    let x = w1.letters()[i];
    let y = w2.letters()[i];
    let xx = runs(&[(x, 2)]);
    let xy = runs(&[(x, 1), (y, 1)]);
    let quad = WordQuadruple {
        u: xx.concat(w1),
        v: xx.concat(w2),
        s: xy.concat(w1),
        t: xy.concat(w2),
    };
    let ws = quad.words();
    debug_assert!((0..4).all(|a| (a + 1..4).all(|b| sem_equivalence(ws[a], ws[b]).is_none())));
    debug_assert!(quad.u.parikh() != quad.s.parikh());
    Ok(CorollaryWords {
        quadruple: quad,
        position: i + 1,
        left_letter: x,
        right_letter: y,
    })
}

const UNIVERSE_CAP: usize = 500_000;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GammaAudit {
    /// Right multiplication by a generator maps related words to related
    /// words (products that leave the universe count as the sink).
    pub right_multiplication: bool,
    /// Every substitution keeping both images inside the universe maps the
    /// two members of each pair class into one class.
    pub substitution: bool,
    /// The pair classes are pairwise disjoint and avoid the sink.
    pub disjoint: bool,
}

impl GammaAudit {
    pub fn all_passed(&self) -> bool {
        self.right_multiplication && self.substitution && self.disjoint
    }
}

#[derive(Clone, Debug)]
pub struct GammaPartition {
    /// All commutative words over one more letter than the content of the
    /// inputs, of length up to the bound, ordered by (length, exponents).
    pub universe: Vec<ComWord>,
    /// Class label of each universe word; label 0 is the sink.
    pub labels: Vec<u32>,
    pub class_count: u32,
    /// Universe indices of (image of u, image of s), one per injection of
    /// the content into the extended alphabet.
    pub pair_classes: Vec<(usize, usize)>,
    pub audit: GammaAudit,
}

impl GammaPartition {
    pub fn sink_size(&self) -> usize {
        self.labels.iter().filter(|&&l| l == 0).count()
    }
}

fn vectors_up_to(dim: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = alloc::vec![0u32; dim];
    fn rec(slot: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slot == current.len() {
            out.push(current.clone());
            return;
        }
        for v in 0..=remaining {
            current[slot] = v;
            rec(slot + 1, remaining - v, current, out);
        }
        current[slot] = 0;
    }
    rec(0, bound, &mut current, &mut out);
    out.retain(|v| v.iter().any(|&c| c > 0));
    out.sort_by_key(|v| (v.iter().sum::<u32>(), v.clone()));
    out
}

fn word_from_vector(v: &[u32]) -> ComWord {
    let parikh: BTreeMap<Letter, u32> = v
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > 0)
        .map(|(i, &m)| (Letter::new(i as u32 + 1).unwrap(), m))
        .collect();
    ComWord::new(parikh).expect("nonzero vector")
}

fn content_injections(k: usize, alphabet: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(k: usize, alphabet: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for target in 0..alphabet {
            if !current.contains(&target) {
                current.push(target);
                rec(k, alphabet, current, out);
                current.pop();
            }
        }
    }
    rec(k, alphabet, &mut current, &mut out);
    out
}

/// The truncated class partition attached to an inequivalent pair of
/// unstable words of one length and content: a sink absorbs every word
/// longer than the inputs or of the same length with smaller content, and
/// each injective renaming of the inputs into the extended alphabet forms
/// one two-element class. Everything else is a singleton. The construction
/// audits itself for congruence behaviour inside the truncation.
pub fn gamma_partition(
    u: &ComWord,
    s: &ComWord,
    bound: u32,
) -> Result<GammaPartition, ProofLabError> {
    let len = u.len();
    if s.len() != len || u.support() != s.support() {
        return Err(ProofLabError::DegenerateInput(String::from(
            "the two words must share length and content",
        )));
    }
    if !is_unstable(&u.to_word()) || !is_unstable(&s.to_word()) {
        return Err(ProofLabError::DegenerateInput(String::from(
            "both words must have pairwise distinct multiplicities",
        )));
    }
    if com_equivalence(u, s).is_some() {
        return Err(ProofLabError::DegenerateInput(String::from(
            "the two words must not be equivalent",
        )));
    }
    if bound < len + 1 {
        return Err(ProofLabError::ParameterRange(String::from(
            "the bound must exceed the word length",
        )));
    }
    let k = u.support().len();
    let alphabet = k + 1;

    let vectors = vectors_up_to(alphabet, bound);
    if vectors.len() > UNIVERSE_CAP {
        return Err(ProofLabError::ResourceLimit(alloc::format!(
            "universe of {} words exceeds the cap of {}",
            vectors.len(),
            UNIVERSE_CAP
        )));
    }
    let index: BTreeMap<Vec<u32>, usize> =
        vectors.iter().cloned().zip(0..).collect();
    let support: Vec<Letter> = u.support().into_iter().collect();

    let in_sink = |v: &[u32]| {
        let total: u32 = v.iter().sum();
        let letters = v.iter().filter(|&&c| c > 0).count();
        total > len || (total == len && letters < k)
    };

    // pair classes: one per injection of the content into the alphabet
    let mut pair_classes = Vec::new();
    for injection in content_injections(k, alphabet) {
        let embed = |w: &ComWord| {
            let mut v = alloc::vec![0u32; alphabet];
            for (pos, &l) in support.iter().enumerate() {
                v[injection[pos]] = w.multiplicity(l);
            }
            v
        };
        let iu = index[&embed(u)];
        let is = index[&embed(s)];
        pair_classes.push((iu, is));
    }

    // labels: sink first, then the pair classes, then singletons
    let mut labels = alloc::vec![u32::MAX; vectors.len()];
    for (i, v) in vectors.iter().enumerate() {
        if in_sink(v) {
            labels[i] = 0;
        }
    }
    let mut disjoint = true;
    for (c, &(iu, is)) in pair_classes.iter().enumerate() {
        let label = c as u32 + 1;
        for idx in [iu, is] {
            if labels[idx] != u32::MAX {
                disjoint = false;
            }
            labels[idx] = label;
        }
    }
    let mut next = pair_classes.len() as u32 + 1;
    for l in labels.iter_mut() {
        if *l == u32::MAX {
            *l = next;
            next += 1;
        }
    }

    // audit 1: right multiplication by each generator respects classes,
    // counting anything beyond the bound as the sink (it is longer than
    // the inputs, hence conceptually in the sink)
    let label_of = |v: &Vec<u32>| index.get(v).map(|&i| labels[i]).unwrap_or(0);
    let mut right_multiplication = true;
    let mut by_label: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        by_label.entry(l).or_default().push(i);
    }
    for members in by_label.values() {
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                for g in 0..alphabet {
                    let mut pi = vectors[i].clone();
                    pi[g] += 1;
                    let mut pj = vectors[j].clone();
                    pj[g] += 1;
                    if label_of(&pi) != label_of(&pj) {
                        right_multiplication = false;
                    }
                }
            }
        }
    }

    // audit 2: substitutions keeping both images inside the universe send
    // the two members of each pair class into one class
    let mut substitution = true;
    for &(iu, is) in &pair_classes {
        let wu = &vectors[iu];
        let ws = &vectors[is];
        let coords: Vec<usize> = (0..alphabet).filter(|&c| wu[c] > 0).collect();
        let mut assignment: Vec<&Vec<u32>> = Vec::new();
        fn dfs<'a>(
            coords: &[usize],
            pos: usize,
            wu: &[u32],
            ws: &[u32],
            used_u: u32,
            used_s: u32,
            bound: u32,
            images: &'a [Vec<u32>],
            assignment: &mut Vec<&'a Vec<u32>>,
            check: &mut dyn FnMut(&[&Vec<u32>]) -> bool,
            ok: &mut bool,
        ) {
            if pos == coords.len() {
                if !check(assignment) {
                    *ok = false;
                }
                return;
            }
            let remaining_u: u32 = coords[pos + 1..].iter().map(|&c| wu[c]).sum();
            let remaining_s: u32 = coords[pos + 1..].iter().map(|&c| ws[c]).sum();
            for img in images {
                let size: u32 = img.iter().sum();
                let next_u = used_u + wu[coords[pos]] * size;
                let next_s = used_s + ws[coords[pos]] * size;
                if next_u + remaining_u > bound || next_s + remaining_s > bound {
                    continue;
                }
                assignment.push(img);
                dfs(
                    coords, pos + 1, wu, ws, next_u, next_s, bound, images, assignment, check, ok,
                );
                assignment.pop();
            }
        }
        let mut check = |assignment: &[&Vec<u32>]| {
            let apply = |w: &[u32]| {
                let mut out = alloc::vec![0u32; alphabet];
                for (pos, &c) in coords.iter().enumerate() {
                    for (slot, &m) in assignment[pos].iter().enumerate() {
                        out[slot] += w[c] * m;
                    }
                }
                out
            };
            label_of(&apply(wu)) == label_of(&apply(ws))
        };
        let mut ok = true;
        dfs(
            &coords,
            0,
            wu,
            ws,
            0,
            0,
            bound,
            &vectors,
            &mut assignment,
            &mut check,
            &mut ok,
        );
        if !ok {
            substitution = false;
        }
    }

    for (i, &(iu, is)) in pair_classes.iter().enumerate() {
        if in_sink(&vectors[iu]) || in_sink(&vectors[is]) {
            disjoint = false;
        }
        for &(ju, js) in &pair_classes[i + 1..] {
            if iu == ju || iu == js || is == ju || is == js {
                disjoint = false;
            }
        }
    }

    let universe = vectors.iter().map(|v| word_from_vector(v)).collect();
    Ok(GammaPartition {
        universe,
        class_count: next,
        labels,
        pair_classes,
        audit: GammaAudit {
            right_multiplication,
            substitution,
            disjoint,
        },
    })
}
