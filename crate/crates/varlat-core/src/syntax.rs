//! Words, multiplicity vectors, identities and bases.
//!
//! A [`Word`] is a nonempty sequence of letters (an element of a free
//! semigroup); a [`ComWord`] is its commutative image, a nonempty
//! multiplicity vector. Identities come in two shapes: plain equations
//! `u = v` and zero identities `w = 0`, the latter abbreviating the pair
//! `wx = w`, `xw = w` for a letter `x` not occurring in `w`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

/// A letter of the countable alphabet, indexed from 1.
///
/// Indices 1..=5 render as `x y z q t`; higher indices render as `x_6`,
/// `x_7`, and so on.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter(u32);

impl Letter {
    pub const X: Letter = Letter(1);
    pub const Y: Letter = Letter(2);
    pub const Z: Letter = Letter(3);
    pub const Q: Letter = Letter(4);
    pub const T: Letter = Letter(5);

    pub fn new(index: u32) -> Result<Letter, SyntaxError> {
        if index == 0 {
            Err(SyntaxError::LetterIndexZero)
        } else {
            Ok(Letter(index))
        }
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

/// First five letters, matching the display alphabet.
pub const X: Letter = Letter(1);
pub const Y: Letter = Letter(2);
pub const Z: Letter = Letter(3);
pub const Q: Letter = Letter(4);
pub const T: Letter = Letter(5);

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            1 => write!(f, "x"),
            2 => write!(f, "y"),
            3 => write!(f, "z"),
            4 => write!(f, "q"),
            5 => write!(f, "t"),
            i => write!(f, "x_{}", i),
        }
    }
}

/// A bijective letter renaming, stored as an explicit finite map.
pub type Renaming = BTreeMap<Letter, Letter>;

/// Errors raised by constructors and structural operations in this module.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SyntaxError {
    EmptyWord,
    LetterIndexZero,
    ZeroMultiplicity(Letter),
    /// A substitution was applied to a word containing a letter without an image.
    MissingImage(Letter),
    /// The operation is only defined for equations, not zero identities.
    NotAnEquation,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SyntaxError::EmptyWord => write!(f, "empty word"),
            SyntaxError::LetterIndexZero => write!(f, "letter index must be at least 1"),
            SyntaxError::ZeroMultiplicity(l) => {
                write!(f, "multiplicity of {} must be at least 1", l)
            }
            SyntaxError::MissingImage(l) => write!(f, "substitution has no image for {}", l),
            SyntaxError::NotAnEquation => write!(f, "operation requires an equation, not w = 0"),
        }
    }
}

impl core::error::Error for SyntaxError {}

/// A nonempty word over the alphabet.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Word, SyntaxError> {
        if letters.is_empty() {
            Err(SyntaxError::EmptyWord)
        } else {
            Ok(Word { letters })
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn head(&self) -> Letter {
        self.letters[0]
    }

    pub fn tail(&self) -> Letter {
        *self.letters.last().unwrap()
    }

    /// The set of letters occurring in the word.
    pub fn content(&self) -> BTreeSet<Letter> {
        self.letters.iter().copied().collect()
    }

    /// Number of occurrences of `l`.
    pub fn count(&self, l: Letter) -> u32 {
        self.letters.iter().filter(|&&c| c == l).count() as u32
    }

    /// The multiplicity vector, letter by letter.
    pub fn parikh(&self) -> BTreeMap<Letter, u32> {
        let mut m = BTreeMap::new();
        for &l in &self.letters {
            *m.entry(l).or_insert(0) += 1;
        }
        m
    }

    pub fn com_word(&self) -> ComWord {
        ComWord {
            parikh: self.parikh(),
        }
    }

    pub fn reversed(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().copied().collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// Whether `self` occurs in `other` as a contiguous factor with
    /// `other` strictly longer.
    pub fn is_proper_factor_of(&self, other: &Word) -> bool {
        if self.len() >= other.len() {
            return false;
        }
        other
            .letters
            .windows(self.len())
            .any(|w| w == self.letters.as_slice())
    }

    /// Bundles the structural data used by the word-problem deciders.
    pub fn profile(&self) -> WordProfile {
        WordProfile {
            length: self.len(),
            content: self.content(),
            head: self.head(),
            tail: self.tail(),
            multiplicities: self.parikh(),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == l {
                run += 1;
            }
            if run == 1 {
                write!(f, "{}", l)?;
            } else {
                write!(f, "{}^{}", l, run)?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Length, content, end letters and multiplicities of a word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WordProfile {
    pub length: usize,
    pub content: BTreeSet<Letter>,
    pub head: Letter,
    pub tail: Letter,
    pub multiplicities: BTreeMap<Letter, u32>,
}

/// A nonempty multiplicity vector: the image of a word in the free
/// commutative semigroup. All stored multiplicities are positive.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ComWord {
    parikh: BTreeMap<Letter, u32>,
}

impl ComWord {
    pub fn new(parikh: BTreeMap<Letter, u32>) -> Result<ComWord, SyntaxError> {
        if parikh.is_empty() {
            return Err(SyntaxError::EmptyWord);
        }
        for (&l, &m) in &parikh {
            if m == 0 {
                return Err(SyntaxError::ZeroMultiplicity(l));
            }
        }
        Ok(ComWord { parikh })
    }

    pub fn parikh(&self) -> &BTreeMap<Letter, u32> {
        &self.parikh
    }

    pub fn support(&self) -> BTreeSet<Letter> {
        self.parikh.keys().copied().collect()
    }

    pub fn multiplicity(&self, l: Letter) -> u32 {
        self.parikh.get(&l).copied().unwrap_or(0)
    }

    pub fn len(&self) -> u32 {
        self.parikh.values().sum()
    }

    /// Any word with this multiplicity vector, letters in ascending order.
    pub fn to_word(&self) -> Word {
        let mut letters = Vec::new();
        for (&l, &m) in &self.parikh {
            for _ in 0..m {
                letters.push(l);
            }
        }
        Word { letters }
    }

    /// Componentwise comparison: true when every multiplicity of `self`
    /// is at most the corresponding multiplicity of `other`.
    pub fn divides(&self, other: &ComWord) -> bool {
        self.parikh
            .iter()
            .all(|(l, &m)| other.multiplicity(*l) >= m)
    }

    pub fn renamed(&self, renaming: &Renaming) -> Result<ComWord, SyntaxError> {
        let mut parikh = BTreeMap::new();
        for (&l, &m) in &self.parikh {
            let target = *renaming.get(&l).ok_or(SyntaxError::MissingImage(l))?;
            *parikh.entry(target).or_insert(0) += m;
        }
        ComWord::new(parikh)
    }
}

impl fmt::Display for ComWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (&l, &m) in &self.parikh {
            if m == 1 {
                write!(f, "{}", l)?;
            } else {
                write!(f, "{}^{}", l, m)?;
            }
        }
        Ok(())
    }
}

/// A substitution assigning a word to each letter of its domain.
///
/// Applying it to a word requires an image for every letter of that word;
/// a missing letter is an error rather than an implicit fixpoint.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Substitution {
    images: BTreeMap<Letter, Word>,
}

impl Substitution {
    pub fn new(images: BTreeMap<Letter, Word>) -> Substitution {
        Substitution { images }
    }

    pub fn bind(&mut self, l: Letter, image: Word) {
        self.images.insert(l, image);
    }

    pub fn image(&self, l: Letter) -> Option<&Word> {
        self.images.get(&l)
    }

    pub fn apply(&self, w: &Word) -> Result<Word, SyntaxError> {
        let mut letters = Vec::new();
        for &l in w.letters() {
            let image = self.images.get(&l).ok_or(SyntaxError::MissingImage(l))?;
            letters.extend_from_slice(image.letters());
        }
        Word::new(letters)
    }
}

/// An identity: either an equation between two words or a zero identity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Identity {
    Equation(Word, Word),
    /// `w = 0`, abbreviating `wx = w` and `xw = w` for a fresh letter `x`.
    ZeroReduced(Word),
}

impl Identity {
    /// Letters occurring on either side.
    pub fn content(&self) -> BTreeSet<Letter> {
        match self {
            Identity::Equation(u, v) => u.content().union(&v.content()).copied().collect(),
            Identity::ZeroReduced(w) => w.content(),
        }
    }

    /// Equations with equal multiplicity vectors on both sides.
    /// Zero identities are never balanced.
    pub fn is_balanced(&self) -> bool {
        match self {
            Identity::Equation(u, v) => u.parikh() == v.parikh(),
            Identity::ZeroReduced(_) => false,
        }
    }

    /// Expands a zero identity into its defining pair of equations over a
    /// fresh letter; returns an equation unchanged.
    pub fn expanded(&self) -> Vec<Identity> {
        match self {
            Identity::Equation(..) => alloc::vec![self.clone()],
            Identity::ZeroReduced(w) => {
                let fresh = Letter(w.content().iter().map(|l| l.index()).max().unwrap() + 1);
                let f = Word::new(alloc::vec![fresh]).unwrap();
                alloc::vec![
                    Identity::Equation(w.concat(&f), w.clone()),
                    Identity::Equation(f.concat(w), w.clone()),
                ]
            }
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Identity::Equation(u, v) => write!(f, "{} = {}", u, v),
            Identity::ZeroReduced(w) => write!(f, "{} = 0", w),
        }
    }
}

/// A finite list of identities defining a variety.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Basis {
    identities: Vec<Identity>,
    commutative: bool,
}

impl Basis {
    /// Builds a basis, detecting whether the commutative law is literally
    /// present (an equation `ab = ba` on two distinct letters).
    pub fn new(identities: Vec<Identity>) -> Basis {
        let commutative = identities.iter().any(is_commutative_law);
        Basis {
            identities,
            commutative,
        }
    }

    /// Appends the commutative law if no literal copy is present.
    pub fn ensure_commutative(mut self) -> Basis {
        if !self.commutative {
            let xy = Word::new(alloc::vec![X, Y]).unwrap();
            let yx = Word::new(alloc::vec![Y, X]).unwrap();
            self.identities.push(Identity::Equation(xy, yx));
            self.commutative = true;
        }
        self
    }

    pub fn identities(&self) -> &[Identity] {
        &self.identities
    }

    /// True when the commutative law is literally among the identities.
    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    /// Largest number of distinct letters in any single identity.
    pub fn max_letters(&self) -> usize {
        self.identities
            .iter()
            .map(|id| id.content().len())
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, id) in self.identities.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", id)?;
        }
        write!(f, "}}")
    }
}

fn is_commutative_law(id: &Identity) -> bool {
    match id {
        Identity::Equation(u, v) => {
            u.len() == 2
                && v.len() == 2
                && u.letters()[0] != u.letters()[1]
                && v.letters()[0] == u.letters()[1]
                && v.letters()[1] == u.letters()[0]
        }
        Identity::ZeroReduced(_) => false,
    }
}

/// The ambient free object in which words are compared: the free
/// semigroup (`Sem`) or the free commutative semigroup (`Com`).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Context {
    Sem,
    Com,
}

/// A bijection `pi` from the content of `v` onto the content of `u` with
/// `pi(v) = u` position by position, if one exists. Presence is symmetric
/// in the two arguments.
pub fn sem_equivalence(u: &Word, v: &Word) -> Option<Renaming> {
    if u.len() != v.len() {
        return None;
    }
    let mut map: Renaming = BTreeMap::new();
    for (&a, &b) in v.letters().iter().zip(u.letters()) {
        match map.get(&a) {
            Some(&prev) if prev != b => return None,
            Some(_) => {}
            None => {
                map.insert(a, b);
            }
        }
    }
    let distinct: BTreeSet<Letter> = map.values().copied().collect();
    if distinct.len() == map.len() {
        Some(map)
    } else {
        None
    }
}

/// A bijection `pi` from the support of `v` onto the support of `u` with
/// `pi` carrying the multiplicity vector of `v` to that of `u`, if one
/// exists. Letters are paired within equal-multiplicity groups in
/// ascending index order, so the witness is deterministic.
pub fn com_equivalence(u: &ComWord, v: &ComWord) -> Option<Renaming> {
    if u.support().len() != v.support().len() || u.len() != v.len() {
        return None;
    }
    let mut by_mult_u: BTreeMap<u32, Vec<Letter>> = BTreeMap::new();
    for (&l, &m) in u.parikh() {
        by_mult_u.entry(m).or_default().push(l);
    }
    let mut by_mult_v: BTreeMap<u32, Vec<Letter>> = BTreeMap::new();
    for (&l, &m) in v.parikh() {
        by_mult_v.entry(m).or_default().push(l);
    }
    if by_mult_u.len() != by_mult_v.len() {
        return None;
    }
    let mut map: Renaming = BTreeMap::new();
    for ((&mu, us), (&mv, vs)) in by_mult_u.iter().zip(by_mult_v.iter()) {
        if mu != mv || us.len() != vs.len() {
            return None;
        }
        for (&lv, &lu) in vs.iter().zip(us.iter()) {
            map.insert(lv, lu);
        }
    }
    Some(map)
}

/// A nontrivial permutation of the content of `w` fixing `w` in the given
/// context, if one exists.
///
/// In `Sem` no word admits one: a letter permutation fixing a word
/// position by position fixes every letter of its content. In `Com` one
/// exists exactly when two distinct letters share a multiplicity; the
/// witness transposes the two smallest such letters.
pub fn stability_witness(w: &Word, context: Context) -> Option<Renaming> {
    match context {
        Context::Sem => None,
        Context::Com => {
            let parikh = w.parikh();
            let mut by_mult: BTreeMap<u32, Vec<Letter>> = BTreeMap::new();
            for (&l, &m) in &parikh {
                by_mult.entry(m).or_default().push(l);
            }
            let group = by_mult.values().find(|g| g.len() >= 2)?;
            let (a, b) = (group[0], group[1]);
            let mut map: Renaming = parikh.keys().map(|&l| (l, l)).collect();
            map.insert(a, b);
            map.insert(b, a);
            Some(map)
        }
    }
}

/// Renamings witnessing that one side of an equation is obtained from the
/// other by a permutation of its letters.
///
/// `sem` holds a permutation `pi` of the common content with `pi` applied
/// to the left side giving the right side position by position; `com`
/// requires this only at the level of multiplicity vectors. A positional
/// witness is always also a commutative one.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubstitutiveWitness {
    pub sem: Option<Renaming>,
    pub com: Option<Renaming>,
}

impl SubstitutiveWitness {
    pub fn present_in(&self, context: Context) -> bool {
        match context {
            Context::Sem => self.sem.is_some(),
            Context::Com => self.com.is_some(),
        }
    }
}

/// Checks whether an equation is substitutive: both sides share their
/// content and one maps to the other under a permutation of it.
/// Zero identities are rejected with [`SyntaxError::NotAnEquation`].
pub fn substitutive_renamings(id: &Identity) -> Result<SubstitutiveWitness, SyntaxError> {
    let (u, v) = match id {
        Identity::Equation(u, v) => (u, v),
        Identity::ZeroReduced(_) => return Err(SyntaxError::NotAnEquation),
    };
    if u.content() != v.content() {
        return Ok(SubstitutiveWitness {
            sem: None,
            com: None,
        });
    }
    let sem = sem_equivalence(v, u);
    let com = com_equivalence(&v.com_word(), &u.com_word());
    Ok(SubstitutiveWitness { sem, com })
}

/// Zero identities forced by a single identity in a nil context, in one
/// deduction step.
///
/// For an equation `u = v`: when the contents differ, both `u = 0` and
/// `v = 0` follow; when one side properly contains the other (as a
/// contiguous factor, or componentwise on multiplicity vectors in the
/// commutative case), the contained side is forced to zero. For an input
/// `w = 0` the word itself is returned.
pub fn nil_zero_consequences(id: &Identity, commutative: bool) -> Vec<Word> {
    let (u, v) = match id {
        Identity::Equation(u, v) => (u, v),
        Identity::ZeroReduced(w) => return alloc::vec![w.clone()],
    };
    let mut out: Vec<Word> = Vec::new();
    let mut push = |w: &Word| {
        if !out.contains(w) {
            out.push(w.clone());
        }
    };
    if u.content() != v.content() {
        push(u);
        push(v);
        return out;
    }
    let absorbed = |small: &Word, large: &Word| -> bool {
        if commutative {
            let (s, l) = (small.com_word(), large.com_word());
            s != l && s.divides(&l)
        } else {
            small.is_proper_factor_of(large)
        }
    };
    if absorbed(u, v) {
        push(u);
    }
    if absorbed(v, u) {
        push(v);
    }
    out
}

/// Exponents `(a, b)` with `x^a = x^(a+b)` forced by the basis, obtained
/// by collapsing each identity onto a single letter.
///
/// Each unbalanced equation is collapsed once per letter with differing
/// multiplicities (that letter to `x`, all others to `x^2`) and once with
/// every letter to `x`; each zero identity `w = 0` contributes
/// `(len(w), 1)`. Among all forced pairs the lexicographically least is
/// returned. Absent exactly when every identity is a balanced equation,
/// in which case every identity already holds in the free commutative
/// semigroup.
pub fn periodicity_exponents(basis: &Basis) -> Option<(u32, u32)> {
    let mut best: Option<(u32, u32)> = None;
    let mut offer = |p: u32, q: u32| {
        if p == q {
            return;
        }
        let (a, b) = if p < q { (p, q - p) } else { (q, p - q) };
        if best.map_or(true, |cur| (a, b) < cur) {
            best = Some((a, b));
        }
    };
    for id in basis.identities() {
        match id {
            Identity::ZeroReduced(w) => {
                let n = w.len() as u32;
                offer(n, n + 1);
            }
            Identity::Equation(u, v) => {
                if id.is_balanced() {
                    continue;
                }
                offer(u.len() as u32, v.len() as u32);
                let pu = u.parikh();
                let pv = v.parikh();
                let letters: BTreeSet<Letter> =
                    pu.keys().chain(pv.keys()).copied().collect();
                for &l in &letters {
                    let cu = pu.get(&l).copied().unwrap_or(0);
                    let cv = pv.get(&l).copied().unwrap_or(0);
                    if cu == cv {
                        continue;
                    }
                    // l -> x, every other letter -> x^2
                    let img_u = 2 * u.len() as u32 - cu;
                    let img_v = 2 * v.len() as u32 - cv;
                    offer(img_u, img_v);
                }
            }
        }
    }
    best
}
