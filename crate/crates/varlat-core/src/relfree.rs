//! Finite relatively free commutative semigroups as exact deduction oracles.
//!
//! A finitely based commutative periodic variety has, for every rank `k`, a
//! finite free object: vectors over `{0, .., a+b-1}` (excluding the zero
//! vector) under componentwise addition with coordinates >= `a` folded back
//! into `[a, a+b)`, modulo the congruence generated by all substitution
//! instances of the basis. An identity in `k` letters holds in the variety
//! exactly when its two sides have the same class here, which turns identity
//! deduction, nil detection and zero-word enumeration into finite
//! computations.
//!
//! Instances are generated letter by letter: after choosing images for a
//! prefix of the letters, only the pair of partial sums matters, and partial
//! sums that are congruent under the already-known relation (or that both
//! sit in the absorbing class) are merged. This keeps the state space near
//! the square of the current class count instead of the number of
//! substitution tuples. Newly merged pairs are closed under translation by
//! the generators, which suffices for a congruence on a commutative carrier.

use core::fmt;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::syntax::{Basis, ComWord, Identity, Letter, Word};
use crate::uf::UnionFind;
use crate::zerored::zero_consequence;

/// The one-letter law `x^index = x^(index+period)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PeriodicBase {
    pub index: u32,
    pub period: u32,
}

impl PeriodicBase {
    pub fn new(index: u32, period: u32) -> Self {
        assert!(index >= 1 && period >= 1);
        PeriodicBase { index, period }
    }

    /// Size of one coordinate's value range, `index + period`.
    pub fn modulus(&self) -> u32 {
        self.index + self.period
    }

    fn norm(&self, c: u32) -> u32 {
        if c < self.index {
            c
        } else {
            self.index + (c - self.index) % self.period
        }
    }

    /// The law as an identity, for verification against a basis.
    pub fn law(&self) -> Identity {
        Identity::Equation(
            power_word(Letter::X, self.index),
            power_word(Letter::X, self.index + self.period),
        )
    }
}

/// Resource ceilings for carrier construction and instance generation.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    /// Maximum number of carrier elements per free object.
    pub carrier_cap: u64,
    /// Maximum number of instance-expansion steps per build.
    pub work_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            carrier_cap: 4096,
            work_cap: 10_000_000,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RelFreeError {
    NotCommutative,
    NotPeriodic,
    NotNil,
    ResourceLimit(String),
    LawViolated(String),
}

impl fmt::Display for RelFreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelFreeError::NotCommutative => write!(f, "commutative basis required"),
            RelFreeError::NotPeriodic => write!(
                f,
                "variety not periodic (every identity is balanced, so the variety contains all commutative semigroups)"
            ),
            RelFreeError::NotNil => write!(f, "nil variety required"),
            RelFreeError::ResourceLimit(what) => write!(f, "resource limit exceeded: {}", what),
            RelFreeError::LawViolated(what) => write!(f, "{}", what),
        }
    }
}

impl core::error::Error for RelFreeError {}

pub fn power_word(letter: Letter, exp: u32) -> Word {
    assert!(exp >= 1);
    Word::new(alloc::vec![letter; exp as usize]).unwrap()
}

/// A partition of a fixed carrier into congruence classes, labelled
/// consecutively in order of first appearance.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CarrierPartition {
    pub labels: Vec<u32>,
    pub class_count: u32,
}

/// Canonical relabelling of the common refinement of two partitions of the
/// same carrier.
pub fn partition_meet(p: &CarrierPartition, q: &CarrierPartition) -> CarrierPartition {
    assert_eq!(p.labels.len(), q.labels.len());
    let mut seen: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    let mut labels = Vec::with_capacity(p.labels.len());
    for (a, b) in p.labels.iter().zip(q.labels.iter()) {
        let next = seen.len() as u32;
        let label = *seen.entry((*a, *b)).or_insert(next);
        labels.push(label);
    }
    CarrierPartition {
        class_count: seen.len() as u32,
        labels,
    }
}

// ---------------------------------------------------------------------------
// carrier + congruence construction

struct Carrier {
    base: PeriodicBase,
    rank: u32,
    size: usize,
    /// flattened element vectors: coords of element `i` at `i*rank..`
    vectors: Vec<u32>,
    powers: Vec<u32>,
}

impl Carrier {
    fn build(base: PeriodicBase, rank: u32, limits: &Limits) -> Result<Carrier, RelFreeError> {
        assert!(rank >= 1);
        let m = base.modulus() as u64;
        let mut total: u64 = 1;
        for _ in 0..rank {
            total = total.saturating_mul(m);
            if total - 1 > limits.carrier_cap {
                return Err(RelFreeError::ResourceLimit(alloc::format!(
                    "carrier for rank {} over modulus {} exceeds {} elements",
                    rank,
                    m,
                    limits.carrier_cap
                )));
            }
        }
        let size = (total - 1) as usize;
        let mut powers = Vec::with_capacity(rank as usize);
        let mut p = 1u32;
        for _ in 0..rank {
            powers.push(p);
            p *= m as u32;
        }
        let mut vectors = alloc::vec![0u32; size * rank as usize];
        for code in 1..=size as u32 {
            let mut rest = code;
            for i in 0..rank as usize {
                vectors[(code as usize - 1) * rank as usize + i] = rest % m as u32;
                rest /= m as u32;
            }
        }
        Ok(Carrier {
            base,
            rank,
            size,
            vectors,
            powers,
        })
    }

    fn coords(&self, idx: usize) -> &[u32] {
        &self.vectors[idx * self.rank as usize..(idx + 1) * self.rank as usize]
    }

    /// code of `current + coeff * element(idx)`; codes include 0 for the
    /// empty partial sum, carrier indices are `code - 1`.
    fn add_scaled(&self, code: u32, coeff: u32, idx: usize) -> u32 {
        if coeff == 0 {
            return code;
        }
        let mut out = 0u32;
        let elem = self.coords(idx);
        for i in 0..self.rank as usize {
            let own = (code / self.powers[i]) % self.base.modulus();
            let c = self.base.norm(own + coeff * elem[i]);
            out += c * self.powers[i];
        }
        out
    }

    fn add_generator(&self, code: u32, gen: usize) -> u32 {
        let mut out = 0u32;
        for i in 0..self.rank as usize {
            let mut own = (code / self.powers[i]) % self.base.modulus();
            if i == gen {
                own = self.base.norm(own + 1);
            }
            out += own * self.powers[i];
        }
        out
    }

    fn encode_parikh(&self, word_parikh: &BTreeMap<Letter, u32>, letters: &[Letter]) -> u32 {
        let mut code = 0u32;
        for (i, l) in letters.iter().enumerate() {
            let c = word_parikh.get(l).copied().unwrap_or(0);
            code += self.base.norm(c) * self.powers[i];
        }
        code
    }
}

struct Builder {
    carrier: Carrier,
    uf: UnionFind,
    pending: Vec<(u32, u32)>,
    absorbing: Option<u32>,
    work: u64,
    work_cap: u64,
}

impl Builder {
    fn new(carrier: Carrier, work_cap: u64) -> Builder {
        let size = carrier.size;
        Builder {
            carrier,
            uf: UnionFind::new(size),
            pending: Vec::new(),
            absorbing: None,
            work: 0,
            work_cap,
        }
    }

    fn charge(&mut self, amount: u64) -> Result<(), RelFreeError> {
        self.work += amount;
        if self.work > self.work_cap {
            Err(RelFreeError::ResourceLimit(alloc::format!(
                "instance generation exceeded {} steps",
                self.work_cap
            )))
        } else {
            Ok(())
        }
    }

    fn merge(&mut self, p: u32, q: u32) {
        if self.uf.union(p, q) {
            self.pending.push((p, q));
        }
    }

    /// Translation closure: every merged pair, translated by every
    /// generator, must be merged as well. Generator steps suffice because
    /// translating by an arbitrary element is a chain of generator steps.
    fn drain(&mut self) {
        while let Some((p, q)) = self.pending.pop() {
            for g in 0..self.carrier.rank as usize {
                let p2 = self.carrier.add_generator(p + 1, g) - 1;
                let q2 = self.carrier.add_generator(q + 1, g) - 1;
                if self.uf.union(p2, q2) {
                    self.pending.push((p2, q2));
                }
            }
        }
    }

    fn refresh_absorbing(&mut self) {
        self.absorbing = None;
        let mut seen_roots: BTreeSet<u32> = BTreeSet::new();
        for idx in 0..self.carrier.size {
            let root = self.uf.find(idx as u32);
            if !seen_roots.insert(root) {
                continue;
            }
            let mut absorbing = true;
            for g in 0..self.carrier.rank as usize {
                let next = self.carrier.add_generator(idx as u32 + 1, g) - 1;
                if self.uf.find(next) != root {
                    absorbing = false;
                    break;
                }
            }
            if absorbing {
                debug_assert!(self.absorbing.is_none(), "two absorbing classes");
                self.absorbing = Some(root);
                #[cfg(not(debug_assertions))]
                break;
            }
        }
    }

    fn state_key(&mut self, code: u32) -> u32 {
        if code == 0 {
            u32::MAX
        } else {
            self.uf.find(code - 1)
        }
    }

    /// Merges all substitution instances of `u = v`.
    fn process_equation(&mut self, u: &Word, v: &Word) -> Result<(), RelFreeError> {
        let mut letters: BTreeSet<Letter> = u.content();
        letters.extend(v.content());
        let letters: Vec<Letter> = letters.into_iter().collect();
        let pu = u.parikh();
        let pv = v.parikh();
        let coeffs: Vec<(u32, u32)> = letters
            .iter()
            .map(|l| {
                (
                    pu.get(l).copied().unwrap_or(0),
                    pv.get(l).copied().unwrap_or(0),
                )
            })
            .collect();

        let mut states: Vec<(u32, u32)> = alloc::vec![(0, 0)];
        for (pos, (cu, cv)) in coeffs.iter().enumerate() {
            let last = pos + 1 == coeffs.len();
            self.charge(states.len() as u64 * self.carrier.size as u64)?;
            let mut next: Vec<(u32, u32)> = Vec::new();
            let mut seen: BTreeSet<(u32, u32)> = BTreeSet::new();
            for (s1, s2) in core::mem::take(&mut states) {
                for idx in 0..self.carrier.size {
                    let n1 = self.carrier.add_scaled(s1, *cu, idx);
                    let n2 = self.carrier.add_scaled(s2, *cv, idx);
                    if last {
                        self.merge(n1 - 1, n2 - 1);
                    } else {
                        let key = (self.state_key(n1), self.state_key(n2));
                        if key.0 == key.1 {
                            if let Some(root) = self.absorbing {
                                // both sides already collapsed onto the
                                // absorbing class: every completion stays
                                // there, nothing new can be merged
                                if key.0 == root {
                                    continue;
                                }
                            }
                        }
                        if seen.insert(key) {
                            next.push((n1, n2));
                        }
                    }
                }
            }
            states = next;
        }
        self.drain();
        self.refresh_absorbing();
        Ok(())
    }

    /// Merges, for every substitution instance of `w`, the instance with
    /// all its one-generator extensions: exactly the instances of the pair
    /// `wz = w`, `zw = w` over a fresh letter `z`, since longer extensions
    /// follow under translation closure.
    fn process_zero(&mut self, w: &Word) -> Result<(), RelFreeError> {
        let letters: Vec<Letter> = w.content().into_iter().collect();
        let parikh = w.parikh();
        let mut states: Vec<u32> = alloc::vec![0];
        for l in &letters {
            let coeff = parikh[l];
            self.charge(states.len() as u64 * self.carrier.size as u64)?;
            let mut next: Vec<u32> = Vec::new();
            let mut seen: BTreeSet<u32> = BTreeSet::new();
            for s in core::mem::take(&mut states) {
                for idx in 0..self.carrier.size {
                    let n = self.carrier.add_scaled(s, coeff, idx);
                    let key = self.state_key(n);
                    if seen.insert(key) {
                        next.push(n);
                    }
                }
            }
            states = next;
        }
        for s in states {
            for g in 0..self.carrier.rank as usize {
                let extended = self.carrier.add_generator(s, g);
                self.merge(extended - 1, s - 1);
            }
        }
        self.drain();
        self.refresh_absorbing();
        Ok(())
    }
}

fn build_partition(
    identities: &[Identity],
    base: PeriodicBase,
    rank: u32,
    limits: &Limits,
) -> Result<(CarrierPartition, Option<u32>), RelFreeError> {
    let carrier = Carrier::build(base, rank, limits)?;
    let mut builder = Builder::new(carrier, limits.work_cap);

    // zero identities first (they collapse the most), then equations on few
    // letters: the instance generator prunes against everything merged so far
    let mut zeros: Vec<&Word> = Vec::new();
    let mut equations: Vec<(&Word, &Word)> = Vec::new();
    for id in identities {
        match id {
            Identity::ZeroReduced(w) => zeros.push(w),
            Identity::Equation(u, v) => {
                if !id.is_balanced() {
                    equations.push((u, v));
                }
            }
        }
    }
    equations.sort_by_key(|(u, v)| {
        let mut letters = u.content();
        letters.extend(v.content());
        letters.len()
    });
    for w in zeros {
        builder.process_zero(w)?;
    }
    for (u, v) in equations {
        builder.process_equation(u, v)?;
    }

    let (labels, class_count) = builder.uf.class_labels();
    let absorbing_label = builder.absorbing.map(|root| labels[root as usize]);
    Ok((
        CarrierPartition {
            labels,
            class_count: class_count as u32,
        },
        absorbing_label,
    ))
}

// ---------------------------------------------------------------------------
// free objects

/// The finite relatively free object of a commutative periodic variety on a
/// fixed number of generators, with its congruence fully computed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreeObject {
    base: PeriodicBase,
    rank: u32,
    labels: Vec<u32>,
    class_count: u32,
    zero_class: Option<u32>,
}

impl FreeObject {
    pub fn base(&self) -> PeriodicBase {
        self.base
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn carrier_size(&self) -> usize {
        self.labels.len()
    }

    pub fn class_count(&self) -> u32 {
        self.class_count
    }

    /// The absorbing class, when one exists (for nil varieties: the class
    /// of all words that are zero on these generators).
    pub fn zero_class(&self) -> Option<u32> {
        self.zero_class
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    fn carrier(&self, limits: &Limits) -> Carrier {
        Carrier::build(self.base, self.rank, limits).expect("carrier was already built once")
    }

    /// Class of a word under the canonical map sending `letters[i]` to the
    /// i-th generator. Letters outside the list must not occur in the word.
    pub fn class_of(&self, parikh: &BTreeMap<Letter, u32>, letters: &[Letter]) -> u32 {
        debug_assert!(parikh.keys().all(|l| letters.contains(l)));
        debug_assert!(letters.len() == self.rank as usize);
        let carrier = self.carrier(&Limits::default());
        let code = carrier.encode_parikh(parikh, letters);
        assert!(code > 0, "nonempty word required");
        self.labels[code as usize - 1]
    }

    /// Vector of the first carrier element of each class, in label order.
    pub fn class_representatives(&self) -> Vec<Vec<u32>> {
        let carrier = self.carrier(&Limits::default());
        let mut reps: Vec<Option<Vec<u32>>> = alloc::vec![None; self.class_count as usize];
        for idx in 0..self.labels.len() {
            let label = self.labels[idx] as usize;
            if reps[label].is_none() {
                reps[label] = Some(carrier.coords(idx).to_vec());
            }
        }
        reps.into_iter().map(|r| r.unwrap()).collect()
    }

    /// Cayley table of the quotient semigroup (classes under class-wise
    /// product). Well defined because the partition is a congruence.
    pub fn quotient_table(&self) -> Vec<Vec<u32>> {
        let carrier = self.carrier(&Limits::default());
        let reps = self.class_representatives();
        let rep_codes: Vec<u32> = reps
            .iter()
            .map(|v| {
                let mut code = 0;
                for (i, c) in v.iter().enumerate() {
                    code += c * carrier.powers[i];
                }
                code
            })
            .collect();
        let n = self.class_count as usize;
        let mut table = alloc::vec![alloc::vec![0u32; n]; n];
        for (i, &ci) in rep_codes.iter().enumerate() {
            for (j, &cj) in rep_codes.iter().enumerate() {
                let mut sum = ci;
                for coord in 0..self.rank as usize {
                    let add = (cj / carrier.powers[coord]) % self.base.modulus();
                    let own = (sum / carrier.powers[coord]) % self.base.modulus();
                    sum = sum - own * carrier.powers[coord]
                        + self.base.norm(own + add) * carrier.powers[coord];
                }
                table[i][j] = self.labels[sum as usize - 1];
            }
        }
        table
    }

    /// Rebuilds a free object from stored parts, re-deriving the class
    /// count and absorbing class. Label vectors must be consecutive
    /// first-appearance labellings of the right length.
    pub fn from_parts(
        base: PeriodicBase,
        rank: u32,
        labels: Vec<u32>,
        limits: &Limits,
    ) -> Result<FreeObject, RelFreeError> {
        let carrier = Carrier::build(base, rank, limits)?;
        if labels.len() != carrier.size {
            return Err(RelFreeError::LawViolated(String::from(
                "label vector does not match the carrier size",
            )));
        }
        let mut next = 0u32;
        for &l in &labels {
            if l > next {
                return Err(RelFreeError::LawViolated(String::from(
                    "labels are not a first-appearance numbering",
                )));
            }
            if l == next {
                next += 1;
            }
        }
        let class_count = next;
        // recompute the absorbing class from the labels
        let mut zero_class = None;
        let mut seen: BTreeSet<u32> = BTreeSet::new();
        for idx in 0..carrier.size {
            let label = labels[idx];
            if !seen.insert(label) {
                continue;
            }
            let mut absorbing = true;
            for g in 0..rank as usize {
                let next_idx = carrier.add_generator(idx as u32 + 1, g) - 1;
                if labels[next_idx as usize] != label {
                    absorbing = false;
                    break;
                }
            }
            if absorbing {
                zero_class = Some(label);
                break;
            }
        }
        Ok(FreeObject {
            base,
            rank,
            labels,
            class_count,
            zero_class,
        })
    }
}

// ---------------------------------------------------------------------------
// the oracle

/// Deduction oracle for one variety: validates the basis, refines the
/// one-letter law to the exact monogenic structure, and memoizes free
/// objects per rank.
pub struct VarietyOracle {
    basis: Basis,
    base: PeriodicBase,
    limits: Limits,
    cache: BTreeMap<u32, FreeObject>,
    nil: Option<Option<u32>>,
}

impl VarietyOracle {
    pub fn new(basis: &Basis, limits: Limits) -> Result<VarietyOracle, RelFreeError> {
        if !basis.is_commutative() {
            return Err(RelFreeError::NotCommutative);
        }
        let (a, b) = crate::syntax::periodicity_exponents(basis).ok_or(RelFreeError::NotPeriodic)?;
        let mut oracle = VarietyOracle {
            basis: basis.clone(),
            base: PeriodicBase::new(a, b),
            limits,
            cache: BTreeMap::new(),
            nil: None,
        };
        oracle.refine_base()?;
        Ok(oracle)
    }

    /// Tightens (index, period) to the exact values realized by the
    /// one-generator free object, then rebuilds it over the smaller carrier.
    fn refine_base(&mut self) -> Result<(), RelFreeError> {
        let f1 = self.build(1)?;
        let m = self.base.modulus();
        let label = |c: u32| f1.labels[self.base.norm(c) as usize - 1];
        let mut period = self.base.period;
        for d in 1..=self.base.period {
            if self.base.period % d != 0 {
                continue;
            }
            if (self.base.index..m).all(|c| label(c) == label(c + d)) {
                period = d;
                break;
            }
        }
        let mut index = self.base.index;
        for c in 1..=self.base.index {
            if label(c) == label(c + period) {
                index = c;
                break;
            }
        }
        if (index, period) != (self.base.index, self.base.period) {
            self.base = PeriodicBase::new(index, period);
        }
        let refined = self.build(1)?;
        debug_assert_eq!(refined.class_count, self.base.modulus() - 1);
        self.cache.insert(1, refined);
        Ok(())
    }

    fn build(&mut self, rank: u32) -> Result<FreeObject, RelFreeError> {
        let (partition, zero_class) =
            build_partition(self.basis.identities(), self.base, rank, &self.limits)?;
        Ok(FreeObject {
            base: self.base,
            rank,
            labels: partition.labels,
            class_count: partition.class_count,
            zero_class,
        })
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    /// The exact one-letter law of the variety: least index, least period.
    pub fn base(&self) -> PeriodicBase {
        self.base
    }

    pub fn free_object(&mut self, rank: u32) -> Result<&FreeObject, RelFreeError> {
        if !self.cache.contains_key(&rank) {
            let built = self.build(rank)?;
            self.cache.insert(rank, built);
        }
        Ok(&self.cache[&rank])
    }

    /// Installs an externally stored free object (e.g. from a cache file).
    /// Rejected unless base and rank are consistent with this oracle.
    pub fn preload(&mut self, object: FreeObject) -> Result<(), RelFreeError> {
        if object.base != self.base {
            return Err(RelFreeError::LawViolated(String::from(
                "cached object was built over a different one-letter law",
            )));
        }
        self.cache.insert(object.rank, object);
        Ok(())
    }

    /// Exact truth of an identity in the variety: both sides are mapped
    /// canonically into the free object on the identity's letters (plus a
    /// fresh letter for a zero identity, via its defining equation pair).
    pub fn holds(&mut self, id: &Identity) -> Result<bool, RelFreeError> {
        match id {
            Identity::Equation(u, v) => {
                let mut letters: BTreeSet<Letter> = u.content();
                letters.extend(v.content());
                let letters: Vec<Letter> = letters.into_iter().collect();
                let fo = self.free_object(letters.len() as u32)?;
                Ok(fo.class_of(&u.parikh(), &letters) == fo.class_of(&v.parikh(), &letters))
            }
            Identity::ZeroReduced(_) => {
                for eq in id.expanded() {
                    if !self.holds(&eq)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// Least `a` with `x^a = 0` in the variety, when one exists. The only
    /// candidate is the refined index: smaller powers are not even equal to
    /// their own successors, and the index collapses to zero or not at all.
    pub fn nil_exponent(&mut self) -> Result<Option<u32>, RelFreeError> {
        if let Some(cached) = self.nil {
            return Ok(cached);
        }
        let a = self.base.index;
        let nil = if self.base.period == 1 {
            self.holds(&Identity::ZeroReduced(power_word(Letter::X, a)))?
        } else {
            false
        };
        let result = if nil { Some(a) } else { None };
        self.nil = Some(result);
        Ok(result)
    }

    /// Whether every identity of the basis, hence the whole equational
    /// theory, follows from commutativity plus zero identities: an equation
    /// qualifies when it is balanced or both sides are zero words.
    pub fn is_zero_reduced(&mut self) -> Result<bool, RelFreeError> {
        if self.nil_exponent()?.is_none() {
            return Err(RelFreeError::NotNil);
        }
        let identities: Vec<Identity> = self.basis.identities().to_vec();
        for id in identities {
            match id {
                Identity::ZeroReduced(_) => {}
                Identity::Equation(ref u, ref v) => {
                    if id.is_balanced() {
                        continue;
                    }
                    if !self.is_zero_word(&u.com_word())? || !self.is_zero_word(&v.com_word())? {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    pub fn is_zero_word(&mut self, w: &ComWord) -> Result<bool, RelFreeError> {
        self.holds(&Identity::ZeroReduced(w.to_word()))
    }

    /// Minimal generating set for the zero words of the variety of length
    /// at most `length_bound` on at most `letter_bound` letters: candidates
    /// are canonical multiplicity shapes, a candidate already derivable
    /// from a kept generator (as a zero consequence) is dropped, the rest
    /// are tested exactly. Requires a nil variety.
    pub fn zero_word_generators(
        &mut self,
        length_bound: u32,
        letter_bound: u32,
    ) -> Result<Vec<ComWord>, RelFreeError> {
        let a = self.nil_exponent()?.ok_or(RelFreeError::NotNil)?;
        let mut kept: Vec<ComWord> = Vec::new();
        for total in 1..=length_bound {
            // shapes with more parts first: a same-length letter-merging
            // instance always has fewer parts than its source
            let mut shapes = partitions(total, letter_bound, a.min(total));
            shapes.sort_by(|x, y| y.len().cmp(&x.len()).then(x.cmp(y)));
            for shape in shapes {
                let candidate = shape_word(&shape);
                if kept.iter().any(|g| zero_consequence(g, &candidate).is_some()) {
                    continue;
                }
                if self.is_zero_word(&candidate)? {
                    kept.push(candidate);
                }
            }
        }
        Ok(kept)
    }
}

/// All partitions of `total` into at most `max_parts` parts, each at most
/// `max_part`, as descending vectors.
pub fn partitions(total: u32, max_parts: u32, max_part: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(rest: u32, slots: u32, cap: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(current.clone());
            return;
        }
        if slots == 0 {
            return;
        }
        let top = cap.min(rest);
        for part in (1..=top).rev() {
            current.push(part);
            rec(rest - part, slots - 1, part, current, out);
            current.pop();
        }
    }
    rec(total, max_parts, max_part, &mut current, &mut out);
    out
}

/// Canonical word of a multiplicity shape: descending multiplicities on
/// ascending letters.
pub fn shape_word(shape: &[u32]) -> ComWord {
    let map: BTreeMap<Letter, u32> = shape
        .iter()
        .enumerate()
        .map(|(i, m)| (Letter::new(i as u32 + 1).unwrap(), *m))
        .collect();
    ComWord::new(map).expect("nonempty shape")
}

// ---------------------------------------------------------------------------
// congruences over a shared carrier

/// The partition a basis induces on the carrier of a fixed one-letter law,
/// for comparing different varieties over the same ground set. The variety
/// must satisfy the law.
pub fn variety_congruence(
    basis: &Basis,
    base: PeriodicBase,
    rank: u32,
    limits: &Limits,
) -> Result<CarrierPartition, RelFreeError> {
    let mut oracle = VarietyOracle::new(basis, limits.clone())?;
    if !oracle.holds(&base.law())? {
        return Err(RelFreeError::LawViolated(alloc::format!(
            "basis does not satisfy the base law x^{} = x^{}",
            base.index,
            base.index + base.period
        )));
    }
    let (partition, _) = build_partition(basis.identities(), base, rank, limits)?;
    Ok(partition)
}

/// The partition induced by commutativity plus `g = 0` for the given words.
pub fn zero_system_congruence(
    zeros: &[ComWord],
    base: PeriodicBase,
    rank: u32,
    limits: &Limits,
) -> Result<CarrierPartition, RelFreeError> {
    let identities: Vec<Identity> = zeros
        .iter()
        .map(|w| Identity::ZeroReduced(w.to_word()))
        .collect();
    let (partition, _) = build_partition(&identities, base, rank, limits)?;
    Ok(partition)
}

/// Checks, rank by rank up to `k_max`, that joining the variety with the
/// abelian groups of exponent `n` gives the same variety as joining its
/// zero-word reduct with those groups: the join of two varieties has the
/// intersection of their congruences, so the two meets must coincide on the
/// shared carrier of the law x^n = x^2n (which all three varieties satisfy).
/// Requires x^n = 0 to hold in the variety.
pub fn verify_join_with_groups(
    basis: &Basis,
    n: u32,
    k_max: u32,
    limits: &Limits,
) -> Result<bool, RelFreeError> {
    let mut oracle = VarietyOracle::new(basis, limits.clone())?;
    let a = oracle.nil_exponent()?.ok_or(RelFreeError::NotNil)?;
    if a > n {
        return Err(RelFreeError::LawViolated(alloc::format!(
            "variety does not satisfy x^{} = 0",
            n
        )));
    }
    let base = PeriodicBase::new(n, n);
    let group_basis = {
        let x_pow = power_word(Letter::X, n + 1);
        let x = power_word(Letter::X, 1);
        Basis::new(alloc::vec![Identity::Equation(x_pow, x)]).ensure_commutative()
    };
    for k in 1..=k_max {
        let theta_v = variety_congruence(basis, base, k, limits)?;
        let theta_g = variety_congruence(&group_basis, base, k, limits)?;
        let zeros = oracle.zero_word_generators(n * k, k)?;
        let theta_z = zero_system_congruence(&zeros, base, k, limits)?;
        let left = partition_meet(&theta_v, &theta_g);
        let right = partition_meet(&theta_z, &theta_g);
        if left != right {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One-shot construction of the free object of a basis on `k` generators.
pub fn build_relfree(basis: &Basis, k: u32, limits: &Limits) -> Result<FreeObject, RelFreeError> {
    let mut oracle = VarietyOracle::new(basis, limits.clone())?;
    oracle.free_object(k)?;
    Ok(oracle.cache.remove(&k).unwrap())
}

/// One-shot identity check against a basis.
pub fn holds(basis: &Basis, id: &Identity, limits: &Limits) -> Result<bool, RelFreeError> {
    VarietyOracle::new(basis, limits.clone())?.holds(id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_basis, parse_identity, parse_word};

    fn basis(s: &str) -> Basis {
        parse_basis(s).unwrap()
    }

    fn oracle(s: &str) -> VarietyOracle {
        VarietyOracle::new(&basis(s), Limits::default()).unwrap()
    }

    fn check(o: &mut VarietyOracle, id: &str) -> bool {
        o.holds(&parse_identity(id).unwrap()).unwrap()
    }

    #[test]
    fn monogenic_nil_chain() {
        let fo = build_relfree(&basis("commutative\nx^3 = 0"), 1, &Limits::default()).unwrap();
        assert_eq!(fo.class_count(), 3);
        assert_eq!(fo.zero_class(), Some(2));
    }

    #[test]
    fn two_generator_nil_object() {
        let fo = build_relfree(&basis("commutative\nx^3 = 0"), 2, &Limits::default()).unwrap();
        assert_eq!(fo.class_count(), 9);
        assert!(fo.zero_class().is_some());
    }

    #[test]
    fn congruence_closure_reaches_translated_instances() {
        let mut o = oracle("commutative\nx^3 = 0\nx^2y = y^2x");
        assert!(check(&mut o, "x^2y^2 = 0"));
        assert!(!check(&mut o, "x^2y = 0"));
        assert!(check(&mut o, "x^2y = y^2x"));
        assert!(!check(&mut o, "x^2 = x^2y"));
    }

    #[test]
    fn four_letter_zero_word_stays_off_smaller_words() {
        let mut o = oracle("commutative\nxyzq = 0\nx^3 = 0\nx^2y = y^2x");
        assert!(check(&mut o, "x^2y^2 = 0"));
        assert!(!check(&mut o, "x^2y = 0"));
        assert!(check(&mut o, "xyzq = 0"));
        assert!(!check(&mut o, "xyz = 0"));
    }

    #[test]
    fn zero_generator_multiples() {
        let mut o = oracle("commutative\nx^2y = 0");
        assert!(check(&mut o, "x^2y^2 = 0"));
        assert!(check(&mut o, "x^3 = 0"));
        assert!(!check(&mut o, "x^2 = 0"));
        assert!(!check(&mut o, "xyz = 0"));
    }

    #[test]
    fn refined_base_from_collapse() {
        let o = oracle("commutative\nx^2y = y");
        assert_eq!(o.base(), PeriodicBase::new(1, 2));
        let o = oracle("commutative\nx^3 = 0");
        assert_eq!(o.base(), PeriodicBase::new(3, 1));
    }

    #[test]
    fn monogenic_structure_is_exact() {
        for a in 1..=4u32 {
            for b in 1..=4u32 {
                let law = Identity::Equation(
                    power_word(Letter::X, a),
                    power_word(Letter::X, a + b),
                );
                let base = Basis::new(alloc::vec![law]).ensure_commutative();
                let mut o = VarietyOracle::new(&base, Limits::default()).unwrap();
                assert_eq!(o.base(), PeriodicBase::new(a, b));
                for c in 1..=(a + 2 * b) {
                    for d in 1..=(a + 2 * b) {
                        let id = Identity::Equation(
                            power_word(Letter::X, c),
                            power_word(Letter::X, d),
                        );
                        let expected = c == d || (c >= a && d >= a && (c % b) == (d % b));
                        assert_eq!(o.holds(&id).unwrap(), expected, "a={} b={} c={} d={}", a, b, c, d);
                    }
                }
            }
        }
    }

    #[test]
    fn nil_detection() {
        let mut o = oracle("commutative\nx^3 = 0");
        assert_eq!(o.nil_exponent().unwrap(), Some(3));
        let mut o = oracle("commutative\nx^3y = y");
        assert_eq!(o.nil_exponent().unwrap(), None);
        // contains the two-element semilattice, so x^2 = 0 must fail
        let mut o = oracle("commutative\nx^2 = x^3");
        assert_eq!(o.nil_exponent().unwrap(), None);
    }

    #[test]
    fn zero_reduced_recognition() {
        let mut o = oracle("commutative\nx^3 = 0");
        assert!(o.is_zero_reduced().unwrap());
        let mut o = oracle("commutative\nxyzq = 0\nx^3 = 0\nx^2y = y^2x");
        assert!(!o.is_zero_reduced().unwrap());
        let mut o = oracle("commutative\nx^5 = 0\nx^3y^2 = y^3x^2");
        assert!(!o.is_zero_reduced().unwrap());
        let mut o = oracle("commutative\nx^3y = y");
        assert_eq!(o.is_zero_reduced(), Err(RelFreeError::NotNil));
    }

    #[test]
    fn zero_word_generator_sets() {
        let mut o = oracle("commutative\nx^3 = 0");
        let gens = o.zero_word_generators(4, 2).unwrap();
        assert_eq!(gens, alloc::vec![parse_word("x^3").unwrap().com_word()]);

        // x^3 is an instance of x^2y (merge y into x), so it is not kept
        let mut o = oracle("commutative\nx^2y = 0");
        let gens = o.zero_word_generators(4, 3).unwrap();
        assert_eq!(gens, alloc::vec![parse_word("x^2y").unwrap().com_word()]);
    }

    #[test]
    fn zero_word_generators_of_the_four_letter_example() {
        let mut o = oracle("commutative\nxyzq = 0\nx^3 = 0\nx^2y = y^2x");
        let gens = o.zero_word_generators(12, 4).unwrap();
        assert_eq!(
            gens,
            alloc::vec![
                parse_word("x^3").unwrap().com_word(),
                parse_word("xyzq").unwrap().com_word(),
            ]
        );
        // x^2y^2 is zero but already an instance of xyzq, hence not kept
        assert!(o.is_zero_word(&parse_word("x^2y^2").unwrap().com_word()).unwrap());
        assert!(zero_consequence(
            &parse_word("xyzq").unwrap().com_word(),
            &parse_word("x^2y^2").unwrap().com_word()
        )
        .is_some());
    }

    #[test]
    fn deep_truncation_finds_non_instance_zero_words() {
        // x^4y^3 rewrites into x^5y^2 (zero) yet is no instance of x^5
        let mut o = oracle("commutative\nx^5 = 0\nx^3y^2 = y^3x^2");
        let gens = o.zero_word_generators(10, 2).unwrap();
        assert_eq!(
            gens,
            alloc::vec![
                parse_word("x^5").unwrap().com_word(),
                parse_word("x^4y^3").unwrap().com_word(),
            ]
        );
        assert!(zero_consequence(
            &parse_word("x^5").unwrap().com_word(),
            &parse_word("x^4y^3").unwrap().com_word()
        )
        .is_none());
        // x^4y^4 = x^4y^3 * y needs no generator of its own
        assert!(o.is_zero_word(&parse_word("x^4y^4").unwrap().com_word()).unwrap());
        // one swap short of the zero region
        assert!(!o.is_zero_word(&parse_word("x^3y^3").unwrap().com_word()).unwrap());
        assert!(!o.is_zero_word(&parse_word("x^4y^2").unwrap().com_word()).unwrap());
    }

    #[test]
    fn shared_carrier_congruences() {
        let base = PeriodicBase::new(3, 3);
        let limits = Limits::default();
        // groups of exponent three on the carrier 1..=5: x ~ x^4, x^2 ~ x^5
        let groups = basis("commutative\nx^4 = x");
        let theta = variety_congruence(&groups, base, 1, &limits).unwrap();
        assert_eq!(theta.class_count, 3);
        assert_eq!(theta.labels[0], theta.labels[3]);
        assert_eq!(theta.labels[1], theta.labels[4]);
        assert_ne!(theta.labels[2], theta.labels[0]);
        // nil of exponent three: everything saturated is zero
        let nil = basis("commutative\nx^3 = 0");
        let theta = variety_congruence(&nil, base, 1, &limits).unwrap();
        assert_eq!(theta.class_count, 3);
        assert_eq!(theta.labels[2], theta.labels[3]);
        assert_eq!(theta.labels[2], theta.labels[4]);
        // the law alone: identity partition
        let law_only = basis("commutative\nx^3 = x^6");
        let theta = variety_congruence(&law_only, base, 1, &limits).unwrap();
        assert_eq!(theta.class_count, 5);
        // a basis that violates the law is rejected
        let err = variety_congruence(&basis("commutative\nx^2 = x"), PeriodicBase::new(2, 2), 1, &limits);
        assert!(matches!(err, Ok(_)));
        let err = variety_congruence(&basis("commutative\nx^4 = x"), PeriodicBase::new(2, 2), 1, &limits);
        assert!(matches!(err, Err(RelFreeError::LawViolated(_))));
    }

    #[test]
    fn group_join_invariance_small_cases() {
        let limits = Limits::default();
        assert!(verify_join_with_groups(&basis("commutative\nx^2 = 0"), 2, 2, &limits).unwrap());
        assert!(verify_join_with_groups(
            &basis("commutative\nxyzq = 0\nx^3 = 0\nx^2y = y^2x"),
            3,
            2,
            &limits
        )
        .unwrap());
        let err = verify_join_with_groups(&basis("commutative\nx^3 = 0"), 2, 2, &limits);
        assert!(matches!(err, Err(RelFreeError::LawViolated(_))));
    }

    #[test]
    fn error_conditions() {
        let err = VarietyOracle::new(&basis("x^2 = x"), Limits::default());
        assert_eq!(err.err(), Some(RelFreeError::NotCommutative));
        let err = VarietyOracle::new(&basis("commutative\nxy = yx"), Limits::default());
        assert_eq!(err.err(), Some(RelFreeError::NotPeriodic));
        let tiny = Limits {
            carrier_cap: 10,
            work_cap: 1000,
        };
        let err = build_relfree(&basis("commutative\nx^3 = 0"), 3, &tiny);
        assert!(matches!(err, Err(RelFreeError::ResourceLimit(_))));
    }

    #[test]
    fn quotient_table_is_associative() {
        let fo = build_relfree(&basis("commutative\nx^3 = 0\nx^2y = y^2x"), 2, &Limits::default())
            .unwrap();
        let table = fo.quotient_table();
        let n = table.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let left = table[table[a][b] as usize][c];
                    let right = table[a][table[b][c] as usize];
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn from_parts_round_trip() {
        let fo = build_relfree(&basis("commutative\nx^3 = 0"), 2, &Limits::default()).unwrap();
        let rebuilt = FreeObject::from_parts(
            fo.base(),
            fo.rank(),
            fo.labels().to_vec(),
            &Limits::default(),
        )
        .unwrap();
        assert_eq!(rebuilt, fo);
        let bad = FreeObject::from_parts(
            fo.base(),
            fo.rank(),
            alloc::vec![0; 3],
            &Limits::default(),
        );
        assert!(bad.is_err());
    }
}
