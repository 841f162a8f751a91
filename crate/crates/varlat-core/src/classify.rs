//! Classification of commutative varieties as special elements of the
//! lattice of all commutative semigroup varieties.
//!
//! The route is always the same: split the variety as (monoid part) v (nil
//! part) where the monoid part is trivial or the semilattices and the nil
//! part is the meet with the nil varieties of the right exponent, then test
//! the nil part. The split itself is exact in all refusal cases and in the
//! trivial-monoid case; when the semilattice join is involved its equality
//! with the variety is verified rank by rank up to a caller-chosen bound,
//! and verdicts that rest on it carry that bound in their confidence.

use core::fmt;

use alloc::string::String;
use alloc::vec::Vec;

use crate::known::{contained_in, KnownVariety};
use crate::relfree::{
    partition_meet, power_word, variety_congruence, Limits, PeriodicBase, RelFreeError,
    VarietyOracle,
};
use crate::syntax::{Basis, ComWord, Identity, Letter, Word};
use crate::zerored::ZeroSystem;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Yes => write!(f, "yes"),
            Verdict::No => write!(f, "no"),
            Verdict::Unknown => write!(f, "unknown"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Confidence {
    Exact,
    /// Every step is exact except the join comparison, which was verified
    /// on all free objects up to this rank.
    BoundedJoinCheck(u32),
}

impl fmt::Display for Confidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Confidence::Exact => write!(f, "exact"),
            Confidence::BoundedJoinCheck(k) => {
                write!(f, "join equality verified up to rank {}", k)
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Property {
    Modular,
    LowerModular,
    UpperModular,
    Neutral,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::Modular => write!(f, "modular"),
            Property::LowerModular => write!(f, "lower-modular"),
            Property::UpperModular => write!(f, "upper-modular"),
            Property::Neutral => write!(f, "neutral"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MonoidPart {
    Trivial,
    Semilattice,
}

impl fmt::Display for MonoidPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonoidPart::Trivial => write!(f, "T"),
            MonoidPart::Semilattice => write!(f, "SL"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct JoinDecomposition {
    pub monoid_part: MonoidPart,
    pub nil_basis: Basis,
    pub nil_exponent: u32,
    pub confidence: Confidence,
}

#[derive(Clone, Debug)]
pub enum DecompositionOutcome {
    /// The basis presents the variety of all commutative semigroups.
    IsCom,
    Decomposed(JoinDecomposition),
    /// Provably not of the form (T or SL) v (nil variety); the reason names
    /// the obstruction.
    NoSplit { reason: String },
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub property: Property,
    pub verdict: Verdict,
    pub confidence: Confidence,
    pub justification: Vec<String>,
    pub witnesses: Vec<String>,
}

/// Default rank bound for join comparisons: enough to cover every basis
/// identity and never fewer than three generators.
pub fn default_rank_bound(basis: &Basis) -> u32 {
    3usize.max(basis.max_letters()) as u32
}

fn semilattice_basis() -> Basis {
    let xx = power_word(Letter::X, 2);
    let x = power_word(Letter::X, 1);
    Basis::new(alloc::vec![Identity::Equation(xx, x)]).ensure_commutative()
}

/// Splits the variety of the basis as (monoid part) v (nil part) when such
/// a form exists, reporting an exact obstruction otherwise.
pub fn decompose(
    basis: &Basis,
    rank_bound: u32,
    limits: &Limits,
) -> Result<DecompositionOutcome, RelFreeError> {
    let mut oracle = match VarietyOracle::new(basis, *limits) {
        Ok(o) => o,
        // every identity balanced: the basis presents the whole lattice top
        Err(RelFreeError::NotPeriodic) => return Ok(DecompositionOutcome::IsCom),
        Err(e) => return Err(e),
    };
    let base = oracle.base();
    if base.period > 1 {
        return Ok(DecompositionOutcome::NoSplit {
            reason: alloc::format!(
                "the collapse law x^{} = x^{} fails, so the variety contains a nontrivial abelian group atom, which no monoid-nil join contains",
                base.index,
                base.index + 1
            ),
        });
    }
    let has_semilattice = contained_in(KnownVariety::Semilattices, basis);
    let nil_basis = {
        let mut ids = basis.identities().to_vec();
        ids.push(Identity::ZeroReduced(power_word(Letter::X, base.index)));
        Basis::new(ids)
    };
    let mut nil_oracle = VarietyOracle::new(&nil_basis, *limits)?;
    let nil_exponent = nil_oracle
        .nil_exponent()?
        .expect("basis plus x^a = 0 is nil by construction");

    if !has_semilattice {
        return if oracle.nil_exponent()?.is_some() {
            Ok(DecompositionOutcome::Decomposed(JoinDecomposition {
                monoid_part: MonoidPart::Trivial,
                nil_basis,
                nil_exponent,
                confidence: Confidence::Exact,
            }))
        } else {
            Ok(DecompositionOutcome::NoSplit {
                reason: String::from(
                    "the variety contains no semilattice and is not nil, so it is no monoid-nil join",
                ),
            })
        };
    }

    // monoid part SL: check variety = SL v nil part on every rank up to the
    // bound. The variety's congruence always refines the intersection, so
    // any mismatch is an exact witness against this join (and by canonicity
    // of the nil part, against every monoid-nil join).
    let sl = semilattice_basis();
    for k in 1..=rank_bound {
        let theta_v = variety_congruence(basis, base, k, limits)?;
        let theta_sl = variety_congruence(&sl, base, k, limits)?;
        let theta_n = variety_congruence(&nil_basis, base, k, limits)?;
        if partition_meet(&theta_sl, &theta_n) != theta_v {
            return Ok(DecompositionOutcome::NoSplit {
                reason: alloc::format!(
                    "the join of SL with the nil part differs from the variety on {} generators",
                    k
                ),
            });
        }
    }
    Ok(DecompositionOutcome::Decomposed(JoinDecomposition {
        monoid_part: MonoidPart::Semilattice,
        nil_basis,
        nil_exponent,
        confidence: Confidence::BoundedJoinCheck(rank_bound),
    }))
}

/// Result of testing whether a nil variety is presented by commutativity,
/// zero identities and substitutive identities alone.
#[derive(Clone, Debug)]
pub struct PresentationCheck {
    pub passed: bool,
    pub failing_identity: Option<Identity>,
    pub zero_generators: Vec<ComWord>,
    pub substitutive_generators: Vec<(ComWord, ComWord)>,
}

fn injections(from: usize, into: usize, acc: &mut Vec<Vec<usize>>) {
    fn rec(slots: usize, into: usize, current: &mut Vec<usize>, acc: &mut Vec<Vec<usize>>) {
        if current.len() == slots {
            acc.push(current.clone());
            return;
        }
        for target in 0..into {
            if !current.contains(&target) {
                current.push(target);
                rec(slots, into, current, acc);
                current.pop();
            }
        }
    }
    rec(from, into, &mut Vec::new(), acc);
}

fn translation_redundant(
    pair: (&Vec<u32>, &Vec<u32>),
    kept: &[(Vec<u32>, Vec<u32>)],
) -> bool {
    let width = pair.0.len();
    for (ka, kb) in kept {
        let small = ka.len();
        if small > width {
            continue;
        }
        let mut maps = Vec::new();
        injections(small, width, &mut maps);
        for map in &maps {
            for (first, second) in [(ka, kb), (kb, ka)] {
                let mut embedded_a = alloc::vec![0u32; width];
                let mut embedded_b = alloc::vec![0u32; width];
                for (i, &target) in map.iter().enumerate() {
                    embedded_a[target] = first[i];
                    embedded_b[target] = second[i];
                }
                let fits = |from: &[u32], to: &[u32]| from.iter().zip(to).all(|(f, t)| f <= t);
                if fits(&embedded_a, pair.0) && fits(&embedded_b, pair.1) {
                    let same_rest = pair
                        .0
                        .iter()
                        .zip(pair.1)
                        .zip(embedded_a.iter().zip(&embedded_b))
                        .all(|((pa, pb), (ea, eb))| pa - ea == pb - eb);
                    if same_rest {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn vector_word(coords: &[u32]) -> ComWord {
    let map: alloc::collections::BTreeMap<Letter, u32> = coords
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > 0)
        .map(|(i, &m)| (Letter::new(i as u32 + 1).unwrap(), m))
        .collect();
    ComWord::new(map).expect("nonzero vector")
}

/// Distinct arrangements of a descending shape over its positions.
fn arrangements(shape: &[u32]) -> Vec<Vec<u32>> {
    let mut sorted = shape.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(pool: &mut Vec<u32>, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pool.is_empty() {
            out.push(current.clone());
            return;
        }
        let mut last = None;
        for i in 0..pool.len() {
            if last == Some(pool[i]) {
                continue;
            }
            last = Some(pool[i]);
            let v = pool.remove(i);
            current.push(v);
            rec(pool, current, out);
            current.pop();
            pool.insert(i, v);
        }
    }
    rec(&mut sorted, &mut current, &mut out);
    out
}

/// Necessary condition for modularity: a modular (or lower-modular) nil
/// variety must be presentable by commutativity plus zero identities plus
/// substitutive identities. The candidate presentation is assembled from
/// the variety's own zero words and substitutive laws (exactly: truncated
/// at the rank bound, which covers every basis identity), and the basis is
/// then re-derived from it. Failure names the underivable identity.
pub fn zero_substitutive_presentation_check(
    nil_basis: &Basis,
    rank_bound: u32,
    limits: &Limits,
) -> Result<PresentationCheck, RelFreeError> {
    let mut oracle = VarietyOracle::new(nil_basis, *limits)?;
    let a = oracle.nil_exponent()?.ok_or(RelFreeError::NotNil)?;
    let rank_bound = rank_bound.max(nil_basis.max_letters() as u32);
    let length_bound = a * rank_bound;
    let zero_generators = oracle.zero_word_generators(length_bound, rank_bound)?;
    let zs = ZeroSystem::new(zero_generators.clone());

    // substitutive laws of the variety with both sides nonzero: all
    // multiplicities below the nil exponent, canonical left-hand side,
    // minus pairs that are translates of an already kept pair
    let mut subst: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
    for total in 2..=(rank_bound * (a.saturating_sub(1))) {
        let mut shapes = crate::relfree::partitions(total, rank_bound, a.saturating_sub(1));
        shapes.sort();
        for shape in shapes {
            if shape.len() < 2 {
                continue;
            }
            let canonical: Vec<u32> = shape.clone();
            if zs.is_zero(&vector_word(&canonical)) {
                continue;
            }
            for arrangement in arrangements(&shape) {
                if arrangement == canonical {
                    continue;
                }
                if translation_redundant((&canonical, &arrangement), &subst) {
                    continue;
                }
                let id = Identity::Equation(
                    vector_word(&canonical).to_word(),
                    vector_word(&arrangement).to_word(),
                );
                if oracle.holds(&id)? {
                    subst.push((canonical.clone(), arrangement));
                }
            }
        }
    }
    let substitutive_generators: Vec<(ComWord, ComWord)> = subst
        .iter()
        .map(|(l, r)| (vector_word(l), vector_word(r)))
        .collect();

    // candidate presentation: commutativity + zero identities + the
    // substitutive laws; re-derive every basis identity from it
    let mut ids: Vec<Identity> = zero_generators
        .iter()
        .map(|w| Identity::ZeroReduced(w.to_word()))
        .collect();
    for (l, r) in &substitutive_generators {
        ids.push(Identity::Equation(l.to_word(), r.to_word()));
    }
    let candidate = Basis::new(ids).ensure_commutative();
    let mut candidate_oracle = VarietyOracle::new(&candidate, *limits)?;

    for id in nil_basis.identities() {
        let derivable = match id {
            _ if id.is_balanced() => true,
            Identity::ZeroReduced(w) => zs.is_zero(&w.com_word()),
            Identity::Equation(u, v) => {
                let zu = zs.is_zero(&u.com_word());
                let zv = zs.is_zero(&v.com_word());
                if zu && zv {
                    true
                } else if zu != zv {
                    false
                } else {
                    candidate_oracle.holds(id)?
                }
            }
        };
        if !derivable {
            return Ok(PresentationCheck {
                passed: false,
                failing_identity: Some(id.clone()),
                zero_generators,
                substitutive_generators,
            });
        }
    }
    Ok(PresentationCheck {
        passed: true,
        failing_identity: None,
        zero_generators,
        substitutive_generators,
    })
}

fn report(
    property: Property,
    verdict: Verdict,
    confidence: Confidence,
    justification: Vec<String>,
    witnesses: Vec<String>,
) -> ClassificationReport {
    ClassificationReport {
        property,
        verdict,
        confidence,
        justification,
        witnesses,
    }
}

/// Whether the basis presents a zero-reduced nil variety: nil, and every
/// basis equation is balanced or has both sides zero.
pub fn nil_part_is_zero_reduced(
    nil_basis: &Basis,
    limits: &Limits,
) -> Result<bool, RelFreeError> {
    VarietyOracle::new(nil_basis, *limits)?.is_zero_reduced()
}

pub fn classify_modular(
    basis: &Basis,
    rank_bound: u32,
    limits: &Limits,
) -> Result<ClassificationReport, RelFreeError> {
    let mut justification = Vec::new();
    match decompose(basis, rank_bound, limits)? {
        DecompositionOutcome::IsCom => {
            justification.push(String::from(
                "every identity is balanced: the basis presents the top of the lattice, and the top element is modular",
            ));
            Ok(report(
                Property::Modular,
                Verdict::Yes,
                Confidence::Exact,
                justification,
                Vec::new(),
            ))
        }
        DecompositionOutcome::NoSplit { reason } => {
            justification.push(String::from(
                "a modular element below the top must be a join of T or SL with a nil variety",
            ));
            justification.push(reason);
            Ok(report(
                Property::Modular,
                Verdict::No,
                Confidence::Exact,
                justification,
                Vec::new(),
            ))
        }
        DecompositionOutcome::Decomposed(d) => {
            justification.push(alloc::format!(
                "decomposed as {} v N with N nil of exponent {}",
                d.monoid_part,
                d.nil_exponent
            ));
            let check = zero_substitutive_presentation_check(&d.nil_basis, rank_bound, limits)?;
            if !check.passed {
                let failing = check
                    .failing_identity
                    .as_ref()
                    .map(|id| alloc::format!("{}", id))
                    .unwrap_or_default();
                justification.push(String::from(
                    "modularity forces the nil part to be presentable by zero identities and substitutive identities, and this one is not",
                ));
                return Ok(report(
                    Property::Modular,
                    Verdict::No,
                    Confidence::Exact,
                    justification,
                    alloc::vec![alloc::format!("underivable identity: {}", failing)],
                ));
            }
            justification.push(String::from(
                "the nil part is presentable by zero identities and substitutive identities",
            ));
            if nil_part_is_zero_reduced(&d.nil_basis, limits)? {
                justification.push(String::from(
                    "the nil part is zero-reduced, which suffices for modularity",
                ));
                Ok(report(
                    Property::Modular,
                    Verdict::Yes,
                    d.confidence,
                    justification,
                    Vec::new(),
                ))
            } else {
                justification.push(String::from(
                    "the nil part is not zero-reduced: the necessary presentation condition holds but the zero-reduced sufficient condition does not, and the region between them is undecided",
                ));
                Ok(report(
                    Property::Modular,
                    Verdict::Unknown,
                    d.confidence,
                    justification,
                    Vec::new(),
                ))
            }
        }
    }
}

pub fn classify_lower_modular(
    basis: &Basis,
    rank_bound: u32,
    limits: &Limits,
) -> Result<ClassificationReport, RelFreeError> {
    let mut justification = Vec::new();
    match decompose(basis, rank_bound, limits)? {
        DecompositionOutcome::IsCom => {
            justification.push(String::from(
                "the top of the lattice is lower-modular",
            ));
            Ok(report(
                Property::LowerModular,
                Verdict::Yes,
                Confidence::Exact,
                justification,
                Vec::new(),
            ))
        }
        DecompositionOutcome::NoSplit { reason } => {
            justification.push(String::from(
                "a lower-modular element below the top must be a join of T or SL with a zero-reduced nil variety",
            ));
            justification.push(reason);
            Ok(report(
                Property::LowerModular,
                Verdict::No,
                Confidence::Exact,
                justification,
                Vec::new(),
            ))
        }
        DecompositionOutcome::Decomposed(d) => {
            justification.push(alloc::format!(
                "decomposed as {} v N with N nil of exponent {}",
                d.monoid_part,
                d.nil_exponent
            ));
            if nil_part_is_zero_reduced(&d.nil_basis, limits)? {
                justification.push(String::from(
                    "the nil part is zero-reduced: exactly the lower-modular elements below the top have this form",
                ));
                Ok(report(
                    Property::LowerModular,
                    Verdict::Yes,
                    d.confidence,
                    justification,
                    Vec::new(),
                ))
            } else {
                justification.push(String::from(
                    "the nil part is not zero-reduced, and lower-modularity requires a zero-reduced nil part",
                ));
                Ok(report(
                    Property::LowerModular,
                    Verdict::No,
                    Confidence::Exact,
                    justification,
                    Vec::new(),
                ))
            }
        }
    }
}

fn prime_atoms() -> &'static [u32] {
    &[
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
        89, 97,
    ]
}

fn zero_multiplication_satisfies(id: &Identity) -> bool {
    match id {
        Identity::Equation(u, v) => (u.len() >= 2 && v.len() >= 2) || u.com_word() == v.com_word(),
        Identity::ZeroReduced(w) => w.len() >= 2,
    }
}

pub fn classify_upper_modular(
    basis: &Basis,
    _rank_bound: u32,
    limits: &Limits,
) -> Result<ClassificationReport, RelFreeError> {
    let mut oracle = match VarietyOracle::new(basis, *limits) {
        Ok(o) => o,
        Err(RelFreeError::NotPeriodic) => {
            return Ok(report(
                Property::UpperModular,
                Verdict::Yes,
                Confidence::Exact,
                alloc::vec![String::from("the top of the lattice is upper-modular")],
                Vec::new(),
            ))
        }
        Err(e) => return Err(e),
    };

    let x = power_word(Letter::X, 1);
    let y = Word::new(alloc::vec![Letter::Y]).unwrap();
    if oracle.holds(&Identity::Equation(x.clone(), y.clone()))? {
        return Ok(report(
            Property::UpperModular,
            Verdict::Yes,
            Confidence::Exact,
            alloc::vec![String::from(
                "the basis presents the trivial variety, the bottom of the lattice, which is upper-modular",
            )],
            Vec::new(),
        ));
    }

    if oracle.nil_exponent()?.is_some() && oracle.is_zero_reduced()? {
        let criterion = Identity::ZeroReduced(Word::new(alloc::vec![
            Letter::X,
            Letter::X,
            Letter::Y
        ])
        .unwrap());
        let holds = oracle.holds(&criterion)?;
        let verdict = if holds { Verdict::Yes } else { Verdict::No };
        let line = if holds {
            "zero-reduced nil variety satisfying x^2 y = 0: exactly these zero-reduced nil varieties are upper-modular"
        } else {
            "zero-reduced nil variety with x^2 y = 0 failing: exactly these zero-reduced nil varieties are not upper-modular"
        };
        return Ok(report(
            Property::UpperModular,
            verdict,
            Confidence::Exact,
            alloc::vec![String::from(line)],
            Vec::new(),
        ));
    }

    // atoms of the lattice are upper-modular: the semilattices, the abelian
    // groups of prime exponent, the variety of zero multiplication
    let atom: Option<(String, Identity)> = if contained_in(KnownVariety::Semilattices, basis) {
        Some((
            String::from("SL"),
            Identity::Equation(power_word(Letter::X, 2), x.clone()),
        ))
    } else {
        prime_atoms()
            .iter()
            .find(|&&p| oracle.base() == PeriodicBase::new(1, p))
            .and_then(|&p| {
                if contained_in(KnownVariety::Abelian(p), basis) {
                    Some((
                        alloc::format!("abelian groups of exponent {}", p),
                        Identity::Equation(power_word(Letter::X, p + 1), x.clone()),
                    ))
                } else {
                    None
                }
            })
    };
    let atom = match atom {
        Some(found) => Some(found),
        None => {
            if basis.identities().iter().all(zero_multiplication_satisfies) {
                Some((
                    String::from("zero multiplication"),
                    Identity::ZeroReduced(Word::new(alloc::vec![Letter::X, Letter::Y]).unwrap()),
                ))
            } else {
                None
            }
        }
    };
    if let Some((name, law)) = atom {
        if oracle.holds(&law)? {
            return Ok(report(
                Property::UpperModular,
                Verdict::Yes,
                Confidence::Exact,
                alloc::vec![alloc::format!(
                    "the basis presents the variety of {}, an atom of the lattice, and atoms are upper-modular",
                    name
                )],
                Vec::new(),
            ));
        }
    }

    Ok(report(
        Property::UpperModular,
        Verdict::Unknown,
        Confidence::Exact,
        alloc::vec![String::from(
            "outside the decided regions for upper modularity (top, bottom, atoms, zero-reduced nil varieties)",
        )],
        Vec::new(),
    ))
}

pub fn classify_neutral(
    basis: &Basis,
    rank_bound: u32,
    limits: &Limits,
) -> Result<ClassificationReport, RelFreeError> {
    let mut justification = Vec::new();
    match decompose(basis, rank_bound, limits)? {
        DecompositionOutcome::IsCom => {
            justification.push(String::from("the top of the lattice is neutral"));
            Ok(report(
                Property::Neutral,
                Verdict::Yes,
                Confidence::Exact,
                justification,
                Vec::new(),
            ))
        }
        DecompositionOutcome::NoSplit { reason } => {
            justification.push(String::from(
                "a neutral element is in particular modular, hence a monoid-nil join below the top",
            ));
            justification.push(reason);
            Ok(report(
                Property::Neutral,
                Verdict::No,
                Confidence::Exact,
                justification,
                Vec::new(),
            ))
        }
        DecompositionOutcome::Decomposed(d) => {
            justification.push(alloc::format!(
                "decomposed as {} v N with N nil of exponent {}",
                d.monoid_part,
                d.nil_exponent
            ));
            let criterion = Identity::ZeroReduced(
                Word::new(alloc::vec![Letter::X, Letter::X, Letter::Y]).unwrap(),
            );
            let mut nil_oracle = VarietyOracle::new(&d.nil_basis, *limits)?;
            if nil_oracle.holds(&criterion)? {
                justification.push(String::from(
                    "the nil part satisfies x^2 y = 0: exactly these joins are neutral",
                ));
                Ok(report(
                    Property::Neutral,
                    Verdict::Yes,
                    d.confidence,
                    justification,
                    Vec::new(),
                ))
            } else {
                justification.push(String::from(
                    "the nil part does not satisfy x^2 y = 0, and neutrality requires it",
                ));
                Ok(report(
                    Property::Neutral,
                    Verdict::No,
                    Confidence::Exact,
                    justification,
                    Vec::new(),
                ))
            }
        }
    }
}

pub fn classify(
    basis: &Basis,
    property: Property,
    rank_bound: u32,
    limits: &Limits,
) -> Result<ClassificationReport, RelFreeError> {
    match property {
        Property::Modular => classify_modular(basis, rank_bound, limits),
        Property::LowerModular => classify_lower_modular(basis, rank_bound, limits),
        Property::UpperModular => classify_upper_modular(basis, rank_bound, limits),
        Property::Neutral => classify_neutral(basis, rank_bound, limits),
    }
}

#[derive(Clone, Debug)]
pub struct AuditReport {
    pub reports: Vec<ClassificationReport>,
    pub violations: Vec<String>,
}

/// Runs all four classifiers and checks the implications that must hold
/// between them: neutral implies all three modularity properties, and
/// lower-modular implies modular. Only a definite yes contradicted by a
/// definite no counts as a violation.
pub fn consistency_audit(
    basis: &Basis,
    rank_bound: u32,
    limits: &Limits,
) -> Result<AuditReport, RelFreeError> {
    let reports = alloc::vec![
        classify_modular(basis, rank_bound, limits)?,
        classify_lower_modular(basis, rank_bound, limits)?,
        classify_upper_modular(basis, rank_bound, limits)?,
        classify_neutral(basis, rank_bound, limits)?,
    ];
    let verdict = |p: Property| {
        reports
            .iter()
            .find(|r| r.property == p)
            .map(|r| r.verdict)
            .unwrap()
    };
    let mut violations = Vec::new();
    let implications = [
        (Property::Neutral, Property::Modular),
        (Property::Neutral, Property::LowerModular),
        (Property::Neutral, Property::UpperModular),
        (Property::LowerModular, Property::Modular),
    ];
    for (stronger, weaker) in implications {
        if verdict(stronger) == Verdict::Yes && verdict(weaker) == Verdict::No {
            violations.push(alloc::format!(
                "{} was affirmed but {} was denied",
                stronger,
                weaker
            ));
        }
    }
    Ok(AuditReport {
        reports,
        violations,
    })
}

/// Evidence probe: four words that share length and content, are pairwise
/// distinct as commutative words with all multiplicities distinct, and
/// satisfy u = v and s = t in the variety, force u = s in any variety that
/// is a modular or lower-modular element. Returns whether u = s holds.
pub fn key_instance_holds(
    basis: &Basis,
    u: &Word,
    v: &Word,
    s: &Word,
    t: &Word,
    limits: &Limits,
) -> Result<bool, RelFreeError> {
    let mut oracle = VarietyOracle::new(basis, *limits)?;
    let words = [u, v, s, t];
    let names = ["u", "v", "s", "t"];
    for w in &words {
        if crate::syntax::stability_witness(w, crate::syntax::Context::Com).is_some() {
            return Err(RelFreeError::LawViolated(alloc::format!(
                "word {} has a repeated multiplicity, so it is not unstable",
                w
            )));
        }
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if words[i].len() != words[j].len() || words[i].content() != words[j].content() {
                return Err(RelFreeError::LawViolated(alloc::format!(
                    "words {} and {} must share length and content",
                    names[i],
                    names[j]
                )));
            }
            if crate::syntax::com_equivalence(&words[i].com_word(), &words[j].com_word()).is_some()
            {
                return Err(RelFreeError::LawViolated(alloc::format!(
                    "words {} and {} are equivalent as commutative words",
                    names[i],
                    names[j]
                )));
            }
        }
    }
    for (lhs, rhs) in [(u, v), (s, t)] {
        if !oracle.holds(&Identity::Equation((*lhs).clone(), (*rhs).clone()))? {
            return Err(RelFreeError::LawViolated(alloc::format!(
                "the variety does not satisfy {} = {}",
                lhs,
                rhs
            )));
        }
    }
    oracle.holds(&Identity::Equation(u.clone(), s.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_basis, parse_word};

    fn basis(s: &str) -> Basis {
        parse_basis(s).unwrap()
    }

    fn classify_all(s: &str) -> (Verdict, Verdict, Verdict, Verdict) {
        let b = basis(s);
        let k = default_rank_bound(&b);
        let l = Limits::default();
        (
            classify_modular(&b, k, &l).unwrap().verdict,
            classify_lower_modular(&b, k, &l).unwrap().verdict,
            classify_upper_modular(&b, k, &l).unwrap().verdict,
            classify_neutral(&b, k, &l).unwrap().verdict,
        )
    }

    #[test]
    fn the_whole_lattice_is_neutral_at_the_top() {
        let (m, lm, um, n) = classify_all("commutative");
        assert_eq!(
            (m, lm, um, n),
            (Verdict::Yes, Verdict::Yes, Verdict::Yes, Verdict::Yes)
        );
    }

    #[test]
    fn squarefree_zero_nil_variety_is_neutral() {
        let (m, lm, um, n) = classify_all("commutative\nx^2y = 0");
        assert_eq!(
            (m, lm, um, n),
            (Verdict::Yes, Verdict::Yes, Verdict::Yes, Verdict::Yes)
        );
    }

    #[test]
    fn cube_zero_nil_variety_fails_upper_modularity() {
        let (m, lm, um, n) = classify_all("commutative\nx^3 = 0");
        assert_eq!(
            (m, lm, um, n),
            (Verdict::Yes, Verdict::Yes, Verdict::No, Verdict::No)
        );
    }

    #[test]
    fn group_atoms_are_upper_modular_only() {
        for p in [2u32, 3, 5] {
            let text = alloc::format!("commutative\nx^{}y = y", p);
            let (m, lm, um, n) = classify_all(&text);
            assert_eq!(
                (m, lm, um, n),
                (Verdict::No, Verdict::No, Verdict::Yes, Verdict::No),
                "p = {}",
                p
            );
        }
    }

    #[test]
    fn four_letter_example_leaves_modularity_open() {
        let b = basis("commutative\nxyzq = 0\nx^3 = 0\nx^2y = y^2x");
        let k = default_rank_bound(&b);
        let l = Limits::default();
        let m = classify_modular(&b, k, &l).unwrap();
        assert_eq!(m.verdict, Verdict::Unknown);
        let lm = classify_lower_modular(&b, k, &l).unwrap();
        assert_eq!(lm.verdict, Verdict::No);
    }

    #[test]
    fn swap_law_example_fails_lower_modularity_but_passes_presentation() {
        let b = basis("commutative\nx^5 = 0\nx^3y^2 = y^3x^2");
        let k = default_rank_bound(&b);
        let l = Limits::default();
        let check = zero_substitutive_presentation_check(&b, k, &l).unwrap();
        assert!(check.passed);
        let m = classify_modular(&b, k, &l).unwrap();
        assert_eq!(m.verdict, Verdict::Unknown);
        let lm = classify_lower_modular(&b, k, &l).unwrap();
        assert_eq!(lm.verdict, Verdict::No);
    }

    #[test]
    fn presentation_check_accepts_vanishing_sides() {
        // y -> x turns x^3 = x^2y^2 into x^3 = x^4, so both sides are zero
        // words and the equation follows from the zero identities alone
        let b = basis("commutative\nx^4 = 0\nx^3 = x^2y^2");
        let check =
            zero_substitutive_presentation_check(&b, default_rank_bound(&b), &Limits::default())
                .unwrap();
        assert!(check.passed);
    }

    #[test]
    fn decompose_refuses_group_content() {
        let b = basis("commutative\nx^2y = y");
        match decompose(&b, 3, &Limits::default()).unwrap() {
            DecompositionOutcome::NoSplit { reason } => {
                assert!(reason.contains("group atom"));
            }
            other => panic!("expected refusal, got {:?}", other),
        }
    }

    #[test]
    fn decompose_keeps_semilattice_joins() {
        // SL v (nil of exponent 2): x^2 = x^3 with x^2y = x^2 style laws
        let b = basis("commutative\nx^2 = x^3\nx^2y^2 = x^2y");
        match decompose(&b, 3, &Limits::default()).unwrap() {
            DecompositionOutcome::Decomposed(d) => {
                assert_eq!(d.monoid_part, MonoidPart::Semilattice);
            }
            other => panic!("expected decomposition, got {:?}", other),
        }
    }

    #[test]
    fn audit_finds_no_violations_on_the_corpus() {
        for text in [
            "commutative",
            "commutative\nx^2y = 0",
            "commutative\nx^3 = 0",
            "commutative\nx^2y = y",
            "commutative\nxyzq = 0\nx^3 = 0\nx^2y = y^2x",
            "commutative\nx^5 = 0\nx^3y^2 = y^3x^2",
        ] {
            let b = basis(text);
            let audit =
                consistency_audit(&b, default_rank_bound(&b), &Limits::default()).unwrap();
            assert!(audit.violations.is_empty(), "{}: {:?}", text, audit.violations);
        }
    }

    #[test]
    fn key_instance_probe_detects_failure() {
        // u = v is in the basis, s and t are zero words, but u and s fall
        // into different classes: the variety cannot be modular or
        // lower-modular, and indeed its nil part is not zero-reduced
        let b = basis("commutative\nx^6 = 0\nx^5y^4z = x^5y^3z^2");
        let u = parse_word("x^5y^4z").unwrap();
        let v = parse_word("x^5y^3z^2").unwrap();
        let s = parse_word("x^6y^3z").unwrap();
        let t = parse_word("x^7y^2z").unwrap();
        let verdict = key_instance_holds(&b, &u, &v, &s, &t, &Limits::default()).unwrap();
        assert!(!verdict);
        let lm = classify_lower_modular(&b, default_rank_bound(&b), &Limits::default()).unwrap();
        assert_eq!(lm.verdict, Verdict::No);
    }

    #[test]
    fn key_instance_rejects_bad_quadruples() {
        let b = basis("commutative\nx^6 = 0");
        let u = parse_word("x^5y^4z").unwrap();
        let v = parse_word("x^5y^3z^2").unwrap();
        let s = parse_word("x^4y^4z^2").unwrap(); // repeated multiplicity
        let t = parse_word("x^7y^2z").unwrap();
        let err = key_instance_holds(&b, &u, &v, &s, &t, &Limits::default());
        assert!(matches!(err, Err(RelFreeError::LawViolated(_))));
    }
}
