//! Deduction for systems of zero identities over commutative words.
//!
//! A zero identity `w = 0` over a commutative alphabet forces every word
//! divisible by a substitution instance of `w` to equal zero as well. The
//! search below finds such an instance inside a target word, one image per
//! letter, and reports the leftover factor.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::syntax::{ComWord, Identity, Letter};

/// A successful derivation of `v = 0` from `u = 0` under commutativity:
/// substituting `images` into `u` and multiplying by `remainder` yields `v`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConsequenceWitness {
    pub images: BTreeMap<Letter, ComWord>,
    pub remainder: Option<ComWord>,
}

impl ConsequenceWitness {
    /// Re-checks the witness against the pair it claims to connect.
    pub fn verify(&self, u: &ComWord, v: &ComWord) -> bool {
        if self.images.keys().copied().collect::<Vec<_>>()
            != u.support().into_iter().collect::<Vec<_>>()
        {
            return false;
        }
        let mut total: BTreeMap<Letter, u32> = BTreeMap::new();
        for (letter, image) in &self.images {
            let coeff = u.multiplicity(*letter);
            for (l, m) in image.parikh() {
                *total.entry(*l).or_insert(0) += coeff * m;
            }
        }
        if let Some(rem) = &self.remainder {
            for (l, m) in rem.parikh() {
                *total.entry(*l).or_insert(0) += m;
            }
        }
        &total == v.parikh()
    }
}

/// Searches for a witness that `v = 0` follows from `u = 0` under
/// commutativity. The search is deterministic: letters of `u` are
/// processed in ascending order and candidate images are tried in
/// ascending (length, exponent vector) order, backtracking on failure.
pub fn zero_consequence(u: &ComWord, v: &ComWord) -> Option<ConsequenceWitness> {
    let u_letters: Vec<Letter> = u.support().into_iter().collect();
    let coeffs: Vec<u32> = u_letters.iter().map(|l| u.multiplicity(*l)).collect();
    let v_letters: Vec<Letter> = v.support().into_iter().collect();
    let mut caps: Vec<u32> = v_letters.iter().map(|l| v.multiplicity(*l)).collect();

    let mut images: Vec<Vec<u32>> = Vec::with_capacity(u_letters.len());
    if !assign(0, &coeffs, &mut caps, &mut images) {
        return None;
    }

    let image_map = u_letters
        .iter()
        .zip(images.iter())
        .map(|(letter, vector)| (*letter, vector_word(&v_letters, vector)))
        .collect();
    let remainder = if caps.iter().all(|c| *c == 0) {
        None
    } else {
        Some(vector_word(&v_letters, &caps))
    };
    let witness = ConsequenceWitness {
        images: image_map,
        remainder,
    };
    debug_assert!(witness.verify(u, v));
    Some(witness)
}

fn vector_word(letters: &[Letter], vector: &[u32]) -> ComWord {
    let map: BTreeMap<Letter, u32> = letters
        .iter()
        .zip(vector.iter())
        .filter(|(_, m)| **m > 0)
        .map(|(l, m)| (*l, *m))
        .collect();
    ComWord::new(map).expect("nonzero vector")
}

fn assign(i: usize, coeffs: &[u32], caps: &mut Vec<u32>, images: &mut Vec<Vec<u32>>) -> bool {
    if i == coeffs.len() {
        return true;
    }
    // every remaining letter needs an image of length at least one
    let suffix: u64 = coeffs[i..].iter().map(|c| *c as u64).sum();
    if suffix > caps.iter().map(|c| *c as u64).sum::<u64>() {
        return false;
    }
    for candidate in candidates(coeffs[i], caps) {
        for (cap, used) in caps.iter_mut().zip(candidate.iter()) {
            *cap -= coeffs[i] * used;
        }
        images.push(candidate.clone());
        if assign(i + 1, coeffs, caps, images) {
            return true;
        }
        images.pop();
        for (cap, used) in caps.iter_mut().zip(candidate.iter()) {
            *cap += coeffs[i] * used;
        }
    }
    false
}

/// All nonzero vectors `m` with `coeff * m <= caps` componentwise, in
/// ascending (total, lexicographic) order.
fn candidates(coeff: u32, caps: &[u32]) -> Vec<Vec<u32>> {
    let bounds: Vec<u32> = caps.iter().map(|c| c / coeff).collect();
    let mut out = Vec::new();
    let mut current = alloc::vec![0u32; caps.len()];
    gather(0, &bounds, &mut current, &mut out);
    out.sort_by_key(|m| (m.iter().map(|x| *x as u64).sum::<u64>(), m.clone()));
    out
}

fn gather(i: usize, bounds: &[u32], current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if i == bounds.len() {
        if current.iter().any(|x| *x > 0) {
            out.push(current.clone());
        }
        return;
    }
    for value in 0..=bounds[i] {
        current[i] = value;
        gather(i + 1, bounds, current, out);
    }
    current[i] = 0;
}

/// True when the single-generator systems of `u` and `v` prove the same
/// zero identities, i.e. each word is a zero consequence of the other.
pub fn systems_equivalent(u: &ComWord, v: &ComWord) -> bool {
    zero_consequence(u, v).is_some() && zero_consequence(v, u).is_some()
}

/// A commutative semigroup presentation by zero identities: the variety
/// defined by `xy = yx` together with `g = 0` for every generator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ZeroSystem {
    generators: Vec<ComWord>,
}

impl ZeroSystem {
    pub fn new(generators: Vec<ComWord>) -> Self {
        ZeroSystem { generators }
    }

    pub fn generators(&self) -> &[ComWord] {
        &self.generators
    }

    /// True when `w = 0` is derivable from the system.
    pub fn is_zero(&self, w: &ComWord) -> bool {
        self.generators
            .iter()
            .any(|g| zero_consequence(g, w).is_some())
    }

    /// Decides an identity in the variety the system presents: an
    /// equation holds when it is balanced or both sides derive to zero;
    /// a zero identity holds when its word derives to zero.
    pub fn satisfies(&self, id: &Identity) -> bool {
        match id {
            Identity::Equation(a, b) => {
                a.parikh() == b.parikh()
                    || (self.is_zero(&a.com_word()) && self.is_zero(&b.com_word()))
            }
            Identity::ZeroReduced(w) => self.is_zero(&w.com_word()),
        }
    }

    /// True when both systems derive exactly the same zero words.
    pub fn equivalent_to(&self, other: &ZeroSystem) -> bool {
        self.generators.iter().all(|g| other.is_zero(g))
            && other.generators.iter().all(|g| self.is_zero(g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_identity, parse_word};
    use crate::syntax::{Letter, Word};

    fn cw(s: &str) -> ComWord {
        parse_word(s).unwrap().com_word()
    }

    fn system(gens: &[&str]) -> ZeroSystem {
        ZeroSystem::new(gens.iter().map(|g| cw(g)).collect())
    }

    #[test]
    fn square_forces_multiples() {
        let w = zero_consequence(&cw("x^2"), &cw("x^2y")).unwrap();
        assert_eq!(w.images[&Letter::X], cw("x"));
        assert_eq!(w.remainder, Some(cw("y")));
        assert!(w.verify(&cw("x^2"), &cw("x^2y")));
    }

    #[test]
    fn images_may_rename() {
        // the first admissible image for x is y, leaving x^3 as remainder
        let w = zero_consequence(&cw("x^2y"), &cw("x^3y^3")).unwrap();
        assert_eq!(w.images[&Letter::X], cw("y"));
        assert_eq!(w.images[&Letter::Y], cw("y"));
        assert_eq!(w.remainder, Some(cw("x^3")));
    }

    #[test]
    fn no_consequence_when_too_short() {
        assert!(zero_consequence(&cw("x^3"), &cw("x^2")).is_none());
        assert!(zero_consequence(&cw("x^3"), &cw("x^2y")).is_none());
        assert!(zero_consequence(&cw("x^2y"), &cw("x^2")).is_none());
    }

    #[test]
    fn plain_divisibility() {
        let w = zero_consequence(&cw("x^3"), &cw("x^3y")).unwrap();
        assert_eq!(w.images[&Letter::X], cw("x"));
        assert_eq!(w.remainder, Some(cw("y")));
    }

    #[test]
    fn backtracks_out_of_a_greedy_dead_end() {
        // y as the image of x starves the image of y^3; the search must
        // fall back to the identity assignment
        let w = zero_consequence(&cw("xy^3"), &cw("xy^3")).unwrap();
        assert_eq!(w.images[&Letter::X], cw("x"));
        assert_eq!(w.images[&Letter::Y], cw("y"));
        assert_eq!(w.remainder, None);
    }

    #[test]
    fn witness_verification_rejects_mismatches() {
        let w = zero_consequence(&cw("x^2"), &cw("x^2y")).unwrap();
        assert!(!w.verify(&cw("x^2"), &cw("x^2y^2")));
        assert!(!w.verify(&cw("x^3"), &cw("x^2y")));
    }

    #[test]
    fn single_word_systems() {
        assert!(systems_equivalent(&cw("x^2y"), &cw("y^2x")));
        assert!(systems_equivalent(&cw("xy"), &cw("xz")));
        assert!(!systems_equivalent(&cw("x^2y"), &cw("x^2y^2")));
        assert!(!systems_equivalent(&cw("x^2"), &cw("xy")));
    }

    #[test]
    fn system_decides_identities() {
        let s = system(&["x^3"]);
        assert!(s.satisfies(&parse_identity("x^3y = x^3").unwrap()));
        assert!(!s.satisfies(&parse_identity("x^3y = x^2y").unwrap()));
        assert!(s.satisfies(&parse_identity("x^2y = yx^2").unwrap()));
        assert!(s.satisfies(&parse_identity("x^4 = 0").unwrap()));
        assert!(!s.satisfies(&parse_identity("x^2 = 0").unwrap()));
    }

    #[test]
    fn multi_generator_systems() {
        // x^4 is independent of x^2y^3: every substitution instance of
        // x^2y^3 has length at least five.
        let s = system(&["x^2y^3", "x^4"]);
        assert!(s.is_zero(&cw("x^4")));
        assert!(s.is_zero(&cw("x^5")));
        assert!(s.is_zero(&cw("x^2y^3z")));
        assert!(!s.is_zero(&cw("x^3")));
        assert!(!s.is_zero(&cw("x^2y^2")));
        assert!(!s.is_zero(&cw("xyz")));

        let t = system(&["y^2x^3", "y^4"]);
        assert!(s.equivalent_to(&t));
        let u = system(&["x^2y^3"]);
        assert!(!s.equivalent_to(&u));
        assert!(u.equivalent_to(&system(&["q^2t^3"])));
    }

    #[test]
    fn every_reported_witness_verifies() {
        let words = ["x^2", "xy", "x^2y", "x^3", "xy^2z", "x^2y^3", "xyzq"];
        for a in &words {
            for b in &words {
                if let Some(w) = zero_consequence(&cw(a), &cw(b)) {
                    assert!(w.verify(&cw(a), &cw(b)), "{} into {}", a, b);
                }
            }
        }
        let _ = Word::new(alloc::vec![Letter::X]).unwrap();
    }
}
