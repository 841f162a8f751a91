//! Randomized laws: equivalence characterizations, witness validity,
//! monotonicity of the consequence relation, order-dual coherence of the
//! lattice analyzers, and congruence soundness of the free objects.

use std::collections::BTreeMap;

use proptest::prelude::*;

use varlat_core::lattice::FiniteLattice;
use varlat_core::parse::parse_identity;
use varlat_core::relfree::{build_relfree, power_word, Limits, VarietyOracle};
use varlat_core::syntax::{
    com_equivalence, sem_equivalence, stability_witness, Basis, ComWord, Context, Identity,
    Letter, Word,
};
use varlat_core::zerored::{systems_equivalent, zero_consequence};

const ABC: [Letter; 3] = [Letter::X, Letter::Y, Letter::Z];
const ABCD: [Letter; 4] = [Letter::X, Letter::Y, Letter::Z, Letter::Q];

fn com_word_from(letters: &[Letter], mults: &[u32]) -> Option<ComWord> {
    let mut parikh = BTreeMap::new();
    for (&l, &m) in letters.iter().zip(mults) {
        if m > 0 {
            parikh.insert(l, m);
        }
    }
    ComWord::new(parikh).ok()
}

fn com_words(letters: &'static [Letter], max_mult: u32) -> impl Strategy<Value = ComWord> {
    proptest::collection::vec(0..=max_mult, letters.len()).prop_filter_map(
        "at least one letter",
        move |mults| com_word_from(letters, &mults),
    )
}

fn plain_words() -> impl Strategy<Value = Word> {
    proptest::collection::vec(0..ABC.len(), 1..=8)
        .prop_map(|picks| Word::new(picks.into_iter().map(|i| ABC[i]).collect()).unwrap())
}

fn permutations() -> impl Strategy<Value = Vec<Letter>> {
    Just(ABCD.to_vec()).prop_shuffle()
}

fn rename_all(w: &ComWord, perm: &[Letter]) -> ComWord {
    let table: BTreeMap<Letter, Letter> = ABCD.iter().copied().zip(perm.iter().copied()).collect();
    w.renamed(&table).unwrap()
}

fn sorted_multiplicities(w: &ComWord) -> Vec<u32> {
    let mut m: Vec<u32> = w.parikh().values().copied().collect();
    m.sort_unstable();
    m
}

proptest! {
    /// Presence of a renaming is equivalent to equality of the sorted
    /// multiplicity vectors, and any returned renaming actually maps the
    /// second word onto the first.
    #[test]
    fn renaming_equivalence_is_characterized_by_multiplicity_multisets(
        u in com_words(&ABCD, 5),
        v in com_words(&ABCD, 5),
        perm in permutations(),
    ) {
        let expected = sorted_multiplicities(&u) == sorted_multiplicities(&v);
        match com_equivalence(&u, &v) {
            Some(map) => {
                prop_assert!(expected);
                prop_assert_eq!(v.renamed(&map).unwrap(), u.clone());
                prop_assert!(com_equivalence(&v, &u).is_some());
            }
            None => prop_assert!(!expected),
        }

        // explicit renamings are always recognized, including transitively
        let w = rename_all(&u, &perm);
        prop_assert!(com_equivalence(&u, &w).is_some());
        prop_assert!(com_equivalence(&w, &u).is_some());
        prop_assert!(com_equivalence(&u, &u).is_some());
    }

    /// Position-by-position renamings collapse to commutative renamings.
    #[test]
    fn plain_equivalence_implies_commutative_equivalence(
        u in plain_words(),
        v in plain_words(),
    ) {
        if let Some(map) = sem_equivalence(&u, &v) {
            let renamed: Vec<Letter> = v.letters().iter().map(|l| map[l]).collect();
            prop_assert_eq!(&renamed, u.letters());
            prop_assert!(com_equivalence(&u.com_word(), &v.com_word()).is_some());
        }
        prop_assert!(sem_equivalence(&u, &u).is_some());
    }

    /// A word admits a nontrivial fixing permutation exactly when two of
    /// its letters share a multiplicity; no word admits one position-wise.
    #[test]
    fn stability_matches_repeated_multiplicities(w in plain_words()) {
        let mults = sorted_multiplicities(&w.com_word());
        let repeated = mults.windows(2).any(|p| p[0] == p[1]);
        match stability_witness(&w, Context::Com) {
            Some(map) => {
                prop_assert!(repeated);
                prop_assert!(map.iter().any(|(a, b)| a != b), "nontrivial");
                prop_assert_eq!(w.com_word().renamed(&map).unwrap(), w.com_word());
            }
            None => prop_assert!(!repeated),
        }
        prop_assert!(stability_witness(&w, Context::Sem).is_none());
    }

    /// Anything derivable from u = 0 stays derivable when the target grows.
    #[test]
    fn zero_consequence_is_monotone_in_the_target(
        u in com_words(&ABCD[..2], 3),
        v in com_words(&ABC, 6),
        extra in proptest::collection::vec(0u32..=3, 4),
    ) {
        if let Some(witness) = zero_consequence(&u, &v) {
            prop_assert!(witness.verify(&u, &v));
            let mut grown = v.parikh().clone();
            for (&l, &m) in ABCD.iter().zip(&extra) {
                if m > 0 {
                    *grown.entry(l).or_insert(0) += m;
                }
            }
            let bigger = ComWord::new(grown).unwrap();
            let again = zero_consequence(&u, &bigger);
            prop_assert!(again.is_some(), "{} -> {} lost at {}", u, v, bigger);
            prop_assert!(again.unwrap().verify(&u, &bigger));
        }
    }

    /// Single-generator systems are interchangeable exactly up to renaming.
    #[test]
    fn system_equivalence_matches_renaming(
        u in com_words(&ABCD, 5),
        v in com_words(&ABCD, 5),
    ) {
        prop_assert_eq!(systems_equivalent(&u, &v), com_equivalence(&u, &v).is_some());
    }

    /// Every identity survives a round trip through its rendered form.
    #[test]
    fn identities_round_trip_through_rendering(
        u in plain_words(),
        v in plain_words(),
        zero_form in any::<bool>(),
    ) {
        let id = if zero_form {
            Identity::ZeroReduced(u)
        } else {
            Identity::Equation(u, v)
        };
        prop_assert_eq!(parse_identity(&id.to_string()).unwrap(), id);
    }
}

// -- order-dual coherence ----------------------------------------------------

/// Intersection-closed families of subsets of a four-element set, ordered
/// by inclusion, with the full set forced in: always a lattice.
fn closure_lattice(seed: u16) -> FiniteLattice {
    let mut masks: Vec<u16> = (0..16).filter(|i| seed & (1 << i) != 0).collect();
    masks.push(0b1111);
    loop {
        let mut grew = false;
        let snapshot = masks.clone();
        for &a in &snapshot {
            for &b in &snapshot {
                if !masks.contains(&(a & b)) {
                    masks.push(a & b);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    masks.sort_unstable();
    masks.dedup();
    let names: Vec<String> = masks.iter().map(|m| format!("s{}", m)).collect();
    let strictly_below =
        |a: u16, b: u16| a != b && a & b == a;
    let mut covers = Vec::new();
    for (i, &a) in masks.iter().enumerate() {
        for (j, &b) in masks.iter().enumerate() {
            if strictly_below(a, b)
                && !masks
                    .iter()
                    .any(|&c| strictly_below(a, c) && strictly_below(c, b))
            {
                covers.push((i, j));
            }
        }
    }
    FiniteLattice::from_covers(names, &covers).expect("closure systems are lattices")
}

proptest! {
    /// Reversing the order swaps the two one-sided notions and fixes the
    /// self-dual ones, element by element.
    #[test]
    fn dual_swaps_one_sided_properties(seed in any::<u16>()) {
        let l = closure_lattice(seed);
        let d = l.dual();
        for x in 0..l.len() {
            prop_assert_eq!(l.is_modular_element(x), d.is_modular_element(x));
            prop_assert_eq!(l.is_lower_modular_element(x), d.is_upper_modular_element(x));
            prop_assert_eq!(l.is_upper_modular_element(x), d.is_lower_modular_element(x));
            prop_assert_eq!(l.is_distributive_element(x), d.is_codistributive_element(x));
            prop_assert_eq!(l.is_codistributive_element(x), d.is_distributive_element(x));
            prop_assert_eq!(l.is_neutral_element(x), d.is_neutral_element(x));
        }
    }
}

// -- congruence soundness of free objects -------------------------------------

fn nil_basis(exponent: u32, extras: &[(u32, u32)]) -> Basis {
    let mut identities = vec![Identity::ZeroReduced(power_word(Letter::X, exponent))];
    for &(a, b) in extras {
        if a + b >= 2 {
            if let Some(w) = com_word_from(&ABCD[..2], &[a, b]) {
                identities.push(Identity::ZeroReduced(w.to_word()));
            }
        }
    }
    Basis::new(identities).ensure_commutative()
}

proptest! {
    /// The computed partition of the two-generated free object is closed
    /// under right multiplication and under every substitution generated
    /// by two images, and the basis holds in its own variety.
    #[test]
    fn relfree_classes_form_a_fully_invariant_congruence(
        exponent in 2u32..=3,
        extras in proptest::collection::vec((0u32..=3, 0u32..=3), 0..=2),
        image_x in (0u32..=2, 0u32..=2).prop_filter("nonempty", |&(a, b)| a + b > 0),
        image_y in (0u32..=2, 0u32..=2).prop_filter("nonempty", |&(a, b)| a + b > 0),
    ) {
        let basis = nil_basis(exponent, &extras);
        let limits = Limits::default();
        let object = build_relfree(&basis, 2, &limits).unwrap();
        let generators = [Letter::X, Letter::Y];
        let class = |a: u32, b: u32| {
            let w = com_word_from(&generators, &[a, b]).unwrap();
            object.class_of(w.parikh(), &generators)
        };
        let substituted = |a: u32, b: u32| {
            (
                a * image_x.0 + b * image_y.0,
                a * image_x.1 + b * image_y.1,
            )
        };

        let grid: Vec<(u32, u32)> = (0..=4)
            .flat_map(|a| (0..=4).map(move |b| (a, b)))
            .filter(|&(a, b)| a + b > 0)
            .collect();
        for &(a1, b1) in &grid {
            for &(a2, b2) in &grid {
                if class(a1, b1) != class(a2, b2) {
                    continue;
                }
                for &(ma, mb) in &grid {
                    prop_assert_eq!(
                        class(a1 + ma, b1 + mb),
                        class(a2 + ma, b2 + mb),
                        "right multiplication by x^{}y^{}",
                        ma,
                        mb
                    );
                }
                let (ia, ib) = substituted(a1, b1);
                let (ja, jb) = substituted(a2, b2);
                prop_assert_eq!(
                    class(ia, ib),
                    class(ja, jb),
                    "substitution x -> x^{}y^{}, y -> x^{}y^{}",
                    image_x.0,
                    image_x.1,
                    image_y.0,
                    image_y.1
                );
            }
        }

        let mut oracle = VarietyOracle::new(&basis, limits).unwrap();
        for id in basis.identities() {
            prop_assert!(oracle.holds(id).unwrap());
        }
    }
}
