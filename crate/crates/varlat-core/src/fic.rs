//! Finite semigroups given by multiplication tables, their endomorphism
//! monoids, and the lattice of fully invariant congruences.
//!
//! The intended input is the quotient table of a relatively free object,
//! but any associative table works. Everything here is exhaustive: the
//! sizes that matter (nil quotients on a couple of generators) stay in the
//! single digits, so the element cap is a guard rail rather than a tuning
//! knob.

use core::fmt;

use alloc::collections::{BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;

use crate::lattice::{FiniteLattice, LatticeError};
use crate::uf::UnionFind;

/// Endomorphism enumeration scans all generator images, so it is capped.
const ENDO_ELEMENT_CAP: usize = 12;
/// Guard against congruence lattices too large to be useful.
const CONGRUENCE_CAP: usize = 200_000;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FicError {
    MalformedTable(String),
    NotAssociative { a: usize, b: usize, c: usize },
    NoZeroElement,
    ResourceLimit(String),
    Lattice(LatticeError),
}

impl fmt::Display for FicError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FicError::MalformedTable(msg) => write!(f, "malformed table: {}", msg),
            FicError::NotAssociative { a, b, c } => write!(
                f,
                "multiplication is not associative at ({}, {}, {})",
                a, b, c
            ),
            FicError::NoZeroElement => write!(f, "semigroup has no zero element"),
            FicError::ResourceLimit(msg) => write!(f, "resource limit exceeded: {}", msg),
            FicError::Lattice(e) => write!(f, "{}", e),
        }
    }
}

impl core::error::Error for FicError {}

impl From<LatticeError> for FicError {
    fn from(e: LatticeError) -> FicError {
        FicError::Lattice(e)
    }
}

/// A finite semigroup as a multiplication table: `table[a][b]` is the
/// product `ab`. Construction verifies shape and associativity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteSemigroup {
    table: Vec<Vec<u32>>,
}

impl FiniteSemigroup {
    pub fn new(table: Vec<Vec<u32>>) -> Result<FiniteSemigroup, FicError> {
        let n = table.len();
        if n == 0 {
            return Err(FicError::MalformedTable(String::from("empty table")));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(FicError::MalformedTable(alloc::format!(
                    "row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    n
                )));
            }
            for (j, &e) in row.iter().enumerate() {
                if e as usize >= n {
                    return Err(FicError::MalformedTable(alloc::format!(
                        "entry at ({}, {}) is out of range",
                        i,
                        j
                    )));
                }
            }
        }
        let s = FiniteSemigroup { table };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if s.product(s.product(a, b), c) != s.product(a, s.product(b, c)) {
                        return Err(FicError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(s)
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn product(&self, a: usize, b: usize) -> usize {
        self.table[a][b] as usize
    }

    pub fn table(&self) -> &[Vec<u32>] {
        &self.table
    }

    /// The absorbing element, if there is one.
    pub fn zero_element(&self) -> Option<usize> {
        (0..self.size())
            .find(|&z| (0..self.size()).all(|s| self.product(z, s) == z && self.product(s, z) == z))
    }

    fn closure(&self, seed: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut set = seed.clone();
        loop {
            let mut fresh = BTreeSet::new();
            for &a in &set {
                for &b in &set {
                    let p = self.product(a, b);
                    if !set.contains(&p) {
                        fresh.insert(p);
                    }
                }
            }
            if fresh.is_empty() {
                return set;
            }
            set.extend(fresh);
        }
    }

    /// A small generating set: every element that is not a product must be
    /// a generator; the rest is filled greedily by least index.
    pub fn generating_set(&self) -> Vec<usize> {
        let n = self.size();
        let mut products = alloc::vec![false; n];
        for a in 0..n {
            for b in 0..n {
                products[self.product(a, b)] = true;
            }
        }
        let mut gens: BTreeSet<usize> = (0..n).filter(|&e| !products[e]).collect();
        let mut reached = self.closure(&gens);
        while reached.len() < n {
            let next = (0..n).find(|e| !reached.contains(e)).unwrap();
            gens.insert(next);
            reached = self.closure(&gens);
        }
        gens.into_iter().collect()
    }

    /// Propagates generator images through products until the map is total,
    /// returning false on a clash with the table.
    fn extend_map(&self, map: &mut [Option<u32>]) -> bool {
        let n = self.size();
        loop {
            let mut changed = false;
            for a in 0..n {
                let Some(fa) = map[a] else { continue };
                for b in 0..n {
                    let Some(fb) = map[b] else { continue };
                    let c = self.product(a, b);
                    let image = self.table[fa as usize][fb as usize];
                    match map[c] {
                        Some(prev) if prev != image => return false,
                        Some(_) => {}
                        None => {
                            map[c] = Some(image);
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// All endomorphisms, each as the image vector of the elements. The
    /// search assigns images to a generating set and closes under products.
    pub fn endomorphisms(&self) -> Result<Vec<Vec<u32>>, FicError> {
        let n = self.size();
        if n > ENDO_ELEMENT_CAP {
            return Err(FicError::ResourceLimit(alloc::format!(
                "semigroup with {} elements exceeds the endomorphism search cap of {}",
                n,
                ENDO_ELEMENT_CAP
            )));
        }
        let gens = self.generating_set();
        let mut out = Vec::new();
        let mut choice = alloc::vec![0usize; gens.len()];
        'outer: loop {
            let mut map: Vec<Option<u32>> = alloc::vec![None; n];
            for (g, &img) in gens.iter().zip(&choice) {
                map[*g] = Some(img as u32);
            }
            if self.extend_map(&mut map) {
                let full: Option<Vec<u32>> = map.iter().copied().collect();
                if let Some(full) = full {
                    let consistent = (0..n).all(|a| {
                        (0..n).all(|b| {
                            self.table[full[a] as usize][full[b] as usize]
                                == full[self.product(a, b)]
                        })
                    });
                    if consistent {
                        out.push(full);
                    }
                }
            }
            for slot in (0..choice.len()).rev() {
                choice[slot] += 1;
                if choice[slot] < n {
                    continue 'outer;
                }
                choice[slot] = 0;
            }
            break;
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// A congruence as a canonical labeling: classes are numbered consecutively
/// in order of first appearance, so equal partitions have equal labelings.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Congruence {
    labels: Vec<u32>,
    class_count: u32,
}

impl Congruence {
    pub fn identity(n: usize) -> Congruence {
        Congruence {
            labels: (0..n as u32).collect(),
            class_count: n as u32,
        }
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn class_count(&self) -> u32 {
        self.class_count
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.labels[a] == self.labels[b]
    }

    pub fn is_identity(&self) -> bool {
        self.class_count as usize == self.labels.len()
    }

    pub fn is_full(&self) -> bool {
        self.class_count == 1
    }

    /// Whether every class of `self` lies inside a class of `other`.
    pub fn refines(&self, other: &Congruence) -> bool {
        let mut image: Vec<Option<u32>> = alloc::vec![None; self.class_count as usize];
        for (i, &l) in self.labels.iter().enumerate() {
            match image[l as usize] {
                Some(prev) if prev != other.labels[i] => return false,
                Some(_) => {}
                None => image[l as usize] = Some(other.labels[i]),
            }
        }
        true
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = alloc::vec![Vec::new(); self.class_count as usize];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l as usize].push(i);
        }
        out
    }

    fn from_union_find(uf: &mut UnionFind) -> Congruence {
        let (labels, count) = uf.class_labels();
        Congruence {
            labels,
            class_count: count as u32,
        }
    }
}

/// Smallest congruence containing the given pairs: union-find closed under
/// left and right translation by every element.
pub fn congruence_closure(s: &FiniteSemigroup, pairs: &[(usize, usize)]) -> Congruence {
    let n = s.size();
    let mut uf = UnionFind::new(n);
    let mut queue: VecDeque<(usize, usize)> = pairs.iter().copied().collect();
    while let Some((a, b)) = queue.pop_front() {
        if uf.union(a as u32, b as u32) {
            for c in 0..n {
                queue.push_back((s.product(a, c), s.product(b, c)));
                queue.push_back((s.product(c, a), s.product(c, b)));
            }
        }
    }
    Congruence::from_union_find(&mut uf)
}

pub fn principal_congruence(s: &FiniteSemigroup, a: usize, b: usize) -> Congruence {
    congruence_closure(s, &[(a, b)])
}

fn seed_pairs(theta: &Congruence) -> Vec<(usize, usize)> {
    let mut firsts: Vec<Option<usize>> = alloc::vec![None; theta.class_count as usize];
    let mut pairs = Vec::new();
    for (i, &l) in theta.labels.iter().enumerate() {
        match firsts[l as usize] {
            None => firsts[l as usize] = Some(i),
            Some(first) => pairs.push((first, i)),
        }
    }
    pairs
}

/// Every congruence of the semigroup, found by closing upward from the
/// identity relation one merged pair at a time.
pub fn all_congruences(s: &FiniteSemigroup) -> Result<Vec<Congruence>, FicError> {
    let n = s.size();
    let mut seen: BTreeSet<Congruence> = BTreeSet::new();
    let mut queue: VecDeque<Congruence> = VecDeque::new();
    let identity = Congruence::identity(n);
    seen.insert(identity.clone());
    queue.push_back(identity);
    while let Some(theta) = queue.pop_front() {
        let base = seed_pairs(&theta);
        for a in 0..n {
            for b in a + 1..n {
                if theta.related(a, b) {
                    continue;
                }
                let mut pairs = base.clone();
                pairs.push((a, b));
                let bigger = congruence_closure(s, &pairs);
                if seen.insert(bigger.clone()) {
                    if seen.len() > CONGRUENCE_CAP {
                        return Err(FicError::ResourceLimit(alloc::format!(
                            "more than {} congruences",
                            CONGRUENCE_CAP
                        )));
                    }
                    queue.push_back(bigger);
                }
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Whether the congruence is preserved by every endomorphism in the list.
pub fn is_fully_invariant(
    endos: &[Vec<u32>],
    theta: &Congruence,
) -> bool {
    let n = theta.labels.len();
    endos.iter().all(|phi| {
        (0..n).all(|a| {
            (a + 1..n).all(|b| {
                !theta.related(a, b) || theta.related(phi[a] as usize, phi[b] as usize)
            })
        })
    })
}

pub fn fully_invariant_congruences(s: &FiniteSemigroup) -> Result<Vec<Congruence>, FicError> {
    let endos = s.endomorphisms()?;
    Ok(all_congruences(s)?
        .into_iter()
        .filter(|theta| is_fully_invariant(&endos, theta))
        .collect())
}

/// The lattice of fully invariant congruences under refinement, together
/// with the congruences in the same order as the lattice elements. Meets
/// and joins agree with intersection and join of congruences because fully
/// invariant congruences are closed under both.
pub fn fic_lattice(s: &FiniteSemigroup) -> Result<(FiniteLattice, Vec<Congruence>), FicError> {
    let list = fully_invariant_congruences(s)?;
    let m = list.len();
    let mut leq = alloc::vec![alloc::vec![false; m]; m];
    for i in 0..m {
        for j in 0..m {
            leq[i][j] = list[i].refines(&list[j]);
        }
    }
    let mut covers = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if i == j || !leq[i][j] {
                continue;
            }
            let between = (0..m)
                .any(|k| k != i && k != j && leq[i][k] && leq[k][j]);
            if !between {
                covers.push((i, j));
            }
        }
    }
    let names = (0..m).map(|i| alloc::format!("c{}", i)).collect();
    let lattice = FiniteLattice::from_covers(names, &covers)?;
    Ok((lattice, list))
}

/// Congruences whose only non-singleton class is an endomorphism-invariant
/// ideal containing the zero element. For a semigroup with at least two
/// elements the full relation always qualifies.
pub fn zero_class_congruences(s: &FiniteSemigroup) -> Result<Vec<Congruence>, FicError> {
    let zero = s.zero_element().ok_or(FicError::NoZeroElement)?;
    let endos = s.endomorphisms()?;
    let n = s.size();
    Ok(all_congruences(s)?
        .into_iter()
        .filter(|theta| {
            let classes = theta.classes();
            let mut nonsingleton = classes.iter().filter(|c| c.len() > 1);
            let Some(class) = nonsingleton.next() else {
                return false;
            };
            if nonsingleton.next().is_some() || !class.contains(&zero) {
                return false;
            }
            let in_class = |e: usize| theta.related(e, zero);
            let ideal = class.iter().all(|&k| {
                (0..n).all(|t| in_class(s.product(k, t)) && in_class(s.product(t, k)))
            });
            let invariant = endos
                .iter()
                .all(|phi| class.iter().all(|&k| in_class(phi[k] as usize)));
            ideal && invariant
        })
        .collect())
}
