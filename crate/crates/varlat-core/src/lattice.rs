//! Explicit finite lattices and special-element tests.
//!
//! A lattice is given by its cover relation; join and meet tables are
//! computed (and their existence verified) up front, so every later
//! question is a table lookup. Elements are addressed by index, with names
//! kept for reporting. All predicate checks are exhaustive and return the
//! first counterexample in index order, which keeps witnesses stable.

use core::fmt;

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LatticeError {
    DuplicateElement(String),
    UnknownElement(String),
    CycleInCovers,
    NoBound {
        left: String,
        right: String,
        operation: &'static str,
    },
    ResourceLimit(String),
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::DuplicateElement(name) => write!(f, "duplicate element '{}'", name),
            LatticeError::UnknownElement(name) => write!(f, "unknown element '{}'", name),
            LatticeError::CycleInCovers => write!(f, "cover relation contains a cycle"),
            LatticeError::NoBound {
                left,
                right,
                operation,
            } => write!(
                f,
                "not a lattice: elements '{}' and '{}' have no {}",
                left, right, operation
            ),
            LatticeError::ResourceLimit(what) => write!(f, "resource limit exceeded: {}", what),
        }
    }
}

impl core::error::Error for LatticeError {}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteLattice {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    join: Vec<Vec<u32>>,
    meet: Vec<Vec<u32>>,
}

impl FiniteLattice {
    /// Builds a lattice from named elements and cover pairs `(lower, upper)`.
    /// Fails loudly when the covers contain a cycle or some pair of elements
    /// lacks a least upper or greatest lower bound.
    pub fn from_covers(
        names: Vec<String>,
        covers: &[(usize, usize)],
    ) -> Result<FiniteLattice, LatticeError> {
        let n = names.len();
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(LatticeError::DuplicateElement(name.clone()));
            }
        }
        for &(a, b) in covers {
            assert!(a < n && b < n, "cover index out of range");
        }

        // topological order of the cover digraph (lower -> upper)
        let mut indegree = alloc::vec![0usize; n];
        for &(_, b) in covers {
            indegree[b] += 1;
        }
        let mut queue: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut emitted = 0;
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            emitted += 1;
            for &(a, b) in covers {
                if a == v {
                    indegree[b] -= 1;
                    if indegree[b] == 0 {
                        queue.push(b);
                    }
                }
            }
        }
        if emitted != n {
            return Err(LatticeError::CycleInCovers);
        }

        // reflexive-transitive closure
        let mut leq = alloc::vec![alloc::vec![false; n]; n];
        for i in 0..n {
            leq[i][i] = true;
        }
        for &(a, b) in covers {
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }

        let bound = |x: usize, y: usize, upper: bool| -> Option<usize> {
            let holds = |lo: usize, hi: usize| if upper { leq[lo][hi] } else { leq[hi][lo] };
            let candidates: Vec<usize> = (0..n).filter(|&c| holds(x, c) && holds(y, c)).collect();
            candidates
                .iter()
                .copied()
                .find(|&c| candidates.iter().all(|&d| holds(c, d)))
        };

        let mut join = alloc::vec![alloc::vec![0u32; n]; n];
        let mut meet = alloc::vec![alloc::vec![0u32; n]; n];
        for x in 0..n {
            for y in 0..n {
                match bound(x, y, true) {
                    Some(j) => join[x][y] = j as u32,
                    None => {
                        return Err(LatticeError::NoBound {
                            left: names[x].clone(),
                            right: names[y].clone(),
                            operation: "join",
                        })
                    }
                }
                match bound(x, y, false) {
                    Some(m) => meet[x][y] = m as u32,
                    None => {
                        return Err(LatticeError::NoBound {
                            left: names[x].clone(),
                            right: names[y].clone(),
                            operation: "meet",
                        })
                    }
                }
            }
        }

        Ok(FiniteLattice {
            names,
            leq,
            join,
            meet,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize, LatticeError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| LatticeError::UnknownElement(String::from(name)))
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x][y] as usize
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x][y] as usize
    }

    pub fn bottom(&self) -> usize {
        (0..self.len()).find(|&b| (0..self.len()).all(|y| self.leq[b][y])).unwrap()
    }

    pub fn top(&self) -> usize {
        (0..self.len()).find(|&t| (0..self.len()).all(|y| self.leq[y][t])).unwrap()
    }

    pub fn atoms(&self) -> Vec<usize> {
        let bot = self.bottom();
        (0..self.len())
            .filter(|&a| {
                a != bot
                    && (0..self.len())
                        .all(|c| !(self.leq[c][a] && c != a && c != bot))
            })
            .collect()
    }

    /// The order-dual lattice: comparisons flipped, join and meet swapped.
    pub fn dual(&self) -> FiniteLattice {
        let n = self.len();
        let mut leq = alloc::vec![alloc::vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                leq[i][j] = self.leq[j][i];
            }
        }
        FiniteLattice {
            names: self.names.clone(),
            leq,
            join: self.meet.clone(),
            meet: self.join.clone(),
        }
    }

    // -- special elements ---------------------------------------------------

    /// First `(y, z)` with `y <= z` where `(x v y) ^ z != (x ^ z) v y`.
    pub fn modular_witness(&self, x: usize) -> Option<(usize, usize)> {
        for y in 0..self.len() {
            for z in 0..self.len() {
                if !self.leq[y][z] {
                    continue;
                }
                if self.meet(self.join(x, y), z) != self.join(self.meet(x, z), y) {
                    return Some((y, z));
                }
            }
        }
        None
    }

    pub fn is_modular_element(&self, x: usize) -> bool {
        self.modular_witness(x).is_none()
    }

    /// First `(y, z)` with `x <= y` where `x v (y ^ z) != y ^ (x v z)`.
    pub fn lower_modular_witness(&self, x: usize) -> Option<(usize, usize)> {
        for y in 0..self.len() {
            if !self.leq[x][y] {
                continue;
            }
            for z in 0..self.len() {
                if self.join(x, self.meet(y, z)) != self.meet(y, self.join(x, z)) {
                    return Some((y, z));
                }
            }
        }
        None
    }

    pub fn is_lower_modular_element(&self, x: usize) -> bool {
        self.lower_modular_witness(x).is_none()
    }

    /// First `(y, z)` with `y <= x` where `x ^ (z v y) != (x ^ z) v y`.
    pub fn upper_modular_witness(&self, x: usize) -> Option<(usize, usize)> {
        for y in 0..self.len() {
            if !self.leq[y][x] {
                continue;
            }
            for z in 0..self.len() {
                if self.meet(x, self.join(z, y)) != self.join(self.meet(x, z), y) {
                    return Some((y, z));
                }
            }
        }
        None
    }

    pub fn is_upper_modular_element(&self, x: usize) -> bool {
        self.upper_modular_witness(x).is_none()
    }

    /// First `(y, z)` where `x v (y ^ z) != (x v y) ^ (x v z)`.
    pub fn distributive_witness(&self, x: usize) -> Option<(usize, usize)> {
        for y in 0..self.len() {
            for z in 0..self.len() {
                if self.join(x, self.meet(y, z)) != self.meet(self.join(x, y), self.join(x, z)) {
                    return Some((y, z));
                }
            }
        }
        None
    }

    pub fn is_distributive_element(&self, x: usize) -> bool {
        self.distributive_witness(x).is_none()
    }

    /// First `(y, z)` where `x ^ (y v z) != (x ^ y) v (x ^ z)`.
    pub fn codistributive_witness(&self, x: usize) -> Option<(usize, usize)> {
        for y in 0..self.len() {
            for z in 0..self.len() {
                if self.meet(x, self.join(y, z)) != self.join(self.meet(x, y), self.meet(x, z)) {
                    return Some((y, z));
                }
            }
        }
        None
    }

    pub fn is_codistributive_element(&self, x: usize) -> bool {
        self.codistributive_witness(x).is_none()
    }

    /// First `(y, z)` violating the median equality
    /// `(x v y) ^ (y v z) ^ (z v x) = (x ^ y) v (y ^ z) v (z ^ x)`.
    /// Cross-checked against the generated-sublattice route: the same
    /// triples must generate distributive sublattices.
    pub fn neutral_witness(&self, x: usize) -> Option<(usize, usize)> {
        let mut first = None;
        for y in 0..self.len() {
            for z in 0..self.len() {
                let left = self.meet(
                    self.meet(self.join(x, y), self.join(y, z)),
                    self.join(z, x),
                );
                let right = self.join(
                    self.join(self.meet(x, y), self.meet(y, z)),
                    self.meet(z, x),
                );
                if left != right {
                    first = Some((y, z));
                    break;
                }
            }
            if first.is_some() {
                break;
            }
        }
        debug_assert_eq!(
            first.is_none(),
            (0..self.len()).all(|y| {
                (0..self.len()).all(|z| self.triple_generates_distributive(x, y, z))
            }),
            "median and sublattice neutrality routes disagree"
        );
        first
    }

    pub fn is_neutral_element(&self, x: usize) -> bool {
        self.neutral_witness(x).is_none()
    }

    fn triple_generates_distributive(&self, x: usize, y: usize, z: usize) -> bool {
        let mut sub = alloc::vec![x, y, z];
        sub.sort_unstable();
        sub.dedup();
        loop {
            let mut grew = false;
            let snapshot = sub.clone();
            for &a in &snapshot {
                for &b in &snapshot {
                    for v in [self.join(a, b), self.meet(a, b)] {
                        if !sub.contains(&v) {
                            sub.push(v);
                            grew = true;
                        }
                    }
                }
            }
            if !grew {
                break;
            }
            sub.sort_unstable();
        }
        for &a in &sub {
            for &b in &sub {
                for &c in &sub {
                    if self.meet(a, self.join(b, c))
                        != self.join(self.meet(a, b), self.meet(a, c))
                    {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Checks that for every element the bounded-variable forms agree with
    /// the unguarded two-identity forms:
    /// modular:        (x v y) ^ (y v z) = (x ^ (y v z)) v y   for all y, z
    /// lower-modular:  (x v y) ^ (x v z) = ((x v y) ^ z) v x   for all y, z
    /// Returns the elements (by index) where any pair disagrees.
    pub fn alternative_form_disagreements(&self) -> Vec<usize> {
        let n = self.len();
        let mut bad = Vec::new();
        for x in 0..n {
            let unguarded_modular = (0..n).all(|y| {
                (0..n).all(|z| {
                    self.meet(self.join(x, y), self.join(y, z))
                        == self.join(self.meet(x, self.join(y, z)), y)
                })
            });
            let unguarded_lower = (0..n).all(|y| {
                (0..n).all(|z| {
                    self.meet(self.join(x, y), self.join(x, z))
                        == self.join(self.meet(self.join(x, y), z), x)
                })
            });
            if unguarded_modular != self.is_modular_element(x)
                || unguarded_lower != self.is_lower_modular_element(x)
            {
                bad.push(x);
            }
        }
        bad
    }
}

// ---------------------------------------------------------------------------
// lattice terms

/// A term in the signature (join, meet) over numbered variables. Variable 0
/// is conventionally the element under test.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LatticeTerm {
    Var(u32),
    Join(Box<LatticeTerm>, Box<LatticeTerm>),
    Meet(Box<LatticeTerm>, Box<LatticeTerm>),
}

impl LatticeTerm {
    pub fn var(i: u32) -> LatticeTerm {
        LatticeTerm::Var(i)
    }

    pub fn join(a: LatticeTerm, b: LatticeTerm) -> LatticeTerm {
        LatticeTerm::Join(Box::new(a), Box::new(b))
    }

    pub fn meet(a: LatticeTerm, b: LatticeTerm) -> LatticeTerm {
        LatticeTerm::Meet(Box::new(a), Box::new(b))
    }

    pub fn max_var(&self) -> u32 {
        match self {
            LatticeTerm::Var(i) => *i,
            LatticeTerm::Join(a, b) | LatticeTerm::Meet(a, b) => a.max_var().max(b.max_var()),
        }
    }

    pub fn eval(&self, lattice: &FiniteLattice, assignment: &[usize]) -> usize {
        match self {
            LatticeTerm::Var(i) => assignment[*i as usize],
            LatticeTerm::Join(a, b) => {
                lattice.join(a.eval(lattice, assignment), b.eval(lattice, assignment))
            }
            LatticeTerm::Meet(a, b) => {
                lattice.meet(a.eval(lattice, assignment), b.eval(lattice, assignment))
            }
        }
    }
}

/// Whether `x` satisfies `lhs = rhs` (variable 0 bound to `x`) under every
/// assignment of the remaining variables. Returns the first violating
/// assignment otherwise.
pub fn element_satisfies_identity(
    lattice: &FiniteLattice,
    x: usize,
    lhs: &LatticeTerm,
    rhs: &LatticeTerm,
) -> Result<Option<Vec<usize>>, LatticeError> {
    let vars = lhs.max_var().max(rhs.max_var()) as usize + 1;
    let n = lattice.len();
    let mut total: u64 = 1;
    for _ in 1..vars {
        total = total.saturating_mul(n as u64);
        if total > 10_000_000 {
            return Err(LatticeError::ResourceLimit(alloc::format!(
                "identity with {} variables over {} elements needs too many assignments",
                vars,
                n
            )));
        }
    }
    let mut assignment = alloc::vec![0usize; vars];
    assignment[0] = x;
    for mut code in 0..total {
        for slot in assignment.iter_mut().skip(1) {
            *slot = (code % n as u64) as usize;
            code /= n as u64;
        }
        if lhs.eval(lattice, &assignment) != rhs.eval(lattice, &assignment) {
            return Ok(Some(assignment));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// standard examples

/// Chain 0 < 1 < ... < n-1.
pub fn chain(n: usize) -> FiniteLattice {
    assert!(n >= 1);
    let names = (0..n).map(|i| alloc::format!("c{}", i)).collect();
    let covers: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    FiniteLattice::from_covers(names, &covers).unwrap()
}

/// The pentagon: 0 < a < c < 1 and 0 < b < 1.
pub fn pentagon() -> FiniteLattice {
    let names = ["0", "a", "b", "c", "1"].iter().map(|s| String::from(*s)).collect();
    FiniteLattice::from_covers(names, &[(0, 1), (1, 3), (3, 4), (0, 2), (2, 4)]).unwrap()
}

/// The diamond: three incomparable atoms between 0 and 1.
pub fn diamond() -> FiniteLattice {
    let names = ["0", "a", "b", "c", "1"].iter().map(|s| String::from(*s)).collect();
    FiniteLattice::from_covers(names, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap()
}

/// Boolean lattice of subsets of a k-element set.
pub fn boolean(k: u32) -> FiniteLattice {
    let n = 1usize << k;
    let names = (0..n).map(|mask| alloc::format!("s{}", mask)).collect();
    let mut covers = Vec::new();
    for mask in 0..n {
        for bit in 0..k {
            if mask & (1 << bit) == 0 {
                covers.push((mask, mask | (1 << bit)));
            }
        }
    }
    FiniteLattice::from_covers(names, &covers).unwrap()
}
