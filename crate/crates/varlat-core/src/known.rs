//! Exact word-problem deciders for a fixed list of small varieties.
//!
//! Each decider answers whether an identity holds in the variety by a
//! closed-form criterion on word profiles. Zero identities are decided
//! through their defining pair of equations over a fresh letter. The
//! right-handed varieties are decided by reversing both sides and using
//! the left-handed criterion.

use core::fmt;
use core::str::FromStr;

use alloc::collections::BTreeSet;
use alloc::string::String;

use crate::syntax::{Basis, Identity, Letter, Word};

/// A named variety with a decidable word problem.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum KnownVariety {
    /// Trivial semigroups.
    Trivial,
    /// Semilattices: `x^2 = x`, `xy = yx`.
    Semilattices,
    /// Left zero bands: `xy = x`.
    LeftZero,
    /// Right zero bands: `xy = y`.
    RightZero,
    /// `xy = x^2y`, `x^2y^2 = y^2x^2`.
    P,
    /// The mirror image of [`KnownVariety::P`].
    PDual,
    /// All commutative semigroups.
    Com,
    /// Abelian groups of exponent dividing `n` (`n >= 1`).
    Abelian(u32),
}

impl fmt::Display for KnownVariety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnownVariety::Trivial => write!(f, "T"),
            KnownVariety::Semilattices => write!(f, "SL"),
            KnownVariety::LeftZero => write!(f, "LZ"),
            KnownVariety::RightZero => write!(f, "RZ"),
            KnownVariety::P => write!(f, "P"),
            KnownVariety::PDual => write!(f, "Pdual"),
            KnownVariety::Com => write!(f, "COM"),
            KnownVariety::Abelian(n) => write!(f, "A{}", n),
        }
    }
}

impl FromStr for KnownVariety {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "T" => Ok(KnownVariety::Trivial),
            "SL" => Ok(KnownVariety::Semilattices),
            "LZ" => Ok(KnownVariety::LeftZero),
            "RZ" => Ok(KnownVariety::RightZero),
            "P" => Ok(KnownVariety::P),
            "Pdual" => Ok(KnownVariety::PDual),
            "COM" => Ok(KnownVariety::Com),
            _ => {
                if let Some(digits) = s.strip_prefix('A') {
                    match digits.parse::<u32>() {
                        Ok(n) if n >= 1 => return Ok(KnownVariety::Abelian(n)),
                        _ => {}
                    }
                }
                Err(alloc::format!(
                    "unknown variety '{}' (expected T, SL, LZ, RZ, P, Pdual, COM or An)",
                    s
                ))
            }
        }
    }
}

/// Decides whether an identity holds in the given variety.
pub fn holds_in(id: &Identity, variety: KnownVariety) -> bool {
    match id {
        Identity::Equation(u, v) => equation_holds(u, v, variety),
        Identity::ZeroReduced(_) => id
            .expanded()
            .iter()
            .all(|eq| holds_in(eq, variety)),
    }
}

fn equation_holds(u: &Word, v: &Word, variety: KnownVariety) -> bool {
    match variety {
        KnownVariety::Trivial => true,
        KnownVariety::Semilattices => u.content() == v.content(),
        KnownVariety::LeftZero => u.head() == v.head(),
        KnownVariety::RightZero => equation_holds(&u.reversed(), &v.reversed(), KnownVariety::LeftZero),
        KnownVariety::P => {
            if u.content() != v.content() {
                return false;
            }
            let last_u = u.count(u.tail());
            let last_v = v.count(v.tail());
            (last_u > 1 && last_v > 1) || (last_u == 1 && last_v == 1 && u.tail() == v.tail())
        }
        KnownVariety::PDual => equation_holds(&u.reversed(), &v.reversed(), KnownVariety::P),
        KnownVariety::Com => u.parikh() == v.parikh(),
        KnownVariety::Abelian(n) => {
            assert!(n >= 1, "Abelian exponent must be at least 1");
            let pu = u.parikh();
            let pv = v.parikh();
            let letters: BTreeSet<Letter> = pu.keys().chain(pv.keys()).copied().collect();
            letters.iter().all(|l| {
                let cu = pu.get(l).copied().unwrap_or(0);
                let cv = pv.get(l).copied().unwrap_or(0);
                cu % n == cv % n
            })
        }
    }
}

/// True when every identity of the basis holds in the variety, i.e. the
/// variety is contained in the one the basis defines.
pub fn contained_in(variety: KnownVariety, basis: &Basis) -> bool {
    basis.identities().iter().all(|id| holds_in(id, variety))
}

/// True when none of the left/right zero band varieties and neither
/// stabilisation variety is contained in the variety of the basis — the
/// hypothesis under which a periodic variety splits as the join of a
/// monoid-generated variety and a nil variety.
pub fn admits_monoid_nil_split(basis: &Basis) -> bool {
    ![
        KnownVariety::LeftZero,
        KnownVariety::RightZero,
        KnownVariety::P,
        KnownVariety::PDual,
    ]
    .iter()
    .any(|&v| contained_in(v, basis))
}
