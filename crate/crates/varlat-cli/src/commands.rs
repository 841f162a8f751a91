//! One handler per subcommand; each returns a filled [`RunReport`].

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};

use varlat_core::classify::{
    classify, consistency_audit, default_rank_bound, key_instance_holds, Property, Verdict,
};
use varlat_core::fic::{fic_lattice, zero_class_congruences, FiniteSemigroup};
use varlat_core::known::{holds_in, KnownVariety};
use varlat_core::lattice::FiniteLattice;
use varlat_core::parse::{parse_identity, parse_word};
use varlat_core::prooflab::{
    corollary_words, gamma_partition, monoid_erasure, proposition_words, QuadrupleVariant,
};
use varlat_core::relfree::{build_relfree, Limits};
use varlat_core::syntax::{Basis, ComWord, Identity, Word};
use varlat_core::zerored::{zero_consequence, ConsequenceWitness, ZeroSystem};

use crate::cache;
use crate::files::{load_basis, load_lattice, load_table};
use crate::report::RunReport;

// -- shared small helpers ---------------------------------------------------

fn com(text: &str) -> Result<ComWord> {
    Ok(parse_word(text)?.com_word())
}

fn com_str(w: &ComWord) -> String {
    w.to_word().to_string()
}

fn basis_str(b: &Basis) -> String {
    b.identities()
        .iter()
        .map(|id| id.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

fn limits_with(carrier_cap: Option<u64>) -> Limits {
    let mut limits = Limits::default();
    if let Some(cap) = carrier_cap {
        limits.carrier_cap = cap;
    }
    limits
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn witness_str(w: &ConsequenceWitness) -> String {
    let images = w
        .images
        .iter()
        .map(|(l, img)| format!("{} -> {}", l, com_str(img)))
        .collect::<Vec<_>>()
        .join(", ");
    match &w.remainder {
        Some(r) => format!("{}; remainder: {}", images, com_str(r)),
        None => format!("{}; remainder: (empty)", images),
    }
}

// -- decide -----------------------------------------------------------------

pub fn decide_zero_consequence(from: &str, to: &str) -> Result<RunReport> {
    let started = Instant::now();
    let u = com(from)?;
    let v = com(to)?;
    let mut report = RunReport::new("decide zero-consequence");
    report.input("from", com_str(&u));
    report.input("to", com_str(&v));
    match zero_consequence(&u, &v) {
        Some(w) => {
            report.verdict = "yes".to_string();
            report.note(format!(
                "substituting the images into {} and appending the remainder yields {}",
                com_str(&u),
                com_str(&v)
            ));
            report.witness(witness_str(&w));
        }
        None => {
            report.verdict = "no".to_string();
            report.note(
                "no assignment of nonempty images fits under the target's exponent vector",
            );
        }
    }
    report.finish(started);
    Ok(report)
}

pub fn decide_zr_holds(zeros: &str, identity: &str) -> Result<RunReport> {
    let started = Instant::now();
    let mut generators = Vec::new();
    for part in zeros.split(',') {
        let part = part.trim();
        if part.is_empty() {
            bail!("empty generator in --zeros");
        }
        generators.push(com(part)?);
    }
    let id = parse_identity(identity)?;
    let system = ZeroSystem::new(generators);
    let mut report = RunReport::new("decide zr-holds");
    report.input(
        "zeros",
        system
            .generators()
            .iter()
            .map(com_str)
            .collect::<Vec<_>>()
            .join(", "),
    );
    report.input("identity", id.to_string());
    let holds = system.satisfies(&id);
    report.verdict = yes_no(holds).to_string();
    match &id {
        Identity::ZeroReduced(w) => describe_zero_side(&mut report, &system, &w.com_word()),
        Identity::Equation(u, v) => {
            if u.com_word() == v.com_word() {
                report.note("both sides are the same commutative word");
            } else if holds {
                describe_zero_side(&mut report, &system, &u.com_word());
                describe_zero_side(&mut report, &system, &v.com_word());
            } else {
                report.note(
                    "the sides differ as commutative words and at least one is not a zero",
                );
            }
        }
    }
    report.finish(started);
    Ok(report)
}

fn describe_zero_side(report: &mut RunReport, system: &ZeroSystem, w: &ComWord) {
    for g in system.generators() {
        if let Some(witness) = zero_consequence(g, w) {
            report.note(format!(
                "{} is zero: instance of the generator {}",
                com_str(w),
                com_str(g)
            ));
            report.witness(format!("{}: {}", com_str(w), witness_str(&witness)));
            return;
        }
    }
    report.note(format!("{} is not a zero of the system", com_str(w)));
}

pub fn decide_holds_in(identity: &str, variety: &str) -> Result<RunReport> {
    let started = Instant::now();
    let id = parse_identity(identity)?;
    let v = parse_variety(variety)?;
    let mut report = RunReport::new("decide holds-in");
    report.input("identity", id.to_string());
    report.input("variety", v.to_string());
    report.verdict = yes_no(holds_in(&id, v)).to_string();
    report.note(format!(
        "decided by the built-in equational description of {}",
        v
    ));
    report.finish(started);
    Ok(report)
}

fn parse_variety(name: &str) -> Result<KnownVariety> {
    Ok(match name {
        "T" => KnownVariety::Trivial,
        "SL" => KnownVariety::Semilattices,
        "LZ" => KnownVariety::LeftZero,
        "RZ" => KnownVariety::RightZero,
        "P" => KnownVariety::P,
        "Pdual" => KnownVariety::PDual,
        "COM" => KnownVariety::Com,
        other => {
            let exponent = other
                .strip_prefix('A')
                .and_then(|digits| digits.parse::<u32>().ok())
                .filter(|&n| n >= 1);
            match exponent {
                Some(n) => KnownVariety::Abelian(n),
                None => bail!(
                    "unknown variety '{}': use T, SL, LZ, RZ, P, Pdual, COM, or A<n>",
                    other
                ),
            }
        }
    })
}

// -- relfree ----------------------------------------------------------------

pub fn relfree(
    basis_path: &Path,
    generators: u32,
    show_classes: bool,
    carrier_cap: Option<u64>,
) -> Result<RunReport> {
    let started = Instant::now();
    let basis = load_basis(basis_path)?;
    let limits = limits_with(carrier_cap);
    let object = match cache::cache_dir() {
        Some(dir) => {
            let key = cache::cache_key(&basis, generators);
            match cache::load(&dir, &key, generators, &limits) {
                Some(object) => object,
                None => {
                    let object = build_relfree(&basis, generators, &limits)?;
                    cache::store(&dir, &key, &object);
                    object
                }
            }
        }
        None => build_relfree(&basis, generators, &limits)?,
    };
    let mut report = RunReport::new("relfree");
    report.input("basis", basis_str(&basis));
    report.input("generators", generators.to_string());
    report.verdict = "computed".to_string();
    report.note(format!("one-letter law: {}", object.base().law()));
    report.note(format!("carrier size: {}", object.carrier_size()));
    report.note(format!("classes: {}", object.class_count()));
    match object.zero_class() {
        Some(label) => report.note(format!("absorbing class: {}", label)),
        None => report.note("absorbing class: none"),
    }
    if show_classes {
        let letters: Vec<_> = (1..=generators)
            .map(|i| varlat_core::syntax::Letter::new(i).expect("positive index"))
            .collect();
        for (label, coords) in object.class_representatives().iter().enumerate() {
            let word = coords
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        letters[i].to_string()
                    } else {
                        format!("{}^{}", letters[i], e)
                    }
                })
                .collect::<Vec<_>>()
                .join("");
            let marker = if object.zero_class() == Some(label as u32) {
                " (absorbing)"
            } else {
                ""
            };
            report.witness(format!("class {}: {}{}", label, word, marker));
        }
    }
    report.finish(started);
    Ok(report)
}

// -- classify ---------------------------------------------------------------

pub fn classify_cmd(
    basis_path: &Path,
    property: Option<Property>,
    kmax: Option<u32>,
    carrier_cap: Option<u64>,
) -> Result<RunReport> {
    let started = Instant::now();
    let basis = load_basis(basis_path)?;
    let limits = limits_with(carrier_cap);
    let rank_bound = kmax.unwrap_or_else(|| default_rank_bound(&basis));
    let mut report = RunReport::new("classify");
    report.input("basis", basis_str(&basis));
    report.input("kmax", rank_bound.to_string());
    match property {
        Some(p) => {
            report.input("property", p.to_string());
            let outcome = classify(&basis, p, rank_bound, &limits)?;
            report.verdict = outcome.verdict.to_string();
            report.confidence = outcome.confidence.to_string();
            report.justification = outcome.justification;
            report.witnesses = outcome.witnesses;
            report.undecided = outcome.verdict == Verdict::Unknown;
        }
        None => {
            report.input("property", "all");
            let audit = consistency_audit(&basis, rank_bound, &limits)?;
            report.verdict = audit
                .reports
                .iter()
                .map(|r| format!("{}={}", r.property, r.verdict))
                .collect::<Vec<_>>()
                .join(", ");
            report.confidence = audit
                .reports
                .iter()
                .find(|r| r.confidence != varlat_core::classify::Confidence::Exact)
                .map(|r| r.confidence.to_string())
                .unwrap_or_else(|| "exact".to_string());
            for sub in &audit.reports {
                report.note(format!(
                    "{}: {} ({})",
                    sub.property, sub.verdict, sub.confidence
                ));
                for line in &sub.justification {
                    report.note(format!("  {}", line));
                }
                for line in &sub.witnesses {
                    report.witness(format!("{}: {}", sub.property, line));
                }
            }
            for violation in &audit.violations {
                report.note(format!("implication violation: {}", violation));
            }
            report.undecided = audit.reports.iter().any(|r| r.verdict == Verdict::Unknown);
        }
    }
    report.finish(started);
    Ok(report)
}

// -- lattice ----------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum AnalyzeProp {
    Modular,
    LowerModular,
    UpperModular,
    Distributive,
    Codistributive,
    Neutral,
}

impl AnalyzeProp {
    pub const ALL: [AnalyzeProp; 6] = [
        AnalyzeProp::Modular,
        AnalyzeProp::LowerModular,
        AnalyzeProp::UpperModular,
        AnalyzeProp::Distributive,
        AnalyzeProp::Codistributive,
        AnalyzeProp::Neutral,
    ];

    fn label(self) -> &'static str {
        match self {
            AnalyzeProp::Modular => "modular",
            AnalyzeProp::LowerModular => "lower-modular",
            AnalyzeProp::UpperModular => "upper-modular",
            AnalyzeProp::Distributive => "distributive",
            AnalyzeProp::Codistributive => "codistributive",
            AnalyzeProp::Neutral => "neutral",
        }
    }

    fn witness(self, lattice: &FiniteLattice, x: usize) -> Option<(usize, usize)> {
        match self {
            AnalyzeProp::Modular => lattice.modular_witness(x),
            AnalyzeProp::LowerModular => lattice.lower_modular_witness(x),
            AnalyzeProp::UpperModular => lattice.upper_modular_witness(x),
            AnalyzeProp::Distributive => lattice.distributive_witness(x),
            AnalyzeProp::Codistributive => lattice.codistributive_witness(x),
            AnalyzeProp::Neutral => lattice.neutral_witness(x),
        }
    }
}

fn analyze_elements(
    report: &mut RunReport,
    lattice: &FiniteLattice,
    targets: &[usize],
    props: &[AnalyzeProp],
) -> bool {
    let mut all_hold = true;
    for &x in targets {
        let name = &lattice.names()[x];
        let mut cells = Vec::new();
        for &p in props {
            match p.witness(lattice, x) {
                None => cells.push(format!("{}=yes", p.label())),
                Some((y, z)) => {
                    cells.push(format!("{}=no", p.label()));
                    report.witness(format!(
                        "{} is not {}: y={}, z={}",
                        name,
                        p.label(),
                        lattice.names()[y],
                        lattice.names()[z]
                    ));
                    all_hold = false;
                }
            }
        }
        report.note(format!("{}: {}", name, cells.join(", ")));
    }
    all_hold
}

pub fn lattice_cmd(
    file: &Path,
    props: &[AnalyzeProp],
    element: Option<&str>,
) -> Result<RunReport> {
    let started = Instant::now();
    let lattice = load_lattice(file)?;
    let mut report = RunReport::new("lattice");
    report.input("file", file.display().to_string());
    report.input("elements", lattice.len().to_string());
    let targets: Vec<usize> = match element {
        Some(name) => {
            report.input("element", name);
            vec![lattice.index_of(name)?]
        }
        None => (0..lattice.len()).collect(),
    };
    let all_hold = analyze_elements(&mut report, &lattice, &targets, props);
    report.verdict = if targets.len() == 1 && props.len() == 1 {
        yes_no(all_hold).to_string()
    } else {
        "completed".to_string()
    };
    report.finish(started);
    Ok(report)
}

// -- fic ----------------------------------------------------------------------

pub fn fic_cmd(
    basis_path: Option<&PathBuf>,
    generators: Option<u32>,
    table_path: Option<&PathBuf>,
    carrier_cap: Option<u64>,
) -> Result<RunReport> {
    let started = Instant::now();
    let mut report = RunReport::new("fic");
    let semigroup = match (basis_path, table_path) {
        (Some(path), None) => {
            let basis = load_basis(path)?;
            let k = generators.context("--generators is required with --basis")?;
            let limits = limits_with(carrier_cap);
            let object = build_relfree(&basis, k, &limits)?;
            report.input("basis", basis_str(&basis));
            report.input("generators", k.to_string());
            FiniteSemigroup::new(object.quotient_table())?
        }
        (None, Some(path)) => {
            report.input("table", path.display().to_string());
            FiniteSemigroup::new(load_table(path)?)?
        }
        _ => bail!("pass exactly one of --basis (with --generators) or --table"),
    };
    let (lattice, congruences) = fic_lattice(&semigroup)?;
    report.note(format!("semigroup size: {}", semigroup.size()));
    report.note(format!("fully invariant congruences: {}", congruences.len()));
    analyze_elements(
        &mut report,
        &lattice,
        &(0..lattice.len()).collect::<Vec<_>>(),
        &AnalyzeProp::ALL,
    );
    match zero_class_congruences(&semigroup) {
        Ok(zero_class) => {
            let mut names = Vec::new();
            for congruence in &zero_class {
                let index = congruences
                    .iter()
                    .position(|c| c.labels() == congruence.labels())
                    .context("zero-class congruence missing from the invariant lattice")?;
                names.push(lattice.names()[index].clone());
            }
            if names.is_empty() {
                report.note("zero-class congruences: none");
            } else {
                report.note(format!("zero-class congruences: {}", names.join(", ")));
            }
        }
        Err(varlat_core::fic::FicError::NoZeroElement) => {
            report.note("zero-class congruences: no zero element");
        }
        Err(e) => return Err(e.into()),
    }
    report.verdict = "completed".to_string();
    report.finish(started);
    Ok(report)
}

// -- prooflab -----------------------------------------------------------------

pub fn prooflab_proposition(n: u32, m: u32, variant: QuadrupleVariant) -> Result<RunReport> {
    let started = Instant::now();
    let quad = proposition_words(n, m, variant)?;
    let mut report = RunReport::new("prooflab proposition-words");
    report.input("n", n.to_string());
    report.input("m", m.to_string());
    report.input(
        "variant",
        match variant {
            QuadrupleVariant::Main => "main",
            QuadrupleVariant::Primed => "primed",
        },
    );
    report.verdict = "constructed".to_string();
    report.note(format!("common length: {}", quad.u.len()));
    report.note(format!(
        "aligned (one length, one content): {}",
        quad.aligned()
    ));
    report.note(format!(
        "pairwise inequivalent as commutative words: {}",
        quad.pairwise_inequivalent()
    ));
    let probe = Identity::Equation(quad.u.clone(), quad.s.clone());
    report.note(format!(
        "u = s fails in LZ: {}",
        yes_no(!holds_in(&probe, KnownVariety::LeftZero))
    ));
    report.note(format!(
        "u = s fails in P: {}",
        yes_no(!holds_in(&probe, KnownVariety::P))
    ));
    if variant == QuadrupleVariant::Main {
        // substituting an identity element for y and z is a monoid-context
        // step; the collapsed identity is the commutative law on (x, q)
        let erased = quad
            .u
            .content()
            .into_iter()
            .filter(|l| *l == varlat_core::syntax::Letter::Y || *l == varlat_core::syntax::Letter::Z)
            .collect();
        if let (Some(eu), Some(es)) = (
            monoid_erasure(&quad.u, &erased),
            monoid_erasure(&quad.s, &erased),
        ) {
            report.note(format!(
                "monoid-context erasure of y, z collapses u = s to {} = {}",
                eu, es
            ));
        }
    }
    for (name, word) in [("u", &quad.u), ("v", &quad.v), ("s", &quad.s), ("t", &quad.t)] {
        report.witness(format!("{} = {}", name, word));
    }
    report.finish(started);
    Ok(report)
}

pub fn prooflab_gamma(u: &str, s: &str, bound: u32) -> Result<RunReport> {
    let started = Instant::now();
    let u = com(u)?;
    let s = com(s)?;
    let partition = gamma_partition(&u, &s, bound)?;
    let mut report = RunReport::new("prooflab gamma");
    report.input("u", com_str(&u));
    report.input("s", com_str(&s));
    report.input("bound", bound.to_string());
    report.verdict = if partition.audit.all_passed() {
        "audit passed".to_string()
    } else {
        "audit failed".to_string()
    };
    report.note(format!("universe size: {}", partition.universe.len()));
    report.note(format!("sink size: {}", partition.sink_size()));
    report.note(format!("classes: {}", partition.class_count));
    report.note(format!("pair classes: {}", partition.pair_classes.len()));
    report.note(format!(
        "right multiplication keeps related words related: {}",
        partition.audit.right_multiplication
    ));
    report.note(format!(
        "substitutions inside the universe keep pairs together: {}",
        partition.audit.substitution
    ));
    report.note(format!(
        "pair classes are disjoint and avoid the sink: {}",
        partition.audit.disjoint
    ));
    for &(a, b) in &partition.pair_classes {
        report.witness(format!(
            "pair: {} ~ {}",
            com_str(&partition.universe[a]),
            com_str(&partition.universe[b])
        ));
    }
    report.finish(started);
    Ok(report)
}

pub fn prooflab_corollary(w1: &str, w2: &str) -> Result<RunReport> {
    let started = Instant::now();
    let w1: Word = parse_word(w1)?;
    let w2: Word = parse_word(w2)?;
    let outcome = corollary_words(&w1, &w2)?;
    let mut report = RunReport::new("prooflab corollary");
    report.input("w1", w1.to_string());
    report.input("w2", w2.to_string());
    report.verdict = "constructed".to_string();
    report.note(format!(
        "first differing position: {} (letters {} and {})",
        outcome.position, outcome.left_letter, outcome.right_letter
    ));
    let quad = &outcome.quadruple;
    let unbalanced = quad.u.parikh() != quad.s.parikh();
    report.note(format!("u = s is unbalanced: {}", yes_no(unbalanced)));
    for (name, word) in [("u", &quad.u), ("v", &quad.v), ("s", &quad.s), ("t", &quad.t)] {
        report.witness(format!("{} = {}", name, word));
    }
    report.finish(started);
    Ok(report)
}

pub fn prooflab_key_lemma(
    basis_path: &Path,
    u: &str,
    v: &str,
    s: &str,
    t: &str,
    carrier_cap: Option<u64>,
) -> Result<RunReport> {
    let started = Instant::now();
    let basis = load_basis(basis_path)?;
    let words: Vec<Word> = [u, v, s, t]
        .iter()
        .map(|text| parse_word(text).map_err(Into::into))
        .collect::<Result<_>>()?;
    let limits = limits_with(carrier_cap);
    let holds = key_instance_holds(&basis, &words[0], &words[1], &words[2], &words[3], &limits)?;
    let mut report = RunReport::new("prooflab key-lemma");
    report.input("basis", basis_str(&basis));
    report.input("u", words[0].to_string());
    report.input("v", words[1].to_string());
    report.input("s", words[2].to_string());
    report.input("t", words[3].to_string());
    report.verdict = yes_no(holds).to_string();
    if holds {
        report.note("the probe identity u = s holds in the variety");
    } else {
        report.note("u = v and s = t hold but u = s fails");
        report.note("the variety is neither a modular nor a lower-modular element");
        report.witness(format!("{} = {}", words[0], words[2]));
    }
    report.finish(started);
    Ok(report)
}

// -- audit --------------------------------------------------------------------

pub fn audit_cmd(
    basis_paths: &[PathBuf],
    kmax: Option<u32>,
    carrier_cap: Option<u64>,
) -> Result<RunReport> {
    let started = Instant::now();
    let limits = limits_with(carrier_cap);
    let mut report = RunReport::new("audit");
    report.input("bases", basis_paths.len().to_string());
    let mut total_violations = 0usize;
    let mut undecided = false;
    for path in basis_paths {
        let basis = load_basis(path)?;
        let rank_bound = kmax.unwrap_or_else(|| default_rank_bound(&basis));
        let audit = consistency_audit(&basis, rank_bound, &limits)?;
        let summary = audit
            .reports
            .iter()
            .map(|r| format!("{}={}", r.property, r.verdict))
            .collect::<Vec<_>>()
            .join(", ");
        report.note(format!("{}: {}", path.display(), summary));
        undecided |= audit.reports.iter().any(|r| r.verdict == Verdict::Unknown);
        for violation in &audit.violations {
            report.witness(format!("{}: {}", path.display(), violation));
            total_violations += 1;
        }
    }
    report.verdict = if total_violations == 0 {
        "consistent".to_string()
    } else {
        "violations found".to_string()
    };
    if undecided {
        report.note("some verdicts are unknown; implications were checked on definite verdicts only");
    }
    report.finish(started);
    Ok(report)
}
