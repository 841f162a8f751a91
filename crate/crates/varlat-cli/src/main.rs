//! `varlat` — decision procedures for identities in commutative semigroup
//! varieties, classification of such varieties as special elements of
//! their lattice, and exhaustive special-element analysis of finite
//! lattices. Exit code 0 means every reported verdict is definite, 2 means
//! at least one verdict is unknown, 1 means the command itself failed.

mod cache;
mod commands;
mod files;
mod report;

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use varlat_core::classify::Property;
use varlat_core::prooflab::QuadrupleVariant;

use commands::AnalyzeProp;
use report::RunReport;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PropertyArg {
    /// Lower-modular element.
    Lmod,
    /// Modular element.
    Mod,
    /// Upper-modular element.
    Umod,
    /// Neutral element.
    Neutral,
    /// All four properties plus their implication cross-check.
    All,
}

impl PropertyArg {
    fn to_property(self) -> Option<Property> {
        match self {
            PropertyArg::Lmod => Some(Property::LowerModular),
            PropertyArg::Mod => Some(Property::Modular),
            PropertyArg::Umod => Some(Property::UpperModular),
            PropertyArg::Neutral => Some(Property::Neutral),
            PropertyArg::All => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AnalyzeArg {
    All,
    Modular,
    LowerModular,
    UpperModular,
    Distributive,
    Codistributive,
    Neutral,
}

impl AnalyzeArg {
    fn props(self) -> Vec<AnalyzeProp> {
        match self {
            AnalyzeArg::All => AnalyzeProp::ALL.to_vec(),
            AnalyzeArg::Modular => vec![AnalyzeProp::Modular],
            AnalyzeArg::LowerModular => vec![AnalyzeProp::LowerModular],
            AnalyzeArg::UpperModular => vec![AnalyzeProp::UpperModular],
            AnalyzeArg::Distributive => vec![AnalyzeProp::Distributive],
            AnalyzeArg::Codistributive => vec![AnalyzeProp::Codistributive],
            AnalyzeArg::Neutral => vec![AnalyzeProp::Neutral],
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Main,
    Primed,
}

impl VariantArg {
    fn to_variant(self) -> QuadrupleVariant {
        match self {
            VariantArg::Main => QuadrupleVariant::Main,
            VariantArg::Primed => QuadrupleVariant::Primed,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "varlat",
    version,
    about = "Decision procedures for commutative semigroup varieties and special elements of finite lattices"
)]
struct Cli {
    /// Report rendering: human-readable text or a JSON document.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a single deduction question.
    Decide {
        #[command(subcommand)]
        question: Decide,
    },
    /// Classify the variety of a basis file as a lattice element.
    Classify {
        /// Basis file: one identity per line, `#` comments, an optional
        /// `commutative` directive.
        #[arg(long)]
        basis: PathBuf,
        #[arg(long, value_enum)]
        property: PropertyArg,
        /// Largest generator count used for join comparisons.
        #[arg(long)]
        kmax: Option<u32>,
        /// Carrier-size limit for free objects.
        #[arg(long)]
        carrier_cap: Option<u64>,
    },
    /// Build a relatively free object on k generators.
    Relfree {
        #[arg(long)]
        basis: PathBuf,
        #[arg(long)]
        generators: u32,
        /// Print one representative per class.
        #[arg(long)]
        show_classes: bool,
        #[arg(long)]
        carrier_cap: Option<u64>,
    },
    /// Analyze special elements of a finite lattice file.
    Lattice {
        /// Lattice file: an `elements:` line, then `cover: a < b` lines.
        #[arg(long)]
        file: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        analyze: AnalyzeArg,
        /// Restrict the analysis to one named element.
        #[arg(long)]
        element: Option<String>,
    },
    /// Fully invariant congruence lattice of a finite semigroup.
    Fic {
        /// Build the semigroup as a relatively free object of this basis.
        #[arg(long, conflicts_with = "table", requires = "generators")]
        basis: Option<PathBuf>,
        #[arg(long, requires = "basis")]
        generators: Option<u32>,
        /// Cayley table file: one row of 0-based indices per line.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        carrier_cap: Option<u64>,
    },
    /// Word families and partitions used by the falsification probes.
    Prooflab {
        #[command(subcommand)]
        task: Prooflab,
    },
    /// Cross-check classifier implications over basis files.
    Audit {
        /// Basis files to audit (repeatable).
        #[arg(long, required = true)]
        basis: Vec<PathBuf>,
        #[arg(long)]
        kmax: Option<u32>,
        #[arg(long)]
        carrier_cap: Option<u64>,
    },
}

#[derive(Subcommand)]
enum Decide {
    /// Is `--to = 0` a consequence of `--from = 0` under commutativity?
    ZeroConsequence {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Does an identity hold in commutativity plus the given zero words?
    ZrHolds {
        /// Comma-separated words, each read as `word = 0`.
        #[arg(long)]
        zeros: String,
        #[arg(long)]
        identity: String,
    },
    /// Does an identity hold in a named variety (T, SL, LZ, RZ, P, Pdual,
    /// COM, A<n>)?
    HoldsIn {
        #[arg(long)]
        identity: String,
        #[arg(long)]
        variety: String,
    },
}

#[derive(Subcommand)]
enum Prooflab {
    /// The parametric four-word family (u, v, s, t).
    PropositionWords {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum)]
        variant: VariantArg,
    },
    /// Build and audit the truncated pair partition of two words.
    Gamma {
        #[arg(long)]
        u: String,
        #[arg(long)]
        s: String,
        /// Universe length bound; must exceed the word length.
        #[arg(long)]
        bound: u32,
    },
    /// The squared-prefix trick for unbalanced consequences.
    Corollary {
        #[arg(long)]
        w1: String,
        #[arg(long)]
        w2: String,
    },
    /// Probe whether u = s follows from u = v and s = t in a variety.
    KeyLemma {
        #[arg(long)]
        basis: PathBuf,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        #[arg(long)]
        s: String,
        #[arg(long)]
        t: String,
        #[arg(long)]
        carrier_cap: Option<u64>,
    },
}

fn run(cli: &Cli) -> anyhow::Result<RunReport> {
    match &cli.command {
        Command::Decide { question } => match question {
            Decide::ZeroConsequence { from, to } => commands::decide_zero_consequence(from, to),
            Decide::ZrHolds { zeros, identity } => commands::decide_zr_holds(zeros, identity),
            Decide::HoldsIn { identity, variety } => commands::decide_holds_in(identity, variety),
        },
        Command::Classify {
            basis,
            property,
            kmax,
            carrier_cap,
        } => commands::classify_cmd(basis, property.to_property(), *kmax, *carrier_cap),
        Command::Relfree {
            basis,
            generators,
            show_classes,
            carrier_cap,
        } => commands::relfree(basis, *generators, *show_classes, *carrier_cap),
        Command::Lattice {
            file,
            analyze,
            element,
        } => commands::lattice_cmd(file, &analyze.props(), element.as_deref()),
        Command::Fic {
            basis,
            generators,
            table,
            carrier_cap,
        } => commands::fic_cmd(basis.as_ref(), *generators, table.as_ref(), *carrier_cap),
        Command::Prooflab { task } => match task {
            Prooflab::PropositionWords { n, m, variant } => {
                commands::prooflab_proposition(*n, *m, variant.to_variant())
            }
            Prooflab::Gamma { u, s, bound } => commands::prooflab_gamma(u, s, *bound),
            Prooflab::Corollary { w1, w2 } => commands::prooflab_corollary(w1, w2),
            Prooflab::KeyLemma {
                basis,
                u,
                v,
                s,
                t,
                carrier_cap,
            } => commands::prooflab_key_lemma(basis, u, v, s, t, *carrier_cap),
        },
        Command::Audit {
            basis,
            kmax,
            carrier_cap,
        } => commands::audit_cmd(basis, *kmax, *carrier_cap),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Text => print!("{}", report.render_text()),
                Format::Json => print!("{}", report.render_json()),
            }
            std::process::exit(if report.undecided { 2 } else { 0 });
        }
        Err(e) => {
            eprintln!("error: {:#}", e);
            std::process::exit(1);
        }
    }
}
