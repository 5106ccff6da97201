//! Command-line front end: JSON in, JSON (or DOT) out, stable exit codes.
//!
//! Exit codes: 0 = verdict true / construction succeeded, 1 = verdict false,
//! 2 = invalid input, 3 = cap exceeded. `FIBRIFIER_CAP` overrides the
//! default closure bound.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fibrifier::adjoint;
use fibrifier::cat::FunctorData;
use fibrifier::colim;
use fibrifier::comma::{self, MonadKind, Side};
use fibrifier::corpus::{self, GenConfig};
use fibrifier::dot;
use fibrifier::error::CatError;
use fibrifier::factor::{self, FibBMode};
use fibrifier::fibcheck::{self, ALL_CRITERIA};
use fibrifier::groth::{self, Reflection};
use fibrifier::json::*;

const EXIT_FALSE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "fibrifier", version, about = "Finite-category fibration toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the laws of a category, functor or two-cell diagram document.
    Validate {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        kind: DocKind,
    },
    /// Comma category f/g of two functors with common target.
    Comma { f: PathBuf, g: PathBuf },
    /// Iso-comma f/≅B of a functor.
    IsoComma { f: PathBuf },
    /// One of the slice monads R, L, I at a functor.
    Monad {
        #[arg(value_enum)]
        kind: MonadArg,
        f: PathBuf,
    },
    /// Search a right or left adjoint; prints the adjunction or `none`.
    Adjoint {
        #[arg(value_enum)]
        side: AdjointSide,
        f: PathBuf,
        /// Require every counit component to be an identity (right side).
        #[arg(long)]
        identity_counit: bool,
        /// Require every unit component to be an identity (left side).
        #[arg(long)]
        identity_unit: bool,
    },
    /// Classify a functor; exits 0/1 with the report on stdout.
    Check {
        f: PathBuf,
        #[arg(long, value_enum)]
        class: FunctorClass,
    },
    /// The identee (universal vertical 2-cell) of a functor.
    Identee { f: PathBuf },
    /// The invertee (universal invertible-image 2-cell) of a functor.
    Invertee { f: PathBuf },
    /// Coidentifier of a two-cell diagram (cap-bounded congruence closure).
    Coidentify {
        diagram: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Coinverter of a two-cell diagram (cap-bounded localization).
    Coinvert {
        diagram: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Total category, projection and cleavage of a pseudofunctor.
    Grothendieck { pseudofunctor: PathBuf },
    /// Extract the normalized cleavage of a fibration.
    Cleave {
        f: PathBuf,
        #[arg(long, value_enum, default_value = "fibration")]
        side: SideArg,
    },
    /// Apply a reflection to every fibre of a fibration and reassemble.
    Fibrewise {
        f: PathBuf,
        #[arg(long, conflicts_with = "groupoid")]
        pi0: bool,
        #[arg(long)]
        groupoid: bool,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Comprehensive or groupoid-fibre factorization.
    Factorize {
        f: PathBuf,
        #[arg(long, conflicts_with = "groupoid")]
        comprehensive: bool,
        #[arg(long)]
        groupoid: bool,
        #[arg(long, value_enum, default_value = "fibration")]
        side: SideArg,
        #[arg(long)]
        cap: Option<usize>,
        /// Fibrewise layer: a triangle document {f, g, p} over a base.
        #[arg(long)]
        over: Option<PathBuf>,
        /// Also write a DOT rendering of the factorization here.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Corpus generation and proposition-validation suites.
    Corpus {
        #[command(subcommand)]
        sub: CorpusCmd,
    },
    /// Render a category, functor or factorization document as DOT.
    ExportDot { file: PathBuf },
}

#[derive(Subcommand)]
enum CorpusCmd {
    /// Run a named suite; exit 0 iff every instance passes.
    Run {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        count: usize,
        /// Write the full report as JSON to this path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// List the available suites.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum DocKind {
    Auto,
    Category,
    Functor,
    Nattrans,
}

#[derive(Clone, Copy, ValueEnum)]
enum MonadArg {
    R,
    L,
    I,
}

#[derive(Clone, Copy, ValueEnum)]
enum AdjointSide {
    Right,
    Left,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Fibration,
    Opfibration,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Fibration => Side::Fibration,
            SideArg::Opfibration => Side::Opfibration,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctorClass {
    Fibration,
    Opfibration,
    Isofibration,
    #[value(alias = "street")]
    StreetFibration,
    StreetOpfibration,
    #[value(alias = "discrete")]
    DiscreteFibration,
    DiscreteOpfibration,
    Conservative,
    GroupoidalFibres,
}


fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CatError::CapExceeded { .. } => EXIT_CAP,
                _ => EXIT_INVALID,
            })
        }
    }
}

fn default_cap(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("FIBRIFIER_CAP")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(fibrifier::DEFAULT_CAP)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, CatError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CatError::Invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CatError::Invalid(format!("{}: {e}", path.display())))
}

fn read_functor(path: &PathBuf) -> Result<FunctorData, CatError> {
    let doc: FunctorDoc = read_json(path)?;
    let f = doc.into_functor()?;
    let report = f.source.validate();
    if !report.is_valid() {
        return Err(CatError::Invalid(format!("source category invalid: {report:?}")));
    }
    let report = f.target.validate();
    if !report.is_valid() {
        return Err(CatError::Invalid(format!("target category invalid: {report:?}")));
    }
    let report = f.validate();
    if !report.is_valid() {
        return Err(CatError::Invalid(format!("functor invalid: {report:?}")));
    }
    Ok(f)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CatError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CatError::Invalid(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: serde::Serialize>(out: &Option<PathBuf>, value: &T) -> Result<(), CatError> {
    emit(out, &to_canonical_string(value))
}

fn run(cli: Cli) -> Result<ExitCode, CatError> {
    let out = cli.out.clone();
    match cli.command {
        Command::Validate { file, kind } => {
            let text = fs::read_to_string(&file)
                .map_err(|e| CatError::Invalid(format!("{}: {e}", file.display())))?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| CatError::Invalid(format!("{}: {e}", file.display())))?;
            let report = match kind {
                DocKind::Category => {
                    let doc: CatDoc = serde_json::from_value(value)
                        .map_err(|e| CatError::Invalid(e.to_string()))?;
                    doc.into_cat()?.validate()
                }
                DocKind::Functor => {
                    let doc: FunctorDoc = serde_json::from_value(value)
                        .map_err(|e| CatError::Invalid(e.to_string()))?;
                    let f = doc.into_functor()?;
                    let mut r = f.source.validate();
                    r.merge(f.target.validate());
                    r.merge(f.validate());
                    r
                }
                DocKind::Nattrans => {
                    let doc: DiagramDoc = serde_json::from_value(value)
                        .map_err(|e| CatError::Invalid(e.to_string()))?;
                    doc.into_diagram()?.validate()
                }
                DocKind::Auto => {
                    if value.get("apex").is_some() {
                        let doc: DiagramDoc = serde_json::from_value(value)
                            .map_err(|e| CatError::Invalid(e.to_string()))?;
                        doc.into_diagram()?.validate()
                    } else if value.get("source").is_some() {
                        let doc: FunctorDoc = serde_json::from_value(value)
                            .map_err(|e| CatError::Invalid(e.to_string()))?;
                        let f = doc.into_functor()?;
                        let mut r = f.source.validate();
                        r.merge(f.target.validate());
                        r.merge(f.validate());
                        r
                    } else {
                        let doc: CatDoc = serde_json::from_value(value)
                            .map_err(|e| CatError::Invalid(e.to_string()))?;
                        doc.into_cat()?.validate()
                    }
                }
            };
            emit_json(&out, &report)?;
            Ok(if report.is_valid() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FALSE) })
        }
        Command::Comma { f, g } => {
            let f = read_functor(&f)?;
            let g = read_functor(&g)?;
            let c = comma::comma(&f, &g)?;
            emit_json(&out, &CommaDoc::of(&c))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::IsoComma { f } => {
            let f = read_functor(&f)?;
            let c = comma::iso_comma(&f);
            emit_json(&out, &CommaDoc::of(&c))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Monad { kind, f } => {
            let f = read_functor(&f)?;
            let kind = match kind {
                MonadArg::R => MonadKind::R,
                MonadArg::L => MonadKind::L,
                MonadArg::I => MonadKind::I,
            };
            let inst = comma::monad_on_slice(kind, &f);
            #[derive(serde::Serialize)]
            struct MonadDoc {
                comma: CommaDoc,
                carrier: FunctorDoc,
                unit: FunctorDoc,
                mult: FunctorDoc,
            }
            emit_json(
                &out,
                &MonadDoc {
                    comma: CommaDoc::of(&inst.comma),
                    carrier: FunctorDoc::of(&inst.carrier),
                    unit: FunctorDoc::of(&inst.unit),
                    mult: FunctorDoc::of(&inst.mult),
                },
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Adjoint { side, f, identity_counit, identity_unit } => {
            let f = read_functor(&f)?;
            let found = match side {
                AdjointSide::Right => adjoint::find_right_adjoint(&f, identity_counit),
                AdjointSide::Left => adjoint::find_left_adjoint(&f, identity_unit),
            };
            match found {
                Some(adj) => {
                    emit_json(&out, &AdjunctionDoc::of(&adj))?;
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    emit(&out, "none")?;
                    Ok(ExitCode::from(EXIT_FALSE))
                }
            }
        }
        Command::Check { f, class } => {
            let f = read_functor(&f)?;
            #[derive(serde::Serialize)]
            struct CheckDoc<'a> {
                class: &'a str,
                verdict: bool,
                #[serde(skip_serializing_if = "Option::is_none")]
                report: Option<fibcheck::FibReport>,
            }
            let (name, verdict, report) = match class {
                FunctorClass::Fibration => {
                    let r = fibcheck::is_fibration(&f, &ALL_CRITERIA);
                    if !r.agreement {
                        eprintln!("CRITERIA DISAGREE — this contradicts the equivalence theorem: {r:?}");
                    }
                    ("fibration", r.verdict(), Some(r))
                }
                FunctorClass::Opfibration => {
                    let r = fibcheck::is_opfibration(&f, &ALL_CRITERIA);
                    if !r.agreement {
                        eprintln!("CRITERIA DISAGREE — this contradicts the equivalence theorem: {r:?}");
                    }
                    ("opfibration", r.verdict(), Some(r))
                }
                FunctorClass::Isofibration => ("isofibration", fibcheck::is_isofibration(&f), None),
                FunctorClass::StreetFibration => {
                    ("street-fibration", fibcheck::is_street_fibration(&f), None)
                }
                FunctorClass::StreetOpfibration => {
                    ("street-opfibration", fibcheck::is_street_opfibration(&f), None)
                }
                FunctorClass::DiscreteFibration => {
                    ("discrete-fibration", fibcheck::is_discrete(&f, Side::Fibration), None)
                }
                FunctorClass::DiscreteOpfibration => {
                    ("discrete-opfibration", fibcheck::is_discrete(&f, Side::Opfibration), None)
                }
                FunctorClass::Conservative => ("conservative", fibcheck::is_conservative(&f), None),
                FunctorClass::GroupoidalFibres => {
                    ("groupoidal-fibres", fibcheck::has_groupoidal_fibres(&f), None)
                }
            };
            emit_json(&out, &CheckDoc { class: name, verdict, report })?;
            Ok(if verdict { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FALSE) })
        }
        Command::Identee { f } => {
            let f = read_functor(&f)?;
            emit_json(&out, &DiagramDoc::of(&colim::identee(&f)))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Invertee { f } => {
            let f = read_functor(&f)?;
            emit_json(&out, &DiagramDoc::of(&colim::invertee(&f)))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Coidentify { diagram, cap } => {
            let doc: DiagramDoc = read_json(&diagram)?;
            let d = doc.into_diagram()?;
            let q = colim::coidentifier(&d, default_cap(cap))?;
            emit_json(&out, &QuotientDoc::of(&q))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Coinvert { diagram, cap } => {
            let doc: DiagramDoc = read_json(&diagram)?;
            let d = doc.into_diagram()?;
            let q = colim::coinverter(&d, default_cap(cap))?;
            emit_json(&out, &QuotientDoc::of(&q))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Grothendieck { pseudofunctor } => {
            let doc: PseudoFunctorDoc = read_json(&pseudofunctor)?;
            let p = doc.into_pseudofunctor()?;
            let total = groth::grothendieck_construction(&p)?;
            #[derive(serde::Serialize)]
            struct TotalDoc {
                total: CatDoc,
                proj: FunctorDoc,
                cleavage: CleavageDoc,
            }
            emit_json(
                &out,
                &TotalDoc {
                    total: CatDoc::of(&total.total),
                    proj: FunctorDoc::of(&total.proj),
                    cleavage: CleavageDoc::of(&total.cleavage),
                },
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Cleave { f, side } => {
            let f = read_functor(&f)?;
            let cleavage = match side {
                SideArg::Fibration => fibcheck::extract_cleavage(&f),
                SideArg::Opfibration => fibcheck::extract_opcleavage(&f),
            };
            match cleavage {
                Some(c) => {
                    emit_json(&out, &CleavageDoc::of(&c))?;
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    emit(&out, "none")?;
                    Ok(ExitCode::from(EXIT_FALSE))
                }
            }
        }
        Command::Fibrewise { f, pi0, groupoid, cap } => {
            let f = read_functor(&f)?;
            let cleavage = fibcheck::extract_cleavage(&f).ok_or(CatError::NotAFibration)?;
            let reflection = if groupoid {
                Reflection::Groupoid(default_cap(cap))
            } else {
                let _ = pi0;
                Reflection::Pi0
            };
            let res = groth::fibrewise_apply(&f, &cleavage, reflection)?;
            #[derive(serde::Serialize)]
            struct FibrewiseDoc {
                q: FunctorDoc,
                s: FunctorDoc,
                mid: CatDoc,
            }
            emit_json(
                &out,
                &FibrewiseDoc {
                    q: FunctorDoc::of(&res.q),
                    s: FunctorDoc::of(&res.s),
                    mid: CatDoc::of(&res.mid.total),
                },
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Factorize { f, comprehensive, groupoid, side, cap, over, dot: dot_path } => {
            let cap = default_cap(cap);
            let fac = match over {
                Some(path) => {
                    let doc: FibBDoc = read_json(&path)?;
                    let m = doc.into_fibb()?;
                    let report = m.validate();
                    if !report.is_valid() {
                        return Err(CatError::Invalid(format!("triangle invalid: {report:?}")));
                    }
                    let mode = if groupoid { FibBMode::Coinverter } else { FibBMode::Coidentifier };
                    factor::factor_in_fibb(&m, mode, cap)?
                }
                None => {
                    let f = read_functor(&f)?;
                    if groupoid {
                        factor::groupoid_fibre_factorization(&f, side.into(), cap)?
                    } else {
                        let _ = comprehensive;
                        factor::comprehensive_factorization(&f, side.into())?
                    }
                }
            };
            if let Some(path) = dot_path {
                fs::write(&path, dot::factorization_to_dot(&fac))
                    .map_err(|e| CatError::Invalid(format!("{}: {e}", path.display())))?;
            }
            emit_json(&out, &FactorizationDoc::of(&fac))?;
            Ok(if fac.evidence_holds() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FALSE) })
        }
        Command::Corpus { sub } => match sub {
            CorpusCmd::List => {
                for name in corpus::SUITE_NAMES {
                    println!("{name}");
                }
                Ok(ExitCode::SUCCESS)
            }
            CorpusCmd::Run { suite, seed, count, json } => {
                let cfg = GenConfig { seed, instance_count: count, ..Default::default() };
                let report = corpus::run_suite(&cfg, &suite)?;
                for r in &report.results {
                    println!(
                        "[{}] instance {}: {}",
                        if r.passed { "pass" } else { "FAIL" },
                        r.index,
                        r.detail
                    );
                }
                println!(
                    "suite {}: {}/{} passed",
                    report.suite,
                    report.results.iter().filter(|r| r.passed).count(),
                    report.results.len()
                );
                if let Some(path) = json {
                    fs::write(&path, to_canonical_string(&report))
                        .map_err(|e| CatError::Invalid(format!("{}: {e}", path.display())))?;
                }
                Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FALSE) })
            }
        },
        Command::ExportDot { file } => {
            let text = fs::read_to_string(&file)
                .map_err(|e| CatError::Invalid(format!("{}: {e}", file.display())))?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| CatError::Invalid(format!("{}: {e}", file.display())))?;
            let rendered = if value.get("q").is_some() && value.get("mid").is_some() {
                let doc: FactorizationDoc = serde_json::from_value(value)
                    .map_err(|e| CatError::Invalid(e.to_string()))?;
                let q = doc.q.into_functor()?;
                let s = doc.s.into_functor()?;
                let mid = doc.mid.into_cat()?;
                let fac = factor::FactorizationResult {
                    q: FunctorData { target: mid.clone(), ..q },
                    mid: mid.clone(),
                    s: FunctorData { source: mid, ..s },
                    kind: if doc.kind == "groupoid" {
                        factor::FactorKind::Groupoid
                    } else {
                        factor::FactorKind::Comprehensive
                    },
                    evidence: vec![],
                    over_base: None,
                };
                dot::factorization_to_dot(&fac)
            } else if value.get("source").is_some() {
                let doc: FunctorDoc = serde_json::from_value(value)
                    .map_err(|e| CatError::Invalid(e.to_string()))?;
                dot::functor_to_dot(&doc.into_functor()?)
            } else {
                let doc: CatDoc = serde_json::from_value(value)
                    .map_err(|e| CatError::Invalid(e.to_string()))?;
                let cat = doc.into_cat()?;
                dot::cat_to_dot(&cat)
            };
            emit(&out, rendered.trim_end())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
