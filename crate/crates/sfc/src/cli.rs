//! Argument parsing and subcommand dispatch.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sfc_core::automata::{compile_str, Alphabet, Dfa};
use sfc_core::covering::{is_coverable, CoverVerdict};
use sfc_core::ltl::{compare_sampled, eval_positions, parse_ltl};
use sfc_core::membership::{sf_membership, Evidence};
use sfc_core::monoid::{syntactic_morphism, Morphism};
use sfc_core::oracles::{c_orbit, c_pairs, group_kernel, ClassKind, ClassSelector, FinitePrevariety};
use sfc_core::sd::{
    min_sync_delay, parse_sd, prefix_code_violation, sync_delay_witness, validate_sd_expression, PrefixViolation,
    SdOutcome, SdViolation, SdViolationKind,
};
use sfc_core::semiring::{bits, PowersetSemiring};
use sfc_core::Config;

use crate::config::load_config;
use crate::formats::{dfa_from_json, dfa_to_json, morphism_from_json, morphism_to_json, powerset_semiring_to_json, read_json};
use crate::{CliError, Result};

/// Largest monoid whose powerset semiring `monoid --powerset` tabulates.
const POWERSET_PRINT_MAX: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "sfc", version, about = "Membership, separation and covering for star-free closures")]
pub struct Cli {
    /// Symbols of the alphabet, in order (e.g. `ab`).
    #[arg(long, global = true)]
    alphabet: Option<String>,
    /// `key = value` file overriding the default caps.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Include saturation traces in covering output.
    #[arg(long, global = true)]
    trace: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct LangArgs {
    /// Language as a regular expression.
    #[arg(long, conflicts_with = "dfa", required_unless_present = "dfa")]
    lang: Option<String>,
    /// Language as a DFA JSON file.
    #[arg(long)]
    dfa: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MorphismArgs {
    /// Morphism JSON file.
    #[arg(long, conflicts_with_all = ["lang", "dfa"], required_unless_present_any = ["lang", "dfa"])]
    morphism: Option<PathBuf>,
    /// Use the syntactic morphism of this regular expression.
    #[arg(long, conflicts_with = "dfa")]
    lang: Option<String>,
    /// Use the syntactic morphism of this DFA JSON file.
    #[arg(long)]
    dfa: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compile a regular expression to its minimal DFA.
    Regex { regex: String },
    /// Syntactic morphism of a language.
    Monoid {
        #[command(flatten)]
        lang: LangArgs,
        /// Also tabulate the powerset semiring of the monoid.
        #[arg(long)]
        powerset: bool,
    },
    /// Kernel of a morphism for a class.
    Kernel {
        #[arg(long)]
        class: String,
        #[command(flatten)]
        input: MorphismArgs,
    },
    /// Orbits of the idempotents of a morphism for a finite class.
    Orbits {
        #[arg(long)]
        class: String,
        #[command(flatten)]
        input: MorphismArgs,
    },
    /// Decide whether a language belongs to SF(C).
    Membership {
        #[arg(long)]
        class: String,
        #[command(flatten)]
        lang: LangArgs,
    },
    /// Decide whether two languages are SF(C)-separable.
    Separate {
        #[arg(long)]
        class: String,
        first: String,
        second: String,
    },
    /// Decide whether the first language has an SF(C)-cover separated from
    /// the others.
    Cover {
        #[arg(long)]
        class: String,
        #[arg(required = true, num_args = 2..)]
        langs: Vec<String>,
    },
    /// Prefix codes, synchronization delay and SD expressions.
    Sd {
        #[command(subcommand)]
        command: SdCommand,
    },
    /// Temporal formulas with language-parameterized modalities.
    Ltl {
        #[command(subcommand)]
        command: LtlCommand,
    },
}

#[derive(Debug, Subcommand)]
enum SdCommand {
    /// Check every side condition of an SD expression.
    Validate {
        file: PathBuf,
        #[arg(long)]
        class: String,
    },
    /// Least synchronization delay of a prefix code.
    Delay {
        regex: String,
        #[arg(long)]
        dmax: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
enum LtlCommand {
    /// Evaluate a formula on a word.
    Eval {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Compare a formula with a language on all short words.
    Compare {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        lang: String,
        #[arg(long, default_value_t = 8)]
        maxlen: usize,
    },
}

struct Ctx {
    alphabet: Option<Alphabet>,
    cfg: Config,
}

impl Ctx {
    fn alphabet(&self) -> Result<&Alphabet> {
        self.alphabet.as_ref().ok_or_else(|| CliError::input("--alphabet is required here"))
    }

    fn regex(&self, text: &str) -> Result<Dfa> {
        Ok(compile_str(text, self.alphabet()?)?)
    }

    fn language(&self, args: &LangArgs) -> Result<Dfa> {
        match (&args.lang, &args.dfa) {
            (Some(r), _) => self.regex(r),
            (None, Some(p)) => {
                let d = dfa_from_json(&read_json(p)?)?;
                match &self.alphabet {
                    Some(a) if a != d.alphabet() => Err(CliError::input("DFA alphabet differs from --alphabet")),
                    _ => Ok(d),
                }
            }
            (None, None) => Err(CliError::input("a language is required")),
        }
    }

    fn morphism(&self, args: &MorphismArgs) -> Result<Morphism> {
        match &args.morphism {
            Some(p) => morphism_from_json(&read_json(p)?, self.alphabet.as_ref()),
            None => {
                let lang = LangArgs { lang: args.lang.clone(), dfa: args.dfa.clone() };
                Ok(syntactic_morphism(&self.language(&lang)?, self.cfg.monoid_cap)?.morphism)
            }
        }
    }

    fn class(&self, text: &str) -> Result<ClassSelector> {
        Ok(match text {
            "st" => ClassSelector::St,
            "mod" => ClassSelector::Mod,
            "amt" => ClassSelector::Amt,
            "gr" => ClassSelector::Gr,
            _ => match text.strip_prefix("finite:") {
                Some(path) => {
                    let eta = morphism_from_json(&read_json(Path::new(path))?, self.alphabet.as_ref())?;
                    ClassSelector::Finite(FinitePrevariety::new(eta))
                }
                None => return Err(CliError::input(format!("unknown class {text:?}; expected st, mod, amt, gr or finite:<file>"))),
            },
        })
    }
}

#[derive(Serialize)]
struct Orbit {
    idempotent: usize,
    orbit: Vec<usize>,
}

#[derive(Serialize)]
#[serde(rename_all = "lowercase")]
enum KernelOrOrbits {
    Kernel(Vec<usize>),
    Orbits(Vec<Orbit>),
}

#[derive(Serialize)]
struct TraceJson {
    round: usize,
    rule: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    point: Option<usize>,
    element: Vec<Vec<usize>>,
}

fn orbits_of(c: &FinitePrevariety, alpha: &Morphism) -> Result<Vec<Orbit>> {
    let pairs = c_pairs(c, alpha)?;
    alpha
        .monoid()
        .idempotents()
        .into_iter()
        .filter(|e| alpha.image().contains(e))
        .map(|e| Ok(Orbit { idempotent: e, orbit: c_orbit(&pairs, alpha, e)? }))
        .collect()
}

fn cover_json(v: &CoverVerdict, trace: bool) -> Value {
    let mut out = json!({ "answer": v.answer, "opt_size": v.opt.maximal().len(), "rounds": v.rounds });
    if trace {
        let entries: Vec<TraceJson> = v
            .trace
            .iter()
            .map(|t| TraceJson {
                round: t.round,
                rule: t.rule.name(),
                point: t.point,
                element: t.element.iter().map(|&x| bits(x)).collect(),
            })
            .collect();
        out["opt"] = json!(v.opt.maximal().iter().map(|x| x.iter().map(|&c| bits(c)).collect::<Vec<_>>()).collect::<Vec<_>>());
        out["trace"] = json!(entries);
    }
    out
}

fn prefix_violation_json(v: &PrefixViolation, a: &Alphabet) -> Value {
    match v {
        PrefixViolation::ContainsEmptyWord => json!({ "kind": "contains-empty-word" }),
        PrefixViolation::Prefix { shorter, longer } => {
            json!({ "kind": "prefix", "shorter": a.render(shorter), "longer": a.render(longer) })
        }
    }
}

fn sd_violation_json(v: &SdViolation, a: &Alphabet) -> Value {
    let detail = match &v.kind {
        SdViolationKind::NotInClass => json!({ "kind": "not-in-class" }),
        SdViolationKind::NotDisjoint { word } => json!({ "kind": "not-disjoint", "word": a.render(word) }),
        SdViolationKind::Ambiguous(w) => json!({
            "kind": "ambiguous",
            "word": a.render(&w.word),
            "splits": [w.first, w.second],
        }),
        SdViolationKind::NotPrefixCode(p) => json!({ "kind": "not-prefix-code", "reason": prefix_violation_json(p, a) }),
        SdViolationKind::NoSyncDelay { delay, witness } => json!({
            "kind": "no-sync-delay",
            "delay": delay,
            "u": a.render(&witness.u),
            "v": a.render(&witness.v),
            "w": a.render(&witness.w),
        }),
    };
    json!({ "path": v.path, "node": v.node, "violation": detail })
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn execute(cli: Cli) -> Result<Value> {
    let mut cfg = match &cli.config {
        Some(p) => load_config(p)?,
        None => Config::default(),
    };
    cfg.trace |= cli.trace;
    let alphabet = cli.alphabet.as_deref().map(Alphabet::parse).transpose()?;
    let ctx = Ctx { alphabet, cfg };
    let cfg = &ctx.cfg;
    Ok(match &cli.command {
        Command::Regex { regex } => serde_json::to_value(dfa_to_json(&ctx.regex(regex)?))?,
        Command::Monoid { lang, powerset } => {
            let l = syntactic_morphism(&ctx.language(lang)?, cfg.monoid_cap)?;
            let mut out = serde_json::to_value(morphism_to_json(&l.morphism))?;
            out["accepting"] = json!(l.accepting);
            if *powerset {
                let m = l.morphism.monoid().clone();
                let s = PowersetSemiring::new(m, cfg.powerset_cap.min(POWERSET_PRINT_MAX))?;
                out["powerset"] = serde_json::to_value(powerset_semiring_to_json(&s))?;
            }
            out
        }
        Command::Kernel { class, input } => {
            let alpha = ctx.morphism(input)?;
            let kernel = match ctx.class(class)?.kind(alpha.alphabet())? {
                ClassKind::Group(g) => group_kernel(g, &alpha, cfg)?,
                ClassKind::Finite(c) => c_orbit(&c_pairs(&c, &alpha)?, &alpha, alpha.identity())?,
            };
            json!({ "kernel": kernel })
        }
        Command::Orbits { class, input } => {
            let alpha = ctx.morphism(input)?;
            match ctx.class(class)?.kind(alpha.alphabet())? {
                ClassKind::Finite(c) => json!({ "orbits": orbits_of(&c, &alpha)? }),
                ClassKind::Group(_) => return Err(CliError::input("orbits are computed for st and finite classes; use kernel")),
            }
        }
        Command::Membership { class, lang } => {
            let v = sf_membership(&ctx.class(class)?, &ctx.language(lang)?, cfg)?;
            let evidence = match v.evidence {
                Evidence::Kernel(k) => KernelOrOrbits::Kernel(k),
                Evidence::Orbits(os) => {
                    KernelOrOrbits::Orbits(os.into_iter().map(|(idempotent, orbit)| Orbit { idempotent, orbit }).collect())
                }
            };
            json!({
                "answer": v.answer,
                "witness": v.witness,
                "monoid_size": v.monoid_size,
                "kernel_or_orbits": evidence,
            })
        }
        Command::Separate { class, first, second } => {
            let v = is_coverable(&ctx.class(class)?, &ctx.regex(first)?, &[ctx.regex(second)?], cfg)?;
            cover_json(&v, cfg.trace)
        }
        Command::Cover { class, langs } => {
            let sel = ctx.class(class)?;
            let dfas = langs.iter().map(|r| ctx.regex(r)).collect::<Result<Vec<_>>>()?;
            cover_json(&is_coverable(&sel, &dfas[0], &dfas[1..], cfg)?, cfg.trace)
        }
        Command::Sd { command: SdCommand::Validate { file, class } } => {
            let a = ctx.alphabet()?;
            let e = parse_sd(&read_text(file)?, a)?;
            match validate_sd_expression(&e, a, &ctx.class(class)?, cfg)? {
                SdOutcome::Valid(d) => json!({ "valid": true, "dfa": dfa_to_json(&d) }),
                SdOutcome::Invalid(vs) => json!({
                    "valid": false,
                    "violations": vs.iter().map(|v| sd_violation_json(v, a)).collect::<Vec<_>>(),
                }),
            }
        }
        Command::Sd { command: SdCommand::Delay { regex, dmax } } => {
            let a = ctx.alphabet()?;
            let k = ctx.regex(regex)?;
            let dmax = dmax.unwrap_or(cfg.delay_dmax);
            if dmax == 0 {
                return Err(CliError::input("--dmax must be positive"));
            }
            match prefix_code_violation(&k)? {
                Some(p) => json!({ "prefix_code": false, "reason": prefix_violation_json(&p, a) }),
                None => {
                    let delay = min_sync_delay(&k, dmax)?;
                    let mut out = json!({ "prefix_code": true, "dmax": dmax, "delay": delay });
                    let refuted = match delay {
                        Some(1) => None,
                        Some(d) => Some(d - 1),
                        None => Some(dmax),
                    };
                    if let Some(d) = refuted {
                        let w = sync_delay_witness(&k, d)?.expect("delay refuted by search");
                        out["witness"] = json!({ "delay": d, "u": a.render(&w.u), "v": a.render(&w.v), "w": a.render(&w.w) });
                    }
                    out
                }
            }
        }
        Command::Ltl { command: LtlCommand::Eval { formula, word } } => {
            let a = ctx.alphabet()?;
            let phi = parse_ltl(&read_text(formula)?, a)?;
            let positions = eval_positions(&phi, &a.parse_word(word)?);
            json!({ "answer": positions[0], "positions": positions })
        }
        Command::Ltl { command: LtlCommand::Compare { formula, lang, maxlen } } => {
            let a = ctx.alphabet()?;
            let phi = parse_ltl(&read_text(formula)?, a)?;
            let bad = compare_sampled(&phi, &ctx.regex(lang)?, *maxlen);
            json!({
                "agree": bad.is_empty(),
                "checked": (0..=*maxlen as u32).map(|n| a.len().pow(n)).sum::<usize>(),
                "mismatches": bad.iter().map(|w| a.render(w)).collect::<Vec<_>>(),
            })
        }
    })
}

/// Runs one invocation and returns the JSON document and the exit code.
pub fn run(cli: Cli) -> (String, u8) {
    match execute(cli) {
        Ok(v) => (v.to_string(), 0),
        Err(e) => (json!({ "error": { "kind": e.kind(), "message": e.to_string() } }).to_string(), e.exit_code()),
    }
}
