//! Command-line grammar and dispatch.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rpgroup::catops::{
    classify, coequalizer, cokernel, coproduct, discrete_lift, equalizer, factorize, initial_lift,
    jointly_strongly_epi, kernel, product, pullback, reflect_to_ordgrp, total_lift, Coequalizer, Limit,
};
use rpgroup::splitext::{analyze, enumerate_compatible_cones, is_compatible_cone, protomodular_counterexample};
use rpgroup::{Element, Error, Morphism, Verdict};

use crate::error::{CliError, CliResult};
use crate::report::{group_json, morphism_json, Report};
use crate::workspace::{parse_element, Workspace};

#[derive(Debug, Parser)]
#[command(name = "rpgroup", version, about = "Right-preordered groups: cones, constructions and split extensions")]
pub struct Cli {
    /// Input document; the builtin examples are used when omitted.
    #[arg(long, short, global = true)]
    pub file: Option<PathBuf>,
    /// Search bound for monoid membership (default 512).
    #[arg(long, global = true)]
    pub bound: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,
    /// Seed for the randomized checks of `paper-examples`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Maximum group order for cone enumeration.
    #[arg(long, global = true, default_value_t = 24)]
    pub cap: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate the document and report monotonicity and compatibility.
    Check,
    /// Mono, epi, regular mono, regular epi and iso verdicts.
    Classify { morphism: String },
    /// Both factorizations through the image.
    Factorize { morphism: String },
    /// Limits and colimits.
    Construct {
        #[arg(value_enum)]
        kind: ConstructKind,
        #[arg(required = true)]
        args: Vec<String>,
    },
    /// Initial, discrete or total lifts of a group's carrier.
    Lift {
        #[arg(value_enum)]
        kind: LiftKind,
        group: String,
        /// Family of morphisms out of the group (initial lifts only).
        morphisms: Vec<String>,
    },
    /// Reflection into two-sided preordered groups.
    Reflect { group: String },
    /// Protomodular, Mal'tsev and strongly unital object tests.
    ObjectCheck { group: String },
    /// Split extension analysis.
    Splitext {
        #[command(subcommand)]
        action: SplitCommand,
    },
    /// Whether a family with a common target is jointly strongly epimorphic.
    JointlyEpi {
        #[arg(required = true)]
        morphisms: Vec<String>,
    },
    /// Run the bundled example scenarios and report pass or fail.
    PaperExamples,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstructKind {
    Product,
    Coproduct,
    Equalizer,
    Pullback,
    Kernel,
    Coequalizer,
    Cokernel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LiftKind {
    Initial,
    Discrete,
    Total,
}

#[derive(Debug, Subcommand)]
pub enum SplitCommand {
    Analyze { group: String },
    Enumerate { group: String },
    /// The non-strong point over `group` built from a cone element.
    Counterexample { group: String, element: String },
}

pub struct Options {
    pub seed: u64,
    pub cap: usize,
}

pub fn load(cli: &Cli) -> CliResult<Workspace> {
    match &cli.file {
        Some(p) => {
            let src = std::fs::read_to_string(p).map_err(|source| CliError::Io {
                path: p.display().to_string(),
                source,
            })?;
            Workspace::parse(&src, cli.bound)
        }
        None => Workspace::builtin(cli.bound),
    }
}

/// Runs a command; unsupported constructions become a report with an
/// `unsupported` object rather than an error.
pub fn run(ws: &Workspace, command: &Command, opts: &Options) -> CliResult<Report> {
    match dispatch(ws, command, opts) {
        Err(CliError::Engine(Error::Unsupported(msg))) => {
            let mut r = Report::new(command_name(command));
            r.object("unsupported", json!(msg));
            r.failed = true;
            Ok(r)
        }
        other => other,
    }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Check => "check".into(),
        Command::Classify { .. } => "classify".into(),
        Command::Factorize { .. } => "factorize".into(),
        Command::Construct { kind, .. } => format!("construct {}", kind_name(*kind)),
        Command::Lift { kind, .. } => format!("lift {kind:?}").to_lowercase(),
        Command::Reflect { .. } => "reflect".into(),
        Command::ObjectCheck { .. } => "object-check".into(),
        Command::Splitext { action } => match action {
            SplitCommand::Analyze { .. } => "splitext analyze".into(),
            SplitCommand::Enumerate { .. } => "splitext enumerate".into(),
            SplitCommand::Counterexample { .. } => "splitext counterexample".into(),
        },
        Command::JointlyEpi { .. } => "jointly-epi".into(),
        Command::PaperExamples => "paper-examples".into(),
    }
}

fn kind_name(k: ConstructKind) -> &'static str {
    match k {
        ConstructKind::Product => "product",
        ConstructKind::Coproduct => "coproduct",
        ConstructKind::Equalizer => "equalizer",
        ConstructKind::Pullback => "pullback",
        ConstructKind::Kernel => "kernel",
        ConstructKind::Coequalizer => "coequalizer",
        ConstructKind::Cokernel => "cokernel",
    }
}

fn dispatch(ws: &Workspace, command: &Command, opts: &Options) -> CliResult<Report> {
    let mut r = Report::new(command_name(command));
    r.input("bound", ws.bound);
    match command {
        Command::Check => check(ws, &mut r),
        Command::Classify { morphism } => {
            let f = ws.morphism(morphism)?;
            r.input("morphism", morphism);
            r.object("morphism", morphism_json(f));
            classify_into(&mut r, "", f);
        }
        Command::Factorize { morphism } => {
            let f = ws.morphism(morphism)?;
            r.input("morphism", morphism);
            let fs = factorize(f)?;
            for (tag, fac) in [("epi_regmono", &fs.epi_regmono), ("regepi_mono", &fs.regepi_mono)] {
                r.verdict(format!("{tag}.composes"), &composes(&fac.e, &fac.m, f));
                r.object(format!("{tag}.middle"), group_json(&fac.middle));
                let (ce, cm) = (classify(&fac.e), classify(&fac.m));
                if tag == "epi_regmono" {
                    r.verdict(format!("{tag}.e.epi"), &ce.epi);
                    r.verdict(format!("{tag}.m.regular_mono"), &cm.regular_mono);
                } else {
                    r.verdict(format!("{tag}.e.regular_epi"), &ce.regular_epi);
                    r.verdict(format!("{tag}.m.mono"), &cm.mono);
                }
            }
        }
        Command::Construct { kind, args } => construct(ws, &mut r, *kind, args)?,
        Command::Lift { kind, group, morphisms } => {
            let g = ws.group(group)?;
            r.input("group", group);
            let lifted = match kind {
                LiftKind::Discrete => discrete_lift(g.carrier()),
                LiftKind::Total => total_lift(g.carrier()),
                LiftKind::Initial => {
                    let fam: Vec<Morphism> = morphisms.iter().map(|m| ws.morphism(m).cloned()).collect::<CliResult<_>>()?;
                    r.input("family", morphisms.join(","));
                    initial_lift(g.carrier(), &fam)?
                }
            };
            r.object("object", group_json(&lifted));
        }
        Command::Reflect { group } => {
            let g = ws.group(group)?;
            r.input("group", group);
            let (refl, unit) = reflect_to_ordgrp(g)?;
            r.verdict("unit.monotone", unit.monotone());
            r.object("object", group_json(&refl));
        }
        Command::ObjectCheck { group } => {
            let g = ws.group(group)?;
            r.input("group", group);
            let p = g.object_properties();
            r.verdict("group_cone", &p.group_cone);
            r.verdict("protomodular", &p.protomodular);
            r.verdict("malcev", &p.malcev);
            r.verdict("strongly_unital", &p.strongly_unital);
            r.object("group", group_json(g));
        }
        Command::Splitext { action } => splitext(ws, &mut r, action, opts)?,
        Command::JointlyEpi { morphisms } => {
            let fam: Vec<Morphism> = morphisms.iter().map(|m| ws.morphism(m).cloned()).collect::<CliResult<_>>()?;
            r.input("family", morphisms.join(","));
            r.verdict("jointly_strongly_epi", &jointly_strongly_epi(&fam)?);
        }
        Command::PaperExamples => {
            r = crate::bundle::paper_examples(ws, opts.seed)?;
        }
    }
    Ok(r)
}

fn check(ws: &Workspace, r: &mut Report) {
    for (name, g) in &ws.groups {
        r.object(format!("group.{name}"), group_json(g));
    }
    for (name, f) in &ws.morphisms {
        r.verdict(format!("morphism.{name}.monotone"), f.monotone());
        if f.monotone().is_no() {
            r.failed = true;
        }
    }
    for (name, s) in &ws.semidirect {
        let v = is_compatible_cone(s, &s.cone());
        if v.is_no() {
            r.failed = true;
        }
        r.verdict(format!("group.{name}.compatible"), &v);
    }
}

pub fn classify_into(r: &mut Report, prefix: &str, f: &Morphism) {
    let c = classify(f);
    r.verdict(format!("{prefix}monotone"), f.monotone());
    r.verdict(format!("{prefix}mono"), &c.mono);
    r.verdict(format!("{prefix}epi"), &c.epi);
    r.verdict(format!("{prefix}regular_mono"), &c.regular_mono);
    r.verdict(format!("{prefix}regular_epi"), &c.regular_epi);
    r.verdict(format!("{prefix}iso"), &c.iso);
}

/// `m ∘ e = f` on every element of a finite source, otherwise on generators.
pub fn composes(e: &Morphism, m: &Morphism, f: &Morphism) -> Verdict {
    let c = f.source().carrier();
    let probe = c.elements(4096).or_else(|| c.group_generators()).unwrap_or_default();
    for x in probe {
        if m.apply(&e.apply(&x)) != f.apply(&x) {
            return Verdict::no().with_witness(vec![x]);
        }
    }
    Verdict::yes()
}

fn limit_json(l: &Limit) -> Value {
    json!({
        "object": group_json(&l.object),
        "maps": l.maps.iter().map(|m| m.map().describe()).collect::<Vec<_>>(),
    })
}

fn coeq_into(r: &mut Report, c: &Coequalizer) {
    r.verdict("cone_preserved", &c.cone_preserved);
    r.object("object", group_json(&c.object));
    r.object("projection", json!(c.projection.map().describe()));
    if let Some(n) = &c.note {
        r.object("note", json!(n));
    }
}

fn construct(ws: &Workspace, r: &mut Report, kind: ConstructKind, args: &[String]) -> CliResult<()> {
    let arity = match kind {
        ConstructKind::Kernel | ConstructKind::Cokernel => 1,
        _ => 2,
    };
    if args.len() != arity {
        return Err(CliError::Usage(format!("{} takes {arity} argument(s)", kind_name(kind))));
    }
    r.input("args", args.join(","));
    match kind {
        ConstructKind::Product | ConstructKind::Coproduct => {
            let (g, h) = (ws.group(&args[0])?, ws.group(&args[1])?);
            let l = if kind == ConstructKind::Product { product(g, h)? } else { coproduct(g, h)? };
            r.object("limit", limit_json(&l));
        }
        ConstructKind::Equalizer | ConstructKind::Pullback | ConstructKind::Kernel => {
            let f = ws.morphism(&args[0])?;
            let l = match kind {
                ConstructKind::Kernel => kernel(f)?,
                ConstructKind::Equalizer => equalizer(f, ws.morphism(&args[1])?)?,
                _ => pullback(f, ws.morphism(&args[1])?)?,
            };
            r.object("limit", limit_json(&l));
        }
        ConstructKind::Coequalizer => {
            let c = coequalizer(ws.morphism(&args[0])?, ws.morphism(&args[1])?)?;
            coeq_into(r, &c);
        }
        ConstructKind::Cokernel => {
            let c = cokernel(ws.morphism(&args[0])?)?;
            coeq_into(r, &c);
        }
    }
    Ok(())
}

fn splitext(ws: &Workspace, r: &mut Report, action: &SplitCommand, opts: &Options) -> CliResult<()> {
    match action {
        SplitCommand::Analyze { group } => {
            let s = ws.split(group)?;
            r.input("group", group);
            let a = analyze(s, opts.cap);
            r.verdict("condition_iii", &a.condition_iii);
            r.verdict("lex_compatible", &a.lex_compatible);
            r.verdict("lex_cross_check", &a.lex_cross_check);
            r.verdict("prod_compatible", &a.prod_compatible);
            r.verdict("exists_compatible", &a.exists_compatible);
            r.verdict("two_sided_obstruction", &a.two_sided_obstruction);
            r.verdict("cone_compatible", &is_compatible_cone(s, &s.cone()));
            r.object(
                "invertible_part",
                json!({
                    "generators": a.invertible_part.generators.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "equivalent_to_zero": a.invertible_part.equivalent_to_zero.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "exact": a.invertible_part.exact.as_str(),
                }),
            );
            r.object("reference_cone", json!(a.reference_cone));
            if let Some(cones) = &a.enumerated_cones {
                r.object("enumerated_cones", json!(cones.len().to_string()));
            }
        }
        SplitCommand::Enumerate { group } => {
            let s = ws.split(group)?;
            r.input("group", group);
            r.input("cap", opts.cap);
            let (model, cones) = enumerate_compatible_cones(s, opts.cap)?;
            let listed: Vec<Vec<String>> = cones
                .iter()
                .map(|c| c.iter().map(|&i| model.elements[i].to_string()).collect())
                .collect();
            r.object("count", json!(cones.len().to_string()));
            r.object("cones", json!(listed));
        }
        SplitCommand::Counterexample { group, element } => {
            let g = ws.group(group)?;
            let b: Element = parse_element(g.carrier(), element)?;
            r.input("group", group);
            r.input("element", &b);
            let rep = protomodular_counterexample(g, &b)?;
            r.verdict(format!("{} in P", rep.candidate), &Verdict::new(rep.membership));
            r.verdict("strong_point", &rep.strong);
            r.object("object", group_json(&rep.object));
        }
    }
    Ok(())
}
