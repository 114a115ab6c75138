//! `catcheck`: command-line driver for the verification engine.
//!
//! Exit codes: 0 all checked properties hold, 1 a failure witness was found,
//! 2 inconclusive within the budget, 3 input error, 4 internal inconsistency.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use catcheck_core::axioms::{audit, classify, run_check, Audit, Check, Options, Verdict, Witness};
use catcheck_core::backend::format::parse_algebras;
use catcheck_core::backend::{Backend, Materialized};
use catcheck_core::fincat::parse_category;
use catcheck_core::functor::IndexShape;
use catcheck_core::regress::{pinned, run_suite};
use catcheck_core::report::{
    content_address, load_witness, witness_document, AuditReport, CheckReport, ClassifyReport, FunctorcatReport,
};
use catcheck_core::{Budget, Engine, Error, FinCategory};

#[derive(Parser)]
#[command(name = "catcheck", version, about = "Decide categorical predicates on finite categories")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(clap::Args)]
struct Common {
    /// Concrete backend: finab, fingrp, finptset, finmon, grppair.
    #[arg(long, global = true)]
    backend: Option<Backend>,
    /// Abstract category in the category file format.
    #[arg(long, global = true)]
    category_file: Option<PathBuf>,
    /// Explicit list of algebras in the algebra file format.
    #[arg(long, global = true)]
    algebra_file: Option<PathBuf>,
    /// Largest carrier size materialized by --backend.
    #[arg(long, global = true)]
    bound: Option<usize>,
    /// Keep every labelled copy instead of one object per iso class.
    #[arg(long, global = true)]
    labelled: bool,
    #[arg(long, global = true)]
    budget_objects: Option<usize>,
    #[arg(long, global = true)]
    budget_pairs: Option<usize>,
    #[arg(long, global = true)]
    budget_apexes: Option<usize>,
    #[arg(long, global = true)]
    budget_seconds: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    report: Format,
    /// Keep scanning after the first witness.
    #[arg(long, global = true)]
    all_witnesses: bool,
    /// Write reports and witnesses here, under content-addressed names.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Include elapsed_ms in reports (makes them non-reproducible byte for byte).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SsflVariant {
    Iso,
    Strong,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the ladder: finitely complete, protomodular, homological, semi-abelian.
    Classify {
        /// Use A1' (finite limits and colimits) in place of A1.
        #[arg(long)]
        prime: bool,
    },
    /// Run one check, e.g. A2, condC, ssfl, proto, exact.
    Check {
        name: String,
        #[arg(long, value_enum)]
        ssfl_variant: Option<SsflVariant>,
    },
    /// Run an implication audit: lemma1, critproto, prodsemdir, homolex.
    Audit { name: String },
    /// Build C^I and compare predicates in C^I with their pointwise versions.
    Functorcat {
        #[arg(long)]
        index_shape: Option<IndexShape>,
        #[arg(long)]
        index_file: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Run the pinned regression suite.
    Regress {
        /// Also run FinGroup at bound 8.
        #[arg(long)]
        extended: bool,
    },
    /// Re-verify a stored witness file.
    Verify { file: PathBuf },
}

enum Source {
    Window(Materialized),
    Abstract(FinCategory, String),
}

impl Source {
    fn cat(&self) -> &FinCategory {
        match self {
            Source::Window(m) => &m.cat,
            Source::Abstract(c, _) => c,
        }
    }

    fn label(&self) -> String {
        match self {
            Source::Window(m) => m.label(),
            Source::Abstract(_, l) => l.clone(),
        }
    }

    fn engine(&self, budget: Budget) -> Engine<'_> {
        match self {
            Source::Window(m) => Engine::new(&m.cat, budget).with_ambient(m),
            Source::Abstract(c, _) => Engine::new(c, budget),
        }
    }
}

fn read(path: &Path) -> catcheck_core::Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn file_label(path: &Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

impl Common {
    fn budget(&self) -> Budget {
        let mut b = Budget::default();
        if let Some(v) = self.budget_objects {
            b.max_objects = v;
        }
        if let Some(v) = self.budget_pairs {
            b.max_pairs = v;
        }
        if let Some(v) = self.budget_apexes {
            b.max_apexes = v;
        }
        if let Some(v) = self.budget_seconds {
            b.max_seconds = v;
        }
        b
    }

    /// Canonical description of the category source, with file contents hashed.
    fn source_key(&self) -> catcheck_core::Result<serde_json::Value> {
        Ok(match (&self.backend, &self.category_file, &self.algebra_file) {
            (Some(b), None, None) => json!({"backend": b.key(), "bound": self.bound, "labelled": self.labelled}),
            (None, Some(p), None) => json!({"category_file": content_address(&read(p)?)}),
            (None, None, Some(p)) => json!({"algebra_file": content_address(&read(p)?)}),
            _ => json!(null),
        })
    }

    fn source(&self) -> catcheck_core::Result<Source> {
        match (&self.backend, &self.category_file, &self.algebra_file) {
            (Some(b), None, None) => {
                let bound = self.bound.ok_or_else(|| Error::Invalid("--bound is required with --backend".into()))?;
                Ok(Source::Window(Materialized::new(*b, bound, !self.labelled)?))
            }
            (None, Some(p), None) => {
                let (cat, _, _) = parse_category(&read(p)?)?;
                Ok(Source::Abstract(cat, file_label(p)))
            }
            (None, None, Some(p)) => Ok(Source::Window(Materialized::from_algebra_file(&parse_algebras(&read(p)?)?)?)),
            _ => Err(Error::Invalid("exactly one of --backend, --category-file, --algebra-file is required".into())),
        }
    }
}

/// A rendered report ready to print and store.
struct Rendered {
    verdict: Verdict,
    body: String,
    witnesses: Vec<String>,
}

fn render<T: serde::Serialize>(format: Format, value: &T, text: String) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("reports serialize") + "\n",
        Format::Text => text,
    }
}

fn docs(cat: &FinCategory, ws: &[Witness]) -> Vec<String> {
    ws.iter().map(|w| witness_document(cat, w)).collect()
}

fn elapsed(common: &Common, t: Instant) -> Option<u64> {
    common.timing.then(|| t.elapsed().as_millis() as u64)
}

fn parse_check(name: &str, variant: Option<SsflVariant>) -> catcheck_core::Result<Check> {
    let c: Check = name.parse()?;
    Ok(match (c, variant) {
        (Check::SsflIso | Check::SsflStrong, Some(SsflVariant::Strong)) => Check::SsflStrong,
        (Check::SsflIso | Check::SsflStrong, Some(SsflVariant::Iso)) => Check::SsflIso,
        (c, Some(_)) => return Err(Error::Invalid(format!("--ssfl-variant does not apply to {}", c.key()))),
        (c, None) => c,
    })
}

fn execute(cmd: &Cmd, common: &Common) -> catcheck_core::Result<Rendered> {
    let budget = common.budget();
    let opts = Options { all_witnesses: common.all_witnesses };
    let t = Instant::now();
    if let Cmd::Regress { extended } = cmd {
        let dir = common.out_dir.as_ref().map(|d| d.join("witnesses"));
        let r = run_suite(&pinned(*extended), dir.as_deref(), budget, common.seed)?;
        let verdict = if r.green { Verdict::Holds } else { Verdict::Fails };
        return Ok(Rendered { verdict, body: render(common.report, &r, r.text()), witnesses: vec![] });
    }
    if let Cmd::Verify { file } = cmd {
        let l = load_witness(file, budget)?;
        let verdict = if l.reproduces { Verdict::Holds } else { Verdict::Fails };
        let body = json!({"file": file_label(file), "check": l.check.key(), "reproduces": l.reproduces});
        let text = format!(
            "{}: {} witness {}\n",
            file_label(file),
            l.check.key(),
            if l.reproduces { "reproduces" } else { "does not reproduce" }
        );
        return Ok(Rendered { verdict, body: render(common.report, &body, text), witnesses: vec![] });
    }
    let src = common.source()?;
    let cat = src.cat();
    let label = src.label();
    let e = src.engine(budget);
    e.meter().check_objects(cat.num_objects())?;
    match cmd {
        Cmd::Classify { prime } => {
            let cl = classify(&e, *prime, opts)?;
            let ws: Vec<Witness> = cl.outcomes.iter().flat_map(|o| o.witnesses.clone()).collect();
            let r = ClassifyReport::new(cat, &label, &cl, budget, elapsed(common, t));
            Ok(Rendered { verdict: r.verdict(), body: render(common.report, &r, r.text()), witnesses: docs(cat, &ws) })
        }
        Cmd::Check { name, ssfl_variant } => {
            let check = parse_check(name, *ssfl_variant)?;
            let o = run_check(&e, check, opts)?;
            let r = CheckReport::new(cat, &label, &o, budget, elapsed(common, t));
            Ok(Rendered {
                verdict: o.verdict,
                body: render(common.report, &r, r.text()),
                witnesses: docs(cat, &o.witnesses),
            })
        }
        Cmd::Audit { name } => {
            let which: Audit = name.parse()?;
            let a = audit(&e, which, opts)?;
            let ws: Vec<Witness> = a.outcomes.iter().flat_map(|o| o.witnesses.clone()).collect();
            let r = AuditReport::new(cat, &label, &a, budget, elapsed(common, t));
            Ok(Rendered { verdict: a.verdict, body: render(common.report, &r, r.text()), witnesses: docs(cat, &ws) })
        }
        Cmd::Functorcat { index_shape, index_file, samples } => {
            let (index, index_label) = match (index_shape, index_file) {
                (Some(s), None) => (s.category(), s.key().to_string()),
                (None, Some(p)) => (parse_category(&read(p)?)?.0, file_label(p)),
                _ => return Err(Error::Invalid("exactly one of --index-shape, --index-file is required".into())),
            };
            let mut r = FunctorcatReport::run(&e, &index, &label, &index_label, *samples, common.seed)?;
            r.elapsed_ms = elapsed(common, t);
            Ok(Rendered { verdict: r.verdict, body: render(common.report, &r, r.text()), witnesses: vec![] })
        }
        Cmd::Regress { .. } | Cmd::Verify { .. } => unreachable!(),
    }
}

fn config_key(cmd: &Cmd, common: &Common) -> catcheck_core::Result<String> {
    let command = match cmd {
        Cmd::Classify { prime } => json!({"classify": {"prime": prime}}),
        Cmd::Check { name, ssfl_variant } => json!({"check": parse_check(name, *ssfl_variant)?.key()}),
        Cmd::Audit { name } => json!({"audit": name.parse::<Audit>()?.key()}),
        Cmd::Functorcat { index_shape, index_file, samples } => json!({"functorcat": {
            "shape": index_shape.map(|s| s.key()),
            "file": index_file.as_ref().map(|p| read(p).map(|t| content_address(&t))).transpose()?,
            "samples": samples,
        }}),
        Cmd::Regress { extended } => json!({"regress": {"extended": extended}}),
        Cmd::Verify { file } => json!({"verify": content_address(&read(file)?)}),
    };
    let cfg = json!({
        "command": command,
        "source": if matches!(cmd, Cmd::Regress { .. } | Cmd::Verify { .. }) { json!(null) } else { common.source_key()? },
        "budget": common.budget(),
        "seed": common.seed,
        "all_witnesses": common.all_witnesses,
        "report": matches!(common.report, Format::Json),
        "timing": common.timing,
    });
    Ok(content_address(&cfg.to_string()))
}

fn store(dir: &Path, key: &str, common: &Common, r: &Rendered) -> catcheck_core::Result<PathBuf> {
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    let ext = match common.report {
        Format::Json => "json",
        Format::Text => "txt",
    };
    let path = dir.join(format!("{key}.{ext}"));
    std::fs::write(&path, &r.body).map_err(io)?;
    for (i, w) in r.witnesses.iter().enumerate() {
        std::fs::write(dir.join(format!("{key}-{i}.witness")), w).map_err(io)?;
    }
    Ok(path)
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::OutOfBudget(_) => 2,
        Error::Inconsistent(_) => 4,
        Error::Parse { .. } | Error::Invalid(_) | Error::Io(_) => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let run = || -> catcheck_core::Result<Verdict> {
        let r = execute(&cli.cmd, &cli.common)?;
        print!("{}", r.body);
        if let Some(dir) = &cli.common.out_dir {
            let key = config_key(&cli.cmd, &cli.common)?;
            let path = store(dir, &key, &cli.common, &r)?;
            eprintln!("report written to {}", path.display());
        }
        Ok(r.verdict)
    };
    match run() {
        Ok(Verdict::Holds) => ExitCode::from(0),
        Ok(Verdict::Fails) => ExitCode::from(1),
        Ok(Verdict::OutOfBudget) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_for(&err))
        }
    }
}
