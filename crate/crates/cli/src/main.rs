use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hqsynth::fltl::{parse, Alphabet, Formula, LassoWord};
use hqsynth::mdp::DistributionMdp;
use hqsynth::rational::{format_rational, parse_rational, to_f64, Rational};
use hqsynth::synthesis::{self, Outcome, SynthesisSpec};
use hqsynth::transducer::{self, Transducer, ValueAutomata};
use serde::Deserialize;

#[derive(Parser)]
#[command(
    name = "hqsynth",
    version,
    about = "Quality-aware synthesis against stochastic environments"
)]
struct Cli {
    /// Emit reports as JSON objects instead of key=value lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a transducer maximizing the expected satisfaction value.
    Synth {
        spec: PathBuf,
        /// Write the transducer JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the transducer in Graphviz format here.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Almost-sure lower bound, as `num/den`; overrides the spec file.
        #[arg(long)]
        threshold: Option<String>,
        /// Environment assumption; overrides the spec file.
        #[arg(long)]
        assume_inline: Option<String>,
        /// Also write the report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Evaluate a transducer against the spec's formula.
    Eval {
        spec: PathBuf,
        transducer: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Expected)]
        mode: Mode,
        #[arg(long)]
        assume_inline: Option<String>,
    },
    /// Estimate the expected value by sampling input sequences.
    Simulate {
        spec: PathBuf,
        transducer: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Expected,
    Conditional,
    AlmostSure,
    WorstCase,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    inputs: Vec<String>,
    outputs: Vec<String>,
    formula: String,
    assumption: Option<String>,
    threshold: Option<String>,
    hard_constraint: Option<String>,
    distribution: Option<DistributionMdp>,
}

#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_spec(path: &Path, threshold: Option<&str>, assumption: Option<&str>) -> CliResult<SynthesisSpec> {
    let file: SpecFile = serde_json::from_str(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let alphabet = Alphabet::io(&file.inputs, &file.outputs)?;
    let formula = |text: &str| parse(text, &file.inputs, &file.outputs);
    let mut spec = SynthesisSpec::new(alphabet, formula(&file.formula)?);
    spec.assumption = assumption.or(file.assumption.as_deref()).map(formula).transpose()?;
    spec.threshold = threshold
        .or(file.threshold.as_deref())
        .map(parse_rational)
        .transpose()?;
    spec.hard_constraint = file.hard_constraint.as_deref().map(formula).transpose()?;
    spec.distribution = file.distribution;
    spec.validate()?;
    Ok(spec)
}

#[derive(Default)]
struct Report(Vec<(String, String)>);

impl Report {
    fn add(&mut self, key: &str, value: impl ToString) {
        self.0.push((key.to_string(), value.to_string()));
    }

    fn rational(&mut self, key: &str, r: &Rational) {
        self.add(key, format_rational(r));
        self.add(&format!("{key}_decimal"), format!("{:.6}", to_f64(r)));
    }

    fn render(&self, json: bool) -> String {
        if json {
            let map: serde_json::Map<String, serde_json::Value> = self
                .0
                .iter()
                .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
                .collect();
            let mut s = serde_json::to_string_pretty(&map).expect("serializable");
            s.push('\n');
            s
        } else {
            self.0.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
        }
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn cmd_synth(
    spec_path: &Path,
    out: Option<&Path>,
    dot: Option<&Path>,
    threshold: Option<&str>,
    assumption: Option<&str>,
    report_path: Option<&Path>,
    json: bool,
) -> CliResult<(Report, u8)> {
    let spec = load_spec(spec_path, threshold, assumption)?;
    let mut report = Report::default();
    let code = match synthesis::run(&spec)? {
        Outcome::Unrealizable { losing, guard_states } => {
            report.add("status", "unrealizable");
            if let Some(t) = &spec.threshold {
                report.add("threshold", format_rational(t));
            }
            report.add("guard_dpw_states", guard_states);
            report.add("losing_states", losing.len());
            let pairs: Vec<String> = losing.iter().map(|(q, e)| format!("{q}:{e}")).collect();
            report.add("losing", pairs.join(" "));
            2
        }
        Outcome::Realized(r) => {
            report.add("status", "realized");
            report.rational("expected", &r.value);
            report.add("certified", "true");
            if let Some(floor) = &r.almost_sure_floor {
                report.rational("almost_sure_floor", floor);
            }
            if let Some(p) = &r.assumption_probability {
                report.rational("assumption_probability", p);
            }
            report.add("values", r.stats.values);
            report.add("dpw_states", join(&r.stats.dpw_states));
            report.add("product_states", r.stats.product_states);
            report.add("mdp_states", r.stats.mdp_states);
            report.add("mdp_choices", r.stats.mdp_choices);
            report.add("transducer_states", r.stats.transducer_states);
            if let Some(path) = out {
                write(path, &r.transducer.to_json())?;
            }
            if let Some(path) = dot {
                write(path, &r.transducer.to_dot())?;
            }
            0
        }
    };
    if let Some(path) = report_path {
        write(path, &report.render(json))?;
    }
    Ok((report, code))
}

fn load_transducer(path: &Path) -> CliResult<Transducer> {
    Ok(Transducer::from_json(&read(path)?)?)
}

fn format_lasso(w: &LassoWord, alphabet: &Alphabet) -> String {
    let letters = |ls: &[u32]| {
        ls.iter()
            .map(|&l| format!("{{{}}}", alphabet.input_atoms_of(l).join(",")))
            .collect::<Vec<_>>()
            .join(" ")
    };
    format!("{} ({})^w", letters(&w.prefix), letters(&w.period))
        .trim_start()
        .to_string()
}

fn cmd_eval(spec_path: &Path, t_path: &Path, mode: Mode, assumption: Option<&str>) -> CliResult<Report> {
    let spec = load_spec(spec_path, None, assumption)?;
    let t = load_transducer(t_path)?;
    let env = spec.environment()?;
    let a = &spec.alphabet;
    let va = ValueAutomata::build(&spec.formula, a)?;
    let psi = || -> CliResult<&Formula> {
        spec.assumption
            .as_ref()
            .ok_or_else(|| Failure("this mode needs an assumption".into()))
    };
    let mut report = Report::default();
    match mode {
        Mode::Expected => {
            report.add("mode", "expected");
            report.rational("value", &transducer::expected_value(&t, &va, a, &env)?);
        }
        Mode::Conditional => {
            report.add("mode", "conditional");
            let (v, p) = transducer::conditional_expected_value(&t, &va, psi()?, a, &env)?;
            report.rational("value", &v);
            report.rational("assumption_probability", &p);
        }
        Mode::AlmostSure => {
            report.add("mode", "almost-sure");
            let v = match &spec.assumption {
                Some(psi) => transducer::conditional_almost_sure_value(&t, &va, psi, a, &env)?,
                None => transducer::almost_sure_value(&t, &va, a, &env)?,
            };
            report.rational("value", &v);
        }
        Mode::WorstCase => {
            report.add("mode", "worst-case");
            let w = transducer::worst_case_value(&t, &va, a)?;
            report.rational("value", &w.value);
            report.add("witness_inputs", format_lasso(&w.inputs, a));
        }
    }
    Ok(report)
}

fn cmd_simulate(spec_path: &Path, t_path: &Path, samples: usize, seed: u64) -> CliResult<Report> {
    let spec = load_spec(spec_path, None, None)?;
    let t = load_transducer(t_path)?;
    let env = spec.environment()?;
    let va = ValueAutomata::build(&spec.formula, &spec.alphabet)?;
    let sim = transducer::simulate(&t, &va, &spec.alphabet, &env, samples, seed)?;
    let mut report = Report::default();
    report.add("samples", samples);
    report.add("seed", seed);
    report.rational("estimate", &sim.estimate);
    report.rational("exact", &sim.exact);
    report.add("standard_error", format!("{:.6}", sim.standard_error()));
    Ok(report)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Synth {
            spec,
            out,
            dot,
            threshold,
            assume_inline,
            report,
        } => cmd_synth(
            spec,
            out.as_deref(),
            dot.as_deref(),
            threshold.as_deref(),
            assume_inline.as_deref(),
            report.as_deref(),
            cli.json,
        ),
        Command::Eval {
            spec,
            transducer,
            mode,
            assume_inline,
        } => cmd_eval(spec, transducer, *mode, assume_inline.as_deref()).map(|r| (r, 0)),
        Command::Simulate {
            spec,
            transducer,
            samples,
            seed,
        } => cmd_simulate(spec, transducer, *samples, *seed).map(|r| (r, 0)),
    };
    match result {
        Ok((report, code)) => {
            print!("{}", report.render(cli.json));
            ExitCode::from(code)
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
