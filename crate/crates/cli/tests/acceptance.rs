//! One line per acceptance criterion, then a single assertion over all of
//! them.

mod common;
#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::time::{Duration, Instant};

use common::{fixture, hqsynth};
use hqsynth::fltl::{parse, Alphabet};
use hqsynth::mdp::Environment;
use hqsynth::rational::{rat, Rational};
use hqsynth::synthesis::{self, SynthesisSpec};
use support::suites;

const EVAL_BUDGET: Duration = Duration::from_secs(5);
const PROPERTY_BUDGET: Duration = Duration::from_secs(300);
const FORMULAS: usize = 200;
const LASSOS: usize = 20;
const MAX_FORMULA_SIZE: usize = 8;
const MDPS: usize = 100;
const MAX_MDP_STATES: usize = 8;
const CONDITIONAL_INSTANCES: usize = 50;
const SEED: u64 = 2024;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn expect(what: &str, got: String, want: &str) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got '{got}', expected '{want}'"))
    }
}

fn eval(spec: &str, t: &str, mode: &str) -> String {
    hqsynth(&[
        "eval",
        fixture(spec).to_str().unwrap(),
        fixture(t).to_str().unwrap(),
        "--mode",
        mode,
    ])
    .get("value")
}

fn r(text: &str) -> Rational {
    hqsynth::rational::parse_rational(text).unwrap_or_else(|_| rat(-1, 1))
}

fn close_eval() -> Check {
    let start = Instant::now();
    for (t, mode, want) in [
        ("close_t1.json", "expected", "1/2"),
        ("close_t2.json", "expected", "3/4"),
        ("close_t1.json", "worst-case", "0"),
        ("close_t1.json", "almost-sure", "0"),
        ("close_t2.json", "worst-case", "1/2"),
        ("close_t2.json", "almost-sure", "1/2"),
    ] {
        expect(&format!("{t} {mode}"), eval("close.json", t, mode), want)?;
    }
    let elapsed = start.elapsed();
    if elapsed > EVAL_BUDGET {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("six values exact in {elapsed:.2?}"))
}

fn close_synth() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().join("t.json");
    let run = hqsynth(&[
        "synth",
        fixture("close.json").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    expect("exit code", run.code.to_string(), "0")?;
    expect("synth", run.get("expected"), "3/4")?;
    let again = hqsynth(&["eval", fixture("close.json").to_str().unwrap(), out.to_str().unwrap()]);
    expect("re-evaluated", again.get("value"), "3/4")?;
    let spec = spec_of("close.json");
    let rm = synthesis::achievability_mdp(&spec).map_err(|e| e.to_string())?;
    let best = support::best_strategy_value(&rm);
    expect("best memoryless strategy", best.to_string(), "3/4")?;
    Ok(format!(
        "3/4, {} memoryless strategies enumerated",
        support::all_strategies(&rm.mdp).len()
    ))
}

fn encode() -> Check {
    for mode in ["worst-case", "almost-sure", "expected"] {
        expect(
            &format!("T3 {mode}"),
            eval("encode.json", "encode_t3.json", mode),
            "3/4",
        )?;
    }
    expect("T2 expected", eval("encode.json", "encode_t2.json", "expected"), "5/8")?;
    let spec = fixture("encode.json");
    let spec = spec.to_str().unwrap();
    expect("synth", hqsynth(&["synth", spec]).get("expected"), "3/4")?;
    let run = hqsynth(&["synth", spec, "--threshold", "3/8"]);
    let (value, floor) = (r(&run.get("expected")), r(&run.get("almost_sure_floor")));
    if value < rat(5, 8) || floor < rat(3, 8) {
        return Err(format!("threshold 3/8 gave value {value}, floor {floor}"));
    }
    Ok(format!("threshold 3/8 gives {value} with floor {floor}"))
}

fn spec_of(name: &str) -> SynthesisSpec {
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap();
    let names = |k: &str| -> Vec<String> {
        v[k].as_array()
            .unwrap()
            .iter()
            .map(|a| a.as_str().unwrap().to_string())
            .collect()
    };
    let (i, o) = (names("inputs"), names("outputs"));
    let mut spec = SynthesisSpec::new(
        Alphabet::io(&i, &o).unwrap(),
        parse(v["formula"].as_str().unwrap(), &i, &o).unwrap(),
    );
    spec.assumption = v.get("assumption").map(|p| parse(p.as_str().unwrap(), &i, &o).unwrap());
    spec
}

fn assumption() -> Check {
    let spec = spec_of("encode_assume.json");
    let psi = spec.assumption.clone().unwrap();
    let p = synthesis::prob_of_assumption(&psi, &spec.alphabet, &Environment::Uniform).map_err(|e| e.to_string())?;
    expect("Pr(psi)", p.to_string(), "1/4")?;
    expect(
        "T4 conditional",
        eval("encode_assume.json", "encode_t4.json", "conditional"),
        "11/16",
    )?;
    expect(
        "T5 conditional",
        eval("encode_assume.json", "encode_t5.json", "conditional"),
        "13/16",
    )?;
    let run = hqsynth(&["synth", fixture("encode_assume.json").to_str().unwrap()]);
    expect("synth", run.get("expected"), "13/16")?;
    Ok("Pr = 1/4, 11/16, 13/16, synth 13/16".into())
}

fn zero_probability() -> Check {
    let spec = spec_of("request.json");
    let p = synthesis::prob_of_assumption(spec.assumption.as_ref().unwrap(), &spec.alphabet, &Environment::Uniform)
        .map_err(|e| e.to_string())?;
    expect("Pr(F G !req)", p.to_string(), "0")?;
    Ok("Pr = 0".into())
}

fn battery_closed_form(k: i64, t: i64, p: Rational) -> Rational {
    let one = rat(1, 1);
    let q = &one - &p;
    let pow = |x: &Rational, n: i64| (0..n).fold(rat(1, 1), |acc, _| acc * x);
    let m = k - t + 1;
    pow(&q, k)
        + rat(t, k) * (&one - pow(&q, m))
        + (&p - &one) / (rat(k, 1) * &p) * (rat(m, 1) * pow(&q, m - 1) * &p - &one + pow(&q, m))
}

fn battery() -> Check {
    let want = battery_closed_form(4, 2, rat(1, 2));
    expect(
        "battery",
        eval("battery.json", "battery_k4_t2.json", "expected"),
        &want.to_string(),
    )?;
    Ok(format!("{want}"))
}

fn timed(budget: Duration, f: impl FnOnce() -> Result<usize, String>) -> Check {
    let start = Instant::now();
    let n = f()?;
    let elapsed = start.elapsed();
    if elapsed > budget {
        return Err(format!("{n} instances took {elapsed:?}"));
    }
    Ok(format!("{n} instances in {elapsed:.2?}"))
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    let f = |n: &str| fixture(n).to_str().unwrap().to_string();
    let commands: Vec<Vec<String>> = vec![
        vec![
            "synth".into(),
            f("encode_assume.json"),
            "--threshold".into(),
            "3/4".into(),
        ],
        vec!["synth".into(), f("close.json"), "--threshold".into(), "3/5".into()],
        vec!["--json".into(), "synth".into(), f("encode.json")],
        vec![
            "eval".into(),
            f("close.json"),
            f("close_t2.json"),
            "--mode".into(),
            "worst-case".into(),
        ],
        vec![
            "eval".into(),
            f("encode_assume.json"),
            f("encode_t5.json"),
            "--mode".into(),
            "conditional".into(),
        ],
        vec![
            "simulate".into(),
            f("battery.json"),
            f("battery_k4_t2.json"),
            "--samples".into(),
            "2000".into(),
            "--seed".into(),
            "9".into(),
        ],
    ];
    for c in &commands {
        let (a, b) = (hqsynth(c), hqsynth(c));
        if (a.code, &a.stdout, &a.stderr) != (b.code, &b.stdout, &b.stderr) {
            return Err(format!("{c:?} differs between runs"));
        }
    }
    for k in 0..2 {
        let run = hqsynth(&[
            "synth".to_string(),
            f("encode_assume.json"),
            "--out".into(),
            path(&format!("t{k}.json")),
            "--dot".into(),
            path(&format!("t{k}.dot")),
            "--report".into(),
            path(&format!("r{k}.txt")),
        ]);
        expect("exit code", run.code.to_string(), "0")?;
    }
    for ext in ["json", "dot"] {
        let (a, b) = (
            std::fs::read(path(&format!("t0.{ext}"))),
            std::fs::read(path(&format!("t1.{ext}"))),
        );
        if a.map_err(|e| e.to_string())? != b.map_err(|e| e.to_string())? {
            return Err(format!("transducer .{ext} files differ"));
        }
    }
    if std::fs::read(path("r0.txt")).ok() != std::fs::read(path("r1.txt")).ok() {
        return Err("reports differ".into());
    }
    Ok(format!(
        "{} commands and written files byte-identical",
        commands.len() + 1
    ))
}

#[test]
fn acceptance() {
    let criteria: Vec<Criterion> = vec![
        ("close example evaluation", close_eval),
        ("close example synthesis and strategy enumeration", close_synth),
        ("encoding example", encode),
        ("assumption example", assumption),
        ("zero-probability assumption", zero_probability),
        ("battery closed form", battery),
        ("DPW membership property", || {
            timed(PROPERTY_BUDGET, || {
                suites::dpw_membership(FORMULAS, LASSOS, MAX_FORMULA_SIZE, SEED)
            })
        }),
        ("MDP oracles", || {
            timed(PROPERTY_BUDGET, || suites::mdp_oracles(MDPS, MAX_MDP_STATES, SEED))
        }),
        ("conditional threshold vs implication", || {
            timed(PROPERTY_BUDGET, || {
                suites::conditional_threshold(CONDITIONAL_INSTANCES, SEED)
            })
        }),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL  {name}: {why}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
