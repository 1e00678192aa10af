//! Randomized checks shared by the integration and acceptance tests. Each
//! returns the number of checked instances or a description of the first
//! counterexample.

use hqsynth::automata::dpw_for;
use hqsynth::boolean::ValuePredicate;
use hqsynth::fltl::{eval_lasso, Alphabet, Formula};
use hqsynth::mdp::Environment;
use hqsynth::rational::Rational;
use hqsynth::synthesis::{self, SynthesisSpec};
use hqsynth::transducer::{self, ValueAutomata};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::formulas;

/// DPW membership for `EqualTo(v)` agrees with lasso evaluation for every
/// `v ∈ values(φ)`, and `|values(φ)| ≤ 2^|φ|`.
pub fn dpw_membership(formulas: usize, lassos: usize, max_size: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = Alphabet::new(&["a", "b"]);
    let mut checked = 0;
    for _ in 0..formulas {
        let size = rng.gen_range(3..=max_size);
        let f = formulas::formula(&mut rng, &["a", "b"], size);
        let values = f.values();
        if values.len() > 1 << f.size() {
            return Err(format!("{f}: {} values exceed 2^{}", values.len(), f.size()));
        }
        let dpws = values
            .iter()
            .map(|v| dpw_for(&f, &ValuePredicate::EqualTo(v.clone()), &alphabet).map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        for _ in 0..lassos {
            let w = formulas::lasso(&mut rng, 4);
            let actual = eval_lasso(&f, &alphabet, &w);
            if !values.contains(&actual) {
                return Err(format!("{f}: value {actual} on {w:?} missing from {values:?}"));
            }
            for (v, d) in values.iter().zip(&dpws) {
                if d.accepts_lasso(&w) != (&actual == v) {
                    return Err(format!("{f}: DPW for = {v} disagrees on {w:?} (value {actual})"));
                }
            }
        }
        checked += 1;
    }
    Ok(checked)
}

fn io() -> Alphabet {
    Alphabet::io(&["i"], &["o"]).unwrap()
}

/// On random transducers, `Pr(φ ≥ t | ψ) = 1` holds exactly when
/// `Pr(ψ → φ ≥ t) = 1`.
pub fn conditional_threshold(instances: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = io();
    let env = Environment::Uniform;
    let mut checked = 0;
    let mut agreeing_true = 0;
    while checked < instances {
        let n = rng.gen_range(1..=3);
        let t = formulas::transducer(&mut rng, n);
        let size = rng.gen_range(3..=7);
        let phi = formulas::formula(&mut rng, &["i", "o"], size);
        let size = rng.gen_range(2..=4);
        let psi = formulas::boolean_formula(&mut rng, &["i"], size);
        let Ok(p) = synthesis::prob_of_assumption(&psi, &alphabet, &env) else {
            continue;
        };
        if p == Rational::from_integer(0.into()) {
            continue;
        }
        let values = phi.values();
        let threshold = values[rng.gen_range(0..values.len())].clone();
        let va = ValueAutomata::build(&phi, &alphabet).map_err(|e| e.to_string())?;
        let conditional = transducer::conditional_almost_sure_value(&t, &va, &psi, &alphabet, &env)
            .map_err(|e| e.to_string())?
            >= threshold;
        let implication = Formula::implies(psi.clone(), phi.clone());
        let vi = ValueAutomata::build(&implication, &alphabet).map_err(|e| e.to_string())?;
        let plain = transducer::almost_sure_value(&t, &vi, &alphabet, &env).map_err(|e| e.to_string())? >= threshold;
        if conditional != plain {
            return Err(format!(
                "phi = {phi}, psi = {psi}, t = {threshold}: {conditional} vs {plain}\n{}",
                t.to_json()
            ));
        }
        agreeing_true += conditional as usize;
        checked += 1;
    }
    if agreeing_true == 0 || agreeing_true == checked {
        return Err(format!(
            "degenerate sample: predicate held on {agreeing_true} of {checked}"
        ));
    }
    Ok(checked)
}

/// The synthesized transducer certifies its value and no output-first
/// machine with at most `machine_states` states does better.
pub fn synthesis_optimality(instances: usize, machine_states: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = io();
    let env = Environment::Uniform;
    let machines = formulas::all_output_first(machine_states);
    for _ in 0..instances {
        let size = rng.gen_range(3..=7);
        let phi = formulas::formula(&mut rng, &["i", "o"], size);
        let r =
            synthesis::synth(&SynthesisSpec::new(alphabet.clone(), phi.clone())).map_err(|e| format!("{phi}: {e}"))?;
        let va = ValueAutomata::build(&phi, &alphabet).map_err(|e| e.to_string())?;
        let own = transducer::expected_value(&r.transducer, &va, &alphabet, &env).map_err(|e| e.to_string())?;
        if own != r.value {
            return Err(format!("{phi}: reported {} but transducer has {own}", r.value));
        }
        for m in &machines {
            let v = transducer::expected_value(m, &va, &alphabet, &env).map_err(|e| e.to_string())?;
            if v > r.value {
                return Err(format!(
                    "{phi}: machine beats synthesis, {v} > {}\n{}",
                    r.value,
                    m.to_json()
                ));
            }
        }
    }
    Ok(instances)
}

/// Threshold and assumption synthesis against small output-first machines:
/// an unrealizable threshold admits no machine meeting it almost surely, and
/// a realized result is at least as good as every machine meeting the same
/// constraints.
pub fn constrained_optimality(instances: usize, machine_states: usize, seed: u64) -> Result<usize, String> {
    use hqsynth::synthesis::Outcome;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = io();
    let env = Environment::Uniform;
    let machines = formulas::all_output_first(machine_states);
    let mut checked = 0;
    while checked < instances {
        let size = rng.gen_range(3..=6);
        let phi = formulas::formula(&mut rng, &["i", "o"], size);
        let values = phi.values();
        let mut spec = SynthesisSpec::new(alphabet.clone(), phi.clone());
        if rng.gen_bool(0.7) {
            spec.threshold = Some(values[rng.gen_range(0..values.len())].clone());
        }
        if rng.gen_bool(0.5) {
            let size = rng.gen_range(2..=4);
            let psi = formulas::boolean_formula(&mut rng, &["i"], size);
            let p = synthesis::prob_of_assumption(&psi, &alphabet, &env).map_err(|e| e.to_string())?;
            if p == Rational::from_integer(0.into()) {
                continue;
            }
            spec.assumption = Some(psi);
        }
        let va = ValueAutomata::build(&phi, &alphabet).map_err(|e| e.to_string())?;
        let score = |m: &hqsynth::transducer::Transducer| -> Result<(Rational, Rational), String> {
            let r = match &spec.assumption {
                None => (
                    transducer::expected_value(m, &va, &alphabet, &env),
                    transducer::almost_sure_value(m, &va, &alphabet, &env),
                ),
                Some(psi) => (
                    transducer::conditional_expected_value(m, &va, psi, &alphabet, &env).map(|x| x.0),
                    transducer::conditional_almost_sure_value(m, &va, psi, &alphabet, &env),
                ),
            };
            Ok((r.0.map_err(|e| e.to_string())?, r.1.map_err(|e| e.to_string())?))
        };
        let context = format!(
            "phi = {phi}, psi = {:?}, t = {:?}",
            spec.assumption.as_ref().map(|p| p.to_string()),
            spec.threshold
        );
        let outcome = synthesis::run(&spec).map_err(|e| format!("{context}: {e}"))?;
        let feasible = |floor: &Rational| spec.threshold.as_ref().is_none_or(|t| floor >= t);
        match outcome {
            Outcome::Unrealizable { .. } => {
                for m in &machines {
                    let (_, floor) = score(m)?;
                    if feasible(&floor) {
                        return Err(format!(
                            "{context}: unrealizable, yet a machine reaches {floor}\n{}",
                            m.to_json()
                        ));
                    }
                }
            }
            Outcome::Realized(r) => {
                let (own, floor) = score(&r.transducer)?;
                if own != r.value || !feasible(&floor) {
                    return Err(format!(
                        "{context}: result {} / floor {floor} but transducer gives {own}",
                        r.value
                    ));
                }
                for m in &machines {
                    let (v, floor) = score(m)?;
                    if feasible(&floor) && v > r.value {
                        return Err(format!("{context}: machine reaches {v} > {}\n{}", r.value, m.to_json()));
                    }
                }
            }
        }
        checked += 1;
    }
    Ok(checked)
}

/// MEC, c.w.r., almost-sure parity and mean payoff on random MDPs against
/// exhaustive enumeration.
pub fn mdp_oracles(instances: usize, max_states: usize, seed: u64) -> Result<usize, String> {
    use hqsynth::mdp::{
        almost_sure_parity, cwr_states, max_end_components, solve_mean_payoff, strategy_value, ParityMdp, RewardMdp,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..instances {
        let n = rng.gen_range(1..=max_states);
        let mdp = super::random_mdp(&mut rng, n);
        let mut mecs: Vec<u32> = max_end_components(&mdp)
            .iter()
            .map(|ec| ec.states.iter().fold(0, |acc, &s| acc | (1 << s)))
            .collect();
        mecs.sort_unstable();
        if mecs != super::maximal_end_components(&mdp) {
            return Err(format!("instance {k}: MECs differ"));
        }
        let ranks: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
        let pm = ParityMdp {
            mdp: mdp.clone(),
            ranks: ranks.clone(),
        };
        if cwr_states(&pm).cwr != super::cwr_oracle(&mdp, &ranks) {
            return Err(format!("instance {k}: c.w.r. states differ"));
        }
        let win = almost_sure_parity(&pm);
        if win.win != super::almost_sure_oracle(&mdp, &ranks) {
            return Err(format!("instance {k}: almost-sure regions differ"));
        }
        if let Some(s) = (0..n).find(|&s| win.win[s] && !super::wins_parity_from(&mdp, &ranks, &win.strategy, s)) {
            return Err(format!("instance {k}: witness strategy loses from {s}"));
        }
        let rewards = super::mec_constant_rewards(&mut rng, &mdp);
        let rm = RewardMdp { mdp, rewards };
        let solved = solve_mean_payoff(&rm).map_err(|e| e.to_string())?;
        if solved.value != super::best_strategy_value(&rm) || strategy_value(&rm, &solved.strategy) != solved.value {
            return Err(format!("instance {k}: mean payoff differs from enumeration"));
        }
    }
    Ok(instances)
}
