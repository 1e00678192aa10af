//! Synthesis pipelines: plain, threshold, assumption and combined.

mod achievability;
mod extract;

pub use achievability::{mec_targets, reset_mdp, Achievability, Component};

use crate::automata::{dpw_for, Dpw};
use crate::boolean::ValuePredicate;
use crate::error::{Error, Result};
use crate::fltl::{Alphabet, Formula};
use crate::mdp::{
    induced_mdp, mc_ergodic_analysis, solve_mean_payoff, DistributionMdp, Environment, MeanPayoff, RewardMdp,
};
use crate::rational::{in_unit_interval, one, zero, Rational};
use crate::transducer::{self, Transducer, ValueAutomata};
use extract::Plan;

#[derive(Clone, Debug)]
pub struct SynthesisSpec {
    pub alphabet: Alphabet,
    pub formula: Formula,
    /// Boolean formula over the inputs.
    pub assumption: Option<Formula>,
    pub threshold: Option<Rational>,
    /// Formula whose value must reach the threshold almost surely in place
    /// of the main formula.
    pub hard_constraint: Option<Formula>,
    pub distribution: Option<DistributionMdp>,
}

impl SynthesisSpec {
    pub fn new(alphabet: Alphabet, formula: Formula) -> Self {
        SynthesisSpec {
            alphabet,
            formula,
            assumption: None,
            threshold: None,
            hard_constraint: None,
            distribution: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let atoms = self.alphabet.atoms();
        for a in self.formula.atoms() {
            if !atoms.contains(&a) {
                return Err(Error::UnknownAtom(a));
            }
        }
        self.formula.check_parameters()?;
        if let Some(psi) = &self.assumption {
            if !psi.is_boolean() {
                return Err(Error::Spec("the assumption must be a Boolean formula".into()));
            }
            if let Some(a) = psi.atoms().into_iter().find(|a| !self.alphabet.inputs().contains(a)) {
                return Err(Error::Spec(format!("assumption atom '{a}' is not an input")));
            }
        }
        if let Some(t) = &self.threshold {
            if !in_unit_interval(t) {
                return Err(Error::ParameterRange(t.clone()));
            }
        }
        if let Some(h) = &self.hard_constraint {
            for a in h.atoms() {
                if !atoms.contains(&a) {
                    return Err(Error::UnknownAtom(a));
                }
            }
            h.check_parameters()?;
        }
        Ok(())
    }

    pub fn environment(&self) -> Result<Environment> {
        match &self.distribution {
            None => Ok(Environment::Uniform),
            Some(d) => Ok(Environment::Mdp(d.compile(&self.alphabet)?)),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Statistics {
    pub values: usize,
    pub dpw_states: Vec<usize>,
    pub product_states: usize,
    pub mdp_states: usize,
    pub mdp_choices: usize,
    pub transducer_states: usize,
}

#[derive(Clone, Debug)]
pub struct SynthesisResult {
    pub transducer: Transducer,
    /// Optimal value of the achievability MDP, re-certified on the
    /// transducer (conditional on the assumption when one is given).
    pub value: Rational,
    /// Value guaranteed with probability one (threshold modes).
    pub almost_sure_floor: Option<Rational>,
    pub assumption_probability: Option<Rational>,
    pub stats: Statistics,
}

#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Outcome {
    Realized(SynthesisResult),
    /// The threshold cannot be met almost surely. `losing` lists the
    /// `(automaton state, environment state)` pairs outside the winning
    /// region of the threshold automaton's MDP.
    Unrealizable {
        losing: Vec<(usize, usize)>,
        guard_states: usize,
    },
}

impl Outcome {
    pub fn realized(self) -> Option<SynthesisResult> {
        match self {
            Outcome::Realized(r) => Some(r),
            Outcome::Unrealizable { .. } => None,
        }
    }
}

/// Dispatches on the optional parts of the specification.
pub fn run(spec: &SynthesisSpec) -> Result<Outcome> {
    spec.validate()?;
    match (
        &spec.assumption,
        spec.threshold.is_some() || spec.hard_constraint.is_some(),
    ) {
        (Some(_), true) => synth_assume_threshold(spec),
        (None, true) => synth_threshold(spec),
        (Some(_), false) => synth_assume(spec).map(Outcome::Realized),
        (None, false) => synth(spec).map(Outcome::Realized),
    }
}

fn value_automata(spec: &SynthesisSpec) -> Result<ValueAutomata> {
    ValueAutomata::build(&spec.formula, &spec.alphabet)
}

fn components(va: &ValueAutomata, from: usize, alphabet: &Alphabet, env: &Environment) -> Result<Vec<Component>> {
    va.dpws[from..]
        .iter()
        .map(|d| Component::analyse(d.clone(), alphabet, env))
        .collect()
}

fn assumption_dpw(psi: &Formula, alphabet: &Alphabet) -> Result<Dpw> {
    dpw_for(psi, &ValuePredicate::EqualTo(one()), alphabet)
}

struct Solved {
    transducer: Transducer,
    value: Rational,
    stats: Statistics,
}

/// Solves the (possibly reset) achievability MDP and extracts a transducer.
fn solve_and_extract(
    ach: &Achievability,
    va: &ValueAutomata,
    reset: Option<&[bool]>,
    alphabet: &Alphabet,
    env: &Environment,
) -> Result<Solved> {
    let real = &ach.mdp.mdp;
    let solved_mdp = match reset {
        Some(r) => reset_mdp(real, r),
        None => real.clone(),
    };
    let (targets, rewards) = mec_targets(ach, &solved_mdp);
    let solution: MeanPayoff = solve_mean_payoff(&RewardMdp {
        mdp: solved_mdp,
        rewards,
    })?;
    let mut strategy = solution.strategy.clone();
    if let Some(r) = reset {
        for (x, slot) in strategy.iter_mut().enumerate() {
            if r[x] {
                *slot = Some(0);
            }
        }
    }
    let plan = Plan {
        ach,
        alphabet,
        env,
        strategy,
        solution: &solution,
        targets: &targets,
    };
    let transducer = plan.transducer();
    let stats = Statistics {
        values: va.values.len(),
        dpw_states: va.dpws.iter().map(Dpw::num_states).collect(),
        product_states: ach.product.num_states(),
        mdp_states: real.num_states(),
        mdp_choices: real.num_choices(),
        transducer_states: transducer.num_states(),
    };
    Ok(Solved {
        transducer,
        value: solution.value,
        stats,
    })
}

fn certify(what: &str, claimed: &Rational, measured: &Rational) -> Result<()> {
    if claimed != measured {
        return Err(Error::Internal(format!(
            "{what}: optimizer value {claimed} differs from the extracted transducer's value {measured}"
        )));
    }
    Ok(())
}

/// The achievability MDP of the plain problem with its rewards.
pub fn achievability_mdp(spec: &SynthesisSpec) -> Result<RewardMdp> {
    let env = spec.environment()?;
    let va = value_automata(spec)?;
    let comps = components(&va, 0, &spec.alphabet, &env)?;
    let ach = Achievability::build(va.values.clone(), comps, None, None, &spec.alphabet, &env)?;
    let (_, rewards) = mec_targets(&ach, &ach.mdp.mdp);
    Ok(RewardMdp {
        mdp: ach.mdp.mdp.clone(),
        rewards,
    })
}

/// Expected-value optimal synthesis.
pub fn synth(spec: &SynthesisSpec) -> Result<SynthesisResult> {
    let alphabet = &spec.alphabet;
    let env = spec.environment()?;
    let va = value_automata(spec)?;
    let comps = components(&va, 0, alphabet, &env)?;
    let ach = Achievability::build(va.values.clone(), comps, None, None, alphabet, &env)?;
    let solved = solve_and_extract(&ach, &va, None, alphabet, &env)?;
    let measured = transducer::expected_value(&solved.transducer, &va, alphabet, &env)?;
    certify("synthesis", &solved.value, &measured)?;
    Ok(SynthesisResult {
        transducer: solved.transducer,
        value: solved.value,
        almost_sure_floor: None,
        assumption_probability: None,
        stats: solved.stats,
    })
}

/// The threshold automaton's component analysis, or the losing region.
fn guard(
    f: &Formula,
    t: &Rational,
    alphabet: &Alphabet,
    env: &Environment,
) -> Result<std::result::Result<Component, Outcome>> {
    let dpw = dpw_for(f, &ValuePredicate::AtLeast(t.clone()), alphabet)?;
    let g = Component::analyse(dpw, alphabet, env)?;
    if g.is_winning(g.mdp.mdp.initial) {
        return Ok(Ok(g));
    }
    let losing = (0..g.mdp.mdp.num_states())
        .filter(|&y| !g.is_winning(y))
        .map(|y| g.mdp.pairs[y])
        .collect();
    Ok(Err(Outcome::Unrealizable {
        losing,
        guard_states: g.dpw.num_states(),
    }))
}

fn first_index_at_least(values: &[Rational], t: &Rational) -> usize {
    values.iter().position(|v| v >= t).unwrap_or(values.len())
}

/// Expected-value optimal synthesis subject to an almost-sure lower bound
/// `t` on the value of the formula (or of the hard constraint).
pub fn synth_threshold(spec: &SynthesisSpec) -> Result<Outcome> {
    let alphabet = &spec.alphabet;
    let env = spec.environment()?;
    let t = spec.threshold.clone().unwrap_or_else(one);
    let constrained = spec.hard_constraint.as_ref().unwrap_or(&spec.formula);
    let g = match guard(constrained, &t, alphabet, &env)? {
        Ok(g) => g,
        Err(unrealizable) => return Ok(unrealizable),
    };
    let va = value_automata(spec)?;
    let from = if spec.hard_constraint.is_some() {
        0
    } else {
        first_index_at_least(&va.values, &t)
    };
    let comps = components(&va, from, alphabet, &env)?;
    let ach = Achievability::build(va.values[from..].to_vec(), comps, Some(g), None, alphabet, &env)?;
    let solved = solve_and_extract(&ach, &va, None, alphabet, &env)?;
    let measured = transducer::expected_value(&solved.transducer, &va, alphabet, &env)?;
    certify("threshold synthesis", &solved.value, &measured)?;
    let floor = match &spec.hard_constraint {
        None => transducer::almost_sure_value(&solved.transducer, &va, alphabet, &env)?,
        Some(h) => {
            let hv = ValueAutomata::build(h, alphabet)?;
            transducer::almost_sure_value(&solved.transducer, &hv, alphabet, &env)?
        }
    };
    if floor < t {
        return Err(Error::Internal(format!(
            "almost-sure value {floor} is below the threshold {t}"
        )));
    }
    Ok(Outcome::Realized(SynthesisResult {
        transducer: solved.transducer,
        value: solved.value,
        almost_sure_floor: Some(floor),
        assumption_probability: None,
        stats: solved.stats,
    }))
}

/// The assumption automaton's chain: `Pr(ψ)` and the states lying in
/// rejecting ergodic components.
struct AssumptionChain {
    dpw: Dpw,
    probability: Rational,
    rejecting: std::collections::HashSet<(usize, usize)>,
}

fn assumption_chain(psi: &Formula, alphabet: &Alphabet, env: &Environment) -> Result<AssumptionChain> {
    if !env.is_output_independent() {
        return Err(Error::Distribution(
            "assumptions need an input distribution that does not depend on outputs".into(),
        ));
    }
    let dpw = assumption_dpw(psi, alphabet)?;
    let m = induced_mdp(&dpw.as_pre(), alphabet, env)?;
    // the automaton reads inputs only, so every action induces the same chain
    let chain = m.mdp.induced_chain(&vec![Some(0); m.mdp.num_states()]);
    let erg = mc_ergodic_analysis(&chain);
    let mut probability = zero();
    let mut rejecting = std::collections::HashSet::new();
    for (comp, p) in erg.components.iter().zip(&erg.probabilities) {
        let top = comp.iter().map(|&x| dpw.ranks[m.pairs[x].0]).max().unwrap_or(1);
        if top % 2 == 0 {
            probability += p;
        } else {
            rejecting.extend(comp.iter().map(|&x| m.pairs[x]));
        }
    }
    Ok(AssumptionChain {
        dpw,
        probability,
        rejecting,
    })
}

/// `Pr(ψ)` for a Boolean formula over the inputs.
pub fn prob_of_assumption(psi: &Formula, alphabet: &Alphabet, env: &Environment) -> Result<Rational> {
    Ok(assumption_chain(psi, alphabet, env)?.probability)
}

/// Maximizes the expected value conditioned on the assumption.
pub fn synth_assume(spec: &SynthesisSpec) -> Result<SynthesisResult> {
    let alphabet = &spec.alphabet;
    let env = spec.environment()?;
    let psi = spec
        .assumption
        .as_ref()
        .ok_or_else(|| Error::Spec("no assumption given".into()))?;
    let chain = assumption_chain(psi, alphabet, &env)?;
    if chain.probability == zero() {
        return Err(Error::AssumptionHasZeroProbability);
    }
    if chain.probability == one() {
        let mut r = synth(spec)?;
        r.assumption_probability = Some(one());
        return Ok(r);
    }
    let va = value_automata(spec)?;
    let comps = components(&va, 0, alphabet, &env)?;
    let ach = Achievability::build(va.values.clone(), comps, None, Some(&chain.dpw), alphabet, &env)?;
    let reset = reset_set(&ach, &chain);
    let solved = solve_and_extract(&ach, &va, Some(&reset), alphabet, &env)?;
    let (measured, prob) = transducer::conditional_expected_value(&solved.transducer, &va, psi, alphabet, &env)?;
    certify("assumption synthesis", &solved.value, &measured)?;
    Ok(SynthesisResult {
        transducer: solved.transducer,
        value: solved.value,
        almost_sure_floor: None,
        assumption_probability: Some(prob),
        stats: solved.stats,
    })
}

fn reset_set(ach: &Achievability, chain: &AssumptionChain) -> Vec<bool> {
    (0..ach.mdp.mdp.num_states())
        .map(|x| ach.assumption_state(x).is_some_and(|k| chain.rejecting.contains(&k)))
        .collect()
}

/// Conditional expected-value synthesis with an almost-sure threshold that
/// applies under the assumption, enforced through `ψ → φ`.
pub fn synth_assume_threshold(spec: &SynthesisSpec) -> Result<Outcome> {
    let alphabet = &spec.alphabet;
    let env = spec.environment()?;
    let psi = spec
        .assumption
        .as_ref()
        .ok_or_else(|| Error::Spec("no assumption given".into()))?;
    let chain = assumption_chain(psi, alphabet, &env)?;
    if chain.probability == zero() {
        return Err(Error::AssumptionHasZeroProbability);
    }
    if chain.probability == one() {
        let mut plain = spec.clone();
        plain.assumption = None;
        let mut out = synth_threshold(&plain)?;
        if let Outcome::Realized(r) = &mut out {
            r.assumption_probability = Some(one());
        }
        return Ok(out);
    }
    let t = spec.threshold.clone().unwrap_or_else(one);
    let constrained = spec.hard_constraint.as_ref().unwrap_or(&spec.formula);
    let implication = Formula::implies(psi.clone(), constrained.clone());
    let g = match guard(&implication, &t, alphabet, &env)? {
        Ok(g) => g,
        Err(unrealizable) => return Ok(unrealizable),
    };
    let va = value_automata(spec)?;
    let from = if spec.hard_constraint.is_some() {
        0
    } else {
        first_index_at_least(&va.values, &t)
    };
    let comps = components(&va, from, alphabet, &env)?;
    let ach = Achievability::build(
        va.values[from..].to_vec(),
        comps,
        Some(g),
        Some(&chain.dpw),
        alphabet,
        &env,
    )?;
    let reset = reset_set(&ach, &chain);
    let solved = solve_and_extract(&ach, &va, Some(&reset), alphabet, &env)?;
    let (measured, prob) = transducer::conditional_expected_value(&solved.transducer, &va, psi, alphabet, &env)?;
    certify("combined synthesis", &solved.value, &measured)?;
    let floor = match &spec.hard_constraint {
        None => transducer::conditional_almost_sure_value(&solved.transducer, &va, psi, alphabet, &env)?,
        Some(h) => {
            let hv = ValueAutomata::build(h, alphabet)?;
            transducer::conditional_almost_sure_value(&solved.transducer, &hv, psi, alphabet, &env)?
        }
    };
    if floor < t {
        return Err(Error::Internal(format!(
            "conditional almost-sure value {floor} is below the threshold {t}"
        )));
    }
    Ok(Outcome::Realized(SynthesisResult {
        transducer: solved.transducer,
        value: solved.value,
        almost_sure_floor: Some(floor),
        assumption_probability: Some(prob),
        stats: solved.stats,
    }))
}
