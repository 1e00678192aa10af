use std::collections::{HashMap, VecDeque};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Transducer;
use crate::automata::{dpw_for, state_ceiling, Dpw};
use crate::boolean::ValuePredicate;
use crate::error::{Error, Result};
use crate::fltl::{Alphabet, Formula, LassoWord, Letter};
use crate::mdp::{mc_ergodic_analysis, Environment, ErgodicAnalysis, MarkovChain};
use crate::rational::{one, to_f64, zero, Rational};

/// `V(φ)` in ascending order with one DPW per value.
#[derive(Clone, Debug)]
pub struct ValueAutomata {
    pub values: Vec<Rational>,
    pub dpws: Vec<Dpw>,
}

impl ValueAutomata {
    pub fn build(f: &Formula, alphabet: &Alphabet) -> Result<ValueAutomata> {
        let values = f.values();
        let dpws = values
            .iter()
            .map(|v| dpw_for(f, &ValuePredicate::EqualTo(v.clone()), alphabet))
            .collect::<Result<Vec<_>>>()?;
        Ok(ValueAutomata { values, dpws })
    }
}

fn check_alphabet(t: &Transducer, alphabet: &Alphabet) -> Result<()> {
    t.validate()?;
    if t.inputs != alphabet.inputs() || t.outputs != alphabet.outputs() {
        return Err(Error::Transducer(format!(
            "transducer alphabet I={:?} O={:?} does not match the specification's I={:?} O={:?}",
            t.inputs,
            t.outputs,
            alphabet.inputs(),
            alphabet.outputs()
        )));
    }
    Ok(())
}

/// The output the environment reacts to in transducer state `q`. Only
/// needed when the environment depends on outputs, in which case all
/// successors of `q` must agree on their label.
fn predicted_output(t: &Transducer, q: usize, env: &Environment) -> Result<Letter> {
    if env.is_output_independent() {
        return Ok(0);
    }
    let first = t.labels[t.delta[q][0]];
    if t.delta[q].iter().any(|&s| t.labels[s] != first) {
        return Err(Error::Transducer(format!(
            "state {q}: successors disagree on their output, so an output-dependent input distribution is undefined"
        )));
    }
    Ok(first)
}

/// Markov chain of `T × A_1 × … × A_k × env` with the component states of
/// every chain state.
struct ProductChain {
    chain: MarkovChain,
    components: Vec<Vec<usize>>,
}

fn product_chain(t: &Transducer, dpws: &[&Dpw], alphabet: &Alphabet, env: &Environment) -> Result<ProductChain> {
    let ceiling = state_ceiling();
    type Key = (usize, Vec<usize>, usize);
    let start: Key = (t.initial, dpws.iter().map(|d| d.initial).collect(), env.initial());
    let mut keys = vec![start.clone()];
    let mut index: HashMap<Key, usize> = HashMap::from([(start, 0)]);
    let mut succ = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        let (q, auts, e) = keys[x].clone();
        let o = predicted_output(t, q, env)?;
        let mut row: Vec<(usize, Rational)> = Vec::new();
        for (e2, i, p) in env.successors(e, o, alphabet) {
            let q2 = t.delta[q][i as usize];
            let letter = alphabet.join(i, t.labels[q2]) as usize;
            let auts2: Vec<usize> = dpws.iter().zip(&auts).map(|(d, &a)| d.delta[a][letter]).collect();
            let key = (q2, auts2, e2);
            let id = match index.get(&key) {
                Some(&id) => id,
                None => {
                    let id = keys.len();
                    if id >= ceiling {
                        return Err(Error::StateCeiling {
                            what: "evaluation chain".into(),
                            ceiling,
                        });
                    }
                    index.insert(key.clone(), id);
                    keys.push(key);
                    queue.push_back(id);
                    id
                }
            };
            match row.iter_mut().find(|(s, _)| *s == id) {
                Some((_, acc)) => *acc += p,
                None => row.push((id, p)),
            }
        }
        succ.push(row);
    }
    Ok(ProductChain {
        chain: MarkovChain { initial: 0, succ },
        components: keys.into_iter().map(|(_, a, _)| a).collect(),
    })
}

fn accepts(pc: &ProductChain, dpw: &Dpw, k: usize, comp: &[usize]) -> bool {
    comp.iter().map(|&x| dpw.ranks[pc.components[x][k]]).max().unwrap_or(1) % 2 == 0
}

/// Ergodic analysis with each component's satisfaction value and, when an
/// assumption automaton is appended, whether it accepts there.
struct Classified {
    erg: ErgodicAnalysis,
    values: Vec<Rational>,
    assumed: Vec<bool>,
    chain: MarkovChain,
}

fn classify(
    t: &Transducer,
    va: &ValueAutomata,
    assumption: Option<&Dpw>,
    alphabet: &Alphabet,
    env: &Environment,
) -> Result<Classified> {
    check_alphabet(t, alphabet)?;
    let mut dpws: Vec<&Dpw> = va.dpws.iter().collect();
    if let Some(a) = assumption {
        dpws.push(a);
    }
    let pc = product_chain(t, &dpws, alphabet, env)?;
    let erg = mc_ergodic_analysis(&pc.chain);
    let mut values = Vec::with_capacity(erg.components.len());
    let mut assumed = Vec::with_capacity(erg.components.len());
    for comp in &erg.components {
        let hits: Vec<usize> = (0..va.dpws.len())
            .filter(|&k| accepts(&pc, &va.dpws[k], k, comp))
            .collect();
        if hits.len() != 1 {
            return Err(Error::Internal(format!(
                "ergodic component classified under {} values instead of exactly one",
                hits.len()
            )));
        }
        values.push(va.values[hits[0]].clone());
        assumed.push(assumption.is_none_or(|a| accepts(&pc, a, va.dpws.len(), comp)));
    }
    Ok(Classified {
        erg,
        values,
        assumed,
        chain: pc.chain,
    })
}

fn assumption_dpw(psi: &Formula, alphabet: &Alphabet) -> Result<Dpw> {
    dpw_for(psi, &ValuePredicate::EqualTo(one()), alphabet)
}

/// `⟦T,φ⟧_s`: the expected satisfaction value.
pub fn expected_value(t: &Transducer, va: &ValueAutomata, alphabet: &Alphabet, env: &Environment) -> Result<Rational> {
    let c = classify(t, va, None, alphabet, env)?;
    Ok(c.erg.probabilities.iter().zip(&c.values).map(|(p, v)| p * v).sum())
}

/// `E[X_{T,φ} | w ⊨ ψ]` together with `Pr(ψ)`.
pub fn conditional_expected_value(
    t: &Transducer,
    va: &ValueAutomata,
    psi: &Formula,
    alphabet: &Alphabet,
    env: &Environment,
) -> Result<(Rational, Rational)> {
    let a = assumption_dpw(psi, alphabet)?;
    let c = classify(t, va, Some(&a), alphabet, env)?;
    let mut mass = zero();
    let mut total = zero();
    for k in 0..c.values.len() {
        if c.assumed[k] {
            mass += &c.erg.probabilities[k];
            total += &c.erg.probabilities[k] * &c.values[k];
        }
    }
    if mass == zero() {
        return Err(Error::AssumptionHasZeroProbability);
    }
    Ok((total / &mass, mass))
}

/// `⟦T,φ⟧_a`: the largest value attained with probability one.
pub fn almost_sure_value(
    t: &Transducer,
    va: &ValueAutomata,
    alphabet: &Alphabet,
    env: &Environment,
) -> Result<Rational> {
    let c = classify(t, va, None, alphabet, env)?;
    Ok(c.values.into_iter().min().expect("some ergodic component"))
}

/// Largest `v` with `Pr(⟦T(w),φ⟧ ≥ v | w ⊨ ψ) = 1`.
pub fn conditional_almost_sure_value(
    t: &Transducer,
    va: &ValueAutomata,
    psi: &Formula,
    alphabet: &Alphabet,
    env: &Environment,
) -> Result<Rational> {
    let a = assumption_dpw(psi, alphabet)?;
    let c = classify(t, va, Some(&a), alphabet, env)?;
    (0..c.values.len())
        .filter(|&k| c.assumed[k])
        .map(|k| c.values[k].clone())
        .min()
        .ok_or(Error::AssumptionHasZeroProbability)
}

/// `⟦T,φ⟧_w` with an input lasso whose computation attains it.
#[derive(Clone, Debug)]
pub struct WorstCase {
    pub value: Rational,
    pub inputs: LassoWord,
    pub computation: LassoWord,
}

/// Minimum satisfaction value over all input words.
pub fn worst_case_value(t: &Transducer, va: &ValueAutomata, alphabet: &Alphabet) -> Result<WorstCase> {
    check_alphabet(t, alphabet)?;
    for (v, dpw) in va.values.iter().zip(&va.dpws) {
        let product = transducer_product(t, dpw, alphabet);
        if let Some(inputs) = product.accepted_lasso_from(product.initial) {
            let computation = computation_lasso(t, &inputs, alphabet);
            return Ok(WorstCase {
                value: v.clone(),
                inputs,
                computation,
            });
        }
    }
    Err(Error::Internal(
        "no value automaton accepts any computation of the transducer".into(),
    ))
}

/// `T × A` as a parity automaton over input letters.
fn transducer_product(t: &Transducer, dpw: &Dpw, alphabet: &Alphabet) -> Dpw {
    let k = alphabet.num_input_letters();
    let mut keys = vec![(t.initial, dpw.initial)];
    let mut index: HashMap<(usize, usize), usize> = HashMap::from([((t.initial, dpw.initial), 0)]);
    let mut delta = Vec::new();
    let mut i = 0;
    while i < keys.len() {
        let (q, a) = keys[i];
        let row = (0..k as Letter)
            .map(|inp| {
                let q2 = t.delta[q][inp as usize];
                let a2 = dpw.step(a, alphabet.join(inp, t.labels[q2]));
                *index.entry((q2, a2)).or_insert_with(|| {
                    keys.push((q2, a2));
                    keys.len() - 1
                })
            })
            .collect();
        delta.push(row);
        i += 1;
    }
    Dpw {
        num_atoms: alphabet.num_inputs(),
        initial: 0,
        delta,
        ranks: keys.iter().map(|&(_, a)| dpw.ranks[a]).collect(),
    }
}

/// The computation of `T` on an input lasso, as a lasso over `2^{I∪O}`.
pub fn computation_lasso(t: &Transducer, inputs: &LassoWord, alphabet: &Alphabet) -> LassoWord {
    let mut q = t.initial;
    let mut prefix = Vec::new();
    let emit = |q: &mut usize, i: Letter| -> Letter {
        *q = t.delta[*q][i as usize];
        alphabet.join(i, t.labels[*q])
    };
    for &i in &inputs.prefix {
        prefix.push(emit(&mut q, i));
    }
    // unroll whole periods until the state at a period boundary repeats
    let mut boundary: Vec<usize> = Vec::new();
    let mut blocks: Vec<Vec<Letter>> = Vec::new();
    while !boundary.contains(&q) {
        boundary.push(q);
        blocks.push(inputs.period.iter().map(|&i| emit(&mut q, i)).collect());
    }
    let start = boundary.iter().position(|&b| b == q).expect("repeated boundary");
    for b in &blocks[..start] {
        prefix.extend(b);
    }
    LassoWord::new(prefix, blocks[start..].concat())
}

#[derive(Clone, Debug)]
pub struct Simulation {
    pub estimate: Rational,
    pub samples: Vec<Rational>,
    pub exact: Rational,
}

impl Simulation {
    /// Sample standard deviation over `√n`.
    pub fn standard_error(&self) -> f64 {
        let n = self.samples.len() as f64;
        if self.samples.len() < 2 {
            return 0.0;
        }
        let mean = to_f64(&self.estimate);
        let ss: f64 = self.samples.iter().map(|v| (to_f64(v) - mean).powi(2)).sum();
        (ss / (n - 1.0)).sqrt() / n.sqrt()
    }
}

/// Monte-Carlo estimate of `⟦T,φ⟧_s`: each sample walks the product chain
/// until it enters an ergodic component and records that component's value.
pub fn simulate(
    t: &Transducer,
    va: &ValueAutomata,
    alphabet: &Alphabet,
    env: &Environment,
    samples: usize,
    seed: u64,
) -> Result<Simulation> {
    if samples == 0 {
        return Err(Error::Spec("at least one sample is required".into()));
    }
    let c = classify(t, va, None, alphabet, env)?;
    let exact = c.erg.probabilities.iter().zip(&c.values).map(|(p, v)| p * v).sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(samples);
    let mut sum = zero();
    for _ in 0..samples {
        let mut x = c.chain.initial;
        while c.erg.component_of[x].is_none() {
            x = c.chain.sample_step(x, &mut rng);
        }
        let v = c.values[c.erg.component_of[x].expect("absorbed")].clone();
        sum += &v;
        values.push(v);
    }
    Ok(Simulation {
        estimate: sum / Rational::from_integer((samples as i64).into()),
        samples: values,
        exact,
    })
}
