//! Markov decision processes: construction from pre-automata, end components,
//! qualitative parity solving, mean payoff and Markov-chain analysis.

mod chain;
mod dist;
mod ec;
pub mod linear;
mod mean_payoff;

pub use chain::{mc_ergodic_analysis, ErgodicAnalysis, MarkovChain};
pub use dist::{CompiledDistribution, DistributionMdp, DistributionState, DistributionTransition, Environment};
pub use ec::{
    almost_sure_parity, almost_sure_reach, attractor_in, cwr_states, max_end_components, mecs_within, visit_strategy,
    CwrAnalysis, EndComponent, ParityWin,
};
pub use mean_payoff::{solve_mean_payoff, strategy_value, MeanPayoff};

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use crate::automata::{state_ceiling, PreAutomaton};
use crate::error::{Error, Result};
use crate::fltl::{Alphabet, Letter};
use crate::rational::{format_rational, Rational};

/// One available action: its label (an output letter, or a synthetic index
/// in derived MDPs) and its successor distribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Action {
    pub label: Letter,
    pub succ: Vec<(usize, Rational)>,
}

impl Action {
    pub fn targets(&self) -> impl Iterator<Item = usize> + '_ {
        self.succ.iter().map(|(t, _)| *t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreMdp {
    pub initial: usize,
    pub actions: Vec<Vec<Action>>,
}

/// Memoryless strategy: an action index per state, `None` where unused.
pub type Strategy = Vec<Option<usize>>;

#[derive(Clone, Debug)]
pub struct ParityMdp {
    pub mdp: PreMdp,
    pub ranks: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct RewardMdp {
    pub mdp: PreMdp,
    pub rewards: Vec<Rational>,
}

impl PreMdp {
    pub fn num_states(&self) -> usize {
        self.actions.len()
    }

    pub fn num_choices(&self) -> usize {
        self.actions.iter().map(Vec::len).sum()
    }

    /// Distinct successors over all actions.
    pub fn successors(&self, s: usize) -> Vec<usize> {
        let mut t: Vec<usize> = self.actions[s].iter().flat_map(|a| a.targets()).collect();
        t.sort_unstable();
        t.dedup();
        t
    }

    /// Every action distribution sums to one.
    pub fn is_stochastic(&self) -> bool {
        self.actions
            .iter()
            .flatten()
            .all(|a| a.succ.iter().map(|(_, p)| p.clone()).sum::<Rational>() == crate::rational::one())
    }

    /// The chain induced by a memoryless strategy. States without a choice
    /// become absorbing.
    pub fn induced_chain(&self, strategy: &[Option<usize>]) -> MarkovChain {
        MarkovChain {
            initial: self.initial,
            succ: (0..self.num_states())
                .map(|s| match strategy[s] {
                    Some(a) => self.actions[s][a].succ.clone(),
                    None => vec![(s, crate::rational::one())],
                })
                .collect(),
        }
    }

    /// JSON debug dump: states, actions, `"num/den"` probabilities and the
    /// optional per-state annotations.
    pub fn to_json(&self, ranks: Option<&[u32]>, rewards: Option<&[Rational]>) -> serde_json::Value {
        #[derive(Serialize)]
        struct A {
            label: Letter,
            succ: Vec<(usize, String)>,
        }
        #[derive(Serialize)]
        struct S {
            id: usize,
            actions: Vec<A>,
            #[serde(skip_serializing_if = "Option::is_none")]
            rank: Option<u32>,
            #[serde(skip_serializing_if = "Option::is_none")]
            reward: Option<String>,
        }
        let states: Vec<S> = (0..self.num_states())
            .map(|s| S {
                id: s,
                actions: self.actions[s]
                    .iter()
                    .map(|a| A {
                        label: a.label,
                        succ: a.succ.iter().map(|(t, p)| (*t, format_rational(p))).collect(),
                    })
                    .collect(),
                rank: ranks.map(|r| r[s]),
                reward: rewards.map(|r| format_rational(&r[s])),
            })
            .collect();
        serde_json::json!({ "initial": self.initial, "states": states })
    }
}

/// MDP induced by a pre-automaton under an input environment, with the
/// `(automaton state, environment state)` pair behind each MDP state.
#[derive(Clone, Debug)]
pub struct InducedMdp {
    pub mdp: PreMdp,
    pub pairs: Vec<(usize, usize)>,
    pub index: HashMap<(usize, usize), usize>,
}

/// Builds the reachable MDP over `B × env`. Output `o` is available at a
/// state iff `B` defines a transition for every input the environment can
/// produce next under `o`.
pub fn induced_mdp(b: &PreAutomaton, alphabet: &Alphabet, env: &Environment) -> Result<InducedMdp> {
    induced_mdp_filtered(b, alphabet, env, &|_, _, _| true)
}

/// As [`induced_mdp`], additionally dropping output `o` at `(q, e)` unless
/// `allow(q, e, o)`.
pub fn induced_mdp_filtered(
    b: &PreAutomaton,
    alphabet: &Alphabet,
    env: &Environment,
    allow: &dyn Fn(usize, usize, Letter) -> bool,
) -> Result<InducedMdp> {
    let ceiling = state_ceiling();
    let start = (b.initial, env.initial());
    let mut pairs = vec![start];
    let mut index: HashMap<(usize, usize), usize> = HashMap::from([(start, 0)]);
    let mut actions = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let (q, e) = pairs[s];
        let mut row = Vec::new();
        'outputs: for o in 0..alphabet.num_output_letters() as Letter {
            if !allow(q, e, o) {
                continue;
            }
            let mut dist: BTreeMap<usize, Rational> = BTreeMap::new();
            let mut pending = Vec::new();
            for (e2, input, p) in env.successors(e, o, alphabet) {
                let Some(q2) = b.delta[q][alphabet.join(input, o) as usize] else {
                    continue 'outputs;
                };
                pending.push(((q2, e2), p));
            }
            for (key, p) in pending {
                let id = match index.get(&key) {
                    Some(&id) => id,
                    None => {
                        let id = pairs.len();
                        if id >= ceiling {
                            return Err(Error::StateCeiling {
                                what: "MDP".into(),
                                ceiling,
                            });
                        }
                        index.insert(key, id);
                        pairs.push(key);
                        queue.push_back(id);
                        id
                    }
                };
                *dist.entry(id).or_insert_with(crate::rational::zero) += p;
            }
            row.push(Action {
                label: o,
                succ: dist.into_iter().collect(),
            });
        }
        actions.push(row);
    }
    Ok(InducedMdp {
        mdp: PreMdp { initial: 0, actions },
        pairs,
        index,
    })
}

/// Uniform-input MDP over the states of `B`.
pub fn induced_pre_mdp(b: &PreAutomaton, alphabet: &Alphabet) -> Result<InducedMdp> {
    induced_mdp(b, alphabet, &Environment::Uniform)
}

/// MDP of `B` under the input distribution `d`, over `Q × S_D`.
pub fn induced_pre_mdp_dist(b: &PreAutomaton, alphabet: &Alphabet, d: &DistributionMdp) -> Result<InducedMdp> {
    induced_mdp(b, alphabet, &Environment::Mdp(d.compile(alphabet)?))
}
