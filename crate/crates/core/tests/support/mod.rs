//! Exhaustive reference implementations for small MDPs.
#![allow(dead_code)]

pub mod formulas;
pub mod suites;

use hqsynth::graph;
use hqsynth::mdp::{mc_ergodic_analysis, Action, PreMdp, RewardMdp, Strategy};
use hqsynth::rational::{rat, Rational};
use rand::Rng;

pub fn random_mdp<R: Rng>(rng: &mut R, n: usize) -> PreMdp {
    let actions = (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=3);
            (0..k)
                .map(|label| {
                    let a = rng.gen_range(0..n);
                    if rng.gen_bool(0.5) {
                        Action {
                            label,
                            succ: vec![(a, rat(1, 1))],
                        }
                    } else {
                        let b = (a + rng.gen_range(1..n.max(2))) % n;
                        let num = rng.gen_range(1..4);
                        if a == b {
                            Action {
                                label,
                                succ: vec![(a, rat(1, 1))],
                            }
                        } else {
                            Action {
                                label,
                                succ: vec![(a, rat(num, 4)), (b, rat(4 - num, 4))],
                            }
                        }
                    }
                })
                .collect()
        })
        .collect();
    PreMdp { initial: 0, actions }
}

fn staying(mdp: &PreMdp, set: u32, s: usize) -> Vec<usize> {
    (0..mdp.actions[s].len())
        .filter(|&a| mdp.actions[s][a].targets().all(|t| set & (1 << t) != 0))
        .collect()
}

/// Whether the state set encoded by `set` is an end component.
pub fn is_end_component(mdp: &PreMdp, set: u32) -> bool {
    let n = mdp.num_states();
    let members: Vec<usize> = (0..n).filter(|&s| set & (1 << s) != 0).collect();
    if members.is_empty() || members.iter().any(|&s| staying(mdp, set, s).is_empty()) {
        return false;
    }
    let alive: Vec<bool> = (0..n).map(|s| set & (1 << s) != 0).collect();
    let succ = |s: usize| -> Vec<usize> {
        staying(mdp, set, s)
            .into_iter()
            .flat_map(|a| mdp.actions[s][a].targets().collect::<Vec<_>>())
            .collect()
    };
    graph::scc(n, &alive, succ).len() == 1
}

pub fn all_end_components(mdp: &PreMdp) -> Vec<u32> {
    (1u32..(1 << mdp.num_states()))
        .filter(|&s| is_end_component(mdp, s))
        .collect()
}

pub fn maximal_end_components(mdp: &PreMdp) -> Vec<u32> {
    let all = all_end_components(mdp);
    let mut out: Vec<u32> = all
        .iter()
        .copied()
        .filter(|&s| !all.iter().any(|&t| t != s && t & s == s))
        .collect();
    out.sort_unstable();
    out
}

pub fn cwr_oracle(mdp: &PreMdp, ranks: &[u32]) -> Vec<bool> {
    let n = mdp.num_states();
    let mut out = vec![false; n];
    for ec in all_end_components(mdp) {
        let top = (0..n).filter(|&s| ec & (1 << s) != 0).map(|s| ranks[s]).max().unwrap();
        if top % 2 == 0 {
            for s in 0..n {
                if ec & (1 << s) != 0 && ranks[s] == top {
                    out[s] = true;
                }
            }
        }
    }
    out
}

/// Every memoryless deterministic strategy (states without actions get `None`).
pub fn all_strategies(mdp: &PreMdp) -> Vec<Strategy> {
    let mut out: Vec<Strategy> = vec![vec![]];
    for s in 0..mdp.num_states() {
        let k = mdp.actions[s].len();
        out = out
            .into_iter()
            .flat_map(|p| {
                let opts: Vec<Option<usize>> = if k == 0 { vec![None] } else { (0..k).map(Some).collect() };
                opts.into_iter().map(move |a| {
                    let mut p = p.clone();
                    p.push(a);
                    p
                })
            })
            .collect();
    }
    out
}

/// Whether every ergodic component reachable from `from` under `strategy`
/// has an even maximal rank.
pub fn wins_parity_from(mdp: &PreMdp, ranks: &[u32], strategy: &[Option<usize>], from: usize) -> bool {
    let mut chain = mdp.induced_chain(strategy);
    chain.initial = from;
    let erg = mc_ergodic_analysis(&chain);
    erg.components
        .iter()
        .all(|c| c.iter().map(|&s| ranks[s]).max().unwrap() % 2 == 0)
}

pub fn almost_sure_oracle(mdp: &PreMdp, ranks: &[u32]) -> Vec<bool> {
    let strategies = all_strategies(mdp);
    (0..mdp.num_states())
        .map(|s| strategies.iter().any(|f| wins_parity_from(mdp, ranks, f, s)))
        .collect()
}

/// Rewards constant per maximal end component, zero elsewhere.
pub fn mec_constant_rewards<R: Rng>(rng: &mut R, mdp: &PreMdp) -> Vec<Rational> {
    let choices = [rat(0, 1), rat(1, 3), rat(1, 2), rat(3, 4), rat(1, 1)];
    let mut rewards = vec![rat(0, 1); mdp.num_states()];
    for mec in maximal_end_components(mdp) {
        let r = choices[rng.gen_range(0..choices.len())].clone();
        for (s, slot) in rewards.iter_mut().enumerate() {
            if mec & (1 << s) != 0 {
                *slot = r.clone();
            }
        }
    }
    rewards
}

pub fn best_strategy_value(rm: &RewardMdp) -> Rational {
    all_strategies(&rm.mdp)
        .iter()
        .map(|f| hqsynth::mdp::strategy_value(rm, f))
        .max()
        .unwrap()
}
