use std::collections::BTreeMap;

use super::ec::attractor_in;
use super::{linear, max_end_components, mc_ergodic_analysis, EndComponent, RewardMdp, Strategy};
use crate::error::{Error, Result};
use crate::rational::{one, zero, Rational};

/// Optimal mean payoff with the MEC-quotient decisions behind it.
#[derive(Clone, Debug)]
pub struct MeanPayoff {
    pub value: Rational,
    pub state_values: Vec<Rational>,
    pub strategy: Strategy,
    pub mecs: Vec<EndComponent>,
    pub mec_of: Vec<Option<usize>>,
    /// Per MEC: whether the optimal play settles in it.
    pub stays: Vec<bool>,
}

#[derive(Clone, Debug)]
enum Choice {
    Stay,
    Move(usize, usize),
}

struct Quotient {
    /// per node: (choice, successor node distribution)
    actions: Vec<Vec<(Choice, BTreeMap<usize, Rational>)>>,
    stay_reward: Vec<Option<Rational>>,
}

fn build_quotient(rm: &RewardMdp, mecs: &[EndComponent], node_of: &[usize]) -> Quotient {
    let mdp = &rm.mdp;
    let nodes = node_of.iter().max().map_or(0, |m| m + 1);
    let mut actions: Vec<Vec<(Choice, BTreeMap<usize, Rational>)>> = vec![Vec::new(); nodes];
    let mut stay_reward = vec![None; nodes];
    let lift = |s: usize, a: usize| -> BTreeMap<usize, Rational> {
        let mut d = BTreeMap::new();
        for (t, p) in &mdp.actions[s][a].succ {
            *d.entry(node_of[*t]).or_insert_with(zero) += p;
        }
        d
    };
    for (k, ec) in mecs.iter().enumerate() {
        stay_reward[k] = Some(rm.rewards[ec.states[0]].clone());
        actions[k].push((Choice::Stay, BTreeMap::from([(k, one())])));
        for &s in &ec.states {
            for a in 0..mdp.actions[s].len() {
                if !ec.actions[&s].contains(&a) {
                    actions[k].push((Choice::Move(s, a), lift(s, a)));
                }
            }
        }
    }
    for s in 0..mdp.num_states() {
        if node_of[s] >= mecs.len() {
            for a in 0..mdp.actions[s].len() {
                actions[node_of[s]].push((Choice::Move(s, a), lift(s, a)));
            }
        }
    }
    Quotient { actions, stay_reward }
}

/// Expected terminal reward of every quotient node under `policy`.
fn evaluate(q: &Quotient, policy: &[usize]) -> Vec<Rational> {
    let nodes = q.actions.len();
    let mut fixed: Vec<Option<Rational>> = vec![None; nodes];
    for v in 0..nodes {
        if q.actions[v].is_empty() {
            fixed[v] = Some(zero());
        } else if let Choice::Stay = q.actions[v][policy[v]].0 {
            fixed[v] = q.stay_reward[v].clone();
        }
    }
    let free: Vec<usize> = (0..nodes).filter(|&v| fixed[v].is_none()).collect();
    let mut local = vec![usize::MAX; nodes];
    for (i, &v) in free.iter().enumerate() {
        local[v] = i;
    }
    let mut rows = Vec::with_capacity(free.len());
    let mut rhs = Vec::with_capacity(free.len());
    for &v in &free {
        let mut row = BTreeMap::from([(local[v], one())]);
        let mut b = zero();
        for (t, p) in &q.actions[v][policy[v]].1 {
            match &fixed[*t] {
                Some(x) => b += p * x,
                None => *row.entry(local[*t]).or_insert_with(zero) -= p,
            }
        }
        row.retain(|_, x| *x != zero());
        rows.push(row);
        rhs.push(vec![b]);
    }
    let order = linear::postorder(&rows);
    let x = linear::solve(rows, rhs, &order);
    (0..nodes)
        .map(|v| match &fixed[v] {
            Some(r) => r.clone(),
            None => x[local[v]][0].clone(),
        })
        .collect()
}

fn q_value(q: &Quotient, v: usize, a: usize, values: &[Rational]) -> Rational {
    match q.actions[v][a].0 {
        Choice::Stay => q.stay_reward[v].clone().expect("stay outside a MEC"),
        Choice::Move(..) => q.actions[v][a].1.iter().map(|(t, p)| p * &values[*t]).sum(),
    }
}

/// Maximal expected mean payoff from the initial state of an MDP whose
/// rewards are constant on every maximal end component.
pub fn solve_mean_payoff(rm: &RewardMdp) -> Result<MeanPayoff> {
    let mdp = &rm.mdp;
    let n = mdp.num_states();
    let mecs = max_end_components(mdp);
    let mut mec_of = vec![None; n];
    for (k, ec) in mecs.iter().enumerate() {
        if ec.states.iter().any(|&s| rm.rewards[s] != rm.rewards[ec.states[0]]) {
            return Err(Error::NonConstantEndComponent {
                states: ec.states.clone(),
            });
        }
        for &s in &ec.states {
            mec_of[s] = Some(k);
        }
    }
    let mut next = mecs.len();
    let node_of: Vec<usize> = (0..n)
        .map(|s| {
            mec_of[s].unwrap_or_else(|| {
                next += 1;
                next - 1
            })
        })
        .collect();
    let q = build_quotient(rm, &mecs, &node_of);
    let nodes = q.actions.len();
    let mut policy = vec![0usize; nodes];
    let values = loop {
        let values = evaluate(&q, &policy);
        let mut changed = false;
        for (v, choice) in policy.iter_mut().enumerate() {
            if q.actions[v].is_empty() {
                continue;
            }
            let current = q_value(&q, v, *choice, &values);
            let scores: Vec<Rational> = (0..q.actions[v].len()).map(|a| q_value(&q, v, a, &values)).collect();
            let best = scores.iter().max().expect("nonempty").clone();
            if best > current {
                *choice = scores.iter().position(|x| *x == best).expect("max present");
                changed = true;
            }
        }
        if !changed {
            break values;
        }
    };

    let mut strategy: Strategy = vec![None; n];
    let mut stays = vec![false; mecs.len()];
    for (k, ec) in mecs.iter().enumerate() {
        match q.actions[k][policy[k]].0 {
            Choice::Stay => {
                stays[k] = true;
                for &s in &ec.states {
                    strategy[s] = Some(ec.actions[&s][0]);
                }
            }
            Choice::Move(exit, a) => {
                let inner = attractor_in(mdp, ec, exit);
                for &s in &ec.states {
                    strategy[s] = inner[s];
                }
                strategy[exit] = Some(a);
            }
        }
    }
    for s in 0..n {
        if mec_of[s].is_none() && !q.actions[node_of[s]].is_empty() {
            if let Choice::Move(_, a) = q.actions[node_of[s]][policy[node_of[s]]].0 {
                strategy[s] = Some(a);
            }
        }
    }
    let state_values: Vec<Rational> = (0..n).map(|s| values[node_of[s]].clone()).collect();
    Ok(MeanPayoff {
        value: state_values[mdp.initial].clone(),
        state_values,
        strategy,
        mecs,
        mec_of,
        stays,
    })
}

/// Exact mean payoff of a memoryless strategy; rewards are read on the
/// ergodic components of the induced chain.
pub fn strategy_value(rm: &RewardMdp, strategy: &[Option<usize>]) -> Rational {
    let chain = rm.mdp.induced_chain(strategy);
    let erg = mc_ergodic_analysis(&chain);
    erg.components
        .iter()
        .zip(&erg.probabilities)
        .map(|(comp, p)| {
            let reward: Rational = comp
                .iter()
                .map(|&s| rm.rewards[s].clone())
                .min()
                .expect("nonempty component");
            p * reward
        })
        .sum()
}
