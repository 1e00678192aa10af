use std::collections::BTreeMap;

use super::{ParityMdp, PreMdp, Strategy};
use crate::graph;

/// A set of states with, per state, the action indices that keep the play
/// inside; strongly connected under those actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndComponent {
    pub states: Vec<usize>,
    pub actions: BTreeMap<usize, Vec<usize>>,
}

impl EndComponent {
    pub fn contains(&self, s: usize) -> bool {
        self.states.binary_search(&s).is_ok()
    }

    /// Closure: every listed action stays inside, every state has one, and
    /// the component is strongly connected under the listed actions.
    pub fn is_end_component_of(&self, mdp: &PreMdp) -> bool {
        if self.states.is_empty() {
            return false;
        }
        for &s in &self.states {
            let Some(acts) = self.actions.get(&s) else { return false };
            if acts.is_empty() {
                return false;
            }
            if acts
                .iter()
                .any(|&a| mdp.actions[s][a].targets().any(|t| !self.contains(t)))
            {
                return false;
            }
        }
        let n = mdp.num_states();
        let mut alive = vec![false; n];
        for &s in &self.states {
            alive[s] = true;
        }
        let comps = graph::scc(n, &alive, |s| self.targets(mdp, s));
        comps.len() == 1
    }

    fn targets(&self, mdp: &PreMdp, s: usize) -> Vec<usize> {
        self.actions[&s]
            .iter()
            .flat_map(|&a| mdp.actions[s][a].targets())
            .collect()
    }
}

/// Maximal end components of the sub-MDP on `within`, using only actions
/// enabled in `mask`.
fn mecs_masked(mdp: &PreMdp, mut mask: Vec<Vec<bool>>, mut alive: Vec<bool>) -> Vec<EndComponent> {
    let n = mdp.num_states();
    loop {
        let mut changed = false;
        for s in 0..n {
            if !alive[s] {
                continue;
            }
            for (a, act) in mdp.actions[s].iter().enumerate() {
                if mask[s][a] && act.targets().any(|t| !alive[t]) {
                    mask[s][a] = false;
                }
            }
            if !mask[s].iter().any(|&m| m) {
                alive[s] = false;
                changed = true;
            }
        }
        if changed {
            continue;
        }
        let succ = |s: usize| -> Vec<usize> {
            mdp.actions[s]
                .iter()
                .enumerate()
                .filter(|(a, _)| mask[s][*a])
                .flat_map(|(_, act)| act.targets())
                .collect()
        };
        let comps = graph::scc(n, &alive, succ);
        let mut comp_of = vec![usize::MAX; n];
        for (c, comp) in comps.iter().enumerate() {
            for &s in comp {
                comp_of[s] = c;
            }
        }
        for s in 0..n {
            if !alive[s] {
                continue;
            }
            for (a, act) in mdp.actions[s].iter().enumerate() {
                if mask[s][a] && act.targets().any(|t| comp_of[t] != comp_of[s]) {
                    mask[s][a] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return comps
                .into_iter()
                .map(|states| {
                    let actions = states
                        .iter()
                        .map(|&s| (s, (0..mask[s].len()).filter(|&a| mask[s][a]).collect()))
                        .collect();
                    EndComponent { states, actions }
                })
                .collect();
        }
    }
}

fn full_mask(mdp: &PreMdp) -> Vec<Vec<bool>> {
    mdp.actions.iter().map(|acts| vec![true; acts.len()]).collect()
}

/// Maximal end components of the sub-MDP induced by the states in `within`.
pub fn mecs_within(mdp: &PreMdp, within: &[bool]) -> Vec<EndComponent> {
    mecs_masked(mdp, full_mask(mdp), within.to_vec())
}

pub fn max_end_components(mdp: &PreMdp) -> Vec<EndComponent> {
    mecs_within(mdp, &vec![true; mdp.num_states()])
}

/// End components witnessing controllable win recurrence.
#[derive(Clone, Debug)]
pub struct CwrAnalysis {
    pub cwr: Vec<bool>,
    /// Good end components with their (even) maximal rank.
    pub components: Vec<(u32, EndComponent)>,
    /// Index into `components` of the witness recorded for each c.w.r. state.
    pub witness: Vec<Option<usize>>,
}

impl CwrAnalysis {
    /// States lying in some witness component.
    pub fn covered(&self) -> Vec<bool> {
        let mut out = vec![false; self.cwr.len()];
        for (_, ec) in &self.components {
            for &s in &ec.states {
                out[s] = true;
            }
        }
        out
    }
}

pub fn cwr_states(pm: &ParityMdp) -> CwrAnalysis {
    let n = pm.mdp.num_states();
    let mut evens: Vec<u32> = pm.ranks.iter().copied().filter(|r| r % 2 == 0).collect();
    evens.sort_unstable();
    evens.dedup();
    let mut cwr = vec![false; n];
    let mut witness = vec![None; n];
    let mut components = Vec::new();
    for d in evens {
        let within: Vec<bool> = pm.ranks.iter().map(|&r| r <= d).collect();
        for ec in mecs_within(&pm.mdp, &within) {
            let tops: Vec<usize> = ec.states.iter().copied().filter(|&s| pm.ranks[s] == d).collect();
            if tops.is_empty() {
                continue;
            }
            let id = components.len();
            for s in tops {
                cwr[s] = true;
                witness[s].get_or_insert(id);
            }
            components.push((d, ec));
        }
    }
    CwrAnalysis {
        cwr,
        components,
        witness,
    }
}

/// Almost-sure reachability of `target` while staying in `within`, using
/// only actions enabled in `mask`. Returns the winning set and, for winning
/// non-target states, an action that keeps the play winning and makes
/// progress towards the target.
fn reach_masked(mdp: &PreMdp, mask: &[Vec<bool>], within: &[bool], target: &[bool]) -> (Vec<bool>, Strategy) {
    let n = mdp.num_states();
    let mut win: Vec<bool> = (0..n).map(|s| within[s] || target[s]).collect();
    loop {
        let mut reached: Vec<bool> = (0..n).map(|s| target[s] && win[s]).collect();
        let mut strategy: Strategy = vec![None; n];
        loop {
            let mut grew = false;
            for s in 0..n {
                if !win[s] || reached[s] {
                    continue;
                }
                let found = mdp.actions[s]
                    .iter()
                    .enumerate()
                    .find(|(a, act)| mask[s][*a] && act.targets().all(|t| win[t]) && act.targets().any(|t| reached[t]));
                if let Some((a, _)) = found {
                    strategy[s] = Some(a);
                    grew = true;
                }
            }
            // commit after the sweep so each layer makes strict progress
            for s in 0..n {
                if strategy[s].is_some() {
                    reached[s] = true;
                }
            }
            if !grew {
                break;
            }
        }
        if reached == win {
            return (win, strategy);
        }
        win = reached;
    }
}

/// Almost-sure reachability of `target` in the whole MDP.
pub fn almost_sure_reach(mdp: &PreMdp, target: &[bool]) -> (Vec<bool>, Strategy) {
    let all = vec![true; mdp.num_states()];
    reach_masked(mdp, &full_mask(mdp), &all, target)
}

/// Almost-sure winning region of a parity MDP with a memoryless strategy
/// that wins from each of its states.
#[derive(Clone, Debug)]
pub struct ParityWin {
    pub win: Vec<bool>,
    pub strategy: Strategy,
    pub cwr: CwrAnalysis,
}

pub fn almost_sure_parity(pm: &ParityMdp) -> ParityWin {
    let mdp = &pm.mdp;
    let n = mdp.num_states();
    let cwr = cwr_states(pm);
    // each covered state follows the highest-level witness containing it
    let mut best: Vec<Option<usize>> = vec![None; n];
    for (id, (level, ec)) in cwr.components.iter().enumerate() {
        for &s in &ec.states {
            if best[s].is_none_or(|b| cwr.components[b].0 < *level) {
                best[s] = Some(id);
            }
        }
    }
    let covered: Vec<bool> = best.iter().map(Option::is_some).collect();
    let (win, mut strategy) = almost_sure_reach(mdp, &covered);
    for (id, (level, ec)) in cwr.components.iter().enumerate() {
        let members: Vec<usize> = ec.states.iter().copied().filter(|&s| best[s] == Some(id)).collect();
        if members.is_empty() {
            continue;
        }
        let (inner, _) = visit_strategy(pm, ec, *level);
        for s in members {
            strategy[s] = inner[s];
        }
    }
    ParityWin { win, strategy, cwr }
}

/// Strategy inside `ec` that visits its lowest-indexed state of rank `level`
/// infinitely often with probability one, never leaving `ec`.
pub fn visit_strategy(pm: &ParityMdp, ec: &EndComponent, level: u32) -> (Strategy, usize) {
    let mdp = &pm.mdp;
    let n = mdp.num_states();
    let top = *ec
        .states
        .iter()
        .find(|&&s| pm.ranks[s] == level)
        .expect("witness component without its top rank");
    let mut mask: Vec<Vec<bool>> = mdp.actions.iter().map(|a| vec![false; a.len()]).collect();
    let mut within = vec![false; n];
    for (&s, acts) in &ec.actions {
        within[s] = true;
        for &a in acts {
            mask[s][a] = true;
        }
    }
    let mut target = vec![false; n];
    target[top] = true;
    let (_, mut strategy) = reach_masked(mdp, &mask, &within, &target);
    strategy[top] = Some(ec.actions[&top][0]);
    (strategy, top)
}

/// Strategy inside `ec` that reaches `exit` with probability one.
pub fn attractor_in(mdp: &PreMdp, ec: &EndComponent, exit: usize) -> Strategy {
    let n = mdp.num_states();
    let mut mask: Vec<Vec<bool>> = mdp.actions.iter().map(|a| vec![false; a.len()]).collect();
    let mut within = vec![false; n];
    for (&s, acts) in &ec.actions {
        within[s] = true;
        for &a in acts {
            mask[s][a] = true;
        }
    }
    let mut target = vec![false; n];
    target[exit] = true;
    reach_masked(mdp, &mask, &within, &target).1
}
