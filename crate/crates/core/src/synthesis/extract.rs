//! Transducer extraction from an optimal memoryless strategy of an
//! achievability MDP, refined so that the run settles into its target
//! value almost surely.

use std::collections::{HashMap, VecDeque};

use super::achievability::Achievability;
use crate::fltl::{Alphabet, Letter};
use crate::mdp::{attractor_in, Environment, MeanPayoff, Strategy};
use crate::transducer::Transducer;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Phase {
    /// Follow the memoryless strategy; `Some(k)` while steering inside MEC
    /// `k` towards its designated c.w.r. state.
    Main(usize, Option<usize>),
    /// Play the almost-sure winning strategy of reward component `c`.
    Win(usize, usize),
    /// Play the almost-sure winning strategy of the threshold guard.
    Guard(usize),
}

pub struct Plan<'a> {
    pub ach: &'a Achievability,
    pub alphabet: &'a Alphabet,
    pub env: &'a Environment,
    /// Memoryless strategy on the product MDP (action indices).
    pub strategy: Strategy,
    pub solution: &'a MeanPayoff,
    /// Per MEC of the solution: best reward component and its target state.
    pub targets: &'a [Option<(usize, usize)>],
}

impl Plan<'_> {
    fn approach(&self, cache: &mut HashMap<usize, Strategy>, k: usize) -> Strategy {
        cache
            .entry(k)
            .or_insert_with(|| {
                let (_, target) = self.targets[k].expect("approach without target");
                attractor_in(&self.ach.mdp.mdp, &self.solution.mecs[k], target)
            })
            .clone()
    }

    fn enter(&self, x: usize, approaching: Option<usize>) -> Phase {
        let settle = |k: usize| -> Phase {
            let (c, _) = self.targets[k].expect("settling without target");
            let y = self.ach.proj(c, x);
            if self.ach.components[c].is_winning(y) {
                Phase::Win(c, y)
            } else {
                Phase::Main(x, Some(k))
            }
        };
        if let Some(k) = approaching {
            return settle(k);
        }
        match self.solution.mec_of[x] {
            Some(k) if self.solution.stays[k] => match self.targets[k] {
                Some(_) => settle(k),
                None => match self.ach.guard_proj(x) {
                    Some(y) => Phase::Guard(y),
                    None => Phase::Main(x, None),
                },
            },
            _ => Phase::Main(x, None),
        }
    }

    fn output(&self, cache: &mut HashMap<usize, Strategy>, phase: Phase) -> Letter {
        let mdp = &self.ach.mdp.mdp;
        match phase {
            Phase::Main(x, None) => {
                let a = self.strategy[x].unwrap_or(0);
                mdp.actions[x][a].label
            }
            Phase::Main(x, Some(k)) => {
                let a = self.approach(cache, k)[x]
                    .or_else(|| self.solution.mecs[k].actions.get(&x).map(|acts| acts[0]))
                    .unwrap_or(0);
                mdp.actions[x][a].label
            }
            Phase::Win(c, y) => self.ach.components[c].winning_output(y),
            Phase::Guard(y) => self.ach.guard.as_ref().expect("guard phase").1.winning_output(y),
        }
    }

    fn step(&self, phase: Phase, o: Letter, input: Letter) -> Option<Phase> {
        let letter = self.alphabet.join(input, o) as usize;
        match phase {
            Phase::Main(x, approaching) => {
                let (p, e) = self.ach.mdp.pairs[x];
                let e2 = self.env.track(e, o, input)?;
                let p2 = self.ach.product.pre.delta[p][letter]?;
                let x2 = *self.ach.mdp.index.get(&(p2, e2))?;
                Some(self.enter(x2, approaching))
            }
            Phase::Win(c, y) => {
                let comp = &self.ach.components[c];
                let (q, e) = comp.mdp.pairs[y];
                let e2 = self.env.track(e, o, input)?;
                Some(Phase::Win(c, comp.state(comp.dpw.delta[q][letter], e2)))
            }
            Phase::Guard(y) => {
                let g = &self.ach.guard.as_ref().expect("guard phase").1;
                let (q, e) = g.mdp.pairs[y];
                let e2 = self.env.track(e, o, input)?;
                Some(Phase::Guard(g.state(g.dpw.delta[q][letter], e2)))
            }
        }
    }

    /// Builds the transducer. Each state remembers the output it emits;
    /// the output for the next step is fixed before the next input is read.
    /// Inputs the environment cannot produce keep the current phase.
    pub fn transducer(&self) -> Transducer {
        let mut cache = HashMap::new();
        let start = (self.enter(self.ach.mdp.mdp.initial, None), 0 as Letter);
        let mut nodes = vec![start];
        let mut index: HashMap<(Phase, Letter), usize> = HashMap::from([(start, 0)]);
        let mut delta = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(n) = queue.pop_front() {
            let (phase, _) = nodes[n];
            let o = self.output(&mut cache, phase);
            let row = (0..self.alphabet.num_input_letters() as Letter)
                .map(|i| {
                    let next = (self.step(phase, o, i).unwrap_or(phase), o);
                    *index.entry(next).or_insert_with(|| {
                        nodes.push(next);
                        queue.push_back(nodes.len() - 1);
                        nodes.len() - 1
                    })
                })
                .collect();
            delta.push(row);
        }
        Transducer {
            inputs: self.alphabet.inputs().to_vec(),
            outputs: self.alphabet.outputs().to_vec(),
            initial: 0,
            labels: nodes.iter().map(|&(_, o)| o).collect(),
            delta,
        }
        .minimized()
    }
}
