use crate::fltl::{LassoWord, Letter};
use crate::graph;

/// Nondeterministic Büchi automaton over explicit letters `0..2^atoms`.
#[derive(Clone, Debug)]
pub struct Nbw {
    pub num_atoms: usize,
    pub initial: Vec<usize>,
    pub accepting: Vec<bool>,
    /// `succ[q][letter]`: successor states.
    pub succ: Vec<Vec<Vec<usize>>>,
}

impl Nbw {
    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn num_letters(&self) -> usize {
        1 << self.num_atoms
    }

    pub fn is_nonempty(&self) -> bool {
        let n = self.num_states();
        let live = self.live_states();
        self.initial.iter().any(|&q| q < n && live[q])
    }

    fn targets(&self, q: usize) -> Vec<usize> {
        let mut t: Vec<usize> = self.succ[q].iter().flatten().copied().collect();
        t.sort_unstable();
        t.dedup();
        t
    }

    /// States from which some accepting cycle is reachable.
    pub fn live_states(&self) -> Vec<bool> {
        let n = self.num_states();
        let alive = vec![true; n];
        let comps = graph::scc(n, &alive, |q| self.targets(q));
        let mut live = vec![false; n];
        // reverse topological order: successors are decided first
        for comp in &comps {
            let good = comp.iter().any(|&q| self.accepting[q]) && graph::is_nontrivial(comp, |q| self.targets(q));
            let reaches = comp.iter().any(|&q| self.targets(q).iter().any(|&t| live[t]));
            if good || reaches {
                for &q in comp {
                    live[q] = true;
                }
            }
        }
        live
    }

    /// Drops states that cannot reach an accepting cycle and renumbers.
    pub fn pruned(&self) -> Nbw {
        let live = self.live_states();
        let mut map = vec![usize::MAX; self.num_states()];
        let mut next = 0;
        for q in 0..self.num_states() {
            if live[q] {
                map[q] = next;
                next += 1;
            }
        }
        let keep = |v: &[usize]| -> Vec<usize> { v.iter().filter(|&&t| live[t]).map(|&t| map[t]).collect() };
        Nbw {
            num_atoms: self.num_atoms,
            initial: keep(&self.initial),
            accepting: (0..self.num_states())
                .filter(|&q| live[q])
                .map(|q| self.accepting[q])
                .collect(),
            succ: (0..self.num_states())
                .filter(|&q| live[q])
                .map(|q| self.succ[q].iter().map(|ts| keep(ts)).collect())
                .collect(),
        }
    }

    /// Whether the automaton accepts the lasso word `u·v^ω`.
    pub fn accepts_lasso(&self, word: &LassoWord) -> bool {
        let n = self.num_states();
        let m = word.positions();
        let id = |q: usize, p: usize| q * m + p;
        let step = |node: usize| -> Vec<usize> {
            let (q, p) = (node / m, node % m);
            let letter: Letter = word.letter(p);
            let np = word.next(p);
            self.succ[q][letter as usize].iter().map(|&t| id(t, np)).collect()
        };
        let mut reach = vec![false; n * m];
        let mut stack: Vec<usize> = self.initial.iter().map(|&q| id(q, 0)).collect();
        for &s in &stack {
            reach[s] = true;
        }
        while let Some(v) = stack.pop() {
            for w in step(v) {
                if !reach[w] {
                    reach[w] = true;
                    stack.push(w);
                }
            }
        }
        graph::scc(n * m, &reach, step)
            .iter()
            .any(|c| c.iter().any(|&v| self.accepting[v / m]) && graph::is_nontrivial(c, step))
    }
}
