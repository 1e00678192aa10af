use std::collections::HashMap;
use std::fmt::Write as _;

use crate::fltl::{Alphabet, LassoWord, Letter};
use crate::graph;

/// Deterministic parity automaton with the max-even condition: a run is
/// accepting iff the largest rank seen infinitely often is even.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dpw {
    pub num_atoms: usize,
    pub initial: usize,
    /// `delta[q][letter]`
    pub delta: Vec<Vec<usize>>,
    pub ranks: Vec<u32>,
}

/// Deterministic automaton without acceptance whose transitions may be
/// undefined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreAutomaton {
    pub num_atoms: usize,
    pub initial: usize,
    pub delta: Vec<Vec<Option<usize>>>,
}

impl PreAutomaton {
    pub fn num_states(&self) -> usize {
        self.delta.len()
    }
}

impl Dpw {
    pub fn num_states(&self) -> usize {
        self.ranks.len()
    }

    pub fn num_letters(&self) -> usize {
        1 << self.num_atoms
    }

    pub fn step(&self, q: usize, letter: Letter) -> usize {
        self.delta[q][letter as usize]
    }

    pub fn as_pre(&self) -> PreAutomaton {
        PreAutomaton {
            num_atoms: self.num_atoms,
            initial: self.initial,
            delta: self
                .delta
                .iter()
                .map(|row| row.iter().map(|&t| Some(t)).collect())
                .collect(),
        }
    }

    /// Totality and determinism of the transition table.
    pub fn is_well_formed(&self) -> bool {
        let n = self.num_states();
        self.initial < n
            && self.delta.len() == n
            && self
                .delta
                .iter()
                .all(|row| row.len() == self.num_letters() && row.iter().all(|&t| t < n))
    }

    /// Run on `u·v^ω`: the states visited infinitely often.
    pub fn run_lasso(&self, word: &LassoWord) -> Vec<usize> {
        let m = word.positions();
        let start = word.positions() - word.period.len();
        let mut q = self.initial;
        for pos in 0..start {
            q = self.step(q, word.letter(pos));
        }
        // iterate whole periods until a period-boundary state repeats
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut boundary = Vec::new();
        while !seen.contains_key(&q) {
            seen.insert(q, boundary.len());
            boundary.push(q);
            for pos in start..m {
                q = self.step(q, word.letter(pos));
            }
        }
        let mut inf = Vec::new();
        for &b in &boundary[seen[&q]..] {
            let mut p = b;
            for pos in start..m {
                inf.push(p);
                p = self.step(p, word.letter(pos));
            }
        }
        inf.sort_unstable();
        inf.dedup();
        inf
    }

    pub fn accepts_lasso(&self, word: &LassoWord) -> bool {
        let inf = self.run_lasso(word);
        inf.iter().map(|&q| self.ranks[q]).max().unwrap_or(1) % 2 == 0
    }

    /// Reachable-state quotient under the coarsest rank-respecting
    /// bisimulation.
    pub fn minimized(&self) -> Dpw {
        let n = self.num_states();
        let letters = self.num_letters();
        let mut block: Vec<usize> = {
            let mut ids: HashMap<u32, usize> = HashMap::new();
            self.ranks
                .iter()
                .map(|r| {
                    let k = ids.len();
                    *ids.entry(*r).or_insert(k)
                })
                .collect()
        };
        let mut count = block.iter().max().map_or(0, |m| m + 1);
        loop {
            let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let next: Vec<usize> = (0..n)
                .map(|q| {
                    let mut sig = Vec::with_capacity(letters + 1);
                    sig.push(block[q]);
                    sig.extend(self.delta[q].iter().map(|&t| block[t]));
                    let k = ids.len();
                    *ids.entry(sig).or_insert(k)
                })
                .collect();
            let new_count = ids.len();
            block = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        // renumber reachable blocks in BFS order
        let mut id = vec![usize::MAX; count];
        let mut rep = Vec::new();
        id[block[self.initial]] = 0;
        rep.push(self.initial);
        let mut i = 0;
        while i < rep.len() {
            let q = rep[i];
            for &t in &self.delta[q] {
                if id[block[t]] == usize::MAX {
                    id[block[t]] = rep.len();
                    rep.push(t);
                }
            }
            i += 1;
        }
        Dpw {
            num_atoms: self.num_atoms,
            initial: 0,
            delta: rep
                .iter()
                .map(|&q| self.delta[q].iter().map(|&t| id[block[t]]).collect())
                .collect(),
            ranks: rep.iter().map(|&q| self.ranks[q]).collect(),
        }
    }

    /// A lasso word accepted from state `from`, if any.
    pub fn accepted_lasso_from(&self, from: usize) -> Option<LassoWord> {
        let n = self.num_states();
        let succ = |q: usize| -> Vec<usize> {
            let mut t = self.delta[q].clone();
            t.sort_unstable();
            t.dedup();
            t
        };
        let labelled = |q: usize| -> Vec<(Letter, usize)> {
            self.delta[q]
                .iter()
                .enumerate()
                .map(|(l, &t)| (l as Letter, t))
                .collect()
        };
        let reach = graph::reachable(n, &[from], succ);
        let mut even: Vec<u32> = self.ranks.iter().copied().filter(|r| r % 2 == 0).collect();
        even.sort_unstable();
        even.dedup();
        for d in even {
            let alive: Vec<bool> = (0..n).map(|q| reach[q] && self.ranks[q] <= d).collect();
            let restricted = |q: usize| -> Vec<usize> { succ(q).into_iter().filter(|&t| alive[t]).collect() };
            for comp in graph::scc(n, &alive, restricted) {
                let Some(&top) = comp.iter().find(|&&q| self.ranks[q] == d) else {
                    continue;
                };
                if !graph::is_nontrivial(&comp, restricted) {
                    continue;
                }
                let mut in_comp = vec![false; n];
                for &q in &comp {
                    in_comp[q] = true;
                }
                let mut is_top = vec![false; n];
                is_top[top] = true;
                let (_, prefix) = graph::shortest_path(n, from, &is_top, labelled)?;
                // a cycle through `top` inside the component
                let inside = |q: usize| -> Vec<(Letter, usize)> {
                    labelled(q).into_iter().filter(|&(_, t)| in_comp[t]).collect()
                };
                let mut period = Vec::new();
                let (first_letter, first) = inside(top)[0];
                period.push(first_letter);
                if first != top {
                    let (_, rest) = graph::shortest_path(n, first, &is_top, inside)?;
                    period.extend(rest);
                }
                return Some(LassoWord::new(prefix, period));
            }
        }
        None
    }

    pub fn is_nonempty_from(&self, from: usize) -> bool {
        self.accepted_lasso_from(from).is_some()
    }

    pub fn to_dot(&self, alphabet: &Alphabet) -> String {
        let mut out = String::from("digraph dpw {\n  rankdir=LR;\n");
        let _ = writeln!(out, "  init [shape=point];\n  init -> q{};", self.initial);
        for q in 0..self.num_states() {
            let _ = writeln!(out, "  q{q} [label=\"q{q} / {}\"];", self.ranks[q]);
            let mut grouped: HashMap<usize, Vec<String>> = HashMap::new();
            for (l, &t) in self.delta[q].iter().enumerate() {
                grouped.entry(t).or_default().push(alphabet.format_letter(l as Letter));
            }
            let mut targets: Vec<_> = grouped.into_iter().collect();
            targets.sort();
            for (t, ls) in targets {
                let _ = writeln!(out, "  q{q} -> q{t} [label=\"{}\"];", ls.join(" "));
            }
        }
        out.push_str("}\n");
        out
    }
}
