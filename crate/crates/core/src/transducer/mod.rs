//! Finite-state I/O transducers and their exact evaluation.

mod eval;

pub use eval::{
    almost_sure_value, computation_lasso, conditional_almost_sure_value, conditional_expected_value, expected_value,
    simulate, worst_case_value, Simulation, ValueAutomata, WorstCase,
};

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fltl::{Alphabet, Letter};

/// Moore-style transducer: transitions read input letters, states carry
/// output letters. The label of the initial state is never emitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transducer {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub initial: usize,
    /// Output letter of each state (bit `k` = output atom `k`).
    pub labels: Vec<Letter>,
    /// `delta[q][input letter]`
    pub delta: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct JsonTransducer {
    inputs: Vec<String>,
    outputs: Vec<String>,
    states: Vec<JsonState>,
    initial: usize,
    transitions: Vec<JsonTransition>,
}

#[derive(Serialize, Deserialize)]
struct JsonState {
    id: usize,
    label: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct JsonTransition {
    from: usize,
    input: Vec<String>,
    to: usize,
}

fn atoms_of(names: &[String], letter: Letter) -> Vec<String> {
    names
        .iter()
        .enumerate()
        .filter(|(k, _)| letter & (1 << k) != 0)
        .map(|(_, a)| a.clone())
        .collect()
}

fn letter_of(names: &[String], atoms: &[String], what: &str) -> Result<Letter> {
    let mut l = 0;
    for a in atoms {
        let k = names
            .iter()
            .position(|n| n == a)
            .ok_or_else(|| Error::Transducer(format!("'{a}' is not an {what} atom")))?;
        l |= 1 << k;
    }
    Ok(l)
}

impl Transducer {
    pub fn num_states(&self) -> usize {
        self.labels.len()
    }

    pub fn alphabet(&self) -> Result<Alphabet> {
        Alphabet::io(&self.inputs, &self.outputs)
    }

    /// Checks totality over `2^I` and that labels fit `2^O`.
    pub fn validate(&self) -> Result<()> {
        let n = self.num_states();
        let k = 1usize << self.inputs.len();
        if n == 0 || self.initial >= n {
            return Err(Error::Transducer("initial state out of range".into()));
        }
        if self.delta.len() != n
            || self
                .delta
                .iter()
                .any(|row| row.len() != k || row.iter().any(|&t| t >= n))
        {
            return Err(Error::Transducer("transition function must be total over 2^I".into()));
        }
        if self.labels.iter().any(|&l| (l as usize) >> self.outputs.len() != 0) {
            return Err(Error::Transducer("label outside 2^O".into()));
        }
        Ok(())
    }

    /// The output emitted after reading `input` in state `q`.
    pub fn output_after(&self, q: usize, input: Letter) -> Letter {
        self.labels[self.delta[q][input as usize]]
    }

    /// Runs on a finite input word: `i_0 ∪ o_1, i_1 ∪ o_2, …`.
    pub fn exec(&self, word: &[Letter]) -> Vec<Letter> {
        let shift = self.inputs.len();
        let mut q = self.initial;
        word.iter()
            .map(|&i| {
                q = self.delta[q][i as usize];
                i | (self.labels[q] << shift)
            })
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Transducer> {
        let j: JsonTransducer =
            serde_json::from_str(text).map_err(|e| Error::Transducer(format!("invalid transducer JSON: {e}")))?;
        let n = j.states.len();
        let mut labels = vec![None; n];
        for s in &j.states {
            if s.id >= n || labels[s.id].is_some() {
                return Err(Error::Transducer(format!("state ids must be 0..{n} without repeats")));
            }
            labels[s.id] = Some(letter_of(&j.outputs, &s.label, "output")?);
        }
        let k = 1usize << j.inputs.len();
        let mut delta = vec![vec![usize::MAX; k]; n];
        for t in &j.transitions {
            if t.from >= n || t.to >= n {
                return Err(Error::Transducer(format!(
                    "transition {} -> {} out of range",
                    t.from, t.to
                )));
            }
            let i = letter_of(&j.inputs, &t.input, "input")? as usize;
            if delta[t.from][i] != usize::MAX && delta[t.from][i] != t.to {
                return Err(Error::Transducer(format!(
                    "state {} has two transitions on one input",
                    t.from
                )));
            }
            delta[t.from][i] = t.to;
        }
        let t = Transducer {
            inputs: j.inputs,
            outputs: j.outputs,
            initial: j.initial,
            labels: labels.into_iter().map(|l| l.unwrap_or(0)).collect(),
            delta,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        let j = JsonTransducer {
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            states: (0..self.num_states())
                .map(|q| JsonState {
                    id: q,
                    label: atoms_of(&self.outputs, self.labels[q]),
                })
                .collect(),
            initial: self.initial,
            transitions: (0..self.num_states())
                .flat_map(|q| {
                    self.delta[q].iter().enumerate().map(move |(i, &to)| JsonTransition {
                        from: q,
                        input: atoms_of(&self.inputs, i as Letter),
                        to,
                    })
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&j).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_dot(&self) -> String {
        let set = |names: &[String], l: Letter| format!("{{{}}}", atoms_of(names, l).join(","));
        let mut out = String::from("digraph transducer {\n  rankdir=LR;\n");
        let _ = writeln!(out, "  init [shape=point];\n  init -> s{};", self.initial);
        for q in 0..self.num_states() {
            let _ = writeln!(out, "  s{q} [label=\"s{q}\\n{}\"];", set(&self.outputs, self.labels[q]));
            let mut grouped: Vec<(usize, Vec<String>)> = Vec::new();
            for (i, &t) in self.delta[q].iter().enumerate() {
                match grouped.iter_mut().find(|(to, _)| *to == t) {
                    Some((_, ls)) => ls.push(set(&self.inputs, i as Letter)),
                    None => grouped.push((t, vec![set(&self.inputs, i as Letter)])),
                }
            }
            for (t, ls) in grouped {
                let _ = writeln!(out, "  s{q} -> s{t} [label=\"{}\"];", ls.join(" "));
            }
        }
        out.push_str("}\n");
        out
    }

    /// Reachable quotient under label-respecting bisimulation, numbered in
    /// BFS order.
    pub fn minimized(&self) -> Transducer {
        let n = self.num_states();
        let mut block: Vec<usize> = self.labels.iter().map(|&l| l as usize).collect();
        let mut count = usize::MAX;
        loop {
            let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let next: Vec<usize> = (0..n)
                .map(|q| {
                    let mut sig = vec![self.labels[q] as usize, block[q]];
                    sig.extend(self.delta[q].iter().map(|&t| block[t]));
                    let k = ids.len();
                    *ids.entry(sig).or_insert(k)
                })
                .collect();
            block = next;
            if ids.len() == count {
                break;
            }
            count = ids.len();
        }
        let mut id = vec![usize::MAX; count];
        let mut rep = vec![self.initial];
        id[block[self.initial]] = 0;
        let mut i = 0;
        while i < rep.len() {
            for &t in &self.delta[rep[i]] {
                if id[block[t]] == usize::MAX {
                    id[block[t]] = rep.len();
                    rep.push(t);
                }
            }
            i += 1;
        }
        Transducer {
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            initial: 0,
            labels: rep.iter().map(|&q| self.labels[q]).collect(),
            delta: rep
                .iter()
                .map(|&q| self.delta[q].iter().map(|&t| id[block[t]]).collect())
                .collect(),
        }
    }
}
