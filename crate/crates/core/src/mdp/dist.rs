use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fltl::{Alphabet, Letter};
use crate::rational::{one, rat, serde_str, zero, Rational};

/// Input-generating MDP: each state carries an input label, transitions
/// are chosen by the system's output. A transition without `output`
/// applies to every output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionMdp {
    pub states: Vec<DistributionState>,
    pub initial: usize,
    pub transitions: Vec<DistributionTransition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionState {
    pub id: usize,
    pub label: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionTransition {
    pub from: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<Vec<String>>,
    pub to: usize,
    #[serde(with = "serde_str")]
    pub prob: Rational,
}

/// Resolved form of a [`DistributionMdp`] over a concrete alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledDistribution {
    pub initial: usize,
    pub labels: Vec<Letter>,
    /// `succ[s][o]`: successor distribution under output `o`.
    pub succ: Vec<Vec<Vec<(usize, Rational)>>>,
}

impl DistributionMdp {
    /// Checks ids, labels, stochasticity and observability (distinct labels
    /// among the successors of each state and output) against `alphabet`.
    pub fn compile(&self, alphabet: &Alphabet) -> Result<CompiledDistribution> {
        let n = self.states.len();
        let bad = |m: String| Error::Distribution(m);
        if n == 0 {
            return Err(bad("no states".into()));
        }
        let mut labels = vec![0; n];
        let mut seen = vec![false; n];
        for st in &self.states {
            if st.id >= n || seen[st.id] {
                return Err(bad(format!("state ids must be 0..{n} without repeats")));
            }
            seen[st.id] = true;
            for a in &st.label {
                match alphabet.index(a) {
                    Some(k) if k < alphabet.num_inputs() => labels[st.id] |= 1 << k,
                    _ => return Err(bad(format!("label atom '{a}' is not an input"))),
                }
            }
        }
        if self.initial >= n {
            return Err(bad("initial state out of range".into()));
        }
        let outputs = alphabet.num_output_letters();
        let mut table: Vec<Vec<BTreeMap<usize, Rational>>> = vec![vec![BTreeMap::new(); outputs]; n];
        for t in &self.transitions {
            if t.from >= n || t.to >= n {
                return Err(bad(format!("transition {} -> {} out of range", t.from, t.to)));
            }
            if t.prob <= zero() || t.prob > one() {
                return Err(bad(format!("probability of {} -> {} must lie in (0,1]", t.from, t.to)));
            }
            let os: Vec<usize> = match &t.output {
                None => (0..outputs).collect(),
                Some(atoms) => {
                    let mut o = 0usize;
                    for a in atoms {
                        match alphabet.index(a) {
                            Some(k) if k >= alphabet.num_inputs() => o |= 1 << (k - alphabet.num_inputs()),
                            _ => return Err(bad(format!("output atom '{a}' is not an output"))),
                        }
                    }
                    vec![o]
                }
            };
            for o in os {
                *table[t.from][o].entry(t.to).or_insert_with(zero) += &t.prob;
            }
        }
        for (s, row) in table.iter().enumerate() {
            for (o, succ) in row.iter().enumerate() {
                let total: Rational = succ.values().cloned().sum();
                if total != one() {
                    return Err(bad(format!("state {s}, output {o}: probabilities sum to {total}")));
                }
                let mut ls: Vec<Letter> = succ.keys().map(|&t| labels[t]).collect();
                ls.sort_unstable();
                if ls.windows(2).any(|w| w[0] == w[1]) {
                    return Err(bad(format!(
                        "state {s}: two successors share an input label, so the input does not determine the state"
                    )));
                }
            }
        }
        Ok(CompiledDistribution {
            initial: self.initial,
            labels,
            succ: table
                .into_iter()
                .map(|row| row.into_iter().map(|m| m.into_iter().collect()).collect())
                .collect(),
        })
    }
}

impl CompiledDistribution {
    /// Whether the successor distribution ignores the output.
    pub fn is_output_independent(&self) -> bool {
        self.succ.iter().all(|row| row.windows(2).all(|w| w[0] == w[1]))
    }

    /// The successor whose label is `input`, if any.
    pub fn successor_with_label(&self, s: usize, o: Letter, input: Letter) -> Option<usize> {
        self.succ[s][o as usize]
            .iter()
            .map(|(t, _)| *t)
            .find(|&t| self.labels[t] == input)
    }
}

/// Source of input letters: uniform over `2^I`, or a distribution MDP.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Environment {
    Uniform,
    Mdp(CompiledDistribution),
}

impl Environment {
    pub fn initial(&self) -> usize {
        match self {
            Environment::Uniform => 0,
            Environment::Mdp(d) => d.initial,
        }
    }

    pub fn num_states(&self) -> usize {
        match self {
            Environment::Uniform => 1,
            Environment::Mdp(d) => d.labels.len(),
        }
    }

    /// `(next environment state, input letter, probability)` after the
    /// system emits `o` in environment state `e`.
    pub fn successors(&self, e: usize, o: Letter, alphabet: &Alphabet) -> Vec<(usize, Letter, Rational)> {
        match self {
            Environment::Uniform => {
                let k = alphabet.num_input_letters();
                let p = rat(1, k as i64);
                (0..k as Letter).map(|i| (0, i, p.clone())).collect()
            }
            Environment::Mdp(d) => d.succ[e][o as usize]
                .iter()
                .map(|(t, p)| (*t, d.labels[*t], p.clone()))
                .collect(),
        }
    }

    pub fn is_output_independent(&self) -> bool {
        match self {
            Environment::Uniform => true,
            Environment::Mdp(d) => d.is_output_independent(),
        }
    }

    /// Next environment state after input `input` following output `o`.
    pub fn track(&self, e: usize, o: Letter, input: Letter) -> Option<usize> {
        match self {
            Environment::Uniform => Some(0),
            Environment::Mdp(d) => d.successor_with_label(e, o, input),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coin(p: &str, q: &str) -> DistributionMdp {
        serde_json::from_str(&format!(
            r#"{{"states": [{{"id": 0, "label": []}}, {{"id": 1, "label": ["x"]}}], "initial": 0,
                "transitions": [{{"from": 0, "to": 0, "prob": "{p}"}}, {{"from": 0, "to": 1, "prob": "{q}"}},
                                {{"from": 1, "to": 0, "prob": "{p}"}}, {{"from": 1, "to": 1, "prob": "{q}"}}]}}"#
        ))
        .unwrap()
    }

    fn xy() -> Alphabet {
        Alphabet::io(&["x"], &["y"]).unwrap()
    }

    #[test]
    fn compiles_a_biased_coin() {
        let d = coin("2/3", "1/3").compile(&xy()).unwrap();
        assert_eq!(d.labels, vec![0, 1]);
        assert!(d.is_output_independent());
        assert_eq!(d.successor_with_label(0, 1, 1), Some(1));
        let env = Environment::Mdp(d);
        assert_eq!(env.successors(1, 0, &xy()), vec![(0, 0, rat(2, 3)), (1, 1, rat(1, 3))]);
    }

    #[test]
    fn rejects_bad_sums() {
        assert!(matches!(coin("1/2", "1/3").compile(&xy()), Err(Error::Distribution(_))));
    }

    #[test]
    fn rejects_unobservable_successors() {
        let mut d = coin("1/2", "1/2");
        d.states[1].label.clear();
        assert!(d.compile(&xy()).is_err());
    }

    #[test]
    fn rejects_output_labels() {
        let mut d = coin("1/2", "1/2");
        d.states[1].label = vec!["y".into()];
        assert!(d.compile(&xy()).is_err());
    }
}
