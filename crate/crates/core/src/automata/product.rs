use std::collections::{HashMap, VecDeque};

use super::{state_ceiling, Dpw, PreAutomaton};
use crate::error::{Error, Result};

/// Reachable synchronous product of deterministic automata over a shared
/// alphabet, keeping the component tuple of every state.
#[derive(Clone, Debug)]
pub struct Product {
    pub pre: PreAutomaton,
    pub tuples: Vec<Vec<usize>>,
}

impl Product {
    pub fn num_states(&self) -> usize {
        self.tuples.len()
    }

    /// `proj_i`: the state of component `i` in product state `s`.
    pub fn proj(&self, s: usize, i: usize) -> usize {
        self.tuples[s][i]
    }
}

/// Product of possibly partial automata. A letter is enabled only when all
/// components define it.
pub fn product_pre(components: &[&PreAutomaton]) -> Result<Product> {
    let num_atoms = components.first().map_or(0, |c| c.num_atoms);
    assert!(components.iter().all(|c| c.num_atoms == num_atoms), "alphabet mismatch");
    let letters = 1usize << num_atoms;
    let ceiling = state_ceiling();
    let init: Vec<usize> = components.iter().map(|c| c.initial).collect();
    let mut tuples = vec![init.clone()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(init, 0)]);
    let mut delta = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let mut row = Vec::with_capacity(letters);
        for l in 0..letters {
            let next: Option<Vec<usize>> = components.iter().zip(&tuples[s]).map(|(c, &q)| c.delta[q][l]).collect();
            let Some(next) = next else {
                row.push(None);
                continue;
            };
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = tuples.len();
                    if id >= ceiling {
                        return Err(Error::StateCeiling {
                            what: "product".into(),
                            ceiling,
                        });
                    }
                    index.insert(next.clone(), id);
                    tuples.push(next);
                    queue.push_back(id);
                    id
                }
            };
            row.push(Some(id));
        }
        delta.push(row);
    }
    Ok(Product {
        pre: PreAutomaton {
            num_atoms,
            initial: 0,
            delta,
        },
        tuples,
    })
}

pub fn product(components: &[&Dpw]) -> Result<Product> {
    let pres: Vec<PreAutomaton> = components.iter().map(|d| d.as_pre()).collect();
    let refs: Vec<&PreAutomaton> = pres.iter().collect();
    product_pre(&refs)
}
