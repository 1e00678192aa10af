use std::collections::BTreeMap;

use rand::Rng;

use super::linear;
use crate::graph;
use crate::rational::{one, zero, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovChain {
    pub initial: usize,
    pub succ: Vec<Vec<(usize, Rational)>>,
}

/// Bottom SCCs reachable from the initial state with their absorption
/// probabilities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErgodicAnalysis {
    pub components: Vec<Vec<usize>>,
    pub probabilities: Vec<Rational>,
    /// Component index of each state lying in an ergodic component.
    pub component_of: Vec<Option<usize>>,
}

impl MarkovChain {
    pub fn num_states(&self) -> usize {
        self.succ.len()
    }

    pub fn is_stochastic(&self) -> bool {
        self.succ
            .iter()
            .all(|row| row.iter().map(|(_, p)| p.clone()).sum::<Rational>() == one())
    }

    fn targets(&self, s: usize) -> Vec<usize> {
        self.succ[s].iter().map(|(t, _)| *t).collect()
    }

    /// Samples a successor of `s`.
    pub fn sample_step<R: Rng>(&self, s: usize, rng: &mut R) -> usize {
        let den: Vec<u64> = self.succ[s]
            .iter()
            .map(|(_, p)| p.denom().try_into().expect("denominator too large"))
            .collect();
        let lcm = den.iter().fold(1u64, |acc, &d| num::integer::lcm(acc, d));
        let mut x = rng.gen_range(0..lcm);
        for (t, p) in &self.succ[s] {
            let d: u64 = p.denom().try_into().expect("denominator too large");
            let n: u64 = p.numer().try_into().expect("numerator too large");
            let weight = n * (lcm / d);
            if x < weight {
                return *t;
            }
            x -= weight;
        }
        self.succ[s].last().expect("state without successors").0
    }
}

pub fn mc_ergodic_analysis(c: &MarkovChain) -> ErgodicAnalysis {
    let n = c.num_states();
    let reach = graph::reachable(n, &[c.initial], |s| c.targets(s));
    let comps = graph::scc(n, &reach, |s| c.targets(s));
    let mut scc_of = vec![usize::MAX; n];
    for (k, comp) in comps.iter().enumerate() {
        for &s in comp {
            scc_of[s] = k;
        }
    }
    let mut components = Vec::new();
    let mut component_of = vec![None; n];
    for (k, comp) in comps.iter().enumerate() {
        let bottom = comp.iter().all(|&s| c.targets(s).iter().all(|&t| scc_of[t] == k));
        if bottom {
            for &s in comp {
                component_of[s] = Some(components.len());
            }
            components.push(comp.clone());
        }
    }
    let m = components.len();
    let mut probabilities = vec![zero(); m];
    if let Some(k) = component_of[c.initial] {
        probabilities[k] = one();
        return ErgodicAnalysis {
            components,
            probabilities,
            component_of,
        };
    }
    // absorption probabilities over the transient reachable states
    let transient: Vec<usize> = (0..n).filter(|&s| reach[s] && component_of[s].is_none()).collect();
    let mut local = vec![usize::MAX; n];
    for (i, &s) in transient.iter().enumerate() {
        local[s] = i;
    }
    let mut rows = Vec::with_capacity(transient.len());
    let mut rhs = Vec::with_capacity(transient.len());
    for &s in &transient {
        let mut row: BTreeMap<usize, Rational> = BTreeMap::from([(local[s], one())]);
        let mut b = vec![zero(); m];
        for (t, p) in &c.succ[s] {
            match component_of[*t] {
                Some(k) => b[k] += p,
                None => *row.entry(local[*t]).or_insert_with(zero) -= p,
            }
        }
        row.retain(|_, v| *v != zero());
        rows.push(row);
        rhs.push(b);
    }
    let order = linear::postorder(&rows);
    let x = linear::solve(rows, rhs, &order);
    probabilities = x[local[c.initial]].clone();
    ErgodicAnalysis {
        components,
        probabilities,
        component_of,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn coin_into_two_sinks() {
        let c = MarkovChain {
            initial: 0,
            succ: vec![vec![(1, rat(1, 2)), (2, rat(1, 2))], vec![(1, one())], vec![(2, one())]],
        };
        let e = mc_ergodic_analysis(&c);
        assert_eq!(e.components.len(), 2);
        assert_eq!(e.probabilities, vec![rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn irreducible_chain_has_one_component() {
        let c = MarkovChain {
            initial: 0,
            succ: vec![vec![(1, one())], vec![(0, rat(1, 3)), (1, rat(2, 3))]],
        };
        let e = mc_ergodic_analysis(&c);
        assert_eq!(e.components, vec![vec![0, 1]]);
        assert_eq!(e.probabilities, vec![one()]);
    }
}
