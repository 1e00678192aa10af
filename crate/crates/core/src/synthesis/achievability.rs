use crate::automata::{product, Dpw, Product};
use crate::error::Result;
use crate::fltl::{Alphabet, Letter};
use crate::mdp::{
    almost_sure_parity, induced_mdp, induced_mdp_filtered, max_end_components, Action, Environment, InducedMdp,
    ParityMdp, ParityWin, PreMdp,
};
use crate::rational::{one, zero, Rational};

/// A single DPW under the environment, with its qualitative analysis.
#[derive(Clone, Debug)]
pub struct Component {
    pub dpw: Dpw,
    pub mdp: InducedMdp,
    /// Controllably win recurrent states of the component MDP.
    pub cwr: Vec<bool>,
    pub win: ParityWin,
}

impl Component {
    pub fn analyse(dpw: Dpw, alphabet: &Alphabet, env: &Environment) -> Result<Component> {
        let mdp = induced_mdp(&dpw.as_pre(), alphabet, env)?;
        let pm = ParityMdp {
            mdp: mdp.mdp.clone(),
            ranks: mdp.pairs.iter().map(|&(q, _)| dpw.ranks[q]).collect(),
        };
        let win = almost_sure_parity(&pm);
        let cwr = win.cwr.cwr.clone();
        Ok(Component { dpw, mdp, cwr, win })
    }

    /// Component MDP state for automaton state `q` and environment state `e`.
    pub fn state(&self, q: usize, e: usize) -> usize {
        self.mdp.index[&(q, e)]
    }

    pub fn is_winning(&self, y: usize) -> bool {
        self.win.win[y]
    }

    /// Output chosen by the almost-sure winning strategy at `y`.
    pub fn winning_output(&self, y: usize) -> Letter {
        let a = self.win.strategy[y].unwrap_or(0);
        self.mdp.mdp.actions[y][a].label
    }

    /// Whether output `o` keeps every successor of `y` winning.
    pub fn is_safe(&self, y: usize, o: Letter) -> bool {
        self.win.win[y]
            && self.mdp.mdp.actions[y]
                .iter()
                .find(|a| a.label == o)
                .is_some_and(|a| a.targets().all(|t| self.win.win[t]))
    }
}

/// Product MDP over reward components (positions `0..values.len()` of the
/// product tuple) plus optional guard and assumption components.
#[derive(Clone, Debug)]
pub struct Achievability {
    pub values: Vec<Rational>,
    pub components: Vec<Component>,
    pub guard: Option<(usize, Component)>,
    pub assumption_pos: Option<usize>,
    pub product: Product,
    pub mdp: InducedMdp,
}

impl Achievability {
    pub fn build(
        values: Vec<Rational>,
        components: Vec<Component>,
        guard: Option<Component>,
        assumption: Option<&Dpw>,
        alphabet: &Alphabet,
        env: &Environment,
    ) -> Result<Achievability> {
        let mut dpws: Vec<&Dpw> = components.iter().map(|c| &c.dpw).collect();
        let guard_pos = guard.as_ref().map(|g| {
            dpws.push(&g.dpw);
            dpws.len() - 1
        });
        let assumption_pos = assumption.map(|a| {
            dpws.push(a);
            dpws.len() - 1
        });
        let product = product(&dpws)?;
        let mdp = match (&guard, guard_pos) {
            (Some(g), Some(pos)) => {
                let allow = |p: usize, e: usize, o: Letter| {
                    let y = g.state(product.proj(p, pos), e);
                    g.is_safe(y, o)
                };
                induced_mdp_filtered(&product.pre, alphabet, env, &allow)?
            }
            _ => induced_mdp(&product.pre, alphabet, env)?,
        };
        Ok(Achievability {
            values,
            components,
            guard: guard.zip(guard_pos).map(|(g, p)| (p, g)),
            assumption_pos,
            product,
            mdp,
        })
    }

    /// State of reward component `c` behind product MDP state `x`.
    pub fn proj(&self, c: usize, x: usize) -> usize {
        let (p, e) = self.mdp.pairs[x];
        self.components[c].state(self.product.proj(p, c), e)
    }

    pub fn guard_proj(&self, x: usize) -> Option<usize> {
        let (pos, g) = self.guard.as_ref()?;
        let (p, e) = self.mdp.pairs[x];
        Some(g.state(self.product.proj(p, *pos), e))
    }

    pub fn assumption_state(&self, x: usize) -> Option<(usize, usize)> {
        let pos = self.assumption_pos?;
        let (p, e) = self.mdp.pairs[x];
        Some((self.product.proj(p, pos), e))
    }
}

/// For each MEC of `mdp`: the best reward component with a c.w.r.
/// projection inside it and the lowest state carrying that projection.
pub fn mec_targets(ach: &Achievability, mdp: &PreMdp) -> (Vec<Option<(usize, usize)>>, Vec<Rational>) {
    let mecs = max_end_components(mdp);
    let mut rewards = vec![zero(); mdp.num_states()];
    let targets = mecs
        .iter()
        .map(|ec| {
            let found = (0..ach.components.len()).rev().find_map(|c| {
                ec.states
                    .iter()
                    .copied()
                    .find(|&x| ach.components[c].cwr[ach.proj(c, x)])
                    .map(|x| (c, x))
            });
            let r = found.map_or_else(zero, |(c, _)| ach.values[c].clone());
            for &x in &ec.states {
                rewards[x] = r.clone();
            }
            found
        })
        .collect();
    (targets, rewards)
}

/// The reset MDP: every action of a state in `reset` returns to the initial
/// state. Action indices are preserved.
pub fn reset_mdp(mdp: &PreMdp, reset: &[bool]) -> PreMdp {
    PreMdp {
        initial: mdp.initial,
        actions: mdp
            .actions
            .iter()
            .enumerate()
            .map(|(s, acts)| {
                if reset[s] {
                    acts.iter()
                        .map(|a| Action {
                            label: a.label,
                            succ: vec![(mdp.initial, one())],
                        })
                        .collect()
                } else {
                    acts.clone()
                }
            })
            .collect(),
    }
}
