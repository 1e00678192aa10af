//! On-the-fly tableau: Boolean LTL to a transition-based generalized Büchi
//! automaton, then degeneralized to an explicit-letter NBW.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::Nbw;
use crate::boolean::Ltl;
use crate::fltl::Alphabet;

type Id = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    Lit(usize, bool),
    And(Vec<Id>),
    Or(Vec<Id>),
    Next(Id),
    Until(Id, Id),
    Release(Id, Id),
}

#[derive(Default)]
struct Arena {
    nodes: Vec<Node>,
    index: HashMap<Node, Id>,
}

impl Arena {
    fn intern(&mut self, node: Node) -> Id {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        id
    }

    /// Negation normal form of `f` (negated when `neg`).
    fn nnf(&mut self, f: &Ltl, neg: bool, alphabet: &Alphabet) -> Id {
        let node = match f {
            Ltl::True => {
                if neg {
                    Node::False
                } else {
                    Node::True
                }
            }
            Ltl::False => {
                if neg {
                    Node::True
                } else {
                    Node::False
                }
            }
            Ltl::Atom(a) => {
                let k = alphabet.index(a).expect("atom outside the alphabet");
                Node::Lit(k, !neg)
            }
            Ltl::Not(a) => return self.nnf(a, !neg, alphabet),
            Ltl::And(cs) | Ltl::Or(cs) => {
                let ids: Vec<Id> = cs.iter().map(|c| self.nnf(c, neg, alphabet)).collect();
                if matches!(f, Ltl::And(_)) != neg {
                    Node::And(ids)
                } else {
                    Node::Or(ids)
                }
            }
            Ltl::Next(a) => Node::Next(self.nnf(a, neg, alphabet)),
            Ltl::Until(a, b) => {
                let (a, b) = (self.nnf(a, neg, alphabet), self.nnf(b, neg, alphabet));
                if neg {
                    Node::Release(a, b)
                } else {
                    Node::Until(a, b)
                }
            }
            Ltl::Eventually(a) => {
                let a = self.nnf(a, neg, alphabet);
                if neg {
                    let f = self.intern(Node::False);
                    Node::Release(f, a)
                } else {
                    let t = self.intern(Node::True);
                    Node::Until(t, a)
                }
            }
            Ltl::Globally(a) => {
                let a = self.nnf(a, neg, alphabet);
                if neg {
                    let t = self.intern(Node::True);
                    Node::Until(t, a)
                } else {
                    let f = self.intern(Node::False);
                    Node::Release(f, a)
                }
            }
        };
        self.intern(node)
    }
}

#[derive(Clone, Debug)]
struct Cover {
    pos: u32,
    neg: u32,
    next: BTreeSet<Id>,
    old: BTreeSet<Id>,
}

/// All covers of the obligation set `todo`.
fn expand(arena: &Arena, todo: Vec<Id>) -> Vec<Cover> {
    let mut out = Vec::new();
    let empty = Cover {
        pos: 0,
        neg: 0,
        next: BTreeSet::new(),
        old: BTreeSet::new(),
    };
    let mut stack = vec![(todo, empty)];
    while let Some((mut todo, mut cov)) = stack.pop() {
        let Some(f) = todo.pop() else {
            out.push(cov);
            continue;
        };
        if !cov.old.insert(f) {
            stack.push((todo, cov));
            continue;
        }
        match &arena.nodes[f] {
            Node::True => stack.push((todo, cov)),
            Node::False => {}
            Node::Lit(k, true) => {
                if cov.neg & (1 << k) == 0 {
                    cov.pos |= 1 << k;
                    stack.push((todo, cov));
                }
            }
            Node::Lit(k, false) => {
                if cov.pos & (1 << k) == 0 {
                    cov.neg |= 1 << k;
                    stack.push((todo, cov));
                }
            }
            Node::And(cs) => {
                todo.extend(cs);
                stack.push((todo, cov));
            }
            Node::Or(cs) => {
                for &c in cs {
                    let mut t = todo.clone();
                    t.push(c);
                    stack.push((t, cov.clone()));
                }
            }
            Node::Next(a) => {
                cov.next.insert(*a);
                stack.push((todo, cov));
            }
            &Node::Until(a, b) => {
                let mut t1 = todo.clone();
                t1.push(b);
                stack.push((t1, cov.clone()));
                todo.push(a);
                cov.next.insert(f);
                stack.push((todo, cov));
            }
            &Node::Release(a, b) => {
                let mut t1 = todo.clone();
                t1.push(a);
                t1.push(b);
                stack.push((t1, cov.clone()));
                todo.push(b);
                cov.next.insert(f);
                stack.push((todo, cov));
            }
        }
    }
    out
}

/// Translates a Boolean LTL formula over `alphabet` into a pruned NBW.
/// `(pos, neg, acceptance marks, target obligation set)`
type TgbaEdge = (u32, u32, Vec<bool>, usize);

pub fn ltl_to_nbw(f: &Ltl, alphabet: &Alphabet) -> Nbw {
    let mut arena = Arena::default();
    let root = arena.nnf(f, false, alphabet);
    let untils: Vec<(Id, Id)> = arena
        .nodes
        .iter()
        .enumerate()
        .filter_map(|(id, n)| match n {
            Node::Until(_, b) => Some((id, *b)),
            _ => None,
        })
        .collect();
    let k = untils.len();
    let num_atoms = alphabet.len();
    let num_letters = 1usize << num_atoms;

    let mut tgba_states: Vec<Vec<Id>> = vec![vec![root]];
    let mut tgba_index: HashMap<Vec<Id>, usize> = HashMap::from([(vec![root], 0)]);
    let mut tgba_edges: Vec<Vec<TgbaEdge>> = Vec::new();
    let mut i = 0;
    while i < tgba_states.len() {
        let mut edges = Vec::new();
        let mut seen = BTreeSet::new();
        for cov in expand(&arena, tgba_states[i].clone()) {
            let acc: Vec<bool> = untils
                .iter()
                .map(|&(u, b)| !cov.old.contains(&u) || cov.old.contains(&b))
                .collect();
            let target: Vec<Id> = cov.next.into_iter().collect();
            if !seen.insert((cov.pos, cov.neg, acc.clone(), target.clone())) {
                continue;
            }
            let t = *tgba_index.entry(target.clone()).or_insert_with(|| {
                tgba_states.push(target);
                tgba_states.len() - 1
            });
            edges.push((cov.pos, cov.neg, acc, t));
        }
        tgba_edges.push(edges);
        i += 1;
    }

    // degeneralization: NBW state = (tgba state, level 0..=k), level k accepting
    let mut states: Vec<(usize, usize)> = vec![(0, 0)];
    let mut index: HashMap<(usize, usize), usize> = HashMap::from([((0, 0), 0)]);
    let mut succ: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    let mut done = 0;
    while let Some(q) = queue.pop_front() {
        debug_assert_eq!(q, done);
        done += 1;
        let (s, level) = states[q];
        let mut row = vec![Vec::new(); num_letters];
        for (pos, neg, acc, t) in &tgba_edges[s] {
            let mut nl = if level == k { 0 } else { level };
            while nl < k && acc[nl] {
                nl += 1;
            }
            let key = (*t, nl);
            let target = *index.entry(key).or_insert_with(|| {
                states.push(key);
                queue.push_back(states.len() - 1);
                states.len() - 1
            });
            for letter in 0..num_letters as u32 {
                if letter & pos == *pos && letter & neg == 0 {
                    row[letter as usize].push(target);
                }
            }
        }
        for r in &mut row {
            r.sort_unstable();
            r.dedup();
        }
        succ.push(row);
    }
    Nbw {
        num_atoms,
        initial: vec![0],
        accepting: states.iter().map(|&(_, l)| l == k).collect(),
        succ,
    }
    .pruned()
}
