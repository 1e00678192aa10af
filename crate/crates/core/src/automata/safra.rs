//! Safra-tree determinization with compact (index-ordered) node names.

use std::collections::{HashMap, VecDeque};

use super::bits::Bits;
use super::{state_ceiling, Dpw, Nbw};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
struct Node {
    name: usize,
    label: Bits,
    children: Vec<Node>,
}

struct Ctx {
    n: usize,
    accepting: Bits,
    /// `post[q][letter]`
    post: Vec<Vec<Bits>>,
}

impl Ctx {
    fn image(&self, set: &Bits, letter: usize) -> Bits {
        let mut out = Bits::empty(self.n);
        for q in set.iter() {
            out.union_with(&self.post[q][letter]);
        }
        out
    }
}

fn spawn(node: &mut Node, acc: &Bits, next_name: &mut usize) {
    for c in &mut node.children {
        spawn(c, acc, next_name);
    }
    let fresh = node.label.intersection(acc);
    if !fresh.is_empty() {
        node.children.push(Node {
            name: *next_name,
            label: fresh,
            children: Vec::new(),
        });
        *next_name += 1;
    }
}

fn advance(node: &mut Node, ctx: &Ctx, letter: usize) {
    node.label = ctx.image(&node.label, letter);
    for c in &mut node.children {
        advance(c, ctx, letter);
    }
}

fn horizontal_merge(node: &mut Node, forbidden: &Bits) {
    node.label.subtract(forbidden);
    let mut older = forbidden.clone();
    for c in &mut node.children {
        horizontal_merge(c, &older);
        older.union_with(&c.label);
    }
}

fn collect_names(node: &Node, out: &mut Vec<usize>) {
    out.push(node.name);
    for c in &node.children {
        collect_names(c, out);
    }
}

fn remove_empty(node: &mut Node, removed: &mut Vec<usize>) {
    node.children.retain(|c| {
        if c.label.is_empty() {
            collect_names(c, removed);
            false
        } else {
            true
        }
    });
    for c in &mut node.children {
        remove_empty(c, removed);
    }
}

fn vertical_merge(node: &mut Node, n: usize, marked: &mut Vec<usize>, removed: &mut Vec<usize>) {
    if node.children.is_empty() {
        return;
    }
    let mut union = Bits::empty(n);
    for c in &node.children {
        union.union_with(&c.label);
    }
    if union == node.label {
        for c in &node.children {
            collect_names(c, removed);
        }
        node.children.clear();
        marked.push(node.name);
    } else {
        for c in &mut node.children {
            vertical_merge(c, n, marked, removed);
        }
    }
}

fn rename(node: &mut Node, map: &HashMap<usize, usize>) {
    node.name = map[&node.name];
    for c in &mut node.children {
        rename(c, map);
    }
}

fn encode(node: &Node, depth: u64, out: &mut Vec<u64>) {
    out.push(node.name as u64);
    out.push(depth);
    out.extend_from_slice(node.label.words());
    for c in &node.children {
        encode(c, depth + 1, out);
    }
}

/// One Safra step. Returns the successor tree (None when empty) and the
/// min-parity priority of the transition.
fn step(tree: &Node, ctx: &Ctx, letter: usize) -> (Option<Node>, usize) {
    let n = ctx.n;
    let mut t = tree.clone();
    let mut next_name = n + 1;
    spawn(&mut t, &ctx.accepting, &mut next_name);
    advance(&mut t, ctx, letter);
    horizontal_merge(&mut t, &Bits::empty(n));
    let mut removed = Vec::new();
    if t.label.is_empty() {
        collect_names(&t, &mut removed);
        return (None, 2 * n + 1);
    }
    remove_empty(&mut t, &mut removed);
    let mut marked = Vec::new();
    vertical_merge(&mut t, n, &mut marked, &mut removed);

    let mut priority = 2 * n + 1;
    if let Some(f) = marked.iter().min() {
        priority = priority.min(2 * f);
    }
    if let Some(e) = removed.iter().filter(|&&e| e <= n).min() {
        priority = priority.min(2 * e - 1);
    }
    let mut names = Vec::new();
    collect_names(&t, &mut names);
    names.sort_unstable();
    let map: HashMap<usize, usize> = names.iter().enumerate().map(|(i, &x)| (x, i + 1)).collect();
    rename(&mut t, &map);
    (Some(t), priority)
}

/// Determinizes an NBW into an equivalent max-even DPW.
pub fn determinize(nbw: &Nbw) -> Result<Dpw> {
    let nbw = nbw.pruned();
    let n = nbw.num_states();
    let letters = nbw.num_letters();
    let ceiling = state_ceiling();
    let sink_only = || Dpw {
        num_atoms: nbw.num_atoms,
        initial: 0,
        delta: vec![vec![0; letters]],
        ranks: vec![1],
    };
    if n == 0 || nbw.initial.is_empty() {
        return Ok(sink_only());
    }
    let mut accepting = Bits::empty(n);
    for q in (0..n).filter(|&q| nbw.accepting[q]) {
        accepting.insert(q);
    }
    let post = (0..n)
        .map(|q| {
            (0..letters)
                .map(|l| {
                    let mut b = Bits::empty(n);
                    for &t in &nbw.succ[q][l] {
                        b.insert(t);
                    }
                    b
                })
                .collect()
        })
        .collect();
    let ctx = Ctx { n, accepting, post };

    let mut init_label = Bits::empty(n);
    for &q in &nbw.initial {
        init_label.insert(q);
    }
    let root = Node {
        name: 1,
        label: init_label,
        children: Vec::new(),
    };
    let rank_of = |p: usize| (2 * n + 2 - p) as u32;

    // state 0 is the rejecting sink
    let mut trees: Vec<Option<Node>> = vec![None];
    let mut ranks = vec![1u32];
    let mut index: HashMap<(Vec<u64>, usize), usize> = HashMap::new();
    let mut delta: Vec<Vec<usize>> = vec![vec![0; letters]];
    let mut key = Vec::new();
    encode(&root, 0, &mut key);
    index.insert((key, 2 * n + 1), 1);
    trees.push(Some(root));
    ranks.push(rank_of(2 * n + 1));
    let mut queue = VecDeque::from([1usize]);
    while let Some(s) = queue.pop_front() {
        let tree = trees[s].clone().expect("non-sink state");
        let mut row = Vec::with_capacity(letters);
        for l in 0..letters {
            let (next, p) = step(&tree, &ctx, l);
            let Some(next) = next else {
                row.push(0);
                continue;
            };
            let mut key = Vec::new();
            encode(&next, 0, &mut key);
            let id = match index.get(&(key.clone(), p)) {
                Some(&id) => id,
                None => {
                    let id = trees.len();
                    if id >= ceiling {
                        return Err(Error::StateCeiling {
                            what: "determinization".into(),
                            ceiling,
                        });
                    }
                    index.insert((key, p), id);
                    trees.push(Some(next));
                    ranks.push(rank_of(p));
                    queue.push_back(id);
                    id
                }
            };
            row.push(id);
        }
        if delta.len() <= s {
            delta.resize(s + 1, Vec::new());
        }
        delta[s] = row;
    }
    Ok(Dpw {
        num_atoms: nbw.num_atoms,
        initial: 1,
        delta,
        ranks,
    })
}
