//! Small explicit-graph algorithms shared by the automata and MDP code.

use std::collections::VecDeque;

/// Strongly connected components (Tarjan, iterative) of the graph given by
/// `succ`, restricted to nodes where `alive` holds. Components come out in
/// reverse topological order: a component's successors appear before it.
pub fn scc<F>(n: usize, alive: &[bool], mut succ: F) -> Vec<Vec<usize>>
where
    F: FnMut(usize) -> Vec<usize>,
{
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;

    for root in 0..n {
        if !alive[root] || index[root] != UNSEEN {
            continue;
        }
        // (node, successors, next successor position)
        let mut call: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        let s = succ(root);
        call.push((root, s, 0));

        while let Some(frame) = call.last_mut() {
            let v = frame.0;
            if frame.2 < frame.1.len() {
                let w = frame.1[frame.2];
                frame.2 += 1;
                if !alive[w] {
                    continue;
                }
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    let s = succ(w);
                    call.push((w, s, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(parent) = call.last() {
                    let p = parent.0;
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
    }
    out
}

/// Nodes reachable from `start` (inclusive) following `succ`.
pub fn reachable<F>(n: usize, start: &[usize], mut succ: F) -> Vec<bool>
where
    F: FnMut(usize) -> Vec<usize>,
{
    let mut seen = vec![false; n];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &s in start {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for w in succ(v) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Shortest path from `from` to any node in `target`, as a node list
/// including both ends. `succ` yields `(edge_label, node)` pairs; the
/// returned labels are those of the edges taken.
pub fn shortest_path<L: Clone, F>(n: usize, from: usize, target: &[bool], mut succ: F) -> Option<(Vec<usize>, Vec<L>)>
where
    F: FnMut(usize) -> Vec<(L, usize)>,
{
    let mut parent: Vec<Option<(usize, L)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    seen[from] = true;
    queue.push_back(from);
    while let Some(v) = queue.pop_front() {
        if target[v] {
            let mut nodes = vec![v];
            let mut labels = Vec::new();
            let mut cur = v;
            while let Some((p, l)) = parent[cur].clone() {
                nodes.push(p);
                labels.push(l);
                cur = p;
            }
            nodes.reverse();
            labels.reverse();
            return Some((nodes, labels));
        }
        for (l, w) in succ(v) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some((v, l));
                queue.push_back(w);
            }
        }
    }
    None
}

/// Whether the component `comp` (from [`scc`]) carries a cycle.
pub fn is_nontrivial<F>(comp: &[usize], mut succ: F) -> bool
where
    F: FnMut(usize) -> Vec<usize>,
{
    comp.len() > 1 || succ(comp[0]).contains(&comp[0])
}
