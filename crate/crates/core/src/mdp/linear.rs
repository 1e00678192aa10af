//! Exact sparse Gaussian elimination for the diagonally dominant systems
//! `(I − P_TT) x = b` arising from absorbing chains.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Zero};

use crate::rational::Rational;

/// Solves `A x = B` where `rows[i]` holds the nonzero entries of row `i` and
/// `rhs[i]` is row `i` of the right-hand side (one entry per column of `B`).
/// Pivots are taken on the diagonal in `order`; the caller guarantees that
/// every pivot stays nonzero (true for `I − P` over transient states).
pub fn solve(
    mut rows: Vec<BTreeMap<usize, Rational>>,
    mut rhs: Vec<Vec<Rational>>,
    order: &[usize],
) -> Vec<Vec<Rational>> {
    let n = rows.len();
    let width = rhs.first().map_or(0, Vec::len);
    // col_rows[j]: rows with a nonzero in column j
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (i, row) in rows.iter().enumerate() {
        for &j in row.keys() {
            col_rows[j].insert(i);
        }
    }
    let mut eliminated = vec![false; n];
    for &k in order {
        let pivot = rows[k].get(&k).cloned().expect("zero pivot");
        debug_assert!(!pivot.is_zero());
        if !pivot.is_one() {
            for v in rows[k].values_mut() {
                *v /= &pivot;
            }
            for v in rhs[k].iter_mut() {
                *v /= &pivot;
            }
        }
        eliminated[k] = true;
        let users: Vec<usize> = col_rows[k]
            .iter()
            .copied()
            .filter(|&r| r != k && !eliminated[r])
            .collect();
        let pivot_row: Vec<(usize, Rational)> = rows[k].iter().map(|(&j, v)| (j, v.clone())).collect();
        let pivot_rhs = rhs[k].clone();
        for r in users {
            let factor = rows[r].remove(&k).expect("column index out of sync");
            col_rows[k].remove(&r);
            for (j, v) in &pivot_row {
                if *j == k {
                    continue;
                }
                let entry = rows[r].entry(*j).or_insert_with(Rational::zero);
                *entry -= &factor * v;
                if entry.is_zero() {
                    rows[r].remove(j);
                    col_rows[*j].remove(&r);
                } else {
                    col_rows[*j].insert(r);
                }
            }
            for (c, v) in pivot_rhs.iter().enumerate() {
                rhs[r][c] -= &factor * v;
            }
        }
    }
    // back substitution in reverse elimination order
    let mut x: Vec<Option<Vec<Rational>>> = vec![None; n];
    for &k in order.iter().rev() {
        let mut value = rhs[k].clone();
        for (j, v) in &rows[k] {
            if *j == k {
                continue;
            }
            let xj = x[*j].as_ref().expect("back substitution order");
            for c in 0..width {
                value[c] -= v * &xj[c];
            }
        }
        x[k] = Some(value);
    }
    x.into_iter().map(|v| v.expect("variable not in order")).collect()
}

/// Depth-first postorder of the dependency graph, a cheap fill-reducing
/// elimination order for chain-shaped systems.
pub fn postorder(rows: &[BTreeMap<usize, Rational>]) -> Vec<usize> {
    let n = rows.len();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(root, rows[root].keys().copied().collect())];
        while let Some((v, pending)) = stack.last_mut() {
            if let Some(w) = pending.pop() {
                if !seen[w] {
                    seen[w] = true;
                    let next = rows[w].keys().copied().collect();
                    stack.push((w, next));
                }
            } else {
                order.push(*v);
                stack.pop();
            }
        }
    }
    order
}
