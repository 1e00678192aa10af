use super::{Alphabet, Formula, LassoWord};
use crate::rational::{one, zero, Rational};

/// Satisfaction value of `f` on the lasso `word`, computed exactly.
///
/// Panics if `f` mentions an atom missing from `alphabet`.
pub fn eval_lasso(f: &Formula, alphabet: &Alphabet, word: &LassoWord) -> Rational {
    values_at(f, alphabet, word).swap_remove(0)
}

/// Value of `f` at each of the `|u| + |v|` suffix classes of `word`.
fn values_at(f: &Formula, alphabet: &Alphabet, word: &LassoWord) -> Vec<Rational> {
    use Formula::*;
    let n = word.positions();
    let map = |a: &Formula, g: &dyn Fn(&Rational) -> Rational| -> Vec<Rational> {
        values_at(a, alphabet, word).iter().map(g).collect()
    };
    let zip = |a: &Formula, b: &Formula, g: &dyn Fn(&Rational, &Rational) -> Rational| -> Vec<Rational> {
        let va = values_at(a, alphabet, word);
        let vb = values_at(b, alphabet, word);
        va.iter().zip(&vb).map(|(x, y)| g(x, y)).collect()
    };
    match f {
        True => vec![one(); n],
        False => vec![zero(); n],
        Atom(name) => {
            let bit = alphabet
                .index(name)
                .unwrap_or_else(|| panic!("atom '{name}' is not in the alphabet"));
            (0..n)
                .map(|j| {
                    if word.letter(j) & (1 << bit) != 0 {
                        one()
                    } else {
                        zero()
                    }
                })
                .collect()
        }
        Not(a) => map(a, &|x| one() - x),
        And(a, b) => zip(a, b, &|x, y| x.min(y).clone()),
        Or(a, b) => zip(a, b, &|x, y| x.max(y).clone()),
        Implies(a, b) => zip(a, b, &|x, y| (one() - x).max(y.clone())),
        Min(cs) | Max(cs) => {
            let is_min = matches!(f, Min(_));
            let init = if is_min { one() } else { zero() };
            let mut acc = vec![init; n];
            for c in cs {
                for (slot, v) in acc.iter_mut().zip(values_at(c, alphabet, word)) {
                    if (is_min && v < *slot) || (!is_min && v > *slot) {
                        *slot = v;
                    }
                }
            }
            acc
        }
        Factor(l, a) => map(a, &|x| l * x),
        WAvg(l, a, b) => zip(a, b, &|x, y| l * x + (one() - l) * y),
        Next(a) => {
            let va = values_at(a, alphabet, word);
            (0..n).map(|j| va[word.next(j)].clone()).collect()
        }
        Until(a, b) => until(word, &values_at(a, alphabet, word), &values_at(b, alphabet, word)),
        Eventually(a) => until(word, &vec![one(); n], &values_at(a, alphabet, word)),
        Globally(a) => {
            let neg: Vec<Rational> = values_at(a, alphabet, word).iter().map(|x| one() - x).collect();
            until(word, &vec![one(); n], &neg).iter().map(|x| one() - x).collect()
        }
    }
}

/// Least fixpoint of `U(j) = max(b(j), min(a(j), U(next j)))`, which is the
/// supremum over witness positions; it stabilizes because only finitely many
/// values occur.
fn until(word: &LassoWord, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = word.positions();
    let mut u = vec![zero(); n];
    loop {
        let mut changed = false;
        for j in (0..n).rev() {
            let carried = a[j].clone().min(u[word.next(j)].clone());
            let v = b[j].clone().max(carried);
            if v != u[j] {
                u[j] = v;
                changed = true;
            }
        }
        if !changed {
            return u;
        }
    }
}
