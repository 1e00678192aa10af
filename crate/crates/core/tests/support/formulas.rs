//! Random formulas, lassos and small machines.

use hqsynth::fltl::{Formula, LassoWord, Letter};
use hqsynth::rational::{rat, Rational};
use hqsynth::transducer::Transducer;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn lambda<R: Rng>(rng: &mut R) -> Rational {
    [rat(0, 1), rat(1, 4), rat(1, 2), rat(2, 3), rat(3, 4), rat(1, 1)]
        .choose(rng)
        .unwrap()
        .clone()
}

/// A formula with at most `size` nodes over `atoms`.
pub fn formula<R: Rng>(rng: &mut R, atoms: &[&str], size: usize) -> Formula {
    if size <= 1 || rng.gen_bool(0.05) {
        return match rng.gen_range(0..10) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::atom(atoms.choose(rng).unwrap()),
        };
    }
    let binary = |rng: &mut R| {
        let left = rng.gen_range(1..=size - 2);
        (formula(rng, atoms, left), formula(rng, atoms, size - 1 - left))
    };
    match rng.gen_range(0..10) {
        0 => Formula::not(formula(rng, atoms, size - 1)),
        1 if size >= 3 => {
            let (a, b) = binary(rng);
            Formula::and(a, b)
        }
        2 if size >= 3 => {
            let (a, b) = binary(rng);
            Formula::or(a, b)
        }
        3 if size >= 3 => {
            let (a, b) = binary(rng);
            Formula::implies(a, b)
        }
        4 => Formula::factor(lambda(rng), formula(rng, atoms, size - 1)),
        5 if size >= 3 => {
            let l = lambda(rng);
            let (a, b) = binary(rng);
            Formula::wavg(l, a, b)
        }
        6 if size >= 3 => {
            let (a, b) = binary(rng);
            Formula::until(a, b)
        }
        7 => Formula::eventually(formula(rng, atoms, size - 1)),
        8 => Formula::globally(formula(rng, atoms, size - 1)),
        _ => Formula::next(formula(rng, atoms, size - 1)),
    }
}

/// A formula without quality operators.
pub fn boolean_formula<R: Rng>(rng: &mut R, atoms: &[&str], size: usize) -> Formula {
    loop {
        let f = formula(rng, atoms, size);
        if f.is_boolean() {
            return f;
        }
    }
}

pub fn lasso<R: Rng>(rng: &mut R, letters: u32) -> LassoWord {
    let u = (0..rng.gen_range(0..4)).map(|_| rng.gen_range(0..letters)).collect();
    let v = (0..rng.gen_range(1..4)).map(|_| rng.gen_range(0..letters)).collect();
    LassoWord::new(u, v)
}

/// Transducer over one input `i` and one output `o` with random labels and
/// transitions.
pub fn transducer<R: Rng>(rng: &mut R, states: usize) -> Transducer {
    Transducer {
        inputs: vec!["i".into()],
        outputs: vec!["o".into()],
        initial: 0,
        labels: (0..states).map(|_| rng.gen_range(0..2)).collect(),
        delta: (0..states)
            .map(|_| (0..2).map(|_| rng.gen_range(0..states)).collect())
            .collect(),
    }
}

/// Transducer of a machine that fixes each cycle's output before reading
/// that cycle's input: `out[m]` is emitted together with the input read in
/// machine state `m`, which then moves to `next[m][i]`.
pub fn output_first(out: &[Letter], next: &[Vec<usize>]) -> Transducer {
    let n = out.len();
    // state (m, l): machine in m, last emitted l; initial (0, 0)
    let id = |m: usize, l: Letter| m * 2 + l as usize;
    let mut labels = vec![0; 2 * n];
    let mut delta = vec![vec![0; 2]; 2 * n];
    for m in 0..n {
        for l in 0..2 {
            labels[id(m, l)] = l;
            for i in 0..2 {
                delta[id(m, l)][i] = id(next[m][i], out[m]);
            }
        }
    }
    Transducer {
        inputs: vec!["i".into()],
        outputs: vec!["o".into()],
        initial: 0,
        labels,
        delta,
    }
}

/// Every output-first machine with at most `max` states over one input and
/// one output.
pub fn all_output_first(max: usize) -> Vec<Transducer> {
    let mut out = Vec::new();
    for n in 1..=max {
        for labels in 0..(1usize << n) {
            let o: Vec<Letter> = (0..n).map(|m| ((labels >> m) & 1) as Letter).collect();
            let edges = n * 2;
            for code in 0..n.pow(edges as u32) {
                let mut c = code;
                let next: Vec<Vec<usize>> = (0..n)
                    .map(|_| {
                        (0..2)
                            .map(|_| {
                                let t = c % n;
                                c /= n;
                                t
                            })
                            .collect()
                    })
                    .collect();
                out.push(output_first(&o, &next));
            }
        }
    }
    out
}
