//! LTL\[F\] formulas: syntax tree, concrete syntax, lasso semantics and the
//! set of attainable satisfaction values.

mod eval;
mod parser;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{format_rational, in_unit_interval, one, Rational};

pub use eval::eval_lasso;
pub use parser::parse;

/// A letter of `2^AP`, bit `k` set iff atom `k` of the alphabet holds.
pub type Letter = u32;

/// Ordered atom set. For synthesis alphabets the inputs occupy the low bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    atoms: Vec<String>,
    num_inputs: usize,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(atoms: &[S]) -> Self {
        Alphabet {
            atoms: atoms.iter().map(|a| a.as_ref().to_string()).collect(),
            num_inputs: atoms.len(),
        }
    }

    /// Combined `I ∪ O` alphabet; input atoms take bits `0..|I|`.
    pub fn io<S: AsRef<str>, T: AsRef<str>>(inputs: &[S], outputs: &[T]) -> Result<Self> {
        let mut atoms: Vec<String> = inputs.iter().map(|a| a.as_ref().to_string()).collect();
        atoms.extend(outputs.iter().map(|a| a.as_ref().to_string()));
        let distinct: BTreeSet<&String> = atoms.iter().collect();
        if distinct.len() != atoms.len() {
            return Err(Error::Spec("input and output atoms must be distinct".into()));
        }
        if atoms.len() > 16 {
            return Err(Error::Spec("at most 16 atoms are supported".into()));
        }
        Ok(Alphabet {
            num_inputs: inputs.len(),
            atoms,
        })
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn num_outputs(&self) -> usize {
        self.atoms.len() - self.num_inputs
    }

    pub fn inputs(&self) -> &[String] {
        &self.atoms[..self.num_inputs]
    }

    pub fn outputs(&self) -> &[String] {
        &self.atoms[self.num_inputs..]
    }

    pub fn num_letters(&self) -> usize {
        1 << self.atoms.len()
    }

    pub fn num_input_letters(&self) -> usize {
        1 << self.num_inputs
    }

    pub fn num_output_letters(&self) -> usize {
        1 << self.num_outputs()
    }

    pub fn index(&self, atom: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == atom)
    }

    /// Joins an input letter and an output letter into a full letter.
    pub fn join(&self, input: Letter, output: Letter) -> Letter {
        input | (output << self.num_inputs)
    }

    pub fn input_part(&self, letter: Letter) -> Letter {
        letter & ((1 << self.num_inputs) - 1)
    }

    pub fn output_part(&self, letter: Letter) -> Letter {
        letter >> self.num_inputs
    }

    pub fn letter_of<S: AsRef<str>>(&self, atoms: &[S]) -> Result<Letter> {
        atoms.iter().try_fold(0, |acc, a| {
            let a = a.as_ref();
            self.index(a)
                .map(|k| acc | (1 << k))
                .ok_or_else(|| Error::UnknownAtom(a.to_string()))
        })
    }

    pub fn atoms_of(&self, letter: Letter) -> Vec<String> {
        (0..self.atoms.len())
            .filter(|k| letter & (1 << k) != 0)
            .map(|k| self.atoms[k].clone())
            .collect()
    }

    pub fn input_atoms_of(&self, input: Letter) -> Vec<String> {
        self.atoms_of(input)
    }

    pub fn output_atoms_of(&self, output: Letter) -> Vec<String> {
        self.atoms_of(output << self.num_inputs)
    }

    pub fn format_letter(&self, letter: Letter) -> String {
        format!("{{{}}}", self.atoms_of(letter).join(","))
    }
}

/// Ultimately periodic word `prefix · period^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LassoWord {
    pub prefix: Vec<Letter>,
    pub period: Vec<Letter>,
}

impl LassoWord {
    pub fn new(prefix: Vec<Letter>, period: Vec<Letter>) -> Self {
        assert!(!period.is_empty(), "lasso period must be nonempty");
        LassoWord { prefix, period }
    }

    /// Number of distinct suffixes, `|u| + |v|`.
    pub fn positions(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    pub fn letter(&self, pos: usize) -> Letter {
        if pos < self.prefix.len() {
            self.prefix[pos]
        } else {
            self.period[(pos - self.prefix.len()) % self.period.len()]
        }
    }

    /// Successor among the `positions()` suffix classes.
    pub fn next(&self, pos: usize) -> usize {
        if pos + 1 < self.positions() {
            pos + 1
        } else {
            self.prefix.len()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Min(Vec<Formula>),
    Max(Vec<Formula>),
    /// `λ · x`
    Factor(Rational, Box<Formula>),
    /// `λ · x + (1 − λ) · y`
    WAvg(Rational, Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Eventually(Box<Formula>),
    Globally(Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn factor(lambda: Rational, f: Formula) -> Formula {
        Formula::Factor(lambda, Box::new(f))
    }

    pub fn wavg(lambda: Rational, a: Formula, b: Formula) -> Formula {
        Formula::WAvg(lambda, Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn eventually(f: Formula) -> Formula {
        Formula::Eventually(Box::new(f))
    }

    pub fn globally(f: Formula) -> Formula {
        Formula::Globally(Box::new(f))
    }

    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            True | False | Atom(_) => vec![],
            Not(a) | Factor(_, a) | Next(a) | Eventually(a) | Globally(a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) | WAvg(_, a, b) | Until(a, b) => vec![a, b],
            Min(cs) | Max(cs) => cs.iter().collect(),
        }
    }

    /// Number of syntax-tree nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        if let Formula::Atom(a) = self {
            out.insert(a.clone());
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    /// True when no quality operator occurs, so every value is 0 or 1.
    pub fn is_boolean(&self) -> bool {
        match self {
            Formula::Factor(..) | Formula::WAvg(..) => false,
            other => other.children().iter().all(|c| c.is_boolean()),
        }
    }

    /// Every `λ` parameter lies in `[0,1]`.
    pub fn check_parameters(&self) -> Result<()> {
        match self {
            Formula::Factor(l, _) | Formula::WAvg(l, _, _) if !in_unit_interval(l) => {
                return Err(Error::ParameterRange(l.clone()))
            }
            _ => {}
        }
        self.children().iter().try_for_each(|c| c.check_parameters())
    }

    /// Superset of `V(φ)` computed bottom-up: atoms give `{0,1}`, operators
    /// map their children's sets pointwise, temporal operators keep the union.
    pub fn candidate_values(&self) -> BTreeSet<Rational> {
        use Formula::*;
        let zero = Rational::from_integer(0.into());
        let set = |vs: &[Rational]| vs.iter().cloned().collect::<BTreeSet<_>>();
        match self {
            True => set(&[one()]),
            False => set(&[zero]),
            Atom(_) => set(&[zero, one()]),
            Not(a) => a.candidate_values().iter().map(|x| one() - x).collect(),
            And(a, b) => combine(&[a.candidate_values(), b.candidate_values()], |xs| {
                xs.iter().min().unwrap().clone()
            }),
            Or(a, b) => combine(&[a.candidate_values(), b.candidate_values()], |xs| {
                xs.iter().max().unwrap().clone()
            }),
            Implies(a, b) => {
                let na: BTreeSet<Rational> = a.candidate_values().iter().map(|x| one() - x).collect();
                combine(&[na, b.candidate_values()], |xs| xs.iter().max().unwrap().clone())
            }
            Min(cs) => {
                let sets: Vec<_> = cs.iter().map(|c| c.candidate_values()).collect();
                combine(&sets, |xs| xs.iter().min().cloned().unwrap_or_else(one))
            }
            Max(cs) => {
                let sets: Vec<_> = cs.iter().map(|c| c.candidate_values()).collect();
                combine(&sets, |xs| xs.iter().max().cloned().unwrap_or_else(|| zero.clone()))
            }
            Factor(l, a) => a.candidate_values().iter().map(|x| l * x).collect(),
            WAvg(l, a, b) => combine(&[a.candidate_values(), b.candidate_values()], |xs| {
                l * &xs[0] + (one() - l) * &xs[1]
            }),
            Next(a) => a.candidate_values(),
            Until(a, b) => {
                let mut s = a.candidate_values();
                s.extend(b.candidate_values());
                s
            }
            Eventually(a) | Globally(a) => a.candidate_values(),
        }
    }

    /// `V(φ)`, ascending: the candidate values whose level set is nonempty.
    pub fn values(&self) -> Vec<Rational> {
        let atoms: Vec<String> = self.atoms().into_iter().collect();
        let alphabet = Alphabet::new(&atoms);
        self.candidate_values()
            .into_iter()
            .filter(|v| {
                let beta = crate::boolean::booleanize(self, &crate::boolean::ValuePredicate::EqualTo(v.clone()));
                crate::automata::ltl_to_nbw(&beta, &alphabet).is_nonempty()
            })
            .collect()
    }
}

fn combine<F>(sets: &[BTreeSet<Rational>], f: F) -> BTreeSet<Rational>
where
    F: Fn(&[Rational]) -> Rational,
{
    let mut out = BTreeSet::new();
    let lists: Vec<Vec<Rational>> = sets.iter().map(|s| s.iter().cloned().collect()).collect();
    if lists.iter().any(|l| l.is_empty()) {
        return out;
    }
    let mut idx = vec![0usize; lists.len()];
    loop {
        let pick: Vec<Rational> = idx.iter().zip(&lists).map(|(&i, l)| l[i].clone()).collect();
        out.insert(f(&pick));
        let mut k = 0;
        loop {
            if k == lists.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < lists[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, name: &str, cs: &[Formula]) -> fmt::Result {
    write!(f, "{name}(")?;
    for (i, c) in cs.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{c}")?;
    }
    write!(f, ")")
}

/// Fully parenthesized concrete syntax accepted by [`parse`].
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula::*;
        match self {
            True => write!(f, "true"),
            False => write!(f, "false"),
            Atom(a) => write!(f, "{a}"),
            Not(a) => write!(f, "!({a})"),
            And(a, b) => write!(f, "({a} & {b})"),
            Or(a, b) => write!(f, "({a} | {b})"),
            Implies(a, b) => write!(f, "({a} -> {b})"),
            Min(cs) => write_list(f, "min", cs),
            Max(cs) => write_list(f, "max", cs),
            Factor(l, a) => write!(f, "factor{{{}}}({a})", format_rational(l)),
            WAvg(l, a, b) => write!(f, "wavg{{{}}}({a}, {b})", format_rational(l)),
            Next(a) => write!(f, "X({a})"),
            Until(a, b) => write!(f, "(({a}) U ({b}))"),
            Eventually(a) => write!(f, "F({a})"),
            Globally(a) => write!(f, "G({a})"),
        }
    }
}

#[cfg(test)]
pub(crate) mod arbitrary;
