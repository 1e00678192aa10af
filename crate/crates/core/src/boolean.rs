//! Compilation of an LTL\[F\] formula plus a value predicate into a plain
//! LTL formula with the same models.

use std::fmt;

use num::Zero;

use crate::fltl::Formula;
use crate::rational::{format_rational, one, Rational};

/// Boolean LTL.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ltl {
    True,
    False,
    Atom(String),
    Not(Box<Ltl>),
    And(Vec<Ltl>),
    Or(Vec<Ltl>),
    Next(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
    Eventually(Box<Ltl>),
    Globally(Box<Ltl>),
}

impl Ltl {
    pub fn atom(name: &str) -> Ltl {
        Ltl::Atom(name.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Ltl) -> Ltl {
        match f {
            Ltl::True => Ltl::False,
            Ltl::False => Ltl::True,
            Ltl::Not(inner) => *inner,
            other => Ltl::Not(Box::new(other)),
        }
    }

    pub fn and(items: Vec<Ltl>) -> Ltl {
        let mut out: Vec<Ltl> = Vec::new();
        for item in items {
            match item {
                Ltl::True => {}
                Ltl::False => return Ltl::False,
                Ltl::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        out.sort();
        out.dedup();
        match out.len() {
            0 => Ltl::True,
            1 => out.pop().unwrap(),
            _ => Ltl::And(out),
        }
    }

    pub fn or(items: Vec<Ltl>) -> Ltl {
        let mut out: Vec<Ltl> = Vec::new();
        for item in items {
            match item {
                Ltl::False => {}
                Ltl::True => return Ltl::True,
                Ltl::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        out.sort();
        out.dedup();
        match out.len() {
            0 => Ltl::False,
            1 => out.pop().unwrap(),
            _ => Ltl::Or(out),
        }
    }

    pub fn next(f: Ltl) -> Ltl {
        match f {
            Ltl::True | Ltl::False => f,
            other => Ltl::Next(Box::new(other)),
        }
    }

    pub fn until(a: Ltl, b: Ltl) -> Ltl {
        match (a, b) {
            (_, Ltl::True) => Ltl::True,
            (_, Ltl::False) => Ltl::False,
            (Ltl::False, b) => b,
            (Ltl::True, b) => Ltl::eventually(b),
            (a, b) => Ltl::Until(Box::new(a), Box::new(b)),
        }
    }

    pub fn eventually(f: Ltl) -> Ltl {
        match f {
            Ltl::True | Ltl::False => f,
            other => Ltl::Eventually(Box::new(other)),
        }
    }

    pub fn globally(f: Ltl) -> Ltl {
        match f {
            Ltl::True | Ltl::False => f,
            other => Ltl::Globally(Box::new(other)),
        }
    }

    pub fn size(&self) -> usize {
        use Ltl::*;
        1 + match self {
            True | False | Atom(_) => 0,
            Not(a) | Next(a) | Eventually(a) | Globally(a) => a.size(),
            And(cs) | Or(cs) => cs.iter().map(|c| c.size()).sum(),
            Until(a, b) => a.size() + b.size(),
        }
    }

    /// The same formula as a (Boolean-valued) LTL\[F\] formula.
    pub fn to_formula(&self) -> Formula {
        use Ltl::*;
        let fold = |cs: &[Ltl], conj: bool| -> Formula {
            let fs: Vec<Formula> = cs.iter().map(|c| c.to_formula()).collect();
            if conj {
                Formula::Min(fs)
            } else {
                Formula::Max(fs)
            }
        };
        match self {
            True => Formula::True,
            False => Formula::False,
            Atom(a) => Formula::atom(a),
            Not(a) => Formula::not(a.to_formula()),
            And(cs) => fold(cs, true),
            Or(cs) => fold(cs, false),
            Next(a) => Formula::next(a.to_formula()),
            Until(a, b) => Formula::until(a.to_formula(), b.to_formula()),
            Eventually(a) => Formula::eventually(a.to_formula()),
            Globally(a) => Formula::globally(a.to_formula()),
        }
    }
}

impl fmt::Display for Ltl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Ltl::*;
        let join = |f: &mut fmt::Formatter<'_>, cs: &[Ltl], op: &str| -> fmt::Result {
            write!(f, "(")?;
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, ")")
        };
        match self {
            True => write!(f, "true"),
            False => write!(f, "false"),
            Atom(a) => write!(f, "{a}"),
            Not(a) => write!(f, "!{a}"),
            And(cs) => join(f, cs, "&"),
            Or(cs) => join(f, cs, "|"),
            Next(a) => write!(f, "X {a}"),
            Until(a, b) => write!(f, "({a} U {b})"),
            Eventually(a) => write!(f, "F {a}"),
            Globally(a) => write!(f, "G {a}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValuePredicate {
    EqualTo(Rational),
    AtLeast(Rational),
    GreaterThan(Rational),
    Member(Vec<Rational>),
}

impl fmt::Display for ValuePredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValuePredicate::EqualTo(v) => write!(f, "= {}", format_rational(v)),
            ValuePredicate::AtLeast(v) => write!(f, ">= {}", format_rational(v)),
            ValuePredicate::GreaterThan(v) => write!(f, "> {}", format_rational(v)),
            ValuePredicate::Member(vs) => {
                let items: Vec<String> = vs.iter().map(format_rational).collect();
                write!(f, "in {{{}}}", items.join(", "))
            }
        }
    }
}

/// Plain LTL formula satisfied by exactly the computations on which `f`'s
/// value satisfies `theta`.
pub fn booleanize(f: &Formula, theta: &ValuePredicate) -> Ltl {
    match theta {
        ValuePredicate::AtLeast(v) => at_least(f, v),
        ValuePredicate::GreaterThan(v) => greater(f, v),
        ValuePredicate::EqualTo(v) => Ltl::and(vec![at_least(f, v), Ltl::not(greater(f, v))]),
        ValuePredicate::Member(vs) => Ltl::or(
            vs.iter()
                .map(|v| booleanize(f, &ValuePredicate::EqualTo(v.clone())))
                .collect(),
        ),
    }
}

fn at_least(f: &Formula, v: &Rational) -> Ltl {
    compare(f, v, false)
}

fn greater(f: &Formula, v: &Rational) -> Ltl {
    compare(f, v, true)
}

/// `value(f) > v` when `strict`, `value(f) ≥ v` otherwise.
fn compare(f: &Formula, v: &Rational, strict: bool) -> Ltl {
    use Formula::*;
    let holds = |x: &Rational| if strict { x > v } else { x >= v };
    // Every value lies in [0,1].
    if holds(&Rational::zero()) {
        return Ltl::True;
    }
    if !holds(&one()) {
        return Ltl::False;
    }
    match f {
        True => Ltl::True,
        False => Ltl::False,
        Atom(a) => Ltl::atom(a),
        // 1 - x ≥ v  ⇔  ¬(x > 1 - v);   1 - x > v  ⇔  ¬(x ≥ 1 - v)
        Not(a) => Ltl::not(compare(a, &(one() - v), !strict)),
        And(a, b) => Ltl::and(vec![compare(a, v, strict), compare(b, v, strict)]),
        Or(a, b) => Ltl::or(vec![compare(a, v, strict), compare(b, v, strict)]),
        Implies(a, b) => Ltl::or(vec![Ltl::not(compare(a, &(one() - v), !strict)), compare(b, v, strict)]),
        Min(cs) => Ltl::and(cs.iter().map(|c| compare(c, v, strict)).collect()),
        Max(cs) => Ltl::or(cs.iter().map(|c| compare(c, v, strict)).collect()),
        Factor(l, a) => {
            // v > 0 here, so λ = 0 can never reach it.
            if l.is_zero() {
                return Ltl::False;
            }
            compare(a, &(v / l), strict)
        }
        WAvg(l, a, b) => {
            let va: Vec<Rational> = a.candidate_values().into_iter().collect();
            let vb: Vec<Rational> = b.candidate_values().into_iter().collect();
            let mut pairs: Vec<(Rational, Rational)> = Vec::new();
            for x in &va {
                for y in &vb {
                    if holds(&(l * x + (one() - l) * y)) {
                        pairs.push((x.clone(), y.clone()));
                    }
                }
            }
            // Keep the minimal pairs: a pair dominated componentwise by
            // another adds nothing to the disjunction.
            let minimal: Vec<&(Rational, Rational)> = pairs
                .iter()
                .filter(|p| !pairs.iter().any(|q| q != *p && q.0 <= p.0 && q.1 <= p.1))
                .collect();
            Ltl::or(
                minimal
                    .into_iter()
                    .map(|(x, y)| Ltl::and(vec![at_least(a, x), at_least(b, y)]))
                    .collect(),
            )
        }
        Next(a) => Ltl::next(compare(a, v, strict)),
        Until(a, b) => Ltl::until(compare(a, v, strict), compare(b, v, strict)),
        Eventually(a) => Ltl::eventually(compare(a, v, strict)),
        Globally(a) => Ltl::globally(compare(a, v, strict)),
    }
}
