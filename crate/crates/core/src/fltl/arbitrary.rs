//! proptest generators for formulas and lasso words over atoms `a`, `b`.

use proptest::prelude::*;

use super::{Formula, LassoWord};
use crate::rational::{rat, Rational};

pub fn lambda() -> impl Strategy<Value = Rational> {
    prop_oneof![
        Just(rat(0, 1)),
        Just(rat(1, 4)),
        Just(rat(1, 2)),
        Just(rat(2, 3)),
        Just(rat(1, 1))
    ]
}

pub fn formula(depth: u32) -> BoxedStrategy<Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        Just(Formula::atom("a")),
        Just(Formula::atom("b")),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (lambda(), inner.clone()).prop_map(|(l, a)| Formula::factor(l, a)),
            (lambda(), inner.clone(), inner.clone()).prop_map(|(l, a, b)| Formula::wavg(l, a, b)),
            inner.clone().prop_map(Formula::next),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::until(a, b)),
            inner.clone().prop_map(Formula::eventually),
            inner.prop_map(Formula::globally),
        ]
    })
    .boxed()
}

pub fn lasso() -> impl Strategy<Value = LassoWord> {
    (
        proptest::collection::vec(0u32..4, 0..4),
        proptest::collection::vec(0u32..4, 1..4),
    )
        .prop_map(|(u, v)| LassoWord::new(u, v))
}
