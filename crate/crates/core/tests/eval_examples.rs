use hqsynth::fltl::{parse, Alphabet, Formula};
use hqsynth::mdp::Environment;
use hqsynth::rational::{rat, Rational};
use hqsynth::transducer::{self, Transducer, ValueAutomata};

macro_rules! fixture {
    ($name:literal) => {
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../cli/tests/fixtures/", $name))
    };
}

fn formula_of(spec: &str) -> (Alphabet, Formula, Option<Formula>) {
    let v: serde_json::Value = serde_json::from_str(spec).unwrap();
    let names = |k: &str| -> Vec<String> {
        v[k].as_array()
            .unwrap()
            .iter()
            .map(|a| a.as_str().unwrap().to_string())
            .collect()
    };
    let (i, o) = (names("inputs"), names("outputs"));
    let f = parse(v["formula"].as_str().unwrap(), &i, &o).unwrap();
    let psi = v.get("assumption").map(|p| parse(p.as_str().unwrap(), &i, &o).unwrap());
    (Alphabet::io(&i, &o).unwrap(), f, psi)
}

struct Measures {
    expected: Rational,
    almost_sure: Rational,
    worst: Rational,
}

fn measure(spec: &str, t: &str) -> Measures {
    let (alphabet, f, _) = formula_of(spec);
    let t = Transducer::from_json(t).unwrap();
    let va = ValueAutomata::build(&f, &alphabet).unwrap();
    let env = Environment::Uniform;
    Measures {
        expected: transducer::expected_value(&t, &va, &alphabet, &env).unwrap(),
        almost_sure: transducer::almost_sure_value(&t, &va, &alphabet, &env).unwrap(),
        worst: transducer::worst_case_value(&t, &va, &alphabet).unwrap().value,
    }
}

#[test]
fn close_transducers() {
    let t1 = measure(fixture!("close.json"), fixture!("close_t1.json"));
    assert_eq!(
        (t1.expected, t1.almost_sure, t1.worst),
        (rat(1, 2), rat(0, 1), rat(0, 1))
    );
    let t2 = measure(fixture!("close.json"), fixture!("close_t2.json"));
    assert_eq!(
        (t2.expected, t2.almost_sure, t2.worst),
        (rat(3, 4), rat(1, 2), rat(1, 2))
    );
}

#[test]
fn encode_transducers() {
    let t3 = measure(fixture!("encode.json"), fixture!("encode_t3.json"));
    assert_eq!(
        (t3.expected, t3.almost_sure, t3.worst),
        (rat(3, 4), rat(3, 4), rat(3, 4))
    );
    let t2 = measure(fixture!("encode.json"), fixture!("encode_t2.json"));
    assert_eq!(
        (t2.expected, t2.almost_sure, t2.worst),
        (rat(5, 8), rat(3, 8), rat(3, 8))
    );
}

#[test]
fn conditional_encode_transducers() {
    let (alphabet, f, psi) = formula_of(fixture!("encode_assume.json"));
    let psi = psi.unwrap();
    let va = ValueAutomata::build(&f, &alphabet).unwrap();
    for (t, want) in [
        (fixture!("encode_t4.json"), rat(11, 16)),
        (fixture!("encode_t5.json"), rat(13, 16)),
    ] {
        let t = Transducer::from_json(t).unwrap();
        let (v, p) = transducer::conditional_expected_value(&t, &va, &psi, &alphabet, &Environment::Uniform).unwrap();
        assert_eq!((v, p), (want, rat(1, 4)));
    }
}

/// Expected value of replacing at the first station from position `t` on,
/// `k` positions, station probability `p`, summed in closed form.
fn battery_closed_form(k: i64, t: i64, p: Rational) -> Rational {
    let one = rat(1, 1);
    let q = &one - &p;
    let pow = |x: &Rational, n: i64| (0..n).fold(rat(1, 1), |acc, _| acc * x);
    let m = k - t + 1;
    pow(&q, k)
        + rat(t, k) * (&one - pow(&q, m))
        + (&p - &one) / (rat(k, 1) * &p) * (rat(m, 1) * pow(&q, m - 1) * &p - &one + pow(&q, m))
}

#[test]
fn battery_transducer() {
    let m = measure(fixture!("battery.json"), fixture!("battery_k4_t2.json"));
    assert_eq!(battery_closed_form(4, 2, rat(1, 2)), rat(5, 8));
    assert_eq!(m.expected, rat(5, 8));
}
