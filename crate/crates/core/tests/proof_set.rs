use graphcx::involution::{audit_pairing, VertexLevel};
use graphcx::text::parse_literal;
use graphcx::{build_f, shlb_residual, AlphaInput, Bullet, Engine, Faults, OrientedGraph, TensorVector};

fn g(literal: &str) -> OrientedGraph {
    parse_literal(literal).unwrap()
}

fn theta() -> OrientedGraph {
    g("2;1>2,1>2,1>2")
}

fn k4() -> OrientedGraph {
    g("4;1>2,1>3,1>4,2>3,2>4,3>4")
}

fn size_without(bullet: Option<Bullet>, m: usize, input: &AlphaInput) -> usize {
    let faults = Faults {
        skip_bullet: bullet,
        ..Faults::NONE
    };
    Engine::new(faults).build_f(m, input).unwrap().len()
}

/// `|F|` with each bullet skipped, in `Bullet::ALL` order.
fn sizes(m: usize, input: &AlphaInput) -> (usize, Vec<usize>) {
    let skipped = Bullet::ALL.iter().map(|&b| size_without(Some(b), m, input)).collect();
    (size_without(None, m, input), skipped)
}

#[test]
fn every_bullet_constrains_some_input() {
    let k4_in = AlphaInput::new(vec![k4()]);
    assert_eq!(
        sizes(1, &k4_in),
        (2496, vec![2976, 2784, 3168, 5760, 2496, 2496, 2496, 2496, 2496])
    );
    assert_eq!(
        sizes(2, &k4_in),
        (0, vec![0, 0, 0, 20256, 0, 0, 4992, 0, 29952])
    );
    let tri = g("3;1>2,1>2,1>2,1>3,1>3,2>3");
    let triple = AlphaInput::new(vec![theta(), theta(), tri]);
    let (base, skipped) = sizes(1, &triple);
    assert_eq!(base, 72576);
    assert_eq!(skipped[Bullet::ALL.iter().position(|&b| b == Bullet::SCover).unwrap()], 125848);
    assert_eq!(skipped[Bullet::ALL.iter().position(|&b| b == Bullet::SLinked).unwrap()], 88128);
    let two_thetas = AlphaInput::new(vec![g("4;1>2,1>2,1>2,3>4,3>4,3>4")]);
    assert_eq!(size_without(None, 2, &two_thetas), 0);
    assert_eq!(size_without(Some(Bullet::ULinked), 2, &two_thetas), 576);
}

#[test]
fn jacobi_fibers_are_nonzero_but_cancel() {
    let tri = g("3;1>2,1>2,1>2,1>3,1>3,2>3");
    let input = AlphaInput::new(vec![theta(), theta(), tri]);
    let fibers = Engine::new(Faults::NONE).residual_by_flowchart(1, 3, &input).unwrap();
    assert_eq!(fibers.len(), 3);
    let mut total = TensorVector::zero(1);
    for v in fibers.values() {
        assert_eq!(v.len(), 18);
        total.add_assign(v).unwrap();
    }
    assert!(total.is_zero());
}

#[test]
fn set_sum_equals_residual() {
    for (m, factors) in [
        (1, vec![k4()]),
        (1, vec![theta(), theta()]),
        (2, vec![g("5;1>2,1>2,1>2,1>3,1>4,2>3,3>5,4>5,4>5")]),
    ] {
        let input = AlphaInput::new(factors);
        let mut total = TensorVector::zero(m);
        for f in build_f(m, &input).unwrap() {
            total.add_assign(&f.term()).unwrap();
        }
        assert_eq!(total, shlb_residual(m, input.arity(), &input).unwrap());
    }
}

#[test]
fn involution_failures_sum_to_zero() {
    for (m, factors) in [(1, vec![k4()]), (1, vec![theta(), theta()]), (1, vec![theta(), k4()])] {
        let input = AlphaInput::new(factors);
        let audit = audit_pairing(m, &input, VertexLevel::Product).unwrap();
        assert!(audit.failures > 0);
        assert!(audit.unpaired_total.unwrap().is_zero());
        assert!(audit.total.unwrap().is_zero());
    }
}

#[test]
fn first_surgery_reading_fails_more_often() {
    let input = AlphaInput::new(vec![k4()]);
    let product = audit_pairing(1, &input, VertexLevel::Product).unwrap();
    let first = audit_pairing(1, &input, VertexLevel::FirstSurgery).unwrap();
    assert_eq!((product.failures, first.failures), (480, 1248));
}

#[test]
fn shuffle_flip_cannot_reach_an_empty_set() {
    let input = AlphaInput::new(vec![theta(), k4()]);
    let flipped = Engine::new(Faults {
        flip_shuffle_sign: true,
        ..Faults::NONE
    });
    assert!(flipped.build_f(2, &input).unwrap().is_empty());
    assert!(flipped.shlb_residual(2, 2, &input).unwrap().is_zero());
}
