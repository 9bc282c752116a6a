//! The a-n-property and the Z_n program family.

use crate::action::Action;
use crate::code::{CodeSeq, Direction, Instruction};
use crate::equality::partition;
use crate::extract::extract_at;
use crate::thread::{FiniteThread, LinearSpec, Node};

/// `+/a;/b1.set:T; … ;+/a;/bn.set:T;+/b1.get;/c;/d; … ;+/bn.get;/c;/d;!`
pub fn zn_program(n: usize) -> CodeSeq {
    assert!(n >= 1, "Z_n needs n >= 1");
    let act = |s: String| Action::new(s).expect("valid name");
    let fwd = Direction::Forward;
    let mut code = Vec::with_capacity(5 * n + 1);
    for i in 1..=n {
        code.push(Instruction::PosTest(fwd, act("a".into())));
        code.push(Instruction::Basic(fwd, act(format!("b{i}.set:T"))));
    }
    for i in 1..=n {
        code.push(Instruction::PosTest(fwd, act(format!("b{i}.get"))));
        code.push(Instruction::Basic(fwd, act("c".into())));
        code.push(Instruction::Basic(fwd, act("d".into())));
    }
    code.push(Instruction::Halt);
    CodeSeq::new(code).expect("non-empty")
}

/// The states reached by the `2^n` reply sequences of length `n`, ordered
/// lexicographically with `true` before `false`. `None` if some sequence meets
/// `S` or `D` before depth `n`.
pub fn n_residuals(spec: &LinearSpec, n: usize) -> Option<Vec<usize>> {
    let mut level = vec![spec.root()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(2 * level.len());
        for &x in &level {
            match spec.node(x) {
                Node::Post {
                    on_true, on_false, ..
                } => next.extend([*on_true, *on_false]),
                _ => return None,
            }
        }
        level = next;
    }
    Some(level)
}

/// The n-residuals of `spec` when it has the a-n-property.
pub fn a_n_residuals(spec: &LinearSpec, a: &Action, n: usize) -> Option<Vec<usize>> {
    if spec.pi(n) != FiniteThread::prefix_n(a, n, FiniteThread::D) {
        return None;
    }
    let residuals = n_residuals(spec, n)?;
    let classes = partition(spec);
    let mut seen = std::collections::HashSet::new();
    for &r in &residuals {
        if !seen.insert(classes[r]) {
            return None;
        }
        if matches!(spec.node(r), Node::Post { action, .. } if action == a) {
            return None;
        }
    }
    Some(residuals)
}

pub fn has_a_n_property(spec: &LinearSpec, a: &Action, n: usize) -> bool {
    a_n_residuals(spec, a, n).is_some()
}

/// Least position `i` such that `|X|_i` has the a-n-property.
pub fn code_has_a_n_property(x: &CodeSeq, a: &Action, n: usize) -> Option<usize> {
    (1..=x.len()).find(|&i| {
        let spec = extract_at(x, i as i64);
        has_a_n_property(&spec, a, n)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equality::states_equal;
    use crate::service::{use_service, BooleanRegister};

    fn a(s: &str) -> Action {
        Action::new(s).unwrap()
    }

    #[test]
    fn zn_shape() {
        assert_eq!(
            zn_program(2).to_string(),
            "+/a;/b1.set:T;+/a;/b2.set:T;+/b1.get;/c;/d;+/b2.get;/c;/d;!"
        );
        assert_eq!(zn_program(1).len(), 6);
        assert!(zn_program(5).is_program());
    }

    #[test]
    fn example_code() {
        let x: CodeSeq = "!;\\b;+\\a;+/a;\\#2;+/a;/#2;/c;#".parse().unwrap();
        assert_eq!(code_has_a_n_property(&x, &a("a"), 2), Some(4));
        assert_eq!(code_has_a_n_property(&x, &a("a"), 1), Some(3));
        assert!(has_a_n_property(&extract_at(&x, 6), &a("a"), 1));

        let spec = extract_at(&x, 4);
        let res = a_n_residuals(&spec, &a("a"), 2).unwrap();
        let b_s = FiniteThread::prefix(a("b"), FiniteThread::S);
        let c_d = FiniteThread::prefix(a("c"), FiniteThread::D);
        let got: Vec<FiniteThread> = res.iter().map(|&r| spec.pi_from(4, r)).collect();
        for t in [&b_s, &FiniteThread::S, &FiniteThread::D, &c_d] {
            assert!(got.contains(t), "{t}");
        }
        assert!(!states_equal(&spec, res[0], res[1]));
    }

    #[test]
    fn no_a_action() {
        let x: CodeSeq = "!;#".parse().unwrap();
        assert_eq!(code_has_a_n_property(&x, &a("a"), 1), None);
    }

    #[test]
    fn z2_with_registers() {
        let spec = crate::extract::extract_ltr(&zn_program(2));
        let used = use_service(&spec, &BooleanRegister::new("b1")).unwrap();
        let used = use_service(&used, &BooleanRegister::new("b2")).unwrap();
        assert!(has_a_n_property(&used, &a("a"), 2));
        assert!(!has_a_n_property(&used, &a("a"), 3));
    }
}
