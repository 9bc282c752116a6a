mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use common::*;
use cseq::anp::{a_n_residuals, code_has_a_n_property, has_a_n_property, zn_program};
use cseq::bijection::enumerate_bijections;
use cseq::codegen::{psi_experiment, spec_to_code, spec_to_code_cminus, DEFAULT_PSI_CAP};
use cseq::extract::{entry_normalize, pad, Orientation};
use cseq::pga::{p2pga, pga2c, pga_extract, PgaInstruction, PgaTerm};
use cseq::service::{use_service, BooleanRegister};
use cseq::transform::{
    apply_g, apply_h, apply_h_pos, apply_tec, apply_tec_anti, associated_bijection, rev,
    TecAntiAutomorphism, TecAutomorphism,
};
use cseq::{decide_equal, extract_at, extract_ltr, extract_rtl, FiniteThread, InstructionKind};
use cseq::{LinearSpec, Node};

type Outcome = Result<(), String>;
type Check = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

fn extraction_example() -> Outcome {
    let x = code("/a;+/b;\\c;+/d;!;\\#5");
    let post = |a: &str, t, f| Node::Post {
        action: act(a),
        on_true: t,
        on_false: f,
    };
    let expected = LinearSpec::new(
        vec![
            Node::prefix(act("a"), 1),
            post("b", 2, 3),
            Node::prefix(act("c"), 1),
            post("d", 4, 0),
            Node::S,
        ],
        0,
    )
    .unwrap();
    ensure!(decide_equal(&extract_ltr(&x), &expected), "ltr extraction differs");
    ensure!(decide_equal(&extract_rtl(&x), &extract_ltr(&x)), "rtl differs from ltr");
    Ok(())
}

fn loop_rule() -> Outcome {
    let got = extract_ltr(&code("/#2;/a;\\#2"));
    ensure!(got == LinearSpec::deadlock(), "got {}", got.to_json());
    Ok(())
}

fn encoder_round_trip() -> Outcome {
    let mut r = rng(3);
    for i in 0..500 {
        let p = random_spec(&mut r, 8, 3);
        for (name, out) in [("plain", spec_to_code(&p)), ("cminus", spec_to_code_cminus(&p))] {
            let x = out.code;
            ensure!(x.is_program(), "#{i} {name}: not a program: {x}");
            ensure!(x.len() == 3 * p.len(), "#{i} {name}: length {}", x.len());
            ensure!(decide_equal(&extract_ltr(&x), &p), "#{i} {name}: {x}");
            if name == "cminus" {
                ensure!(x.uses_only(&InstructionKind::C_MINUS), "#{i}: {x} leaves C-minus");
            }
        }
    }
    Ok(())
}

fn equality_oracle() -> Outcome {
    let mut r = rng(4);
    let (mut equal, mut different) = (0, 0);
    for i in 0..1000 {
        let p = random_spec(&mut r, 6, 2);
        let q = if i % 4 == 0 {
            // Same thread through a re-rooted disjoint union, to exercise the
            // positive side.
            p.disjoint_union(&random_spec(&mut r, 3, 2))
        } else {
            random_spec(&mut r, 6, 2)
        };
        let fast = decide_equal(&p, &q);
        ensure!(fast == pi_oracle_equal(&p, &q), "#{i}: disagreement");
        if fast {
            equal += 1;
        } else {
            different += 1;
        }
    }
    ensure!(equal > 0 && different > 0, "degenerate sample");
    Ok(())
}

fn transformation_diagrams() -> Outcome {
    let mut r = rng(5);
    for i in 0..300 {
        let x = random_program(&mut r, 30, 3);
        let base = extract_ltr(&x);
        let h = apply_h(&x);
        ensure!(decide_equal(&extract_ltr(&h), &base), "#{i} h: {x}");
        let hp = apply_h_pos(&x);
        ensure!(decide_equal(&extract_ltr(&hp), &base), "#{i} h_pos: {x}");
        ensure!(hp.uses_only(&InstructionKind::POSITIVE_FORWARD), "#{i} h_pos image: {hp}");
        ensure!(decide_equal(&extract_rtl(&apply_g(&x)), &base), "#{i} g: {x}");
        ensure!(decide_equal(&extract_rtl(&rev(&x)), &base), "#{i} rev: {x}");
        ensure!(rev(&rev(&x)) == x, "#{i} rev not involutive");
        ensure!(apply_g(&x) == rev(&h), "#{i} g != rev∘h");
        for j in 0..x.len() as i64 {
            ensure!(
                decide_equal(&extract_at(&x, j + 1), &extract_at(&h, 3 * j + 1)),
                "#{i} position law at {j}: {x}"
            );
        }
    }
    Ok(())
}

fn tec_diagrams() -> Outcome {
    let mut r = rng(6);
    for i in 0..200 {
        let alpha = random_tec(&mut r, 4);
        let x = random_program(&mut r, 20, 4);
        let base = extract_ltr(&x);
        let phi = associated_bijection(&alpha).extended_to(&base.actions());
        let lhs = extract_ltr(&apply_tec(&alpha, &x));
        let rhs = phi.apply(&base).map_err(|e| e.to_string())?;
        ensure!(decide_equal(&lhs, &rhs), "#{i} {alpha}: {x}");
        let anti = TecAntiAutomorphism::new(alpha.clone());
        let lhs = extract_rtl(&apply_tec_anti(&anti, &x));
        ensure!(decide_equal(&lhs, &rhs), "#{i} anti {alpha}: {x}");
    }
    let (a, b) = (act("a"), act("b"));
    let alpha = TecAutomorphism::flip(b.clone()).compose(&TecAutomorphism::swap(a.clone(), b.clone()));
    let expected = TecAutomorphism::flip(b).compose(&TecAutomorphism::flip(a));
    ensure!(alpha.compose(&alpha) == expected, "α² = {}", alpha.compose(&alpha));
    Ok(())
}

fn bijection_count() -> Outcome {
    for (names, expected) in [(&["a", "b"][..], 8), (&["a", "b", "c"][..], 48)] {
        let set: BTreeSet<_> = names.iter().map(|s| act(s)).collect();
        let all = enumerate_bijections(&set);
        ensure!(all.len() == expected, "{} bijections for {names:?}", all.len());
        let distinct: BTreeSet<_> = all
            .iter()
            .map(|b| (b.permutation().clone(), b.false_set().clone()))
            .collect();
        ensure!(distinct.len() == expected, "duplicates for {names:?}");
    }
    Ok(())
}

fn pga_bridge() -> Outcome {
    let p = |s: &str| s.parse::<cseq::pga::PgaProgram>().unwrap();
    let ad = LinearSpec::new(vec![Node::prefix(act("a"), 1), Node::D], 0).unwrap();
    let a_then = |t: usize| LinearSpec::new(vec![Node::prefix(act("a"), 1), Node::prefix(act("b"), 2), Node::S], t).unwrap();
    let cases: Vec<(&str, LinearSpec)> = vec![
        ("!", LinearSpec::terminated()),
        ("!;a", LinearSpec::terminated()),
        ("#0;a;!", LinearSpec::deadlock()),
        ("a", ad.clone()),
        ("+a", ad.clone()),
        ("-a", ad),
        ("a;b;!", a_then(0)),
        ("#2;a;b;!", a_then(1)),
        ("#1;b;!", a_then(1)),
        ("+c;a;b;!", LinearSpec::new(vec![Node::Post { action: act("c"), on_true: 1, on_false: 2 }, Node::prefix(act("a"), 2), Node::prefix(act("b"), 3), Node::S], 0).unwrap()),
        ("-c;a;b;!", LinearSpec::new(vec![Node::Post { action: act("c"), on_true: 2, on_false: 1 }, Node::prefix(act("a"), 2), Node::prefix(act("b"), 3), Node::S], 0).unwrap()),
        ("#5;!", LinearSpec::deadlock()),
    ];
    for (text, expected) in cases {
        ensure!(decide_equal(&pga_extract(&p(text)), &expected), "base equation for {text}");
    }

    let mut r = rng(8);
    for i in 0..200 {
        let x = random_program(&mut r, 20, 3);
        let y = p2pga(&x).map_err(|e| e.to_string())?;
        ensure!(decide_equal(&pga_extract(&y), &extract_ltr(&x)), "#{i} projection of {x}");
    }
    for i in 0..200 {
        let q = random_pga(&mut r);
        let x = pga2c(&q);
        ensure!(decide_equal(&extract_ltr(&x), &pga_extract(&q)), "#{i} embedding of {q} as {x}");
    }

    let seq = |v: Vec<PgaInstruction>| PgaTerm::Concat(v.into_iter().map(PgaTerm::Instr).collect());
    let rep = |t: PgaTerm| PgaTerm::Repeat(Box::new(t));
    let cat = |a: PgaTerm, b: PgaTerm| PgaTerm::Concat(vec![a, b]);
    let ext = |t: &PgaTerm| t.canonicalize().map(|c| pga_extract(&c)).map_err(|e| e.to_string());
    for i in 0..100 {
        let pp = seq(random_pga_block(&mut r, 1, 4));
        let qq = seq(random_pga_block(&mut r, 1, 4));
        ensure!(
            decide_equal(&ext(&rep(cat(pp.clone(), pp.clone())))?, &ext(&rep(pp.clone()))?),
            "#{i} (P;P)^w"
        );
        ensure!(
            decide_equal(
                &ext(&rep(cat(pp.clone(), qq.clone())))?,
                &ext(&cat(pp.clone(), rep(cat(qq.clone(), pp.clone()))))?
            ),
            "#{i} (P;Q)^w"
        );
        ensure!(
            decide_equal(&ext(&cat(rep(pp.clone()), qq))?, &ext(&rep(pp))?),
            "#{i} P^w;Q"
        );
    }
    Ok(())
}

fn register_example() -> Outcome {
    let spec = extract_ltr(&zn_program(2));
    let used = use_service(&spec, &BooleanRegister::new("b1")).map_err(|e| e.to_string())?;
    let used = use_service(&used, &BooleanRegister::new("b2")).map_err(|e| e.to_string())?;
    let r = |names: &[&str]| finite_chain(names, FiniteThread::S);
    let a = act("a");
    let expected = FiniteThread::post(
        a.clone(),
        FiniteThread::post(a.clone(), r(&["c", "d", "c", "d"]), r(&["c", "d", "d"])),
        FiniteThread::post(a, r(&["d", "c", "d"]), r(&["d", "d"])),
    );
    ensure!(used.pi(64) == expected, "composed thread is {}", used.pi(64));
    ensure!(
        used.residual_states().len() == used.len(),
        "unreachable states in the product"
    );

    let x = code("!;\\b;+\\a;+/a;\\#2;+/a;/#2;/c;#");
    ensure!(code_has_a_n_property(&x, &act("a"), 2) == Some(4), "position");
    let at4 = extract_at(&x, 4);
    let res = a_n_residuals(&at4, &act("a"), 2).ok_or("no a-2-property at 4")?;
    let got: BTreeSet<String> = res.iter().map(|&s| at4.pi_from(8, s).to_string()).collect();
    let want: BTreeSet<String> = [
        finite_chain(&["b"], FiniteThread::S),
        FiniteThread::S,
        FiniteThread::D,
        finite_chain(&["c"], FiniteThread::D),
    ]
    .iter()
    .map(|t| t.to_string())
    .collect();
    ensure!(got == want, "residuals {got:?}");
    Ok(())
}

fn zn_property() -> Outcome {
    for n in 1..=6 {
        let start = Instant::now();
        let mut spec = extract_ltr(&zn_program(n));
        for i in 1..=n {
            spec = use_service(&spec, &BooleanRegister::new(format!("b{i}")))
                .map_err(|e| e.to_string())?;
        }
        ensure!(has_a_n_property(&spec, &act("a"), n), "Z_{n} fails");
        let elapsed = start.elapsed().as_secs_f64();
        ensure!(elapsed < 30.0, "Z_{n} took {elapsed:.1}s");
    }
    Ok(())
}

fn psi_desk() -> Outcome {
    for (n, expected) in [(2usize, 2usize), (3, 9), (4, 64)] {
        let report = psi_experiment(1, n, DEFAULT_PSI_CAP).map_err(|e| e.to_string())?;
        ensure!(report.distinct_count == expected, "n={n}: {} distinct", report.distinct_count);
        ensure!(report.expected_distinct == expected as u128, "n={n}: expected count");
        ensure!(report.max_length <= 3 * n, "n={n}: max length {}", report.max_length);
    }
    Ok(())
}

fn relativization() -> Outcome {
    let mut r = rng(12);
    for i in 0..300 {
        let x = random_expression(&mut r, 12, 3);
        let k = rand::Rng::gen_range(&mut r, 1..=x.len()) as i64;
        let (left, right) = (rand::Rng::gen_range(&mut r, 0..4), rand::Rng::gen_range(&mut r, 0..4));
        let base = extract_at(&x, k);
        ensure!(decide_equal(&base, &extract_at(&pad(&x, 1, 0), k + 1)), "#{i} #;X");
        ensure!(decide_equal(&base, &extract_at(&pad(&x, 0, 1), k)), "#{i} X;#");
        ensure!(
            decide_equal(&base, &extract_at(&pad(&x, left, right), k + left as i64)),
            "#{i} pad {left},{right}"
        );

        let y = random_program(&mut r, 12, 3);
        let k = rand::Rng::gen_range(&mut r, 1..=y.len()) as i64;
        let base = extract_at(&y, k);
        let ltr = entry_normalize(&y, k, Orientation::Ltr).map_err(|e| e.to_string())?;
        ensure!(decide_equal(&base, &extract_ltr(&ltr)), "#{i} /#k;X for {y} at {k}");
        let rtl = entry_normalize(&y, k, Orientation::Rtl).map_err(|e| e.to_string())?;
        ensure!(decide_equal(&base, &extract_rtl(&rtl)), "#{i} X;\\#m for {y} at {k}");
    }
    ensure!(
        entry_normalize(&code("+/a;\\#2"), 1, Orientation::Ltr).is_err(),
        "counterexample accepted"
    );
    Ok(())
}

fn main() {
    let criteria: [Check; 12] = [
        ("extraction example, ltr and rtl", extraction_example),
        ("jump-only loop extracts to D", loop_rule),
        ("encoder round trip on 500 specs", encoder_round_trip),
        ("equality agrees with depth oracle on 1000 pairs", equality_oracle),
        ("transformation diagrams on 300 programs", transformation_diagrams),
        ("TEC diagrams on 200 instances", tec_diagrams),
        ("structural bijection counts", bijection_count),
        ("PGA bridge", pga_bridge),
        ("register example and a-2 residuals", register_example),
        ("Z_n a-n-property for n in 1..=6", zn_property),
        ("P^F desk experiment", psi_desk),
        ("relativization laws on 300 inputs", relativization),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({ms} ms)", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
