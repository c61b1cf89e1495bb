use std::fs;

use handlecalc::engine::{
    applicable_moves, apply_move_line, canonical_recognize, fixtures_root, invariant, run_script, simplify_search,
    watch_invariants, MoveScript, Recognized, State,
};
use handlecalc::Error;

fn state(name: &str) -> State {
    State::parse(&fs::read_to_string(fixtures_root().join(name)).unwrap()).unwrap().canonical()
}

fn script(lines: &[&str]) -> MoveScript {
    MoveScript::from_lines(lines).unwrap()
}

#[test]
fn syntax_errors_name_their_line() {
    match MoveScript::parse("load mazur.ddc\n\nkirby slide22 i=K\n") {
        Err(Error::Syntax(m)) => assert!(m.starts_with("line 3:"), "{m}"),
        other => panic!("{other:?}"),
    }
    match MoveScript::parse("watch h1\nload mazur.ddc\n") {
        Err(e) => assert!(e.to_string().contains("line 2"), "{e}"),
        Ok(_) => panic!("late load accepted"),
    }
    assert!(MoveScript::parse("expect h1 ~ 0").is_err());
    assert!(MoveScript::parse("simplify budget=0").is_err());
}

#[test]
fn expectations_pass_and_fail() {
    let t = run_script(
        &script(&["load cancel12.ddc", "expect h1 = 0", "expect components = 3", "expect hom:S3 >= 1", "expect pi1ab != Z"]),
        None,
        &fixtures_root(),
    )
    .unwrap();
    let verdicts: Vec<bool> = t.expectations.iter().map(|e| e.passed).collect();
    assert_eq!(verdicts, [true, false, true, true]);
    assert!(!t.passed());
    assert_eq!(t.expectations[1].actual, "2");
}

#[test]
fn failing_move_reports_its_step() {
    let f = run_script(&script(&["load mazur.ddc", "watch h1", "kirby pair12 annihilate k=K d=D"]), None, &fixtures_root())
        .unwrap_err();
    assert_eq!((f.step, f.line), (1, 3));
    assert!(f.to_string().contains("exactly once"), "{f}");
    assert_eq!(f.trace.entries.len(), 1);
}

#[test]
fn open_homology_drifts_across_a_23_cancellation() {
    let lines = ["load cancel23.ddc", "watch h2", "kirby pair23 annihilate c=K"];
    let t = run_script(&script(&lines), None, &fixtures_root()).unwrap();
    assert_eq!(t.drift.len(), 1);
    assert_eq!((t.drift[0].before.as_str(), t.drift[0].after.as_str()), ("Z", "0"));
    let closed = ["load cancel23.ddc closed", "watch h0,h1,h2,h3,h4,chi", "kirby pair23 annihilate c=K"];
    let r = watch_invariants(&script(&closed), None, &fixtures_root(), &[]);
    assert!(r.clean(), "{:?}", r.trace.drift);
}

#[test]
fn blow_ups_are_not_drift() {
    let t = run_script(&script(&["load empty.ddc", "watch h2", "kirby blowup sign=+"]), None, &fixtures_root()).unwrap();
    assert!(t.drift.is_empty());
    assert_eq!(t.entries.last().unwrap().changed, ["h2"]);
}

#[test]
fn recognition() {
    assert_eq!(canonical_recognize(&state("empty.ddc")), Recognized::EmptyS4orB5);
    assert_eq!(canonical_recognize(&state("s1xb3.ddc")), Recognized::DottedUnlink(1));
    let zero = State::parse("diagram z\ncomponent K framed:0 :\ncomponent L framed:0 :\n").unwrap();
    assert_eq!(canonical_recognize(&zero), Recognized::FramedZeroUnlink(2));
    assert_eq!(canonical_recognize(&state("mazur.ddc")), Recognized::Unknown);
}

#[test]
fn simplify_empties_cancelling_pairs() {
    let r = simplify_search(&state("cancel12.ddc"), 50);
    assert!(r.best.diagram().is_empty());
    assert_eq!(r.witness, ["kirby pair12 annihilate k=K d=D"]);
}

#[test]
fn search_witness_replays_to_its_result() {
    let t = run_script(&script(&["load cobordism.hgd", "compile surgery side=alpha"]), None, &fixtures_root()).unwrap();
    let start = State::parse(t.final_state().unwrap()).unwrap().canonical();
    let r = simplify_search(&start, 500);
    assert!(!r.witness.is_empty());
    let mut s = start;
    for line in &r.witness {
        s = apply_move_line(&s, line).unwrap_or_else(|e| panic!("{line}: {e}")).canonical();
    }
    assert_eq!(s.to_text(), r.best.to_text());
    assert_eq!(invariant(&s, "recognize", false).unwrap(), "EmptyS4orB5");
}

#[test]
fn listed_moves_apply_on_fixtures() {
    for n in ["mazur.ddc", "hopf_10.ddc", "spun_trefoil.ddc", "wu.hgd", "cobordism.hgd"] {
        let s = state(n);
        for m in applicable_moves(&s) {
            let out = apply_move_line(&s, &m.line).unwrap_or_else(|e| panic!("{n}: {}: {e}", m.line));
            assert!(out.validate().is_empty(), "{n}: {}", m.line);
        }
    }
    assert!(matches!(apply_move_line(&state("mazur.ddc"), "expect h1 = 0"), Err(Error::Syntax(_))));
}

#[test]
fn invariant_keys() {
    let s = state("mazur.ddc");
    assert_eq!(invariant(&s, "pi1", false).unwrap(), "< | >");
    assert_eq!(invariant(&s, "valid", false).unwrap(), "true");
    assert!(invariant(&s, "h9", false).unwrap() == "0");
    assert!(matches!(invariant(&s, "colour", false), Err(Error::Rejected(_))));
    assert!(invariant(&s, "hom:Q8", false).is_err());
}
