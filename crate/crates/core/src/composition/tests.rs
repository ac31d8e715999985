use super::*;
use crate::infoflow::{build_tb_dist_automaton, extract_info_classes, ClassCaps, InfoClass};
use crate::model::SystemSpec;
use crate::reference;

fn bit() -> (SystemSpec, Vec<InfoClass>) {
    let s = SystemSpec::bit_transmission();
    let l = build_tb_dist_automaton(s.phi(Proc::Q), &s.arch, Proc::Q).unwrap();
    let cs = extract_info_classes(&l, &s.arch.hidden_env(Proc::Q), &ClassCaps::default()).unwrap();
    (s, cs)
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

#[test]
fn hyper_composition_of_the_running_example() {
    let arch = Architecture::bit_transmission();
    let h = compose_hyper(&reference::sender(), &reference::hyper_receiver(), &arch).unwrap();
    // the hyper receiver settles on ¬in right away, so one state fewer than the knowledge view
    assert_eq!(h.machine.num_states(), 4);
    assert_eq!(h.machine.difference(&reference::composed()).unwrap(), None);
    // (∅)^ω: c forever, out never
    let run = h.machine.run(&[0; 6]);
    assert!(run.iter().all(|&l| l == 0b01), "{run:?}");
}

#[test]
fn constant_machines_give_one_state() {
    let arch = Architecture::bit_transmission();
    let a = MooreMachine::constant(names(&["in"]), names(&["c"]), 1);
    let b = MooreMachine::constant(names(&["c"]), names(&["out"]), 0);
    let h = compose_hyper(&a, &b, &arch).unwrap();
    assert_eq!(h.machine.num_states(), 1);
    let bad = MooreMachine::constant(names(&["z"]), names(&["out"]), 0);
    assert!(matches!(compose_hyper(&a, &bad, &arch), Err(Error::AlphabetMismatch(_))));
}

#[test]
fn knowledge_sets() {
    let arch = Architecture::bit_transmission();
    let h = compose_hyper(&reference::sender(), &reference::hyper_receiver(), &arch).unwrap();
    assert_eq!(knowledge_set(&h, Proc::Q, &[]), vec![Vec::<Letter>::new()]);
    assert_eq!(knowledge_set(&h, Proc::Q, &[1]), vec![vec![0], vec![1]]);
    assert_eq!(knowledge_set(&h, Proc::Q, &[1, 0]), vec![vec![1, 0], vec![1, 1]]);
    assert!(knowledge_set(&h, Proc::Q, &[0]).is_empty());
    assert_eq!(h.local_word(Proc::Q, &[1, 0, 0]), vec![1, 0, 0]);
}

#[test]
fn local_strategies() {
    let arch = Architecture::bit_transmission();
    let h = compose_hyper(&reference::sender(), &reference::hyper_receiver(), &arch).unwrap();
    let b = extract_local_strategy(&h, Proc::Q).unwrap();
    // equal on every local word that occurs; other words get the empty output
    let occurs = h.local_language(Proc::Q);
    assert_eq!(b.difference_under(&reference::local_receiver(), &occurs).unwrap(), None, "{}", b.to_text());
    assert!(b.difference_under(&reference::local_receiver_delayed(), &occurs).unwrap().is_some());
    // ({c})(∅): out at the following step
    assert_eq!(b.run(&[1, 0, 0]).last(), Some(&1));
    let a = extract_local_strategy(&h, Proc::P).unwrap();
    assert_eq!(a.num_states(), 3);
    // constant system → constant strategy
    let c = compose_hyper(
        &MooreMachine::constant(names(&["in"]), names(&["c"]), 1),
        &MooreMachine::constant(names(&["c"]), names(&["out"]), 1),
        &arch,
    )
    .unwrap();
    let b = extract_local_strategy(&c, Proc::Q).unwrap();
    assert_eq!(b.run(&[1, 1, 1, 1]), vec![1; 4]);
    // ¬c never occurs: empty output from there on
    assert_eq!(b.run(&[1, 0, 1]), vec![1, 1, 0]);
}

#[test]
fn inconsistent_knowledge_is_reported() {
    // the receiver reads `in` directly although it may not
    let arch = Architecture::bit_transmission();
    let peek = MooreMachine::new(names(&["in"]), names(&["out"]), 0, vec![0, 1], vec![vec![0, 1], vec![1, 1]]).unwrap();
    let h = compose_hyper(&MooreMachine::constant(names(&["in"]), names(&["c"]), 1), &peek, &arch);
    // the hyper composition lets it read O_e, but its local knowledge cannot tell
    let h = h.unwrap();
    assert!(matches!(extract_local_strategy(&h, Proc::Q), Err(Error::LocalityViolated(_))));
}

#[test]
fn decoder_for_the_running_example() {
    let (s, cs) = bit();
    let d = build_class_decoder(&reference::sender(), &cs, &s.arch, Proc::Q).unwrap();
    assert_eq!(d.obs_vars, vec!["c"]);
    // class 0 is the `in` class: c drops at step 1
    assert_eq!(d.run(&[1, 0, 0]), vec![None, Some(0), None]);
    assert_eq!(d.run(&[1, 1, 1]), vec![None, Some(1), None]);
    let constant = MooreMachine::constant(names(&["in"]), names(&["c"]), 1);
    assert!(matches!(build_class_decoder(&constant, &cs, &s.arch, Proc::Q), Err(Error::SenderDoesNotReveal(_))));
}

#[test]
fn universal_class_decodes_immediately() {
    let s = SystemSpec::bit_transmission();
    let l = build_tb_dist_automaton(&crate::ltl::Ltl::True, &s.arch, Proc::Q).unwrap();
    let cs = extract_info_classes(&l, &s.arch.hidden_env(Proc::Q), &ClassCaps::default()).unwrap();
    let constant = MooreMachine::constant(names(&["in"]), names(&["c"]), 0);
    let d = build_class_decoder(&constant, &cs, &s.arch, Proc::Q).unwrap();
    assert_eq!(d.run(&[0]), vec![Some(0)]);
}

#[test]
fn practical_composition_matches_the_hyper_one() {
    let (s, cs) = bit();
    let d = build_class_decoder(&reference::sender(), &cs, &s.arch, Proc::Q).unwrap();
    let h = compose_practical(&reference::sender(), &reference::class_receiver(), &d, &s.arch).unwrap();
    assert_eq!(h.machine.difference(&reference::composed()).unwrap(), None, "{}", h.machine.to_text());
    assert_eq!(h.machine.num_states(), 5);
}

#[test]
fn locality_of_hyper_receivers() {
    let s = SystemSpec::bit_transmission();
    let l = build_tb_dist_automaton(s.phi(Proc::Q), &s.arch, Proc::Q).unwrap();
    let ok = check_locality(&reference::hyper_receiver(), &l, &s.arch, Proc::Q, 4).unwrap();
    assert!(ok.holds(), "{}", ok.describe());
    let constant = MooreMachine::constant(vec![], names(&["out"]), 0);
    assert!(check_locality(&constant, &l, &s.arch, Proc::Q, 4).unwrap().holds());
    // raising out right after `in`, without waiting for the marker
    let eager = MooreMachine::new(names(&["in"]), names(&["out"]), 0, vec![0, 0, 1], vec![vec![1, 2], vec![1, 1], vec![2, 2]]).unwrap();
    let v = check_locality(&eager, &l, &s.arch, Proc::Q, 4).unwrap();
    match v.counterexample() {
        Some(crate::verify::Counterexample::Pair(a, b)) => {
            let i = a.vars.iter().position(|v| v == "in").unwrap();
            assert_ne!(a.letter(0) >> i & 1, b.letter(0) >> i & 1, "{a} {b}");
        }
        _ => panic!("{}", v.describe()),
    }
}
