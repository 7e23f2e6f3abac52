use std::cell::Cell;

use dyckinfo_core::dyck::{
    freegroup_check, gen_instance, height_band_check, height_band_run, stack_check, HeightBandMachine, InstanceKind,
    ParenString, StackMachine,
};
use dyckinfo_core::streamvm::{audit_space, run, PassContext, PassSchedule, StreamMachine, Sym, Verdict};
use dyckinfo_core::{Bits, Result};
use proptest::prelude::*;

/// Reference recognizer: repeatedly deletes adjacent matched pairs.
fn reduce_oracle(w: &str) -> bool {
    let mut s = w.to_string();
    loop {
        let next = s.replace("()", "").replace("[]", "");
        if next.len() == s.len() {
            return next.is_empty();
        }
        s = next;
    }
}

fn word(idx: u64, len: usize) -> Vec<Sym> {
    (0..len).map(|i| Sym::ALL[((idx >> (2 * i)) & 3) as usize]).collect()
}

fn syms() -> impl Strategy<Value = Vec<Sym>> {
    prop::collection::vec(prop::sample::select(Sym::ALL.to_vec()), 0..40)
}

#[test]
fn exhaustive_short_words_agree() {
    for len in 0..=8usize {
        for idx in 0..1u64 << (2 * len) {
            let w = word(idx, len);
            let s: String = w.iter().map(|c| c.to_char()).collect();
            let expected = reduce_oracle(&s);
            assert_eq!(stack_check(&w), expected, "{s}");
            for width in [1, 2, 3] {
                assert_eq!(height_band_check(&w, width).unwrap(), expected, "{s} W={width}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn band_matches_stack(w in syms(), width in 1usize..6) {
        prop_assert_eq!(height_band_check(&w, width).unwrap(), stack_check(&w));
    }

    #[test]
    fn members_are_accepted_everywhere(seed in any::<u64>(), half in 0usize..60) {
        let w = gen_instance(2 * half, InstanceKind::Member, seed).unwrap();
        prop_assert!(stack_check(w.syms()));
        prop_assert!(height_band_check(w.syms(), 3).unwrap());
        prop_assert!(freegroup_check(w.syms(), 61, 2, seed).unwrap());
    }

    #[test]
    fn near_members_are_rejected(seed in any::<u64>(), half in 1usize..60) {
        let w = gen_instance(2 * half, InstanceKind::NearMember, seed).unwrap();
        prop_assert!(!stack_check(w.syms()));
        prop_assert!(!freegroup_check(w.syms(), 61, 2, seed ^ 1).unwrap());
    }

    #[test]
    fn runs_are_deterministic(w in syms(), seed in any::<u64>()) {
        let sched = PassSchedule::forward(4).unwrap();
        let m = HeightBandMachine::new(2).unwrap();
        prop_assert_eq!(run(&m, &w, &sched, seed).unwrap(), run(&m, &w, &sched, seed).unwrap());
    }

    #[test]
    fn parse_round_trip(w in syms()) {
        let s: String = w.iter().map(|c| c.to_char()).collect();
        let p: ParenString = s.parse().unwrap();
        prop_assert_eq!(p.to_string(), s);
    }
}

#[test]
fn declared_space_holds_on_corpus() {
    let corpus: Vec<Vec<Sym>> = (0..50u64)
        .map(|s| gen_instance(200, InstanceKind::Member, s).unwrap().into_inner())
        .chain((0..50u64).map(|s| gen_instance(200, InstanceKind::Random, s).unwrap().into_inner()))
        .collect();
    let m = HeightBandMachine::new(4).unwrap();
    let sched = PassSchedule::forward(m.passes_needed(100)).unwrap();
    let max = audit_space(&m, &corpus, &sched, 0).unwrap();
    assert!(max <= m.space_bits(200));
    let stack = audit_space(&StackMachine, &corpus, &PassSchedule::forward(1).unwrap(), 0).unwrap();
    assert!(stack <= StackMachine.space_bits(200));
}

#[test]
fn band_pass_count_tracks_height() {
    let w: ParenString = "((([[]])))[]".parse().unwrap();
    let r = height_band_run(w.syms(), 2).unwrap();
    assert_eq!(r.verdict, Verdict::Accept);
    assert_eq!(r.passes_used, 3);
}

/// Counts how many symbols each `step` call receives and when.
struct Probe<'a> {
    calls: &'a Cell<usize>,
}

impl StreamMachine for Probe<'_> {
    type State = usize;
    fn space_bits(&self, len: usize) -> usize {
        64 - (len as u64).leading_zeros() as usize
    }
    fn init(&self, _: &PassContext, _: Option<usize>) -> Result<usize> {
        Ok(0)
    }
    fn step(&self, seen: &mut usize, _: Sym) {
        *seen += 1;
        self.calls.set(self.calls.get() + 1);
        assert_eq!(*seen, self.calls.get());
    }
    fn output(&self, _: &PassContext, _: &usize) -> Verdict {
        Verdict::Accept
    }
    fn encode(&self, s: &usize) -> Bits {
        let bits = 64 - (*s as u64).leading_zeros() as usize;
        Bits::from_uint(*s as u64, bits)
    }
    fn decode(&self, _: &PassContext, b: &Bits) -> Result<usize> {
        Ok(b.to_uint() as usize)
    }
}

#[test]
fn one_symbol_per_step() {
    let calls = Cell::new(0);
    let w = gen_instance(100, InstanceKind::Random, 4).unwrap();
    let r = run(
        &Probe { calls: &calls },
        w.syms(),
        &PassSchedule::forward(1).unwrap(),
        0,
    )
    .unwrap();
    assert_eq!(calls.get(), 100);
    assert_eq!(r.steps, 100);
}
