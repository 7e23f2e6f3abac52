use dyckinfo_core::augindex::{AugIndexInput, Which};
use dyckinfo_core::dyck::stack_check;
use dyckinfo_core::protocol::Party;
use dyckinfo_core::reduction::{all_inputs, ascent, check, descent, embed, random_input, space_bound, SegmentKind};
use dyckinfo_core::streamvm::Sym;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Builds the embedded word straight from the input definition.
fn embed_oracle(a: &dyckinfo_core::reduction::AscensionInput) -> String {
    let n = a.n();
    let open = |bit: bool| if bit { '[' } else { '(' };
    let close = |bit: bool| if bit { ']' } else { ')' };
    let mut s = String::new();
    for inst in a.instances() {
        for i in (1..=n).rev() {
            s.push(open(inst.x_bit(i)));
        }
        let k = inst.k();
        for i in 1..k {
            s.push(close(inst.x_bit(i)));
        }
        s.push(close(inst.b()));
        s.push(open(inst.b()));
        for i in (1..k).rev() {
            s.push(open(inst.x_bit(i)));
        }
        for _ in 0..(2 * n - 2 * k) / 2 {
            s.push_str("()");
        }
    }
    for inst in a.instances().iter().rev() {
        for i in 1..=n {
            s.push(close(inst.x_bit(i)));
        }
    }
    s
}

fn render(w: &[Sym]) -> String {
    w.iter().map(|s| s.to_char()).collect()
}

#[test]
fn exhaustive_n2() {
    let inputs = all_inputs(2, Which::Mu).unwrap();
    assert_eq!(inputs.len(), 256);
    for a in &inputs {
        let (w, layout) = embed(a);
        assert_eq!(w.len(), 16);
        assert_eq!(layout.total_len(), 16);
        assert_eq!(render(&w), embed_oracle(a));
        assert_eq!(stack_check(&w), !a.value());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_inputs(seed in any::<u64>(), n in prop::sample::select(vec![3usize, 4, 8])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_input(&mut rng, n).unwrap();
        let (w, _) = embed(&a);
        prop_assert_eq!(w.len(), 4 * n * n);
        prop_assert_eq!(render(&w), embed_oracle(&a));
        prop_assert_eq!(stack_check(&w), !a.value());
    }

    #[test]
    fn segments_depend_only_on_owner(seed in any::<u64>(), n in 2usize..6, target in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_input(&mut rng, n).unwrap();
        let target = target % n;
        let other = random_input(&mut rng, n).unwrap().instances()[0];
        let (w0, layout) = embed(&a);
        // Perturb Alice's side only, then Bob's side only.
        let t = a.instances()[target];
        // Alice's bits from position k on are hers alone; Bob's prefix stays put.
        let low = (1u64 << (t.k() - 1)) - 1;
        let alice_only = AugIndexInput::new(n, (other.x() & !low) | (t.x() & low), t.k(), t.b()).unwrap();
        let bob_only = AugIndexInput::new(n, t.x(), other.k(), other.b()).unwrap();
        for (changed, owner) in [(alice_only, Party::Alice), (bob_only, Party::Bob)] {
            let (w1, _) = embed(&a.with_instance(target, changed).unwrap());
            for s in &layout.segments {
                if s.instance == target && s.owner == owner {
                    continue;
                }
                prop_assert_eq!(&w0[s.offset..s.offset + s.len], &w1[s.offset..s.offset + s.len]);
            }
        }
    }
}

#[test]
fn segment_builders_match_layout() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let a = random_input(&mut rng, 4).unwrap();
    let (w, layout) = embed(&a);
    for s in &layout.segments {
        let inst = &a.instances()[s.instance];
        let expected = match s.kind {
            SegmentKind::Ascent => ascent(inst),
            SegmentKind::Check => {
                let v = inst.bob_view();
                check(4, v.k, v.prefix, v.b)
            }
            SegmentKind::Descent => descent(inst),
        };
        assert_eq!(&w[s.offset..s.offset + s.len], expected.as_slice());
    }
}

proptest! {
    #[test]
    fn bound_is_monotone(n in 1e4f64..1e12, t in 1.0f64..8.0, eps in 0.0f64..0.24) {
        let b = space_bound(n, t, eps).unwrap();
        prop_assert!(b >= 0.0);
        prop_assert!(space_bound(n, t + 1.0, eps).unwrap() <= b + 1e-12);
        prop_assert!(space_bound(n * 4.0, t, eps).unwrap() >= b - 1e-12);
    }
}
