//! A space-metered multi-pass streaming runtime.
//!
//! Machines declare a space bound `s(len)` and expose their inter-symbol
//! state as a bit string. The runtime feeds symbols one at a time, audits
//! the state size after every step, and carries state across passes.

use alloc::vec::Vec;
use core::fmt;

use crate::bits::Bits;
use crate::error::{Error, Result};

/// The Dyck(2) alphabet: `a = (`, `ā = )`, `b = [`, `b̄ = ]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    OpenA,
    CloseA,
    OpenB,
    CloseB,
}

impl Sym {
    pub const ALL: [Sym; 4] = [Sym::OpenA, Sym::CloseA, Sym::OpenB, Sym::CloseB];

    pub fn from_char(ch: char) -> Option<Sym> {
        match ch {
            '(' => Some(Sym::OpenA),
            ')' => Some(Sym::CloseA),
            '[' => Some(Sym::OpenB),
            ']' => Some(Sym::CloseB),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Sym::OpenA => '(',
            Sym::CloseA => ')',
            Sym::OpenB => '[',
            Sym::CloseB => ']',
        }
    }

    pub fn is_open(self) -> bool {
        matches!(self, Sym::OpenA | Sym::OpenB)
    }

    /// Parenthesis type: `false` for `a`, `true` for `b`.
    pub fn kind(self) -> bool {
        matches!(self, Sym::OpenB | Sym::CloseB)
    }

    pub fn open(kind: bool) -> Sym {
        if kind {
            Sym::OpenB
        } else {
            Sym::OpenA
        }
    }

    pub fn close(kind: bool) -> Sym {
        if kind {
            Sym::CloseB
        } else {
            Sym::CloseA
        }
    }

    /// The same type with the opposite orientation.
    pub fn mirror(self) -> Sym {
        match self {
            Sym::OpenA => Sym::CloseA,
            Sym::CloseA => Sym::OpenA,
            Sym::OpenB => Sym::CloseB,
            Sym::CloseB => Sym::OpenB,
        }
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Reverse,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PassSchedule {
    directions: Vec<Direction>,
}

impl PassSchedule {
    pub fn new(directions: Vec<Direction>) -> Result<Self> {
        if directions.is_empty() {
            return Err(Error::Precondition("a schedule needs at least one pass".into()));
        }
        Ok(Self { directions })
    }

    /// `passes` forward passes.
    pub fn forward(passes: usize) -> Result<Self> {
        Self::new(alloc::vec![Direction::Forward; passes])
    }

    /// Forward, reverse, forward, ...
    pub fn alternating(passes: usize) -> Result<Self> {
        Self::new(
            (0..passes)
                .map(|p| {
                    if p % 2 == 0 {
                        Direction::Forward
                    } else {
                        Direction::Reverse
                    }
                })
                .collect(),
        )
    }

    pub fn passes(&self) -> usize {
        self.directions.len()
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn is_unidirectional(&self) -> bool {
        self.directions.iter().all(|d| *d == Direction::Forward)
    }
}

/// Everything a machine may know about the current pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PassContext {
    pub pass: usize,
    pub direction: Direction,
    pub len: usize,
    /// The run's public random string; machines read it only in `init`.
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accept,
    Reject,
}

impl Verdict {
    pub fn accepted(self) -> bool {
        self == Verdict::Accept
    }
}

pub trait StreamMachine {
    type State: Clone;

    /// Declared space `s(len)` in bits.
    fn space_bits(&self, len: usize) -> usize;

    /// State at the start of a pass. `carried` is the state retained from
    /// the previous pass, absent on the first.
    fn init(&self, ctx: &PassContext, carried: Option<Self::State>) -> Result<Self::State>;

    fn step(&self, state: &mut Self::State, sym: Sym);

    /// The part of the state retained at the end of a pass.
    fn carry(&self, _ctx: &PassContext, state: Self::State) -> Self::State {
        state
    }

    /// True once further passes cannot change the verdict.
    fn finished(&self, _ctx: &PassContext, _state: &Self::State) -> bool {
        false
    }

    /// Verdict from the carried state after the last pass, whose context is `ctx`.
    fn output(&self, ctx: &PassContext, state: &Self::State) -> Verdict;

    /// Serialized state. Zero-padding the encoding must not change its decoding.
    fn encode(&self, state: &Self::State) -> Bits;

    fn decode(&self, ctx: &PassContext, bits: &Bits) -> Result<Self::State>;

    /// `encode(state).len()`, which machines may compute without encoding.
    fn state_bits(&self, state: &Self::State) -> usize {
        self.encode(state).len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub verdict: Verdict,
    pub passes_used: usize,
    pub max_state_bits: usize,
    pub declared_bits: usize,
    pub steps: u64,
    pub steps_per_symbol: f64,
}

fn audit<M: StreamMachine + ?Sized>(
    m: &M,
    state: &M::State,
    pass: usize,
    position: usize,
    declared: usize,
    max_bits: &mut usize,
) -> Result<()> {
    let bits = m.state_bits(state);
    if bits > declared {
        return Err(Error::SpaceViolation {
            pass,
            position,
            bits,
            declared,
        });
    }
    *max_bits = (*max_bits).max(bits);
    Ok(())
}

/// Runs `m` on `input` under `sched`. Stops early once the machine reports
/// that it has finished.
pub fn run<M: StreamMachine + ?Sized>(m: &M, input: &[Sym], sched: &PassSchedule, seed: u64) -> Result<RunReport> {
    let len = input.len();
    let declared = m.space_bits(len);
    let mut max_bits = 0;
    let mut steps = 0u64;
    let mut carried: Option<M::State> = None;
    let mut last_ctx = None;
    for (pass, &direction) in sched.directions().iter().enumerate() {
        let ctx = PassContext {
            pass,
            direction,
            len,
            seed,
        };
        let mut state = m.init(&ctx, carried.take())?;
        audit(m, &state, pass, 0, declared, &mut max_bits)?;
        for i in 0..len {
            let sym = match direction {
                Direction::Forward => input[i],
                Direction::Reverse => input[len - 1 - i],
            };
            m.step(&mut state, sym);
            steps += 1;
            audit(m, &state, pass, i + 1, declared, &mut max_bits)?;
        }
        let state = m.carry(&ctx, state);
        audit(m, &state, pass, len, declared, &mut max_bits)?;
        let done = m.finished(&ctx, &state);
        carried = Some(state);
        last_ctx = Some(ctx);
        if done {
            break;
        }
    }
    let ctx = last_ctx.expect("schedule has a pass");
    let state = carried.expect("schedule has a pass");
    Ok(RunReport {
        verdict: m.output(&ctx, &state),
        passes_used: ctx.pass + 1,
        max_state_bits: max_bits,
        declared_bits: declared,
        steps,
        steps_per_symbol: if len == 0 { 0.0 } else { steps as f64 / len as f64 },
    })
}

/// Largest state observed over a corpus of runs.
pub fn audit_space<M, I, S>(m: &M, corpus: I, sched: &PassSchedule, seed: u64) -> Result<usize>
where
    M: StreamMachine + ?Sized,
    I: IntoIterator<Item = S>,
    S: AsRef<[Sym]>,
{
    let mut max = None;
    for w in corpus {
        let r = run(m, w.as_ref(), sched, seed)?;
        max = Some(max.unwrap_or(0).max(r.max_state_bits));
    }
    max.ok_or_else(|| Error::Precondition("empty corpus".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Records the symbols of the current pass and accepts iff they match `expected`.
    struct Tracer {
        expected: Vec<Sym>,
    }

    impl StreamMachine for Tracer {
        type State = Vec<Sym>;
        fn space_bits(&self, len: usize) -> usize {
            3 * len + 1
        }
        fn init(&self, _: &PassContext, _: Option<Vec<Sym>>) -> Result<Vec<Sym>> {
            Ok(Vec::new())
        }
        fn step(&self, s: &mut Vec<Sym>, sym: Sym) {
            s.push(sym);
        }
        fn output(&self, _: &PassContext, s: &Vec<Sym>) -> Verdict {
            if *s == self.expected {
                Verdict::Accept
            } else {
                Verdict::Reject
            }
        }
        fn encode(&self, s: &Vec<Sym>) -> Bits {
            let mut b = Bits::new();
            for sym in s {
                b.push(true);
                b.push_uint(sym.is_open() as u64 * 2 + sym.kind() as u64, 2);
            }
            b.push(false);
            b
        }
        fn decode(&self, _: &PassContext, _: &Bits) -> Result<Vec<Sym>> {
            Err(Error::StateDecode("tracer states are not decoded".into()))
        }
    }

    /// Claims one bit but always holds two.
    struct Liar;

    impl StreamMachine for Liar {
        type State = ();
        fn space_bits(&self, _: usize) -> usize {
            1
        }
        fn init(&self, _: &PassContext, _: Option<()>) -> Result<()> {
            Ok(())
        }
        fn step(&self, _: &mut (), _: Sym) {}
        fn output(&self, _: &PassContext, _: &()) -> Verdict {
            Verdict::Accept
        }
        fn encode(&self, _: &()) -> Bits {
            Bits::zeros(2)
        }
        fn decode(&self, _: &PassContext, _: &Bits) -> Result<()> {
            Ok(())
        }
    }

    #[test]
    fn reverse_pass_reverses() {
        let input = [Sym::OpenA, Sym::OpenB, Sym::CloseB, Sym::CloseA, Sym::OpenA];
        let mut rev = input.to_vec();
        rev.reverse();
        let fwd = Tracer {
            expected: input.to_vec(),
        };
        let back = Tracer { expected: rev };
        let one = PassSchedule::forward(1).unwrap();
        let two = PassSchedule::alternating(2).unwrap();
        assert!(run(&fwd, &input, &one, 0).unwrap().verdict.accepted());
        assert!(!run(&back, &input, &one, 0).unwrap().verdict.accepted());
        let r = run(&back, &input, &two, 0).unwrap();
        assert!(r.verdict.accepted());
        assert_eq!(r.passes_used, 2);
        assert_eq!(r.steps, 10);
        assert_eq!(r.max_state_bits, 16);
        assert_eq!(r.steps_per_symbol, 2.0);
    }

    #[test]
    fn space_violation_is_reported() {
        let err = run(&Liar, &[Sym::OpenA], &PassSchedule::forward(1).unwrap(), 0).unwrap_err();
        assert_eq!(
            err,
            Error::SpaceViolation {
                pass: 0,
                position: 0,
                bits: 2,
                declared: 1
            }
        );
    }

    #[test]
    fn schedules() {
        assert!(PassSchedule::forward(0).is_err());
        assert!(PassSchedule::forward(3).unwrap().is_unidirectional());
        assert_eq!(
            PassSchedule::alternating(3).unwrap().directions(),
            &[Direction::Forward, Direction::Reverse, Direction::Forward]
        );
    }

    #[test]
    fn symbol_round_trip() {
        for s in Sym::ALL {
            assert_eq!(Sym::from_char(s.to_char()), Some(s));
            assert_eq!(s.mirror().mirror(), s);
            assert_eq!(s.mirror().kind(), s.kind());
        }
        assert_eq!(Sym::from_char('x'), None);
    }
}
