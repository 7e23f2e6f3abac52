//! Dyck(2) membership: an exact stack checker, the multi-pass height-band
//! streaming checker, and a one-pass free-group fingerprint.
//!
//! The fingerprint maps `( ) [ ]` to the Sanov matrices `A, A⁻¹, B, B⁻¹`
//! with `A = [[1,2],[0,1]]` and `B = [[1,0],[2,1]]`, which generate a free
//! group, and keeps the running product modulo random primes. Entries of
//! the exact product are bounded by `3^|w|`, so a nonzero entry has fewer
//! than `|w|·log₂3 / 60` prime divisors of 61 bits; among the roughly
//! `2^54` such primes a random one divides it with probability below
//! `|w|·log₂3 / (60·2^54)`. Independent trials multiply.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::math::bits_for;
use crate::streamvm::{run, Direction, PassContext, PassSchedule, RunReport, StreamMachine, Sym, Verdict};

/// A word over `( ) [ ]`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParenString(Vec<Sym>);

impl ParenString {
    pub fn new(syms: Vec<Sym>) -> Self {
        Self(syms)
    }

    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .enumerate()
            .map(|(pos, ch)| Sym::from_char(ch).ok_or(Error::InvalidSymbol { ch, pos }))
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn syms(&self) -> &[Sym] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<Sym> {
        self.0
    }

    /// Maximum prefix height, counting opens as +1 and closes as -1.
    pub fn max_height(&self) -> i64 {
        let mut h = 0i64;
        let mut best = 0;
        for s in &self.0 {
            h += if s.is_open() { 1 } else { -1 };
            best = best.max(h);
        }
        best
    }
}

impl AsRef<[Sym]> for ParenString {
    fn as_ref(&self) -> &[Sym] {
        &self.0
    }
}

impl FromStr for ParenString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for ParenString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromIterator<Sym> for ParenString {
    fn from_iter<I: IntoIterator<Item = Sym>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// Exact membership test with an explicit stack.
pub fn stack_check(w: &[Sym]) -> bool {
    let mut stack = Vec::new();
    for &s in w {
        if s.is_open() {
            stack.push(s.kind());
        } else if stack.pop() != Some(s.kind()) {
            return false;
        }
    }
    stack.is_empty()
}

/// Free reduction with both `pp̄ = ε` and `p̄p = ε`.
pub fn free_reduce(w: &[Sym]) -> Vec<Sym> {
    let mut out: Vec<Sym> = Vec::with_capacity(w.len());
    for &s in w {
        if out.last() == Some(&s.mirror()) {
            out.pop();
        } else {
            out.push(s);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Height-band machine

/// Pass `p` checks type matching for heights in `[pW+1, (p+1)W]`. The first
/// pass also checks that the height profile is legal and records its
/// maximum. Reverse passes read the mirrored word, which has the same
/// profile and the same matching pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeightBandMachine {
    width: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandState {
    pass: usize,
    reverse: bool,
    counter_bits: usize,
    height: u64,
    max_height: u64,
    failed: bool,
    slots: Vec<bool>,
}

impl HeightBandMachine {
    pub fn new(width: usize) -> Result<Self> {
        if width == 0 {
            return Err(Error::Precondition("band width must be at least 1".into()));
        }
        Ok(Self { width })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Passes needed for a word of maximum height `h`.
    pub fn passes_needed(&self, h: usize) -> usize {
        h.div_ceil(self.width).max(1)
    }

    fn band(&self, pass: usize) -> (u64, u64) {
        let lo = (pass * self.width) as u64 + 1;
        (lo, lo + self.width as u64 - 1)
    }
}

impl StreamMachine for HeightBandMachine {
    type State = BandState;

    fn space_bits(&self, len: usize) -> usize {
        2 * self.width + 2 * bits_for(len)
    }

    fn init(&self, ctx: &PassContext, carried: Option<BandState>) -> Result<BandState> {
        let (max_height, failed) = carried.map_or((0, false), |c| (c.max_height, c.failed));
        Ok(BandState {
            pass: ctx.pass,
            reverse: ctx.direction == Direction::Reverse,
            counter_bits: bits_for(ctx.len),
            height: 0,
            max_height,
            failed,
            slots: alloc::vec![false; self.width],
        })
    }

    fn step(&self, st: &mut BandState, sym: Sym) {
        if st.failed {
            return;
        }
        let sym = if st.reverse { sym.mirror() } else { sym };
        let (lo, hi) = self.band(st.pass);
        if sym.is_open() {
            st.height += 1;
            if st.pass == 0 {
                st.max_height = st.max_height.max(st.height);
            }
            if (lo..=hi).contains(&st.height) {
                st.slots[(st.height - lo) as usize] = sym.kind();
            }
        } else {
            if st.height == 0 {
                st.failed = true;
                return;
            }
            if (lo..=hi).contains(&st.height) && st.slots[(st.height - lo) as usize] != sym.kind() {
                st.failed = true;
            }
            st.height -= 1;
        }
    }

    fn carry(&self, _ctx: &PassContext, mut st: BandState) -> BandState {
        if st.height != 0 {
            st.failed = true;
        }
        st.height = 0;
        st.slots.iter_mut().for_each(|s| *s = false);
        st
    }

    fn finished(&self, ctx: &PassContext, st: &BandState) -> bool {
        st.failed || ((ctx.pass + 1) * self.width) as u64 >= st.max_height
    }

    fn output(&self, ctx: &PassContext, st: &BandState) -> Verdict {
        if !st.failed && ((ctx.pass + 1) * self.width) as u64 >= st.max_height {
            Verdict::Accept
        } else {
            Verdict::Reject
        }
    }

    fn encode(&self, st: &BandState) -> Bits {
        let mut b = Bits::with_capacity(self.state_bits(st));
        b.push_uint(st.height, st.counter_bits);
        b.push_uint(st.max_height, st.counter_bits);
        b.push(st.failed);
        for &s in &st.slots {
            b.push(s);
        }
        b
    }

    fn decode(&self, ctx: &PassContext, bits: &Bits) -> Result<BandState> {
        let c = bits_for(ctx.len);
        let need = 2 * c + 1 + self.width;
        if bits.len() < need {
            return Err(Error::StateDecode(alloc::format!(
                "band state needs {need} bits, got {}",
                bits.len()
            )));
        }
        Ok(BandState {
            pass: ctx.pass,
            reverse: ctx.direction == Direction::Reverse,
            counter_bits: c,
            height: bits.read_uint(0, c),
            max_height: bits.read_uint(c, c),
            failed: bits.get(2 * c),
            slots: (0..self.width).map(|i| bits.get(2 * c + 1 + i)).collect(),
        })
    }

    fn state_bits(&self, st: &BandState) -> usize {
        2 * st.counter_bits + 1 + self.width
    }
}

/// Runs the band machine with as many forward passes as the word could need.
pub fn height_band_run(w: &[Sym], width: usize) -> Result<RunReport> {
    let m = HeightBandMachine::new(width)?;
    let passes = m.passes_needed(w.len() / 2);
    run(&m, w, &PassSchedule::forward(passes)?, 0)
}

pub fn height_band_check(w: &[Sym], width: usize) -> Result<bool> {
    Ok(height_band_run(w, width)?.verdict.accepted())
}

// ---------------------------------------------------------------------------
// Exact stack machine

/// One pass, linear space: the stack itself.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StackMachine;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StackState {
    stack: Vec<bool>,
    failed: bool,
}

impl StreamMachine for StackMachine {
    type State = StackState;

    fn space_bits(&self, len: usize) -> usize {
        2 * len + 2
    }

    fn init(&self, _ctx: &PassContext, carried: Option<StackState>) -> Result<StackState> {
        Ok(carried.unwrap_or_default())
    }

    fn step(&self, st: &mut StackState, sym: Sym) {
        if st.failed {
            return;
        }
        if sym.is_open() {
            st.stack.push(sym.kind());
        } else if st.stack.pop() != Some(sym.kind()) {
            st.failed = true;
        }
    }

    fn output(&self, _ctx: &PassContext, st: &StackState) -> Verdict {
        if !st.failed && st.stack.is_empty() {
            Verdict::Accept
        } else {
            Verdict::Reject
        }
    }

    // Each entry is `1` followed by its type; a `0` ends the stack.
    fn encode(&self, st: &StackState) -> Bits {
        let mut b = Bits::with_capacity(self.state_bits(st));
        for &k in &st.stack {
            b.push(true);
            b.push(k);
        }
        b.push(false);
        b.push(st.failed);
        b
    }

    fn decode(&self, _ctx: &PassContext, bits: &Bits) -> Result<StackState> {
        let mut stack = Vec::new();
        let mut i = 0;
        loop {
            if i + 1 >= bits.len() {
                return Err(Error::StateDecode("unterminated stack".into()));
            }
            if !bits.get(i) {
                return Ok(StackState {
                    stack,
                    failed: bits.get(i + 1),
                });
            }
            stack.push(bits.get(i + 1));
            i += 2;
        }
    }

    fn state_bits(&self, st: &StackState) -> usize {
        2 * st.stack.len() + 2
    }
}

// ---------------------------------------------------------------------------
// Free-group fingerprint

pub const DEFAULT_PRIME_BITS: u32 = 61;
pub const DEFAULT_TRIALS: usize = 2;
const PRIME_ATTEMPTS: usize = 100_000;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A uniformly random prime with exactly `bits` bits.
pub fn random_prime<R: Rng + ?Sized>(rng: &mut R, bits: u32) -> Result<u64> {
    if !(3..=62).contains(&bits) {
        return Err(Error::OutOfRange(alloc::format!("prime size {bits} not in 3..=62")));
    }
    let lo = 1u64 << (bits - 1);
    for _ in 0..PRIME_ATTEMPTS {
        let c = rng.random_range(lo..lo << 1) | 1;
        if is_prime(c) {
            return Ok(c);
        }
    }
    Err(Error::PrimeGeneration(PRIME_ATTEMPTS))
}

type Mat = [u64; 4];

fn mat_mul(a: &Mat, b: &Mat, p: u64) -> Mat {
    let f = |x: u64, y: u64, z: u64, w: u64| ((x as u128 * y as u128 + z as u128 * w as u128) % p as u128) as u64;
    [
        f(a[0], b[0], a[1], b[2]),
        f(a[0], b[1], a[1], b[3]),
        f(a[2], b[0], a[3], b[2]),
        f(a[2], b[1], a[3], b[3]),
    ]
}

fn generator(sym: Sym, p: u64) -> Mat {
    match sym {
        Sym::OpenA => [1, 2, 0, 1],
        Sym::CloseA => [1, p - 2, 0, 1],
        Sym::OpenB => [1, 0, 2, 1],
        Sym::CloseB => [1, 0, p - 2, 1],
    }
}

/// One pass; keeps the running product of Sanov matrices modulo `trials`
/// random primes. Accepts exactly the words that are the identity in the
/// free group, up to rare false accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeGroupMachine {
    prime_bits: u32,
    trials: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeGroupState {
    primes: Vec<u64>,
    products: Vec<Mat>,
}

impl Default for FreeGroupMachine {
    fn default() -> Self {
        Self {
            prime_bits: DEFAULT_PRIME_BITS,
            trials: DEFAULT_TRIALS,
        }
    }
}

impl FreeGroupMachine {
    pub fn new(prime_bits: u32, trials: usize) -> Result<Self> {
        if !(3..=62).contains(&prime_bits) {
            return Err(Error::OutOfRange(alloc::format!(
                "prime size {prime_bits} not in 3..=62"
            )));
        }
        if trials == 0 {
            return Err(Error::Precondition("at least one trial is needed".into()));
        }
        Ok(Self { prime_bits, trials })
    }
}

impl StreamMachine for FreeGroupMachine {
    type State = FreeGroupState;

    // The primes are stored alongside the four matrix entries.
    fn space_bits(&self, _len: usize) -> usize {
        5 * self.prime_bits as usize * self.trials
    }

    fn init(&self, ctx: &PassContext, carried: Option<FreeGroupState>) -> Result<FreeGroupState> {
        if let Some(c) = carried {
            return Ok(c);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        let primes = (0..self.trials)
            .map(|_| random_prime(&mut rng, self.prime_bits))
            .collect::<Result<Vec<_>>>()?;
        Ok(FreeGroupState {
            products: alloc::vec![[1, 0, 0, 1]; primes.len()],
            primes,
        })
    }

    fn step(&self, st: &mut FreeGroupState, sym: Sym) {
        for (m, &p) in st.products.iter_mut().zip(&st.primes) {
            *m = mat_mul(m, &generator(sym, p), p);
        }
    }

    fn finished(&self, _ctx: &PassContext, _st: &FreeGroupState) -> bool {
        true
    }

    fn output(&self, _ctx: &PassContext, st: &FreeGroupState) -> Verdict {
        if st.products.iter().all(|m| *m == [1, 0, 0, 1]) {
            Verdict::Accept
        } else {
            Verdict::Reject
        }
    }

    fn encode(&self, st: &FreeGroupState) -> Bits {
        let w = self.prime_bits as usize;
        let mut b = Bits::with_capacity(self.state_bits(st));
        for (m, &p) in st.products.iter().zip(&st.primes) {
            b.push_uint(p, w);
            for &e in m {
                b.push_uint(e, w);
            }
        }
        b
    }

    fn decode(&self, _ctx: &PassContext, bits: &Bits) -> Result<FreeGroupState> {
        let w = self.prime_bits as usize;
        if bits.len() < 5 * w * self.trials {
            return Err(Error::StateDecode("free-group state too short".into()));
        }
        let mut primes = Vec::new();
        let mut products = Vec::new();
        for t in 0..self.trials {
            let base = 5 * w * t;
            primes.push(bits.read_uint(base, w));
            products.push(core::array::from_fn(|i| bits.read_uint(base + w * (i + 1), w)));
        }
        Ok(FreeGroupState { primes, products })
    }

    fn state_bits(&self, _st: &FreeGroupState) -> usize {
        5 * self.prime_bits as usize * self.trials
    }
}

pub fn freegroup_check(w: &[Sym], prime_bits: u32, trials: usize, seed: u64) -> Result<bool> {
    let m = FreeGroupMachine::new(prime_bits, trials)?;
    Ok(run(&m, w, &PassSchedule::forward(1)?, seed)?.verdict.accepted())
}

// ---------------------------------------------------------------------------
// Instance generation

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    Member,
    NearMember,
    Random,
}

/// A uniformly random Dyck path shape via the cycle lemma, with
/// independent uniform types per matched pair.
fn random_member<R: Rng + ?Sized>(rng: &mut R, length: usize) -> Vec<Sym> {
    let m = length / 2;
    // m up-steps and m + 1 down-steps in random order.
    let mut steps: Vec<bool> = (0..2 * m + 1).map(|i| i < m).collect();
    for i in (1..steps.len()).rev() {
        let j = rng.random_range(0..=i);
        steps.swap(i, j);
    }
    // Rotate to start right after the first global minimum of the walk.
    let (mut h, mut min, mut at) = (0i64, 0i64, 0usize);
    for (i, &up) in steps.iter().enumerate() {
        h += if up { 1 } else { -1 };
        if h < min {
            min = h;
            at = i + 1;
        }
    }
    let n = steps.len();
    steps.rotate_left(at % n);
    steps.pop();
    let mut out = Vec::with_capacity(length);
    let mut stack = Vec::new();
    for up in steps {
        if up {
            let k = rng.random_bool(0.5);
            stack.push(k);
            out.push(Sym::open(k));
        } else {
            out.push(Sym::close(stack.pop().expect("cycle lemma yields a Dyck path")));
        }
    }
    out
}

/// A seeded random word of the requested kind.
pub fn gen_instance(length: usize, kind: InstanceKind, seed: u64) -> Result<ParenString> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gen_instance_with(&mut rng, length, kind)
}

pub fn gen_instance_with<R: Rng + ?Sized>(rng: &mut R, length: usize, kind: InstanceKind) -> Result<ParenString> {
    match kind {
        InstanceKind::Member | InstanceKind::NearMember if !length.is_multiple_of(2) => Err(Error::Precondition(
            alloc::format!("members have even length, got {length}"),
        )),
        InstanceKind::Member => Ok(ParenString(random_member(rng, length))),
        InstanceKind::NearMember => {
            if length < 2 {
                return Err(Error::Precondition("near members need length at least 2".into()));
            }
            let mut w = random_member(rng, length);
            let i = rng.random_range(0..length);
            let others: Vec<Sym> = Sym::ALL.into_iter().filter(|s| *s != w[i]).collect();
            w[i] = others[rng.random_range(0..others.len())];
            Ok(ParenString(w))
        }
        InstanceKind::Random => Ok((0..length).map(|_| Sym::ALL[rng.random_range(0..4)]).collect()),
    }
}

/// Renders a word as a plain string.
pub fn render(w: &[Sym]) -> String {
    w.iter().map(|s| s.to_char()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::streamvm::audit_space;

    fn p(s: &str) -> ParenString {
        ParenString::parse(s).unwrap()
    }

    #[test]
    fn stack_examples() {
        assert!(stack_check(p("()").syms()));
        assert!(!stack_check(p("([)]").syms()));
        assert!(stack_check(p("").syms()));
        assert!(stack_check(p("([]())[]").syms()));
        assert!(!stack_check(p(")(").syms()));
        assert_eq!(ParenString::parse("(x"), Err(Error::InvalidSymbol { ch: 'x', pos: 1 }));
    }

    #[test]
    fn band_examples() {
        let r = height_band_run(p("(())").syms(), 1).unwrap();
        assert!(r.verdict.accepted());
        assert_eq!(r.passes_used, 2);
        let one = run(
            &HeightBandMachine::new(1).unwrap(),
            p("(())").syms(),
            &PassSchedule::forward(1).unwrap(),
            0,
        )
        .unwrap();
        assert_eq!(one.verdict, Verdict::Reject);
        assert!(!height_band_check(p("(()").syms(), 1).unwrap());
        assert!(!height_band_check(p("([)]").syms(), 1).unwrap());
        assert!(height_band_check(p("").syms(), 2).unwrap());
        assert!(HeightBandMachine::new(0).is_err());
    }

    #[test]
    fn band_reverse_passes_agree() {
        let m = HeightBandMachine::new(1).unwrap();
        for s in ["([])[]", "([)]", "(()", "[[]]()", "(]"] {
            let w = p(s);
            let r = run(&m, w.syms(), &PassSchedule::alternating(4).unwrap(), 0).unwrap();
            assert_eq!(r.verdict.accepted(), stack_check(w.syms()), "{s}");
        }
    }

    #[test]
    fn band_state_round_trips() {
        let m = HeightBandMachine::new(3).unwrap();
        let ctx = PassContext {
            pass: 1,
            direction: Direction::Forward,
            len: 20,
            seed: 0,
        };
        let mut st = m.init(&ctx, None).unwrap();
        for s in p("((([[").syms() {
            m.step(&mut st, *s);
        }
        let enc = m.encode(&st);
        assert_eq!(enc.len(), m.state_bits(&st));
        assert_eq!(m.decode(&ctx, &enc.clone().padded(m.space_bits(20))).unwrap(), st);
    }

    #[test]
    fn stack_state_round_trips() {
        let m = StackMachine;
        let ctx = PassContext {
            pass: 0,
            direction: Direction::Forward,
            len: 8,
            seed: 0,
        };
        let mut st = m.init(&ctx, None).unwrap();
        for s in p("([(").syms() {
            m.step(&mut st, *s);
        }
        let enc = m.encode(&st).padded(m.space_bits(8));
        assert_eq!(m.decode(&ctx, &enc).unwrap(), st);
    }

    #[test]
    fn freegroup_examples() {
        assert!(freegroup_check(p(")(").syms(), 61, 2, 1).unwrap());
        assert!(!freegroup_check(p("((").syms(), 61, 2, 1).unwrap());
        assert!(freegroup_check(p("([])").syms(), 61, 2, 1).unwrap());
        assert!(!freegroup_check(p("([)]").syms(), 61, 2, 1).unwrap());
        assert!(FreeGroupMachine::new(63, 1).is_err());
    }

    #[test]
    fn primes() {
        let known = [2u64, 3, 5, 97, 2_305_843_009_213_693_951];
        for q in known {
            assert!(is_prime(q), "{q}");
        }
        for c in [1u64, 4, 561, 3_215_031_751, 2_305_843_009_213_693_953] {
            assert!(!is_prime(c), "{c}");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = random_prime(&mut rng, 61).unwrap();
        assert_eq!(64 - q.leading_zeros(), 61);
    }

    #[test]
    fn generated_members_are_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for len in (0..40).step_by(2) {
            for _ in 0..50 {
                let w = gen_instance_with(&mut rng, len, InstanceKind::Member).unwrap();
                assert_eq!(w.len(), len);
                assert!(stack_check(w.syms()), "{w}");
                let near = gen_instance_with(&mut rng, len.max(2), InstanceKind::NearMember).unwrap();
                assert!(!stack_check(near.syms()), "{near}");
            }
        }
        assert_eq!(gen_instance(0, InstanceKind::Member, 0).unwrap().len(), 0);
        assert!(gen_instance(3, InstanceKind::Member, 0).is_err());
    }

    #[test]
    fn space_accounting() {
        let corpus: Vec<ParenString> = (0..20)
            .map(|s| gen_instance(16, InstanceKind::Member, s).unwrap())
            .collect();
        let band = HeightBandMachine::new(2).unwrap();
        let max = audit_space(&band, &corpus, &PassSchedule::forward(8).unwrap(), 0).unwrap();
        assert!(max <= 2 * 2 + 2 * bits_for(16));
        let deep = [p("(((((((())))))))")];
        let stack = audit_space(&StackMachine, &deep, &PassSchedule::forward(1).unwrap(), 0).unwrap();
        assert_eq!(stack, 2 * 8 + 2);
    }
}
