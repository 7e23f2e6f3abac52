//! From streaming algorithms to Augmented Index protocols.
//!
//! `Ascension(n)` is the OR of `n` independent Augmented Index instances.
//! [`embed`] writes an instance tuple as a word of length exactly `4n²`
//! that is in Dyck(2) iff every instance has `b = x_k`. Instance `i` is
//! laid out as a mountain: player `A_i` climbs with opens encoding
//! `x_n … x_1`, player `B_i` descends to `x_k`, checks it against `b` and
//! climbs back, and after all instances the players `A_n … A_1` descend in
//! turn. Each `B_i` segment is padded with `()` pairs to `2n` symbols.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::augindex::{self, AugIndexInput, Which};
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::math;
use crate::probkit::binary_entropy;
use crate::protocol::{CoinSpace, Party, ProtocolSpec};
use crate::streamvm::{Direction, PassContext, StreamMachine, Sym};

/// Padding convention recorded in layouts.
pub const PADDING: &str = "per-segment";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AscensionInput {
    n: usize,
    instances: Vec<AugIndexInput>,
}

impl AscensionInput {
    pub fn new(instances: Vec<AugIndexInput>) -> Result<Self> {
        let n = instances.len();
        if n == 0 {
            return Err(Error::Precondition("Ascension needs at least one instance".into()));
        }
        if let Some(bad) = instances.iter().find(|i| i.n() != n) {
            return Err(Error::Precondition(alloc::format!(
                "instance has string length {}, expected {n}",
                bad.n()
            )));
        }
        Ok(Self { n, instances })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn instances(&self) -> &[AugIndexInput] {
        &self.instances
    }

    /// OR of the instance values.
    pub fn value(&self) -> bool {
        self.instances.iter().any(|i| i.value())
    }

    /// A copy with instance `i` (0-based) replaced.
    pub fn with_instance(&self, i: usize, inst: AugIndexInput) -> Result<Self> {
        let mut instances = self.instances.clone();
        instances[i] = inst;
        Self::new(instances)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentKind {
    Ascent,
    Check,
    Descent,
}

/// One contiguous piece of the embedded word, written by a single player.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub kind: SegmentKind,
    /// Alice's side (`A_i`) or Bob's side (`B_i`) of instance `instance`.
    pub owner: Party,
    /// 0-based.
    pub instance: usize,
    pub offset: usize,
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingLayout {
    pub n: usize,
    pub segments: Vec<Segment>,
    pub padding: String,
}

impl EmbeddingLayout {
    pub fn total_len(&self) -> usize {
        self.segments.iter().map(|s| s.len).sum()
    }
}

fn enc_open(bit: bool) -> Sym {
    Sym::open(bit)
}

fn enc_close(bit: bool) -> Sym {
    Sym::close(bit)
}

/// `A_i`'s climb: opens for `x_n … x_1`.
pub fn ascent(inst: &AugIndexInput) -> Vec<Sym> {
    (1..=inst.n()).rev().map(|j| enc_open(inst.x_bit(j))).collect()
}

/// `B_i`'s segment, built only from `k`, `x[1,k-1]` and `b`.
pub fn check(n: usize, k: usize, prefix: u64, b: bool) -> Vec<Sym> {
    let x = |j: usize| (prefix >> (j - 1)) & 1 == 1;
    let mut out = Vec::with_capacity(2 * n);
    out.extend((1..k).map(|j| enc_close(x(j))));
    out.push(enc_close(b));
    out.push(enc_open(b));
    out.extend((1..k).rev().map(|j| enc_open(x(j))));
    while out.len() < 2 * n {
        out.push(Sym::OpenA);
        out.push(Sym::CloseA);
    }
    out
}

fn check_of(inst: &AugIndexInput) -> Vec<Sym> {
    let v = inst.bob_view();
    check(inst.n(), v.k, v.prefix, v.b)
}

/// `A_i`'s final descent: closes for `x_1 … x_n`.
pub fn descent(inst: &AugIndexInput) -> Vec<Sym> {
    (1..=inst.n()).map(|j| enc_close(inst.x_bit(j))).collect()
}

/// Writes the instance tuple as a Dyck(2) candidate word of length `4n²`.
pub fn embed(a: &AscensionInput) -> (Vec<Sym>, EmbeddingLayout) {
    let n = a.n;
    let mut word = Vec::with_capacity(4 * n * n);
    let mut segments = Vec::with_capacity(3 * n);
    let mut push = |word: &mut Vec<Sym>, syms: Vec<Sym>, kind, owner, instance| {
        segments.push(Segment {
            kind,
            owner,
            instance,
            offset: word.len(),
            len: syms.len(),
        });
        word.extend(syms);
    };
    for (i, inst) in a.instances.iter().enumerate() {
        push(&mut word, ascent(inst), SegmentKind::Ascent, Party::Alice, i);
        push(&mut word, check_of(inst), SegmentKind::Check, Party::Bob, i);
    }
    for (i, inst) in a.instances.iter().enumerate().rev() {
        push(&mut word, descent(inst), SegmentKind::Descent, Party::Alice, i);
    }
    (
        word,
        EmbeddingLayout {
            n,
            segments,
            padding: PADDING.to_string(),
        },
    )
}

/// How the untargeted coordinates are supplied to a compiled protocol.
#[derive(Debug, Clone, PartialEq)]
pub enum OtherInstances {
    /// Every tuple in the support of `μ0^{n-1}`, uniformly.
    Mu0,
    /// One fixed tuple of `n-1` instances.
    Fixed(Vec<AugIndexInput>),
}

/// One public coin value: the untargeted instances and the machine's seed.
#[derive(Debug, Clone, PartialEq)]
pub struct PublicDraw {
    pub others: Vec<AugIndexInput>,
    pub seed: u64,
}

pub struct CompiledProtocol {
    pub protocol: ProtocolSpec,
    pub space_bits: usize,
    pub passes: usize,
    /// 1-based target coordinate.
    pub target: usize,
    pub public: Arc<Vec<PublicDraw>>,
}

fn other_tuples(n: usize, others: &OtherInstances) -> Result<Vec<Vec<AugIndexInput>>> {
    match others {
        OtherInstances::Fixed(v) => {
            if v.len() + 1 != n || v.iter().any(|i| i.n() != n) {
                return Err(Error::Precondition(alloc::format!(
                    "need {} fixed instances of length {n}",
                    n - 1
                )));
            }
            Ok(alloc::vec![v.clone()])
        }
        OtherInstances::Mu0 => {
            let support = augindex::support(n, Which::Mu0)?;
            let count = (support.len() as u128).pow((n - 1) as u32);
            if count > 1_000_000 {
                return Err(Error::BudgetExceeded {
                    needed: count,
                    budget: 1_000_000,
                });
            }
            let mut tuples: Vec<Vec<AugIndexInput>> = alloc::vec![Vec::new()];
            for _ in 1..n {
                tuples = tuples
                    .into_iter()
                    .flat_map(|t| {
                        support.iter().map(move |s| {
                            let mut t = t.clone();
                            t.push(*s);
                            t
                        })
                    })
                    .collect();
            }
            Ok(tuples)
        }
    }
}

/// The pieces of the stream each side simulates in every pass.
struct Plan {
    n: usize,
    target: usize,
}

impl Plan {
    /// Everything before `B_i`: ascents and checks of earlier instances,
    /// then `A_i`'s ascent.
    fn alice_head(&self, draw: &PublicDraw, x: &AugIndexInput) -> Vec<Sym> {
        let mut out = Vec::new();
        for j in 0..self.target {
            let inst = &draw.others[j];
            out.extend(ascent(inst));
            out.extend(check_of(inst));
        }
        out.extend(ascent(x));
        out
    }

    /// `B_i` through `B_n`.
    fn bob_middle(&self, draw: &PublicDraw, k: usize, prefix: u64, b: bool) -> Vec<Sym> {
        let mut out = check(self.n, k, prefix, b);
        for inst in &draw.others[self.target..] {
            out.extend(ascent(inst));
            out.extend(check_of(inst));
        }
        out
    }

    /// All descents, `A_n` down to `A_1`.
    fn alice_tail(&self, draw: &PublicDraw, x: &AugIndexInput) -> Vec<Sym> {
        let mut out = Vec::new();
        for j in (0..self.n).rev() {
            let inst = match j.cmp(&self.target) {
                core::cmp::Ordering::Less => &draw.others[j],
                core::cmp::Ordering::Equal => x,
                core::cmp::Ordering::Greater => &draw.others[j - 1],
            };
            out.extend(descent(inst));
        }
        out
    }
}

fn ctx(pass: usize, len: usize, seed: u64) -> PassContext {
    PassContext {
        pass,
        direction: Direction::Forward,
        len,
        seed,
    }
}

fn feed<M: StreamMachine>(m: &M, st: &mut M::State, syms: &[Sym], pass: usize, s: usize) -> Result<()> {
    for (i, &sym) in syms.iter().enumerate() {
        m.step(st, sym);
        let bits = m.state_bits(st);
        if bits > s {
            return Err(Error::SpaceViolation {
                pass,
                position: i + 1,
                bits,
                declared: s,
            });
        }
    }
    Ok(())
}

fn emit<M: StreamMachine>(m: &M, st: &M::State, s: usize) -> Result<Bits> {
    let e = m.encode(st);
    if e.len() > s {
        return Err(Error::SpaceViolation {
            pass: 0,
            position: 0,
            bits: e.len(),
            declared: s,
        });
    }
    Ok(e.padded(s))
}

/// Alice's state at the start of `pass`, replaying all earlier rounds.
#[allow(clippy::too_many_arguments)]
fn alice_replay<M: StreamMachine>(
    m: &M,
    plan: &Plan,
    draw: &PublicDraw,
    x: &AugIndexInput,
    transcript: &Bits,
    upto_pass: usize,
    s: usize,
    len: usize,
) -> Result<Option<M::State>> {
    if upto_pass == 0 {
        return Ok(None);
    }
    let p = upto_pass - 1;
    // Bob's message of pass p sits in slot 2p + 1.
    let c = ctx(p, len, draw.seed);
    let mut st = m.decode(&c, &transcript.slice((2 * p + 1) * s, s))?;
    feed(m, &mut st, &plan.alice_tail(draw, x), p, s)?;
    Ok(Some(m.carry(&c, st)))
}

/// Compiles a unidirectional `passes`-pass streaming machine into a
/// `2·passes`-message protocol for `f_n` on coordinate `target` (1-based).
///
/// Every message is the machine state padded to `s` bits. Alice outputs
/// `1` iff the machine rejects the embedded word.
pub fn compile_protocol<M>(
    m: M,
    n: usize,
    passes: usize,
    target: usize,
    others: &OtherInstances,
    seeds: &[u64],
) -> Result<CompiledProtocol>
where
    M: StreamMachine + Send + Sync + 'static,
{
    if passes == 0 {
        return Err(Error::Precondition("need at least one pass".into()));
    }
    if target == 0 || target > n {
        return Err(Error::OutOfRange(alloc::format!("target {target} not in 1..={n}")));
    }
    if seeds.is_empty() {
        return Err(Error::Precondition("need at least one machine seed".into()));
    }
    let tuples = other_tuples(n, others)?;
    let public: Arc<Vec<PublicDraw>> = Arc::new(
        tuples
            .iter()
            .flat_map(|t| {
                seeds.iter().map(move |&seed| PublicDraw {
                    others: t.clone(),
                    seed,
                })
            })
            .collect(),
    );
    let len = 4 * n * n;
    let s = m.space_bits(len);
    let m = Arc::new(m);
    let plan = Arc::new(Plan { n, target: target - 1 });

    let mut builder = ProtocolSpec::builder(1u64 << n, augindex::bob_domain(n))
        .public_coins(CoinSpace::uniform(public.len() as u64)?);
    for pass in 0..passes {
        let (m1, plan1, pub1) = (m.clone(), plan.clone(), public.clone());
        builder = builder.round(Party::Alice, s, move |v| {
            let draw = &pub1[v.public_coin as usize];
            let x = AugIndexInput::new(n, v.input, 1, false)?;
            let carried = alice_replay(&*m1, &plan1, draw, &x, v.transcript, pass, s, len)?;
            let c = ctx(pass, len, draw.seed);
            let mut st = m1.init(&c, carried)?;
            feed(&*m1, &mut st, &plan1.alice_head(draw, &x), pass, s)?;
            emit(&*m1, &st, s)
        });
        let (m2, plan2, pub2) = (m.clone(), plan.clone(), public.clone());
        builder = builder.round(Party::Bob, s, move |v| {
            let draw = &pub2[v.public_coin as usize];
            let view = augindex::decode_bob(n, v.input)?;
            let c = ctx(pass, len, draw.seed);
            let mut st = m2.decode(&c, &v.transcript.slice(2 * pass * s, s))?;
            feed(
                &*m2,
                &mut st,
                &plan2.bob_middle(draw, view.k, view.prefix, view.b),
                pass,
                s,
            )?;
            emit(&*m2, &st, s)
        });
    }
    let (m3, plan3, pub3) = (m.clone(), plan.clone(), public.clone());
    let protocol = builder
        .output(Party::Alice, move |v| {
            let draw = &pub3[v.public_coin as usize];
            let x = AugIndexInput::new(n, v.input, 1, false)?;
            let st = alice_replay(&*m3, &plan3, draw, &x, v.transcript, passes, s, len)?.expect("at least one pass");
            Ok(!m3.output(&ctx(passes - 1, len, draw.seed), &st).accepted())
        })
        .build()?;
    Ok(CompiledProtocol {
        protocol,
        space_bits: s,
        passes,
        target,
        public,
    })
}

/// The space lower bound for `T`-pass unidirectional recognition of
/// Dyck(2) on inputs of length `N` with error `ε`, in bits.
pub fn space_bound(big_n: f64, passes: f64, eps: f64) -> Result<f64> {
    if !(0.0..0.25).contains(&eps) {
        return Err(Error::Precondition(alloc::format!("error {eps} not in [0, 1/4)")));
    }
    if big_n < 1.0 || passes < 1.0 {
        return Err(Error::Precondition("N and T must be at least 1".into()));
    }
    let bracket = (1.0 - 4.0 * eps) / (4.0 * math::sqrt(core::f64::consts::LN_2))
        - 2.0 * math::sqrt(binary_entropy(2.0 * eps)?) / math::powf(big_n, 0.25);
    if bracket <= 0.0 {
        return Ok(0.0);
    }
    Ok(math::sqrt(big_n) / passes / (6.0 + 4.0 * core::f64::consts::SQRT_2) * bracket * bracket)
}

/// Uniform distribution over all `Ascension(n)` tuples with each instance
/// drawn from `which`; only practical for tiny `n`.
pub fn all_inputs(n: usize, which: Which) -> Result<Vec<AscensionInput>> {
    let support = augindex::support(n, which)?;
    let mut tuples: Vec<Vec<AugIndexInput>> = alloc::vec![Vec::new()];
    for _ in 0..n {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                support.iter().map(move |s| {
                    let mut t = t.clone();
                    t.push(*s);
                    t
                })
            })
            .collect();
    }
    tuples.into_iter().map(AscensionInput::new).collect()
}

/// A random tuple with instances uniform over `μ`.
pub fn random_input<R: rand::Rng + ?Sized>(rng: &mut R, n: usize) -> Result<AscensionInput> {
    let instances = (0..n)
        .map(|_| {
            let x = rng.random_range(0..(1u64 << n));
            let k = rng.random_range(1..=n);
            AugIndexInput::new(n, x, k, rng.random_bool(0.5))
        })
        .collect::<Result<Vec<_>>>()?;
    AscensionInput::new(instances)
}
