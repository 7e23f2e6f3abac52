//! Two-party randomized protocols with explicit finite coin spaces.
//!
//! A protocol is a list of rounds with alternating owners. Each round's
//! message function sees only its owner's input, its owner's private coin,
//! the public coin and the transcript so far; the evaluation interface never
//! hands it anything else. Transcripts are concatenations of fixed-length
//! messages.
//!
//! Everything is computed by exhaustive enumeration of coin values, capped
//! by a [`Budget`] on the number of weighted terms.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::math;
use crate::probkit::{hellinger, stable_sum, Dist, Joint};

pub type Input = u64;
pub type Coin = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Party {
    Alice,
    Bob,
}

impl Party {
    pub fn other(self) -> Party {
        match self {
            Party::Alice => Party::Bob,
            Party::Bob => Party::Alice,
        }
    }
}

/// What a message or output function gets to see.
#[derive(Debug, Clone, Copy)]
pub struct MessageView<'a> {
    pub input: Input,
    pub private_coin: Coin,
    pub public_coin: Coin,
    pub transcript: &'a Bits,
}

pub type MessageFn = Arc<dyn Fn(&MessageView<'_>) -> Result<Bits> + Send + Sync>;
pub type OutputFn = Arc<dyn Fn(&MessageView<'_>) -> Result<bool> + Send + Sync>;

/// Cap on the number of weighted terms an exact enumeration may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u128);

impl Default for Budget {
    fn default() -> Self {
        Budget(10_000_000)
    }
}

impl Budget {
    fn check(self, needed: u128) -> Result<()> {
        if needed > self.0 {
            Err(Error::BudgetExceeded { needed, budget: self.0 })
        } else {
            Ok(())
        }
    }
}

/// A finite coin space with its distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinSpace(Dist<Coin>);

impl CoinSpace {
    /// The one-point space: no randomness.
    pub fn trivial() -> Self {
        CoinSpace(Dist::point(0))
    }

    pub fn uniform(size: u64) -> Result<Self> {
        Ok(CoinSpace(Dist::uniform(0..size)?))
    }

    pub fn new(dist: Dist<Coin>) -> Self {
        CoinSpace(dist)
    }

    pub fn dist(&self) -> &Dist<Coin> {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.support().count() <= 1
    }

    fn support(&self) -> Vec<(Coin, f64)> {
        self.0.support().map(|(c, p)| (*c, p)).collect()
    }
}

#[derive(Clone)]
pub struct Round {
    pub owner: Party,
    pub message_length: usize,
    message: MessageFn,
}

impl Round {
    /// Evaluates the message function on one view.
    pub fn message_for(&self, view: &MessageView<'_>) -> Result<Bits> {
        (self.message)(view)
    }
}

impl core::fmt::Debug for Round {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Round")
            .field("owner", &self.owner)
            .field("message_length", &self.message_length)
            .finish_non_exhaustive()
    }
}

/// An immutable two-party protocol.
#[derive(Clone)]
pub struct ProtocolSpec {
    alice_domain: u64,
    bob_domain: u64,
    rounds: Vec<Round>,
    output_party: Party,
    output: OutputFn,
    public_coins: CoinSpace,
    alice_coins: CoinSpace,
    bob_coins: CoinSpace,
    patched: bool,
}

impl core::fmt::Debug for ProtocolSpec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ProtocolSpec")
            .field("alice_domain", &self.alice_domain)
            .field("bob_domain", &self.bob_domain)
            .field("rounds", &self.rounds)
            .field("output_party", &self.output_party)
            .field("patched", &self.patched)
            .finish_non_exhaustive()
    }
}

pub struct ProtocolBuilder {
    alice_domain: u64,
    bob_domain: u64,
    rounds: Vec<Round>,
    output: Option<(Party, OutputFn)>,
    public_coins: CoinSpace,
    alice_coins: CoinSpace,
    bob_coins: CoinSpace,
}

impl ProtocolBuilder {
    pub fn public_coins(mut self, coins: CoinSpace) -> Self {
        self.public_coins = coins;
        self
    }

    pub fn alice_coins(mut self, coins: CoinSpace) -> Self {
        self.alice_coins = coins;
        self
    }

    pub fn bob_coins(mut self, coins: CoinSpace) -> Self {
        self.bob_coins = coins;
        self
    }

    pub fn round<F>(mut self, owner: Party, message_length: usize, f: F) -> Self
    where
        F: Fn(&MessageView<'_>) -> Result<Bits> + Send + Sync + 'static,
    {
        self.rounds.push(Round {
            owner,
            message_length,
            message: Arc::new(f),
        });
        self
    }

    pub fn output<F>(mut self, party: Party, f: F) -> Self
    where
        F: Fn(&MessageView<'_>) -> Result<bool> + Send + Sync + 'static,
    {
        self.output = Some((party, Arc::new(f)));
        self
    }

    pub fn build(self) -> Result<ProtocolSpec> {
        if self.alice_domain == 0 || self.bob_domain == 0 {
            return Err(Error::MalformedProtocol("empty input domain".to_string()));
        }
        if self.rounds.windows(2).any(|w| w[0].owner == w[1].owner) {
            return Err(Error::MalformedProtocol("round owners must alternate".to_string()));
        }
        let (output_party, output) = self
            .output
            .ok_or_else(|| Error::MalformedProtocol("no output function".to_string()))?;
        if let Some(last) = self.rounds.last() {
            if last.owner.other() != output_party {
                return Err(Error::MalformedProtocol(
                    "the output is computed by the receiver of the last message".to_string(),
                ));
            }
        }
        Ok(ProtocolSpec {
            alice_domain: self.alice_domain,
            bob_domain: self.bob_domain,
            rounds: self.rounds,
            output_party,
            output,
            public_coins: self.public_coins,
            alice_coins: self.alice_coins,
            bob_coins: self.bob_coins,
            patched: false,
        })
    }
}

/// Exact distribution of full transcripts for one input pair.
#[derive(Debug, Clone, PartialEq)]
pub struct TranscriptDist {
    pub length: usize,
    pub dist: Dist<Bits>,
}

/// Internal information costs in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfoCosts {
    /// `I(X : M | Y R)`
    pub alice: f64,
    /// `I(Y : M | X R)`
    pub bob: f64,
}

/// Monte Carlo estimate of the information costs over sampled public coins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledCosts {
    pub alice: f64,
    pub bob: f64,
    /// Hoeffding 95% half-width, shared by both estimates.
    pub half_width: f64,
    pub samples: usize,
}

impl ProtocolSpec {
    pub fn builder(alice_domain: u64, bob_domain: u64) -> ProtocolBuilder {
        ProtocolBuilder {
            alice_domain,
            bob_domain,
            rounds: Vec::new(),
            output: None,
            public_coins: CoinSpace::trivial(),
            alice_coins: CoinSpace::trivial(),
            bob_coins: CoinSpace::trivial(),
        }
    }

    pub fn rounds(&self) -> &[Round] {
        &self.rounds
    }

    pub fn output_party(&self) -> Party {
        self.output_party
    }

    pub fn public_coins(&self) -> &CoinSpace {
        &self.public_coins
    }

    pub fn alice_coins(&self) -> &CoinSpace {
        &self.alice_coins
    }

    pub fn bob_coins(&self) -> &CoinSpace {
        &self.bob_coins
    }

    pub fn alice_domain(&self) -> u64 {
        self.alice_domain
    }

    pub fn bob_domain(&self) -> u64 {
        self.bob_domain
    }

    /// Whether an output-carrying message was appended by [`Self::patched_for_bob`].
    pub fn is_patched(&self) -> bool {
        self.patched
    }

    /// Total transcript length in bits.
    pub fn transcript_length(&self) -> usize {
        self.rounds.iter().map(|r| r.message_length).sum()
    }

    /// Bits sent by one party over the whole protocol.
    pub fn bits_sent_by(&self, party: Party) -> usize {
        self.rounds
            .iter()
            .filter(|r| r.owner == party)
            .map(|r| r.message_length)
            .sum()
    }

    /// Evaluates the output function on one view.
    pub fn output_for(&self, view: &MessageView<'_>) -> Result<bool> {
        (self.output)(view)
    }

    /// A version of the protocol in which Bob computes the output. If Alice
    /// outputs, one extra Alice message carrying her output bit is appended.
    pub fn patched_for_bob(&self) -> ProtocolSpec {
        if self.output_party == Party::Bob {
            return self.clone();
        }
        let alice_output = self.output.clone();
        let mut rounds = self.rounds.clone();
        rounds.push(Round {
            owner: Party::Alice,
            message_length: 1,
            message: Arc::new(move |v: &MessageView<'_>| Ok(Bits::from_uint(alice_output(v)? as u64, 1))),
        });
        ProtocolSpec {
            rounds,
            output_party: Party::Bob,
            output: Arc::new(|v: &MessageView<'_>| Ok(v.transcript.get(v.transcript.len() - 1))),
            patched: true,
            ..self.clone()
        }
    }

    fn check_inputs(&self, x: Input, y: Input) -> Result<()> {
        if x >= self.alice_domain || y >= self.bob_domain {
            return Err(Error::OutOfRange(alloc::format!(
                "input pair ({x}, {y}) outside domains {} × {}",
                self.alice_domain,
                self.bob_domain
            )));
        }
        Ok(())
    }

    /// Runs the protocol on fixed inputs and coins; returns the transcript
    /// and the output bit.
    pub fn execute(&self, x: Input, y: Input, public: Coin, alice_coin: Coin, bob_coin: Coin) -> Result<(Bits, bool)> {
        let mut transcript = Bits::with_capacity(self.transcript_length());
        for (idx, round) in self.rounds.iter().enumerate() {
            let (input, private_coin) = match round.owner {
                Party::Alice => (x, alice_coin),
                Party::Bob => (y, bob_coin),
            };
            let msg = (round.message)(&MessageView {
                input,
                private_coin,
                public_coin: public,
                transcript: &transcript,
            })?;
            if msg.len() != round.message_length {
                return Err(Error::MalformedProtocol(alloc::format!(
                    "round {idx} produced {} bits, declared {}",
                    msg.len(),
                    round.message_length
                )));
            }
            transcript.extend_from(&msg);
        }
        let (input, private_coin) = match self.output_party {
            Party::Alice => (x, alice_coin),
            Party::Bob => (y, bob_coin),
        };
        let out = (self.output)(&MessageView {
            input,
            private_coin,
            public_coin: public,
            transcript: &transcript,
        })?;
        Ok((transcript, out))
    }

    fn coin_terms(&self, public: Option<Coin>) -> u128 {
        let r = if public.is_some() {
            1
        } else {
            self.public_coins.support().len()
        };
        r as u128 * self.alice_coins.support().len() as u128 * self.bob_coins.support().len() as u128
    }

    /// Visits every coin triple for `(x, y)` with its weight.
    fn for_each_run<F>(&self, x: Input, y: Input, public: Option<Coin>, mut f: F) -> Result<()>
    where
        F: FnMut(f64, Coin, Bits, bool) -> Result<()>,
    {
        self.check_inputs(x, y)?;
        let publics = match public {
            Some(r) => alloc::vec![(r, 1.0)],
            None => self.public_coins.support(),
        };
        let alice = self.alice_coins.support();
        let bob = self.bob_coins.support();
        for &(r, pr) in &publics {
            for &(a, pa) in &alice {
                for &(b, pb) in &bob {
                    let (t, out) = self.execute(x, y, r, a, b)?;
                    f(pr * pa * pb, r, t, out)?;
                }
            }
        }
        Ok(())
    }
}

/// Exact transcript distribution for inputs `(x, y)`, marginalizing the
/// public coin unless one is fixed.
pub fn transcript_dist(
    p: &ProtocolSpec,
    x: Input,
    y: Input,
    public: Option<Coin>,
    budget: Budget,
) -> Result<TranscriptDist> {
    budget.check(p.coin_terms(public))?;
    let mut pairs = Vec::new();
    p.for_each_run(x, y, public, |w, _, t, _| {
        pairs.push((t, w));
        Ok(())
    })?;
    Ok(TranscriptDist {
        length: p.transcript_length(),
        dist: Dist::from_pairs(pairs)?,
    })
}

fn check_input_joint(lambda: &Joint) -> Result<()> {
    if lambda.arity() != 2 {
        return Err(Error::Precondition(
            "input distribution must be a joint over (X, Y)".to_string(),
        ));
    }
    Ok(())
}

/// Interns transcripts so that they can live in a `u64`-valued joint table.
#[derive(Default)]
struct Interner(BTreeMap<Bits, u64>);

impl Interner {
    fn id(&mut self, t: Bits) -> u64 {
        let next = self.0.len() as u64;
        *self.0.entry(t).or_insert(next)
    }
}

/// Joint table over `(X, Y, R, M)` induced by `lambda` and the coins.
fn input_transcript_joint(p: &ProtocolSpec, lambda: &Joint, public: Option<Coin>, budget: Budget) -> Result<Joint> {
    check_input_joint(lambda)?;
    budget.check(lambda.len() as u128 * p.coin_terms(public))?;
    let mut interner = Interner::default();
    let mut rows: Vec<([u64; 4], f64)> = Vec::new();
    for (xy, pxy) in lambda.rows() {
        if pxy == 0.0 {
            continue;
        }
        let (x, y) = (xy[0], xy[1]);
        p.for_each_run(x, y, public, |w, r, t, _| {
            rows.push(([x, y, r, interner.id(t)], pxy * w));
            Ok(())
        })?;
    }
    Joint::new(&["X", "Y", "R", "M"], rows)
}

/// `IC^A = I(X : M | Y R)` and `IC^B = I(Y : M | X R)` under `lambda`.
pub fn information_costs(p: &ProtocolSpec, lambda: &Joint, budget: Budget) -> Result<InfoCosts> {
    let j = input_transcript_joint(p, lambda, None, budget)?;
    Ok(InfoCosts {
        alice: j.conditional_mutual_information(&[0], &[3], &[1, 2])?,
        bob: j.conditional_mutual_information(&[1], &[3], &[0, 2])?,
    })
}

/// Information costs with the public coin fixed to `public`.
pub fn information_costs_given_public(
    p: &ProtocolSpec,
    lambda: &Joint,
    public: Coin,
    budget: Budget,
) -> Result<InfoCosts> {
    let j = input_transcript_joint(p, lambda, Some(public), budget)?;
    Ok(InfoCosts {
        alice: j.conditional_mutual_information(&[0], &[3], &[1])?,
        bob: j.conditional_mutual_information(&[1], &[3], &[0])?,
    })
}

/// Monte Carlo information costs: public coins are sampled, and the costs
/// given each sampled coin are computed exactly. The interval is Hoeffding's
/// at 95% using the range `[0, transcript length]`.
pub fn information_costs_sampled<R: rand::Rng + ?Sized>(
    p: &ProtocolSpec,
    lambda: &Joint,
    samples: usize,
    rng: &mut R,
    budget: Budget,
) -> Result<SampledCosts> {
    if samples == 0 {
        return Err(Error::Precondition("need at least one sample".to_string()));
    }
    let coins = p.public_coins.support();
    let mut alice = Vec::with_capacity(samples);
    let mut bob = Vec::with_capacity(samples);
    for _ in 0..samples {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut chosen = coins[coins.len() - 1].0;
        for &(c, w) in &coins {
            acc += w;
            if u < acc {
                chosen = c;
                break;
            }
        }
        let ic = information_costs_given_public(p, lambda, chosen, budget)?;
        alice.push(ic.alice);
        bob.push(ic.bob);
    }
    let m = samples as f64;
    let range = p.transcript_length() as f64;
    Ok(SampledCosts {
        alice: stable_sum(alice) / m,
        bob: stable_sum(bob) / m,
        half_width: range * math::sqrt(math::ln(2.0 / 0.05) / (2.0 * m)),
        samples,
    })
}

/// `|h(M(x,y), M(u,v)) − h(M(x,v), M(u,y))|` for a private-coin protocol.
pub fn cut_paste_residual(p: &ProtocolSpec, x: Input, y: Input, u: Input, v: Input, budget: Budget) -> Result<f64> {
    if !p.public_coins.is_trivial() {
        return Err(Error::Precondition(
            "cut-and-paste needs a private-coin protocol".to_string(),
        ));
    }
    let m = |a, b| transcript_dist(p, a, b, None, budget).map(|t| t.dist);
    let h = |a: &Dist<Bits>, b: &Dist<Bits>| {
        let (a, b) = Dist::align(a, b);
        hellinger(&a, &b)
    };
    let lhs = h(&m(x, y)?, &m(u, v)?)?;
    let rhs = h(&m(x, v)?, &m(u, y)?)?;
    Ok((lhs - rhs).abs())
}

/// Probability, over `lambda` and all coins, that the output differs from
/// `f(x, y)`.
pub fn distributional_error<F>(p: &ProtocolSpec, lambda: &Joint, f: F, budget: Budget) -> Result<f64>
where
    F: Fn(Input, Input) -> bool,
{
    check_input_joint(lambda)?;
    budget.check(lambda.len() as u128 * p.coin_terms(None))?;
    let mut wrong = Vec::new();
    for (xy, pxy) in lambda.rows() {
        if pxy == 0.0 {
            continue;
        }
        let target = f(xy[0], xy[1]);
        p.for_each_run(xy[0], xy[1], None, |w, _, _, out| {
            if out != target {
                wrong.push(pxy * w);
            }
            Ok(())
        })?;
    }
    Ok(stable_sum(wrong).clamp(0.0, 1.0))
}

/// Random table-driven protocols, used to exercise the cut-and-paste property.
pub mod sample {
    use super::*;
    use rand::Rng;

    /// Shape parameters of a random protocol.
    #[derive(Debug, Clone, Copy)]
    pub struct RandomShape {
        pub max_rounds: usize,
        pub max_message_bits: usize,
        pub max_coin_values: u64,
        pub alice_domain: u64,
        pub bob_domain: u64,
    }

    impl Default for RandomShape {
        fn default() -> Self {
            RandomShape {
                max_rounds: 3,
                max_message_bits: 2,
                max_coin_values: 4,
                alice_domain: 4,
                bob_domain: 4,
            }
        }
    }

    fn random_coins<R: Rng + ?Sized>(rng: &mut R, max: u64) -> CoinSpace {
        let size = rng.random_range(1..=max);
        let weights: Vec<(u64, f64)> = (0..size).map(|c| (c, rng.random::<f64>() + 0.05)).collect();
        CoinSpace::new(Dist::normalized(weights).expect("positive weights"))
    }

    /// A random private-coin protocol with lookup-table message functions.
    pub fn random_private_protocol<R: Rng + ?Sized>(rng: &mut R, shape: RandomShape) -> ProtocolSpec {
        let rounds = rng.random_range(1..=shape.max_rounds);
        let first = if rng.random_bool(0.5) { Party::Alice } else { Party::Bob };
        let alice_coins = random_coins(rng, shape.max_coin_values);
        let bob_coins = random_coins(rng, shape.max_coin_values);
        let coins = shape.max_coin_values;
        let mut builder = ProtocolSpec::builder(shape.alice_domain, shape.bob_domain)
            .alice_coins(alice_coins)
            .bob_coins(bob_coins);
        let mut owner = first;
        let mut prefix_bits = 0usize;
        for _ in 0..rounds {
            let len = rng.random_range(1..=shape.max_message_bits);
            let domain = match owner {
                Party::Alice => shape.alice_domain,
                Party::Bob => shape.bob_domain,
            };
            let prefixes = 1u64 << prefix_bits;
            let table: Vec<u64> = (0..domain * coins * prefixes)
                .map(|_| rng.random_range(0..(1u64 << len)))
                .collect();
            builder = builder.round(owner, len, move |v| {
                let idx = (v.input * coins + v.private_coin) * prefixes + v.transcript.to_uint();
                Ok(Bits::from_uint(table[idx as usize], len))
            });
            prefix_bits += len;
            owner = owner.other();
        }
        let domain = match owner {
            Party::Alice => shape.alice_domain,
            Party::Bob => shape.bob_domain,
        };
        let prefixes = 1u64 << prefix_bits;
        let table: Vec<bool> = (0..domain * coins * prefixes).map(|_| rng.random_bool(0.5)).collect();
        builder
            .output(owner, move |v| {
                let idx = (v.input * coins + v.private_coin) * prefixes + v.transcript.to_uint();
                Ok(table[idx as usize])
            })
            .build()
            .expect("well-formed random protocol")
    }
}
