//! The Augmented Index problem `f_n(x, (k, x[1,k-1], b)) = x_k ⊕ b`.
//!
//! Inputs are packed into integers so that they can serve as protocol
//! inputs. Alice's `x` uses bit `i-1` for `x_i`. Bob's view is packed as
//! `((k-1) << (n+1)) | (x[1,k-1] << 1) | b`, with the prefix using the same
//! bit convention as `x`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::math;
use crate::probkit::{binary_entropy, l1_distance, Dist, Joint};
use crate::protocol::{distributional_error, information_costs, Budget, Coin, Input, Party, ProtocolSpec};

/// Largest supported string length; keeps Bob's packed view inside a `u64`.
pub const MAX_N: usize = 32;

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::OutOfRange(format!("n = {n} not in 1..={MAX_N}")));
    }
    Ok(())
}

fn low_mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// One Augmented Index instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AugIndexInput {
    n: usize,
    x: u64,
    k: usize,
    b: bool,
}

/// Bob's input `(k, x[1,k-1], b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BobView {
    pub k: usize,
    pub prefix: u64,
    pub b: bool,
}

impl AugIndexInput {
    pub fn new(n: usize, x: u64, k: usize, b: bool) -> Result<Self> {
        check_n(n)?;
        if x & !low_mask(n) != 0 {
            return Err(Error::OutOfRange(format!("x has bits beyond position {n}")));
        }
        if k == 0 || k > n {
            return Err(Error::OutOfRange(format!("k = {k} not in 1..={n}")));
        }
        Ok(Self { n, x, k, b })
    }

    /// Builds an instance from `x` written as a `0`/`1` string, `x_1` first.
    pub fn parse(x: &str, k: usize, b: bool) -> Result<Self> {
        let bits = Bits::parse(x).ok_or_else(|| Error::OutOfRange(format!("not a bit string: {x:?}")))?;
        let packed = bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, bit)| acc | ((bit as u64) << i));
        Self::new(bits.len(), packed, k, b)
    }

    /// Reassembles an instance from the two packed party inputs, checking
    /// that Bob's prefix agrees with `x`.
    pub fn from_parts(n: usize, alice: Input, bob: Input) -> Result<Self> {
        let view = decode_bob(n, bob)?;
        let inst = Self::new(n, alice, view.k, view.b)?;
        if inst.bob_view().prefix != view.prefix {
            return Err(Error::Precondition(
                "Bob's prefix disagrees with Alice's string".to_string(),
            ));
        }
        Ok(inst)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn b(&self) -> bool {
        self.b
    }

    /// `x_i` for `1 ≤ i ≤ n`.
    pub fn x_bit(&self, i: usize) -> bool {
        (self.x >> (i - 1)) & 1 == 1
    }

    pub fn x_string(&self) -> String {
        (1..=self.n).map(|i| if self.x_bit(i) { '1' } else { '0' }).collect()
    }

    pub fn bob_view(&self) -> BobView {
        BobView {
            k: self.k,
            prefix: self.x & low_mask(self.k - 1),
            b: self.b,
        }
    }

    pub fn alice_input(&self) -> Input {
        self.x
    }

    pub fn bob_input(&self) -> Input {
        encode_bob(self.n, self.bob_view())
    }

    pub fn value(&self) -> bool {
        f_eval(self)
    }

    /// `x^{(i)}`: the same instance with `x_i` flipped. Bob's prefix follows
    /// the new string.
    pub fn flip(&self, i: usize) -> Self {
        Self {
            x: self.x ^ (1u64 << (i - 1)),
            ..*self
        }
    }

    pub fn with_b(&self, b: bool) -> Self {
        Self { b, ..*self }
    }
}

/// `x_k ⊕ b`.
pub fn f_eval(inst: &AugIndexInput) -> bool {
    inst.x_bit(inst.k) ^ inst.b
}

pub fn encode_bob(n: usize, view: BobView) -> Input {
    (((view.k - 1) as u64) << (n + 1)) | (view.prefix << 1) | view.b as u64
}

pub fn decode_bob(n: usize, y: Input) -> Result<BobView> {
    check_n(n)?;
    let k = (y >> (n + 1)) as usize + 1;
    if k > n {
        return Err(Error::OutOfRange(format!("encoded k = {k} exceeds n = {n}")));
    }
    let prefix = (y >> 1) & low_mask(n);
    if prefix & !low_mask(k - 1) != 0 {
        return Err(Error::OutOfRange("prefix longer than k - 1".to_string()));
    }
    Ok(BobView {
        k,
        prefix,
        b: y & 1 == 1,
    })
}

/// `f_n` on packed inputs. Inconsistent pairs evaluate from Alice's `x_k`.
pub fn f_packed(n: usize, alice: Input, bob: Input) -> bool {
    let k = (bob >> (n + 1)) as usize + 1;
    ((alice >> (k - 1)) & 1 == 1) ^ (bob & 1 == 1)
}

/// Size of Bob's packed input domain for strings of length `n`.
pub fn bob_domain(n: usize) -> u64 {
    (n as u64) << (n + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    /// Uniform over `{0,1}^n × [n] × {0,1}`.
    Mu,
    /// Uniform over inputs with `b = x_k`.
    Mu0,
    /// Uniform over inputs with `b ≠ x_k`.
    Mu1,
}

#[derive(Debug, Clone)]
pub struct MuSpec {
    pub n: usize,
    pub which: Which,
    pub joint: Joint,
}

/// Every instance in the support of the chosen distribution.
pub fn support(n: usize, which: Which) -> Result<Vec<AugIndexInput>> {
    check_n(n)?;
    if n > 20 {
        return Err(Error::OutOfRange(format!("n = {n} too large to enumerate")));
    }
    let mut out = Vec::new();
    for x in 0..(1u64 << n) {
        for k in 1..=n {
            for b in [false, true] {
                let inst = AugIndexInput { n, x, k, b };
                let keep = match which {
                    Which::Mu => true,
                    Which::Mu0 => !f_eval(&inst),
                    Which::Mu1 => f_eval(&inst),
                };
                if keep {
                    out.push(inst);
                }
            }
        }
    }
    Ok(out)
}

/// The distribution as a joint over (Alice's input, Bob's input).
pub fn make_mu(n: usize, which: Which) -> Result<MuSpec> {
    let insts = support(n, which)?;
    let w = 1.0 / insts.len() as f64;
    let joint = Joint::new(&["X", "Y"], insts.iter().map(|i| ([i.alice_input(), i.bob_input()], w)))?;
    Ok(MuSpec { n, which, joint })
}

/// The deterministic protocol in which Bob names one of `2^l` blocks of
/// `x` by the high-order `l` bits of `k-1`, Alice sends that block, and Bob
/// outputs `x_k ⊕ b`.
pub fn block_protocol(n: usize, l: usize) -> Result<ProtocolSpec> {
    check_n(n)?;
    if !n.is_power_of_two() || n < 2 {
        return Err(Error::Precondition(format!("n = {n} is not a power of two ≥ 2")));
    }
    let log_n = n.trailing_zeros() as usize;
    if l == 0 || l > log_n {
        return Err(Error::OutOfRange(format!("l = {l} not in 1..={log_n}")));
    }
    let block = n >> l;
    ProtocolSpec::builder(1u64 << n, bob_domain(n))
        .round(Party::Bob, l, move |v| {
            let view = decode_bob(n, v.input)?;
            Ok(Bits::from_uint(((view.k - 1) / block) as u64, l))
        })
        .round(Party::Alice, block, move |v| {
            let j = v.transcript.read_uint(0, l) as usize;
            Ok((0..block).map(|p| (v.input >> (j * block + p)) & 1 == 1).collect())
        })
        .output(Party::Bob, move |v| {
            let view = decode_bob(n, v.input)?;
            let p = (view.k - 1) % block;
            Ok(v.transcript.get(l + p) ^ view.b)
        })
        .build()
}

/// Where the error parameter of a report came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ErrorSource {
    /// Computed exactly on `μ`.
    Measured,
    /// Supplied by the caller, e.g. inherited from a streaming machine.
    Asserted(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffReport {
    pub n: usize,
    pub error: f64,
    pub error_measured: bool,
    /// `IC^A_{μ0} / n`
    pub d: f64,
    /// `IC^B_{μ0}`
    pub c: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `(1 - 4ε) / (4 √ln 2) - √(H(2ε)/n)`.
pub fn tradeoff_rhs(n: usize, eps: f64) -> Result<f64> {
    Ok((1.0 - 4.0 * eps) / (4.0 * math::sqrt(core::f64::consts::LN_2))
        - math::sqrt(binary_entropy(2.0 * eps)? / n as f64))
}

fn resolve_error(p: &ProtocolSpec, n: usize, source: ErrorSource, budget: Budget) -> Result<(f64, bool)> {
    match source {
        ErrorSource::Measured => {
            let mu = make_mu(n, Which::Mu)?;
            Ok((
                distributional_error(p, &mu.joint, |x, y| f_packed(n, x, y), budget)?,
                true,
            ))
        }
        ErrorSource::Asserted(e) => Ok((e, false)),
    }
}

/// Evaluates both sides of the information trade-off for `p` on `f_n`.
pub fn tradeoff_report(p: &ProtocolSpec, n: usize, source: ErrorSource, budget: Budget) -> Result<TradeoffReport> {
    if !n.is_multiple_of(2) {
        return Err(Error::Precondition(format!("n = {n} must be even")));
    }
    let (error, error_measured) = resolve_error(p, n, source, budget)?;
    if !(0.0..=0.25).contains(&error) {
        return Err(Error::Precondition(format!("error {error} outside [0, 1/4]")));
    }
    let mu0 = make_mu(n, Which::Mu0)?;
    let ic = information_costs(p, &mu0.joint, budget)?;
    let d = ic.alice / n as f64;
    let c = ic.bob;
    let lhs = math::sqrt(d) + math::sqrt(2.0 * c);
    let rhs = tradeoff_rhs(n, error)?;
    Ok(TradeoffReport {
        n,
        error,
        error_measured,
        d,
        c,
        lhs,
        rhs,
        holds: lhs >= rhs - 1e-9,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapReport {
    /// ℓ₁ distance between Bob's final views on 0-inputs and 1-inputs.
    pub gap: f64,
    pub lemma_rhs: f64,
    pub correctness_lb: f64,
    pub error: f64,
    pub c: f64,
    pub d: f64,
    pub d1: f64,
    /// Whether an output message had to be appended for Bob.
    pub patched: bool,
}

/// Distribution of `(R, M, Bob's input)` for inputs drawn from `insts`.
fn bob_final_view(p: &ProtocolSpec, insts: &[AugIndexInput], budget: Budget) -> Result<Dist<(Coin, Bits, Input)>> {
    let w = 1.0 / insts.len() as f64;
    let terms = insts.len() as u128
        * p.public_coins().dist().len() as u128
        * p.alice_coins().dist().len() as u128
        * p.bob_coins().dist().len() as u128;
    if terms > budget.0 {
        return Err(Error::BudgetExceeded {
            needed: terms,
            budget: budget.0,
        });
    }
    let mut pairs = Vec::new();
    for inst in insts {
        let (x, y) = (inst.alice_input(), inst.bob_input());
        for (&r, pr) in p.public_coins().dist().support() {
            for (&a, pa) in p.alice_coins().dist().support() {
                for (&b, pb) in p.bob_coins().dist().support() {
                    let (t, _) = p.execute(x, y, r, a, b)?;
                    pairs.push(((r, t, y), w * pr * pa * pb));
                }
            }
        }
    }
    Dist::from_pairs(pairs)
}

/// Measures how far Bob's final view on `μ0` is from his view on `μ1`,
/// together with the upper bound predicted from the information costs and
/// the lower bound forced by correctness.
pub fn transcript_gap(p: &ProtocolSpec, n: usize, budget: Budget) -> Result<GapReport> {
    if !n.is_multiple_of(2) {
        return Err(Error::Precondition(format!("n = {n} must be even")));
    }
    let (error, _) = resolve_error(p, n, ErrorSource::Measured, budget)?;
    let mu0 = make_mu(n, Which::Mu0)?;
    let ic = information_costs(p, &mu0.joint, budget)?;
    let c = ic.bob;
    let d = ic.alice / n as f64;
    let d1 = d + binary_entropy((2.0 * error).min(1.0))? / n as f64;

    let patched = p.patched_for_bob();
    let v0 = bob_final_view(&patched, &support(n, Which::Mu0)?, budget)?;
    let v1 = bob_final_view(&patched, &support(n, Which::Mu1)?, budget)?;
    let (v0, v1) = Dist::align(&v0, &v1);
    let gap = l1_distance(&v0, &v1)?;

    let kappa = math::KAPPA;
    Ok(GapReport {
        gap,
        lemma_rhs: 1.0 + 8.0 * math::sqrt(kappa * c) + 4.0 * math::sqrt(2.0 * kappa * d1),
        correctness_lb: 2.0 * (1.0 - 2.0 * error),
        error,
        c,
        d,
        d1,
        patched: patched.is_patched(),
    })
}
