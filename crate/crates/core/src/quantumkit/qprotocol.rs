//! Two-party quantum protocols for Augmented Index with exact state-vector
//! simulation.
//!
//! Qubits are numbered `0..workspace`; each is owned by exactly one party at
//! any time. In every round the sender applies a unitary, selected by its
//! classical input, to all qubits it owns (sorted by index, lowest index most
//! significant) and then hands the message qubits to the other party. Inputs
//! are read-only: they select unitaries but are never acted on, so a state
//! with `X` in superposition is simulated branch by branch.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::state::{bures, bures_pure, is_unitary, split, uhlmann_any, CQState, Layout, PureState, Register};
use super::{c, CMatrix, CVector, ZERO};
use crate::augindex::{BobView, ErrorSource};
use crate::error::{Error, Result};
use crate::math;
use crate::protocol::Party;

/// Cap on `n + workspace`.
pub const MAX_QUBITS: usize = 12;

/// Register names used in simulated states.
const X: &str = "X";
const A: &str = "A";
const B: &str = "B";

#[derive(Debug, Clone, PartialEq)]
pub struct QRound {
    pub owner: Party,
    /// One unitary per sender input, or a single shared unitary. Alice's
    /// table is indexed by `x`, Bob's by [`bob_view_index`].
    pub table: Vec<CMatrix>,
    /// Qubits handed to the other party after the unitary.
    pub message: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QProtocolSpec {
    n: usize,
    workspace: usize,
    alice_start: Vec<usize>,
    rounds: Vec<QRound>,
    output_qubit: usize,
    /// Alice's qubits before round `i` (entry `i`) and after the last round.
    alice_owned: Vec<Vec<usize>>,
}

/// Every Bob input for `n`, in table order.
pub fn bob_views(n: usize) -> Vec<BobView> {
    let mut out = Vec::new();
    for k in 1..=n {
        for prefix in 0..(1u64 << (k - 1)) {
            for b in [false, true] {
                out.push(BobView { k, prefix, b });
            }
        }
    }
    out
}

/// Position of `v` in [`bob_views`].
pub fn bob_view_index(v: &BobView) -> usize {
    (((1usize << (v.k - 1)) - 1 + v.prefix as usize) << 1) | v.b as usize
}

impl QProtocolSpec {
    pub fn builder(n: usize, workspace: usize) -> QProtocolBuilder {
        QProtocolBuilder {
            n,
            workspace,
            alice_start: Vec::new(),
            rounds: Vec::new(),
            output_qubit: None,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn workspace(&self) -> usize {
        self.workspace
    }

    pub fn rounds(&self) -> &[QRound] {
        &self.rounds
    }

    pub fn t(&self) -> usize {
        self.rounds.len()
    }

    pub fn alice_start(&self) -> &[usize] {
        &self.alice_start
    }

    pub fn output_qubit(&self) -> usize {
        self.output_qubit
    }

    pub fn output_party(&self) -> Party {
        self.rounds.last().expect("validated").owner.other()
    }

    /// Qubits owned by `party` after `messages` messages.
    pub fn owned(&self, party: Party, messages: usize) -> Vec<usize> {
        let alice = &self.alice_owned[messages];
        match party {
            Party::Alice => alice.clone(),
            Party::Bob => (0..self.workspace).filter(|q| !alice.contains(q)).collect(),
        }
    }

    fn unitary(&self, round: usize, x: u64, view: &BobView) -> &CMatrix {
        let r = &self.rounds[round];
        if r.table.len() == 1 {
            return &r.table[0];
        }
        match r.owner {
            Party::Alice => &r.table[x as usize],
            Party::Bob => &r.table[bob_view_index(view)],
        }
    }

    /// Workspace vectors after each message for one basis input.
    fn branch(&self, x: u64, view: &BobView) -> Vec<CVector> {
        let w = self.workspace;
        let mut v = CVector::zeros(1 << w);
        v[0] = c(1.0, 0.0);
        let mut out = Vec::with_capacity(self.t());
        for (i, r) in self.rounds.iter().enumerate() {
            let acting = self.owned(r.owner, i);
            v = apply_on(&v, w, &acting, self.unitary(i, x, view));
            out.push(v.clone());
        }
        out
    }

    /// Basis index permutation from workspace order to `[A, B]` order after
    /// `messages` messages.
    fn reorder(&self, messages: usize) -> (Vec<usize>, usize, usize) {
        let a = self.owned(Party::Alice, messages);
        let b = self.owned(Party::Bob, messages);
        let order: Vec<usize> = a.iter().chain(&b).copied().collect();
        let w = self.workspace;
        let perm = (0..1usize << w)
            .map(|i| {
                order.iter().enumerate().fold(0, |acc, (pos, &q)| {
                    if (i >> (w - 1 - q)) & 1 == 1 {
                        acc | (1 << (w - 1 - pos))
                    } else {
                        acc
                    }
                })
            })
            .collect();
        (perm, a.len(), b.len())
    }
}

fn apply_on(v: &CVector, total: usize, qubits: &[usize], u: &CMatrix) -> CVector {
    let sp = split(total, qubits);
    let mut out = CVector::zeros(v.len());
    for t in 0..sp.dt {
        let idx = &sp.full[t * sp.dk..(t + 1) * sp.dk];
        for (r, &i) in idx.iter().enumerate() {
            let mut acc = ZERO;
            for (col, &j) in idx.iter().enumerate() {
                acc += u[(r, col)] * v[j];
            }
            out[i] = acc;
        }
    }
    out
}

pub struct QProtocolBuilder {
    n: usize,
    workspace: usize,
    alice_start: Vec<usize>,
    rounds: Vec<QRound>,
    output_qubit: Option<usize>,
}

impl QProtocolBuilder {
    /// Qubits Alice owns initially; all others start with Bob.
    pub fn alice_owns(mut self, qubits: &[usize]) -> Self {
        self.alice_start = qubits.to_vec();
        self
    }

    /// A round with an explicit table (see [`QRound::table`]).
    pub fn round(mut self, owner: Party, message: &[usize], table: Vec<CMatrix>) -> Self {
        self.rounds.push(QRound {
            owner,
            table,
            message: message.to_vec(),
        });
        self
    }

    pub fn alice_round<F: Fn(u64) -> CMatrix>(self, message: &[usize], f: F) -> Self {
        let table = (0..1u64 << self.n).map(f).collect();
        self.round(Party::Alice, message, table)
    }

    pub fn bob_round<F: Fn(&BobView) -> CMatrix>(self, message: &[usize], f: F) -> Self {
        let table = bob_views(self.n).iter().map(f).collect();
        self.round(Party::Bob, message, table)
    }

    /// The final receiver measures `qubit` in the computational basis.
    pub fn output(mut self, qubit: usize) -> Self {
        self.output_qubit = Some(qubit);
        self
    }

    pub fn build(self) -> Result<QProtocolSpec> {
        let bad = |m: String| Err(Error::MalformedProtocol(m));
        let (n, w) = (self.n, self.workspace);
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::OutOfRange(format!("n = {n}")));
        }
        if n + w > MAX_QUBITS {
            return Err(Error::BudgetExceeded {
                needed: (n + w) as u128,
                budget: MAX_QUBITS as u128,
            });
        }
        if self.rounds.is_empty() {
            return bad("no rounds".into());
        }
        let mut alice: BTreeSet<usize> = BTreeSet::new();
        for &q in &self.alice_start {
            if q >= w || !alice.insert(q) {
                return bad(format!("bad initial qubit {q}"));
            }
        }
        let mut alice_owned = alloc::vec![alice.iter().copied().collect::<Vec<_>>()];
        for (i, r) in self.rounds.iter().enumerate() {
            let expected = if i % 2 == 0 { Party::Alice } else { Party::Bob };
            if r.owner != expected {
                return bad(format!("round {} must be sent by {expected:?}", i + 1));
            }
            let owned: BTreeSet<usize> = match r.owner {
                Party::Alice => alice.clone(),
                Party::Bob => (0..w).filter(|q| !alice.contains(q)).collect(),
            };
            let domain = match r.owner {
                Party::Alice => 1usize << n,
                Party::Bob => ((1usize << n) - 1) * 2,
            };
            if r.table.len() != 1 && r.table.len() != domain {
                return bad(format!(
                    "round {}: table has {} entries, expected 1 or {domain}",
                    i + 1,
                    r.table.len()
                ));
            }
            let d = 1usize << owned.len();
            for u in &r.table {
                if u.nrows() != d || u.ncols() != d {
                    return bad(format!("round {}: unitary must be {d}×{d}", i + 1));
                }
                if !is_unitary(u) {
                    return bad(format!("round {}: matrix is not unitary", i + 1));
                }
            }
            if r.message.is_empty() {
                return bad(format!("round {}: empty message", i + 1));
            }
            let mut seen = BTreeSet::new();
            for &q in &r.message {
                if !owned.contains(&q) || !seen.insert(q) {
                    return bad(format!("round {}: qubit {q} is not the sender's to send", i + 1));
                }
                match r.owner {
                    Party::Alice => alice.remove(&q),
                    Party::Bob => alice.insert(q),
                };
            }
            alice_owned.push(alice.iter().copied().collect());
        }
        let receiver = self.rounds.last().expect("nonempty").owner.other();
        let out = self
            .output_qubit
            .ok_or(Error::MalformedProtocol("no output qubit".into()))?;
        if out >= w || (alice.contains(&out) != (receiver == Party::Alice)) {
            return bad(format!("output qubit {out} is not held by the final receiver"));
        }
        Ok(QProtocolSpec {
            n,
            workspace: w,
            alice_start: self.alice_start,
            rounds: self.rounds,
            output_qubit: out,
            alice_owned,
        })
    }
}

/// How Bob's classical input is formed in a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BobInput {
    /// `(k, x[1,k−1], b)` with `b` given.
    Fixed { k: usize, b: bool },
    /// `(k, x[1,k−1], x_k)`, the `μ₀` restriction.
    FromRegister { k: usize },
}

/// `x[1,l]` is fixed to `prefix` (bit `i−1` holds `x_i`) and `X[l+1,n]` is in
/// uniform superposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunInput {
    pub prefix: u64,
    pub prefix_len: usize,
    pub bob: BobInput,
}

impl RunInput {
    pub fn basis(n: usize, x: u64, bob: BobInput) -> Self {
        Self {
            prefix: x,
            prefix_len: n,
            bob,
        }
    }

    pub fn superposed(bob: BobInput) -> Self {
        Self {
            prefix: 0,
            prefix_len: 0,
            bob,
        }
    }

    fn view(&self, x: u64) -> BobView {
        let (k, b) = match self.bob {
            BobInput::Fixed { k, b } => (k, b),
            BobInput::FromRegister { k } => (k, (x >> (k - 1)) & 1 == 1),
        };
        BobView {
            k,
            prefix: x & ((1u64 << (k - 1)) - 1),
            b,
        }
    }
}

/// Joint pure states over registers `X` (the superposed suffix), `A`
/// (Alice's qubits) and `B` (Bob's qubits) after each message.
pub fn qprotocol_run(p: &QProtocolSpec, input: &RunInput) -> Result<Vec<PureState>> {
    let n = p.n;
    let l = input.prefix_len;
    if l > n || input.prefix >> l != 0 {
        return Err(Error::OutOfRange(format!("prefix of length {l}")));
    }
    let k = match input.bob {
        BobInput::Fixed { k, .. } | BobInput::FromRegister { k } => k,
    };
    if k == 0 || k > n {
        return Err(Error::OutOfRange(format!("k = {k}")));
    }
    let free = n - l;
    let w = p.workspace;
    let amp = c(math::powf(2.0, -(free as f64) / 2.0), 0.0);
    let mut states: Vec<CVector> = alloc::vec![CVector::zeros(1 << (free + w)); p.t()];
    let perms: Vec<_> = (1..=p.t()).map(|i| p.reorder(i)).collect();
    for y in 0..1u64 << free {
        // Register qubit j holds x_{l+1+j}, most significant first.
        let suffix = (0..free).fold(0u64, |acc, j| acc | (((y >> (free - 1 - j)) & 1) << (l + j)));
        let x = input.prefix | suffix;
        let view = input.view(x);
        for (i, v) in p.branch(x, &view).into_iter().enumerate() {
            let (perm, _, _) = &perms[i];
            let base = (y as usize) << w;
            for (idx, a) in v.iter().enumerate() {
                states[i][base | perm[idx]] = a * amp;
            }
        }
    }
    Ok(states
        .into_iter()
        .zip(&perms)
        .map(|(v, (_, na, nb))| {
            let layout = Layout::new(alloc::vec![
                Register::new(X, free),
                Register::new(A, *na),
                Register::new(B, *nb),
            ])
            .expect("distinct names");
            PureState::new_unchecked(layout, v)
        })
        .collect())
}

/// Probability that the final receiver measures 1 on a basis input.
pub fn output_probability(p: &QProtocolSpec, x: u64, view: &BobView) -> f64 {
    let last = p.branch(x, view).pop().expect("validated");
    let bit = 1usize << (p.workspace - 1 - p.output_qubit);
    last.iter()
        .enumerate()
        .filter(|(i, _)| i & bit != 0)
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// Error of the measured output against `x_k ⊕ b` under the uniform `μ`.
pub fn error_on_mu(p: &QProtocolSpec) -> f64 {
    let n = p.n;
    let mut total = 0.0;
    for x in 0..1u64 << n {
        for k in 1..=n {
            for b in [false, true] {
                let view = BobView {
                    k,
                    prefix: x & ((1u64 << (k - 1)) - 1),
                    b,
                };
                let p1 = output_probability(p, x, &view);
                let answer = ((x >> (k - 1)) & 1 == 1) != b;
                total += if answer { 1.0 - p1 } else { p1 };
            }
        }
    }
    total / ((1u64 << n) as f64 * n as f64 * 2.0)
}

/// Quantum information costs on `μ₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct QIc {
    pub alice: f64,
    pub bob: f64,
    /// Per-message terms, `I(X : Q_i | X[1,K])` for odd `i` and
    /// `I(K : X̂ P_i)` for even `i`.
    pub per_round: Vec<f64>,
}

/// Alice's cost uses classical `X` and conditions on `K, X[1,K]`; Bob's
/// cost keeps `X̂` in uniform superposition and measures what Alice's side
/// learns about `K`.
pub fn qic_costs(p: &QProtocolSpec) -> Result<QIc> {
    let n = p.n;
    let t = p.t();
    let mut per_round = alloc::vec![0.0; t];
    // runs[(k, x)] = states after each message
    let mut runs = Vec::new();
    for k in 1..=n {
        for x in 0..1u64 << n {
            let s = qprotocol_run(p, &RunInput::basis(n, x, BobInput::FromRegister { k }))?;
            runs.push(((k, x), s));
        }
    }
    let weight = 1.0 / runs.len() as f64;
    for i in (0..t).step_by(2) {
        let parts = runs
            .iter()
            .map(|(label, s)| Ok((*label, weight, s[i].reduced(&[B])?)))
            .collect::<Result<Vec<_>>>()?;
        let cq = CQState::new(parts)?;
        per_round[i] = cq.conditional_mutual_information(|&(k, x)| (k, x & ((1u64 << k) - 1)))?;
    }
    if t > 1 {
        let mut sup = Vec::new();
        for k in 1..=n {
            sup.push((
                k,
                qprotocol_run(p, &RunInput::superposed(BobInput::FromRegister { k }))?,
            ));
        }
        for i in (1..t).step_by(2) {
            let parts = sup
                .iter()
                .map(|(k, s)| Ok((*k, 1.0 / n as f64, s[i].reduced(&[X, A])?)))
                .collect::<Result<Vec<_>>>()?;
            per_round[i] = CQState::new(parts)?.mutual_information();
        }
    }
    Ok(QIc {
        alice: per_round.iter().step_by(2).sum(),
        bob: per_round.iter().skip(1).step_by(2).sum(),
        per_round,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct QTradeoffReport {
    pub n: usize,
    pub t: usize,
    pub qic_alice: f64,
    pub qic_bob: f64,
    pub error: f64,
    pub error_measured: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `(1 − 4ε) / (4 √(κ t))`.
pub fn q_tradeoff_rhs(t: usize, eps: f64) -> f64 {
    (1.0 - 4.0 * eps) / (4.0 * math::sqrt(math::KAPPA * t as f64))
}

pub fn q_tradeoff_report(p: &QProtocolSpec, source: ErrorSource) -> Result<QTradeoffReport> {
    let n = p.n;
    if !n.is_multiple_of(2) {
        return Err(Error::Precondition(format!("n = {n} must be even")));
    }
    let (error, error_measured) = match source {
        ErrorSource::Measured => (error_on_mu(p), true),
        ErrorSource::Asserted(e) => (e, false),
    };
    if !(0.0..=0.25).contains(&error) {
        return Err(Error::Precondition(format!("error {error} outside [0, 1/4]")));
    }
    let ic = qic_costs(p)?;
    let lhs = 2.0 * math::sqrt(ic.alice / n as f64) + math::sqrt(2.0 * ic.bob);
    let rhs = q_tradeoff_rhs(p.t(), error);
    Ok(QTradeoffReport {
        n,
        t: p.t(),
        qic_alice: ic.alice,
        qic_bob: ic.bob,
        error,
        error_measured,
        lhs,
        rhs,
        holds: lhs >= rhs - 1e-9,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridRound {
    /// 1-based message index.
    pub round: usize,
    pub h: f64,
    /// Distance between the aligned run and its target.
    pub aligned: f64,
    /// `h_r + 2 Σ_{i<r} h_i`.
    pub bound: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridReport {
    pub j: usize,
    pub l: usize,
    pub z: u64,
    pub rounds: Vec<HybridRound>,
    pub holds: bool,
}

/// Slack below which a hybrid inequality counts as violated.
const HYBRID_TOL: f64 = 1e-6;

/// Runs the four hybrids `φ(z, j)`, `φ(z, l)`, `φ(z⁽ˡ⁾, j)`, `φ(z⁽ˡ⁾, l)`
/// and checks, message by message, that the Uhlmann-aligned distance stays
/// within `h_r + 2 Σ_{i<r} h_i`.
///
/// `z` holds `z_i` in bit `i−1`; `z⁽ˡ⁾` flips `z_l`. Bob's bit is `z_j` in
/// the `j` runs and `z_l` in the `l` runs.
pub fn hybrid_check(p: &QProtocolSpec, j: usize, l: usize, z: u64) -> Result<HybridReport> {
    let n = p.n;
    let half = n / 2;
    if j == 0 || j > half {
        return Err(Error::OutOfRange(format!("j = {j} not in [1, {half}]")));
    }
    if l <= half || l > n {
        return Err(Error::OutOfRange(format!("l = {l} not in ({half}, {n}]")));
    }
    if z >> l != 0 {
        return Err(Error::OutOfRange(format!("z has bits beyond position {l}")));
    }
    let zl = z ^ (1 << (l - 1));
    let bit = |i: usize| (z >> (i - 1)) & 1 == 1;
    let run = |prefix: u64, k: usize, b: bool| {
        qprotocol_run(
            p,
            &RunInput {
                prefix,
                prefix_len: l,
                bob: BobInput::Fixed { k, b },
            },
        )
    };
    let zj = run(z, j, bit(j))?;
    let zll = run(z, l, bit(l))?;
    let flip_j = run(zl, j, bit(j))?;
    let flip_l = run(zl, l, bit(l))?;

    let mut rounds = Vec::with_capacity(p.t());
    let mut prior = 0.0;
    for r in 0..p.t() {
        let (h, aligned) = if r % 2 == 0 {
            let h = bures(&zj[r].reduced(&[B])?, &flip_j[r].reduced(&[B])?)?;
            let (u, _) = uhlmann_any(&zj[r], &flip_j[r], &[X, A])?;
            let moved = zll[r].apply(&[X, A], &u)?;
            (h, bures_pure(&moved, &flip_l[r])?)
        } else {
            let h = bures(&zj[r].reduced(&[X, A])?, &zll[r].reduced(&[X, A])?)?;
            let (u, _) = uhlmann_any(&zj[r], &zll[r], &[B])?;
            let moved = flip_j[r].apply(&[B], &u)?;
            (h, bures_pure(&moved, &flip_l[r])?)
        };
        let bound = h + 2.0 * prior;
        rounds.push(HybridRound {
            round: r + 1,
            h,
            aligned,
            bound,
            slack: bound - aligned,
        });
        prior += h;
    }
    let holds = rounds.iter().all(|r| r.slack >= -HYBRID_TOL);
    Ok(HybridReport { j, l, z, rounds, holds })
}

/// Protocols used by tests and the demo front end.
pub mod examples {
    use super::super::{cnot, flip, identity};
    use super::*;

    /// `n = 2`, `t = 2`: Alice writes `x` into qubits 0 and 1 and sends
    /// them; Bob computes `x_k ⊕ b` into qubit 2 and returns it.
    pub fn full_send() -> QProtocolSpec {
        reply(true)
    }

    /// As [`full_send`] but Bob returns qubit 2 untouched.
    pub fn fixed_reply() -> QProtocolSpec {
        reply(false)
    }

    fn reply(answer: bool) -> QProtocolSpec {
        QProtocolSpec::builder(2, 3)
            .alice_owns(&[0, 1])
            .alice_round(&[0, 1], |x| {
                let mut u = identity(2);
                if x & 1 == 1 {
                    u = flip(2, 0) * u;
                }
                if x & 2 == 2 {
                    u = flip(2, 1) * u;
                }
                u
            })
            .bob_round(&[2], |v| {
                if !answer {
                    return identity(3);
                }
                let mut u = cnot(3, v.k - 1, 2);
                if v.b {
                    u = flip(3, 2) * u;
                }
                u
            })
            .output(2)
            .build()
            .expect("valid protocol")
    }

    /// Every round is the identity; `t` rounds over `n` inputs.
    pub fn constant(n: usize, t: usize) -> QProtocolSpec {
        let mut b = QProtocolSpec::builder(n, 2).alice_owns(&[0]);
        for i in 0..t {
            let (owner, q) = if i % 2 == 0 { (Party::Alice, 0) } else { (Party::Bob, 0) };
            b = b.round(owner, &[q], alloc::vec![identity(1 + (i % 2))]);
        }
        b.output(0).build().expect("valid protocol")
    }

    /// A random protocol: every table entry is Haar-random.
    pub fn random<R: rand::Rng + ?Sized>(rng: &mut R, n: usize, workspace: usize, t: usize) -> Result<QProtocolSpec> {
        use super::super::sample::random_unitary;
        let mut alice: BTreeSet<usize> = (0..workspace / 2).collect();
        let mut b = QProtocolSpec::builder(n, workspace).alice_owns(&alice.iter().copied().collect::<Vec<_>>());
        for i in 0..t {
            let owner = if i % 2 == 0 { Party::Alice } else { Party::Bob };
            let owned: Vec<usize> = match owner {
                Party::Alice => alice.iter().copied().collect(),
                Party::Bob => (0..workspace).filter(|q| !alice.contains(q)).collect(),
            };
            if owned.is_empty() {
                return Err(Error::Precondition(format!("sender of round {} owns nothing", i + 1)));
            }
            let q = owned[rng.random_range(0..owned.len())];
            let d = 1usize << owned.len();
            let entries = match owner {
                Party::Alice => 1usize << n,
                Party::Bob => ((1usize << n) - 1) * 2,
            };
            let table = (0..entries).map(|_| random_unitary(rng, d)).collect();
            b = b.round(owner, &[q], table);
            match owner {
                Party::Alice => alice.remove(&q),
                Party::Bob => alice.insert(q),
            };
        }
        let receiver_has: Vec<usize> = if t % 2 == 1 {
            (0..workspace).filter(|q| !alice.contains(q)).collect()
        } else {
            alice.iter().copied().collect()
        };
        b.output(receiver_has[0]).build()
    }
}
