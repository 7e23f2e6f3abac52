//! JSON documents for distributions, classical protocols and quantum
//! protocols.
//!
//! Probabilities are written as decimal strings in Rust's shortest
//! round-trip notation, so reading a document back gives the same `f64`s.

use std::collections::BTreeMap;
use std::sync::Arc;

use dyckinfo_core::probkit::{Dist, Joint};
use dyckinfo_core::protocol::{Budget, CoinSpace, MessageView, Party, ProtocolSpec};
use dyckinfo_core::quantumkit::{c, CMatrix, QProtocolSpec};
use dyckinfo_core::Bits;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn decimal(p: f64) -> String {
    format!("{p}")
}

fn parse_decimal(s: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::Format(format!("not a decimal probability: {s:?}")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistDoc<L> {
    pub outcomes: Vec<L>,
    pub probs: Vec<String>,
}

impl<L: Ord + Clone> DistDoc<L> {
    pub fn from_dist(d: &Dist<L>) -> Self {
        Self {
            outcomes: d.outcomes().to_vec(),
            probs: d.probs().iter().map(|&p| decimal(p)).collect(),
        }
    }

    pub fn to_dist(&self) -> Result<Dist<L>> {
        let probs = self
            .probs
            .iter()
            .map(|s| parse_decimal(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Dist::new(self.outcomes.clone(), probs)?)
    }
}

pub fn dist_to_json<L: Ord + Clone + Serialize>(d: &Dist<L>) -> Result<String> {
    Ok(serde_json::to_string_pretty(&DistDoc::from_dist(d))?)
}

pub fn dist_from_json<L: Ord + Clone + DeserializeOwned>(s: &str) -> Result<Dist<L>> {
    serde_json::from_str::<DistDoc<L>>(s)?.to_dist()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointDoc {
    pub names: Vec<String>,
    pub outcomes: Vec<Vec<u64>>,
    pub probs: Vec<String>,
}

impl JointDoc {
    pub fn from_joint(j: &Joint) -> Self {
        let (outcomes, probs) = j.rows().map(|(r, p)| (r.to_vec(), decimal(p))).unzip();
        Self {
            names: j.names().to_vec(),
            outcomes,
            probs,
        }
    }

    pub fn to_joint(&self) -> Result<Joint> {
        if self.outcomes.len() != self.probs.len() {
            return Err(Error::Format("outcomes and probs differ in length".into()));
        }
        let probs = self
            .probs
            .iter()
            .map(|s| parse_decimal(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Joint::new(&self.names, self.outcomes.iter().cloned().zip(probs))?)
    }
}

// ---------------------------------------------------------------------------
// Classical protocols

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartyDoc {
    Alice,
    Bob,
}

impl From<Party> for PartyDoc {
    fn from(p: Party) -> Self {
        match p {
            Party::Alice => PartyDoc::Alice,
            Party::Bob => PartyDoc::Bob,
        }
    }
}

impl From<PartyDoc> for Party {
    fn from(p: PartyDoc) -> Self {
        match p {
            PartyDoc::Alice => Party::Alice,
            PartyDoc::Bob => Party::Bob,
        }
    }
}

/// A message table keyed by `input:private_coin:public_coin:prefix` in
/// lowercase hex. The prefix is the transcript so far packed into bytes,
/// most significant bit first and zero-padded; its length is implied by
/// the round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundDoc {
    pub owner: PartyDoc,
    pub length: usize,
    /// Message bits, packed like the prefix.
    pub table: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputDoc {
    pub party: PartyDoc,
    pub table: BTreeMap<String, bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolDoc {
    pub alice_domain: u64,
    pub bob_domain: u64,
    pub public_coins: DistDoc<u64>,
    pub alice_coins: DistDoc<u64>,
    pub bob_coins: DistDoc<u64>,
    pub rounds: Vec<RoundDoc>,
    pub output: OutputDoc,
}

pub fn view_key(input: u64, private: u64, public: u64, prefix: &Bits) -> String {
    format!("{input:x}:{private:x}:{public:x}:{}", hex::encode(prefix.to_bytes()))
}

fn bits_from_hex(s: &str, len: usize) -> Result<Bits> {
    let bytes = hex::decode(s).map_err(|_| Error::Format(format!("not a hex string: {s:?}")))?;
    if bytes.len() != len.div_ceil(8) {
        return Err(Error::Format(format!("{s:?} does not hold exactly {len} bits")));
    }
    let all: Bits = bytes
        .iter()
        .flat_map(|b| (0..8).map(move |i| (b >> (7 - i)) & 1 == 1))
        .collect();
    if all.iter().skip(len).any(|b| b) {
        return Err(Error::Format(format!("{s:?} has bits set past position {len}")));
    }
    Ok(all.slice(0, len))
}

impl ProtocolDoc {
    /// Tabulates `p` on every view reachable from its input domains and coins.
    /// Runs on which a message or output function fails (packed inputs that
    /// encode nothing, say) are left out; reading the document back turns
    /// them into `UndefinedMessage`.
    pub fn from_protocol(p: &ProtocolSpec, budget: Budget) -> Result<Self> {
        let coins = |c: &CoinSpace| c.dist().outcomes().to_vec();
        let (publics, alices, bobs) = (coins(p.public_coins()), coins(p.alice_coins()), coins(p.bob_coins()));
        let terms = p.alice_domain() as u128
            * p.bob_domain() as u128
            * publics.len() as u128
            * alices.len() as u128
            * bobs.len() as u128;
        if terms > budget.0 {
            return Err(dyckinfo_core::Error::BudgetExceeded {
                needed: terms,
                budget: budget.0,
            }
            .into());
        }
        let mut tables: Vec<BTreeMap<String, String>> = vec![BTreeMap::new(); p.rounds().len()];
        let mut out = BTreeMap::new();
        for x in 0..p.alice_domain() {
            for y in 0..p.bob_domain() {
                for &r in &publics {
                    for &a in &alices {
                        for &b in &bobs {
                            let mut t = Bits::new();
                            let side = |party: Party| match party {
                                Party::Alice => (x, a),
                                Party::Bob => (y, b),
                            };
                            let mut complete = true;
                            for (i, round) in p.rounds().iter().enumerate() {
                                let (input, coin) = side(round.owner);
                                let v = MessageView {
                                    input,
                                    private_coin: coin,
                                    public_coin: r,
                                    transcript: &t,
                                };
                                let Ok(m) = round.message_for(&v) else {
                                    complete = false;
                                    break;
                                };
                                if m.len() != round.message_length {
                                    return Err(Error::Format(format!("round {i} message has the wrong length")));
                                }
                                tables[i].insert(view_key(input, coin, r, &t), hex::encode(m.to_bytes()));
                                t.extend_from(&m);
                            }
                            if !complete {
                                continue;
                            }
                            let (input, coin) = side(p.output_party());
                            let v = MessageView {
                                input,
                                private_coin: coin,
                                public_coin: r,
                                transcript: &t,
                            };
                            if let Ok(o) = p.output_for(&v) {
                                out.insert(view_key(input, coin, r, &t), o);
                            }
                        }
                    }
                }
            }
        }
        Ok(Self {
            alice_domain: p.alice_domain(),
            bob_domain: p.bob_domain(),
            public_coins: DistDoc::from_dist(p.public_coins().dist()),
            alice_coins: DistDoc::from_dist(p.alice_coins().dist()),
            bob_coins: DistDoc::from_dist(p.bob_coins().dist()),
            rounds: p
                .rounds()
                .iter()
                .zip(tables)
                .map(|(r, table)| RoundDoc {
                    owner: r.owner.into(),
                    length: r.message_length,
                    table,
                })
                .collect(),
            output: OutputDoc {
                party: p.output_party().into(),
                table: out,
            },
        })
    }

    /// Rebuilds a protocol; views missing from a table raise
    /// `UndefinedMessage` when reached.
    pub fn to_protocol(&self) -> Result<ProtocolSpec> {
        let mut b = ProtocolSpec::builder(self.alice_domain, self.bob_domain)
            .public_coins(CoinSpace::new(self.public_coins.to_dist()?))
            .alice_coins(CoinSpace::new(self.alice_coins.to_dist()?))
            .bob_coins(CoinSpace::new(self.bob_coins.to_dist()?));
        for (i, r) in self.rounds.iter().enumerate() {
            let table: Arc<BTreeMap<String, Bits>> = Arc::new(
                r.table
                    .iter()
                    .map(|(k, v)| Ok((k.clone(), bits_from_hex(v, r.length)?)))
                    .collect::<Result<_>>()?,
            );
            b = b.round(r.owner.into(), r.length, move |v| {
                let key = view_key(v.input, v.private_coin, v.public_coin, v.transcript);
                let m = table
                    .get(&key)
                    .ok_or(dyckinfo_core::Error::UndefinedMessage { round: i })?;
                Ok(m.clone())
            });
        }
        let out = Arc::new(self.output.table.clone());
        let rounds = self.rounds.len();
        Ok(b.output(self.output.party.into(), move |v| {
            let key = view_key(v.input, v.private_coin, v.public_coin, v.transcript);
            out.get(&key)
                .copied()
                .ok_or(dyckinfo_core::Error::UndefinedMessage { round: rounds })
        })
        .build()?)
    }
}

pub fn protocol_to_json(p: &ProtocolSpec, budget: Budget) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ProtocolDoc::from_protocol(p, budget)?)?)
}

pub fn protocol_from_json(s: &str) -> Result<ProtocolSpec> {
    serde_json::from_str::<ProtocolDoc>(s)?.to_protocol()
}

// ---------------------------------------------------------------------------
// Quantum protocols

/// A complex matrix as rows of `[re, im]` pairs.
pub type MatrixDoc = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QRoundDoc {
    pub owner: PartyDoc,
    /// Qubits handed over after the unitary.
    pub message: Vec<usize>,
    /// One matrix shared by all inputs, or one per input: Alice's indexed
    /// by `x`, Bob's by `(k, prefix, b)` in increasing `k`, then prefix,
    /// then `b`.
    pub unitaries: Vec<MatrixDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QProtocolDoc {
    pub n: usize,
    pub workspace: usize,
    /// Workspace qubits Alice starts with; the rest start with Bob.
    pub alice_start: Vec<usize>,
    pub rounds: Vec<QRoundDoc>,
    pub output_qubit: usize,
}

fn matrix_doc(m: &CMatrix) -> MatrixDoc {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|col| [m[(r, col)].re, m[(r, col)].im]).collect())
        .collect()
}

fn matrix_from_doc(d: &MatrixDoc) -> Result<CMatrix> {
    let n = d.len();
    if d.iter().any(|row| row.len() != n) {
        return Err(Error::Format("unitary is not square".into()));
    }
    Ok(CMatrix::from_fn(n, n, |r, col| c(d[r][col][0], d[r][col][1])))
}

impl QProtocolDoc {
    pub fn from_spec(p: &QProtocolSpec) -> Self {
        Self {
            n: p.n(),
            workspace: p.workspace(),
            alice_start: p.alice_start().to_vec(),
            rounds: p
                .rounds()
                .iter()
                .map(|r| QRoundDoc {
                    owner: r.owner.into(),
                    message: r.message.clone(),
                    unitaries: r.table.iter().map(matrix_doc).collect(),
                })
                .collect(),
            output_qubit: p.output_qubit(),
        }
    }

    pub fn to_spec(&self) -> Result<QProtocolSpec> {
        let mut b = QProtocolSpec::builder(self.n, self.workspace).alice_owns(&self.alice_start);
        for r in &self.rounds {
            let table = r.unitaries.iter().map(matrix_from_doc).collect::<Result<Vec<_>>>()?;
            b = b.round(r.owner.into(), &r.message, table);
        }
        Ok(b.output(self.output_qubit).build()?)
    }
}

pub fn qprotocol_to_json(p: &QProtocolSpec) -> Result<String> {
    Ok(serde_json::to_string_pretty(&QProtocolDoc::from_spec(p))?)
}

pub fn qprotocol_from_json(s: &str) -> Result<QProtocolSpec> {
    serde_json::from_str::<QProtocolDoc>(s)?.to_spec()
}
