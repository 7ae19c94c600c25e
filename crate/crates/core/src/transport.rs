//! Simulated three-party network.
//!
//! Time is a logical clock: every value carries the round after which it is
//! available, and a message sent after round `r` is readable in round `r + 1`.
//! Messages sent in the same phase by independent sub-protocols therefore
//! share a round, and [`CostMeter::rounds`] is the latest delivery round.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Settings;
use crate::error::{Error, Result};
use crate::ring::{self, bit_len, KeyShare, RingParams, Round, Scheme, SecretId, SharedSecret};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PartyId {
    Kh,
    Evh,
    He,
}

impl PartyId {
    pub const ALL: [PartyId; 3] = [PartyId::Kh, PartyId::Evh, PartyId::He];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for PartyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartyId::Kh => "KH",
            PartyId::Evh => "EVH",
            PartyId::He => "HE",
        })
    }
}

/// What a payload reveals about a tracked secret.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Label {
    Ciphertext(SecretId),
    Key(SecretId),
    /// Blinded or derived data not equal to either half of a tracked secret.
    Opaque,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViewKind {
    Ciphertext,
    Key,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    pub from: PartyId,
    pub to: PartyId,
    pub round: Round,
    pub payload_bits: u32,
    /// Field values in send order; each fits its declared width.
    pub payload: Vec<u128>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CostMeter {
    pub rounds: Round,
    bits: [[u64; 3]; 3],
}

impl CostMeter {
    pub fn bits(&self, from: PartyId, to: PartyId) -> u64 {
        self.bits[from.index()][to.index()]
    }

    pub fn total_bits(&self) -> u64 {
        self.bits.iter().flatten().sum()
    }

    /// Non-zero per-pair totals.
    pub fn by_pair(&self) -> Vec<(PartyId, PartyId, u64)> {
        PartyId::ALL
            .iter()
            .flat_map(|&from| PartyId::ALL.iter().map(move |&to| (from, to)))
            .map(|(from, to)| (from, to, self.bits(from, to)))
            .filter(|&(_, _, bits)| bits > 0)
            .collect()
    }

    fn add(&mut self, from: PartyId, to: PartyId, bits: u32) {
        self.bits[from.index()][to.index()] += u64::from(bits);
    }
}

/// Everything one party has received or generated, by secret. Ids are
/// handed out sequentially by the network, so the view is a flag per id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartyView {
    flags: Vec<u8>,
}

impl ViewKind {
    fn flag(self) -> u8 {
        match self {
            ViewKind::Ciphertext => 1,
            ViewKind::Key => 2,
        }
    }
}

impl PartyView {
    pub fn contains(&self, id: SecretId, kind: ViewKind) -> bool {
        self.flags.get(id.0 as usize).is_some_and(|f| f & kind.flag() != 0)
    }

    /// Number of (secret, half) items held.
    pub fn len(&self) -> usize {
        self.flags.iter().map(|f| f.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.iter().all(|&f| f == 0)
    }

    fn insert(&mut self, id: SecretId, kind: ViewKind) {
        let index = id.0 as usize;
        if index >= self.flags.len() {
            self.flags.resize(index + 1, 0);
        }
        self.flags[index] |= kind.flag();
    }

    fn paired(&self) -> impl Iterator<Item = SecretId> + '_ {
        self.flags.iter().enumerate().filter(|(_, &f)| f == 3).map(|(id, _)| SecretId(id as u64))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Violation {
    pub party: PartyId,
    pub secret_id: SecretId,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} holds ciphertext and key of {}", self.party, self.secret_id)
    }
}

/// Pre-shared randomness channels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pair {
    KhEvh,
    KhHe,
    EvhHe,
}

impl Pair {
    fn index(self) -> usize {
        self as usize
    }

    fn parties(self) -> (PartyId, PartyId) {
        match self {
            Pair::KhEvh => (PartyId::Kh, PartyId::Evh),
            Pair::KhHe => (PartyId::Kh, PartyId::He),
            Pair::EvhHe => (PartyId::Evh, PartyId::He),
        }
    }
}

/// One protocol run: clocks, meters, views and the parties' randomness.
pub struct Network {
    settings: Settings,
    meter: CostMeter,
    views: [PartyView; 3],
    local_rngs: [ChaCha8Rng; 3],
    shared_rngs: [ChaCha8Rng; 3],
    next_id: u64,
    messages: Vec<Message>,
}

fn derive_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn uniform<R: Rng>(rng: &mut R, bits: u32) -> u128 {
    rng.gen::<u128>() & ring::mask(bits)
}

impl Network {
    pub fn new(seed: u64, settings: Settings) -> Result<Self> {
        settings.validate()?;
        Ok(Self {
            settings,
            meter: CostMeter::default(),
            views: Default::default(),
            local_rngs: [derive_rng(seed, 1), derive_rng(seed, 2), derive_rng(seed, 3)],
            shared_rngs: [derive_rng(seed, 4), derive_rng(seed, 5), derive_rng(seed, 6)],
            next_id: 0,
            messages: Vec::new(),
        })
    }

    pub fn with_seed(seed: u64) -> Self {
        Self::new(seed, Settings::default()).expect("default settings are valid")
    }

    pub fn settings(&self) -> &Settings {
        &self.settings
    }

    pub fn meter(&self) -> &CostMeter {
        &self.meter
    }

    pub fn view(&self, party: PartyId) -> &PartyView {
        &self.views[party.index()]
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    /// Uniform `bits`-bit value from `party`'s private generator.
    pub fn local(&mut self, party: PartyId, bits: u32) -> u128 {
        uniform(&mut self.local_rngs[party.index()], bits)
    }

    /// Uniform value in `[0, bound)` from `party`'s private generator.
    pub fn local_below(&mut self, party: PartyId, bound: u128) -> u128 {
        self.local_rngs[party.index()].gen_range(0..bound)
    }

    /// Uniform `bits`-bit value known to both parties of `pair`.
    pub fn preshared(&mut self, pair: Pair, bits: u32) -> u128 {
        if self.settings.meter_preshared {
            let (from, to) = pair.parties();
            self.meter.add(from, to, bits);
        }
        uniform(&mut self.shared_rngs[pair.index()], bits)
    }

    /// `n` pre-shared bits, for pads longer than one machine word.
    pub fn preshared_bits(&mut self, pair: Pair, n: usize) -> Vec<bool> {
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let chunk = (n - out.len()).min(128) as u32;
            let word = self.preshared(pair, chunk);
            out.extend((0..chunk).map(|i| ring::bit(word, i) == 1));
        }
        out
    }

    /// Records that a field already sent to `party` equals one half of a
    /// tracked secret. Used when one message carries several labelled fields.
    pub fn note(&mut self, party: PartyId, label: Label) {
        match label {
            Label::Ciphertext(id) => self.views[party.index()].insert(id, ViewKind::Ciphertext),
            Label::Key(id) => self.views[party.index()].insert(id, ViewKind::Key),
            Label::Opaque => {}
        }
    }

    /// Sends `fields` (value, declared width) after round `after`; returns the
    /// delivery round.
    pub fn send(&mut self, from: PartyId, to: PartyId, after: Round, fields: &[(u128, u32)], label: Label) -> Result<Round> {
        let mut payload_bits = 0u32;
        for &(value, width) in fields {
            if bit_len(value) > width {
                return Err(Error::WidthMismatch { declared: width, actual: bit_len(value) });
            }
            payload_bits += width;
        }
        let round = after + 1;
        self.meter.add(from, to, payload_bits);
        self.meter.rounds = self.meter.rounds.max(round);
        self.note(to, label);
        if self.settings.record_messages {
            self.messages.push(Message { from, to, round, payload_bits, payload: fields.iter().map(|f| f.0).collect() });
        }
        Ok(round)
    }

    /// Single-field convenience wrapper for [`send`](Self::send).
    pub fn send_value(&mut self, from: PartyId, to: PartyId, after: Round, value: u128, width: u32) -> Result<Round> {
        self.send(from, to, after, &[(value, width)], Label::Opaque)
    }

    /// Closes the phase that started after `after`.
    pub fn round_barrier(&mut self, after: Round) -> Round {
        let round = after + 1;
        self.meter.rounds = self.meter.rounds.max(round);
        round
    }

    fn fresh_id(&mut self) -> SecretId {
        self.next_id += 1;
        SecretId(self.next_id)
    }

    /// Registers a protocol output: `e` lands at the EVH and `k` at the KH.
    pub fn share(&mut self, e: u128, k: u128, scheme: Scheme, ring: RingParams, ready: Round) -> SharedSecret {
        let id = self.fresh_id();
        self.views[PartyId::Evh.index()].insert(id, ViewKind::Ciphertext);
        self.views[PartyId::Kh.index()].insert(id, ViewKind::Key);
        let ciphertext = ring::Ciphertext { value: e, scheme, ring, secret_id: id };
        let key = KeyShare { value: k, scheme, ring, secret_id: id };
        SharedSecret { ciphertext, key, ready }
    }

    /// Encrypts a harness input under a fresh uniform KH key.
    pub fn input(&mut self, a: u128, scheme: Scheme, ring: RingParams) -> Result<SharedSecret> {
        let k = uniform(&mut self.local_rngs[PartyId::Kh.index()], 128) & (ring.key_bound(scheme) - 1);
        self.input_with_key(a, k, scheme, ring)
    }

    /// Encrypts a harness input under a caller-chosen key.
    pub fn input_with_key(&mut self, a: u128, k: u128, scheme: Scheme, ring: RingParams) -> Result<SharedSecret> {
        ring.validate()?;
        let key = KeyShare { value: k, scheme, ring, secret_id: SecretId(0) };
        let e = ring::encrypt(a, &key)?.value;
        Ok(self.share(e, k, scheme, ring, 0))
    }

    /// Public constant: ciphertext `a`, key 0.
    pub fn constant(&mut self, a: u128, scheme: Scheme, ring: RingParams) -> SharedSecret {
        self.share(a & ring.mask(), 0, scheme, ring, 0)
    }

    /// Test-harness decryption; bypasses the views.
    pub fn decrypt(&self, x: &SharedSecret) -> u128 {
        ring::raw_decrypt(x.scheme(), x.ring(), x.e(), x.k())
    }

    /// Signed harness decryption in the secret's ring.
    pub fn decrypt_signed(&self, x: &SharedSecret) -> i128 {
        match x.scheme() {
            Scheme::PureAdditive => x.e() as i128 - x.k() as i128,
            _ => ring::to_signed(self.decrypt(x), x.bits()),
        }
    }

    pub fn violations(&self) -> Vec<Violation> {
        PartyId::ALL
            .iter()
            .flat_map(|&party| self.views[party.index()].paired().map(move |secret_id| Violation { party, secret_id }))
            .collect()
    }

    pub fn assert_views_legal(&self) -> std::result::Result<(), Vec<Violation>> {
        let violations = self.violations();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }
}
