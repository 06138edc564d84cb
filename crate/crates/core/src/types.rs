//! Shared vocabulary: node identifiers, messages, simulated time and the
//! canonical wire encoding used between nodes.

use std::fmt;
use std::hash::Hasher;

use fnv::FnvHasher;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Highest hop count a message may ever carry.
pub const MAX_HOPS: u8 = 127;

/// Size of the fixed wire header preceding the payload.
pub const WIRE_HEADER_LEN: usize = 12;

/// Sequential, human-labelable node identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u16);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u16> for NodeId {
    fn from(v: u16) -> Self {
        NodeId(v)
    }
}

/// Simulated time in milliseconds.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct SimTime(pub u64);

impl SimTime {
    pub const ZERO: SimTime = SimTime(0);

    pub fn ms(self) -> u64 {
        self.0
    }

    pub fn after(self, delta_ms: u64) -> SimTime {
        SimTime(self.0.saturating_add(delta_ms))
    }
}

impl fmt::Display for SimTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}ms", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MessageKind {
    Heartbeat,
    Data,
    Command,
    StatsReport,
    Ack,
}

impl MessageKind {
    pub fn code(self) -> u8 {
        match self {
            MessageKind::Heartbeat => 0,
            MessageKind::Data => 1,
            MessageKind::Command => 2,
            MessageKind::StatsReport => 3,
            MessageKind::Ack => 4,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Some(match code {
            0 => MessageKind::Heartbeat,
            1 => MessageKind::Data,
            2 => MessageKind::Command,
            3 => MessageKind::StatsReport,
            4 => MessageKind::Ack,
            _ => return None,
        })
    }

    /// Heartbeats double as route discovery messages.
    pub fn is_discovery(self) -> bool {
        self == MessageKind::Heartbeat
    }
}

/// Identity of a logical message, ordered by origin then sequence number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MessageKey {
    pub origin: NodeId,
    pub seq: u32,
}

impl MessageKey {
    pub fn new(origin: impl Into<NodeId>, seq: u32) -> Self {
        MessageKey {
            origin: origin.into(),
            seq,
        }
    }
}

/// One frame exchanged on the mesh.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Message {
    pub kind: MessageKind,
    pub origin: NodeId,
    pub seq: u32,
    pub hops: u8,
    /// Immediate previous transmitter.
    pub sender: NodeId,
    pub payload: Vec<u8>,
}

impl Message {
    /// A freshly originated message: zero hops, sent by its creator.
    pub fn originate(kind: MessageKind, origin: NodeId, seq: u32, payload: Vec<u8>) -> Self {
        Message {
            kind,
            origin,
            seq,
            hops: 0,
            sender: origin,
            payload,
        }
    }

    pub fn key(&self) -> MessageKey {
        MessageKey {
            origin: self.origin,
            seq: self.seq,
        }
    }

    /// Hash used by the relay cache. Hop count and sender are excluded so that
    /// copies of one message arriving over different paths collide.
    pub fn relay_hash(&self) -> u64 {
        message_hash(&self.payload, self.origin, self.seq)
    }

    /// Copy of this message as re-emitted by `relay` one hop further along.
    pub fn forwarded_by(&self, relay: NodeId) -> Message {
        Message {
            hops: self.hops.saturating_add(1),
            sender: relay,
            ..self.clone()
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(WIRE_HEADER_LEN + self.payload.len());
        self.encode_into(&mut out);
        out
    }

    pub fn encode_into(&self, out: &mut Vec<u8>) {
        debug_assert!(self.payload.len() <= u16::MAX as usize);
        out.push(self.kind.code());
        out.extend_from_slice(&self.origin.0.to_be_bytes());
        out.extend_from_slice(&self.seq.to_be_bytes());
        out.push(self.hops);
        out.extend_from_slice(&self.sender.0.to_be_bytes());
        out.extend_from_slice(&(self.payload.len() as u16).to_be_bytes());
        out.extend_from_slice(&self.payload);
    }

    pub fn decode(buf: &[u8]) -> Result<Message, WireError> {
        if buf.len() < WIRE_HEADER_LEN {
            return Err(WireError::Truncated {
                needed: WIRE_HEADER_LEN,
                got: buf.len(),
            });
        }
        let kind = MessageKind::from_code(buf[0]).ok_or(WireError::UnknownKind(buf[0]))?;
        let origin = NodeId(u16::from_be_bytes([buf[1], buf[2]]));
        let seq = u32::from_be_bytes([buf[3], buf[4], buf[5], buf[6]]);
        let hops = buf[7];
        if hops > MAX_HOPS {
            return Err(WireError::HopsOutOfRange(hops));
        }
        let sender = NodeId(u16::from_be_bytes([buf[8], buf[9]]));
        let len = u16::from_be_bytes([buf[10], buf[11]]) as usize;
        let body = &buf[WIRE_HEADER_LEN..];
        if body.len() < len {
            return Err(WireError::Truncated {
                needed: WIRE_HEADER_LEN + len,
                got: buf.len(),
            });
        }
        if body.len() > len {
            return Err(WireError::TrailingBytes(body.len() - len));
        }
        Ok(Message {
            kind,
            origin,
            seq,
            hops,
            sender,
            payload: body.to_vec(),
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WireError {
    #[error("frame truncated: need {needed} bytes, got {got}")]
    Truncated { needed: usize, got: usize },
    #[error("unknown message kind {0:#04x}")]
    UnknownKind(u8),
    #[error("hop count {0} exceeds the 127 limit")]
    HopsOutOfRange(u8),
    #[error("{0} trailing bytes after payload")]
    TrailingBytes(usize),
}

/// Stable 64-bit FNV-1a over origin (BE), seq (BE) and payload.
pub fn message_hash(payload: &[u8], origin: NodeId, seq: u32) -> u64 {
    let mut h = FnvHasher::default();
    h.write(&origin.0.to_be_bytes());
    h.write(&seq.to_be_bytes());
    h.write(payload);
    h.finish()
}
