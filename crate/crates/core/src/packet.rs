//! t-bit message packets stored as zero-padded byte strings.

use std::fmt::Write as _;

use rand::Rng;
use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PacketError {
    #[error("packet length t must be at least 1 bit")]
    ZeroLength,
    #[error("packet {id} has {found} bytes, expected {expected}")]
    WrongLength {
        id: VertexId,
        found: usize,
        expected: usize,
    },
    #[error("packet {id} has nonzero padding bits")]
    DirtyPadding { id: VertexId },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Bytes needed for a `t`-bit packet.
pub fn packet_bytes(t: usize) -> usize {
    t.div_ceil(8)
}

/// Mask for the last byte of a `t`-bit packet (high bits unused).
fn last_byte_mask(t: usize) -> u8 {
    match t % 8 {
        0 => 0xff,
        r => (1u8 << r) - 1,
    }
}

pub fn xor_into(acc: &mut [u8], other: &[u8]) {
    debug_assert_eq!(acc.len(), other.len());
    for (a, b) in acc.iter_mut().zip(other) {
        *a ^= b;
    }
}

pub fn to_hex(bytes: &[u8]) -> String {
    bytes
        .iter()
        .fold(String::with_capacity(bytes.len() * 2), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

pub fn from_hex(s: &str) -> Option<Vec<u8>> {
    if !s.len().is_multiple_of(2) || !s.is_ascii() {
        return None;
    }
    (0..s.len())
        .step_by(2)
        .map(|i| u8::from_str_radix(&s[i..i + 2], 16).ok())
        .collect()
}

/// The `n` source messages, `t` bits each, indexed by 1-based message id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PacketVector {
    t: usize,
    packets: Vec<Vec<u8>>,
}

impl PacketVector {
    pub fn new(t: usize, packets: Vec<Vec<u8>>) -> Result<Self, PacketError> {
        if t == 0 {
            return Err(PacketError::ZeroLength);
        }
        let expected = packet_bytes(t);
        let mask = last_byte_mask(t);
        for (i, p) in packets.iter().enumerate() {
            if p.len() != expected {
                return Err(PacketError::WrongLength {
                    id: i + 1,
                    found: p.len(),
                    expected,
                });
            }
            if p[expected - 1] & !mask != 0 {
                return Err(PacketError::DirtyPadding { id: i + 1 });
            }
        }
        Ok(PacketVector { t, packets })
    }

    pub fn zeros(n: usize, t: usize) -> Self {
        assert!(t >= 1);
        PacketVector {
            t,
            packets: vec![vec![0; packet_bytes(t)]; n],
        }
    }

    /// One-bit packets from a bit pattern; `bits[i]` is message `i + 1`.
    pub fn from_bits(bits: &[u8]) -> Self {
        PacketVector {
            t: 1,
            packets: bits.iter().map(|&b| vec![b & 1]).collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, t: usize, rng: &mut R) -> Self {
        assert!(t >= 1);
        let mask = last_byte_mask(t);
        let packets = (0..n)
            .map(|_| {
                let mut p: Vec<u8> = (0..packet_bytes(t)).map(|_| rng.gen()).collect();
                *p.last_mut().unwrap() &= mask;
                p
            })
            .collect();
        PacketVector { t, packets }
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn len(&self) -> usize {
        self.packets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.packets.is_empty()
    }

    /// Packet of message `id`. Panics when out of range.
    pub fn get(&self, id: VertexId) -> &[u8] {
        &self.packets[id - 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &[u8])> {
        self.packets
            .iter()
            .enumerate()
            .map(|(i, p)| (i + 1, p.as_slice()))
    }

    /// Message-wise XOR with another vector of the same shape.
    pub fn xor(&self, other: &PacketVector) -> PacketVector {
        assert_eq!((self.t, self.len()), (other.t, other.len()));
        let packets = self
            .packets
            .iter()
            .zip(&other.packets)
            .map(|(a, b)| {
                let mut c = a.clone();
                xor_into(&mut c, b);
                c
            })
            .collect();
        PacketVector { t: self.t, packets }
    }

    /// Packet file: header `t=<bits>` then one lowercase hex line per message.
    pub fn to_text(&self) -> String {
        let mut s = format!("t={}\n", self.t);
        for p in &self.packets {
            s.push_str(&to_hex(p));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, PacketError> {
        let (t, entries) = parse_packet_lines(text, false)?;
        let packets = entries
            .into_iter()
            .map(|p| p.expect("no placeholders"))
            .collect();
        PacketVector::new(t, packets)
    }
}

type Packet = Vec<u8>;

/// Parses a packet file. With `allow_absent`, a `-` line marks a message
/// that is not present (used for receiver side-information files).
pub fn parse_packet_lines(
    text: &str,
    allow_absent: bool,
) -> Result<(usize, Vec<Option<Packet>>), PacketError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines.next().ok_or(PacketError::Parse {
        line: 1,
        msg: "missing t=<bits> header".into(),
    })?;
    let t: usize = header
        .trim()
        .strip_prefix("t=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| PacketError::Parse {
            line: hline + 1,
            msg: format!("expected t=<bits>, found {header:?}"),
        })?;
    if t == 0 {
        return Err(PacketError::ZeroLength);
    }
    let expected = packet_bytes(t);
    let mask = last_byte_mask(t);
    let mut out = Vec::new();
    for (lno, raw) in lines {
        let line = raw.trim();
        if allow_absent && line == "-" {
            out.push(None);
            continue;
        }
        let bytes = from_hex(line).ok_or_else(|| PacketError::Parse {
            line: lno + 1,
            msg: format!("invalid hex {line:?}"),
        })?;
        if bytes.len() != expected || bytes[expected - 1] & !mask != 0 {
            return Err(PacketError::Parse {
                line: lno + 1,
                msg: format!("packet does not fit in {t} bits"),
            });
        }
        out.push(Some(bytes));
    }
    Ok((t, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn padding_is_enforced() {
        assert_eq!(packet_bytes(1), 1);
        assert_eq!(packet_bytes(8), 1);
        assert_eq!(packet_bytes(9), 2);
        assert!(PacketVector::new(3, vec![vec![0b111]]).is_ok());
        assert_eq!(
            PacketVector::new(3, vec![vec![0b1000]]),
            Err(PacketError::DirtyPadding { id: 1 })
        );
        assert!(matches!(
            PacketVector::new(8, vec![vec![1, 2]]),
            Err(PacketError::WrongLength {
                id: 1,
                found: 2,
                expected: 1
            })
        ));
        assert_eq!(PacketVector::new(0, vec![]), Err(PacketError::ZeroLength));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for t in [1, 5, 8, 13, 64] {
            let x = PacketVector::random(20, t, &mut rng);
            assert!(PacketVector::new(t, x.packets.clone()).is_ok());
        }
    }

    #[test]
    fn text_format() {
        let x = PacketVector::new(12, vec![vec![0xab, 0x0f], vec![0, 1]]).unwrap();
        assert_eq!(x.to_text(), "t=12\nab0f\n0001\n");
        assert_eq!(PacketVector::from_text(&x.to_text()).unwrap(), x);
        assert!(matches!(
            PacketVector::from_text("t=4\n1f\n"),
            Err(PacketError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            PacketVector::from_text("4\n"),
            Err(PacketError::Parse { line: 1, .. })
        ));
        let (t, side) = parse_packet_lines("t=8\n-\nff\n", true).unwrap();
        assert_eq!((t, side), (8, vec![None, Some(vec![0xff])]));
        assert!(PacketVector::from_text("t=8\n-\n").is_err());
    }
}
