//! Scalar-linear XOR code for an ICC template and its per-receiver decoders.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::graph::VertexId;
use crate::packet::{self, xor_into, PacketVector};
use crate::template::{Coord, IccTemplate, Labeling, PathId, TemplateError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error("labeling does not cover the template")]
    LabelingMismatch,
    #[error("no packet for message {0}")]
    MissingPacket(VertexId),
    #[error("vertex {0} is not part of the template")]
    NotInTemplate(VertexId),
    #[error("code has no {0} symbol with a payload")]
    MissingSymbol(SymbolKind),
    #[error("unmet dependency: receiver {receiver} needs message {message} as side information")]
    UnmetDependency {
        receiver: VertexId,
        message: VertexId,
    },
    #[error("side packet {0} has the wrong length")]
    SideLength(VertexId),
    #[error("line {line}: {msg}")]
    Listing { line: usize, msg: String },
}

/// Which construction rule produced a coded symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    /// `w_a^i = x_a^i + x_{a+1}^i`.
    PathI {
        path: usize,
        pos: usize,
    },
    /// `w_a^{ij} = x_a^{ij} + x_{a+1}^{ij}`.
    PathII {
        i: usize,
        j: usize,
        pos: usize,
    },
    /// `w_{n_ij}^{ij} = x_{n_ij}^{ij} + x_{q_{i,j}}^j`.
    Bridge {
        i: usize,
        j: usize,
    },
    /// `w'`, the XOR of every Type-I terminal message.
    TerminalSum,
    Uncoded,
    /// Read back from a listing, origin unknown.
    Listed,
}

impl fmt::Display for SymbolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SymbolKind::PathI { path, pos } => write!(f, "w_{pos}^{path}"),
            SymbolKind::PathII { i, j, pos } => write!(f, "w_{pos}^{i}{j}"),
            SymbolKind::Bridge { i, j } => write!(f, "bridge w^{i}{j}"),
            SymbolKind::TerminalSum => write!(f, "w'"),
            SymbolKind::Uncoded => write!(f, "uncoded"),
            SymbolKind::Listed => write!(f, "listed"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedSymbol {
    pub support: BTreeSet<VertexId>,
    pub payload: Option<Vec<u8>>,
    pub kind: SymbolKind,
}

/// An ordered sequence of coded symbols; its length is the broadcast rate.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IndexCode {
    pub symbols: Vec<CodedSymbol>,
}

impl IndexCode {
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn supports(&self) -> Vec<BTreeSet<VertexId>> {
        self.symbols.iter().map(|s| s.support.clone()).collect()
    }

    /// Copy with symbol `idx` removed.
    pub fn without_symbol(&self, idx: usize) -> IndexCode {
        let mut symbols = self.symbols.clone();
        symbols.remove(idx);
        IndexCode { symbols }
    }

    /// One symbol per line: support as `x1+x2+x3`, then the payload in
    /// lowercase hex when present.
    pub fn to_listing(&self) -> String {
        let mut out = String::new();
        for s in &self.symbols {
            let ids: Vec<String> = s.support.iter().map(|v| format!("x{v}")).collect();
            out.push_str(&ids.join("+"));
            if let Some(p) = &s.payload {
                out.push(' ');
                out.push_str(&packet::to_hex(p));
            }
            out.push('\n');
        }
        out
    }

    /// Symbols come back tagged [`SymbolKind::Listed`].
    pub fn from_listing(text: &str) -> Result<IndexCode, CodecError> {
        let mut symbols = Vec::new();
        for (lno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| CodecError::Listing { line: lno + 1, msg };
            let mut fields = line.split_whitespace();
            let support_field = fields.next().expect("line is not empty");
            let mut support = BTreeSet::new();
            for term in support_field.split('+') {
                let id = term
                    .strip_prefix('x')
                    .and_then(|d| d.parse::<usize>().ok())
                    .filter(|&id| id >= 1)
                    .ok_or_else(|| err(format!("bad term {term:?}")))?;
                if !support.insert(id) {
                    return Err(err(format!("message {id} repeated")));
                }
            }
            let payload = match fields.next() {
                None => None,
                Some(h) => Some(packet::from_hex(h).ok_or_else(|| err(format!("bad hex {h:?}")))?),
            };
            if fields.next().is_some() {
                return Err(err("trailing fields".into()));
            }
            symbols.push(CodedSymbol {
                support,
                payload,
                kind: SymbolKind::Listed,
            });
        }
        Ok(IndexCode { symbols })
    }
}

/// The symbol supports of the template code in emission order: Type-I path
/// pairs, Type-II path pairs, bridges, then `w'`. Members are listed in the
/// order the construction XORs them.
pub fn template_symbols(t: &IccTemplate) -> Vec<(SymbolKind, Vec<Coord>)> {
    let mut out = Vec::new();
    for i in 1..=t.k {
        for a in 1..t.type_i[i - 1] {
            out.push((
                SymbolKind::PathI { path: i, pos: a },
                vec![Coord::type_i(i, a), Coord::type_i(i, a + 1)],
            ));
        }
    }
    for (i, j) in t.pairs() {
        for a in 1..t.type_ii_len(i, j) {
            out.push((
                SymbolKind::PathII { i, j, pos: a },
                vec![Coord::type_ii(i, j, a), Coord::type_ii(i, j, a + 1)],
            ));
        }
    }
    for (i, j) in t.pairs() {
        let len = t.type_ii_len(i, j);
        if len >= 1 {
            out.push((
                SymbolKind::Bridge { i, j },
                vec![
                    Coord::type_ii(i, j, len),
                    Coord::type_i(j, t.attachment(i, j)),
                ],
            ));
        }
    }
    out.push((
        SymbolKind::TerminalSum,
        (1..=t.k).map(|i| t.terminal(i)).collect(),
    ));
    out
}

/// `n - k + 1`.
pub fn code_length(t: &IccTemplate) -> Result<usize, TemplateError> {
    t.validate()?;
    Ok(t.vertex_count() - t.k + 1)
}

/// Bit-XOR operations the encoder performs for `t`-bit packets.
pub fn xor_op_count(template: &IccTemplate, t: usize) -> Result<usize, TemplateError> {
    template.validate()?;
    let packet_xors: usize = template_symbols(template)
        .iter()
        .map(|(_, members)| members.len() - 1)
        .sum();
    Ok(packet_xors * t)
}

fn check_labeling(t: &IccTemplate, l: &Labeling) -> Result<(), CodecError> {
    t.validate()?;
    if l.fits(t) {
        Ok(())
    } else {
        Err(CodecError::LabelingMismatch)
    }
}

/// Code supports without payloads.
pub fn encode_supports(t: &IccTemplate, l: &Labeling) -> Result<IndexCode, CodecError> {
    check_labeling(t, l)?;
    let symbols = template_symbols(t)
        .into_iter()
        .map(|(kind, members)| CodedSymbol {
            support: members.iter().map(|&c| l.vertex(c)).collect(),
            payload: None,
            kind,
        })
        .collect();
    Ok(IndexCode { symbols })
}

/// Operation counts recorded by [`encode_counted`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct XorCount {
    /// Whole-packet XORs performed.
    pub packet_xors: usize,
    /// `packet_xors * t`: bit operations, padding excluded.
    pub bit_xors: usize,
}

pub fn encode(t: &IccTemplate, l: &Labeling, x: &PacketVector) -> Result<IndexCode, CodecError> {
    encode_counted(t, l, x).map(|(code, _)| code)
}

/// Encoder that also reports how many XORs it executed.
pub fn encode_counted(
    t: &IccTemplate,
    l: &Labeling,
    x: &PacketVector,
) -> Result<(IndexCode, XorCount), CodecError> {
    check_labeling(t, l)?;
    let mut count = XorCount::default();
    let mut symbols = Vec::new();
    for (kind, members) in template_symbols(t) {
        let ids: Vec<VertexId> = members.iter().map(|&c| l.vertex(c)).collect();
        if let Some(&missing) = ids.iter().find(|&&id| id > x.len()) {
            return Err(CodecError::MissingPacket(missing));
        }
        let mut acc = x.get(ids[0]).to_vec();
        for &id in &ids[1..] {
            xor_into(&mut acc, x.get(id));
            count.packet_xors += 1;
        }
        symbols.push(CodedSymbol {
            support: ids.into_iter().collect(),
            payload: Some(acc),
            kind,
        });
    }
    count.bit_xors = count.packet_xors * x.t();
    Ok((IndexCode { symbols }, count))
}

/// Re-tags listed symbols with their construction rule, checking that the
/// supports are exactly the template code in emission order.
pub fn bind_listing(
    t: &IccTemplate,
    l: &Labeling,
    code: &IndexCode,
) -> Result<IndexCode, CodecError> {
    let expected = encode_supports(t, l)?;
    if expected.len() != code.len() {
        return Err(CodecError::Listing {
            line: code.len().min(expected.len()) + 1,
            msg: format!("expected {} symbols, found {}", expected.len(), code.len()),
        });
    }
    let mut symbols = Vec::with_capacity(code.len());
    for (idx, (want, got)) in expected.symbols.iter().zip(&code.symbols).enumerate() {
        if want.support != got.support {
            return Err(CodecError::Listing {
                line: idx + 1,
                msg: format!("support does not match {}", want.kind),
            });
        }
        symbols.push(CodedSymbol {
            kind: want.kind,
            ..got.clone()
        });
    }
    Ok(IndexCode { symbols })
}

/// Recovers `x_v` from the broadcast and receiver `v`'s side packets.
///
/// Path vertices peel their successor off the adjacent pair symbol. A
/// Type-I terminal `v_{n_i}^i` folds `w'` with the partial path sums of
/// every other path `P_h`: for `n_ih = 0` the sum over `w_a^h`,
/// `a = q_{i,h}..n_h-1`, leaves `x_{q_{i,h}}^h`; for `n_ih >= 1` adding the
/// `P_{i,h}` pair symbols and bridge leaves `x_1^{ih}`. Those residues are
/// side information of the terminal, so cancelling them yields `x_{n_i}^i`.
pub fn decode_receiver(
    t: &IccTemplate,
    l: &Labeling,
    code: &IndexCode,
    v: VertexId,
    side: &BTreeMap<VertexId, Vec<u8>>,
) -> Result<Vec<u8>, CodecError> {
    check_labeling(t, l)?;
    let coord = l.coord_of(v).ok_or(CodecError::NotInTemplate(v))?;
    let symbols: HashMap<SymbolKind, &[u8]> = code
        .symbols
        .iter()
        .filter_map(|s| s.payload.as_deref().map(|p| (s.kind, p)))
        .collect();
    let width = symbols
        .values()
        .next()
        .map(|p| p.len())
        .ok_or(CodecError::MissingSymbol(SymbolKind::TerminalSum))?;
    let mut dec = Chain {
        l,
        symbols,
        side,
        receiver: v,
        acc: vec![0; width],
    };

    match coord.path {
        PathId::TypeI(i) if coord.pos < t.type_i[i - 1] => {
            let a = coord.pos;
            dec.symbol(SymbolKind::PathI { path: i, pos: a })?;
            dec.known(Coord::type_i(i, a + 1))?;
        }
        PathId::TypeI(i) => {
            dec.symbol(SymbolKind::TerminalSum)?;
            for h in (1..=t.k).filter(|&h| h != i) {
                let q = t.attachment(i, h);
                let len = t.type_ii_len(i, h);
                // Partial sum along P_h from the landing point to its terminal.
                for a in q..t.type_i[h - 1] {
                    dec.symbol(SymbolKind::PathI { path: h, pos: a })?;
                }
                if len == 0 {
                    dec.known(Coord::type_i(h, q))?;
                } else {
                    for b in 1..len {
                        dec.symbol(SymbolKind::PathII { i, j: h, pos: b })?;
                    }
                    dec.symbol(SymbolKind::Bridge { i, j: h })?;
                    dec.known(Coord::type_ii(i, h, 1))?;
                }
            }
        }
        PathId::TypeII(i, j) if coord.pos < t.type_ii_len(i, j) => {
            let a = coord.pos;
            dec.symbol(SymbolKind::PathII { i, j, pos: a })?;
            dec.known(Coord::type_ii(i, j, a + 1))?;
        }
        PathId::TypeII(i, j) => {
            dec.symbol(SymbolKind::Bridge { i, j })?;
            dec.known(Coord::type_i(j, t.attachment(i, j)))?;
        }
    }
    Ok(dec.acc)
}

struct Chain<'a> {
    l: &'a Labeling,
    symbols: HashMap<SymbolKind, &'a [u8]>,
    side: &'a BTreeMap<VertexId, Vec<u8>>,
    receiver: VertexId,
    acc: Vec<u8>,
}

impl Chain<'_> {
    fn symbol(&mut self, kind: SymbolKind) -> Result<(), CodecError> {
        let p = self
            .symbols
            .get(&kind)
            .ok_or(CodecError::MissingSymbol(kind))?;
        if p.len() != self.acc.len() {
            return Err(CodecError::MissingSymbol(kind));
        }
        xor_into(&mut self.acc, p);
        Ok(())
    }

    fn known(&mut self, c: Coord) -> Result<(), CodecError> {
        let message = self.l.vertex(c);
        let p = self.side.get(&message).ok_or(CodecError::UnmetDependency {
            receiver: self.receiver,
            message,
        })?;
        if p.len() != self.acc.len() {
            return Err(CodecError::SideLength(message));
        }
        xor_into(&mut self.acc, p);
        Ok(())
    }
}

/// Side packets of receiver `v` drawn from `x` using arcs of `g`.
pub fn side_packets(
    g: &crate::graph::Digraph,
    x: &PacketVector,
    v: VertexId,
) -> BTreeMap<VertexId, Vec<u8>> {
    g.out_neighbors(v)
        .iter()
        .map(|&u| (u, x.get(u).to_vec()))
        .collect()
}
