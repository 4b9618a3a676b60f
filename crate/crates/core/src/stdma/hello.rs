//! Wire codec for closeness-bearing HELLO beacons.
//!
//! Link-state HELLO messages are extended to carry closeness centrality:
//! the 16-bit reserved field of the message header becomes the sender's
//! own closeness, and the 8-bit reserved field of each link entry becomes
//! the advertised neighbor's closeness. Scores are fixed-point fractions
//! of the field maximum, so quantization error is bounded by half a step:
//! ≤ 1/131070 for the sender field, ≤ 1/510 per neighbor field.
//!
//! Big-endian layout:
//!
//! ```text
//! originator address    u32
//! closeness             u16   round(closeness · 65535)
//! htime                 u8
//! willingness           u8
//! per advertised link:
//!   link code           u8
//!   neighbor closeness  u8    round(closeness · 255)
//!   link entry size     u16   always 8
//!   neighbor address    u32
//! ```
//!
//! Decoding rejects truncated buffers and link entries whose advertised
//! size differs from the fixed entry layout.

use crate::error::{Error, Result};
use crate::graph::NodeId;

/// Bytes before the first link entry.
pub const HELLO_HEADER_LEN: usize = 8;
/// Bytes per link entry.
pub const LINK_ENTRY_LEN: usize = 8;

/// One advertised link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelloLink {
    /// Link/neighbor type code, passed through untouched.
    pub link_code: u8,
    /// Advertised neighbor.
    pub neighbor: NodeId,
    /// Neighbor's closeness as last heard (quantized to 8 bits on the
    /// wire).
    pub neighbor_closeness: f64,
}

/// A closeness-bearing HELLO beacon.
#[derive(Debug, Clone, PartialEq)]
pub struct HelloMessage {
    /// Sending node.
    pub originator: NodeId,
    /// Sender's own closeness (quantized to 16 bits on the wire).
    pub closeness: f64,
    /// Emission-interval code, passed through untouched.
    pub htime: u8,
    /// Forwarding willingness, passed through untouched.
    pub willingness: u8,
    /// Advertised links.
    pub links: Vec<HelloLink>,
}

fn check_unit(what: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::ValueOutOfRange { what, value });
    }
    Ok(())
}

/// Serialize a message. Closeness values must lie in `[0, 1]`.
pub fn encode_hello(msg: &HelloMessage) -> Result<Vec<u8>> {
    check_unit("closeness", msg.closeness)?;
    for link in &msg.links {
        check_unit("neighbor closeness", link.neighbor_closeness)?;
    }
    let mut out = Vec::with_capacity(HELLO_HEADER_LEN + msg.links.len() * LINK_ENTRY_LEN);
    out.extend_from_slice(&msg.originator.0.to_be_bytes());
    out.extend_from_slice(&((msg.closeness * 65535.0).round() as u16).to_be_bytes());
    out.push(msg.htime);
    out.push(msg.willingness);
    for link in &msg.links {
        out.push(link.link_code);
        out.push((link.neighbor_closeness * 255.0).round() as u8);
        out.extend_from_slice(&(LINK_ENTRY_LEN as u16).to_be_bytes());
        out.extend_from_slice(&link.neighbor.0.to_be_bytes());
    }
    Ok(out)
}

/// Parse a message produced by [`encode_hello`].
///
/// Integer fields come back exactly; closeness values come back as the
/// quantized fractions described in the module docs.
pub fn decode_hello(bytes: &[u8]) -> Result<HelloMessage> {
    if bytes.len() < HELLO_HEADER_LEN {
        return Err(Error::Truncated {
            needed: HELLO_HEADER_LEN,
            got: bytes.len(),
        });
    }
    let body = bytes.len() - HELLO_HEADER_LEN;
    if body % LINK_ENTRY_LEN != 0 {
        return Err(Error::Truncated {
            needed: bytes.len() + (LINK_ENTRY_LEN - body % LINK_ENTRY_LEN),
            got: bytes.len(),
        });
    }
    let originator = NodeId(u32::from_be_bytes(bytes[0..4].try_into().expect("length checked")));
    let closeness =
        u16::from_be_bytes(bytes[4..6].try_into().expect("length checked")) as f64 / 65535.0;
    let htime = bytes[6];
    let willingness = bytes[7];
    let mut links = Vec::with_capacity(body / LINK_ENTRY_LEN);
    for (index, entry) in bytes[HELLO_HEADER_LEN..].chunks_exact(LINK_ENTRY_LEN).enumerate() {
        let size = u16::from_be_bytes(entry[2..4].try_into().expect("length checked"));
        if size != LINK_ENTRY_LEN as u16 {
            return Err(Error::InconsistentLinkSize {
                index,
                expected: LINK_ENTRY_LEN as u16,
                got: size,
            });
        }
        links.push(HelloLink {
            link_code: entry[0],
            neighbor_closeness: entry[1] as f64 / 255.0,
            neighbor: NodeId(u32::from_be_bytes(entry[4..8].try_into().expect("length checked"))),
        });
    }
    Ok(HelloMessage {
        originator,
        closeness,
        htime,
        willingness,
        links,
    })
}
