//! Label payloads: a `u32` count, then per label `side: u8`, `v: u32`,
//! `hub: u32`, `dist: u64`, little-endian.

use hublab_core::{HubLabel, Side, Vertex};

pub const HEADER_BYTES: usize = 4;
pub const LABEL_BYTES: usize = 17;

pub type WireLabel = (Side, Vertex, HubLabel);

pub fn encode_labels(labels: &[WireLabel]) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_BYTES + LABEL_BYTES * labels.len());
    out.extend((labels.len() as u32).to_le_bytes());
    for &(side, v, l) in labels {
        out.push(side as u8);
        out.extend(v.to_le_bytes());
        out.extend(l.hub.to_le_bytes());
        out.extend(l.dist.to_le_bytes());
    }
    out
}

pub fn decode_labels(bytes: &[u8]) -> Vec<WireLabel> {
    let count = u32::from_le_bytes(bytes[..HEADER_BYTES].try_into().expect("label payload header")) as usize;
    let body = &bytes[HEADER_BYTES..];
    assert_eq!(body.len(), count * LABEL_BYTES, "label payload length");
    body.chunks_exact(LABEL_BYTES)
        .map(|c| {
            let side = Side::from_index(c[0] as usize);
            let v = u32::from_le_bytes(c[1..5].try_into().unwrap());
            let hub = u32::from_le_bytes(c[5..9].try_into().unwrap());
            let dist = u64::from_le_bytes(c[9..17].try_into().unwrap());
            (side, v, HubLabel::new(hub, dist))
        })
        .collect()
}
