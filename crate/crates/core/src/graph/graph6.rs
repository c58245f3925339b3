//! graph6 encoding (McKay's format), short and 18-bit long headers.

use super::{Graph, GraphError};

/// Largest order representable with the 18-bit long header.
pub const GRAPH6_MAX_ORDER: usize = 258_047;

const SHORT_MAX: usize = 62;

fn err(offset: usize, reason: impl Into<String>) -> GraphError {
    GraphError::Graph6 {
        offset,
        reason: reason.into(),
    }
}

/// Decodes one graph6 line. A trailing `\n` (or `\r\n`) is accepted.
pub fn parse_graph6(text: &[u8]) -> Result<Graph, GraphError> {
    let mut text = text;
    while let Some((&last, rest)) = text.split_last() {
        if last == b'\n' || last == b'\r' {
            text = rest;
        } else {
            break;
        }
    }
    if let Some(rest) = text.strip_prefix(b">>graph6<<") {
        text = rest;
    }
    let header_offset = 0;
    for (i, &b) in text.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(err(i, format!("byte {b:#04x} outside the printable range 63..=126")));
        }
    }
    let (n, payload_start) = match text.first() {
        None => return Err(err(header_offset, "empty input")),
        Some(&126) => {
            if text.get(1) == Some(&126) {
                return Err(err(1, "8-byte headers (n > 258047) are not supported"));
            }
            if text.len() < 4 {
                return Err(err(text.len(), "truncated long-form header"));
            }
            let n = text[1..4]
                .iter()
                .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            if n <= SHORT_MAX {
                return Err(err(1, format!("long-form header encodes n = {n} which needs the short form")));
            }
            (n, 4)
        }
        Some(&b) => ((b - 63) as usize, 1),
    };

    let pairs = n * n.saturating_sub(1) / 2;
    let needed = pairs.div_ceil(6);
    let payload = &text[payload_start..];
    if payload.len() < needed {
        return Err(err(text.len(), format!("truncated payload: {needed} bytes needed, {} present", payload.len())));
    }
    if payload.len() > needed {
        return Err(err(payload_start + needed, "trailing bytes after payload"));
    }

    let mut g = Graph::empty(n);
    let mut k = 0;
    'outer: for v in 1..n {
        for u in 0..v {
            let byte = payload[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.add_edge(u, v);
            }
            k += 1;
            if k == pairs {
                break 'outer;
            }
        }
    }
    if pairs % 6 != 0 {
        let last = payload[needed - 1] - 63;
        let pad_bits = 6 - pairs % 6;
        if last & ((1 << pad_bits) - 1) != 0 {
            return Err(err(payload_start + needed - 1, "nonzero padding bits"));
        }
    }
    Ok(g)
}

/// Canonical graph6 encoding without a trailing newline.
pub fn write_graph6(g: &Graph) -> Result<Vec<u8>, GraphError> {
    let n = g.order();
    if n > GRAPH6_MAX_ORDER {
        return Err(GraphError::OrderOutOfRange(n));
    }
    let pairs = n * n.saturating_sub(1) / 2;
    let mut out = Vec::with_capacity(4 + pairs.div_ceil(6));
    if n <= SHORT_MAX {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            acc = (acc << 1) | g.has_edge(u, v) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    Ok(out)
}

/// Convenience wrapper returning a `String`.
pub fn graph6_string(g: &Graph) -> Result<String, GraphError> {
    // graph6 bytes are all printable ASCII.
    write_graph6(g).map(|b| String::from_utf8(b).expect("graph6 is ASCII"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, empty, path};
    use proptest::prelude::*;

    #[test]
    fn hand_encoded_examples() {
        assert_eq!(parse_graph6(b"D??").unwrap(), empty(5));
        assert_eq!(parse_graph6(b"Bw").unwrap(), complete(3));
        assert_eq!(parse_graph6(b"Bg\n").unwrap(), path(3));
        assert_eq!(write_graph6(&empty(5)).unwrap(), b"D??");
        assert_eq!(write_graph6(&complete(3)).unwrap(), b"Bw");
        assert_eq!(write_graph6(&empty(1)).unwrap(), b"@");
        assert_eq!(write_graph6(&empty(0)).unwrap(), b"?");
    }

    #[test]
    fn long_form_header() {
        let g = complete(103);
        let enc = write_graph6(&g).unwrap();
        // 103 = 0b000001_100111 in three 6-bit groups: 0, 1, 39.
        assert_eq!(&enc[..4], &[126, 63, 64, 63 + 39]);
        assert_eq!(enc.len(), 4 + (103 * 102 / 2usize).div_ceil(6));
        assert_eq!(parse_graph6(&enc).unwrap(), g);
    }

    #[test]
    fn malformed_inputs_report_offsets() {
        assert!(matches!(parse_graph6(b""), Err(GraphError::Graph6 { offset: 0, .. })));
        assert!(matches!(parse_graph6(b"D?"), Err(GraphError::Graph6 { offset: 2, .. })));
        assert!(matches!(parse_graph6(b"B\x20"), Err(GraphError::Graph6 { offset: 1, .. })));
        assert!(matches!(parse_graph6(b"Bw?"), Err(GraphError::Graph6 { offset: 2, .. })));
        assert!(matches!(parse_graph6(b"~?"), Err(GraphError::Graph6 { .. })));
        // "Bx" sets a padding bit.
        assert!(matches!(parse_graph6(b"Bx"), Err(GraphError::Graph6 { offset: 1, .. })));
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..=70).prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
                let mut g = Graph::empty(n);
                let mut k = 0;
                for v in 1..n {
                    for u in 0..v {
                        if bits[k] {
                            g.add_edge(u, v);
                        }
                        k += 1;
                    }
                }
                g
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn round_trip(g in arb_graph()) {
            let enc = write_graph6(&g).unwrap();
            prop_assert_eq!(parse_graph6(&enc).unwrap(), g);
        }
    }
}
