//! graph6 encoding: the upper triangle read column by column, packed into
//! 6-bit groups offset by 63.

use crate::error::{Error, Result};
use crate::graph::{bit, Graph, MAX_ORDER};

fn header(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        out.push(((n >> 12) & 63) as u8 + 63);
        out.push(((n >> 6) & 63) as u8 + 63);
        out.push((n & 63) as u8 + 63);
    }
}

fn body_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

/// Encodes `g` in graph6, without a trailing newline.
pub fn encode(g: &Graph) -> Vec<u8> {
    let n = g.order();
    let mut out = Vec::with_capacity(4 + body_len(n));
    header(n, &mut out);
    let rows = g.rows();
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        let col = rows[j];
        for i in 0..j {
            acc = (acc << 1) | ((col >> i) & 1) as u8;
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
    out
}

pub fn encode_string(g: &Graph) -> String {
    String::from_utf8(encode(g)).expect("graph6 is ASCII")
}

/// Order encoded by the header, and the header length.
fn decode_header(bytes: &[u8]) -> Result<(usize, usize)> {
    let first = *bytes.first().ok_or_else(|| Error::Graph6("empty input".into()))?;
    match first {
        63..=125 => Ok(((first - 63) as usize, 1)),
        126 => {
            if bytes.len() < 4 || bytes[1] == 126 {
                return Err(Error::Graph6("unsupported or truncated long header".into()));
            }
            let mut n = 0usize;
            for &b in &bytes[1..4] {
                if !(63..=126).contains(&b) {
                    return Err(Error::Graph6(format!("byte {b} outside 63..=126")));
                }
                n = (n << 6) | (b - 63) as usize;
            }
            Ok((n, 4))
        }
        _ => Err(Error::Graph6(format!("invalid header byte {first}"))),
    }
}

/// Decodes one graph6 record (surrounding whitespace is ignored).
pub fn decode(input: &[u8]) -> Result<Graph> {
    let bytes = input.trim_ascii();
    let bytes = bytes.strip_prefix(b">>graph6<<").unwrap_or(bytes);
    let (n, hlen) = decode_header(bytes)?;
    if n > MAX_ORDER {
        return Err(Error::OrderTooLarge(n));
    }
    let body = &bytes[hlen..];
    if body.len() != body_len(n) {
        return Err(Error::Graph6(format!(
            "expected {} data bytes for n={n}, found {}",
            body_len(n),
            body.len()
        )));
    }
    let mut rows = vec![0u64; n];
    let mut k = 0usize;
    let total = n * n.saturating_sub(1) / 2;
    let mut j = 1;
    let mut i = 0;
    for &b in body {
        if !(63..=126).contains(&b) {
            return Err(Error::Graph6(format!("byte {b} outside 63..=126")));
        }
        let chunk = b - 63;
        for shift in (0..6).rev() {
            let on = (chunk >> shift) & 1 == 1;
            if k >= total {
                if on {
                    return Err(Error::Graph6("nonzero padding bits".into()));
                }
                continue;
            }
            if on {
                rows[i] |= bit(j);
                rows[j] |= bit(i);
            }
            k += 1;
            i += 1;
            if i == j {
                j += 1;
                i = 0;
            }
        }
    }
    Ok(Graph::from_rows_unchecked(rows))
}

/// Number of edges encoded by a graph6 record, read straight from the bits.
pub fn edge_count(bytes: &[u8]) -> Result<usize> {
    let (_, hlen) = decode_header(bytes)?;
    Ok(bytes[hlen..].iter().map(|&b| (b - 63).count_ones() as usize).sum())
}

/// Order encoded by a graph6 record.
pub fn order(bytes: &[u8]) -> Result<usize> {
    decode_header(bytes).map(|(n, _)| n)
}
