//! On-disk formats: matrix fixtures, redundancy files, manifests and hex
//! dumps of bit strings.

use std::fmt::Write as _;

use boolmv_core::structure::{deserialize_redundancy_prefix, serialize_redundancy};
use boolmv_core::{BitMatrix, BitString, Redundancy};

use crate::error::{BenchError, Result};

/// Leading byte of a redundancy file.
pub const REDUNDANCY_FORMAT_TAG: u8 = 1;
pub const MANIFEST_FORMAT_VERSION: u32 = 1;

fn format_err(msg: impl Into<String>) -> BenchError {
    BenchError::Format(msg.into())
}

/// First line `n`, then `n` lines of `n` characters from `{0, 1}`.
pub fn write_matrix_text(m: &BitMatrix) -> String {
    let n = m.dim();
    let mut out = String::with_capacity((n + 1) * (n + 1));
    let _ = writeln!(out, "{n}");
    for i in 0..n {
        out.extend((0..n).map(|j| if m.get(i, j) { '1' } else { '0' }));
        out.push('\n');
    }
    out
}

pub fn parse_matrix_text(text: &str) -> Result<BitMatrix> {
    let mut lines = text.lines().map(str::trim_end).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| format_err("empty matrix file"))?;
    let n: usize = header.trim().parse().map_err(|_| format_err(format!("bad dimension line {header:?}")))?;
    let mut rows = Vec::with_capacity(n);
    for (i, line) in lines.by_ref().take(n).enumerate() {
        if line.len() != n {
            return Err(format_err(format!("row {i} has {} characters, expected {n}", line.len())));
        }
        let row = line
            .bytes()
            .map(|c| match c {
                b'0' => Ok(false),
                b'1' => Ok(true),
                _ => Err(format_err(format!("row {i} contains {:?}", c as char))),
            })
            .collect::<Result<Vec<bool>>>()?;
        rows.push(row);
    }
    if rows.len() != n {
        return Err(format_err(format!("expected {n} rows, found {}", rows.len())));
    }
    if lines.next().is_some() {
        return Err(format_err("trailing lines after matrix"));
    }
    Ok(BitMatrix::from_rows(&rows)?)
}

/// 8-byte little-endian `n`, then `ceil(n^2/8)` bytes, row-major, bit `p`
/// of the matrix in byte `p/8` at bit `p mod 8`.
pub fn write_matrix_binary(m: &BitMatrix) -> Vec<u8> {
    let mut out = (m.dim() as u64).to_le_bytes().to_vec();
    out.extend(m.as_bit_string().to_bytes());
    out
}

pub fn parse_matrix_binary(bytes: &[u8]) -> Result<BitMatrix> {
    let head: [u8; 8] = bytes
        .get(..8)
        .and_then(|h| h.try_into().ok())
        .ok_or_else(|| format_err("binary matrix shorter than its 8-byte header"))?;
    let n = usize::try_from(u64::from_le_bytes(head)).map_err(|_| format_err("dimension overflows usize"))?;
    let len = n.checked_mul(n).ok_or_else(|| format_err("dimension too large"))?;
    let body = &bytes[8..];
    if body.len() != len.div_ceil(8) {
        return Err(format_err(format!("expected {} body bytes for n={n}, found {}", len.div_ceil(8), body.len())));
    }
    let bits = BitString::from_bytes(body, len)?;
    Ok(BitMatrix::from_bit_string(n, bits)?)
}

/// Format tag, then the serialized structure packed LSB-first.
pub fn write_redundancy_file(r: &Redundancy) -> Result<Vec<u8>> {
    let bits = serialize_redundancy(r)?;
    let mut out = vec![REDUNDANCY_FORMAT_TAG];
    out.extend(bits.to_bytes());
    Ok(out)
}

pub fn read_redundancy_file(bytes: &[u8], n: usize, w: u32) -> Result<Redundancy> {
    let (&tag, body) = bytes.split_first().ok_or_else(|| format_err("empty redundancy file"))?;
    if tag != REDUNDANCY_FORMAT_TAG {
        return Err(format_err(format!("unknown redundancy format tag {tag}")));
    }
    let bits = BitString::from_bytes(body, body.len() * 8)?;
    let (r, used) = deserialize_redundancy_prefix(&bits, n, w)?;
    if used.div_ceil(8) != body.len() || (used..bits.len()).any(|p| bits.get(p)) {
        return Err(format_err("redundancy file has trailing data"));
    }
    Ok(r)
}

/// `key=value` lines, `format_version` first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    entries: Vec<(String, String)>,
}

impl Manifest {
    pub fn new() -> Self {
        Self { entries: vec![("format_version".into(), MANIFEST_FORMAT_VERSION.to_string())] }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        let value = value.to_string();
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(entry) => entry.1 = value,
            None => self.entries.push((key.to_string(), value)),
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (k, v) = line.split_once('=').ok_or_else(|| format_err(format!("manifest line {line:?} lacks '='")))?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() || entries.iter().any(|(e, _): &(String, String)| e == k) {
                return Err(format_err(format!("empty or repeated key {k:?}")));
            }
            entries.push((k.to_string(), v.to_string()));
        }
        let m = Self { entries };
        match m.get("format_version").map(str::parse::<u32>) {
            Some(Ok(MANIFEST_FORMAT_VERSION)) => Ok(m),
            Some(_) => Err(format_err("unsupported manifest format_version")),
            None => Err(format_err("manifest lacks format_version")),
        }
    }
}

impl Default for Manifest {
    fn default() -> Self {
        Self::new()
    }
}

impl std::fmt::Display for Manifest {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

const HEX_LINE: usize = 64;

/// `bits=<len>` header, then the bits packed MSB-first into bytes and
/// written as lowercase hex, 64 digits per line. The final byte is zero
/// padded.
pub fn write_hex_dump(bits: &BitString) -> String {
    let mut bytes = vec![0u8; bits.len().div_ceil(8)];
    for p in bits.iter_ones() {
        bytes[p / 8] |= 0x80 >> (p % 8);
    }
    let digits = hex::encode(bytes);
    let mut out = format!("bits={}\n", bits.len());
    for chunk in digits.as_bytes().chunks(HEX_LINE) {
        out.push_str(std::str::from_utf8(chunk).expect("hex is ascii"));
        out.push('\n');
    }
    out
}

pub fn parse_hex_dump(text: &str) -> Result<BitString> {
    let mut lines = text.lines().map(str::trim);
    let header = lines.next().ok_or_else(|| format_err("empty hex dump"))?;
    let len: usize = header
        .strip_prefix("bits=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| format_err(format!("bad hex dump header {header:?}")))?;
    let digits: String = lines.collect();
    let bytes = hex::decode(&digits).map_err(|e| format_err(format!("bad hex digits: {e}")))?;
    if bytes.len() != len.div_ceil(8) {
        return Err(format_err(format!("{len} bits need {} bytes, found {}", len.div_ceil(8), bytes.len())));
    }
    let mut out = BitString::zeros(len);
    for (p, byte) in bytes.iter().enumerate() {
        for b in 0..8 {
            if byte & (0x80 >> b) != 0 {
                let pos = p * 8 + b;
                if pos >= len {
                    return Err(format_err("nonzero padding bits in hex dump"));
                }
                out.set(pos, true);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use boolmv_core::structure::preprocess_exact;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn text_fixture() {
        let m = BitMatrix::from_rows(&[[true, false, false], [false, false, true], [true, true, false]]).unwrap();
        let text = write_matrix_text(&m);
        assert_eq!(text, "3\n100\n001\n110\n");
        assert_eq!(parse_matrix_text(&text).unwrap(), m);
        assert!(parse_matrix_text("2\n10\n1\n").is_err());
        assert!(parse_matrix_text("2\n10\n12\n").is_err());
        assert!(parse_matrix_text("2\n10\n01\n11\n").is_err());
        assert!(parse_matrix_text("").is_err());
    }

    #[test]
    fn binary_fixture_layout() {
        // (0,0) and (2,0) set: positions 0 and 6 of a 3x3 matrix
        let mut m = BitMatrix::zeros(3).unwrap();
        m.set(0, 0, true);
        m.set(2, 0, true);
        let bytes = write_matrix_binary(&m);
        assert_eq!(bytes, vec![3, 0, 0, 0, 0, 0, 0, 0, 0b0100_0001, 0]);
        assert_eq!(parse_matrix_binary(&bytes).unwrap(), m);
        assert!(parse_matrix_binary(&bytes[..9]).is_err());
        assert!(parse_matrix_binary(&[1, 2]).is_err());
    }

    #[test]
    fn redundancy_file_round_trip() {
        let m = BitMatrix::zeros(4).unwrap();
        let r = preprocess_exact(&m, 8).unwrap();
        let bytes = write_redundancy_file(&r).unwrap();
        assert_eq!(bytes[0], REDUNDANCY_FORMAT_TAG);
        assert_eq!(read_redundancy_file(&bytes, 4, 8).unwrap(), r);
        let mut wrong_tag = bytes.clone();
        wrong_tag[0] = 9;
        assert!(read_redundancy_file(&wrong_tag, 4, 8).is_err());
        let mut longer = bytes.clone();
        longer.push(0);
        assert!(read_redundancy_file(&longer, 4, 8).is_err());
    }

    #[test]
    fn manifest_round_trip() {
        let mut m = Manifest::new();
        m.set("n", 8).set("r", 8).set("mode", "exact").set("t_budget", 41);
        let text = m.to_string();
        assert!(text.starts_with("format_version=1\n"));
        assert_eq!(Manifest::parse(&text).unwrap(), m);
        assert_eq!(Manifest::parse(&text).unwrap().get("t_budget"), Some("41"));
        assert!(Manifest::parse("n=8\n").is_err());
        assert!(Manifest::parse("format_version=1\nn=8\nn=9\n").is_err());
        assert!(Manifest::parse("format_version=2\n").is_err());
    }

    #[test]
    fn hex_dump_layout() {
        let bits = BitString::from_bools([true, false, true, true, false, false, false, false, true]);
        let dump = write_hex_dump(&bits);
        assert_eq!(dump, "bits=9\nb080\n");
        assert_eq!(parse_hex_dump(&dump).unwrap(), bits);
        assert!(parse_hex_dump("bits=9\nb0c0\n").is_err());
        assert!(parse_hex_dump("bits=9\nb0\n").is_err());
        assert_eq!(parse_hex_dump("bits=0\n").unwrap(), BitString::new());
    }

    proptest! {
        #[test]
        fn fixtures_round_trip(seed: u64, n in 1usize..40, density in 0.0f64..1.0) {
            let m = BitMatrix::random(n, density, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            prop_assert_eq!(parse_matrix_text(&write_matrix_text(&m)).unwrap(), m.clone());
            prop_assert_eq!(parse_matrix_binary(&write_matrix_binary(&m)).unwrap(), m);
        }

        #[test]
        fn hex_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..700)) {
            let b = BitString::from_bools(bits);
            prop_assert_eq!(parse_hex_dump(&write_hex_dump(&b)).unwrap(), b);
        }
    }
}
