//! Hex encodings used by every serialized artifact.
//!
//! Integers travel as lowercase big-endian hex strings. Bit vectors pack
//! eight bits per byte, bit `i` at byte `i / 8`, position `i % 8` counted
//! from the least significant bit; the byte array is then hex encoded.

use num_bigint::BigUint;
use num_traits::Num;

use crate::{Error, Result};

/// Lowercase big-endian hex of an arbitrary-precision integer.
pub fn biguint_to_hex(value: &BigUint) -> String {
    value.to_str_radix(16)
}

/// Parses a lowercase (or mixed-case) hex string into an integer.
pub fn biguint_from_hex(hex: &str) -> Result<BigUint> {
    if hex.is_empty() {
        return Err(Error::InvalidHex("empty string".into()));
    }
    BigUint::from_str_radix(hex, 16).map_err(|e| Error::InvalidHex(format!("{hex:?}: {e}")))
}

/// Packs bits into bytes (LSB-first within each byte) and hex encodes them.
pub fn bits_to_hex(bits: &[bool]) -> String {
    let mut bytes = vec![0u8; bits.len().div_ceil(8)];
    for (i, &b) in bits.iter().enumerate() {
        if b {
            bytes[i / 8] |= 1 << (i % 8);
        }
    }
    let mut out = String::with_capacity(bytes.len() * 2);
    for byte in bytes {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

/// Decodes a hex-packed bit vector of exactly `len` bits.
///
/// Trailing pad bits beyond `len` must be zero.
pub fn bits_from_hex(hex: &str, len: usize) -> Result<Vec<bool>> {
    if !hex.len().is_multiple_of(2) {
        return Err(Error::InvalidHex("odd number of hex digits".into()));
    }
    let mut bytes = Vec::with_capacity(hex.len() / 2);
    for chunk in hex.as_bytes().chunks(2) {
        let s = std::str::from_utf8(chunk).unwrap();
        bytes
            .push(u8::from_str_radix(s, 16).map_err(|e| Error::InvalidHex(format!("{s:?}: {e}")))?);
    }
    if bytes.len() != len.div_ceil(8) {
        return Err(Error::InvalidHex(format!(
            "expected {} bytes for {len} bits, got {}",
            len.div_ceil(8),
            bytes.len()
        )));
    }
    let mut bits = Vec::with_capacity(len);
    for i in 0..len {
        bits.push(bytes[i / 8] >> (i % 8) & 1 == 1);
    }
    for i in len..bytes.len() * 8 {
        if bytes[i / 8] >> (i % 8) & 1 == 1 {
            return Err(Error::InvalidHex("nonzero padding bits".into()));
        }
    }
    Ok(bits)
}

/// Serde adapter for `BigUint` fields stored as hex strings.
pub mod serde_hex {
    use num_bigint::BigUint;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &BigUint, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&super::biguint_to_hex(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(de)?;
        super::biguint_from_hex(&s).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hex_round_trip() {
        let n = BigUint::from(0xdeadbeefu64);
        assert_eq!(biguint_to_hex(&n), "deadbeef");
        assert_eq!(biguint_from_hex("deadbeef").unwrap(), n);
    }

    #[test]
    fn zero_is_single_digit() {
        assert_eq!(biguint_to_hex(&BigUint::from(0u8)), "0");
    }

    #[test]
    fn rejects_garbage() {
        assert!(biguint_from_hex("").is_err());
        assert!(biguint_from_hex("xyz").is_err());
        assert!(bits_from_hex("f", 4).is_err()); // odd digit count
        assert!(bits_from_hex("10", 4).is_err()); // nonzero padding
    }

    #[test]
    fn bit_packing_layout() {
        // bit 0 is the least significant bit of the first byte
        assert_eq!(
            bits_to_hex(&[true, false, false, false, false, false, false, false, true]),
            "0101"
        );
        assert_eq!(
            bits_from_hex("0101", 9).unwrap(),
            vec![true, false, false, false, false, false, false, false, true]
        );
    }

    proptest! {
        #[test]
        fn bits_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..200)) {
            let hex = bits_to_hex(&bits);
            prop_assert_eq!(bits_from_hex(&hex, bits.len()).unwrap(), bits);
        }
    }
}
