//! JSON envelopes for everything the CLI reads and writes.
//!
//! Every file is `{"kind": ..., "version": 1, "insecure": bool, "payload":
//! ...}`; unknown kinds are rejected, and artifacts backed by the
//! transparent homomorphic stand-in refuse to exist without the `insecure`
//! marker.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use cipherbridge::csgn::CsgnKey;
use cipherbridge::gm::{GmCiphertext, GmPublicKey, GmSecretKey};
use cipherbridge::mockfhe::{MockCiphertext, MockEvalKey, MockPublicKey, MockSecretKey};
use cipherbridge::scheme_core::{Fp, F2};
use cipherbridge::syy::{SyyCiphertext, SyyPublicKey, SyySecretKey};
use cipherbridge::MockF2;

use crate::error::{CliError, CliResult};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
pub struct Envelope {
    pub kind: String,
    pub version: u32,
    #[serde(default)]
    pub insecure: bool,
    pub payload: serde_json::Value,
}

pub fn write_envelope(
    path: &Path,
    kind: &str,
    insecure: bool,
    payload: &impl Serialize,
) -> CliResult<()> {
    let envelope = Envelope {
        kind: kind.to_string(),
        version: FORMAT_VERSION,
        insecure,
        payload: serde_json::to_value(payload)
            .map_err(|e| CliError::Args(format!("serializing {kind}: {e}")))?,
    };
    let mut text = serde_json::to_string_pretty(&envelope)
        .map_err(|e| CliError::Args(format!("serializing {kind}: {e}")))?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn read_envelope(path: &Path, expected_kind: &str) -> CliResult<Envelope> {
    let text = std::fs::read_to_string(path)?;
    let envelope: Envelope = serde_json::from_str(&text).map_err(|e| {
        CliError::Crypto(cipherbridge::Error::InvalidParameter(format!(
            "{}: not a valid envelope: {e}",
            path.display()
        )))
    })?;
    if envelope.kind != expected_kind {
        return Err(CliError::Crypto(cipherbridge::Error::InvalidParameter(
            format!(
                "{}: kind {:?} where {expected_kind:?} was expected",
                path.display(),
                envelope.kind
            ),
        )));
    }
    if envelope.version != FORMAT_VERSION {
        return Err(CliError::Crypto(cipherbridge::Error::InvalidParameter(
            format!(
                "{}: unsupported format version {}",
                path.display(),
                envelope.version
            ),
        )));
    }
    Ok(envelope)
}

/// Reads an envelope of any of the given kinds; used by subcommands that
/// dispatch on the file itself.
pub fn read_any_envelope(path: &Path, kinds: &[&str]) -> CliResult<Envelope> {
    let text = std::fs::read_to_string(path)?;
    let envelope: Envelope = serde_json::from_str(&text).map_err(|e| {
        CliError::Crypto(cipherbridge::Error::InvalidParameter(format!(
            "{}: not a valid envelope: {e}",
            path.display()
        )))
    })?;
    if !kinds.contains(&envelope.kind.as_str()) {
        return Err(CliError::Crypto(cipherbridge::Error::InvalidParameter(
            format!("{}: unexpected kind {:?}", path.display(), envelope.kind),
        )));
    }
    Ok(envelope)
}

pub fn decode_payload<T: DeserializeOwned>(envelope: &Envelope) -> CliResult<T> {
    serde_json::from_value(envelope.payload.clone()).map_err(|e| {
        CliError::Crypto(cipherbridge::Error::InvalidParameter(format!(
            "malformed {} payload: {e}",
            envelope.kind
        )))
    })
}

// -- key and ciphertext payloads ------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
pub struct GmPublicFile {
    pub bits: u64,
    #[serde(flatten)]
    pub key: GmPublicKey,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GmSecretFile {
    pub bits: u64,
    #[serde(flatten)]
    pub key: GmSecretKey,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SyyPublicFile {
    pub bits: u64,
    #[serde(flatten)]
    pub key: SyyPublicKey,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SyySecretFile {
    pub bits: u64,
    #[serde(flatten)]
    pub key: SyySecretKey,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CsgnKeyFile {
    #[serde(flatten)]
    pub key: CsgnKey,
}

/// Plaintext ring of the transparent backend.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "ring", rename_all = "lowercase")]
pub enum RingSpec {
    F2,
    Fp { p: u64 },
}

impl RingSpec {
    pub fn instantiate_f2(&self) -> CliResult<MockF2> {
        match self {
            RingSpec::F2 => Ok(cipherbridge::mockfhe::MockFhe::unbounded(F2)),
            RingSpec::Fp { .. } => Err(CliError::Args(
                "this operation needs the two-element plaintext ring".into(),
            )),
        }
    }

    pub fn instantiate_fp(&self) -> CliResult<cipherbridge::MockFp> {
        match self {
            RingSpec::Fp { p } => Ok(cipherbridge::mockfhe::MockFhe::unbounded(Fp::new(*p)?)),
            RingSpec::F2 => Err(CliError::Args(
                "this operation needs an odd-characteristic plaintext ring".into(),
            )),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MockKeyFile {
    #[serde(flatten)]
    pub ring: RingSpec,
    pub capacity: Option<u32>,
    pub public: MockPublicKey,
    pub secret: Option<MockSecretKey>,
    pub eval: Option<MockEvalKey>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GmCiphertextFile {
    #[serde(flatten)]
    pub ct: GmCiphertext,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SyyCiphertextFile {
    #[serde(flatten)]
    pub ct: SyyCiphertext,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CsgnCiphertextFile {
    pub n: usize,
    pub bits: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MockCiphertextFile {
    #[serde(flatten)]
    pub ring: RingSpec,
    #[serde(flatten)]
    pub ct: MockCiphertext<u64>,
}

// -- bridge key material ---------------------------------------------------

/// Which bridge a `bridge-keys` file belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BridgeId {
    #[serde(rename = "gm-syy")]
    GmSyy,
    #[serde(rename = "identity-gm")]
    IdentityGm,
    #[serde(rename = "csgn-mock-1")]
    CsgnMock1,
    #[serde(rename = "csgn-mock-2")]
    CsgnMock2,
    #[serde(rename = "csgn-mock-3")]
    CsgnMock3,
    #[serde(rename = "csgn-mock-4")]
    CsgnMock4,
}

impl BridgeId {
    pub fn parse(name: &str) -> CliResult<Self> {
        match name {
            "gm-syy" => Ok(BridgeId::GmSyy),
            "identity-gm" => Ok(BridgeId::IdentityGm),
            "csgn-mock-1" => Ok(BridgeId::CsgnMock1),
            "csgn-mock-2" => Ok(BridgeId::CsgnMock2),
            "csgn-mock-3" => Ok(BridgeId::CsgnMock3),
            "csgn-mock-4" => Ok(BridgeId::CsgnMock4),
            other => Err(CliError::Args(format!(
                "unknown bridge {other:?}; expected gm-syy, identity-gm or csgn-mock-1..4"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BridgeId::GmSyy => "gm-syy",
            BridgeId::IdentityGm => "identity-gm",
            BridgeId::CsgnMock1 => "csgn-mock-1",
            BridgeId::CsgnMock2 => "csgn-mock-2",
            BridgeId::CsgnMock3 => "csgn-mock-3",
            BridgeId::CsgnMock4 => "csgn-mock-4",
        }
    }

    pub fn is_insecure(&self) -> bool {
        !matches!(self, BridgeId::GmSyy | BridgeId::IdentityGm)
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SchemeHalf {
    pub scheme: String,
    pub params: serde_json::Value,
    pub secret: serde_json::Value,
    pub public: serde_json::Value,
}

/// The serialized three-stage generator output: both key pairs plus the
/// bridge key, `null` when the bridge key is empty.
#[derive(Debug, Serialize, Deserialize)]
pub struct BridgeKeysFile {
    pub bridge: BridgeId,
    pub scheme1: SchemeHalf,
    pub scheme2: SchemeHalf,
    pub bk: serde_json::Value,
}

pub fn json<T: Serialize>(value: &T) -> CliResult<serde_json::Value> {
    serde_json::to_value(value).map_err(|e| CliError::Args(format!("serialization failed: {e}")))
}

pub fn from_json<T: DeserializeOwned>(value: &serde_json::Value, what: &str) -> CliResult<T> {
    serde_json::from_value(value.clone()).map_err(|e| {
        CliError::Crypto(cipherbridge::Error::InvalidParameter(format!(
            "malformed {what}: {e}"
        )))
    })
}
