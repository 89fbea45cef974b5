//! Subcommand implementations.

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use cipherbridge::bridge_core::{Bridge, IdentityBridge};
use cipherbridge::csgn::{CsgnCiphertext, CsgnKey, CsgnScheme};
use cipherbridge::encoding::{bits_from_hex, bits_to_hex};
use cipherbridge::gentry::{CsgnBridge1, CsgnBridge2, CsgnBridge3, CsgnBridge4};
use cipherbridge::gm::{GmPublicKey, GmScheme, GmSecretKey};
use cipherbridge::gm_syy::GmSyyBridge;
use cipherbridge::mockfhe::{MockCiphertext, MockFhe};
use cipherbridge::numtheory::Gf2Vec;
use cipherbridge::scheme_core::{Fp, Ring, Scheme, F2};
use cipherbridge::secgames::adversaries::{
    CsgnOracleRecovery, FirstComponent, GmFactoringAdversary, GmParityAdversary, MockValueReader,
    RandomGuess,
};
use cipherbridge::secgames::{run_bridge_game, run_ind_cpa, GameConfig, KeyPolicy};
use cipherbridge::syy::{SyyPublicKey, SyyScheme, SyySecretKey};

use crate::bench;
use crate::error::{CliError, CliResult};
use crate::files::*;
use crate::{BenchArgs, BridgeArgs, Command, CompareArgs, DecArgs, EncArgs, GameArgs, KeygenArgs};

pub fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::Keygen(args) => keygen(args),
        Command::Enc(args) => enc(args),
        Command::Dec(args) => dec(args),
        Command::Bridge(args) => bridge(args),
        Command::Compare(args) => compare(args),
        Command::Game(args) => game(args),
        Command::Bench(args) => bench_cmd(args),
    }
}

fn rng_from(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn warn_toy_bits(bits: u64) {
    if bits < 1024 {
        eprintln!(
            "warning: {bits}-bit moduli are for experiments only; use --bits 1024 or more for anything real"
        );
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix
        .file_name()
        .map(|s| s.to_os_string())
        .unwrap_or_default();
    name.push(suffix);
    prefix.with_file_name(name)
}

fn parse_ring(ring: &str) -> CliResult<RingSpec> {
    if ring.eq_ignore_ascii_case("f2") {
        return Ok(RingSpec::F2);
    }
    if let Some(p) = ring.strip_prefix("fp:") {
        let p: u64 = p
            .parse()
            .map_err(|_| CliError::Args(format!("bad prime in ring spec {ring:?}")))?;
        return Ok(RingSpec::Fp { p });
    }
    Err(CliError::Args(format!(
        "unknown ring {ring:?}; expected f2 or fp:<prime>"
    )))
}

fn smallest_prime_above(s: u64) -> u64 {
    let mut candidate = s + 1;
    loop {
        if Fp::new(candidate).is_ok() {
            return candidate;
        }
        candidate += 1;
    }
}

fn print_or_write(out: &Option<PathBuf>, value: &serde_json::Value) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Args(format!("serialization failed: {e}")))?;
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

// -- keygen -----------------------------------------------------------------

fn keygen(args: KeygenArgs) -> CliResult<()> {
    if let Some(bridge) = &args.bridge {
        let id = BridgeId::parse(bridge)?;
        return keygen_bridge(&args, id);
    }
    let scheme = args
        .scheme
        .as_deref()
        .ok_or_else(|| CliError::Args("pass either --scheme or --bridge".into()))?;
    let mut rng = rng_from(args.seed);
    match scheme {
        "gm" => {
            warn_toy_bits(args.bits);
            let scheme = GmScheme::new(args.bits)?;
            let (sk, pk) = scheme.keygen(&mut rng)?;
            write_envelope(
                &with_suffix(&args.out, ".pk.json"),
                "gm-public-key",
                false,
                &GmPublicFile {
                    bits: args.bits,
                    key: pk,
                },
            )?;
            write_envelope(
                &with_suffix(&args.out, ".sk.json"),
                "gm-secret-key",
                false,
                &GmSecretFile {
                    bits: args.bits,
                    key: sk,
                },
            )
        }
        "syy" => {
            warn_toy_bits(args.bits);
            let scheme = SyyScheme::new(args.bits, args.ell)?;
            let (sk, pk) = scheme.keygen(&mut rng)?;
            write_envelope(
                &with_suffix(&args.out, ".pk.json"),
                "syy-public-key",
                false,
                &SyyPublicFile {
                    bits: args.bits,
                    key: pk,
                },
            )?;
            write_envelope(
                &with_suffix(&args.out, ".sk.json"),
                "syy-secret-key",
                false,
                &SyySecretFile {
                    bits: args.bits,
                    key: sk,
                },
            )
        }
        "csgn" => {
            let scheme = CsgnScheme::new(args.n, args.d, args.s)?;
            let (key, _) = scheme.keygen(&mut rng)?;
            write_envelope(
                &with_suffix(&args.out, ".key.json"),
                "csgn-key",
                false,
                &CsgnKeyFile { key },
            )
        }
        "mock" => {
            require_insecure(args.insecure, "mock keys")?;
            let ring = parse_ring(&args.ring)?;
            let (secret, public, eval) = match ring {
                RingSpec::F2 => {
                    let scheme = match args.capacity {
                        Some(c) => MockFhe::with_capacity(F2, c),
                        None => MockFhe::unbounded(F2),
                    };
                    scheme.keygen_eval(&mut rng)?
                }
                RingSpec::Fp { p } => {
                    let fp = Fp::new(p)?;
                    let scheme = match args.capacity {
                        Some(c) => MockFhe::with_capacity(fp, c),
                        None => MockFhe::unbounded(fp),
                    };
                    scheme.keygen_eval(&mut rng)?
                }
            };
            write_envelope(
                &with_suffix(&args.out, ".pk.json"),
                "mock-public-key",
                true,
                &MockKeyFile {
                    ring,
                    capacity: args.capacity,
                    public,
                    secret: None,
                    eval: Some(eval),
                },
            )?;
            write_envelope(
                &with_suffix(&args.out, ".sk.json"),
                "mock-secret-key",
                true,
                &MockKeyFile {
                    ring,
                    capacity: args.capacity,
                    public,
                    secret: Some(secret),
                    eval: Some(eval),
                },
            )
        }
        other => Err(CliError::Args(format!(
            "unknown scheme {other:?}; expected gm, syy, csgn or mock"
        ))),
    }
}

fn require_insecure(flag: bool, what: &str) -> CliResult<()> {
    if flag {
        Ok(())
    } else {
        Err(CliError::Args(format!(
            "{what} are backed by the transparent (insecure) backend; pass --insecure to proceed"
        )))
    }
}

use cipherbridge::scheme_core::HomomorphicScheme;

fn keygen_bridge(args: &KeygenArgs, id: BridgeId) -> CliResult<()> {
    let mut rng = rng_from(args.seed);
    let out = with_suffix(&args.out, ".bridge.json");
    let file = match id {
        BridgeId::GmSyy => {
            warn_toy_bits(args.bits);
            let bridge = GmSyyBridge::new(args.bits, args.ell)?;
            let keys = bridge.keygen(&mut rng)?;
            BridgeKeysFile {
                bridge: id,
                scheme1: SchemeHalf {
                    scheme: "gm".into(),
                    params: serde_json::json!({"bits": args.bits}),
                    secret: json(&keys.sk1)?,
                    public: json(&keys.pk1)?,
                },
                scheme2: SchemeHalf {
                    scheme: "syy".into(),
                    params: serde_json::json!({"bits": args.bits, "ell": args.ell}),
                    secret: json(&keys.sk2)?,
                    public: json(&keys.pk2)?,
                },
                bk: serde_json::Value::Null,
            }
        }
        BridgeId::IdentityGm => {
            warn_toy_bits(args.bits);
            let bridge = IdentityBridge::new(GmScheme::new(args.bits)?);
            let keys = bridge.keygen(&mut rng)?;
            BridgeKeysFile {
                bridge: id,
                scheme1: SchemeHalf {
                    scheme: "gm".into(),
                    params: serde_json::json!({"bits": args.bits}),
                    secret: json(&keys.sk1)?,
                    public: json(&keys.pk1)?,
                },
                scheme2: SchemeHalf {
                    scheme: "gm".into(),
                    params: serde_json::json!({"bits": args.bits}),
                    secret: json(&keys.sk2)?,
                    public: json(&keys.pk2)?,
                },
                bk: serde_json::Value::Null,
            }
        }
        BridgeId::CsgnMock1 | BridgeId::CsgnMock2 | BridgeId::CsgnMock4 => {
            require_insecure(args.insecure, "csgn-mock bridge keys")?;
            let source = CsgnScheme::new(args.n, args.d, args.s)?;
            let target = MockFhe::unbounded(F2);
            let (csgn_key, mock_sk, mock_pk, mock_evk, bk) = match id {
                BridgeId::CsgnMock1 => {
                    let bridge = CsgnBridge1::new(source, target);
                    let keys = bridge.keygen(&mut rng)?;
                    (
                        keys.sk1,
                        keys.sk2.1,
                        keys.pk2.0,
                        Some(keys.pk2.1),
                        json(&keys.bk)?,
                    )
                }
                BridgeId::CsgnMock2 => {
                    let bridge = CsgnBridge2::new(source, target);
                    let keys = bridge.keygen(&mut rng)?;
                    (keys.sk1, keys.sk2.1, keys.pk2, None, json(&keys.bk)?)
                }
                _ => {
                    let bridge = CsgnBridge4::new(source, target)?;
                    let keys = bridge.keygen(&mut rng)?;
                    (
                        keys.sk1,
                        keys.sk2.1,
                        keys.pk2.0,
                        Some(keys.pk2.1),
                        json(&keys.bk)?,
                    )
                }
            };
            csgn_mock_file(
                id,
                args,
                RingSpec::F2,
                csgn_key,
                mock_sk,
                mock_pk,
                mock_evk,
                bk,
            )?
        }
        BridgeId::CsgnMock3 => {
            require_insecure(args.insecure, "csgn-mock bridge keys")?;
            let source = CsgnScheme::new(args.n, args.d, args.s)?;
            let p = match parse_ring(&args.ring)? {
                RingSpec::Fp { p } => p,
                RingSpec::F2 => smallest_prime_above(args.s as u64),
            };
            let target = MockFhe::unbounded(Fp::new(p)?);
            let bridge = CsgnBridge3::new(source, target)?;
            let keys = bridge.keygen(&mut rng)?;
            csgn_mock_file(
                id,
                args,
                RingSpec::Fp { p },
                keys.sk1,
                keys.sk2.1,
                keys.pk2.0,
                Some(keys.pk2.1),
                json(&keys.bk)?,
            )?
        }
    };
    write_envelope(&out, "bridge-keys", id.is_insecure(), &file)
}

#[allow(clippy::too_many_arguments)]
fn csgn_mock_file(
    id: BridgeId,
    args: &KeygenArgs,
    ring: RingSpec,
    csgn_key: CsgnKey,
    mock_sk: cipherbridge::mockfhe::MockSecretKey,
    mock_pk: cipherbridge::mockfhe::MockPublicKey,
    mock_evk: Option<cipherbridge::mockfhe::MockEvalKey>,
    bk: serde_json::Value,
) -> CliResult<BridgeKeysFile> {
    Ok(BridgeKeysFile {
        bridge: id,
        scheme1: SchemeHalf {
            scheme: "csgn".into(),
            params: serde_json::json!({"n": args.n, "d": args.d, "s": args.s}),
            secret: json(&csgn_key)?,
            public: json(&csgn_key)?,
        },
        scheme2: SchemeHalf {
            scheme: "mock".into(),
            params: json(&ring)?,
            secret: json(&mock_sk)?,
            public: serde_json::json!({
                "public": json(&mock_pk)?,
                "eval": mock_evk.map(|e| json(&e)).transpose()?,
            }),
        },
        bk,
    })
}

// -- enc / dec ---------------------------------------------------------------

fn parse_bit(message: &str) -> CliResult<bool> {
    match message {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(CliError::Args(format!(
            "expected a bit (0 or 1), got {other:?}"
        ))),
    }
}

fn enc(args: EncArgs) -> CliResult<()> {
    let envelope = read_any_envelope(
        &args.key,
        &[
            "gm-public-key",
            "syy-public-key",
            "csgn-key",
            "mock-public-key",
        ],
    )?;
    let mut rng = rng_from(args.seed);
    match envelope.kind.as_str() {
        "gm-public-key" => {
            let file: GmPublicFile = decode_payload(&envelope)?;
            let scheme = GmScheme::new(file.bits)?;
            let ct = scheme.encrypt(&file.key, &parse_bit(&args.message)?, &mut rng)?;
            write_envelope(&args.out, "gm-ciphertext", false, &GmCiphertextFile { ct })
        }
        "syy-public-key" => {
            let file: SyyPublicFile = decode_payload(&envelope)?;
            let scheme = SyyScheme::new(file.bits, file.key.ell)?;
            let ct = scheme.encrypt(&file.key, &parse_bit(&args.message)?, &mut rng)?;
            write_envelope(
                &args.out,
                "syy-ciphertext",
                false,
                &SyyCiphertextFile { ct },
            )
        }
        "csgn-key" => {
            let file: CsgnKeyFile = decode_payload(&envelope)?;
            let scheme = CsgnScheme::new(file.key.n, file.key.d, file.key.s)?;
            let ct = scheme.encrypt(&file.key, &parse_bit(&args.message)?, &mut rng)?;
            write_envelope(
                &args.out,
                "csgn-ciphertext",
                false,
                &CsgnCiphertextFile {
                    n: file.key.n,
                    bits: bits_to_hex(&ct.bits.to_bits()),
                },
            )
        }
        "mock-public-key" => {
            require_insecure(args.insecure, "mock ciphertexts")?;
            let file: MockKeyFile = decode_payload(&envelope)?;
            let value: u64 = args.message.parse().map_err(|_| {
                CliError::Args(format!("expected an integer, got {:?}", args.message))
            })?;
            let ct = match file.ring {
                RingSpec::F2 => {
                    let scheme = MockFhe::unbounded(F2);
                    if value > 1 {
                        return Err(CliError::Crypto(cipherbridge::Error::PlaintextRange));
                    }
                    scheme.encrypt(&file.public, &value, &mut rng)?
                }
                RingSpec::Fp { p } => {
                    let scheme = MockFhe::unbounded(Fp::new(p)?);
                    if value >= p {
                        return Err(CliError::Crypto(cipherbridge::Error::PlaintextRange));
                    }
                    scheme.encrypt(&file.public, &value, &mut rng)?
                }
            };
            write_envelope(
                &args.out,
                "mock-ciphertext",
                true,
                &MockCiphertextFile {
                    ring: file.ring,
                    ct,
                },
            )
        }
        _ => unreachable!("filtered by read_any_envelope"),
    }
}

fn dec(args: DecArgs) -> CliResult<()> {
    let ct_env = read_any_envelope(
        &args.input,
        &[
            "gm-ciphertext",
            "syy-ciphertext",
            "csgn-ciphertext",
            "mock-ciphertext",
        ],
    )?;
    let plaintext: serde_json::Value = match ct_env.kind.as_str() {
        "gm-ciphertext" => {
            let key: GmSecretFile = decode_payload(&read_envelope(&args.key, "gm-secret-key")?)?;
            let file: GmCiphertextFile = decode_payload(&ct_env)?;
            let scheme = GmScheme::new(key.bits)?;
            serde_json::json!(u8::from(scheme.decrypt(&key.key, &file.ct)?))
        }
        "syy-ciphertext" => {
            let key: SyySecretFile = decode_payload(&read_envelope(&args.key, "syy-secret-key")?)?;
            let file: SyyCiphertextFile = decode_payload(&ct_env)?;
            let scheme = SyyScheme::new(key.bits, key.key.ell)?;
            serde_json::json!(u8::from(scheme.decrypt(&key.key, &file.ct)?))
        }
        "csgn-ciphertext" => {
            let key: CsgnKeyFile = decode_payload(&read_envelope(&args.key, "csgn-key")?)?;
            let file: CsgnCiphertextFile = decode_payload(&ct_env)?;
            let bits = bits_from_hex(&file.bits, file.n)?;
            let ct = CsgnCiphertext {
                bits: Gf2Vec::from_bits(&bits),
            };
            let scheme = CsgnScheme::new(key.key.n, key.key.d, key.key.s)?;
            serde_json::json!(u8::from(scheme.decrypt(&key.key, &ct)?))
        }
        "mock-ciphertext" => {
            let key: MockKeyFile = decode_payload(&read_envelope(&args.key, "mock-secret-key")?)?;
            let file: MockCiphertextFile = decode_payload(&ct_env)?;
            if key.ring != file.ring {
                return Err(CliError::Crypto(cipherbridge::Error::InvalidParameter(
                    "ciphertext and key use different plaintext rings".into(),
                )));
            }
            let secret = key.secret.ok_or_else(|| {
                CliError::Crypto(cipherbridge::Error::InvalidParameter(
                    "key file holds no secret key".into(),
                ))
            })?;
            let value = match key.ring {
                RingSpec::F2 => {
                    let scheme = match key.capacity {
                        Some(c) => MockFhe::with_capacity(F2, c),
                        None => MockFhe::unbounded(F2),
                    };
                    scheme.decrypt(&secret, &file.ct)?
                }
                RingSpec::Fp { p } => {
                    let fp = Fp::new(p)?;
                    let scheme = match key.capacity {
                        Some(c) => MockFhe::with_capacity(fp, c),
                        None => MockFhe::unbounded(fp),
                    };
                    scheme.decrypt(&secret, &file.ct)?
                }
            };
            serde_json::json!(value)
        }
        _ => unreachable!("filtered by read_any_envelope"),
    };
    print_or_write(&args.out, &serde_json::json!({ "plaintext": plaintext }))
}

// -- bridge ------------------------------------------------------------------

struct GmSyyMaterial {
    bridge: GmSyyBridge,
    sk1: GmSecretKey,
    pk1: GmPublicKey,
    sk2: SyySecretKey,
    pk2: SyyPublicKey,
}

fn load_gmsyy(file: &BridgeKeysFile) -> CliResult<GmSyyMaterial> {
    let bits = file.scheme1.params["bits"]
        .as_u64()
        .ok_or_else(|| CliError::Args("bridge file lacks the modulus size".into()))?;
    let ell = file.scheme2.params["ell"]
        .as_u64()
        .ok_or_else(|| CliError::Args("bridge file lacks the vector length".into()))?
        as usize;
    Ok(GmSyyMaterial {
        bridge: GmSyyBridge::new(bits, ell)?,
        sk1: from_json(&file.scheme1.secret, "gm secret key")?,
        pk1: from_json(&file.scheme1.public, "gm public key")?,
        sk2: from_json(&file.scheme2.secret, "syy secret key")?,
        pk2: from_json(&file.scheme2.public, "syy public key")?,
    })
}

struct CsgnMockMaterial {
    source: CsgnScheme,
    key: CsgnKey,
    mock_pk: cipherbridge::mockfhe::MockPublicKey,
    mock_evk: Option<cipherbridge::mockfhe::MockEvalKey>,
    mock_sk: cipherbridge::mockfhe::MockSecretKey,
    bk: serde_json::Value,
}

fn load_csgn_mock(file: &BridgeKeysFile) -> CliResult<CsgnMockMaterial> {
    let params = &file.scheme1.params;
    let (n, d, s) = (
        params["n"].as_u64().unwrap_or(0) as usize,
        params["d"].as_u64().unwrap_or(0) as usize,
        params["s"].as_u64().unwrap_or(0) as usize,
    );
    Ok(CsgnMockMaterial {
        source: CsgnScheme::new(n, d, s)?,
        key: from_json(&file.scheme1.secret, "csgn key")?,
        mock_pk: from_json(&file.scheme2.public["public"], "mock public key")?,
        mock_evk: match &file.scheme2.public["eval"] {
            serde_json::Value::Null => None,
            value => Some(from_json(value, "mock eval key")?),
        },
        mock_sk: from_json(&file.scheme2.secret, "mock secret key")?,
        bk: file.bk.clone(),
    })
}

fn bridge(args: BridgeArgs) -> CliResult<()> {
    let envelope = read_envelope(&args.keys, "bridge-keys")?;
    let file: BridgeKeysFile = decode_payload(&envelope)?;
    let mut rng = rng_from(args.seed);
    match file.bridge {
        BridgeId::GmSyy => {
            let m = load_gmsyy(&file)?;
            let input: GmCiphertextFile =
                decode_payload(&read_envelope(&args.input, "gm-ciphertext")?)?;
            let out = m.bridge.convert(&m.pk2, &(), &input.ct, &mut rng)?;
            if args.check {
                let source_bit =
                    GmScheme::new(m.bridge.syy_scheme().bits())?.decrypt(&m.sk1, &input.ct)?;
                let target_bit = m.bridge.decrypt_target(&m.sk2, &out)?;
                if source_bit != target_bit {
                    return Err(CliError::Check(format!(
                        "bridge output decrypts to {} but the input encrypts {}",
                        u8::from(target_bit),
                        u8::from(source_bit)
                    )));
                }
            }
            write_envelope(
                &args.out,
                "syy-ciphertext",
                false,
                &SyyCiphertextFile { ct: out },
            )
        }
        BridgeId::IdentityGm => {
            let bits = file.scheme1.params["bits"]
                .as_u64()
                .ok_or_else(|| CliError::Args("bridge file lacks the modulus size".into()))?;
            let bridge = IdentityBridge::new(GmScheme::new(bits)?);
            let sk1: GmSecretKey = from_json(&file.scheme1.secret, "gm secret key")?;
            let pk2: GmPublicKey = from_json(&file.scheme2.public, "gm public key")?;
            let input: GmCiphertextFile =
                decode_payload(&read_envelope(&args.input, "gm-ciphertext")?)?;
            let out = bridge.convert(&pk2, &(), &input.ct, &mut rng)?;
            if args.check {
                let scheme = GmScheme::new(bits)?;
                if scheme.decrypt(&sk1, &input.ct)? != scheme.decrypt(&sk1, &out)? {
                    return Err(CliError::Check(
                        "identity bridge changed the plaintext".into(),
                    ));
                }
            }
            write_envelope(
                &args.out,
                "gm-ciphertext",
                false,
                &GmCiphertextFile { ct: out },
            )
        }
        BridgeId::CsgnMock1 | BridgeId::CsgnMock2 | BridgeId::CsgnMock4 => {
            require_insecure(args.insecure, "mock ciphertexts")?;
            let target = MockFhe::unbounded(F2);
            let m = load_csgn_mock(&file)?;
            let input = read_csgn_ciphertext(&args.input)?;
            let need_evk = || CliError::Args("bridge file lacks the eval key".into());
            let out = match file.bridge {
                BridgeId::CsgnMock1 => {
                    let bridge = CsgnBridge1::new(m.source.clone(), target);
                    let bk: Vec<Vec<MockCiphertext<u64>>> = from_json(&m.bk, "bridge key")?;
                    let evk = m.mock_evk.ok_or_else(need_evk)?;
                    bridge.convert(&(m.mock_pk, evk), &bk, &input, &mut rng)?
                }
                BridgeId::CsgnMock2 => {
                    let bridge = CsgnBridge2::new(m.source.clone(), target);
                    let bk: Vec<MockCiphertext<u64>> = from_json(&m.bk, "bridge key")?;
                    bridge.convert(&m.mock_pk, &bk, &input, &mut rng)?
                }
                _ => {
                    let bridge = CsgnBridge4::new(m.source.clone(), target)?;
                    let bk: Vec<Vec<MockCiphertext<u64>>> = from_json(&m.bk, "bridge key")?;
                    let evk = m.mock_evk.ok_or_else(need_evk)?;
                    bridge.convert(&(m.mock_pk, evk), &bk, &input, &mut rng)?
                }
            };
            if args.check {
                let expected = m.source.decrypt(&m.key, &input)?;
                let got = target.decrypt(&m.mock_sk, &out)?;
                if got != u64::from(expected) {
                    return Err(CliError::Check(format!(
                        "bridge output decrypts to {got} but the input encrypts {}",
                        u8::from(expected)
                    )));
                }
            }
            write_envelope(
                &args.out,
                "mock-ciphertext",
                true,
                &MockCiphertextFile {
                    ring: RingSpec::F2,
                    ct: out,
                },
            )
        }
        BridgeId::CsgnMock3 => {
            require_insecure(args.insecure, "mock ciphertexts")?;
            let m = load_csgn_mock(&file)?;
            let ring: RingSpec = from_json(&file.scheme2.params, "ring")?;
            let RingSpec::Fp { p } = ring else {
                return Err(CliError::Args(
                    "bridge 3 key file must carry a prime ring".into(),
                ));
            };
            let target = MockFhe::unbounded(Fp::new(p)?);
            let bridge = CsgnBridge3::new(m.source.clone(), target)?;
            let bk: Vec<MockCiphertext<u64>> = from_json(&m.bk, "bridge key")?;
            let evk = m
                .mock_evk
                .ok_or_else(|| CliError::Args("bridge file lacks the eval key".into()))?;
            let input = read_csgn_ciphertext(&args.input)?;
            let out = bridge.convert(&(m.mock_pk, evk), &bk, &input, &mut rng)?;
            if args.check {
                let expected = m.source.decrypt(&m.key, &input)?;
                let got = target.decrypt(&m.mock_sk, &out)?;
                if got != u64::from(expected) {
                    return Err(CliError::Check(format!(
                        "bridge output decrypts to {got} but the input encrypts {}",
                        u8::from(expected)
                    )));
                }
            }
            write_envelope(
                &args.out,
                "mock-ciphertext",
                true,
                &MockCiphertextFile { ring, ct: out },
            )
        }
    }
}

fn read_csgn_ciphertext(path: &Path) -> CliResult<CsgnCiphertext> {
    let file: CsgnCiphertextFile = decode_payload(&read_envelope(path, "csgn-ciphertext")?)?;
    let bits = bits_from_hex(&file.bits, file.n)?;
    Ok(CsgnCiphertext {
        bits: Gf2Vec::from_bits(&bits),
    })
}

// -- compare -----------------------------------------------------------------

fn compare(args: CompareArgs) -> CliResult<()> {
    let envelope = read_envelope(&args.keys, "bridge-keys")?;
    let file: BridgeKeysFile = decode_payload(&envelope)?;
    if file.bridge != BridgeId::GmSyy {
        return Err(CliError::Args(
            "compare needs gm-syy bridge key material".into(),
        ));
    }
    let m = load_gmsyy(&file)?;
    let xs = bits_from_hex(&args.x, args.n)?;
    let ys = bits_from_hex(&args.y, args.n)?;
    let gm = GmScheme::new(m.bridge.syy_scheme().bits())?;
    let mut rng = rng_from(args.seed);
    let cs = xs
        .iter()
        .map(|b| gm.encrypt(&m.pk1, b, &mut rng))
        .collect::<cipherbridge::Result<Vec<_>>>()?;
    let ds = ys
        .iter()
        .map(|b| gm.encrypt(&m.pk1, b, &mut rng))
        .collect::<cipherbridge::Result<Vec<_>>>()?;
    let out = m.bridge.compare_eval(&m.pk1, &m.pk2, &cs, &ds, &mut rng)?;
    let verdict = m.bridge.decrypt_target(&m.sk2, &out)?;
    if let Some(path) = &args.out {
        write_envelope(
            path,
            "syy-ciphertext",
            false,
            &SyyCiphertextFile { ct: out },
        )?;
    }
    println!(
        "{}",
        serde_json::json!({
            "verdict": u8::from(verdict),
            "n": args.n,
            "ell": m.bridge.ell(),
            "failure_bound": m.bridge.compare_failure_bound(args.n),
        })
    );
    if let Some(expected) = args.expect {
        if u8::from(verdict) != expected {
            return Err(CliError::Check(format!(
                "verdict {} differs from the expected {expected}",
                u8::from(verdict)
            )));
        }
    }
    Ok(())
}

// -- game ---------------------------------------------------------------------

fn game(args: GameArgs) -> CliResult<()> {
    let mut cfg = GameConfig::new(args.trials, args.seed).with_jobs(args.jobs);
    if args.fixed_key {
        cfg = cfg.with_key_policy(KeyPolicy::FixedAcrossTrials);
    }
    let report = if let Some(bridge) = &args.bridge {
        if BridgeId::parse(bridge)? != BridgeId::GmSyy {
            return Err(CliError::Args(
                "game --bridge currently supports gm-syy".into(),
            ));
        }
        let bridge = GmSyyBridge::new(args.bits, args.ell)?;
        match args.adversary.as_str() {
            "random" => run_bridge_game(&bridge, &RandomGuess, &cfg)?.report,
            "first-parity" => {
                run_bridge_game(
                    &bridge,
                    &FirstComponent::new(GmParityAdversary::new()),
                    &cfg,
                )?
                .report
            }
            other => {
                return Err(CliError::Args(format!(
                    "unknown bridge adversary {other:?}; expected random or first-parity"
                )))
            }
        }
    } else {
        match args.scheme.as_deref() {
            Some("gm") => {
                let scheme = GmScheme::new(args.bits)?;
                match args.adversary.as_str() {
                    "random" => run_ind_cpa(&scheme, &RandomGuess, &cfg)?.report,
                    "parity" => run_ind_cpa(&scheme, &GmParityAdversary::new(), &cfg)?.report,
                    "factoring" => run_ind_cpa(&scheme, &GmFactoringAdversary::new(), &cfg)?.report,
                    other => {
                        return Err(CliError::Args(format!(
                            "unknown gm adversary {other:?}; expected random, parity or factoring"
                        )))
                    }
                }
            }
            Some("mock") => match parse_ring(&args.ring)? {
                RingSpec::F2 => {
                    let scheme = MockFhe::unbounded(F2);
                    run_mock_game(&scheme, &args, &cfg)?
                }
                RingSpec::Fp { p } => {
                    let scheme = MockFhe::unbounded(Fp::new(p)?);
                    run_mock_game(&scheme, &args, &cfg)?
                }
            },
            Some("csgn") => {
                let scheme = CsgnScheme::new(args.n, args.d, args.s)?;
                match args.adversary.as_str() {
                    "random" => run_ind_cpa(&scheme, &RandomGuess, &cfg)?.report,
                    "recover" => run_ind_cpa(&scheme, &CsgnOracleRecovery::new(64), &cfg)?.report,
                    other => {
                        return Err(CliError::Args(format!(
                            "unknown csgn adversary {other:?}; expected random or recover"
                        )))
                    }
                }
            }
            Some(other) => {
                return Err(CliError::Args(format!(
                    "unknown scheme {other:?} for games"
                )))
            }
            None => return Err(CliError::Args("pass either --scheme or --bridge".into())),
        }
    };
    print_or_write(
        &args.out,
        &serde_json::to_value(&report).expect("report serializes"),
    )
}

fn run_mock_game<R>(
    scheme: &MockFhe<R>,
    args: &GameArgs,
    cfg: &GameConfig,
) -> CliResult<cipherbridge::findist::GameReport>
where
    R: Ring<Elem = u64> + Sync,
{
    match args.adversary.as_str() {
        "random" => Ok(run_ind_cpa(scheme, &RandomGuess, cfg)?.report),
        "transparent" => Ok(run_ind_cpa(scheme, &MockValueReader::new(), cfg)?.report),
        other => Err(CliError::Args(format!(
            "unknown mock adversary {other:?}; expected random or transparent"
        ))),
    }
}

// -- bench ----------------------------------------------------------------------

fn bench_cmd(args: BenchArgs) -> CliResult<()> {
    if let Some(csv_path) = &args.fit {
        let rows = bench::parse_csv(&std::fs::read_to_string(csv_path)?)?;
        let fit = bench::fit_linear(&rows)?;
        let mut value = serde_json::to_value(&fit).expect("fit serializes");
        value["kind"] = "trend-report".into();
        println!("{value}");
        return Ok(());
    }
    if args.bridge != "gm-syy" {
        return Err(CliError::Args(
            "bench currently measures the gm-syy bridge".into(),
        ));
    }
    let rows = bench::run_gmsyy_bench(&args.n, args.bits, args.ell, args.reps, args.seed)?;
    let csv = bench::to_csv(&rows);
    match &args.out {
        Some(path) => std::fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}
