//! Cross-module flows through the public API: key material moves from key
//! generation through conversion, comparison and the game harness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use cipherbridge::bridge_core::{check_bridge_correctness, Bridge, GraphScheme};
use cipherbridge::csgn::CsgnScheme;
use cipherbridge::gentry::{compile_gentry_bridge, csgn_dec_circuit, GentryConfig};
use cipherbridge::gm::GmScheme;
use cipherbridge::gm_syy::GmSyyBridge;
use cipherbridge::mockfhe::MockFhe;
use cipherbridge::scheme_core::{Scheme, F2};
use cipherbridge::secgames::adversaries::{FirstComponent, GmParityAdversary, RandomGuess};
use cipherbridge::secgames::{run_bridge_game, run_ind_cpa, GameConfig};

#[test]
fn gm_to_syy_bridge_feeds_comparison_and_games() {
    let bridge = GmSyyBridge::new(64, 6).unwrap();
    let gm = GmScheme::new(64).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(7001);
    let keys = bridge.keygen(&mut rng).unwrap();

    // convert a few ciphertexts and verify plaintexts carry over
    for _ in 0..50 {
        let m = rng.gen::<bool>();
        let c = gm.encrypt(&keys.pk1, &m, &mut rng).unwrap();
        let out = bridge.convert(&keys.pk2, &(), &c, &mut rng).unwrap();
        assert_eq!(bridge.decrypt_target(&keys.sk2, &out).unwrap(), m);
    }

    // homomorphic equality of two four-bit values
    let x = [true, false, true, true];
    let cs: Vec<_> = x
        .iter()
        .map(|b| gm.encrypt(&keys.pk1, b, &mut rng).unwrap())
        .collect();
    let ds: Vec<_> = x
        .iter()
        .map(|b| gm.encrypt(&keys.pk1, b, &mut rng).unwrap())
        .collect();
    let verdict = bridge
        .compare_eval(&keys.pk1, &keys.pk2, &cs, &ds, &mut rng)
        .unwrap();
    assert!(bridge.decrypt_target(&keys.sk2, &verdict).unwrap());

    // the graph scheme is a scheme like any other: run a game against it
    let cfg = GameConfig::new(100, 7002);
    let run = run_bridge_game(
        &bridge,
        &FirstComponent::new(GmParityAdversary::new()),
        &cfg,
    )
    .unwrap();
    let plain = run_ind_cpa(&gm, &GmParityAdversary::new(), &cfg).unwrap();
    assert_eq!(run.guesses0, plain.guesses0);
    assert_eq!(run.guesses1, plain.guesses1);
}

#[test]
fn compiled_bridge_composes_with_the_graph_scheme() {
    let source = CsgnScheme::new(24, 4, 6).unwrap();
    let bridge = compile_gentry_bridge(
        source,
        MockFhe::unbounded(F2),
        |_: &cipherbridge::csgn::CsgnKey| Ok(csgn_dec_circuit(24)),
        GentryConfig::default(),
    );
    let mut rng = ChaCha20Rng::seed_from_u64(7003);
    let check = check_bridge_correctness(&bridge, 200, 50, &mut rng).unwrap();
    assert_eq!(check.failures, 0);

    let graph = GraphScheme::new(&bridge);
    let (sk, pk) = graph.keygen(&mut rng).unwrap();
    for _ in 0..50 {
        let m = rng.gen::<bool>();
        let c = graph.encrypt(&pk, &m, &mut rng).unwrap();
        assert_eq!(graph.decrypt(&sk, &c).unwrap(), m);
        assert_eq!(graph.decrypt_second(&sk, &c).unwrap(), Some(m));
    }

    // random guessing against the symmetric-source graph scheme stays flat
    let run = run_ind_cpa(&graph, &RandomGuess, &GameConfig::new(400, 7004)).unwrap();
    assert!(run.report.advantage <= run.report.half_width);
}
