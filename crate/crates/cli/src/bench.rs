//! Wall-clock benchmarks of the comparison circuit and the linear trend
//! fit over the input width.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use cipherbridge::bridge_core::Bridge;
use cipherbridge::gm::GmScheme;
use cipherbridge::gm_syy::GmSyyBridge;
use cipherbridge::scheme_core::Scheme;

use crate::error::{CliError, CliResult};

pub const CSV_HEADER: &str = "bridge,param_n,ell,bits,median_ms,p10_ms,p90_ms";

/// Minimum repetitions per size point for the trend fit to mean anything.
pub const MIN_REPS: usize = 10;

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub bridge: String,
    pub param_n: usize,
    pub ell: usize,
    pub bits: u64,
    pub median_ms: f64,
    pub p10_ms: f64,
    pub p90_ms: f64,
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    if sorted.len() == 1 {
        return sorted[0];
    }
    let rank = q * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    let frac = rank - lo as f64;
    sorted[lo] * (1.0 - frac) + sorted[hi] * frac
}

/// Times the homomorphic comparison of random bit vectors at each width.
/// Key generation and input encryption stay outside the timer.
pub fn run_gmsyy_bench(
    ns: &[usize],
    bits: u64,
    ell: usize,
    reps: usize,
    seed: u64,
) -> CliResult<Vec<BenchRow>> {
    if ns.is_empty() {
        return Err(CliError::Args("no input widths given".into()));
    }
    if reps < MIN_REPS {
        return Err(CliError::Args(format!(
            "at least {MIN_REPS} repetitions are required"
        )));
    }
    let bridge = GmSyyBridge::new(bits, ell)?;
    let gm = GmScheme::new(bits)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let keys = bridge.keygen(&mut rng)?;
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        if n == 0 {
            return Err(CliError::Args("width 0 makes no sense".into()));
        }
        let mut times = Vec::with_capacity(reps);
        for _ in 0..reps {
            let xs: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
            let ys: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
            let cs = xs
                .iter()
                .map(|b| gm.encrypt(&keys.pk1, b, &mut rng))
                .collect::<cipherbridge::Result<Vec<_>>>()?;
            let ds = ys
                .iter()
                .map(|b| gm.encrypt(&keys.pk1, b, &mut rng))
                .collect::<cipherbridge::Result<Vec<_>>>()?;
            let start = Instant::now();
            let out = bridge.compare_eval(&keys.pk1, &keys.pk2, &cs, &ds, &mut rng)?;
            times.push(start.elapsed().as_secs_f64() * 1e3);
            std::hint::black_box(out);
        }
        times.sort_by(|a, b| a.partial_cmp(b).expect("finite timings"));
        rows.push(BenchRow {
            bridge: "gm-syy".into(),
            param_n: n,
            ell,
            bits,
            median_ms: percentile(&times, 0.5),
            p10_ms: percentile(&times, 0.1),
            p90_ms: percentile(&times, 0.9),
        });
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{:.6},{:.6},{:.6}\n",
            r.bridge, r.param_n, r.ell, r.bits, r.median_ms, r.p10_ms, r.p90_ms
        ));
    }
    out
}

pub fn parse_csv(text: &str) -> CliResult<Vec<BenchRow>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(header) if header.trim() == CSV_HEADER => {}
        _ => {
            return Err(CliError::Args(format!(
                "expected CSV header {CSV_HEADER:?}"
            )))
        }
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(CliError::Args(format!(
                "row {}: expected 7 fields",
                idx + 2
            )));
        }
        let parse_err = |what: &str| CliError::Args(format!("row {}: bad {what}", idx + 2));
        rows.push(BenchRow {
            bridge: fields[0].to_string(),
            param_n: fields[1].parse().map_err(|_| parse_err("param_n"))?,
            ell: fields[2].parse().map_err(|_| parse_err("ell"))?,
            bits: fields[3].parse().map_err(|_| parse_err("bits"))?,
            median_ms: fields[4].parse().map_err(|_| parse_err("median_ms"))?,
            p10_ms: fields[5].parse().map_err(|_| parse_err("p10_ms"))?,
            p90_ms: fields[6].parse().map_err(|_| parse_err("p90_ms"))?,
        });
    }
    Ok(rows)
}

/// Least-squares fit of median time against input width.
#[derive(Debug, Clone, Serialize)]
pub struct TrendFit {
    pub points: usize,
    pub slope_ms: f64,
    pub intercept_ms: f64,
    pub r_squared: f64,
}

pub fn fit_linear(rows: &[BenchRow]) -> CliResult<TrendFit> {
    let distinct: std::collections::BTreeSet<usize> = rows.iter().map(|r| r.param_n).collect();
    if distinct.len() < 3 {
        return Err(CliError::Args(format!(
            "need at least 3 distinct size points, got {}",
            distinct.len()
        )));
    }
    let n = rows.len() as f64;
    let mean_x = rows.iter().map(|r| r.param_n as f64).sum::<f64>() / n;
    let mean_y = rows.iter().map(|r| r.median_ms).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for r in rows {
        let dx = r.param_n as f64 - mean_x;
        sxx += dx * dx;
        sxy += dx * (r.median_ms - mean_y);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for r in rows {
        let predicted = slope * r.param_n as f64 + intercept;
        ss_res += (r.median_ms - predicted).powi(2);
        ss_tot += (r.median_ms - mean_y).powi(2);
    }
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok(TrendFit {
        points: rows.len(),
        slope_ms: slope,
        intercept_ms: intercept,
        r_squared,
    })
}
