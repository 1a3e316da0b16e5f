//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use supercheq::analytics::{haar_collision_bound, haar_fidelity_cdf, haar_file_count};
use supercheq::ee::{
    ee_max_fidelity_scan, ee_noise_scan, fingerprints, EncodingSpec, NoiseScanOptions, TrialConfig, Variant,
};
use supercheq::ie::{graph_fidelity, graph_state_circuit, BitMatrix, Graph, GraphFingerprint};
use supercheq::sim::{overlap_matrix, run_circuit, NoiseModel, QuantumState, StateVector};
use supercheq::verify::{
    destructive_swap_test, run_smp_session, standard_swap_test, Protocol, SessionConfig, SwapTestKind,
};
use supercheq::{derive_stream, FileBits, SeededStream};

const MASTER_NONCE: &[u8] = b"supercheq";

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn label_stream(label: &str) -> SeededStream {
    derive_stream(&FileBits::zeros(0), label.as_bytes())
}

fn random_file(s: &mut SeededStream, len: usize) -> FileBits {
    let bits: Vec<bool> = (0..len).map(|_| s.bernoulli(0.5)).collect();
    FileBits::from_bools(&bits)
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let trials = TrialConfig::new(
        TrialConfig::integer_files(1024),
        TrialConfig::trial_nonces(MASTER_NONCE, 5),
    )
    .expect("integer files are distinct");
    let grid = |l| EncodingSpec::new(Variant::Grid2dGr { rows: 3, cols: 3, layers: l }, 9).unwrap();
    let report = ee_max_fidelity_scan(&[grid(5), grid(7)], &trials, false).expect("scan runs");
    let l5: Vec<f64> = report.rows_for("grid2d_gr", Some(5)).iter().map(|r| r.max_offdiag).collect();
    let l7: Vec<_> = report.rows_for("grid2d_gr", Some(7));
    let l5_ok = l5.iter().all(|&m| m < 0.05);
    let l7_ok = l7.iter().all(|r| r.max_offdiag <= 2.0 * r.haar_baseline);
    let ratios: Vec<String> = l7
        .iter()
        .map(|r| format!("{:.2}", r.max_offdiag / r.haar_baseline))
        .collect();
    let fmt: Vec<String> = l5.iter().map(|m| format!("{m:.4}")).collect();
    let elapsed = start.elapsed();
    verdict(
        l5_ok && l7_ok && elapsed < Duration::from_secs(600),
        format!(
            "L=5 max fidelity per trial [{}] (need < 0.05); L=7 / Haar [{}] (need ≤ 2); {:.1}s",
            fmt.join(", "),
            ratios.join(", "),
            elapsed.as_secs_f64()
        ),
    )
}

fn ks_distance(mut samples: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let m = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let c = cdf(x);
            (c - i as f64 / m).abs().max(((i + 1) as f64 / m - c).abs())
        })
        .fold(0.0, f64::max)
}

fn haar_pair_fidelities(n: usize, pairs: u64, label: &[u8]) -> Vec<f64> {
    let spec = EncodingSpec::haar(n).unwrap();
    let files = TrialConfig::integer_files(2 * pairs);
    let states = fingerprints(&spec, &files, label).unwrap();
    states
        .chunks_exact(2)
        .map(|p| p[0].inner(&p[1]).norm_sqr())
        .collect()
}

fn criterion_2() -> Verdict {
    let f4 = haar_pair_fidelities(4, 2000, b"criterion-2/n4");
    let d = ks_distance(f4, |x| haar_fidelity_cdf(x, 4).unwrap());
    let mut pass = d < 0.05;
    let mut detail = format!("n=4 KS distance {d:.4} (need < 0.05)");
    for n in [2usize, 3] {
        let pairs = 100_000;
        let f = haar_pair_fidelities(n, pairs, format!("criterion-2/n{n}").as_bytes());
        let hits = f.iter().filter(|&&x| x > 0.5).count() as f64 / pairs as f64;
        let p = 0.5f64.powi((1 << n) - 1);
        let sigma = (p * (1.0 - p) / pairs as f64).sqrt();
        let ok = (hits - p).abs() <= 3.0 * sigma;
        pass &= ok;
        detail += &format!(
            "; n={n} Pr[F>0.5] {hits:.5} vs {p:.5} ({:.2}σ)",
            (hits - p).abs() / sigma
        );
    }
    verdict(pass, detail)
}

fn criterion_3() -> Verdict {
    let start = Instant::now();
    let headline = haar_collision_bound(haar_file_count(20, 1.4), 20).log10();
    let series: Vec<f64> = (2..=30)
        .map(|n| haar_collision_bound(haar_file_count(n, 1.4), n).log10())
        .collect();
    let decreasing = series.windows(2).all(|w| w[1] < w[0]);
    let elapsed = start.elapsed();
    verdict(
        (-9400.0..=-9000.0).contains(&headline) && decreasing && elapsed < Duration::from_secs(1),
        format!(
            "log10 bound at n=20 is {headline:.2}; strictly decreasing over n=2..30: {decreasing}; {:.3}ms",
            elapsed.as_secs_f64() * 1e3
        ),
    )
}

fn all_graphs(n: usize) -> Vec<Graph> {
    let slots = n * (n - 1) / 2;
    (0..1u64 << slots)
        .map(|mask| {
            let bits: Vec<u8> = (0..slots).map(|k| ((mask >> (slots - 1 - k)) & 1) as u8).collect();
            let mut packed = vec![0u8; slots.div_ceil(8)];
            for (k, b) in bits.iter().enumerate() {
                packed[k / 8] |= b << (7 - k % 8);
            }
            Graph::from_packed(n, &packed).unwrap()
        })
        .collect()
}

fn criterion_4() -> Verdict {
    let start = Instant::now();
    let mut worst_err: f64 = 0.0;
    let mut worst_distinct: f64 = 0.0;
    let mut pairs = 0u64;
    for n in 1..=5 {
        let graphs = all_graphs(n);
        let states: Vec<StateVector> = graphs
            .iter()
            .map(|g| run_circuit(&graph_state_circuit(g), &StateVector::zero(n)).unwrap())
            .collect();
        for i in 0..graphs.len() {
            for j in i..graphs.len() {
                let closed = graph_fidelity(&graphs[i], &graphs[j]).unwrap();
                let brute = states[i].inner(&states[j]).norm_sqr();
                worst_err = worst_err.max((closed - brute).abs());
                if i != j {
                    worst_distinct = worst_distinct.max(closed.max(brute));
                }
                pairs += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        worst_err <= 1e-10 && worst_distinct <= 0.5 && elapsed < Duration::from_secs(120),
        format!(
            "{pairs} graph pairs with n ≤ 5: max |closed form − statevector| {worst_err:.2e}, \
             max distinct fidelity {worst_distinct}; {:.1}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn touched_entries(before: &BitMatrix, after: &BitMatrix) -> usize {
    if before.rows() != after.rows() {
        return usize::MAX;
    }
    before.xor(after).unwrap().count_ones()
}

fn criterion_5() -> Verdict {
    let mut s = label_stream("criterion-5");
    let mut mismatches = 0;
    let mut bad_flips = 0;
    let mut flips = 0;
    let mut edits = 0;
    for _ in 0..1000 {
        let mut file = random_file(&mut s, 200);
        let mut fp = GraphFingerprint::encode(&file).unwrap();
        for _ in 0..50 {
            match s.uniform_index(3) {
                0 => {
                    let k = s.uniform_index(file.len());
                    let before = fp.graph().adjacency().clone();
                    fp.flip_bit(k).unwrap();
                    file.flip(k).unwrap();
                    // one entry of the lower triangle plus its mirror
                    if touched_entries(&before, fp.graph().adjacency()) != 2 {
                        bad_flips += 1;
                    }
                    flips += 1;
                }
                1 => {
                    let k = s.uniform_index(file.len());
                    let v = s.bernoulli(0.5);
                    fp.write_bit(k, v).unwrap();
                    file.set(k, v).unwrap();
                }
                _ => {
                    let new_len = file.len() + s.uniform_index(21);
                    fp.resize(new_len).unwrap();
                    file.extend_zeros(new_len);
                }
            }
            edits += 1;
            if fp != GraphFingerprint::encode(&file).unwrap() {
                mismatches += 1;
            }
        }
    }
    verdict(
        mismatches == 0 && bad_flips == 0,
        format!(
            "{edits} edits, {mismatches} incremental/from-scratch mismatches; \
             {flips} flips, {bad_flips} touching other than one adjacency entry"
        ),
    )
}

fn all_files_up_to(max_len: usize) -> Vec<FileBits> {
    (1..=max_len)
        .flat_map(|len| (0..1u64 << len).map(move |v| FileBits::from_uint_width(v, len)))
        .collect()
}

fn criterion_6() -> Verdict {
    let mut s = label_stream("criterion-6");
    let spec = EncodingSpec::haar(3).unwrap();
    let shots = 10_000u64;
    let mut worst_std: f64 = 0.0;
    let mut worst_destr: f64 = 0.0;
    for k in 0..50u64 {
        let a = supercheq::fingerprint_ee(&spec, &FileBits::from_uint(2 * k), b"criterion-6").unwrap();
        let b = supercheq::fingerprint_ee(&spec, &FileBits::from_uint(2 * k + 1), b"criterion-6").unwrap();
        let f = a.inner(&b).norm_sqr();
        let sigma = ((1.0 - f * f) / shots as f64).sqrt();
        let std = standard_swap_test(
            &QuantumState::Pure(a.clone()),
            &QuantumState::Pure(b.clone()),
            shots,
            &mut s,
        )
        .unwrap();
        let destr = destructive_swap_test(&a, &b, shots, &mut s).unwrap();
        worst_std = worst_std.max((std.raw_estimate - f).abs() / sigma);
        worst_destr = worst_destr.max((destr.raw_estimate - f).abs() / sigma);
    }
    let files = all_files_up_to(10);
    let mut rejected = 0;
    let mut sessions = 0;
    for (i, f) in files.iter().enumerate() {
        for test in [SwapTestKind::Standard, SwapTestKind::Destructive] {
            let cfg = SessionConfig {
                protocol: Protocol::Ie,
                test,
                epsilon: 1e-3,
            };
            let t = run_smp_session(&cfg, f, f, &(i as u64).to_be_bytes()).unwrap();
            if t.decision != "equal" {
                rejected += 1;
            }
            sessions += 1;
        }
    }
    verdict(
        worst_std <= 4.0 && worst_destr <= 4.0 && rejected == 0,
        format!(
            "50 pairs at {shots} shots: worst deviation standard {worst_std:.2}σ, destructive \
             {worst_destr:.2}σ (need ≤ 4); identical IE files rejected {rejected}/{sessions}"
        ),
    )
}

fn criterion_7() -> Verdict {
    let options = NoiseScanOptions {
        uhlmann: true,
        emit_matrix: false,
    };
    let seeds = |bits: usize| -> Vec<FileBits> {
        (0..1u64 << bits).map(|v| FileBits::from_uint_width(v, bits)).collect()
    };
    let fc = |n| EncodingSpec::new(Variant::FullyConnectedGr { layers: 1 }, n).unwrap();
    let depths: Vec<usize> = (1..=10).collect();
    let pauli = ee_noise_scan(
        &fc(4),
        &[NoiseModel::pauli_default()],
        &seeds(4),
        &depths,
        MASTER_NONCE,
        options,
    )
    .unwrap();
    let curve: Vec<f64> = pauli.rows.iter().map(|r| r.max_cross_uhlmann.unwrap()).collect();
    let (first, last) = (curve[0], curve[curve.len() - 1]);
    let (l_star, min) = curve[1..curve.len() - 1]
        .iter()
        .enumerate()
        .map(|(i, &v)| (i + 2, v))
        .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    let u_shape = min < first && min < last;

    let models = [
        NoiseModel::pauli_default(),
        NoiseModel::thermal_default(),
        NoiseModel::coherent_default(),
    ];
    let fig9 = ee_noise_scan(&fc(5), &models, &seeds(5), &[5], MASTER_NONCE, options).unwrap();
    let by_model: Vec<(String, f64)> = fig9
        .rows
        .iter()
        .map(|r| (r.model.clone(), r.max_cross_uhlmann.unwrap()))
        .collect();
    let pauli_worst = by_model[1..].iter().all(|(_, v)| by_model[0].1 > *v);
    let fmt: Vec<String> = by_model.iter().map(|(m, v)| format!("{m} {v:.3}")).collect();
    verdict(
        u_shape && pauli_worst,
        format!(
            "4-bit Pauli max cross fidelity: L=1 {first:.3}, min {min:.3} at L={l_star}, L=10 {last:.3}; \
             5-bit L=5: {}",
            fmt.join(", ")
        ),
    )
}

fn criterion_8() -> Verdict {
    let spec = EncodingSpec::new(Variant::LocalLinear { layers: 1 }, 3).unwrap();
    let files = TrialConfig::integer_files(9);
    let mut maxima = Vec::new();
    let mut diag_err: f64 = 0.0;
    for nonce in TrialConfig::trial_nonces(MASTER_NONCE, 20) {
        let report = overlap_matrix(&fingerprints(&spec, &files, &nonce).unwrap()).unwrap();
        for i in 0..report.len() {
            diag_err = diag_err.max((report.matrix[i][i] - 1.0).abs());
        }
        maxima.push(report.max_offdiag);
    }
    maxima.sort_by(f64::total_cmp);
    let median = (maxima[9] + maxima[10]) / 2.0;
    verdict(
        diag_err < 1e-12 && median < 0.5,
        format!(
            "max |diagonal − 1| {diag_err:.1e}; median over 20 nonces of the max off-diagonal \
             {median:.4} (need < 0.5; range {:.3}..{:.3})",
            maxima[0], maxima[19]
        ),
    )
}

fn criterion_9() -> Verdict {
    let sessions = 10_000;
    let mut s = label_stream("criterion-9");
    let mut pass = true;
    let mut parts = Vec::new();
    for m in 1..=3 {
        let cfg = SessionConfig {
            protocol: Protocol::Ie,
            test: SwapTestKind::Standard,
            epsilon: 0.5f64.powi(m),
        };
        let mut accepts = 0;
        for k in 0..sessions {
            let a = random_file(&mut s, 200);
            let mut b = random_file(&mut s, 200);
            while b == a {
                b = random_file(&mut s, 200);
            }
            let nonce = [&[m as u8][..], &(k as u64).to_be_bytes()].concat();
            let t = run_smp_session(&cfg, &a, &b, &nonce).unwrap();
            assert_eq!(t.copies, m as usize);
            if t.decision == "equal" {
                accepts += 1;
            }
        }
        let rate = accepts as f64 / sessions as f64;
        let p = 0.5f64.powi(m);
        let sigma = (p * (1.0 - p) / sessions as f64).sqrt();
        pass &= rate <= p + 3.0 * sigma;
        parts.push(format!("M={m} {rate:.4} (limit {:.4})", p + 3.0 * sigma));
    }
    verdict(pass, format!("wrong-accept rate over {sessions} sessions: {}", parts.join(", ")))
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 EE max fidelity, 3x3 grid", criterion_1),
        ("2 Haar fidelity law", criterion_2),
        ("3 headline collision bound", criterion_3),
        ("4 graph-state exactness", criterion_4),
        ("5 incremental updates", criterion_5),
        ("6 SWAP-test estimators", criterion_6),
        ("7 noise U-shape and Pauli sensitivity", criterion_7),
        ("8 depth-1 local-linear fidelity", criterion_8),
        ("9 protocol error decay", criterion_9),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.starts_with(f.as_str())) {
            continue;
        }
        let v = run();
        println!("criterion {name}: {} | {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        if !v.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
