use proptest::prelude::*;
use supercheq::haar::sample_haar_unitary;
use supercheq::sim::{fidelity_with, run_noisy, DensityMatrix, MixedMetric, NoiseModel};
use supercheq::stream::derive_stream;
use supercheq::{Circuit, FileBits, Gate, QuantumState, StateVector};

fn random_circuit(n: usize, ops: &[(u8, usize, usize, f64, f64)]) -> Circuit {
    let mut c = Circuit::new(n);
    let mut s = derive_stream(&FileBits::zeros(0), b"random-circuit");
    for &(kind, a, b, x, y) in ops {
        let q = a % n;
        let mut r = b % n;
        if r == q {
            r = (q + 1) % n;
        }
        let gate = match kind % 8 {
            0 => Gate::H(q),
            1 => Gate::S(q),
            2 => Gate::Rz { theta: x, qubit: q },
            3 => Gate::Gr { theta: x, phi: y },
            4 => Gate::U2 {
                matrix: sample_haar_unitary(&mut s, 2),
                qubit: q,
            },
            5 if n > 1 => Gate::Cz(q, r),
            6 if n > 1 => Gate::Cx(q, r),
            7 if n > 1 => Gate::U4 {
                matrix: sample_haar_unitary(&mut s, 4),
                qubits: (q, r),
            },
            _ => Gate::H(q),
        };
        c.push(gate).unwrap();
    }
    c
}

fn ops() -> impl Strategy<Value = Vec<(u8, usize, usize, f64, f64)>> {
    prop::collection::vec((any::<u8>(), 0usize..8, 0usize..8, -7.0f64..7.0, -7.0f64..7.0), 0..30)
}

proptest! {
    #[test]
    fn bits_round_trip(bits in prop::collection::vec(any::<bool>(), 0..300)) {
        let f = FileBits::from_bools(&bits);
        prop_assert_eq!(f.len(), bits.len());
        prop_assert_eq!(f.iter().collect::<Vec<_>>(), bits.clone());
        prop_assert_eq!(FileBits::from_packed(f.as_bytes().to_vec(), f.len()).unwrap(), f.clone());
        prop_assert_eq!(f.to_string().parse::<FileBits>().unwrap(), f.clone());
        prop_assert_eq!(f.count_ones(), bits.iter().filter(|&&b| b).count());
    }

    #[test]
    fn pad_bits_are_ignored(bytes in prop::collection::vec(any::<u8>(), 1..20), cut in 1usize..8) {
        let len = bytes.len() * 8 - cut;
        let a = FileBits::from_packed(bytes.clone(), len).unwrap();
        let mut noisy = bytes;
        let last = noisy.len() - 1;
        noisy[last] ^= (1u8 << cut) - 1;
        prop_assert_eq!(a, FileBits::from_packed(noisy, len).unwrap());
    }

    #[test]
    fn streams_are_deterministic(bits in prop::collection::vec(any::<bool>(), 0..100), nonce in prop::collection::vec(any::<u8>(), 0..16)) {
        let f = FileBits::from_bools(&bits);
        let mut a = derive_stream(&f, &nonce);
        let mut b = derive_stream(&f, &nonce);
        for _ in 0..50 {
            prop_assert_eq!(a.next_u64(), b.next_u64());
            let angle = a.sample_uniform_angle();
            prop_assert_eq!(angle, b.sample_uniform_angle());
            prop_assert!((0.0..std::f64::consts::TAU).contains(&angle));
        }
        let mut fork = derive_stream(&f, &nonce).fork(b"x");
        let mut plain = derive_stream(&f, &nonce);
        prop_assert_ne!(fork.next_u64(), plain.next_u64());
    }

    #[test]
    fn file_length_separates_streams(value in any::<u32>(), extra in 1usize..8) {
        let short = FileBits::from_uint_width(u64::from(value), 32);
        let long = FileBits::from_uint_width(u64::from(value), 32 + extra);
        prop_assert_ne!(derive_stream(&short, b"").next_u64(), derive_stream(&long, b"").next_u64());
    }

    #[test]
    fn circuits_preserve_norm(n in 1usize..6, ops in ops()) {
        let c = random_circuit(n, &ops);
        let psi = supercheq::sim::run_circuit(&c, &StateVector::plus(n)).unwrap();
        prop_assert!((psi.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn noiseless_density_matches_statevector(n in 1usize..5, ops in ops()) {
        let c = random_circuit(n, &ops);
        let rho = run_noisy(&c, &NoiseModel::None).unwrap();
        let psi = supercheq::sim::run_circuit(&c, &StateVector::zero(n)).unwrap();
        let pure = DensityMatrix::from_pure(&psi);
        for (a, b) in rho.entries().iter().zip(pure.entries()) {
            prop_assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn noisy_density_stays_physical(
        n in 1usize..5,
        ops in ops(),
        p in (0.0f64..0.05, 0.0f64..0.05, 0.0f64..0.05),
        model in 0u8..3,
    ) {
        let noise = match model {
            0 => NoiseModel::Pauli { p_x: p.0, p_y: p.1, p_z: p.2 },
            1 => NoiseModel::thermal_default(),
            _ => NoiseModel::Coherent { probability: p.0 * 10.0, angle: p.1 * 20.0 },
        };
        let c = random_circuit(n, &ops);
        let rho = run_noisy(&c, &noise).unwrap();
        rho.check_invariants().unwrap();
        prop_assert!(rho.purity() <= 1.0 + 1e-10);
        let sigma = run_noisy(&c, &NoiseModel::None).unwrap();
        let (a, b) = (QuantumState::Mixed(rho), QuantumState::Mixed(sigma));
        for metric in [MixedMetric::SwapOverlap, MixedMetric::Uhlmann] {
            let f = fidelity_with(&a, &b, metric).unwrap();
            prop_assert!((0.0..=1.0).contains(&f));
            prop_assert!((f - fidelity_with(&b, &a, metric).unwrap()).abs() < 1e-8);
        }
    }
}
