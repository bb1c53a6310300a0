use num_complex::Complex64;
use spt_core::linalg::trace_distance;
use spt_core::register::QuditRegister;
use spt_core::rng::RngStream;
use spt_core::tomography::*;

fn random_state(n: usize, seed: u64) -> QuditRegister {
    let mut r = RngStream::new(seed);
    let amps = (0..3usize.pow(n as u32)).map(|_| Complex64::new(r.uniform() - 0.5, r.uniform() - 0.5)).collect();
    QuditRegister::from_amplitudes(&vec![3; n], amps).unwrap()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

#[test]
fn mub_overlaps_are_one_third() {
    let b = mub_bases();
    for p in 0..4 {
        for q in 0..4 {
            if p == q {
                continue;
            }
            for i in 0..3 {
                for j in 0..3 {
                    let ov: Complex64 = (0..3).map(|k| b.bases[p][(i, k)] * b.bases[q][(j, k)].conj()).sum();
                    assert!((ov.norm_sqr() - 1.0 / 3.0).abs() < 1e-12, "bases {p},{q} rows {i},{j}");
                }
            }
        }
    }
    assert!(b.unbiasedness_defect() < 1e-12);
}

#[test]
fn exact_data_recovers_random_states() {
    for n in [1, 2] {
        for seed in 0..10 {
            let st = random_state(n, 100 + seed);
            let target = pure_density(&st);
            let rec = simulate_tomography(&st, None, &RngStream::new(0)).unwrap();
            let li = reconstruct_linear(&rec).unwrap();
            assert!(trace_distance(&li, &target) < 1e-8, "n={n} seed={seed} LI");
            let mle = reconstruct_mle(&rec, MleOptions::default()).unwrap();
            assert!(trace_distance(&mle.rho, &target) < 1e-8, "n={n} seed={seed} MLE {}", trace_distance(&mle.rho, &target));
        }
    }
}

#[test]
fn mle_beats_projected_linear_inversion_at_300_shots() {
    // Paired over 100 one-qutrit cases.
    let mut diffs = Vec::new();
    for case in 0..100u64 {
        let st = random_state(1, 5000 + case);
        let rec = simulate_tomography(&st, Some(300), &RngStream::new(case)).unwrap();
        let li = project_psd(&reconstruct_linear(&rec).unwrap());
        let mle = reconstruct_mle(&rec, MleOptions::default()).unwrap();
        diffs.push(fidelity(&mle.rho, &st).unwrap() - fidelity(&li, &st).unwrap());
    }
    let losses: Vec<f64> = diffs.iter().copied().filter(|d| *d < -1e-9).collect();
    let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
    println!("paired mean gain {mean:.3e}, losses {losses:?}");
    assert!(mean > 0.0, "mean paired gain {mean}");
    assert!(losses.len() <= 5, "{} losses: {losses:?}", losses.len());
    assert!(losses.iter().all(|d| *d > -1e-3));
}

#[test]
fn sampled_error_shrinks_with_shots() {
    for n in [1, 2] {
        let st = random_state(n, 77);
        let target = pure_density(&st);
        let medians: Vec<f64> = [100usize, 1_000, 10_000]
            .iter()
            .map(|&shots| {
                median(
                    (0..50u64)
                        .map(|seed| {
                            let rec = simulate_tomography(&st, Some(shots), &RngStream::new(seed * 7919 + shots as u64)).unwrap();
                            trace_distance(&reconstruct_linear(&rec).unwrap(), &target)
                        })
                        .collect(),
                )
            })
            .collect();
        assert!(medians[0] > medians[1] && medians[1] > medians[2], "n={n}: {medians:?}");
    }
}

#[test]
fn reconstruction_commutes_with_qutrit_swap() {
    let st = random_state(2, 31);
    let mut swapped_amps = vec![Complex64::new(0.0, 0.0); 9];
    for a in 0..3 {
        for b in 0..3 {
            swapped_amps[b * 3 + a] = st.amplitudes()[a * 3 + b];
        }
    }
    let sw = QuditRegister::from_amplitudes(&[3, 3], swapped_amps).unwrap();
    let rho = reconstruct_linear(&simulate_tomography(&st, Some(500), &RngStream::new(4)).unwrap()).unwrap();
    let rho_sw = reconstruct_linear(&simulate_tomography(&sw, None, &RngStream::new(4)).unwrap()).unwrap();
    let perm = |i: usize| (i % 3) * 3 + i / 3;
    // Exact data on the swapped state equals the swapped exact reconstruction.
    let exact = reconstruct_linear(&simulate_tomography(&st, None, &RngStream::new(4)).unwrap()).unwrap();
    for i in 0..9 {
        for j in 0..9 {
            assert!((exact[(perm(i), perm(j))] - rho_sw[(i, j)]).norm() < 1e-10);
        }
    }
    assert!((rho.trace().re - 1.0).abs() < 1e-10);
}

#[test]
fn measurement_map_is_informationally_complete() {
    let m = single_qutrit_map(&mub_bases());
    let svd = m.clone().svd(false, false);
    assert_eq!(svd.singular_values.iter().filter(|&&s| s > 1e-10).count(), 9);
    let two = m.kronecker(&m);
    let svd2 = two.svd(false, false);
    assert_eq!(svd2.singular_values.iter().filter(|&&s| s > 1e-10).count(), 81);
}

#[test]
fn records_serialize() {
    let st = random_state(1, 3);
    let rec = simulate_tomography(&st, Some(10), &RngStream::new(1)).unwrap();
    let text = serde_json::to_string(&rec[0]).unwrap();
    assert!(text.contains("\"shots\":10"));
}
