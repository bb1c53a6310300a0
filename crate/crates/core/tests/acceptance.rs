//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

mod common;

use num_complex::Complex64;
use spt_core::aklt::{
    build_hamiltonian, edge_algebra, energy_exact, energy_nine_settings, local_order, rabi_bulk, rabi_edge, string_order,
    two_spin_correlations, StringOrderSpec,
};
use spt_core::cluster::{
    all_bulk_outcomes, bulk_edge_table, cluster_hamiltonian_dense, prepare_cluster, project_bulk_edge_bell, ClusterMode,
    EdgeDressing,
};
use spt_core::fit::{fit_decaying_sine, linspace};
use spt_core::harness::{render, run, Experiment, ExperimentConfig, OutcomeChoice, OutputFormat};
use spt_core::linalg::{commutator, max_abs, orthonormal_span, projector_onto, trace_distance, CMatrix};
use spt_core::mps::{
    aklt_state, build_seqgen_unitary, aklt_mps, boundary_vectors, contract_mps, isometry_process_fidelity, prepare_aklt_postselected,
    table2_unitary, Ancilla, PrepMode, TABLE2_ASSIGNMENT,
};
use spt_core::register::{NoiseSpec, QuditRegister};
use spt_core::rng::RngStream;
use spt_core::tomography::{mub_bases, pure_density, reconstruct_linear, reconstruct_mle, simulate_tomography, MleOptions};
use std::time::Instant;

const PAIRS: [(Ancilla, Ancilla); 4] =
    [(Ancilla::Up, Ancilla::Up), (Ancilla::Up, Ancilla::Down), (Ancilla::Down, Ancilla::Up), (Ancilla::Down, Ancilla::Down)];

type Outcome = (bool, String);

fn span_distance(states: &[&QuditRegister], reference: &CMatrix) -> f64 {
    let cols: Vec<_> = states.iter().map(|s| nalgebra::DVector::from_column_slice(s.amplitudes())).collect();
    let span = orthonormal_span(&CMatrix::from_columns(&cols), 1e-10);
    if span.ncols() != reference.ncols() {
        return f64::INFINITY;
    }
    max_abs(&(projector_onto(&span) - projector_onto(reference)))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in 2..=8 {
        for (init, out) in PAIRS {
            let seq = aklt_state(n, init, out).unwrap();
            let (l, r) = boundary_vectors(init, out);
            let mps = contract_mps(&aklt_mps(), n, &l, &r).unwrap();
            let ov = seq.inner(&mps).unwrap().norm();
            worst = worst.max(1.0 - ov);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (worst <= 1e-10 && secs < 10.0, format!("max 1-|overlap| {worst:.2e}, {secs:.2} s"))
}

fn criterion_2() -> Outcome {
    let mut worst_exact = 0.0f64;
    for n in 2..=8 {
        for (init, out) in PAIRS {
            worst_exact = worst_exact.max(energy_exact(&aklt_state(n, init, out).unwrap()).unwrap());
        }
    }
    let mut worst_z = 0.0f64;
    for n in 2..=5 {
        for (k, (init, out)) in PAIRS.iter().enumerate() {
            let st = aklt_state(n, *init, *out).unwrap();
            let r = energy_nine_settings(&st, 10_000, &RngStream::new(1000 + 10 * n as u64 + k as u64)).unwrap();
            worst_z = worst_z.max(r.value.abs() / r.error);
        }
    }
    (worst_exact <= 1e-9 && worst_z <= 3.0, format!("max exact energy {worst_exact:.2e}, max |E|/σ at 1e4 shots {worst_z:.2}"))
}

fn criterion_3() -> Outcome {
    let target = build_seqgen_unitary(&aklt_mps()).unwrap();
    let f = isometry_process_fidelity(&table2_unitary(&TABLE2_ASSIGNMENT), &target);
    let mut worst_overlap = 1.0f64;
    for (init, out) in PAIRS {
        let exact = aklt_state(2, init, out).unwrap();
        let t2 = prepare_aklt_postselected(2, init, out, PrepMode::Table2Circuit, NoiseSpec::NONE, &mut RngStream::new(0));
        let ov = match t2 {
            Ok(p) => p.chain_state.inner(&exact).unwrap().norm_sqr(),
            Err(_) => 0.0,
        };
        worst_overlap = worst_overlap.min(ov);
    }
    (f >= 0.99 && worst_overlap >= 0.99, format!("process fidelity {f:.4}, min N=2 state fidelity {worst_overlap:.4}"))
}

fn criterion_4() -> Outcome {
    let alg = edge_algebra(2).unwrap();
    let comm = max_abs(&(commutator(&alg.xl, &alg.yl) - &alg.zl * Complex64::new(0.0, 2.0)));
    let thetas = linspace(0.0, 4.0 * std::f64::consts::PI, 21);
    let mut lines = Vec::new();
    let mut ok = comm <= 1e-12;
    for n in 2..=5 {
        let mut agree = 0.0f64;
        let mut energy = 0.0f64;
        let mut contrast = 0.0f64;
        for (init, out) in PAIRS {
            let st = aklt_state(n, init, out).unwrap();
            let e = rabi_edge(&st, &thetas).unwrap();
            let b = rabi_bulk(&st, &thetas).unwrap();
            for k in 0..3 {
                for (x, y) in e.values[k].iter().zip(&b.values[k]) {
                    agree = agree.max((x - y).abs());
                }
            }
            energy = energy.max(e.monitor.iter().chain(&b.monitor).fold(0.0, |m, v| m.max(*v)));
            contrast = contrast.max(fit_decaying_sine(&thetas, &e.values[2]).unwrap().amplitude.abs());
        }
        let good = agree <= 1e-9 && energy <= 1e-9 && (contrast - 1.0).abs() <= 1e-6;
        ok &= good;
        lines.push(format!("N={n}: edge-bulk {agree:.1e}, contrast {contrast:.6}, max energy {energy:.1e}"));
    }
    (ok, format!("commutator residual {comm:.1e}; {}", lines.join("; ")))
}

fn criterion_5() -> Outcome {
    let mut worst_xy = 0.0f64;
    for n in 2..=8 {
        for (init, out) in PAIRS {
            for m in local_order(&aklt_state(n, init, out).unwrap()).unwrap() {
                worst_xy = worst_xy.max(m[0].abs()).max(m[1].abs());
            }
        }
    }
    let mut monotone = true;
    let mut raw = Vec::new();
    for (init, out) in PAIRS {
        let st = aklt_state(5, init, out).unwrap();
        let c: Vec<f64> = (1..5).map(|j| two_spin_correlations(&st, 0, j).unwrap().mean_abs).collect();
        monotone &= c.windows(2).all(|w| w[1] < w[0]);
        raw.push(format!("[{}]", c.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>().join(", ")));
    }
    let mut worst_string = 0.0f64;
    let mut smallest = f64::INFINITY;
    for n in [4, 5] {
        for (init, out) in PAIRS {
            let st = aklt_state(n, init, out).unwrap();
            for axis in 0..3 {
                let v = string_order(&st, StringOrderSpec::new(axis)).unwrap();
                worst_string = worst_string.max((v - common::string_oracle(st.amplitudes(), n, axis)).abs());
                smallest = smallest.min(v.abs());
            }
        }
    }
    let ok = worst_xy <= 1e-10 && monotone && worst_string <= 1e-9 && smallest > 1e-3;
    (
        ok,
        format!(
            "max |Sx|,|Sy| {worst_xy:.1e}; N=5 mean |corr| by distance {} (strictly decreasing: {monotone}); string vs oracle {worst_string:.1e}, min |O| {smallest:.4}",
            raw.join(" ")
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut worst = 0.0f64;
    let mut dims = Vec::new();
    for n in 2..=6 {
        let g = build_hamiltonian(n).unwrap().ground_space(1e-9).unwrap();
        dims.push(g.ncols());
        let states: Vec<QuditRegister> = PAIRS.iter().map(|&(i, o)| aklt_state(n, i, o).unwrap()).collect();
        worst = worst.max(span_distance(&states.iter().collect::<Vec<_>>(), &g));
    }
    let (vals, vecs) = spt_core::linalg::eigh(&cluster_hamiltonian_dense(6));
    let e0 = vals[0];
    let keep: Vec<usize> = (0..vals.len()).filter(|&k| (vals[k] - e0).abs() < 1e-9).collect();
    let g = CMatrix::from_columns(&keep.iter().map(|&k| vecs.column(k).into_owned()).collect::<Vec<_>>());
    let cluster: Vec<QuditRegister> = EdgeDressing::ALL.iter().map(|&d| prepare_cluster(6, ClusterMode::CzLadder, d).unwrap()).collect();
    let dc = span_distance(&cluster.iter().collect::<Vec<_>>(), &g);
    let ok = dims.iter().all(|&d| d == 4) && keep.len() == 4 && worst <= 1e-8 && dc <= 1e-8;
    (ok, format!("AKLT kernel dims N=2..6 {dims:?}, span distance {worst:.1e}; H_C N=6 ground dim {}, span distance {dc:.1e}", keep.len()))
}

fn criterion_7() -> Outcome {
    // Printed (bulk, left, right) signs, rows in table order.
    let printed = [[1.0, 1.0, 1.0], [1.0, 1.0, -1.0], [1.0, 1.0, -1.0], [1.0, -1.0, 1.0], [1.0, -1.0, 1.0]];
    let rows = bulk_edge_table(&prepare_cluster(6, ClusterMode::CzLadder, EdgeDressing::PLUS).unwrap()).unwrap();
    let vals: Vec<[f64; 3]> = rows.iter().map(|r| [r.bulk_mean, r.left, r.right]).collect();
    let magnitudes = vals.iter().flatten().all(|v| (v.abs() - 1.0).abs() <= 1e-10);
    let signs = vals.iter().zip(&printed).all(|(v, p)| v.iter().zip(p).all(|(a, b)| a * b > 0.0));
    let pairs = (0..3).all(|k| (vals[1][k] - vals[2][k]).abs() <= 1e-10 && (vals[3][k] - vals[4][k]).abs() <= 1e-10);
    let show: Vec<String> = rows.iter().zip(&vals).map(|(r, v)| format!("{} ({:+.0},{:+.0},{:+.0})", r.operator, v[0], v[1], v[2])).collect();
    (signs && magnitudes && pairs, format!("signs match: {signs}, unit magnitudes: {magnitudes}, row pairs equal: {pairs}; {}", show.join(", ")))
}

fn criterion_8() -> Outcome {
    let st = prepare_cluster(6, ClusterMode::CzLadder, EdgeDressing::PLUS).unwrap();
    let outcomes = all_bulk_outcomes(6);
    let proj: Vec<_> = outcomes.iter().map(|o| project_bulk_edge_bell(&st, o).unwrap()).collect();
    let worst = proj.iter().map(|b| 1.0 - b.fidelity).fold(0.0, f64::max);
    let entropy = proj.iter().map(|b| b.entropy).fold(0.0, f64::max);
    (outcomes.len() == 16 && worst <= 1e-10, format!("{} outcomes, max 1-F {worst:.1e}, max edge entropy {entropy:.1e} bits", outcomes.len()))
}

fn random_state(n: usize, seed: u64) -> QuditRegister {
    let mut r = RngStream::new(seed);
    let amps = (0..3usize.pow(n as u32)).map(|_| Complex64::new(r.uniform() - 0.5, r.uniform() - 0.5)).collect();
    QuditRegister::from_amplitudes(&vec![3; n], amps).unwrap()
}

fn criterion_9() -> Outcome {
    let mut exact_worst = 0.0f64;
    for n in [1, 2] {
        for seed in 0..5 {
            let st = random_state(n, 900 + seed);
            let target = pure_density(&st);
            let rec = simulate_tomography(&st, None, &RngStream::new(0)).unwrap();
            exact_worst = exact_worst.max(trace_distance(&reconstruct_linear(&rec).unwrap(), &target));
            exact_worst = exact_worst.max(trace_distance(&reconstruct_mle(&rec, MleOptions::default()).unwrap().rho, &target));
        }
    }
    let mut medians_ok = true;
    let mut shown = Vec::new();
    for n in [1, 2] {
        let st = random_state(n, 77);
        let target = pure_density(&st);
        let med: Vec<f64> = [100usize, 1_000, 10_000]
            .iter()
            .map(|&shots| {
                let mut d: Vec<f64> = (0..50u64)
                    .map(|s| {
                        let rec = simulate_tomography(&st, Some(shots), &RngStream::new(s * 7919 + shots as u64)).unwrap();
                        trace_distance(&reconstruct_linear(&rec).unwrap(), &target)
                    })
                    .collect();
                d.sort_by(f64::total_cmp);
                0.5 * (d[24] + d[25])
            })
            .collect();
        medians_ok &= med[0] > med[1] && med[1] > med[2];
        shown.push(format!("n={n} [{:.4}, {:.4}, {:.4}]", med[0], med[1], med[2]));
    }
    let mub = mub_bases().unbiasedness_defect();
    (
        exact_worst < 1e-8 && medians_ok && mub <= 1e-12,
        format!("exact recovery {exact_worst:.1e}; medians {}; MUB defect {mub:.1e}", shown.join(" ")),
    )
}

fn determinism_configs() -> Vec<ExperimentConfig> {
    let mut out = Vec::new();
    for e in Experiment::ALL {
        let (lo, _) = e.n_bounds();
        let n = lo + lo % 2;
        let mut c = ExperimentConfig::new(e, n).with_seed(42);
        c.shots = if e == Experiment::ClusterVerify { 32 } else { 500 };
        if e == Experiment::AkltPrepare {
            c.ancilla_outcome = OutcomeChoice::Sample;
        }
        c.theta_points = 7;
        out.push(c);
    }
    let mut noisy = ExperimentConfig::new(Experiment::AkltEnergy, 3).with_seed(5).with_noise(NoiseSpec { p_two_site: 0.02, p_one_site: 0.01 });
    noisy.trajectories = 50;
    out.push(noisy);
    out
}

fn criterion_10(suite_start: Instant) -> Outcome {
    let mut mismatched = Vec::new();
    for c in determinism_configs() {
        for fmt in [OutputFormat::Table, OutputFormat::Doc] {
            let a = render(&run(&c).unwrap(), fmt);
            let b = render(&run(&c).unwrap(), fmt);
            if a != b {
                mismatched.push(c.experiment.name());
            }
        }
    }
    let secs = suite_start.elapsed().as_secs_f64();
    (mismatched.is_empty() && secs < 300.0, format!("{} configs x 2 formats, mismatches {mismatched:?}; suite time so far {secs:.1} s", determinism_configs().len()))
}

fn criterion_11() -> Outcome {
    let noise = NoiseSpec { p_two_site: 0.02, p_one_site: 0.0 };
    let mut e = ExperimentConfig::new(Experiment::AkltEnergy, 3).with_seed(2024).with_noise(noise);
    e.trajectories = 400;
    let energy = run(&e).unwrap().report("energy").unwrap().clone();
    let mut r = ExperimentConfig::new(Experiment::RabiEdge, 2).with_seed(2025).with_noise(noise);
    r.trajectories = 400;
    r.ancilla_outcome = OutcomeChoice::Postselect(Ancilla::Down);
    let contrast = run(&r).unwrap().value("contrast_z").unwrap();
    let pinned = (energy.value - 0.047514340344167835).abs() < 1e-9 && (contrast - 0.9605757196495581).abs() < 1e-9;
    let ok = energy.value > 3.0 * energy.error && contrast < 1.0 - 1e-6 && pinned;
    (ok, format!("energy {:.6} ± {:.6}, Rabi contrast {contrast:.6}, pinned values reproduced: {pinned}", energy.value, energy.error))
}

fn main() {
    let start = Instant::now();
    let criteria: Vec<(usize, Box<dyn Fn() -> Outcome>)> = vec![
        (1, Box::new(criterion_1)),
        (2, Box::new(criterion_2)),
        (3, Box::new(criterion_3)),
        (4, Box::new(criterion_4)),
        (5, Box::new(criterion_5)),
        (6, Box::new(criterion_6)),
        (7, Box::new(criterion_7)),
        (8, Box::new(criterion_8)),
        (9, Box::new(criterion_9)),
        (11, Box::new(criterion_11)),
        (10, Box::new(move || criterion_10(start))),
    ];
    let mut results: Vec<(usize, bool, String)> = criteria.iter().map(|(k, f)| {
        let (ok, detail) = f();
        (*k, ok, detail)
    }).collect();
    results.sort_by_key(|r| r.0);
    let mut failed = 0;
    for (k, ok, detail) in &results {
        println!("criterion {k}: {} ({detail})", if *ok { "PASS" } else { "FAIL" });
        failed += usize::from(!ok);
    }
    println!("acceptance: {} passed, {failed} failed, {:.1} s", results.len() - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
