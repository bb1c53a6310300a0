use num_complex::Complex64;
use proptest::prelude::*;
use spt_core::aklt::{energy_exact, energy_nine_settings_exact, local_order};
use spt_core::cluster::{ClusterMode, EdgeDressing};
use spt_core::harness::{fmt12, Experiment, ExperimentConfig, OutcomeChoice};
use spt_core::linalg::{expm_hermitian, is_unitary};
use spt_core::mps::{aklt_state, build_seqgen_unitary, aklt_mps, Ancilla, PrepMode};
use spt_core::register::{LevelPair, NoiseSpec, QuditRegister};
use spt_core::rng::RngStream;
use spt_core::spin::SpinOps;

fn random_state(dims: &[usize], seed: u64) -> QuditRegister {
    let mut r = RngStream::new(seed);
    let total: usize = dims.iter().product();
    let amps = (0..total).map(|_| Complex64::new(r.uniform() - 0.5, r.uniform() - 0.5)).collect();
    QuditRegister::from_amplitudes(dims, amps).unwrap()
}

fn dims_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2usize..=3, 2..=4)
}

#[derive(Debug, Clone)]
enum Gate {
    Rot { site: usize, a: usize, b: usize, theta: f64, phi: f64 },
    Phase { site: usize, a: usize, b: usize, theta: f64 },
    Ms { s1: usize, s2: usize, theta: f64, phi: f64 },
}

fn gate_strategy() -> impl Strategy<Value = Gate> {
    let ang = -7.0f64..7.0;
    prop_oneof![
        (0usize..8, 0usize..3, 1usize..3, ang.clone(), ang.clone()).prop_map(|(site, a, b, theta, phi)| Gate::Rot { site, a, b, theta, phi }),
        (0usize..8, 0usize..3, 1usize..3, ang.clone()).prop_map(|(site, a, b, theta)| Gate::Phase { site, a, b, theta }),
        (0usize..8, 1usize..8, ang.clone(), ang).prop_map(|(s1, d, theta, phi)| Gate::Ms { s1, s2: s1 + d, theta, phi }),
    ]
}

/// Clamp a generated gate onto the register; `None` if it cannot be placed.
fn place(g: &Gate, dims: &[usize]) -> Option<Gate> {
    let n = dims.len();
    let pair = |site: usize, a: usize, b: usize| {
        let s = site % n;
        let d = dims[s];
        let (a, b) = (a % d, (a + b) % d);
        (a != b).then_some((s, a, b))
    };
    match *g {
        Gate::Rot { site, a, b, theta, phi } => pair(site, a, b).map(|(site, a, b)| Gate::Rot { site, a, b, theta, phi }),
        Gate::Phase { site, a, b, theta } => pair(site, a, b).map(|(site, a, b)| Gate::Phase { site, a, b, theta }),
        Gate::Ms { s1, s2, theta, phi } => {
            let (x, y) = (s1 % n, s2 % n);
            (x != y).then_some(Gate::Ms { s1: x, s2: y, theta, phi })
        }
    }
}

fn apply(reg: &mut QuditRegister, g: &Gate) {
    match *g {
        Gate::Rot { site, a, b, theta, phi } => reg.rotate(LevelPair::new(site, a, b), theta, phi).unwrap(),
        Gate::Phase { site, a, b, theta } => reg.rotate_z(LevelPair::new(site, a, b), theta).unwrap(),
        Gate::Ms { s1, s2, theta, phi } => reg.ms(LevelPair::new(s1, 0, 1), LevelPair::new(s2, 0, 1), theta, phi).unwrap(),
    }
}

fn touched(g: &Gate) -> Vec<usize> {
    match *g {
        Gate::Rot { site, .. } | Gate::Phase { site, .. } => vec![site],
        Gate::Ms { s1, s2, .. } => vec![s1, s2],
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gates_preserve_norm(dims in dims_strategy(), gates in prop::collection::vec(gate_strategy(), 1..12), seed in any::<u64>()) {
        let mut reg = random_state(&dims, seed);
        for g in gates.iter().filter_map(|g| place(g, &dims)) {
            apply(&mut reg, &g);
        }
        prop_assert!((reg.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gates_act_locally(dims in dims_strategy(), g in gate_strategy(), seed in any::<u64>()) {
        let Some(g) = place(&g, &dims) else { return Ok(()) };
        let before = random_state(&dims, seed);
        let mut after = before.clone();
        apply(&mut after, &g);
        let rest: Vec<usize> = (0..dims.len()).filter(|s| !touched(&g).contains(s)).collect();
        if rest.is_empty() {
            return Ok(());
        }
        let a = before.reduced_density_matrix(&rest).unwrap();
        let b = after.reduced_density_matrix(&rest).unwrap();
        prop_assert!((a - b).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-12);
    }

    #[test]
    fn gate_matrices_are_unitary(d in 2usize..=3, a in 0usize..3, b in 1usize..3, theta in -7.0f64..7.0, phi in -7.0f64..7.0) {
        let (a, b) = (a % d, (a + b) % d);
        prop_assume!(a != b);
        let mut cols = Vec::new();
        for k in 0..d {
            let mut r = QuditRegister::product_state(&[d], &[k]).unwrap();
            r.rotate(LevelPair::new(0, a, b), theta, phi).unwrap();
            r.rotate_z(LevelPair::new(0, a, b), theta * 0.37).unwrap();
            cols.push(nalgebra::DVector::from_column_slice(r.amplitudes()));
        }
        prop_assert!(is_unitary(&nalgebra::DMatrix::from_columns(&cols), 1e-12));
    }

    #[test]
    fn measurement_is_deterministic(dims in dims_strategy(), seed in any::<u64>(), key in any::<u64>()) {
        let st = random_state(&dims, seed);
        let run = || {
            let mut r = RngStream::new(key);
            let mut s = st.clone();
            let outs: Vec<usize> = (0..dims.len()).map(|site| s.measure(site, &mut r).unwrap()).collect();
            (outs, s)
        };
        prop_assert_eq!(run(), run());
    }

    #[test]
    fn nine_settings_exact_path_is_unbiased(n in 2usize..=4, seed in any::<u64>()) {
        let st = random_state(&vec![3; n], seed);
        let a = energy_nine_settings_exact(&st).unwrap();
        let b = energy_exact(&st).unwrap();
        prop_assert!((a - b).abs() < 1e-10, "{} vs {}", a, b);
    }

    #[test]
    fn energy_and_magnetization_length_are_rotation_invariant(
        n in 2usize..=4, seed in any::<u64>(), axis in prop::array::uniform3(-1.0f64..1.0), theta in -4.0f64..4.0
    ) {
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        prop_assume!(norm > 1e-3);
        let s = SpinOps::new();
        let gen = &s.sx * Complex64::new(axis[0] / norm, 0.0) + &s.sy * Complex64::new(axis[1] / norm, 0.0) + &s.sz * Complex64::new(axis[2] / norm, 0.0);
        let u = expm_hermitian(&gen, theta);
        let st = random_state(&vec![3; n], seed);
        let mut rot = st.clone();
        for j in 0..n {
            rot.apply_operator(&[j], &u).unwrap();
        }
        prop_assert!((energy_exact(&st).unwrap() - energy_exact(&rot).unwrap()).abs() < 1e-10);
        let len = |v: &[f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let (m0, m1) = (local_order(&st).unwrap(), local_order(&rot).unwrap());
        for j in 0..n {
            prop_assert!((len(&m0[j]) - len(&m1[j])).abs() < 1e-10);
            let along0: f64 = (0..3).map(|k| m0[j][k] * axis[k] / norm).sum();
            let along1: f64 = (0..3).map(|k| m1[j][k] * axis[k] / norm).sum();
            prop_assert!((along0 - along1).abs() < 1e-10);
        }
    }

    #[test]
    fn depolarizing_keeps_norm(dims in dims_strategy(), seed in any::<u64>(), p in 0.0f64..=1.0) {
        let mut st = random_state(&dims, seed);
        let mut r = RngStream::new(seed ^ 0xabc);
        st.depolarize(&[0, dims.len() - 1], p, &mut r).unwrap();
        prop_assert!((st.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn twelve_digit_rendering_round_trips(x in prop::num::f64::NORMAL) {
        let back: f64 = fmt12(x).parse().unwrap();
        prop_assert!((back - x).abs() <= 5e-12 * x.abs());
    }

    #[test]
    fn config_round_trip(
        e in 0usize..12, n in 2usize..=10, shots in 0usize..100_000, seed in prop::option::of(any::<u64>()),
        p2 in 0.0f64..1.0, p1 in 0.0f64..1.0, t0 in -10.0f64..10.0, t1 in -10.0f64..30.0, pts in 1usize..200,
        flags in prop::array::uniform6(any::<bool>()), traj in 1usize..5000
    ) {
        let mut cfg = ExperimentConfig::new(Experiment::ALL[e], n);
        cfg.shots = shots;
        cfg.seed = seed;
        cfg.noise = NoiseSpec { p_two_site: p2, p_one_site: p1 };
        cfg.theta_start = t0;
        cfg.theta_stop = t1;
        cfg.theta_points = pts;
        cfg.prep = if flags[0] { PrepMode::Table2Circuit } else { PrepMode::ExactUnitary };
        cfg.ancilla_init = if flags[1] { Ancilla::Down } else { Ancilla::Up };
        cfg.ancilla_outcome = if flags[2] { OutcomeChoice::Sample } else { OutcomeChoice::Postselect(Ancilla::Down) };
        cfg.cluster_mode = if flags[3] { ClusterMode::MsGlobal } else { ClusterMode::CzLadder };
        cfg.dressing = EdgeDressing::new(if flags[4] { -1 } else { 1 }, if flags[5] { -1 } else { 1 }).unwrap();
        cfg.trajectories = traj;
        prop_assert_eq!(ExperimentConfig::parse(&cfg.to_text()).unwrap(), cfg);
    }
}

#[test]
fn seqgen_unitary_is_unitary_and_embeds_the_mps() {
    let u = build_seqgen_unitary(&aklt_mps()).unwrap();
    assert!(is_unitary(&u.matrix, 1e-12));
    // Columns (β·3 + s, α·3 + 2) carry A^s_{βα}.
    let t = aklt_mps();
    for s in 0..3 {
        for beta in 0..2 {
            for alpha in 0..2 {
                let diff = u.matrix[(beta * 3 + s, alpha * 3 + 2)] - t.matrices[s][(beta, alpha)];
                assert!(diff.norm() < 1e-12);
            }
        }
    }
}

#[test]
fn kernel_states_are_orthogonal_across_sectors() {
    // (↑,↓) and (↓,↑) carry opposite total S^z and cannot overlap.
    for n in 2..=6 {
        let a = aklt_state(n, Ancilla::Up, Ancilla::Down).unwrap();
        let b = aklt_state(n, Ancilla::Down, Ancilla::Up).unwrap();
        assert!(a.inner(&b).unwrap().norm() < 1e-12);
    }
}
