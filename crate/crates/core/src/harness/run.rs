use super::config::{Experiment, ExperimentConfig, OutcomeChoice};
use super::emit::{ResultTable, RunOutput, ARTIFACT_VERSION};
use crate::aklt::{
    edge_algebra, energy_exact, energy_nine_settings, energy_nine_settings_exact, local_order, rabi_bulk, rabi_edge,
    string_order, two_spin_correlations, RabiTrajectory, StringForm, StringOrderSpec,
};
use crate::cluster::{
    all_bulk_outcomes, bulk_edge_table, pauli_correlation_scan, prepare_cluster_noisy, project_bulk_edge_bell, rabi_cluster,
    stabilizer_fidelity, FidelityMethod, PauliString, BELL_LABELS,
};
use crate::error::{Result, SimError};
use crate::fit::fit_decaying_sine;
use crate::linalg::{eigh, expm_hermitian, trace_distance, CMatrix};
use crate::mps::{
    aklt_state, build_seqgen_unitary, aklt_mps, isometry_process_fidelity, outcome_probabilities, prepare_aklt,
    prepare_aklt_postselected, sequential_register, table2_unitary, PrepMode, PreparedState, TABLE2_ASSIGNMENT,
};
use crate::register::{NoiseSpec, QuditRegister};
use crate::report::{Moments, ObservableReport};
use crate::rng::RngStream;
use crate::spin::{SpinOps, AXIS_NAMES};
use crate::tomography::{fidelity, project_psd, pure_density, reconstruct_linear, reconstruct_mle, simulate_tomography, MleOptions};
use rayon::prelude::*;

const MEASURE_KEY: u64 = 1 << 40;
const SAMPLE_KEY: u64 = 1 << 41;

type Values = Vec<(f64, f64)>;

pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    config.validate()?;
    let base = RngStream::new(config.seed.unwrap_or(0));
    let (mut reports, tables) = match config.experiment {
        Experiment::AkltPrepare => aklt_prepare(config, &base)?,
        Experiment::AkltEnergy => aklt_energy(config, &base)?,
        Experiment::RabiEdge | Experiment::RabiBulk => rabi_aklt(config, &base)?,
        Experiment::LocalOrder => local_order_run(config, &base)?,
        Experiment::Correlations => correlations_run(config, &base)?,
        Experiment::StringOrder => string_order_run(config, &base)?,
        Experiment::ClusterVerify => cluster_verify(config, &base)?,
        Experiment::ClusterTable1 => cluster_table1(config, &base)?,
        Experiment::ClusterBell => cluster_bell(config, &base)?,
        Experiment::ClusterRabi => cluster_rabi_run(config, &base)?,
        Experiment::Tomography => tomography_run(config, &base)?,
    };
    let hash = config.hash();
    let seed = config.seed.map_or("none".to_string(), |s| s.to_string());
    for r in &mut reports {
        r.metadata.insert("config_hash".into(), hash[..12].to_string());
        r.metadata.insert("seed".into(), seed.clone());
        r.metadata.insert("version".into(), ARTIFACT_VERSION.to_string());
    }
    Ok(RunOutput { config: config.clone(), reports, tables })
}

type Out = (Vec<ObservableReport>, Vec<ResultTable>);

fn report(name: impl Into<String>, (v, e): (f64, f64), shot_mode: bool) -> ObservableReport {
    if shot_mode || e > 0.0 {
        ObservableReport::sampled(name, v, e)
    } else {
        ObservableReport::exact(name, v)
    }
}

fn stochastic(cfg: &ExperimentConfig) -> bool {
    cfg.shots > 0 || !cfg.noise.is_noiseless()
}

fn trajectory_count(cfg: &ExperimentConfig) -> usize {
    if cfg.noise.is_noiseless() {
        1
    } else {
        cfg.trajectories
    }
}

/// Weighted mean over trajectories; the error is the weighted spread of the means.
fn combine(rows: Vec<Option<(f64, Values)>>) -> Result<Values> {
    let rows: Vec<(f64, Values)> = rows.into_iter().flatten().filter(|(w, _)| *w > 0.0).collect();
    if rows.is_empty() {
        return Err(SimError::DegenerateProjection("every trajectory has zero weight".into()));
    }
    if rows.len() == 1 {
        return Ok(rows.into_iter().next().expect("one row").1);
    }
    let wsum: f64 = rows.iter().map(|(w, _)| w).sum();
    let width = rows[0].1.len();
    Ok((0..width)
        .map(|k| {
            let mean = rows.iter().map(|(w, v)| w * v[k].0).sum::<f64>() / wsum;
            let var = rows.iter().map(|(w, v)| (w * (v[k].0 - mean)).powi(2)).sum::<f64>();
            (mean, var.sqrt() / wsum)
        })
        .collect())
}

fn aklt_trajectory(cfg: &ExperimentConfig, rng: &mut RngStream) -> Result<Option<(f64, PreparedState)>> {
    let (n, init) = (cfg.n, cfg.ancilla_init);
    match cfg.ancilla_outcome {
        OutcomeChoice::Sample => Ok(Some((1.0, prepare_aklt(n, init, cfg.prep, cfg.noise, rng)?))),
        OutcomeChoice::Postselect(o) if cfg.noise.is_noiseless() => {
            Ok(Some((1.0, prepare_aklt_postselected(n, init, o, cfg.prep, NoiseSpec::NONE, rng)?)))
        }
        OutcomeChoice::Postselect(o) => {
            let joint = sequential_register(n, init, cfg.prep, cfg.noise, rng)?;
            match joint.project_out(0, o.level()) {
                Ok((p, chain)) => Ok(Some((
                    p,
                    PreparedState { chain_state: chain, ancilla_init: init, ancilla_outcome: o, outcome_probability: p },
                ))),
                Err(SimError::DegenerateProjection(_)) => Ok(None),
                Err(e) => Err(e),
            }
        }
    }
}

/// Evaluate `f` on every AKLT trajectory and aggregate.
fn aklt_average<F>(cfg: &ExperimentConfig, base: &RngStream, f: F) -> Result<Values>
where
    F: Fn(&PreparedState, &mut RngStream) -> Result<Values> + Sync,
{
    let rows: Result<Vec<_>> = (0..trajectory_count(cfg))
        .into_par_iter()
        .map(|t| {
            let mut prep_rng = base.substream(t as u64);
            let mut meas_rng = base.substream(MEASURE_KEY + t as u64);
            match aklt_trajectory(cfg, &mut prep_rng)? {
                Some((w, prep)) => Ok(Some((w, f(&prep, &mut meas_rng)?))),
                None => Ok(None),
            }
        })
        .collect();
    combine(rows?)
}

fn cluster_average<F>(cfg: &ExperimentConfig, base: &RngStream, f: F) -> Result<Values>
where
    F: Fn(&QuditRegister, &mut RngStream) -> Result<Values> + Sync,
{
    let rows: Result<Vec<_>> = (0..trajectory_count(cfg))
        .into_par_iter()
        .map(|t| {
            let mut prep_rng = base.substream(t as u64);
            let mut meas_rng = base.substream(MEASURE_KEY + t as u64);
            let state = prepare_cluster_noisy(cfg.n, cfg.cluster_mode, cfg.dressing, cfg.noise, &mut prep_rng)?;
            Ok(Some((1.0, f(&state, &mut meas_rng)?)))
        })
        .collect();
    combine(rows?)
}

fn exact(v: f64) -> (f64, f64) {
    (v, 0.0)
}

/// Per-shot eigenvalues of `S̃^{axes[j]}_j` for every site, measured jointly.
pub fn sample_spin_basis(state: &QuditRegister, axes: &[usize], shots: usize, rng: &mut RngStream) -> Result<Vec<Vec<f64>>> {
    let s = SpinOps::new();
    let mut rotated = state.clone();
    let mut spectra = Vec::with_capacity(axes.len());
    for (site, &a) in axes.iter().enumerate() {
        let (vals, vecs) = eigh(s.axis(a));
        rotated.apply_operator(&[site], &vecs.adjoint())?;
        spectra.push(vals);
    }
    Ok(rotated
        .sample(shots, rng)
        .into_iter()
        .map(|idx| rotated.digits(idx).iter().zip(&spectra).map(|(&d, sp)| sp[d]).collect())
        .collect())
}

fn moments_of(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let m: Moments = values.collect();
    (m.mean(), m.std_error())
}

fn aklt_prepare(cfg: &ExperimentConfig, base: &RngStream) -> Result<Out> {
    let shot_mode = stochastic(cfg);
    let vals = aklt_average(cfg, base, |prep, _| {
        let oracle = aklt_state(cfg.n, prep.ancilla_init, prep.ancilla_outcome)?;
        Ok(vec![
            exact(prep.outcome_probability),
            exact(energy_exact(&prep.chain_state)?),
            exact(prep.chain_state.fidelity(&oracle)?),
        ])
    })?;
    let mut reports = vec![
        report("outcome_probability", vals[0], shot_mode),
        report("energy", vals[1], shot_mode),
        report("oracle_fidelity", vals[2], shot_mode),
    ];
    if cfg.prep == PrepMode::Table2Circuit {
        let target = build_seqgen_unitary(&aklt_mps())?;
        reports.push(ObservableReport::exact("process_fidelity", isometry_process_fidelity(&table2_unitary(&TABLE2_ASSIGNMENT), &target)));
    }
    if cfg.shots > 0 {
        let joint = sequential_register(cfg.n, cfg.ancilla_init, cfg.prep, NoiseSpec::NONE, &mut base.substream(SAMPLE_KEY))?;
        let p = outcome_probabilities(&joint)?;
        let cdf = [p[0], p[0] + p[1]];
        let mut r = base.substream(SAMPLE_KEY + 1);
        let up = moments_of((0..cfg.shots).map(|_| if r.sample_cdf(&cdf) == 0 { 1.0 } else { 0.0 }));
        reports.push(ObservableReport::sampled("p_up_sampled", up.0, up.1).with_meta("exact", p[0] / (p[0] + p[1])));
    }
    Ok((reports, vec![]))
}

fn aklt_energy(cfg: &ExperimentConfig, base: &RngStream) -> Result<Out> {
    let shots = cfg.shots;
    let vals = aklt_average(cfg, base, |prep, rng| {
        let st = &prep.chain_state;
        let estimate = if shots > 0 {
            let r = energy_nine_settings(st, shots, &rng.substream(0))?;
            (r.value, r.error)
        } else {
            exact(energy_nine_settings_exact(st)?)
        };
        Ok(vec![exact(energy_exact(st)?), estimate])
    })?;
    let noisy = !cfg.noise.is_noiseless();
    let per_site = (vals[0].0 / cfg.n as f64, vals[0].1 / cfg.n as f64);
    let reports = vec![
        report("energy", vals[0], noisy),
        report("energy_per_site", per_site, noisy),
        report("energy_nine_settings", vals[1], stochastic(cfg)).with_meta("shots_per_setting", shots),
    ];
    Ok((reports, vec![]))
}

fn rabi_aklt(cfg: &ExperimentConfig, base: &RngStream) -> Result<Out> {
    let thetas = cfg.thetas();
    let points = thetas.len();
    let edge = cfg.experiment == Experiment::RabiEdge;
    let shots = cfg.shots;
    let vals = aklt_average(cfg, base, |prep, rng| {
        let st = &prep.chain_state;
        let traj = if shots == 0 {
            let t = if edge { rabi_edge(st, &thetas)? } else { rabi_bulk(st, &thetas)? };
            let mut out: Values = t.values.iter().flatten().map(|&v| exact(v)).collect();
            out.extend(t.monitor.iter().map(|&v| exact(v)));
            return Ok(out);
        } else {
            sampled_aklt_rabi(st, &thetas, edge, shots, rng)?
        };
        Ok(traj)
    })?;
    let traj = RabiTrajectory {
        theta: thetas.clone(),
        values: [0, 1, 2].map(|k| vals[k * points..(k + 1) * points].iter().map(|v| v.0).collect()),
        monitor: vals[3 * points..].iter().map(|v| v.0).collect(),
    };
    let errors: Vec<Vec<f64>> = (0..3).map(|k| vals[k * points..(k + 1) * points].iter().map(|v| v.1).collect()).collect();
    Ok(rabi_output(cfg, &traj, &errors, ["x", "y", "z"], "energy", [1, 2]))
}

fn sampled_aklt_rabi(st: &QuditRegister, thetas: &[f64], edge: bool, shots: usize, rng: &RngStream) -> Result<Values> {
    let n = st.num_sites();
    let alg = edge_algebra(n)?;
    let sx = SpinOps::new().sx;
    let per_point: Result<Vec<(Values, f64)>> = thetas
        .par_iter()
        .enumerate()
        .map(|(k, &t)| {
            let mut s = st.clone();
            if edge {
                s.apply_operator(&[0, 1], &expm_hermitian(&alg.xl, t / 2.0))?;
            } else {
                let u = expm_hermitian(&sx, t);
                for j in 0..n {
                    s.apply_operator(&[j], &u)?;
                }
            }
            let mut r = rng.substream(k as u64);
            let v = alg.ops().iter().map(|op| s.sample_observable(&[0, 1], op, shots, &mut r)).collect::<Result<Values>>()?;
            Ok((v, energy_exact(&s)?))
        })
        .collect();
    let per_point = per_point?;
    let mut out = Values::new();
    for axis in 0..3 {
        out.extend(per_point.iter().map(|(v, _)| v[axis]));
    }
    out.extend(per_point.iter().map(|(_, e)| exact(*e)));
    Ok(out)
}

fn rabi_output(
    cfg: &ExperimentConfig,
    traj: &RabiTrajectory,
    errors: &[Vec<f64>],
    names: [&str; 3],
    monitor: &str,
    fitted: [usize; 2],
) -> Out {
    let shot_mode = cfg.shots > 0;
    let mut columns = vec!["theta".to_string()];
    columns.extend(names.iter().map(|s| s.to_string()));
    if shot_mode {
        columns.extend(names.iter().map(|s| format!("{s}_err")));
    }
    columns.push(monitor.to_string());
    let rows = (0..traj.theta.len())
        .map(|k| {
            let mut row = vec![traj.theta[k]];
            row.extend((0..3).map(|a| traj.values[a][k]));
            if shot_mode {
                row.extend((0..3).map(|a| errors[a][k]));
            }
            row.push(traj.monitor[k]);
            (k.to_string(), row)
        })
        .collect();
    let mut reports = Vec::new();
    if traj.theta.len() >= 5 {
        for a in fitted {
            if let Ok(f) = fit_decaying_sine(&traj.theta, &traj.values[a]) {
                let axis = names[a];
                reports.push(ObservableReport::exact(format!("contrast_{axis}"), f.amplitude));
                reports.push(ObservableReport::exact(format!("phase_{axis}"), f.phase));
                reports.push(ObservableReport::exact(format!("offset_{axis}"), f.offset));
                reports.push(ObservableReport::exact(format!("tau_{axis}"), f.tau.unwrap_or(f64::INFINITY)).with_meta("bounded", f.tau.is_some()));
                reports.push(ObservableReport::exact(format!("residual_{axis}"), f.residual));
            }
        }
    }
    let extreme = traj.monitor.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    reports.push(ObservableReport::exact(format!("max_{monitor}"), extreme));
    (reports, vec![ResultTable { name: "trajectory".into(), columns, rows }])
}

fn local_order_run(cfg: &ExperimentConfig, base: &RngStream) -> Result<Out> {
    let n = cfg.n;
    let shots = cfg.shots;
    let vals = aklt_average(cfg, base, |prep, rng| {
        let st = &prep.chain_state;
        if shots == 0 {
            return Ok(local_order(st)?.iter().flatten().map(|&v| exact(v)).collect());
        }
        let mut out = vec![(0.0, 0.0); 3 * n];
        for axis in 0..3 {
            let samples = sample_spin_basis(st, &vec![axis; n], shots, &mut rng.substream(axis as u64))?;
            for j in 0..n {
                out[3 * j + axis] = moments_of(samples.iter().map(|s| s[j]));
            }
        }
        Ok(out)
    })?;
    let shot_mode = stochastic(cfg);
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for j in 0..n {
        for (a, name) in AXIS_NAMES.iter().enumerate() {
            reports.push(report(format!("s{name}[{}]", j + 1), vals[3 * j + a], shot_mode));
        }
        rows.push(((j + 1).to_string(), (0..3).map(|a| vals[3 * j + a].0).collect()));
    }
    let columns = AXIS_NAMES.iter().map(|a| format!("s{a}")).collect();
    Ok((reports, vec![ResultTable { name: "local_order".into(), columns, rows }]))
}

fn correlations_run(cfg: &ExperimentConfig, base: &RngStream) -> Result<Out> {
    let n = cfg.n;
    let shots = cfg.shots;
    let vals = aklt_average(cfg, base, |prep, rng| {
        let st = &prep.chain_state;
        let mut out = Values::new();
        if shots == 0 {
            for j in 1..n {
                let t = two_spin_correlations(st, 0, j)?;
                out.extend(t.table.iter().flatten().map(|&v| exact(v)));
            }
            return Ok(out);
        }
        let mut by_pair = vec![(0.0, 0.0); 9 * (n - 1)];
        for a in 0..3 {
            for b in 0..3 {
                // Site 1 in basis a, every other site in basis b: one setting covers all j.
                let mut axes = vec![b; n];
                axes[0] = a;
                let samples = sample_spin_basis(st, &axes, shots, &mut rng.substream((3 * a + b) as u64))?;
                for j in 1..n {
                    by_pair[9 * (j - 1) + 3 * a + b] = moments_of(samples.iter().map(|s| s[0] * s[j]));
                }
            }
        }
        Ok(by_pair)
    })?;
    let shot_mode = stochastic(cfg);
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for j in 1..n {
        let block = &vals[9 * (j - 1)..9 * j];
        for a in 0..3 {
            for b in 0..3 {
                reports.push(report(format!("corr[1,{}].{}{}", j + 1, AXIS_NAMES[a], AXIS_NAMES[b]), block[3 * a + b], shot_mode));
            }
        }
        let mean_abs = block.iter().map(|v| v.0.abs()).sum::<f64>() / 9.0;
        let spread = block.iter().map(|v| v.1 * v.1).sum::<f64>().sqrt() / 9.0;
        reports.push(report(format!("corr_mean_abs[1,{}]", j + 1), (mean_abs, spread), shot_mode));
        rows.push((format!("1,{}", j + 1), block.iter().map(|v| v.0).chain([mean_abs]).collect()));
    }
    let mut columns: Vec<String> = (0..9).map(|k| format!("{}{}", AXIS_NAMES[k / 3], AXIS_NAMES[k % 3])).collect();
    columns.push("mean_abs".into());
    Ok((reports, vec![ResultTable { name: "correlations".into(), columns, rows }]))
}

/// Per-shot value of the string correlator from a joint `S̃^α` readout.
fn string_shot(m: &[f64], form: StringForm) -> f64 {
    let n = m.len();
    let interior = &m[1..n - 1];
    match form {
        StringForm::Sum => m[0] * interior.iter().map(|x| 1.0 - 2.0 * x * x).product::<f64>() * m[n - 1],
        StringForm::Product => m[0] * m[n - 1] * (1.0 - 2.0 * interior.iter().map(|x| x * x).product::<f64>()),
    }
}

fn string_order_run(cfg: &ExperimentConfig, base: &RngStream) -> Result<Out> {
    let n = cfg.n;
    let (shots, form) = (cfg.shots, cfg.string_form);
    let vals = aklt_average(cfg, base, |prep, rng| {
        let st = &prep.chain_state;
        (0..3)
            .map(|axis| {
                if shots == 0 {
                    Ok(exact(string_order(st, StringOrderSpec { axis, form })?))
                } else {
                    let samples = sample_spin_basis(st, &vec![axis; n], shots, &mut rng.substream(axis as u64))?;
                    Ok(moments_of(samples.iter().map(|m| string_shot(m, form))))
                }
            })
            .collect()
    })?;
    let label = match form {
        StringForm::Sum => "sum",
        StringForm::Product => "product",
    };
    let shot_mode = stochastic(cfg);
    let reports = (0..3).map(|a| report(format!("string_order.{}", AXIS_NAMES[a]), vals[a], shot_mode).with_meta("form", label)).collect();
    Ok((reports, vec![]))
}

fn cluster_verify(cfg: &ExperimentConfig, base: &RngStream) -> Result<Out> {
    let (shots, dressing) = (cfg.shots, cfg.dressing);
    let vals = cluster_average(cfg, base, |st, rng| {
        let method = if shots == 0 { FidelityMethod::Exhaustive } else { FidelityMethod::Sampled(shots) };
        let f = stabilizer_fidelity(st, dressing, method, &rng.substream(0))?;
        let scan = pauli_correlation_scan(st)?;
        let mut out = vec![(f.value, f.error), exact(scan.single_mean_abs)];
        out.extend(scan.deviation.iter().map(|&d| exact(d)));
        Ok(out)
    })?;
    let shot_mode = stochastic(cfg);
    let mut reports = vec![
        report("stabilizer_fidelity", vals[0], shot_mode),
        report("single_pauli_mean_abs", vals[1], shot_mode),
    ];
    for (k, v) in vals[2..].iter().enumerate() {
        reports.push(report(format!("pair_deviation[1,{}]", k + 2), *v, shot_mode));
    }
    Ok((reports, vec![]))
}

fn cluster_table1(cfg: &ExperimentConfig, base: &RngStream) -> Result<Out> {
    let names: Vec<String> = crate::cluster::table1_operators(cfg.n).into_iter().map(|(s, _)| s).collect();
    let vals = cluster_average(cfg, base, |st, _| {
        Ok(bulk_edge_table(st)?.iter().flat_map(|r| [exact(r.bulk_mean), exact(r.left), exact(r.right)]).collect())
    })?;
    let shot_mode = stochastic(cfg);
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for (k, name) in names.iter().enumerate() {
        let cols = ["bulk", "left", "right"];
        for (c, col) in cols.iter().enumerate() {
            reports.push(report(format!("table1[{name}].{col}"), vals[3 * k + c], shot_mode));
        }
        rows.push((name.clone(), (0..3).map(|c| vals[3 * k + c].0).collect()));
    }
    let columns = vec!["bulk".into(), "left".into(), "right".into()];
    Ok((reports, vec![ResultTable { name: "table1".into(), columns, rows }]))
}

fn cluster_bell(cfg: &ExperimentConfig, base: &RngStream) -> Result<Out> {
    let outcomes = all_bulk_outcomes(cfg.n);
    let vals = cluster_average(cfg, base, |st, _| {
        let mut out = Values::new();
        for o in &outcomes {
            match project_bulk_edge_bell(st, o) {
                Ok(b) => out.extend([exact(b.probability), exact(b.probability * b.fidelity), exact(b.probability * b.entropy)]),
                Err(SimError::DegenerateProjection(_)) => out.extend([exact(0.0); 3]),
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    })?;
    let ideal = crate::cluster::prepare_cluster(cfg.n, cfg.cluster_mode, cfg.dressing)?;
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    let mut fid_sum = 0.0;
    let mut fid_min = f64::INFINITY;
    for (k, o) in outcomes.iter().enumerate() {
        let bits: String = o.iter().map(|b| char::from(b'0' + *b as u8)).collect();
        let p = vals[3 * k].0;
        let (f, s) = if p > 0.0 { (vals[3 * k + 1].0 / p, vals[3 * k + 2].0 / p) } else { (0.0, 0.0) };
        let label = project_bulk_edge_bell(&ideal, o).map(|b| b.label).unwrap_or(BELL_LABELS[0]);
        reports.push(ObservableReport::exact(format!("bell[{bits}].probability"), p));
        reports.push(ObservableReport::exact(format!("bell[{bits}].fidelity"), f).with_meta("bell", label));
        reports.push(ObservableReport::exact(format!("bell[{bits}].entropy"), s));
        rows.push((bits, vec![p, f, s]));
        fid_sum += f;
        fid_min = fid_min.min(f);
    }
    reports.push(ObservableReport::exact("bell_fidelity_mean", fid_sum / outcomes.len() as f64));
    reports.push(ObservableReport::exact("bell_fidelity_min", fid_min));
    let columns = vec!["probability".into(), "fidelity".into(), "entropy".into()];
    Ok((reports, vec![ResultTable { name: "bell".into(), columns, rows }]))
}

fn sample_pauli(state: &QuditRegister, p: &PauliString, shots: usize, rng: &mut RngStream) -> Result<(f64, f64)> {
    let mut rotated = state.clone();
    let mut active = Vec::new();
    for (site, op) in p.ops.iter().enumerate() {
        let m = op.matrix();
        if *op != crate::cluster::Pauli::I {
            let (_, vecs) = eigh(&m);
            rotated.apply_operator(&[site], &vecs.adjoint())?;
            active.push(site);
        }
    }
    // eigh orders eigenvalues ascending: level 0 is −1, level 1 is +1.
    let coeff = p.coeff.re;
    Ok(moments_of(rotated.sample(shots, rng).into_iter().map(|idx| {
        let d = rotated.digits(idx);
        coeff * active.iter().map(|&s| if d[s] == 0 { -1.0 } else { 1.0 }).product::<f64>()
    })))
}

fn cluster_rabi_run(cfg: &ExperimentConfig, base: &RngStream) -> Result<Out> {
    let thetas = cfg.thetas();
    let points = thetas.len();
    let shots = cfg.shots;
    let n = cfg.n;
    let vals = cluster_average(cfg, base, |st, rng| {
        let t = rabi_cluster(st, &thetas)?;
        let mut out: Values = t.values.iter().flatten().map(|&v| exact(v)).collect();
        if shots > 0 {
            let ps = crate::cluster::p_operators(n);
            let p1 = ps[0].dense();
            for (a, p) in ps.iter().enumerate() {
                for (k, &th) in thetas.iter().enumerate() {
                    let mut s = st.clone();
                    let sites: Vec<usize> = (0..n).collect();
                    s.apply_operator(&sites, &expm_hermitian(&p1, th / 2.0))?;
                    out[a * points + k] = sample_pauli(&s, p, shots, &mut rng.substream((a * points + k) as u64))?;
                }
            }
        }
        out.extend(t.monitor.iter().map(|&v| exact(v)));
        Ok(out)
    })?;
    let traj = RabiTrajectory {
        theta: thetas.clone(),
        values: [0, 1, 2].map(|k| vals[k * points..(k + 1) * points].iter().map(|v| v.0).collect()),
        monitor: vals[3 * points..].iter().map(|v| v.0).collect(),
    };
    let errors: Vec<Vec<f64>> = (0..3).map(|k| vals[k * points..(k + 1) * points].iter().map(|v| v.1).collect()).collect();
    Ok(rabi_output(cfg, &traj, &errors, ["p1", "p2", "p3"], "bulk_stabilizer", [1, 2]))
}

fn tomography_run(cfg: &ExperimentConfig, base: &RngStream) -> Result<Out> {
    let outcome = match cfg.ancilla_outcome {
        OutcomeChoice::Postselect(o) => o,
        OutcomeChoice::Sample => prepare_aklt(cfg.n, cfg.ancilla_init, PrepMode::ExactUnitary, NoiseSpec::NONE, &mut base.substream(SAMPLE_KEY))?.ancilla_outcome,
    };
    let state = aklt_state(cfg.n, cfg.ancilla_init, outcome)?;
    let shots = if cfg.shots == 0 { None } else { Some(cfg.shots) };
    let records = simulate_tomography(&state, shots, &base.substream(MEASURE_KEY))?;
    let target = pure_density(&state);
    let li = reconstruct_linear(&records)?;
    let li_psd: CMatrix = project_psd(&li);
    let mle = reconstruct_mle(&records, MleOptions::default())?;
    let reports = vec![
        ObservableReport::exact("li_trace_distance", trace_distance(&li, &target)),
        ObservableReport::exact("li_fidelity", fidelity(&li, &state)?),
        ObservableReport::exact("li_psd_fidelity", fidelity(&li_psd, &state)?),
        ObservableReport::exact("mle_trace_distance", trace_distance(&mle.rho, &target)),
        ObservableReport::exact("mle_fidelity", fidelity(&mle.rho, &state)?),
        ObservableReport::exact("mle_iterations", mle.iterations as f64).with_meta("converged", mle.converged),
    ];
    Ok((reports, vec![]))
}
