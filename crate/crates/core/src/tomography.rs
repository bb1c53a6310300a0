//! Qutrit tomography from four mutually unbiased bases.

use crate::error::{invalid, Result};
use crate::linalg::{c, eigh, trace_norm_hermitian, CMatrix, CVector, C64};
use crate::register::QuditRegister;
use crate::rng::RngStream;
use rayon::prelude::*;
use std::f64::consts::PI;

pub const MAX_QUTRITS: usize = 4;
pub const PINV_CUTOFF: f64 = 1e-10;

pub fn omega() -> C64 {
    C64::from_polar(1.0, 2.0 * PI / 3.0)
}

/// Four 3×3 matrices whose rows are the measurement bras.
#[derive(Clone, Debug, PartialEq)]
pub struct MubBasisSet {
    pub bases: [CMatrix; 4],
}

/// The four matrices as printed (identity plus three ω-phase matrices).
pub fn mub_bases_printed() -> MubBasisSet {
    let (o, l, w) = (c(0.0, 0.0), c(1.0, 0.0), omega());
    let w2 = w * w;
    let k = c(1.0 / 3f64.sqrt(), 0.0);
    let m = |v: [C64; 9]| CMatrix::from_row_slice(3, 3, &v);
    MubBasisSet {
        bases: [
            m([l, o, o, o, l, o, o, o, l]),
            m([l, l, l, l, w, w2, l, w2, w]) * k,
            m([l, l, l, w2, l, w, w2, w, l]) * k,
            m([l, l, l, w, w2, l, w, l, w2]) * k,
        ],
    }
}

/// Measurement bases used for tomography: the transposes of the printed
/// matrices, which are the mutually unbiased reading.
pub fn mub_bases() -> MubBasisSet {
    let p = mub_bases_printed();
    MubBasisSet { bases: p.bases.map(|b| b.transpose()) }
}

impl MubBasisSet {
    /// Largest deviation of `|⟨row_i B_k | row_j B_l⟩|²` from 1/3 over `k ≠ l`.
    pub fn unbiasedness_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..4 {
            for l in 0..4 {
                if k == l {
                    continue;
                }
                for i in 0..3 {
                    for j in 0..3 {
                        let ov: C64 = (0..3).map(|t| self.bases[k][(i, t)].conj() * self.bases[l][(j, t)]).sum();
                        worst = worst.max((ov.norm_sqr() - 1.0 / 3.0).abs());
                    }
                }
            }
        }
        worst
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct TomographyRecord {
    /// Basis index per qutrit (base-4 digits, first qutrit first).
    pub setting: Vec<usize>,
    /// Outcome histogram over `3^N` results; probabilities when `shots == 0`.
    pub counts: Vec<f64>,
    pub shots: usize,
}

impl TomographyRecord {
    pub fn frequencies(&self) -> Vec<f64> {
        if self.shots == 0 {
            self.counts.clone()
        } else {
            self.counts.iter().map(|k| k / self.shots as f64).collect()
        }
    }

    pub fn setting_label(&self) -> String {
        self.setting.iter().map(|d| char::from(b'0' + *d as u8)).collect()
    }
}

fn setting_digits(index: usize, n: usize) -> Vec<usize> {
    (0..n).rev().map(|k| index / 4usize.pow(k as u32) % 4).collect()
}

/// Born probabilities of every outcome for one setting.
pub fn setting_probabilities(state: &QuditRegister, bases: &MubBasisSet, setting: &[usize]) -> Result<Vec<f64>> {
    let mut s = state.clone();
    for (site, &b) in setting.iter().enumerate() {
        s.apply_operator(&[site], &bases.bases[b])?;
    }
    Ok(s.probabilities())
}

fn check_state(state: &QuditRegister) -> Result<usize> {
    let n = state.num_sites();
    if state.dims().iter().any(|&d| d != 3) {
        return invalid("tomography needs a qutrit register");
    }
    if n > MAX_QUTRITS {
        return invalid(format!("tomography limited to N <= {MAX_QUTRITS} qutrits"));
    }
    Ok(n)
}

/// Records for all `4^N` settings. `shots = None` stores exact probabilities.
pub fn simulate_tomography(state: &QuditRegister, shots: Option<usize>, rng: &RngStream) -> Result<Vec<TomographyRecord>> {
    let n = check_state(state)?;
    if shots == Some(0) {
        return invalid("shots per setting must be at least 1");
    }
    let bases = mub_bases();
    (0..4usize.pow(n as u32))
        .into_par_iter()
        .map(|k| {
            let setting = setting_digits(k, n);
            let probs = setting_probabilities(state, &bases, &setting)?;
            Ok(match shots {
                None => TomographyRecord { setting, counts: probs, shots: 0 },
                Some(m) => {
                    let mut r = rng.substream(k as u64);
                    let mut cdf = Vec::with_capacity(probs.len());
                    let mut acc = 0.0;
                    for p in &probs {
                        acc += p;
                        cdf.push(acc);
                    }
                    let mut counts = vec![0.0; probs.len()];
                    for _ in 0..m {
                        counts[r.sample_cdf(&cdf)] += 1.0;
                    }
                    TomographyRecord { setting, counts, shots: m }
                }
            })
        })
        .collect()
}

/// Single-qutrit measurement map: rows `(basis, outcome)`, columns `(i, j)` of `ρ`.
pub fn single_qutrit_map(bases: &MubBasisSet) -> CMatrix {
    CMatrix::from_fn(12, 9, |row, col| {
        let (b, k) = (row / 3, row % 3);
        let (i, j) = (col / 3, col % 3);
        bases.bases[b][(k, i)] * bases.bases[b][(k, j)].conj()
    })
}

pub fn pseudo_inverse(m: &CMatrix, cutoff: f64) -> CMatrix {
    m.clone().pseudo_inverse(cutoff).expect("SVD-based pseudoinverse")
}

/// Apply `mat` along mode `mode` of a tensor with the given mode sizes.
fn mode_product(data: &[C64], sizes: &[usize], mode: usize, mat: &CMatrix) -> (Vec<C64>, Vec<usize>) {
    let outer: usize = sizes[..mode].iter().product();
    let inner: usize = sizes[mode + 1..].iter().product();
    let (rows, cols) = (mat.nrows(), mat.ncols());
    let mut out = vec![c(0.0, 0.0); outer * rows * inner];
    for o in 0..outer {
        for r in 0..rows {
            for k in 0..cols {
                let m = mat[(r, k)];
                if m == c(0.0, 0.0) {
                    continue;
                }
                let src = (o * cols + k) * inner;
                let dst = (o * rows + r) * inner;
                for t in 0..inner {
                    out[dst + t] += m * data[src + t];
                }
            }
        }
    }
    let mut new_sizes = sizes.to_vec();
    new_sizes[mode] = rows;
    (out, new_sizes)
}

fn check_records(records: &[TomographyRecord]) -> Result<usize> {
    let first = match records.first() {
        Some(r) => r,
        None => return invalid("no tomography records"),
    };
    let n = first.setting.len();
    if n == 0 || n > MAX_QUTRITS {
        return invalid("record setting length out of range");
    }
    let expected = 4usize.pow(n as u32);
    let mut seen = vec![false; expected];
    for r in records {
        if r.setting.len() != n || r.counts.len() != 3usize.pow(n as u32) || r.setting.iter().any(|&b| b > 3) {
            return invalid("inconsistent tomography record shape");
        }
        let idx = r.setting.iter().fold(0, |acc, &b| acc * 4 + b);
        seen[idx] = true;
    }
    if seen.iter().any(|s| !s) || records.len() != expected {
        return invalid(format!("incomplete record set: need all {expected} settings exactly once"));
    }
    Ok(n)
}

/// Linear inversion through the tensor power of the single-qutrit pseudoinverse.
pub fn reconstruct_linear(records: &[TomographyRecord]) -> Result<CMatrix> {
    let n = check_records(records)?;
    let dim = 3usize.pow(n as u32);
    let pinv = pseudo_inverse(&single_qutrit_map(&mub_bases()), PINV_CUTOFF);
    // Data tensor with one mode per qutrit, mode index basis·3 + outcome.
    let mut data = vec![c(0.0, 0.0); 12usize.pow(n as u32)];
    for r in records {
        let f = r.frequencies();
        for (o, v) in f.iter().enumerate() {
            let mut idx = 0;
            for q in 0..n {
                let k = o / 3usize.pow((n - 1 - q) as u32) % 3;
                idx = idx * 12 + r.setting[q] * 3 + k;
            }
            data[idx] = c(*v, 0.0);
        }
    }
    let mut sizes = vec![12; n];
    for mode in 0..n {
        let (d, s) = mode_product(&data, &sizes, mode, &pinv);
        data = d;
        sizes = s;
    }
    // Mode q now indexes (i_q, j_q).
    let mut rho = CMatrix::zeros(dim, dim);
    for (idx, v) in data.iter().enumerate() {
        let (mut row, mut col) = (0, 0);
        for q in 0..n {
            let m = idx / 9usize.pow((n - 1 - q) as u32) % 9;
            row = row * 3 + m / 3;
            col = col * 3 + m % 3;
        }
        rho[(row, col)] = *v;
    }
    Ok((&rho + rho.adjoint()) * c(0.5, 0.0))
}

/// Clip negative eigenvalues and renormalize the trace.
pub fn project_psd(rho: &CMatrix) -> CMatrix {
    let (vals, vecs) = eigh(rho);
    let clipped: Vec<f64> = vals.iter().map(|v| v.max(0.0)).collect();
    let tr: f64 = clipped.iter().sum();
    let d = CMatrix::from_diagonal(&CVector::from_iterator(clipped.len(), clipped.iter().map(|v| c(v / tr, 0.0))));
    &vecs * d * vecs.adjoint()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MleStart {
    /// Maximally mixed state.
    Mixed,
    /// Positivity-projected linear inversion, made full rank if clipping occurred.
    LinearInversion,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MleOptions {
    pub max_iter: usize,
    pub tol: f64,
    pub start: MleStart,
}

impl Default for MleOptions {
    fn default() -> Self {
        Self { max_iter: 10_000, tol: 1e-10, start: MleStart::LinearInversion }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MleResult {
    pub rho: CMatrix,
    pub iterations: usize,
    pub converged: bool,
}

/// Weight of `I/d` mixed into a clipped linear-inversion start.
pub const MLE_START_MIX: f64 = 0.05;

fn setting_unitaries(n: usize) -> Vec<CMatrix> {
    let bases = mub_bases();
    (0..4usize.pow(n as u32))
        .map(|k| {
            let mut u = CMatrix::identity(1, 1);
            for b in setting_digits(k, n) {
                u = u.kronecker(&bases.bases[b]);
            }
            u
        })
        .collect()
}

/// Iterative `ρ ← RρR / tr(RρR)` likelihood maximization.
pub fn reconstruct_mle(records: &[TomographyRecord], opts: MleOptions) -> Result<MleResult> {
    let n = check_records(records)?;
    let dim = 3usize.pow(n as u32);
    let units = setting_unitaries(n);
    let mut freqs = vec![Vec::new(); units.len()];
    for r in records {
        freqs[r.setting.iter().fold(0, |acc, &b| acc * 4 + b)] = r.frequencies();
    }
    let eye = CMatrix::identity(dim, dim);
    let mut rho = match opts.start {
        MleStart::Mixed => &eye * c(1.0 / dim as f64, 0.0),
        MleStart::LinearInversion => {
            let li = reconstruct_linear(records)?;
            let min_eig = eigh(&li).0[0];
            let p = project_psd(&li);
            if min_eig < -1e-12 {
                p * c(1.0 - MLE_START_MIX, 0.0) + &eye * c(MLE_START_MIX / dim as f64, 0.0)
            } else {
                p
            }
        }
    };
    let norm = units.len() as f64;
    for it in 1..=opts.max_iter {
        let r_op = units
            .par_iter()
            .zip(freqs.par_iter())
            .map(|(u, f)| {
                let rotated = u * &rho * u.adjoint();
                let w: Vec<C64> = (0..dim)
                    .map(|k| {
                        let p = rotated[(k, k)].re;
                        if f[k] > 0.0 && p > 1e-300 {
                            c(f[k] / p, 0.0)
                        } else {
                            c(0.0, 0.0)
                        }
                    })
                    .collect();
                u.adjoint() * CMatrix::from_diagonal(&CVector::from_vec(w)) * u
            })
            .reduce(|| CMatrix::zeros(dim, dim), |a, b| a + b)
            / c(norm, 0.0);
        let next = &r_op * &rho * &r_op;
        let tr = next.trace().re;
        let next = (&next + next.adjoint()) * c(0.5 / tr, 0.0);
        let diff = trace_norm_hermitian(&(&next - &rho));
        rho = next;
        if diff < opts.tol {
            return Ok(MleResult { rho, iterations: it, converged: true });
        }
    }
    Ok(MleResult { rho, iterations: opts.max_iter, converged: false })
}

/// `⟨ψ|ρ|ψ⟩`.
pub fn fidelity(rho: &CMatrix, target: &QuditRegister) -> Result<f64> {
    let a = target.amplitudes();
    if rho.nrows() != a.len() || rho.ncols() != a.len() {
        return invalid(format!("density matrix is {}x{} but state has {} amplitudes", rho.nrows(), rho.ncols(), a.len()));
    }
    let v = CVector::from_column_slice(a);
    Ok((v.adjoint() * rho * &v)[(0, 0)].re)
}

pub fn pure_density(state: &QuditRegister) -> CMatrix {
    let v = CVector::from_column_slice(state.amplitudes());
    &v * v.adjoint()
}
