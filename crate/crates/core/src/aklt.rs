//! AKLT chain: Hamiltonian, energy estimators, order parameters, and the edge
//! SU(2) algebra with its Rabi drives.

use crate::error::{invalid, Result};
use crate::linalg::{c, eigh, expm_hermitian, kron, CMatrix, C64};
use crate::register::QuditRegister;
use crate::report::{Moments, ObservableReport};
use crate::rng::RngStream;
use crate::spin::{SpinOps, X, Y, Z};
use rayon::prelude::*;

pub const DENSE_MAX_N: usize = 8;

#[derive(Clone, Debug)]
pub struct AkltHamiltonian {
    pub n: usize,
    pub bond: CMatrix,
}

pub fn build_hamiltonian(n: usize) -> Result<AkltHamiltonian> {
    if n < 2 {
        return invalid(format!("AKLT chain needs N >= 2, got {n}"));
    }
    Ok(AkltHamiltonian { n, bond: SpinOps::new().bond_projector() })
}

impl AkltHamiltonian {
    pub fn bonds(&self) -> impl Iterator<Item = (usize, usize)> {
        (0..self.n - 1).map(|j| (j, j + 1))
    }

    /// `Ĥ |ψ⟩` applied term by term.
    pub fn apply(&self, state: &QuditRegister) -> Result<Vec<C64>> {
        self.check(state)?;
        let mut out = vec![c(0.0, 0.0); state.len()];
        for (a, b) in self.bonds() {
            let mut t = state.clone();
            t.apply_operator(&[a, b], &self.bond)?;
            out.iter_mut().zip(t.amplitudes()).for_each(|(o, v)| *o += v);
        }
        Ok(out)
    }

    /// Dense `3^N × 3^N` matrix.
    pub fn dense(&self) -> Result<CMatrix> {
        if self.n > DENSE_MAX_N {
            return invalid(format!("dense assembly capped at N = {DENSE_MAX_N}"));
        }
        let dim = 3usize.pow(self.n as u32);
        let mut h = CMatrix::zeros(dim, dim);
        for (a, _) in self.bonds() {
            let left = CMatrix::identity(3usize.pow(a as u32), 3usize.pow(a as u32));
            let right_n = self.n - a - 2;
            let right = CMatrix::identity(3usize.pow(right_n as u32), 3usize.pow(right_n as u32));
            h += kron(&kron(&left, &self.bond), &right);
        }
        Ok(h)
    }

    fn check(&self, state: &QuditRegister) -> Result<()> {
        if state.dims().len() != self.n || state.dims().iter().any(|&d| d != 3) {
            return invalid(format!("expected {} qutrits, got dims {:?}", self.n, state.dims()));
        }
        Ok(())
    }

    /// Orthonormal basis (columns) of the zero-energy eigenspace.
    pub fn ground_space(&self, tol: f64) -> Result<CMatrix> {
        let (vals, vecs) = eigh(&self.dense()?);
        let keep: Vec<usize> = (0..vals.len()).filter(|&k| vals[k].abs() < tol).collect();
        let mut out = CMatrix::zeros(vecs.nrows(), keep.len());
        for (j, &k) in keep.iter().enumerate() {
            out.set_column(j, &vecs.column(k));
        }
        Ok(out)
    }
}

fn check_chain(state: &QuditRegister) -> Result<usize> {
    if state.dims().iter().any(|&d| d != 3) {
        return invalid(format!("expected a qutrit chain, got dims {:?}", state.dims()));
    }
    Ok(state.num_sites())
}

pub fn energy_exact(state: &QuditRegister) -> Result<f64> {
    let h = build_hamiltonian(check_chain(state)?)?;
    let mut e = 0.0;
    for (a, b) in h.bonds() {
        e += state.expectation(&[a, b], &h.bond)?;
    }
    Ok(e)
}

/// One of the nine measurement settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Setting {
    /// Every site measured in the `S̃^α` eigenbasis.
    Global(usize),
    /// Bonds `(j, j+1)` with `j ≡ parity (mod 2)` (0-based) measured in the joint
    /// eigenbasis of `S̃^aS̃^b ⊗ S̃^aS̃^b + h.c.`.
    Cross { a: usize, b: usize, parity: usize },
}

pub const NINE_SETTINGS: [Setting; 9] = [
    Setting::Global(X),
    Setting::Global(Y),
    Setting::Global(Z),
    Setting::Cross { a: X, b: Y, parity: 0 },
    Setting::Cross { a: X, b: Y, parity: 1 },
    Setting::Cross { a: X, b: Z, parity: 0 },
    Setting::Cross { a: X, b: Z, parity: 1 },
    Setting::Cross { a: Y, b: Z, parity: 0 },
    Setting::Cross { a: Y, b: Z, parity: 1 },
];

/// Two-site cross operator `S̃^aS̃^b ⊗ S̃^aS̃^b + S̃^bS̃^a ⊗ S̃^bS̃^a`.
pub fn cross_operator(a: usize, b: usize) -> CMatrix {
    let s = SpinOps::new();
    let ab = s.axis(a) * s.axis(b);
    let ba = s.axis(b) * s.axis(a);
    kron(&ab, &ab) + kron(&ba, &ba)
}

/// Rotated register and per-outcome energy contribution for one setting.
fn setting_table(state: &QuditRegister, setting: Setting) -> Result<(QuditRegister, Vec<f64>)> {
    let n = state.num_sites();
    let mut rotated = state.clone();
    let values: Vec<f64> = match setting {
        Setting::Global(axis) => {
            let (m, v) = eigh(SpinOps::new().axis(axis));
            let vd = v.adjoint();
            for site in 0..n {
                rotated.apply_operator(&[site], &vd)?;
            }
            (0..state.len())
                .map(|idx| {
                    let d = state.digits(idx);
                    d.windows(2)
                        .map(|w| {
                            let p = m[w[0]] * m[w[1]];
                            0.5 * p + p * p / 6.0
                        })
                        .sum()
                })
                .collect()
        }
        Setting::Cross { a, b, parity } => {
            let (lam, w) = eigh(&cross_operator(a, b));
            let wd = w.adjoint();
            let starts: Vec<usize> = (parity..n.saturating_sub(1)).step_by(2).collect();
            for &j in &starts {
                rotated.apply_operator(&[j, j + 1], &wd)?;
            }
            (0..state.len())
                .map(|idx| {
                    let d = state.digits(idx);
                    starts.iter().map(|&j| lam[3 * d[j] + d[j + 1]] / 6.0).sum()
                })
                .collect()
        }
    };
    Ok((rotated, values))
}

/// Nine-setting estimator evaluated with exact outcome probabilities.
pub fn energy_nine_settings_exact(state: &QuditRegister) -> Result<f64> {
    let n = check_chain(state)?;
    let mut e = (n as f64 - 1.0) / 3.0;
    for s in NINE_SETTINGS {
        let (rot, vals) = setting_table(state, s)?;
        e += rot.probabilities().iter().zip(&vals).map(|(p, v)| p * v).sum::<f64>();
    }
    Ok(e)
}

/// Nine-setting estimator from `shots` samples per setting.
pub fn energy_nine_settings(state: &QuditRegister, shots: usize, rng: &RngStream) -> Result<ObservableReport> {
    if shots == 0 {
        return invalid("shots must be at least 1");
    }
    let n = check_chain(state)?;
    let per_setting: Vec<Result<Moments>> = NINE_SETTINGS
        .par_iter()
        .enumerate()
        .map(|(k, &s)| {
            let (rot, vals) = setting_table(state, s)?;
            let mut r = rng.substream(k as u64);
            Ok(rot.sample(shots, &mut r).into_iter().map(|i| vals[i]).collect())
        })
        .collect();
    let mut value = (n as f64 - 1.0) / 3.0;
    let mut var = 0.0;
    for m in per_setting {
        let m = m?;
        value += m.mean();
        var += m.std_error().powi(2);
    }
    Ok(ObservableReport::sampled("energy", value, var.sqrt()).with_meta("shots_per_setting", shots))
}

/// Per-site `(⟨S̃^x⟩, ⟨S̃^y⟩, ⟨S̃^z⟩)`.
pub fn local_order(state: &QuditRegister) -> Result<Vec<[f64; 3]>> {
    let n = check_chain(state)?;
    let s = SpinOps::new();
    (0..n)
        .map(|j| Ok([state.expectation(&[j], &s.sx)?, state.expectation(&[j], &s.sy)?, state.expectation(&[j], &s.sz)?]))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationTable {
    pub i: usize,
    pub j: usize,
    /// `table[α][β] = ⟨S̃^α_i S̃^β_j⟩`.
    pub table: [[f64; 3]; 3],
    pub mean_abs: f64,
    /// Same average for `⟨S̃^α_i S̃^β_j⟩ − ⟨S̃^α_i⟩⟨S̃^β_j⟩`.
    pub connected_mean_abs: f64,
}

pub fn two_spin_correlations(state: &QuditRegister, i: usize, j: usize) -> Result<CorrelationTable> {
    let n = check_chain(state)?;
    if i == j {
        return invalid("correlation sites must differ");
    }
    if i >= n || j >= n {
        return invalid("correlation site out of range");
    }
    let s = SpinOps::new();
    let mut table = [[0.0; 3]; 3];
    for (a, row) in table.iter_mut().enumerate() {
        for (b, v) in row.iter_mut().enumerate() {
            *v = state.product_expectation(&[(i, s.axis(a)), (j, s.axis(b))])?.re;
        }
    }
    let mean_abs = table.iter().flatten().map(|v| v.abs()).sum::<f64>() / 9.0;
    let (mi, mj): (Vec<f64>, Vec<f64>) =
        (0..3).map(|a| Ok((state.expectation(&[i], s.axis(a))?, state.expectation(&[j], s.axis(a))?))).collect::<Result<Vec<_>>>()?.into_iter().unzip();
    let mut connected = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            connected += (table[a][b] - mi[a] * mj[b]).abs();
        }
    }
    Ok(CorrelationTable { i, j, table, mean_abs, connected_mean_abs: connected / 9.0 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StringForm {
    /// `exp(iπ Σ_k S̃^α_k)` over the interior.
    Sum,
    /// `exp(iπ Π_k S̃^α_k)` over the interior.
    Product,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StringOrderSpec {
    pub axis: usize,
    pub form: StringForm,
}

impl StringOrderSpec {
    pub fn new(axis: usize) -> Self {
        Self { axis, form: StringForm::Sum }
    }
}

/// `⟨S̃^α_1 e^{iπ(…)} S̃^α_N⟩` with the interior chosen by `spec.form`.
pub fn string_order(state: &QuditRegister, spec: StringOrderSpec) -> Result<f64> {
    let n = check_chain(state)?;
    if n < 3 {
        return invalid("string order needs N >= 3");
    }
    if spec.axis > Z {
        return invalid("string order axis must be x, y or z");
    }
    let s = SpinOps::new();
    let sa = s.axis(spec.axis);
    let sq = sa * sa;
    // e^{iπ S} = 1 − 2 S² for a spin-1 component (and for any operator with spectrum {−1,0,1}).
    let flip = CMatrix::identity(3, 3) - &sq * c(2.0, 0.0);
    let v = match spec.form {
        StringForm::Sum => {
            let mut ops: Vec<(usize, &CMatrix)> = vec![(0, sa)];
            ops.extend((1..n - 1).map(|k| (k, &flip)));
            ops.push((n - 1, sa));
            state.product_expectation(&ops)?
        }
        StringForm::Product => {
            let ends = state.product_expectation(&[(0, sa), (n - 1, sa)])?;
            let mut ops: Vec<(usize, &CMatrix)> = vec![(0, sa)];
            ops.extend((1..n - 1).map(|k| (k, &sq)));
            ops.push((n - 1, sa));
            ends - state.product_expectation(&ops)? * c(2.0, 0.0)
        }
    };
    if v.im.abs() > 1e-10 {
        return invalid(format!("string order has imaginary residue {}", v.im));
    }
    Ok(v.re)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeForm {
    /// Singlet ket and antisymmetric bra of the first term normalized.
    Normalized,
    /// Coefficients exactly as printed.
    Literal,
}

/// Edge generators on the two leftmost qutrits (9×9).
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeAlgebra {
    pub xl: CMatrix,
    pub yl: CMatrix,
    pub zl: CMatrix,
    pub form: EdgeForm,
}

impl EdgeAlgebra {
    pub fn ops(&self) -> [&CMatrix; 3] {
        [&self.xl, &self.yl, &self.zl]
    }
}

fn two_site(pairs: &[(usize, usize, f64)]) -> Vec<C64> {
    let mut v = vec![c(0.0, 0.0); 9];
    for &(a, b, w) in pairs {
        v[3 * a + b] += c(w, 0.0);
    }
    v
}

fn outer(ket: &[C64], bra: &[C64], k: C64) -> CMatrix {
    CMatrix::from_fn(9, 9, |r, col| k * ket[r] * bra[col].conj())
}

/// `g = s·S (⟨ab| − ⟨ba|) + (i/2)(|cd⟩ − |dc⟩)(⟨ef| − ⟨fe|) + h.c.` with `S` the
/// unnormalized singlet `|xx⟩+|yy⟩+|zz⟩`.
fn edge_generator(bra1: (usize, usize), ket2: (usize, usize), bra2: (usize, usize), s: f64) -> CMatrix {
    let singlet = two_site(&[(X, X, 1.0), (Y, Y, 1.0), (Z, Z, 1.0)]);
    let anti = |(a, b): (usize, usize)| two_site(&[(a, b, 1.0), (b, a, -1.0)]);
    let g = outer(&singlet, &anti(bra1), c(s, 0.0)) + outer(&anti(ket2), &anti(bra2), c(0.0, 0.5));
    &g + g.adjoint()
}

pub fn edge_algebra_with(n: usize, form: EdgeForm) -> Result<EdgeAlgebra> {
    if n < 2 {
        return invalid("edge algebra needs N >= 2");
    }
    let s = match form {
        EdgeForm::Normalized => 1.0 / 6f64.sqrt(),
        EdgeForm::Literal => 1.0,
    };
    Ok(EdgeAlgebra {
        xl: edge_generator((Y, Z), (X, Y), (Z, X), s),
        yl: edge_generator((Z, X), (Y, Z), (X, Y), s),
        zl: edge_generator((X, Y), (Z, X), (Y, Z), s),
        form,
    })
}

pub fn edge_algebra(n: usize) -> Result<EdgeAlgebra> {
    edge_algebra_with(n, EdgeForm::Normalized)
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct RabiTrajectory {
    pub theta: Vec<f64>,
    /// `⟨X̂_L⟩, ⟨Ŷ_L⟩, ⟨Ẑ_L⟩` (or the cluster `P̂₁, P̂₂, P̂₃`) per grid point.
    pub values: [Vec<f64>; 3],
    /// Diagnostic per grid point: AKLT energy, or mean bulk stabilizer for the cluster.
    pub monitor: Vec<f64>,
}

impl RabiTrajectory {
    pub(crate) fn from_points(theta: &[f64], points: Vec<([f64; 3], f64)>) -> Self {
        let mut values = [Vec::new(), Vec::new(), Vec::new()];
        let mut monitor = Vec::new();
        for (v, m) in points {
            for k in 0..3 {
                values[k].push(v[k]);
            }
            monitor.push(m);
        }
        Self { theta: theta.to_vec(), values, monitor }
    }
}

fn edge_point(state: &QuditRegister, alg: &EdgeAlgebra) -> Result<([f64; 3], f64)> {
    Ok((
        [state.expectation(&[0, 1], &alg.xl)?, state.expectation(&[0, 1], &alg.yl)?, state.expectation(&[0, 1], &alg.zl)?],
        energy_exact(state)?,
    ))
}

/// `exp(−iθ X̂_L/2)` on sites (1, 2) for every grid point.
pub fn rabi_edge(state: &QuditRegister, thetas: &[f64]) -> Result<RabiTrajectory> {
    let n = check_chain(state)?;
    let alg = edge_algebra(n)?;
    let points: Result<Vec<_>> = thetas
        .par_iter()
        .map(|&t| {
            let mut s = state.clone();
            s.apply_operator(&[0, 1], &expm_hermitian(&alg.xl, t / 2.0))?;
            edge_point(&s, &alg)
        })
        .collect();
    Ok(RabiTrajectory::from_points(thetas, points?))
}

/// Global rotation `exp(−iθ·scale·Σ_j S̃^x_j)` measured with the edge algebra.
pub fn rabi_bulk_scaled(state: &QuditRegister, thetas: &[f64], scale: f64) -> Result<RabiTrajectory> {
    let n = check_chain(state)?;
    let alg = edge_algebra(n)?;
    let sx = SpinOps::new().sx;
    let points: Result<Vec<_>> = thetas
        .par_iter()
        .map(|&t| {
            let u = expm_hermitian(&sx, t * scale);
            let mut s = state.clone();
            for j in 0..n {
                s.apply_operator(&[j], &u)?;
            }
            edge_point(&s, &alg)
        })
        .collect();
    Ok(RabiTrajectory::from_points(thetas, points?))
}

/// Bulk drive with the full-angle generator `Σ_j S̃^x_j`, which moves the edge
/// spin-½ at the same rate as `exp(−iθ X̂_L/2)`.
pub fn rabi_bulk(state: &QuditRegister, thetas: &[f64]) -> Result<RabiTrajectory> {
    rabi_bulk_scaled(state, thetas, 1.0)
}
