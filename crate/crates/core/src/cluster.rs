//! Linear cluster state on qubits: preparation, stabilizer verification,
//! bulk/edge symmetry operators and the edge Bell projection.

use crate::aklt::RabiTrajectory;
use crate::error::{invalid, Result};
use crate::linalg::{c, eigh, CMatrix, C64};
use crate::register::{LevelPair, NoiseSpec, QuditRegister};
use crate::report::Moments;
use crate::rng::RngStream;
use crate::spin::levi_civita;
use rayon::prelude::*;
use std::f64::consts::FRAC_PI_2;

pub const EXHAUSTIVE_MAX_N: usize = 10;

/// Single-qubit Pauli label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const XYZ: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    fn code(self) -> usize {
        self as usize
    }

    fn from_code(k: usize) -> Self {
        [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][k]
    }

    pub fn matrix(self) -> CMatrix {
        let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
        let v = match self {
            Pauli::I => [l, o, o, l],
            Pauli::X => [o, l, l, o],
            Pauli::Y => [o, -i, i, o],
            Pauli::Z => [l, o, o, -l],
        };
        CMatrix::from_row_slice(2, 2, &v)
    }

    /// `a·b = phase · c`.
    fn mul(self, other: Pauli) -> (C64, Pauli) {
        let (a, b) = (self.code(), other.code());
        if a == 0 {
            return (c(1.0, 0.0), other);
        }
        if b == 0 || a == b {
            return (c(1.0, 0.0), if a == b { Pauli::I } else { self });
        }
        let k = 6 - a - b;
        (c(0.0, levi_civita(a - 1, b - 1, k - 1)), Pauli::from_code(k))
    }
}

/// Tensor product of Paulis with a complex prefactor.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliString {
    pub coeff: C64,
    pub ops: Vec<Pauli>,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self { coeff: c(1.0, 0.0), ops: vec![Pauli::I; n] }
    }

    /// Build from 1-based `(site, pauli)` factors.
    pub fn from_sites(n: usize, factors: &[(usize, Pauli)]) -> Self {
        let mut p = Self::identity(n);
        for &(site, op) in factors {
            p.ops[site - 1] = op;
        }
        p
    }

    pub fn scaled(mut self, k: f64) -> Self {
        self.coeff *= k;
        self
    }

    pub fn mul(&self, other: &PauliString) -> PauliString {
        let mut coeff = self.coeff * other.coeff;
        let ops = self
            .ops
            .iter()
            .zip(&other.ops)
            .map(|(a, b)| {
                let (ph, p) = a.mul(*b);
                coeff *= ph;
                p
            })
            .collect();
        PauliString { coeff, ops }
    }

    pub fn dense(&self) -> CMatrix {
        let mut m = CMatrix::identity(1, 1);
        for p in &self.ops {
            m = m.kronecker(&p.matrix());
        }
        m * self.coeff
    }

    pub fn apply(&self, state: &mut QuditRegister) -> Result<()> {
        for (site, p) in self.ops.iter().enumerate() {
            if *p != Pauli::I {
                state.apply_operator(&[site], &p.matrix())?;
            }
        }
        let k = self.coeff;
        let amps: Vec<C64> = state.amplitudes().iter().map(|a| a * k).collect();
        *state = QuditRegister::from_amplitudes(state.dims(), amps)?.with_labels(state.labels().to_vec())?;
        Ok(())
    }

    /// `⟨ψ|P|ψ⟩`, complex in general.
    pub fn expectation(&self, state: &QuditRegister) -> Result<C64> {
        let mats: Vec<(usize, CMatrix)> =
            self.ops.iter().enumerate().filter(|(_, p)| **p != Pauli::I).map(|(s, p)| (s, p.matrix())).collect();
        let refs: Vec<(usize, &CMatrix)> = mats.iter().map(|(s, m)| (*s, m)).collect();
        Ok(state.product_expectation(&refs)? * self.coeff)
    }

    pub fn expectation_real(&self, state: &QuditRegister) -> Result<f64> {
        let v = self.expectation(state)?;
        if v.im.abs() > 1e-10 {
            return invalid(format!("Pauli expectation has imaginary part {}", v.im));
        }
        Ok(v.re)
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 4 || n % 2 == 1 {
        return invalid(format!("cluster chain needs even N >= 4, got {n}"));
    }
    Ok(())
}

/// Bulk terms `σ^z_{i−1} σ^x_i σ^z_{i+1}`, `i = 2 … N−1`.
pub fn bulk_stabilizers(n: usize) -> Vec<PauliString> {
    (2..n).map(|i| PauliString::from_sites(n, &[(i - 1, Pauli::Z), (i, Pauli::X), (i + 1, Pauli::Z)])).collect()
}

pub fn left_boundary(n: usize) -> PauliString {
    PauliString::from_sites(n, &[(1, Pauli::X), (2, Pauli::Z)])
}

pub fn right_boundary(n: usize) -> PauliString {
    PauliString::from_sites(n, &[(n - 1, Pauli::Z), (n, Pauli::X)])
}

/// `Ĥ_C = −Σ_i σ^z_{i−1} σ^x_i σ^z_{i+1}` as a dense matrix.
pub fn cluster_hamiltonian_dense(n: usize) -> CMatrix {
    let dim = 1 << n;
    let mut h = CMatrix::zeros(dim, dim);
    for s in bulk_stabilizers(n) {
        h -= s.dense();
    }
    h
}

/// Signs of the two boundary stabilizers `σ^x_1σ^z_2` and `σ^z_{N−1}σ^x_N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeDressing {
    pub left: i8,
    pub right: i8,
}

impl EdgeDressing {
    pub const PLUS: EdgeDressing = EdgeDressing { left: 1, right: 1 };
    pub const ALL: [EdgeDressing; 4] = [
        EdgeDressing { left: 1, right: 1 },
        EdgeDressing { left: 1, right: -1 },
        EdgeDressing { left: -1, right: 1 },
        EdgeDressing { left: -1, right: -1 },
    ];

    pub fn new(left: i8, right: i8) -> Result<Self> {
        if left.abs() != 1 || right.abs() != 1 {
            return invalid("edge dressing signs must be +1 or -1");
        }
        Ok(Self { left, right })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClusterMode {
    CzLadder,
    MsGlobal,
}

impl ClusterMode {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "cz" | "cz-ladder" => Some(ClusterMode::CzLadder),
            "ms" | "ms-global" => Some(ClusterMode::MsGlobal),
            _ => None,
        }
    }
}

pub fn prepare_cluster(n: usize, mode: ClusterMode, dressing: EdgeDressing) -> Result<QuditRegister> {
    prepare_cluster_noisy(n, mode, dressing, NoiseSpec::NONE, &mut RngStream::new(0))
}

/// One trajectory with depolarizing replacement after every gate.
pub fn prepare_cluster_noisy(
    n: usize,
    mode: ClusterMode,
    dressing: EdgeDressing,
    noise: NoiseSpec,
    rng: &mut RngStream,
) -> Result<QuditRegister> {
    check_n(n)?;
    noise.validate()?;
    let one = |reg: &mut QuditRegister, s: usize, rng: &mut RngStream| -> Result<()> {
        if noise.p_one_site > 0.0 {
            reg.depolarize(&[s], noise.p_one_site, rng)?;
        }
        Ok(())
    };
    let two = |reg: &mut QuditRegister, s: usize, rng: &mut RngStream| -> Result<()> {
        if noise.p_two_site > 0.0 {
            reg.depolarize(&[s, s + 1], noise.p_two_site, rng)?;
        }
        Ok(())
    };
    let q = |s: usize| LevelPair::new(s, 0, 1);
    match mode {
        ClusterMode::CzLadder => {
            let mut reg = QuditRegister::product_state(&vec![2; n], &vec![0; n])?;
            let h = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)])
                * c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            for s in 0..n {
                reg.apply_operator(&[s], &h)?;
                one(&mut reg, s, rng)?;
            }
            let mut cz = CMatrix::identity(4, 4);
            cz[(3, 3)] = c(-1.0, 0.0);
            for s in 0..n - 1 {
                reg.apply_operator(&[s, s + 1], &cz)?;
                two(&mut reg, s, rng)?;
            }
            let z = Pauli::Z.matrix();
            if dressing.left < 0 {
                reg.apply_operator(&[0], &z)?;
            }
            if dressing.right < 0 {
                reg.apply_operator(&[n - 1], &z)?;
            }
            Ok(reg)
        }
        ClusterMode::MsGlobal => {
            let mut reg = QuditRegister::product_state(&vec![2; n], &vec![0; n])?;
            for s in 0..n - 1 {
                reg.ms(q(s), q(s + 1), FRAC_PI_2, 0.0)?;
                two(&mut reg, s, rng)?;
            }
            reg.rotate(q(0), dressing.left as f64 * FRAC_PI_2, 0.0)?;
            one(&mut reg, 0, rng)?;
            reg.rotate(q(n - 1), dressing.right as f64 * FRAC_PI_2, 0.0)?;
            one(&mut reg, n - 1, rng)?;
            for s in 0..n {
                reg.rotate(q(s), -FRAC_PI_2, FRAC_PI_2)?;
                one(&mut reg, s, rng)?;
            }
            Ok(reg)
        }
    }
}

/// Generators of the stabilizer group for a given dressing: boundary, bulk, boundary.
pub fn stabilizer_generators(n: usize, dressing: EdgeDressing) -> Vec<PauliString> {
    let mut g = vec![left_boundary(n).scaled(dressing.left as f64)];
    g.extend(bulk_stabilizers(n));
    g.push(right_boundary(n).scaled(dressing.right as f64));
    g
}

pub fn group_element(generators: &[PauliString], mask: usize) -> PauliString {
    let n = generators[0].ops.len();
    let mut p = PauliString::identity(n);
    for (k, g) in generators.iter().enumerate() {
        if mask >> k & 1 == 1 {
            p = p.mul(g);
        }
    }
    p
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FidelityMethod {
    Exhaustive,
    Sampled(usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Mean stabilizer expectation over the group generated by `generators`.
pub fn stabilizer_fidelity(
    state: &QuditRegister,
    dressing: EdgeDressing,
    method: FidelityMethod,
    rng: &RngStream,
) -> Result<Estimate> {
    let n = state.num_sites();
    check_n(n)?;
    let gens = stabilizer_generators(n, dressing);
    let size = 1usize << gens.len();
    match method {
        FidelityMethod::Exhaustive => {
            if n > EXHAUSTIVE_MAX_N {
                return invalid(format!("exhaustive stabilizer average capped at N = {EXHAUSTIVE_MAX_N}"));
            }
            let vals: Result<Vec<f64>> =
                (0..size).into_par_iter().map(|m| group_element(&gens, m).expectation_real(state)).collect();
            Ok(Estimate { value: vals?.iter().sum::<f64>() / size as f64, error: 0.0 })
        }
        FidelityMethod::Sampled(count) => {
            if count == 0 {
                return invalid("sample count must be at least 1");
            }
            let mut r = rng.clone();
            let masks: Vec<usize> = (0..count).map(|_| r.below(size)).collect();
            let vals: Result<Vec<f64>> =
                masks.par_iter().map(|&m| group_element(&gens, m).expectation_real(state)).collect();
            let m: Moments = vals?.into_iter().collect();
            Ok(Estimate { value: m.mean(), error: m.std_error() })
        }
    }
}

/// `X_odd = σ^x_1 σ^x_3 ⋯ σ^x_{N−1}` and `X_even = σ^x_2 σ^x_4 ⋯ σ^x_N`.
pub fn x_odd(n: usize) -> PauliString {
    let f: Vec<(usize, Pauli)> = (1..=n).step_by(2).map(|s| (s, Pauli::X)).collect();
    PauliString::from_sites(n, &f)
}

pub fn x_even(n: usize) -> PauliString {
    let f: Vec<(usize, Pauli)> = (2..=n).step_by(2).map(|s| (s, Pauli::X)).collect();
    PauliString::from_sites(n, &f)
}

/// Edge restriction of `X_even`: `σ^z_1 σ^z_{N−1} σ^x_N`.
pub fn x_even_edge(n: usize) -> PauliString {
    PauliString::from_sites(n, &[(1, Pauli::Z), (n - 1, Pauli::Z), (n, Pauli::X)])
}

/// Edge restriction of `X_odd`: `σ^x_1 σ^z_2 σ^z_N`.
pub fn x_odd_edge(n: usize) -> PauliString {
    PauliString::from_sites(n, &[(1, Pauli::X), (2, Pauli::Z), (n, Pauli::Z)])
}

/// `P̂₁, P̂₂, P̂₃`.
pub fn p_operators(n: usize) -> [PauliString; 3] {
    let mut f1: Vec<(usize, Pauli)> = (2..=n - 2).step_by(2).map(|s| (s, Pauli::X)).collect();
    f1.push((n - 1, Pauli::Z));
    let mut f2: Vec<(usize, Pauli)> = (1..=n - 2).map(|s| (s, Pauli::X)).collect();
    f2.extend([(n - 1, Pauli::Y), (n, Pauli::Z)]);
    let mut f3: Vec<(usize, Pauli)> = (1..=n - 1).step_by(2).map(|s| (s, Pauli::X)).collect();
    f3.push((n, Pauli::Z));
    [
        PauliString::from_sites(n, &f1),
        PauliString::from_sites(n, &f2).scaled(-1.0),
        PauliString::from_sites(n, &f3),
    ]
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub operator: String,
    pub bulk_mean: f64,
    pub left: f64,
    pub right: f64,
}

pub fn table1_operators(n: usize) -> Vec<(String, PauliString)> {
    vec![
        ("I".to_string(), PauliString::identity(n)),
        ("X_even".to_string(), x_even(n)),
        (format!("Z1 Z{} X{}", n - 1, n), x_even_edge(n)),
        ("X_odd".to_string(), x_odd(n)),
        (format!("X1 Z2 Z{}", n), x_odd_edge(n)),
    ]
}

fn bulk_mean(state: &QuditRegister) -> Result<f64> {
    let b = bulk_stabilizers(state.num_sites());
    let mut acc = 0.0;
    for s in &b {
        acc += s.expectation_real(state)?;
    }
    Ok(acc / b.len() as f64)
}

/// Five-row bulk/edge table: mean bulk stabilizer and both boundary stabilizers
/// after applying each operator.
pub fn bulk_edge_table(state: &QuditRegister) -> Result<Vec<TableRow>> {
    let n = state.num_sites();
    check_n(n)?;
    table1_operators(n)
        .into_iter()
        .map(|(name, op)| {
            let mut s = state.clone();
            op.apply(&mut s)?;
            Ok(TableRow {
                operator: name,
                bulk_mean: bulk_mean(&s)?,
                left: left_boundary(n).expectation_real(&s)?,
                right: right_boundary(n).expectation_real(&s)?,
            })
        })
        .collect()
}

pub const BELL_LABELS: [&str; 4] = ["phi+", "phi-", "psi+", "psi-"];

pub fn bell_state(label: usize) -> [C64; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (o, p, m) = (c(0.0, 0.0), c(h, 0.0), c(-h, 0.0));
    match label {
        0 => [p, o, o, p],
        1 => [p, o, o, m],
        2 => [o, p, p, o],
        3 => [o, p, m, o],
        _ => panic!("Bell label {label} out of range"),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BellProjection {
    pub rho: CMatrix,
    pub label: &'static str,
    pub fidelity: f64,
    pub probability: f64,
    /// Entanglement entropy of one edge qubit, in bits.
    pub entropy: f64,
}

/// Project the bulk qubits onto `bulk_outcome` (sites 2 … N−1) and classify
/// the remaining edge pair.
pub fn project_bulk_edge_bell(state: &QuditRegister, bulk_outcome: &[usize]) -> Result<BellProjection> {
    let n = state.num_sites();
    check_n(n)?;
    if bulk_outcome.len() != n - 2 || bulk_outcome.iter().any(|&b| b > 1) {
        return invalid(format!("bulk outcome must be {} bits", n - 2));
    }
    let mut s = state.clone();
    let mut prob = 1.0;
    for (k, &b) in bulk_outcome.iter().enumerate() {
        prob *= s.project(k + 1, b)?;
    }
    let rho = s.reduced_density_matrix(&[0, n - 1])?;
    let fids: Vec<f64> = (0..4)
        .map(|k| {
            let b = bell_state(k);
            let mut acc = c(0.0, 0.0);
            for i in 0..4 {
                for j in 0..4 {
                    acc += b[i].conj() * rho[(i, j)] * b[j];
                }
            }
            acc.re
        })
        .collect();
    let mut best = 0;
    for k in 1..4 {
        if fids[k] > fids[best] + 1e-12 {
            best = k;
        }
    }
    let mut single = CMatrix::zeros(2, 2);
    for a in 0..2 {
        for b in 0..2 {
            single[(a, b)] = rho[(2 * a, 2 * b)] + rho[(2 * a + 1, 2 * b + 1)];
        }
    }
    let entropy = eigh(&single).0.iter().filter(|&&l| l > 1e-15).map(|&l| -l * l.log2()).sum::<f64>().abs();
    Ok(BellProjection { rho, label: BELL_LABELS[best], fidelity: fids[best], probability: prob, entropy })
}

/// All bulk outcomes in lexicographic order (site 2 most significant).
pub fn all_bulk_outcomes(n: usize) -> Vec<Vec<usize>> {
    let m = n - 2;
    (0..1usize << m).map(|k| (0..m).map(|b| k >> (m - 1 - b) & 1).collect()).collect()
}

/// `exp(−iθ P̂₁/2)` per grid point, reporting `⟨P̂₁⟩, ⟨P̂₂⟩, ⟨P̂₃⟩` and the mean bulk stabilizer.
pub fn rabi_cluster(state: &QuditRegister, thetas: &[f64]) -> Result<RabiTrajectory> {
    let n = state.num_sites();
    check_n(n)?;
    let ps = p_operators(n);
    let mut p1_state = state.clone();
    ps[0].apply(&mut p1_state)?;
    let points: Result<Vec<_>> = thetas
        .par_iter()
        .map(|&t| {
            // P̂₁² = 1, so exp(−iθP̂₁/2) = cos(θ/2) − i sin(θ/2) P̂₁.
            let (co, si) = ((t / 2.0).cos(), (t / 2.0).sin());
            let amps: Vec<C64> = state
                .amplitudes()
                .iter()
                .zip(p1_state.amplitudes())
                .map(|(a, b)| a * co + b * c(0.0, -si))
                .collect();
            let s = QuditRegister::from_amplitudes(state.dims(), amps)?;
            Ok((
                [ps[0].expectation_real(&s)?, ps[1].expectation_real(&s)?, ps[2].expectation_real(&s)?],
                bulk_mean(&s)?,
            ))
        })
        .collect();
    Ok(RabiTrajectory::from_points(thetas, points?))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PauliScan {
    /// `single[j][α] = ⟨σ^α_{j+1}⟩`.
    pub single: Vec<[f64; 3]>,
    /// `(j, table)` with `table[α][β] = ⟨σ^α_1 σ^β_j⟩` for `j = 2 … N`.
    pub pairs: Vec<(usize, [[f64; 3]; 3])>,
    /// Mean `|⟨σ^α_1σ^β_j⟩|` over the eight entries other than `(x, z)`, per `j`.
    pub deviation: Vec<f64>,
    pub single_mean_abs: f64,
}

pub fn pauli_correlation_scan(state: &QuditRegister) -> Result<PauliScan> {
    let n = state.num_sites();
    if state.dims().iter().any(|&d| d != 2) {
        return invalid("Pauli scan needs a qubit register");
    }
    let single: Vec<[f64; 3]> = (1..=n)
        .map(|j| {
            let mut row = [0.0; 3];
            for (k, p) in Pauli::XYZ.iter().enumerate() {
                row[k] = PauliString::from_sites(n, &[(j, *p)]).expectation_real(state)?;
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let mut pairs = Vec::new();
    let mut deviation = Vec::new();
    for j in 2..=n {
        let mut t = [[0.0; 3]; 3];
        for (a, pa) in Pauli::XYZ.iter().enumerate() {
            for (b, pb) in Pauli::XYZ.iter().enumerate() {
                t[a][b] = PauliString::from_sites(n, &[(1, *pa), (j, *pb)]).expectation_real(state)?;
            }
        }
        let total: f64 = t.iter().flatten().map(|v| v.abs()).sum();
        deviation.push((total - t[0][2].abs()) / 8.0);
        pairs.push((j, t));
    }
    let single_mean_abs = single.iter().flatten().map(|v| v.abs()).sum::<f64>() / (3 * n) as f64;
    Ok(PauliScan { single, pairs, deviation, single_mean_abs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    #[test]
    fn pauli_products() {
        assert_eq!(Pauli::X.mul(Pauli::Y), (c(0.0, 1.0), Pauli::Z));
        assert_eq!(Pauli::Z.mul(Pauli::Y), (c(0.0, -1.0), Pauli::X));
        let a = PauliString::from_sites(2, &[(1, Pauli::X), (2, Pauli::Z)]);
        let b = PauliString::from_sites(2, &[(1, Pauli::Y), (2, Pauli::Y)]);
        assert!(max_abs(&(a.mul(&b).dense() - a.dense() * b.dense())) < 1e-15);
    }

    #[test]
    fn odd_n_rejected() {
        assert!(prepare_cluster(5, ClusterMode::CzLadder, EdgeDressing::PLUS).is_err());
    }

    #[test]
    fn stabilizers_hold_for_every_dressing() {
        for d in EdgeDressing::ALL {
            let s = prepare_cluster(6, ClusterMode::CzLadder, d).unwrap();
            for g in stabilizer_generators(6, d) {
                assert!((g.expectation_real(&s).unwrap() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn both_constructions_agree() {
        for d in EdgeDressing::ALL {
            let a = prepare_cluster(6, ClusterMode::CzLadder, d).unwrap();
            let b = prepare_cluster(6, ClusterMode::MsGlobal, d).unwrap();
            assert!((a.fidelity(&b).unwrap() - 1.0).abs() < 1e-10, "{d:?}");
        }
    }

    #[test]
    fn flipped_generator_gives_zero_fidelity() {
        let s = prepare_cluster(6, ClusterMode::CzLadder, EdgeDressing::PLUS).unwrap();
        let rng = RngStream::new(0);
        let f = stabilizer_fidelity(&s, EdgeDressing::PLUS, FidelityMethod::Exhaustive, &rng).unwrap();
        assert!((f.value - 1.0).abs() < 1e-10);
        let g = stabilizer_fidelity(&s, EdgeDressing::new(-1, 1).unwrap(), FidelityMethod::Exhaustive, &rng).unwrap();
        assert!(g.value.abs() < 1e-10);
    }

    #[test]
    fn edge_anticommutation() {
        let a = left_boundary(6).dense();
        let b = PauliString::from_sites(6, &[(1, Pauli::Z)]).dense();
        assert!(max_abs(&(&a * &b + &b * &a)) < 1e-15);
    }

    #[test]
    fn bulk_outcomes_enumerated() {
        let o = all_bulk_outcomes(6);
        assert_eq!(o.len(), 16);
        assert_eq!(o[1], vec![0, 0, 0, 1]);
    }
}
