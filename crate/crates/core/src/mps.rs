//! AKLT matrix product state, its contraction oracle, and sequential generation
//! through a shared ancilla.

use crate::error::{invalid, Result, SimError};
use crate::linalg::{c, is_unitary, CMatrix, C64};
use crate::register::{LevelPair, NoiseSpec, QuditRegister};
use crate::rng::RngStream;
use crate::spin::{X, Y, Z};
use std::f64::consts::FRAC_PI_2;

/// Site matrices `A^s` indexed by physical level, plus the level every site
/// starts in before it is coupled to the ancilla.
#[derive(Clone, Debug, PartialEq)]
pub struct MpsTensorSet {
    pub matrices: Vec<CMatrix>,
    pub bond_dim: usize,
    pub initial_label: usize,
}

impl MpsTensorSet {
    pub fn new(matrices: Vec<CMatrix>, initial_label: usize) -> Result<Self> {
        let bond_dim = match matrices.first() {
            Some(m) => m.nrows(),
            None => return invalid("tensor set needs at least one matrix"),
        };
        if matrices.iter().any(|m| m.nrows() != bond_dim || m.ncols() != bond_dim) {
            return invalid("all site matrices must be square with equal size");
        }
        if initial_label >= matrices.len() {
            return invalid("initial label outside the physical dimension");
        }
        Ok(Self { matrices, bond_dim, initial_label })
    }

    pub fn physical_dim(&self) -> usize {
        self.matrices.len()
    }

    /// `Σ_s (A^s)† A^s`.
    pub fn isometry_defect(&self) -> f64 {
        let mut acc = CMatrix::zeros(self.bond_dim, self.bond_dim);
        for a in &self.matrices {
            acc += a.adjoint() * a;
        }
        crate::linalg::max_abs(&(acc - CMatrix::identity(self.bond_dim, self.bond_dim)))
    }
}

pub fn pauli(axis: usize) -> CMatrix {
    let z = c(0.0, 0.0);
    match axis {
        X => CMatrix::from_row_slice(2, 2, &[z, c(1.0, 0.0), c(1.0, 0.0), z]),
        Y => CMatrix::from_row_slice(2, 2, &[z, c(0.0, -1.0), c(0.0, 1.0), z]),
        Z => CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), z, z, c(-1.0, 0.0)]),
        _ => panic!("pauli axis {axis} out of range"),
    }
}

/// `A^s = σ^s / √3` for `s ∈ {x, y, z}`, starting label `z`.
pub fn aklt_mps() -> MpsTensorSet {
    let k = c(1.0 / 3f64.sqrt(), 0.0);
    MpsTensorSet {
        matrices: (0..3).map(|a| pauli(a) * k).collect(),
        bond_dim: 2,
        initial_label: Z,
    }
}

/// Open-boundary MPS state with amplitudes `left† A^{s_1} ⋯ A^{s_N} right`.
pub fn contract_mps(tensors: &MpsTensorSet, n: usize, left: &[C64], right: &[C64]) -> Result<QuditRegister> {
    if n < 1 {
        return invalid("chain length must be at least 1");
    }
    let d = tensors.bond_dim;
    if left.len() != d || right.len() != d {
        return invalid(format!("boundary vectors must have length {d}"));
    }
    let p = tensors.physical_dim();
    // rows[k] = left† A^{s_1} ⋯ A^{s_k} for every prefix, grown one site at a time.
    let mut rows: Vec<Vec<C64>> = vec![left.iter().map(|v| v.conj()).collect()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(rows.len() * p);
        for r in &rows {
            for a in &tensors.matrices {
                next.push((0..d).map(|j| (0..d).map(|i| r[i] * a[(i, j)]).sum()).collect());
            }
        }
        rows = next;
    }
    let amps: Vec<C64> = rows.iter().map(|r| r.iter().zip(right).map(|(x, y)| x * y).sum()).collect();
    if amps.iter().all(|a| a.norm() < 1e-300) {
        return Err(SimError::DegenerateBoundary);
    }
    QuditRegister::from_amplitudes(&vec![p; n], amps)
}

/// Two ancilla states of the qubit ancilla.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Ancilla {
    Up,
    Down,
}

impl Ancilla {
    pub const BOTH: [Ancilla; 2] = [Ancilla::Up, Ancilla::Down];

    pub fn level(self) -> usize {
        match self {
            Ancilla::Up => 0,
            Ancilla::Down => 1,
        }
    }

    pub fn from_level(level: usize) -> Option<Self> {
        match level {
            0 => Some(Ancilla::Up),
            1 => Some(Ancilla::Down),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Ancilla::Up => "up",
            Ancilla::Down => "down",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "up" | "u" | "0" => Some(Ancilla::Up),
            "down" | "d" | "1" => Some(Ancilla::Down),
            _ => None,
        }
    }
}

/// Boundary vectors reproducing the sequential protocol for a given
/// `(init, outcome)` pair. The sequential amplitude is
/// `(A^{s_N} ⋯ A^{s_1})_{outcome, init}`, and `A^T = −σ^y A σ^y` turns it into
/// `(σ^y e_init)† A^{s_1} ⋯ A^{s_N} (σ^y e_outcome)` up to a global phase, so
/// `↑` pairs with `(0, 1)` on both ends.
pub fn boundary_vectors(init: Ancilla, outcome: Ancilla) -> ([C64; 2], [C64; 2]) {
    let v = |a: Ancilla| match a {
        Ancilla::Up => [c(0.0, 0.0), c(1.0, 0.0)],
        Ancilla::Down => [c(1.0, 0.0), c(0.0, 0.0)],
    };
    (v(init), v(outcome))
}

/// Ancilla-site coupling `Û = Σ A^s_{βα} |β, s⟩⟨α, s₀|` completed to a unitary.
/// The ancilla is the more significant factor: index `β·d + s`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeqGenUnitary {
    pub matrix: CMatrix,
    pub isometry_columns: Vec<usize>,
    pub completion_columns: Vec<usize>,
    pub bond_dim: usize,
    pub physical_dim: usize,
}

pub fn build_seqgen_unitary(tensors: &MpsTensorSet) -> Result<SeqGenUnitary> {
    if tensors.isometry_defect() > 1e-12 {
        return invalid("tensor set is not an isometry: Σ A†A ≠ 1");
    }
    let (bd, p, s0) = (tensors.bond_dim, tensors.physical_dim(), tensors.initial_label);
    let dim = bd * p;
    let mut u = CMatrix::zeros(dim, dim);
    let isometry_columns: Vec<usize> = (0..bd).map(|alpha| alpha * p + s0).collect();
    for (alpha, &col) in isometry_columns.iter().enumerate() {
        for beta in 0..bd {
            for (s, a) in tensors.matrices.iter().enumerate() {
                u[(beta * p + s, col)] = a[(beta, alpha)];
            }
        }
    }
    let completion_columns: Vec<usize> = (0..dim).filter(|k| !isometry_columns.contains(k)).collect();
    let mut filled: Vec<Vec<C64>> = isometry_columns.iter().map(|&k| u.column(k).iter().copied().collect()).collect();
    let mut next_candidate = 0;
    for &col in &completion_columns {
        loop {
            if next_candidate >= dim {
                return invalid("Gram-Schmidt completion ran out of candidates");
            }
            let mut v = vec![c(0.0, 0.0); dim];
            v[next_candidate] = c(1.0, 0.0);
            next_candidate += 1;
            for q in &filled {
                let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= proj * y);
            }
            let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-8 {
                v.iter_mut().for_each(|x| *x /= norm);
                for (r, x) in v.iter().enumerate() {
                    u[(r, col)] = *x;
                }
                filled.push(v);
                break;
            }
        }
    }
    debug_assert!(is_unitary(&u, 1e-12));
    Ok(SeqGenUnitary { matrix: u, isometry_columns, completion_columns, bond_dim: bd, physical_dim: p })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum PrepMode {
    ExactUnitary,
    Table2Circuit,
}

impl PrepMode {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "exact" | "exact-unitary" => Some(PrepMode::ExactUnitary),
            "table2" | "table2-circuit" => Some(PrepMode::Table2Circuit),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PrepMode::ExactUnitary => "exact-unitary",
            PrepMode::Table2Circuit => "table2-circuit",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PreparedState {
    pub chain_state: QuditRegister,
    pub ancilla_init: Ancilla,
    pub ancilla_outcome: Ancilla,
    pub outcome_probability: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Target {
    Ancilla,
    Spin,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CircuitGate {
    Rz { levels: (usize, usize), theta: f64, target: Target },
    R { levels: (usize, usize), theta: f64, phi: f64, target: Target },
    Ms { levels: (usize, usize), theta: f64, phi: f64 },
}

use CircuitGate::{Ms, Rz, R};
use Target::{Ancilla as A, Spin as S};

/// Two-ion decomposition of the ancilla-site coupling in hardware level order.
#[allow(clippy::approx_constant)]
pub const TABLE2: [CircuitGate; 27] = [
    Rz { levels: (0, 1), theta: 3.022, target: A },
    Rz { levels: (1, 2), theta: -3.222, target: A },
    R { levels: (1, 2), theta: 0.245, phi: 1.414, target: A },
    R { levels: (0, 1), theta: 3.064, phi: 5.494, target: A },
    R { levels: (1, 2), theta: 0.743, phi: -0.539, target: A },
    Ms { levels: (1, 2), theta: FRAC_PI_2, phi: 0.0 },
    Rz { levels: (0, 1), theta: 1.444, target: S },
    Rz { levels: (1, 2), theta: -1.012, target: S },
    R { levels: (1, 2), theta: 1.020, phi: 1.096, target: S },
    R { levels: (0, 1), theta: 2.218, phi: 3.244, target: S },
    R { levels: (1, 2), theta: 1.366, phi: 2.191, target: S },
    Rz { levels: (0, 1), theta: 5.748, target: A },
    Rz { levels: (1, 2), theta: 6.254, target: A },
    R { levels: (1, 2), theta: 1.521, phi: -1.293, target: A },
    R { levels: (0, 1), theta: 2.848, phi: 2.445, target: A },
    R { levels: (1, 2), theta: 0.219, phi: 4.322, target: A },
    Ms { levels: (1, 2), theta: FRAC_PI_2, phi: 0.0 },
    Rz { levels: (0, 1), theta: 3.047, target: S },
    Rz { levels: (1, 2), theta: 1.511, target: S },
    R { levels: (1, 2), theta: 1.488, phi: -2.107, target: S },
    R { levels: (0, 1), theta: 3.990, phi: 3.396, target: S },
    R { levels: (1, 2), theta: 0.961, phi: -2.615, target: S },
    Rz { levels: (0, 1), theta: 0.530, target: A },
    Rz { levels: (1, 2), theta: -2.678, target: A },
    R { levels: (1, 2), theta: 0.0, phi: 0.0, target: A },
    R { levels: (0, 1), theta: 3.141, phi: 4.514, target: A },
    R { levels: (1, 2), theta: 0.708, phi: 1.571, target: A },
];

/// Which hardware level hosts each logical state: the ancilla qubit `↑`, `↓`
/// and the qutrit labels `x`, `y`, `z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct LevelAssignment {
    pub ancilla_up: usize,
    pub ancilla_down: usize,
    pub qutrit: [usize; 3],
}

impl LevelAssignment {
    pub fn ancilla_spare(&self) -> usize {
        3 - self.ancilla_up - self.ancilla_down
    }

    /// Logical-to-hardware permutation for the 3-level ancilla: `↑, ↓, spare`.
    fn ancilla_map(&self) -> [usize; 3] {
        [self.ancilla_up, self.ancilla_down, self.ancilla_spare()]
    }
}

/// Frozen result of [`search_level_assignment`].
pub const TABLE2_ASSIGNMENT: LevelAssignment = LevelAssignment { ancilla_up: 0, ancilla_down: 1, qutrit: [1, 2, 0] };

/// Apply one circuit row to a register with the ancilla at `anc` and the spin at `spin`.
pub fn apply_circuit_gate(reg: &mut QuditRegister, gate: &CircuitGate, anc: usize, spin: usize) -> Result<()> {
    let site = |t: Target| if t == Target::Ancilla { anc } else { spin };
    match *gate {
        Rz { levels, theta, target } => reg.rotate_z(LevelPair::new(site(target), levels.0, levels.1), theta),
        R { levels, theta, phi, target } => reg.rotate(LevelPair::new(site(target), levels.0, levels.1), theta, phi),
        Ms { levels, theta, phi } => reg.ms(
            LevelPair::new(anc, levels.0, levels.1),
            LevelPair::new(spin, levels.0, levels.1),
            theta,
            phi,
        ),
    }
}

/// The composed circuit as a 9×9 unitary on (ancilla ⊗ spin) in hardware level order.
pub fn table2_unitary_hardware() -> CMatrix {
    let mut u = CMatrix::zeros(9, 9);
    for col in 0..9 {
        let mut reg = QuditRegister::product_state(&[3, 3], &[col / 3, col % 3]).expect("valid basis state");
        for g in &TABLE2 {
            apply_circuit_gate(&mut reg, g, 0, 1).expect("valid table row");
        }
        for (r, a) in reg.amplitudes().iter().enumerate() {
            u[(r, col)] = *a;
        }
    }
    u
}

/// The composed circuit in logical order: ancilla `↑, ↓, spare` ⊗ qutrit `x, y, z`.
pub fn table2_unitary(assign: &LevelAssignment) -> CMatrix {
    let hw = table2_unitary_hardware();
    let am = assign.ancilla_map();
    let to_hw = |k: usize| am[k / 3] * 3 + assign.qutrit[k % 3];
    CMatrix::from_fn(9, 9, |r, col| hw[(to_hw(r), to_hw(col))])
}

/// Exact coupling embedded into a 3-level ancilla (spare level left invariant).
pub fn seqgen_embedded(u: &SeqGenUnitary) -> CMatrix {
    let p = u.physical_dim;
    let mut m = CMatrix::identity(3 * p, 3 * p);
    for r in 0..2 * p {
        for col in 0..2 * p {
            m[(r, col)] = u.matrix[(r, col)];
        }
    }
    m
}

/// Process fidelity `|Σ_α ⟨Û α,s₀| V |α,s₀⟩|² / D²` of a candidate coupling `V`
/// (ancilla dimension 3) on the isometric input subspace.
pub fn isometry_process_fidelity(v: &CMatrix, target: &SeqGenUnitary) -> f64 {
    let p = target.physical_dim;
    let mut acc = c(0.0, 0.0);
    for &col in &target.isometry_columns {
        let (alpha, s) = (col / p, col % p);
        let vc = alpha * p + s;
        for r in 0..target.bond_dim * p {
            acc += target.matrix[(r, col)].conj() * v[(r, vc)];
        }
    }
    acc.norm_sqr() / (target.bond_dim * target.bond_dim) as f64
}

/// Brute-force search over ancilla qubit levels and qutrit level orderings,
/// returning every candidate with its process fidelity, best first.
pub fn search_level_assignment() -> Vec<(LevelAssignment, f64)> {
    let target = build_seqgen_unitary(&aklt_mps()).expect("AKLT tensors are isometric");
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut out = Vec::new();
    for up in 0..3 {
        for down in 0..3 {
            if up == down {
                continue;
            }
            for q in perms {
                let a = LevelAssignment { ancilla_up: up, ancilla_down: down, qutrit: q };
                out.push((a, isometry_process_fidelity(&table2_unitary(&a), &target)));
            }
        }
    }
    out.sort_by(|x, y| y.1.total_cmp(&x.1));
    out
}

fn depolarize_pair(reg: &mut QuditRegister, anc: usize, spin: usize, p: f64, rng: &mut RngStream) -> Result<()> {
    if p == 0.0 || rng.uniform() >= p {
        return Ok(());
    }
    reg.depolarize_levels(anc, &[0, 1], 1.0, rng)?;
    reg.depolarize(&[spin], 1.0, rng)?;
    Ok(())
}

/// Run the sequential protocol and return the joint (ancilla ⊗ chain) register
/// before the ancilla is measured.
pub fn sequential_register(
    n: usize,
    init: Ancilla,
    mode: PrepMode,
    noise: NoiseSpec,
    rng: &mut RngStream,
) -> Result<QuditRegister> {
    if n < 2 {
        return invalid("chain length must be at least 2");
    }
    noise.validate()?;
    let tensors = aklt_mps();
    let u = build_seqgen_unitary(&tensors)?;
    let anc_dim = if mode == PrepMode::ExactUnitary { 2 } else { 3 };
    let mut dims = vec![anc_dim];
    dims.extend(std::iter::repeat_n(3, n));
    let mut levels = vec![init.level()];
    levels.extend(std::iter::repeat_n(tensors.initial_label, n));
    let mut reg = QuditRegister::product_state(&dims, &levels)?;
    let mut labels = vec!["anc".to_string()];
    labels.extend((1..=n).map(|j| format!("s{j}")));
    reg = reg.with_labels(labels)?;
    match mode {
        PrepMode::ExactUnitary => {
            for site in 1..=n {
                reg.apply_operator(&[0, site], &u.matrix)?;
                depolarize_pair(&mut reg, 0, site, noise.p_two_site, rng)?;
            }
        }
        PrepMode::Table2Circuit => {
            let assign = TABLE2_ASSIGNMENT;
            if noise.is_noiseless() {
                let v = table2_unitary(&assign);
                for site in 1..=n {
                    reg.apply_operator(&[0, site], &v)?;
                }
            } else {
                // Gate-by-gate in hardware labels so each row can fail independently.
                let perm = logical_to_hardware(&assign);
                let inv = perm.transpose();
                for site in 1..=n {
                    reg.apply_operator(&[0, site], &perm)?;
                    for g in &TABLE2 {
                        apply_circuit_gate(&mut reg, g, 0, site)?;
                        match g {
                            Ms { .. } => depolarize_pair(&mut reg, 0, site, noise.p_two_site, rng)?,
                            Rz { target, .. } | R { target, .. } => {
                                if noise.p_one_site > 0.0 && rng.uniform() < noise.p_one_site {
                                    if *target == Target::Ancilla {
                                        reg.depolarize_levels(0, &[assign.ancilla_up, assign.ancilla_down], 1.0, rng)?;
                                    } else {
                                        reg.depolarize(&[site], 1.0, rng)?;
                                    }
                                }
                            }
                        }
                    }
                    reg.apply_operator(&[0, site], &inv)?;
                }
            }
        }
    }
    Ok(reg)
}

fn logical_to_hardware(assign: &LevelAssignment) -> CMatrix {
    let am = assign.ancilla_map();
    let mut p = CMatrix::zeros(9, 9);
    for k in 0..9 {
        p[(am[k / 3] * 3 + assign.qutrit[k % 3], k)] = c(1.0, 0.0);
    }
    p
}

/// Probability of each ancilla outcome (`↑`, `↓`) after the sequential protocol.
pub fn outcome_probabilities(joint: &QuditRegister) -> Result<[f64; 2]> {
    let p = joint.site_probabilities(0)?;
    Ok([p[0], p[1]])
}

/// Sequential preparation post-selected on a chosen ancilla outcome.
pub fn prepare_aklt_postselected(
    n: usize,
    init: Ancilla,
    outcome: Ancilla,
    mode: PrepMode,
    noise: NoiseSpec,
    rng: &mut RngStream,
) -> Result<PreparedState> {
    let joint = sequential_register(n, init, mode, noise, rng)?;
    let (p, chain) = joint.project_out(0, outcome.level())?;
    Ok(PreparedState { chain_state: chain, ancilla_init: init, ancilla_outcome: outcome, outcome_probability: p })
}

/// Sequential preparation with a sampled ancilla measurement. In table2 mode
/// the ancilla can leak to its spare level; such shots are discarded and redrawn
/// from the qubit outcomes, with the reported probability conditioned on that.
pub fn prepare_aklt(n: usize, init: Ancilla, mode: PrepMode, noise: NoiseSpec, rng: &mut RngStream) -> Result<PreparedState> {
    let joint = sequential_register(n, init, mode, noise, rng)?;
    let probs = outcome_probabilities(&joint)?;
    let total = probs[0] + probs[1];
    if total <= 0.0 {
        return Err(SimError::DegenerateProjection("ancilla left the qubit subspace".into()));
    }
    let outcome = if rng.uniform() * total < probs[0] { Ancilla::Up } else { Ancilla::Down };
    let (p, chain) = joint.project_out(0, outcome.level())?;
    Ok(PreparedState { chain_state: chain, ancilla_init: init, ancilla_outcome: outcome, outcome_probability: p })
}

/// Normalized `ψ(↑,↑) + ψ(↓,↓)`: the total-spin singlet of the two edge spins.
pub fn aklt_symmetric_state(n: usize) -> Result<QuditRegister> {
    let a = aklt_state(n, Ancilla::Up, Ancilla::Up)?;
    let b = aklt_state(n, Ancilla::Down, Ancilla::Down)?;
    let amps = a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| x + y).collect();
    QuditRegister::from_amplitudes(a.dims(), amps)
}

/// Noise-free exact AKLT state for an `(init, outcome)` pair.
pub fn aklt_state(n: usize, init: Ancilla, outcome: Ancilla) -> Result<QuditRegister> {
    Ok(prepare_aklt_postselected(n, init, outcome, PrepMode::ExactUnitary, NoiseSpec::NONE, &mut RngStream::new(0))?.chain_state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    fn s3() -> f64 {
        1.0 / 3f64.sqrt()
    }

    #[test]
    fn aklt_tensors() {
        let t = aklt_mps();
        assert!(t.isometry_defect() < 1e-12);
        let az = &t.matrices[Z];
        assert!((az[(0, 0)].re - s3()).abs() < 1e-15 && (az[(1, 1)].re + s3()).abs() < 1e-15);
        assert_eq!(az[(0, 1)], c(0.0, 0.0));
        assert!((&t.matrices[X] * &t.matrices[Y]).trace().norm() < 1e-15);
    }

    #[test]
    fn two_site_amplitudes_match_hand_products() {
        // left = right = (1,0): amplitude ∝ (σ^a σ^b)_{00}
        // xx → 1, yy → 1, zz → 1, xy → i, yx → −i, others 0
        let e = [c(1.0, 0.0), c(0.0, 0.0)];
        let st = contract_mps(&aklt_mps(), 2, &e, &e).unwrap();
        let k = 1.0 / 5f64.sqrt();
        let want = [
            c(k, 0.0), c(0.0, k), c(0.0, 0.0),
            c(0.0, -k), c(k, 0.0), c(0.0, 0.0),
            c(0.0, 0.0), c(0.0, 0.0), c(k, 0.0),
        ];
        for (a, w) in st.amplitudes().iter().zip(want) {
            assert!((a - w).norm() < 1e-12, "{a} vs {w}");
        }
    }

    #[test]
    fn zero_boundary_is_degenerate() {
        let z = [c(0.0, 0.0), c(0.0, 0.0)];
        let e = [c(1.0, 0.0), c(0.0, 0.0)];
        assert_eq!(contract_mps(&aklt_mps(), 3, &z, &e).unwrap_err(), SimError::DegenerateBoundary);
    }

    #[test]
    fn seqgen_unitary_mappings() {
        let u = build_seqgen_unitary(&aklt_mps()).unwrap();
        assert!(is_unitary(&u.matrix, 1e-12));
        let k = s3();
        // columns |↑,z⟩ = 2 and |↓,z⟩ = 5; rows β·3 + s
        let up = u.matrix.column(2);
        assert!((up[3] - c(k, 0.0)).norm() < 1e-15);
        assert!((up[4] - c(0.0, k)).norm() < 1e-15);
        assert!((up[2] - c(k, 0.0)).norm() < 1e-15);
        let down = u.matrix.column(5);
        assert!((down[0] - c(k, 0.0)).norm() < 1e-15);
        assert!((down[1] - c(0.0, -k)).norm() < 1e-15);
        assert!((down[5] - c(-k, 0.0)).norm() < 1e-15);
        assert_eq!(u.isometry_columns, vec![2, 5]);
    }

    #[test]
    fn non_isometric_tensors_are_rejected() {
        let mut t = aklt_mps();
        t.matrices[X] *= c(2.0, 0.0);
        assert!(build_seqgen_unitary(&t).is_err());
    }

    #[test]
    fn table_rows_and_zero_angle_row() {
        assert_eq!(TABLE2.iter().filter(|g| matches!(g, Ms { .. })).count(), 2);
        assert_eq!(TABLE2.len() - 2, 25);
        assert!(matches!(TABLE2[24], R { theta, .. } if theta == 0.0));
        assert!(is_unitary(&table2_unitary_hardware(), 1e-12));
    }

    #[test]
    fn frozen_assignment_is_search_optimum() {
        let ranked = search_level_assignment();
        assert_eq!(ranked.len(), 36);
        assert_eq!(ranked[0].0, TABLE2_ASSIGNMENT);
    }

    #[test]
    fn embedded_exact_coupling_has_unit_fidelity() {
        let u = build_seqgen_unitary(&aklt_mps()).unwrap();
        assert!((isometry_process_fidelity(&seqgen_embedded(&u), &u) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn noisy_gate_by_gate_matches_compiled_when_noise_never_fires() {
        let tiny = NoiseSpec::new(1e-300, 1e-300).unwrap();
        let mut rng = RngStream::new(3);
        let a = sequential_register(2, Ancilla::Up, PrepMode::Table2Circuit, tiny, &mut rng).unwrap();
        let b = sequential_register(2, Ancilla::Up, PrepMode::Table2Circuit, NoiseSpec::NONE, &mut rng).unwrap();
        let diff: f64 = a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(diff < 1e-12);
    }

    #[test]
    fn outcome_probabilities_sum_to_one() {
        for init in Ancilla::BOTH {
            let joint = sequential_register(4, init, PrepMode::ExactUnitary, NoiseSpec::NONE, &mut RngStream::new(0)).unwrap();
            let p = outcome_probabilities(&joint).unwrap();
            assert!((p[0] + p[1] - 1.0).abs() < 1e-12);
        }
        let u = build_seqgen_unitary(&aklt_mps()).unwrap();
        assert!(max_abs(&(u.matrix.adjoint() * &u.matrix - CMatrix::identity(6, 6))) < 1e-12);
    }
}
