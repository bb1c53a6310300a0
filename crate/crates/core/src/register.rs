//! Mixed-radix pure-state register and the trapped-ion style gate set acting on it.
//!
//! Amplitudes are stored in row-major (big-endian) order: site 0 is the most
//! significant tensor slot. Chains prepared with an ancilla put the ancilla at
//! site 0.

use crate::error::{invalid, Result, SimError};
use crate::linalg::{c, eigh, hermiticity_defect, CMatrix, C64};
use crate::report::Moments;
use crate::rng::RngStream;

pub const NORM_TOL: f64 = 1e-12;

/// Two distinct levels `a`, `b` of one site, defining an embedded qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LevelPair {
    pub site: usize,
    pub a: usize,
    pub b: usize,
}

impl LevelPair {
    pub fn new(site: usize, a: usize, b: usize) -> Self {
        Self { site, a, b }
    }
}

/// Per-gate depolarizing probabilities for trajectory noise.
#[derive(Clone, Copy, Debug, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct NoiseSpec {
    pub p_two_site: f64,
    pub p_one_site: f64,
}

impl NoiseSpec {
    pub const NONE: NoiseSpec = NoiseSpec { p_two_site: 0.0, p_one_site: 0.0 };

    pub fn new(p_two_site: f64, p_one_site: f64) -> Result<Self> {
        let n = Self { p_two_site, p_one_site };
        n.validate()?;
        Ok(n)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p_two_site", self.p_two_site), ("p_one_site", self.p_one_site)] {
            if !(0.0..=1.0).contains(&p) {
                return invalid(format!("{name} = {p} outside [0, 1]"));
            }
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.p_two_site == 0.0 && self.p_one_site == 0.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuditRegister {
    dims: Vec<usize>,
    strides: Vec<usize>,
    labels: Vec<String>,
    amps: Vec<C64>,
}

fn strides_for(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; dims.len()];
    for s in (0..dims.len().saturating_sub(1)).rev() {
        strides[s] = strides[s + 1] * dims[s + 1];
    }
    strides
}

fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return invalid("register needs at least one site");
    }
    if let Some(d) = dims.iter().find(|&&d| d < 2) {
        return invalid(format!("site dimension {d} < 2"));
    }
    Ok(())
}

impl QuditRegister {
    /// Basis state `|levels⟩` over sites of the given dimensions.
    pub fn product_state(dims: &[usize], levels: &[usize]) -> Result<Self> {
        check_dims(dims)?;
        if dims.len() != levels.len() {
            return invalid(format!("{} dims but {} levels", dims.len(), levels.len()));
        }
        for (s, (&d, &l)) in dims.iter().zip(levels).enumerate() {
            if l >= d {
                return invalid(format!("level {l} out of range for site {s} of dimension {d}"));
            }
        }
        let strides = strides_for(dims);
        let total: usize = dims.iter().product();
        let mut amps = vec![C64::new(0.0, 0.0); total];
        let idx: usize = levels.iter().zip(&strides).map(|(l, s)| l * s).sum();
        amps[idx] = c(1.0, 0.0);
        Ok(Self {
            dims: dims.to_vec(),
            strides,
            labels: default_labels(dims.len()),
            amps,
        })
    }

    /// Wrap (and normalize) an arbitrary amplitude vector.
    pub fn from_amplitudes(dims: &[usize], amps: Vec<C64>) -> Result<Self> {
        check_dims(dims)?;
        let total: usize = dims.iter().product();
        if amps.len() != total {
            return invalid(format!("{} amplitudes for total dimension {total}", amps.len()));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return invalid("amplitude vector has zero or non-finite norm");
        }
        Ok(Self {
            dims: dims.to_vec(),
            strides: strides_for(dims),
            labels: default_labels(dims.len()),
            amps: amps.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dims.len() {
            return invalid("one label per site required");
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_sites(&self) -> usize {
        self.dims.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn site_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dims != other.dims {
            return invalid("inner product of registers with different dims");
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Levels of every site for a flat basis index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for s in (0..self.dims.len()).rev() {
            out[s] = index % self.dims[s];
            index /= self.dims[s];
        }
        out
    }

    pub fn index_of(&self, levels: &[usize]) -> usize {
        levels.iter().zip(&self.strides).map(|(l, s)| l * s).sum()
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.dims.len() {
            return invalid(format!("site {site} out of range ({} sites)", self.dims.len()));
        }
        Ok(())
    }

    fn check_pair(&self, pair: &LevelPair) -> Result<()> {
        self.check_site(pair.site)?;
        let d = self.dims[pair.site];
        if pair.a == pair.b || pair.a >= d || pair.b >= d {
            return invalid(format!("invalid level pair ({}, {}) on site {} of dimension {d}", pair.a, pair.b, pair.site));
        }
        Ok(())
    }

    /// Flat offsets of every basis state of `sites` (in the order given,
    /// first site most significant), plus the list of base indices of the complement.
    fn subsystem_layout(&self, sites: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut offsets = vec![0usize];
        for &s in sites {
            let mut next = Vec::with_capacity(offsets.len() * self.dims[s]);
            for &o in &offsets {
                for l in 0..self.dims[s] {
                    next.push(o + l * self.strides[s]);
                }
            }
            offsets = next;
        }
        let rest: Vec<usize> = (0..self.dims.len()).filter(|s| !sites.contains(s)).collect();
        let mut bases = vec![0usize];
        for &s in &rest {
            let mut next = Vec::with_capacity(bases.len() * self.dims[s]);
            for &o in &bases {
                for l in 0..self.dims[s] {
                    next.push(o + l * self.strides[s]);
                }
            }
            bases = next;
        }
        (offsets, bases)
    }

    fn check_sites(&self, sites: &[usize]) -> Result<usize> {
        for (k, &s) in sites.iter().enumerate() {
            self.check_site(s)?;
            if sites[..k].contains(&s) {
                return invalid(format!("site {s} listed twice"));
            }
        }
        Ok(sites.iter().map(|&s| self.dims[s]).product())
    }

    /// Apply a dense operator acting on `sites` (first listed site most significant).
    /// The operator need not be unitary; callers renormalize when required.
    pub fn apply_operator(&mut self, sites: &[usize], op: &CMatrix) -> Result<()> {
        let sub = self.check_sites(sites)?;
        if op.nrows() != sub || op.ncols() != sub {
            return invalid(format!("operator is {}x{} but selected sites span {sub}", op.nrows(), op.ncols()));
        }
        let (offsets, bases) = self.subsystem_layout(sites);
        let mut buf = vec![C64::new(0.0, 0.0); sub];
        for &b in &bases {
            for (k, &o) in offsets.iter().enumerate() {
                buf[k] = self.amps[b + o];
            }
            for (r, &o) in offsets.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (k, v) in buf.iter().enumerate() {
                    acc += op[(r, k)] * v;
                }
                self.amps[b + o] = acc;
            }
        }
        Ok(())
    }

    /// Apply a product operator `⊗_k ops[k]` on distinct sites.
    pub fn apply_product(&mut self, ops: &[(usize, &CMatrix)]) -> Result<()> {
        for (site, m) in ops {
            self.apply_operator(&[*site], m)?;
        }
        Ok(())
    }

    /// `exp(-i θ/2 (cos φ X_ab + sin φ Y_ab))` on the embedded two-level subspace.
    pub fn rotate(&mut self, pair: LevelPair, theta: f64, phi: f64) -> Result<()> {
        self.check_pair(&pair)?;
        let (cs, sn) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let m_ab = C64::new(0.0, -sn) * C64::from_polar(1.0, -phi);
        let m_ba = C64::new(0.0, -sn) * C64::from_polar(1.0, phi);
        self.two_level_map(pair, [[c(cs, 0.0), m_ab], [m_ba, c(cs, 0.0)]]);
        Ok(())
    }

    /// `exp(-i θ/2 Z_ab)`: phase `e^{-iθ/2}` on `a`, `e^{+iθ/2}` on `b`.
    pub fn rotate_z(&mut self, pair: LevelPair, theta: f64) -> Result<()> {
        self.check_pair(&pair)?;
        let zero = C64::new(0.0, 0.0);
        self.two_level_map(
            pair,
            [[C64::from_polar(1.0, -theta / 2.0), zero], [zero, C64::from_polar(1.0, theta / 2.0)]],
        );
        Ok(())
    }

    fn two_level_map(&mut self, pair: LevelPair, m: [[C64; 2]; 2]) {
        let stride = self.strides[pair.site];
        let d = self.dims[pair.site];
        let block = stride * d;
        let (oa, ob) = (pair.a * stride, pair.b * stride);
        for outer in (0..self.amps.len()).step_by(block) {
            for inner in 0..stride {
                let ia = outer + oa + inner;
                let ib = outer + ob + inner;
                let (va, vb) = (self.amps[ia], self.amps[ib]);
                self.amps[ia] = m[0][0] * va + m[0][1] * vb;
                self.amps[ib] = m[1][0] * va + m[1][1] * vb;
            }
        }
    }

    /// Mølmer–Sørensen gate `exp(-i θ/2 X_φ^{(a)} ⊗ X_φ^{(b)})` on the two
    /// embedded qubits; identity whenever either site sits outside its pair.
    pub fn ms(&mut self, pair_a: LevelPair, pair_b: LevelPair, theta: f64, phi: f64) -> Result<()> {
        self.check_pair(&pair_a)?;
        self.check_pair(&pair_b)?;
        if pair_a.site == pair_b.site {
            return invalid("MS gate needs two distinct sites");
        }
        let (cs, sn) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        // X_φ|a⟩ = e^{iφ}|b⟩, X_φ|b⟩ = e^{-iφ}|a⟩ on each site.
        let xphi = |from_a: bool| if from_a { C64::from_polar(1.0, phi) } else { C64::from_polar(1.0, -phi) };
        let (sa, sb) = (self.strides[pair_a.site], self.strides[pair_b.site]);
        let levels_a = [pair_a.a, pair_a.b];
        let levels_b = [pair_b.a, pair_b.b];
        let (_, bases) = self.subsystem_layout(&[pair_a.site, pair_b.site]);
        let minus_i_sin = C64::new(0.0, -sn);
        for &base in &bases {
            let idx = |i: usize, j: usize| base + levels_a[i] * sa + levels_b[j] * sb;
            let v = [
                [self.amps[idx(0, 0)], self.amps[idx(0, 1)]],
                [self.amps[idx(1, 0)], self.amps[idx(1, 1)]],
            ];
            for i in 0..2 {
                for j in 0..2 {
                    // (X⊗X)|i', j'⟩ lands on |1-i', 1-j'⟩; pull back from the flipped component.
                    let (fi, fj) = (1 - i, 1 - j);
                    let phase = xphi(fi == 0) * xphi(fj == 0);
                    self.amps[idx(i, j)] = cs * v[i][j] + minus_i_sin * phase * v[fi][fj];
                }
            }
        }
        Ok(())
    }

    /// Born probabilities of every level of `site`.
    pub fn site_probabilities(&self, site: usize) -> Result<Vec<f64>> {
        self.check_site(site)?;
        let d = self.dims[site];
        let stride = self.strides[site];
        let mut p = vec![0.0; d];
        for (i, a) in self.amps.iter().enumerate() {
            p[(i / stride) % d] += a.norm_sqr();
        }
        Ok(p)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Project `site` onto `level` and renormalize; returns the probability.
    pub fn project(&mut self, site: usize, level: usize) -> Result<f64> {
        self.check_site(site)?;
        let d = self.dims[site];
        if level >= d {
            return invalid(format!("level {level} out of range for dimension {d}"));
        }
        let stride = self.strides[site];
        let mut p = 0.0;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i / stride) % d == level {
                p += a.norm_sqr();
            } else {
                *a = C64::new(0.0, 0.0);
            }
        }
        if p <= 0.0 {
            return Err(SimError::DegenerateProjection(format!("site {site} level {level}")));
        }
        let s = p.sqrt();
        self.amps.iter_mut().for_each(|a| *a /= s);
        Ok(p)
    }

    /// Project `site` onto `level` and drop it from the register.
    pub fn project_out(&self, site: usize, level: usize) -> Result<(f64, QuditRegister)> {
        let mut tmp = self.clone();
        let p = tmp.project(site, level)?;
        let dims: Vec<usize> = self.dims.iter().enumerate().filter(|&(s, _)| s != site).map(|(_, &d)| d).collect();
        let labels: Vec<String> = self.labels.iter().enumerate().filter(|&(s, _)| s != site).map(|(_, l)| l.clone()).collect();
        let stride = self.strides[site];
        let d = self.dims[site];
        let amps: Vec<C64> = tmp
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| (i / stride) % d == level)
            .map(|(_, a)| *a)
            .collect();
        let reg = QuditRegister::from_amplitudes(&dims, amps)?.with_labels(labels)?;
        Ok((p, reg))
    }

    /// Projective measurement of `site` in its computational basis.
    pub fn measure(&mut self, site: usize, rng: &mut RngStream) -> Result<usize> {
        let probs = self.site_probabilities(site)?;
        let mut cdf = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for p in probs {
            acc += p;
            cdf.push(acc);
        }
        let outcome = rng.sample_cdf(&cdf);
        self.project(site, outcome)?;
        Ok(outcome)
    }

    /// Move the (already collapsed) site from level `from` to `to`.
    fn relabel_level(&mut self, site: usize, from: usize, to: usize) {
        if from == to {
            return;
        }
        let stride = self.strides[site];
        let d = self.dims[site];
        let block = stride * d;
        for outer in (0..self.amps.len()).step_by(block) {
            for inner in 0..stride {
                let i_from = outer + from * stride + inner;
                let i_to = outer + to * stride + inner;
                self.amps[i_to] = self.amps[i_from];
                self.amps[i_from] = C64::new(0.0, 0.0);
            }
        }
    }

    /// Trajectory depolarizing channel on `levels` of `site`: with probability
    /// `p` the site is measured and reset to a uniformly random level drawn from
    /// `levels`. A site found outside `levels` is left untouched.
    pub fn depolarize_levels(&mut self, site: usize, levels: &[usize], p: f64, rng: &mut RngStream) -> Result<bool> {
        self.check_site(site)?;
        if !(0.0..=1.0).contains(&p) {
            return invalid(format!("depolarizing probability {p} outside [0, 1]"));
        }
        if p == 0.0 || rng.uniform() >= p {
            return Ok(false);
        }
        let outcome = self.measure(site, rng)?;
        if levels.contains(&outcome) {
            let target = levels[rng.below(levels.len())];
            self.relabel_level(site, outcome, target);
        }
        Ok(true)
    }

    /// Trajectory depolarizing channel on `sites`: with probability `p`, each
    /// selected site is replaced by a uniformly random computational basis state.
    pub fn depolarize(&mut self, sites: &[usize], p: f64, rng: &mut RngStream) -> Result<bool> {
        self.check_sites(sites)?;
        if !(0.0..=1.0).contains(&p) {
            return invalid(format!("depolarizing probability {p} outside [0, 1]"));
        }
        if p == 0.0 || rng.uniform() >= p {
            return Ok(false);
        }
        for &s in sites {
            let outcome = self.measure(s, rng)?;
            let target = rng.below(self.dims[s]);
            self.relabel_level(s, outcome, target);
        }
        Ok(true)
    }

    /// `⟨ψ|O|ψ⟩` for a Hermitian operator on `sites`.
    pub fn expectation(&self, sites: &[usize], op: &CMatrix) -> Result<f64> {
        if hermiticity_defect(op) > 1e-10 {
            return invalid("operator is not Hermitian");
        }
        let mut tmp = self.clone();
        tmp.apply_operator(sites, op)?;
        let v: C64 = self.amps.iter().zip(&tmp.amps).map(|(a, b)| a.conj() * b).sum();
        if v.im.abs() > 1e-10 {
            return invalid(format!("expectation has imaginary residue {}", v.im));
        }
        Ok(v.re)
    }

    /// `⟨ψ|⊗_k O_k|ψ⟩` for a product of single-site operators, returned complex.
    pub fn product_expectation(&self, ops: &[(usize, &CMatrix)]) -> Result<C64> {
        let mut tmp = self.clone();
        tmp.apply_product(ops)?;
        Ok(self.amps.iter().zip(&tmp.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Reduced density matrix on `sites` (first listed site most significant).
    pub fn reduced_density_matrix(&self, sites: &[usize]) -> Result<CMatrix> {
        let sub = self.check_sites(sites)?;
        let (offsets, bases) = self.subsystem_layout(sites);
        let mut rho = CMatrix::zeros(sub, sub);
        for &b in &bases {
            for (i, &oi) in offsets.iter().enumerate() {
                let ai = self.amps[b + oi];
                if ai.norm_sqr() == 0.0 {
                    continue;
                }
                for (j, &oj) in offsets.iter().enumerate() {
                    rho[(i, j)] += ai * self.amps[b + oj].conj();
                }
            }
        }
        Ok(rho)
    }

    pub fn renormalize(&mut self) -> Result<f64> {
        let n = self.norm();
        if n == 0.0 {
            return Err(SimError::DegenerateProjection("zero vector".into()));
        }
        self.amps.iter_mut().for_each(|a| *a /= n);
        Ok(n)
    }

    /// Shot estimate `(mean, standard error)` of a Hermitian `op` on `sites`,
    /// measured projectively in its eigenbasis.
    pub fn sample_observable(&self, sites: &[usize], op: &CMatrix, shots: usize, rng: &mut RngStream) -> Result<(f64, f64)> {
        if shots == 0 {
            return invalid("shots must be positive");
        }
        let rho = self.reduced_density_matrix(sites)?;
        if op.nrows() != rho.nrows() || op.ncols() != rho.ncols() {
            return invalid("operator dimension does not match the sites");
        }
        let (vals, vecs) = eigh(op);
        let mut cdf = Vec::with_capacity(vals.len());
        let mut acc = 0.0;
        for k in 0..vals.len() {
            let v = vecs.column(k);
            acc += (v.adjoint() * &rho * v)[(0, 0)].re.max(0.0);
            cdf.push(acc);
        }
        let m: Moments = (0..shots).map(|_| vals[rng.sample_cdf(&cdf)]).collect();
        Ok((m.mean(), m.std_error()))
    }

    /// Draw `shots` full-register computational basis samples.
    pub fn sample(&self, shots: usize, rng: &mut RngStream) -> Vec<usize> {
        let mut cdf = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        for a in &self.amps {
            acc += a.norm_sqr();
            cdf.push(acc);
        }
        (0..shots).map(|_| rng.sample_cdf(&cdf)).collect()
    }
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|s| format!("q{s}")).collect()
}

// Free-function forms: immutable input, fresh output.

pub fn init_product_state(dims: &[usize], levels: &[usize]) -> Result<QuditRegister> {
    QuditRegister::product_state(dims, levels)
}

pub fn apply_two_level_rotation(state: &QuditRegister, pair: LevelPair, theta: f64, phi: f64) -> Result<QuditRegister> {
    let mut out = state.clone();
    out.rotate(pair, theta, phi)?;
    Ok(out)
}

pub fn apply_phase_rotation(state: &QuditRegister, pair: LevelPair, theta: f64) -> Result<QuditRegister> {
    let mut out = state.clone();
    out.rotate_z(pair, theta)?;
    Ok(out)
}

pub fn apply_ms_gate(state: &QuditRegister, pair_a: LevelPair, pair_b: LevelPair, theta: f64, phi: f64) -> Result<QuditRegister> {
    let mut out = state.clone();
    out.ms(pair_a, pair_b, theta, phi)?;
    Ok(out)
}

pub fn measure_site(state: &QuditRegister, site: usize, rng: &mut RngStream) -> Result<(usize, QuditRegister)> {
    let mut out = state.clone();
    let k = out.measure(site, rng)?;
    Ok((k, out))
}

pub fn expectation(state: &QuditRegister, sites: &[usize], op: &CMatrix) -> Result<f64> {
    state.expectation(sites, op)
}

pub fn apply_depolarizing(state: &QuditRegister, sites: &[usize], p: f64, rng: &mut RngStream) -> Result<QuditRegister> {
    let mut out = state.clone();
    out.depolarize(sites, p, rng)?;
    Ok(out)
}
