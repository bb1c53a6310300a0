//! Dense reference constructions built directly from matrix entries, used as
//! oracles against the library's structured routines.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type M = DMatrix<Complex64>;

pub fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `(S^a)_{cb} = i ε_{abc}` written out entry by entry.
pub fn spin(a: usize) -> M {
    let mut m = M::zeros(3, 3);
    let (b, c) = ((a + 1) % 3, (a + 2) % 3);
    m[(c, b)] = cx(0.0, 1.0);
    m[(b, c)] = cx(0.0, -1.0);
    m
}

pub fn kron_list(ops: &[M]) -> M {
    ops.iter().skip(1).fold(ops[0].clone(), |acc, o| acc.kronecker(o))
}

pub fn id(d: usize) -> M {
    M::identity(d, d)
}

/// `op` on `site` of an `n`-site chain of dimension `d`, identity elsewhere.
pub fn embed(op: &M, site: usize, n: usize, d: usize) -> M {
    let ops: Vec<M> = (0..n).map(|k| if k == site { op.clone() } else { id(d) }).collect();
    kron_list(&ops)
}

pub fn pauli(k: usize) -> M {
    match k {
        0 => M::from_row_slice(2, 2, &[cx(0.0, 0.0), cx(1.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0)]),
        1 => M::from_row_slice(2, 2, &[cx(0.0, 0.0), cx(0.0, -1.0), cx(0.0, 1.0), cx(0.0, 0.0)]),
        _ => M::from_row_slice(2, 2, &[cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(-1.0, 0.0)]),
    }
}

/// Open-chain AKLT amplitudes `l† σ^{s1} ⋯ σ^{sN} r`, normalized.
pub fn aklt_oracle(n: usize, l: [f64; 2], r: [f64; 2]) -> Vec<Complex64> {
    let sig = [pauli(0), pauli(1), pauli(2)];
    let total = 3usize.pow(n as u32);
    let lv = nalgebra::DVector::from_vec(vec![cx(l[0], 0.0), cx(l[1], 0.0)]);
    let rv = nalgebra::DVector::from_vec(vec![cx(r[0], 0.0), cx(r[1], 0.0)]);
    let mut amps: Vec<Complex64> = (0..total)
        .map(|idx| {
            let mut m = id(2);
            let mut rest = idx;
            let mut digits = vec![0; n];
            for k in (0..n).rev() {
                digits[k] = rest % 3;
                rest /= 3;
            }
            for &s in &digits {
                m *= &sig[s];
            }
            (lv.adjoint() * m * &rv)[(0, 0)]
        })
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    amps
}

pub fn expect(op: &M, psi: &[Complex64]) -> Complex64 {
    let v = nalgebra::DVector::from_column_slice(psi);
    (v.adjoint() * op * &v)[(0, 0)]
}

/// Dense `Σ_j P(S_j·S_{j+1})` from `½ S·S + ⅙ (S·S)² + ⅓` on each bond.
pub fn aklt_dense(n: usize) -> M {
    let mut ss = M::zeros(9, 9);
    for a in 0..3 {
        ss += spin(a).kronecker(&spin(a));
    }
    let bond = &ss * cx(0.5, 0.0) + &ss * &ss * cx(1.0 / 6.0, 0.0) + id(9) * cx(1.0 / 3.0, 0.0);
    let d = 3usize.pow(n as u32);
    let mut h = M::zeros(d, d);
    for j in 0..n - 1 {
        h += id(3usize.pow(j as u32)).kronecker(&bond).kronecker(&id(3usize.pow((n - j - 2) as u32)));
    }
    h
}

/// `⟨S^a_1 Π_k e^{iπ S^a_k} S^a_N⟩` with the exponential taken by eigendecomposition.
pub fn string_oracle(psi: &[Complex64], n: usize, a: usize) -> f64 {
    let s = spin(a);
    let eig = nalgebra::SymmetricEigen::new(s.clone());
    let phase = M::from_diagonal(&nalgebra::DVector::from_iterator(
        3,
        eig.eigenvalues.iter().map(|&l| Complex64::from_polar(1.0, std::f64::consts::PI * l)),
    ));
    let flip = &eig.eigenvectors * phase * eig.eigenvectors.adjoint();
    let mut ops = vec![s.clone()];
    ops.extend((1..n - 1).map(|_| flip.clone()));
    ops.push(s);
    expect(&kron_list(&ops), psi).re
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn overlap(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>().norm()
}
