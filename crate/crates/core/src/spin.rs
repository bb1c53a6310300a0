//! Spin-1 operators in the symmetric basis `{|x⟩, |y⟩, |z⟩}` (levels 0, 1, 2),
//! where `S̃^a |b⟩ = i ε_{abc} |c⟩`.

use crate::linalg::{c, kron, CMatrix, C64};

pub const X: usize = 0;
pub const Y: usize = 1;
pub const Z: usize = 2;
pub const AXIS_NAMES: [char; 3] = ['x', 'y', 'z'];

/// Levi-Civita symbol on `{0, 1, 2}`.
pub fn levi_civita(a: usize, b: usize, c: usize) -> f64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpinOps {
    pub sx: CMatrix,
    pub sy: CMatrix,
    pub sz: CMatrix,
}

impl SpinOps {
    pub fn new() -> Self {
        let m = |a: usize| CMatrix::from_fn(3, 3, |row, col| c(0.0, levi_civita(a, col, row)));
        Self { sx: m(X), sy: m(Y), sz: m(Z) }
    }

    pub fn axis(&self, a: usize) -> &CMatrix {
        match a {
            X => &self.sx,
            Y => &self.sy,
            Z => &self.sz,
            _ => panic!("spin axis {a} out of range"),
        }
    }

    pub fn all(&self) -> [&CMatrix; 3] {
        [&self.sx, &self.sy, &self.sz]
    }

    /// `S̃_1 · S̃_2` on two qutrits.
    pub fn heisenberg(&self) -> CMatrix {
        let mut h = CMatrix::zeros(9, 9);
        for s in self.all() {
            h += kron(s, s);
        }
        h
    }

    /// `½ S·S + ⅙ (S·S)² + ⅓`: projector onto total spin 2 of a bond.
    pub fn bond_projector(&self) -> CMatrix {
        let ss = self.heisenberg();
        let sq = &ss * &ss;
        ss * c(0.5, 0.0) + sq * c(1.0 / 6.0, 0.0) + CMatrix::identity(9, 9) * c(1.0 / 3.0, 0.0)
    }
}

impl Default for SpinOps {
    fn default() -> Self {
        Self::new()
    }
}

/// Basis vector of a single qutrit.
pub fn ket(level: usize) -> [C64; 3] {
    let mut v = [C64::new(0.0, 0.0); 3];
    v[level] = c(1.0, 0.0);
    v
}

pub fn level_of(label: char) -> Option<usize> {
    AXIS_NAMES.iter().position(|&l| l == label)
}
