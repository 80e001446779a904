use nalgebra::DMatrix;
use num_complex::Complex64;

use super::FockBasisSpec;
use crate::error::Result;
use crate::model::CouplingConfig;

/// Hermitian matrix in compressed-row form.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseHamiltonian {
    dimension: usize,
    row_start: Vec<usize>,
    columns: Vec<usize>,
    values: Vec<Complex64>,
}

/// `G_o (c_o b + b† c_o†) + G_w (c_w b† + b c_w†)` with truncated ladder
/// operators (`a|n⟩ = √n |n−1⟩`, `a†|n⟩ = √(n+1) |n+1⟩` below the cutoff).
pub fn build_hamiltonian(cfg: &CouplingConfig, basis: &FockBasisSpec) -> Result<SparseHamiltonian> {
    let go = cfg.optical_coupling();
    let gw = cfg.microwave_coupling();
    let top = basis.cutoff();
    let sqrt = |n: usize| (n as f64).sqrt();

    let mut row_start = Vec::with_capacity(basis.dimension() + 1);
    let mut columns = Vec::new();
    let mut values = Vec::new();
    let mut row: Vec<(usize, f64)> = Vec::with_capacity(4);

    row_start.push(0);
    for i in 0..basis.dimension() {
        let (o, w, m) = basis.occupations(i);
        row.clear();
        // ⟨i| H |j⟩ for each j that H maps onto |i⟩.
        if o < top && m < top && go != 0.0 {
            // c_o b |o+1, w, m+1⟩
            row.push((basis.index(o + 1, w, m + 1), go * sqrt(o + 1) * sqrt(m + 1)));
        }
        if o > 0 && m > 0 && go != 0.0 {
            // b† c_o† |o−1, w, m−1⟩
            row.push((basis.index(o - 1, w, m - 1), go * sqrt(o) * sqrt(m)));
        }
        if w < top && m > 0 {
            // c_w b† |o, w+1, m−1⟩
            row.push((basis.index(o, w + 1, m - 1), gw * sqrt(w + 1) * sqrt(m)));
        }
        if w > 0 && m < top {
            // b c_w† |o, w−1, m+1⟩
            row.push((basis.index(o, w - 1, m + 1), gw * sqrt(w) * sqrt(m + 1)));
        }
        row.sort_by_key(|&(j, _)| j);
        for &(j, v) in &row {
            columns.push(j);
            values.push(Complex64::new(v, 0.0));
        }
        row_start.push(columns.len());
    }
    Ok(SparseHamiltonian { dimension: basis.dimension(), row_start, columns, values })
}

impl SparseHamiltonian {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn nonzeros(&self) -> usize {
        self.values.len()
    }

    fn row(&self, i: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let span = self.row_start[i]..self.row_start[i + 1];
        self.columns[span.clone()].iter().copied().zip(self.values[span].iter().copied())
    }

    /// `out = H x`.
    pub fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.row(i).map(|(j, v)| v * x[j]).sum();
        }
    }

    /// Real part of `⟨x|H|x⟩`.
    pub fn expectation(&self, x: &[Complex64]) -> f64 {
        (0..self.dimension).map(|i| (x[i].conj() * self.row(i).map(|(j, v)| v * x[j]).sum::<Complex64>()).re).sum()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        SparseHamiltonian { values: self.values.iter().map(|v| v * factor).collect(), ..self.clone() }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dimension, self.dimension);
        for i in 0..self.dimension {
            for (j, v) in self.row(i) {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// Largest `|H_ij − conj(H_ji)|` over stored entries.
    pub fn hermiticity_defect(&self) -> f64 {
        let lookup = |i: usize, j: usize| {
            self.row(i).find(|&(c, _)| c == j).map(|(_, v)| v).unwrap_or_default()
        };
        (0..self.dimension)
            .flat_map(|i| self.row(i).map(move |(j, v)| (i, j, v)))
            .map(|(i, j, v)| (v - lookup(j, i).conj()).norm())
            .fold(0.0, f64::max)
    }
}
