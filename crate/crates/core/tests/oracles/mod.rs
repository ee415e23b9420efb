//! Reference implementations written without the library's index tables,
//! used as test oracles.
#![allow(dead_code)]

use concurrence::random::{complex_gaussian, SeededRng};
use concurrence::C64;
use nalgebra::DMatrix;

/// Digits of `index`, leftmost subsystem most significant.
pub fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    out
}

fn flat(ds: &[usize], dims: &[usize]) -> usize {
    ds.iter().zip(dims).fold(0, |acc, (d, n)| acc * n + d)
}

/// Direct summation over every pair of full indices that agree on the
/// traced subsystems.
pub fn brute_partial_trace(m: &DMatrix<C64>, dims: &[usize], keep: &[usize]) -> DMatrix<C64> {
    let kd: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let kn: usize = kd.iter().product();
    let n = m.nrows();
    let mut out = DMatrix::from_element(kn, kn, C64::new(0.0, 0.0));
    for i in 0..n {
        let di = digits(i, dims);
        for j in 0..n {
            let dj = digits(j, dims);
            let traced_match = (0..dims.len()).filter(|p| !keep.contains(p)).all(|p| di[p] == dj[p]);
            if traced_match {
                let a: Vec<usize> = keep.iter().map(|&k| di[k]).collect();
                let b: Vec<usize> = keep.iter().map(|&k| dj[k]).collect();
                out[(flat(&a, &kd), flat(&b, &kd))] += m[(i, j)];
            }
        }
    }
    out
}

/// `G G† / Tr(G G†)` for an `n × rank` complex Gaussian `G`.
pub fn gaussian_density(rng: &mut SeededRng, n: usize, rank: usize) -> DMatrix<C64> {
    let g = DMatrix::from_fn(n, rank, |_, _| complex_gaussian(rng));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    m / C64::new(tr, 0.0)
}

/// Every ordered tuple of local dimensions ≥ 2 with product at most `limit`.
pub fn profiles_up_to(limit: usize) -> Vec<Vec<usize>> {
    fn grow(prefix: &mut Vec<usize>, prod: usize, limit: usize, out: &mut Vec<Vec<usize>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        for d in 2..=limit / prod {
            prefix.push(d);
            grow(prefix, prod * d, limit, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::new(), 1, limit, &mut out);
    out
}

/// Every nonempty subset of `0..n` in increasing order.
pub fn subsets(n: usize) -> Vec<Vec<usize>> {
    (1..1usize << n).map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect()).collect()
}

fn hermitian_sqrt(m: &DMatrix<C64>) -> DMatrix<C64> {
    let eig = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut out = DMatrix::from_element(n, n, C64::new(0.0, 0.0));
    for k in 0..n {
        let v = eig.eigenvectors.column(k);
        out += (v * v.adjoint()) * C64::new(eig.eigenvalues[k].max(0.0).sqrt(), 0.0);
    }
    out
}

/// The `λᵢ` of a two-qubit state as the eigenvalues of
/// `√(√ρ ρ̃ √ρ)`, descending.
pub fn two_qubit_lambdas(rho: &DMatrix<C64>) -> Vec<f64> {
    let mut yy = DMatrix::from_element(4, 4, C64::new(0.0, 0.0));
    for (i, j, v) in [(0, 3, -1.0), (1, 2, 1.0), (2, 1, 1.0), (3, 0, -1.0)] {
        yy[(i, j)] = C64::new(v, 0.0);
    }
    let tilde = &yy * rho.conjugate() * &yy;
    let s = hermitian_sqrt(rho);
    let r = &s * tilde * &s;
    let r = (&r + r.adjoint()) * C64::new(0.5, 0.0);
    let mut l: Vec<f64> = r.symmetric_eigen().eigenvalues.iter().map(|v| v.max(0.0).sqrt()).collect();
    l.sort_by(|a, b| b.total_cmp(a));
    l
}

/// Two-qubit concurrence `max{0, λ₁ − λ₂ − λ₃ − λ₄}`.
pub fn wootters(rho: &DMatrix<C64>) -> f64 {
    let l = two_qubit_lambdas(rho);
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

/// Two-qubit concurrence of assistance `Σ λᵢ`.
pub fn two_qubit_assistance(rho: &DMatrix<C64>) -> f64 {
    two_qubit_lambdas(rho).iter().sum()
}

pub fn purity(m: &DMatrix<C64>) -> f64 {
    (m * m).trace().re
}

/// `√(2(1 − Tr ρ_A²))` from an explicit amplitude vector.
pub fn pure_concurrence(amps: &[C64], dims: &[usize], side_a: &[usize]) -> f64 {
    let v = DMatrix::from_column_slice(amps.len(), 1, amps);
    let rho = &v * v.adjoint();
    let ra = brute_partial_trace(&rho, dims, side_a);
    (2.0 * (1.0 - purity(&ra))).max(0.0).sqrt()
}

pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
