//! Concurrence-family measures.
//!
//! Pure-state concurrence across a cut is `√(2(1 − Tr ρ_A²))`. Mixed states
//! are handled by optimizing over ensemble decompositions in [`roof`]; the
//! two-qubit closed form is exposed separately and never substituted
//! silently for the optimizer.

mod roof;

pub use roof::{
    concurrence_assistance, convex_roof_concurrence, convex_roof_four_partite,
    decompose_from_isometry, Direction, Ensemble, OptimizerOptions, RoofEstimate,
};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::tensor::{self, CutTable, DensityMatrix, Partition, PureState, C64, ZERO};
use crate::tolerance::Tolerances;

/// Largest concurrence possible when the smaller side has dimension `d`.
pub fn max_concurrence(d: usize) -> f64 {
    (2.0 * (d as f64 - 1.0) / d as f64).sqrt()
}

pub(crate) fn clamp_concurrence(value: f64, small_dim: usize, tol: &Tolerances) -> f64 {
    let hi = max_concurrence(small_dim);
    let clamped = value.clamp(0.0, hi);
    if (clamped - value).abs() > tol.clamp_report {
        log::warn!("concurrence {value:e} clamped to {clamped:e} (range [0, {hi}])");
    }
    clamped
}

/// Concurrence from a side purity, assuming `Tr ρ = 1`.
fn from_purity(p: f64) -> f64 {
    (2.0 * (1.0 - p)).max(0.0).sqrt()
}

/// `√(2(1 − Tr ρ_A²))` for a pure state; `cut` must cover every subsystem.
pub fn concurrence_pure(psi: &PureState, cut: &Partition) -> Result<f64> {
    let parties = psi.profile().parties();
    cut.check_for(parties)?;
    if !cut.covers(parties) {
        return Err(Error::Partition(format!(
            "cut {cut} does not cover all {parties} subsystems of a pure state"
        )));
    }
    let table = CutTable::new(psi.profile(), cut);
    let p = table.side_purity(psi.amplitudes());
    Ok(clamp_concurrence(from_purity(p), table.small_dim, &Tolerances::default()))
}

/// Wootters' closed form for a `2⊗2` density matrix: `max{0, λ₁−λ₂−λ₃−λ₄}`
/// with `λᵢ` the descending square roots of the eigenvalues of `ρ ρ̃`.
pub fn concurrence_two_qubit(rho: &DensityMatrix) -> Result<f64> {
    let lambdas = two_qubit_lambdas(rho)?;
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(clamp_concurrence(c.max(0.0), 2, &Tolerances::default()))
}

/// The four `λᵢ` in descending order. With `ρ = W W†` and
/// `τ = Wᵀ (σ_y⊗σ_y) W`, the eigenvalues of `ρ ρ̃` are the squared singular
/// values of `τ`, so the `λᵢ` are obtained without taking square roots of
/// tiny eigenvalues.
pub(crate) fn two_qubit_lambdas(rho: &DensityMatrix) -> Result<[f64; 4]> {
    if rho.profile().dims() != [2, 2] {
        return Err(Error::Dimension(format!(
            "two-qubit concurrence needs a 2⊗2 state, got {}",
            rho.profile()
        )));
    }
    let eig = tensor::hermitian_eig(rho.matrix())?;
    let w = DMatrix::from_fn(4, 4, |i, j| eig.vectors[(i, j)] * eig.values[j].max(0.0).sqrt());
    // σ_y ⊗ σ_y in the computational basis.
    let mut yy = DMatrix::<C64>::zeros(4, 4);
    yy[(0, 3)] = C64::new(-1.0, 0.0);
    yy[(1, 2)] = C64::new(1.0, 0.0);
    yy[(2, 1)] = C64::new(1.0, 0.0);
    yy[(3, 0)] = C64::new(-1.0, 0.0);
    let tau = w.transpose() * yy * &w;
    let mut sv: Vec<f64> = tau.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok([sv[0], sv[1], sv[2], sv[3]])
}

/// Whether the partial transpose of `rho` on side A of `cut` is positive
/// semidefinite. On `2⊗2` and `2⊗3` this is equivalent to separability, and
/// then the convex-roof concurrence is exactly zero.
pub fn is_ppt(rho: &DensityMatrix, cut: &Partition, tol: &Tolerances) -> Result<bool> {
    let (rho, cut) = restrict_to_cut(rho, cut)?;
    let pt = tensor::partial_transpose(&rho, cut.side_a())?;
    let eig = tensor::hermitian_eig_with(&pt, tol.hermiticity)?;
    Ok(eig.values.last().is_none_or(|&v| v >= -tol.psd))
}

/// Whether PPT decides separability across `cut` (total dimension of the
/// cut's support at most 6).
pub fn ppt_is_decisive(profile: &tensor::DimProfile, cut: &Partition) -> bool {
    let side = |s: &[usize]| s.iter().map(|&p| profile.dims()[p]).product::<usize>();
    let (a, b) = (side(cut.side_a()), side(cut.side_b()));
    a * b <= 6
}

/// Reduces `rho` to the support of `cut` when the cut leaves subsystems out.
pub(crate) fn restrict_to_cut(rho: &DensityMatrix, cut: &Partition) -> Result<(DensityMatrix, Partition)> {
    let parties = rho.profile().parties();
    cut.check_for(parties)?;
    if cut.covers(parties) {
        Ok((rho.clone(), cut.clone()))
    } else {
        let reduced = tensor::partial_trace(rho, &cut.support())?;
        Ok((reduced, cut.relabeled_onto_support()))
    }
}

/// `min{√(2(1 − Tr ρ_A²)), √(2(1 − Tr ρ_B²))}`, an upper bound on the
/// concurrence of assistance of `ρ_AB` for the two sides of `cut`.
pub fn coa_upper_bound(rho: &DensityMatrix, cut: &Partition) -> Result<f64> {
    cut.check_for(rho.profile().parties())?;
    let ra = tensor::partial_trace(rho, cut.side_a())?;
    let rb = tensor::partial_trace(rho, cut.side_b())?;
    let ca = from_purity(tensor::purity(&ra));
    let cb = from_purity(tensor::purity(&rb));
    let small = ra.profile().total().min(rb.profile().total());
    Ok(clamp_concurrence(ca.min(cb), small, &Tolerances::default()))
}

/// The seven bipartitions of four parties: four `1|3` cuts, then the three
/// `2|2` cuts with party 0 on side A.
pub fn four_partite_cuts() -> [Partition; 7] {
    let p = |a: &[usize], b: &[usize]| Partition::new(a.to_vec(), b.to_vec()).expect("static cut");
    [
        p(&[0], &[1, 2, 3]),
        p(&[1], &[0, 2, 3]),
        p(&[2], &[0, 1, 3]),
        p(&[3], &[0, 1, 2]),
        p(&[0, 1], &[2, 3]),
        p(&[0, 2], &[1, 3]),
        p(&[0, 3], &[1, 2]),
    ]
}

/// `√(¼ Σ C²)` over the seven bipartitions of a four-party pure state.
pub fn concurrence_4partite_pure(psi: &PureState) -> Result<f64> {
    if psi.profile().parties() != 4 {
        return Err(Error::Dimension(format!(
            "four-partite concurrence needs 4 subsystems, got {}",
            psi.profile().parties()
        )));
    }
    let mut sum = 0.0;
    for cut in four_partite_cuts() {
        let c = concurrence_pure(psi, &cut)?;
        sum += c * c;
    }
    let hi = four_partite_max(psi.profile());
    Ok(((0.25 * sum).sqrt()).clamp(0.0, hi))
}

pub(crate) fn four_partite_max(profile: &tensor::DimProfile) -> f64 {
    let sum: f64 = four_partite_cuts()
        .iter()
        .map(|cut| {
            let da: usize = cut.side_a().iter().map(|&p| profile.dims()[p]).product();
            let db: usize = cut.side_b().iter().map(|&p| profile.dims()[p]).product();
            max_concurrence(da.min(db)).powi(2)
        })
        .sum();
    (0.25 * sum).sqrt()
}

/// Builds `Σ pᵢ|ψᵢ⟩⟨ψᵢ|`.
pub(crate) fn ensemble_matrix<'a, I>(members: I, n: usize) -> DMatrix<C64>
where
    I: IntoIterator<Item = (f64, &'a [C64])>,
{
    let mut m = DMatrix::from_element(n, n, ZERO);
    for (p, psi) in members {
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] += psi[i] * psi[j].conj() * p;
            }
        }
    }
    m
}
