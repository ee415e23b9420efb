//! Optimization over ensemble decompositions.
//!
//! Every decomposition of `ρ = Σᵢ λᵢ|eᵢ⟩⟨eᵢ|` (support only) into `k`
//! unnormalized members has the form `|φ_j⟩ = Σᵢ V_ji √λᵢ |eᵢ⟩` for a `k×r`
//! isometry `V`. The search draws Haar isometries for `k` between `r` and
//! `min(r², r + extra)` and refines each draw by Givens rotations on pairs of
//! members with a shrinking angle. A restart only changes two members at a
//! time, so the objective is updated locally.
//!
//! Minimizing yields an upper bound of the convex roof; maximizing yields a
//! lower bound of the concurrence of assistance. Restart `i` draws from
//! stream `i` of the caller's seed, so restarts are independent, can run in
//! parallel, and adding restarts never worsens the result.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ensemble_matrix, four_partite_cuts, four_partite_max, restrict_to_cut};
use crate::error::{Error, Result};
use crate::random::{haar_isometry, seeded_rng};
use crate::tensor::{hermitian_eig_with, CutTable, DensityMatrix, Partition, PureState, C64, ZERO};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerOptions {
    pub seed: u64,
    /// `None` picks 64 restarts for totals ≤ 16 and 256 above.
    pub restarts: Option<usize>,
    /// Largest member count tried is `min(r², r + extra_members)`.
    pub extra_members: usize,
    /// Restarts without improvement needed to call the search converged;
    /// `None` means a quarter of the restarts.
    pub patience: Option<usize>,
    pub initial_step: f64,
    pub min_step: f64,
    /// A sweep gaining less than this halves the rotation angle.
    pub improvement_tol: f64,
    pub max_sweeps: usize,
    pub tolerances: Tolerances,
}

impl OptimizerOptions {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            restarts: None,
            extra_members: 2,
            patience: None,
            initial_step: std::f64::consts::FRAC_PI_4,
            min_step: 1e-6,
            improvement_tol: 1e-8,
            max_sweeps: 20_000,
            tolerances: Tolerances::default(),
        }
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = Some(restarts);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_tolerances(mut self, tolerances: Tolerances) -> Self {
        self.tolerances = tolerances;
        self
    }

    pub fn restarts_for(&self, total: usize) -> usize {
        self.restarts.unwrap_or(if total <= 16 { 64 } else { 256 }).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// Minimization: the value is at least the true minimum.
    UpperBoundOfMin,
    /// Maximization: the value is at most the true maximum.
    LowerBoundOfMax,
}

/// Probabilities and pure states realizing a density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    members: Vec<(f64, PureState)>,
    realized: DensityMatrix,
}

impl Ensemble {
    pub fn new(members: Vec<(f64, PureState)>, realized: DensityMatrix, tol: &Tolerances) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Validation("an ensemble needs at least one member".into()));
        }
        if let Some((p, _)) = members.iter().find(|(p, _)| p.is_nan() || *p < 0.0) {
            return Err(Error::Validation(format!("negative probability {p}")));
        }
        if members.iter().any(|(_, s)| s.profile() != realized.profile()) {
            return Err(Error::Dimension("member profile differs from the realized state".into()));
        }
        let sum: f64 = members.iter().map(|(p, _)| p).sum();
        if (sum - 1.0).abs() > tol.trace {
            return Err(Error::Validation(format!("probabilities sum to {sum}")));
        }
        let ens = Self { members, realized };
        let err = ens.realization_error();
        if err > tol.ensemble {
            return Err(Error::Validation(format!(
                "ensemble misses the realized state by {err:e} (tolerance {:e})",
                tol.ensemble
            )));
        }
        Ok(ens)
    }

    pub fn members(&self) -> &[(f64, PureState)] {
        &self.members
    }

    pub fn realized(&self) -> &DensityMatrix {
        &self.realized
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Max elementwise deviation of `Σ pᵢ|ψᵢ⟩⟨ψᵢ|` from the realized matrix.
    pub fn realization_error(&self) -> f64 {
        let n = self.realized.profile().total();
        let m = ensemble_matrix(self.members.iter().map(|(p, s)| (*p, s.amplitudes())), n);
        (m - self.realized.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `Σ pᵢ f(ψᵢ)`.
    pub fn average<F>(&self, mut f: F) -> Result<f64>
    where
        F: FnMut(&PureState) -> Result<f64>,
    {
        self.members.iter().try_fold(0.0, |acc, (p, s)| Ok(acc + p * f(s)?))
    }
}

#[derive(Debug, Clone)]
pub struct RoofEstimate {
    pub value: f64,
    pub direction: Direction,
    pub witness: Ensemble,
    /// Zero when the state has numerical rank one and the value is exact.
    pub restarts_used: usize,
    /// The best value did not change over the final patience window.
    pub converged: bool,
}

impl RoofEstimate {
    pub fn is_exact(&self) -> bool {
        self.restarts_used == 0
    }
}

/// `‖ψ‖²·f(ψ/‖ψ‖)` for a pure-state functional `f`, evaluated on an
/// unnormalized vector.
trait WeightedFunctional: Sync {
    fn weighted(&self, psi: &[C64]) -> f64;
    fn upper(&self) -> f64;
}

struct CutConcurrence {
    table: CutTable,
}

impl WeightedFunctional for CutConcurrence {
    fn weighted(&self, psi: &[C64]) -> f64 {
        let n2: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
        let p = self.table.side_purity(psi);
        (2.0 * (n2 * n2 - p)).max(0.0).sqrt()
    }

    fn upper(&self) -> f64 {
        super::max_concurrence(self.table.small_dim)
    }
}

struct FourPartiteConcurrence {
    tables: Vec<CutTable>,
    upper: f64,
}

impl WeightedFunctional for FourPartiteConcurrence {
    fn weighted(&self, psi: &[C64]) -> f64 {
        let n2: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
        let sum: f64 = self
            .tables
            .iter()
            .map(|t| 2.0 * (n2 * n2 - t.side_purity(psi)))
            .sum();
        (0.25 * sum).max(0.0).sqrt()
    }

    fn upper(&self) -> f64 {
        self.upper
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Sense {
    Min,
    Max,
}

impl Sense {
    fn sign(self) -> f64 {
        match self {
            Sense::Min => 1.0,
            Sense::Max => -1.0,
        }
    }

    fn direction(self) -> Direction {
        match self {
            Sense::Min => Direction::UpperBoundOfMin,
            Sense::Max => Direction::LowerBoundOfMax,
        }
    }
}

/// Upper bound on `C(ρ) = min Σ pᵢ C(ψᵢ)` across `cut`. A cut that leaves
/// subsystems out is evaluated on the reduced state of its support, and the
/// witness then realizes that reduced state.
pub fn convex_roof_concurrence(rho: &DensityMatrix, cut: &Partition, opts: &OptimizerOptions) -> Result<RoofEstimate> {
    let (rho, cut) = restrict_to_cut(rho, cut)?;
    let f = CutConcurrence { table: CutTable::new(rho.profile(), &cut) };
    optimize(&rho, &f, Sense::Min, opts)
}

/// Lower bound on `C_a(ρ) = max Σ pᵢ C(ψᵢ)` across `cut`.
pub fn concurrence_assistance(rho: &DensityMatrix, cut: &Partition, opts: &OptimizerOptions) -> Result<RoofEstimate> {
    let (rho, cut) = restrict_to_cut(rho, cut)?;
    let f = CutConcurrence { table: CutTable::new(rho.profile(), &cut) };
    optimize(&rho, &f, Sense::Max, opts)
}

/// Upper bound on the convex roof of the seven-bipartition four-partite
/// concurrence.
pub fn convex_roof_four_partite(rho: &DensityMatrix, opts: &OptimizerOptions) -> Result<RoofEstimate> {
    if rho.profile().parties() != 4 {
        return Err(Error::Dimension(format!(
            "four-partite concurrence needs 4 subsystems, got {}",
            rho.profile().parties()
        )));
    }
    let f = FourPartiteConcurrence {
        tables: four_partite_cuts().iter().map(|c| CutTable::new(rho.profile(), c)).collect(),
        upper: four_partite_max(rho.profile()),
    };
    optimize(rho, &f, Sense::Min, opts)
}

type Rows = Vec<Vec<C64>>;

/// Support of `rho`: rows are `√λᵢ eᵢ` for eigenvalues above the cutoff.
fn support_rows(rho: &DensityMatrix, tol: &Tolerances) -> Result<(Rows, Rows)> {
    let eig = hermitian_eig_with(rho.matrix(), tol.hermiticity)?;
    let n = rho.profile().total();
    let mut scaled = Vec::new();
    let mut unit = Vec::new();
    for (i, &lam) in eig.values.iter().enumerate() {
        if lam > tol.rank_cutoff {
            let col: Vec<C64> = (0..n).map(|r| eig.vectors[(r, i)]).collect();
            scaled.push(col.iter().map(|z| z * lam.sqrt()).collect());
            unit.push(col);
        }
    }
    if scaled.is_empty() {
        return Err(Error::Validation("density matrix has empty numerical support".into()));
    }
    Ok((scaled, unit))
}

/// `rows_out[j] = Σᵢ mixing[j,i]·support[i]`.
fn mix_rows(mixing: &DMatrix<C64>, support: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let n = support[0].len();
    (0..mixing.nrows())
        .map(|j| {
            let mut row = vec![ZERO; n];
            for (i, s) in support.iter().enumerate() {
                let m = mixing[(j, i)];
                for (o, v) in row.iter_mut().zip(s) {
                    *o += m * v;
                }
            }
            row
        })
        .collect()
}

/// Normalizes unnormalized members into an ensemble for `rho`.
fn ensemble_from_rows(rows: &[Vec<C64>], rho: &DensityMatrix, tol: &Tolerances) -> Result<Ensemble> {
    let weights: Vec<f64> = rows.iter().map(|r| r.iter().map(|a| a.norm_sqr()).sum()).collect();
    let total: f64 = weights.iter().sum();
    let mut members = Vec::with_capacity(rows.len());
    for (row, &w) in rows.iter().zip(&weights) {
        if w <= 0.0 {
            continue;
        }
        let state = PureState::normalized(row.clone(), rho.profile().clone())?;
        members.push((w / total, state));
    }
    Ensemble::new(members, rho.clone(), tol)
}

/// The ensemble `|φ_j⟩ ∝ Σᵢ mixing[j,i]·√λᵢ|eᵢ⟩` over the numerical support
/// of `rho`. `mixing` must be a `k×r` isometry with `r` the numerical rank.
pub fn decompose_from_isometry(rho: &DensityMatrix, mixing: &DMatrix<C64>) -> Result<Ensemble> {
    let tol = Tolerances::default();
    let (support, _) = support_rows(rho, &tol)?;
    let r = support.len();
    if mixing.ncols() != r || mixing.nrows() < r {
        return Err(Error::Dimension(format!(
            "mixing is {}×{} but the state has rank {r}",
            mixing.nrows(),
            mixing.ncols()
        )));
    }
    let gram = mixing.adjoint() * mixing;
    let dev = (0..r)
        .flat_map(|i| (0..r).map(move |j| (i, j)))
        .map(|(i, j)| (gram[(i, j)] - if i == j { C64::new(1.0, 0.0) } else { ZERO }).norm())
        .fold(0.0, f64::max);
    if dev > tol.isometry {
        return Err(Error::Validation(format!(
            "mixing is not an isometry: ‖M†M − I‖_max = {dev:e}"
        )));
    }
    ensemble_from_rows(&mix_rows(mixing, &support), rho, &tol)
}

fn optimize<F: WeightedFunctional>(
    rho: &DensityMatrix,
    f: &F,
    sense: Sense,
    opts: &OptimizerOptions,
) -> Result<RoofEstimate> {
    let tol = &opts.tolerances;
    let (support, unit) = support_rows(rho, tol)?;
    let r = support.len();

    if r == 1 {
        let psi = PureState::normalized(unit[0].clone(), rho.profile().clone())?;
        let value = f.weighted(psi.amplitudes()).clamp(0.0, f.upper());
        let witness = Ensemble::new(vec![(1.0, psi)], rho.clone(), tol)?;
        return Ok(RoofEstimate { value, direction: sense.direction(), witness, restarts_used: 0, converged: true });
    }

    let restarts = opts.restarts_for(rho.profile().total());
    let k_max = (r * r).min(r + opts.extra_members);
    let span = k_max - r + 1;

    let runs: Vec<(f64, Vec<Vec<C64>>)> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeded_rng(opts.seed, i as u64);
            let k = r + i % span;
            let v = haar_isometry(&mut rng, k, r);
            let mut rows = mix_rows(&v, &support);
            let value = refine(&mut rows, f, sense, opts);
            (value, rows)
        })
        .collect();

    let better = |a: f64, b: f64| match sense {
        Sense::Min => a < b,
        Sense::Max => a > b,
    };
    let mut best = 0;
    let mut last_improvement = 0;
    for (i, (value, _)) in runs.iter().enumerate().skip(1) {
        if better(*value, runs[best].0) {
            best = i;
            last_improvement = i;
        }
    }
    let patience = opts.patience.unwrap_or(restarts / 4).max(1);
    let converged = restarts - 1 - last_improvement >= patience;

    let witness = ensemble_from_rows(&runs[best].1, rho, tol)?;
    let raw = witness.average(|s| Ok(f.weighted(s.amplitudes())))?;
    let value = match f.upper() {
        hi if hi.is_finite() => clamp_value(raw, hi, tol),
        _ => raw.max(0.0),
    };
    Ok(RoofEstimate { value, direction: sense.direction(), witness, restarts_used: restarts, converged })
}

fn clamp_value(raw: f64, hi: f64, tol: &Tolerances) -> f64 {
    let v = raw.clamp(0.0, hi);
    if (v - raw).abs() > tol.clamp_report {
        log::warn!("roof value {raw:e} clamped to {v:e}");
    }
    v
}

/// Pattern search over Givens rotations of member pairs. Returns the summed
/// weighted functional of the final members.
fn refine<F: WeightedFunctional>(rows: &mut [Vec<C64>], f: &F, sense: Sense, opts: &OptimizerOptions) -> f64 {
    let k = rows.len();
    let mut contrib: Vec<f64> = rows.iter().map(|r| f.weighted(r)).collect();
    if k < 2 {
        return contrib.iter().sum();
    }
    let sign = sense.sign();
    let n = rows[0].len();
    let mut new_a = vec![ZERO; n];
    let mut new_b = vec![ZERO; n];
    let mut step = opts.initial_step;
    let mut sweeps = 0;

    while step >= opts.min_step && sweeps < opts.max_sweeps {
        sweeps += 1;
        let mut gain = 0.0;
        for a in 0..k {
            for b in a + 1..k {
                for (theta, imaginary) in [(step, false), (-step, false), (step, true), (-step, true)] {
                    let (s, c) = theta.sin_cos();
                    let mut improved = false;
                    // Repeat an accepted rotation while it keeps paying off.
                    for _ in 0..64 {
                        rotate(&rows[a], &rows[b], c, s, imaginary, &mut new_a, &mut new_b);
                        let fa = f.weighted(&new_a);
                        let fb = f.weighted(&new_b);
                        let delta = sign * ((fa + fb) - (contrib[a] + contrib[b]));
                        if delta < -1e-15 {
                            rows[a].copy_from_slice(&new_a);
                            rows[b].copy_from_slice(&new_b);
                            contrib[a] = fa;
                            contrib[b] = fb;
                            gain -= delta;
                            improved = true;
                        } else {
                            break;
                        }
                    }
                    if improved {
                        break;
                    }
                }
            }
        }
        if gain < opts.improvement_tol {
            step *= 0.5;
        }
    }
    contrib.iter().sum()
}

/// Applies `[[c, −s],[s, c]]` (or `[[c, is],[is, c]]`) to the pair of rows.
fn rotate(a: &[C64], b: &[C64], c: f64, s: f64, imaginary: bool, out_a: &mut [C64], out_b: &mut [C64]) {
    if imaginary {
        let is = C64::new(0.0, s);
        for i in 0..a.len() {
            out_a[i] = a[i] * c + b[i] * is;
            out_b[i] = a[i] * is + b[i] * c;
        }
    } else {
        for i in 0..a.len() {
            out_a[i] = a[i] * c - b[i] * s;
            out_b[i] = a[i] * s + b[i] * c;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{concurrence_pure, concurrence_two_qubit};
    use crate::tensor::DimProfile;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn qubit_half() -> DensityMatrix {
        DensityMatrix::maximally_mixed(DimProfile::new(vec![2]).unwrap())
    }

    #[test]
    fn identity_mixing_gives_eigen_ensemble() {
        let mm = DensityMatrix::maximally_mixed(DimProfile::new(vec![2, 2]).unwrap());
        let ens = decompose_from_isometry(&mm, &DMatrix::identity(4, 4)).unwrap();
        assert_eq!(ens.len(), 4);
        for (p, _) in ens.members() {
            assert!((p - 0.25).abs() < 1e-12);
        }
        assert!(ens.realization_error() < 1e-12);
    }

    #[test]
    fn pure_state_single_member() {
        let p = DimProfile::new(vec![2, 2]).unwrap();
        let psi = PureState::normalized(vec![c(1.0), c(0.5), c(0.0), c(-0.3)], p).unwrap();
        let ens = decompose_from_isometry(&psi.density(), &DMatrix::from_element(1, 1, c(1.0))).unwrap();
        assert_eq!(ens.len(), 1);
        let overlap: C64 = ens.members()[0].1.amplitudes().iter().zip(psi.amplitudes()).map(|(a, b)| a.conj() * b).sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hadamard_mixing_of_maximally_mixed_qubit() {
        let rho = qubit_half();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = DMatrix::from_row_slice(2, 2, &[c(s), c(s), c(s), c(-s)]);
        let ens = decompose_from_isometry(&rho, &h).unwrap();
        // Direct substitution: ½|ψ₀⟩⟨ψ₀| + ½|ψ₁⟩⟨ψ₁| = I/2.
        assert!(ens.realization_error() < 1e-14);
        for (p, _) in ens.members() {
            assert!((p - 0.5).abs() < 1e-14);
        }
        let eig = crate::tensor::hermitian_eig(rho.matrix()).unwrap();
        let computational = (eig.vectors.clone() - DMatrix::<C64>::identity(2, 2)).iter().all(|z| z.norm() < 1e-14);
        if computational {
            let plus = [c(s), c(s)];
            let minus = [c(s), c(-s)];
            let fid = |a: &[C64], b: &[C64]| a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C64>().norm();
            assert!((fid(ens.members()[0].1.amplitudes(), &plus) - 1.0).abs() < 1e-14);
            assert!((fid(ens.members()[1].1.amplitudes(), &minus) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn non_isometric_mixing_is_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.1), c(0.0), c(1.0)]);
        assert!(matches!(decompose_from_isometry(&qubit_half(), &m), Err(Error::Validation(_))));
        let wrong_shape = DMatrix::from_element(3, 1, c(0.0));
        assert!(matches!(decompose_from_isometry(&qubit_half(), &wrong_shape), Err(Error::Dimension(_))));
    }

    #[test]
    fn roof_of_pure_state_is_exact() {
        let p = DimProfile::new(vec![2, 3]).unwrap();
        let psi = PureState::normalized(vec![c(1.0), c(0.0), c(0.2), c(0.0), c(0.7), c(0.1)], p).unwrap();
        let cut: Partition = "0|1".parse().unwrap();
        let opts = OptimizerOptions::new(1);
        let exact = concurrence_pure(&psi, &cut).unwrap();
        for est in [
            convex_roof_concurrence(&psi.density(), &cut, &opts).unwrap(),
            concurrence_assistance(&psi.density(), &cut, &opts).unwrap(),
        ] {
            assert!(est.is_exact());
            assert!((est.value - exact).abs() < 1e-9);
        }
    }

    #[test]
    fn roof_matches_two_qubit_closed_form_on_werner_family() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let p = DimProfile::new(vec![2, 2]).unwrap();
        let phi = PureState::new(vec![c(s), c(0.0), c(0.0), c(s)], p.clone()).unwrap().density();
        let cut: Partition = "0|1".parse().unwrap();
        let opts = OptimizerOptions::new(11);
        for t in [0.2, 0.5, 0.8] {
            let rho = DensityMatrix::maximally_mixed(p.clone()).mix(&phi, t).unwrap();
            let est = convex_roof_concurrence(&rho, &cut, &opts).unwrap();
            let exact = concurrence_two_qubit(&rho).unwrap();
            assert!(est.value >= exact - 1e-9);
            assert!(est.value - exact < 5e-3, "t = {t}: {} vs {exact}", est.value);
            assert_eq!(est.direction, Direction::UpperBoundOfMin);
            let recomputed = est.witness.average(|m| concurrence_pure(m, &cut)).unwrap();
            assert!((recomputed - est.value).abs() < 1e-9);
        }
    }

    #[test]
    fn restarts_are_deterministic_and_monotone() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let p = DimProfile::new(vec![2, 2]).unwrap();
        let phi = PureState::new(vec![c(s), c(0.0), c(0.0), c(s)], p.clone()).unwrap().density();
        let rho = DensityMatrix::maximally_mixed(p).mix(&phi, 0.6).unwrap();
        let cut: Partition = "0|1".parse().unwrap();
        let a = convex_roof_concurrence(&rho, &cut, &OptimizerOptions::new(5).with_restarts(8)).unwrap();
        let b = convex_roof_concurrence(&rho, &cut, &OptimizerOptions::new(5).with_restarts(8)).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        let mut prev = f64::INFINITY;
        for n in [1, 2, 4, 8, 16] {
            let v = convex_roof_concurrence(&rho, &cut, &OptimizerOptions::new(5).with_restarts(n)).unwrap().value;
            assert!(v <= prev + 1e-12);
            prev = v;
        }
    }
}
