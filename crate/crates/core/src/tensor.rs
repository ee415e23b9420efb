//! Dense complex linear algebra over multipartite index structures.
//!
//! Amplitude index `i` of a state on `m₁⊗m₂⊗…⊗m_N` encodes the subsystem
//! digits in big-endian mixed radix: the leftmost subsystem is the most
//! significant digit, so `|i₁i₂…i_N⟩` reads left to right.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

pub type C64 = nalgebra::Complex<f64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Local dimensions `m₁,…,m_N` of the subsystems.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct DimProfile {
    dims: Vec<usize>,
    total: usize,
}

impl DimProfile {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Dimension("a profile needs at least one subsystem".into()));
        }
        if let Some(bad) = dims.iter().position(|&d| d == 0) {
            return Err(Error::Dimension(format!("subsystem {bad} has dimension 0")));
        }
        let total = dims.iter().product();
        Ok(Self { dims, total })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn all_qubits(&self) -> bool {
        self.dims.iter().all(|&d| d == 2)
    }

    /// Place value of each subsystem digit in the flat index.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for i in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.dims[i + 1];
        }
        strides
    }

    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.dims.len()];
        for (slot, &d) in digits.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
        digits
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.dims).fold(0, |acc, (&x, &d)| acc * d + x)
    }

    /// Checks that `parties` is nonempty, strictly increasing and in range.
    pub fn check_subset(&self, parties: &[usize]) -> Result<()> {
        if parties.is_empty() {
            return Err(Error::Index("subsystem list is empty".into()));
        }
        for w in parties.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Index(format!(
                    "subsystem list {parties:?} is not strictly increasing"
                )));
            }
        }
        if let Some(&bad) = parties.iter().find(|&&p| p >= self.parties()) {
            return Err(Error::Index(format!(
                "subsystem {bad} out of range for {} parties",
                self.parties()
            )));
        }
        Ok(())
    }

    pub fn restrict(&self, parties: &[usize]) -> Result<DimProfile> {
        self.check_subset(parties)?;
        DimProfile::new(parties.iter().map(|&p| self.dims[p]).collect())
    }

    pub fn complement(&self, parties: &[usize]) -> Vec<usize> {
        (0..self.parties()).filter(|p| !parties.contains(p)).collect()
    }

    /// Flat-index offsets of every multi-index over `parties`, enumerated in
    /// big-endian order of `parties`. Adding offsets of disjoint groups
    /// yields the full flat index.
    pub(crate) fn offsets(&self, parties: &[usize]) -> Vec<usize> {
        let strides = self.strides();
        let mut offs = vec![0usize];
        for &p in parties {
            let (d, s) = (self.dims[p], strides[p]);
            offs = offs
                .iter()
                .flat_map(|&o| (0..d).map(move |x| o + x * s))
                .collect();
        }
        offs
    }
}

impl TryFrom<Vec<usize>> for DimProfile {
    type Error = Error;

    fn try_from(dims: Vec<usize>) -> Result<Self> {
        DimProfile::new(dims)
    }
}

impl From<DimProfile> for Vec<usize> {
    fn from(p: DimProfile) -> Self {
        p.dims
    }
}

impl fmt::Display for DimProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join("⊗"))
    }
}

/// A normalized amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
    profile: DimProfile,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>, profile: DimProfile) -> Result<Self> {
        Self::new_with(amplitudes, profile, &Tolerances::default())
    }

    pub fn new_with(amplitudes: Vec<C64>, profile: DimProfile, tol: &Tolerances) -> Result<Self> {
        if amplitudes.len() != profile.total() {
            return Err(Error::Dimension(format!(
                "{} amplitudes for profile {profile} of size {}",
                amplitudes.len(),
                profile.total()
            )));
        }
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > tol.norm {
            return Err(Error::Validation(format!(
                "state norm {norm} deviates from 1 by more than {}",
                tol.norm
            )));
        }
        Ok(Self { amplitudes, profile })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(mut amplitudes: Vec<C64>, profile: DimProfile) -> Result<Self> {
        let n = norm(&amplitudes);
        if !n.is_finite() || n <= 0.0 {
            return Err(Error::Validation("cannot normalize a zero or non-finite vector".into()));
        }
        amplitudes.iter_mut().for_each(|a| *a /= n);
        Self::new(amplitudes, profile)
    }

    /// The product basis state with the given subsystem digits.
    pub fn basis(profile: DimProfile, digits: &[usize]) -> Result<Self> {
        if digits.len() != profile.parties() || digits.iter().zip(profile.dims()).any(|(x, d)| x >= d) {
            return Err(Error::Index(format!("digits {digits:?} invalid for {profile}")));
        }
        let mut amps = vec![ZERO; profile.total()];
        amps[profile.index(digits)] = ONE;
        Ok(Self { amplitudes: amps, profile })
    }

    /// Tensor product, parties of `self` first.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        let mut dims = self.profile.dims().to_vec();
        dims.extend_from_slice(other.profile.dims());
        PureState { amplitudes, profile: DimProfile::new(dims).expect("nonempty dims") }
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn profile(&self) -> &DimProfile {
        &self.profile
    }

    pub fn density(&self) -> DensityMatrix {
        let n = self.amplitudes.len();
        let m = DMatrix::from_fn(n, n, |i, j| self.amplitudes[i] * self.amplitudes[j].conj());
        DensityMatrix { matrix: m, profile: self.profile.clone() }
    }

    /// Reduced state on `keep` without forming the full projector.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let profile = self.profile.restrict(keep)?;
        let traced = self.profile.complement(keep);
        let ko = self.profile.offsets(keep);
        let to = self.profile.offsets(&traced);
        let m = DMatrix::from_fn(ko.len(), to.len(), |a, t| self.amplitudes[ko[a] + to[t]]);
        Ok(DensityMatrix { matrix: &m * m.adjoint(), profile })
    }

    /// Permutes subsystems: party `order[i]` of `self` becomes party `i`.
    pub fn permute(&self, order: &[usize]) -> Result<PureState> {
        let n = self.profile.parties();
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        if sorted != (0..n).collect::<Vec<_>>() {
            return Err(Error::Index(format!("{order:?} is not a permutation of 0..{n}")));
        }
        let profile = DimProfile::new(order.iter().map(|&p| self.profile.dims()[p]).collect())?;
        let offs = self.profile.offsets(order);
        let amplitudes = offs.iter().map(|&o| self.amplitudes[o]).collect();
        Ok(PureState { amplitudes, profile })
    }
}

pub(crate) fn norm(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// A Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<C64>,
    profile: DimProfile,
}

impl DensityMatrix {
    pub fn new(matrix: DMatrix<C64>, profile: DimProfile) -> Result<Self> {
        Self::new_with(matrix, profile, &Tolerances::default())
    }

    pub fn new_with(matrix: DMatrix<C64>, profile: DimProfile, tol: &Tolerances) -> Result<Self> {
        if matrix.nrows() != profile.total() || matrix.ncols() != profile.total() {
            return Err(Error::Dimension(format!(
                "{}×{} matrix for profile {profile} of size {}",
                matrix.nrows(),
                matrix.ncols(),
                profile.total()
            )));
        }
        let report = validate_density(&matrix, tol);
        if !report.passed {
            return Err(Error::Validation(report.failures.join("; ")));
        }
        Ok(Self { matrix, profile })
    }

    pub fn maximally_mixed(profile: DimProfile) -> Self {
        let n = profile.total();
        let matrix = DMatrix::from_diagonal_element(n, n, C64::new(1.0 / n as f64, 0.0));
        Self { matrix, profile }
    }

    /// `(1 − w)·self + w·other`.
    pub fn mix(&self, other: &DensityMatrix, w: f64) -> Result<Self> {
        if self.profile != other.profile {
            return Err(Error::Dimension(format!(
                "cannot mix {} with {}",
                self.profile, other.profile
            )));
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::Validation(format!("mixing weight {w} outside [0, 1]")));
        }
        let matrix = self.matrix.map(|z| z * (1.0 - w)) + other.matrix.map(|z| z * w);
        Ok(Self { matrix, profile: self.profile.clone() })
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn profile(&self) -> &DimProfile {
        &self.profile
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }
}

/// Pure or mixed input to a measure or checker.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl State {
    pub fn profile(&self) -> &DimProfile {
        match self {
            State::Pure(p) => p.profile(),
            State::Mixed(r) => r.profile(),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        match self {
            State::Pure(p) => p.density(),
            State::Mixed(r) => r.clone(),
        }
    }

    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        match self {
            State::Pure(p) => p.reduced(keep),
            State::Mixed(r) => partial_trace(r, keep),
        }
    }
}

/// An `A | B` split of subsystem indices. Both sides are sorted, nonempty and
/// disjoint; their union may be a proper subset of the parties, in which case
/// measures act on the reduced state of the union.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    side_a: Vec<usize>,
    side_b: Vec<usize>,
}

impl Partition {
    pub fn new(mut side_a: Vec<usize>, mut side_b: Vec<usize>) -> Result<Self> {
        side_a.sort_unstable();
        side_b.sort_unstable();
        if side_a.is_empty() || side_b.is_empty() {
            return Err(Error::Partition("both sides must be nonempty".into()));
        }
        if side_a.windows(2).any(|w| w[0] == w[1]) || side_b.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Partition("a side repeats a subsystem".into()));
        }
        if side_a.iter().any(|p| side_b.contains(p)) {
            return Err(Error::Partition(format!("sides {side_a:?} and {side_b:?} overlap")));
        }
        Ok(Self { side_a, side_b })
    }

    /// `side_a` against every other subsystem of an `n`-party system.
    pub fn versus_rest(side_a: Vec<usize>, parties: usize) -> Result<Self> {
        let side_b = (0..parties).filter(|p| !side_a.contains(p)).collect();
        Self::new(side_a, side_b)
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }

    pub fn swapped(&self) -> Self {
        Self { side_a: self.side_b.clone(), side_b: self.side_a.clone() }
    }

    /// Sorted union of both sides.
    pub fn support(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.side_a.iter().chain(&self.side_b).copied().collect();
        all.sort_unstable();
        all
    }

    pub fn check_for(&self, parties: usize) -> Result<()> {
        if let Some(&bad) = self.support().iter().find(|&&p| p >= parties) {
            return Err(Error::Partition(format!(
                "subsystem {bad} out of range for {parties} parties"
            )));
        }
        Ok(())
    }

    pub fn covers(&self, parties: usize) -> bool {
        self.support() == (0..parties).collect::<Vec<_>>()
    }

    /// The same cut expressed in the indexing of the reduced state on
    /// [`Partition::support`].
    pub fn relabeled_onto_support(&self) -> Partition {
        let support = self.support();
        let pos = |p: &usize| support.iter().position(|q| q == p).expect("in support");
        Partition {
            side_a: self.side_a.iter().map(pos).collect(),
            side_b: self.side_b.iter().map(pos).collect(),
        }
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `0,2|1,3`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once('|')
            .ok_or_else(|| Error::Partition(format!("`{s}` has no `|` separator")))?;
        let side = |txt: &str| -> Result<Vec<usize>> {
            txt.split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Partition(format!("`{t}` is not a subsystem index")))
                })
                .collect()
        };
        Partition::new(side(a)?, side(b)?)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{}|{}", join(&self.side_a), join(&self.side_b))
    }
}

pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

/// Reduced density matrix on the subsystems in `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let profile = rho.profile.restrict(keep)?;
    let traced = rho.profile.complement(keep);
    let ko = rho.profile.offsets(keep);
    let to = rho.profile.offsets(&traced);
    let m = &rho.matrix;
    let out = DMatrix::from_fn(ko.len(), ko.len(), |a, b| {
        to.iter().map(|&t| m[(ko[a] + t, ko[b] + t)]).sum::<C64>()
    });
    Ok(DensityMatrix { matrix: out, profile })
}

/// Transposes the subsystems in `parties` and leaves the others untouched.
pub fn partial_transpose(rho: &DensityMatrix, parties: &[usize]) -> Result<DMatrix<C64>> {
    rho.profile.check_subset(parties)?;
    let rest = rho.profile.complement(parties);
    let po = rho.profile.offsets(parties);
    let ro = rho.profile.offsets(&rest);
    let n = rho.profile.total();
    let m = &rho.matrix;
    let mut out = DMatrix::from_element(n, n, ZERO);
    for &ra in &ro {
        for &rb in &ro {
            for &pa in &po {
                for &pb in &po {
                    out[(ra + pa, rb + pb)] = m[(ra + pb, rb + pa)];
                }
            }
        }
    }
    Ok(out)
}

/// `Tr ρ²`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix.iter().map(|z| z.norm_sqr()).sum()
}

/// Eigenvalues in descending order with the matching eigenvector columns.
/// Within a degenerate eigenspace the basis is whatever the solver returns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> DMatrix<C64> {
        let n = self.values.len();
        let lambda = DMatrix::from_fn(n, n, |i, j| {
            if i == j { C64::new(self.values[i], 0.0) } else { ZERO }
        });
        &self.vectors * lambda * self.vectors.adjoint()
    }
}

pub fn hermitian_eig(matrix: &DMatrix<C64>) -> Result<HermitianEigen> {
    hermitian_eig_with(matrix, Tolerances::default().hermiticity)
}

pub fn hermitian_eig_with(matrix: &DMatrix<C64>, hermiticity_tol: f64) -> Result<HermitianEigen> {
    if !matrix.is_square() {
        return Err(Error::Dimension(format!(
            "{}×{} matrix is not square",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    let dev = hermiticity_deviation(matrix);
    if dev > hermiticity_tol {
        return Err(Error::Validation(format!(
            "matrix is not Hermitian: deviation {dev:e} exceeds {hermiticity_tol:e}"
        )));
    }
    let eig = SymmetricEigen::new(hermitian_part(matrix));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(matrix.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

pub(crate) fn hermitian_part(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.adjoint()).map(|z| z * 0.5)
}

pub(crate) fn hermiticity_deviation(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub hermiticity_deviation: f64,
    pub trace_deviation: f64,
    pub min_eigenvalue: f64,
    pub hermiticity_tolerance: f64,
    pub trace_tolerance: f64,
    pub psd_tolerance: f64,
    pub passed: bool,
    pub failures: Vec<String>,
}

/// Checks the density-matrix invariants without constructing one.
pub fn validate_density(matrix: &DMatrix<C64>, tol: &Tolerances) -> ValidationReport {
    let mut report = ValidationReport {
        hermiticity_deviation: f64::NAN,
        trace_deviation: f64::NAN,
        min_eigenvalue: f64::NAN,
        hermiticity_tolerance: tol.hermiticity,
        trace_tolerance: tol.trace,
        psd_tolerance: tol.psd,
        passed: false,
        failures: Vec::new(),
    };
    if !matrix.is_square() || matrix.nrows() == 0 {
        report.failures.push(format!("{}×{} matrix is not square", matrix.nrows(), matrix.ncols()));
        return report;
    }
    if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        report.failures.push("matrix has non-finite entries".into());
        return report;
    }
    report.hermiticity_deviation = hermiticity_deviation(matrix);
    report.trace_deviation = (matrix.trace() - ONE).norm();
    let eig = SymmetricEigen::new(hermitian_part(matrix));
    report.min_eigenvalue = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);

    if report.hermiticity_deviation > tol.hermiticity {
        report.failures.push(format!(
            "hermiticity deviation {:e} exceeds {:e}",
            report.hermiticity_deviation, tol.hermiticity
        ));
    }
    if report.trace_deviation > tol.trace {
        report.failures.push(format!(
            "trace deviation {:e} exceeds {:e}",
            report.trace_deviation, tol.trace
        ));
    }
    if report.min_eigenvalue < -tol.psd {
        report.failures.push(format!(
            "minimum eigenvalue {:e} below −{:e}",
            report.min_eigenvalue, tol.psd
        ));
    }
    report.passed = report.failures.is_empty();
    report
}

/// Index tables that reshape a flat vector into the `side × rest` matrix for
/// a cut, choosing the smaller side as rows.
#[derive(Debug, Clone)]
pub(crate) struct CutTable {
    rows: Vec<usize>,
    cols: Vec<usize>,
    /// Local dimension of the smaller side.
    pub(crate) small_dim: usize,
}

impl CutTable {
    /// `cut` must cover every party of `profile`.
    pub(crate) fn new(profile: &DimProfile, cut: &Partition) -> Self {
        let a = profile.offsets(cut.side_a());
        let b = profile.offsets(cut.side_b());
        let (rows, cols) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        let small_dim = rows.len();
        Self { rows, cols, small_dim }
    }

    /// `Tr(ρ_side²)` for the (possibly unnormalized) vector `psi`, where
    /// `ρ_side` is the partial trace of `|ψ⟩⟨ψ|`.
    pub(crate) fn side_purity(&self, psi: &[C64]) -> f64 {
        let d = self.rows.len();
        let mut gram = vec![ZERO; d * d];
        for i in 0..d {
            for j in i..d {
                let (ri, rj) = (self.rows[i], self.rows[j]);
                let mut acc = ZERO;
                for &c in &self.cols {
                    acc += psi[ri + c] * psi[rj + c].conj();
                }
                gram[i * d + j] = acc;
            }
        }
        let mut tr = 0.0;
        for i in 0..d {
            tr += gram[i * d + i].norm_sqr();
            for j in i + 1..d {
                tr += 2.0 * gram[i * d + j].norm_sqr();
            }
        }
        tr
    }
}
