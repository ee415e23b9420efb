//! Named states and seeded random states.
//!
//! Random generation uses ChaCha20 streams ([`crate::random`]); the same seed
//! produces bit-identical amplitudes on every platform.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::random::{gaussian_vector, seeded_rng};
use crate::tensor::{partial_trace, DensityMatrix, DimProfile, PureState, State, C64, ZERO};

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn profile(dims: &[usize]) -> DimProfile {
    DimProfile::new(dims.to_vec()).expect("static profile")
}

/// `(|01⟩ + |10⟩)/√2`.
pub fn bell() -> PureState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    PureState::new(vec![ZERO, real(s), real(s), ZERO], profile(&[2, 2])).expect("normalized")
}

/// `(|00⟩ + |11⟩)/√2`.
pub fn phi_plus() -> PureState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    PureState::new(vec![real(s), ZERO, ZERO, real(s)], profile(&[2, 2])).expect("normalized")
}

/// `(1/√d) Σᵢ |i…i⟩` on `n` parties of dimension `d`.
pub fn ghz(n: usize, d: usize) -> Result<PureState> {
    if n < 2 || d < 2 {
        return Err(Error::Validation(format!("ghz needs n ≥ 2 and d ≥ 2, got n={n}, d={d}")));
    }
    let p = DimProfile::new(vec![d; n])?;
    let mut amps = vec![ZERO; p.total()];
    for i in 0..d {
        amps[p.index(&vec![i; n])] = real(1.0 / (d as f64).sqrt());
    }
    PureState::new(amps, p)
}

/// Uniform superposition of the `n` single-excitation qubit basis states.
pub fn w(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::Validation(format!("w needs n ≥ 2, got {n}")));
    }
    let p = DimProfile::new(vec![2; n])?;
    let mut amps = vec![ZERO; p.total()];
    for k in 0..n {
        amps[1 << (n - 1 - k)] = real(1.0 / (n as f64).sqrt());
    }
    PureState::new(amps, p)
}

/// `(1/√d) Σᵢ |ii⟩` on `d⊗d`.
pub fn max_entangled(d: usize) -> Result<PureState> {
    if d < 2 {
        return Err(Error::Validation(format!("max_entangled needs d ≥ 2, got {d}")));
    }
    let p = DimProfile::new(vec![d, d])?;
    let mut amps = vec![ZERO; d * d];
    for i in 0..d {
        amps[i * d + i] = real(1.0 / (d as f64).sqrt());
    }
    PureState::new(amps, p)
}

/// `(|000⟩ + |111⟩ + |φ⁺⟩|2⟩)/√3` on `2⊗2⊗3` with `|φ⁺⟩ = (|01⟩ + |10⟩)/√2`.
pub fn paper_state_223() -> PureState {
    let p = profile(&[2, 2, 3]);
    let third = 1.0 / 3f64.sqrt();
    let sixth = 1.0 / 6f64.sqrt();
    let mut amps = vec![ZERO; p.total()];
    amps[p.index(&[0, 0, 0])] = real(third);
    amps[p.index(&[1, 1, 1])] = real(third);
    amps[p.index(&[0, 1, 2])] = real(sixth);
    amps[p.index(&[1, 0, 2])] = real(sixth);
    PureState::new(amps, p).expect("normalized")
}

/// Totally antisymmetric state of three qutrits,
/// `(1/√6) Σ_σ sgn(σ) |σ(0)σ(1)σ(2)⟩`.
pub fn antisymmetric_qutrit() -> PureState {
    let p = profile(&[3, 3, 3]);
    let a = 1.0 / 6f64.sqrt();
    let mut amps = vec![ZERO; p.total()];
    for (digits, sign) in [
        ([0, 1, 2], 1.0),
        ([0, 2, 1], -1.0),
        ([1, 2, 0], 1.0),
        ([1, 0, 2], -1.0),
        ([2, 0, 1], 1.0),
        ([2, 1, 0], -1.0),
    ] {
        amps[p.index(&digits)] = real(sign * a);
    }
    PureState::new(amps, p).expect("normalized")
}

/// The pure part of the four-party family,
/// `½(|0000⟩ + |0012⟩ + |1100⟩ + |1112⟩)` on `2⊗2⊗2⊗3`.
pub fn paper_family_2223_pure() -> PureState {
    let p = profile(&[2, 2, 2, 3]);
    let mut amps = vec![ZERO; p.total()];
    for digits in [[0, 0, 0, 0], [0, 0, 1, 2], [1, 1, 0, 0], [1, 1, 1, 2]] {
        amps[p.index(&digits)] = real(0.5);
    }
    PureState::new(amps, p).expect("normalized")
}

/// `(1 − t)·I₂₄/24 + t·|ψ⟩⟨ψ|` with `|ψ⟩` from [`paper_family_2223_pure`].
/// The identity term is maximally mixed on the full 24-dimensional space.
pub fn paper_family_2223(t: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Validation(format!("family parameter t = {t} outside [0, 1]")));
    }
    let psi = paper_family_2223_pure();
    DensityMatrix::maximally_mixed(psi.profile().clone()).mix(&psi.density(), t)
}

/// Normalized complex Gaussian vector, i.e. a Haar-random pure state.
pub fn haar_random_pure(profile: &DimProfile, seed: u64) -> PureState {
    haar_random_pure_stream(profile, seed, 0)
}

pub fn haar_random_pure_stream(profile: &DimProfile, seed: u64, stream: u64) -> PureState {
    let mut rng = seeded_rng(seed, stream);
    loop {
        let v = gaussian_vector(&mut rng, profile.total());
        if let Ok(psi) = PureState::normalized(v, profile.clone()) {
            return psi;
        }
    }
}

/// Partial trace of a Haar-random pure state on `profile ⊗ rank` over the
/// ancilla. The result has rank at most `rank`.
pub fn random_density(profile: &DimProfile, rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_density_stream(profile, rank, seed, 0)
}

pub fn random_density_stream(profile: &DimProfile, rank: usize, seed: u64, stream: u64) -> Result<DensityMatrix> {
    if rank == 0 || rank > profile.total() {
        return Err(Error::Validation(format!(
            "rank {rank} outside 1..={} for {profile}",
            profile.total()
        )));
    }
    let mut dims = profile.dims().to_vec();
    dims.push(rank);
    let big = DimProfile::new(dims)?;
    let psi = haar_random_pure_stream(&big, seed, stream);
    let keep: Vec<usize> = (0..profile.parties()).collect();
    psi.reduced(&keep)
}

/// Product of pure factors, parties in order.
pub fn product(factors: &[PureState]) -> Result<PureState> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::Validation("product of zero factors".into()))?;
    Ok(rest.iter().fold(first.clone(), |acc, f| acc.tensor(f)))
}

/// A catalog state addressed by name and parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSpec {
    pub name: String,
    #[serde(default)]
    pub parameters: BTreeMap<String, f64>,
    /// Required by the random families, ignored otherwise.
    #[serde(default)]
    pub dims: Option<Vec<usize>>,
}

/// Names accepted by [`StateSpec::build`].
pub const CATALOG: &[(&str, &str)] = &[
    ("bell", "(|01⟩+|10⟩)/√2"),
    ("phi-plus", "(|00⟩+|11⟩)/√2"),
    ("ghz", "GHZ state; parameters n (parties, default 3), d (local dim, default 2)"),
    ("w", "W state; parameter n (default 3)"),
    ("max-entangled", "(1/√d)Σ|ii⟩; parameter d (default 2)"),
    ("paper-223", "(|000⟩+|111⟩+|φ⁺⟩|2⟩)/√3 on 2⊗2⊗3"),
    ("antisymmetric-qutrit", "totally antisymmetric three-qutrit state"),
    ("paper-2223", "(1−t)I/24 + t|ψ⟩⟨ψ| on 2⊗2⊗2⊗3; parameter t"),
    ("paper-2223-pure", "½(|0000⟩+|0012⟩+|1100⟩+|1112⟩)"),
    ("product", "|0…0⟩; needs dims"),
    ("haar", "Haar-random pure state; needs dims, parameter seed"),
    ("random-density", "random mixed state; needs dims, parameters rank, seed"),
];

impl StateSpec {
    pub fn named(name: &str) -> Self {
        Self { name: name.to_string(), parameters: BTreeMap::new(), dims: None }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.parameters.insert(key.to_string(), value);
        self
    }

    pub fn with_dims(mut self, dims: Vec<usize>) -> Self {
        self.dims = Some(dims);
        self
    }

    fn real(&self, key: &str) -> Result<Option<f64>> {
        match self.parameters.get(key) {
            Some(v) if !v.is_finite() => Err(Error::Validation(format!("parameter {key} = {v} is not finite"))),
            other => Ok(other.copied()),
        }
    }

    fn int(&self, key: &str, default: Option<usize>) -> Result<usize> {
        match (self.real(key)?, default) {
            (Some(v), _) if v >= 0.0 && v.fract() == 0.0 => Ok(v as usize),
            (Some(v), _) => Err(Error::Validation(format!("parameter {key} = {v} is not a nonnegative integer"))),
            (None, Some(d)) => Ok(d),
            (None, None) => Err(Error::Validation(format!("state `{}` needs parameter {key}", self.name))),
        }
    }

    fn profile(&self) -> Result<DimProfile> {
        let dims = self
            .dims
            .clone()
            .ok_or_else(|| Error::Validation(format!("state `{}` needs dims", self.name)))?;
        DimProfile::new(dims)
    }

    pub fn build(&self) -> Result<State> {
        let state = match self.name.as_str() {
            "bell" => State::Pure(bell()),
            "phi-plus" => State::Pure(phi_plus()),
            "ghz" => State::Pure(ghz(self.int("n", Some(3))?, self.int("d", Some(2))?)?),
            "w" => State::Pure(w(self.int("n", Some(3))?)?),
            "max-entangled" => State::Pure(max_entangled(self.int("d", Some(2))?)?),
            "paper-223" => State::Pure(paper_state_223()),
            "antisymmetric-qutrit" => State::Pure(antisymmetric_qutrit()),
            "paper-2223-pure" => State::Pure(paper_family_2223_pure()),
            "paper-2223" => {
                let t = self
                    .real("t")?
                    .ok_or_else(|| Error::Validation("state `paper-2223` needs parameter t".into()))?;
                State::Mixed(paper_family_2223(t)?)
            }
            "product" => {
                let p = self.profile()?;
                State::Pure(PureState::basis(p.clone(), &vec![0; p.parties()])?)
            }
            "haar" => State::Pure(haar_random_pure(&self.profile()?, self.int("seed", Some(0))? as u64)),
            "random-density" => {
                let p = self.profile()?;
                let rank = self.int("rank", Some(p.total()))?;
                State::Mixed(random_density(&p, rank, self.int("seed", Some(0))? as u64)?)
            }
            other => {
                let names: Vec<&str> = CATALOG.iter().map(|(n, _)| *n).collect();
                return Err(Error::Validation(format!(
                    "unknown state `{other}`; known states: {}",
                    names.join(", ")
                )));
            }
        };
        Ok(state)
    }
}

/// Reduced state onto the single pair `(i, j)`.
pub fn pair_reduction(state: &State, i: usize, j: usize) -> Result<DensityMatrix> {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    match state {
        State::Pure(p) => p.reduced(&[a, b]),
        State::Mixed(r) => partial_trace(r, &[a, b]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{purity, validate_density};
    use crate::Tolerances;

    fn close(a: C64, b: f64) -> bool {
        (a - real(b)).norm() < 1e-15
    }

    #[test]
    fn bell_amplitudes() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let b = bell();
        assert_eq!(b.profile().dims(), &[2, 2]);
        for (a, want) in b.amplitudes().iter().zip([0.0, s, s, 0.0]) {
            assert!(close(*a, want));
        }
    }

    #[test]
    fn ghz_and_max_entangled() {
        let g = ghz(3, 2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(g.amplitudes()[0], s));
        assert!(close(g.amplitudes()[7], s));
        assert_eq!(g.amplitudes().iter().filter(|a| a.norm() > 0.0).count(), 2);

        let m = max_entangled(3).unwrap();
        let red = m.reduced(&[0]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 / 3.0 } else { 0.0 };
                assert!((red.matrix()[(i, j)] - real(want)).norm() < 1e-15);
            }
        }
        assert!(ghz(1, 2).is_err());
        assert!(ghz(3, 1).is_err());
        assert!(w(1).is_err());
        assert!(max_entangled(1).is_err());
    }

    #[test]
    fn w_state_layout() {
        let s = w(3).unwrap();
        let x = 1.0 / 3f64.sqrt();
        for idx in [1, 2, 4] {
            assert!(close(s.amplitudes()[idx], x));
        }
    }

    #[test]
    fn state_223_amplitudes() {
        let psi = paper_state_223();
        let p = psi.profile().clone();
        let nonzero: Vec<usize> = (0..12).filter(|&i| psi.amplitudes()[i].norm() > 0.0).collect();
        assert_eq!(
            nonzero,
            vec![p.index(&[0, 0, 0]), p.index(&[0, 1, 2]), p.index(&[1, 0, 2]), p.index(&[1, 1, 1])]
        );
        let norm: f64 = psi.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-15);
    }

    #[test]
    fn antisymmetric_sign_flip_under_swaps() {
        let psi = antisymmetric_qutrit();
        for order in [[1, 0, 2], [0, 2, 1], [2, 1, 0]] {
            let swapped = psi.permute(&order).unwrap();
            for (a, b) in swapped.amplitudes().iter().zip(psi.amplitudes()) {
                assert_eq!(*a, -*b);
            }
        }
    }

    #[test]
    fn family_linear_in_t() {
        let r0 = paper_family_2223(0.0).unwrap();
        let r1 = paper_family_2223(1.0).unwrap();
        for t in [0.1, 0.37, 0.8] {
            let rt = paper_family_2223(t).unwrap();
            let lin = r0.matrix().map(|z| z * (1.0 - t)) + r1.matrix().map(|z| z * t);
            let dev = (rt.matrix() - lin).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(dev <= 1e-14);
        }
        assert!(paper_family_2223(-0.1).is_err());
        assert!(paper_family_2223(1.1).is_err());
    }

    #[test]
    fn random_states_are_deterministic_and_valid() {
        let p = DimProfile::new(vec![2, 3]).unwrap();
        let a = haar_random_pure(&p, 42);
        let b = haar_random_pure(&p, 42);
        assert!(a.amplitudes().iter().zip(b.amplitudes()).all(|(x, y)| x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits()));
        assert_ne!(a, haar_random_pure(&p, 43));

        let r1 = random_density(&p, 1, 7).unwrap();
        assert!((purity(&r1) - 1.0).abs() < 1e-10);
        let r6 = random_density(&p, 6, 7).unwrap();
        assert!(validate_density(r6.matrix(), &Tolerances::default()).passed);
        assert!(random_density(&p, 0, 7).is_err());
        assert!(random_density(&p, 7, 7).is_err());
    }

    #[test]
    fn catalog_builds_every_name() {
        for (name, _) in CATALOG {
            let spec = StateSpec::named(name).with("t", 0.5).with_dims(vec![2, 2]);
            let state = spec.build().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(validate_density(state.density().matrix(), &Tolerances::default()).passed, "{name}");
        }
        assert!(StateSpec::named("nope").build().is_err());
        assert!(StateSpec::named("paper-2223").build().is_err());
        assert!(StateSpec::named("ghz").with("n", 2.5).build().is_err());
    }
}
