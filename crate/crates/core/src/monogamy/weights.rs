use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

/// A nonnegative weight vector summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Simplex(Vec<f64>);

impl Simplex {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        Self::new_with(weights, Tolerances::default().simplex)
    }

    pub fn new_with(weights: Vec<f64>, tol: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Validation("empty weight vector".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::Validation(format!("weight {w} is negative or not finite")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::Validation(format!("weights {weights:?} sum to {sum}, not 1")));
        }
        Ok(Self(weights))
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn vertex(n: usize, i: usize) -> Self {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        Self(v)
    }

    /// `[x, 1 − x]`.
    pub fn interval(x: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Validation(format!("weight x = {x} outside [0, 1]")));
        }
        Ok(Self(vec![x, 1.0 - x]))
    }

    /// Uniform (flat Dirichlet) draw from the interior.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Self {
        let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
        let s: f64 = e.iter().sum();
        Self(e.into_iter().map(|x| x / s).collect())
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dot(&self, values: &[f64]) -> f64 {
        self.0.iter().zip(values).map(|(w, v)| w * v).sum()
    }
}

impl std::ops::Index<usize> for Simplex {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<f64>> for Simplex {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Simplex::new(v)
    }
}

impl From<Simplex> for Vec<f64> {
    fn from(s: Simplex) -> Self {
        s.0
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|w| format!("{w}")).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Weights of the `A₁A₂|B₁B₂` bound: `x` over the four one-sided terms and,
/// for each of them, `y` splitting it over two pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem3Weights {
    pub x: Simplex,
    pub y: [Simplex; 4],
}

impl Theorem3Weights {
    pub fn new(x: Simplex, y: [Simplex; 4]) -> Result<Self> {
        if x.len() != 4 || y.iter().any(|s| s.len() != 2) {
            return Err(Error::Validation("theorem-3 weights need x of length 4 and four y of length 2".into()));
        }
        Ok(Self { x, y })
    }

    pub fn uniform() -> Self {
        Self { x: Simplex::uniform(4), y: std::array::from_fn(|_| Simplex::uniform(2)) }
    }

    /// `[[T₁₁, T₁₂], [T₂₁, T₂₂]]`, row = `Aᵢ`, column = `Bⱼ`. With
    /// `qubits` set the `y` split is replaced by the qubit monogamy
    /// inequality, which puts full weight on both pairs.
    pub fn t_matrix(&self, qubits: bool) -> [[f64; 2]; 2] {
        let x = &self.x;
        if qubits {
            return [[x[0] + x[2], x[1] + x[2]], [x[0] + x[3], x[1] + x[3]]];
        }
        let y = &self.y;
        [
            [x[0] * y[0][0] + x[2] * y[2][0], x[1] * y[1][0] + x[2] * y[2][1]],
            [x[0] * y[0][1] + x[3] * y[3][0], x[1] * y[1][1] + x[3] * y[3][1]],
        ]
    }
}

/// Weights of the four-partite bound.
///
/// `p[t]` spreads the `t | rest` cut over the three pairs `(t, s)`, `s ≠ t`
/// in increasing order. `x[c]` spreads the `c`-th two-versus-two cut
/// (`01|23`, `02|13`, `03|12`; side A holds party 0) over its four separated
/// pairs in the order `A₁B₁, A₁B₂, A₂B₁, A₂B₂`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem4Weights {
    pub p: [Simplex; 4],
    pub x: [Simplex; 3],
}

impl Theorem4Weights {
    pub fn new(p: [Simplex; 4], x: [Simplex; 3]) -> Result<Self> {
        if p.iter().any(|s| s.len() != 3) || x.iter().any(|s| s.len() != 4) {
            return Err(Error::Validation("theorem-4 weights need four p of length 3 and three x of length 4".into()));
        }
        Ok(Self { p, x })
    }

    pub fn uniform() -> Self {
        Self {
            p: std::array::from_fn(|_| Simplex::uniform(3)),
            x: std::array::from_fn(|_| Simplex::uniform(4)),
        }
    }

    /// Concentrates every cut on pair `(0, 1)` where it is separated, which
    /// turns the bound into `C²(ρ₀₁)` when the other pair terms vanish. The
    /// `3 | rest` cut cannot see pair `(0, 1)` and goes to pair `(0, 3)`;
    /// the `01|23` cut goes to pair `(0, 2)`.
    pub fn paper_choice() -> Self {
        Self {
            p: std::array::from_fn(|_| Simplex::vertex(3, 0)),
            x: std::array::from_fn(|_| Simplex::vertex(4, 0)),
        }
    }
}

/// The weights an inequality was evaluated at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WeightPoint {
    None,
    /// `x` and `1 − x` on two terms.
    Interval { x: f64 },
    Simplex { p: Simplex },
    Theorem3(Theorem3Weights),
    Theorem4(Theorem4Weights),
}

impl fmt::Display for WeightPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightPoint::None => write!(f, "-"),
            WeightPoint::Interval { x } => write!(f, "x={x}"),
            WeightPoint::Simplex { p } => write!(f, "p={p}"),
            WeightPoint::Theorem3(w) => {
                write!(f, "x={} y=[{},{},{},{}]", w.x, w.y[0], w.y[1], w.y[2], w.y[3])
            }
            WeightPoint::Theorem4(w) => write!(
                f,
                "p=[{},{},{},{}] x=[{},{},{}]",
                w.p[0], w.p[1], w.p[2], w.p[3], w.x[0], w.x[1], w.x[2]
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_validation() {
        assert!(Simplex::new(vec![0.5, 0.5]).is_ok());
        assert!(Simplex::new(vec![0.5, 0.6]).is_err());
        assert!(Simplex::new(vec![1.5, -0.5]).is_err());
        assert!(Simplex::new(vec![]).is_err());
        assert!(Simplex::new(vec![f64::NAN, 1.0]).is_err());
        assert!(Simplex::interval(1.2).is_err());
        assert!(Simplex::try_from(vec![0.2, 0.2]).is_err());
    }

    #[test]
    fn uniform_theorem3_weights_give_quarter() {
        let t = Theorem3Weights::uniform().t_matrix(false);
        for row in t {
            for v in row {
                assert!((v - 0.25).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn qubit_t_matrix() {
        let w = Theorem3Weights::new(
            Simplex::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap(),
            std::array::from_fn(|_| Simplex::vertex(2, 0)),
        )
        .unwrap();
        let t = w.t_matrix(true);
        let want = [[0.1 + 0.3, 0.2 + 0.3], [0.1 + 0.4, 0.2 + 0.4]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((t[i][j] - want[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn general_t_matrix_sums_to_one() {
        let mut rng = crate::random::seeded_rng(1, 0);
        for _ in 0..50 {
            let w = Theorem3Weights::new(Simplex::sample(&mut rng, 4), std::array::from_fn(|_| Simplex::sample(&mut rng, 2))).unwrap();
            let t = w.t_matrix(false);
            let s: f64 = t.iter().flatten().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }
}
