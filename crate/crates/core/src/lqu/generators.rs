use num_complex::Complex64;

use crate::angular_momentum::Spin;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix};

/// Traceless Hermitian generators of the partner's local algebra, normalized
/// so that `Tr(g_i g_j) = 2 δ_ij`.
///
/// For `d = 2` these are `σ_x, σ_y, σ_z`. For `d = 3` they are the Gell-Mann
/// matrices in the standard order `λ1..λ8`, written in the basis
/// `|1⟩, |0⟩, |-1⟩`, so `λ3 = diag(1, -1, 0)` and `λ8 = diag(1, 1, -2)/√3`.
#[derive(Clone, Debug)]
pub struct GeneratorBasis {
    local_dim: usize,
    generators: Vec<HermitianMatrix>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn hermitian(rows: [[Complex64; 3]; 3]) -> HermitianMatrix {
    HermitianMatrix::new(ComplexMatrix::from_fn(3, |r, k| rows[r][k]))
        .expect("generator is Hermitian")
}

impl GeneratorBasis {
    pub fn pauli() -> Self {
        let z = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let i = c(0.0, 1.0);
        let mats = [
            [[z, one], [one, z]],
            [[z, -i], [i, z]],
            [[one, z], [z, -one]],
        ];
        let generators = mats
            .iter()
            .map(|m| {
                HermitianMatrix::new(ComplexMatrix::from_fn(2, |r, k| m[r][k]))
                    .expect("Pauli is Hermitian")
            })
            .collect();
        Self {
            local_dim: 2,
            generators,
        }
    }

    pub fn gell_mann() -> Self {
        let z = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let i = c(0.0, 1.0);
        let s = c(1.0 / 3f64.sqrt(), 0.0);
        let generators = vec![
            hermitian([[z, one, z], [one, z, z], [z, z, z]]),
            hermitian([[z, -i, z], [i, z, z], [z, z, z]]),
            hermitian([[one, z, z], [z, -one, z], [z, z, z]]),
            hermitian([[z, z, one], [z, z, z], [one, z, z]]),
            hermitian([[z, z, -i], [z, z, z], [i, z, z]]),
            hermitian([[z, z, z], [z, z, one], [z, one, z]]),
            hermitian([[z, z, z], [z, z, -i], [z, i, z]]),
            hermitian([[s, z, z], [z, s, z], [z, z, s * -2.0]]),
        ];
        Self {
            local_dim: 3,
            generators,
        }
    }

    /// Basis acting on a partner of spin `jb` (1/2 or 1).
    pub fn for_spin(jb: Spin) -> Result<Self> {
        match jb {
            Spin::HALF => Ok(Self::pauli()),
            Spin::ONE => Ok(Self::gell_mann()),
            other => Err(Error::UnsupportedSpin(format!(
                "no generator basis for partner spin {other}"
            ))),
        }
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[HermitianMatrix] {
        &self.generators
    }
}

/// Unit vector of generator coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservableDirection(Vec<f64>);

impl ObservableDirection {
    pub const NORM_TOL: f64 = 1e-12;

    pub fn new(components: Vec<f64>) -> Result<Self> {
        let norm = components.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::NotUnitNorm { norm });
        }
        Ok(Self(components))
    }

    /// Rescales a nonzero vector to unit length.
    pub fn normalized(mut components: Vec<f64>) -> Result<Self> {
        let norm = components.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotUnitNorm { norm });
        }
        components.iter_mut().for_each(|x| *x /= norm);
        Ok(Self(components))
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `K = Σ n_i g_i`.
pub fn observable_from_direction(
    basis: &GeneratorBasis,
    n: &ObservableDirection,
) -> Result<HermitianMatrix> {
    if n.len() != basis.len() {
        return Err(Error::DirectionLength {
            expected: basis.len(),
            found: n.len(),
        });
    }
    let mut k = ComplexMatrix::zeros(basis.local_dim);
    for (g, &coeff) in basis.generators.iter().zip(n.components()) {
        k = &k + &g.as_matrix().scale_real(coeff);
    }
    HermitianMatrix::new(k)
}

/// The two qutrit directions at which the spin-1 LQU is attained:
/// `(n3, n8) = (1/2, √3/2)`, giving `S_z = diag(1, 0, -1)`, and
/// `(n3, n8) = (-√3/2, 1/2)`, giving `diag(-1, 2, -1)/√3`.
pub fn stationary_directions() -> [ObservableDirection; 2] {
    let r3 = 3f64.sqrt() / 2.0;
    let mut first = vec![0.0; 8];
    first[2] = 0.5;
    first[7] = r3;
    let mut second = vec![0.0; 8];
    second[2] = -r3;
    second[7] = 0.5;
    [
        ObservableDirection::new(first).expect("unit norm"),
        ObservableDirection::new(second).expect("unit norm"),
    ]
}
