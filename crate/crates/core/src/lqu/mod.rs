//! Wigner–Yanase skew information and local quantum uncertainty with the local
//! observable acting on the spin-1/2 or spin-1 partner (the fast factor of the
//! product basis).

mod generators;
mod minimize;

pub use generators::{
    observable_from_direction, stationary_directions, GeneratorBasis, ObservableDirection,
};
pub use minimize::{
    lqu_numeric, lqu_numeric_with, LocalSkewFunctional, MinimizerConfig, DEFAULT_STARTS,
};

use std::fmt;

use crate::angular_momentum::Spin;
use crate::error::{Error, Result};
use crate::linalg::{commutator, sym3_max_eigenvalue, HermitianMatrix};
use crate::states::{
    build_state_spin_half, spin_one_sqrt_coefficients, sqrt_density_matrix, Su2InvariantState,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LquMethod {
    ClosedFormula,
    WMatrix,
    NumericMin,
}

impl fmt::Display for LquMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LquMethod::ClosedFormula => "closed_formula",
            LquMethod::WMatrix => "w_matrix",
            LquMethod::NumericMin => "numeric_min",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LquResult {
    pub value: f64,
    pub method: LquMethod,
    /// Minimizing generator coefficients; only set by the numeric route.
    pub direction: Option<ObservableDirection>,
}

/// `I_A ⊗ K` for a spin-`ja` first factor.
pub fn local_observable(ja: Spin, k: &HermitianMatrix) -> HermitianMatrix {
    HermitianMatrix::identity(ja.dim()).kron(k)
}

/// `I(ρ, K) = -½ Tr([√ρ, K]²)`, evaluated as `½ ‖[√ρ, K]‖_F²` since the
/// commutator of two Hermitian matrices is anti-Hermitian.
pub fn skew_information(sqrt_rho: &HermitianMatrix, k: &HermitianMatrix) -> Result<f64> {
    let c = commutator(sqrt_rho, k)?;
    Ok(0.5 * c.frobenius_norm().powi(2))
}

/// `W_ij = Tr(√ρ (I⊗σ_i) √ρ (I⊗σ_j))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WMatrix(pub [[f64; 3]; 3]);

impl WMatrix {
    pub fn trace(&self) -> f64 {
        (0..3).map(|i| self.0[i][i]).sum()
    }

    pub fn max_eigenvalue(&self) -> Result<f64> {
        sym3_max_eigenvalue(&self.0)
    }

    /// `‖W - (Tr W / 3) I₃‖_max`.
    pub fn isotropy_residual(&self) -> f64 {
        let mean = self.trace() / 3.0;
        let mut worst: f64 = 0.0;
        for r in 0..3 {
            for c in 0..3 {
                let target = if r == c { mean } else { 0.0 };
                worst = worst.max((self.0[r][c] - target).abs());
            }
        }
        worst
    }
}

pub fn w_matrix(sqrt_rho: &HermitianMatrix, ja: Spin) -> Result<WMatrix> {
    let expected = ja.dim() * 2;
    if sqrt_rho.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: sqrt_rho.dim(),
        });
    }
    let basis = GeneratorBasis::pauli();
    let products: Vec<_> = basis
        .generators()
        .iter()
        .map(|g| sqrt_rho.as_matrix().mul_local_right(g.as_matrix()))
        .collect();
    let mut w = [[0.0; 3]; 3];
    for r in 0..3 {
        for c in r..3 {
            let v = products[r].trace_of_product(&products[c]).re;
            w[r][c] = v;
            w[c][r] = v;
        }
    }
    Ok(WMatrix(w))
}

fn require_partner(state: &Su2InvariantState, jb: Spin, route: &str) -> Result<()> {
    if state.jb() != jb {
        return Err(Error::UnsupportedSpin(format!(
            "{route} needs a spin-{jb} partner, state has spin {}",
            state.jb()
        )));
    }
    Ok(())
}

/// `1 - λ_max(W)`.
pub fn lqu_w_matrix(state: &Su2InvariantState) -> Result<LquResult> {
    require_partner(state, Spin::HALF, "the W-matrix route")?;
    let w = w_matrix(&sqrt_density_matrix(state), state.ja())?;
    Ok(LquResult {
        value: 1.0 - w.max_eigenvalue()?,
        method: LquMethod::WMatrix,
        direction: None,
    })
}

/// `8j(j+1) (sqrt(P/2j) - sqrt((1-P)/(2(j+1))))² / (3(2j+1))`.
pub fn lqu_formula_spin_half(j: Spin, p: f64) -> Result<f64> {
    build_state_spin_half(j, p)?;
    let jv = j.value();
    let p = p.clamp(0.0, 1.0);
    let gap = (p / (2.0 * jv)).sqrt() - ((1.0 - p) / (2.0 * (jv + 1.0))).sqrt();
    Ok(8.0 * jv * (jv + 1.0) * gap * gap / (3.0 * (2.0 * jv + 1.0)))
}

/// `(Σ_M (u1² + u2² + 4u3²), 3 Σ_M (u1² + u2²))` from the `√ρ` coefficients.
///
/// Sums run over the total-`M` range where each coupling connects two existing
/// kets: `u1` on `-j+1 ≤ M ≤ j`, `u2` on `-j ≤ M ≤ j-1`, `u3` on `|M| ≤ j-1`.
pub fn spin_one_branches(j: Spin, p: f64, q: f64) -> Result<(f64, f64)> {
    let tj = j.twice() as i32;
    let outer = Spin::from_twice(j.twice() + 2);
    let (mut s1, mut s2, mut s3) = (0.0, 0.0, 0.0);
    for mt in outer.magnetic_values() {
        let c = spin_one_sqrt_coefficients(j, mt, p, q)?;
        let t = mt.twice();
        let in_u1 = t > -tj && t <= tj;
        let in_u2 = t >= -tj && t < tj;
        let in_u3 = t.abs() < tj;
        if in_u1 {
            s1 += c.u1 * c.u1;
        } else {
            assert!(
                c.u1.abs() < 1e-15,
                "u1 = {} outside its range at M = {mt}",
                c.u1
            );
        }
        if in_u2 {
            s2 += c.u2 * c.u2;
        } else {
            assert!(
                c.u2.abs() < 1e-15,
                "u2 = {} outside its range at M = {mt}",
                c.u2
            );
        }
        if in_u3 {
            s3 += c.u3 * c.u3;
        } else {
            assert!(
                c.u3.abs() < 1e-15,
                "u3 = {} outside its range at M = {mt}",
                c.u3
            );
        }
    }
    Ok((s1 + s2 + 4.0 * s3, 3.0 * (s1 + s2)))
}

/// Minimum of the two stationary-direction values for the spin-1 partner.
pub fn lqu_formula_spin_one(j: Spin, p: f64, q: f64) -> Result<f64> {
    let (b1, b2) = spin_one_branches(j, p, q)?;
    Ok(b1.min(b2))
}

/// Closed-form LQU for either partner.
pub fn lqu_closed(state: &Su2InvariantState) -> Result<LquResult> {
    let value = match state.jb() {
        Spin::HALF => {
            let p = state.spin_half_parameter().ok_or_else(|| {
                Error::UnsupportedSpin(format!("closed form needs j ≥ 1/2, got {}", state.ja()))
            })?;
            lqu_formula_spin_half(state.ja(), p)?
        }
        Spin::ONE => {
            let (p, q) = state.spin_one_parameters().ok_or_else(|| {
                Error::UnsupportedSpin(format!("closed form needs j ≥ 1, got {}", state.ja()))
            })?;
            lqu_formula_spin_one(state.ja(), p, q)?
        }
        other => return Err(Error::UnsupportedSpin(format!("partner spin {other}"))),
    };
    Ok(LquResult {
        value,
        method: LquMethod::ClosedFormula,
        direction: None,
    })
}

/// Skew information of `√ρ` at the two stationary qutrit directions, computed
/// directly from the commutator.
pub fn stationary_direction_values(state: &Su2InvariantState) -> Result<(f64, f64)> {
    require_partner(state, Spin::ONE, "stationary directions")?;
    let basis = GeneratorBasis::gell_mann();
    let root = sqrt_density_matrix(state);
    let [first, second] = stationary_directions();
    let value = |n: &ObservableDirection| -> Result<f64> {
        let k = local_observable(state.ja(), &observable_from_direction(&basis, n)?);
        skew_information(&root, &k)
    };
    Ok((value(&first)?, value(&second)?))
}
