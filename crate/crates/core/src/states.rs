//! SU(2)-invariant states `ρ = Σ_J p_J/(2J+1) Π_J` of a spin-j particle and a
//! spin-1/2 or spin-1 partner.
//!
//! The spectral sum over sector projectors is the primary construction for both
//! `ρ` and `√ρ`. The explicit product-basis coefficient formulas (`u, v, w` for
//! the spin-1/2 partner, `v1..v3, u1..u3` of `√ρ` for the spin-1 partner) are
//! kept as a separate route and assembled into matrices for cross-checks.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::angular_momentum::{
    allowed_totals, cg_spin_one, product_index, projector, spin_operators, MagneticIndex, Spin,
    SpinOneSector,
};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix};

/// Absolute tolerance on the simplex constraints of sector probabilities.
pub const PROBABILITY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Su2InvariantState {
    ja: Spin,
    jb: Spin,
    sector_probs: BTreeMap<Spin, f64>,
}

impl Su2InvariantState {
    /// Validates that the keys are exactly the totals allowed by the triangle
    /// rule and that the probabilities lie on the simplex.
    pub fn new(ja: Spin, jb: Spin, sector_probs: BTreeMap<Spin, f64>) -> Result<Self> {
        if jb != Spin::HALF && jb != Spin::ONE {
            return Err(Error::UnsupportedSpin(format!(
                "partner spin {jb}; only 1/2 and 1 are supported"
            )));
        }
        let totals = allowed_totals(ja, jb);
        let keys: Vec<Spin> = sector_probs.keys().copied().collect();
        if keys != totals {
            let fmt = |v: &[Spin]| v.iter().map(Spin::to_string).collect::<Vec<_>>().join(", ");
            return Err(Error::InvalidProbability(format!(
                "sectors [{}] do not match the allowed totals [{}] for {ja} ⊗ {jb}",
                fmt(&keys),
                fmt(&totals)
            )));
        }
        let mut sum = 0.0;
        for (&total, &p) in &sector_probs {
            if !p.is_finite() || p < -PROBABILITY_TOL {
                return Err(Error::InvalidProbability(format!(
                    "p_J = {p} < 0 for J = {total}"
                )));
            }
            sum += p;
        }
        if (sum - 1.0).abs() > PROBABILITY_TOL {
            return Err(Error::InvalidProbability(format!("Σ p_J = {sum} ≠ 1")));
        }
        Ok(Self {
            ja,
            jb,
            sector_probs,
        })
    }

    /// Weights proportional to `2J+1`, i.e. `ρ = I/d`.
    pub fn maximally_mixed(ja: Spin, jb: Spin) -> Result<Self> {
        let d = (ja.dim() * jb.dim()) as f64;
        let probs = allowed_totals(ja, jb)
            .into_iter()
            .map(|t| (t, t.dim() as f64 / d))
            .collect();
        Self::new(ja, jb, probs)
    }

    pub fn ja(&self) -> Spin {
        self.ja
    }

    pub fn jb(&self) -> Spin {
        self.jb
    }

    pub fn sector_probs(&self) -> &BTreeMap<Spin, f64> {
        &self.sector_probs
    }

    pub fn sector_prob(&self, total: Spin) -> Option<f64> {
        self.sector_probs.get(&total).copied()
    }

    pub fn dim(&self) -> usize {
        self.ja.dim() * self.jb.dim()
    }

    /// Eigenvalue `p_J/(2J+1)` of `ρ` on sector `J`, clamped at zero.
    pub fn spectral_weight(&self, total: Spin) -> f64 {
        self.sector_prob(total)
            .map_or(0.0, |p| p.max(0.0) / total.dim() as f64)
    }

    /// `(P, Q)` of the spin-1 parameterization: weights of `J = j-1` and `J = j`.
    pub fn spin_one_parameters(&self) -> Option<(f64, f64)> {
        if self.jb != Spin::ONE || self.ja.twice() < 2 {
            return None;
        }
        let lowered = Spin::from_twice(self.ja.twice() - 2);
        Some((self.sector_prob(lowered)?, self.sector_prob(self.ja)?))
    }

    /// `P`, the weight of `J = j - 1/2` for a spin-1/2 partner.
    pub fn spin_half_parameter(&self) -> Option<f64> {
        if self.jb != Spin::HALF || self.ja.twice() < 1 {
            return None;
        }
        self.sector_prob(Spin::from_twice(self.ja.twice() - 1))
    }

    fn spectral_sum(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let mut acc = ComplexMatrix::zeros(self.dim());
        for &total in self.sector_probs.keys() {
            let w = f(self.spectral_weight(total));
            if w == 0.0 {
                continue;
            }
            let p =
                projector(self.ja, self.jb, total).expect("sector keys satisfy the triangle rule");
            acc = &acc + &p.as_matrix().scale_real(w);
        }
        HermitianMatrix::new(acc).expect("real symmetric sum of projectors")
    }
}

fn check_unit_interval(name: &str, x: f64) -> Result<()> {
    if !x.is_finite() || !(-PROBABILITY_TOL..=1.0 + PROBABILITY_TOL).contains(&x) {
        return Err(Error::InvalidProbability(format!(
            "{name} = {x} is outside [0, 1]"
        )));
    }
    Ok(())
}

/// `p_{j-1/2} = P`, `p_{j+1/2} = 1 - P`.
pub fn build_state_spin_half(j: Spin, p: f64) -> Result<Su2InvariantState> {
    if j.twice() < 1 {
        return Err(Error::UnsupportedSpin(format!("j = {j}; need j ≥ 1/2")));
    }
    check_unit_interval("P", p)?;
    let probs = BTreeMap::from([
        (Spin::from_twice(j.twice() - 1), p),
        (Spin::from_twice(j.twice() + 1), 1.0 - p),
    ]);
    Su2InvariantState::new(j, Spin::HALF, probs)
}

/// `p_{j-1} = P`, `p_j = Q`, `p_{j+1} = 1 - P - Q`.
pub fn build_state_spin_one(j: Spin, p: f64, q: f64) -> Result<Su2InvariantState> {
    if j.twice() < 2 {
        return Err(Error::UnsupportedSpin(format!(
            "j = {j}; the spin-1 family needs j ≥ 1"
        )));
    }
    check_unit_interval("P", p)?;
    check_unit_interval("Q", q)?;
    if p + q > 1.0 + PROBABILITY_TOL {
        return Err(Error::InvalidProbability(format!(
            "P + Q = {} exceeds 1",
            p + q
        )));
    }
    let probs = BTreeMap::from([
        (Spin::from_twice(j.twice() - 2), p),
        (j, q),
        (Spin::from_twice(j.twice() + 2), 1.0 - p - q),
    ]);
    Su2InvariantState::new(j, Spin::ONE, probs)
}

/// `ρ = Σ_J p_J/(2J+1) Π_J` in the product basis.
pub fn to_density_matrix(state: &Su2InvariantState) -> HermitianMatrix {
    state.spectral_sum(|w| w)
}

/// `√ρ = Σ_J sqrt(p_J/(2J+1)) Π_J`.
pub fn sqrt_density_matrix(state: &Su2InvariantState) -> HermitianMatrix {
    state.spectral_sum(f64::sqrt)
}

/// `Tr(ρ Π_J)`.
pub fn sector_probability(rho: &HermitianMatrix, j1: Spin, j2: Spin, total: Spin) -> Result<f64> {
    let p = projector(j1, j2, total)?;
    if p.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: rho.dim(),
        });
    }
    Ok(rho.as_matrix().trace_of_product(p.as_matrix()).re)
}

/// Product-basis elements of `ρ` for a spin-1/2 partner, at spin-j index `m`:
/// `u = ⟨m,↑|ρ|m,↑⟩`, `v = ⟨m,↓|ρ|m,↓⟩`, `w = ⟨m,↑|ρ|m+1,↓⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinHalfCoefficients {
    pub u: f64,
    pub v: f64,
    pub w: f64,
}

pub fn spin_half_coefficients(j: Spin, m: MagneticIndex, p: f64) -> Result<SpinHalfCoefficients> {
    if j.twice() < 1 {
        return Err(Error::UnsupportedSpin(format!("j = {j}; need j ≥ 1/2")));
    }
    check_unit_interval("P", p)?;
    if !j.admits(m) {
        return Err(Error::MagneticOutOfRange {
            m: m.to_string(),
            what: format!("spin {j}"),
        });
    }
    let (jv, mv) = (j.value(), m.value());
    let low = p / (2.0 * jv);
    let high = (1.0 - p) / (2.0 * (jv + 1.0));
    let d = 2.0 * jv + 1.0;
    Ok(SpinHalfCoefficients {
        u: low * (jv - mv) / d + high * (jv + mv + 1.0) / d,
        v: low * (jv + mv) / d + high * (jv - mv + 1.0) / d,
        w: -((jv - mv) * (jv + mv + 1.0)).max(0.0).sqrt() / d * (low - high),
    })
}

/// Assembles `ρ` for a spin-1/2 partner from [`spin_half_coefficients`].
pub fn density_matrix_from_coefficients(j: Spin, p: f64) -> Result<HermitianMatrix> {
    let up = MagneticIndex::from_twice(1);
    let down = MagneticIndex::from_twice(-1);
    let mut rho = ComplexMatrix::zeros(j.dim() * 2);
    for m in j.magnetic_values() {
        let c = spin_half_coefficients(j, m, p)?;
        let iu = product_index(j, m, Spin::HALF, up).expect("m in range");
        let id = product_index(j, m, Spin::HALF, down).expect("m in range");
        rho[(iu, iu)] = Complex64::new(c.u, 0.0);
        rho[(id, id)] = Complex64::new(c.v, 0.0);
        match product_index(j, m.shifted(2), Spin::HALF, down) {
            Some(k) => {
                rho[(iu, k)] = Complex64::new(c.w, 0.0);
                rho[(k, iu)] = Complex64::new(c.w, 0.0);
            }
            None => assert!(c.w == 0.0, "w must vanish at m = j, got {}", c.w),
        }
    }
    HermitianMatrix::new(rho)
}

/// Product-basis elements of `√ρ` for a spin-1 partner in the total-`M` block
/// spanned by `|M-1⟩|1⟩`, `|M⟩|0⟩`, `|M+1⟩|-1⟩`: diagonal `v1, v2, v3`,
/// couplings `u1` (1↔0), `u2` (0↔-1), `u3` (1↔-1).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SpinOneSqrtCoefficients {
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
}

/// Coefficients of `√ρ` at total magnetic number `m_total`, weighting each
/// sector's Clebsch–Gordan products by `sqrt(P/(2j-1))`, `sqrt(Q/(2j+1))` and
/// `sqrt((1-P-Q)/(2j+3))`. Sectors with `|M| > J` contribute nothing.
pub fn spin_one_sqrt_coefficients(
    j: Spin,
    m_total: MagneticIndex,
    p: f64,
    q: f64,
) -> Result<SpinOneSqrtCoefficients> {
    // Validates j and the simplex.
    build_state_spin_one(j, p, q)?;
    let outer = Spin::from_twice(j.twice() + 2);
    if !outer.admits(m_total) {
        return Err(Error::MagneticOutOfRange {
            m: m_total.to_string(),
            what: format!("total spin ≤ {outer} (j = {j}, partner 1)"),
        });
    }
    let jv = j.value();
    let weighted = [
        (
            SpinOneSector::Lowered,
            (p.max(0.0) / (2.0 * jv - 1.0)).sqrt(),
        ),
        (SpinOneSector::Same, (q.max(0.0) / (2.0 * jv + 1.0)).sqrt()),
        (
            SpinOneSector::Raised,
            ((1.0 - p - q).max(0.0) / (2.0 * jv + 3.0)).sqrt(),
        ),
    ];
    let mut out = SpinOneSqrtCoefficients::default();
    for (sector, weight) in weighted {
        let total = sector.total(j).expect("j ≥ 1");
        if !total.admits(m_total) {
            continue;
        }
        let [x1, x2, x3] = cg_spin_one(j, m_total, sector)?;
        out.v1 += weight * x1 * x1;
        out.v2 += weight * x2 * x2;
        out.v3 += weight * x3 * x3;
        out.u1 += weight * x1 * x2;
        out.u2 += weight * x3 * x2;
        out.u3 += weight * x1 * x3;
    }
    Ok(out)
}

/// Assembles `√ρ` for a spin-1 partner from [`spin_one_sqrt_coefficients`].
///
/// Coefficients attached to kets outside the spin-j range must vanish; this is
/// asserted rather than skipped.
pub fn sqrt_density_matrix_from_coefficients(j: Spin, p: f64, q: f64) -> Result<HermitianMatrix> {
    let mut root = ComplexMatrix::zeros(j.dim() * 3);
    let outer = Spin::from_twice(j.twice() + 2);
    for mt in outer.magnetic_values() {
        let c = spin_one_sqrt_coefficients(j, mt, p, q)?;
        let kets = [(2, mt.shifted(-2)), (0, mt), (-2, mt.shifted(2))]
            .map(|(mb, ma)| product_index(j, ma, Spin::ONE, MagneticIndex::from_twice(mb)));
        let diag = [c.v1, c.v2, c.v3];
        for (k, v) in kets.iter().zip(diag) {
            match k {
                Some(i) => root[(*i, *i)] = Complex64::new(v, 0.0),
                None => assert!(
                    v.abs() < 1e-15,
                    "nonzero diagonal {v} on missing ket at M = {mt}"
                ),
            }
        }
        for (a, b, u) in [(0, 1, c.u1), (2, 1, c.u2), (0, 2, c.u3)] {
            match (kets[a], kets[b]) {
                (Some(r), Some(s)) => {
                    root[(r, s)] = Complex64::new(u, 0.0);
                    root[(s, r)] = Complex64::new(u, 0.0);
                }
                _ => assert!(
                    u.abs() < 1e-15,
                    "nonzero coupling {u} on missing ket at M = {mt}"
                ),
            }
        }
    }
    HermitianMatrix::new(root)
}

/// `max_k ‖[ρ, J_k⊗I + I⊗J_k]‖_max` over the three total-spin components.
///
/// Zero exactly when `ρ` commutes with every joint rotation.
pub fn check_su2_invariance(rho: &HermitianMatrix, j1: Spin, j2: Spin) -> Result<f64> {
    let d = j1.dim() * j2.dim();
    if rho.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: rho.dim(),
        });
    }
    let ops1 = spin_operators(j1);
    let ops2 = spin_operators(j2);
    let id1 = HermitianMatrix::identity(j1.dim());
    let id2 = HermitianMatrix::identity(j2.dim());
    let mut worst: f64 = 0.0;
    for (a, b) in ops1.iter().zip(&ops2) {
        let total = &a.kron(&id2).into_inner() + &id1.kron(b).into_inner();
        let comm = crate::linalg::commutator(rho, &HermitianMatrix::new(total)?)?;
        worst = worst.max(comm.max_abs());
    }
    Ok(worst)
}
