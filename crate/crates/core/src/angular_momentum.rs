//! Exact half-integer spin bookkeeping, Clebsch–Gordan coefficients for coupling
//! a spin-j to a spin-1/2 or spin-1 partner, and total-spin sector projectors.
//!
//! Spins and magnetic quantum numbers are stored as twice their value so every
//! range and parity check is integer arithmetic. Coefficients follow the
//! Condon–Shortley signs: for the spin-1/2 partner
//! `|j±1/2, M⟩ = a±|j, M-1/2⟩|↑⟩ + b±|j, M+1/2⟩|↓⟩` with `a- ≤ 0`; for the
//! spin-1 partner `|J, M⟩ = x1|M-1⟩|1⟩ + x2|M⟩|0⟩ + x3|M+1⟩|-1⟩`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix};

/// Non-negative half-integer angular momentum, stored as `2j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Spin(u32);

impl Spin {
    pub const ZERO: Spin = Spin(0);
    pub const HALF: Spin = Spin(1);
    pub const ONE: Spin = Spin(2);

    pub const fn from_twice(twice: u32) -> Self {
        Spin(twice)
    }

    pub const fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// `2j + 1`.
    pub const fn dim(self) -> usize {
        self.0 as usize + 1
    }

    pub fn is_half_integer(self) -> bool {
        self.0 % 2 == 1
    }

    /// Magnetic indices `j, j-1, ..., -j` in product-basis order.
    pub fn magnetic_values(self) -> impl DoubleEndedIterator<Item = MagneticIndex> + Clone {
        let t = self.0 as i32;
        (0..=self.0 as i32).map(move |k| MagneticIndex(t - 2 * k))
    }

    /// Position of `m` in [`Spin::magnetic_values`].
    pub fn index_of(self, m: MagneticIndex) -> Option<usize> {
        if self.admits(m) {
            Some(((self.0 as i32 - m.0) / 2) as usize)
        } else {
            None
        }
    }

    /// True when `|m| ≤ j` and `j - m` is an integer.
    pub fn admits(self, m: MagneticIndex) -> bool {
        m.0.unsigned_abs() <= self.0 && (self.0 as i32 - m.0) % 2 == 0
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Parses `"2"`, `"5/2"`, or any rational `p/q` equal to a non-negative half-integer.
impl FromStr for Spin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse {
            what: "spin",
            input: s.to_string(),
        };
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (
                n.trim().parse::<u64>().map_err(|_| err())?,
                d.trim().parse::<u64>().map_err(|_| err())?,
            ),
            None => (s.parse::<u64>().map_err(|_| err())?, 1),
        };
        if den == 0 || (2 * num) % den != 0 {
            return Err(err());
        }
        let twice = u32::try_from(2 * num / den).map_err(|_| err())?;
        Ok(Spin(twice))
    }
}

/// Magnetic quantum number, stored as `2m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MagneticIndex(i32);

impl MagneticIndex {
    pub const fn from_twice(twice: i32) -> Self {
        MagneticIndex(twice)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// `self + delta/2`.
    pub const fn shifted(self, delta_twice: i32) -> Self {
        MagneticIndex(self.0 + delta_twice)
    }
}

impl fmt::Display for MagneticIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Which total spin a spin-j ⊗ spin-1/2 coupled state belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinHalfBranch {
    /// `J = j + 1/2`
    Plus,
    /// `J = j - 1/2`
    Minus,
}

impl SpinHalfBranch {
    pub fn total(self, j: Spin) -> Option<Spin> {
        match self {
            SpinHalfBranch::Plus => Some(Spin(j.0 + 1)),
            SpinHalfBranch::Minus => j.0.checked_sub(1).map(Spin),
        }
    }
}

/// Which total spin a spin-j ⊗ spin-1 coupled state belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinOneSector {
    /// `J = j + 1`, coefficients `(a1, a2, a3)`.
    Raised,
    /// `J = j`, coefficients `(b1, b2, b3)`.
    Same,
    /// `J = j - 1`, coefficients `(c1, c2, c3)`.
    Lowered,
}

impl SpinOneSector {
    pub fn total(self, j: Spin) -> Option<Spin> {
        match self {
            SpinOneSector::Raised => Some(Spin(j.0 + 2)),
            SpinOneSector::Same => (j.0 >= 1).then_some(j),
            SpinOneSector::Lowered => (j.0 >= 2).then(|| Spin(j.0 - 2)),
        }
    }
}

/// `sqrt(max(num, 0) / den)`; negative numerators only occur where the
/// coefficient is analytically zero at a range boundary.
fn sqrt_ratio(num: i64, den: i64) -> f64 {
    debug_assert!(den > 0);
    if num <= 0 {
        0.0
    } else {
        (num as f64 / den as f64).sqrt()
    }
}

fn check_sector_index(total: Spin, m: MagneticIndex, what: impl FnOnce() -> String) -> Result<()> {
    if total.admits(m) {
        Ok(())
    } else {
        Err(Error::MagneticOutOfRange {
            m: m.to_string(),
            what: what(),
        })
    }
}

/// Coefficients `(a, b)` of `|j±1/2, M⟩` on `|j, M-1/2⟩|↑⟩` and `|j, M+1/2⟩|↓⟩`.
///
/// `a± = ±sqrt((j + 1/2 ± M)/(2j+1))`, `b± = sqrt((j + 1/2 ∓ M)/(2j+1))`.
pub fn cg_spin_half(j: Spin, m: MagneticIndex, branch: SpinHalfBranch) -> Result<(f64, f64)> {
    let total = branch
        .total(j)
        .ok_or_else(|| Error::UnsupportedSpin(format!("J = j - 1/2 does not exist for j = {j}")))?;
    check_sector_index(total, m, || format!("J = {total} (j = {j}, partner 1/2)"))?;
    let tj = j.0 as i64;
    let tm = m.0 as i64;
    let den = 2 * (tj + 1);
    Ok(match branch {
        SpinHalfBranch::Plus => (sqrt_ratio(tj + 1 + tm, den), sqrt_ratio(tj + 1 - tm, den)),
        SpinHalfBranch::Minus => (-sqrt_ratio(tj + 1 - tm, den), sqrt_ratio(tj + 1 + tm, den)),
    })
}

/// Coefficients `(x1, x2, x3)` of `|J, M⟩` on `|M-1⟩|1⟩`, `|M⟩|0⟩`, `|M+1⟩|-1⟩`.
///
/// Returns `(a1, a2, a3)` for `J = j+1`, `(b1, b2, b3)` for `J = j` and
/// `(c1, c2, c3)` for `J = j-1`.
pub fn cg_spin_one(j: Spin, m: MagneticIndex, sector: SpinOneSector) -> Result<[f64; 3]> {
    let total = sector.total(j).ok_or_else(|| {
        Error::UnsupportedSpin(format!(
            "sector {sector:?} does not exist for j = {j} with a spin-1 partner"
        ))
    })?;
    check_sector_index(total, m, || format!("J = {total} (j = {j}, partner 1)"))?;
    // All products below are in units of 1/4 from the doubled representation.
    let tj = j.0 as i64;
    let tm = m.0 as i64;
    Ok(match sector {
        SpinOneSector::Raised => {
            let den = (tj + 1) * (tj + 2);
            [
                sqrt_ratio((tj + tm) * (tj + tm + 2), 4 * den),
                sqrt_ratio((tj - tm + 2) * (tj + tm + 2), 2 * den),
                sqrt_ratio((tj - tm) * (tj - tm + 2), 4 * den),
            ]
        }
        SpinOneSector::Same => {
            let den = tj * (tj + 2);
            [
                -sqrt_ratio((tj + tm) * (tj - tm + 2), 2 * den),
                tm as f64 / (den as f64).sqrt(),
                sqrt_ratio((tj - tm) * (tj + tm + 2), 2 * den),
            ]
        }
        SpinOneSector::Lowered => {
            let den = tj * (tj + 1);
            [
                sqrt_ratio((tj - tm) * (tj - tm + 2), 4 * den),
                -sqrt_ratio((tj - tm) * (tj + tm), 2 * den),
                sqrt_ratio((tj + tm) * (tj + tm + 2), 4 * den),
            ]
        }
    })
}

/// Row-major product-basis index of `|j1, m1⟩ ⊗ |j2, m2⟩`.
pub fn product_index(j1: Spin, m1: MagneticIndex, j2: Spin, m2: MagneticIndex) -> Option<usize> {
    Some(j1.index_of(m1)? * j2.dim() + j2.index_of(m2)?)
}

/// Total-spin eigenvector `|J, M⟩` of `j1 ⊗ j2` in the product basis.
#[derive(Clone, Debug, PartialEq)]
pub struct CoupledVector {
    pub j1: Spin,
    pub j2: Spin,
    pub total: Spin,
    pub m_total: MagneticIndex,
    /// Nonzero-support amplitudes as `(product index, amplitude)`.
    pub amplitudes: Vec<(usize, f64)>,
}

impl CoupledVector {
    pub fn product_dim(&self) -> usize {
        self.j1.dim() * self.j2.dim()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.product_dim()];
        for &(i, a) in &self.amplitudes {
            v[i] = a;
        }
        v
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|(_, a)| a * a).sum()
    }

    pub fn dot(&self, other: &CoupledVector) -> f64 {
        self.amplitudes
            .iter()
            .flat_map(|&(i, a)| {
                other
                    .amplitudes
                    .iter()
                    .filter(move |&&(k, _)| k == i)
                    .map(move |&(_, b)| a * b)
            })
            .sum()
    }
}

/// Totals `|j1 - j2|, ..., j1 + j2` in ascending order.
pub fn allowed_totals(j1: Spin, j2: Spin) -> Vec<Spin> {
    let lo = j1.0.abs_diff(j2.0);
    let hi = j1.0 + j2.0;
    (lo..=hi).step_by(2).map(Spin).collect()
}

fn check_triangle(j1: Spin, j2: Spin, total: Spin) -> Result<()> {
    if allowed_totals(j1, j2).contains(&total) {
        Ok(())
    } else {
        Err(Error::Triangle {
            j1: j1.to_string(),
            j2: j2.to_string(),
            total: total.to_string(),
        })
    }
}

pub fn coupled_vector(
    j1: Spin,
    j2: Spin,
    total: Spin,
    m_total: MagneticIndex,
) -> Result<CoupledVector> {
    check_triangle(j1, j2, total)?;
    check_sector_index(total, m_total, || format!("J = {total}"))?;

    // (partner m' in doubled units, coefficient)
    let terms: Vec<(i32, f64)> = match j2 {
        Spin::HALF => {
            let branch = if total.0 > j1.0 {
                SpinHalfBranch::Plus
            } else {
                SpinHalfBranch::Minus
            };
            let (a, b) = cg_spin_half(j1, m_total, branch)?;
            vec![(1, a), (-1, b)]
        }
        Spin::ONE => {
            let sector = match total.0 as i64 - j1.0 as i64 {
                2 => SpinOneSector::Raised,
                0 => SpinOneSector::Same,
                _ => SpinOneSector::Lowered,
            };
            let x = cg_spin_one(j1, m_total, sector)?;
            vec![(2, x[0]), (0, x[1]), (-2, x[2])]
        }
        other => {
            return Err(Error::UnsupportedSpin(format!(
                "partner spin {other}; only 1/2 and 1 are supported"
            )))
        }
    };

    let mut amplitudes = Vec::with_capacity(terms.len());
    for (m2_twice, coeff) in terms {
        let m2 = MagneticIndex(m2_twice);
        let m1 = MagneticIndex(m_total.0 - m2_twice);
        match product_index(j1, m1, j2, m2) {
            Some(idx) => {
                if coeff != 0.0 {
                    amplitudes.push((idx, coeff));
                }
            }
            None => assert!(
                coeff == 0.0,
                "nonzero coefficient {coeff} on nonexistent ket |{j1},{m1}⟩|{j2},{m2}⟩"
            ),
        }
    }
    Ok(CoupledVector {
        j1,
        j2,
        total,
        m_total,
        amplitudes,
    })
}

/// `Π_J = Σ_M |J, M⟩⟨J, M|` in the product basis.
pub fn projector(j1: Spin, j2: Spin, total: Spin) -> Result<HermitianMatrix> {
    check_triangle(j1, j2, total)?;
    let dim = j1.dim() * j2.dim();
    let mut p = ComplexMatrix::zeros(dim);
    for m in total.magnetic_values() {
        let v = coupled_vector(j1, j2, total, m)?;
        for &(r, a) in &v.amplitudes {
            for &(c, b) in &v.amplitudes {
                p[(r, c)] += Complex64::new(a * b, 0.0);
            }
        }
    }
    HermitianMatrix::new(p)
}

/// `(J_x, J_y, J_z)` for spin `j` in the basis `m = j, j-1, ..., -j`.
pub fn spin_operators(j: Spin) -> [HermitianMatrix; 3] {
    let d = j.dim();
    let jj = j.value() * (j.value() + 1.0);
    let ms: Vec<f64> = j.magnetic_values().map(|m| m.value()).collect();
    let mut raise = ComplexMatrix::zeros(d);
    // ⟨m+1|J+|m⟩ sits at row i-1, column i.
    for i in 1..d {
        let m = ms[i];
        raise[(i - 1, i)] = Complex64::new((jj - m * (m + 1.0)).max(0.0).sqrt(), 0.0);
    }
    let lower = raise.adjoint();
    let jx = (&raise + &lower).scale_real(0.5);
    let jy = (&raise - &lower).scale(Complex64::new(0.0, -0.5));
    let jz = ComplexMatrix::from_real_diagonal(&ms);
    [jx, jy, jz].map(|m| HermitianMatrix::new(m).expect("spin operators are Hermitian"))
}
