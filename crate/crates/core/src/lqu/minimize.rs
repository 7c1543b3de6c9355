//! Multi-start projected descent of skew information over unit generator
//! directions.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::generators::{stationary_directions, GeneratorBasis, ObservableDirection};
use super::{LquMethod, LquResult};
use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;
use crate::states::{sqrt_density_matrix, Su2InvariantState};

pub const DEFAULT_STARTS: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct MinimizerConfig {
    /// Number of pseudo-random starting directions.
    pub starts: usize,
    /// Also start from the two stationary qutrit directions (spin-1 partner only).
    pub warm_starts: bool,
    pub max_iterations: usize,
    /// A start stops once an accepted step lowers the value by at most this much.
    pub value_tolerance: f64,
    /// ... or once the tangent gradient norm drops below this.
    pub gradient_tolerance: f64,
    pub seed: u64,
}

impl Default for MinimizerConfig {
    fn default() -> Self {
        Self {
            starts: DEFAULT_STARTS,
            warm_starts: true,
            max_iterations: 10_000,
            value_tolerance: 1e-12,
            gradient_tolerance: 1e-10,
            seed: 0x5eed_1a7e,
        }
    }
}

/// `n ↦ I(ρ, I ⊗ Σ n_i g_i)` for a fixed `√ρ`, reduced to partner-sized tensors.
///
/// Writing `√ρ = Σ_{ab} X_ab ⊗ |a⟩⟨b|` with spin-j blocks `X_ab`,
/// `Tr(√ρ (I⊗K) √ρ (I⊗K)) = Σ Tr(X_ab X_ce) K_bc K_ea` and
/// `Tr(ρ (I⊗K²)) = Tr(ρ_B K²)`, so only `Tr(X_ab X_ce)` (d⁴ numbers for a
/// partner of dimension d) is kept.
#[derive(Clone, Debug)]
pub struct LocalSkewFunctional {
    d: usize,
    block_traces: Vec<Complex64>,
    reduced: Vec<Complex64>,
    generators: Vec<Vec<Complex64>>,
}

impl LocalSkewFunctional {
    pub fn new(sqrt_rho: &HermitianMatrix, basis: &GeneratorBasis) -> Result<Self> {
        let d = basis.local_dim();
        let n = sqrt_rho.dim();
        if !n.is_multiple_of(d) {
            return Err(Error::DimensionMismatch {
                expected: d * (n / d + 1),
                found: n,
            });
        }
        let da = n / d;
        let s = sqrt_rho.as_matrix();
        let mut block_traces = vec![Complex64::new(0.0, 0.0); d * d * d * d];
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for e in 0..d {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for k in 0..da {
                            for l in 0..da {
                                acc += s[(k * d + a, l * d + b)] * s[(l * d + c, k * d + e)];
                            }
                        }
                        block_traces[((a * d + b) * d + c) * d + e] = acc;
                    }
                }
            }
        }
        // ρ_B[b][c] = Σ_e Tr(X_be X_ec)
        let mut reduced = vec![Complex64::new(0.0, 0.0); d * d];
        for b in 0..d {
            for c in 0..d {
                reduced[b * d + c] = (0..d)
                    .map(|e| block_traces[((b * d + e) * d + e) * d + c])
                    .sum();
            }
        }
        let generators = basis
            .generators()
            .iter()
            .map(|g| g.as_matrix().as_slice().to_vec())
            .collect();
        Ok(Self {
            d,
            block_traces,
            reduced,
            generators,
        })
    }

    pub fn dimension(&self) -> usize {
        self.generators.len()
    }

    fn observable(&self, n: &[f64]) -> Vec<Complex64> {
        let mut k = vec![Complex64::new(0.0, 0.0); self.d * self.d];
        for (g, &x) in self.generators.iter().zip(n) {
            for (kv, gv) in k.iter_mut().zip(g) {
                *kv += gv * x;
            }
        }
        k
    }

    /// `Σ_{abce} Tr(X_ab X_ce) left_bc right_ea`.
    fn contract(&self, left: &[Complex64], right: &[Complex64]) -> Complex64 {
        let d = self.d;
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let l = left[b * d + c];
                    if l == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for e in 0..d {
                        acc +=
                            self.block_traces[((a * d + b) * d + c) * d + e] * l * right[e * d + a];
                    }
                }
            }
        }
        acc
    }

    /// `Tr(ρ_B A B)`.
    fn reduced_trace(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        let d = self.d;
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..d {
            for c in 0..d {
                let ab: Complex64 = (0..d).map(|k| a[c * d + k] * b[k * d + r]).sum();
                acc += self.reduced[r * d + c] * ab;
            }
        }
        acc
    }

    pub fn value(&self, n: &[f64]) -> f64 {
        let k = self.observable(n);
        (self.reduced_trace(&k, &k) - self.contract(&k, &k)).re
    }

    pub fn gradient(&self, n: &[f64]) -> Vec<f64> {
        let k = self.observable(n);
        self.generators
            .iter()
            .map(|g| {
                let anti = self.reduced_trace(&k, g) + self.reduced_trace(g, &k);
                (anti - self.contract(g, &k) * 2.0).re
            })
            .collect()
    }
}

struct Descent {
    value: f64,
    direction: Vec<f64>,
    converged: bool,
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
}

/// Riemannian gradient descent on the unit sphere with Armijo backtracking and
/// renormalization as the retraction.
fn descend(f: &LocalSkewFunctional, start: Vec<f64>, cfg: &MinimizerConfig) -> Descent {
    let mut n = start;
    normalize(&mut n);
    let mut value = f.value(&n);
    let mut step = 1.0;
    for _ in 0..cfg.max_iterations {
        let grad = f.gradient(&n);
        let radial: f64 = grad.iter().zip(&n).map(|(g, x)| g * x).sum();
        let tangent: Vec<f64> = grad.iter().zip(&n).map(|(g, x)| g - radial * x).collect();
        let slope: f64 = tangent.iter().map(|t| t * t).sum();
        if slope.sqrt() <= cfg.gradient_tolerance {
            return Descent {
                value,
                direction: n,
                converged: true,
            };
        }
        let mut t = step;
        let (candidate, candidate_value) = loop {
            let mut cand: Vec<f64> = n.iter().zip(&tangent).map(|(x, g)| x - t * g).collect();
            normalize(&mut cand);
            let cv = f.value(&cand);
            if cv <= value - 1e-4 * t * slope {
                break (cand, cv);
            }
            t *= 0.5;
            if t < 1e-20 {
                // No representable descent left.
                return Descent {
                    value,
                    direction: n,
                    converged: true,
                };
            }
        };
        let decrease = value - candidate_value;
        n = candidate;
        value = candidate_value;
        step = (2.0 * t).min(1e6);
        if decrease <= cfg.value_tolerance {
            return Descent {
                value,
                direction: n,
                converged: true,
            };
        }
    }
    Descent {
        value,
        direction: n,
        converged: false,
    }
}

/// Starting directions: the stationary qutrit directions (if enabled and
/// applicable) followed by `cfg.starts` Gaussian directions from a fixed seed.
fn starting_points(dim: usize, cfg: &MinimizerConfig) -> Vec<Vec<f64>> {
    let mut points = Vec::with_capacity(cfg.starts + 2);
    if cfg.warm_starts && dim == 8 {
        points.extend(
            stationary_directions()
                .iter()
                .map(|d| d.components().to_vec()),
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.starts {
        loop {
            let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
            if v.iter().map(|x| x * x).sum::<f64>() > 1e-12 {
                points.push(v);
                break;
            }
        }
    }
    points
}

/// Numeric LQU with the default configuration and `starts` random starts.
pub fn lqu_numeric(state: &Su2InvariantState, starts: usize) -> Result<LquResult> {
    lqu_numeric_with(
        state,
        &MinimizerConfig {
            starts,
            ..MinimizerConfig::default()
        },
    )
}

/// Minimum over all starts of the locally minimized skew information.
///
/// Starts run in parallel; the reduction takes the smallest value and, on
/// ties, the earliest start, so results do not depend on scheduling.
pub fn lqu_numeric_with(state: &Su2InvariantState, cfg: &MinimizerConfig) -> Result<LquResult> {
    let basis = GeneratorBasis::for_spin(state.jb())?;
    let functional = LocalSkewFunctional::new(&sqrt_density_matrix(state), &basis)?;
    let starts = starting_points(functional.dimension(), cfg);
    if starts.is_empty() {
        return Err(Error::OptimizerNoConvergence {
            iterations: 0,
            best: f64::NAN,
        });
    }
    let outcomes: Vec<Descent> = starts
        .into_par_iter()
        .map(|s| descend(&functional, s, cfg))
        .collect();
    let best = outcomes
        .iter()
        .enumerate()
        .min_by(|(i, a), (k, b)| a.value.total_cmp(&b.value).then(i.cmp(k)))
        .map(|(_, d)| d)
        .expect("at least one start");
    if !outcomes.iter().any(|d| d.converged) {
        return Err(Error::OptimizerNoConvergence {
            iterations: cfg.max_iterations,
            best: best.value,
        });
    }
    Ok(LquResult {
        value: best.value,
        method: LquMethod::NumericMin,
        direction: Some(ObservableDirection::normalized(best.direction.clone())?),
    })
}
