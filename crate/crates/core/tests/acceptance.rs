//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use su2_lqu::angular_momentum::{allowed_totals, coupled_vector, projector, spin_operators};
use su2_lqu::cli::{self, Method, SweepRow};
use su2_lqu::linalg::{ComplexMatrix, HermitianMatrix};
use su2_lqu::lqu::{
    local_observable, lqu_closed, lqu_formula_spin_half, lqu_formula_spin_one, lqu_numeric,
    lqu_numeric_with, lqu_w_matrix, skew_information, stationary_direction_values, w_matrix,
    MinimizerConfig,
};
use su2_lqu::states::{build_state_spin_half, build_state_spin_one, sqrt_density_matrix};
use su2_lqu::{GeneratorBasis, Spin};

struct Check {
    label: &'static str,
    passed: bool,
    detail: String,
}

fn check(label: &'static str, passed: bool, detail: String) -> Check {
    Check {
        label,
        passed,
        detail,
    }
}

fn spin(twice: u32) -> Spin {
    Spin::from_twice(twice)
}

fn spins(twice: &[u32]) -> Vec<Spin> {
    twice.iter().map(|&t| spin(t)).collect()
}

fn p_grid(points: usize) -> Vec<f64> {
    (0..points)
        .map(|k| k as f64 / (points - 1) as f64)
        .collect()
}

fn simplex(step_count: usize) -> Vec<(f64, f64)> {
    let n = step_count as f64;
    (0..=step_count)
        .flat_map(|kp| (0..=step_count - kp).map(move |kq| (kp as f64 / n, kq as f64 / n)))
        .collect()
}

fn werner_endpoint() -> Vec<Check> {
    let v = lqu_formula_spin_half(Spin::HALF, 1.0).unwrap();
    vec![check(
        "formula(1/2, P=1) = 1",
        (v - 1.0).abs() <= 1e-12,
        format!("value {v:.15}"),
    )]
}

fn zero_locus() -> Vec<Check> {
    let mut worst = [0.0f64; 3];
    for j in spins(&[1, 2, 3, 4, 5, 10, 20]) {
        let p = j.value() / (2.0 * j.value() + 1.0);
        let s = build_state_spin_half(j, p).unwrap();
        let values = [
            lqu_closed(&s).unwrap().value,
            lqu_w_matrix(&s).unwrap().value,
            lqu_numeric(&s, 64).unwrap().value,
        ];
        for (w, v) in worst.iter_mut().zip(values) {
            *w = w.max(v.abs());
        }
    }
    ["closed", "w_matrix", "numeric"]
        .into_iter()
        .zip(worst)
        .map(|(name, w)| {
            let label = match name {
                "closed" => "closed form at P = j/(2j+1)",
                "w_matrix" => "1 − λmax(W) at P = j/(2j+1)",
                _ => "numeric minimum at P = j/(2j+1)",
            };
            check(label, w <= 1e-12, format!("max |LQU| {w:.3e}"))
        })
        .collect()
}

fn spin_half_grid() -> Vec<(Spin, f64)> {
    let mut out = Vec::new();
    for j in spins(&[1, 2, 3, 5, 10, 101]) {
        for p in p_grid(21) {
            out.push((j, p));
        }
    }
    out
}

fn three_way() -> Vec<Check> {
    let (mut dw, mut dn) = (0.0f64, 0.0f64);
    for (j, p) in spin_half_grid() {
        let s = build_state_spin_half(j, p).unwrap();
        let formula = lqu_formula_spin_half(j, p).unwrap();
        dw = dw.max((formula - lqu_w_matrix(&s).unwrap().value).abs());
        dn = dn.max((formula - lqu_numeric(&s, 64).unwrap().value).abs());
    }
    vec![
        check(
            "|formula − (1 − λmax W)| ≤ 1e-10",
            dw <= 1e-10,
            format!("max {dw:.3e}"),
        ),
        check(
            "|formula − numeric| ≤ 1e-6",
            dn <= 1e-6,
            format!("max {dn:.3e}"),
        ),
    ]
}

fn isotropy() -> Vec<Check> {
    let mut worst = 0.0f64;
    for (j, p) in spin_half_grid() {
        let root = sqrt_density_matrix(&build_state_spin_half(j, p).unwrap());
        worst = worst.max(w_matrix(&root, j).unwrap().isotropy_residual());
    }
    vec![check(
        "‖W − (Tr W/3)I‖max ≤ 1e-10",
        worst <= 1e-10,
        format!("max {worst:.3e}"),
    )]
}

fn spin_one_agreement() -> Vec<Check> {
    let random_only = MinimizerConfig {
        warm_starts: false,
        ..MinimizerConfig::default()
    };
    let (mut d_formula, mut d_stationary, mut d_random) = (0.0f64, 0.0f64, 0.0f64);
    let mut points = 0;
    for j in spins(&[2, 3, 5, 20]) {
        for (p, q) in simplex(10) {
            let s = build_state_spin_one(j, p, q).unwrap();
            let formula = lqu_formula_spin_one(j, p, q).unwrap();
            let numeric = lqu_numeric(&s, 64).unwrap().value;
            let (sz, quad) = stationary_direction_values(&s).unwrap();
            d_formula = d_formula.max((formula - numeric).abs());
            d_stationary = d_stationary.max((numeric - sz).abs().min((numeric - quad).abs()));
            let random = lqu_numeric_with(&s, &random_only).unwrap().value;
            d_random = d_random.max((formula - random).abs());
            points += 1;
        }
    }
    vec![
        check(
            "|formula − numeric over S⁷| ≤ 1e-6",
            d_formula <= 1e-6,
            format!("max {d_formula:.3e} over {points} points"),
        ),
        check(
            "numeric matches a stationary value ≤ 1e-6",
            d_stationary <= 1e-6,
            format!("max {d_stationary:.3e}"),
        ),
        check(
            "random starts only: |formula − numeric| ≤ 1e-6",
            d_random <= 1e-6,
            format!("max {d_random:.3e}"),
        ),
    ]
}

fn curve_checks(j: Spin, rows: &[SweepRow], out: &mut Vec<Check>, label: &'static str) {
    let values: Vec<f64> = rows.iter().map(|r| r.lqu_closed).collect();
    let star = j.value() / (2.0 * j.value() + 1.0);
    let argmin = (0..values.len())
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .unwrap();
    let nearest = (0..rows.len())
        .min_by(|&a, &b| {
            (rows[a].p - star)
                .abs()
                .total_cmp(&(rows[b].p - star).abs())
        })
        .unwrap();
    let unimodal = values[..=argmin].windows(2).all(|w| w[0] > w[1])
        && values[argmin..].windows(2).all(|w| w[0] < w[1]);
    let at_star = lqu_formula_spin_half(j, star).unwrap();
    out.push(check(
        label,
        unimodal && argmin == nearest && at_star.abs() <= 1e-12,
        format!(
            "j={j}: argmin P={} (nearest to {star:.6}), unimodal={unimodal}, LQU(P*)={at_star:.3e}",
            rows[argmin].p
        ),
    ));
}

fn figure_data() -> Vec<Check> {
    let mut out = Vec::new();
    for j in spins(&[1, 5, 101, 2, 10, 200]) {
        let rows = cli::sweep_p(j, 201, Method::Closed, 64).unwrap();
        curve_checks(j, &rows, &mut out, "sweep-p: single zero at j/(2j+1)");
        if j == Spin::HALF {
            let end = rows.last().unwrap().lqu_closed;
            out.push(check(
                "sweep-p j=1/2: LQU(P=1) = 1",
                (end - 1.0).abs() <= 1e-12,
                format!("value {end:.15}"),
            ));
        }
        if j == spin(101) {
            let n = rows.len();
            let (worst, at) = (0..n)
                .map(|k| {
                    (
                        (rows[k].lqu_closed - rows[n - 1 - k].lqu_closed).abs(),
                        rows[k].p,
                    )
                })
                .fold((0.0f64, 0.0), |a, b| if b.0 > a.0 { b } else { a });
            let inside = (0..n)
                .filter(|&k| (rows[k].lqu_closed - rows[n - 1 - k].lqu_closed).abs() < 0.01)
                .map(|k| rows[k].p)
                .collect::<Vec<_>>();
            out.push(check(
                "sweep-p j=101/2: |U(P) − U(1−P)| < 0.01",
                worst < 0.01,
                format!(
                    "max {worst:.6} at P={at}; bound holds only for P in [{}, {}]; U(0) − U(1) = 4/(3(2j+1)) = {:.6}",
                    inside.first().unwrap(),
                    inside.last().unwrap(),
                    4.0 / (3.0 * 102.0)
                ),
            ));
        }
    }
    for j in spins(&[2, 5, 20]) {
        let d = 3 * (j.twice() + 1);
        let rows = cli::sweep_pq(j, d as usize + 1, Method::Closed, 64).unwrap();
        let (p0, q0) = (
            (j.twice() - 1) as f64 / d as f64,
            (j.twice() + 1) as f64 / d as f64,
        );
        let row = rows
            .iter()
            .find(|r| (r.p - p0).abs() < 1e-12 && (r.q.unwrap() - q0).abs() < 1e-12);
        let (passed, detail) = match row {
            Some(r) => (
                r.lqu_closed.abs() <= 1e-10,
                format!("j={j}: LQU({p0:.6}, {q0:.6}) = {:.3e}", r.lqu_closed),
            ),
            None => (
                false,
                format!("j={j}: grid misses the maximally mixed point"),
            ),
        };
        let nonneg = rows.iter().all(|r| r.lqu_closed >= -1e-15);
        out.push(check(
            "sweep-pq: zero at the maximally mixed point",
            passed && nonneg,
            detail,
        ));
    }
    out
}

fn structural() -> Vec<Check> {
    let mut cg: f64 = 0.0;
    let mut proj: f64 = 0.0;
    let mut casimir: f64 = 0.0;
    for j2 in [Spin::HALF, Spin::ONE] {
        for tj in 1..=21u32 {
            let j1 = spin(tj);
            let d = j1.dim() * j2.dim();
            let totals = allowed_totals(j1, j2);
            // Orthonormality of all coupled vectors.
            let vectors: Vec<(Spin, Vec<f64>)> = totals
                .iter()
                .flat_map(|&t| t.magnetic_values().map(move |m| (t, m)))
                .map(|(t, m)| (t, coupled_vector(j1, j2, t, m).unwrap().to_dense()))
                .collect();
            assert_eq!(vectors.len(), d);
            for (a, (_, va)) in vectors.iter().enumerate() {
                for (b, (_, vb)) in vectors.iter().enumerate().skip(a) {
                    let dot: f64 = va.iter().zip(vb).map(|(x, y)| x * y).sum();
                    cg = cg.max((dot - if a == b { 1.0 } else { 0.0 }).abs());
                }
            }
            // J² eigenvalue check against single-particle operators.
            if tj <= 9 {
                let ja = spin_operators(j1);
                let jb = spin_operators(j2);
                let ia = HermitianMatrix::identity(j1.dim());
                let ib = HermitianMatrix::identity(j2.dim());
                let mut j_sq = ComplexMatrix::zeros(d);
                for k in 0..3 {
                    let t = &ja[k].kron(&ib).into_inner() + &ia.kron(&jb[k]).into_inner();
                    j_sq = &j_sq + &t.matmul(&t);
                }
                for (t, v) in &vectors {
                    let jj = t.value() * (t.value() + 1.0);
                    for r in 0..d {
                        let av: Complex64 = (0..d).map(|c| j_sq[(r, c)] * v[c]).sum();
                        casimir = casimir.max((av - jj * v[r]).norm());
                    }
                }
            }
            // Projectors: idempotent, mutually orthogonal, complete.
            let ps: Vec<HermitianMatrix> = totals
                .iter()
                .map(|&t| projector(j1, j2, t).unwrap())
                .collect();
            let mut sum = ComplexMatrix::zeros(d);
            for (a, pa) in ps.iter().enumerate() {
                sum = &sum + pa.as_matrix();
                for pb in &ps[a..] {
                    let prod = pa.as_matrix().matmul(pb.as_matrix());
                    let expect = if std::ptr::eq(pa, pb) {
                        pa.as_matrix().clone()
                    } else {
                        ComplexMatrix::zeros(d)
                    };
                    proj = proj.max(prod.max_abs_diff(&expect));
                }
            }
            proj = proj.max(sum.max_abs_diff(&ComplexMatrix::identity(d)));
        }
    }

    let mut state_worst: f64 = 0.0;
    let mut worst_name = "";
    let mut states = 0;
    let mut record = |report: cli::ValidationReport| {
        for (name, r) in report.residuals {
            if r > state_worst {
                state_worst = r;
                worst_name = name;
            }
        }
        states += 1;
    };
    for tj in 1..=21u32 {
        for p in p_grid(11) {
            record(cli::validate(spin(tj), p, None).unwrap());
        }
    }
    for tj in 2..=21u32 {
        for (p, q) in simplex(5) {
            record(cli::validate(spin(tj), p, Some(q)).unwrap());
        }
    }
    vec![
        check("coupled basis orthonormal (2j ≤ 21, partner 1/2 and 1)", cg <= 1e-12, format!("max {cg:.3e}")),
        check("coupled vectors are J² eigenvectors", casimir <= 1e-10, format!("max {casimir:.3e}")),
        check("projectors idempotent, orthogonal, complete", proj <= 1e-12, format!("max {proj:.3e}")),
        check(
            "states: trace/Hermitian/PSD/invariance, (√ρ)² = ρ, √ρ vs eigen, coefficient routes ≤ 1e-10",
            state_worst <= 1e-10,
            format!("{states} states, worst {worst_name} {state_worst:.3e}"),
        ),
    ]
}

fn random_hermitian(rng: &mut ChaCha8Rng, d: usize) -> HermitianMatrix {
    let m = ComplexMatrix::from_fn(d, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    HermitianMatrix::symmetrized(&m)
}

fn skew_properties() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);

    let mut commuting: f64 = 0.0;
    for _ in 0..200 {
        let d = rng.random_range(1..=8);
        let p: Vec<f64> = (0..d).map(|_| rng.random_range(0.0..1.0)).collect();
        let total: f64 = p.iter().sum();
        let root: Vec<f64> = p.iter().map(|x| (x / total).sqrt()).collect();
        let k: Vec<f64> = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
        let v = skew_information(
            &HermitianMatrix::from_real_diagonal(&root),
            &HermitianMatrix::from_real_diagonal(&k),
        )
        .unwrap();
        commuting = commuting.max(v.abs());
    }
    let mixed = HermitianMatrix::identity(6).scale(1.0 / 6f64.sqrt());
    for _ in 0..20 {
        let k = random_hermitian(&mut rng, 6);
        commuting = commuting.max(skew_information(&mixed, &k).unwrap().abs());
    }

    let mut variance_gap: f64 = 0.0;
    for _ in 0..200 {
        let d = rng.random_range(2..=8);
        let raw: Vec<Complex64> = (0..d)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let psi: Vec<Complex64> = raw.iter().map(|z| z / norm).collect();
        let rho =
            HermitianMatrix::symmetrized(&ComplexMatrix::from_fn(d, |r, c| psi[r] * psi[c].conj()));
        let k = random_hermitian(&mut rng, d);
        let kpsi: Vec<Complex64> = (0..d)
            .map(|r| (0..d).map(|c| k[(r, c)] * psi[c]).sum())
            .collect();
        let mean: f64 = psi.iter().zip(&kpsi).map(|(a, b)| (a.conj() * b).re).sum();
        let second: f64 = kpsi.iter().map(|z| z.norm_sqr()).sum();
        variance_gap =
            variance_gap.max((skew_information(&rho, &k).unwrap() - (second - mean * mean)).abs());
    }

    // W_ii against the skew information along the same axis.
    let paulis = GeneratorBasis::pauli();
    let (mut literal, mut actual): (f64, f64) = (0.0, 0.0);
    let mut literal_at = String::new();
    for (j, p) in spin_half_grid() {
        let root = sqrt_density_matrix(&build_state_spin_half(j, p).unwrap());
        let w = w_matrix(&root, j).unwrap();
        for (i, g) in paulis.generators().iter().enumerate() {
            let skew = skew_information(&root, &local_observable(j, g)).unwrap();
            let gap = (w.0[i][i] - (1.0 - 2.0 * skew)).abs();
            if gap > literal {
                literal = gap;
                literal_at = format!("j={j}, P={p}, i={i}: W_ii={:.6}, I={skew:.6}", w.0[i][i]);
            }
            actual = actual.max((w.0[i][i] - (1.0 - skew)).abs());
        }
    }
    vec![
        check(
            "zero on commuting pairs",
            commuting <= 1e-12,
            format!("max |I| {commuting:.3e}"),
        ),
        check(
            "pure-state variance identity ≤ 1e-10",
            variance_gap <= 1e-10,
            format!("max gap {variance_gap:.3e}"),
        ),
        check(
            "W_ii = 1 − 2I(ρ, I⊗σ_i) ≤ 1e-12",
            literal <= 1e-12,
            format!("max gap {literal:.6} ({literal_at})"),
        ),
        check(
            "W_ii = 1 − I(ρ, I⊗σ_i) ≤ 1e-12 (identity that holds)",
            actual <= 1e-12,
            format!("max gap {actual:.3e}"),
        ),
    ]
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Vec<Check>);
    let criteria: [Criterion; 8] = [
        ("Werner endpoint", werner_endpoint),
        ("zero locus", zero_locus),
        ("three-way agreement, partner 1/2", three_way),
        ("W isotropy", isotropy),
        ("two-way agreement, partner 1", spin_one_agreement),
        ("figure data", figure_data),
        ("structural invariants", structural),
        ("skew-information properties", skew_properties),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let checks = run();
        let ok = checks.iter().all(|c| c.passed);
        let status = if ok { "PASS" } else { "FAIL" };
        println!(
            "{status} criterion {}: {name} ({:.2} s)",
            n + 1,
            start.elapsed().as_secs_f64()
        );
        for c in &checks {
            println!(
                "    [{}] {}: {}",
                if c.passed { "ok" } else { "FAIL" },
                c.label,
                c.detail
            );
        }
        if !ok {
            failed += 1;
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
