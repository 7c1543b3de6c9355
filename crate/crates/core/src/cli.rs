//! Command implementations behind the `su2-lqu` binary: single-point
//! evaluation, P and (P, Q) sweeps as CSV, and state validation.
//!
//! Everything here writes to a caller-supplied sink so the commands can be
//! driven from tests without spawning a process.

use std::fmt::Write as _;
use std::io::{self, Write};

use rayon::prelude::*;

use crate::angular_momentum::{allowed_totals, Spin};
use crate::error::Error;
use crate::linalg::{eigh, matrix_sqrt_psd};
use crate::lqu::{lqu_closed, lqu_numeric, lqu_w_matrix, stationary_direction_values, LquResult};
use crate::states::{
    build_state_spin_half, build_state_spin_one, check_su2_invariance,
    density_matrix_from_coefficients, sector_probability, sqrt_density_matrix,
    sqrt_density_matrix_from_coefficients, to_density_matrix, Su2InvariantState,
};

pub const CSV_HEADER: &str = "j_twice,p,q,lqu_closed,lqu_numeric,method_delta";

/// Residual threshold for `validate`.
pub const VALIDATION_TOL: f64 = 1e-10;
/// Closed form vs. W matrix, enforced by sweeps with `--method all`.
pub const W_AGREEMENT_TOL: f64 = 1e-10;
/// Closed form vs. numeric minimum, enforced by sweeps with `--method all`.
pub const NUMERIC_AGREEMENT_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Closed,
    Wmatrix,
    Numeric,
    All,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Domain(e.to_string())
        }
    }
}

/// Parses a probability written as a decimal or as `a/b`, rejecting values
/// outside `[0, 1]`.
pub fn parse_probability(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let value = match t.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n
                .trim()
                .parse()
                .map_err(|_| format!("not a number: {s:?}"))?;
            let d: f64 = d
                .trim()
                .parse()
                .map_err(|_| format!("not a number: {s:?}"))?;
            if d == 0.0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            n / d
        }
        None => t.parse().map_err(|_| format!("not a number: {s:?}"))?,
    };
    if !(0.0..=1.0).contains(&value) {
        return Err(format!("probability {value} is outside [0, 1]"));
    }
    Ok(value)
}

/// `%.12g`-style formatting: 12 significant digits, trailing zeros trimmed,
/// scientific notation outside `1e-5 ≤ |x| < 1e12`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One CSV row behind the LQU-vs-P curves and LQU-vs-(P, Q) surfaces.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub j_twice: u32,
    pub p: f64,
    pub q: Option<f64>,
    pub lqu_closed: f64,
    pub lqu_numeric: Option<f64>,
    pub method_delta: Option<f64>,
}

impl SweepRow {
    pub fn to_csv_line(&self) -> String {
        let opt = |v: Option<f64>| v.map(format_number).unwrap_or_default();
        format!(
            "{},{},{},{},{},{}",
            self.j_twice,
            format_number(self.p),
            opt(self.q),
            format_number(self.lqu_closed),
            opt(self.lqu_numeric),
            opt(self.method_delta),
        )
    }

    pub fn parse_csv_line(line: &str) -> Result<Self, String> {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(format!("expected 6 fields, found {}", fields.len()));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| format!("{s:?}: {e}"));
        let opt = |s: &str| {
            if s.is_empty() {
                Ok(None)
            } else {
                num(s).map(Some)
            }
        };
        Ok(Self {
            j_twice: fields[0]
                .parse()
                .map_err(|e| format!("{:?}: {e}", fields[0]))?,
            p: num(fields[1])?,
            q: opt(fields[2])?,
            lqu_closed: num(fields[3])?,
            lqu_numeric: opt(fields[4])?,
            method_delta: opt(fields[5])?,
        })
    }
}

pub fn write_csv(rows: &[SweepRow], out: &mut impl Write) -> io::Result<()> {
    let mut buf = String::with_capacity(64 * (rows.len() + 1));
    buf.push_str(CSV_HEADER);
    buf.push('\n');
    for row in rows {
        buf.push_str(&row.to_csv_line());
        buf.push('\n');
    }
    out.write_all(buf.as_bytes())
}

fn sweep_row(
    state: &Su2InvariantState,
    p: f64,
    q: Option<f64>,
    method: Method,
    starts: usize,
) -> Result<SweepRow, CliError> {
    let closed = lqu_closed(state)?.value;
    if method == Method::All && state.jb() == Spin::HALF {
        let w = lqu_w_matrix(state)?.value;
        if (w - closed).abs() > W_AGREEMENT_TOL {
            return Err(CliError::Numerical(format!(
                "W-matrix route {w} disagrees with closed form {closed} at P = {p}"
            )));
        }
    }
    let numeric = match method {
        Method::Numeric | Method::All => Some(lqu_numeric(state, starts)?.value),
        _ => None,
    };
    let delta = numeric.map(|n| (closed - n).abs());
    if method == Method::All {
        if let Some(d) = delta.filter(|&d| d > NUMERIC_AGREEMENT_TOL) {
            return Err(CliError::Numerical(format!(
                "numeric minimum differs from closed form by {d:e} at P = {p}, Q = {q:?}"
            )));
        }
    }
    Ok(SweepRow {
        j_twice: state.ja().twice(),
        p,
        q,
        lqu_closed: closed,
        lqu_numeric: numeric,
        method_delta: delta,
    })
}

fn check_sweep_args(steps: usize, method: Method) -> Result<(), CliError> {
    if steps < 2 {
        return Err(CliError::Domain(format!(
            "--steps must be at least 2, got {steps}"
        )));
    }
    if method == Method::Wmatrix {
        return Err(CliError::Domain(
            "sweeps report the closed form and optionally the numeric minimum; use --method closed, numeric or all"
                .into(),
        ));
    }
    Ok(())
}

/// Spin-j ⊗ spin-1/2 rows at `P = k/(steps-1)`, `k = 0..steps`.
pub fn sweep_p(
    j: Spin,
    steps: usize,
    method: Method,
    starts: usize,
) -> Result<Vec<SweepRow>, CliError> {
    check_sweep_args(steps, method)?;
    if j.twice() < 1 {
        return Err(CliError::Domain(format!("sweep-p needs j ≥ 1/2, got {j}")));
    }
    let last = (steps - 1) as f64;
    (0..steps)
        .into_par_iter()
        .map(|k| {
            let p = k as f64 / last;
            let state = build_state_spin_half(j, p)?;
            sweep_row(&state, p, None, method, starts)
        })
        .collect()
}

/// Spin-j ⊗ spin-1 rows over `P, Q ∈ {k/(steps-1)}` with `P + Q ≤ 1`, P-major.
pub fn sweep_pq(
    j: Spin,
    steps: usize,
    method: Method,
    starts: usize,
) -> Result<Vec<SweepRow>, CliError> {
    check_sweep_args(steps, method)?;
    if j.twice() < 2 {
        return Err(CliError::Domain(format!("sweep-pq needs j ≥ 1, got {j}")));
    }
    let last = steps - 1;
    let grid: Vec<(usize, usize)> = (0..steps)
        .flat_map(|kp| (0..steps - kp).map(move |kq| (kp, kq)))
        .collect();
    grid.into_par_iter()
        .map(|(kp, kq)| {
            let p = kp as f64 / last as f64;
            let q = kq as f64 / last as f64;
            let state = build_state_spin_one(j, p, q)?;
            sweep_row(&state, p, Some(q), method, starts)
        })
        .collect()
}

fn build_state(j: Spin, p: f64, q: Option<f64>) -> Result<Su2InvariantState, CliError> {
    Ok(match q {
        None => build_state_spin_half(j, p)?,
        Some(q) => build_state_spin_one(j, p, q)?,
    })
}

fn fixed(x: f64) -> String {
    let s = format!("{x:.12}");
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

/// Evaluates the requested routes at one point and renders a `key value` report.
pub fn compute(
    j: Spin,
    p: f64,
    q: Option<f64>,
    method: Method,
    starts: usize,
    out: &mut impl Write,
) -> Result<Vec<LquResult>, CliError> {
    let state = build_state(j, p, q)?;
    let mut report = String::new();
    let partner = state.jb();
    match q {
        None => writeln!(
            report,
            "state j={j} partner={partner} P={}",
            format_number(p)
        ),
        Some(q) => writeln!(
            report,
            "state j={j} partner={partner} P={} Q={}",
            format_number(p),
            format_number(q)
        ),
    }
    .expect("writing to a String");

    let mut results = Vec::new();
    if matches!(method, Method::Closed | Method::All) {
        results.push(lqu_closed(&state)?);
    }
    if matches!(method, Method::Wmatrix | Method::All) {
        match partner {
            Spin::HALF => results.push(lqu_w_matrix(&state)?),
            _ if method == Method::Wmatrix => {
                return Err(CliError::Domain(
                    "the W-matrix route applies only to a spin-1/2 partner (omit --q)".into(),
                ))
            }
            _ => {}
        }
    }
    if matches!(method, Method::Numeric | Method::All) {
        results.push(lqu_numeric(&state, starts)?);
    }

    for r in &results {
        write!(report, "{} {}", r.method, fixed(r.value)).expect("writing to a String");
        if let Some(n) = &r.direction {
            let comps: Vec<String> = n.components().iter().map(|&x| format_number(x)).collect();
            write!(report, " direction={}", comps.join(",")).expect("writing to a String");
        }
        report.push('\n');
    }
    if partner == Spin::ONE && method == Method::All {
        let (sz, quad) = stationary_direction_values(&state)?;
        writeln!(report, "stationary_sz {}", fixed(sz)).expect("writing to a String");
        writeln!(report, "stationary_quadrupole {}", fixed(quad)).expect("writing to a String");
    }
    out.write_all(report.as_bytes())?;
    Ok(results)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub residuals: Vec<(&'static str, f64)>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.residuals.iter().all(|&(_, r)| r <= VALIDATION_TOL)
    }

    pub fn worst(&self) -> f64 {
        self.residuals.iter().map(|&(_, r)| r).fold(0.0, f64::max)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (name, r) in &self.residuals {
            writeln!(s, "{name} {}", format_number(*r)).expect("writing to a String");
        }
        writeln!(s, "status {}", if self.passed() { "ok" } else { "fail" })
            .expect("writing to a String");
        s
    }
}

/// Structural residuals of the state at one point.
pub fn validate(j: Spin, p: f64, q: Option<f64>) -> Result<ValidationReport, CliError> {
    let state = build_state(j, p, q)?;
    let rho = to_density_matrix(&state);
    let root = sqrt_density_matrix(&state);

    let eig = eigh(&rho)?;
    let min_eig = eig.eigenvalues.first().copied().unwrap_or(0.0);
    let numeric_root = matrix_sqrt_psd(&rho)?;
    let squared = root.as_matrix().matmul(root.as_matrix());
    let coefficient_route = match q {
        None => density_matrix_from_coefficients(j, p)?.max_abs_diff(&rho),
        Some(q) => sqrt_density_matrix_from_coefficients(j, p, q)?.max_abs_diff(&root),
    };
    let mut round_trip: f64 = 0.0;
    for total in allowed_totals(state.ja(), state.jb()) {
        let back = sector_probability(&rho, state.ja(), state.jb(), total)?;
        let p_j = state.sector_prob(total).unwrap_or(0.0);
        round_trip = round_trip.max((back - p_j).abs());
    }

    Ok(ValidationReport {
        residuals: vec![
            ("trace", (rho.trace() - 1.0).abs()),
            ("hermiticity", rho.as_matrix().hermiticity_residual()),
            ("psd", (-min_eig).max(0.0)),
            (
                "su2_invariance",
                check_su2_invariance(&rho, state.ja(), state.jb())?,
            ),
            ("sqrt_squared", squared.max_abs_diff(rho.as_matrix())),
            ("sqrt_vs_eigen", root.max_abs_diff(&numeric_root)),
            ("coefficient_route", coefficient_route),
            ("sector_round_trip", round_trip),
        ],
    })
}
