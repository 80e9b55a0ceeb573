//! Batch commands behind the `monoqsp` binary.
//!
//! Every command streams line-delimited JSON records to the supplied writer and
//! ends with one [`CommandReport`]. Exit codes: 0 when every check passes, 1 when
//! a mathematical check fails, 2 for an invalid invocation.

use std::io::{self, Write};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use monoqsp::dihedral::{
    big_f, check_lemma2, enumerate_all, enumerate_even_class, interleaved_product,
    normal_form_product, orbit, orbit_sum, Sign, SignFunction,
};
use monoqsp::polymat::{verify_theorem, TheoremVerdict};
use monoqsp::qsp::{monomial_phases, residual_sweep};

/// Largest degree `check-lemmas` will sweep exhaustively (2ⁿ sign functions).
pub const MAX_LEMMA_DEGREE: usize = 20;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid invocation: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] monoqsp::Error),
    #[error("output error: {0}")]
    Io(#[from] io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Core(monoqsp::Error::EvenDegree(_) | monoqsp::Error::InvalidDegree(_)) => 2,
            CliError::Core(_) | CliError::Io(_) | CliError::Json(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Error => 2,
        }
    }
}

/// Final record of every command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommandReport {
    pub command: String,
    pub parameters: Value,
    pub verdict: Verdict,
    pub details: Value,
    pub wall_time_seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

fn emit<W: Write + ?Sized, T: Serialize>(out: &mut W, record: &T) -> Result<(), CliError> {
    serde_json::to_writer(&mut *out, record)?;
    writeln!(out)?;
    Ok(())
}

fn finish<W: Write + ?Sized>(
    out: &mut W,
    command: &str,
    parameters: Value,
    verdict: Verdict,
    details: Value,
    started: Instant,
) -> Result<CommandReport, CliError> {
    let report = CommandReport {
        command: command.to_string(),
        parameters,
        verdict,
        details,
        wall_time_seconds: started.elapsed().as_secs_f64(),
    };
    emit(out, &json!({ "record": "report", "report": &report }))?;
    Ok(report)
}

/// Writes the phase schedule for an odd degree.
pub fn cmd_angles<W: Write + ?Sized>(
    degree: usize,
    format: OutputFormat,
    out: &mut W,
) -> Result<(), CliError> {
    let schedule = monomial_phases(degree).map_err(|e| {
        CliError::Invalid(format!("{e}; the phases ω^i implement xⁿ only for odd n"))
    })?;
    match format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, &schedule)?;
            writeln!(out)?;
        }
        OutputFormat::Csv => out.write_all(schedule.to_csv().as_bytes())?,
    }
    Ok(())
}

/// Exact check that the top-left entry is `xⁿ` for every odd `n` in range
/// (and every even `n` with `include_even`).
pub fn cmd_verify_exact<W: Write + ?Sized>(
    n_min: usize,
    n_max: usize,
    include_even: bool,
    out: &mut W,
) -> Result<CommandReport, CliError> {
    let started = Instant::now();
    if n_min < 1 || n_min > n_max {
        return Err(CliError::Invalid(format!(
            "need 1 <= min <= max, got [{n_min}, {n_max}]"
        )));
    }
    let degrees: Vec<usize> = (n_min..=n_max)
        .filter(|n| include_even || n % 2 == 1)
        .collect();
    if degrees.is_empty() {
        return Err(CliError::Invalid(format!(
            "no odd degree in [{n_min}, {n_max}]; pass --include-even to check even degrees"
        )));
    }
    let mut failed = Vec::new();
    for &n in &degrees {
        let t = Instant::now();
        let verdict = verify_theorem(n)?;
        let elapsed = t.elapsed().as_secs_f64();
        match verdict {
            TheoremVerdict::Holds => emit(
                out,
                &json!({ "record": "case", "n": n, "verdict": Verdict::Pass, "elapsed_seconds": elapsed }),
            )?,
            TheoremVerdict::Fails { witness } => {
                failed.push(n);
                emit(
                    out,
                    &json!({
                        "record": "case",
                        "n": n,
                        "verdict": Verdict::Fail,
                        "elapsed_seconds": elapsed,
                        "witness": witness.to_string(),
                    }),
                )?;
            }
        }
    }
    let verdict = if failed.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    finish(
        out,
        "verify-exact",
        json!({ "min": n_min, "max": n_max, "include_even": include_even }),
        verdict,
        json!({ "checked": degrees.len(), "failed": failed }),
        started,
    )
}

/// Seeded numeric sweep of `|top-left − xⁿ|` over `x ∈ [−1, 1]`.
pub fn cmd_verify_numeric<W: Write + ?Sized>(
    degree: usize,
    samples: usize,
    seed: u64,
    tol: f64,
    out: &mut W,
) -> Result<CommandReport, CliError> {
    let started = Instant::now();
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(CliError::Invalid(format!(
            "tolerance must be finite and non-negative, got {tol}"
        )));
    }
    if samples == 0 {
        return Err(CliError::Invalid("--samples must be at least 1".into()));
    }
    let sweep = residual_sweep(degree, samples, seed)?;
    let verdict = if sweep.max_abs_error <= tol {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    finish(
        out,
        "verify-numeric",
        json!({ "degree": degree, "samples": samples, "seed": seed, "tol": tol }),
        verdict,
        json!({ "max_abs_error": sweep.max_abs_error, "argmax_x": sweep.argmax_x }),
        started,
    )
}

#[derive(Debug, Default, Serialize)]
struct Tally {
    identity: &'static str,
    checked: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new(identity: &'static str) -> Self {
        Tally {
            identity,
            ..Default::default()
        }
    }

    fn record(&mut self, ok: bool, f: &SignFunction) {
        self.checked += 1;
        if !ok {
            self.failures.push(f.to_string());
        }
    }
}

/// Exhaustive checks of the group-product normal form, the Γ identities and
/// the orbit-sum vanishing for one degree.
pub fn cmd_check_lemmas<W: Write + ?Sized>(
    degree: usize,
    out: &mut W,
) -> Result<CommandReport, CliError> {
    let started = Instant::now();
    let n = degree;
    if !(3..=MAX_LEMMA_DEGREE).contains(&n) {
        return Err(CliError::Invalid(format!(
            "degree must lie in [3, {MAX_LEMMA_DEGREE}], got {n}"
        )));
    }
    let odd = n % 2 == 1;
    let mut tallies = Vec::new();

    let mut normal_form = Tally::new("normal_form_equals_group_product");
    let mut parity = Tally::new("reflection_bit_zero_iff_even_class");
    for f in enumerate_all(n)? {
        let nf = normal_form_product(&f);
        normal_form.record(nf == interleaved_product(&f), &f);
        parity.record(!nf.refl() == f.is_even_class(), &f);
    }
    tallies.push(normal_form);
    tallies.push(parity);

    let even_class: Vec<SignFunction> = enumerate_even_class(n)?.collect();
    let mut star = Tally::new("gamma_star_negates");
    let mut shift = Tally::new("gamma_shift_law");
    let mut reflected = Tally::new("gamma_reflected_shift");
    let mut f_odd = Tally::new("big_f_odd");
    let mut f_zero = Vec::new();
    for f in &even_class {
        for k in 0..n {
            let r = check_lemma2(f, k)?;
            star.record(r.star_negates, f);
            reflected.record(r.reflected_shift, f);
            if let Some(ok) = r.shift_law {
                shift.record(ok, f);
            }
        }
        let big = big_f(f);
        if odd {
            f_odd.record(big.rem_euclid(2) == 1, f);
        } else if big == 0 {
            f_zero.push(f.to_string());
        }
    }
    tallies.push(star);
    if odd {
        tallies.push(shift);
        tallies.push(f_odd);
    }
    tallies.push(reflected);

    if odd {
        let mut vanish = Tally::new("orbit_sum_vanishes");
        let mut fixed = Tally::new("orbit_sum_identity_for_constant");
        let mut seen = std::collections::BTreeSet::new();
        for f in &even_class {
            if seen.contains(f) {
                continue;
            }
            // The sum depends only on the orbit; every member is tallied.
            let sum = orbit_sum(f)?;
            for g in orbit(f) {
                if g.is_constant() {
                    fixed.record(sum.is_identity(), &g);
                } else {
                    vanish.record(sum.is_zero(), &g);
                }
                seen.insert(g);
            }
        }
        tallies.push(vanish);
        tallies.push(fixed);
    }

    for t in &tallies {
        emit(out, &json!({ "record": "identity", "n": n, "tally": t }))?;
    }
    if !odd {
        let minus_one = SignFunction::constant(n, Sign::Minus)?;
        emit(
            out,
            &json!({
                "record": "known even-n degeneracy",
                "n": n,
                "big_f_zero_witnesses": f_zero,
                "constant_minus_one_in_even_class": minus_one.is_even_class(),
            }),
        )?;
    }

    let failures: Vec<Value> = tallies
        .iter()
        .filter(|t| !t.failures.is_empty())
        .map(|t| json!({ "identity": t.identity, "functions": t.failures }))
        .collect();
    let verdict = if failures.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    finish(
        out,
        "check-lemmas",
        json!({ "degree": n }),
        verdict,
        json!({
            "even_class_size": even_class.len(),
            "counts": tallies.iter().map(|t| json!({ "identity": t.identity, "checked": t.checked })).collect::<Vec<_>>(),
            "failures": failures,
            "big_f_zero_witnesses": f_zero,
        }),
        started,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(
        f: impl FnOnce(&mut Vec<u8>) -> Result<CommandReport, CliError>,
    ) -> (CommandReport, String) {
        let mut buf = Vec::new();
        let report = f(&mut buf).unwrap();
        (report, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn angles_rejects_even_degree() {
        let err = cmd_angles(4, OutputFormat::Csv, &mut Vec::new()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("odd"));
    }

    #[test]
    fn verify_exact_argument_checks() {
        assert_eq!(
            cmd_verify_exact(0, 3, false, &mut Vec::new())
                .unwrap_err()
                .exit_code(),
            2
        );
        assert_eq!(
            cmd_verify_exact(5, 3, false, &mut Vec::new())
                .unwrap_err()
                .exit_code(),
            2
        );
        assert_eq!(
            cmd_verify_exact(2, 2, false, &mut Vec::new())
                .unwrap_err()
                .exit_code(),
            2
        );
    }

    #[test]
    fn verify_exact_even_witness() {
        let (report, text) = run(|w| cmd_verify_exact(2, 2, true, w));
        assert_eq!(report.verdict, Verdict::Fail);
        assert!(text.contains("[-1] x^0 y^2 + [-1] x^2 y^0"));
    }

    #[test]
    fn numeric_tolerance_floor() {
        let (report, _) = run(|w| cmd_verify_numeric(3, 1000, 42, 1e-18, w));
        assert_eq!(report.verdict, Verdict::Fail);
        assert!(cmd_verify_numeric(3, 10, 42, -1.0, &mut Vec::new()).is_err());
        assert_eq!(
            cmd_verify_numeric(4, 10, 42, 1.0, &mut Vec::new())
                .unwrap_err()
                .exit_code(),
            2
        );
    }

    #[test]
    fn lemma_degree_bounds() {
        assert_eq!(
            cmd_check_lemmas(2, &mut Vec::new())
                .unwrap_err()
                .exit_code(),
            2
        );
        assert_eq!(
            cmd_check_lemmas(21, &mut Vec::new())
                .unwrap_err()
                .exit_code(),
            2
        );
    }
}
