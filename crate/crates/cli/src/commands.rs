use std::time::Instant;

use conediag::analysis::{analyze, AnalysisOptions};
use conediag::asympt::{AsymptoticEstimate, Verdict};
use conediag::polycore::{rat_to_string, Polynomial};
use conediag::series::{
    diagonal_of, expand_power, positivity_scan, Backend, DiagonalSequence, ExpandOptions, Param,
    QuasiRationalSpec, SeriesError,
};
use num_traits::Signed;

use crate::input::{parse_beta, InputFile};
use crate::report::{
    from_analysis, AnalysisReport, InputEcho, ScanReport, Section, ValidationReport, ValidationRow, SCHEMA_VERSION,
};
use crate::{CliError, Command, JobConfig, EXIT_DEGENERATE, EXIT_HYPOTHESIS, EXIT_OK};

/// Validation orders when none are given; the box holds `(n+1)^d` values.
pub fn default_orders(dim: usize) -> Vec<u64> {
    match dim {
        0..=2 => vec![10, 20, 40, 80],
        3 => vec![10, 20, 30, 60],
        4 => vec![8, 16, 24],
        _ => vec![2, 4, 6],
    }
}

pub fn default_scan_depth(dim: usize) -> usize {
    match dim {
        0..=2 => 200,
        3 => 40,
        4 => 20,
        _ => 8,
    }
}

struct Job {
    variables: Vec<String>,
    poly: Polynomial,
    beta: Param,
}

fn load(cfg: &JobConfig) -> Result<Job, CliError> {
    let file = InputFile::load(&cfg.input)?;
    let poly = file.polynomial()?;
    let beta = match (&cfg.beta, &file.beta) {
        (Some(b), _) => parse_beta(b)?,
        (None, Some(b)) => b.to_param()?,
        (None, None) => return Err(CliError::Input("beta missing from both the input file and --beta".into())),
    };
    Ok(Job {
        variables: file.variables,
        poly,
        beta,
    })
}

fn exit_code(v: &Verdict) -> i32 {
    if v.is_degenerate() {
        EXIT_DEGENERATE
    } else if v.is_hypothesis_failure() {
        EXIT_HYPOTHESIS
    } else {
        EXIT_OK
    }
}

fn series_error(e: SeriesError) -> CliError {
    CliError::Input(e.to_string())
}

fn diagonal(spec: &QuasiRationalSpec, n: usize, backend: Backend) -> Result<DiagonalSequence, CliError> {
    let opts = ExpandOptions {
        backend,
        ..ExpandOptions::default()
    };
    let series = expand_power(spec, &vec![n; spec.dim()], &opts).map_err(series_error)?;
    diagonal_of(&series).map_err(series_error)
}

fn analyze_job(cfg: &JobConfig, job: &Job) -> Result<AnalysisReport, CliError> {
    let opts = AnalysisOptions::seeded(cfg.samples, cfg.seed);
    let a = analyze(&job.poly, job.beta.clone(), &opts).map_err(|e| CliError::Input(e.to_string()))?;
    let mut report = from_analysis(cfg.command.name(), &job.variables, &job.poly, &a);
    report.exit_code = exit_code(&a.verdict);
    if cfg.command == Command::Validate {
        report.validation = match &a.estimate {
            Ok(est) => {
                let t = Instant::now();
                let v = validate(cfg, &a.spec, est)?;
                report.timings.insert("validate".into(), t.elapsed().as_secs_f64());
                Section::Ok(v)
            }
            Err(e) => Section::skipped(format!("no estimate: {e}")),
        };
    }
    Ok(report)
}

fn validate(cfg: &JobConfig, spec: &QuasiRationalSpec, est: &AsymptoticEstimate) -> Result<ValidationReport, CliError> {
    let mut orders = cfg.orders.clone().unwrap_or_else(|| default_orders(spec.dim()));
    orders.sort_unstable();
    orders.dedup();
    let max = *orders.last().ok_or_else(|| CliError::Input("empty validation order list".into()))?;
    let seq = diagonal(spec, max as usize, cfg.backend)?;
    let backend = seq.values().backend();
    let rows: Vec<ValidationRow> = orders
        .iter()
        .map(|&n| {
            let (empirical, ratio) = match seq.get_exact(n as usize) {
                Some(q) => (rat_to_string(q), est.ratio(q, n)),
                None => {
                    let x = seq.get_f64(n as usize);
                    (format!("{x:?}"), est.ratio_f64(x, n))
                }
            };
            let singular = n == 0 && est.alpha.to_f64() != 0.0;
            ValidationRow {
                n,
                empirical,
                empirical_decimal: seq.get_f64(n as usize),
                ln_abs_predicted: if singular { 0.0 } else { est.ln_abs_predicted(n) },
                predicted: if singular { 0.0 } else { est.predicted(n) },
                ratio: (!singular).then_some(ratio),
            }
        })
        .collect();
    let errors: Vec<f64> = rows
        .iter()
        .filter(|r| r.n >= 1)
        .filter_map(|r| r.ratio.map(|x| (x - 1.0).abs()))
        .collect();
    Ok(ValidationReport {
        backend: match backend {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
        .into(),
        monotone_tail: errors.windows(2).all(|w| w[1] <= w[0]),
        rows,
    })
}

fn scan_job(cfg: &JobConfig, job: &Job) -> Result<AnalysisReport, CliError> {
    if job.beta.as_exact().is_none() {
        return Err(CliError::Input("scan needs a rational beta".into()));
    }
    if cfg.backend != Backend::Exact {
        return Err(CliError::Input("scan decides signs exactly; use --backend exact".into()));
    }
    let (normalized, constant) = job.poly.normalize_constant().map_err(|e| CliError::Input(e.to_string()))?;
    let spec = QuasiRationalSpec::new(normalized, job.beta.clone()).map_err(series_error)?;
    let depth = cfg.scan_depth.unwrap_or_else(|| default_scan_depth(spec.dim()));
    let t = Instant::now();
    let seq = diagonal(&spec, depth, Backend::Exact)?;
    let elapsed = t.elapsed().as_secs_f64();
    let last_nonpositive = (0..seq.len())
        .rev()
        .find(|&n| seq.get_exact(n).is_some_and(|v| !v.is_positive()));
    Ok(AnalysisReport {
        schema: SCHEMA_VERSION,
        command: cfg.command.name().into(),
        input: InputEcho {
            variables: job.variables.clone(),
            polynomial: job.poly.to_text(&job.variables),
            normalized: spec.poly().to_text(&job.variables),
            input_constant: rat_to_string(&constant),
            beta: job.beta.to_string(),
            dim: spec.dim(),
        },
        cone_point: Section::skipped("not requested"),
        scaled: Section::skipped("not requested"),
        smooth_critical: Section::skipped("not requested"),
        certificate: Section::skipped("not requested"),
        quadratic: Section::skipped("not requested"),
        estimate: Section::skipped("not requested"),
        verdict: Section::skipped("not requested"),
        validation: Section::skipped("not requested"),
        scan: Section::Ok(ScanReport {
            depth,
            first_nonpositive: positivity_scan(&seq),
            last_nonpositive,
            diagonal: (0..seq.len()).map(|n| seq.values().value_string(n)).collect(),
        }),
        exit_code: EXIT_OK,
        timings: [("scan".to_string(), elapsed)].into_iter().collect(),
    })
}

pub fn cmd_analyze(cfg: &JobConfig) -> Result<AnalysisReport, CliError> {
    analyze_job(&JobConfig { command: Command::Analyze, ..cfg.clone() }, &load(cfg)?)
}

pub fn cmd_validate(cfg: &JobConfig) -> Result<AnalysisReport, CliError> {
    analyze_job(&JobConfig { command: Command::Validate, ..cfg.clone() }, &load(cfg)?)
}

pub fn cmd_scan(cfg: &JobConfig) -> Result<AnalysisReport, CliError> {
    scan_job(&JobConfig { command: Command::Scan, ..cfg.clone() }, &load(cfg)?)
}

pub fn run(cfg: &JobConfig) -> Result<AnalysisReport, CliError> {
    match cfg.command {
        Command::Analyze => cmd_analyze(cfg),
        Command::Validate => cmd_validate(cfg),
        Command::Scan => cmd_scan(cfg),
    }
}
