//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command as Process;
use std::time::{Duration, Instant};

use conediag::analysis::{analyze, AnalysisOptions};
use conediag::asympt::{congruence_diagonalize, dual_form, inertia, log_hessian, RatMatrix, VerdictStatus};
use conediag::geometry::{
    certify_minimality, find_cone_point, pattern_lemma_check, CertificateStatus, ConePoint, FalsifierOptions,
    MultiplicityEvidence, PatternResult, SearchPath,
};
use conediag::polycore::{parse_polynomial, rat, rat_int, rat_to_f64, Polynomial, Rat};
use conediag::series::{
    brute_force_oracle, cauchy_coefficient, expand_power, ExpandOptions, Param, QuasiRationalSpec,
};
use conediag_cli::{cmd_scan, cmd_validate, report::AnalysisReport, Command, JobConfig};
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EX1: &str = "1 - (Z1+Z2+Z3) + 3/4*(Z1*Z2+Z1*Z3+Z2*Z3)";
const EX2: &str = "1 - (Z1+Z2+Z3+Z4) + 64/27*(Z1*Z2*Z3+Z1*Z2*Z4+Z1*Z3*Z4+Z2*Z3*Z4)";

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn poly(text: &str, d: usize) -> Polynomial {
    parse_polynomial(text, &Polynomial::default_variables(d)).unwrap()
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn job(command: Command, file: &str, beta: &str) -> JobConfig {
    JobConfig {
        beta: Some(beta.into()),
        ..JobConfig::new(command, data(file))
    }
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs()
}

fn ratio_of(r: &AnalysisReport, n: u64) -> Result<f64, String> {
    let v = r.validation.ok().ok_or("validation skipped")?;
    v.rows
        .iter()
        .find(|row| row.n == n)
        .and_then(|row| row.ratio)
        .ok_or_else(|| format!("no ratio for n = {n}"))
}

/// Shared checks of the exact quadratic data and the estimate.
fn check_report(
    r: &AnalysisReport,
    cone: &str,
    inertia: [usize; 3],
    qstar_one: &str,
    c: f64,
    rho: &str,
    alpha: &str,
) -> Result<(), String> {
    let cp = r.cone_point.ok().ok_or("no cone point")?;
    let d = r.input.dim;
    ensure!(cp.exact.as_deref() == Some(&vec![cone.to_string(); d][..]), "cone point {:?}", cp.exact);
    let scaled = r.scaled.ok().ok_or("no scaled form")?;
    ensure!(scaled.cone_point == vec!["1".to_string(); d], "scaled cone {:?}", scaled.cone_point);
    let q = r.quadratic.ok().ok_or("no quadratic data")?;
    ensure!(q.inertia == inertia, "inertia {:?}", q.inertia);
    ensure!(q.qstar_one.as_deref() == Some(qstar_one), "q*(1) = {:?}", q.qstar_one);
    let e = r.estimate.ok().ok_or("no estimate")?;
    ensure!(close(e.c_full_decimal, c, 1e-12), "C = {} vs {c}", e.c_full_decimal);
    ensure!(e.rho == vec![rho.to_string(); d], "rho {:?}", e.rho);
    ensure!(e.alpha == alpha, "alpha {}", e.alpha);
    Ok(())
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let r = cmd_validate(&job(Command::Validate, "cone3.json", "1")).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    check_report(&r, "2/3", [1, 2, 0], "9", 3f64.sqrt() / std::f64::consts::PI, "3/2", "-1")?;
    let (e30, e60) = ((ratio_of(&r, 30)? - 1.0).abs(), (ratio_of(&r, 60)? - 1.0).abs());
    ensure!(e30 <= 0.2, "|ratio(30) - 1| = {e30}");
    ensure!(e60 < e30, "|ratio(60) - 1| = {e60} >= {e30}");
    ensure!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    Ok(format!("|ratio(30)-1| = {e30:.3e}, |ratio(60)-1| = {e60:.3e}, {:.1}s", elapsed.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let r = cmd_validate(&job(Command::Validate, "cone4.json", "2")).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    let c = 8.0 / (3f64.sqrt() * std::f64::consts::PI);
    check_report(&r, "3/8", [1, 3, 0], "32/3", c, "8/3", "0")?;
    let (e16, e24) = ((ratio_of(&r, 16)? - 1.0).abs(), (ratio_of(&r, 24)? - 1.0).abs());
    ensure!(e24 <= 0.25, "|ratio(24) - 1| = {e24}");
    ensure!(e24 < e16, "|ratio(24) - 1| = {e24} >= {e16}");
    ensure!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    Ok(format!("|ratio(16)-1| = {e16:.3e}, |ratio(24)-1| = {e24:.3e}, {:.1}s", elapsed.as_secs_f64()))
}

fn status(text: &str, d: usize, beta: Rat) -> VerdictStatus {
    let a = analyze(&poly(text, d), Param::Exact(beta), &AnalysisOptions::default()).unwrap();
    a.verdict.status
}

fn criterion_3() -> Outcome {
    let pos = VerdictStatus::UltimatelyPositive { conditional: false };
    let neg = VerdictStatus::UltimatelyNegative { conditional: false };
    let cpos = VerdictStatus::UltimatelyPositive { conditional: true };
    let cneg = VerdictStatus::UltimatelyNegative { conditional: true };
    let cases = [
        (EX1, 3, rat(11, 20), &pos),
        (EX1, 3, rat(3, 4), &pos),
        (EX1, 3, rat_int(1), &pos),
        (EX1, 3, rat_int(2), &pos),
        (EX1, 3, rat(1, 4), &neg),
        (EX1, 3, rat(2, 5), &neg),
        (EX2, 4, rat(3, 2), &cpos),
        (EX2, 4, rat_int(2), &cpos),
        (EX2, 4, rat_int(3), &cpos),
        (EX2, 4, rat(9, 10), &cneg),
    ];
    for (text, d, beta, want) in &cases {
        let got = status(text, *d, beta.clone());
        ensure!(&got == *want, "d = {d}, beta = {beta}: {got}");
    }
    Ok(format!("{} parameter values", cases.len()))
}

fn criterion_4() -> Outcome {
    for (file, beta) in [("cone3.json", "1/2"), ("cone4.json", "1")] {
        let out = Process::new(env!("CARGO_BIN_EXE_conediag"))
            .args(["analyze", "--input", data(file).to_str().unwrap(), "--beta", beta])
            .output()
            .map_err(|e| e.to_string())?;
        let code = out.status.code();
        ensure!(code == Some(3), "{file} beta {beta}: exit {code:?}");
        let report = AnalysisReport::from_json(&String::from_utf8_lossy(&out.stdout)).map_err(|e| e.to_string())?;
        let v = report.verdict.ok().ok_or("no verdict")?;
        ensure!(
            v.status == "Inconclusive" && v.reason.as_deref() == Some("DegenerateGamma"),
            "{file} beta {beta}: {}",
            v.summary
        );
    }
    Ok("both degenerate cases exit 3".into())
}

fn indices(d: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|v| (0..=n).map(move |i| [v.clone(), vec![i]].concat()))
            .collect();
    }
    out
}

fn oracle_mismatch(s: &QuasiRationalSpec) -> Option<Vec<usize>> {
    let d = s.dim();
    let series = expand_power(s, &vec![6; d], &ExpandOptions::default()).unwrap();
    let oracle = brute_force_oracle(s, 6, 6).unwrap();
    indices(d, 6).into_iter().filter(|r| r.iter().sum::<usize>() <= 6).find(|r| {
        let e: Vec<u32> = r.iter().map(|&x| x as u32).collect();
        series.get_exact(r) != Some(&oracle.coeff(&e))
    })
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    rat(rng.gen_range(-12..=12), rng.gen_range(1..=5))
}

fn elementary_symmetric(d: usize, coeffs: &[Rat]) -> Polynomial {
    let mut p = Polynomial::constant(d, Rat::one());
    for mask in 1u32..(1 << d) {
        let k = mask.count_ones() as usize;
        let e: Vec<u32> = (0..d).map(|j| (mask >> j) & 1).collect();
        p = &p + &Polynomial::from_terms(d, [(e, coeffs[k - 1].clone())]).unwrap();
    }
    p
}

fn criterion_5() -> Outcome {
    let betas = [rat(1, 2), rat_int(1), rat_int(2), rat(7, 3)];
    for (text, d) in [(EX1, 3), (EX2, 4)] {
        for b in &betas {
            let s = QuasiRationalSpec::new(poly(text, d), Param::Exact(b.clone())).unwrap();
            if let Some(r) = oracle_mismatch(&s) {
                return Err(format!("d = {d}, beta = {b}: mismatch at {r:?}"));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for i in 0..50 {
        let d = rng.gen_range(2..=4);
        let coeffs: Vec<Rat> = (0..d).map(|_| random_rat(&mut rng)).collect();
        let b = betas[i % 4].clone();
        let s = QuasiRationalSpec::new(elementary_symmetric(d, &coeffs), Param::Exact(b.clone())).unwrap();
        if let Some(r) = oracle_mismatch(&s) {
            return Err(format!("random instance {i}: mismatch at {r:?}"));
        }
    }
    let mut worst = 0.0f64;
    for (text, d, radius, grid, beta) in [
        (EX1, 3, 0.3, 32, rat_int(1)),
        (EX1, 3, 0.3, 32, rat(1, 2)),
        (EX2, 4, 0.15, 24, rat_int(1)),
        (EX2, 4, 0.15, 24, rat(1, 2)),
    ] {
        let s = QuasiRationalSpec::new(poly(text, d), Param::Exact(beta)).unwrap();
        let series = expand_power(&s, &vec![2; d], &ExpandOptions::default()).unwrap();
        for r in indices(d, 2) {
            let e: Vec<u32> = r.iter().map(|&x| x as u32).collect();
            let v = cauchy_coefficient(&s, &e, &vec![radius; d], grid).map_err(|e| e.to_string())?;
            let want = rat_to_f64(series.get_exact(&r).unwrap());
            worst = worst.max((v.re - want).abs()).max(v.im.abs());
        }
    }
    ensure!(worst <= 1e-6, "Cauchy error {worst:e}");
    Ok(format!("58 oracle instances exact; max Cauchy error {worst:.1e}"))
}

fn qstar_poly(minv: &RatMatrix) -> Polynomial {
    let d = minv.size();
    let mut p = Polynomial::zero(d);
    for j in 0..d {
        for k in 0..d {
            let mut e = vec![0u32; d];
            e[j] += 1;
            e[k] += 1;
            p = &p + &Polynomial::from_terms(d, [(e, minv.get(j, k).clone())]).unwrap();
        }
    }
    p
}

fn criterion_6() -> Outcome {
    let cases = [
        (EX1, 3, rat(1, 108), rat_int(9), "3*(2*r1*r2 + 2*r1*r3 + 2*r2*r3 - r1^2 - r2^2 - r3^2)"),
        (
            EX2,
            4,
            rat(-3, 4096),
            rat(32, 3),
            "16/3*(r1*r2 + r1*r3 + r1*r4 + r2*r3 + r2*r4 + r3*r4 - r1^2 - r2^2 - r3^2 - r4^2)",
        ),
    ];
    for (text, d, det, q1, displayed) in cases {
        let p = poly(text, d);
        let cone = find_cone_point(&p).map_err(|e| e.to_string())?.remove(0);
        let qd = dual_form(&log_hessian(&p, &cone).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure!(qd.det == det, "d = {d}: det {}", qd.det);
        ensure!(qd.qstar_one == q1, "d = {d}: q*(1) = {}", qd.qstar_one);
        let vars: Vec<String> = (1..=d).map(|i| format!("r{i}")).collect();
        let want = parse_polynomial(displayed, &vars).unwrap();
        let got = qstar_poly(&qd.minv);
        ensure!(got == want, "d = {d}: q* = {}", got.to_text(&vars));
    }
    Ok("det, q*(1) and q* coefficients exact".into())
}

fn criterion_7() -> Outcome {
    let r = cmd_scan(&JobConfig {
        scan_depth: Some(20),
        ..job(Command::Scan, "cone4.json", "1")
    })
    .map_err(|e| e.to_string())?;
    let s = r.scan.ok().ok_or("scan skipped")?;
    ensure!(s.diagonal.len() == 21, "{} coefficients", s.diagonal.len());
    ensure!(s.first_nonpositive.is_none(), "nonpositive at {:?}", s.first_nonpositive);
    Ok("a_n > 0 for n <= 20 (finite check only)".into())
}

fn random_poly(rng: &mut ChaCha8Rng, d: usize) -> Polynomial {
    let terms: Vec<(Vec<u32>, Rat)> = (0..rng.gen_range(0..=6))
        .map(|_| ((0..d).map(|_| rng.gen_range(0..=3)).collect(), random_rat(rng)))
        .collect();
    Polynomial::from_terms(d, terms).unwrap()
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    // ring axioms and evaluation homomorphism
    for _ in 0..1000 {
        let (a, b, c) = (random_poly(&mut rng, 3), random_poly(&mut rng, 3), random_poly(&mut rng, 3));
        let x: Vec<Rat> = (0..3).map(|_| random_rat(&mut rng)).collect();
        ensure!(&(&a + &b) * &c == &(&a * &c) + &(&b * &c), "distributivity");
        let ab = (&a * &b).evaluate(&x).unwrap();
        ensure!(ab == a.evaluate(&x).unwrap() * b.evaluate(&x).unwrap(), "evaluation homomorphism");
    }
    // scaling covariance of the series and invariance of the log-space data
    for _ in 0..10 {
        let c: Vec<Rat> = (0..3).map(|_| rat(rng.gen_range(1..=7), rng.gen_range(1..=7))).collect();
        let q = poly(EX1, 3);
        let scaled = q.scale_coordinates(&c).unwrap();
        let beta = Param::Exact(rat(7, 3));
        let base = expand_power(&QuasiRationalSpec::new(q.clone(), beta.clone()).unwrap(), &[3; 3], &ExpandOptions::default()).unwrap();
        let sc = expand_power(&QuasiRationalSpec::new(scaled.clone(), beta).unwrap(), &[3; 3], &ExpandOptions::default()).unwrap();
        for r in indices(3, 3) {
            let f: Rat = c.iter().zip(&r).map(|(cj, &k)| num_traits::pow(cj.clone(), k)).product();
            ensure!(sc.get_exact(&r).unwrap() == &(f * base.get_exact(&r).unwrap()), "series scaling at {r:?}");
        }
        let cone = find_cone_point(&q).unwrap().remove(0);
        let z: Vec<Rat> = cone.exact.as_ref().unwrap().iter().zip(&c).map(|(z, c)| z / c).collect();
        let moved = ConePoint::from_exact(z, MultiplicityEvidence::Gradient { residual: 0.0, exact: true }, SearchPath::Numeric);
        ensure!(log_hessian(&q, &cone).unwrap() == log_hessian(&scaled, &moved).unwrap(), "log-space form not invariant");
    }
    // congruence correctness, Sylvester invariance, duality
    for _ in 0..100 {
        let n = rng.gen_range(1..=5);
        let mut m = RatMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = random_rat(&mut rng);
                m.set(i, j, v.clone());
                m.set(j, i, v);
            }
        }
        let (s, d) = congruence_diagonalize(&m);
        let t = s.transpose().mul(&m).mul(&s);
        ensure!(t.is_diagonal() && (0..n).all(|i| t.get(i, i) == &d[i]), "congruence not diagonal");
        let mut u = RatMatrix::identity(n);
        for _ in 0..6 {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if i != j {
                let mut e = RatMatrix::identity(n);
                e.set(i, j, rat_int(rng.gen_range(-3..=3)));
                u = u.mul(&e);
            }
        }
        ensure!(inertia(&u.transpose().mul(&m).mul(&u)) == inertia(&m), "inertia changed under congruence");
        if let Ok(qd) = dual_form(&m) {
            let r: Vec<Rat> = (0..n).map(|_| random_rat(&mut rng)).collect();
            ensure!(qd.qstar(&m.mul_vec(&r)) == qd.q(&r), "duality");
        }
    }
    // certificate re-verification
    for (text, d) in [(EX1, 3), (EX2, 4)] {
        let p = poly(text, d);
        let cone = find_cone_point(&p).unwrap().remove(0);
        let cert = certify_minimality(&p, &cone, &FalsifierOptions::default());
        match &cert.status {
            CertificateStatus::ProvenByPattern => {
                let num = cert.transform_numerator.as_ref().ok_or("no numerator")?;
                ensure!(pattern_lemma_check(num) == PatternResult::Proven, "pattern does not re-verify");
            }
            CertificateStatus::NotFalsified { min_modulus, argmin, .. } => {
                let v = p.evaluate_complex(argmin).unwrap().norm();
                ensure!(close(v, *min_modulus, 1e-9), "argmin value {v} vs {min_modulus}");
                ensure!(argmin.iter().zip(cone.moduli()).all(|(w, m)| w.norm() <= m), "argmin outside polydisk");
            }
            CertificateStatus::Falsified { .. } => return Err(format!("d = {d}: unexpected witness")),
        }
    }
    for _ in 0..20 {
        let a: Vec<Rat> = (0..2).map(|_| rat(rng.gen_range(11..=30), 10)).collect();
        let one = Polynomial::constant(2, Rat::one());
        let p = (0..2).fold(one.clone(), |acc, j| {
            let mut e = vec![0u32; 2];
            e[j] = 1;
            &acc * &(&one - &Polynomial::from_terms(2, [(e, a[j].clone())]).unwrap())
        });
        let fake = ConePoint::from_exact(vec![Rat::one(); 2], MultiplicityEvidence::Gradient { residual: 0.0, exact: false }, SearchPath::Numeric);
        let cert = certify_minimality(&p, &fake, &FalsifierOptions { samples: 512, ..FalsifierOptions::default() });
        match cert.status {
            CertificateStatus::Falsified { witness } => {
                ensure!(p.evaluate_complex(&witness).unwrap().norm() < 1e-10, "witness does not vanish");
                ensure!(witness.iter().all(|w| w.norm() < 1.0 - 1e-12), "witness outside the polydisk");
            }
            _ => return Err("zero inside the polydisk not found".into()),
        }
    }
    Ok("ring, scaling, congruence, duality, certificates".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 three-variable cone point end to end, beta = 1", criterion_1),
        ("2 four-variable cone point end to end, beta = 2", criterion_2),
        ("3 verdict thresholds", criterion_3),
        ("4 degenerate Gamma detection", criterion_4),
        ("5 series oracles", criterion_5),
        ("6 exact quadratic data", criterion_6),
        ("7 positivity scan, four variables, beta = 1, n <= 20", criterion_7),
        ("8 property suites", criterion_8),
    ];
    let mut failures = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{name}] {detail} ({secs:.1}s)"),
            Err(why) => {
                failures += 1;
                println!("FAIL [{name}] {why} ({secs:.1}s)");
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
