//! One function per subcommand; each fills a [`Report`].

use std::f64::consts::PI;

use cocycle_lab::lyapunov::{
    family_average, herman_example_exponent, herman_integral, lyapunov_estimate, CocycleSpec,
    RotationBase, DEFAULT_RENORM_EVERY, MAX_CONVERGENT_DENOMINATOR,
};
use cocycle_lab::projective::{
    circle_dist, h, h_lift, involution, involution_deriv, phi_deriv, reduce_half_open, rho_fn,
};
use cocycle_lab::quadrature::periodic_trapezoid;
use cocycle_lab::random::SeededSource;
use cocycle_lab::sl2::{log_avg_norm, operator_norm, Mat2};
use cocycle_lab::wordfile::load_word;
use cocycle_lab::words::{
    avg_spectral_radius, branch_table, elliptic_measure_by_branches, elliptic_measure_by_rho,
    haar_preimage_sum, j_all_refined, MatrixWord, J_DEFAULT_NODES,
};
use cocycle_lab::{ProjPoint, Result};

use crate::config::{Command, RunConfig};
use crate::report::{BranchRow, Check, Report};

pub const PROP3_TOL: f64 = 1e-5;
pub const THEOREM3_LAN_TOL: f64 = 1e-4;
pub const THEOREM3_J_TOL: f64 = 2e-4;
pub const J_LETTER_TOL: f64 = 1e-5;
pub const INVOLUTION_TOL: f64 = 1e-9;
pub const FD_TOL: f64 = 1e-6;
pub const CHANGE_OF_VARIABLES_TOL: f64 = 1e-8;
pub const HAAR_TOL: f64 = 1e-8;
pub const FAMILY_TOL: f64 = 5e-2;
pub const HERMAN_SAMPLES: usize = 1_000_000;
const J_REFINE_TOL: f64 = 1e-9;
const POINTS_PER_MATRIX: usize = 20;

/// Tolerance for the Herman example estimate at a given orbit length.
pub fn lyap_tolerance(iterations: usize) -> f64 {
    if iterations >= 10_000_000 {
        3e-3
    } else {
        1e-2
    }
}

pub fn run(cfg: &RunConfig) -> Result<Report> {
    let file_word = cfg.word_path.as_deref().map(load_word).transpose()?;
    let mut src = SeededSource::new(cfg.seed);
    match cfg.command {
        Command::VerifyProp3 => {
            let ms = file_word
                .map(|w| w.letters().to_vec())
                .unwrap_or_else(|| (0..cfg.count).map(|_| src.matrix()).collect());
            verify_prop3(cfg, &ms)
        }
        Command::VerifyTheorem3 => {
            let w = file_word.unwrap_or_else(|| src.word(cfg.length));
            verify_theorem3(cfg, &w)
        }
        Command::VerifyInvolution => {
            let ms = file_word.map(|w| w.letters().to_vec()).unwrap_or_else(|| {
                (0..cfg.count)
                    .map(|_| src.non_orthogonal_matrix(1e-3))
                    .collect()
            });
            verify_involution(cfg, &ms, &mut src)
        }
        Command::Lyap => lyap(cfg, file_word.as_ref()),
        Command::Family => {
            let w = file_word.unwrap_or_else(|| src.word(cfg.count));
            family(cfg, &w)
        }
        Command::Regions => {
            let w = file_word.unwrap_or_else(|| src.word(cfg.length));
            regions(cfg, &w)
        }
        Command::HaarCheck => haar_check(cfg, file_word.as_ref(), &mut src),
    }
}

fn entries(ms: &[Mat2]) -> Vec<[f64; 4]> {
    ms.iter().map(Mat2::entries).collect()
}

fn verify_prop3(cfg: &RunConfig, ms: &[Mat2]) -> Result<Report> {
    let mut report = Report::new(cfg.clone(), entries(ms));
    let mut worst_est = 0f64;
    for (i, a) in ms.iter().enumerate() {
        let avg = avg_spectral_radius(&MatrixWord::single(*a), cfg.nodes)?;
        worst_est = worst_est.max(avg.error_estimate);
        report.checks.push(Check::eq(
            format!("matrix {}: rotation average of rho = log avg norm", i + 1),
            avg.value,
            log_avg_norm(a),
            PROP3_TOL,
        ));
    }
    report.estimate("quadrature_max", worst_est);
    Ok(report)
}

fn verify_theorem3(cfg: &RunConfig, w: &MatrixWord) -> Result<Report> {
    let mut report = Report::new(cfg.clone(), entries(w.letters()));
    let avg = avg_spectral_radius(w, cfg.nodes)?;
    let lans: Vec<f64> = w.letters().iter().map(log_avg_norm).collect();
    let js = j_all_refined(
        w,
        J_DEFAULT_NODES.min(cfg.nodes),
        cfg.nodes.max(J_DEFAULT_NODES),
        J_REFINE_TOL,
    )?;
    let jsum: f64 = js.iter().map(|j| j.value).sum();

    report.checks.push(Check::eq(
        "average = sum of log avg norms",
        avg.value,
        lans.iter().sum(),
        THEOREM3_LAN_TOL,
    ));
    report.checks.push(Check::eq(
        "average = sum of J_k",
        avg.value,
        jsum,
        THEOREM3_J_TOL,
    ));
    for (k, (j, lan)) in js.iter().zip(&lans).enumerate() {
        report.checks.push(Check::eq(
            format!("J_{} = log avg norm of letter {}", k + 1, k + 1),
            j.value,
            *lan,
            J_LETTER_TOL,
        ));
    }
    report.estimate("average", avg.error_estimate);
    report.estimate("j_max", js.iter().fold(0.0, |m, j| m.max(j.error_estimate)));
    report.value("j", js.iter().map(|j| j.value).collect::<Vec<_>>());
    report.value("j_nodes", js[0].nodes);
    report.value("log_avg_norms", &lans);
    Ok(report)
}

/// Tracks the sample with the largest discrepancy for one identity.
struct Worst {
    lhs: f64,
    rhs: f64,
    diff: f64,
}

impl Worst {
    fn new() -> Self {
        Worst {
            lhs: 0.0,
            rhs: 0.0,
            diff: 0.0,
        }
    }

    fn offer(&mut self, lhs: f64, rhs: f64, diff: f64) {
        if diff > self.diff || diff.is_nan() {
            *self = Worst { lhs, rhs, diff };
        }
    }

    fn check(&self, name: &str, tol: f64) -> Check {
        Check::eq_with_diff(name, self.lhs, self.rhs, self.diff, tol)
    }
}

fn verify_involution(cfg: &RunConfig, ms: &[Mat2], src: &mut SeededSource) -> Result<Report> {
    let mut report = Report::new(cfg.clone(), entries(ms));
    let mut items: [Worst; 5] = std::array::from_fn(|_| Worst::new());
    let mut change = Worst::new();
    for a in ms {
        // finite-difference step on the length scale of Phi_A'
        let step = 1e-5 / operator_norm(a).powi(2);
        for _ in 0..POINTS_PER_MATRIX {
            let p = src.point();
            let x = p.angle();
            let q = involution(a, p)?;
            let back = involution(a, q)?;
            items[0].offer(back.angle(), x, back.dist(p));
            let (hq, hp) = (h(a, q), h(a, p));
            items[1].offer(hq, hp, circle_dist(hq, hp));
            let (rq, rp) = (rho_fn(a, q), -rho_fn(a, p));
            items[2].offer(rq, rp, (rq - rp).abs());
            let fwd = involution(a, ProjPoint::new(x + step))?.angle();
            let bwd = involution(a, ProjPoint::new(x - step))?.angle();
            let fd_psi = reduce_half_open(fwd - bwd) / (2.0 * step);
            items[3].offer(fd_psi, -phi_deriv(a, p), (fd_psi + phi_deriv(a, p)).abs());
            let fd_h = (h_lift(a, x + step) - h_lift(a, x - step)) / (2.0 * step);
            let slope = 1.0 - phi_deriv(a, p);
            items[4].offer(fd_h, slope, (fd_h - slope).abs());
        }
        let plain = periodic_trapezoid(|t| rho_fn(a, ProjPoint::new(t)), 0.0, PI, cfg.nodes)?;
        // the integrand is checked finite by the quadrature; Domain errors surfaced above
        let folded = periodic_trapezoid(
            |t| {
                let p = ProjPoint::new(t);
                let d = involution_deriv(a, p).unwrap_or(f64::NAN);
                0.5 * rho_fn(a, p) * (1.0 + d)
            },
            0.0,
            PI,
            cfg.nodes,
        )?;
        change.offer(
            folded.value,
            plain.value,
            (folded.value - plain.value).abs(),
        );
    }
    let names = [
        "involution is an involution",
        "h is invariant under the involution",
        "rho changes sign under the involution",
        "involution derivative = -Phi' (finite difference)",
        "h' = 1 - Phi' (finite difference)",
    ];
    let tols = [
        INVOLUTION_TOL,
        INVOLUTION_TOL,
        INVOLUTION_TOL,
        FD_TOL,
        FD_TOL,
    ];
    for ((w, name), tol) in items.iter().zip(names).zip(tols) {
        report.checks.push(w.check(name, tol));
    }
    report.checks.push(change.check(
        "change of variables through the involution",
        CHANGE_OF_VARIABLES_TOL,
    ));
    report.value("points_per_matrix", POINTS_PER_MATRIX);
    Ok(report)
}

fn base_for(cfg: &RunConfig, report: &mut Report) -> Result<RotationBase> {
    let base = RotationBase::new(cfg.alpha, 0.0)?;
    report.value(
        "rational_approximation",
        base.rational_approximation(MAX_CONVERGENT_DENOMINATOR),
    );
    Ok(base)
}

fn lyap(cfg: &RunConfig, word: Option<&MatrixWord>) -> Result<Report> {
    let (spec, letters) = match word {
        Some(w) => (
            CocycleSpec::table(w.letters().to_vec())?,
            entries(w.letters()),
        ),
        None => (CocycleSpec::herman(cfg.c)?, Vec::new()),
    };
    let mut report = Report::new(cfg.clone(), letters);
    let base = base_for(cfg, &mut report)?;
    let estimate = lyapunov_estimate(&base, &spec, cfg.iterations, DEFAULT_RENORM_EVERY)?;
    if word.is_none() {
        report.checks.push(Check::eq(
            "estimate = log((c + 1/c) / 2)",
            estimate,
            herman_example_exponent(cfg.c),
            lyap_tolerance(cfg.iterations),
        ));
    }
    report
        .checks
        .push(Check::ge("estimate is nonnegative", estimate, 0.0, 0.0));
    report.value("estimate", estimate);
    report.value("spec", &spec);
    Ok(report)
}

fn family(cfg: &RunConfig, w: &MatrixWord) -> Result<Report> {
    let mut report = Report::new(cfg.clone(), entries(w.letters()));
    let spec = CocycleSpec::table(w.letters().to_vec())?;
    let base = base_for(cfg, &mut report)?;
    let fam = family_average(&base, &spec, cfg.nodes, cfg.iterations)?;
    let integral = herman_integral(&base, &spec, HERMAN_SAMPLES)?;
    report.checks.push(Check::eq(
        "family average = Herman integral",
        fam.average,
        integral,
        FAMILY_TOL,
    ));
    report.checks.push(Check::ge(
        "Herman inequality",
        fam.average,
        integral,
        FAMILY_TOL,
    ));
    report.value("herman_samples", HERMAN_SAMPLES);
    report.value("per_theta", &fam.per_theta);
    Ok(report)
}

fn regions(cfg: &RunConfig, w: &MatrixWord) -> Result<Report> {
    let mut report = Report::new(cfg.clone(), entries(w.letters()));
    let table = branch_table(w, cfg.nodes)?;
    let theta_nodes = (16 * cfg.nodes).max(4096);
    let by_rho = elliptic_measure_by_rho(w, theta_nodes);
    let by_branches = elliptic_measure_by_branches(w, &table)?;
    for sol in &table {
        for (j, (&theta, &deriv)) in sol.thetas.iter().zip(&sol.derivs).enumerate() {
            report.branches.push(BranchRow {
                p: sol.p.angle(),
                j: j + 1,
                theta,
                deriv,
            });
        }
    }
    report.checks.push(Check::eq(
        "elliptic measure: rho zero set = complement of branch ranges",
        by_rho,
        by_branches,
        2.0 / cfg.nodes as f64,
    ));
    report.value("elliptic_by_rho", by_rho);
    report.value("elliptic_by_branches", by_branches);
    report.value("discrepancy", (by_rho - by_branches).abs());
    report.value("theta_nodes", theta_nodes);
    Ok(report)
}

fn haar_check(
    cfg: &RunConfig,
    word: Option<&MatrixWord>,
    src: &mut SeededSource,
) -> Result<Report> {
    let mut used = Vec::new();
    let mut checks = Vec::new();
    for i in 0..cfg.count {
        let w = match word {
            Some(w) => w.clone(),
            None => src.word(1 + i % cfg.length),
        };
        let (p, q) = (src.point(), src.point());
        let sum = haar_preimage_sum(&w, p, q)?;
        checks.push(Check::eq(
            format!("triple {}: n = {}, p = {}, q = {}", i + 1, w.len(), p, q),
            sum,
            1.0,
            HAAR_TOL,
        ));
        if word.is_none() || i == 0 {
            used.extend(entries(w.letters()));
        }
    }
    let mut report = Report::new(cfg.clone(), used);
    report.checks = checks;
    Ok(report)
}
