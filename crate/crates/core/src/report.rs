//! Human-readable rendering of fitted models and GOF reports.

use crate::inference::ModelFit;
use crate::simulate::GofReport;

/// Conventional significance stars at 0.05 / 0.01 / 0.001.
pub fn significance_stars(p: f64) -> &'static str {
    if p.is_nan() {
        ""
    } else if p < 0.001 {
        "***"
    } else if p < 0.01 {
        "**"
    } else if p < 0.05 {
        "*"
    } else {
        ""
    }
}

/// Aligned coefficient table with standard errors in parentheses and
/// significance stars, followed by the fit metrics block.
pub fn render_fit_table(fit: &ModelFit, title: &str) -> String {
    let p_values = fit.p_values();
    let name_width = fit
        .names
        .iter()
        .map(|n| n.len())
        .chain(std::iter::once("McFadden pseudo-R^2".len()))
        .max()
        .unwrap_or(12);

    let mut out = String::new();
    out.push_str(title);
    out.push('\n');
    out.push_str(&"=".repeat(title.len().max(name_width + 22)));
    out.push('\n');
    for k in 0..fit.names.len() {
        let stars = significance_stars(p_values[k]);
        out.push_str(&format!(
            "{:<name_width$}  {:>10.4}{:<3} ({:.4})\n",
            fit.names[k], fit.coefficients[k], stars, fit.std_errors[k],
        ));
    }
    out.push_str(&"-".repeat(title.len().max(name_width + 22)));
    out.push('\n');
    out.push_str(&format!("{:<name_width$}  {:>10.2}\n", "AIC", fit.aic));
    out.push_str(&format!("{:<name_width$}  {:>10.2}\n", "BIC", fit.bic));
    out.push_str(&format!(
        "{:<name_width$}  {:>10.2}\n",
        "Log likelihood", fit.log_likelihood
    ));
    out.push_str(&format!(
        "{:<name_width$}  {:>10.4}\n",
        "McFadden pseudo-R^2", fit.mcfadden_r2
    ));
    out.push_str(&format!("{:<name_width$}  {:>10}\n", "Num. events", fit.n_events));
    out.push_str(&format!("{:<name_width$}  {:>10}\n", "Num. obs.", fit.n_obs));
    if fit.n_dropped_strata > 0 {
        out.push_str(&format!(
            "{:<name_width$}  {:>10}\n",
            "Dropped strata", fit.n_dropped_strata
        ));
    }
    out.push_str(&format!("Convergence: {:?}\n", fit.convergence));
    out.push_str("*** p < 0.001; ** p < 0.01; * p < 0.05\n");
    out
}

/// Text block summarizing a GOF report: per-target match rates with
/// standard errors and the timing-error distribution.
pub fn render_gof_summary(report: &GofReport, label: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{label}: {} replications, {} true events\n",
        report.n_replications, report.n_true_events
    ));
    out.push_str("exact-day match rates (mean +/- stderr over replications):\n");
    for r in &report.match_rates {
        out.push_str(&format!(
            "  {:<20}  {:.4} +/- {:.4}\n",
            r.target.label(),
            r.mean,
            r.stderr
        ));
    }
    let t = &report.timing_pooled;
    out.push_str(&format!(
        "timing error (event days, pooled): mean {:.2}  sd {:.2}  median {:.1}  min {:.0}  max {:.0}  n {}  unmatched {}\n",
        t.mean, t.sd, t.median, t.min, t.max, t.n, t.unmatched
    ));
    out
}
