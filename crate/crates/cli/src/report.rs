//! The report runner: recomputes every headline quantity, compares it
//! against its closed form at the configured tolerances and renders the
//! outcome as markdown, JSON or bare CSV tables.

use serde::Serialize;
use squash7_core::algebra::{rat_to_f64, Rat};
use squash7_core::dirac::{self, Twist};
use squash7_core::geometry::{self, flow};
use squash7_core::index::{self, InstantonKind, P1Convention};
use squash7_core::instanton::{self, InstantonProfile, Y0};
use squash7_core::reference;
use squash7_core::reptheory;

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub beta0: f64,
    pub y0_list: Vec<f64>,
    pub eig_tol: f64,
    pub ode_tol: f64,
    pub rank_cutoff: f64,
    pub p1_convention: P1Convention,
    pub stamp: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Json,
    Markdown,
    Csv,
}

#[derive(Debug, Serialize)]
pub struct Item {
    pub name: String,
    pub expected: String,
    pub computed: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct Section {
    pub name: String,
    pub pass: bool,
    pub items: Vec<Item>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub config: RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stamp: Option<String>,
    pub sections: Vec<Section>,
    pub overall_pass: bool,
}

struct SectionBuilder {
    name: String,
    items: Vec<Item>,
}

impl SectionBuilder {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            items: Vec::new(),
        }
    }

    fn numeric(&mut self, name: &str, expected: f64, computed: f64, tol: f64) {
        let delta = (computed - expected).abs();
        self.items.push(Item {
            name: name.to_string(),
            expected: format!("{expected}"),
            computed: format!("{computed}"),
            delta: Some(delta),
            pass: delta <= tol,
        });
    }

    fn bound(&mut self, name: &str, bound_desc: &str, computed: f64, pass: bool) {
        self.items.push(Item {
            name: name.to_string(),
            expected: bound_desc.to_string(),
            computed: format!("{computed}"),
            delta: None,
            pass,
        });
    }

    fn exact(&mut self, name: &str, expected: &str, computed: &str) {
        self.items.push(Item {
            name: name.to_string(),
            expected: expected.to_string(),
            computed: computed.to_string(),
            delta: None,
            pass: expected == computed,
        });
    }

    fn error(&mut self, name: &str, err: &str) {
        self.items.push(Item {
            name: name.to_string(),
            expected: "computation".into(),
            computed: format!("error: {err}"),
            delta: None,
            pass: false,
        });
    }

    fn finish(self) -> Section {
        let pass = self.items.iter().all(|i| i.pass);
        Section {
            name: self.name,
            pass,
            items: self.items,
        }
    }
}

pub fn run_report(config: &RunConfig) -> Report {
    let sections = vec![
        section_geometry(config),
        section_flow(config),
        section_instanton(config),
        section_candidates(),
        section_spectra(config, Twist::Adjoint),
        section_spectra(config, Twist::Untwisted),
        section_squares(),
        section_critical_rates(config),
        section_fiber(config),
        section_spectral_flows(config),
        section_index(config),
        section_virtual_dimensions(),
        section_intertwiner(config),
    ];
    let overall_pass = sections.iter().all(|s| s.pass);
    Report {
        schema: 1,
        config: config.clone(),
        stamp: config.stamp.then(|| {
            let now = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs().to_string())
                .unwrap_or_default();
            format!("unix:{now}")
        }),
        sections,
        overall_pass,
    }
}

fn section_geometry(config: &RunConfig) -> Section {
    let mut s = SectionBuilder::new("invariant 3-form solve");
    match geometry::solve_nearly_g2() {
        Ok(g2) => {
            s.exact("alpha", "3", &g2.alpha.to_string());
            s.exact("beta^2", "9/5", &g2.beta_sq.to_string());
            let resid = g2.residual();
            s.bound("|d phi - 4 psi|", "< 1e-10", resid, resid < 1e-10);
            let phi = geometry::phi_ansatz(g2.alpha, g2.beta_sq);
            let psi = geometry::psi_ansatz(g2.alpha, g2.beta_sq);
            match geometry::wedge(&phi, &psi) {
                Ok(prod) => {
                    let seven_vol = geometry::dvol(g2.alpha, g2.beta_sq).scale(Rat::from(7));
                    let diff = prod.sub(&seven_vol).sup_norm();
                    s.bound("phi ^ psi = 7 dvol", "exact", diff, diff == 0.0);
                }
                Err(e) => s.error("phi ^ psi", &e.to_string()),
            }
            let _ = config;
        }
        Err(e) => s.error("solve", &e.to_string()),
    }
    s.finish()
}

fn section_flow(config: &RunConfig) -> Section {
    let mut s = SectionBuilder::new("metric flow");
    match flow::bs_flow(config.beta0, 100.0, 1e-8) {
        Ok(path) => {
            let drift = path.max_conserved_residual();
            s.bound("conserved-quantity drift", "< 1e-8", drift, drift < 1e-8);
            let expect = 125.0 * config.beta0.powi(10);
            s.numeric(
                "conserved value (125 beta0^10)",
                expect,
                path.conserved_value,
                1e-6 * expect,
            );
            let ia = path.int_alpha_identity_residual();
            s.bound(
                "beta^2 - beta0^2 - (6/5) int alpha",
                &format!("< {}", config.ode_tol),
                ia,
                ia < config.ode_tol,
            );
            let rate = path.cone_convergence_exponent();
            s.bound(
                "cone convergence exponent",
                "-10/3 +- 0.1",
                rate,
                (rate + 10.0 / 3.0).abs() < 0.1,
            );
            let pb = path.metric_pullback_residual();
            s.bound("beta-gauge pullback residual", "< 1e-8", pb, pb < 1e-8);
        }
        Err(e) => s.error("flow", &e.to_string()),
    }
    s.finish()
}

fn section_instanton(config: &RunConfig) -> Section {
    let mut s = SectionBuilder::new("connection profiles");
    for &y0 in &config.y0_list {
        match InstantonProfile::compute(Y0::Finite(y0), config.beta0, 50.0) {
            Ok(p) => {
                let agr = p.closed_form_agreement();
                s.bound(
                    &format!("closed form vs first-order reduction (y0 = {y0})"),
                    &format!("< {}", config.ode_tol),
                    agr,
                    agr < config.ode_tol,
                );
                let worst = p
                    .samples
                    .iter()
                    .map(|smp| instanton::profile_curvature_residual(&p, smp))
                    .fold(0.0f64, f64::max);
                s.bound(
                    &format!("curvature residual (y0 = {y0})"),
                    "< 1e-7",
                    worst,
                    worst < 1e-7,
                );
                let sub = p.substitution_chain_residual();
                s.bound(
                    &format!("substitution-chain residual (y0 = {y0})"),
                    "< 1e-10",
                    sub,
                    sub < 1e-10,
                );
            }
            Err(e) => s.error(&format!("profile y0 = {y0}"), &e.to_string()),
        }
    }
    for y0 in [Y0::Finite(config.y0_list[0]), Y0::Infinite] {
        match InstantonProfile::compute(y0, config.beta0, 300.0).and_then(|p| p.decay_rate()) {
            Ok(rate) => s.bound(
                &format!("decay exponent (y0 = {y0})"),
                "-2 +- 0.05",
                rate,
                (rate + 2.0).abs() < 0.05,
            ),
            Err(e) => s.error(&format!("decay y0 = {y0}"), &e.to_string()),
        }
    }
    s.finish()
}

fn section_candidates() -> Section {
    let mut s = SectionBuilder::new("candidate labels");
    let got = dirac::enumerate_candidates(2.5);
    let want = reference::candidate_labels();
    s.exact(
        "threshold 5/2 scan",
        &format!("{:?}", want.iter().map(|l| l.to_string()).collect::<Vec<_>>()),
        &format!("{:?}", got.iter().map(|l| l.to_string()).collect::<Vec<_>>()),
    );
    s.finish()
}

fn section_spectra(config: &RunConfig, twist: Twist) -> Section {
    let name = match twist {
        Twist::Adjoint => "twisted spectra (t = 0)",
        Twist::Untwisted => "untwisted spectra (t = 0)",
    };
    let mut s = SectionBuilder::new(name);
    let table = match twist {
        Twist::Adjoint => reference::twisted_spectra(),
        Twist::Untwisted => reference::untwisted_spectra(),
    };
    for (label, expected) in table {
        match dirac::block_dimension(label, twist) {
            Ok(0) => {
                s.exact(
                    &format!("{label} block"),
                    if expected.is_empty() { "empty" } else { "nonempty" },
                    "empty",
                );
            }
            Ok(_) => match dirac::dirac_block(label, twist).and_then(|b| dirac::block_spectrum(&b, 0.0)) {
                Ok(got) => {
                    let mut want: Vec<(String, f64)> = expected
                        .iter()
                        .map(|surd| (surd.to_string(), surd.value()))
                        .collect();
                    want.sort_by(|x, y| x.1.partial_cmp(&y.1).unwrap());
                    if want.len() != got.len() {
                        s.error(&format!("{label} dimension"), "spectrum size mismatch");
                        continue;
                    }
                    for ((form, value), computed) in want.iter().zip(got.iter()) {
                        let delta = (computed - value).abs();
                        s.items.push(Item {
                            name: format!("{label} eigenvalue {form}"),
                            expected: format!("{value}"),
                            computed: format!("{computed}"),
                            delta: Some(delta),
                            pass: delta <= config.eig_tol,
                        });
                    }
                }
                Err(e) => s.error(&format!("{label}"), &e.to_string()),
            },
            Err(e) => s.error(&format!("{label}"), &e.to_string()),
        }
    }
    s.finish()
}

fn section_squares() -> Section {
    let mut s = SectionBuilder::new("scalar squares at t = 1/3");
    for (label, tw, un) in reference::square_values() {
        for (twist, expect) in [(Twist::Adjoint, tw), (Twist::Untwisted, un)] {
            let tag = match twist {
                Twist::Adjoint => "twisted",
                Twist::Untwisted => "untwisted",
            };
            s.exact(
                &format!("{label} {tag} square value"),
                &expect.to_string(),
                &dirac::casimir_square_value(label, twist).to_string(),
            );
            match dirac::dirac_block(label, twist).and_then(|b| dirac::casimir_square_check(&b)) {
                Ok(resid) => s.bound(
                    &format!("{label} {tag} scalar residual"),
                    "< 1e-8",
                    resid,
                    resid < 1e-8,
                ),
                Err(e) => s.error(&format!("{label} {tag}"), &e.to_string()),
            }
        }
    }
    s.finish()
}

fn section_critical_rates(config: &RunConfig) -> Section {
    let mut s = SectionBuilder::new("critical rates");
    match dirac::critical_rates(-2.0, 0.0) {
        Ok(rates) => s.exact("rates inside (-2, 0)", "[]", &format!("{:?}", rates.iter().map(|r| r.rate).collect::<Vec<_>>())),
        Err(e) => s.error("interval (-2, 0)", &e.to_string()),
    }
    match dirac::critical_rates(-2.5, 0.0) {
        Ok(rates) => {
            s.exact("count inside (-5/2, 0)", "1", &rates.len().to_string());
            if let Some(r) = rates.first() {
                s.numeric("boundary rate", -2.0, r.rate, config.eig_tol);
                s.numeric("its eigenvalue", 0.5, r.eigenvalue, config.eig_tol);
                s.exact("its eigenspace dimension", "1", &r.eigenspace_dim.to_string());
            }
        }
        Err(e) => s.error("interval (-5/2, 0)", &e.to_string()),
    }
    s.finish()
}

fn section_fiber(config: &RunConfig) -> Section {
    let mut s = SectionBuilder::new("fiber operator");
    let got = index::fiber_operator_spectrum();
    let want = reference::fiber_table();
    s.exact(
        "spectrum with multiplicities",
        &format!("{want:?}"),
        &format!("{:?}", got.iter().map(|(v, m)| (v.round(), *m)).collect::<Vec<_>>()),
    );
    match index::trivial_block_fiber_eigenvalue() {
        Ok(v) => s.numeric("trivial-line eigenvalue", -4.0, v, config.eig_tol),
        Err(e) => s.error("trivial line", &e.to_string()),
    }
    s.finish()
}

fn section_spectral_flows(config: &RunConfig) -> Section {
    let mut s = SectionBuilder::new("spectral flows");
    match index::spectral_flow_connection() {
        Ok(flow) => {
            s.exact("connection-family flow", "0", &flow.total.to_string());
            s.numeric(
                "trivial block path endpoint",
                4.5,
                flow.trivial_path_endpoint,
                config.eig_tol,
            );
            match index::flat_end_matches_untwisted(&flow) {
                Ok(ok) => s.exact("flat-end spectra lie in the untwisted pool", "true", &ok.to_string()),
                Err(e) => s.error("flat-end check", &e.to_string()),
            }
        }
        Err(e) => s.error("connection flow", &e.to_string()),
    }
    let scalar = index::scalar_family_positivity(4000);
    s.exact("metric-family flow", "0", &scalar.spectral_flow.to_string());
    s.bound("scalar family minimum", ">= 42", scalar.minimum, scalar.minimum >= 42.0 - 1e-9);
    s.exact("scalar at the round point", "42", &scalar.round_value);
    s.exact("scalar at the squashed point", "378/5", &scalar.squashed_value);
    s.finish()
}

fn section_index(config: &RunConfig) -> Section {
    let mut s = SectionBuilder::new("index arithmetic");
    for (kind, expect) in [(InstantonKind::Family, 0i64), (InstantonKind::Limiting, -2i64)] {
        match index::index_at_minus_5_2(kind, 0, 0) {
            Ok(p) => s.exact(
                &format!("index at -5/2 ({kind:?})"),
                &expect.to_string(),
                &p.value.to_string(),
            ),
            Err(e) => s.error(&format!("{kind:?}"), &e.to_string()),
        }
    }
    let diff_default = index::connect_sum_index_difference(
        Rat::from(-4),
        Rat::from(0),
        P1Convention::FourA,
    );
    s.exact("connect-sum difference (4a convention)", "-2", &diff_default.to_string());
    if config.p1_convention != P1Convention::FourA {
        let alt = index::connect_sum_index_difference(Rat::from(-4), Rat::from(0), config.p1_convention);
        // recorded for comparison, not graded: the two class conventions
        // give different values and the report does not adjudicate
        s.items.push(Item {
            name: format!("connect-sum difference ({:?} convention)", config.p1_convention),
            expected: "recorded only".into(),
            computed: format!("{alt} ({})", rat_to_f64(alt)),
            delta: None,
            pass: true,
        });
    }
    s.finish()
}

fn section_virtual_dimensions() -> Section {
    let mut s = SectionBuilder::new("virtual dimensions");
    for nu in [-1.9, -1.0, -0.1] {
        match index::virtual_dimension(InstantonKind::Family, nu) {
            Ok(v) => s.exact(&format!("family, nu = {nu}"), "1", &v.to_string()),
            Err(e) => s.error(&format!("family, nu = {nu}"), &e.to_string()),
        }
        match index::virtual_dimension(InstantonKind::Limiting, nu) {
            Ok(v) => s.exact(&format!("limiting, nu = {nu}"), "-1", &v.to_string()),
            Err(e) => s.error(&format!("limiting, nu = {nu}"), &e.to_string()),
        }
    }
    s.finish()
}

fn section_intertwiner(config: &RunConfig) -> Section {
    let mut s = SectionBuilder::new("intertwiner solve consistency");
    let target = dirac::target_module(Twist::Adjoint);
    for label in dirac::enumerate_candidates(2.5) {
        match reptheory::build_carrier(label).and_then(|carrier| {
            reptheory::hom_block_with_cutoff(&carrier, &target, config.rank_cutoff)
                .map(|h| (carrier.clone(), h))
        }) {
            Ok((carrier, h)) => {
                let schur = reptheory::schur_count(&carrier, &target).unwrap_or(usize::MAX);
                s.exact(
                    &format!("{label} Hom dimension at cutoff {}", config.rank_cutoff),
                    &schur.to_string(),
                    &h.dim.to_string(),
                );
            }
            Err(e) => s.error(&format!("{label}"), &e.to_string()),
        }
    }
    s.finish()
}

pub fn render(report: &Report, format: ReportFormat) -> anyhow::Result<String> {
    match format {
        ReportFormat::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
        ReportFormat::Markdown => Ok(render_markdown(report)),
        ReportFormat::Csv => Ok(render_csv(report)),
    }
}

fn render_markdown(report: &Report) -> String {
    let mut out = String::new();
    out.push_str("# Verification report\n\n");
    if let Some(stamp) = &report.stamp {
        out.push_str(&format!("stamp: {stamp}\n\n"));
    }
    out.push_str(&format!(
        "overall: **{}**\n\n",
        if report.overall_pass { "PASS" } else { "FAIL" }
    ));
    for section in &report.sections {
        out.push_str(&format!(
            "## {} - {}\n\n",
            section.name,
            if section.pass { "pass" } else { "FAIL" }
        ));
        out.push_str("| check | expected | computed | delta | pass |\n");
        out.push_str("|---|---|---|---|---|\n");
        for item in &section.items {
            let delta = item
                .delta
                .map(|d| format!("{d:.3e}"))
                .unwrap_or_else(|| "-".into());
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} |\n",
                item.name,
                item.expected,
                item.computed,
                delta,
                if item.pass { "yes" } else { "NO" }
            ));
        }
        out.push('\n');
    }
    out
}

/// Bare tables only: the spectra sections as CSV rows.
fn render_csv(report: &Report) -> String {
    let mut out = String::from("section,check,expected,computed,delta,pass\n");
    for section in &report.sections {
        if !section.name.contains("spectra") && !section.name.contains("fiber") {
            continue;
        }
        for item in &section.items {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                section.name.replace(',', ";"),
                item.name.replace(',', ";"),
                item.expected.replace(',', ";"),
                item.computed.replace(',', ";"),
                item.delta.map(|d| format!("{d:e}")).unwrap_or_default(),
                item.pass
            ));
        }
    }
    out
}
