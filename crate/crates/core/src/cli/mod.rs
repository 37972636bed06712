//! Command implementations behind the `ni-synth` binary. Each command returns
//! a [`RunReport`]; every number in it comes from the library modules.

pub mod config;
pub mod format;
pub mod report;

use nalgebra::{DMatrix, RowDVector};

pub use config::{Augmentation, GridSpec, Overrides, RunConfig};
pub use report::{RunReport, Outputs, StabilityCheck};

use crate::augmentation::{
    achievable_epsilon, augment_integrator, augment_pid, integrator_margin, AugmentedSystem,
};
use crate::error::{Error, Result};
use crate::modal::{load_modal, modal_tf, multiplicative_delta, split_additive, ModalModel, Mode};
use crate::ni::{self, NiVerdict, Property};
use crate::statespace::{FrequencyGrid, RationalFunction};
use crate::synthesis::{self, admissible_epsilon_range, certify, feedback_gain, synthesize};
use format::{bode_csv, bode_rows, csv, h, hc, list, rational, row};

/// How many violations are listed per function.
const SHOWN_VIOLATIONS: usize = 5;

/// Map an error to the process exit code: 2 for input problems, 1 for
/// mathematical precondition failures.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::Io { .. }
        | Error::InvalidArgument(_)
        | Error::InvalidMode { .. }
        | Error::Dimension(_)
        | Error::NonSquare { .. }
        | Error::NonFinite(_) => 2,
        _ => 1,
    }
}

fn load(cfg: &RunConfig) -> Result<ModalModel> {
    let model = load_modal(&cfg.modal_file)?;
    if cfg.modes > model.len() {
        return Err(Error::InvalidArgument(format!(
            "--modes {} exceeds the {} modes in {}",
            cfg.modes,
            model.len(),
            cfg.modal_file.display()
        )));
    }
    Ok(if cfg.undamp { model.undamp() } else { model })
}

fn model_lines(cfg: &RunConfig, model: &ModalModel) -> Vec<String> {
    let mut v = vec![
        format!("modal file: {}", cfg.modal_file.display()),
        format!(
            "modes: {} ({} nominal){}",
            model.len(),
            cfg.modes,
            if cfg.undamp { ", damping removed" } else { "" }
        ),
    ];
    for (i, m) in model.modes().iter().enumerate() {
        v.push(format!(
            "mode {}: gain {}, damping term {}, delta {} (omega {} rad/s, zeta {})",
            i + 1,
            h(m.gain),
            h(m.gamma),
            h(m.delta),
            h(m.omega()),
            h(m.zeta())
        ));
    }
    v
}

fn grid_for(cfg: &RunConfig, rf: &RationalFunction) -> Result<FrequencyGrid> {
    match &cfg.grid {
        Some(g) => g.build(),
        None => FrequencyGrid::default_for(rf),
    }
}

/// The analysis grid with `ω = 0` prepended, for frequency-response tables.
fn table_grid(cfg: &RunConfig, rf: &RationalFunction) -> Result<FrequencyGrid> {
    let g = grid_for(cfg, rf)?;
    let mut pts = vec![0.0];
    pts.extend_from_slice(g.points());
    FrequencyGrid::new(pts, g.exclusion_radius)
}

fn verdict_lines(v: &NiVerdict) -> Vec<String> {
    let yn = |b: bool| if b { "yes" } else { "no" };
    let mut out = vec![format!(
        "NI {}  SNI {}  LNI {}  ({} grid points, {} excluded near poles)",
        yn(v.is_ni),
        yn(v.is_sni),
        yn(v.is_lni),
        v.checked_grid.len(),
        v.excluded.len()
    )];
    for p in [Property::Ni, Property::Sni, Property::Lni] {
        let bad = v.violations_of(p);
        // SNI and LNI exclude each other; listing the other one's misses is noise.
        let implied = (p == Property::Lni && (!v.is_ni || v.is_sni)) || (p == Property::Sni && v.is_lni);
        if bad.is_empty() || implied {
            continue;
        }
        let name = match p {
            Property::Ni => "NI",
            Property::Sni => "SNI",
            Property::Lni => "LNI",
        };
        out.push(format!("{name} violations: {}", bad.len()));
        for x in bad.iter().take(SHOWN_VIOLATIONS) {
            let at = match x.location {
                ni::Location::Frequency(w) => format!("omega = {}", h(w)),
                ni::Location::Pole(p) => format!("pole {}", hc(p)),
            };
            out.push(format!("  {} at {at}: {}", x.condition.label(), h(x.value)));
        }
        if bad.len() > SHOWN_VIOLATIONS {
            out.push(format!("  ... {} more", bad.len() - SHOWN_VIOLATIONS));
        }
    }
    for w in &v.crossings {
        out.push(format!("sign change of Im G located at omega = {}", h(*w)));
    }
    out
}

fn classify(cfg: &RunConfig, rf: &RationalFunction) -> Result<NiVerdict> {
    ni::classify(rf, &grid_for(cfg, rf)?, ni::DEFAULT_TOL)
}

/// NI / SNI / LNI verdicts for the full model, the nominal model and the
/// uncertainty in additive and (for undamped models) multiplicative form.
pub fn cmd_analyze(cfg: &RunConfig) -> Result<RunReport> {
    let model = load(cfg)?;
    let mut rep = RunReport::new("analyze");
    rep.section("model", model_lines(cfg, &model));
    let mut out = Outputs::create(&cfg.output_dir)?;

    let mut functions: Vec<(&str, RationalFunction, Property)> = vec![
        ("full", modal_tf(&model)?, Property::Ni),
    ];
    if cfg.modes < model.len() {
        let (nom, tail) = split_additive(&model, cfg.modes)?;
        functions.push(("nominal", modal_tf(&nom)?, Property::Ni));
        functions.push(("delta_additive", modal_tf(&tail)?, Property::Ni));
        if model.is_undamped() {
            functions.push((
                "delta_multiplicative",
                multiplicative_delta(&model, cfg.modes)?,
                Property::Lni,
            ));
        }
    } else {
        functions.push(("nominal", modal_tf(&model)?, Property::Ni));
    }

    let mut table = String::from("function,is_ni,is_sni,is_lni,violations\n");
    for (name, rf, expected) in functions {
        let v = classify(cfg, &rf)?;
        let mut lines = vec![format!("G(s) = {}", rational(&rf))];
        lines.extend(verdict_lines(&v));
        let want = match expected {
            Property::Ni => "NI",
            Property::Sni => "SNI",
            Property::Lni => "LNI",
        };
        lines.push(format!("expected: {want}"));
        if !v.holds(expected) {
            rep.fail(format!("{name} is not {want}"));
        }
        rep.section(name, lines);
        table.push_str(&format!(
            "{name},{},{},{},{}\n",
            v.is_ni,
            v.is_sni,
            v.is_lni,
            v.violations.len()
        ));
        let (rows, _) = bode_rows(&rf, &table_grid(cfg, &rf)?)?;
        out.write(&format!("imag_{name}.csv"), &bode_csv(&rows))?;
        rep.verdicts.push((name.to_string(), v));
    }
    out.write("verdicts.csv", &table)?;
    out.finish(&mut rep)?;
    Ok(rep)
}

fn nominal_mode(cfg: &RunConfig, model: &ModalModel) -> Result<Mode> {
    if cfg.modes != 1 {
        return Err(Error::InvalidArgument(format!(
            "augmentation acts on a single nominal mode; use --modes 1 (got {})",
            cfg.modes
        )));
    }
    Ok(model.modes()[0])
}

fn augment(cfg: &RunConfig, mode: &Mode) -> Result<AugmentedSystem> {
    match cfg.require_augmentation()? {
        Augmentation::Integrator { ktilde } => augment_integrator(mode, ktilde),
        Augmentation::Pid(g) => augment_pid(mode, &g),
    }
}

fn matrix_lines(name: &str, m: &DMatrix<f64>) -> Vec<String> {
    (0..m.nrows())
        .map(|i| format!("{name} row {}: {}", i + 1, row(m.row(i).iter().copied())))
        .collect()
}

fn plant_section(cfg: &RunConfig, aug: &AugmentedSystem) -> Result<Vec<String>> {
    let sys = &aug.sys;
    let mut v = vec![format!("augmentation: {}", cfg.require_augmentation()?)];
    v.extend(matrix_lines("A", &sys.a));
    v.push(format!("B1 = {}", row(sys.b1.iter().copied())));
    v.push(format!("B2 = {}", row(sys.b2.iter().copied())));
    v.push(format!("C1 = {}", row(sys.c1.iter().copied())));
    v.push(format!("C1 B2 = {}   R = 2 C1 B1 = {}", h(sys.c1b2()), h(2.0 * sys.c1b1())));
    match cfg.require_augmentation()? {
        Augmentation::Pid(g) => {
            let e = achievable_epsilon(&g, aug.source.gain)?;
            v.push(format!("zeros of n_L: {}", list(&e.roots)));
            if e.obstructing.is_empty() {
                v.push(format!("achievable degree of stability: epsilon < {}", h(e.margin)));
            } else {
                v.push(format!("zeros with Re >= 0 block any margin: {}", list(&e.obstructing)));
            }
        }
        Augmentation::Integrator { .. } => {
            v.push(format!(
                "achievable degree of stability: epsilon < zeta omega = {}",
                h(integrator_margin(&aug.source))
            ));
        }
    }
    Ok(v)
}

fn range_lines(r: &synthesis::EpsilonRange) -> Vec<String> {
    let mut v = vec![
        format!("sigma(A_q) = {}", list(&r.spectrum)),
        format!("structural zero: {}", hc(r.structural_zero)),
        format!("gamma = {}", h(r.gamma)),
        format!("distinct eigenvalues: {}", if r.distinct { "yes" } else { "no" }),
    ];
    v.extend(r.notes.iter().map(|n| format!("note: {n}")));
    v
}

/// Uncertainty seen by the synthesized loop: multiplicative for PID on an
/// undamped model, additive otherwise. `None` when every mode is nominal.
fn configured_delta(
    cfg: &RunConfig,
    model: &ModalModel,
) -> Result<Option<(&'static str, RationalFunction)>> {
    if cfg.modes >= model.len() {
        return Ok(None);
    }
    let pid = matches!(cfg.augmentation, Some(Augmentation::Pid(_)));
    if pid && model.is_undamped() {
        return Ok(Some(("multiplicative", multiplicative_delta(model, cfg.modes)?)));
    }
    let (_, tail) = split_additive(model, cfg.modes)?;
    Ok(Some(("additive", modal_tf(&tail)?)))
}

fn stability_check(g_cl: &RationalFunction, kind: &'static str, delta: &RationalFunction) -> Result<StabilityCheck> {
    let report = ni::check_internal_stability(g_cl, delta, ni::DEFAULT_TOL)?;
    let loop_poles = ni::interconnection_poles(g_cl, delta)?;
    let direct_stable = loop_poles.iter().all(|p| p.re < 0.0);
    Ok(StabilityCheck {
        delta_kind: kind,
        report,
        loop_poles,
        direct_stable,
    })
}

fn stability_lines(s: &StabilityCheck) -> Vec<String> {
    let r = &s.report;
    let yn = |b: bool| if b { "yes" } else { "no" };
    let mut v = vec![
        format!("M = closed loop w -> z, N = {} uncertainty", s.delta_kind),
        format!(
            "M(0) = {}  M(inf) = {}  N(0) = {}  N(inf) = {}",
            h(r.dc_values.0),
            h(r.inf_values.0),
            h(r.dc_values.1),
            h(r.inf_values.1)
        ),
        format!("condition 1 (well posed): {}", yn(r.well_posed)),
        format!("condition 2: {} (< 0 required)", h(r.cond2)),
        format!("condition 3: {} (< 0 required)", h(r.cond3)),
        format!("internally stable by the gain conditions: {}", yn(r.internally_stable)),
        format!("hypotheses (M NI, N SNI) met: {}", yn(r.hypotheses_met)),
    ];
    v.extend(r.warnings.iter().map(|w| format!("warning: {w}")));
    let worst = s.loop_poles.iter().map(|p| p.re).fold(f64::NEG_INFINITY, f64::max);
    v.push(format!(
        "direct check: {} loop poles, max Re = {} -> {}",
        s.loop_poles.len(),
        h(worst),
        if s.direct_stable { "stable" } else { "unstable" }
    ));
    if s.direct_stable != r.internally_stable {
        v.push("WARNING: the direct pole check disagrees with the gain conditions".into());
    }
    v
}

fn matrix_csv(m: &DMatrix<f64>) -> String {
    let mut s = String::new();
    for i in 0..m.nrows() {
        let cells: Vec<String> = m.row(i).iter().map(|x| csv(*x)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

fn coeff_csv(r: &RationalFunction) -> String {
    let n = r.den().degree().max(r.num().degree());
    let mut s = String::from("power,numerator,denominator\n");
    for k in (0..=n).rev() {
        s.push_str(&format!("{k},{},{}\n", csv(r.num().coeff(k)), csv(r.den().coeff(k))));
    }
    s
}

fn monic(r: &RationalFunction) -> Result<RationalFunction> {
    let lead = r.den().leading();
    RationalFunction::new(r.num().scale(1.0 / lead), r.den().scale(1.0 / lead))
}

/// Augment, check the admissible range, synthesize, certify, and test the
/// loop with the configured uncertainty.
pub fn cmd_synth(cfg: &RunConfig) -> Result<RunReport> {
    let model = load(cfg)?;
    let eps = cfg.require_epsilon()?;
    let mode = nominal_mode(cfg, &model)?;
    let aug = augment(cfg, &mode)?;
    let mut rep = RunReport::new("synth");
    rep.section("model", model_lines(cfg, &model));
    rep.section("augmented plant", plant_section(cfg, &aug)?);

    let range = admissible_epsilon_range(&aug.sys)?;
    rep.section("admissible range", range_lines(&range));
    if eps > 0.0 && !range.admits(eps) {
        return Err(Error::EpsilonOutOfRange {
            epsilon: eps,
            gamma: range.gamma,
        });
    }
    rep.range = Some(range);

    let res = synthesize(&aug.sys, eps)?;
    let c = &res.certificate;
    let g_full = monic(&res.g_cl)?;
    let g_red = res.g_cl_reduced()?;
    let mut lines = vec![
        format!("epsilon = {}", h(eps)),
        format!("K = {}", row(res.k.iter().copied())),
    ];
    lines.extend(matrix_lines("A + B2 K", &res.closed_loop.a));
    lines.push(format!("closed-loop poles: {}", list(&c.poles)));
    lines.push(format!("G_cl(s) = {}", rational(&g_full)));
    lines.push(format!("G_cl(s) reduced = {}", rational(&g_red)));
    lines.push(format!("annihilation residual |C1(A+eps I+B2 K)|/|C1 A| = {}", h(c.c1acl_residual)));
    lines.push(format!("|S - A_r| / max(1,|A_r|) = {}", h(c.s_residual)));
    lines.push(format!("sigma(A_r) = {}", list(&c.ar_eigenvalues)));
    lines.push(format!("degree of stability achieved: {}", h(-c.max_pole_re)));
    for (ok, what) in [
        (c.c1acl_zero, "annihilation identity"),
        (c.ar_stable, "A_r stability"),
        (c.degree_ok, "degree of stability"),
    ] {
        if !ok {
            rep.fail(format!("certificate: {what} fails"));
        }
    }
    rep.section("synthesis", lines);

    let v = classify(cfg, &g_full)?;
    if !v.is_sni {
        rep.fail("closed loop w -> z is not SNI");
    }
    rep.section("closed loop", verdict_lines(&v));
    rep.verdicts.push(("closed_loop".into(), v));

    if let Some((kind, delta)) = configured_delta(cfg, &model)? {
        let s = stability_check(&g_red, kind, &delta)?;
        if !s.report.internally_stable {
            rep.fail("gain conditions for internal stability fail");
        }
        rep.section("interconnection", stability_lines(&s));
        rep.stability = Some(s);
    }

    let mut out = Outputs::create(&cfg.output_dir)?;
    let gain: String = std::iter::once("index,k\n".to_string())
        .chain(res.k.iter().enumerate().map(|(i, k)| format!("{},{}\n", i + 1, csv(*k))))
        .collect();
    out.write("gain.csv", &gain)?;
    out.write("a_cl.csv", &matrix_csv(&res.closed_loop.a))?;
    let poles: String = std::iter::once("re,im\n".to_string())
        .chain(c.poles.iter().map(|p| format!("{},{}\n", csv(p.re), csv(p.im))))
        .collect();
    out.write("poles.csv", &poles)?;
    out.write("g_cl.csv", &coeff_csv(&g_full))?;
    let g_n = mode.transfer_function();
    let (rows, _) = bode_rows(&g_n, &table_grid(cfg, &g_n)?)?;
    out.write("bode_nominal.csv", &bode_csv(&rows))?;
    let (rows, _) = bode_rows(&g_full, &table_grid(cfg, &g_full)?)?;
    out.write("bode_closed_loop.csv", &bode_csv(&rows))?;
    rep.synthesis = Some(res);
    out.finish(&mut rep)?;
    Ok(rep)
}

/// Frequency-response tables for the nominal, full and uncertainty models,
/// and for the closed loop when an augmentation and `ε` are configured.
pub fn cmd_freqresp(cfg: &RunConfig) -> Result<RunReport> {
    let model = load(cfg)?;
    let mut rep = RunReport::new("freqresp");
    rep.section("model", model_lines(cfg, &model));
    let mut out = Outputs::create(&cfg.output_dir)?;

    let mut functions: Vec<(String, RationalFunction)> = Vec::new();
    if cfg.modes < model.len() {
        let (nom, _) = split_additive(&model, cfg.modes)?;
        functions.push(("nominal".into(), modal_tf(&nom)?));
    } else {
        functions.push(("nominal".into(), modal_tf(&model)?));
    }
    functions.push(("full".into(), modal_tf(&model)?));
    if let Some((kind, d)) = configured_delta(cfg, &model)? {
        functions.push((format!("delta_{kind}"), d));
    }
    if cfg.augmentation.is_some() && cfg.epsilon.is_some() {
        let mode = nominal_mode(cfg, &model)?;
        let aug = augment(cfg, &mode)?;
        let res = synthesize(&aug.sys, cfg.require_epsilon()?)?;
        functions.push(("closed_loop".into(), monic(&res.g_cl)?));
    }

    for (name, rf) in functions {
        let grid = table_grid(cfg, &rf)?;
        let (rows, skipped) = bode_rows(&rf, &grid)?;
        let file = format!("freqresp_{name}.csv");
        out.write(&file, &bode_csv(&rows))?;
        let mut lines = vec![
            format!("G(s) = {}", rational(&rf)),
            format!("{file}: {} rows", rows.len()),
        ];
        match rf.dc_gain() {
            Ok(dc) => lines.push(format!("DC gain {} ({} dB)", h(dc), h(20.0 * dc.abs().log10()))),
            Err(_) => lines.push("pole at the origin, no DC gain".into()),
        }
        for w in &skipped {
            lines.push(format!("skipped omega = {} (near a pole)", h(*w)));
        }
        rep.section(name, lines);
    }
    out.finish(&mut rep)?;
    Ok(rep)
}

/// Check the proof obligations for a supplied gain, or for the gain formula
/// at the configured `ε` when none is given.
pub fn cmd_certify(cfg: &RunConfig) -> Result<RunReport> {
    let model = load(cfg)?;
    let eps = cfg.require_epsilon()?;
    if !(eps >= 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be >= 0, got {eps}")));
    }
    let mode = nominal_mode(cfg, &model)?;
    let aug = augment(cfg, &mode)?;
    let mut rep = RunReport::new("certify");
    rep.section("model", model_lines(cfg, &model));
    rep.section("augmented plant", plant_section(cfg, &aug)?);
    let (k, source) = match &cfg.gain {
        Some(g) => (RowDVector::from_row_slice(g), "supplied"),
        None => (feedback_gain(&aug.sys, eps)?, "gain formula"),
    };
    let c = certify(&aug.sys, &k, eps)?;
    let mut lines = vec![
        format!("epsilon = {}", h(eps)),
        format!("K ({source}) = {}", row(k.iter().copied())),
        format!("closed-loop poles: {}", list(&c.poles)),
        format!("margin (-max Re) = {}", h(c.margin)),
    ];
    let mut table = String::from("obligation,pass,value\n");
    for o in &c.obligations {
        lines.push(format!("{}: {} ({})", o.name, if o.pass { "pass" } else { "FAIL" }, o.detail));
        table.push_str(&format!("{},{},{}\n", o.name, o.pass, csv(o.value)));
        if !o.pass {
            rep.fail(format!("obligation {} fails", o.name));
        }
    }
    rep.section("obligations", lines);
    let mut out = Outputs::create(&cfg.output_dir)?;
    out.write("certificate.csv", &table)?;
    rep.certify = Some(c);
    out.finish(&mut rep)?;
    Ok(rep)
}
