use cilab_core::deformation_symbols::{
    build_quotient_spaces, exactness_report, ideal_analysis, symbols_report, ComplexKind,
};
use cilab_core::flat_model::{candidate_conventions, evaluate_candidate, model, ContactModel, KForm};
use cilab_core::form_decomposition::{characterize, membership_from_split, Decomposer, Eigenspace};
use cilab_core::gauge_fields::{instanton_classify, omega_weight, InstantonClass};
use cilab_core::report::{Check, CriteriaReport, Relation, Value};
use cilab_core::selftest::{model_suite, selftest};
use cilab_core::stiefel::{build_stiefel, stiefel_pipeline, EINSTEIN_RICCI, EINSTEIN_TRANSVERSE_RICCI, EINSTEIN_Y};
use cilab_core::weitzenbock::TransverseRicci;
use cilab_core::weitzenbock::{
    build_f_operator, build_r_operator, operator_spectrum, r_operator_spectrum, vanishing_report, Spectrum,
};
use cilab_core::ym_stability::{stability_report, RicciTensor7};

use crate::input::{self, FieldInput, FormInput, StiefelInput, SymbolsInput};
use crate::{Cli, CliError, Command};

pub fn dispatch(cli: &Cli) -> Result<CriteriaReport, CliError> {
    let m = model();
    let path = cli.input.as_deref();
    let samples = cli.samples as usize;
    match cli.command {
        Command::Calibrate => calibrate(&m),
        Command::Decompose => {
            let f: FormInput = input::require(input::read_input(path)?, "a 2-form")?;
            decompose(&input::build_form(&f, &m)?, &m)
        }
        Command::Classify => {
            let f: FieldInput = input::require(input::read_input(path)?, "a curvature")?;
            classify(&f, &m, cli.tol)
        }
        Command::Spectrum => {
            let f: FieldInput = input::require(input::read_input(path)?, "a curvature")?;
            spectrum(&f, &m, cli.tol)
        }
        Command::Vanishing => {
            let f: FieldInput = input::require(input::read_input(path)?, "a curvature")?;
            let field = input::build_field(&f, &m)?;
            let (ric, defaulted) = match input::transverse_ricci(&f.ricci)? {
                Some(r) => (r, false),
                None => (TransverseRicci::einstein(EINSTEIN_TRANSVERSE_RICCI), true),
            };
            let mut rep = vanishing_report(&field, &ric, &m, cli.tol)?;
            if defaulted {
                rep.note("no ricci given: using Ric^T = 8 g^T");
            }
            Ok(rep)
        }
        Command::Stability => {
            let f: FieldInput = input::require(input::read_input(path)?, "a curvature")?;
            let field = input::build_field(&f, &m)?;
            let (ric, defaulted) = match input::ambient_ricci(&f)? {
                Some(r) => (r, false),
                None => (RicciTensor7::scalar(EINSTEIN_RICCI), true),
            };
            let mut rep = stability_report(&field, &ric, &m, cli.tol)?;
            if defaulted {
                rep.note("no ricci7/ricci_scalar given: using Ric = 6 g");
            }
            Ok(rep)
        }
        Command::Symbols => {
            let s: SymbolsInput = input::read_input(path)?.unwrap_or_default();
            symbols(&s, &m, samples, cli)
        }
        Command::Stiefel => {
            let s: StiefelInput = input::read_input(path)?.unwrap_or_default();
            let [y1, y2, y3] = s.y.unwrap_or(EINSTEIN_Y);
            let spec = build_stiefel(y1, y2, y3)?;
            Ok(stiefel_pipeline(&spec, &m, cli.seed, samples, cli.exec())?)
        }
        Command::Selftest => Ok(selftest(cli.seed, samples, cli.exec())?),
    }
}

fn eigenspace_text(e: Eigenspace) -> String {
    serde_json::to_value(e).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

fn class_text(c: InstantonClass) -> String {
    serde_json::to_value(c).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

pub fn calibrate(m: &ContactModel) -> Result<CriteriaReport, CliError> {
    let mut rep = model_suite()?;
    rep.text("omega", format!("{:?}", m.omega)).num("omega_weight", omega_weight(m));
    let mut cands = CriteriaReport::new("candidates");
    for o in candidate_conventions().into_iter().map(evaluate_candidate) {
        let c = o.convention;
        cands.value(
            format!("s{:+}_k{:+}_sigma{:+}", c.orientation_sign, c.deta_scale, c.phi_sign),
            Value::Bool(o.accepted()),
        );
    }
    rep.section(cands);
    Ok(rep.settle())
}

fn components(rep: &mut CriteriaReport, prefix: &str, f: &KForm) {
    for (&mask, c) in f.terms() {
        if c.norm() > 0.0 {
            let idx: String = cilab_core::flat_model::mask_indices(mask).iter().map(|i| i.to_string()).collect();
            rep.value(format!("{prefix}/e{idx}"), Value::List(vec![c.re, c.im]));
        }
    }
}

pub fn decompose(a: &KForm, m: &ContactModel) -> Result<CriteriaReport, CliError> {
    let dec = Decomposer::new(m)?;
    let split = dec.project(a)?;
    let norm = a.norm();
    let mut rep = CriteriaReport::new("decompose");
    rep.num("norm", norm);
    let names = ["part_1", "part_6", "part_8", "part_v"];
    for (name, part) in names.iter().zip(split.parts()) {
        let frac = if norm > 0.0 { part.norm_sqr() / (norm * norm) } else { 0.0 };
        rep.num(format!("{name}/fraction"), frac);
    }
    for (name, part) in names.iter().zip(split.parts()) {
        components(&mut rep, name, &part.pruned(1e-15));
    }
    let via_split = membership_from_split(&split, norm);
    let via_type = characterize(a, m)?;
    rep.text("class", eigenspace_text(via_split));
    rep.check(Check::flag("class_paths_agree", via_split == via_type));
    rep.check(Check::new(
        "reconstruction_residual",
        (&split.reconstruct() - a).norm(),
        Relation::Le,
        1e-12 * (1.0 + norm),
    ));
    Ok(rep.settle())
}

pub fn classify(f: &FieldInput, m: &ContactModel, tol: f64) -> Result<CriteriaReport, CliError> {
    let field = input::build_field(f, m)?;
    let d = instanton_classify(&field, m, tol)?;
    let mut rep = CriteriaReport::new("classify");
    rep.text("class", class_text(d.class))
        .text("algebra", field.algebra().name.clone())
        .num("norm", d.norm)
        .num("tol", d.tol)
        .num("eigen_residual_sd", d.eigen_residual_sd)
        .num("eigen_residual_asd", d.eigen_residual_asd)
        .num("eigen_residual_minus2", d.eigen_residual_minus2)
        .num("residual_20", d.residual_20)
        .num("residual_02", d.residual_02)
        .num("residual_vertical", d.residual_vertical)
        .num("omega_pairing", d.omega_pairing)
        .num("reality_residual", d.reality_residual)
        .value("eigen_path_sd", Value::Bool(d.eigen_path_sd))
        .value("criteria_path_sd", Value::Bool(d.criteria_path_sd));
    Ok(rep.settle())
}

fn spectrum_section(title: &str, s: &Spectrum) -> CriteriaReport {
    let mut sec = CriteriaReport::new(title);
    sec.value("eigenvalues", Value::List(s.eigenvalues.clone()))
        .num("min", s.min)
        .num("max", s.max)
        .value("positive", Value::Bool(s.positive))
        .value("nonnegative", Value::Bool(s.nonnegative));
    sec.check(Check::new("self_adjoint_residual", s.self_adjoint_residual, Relation::Le, 1e-10 * (1.0 + s.scale)));
    sec.settle()
}

pub fn spectrum(f: &FieldInput, m: &ContactModel, tol: f64) -> Result<CriteriaReport, CliError> {
    let field = input::build_field(f, m)?;
    let fop = build_f_operator(&field, m, tol)?;
    let mut rep = CriteriaReport::new("spectrum");
    rep.num("F_norm", field.norm());
    rep.section(spectrum_section("F_OP", &operator_spectrum(&fop)));
    if let Some(ric) = input::transverse_ricci(&f.ricci)? {
        let g = field.algebra().clone();
        rep.section(spectrum_section("R_OP", &r_operator_spectrum(&ric, &g)?));
        let sum = fop.sum(&build_r_operator(&ric, &g))?;
        rep.section(spectrum_section("SUM", &operator_spectrum(&sum)));
    } else {
        rep.note("no ricci given: only the F spectrum is reported");
    }
    Ok(rep.settle())
}

fn counts(xs: &[usize]) -> Value {
    Value::List(xs.iter().map(|&x| x as f64).collect())
}

pub fn symbols(s: &SymbolsInput, m: &ContactModel, samples: usize, cli: &Cli) -> Result<CriteriaReport, CliError> {
    let dims = s.dims.clone().unwrap_or_else(|| vec![1, 3]);
    if dims.contains(&0) {
        return Err(CliError::Input("field `dims`: algebra dimensions must be positive".into()));
    }
    let mut rep = match &s.covectors {
        None => symbols_report(&dims, samples, cli.seed, m, cli.exec())?,
        Some(xis) => {
            let mut rep = CriteriaReport::new("symbols");
            for &d in &dims {
                let q = build_quotient_spaces(d, m)?;
                for (i, xi) in xis.iter().enumerate() {
                    if xi.iter().all(|&x| x == 0.0) {
                        return Err(CliError::Input(format!("field `covectors[{i}]`: zero covector")));
                    }
                    for kind in [ComplexKind::Full, ComplexKind::Basic] {
                        let r = exactness_report(xi, &q, kind)?;
                        let tag = if kind == ComplexKind::Full { "full" } else { "basic" };
                        let mut sec = CriteriaReport::new(format!("{tag}_d{d}_xi{i}"));
                        sec.value("xi", Value::List(xi.to_vec()))
                            .value("dims", counts(&r.dims))
                            .value("ranks", counts(&r.ranks))
                            .value("cohomology", counts(&r.cohomology_dims))
                            .value("exact", Value::Bool(r.exact))
                            .num("alternating_sum", r.alternating_sum as f64);
                        let comp = r.composition_residuals.iter().copied().fold(0.0f64, f64::max);
                        sec.check(Check::new("composition_residual", comp, Relation::Le, 1e-12));
                        rep.section(sec.settle());
                    }
                }
            }
            rep.settle()
        }
    };
    let ideal = ideal_analysis(m)?;
    rep.num("degree3_ideal_rank", ideal.ideal_rank_3 as f64)
        .num("degree3_quotient_dim", ideal.quotient_dim_3 as f64)
        .num("l3_dim", ideal.l3_dim as f64);
    Ok(rep)
}
