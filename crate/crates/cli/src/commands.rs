use std::collections::BTreeMap;
use std::path::Path;

use adams_bar_core::bar;
use adams_bar_core::cdga::{Cdga, Element, TruncationWindow};
use adams_bar_core::cell::CellModule;
use adams_bar_core::minimal_model::{minimal_model, quillen_compare, relative_minimal_model, MinimalModelResult};
use adams_bar_core::parse::{parse_cdga, parse_module, CdgaFile};
use adams_bar_core::relative::{self, AugmentedOverN, CoactionMatrix};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::json;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] adams_bar_core::Error),
}

pub type CliResult<T> = Result<T, CliError>;

/// A finished report and whether every checked property held.
pub struct Outcome {
    pub report: Map<String, Value>,
    pub passed: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct Window {
    pub deg_max: i64,
    pub wt_max: usize,
}

impl Window {
    fn truncation(&self) -> CliResult<TruncationWindow> {
        Ok(TruncationWindow::new(self.deg_max, self.wt_max as i64)?)
    }

    fn json(&self) -> Value {
        json!({"deg_max": self.deg_max, "wt_max": self.wt_max})
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

pub fn load_cdga(path: &Path) -> CliResult<CdgaFile> {
    Ok(parse_cdga(&read(path)?)?)
}

fn finish(command: &str, window: Window, mut report: Map<String, Value>, passed: bool) -> Outcome {
    report.insert("command".into(), json!(command));
    report.insert("window".into(), window.json());
    report.insert("verdict".into(), json!(if passed { "pass" } else { "fail" }));
    Outcome { report, passed }
}

fn weights(w_max: usize) -> Value {
    json!((1..=w_max).collect::<Vec<_>>())
}

pub fn validate(path: &Path, window: Window) -> CliResult<Outcome> {
    let a = load_cdga(path)?.cdga;
    let rep = a.validate(window.truncation()?);
    let report = json::object(vec![
        ("algebra", json!(a.name())),
        ("generators", json::generators(&a)),
        ("checks_run", json!(rep.checks_run)),
        ("witnesses", json::witnesses(&rep.failures)),
    ]);
    Ok(finish("validate", window, report, rep.passed()))
}

pub fn cohomology(path: &Path, window: Window) -> CliResult<Outcome> {
    let a = load_cdga(path)?.cdga;
    let rep = a.validate(window.truncation()?);
    let mut dims = BTreeMap::new();
    let mut reps = Map::new();
    for n in 0..=window.deg_max {
        for r in 0..=window.wt_max as i64 {
            let s = a.cohomology_slice(n, r);
            if s.dim > 0 {
                let classes = s.representatives.iter().map(|e| json::element(&a, e)).collect();
                reps.insert(format!("{n},{r}"), Value::Array(classes));
            }
            dims.insert((n, r), s.dim);
        }
    }
    let report = json::object(vec![
        ("algebra", json!(a.name())),
        ("generators", json::generators(&a)),
        ("dims", json::table(&dims)),
        ("representatives", Value::Object(reps)),
        ("witnesses", json::witnesses(&rep.failures)),
    ]);
    Ok(finish("cohomology", window, report, rep.passed()))
}

pub fn bar_h0(path: &Path, window: Window) -> CliResult<Outcome> {
    let a = load_cdga(path)?.cdga;
    let hp = bar::h0_hopf(&a, window.wt_max)?;
    let basis: Map<String, Value> = hp
        .weights
        .iter()
        .skip(1)
        .map(|h| {
            let chains = (0..h.dim()).map(|i| json!(bar::fmt_chain(&a, &h.representative(i)))).collect();
            (h.weight.to_string(), Value::Array(chains))
        })
        .collect();
    let product: Map<String, Value> =
        hp.product.iter().map(|((x, y), v)| (format!("{}*{}", json::basis_ref(x), json::basis_ref(y)), json::vector(v))).collect();
    let coproduct: Map<String, Value> = hp.coproduct.iter().map(|(x, t)| (json::basis_ref(x), json::pair_tensor(t))).collect();
    let antipode: Map<String, Value> = hp.antipode.iter().map(|(x, v)| (json::basis_ref(x), json::vector(v))).collect();
    let witnesses = hp.all_witnesses();
    let report = json::object(vec![
        ("algebra", json!(a.name())),
        ("weights", weights(window.wt_max)),
        ("dims", json!(json::positive(&hp.dims()))),
        ("basis", Value::Object(basis)),
        ("product", Value::Object(product)),
        ("coproduct", Value::Object(coproduct)),
        ("antipode", Value::Object(antipode)),
        ("witnesses", json::witnesses(&witnesses)),
    ]);
    Ok(finish("bar-h0", window, report, witnesses.is_empty()))
}

pub fn colie(path: &Path, window: Window) -> CliResult<Outcome> {
    let a = load_cdga(path)?.cdga;
    let g = bar::gamma(&a, window.wt_max)?;
    let cobracket: Map<String, Value> = g.colie.cobracket.iter().map(|(x, t)| (json::basis_ref(x), json::pair_tensor(t))).collect();
    let witnesses = g.colie.all_witnesses();
    let report = json::object(vec![
        ("algebra", json!(a.name())),
        ("weights", weights(window.wt_max)),
        ("dims", json!(json::positive(&g.colie.dims))),
        ("labels", json!(g.colie.labels.iter().skip(1).collect::<Vec<_>>())),
        ("cobracket", Value::Object(cobracket)),
        ("witnesses", json::witnesses(&witnesses)),
    ]);
    Ok(finish("colie", window, report, witnesses.is_empty()))
}

fn model_report(r: &MinimalModelResult) -> Map<String, Value> {
    let stages = r
        .stages
        .iter()
        .map(|s| {
            json!({
                "weight": s.weight,
                "degree": s.degree,
                "iterations": s.iterations,
                "adjoined": s.adjoined,
                "classes_killed": s.classes_killed,
            })
        })
        .collect();
    let slices = r
        .certificate
        .slices
        .iter()
        .map(|s| {
            json!({
                "degree": s.degree,
                "weight": s.weight,
                "model_dim": s.model_dim,
                "target_dim": s.target_dim,
                "induced_rank": s.induced_rank,
                "requirement": s.requirement,
                "ok": s.ok,
            })
        })
        .collect();
    let names = |layer: &Vec<usize>| layer.iter().map(|&g| r.model.generators()[g].name.clone()).collect::<Vec<_>>();
    json::object(vec![
        ("model", json!(r.model.name())),
        ("n", json!(r.n)),
        ("base_generators", json!(r.base_len)),
        ("generators", json::generators(&r.model)),
        ("stages", Value::Array(stages)),
        ("certificate", Value::Array(slices)),
        ("filtration", json!(r.filtration.filtration.iter().map(names).collect::<Vec<_>>())),
        ("witnesses", json::witnesses(&r.certificate.chain_map_failures)),
    ])
}

pub fn minimal_model_cmd(path: &Path, base: Option<&Path>, n: usize, window: Window) -> CliResult<Outcome> {
    let target = load_cdga(path)?.cdga;
    let result = match base {
        None => minimal_model(&target, n, window.wt_max)?,
        Some(b) => {
            let base = load_cdga(b)?.cdga;
            let images = base_images(&base, &target)?;
            relative_minimal_model(&base, &target, &images, n, window.wt_max)?
        }
    };
    let mut report = model_report(&result);
    let images: Vec<Value> = result.structure_map.iter().map(|e| json::element(&target, e)).collect();
    report.insert("structure_map".into(), Value::Array(images));
    report.insert("algebra".into(), json!(target.name()));
    Ok(finish("minimal-model", window, report, result.certificate.passed()))
}

/// Images of the base generators in `target`, matched by name and bidegree.
fn base_images(base: &Cdga, target: &Cdga) -> CliResult<Vec<Element>> {
    base.generators()
        .iter()
        .map(|g| match target.find(&g.name) {
            Some(t) if target.generator_bidegree(t) == g.bidegree => Ok(Element::generator(t)),
            _ => Err(adams_bar_core::Error::input(format!("base generator `{}` is not declared identically in {}", g.name, target.name())).into()),
        })
        .collect()
}

pub fn quillen(path: &Path, window: Window) -> CliResult<Outcome> {
    let a = load_cdga(path)?.cdga;
    let q = quillen_compare(&a, window.wt_max)?;
    let psi: Vec<Value> = q.psi.iter().skip(1).map(|m| Value::Array(m.columns().iter().map(json::vector).collect())).collect();
    let report = json::object(vec![
        ("algebra", json!(a.name())),
        ("weights", weights(window.wt_max)),
        ("gamma_dims", json!(json::positive(&q.gamma_dims))),
        ("qa_dims", json!(json::positive(&q.qa_dims))),
        ("h0_dims", json!(json::positive(&q.h0_dims))),
        ("psi", Value::Array(psi)),
        ("witnesses", json::witnesses(&q.witnesses)),
    ]);
    Ok(finish("quillen", window, report, q.passed()))
}

fn load_pair(base: &Path, total: &Path) -> CliResult<AugmentedOverN> {
    Ok(AugmentedOverN::from_files(&load_cdga(base)?, &load_cdga(total)?)?)
}

fn coaction_json(x: &AugmentedOverN, fiber: &Cdga, m: &CoactionMatrix) -> Value {
    let name = |g: usize| fiber.generators()[g].name.clone();
    Value::Object(m.iter().map(|(&(e, f), v)| (format!("{},{}", name(e), name(f)), json::element(x.base(), v))).collect())
}

/// The semidirect product report shared by `kernel` and `coaction-check`.
pub fn relative_report(command: &str, base: &Path, total: &Path, window: Window) -> CliResult<Outcome> {
    let x = load_pair(base, total)?;
    let sd = relative::semidirect(&x, window.wt_max)?;
    let co = relative::coaction_check(&x, window.wt_max)?;
    let fiber = x.fiber();
    let cobracket: Map<String, Value> =
        co.cobracket.iter().map(|(&g, e)| (fiber.generators()[g].name.clone(), json::element(&fiber, e))).collect();
    let mut witnesses = sd.witnesses.clone();
    witnesses.extend(co.witnesses.iter().cloned());
    let report = json::object(vec![
        ("base", json!(x.base().name())),
        ("total", json!(x.total().name())),
        ("weights", weights(window.wt_max)),
        ("kernel_dims", json!(json::positive(&sd.kernel_dims))),
        ("base_dims", json!(json::positive(&sd.base_dims))),
        ("total_dims", json!(json::positive(&sd.total_dims))),
        ("predicted_dims", json!(json::positive(&sd.predicted_dims))),
        ("kernel_gamma", json!(json::positive(&sd.kernel_gamma))),
        ("kernel_generators", json!(sd.kernel_generators.iter().skip(1).collect::<Vec<_>>())),
        ("coaction_split", coaction_json(&x, &fiber, &co.split)),
        ("coaction_conn", coaction_json(&x, &fiber, &co.conn)),
        ("cobracket", Value::Object(cobracket)),
        ("witnesses", json::witnesses(&witnesses)),
    ]);
    let passed = if command == "kernel" { sd.passed() } else { co.passed() };
    Ok(finish(command, window, report, passed))
}

pub fn delta_approx(path: &Path, base: Option<&Path>, n: usize, window: Window) -> CliResult<Outcome> {
    let a = match base {
        None => load_cdga(path)?.cdga,
        Some(b) => load_pair(b, path)?.fiber(),
    };
    let w = window.wt_max;
    let st = relative::delta_stabilization(&a, n, w)?;
    let top = relative::delta_approximation(&a, n, w)?;
    let mut stable = true;
    for m in 0..=n {
        for v in 1..=w.min(m) {
            stable &= st.dims[m][v] == st.full[v] && st.truncated[m][v] == st.full[v];
        }
    }
    let rows = |t: &Vec<Vec<usize>>| t.iter().map(|r| json::positive(r)).collect::<Vec<_>>();
    let report = json::object(vec![
        ("algebra", json!(a.name())),
        ("n", json!(n)),
        ("weights", weights(w)),
        ("dims", json!(rows(&st.dims))),
        ("truncated", json!(rows(&st.truncated))),
        ("full", json!(json::positive(&st.full))),
        ("stable_from", json!(st.stable_from.iter().skip(1).collect::<Vec<_>>())),
        ("comparison_ranks", json!(json::positive(&top.comparison_ranks))),
        ("witnesses", json::witnesses(&st.witnesses)),
    ]);
    Ok(finish("delta-approx", window, report, stable && st.witnesses.is_empty()))
}

pub fn pi1_demo(punctures: usize, window: Window) -> CliResult<Outcome> {
    let d = relative::pi1_demo(punctures, window.wt_max)?;
    let report = json::object(vec![
        ("punctures", json!(punctures)),
        ("algebra", json!(d.algebra.name())),
        ("weights", weights(window.wt_max)),
        ("gamma_dims", json!(json::positive(&d.gamma_dims))),
        ("lyndon_dims", json!(json::positive(&d.lyndon_dims))),
        ("hopf_dims", json!(json::positive(&d.hopf_dims))),
        ("note", json!(d.note)),
        ("witnesses", json::witnesses(&d.witnesses)),
    ]);
    Ok(finish("pi1-demo", window, report, d.passed()))
}

pub fn module(path: &Path, over: &Path, window: Window) -> CliResult<Outcome> {
    let a = load_cdga(over)?.cdga;
    let file = parse_module(&read(path)?, &a)?;
    let m = CellModule::from_file(&file, &a)?;
    let cells: Vec<Value> = m
        .cells()
        .iter()
        .zip(m.stages())
        .map(|(c, s)| json!({"name": c.0, "deg": c.1.coh, "wt": c.1.adams, "stage": s}))
        .collect();
    let lo = m.cells().iter().map(|c| c.1.coh).min().unwrap_or(0);
    let wt_lo = m.cells().iter().map(|c| c.1.adams).min().unwrap_or(0);
    let mut dims = BTreeMap::new();
    for n in lo..=lo + window.deg_max {
        for r in wt_lo..=wt_lo + window.wt_max as i64 {
            dims.insert((n, r), m.cohomology_dim(n, r));
        }
    }
    let (_, graded) = m.is_finite_tate();
    let graded: Map<String, Value> = graded.iter().map(|(w, d)| (w.to_string(), json!(d))).collect();
    let witnesses = m.witnesses();
    let report = json::object(vec![
        ("module", json!(m.name)),
        ("algebra", json!(a.name())),
        ("cells", Value::Array(cells)),
        ("weights", json!(m.weights())),
        ("cohomology", json::table(&dims)),
        ("q_cohomology", json::table(&m.q_functor().cohomology())),
        ("in_heart", json!(m.in_heart())),
        ("graded_q_dims", Value::Object(graded)),
        ("witnesses", json::witnesses(&witnesses)),
    ]);
    Ok(finish("module", window, report, witnesses.is_empty()))
}
