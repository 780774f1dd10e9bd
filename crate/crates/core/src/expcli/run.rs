//! The five experiments.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, ExperimentKind};
use super::recipes::{set_1d, set_2d, PlanarSet};
use crate::dyadic::{audit_nonconcentration, audit_nonconcentration_2d, product};
use crate::energy::{cs_image_lower_bound, energy_count};
use crate::error::{Error, Result};
use crate::exactpoly::{BivariatePoly, Rational, Var};
use crate::geomtools::{triangle_area, triple_area_stats};
use crate::par::Exec;
use crate::project::{image_at_scale, ProjectionFamily};
use crate::web::{curvature_numerator, is_special_form, SpecialForm};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct E1Row {
    pub polynomial: String,
    pub classification: String,
    pub reason: String,
    pub numerator_terms: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct E2Row {
    pub pin_index: usize,
    pub pin_x: f64,
    pub pin_y: f64,
    pub triangle_area: f64,
    pub inner_count: usize,
    pub outer_count: usize,
    pub exponent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct E3Row {
    pub projection: String,
    pub inner_count: usize,
    pub outer_count: usize,
    pub exponent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct E4Row {
    pub polynomial: String,
    pub scale_k: u32,
    pub image_inner: usize,
    pub image_outer: usize,
    pub image_exponent: f64,
    pub energy: u64,
    pub energy_exponent: f64,
    pub epsilon_hat: f64,
    pub audit_a_ratio: f64,
    pub audit_b_ratio: f64,
    pub cs_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct E5Row {
    pub set: String,
    pub r: f64,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data")]
pub enum Rows {
    E1(Vec<E1Row>),
    E2(Vec<E2Row>),
    E3(Vec<E3Row>),
    E4(Vec<E4Row>),
    E5(Vec<E5Row>),
}

impl Rows {
    pub fn len(&self) -> usize {
        match self {
            Rows::E1(r) => r.len(),
            Rows::E2(r) => r.len(),
            Rows::E3(r) => r.len(),
            Rows::E4(r) => r.len(),
            Rows::E5(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub name: String,
    pub scale_k: u32,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub name: String,
    pub scale_k: u32,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub stage: String,
    pub millis: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: ExperimentKind,
    pub config: ExperimentConfig,
    pub rows: Rows,
    /// Measured quantities at `scale_k` and, with the ladder, `scale_k + 2`.
    pub metrics: Vec<Metric>,
    pub audits: Vec<AuditRecord>,
    /// Measured exponents against their benchmarks; nothing here is a proof.
    pub verdicts: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<Timing>>,
}

impl ExperimentReport {
    pub fn audits_passed(&self) -> bool {
        self.audits.iter().all(|a| a.passed)
    }

    pub fn metric(&self, name: &str, scale_k: u32) -> Option<f64> {
        self.metrics.iter().find(|m| m.name == name && m.scale_k == scale_k).map(|m| m.value)
    }
}

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    exec: Exec,
    metrics: Vec<Metric>,
    audits: Vec<AuditRecord>,
    verdicts: Vec<String>,
    timings: Vec<Timing>,
}

impl Ctx<'_> {
    fn metric(&mut self, name: impl Into<String>, scale_k: u32, value: f64) {
        self.metrics.push(Metric { name: name.into(), scale_k, value });
    }

    fn audit(&mut self, name: impl Into<String>, scale_k: u32, value: f64, threshold: f64, passed: bool, note: &str) {
        self.audits.push(AuditRecord {
            name: name.into(),
            scale_k,
            value,
            threshold,
            passed,
            note: note.into(),
        });
    }

    fn scales(&self) -> Vec<u32> {
        let k = self.cfg.scale_k;
        if self.cfg.ladder {
            vec![k, k + 2]
        } else {
            vec![k]
        }
    }

    fn timed<T>(&mut self, stage: String, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        let t = Instant::now();
        let out = f(self)?;
        self.timings.push(Timing { stage, millis: t.elapsed().as_secs_f64() * 1e3 });
        Ok(out)
    }

    fn drift(&mut self, name: &str) {
        let k = self.cfg.scale_k;
        let find = |s: u32| self.metrics.iter().find(|m| m.name == name && m.scale_k == s).map(|m| m.value);
        if let (Some(a), Some(b)) = (find(k), find(k + 2)) {
            self.metric(format!("drift_{name}"), k + 2, b - a);
        }
    }
}

fn parse_poly(s: &str) -> Result<BivariatePoly> {
    s.parse().map_err(|e| Error::Config(format!("polynomial `{s}`: {e}")))
}

/// Seeded composed instance `h(a(x) + b(y))` or `h(a(x) b(y))`.
pub fn random_composed(seed: u64, product_form: bool) -> BivariatePoly {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = || {
        let v: i64 = rng.gen_range(1..=5);
        Rational::from_int(if rng.gen_bool(0.5) { v } else { -v })
    };
    let a = &BivariatePoly::monomial(c(), 2, 0) + &BivariatePoly::monomial(c(), 1, 0);
    let b = &BivariatePoly::monomial(c(), 0, 3) + &BivariatePoly::monomial(c(), 0, 1);
    let inner = if product_form { &a * &b } else { &a + &b };
    inner.compose_into(&[Rational::zero(), c(), c()])
}

fn expand(cfg: &ExperimentConfig, entry: &str) -> Result<BivariatePoly> {
    match entry.trim() {
        "random-sum" => Ok(random_composed(cfg.seed, false)),
        "random-product" => Ok(random_composed(cfg.seed, true)),
        s => parse_poly(s),
    }
}

pub fn run_experiment(cfg: &ExperimentConfig, exec: Exec) -> Result<ExperimentReport> {
    cfg.validate()?;
    let mut ctx = Ctx { cfg, exec, metrics: vec![], audits: vec![], verdicts: vec![], timings: vec![] };
    let rows = match cfg.experiment {
        ExperimentKind::SpecialForm => e1(&mut ctx)?,
        ExperimentKind::PinnedTriple => e2(&mut ctx)?,
        ExperimentKind::FourProjections => e3(&mut ctx)?,
        ExperimentKind::EntropyGrowth => e4(&mut ctx)?,
        ExperimentKind::CurvedFlat => e5(&mut ctx)?,
    };
    Ok(ExperimentReport {
        experiment: cfg.experiment,
        config: cfg.clone(),
        rows,
        metrics: ctx.metrics,
        audits: ctx.audits,
        verdicts: ctx.verdicts,
        timings: cfg.timings.then_some(ctx.timings),
    })
}

fn e1(ctx: &mut Ctx) -> Result<Rows> {
    let mut rows = Vec::new();
    let mut special = 0;
    for entry in &ctx.cfg.polynomials {
        let p = expand(ctx.cfg, entry)?;
        let form = is_special_form(&p);
        let reason = match &form {
            SpecialForm::Special(r) => r.clone(),
            SpecialForm::NotSpecial => "curvature numerator is a nonzero polynomial".into(),
            SpecialForm::DegenerateSpecial(f) => {
                let mut parts = vec![];
                for (on, name) in [(f.px_zero, "P_x"), (f.py_zero, "P_y"), (f.pxy_zero, "P_xy")] {
                    if on {
                        parts.push(format!("{name} = 0"));
                    }
                }
                format!("identically {}", parts.join(" and "))
            }
        };
        special += form.is_special() as usize;
        rows.push(E1Row {
            polynomial: p.to_string(),
            classification: form.label().into(),
            reason,
            numerator_terms: curvature_numerator(&p).num_terms(),
        });
    }
    let k = ctx.cfg.scale_k;
    ctx.metric("special_count", k, special as f64);
    ctx.metric("not_special_count", k, (rows.len() - special) as f64);
    ctx.verdicts.push(format!("{special} of {} polynomials have identically vanishing curvature numerator", rows.len()));
    Ok(Rows::E1(rows))
}

fn coarse_audit_2d(ctx: &mut Ctx, x: &PlanarSet, k: u32) -> Result<()> {
    let coarse = x.set.coarsen(x.measure_k)?;
    let a = audit_nonconcentration_2d(&coarse, ctx.cfg.alpha, ctx.cfg.audit_threshold, ctx.exec);
    ctx.audit(
        "nonconcentration_X",
        k,
        a.worst_ratio,
        a.threshold,
        a.passed,
        "dyadic squares only; general balls are covered up to a factor 4",
    );
    Ok(())
}

fn e2(ctx: &mut Ctx) -> Result<Rows> {
    let cfg = ctx.cfg;
    let area = |t: &[(f64, f64)]| triangle_area(t[0], t[1], t[2]);
    let (col_area, tri_area) = (area(&cfg.collinear_pins), area(&cfg.triangle_pins));
    ctx.audit(
        "triangle_pins_area",
        cfg.scale_k,
        tri_area,
        cfg.area_threshold,
        tri_area >= cfg.area_threshold,
        "triangle triple must span area at least the threshold",
    );
    let mut rows = Vec::new();
    for k in ctx.scales() {
        let x = ctx.timed(format!("generate k={k}"), |_| set_2d(&cfg.set, k))?;
        coarse_audit_2d(ctx, &x, k)?;
        let mut exps = Vec::new();
        for (idx, &(px, py)) in cfg.collinear_pins.iter().chain(&cfg.triangle_pins).enumerate() {
            let fam = ProjectionFamily::pinned(px, py - x.y_shift, cfg.squared)?;
            let (_, est) = ctx.timed(format!("pin {idx} k={k}"), |c| image_at_scale(&fam, &x.set, x.measure_k, c.exec))?;
            let e = est.inner_exponent();
            exps.push(e);
            if k == cfg.scale_k {
                rows.push(E2Row {
                    pin_index: idx,
                    pin_x: px,
                    pin_y: py,
                    triangle_area: if idx < 3 { col_area } else { tri_area },
                    inner_count: est.inner_count,
                    outer_count: est.outer_count,
                    exponent: e,
                });
            }
        }
        let cmax = exps[..3].iter().copied().fold(0.0, f64::max);
        let tmax = exps[3..].iter().copied().fold(0.0, f64::max);
        ctx.metric("collinear_max_exponent", k, cmax);
        ctx.metric("triangle_max_exponent", k, tmax);
        ctx.metric("contrast", k, tmax - cmax);
        let min = |e: &[f64]| e.iter().copied().fold(f64::INFINITY, f64::min);
        ctx.metric("collinear_min_exponent", k, min(&exps[..3]));
        ctx.metric("triangle_min_exponent", k, min(&exps[3..]));
        if k == cfg.scale_k {
            ctx.verdicts.push(format!(
                "max pinned-distance exponent: collinear {cmax:.4}, triangle {tmax:.4} (benchmark alpha/2 = {:.4})",
                cfg.alpha / 2.0
            ));
        }
    }
    for m in ["collinear_max_exponent", "triangle_max_exponent"] {
        ctx.drift(m);
    }
    Ok(Rows::E2(rows))
}

fn e3(ctx: &mut Ctx) -> Result<Rows> {
    let cfg = ctx.cfg;
    let u = parse_poly(&cfg.u)?;
    let v = parse_poly(&cfg.v)?;
    let fourth = ProjectionFamily::additive(u.clone(), v.clone()).map_err(|e| Error::Config(e.to_string()))?;
    let nonzero = |p: &BivariatePoly| !p.is_zero();
    let hyp = nonzero(&u.partial(Var::X)) && nonzero(&v.partial(Var::Y)) && nonzero(&u.partial(Var::X).partial(Var::X));
    ctx.audit(
        "fourth_map_hypothesis",
        cfg.scale_k,
        hyp as u8 as f64,
        1.0,
        hyp,
        "u', v', u'' not identically zero (pointwise zeros on the domain are not excluded)",
    );
    let fams = [
        ("x".to_string(), ProjectionFamily::linear(1.0, 0.0)?),
        ("y".to_string(), ProjectionFamily::linear(0.0, 1.0)?),
        ("(x+y)/2".to_string(), ProjectionFamily::Graph(parse_poly("1/2*x + 1/2*y")?)),
        (format!("{u} + {v}").replace("+ -", "- "), fourth),
    ];
    let mut rows = Vec::new();
    for k in ctx.scales() {
        let x = set_2d(&cfg.set, k)?;
        coarse_audit_2d(ctx, &x, k)?;
        let mut exps = Vec::new();
        for (name, fam) in &fams {
            let (_, est) = ctx.timed(format!("{name} k={k}"), |c| image_at_scale(fam, &x.set, x.measure_k, c.exec))?;
            exps.push(est.inner_exponent());
            if k == cfg.scale_k {
                rows.push(E3Row {
                    projection: name.clone(),
                    inner_count: est.inner_count,
                    outer_count: est.outer_count,
                    exponent: est.inner_exponent(),
                });
            }
        }
        let lin = exps[..3].iter().copied().fold(0.0, f64::max);
        ctx.metric("max_linear_exponent", k, lin);
        ctx.metric("fourth_exponent", k, exps[3]);
        ctx.metric("max_exponent", k, lin.max(exps[3]));
        if k == cfg.scale_k {
            ctx.verdicts.push(format!(
                "image exponents: max over x, y, (x+y)/2 = {lin:.4}; u(x)+v(y) = {:.4} (benchmark alpha/2 = {:.4})",
                exps[3],
                cfg.alpha / 2.0
            ));
        }
    }
    for m in ["max_linear_exponent", "fourth_exponent"] {
        ctx.drift(m);
    }
    Ok(Rows::E3(rows))
}

fn e4(ctx: &mut Ctx) -> Result<Rows> {
    let cfg = ctx.cfg;
    let polys: Vec<BivariatePoly> = cfg.polynomials.iter().map(|s| expand(cfg, s)).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for k in ctx.scales() {
        let a = set_1d(&cfg.set_a, k)?;
        let b = set_1d(&cfg.set_b, k)?;
        let aa = audit_nonconcentration(&a, cfg.alpha, cfg.kappa, cfg.audit_threshold, ctx.exec);
        let ab = audit_nonconcentration(&b, cfg.alpha, cfg.kappa, cfg.audit_threshold, ctx.exec);
        let note = "dyadic windows only; general intervals are covered up to a factor 2";
        ctx.audit("nonconcentration_A", k, aa.worst_ratio, aa.threshold, aa.passed, note);
        ctx.audit("nonconcentration_B", k, ab.worst_ratio, ab.threshold, ab.passed, note);
        let e = product(&a, &b)?;
        let entropy = e.len() as u64;
        for p in &polys {
            let label = p.to_string();
            let fam = ProjectionFamily::Graph(p.clone());
            let (_, est) = ctx.timed(format!("image {label} k={k}"), |c| image_at_scale(&fam, &e, k, c.exec))?;
            let ec = ctx.timed(format!("energy {label} k={k}"), |c| energy_count(p, &e, cfg.tolerance_c, c.exec))?;
            let cs = cs_image_lower_bound(entropy, &ec, 1.0)?;
            let img = est.inner_exponent();
            ctx.metric(format!("image_exponent[{label}]"), k, img);
            ctx.metric(format!("energy_exponent[{label}]"), k, ec.normalized_exponent);
            // logged consistency of the Cauchy-Schwarz direction, constants unknown
            let ratio = est.inner_count as f64 * ec.quadruple_count as f64 / (entropy as f64).powi(2);
            ctx.metric(format!("cs_product_ratio[{label}]"), k, ratio);
            if k == cfg.scale_k {
                ctx.verdicts.push(format!(
                    "{label}: image exponent {img:.4} vs alpha = {:.4}; energy exponent {:.4} vs 3 alpha = {:.4}",
                    cfg.alpha,
                    ec.normalized_exponent,
                    3.0 * cfg.alpha
                ));
            }
            rows.push(E4Row {
                polynomial: label,
                scale_k: k,
                image_inner: est.inner_count,
                image_outer: est.outer_count,
                image_exponent: img,
                energy: ec.quadruple_count,
                energy_exponent: ec.normalized_exponent,
                epsilon_hat: img - cfg.alpha,
                audit_a_ratio: aa.worst_ratio,
                audit_b_ratio: ab.worst_ratio,
                cs_bound: cs.image_lower_bound,
            });
        }
    }
    for p in &polys {
        ctx.drift(&format!("image_exponent[{p}]"));
        ctx.drift(&format!("energy_exponent[{p}]"));
    }
    Ok(Rows::E4(rows))
}

fn e5(ctx: &mut Ctx) -> Result<Rows> {
    let cfg = ctx.cfg;
    let mut rows = Vec::new();
    for k in ctx.scales() {
        for recipe in &cfg.k_sets {
            let x = set_2d(recipe, k)?;
            let pts: Vec<(f64, f64)> = x.set.centers().collect();
            let stats = ctx.timed(format!("triples {recipe} k={k}"), |c| {
                triple_area_stats(&pts, cfg.samples, cfg.seed, &cfg.r_grid, c.exec)
            })?;
            if let Some(b) = stats.fitted_beta {
                ctx.metric(format!("beta[{recipe}]"), k, b);
            }
            ctx.metric(format!("flat[{recipe}]"), k, stats.flat as u8 as f64);
            if k == cfg.scale_k {
                ctx.verdicts.push(match stats.fitted_beta {
                    Some(b) => format!("{recipe}: fitted beta {b:.4}{}", if stats.flat { " (flat)" } else { "" }),
                    None => format!("{recipe}: no fit window"),
                });
                for (&r, &f) in stats.r_grid.iter().zip(&stats.empirical_fraction) {
                    rows.push(E5Row { set: recipe.clone(), r, fraction: f });
                }
            }
        }
    }
    for recipe in &cfg.k_sets {
        ctx.drift(&format!("beta[{recipe}]"));
    }
    Ok(Rows::E5(rows))
}
