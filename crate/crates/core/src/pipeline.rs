//! End-to-end run: curve, loops, braids, relations, presentations, battery,
//! Alexander polynomials, verdicts.

use std::io::Write;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::alexander::{
    alexander_value, closed_form_generic_linear, closed_form_tame_maximal, AlexanderValue, LaurentPoly,
};
use crate::braid::artin_images;
use crate::curve::{
    base_configuration, intersection_multiplicity_origin, singular_values, torus_form_identity, AlphaMode,
    CurveSpec, SingularValues, TorusIdentity,
};
use crate::error::{Error, Result, StageExt};
use crate::group::{
    abelianization, expected_affine, expected_projective, run_battery, scripted_reduction, AbelianInvariants,
    Battery, Presentation, ReductionOutcome,
};
use crate::monodromy::{
    braid_of_loop, build_loop_system, compute_braids, derive_relations_numeric, derive_relations_symbolic,
    flex_redundancy_report, infinity_check, origin_exponent_sum, FlexRedundancyReport, InfinityCheck, Monodromy,
};
use crate::numeric::{track_loop_observed, TrackerConfig};

pub const SCHEMA: &str = "pencil-monodromy/1";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    #[default]
    Table,
}

/// Optional stages; the numeric monodromy always runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stages {
    pub symbolic: bool,
    pub battery: bool,
    pub alexander: bool,
    pub exact: bool,
    pub flex: bool,
}

impl Default for Stages {
    fn default() -> Self {
        Stages {
            symbolic: true,
            battery: true,
            alexander: true,
            exact: true,
            flex: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub p: usize,
    pub q: usize,
    /// Defaults to `(q+1, q, ..., 2)`.
    pub alphas: Option<Vec<f64>>,
    pub tracker: TrackerConfig,
    pub format: OutputFormat,
    pub stages: Stages,
    /// Negative control: traverse the loop system in reverse order.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub debug_reverse_loops: bool,
}

impl RunConfig {
    pub fn new(p: usize, q: usize) -> Self {
        RunConfig {
            p,
            q,
            alphas: None,
            tracker: TrackerConfig::default(),
            format: OutputFormat::default(),
            stages: Stages::default(),
            debug_reverse_loops: false,
        }
    }

    pub fn spec(&self) -> Result<CurveSpec> {
        match &self.alphas {
            Some(a) => CurveSpec::new(self.p, self.q, a.clone()),
            None => CurveSpec::with_default_alphas(self.p, self.q),
        }
    }

    pub fn validate(&self) -> Result<CurveSpec> {
        let spec = self.spec()?;
        let t = &self.tracker;
        if !(t.residual_tol > 0.0 && t.residual_tol < 1e-2) {
            return Err(Error::Invalid(format!("tolerance {} outside (0, 1e-2)", t.residual_tol)));
        }
        if t.circle_pieces < 4 {
            return Err(Error::Invalid(format!("need at least 4 circle segments, got {}", t.circle_pieces)));
        }
        if !(t.step_ratio > 0.0 && t.step_ratio < 1.0 && t.max_step > 0.0) {
            return Err(Error::Invalid("step bounds must be positive and below 1".into()));
        }
        Ok(spec)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub status: Status,
    pub reason: String,
}

impl Verdict {
    fn new(name: &str, ok: bool, reason: impl Into<String>) -> Self {
        Verdict {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            reason: reason.into(),
        }
    }

    fn skipped(name: &str, reason: impl Into<String>) -> Self {
        Verdict {
            name: name.into(),
            status: Status::Skipped,
            reason: reason.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSummary {
    pub spec: CurveSpec,
    pub degree: usize,
    #[serde(with = "crate::numeric::path::complex_vec")]
    pub gammas: Vec<Complex64>,
    pub gamma0: f64,
    pub singular_values: SingularValues,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Presentations {
    pub numeric_affine: Presentation,
    pub numeric_projective: Presentation,
    pub symbolic_affine: Option<Presentation>,
    pub symbolic_projective: Option<Presentation>,
    pub expected_affine: Presentation,
    pub expected_projective: Presentation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Batteries {
    pub numeric_affine: Battery,
    pub numeric_projective: Battery,
    pub symbolic_affine: Option<Battery>,
    pub symbolic_projective: Option<Battery>,
    pub expected_affine: Battery,
    pub expected_projective: Battery,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlexanderSummary {
    pub numeric: AlexanderValue,
    pub symbolic: Option<AlexanderValue>,
    pub expected: AlexanderValue,
    pub generic_linear: LaurentPoly,
    /// Evaluator only; no curve here realizes it.
    pub tame_maximal: LaurentPoly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairMultiplicity {
    pub i: usize,
    pub j: usize,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactChecks {
    pub intersections: Vec<PairMultiplicity>,
    /// Evaluated on the roots-of-unity curve of the same type.
    pub torus: Option<TorusIdentity>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: String,
    pub config: RunConfig,
    pub curve: CurveSummary,
    pub monodromy: Monodromy,
    pub infinity: InfinityCheck,
    pub presentations: Presentations,
    pub abelianization: AbelianizationSummary,
    pub reduction: Option<ReductionOutcome>,
    pub batteries: Option<Batteries>,
    pub alexander: Option<AlexanderSummary>,
    pub exact: Option<ExactChecks>,
    pub flex: Option<FlexRedundancyReport>,
    pub verdicts: Vec<Verdict>,
    pub findings: Vec<String>,
    /// Not part of the reproducible content.
    pub timings: Vec<Timing>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbelianizationSummary {
    pub numeric_affine: AbelianInvariants,
    pub numeric_projective: AbelianInvariants,
}

impl RunReport {
    /// No verdict failed.
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.status != Status::Fail)
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    /// JSON without timings; identical configs give identical values.
    pub fn comparable_json(&self) -> Result<serde_json::Value> {
        let mut v = serde_json::to_value(self)?;
        if let Some(o) = v.as_object_mut() {
            o.remove("timings");
        }
        Ok(v)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let spec = &self.curve.spec;
        s.push_str(&format!(
            "curve p={} q={} alphas={:?} degree={}\n",
            spec.p, spec.q, spec.alphas, self.curve.degree
        ));
        s.push_str(&format!("base point gamma0 = {:.6}\n", self.curve.gamma0));
        s.push_str("loops:\n");
        for (n, b) in self.monodromy.braids.iter().enumerate() {
            let what = match b.value.component {
                None => "origin".to_string(),
                Some(j) => format!("flex j={} k={}", j + 1, b.value.k),
            };
            s.push_str(&format!(
                "  {n:>2} y={:+.6}{:+.6}i {what:<14} letters={:<4} exp={:<4} cycles={:?}\n",
                b.value.y.re,
                b.value.y.im,
                b.braid.len(),
                b.braid.exponent_sum(),
                b.permutation.cycle_type()
            ));
        }
        s.push_str(&format!(
            "composed exponent sum {} (expected {}), w exponent {:?}\n",
            self.infinity.exponent_sum, self.infinity.expected_exponent_sum, self.infinity.omega_exponent
        ));
        let pr = &self.presentations;
        s.push_str(&format!(
            "numeric presentation: {} generators, {} relators, length {}\n",
            pr.numeric_affine.generator_count(),
            pr.numeric_affine.relators.len(),
            pr.numeric_affine.total_length()
        ));
        s.push_str(&format!(
            "abelianization: affine {}, projective {}\n",
            self.abelianization.numeric_affine, self.abelianization.numeric_projective
        ));
        if let Some(b) = &self.batteries {
            let counts: Vec<String> = b
                .numeric_projective
                .hom_counts
                .iter()
                .map(|h| format!("{}:{}", h.group, h.count))
                .collect();
            s.push_str(&format!("projective hom counts: {}\n", counts.join(" ")));
        }
        if let Some(a) = &self.alexander {
            s.push_str(&format!("alexander (numeric): {}\n", a.numeric));
            s.push_str(&format!("generic-linear formula: {}\n", a.generic_linear));
        }
        s.push_str("verdicts:\n");
        for v in &self.verdicts {
            let tag = match v.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            s.push_str(&format!("  {tag} {:<28} {}\n", v.name, v.reason));
        }
        for f in &self.findings {
            s.push_str(&format!("finding: {f}\n"));
        }
        let total: f64 = self.timings.iter().map(|t| t.seconds).sum();
        s.push_str(&format!("wall time {total:.3} s\n"));
        s
    }
}

struct Clock {
    timings: Vec<Timing>,
    last: Instant,
}

impl Clock {
    fn new() -> Self {
        Clock {
            timings: Vec::new(),
            last: Instant::now(),
        }
    }

    fn lap(&mut self, stage: &str) {
        let now = Instant::now();
        self.timings.push(Timing {
            stage: stage.into(),
            seconds: (now - self.last).as_secs_f64(),
        });
        self.last = now;
    }
}

fn battery_verdict(name: &str, got: &Result<Battery>, want: &Result<Battery>) -> Verdict {
    match (got, want) {
        (Ok(g), Ok(w)) => {
            let d = g.differences(w);
            Verdict::new(name, d.is_empty(), if d.is_empty() { "all invariants agree".into() } else { d.join("; ") })
        }
        (Err(e @ Error::BudgetExceeded(_)), _) | (_, Err(e @ Error::BudgetExceeded(_))) => {
            Verdict::skipped(name, e.to_string())
        }
        (Err(e), _) | (_, Err(e)) => Verdict::new(name, false, e.to_string()),
    }
}

fn alexander_verdict(name: &str, got: &AlexanderValue, want: &LaurentPoly) -> Verdict {
    match got.polynomial() {
        Some(p) if p.equivalent(want) => Verdict::new(name, true, format!("{p}")),
        _ => Verdict::new(name, false, format!("got {got}, formula gives {want}")),
    }
}

pub fn run_pipeline(cfg: &RunConfig) -> Result<RunReport> {
    let spec = cfg.validate().stage("config")?;
    let (p, q) = (spec.p, spec.q);
    let mut clock = Clock::new();
    let mut verdicts = Vec::new();
    let mut findings = Vec::new();

    let sv = singular_values(&spec).stage("curve")?;
    let base = base_configuration(&spec).stage("curve")?;
    let curve = CurveSummary {
        spec: spec.clone(),
        degree: spec.degree(),
        gammas: spec.gammas(),
        gamma0: base.gamma0,
        singular_values: sv.clone(),
    };
    clock.lap("curve");

    let mut system = build_loop_system(&sv, Complex64::new(base.gamma0, 0.0)).stage("loops")?;
    if cfg.debug_reverse_loops {
        system.loops.reverse();
    }
    clock.lap("loops");

    let base_roots = base.roots(p);
    let monodromy = compute_braids(&spec, base_roots.clone(), system, &cfg.tracker)?;
    clock.lap("braids");

    let infinity = infinity_check(&monodromy);
    verdicts.push(Verdict::new(
        "infinity-check",
        infinity.passed,
        if infinity.passed {
            format!(
                "conjugation by w^{}, exponent sum {}",
                infinity.omega_exponent.unwrap_or(0),
                infinity.exponent_sum
            )
        } else {
            infinity.detail.clone()
        },
    ));
    let big = braid_of_loop(&spec.family(), &base_roots, &monodromy.system.big_circle, &cfg.tracker)
        .stage("big circle")?
        .0;
    let same_action = artin_images(&big) == artin_images(&monodromy.composed_braid());
    verdicts.push(Verdict::new(
        "big-circle-consistency",
        same_action,
        if same_action {
            "loop around all singular values acts like the composed braid".to_string()
        } else {
            "big-circle braid acts differently from the composed loop braids".to_string()
        },
    ));
    let origin_expected = origin_exponent_sum(p, q);
    let mut bad = Vec::new();
    for b in &monodromy.braids {
        let want = if b.value.is_origin() { origin_expected } else { p as i64 - 1 };
        if b.braid.exponent_sum() != want {
            bad.push(format!("y={:.4}: {} (want {want})", b.value.y, b.braid.exponent_sum()));
        }
    }
    verdicts.push(Verdict::new(
        "loop-exponent-sums",
        bad.is_empty(),
        if bad.is_empty() {
            format!("origin {origin_expected}, each flex {}", p - 1)
        } else {
            bad.join("; ")
        },
    ));
    clock.lap("infinity");

    let numeric = derive_relations_numeric(&monodromy);
    let numeric_affine = numeric.presentation();
    let numeric_projective = numeric.projective_presentation();
    let symbolic = cfg.stages.symbolic.then(|| derive_relations_symbolic(p, q));
    let presentations = Presentations {
        numeric_affine: numeric_affine.clone(),
        numeric_projective: numeric_projective.clone(),
        symbolic_affine: symbolic.as_ref().map(|s| s.presentation()),
        symbolic_projective: symbolic.as_ref().map(|s| s.projective_presentation()),
        expected_affine: expected_affine(p, q),
        expected_projective: expected_projective(p, q),
    };
    clock.lap("relations");

    let abelianization = AbelianizationSummary {
        numeric_affine: abelianization(&numeric_affine).stage("abelianization")?,
        numeric_projective: abelianization(&numeric_projective).stage("abelianization")?,
    };
    let ab_ok = abelianization.numeric_affine == AbelianInvariants { rank: q, torsion: vec![] }
        && abelianization.numeric_projective
            == AbelianInvariants {
                rank: q - 1,
                torsion: vec![p as u64],
            };
    verdicts.push(Verdict::new(
        "abelianization-targets",
        ab_ok,
        format!(
            "affine {}, projective {}",
            abelianization.numeric_affine, abelianization.numeric_projective
        ),
    ));

    let reduction = match &symbolic {
        Some(rs) => match scripted_reduction(rs, p, q) {
            Ok(out) => {
                verdicts.push(Verdict::new(
                    "scripted-reduction",
                    out.matches_expected && !out.wraparound_used,
                    format!("{} steps, result {}", out.log.len(), out.presentation),
                ));
                findings.extend(out.findings.iter().cloned());
                Some(out)
            }
            Err(e) => {
                verdicts.push(Verdict::new("scripted-reduction", false, e.to_string()));
                None
            }
        },
        None => {
            verdicts.push(Verdict::skipped("scripted-reduction", "symbolic stage disabled"));
            None
        }
    };
    clock.lap("reduction");

    let batteries = if cfg.stages.battery {
        let na = run_battery(&numeric_affine);
        let np = run_battery(&numeric_projective);
        let ea = run_battery(&presentations.expected_affine);
        let ep = run_battery(&presentations.expected_projective);
        verdicts.push(battery_verdict("battery-numeric-affine", &na, &ea));
        verdicts.push(battery_verdict("battery-numeric-projective", &np, &ep));
        let (sa, sp) = match (&presentations.symbolic_affine, &presentations.symbolic_projective) {
            (Some(a), Some(pp)) => {
                let sa = run_battery(a);
                let sp = run_battery(pp);
                verdicts.push(battery_verdict("battery-symbolic-affine", &sa, &ea));
                verdicts.push(battery_verdict("battery-symbolic-projective", &sp, &ep));
                (sa.ok(), sp.ok())
            }
            _ => {
                verdicts.push(Verdict::skipped("battery-symbolic-affine", "symbolic stage disabled"));
                verdicts.push(Verdict::skipped("battery-symbolic-projective", "symbolic stage disabled"));
                (None, None)
            }
        };
        match (na, np, ea, ep) {
            (Ok(na), Ok(np), Ok(ea), Ok(ep)) => Some(Batteries {
                numeric_affine: na,
                numeric_projective: np,
                symbolic_affine: sa,
                symbolic_projective: sp,
                expected_affine: ea,
                expected_projective: ep,
            }),
            _ => None,
        }
    } else {
        for name in [
            "battery-numeric-affine",
            "battery-numeric-projective",
            "battery-symbolic-affine",
            "battery-symbolic-projective",
        ] {
            verdicts.push(Verdict::skipped(name, "battery stage disabled"));
        }
        None
    };
    clock.lap("battery");

    let alexander = if cfg.stages.alexander {
        let generic = closed_form_generic_linear(p, q).stage("alexander")?;
        let tame = closed_form_tame_maximal(p, q).stage("alexander")?;
        let numeric_d = alexander_value(&numeric_affine).stage("alexander")?;
        let symbolic_d = match &presentations.symbolic_affine {
            Some(s) => Some(alexander_value(s).stage("alexander")?),
            None => None,
        };
        let expected_d = alexander_value(&presentations.expected_affine).stage("alexander")?;
        verdicts.push(alexander_verdict("alexander-numeric", &numeric_d, &generic));
        match &symbolic_d {
            Some(d) => verdicts.push(alexander_verdict("alexander-symbolic", d, &generic)),
            None => verdicts.push(Verdict::skipped("alexander-symbolic", "symbolic stage disabled")),
        }
        verdicts.push(alexander_verdict("alexander-expected", &expected_d, &generic));
        Some(AlexanderSummary {
            numeric: numeric_d,
            symbolic: symbolic_d,
            expected: expected_d,
            generic_linear: generic,
            tame_maximal: tame,
        })
    } else {
        for name in ["alexander-numeric", "alexander-symbolic", "alexander-expected"] {
            verdicts.push(Verdict::skipped(name, "alexander stage disabled"));
        }
        None
    };
    clock.lap("alexander");

    let exact = if cfg.stages.exact {
        let mut intersections = Vec::new();
        let mut inter_err = None;
        'pairs: for i in 0..q {
            for j in i + 1..q {
                match intersection_multiplicity_origin(&spec, i, j) {
                    Ok(m) => intersections.push(PairMultiplicity { i, j, multiplicity: m }),
                    Err(e) => {
                        inter_err = Some(e);
                        break 'pairs;
                    }
                }
            }
        }
        match inter_err {
            Some(e @ Error::ExactArithmeticOverflow(_)) => {
                verdicts.push(Verdict::skipped("intersection-multiplicity", e.to_string()))
            }
            Some(e) => verdicts.push(Verdict::new("intersection-multiplicity", false, e.to_string())),
            None => {
                let ok = intersections.iter().all(|m| m.multiplicity == p * p);
                verdicts.push(Verdict::new(
                    "intersection-multiplicity",
                    ok,
                    format!("{} pairs, expected p^2 = {}", intersections.len(), p * p),
                ));
            }
        }
        let torus = CurveSpec::roots_of_unity(p, q).and_then(|s| torus_form_identity(&s));
        let torus = match torus {
            Ok(t) => {
                let want = if (q - 1) % 2 == 0 { 1 } else { -1 };
                verdicts.push(Verdict::new(
                    "torus-form",
                    t.holds && t.c == want,
                    format!("c = {} by {}", t.c, t.method),
                ));
                Some(t)
            }
            Err(e) => {
                verdicts.push(Verdict::new("torus-form", false, e.to_string()));
                None
            }
        };
        Some(ExactChecks { intersections, torus })
    } else {
        verdicts.push(Verdict::skipped("intersection-multiplicity", "exact stage disabled"));
        verdicts.push(Verdict::skipped("torus-form", "exact stage disabled"));
        None
    };
    clock.lap("exact");

    let flex = if cfg.stages.flex && spec.mode == AlphaMode::RealDescending {
        match flex_redundancy_report(&monodromy) {
            Ok(r) => {
                verdicts.push(Verdict::new(
                    "flex-redundancy",
                    r.consistent_with_redundancy && r.controls_discriminate,
                    if r.consistent_with_redundancy {
                        format!("{} of {} loops give the same invariants", r.loops_reduced, r.loops_all)
                    } else {
                        r.differences.join("; ")
                    },
                ));
                Some(r)
            }
            Err(e @ Error::BudgetExceeded(_)) => {
                verdicts.push(Verdict::skipped("flex-redundancy", e.to_string()));
                None
            }
            Err(e) => {
                verdicts.push(Verdict::new("flex-redundancy", false, e.to_string()));
                None
            }
        }
    } else {
        verdicts.push(Verdict::skipped("flex-redundancy", "flex stage disabled"));
        None
    };
    clock.lap("flex");

    Ok(RunReport {
        schema: SCHEMA.into(),
        config: cfg.clone(),
        curve,
        monodromy,
        infinity,
        presentations,
        abelianization,
        reduction,
        batteries,
        alexander,
        exact,
        flex,
        verdicts,
        findings,
        timings: clock.timings,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub runs: Vec<RunReport>,
    pub wall_seconds: f64,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.runs.iter().all(RunReport::passed)
    }

    pub fn summary_table(&self) -> String {
        let mut s = format!("{:<8} {:>5} {:>5} {:>5} {:>9}  failing\n", "(p,q)", "pass", "fail", "skip", "seconds");
        for r in &self.runs {
            let count = |st: Status| r.verdicts.iter().filter(|v| v.status == st).count();
            let failing: Vec<&str> = r
                .verdicts
                .iter()
                .filter(|v| v.status == Status::Fail)
                .map(|v| v.name.as_str())
                .collect();
            let secs: f64 = r.timings.iter().map(|t| t.seconds).sum();
            s.push_str(&format!(
                "{:<8} {:>5} {:>5} {:>5} {:>9.3}  {}\n",
                format!("({},{})", r.config.p, r.config.q),
                count(Status::Pass),
                count(Status::Fail),
                count(Status::Skipped),
                secs,
                failing.join(",")
            ));
        }
        s.push_str(&format!(
            "{} curves, {}, wall time {:.3} s\n",
            self.runs.len(),
            if self.passed() { "all pass" } else { "FAILURES" },
            self.wall_seconds
        ));
        s
    }
}

/// The acceptance types with default parameters; `quick` keeps the first two.
pub fn selftest(quick: bool, inject_bad_order: bool) -> Result<SelftestReport> {
    let start = Instant::now();
    let cases: &[(usize, usize)] = if quick {
        &[(2, 2), (3, 2)]
    } else {
        &[(2, 2), (3, 2), (4, 2), (4, 3)]
    };
    let mut runs = Vec::new();
    for &(p, q) in cases {
        let mut cfg = RunConfig::new(p, q);
        cfg.debug_reverse_loops = inject_bad_order;
        runs.push(run_pipeline(&cfg)?);
    }
    Ok(SelftestReport {
        runs,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Strand positions along every loop, one CSV row per accepted step:
/// `loop,arclength,y_re,y_im,x1_re,x1_im,...` with strands in base-root order.
pub fn write_strand_csv(spec: &CurveSpec, tracker: &TrackerConfig, out: &mut dyn Write) -> Result<()> {
    let sv = singular_values(spec).stage("curve")?;
    let base = base_configuration(spec).stage("curve")?;
    let roots = base.roots(spec.p);
    let system = build_loop_system(&sv, Complex64::new(base.gamma0, 0.0)).stage("loops")?;
    let family = spec.family();
    let mut header = vec!["loop".to_string(), "arclength".into(), "y_re".into(), "y_im".into()];
    for k in 1..=roots.len() {
        header.push(format!("x{k}_re"));
        header.push(format!("x{k}_im"));
    }
    writeln!(out, "{}", header.join(","))?;
    for (n, l) in system.loops.iter().enumerate() {
        let mut rows: Vec<String> = Vec::new();
        track_loop_observed(&family, &l.path, &roots, tracker, &mut |s, y, xs| {
            let mut row = format!("{n},{s:.9},{:.12},{:.12}", y.re, y.im);
            for x in xs {
                row.push_str(&format!(",{:.12},{:.12}", x.re, x.im));
            }
            rows.push(row);
        })
        .stage("braids")?;
        for r in rows {
            writeln!(out, "{r}")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        let mut c = RunConfig::new(3, 2);
        assert!(c.validate().is_ok());
        c.tracker.circle_pieces = 2;
        assert!(c.validate().is_err());
        let mut c = RunConfig::new(3, 2);
        c.alphas = Some(vec![1.0, 2.0]);
        assert!(matches!(c.validate(), Err(Error::Invalid(_))));
    }

    #[test]
    fn reverse_order_fails_infinity_check() {
        let mut c = RunConfig::new(3, 2);
        c.stages = Stages {
            symbolic: false,
            battery: false,
            alexander: false,
            exact: false,
            flex: false,
        };
        c.debug_reverse_loops = true;
        let r = run_pipeline(&c).unwrap();
        assert_eq!(r.verdict("infinity-check").unwrap().status, Status::Fail);
        assert!(!r.passed());
    }
}
