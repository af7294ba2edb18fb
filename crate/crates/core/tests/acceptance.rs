//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any failure.

use std::time::{Duration, Instant};

use pencil_monodromy::alexander::{alexander_value, closed_form_generic_linear, LaurentPoly};
use pencil_monodromy::braid::{artin_images, FreeWord};
use pencil_monodromy::curve::{intersection_multiplicity_origin, torus_form_identity, CurveSpec};
use pencil_monodromy::group::{
    abelianization, expected_affine, expected_projective, projectivize, run_battery, scripted_reduction,
    AbelianInvariants, Battery,
};
use pencil_monodromy::monodromy::{
    compute_monodromy, derive_relations_numeric, derive_relations_symbolic, flex_redundancy_report, infinity_check,
    Monodromy,
};
use pencil_monodromy::numeric::TrackerConfig;

const CASES: [(usize, usize); 5] = [(2, 2), (3, 2), (4, 2), (4, 3), (5, 2)];
const SYMBOLIC_LIMIT: Duration = Duration::from_secs(5);
const NUMERIC_LIMIT_D10: Duration = Duration::from_secs(120);
const NUMERIC_LIMIT_D15: Duration = Duration::from_secs(600);

struct Numeric {
    p: usize,
    q: usize,
    monodromy: Monodromy,
    affine: Battery,
    projective: Battery,
    elapsed: Duration,
}

fn numeric(p: usize, q: usize, tracker: &TrackerConfig) -> Result<Numeric, String> {
    let start = Instant::now();
    let spec = CurveSpec::with_default_alphas(p, q).map_err(|e| e.to_string())?;
    let monodromy = compute_monodromy(&spec, tracker).map_err(|e| e.to_string())?;
    let rs = derive_relations_numeric(&monodromy);
    let affine = run_battery(&rs.presentation()).map_err(|e| e.to_string())?;
    let projective = run_battery(&rs.projective_presentation()).map_err(|e| e.to_string())?;
    Ok(Numeric {
        p,
        q,
        monodromy,
        affine,
        projective,
        elapsed: start.elapsed(),
    })
}

fn report(results: &mut Vec<bool>, n: usize, title: &str, failures: &[String]) {
    let ok = failures.is_empty();
    println!(
        "{} criterion {n:>2}: {title}{}",
        if ok { "PASS" } else { "FAIL" },
        if ok { String::new() } else { format!(" [{}]", failures.join("; ")) }
    );
    results.push(ok);
}

fn battery_mismatch(label: &str, got: &Battery, want: &Battery) -> Option<String> {
    let d = got.differences(want);
    (!d.is_empty()).then(|| format!("{label}: {}", d.join(", ")))
}

fn criterion_1() -> Vec<String> {
    let mut fails = Vec::new();
    for (p, q) in CASES {
        let start = Instant::now();
        let rs = derive_relations_symbolic(p, q);
        let out = match scripted_reduction(&rs, p, q) {
            Ok(o) => o,
            Err(e) => {
                fails.push(format!("({p},{q}) {e}"));
                continue;
            }
        };
        if !out.matches_expected || out.presentation.relator_classes() != expected_affine(p, q).relator_classes() {
            fails.push(format!("({p},{q}) reduced presentation differs"));
        }
        let w = out.presentation.index_of("w").expect("w survives") as i32 + 1;
        // each level product is w, so the product of all meridians is w^p
        let proj = projectivize(&out.presentation, &FreeWord(vec![w; p]));
        match (run_battery(&proj), run_battery(&expected_projective(p, q))) {
            (Ok(a), Ok(b)) => fails.extend(battery_mismatch(&format!("({p},{q}) projective"), &a, &b)),
            (Err(e), _) | (_, Err(e)) => fails.push(format!("({p},{q}) {e}")),
        }
        if start.elapsed() > SYMBOLIC_LIMIT {
            fails.push(format!("({p},{q}) took {:?}", start.elapsed()));
        }
    }
    fails
}

fn criterion_2(runs: &[Numeric]) -> Vec<String> {
    let mut fails = Vec::new();
    for r in runs {
        let ea = run_battery(&expected_affine(r.p, r.q)).unwrap();
        let ep = run_battery(&expected_projective(r.p, r.q)).unwrap();
        fails.extend(battery_mismatch(&format!("({},{}) affine", r.p, r.q), &r.affine, &ea));
        fails.extend(battery_mismatch(&format!("({},{}) projective", r.p, r.q), &r.projective, &ep));
        let limit = if r.p * r.q <= 10 { NUMERIC_LIMIT_D10 } else { NUMERIC_LIMIT_D15 };
        if r.elapsed > limit {
            fails.push(format!("({},{}) took {:?}", r.p, r.q, r.elapsed));
        }
    }
    fails
}

fn criterion_3(runs: &[Numeric]) -> Vec<String> {
    let mut fails = Vec::new();
    for r in runs {
        let rs = derive_relations_numeric(&r.monodromy);
        let a = abelianization(&rs.presentation()).unwrap();
        let pr = abelianization(&rs.projective_presentation()).unwrap();
        if a != (AbelianInvariants { rank: r.q, torsion: vec![] }) {
            fails.push(format!("({},{}) affine {a}", r.p, r.q));
        }
        if pr != (AbelianInvariants { rank: r.q - 1, torsion: vec![r.p as u64] }) {
            fails.push(format!("({},{}) projective {pr}", r.p, r.q));
        }
    }
    fails
}

fn criterion_4(runs: &[Numeric]) -> Vec<String> {
    let mut fails = Vec::new();
    for r in runs {
        let want = closed_form_generic_linear(r.p, r.q).unwrap();
        let num = alexander_value(&derive_relations_numeric(&r.monodromy).presentation()).unwrap();
        let sym = alexander_value(&derive_relations_symbolic(r.p, r.q).presentation()).unwrap();
        for (label, v) in [("numeric", num), ("symbolic", sym)] {
            if !v.polynomial().is_some_and(|d| d.equivalent(&want)) {
                fails.push(format!("({},{}) {label} {v} vs {want}", r.p, r.q));
            }
        }
    }
    let three_two = LaurentPoly::new(0, vec![-1, 1, -1, 1, -1, 1]);
    let got = closed_form_generic_linear(3, 2).unwrap();
    if got.normalized() != three_two.normalized() || got.to_string() != "t^5 - t^4 + t^3 - t^2 + t - 1" {
        fails.push(format!("(3,2) closed form {got}"));
    }
    fails
}

fn criterion_5(runs: &[Numeric]) -> Vec<String> {
    let mut fails = Vec::new();
    for r in runs {
        let d = (r.p * r.q) as i64;
        let c = infinity_check(&r.monodromy);
        if !c.passed || c.exponent_sum != d * (d - 1) {
            fails.push(format!("({},{}) {} sum {}", r.p, r.q, c.detail, c.exponent_sum));
        }
        let pinned = match (r.p, r.q) {
            (3, 2) => Some(30),
            (2, 2) => Some(12),
            _ => None,
        };
        if pinned.is_some_and(|s| s != c.exponent_sum) {
            fails.push(format!("({},{}) pinned sum {:?}", r.p, r.q, pinned));
        }
    }
    fails
}

fn criterion_6() -> Vec<String> {
    let mut fails = Vec::new();
    for (p, q) in CASES {
        let spec = CurveSpec::with_default_alphas(p, q).unwrap();
        for i in 0..q {
            for j in i + 1..q {
                match intersection_multiplicity_origin(&spec, i, j) {
                    Ok(m) if m == p * p => {}
                    Ok(m) => fails.push(format!("({p},{q}) pair {i},{j}: {m}")),
                    Err(e) => fails.push(format!("({p},{q}) pair {i},{j}: {e}")),
                }
            }
        }
    }
    fails
}

fn criterion_7() -> Vec<String> {
    let mut fails = Vec::new();
    for q in 2..=4usize {
        for p in 2..=5usize {
            let t = torus_form_identity(&CurveSpec::roots_of_unity(p, q).unwrap()).unwrap();
            let want = if (q - 1) % 2 == 0 { 1 } else { -1 };
            if !t.holds || t.c != want {
                fails.push(format!("({p},{q}) holds={} c={}", t.holds, t.c));
            }
        }
    }
    fails
}

fn criterion_8(runs: &[Numeric]) -> Vec<String> {
    let mut fails = Vec::new();
    for r in runs.iter().filter(|r| matches!((r.p, r.q), (3, 2) | (4, 2))) {
        match flex_redundancy_report(&r.monodromy) {
            Ok(f) if f.consistent_with_redundancy && f.full.battery == f.reduced.battery => {}
            Ok(f) => fails.push(format!("({},{}) {}", r.p, r.q, f.differences.join(", "))),
            Err(e) => fails.push(format!("({},{}) {e}", r.p, r.q)),
        }
    }
    fails
}

fn criterion_9() -> Vec<String> {
    let tracker = TrackerConfig::default();
    let invariants = |alphas: Vec<f64>| -> Result<_, String> {
        let spec = CurveSpec::new(3, 2, alphas).map_err(|e| e.to_string())?;
        let m = compute_monodromy(&spec, &tracker).map_err(|e| e.to_string())?;
        let rs = derive_relations_numeric(&m);
        let a = run_battery(&rs.presentation()).map_err(|e| e.to_string())?;
        let p = run_battery(&rs.projective_presentation()).map_err(|e| e.to_string())?;
        let d = alexander_value(&rs.presentation()).map_err(|e| e.to_string())?;
        Ok((a, p, d))
    };
    match (invariants(vec![2.0, 1.0]), invariants(vec![3.0, 1.0])) {
        (Ok(x), Ok(y)) => {
            let mut fails = Vec::new();
            fails.extend(battery_mismatch("affine", &x.0, &y.0));
            fails.extend(battery_mismatch("projective", &x.1, &y.1));
            let same = match (x.2.polynomial(), y.2.polynomial()) {
                (Some(a), Some(b)) => a.equivalent(b),
                _ => false,
            };
            if !same {
                fails.push(format!("alexander {} vs {}", x.2, y.2));
            }
            fails
        }
        (Err(e), _) | (_, Err(e)) => vec![e],
    }
}

fn criterion_10(runs: &[Numeric]) -> Vec<String> {
    let base = TrackerConfig::default();
    let mut fine = base.refined();
    fine.circle_pieces = base.circle_pieces * 2;
    let mut fails = Vec::new();
    for r in runs {
        let refined = match numeric(r.p, r.q, &fine) {
            Ok(x) => x,
            Err(e) => {
                fails.push(format!("({},{}) {e}", r.p, r.q));
                continue;
            }
        };
        fails.extend(battery_mismatch(&format!("({},{}) affine", r.p, r.q), &refined.affine, &r.affine));
        fails.extend(battery_mismatch(
            &format!("({},{}) projective", r.p, r.q),
            &refined.projective,
            &r.projective,
        ));
        let (a, b) = (infinity_check(&r.monodromy), infinity_check(&refined.monodromy));
        if a.passed != b.passed || a.exponent_sum != b.exponent_sum || a.omega_exponent != b.omega_exponent {
            fails.push(format!("({},{}) infinity check changed", r.p, r.q));
        }
        for (x, y) in r.monodromy.braids.iter().zip(&refined.monodromy.braids) {
            if artin_images(&x.braid) != artin_images(&y.braid) {
                fails.push(format!("({},{}) loop at {} acts differently", r.p, r.q, x.value.y));
            }
        }
    }
    fails
}

fn main() {
    let start = Instant::now();
    let tracker = TrackerConfig::default();
    let mut runs = Vec::new();
    let mut setup = Vec::new();
    for (p, q) in CASES {
        match numeric(p, q, &tracker) {
            Ok(r) => runs.push(r),
            Err(e) => setup.push(format!("({p},{q}) {e}")),
        }
    }
    let with_setup = |mut f: Vec<String>| {
        f.extend(setup.iter().cloned());
        f
    };

    let mut results = Vec::new();
    report(&mut results, 1, "symbolic reduction and projective battery, < 5 s each", &criterion_1());
    report(&mut results, 2, "numeric batteries equal expected, affine and projective", &with_setup(criterion_2(&runs)));
    report(&mut results, 3, "abelianization targets", &with_setup(criterion_3(&runs)));
    report(&mut results, 4, "Alexander polynomial equals generic-linear closed form", &with_setup(criterion_4(&runs)));
    report(&mut results, 5, "monodromy at infinity, exponent sum d(d-1)", &with_setup(criterion_5(&runs)));
    report(&mut results, 6, "intersection multiplicity p^2 at the origin", &criterion_6());
    report(&mut results, 7, "torus form constant (-1)^(q-1), q <= 4", &criterion_7());
    report(&mut results, 8, "flex loops with k >= 1 add no relations", &with_setup(criterion_8(&runs)));
    report(&mut results, 9, "alpha independence at (3,2)", &criterion_9());
    report(&mut results, 10, "criteria 2 and 5 stable under refinement", &with_setup(criterion_10(&runs)));

    let passed = results.iter().filter(|&&ok| ok).count();
    println!("{passed}/{} criteria pass in {:.2} s", results.len(), start.elapsed().as_secs_f64());
    if passed != results.len() {
        std::process::exit(1);
    }
}
