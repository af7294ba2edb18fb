use pencil_monodromy::curve::CurveSpec;
use pencil_monodromy::monodromy::{compute_monodromy, flex_redundancy_report, infinity_check};
use pencil_monodromy::numeric::TrackerConfig;

#[test]
fn dropping_any_single_loop_breaks_the_infinity_check() {
    for (p, q) in [(2usize, 2usize), (3, 2)] {
        let spec = CurveSpec::with_default_alphas(p, q).unwrap();
        let m = compute_monodromy(&spec, &TrackerConfig::default()).unwrap();
        assert!(infinity_check(&m).passed);
        for drop in 0..m.braids.len() {
            let y = m.braids[drop].value.y;
            let sub = m.filtered(|v| v.y != y);
            assert_eq!(sub.braids.len(), m.braids.len() - 1);
            assert!(!infinity_check(&sub).passed, "({p},{q}) without loop {drop}");
        }
    }
}

#[test]
fn flex_report_controls() {
    for (p, q) in [(2usize, 2usize), (3, 2), (4, 2)] {
        let spec = CurveSpec::with_default_alphas(p, q).unwrap();
        let m = compute_monodromy(&spec, &TrackerConfig::default()).unwrap();
        let r = flex_redundancy_report(&m).unwrap();
        assert!(r.consistent_with_redundancy, "({p},{q}) {:?}", r.differences);
        assert_eq!(r.loops_reduced, 1 + q);
        let names: Vec<&str> = r.controls.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["drop all flex loops", "drop origin loop", "drop gamma_1 loop"]);
        assert!(r.controls[0].changed && r.controls[1].changed);
        // the single gamma_1 loop is implied by the remaining ones
        assert!(!r.controls[2].changed, "({p},{q}) {:?}", r.controls[2].differences);
        assert!(r.controls_discriminate);
    }
}
